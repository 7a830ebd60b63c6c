//! Automorphisms, fixed points, orbits on `A^k` and the subset-sum bound they give.

use pspec::{automorphism_group, builtin_algebra, orbit_bound_at, orbit_partition, BuiltinSpec};

fn main() -> pspec::Result<()> {
    for n in [3, 4, 6] {
        let m = builtin_algebra(&BuiltinSpec::parse(&format!("m_n:{n}"))?)?;
        let g = automorphism_group(&m)?;
        let orbits = orbit_partition(&g, 2)?;
        println!("M_{n}: |Aut| = {}, fixed {:?}", g.order(), g.fixed_points());
        println!("  orbit sizes on pairs: {:?}", orbits.sorted_sizes());
        let bound = orbit_bound_at(&m, 2)?;
        println!("  {} reachable fractions over {}", bound.len(), orbits.total);
    }
    Ok(())
}
