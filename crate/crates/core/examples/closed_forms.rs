//! Closed-form values next to the brute-force numbers they predict.

use pspec::oracles::{c2_phi_brute, s3_power_prob_brute};
use pspec::{c2_phi, closed_form, s3_power_prob, BoundKind};

fn main() -> pspec::Result<()> {
    for (p, q, r) in [(1, 1, 0), (1, 1, 1), (2, 3, 1), (3, 3, 3)] {
        println!("φ({p},{q},{r}) = {} brute {}", c2_phi(p, q, r), c2_phi_brute(p as usize, q as usize, r as usize)?);
    }
    for k in 1..=4 {
        println!("S3 k={k}: {} brute {}", s3_power_prob(k)?, s3_power_prob_brute(k as usize)?);
    }
    for kind in [
        BoundKind::Zp { p: 5 },
        BoundKind::MnOrbits { n: 4 },
        BoundKind::AffinePrim { k: 3 },
        BoundKind::AffinePrim { k: 6 },
        BoundKind::NonPrimalUpper { n: 3 },
    ] {
        println!("{kind:?}: {:?}", closed_form(&kind)?);
    }
    Ok(())
}
