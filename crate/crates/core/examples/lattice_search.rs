//! Meet-zero probabilities of all six-element lattices.

use std::collections::BTreeMap;

use pspec::lattice::meet_zero_table;

fn main() -> pspec::Result<()> {
    let table = meet_zero_table(6)?;
    let mut by_value: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for hit in &table {
        by_value.entry(hit.meet_zero.clone()).or_default().push(hit);
    }
    println!("{} lattices", table.len());
    for (value, hits) in by_value {
        println!("{value}: {}", hits.len());
        for h in hits {
            let tag = if h.distributive { " distributive" } else { "" };
            println!("    [{}]{tag}", h.hasse);
        }
    }
    Ok(())
}
