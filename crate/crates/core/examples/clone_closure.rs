use pspec::clone::function_count;
use pspec::{builtin, generate_clone};

/// Sizes of the term-function clone at small arities, against the count of all functions.
fn main() -> pspec::Result<()> {
    for key in ["bool_lattice", "boolean2", "z2plus", "s3"] {
        let a = builtin(key)?;
        for k in 1..=3 {
            let c = generate_clone(&a, k, 1 << 16)?;
            let all = function_count(a.size(), k).map_or("huge".to_string(), |n| n.to_string());
            let status = if c.is_complete() { "" } else { " (budget reached)" };
            println!("{key:>12} k={k}: {:>6} of {all}{status}", c.len());
        }
    }
    Ok(())
}
