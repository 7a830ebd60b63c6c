//! Spectrum slices of a few small algebras.

use pspec::{builtin, builtin_algebra, pspec_at, spectrum_prefix, BuiltinSpec};

fn show(values: &[pspec::ExactRational]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> pspec::Result<()> {
    for key in ["zp:3", "zn:4", "nand"] {
        let a = builtin_algebra(&BuiltinSpec::parse(key)?)?;
        for k in 1..=2 {
            let r = pspec_at(&a, k, 1 << 20)?;
            println!("{key:>6} k={k}: {}", show(&r.values));
        }
    }
    let c2 = builtin("c2")?;
    let r = spectrum_prefix(&c2, 4, 1 << 20)?;
    println!("C2 up to k=4 ({} values): {}", r.len(), show(&r.values));
    Ok(())
}
