//! How well term functions approximate arbitrary functions.

use pspec::approx::walsh_nonlinearity;
use pspec::{builtin, prim_at, prim_at_with, FunctionTable, PrimBudget, PrimMethod};

fn main() -> pspec::Result<()> {
    let z2 = builtin("z2plus")?;
    for k in 1..=4 {
        let ex = prim_at_with(&z2, k, PrimBudget::default(), Some(PrimMethod::Exhaustive))?;
        let wh = prim_at_with(&z2, k, PrimBudget::default(), Some(PrimMethod::WalshHadamard))?;
        println!("Prim_{k}(Z2+) = {} (walsh {}), hardest {}", ex.prim, wh.prim, ex.hardest_function);
    }

    let bent = FunctionTable::from_fn(2, 4, |x| (x[0] & x[1]) ^ (x[2] & x[3]))?;
    println!("nl({bent}) = {}", walsh_nonlinearity(&bent)?);

    for key in ["v4", "bool_lattice", "nand"] {
        let r = prim_at(&builtin(key)?, 1, PrimBudget::default())?;
        println!("Prim_1({key}) = {}", r.prim);
    }
    Ok(())
}
