//! Probability that an equation holds, in an algebra and in its powers.

use pspec::spectrum::power;
use pspec::{builtin, equation_probability, parse_equation};

fn main() -> pspec::Result<()> {
    let b = builtin("boolean2")?;
    for m in 1..=3 {
        let bm = power(&b, m)?;
        let e = parse_equation("(= (meet x0 x1) (zero))", &bm.signature(), None)?;
        println!("Pr(x ∧ y = 0) over 2^{m}: {}", equation_probability(&bm, &e)?);
    }

    let pentagon = builtin("pentagon")?;
    let e = parse_equation("(= (meet x0 x1) (zero))", &pentagon.signature(), None)?;
    println!("Pr(x ∧ y = 0) over N5: {}", equation_probability(&pentagon, &e)?);

    // a dummy variable leaves the value unchanged
    let padded = e.padded();
    println!("same equation in {} variables: {}", padded.vars(), equation_probability(&pentagon, &padded)?);
    Ok(())
}
