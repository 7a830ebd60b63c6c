//! Classify maps between algebras and test how equation probabilities transfer along them.

use pspec::hom::{generate_subuniverse, subalgebra_inclusion};
use pspec::{
    builtin, check_homomorphism, lemma_elementary_check, parse_equation, AlgebraMap, LemmaInput, LemmaKind,
};

fn main() -> pspec::Result<()> {
    let b = builtin("boolean2")?;
    let proj = AlgebraMap::projection(&b, &b, true)?;
    println!("projection: {:?}", check_homomorphism(&proj)?);

    for text in ["(= (meet x0 x1) (zero))", "(= (meet x0 x1) (one))"] {
        let e = parse_equation(text, &b.signature(), None)?;
        for kind in [LemmaKind::Epi, LemmaKind::Kappa] {
            let r = lemma_elementary_check(kind, &e, LemmaInput::Map(&proj))?;
            let mid = r.middle.map(|m| format!(" {m}")).unwrap_or_default();
            println!("{kind:?} {text}: {}{mid} {} holds={}", r.lhs, r.rhs, r.holds);
        }
        let p = lemma_elementary_check(LemmaKind::Product, &e, LemmaInput::Pair(&b, &b))?;
        println!("Product {text}: {} = {}", p.lhs, p.rhs);
    }

    let s3 = builtin("s3")?;
    let universe = generate_subuniverse(&s3, &[1])?;
    let inc = subalgebra_inclusion(&s3, &universe)?;
    let e = parse_equation("(= (mul x0 x1) (mul x1 x0))", &s3.signature(), None)?;
    let r = lemma_elementary_check(LemmaKind::Mono, &e, LemmaInput::Map(&inc))?;
    println!("subgroup {universe:?}: mono {} <= {} holds={}", r.lhs, r.rhs, r.holds);
    Ok(())
}
