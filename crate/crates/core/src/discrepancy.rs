//! Computed values that disagree with a published value, recomputed on demand.

use serde::Serialize;

use crate::approx::{prim_at, PrimBudget};
use crate::builtins::builtin;
use crate::clone::generate_clone;
use crate::error::Result;
use crate::hom::{lemma_elementary_check, AlgebraMap, LemmaInput, LemmaKind};
use crate::lattice::search_meet_zero;
use crate::rational::ExactRational;
use crate::spectrum::equation_probability;
use crate::term::parse_equation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub id: &'static str,
    pub subject: String,
    pub computed: String,
    /// The published value, quoted verbatim and never used in a computation.
    #[serde(rename = "publishedValue")]
    pub published_value: &'static str,
    pub detail: String,
}

fn is_monotone(t: &crate::table::FunctionTable) -> bool {
    crate::clone::post::PostClass::Monotone.contains(t)
}

fn meet_zero(key: &str) -> Result<ExactRational> {
    let a = builtin(key)?;
    equation_probability(&a, &parse_equation("(= (meet x0 x1) (zero))", &a.signature(), None)?)
}

/// Every logged discrepancy, with the computed side recomputed from scratch.
pub fn discrepancies() -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();

    out.push(Discrepancy {
        id: "pentagon-meet-zero",
        subject: "Pr(x ∧ y ≈ 0 | N5)".into(),
        computed: meet_zero("pentagon")?.to_string(),
        published_value: "14/25",
        detail: "exhaustive count over the 25 pairs".into(),
    });

    let target: ExactRational = "13/36".parse().expect("literal");
    let hits = search_meet_zero(6, &target)?;
    let listing: Vec<String> = hits.iter().map(|h| format!("[{}]", h.hasse)).collect();
    out.push(Discrepancy {
        id: "six-element-meet-zero",
        subject: "Pr(x ∧ y ≈ 0) on the 6-element free bounded distributive lattice".into(),
        computed: meet_zero("fl2")?.to_string(),
        published_value: "13/36",
        detail: format!("{} six-element lattices give 13/36: {}", hits.len(), listing.join(" ")),
    });

    let jm = builtin("bool_lattice")?;
    let mut prims = Vec::new();
    let mut shapes = Vec::new();
    for k in 1..=3 {
        prims.push(format!("Prim_{k}={}", prim_at(&jm, k, PrimBudget::default())?.prim));
        let clone = generate_clone(&jm, k, 1 << 20)?;
        let monotone_bounded = clone.tables().iter().all(|t| is_monotone(t) && t.at(0) == 0 && t.at(t.len() - 1) == 1);
        shapes.push(format!(
            "k={k}: {} term functions, all monotone and bound-preserving: {monotone_bounded}; {} functions fix 0",
            clone.len(),
            1u64 << ((1u64 << k) - 1)
        ));
    }
    out.push(Discrepancy {
        id: "join-meet-clone",
        subject: "term functions of ({0,1}, ∨, ∧)".into(),
        computed: prims.join(", "),
        published_value: "Clo_k = {f : f(0,...,0) = 0}, Prim_k -> 1",
        detail: shapes.join("; "),
    });

    let b = builtin("boolean2")?;
    let proj = AlgebraMap::projection(&b, &b, true)?;
    let eq = parse_equation("(= (meet x0 x1) (one))", &b.signature(), None)?;
    let check = lemma_elementary_check(LemmaKind::Kappa, &eq, LemmaInput::Map(&proj))?;
    out.push(Discrepancy {
        id: "constant-fiber-upper-bound",
        subject: "Pr(B) <= κ Pr(A) for a surjection A → B with constant fiber κ".into(),
        computed: format!(
            "{} <= {} <= {} is {}",
            check.lhs,
            check.middle.as_ref().expect("kappa chain"),
            check.rhs,
            check.holds
        ),
        published_value: "Pr(B) <= κ Pr(A)",
        detail: "x ∧ y ≈ 1 under the projection 2 × 2 → 2 with κ = 2".into(),
    });

    Ok(out)
}
