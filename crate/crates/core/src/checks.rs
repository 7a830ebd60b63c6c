//! Named property suites over fixed and seeded corpora.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::approx::{prim_at, PrimBudget};
use crate::builtins::{builtin, builtin_algebra, BuiltinSpec};
use crate::clone::generate_clone;
use crate::clone::primality::{primal_by_cardinality, primal_by_post_test};
use crate::corpus::{random_equation, seeded_groupoids};
use crate::error::{Error, Result};
use crate::hom::{lemma_elementary_check, random_subalgebra, AlgebraMap, LemmaInput, LemmaKind};
use crate::oracles::{closed_form, BoundKind, BoundValue};
use crate::rational::ExactRational;
use crate::spectrum::{check_orbit_inclusion, pspec_at};
use crate::table::FunctionTable;

/// Clone budget for order-3 corpora: large enough for every non-primal seeded
/// groupoid to finish at arity 2, small enough to keep arity 3 cheap.
pub const CORPUS_CLONE_BUDGET: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    OrbitInclusion,
    ProductLaw,
    Barrier,
    Quadrilateral,
    Lemma,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::OrbitInclusion,
        Suite::ProductLaw,
        Suite::Barrier,
        Suite::Quadrilateral,
        Suite::Lemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OrbitInclusion => "orbit-inclusion",
            Suite::ProductLaw => "product-law",
            Suite::Barrier => "barrier",
            Suite::Quadrilateral => "quadrilateral",
            Suite::Lemma => "lemma",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseOutcome {
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: Vec<CaseOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

/// The 16 order-2 groupoids followed by 20 order-3 groupoids drawn with `seed`.
pub fn groupoid_corpus(seed: u64) -> Result<Vec<FiniteAlgebra>> {
    let mut out: Vec<FiniteAlgebra> = (0..16).map(|i| builtin(&format!("groupoid2:{i}"))).collect::<Result<_>>()?;
    out.extend(seeded_groupoids(3, 20, seed)?);
    Ok(out)
}

/// Two-element algebras whose unary clones are `{id,0}`, `{id,1}`, `{id,0,1}`
/// and `{id,¬}`: `(∨,⊕)`, `(∧,↔)`, `(∨,∧,0,1)` and `(¬, x⊕y⊕z)`.
pub fn barrier_samples() -> Result<Vec<FiniteAlgebra>> {
    Ok(vec![
        FiniteAlgebra::from_tables("join_xor", 2, [("join", 2, vec![0, 1, 1, 1]), ("xor", 2, vec![0, 1, 1, 0])])?,
        FiniteAlgebra::from_tables("meet_iff", 2, [("meet", 2, vec![0, 0, 0, 1]), ("iff", 2, vec![1, 0, 0, 1])])?,
        FiniteAlgebra::from_tables(
            "bounded_lattice2",
            2,
            [
                ("join", 2, vec![0, 1, 1, 1]),
                ("meet", 2, vec![0, 0, 0, 1]),
                ("zero", 0, vec![0]),
                ("one", 0, vec![1]),
            ],
        )?,
        FiniteAlgebra::from_tables(
            "neg_xor3",
            2,
            [("neg", 1, vec![1, 0]), ("xor3", 3, vec![0, 1, 1, 0, 1, 0, 0, 1])],
        )?,
    ])
}

fn case(case: impl Into<String>, passed: bool, detail: impl Into<String>) -> CaseOutcome {
    CaseOutcome {
        case: case.into(),
        passed,
        detail: detail.into(),
    }
}

/// Spectrum slice inside the orbit bound, with equality where it is expected.
pub fn orbit_inclusion_suite(seed: u64, max_arity: usize, budget: usize) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for a in groupoid_corpus(seed)? {
        for k in 1..=max_arity {
            let r = check_orbit_inclusion(&a, k, budget)?;
            let detail = format!(
                "holds={} strict={} equality_expected={} complete={} witness={}",
                r.holds,
                r.strict,
                r.equality_expected,
                r.complete,
                r.witness.as_ref().map_or("-".into(), |w| w.to_string())
            );
            cases.push(case(format!("{} k={k}", a.name()), r.consistent(), detail));
        }
    }
    Ok(SuiteReport {
        suite: Suite::OrbitInclusion,
        seed,
        cases,
    })
}

/// `Pr(A × B) = Pr(A) Pr(B)` on `count` seeded triples of groupoids of order 2 or 3.
pub fn product_law_suite(seed: u64, count: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = seeded_groupoids(2, count, seed)?;
    let right = seeded_groupoids(3, count, seed.wrapping_add(1))?;
    let mut cases = Vec::new();
    for (i, (a, b)) in left.iter().zip(&right).enumerate() {
        let vars = 1 + i % 3;
        let e = random_equation(&a.signature(), vars, 3, &mut rng)?;
        let r = lemma_elementary_check(LemmaKind::Product, &e, LemmaInput::Pair(a, b))?;
        cases.push(case(
            format!("{} x {} {e}", a.name(), b.name()),
            r.holds,
            format!("{} vs {}", r.lhs, r.rhs),
        ));
    }
    Ok(SuiteReport {
        suite: Suite::ProductLaw,
        seed,
        cases,
    })
}

fn unary_clone(a: &FiniteAlgebra) -> Result<Vec<FunctionTable>> {
    Ok(generate_clone(a, 1, 16)?.tables().to_vec())
}

/// Non-primal two-element samples have `Prim_1 = 1/2`; NAND is primal by both tests.
pub fn barrier_suite(seed: u64) -> Result<SuiteReport> {
    let half: ExactRational = ExactRational::new(1u32, 2u32);
    let expected_unary = [vec![vec![0, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]], vec![
        vec![0, 0],
        vec![0, 1],
        vec![1, 1],
    ], vec![vec![0, 1], vec![1, 0]]];
    let mut cases = Vec::new();
    for (a, expected) in barrier_samples()?.iter().zip(expected_unary) {
        let verdict = primal_by_post_test(a)?;
        let unary: Vec<Vec<u8>> = unary_clone(a)?.iter().map(|t| t.entries().to_vec()).collect();
        let prim = prim_at(a, 1, PrimBudget::default())?.prim;
        let passed = !verdict.is_primal() && prim == half && unary == expected;
        cases.push(case(
            a.name(),
            passed,
            format!("primal={} unary={unary:?} Prim_1={prim}", verdict.is_primal()),
        ));
    }
    let nand = builtin("nand")?;
    let post = primal_by_post_test(&nand)?;
    let card = primal_by_cardinality(&nand, 1 << 20)?;
    cases.push(case(
        "nand",
        post.is_primal() && card.is_primal(),
        format!("post={:?} cardinality={:?}", post.status, card.status),
    ));
    Ok(SuiteReport {
        suite: Suite::Barrier,
        seed,
        cases,
    })
}

/// The `(algebra, k)` pairs whose spectrum slice and `Prim_k` are both cheap.
pub fn quadrilateral_pairs() -> Result<Vec<(FiniteAlgebra, usize)>> {
    let mut out = Vec::new();
    for key in ["boolean2", "nand"] {
        for k in 1..=3 {
            out.push((builtin(key)?, k));
        }
    }
    for k in [1, 2, 3, 4] {
        out.push((builtin("z2plus")?, k));
    }
    out.push((builtin("v4")?, 1));
    out.push((builtin("bool_lattice")?, 1));
    for p in [2, 3, 5] {
        out.push((builtin_algebra(&BuiltinSpec::parse(&format!("zp:{p}"))?)?, 1));
    }
    for a in barrier_samples()? {
        out.push((a, 1));
    }
    Ok(out)
}

/// `|pspec_at(A, k)| >= ⌊1 / (4 (1 - Prim_k))⌋`, or `n^k + 1` values when `Prim_k = 1`.
pub fn quadrilateral_suite(seed: u64, pairs: &[(FiniteAlgebra, usize)]) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for (a, k) in pairs {
        let spec = pspec_at(a, *k, 1 << 20)?;
        let prim = prim_at(a, *k, PrimBudget::default())?.prim;
        let size = spec.len();
        let (passed, detail) = if prim.is_one() {
            let points = a.size().pow(*k as u32);
            (size == points + 1, format!("Prim_k=1, |spec|={size}, n^k+1={}", points + 1))
        } else {
            let BoundValue::Count(m) = closed_form(&BoundKind::Quadrilateral { prim: prim.clone() })? else {
                unreachable!("quadrilateral bound is a count")
            };
            (
                num_bigint::BigUint::from(size) >= m,
                format!("Prim_k={prim}, |spec|={size}, bound={m}"),
            )
        };
        cases.push(case(format!("{} k={k}", a.name()), passed, detail));
    }
    Ok(SuiteReport {
        suite: Suite::Quadrilateral,
        seed,
        cases,
    })
}

/// Mono, epi and constant-fiber inequalities over the groupoid corpus.
///
/// Each algebra `A` gets `equations` seeded equations in `1..=3` variables; mono
/// uses a random subalgebra inclusion into `A`, epi and kappa use the projection
/// `A × B → A` with `B` the next algebra in the corpus.
pub fn lemma_suite(seed: u64, equations: usize, kinds: &[LemmaKind]) -> Result<SuiteReport> {
    let corpus = groupoid_corpus(seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for (i, a) in corpus.iter().enumerate() {
        let b = &corpus[(i + 1) % corpus.len()];
        let inclusion = random_subalgebra(a, &mut rng)?;
        let projection = AlgebraMap::projection(a, b, true)?;
        for j in 0..equations {
            let e = random_equation(&a.signature(), 1 + j % 3, 3, &mut rng)?;
            for &kind in kinds {
                let (map, label) = match kind {
                    LemmaKind::Mono => (&inclusion, format!("{} <= {}", inclusion.source().size(), a.name())),
                    LemmaKind::Epi | LemmaKind::Kappa => (&projection, format!("{} -> {}", projection.source().name(), a.name())),
                    LemmaKind::Product => continue,
                };
                let r = lemma_elementary_check(kind, &e, LemmaInput::Map(map))?;
                let detail = match &r.middle {
                    Some(m) => format!("{} <= {} <= {}", r.lhs, m, r.rhs),
                    None => format!("lhs={} rhs={}", r.lhs, r.rhs),
                };
                cases.push(case(format!("{kind:?} {label} {e}"), r.holds, detail));
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::Lemma,
        seed,
        cases,
    })
}

/// Runs a suite with its default corpus sizes.
pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    match suite {
        Suite::OrbitInclusion => orbit_inclusion_suite(seed, 3, CORPUS_CLONE_BUDGET),
        Suite::ProductLaw => product_law_suite(seed, 20),
        Suite::Barrier => barrier_suite(seed),
        Suite::Quadrilateral => quadrilateral_suite(seed, &quadrilateral_pairs()?),
        Suite::Lemma => lemma_suite(seed, 3, &[LemmaKind::Mono, LemmaKind::Epi, LemmaKind::Kappa]),
    }
}
