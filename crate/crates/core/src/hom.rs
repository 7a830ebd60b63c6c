//! Explicit maps between algebras and the elementary transfer inequalities.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::codec;
use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::spectrum::{direct_product, equation_probability};
use crate::table::FunctionTable;
use crate::term::Equation;

/// A map between the carriers of two algebras with the same signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    mapping: Vec<usize>,
}

impl AlgebraMap {
    pub fn new(source: FiniteAlgebra, target: FiniteAlgebra, mapping: Vec<usize>) -> Result<Self> {
        if !source.signature().same_symbols(&target.signature()) {
            return Err(Error::Signature(format!(
                "{} and {} have different signatures",
                source.name(),
                target.name()
            )));
        }
        if mapping.len() != source.size() {
            return Err(Error::Shape(format!(
                "map has {} entries, source has {} elements",
                mapping.len(),
                source.size()
            )));
        }
        if let Some(&bad) = mapping.iter().find(|&&y| y >= target.size()) {
            return Err(Error::Domain(format!("image {bad} outside target of size {}", target.size())));
        }
        Ok(AlgebraMap { source, target, mapping })
    }

    /// Parses `map <src> <dst>` followed by `|src|` integers, checking the names.
    pub fn from_text(text: &str, source: FiniteAlgebra, target: FiniteAlgebra) -> Result<Self> {
        let mut tokens = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split('#').next().unwrap_or("").split_whitespace().map(move |t| (i + 1, t)));
        let mut expect = |what: &str| tokens.next().ok_or_else(|| Error::parse(0, format!("expected {what}")));
        let (line, kw) = expect("'map'")?;
        if kw != "map" {
            return Err(Error::parse(line, format!("expected 'map', found {kw:?}")));
        }
        let (line, src) = expect("source name")?;
        if src != source.name() {
            return Err(Error::parse(line, format!("map source {src} but algebra is {}", source.name())));
        }
        let (line, dst) = expect("target name")?;
        if dst != target.name() {
            return Err(Error::parse(line, format!("map target {dst} but algebra is {}", target.name())));
        }
        let mut mapping = Vec::with_capacity(source.size());
        for _ in 0..source.size() {
            let (line, tok) = expect("image")?;
            mapping.push(tok.parse().map_err(|_| Error::parse(line, format!("bad image {tok:?}")))?);
        }
        if let Some((line, tok)) = tokens.next() {
            return Err(Error::parse(line, format!("unexpected trailing token {tok:?}")));
        }
        Self::new(source, target, mapping)
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// `x ↦ (x, x)` into `A × A`.
    pub fn diagonal(a: &FiniteAlgebra) -> Result<Self> {
        let n = a.size();
        Self::new(a.clone(), direct_product(a, a)?, (0..n).map(|x| x * n + x).collect())
    }

    /// The projection of `A × B` onto its first or second factor.
    pub fn projection(a: &FiniteAlgebra, b: &FiniteAlgebra, first: bool) -> Result<Self> {
        let nb = b.size();
        let product = direct_product(a, b)?;
        let n = product.size();
        if first {
            Self::new(product, a.clone(), (0..n).map(|x| x / nb).collect())
        } else {
            Self::new(product, b.clone(), (0..n).map(|x| x % nb).collect())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomClassification {
    #[serde(rename = "isHom")]
    pub is_hom: bool,
    pub injective: bool,
    pub surjective: bool,
    /// Common fiber size, when all fibers over the target have the same size.
    pub kappa: Option<usize>,
}

/// Checks `f(op(x̄)) = op(f x̄)` for every operation and tuple.
pub fn check_homomorphism(map: &AlgebraMap) -> Result<HomClassification> {
    let f = &map.mapping;
    let mut is_hom = true;
    'ops: for op in map.source.ops() {
        let target_op = &map.target.op(&op.name).expect("same symbols").table;
        let m = op.arity();
        let n = map.source.size();
        let mut tuple = vec![0usize; m];
        let mut image = vec![0usize; m];
        for i in 0..codec::points(n, m)? {
            for (y, &x) in image.iter_mut().zip(&tuple) {
                *y = f[x];
            }
            if f[op.table.at(i)] != target_op.get(&image)? {
                is_hom = false;
                break 'ops;
            }
            codec::increment(&mut tuple, n);
        }
    }
    let mut fibers = vec![0usize; map.target.size()];
    for &y in f {
        fibers[y] += 1;
    }
    let injective = fibers.iter().all(|&c| c <= 1);
    let surjective = fibers.iter().all(|&c| c >= 1);
    let kappa = fibers.windows(2).all(|w| w[0] == w[1]).then_some(fibers[0]).filter(|&c| c > 0);
    Ok(HomClassification {
        is_hom,
        injective,
        surjective,
        kappa,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaKind {
    /// `Pr(A) <= (|B|/|A|)^k Pr(B)` for an injective homomorphism `A → B`.
    Mono,
    /// `1 - Pr(A) >= (|B|/|A|)^k (1 - Pr(B))` for a surjective homomorphism `A → B`.
    Epi,
    /// `Pr(A × B) = Pr(A) Pr(B)`.
    Product,
    /// `Pr(A) <= Pr(B) <= κ Pr(A)` for a surjective homomorphism with constant fiber size `κ`.
    Kappa,
}

impl std::str::FromStr for LemmaKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mono" => Ok(LemmaKind::Mono),
            "epi" => Ok(LemmaKind::Epi),
            "product" => Ok(LemmaKind::Product),
            "kappa" => Ok(LemmaKind::Kappa),
            _ => Err(Error::Domain(format!("unknown lemma kind {s:?}"))),
        }
    }
}

/// What a check is run on: a map for mono, epi and kappa, a pair for product.
#[derive(Debug, Clone, Copy)]
pub enum LemmaInput<'a> {
    Map(&'a AlgebraMap),
    Pair(&'a FiniteAlgebra, &'a FiniteAlgebra),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub kind: LemmaKind,
    pub holds: bool,
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    /// `Pr(B)` in the kappa chain `lhs <= middle <= rhs`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub middle: Option<ExactRational>,
}

fn size_ratio(num: usize, den: usize, k: usize) -> ExactRational {
    ExactRational::new(num as u64, den as u64).pow(k as u32)
}

/// Evaluates one of the transfer inequalities exactly, after checking its hypotheses.
pub fn lemma_elementary_check(kind: LemmaKind, equation: &Equation, input: LemmaInput<'_>) -> Result<LemmaCheck> {
    let k = equation.vars();
    match (kind, input) {
        (LemmaKind::Product, LemmaInput::Pair(a, b)) => {
            let pa = equation_probability(a, equation)?;
            let pb = equation_probability(b, equation)?;
            let pab = equation_probability(&direct_product(a, b)?, equation)?;
            let rhs = &pa * &pb;
            Ok(LemmaCheck {
                kind,
                holds: pab == rhs,
                lhs: pab,
                rhs,
                middle: None,
            })
        }
        (LemmaKind::Product, LemmaInput::Map(_)) => {
            Err(Error::Precondition("product check takes a pair of algebras, not a map".into()))
        }
        (_, LemmaInput::Pair(..)) => Err(Error::Precondition(format!("{kind:?} check takes a map, not a pair"))),
        (_, LemmaInput::Map(map)) => {
            let class = check_homomorphism(map)?;
            if !class.is_hom {
                return Err(Error::Precondition("map is not a homomorphism".into()));
            }
            let (na, nb) = (map.source.size(), map.target.size());
            let pa = equation_probability(&map.source, equation)?;
            let pb = equation_probability(&map.target, equation)?;
            match kind {
                LemmaKind::Mono => {
                    if !class.injective {
                        return Err(Error::Precondition("map is not injective".into()));
                    }
                    let rhs = size_ratio(nb, na, k) * pb;
                    Ok(LemmaCheck {
                        kind,
                        holds: pa <= rhs,
                        lhs: pa,
                        rhs,
                        middle: None,
                    })
                }
                LemmaKind::Epi => {
                    if !class.surjective {
                        return Err(Error::Precondition("map is not surjective".into()));
                    }
                    let lhs = pa.complement().expect("probability");
                    let rhs = size_ratio(nb, na, k) * pb.complement().expect("probability");
                    Ok(LemmaCheck {
                        kind,
                        holds: lhs >= rhs,
                        lhs,
                        rhs,
                        middle: None,
                    })
                }
                LemmaKind::Kappa => {
                    if !class.surjective {
                        return Err(Error::Precondition("map is not surjective".into()));
                    }
                    let kappa = class
                        .kappa
                        .ok_or_else(|| Error::Precondition("fiber size is not constant".into()))?;
                    let rhs = ExactRational::from(kappa as u64) * pa.clone();
                    Ok(LemmaCheck {
                        kind,
                        holds: pa <= pb && pb <= rhs,
                        lhs: pa,
                        rhs,
                        middle: Some(pb),
                    })
                }
                LemmaKind::Product => unreachable!(),
            }
        }
    }
}

/// Closure of `generators` under all operations, nullary ones included. Sorted.
pub fn generate_subuniverse(algebra: &FiniteAlgebra, generators: &[usize]) -> Result<Vec<usize>> {
    let n = algebra.size();
    if let Some(&g) = generators.iter().find(|&&g| g >= n) {
        return Err(Error::Domain(format!("generator {g} outside algebra of size {n}")));
    }
    let mut set: BTreeSet<usize> = generators.iter().copied().collect();
    loop {
        let elems: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for op in algebra.ops() {
            let m = op.arity();
            let mut tuple = vec![0usize; m];
            let mut args = vec![0usize; m];
            let count = codec::points(elems.len(), m)?;
            for _ in 0..count {
                for (a, &i) in args.iter_mut().zip(&tuple) {
                    *a = elems[i];
                }
                set.insert(op.table.get(&args)?);
                codec::increment(&mut tuple, elems.len());
            }
        }
        if set.len() == before {
            return Ok(set.into_iter().collect());
        }
    }
}

/// The subalgebra on `universe` (relabelled in ascending order) and its inclusion map.
pub fn subalgebra_inclusion(algebra: &FiniteAlgebra, universe: &[usize]) -> Result<AlgebraMap> {
    let closed = generate_subuniverse(algebra, universe)?;
    if closed.len() != universe.len() {
        return Err(Error::Precondition("set is not closed under the operations".into()));
    }
    let m = closed.len();
    let index = |x: usize| closed.binary_search(&x).expect("closed");
    let mut ops = Vec::new();
    for op in algebra.ops() {
        let table = FunctionTable::from_fn(m, op.arity(), |t| {
            let args: Vec<usize> = t.iter().map(|&i| closed[i]).collect();
            index(op.table.get(&args).expect("in range"))
        })?;
        ops.push(crate::algebra::Operation {
            name: op.name.clone(),
            table,
        });
    }
    let sub = FiniteAlgebra::new(format!("{}_sub", algebra.name()), m, ops)?;
    AlgebraMap::new(sub, algebra.clone(), closed)
}

/// The subalgebra generated by a random nonempty subset, with its inclusion.
pub fn random_subalgebra<R: Rng>(algebra: &FiniteAlgebra, rng: &mut R) -> Result<AlgebraMap> {
    let n = algebra.size();
    let mut gens: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    if gens.is_empty() {
        gens.push(rng.gen_range(0..n));
    }
    let universe = generate_subuniverse(algebra, &gens)?;
    subalgebra_inclusion(algebra, &universe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::term::parse_equation;

    fn meet_zero(a: &FiniteAlgebra) -> Equation {
        parse_equation("(= (meet x0 x1) (zero))", &a.signature(), None).unwrap()
    }

    #[test]
    fn classifications() {
        let b = builtin("boolean2").unwrap();
        let d = check_homomorphism(&AlgebraMap::diagonal(&b).unwrap()).unwrap();
        assert!(d.is_hom && d.injective && !d.surjective && d.kappa.is_none());
        let p = check_homomorphism(&AlgebraMap::projection(&b, &b, true).unwrap()).unwrap();
        assert!(p.is_hom && p.surjective && !p.injective);
        assert_eq!(p.kappa, Some(2));
        let c = check_homomorphism(&AlgebraMap::new(b.clone(), b, vec![1, 1]).unwrap()).unwrap();
        assert!(!c.is_hom);
    }

    #[test]
    fn worked_inequalities() {
        let b = builtin("boolean2").unwrap();
        let e = meet_zero(&b);
        let prod = lemma_elementary_check(LemmaKind::Product, &e, LemmaInput::Pair(&b, &b)).unwrap();
        assert!(prod.holds);
        assert_eq!(prod.lhs.to_string(), "9/16");

        let diag = AlgebraMap::diagonal(&b).unwrap();
        let mono = lemma_elementary_check(LemmaKind::Mono, &e, LemmaInput::Map(&diag)).unwrap();
        assert_eq!((mono.lhs.to_string(), mono.rhs.to_string()), ("3/4".into(), "9/4".into()));
        assert!(mono.holds);

        let proj = AlgebraMap::projection(&b, &b, true).unwrap();
        let epi = lemma_elementary_check(LemmaKind::Epi, &e, LemmaInput::Map(&proj)).unwrap();
        assert_eq!((epi.lhs.to_string(), epi.rhs.to_string()), ("7/16".into(), "1/16".into()));
        assert!(epi.holds);

        let kappa = lemma_elementary_check(LemmaKind::Kappa, &e, LemmaInput::Map(&proj)).unwrap();
        assert_eq!(kappa.lhs.to_string(), "9/16");
        assert_eq!(kappa.middle.unwrap().to_string(), "3/4");
        assert_eq!(kappa.rhs.to_string(), "9/8");
        assert!(kappa.holds);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let b = builtin("boolean2").unwrap();
        let e = meet_zero(&b);
        let proj = AlgebraMap::projection(&b, &b, true).unwrap();
        let err = lemma_elementary_check(LemmaKind::Mono, &e, LemmaInput::Map(&proj)).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("injective")));
        let diag = AlgebraMap::diagonal(&b).unwrap();
        assert!(lemma_elementary_check(LemmaKind::Epi, &e, LemmaInput::Map(&diag)).is_err());
        let bad = AlgebraMap::new(b.clone(), b.clone(), vec![1, 1]).unwrap();
        assert!(lemma_elementary_check(LemmaKind::Kappa, &e, LemmaInput::Map(&bad)).is_err());
    }

    #[test]
    fn map_text_round_trip() {
        let b = builtin("boolean2").unwrap();
        let bb = direct_product(&b, &b).unwrap();
        let text = format!("map {} {}\n0 0 1 1\n", bb.name(), b.name());
        let m = AlgebraMap::from_text(&text, bb.clone(), b.clone()).unwrap();
        assert_eq!(m.mapping(), &[0, 0, 1, 1]);
        assert!(AlgebraMap::from_text("map x y 0 0 1 1", bb.clone(), b.clone()).is_err());
        assert!(AlgebraMap::from_text(&format!("map {} {} 0 0 1", bb.name(), b.name()), bb, b).is_err());
    }

    #[test]
    fn subalgebras_of_z4() {
        let z4 = builtin("zn:4").unwrap();
        assert_eq!(generate_subuniverse(&z4, &[2]).unwrap(), vec![0, 2]);
        let inc = subalgebra_inclusion(&z4, &[0, 2]).unwrap();
        let c = check_homomorphism(&inc).unwrap();
        assert!(c.is_hom && c.injective);
        assert!(subalgebra_inclusion(&z4, &[1]).is_err());
    }
}
