//! Closed-form values used as independent checks on the brute-force engines.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::builtins::builtin;
use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::spectrum::equation_probability;
use crate::term::{Equation, Term};

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

/// `φ(p, q, r) = 1 - (2^p + 2^q - 2) / 2^(p+q+r)`: the probability of
/// `x_1⋯x_r y_1⋯y_p ≈ x_1⋯x_r z_1⋯z_q` in the two-element semilattice.
pub fn c2_phi(p: u32, q: u32, r: u32) -> ExactRational {
    let num = pow2(p) + pow2(q) - BigUint::from(2u32);
    let den = pow2(p + q + r);
    ExactRational::new(&den - num, den)
}

/// Product of the variables `first .. first + count`, or `None` when `count = 0`.
fn meet_chain(first: usize, count: usize) -> Option<Term> {
    (first..first + count)
        .map(Term::Var)
        .reduce(|acc, v| Term::apply("mul", vec![acc, v]))
}

/// `φ(p, q, r)` by counting satisfying assignments in `C_2`.
///
/// A side with no variables is the empty product, the top element `1`. When
/// both sides are nonempty the equation goes through the term engine.
pub fn c2_phi_brute(p: usize, q: usize, r: usize) -> Result<ExactRational> {
    let c2 = builtin("c2")?;
    let vars = p + q + r;
    let x = meet_chain(0, r);
    let y = meet_chain(r, p);
    let z = meet_chain(r + p, q);
    let join = |a: Option<Term>, b: Option<Term>| match (a, b) {
        (Some(a), Some(b)) => Some(Term::apply("mul", vec![a, b])),
        (a, None) => a,
        (None, b) => b,
    };
    let lhs = join(x.clone(), y);
    let rhs = join(x, z);
    match (lhs, rhs) {
        (Some(l), Some(r)) => equation_probability(&c2, &Equation::new(l, r, Some(vars.max(1)))?),
        (l, r) => {
            // a side is the empty product
            let total = 1u64 << vars;
            let side = |t: &Option<Term>, bits: u64| -> Result<usize> {
                match t {
                    None => Ok(1),
                    Some(t) => {
                        let assignment: Vec<usize> = (0..vars).map(|i| (bits >> (vars - 1 - i) & 1) as usize).collect();
                        crate::term::eval_term(&c2, t, &assignment)
                    }
                }
            };
            let mut hits = 0;
            for bits in 0..total {
                if side(&l, bits)? == side(&r, bits)? {
                    hits += 1;
                }
            }
            Ok(ExactRational::from_counts(hits, total))
        }
    }
}

/// Whether `v = φ(p, q, r)` for some `p, q, r >= 0`.
///
/// If `1 - v` has reduced denominator `2^m`, a solution needs `p + q + r <= m + 1`
/// unless `p = 1` or `q = 1`, where the value depends on `r` alone; so searching
/// `p, q, r <= m + 2` is exhaustive.
pub fn in_c2_phi_set(v: &ExactRational) -> bool {
    let den = v.denominator();
    if (den & (den - BigUint::one())) != BigUint::zero() {
        return false;
    }
    let m = den.bits() as u32;
    let bound = m + 2;
    (0..=bound).any(|p| (0..=bound).any(|q| (0..=bound).any(|r| &c2_phi(p, q, r) == v)))
}

/// `(1/3)(1 + 1/2^(k-1))`, the probability of `x_1^2 ⋯ x_k^2 ≈ 1` in `S_3`.
pub fn s3_power_prob(k: u32) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let half_pow = ExactRational::new(1u32, pow2(k - 1));
    Ok(ExactRational::new(1u32, 3u32) * (ExactRational::one() + half_pow))
}

/// The same probability by evaluating the equation on all `6^k` tuples.
pub fn s3_power_prob_brute(k: usize) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let s3 = builtin("s3")?;
    let square = |i| Term::apply("mul", vec![Term::Var(i), Term::Var(i)]);
    let lhs = (1..k).fold(square(0), |acc, i| Term::apply("mul", vec![acc, square(i)]));
    equation_probability(&s3, &Equation::new(lhs, Term::apply("e", vec![]), Some(k))?)
}

/// Which closed form to evaluate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundKind {
    /// Spectrum of `Z_p`.
    Zp { p: usize },
    /// Orbit sizes of `M_n^2` under `Aut(M_n)`, ascending.
    MnOrbits { n: usize },
    /// `Prim_k(Z_2^+)`: exact for even `k`, a bracket for odd `k`.
    AffinePrim { k: u32 },
    /// Lower bound on the spectrum size, `⌊1 / (4 (1 - prim))⌋`.
    Quadrilateral { prim: ExactRational },
    /// Lower bound on `Prim_k` of an idemprimal algebra, `1 - 1/n^(k-1)`.
    IdemprimalLower { n: usize, k: u32 },
    /// Lower bound on `Prim_k` after adjoining a cyclic permutation, `1/n`.
    RhoLower { n: usize },
    /// Upper bound on `Prim` of a non-primal algebra, `1 - 1/n^2`.
    NonPrimalUpper { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BoundValue {
    Set(Vec<ExactRational>),
    Vector(Vec<usize>),
    Exact(ExactRational),
    Bracket { lo: ExactRational, hi: ExactRational },
    Count(#[serde(serialize_with = "ser_big")] BigUint),
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ceil_sqrt(x: &BigUint) -> BigUint {
    let s = x.sqrt();
    if &(&s * &s) == x {
        s
    } else {
        s + BigUint::one()
    }
}

/// Evaluates a closed form.
pub fn closed_form(kind: &BoundKind) -> Result<BoundValue> {
    Ok(match kind {
        BoundKind::Zp { p } => {
            if *p < 2 {
                return Err(Error::Domain("p must be at least 2".into()));
            }
            BoundValue::Set(vec![ExactRational::new(1u32, *p as u64), ExactRational::one()])
        }
        BoundKind::MnOrbits { n } => {
            if *n < 1 {
                return Err(Error::Domain("n must be at least 1".into()));
            }
            let mut v = vec![1, 1, 1, 1, *n, *n, *n, *n, *n, n * n - n];
            v.sort_unstable();
            BoundValue::Vector(v)
        }
        BoundKind::AffinePrim { k } => {
            if *k == 0 {
                return Err(Error::Domain("k must be at least 1".into()));
            }
            let half = ExactRational::new(1u32, 2u32);
            if k % 2 == 0 {
                BoundValue::Exact(&half + &ExactRational::new(1u32, pow2(k / 2 + 1)))
            } else {
                // nl_k <= 2^(k-1) - sqrt(2^(k-2)), rounded down since nl_k is an integer
                let max_nl = if *k == 1 { BigUint::zero() } else { pow2(k - 1) - ceil_sqrt(&pow2(k - 2)) };
                let lo = ExactRational::one()
                    .checked_sub(&ExactRational::new(max_nl, pow2(*k)))
                    .expect("nl below 2^k");
                let hi = &half + &ExactRational::new(1u32, pow2(k.div_ceil(2)));
                BoundValue::Bracket { lo, hi }
            }
        }
        BoundKind::Quadrilateral { prim } => {
            let gap = prim
                .complement()
                .filter(|g| !g.is_zero())
                .ok_or_else(|| Error::Domain(format!("needs prim < 1, got {prim}")))?;
            let four_gap = ExactRational::from(4u64) * gap;
            BoundValue::Count(four_gap.recip().expect("nonzero").floor())
        }
        BoundKind::IdemprimalLower { n, k } => {
            if *n == 0 || *k == 0 {
                return Err(Error::Domain("n and k must be positive".into()));
            }
            let big = BigUint::from(*n).pow(k - 1);
            BoundValue::Exact(ExactRational::one().checked_sub(&ExactRational::new(1u32, big)).expect("<= 1"))
        }
        BoundKind::RhoLower { n } => {
            if *n == 0 {
                return Err(Error::Domain("n must be positive".into()));
            }
            BoundValue::Exact(ExactRational::new(1u32, *n as u64))
        }
        BoundKind::NonPrimalUpper { n } => {
            if *n == 0 {
                return Err(Error::Domain("n must be positive".into()));
            }
            BoundValue::Exact(ExactRational::new((n * n - 1) as u64, (n * n) as u64))
        }
    })
}

/// Row of the classical order-two groupoid table that `groupoid2:index` belongs to.
pub fn groupoid2_family(index: usize) -> Result<&'static str> {
    Ok(match index {
        0 | 15 => "constant",
        3 | 5 => "projection",
        6 | 9 => "xor",
        1 | 7 => "semilattice",
        10 | 12 => "negation",
        2 | 4 | 11 | 13 => "implication",
        8 | 14 => "dyadic",
        _ => return Err(Error::Domain(format!("groupoid2 index {index} not in 0..=15"))),
    })
}

/// `Z_n` with a cycle adjoined: the builtin `zn_rho:n`, or any algebra plus `x + 1 mod n`.
pub fn with_cycle(algebra: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let n = algebra.size();
    let rho = crate::builtins::unary_table(n, |x| (x + 1) % n)?;
    algebra.with_op("rho", rho)?.with_name(format!("{}_rho", algebra.name()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        assert_eq!(c2_phi(1, 1, 1).to_string(), "3/4");
        assert_eq!(c2_phi(0, 0, 0).to_string(), "1/1");
        assert_eq!(c2_phi(2, 2, 0).to_string(), "5/8");
        assert_eq!(c2_phi(1, 1, 0).to_string(), "1/2");
    }

    #[test]
    fn phi_brute_small() {
        assert_eq!(c2_phi_brute(1, 1, 1).unwrap(), c2_phi(1, 1, 1));
        assert_eq!(c2_phi_brute(0, 0, 0).unwrap(), c2_phi(0, 0, 0));
        assert_eq!(c2_phi_brute(0, 2, 0).unwrap(), c2_phi(0, 2, 0));
    }

    #[test]
    fn phi_membership() {
        assert!(in_c2_phi_set(&"1/2".parse().unwrap()));
        assert!(in_c2_phi_set(&"3/4".parse().unwrap()));
        assert!(in_c2_phi_set(&"1/1".parse().unwrap()));
        assert!(!in_c2_phi_set(&"1/3".parse().unwrap()));
        assert!(!in_c2_phi_set(&"0/1".parse().unwrap()));
    }

    #[test]
    fn s3_values() {
        let v: Vec<String> = (1..=3).map(|k| s3_power_prob(k).unwrap().to_string()).collect();
        assert_eq!(v, ["2/3", "1/2", "5/12"]);
        assert_eq!(s3_power_prob_brute(3).unwrap(), s3_power_prob(3).unwrap());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(
            closed_form(&BoundKind::Zp { p: 5 }).unwrap(),
            BoundValue::Set(vec!["1/5".parse().unwrap(), "1/1".parse().unwrap()])
        );
        assert_eq!(
            closed_form(&BoundKind::MnOrbits { n: 6 }).unwrap(),
            BoundValue::Vector(vec![1, 1, 1, 1, 6, 6, 6, 6, 6, 30])
        );
        assert_eq!(
            closed_form(&BoundKind::AffinePrim { k: 2 }).unwrap(),
            BoundValue::Exact("3/4".parse().unwrap())
        );
        assert_eq!(
            closed_form(&BoundKind::AffinePrim { k: 4 }).unwrap(),
            BoundValue::Exact("5/8".parse().unwrap())
        );
        assert_eq!(
            closed_form(&BoundKind::AffinePrim { k: 3 }).unwrap(),
            BoundValue::Bracket {
                lo: "3/4".parse().unwrap(),
                hi: "3/4".parse().unwrap()
            }
        );
        assert_eq!(
            closed_form(&BoundKind::AffinePrim { k: 1 }).unwrap(),
            BoundValue::Bracket {
                lo: "1/1".parse().unwrap(),
                hi: "1/1".parse().unwrap()
            }
        );
        assert_eq!(
            closed_form(&BoundKind::Quadrilateral { prim: "3/4".parse().unwrap() }).unwrap(),
            BoundValue::Count(BigUint::from(1u32))
        );
        assert!(closed_form(&BoundKind::Quadrilateral { prim: "1/1".parse().unwrap() }).is_err());
        assert_eq!(
            closed_form(&BoundKind::IdemprimalLower { n: 2, k: 3 }).unwrap(),
            BoundValue::Exact("3/4".parse().unwrap())
        );
        assert_eq!(
            closed_form(&BoundKind::RhoLower { n: 3 }).unwrap(),
            BoundValue::Exact("1/3".parse().unwrap())
        );
    }

    #[test]
    fn odd_bracket_sits_inside_the_real_bracket() {
        for k in [5u32, 7, 9] {
            let BoundValue::Bracket { lo, hi } = closed_form(&BoundKind::AffinePrim { k }).unwrap() else {
                panic!()
            };
            let real_lo = 0.5 + 0.5f64.powf(k as f64 / 2.0 + 1.0);
            assert!(lo.to_f64() >= real_lo - 1e-12 && lo <= hi);
        }
    }
}
