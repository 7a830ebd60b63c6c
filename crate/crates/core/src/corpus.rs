//! Seeded random algebras, terms and equations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};
use crate::term::{Equation, Term};

/// A groupoid on `n` elements with a uniformly random table.
pub fn random_groupoid<R: Rng>(name: &str, n: usize, rng: &mut R) -> Result<FiniteAlgebra> {
    let entries = (0..n * n).map(|_| rng.gen_range(0..n) as u8).collect();
    FiniteAlgebra::from_tables(name, n, [("mul", 2, entries)])
}

/// `count` groupoids of order `n` drawn from a ChaCha stream seeded with `seed`.
pub fn seeded_groupoids(n: usize, count: usize, seed: u64) -> Result<Vec<FiniteAlgebra>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_groupoid(&format!("g{n}_{seed}_{i}"), n, &mut rng))
        .collect()
}

/// An algebra of size `2..=max_size` with one binary and possibly one unary operation.
pub fn random_algebra<R: Rng>(max_size: usize, rng: &mut R) -> Result<FiniteAlgebra> {
    if max_size < 2 {
        return Err(Error::Domain("max_size must be at least 2".into()));
    }
    let n = rng.gen_range(2..=max_size);
    let mut a = random_groupoid("random", n, rng)?;
    if rng.gen_bool(0.5) {
        let entries = (0..n).map(|_| rng.gen_range(0..n) as u8).collect();
        a = a.with_op("inv", crate::table::FunctionTable::new(n, 1, entries)?)?;
    }
    Ok(a)
}

/// A random term over `signature` in variables `0..vars`, at most `depth` deep.
pub fn random_term<R: Rng>(signature: &Signature, vars: usize, depth: usize, rng: &mut R) -> Term {
    let ops: Vec<(&str, usize)> = signature.iter().filter(|(_, a)| *a > 0).collect();
    if depth == 0 || ops.is_empty() || rng.gen_bool(0.3) {
        return Term::Var(rng.gen_range(0..vars.max(1)));
    }
    let (name, arity) = ops[rng.gen_range(0..ops.len())];
    let args = (0..arity).map(|_| random_term(signature, vars, depth - 1, rng)).collect();
    Term::apply(name, args)
}

/// A random equation in exactly `vars` variables.
pub fn random_equation<R: Rng>(signature: &Signature, vars: usize, depth: usize, rng: &mut R) -> Result<Equation> {
    let lhs = random_term(signature, vars, depth, rng);
    let rhs = random_term(signature, vars, depth, rng);
    Equation::new(lhs, rhs, Some(vars.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_corpus_is_reproducible() {
        let a = seeded_groupoids(3, 20, 7).unwrap();
        let b = seeded_groupoids(3, 20, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert!(a.iter().all(|g| g.size() == 3));
    }

    #[test]
    fn random_equations_check_against_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = random_algebra(4, &mut rng).unwrap();
            let e = random_equation(&a.signature(), 3, 3, &mut rng).unwrap();
            e.check(&a.signature()).unwrap();
            assert_eq!(e.vars(), 3);
        }
    }
}
