use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pspec::approx::walsh_nonlinearity;
use pspec::clone::primality::{is_idemprimal_at, primal_by_post_test};
use pspec::corpus::{random_algebra, random_equation, seeded_groupoids};
use pspec::hom::random_subalgebra;
use pspec::oracles::with_cycle;
use pspec::spectrum::{direct_product, power};
use pspec::{
    automorphism_group, best_approximation, builtin, builtin_algebra, closed_form, coincidence_mu, equation_probability,
    generate_clone, hamming_distance, lemma_elementary_check, orbit_partition, prim_at, prim_at_with, pspec_at,
    AlgebraMap, BoundKind, BoundValue, BuiltinSpec, ExactRational, FiniteAlgebra, FunctionTable, LemmaInput, LemmaKind,
    PrimBudget, PrimMethod,
};

const BUDGET: usize = 1 << 20;

fn q(n: u64, d: u64) -> ExactRational {
    ExactRational::new(n, d)
}

fn spec(key: &str) -> FiniteAlgebra {
    builtin_algebra(&BuiltinSpec::parse(key).unwrap()).unwrap()
}

fn groupoid2(i: usize) -> FiniteAlgebra {
    spec(&format!("groupoid2:{i}"))
}

#[test]
fn arity_monotonicity_on_order_two() {
    for i in 0..16 {
        let a = groupoid2(i);
        for k in 1..=3 {
            let lo = pspec_at(&a, k, BUDGET).unwrap();
            let hi = pspec_at(&a, k + 1, BUDGET).unwrap();
            assert!(lo.is_subset_of(&hi.values), "groupoid2:{i} k={k}");
        }
    }
}

#[test]
fn zero_in_unary_slice_iff_no_idempotent() {
    for i in 0..16 {
        let a = groupoid2(i);
        let mul = &a.ops()[0].table;
        let has_idempotent = (0..2).any(|x| mul.get(&[x, x]).unwrap() == x);
        let zero = pspec_at(&a, 1, BUDGET).unwrap().contains(&ExactRational::zero());
        assert_eq!(zero, !has_idempotent, "groupoid2:{i}");
    }
}

#[test]
fn power_law_on_order_two() {
    for i in 0..16 {
        let a = groupoid2(i);
        let a2 = power(&a, 2).unwrap();
        for k in 1..=2 {
            let base: BTreeSet<_> = pspec_at(&a, k, BUDGET).unwrap().values.iter().map(|v| v.pow(2)).collect();
            let squared: BTreeSet<_> = pspec_at(&a2, k, BUDGET).unwrap().values.into_iter().collect();
            assert_eq!(squared, base, "groupoid2:{i} k={k}");
        }
    }
}

#[test]
fn reduct_spectrum_is_contained() {
    let full = builtin("boolean2").unwrap();
    let reduct = builtin("bool_lattice").unwrap();
    for k in 1..=3 {
        let small = pspec_at(&reduct, k, BUDGET).unwrap();
        assert!(small.is_subset_of(&pspec_at(&full, k, BUDGET).unwrap().values), "k={k}");
    }
}

#[test]
fn spectrum_is_thread_independent() {
    for a in seeded_groupoids(3, 3, 11).unwrap() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| pspec_at(&a, 2, 1 << 12).unwrap())
        };
        assert_eq!(run(1), run(3));
    }
}

#[test]
fn sierpinski_barrier_on_non_primal_algebras() {
    let mut corpus: Vec<FiniteAlgebra> = (0..16).map(groupoid2).collect();
    corpus.extend(seeded_groupoids(3, 4, 5).unwrap());
    for a in corpus {
        let n = a.size() as u64;
        let c2 = generate_clone(&a, 2, BUDGET).unwrap();
        if c2.is_everything() {
            continue;
        }
        let p1 = prim_at(&a, 1, PrimBudget::default()).unwrap().prim;
        let p2 = prim_at(&a, 2, PrimBudget::default()).unwrap().prim;
        assert!(p1 <= q(n - 1, n) || p2 <= q(n * n - 1, n * n), "{}: {p1} {p2}", a.name());
    }
}

#[test]
fn idemprimal_lower_bound() {
    let mut seen = 0;
    for i in 0..16 {
        let a = groupoid2(i);
        for k in 2..=3u32 {
            if is_idemprimal_at(&a, k as usize, BUDGET).unwrap() {
                seen += 1;
                let BoundValue::Exact(lo) = closed_form(&BoundKind::IdemprimalLower { n: 2, k }).unwrap() else {
                    panic!("exact bound expected");
                };
                assert_eq!(lo, q((1 << (k - 1)) - 1, 1 << (k - 1)));
                let p = prim_at(&a, k as usize, PrimBudget::default()).unwrap().prim;
                assert!(p >= lo, "groupoid2:{i} k={k}: {p} < {lo}");
            }
        }
    }
    assert!(seen > 0, "no idemprimal groupoid found");
}

#[test]
fn cycle_enrichment_lower_bound() {
    let mut corpus = vec![spec("zn_rho:3")];
    for g in seeded_groupoids(3, 3, 2).unwrap() {
        corpus.push(with_cycle(&g).unwrap());
    }
    for (i, a) in corpus.iter().enumerate() {
        let arities: &[usize] = if i < 2 { &[1, 2] } else { &[1] };
        for &k in arities {
            let p = prim_at(a, k, PrimBudget::default()).unwrap().prim;
            assert!(p >= q(1, 3), "{} k={k}: {p}", a.name());
        }
    }
}

#[test]
fn quadrilateral_on_order_two() {
    for i in 0..16 {
        let a = groupoid2(i);
        for k in 1..=3 {
            let size = pspec_at(&a, k, BUDGET).unwrap().len();
            let p = prim_at(&a, k, PrimBudget::default()).unwrap().prim;
            if p.is_one() {
                assert_eq!(size, (1 << k) + 1, "groupoid2:{i} k={k}");
            } else {
                let (num, den) = (p.numerator().clone(), p.denominator().clone());
                let bound = &den / (num_bigint::BigUint::from(4u32) * (&den - &num));
                assert!(num_bigint::BigUint::from(size) >= bound, "groupoid2:{i} k={k}");
            }
        }
    }
}

/// Distance from `f` to the nearest affine function, by enumeration.
fn affine_distance(f: &FunctionTable) -> usize {
    let k = f.arity();
    let points = 1usize << k;
    let mut best = points;
    for mask in 0..points {
        for c in 0..2 {
            let d = (0..points)
                .filter(|&x| (((x & mask).count_ones() as usize + c) & 1) != f.at(x))
                .count();
            best = best.min(d);
        }
    }
    best
}

#[test]
fn walsh_matches_enumeration_up_to_three_variables() {
    let z2 = builtin("z2plus").unwrap();
    for k in 1..=3usize {
        let points = 1usize << k;
        for code in 0u32..(1 << points) {
            let f = FunctionTable::new(2, k, (0..points).map(|i| (code >> i & 1) as u8).collect()).unwrap();
            assert_eq!(walsh_nonlinearity(&f).unwrap(), affine_distance(&f), "{f}");
        }
        let ex = prim_at_with(&z2, k, PrimBudget::default(), Some(PrimMethod::Exhaustive)).unwrap();
        let wh = prim_at_with(&z2, k, PrimBudget::default(), Some(PrimMethod::WalshHadamard)).unwrap();
        assert_eq!(ex.prim, wh.prim, "k={k}");
        assert_eq!(ex.covering_radius, wh.covering_radius, "k={k}");
    }
}

#[test]
fn oracles_agree_with_engines() {
    for p in [2usize, 3, 5] {
        let BoundValue::Set(values) = closed_form(&BoundKind::Zp { p }).unwrap() else {
            panic!("set expected");
        };
        for k in 1..=3 {
            assert_eq!(pspec_at(&spec(&format!("zp:{p}")), k, BUDGET).unwrap().values, values, "p={p} k={k}");
        }
    }
    for n in [3usize, 4, 6] {
        let BoundValue::Vector(sizes) = closed_form(&BoundKind::MnOrbits { n }).unwrap() else {
            panic!("vector expected");
        };
        let g = automorphism_group(&spec(&format!("m_n:{n}"))).unwrap();
        assert_eq!(orbit_partition(&g, 2).unwrap().sorted_sizes(), sizes, "n={n}");
    }
    let z2 = builtin("z2plus").unwrap();
    for k in [2u32, 4] {
        let BoundValue::Exact(v) = closed_form(&BoundKind::AffinePrim { k }).unwrap() else {
            panic!("exact value expected for even k");
        };
        assert_eq!(prim_at(&z2, k as usize, PrimBudget::default()).unwrap().prim, v, "k={k}");
    }
    for k in [1u32, 3] {
        let BoundValue::Bracket { lo, hi } = closed_form(&BoundKind::AffinePrim { k }).unwrap() else {
            panic!("bracket expected for odd k");
        };
        let p = prim_at(&z2, k as usize, PrimBudget::default()).unwrap().prim;
        assert!(lo <= p && p <= hi, "k={k}: {p} not in [{lo}, {hi}]");
    }
}

#[test]
fn mono_and_epi_on_random_subalgebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    for _ in 0..50 {
        let a = random_algebra(4, &mut rng).unwrap();
        let inclusion = random_subalgebra(&a, &mut rng).unwrap();
        let b = random_algebra(3, &mut rng).unwrap();
        let b = if b.signature() == a.signature() { b } else { a.clone() };
        let projection = AlgebraMap::projection(&a, &b, true).unwrap();
        for _ in 0..20 {
            let vars = rng.gen_range(1..=3);
            let e = random_equation(&a.signature(), vars, 3, &mut rng).unwrap();
            let mono = lemma_elementary_check(LemmaKind::Mono, &e, LemmaInput::Map(&inclusion)).unwrap();
            assert!(mono.holds, "mono {} {e}: {} vs {}", a.name(), mono.lhs, mono.rhs);
            let epi = lemma_elementary_check(LemmaKind::Epi, &e, LemmaInput::Map(&projection)).unwrap();
            assert!(epi.holds, "epi {} {e}: {} vs {}", a.name(), epi.lhs, epi.rhs);
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_slice_invariants(seed in any::<u64>(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(3, &mut rng).unwrap();
        let r = pspec_at(&a, k, 1 << 12).unwrap();
        let n = a.size() as u64;
        let den = n.pow(k as u32);
        prop_assert!(r.contains(&ExactRational::one()));
        if k >= 2 {
            prop_assert!(r.contains(&q(1, n)));
        }
        let grid: BTreeSet<_> = (0..=den).map(|d| q(d, den)).collect();
        for v in &r.values {
            prop_assert!(grid.contains(v), "{} not over {}", v, den);
        }
        prop_assert!(r.values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn product_law(seed in any::<u64>(), vars in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(3, &mut rng).unwrap();
        let b = seeded_groupoids(2, 1, seed).unwrap().remove(0);
        let a = a.reduct(&["mul"]).unwrap();
        let e = random_equation(&a.signature(), vars, 3, &mut rng).unwrap();
        let ab = direct_product(&a, &b).unwrap();
        prop_assert_eq!(
            equation_probability(&ab, &e).unwrap(),
            equation_probability(&a, &e).unwrap() * equation_probability(&b, &e).unwrap()
        );
    }

    #[test]
    fn distance_is_a_metric(seed in any::<u64>(), n in 2usize..4, k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = n.pow(k as u32);
        let mut table = || FunctionTable::new(n, k, (0..points).map(|_| rng.gen_range(0..n) as u8).collect()).unwrap();
        let (f, g, h) = (table(), table(), table());
        let d = |x: &FunctionTable, y: &FunctionTable| hamming_distance(x, y).unwrap();
        prop_assert_eq!(d(&f, &f), 0);
        prop_assert_eq!(d(&f, &g) == 0, f == g);
        prop_assert_eq!(d(&f, &g), d(&g, &f));
        prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h));
        prop_assert_eq!(coincidence_mu(&f, &g).unwrap(), q((points - d(&f, &g)) as u64, points as u64));
    }

    #[test]
    fn prim_is_one_minus_normalized_radius(seed in any::<u64>(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(3, &mut rng).unwrap();
        prop_assume!(a.size().pow(a.size().pow(k as u32) as u32) <= 1 << 16);
        let r = prim_at(&a, k, PrimBudget::default()).unwrap();
        let points = a.size().pow(k as u32);
        prop_assert!(r.covering_radius <= points);
        prop_assert_eq!(r.prim.clone(), q((points - r.covering_radius) as u64, points as u64));
        let clone = generate_clone(&a, k, BUDGET).unwrap();
        let (_, mu) = best_approximation(&clone, &r.hardest_function).unwrap();
        prop_assert_eq!(mu, r.prim);
    }
}

#[test]
fn non_primal_order_two_groupoids_are_far_from_primal() {
    for i in 0..16 {
        let a = groupoid2(i);
        if !primal_by_post_test(&a).unwrap().is_primal() {
            let p1 = prim_at(&a, 1, PrimBudget::default()).unwrap().prim;
            assert!(p1 <= q(1, 2), "groupoid2:{i}: {p1}");
        }
    }
}
