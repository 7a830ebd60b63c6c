use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pspec::clone::close_tables;
use pspec::clone::compatible::{compatible_functions, compatible_functions_brute, compatible_functions_orbit};
use pspec::clone::primality::{primal_by_cardinality, primal_by_post_test};
use pspec::corpus::{random_algebra, seeded_groupoids};
use pspec::{automorphism_group, builtin, builtin_algebra, generate_clone, orbit_partition, BuiltinSpec, FunctionTable};

const BUDGET: usize = 1 << 12;

fn groupoid2(i: usize) -> pspec::FiniteAlgebra {
    builtin_algebra(&BuiltinSpec::parse(&format!("groupoid2:{i}")).unwrap()).unwrap()
}

#[test]
fn reduct_clone_is_contained() {
    let full = builtin("boolean2").unwrap();
    let reduct = builtin("bool_lattice").unwrap();
    for k in 1..=3 {
        let big = generate_clone(&full, k, 1 << 20).unwrap();
        let small = generate_clone(&reduct, k, 1 << 20).unwrap();
        assert!(small.tables().iter().all(|t| big.contains(t)), "k={k}");
        assert!(small.len() < big.len());
    }
}

#[test]
fn post_test_agrees_with_counting_on_order_two() {
    for i in 0..16 {
        let a = groupoid2(i);
        assert_eq!(
            primal_by_post_test(&a).unwrap().is_primal(),
            primal_by_cardinality(&a, 1 << 20).unwrap().is_primal(),
            "groupoid2:{i}"
        );
    }
}

#[test]
fn witness_present_iff_not_primal() {
    for i in 0..16 {
        let v = primal_by_post_test(&groupoid2(i)).unwrap();
        assert_eq!(v.witness.is_some(), !v.is_primal(), "groupoid2:{i}");
    }
}

#[test]
fn thread_count_does_not_change_the_clone() {
    for a in seeded_groupoids(3, 4, 7).unwrap() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| generate_clone(&a, 2, BUDGET).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.tables(), four.tables());
        assert_eq!(one.is_complete(), four.is_complete());
    }
}

#[test]
fn compatible_paths_agree() {
    let mut compared = 0;
    for a in seeded_groupoids(3, 6, 3).unwrap().into_iter().chain([builtin("v4").unwrap()]) {
        let g = automorphism_group(&a).unwrap();
        let k = if a.size() > 3 { 1 } else { 2 };
        let orbit = compatible_functions_orbit(&g, k, 1 << 22);
        let brute = compatible_functions_brute(&g, k, 1 << 22);
        if let (Ok(o), Ok(b)) = (orbit, brute) {
            assert_eq!(o.tables, b.tables, "{}", a.name());
            compared += 1;
        }
    }
    assert!(compared >= 4, "only {compared} algebras compared");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn clone_has_projections_and_constants(seed in any::<u64>(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = random_algebra(3, &mut rng).unwrap();
        a = a.with_op("c", FunctionTable::constant(a.size(), 0, 0).unwrap()).unwrap();
        let c = generate_clone(&a, k, BUDGET).unwrap();
        for i in 0..k {
            prop_assert!(c.contains(&FunctionTable::projection(a.size(), k, i).unwrap()));
        }
        prop_assert!(c.contains(&FunctionTable::constant(a.size(), k, 0).unwrap()));
    }

    #[test]
    fn complete_clone_is_closed(seed in any::<u64>(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(3, &mut rng).unwrap();
        let c = generate_clone(&a, k, BUDGET).unwrap();
        prop_assume!(c.is_complete());
        let ops: Vec<&FunctionTable> = a.ops().iter().map(|o| &o.table).collect();
        let again = close_tables(a.size(), k, &ops, c.tables().to_vec(), BUDGET).unwrap();
        prop_assert_eq!(again.tables(), c.tables());
    }

    #[test]
    fn clone_is_inside_compatible_functions(seed in any::<u64>(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(3, &mut rng).unwrap();
        let g = automorphism_group(&a).unwrap();
        let c = generate_clone(&a, k, BUDGET).unwrap();
        let compat = compatible_functions(&a, k, &g, 1 << 22);
        prop_assume!(compat.is_ok());
        let compat = compat.unwrap();
        for t in c.tables() {
            prop_assert!(compat.tables.binary_search(t).is_ok(), "{} not compatible", t);
        }
    }

    #[test]
    fn automorphisms_form_a_group(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(4, &mut rng).unwrap();
        let g = automorphism_group(&a).unwrap();
        let els = g.elements();
        let identity: Vec<usize> = (0..a.size()).collect();
        prop_assert!(els.contains(&identity));
        for p in els {
            for q in els {
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                prop_assert!(els.contains(&pq));
            }
            let mut inv = vec![0; p.len()];
            for (i, &x) in p.iter().enumerate() {
                inv[x] = i;
            }
            prop_assert!(els.contains(&inv));
            for op in a.ops() {
                for i in 0..op.table.len() {
                    let x = pspec::index_tuple(i, op.table.arity(), a.size()).unwrap();
                    let px: Vec<usize> = x.iter().map(|&v| p[v]).collect();
                    prop_assert_eq!(p[op.table.at(i)], op.table.get(&px).unwrap());
                }
            }
        }
        let fixed: Vec<usize> = (0..a.size()).filter(|&x| els.iter().all(|p| p[x] == x)).collect();
        prop_assert_eq!(g.fixed_points(), &fixed[..]);
    }

    #[test]
    fn orbits_partition_the_points(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(4, &mut rng).unwrap();
        let g = automorphism_group(&a).unwrap();
        let part = orbit_partition(&g, k).unwrap();
        let sizes = part.sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), a.size().pow(k as u32));
        for s in &sizes {
            prop_assert_eq!(g.order() % s, 0);
        }
        for point in 0..part.total {
            let x = pspec::index_tuple(point, k, a.size()).unwrap();
            for p in g.elements() {
                let px: Vec<usize> = x.iter().map(|&v| p[v]).collect();
                let image = pspec::tuple_index(&px, a.size()).unwrap();
                prop_assert_eq!(part.orbit_of(image), part.orbit_of(point));
            }
        }
    }
}
