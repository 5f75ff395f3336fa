//! Exhaustive checks over small lattices.

use std::collections::BTreeSet;

use lattice_skein::coeff;
use lattice_skein::poset::{self, BSeq, FiberMode};
use lattice_skein::tree;
use lattice_skein::{CatalanState, LaurentPoly, Oracle};
use num_bigint::BigInt;

mod common;
use common::pluck_by_orders;

fn shapes(max_cells: usize) -> Vec<(usize, usize)> {
    (1..=4)
        .flat_map(|m| (1..=4).map(move |n| (m, n)))
        .filter(|(m, n)| m * n <= max_cells)
        .collect()
}

#[test]
fn expansion_keys_are_realizable_and_sum_to_the_loop_count() {
    let oracle = Oracle::default();
    for (m, n) in shapes(12) {
        let full = oracle.full_expansion(m, n).unwrap();
        let realizable = CatalanState::enumerate_all(m, n).into_iter().filter(|c| c.is_realizable()).count();
        assert!(full.len() <= realizable, "L({m},{n})");
        assert!(full.keys().all(|c| c.is_realizable()), "L({m},{n})");

        let lattice = oracle.lattice(m, n);
        let mut scratch = lattice.scratch();
        let mut direct = BigInt::from(0);
        for bits in 0..1u64 << (m * n) {
            direct += BigInt::from(-2).pow(lattice.trace(bits, &mut scratch));
        }
        let total: BigInt = full.values().map(LaurentPoly::eval_at_one).sum();
        assert_eq!(total, direct, "L({m},{n})");
    }
}

#[test]
fn extreme_degrees_come_from_extreme_sequences() {
    let oracle = Oracle::default();
    for (m, n) in shapes(9).into_iter().filter(|&(m, n)| m <= 3 && n <= 3) {
        for (state, c) in oracle.restricted_expansion(m, n).unwrap() {
            let fib = poset::fiber_with(&state, FiberMode::BruteForce, &oracle).unwrap();
            let (lo, hi) = poset::extremal_of(&fib).unwrap();
            let mn = (m * n) as i64;
            assert_eq!(c.maxdeg().unwrap(), 2 * hi.weight() as i64 - mn, "{state}");
            assert_eq!(c.mindeg().unwrap(), 2 * lo.weight() as i64 - mn, "{state}");
            assert!(c.extremes_are_one(), "{state}: {c}");
            assert_eq!(c.eval_at_one(), BigInt::from(fib.len()), "{state}");
            assert_eq!(poset::lex_max_sequence(&state), Some(hi), "{state}");
        }
    }
}

#[test]
fn removal_orders_of_the_dual_tree_count_the_fiber() {
    let oracle = Oracle::default();
    for (m, n) in shapes(9).into_iter().filter(|&(m, n)| m <= 3 && n <= 3) {
        for state in oracle.restricted_expansion(m, n).unwrap().keys() {
            let (t, d) = tree::tree_of(state).unwrap();
            let orders = pluck_by_orders(&t, d.values());
            assert_eq!(orders, tree::plucking(&t, &d), "{state}");
            assert_eq!(orders.eval_at_one(), BigInt::from(poset::fiber(state).unwrap().len()), "{state}");
        }
    }
}

#[test]
fn factoring_at_any_gap_matches_the_oracle() {
    let oracle = Oracle::default();
    let mut factored = 0;
    for m in 2..=4 {
        for n in 1..=3 {
            for (state, c) in oracle.full_expansion(m, n).unwrap() {
                for gap in state.full_cross_sections() {
                    assert_eq!(coeff::coefficient_factored_at(&state, gap).unwrap(), c, "{state} at {gap}");
                    factored += 1;
                }
            }
        }
    }
    assert!(factored > 0);
}

#[test]
fn fiber_modes_are_identical() {
    let oracle = Oracle::default();
    for (m, n) in shapes(12) {
        for state in oracle.restricted_expansion(m, n).unwrap().keys() {
            assert_eq!(
                poset::fiber_with(state, FiberMode::BruteForce, &oracle).unwrap(),
                poset::fiber_with(state, FiberMode::Peeling, &oracle).unwrap(),
                "{state}"
            );
        }
    }
}

/// Sequences the singleton-fiber characterization names: `k` copies of
/// `n-1` followed by `n`s, or `k` ones followed by zeros, with `k >= 1`.
fn named_singletons(m: usize, n: usize) -> BTreeSet<Vec<u16>> {
    let n = n as u16;
    let mut out = BTreeSet::new();
    for k in 1..=m {
        out.insert((0..m).map(|i| if i < k { n - 1 } else { n }).collect());
        out.insert((0..m).map(|i| u16::from(i < k)).collect());
    }
    out
}

#[test]
fn singleton_fibers_survey() {
    let oracle = Oracle::default();
    for (m, n) in shapes(16).into_iter().filter(|&(m, _)| m >= 2) {
        let singles: BTreeSet<Vec<u16>> = oracle
            .restricted_expansion(m, n)
            .unwrap()
            .keys()
            .filter_map(|c| {
                let f = poset::fiber(c).unwrap();
                (f.len() == 1).then(|| f.into_iter().next().map(|b: BSeq| b.entries().to_vec()).unwrap())
            })
            .collect();
        let named = named_singletons(m, n);
        let missed: Vec<_> = singles.difference(&named).collect();
        let wrong: Vec<_> = named.difference(&singles).collect();
        println!("L({m},{n}): {} singleton fibers; unnamed {missed:?}; named but larger {wrong:?}", singles.len());
        // every sequence with a singleton fiber is a fixed point of all P moves
        for b in &singles {
            let b = BSeq::new(n, b.clone()).unwrap();
            assert!((1..m).all(|i| b.p_move(i).is_err() && b.p_move_inv(i).is_err()), "{b}");
        }
    }
}
