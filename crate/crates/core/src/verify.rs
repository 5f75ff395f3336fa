//! Cross-checks of every route against the Kauffman state sum over a range
//! of lattice shapes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::catalan::{CatalanState, Point};
use crate::coeff::{self, CoeffError};
use crate::oracle::{KauffmanState, Oracle, OracleError};
use crate::par::map_items;
use crate::poset::{self, FiberMode, FiberPoset};
use crate::tree;

/// Pass/fail tally of one named check, with the first failure seen.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckTally {
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl CheckTally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(witness());
            }
        }
    }

    fn merge(&mut self, other: CheckTally) {
        self.passed += other.passed;
        self.failed += other.failed;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

/// States seen on one lattice shape.
#[derive(Clone, Debug, Serialize)]
pub struct ShapeCount {
    pub m: usize,
    pub n: usize,
    /// States without floor returns (restricted buckets).
    pub floor_free: usize,
    /// All states reached by the full sum, when it fit the budget.
    pub total: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepReport {
    pub shapes: Vec<ShapeCount>,
    /// Shapes skipped because the full state sum exceeds the budget.
    pub skipped: Vec<(usize, usize)>,
    pub checks: BTreeMap<&'static str, CheckTally>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.checks.values().all(|c| c.failed == 0)
    }

    pub fn states_checked(&self) -> usize {
        self.shapes.iter().map(|s| s.total.unwrap_or(s.floor_free)).sum()
    }

    pub fn failures(&self) -> u64 {
        self.checks.values().map(|c| c.failed).sum()
    }

    fn tally(&mut self, name: &'static str) -> &mut CheckTally {
        self.checks.entry(name).or_default()
    }

    fn absorb(&mut self, part: BTreeMap<&'static str, CheckTally>) {
        for (k, v) in part {
            self.tally(k).merge(v);
        }
    }
}

/// The cup `e_b` on `L(1, n)`, built from its arc list.
pub fn cup(n: usize, b: usize) -> CatalanState {
    assert!(n >= 1 && b <= n);
    let mut arcs = Vec::with_capacity(n + 1);
    arcs.push(match b {
        0 => (Point::Y(1), Point::X(1)),
        b if b == n => (Point::X(n), Point::Yp(1)),
        b => (Point::X(b), Point::X(b + 1)),
    });
    if b >= 1 {
        arcs.push((Point::Y(1), Point::Xp(1)));
    }
    if b < n {
        arcs.push((Point::Xp(n), Point::Yp(1)));
    }
    for j in 1..=n {
        if j < b {
            arcs.push((Point::X(j), Point::Xp(j + 1)));
        } else if j > b + 1 {
            arcs.push((Point::X(j), Point::Xp(j - 1)));
        }
    }
    CatalanState::from_arcs(1, n, &arcs).expect("cup arcs form a state")
}

/// Checks that the row pattern `(+1)^b (-1)^{n-b}` smooths to `e_b`.
pub fn calibrate(n: usize, oracle: &Oracle) -> CheckTally {
    let lattice = oracle.lattice(1, n);
    let mut tally = CheckTally::default();
    for b in 0..=n {
        let s = KauffmanState::from_b_values(n, &[b as u16]);
        let got = lattice.smooth(&s).expect("shape matches");
        let want = cup(n, b);
        tally.record(got.loops == 0 && got.state == want, || {
            format!("n={n} b={b}: pattern smooths to {} with {} loops, expected {want}", got.state, got.loops)
        });
    }
    tally
}

fn check_state(
    state: &CatalanState,
    full: Option<&crate::algebra::LaurentPoly>,
    restricted: &crate::algebra::LaurentPoly,
    oracle: &Oracle,
) -> BTreeMap<&'static str, CheckTally> {
    let mut out: BTreeMap<&'static str, CheckTally> = BTreeMap::new();
    let mut rec = |name: &'static str, ok: bool, why: &dyn Fn() -> String| {
        out.entry(name).or_default().record(ok, || format!("{} {}", state.to_json(), why()));
    };
    let fiber = poset::fiber_peeling(state);
    let by_fiber = poset::coeff_of_fiber(&fiber);
    rec("fiber_vs_restricted", &by_fiber == restricted, &|| format!("fiber {by_fiber} vs restricted {restricted}"));
    if let Some(full) = full {
        rec("restricted_vs_full", restricted == full, &|| format!("restricted {restricted} vs full {full}"));
    }
    match coeff::coefficient_tree_detailed(state) {
        Ok(t) => {
            rec("tree_vs_fiber", t.coefficient == by_fiber, &|| format!("tree {} vs fiber {by_fiber}", t.coefficient));
            let orders = t.q.eval_at_one();
            rec("removal_orders_vs_fiber", orders == fiber.len().into(), &|| {
                format!("{orders} removal orders vs fiber of size {}", fiber.len())
            });
        }
        Err(e) => rec("tree_vs_fiber", false, &|| format!("tree route failed: {e}")),
    }
    let poset = FiberPoset::from_fiber(&fiber);
    let hasse = poset.check();
    rec("hasse", hasse.is_ok(), &|| format!("{hasse:?}"));
    match poset::extremal_of(&fiber) {
        Ok((_, hi)) => {
            let lex = poset::lex_max_sequence(state);
            rec("lex_max_is_weight_max", lex.as_ref() == Some(&hi), &|| format!("lex max {lex:?}, weight max {hi}"));
        }
        Err(e) => rec("lex_max_is_weight_max", false, &|| e.to_string()),
    }
    if !state.full_cross_sections().is_empty() {
        let f = coeff::coefficient_factored(state);
        rec("factored_vs_oracle", f.as_ref() == Ok(restricted), &|| format!("factored {f:?} vs {restricted}"));
    }
    match coeff::property_report(state, None, oracle) {
        Ok(r) => rec("expected_properties", r.expectations_hold(), &|| {
            let failed: Vec<_> = r.expectations.iter().filter(|e| !e.holds).map(|e| e.name).collect();
            format!("{} fails {failed:?}", r.coefficient)
        }),
        Err(e) => rec("expected_properties", false, &|| e.to_string()),
    }
    out
}

fn check_floor_state(state: &CatalanState, full: &crate::algebra::LaurentPoly) -> BTreeMap<&'static str, CheckTally> {
    let mut out: BTreeMap<&'static str, CheckTally> = BTreeMap::new();
    if state.is_realizable() && !state.full_cross_sections().is_empty() {
        let f = coeff::coefficient_factored(state);
        out.entry("factored_vs_oracle")
            .or_default()
            .record(f.as_ref() == Ok(full), || format!("{} factored {f:?} vs oracle {full}", state.to_json()));
    }
    if state.n() == 3 && state.is_realizable() {
        let (_, props) = coeff::sequence_report(full);
        out.entry("n3_no_gaps_extremes_one")
            .or_default()
            .record(props.no_gaps && full.extremes_are_one(), || format!("{} {full}", state.to_json()));
    }
    out
}

/// Runs every check on `L(m, n)` for `1 <= m <= max_m`, `1 <= n <= max_n`.
pub fn sweep(max_m: usize, max_n: usize, oracle: &Oracle) -> Result<SweepReport, OracleError> {
    let shapes: Vec<_> = (1..=max_m).flat_map(|m| (1..=max_n).map(move |n| (m, n))).collect();
    sweep_shapes(&shapes, oracle)
}

/// Runs every check on the given shapes.
///
/// Shapes whose restricted sum exceeds the budget are skipped; the full sum
/// is used only where it fits.
pub fn sweep_shapes(shapes: &[(usize, usize)], oracle: &Oracle) -> Result<SweepReport, OracleError> {
    let mut report = SweepReport::default();
    let max_n = shapes.iter().map(|s| s.1).max().unwrap_or(0);
    for n in 1..=max_n {
        let t = calibrate(n, oracle);
        report.tally("calibration").merge(t);
    }
    for &(m, n) in shapes {
        let restricted = match oracle.restricted_expansion(m, n) {
            Ok(r) => r,
            Err(OracleError::BudgetExceeded { .. }) => {
                report.skipped.push((m, n));
                continue;
            }
            Err(OracleError::LoopInRestrictedState(b)) => {
                report
                    .tally("restricted_loop_free")
                    .record(false, || format!("L({m},{n}): sequence {b:?} leaves a loop"));
                continue;
            }
            Err(e) => return Err(e),
        };
        report.tally("restricted_loop_free").record(true, String::new);
        let full = match oracle.full_expansion(m, n) {
            Ok(f) => Some(f),
            Err(OracleError::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        report.shapes.push(ShapeCount {
            m,
            n,
            floor_free: restricted.len(),
            total: full.as_ref().map(|f| f.len()),
        });
        let states: Vec<_> = restricted.iter().collect();
        let parts = map_items(oracle.exec, &states, |(state, poly)| {
            check_state(state, full.as_ref().and_then(|f| f.get(*state)), poly, oracle)
        });
        for p in parts {
            report.absorb(p);
        }
        if let Some(full) = &full {
            // the restricted sum reaches exactly the states without floor returns
            let reached = full.keys().filter(|c| !c.floor_returns()).count() == restricted.len();
            report
                .tally("restricted_covers_floor_free")
                .record(reached, || format!("L({m},{n}): restricted buckets do not match floor-free states"));
            let floor: Vec<_> = full.iter().filter(|(c, _)| c.floor_returns()).collect();
            for p in map_items(oracle.exec, &floor, |(state, poly)| check_floor_state(state, poly)) {
                report.absorb(p);
            }
        }
    }
    Ok(report)
}

/// Checks on `count` random trees with at most `max_edges` edges: the
/// recursion against the product formula, the degree formula, the sequence
/// predicates and invariance under re-embedding.
pub fn tree_sweep(count: usize, max_edges: usize, seed: u64) -> BTreeMap<&'static str, CheckTally> {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: BTreeMap<&'static str, CheckTally> = BTreeMap::new();
    for _ in 0..count {
        let edges = rng.gen_range(0..=max_edges);
        let t = tree::random_tree(edges, &mut rng);
        let rec = tree::plucking(&t, &tree::DelayFn::ones(&t));
        let closed = tree::plucking_closed(&t);
        let mut put = |name: &'static str, ok: bool| {
            out.entry(name).or_default().record(ok, || format!("tree {t}: Q = {rec}, product formula {closed}"));
        };
        put("recursion_vs_product", rec == closed);
        put("degree_formula", closed.degree().ok() == Some(tree::q_degree(&t)));
        put("predicates", closed.predicates().map(|r| r.all()).unwrap_or(false));
        let other = tree::reembed(&t, &mut rng);
        put("reembedding", tree::plucking(&other, &tree::DelayFn::ones(&other)) == rec);
    }
    out
}

/// Fiber of `state` computed both ways, for spot checks.
pub fn fiber_modes_agree(state: &CatalanState, oracle: &Oracle) -> Result<bool, CoeffError> {
    let a = poset::fiber_with(state, FiberMode::BruteForce, oracle)?;
    let b = poset::fiber_with(state, FiberMode::Peeling, oracle)?;
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::MarkerConvention;

    #[test]
    fn cups_match_patterns() {
        for n in 1..=5 {
            let t = calibrate(n, &Oracle::default());
            assert_eq!(t.failed, 0, "{:?}", t.first_failure);
        }
    }

    #[test]
    fn flipped_convention_is_caught() {
        let oracle = Oracle::default().with_convention(MarkerConvention::Flipped);
        let t = calibrate(3, &oracle);
        assert!(t.failed > 0);
        assert!(t.first_failure.is_some());
    }

    #[test]
    fn random_trees_pass() {
        let r = tree_sweep(50, 8, 7);
        assert!(r.values().all(|t| t.failed == 0), "{r:#?}");
        assert_eq!(r["reembedding"].passed, 50);
    }

    #[test]
    fn small_sweep_passes() {
        let r = sweep(2, 3, &Oracle::default()).unwrap();
        assert!(r.ok(), "{r:#?}");
        assert!(r.checks["tree_vs_fiber"].passed > 0);
        assert!(r.checks["factored_vs_oracle"].passed > 0);
    }
}
