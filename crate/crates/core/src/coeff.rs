//! The coefficient `C(A)` of a Catalan state by the tree formula, by
//! factorization along a full horizontal cross-section, and the property
//! report built on top of them.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{q_multinomial, LaurentPoly, QPoly, SeqReport};
use crate::catalan::{CatalanError, CatalanState, Point};
use crate::oracle::{Oracle, OracleError};
use crate::poset::{self, BSeq, PosetError};
use crate::tree::{self, PlaneTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("state has a floor return")]
    FloorReturnPresent,
    #[error("state is not realizable")]
    NotRealizable,
    #[error("tree is not a wedge of paths with trivial delays: {0}")]
    ShapeMismatch(String),
    #[error("no horizontal gap is met exactly n times")]
    NoCrossSection,
    #[error(transparent)]
    Catalan(#[from] CatalanError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// How a coefficient was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Fiber,
    Tree,
    Factored,
    Oracle,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Fiber => "fiber",
            Route::Tree => "tree",
            Route::Factored => "factored",
            Route::Oracle => "oracle",
        })
    }
}

impl std::str::FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fiber" => Ok(Route::Fiber),
            "tree" => Ok(Route::Tree),
            "factored" => Ok(Route::Factored),
            "oracle" => Ok(Route::Oracle),
            other => Err(format!("unknown route {other:?}")),
        }
    }
}

/// Everything the tree formula produces along the way.
#[derive(Clone, Debug)]
pub struct TreeCoefficient {
    pub b_max: BSeq,
    pub tree: PlaneTree,
    pub delays: tree::DelayFn,
    pub q: QPoly,
    pub mindeg_q: usize,
    /// `2|b_max| - mn + 4 mindeg_q Q`.
    pub shift: i64,
    pub coefficient: LaurentPoly,
}

fn check_tree_preconditions(state: &CatalanState) -> Result<(), CoeffError> {
    if state.floor_returns() {
        return Err(CoeffError::FloorReturnPresent);
    }
    if !state.is_realizable() {
        return Err(CoeffError::NotRealizable);
    }
    Ok(())
}

/// `C(A) = A^{2|b_max| - mn + 4 mindeg Q} Q(T(C), f)|_{q = A^-4}`.
///
/// The shift makes the top degree of `C(A)` equal to `2|b_max| - mn`, the
/// exponent of the heaviest sequence in the fiber.
pub fn coefficient_tree_detailed(state: &CatalanState) -> Result<TreeCoefficient, CoeffError> {
    check_tree_preconditions(state)?;
    let b_max = poset::lex_max_sequence(state).ok_or(CoeffError::NotRealizable)?;
    let (tree, delays) = tree::tree_of(state)?;
    let q = tree::plucking(&tree, &delays);
    let mindeg_q = q.mindeg().map_err(|_| CoeffError::NotRealizable)?;
    let shift = b_max.exponent() + 4 * mindeg_q as i64;
    let coefficient = q.subst_q_to_a_inv4().shift(shift);
    Ok(TreeCoefficient {
        b_max,
        tree,
        delays,
        q,
        mindeg_q,
        shift,
        coefficient,
    })
}

pub fn coefficient_tree(state: &CatalanState) -> Result<LaurentPoly, CoeffError> {
    coefficient_tree_detailed(state).map(|t| t.coefficient)
}

/// Path lengths of a tree whose root children each start a bare path.
fn wedge_lengths(tree: &PlaneTree) -> Option<Vec<usize>> {
    tree.children()
        .iter()
        .map(|c| {
            let mut len = 1;
            let mut node = c;
            loop {
                match node.children() {
                    [] => return Some(len),
                    [only] => {
                        len += 1;
                        node = only;
                    }
                    _ => return None,
                }
            }
        })
        .collect()
}

/// Closed form for states whose tree is a wedge of paths at the root with
/// all delays 1: `A^{2|b_max| - mn}` times the q-multinomial of the path
/// lengths at `q = A^-4`.
pub fn coefficient_ceiling_closed(state: &CatalanState) -> Result<LaurentPoly, CoeffError> {
    check_tree_preconditions(state)?;
    let (tree, delays) = tree::tree_of(state)?;
    if !delays.is_trivial() {
        return Err(CoeffError::ShapeMismatch(format!("delays {:?}", delays.values())));
    }
    let lengths = wedge_lengths(&tree).ok_or_else(|| CoeffError::ShapeMismatch(tree.paren()))?;
    let b_max = poset::lex_max_sequence(state).ok_or(CoeffError::NotRealizable)?;
    let q = q_multinomial(&lengths).expect("path lengths are positive");
    Ok(q.subst_q_to_a_inv4().shift(b_max.exponent()))
}

/// Coefficient of the lower piece of a split: the reflected piece has no
/// floor returns, and reflecting swaps `A` and `A^-1`.
fn lower_piece(lower: &CatalanState) -> Result<LaurentPoly, CoeffError> {
    let up = lower.reflect_x();
    let c = match coefficient_factored(&up) {
        Ok(c) => c,
        Err(CoeffError::NoCrossSection) => coefficient_tree(&up)?,
        Err(e) => return Err(e),
    };
    Ok(c.invert_variable())
}

fn upper_piece(upper: &CatalanState) -> Result<LaurentPoly, CoeffError> {
    match coefficient_factored(upper) {
        Ok(c) => Ok(c),
        Err(CoeffError::NoCrossSection) => coefficient_tree(upper),
        Err(e) => Err(e),
    }
}

/// Factorization across the horizontal gap `k`, which must be met by
/// exactly `n` arcs.
pub fn coefficient_factored_at(state: &CatalanState, k: usize) -> Result<LaurentPoly, CoeffError> {
    if !state.is_realizable() {
        return Err(CoeffError::NotRealizable);
    }
    let (upper, lower) = state.split_at_row(k).map_err(|_| CoeffError::NoCrossSection)?;
    let top = upper_piece(&upper)?;
    let bottom = lower_piece(&lower)?;
    Ok(&top * &bottom)
}

/// Factorization at the topmost full cross-section, recursing into both pieces.
pub fn coefficient_factored(state: &CatalanState) -> Result<LaurentPoly, CoeffError> {
    let k = *state.full_cross_sections().first().ok_or(CoeffError::NoCrossSection)?;
    coefficient_factored_at(state, k)
}

/// `C^(m)(A)` from `C^(2k+1) = A(1 + X C^(2k))`, `C^(2k) = A^-1 X C^(2k-1)`,
/// `X = A^2 + A^-2`, starting from `C^(0) = 0`.
pub fn family_cm(m: usize) -> LaurentPoly {
    let x = LaurentPoly::a2_plus_am2();
    let mut c = LaurentPoly::zero();
    for k in 1..=m {
        c = if k % 2 == 1 {
            LaurentPoly::a_pow(1) * (LaurentPoly::one() + &x * &c)
        } else {
            &(&LaurentPoly::a_pow(-1) * &x) * &c
        };
    }
    c
}

/// The state `C^(m)` in `L(m,3)` whose coefficient is [`family_cm`]`(m)`.
///
/// The arcs zigzag without nesting: `x1-x2` and `x3-y'1` on top, adjacent
/// pairs down the right side, `x'3-x'2` (odd `m`) or `y'm-x'3, x'2-x'1`
/// (even `m`) at the bottom, and adjacent pairs back up the left side.
pub fn family_state(m: usize) -> Result<CatalanState, CatalanError> {
    assert!(m >= 1);
    let mut arcs = vec![(Point::X(1), Point::X(2)), (Point::X(3), Point::Yp(1))];
    let mut j = 2;
    while j < m {
        arcs.push((Point::Yp(j), Point::Yp(j + 1)));
        j += 2;
    }
    if m % 2 == 1 {
        arcs.push((Point::Xp(3), Point::Xp(2)));
        arcs.push((Point::Xp(1), Point::Y(m)));
    } else {
        arcs.push((Point::Yp(m), Point::Xp(3)));
        arcs.push((Point::Xp(2), Point::Xp(1)));
    }
    let mut i = if m % 2 == 1 { m - 1 } else { m };
    while i >= 2 {
        arcs.push((Point::Y(i), Point::Y(i - 1)));
        i -= 2;
    }
    CatalanState::from_arcs(m, 3, &arcs)
}

/// A 3x3 state without ceiling or floor returns whose coefficient is
/// `A + A^-3 + A^-7`; it stacks with itself along its floor.
pub fn three_block() -> CatalanState {
    CatalanState::from_arcs(
        3,
        3,
        &[
            (Point::X(1), Point::Y(1)),
            (Point::X(2), Point::Y(2)),
            (Point::X(3), Point::Yp(1)),
            (Point::Yp(2), Point::Xp(2)),
            (Point::Yp(3), Point::Xp(3)),
            (Point::Xp(1), Point::Y(3)),
        ],
    )
    .expect("valid state")
}

/// [`three_block`] stacked over a two-row piece whose coefficient is 1, so
/// that the factored route applies: the gap below row 3 is met 3 times.
pub fn three_block_concatenated() -> CatalanState {
    CatalanState::from_arcs(
        5,
        3,
        &[
            (Point::X(1), Point::Y(1)),
            (Point::X(2), Point::Y(2)),
            (Point::X(3), Point::Yp(1)),
            (Point::Yp(2), Point::Xp(2)),
            (Point::Yp(3), Point::Xp(3)),
            (Point::Yp(4), Point::Yp(5)),
            (Point::Xp(1), Point::Y(5)),
            (Point::Y(4), Point::Y(3)),
        ],
    )
    .expect("valid state")
}

/// `k`-fold vertical stack of [`three_block`].
pub fn three_block_power(k: usize) -> CatalanState {
    assert!(k >= 1);
    let block = three_block();
    (1..k).fold(block.clone(), |acc, _| acc.stack_v(&block).expect("block has no ceiling or floor returns"))
}

/// Computes `C(A)` by the requested route.
pub fn coefficient_by(state: &CatalanState, route: Route, oracle: &Oracle) -> Result<LaurentPoly, CoeffError> {
    match route {
        Route::Tree => coefficient_tree(state),
        Route::Factored => coefficient_factored(state),
        Route::Fiber => {
            check_tree_preconditions(state)?;
            let fib = poset::fiber_with(state, poset::FiberMode::Peeling, oracle)?;
            Ok(poset::coeff_of_fiber(&fib))
        }
        Route::Oracle => oracle_bucket(state, oracle),
    }
}

/// Bucket of `state` in the oracle expansion. States without floor returns
/// use the cheaper restricted sum.
pub fn oracle_bucket(state: &CatalanState, oracle: &Oracle) -> Result<LaurentPoly, CoeffError> {
    let (m, n) = (state.m(), state.n());
    let expansion = if state.floor_returns() {
        oracle.full_expansion(m, n)?
    } else {
        oracle.restricted_expansion(m, n)?
    };
    Ok(expansion.get(state).cloned().unwrap_or_else(LaurentPoly::zero))
}

/// Picks the cheapest route that applies: tree without floor returns, then
/// factorization, then the oracle.
pub fn best_route(state: &CatalanState) -> Route {
    if !state.floor_returns() {
        Route::Tree
    } else if !state.full_cross_sections().is_empty() {
        Route::Factored
    } else {
        Route::Oracle
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoeffReport {
    pub state: CatalanState,
    #[serde(serialize_with = "as_text")]
    pub coefficient: LaurentPoly,
    pub route: Route,
    /// Predicates of the coefficient read in steps of `A^step`.
    pub step: i64,
    pub properties: SeqReport,
    pub b_min: Option<String>,
    pub b_max: Option<String>,
    pub mindeg_q: Option<usize>,
    pub expectations: Vec<Expectation>,
}

fn as_text<S: serde::Serializer>(p: &LaurentPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl CoeffReport {
    pub fn expectations_hold(&self) -> bool {
        self.expectations.iter().all(|e| e.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Step-4 predicates, falling back to step 2 when exponents are off the grid.
pub fn sequence_report(c: &LaurentPoly) -> (i64, SeqReport) {
    for step in [4, 2, 1] {
        if let Some((_, seq)) = c.coefficient_sequence(step) {
            return (step, SeqReport::of(&seq));
        }
    }
    (4, SeqReport::of(&[]))
}

/// Computes the coefficient by `route` (or the best one) and checks the
/// properties expected of it.
///
/// Floor-return-free states must have positive coefficients with extremes
/// 1 and no gaps; ceiling-only-return states must also be palindromic and
/// unimodal; realizable states with `n = 3` must have no gaps and extremes 1.
pub fn property_report(state: &CatalanState, route: Option<Route>, oracle: &Oracle) -> Result<CoeffReport, CoeffError> {
    if !state.is_realizable() {
        return Err(CoeffError::NotRealizable);
    }
    let route = route.unwrap_or_else(|| best_route(state));
    let (coefficient, b_max, mindeg_q) = if route == Route::Tree {
        let t = coefficient_tree_detailed(state)?;
        (t.coefficient, Some(t.b_max), Some(t.mindeg_q))
    } else {
        let c = coefficient_by(state, route, oracle)?;
        let b_max = if state.floor_returns() { None } else { poset::lex_max_sequence(state) };
        (c, b_max, None)
    };
    let b_min = if state.floor_returns() {
        None
    } else {
        poset::fiber_peeling(state).into_iter().next()
    };
    let (step, properties) = sequence_report(&coefficient);
    let mut expectations = Vec::new();
    if !state.floor_returns() {
        expectations.push(Expectation { name: "positive", holds: coefficient.all_positive() });
        expectations.push(Expectation { name: "extremes_one", holds: coefficient.extremes_are_one() });
        expectations.push(Expectation { name: "no_gaps", holds: properties.no_gaps });
    }
    if state.ceiling_only_returns() {
        expectations.push(Expectation { name: "palindromic", holds: properties.palindromic });
        expectations.push(Expectation { name: "unimodal", holds: properties.unimodal });
    }
    if state.n() == 3 {
        expectations.push(Expectation { name: "n3_no_gaps", holds: properties.no_gaps });
        expectations.push(Expectation { name: "n3_extremes_one", holds: coefficient.extremes_are_one() });
    }
    Ok(CoeffReport {
        state: state.clone(),
        coefficient,
        route,
        step,
        properties,
        b_min: b_min.map(|b| b.to_string()),
        b_max: b_max.map(|b| b.to_string()),
        mindeg_q,
        expectations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q_int;
    use crate::catalan::parse_arcs;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn state(m: usize, n: usize, arcs: &[(&str, &str)]) -> CatalanState {
        CatalanState::from_arcs(m, n, &parse_arcs(arcs).unwrap()).unwrap()
    }

    #[test]
    fn family_values() {
        assert_eq!(family_cm(1), lp("A"));
        assert_eq!(family_cm(2), lp("A^2 + A^-2"));
        assert_eq!(family_cm(3), lp("A^5 + 3A + A^-3"));
    }

    #[test]
    fn family_closed_forms_without_division() {
        let x = LaurentPoly::a2_plus_am2();
        let denom = &x.pow(2) - &LaurentPoly::one();
        for m in 1..=8usize {
            let lhs = &family_cm(m) * &denom;
            let rhs = if m % 2 == 1 {
                LaurentPoly::a_pow(1) * (&x.pow(m as u32 + 1) - &LaurentPoly::one())
            } else {
                &x * &(&x.pow(m as u32) - &LaurentPoly::one())
            };
            assert_eq!(lhs, rhs, "m={m}");
        }
    }

    #[test]
    fn family_states_are_valid() {
        for m in 1..=8 {
            let c = family_state(m).unwrap();
            assert!(c.is_realizable(), "m={m}");
        }
    }

    #[test]
    fn cups_by_tree() {
        let n = 4;
        for b in 0..=n as u16 {
            let c = BSeq::new(n, vec![b]).unwrap().state();
            assert_eq!(coefficient_tree(&c).unwrap(), LaurentPoly::a_pow(2 * b as i64 - n as i64));
            assert_eq!(coefficient_ceiling_closed(&c).unwrap(), LaurentPoly::a_pow(2 * b as i64 - n as i64));
        }
    }

    #[test]
    fn heavy_example_by_tree() {
        let c = BSeq::parse("(3,4,4,3)", 4).unwrap().state();
        let t = coefficient_tree_detailed(&c).unwrap();
        assert_eq!(t.b_max.to_string(), "(3,4,4,3)");
        assert_eq!(t.coefficient, lp("1 + 2A^4 + A^8 + A^12"));
        assert!(matches!(coefficient_ceiling_closed(&c), Err(CoeffError::ShapeMismatch(_))));
    }

    #[test]
    fn wedges_match_closed_form() {
        let star = state(2, 2, &[("x1", "y1"), ("x2", "yp1"), ("yp2", "xp2"), ("xp1", "y2")]);
        assert_eq!(tree::tree_of(&star).unwrap().0, PlaneTree::star(2));
        assert_eq!(coefficient_ceiling_closed(&star).unwrap(), q_int(2).subst_q_to_a_inv4().shift(2));
        assert_eq!(coefficient_tree(&star).unwrap(), lp("A^2 + A^-2"));

        let wedge = state(
            4,
            4,
            &[("x1", "y1"), ("x2", "y2"), ("x3", "yp2"), ("x4", "yp1"), ("yp3", "xp3"), ("yp4", "xp4"), ("xp2", "y3"), ("xp1", "y4")],
        );
        assert_eq!(tree::tree_of(&wedge).unwrap().0, PlaneTree::wedge_of_paths(&[2, 2]));
        let closed = coefficient_ceiling_closed(&wedge).unwrap();
        assert_eq!(closed, "1 + q + 2q^2 + q^3 + q^4".parse::<QPoly>().unwrap().subst_q_to_a_inv4().shift(8));
        assert_eq!(closed, coefficient_tree(&wedge).unwrap());

        let path = BSeq::new(3, vec![3, 3]).unwrap().state();
        assert_eq!(coefficient_ceiling_closed(&path).unwrap(), LaurentPoly::a_pow(6));
    }

    #[test]
    fn three_block_coefficient() {
        let c = three_block();
        assert!(!c.floor_returns() && !c.ceiling_returns());
        assert_eq!(coefficient_tree(&c).unwrap(), lp("A + A^-3 + A^-7"));
        assert_eq!(coefficient_tree(&c).unwrap(), q_int(3).subst_q_to_a_inv4().shift(1));
    }

    #[test]
    fn concatenation_factors_through_the_block() {
        let c = three_block_concatenated();
        let (top, _) = c.split_at_row(3).unwrap();
        assert_eq!(top, three_block());
        assert_eq!(coefficient_factored(&c).unwrap(), lp("A + A^-3 + A^-7"));
        assert_eq!(coefficient_factored_at(&c, 4).unwrap(), lp("A + A^-3 + A^-7"));
        assert_eq!(coefficient_factored(&three_block()), Err(CoeffError::NoCrossSection));
    }

    #[test]
    fn errors() {
        let c = BSeq::new(2, vec![1]).unwrap().state().reflect_x();
        assert_eq!(coefficient_tree(&c), Err(CoeffError::FloorReturnPresent));
        assert_eq!(coefficient_factored(&c), Err(CoeffError::NoCrossSection));
        assert_eq!("tree".parse::<Route>(), Ok(Route::Tree));
        assert!("magic".parse::<Route>().is_err());
    }

    #[test]
    fn report_json() {
        let c = BSeq::parse("(3,4,4,3)", 4).unwrap().state();
        let r = property_report(&c, None, &Oracle::default()).unwrap();
        assert_eq!(r.route, Route::Tree);
        assert!(r.properties.positive && !r.properties.palindromic);
        assert!(r.expectations_hold());
        let json = r.to_json();
        assert!(json.contains("\"route\": \"tree\""));
        assert!(json.contains("1 + 2A^4 + A^8 + A^12"));
    }
}
