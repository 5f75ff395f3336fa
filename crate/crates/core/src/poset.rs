//! Sequences `b = (b_1..b_m)` in `{0..n}^m`, the restricted Kauffman state
//! they select, and the poset structure on the fiber of a Catalan state.
//!
//! Row `i` of the restricted state `s(b)` is `(+1)^{b_i} (-1)^{n-b_i}`. The
//! fiber of a state `C` without floor returns is the set of `b` with
//! `C(b) = C`; the P-moves `P_i` connect it and its coefficient is
//! `sum_b A^{2|b| - mn}`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use petgraph::algo::{connected_components, is_cyclic_directed};
use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::LaurentPoly;
use crate::catalan::{Boundary, CatalanState, Point};
use crate::oracle::{decode_b, KauffmanState, Lattice, Oracle, OracleError};
use crate::par::fold_range;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("entry {value} at position {pos} is outside 0..={n}")]
    OutOfRange { pos: usize, value: usize, n: usize },
    #[error("P_{i} does not apply to {seq}")]
    PreconditionFailed { i: usize, seq: String },
    #[error("bad sequence text {0:?}")]
    Parse(String),
    #[error("state has an empty fiber (floor return or not realizable)")]
    EmptyFiber,
    #[error("extremal weight is not attained uniquely")]
    NonUniqueExtremal,
    #[error("hasse diagram invariant violated: {0}")]
    HasseInvariant(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A sequence `b = (b_1..b_m)` with `0 <= b_i <= n`.
///
/// Ordered lexicographically by entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BSeq {
    entries: Vec<u16>,
    #[serde(skip)]
    n: u16,
}

impl BSeq {
    pub fn new(n: usize, entries: Vec<u16>) -> Result<Self, PosetError> {
        if let Some((pos, &v)) = entries.iter().enumerate().find(|(_, &v)| v as usize > n) {
            return Err(PosetError::OutOfRange { pos: pos + 1, value: v as usize, n });
        }
        Ok(Self { entries, n: n as u16 })
    }

    /// Parses the text form `(3,4,4,3)`.
    pub fn parse(text: &str, n: usize) -> Result<Self, PosetError> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| PosetError::Parse(text.to_string()))?;
        let entries = inner
            .split(',')
            .map(|t| t.trim().parse::<u16>().map_err(|_| PosetError::Parse(text.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, entries)
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    /// `m`, the number of rows.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// `|b| = sum b_i`.
    pub fn weight(&self) -> usize {
        self.entries.iter().map(|&b| b as usize).sum()
    }

    pub fn kauffman_state(&self) -> KauffmanState {
        KauffmanState::from_b_values(self.n(), &self.entries)
    }

    /// The Catalan state `C(b)` realized by the restricted state `s(b)`.
    pub fn state(&self) -> CatalanState {
        let lattice = Lattice::new(self.len(), self.n());
        lattice.smooth(&self.kauffman_state()).expect("shape matches").state
    }

    /// `P_i` for 1-based `i`: requires `b_i < b_{i+1} < n` and maps the pair
    /// to `(b_{i+1} + 1, b_i + 1)`.
    pub fn p_move(&self, i: usize) -> Result<BSeq, PosetError> {
        let fail = || PosetError::PreconditionFailed { i, seq: self.to_string() };
        if i == 0 || i >= self.len() {
            return Err(fail());
        }
        let (a, b) = (self.entries[i - 1], self.entries[i]);
        if !(a < b && b < self.n) {
            return Err(fail());
        }
        let mut out = self.clone();
        out.entries[i - 1] = b + 1;
        out.entries[i] = a + 1;
        Ok(out)
    }

    /// Inverse of [`p_move`](Self::p_move).
    pub fn p_move_inv(&self, i: usize) -> Result<BSeq, PosetError> {
        let fail = || PosetError::PreconditionFailed { i, seq: self.to_string() };
        if i == 0 || i >= self.len() {
            return Err(fail());
        }
        let (a, b) = (self.entries[i - 1], self.entries[i]);
        if !(1 <= b && b < a && a <= self.n) {
            return Err(fail());
        }
        let mut out = self.clone();
        out.entries[i - 1] = b - 1;
        out.entries[i] = a - 1;
        Ok(out)
    }

    /// Exponent `2|b| - mn` contributed to the coefficient.
    pub fn exponent(&self) -> i64 {
        2 * self.weight() as i64 - (self.len() * self.n()) as i64
    }
}

impl fmt::Display for BSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('(')?;
        for (k, b) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_char(',')?;
            }
            write!(f, "{b}")?;
        }
        f.write_char(')')
    }
}

impl fmt::Debug for BSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BSeq{self}")
    }
}

/// How to compute a fiber.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FiberMode {
    /// Smooth every sequence of `{0..n}^m` and keep the matches.
    #[default]
    BruteForce,
    /// Remove the top row one innermost upper cup at a time.
    Peeling,
}

/// The fiber of `state` by brute force over all `(n+1)^m` sequences.
pub fn fiber_brute_force(state: &CatalanState, oracle: &Oracle) -> Result<BTreeSet<BSeq>, PosetError> {
    let (m, n) = (state.m(), state.n());
    let total = oracle.budget.check_restricted(m, n)?;
    let lattice = oracle.lattice(m, n);
    let target = state.partner_table();
    let (_, found) = fold_range(
        oracle.exec,
        total,
        || (lattice.scratch(), Vec::new()),
        |(scratch, found), idx| {
            let b = decode_b(idx, m, n);
            let s = KauffmanState::from_b_values(n, &b);
            lattice.trace(s.bits(), scratch);
            if scratch.partner() == target {
                found.push(b);
            }
        },
        |(s, mut a), (_, b)| {
            a.extend(b);
            (s, a)
        },
    );
    Ok(found.into_iter().map(|e| BSeq { entries: e, n: n as u16 }).collect())
}


/// Removes the top row from `state`, assuming its first entry is `b1`.
///
/// Returns the state of the remaining `m-1` rows, or `None` when `state`
/// has no innermost upper cup `e_{b1}` or the remainder is not a valid
/// state.
pub fn peel_top_row(state: &CatalanState, b1: usize) -> Option<CatalanState> {
    let (m, n) = (state.m(), state.n());
    if m == 0 || b1 > n || n == 0 {
        return None;
    }
    let cup = match b1 {
        0 => (Point::Y(1), Point::X(1)),
        b if b == n => (Point::X(n), Point::Yp(1)),
        b => (Point::X(b), Point::X(b + 1)),
    };
    if state.partner(cup.0) != Some(cup.1) {
        return None;
    }
    let below = Boundary::new(m - 1, n);
    // boundary points of the top row are carried down to the ceiling of the rest
    let relabel = |p: Point| -> Point {
        match p {
            Point::Y(1) => Point::X(1),
            Point::Yp(1) => Point::X(n),
            Point::X(j) if j < b1 => Point::X(j + 1),
            Point::X(j) => Point::X(j - 1),
            Point::Y(i) => Point::Y(i - 1),
            Point::Yp(i) => Point::Yp(i - 1),
            Point::Xp(j) => Point::Xp(j),
        }
    };
    let pairs: Vec<(usize, usize)> = state
        .arcs()
        .into_iter()
        .filter(|&(p, q)| (p, q) != cup && (q, p) != cup)
        .map(|(p, q)| (below.index(relabel(p)).unwrap(), below.index(relabel(q)).unwrap()))
        .collect();
    CatalanState::from_index_pairs(m - 1, n, &pairs).ok()
}

fn is_identity(state: &CatalanState) -> bool {
    state.m() == 0 && (1..=state.n()).all(|j| state.partner(Point::X(j)) == Some(Point::Xp(j)))
}

/// Fiber by repeated top-row peeling, memoized on intermediate states.
pub fn fiber_peeling(state: &CatalanState) -> BTreeSet<BSeq> {
    type Memo = HashMap<CatalanState, Arc<Vec<Vec<u16>>>>;
    fn rec(state: &CatalanState, memo: &mut Memo) -> Arc<Vec<Vec<u16>>> {
        if let Some(hit) = memo.get(state) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if state.m() == 0 {
            if is_identity(state) {
                out.push(Vec::new());
            }
        } else {
            for b1 in 0..=state.n() {
                if let Some(rest) = peel_top_row(state, b1) {
                    for tail in rec(&rest, memo).iter() {
                        let mut seq = Vec::with_capacity(tail.len() + 1);
                        seq.push(b1 as u16);
                        seq.extend_from_slice(tail);
                        out.push(seq);
                    }
                }
            }
        }
        let out = Arc::new(out);
        memo.insert(state.clone(), out.clone());
        out
    }
    let n = state.n() as u16;
    if state.n() == 0 {
        let trivial = (1..=state.m()).all(|i| state.partner(Point::Y(i)) == Some(Point::Yp(i)));
        return if trivial {
            BTreeSet::from([BSeq { entries: vec![0; state.m()], n }])
        } else {
            BTreeSet::new()
        };
    }
    let mut memo = Memo::new();
    rec(state, &mut memo)
        .iter()
        .map(|e| BSeq { entries: e.clone(), n })
        .collect()
}

/// Lexicographically largest sequence realizing `state`, by depth-first peeling.
pub fn lex_max_sequence(state: &CatalanState) -> Option<BSeq> {
    fn rec(state: &CatalanState, dead: &mut HashSet<CatalanState>) -> Option<Vec<u16>> {
        if state.m() == 0 {
            return is_identity(state).then(Vec::new);
        }
        if dead.contains(state) {
            return None;
        }
        for b1 in (0..=state.n()).rev() {
            if let Some(rest) = peel_top_row(state, b1) {
                if let Some(mut tail) = rec(&rest, dead) {
                    tail.insert(0, b1 as u16);
                    return Some(tail);
                }
            }
        }
        dead.insert(state.clone());
        None
    }
    if state.n() == 0 {
        return fiber_peeling(state).into_iter().next_back();
    }
    rec(state, &mut HashSet::new()).map(|entries| BSeq { entries, n: state.n() as u16 })
}

/// The fiber of `state` computed in the given mode; errors when empty.
pub fn fiber_with(state: &CatalanState, mode: FiberMode, oracle: &Oracle) -> Result<BTreeSet<BSeq>, PosetError> {
    let fib = match mode {
        FiberMode::BruteForce => fiber_brute_force(state, oracle)?,
        FiberMode::Peeling => fiber_peeling(state),
    };
    if fib.is_empty() {
        return Err(PosetError::EmptyFiber);
    }
    Ok(fib)
}

/// The fiber of `state` by brute force with the default budget.
pub fn fiber(state: &CatalanState) -> Result<BTreeSet<BSeq>, PosetError> {
    fiber_with(state, FiberMode::BruteForce, &Oracle::default())
}

/// Hasse diagram of the fiber under the cover relation `b << P_i(b)`.
#[derive(Clone, Debug, Serialize)]
pub struct FiberPoset {
    pub vertices: Vec<BSeq>,
    /// `(from, to, i)`: `vertices[to] = P_i(vertices[from])`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl FiberPoset {
    pub fn from_fiber(fiber: &BTreeSet<BSeq>) -> Self {
        let vertices: Vec<BSeq> = fiber.iter().cloned().collect();
        let index: HashMap<&BSeq, usize> = vertices.iter().enumerate().map(|(k, b)| (b, k)).collect();
        let mut edges = Vec::new();
        for (k, b) in vertices.iter().enumerate() {
            for i in 1..b.len() {
                if let Ok(up) = b.p_move(i) {
                    if let Some(&t) = index.get(&up) {
                        edges.push((k, t, i));
                    }
                }
            }
        }
        Self { vertices, edges }
    }

    fn graph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = self.vertices.iter().map(|_| g.add_node(())).collect();
        for &(a, b, _) in &self.edges {
            g.add_edge(nodes[a], nodes[b], ());
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.vertices.is_empty() || connected_components(&self.graph()) == 1
    }

    pub fn is_acyclic(&self) -> bool {
        !is_cyclic_directed(&self.graph())
    }

    pub fn covers_raise_weight_by_two(&self) -> bool {
        self.edges
            .iter()
            .all(|&(a, b, _)| self.vertices[b].weight() == self.vertices[a].weight() + 2)
    }

    pub fn check(&self) -> Result<(), PosetError> {
        if !self.covers_raise_weight_by_two() {
            return Err(PosetError::HasseInvariant("a cover does not raise weight by 2".into()));
        }
        if !self.is_acyclic() {
            return Err(PosetError::HasseInvariant("directed cycle".into()));
        }
        if !self.is_connected() {
            return Err(PosetError::HasseInvariant("fiber graph is disconnected".into()));
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
        for (k, b) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  n{k} [label=\"{b}\\n|b|={}\"];", b.weight());
        }
        for &(a, b, i) in &self.edges {
            let _ = writeln!(out, "  n{a} -> n{b} [label=\"P{i}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// Builds and checks the Hasse diagram of the fiber of `state`.
pub fn hasse(state: &CatalanState) -> Result<FiberPoset, PosetError> {
    hasse_with(state, FiberMode::BruteForce, &Oracle::default())
}

pub fn hasse_with(state: &CatalanState, mode: FiberMode, oracle: &Oracle) -> Result<FiberPoset, PosetError> {
    let poset = FiberPoset::from_fiber(&fiber_with(state, mode, oracle)?);
    poset.check()?;
    Ok(poset)
}

/// Lexicographic minimum and maximum of a fiber, checked to be the unique
/// weight minimizer and maximizer.
pub fn extremal_of(fiber: &BTreeSet<BSeq>) -> Result<(BSeq, BSeq), PosetError> {
    let lo = fiber.first().ok_or(PosetError::EmptyFiber)?;
    let hi = fiber.last().ok_or(PosetError::EmptyFiber)?;
    let unique = |target: &BSeq| fiber.iter().filter(|b| b.weight() == target.weight()).count() == 1;
    let min_w = fiber.iter().map(BSeq::weight).min().unwrap();
    let max_w = fiber.iter().map(BSeq::weight).max().unwrap();
    if lo.weight() != min_w || hi.weight() != max_w || !unique(lo) || !unique(hi) {
        return Err(PosetError::NonUniqueExtremal);
    }
    Ok((lo.clone(), hi.clone()))
}

pub fn extremal(state: &CatalanState) -> Result<(BSeq, BSeq), PosetError> {
    extremal_of(&fiber(state)?)
}

/// `sum_{b in fiber} A^{2|b| - mn}`.
pub fn coeff_of_fiber(fiber: &BTreeSet<BSeq>) -> LaurentPoly {
    LaurentPoly::from_terms(fiber.iter().map(|b| (b.exponent(), 1)))
}

pub fn coeff_from_fiber(state: &CatalanState) -> Result<LaurentPoly, PosetError> {
    Ok(coeff_of_fiber(&fiber(state)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan::parse_arcs;

    fn seq(n: usize, e: &[u16]) -> BSeq {
        BSeq::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn p_move_examples() {
        assert_eq!(seq(4, &[1, 2]).p_move(1).unwrap(), seq(4, &[3, 2]));
        assert!(matches!(seq(4, &[2, 1]).p_move(1), Err(PosetError::PreconditionFailed { .. })));
        assert!(seq(4, &[1, 4]).p_move(1).is_err());
        assert!(seq(4, &[1, 2]).p_move(2).is_err());
        assert_eq!(seq(4, &[3, 2]).p_move_inv(1).unwrap(), seq(4, &[1, 2]));
    }

    #[test]
    fn p_move_inverse_roundtrip() {
        let n = 4;
        for idx in 0..125u64 {
            let b = BSeq::new(n, decode_b(idx, 3, n)).unwrap();
            for i in 1..3 {
                if let Ok(up) = b.p_move(i) {
                    assert_eq!(up.weight(), b.weight() + 2);
                    assert_eq!(up.p_move_inv(i).unwrap(), b);
                }
                if let Ok(down) = b.p_move_inv(i) {
                    assert_eq!(down.p_move(i).unwrap(), b);
                }
            }
        }
    }

    #[test]
    fn text_form() {
        let b = BSeq::parse("(3, 4,4,3)", 4).unwrap();
        assert_eq!(b.to_string(), "(3,4,4,3)");
        assert_eq!(b.weight(), 14);
        assert!(matches!(BSeq::parse("(3,5)", 4), Err(PosetError::OutOfRange { .. })));
        assert!(BSeq::parse("3,4", 4).is_err());
    }

    #[test]
    fn single_row_states_are_cups() {
        let n = 3;
        let expected = [
            vec![("y1", "x1"), ("x2", "xp1"), ("x3", "xp2"), ("xp3", "yp1")],
            vec![("x1", "x2"), ("y1", "xp1"), ("x3", "xp2"), ("xp3", "yp1")],
            vec![("x2", "x3"), ("y1", "xp1"), ("x1", "xp2"), ("xp3", "yp1")],
            vec![("x3", "yp1"), ("y1", "xp1"), ("x1", "xp2"), ("x2", "xp3")],
        ];
        for (b, arcs) in expected.iter().enumerate() {
            let c = CatalanState::from_arcs(1, n, &parse_arcs(arcs).unwrap()).unwrap();
            assert_eq!(seq(n, &[b as u16]).state(), c, "b={b}");
            assert_eq!(fiber_peeling(&c).len(), 1);
        }
    }

    #[test]
    fn peeling_inverts_top_row() {
        let b = seq(2, &[0, 2]);
        let c = b.state();
        let rest = peel_top_row(&c, 0).unwrap();
        assert_eq!(rest, seq(2, &[2]).state());
        assert!(peel_top_row(&c, 1).is_none());
    }

    #[test]
    fn hasse_dot_single_vertex() {
        let c = seq(3, &[1]).state();
        let h = hasse(&c).unwrap();
        assert_eq!(h.vertices.len(), 1);
        assert!(h.edges.is_empty());
        assert!(h.to_dot().contains("(1)"));
    }

    #[test]
    fn empty_fiber_for_floor_return() {
        let c = seq(2, &[1]).state().reflect_x();
        assert!(matches!(fiber(&c), Err(PosetError::EmptyFiber)));
        assert!(matches!(fiber_with(&c, FiberMode::Peeling, &Oracle::default()), Err(PosetError::EmptyFiber)));
    }
}
