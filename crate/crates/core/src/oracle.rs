//! State-sum engine for the lattice crossing `L(m,n)`.
//!
//! `n` vertical strands pass over `m` horizontal strands. Crossing `(i,j)`
//! (row `i`, column `j`, 0-based here) has local ends N, E, S, W and a marker
//! chooses one of its two planar reconnections:
//!
//! * `+1` joins N-E and S-W,
//! * `-1` joins N-W and S-E.
//!
//! With this convention the row pattern `(+1)^b (-1)^(n-b)` in a single row
//! produces the innermost upper cup `e_b`. `MarkerConvention::Flipped`
//! exchanges the two reconnections globally.
//!
//! Strands are traced with a union-find over the wire segments between
//! crossings; a component without boundary points is a closed loop.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::algebra::LaurentPoly;
use crate::catalan::{Boundary, CatalanState, Point};
use crate::par::{fold_range, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("kauffman state has shape {got_m}x{got_n}, lattice is {m}x{n}")]
    ShapeMismatch { m: usize, n: usize, got_m: usize, got_n: usize },
    #[error("marker values must be +1 or -1, got {0}")]
    BadMarker(i32),
    #[error("enumeration needs {needed} states, budget is {limit}")]
    BudgetExceeded { needed: String, limit: u64 },
    #[error("restricted state {0:?} produced a closed loop")]
    LoopInRestrictedState(Vec<u16>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    Pos,
    Neg,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MarkerConvention {
    #[default]
    Standard,
    Flipped,
}

/// A choice of marker at each of the `m*n` crossings (at most 64).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KauffmanState {
    m: usize,
    n: usize,
    /// Bit `i*n + j` set means crossing `(i,j)` carries `+1`.
    bits: u64,
}

impl KauffmanState {
    pub fn from_bits(m: usize, n: usize, bits: u64) -> Self {
        assert!(m * n <= 64, "at most 64 crossings are supported");
        Self { m, n, bits }
    }

    /// From an `m x n` matrix of `+1`/`-1` entries.
    pub fn from_matrix(rows: &[Vec<i32>]) -> Result<Self, OracleError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut bits = 0u64;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(OracleError::ShapeMismatch { m, n, got_m: m, got_n: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    1 => bits |= 1 << (i * n + j),
                    -1 => {}
                    other => return Err(OracleError::BadMarker(other)),
                }
            }
        }
        Ok(Self::from_bits(m, n, bits))
    }

    /// The restricted state whose row `i` is `(+1)^{b_i} (-1)^{n-b_i}`.
    pub fn from_b_values(n: usize, b: &[u16]) -> Self {
        let mut bits = 0u64;
        for (i, &bi) in b.iter().enumerate() {
            let row_mask = (1u64 << bi) - 1;
            bits |= row_mask << (i * n);
        }
        Self::from_bits(b.len(), n, bits)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn marker(&self, i: usize, j: usize) -> Marker {
        if self.bits >> (i * self.n + j) & 1 == 1 {
            Marker::Pos
        } else {
            Marker::Neg
        }
    }

    /// `p(s)`, the number of positive markers.
    pub fn positives(&self) -> u32 {
        self.bits.count_ones()
    }

    /// `n(s)`, the number of negative markers.
    pub fn negatives(&self) -> u32 {
        (self.m * self.n) as u32 - self.positives()
    }
}

/// Result of smoothing every crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothedDiagram {
    pub state: CatalanState,
    pub loops: u32,
}

/// Enumeration limits, counted in Kauffman states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub full_states: u64,
    pub restricted_states: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            full_states: 1 << 20,
            restricted_states: 1_000_000,
        }
    }
}

impl Budget {
    pub fn check_full(&self, m: usize, n: usize) -> Result<u64, OracleError> {
        let mn = m * n;
        if mn >= 64 || (1u64 << mn) > self.full_states {
            return Err(OracleError::BudgetExceeded {
                needed: format!("2^{mn}"),
                limit: self.full_states,
            });
        }
        Ok(1u64 << mn)
    }

    pub fn check_restricted(&self, m: usize, n: usize) -> Result<u64, OracleError> {
        let count = (n as u64 + 1).checked_pow(m as u32);
        match count {
            Some(c) if c <= self.restricted_states && m * n < 64 => Ok(c),
            _ => Err(OracleError::BudgetExceeded {
                needed: format!("{}^{m}", n + 1),
                limit: self.restricted_states,
            }),
        }
    }
}

/// Wire layout of `L(m,n)`, shared by every smoothing of the lattice.
#[derive(Clone, Debug)]
pub struct Lattice {
    m: usize,
    n: usize,
    convention: MarkerConvention,
    /// Wire attached to each crossing end, indexed `4*(i*n+j) + {N,E,S,W}`.
    port_wire: Vec<u32>,
    /// Wire attached to each boundary point, by circular index.
    boundary_wire: Vec<u32>,
    wires: usize,
}

const N: usize = 0;
const E: usize = 1;
const S: usize = 2;
const W: usize = 3;

/// Reusable buffers for [`Lattice::trace`].
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    parent: Vec<u32>,
    owner: Vec<u32>,
    partner: Vec<u16>,
}

impl Scratch {
    /// Partner table left by the last [`Lattice::trace`].
    pub fn partner(&self) -> &[u16] {
        &self.partner
    }
}

impl Lattice {
    pub fn new(m: usize, n: usize) -> Self {
        Self::with_convention(m, n, MarkerConvention::Standard)
    }

    pub fn with_convention(m: usize, n: usize, convention: MarkerConvention) -> Self {
        assert!(m * n <= 64, "at most 64 crossings are supported");
        let b = Boundary::new(m, n);
        let port = |i: usize, j: usize, d: usize| 4 * (i * n + j) + d;
        let mut port_wire = vec![u32::MAX; 4 * m * n];
        let mut boundary_wire = vec![u32::MAX; b.len()];
        let mut wires = 0u32;
        // vertical segments: column j, above row i
        for j in 0..n {
            for i in 0..=m {
                if i == 0 {
                    boundary_wire[b.index(Point::X(j + 1)).unwrap()] = wires;
                } else {
                    port_wire[port(i - 1, j, S)] = wires;
                }
                if i == m {
                    boundary_wire[b.index(Point::Xp(j + 1)).unwrap()] = wires;
                } else {
                    port_wire[port(i, j, N)] = wires;
                }
                wires += 1;
            }
        }
        // horizontal segments: row i, left of column j
        for i in 0..m {
            for j in 0..=n {
                if j == 0 {
                    boundary_wire[b.index(Point::Y(i + 1)).unwrap()] = wires;
                } else {
                    port_wire[port(i, j - 1, E)] = wires;
                }
                if j == n {
                    boundary_wire[b.index(Point::Yp(i + 1)).unwrap()] = wires;
                } else {
                    port_wire[port(i, j, W)] = wires;
                }
                wires += 1;
            }
        }
        Self {
            m,
            n,
            convention,
            port_wire,
            boundary_wire,
            wires: wires as usize,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn scratch(&self) -> Scratch {
        Scratch {
            parent: vec![0; self.wires],
            owner: vec![u32::MAX; self.wires],
            partner: vec![0; self.boundary_wire.len()],
        }
    }

    /// Smooths the crossings selected by `bits`, leaving the partner table of
    /// the resulting Catalan state in `scratch`. Returns the loop count.
    pub fn trace(&self, bits: u64, scratch: &mut Scratch) -> u32 {
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                let up = parent[parent[x as usize] as usize];
                parent[x as usize] = up;
                x = up;
            }
            x
        }
        let parent = &mut scratch.parent;
        for (k, p) in parent.iter_mut().enumerate() {
            *p = k as u32;
        }
        let mut joined = 0usize;
        let mut union = |parent: &mut [u32], a: u32, b: u32| {
            let ra = find(parent, a);
            let rb = find(parent, b);
            if ra != rb {
                parent[ra as usize] = rb;
                joined += 1;
            }
        };
        for c in 0..self.m * self.n {
            let positive = bits >> c & 1 == 1;
            let ne_sw = positive == (self.convention == MarkerConvention::Standard);
            let w = &self.port_wire[4 * c..4 * c + 4];
            if ne_sw {
                union(parent, w[N], w[E]);
                union(parent, w[S], w[W]);
            } else {
                union(parent, w[N], w[W]);
                union(parent, w[S], w[E]);
            }
        }
        for (idx, &wire) in self.boundary_wire.iter().enumerate() {
            let root = find(parent, wire) as usize;
            let other = scratch.owner[root];
            if other == u32::MAX {
                scratch.owner[root] = idx as u32;
            } else {
                scratch.partner[idx] = other as u16;
                scratch.partner[other as usize] = idx as u16;
            }
        }
        for &wire in &self.boundary_wire {
            let root = find(parent, wire) as usize;
            scratch.owner[root] = u32::MAX;
        }
        let components = self.wires - joined;
        (components - (self.m + self.n)) as u32
    }

    pub fn smooth(&self, s: &KauffmanState) -> Result<SmoothedDiagram, OracleError> {
        if s.shape() != (self.m, self.n) {
            return Err(OracleError::ShapeMismatch {
                m: self.m,
                n: self.n,
                got_m: s.m,
                got_n: s.n,
            });
        }
        let mut scratch = self.scratch();
        let loops = self.trace(s.bits, &mut scratch);
        Ok(SmoothedDiagram {
            state: CatalanState::from_partner_unchecked(self.m, self.n, scratch.partner),
            loops,
        })
    }
}

/// Smooths `s` on `L(m,n)` with the standard convention.
pub fn smooth(m: usize, n: usize, s: &KauffmanState) -> Result<SmoothedDiagram, OracleError> {
    Lattice::new(m, n).smooth(s)
}

/// Coefficients keyed by Catalan state, in canonical state order.
pub type Expansion = BTreeMap<CatalanState, LaurentPoly>;

/// Per-state tally of `(p - n, loops)` pairs, turned into polynomials at the end.
type Tally = FxHashMap<Vec<u16>, Vec<(i32, u32, u64)>>;

fn bump(tally: &mut Tally, partner: &[u16], exp: i32, loops: u32) {
    let entries = match tally.get_mut(partner) {
        Some(e) => e,
        None => tally.entry(partner.to_vec()).or_default(),
    };
    match entries.iter_mut().find(|(e, l, _)| *e == exp && *l == loops) {
        Some(slot) => slot.2 += 1,
        None => entries.push((exp, loops, 1)),
    }
}

fn merge_tallies(mut a: Tally, b: Tally) -> Tally {
    if a.len() < b.len() {
        return merge_tallies(b, a);
    }
    for (key, entries) in b {
        let slot = a.entry(key).or_default();
        for (e, l, c) in entries {
            match slot.iter_mut().find(|(e2, l2, _)| *e2 == e && *l2 == l) {
                Some(s) => s.2 += c,
                None => slot.push((e, l, c)),
            }
        }
    }
    a
}

fn tally_to_expansion(m: usize, n: usize, tally: Tally, with_loops: bool) -> Expansion {
    let loop_value = LaurentPoly::loop_value();
    let mut powers: Vec<LaurentPoly> = vec![LaurentPoly::one()];
    tally
        .into_iter()
        .map(|(partner, entries)| {
            let mut poly = LaurentPoly::zero();
            for (exp, loops, count) in entries {
                let loops = if with_loops { loops as usize } else { 0 };
                while powers.len() <= loops {
                    let next = powers.last().unwrap() * &loop_value;
                    powers.push(next);
                }
                poly += &(&powers[loops] * &LaurentPoly::monomial(BigInt::from(count), exp as i64));
            }
            (CatalanState::from_partner_unchecked(m, n, partner), poly)
        })
        .collect()
}

/// Configuration of the enumeration routes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Oracle {
    pub budget: Budget,
    pub exec: Exec,
    pub convention: MarkerConvention,
}

impl Oracle {
    pub fn new(budget: Budget, exec: Exec) -> Self {
        Self {
            budget,
            exec,
            convention: MarkerConvention::Standard,
        }
    }

    pub fn with_convention(mut self, convention: MarkerConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn lattice(&self, m: usize, n: usize) -> Lattice {
        Lattice::with_convention(m, n, self.convention)
    }

    /// Full state sum over all `2^{mn}` Kauffman states, bucketed by the
    /// resulting Catalan state: `sum A^{p-n} (-A^2-A^-2)^{loops}`.
    pub fn full_expansion(&self, m: usize, n: usize) -> Result<Expansion, OracleError> {
        let total = self.budget.check_full(m, n)?;
        let lattice = self.lattice(m, n);
        let mn = (m * n) as i32;
        let (_, tally) = fold_range(
            self.exec,
            total,
            || (lattice.scratch(), Tally::default()),
            |(scratch, tally), bits| {
                let loops = lattice.trace(bits, scratch);
                let p = bits.count_ones() as i32;
                bump(tally, &scratch.partner, 2 * p - mn, loops);
            },
            |(s, a), (_, b)| (s, merge_tallies(a, b)),
        );
        Ok(tally_to_expansion(m, n, tally, true))
    }

    /// Sum over the `(n+1)^m` restricted states only, with no loop factor.
    /// Its buckets are exactly the states without floor returns.
    pub fn restricted_expansion(&self, m: usize, n: usize) -> Result<Expansion, OracleError> {
        let total = self.budget.check_restricted(m, n)?;
        let lattice = self.lattice(m, n);
        let mn = (m * n) as i32;
        let (_, tally, bad) = fold_range(
            self.exec,
            total,
            || (lattice.scratch(), Tally::default(), None::<Vec<u16>>),
            |(scratch, tally, bad), idx| {
                let b = decode_b(idx, m, n);
                let s = KauffmanState::from_b_values(n, &b);
                let loops = lattice.trace(s.bits, scratch);
                if loops > 0 && bad.is_none() {
                    *bad = Some(b.clone());
                }
                let weight: i32 = b.iter().map(|&x| x as i32).sum();
                bump(tally, &scratch.partner, 2 * weight - mn, 0);
            },
            |(s, a, bad_a), (_, b, bad_b)| (s, merge_tallies(a, b), bad_a.or(bad_b)),
        );
        if let Some(b) = bad {
            return Err(OracleError::LoopInRestrictedState(b));
        }
        Ok(tally_to_expansion(m, n, tally, false))
    }
}

/// The `idx`-th sequence of `{0..n}^m` in lexicographic order.
pub(crate) fn decode_b(mut idx: u64, m: usize, n: usize) -> Vec<u16> {
    let base = n as u64 + 1;
    let mut b = vec![0u16; m];
    for slot in b.iter_mut().rev() {
        *slot = (idx % base) as u16;
        idx /= base;
    }
    b
}

/// Full expansion with default budget and parallel execution.
pub fn full_expansion(m: usize, n: usize) -> Result<Expansion, OracleError> {
    Oracle::default().full_expansion(m, n)
}

/// Restricted expansion with default budget and parallel execution.
pub fn restricted_expansion(m: usize, n: usize) -> Result<Expansion, OracleError> {
    Oracle::default().restricted_expansion(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan::parse_arcs;

    fn state(m: usize, n: usize, arcs: &[(&str, &str)]) -> CatalanState {
        CatalanState::from_arcs(m, n, &parse_arcs(arcs).unwrap()).unwrap()
    }

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn single_crossing_negative_is_cup_e0() {
        let s = KauffmanState::from_matrix(&[vec![-1]]).unwrap();
        let d = smooth(1, 1, &s).unwrap();
        assert_eq!(d.state, state(1, 1, &[("y1", "x1"), ("xp1", "yp1")]));
        assert_eq!(d.loops, 0);
    }

    #[test]
    fn row_pattern_gives_cup_e2() {
        let s = KauffmanState::from_matrix(&[vec![1, 1, -1]]).unwrap();
        let d = smooth(1, 3, &s).unwrap();
        assert_eq!(d.state.partner(Point::X(2)), Some(Point::X(3)));
        assert_eq!(d.state, state(1, 3, &[("x2", "x3"), ("y1", "xp1"), ("x1", "xp2"), ("xp3", "yp1")]));
        assert_eq!(d.loops, 0);
    }

    #[test]
    fn shape_and_marker_errors() {
        let s = KauffmanState::from_matrix(&[vec![1, 1]]).unwrap();
        assert!(matches!(smooth(2, 2, &s), Err(OracleError::ShapeMismatch { .. })));
        assert_eq!(KauffmanState::from_matrix(&[vec![1, 0]]), Err(OracleError::BadMarker(0)));
        let s = KauffmanState::from_matrix(&[vec![1, -1], vec![-1, -1]]).unwrap();
        assert_eq!((s.positives(), s.negatives()), (1, 3));
    }

    #[test]
    fn l11_expansion() {
        let e = full_expansion(1, 1).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[&state(1, 1, &[("x1", "yp1"), ("y1", "xp1")])], lp("A"));
        assert_eq!(e[&state(1, 1, &[("x1", "y1"), ("xp1", "yp1")])], lp("A^-1"));
    }

    #[test]
    fn l12_expansion() {
        let e = full_expansion(1, 2).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e[&state(1, 2, &[("x1", "x2"), ("y1", "xp1"), ("xp2", "yp1")])], lp("1"));
        assert_eq!(e[&state(1, 2, &[("xp1", "xp2"), ("x1", "y1"), ("x2", "yp1")])], lp("1"));
    }

    #[test]
    fn budget_is_enforced_before_enumeration() {
        assert!(matches!(full_expansion(5, 5), Err(OracleError::BudgetExceeded { .. })));
        let tight = Oracle::new(Budget { full_states: 8, restricted_states: 8 }, Exec::Serial);
        assert!(tight.full_expansion(1, 3).is_ok());
        assert!(tight.full_expansion(2, 2).is_err());
        assert!(tight.restricted_expansion(3, 1).is_ok());
        assert!(tight.restricted_expansion(2, 2).is_err());
    }

    #[test]
    fn decode_is_lexicographic() {
        assert_eq!(decode_b(0, 3, 2), vec![0, 0, 0]);
        assert_eq!(decode_b(1, 3, 2), vec![0, 0, 1]);
        assert_eq!(decode_b(3, 3, 2), vec![0, 1, 0]);
        assert_eq!(decode_b(26, 3, 2), vec![2, 2, 2]);
    }

    #[test]
    fn no_crossings() {
        let e = full_expansion(2, 0).unwrap();
        assert_eq!(e.len(), 1);
        let (s, c) = e.iter().next().unwrap();
        assert_eq!(*s, state(2, 0, &[("y1", "yp1"), ("y2", "yp2")]));
        assert_eq!(*c, LaurentPoly::one());
    }
}
