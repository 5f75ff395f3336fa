//! Catalan states of the lattice crossing `L(m,n)`.
//!
//! The `2(m+n)` boundary points of the `m x n` rectangle are
//!
//! * `x_1..x_n` on the ceiling and `x'_1..x'_n` on the floor, left to right,
//! * `y_1..y_m` on the left side and `y'_1..y'_m` on the right side, top to bottom.
//!
//! They carry a fixed circular index walking the boundary clockwise from `x_1`:
//! `x_1..x_n, y'_1..y'_m, x'_n..x'_1, y_m..y_1`. With this order a perfect
//! matching is non-crossing exactly when no two of its pairs interleave.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalanError {
    #[error("invalid shape m={m}, n={n}")]
    Shape { m: usize, n: usize },
    #[error("bad boundary label {0:?}")]
    BadLabel(String),
    #[error("not a perfect matching: {0}")]
    NotAMatching(String),
    #[error("arcs {0} and {1} cross")]
    Crossing(String, String),
    #[error("cannot stack: {0}")]
    InterfaceMismatch(String),
    #[error("invalid state json: {0}")]
    Json(String),
}

/// A boundary point of the rectangle; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    /// Ceiling, `x_i`.
    X(usize),
    /// Floor, `x'_i`.
    Xp(usize),
    /// Left side, `y_j`.
    Y(usize),
    /// Right side, `y'_j`.
    Yp(usize),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::X(i) => write!(f, "x{i}"),
            Point::Xp(i) => write!(f, "xp{i}"),
            Point::Y(i) => write!(f, "y{i}"),
            Point::Yp(i) => write!(f, "yp{i}"),
        }
    }
}

impl FromStr for Point {
    type Err = CatalanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalanError::BadLabel(s.to_string());
        let (ctor, digits): (fn(usize) -> Point, &str) = if let Some(d) = s.strip_prefix("xp") {
            (Point::Xp, d)
        } else if let Some(d) = s.strip_prefix("yp") {
            (Point::Yp, d)
        } else if let Some(d) = s.strip_prefix('x') {
            (Point::X, d)
        } else if let Some(d) = s.strip_prefix('y') {
            (Point::Y, d)
        } else {
            return Err(bad());
        };
        let i: usize = digits.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        Ok(ctor(i))
    }
}

/// The four sides of the rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Ceiling,
    Floor,
    Left,
    Right,
}

/// Circular labeling of the boundary of an `m x n` rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub m: usize,
    pub n: usize,
}

impl Boundary {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn len(&self) -> usize {
        2 * (self.m + self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, p: Point) -> Option<usize> {
        let (m, n) = (self.m, self.n);
        match p {
            Point::X(i) if (1..=n).contains(&i) => Some(i - 1),
            Point::Yp(j) if (1..=m).contains(&j) => Some(n + j - 1),
            Point::Xp(i) if (1..=n).contains(&i) => Some(n + m + (n - i)),
            Point::Y(j) if (1..=m).contains(&j) => Some(2 * n + m + (m - j)),
            _ => None,
        }
    }

    pub fn point(&self, idx: usize) -> Point {
        let (m, n) = (self.m, self.n);
        assert!(idx < self.len(), "boundary index {idx} out of range");
        if idx < n {
            Point::X(idx + 1)
        } else if idx < n + m {
            Point::Yp(idx - n + 1)
        } else if idx < 2 * n + m {
            Point::Xp(2 * n + m - idx)
        } else {
            Point::Y(2 * (n + m) - idx)
        }
    }

    pub fn side(&self, idx: usize) -> Side {
        match self.point(idx) {
            Point::X(_) => Side::Ceiling,
            Point::Xp(_) => Side::Floor,
            Point::Y(_) => Side::Left,
            Point::Yp(_) => Side::Right,
        }
    }
}

/// A non-crossing perfect matching of the boundary points of `L(m,n)`.
///
/// Stored as the partner table over circular indices, which is canonical:
/// two states are equal iff their tables are.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatalanState {
    m: usize,
    n: usize,
    partner: Vec<u16>,
}

impl CatalanState {
    /// Validates a set of arcs given by labels.
    pub fn from_arcs(m: usize, n: usize, arcs: &[(Point, Point)]) -> Result<Self, CatalanError> {
        if m == 0 {
            return Err(CatalanError::Shape { m, n });
        }
        let b = Boundary::new(m, n);
        let pairs = arcs
            .iter()
            .map(|&(p, q)| {
                let ip = b.index(p).ok_or_else(|| CatalanError::BadLabel(p.to_string()))?;
                let iq = b.index(q).ok_or_else(|| CatalanError::BadLabel(q.to_string()))?;
                Ok((ip, iq))
            })
            .collect::<Result<Vec<_>, CatalanError>>()?;
        Self::from_index_pairs(m, n, &pairs)
    }

    /// Validates a set of arcs given by circular indices. Unlike
    /// [`from_arcs`](Self::from_arcs) this accepts `m = 0`.
    pub(crate) fn from_index_pairs(m: usize, n: usize, pairs: &[(usize, usize)]) -> Result<Self, CatalanError> {
        let b = Boundary::new(m, n);
        let len = b.len();
        if pairs.len() != m + n {
            return Err(CatalanError::NotAMatching(format!("expected {} arcs, got {}", m + n, pairs.len())));
        }
        let mut partner = vec![u16::MAX; len];
        for &(a, c) in pairs {
            for p in [a, c] {
                if p >= len {
                    return Err(CatalanError::NotAMatching(format!("index {p} out of range")));
                }
                if partner[p] != u16::MAX || a == c {
                    return Err(CatalanError::NotAMatching(format!("point {} used twice", b.point(p))));
                }
            }
            partner[a] = c as u16;
            partner[c] = a as u16;
        }
        if let Some(p) = partner.iter().position(|&q| q == u16::MAX) {
            return Err(CatalanError::NotAMatching(format!("point {} unused", b.point(p))));
        }
        let state = Self { m, n, partner };
        if let Some((x, y)) = state.find_crossing() {
            let show = |(p, q): (usize, usize)| format!("{}-{}", b.point(p), b.point(q));
            return Err(CatalanError::Crossing(show(x), show(y)));
        }
        Ok(state)
    }

    /// Builds a state from a partner table known to be a non-crossing matching.
    /// `m` may be zero here (the empty lattice used when peeling rows).
    pub(crate) fn from_partner_unchecked(m: usize, n: usize, partner: Vec<u16>) -> Self {
        debug_assert_eq!(partner.len(), 2 * (m + n));
        Self { m, n, partner }
    }

    fn find_crossing(&self) -> Option<((usize, usize), (usize, usize))> {
        let mut stack = Vec::new();
        let mut ok = true;
        for i in 0..self.partner.len() {
            let j = self.partner[i] as usize;
            if j > i {
                stack.push(i);
            } else if stack.pop() != Some(j) {
                ok = false;
                break;
            }
        }
        if ok {
            return None;
        }
        let arcs = self.arc_indices();
        for (k, &(a, b)) in arcs.iter().enumerate() {
            for &(c, d) in &arcs[k + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return Some(((a, b), (c, d)));
                }
            }
        }
        unreachable!("stack check failed without an interleaving pair")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boundary(&self) -> Boundary {
        Boundary::new(self.m, self.n)
    }

    pub fn partner_index(&self, idx: usize) -> usize {
        self.partner[idx] as usize
    }

    pub fn partner_table(&self) -> &[u16] {
        &self.partner
    }

    pub fn partner(&self, p: Point) -> Option<Point> {
        let b = self.boundary();
        b.index(p).map(|i| b.point(self.partner[i] as usize))
    }

    /// Arcs as `(a, b)` index pairs with `a < b`, sorted by `a`.
    pub fn arc_indices(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter_map(|i| {
                let j = self.partner[i] as usize;
                (i < j).then_some((i, j))
            })
            .collect()
    }

    /// Arcs as labels in canonical order.
    pub fn arcs(&self) -> Vec<(Point, Point)> {
        let b = self.boundary();
        self.arc_indices().into_iter().map(|(i, j)| (b.point(i), b.point(j))).collect()
    }

    /// True if some arc has both endpoints on `side`.
    pub fn has_return(&self, side: Side) -> bool {
        let b = self.boundary();
        self.arc_indices().into_iter().any(|(i, j)| b.side(i) == side && b.side(j) == side)
    }

    pub fn floor_returns(&self) -> bool {
        self.has_return(Side::Floor)
    }

    pub fn ceiling_returns(&self) -> bool {
        self.has_return(Side::Ceiling)
    }

    /// No returns on the floor, left or right side.
    pub fn ceiling_only_returns(&self) -> bool {
        !self.has_return(Side::Floor) && !self.has_return(Side::Left) && !self.has_return(Side::Right)
    }

    fn count_separated(&self, in_part: impl Fn(Point) -> bool) -> usize {
        let b = self.boundary();
        self.arc_indices()
            .into_iter()
            .filter(|&(i, j)| in_part(b.point(i)) != in_part(b.point(j)))
            .count()
    }

    /// Minimal number of times a vertical line in gap `k` (between columns
    /// `k` and `k+1`, `1 <= k < n`) meets the state.
    pub fn vertical_cut(&self, k: usize) -> usize {
        self.count_separated(|p| match p {
            Point::X(i) | Point::Xp(i) => i <= k,
            Point::Y(_) => true,
            Point::Yp(_) => false,
        })
    }

    /// Minimal number of times a horizontal line in gap `k` (between rows
    /// `k` and `k+1`, `1 <= k < m`) meets the state.
    pub fn horizontal_cut(&self, k: usize) -> usize {
        self.count_separated(|p| match p {
            Point::Y(j) | Point::Yp(j) => j <= k,
            Point::X(_) => true,
            Point::Xp(_) => false,
        })
    }

    /// Every vertical line meets the state at most `m` times and every
    /// horizontal line at most `n` times.
    pub fn is_realizable(&self) -> bool {
        (1..self.n).all(|k| self.vertical_cut(k) <= self.m) && (1..self.m).all(|k| self.horizontal_cut(k) <= self.n)
    }

    /// Mirror image across the horizontal midline.
    pub fn reflect_x(&self) -> Self {
        let (m, n) = (self.m, self.n);
        let b = self.boundary();
        let mirror = |p: Point| match p {
            Point::X(i) => Point::Xp(i),
            Point::Xp(i) => Point::X(i),
            Point::Y(j) => Point::Y(m + 1 - j),
            Point::Yp(j) => Point::Yp(m + 1 - j),
        };
        let mut partner = vec![0u16; self.partner.len()];
        for (i, &j) in self.partner.iter().enumerate() {
            let mi = b.index(mirror(b.point(i))).unwrap();
            let mj = b.index(mirror(b.point(j as usize))).unwrap();
            partner[mi] = mj as u16;
        }
        Self::from_partner_unchecked(m, n, partner)
    }

    /// Vertical product: `self` on top, `lower` below, glued along an
    /// interface of `n` points (`x'_i` of `self` meets `x_i` of `lower`).
    pub fn stack_v(&self, lower: &CatalanState) -> Result<CatalanState, CatalanError> {
        if self.n != lower.n {
            return Err(CatalanError::InterfaceMismatch(format!(
                "interface widths differ ({} vs {})",
                self.n, lower.n
            )));
        }
        if self.floor_returns() {
            return Err(CatalanError::InterfaceMismatch("upper state has a floor return".into()));
        }
        if lower.ceiling_returns() {
            return Err(CatalanError::InterfaceMismatch("lower state has a ceiling return".into()));
        }
        let m1 = self.m;
        let lower_label = |p: Point| match p {
            Point::Y(j) => Point::Y(m1 + j),
            Point::Yp(j) => Point::Yp(m1 + j),
            other => other,
        };
        let mut arcs = Vec::with_capacity(self.m + lower.m + self.n);
        for (p, q) in self.arcs() {
            match (p, q) {
                (Point::Xp(i), other) | (other, Point::Xp(i)) => {
                    let below = lower.partner(Point::X(i)).expect("interface point");
                    arcs.push((other, lower_label(below)));
                }
                _ => arcs.push((p, q)),
            }
        }
        for (p, q) in lower.arcs() {
            if !matches!(p, Point::X(_)) && !matches!(q, Point::X(_)) {
                arcs.push((lower_label(p), lower_label(q)));
            }
        }
        CatalanState::from_arcs(m1 + lower.m, self.n, &arcs)
    }

    /// Horizontal gaps `k` (between rows `k` and `k+1`) met exactly `n` times.
    pub fn full_cross_sections(&self) -> Vec<usize> {
        (1..self.m).filter(|&k| self.horizontal_cut(k) == self.n).collect()
    }

    /// Cuts the state along horizontal gap `k`, inverting [`stack_v`](Self::stack_v).
    ///
    /// Requires the gap to be met by exactly `n` arcs.
    pub fn split_at_row(&self, k: usize) -> Result<(CatalanState, CatalanState), CatalanError> {
        let (m, n) = (self.m, self.n);
        if k == 0 || k >= m || self.horizontal_cut(k) != n {
            return Err(CatalanError::InterfaceMismatch(format!("gap {k} is not a cross-section of size {n}")));
        }
        let b = self.boundary();
        let is_top = |p: Point| match p {
            Point::Y(j) | Point::Yp(j) => j <= k,
            Point::X(_) => true,
            Point::Xp(_) => false,
        };
        // Position along the top part read clockwise from y_k, and along the
        // bottom part read clockwise from y'_{k+1}.
        let top_rank = |p: Point| match p {
            Point::Y(j) => k - j,
            Point::X(i) => k + i - 1,
            Point::Yp(j) => k + n + j - 1,
            Point::Xp(_) => unreachable!(),
        };
        let bottom_rank = |p: Point| match p {
            Point::Yp(j) => j - k - 1,
            Point::Xp(i) => (m - k) + (n - i),
            Point::Y(j) => (m - k) + n + (m - j),
            Point::X(_) => unreachable!(),
        };
        let mut crossing: Vec<(Point, Point)> = Vec::new();
        let mut upper_arcs = Vec::new();
        let mut lower_arcs = Vec::new();
        let to_lower = |p: Point| match p {
            Point::Y(j) => Point::Y(j - k),
            Point::Yp(j) => Point::Yp(j - k),
            other => other,
        };
        for (i, j) in self.arc_indices() {
            let (p, q) = (b.point(i), b.point(j));
            match (is_top(p), is_top(q)) {
                (true, true) => upper_arcs.push((p, q)),
                (false, false) => lower_arcs.push((to_lower(p), to_lower(q))),
                (true, false) => crossing.push((p, q)),
                (false, true) => crossing.push((q, p)),
            }
        }
        let mut tops: Vec<Point> = crossing.iter().map(|c| c.0).collect();
        tops.sort_by_key(|&p| top_rank(p));
        for (idx, p) in tops.into_iter().enumerate() {
            upper_arcs.push((p, Point::Xp(idx + 1)));
        }
        let mut bottoms: Vec<Point> = crossing.iter().map(|c| c.1).collect();
        bottoms.sort_by_key(|&p| bottom_rank(p));
        for (idx, p) in bottoms.into_iter().enumerate() {
            lower_arcs.push((Point::X(n - idx), to_lower(p)));
        }
        Ok((
            CatalanState::from_arcs(k, n, &upper_arcs)?,
            CatalanState::from_arcs(m - k, n, &lower_arcs)?,
        ))
    }

    /// All non-crossing perfect matchings of the boundary of `L(m,n)`.
    pub fn enumerate_all(m: usize, n: usize) -> Vec<CatalanState> {
        fn rec(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
            if points.is_empty() {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for k in (1..points.len()).step_by(2) {
                let inner = rec(&points[1..k]);
                let outer = rec(&points[k + 1..]);
                for a in &inner {
                    for b in &outer {
                        let mut all = vec![(points[0], points[k])];
                        all.extend_from_slice(a);
                        all.extend_from_slice(b);
                        out.push(all);
                    }
                }
            }
            out
        }
        let points: Vec<usize> = (0..2 * (m + n)).collect();
        rec(&points)
            .into_iter()
            .map(|pairs| {
                let mut partner = vec![0u16; points.len()];
                for (a, b) in pairs {
                    partner[a] = b as u16;
                    partner[b] = a as u16;
                }
                Self::from_partner_unchecked(m, n, partner)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CatalanError> {
        serde_json::from_str(s).map_err(|e| CatalanError::Json(e.to_string()))
    }
}

impl fmt::Display for CatalanState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (p, q)) in self.arcs().into_iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}-{q}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for CatalanState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CatalanState({}x{} {self})", self.m, self.n)
    }
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    m: usize,
    n: usize,
    arcs: Vec<[String; 2]>,
}

impl From<&CatalanState> for StateJson {
    fn from(s: &CatalanState) -> Self {
        Self {
            m: s.m,
            n: s.n,
            arcs: s.arcs().into_iter().map(|(p, q)| [p.to_string(), q.to_string()]).collect(),
        }
    }
}

impl Serialize for CatalanState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StateJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CatalanState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = StateJson::deserialize(deserializer)?;
        let arcs = raw
            .arcs
            .iter()
            .map(|[p, q]| Ok((p.parse()?, q.parse()?)))
            .collect::<Result<Vec<_>, CatalanError>>()
            .map_err(serde::de::Error::custom)?;
        CatalanState::from_arcs(raw.m, raw.n, &arcs).map_err(serde::de::Error::custom)
    }
}

/// Parses label pairs such as `[("x1", "x2"), ("y1", "xp1")]`.
pub fn parse_arcs(pairs: &[(&str, &str)]) -> Result<Vec<(Point, Point)>, CatalanError> {
    pairs.iter().map(|(p, q)| Ok((p.parse()?, q.parse()?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(m: usize, n: usize, arcs: &[(&str, &str)]) -> Result<CatalanState, CatalanError> {
        CatalanState::from_arcs(m, n, &parse_arcs(arcs).unwrap())
    }

    #[test]
    fn circular_index_is_bijection() {
        for m in 0..5 {
            for n in 0..5 {
                let b = Boundary::new(m, n);
                for i in 0..b.len() {
                    assert_eq!(b.index(b.point(i)), Some(i));
                }
            }
        }
        let b = Boundary::new(2, 3);
        assert_eq!(b.index(Point::X(1)), Some(0));
        assert_eq!(b.index(Point::Yp(1)), Some(3));
        assert_eq!(b.index(Point::Xp(3)), Some(5));
        assert_eq!(b.index(Point::Xp(1)), Some(7));
        assert_eq!(b.index(Point::Y(2)), Some(8));
        assert_eq!(b.index(Point::Y(1)), Some(9));
        assert_eq!(b.index(Point::Y(3)), None);
    }

    #[test]
    fn validate_examples() {
        assert!(state(1, 2, &[("x1", "x2"), ("y1", "xp1"), ("xp2", "yp1")]).is_ok());
        assert!(matches!(
            state(1, 2, &[("x1", "xp2"), ("x2", "xp1"), ("y1", "yp1")]),
            Err(CatalanError::Crossing(..))
        ));
        assert!(matches!(
            state(1, 2, &[("x1", "x2"), ("y1", "xp1")]),
            Err(CatalanError::NotAMatching(_))
        ));
        assert!(matches!(
            state(1, 2, &[("x1", "x2"), ("x1", "xp1"), ("xp2", "yp1")]),
            Err(CatalanError::NotAMatching(_))
        ));
        assert!(matches!(state(1, 2, &[("x1", "x3"), ("y1", "xp1"), ("xp2", "yp1")]), Err(CatalanError::BadLabel(_))));
        assert!(matches!(state(0, 2, &[]), Err(CatalanError::Shape { .. })));
    }

    #[test]
    fn label_parsing() {
        assert_eq!("xp3".parse::<Point>().unwrap(), Point::Xp(3));
        assert_eq!("yp12".parse::<Point>().unwrap(), Point::Yp(12));
        for bad in ["x0", "z1", "x", "xpq", ""] {
            assert!(bad.parse::<Point>().is_err());
        }
    }

    #[test]
    fn floor_returns_examples() {
        let c = state(1, 2, &[("x1", "x2"), ("y1", "xp1"), ("xp2", "yp1")]).unwrap();
        assert!(!c.floor_returns());
        let d = state(1, 2, &[("xp1", "xp2"), ("x1", "y1"), ("x2", "yp1")]).unwrap();
        assert!(d.floor_returns());
    }

    #[test]
    fn reflect_example_and_involution() {
        let c = state(1, 2, &[("x1", "x2"), ("y1", "xp1"), ("xp2", "yp1")]).unwrap();
        let r = state(1, 2, &[("xp1", "xp2"), ("y1", "x1"), ("x2", "yp1")]).unwrap();
        assert_eq!(c.reflect_x(), r);
        assert_eq!(c.floor_returns(), r.reflect_x().floor_returns());
        assert_eq!(c.ceiling_returns(), r.floor_returns());
        for m in 1..=3 {
            for n in 0..=3 {
                for s in CatalanState::enumerate_all(m, n) {
                    assert_eq!(s.reflect_x().reflect_x(), s);
                    assert_eq!(s.reflect_x().is_realizable(), s.is_realizable());
                }
            }
        }
    }

    #[test]
    fn catalan_counts() {
        let catalan = [1usize, 1, 2, 5, 14, 42];
        for m in 1..=5 {
            for n in 0..=(5 - m) {
                let all = CatalanState::enumerate_all(m, n);
                assert_eq!(all.len(), catalan[m + n], "m={m} n={n}");
                let mut dedup = all.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
            }
        }
    }

    #[test]
    fn one_by_one_states_are_realizable() {
        let all = CatalanState::enumerate_all(1, 1);
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(CatalanState::is_realizable));
    }

    #[test]
    fn json_roundtrip_and_canonical_order() {
        let c = state(1, 2, &[("yp1", "xp2"), ("xp1", "y1"), ("x2", "x1")]).unwrap();
        let json = c.to_json();
        assert_eq!(json, r#"{"m":1,"n":2,"arcs":[["x1","x2"],["yp1","xp2"],["xp1","y1"]]}"#);
        assert_eq!(CatalanState::from_json(&json).unwrap(), c);
        assert!(CatalanState::from_json(r#"{"m":1,"n":2,"arcs":[["x1","x2"]]}"#).is_err());
    }

    #[test]
    fn stack_interface_mismatch() {
        let top = state(1, 2, &[("x1", "x2"), ("y1", "xp1"), ("xp2", "yp1")]).unwrap();
        let wide = state(1, 3, &[("x1", "y1"), ("x2", "xp1"), ("x3", "xp2"), ("xp3", "yp1")]).unwrap();
        assert!(matches!(top.stack_v(&wide), Err(CatalanError::InterfaceMismatch(_))));
        // lower state with a ceiling return
        assert!(matches!(top.stack_v(&top), Err(CatalanError::InterfaceMismatch(_))));
        let floor = top.reflect_x();
        assert!(matches!(floor.stack_v(&floor), Err(CatalanError::InterfaceMismatch(_))));
    }

    #[test]
    fn stack_then_split_roundtrip() {
        let top = state(1, 2, &[("x1", "x2"), ("y1", "xp1"), ("xp2", "yp1")]).unwrap();
        let bottom = top.reflect_x();
        let glued = top.stack_v(&bottom).unwrap();
        assert_eq!(
            glued,
            state(2, 2, &[("x1", "x2"), ("y1", "y2"), ("yp1", "yp2"), ("xp1", "xp2")]).unwrap()
        );
        assert_eq!(glued.full_cross_sections(), vec![1]);
        assert_eq!(glued.split_at_row(1).unwrap(), (top, bottom));
        assert!(glued.split_at_row(0).is_err());
    }
}
