//! Rooted plane trees with leaf delays and their plucking polynomials.
//!
//! Vertices are addressed by preorder index, the root being `0`. Leaves are
//! non-root vertices without children; a [`DelayFn`] lists one delay per leaf
//! in preorder.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::algebra::{q_factorial, q_int, q_multinomial, QPoly};
use crate::catalan::{CatalanState, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("state has a floor return")]
    FloorReturnPresent,
    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),
    #[error("expected {expected} leaf delays, got {got}")]
    DelayMismatch { expected: usize, got: usize },
    #[error("delays must be at least 1")]
    ZeroDelay,
    #[error("bad tree text {0:?}")]
    Parse(String),
}

/// A rooted plane tree; child order is part of its identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    children: Vec<PlaneTree>,
}

impl PlaneTree {
    /// The tree with a single vertex.
    pub fn point() -> Self {
        Self::default()
    }

    pub fn with_children(children: Vec<PlaneTree>) -> Self {
        Self { children }
    }

    /// Root with `k` leaf children.
    pub fn star(k: usize) -> Self {
        Self::with_children(vec![Self::point(); k])
    }

    /// A chain of `k` edges hanging from the root.
    pub fn path(k: usize) -> Self {
        (0..k).fold(Self::point(), |t, _| Self::with_children(vec![t]))
    }

    /// Root whose children start paths of the given lengths.
    pub fn wedge_of_paths(lengths: &[usize]) -> Self {
        Self::with_children(lengths.iter().filter(|&&l| l > 0).map(|&l| Self::path(l - 1)).collect())
    }

    pub fn children(&self) -> &[PlaneTree] {
        &self.children
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(PlaneTree::vertex_count).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() - 1
    }

    pub fn leaf_count(&self) -> usize {
        self.children.iter().map(PlaneTree::leaves_below).sum()
    }

    fn leaves_below(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(PlaneTree::leaves_below).sum()
        }
    }

    /// Child-index path from the root to the vertex with preorder index `v`.
    fn path_to(&self, mut v: usize) -> Option<Vec<usize>> {
        let mut node = self;
        let mut path = Vec::new();
        while v > 0 {
            v -= 1;
            let mut found = false;
            for (k, c) in node.children.iter().enumerate() {
                let size = c.vertex_count();
                if v < size {
                    path.push(k);
                    node = c;
                    found = true;
                    break;
                }
                v -= size;
            }
            if !found {
                return None;
            }
        }
        Some(path)
    }

    fn at(&self, path: &[usize]) -> &PlaneTree {
        path.iter().fold(self, |t, &k| &t.children[k])
    }

    fn r_along(&self, path: &[usize]) -> usize {
        let mut node = self;
        let mut r = 0;
        for &k in path {
            r += node.children[k + 1..].iter().map(PlaneTree::vertex_count).sum::<usize>();
            node = &node.children[k];
        }
        r
    }

    /// Number of vertices to the right of the path from leaf `v` to the root.
    pub fn r_count(&self, v: usize) -> Result<usize, TreeError> {
        let path = self.path_to(v).ok_or(TreeError::NotALeaf(v))?;
        if path.is_empty() || !self.at(&path).children.is_empty() {
            return Err(TreeError::NotALeaf(v));
        }
        Ok(self.r_along(&path))
    }

    /// Preorder indices of the leaves.
    pub fn leaves(&self) -> Vec<usize> {
        fn walk(t: &PlaneTree, next: &mut usize, root: bool, out: &mut Vec<usize>) {
            let me = *next;
            *next += 1;
            if t.children.is_empty() && !root {
                out.push(me);
            }
            for c in &t.children {
                walk(c, next, false, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut 0, true, &mut out);
        out
    }

    /// Parenthesization, e.g. `(()(()))`.
    pub fn paren(&self) -> String {
        let mut out = String::new();
        self.write_paren(&mut out, None, &mut 0, true);
        out
    }

    fn write_paren(&self, out: &mut String, delays: Option<&[u32]>, leaf: &mut usize, root: bool) {
        out.push('(');
        for c in &self.children {
            c.write_paren(out, delays, leaf, false);
        }
        out.push(')');
        if self.children.is_empty() && !root {
            if let Some(d) = delays {
                let _ = write!(out, "@{}", d[*leaf]);
            }
            *leaf += 1;
        }
    }

    /// Weight sequence `|E(T_1^v)|, ..., |E(T_k^v)|` of every vertex with at least two branches.
    fn branch_sizes(&self, out: &mut Vec<Vec<usize>>) {
        if self.children.len() >= 2 {
            out.push(self.children.iter().map(PlaneTree::vertex_count).collect());
        }
        for c in &self.children {
            c.branch_sizes(out);
        }
    }

    pub fn to_dot(&self, delays: Option<&DelayFn>) -> String {
        let mut out = String::from("digraph tree {\n  rankdir=BT;\n");
        let leaves = self.leaves();
        let mut next = 0;
        fn walk(t: &PlaneTree, next: &mut usize, out: &mut String, leaves: &[usize], delays: Option<&DelayFn>) -> usize {
            let me = *next;
            *next += 1;
            let label = match (leaves.iter().position(|&l| l == me), delays) {
                (Some(k), Some(d)) => format!("v{me}@{}", d.values()[k]),
                _ if me == 0 => "v0 (root)".to_string(),
                _ => format!("v{me}"),
            };
            let _ = writeln!(out, "  v{me} [label=\"{label}\"];");
            for c in &t.children {
                let child = walk(c, next, out, leaves, delays);
                let _ = writeln!(out, "  v{me} -> v{child};");
            }
            me
        }
        walk(self, &mut next, &mut out, &leaves, delays);
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.paren())
    }
}

/// Parses `(()@2(()))`; leaves without `@d` get delay 1.
pub fn parse_tree(text: &str) -> Result<(PlaneTree, DelayFn), TreeError> {
    let err = || TreeError::Parse(text.to_string());
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let mut delays = Vec::new();
    fn node(chars: &[char], pos: &mut usize, delays: &mut Vec<u32>, root: bool) -> Option<PlaneTree> {
        if chars.get(*pos) != Some(&'(') {
            return None;
        }
        *pos += 1;
        let mut children = Vec::new();
        while chars.get(*pos) == Some(&'(') {
            children.push(node(chars, pos, delays, false)?);
        }
        if chars.get(*pos) != Some(&')') {
            return None;
        }
        *pos += 1;
        let leaf = children.is_empty() && !root;
        if chars.get(*pos) == Some(&'@') {
            if !leaf {
                return None;
            }
            *pos += 1;
            let start = *pos;
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            delays.push(chars[start..*pos].iter().collect::<String>().parse().ok()?);
        } else if leaf {
            delays.push(1);
        }
        Some(PlaneTree { children })
    }
    let tree = node(&chars, &mut pos, &mut delays, true).ok_or_else(err)?;
    if pos != chars.len() {
        return Err(err());
    }
    let delays = DelayFn::new(&tree, delays)?;
    Ok((tree, delays))
}

impl FromStr for PlaneTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s).map(|(t, _)| t)
    }
}

/// Delays on the leaves of a tree, in leaf preorder. All values are at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DelayFn {
    values: Vec<u32>,
}

impl DelayFn {
    pub fn new(tree: &PlaneTree, values: Vec<u32>) -> Result<Self, TreeError> {
        let expected = tree.leaf_count();
        if values.len() != expected {
            return Err(TreeError::DelayMismatch { expected, got: values.len() });
        }
        if values.contains(&0) {
            return Err(TreeError::ZeroDelay);
        }
        Ok(Self { values })
    }

    pub fn ones(tree: &PlaneTree) -> Self {
        Self { values: vec![1; tree.leaf_count()] }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&d| d == 1)
    }
}

/// Text form with delays, e.g. `(()@1(()@2))`.
pub fn delayed_paren(tree: &PlaneTree, delays: &DelayFn) -> String {
    let mut out = String::new();
    tree.write_paren(&mut out, Some(&delays.values), &mut 0, true);
    out
}

/// The tree dual to a state without floor returns, with its delays.
///
/// Dropping the `n` arcs that end on the floor leaves `m` arcs which nest
/// like parentheses when the boundary is read `y_m..y_1, x_1..x_n,
/// y'_1..y'_m`. Each arc becomes an edge; the region touching the floor is
/// the root.
pub fn tree_of(state: &CatalanState) -> Result<(PlaneTree, DelayFn), TreeError> {
    if state.floor_returns() {
        return Err(TreeError::FloorReturnPresent);
    }
    let (m, n) = (state.m(), state.n());
    let line: Vec<Point> = (1..=m)
        .rev()
        .map(Point::Y)
        .chain((1..=n).map(Point::X))
        .chain((1..=m).map(Point::Yp))
        .collect();
    let position: HashMap<Point, usize> = line.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let height = |p: Point| match p {
        Point::Y(i) | Point::Yp(i) => i as u32,
        _ => 0,
    };

    // stack of (children so far, delay of the arc that opened this node)
    let mut stack: Vec<(Vec<PlaneTree>, u32)> = vec![(Vec::new(), 0)];
    // leaves are disjoint intervals, so closing order is leaf preorder
    let mut leaf_delays = Vec::new();
    for (k, &p) in line.iter().enumerate() {
        let q = state.partner(p).expect("boundary point");
        let Some(&other) = position.get(&q) else { continue };
        if other > k {
            stack.push((Vec::new(), height(p).max(height(q)).max(1)));
        } else {
            let (children, delay) = stack.pop().expect("arcs nest");
            if children.is_empty() {
                leaf_delays.push(delay);
            }
            stack.last_mut().expect("root remains").0.push(PlaneTree { children });
        }
    }
    let (children, _) = stack.pop().expect("root");
    debug_assert!(stack.is_empty());
    let tree = PlaneTree { children };
    let delays = DelayFn::new(&tree, leaf_delays)?;
    Ok((tree, delays))
}

#[derive(Clone, Debug)]
struct DNode {
    children: Vec<DNode>,
    delay: u32,
}

impl DNode {
    fn build(t: &PlaneTree, delays: &[u32], next: &mut usize, root: bool) -> Self {
        let children: Vec<DNode> = t.children.iter().map(|c| DNode::build(c, delays, next, false)).collect();
        let delay = if children.is_empty() && !root {
            *next += 1;
            delays[*next - 1]
        } else {
            0
        };
        Self { children, delay }
    }

    fn size(&self) -> usize {
        1 + self.children.iter().map(DNode::size).sum::<usize>()
    }

    fn key(&self, out: &mut String) {
        out.push('(');
        for c in &self.children {
            c.key(out);
        }
        out.push(')');
        if self.children.is_empty() && self.delay > 0 {
            let _ = write!(out, "@{}", self.delay);
        }
    }

    /// Paths to leaves with delay 1.
    fn ready(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for (k, c) in self.children.iter().enumerate() {
            path.push(k);
            if c.children.is_empty() {
                if c.delay == 1 {
                    out.push(path.clone());
                }
            } else {
                c.ready(path, out);
            }
            path.pop();
        }
    }

    fn r_along(&self, path: &[usize]) -> usize {
        let mut node = self;
        let mut r = 0;
        for &k in path {
            r += node.children[k + 1..].iter().map(DNode::size).sum::<usize>();
            node = &node.children[k];
        }
        r
    }

    fn age(&mut self) {
        for c in &mut self.children {
            if c.children.is_empty() {
                c.delay = c.delay.saturating_sub(1).max(1);
            } else {
                c.age();
            }
        }
    }

    fn pluck(&self, path: &[usize]) -> DNode {
        let mut next = self.clone();
        next.age();
        let (last, parents) = path.split_last().expect("leaf is not the root");
        let mut parent = &mut next;
        for &k in parents {
            parent = &mut parent.children[k];
        }
        parent.children.remove(*last);
        if parent.children.is_empty() && !parents.is_empty() {
            parent.delay = 1;
        }
        next
    }
}

/// Plucking polynomial `Q(T, f)`, memoized on the delayed parenthesization.
pub fn plucking(tree: &PlaneTree, delays: &DelayFn) -> QPoly {
    assert_eq!(delays.values.len(), tree.leaf_count(), "delay function does not fit the tree");
    fn rec(t: &DNode, memo: &mut HashMap<String, QPoly>) -> QPoly {
        if t.children.is_empty() {
            return QPoly::one();
        }
        let mut key = String::new();
        t.key(&mut key);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let mut ready = Vec::new();
        t.ready(&mut Vec::new(), &mut ready);
        let mut total = QPoly::zero();
        for path in ready {
            let r = t.r_along(&path);
            total = total + rec(&t.pluck(&path), memo).shift(r);
        }
        memo.insert(key, total.clone());
        total
    }
    let root = DNode::build(tree, &delays.values, &mut 0, true);
    rec(&root, &mut HashMap::new())
}

/// `Q(T)` for all delays 1 as a product of q-multinomials over vertices.
pub fn plucking_closed(tree: &PlaneTree) -> QPoly {
    let mut sizes = Vec::new();
    tree.branch_sizes(&mut sizes);
    sizes
        .iter()
        .map(|s| q_multinomial(s).expect("branch sizes are positive"))
        .product()
}

/// Degree of `Q(T)` for all delays 1.
pub fn q_degree(tree: &PlaneTree) -> usize {
    let mut sizes = Vec::new();
    tree.branch_sizes(&mut sizes);
    sizes
        .iter()
        .map(|s| {
            let total: usize = s.iter().sum();
            let squares: usize = s.iter().map(|e| e * e).sum();
            (total * total - squares) / 2
        })
        .sum()
}

/// Random plane tree with `edges` edges. Each new vertex hangs from a
/// uniformly chosen earlier vertex, at a uniform position among its children.
pub fn random_tree<R: Rng + ?Sized>(edges: usize, rng: &mut R) -> PlaneTree {
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); edges + 1];
    for v in 1..=edges {
        let p = rng.gen_range(0..v);
        let pos = rng.gen_range(0..=kids[p].len());
        kids[p].insert(pos, v);
    }
    fn build(v: usize, kids: &[Vec<usize>]) -> PlaneTree {
        PlaneTree { children: kids[v].iter().map(|&c| build(c, kids)).collect() }
    }
    build(0, &kids)
}

/// The same abstract tree with the children of every vertex shuffled.
pub fn reembed<R: Rng + ?Sized>(tree: &PlaneTree, rng: &mut R) -> PlaneTree {
    let mut children: Vec<PlaneTree> = tree.children.iter().map(|c| reembed(c, rng)).collect();
    children.shuffle(rng);
    PlaneTree { children }
}

/// Outcome of [`is_plucking_realizable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realizability {
    /// A tree whose plucking polynomial is exactly the input.
    Yes(PlaneTree),
    No(String),
    Unknown(String),
}

/// Above this degree the exhaustive tree search is skipped.
const EXHAUSTIVE_DEGREE: usize = 11;

/// Decides whether `p = Q(T)` for some rooted tree with all delays 1.
///
/// First looks for `p = [N]! / ([b_1] ... [b_k])` with `2 <= b_i < N` and
/// `N <= search_bound`, which is sufficient. Failing that, every tree that
/// could produce degree `d` has at most `d + 1` edges above its lowest
/// branching vertex, so for small `d` all of them are tried.
pub fn is_plucking_realizable(p: &QPoly, search_bound: usize) -> Realizability {
    use num_traits::{One, Signed, ToPrimitive};
    if p.is_zero() {
        return Realizability::No("zero polynomial".into());
    }
    let coeffs = p.coeffs();
    if !coeffs[0].is_one() || !coeffs.last().unwrap().is_one() {
        return Realizability::No("constant and leading coefficients must be 1".into());
    }
    if coeffs.iter().any(|c| c.is_negative()) {
        return Realizability::No("negative coefficient".into());
    }
    let report = p.predicates().expect("nonzero");
    if !report.palindromic {
        return Realizability::No("not palindromic".into());
    }
    let d = coeffs.len() - 1;
    if d == 0 {
        return Realizability::Yes(PlaneTree::point());
    }
    let Some(value) = p.eval_at_one().to_u128() else {
        return Realizability::Unknown("value at 1 too large".into());
    };

    for big_n in 2..=search_bound.min(30) {
        let tri = big_n * (big_n - 1) / 2;
        if tri < d {
            continue;
        }
        let fact: u128 = (1..=big_n as u128).product();
        if !fact.is_multiple_of(value) {
            continue;
        }
        let target = fact / value;
        let mut found = Vec::new();
        divisor_sets(target, tri - d, 2, big_n - 1, &mut Vec::new(), &mut found);
        for divisors in found {
            let denom: QPoly = divisors.iter().map(|&b| q_int(b)).product();
            if p.clone() * denom != q_factorial(big_n) {
                continue;
            }
            if let Some(t) = gaussian_witness(big_n, &divisors) {
                if &plucking_closed(&t) == p {
                    return Realizability::Yes(t);
                }
            }
        }
    }

    if d <= EXHAUSTIVE_DEGREE {
        for e in 2..=d + 1 {
            for t in unordered_trees(e) {
                if t.children.len() >= 2 && q_degree(&t) == d && &plucking_closed(&t) == p {
                    return Realizability::Yes(t);
                }
            }
        }
        return Realizability::No(format!(
            "no [N]!/prod[b_i] form with N <= {search_bound}, and no tree with at most {} edges above its lowest branching has this plucking polynomial",
            d + 1
        ));
    }
    Realizability::Unknown(format!("no [N]!/prod[b_i] form with N <= {search_bound}"))
}

/// Multisets `lo <= b_1 <= ... <= b_k <= hi` with product `target` and `sum (b_i - 1) = excess`.
fn divisor_sets(target: u128, excess: usize, lo: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if target == 1 {
        if excess == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for b in lo..=hi {
        if b - 1 > excess {
            break;
        }
        if target.is_multiple_of(b as u128) {
            cur.push(b);
            divisor_sets(target / b as u128, excess - (b - 1), b, hi, cur, out);
            cur.pop();
        }
    }
}

/// A tree with `n` edges and `Q = [n]! / prod [b]` for `b` in `divisors`.
///
/// A branch of size `a` at the root whose inner tree has `Q = [a-1]!/...`
/// contributes one divisor `[a]`. Divisors are assigned to branches by
/// backtracking.
fn gaussian_witness(n: usize, divisors: &[usize]) -> Option<PlaneTree> {
    if divisors.is_empty() {
        return Some(PlaneTree::star(n));
    }
    let mut sorted = divisors.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    // each divisor is either a top-level branch (Some(top)) or nested in branch k
    fn assign(
        n: usize,
        sorted: &[usize],
        k: usize,
        tops: &mut Vec<(usize, Vec<usize>)>,
    ) -> Option<PlaneTree> {
        if k == sorted.len() {
            let used: usize = tops.iter().map(|(a, _)| a).sum();
            if used > n {
                return None;
            }
            let mut children = Vec::new();
            for (a, inner) in tops.iter() {
                children.push(gaussian_witness(a - 1, inner)?);
            }
            children.extend(std::iter::repeat_n(PlaneTree::point(), n - used));
            return Some(PlaneTree { children });
        }
        let b = sorted[k];
        for t in 0..tops.len() {
            if b < tops[t].0 - 1 {
                tops[t].1.push(b);
                if let Some(tree) = assign(n, sorted, k + 1, tops) {
                    return Some(tree);
                }
                tops[t].1.pop();
            }
        }
        if b < n && tops.iter().map(|(a, _)| a).sum::<usize>() + b <= n {
            tops.push((b, Vec::new()));
            if let Some(tree) = assign(n, sorted, k + 1, tops) {
                return Some(tree);
            }
            tops.pop();
        }
        None
    }
    assign(n, &sorted, 0, &mut Vec::new())
}

/// All rooted trees with `e` edges up to reordering children, in a canonical embedding.
pub fn unordered_trees(e: usize) -> Vec<PlaneTree> {
    fn gen(e: usize, memo: &mut HashMap<usize, Vec<PlaneTree>>) -> Vec<PlaneTree> {
        if let Some(hit) = memo.get(&e) {
            return hit.clone();
        }
        // branches as (size, index into trees of size-1 edges), non-increasing
        let mut out = Vec::new();
        let mut cur: Vec<(usize, usize)> = Vec::new();
        fn fill(
            left: usize,
            max: (usize, usize),
            cur: &mut Vec<(usize, usize)>,
            memo: &mut HashMap<usize, Vec<PlaneTree>>,
            out: &mut Vec<PlaneTree>,
        ) {
            if left == 0 {
                let children = cur.iter().map(|&(s, i)| gen(s - 1, memo)[i].clone()).collect();
                out.push(PlaneTree { children });
                return;
            }
            for s in (1..=left.min(max.0)).rev() {
                let count = gen(s - 1, memo).len();
                let top = if s == max.0 { max.1.min(count - 1) } else { count - 1 };
                for i in (0..=top).rev() {
                    cur.push((s, i));
                    fill(left - s, (s, i), cur, memo, out);
                    cur.pop();
                }
            }
        }
        fill(e, (e, usize::MAX), &mut cur, memo, &mut out);
        memo.insert(e, out.clone());
        out
    }
    gen(e, &mut HashMap::new())
}
