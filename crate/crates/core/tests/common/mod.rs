use lattice_skein::{PlaneTree, QPoly};

/// Plucking polynomial by enumerating removal sequences on a parent array.
pub fn pluck_by_orders(tree: &PlaneTree, delays: &[u32]) -> QPoly {
    // preorder arrays: parent, ordered children, original delay
    let mut parent = vec![usize::MAX];
    let mut kids: Vec<Vec<usize>> = vec![Vec::new()];
    let mut delay = vec![0u32];
    let mut leaf = 0;
    fn walk(
        t: &PlaneTree,
        me: usize,
        parent: &mut Vec<usize>,
        kids: &mut Vec<Vec<usize>>,
        delay: &mut Vec<u32>,
        delays: &[u32],
        leaf: &mut usize,
    ) {
        for c in t.children() {
            let id = parent.len();
            parent.push(me);
            kids.push(Vec::new());
            delay.push(0);
            kids[me].push(id);
            if c.children().is_empty() {
                delay[id] = delays[*leaf];
                *leaf += 1;
            }
            walk(c, id, parent, kids, delay, delays, leaf);
        }
    }
    walk(tree, 0, &mut parent, &mut kids, &mut delay, delays, &mut leaf);
    let original: Vec<bool> = kids.iter().enumerate().map(|(v, k)| v != 0 && k.is_empty()).collect();

    fn size(v: usize, kids: &[Vec<usize>], alive: &[bool]) -> usize {
        1 + kids[v].iter().filter(|&&c| alive[c]).map(|&c| size(c, kids, alive)).sum::<usize>()
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        step: u32,
        exp: usize,
        alive: &mut Vec<bool>,
        parent: &[usize],
        kids: &[Vec<usize>],
        delay: &[u32],
        original: &[bool],
        out: &mut Vec<u64>,
    ) {
        let remaining = alive.iter().filter(|&&a| a).count();
        if remaining == 1 {
            if out.len() <= exp {
                out.resize(exp + 1, 0);
            }
            out[exp] += 1;
            return;
        }
        for v in 1..alive.len() {
            if !alive[v] || kids[v].iter().any(|&c| alive[c]) {
                continue;
            }
            if original[v] && step < delay[v] {
                continue;
            }
            // vertices right of the path from v to the root
            let mut r = 0;
            let mut child = v;
            let mut p = parent[v];
            while p != usize::MAX {
                let pos = kids[p].iter().position(|&c| c == child).unwrap();
                r += kids[p][pos + 1..].iter().filter(|&&c| alive[c]).map(|&c| size(c, kids, alive)).sum::<usize>();
                child = p;
                p = parent[p];
            }
            alive[v] = false;
            go(step + 1, exp + r, alive, parent, kids, delay, original, out);
            alive[v] = true;
        }
    }
    let mut out = Vec::new();
    let mut alive = vec![true; parent.len()];
    go(1, 0, &mut alive, &parent, &kids, &delay, &original, &mut out);
    QPoly::from_coeffs(out)
}
