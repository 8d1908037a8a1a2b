//! Planar trivalent trees with `n` ordered leaves.
//!
//! A tree is stored as a triangulation of a convex `n`-gon whose vertices are
//! labelled `1..=n` counterclockwise. Triangles are the internal vertices
//! (trinodes), diagonals are the internal edges, and polygon side `(i, i+1)`
//! (with side `(n, 1)` closing the polygon) is leaf edge `i`.
//!
//! Edge indices are fixed: leaf edge `i` has index `i - 1`, and internal edges
//! follow at indices `n..2n-3` in lexicographic order of their diagonals.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest leaf count accepted by [`enumerate_trees`]. Catalan(10) = 16796
/// trees at the bound.
pub const MAX_ENUMERATION_LEAVES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a trivalent tree needs at least 3 leaves (got {0})")]
    TooFewLeaves(usize),
    #[error("expected {expected} diagonals for {n} leaves, found {found}")]
    WrongDiagonalCount { n: usize, expected: usize, found: usize },
    #[error("diagonal {{{0},{1}}} has a vertex outside 1..={2}")]
    OutOfRange(usize, usize, usize),
    #[error("diagonal {{{0},{1}}} is degenerate (joins equal or adjacent vertices)")]
    Degenerate(usize, usize),
    #[error("diagonal {{{0},{1}}} appears more than once")]
    Duplicate(usize, usize),
    #[error("diagonals {{{0},{1}}} and {{{2},{3}}} cross")]
    Crossing(usize, usize, usize, usize),
    #[error("cannot enumerate trees with {0} leaves (supported range 3..={MAX_ENUMERATION_LEAVES})")]
    EnumerationBound(usize),
}

/// One step of the peeling order used by lattice-point enumeration.
///
/// When `edge` is assigned, `anchor` already has its other two edges `known`
/// fixed, and every trinode in `completes` has all three edges fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelStep {
    pub edge: usize,
    pub anchor: usize,
    pub known: [usize; 2],
    pub completes: Vec<usize>,
}

#[derive(Debug, PartialEq, Eq)]
struct TreeData {
    n: usize,
    diagonals: Vec<(usize, usize)>,
    trinodes: Vec<[usize; 3]>,
    edge_trinodes: Vec<Vec<usize>>,
    // For internal edge `n + d`: whether leaf `i` (0-based) lies on the arc a..b-1.
    first_side: Vec<Vec<bool>>,
    peel: Vec<PeelStep>,
}

/// An immutable planar trivalent tree. Cloning is cheap.
#[derive(Clone)]
pub struct Tree(Arc<TreeData>);

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.n == other.0.n && self.0.diagonals == other.0.diagonals)
    }
}

impl Eq for Tree {}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tree")
            .field("n", &self.0.n)
            .field("diagonals", &self.0.diagonals)
            .finish()
    }
}

/// JSON form of a tree: `{"n": 6, "diagonals": [[1,3],[1,4],[1,5]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub n: usize,
    pub diagonals: Vec<[usize; 2]>,
}

impl Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = TreeSpec::deserialize(d)?;
        let diagonals: Vec<(usize, usize)> = spec.diagonals.iter().map(|p| (p[0], p[1])).collect();
        build_tree(spec.n, &diagonals).map_err(serde::de::Error::custom)
    }
}

fn crosses((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// Validates a triangulation of the `n`-gon and derives the dual tree.
pub fn build_tree(n: usize, diagonals: &[(usize, usize)]) -> Result<Tree, TreeError> {
    if n < 3 {
        return Err(TreeError::TooFewLeaves(n));
    }
    let mut diags = Vec::with_capacity(diagonals.len());
    for &(x, y) in diagonals {
        if x < 1 || y < 1 || x > n || y > n {
            return Err(TreeError::OutOfRange(x, y, n));
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        if b - a <= 1 || (a == 1 && b == n) {
            return Err(TreeError::Degenerate(x, y));
        }
        diags.push((a, b));
    }
    diags.sort_unstable();
    if let Some(w) = diags.windows(2).find(|w| w[0] == w[1]) {
        return Err(TreeError::Duplicate(w[0].0, w[0].1));
    }
    for (i, &p) in diags.iter().enumerate() {
        if let Some(&q) = diags[i + 1..].iter().find(|&&q| crosses(p, q)) {
            return Err(TreeError::Crossing(p.0, p.1, q.0, q.1));
        }
    }
    if diags.len() != n - 3 {
        return Err(TreeError::WrongDiagonalCount {
            n,
            expected: n - 3,
            found: diags.len(),
        });
    }
    Ok(Tree(Arc::new(derive(n, diags))))
}

fn segment_edge(n: usize, diags: &[(usize, usize)], a: usize, b: usize) -> Option<usize> {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    if b == a + 1 {
        Some(a - 1)
    } else if a == 1 && b == n {
        Some(n - 1)
    } else {
        diags.binary_search(&(a, b)).ok().map(|d| n + d)
    }
}

fn derive(n: usize, diagonals: Vec<(usize, usize)>) -> TreeData {
    let edge_count = 2 * n - 3;
    let mut trinodes = Vec::with_capacity(n - 2);
    for a in 1..=n {
        for b in a + 1..=n {
            let Some(ab) = segment_edge(n, &diagonals, a, b) else {
                continue;
            };
            for c in b + 1..=n {
                if let (Some(bc), Some(ca)) = (
                    segment_edge(n, &diagonals, b, c),
                    segment_edge(n, &diagonals, a, c),
                ) {
                    // counterclockwise: a -> b -> c
                    trinodes.push([ab, bc, ca]);
                }
            }
        }
    }
    debug_assert_eq!(trinodes.len(), n - 2);

    let mut edge_trinodes = vec![Vec::new(); edge_count];
    for (t, edges) in trinodes.iter().enumerate() {
        for &e in edges {
            edge_trinodes[e].push(t);
        }
    }

    let first_side = diagonals
        .iter()
        .map(|&(a, b)| (1..=n).map(|leaf| leaf >= a && leaf < b).collect())
        .collect();

    let peel = peel_order(n, edge_count, &trinodes, &edge_trinodes);

    TreeData {
        n,
        diagonals,
        trinodes,
        edge_trinodes,
        first_side,
        peel,
    }
}

// Internal edges in an order where each new edge sits on a trinode whose
// other two edges are already fixed. Starts from the leaves.
fn peel_order(
    n: usize,
    edge_count: usize,
    trinodes: &[[usize; 3]],
    edge_trinodes: &[Vec<usize>],
) -> Vec<PeelStep> {
    let mut fixed = vec![false; edge_count];
    fixed[..n].iter_mut().for_each(|f| *f = true);
    let mut done = vec![false; trinodes.len()];
    let mut steps = Vec::with_capacity(n - 3);
    while steps.len() < n - 3 {
        let (anchor, edge) = trinodes
            .iter()
            .enumerate()
            .find_map(|(t, es)| {
                let open: Vec<usize> = es.iter().copied().filter(|&e| !fixed[e]).collect();
                (open.len() == 1).then(|| (t, open[0]))
            })
            .expect("a trinode with exactly one open edge exists until all edges are fixed");
        let es = trinodes[anchor];
        let known: Vec<usize> = es.iter().copied().filter(|&e| e != edge).collect();
        fixed[edge] = true;
        done[anchor] = true;
        let mut completes = Vec::new();
        for &t in &edge_trinodes[edge] {
            if !done[t] && trinodes[t].iter().all(|&e| fixed[e]) {
                done[t] = true;
                completes.push(t);
            }
        }
        steps.push(PeelStep {
            edge,
            anchor,
            known: [known[0], known[1]],
            completes,
        });
    }
    steps
}

impl Tree {
    pub fn n_leaves(&self) -> usize {
        self.0.n
    }

    pub fn edge_count(&self) -> usize {
        2 * self.0.n - 3
    }

    pub fn internal_edge_count(&self) -> usize {
        self.0.n - 3
    }

    /// Diagonals `(a, b)` with `a < b`, in internal-edge index order.
    pub fn diagonals(&self) -> &[(usize, usize)] {
        &self.0.diagonals
    }

    pub fn spec(&self) -> TreeSpec {
        TreeSpec {
            n: self.0.n,
            diagonals: self.0.diagonals.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    /// Trinodes, each with its three incident edge indices in counterclockwise order.
    pub fn trinodes(&self) -> &[[usize; 3]] {
        &self.0.trinodes
    }

    /// Trinodes incident to edge `e` (one for a leaf edge, two for an internal edge).
    pub fn edge_trinodes(&self, e: usize) -> &[usize] {
        &self.0.edge_trinodes[e]
    }

    pub fn peel_order(&self) -> &[PeelStep] {
        &self.0.peel
    }

    /// Edge index of leaf `i` (1-based).
    pub fn leaf_edge(&self, i: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.0.n);
        i - 1
    }

    pub fn is_leaf_edge(&self, e: usize) -> bool {
        e < self.0.n
    }

    /// Edge index of the internal edge for diagonal `{a, b}`, if present.
    pub fn internal_edge(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.0
            .diagonals
            .binary_search(&key)
            .ok()
            .map(|d| self.0.n + d)
    }

    /// Polygon segment `(u, v)`, `u < v`, that edge `e` crosses.
    pub fn segment(&self, e: usize) -> (usize, usize) {
        let n = self.0.n;
        if e < n - 1 {
            (e + 1, e + 2)
        } else if e == n - 1 {
            (1, n)
        } else {
            self.0.diagonals[e - n]
        }
    }

    /// Human-readable edge label: `"3"` for leaf 3, `"1-4"` for a diagonal.
    pub fn edge_label(&self, e: usize) -> String {
        if self.is_leaf_edge(e) {
            (e + 1).to_string()
        } else {
            let (a, b) = self.segment(e);
            format!("{a}-{b}")
        }
    }

    /// Whether leaf `leaf` (1-based) is on the first side of internal edge `e`:
    /// the arc of leaves `a..b-1` for diagonal `{a, b}`.
    pub fn on_first_side(&self, e: usize, leaf: usize) -> bool {
        self.0.first_side[e - self.0.n][leaf - 1]
    }

    /// Whether edge `e` lies on the tree path joining leaves `i` and `j`.
    pub fn on_leaf_path(&self, e: usize, i: usize, j: usize) -> bool {
        if self.is_leaf_edge(e) {
            e + 1 == i || e + 1 == j
        } else {
            self.on_first_side(e, i) != self.on_first_side(e, j)
        }
    }
}

/// The two arcs of consecutive leaves separated by an internal edge.
///
/// For diagonal `{a, b}` the first arc is `a..b-1` and the second is the rest,
/// listed cyclically starting from `b`.
pub fn leaf_sides(tree: &Tree, e: usize) -> crate::Result<(Vec<usize>, Vec<usize>)> {
    if e >= tree.edge_count() {
        return Err(crate::Error::EdgeOutOfRange(e));
    }
    if tree.is_leaf_edge(e) {
        return Err(crate::Error::LeafEdge(e));
    }
    let n = tree.n_leaves();
    let (a, b) = tree.segment(e);
    let first = (a..b).collect();
    let second = (b..=n).chain(1..a).collect();
    Ok((first, second))
}

/// All triangulations of the labelled `n`-gon, in a fixed recursive order.
pub fn enumerate_trees(n: usize) -> Result<Vec<Tree>, TreeError> {
    if n < 3 {
        return Err(TreeError::TooFewLeaves(n));
    }
    if n > MAX_ENUMERATION_LEAVES {
        return Err(TreeError::EnumerationBound(n));
    }
    let mut memo = vec![vec![None; n + 1]; n + 1];
    let sets = triangulations(1, n, &mut memo);
    Ok(sets
        .into_iter()
        .map(|mut d| {
            d.sort_unstable();
            Tree(Arc::new(derive(n, d)))
        })
        .collect())
}

type Memo = Vec<Vec<Option<Vec<Vec<(usize, usize)>>>>>;

// Triangulations of the sub-polygon on vertices lo..=hi, as diagonal lists
// (excluding the chord lo-hi itself).
fn triangulations(lo: usize, hi: usize, memo: &mut Memo) -> Vec<Vec<(usize, usize)>> {
    if hi - lo < 2 {
        return vec![Vec::new()];
    }
    if let Some(cached) = &memo[lo][hi] {
        return cached.clone();
    }
    let mut out = Vec::new();
    for apex in lo + 1..hi {
        let left = triangulations(lo, apex, memo);
        let right = triangulations(apex, hi, memo);
        for l in &left {
            for r in &right {
                let mut d = Vec::with_capacity(l.len() + r.len() + 2);
                d.extend_from_slice(l);
                d.extend_from_slice(r);
                if apex - lo > 1 {
                    d.push((lo, apex));
                }
                if hi - apex > 1 {
                    d.push((apex, hi));
                }
                out.push(d);
            }
        }
    }
    memo[lo][hi] = Some(out.clone());
    out
}

/// The fan triangulation from vertex 1, whose dual is the caterpillar tree.
pub fn caterpillar(n: usize) -> Result<Tree, TreeError> {
    let diags: Vec<(usize, usize)> = (3..n).map(|b| (1, b)).collect();
    build_tree(n, &diags)
}
