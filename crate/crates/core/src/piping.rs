//! The piping model.
//!
//! At a single trinode with edge weights `(w1, w2, w3)`, the weighting is
//! equivalent to pipe counts `x_ij = (w_i + w_j - w_k) / 2` between each pair
//! of incident edges. Over a whole tree, the pipes at neighbouring trinodes
//! are joined across each shared edge without crossings, which turns a
//! weighting into a multiset of chords between leaves ([`tree_t`]). Going the
//! other way, each chord adds 1 to every edge on its leaf-to-leaf path
//! ([`graph_s`]); this accepts any chord multiset, planar or not.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::json::{int_value, value_int};
use crate::trees::Tree;
use crate::weightings::{delta2, Weighting};
use crate::{Error, Result};

/// Pipe counts at a trinode. `x12` joins the first and second incident
/// edges (counterclockwise order), and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrinodeCoords {
    pub x12: i64,
    pub x13: i64,
    pub x23: i64,
}

impl TrinodeCoords {
    /// Componentwise `<=`.
    pub fn le(&self, other: &Self) -> bool {
        self.x12 <= other.x12 && self.x13 <= other.x13 && self.x23 <= other.x23
    }
}

pub fn trinode_t(w1: i64, w2: i64, w3: i64) -> Result<TrinodeCoords> {
    if !delta2(w1, w2, w3) {
        return Err(Error::NotDelta2(w1, w2, w3));
    }
    Ok(TrinodeCoords {
        x12: (w1 + w2 - w3) / 2,
        x13: (w1 + w3 - w2) / 2,
        x23: (w2 + w3 - w1) / 2,
    })
}

pub fn trinode_s(x: TrinodeCoords) -> Result<(i64, i64, i64)> {
    if x.x12 < 0 || x.x13 < 0 || x.x23 < 0 {
        return Err(Error::NegativePipes);
    }
    Ok((x.x12 + x.x13, x.x12 + x.x23, x.x13 + x.x23))
}

/// Chord multiplicities `N_ij` between the leaves `1..=n`.
///
/// Equality compares multiplicities only.
#[derive(Debug, Clone)]
pub struct PipingGraph {
    n: usize,
    mult: Vec<i64>,
    planar_certified: bool,
}

impl PartialEq for PipingGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.mult == other.mult
    }
}

impl Eq for PipingGraph {}

impl PipingGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            mult: vec![0; n * n],
            planar_certified: false,
        }
    }

    /// The planar cycle `1-2-...-n-1`, one chord per consecutive pair.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..=n {
            let j = i % n + 1;
            g.bump(i, j, 1);
        }
        g
    }

    pub fn n_leaves(&self) -> usize {
        self.n
    }

    /// Set when the graph came from [`tree_t`] and its pipes were checked to
    /// admit a non-crossing drawing in the disk.
    pub fn planar_certified(&self) -> bool {
        self.planar_certified
    }

    fn check_leaf(&self, leaf: usize) -> Result<()> {
        if leaf < 1 || leaf > self.n {
            return Err(Error::LeafOutOfRange { leaf, n: self.n });
        }
        Ok(())
    }

    fn bump(&mut self, i: usize, j: usize, m: i64) {
        self.mult[(i - 1) * self.n + (j - 1)] += m;
        self.mult[(j - 1) * self.n + (i - 1)] += m;
    }

    pub fn add_chord(&mut self, i: usize, j: usize, m: i64) -> Result<()> {
        self.check_leaf(i)?;
        self.check_leaf(j)?;
        if i == j {
            return Err(Error::LoopChord(i));
        }
        self.bump(i, j, m);
        self.planar_certified = false;
        Ok(())
    }

    pub fn n_ij(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return 0;
        }
        self.mult[(i - 1) * self.n + (j - 1)]
    }

    /// Total multiplicity of chords at leaf `i`.
    pub fn degree(&self, i: usize) -> i64 {
        (1..=self.n).map(|j| self.n_ij(i, j)).sum()
    }

    /// `(i, j, N_ij)` for `i < j` with `N_ij != 0`, in lexicographic order.
    pub fn chords(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (1..=self.n).flat_map(move |i| {
            (i + 1..=self.n).filter_map(move |j| {
                let m = self.n_ij(i, j);
                (m != 0).then_some((i, j, m))
            })
        })
    }

    /// Entrywise difference; the result is not planar-certified.
    pub fn minus(&self, other: &PipingGraph) -> Result<PipingGraph> {
        if self.n != other.n {
            return Err(Error::LeafCountMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(PipingGraph {
            n: self.n,
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a - b).collect(),
            planar_certified: false,
        })
    }

    /// Whether no two chords with four distinct endpoints interleave around
    /// the circle `1..=n`. Chords sharing a leaf never need to cross.
    pub fn is_noncrossing(&self) -> bool {
        let chords: Vec<(usize, usize)> = self
            .chords()
            .filter(|c| c.2 > 0)
            .map(|(i, j, _)| (i, j))
            .collect();
        chords.iter().enumerate().all(|(k, &(a, b))| {
            chords[k + 1..]
                .iter()
                .all(|&(c, d)| !((a < c && c < b && b < d) || (c < a && a < d && d < b)))
        })
    }

    pub fn to_json(&self) -> Value {
        let chords: Vec<Value> = self
            .chords()
            .map(|(i, j, m)| json!({"ends": [i, j], "mult": int_value(m)}))
            .collect();
        json!({"n": self.n, "chords": chords})
    }

    /// Reads `{"n": 6, "chords": [{"ends": [1,4], "mult": 2}, ...]}`.
    /// Repeated chords accumulate.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::PipingJson(m.to_string());
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer field \"n\""))? as usize;
        let chords = value
            .get("chords")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array field \"chords\""))?;
        let mut g = Self::empty(n);
        for c in chords {
            let ends = c
                .get("ends")
                .and_then(Value::as_array)
                .filter(|e| e.len() == 2)
                .ok_or_else(|| bad("field \"ends\" must be a pair of leaves"))?;
            let leaf = |v: &Value| v.as_u64().map(|x| x as usize).ok_or_else(|| bad("field \"ends\" must hold integers"));
            let (i, j) = (leaf(&ends[0])?, leaf(&ends[1])?);
            let m = c
                .get("mult")
                .map(|m| value_int(m).ok_or_else(|| bad("field \"mult\" must be an integer")))
                .transpose()?
                .unwrap_or(1);
            if m < 0 {
                return Err(bad("field \"mult\" must be nonnegative"));
            }
            g.add_chord(i, j, m)?;
        }
        Ok(g)
    }

    /// Graphviz source with the leaves on a circle.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph piping {\n  layout=circo;\n  node [shape=circle];\n");
        for i in 1..=self.n {
            let _ = writeln!(out, "  {i};");
        }
        for (i, j, m) in self.chords() {
            if m == 1 {
                let _ = writeln!(out, "  {i} -- {j};");
            } else {
                let _ = writeln!(out, "  {i} -- {j} [label=\"{m}\", penwidth={m}];");
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn n_ij(g: &PipingGraph, i: usize, j: usize) -> i64 {
    g.n_ij(i, j)
}

const NONE: usize = usize::MAX;

// Parallel pipes leaving leaf edge `origin` through slots `lo..hi`; slot `s`
// currently sits at `base + sign * s` on `edge`, about to enter `trinode`.
#[derive(Debug, Clone, Copy)]
struct Bundle {
    origin: usize,
    lo: i64,
    hi: i64,
    edge: usize,
    base: i64,
    sign: i64,
    trinode: usize,
}

/// The planar piping graph of a member weighting.
///
/// Every edge crosses a segment of the polygon. Pipe ends on that segment are
/// slots ordered from its lower-numbered vertex; both trinodes on an internal
/// edge address the same slots, so the join across the edge is fixed and
/// non-crossing. Inside a triangle, pipes turning around a corner nest toward
/// that corner. Parallel pipes are traced together as slot ranges, so the
/// cost does not grow with the weights.
pub fn tree_t(tree: &Tree, w: &Weighting) -> Result<PipingGraph> {
    w.check_tree(tree)?;
    w.require_member()?;
    let n = tree.n_leaves();

    // corners of each trinode as (vertex, edge, edge, pipe count)
    let corners = tree
        .trinodes()
        .iter()
        .map(|&[ab, bc, ca]| {
            let (a, b) = tree.segment(ab);
            let c = tree.segment(bc).1;
            let x = trinode_t(w.get(ab), w.get(bc), w.get(ca))?;
            Ok([(b, ab, bc, x.x12), (c, bc, ca, x.x23), (a, ca, ab, x.x13)])
        })
        .collect::<Result<Vec<_>>>()?;

    // slots `lo..hi` on `e` of the `count` pipes turning at vertex `p`
    let near_range = |e: usize, p: usize, count: i64| -> (i64, i64) {
        if tree.segment(e).0 == p {
            (0, count)
        } else {
            (w.get(e) - count, w.get(e))
        }
    };
    // slot on `e2` at the same distance from `p` as slot `s` on `e1`: `off + sg * s`
    let transfer = |e1: usize, e2: usize, p: usize| -> (i64, i64) {
        let from_low = tree.segment(e1).0 == p;
        let to_low = tree.segment(e2).0 == p;
        match (from_low, to_low) {
            (true, true) => (0, 1),
            (true, false) => (w.get(e2) - 1, -1),
            (false, true) => (w.get(e1) - 1, -1),
            (false, false) => (w.get(e2) - w.get(e1), 1),
        }
    };

    let mut work: Vec<Bundle> = (0..n)
        .filter(|&e| w.get(e) > 0)
        .map(|e| Bundle {
            origin: e,
            lo: 0,
            hi: w.get(e),
            edge: e,
            base: 0,
            sign: 1,
            trinode: tree.edge_trinodes(e)[0],
        })
        .collect();
    let mut finished = Vec::new();
    while let Some(b) = work.pop() {
        for &(p, e1, e2, count) in &corners[b.trinode] {
            let (from, to) = match (e1 == b.edge, e2 == b.edge) {
                (true, _) => (e1, e2),
                (_, true) => (e2, e1),
                _ => continue,
            };
            if count == 0 {
                continue;
            }
            let (r0, r1) = near_range(from, p, count);
            // start slots whose current slot falls in r0..r1
            let (s0, s1) = if b.sign > 0 {
                (r0 - b.base, r1 - b.base)
            } else {
                (b.base - r1 + 1, b.base - r0 + 1)
            };
            let (lo, hi) = (s0.max(b.lo), s1.min(b.hi));
            if lo >= hi {
                continue;
            }
            let (off, sg) = transfer(from, to, p);
            let next = Bundle {
                lo,
                hi,
                edge: to,
                base: off + sg * b.base,
                sign: sg * b.sign,
                trinode: NONE,
                ..b
            };
            if tree.is_leaf_edge(to) {
                finished.push(next);
            } else {
                let ts = tree.edge_trinodes(to);
                let trinode = if ts[0] == b.trinode { ts[1] } else { ts[0] };
                work.push(Bundle { trinode, ..next });
            }
        }
    }

    let mut g = PipingGraph::empty(n);
    let mut leaf_offset = vec![0i128; n + 1];
    for e in 0..n {
        leaf_offset[e + 1] = leaf_offset[e] + i128::from(w.get(e));
    }
    let boundary = |e: usize, s: i64| -> i128 {
        let s = i128::from(s);
        if e == n - 1 {
            leaf_offset[n] - 1 - s
        } else {
            leaf_offset[e] + s
        }
    };
    let mut atoms = Vec::new();
    let mut reversed = true;
    for b in finished.iter().filter(|b| b.origin < b.edge) {
        g.bump(b.origin + 1, b.edge + 1, b.hi - b.lo);
        let (first, last) = (b.lo, b.hi - 1);
        let start = (boundary(b.origin, first), boundary(b.origin, last));
        let end = (boundary(b.edge, b.base + b.sign * first), boundary(b.edge, b.base + b.sign * last));
        // a parallel bundle drawn without self-crossings pairs the ends in opposite order
        reversed &= first == last || (start.0 < start.1) != (end.0 < end.1);
        let k = atoms.len();
        atoms.push((start.0.min(start.1), start.0.max(start.1), k + 1));
        atoms.push((end.0.min(end.1), end.0.max(end.1), k));
    }
    g.planar_certified = reversed && noncrossing_atoms(atoms, leaf_offset[n]);
    Ok(g)
}

// Disjoint boundary intervals `(first, last, partner)` tiling `0..points`,
// paired so that the pairs can be drawn without crossings.
fn noncrossing_atoms(atoms: Vec<(i128, i128, usize)>, points: i128) -> bool {
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    order.sort_by_key(|&k| atoms[k].0);
    let mut next = 0;
    let mut stack = Vec::new();
    let mut rank = vec![0; atoms.len()];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r;
    }
    for &k in &order {
        let (first, last, partner) = atoms[k];
        if first != next {
            return false;
        }
        next = last + 1;
        if rank[partner] > rank[k] {
            stack.push(k);
        } else if stack.pop() != Some(partner) {
            return false;
        }
    }
    next == points && stack.is_empty()
}

/// Sum, over chords, of the chord multiplicity on every edge of its leaf path.
/// The result is always a member.
pub fn graph_s(tree: &Tree, g: &PipingGraph) -> Result<Weighting> {
    if g.n_leaves() != tree.n_leaves() {
        return Err(Error::LeafCountMismatch {
            expected: tree.n_leaves(),
            found: g.n_leaves(),
        });
    }
    let mut values = vec![0; tree.edge_count()];
    for (i, j, m) in g.chords() {
        for (e, v) in values.iter_mut().enumerate() {
            if tree.on_leaf_path(e, i, j) {
                *v += m;
            }
        }
    }
    Weighting::new(tree, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{build_tree, caterpillar, enumerate_trees};
    use crate::weightings::two_tree;

    #[test]
    fn trinode_examples() {
        let c = |x12, x13, x23| TrinodeCoords { x12, x13, x23 };
        assert_eq!(trinode_t(2, 2, 2).unwrap(), c(1, 1, 1));
        assert_eq!(trinode_t(1, 1, 0).unwrap(), c(1, 0, 0));
        assert_eq!(trinode_t(4, 3, 3).unwrap(), c(2, 2, 1));
        assert_eq!(trinode_t(1, 1, 1), Err(Error::NotDelta2(1, 1, 1)));
        assert_eq!(trinode_s(c(1, 1, 1)).unwrap(), (2, 2, 2));
        assert_eq!(trinode_s(c(0, 0, 0)).unwrap(), (0, 0, 0));
        assert_eq!(trinode_s(c(2, 2, 1)).unwrap(), (4, 3, 3));
        assert_eq!(trinode_s(c(0, -1, 0)), Err(Error::NegativePipes));
    }

    #[test]
    fn trinode_maps_are_inverse_bijections() {
        for a in 0..=12 {
            for b in 0..=12 {
                for c in 0..=12 {
                    if delta2(a, b, c) {
                        let x = trinode_t(a, b, c).unwrap();
                        assert!(x.x12 >= 0 && x.x13 >= 0 && x.x23 >= 0);
                        assert_eq!(trinode_s(x).unwrap(), (a, b, c));
                    } else {
                        assert!(trinode_t(a, b, c).is_err());
                    }
                    let x = TrinodeCoords { x12: a, x13: b, x23: c };
                    let (p, q, r) = trinode_s(x).unwrap();
                    assert_eq!(trinode_t(p, q, r).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn two_tree_pipes_form_the_cycle() {
        for n in 3..=7 {
            for t in enumerate_trees(n).unwrap() {
                let g = tree_t(&t, &two_tree(&t)).unwrap();
                assert_eq!(g.mult, PipingGraph::cycle(n).mult, "{t:?}");
                assert!(g.planar_certified());
            }
        }
    }

    #[test]
    fn zero_weighting_has_no_pipes() {
        let t = caterpillar(5).unwrap();
        let g = tree_t(&t, &Weighting::zero(&t)).unwrap();
        assert_eq!(g.chords().count(), 0);
        assert!(g.planar_certified());
    }

    #[test]
    fn no_pipe_crosses_a_zero_edge() {
        let t = build_tree(4, &[(1, 3)]).unwrap();
        let w = Weighting::from_parts(&t, &[1, 1, 1, 1], &[0]).unwrap();
        let g = tree_t(&t, &w).unwrap();
        assert_eq!(g.chords().collect::<Vec<_>>(), vec![(1, 2, 1), (3, 4, 1)]);
    }

    #[test]
    fn graph_s_examples() {
        let t = build_tree(4, &[(1, 3)]).unwrap();
        assert_eq!(graph_s(&t, &PipingGraph::cycle(4)).unwrap(), two_tree(&t));
        assert_eq!(graph_s(&t, &PipingGraph::empty(4)).unwrap(), Weighting::zero(&t));
        let mut g = PipingGraph::empty(4);
        g.add_chord(1, 4, 1).unwrap();
        assert_eq!(graph_s(&t, &g).unwrap().values(), &[1, 0, 0, 1, 1]);
        assert_eq!(g.add_chord(1, 5, 1), Err(Error::LeafOutOfRange { leaf: 5, n: 4 }));
        assert!(graph_s(&t, &PipingGraph::empty(5)).is_err());
    }

    #[test]
    fn crossing_graphs_are_accepted_by_graph_s() {
        let t = caterpillar(4).unwrap();
        let mut g = PipingGraph::empty(4);
        g.add_chord(1, 3, 1).unwrap();
        g.add_chord(2, 4, 1).unwrap();
        assert!(!g.is_noncrossing());
        let w = graph_s(&t, &g).unwrap();
        assert!(crate::weightings::is_member(&t, &w).unwrap());
    }

    #[test]
    fn accessors() {
        let cycle = PipingGraph::cycle(6);
        assert_eq!(n_ij(&cycle, 1, 2), 1);
        assert_eq!(n_ij(&cycle, 6, 1), 1);
        assert_eq!(n_ij(&cycle, 1, 3), 0);
        assert_eq!(n_ij(&PipingGraph::empty(6), 2, 5), 0);
        assert_eq!(cycle.degree(3), 2);
    }

    #[test]
    fn json_and_dot() {
        let mut g = PipingGraph::empty(6);
        g.add_chord(4, 1, 2).unwrap();
        g.add_chord(2, 3, 1).unwrap();
        let v = g.to_json();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"n":6,"chords":[{"ends":[1,4],"mult":2},{"ends":[2,3],"mult":1}]}"#
        );
        assert_eq!(PipingGraph::from_json(&v).unwrap().mult, g.mult);
        assert!(PipingGraph::from_json(&json!({"n": 3, "chords": [{"ends": [1, 4]}]})).is_err());
        assert!(PipingGraph::from_json(&json!({"chords": []}))
            .unwrap_err()
            .to_string()
            .contains("\"n\""));
        let dot = PipingGraph::cycle(3).to_dot();
        assert!(dot.contains("1 -- 2;") && dot.contains("2 -- 3;") && dot.contains("1 -- 3;"));
    }
}
