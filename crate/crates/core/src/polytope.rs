//! Lattice points of the fibers `P_T(r)` and their graded pieces.
//!
//! The degree-`k` piece of `S_T(r)` is the set of members whose leaf weights
//! equal `k·r`. Points are found by depth-first search over the internal edges
//! in the tree's peeling order: each new edge sits on a trinode whose other
//! two edges are fixed, so its value ranges over `|p - q| ..= p + q` in steps
//! of 2. The step keeps every internal edge at the parity of the leaf weight
//! on either of its sides. Trinodes closed off by an assignment are checked
//! on the spot.

use std::ops::ControlFlow;

use crate::trees::Tree;
use crate::weightings::{add, delta2, strictly_interior, two_tree, WeightVector, Weighting};
use crate::Result;

/// One graded piece: the points of `P_T(r)` scaled to degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSpec {
    pub tree: Tree,
    pub r: WeightVector,
    pub k: u32,
}

impl FiberSpec {
    pub fn new(tree: &Tree, r: &WeightVector, k: u32) -> Result<Self> {
        r.check_leaves(tree)?;
        Ok(Self {
            tree: tree.clone(),
            r: r.clone(),
            k,
        })
    }

    pub fn leaf_weights(&self) -> Vec<i64> {
        self.r.scaled(i64::from(self.k))
    }

    pub fn points(&self) -> Vec<Weighting> {
        points_over(&self.tree, &self.leaf_weights())
    }

    pub fn count(&self) -> u64 {
        count_over(&self.tree, &self.leaf_weights())
    }
}

/// Shape of `R` for which the fiber over `R` is a single point.
/// Indices are 1-based leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RClass {
    /// `R_i` equals the sum of all other entries.
    Case1(usize),
    /// `Δ₂(R_i, R_j, R_k)` with every other entry zero.
    Case2(usize, usize, usize),
    NotSinglePoint,
}

impl RClass {
    pub fn is_single_point(&self) -> bool {
        !matches!(self, RClass::NotSinglePoint)
    }
}

/// Calls `visit` with the edge values of every member whose leaf weights are
/// `leaf_weights`, in search order. Stops early on `ControlFlow::Break`.
pub fn for_each_point<B>(
    tree: &Tree,
    leaf_weights: &[i64],
    mut visit: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let n = tree.n_leaves();
    assert_eq!(leaf_weights.len(), n, "one weight per leaf");
    if leaf_weights.iter().any(|&w| w < 0) {
        return ControlFlow::Continue(());
    }
    let mut values = vec![0; tree.edge_count()];
    values[..n].copy_from_slice(leaf_weights);
    // only the single trinode of a 3-leaf tree has no internal edge to close it
    let closed_at_start = tree
        .trinodes()
        .iter()
        .filter(|es| es.iter().all(|&e| tree.is_leaf_edge(e)));
    for &[a, b, c] in closed_at_start {
        if !delta2(values[a], values[b], values[c]) {
            return ControlFlow::Continue(());
        }
    }
    search(tree, &mut values, 0, &mut visit)
}

fn search<B>(
    tree: &Tree,
    values: &mut [i64],
    depth: usize,
    visit: &mut impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let steps = tree.peel_order();
    let Some(step) = steps.get(depth) else {
        return visit(values);
    };
    let (p, q) = (values[step.known[0]], values[step.known[1]]);
    let mut v = (p - q).abs();
    while v <= p + q {
        values[step.edge] = v;
        let closed_ok = step.completes.iter().all(|&t| {
            let [a, b, c] = tree.trinodes()[t];
            delta2(values[a], values[b], values[c])
        });
        if closed_ok {
            search(tree, values, depth + 1, visit)?;
        }
        v += 2;
    }
    ControlFlow::Continue(())
}

/// All members with the given leaf weights (any integers; negative entries
/// give no points).
pub fn points_over(tree: &Tree, leaf_weights: &[i64]) -> Vec<Weighting> {
    let mut out = Vec::new();
    let _ = for_each_point::<()>(tree, leaf_weights, |vals| {
        out.push(Weighting::new(tree, vals.to_vec()).expect("edge count matches"));
        ControlFlow::Continue(())
    });
    out
}

pub fn count_over(tree: &Tree, leaf_weights: &[i64]) -> u64 {
    let mut count = 0;
    let _ = for_each_point::<()>(tree, leaf_weights, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// The degree-`k` piece of `S_T(r)`.
pub fn enumerate_points(tree: &Tree, r: &WeightVector, k: u32) -> Result<Vec<Weighting>> {
    Ok(FiberSpec::new(tree, r, k)?.points())
}

/// Degree-`k` members with every triangle inequality strict.
pub fn enumerate_interior(tree: &Tree, r: &WeightVector, k: u32) -> Result<Vec<Weighting>> {
    let mut points = enumerate_points(tree, r, k)?;
    points.retain(strictly_interior);
    Ok(points)
}

/// Degree-`k` interior points built as `2_T + η` for `η` over `k·r - 2`.
/// Agrees with [`enumerate_interior`] as a set.
pub fn enumerate_interior_by_translate(
    tree: &Tree,
    r: &WeightVector,
    k: u32,
) -> Result<Vec<Weighting>> {
    r.check_leaves(tree)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let shifted: Vec<i64> = r.scaled(i64::from(k)).iter().map(|w| w - 2).collect();
    let two = two_tree(tree);
    points_over(tree, &shifted)
        .iter()
        .map(|eta| add(&two, eta))
        .collect()
}

/// Number of members of degree `k`.
pub fn hilbert_function(tree: &Tree, r: &WeightVector, k: u32) -> Result<u64> {
    Ok(FiberSpec::new(tree, r, k)?.count())
}

/// Decides whether the fiber over `R` is a single point, reporting the
/// smallest witness. Case 1 is tried before Case 2; when both hold, Case 1 wins.
pub fn classify_r(r_shift: &[i64]) -> RClass {
    let total: i64 = r_shift.iter().sum();
    if let Some(i) = r_shift.iter().position(|&x| 2 * x == total) {
        return RClass::Case1(i + 1);
    }
    let n = r_shift.len();
    if r_shift.iter().filter(|&&x| x != 0).count() > 3 {
        return RClass::NotSinglePoint;
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let rest_zero = r_shift
                    .iter()
                    .enumerate()
                    .all(|(l, &x)| l == i || l == j || l == k || x == 0);
                if rest_zero && delta2(r_shift[i], r_shift[j], r_shift[k]) {
                    return RClass::Case2(i + 1, j + 1, k + 1);
                }
            }
        }
    }
    RClass::NotSinglePoint
}

/// `ω_r(T)`: the unique interior point of the fiber over `r`, when it has
/// exactly one. That happens precisely when `R = r - 2` is nonnegative with a
/// single-point shape, and then the point is `2_T` plus the lone point over `R`.
pub fn unique_interior_point(tree: &Tree, r: &WeightVector) -> Result<Option<Weighting>> {
    r.check_leaves(tree)?;
    let r_shift: Vec<i64> = r.entries().iter().map(|x| x - 2).collect();
    if r_shift.iter().any(|&x| x < 0) || !classify_r(&r_shift).is_single_point() {
        return Ok(None);
    }
    let points = points_over(tree, &r_shift);
    debug_assert_eq!(points.len(), 1, "single-point shape with {} points", points.len());
    points
        .first()
        .map(|eta| add(&two_tree(tree), eta))
        .transpose()
}

/// Dimension of the real fiber over `r`: `n - 3` when every `r_i` is below
/// the sum of the others, `0` when some `r_i` equals that sum (a single
/// point), and `None` when some `r_i` exceeds it (the fiber is empty).
pub fn fiber_dimension(tree: &Tree, r: &WeightVector) -> Result<Option<usize>> {
    r.check_leaves(tree)?;
    let total = r.sum();
    let worst = r.entries().iter().map(|&x| 2 * x - total).max().unwrap_or(0);
    Ok(match worst {
        w if w > 0 => None,
        0 => Some(0),
        _ => Some(tree.n_leaves() - 3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{build_tree, caterpillar, enumerate_trees};
    use crate::weightings::{is_interior, is_member};

    fn wv(v: &[i64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    // Every internal edge independently over 0..=bound, keeping members.
    fn box_points(tree: &Tree, leaf: &[i64]) -> Vec<Vec<i64>> {
        let m = tree.internal_edge_count();
        let bound: i64 = leaf.iter().sum();
        let mut out = Vec::new();
        let mut internal = vec![0i64; m];
        loop {
            let w = Weighting::from_parts(tree, leaf, &internal).unwrap();
            if is_member(tree, &w).unwrap() {
                out.push(w.values().to_vec());
            }
            let mut pos = 0;
            loop {
                if pos == m {
                    return out;
                }
                internal[pos] += 1;
                if internal[pos] <= bound {
                    break;
                }
                internal[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn caterpillar_square_points() {
        let t = caterpillar(4).unwrap();
        let ones = wv(&[1, 1, 1, 1]);
        let internal = |ws: Vec<Weighting>| ws.iter().map(|w| w.internal_weights()[0]).collect::<Vec<_>>();
        assert_eq!(internal(enumerate_points(&t, &ones, 1).unwrap()), vec![0, 2]);
        assert_eq!(internal(enumerate_points(&t, &ones, 2).unwrap()), vec![0, 2, 4]);
        assert_eq!(enumerate_points(&t, &ones, 0).unwrap(), vec![Weighting::zero(&t)]);
    }

    #[test]
    fn interior_examples() {
        let t = caterpillar(4).unwrap();
        let ones = wv(&[1, 1, 1, 1]);
        assert_eq!(enumerate_interior(&t, &ones, 2).unwrap(), vec![two_tree(&t)]);
        assert!(enumerate_interior(&t, &ones, 1).unwrap().is_empty());
        assert!(enumerate_interior(&t, &ones, 0).unwrap().is_empty());
        assert!(enumerate_interior_by_translate(&t, &ones, 0).unwrap().is_empty());
    }

    #[test]
    fn hilbert_examples() {
        let ones = wv(&[1, 1, 1, 1]);
        let trees = enumerate_trees(4).unwrap();
        assert_eq!(hilbert_function(&trees[0], &ones, 1).unwrap(), 2);
        for k in 0..=5 {
            let counts: Vec<u64> = trees.iter().map(|t| hilbert_function(t, &ones, k).unwrap()).collect();
            assert_eq!(counts[0], counts[1], "k = {k}");
        }
        let t6 = caterpillar(6).unwrap();
        assert_eq!(hilbert_function(&t6, &wv(&[3, 1, 4, 1, 2, 3]), 0).unwrap(), 1);
        assert!(hilbert_function(&t6, &ones, 1).is_err());
    }

    #[test]
    fn search_matches_box_enumeration() {
        for n in 3..=5 {
            for t in enumerate_trees(n).unwrap() {
                for leaf in itertools_product(n, 4) {
                    let mut fast: Vec<Vec<i64>> =
                        points_over(&t, &leaf).iter().map(|w| w.values().to_vec()).collect();
                    fast.sort();
                    let mut slow = box_points(&t, &leaf);
                    slow.sort();
                    assert_eq!(fast, slow, "{t:?} {leaf:?}");
                }
            }
        }
    }

    fn itertools_product(n: usize, max: i64) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| (0..=max).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                }))
                .collect();
        }
        out
    }

    #[test]
    fn classify_r_examples() {
        assert_eq!(classify_r(&[4, 2, 1, 1]), RClass::Case1(1));
        assert_eq!(classify_r(&[2, 0, 0, 0, 0]), RClass::NotSinglePoint);
        // Case 1 takes precedence on ties
        assert_eq!(classify_r(&[2, 1, 1, 0]), RClass::Case1(1));
        assert_eq!(classify_r(&[1, 1, 0, 0, 0, 0]), RClass::Case1(1));
        assert_eq!(classify_r(&[0, 0, 0, 0]), RClass::Case1(1));
        assert_eq!(classify_r(&[0, 2, 2, 2, 0]), RClass::Case2(2, 3, 4));
        assert_eq!(classify_r(&[3, 0, 1, 0, 2]), RClass::Case1(1));
        assert_eq!(classify_r(&[2, 2, 2, 1, 1]), RClass::NotSinglePoint);
        assert_eq!(classify_r(&[1, 1, 1, 0]), RClass::NotSinglePoint);
    }

    #[test]
    fn unique_interior_examples() {
        let t = caterpillar(4).unwrap();
        assert_eq!(unique_interior_point(&t, &wv(&[2, 2, 2, 2])).unwrap(), Some(two_tree(&t)));
        let w = unique_interior_point(&t, &wv(&[6, 4, 3, 3])).unwrap().unwrap();
        assert!(is_interior(&t, &w).unwrap());
        assert_eq!(enumerate_interior(&t, &wv(&[6, 4, 3, 3]), 1).unwrap(), vec![w]);
        let t5 = caterpillar(5).unwrap();
        assert_eq!(unique_interior_point(&t5, &wv(&[4, 1, 1, 1, 1])).unwrap(), None);
        assert_ne!(enumerate_interior(&t5, &wv(&[4, 1, 1, 1, 1]), 1).unwrap().len(), 1);
        assert_eq!(unique_interior_point(&t5, &wv(&[3, 3, 3, 3, 2])).unwrap(), None);
    }

    #[test]
    fn fiber_dimension_examples() {
        let t = caterpillar(4).unwrap();
        assert_eq!(fiber_dimension(&t, &wv(&[1, 1, 1, 1])).unwrap(), Some(1));
        assert_eq!(fiber_dimension(&t, &wv(&[3, 1, 1, 1])).unwrap(), Some(0));
        assert_eq!(fiber_dimension(&t, &wv(&[5, 1, 1, 1])).unwrap(), None);
        let tri = build_tree(3, &[]).unwrap();
        assert_eq!(fiber_dimension(&tri, &wv(&[2, 3, 3])).unwrap(), Some(0));
        assert_eq!(fiber_dimension(&caterpillar(6).unwrap(), &wv(&[1; 6])).unwrap(), Some(3));
    }

    #[test]
    fn degenerate_fibers_are_single_points() {
        let t = caterpillar(5).unwrap();
        let r = wv(&[4, 1, 1, 1, 1]);
        assert_eq!(enumerate_points(&t, &r, 1).unwrap().len(), 1);
        assert_eq!(enumerate_points(&t, &r, 3).unwrap().len(), 1);
    }

    #[test]
    fn early_stop() {
        let t = caterpillar(6).unwrap();
        let mut seen = 0;
        let flow = for_each_point(&t, &[4; 6], |_| {
            seen += 1;
            if seen == 3 { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
        });
        assert!(flow.is_break());
        assert_eq!(seen, 3);
    }
}
