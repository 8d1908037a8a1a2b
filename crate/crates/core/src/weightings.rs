//! Edge weightings of a tree and the semigroup `S_T(r)` they form.
//!
//! A weighting is a member when every trinode satisfies [`delta2`]: the
//! triangle inequalities together with an even sum. Leaf edges are only
//! constrained through their single trinode. The zero weighting is a member
//! of degree 0.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::json::{int_value, value_int};
use crate::piping::trinode_t;
use crate::trees::Tree;
use crate::{Error, Result};

/// `|a - b| <= c <= a + b` with `a, b, c >= 0` and `a + b + c` even.
pub fn delta2(a: i64, b: i64, c: i64) -> bool {
    a >= 0 && b >= 0 && c >= 0 && (a - b).abs() <= c && c <= a + b && (a + b + c) % 2 == 0
}

fn strict_triangle(a: i64, b: i64, c: i64) -> bool {
    (a - b).abs() < c && c < a + b
}

/// The grading datum: positive integers, one per leaf, with even sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyWeightVector);
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &v)| v < 1) {
            return Err(Error::NonPositiveWeight { index: index + 1, value });
        }
        let sum: i64 = entries.iter().sum();
        if sum % 2 != 0 {
            return Err(Error::OddWeightSum(sum));
        }
        Ok(Self(entries))
    }

    /// Positive entries with any sum. With an odd sum every odd-degree piece
    /// is empty and the semigroup lives in even degrees.
    pub fn allow_odd_sum(entries: Vec<i64>) -> Result<Self> {
        match Self::new(entries.clone()) {
            Err(Error::OddWeightSum(_)) => Ok(Self(entries)),
            other => other,
        }
    }

    /// `(1, ..., 1)` with `n` entries; `n` must be even.
    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `k·r`, as raw leaf weights.
    pub fn scaled(&self, k: i64) -> Vec<i64> {
        self.0.iter().map(|&x| k * x).collect()
    }

    pub(crate) fn check_leaves(&self, tree: &Tree) -> Result<()> {
        if self.len() != tree.n_leaves() {
            return Err(Error::LeafCountMismatch {
                expected: tree.n_leaves(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for WeightVector {
    type Err = String;

    /// Parses comma-separated integers, e.g. `1,1,1,1`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let entries = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("invalid weight {:?}: {e}", p.trim()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(entries).map_err(|e| e.to_string())
    }
}

/// An integer per edge of a tree, indexed by the tree's edge indices.
///
/// Values are unconstrained; membership in the semigroup is a separate check.
#[derive(Clone, PartialEq, Eq)]
pub struct Weighting {
    tree: Tree,
    values: Vec<i64>,
}

impl fmt::Debug for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.tree.n_leaves();
        write!(f, "Weighting(leaf {:?}, internal {:?})", &self.values[..n], &self.values[n..])
    }
}

impl Weighting {
    pub fn new(tree: &Tree, values: Vec<i64>) -> Result<Self> {
        if values.len() != tree.edge_count() {
            return Err(Error::EdgeCountMismatch {
                expected: tree.edge_count(),
                found: values.len(),
            });
        }
        Ok(Self {
            tree: tree.clone(),
            values,
        })
    }

    /// Leaf weights (leaf 1 first) followed by internal weights in diagonal order.
    pub fn from_parts(tree: &Tree, leaf: &[i64], internal: &[i64]) -> Result<Self> {
        Self::new(tree, leaf.iter().chain(internal).copied().collect())
    }

    pub fn zero(tree: &Tree) -> Self {
        Self {
            tree: tree.clone(),
            values: vec![0; tree.edge_count()],
        }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, e: usize) -> i64 {
        self.values[e]
    }

    /// Weight on leaf `i` (1-based).
    pub fn leaf(&self, i: usize) -> i64 {
        self.values[i - 1]
    }

    pub fn leaf_weights(&self) -> &[i64] {
        &self.values[..self.tree.n_leaves()]
    }

    pub fn internal_weights(&self) -> &[i64] {
        &self.values[self.tree.n_leaves()..]
    }

    /// The three weights around trinode `t`, in counterclockwise order.
    pub fn at_trinode(&self, t: usize) -> [i64; 3] {
        let [a, b, c] = self.tree.trinodes()[t];
        [self.values[a], self.values[b], self.values[c]]
    }

    fn first_violation(&self) -> Option<usize> {
        (0..self.tree.trinodes().len()).find(|&t| {
            let [a, b, c] = self.at_trinode(t);
            !delta2(a, b, c)
        })
    }

    pub(crate) fn check_tree(&self, tree: &Tree) -> Result<()> {
        if &self.tree != tree {
            return Err(Error::TreeMismatch);
        }
        Ok(())
    }

    pub(crate) fn require_member(&self) -> Result<()> {
        match self.first_violation() {
            Some(trinode) => Err(Error::NotMember { trinode }),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> Value {
        let n = self.tree.n_leaves();
        let leaf: Map<String, Value> = (1..=n)
            .map(|i| (i.to_string(), int_value(self.leaf(i))))
            .collect();
        let internal: Map<String, Value> = (n..self.tree.edge_count())
            .map(|e| (self.tree.edge_label(e), int_value(self.values[e])))
            .collect();
        let mut obj = Map::new();
        obj.insert("leaf".into(), Value::Object(leaf));
        obj.insert("internal".into(), Value::Object(internal));
        Value::Object(obj)
    }

    /// Reads `{"leaf": {"1": w, ...}, "internal": {"1-3": w, ...}}` against `tree`.
    /// Every edge must be present exactly once.
    pub fn from_json(tree: &Tree, value: &Value) -> Result<Self> {
        let bad = |m: String| Error::WeightingJson(m);
        let obj = value.as_object().ok_or_else(|| bad("expected an object".into()))?;
        let n = tree.n_leaves();
        let mut values = vec![None; tree.edge_count()];

        let leaf = obj
            .get("leaf")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing object field \"leaf\"".into()))?;
        for (key, v) in leaf {
            let i: usize = key
                .parse()
                .ok()
                .filter(|i| (1..=n).contains(i))
                .ok_or_else(|| bad(format!("field \"leaf\": unknown leaf {key:?}")))?;
            let w = value_int(v).ok_or_else(|| bad(format!("field \"leaf.{key}\": not an integer")))?;
            values[i - 1] = Some(w);
        }

        let internal = match obj.get("internal") {
            Some(v) => v
                .as_object()
                .ok_or_else(|| bad("field \"internal\" must be an object".into()))?
                .clone(),
            None => Map::new(),
        };
        for (key, v) in &internal {
            let e = parse_diagonal(key)
                .and_then(|(a, b)| tree.internal_edge(a, b))
                .ok_or_else(|| bad(format!("field \"internal\": {key:?} is not a diagonal of the tree")))?;
            let w = value_int(v)
                .ok_or_else(|| bad(format!("field \"internal.{key}\": not an integer")))?;
            values[e] = Some(w);
        }

        let values = values
            .into_iter()
            .enumerate()
            .map(|(e, v)| {
                let section = if tree.is_leaf_edge(e) { "leaf" } else { "internal" };
                v.ok_or_else(|| bad(format!("missing field \"{section}.{}\"", tree.edge_label(e))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(tree, values)
    }
}

fn parse_diagonal(key: &str) -> Option<(usize, usize)> {
    let (a, b) = key.split_once('-')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl Serialize for Weighting {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Whether `w` lies in `S_T`: [`delta2`] at every trinode.
pub fn is_member(tree: &Tree, w: &Weighting) -> Result<bool> {
    w.check_tree(tree)?;
    Ok(w.first_violation().is_none())
}

/// The `k >= 0` with leaf weights equal to `k·r`, if there is one.
pub fn degree_of(tree: &Tree, w: &Weighting, r: &WeightVector) -> Result<Option<i64>> {
    w.check_tree(tree)?;
    r.check_leaves(tree)?;
    let leaves = w.leaf_weights();
    let (first, r0) = (leaves[0], r.entries()[0]);
    if first < 0 || first % r0 != 0 {
        return Ok(None);
    }
    let k = first / r0;
    let proportional = leaves.iter().zip(r.entries()).all(|(&x, &ri)| x == k * ri);
    Ok(proportional.then_some(k))
}

fn zip_with(w: &Weighting, other: &Weighting, f: impl Fn(i64, i64) -> i64) -> Result<Weighting> {
    other.check_tree(&w.tree)?;
    Ok(Weighting {
        tree: w.tree.clone(),
        values: w.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
    })
}

pub fn add(w: &Weighting, other: &Weighting) -> Result<Weighting> {
    zip_with(w, other, |a, b| a + b)
}

/// Edgewise difference. The result may have negative entries or fail membership.
pub fn subtract(w: &Weighting, other: &Weighting) -> Result<Weighting> {
    zip_with(w, other, |a, b| a - b)
}

/// Whether `w` divides `other` in the semigroup, i.e. `other - w` is a member.
///
/// Decided trinode by trinode on pipe counts: `w` divides `other` iff every
/// pipe count of `w` is at most the matching count of `other`.
pub fn divides(w: &Weighting, other: &Weighting) -> Result<bool> {
    other.check_tree(&w.tree)?;
    w.require_member()?;
    other.require_member()?;
    for t in 0..w.tree.trinodes().len() {
        let [a, b, c] = w.at_trinode(t);
        let [x, y, z] = other.at_trinode(t);
        let small = trinode_t(a, b, c)?;
        let big = trinode_t(x, y, z)?;
        if !small.le(&big) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The weighting `2_T` assigning 2 to every edge.
pub fn two_tree(tree: &Tree) -> Weighting {
    Weighting {
        tree: tree.clone(),
        values: vec![2; tree.edge_count()],
    }
}

/// Whether a member lies in the interior of the cone `P_T`: every triangle
/// inequality strict at every trinode.
pub fn is_interior(tree: &Tree, w: &Weighting) -> Result<bool> {
    w.check_tree(tree)?;
    w.require_member()?;
    Ok(strictly_interior(w))
}

/// Strict triangle inequalities at every trinode, without the membership check.
pub fn strictly_interior(w: &Weighting) -> bool {
    (0..w.tree.trinodes().len()).all(|t| {
        let [a, b, c] = w.at_trinode(t);
        strict_triangle(a, b, c)
    })
}

/// Whether a degree-1 point of the fiber over `r` lies on the fiber's boundary.
///
/// A facet of the fiber is a facet of the cone, so this is `!is_interior`. When
/// some `r_i` equals the sum of the others the fiber is a single point sitting
/// over a facet of the side-length cone, and that point is boundary.
pub fn is_boundary(tree: &Tree, w: &Weighting, r: &WeightVector) -> Result<bool> {
    w.check_tree(tree)?;
    w.require_member()?;
    if degree_of(tree, w, r)? != Some(1) {
        return Err(Error::NotDegreeOne);
    }
    Ok(!strictly_interior(w))
}
