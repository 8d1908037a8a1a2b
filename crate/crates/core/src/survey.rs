//! Classifier-versus-oracle sweeps over every tree and weight vector of a size.

use rayon::prelude::*;

use crate::gorenstein::{classify_gorenstein, gorenstein_oracle, GorensteinVerdict};
use crate::trees::{enumerate_trees, Tree};
use crate::weightings::WeightVector;
use crate::Result;

/// How deep the oracle searches for a given weight vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleDepth {
    /// `min(3a, 12)` when the classifier finds generator degree `a`,
    /// `2(n-2)` when it does not.
    Adaptive,
    Fixed(u32),
}

impl OracleDepth {
    pub fn for_verdict(&self, n: usize, verdict: &GorensteinVerdict) -> u32 {
        match *self {
            OracleDepth::Fixed(d) => d,
            OracleDepth::Adaptive => match verdict.a.filter(|_| verdict.is_gorenstein) {
                Some(a) => (3 * a).min(12),
                None => 2 * (n as u32).saturating_sub(2).max(1),
            },
        }
    }
}

/// All weight vectors of length `n` with entries in `1..=max_entry` and even
/// sum, in lexicographic order.
pub fn weight_vectors(n: usize, max_entry: i64) -> Vec<WeightVector> {
    let mut out = Vec::new();
    if n == 0 || max_entry < 1 {
        return out;
    }
    let mut cur = vec![1i64; n];
    loop {
        if cur.iter().sum::<i64>() % 2 == 0 {
            out.push(WeightVector::new(cur.clone()).expect("positive entries with even sum"));
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < max_entry {
                cur[pos] += 1;
                cur[pos + 1..].iter_mut().for_each(|x| *x = 1);
                break;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SurveyRow {
    pub r: WeightVector,
    pub tree_index: usize,
    pub tree: Tree,
    pub classifier: GorensteinVerdict,
    pub oracle: GorensteinVerdict,
}

impl SurveyRow {
    pub fn agrees(&self) -> bool {
        self.classifier.agrees_with(&self.oracle)
    }
}

pub fn survey_pair(tree: &Tree, r: &WeightVector, depth: OracleDepth) -> Result<(GorensteinVerdict, GorensteinVerdict)> {
    let classifier = classify_gorenstein(tree, r)?;
    let d = depth.for_verdict(tree.n_leaves(), &classifier);
    let oracle = gorenstein_oracle(tree, r, d)?;
    Ok((classifier, oracle))
}

/// Classifier and oracle verdicts for every tree with `n` leaves and every
/// weight vector with entries up to `max_entry`. Rows are ordered by `r`,
/// then by tree index, independent of scheduling.
pub fn run_survey(n: usize, max_entry: i64, depth: OracleDepth) -> Result<Vec<SurveyRow>> {
    let trees = enumerate_trees(n)?;
    let jobs: Vec<(WeightVector, usize)> = weight_vectors(n, max_entry)
        .into_iter()
        .flat_map(|r| (0..trees.len()).map(move |t| (r.clone(), t)))
        .collect();
    jobs.into_par_iter()
        .map(|(r, tree_index)| {
            let tree = trees[tree_index].clone();
            let (classifier, oracle) = survey_pair(&tree, &r, depth)?;
            Ok(SurveyRow { r, tree_index, tree, classifier, oracle })
        })
        .collect()
}
