//! Deciding whether the semigroup algebra of `S_T(r)` is Gorenstein.
//!
//! The algebra is Gorenstein exactly when there is an interior lattice point
//! `ω` of the cone with `int = ω + cone`; its degree `a` gives the
//! a-invariant `-a`. Two independent routes are provided:
//!
//! * [`classify_gorenstein`] is closed-form. It looks for the least divisor
//!   `a` of `2(n-2)` for which `R = a·r - 2` has a single-point shape, then
//!   requires every nonzero chord multiplicity of `ω - 2_T` to be at least
//!   `n - 4`.
//! * [`gorenstein_oracle`] enumerates interior points degree by degree up to a
//!   depth bound and checks that the minimal one is unique and divides all
//!   the others.

use std::ops::ControlFlow;

use num_rational::Ratio;
use serde_json::{json, Value};

use crate::piping::PipingGraph;
use crate::polytope::{classify_r, for_each_point, unique_interior_point, RClass};
use crate::trees::Tree;
use crate::weightings::{delta2, divides, strictly_interior, WeightVector, Weighting};
use crate::{Error, Result};

/// A degree at which `a·r - 2` has a single-point shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDegree {
    pub a: u32,
    pub r_shift: Vec<i64>,
    pub class: RClass,
}

/// Positive divisors of `m` in increasing order.
pub fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// The least divisor `a` of `2(n-2)` with `a·r - 2 >= 0` of single-point shape.
pub fn find_generator_degree(r: &WeightVector) -> Option<GeneratorDegree> {
    let n = r.len();
    if n < 3 {
        return None;
    }
    divisors(2 * (n as u32 - 2)).into_iter().find_map(|a| {
        let r_shift: Vec<i64> = r.scaled(i64::from(a)).iter().map(|x| x - 2).collect();
        if r_shift.iter().any(|&x| x < 0) {
            return None;
        }
        let class = classify_r(&r_shift);
        class.is_single_point().then_some(GeneratorDegree { a, r_shift, class })
    })
}

/// Chord multiplicities of `ω_r(T) - 2_T` predicted from the shape of `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedNij(PipingGraph);

impl ExpectedNij {
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0.n_ij(i, j)
    }

    pub fn graph(&self) -> &PipingGraph {
        &self.0
    }

    /// `(i, j, N_ij)` for `i < j` with nonzero multiplicity.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.0.chords()
    }
}

pub fn expected_nij(r_shift: &[i64], class: &RClass) -> Result<ExpectedNij> {
    let n = r_shift.len();
    let check = |leaf: usize| {
        if leaf < 1 || leaf > n {
            Err(Error::LeafOutOfRange { leaf, n })
        } else {
            Ok(())
        }
    };
    let mut g = PipingGraph::empty(n);
    match *class {
        RClass::NotSinglePoint => return Err(Error::NotSinglePoint),
        RClass::Case1(hub) => {
            check(hub)?;
            for j in (1..=n).filter(|&j| j != hub) {
                g.add_chord(hub, j, r_shift[j - 1])?;
            }
        }
        RClass::Case2(i, j, k) => {
            for leaf in [i, j, k] {
                check(leaf)?;
            }
            let r = |x: usize| r_shift[x - 1];
            g.add_chord(i, j, (r(i) + r(j) - r(k)) / 2)?;
            g.add_chord(i, k, (r(i) + r(k) - r(j)) / 2)?;
            g.add_chord(j, k, (r(j) + r(k) - r(i)) / 2)?;
        }
    }
    Ok(ExpectedNij(g))
}

/// Why a verdict is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// No divisor of `2(n-2)` gives a single-point shape.
    NoAdmissibleDegree,
    /// `0 < N_ij < required` for the candidate generator at `degree`.
    DeficitAt {
        degree: u32,
        i: usize,
        j: usize,
        n_ij: i64,
        required: i64,
    },
    /// No interior point at any degree up to the oracle depth.
    NoInteriorPoint,
    /// The least degree with interior points has more than one.
    MultipleMinimalInterior { degree: u32, count: usize },
    /// An interior point at `degree` not divisible by the minimal one.
    NotDivisible { degree: u32, witness: Weighting },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Classifier,
    /// Exhaustive up to and including this degree.
    Oracle { depth: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GorensteinVerdict {
    pub is_gorenstein: bool,
    /// Degree of the generator of the interior ideal.
    pub a: Option<u32>,
    pub generator: Option<Weighting>,
    pub failure: Option<Failure>,
    pub method: Method,
}

impl GorensteinVerdict {
    fn positive(a: u32, generator: Weighting, method: Method) -> Self {
        Self {
            is_gorenstein: true,
            a: Some(a),
            generator: Some(generator),
            failure: None,
            method,
        }
    }

    fn negative(failure: Failure, method: Method) -> Self {
        Self {
            is_gorenstein: false,
            a: None,
            generator: None,
            failure: Some(failure),
            method,
        }
    }

    /// `-a` for a Gorenstein algebra.
    pub fn a_invariant(&self) -> Option<i64> {
        self.a.filter(|_| self.is_gorenstein).map(|a| -i64::from(a))
    }

    /// Same verdict, and for positives the same degree and generator.
    pub fn agrees_with(&self, other: &GorensteinVerdict) -> bool {
        self.is_gorenstein == other.is_gorenstein
            && (!self.is_gorenstein || (self.a == other.a && self.generator == other.generator))
    }

    pub fn to_json(&self) -> Value {
        let method = match self.method {
            Method::Classifier => json!("classifier"),
            Method::Oracle { depth } => json!({"oracle": {"depth": depth}}),
        };
        let failure = self.failure.as_ref().map(|f| match f {
            Failure::NoAdmissibleDegree => json!({"kind": "no_admissible_degree"}),
            Failure::DeficitAt { degree, i, j, n_ij, required } => json!({
                "kind": "deficit",
                "degree": degree,
                "pair": [i, j],
                "n_ij": n_ij,
                "required": required,
            }),
            Failure::NoInteriorPoint => json!({"kind": "no_interior_point"}),
            Failure::MultipleMinimalInterior { degree, count } => json!({
                "kind": "multiple_minimal_interior",
                "degree": degree,
                "count": count,
            }),
            Failure::NotDivisible { degree, witness } => json!({
                "kind": "not_divisible",
                "degree": degree,
                "witness": witness.to_json(),
            }),
        });
        json!({
            "is_gorenstein": self.is_gorenstein,
            "a": self.a,
            "a_invariant": self.a_invariant(),
            "generator": self.generator.as_ref().map(Weighting::to_json),
            "failure": failure,
            "method": method,
        })
    }
}

/// Closed-form verdict.
///
/// Three leaves: the algebra is a polynomial ring in one variable generated
/// by the degree-1 point, reported with `a = 1`, provided `r` itself satisfies
/// the triangle inequalities; otherwise there is no positive-degree element.
pub fn classify_gorenstein(tree: &Tree, r: &WeightVector) -> Result<GorensteinVerdict> {
    r.check_leaves(tree)?;
    let n = tree.n_leaves();
    if n == 3 {
        let e = r.entries();
        if !delta2(e[0], e[1], e[2]) {
            return Ok(GorensteinVerdict::negative(Failure::NoAdmissibleDegree, Method::Classifier));
        }
        let generator = Weighting::new(tree, e.to_vec())?;
        return Ok(GorensteinVerdict::positive(1, generator, Method::Classifier));
    }
    let Some(found) = find_generator_degree(r) else {
        return Ok(GorensteinVerdict::negative(Failure::NoAdmissibleDegree, Method::Classifier));
    };
    let required = n as i64 - 4;
    let nij = expected_nij(&found.r_shift, &found.class)?;
    if let Some((i, j, n_ij)) = nij.nonzero().find(|&(_, _, m)| m < required) {
        let failure = Failure::DeficitAt {
            degree: found.a,
            i,
            j,
            n_ij,
            required,
        };
        return Ok(GorensteinVerdict::negative(failure, Method::Classifier));
    }
    let scaled = WeightVector::new(r.scaled(i64::from(found.a)))?;
    let generator = unique_interior_point(tree, &scaled)?
        .expect("a single-point shape has a unique interior point");
    Ok(GorensteinVerdict::positive(found.a, generator, Method::Classifier))
}

/// Brute-force verdict from interior points of degree `1..=depth`.
///
/// A positive answer certifies `int = ω + cone` only through `depth`.
pub fn gorenstein_oracle(tree: &Tree, r: &WeightVector, depth: u32) -> Result<GorensteinVerdict> {
    r.check_leaves(tree)?;
    if depth < 1 {
        return Err(Error::ZeroDepth);
    }
    let method = Method::Oracle { depth };
    let mut generator: Option<(u32, Weighting)> = None;
    for k in 1..=depth {
        let leaf = r.scaled(i64::from(k));
        match &generator {
            None => {
                let mut interior = Vec::new();
                let _ = for_each_point::<()>(tree, &leaf, |vals| {
                    let w = Weighting::new(tree, vals.to_vec()).expect("edge count matches");
                    if strictly_interior(&w) {
                        interior.push(w);
                    }
                    ControlFlow::Continue(())
                });
                match interior.len() {
                    0 => {}
                    1 => generator = Some((k, interior.pop().expect("one point"))),
                    count => {
                        let failure = Failure::MultipleMinimalInterior { degree: k, count };
                        return Ok(GorensteinVerdict::negative(failure, method));
                    }
                }
            }
            Some((_, omega)) => {
                let mut witness = None;
                let _ = for_each_point(tree, &leaf, |vals| {
                    let w = Weighting::new(tree, vals.to_vec()).expect("edge count matches");
                    if strictly_interior(&w) && !divides(omega, &w).expect("both are members") {
                        witness = Some(w);
                        return ControlFlow::Break(());
                    }
                    ControlFlow::Continue(())
                });
                if let Some(witness) = witness {
                    let failure = Failure::NotDivisible { degree: k, witness };
                    return Ok(GorensteinVerdict::negative(failure, method));
                }
            }
        }
    }
    Ok(match generator {
        Some((a, omega)) => GorensteinVerdict::positive(a, omega, method),
        None => GorensteinVerdict::negative(Failure::NoInteriorPoint, method),
    })
}

/// The counting inequality for moving pipe ends away from the pair `(i, j)`:
///
/// `Σ_{l≠i,j} [c(R_l+2) - 2] - [c(R_i+2) - 2] - [c(R_j+2) - 2] + 2N > 0`
///
/// with `c = k / a`, evaluated exactly over the rationals.
pub fn deficit_inequality(
    n: usize,
    r_shift: &[i64],
    a: i64,
    k: i64,
    i: usize,
    j: usize,
    n_ij: i64,
) -> Result<bool> {
    if a == 0 {
        return Err(Error::ZeroGeneratorDegree);
    }
    if r_shift.len() != n {
        return Err(Error::RLengthMismatch {
            expected: n,
            found: r_shift.len(),
        });
    }
    for leaf in [i, j] {
        if leaf < 1 || leaf > n {
            return Err(Error::LeafOutOfRange { leaf, n });
        }
    }
    let c = Ratio::new(k, a);
    let term = |l: usize| c * Ratio::from_integer(r_shift[l - 1] + 2) - 2;
    let others: Ratio<i64> = (1..=n).filter(|&l| l != i && l != j).map(term).sum();
    let expr = others - term(i) - term(j) + 2 * n_ij;
    Ok(expr > Ratio::from_integer(0))
}

/// The a-invariant `-a` when the algebra is Gorenstein.
pub fn a_invariant(tree: &Tree, r: &WeightVector) -> Result<Option<i64>> {
    Ok(classify_gorenstein(tree, r)?.a_invariant())
}
