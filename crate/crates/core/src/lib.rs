//! Semigroups of edge weightings on planar trivalent trees.
//!
//! For a tree `T` with `n` leaves and a weight vector `r`, `S_T(r)` is the
//! graded semigroup whose degree-`k` piece consists of the integer edge
//! weightings satisfying the triangle and parity conditions at every trinode
//! with leaf weights `k·r`. This crate enumerates those pieces exactly,
//! translates weightings to and from chord diagrams (the piping model), and
//! decides whether `ℂ[S_T(r)]` is Gorenstein both by a closed-form
//! classification and by a brute-force interior-point oracle.

pub mod error;
pub mod gorenstein;
pub mod json;
pub mod piping;
pub mod polytope;
pub mod survey;
pub mod trees;
pub mod weightings;

pub use error::{Error, Result};
pub use gorenstein::{
    a_invariant, classify_gorenstein, deficit_inequality, expected_nij, find_generator_degree,
    gorenstein_oracle, ExpectedNij, Failure, GeneratorDegree, GorensteinVerdict, Method,
};
pub use piping::{graph_s, n_ij, tree_t, trinode_s, trinode_t, PipingGraph, TrinodeCoords};
pub use polytope::{
    classify_r, enumerate_interior, enumerate_points, fiber_dimension, hilbert_function,
    unique_interior_point, FiberSpec, RClass,
};
pub use trees::{build_tree, enumerate_trees, leaf_sides, Tree, TreeError};
pub use weightings::{
    add, degree_of, delta2, divides, is_boundary, is_interior, is_member, subtract, two_tree,
    WeightVector, Weighting,
};
