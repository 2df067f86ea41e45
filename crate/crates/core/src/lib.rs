//! Exact-arithmetic decision procedures for permutational similarity and
//! equivalence of matrices, graph and bipartite-graph isomorphism, and
//! subgraph isomorphism, via linear feasibility over the polytopes
//! Phi_{m,n} and Theta_{m,n} that relax the convex hull Psi_{m,n} of
//! Kronecker products of permutation matrices.
//!
//! The relaxation is a necessary condition only: an infeasible system
//! refutes the relation, a feasible one is inconclusive and can be
//! escalated to exhaustive search at small sizes. Everything is computed
//! over arbitrary-precision rationals, so every answer is exact.

pub mod ratmat;
pub mod polytope;
pub mod lp;
pub mod iso;
pub mod oracle;

pub use ratmat::{Permutation, Rat, RatMatrix, RatVec};
