//! Exact combinatorial bounds on symplectic capacities of toric manifolds.
//!
//! Polytopes are given by facet inequalities `⟨x, u_k⟩ ≥ λ_k`; fans by their
//! primitive ray generators and maximal cones. Every value is an exact
//! rational number.

pub mod lattice;
pub mod lp;
pub mod polytope;
pub mod fan;
pub mod capacity;
pub mod constructions;
pub mod packing;
