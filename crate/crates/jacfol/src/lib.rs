//! Exact-arithmetic engine for the jacobian curve of two plane singular
//! foliations.
//!
//! Given two germs of singular foliations in (C^2,0), defined by 1-forms
//! `omega = A dx + B dy` and `eta = P dx + Q dy`, their jacobian curve is the
//! tangency locus `AQ - BP = 0`. This crate computes the per-divisor
//! Camacho-Sad data of both foliations on the dual graph of the common
//! reduction of singularities, classifies divisors as collinear or
//! non-collinear, assembles the rational functions `M_E(z)` whose zeros locate
//! jacobian mass, predicts per-point multiplicities of the jacobian curve,
//! verifies the predictions against exact initial-form factorizations, and
//! produces the induced decomposition of the jacobian curve into packets.
//!
//! All arithmetic is exact: scalars live in Q or in a cyclotomic extension
//! Q(zeta_n). No floating point is used anywhere.

pub mod scalar;
pub mod upoly;
pub mod series;
pub mod poly2;
pub mod form;
pub mod branch;
pub mod graph;
pub mod foliation;
pub mod delta;
pub mod jac;
pub mod apps;
pub mod input;
pub mod report;

mod error;

pub use error::{Error, Result};
pub use scalar::Scalar;
