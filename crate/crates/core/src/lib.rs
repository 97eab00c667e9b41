//! Numerical laboratory for the generalised Ricci-Hessian equation
//! `∇²f = −f·Ric`.
//!
//! The crate builds metrics and candidate solutions on coordinate charts,
//! differentiates them with truncated Taylor jets, and evaluates the equation
//! together with the identities, reductions and rigidity statements that
//! follow from it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod geometry;
pub mod homogeneous;
pub mod jet;
pub mod ode;
pub mod runner;
pub mod sampling;
pub mod verifier;
pub mod warped;

pub use error::{Error, Result};
pub use jet::Jet;
