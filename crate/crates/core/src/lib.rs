//! Frames for the quantum detection problem.
//!
//! A family of vectors `{x_k}` in `R^n` or `C^n` is *injective* when the
//! quadratic measurements `a_k = <T x_k, x_k>` determine every Hermitian
//! operator `T`: if all measurements vanish, `T` must be zero. This crate
//! certifies injectivity, constructs injective families, and solves (or
//! best-approximates) the inverse problem of recovering `T` from a
//! measurement record.
//!
//! The workhorse is a real embedding `x -> x~` that linearizes the quadratic
//! form: `<T x, x> = <T~, x~>` for a companion embedding of operators. Rank
//! questions about the embedded family then decide injectivity and
//! solvability. Four embedding variants cover the real/complex and
//! general/trace-one cases; see [`tilde`].
//!
//! Module map:
//! - [`field`], [`frame`], [`operator`]: scalar fields, frames, Hermitian
//!   operators, measurement records, and the quadratic form.
//! - [`tilde`]: the four embeddings and the operator/dual correspondence.
//! - [`frame_ops`]: frame operator, frame/Bessel/Riesz bounds, canonical
//!   Parseval transform.
//! - [`injectivity`]: rank certification, counterexample witnesses, the
//!   randomized eigenbasis probe.
//! - [`construct`]: generators for every injective family built here, plus
//!   random frames.
//! - [`estimate`]: solvability, exact/least-squares/subset estimation, state
//!   validation, measurement simulation.
//! - [`separation`]: truncated infinite-dimensional layer (delta-separation,
//!   biorthogonal duals, l1 estimation, Bessel caps).
//! - [`experiments`]: seeded empirical reproductions of the density, openness
//!   and perturbation statements.

pub mod construct;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod field;
pub mod frame;
pub mod frame_ops;
pub mod injectivity;
pub mod operator;
pub mod separation;
pub mod tilde;

pub(crate) mod linalg;
pub(crate) mod sampling;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use frame::{Frame, FrameVector, MeasurementRecord, SpanCheck};
pub use operator::{quadratic_form, SelfAdjointOperator};
pub use tilde::{TildeMatrix, TildeVariant, TildeVector};
