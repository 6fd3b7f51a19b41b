//! Global optimization of jointly constrained semidefinite bilinear programs.
//!
//! The solver minimizes `tr((X ⊗ Y) Q) + tr(A X) + tr(B Y)` over pairs of
//! Hermitian matrices subject to joint semidefinite constraints, by
//! branch-and-bound over convex-envelope SDP relaxations. Every run yields a
//! certified interval `[lower, upper]` enclosing the global optimum.
//!
//! The crate is organized as:
//! - [`operator`]: Hermitian linear algebra (operator bases, trace norm, SVD).
//! - [`sdp`]: a dense primal-dual interior-point solver for the subproblems.
//! - [`bnb`]: the branch-and-bound solver itself (Γ vectorization, bounding
//!   rectangle, envelope bounds, partition loop).
//! - [`seesaw`]: the alternating-SDP heuristic, used as a baseline and as an
//!   incumbent generator.
//! - [`dobrushin`]: energy-constrained Dobrushin curves of quantum channels,
//!   compiled down to bilinear programs.

pub mod bnb;
pub mod dobrushin;
pub mod error;
pub mod operator;
pub mod sdp;
pub mod seesaw;
pub mod serialize;

pub use error::CoreError;
pub use operator::{flip_operator, hermitian_basis, real_svd, trace_norm};
pub use operator::{HermitianBasis, HermitianOperator, RealSvd};
