//! Complementarity solvers for velocity-level rigid-body contact.
//!
//! The crate is organized around the pipeline a contact solver sits in:
//!
//! - [`linalg`]: CSR matrices, block-diagonal inverse mass, the `D - L - U`
//!   split, power-iteration norms, and MatrixMarket I/O.
//! - [`lcp`]: dense problems `LCP(q, A)`, the residual metric, projected
//!   Gauss-Seidel, the modulus-based splitting family with its presets,
//!   and an exhaustive enumeration oracle for small instances.
//! - [`contact`]: the factored form `A = J M⁻¹ Jᵀ` kept implicit, with
//!   matrix-free accelerated sweeps whose cost is linear in `nnz(J)`,
//!   the boxed (bounded-impulse) variant, and contraction certificates.
//! - [`sim`]: minimal 2D circle dynamics that generate realistic contact
//!   problem sequences with warm starting.
//! - [`bench`](mod@bench): scenario builders and experiment runners with
//!   CSV/SVG reporting.
//!
//! Start with the crate examples (`cargo run --example dense_lcp`, then
//! `sparse_contact`) or the `bench` binary for end-to-end runs.

// `!(v > 0.0)` rejects NaN along with nonpositive values; `v <= 0.0`
// would let NaN through the validation paths.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod contact;
pub mod lcp;
pub mod linalg;
pub mod sim;
