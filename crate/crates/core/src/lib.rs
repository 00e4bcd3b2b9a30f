//! Period polynomials built from derivatives of completed L-functions of
//! level-1 modular forms.
//!
//! The crate is layered bottom-up:
//!
//! * [`specfun`]: ζ, ζ′/ζ jets, polygamma differences, Bernoulli and harmonic
//!   numbers, exponential log-moments.
//! * [`forms`]: Eisenstein series and Hecke eigencuspforms as q-expansions.
//! * [`lvalues`]: Λ^(m)(s) by the Mellin integral and, for E_k, in closed form.
//! * [`periodpoly`]: full, odd and tilde-odd period polynomials, the slash
//!   action and the self-inversive split.
//! * [`roots`]: Aberth iteration and root-geometry classification.
//! * [`certify`]: Eneström–Kakeya and monotonicity certificates.
//! * [`cocycle`]: η-logarithm cocycle, cup powers and path-integral checks of
//!   the cohomological value formulas.
//! * [`pipeline`]: the end-to-end verification used by the CLI.

pub mod certify;
pub mod cocycle;
pub mod error;
pub mod forms;
pub mod group;
pub mod jet;
pub mod lvalues;
pub mod num;
pub mod periodpoly;
pub mod pipeline;
pub mod poly;
pub mod quad;
pub mod roots;
pub mod specfun;

pub use error::{Error, Result};
pub use num::{BigComplex, Estimate};
