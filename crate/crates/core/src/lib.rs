//! Fundamental solutions of `Δ² + k²` on `R^N`, convolution and spectral
//! solvers for linear and semilinear biharmonic problems, and an exact
//! calculus over Lebesgue exponents that replays the regularity bootstrap.
//!
//! Module map:
//!
//! * [`exponents`]: exact rational exponents, Young/Sobolev admissibility
//!   tables and the bootstrap chain.
//! * [`specfun`]: `K_ν(z)` for complex `z`, `Γ(x)`, unit-sphere measure.
//! * [`greens`]: the kernels `g^(N)_δ` and `G^(N)_k`, their derivatives,
//!   asymptotics and `L^p` classification.
//! * [`operators`]: `T_k`, `S^i_k`, `S^Δ_k` by radial quadrature and by
//!   direct grid convolution.
//! * [`spectral`]: periodic-box Fourier solvers used as an independent oracle.
//! * [`nonlinear`]: hypothesis checks, a relaxed Picard probe and a
//!   regularity report.

pub mod error;
pub mod exponents;
pub mod grid;
pub mod greens;
pub mod nonlinear;
pub mod operators;
pub mod quadrature;
pub mod radial;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
