//! Ground-state energies of few-electron atoms and the H2 potential curve by
//! interpolating between the one-dimensional and infinite-dimensional limits.
//!
//! The building blocks are
//!
//! * [`specfun`]: log-Gamma, the universal first-order coefficient `f(D)` and
//!   the Gauss hypergeometric family `F(1/2, (3-D)/2; D/2; y)`;
//! * [`delta1d`]: the `D = 1` delta-function models (variational atoms and the
//!   closed-form H2 energy);
//! * [`optim`]: a multi-start Nelder-Mead minimizer;
//! * [`large_d`]: the `D -> infinity` effective Hamiltonians and their minima;
//! * [`pertcoef`]: first-order `1/Z` coefficients at `D = 1, 3, infinity`;
//! * [`interp`]: the interpolation formulas, unit conversion and the H2 curve.
//!
//! All energies are reduced energies in scaled units, `E_D = (Z/beta)^2 eps_D`
//! with `beta = (D-1)/2`, unless a function says otherwise.

pub mod delta1d;
pub mod error;
mod jet;
pub mod interp;
pub mod large_d;
pub mod optim;
pub mod pertcoef;
pub mod specfun;

pub use delta1d::{AtomSpec, Element, Orbital};
pub use error::{Error, Result};
pub use pertcoef::PerturbCoeffs;
