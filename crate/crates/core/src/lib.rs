//! Harmonic analysis on Grassmannians over real, complex, p-adic and quantum
//! fields, with the limit procedures that connect them.
//!
//! The crate is organised by side:
//!
//! * [`arith`] holds the three scalar domains (exact rationals, rational
//!   functions in `q`, high-precision reals) and the q-series kernels.
//! * [`partitions`] indexes everything: orbits, module types, polynomials.
//! * [`oracle`] counts submodules and Grassmannian orbits by brute force
//!   over finite rings and serves as ground truth.
//! * [`nonarch`] implements the p-adic measures, cellular basis, idempotents
//!   and convolution of the spherical Hecke algebra at finite level.
//! * [`interp`] builds shifted Macdonald polynomials and generalized
//!   binomial coefficients by exact interpolation.
//! * [`qgrass`] implements the q-Selberg measure and little q-Jacobi
//!   polynomials.
//! * [`arch`] implements the Selberg measure and generalized Jacobi
//!   polynomials for one and two variables.
//! * [`limits`] drives the `q -> 0` and `q -> 1` limits and reports their
//!   convergence.
//! * [`cli`] turns all of the above into tables, verification suites and
//!   the `grassq` command line.

pub mod arch;
pub mod arith;
pub mod cli;
pub mod error;
pub mod interp;
pub mod limits;
pub mod nonarch;
pub mod oracle;
pub mod partitions;
#[cfg(test)]
mod properties;
pub mod qgrass;
pub mod sympoly;

pub use error::{Error, Result};
pub use partitions::Partition;
