//! Exact lattice and K-theory computations for exceptional pairs `(V, O)` on
//! del Pezzo surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`picard`] models `Pic(X_k)` in a blowdown basis `(s, f, e_1, ...)`.
//! * [`e8`] is the Bourbaki-coordinate model of the `E8` root lattice with
//!   finite, affine and `D5` reductions.
//! * [`mutation`] tracks K-classes of exceptional objects, the `M`/`R`/`S`
//!   transforms and the certified degree-4 construction.
//! * [`quadratic`] handles the orders `O_k` used for surfaces of degree 5..9.
//! * [`oracle`] holds brute-force verifiers for the finite checks.
//! * [`report`] is the machine-readable report format shared with the CLI.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod e8;
pub mod error;
pub mod mutation;
pub mod oracle;
pub mod picard;
pub mod quadratic;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use rational::Rational;
