//! Topological invariants and integrable-system checks for hyperpolygon
//! spaces.
//!
//! The crate is organized bottom-up:
//!
//! - [`exactalg`]: exact rationals, polynomials, truncated series, matrices.
//! - [`combinat`]: partitions, size tuples, multinomials, Gaussian binomials.
//! - [`betti`]: the Poincaré-polynomial recursion and its rank-2 closed form.
//! - [`quiver`]: points of the cotangent representation space, moment maps,
//!   the polygon edge map and minimal nilpotent orbits.
//! - [`hitchin`]: Higgs fields, the Hitchin map, Poisson brackets, Jacobian rank.
//! - [`spectral`]: spectral characteristic polynomials, order bounds, local models.
//! - [`cli`]: the command-line front end.

pub mod betti;
pub mod cli;
pub mod combinat;
pub mod error;
pub mod exactalg;
pub mod hitchin;
pub mod quiver;
pub mod spectral;

pub use error::{Error, Result};
