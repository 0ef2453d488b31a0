//! Numerical library for a family of minimal Lagrangian Klein bottles in the
//! complex projective plane: closed-form construction from integer data,
//! verification of the defining geometric properties, Laplace spectra with
//! index counts, nodal domain counts, and closed-form benchmark surfaces.
//!
//! Layout:
//! - [`elliptic`]: Jacobi elliptic functions and complete integrals.
//! - [`family`]: admissible integer pairs and derived analytic constants.
//! - [`geometry`]: the unit-sphere lift, its invariants, and the special
//!   unitary test functions.
//! - [`spectral`]: Laplace spectra, index reports, closed-form
//!   eigenfunctions, the first-eigenvalue bound, areas, benchmarks.
//! - [`nodal`]: nodal domain counting on the surface.
//! - [`quad`], [`linalg`], [`grid`], [`json`]: quadrature, eigensolvers,
//!   finite-difference helpers, and the deterministic report writer.

pub mod elliptic;
pub mod error;
pub mod family;
pub mod geometry;
pub mod grid;
pub mod json;
pub mod linalg;
pub mod nodal;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
