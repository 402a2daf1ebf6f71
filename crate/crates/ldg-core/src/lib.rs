//! 1D local discontinuous Galerkin (LDG) discretizations of nonlinear
//! convection-diffusion systems
//!
//!   u_t + f(u)_x = (A(u) u_x)_x + s(x, t)
//!
//! with generalized, θ-weighted numerical fluxes. The crate provides the modal
//! Legendre infrastructure (mesh, basis, fields), the semi-discrete LDG
//! operator with characteristic upwind-biased convective fluxes and
//! generalized alternating diffusive fluxes, SSP-RK3 time stepping, the six
//! built-in benchmark problems, and a verification layer (generalized
//! Gauss-Radau projections with their circulant solvers, skew-symmetry and
//! energy identities) exercised by the test suite.
//!
//! The crate is `no_std` (with `alloc`); all transcendentals go through
//! `libm`. IO, configuration and experiment drivers live in the companion CLI
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod basis;
mod dense;
pub mod field;
pub mod fluxes;
pub mod ldg;
pub mod mesh;
pub mod problems;
pub mod projections;
pub mod smalleig;
pub mod timestep;

pub use basis::QuadRule;
pub use field::{DGField, TracePair};
pub use mesh::Partition1D;
