//! # curvlab
//!
//! A numerical laboratory for curvature operators of Riemannian metrics.
//!
//! The crate assembles the curvature operator of catalog metrics (round
//! spheres, flat tori, Berger spheres, the Heisenberg nilmanifold,
//! Fubini-Study `CP^2`, products and rescalings), computes and certifies
//! eigenvalue conditions on one-parameter metric families, verifies the
//! Weitzenboeck curvature-term bound, the operator/Frobenius norm sandwich
//! and Weyl's perturbation inequality by direct computation, and recovers
//! Euler characteristics through Chern-Gauss-Bonnet quadrature.
//!
//! Start with the runnable examples (`cargo run --example spectrum`, ...);
//! each one exercises a major capability. The `curvlab` binary drives the
//! same library from declarative TOML run configurations and emits
//! machine-readable reports.

pub mod anco;
pub mod catalog;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod exterior;
pub mod gauss_bonnet;
pub mod linalg;
pub mod operator;
pub mod quadrature;
pub mod weitzenbock;

pub use catalog::{catalog_get, ManifoldSpec};
pub use curvature::{curvature_at, verify_sign_convention, CurvaturePoint};
pub use error::{Error, Result};
pub use operator::{assemble_curv_op, partial_eig_sum, CurvOpMatrix};
