//! Harmonic maps of the sphere into CP^N built from SU(2) coherent states.
//!
//! The crate constructs Veronese-type solutions of the CP^N sigma model with
//! exact Wirtinger derivatives, forms their su(N+1) immersions and spectral
//! wavefunctions, and evaluates the curvature and topological invariants of
//! the resulting surfaces.

pub mod cli;
pub mod error;
pub mod immersion;
pub mod io;
pub mod polyring;
pub mod rational;
pub mod geometry;
pub mod sigma;
pub mod spectral;
pub mod su2rep;

pub use error::{Error, Result};
pub use polyring::MPoly;
pub use rational::{FieldVec, RationalMat, RationalScalar};
pub use sigma::{ladder, project, veronese_field, ProjectorSeq, Provenance};
