//! Spectral laboratory for magnetic Laplacians on conformally cusp manifolds.

pub mod error;
pub mod model;
pub mod topology;
pub mod transverse;
pub mod radial;
pub mod analysis;
pub mod config;
pub mod report;
