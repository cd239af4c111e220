//! Random two-layer ReLU networks and the geometry of class separation.
//!
//! The crate samples random ReLU layers, estimates the complexity measures
//! that govern when such layers make two classes linearly separable, and
//! certifies separation with explicit hyperplanes.

pub mod complexity;
pub mod distance;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod layers;
pub mod monte_carlo;
pub mod randomized;
pub mod rng;
pub mod scenarios;
pub mod separability;
pub mod separator;

pub use error::{Error, Result};
pub use geometry::{PointSet, Vector};
