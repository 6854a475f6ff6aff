//! Ontological models of quantum systems and measurement devices.

pub mod analysis;
pub mod coloring;
pub mod device;
pub mod error;
pub mod models;
pub mod ontology;
pub mod quantum;
pub mod rng;

pub use error::{Error, Result};
