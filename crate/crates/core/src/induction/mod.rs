//! Supercuspidal data attached to a character of a quadratic extension.

pub mod data;
pub mod lattice;
pub mod theta_tilde;
pub mod whittaker;

pub use data::{CaseTag, SupercuspidalData};
pub use lattice::OrderLattice;
pub use theta_tilde::JDecomposition;
pub use whittaker::WhittakerValue;
