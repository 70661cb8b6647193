//! Toric period integrals of translates of the minimal vector.

pub mod cross;
pub mod integral;
pub mod newform;
pub mod phase;
pub mod solver;
pub mod spec;
pub mod torus;

pub use cross::{bar_symmetry_check, cross_term_structure, BarSymmetryReport, CrossTermReport};
pub use integral::{period_integral, Certificate, IntegralOptions, IntegralResult, SupportEntry};
pub use newform::{newform_period, pair_matrix, NewformBranch, NewformReport, PairMatrix};
pub use phase::{phase_factor, support_of_integral, PhaseReport, SupportReport};
pub use solver::{exact_roots, solve_test_vector_equation, solve_with, SolverOutput, TwistInfo};
pub use spec::{unit_residues, EmbeddingMode, EmbeddingSpec, TestVectorSpec};
pub use torus::{torus_points, torus_representatives, TorusPoint};
