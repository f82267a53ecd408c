//! Minimal `P_m` interior-penalty nonconforming finite elements for
//! `(−Δ)^m u = f` on simplicial meshes in one to three dimensions.
//!
//! The pipeline is mesh → normal frames → local elements → global DOF map →
//! assembly → conjugate gradients → error norms; [`study`] strings it
//! together for convergence tables.

// `!(x <= tol)` style checks are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assemble;
pub mod element;
pub mod error;
pub mod field;
pub mod linalg;
pub mod mesh;
pub mod poly;
pub mod solutions;
pub mod space;
pub mod study;
pub mod verify;

pub use assemble::{
    assemble, energy_norm, norm_breakdown, penalty_plan, AssembledSystem, NormBreakdown,
    PenaltyPlan,
};
pub use element::{build_element, enumerate_dofs, CellGeometry, DofSpec, ElementBasis};
pub use error::{Error, Result};
pub use field::{Field, FnField};
pub use linalg::{cg_solve, dense_solve, SolveReport, SparseSym};
pub use mesh::{build_box_mesh, build_lshape_mesh, Mesh, MeshFrames, SubSimplexKey};
pub use poly::{MultiIndex, Poly};
pub use solutions::ExactSolution;
pub use space::{DiscreteFunction, Discretization, GlobalDofMap};
pub use study::{emit_table, run_study, StudyConfig, StudyRow};
