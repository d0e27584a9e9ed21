//! Elastic-plastic Saint-Venant torsion of homogeneous and functionally
//! graded bars with arbitrary cross-section.
//!
//! The torsion problem of a non-homogeneous isotropic bar is solved with
//! constant boundary elements coupled to a multiquadric expansion of the
//! fictitious source (analog equation), and the elastic-plastic response is
//! obtained from deformation-theory plasticity: the secant-modulus field is
//! expanded in the same multiquadrics and its coefficients are the unknowns
//! of one nonlinear algebraic system, solved by damped Newton iteration.

pub mod bem;
pub mod error;
pub mod geometry;
pub mod material;
pub mod model;
pub mod plasticity;
pub mod postprocess;
pub mod rbf;

pub use error::{Result, TorsionError};
pub use geometry::{
    discretize_boundary, generate_collocation, point_in_domain, BoundaryMesh, CollocationSet,
    SectionShape,
};
pub use material::{
    effective_poisson, effective_shear, sample_field, tto_point, uniaxial_stress, BilinearCurve,
    ElasticPhase, MaterialField, MaterialModel, MetalPhase, TtoFgm,
};
pub use model::{ModelOptions, TorsionModel};
pub use plasticity::{
    FirstYield, JacobianMode, NewtonOptions, PlasticState, SweepResult, SweepStep, ThetaSchedule,
};
pub use postprocess::{
    analytic_references, derive_fields, direct_moment, plastic_region, torsional_moment,
    AnalyticReferences, FieldRow, FieldTable, PlasticRegion,
};
