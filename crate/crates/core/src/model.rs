//! Shared per-run context: geometry, material samples, radial basis matrices
//! and boundary-element operators, built once and reused by every solve.

use nalgebra::DMatrix;

use crate::bem::BemSystem;
use crate::error::Result;
use crate::geometry::{
    discretize_boundary, generate_collocation, BoundaryMesh, CollocationSet, SectionShape,
};
use crate::material::{sample_field, MaterialField, MaterialModel, PointMaterial};
use crate::rbf::{self, InterpolationMatrix, RbfConfig};

/// Discretization and numerical options for a model.
#[derive(Debug, Clone)]
pub struct ModelOptions {
    /// Number of constant boundary elements.
    pub n_elements: usize,
    /// Requested number of interior collocation points (matched within 10%).
    pub m_target: usize,
    /// Boundary clearance of the collocation grid; defaults to one element
    /// length.
    pub inset: Option<f64>,
    pub rbf: RbfConfig,
    /// Gauss-Legendre order per element for kernel quadrature.
    pub quad_order: usize,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            n_elements: 300,
            m_target: 450,
            inset: None,
            rbf: RbfConfig::default(),
            quad_order: 8,
        }
    }
}

/// Immutable solver context for one section, material and discretization.
pub struct TorsionModel {
    pub shape: SectionShape,
    pub mesh: BoundaryMesh,
    pub colloc: CollocationSet,
    /// Factorized multiquadric collocation matrix over the interior points.
    pub interp: InterpolationMatrix,
    /// Plain basis value matrix at the collocation points (no
    /// regularization); the warping Laplacian rows.
    pub basis_val: DMatrix<f64>,
    pub basis_dx: DMatrix<f64>,
    pub basis_dy: DMatrix<f64>,
    pub bem: BemSystem,
    pub material: MaterialModel,
    /// Material samples at the collocation points.
    pub field: MaterialField,
    /// Material samples at the boundary element midpoints.
    pub boundary_material: Vec<PointMaterial>,
    pub options: ModelOptions,
}

impl TorsionModel {
    pub fn new(
        shape: SectionShape,
        material: MaterialModel,
        options: ModelOptions,
    ) -> Result<Self> {
        shape.validate()?;
        let mesh = discretize_boundary(&shape, options.n_elements)?;
        let inset = options.inset.unwrap_or(mesh.mean_element_length);
        let colloc = generate_collocation(&shape, options.m_target, inset)?;
        Self::with_discretization(shape, material, mesh, colloc, options)
    }

    /// Build from an externally supplied mesh and collocation set (custom
    /// grids, point reorderings).
    pub fn with_discretization(
        shape: SectionShape,
        material: MaterialModel,
        mesh: BoundaryMesh,
        colloc: CollocationSet,
        options: ModelOptions,
    ) -> Result<Self> {
        shape.validate()?;
        material.validate()?;
        let interp = rbf::build_interpolation(&colloc.points, &options.rbf)?;
        let c = options.rbf.c;
        let basis_val = rbf::basis_matrix(&colloc.points, &colloc.points, c);
        let (basis_dx, basis_dy) =
            rbf::basis_gradient_matrices(&colloc.points, &colloc.points, c);
        let bem = BemSystem::build(&mesh, &colloc, c, options.quad_order)?;
        let field = sample_field(&material, &colloc.points)?;
        let boundary_material = mesh
            .elements
            .iter()
            .map(|el| material.at(&el.midpoint))
            .collect::<Result<Vec<_>>>()?;
        Ok(TorsionModel {
            shape,
            mesh,
            colloc,
            interp,
            basis_val,
            basis_dx,
            basis_dy,
            bem,
            material,
            field,
            boundary_material,
            options,
        })
    }

    pub fn n(&self) -> usize {
        self.mesh.len()
    }

    pub fn m(&self) -> usize {
        self.colloc.len()
    }

    pub fn c(&self) -> f64 {
        self.options.rbf.c
    }
}
