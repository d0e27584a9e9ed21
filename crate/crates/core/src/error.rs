use thiserror::Error;

/// Errors produced by mesh generation, operator assembly and the nonlinear solver.
#[derive(Debug, Error)]
pub enum TorsionError {
    #[error("invalid section: {0}")]
    InvalidShape(String),

    #[error("degenerate boundary edge {index}: endpoints ({x0}, {y0}) and ({x1}, {y1}) coincide")]
    DegenerateEdge {
        index: usize,
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
    },

    #[error("inset {inset} leaves no room for collocation points inside the section")]
    InsetTooLarge { inset: f64 },

    #[error(
        "collocation grid could not match the requested point count {target} \
         (best achieved {achieved}); adjust m_target or the inset"
    )]
    CollocationCount { target: usize, achieved: usize },

    #[error("point ({x}, {y}) is not strictly inside the section")]
    PointOutsideDomain { x: f64, y: f64 },

    #[error(
        "interpolation matrix is ill-conditioned (estimate {cond:.3e} exceeds cap {cap:.3e}) \
         for shape parameter c = {c}; rescale the section or reduce c"
    )]
    IllConditioned { cond: f64, cap: f64, c: f64 },

    #[error("{system} system is singular or rank-deficient (condition estimate {cond:.3e})")]
    SingularSystem { system: &'static str, cond: f64 },

    #[error("material parameter out of range: {0}")]
    MaterialOutOfRange(String),

    #[error("coordinate y = {y} lies outside the graded strip [{lo}, {hi}]")]
    OutsideGradedStrip { y: f64, lo: f64, hi: f64 },

    #[error("effective modulus is non-positive ({value:.3e}) at collocation point {index}")]
    NonPositiveModulus { index: usize, value: f64 },

    #[error("effective shear modulus is non-positive at collocation point {index}")]
    NonPositiveShear { index: usize },

    #[error("strain field vanishes; first-yield twist is undefined")]
    DegenerateStrainField,

    #[error(
        "Newton iteration did not converge after {iterations} iterations \
         (residual history: {history:?})"
    )]
    NonConvergence {
        iterations: usize,
        history: Vec<f64>,
    },

    #[error("twist schedule must be strictly increasing and start below the first-yield twist")]
    InvalidSchedule,

    #[error("analytic reference values are only available for rectangular and equilateral triangular sections")]
    UnsupportedReferenceShape,
}

pub type Result<T> = std::result::Result<T, TorsionError>;
