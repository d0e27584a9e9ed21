//! Run configuration: a sectioned TOML file mapped onto the solver types.
//!
//! All physical quantities are in the user's consistent unit system; no
//! conversion is performed. The multiquadric shape parameter is a length in
//! those units (the default 0.1 suits centimeter-scale sections).

use serde::Deserialize;
use torsolve_core::rbf::RbfConfig;
use torsolve_core::{
    BilinearCurve, ElasticPhase, JacobianMode, MaterialModel, MetalPhase, ModelOptions,
    NewtonOptions, SectionShape, ThetaSchedule, TtoFgm,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub material: MaterialConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub output: OutputConfig,
    pub convergence: Option<ConvergenceConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub shape: String,
    pub b: Option<f64>,
    pub h: Option<f64>,
    pub radius: Option<f64>,
    pub a: Option<f64>,
    /// Polygon vertices as [x, y] pairs, counterclockwise.
    pub vertices: Option<Vec<[f64; 2]>>,
    pub n_elements: usize,
    pub m_target: usize,
    /// Collocation boundary clearance; defaults to one element length.
    pub inset: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub mode: String,
    // homogeneous
    pub e: Option<f64>,
    pub nu: Option<f64>,
    pub sigma_y: Option<f64>,
    /// Hardening ratio E_h / E.
    pub alpha: Option<f64>,
    // fgm_tto
    pub e_c: Option<f64>,
    pub nu_c: Option<f64>,
    pub e_m: Option<f64>,
    pub nu_m: Option<f64>,
    pub sigma_ym: Option<f64>,
    pub e_h_m: Option<f64>,
    pub k: Option<f64>,
    /// Stress-transfer parameter: a number or the literal "inf".
    pub q: Option<QParam>,
    /// Height of the graded strip; defaults to the section's y extent.
    pub grading_height: Option<f64>,
}

/// Stress-transfer parameter that accepts numbers or "inf".
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum QParam {
    Number(f64),
    Literal(String2Inf),
}

#[derive(Debug, Clone, Copy)]
pub struct String2Inf;

impl<'de> Deserialize<'de> for String2Inf {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            Ok(String2Inf)
        } else {
            Err(serde::de::Error::custom(format!(
                "q must be a non-negative number or \"inf\", got {s:?}"
            )))
        }
    }
}

impl QParam {
    pub fn value(&self) -> f64 {
        match self {
            QParam::Number(v) => *v,
            QParam::Literal(_) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    pub jacobian: String,
    pub hardening_floor: f64,
    pub regularization: f64,
    pub condition_cap: f64,
    pub quad_order: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            c: 0.1,
            tol: 1e-6,
            max_iter: 50,
            max_halvings: 20,
            jacobian: "fd".into(),
            hardening_floor: 0.0,
            regularization: 0.0,
            condition_cap: 1e12,
            quad_order: 8,
        }
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleConfig {
    /// Largest twist as a multiple of the first-yield twist.
    pub theta_max_ratio: Option<f64>,
    /// Number of sweep steps for the generated schedule.
    pub steps: Option<usize>,
    /// Explicit ratio list; overrides theta_max_ratio/steps.
    pub ratios: Option<Vec<f64>>,
    /// Explicit absolute twist list; overrides everything else.
    pub thetas: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: String,
    /// Extra field-evaluation grid size appended to fields.csv (0 = none).
    pub field_grid: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: "out".into(),
            field_grid: 0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    /// Discretization grid as [n_elements, m_target] pairs.
    pub grid: Vec<[usize; 2]>,
    pub theta_ratio: f64,
}

/// A configuration error message destined for exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn require(v: Option<f64>, key: &str, ctx: &str) -> Result<f64, ConfigError> {
    v.ok_or_else(|| ConfigError(format!("{ctx} requires `{key}`")))
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn shape(&self) -> Result<SectionShape, ConfigError> {
        let g = &self.geometry;
        let shape = match g.shape.as_str() {
            "rectangle" => SectionShape::rectangle(
                require(g.b, "b", "rectangle")?,
                require(g.h, "h", "rectangle")?,
            ),
            "equilateral_triangle" => {
                SectionShape::equilateral_triangle(require(g.b, "b", "equilateral_triangle")?)
            }
            "circle" => SectionShape::circle(require(g.radius, "radius", "circle")?),
            "ellipse" => SectionShape::ellipse(
                require(g.a, "a", "ellipse")?,
                require(g.b, "b", "ellipse")?,
            ),
            "polygon" => SectionShape::polygon(
                g.vertices
                    .clone()
                    .ok_or_else(|| ConfigError("polygon requires `vertices`".into()))?,
            ),
            other => {
                return Err(ConfigError(format!(
                    "unknown shape {other:?}; expected rectangle, equilateral_triangle, \
                     circle, ellipse or polygon"
                )))
            }
        };
        shape
            .validate()
            .map_err(|e| ConfigError(e.to_string()))?;
        Ok(shape)
    }

    pub fn material(&self, shape: &SectionShape) -> Result<MaterialModel, ConfigError> {
        let m = &self.material;
        match m.mode.as_str() {
            "homogeneous" => {
                let e = require(m.e, "e", "homogeneous material")?;
                let alpha = m.alpha.unwrap_or(0.0);
                let curve = BilinearCurve::new(
                    e,
                    require(m.nu, "nu", "homogeneous material")?,
                    require(m.sigma_y, "sigma_y", "homogeneous material")?,
                    alpha * e,
                )
                .map_err(|e| ConfigError(e.to_string()))?;
                Ok(MaterialModel::Homogeneous(curve))
            }
            "fgm_tto" => {
                let (ylo, yhi) = shape.y_extent();
                let h = m
                    .grading_height
                    .unwrap_or_else(|| 2.0 * ylo.abs().max(yhi.abs()));
                let fgm = TtoFgm {
                    ceramic: ElasticPhase {
                        e: require(m.e_c, "e_c", "fgm_tto material")?,
                        nu: require(m.nu_c, "nu_c", "fgm_tto material")?,
                    },
                    metal: MetalPhase {
                        e: require(m.e_m, "e_m", "fgm_tto material")?,
                        nu: require(m.nu_m, "nu_m", "fgm_tto material")?,
                        sigma_y: require(m.sigma_ym, "sigma_ym", "fgm_tto material")?,
                        e_h: require(m.e_h_m, "e_h_m", "fgm_tto material")?,
                    },
                    k: require(m.k, "k", "fgm_tto material")?,
                    q: m.q
                        .ok_or_else(|| ConfigError("fgm_tto material requires `q`".into()))?
                        .value(),
                    h,
                };
                fgm.validate().map_err(|e| ConfigError(e.to_string()))?;
                Ok(MaterialModel::FgmTto(fgm))
            }
            other => Err(ConfigError(format!(
                "unknown material mode {other:?}; expected homogeneous or fgm_tto"
            ))),
        }
    }

    pub fn model_options(&self) -> Result<ModelOptions, ConfigError> {
        if self.solver.c <= 0.0 {
            return Err(ConfigError("solver.c must be positive".into()));
        }
        Ok(ModelOptions {
            n_elements: self.geometry.n_elements,
            m_target: self.geometry.m_target,
            inset: self.geometry.inset,
            rbf: RbfConfig {
                c: self.solver.c,
                regularization: self.solver.regularization,
                condition_cap: self.solver.condition_cap,
            },
            quad_order: self.solver.quad_order,
        })
    }

    pub fn newton_options(&self) -> Result<NewtonOptions, ConfigError> {
        let jacobian = match self.solver.jacobian.as_str() {
            "fd" => JacobianMode::FiniteDifference,
            "broyden" => JacobianMode::Broyden,
            other => {
                return Err(ConfigError(format!(
                    "unknown jacobian {other:?}; expected fd or broyden"
                )))
            }
        };
        if self.solver.tol <= 0.0 {
            return Err(ConfigError("solver.tol must be positive".into()));
        }
        Ok(NewtonOptions {
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            max_halvings: self.solver.max_halvings,
            jacobian,
            hardening_floor: self.solver.hardening_floor,
        })
    }

    /// Sweep schedule; explicit lists win over the generated geometric one.
    pub fn schedule(&self) -> Result<ThetaSchedule, ConfigError> {
        let s = &self.schedule;
        if let Some(thetas) = &s.thetas {
            return Ok(ThetaSchedule::Absolute(thetas.clone()));
        }
        if let Some(ratios) = &s.ratios {
            return Ok(ThetaSchedule::Ratios(ratios.clone()));
        }
        let max_ratio = s.theta_max_ratio.unwrap_or(3.0);
        if max_ratio <= 0.5 {
            return Err(ConfigError(
                "schedule.theta_max_ratio must exceed 0.5".into(),
            ));
        }
        Ok(ThetaSchedule::geometric(max_ratio, s.steps.unwrap_or(12)))
    }
}
