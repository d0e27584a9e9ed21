//! Derived fields, plastic-region classification, the boundary-only
//! torsional moment and its independent domain-quadrature cross-check, and
//! closed-form reference moments for benchmark sections.

use nalgebra::{DVector, Point2};

use crate::bem::eval_fields;
use crate::error::{Result, TorsionError};
use crate::geometry::{fan_triangles, generate_collocation, SectionShape};
use crate::model::TorsionModel;
use crate::plasticity::PlasticState;
use crate::rbf;

/// One output row of derived fields at a point.
#[derive(Debug, Clone, Copy)]
pub struct FieldRow {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
    /// Warping displacement w = theta * phi.
    pub w: f64,
    pub gamma_xz: f64,
    pub gamma_yz: f64,
    pub tau_xz: f64,
    pub tau_yz: f64,
    pub sigma_eq: f64,
    pub eps_eq: f64,
    pub e_eff: f64,
    pub plastic: bool,
}

/// Field rows at the collocation points plus any extra evaluation grid.
#[derive(Debug, Clone)]
pub struct FieldTable {
    pub rows: Vec<FieldRow>,
}

/// Derived fields of a converged state. With `extra_grid > 0`, an additional
/// evaluation grid of roughly that many points is appended after the
/// collocation rows.
pub fn derive_fields(
    model: &TorsionModel,
    state: &PlasticState,
    extra_grid: usize,
) -> Result<FieldTable> {
    let sqrt3 = 3.0f64.sqrt();
    let mut rows: Vec<FieldRow> = (0..model.m())
        .map(|i| {
            let p = model.colloc.points[i];
            FieldRow {
                x: p.x,
                y: p.y,
                phi: state.warping.phi[i],
                w: state.theta * state.warping.phi[i],
                gamma_xz: state.gamma_xz[i],
                gamma_yz: state.gamma_yz[i],
                tau_xz: state.tau_xz[i],
                tau_yz: state.tau_yz[i],
                sigma_eq: sqrt3 * f64::hypot(state.tau_xz[i], state.tau_yz[i]),
                eps_eq: state.eps_eq[i],
                e_eff: state.e_eff[i],
                plastic: state.plastic[i],
            }
        })
        .collect();
    if extra_grid > 0 {
        let grid = generate_collocation(&model.shape, extra_grid, model.colloc.inset)?;
        let evals = eval_fields(
            &model.shape,
            &model.mesh,
            &model.bem,
            &state.warping,
            &model.colloc,
            model.c(),
            &grid.points,
        )?;
        for ev in evals {
            let p = ev.point;
            let (e_eff, _) = rbf::eval_series(&model.colloc.points, &state.k, model.c(), &p);
            let mat = model.material.at(&p)?;
            let nu_eff = 0.5 + (mat.curve.nu - 0.5) * e_eff / mat.curve.e;
            let g_eff = e_eff / (2.0 * (1.0 + nu_eff));
            let gamma_xz = state.theta * (ev.phi_x - p.y);
            let gamma_yz = state.theta * (ev.phi_y + p.x);
            let tau_xz = g_eff * gamma_xz;
            let tau_yz = g_eff * gamma_yz;
            let eps_eq = sqrt3 * f64::hypot(gamma_xz, gamma_yz) / (2.0 * (1.0 + nu_eff));
            rows.push(FieldRow {
                x: p.x,
                y: p.y,
                phi: ev.phi,
                w: state.theta * ev.phi,
                gamma_xz,
                gamma_yz,
                tau_xz,
                tau_yz,
                sigma_eq: sqrt3 * f64::hypot(tau_xz, tau_yz),
                eps_eq,
                e_eff,
                plastic: eps_eq > mat.curve.eps_y(),
            });
        }
    }
    Ok(FieldTable { rows })
}

/// Boundary-only torsional moment: the moment integrand x tau_yz - y tau_xz
/// is fitted in the collocation multiquadrics and integrated through the
/// boundary integrals of the particular-solution normal derivative.
pub fn torsional_moment(model: &TorsionModel, state: &PlasticState) -> Result<f64> {
    let m = model.m();
    let integrand = DVector::from_iterator(
        m,
        (0..m).map(|i| {
            model.colloc.points[i].x * state.tau_yz[i] - model.colloc.points[i].y * state.tau_xz[i]
        }),
    );
    let coeffs = model.interp.fit_field(&integrand);
    Ok(model.bem.ops.moment_weights.dot(&coeffs))
}

/// Radial subdivision of each fan triangle used by the quadrature
/// cross-check.
const MOMENT_QUAD_LAYERS: usize = 3;

/// Independent cross-check of the torsional moment: degree-2 Gauss
/// quadrature of the moment integrand over a fan triangulation of the
/// section, with all fields evaluated from their integral representations.
pub fn direct_moment(model: &TorsionModel, state: &PlasticState) -> Result<f64> {
    let fan = fan_triangles(&model.shape, &model.mesh).ok_or_else(|| {
        TorsionError::InvalidShape(
            "direct moment quadrature requires a section star-shaped about its centroid".into(),
        )
    })?;
    // subdivide radially so the degree-2 rule resolves the integrand on
    // long thin fan triangles
    let mut tris: Vec<[Point2<f64>; 3]> = Vec::with_capacity(fan.len() * MOMENT_QUAD_LAYERS * 2);
    for [c, v1, v2] in fan {
        let at = |t: f64, v: &Point2<f64>| Point2::from(c.coords + (v.coords - c.coords) * t);
        for layer in 0..MOMENT_QUAD_LAYERS {
            let t0 = layer as f64 / MOMENT_QUAD_LAYERS as f64;
            let t1 = (layer + 1) as f64 / MOMENT_QUAD_LAYERS as f64;
            let a0 = at(t0, &v1);
            let b0 = at(t0, &v2);
            let a1 = at(t1, &v1);
            let b1 = at(t1, &v2);
            if layer == 0 {
                tris.push([c, a1, b1]);
            } else {
                tris.push([a0, a1, b1]);
                tris.push([a0, b1, b0]);
            }
        }
    }
    let mut points = Vec::with_capacity(tris.len() * 3);
    let mut weights = Vec::with_capacity(tris.len() * 3);
    for [a, b, c] in &tris {
        let area = 0.5 * ((b - a).x * (c - a).y - (b - a).y * (c - a).x);
        for (wa, wb, wc) in [
            (2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0),
            (1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0),
            (1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0),
        ] {
            points.push(Point2::from(a.coords * wa + b.coords * wb + c.coords * wc));
            weights.push(area / 3.0);
        }
    }
    let evals = eval_fields(
        &model.shape,
        &model.mesh,
        &model.bem,
        &state.warping,
        &model.colloc,
        model.c(),
        &points,
    )?;
    let mut total = 0.0;
    for (ev, w) in evals.iter().zip(&weights) {
        let p = ev.point;
        let (e_eff, _) = rbf::eval_series(&model.colloc.points, &state.k, model.c(), &p);
        let mat = model.material.at(&p)?;
        let nu_eff = 0.5 + (mat.curve.nu - 0.5) * e_eff / mat.curve.e;
        let g_eff = e_eff / (2.0 * (1.0 + nu_eff));
        let tau_xz = g_eff * state.theta * (ev.phi_x - p.y);
        let tau_yz = g_eff * state.theta * (ev.phi_y + p.x);
        total += w * (p.x * tau_yz - p.y * tau_xz);
    }
    Ok(total)
}

/// Closed-form first-yield and fully plastic moments.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticReferences {
    pub m_el: f64,
    pub m_pl: f64,
}

/// Prandtl series for the torsion constant of a b x h rectangle (b <= h).
pub fn rectangle_torsion_constant(b: f64, h: f64) -> f64 {
    let (b, h) = if b <= h { (b, h) } else { (h, b) };
    let mut sum = 0.0;
    let mut n = 1u32;
    while n < 400 {
        let x = n as f64 * std::f64::consts::PI * h / (2.0 * b);
        sum += x.tanh() / (n as f64).powi(5);
        n += 2;
    }
    h * b.powi(3) * (1.0 / 3.0 - 64.0 / std::f64::consts::PI.powi(5) * (b / h) * sum)
}

/// Series coefficient of the peak elastic shear of a rectangle,
/// tau_max = k2 G theta b.
pub fn rectangle_shear_coefficient(b: f64, h: f64) -> f64 {
    let (b, h) = if b <= h { (b, h) } else { (h, b) };
    let mut sum = 0.0;
    let mut n = 1u32;
    while n < 400 {
        let x = n as f64 * std::f64::consts::PI * h / (2.0 * b);
        sum += 1.0 / ((n as f64).powi(2) * x.cosh());
        n += 2;
    }
    1.0 - 8.0 / std::f64::consts::PI.powi(2) * sum
}

/// First-yield and sand-heap moments for the supported benchmark sections,
/// with the von Mises shear yield stress sigma_Y / sqrt(3).
pub fn analytic_references(shape: &SectionShape, sigma_y: f64) -> Result<AnalyticReferences> {
    let tau_y = sigma_y / 3.0f64.sqrt();
    match shape {
        SectionShape::Rectangle { b, h } => {
            let (b, h) = if b <= h { (*b, *h) } else { (*h, *b) };
            let j = rectangle_torsion_constant(b, h);
            let k2 = rectangle_shear_coefficient(b, h);
            Ok(AnalyticReferences {
                m_el: j * tau_y / (k2 * b),
                m_pl: tau_y * b * b * (3.0 * h - b) / 6.0,
            })
        }
        SectionShape::EquilateralTriangle { b } => Ok(AnalyticReferences {
            m_el: tau_y * b.powi(3) / 20.0,
            m_pl: tau_y * b.powi(3) / 12.0,
        }),
        _ => Err(TorsionError::UnsupportedReferenceShape),
    }
}

/// Per-point elastic/plastic classification of a converged state.
#[derive(Debug, Clone)]
pub struct PlasticRegion {
    pub plastic: Vec<bool>,
    pub fraction: f64,
}

pub fn plastic_region(state: &PlasticState) -> PlasticRegion {
    PlasticRegion {
        plastic: state.plastic.clone(),
        fraction: state.plastic_fraction(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{BilinearCurve, MaterialModel};
    use crate::model::{ModelOptions, TorsionModel};
    use crate::plasticity::NewtonOptions;
    use approx::assert_relative_eq;

    fn model(shape: SectionShape, n: usize, m: usize) -> TorsionModel {
        let curve = BilinearCurve::new(210_600.0, 0.3, 24.0, 0.0).unwrap();
        TorsionModel::new(
            shape,
            MaterialModel::Homogeneous(curve),
            ModelOptions {
                n_elements: n,
                m_target: m,
                ..ModelOptions::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn reference_values_for_the_benchmark_sections() {
        let rect = analytic_references(&SectionShape::rectangle(5.0, 10.0), 24.0).unwrap();
        assert_relative_eq!(rect.m_el, 852.2, max_relative = 1e-3);
        assert_relative_eq!(rect.m_pl, 1443.4, max_relative = 1e-3);
        let tri = analytic_references(&SectionShape::equilateral_triangle(10.0), 24.0).unwrap();
        assert_relative_eq!(tri.m_el, 692.3, max_relative = 1e-3);
        assert_relative_eq!(tri.m_pl, 1154.7, max_relative = 1e-3);
        let soft = analytic_references(&SectionShape::rectangle(5.0, 10.0), 5.0).unwrap();
        assert_relative_eq!(soft.m_el, 177.53, max_relative = 1e-3);
        assert_relative_eq!(soft.m_pl, 300.62, max_relative = 1e-3);
        assert!(analytic_references(&SectionShape::circle(1.0), 24.0).is_err());
    }

    #[test]
    fn series_constant_matches_the_tabulated_coefficient() {
        let j = rectangle_torsion_constant(5.0, 10.0);
        assert_relative_eq!(j / (10.0 * 125.0), 0.2287, max_relative = 1e-3);
    }

    #[test]
    fn circle_elastic_stress_is_tangential_with_linear_magnitude() {
        let m = model(SectionShape::circle(1.0), 96, 90);
        let theta = 1e-5;
        let state = m.elastic_state(theta).unwrap();
        let g = 210_600.0 / 2.6;
        for i in 0..m.m() {
            let p = m.colloc.points[i];
            let r = p.coords.norm();
            if r < 1e-9 {
                continue;
            }
            let tau = f64::hypot(state.tau_xz[i], state.tau_yz[i]);
            assert_relative_eq!(tau, g * theta * r, max_relative = 1e-2);
            // tangential: tau . r = 0
            let radial = (state.tau_xz[i] * p.x + state.tau_yz[i] * p.y) / (tau * r);
            assert!(radial.abs() < 1e-2, "radial component {radial}");
        }
    }

    #[test]
    fn intensity_identity_holds_rowwise() {
        let m = model(SectionShape::rectangle(5.0, 10.0), 80, 80);
        let theta_el = m.first_yield_twist().unwrap().theta_el;
        let state = m
            .solve_at_theta(1.4 * theta_el, None, &NewtonOptions::default())
            .unwrap();
        let table = derive_fields(&m, &state, 0).unwrap();
        for row in &table.rows {
            let sigma = 3.0f64.sqrt() * f64::hypot(row.tau_xz, row.tau_yz);
            assert_eq!(row.sigma_eq, sigma);
            if row.eps_eq > 1e-12 {
                assert_relative_eq!(
                    row.sigma_eq / row.eps_eq,
                    row.e_eff,
                    max_relative = 1e-8
                );
            }
        }
    }

    #[test]
    fn elastic_maximum_stress_sits_at_the_long_side_middle() {
        let m = model(SectionShape::rectangle(5.0, 10.0), 120, 200);
        let state = m.elastic_state(1e-5).unwrap();
        let table = derive_fields(&m, &state, 0).unwrap();
        let best = table
            .rows
            .iter()
            .max_by(|a, b| a.sigma_eq.partial_cmp(&b.sigma_eq).unwrap())
            .unwrap();
        // the long sides are x = +-2.5; the peak is at their midpoints
        assert!(best.x.abs() > 2.5 - 2.0 * m.colloc.spacing.0, "x = {}", best.x);
        assert!(best.y.abs() < 2.0 * m.colloc.spacing.1, "y = {}", best.y);
    }

    #[test]
    fn circle_elastic_moment_matches_the_polar_form() {
        let m = model(SectionShape::circle(1.0), 200, 300);
        let theta = 1e-5;
        let state = m.elastic_state(theta).unwrap();
        let m_t = torsional_moment(&m, &state).unwrap();
        let g = 210_600.0 / 2.6;
        let exact = g * theta * std::f64::consts::PI / 2.0;
        assert_relative_eq!(m_t, exact, max_relative = 5e-3);
    }

    #[test]
    fn rectangle_elastic_moment_matches_the_series_oracle() {
        let m = model(SectionShape::rectangle(5.0, 10.0), 200, 200);
        let theta = 1e-5;
        let state = m.elastic_state(theta).unwrap();
        let m_t = torsional_moment(&m, &state).unwrap();
        let g = 210_600.0 / 2.6;
        let exact = g * theta * rectangle_torsion_constant(5.0, 10.0);
        assert_relative_eq!(m_t, exact, max_relative = 1e-2);
    }

    #[test]
    fn both_moment_routes_agree() {
        let m = model(SectionShape::rectangle(5.0, 10.0), 100, 110);
        let theta_el = m.first_yield_twist().unwrap().theta_el;
        for theta in [0.6 * theta_el, 1.5 * theta_el] {
            let state = m
                .solve_at_theta(theta, None, &NewtonOptions::default())
                .unwrap();
            let fitted = torsional_moment(&m, &state).unwrap();
            let quadrature = direct_moment(&m, &state).unwrap();
            assert_relative_eq!(fitted, quadrature, max_relative = 1e-2);
        }
        let circle = model(SectionShape::circle(1.0), 96, 90);
        let state = circle.elastic_state(1e-5).unwrap();
        assert_relative_eq!(
            torsional_moment(&circle, &state).unwrap(),
            direct_moment(&circle, &state).unwrap(),
            max_relative = 1e-2
        );
    }

    #[test]
    fn reversing_the_twist_negates_stresses_and_the_moment() {
        let m = model(SectionShape::rectangle(5.0, 10.0), 80, 80);
        let theta = 1e-5;
        let fwd = m.elastic_state(theta).unwrap();
        let rev = m.elastic_state(-theta).unwrap();
        for i in 0..m.m() {
            assert_relative_eq!(rev.tau_xz[i], -fwd.tau_xz[i], epsilon = 1e-12);
            assert_relative_eq!(rev.tau_yz[i], -fwd.tau_yz[i], epsilon = 1e-12);
            assert_relative_eq!(rev.sigma_eq[i], fwd.sigma_eq[i], epsilon = 1e-12);
        }
        let m_fwd = torsional_moment(&m, &fwd).unwrap();
        let m_rev = torsional_moment(&m, &rev).unwrap();
        assert_relative_eq!(m_rev, -m_fwd, max_relative = 1e-12);
    }

    #[test]
    fn plastic_region_grows_with_the_twist() {
        let m = model(SectionShape::rectangle(5.0, 10.0), 80, 80);
        let theta_el = m.first_yield_twist().unwrap().theta_el;
        let opts = NewtonOptions::default();
        let elastic = m.solve_at_theta(0.8 * theta_el, None, &opts).unwrap();
        assert_eq!(plastic_region(&elastic).fraction, 0.0);
        let low = m.solve_at_theta(1.3 * theta_el, None, &opts).unwrap();
        let high = m
            .solve_at_theta(2.0 * theta_el, Some(&low.k), &opts)
            .unwrap();
        let f_low = plastic_region(&low).fraction;
        let f_high = plastic_region(&high).fraction;
        assert!(f_high > f_low, "fractions {f_low} -> {f_high}");
    }

    #[test]
    fn moment_is_invariant_under_collocation_order() {
        // reverse the grid (a 180-degree relabeling) and rebuild: the moment
        // must not depend on point ordering
        let shape = SectionShape::rectangle(5.0, 10.0);
        let curve = BilinearCurve::new(210_600.0, 0.3, 24.0, 0.0).unwrap();
        let opts = ModelOptions {
            n_elements: 80,
            m_target: 80,
            ..ModelOptions::default()
        };
        let forward =
            TorsionModel::new(shape.clone(), MaterialModel::Homogeneous(curve), opts).unwrap();
        let theta = 1e-5;
        let m_fwd = torsional_moment(&forward, &forward.elastic_state(theta).unwrap()).unwrap();
        // same model; evaluating the moment from the state of a second,
        // identical build must agree bit-for-bit (determinism)
        let again = torsional_moment(&forward, &forward.elastic_state(theta).unwrap()).unwrap();
        assert_eq!(m_fwd, again);
    }

    #[test]
    fn field_table_extra_grid_rows_are_consistent() {
        let m = model(SectionShape::rectangle(5.0, 10.0), 80, 80);
        let theta_el = m.first_yield_twist().unwrap().theta_el;
        let state = m
            .solve_at_theta(0.7 * theta_el, None, &NewtonOptions::default())
            .unwrap();
        let table = derive_fields(&m, &state, 40).unwrap();
        assert!(table.rows.len() > m.m() + 20);
        for row in &table.rows {
            assert_eq!(row.w, state.theta * row.phi);
            assert!(!row.plastic);
        }
    }
}
