//! Uniaxial elastoplastic curves, two-phase ceramic-metal homogenization and
//! the pointwise material field over a cross-section.
//!
//! The graded model follows the Tamura-Tomota-Ozawa (TTO) rule of mixtures
//! with a stress-transfer parameter q: the ceramic phase is linear elastic,
//! the metal phase bilinear, and the homogenized point properties vary with
//! the through-height ceramic volume fraction V_c(y) = (0.5 + y/h)^k.

use nalgebra::Point2;

use crate::error::{Result, TorsionError};

/// Bilinear uniaxial stress-strain curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearCurve {
    /// Young's modulus.
    pub e: f64,
    /// Poisson's ratio.
    pub nu: f64,
    /// Yield stress.
    pub sigma_y: f64,
    /// Hardening modulus (slope beyond yield).
    pub e_h: f64,
}

impl BilinearCurve {
    pub fn new(e: f64, nu: f64, sigma_y: f64, e_h: f64) -> Result<Self> {
        let curve = BilinearCurve { e, nu, sigma_y, e_h };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        if self.e <= 0.0 {
            return Err(TorsionError::MaterialOutOfRange(format!(
                "Young's modulus must be positive, got {}",
                self.e
            )));
        }
        if !(0.0..0.5).contains(&self.nu) {
            return Err(TorsionError::MaterialOutOfRange(format!(
                "Poisson's ratio must lie in [0, 0.5), got {}",
                self.nu
            )));
        }
        if self.sigma_y <= 0.0 {
            return Err(TorsionError::MaterialOutOfRange(format!(
                "yield stress must be positive, got {}",
                self.sigma_y
            )));
        }
        let alpha = self.e_h / self.e;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(TorsionError::MaterialOutOfRange(format!(
                "hardening ratio must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(())
    }

    /// Hardening ratio alpha = E_h / E.
    pub fn alpha(&self) -> f64 {
        self.e_h / self.e
    }

    /// Yield strain.
    pub fn eps_y(&self) -> f64 {
        self.sigma_y / self.e
    }

    /// Uniaxial stress at a non-negative strain intensity.
    pub fn stress(&self, eps: f64) -> f64 {
        uniaxial_stress(eps, self)
    }
}

/// Bilinear uniaxial stress: elastic branch up to the yield strain, then
/// linear hardening. Ties at the yield strain resolve to the elastic branch
/// (the two branches agree there).
pub fn uniaxial_stress(eps: f64, curve: &BilinearCurve) -> f64 {
    debug_assert!(eps >= 0.0, "strain intensity must be non-negative");
    if eps <= curve.eps_y() {
        curve.e * eps
    } else {
        curve.sigma_y * (1.0 - curve.alpha()) + curve.e_h * eps
    }
}

/// Linear elastic phase data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticPhase {
    pub e: f64,
    pub nu: f64,
}

/// Bilinear metal phase data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetalPhase {
    pub e: f64,
    pub nu: f64,
    pub sigma_y: f64,
    pub e_h: f64,
}

/// Two-phase TTO graded material over a strip of height `h` centered on y = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TtoFgm {
    pub ceramic: ElasticPhase,
    pub metal: MetalPhase,
    /// Power-law exponent of the ceramic volume fraction.
    pub k: f64,
    /// Stress-transfer parameter; `f64::INFINITY` selects the Voigt limit.
    pub q: f64,
    /// Height of the graded strip.
    pub h: f64,
}

impl TtoFgm {
    pub fn validate(&self) -> Result<()> {
        if self.ceramic.e <= 0.0 || self.metal.e <= 0.0 {
            return Err(TorsionError::MaterialOutOfRange(
                "phase moduli must be positive".into(),
            ));
        }
        if self.metal.sigma_y <= 0.0 {
            return Err(TorsionError::MaterialOutOfRange(
                "metal yield stress must be positive".into(),
            ));
        }
        if self.k < 0.0 {
            return Err(TorsionError::MaterialOutOfRange(format!(
                "power-law exponent must be non-negative, got {}",
                self.k
            )));
        }
        if self.q < 0.0 {
            return Err(TorsionError::MaterialOutOfRange(format!(
                "stress-transfer parameter must be non-negative or infinite, got {}",
                self.q
            )));
        }
        if self.h <= 0.0 {
            return Err(TorsionError::MaterialOutOfRange(format!(
                "grading height must be positive, got {}",
                self.h
            )));
        }
        Ok(())
    }

    /// Stress-transfer ratio R = (q + E_c) / (q + E_m); the q = infinity
    /// limit is R = 1 (Voigt rule of mixtures).
    pub fn stress_transfer_ratio(&self) -> f64 {
        if self.q.is_infinite() {
            1.0
        } else {
            (self.q + self.ceramic.e) / (self.q + self.metal.e)
        }
    }

    /// Ceramic volume fraction at height y.
    pub fn ceramic_fraction(&self, y: f64) -> Result<f64> {
        let s = 0.5 + y / self.h;
        if !(-1e-12..=1.0 + 1e-12).contains(&s) {
            return Err(TorsionError::OutsideGradedStrip {
                y,
                lo: -self.h / 2.0,
                hi: self.h / 2.0,
            });
        }
        Ok(s.clamp(0.0, 1.0).powf(self.k))
    }

    /// d V_c / dy at height y.
    fn ceramic_fraction_deriv(&self, y: f64) -> f64 {
        if self.k == 0.0 {
            return 0.0;
        }
        let s = (0.5 + y / self.h).clamp(0.0, 1.0);
        if s == 0.0 && self.k < 1.0 {
            // The derivative blows up at the metal face for k < 1; interior
            // evaluation points never sit exactly on it.
            return 0.0;
        }
        self.k / self.h * s.powf(self.k - 1.0)
    }
}

/// Homogenized bilinear curve at height y of the graded strip.
pub fn tto_point(y: f64, fgm: &TtoFgm) -> Result<BilinearCurve> {
    let vc = fgm.ceramic_fraction(y)?;
    Ok(tto_curve_at_fraction(vc, fgm))
}

fn tto_curve_at_fraction(vc: f64, fgm: &TtoFgm) -> BilinearCurve {
    let vm = 1.0 - vc;
    let r = fgm.stress_transfer_ratio();
    let denom = r * vm + vc;
    let e = (r * fgm.metal.e * vm + fgm.ceramic.e * vc) / denom;
    let nu = fgm.metal.nu * vm + fgm.ceramic.nu * vc;
    let sigma_y =
        fgm.metal.sigma_y * (vm + (1.0 / r) * (fgm.ceramic.e / fgm.metal.e) * vc);
    let e_h = (r * fgm.metal.e_h * vm + fgm.ceramic.e * vc) / denom;
    BilinearCurve { e, nu, sigma_y, e_h }
}

/// Effective Poisson's ratio from the secant modulus:
/// nu_eff = 1/2 + (nu - 1/2) E_eff / E.
pub fn effective_poisson(e_eff: f64, e: f64, nu: f64) -> Result<f64> {
    if e_eff <= 0.0 {
        return Err(TorsionError::MaterialOutOfRange(format!(
            "effective modulus must be positive, got {e_eff}"
        )));
    }
    Ok(0.5 + (nu - 0.5) * e_eff / e)
}

/// Effective shear modulus G_eff = E_eff / (2 (1 + nu_eff)).
pub fn effective_shear(e_eff: f64, nu_eff: f64) -> f64 {
    e_eff / (2.0 * (1.0 + nu_eff))
}

/// Material model for a run: one curve everywhere, or a graded strip.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    Homogeneous(BilinearCurve),
    FgmTto(TtoFgm),
}

impl MaterialModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            MaterialModel::Homogeneous(curve) => curve.validate(),
            MaterialModel::FgmTto(fgm) => fgm.validate(),
        }
    }

    /// Local curve plus spatial gradients of E and nu at a point.
    pub fn at(&self, p: &Point2<f64>) -> Result<PointMaterial> {
        match self {
            MaterialModel::Homogeneous(curve) => Ok(PointMaterial {
                curve: *curve,
                grad_e: (0.0, 0.0),
                grad_nu: (0.0, 0.0),
            }),
            MaterialModel::FgmTto(fgm) => {
                let curve = tto_point(p.y, fgm)?;
                let vc = fgm.ceramic_fraction(p.y)?;
                let dvc = fgm.ceramic_fraction_deriv(p.y);
                let r = fgm.stress_transfer_ratio();
                let denom = r * (1.0 - vc) + vc;
                // dE/dVc = R (E_c - E_m) / (R V_m + V_c)^2
                let de_dvc = r * (fgm.ceramic.e - fgm.metal.e) / (denom * denom);
                let dnu_dvc = fgm.ceramic.nu - fgm.metal.nu;
                Ok(PointMaterial {
                    curve,
                    grad_e: (0.0, de_dvc * dvc),
                    grad_nu: (0.0, dnu_dvc * dvc),
                })
            }
        }
    }
}

/// Local curve and material-property gradients at one evaluation point.
#[derive(Debug, Clone, Copy)]
pub struct PointMaterial {
    pub curve: BilinearCurve,
    pub grad_e: (f64, f64),
    pub grad_nu: (f64, f64),
}

impl PointMaterial {
    /// Effective shear modulus and its spatial gradient for a secant modulus
    /// field value `e_eff` with spatial gradient `grad_e_eff`, chaining
    /// through nu_eff = 1/2 + (nu - 1/2) E_eff / E. Also returns nu_eff.
    pub fn effective_shear_with_grad(
        &self,
        e_eff: f64,
        grad_e_eff: (f64, f64),
    ) -> (f64, (f64, f64), f64) {
        let e = self.curve.e;
        let nu = self.curve.nu;
        let ratio = e_eff / e;
        let nu_eff = 0.5 + (nu - 0.5) * ratio;
        let one_plus = 1.0 + nu_eff;
        let g = e_eff / (2.0 * one_plus);
        let mut grad_g = (0.0, 0.0);
        for axis in 0..2 {
            let de_eff = if axis == 0 { grad_e_eff.0 } else { grad_e_eff.1 };
            let de = if axis == 0 { self.grad_e.0 } else { self.grad_e.1 };
            let dnu = if axis == 0 { self.grad_nu.0 } else { self.grad_nu.1 };
            let dratio = (de_eff * e - e_eff * de) / (e * e);
            let dnu_eff = (nu - 0.5) * dratio + ratio * dnu;
            let dg = de_eff / (2.0 * one_plus) - e_eff * dnu_eff / (2.0 * one_plus * one_plus);
            if axis == 0 {
                grad_g.0 = dg;
            } else {
                grad_g.1 = dg;
            }
        }
        (g, grad_g, nu_eff)
    }
}

/// Material curves sampled at a fixed set of points.
#[derive(Debug, Clone)]
pub struct MaterialField {
    pub points: Vec<PointMaterial>,
}

impl MaterialField {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_sigma_y(&self) -> f64 {
        self.points
            .iter()
            .map(|m| m.curve.sigma_y)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_e(&self) -> f64 {
        self.points.iter().map(|m| m.curve.e).fold(0.0, f64::max)
    }
}

/// Sample the model at each point.
pub fn sample_field(model: &MaterialModel, points: &[Point2<f64>]) -> Result<MaterialField> {
    let points = points
        .iter()
        .map(|p| model.at(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(MaterialField { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn steel() -> BilinearCurve {
        BilinearCurve::new(210_600.0, 0.3, 24.0, 0.0).unwrap()
    }

    fn example_fgm(k: f64, q: f64) -> TtoFgm {
        TtoFgm {
            ceramic: ElasticPhase { e: 5000.0, nu: 0.25 },
            metal: MetalPhase {
                e: 3000.0,
                nu: 0.25,
                sigma_y: 5.0,
                e_h: 500.0,
            },
            k,
            q,
            h: 10.0,
        }
    }

    #[test]
    fn curve_is_continuous_at_yield() {
        let curve = BilinearCurve::new(200.0, 0.3, 10.0, 40.0).unwrap();
        let eps_y = curve.eps_y();
        let elastic = curve.e * eps_y;
        let plastic = curve.sigma_y * (1.0 - curve.alpha()) + curve.e_h * eps_y;
        assert_eq!(elastic, curve.sigma_y);
        assert_abs_diff_eq!(plastic, curve.sigma_y, epsilon = 1e-12);
        assert_eq!(uniaxial_stress(eps_y, &curve), curve.sigma_y);
    }

    #[test]
    fn alpha_one_is_linear_elastic() {
        let curve = BilinearCurve::new(200.0, 0.3, 10.0, 200.0).unwrap();
        for eps in [0.01, 0.05, 0.4, 2.0] {
            assert_relative_eq!(uniaxial_stress(eps, &curve), 200.0 * eps, max_relative = 1e-14);
        }
    }

    #[test]
    fn alpha_zero_is_perfectly_plastic() {
        let curve = steel();
        let eps_y = curve.eps_y();
        assert_eq!(uniaxial_stress(2.0 * eps_y, &curve), curve.sigma_y);
        assert_eq!(uniaxial_stress(10.0 * eps_y, &curve), curve.sigma_y);
    }

    #[test]
    fn metal_face_returns_pure_metal_curve() {
        for k in [0.1, 1.0, 3.0] {
            let fgm = example_fgm(k, 2000.0);
            let curve = tto_point(-5.0, &fgm).unwrap();
            assert_relative_eq!(curve.e, 3000.0, max_relative = 1e-12);
            assert_relative_eq!(curve.sigma_y, 5.0, max_relative = 1e-12);
            assert_relative_eq!(curve.e_h, 500.0, max_relative = 1e-12);
            assert_eq!(curve.nu, 0.25);
        }
    }

    #[test]
    fn infinite_q_is_the_voigt_rule() {
        let fgm = example_fgm(1.0, f64::INFINITY);
        assert_eq!(fgm.stress_transfer_ratio(), 1.0);
        let y = 1.3;
        let vc = fgm.ceramic_fraction(y).unwrap();
        let curve = tto_point(y, &fgm).unwrap();
        assert_relative_eq!(
            curve.e,
            3000.0 * (1.0 - vc) + 5000.0 * vc,
            max_relative = 1e-12
        );
    }

    #[test]
    fn hand_computed_mixture_value() {
        // q = 0, V_c = 1/2: R = 5/3, E = 3750.
        let fgm = example_fgm(1.0, 0.0);
        assert_relative_eq!(fgm.stress_transfer_ratio(), 5.0 / 3.0, max_relative = 1e-14);
        let curve = tto_point(0.0, &fgm).unwrap();
        assert_relative_eq!(curve.e, 3750.0, max_relative = 1e-12);
    }

    #[test]
    fn outside_strip_is_rejected() {
        let fgm = example_fgm(1.0, 0.0);
        assert!(matches!(
            tto_point(5.2, &fgm),
            Err(TorsionError::OutsideGradedStrip { .. })
        ));
    }

    #[test]
    fn effective_values_basics() {
        let e = 210_600.0;
        assert_eq!(effective_poisson(e, e, 0.3).unwrap(), 0.3);
        assert_relative_eq!(
            effective_shear(e, 0.3),
            e / 2.6,
            max_relative = 1e-14
        );
        let nu_eff = effective_poisson(e / 2.0, e, 0.3).unwrap();
        assert_relative_eq!(nu_eff, 0.4, max_relative = 1e-14);
        assert_relative_eq!(
            effective_shear(e / 2.0, nu_eff),
            e / (4.0 * 1.4),
            max_relative = 1e-14
        );
        // incompressible plastic limit
        let nu_low = effective_poisson(1e-9 * e, e, 0.3).unwrap();
        assert_abs_diff_eq!(nu_low, 0.5, epsilon = 1e-9);
        assert!(effective_poisson(0.0, e, 0.3).is_err());
    }

    #[test]
    fn homogeneous_field_is_uniform() {
        let model = MaterialModel::Homogeneous(steel());
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, -2.0)];
        let field = sample_field(&model, &pts).unwrap();
        assert_eq!(field.points[0].curve, field.points[1].curve);
        assert_eq!(field.points[0].grad_e, (0.0, 0.0));
    }

    #[test]
    fn zero_exponent_is_pure_ceramic_everywhere() {
        let fgm = example_fgm(0.0, f64::INFINITY);
        let model = MaterialModel::FgmTto(fgm);
        for y in [-5.0, -1.0, 0.0, 4.9] {
            let m = model.at(&Point2::new(0.3, y)).unwrap();
            assert_relative_eq!(m.curve.e, 5000.0, max_relative = 1e-12);
            assert_relative_eq!(m.curve.e_h, 5000.0, max_relative = 1e-12);
            assert_eq!(m.grad_e, (0.0, 0.0));
        }
    }

    #[test]
    fn linear_grading_hits_pure_ceramic_at_the_top() {
        let fgm = example_fgm(1.0, f64::INFINITY);
        let curve = tto_point(5.0, &fgm).unwrap();
        assert_relative_eq!(curve.e, 5000.0, max_relative = 1e-12);
        // with k = 1 and q = inf, E is linear in the composition variable
        let e_mid = tto_point(0.0, &fgm).unwrap().e;
        assert_relative_eq!(e_mid, 4000.0, max_relative = 1e-12);
    }

    #[test]
    fn material_gradient_matches_finite_differences() {
        for (k, q) in [(1.0, 0.0), (3.0, 50.0), (0.5, f64::INFINITY)] {
            let model = MaterialModel::FgmTto(example_fgm(k, q));
            let h = 1e-6;
            for y in [-3.0, 0.0, 2.5] {
                let m = model.at(&Point2::new(0.0, y)).unwrap();
                let up = model.at(&Point2::new(0.0, y + h)).unwrap();
                let dn = model.at(&Point2::new(0.0, y - h)).unwrap();
                let fd_e = (up.curve.e - dn.curve.e) / (2.0 * h);
                assert_relative_eq!(m.grad_e.1, fd_e, max_relative = 1e-6, epsilon = 1e-9);
                let fd_nu = (up.curve.nu - dn.curve.nu) / (2.0 * h);
                assert_relative_eq!(m.grad_nu.1, fd_nu, max_relative = 1e-6, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn shear_chain_matches_finite_differences() {
        let model = MaterialModel::FgmTto(example_fgm(2.0, 10.0));
        // a synthetic smooth secant field to differentiate against
        let e_eff = |y: f64| 2500.0 + 100.0 * (0.3 * y).sin();
        let de_eff = |y: f64| 30.0 * (0.3 * y).cos();
        let h = 1e-6;
        for y in [-2.0, 0.5, 3.0] {
            let m = model.at(&Point2::new(0.0, y)).unwrap();
            let (_, grad_g, _) = m.effective_shear_with_grad(e_eff(y), (0.0, de_eff(y)));
            let g_at = |yy: f64| {
                let mm = model.at(&Point2::new(0.0, yy)).unwrap();
                let (g, _, _) = mm.effective_shear_with_grad(e_eff(yy), (0.0, de_eff(yy)));
                g
            };
            let fd = (g_at(y + h) - g_at(y - h)) / (2.0 * h);
            assert_relative_eq!(grad_g.1, fd, max_relative = 1e-5);
        }
    }

    proptest! {
        #[test]
        fn uniaxial_stress_is_nondecreasing(
            e in 1.0f64..1e6,
            nu in 0.0f64..0.49,
            sigma_y in 0.1f64..100.0,
            alpha in 0.0f64..1.0,
            eps_a in 0.0f64..1.0,
            eps_b in 0.0f64..1.0,
        ) {
            let curve = BilinearCurve::new(e, nu, sigma_y, alpha * e).unwrap();
            let (lo, hi) = if eps_a <= eps_b { (eps_a, eps_b) } else { (eps_b, eps_a) };
            prop_assert!(uniaxial_stress(lo, &curve) <= uniaxial_stress(hi, &curve) + 1e-12);
        }

        #[test]
        fn tto_modulus_stays_between_the_phases(
            k in 0.0f64..20.0,
            q_raw in 0.0f64..1e5,
            use_inf in proptest::bool::ANY,
            y in -5.0f64..5.0,
        ) {
            let q = if use_inf { f64::INFINITY } else { q_raw };
            let fgm = example_fgm(k, q);
            let curve = tto_point(y, &fgm).unwrap();
            prop_assert!(curve.e >= 3000.0 - 1e-9);
            prop_assert!(curve.e <= 5000.0 + 1e-9);
        }

        #[test]
        fn effective_poisson_is_bracketed(
            e in 1.0f64..1e6,
            nu in 0.0f64..0.49,
            frac in 1e-6f64..1.0,
        ) {
            let nu_eff = effective_poisson(frac * e, e, nu).unwrap();
            prop_assert!(nu_eff >= nu - 1e-12);
            prop_assert!(nu_eff < 0.5);
        }
    }
}
