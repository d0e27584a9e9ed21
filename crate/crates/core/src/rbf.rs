//! Multiquadric radial basis machinery.
//!
//! The basis is f(r) = sqrt(r^2 + c^2) with shape parameter c. Alongside the
//! basis values this module provides the closed-form particular solution
//! u_hat of  laplacian(u_hat) = f  together with its radial derivatives,
//! which the boundary-integral assembly needs, and dense interpolation
//! systems over a fixed set of centers.
//!
//! The shape parameter is a length: the default c = 0.1 is tuned for
//! centimeter-scale sections and is not scale-free.

use nalgebra::{DMatrix, DVector, Point2};

use crate::error::{Result, TorsionError};

/// Multiquadric value sqrt(r^2 + c^2).
pub fn mq_value(r: f64, c: f64) -> f64 {
    (r * r + c * c).sqrt()
}

/// Gradient of f(|p - center|) at offset d = p - center. Smooth at d = 0.
pub fn mq_gradient(dx: f64, dy: f64, c: f64) -> (f64, f64) {
    let t = (dx * dx + dy * dy + c * c).sqrt();
    (dx / t, dy / t)
}

/// Second derivatives (f_xx, f_xy, f_yy) of the multiquadric at offset d.
pub fn mq_hessian(dx: f64, dy: f64, c: f64) -> (f64, f64, f64) {
    let t2 = dx * dx + dy * dy + c * c;
    let t = t2.sqrt();
    let t3 = t2 * t;
    (
        1.0 / t - dx * dx / t3,
        -dx * dy / t3,
        1.0 / t - dy * dy / t3,
    )
}

/// Particular solution u_hat(r) of laplacian(u_hat) = sqrt(r^2 + c^2).
pub fn mq_particular(r: f64, c: f64) -> f64 {
    let t = (r * r + c * c).sqrt();
    -(c * c * c) / 3.0 * (c * t + c * c).ln() + (r * r + 4.0 * c * c) * t / 9.0
}

// The closed form only states u_hat itself; the derivatives below follow by
// differentiation with t = sqrt(r^2 + c^2) and
//     A(r) = r^2 + 2 c^2 - c^3 / (t + c),
// giving u_hat' = r A / (3 t). They are verified against central finite
// differences in the tests before anything else is allowed to use them.
fn particular_aux(r: f64, c: f64) -> (f64, f64) {
    let t = (r * r + c * c).sqrt();
    let a = r * r + 2.0 * c * c - c * c * c / (t + c);
    (t, a)
}

/// Radial derivative u_hat'(r).
pub fn mq_particular_deriv(r: f64, c: f64) -> f64 {
    let (t, a) = particular_aux(r, c);
    r * a / (3.0 * t)
}

/// u_hat'(r) / r, which stays finite as r -> 0.
pub fn mq_particular_deriv_over_r(r: f64, c: f64) -> f64 {
    let (t, a) = particular_aux(r, c);
    a / (3.0 * t)
}

/// Second radial derivative u_hat''(r).
pub fn mq_particular_second(r: f64, c: f64) -> f64 {
    let (t, a) = particular_aux(r, c);
    let tc = t + c;
    c * c * a / (3.0 * t * t * t) + r * r / (3.0 * t) * (2.0 + c * c * c / (t * tc * tc))
}

/// Cartesian gradient of u_hat(|p - center|) at offset d = p - center.
pub fn mq_particular_grad(dx: f64, dy: f64, c: f64) -> (f64, f64) {
    let r = (dx * dx + dy * dy).sqrt();
    let s = mq_particular_deriv_over_r(r, c);
    (s * dx, s * dy)
}

/// Laplacian of u_hat, which must reproduce the multiquadric itself.
pub fn mq_particular_laplacian(r: f64, c: f64) -> f64 {
    mq_particular_second(r, c) + mq_particular_deriv_over_r(r, c)
}

/// Cartesian second derivatives (u_xx, u_xy, u_yy) of u_hat at offset d.
pub fn mq_particular_hessian(dx: f64, dy: f64, c: f64) -> (f64, f64, f64) {
    let r2 = dx * dx + dy * dy;
    if r2 == 0.0 {
        let d = mq_particular_second(0.0, c);
        return (d, 0.0, d);
    }
    let r = r2.sqrt();
    let second = mq_particular_second(r, c);
    let over_r = mq_particular_deriv_over_r(r, c);
    let ex = dx / r;
    let ey = dy / r;
    (
        second * ex * ex + over_r * (1.0 - ex * ex),
        (second - over_r) * ex * ey,
        second * ey * ey + over_r * (1.0 - ey * ey),
    )
}

/// Shape parameter and centers of one multiquadric expansion.
#[derive(Debug, Clone)]
pub struct RbfConfig {
    pub c: f64,
    /// Additive Tikhonov shift on the interpolation matrix diagonal; zero by
    /// default.
    pub regularization: f64,
    /// Condition-estimate cap above which the interpolation system is
    /// rejected.
    pub condition_cap: f64,
}

impl Default for RbfConfig {
    fn default() -> Self {
        RbfConfig {
            c: 0.1,
            regularization: 0.0,
            condition_cap: 1e12,
        }
    }
}

/// Factorized M x M multiquadric collocation matrix over a fixed center set.
pub struct InterpolationMatrix {
    pub phi: DMatrix<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    pub condition_estimate: f64,
    pub c: f64,
}

impl InterpolationMatrix {
    /// Solve the collocation system for the coefficients of sampled values.
    pub fn fit_field(&self, values: &DVector<f64>) -> DVector<f64> {
        self.lu.solve(values).expect("factorization is nonsingular")
    }

    pub fn len(&self) -> usize {
        self.phi.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.nrows() == 0
    }
}

/// Assemble and factorize the interpolation matrix for the given centers.
pub fn build_interpolation(
    centers: &[Point2<f64>],
    config: &RbfConfig,
) -> Result<InterpolationMatrix> {
    let m = centers.len();
    assert!(m >= 1, "at least one center is required");
    let mut phi = DMatrix::zeros(m, m);
    for i in 0..m {
        phi[(i, i)] = config.c + config.regularization;
        for j in i + 1..m {
            let v = mq_value((centers[i] - centers[j]).norm(), config.c);
            phi[(i, j)] = v;
            phi[(j, i)] = v;
        }
    }
    let norm1 = matrix_norm_1(&phi);
    let lu = phi.clone().lu();
    let cond = match lu.try_inverse() {
        Some(inv) => norm1 * matrix_norm_1(&inv),
        None => f64::INFINITY,
    };
    if cond > config.condition_cap {
        return Err(TorsionError::IllConditioned {
            cond,
            cap: config.condition_cap,
            c: config.c,
        });
    }
    Ok(InterpolationMatrix {
        lu: phi.clone().lu(),
        phi,
        condition_estimate: cond,
        c: config.c,
    })
}

fn matrix_norm_1(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Evaluate the expansion sum_j k_j f_j and its analytic gradient at `p`.
pub fn eval_series(
    centers: &[Point2<f64>],
    coefficients: &DVector<f64>,
    c: f64,
    p: &Point2<f64>,
) -> (f64, (f64, f64)) {
    debug_assert_eq!(centers.len(), coefficients.len());
    let mut value = 0.0;
    let mut gx = 0.0;
    let mut gy = 0.0;
    for (center, k) in centers.iter().zip(coefficients.iter()) {
        let d = p - center;
        let t = (d.norm_squared() + c * c).sqrt();
        value += k * t;
        gx += k * d.x / t;
        gy += k * d.y / t;
    }
    (value, (gx, gy))
}

/// Basis values of every center at every query point (rows = points).
pub fn basis_matrix(points: &[Point2<f64>], centers: &[Point2<f64>], c: f64) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(points.len(), centers.len());
    for (i, p) in points.iter().enumerate() {
        for (j, q) in centers.iter().enumerate() {
            out[(i, j)] = mq_value((p - q).norm(), c);
        }
    }
    out
}

/// x- and y-derivative basis matrices at the query points.
pub fn basis_gradient_matrices(
    points: &[Point2<f64>],
    centers: &[Point2<f64>],
    c: f64,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut bx = DMatrix::zeros(points.len(), centers.len());
    let mut by = DMatrix::zeros(points.len(), centers.len());
    for (i, p) in points.iter().enumerate() {
        for (j, q) in centers.iter().enumerate() {
            let d = p - q;
            let (gx, gy) = mq_gradient(d.x, d.y, c);
            bx[(i, j)] = gx;
            by[(i, j)] = gy;
        }
    }
    (bx, by)
}
