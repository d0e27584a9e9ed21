//! Fundamental-solution kernels of the Laplace operator and their element
//! integrals.
//!
//! The fundamental solution is phi* = ln(r) / 2pi. For a field point p and a
//! boundary point xi with outward normal n, writing d = p - xi, the module
//! integrates ten kernels over each straight element: the value, first and
//! second field-point derivatives of phi* ("G family") and of its normal
//! derivative at xi ("H family").
//!
//! Off-diagonal integrals use fixed-order Gauss-Legendre quadrature with
//! recursive element subdivision whenever the field point is closer than
//! twice the (sub)element length, which keeps near-singular integrals
//! accurate without special-purpose rules.

use nalgebra::{Point2, Vector2};

// Gauss-Legendre tables carry their full published digits.
#[allow(clippy::excessive_precision)]
const GL2: [(f64, f64); 2] = [
    (-5.77350269189625731e-01, 1.0),
    (5.77350269189625731e-01, 1.0),
];

#[allow(clippy::excessive_precision)]
const GL4: [(f64, f64); 4] = [
    (-8.61136311594052573e-01, 3.47854845137453683e-01),
    (-3.39981043584856257e-01, 6.52145154862546206e-01),
    (3.39981043584856257e-01, 6.52145154862546206e-01),
    (8.61136311594052573e-01, 3.47854845137453683e-01),
];

#[allow(clippy::excessive_precision)]
const GL8: [(f64, f64); 8] = [
    (-9.60289856497536176e-01, 1.01228536290376689e-01),
    (-7.96666477413626728e-01, 2.22381034453374343e-01),
    (-5.25532409916328991e-01, 3.13706645877887047e-01),
    (-1.83434642495649780e-01, 3.62683783378361768e-01),
    (1.83434642495649780e-01, 3.62683783378361768e-01),
    (5.25532409916328991e-01, 3.13706645877887047e-01),
    (7.96666477413626728e-01, 2.22381034453374343e-01),
    (9.60289856497536176e-01, 1.01228536290376689e-01),
];

#[allow(clippy::excessive_precision)]
const GL16: [(f64, f64); 16] = [
    (-9.89400934991649939e-01, 2.71524594117540374e-02),
    (-9.44575023073232600e-01, 6.22535239386477063e-02),
    (-8.65631202387831755e-01, 9.51585116824925914e-02),
    (-7.55404408355002999e-01, 1.24628971255534030e-01),
    (-6.17876244402643771e-01, 1.49595988816576764e-01),
    (-4.58016777657227370e-01, 1.69156519395002619e-01),
    (-2.81603550779258915e-01, 1.82603415044923612e-01),
    (-9.50125098376374544e-02, 1.89450610455068585e-01),
    (9.50125098376374544e-02, 1.89450610455068585e-01),
    (2.81603550779258915e-01, 1.82603415044923612e-01),
    (4.58016777657227370e-01, 1.69156519395002619e-01),
    (6.17876244402643771e-01, 1.49595988816576764e-01),
    (7.55404408355002999e-01, 1.24628971255534030e-01),
    (8.65631202387831755e-01, 9.51585116824925914e-02),
    (9.44575023073232600e-01, 6.22535239386477063e-02),
    (9.89400934991649939e-01, 2.71524594117540374e-02),
];

pub fn gauss_rule(order: usize) -> &'static [(f64, f64)] {
    match order {
        0..=2 => &GL2,
        3..=4 => &GL4,
        5..=8 => &GL8,
        _ => &GL16,
    }
}

/// Integrated kernels of one element seen from one field point.
#[derive(Debug, Clone, Copy, Default)]
pub struct KernelIntegrals {
    /// integral of phi* and its field-point derivatives
    pub g_val: f64,
    pub g_x: f64,
    pub g_y: f64,
    pub g_xx: f64,
    pub g_yy: f64,
    /// integral of d(phi*)/dn and its field-point derivatives
    pub h_val: f64,
    pub h_x: f64,
    pub h_y: f64,
    pub h_xx: f64,
    pub h_yy: f64,
}

impl KernelIntegrals {
    fn accumulate(&mut self, d: Vector2<f64>, n: &Vector2<f64>, w: f64) {
        const INV_2PI: f64 = 1.0 / (2.0 * std::f64::consts::PI);
        let r2 = d.norm_squared();
        let r4 = r2 * r2;
        let dn = d.dot(n);
        let s = w * INV_2PI;
        self.g_val += s * 0.5 * r2.ln();
        self.g_x += s * d.x / r2;
        self.g_y += s * d.y / r2;
        self.g_xx += s * (1.0 / r2 - 2.0 * d.x * d.x / r4);
        self.g_yy += s * (1.0 / r2 - 2.0 * d.y * d.y / r4);
        self.h_val += s * (-dn / r2);
        self.h_x += s * (2.0 * d.x * dn / r4 - n.x / r2);
        self.h_y += s * (2.0 * d.y * dn / r4 - n.y / r2);
        let r6 = r4 * r2;
        self.h_xx += s * (2.0 * (dn + 2.0 * n.x * d.x) / r4 - 8.0 * d.x * d.x * dn / r6);
        self.h_yy += s * (2.0 * (dn + 2.0 * n.y * d.y) / r4 - 8.0 * d.y * d.y * dn / r6);
    }
}

fn segment_distance(p: &Point2<f64>, a: &Point2<f64>, b: &Point2<f64>) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Integrate all ten kernels of the segment [a, b] with outward normal `n`
/// as seen from `p`, subdividing near the field point.
pub fn integrate_element(
    p: &Point2<f64>,
    a: &Point2<f64>,
    b: &Point2<f64>,
    n: &Vector2<f64>,
    order: usize,
    out: &mut KernelIntegrals,
) {
    integrate_recursive(p, a, b, n, gauss_rule(order), 0, out);
}

fn integrate_recursive(
    p: &Point2<f64>,
    a: &Point2<f64>,
    b: &Point2<f64>,
    n: &Vector2<f64>,
    rule: &[(f64, f64)],
    depth: usize,
    out: &mut KernelIntegrals,
) {
    let len = (b - a).norm();
    if depth < 10 && segment_distance(p, a, b) < 2.0 * len {
        let mid = Point2::from((a.coords + b.coords) / 2.0);
        integrate_recursive(p, a, &mid, n, rule, depth + 1, out);
        integrate_recursive(p, &mid, b, n, rule, depth + 1, out);
        return;
    }
    let half = len / 2.0;
    let mid = (a.coords + b.coords) / 2.0;
    let dir = (b - a) / len;
    for &(t, w) in rule {
        let xi = Point2::from(mid + dir * (half * t));
        out.accumulate(p - xi, n, w * half);
    }
}

/// Exact self-integral of phi* over a straight element of length `len`
/// collocated at its midpoint: (len / 2pi) (ln(len / 2) - 1).
pub fn self_g(len: f64) -> f64 {
    len / (2.0 * std::f64::consts::PI) * ((len / 2.0).ln() - 1.0)
}
