//! Boundary-element operators for the warping problem.
//!
//! The variable-coefficient torsion equation is replaced by a Poisson
//! equation with an unknown source expanded in multiquadrics. Everything the
//! nonlinear driver needs is condensed here into dense operators over the N
//! boundary midpoints and M interior collocation points:
//!
//! * boundary kernels H, G and the source influence F,
//! * the reduction phi = S a + s of the boundary values with the Neumann
//!   data imposed and the free constant fixed by sum(phi) = 0,
//! * interior evaluation operators for the warping function and its first
//!   and second derivatives.

pub mod kernels;

use nalgebra::{DMatrix, DVector, Point2, Vector2};
use rayon::prelude::*;

use crate::error::{Result, TorsionError};
use crate::geometry::{BoundaryMesh, CollocationSet, SectionShape};
use crate::rbf;
use kernels::{integrate_element, self_g, KernelIntegrals};

/// Kernel family order used throughout: value, d/dx, d/dy, d2/dx2, d2/dy2.
pub const FAM_VAL: usize = 0;
pub const FAM_DX: usize = 1;
pub const FAM_DY: usize = 2;
pub const FAM_DXX: usize = 3;
pub const FAM_DYY: usize = 4;

/// Assembled boundary and field operators for one discretization.
pub struct BemOperators {
    /// N x N double-layer matrix (zero diagonal on straight elements).
    pub h_tilde: DMatrix<f64>,
    /// H = H_tilde - I/2.
    pub h: DMatrix<f64>,
    /// N x N single-layer matrix with the exact log self-integral.
    pub g: DMatrix<f64>,
    /// N x M source influence matrix.
    pub f: DMatrix<f64>,
    /// Neumann data y n_x - x n_y at the element midpoints.
    pub beta3: DVector<f64>,
    /// N x M particular solution values at boundary midpoints.
    pub u_hat: DMatrix<f64>,
    /// N x M particular solution normal derivatives at boundary midpoints.
    pub u_hat_n: DMatrix<f64>,
    /// M x N field kernels per family.
    pub field_h: [DMatrix<f64>; 5],
    pub field_g: [DMatrix<f64>; 5],
    /// M x M field source influence per family.
    pub field_f: [DMatrix<f64>; 5],
    /// Boundary integrals of u_hat_n per center, for the boundary-only
    /// torsional moment.
    pub moment_weights: DVector<f64>,
    pub quad_order: usize,
}

/// Boundary reduction phi = S a + s under the gauge sum(phi) = 0.
pub struct ReducedBoundary {
    pub s_mat: DMatrix<f64>,
    pub s_vec: DVector<f64>,
    /// Compatibility defect of the pure-Neumann solve for the inhomogeneous
    /// part (multiplier of the constant mode).
    pub defect_s: f64,
    /// Per-source-column compatibility defects.
    pub defect_f: DVector<f64>,
}

/// Everything needed to solve and evaluate warping fields.
pub struct BemSystem {
    pub ops: BemOperators,
    pub reduced: ReducedBoundary,
    /// Collocation-point field maps phi_kl = D[fam] a + e[fam].
    pub d: [DMatrix<f64>; 5],
    pub e: [DVector<f64>; 5],
}

/// Assemble all kernel operators for a mesh / collocation pair.
pub fn assemble(
    mesh: &BoundaryMesh,
    colloc: &CollocationSet,
    c: f64,
    quad_order: usize,
) -> Result<BemOperators> {
    let n = mesh.len();
    let m = colloc.len();
    if n == 0 {
        return Err(TorsionError::InvalidShape("empty boundary mesh".into()));
    }
    for (i, el) in mesh.elements.iter().enumerate() {
        if el.length <= 0.0 {
            return Err(TorsionError::DegenerateEdge {
                index: i,
                x0: el.start.x,
                y0: el.start.y,
                x1: el.end.x,
                y1: el.end.y,
            });
        }
    }

    // Boundary kernels, row-parallel.
    let boundary_rows: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
        .into_par_iter()
        .map(|mi| {
            let p = mesh.elements[mi].midpoint;
            let mut h_row = vec![0.0; n];
            let mut g_row = vec![0.0; n];
            for (k, el) in mesh.elements.iter().enumerate() {
                if k == mi {
                    h_row[k] = 0.0;
                    g_row[k] = self_g(el.length);
                } else {
                    let mut ker = KernelIntegrals::default();
                    integrate_element(&p, &el.start, &el.end, &el.normal, quad_order, &mut ker);
                    h_row[k] = ker.h_val;
                    g_row[k] = ker.g_val;
                }
            }
            (h_row, g_row)
        })
        .collect();
    let mut h_tilde = DMatrix::zeros(n, n);
    let mut g = DMatrix::zeros(n, n);
    for (mi, (h_row, g_row)) in boundary_rows.into_iter().enumerate() {
        for k in 0..n {
            h_tilde[(mi, k)] = h_row[k];
            g[(mi, k)] = g_row[k];
        }
    }
    let mut h = h_tilde.clone();
    for i in 0..n {
        h[(i, i)] -= 0.5;
    }

    let beta3 = DVector::from_iterator(
        n,
        mesh.elements
            .iter()
            .map(|el| el.midpoint.y * el.normal.x - el.midpoint.x * el.normal.y),
    );

    // Particular solution traces on the boundary.
    let mut u_hat = DMatrix::zeros(n, m);
    let mut u_hat_n = DMatrix::zeros(n, m);
    for (k, el) in mesh.elements.iter().enumerate() {
        for j in 0..m {
            let d = el.midpoint - colloc.points[j];
            let r = d.norm();
            u_hat[(k, j)] = rbf::mq_particular(r, c);
            u_hat_n[(k, j)] = rbf::mq_particular_deriv_over_r(r, c) * d.dot(&el.normal);
        }
    }

    // F = u_hat / 2 - H_tilde u_hat + G u_hat_n  (boundary collocation).
    let f = u_hat.scale(0.5) - &h_tilde * &u_hat + &g * &u_hat_n;

    // Field kernels at the collocation points, row-parallel.
    let min_clearances: Vec<(f64, usize)> = colloc
        .points
        .iter()
        .map(|p| {
            mesh.elements
                .iter()
                .enumerate()
                .map(|(k, el)| {
                    let ab = el.end - el.start;
                    let t = ((p - el.start).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
                    ((p - (el.start + ab * t)).norm(), k)
                })
                .fold((f64::INFINITY, 0), |acc, v| if v.0 < acc.0 { v } else { acc })
        })
        .collect();
    for (i, (d, k)) in min_clearances.iter().enumerate() {
        if *d < colloc.inset * (1.0 - 1e-12) {
            log::warn!(
                "collocation point {i} at ({:.4}, {:.4}) lies {d:.4} from boundary element {k}, \
                 closer than the inset {}; the kernels of that pair are nearly singular",
                colloc.points[i].x,
                colloc.points[i].y,
                colloc.inset
            );
        }
    }

    let field_rows: Vec<[Vec<f64>; 10]> = (0..m)
        .into_par_iter()
        .map(|i| {
            let p = colloc.points[i];
            let mut rows: [Vec<f64>; 10] = Default::default();
            for r in rows.iter_mut() {
                *r = vec![0.0; n];
            }
            for (k, el) in mesh.elements.iter().enumerate() {
                let mut ker = KernelIntegrals::default();
                integrate_element(&p, &el.start, &el.end, &el.normal, quad_order, &mut ker);
                rows[0][k] = ker.h_val;
                rows[1][k] = ker.h_x;
                rows[2][k] = ker.h_y;
                rows[3][k] = ker.h_xx;
                rows[4][k] = ker.h_yy;
                rows[5][k] = ker.g_val;
                rows[6][k] = ker.g_x;
                rows[7][k] = ker.g_y;
                rows[8][k] = ker.g_xx;
                rows[9][k] = ker.g_yy;
            }
            rows
        })
        .collect();
    let mut field_h: [DMatrix<f64>; 5] = std::array::from_fn(|_| DMatrix::zeros(m, n));
    let mut field_g: [DMatrix<f64>; 5] = std::array::from_fn(|_| DMatrix::zeros(m, n));
    for (i, rows) in field_rows.into_iter().enumerate() {
        for fam in 0..5 {
            for k in 0..n {
                field_h[fam][(i, k)] = rows[fam][k];
                field_g[fam][(i, k)] = rows[fam + 5][k];
            }
        }
    }

    // Particular solution and derivatives between collocation points.
    let mut v: [DMatrix<f64>; 5] = std::array::from_fn(|_| DMatrix::zeros(m, m));
    for i in 0..m {
        for j in 0..m {
            let d = colloc.points[i] - colloc.points[j];
            let r = d.norm();
            v[FAM_VAL][(i, j)] = rbf::mq_particular(r, c);
            let (gx, gy) = rbf::mq_particular_grad(d.x, d.y, c);
            v[FAM_DX][(i, j)] = gx;
            v[FAM_DY][(i, j)] = gy;
            let (hxx, _, hyy) = rbf::mq_particular_hessian(d.x, d.y, c);
            v[FAM_DXX][(i, j)] = hxx;
            v[FAM_DYY][(i, j)] = hyy;
        }
    }
    let field_f: [DMatrix<f64>; 5] = std::array::from_fn(|fam| {
        &v[fam] + &field_g[fam] * &u_hat_n - &field_h[fam] * &u_hat
    });

    // Boundary integrals of u_hat_n per center (moment weights).
    let moment_weights = DVector::from_iterator(
        m,
        (0..m).map(|j| {
            let center = colloc.points[j];
            mesh.elements
                .iter()
                .map(|el| integrate_u_hat_n(&center, &el.start, &el.end, &el.normal, c, quad_order))
                .sum::<f64>()
        }),
    );

    Ok(BemOperators {
        h_tilde,
        h,
        g,
        f,
        beta3,
        u_hat,
        u_hat_n,
        field_h,
        field_g,
        field_f,
        moment_weights,
        quad_order,
    })
}

fn integrate_u_hat_n(
    center: &Point2<f64>,
    a: &Point2<f64>,
    b: &Point2<f64>,
    n: &Vector2<f64>,
    c: f64,
    order: usize,
) -> f64 {
    let len = (b - a).norm();
    let dist = {
        let ab = b - a;
        let t = ((center - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
        (center - (a + ab * t)).norm()
    };
    if dist < 2.0 * len && len > 1e-14 {
        let mid = Point2::from((a.coords + b.coords) / 2.0);
        return integrate_u_hat_n(center, a, &mid, n, c, order)
            + integrate_u_hat_n(center, &mid, b, n, c, order);
    }
    let rule = kernels::gauss_rule(order);
    let half = len / 2.0;
    let mid = (a.coords + b.coords) / 2.0;
    let dir = (b - a) / len;
    let mut acc = 0.0;
    for &(t, w) in rule {
        let xi = Point2::from(mid + dir * (half * t));
        let d = xi - center;
        acc += w * half * rbf::mq_particular_deriv_over_r(d.norm(), c) * d.dot(n);
    }
    acc
}

/// Express the boundary values in terms of the source coefficients,
/// phi = S a + s, with the Neumann data eliminated and the free constant of
/// the pure-Neumann problem fixed by the gauge sum(phi) = 0.
///
/// The gauge is imposed through a bordered system; the multiplier column
/// absorbs the compatibility defect of incompatible source vectors, and the
/// defects are reported for diagnostics.
pub fn reduce_boundary(ops: &BemOperators) -> Result<ReducedBoundary> {
    let n = ops.h.nrows();
    let m = ops.f.ncols();
    let mut bordered = DMatrix::zeros(n + 1, n + 1);
    bordered.view_mut((0, 0), (n, n)).copy_from(&ops.h);
    for i in 0..n {
        bordered[(i, n)] = 1.0;
        bordered[(n, i)] = 1.0;
    }
    let lu = bordered.lu();
    let u_diag: Vec<f64> = (0..n + 1).map(|i| lu.u()[(i, i)].abs()).collect();
    let (u_min, u_max) = u_diag
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if u_min <= 1e-14 * u_max {
        return Err(TorsionError::SingularSystem {
            system: "boundary reduction",
            cond: u_max / u_min.max(f64::MIN_POSITIVE),
        });
    }

    let mut rhs = DMatrix::zeros(n + 1, m + 1);
    let g_beta = &ops.g * &ops.beta3;
    for i in 0..n {
        rhs[(i, 0)] = g_beta[i];
        for j in 0..m {
            rhs[(i, j + 1)] = -ops.f[(i, j)];
        }
    }
    let sol = lu.solve(&rhs).ok_or(TorsionError::SingularSystem {
        system: "boundary reduction",
        cond: f64::INFINITY,
    })?;
    let s_vec = DVector::from_iterator(n, (0..n).map(|i| sol[(i, 0)]));
    let mut s_mat = DMatrix::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            s_mat[(i, j)] = sol[(i, j + 1)];
        }
    }
    let defect_s = sol[(n, 0)];
    let defect_f = DVector::from_iterator(m, (0..m).map(|j| sol[(n, j + 1)]));
    Ok(ReducedBoundary {
        s_mat,
        s_vec,
        defect_s,
        defect_f,
    })
}

impl BemSystem {
    /// Assemble operators, reduce the boundary, and precompute the
    /// collocation-point field maps.
    pub fn build(
        mesh: &BoundaryMesh,
        colloc: &CollocationSet,
        c: f64,
        quad_order: usize,
    ) -> Result<Self> {
        let ops = assemble(mesh, colloc, c, quad_order)?;
        let reduced = reduce_boundary(&ops)?;
        let d: [DMatrix<f64>; 5] = std::array::from_fn(|fam| {
            &ops.field_f[fam] + &ops.field_h[fam] * &reduced.s_mat
        });
        let e: [DVector<f64>; 5] = std::array::from_fn(|fam| {
            &ops.field_h[fam] * &reduced.s_vec - &ops.field_g[fam] * &ops.beta3
        });
        Ok(BemSystem { ops, reduced, d, e })
    }
}

/// Warping solution for one effective-shear field.
#[derive(Debug, Clone)]
pub struct WarpingSolution {
    /// Source coefficients of the analog equation.
    pub a: DVector<f64>,
    /// Boundary warping values (gauge: they sum to zero).
    pub phi_boundary: DVector<f64>,
    /// Warping and first derivatives at the collocation points.
    pub phi: DVector<f64>,
    pub phi_x: DVector<f64>,
    pub phi_y: DVector<f64>,
    /// Max-norm residual of the collocation system and of its right side.
    pub residual_inf: f64,
    pub rhs_inf: f64,
}

/// Solve the collocated torsion equation for the source coefficients given
/// the effective shear modulus and its gradient at the collocation points,
/// then recover boundary and interior warping values.
///
/// `phi_basis` must be the multiquadric value matrix over the collocation
/// points (same centers, same shape parameter as the assembly): by the
/// analog equation the warping Laplacian at a collocation point is exactly
/// the expansion value there.
pub fn solve_warping(
    sys: &BemSystem,
    phi_basis: &DMatrix<f64>,
    colloc: &CollocationSet,
    g_eff: &[f64],
    grad_g_eff: &[(f64, f64)],
) -> Result<WarpingSolution> {
    let m = colloc.len();
    assert_eq!(g_eff.len(), m);
    assert_eq!(grad_g_eff.len(), m);
    for (i, &g) in g_eff.iter().enumerate() {
        if !g.is_finite() || g <= 0.0 {
            return Err(TorsionError::NonPositiveShear { index: i });
        }
    }
    let dx = &sys.d[FAM_DX];
    let dy = &sys.d[FAM_DY];
    let mut k = DMatrix::zeros(m, m);
    for col in 0..m {
        for row in 0..m {
            k[(row, col)] = g_eff[row] * phi_basis[(row, col)]
                + grad_g_eff[row].0 * dx[(row, col)]
                + grad_g_eff[row].1 * dy[(row, col)];
        }
    }
    let mut rhs = DVector::zeros(m);
    for j in 0..m {
        let (gx, gy) = grad_g_eff[j];
        rhs[j] = colloc.points[j].y * gx - colloc.points[j].x * gy
            - gx * sys.e[FAM_DX][j]
            - gy * sys.e[FAM_DY][j];
    }
    let lu = k.clone().lu();
    let a = match lu.solve(&rhs) {
        Some(a) => a,
        None => {
            let u = lu.u();
            let (lo, hi) = (0..m)
                .map(|i| u[(i, i)].abs())
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
            return Err(TorsionError::SingularSystem {
                system: "warping collocation",
                cond: hi / lo.max(f64::MIN_POSITIVE),
            });
        }
    };
    let residual_inf = (&k * &a - &rhs).amax();
    let rhs_inf = rhs.amax();
    let phi_boundary = &sys.reduced.s_mat * &a + &sys.reduced.s_vec;
    let phi = &sys.d[FAM_VAL] * &a + &sys.e[FAM_VAL];
    let phi_x = dx * &a + &sys.e[FAM_DX];
    let phi_y = dy * &a + &sys.e[FAM_DY];
    Ok(WarpingSolution {
        a,
        phi_boundary,
        phi,
        phi_x,
        phi_y,
        residual_inf,
        rhs_inf,
    })
}

/// Warping function and derivatives at one interior query point.
#[derive(Debug, Clone, Copy)]
pub struct FieldEval {
    pub point: Point2<f64>,
    pub phi: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub phi_xx: f64,
    pub phi_yy: f64,
    /// Set when the point is closer to the boundary than one element length;
    /// kernel quadrature degrades there.
    pub low_accuracy: bool,
}

/// Evaluate the warping representation at arbitrary strictly interior points.
pub fn eval_fields(
    shape: &SectionShape,
    mesh: &BoundaryMesh,
    sys: &BemSystem,
    sol: &WarpingSolution,
    colloc: &CollocationSet,
    c: f64,
    points: &[Point2<f64>],
) -> Result<Vec<FieldEval>> {
    for p in points {
        if !shape.contains(p) {
            return Err(TorsionError::PointOutsideDomain { x: p.x, y: p.y });
        }
    }
    // Boundary densities folded once: phi_kl(p) = sum_j a_j uhat_kl(p - x_j)
    //   + Hrow_kl (phi_b - Uhat a) + Grow_kl (Uhat_n a - beta3)
    let q_h = &sol.phi_boundary - &sys.ops.u_hat * &sol.a;
    let q_g = &sys.ops.u_hat_n * &sol.a - &sys.ops.beta3;
    let order = sys.ops.quad_order;
    let evals: Vec<FieldEval> = points
        .par_iter()
        .map(|p| {
            let mut acc = [0.0f64; 5];
            for (k, el) in mesh.elements.iter().enumerate() {
                let mut ker = KernelIntegrals::default();
                integrate_element(p, &el.start, &el.end, &el.normal, order, &mut ker);
                acc[FAM_VAL] += ker.h_val * q_h[k] + ker.g_val * q_g[k];
                acc[FAM_DX] += ker.h_x * q_h[k] + ker.g_x * q_g[k];
                acc[FAM_DY] += ker.h_y * q_h[k] + ker.g_y * q_g[k];
                acc[FAM_DXX] += ker.h_xx * q_h[k] + ker.g_xx * q_g[k];
                acc[FAM_DYY] += ker.h_yy * q_h[k] + ker.g_yy * q_g[k];
            }
            for (j, center) in colloc.points.iter().enumerate() {
                let a_j = sol.a[j];
                if a_j == 0.0 {
                    continue;
                }
                let d = p - center;
                let r = d.norm();
                acc[FAM_VAL] += a_j * rbf::mq_particular(r, c);
                let (gx, gy) = rbf::mq_particular_grad(d.x, d.y, c);
                acc[FAM_DX] += a_j * gx;
                acc[FAM_DY] += a_j * gy;
                let (hxx, _, hyy) = rbf::mq_particular_hessian(d.x, d.y, c);
                acc[FAM_DXX] += a_j * hxx;
                acc[FAM_DYY] += a_j * hyy;
            }
            FieldEval {
                point: *p,
                phi: acc[FAM_VAL],
                phi_x: acc[FAM_DX],
                phi_y: acc[FAM_DY],
                phi_xx: acc[FAM_DXX],
                phi_yy: acc[FAM_DYY],
                low_accuracy: shape.distance_to_boundary(p) < mesh.mean_element_length,
            }
        })
        .collect();
    Ok(evals)
}

/// Warping gradient recovered on the boundary from the solved traces.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryGradient {
    pub point: Point2<f64>,
    pub phi: f64,
    pub grad: Vector2<f64>,
    /// False when the smooth run is too short to difference tangentially.
    pub ok: bool,
}

/// Recover grad(phi) at the element midpoints: the normal part is the imposed
/// Neumann data, the tangential part is differenced along each smooth
/// boundary run.
pub fn boundary_gradients(mesh: &BoundaryMesh, sol: &WarpingSolution) -> Vec<BoundaryGradient> {
    let n = mesh.len();
    // arclength position of each midpoint
    let mut s = vec![0.0; n];
    let mut acc = 0.0;
    for (i, el) in mesh.elements.iter().enumerate() {
        s[i] = acc + el.length / 2.0;
        acc += el.length;
    }
    let perimeter = acc;
    // group elements into smooth runs
    let runs: Vec<Vec<usize>> = if mesh.smooth_closed {
        vec![(0..n).collect()]
    } else {
        let mut runs = Vec::new();
        let mut current = vec![0usize];
        for i in 1..n {
            if mesh.elements[i].edge == mesh.elements[current[0]].edge {
                current.push(i);
            } else {
                runs.push(std::mem::take(&mut current));
                current.push(i);
            }
        }
        runs.push(current);
        runs
    };

    let mut out: Vec<BoundaryGradient> = mesh
        .elements
        .iter()
        .map(|el| BoundaryGradient {
            point: el.midpoint,
            phi: 0.0,
            grad: Vector2::zeros(),
            ok: false,
        })
        .collect();

    let deriv3 = |s0: f64, s1: f64, s2: f64, f0: f64, f1: f64, f2: f64, at: f64| {
        // derivative of the quadratic through three samples
        let d0 = f0 * (2.0 * at - s1 - s2) / ((s0 - s1) * (s0 - s2));
        let d1 = f1 * (2.0 * at - s0 - s2) / ((s1 - s0) * (s1 - s2));
        let d2 = f2 * (2.0 * at - s0 - s1) / ((s2 - s0) * (s2 - s1));
        d0 + d1 + d2
    };

    for run in &runs {
        let l = run.len();
        if l < 3 {
            continue;
        }
        for (pos, &i) in run.iter().enumerate() {
            let (i0, i1, i2) = if mesh.smooth_closed {
                (
                    run[(pos + l - 1) % l],
                    i,
                    run[(pos + 1) % l],
                )
            } else if pos == 0 {
                (run[0], run[1], run[2])
            } else if pos == l - 1 {
                (run[l - 3], run[l - 2], run[l - 1])
            } else {
                (run[pos - 1], i, run[pos + 1])
            };
            // unwrap periodic arclength so the three samples are monotone
            let s0 = s[i0];
            let mut s1 = s[i1];
            let mut s2 = s[i2];
            if mesh.smooth_closed {
                if s1 < s0 {
                    s1 += perimeter;
                }
                if s2 < s1 {
                    s2 += perimeter;
                }
            }
            let mut at = s[i];
            if mesh.smooth_closed && at < s0 {
                at += perimeter;
            }
            let phi_t = deriv3(
                s0,
                s1,
                s2,
                sol.phi_boundary[i0],
                sol.phi_boundary[i1],
                sol.phi_boundary[i2],
                at,
            );
            let el = &mesh.elements[i];
            let tangent = (el.end - el.start) / el.length;
            let phi_n = el.midpoint.y * el.normal.x - el.midpoint.x * el.normal.y;
            out[i] = BoundaryGradient {
                point: el.midpoint,
                phi: sol.phi_boundary[i],
                grad: el.normal * phi_n + tangent * phi_t,
                ok: true,
            };
        }
    }
    out
}
