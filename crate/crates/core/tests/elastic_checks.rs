//! Cross-module elastic benchmarks: boundary refinement convergence and
//! invariance under collocation relabeling.

use nalgebra::DVector;
use torsolve_core::bem::{solve_warping, BemSystem};
use torsolve_core::postprocess::rectangle_torsion_constant;
use torsolve_core::rbf::{basis_matrix, build_interpolation, RbfConfig};
use torsolve_core::{
    discretize_boundary, generate_collocation, torsional_moment, BilinearCurve, MaterialModel,
    ModelOptions, SectionShape, TorsionModel,
};

/// Torsion constant of the homogeneous rectangle from a pure boundary-element
/// solve (uniform modulus, zero gradient, so the expansion source vanishes
/// and only boundary discretization error remains).
fn rectangle_j(n: usize) -> f64 {
    let shape = SectionShape::rectangle(5.0, 10.0);
    let mesh = discretize_boundary(&shape, n).unwrap();
    // fixed collocation grid across all boundary refinements
    let colloc = generate_collocation(&shape, 450, 0.1).unwrap();
    let c = 0.1;
    let sys = BemSystem::build(&mesh, &colloc, c, 8).unwrap();
    let phi_basis = basis_matrix(&colloc.points, &colloc.points, c);
    let g = 81_000.0;
    let theta = 1.0;
    let g_eff = vec![g; colloc.len()];
    let grad = vec![(0.0, 0.0); colloc.len()];
    let sol = solve_warping(&sys, &phi_basis, &colloc, &g_eff, &grad).unwrap();
    // moment from the fitted integrand carried to the boundary
    let integrand = DVector::from_iterator(
        colloc.len(),
        (0..colloc.len()).map(|i| {
            let p = colloc.points[i];
            let tau_xz = g * theta * (sol.phi_x[i] - p.y);
            let tau_yz = g * theta * (sol.phi_y[i] + p.x);
            p.x * tau_yz - p.y * tau_xz
        }),
    );
    let interp = build_interpolation(&colloc.points, &RbfConfig::default()).unwrap();
    let coeffs = interp.fit_field(&integrand);
    sys.ops.moment_weights.dot(&coeffs) / (g * theta)
}

#[test]
fn torsion_constant_error_decreases_with_boundary_refinement() {
    // The fitted-moment path carries a small fixed-M bias, so the absolute
    // error against the series constant saturates there; boundary
    // refinement is measured against the refinement limit at the same
    // collocation grid, and the finest level is additionally held against
    // the series oracle.
    let exact = rectangle_torsion_constant(5.0, 10.0);
    let reference = rectangle_j(600);
    let errs: Vec<f64> = [100usize, 200, 300]
        .iter()
        .map(|&n| (rectangle_j(n) - reference).abs() / reference)
        .collect();
    assert!(
        errs[0] > errs[1] && errs[1] > errs[2],
        "refinement errors not monotone: {errs:?}"
    );
    assert!(
        (rectangle_j(300) - exact).abs() / exact < 0.01,
        "finest level disagrees with the series value"
    );
}

#[test]
fn moment_is_invariant_under_grid_relabeling() {
    // A centrally symmetric grid maps onto itself under a 180-degree
    // rotation; as a list that is exactly the reversed ordering. The
    // assembled moment must not depend on the labeling.
    let shape = SectionShape::rectangle(5.0, 10.0);
    let curve = BilinearCurve::new(210_600.0, 0.3, 24.0, 0.0).unwrap();
    let options = ModelOptions {
        n_elements: 80,
        m_target: 98,
        ..ModelOptions::default()
    };
    let mesh = discretize_boundary(&shape, 80).unwrap();
    let colloc = generate_collocation(&shape, 98, mesh.mean_element_length).unwrap();
    let mut rotated = colloc.clone();
    rotated.points.reverse();
    for (p, q) in colloc.points.iter().zip(rotated.points.iter().rev()) {
        assert_eq!(p, q);
    }
    let theta = 2e-5;
    let forward = TorsionModel::with_discretization(
        shape.clone(),
        MaterialModel::Homogeneous(curve),
        mesh.clone(),
        colloc,
        options.clone(),
    )
    .unwrap();
    let relabeled = TorsionModel::with_discretization(
        shape,
        MaterialModel::Homogeneous(curve),
        mesh,
        rotated,
        options,
    )
    .unwrap();
    let m_a = torsional_moment(&forward, &forward.elastic_state(theta).unwrap()).unwrap();
    let m_b = torsional_moment(&relabeled, &relabeled.elastic_state(theta).unwrap()).unwrap();
    assert!(
        (m_a - m_b).abs() <= 1e-10 * m_a.abs(),
        "moment depends on point order: {m_a} vs {m_b}"
    );
}
