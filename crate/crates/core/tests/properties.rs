use biqo_core::linalg::C64;
use biqo_core::{
    c1_closed, c_inf_closed, disturbance_curve, global_fidelity_closed, helstrom_error,
    helstrom_error_closed, hermitian_eigen, local_fidelity_closed, make_ensemble,
    orthonormal_columns_from_params, partial_trace, tensor_product, trace_norm,
    von_neumann_entropy, ComplexMatrix, HermitianMatrix, Keep,
};
use proptest::prelude::*;

fn hermitian(n: usize, v: &[f64]) -> HermitianMatrix {
    let data = v.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    let a = ComplexMatrix::new(n, n, data).unwrap();
    let sum: Vec<C64> = a
        .data()
        .iter()
        .zip(a.adjoint().data())
        .map(|(p, q)| (p + q) * 0.5)
        .collect();
    HermitianMatrix::new(ComplexMatrix::new(n, n, sum).unwrap()).unwrap()
}

/// `V V^H / tr`, a full-rank-ish density matrix.
fn density(n: usize, v: &[f64]) -> HermitianMatrix {
    let data = v.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    let a = ComplexMatrix::new(n, n, data).unwrap();
    let m = a.matmul(&a.adjoint()).unwrap();
    let tr = m.trace().re;
    HermitianMatrix::new(m.scale(C64::new(1.0 / tr, 0.0))).unwrap()
}

fn entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstructs(v in entries(4)) {
        let h = hermitian(4, &v);
        let eig = hermitian_eigen(&h).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(eig.vectors.is_isometry());
        let mut diag = ComplexMatrix::zeros(4, 4);
        for (k, &l) in eig.values.iter().enumerate() {
            diag.set(k, k, C64::new(l, 0.0));
        }
        let back = eig.vectors.matmul(&diag).unwrap().matmul(&eig.vectors.adjoint()).unwrap();
        prop_assert!(back.max_abs_diff(h.as_matrix()) < 1e-10);
    }

    #[test]
    fn trace_norm_triangle(a in entries(3), b in entries(3)) {
        let (a, b) = (hermitian(3, &a), hermitian(3, &b));
        let lhs = trace_norm(&(&a + &b)).unwrap();
        prop_assert!(lhs <= trace_norm(&a).unwrap() + trace_norm(&b).unwrap() + 1e-10);
    }

    #[test]
    fn entropy_unitarily_invariant(v in entries(3), u in prop::collection::vec(-1.0f64..1.0, 18)) {
        let rho = density(3, &v);
        let unitary = orthonormal_columns_from_params(&u, 3, 3).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        let t = von_neumann_entropy(&rho.conjugate_by(&unitary).unwrap()).unwrap();
        prop_assert!((s - t).abs() < 1e-9);
        prop_assert!((0.0..=3f64.log2() + 1e-12).contains(&s));
    }

    #[test]
    fn partial_trace_of_product(a in entries(2), b in entries(3)) {
        let (ra, rb) = (density(2, &a), density(3, &b));
        let joint = tensor_product(ra.as_matrix(), rb.as_matrix());
        let joint = HermitianMatrix::new(joint).unwrap();
        let back_a = partial_trace(&joint, Keep::First, (2, 3)).unwrap();
        let back_b = partial_trace(&joint, Keep::Second, (2, 3)).unwrap();
        prop_assert!(back_a.as_matrix().max_abs_diff(ra.as_matrix()) < 1e-12);
        prop_assert!(back_b.as_matrix().max_abs_diff(rb.as_matrix()) < 1e-12);
    }

    #[test]
    fn isometry_ignores_column_scale(u in prop::collection::vec(-1.0f64..1.0, 16), k in 0.1f64..10.0) {
        let Ok(a) = orthonormal_columns_from_params(&u, 4, 2) else { return Ok(()) };
        let scaled: Vec<f64> = u.iter().map(|p| p * k).collect();
        let b = orthonormal_columns_from_params(&scaled, 4, 2).unwrap();
        prop_assert!(a.is_isometry());
        prop_assert!(a.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn measures_in_range(x in 0.0f64..=1.0) {
        let pe = helstrom_error_closed(x);
        prop_assert!((helstrom_error(&make_ensemble(x).unwrap()) - pe).abs() < 1e-12);
        prop_assert!((0.0..=0.5).contains(&pe));
        prop_assert!(c1_closed(x) <= c_inf_closed(x) + 1e-15);
        for f in [global_fidelity_closed(x), local_fidelity_closed(x)] {
            prop_assert!((0.5..=1.0 + 1e-12).contains(&f));
        }
    }

    #[test]
    fn disturbance_falls_with_eve_error(x in 0.01f64..0.99, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let pe = helstrom_error_closed(x);
        let (lo, hi) = if s < t { (s, t) } else { (t, s) };
        let p = |u: f64| pe + (0.5 - pe) * u;
        let d_lo = disturbance_curve(x, p(lo)).unwrap();
        let d_hi = disturbance_curve(x, p(hi)).unwrap();
        prop_assert!(d_hi <= d_lo + 1e-12);
        prop_assert!(d_hi >= 0.0);
    }
}
