mod common;

use common::{rel_close, system};
use frame_lab::frame::{frame_bounds, frame_operator, frame_potential, gram_matrix, tightness_defect};
use frame_lab::untf::{build_untf, BuildRequest};
use frame_lab::VectorSystem;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn matrix(vs: &VectorSystem) -> DMatrix<f64> {
    DMatrix::from_row_slice(vs.count(), vs.dim(), vs.as_flat())
}

/// Rank from singular values of `L`, independent of the eigen-decomposition used by the library.
fn rank(vs: &VectorSystem) -> usize {
    let sv = matrix(vs).singular_values();
    let largest = sv.max();
    sv.iter().filter(|&&s| s * s >= 1e-10 * (largest * largest).max(1.0)).count()
}

/// Keeps the first `d - 1` coordinates, so the span is a proper subspace.
fn flattened(vs: &VectorSystem) -> VectorSystem {
    let d = vs.dim();
    let coords = vs.as_flat().iter().enumerate().map(|(i, &x)| if i % d == d - 1 { 0.0 } else { x }).collect();
    VectorSystem::from_flat(d, coords).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn potential_duality(vs in system(6, 12)) {
        let fp = frame_potential(&vs);
        prop_assert!((fp - gram_matrix(&vs).hs_norm2()).abs() <= 1e-9 * fp);
        prop_assert!((fp - frame_operator(&vs).hs_norm2()).abs() <= 1e-9 * fp);
        // ‖L Lᵀ‖² computed by an independent matrix product
        let l = matrix(&vs);
        let g = &l * l.transpose();
        prop_assert!((fp - g.norm_squared()).abs() <= 1e-9 * fp);
    }

    #[test]
    fn trace_is_total_squared_norm(vs in system(6, 12)) {
        let total: f64 = vs.as_flat().iter().map(|x| x * x).sum();
        prop_assert!((frame_operator(&vs).trace() - total).abs() <= 1e-10 * total);
    }

    #[test]
    fn gram_and_operator_share_nonzero_spectrum(vs in system(6, 12)) {
        let mut g = gram_matrix(&vs).eigenvalues();
        let mut a = frame_operator(&vs).eigenvalues();
        let scale = g.last().copied().unwrap_or(0.0).max(a.last().copied().unwrap_or(0.0));
        let k = vs.dim().min(vs.count());
        g.reverse();
        a.reverse();
        for i in 0..k {
            prop_assert!((g[i] - a[i]).abs() <= 1e-8 * scale, "{g:?} vs {a:?}");
        }
        prop_assert!(g[k..].iter().all(|x| x.abs() <= 1e-8 * scale));
        prop_assert!(a[k..].iter().all(|x| x.abs() <= 1e-8 * scale));
    }

    #[test]
    fn gram_is_symmetric_psd(vs in system(6, 12)) {
        let g = gram_matrix(&vs);
        let e = g.entries();
        prop_assert_eq!(e, &e.transpose());
        let scale = e.norm();
        prop_assert!(g.eigenvalues().iter().all(|&l| l >= -1e-10 * scale));
        prop_assert!(rank(&vs) <= vs.dim());
    }

    #[test]
    fn positive_lower_bound_iff_spanning(vs in system(5, 10), flatten in any::<bool>()) {
        let vs = if flatten && vs.dim() > 1 { flattened(&vs) } else { vs };
        let (lower, upper) = frame_bounds(&vs);
        prop_assert!(lower <= upper);
        let spans = rank(&vs) == vs.dim();
        prop_assert_eq!(lower > 0.0, spans);
        prop_assert_eq!(frame_operator(&vs).rank() == vs.dim(), spans);
    }

    #[test]
    fn unit_norm_potential_lower_bound(vs in system(5, 10)) {
        prop_assume!(vs.norms2().iter().all(|&c| c > 1e-6));
        let rows: Vec<Vec<f64>> = vs.vectors().map(|v| {
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / len).collect()
        }).collect();
        let unit = VectorSystem::new(vs.dim(), &rows).unwrap();
        let (n, d) = (unit.count() as f64, unit.dim() as f64);
        let floor = n * n / d;
        let fp = frame_potential(&unit);
        prop_assert!(fp >= floor - 1e-9 * floor);
        // FP − N²/d = ‖A − (N/d) I‖² = (defect · N/d)²
        let defect = tightness_defect(&unit).unwrap();
        let excess = (defect * n / d).powi(2);
        prop_assert!((fp - floor - excess).abs() <= 1e-9 * fp);
    }
}

#[test]
fn tight_frames_attain_the_potential_floor() {
    for (d, n) in [(2, 3), (2, 5), (3, 4), (3, 7), (4, 9)] {
        let vs = build_untf(&BuildRequest::new(d, n, 1.0)).unwrap();
        let floor = (n * n) as f64 / d as f64;
        let fp = frame_potential(&vs);
        assert!(fp - floor <= 1e-8 * floor);
        assert!(tightness_defect(&vs).unwrap() <= 1e-6);
    }
    let skewed = VectorSystem::new(2, &[vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!(frame_potential(&skewed) - 4.5 > 1e-8 * 4.5);
    assert!(tightness_defect(&skewed).unwrap() > 1e-6);
    assert!(rel_close(frame_potential(&skewed), 5.0, 1e-15));
}
