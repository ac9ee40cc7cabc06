#![allow(dead_code)]

use frame_lab::VectorSystem;
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Systems with `1 ≤ d ≤ max_d`, `1 ≤ N ≤ max_n` and coordinates in `[-2, 2]`.
pub fn system(max_d: usize, max_n: usize) -> impl Strategy<Value = VectorSystem> {
    (1..=max_d, 1..=max_n).prop_flat_map(|(d, n)| {
        proptest::collection::vec(-2.0..2.0f64, d * n).prop_map(move |c| VectorSystem::from_flat(d, c).unwrap())
    })
}

/// Systems whose vectors all have squared norm at least `c1`.
pub fn feasible_system(d: usize, n: usize, c1: f64, c2: f64) -> impl Strategy<Value = VectorSystem> {
    (
        proptest::collection::vec(-1.0..1.0f64, d * n),
        proptest::collection::vec(c1..=c2, n),
    )
        .prop_filter_map("zero direction", move |(dirs, norms)| {
            let mut coords = Vec::with_capacity(d * n);
            for (v, c) in dirs.chunks(d).zip(&norms) {
                let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if len < 1e-3 {
                    return None;
                }
                coords.extend(v.iter().map(|x| x / len * c.sqrt()));
            }
            Some(VectorSystem::from_flat(d, coords).unwrap())
        })
}

/// Random orthogonal `d × d` matrix from the QR factorization of `entries`.
pub fn orthogonal(d: usize) -> impl Strategy<Value = DMatrix<f64>> {
    proptest::collection::vec(-1.0..1.0f64, d * d)
        .prop_filter_map("singular", move |e| {
            let m = DMatrix::from_row_slice(d, d, &e);
            (m.determinant().abs() > 1e-3).then(|| m.qr().q())
        })
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
