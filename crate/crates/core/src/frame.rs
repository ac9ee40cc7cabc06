//! Vector systems and their quadratic summaries.
//!
//! A [`VectorSystem`] holds `N` vectors of `R^d`, stored as the rows of the
//! `N × d` matrix `L`. The Gram matrix is `G = L Lᵀ` (`N × N`) and the frame
//! operator is `A = Lᵀ L = Σ v_i v_iᵀ` (`d × d`). Both have the same squared
//! Hilbert-Schmidt norm, the frame potential `Σ_{i,j} ⟨v_i, v_j⟩²`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{FrameError, Result};

/// Relative frame-operator defect at or below which a system counts as tight.
pub const DEFAULT_TIGHT_TOL: f64 = 1e-8;

/// Eigenvalues below `RANK_REL_TOL * max(λ_max, 1)` are treated as zero.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Above this many terms sums switch to compensated accumulation.
const PLAIN_SUM_LIMIT: usize = 64;

/// Sum in natural order; Neumaier-compensated once there are more than 64 terms.
pub(crate) fn sum(values: &[f64]) -> f64 {
    if values.len() <= PLAIN_SUM_LIMIT {
        return values.iter().sum();
    }
    let mut total = 0.0_f64;
    let mut carry = 0.0_f64;
    for &x in values {
        let t = total + x;
        if total.abs() >= x.abs() {
            carry += (total - t) + x;
        } else {
            carry += (x - t) + total;
        }
        total = t;
    }
    total + carry
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= PLAIN_SUM_LIMIT {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    } else {
        let products: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        sum(&products)
    }
}

/// `N` real vectors in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSystem {
    dim: usize,
    coords: Vec<f64>,
}

impl VectorSystem {
    /// Builds a system from explicit rows. Every row must have length `dim`
    /// and every coordinate must be finite.
    pub fn new(dim: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        if let Some((i, row)) = vectors.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(FrameError::InvalidSystem(format!(
                "vector {i} has {} coordinates, expected {dim}",
                row.len()
            )));
        }
        let coords = vectors.iter().flatten().copied().collect();
        Self::from_flat(dim, coords)
    }

    /// Builds a system from `count * dim` row-major coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::InvalidSystem("dimension must be at least 1".into()));
        }
        if coords.is_empty() {
            return Err(FrameError::InvalidSystem("system must contain at least one vector".into()));
        }
        if coords.len() % dim != 0 {
            return Err(FrameError::InvalidSystem(format!(
                "{} coordinates do not split into vectors of length {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|x| !x.is_finite()) {
            return Err(FrameError::InvalidSystem(format!(
                "coordinate {} of vector {} is not finite",
                pos % dim,
                pos / dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// Row-major coordinates.
    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.vectors().map(<[f64]>::to_vec).collect()
    }

    pub fn norm2(&self, i: usize) -> f64 {
        let v = self.vector(i);
        dot(v, v)
    }

    pub fn norms2(&self) -> Vec<f64> {
        (0..self.count()).map(|i| self.norm2(i)).collect()
    }

    /// `R = Σ |v_i|²`.
    pub fn total_norm2(&self) -> f64 {
        sum(&self.norms2())
    }

    pub(crate) fn vector_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.count() {
            Ok(())
        } else {
            Err(FrameError::IndexOutOfRange { index, count: self.count() })
        }
    }

    /// Reorders the vectors: the result's `i`-th vector is `self.vector(order[i])`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.count()];
        if order.len() != self.count() {
            return Err(FrameError::InvalidSystem("permutation has the wrong length".into()));
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for &i in order {
            self.check_index(i)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(FrameError::InvalidSystem(format!("index {i} repeated in permutation")));
            }
            coords.extend_from_slice(self.vector(i));
        }
        Ok(Self { dim: self.dim, coords })
    }

    /// Applies the `d × d` matrix `q` to every vector.
    pub fn transformed(&self, q: &DMatrix<f64>) -> Result<Self> {
        if q.nrows() != self.dim || q.ncols() != self.dim {
            return Err(FrameError::InvalidSystem(format!(
                "transform is {}x{}, expected {d}x{d}",
                q.nrows(),
                q.ncols(),
                d = self.dim
            )));
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for v in self.vectors() {
            for a in 0..self.dim {
                coords.push((0..self.dim).map(|b| q[(a, b)] * v[b]).sum());
            }
        }
        Self::from_flat(self.dim, coords)
    }
}

impl serde::Serialize for VectorSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

/// Gram matrix `G_ij = ⟨v_i, v_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: DMatrix<f64>,
}

impl GramMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// `‖G‖²_HS = Σ G_ij²`.
    pub fn hs_norm2(&self) -> f64 {
        hs_norm2(&self.entries)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigenvalues(&self.entries)
    }
}

/// Frame operator `A = Σ v_i v_iᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOperator {
    entries: DMatrix<f64>,
    trace: f64,
    tight_constant: f64,
}

impl FrameOperator {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// `tr A / d`, the only multiple of the identity `A` could equal.
    pub fn tight_constant(&self) -> f64 {
        self.tight_constant
    }

    pub fn hs_norm2(&self) -> f64 {
        hs_norm2(&self.entries)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigenvalues(&self.entries)
    }

    /// `⟨A x, x⟩ = Σ_i ⟨x, v_i⟩²`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let d = self.entries.nrows();
        let mut acc = 0.0;
        for a in 0..d {
            for b in 0..d {
                acc += x[a] * self.entries[(a, b)] * x[b];
            }
        }
        acc
    }

    /// Number of eigenvalues above the rank threshold.
    pub fn rank(&self) -> usize {
        let eig = self.eigenvalues();
        let threshold = rank_threshold(&eig);
        eig.iter().filter(|&&l| l >= threshold).count()
    }
}

fn hs_norm2(m: &DMatrix<f64>) -> f64 {
    let squares: Vec<f64> = m.iter().map(|x| x * x).collect();
    sum(&squares)
}

fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut eig: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

fn rank_threshold(sorted_eig: &[f64]) -> f64 {
    let largest = sorted_eig.last().copied().unwrap_or(0.0);
    RANK_REL_TOL * largest.max(1.0)
}

pub fn gram_matrix(vs: &VectorSystem) -> GramMatrix {
    let n = vs.count();
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let g = dot(vs.vector(i), vs.vector(j));
            entries[(i, j)] = g;
            entries[(j, i)] = g;
        }
    }
    GramMatrix { entries }
}

pub fn frame_operator(vs: &VectorSystem) -> FrameOperator {
    let d = vs.dim();
    let mut entries = DMatrix::zeros(d, d);
    let mut terms = Vec::with_capacity(vs.count());
    for a in 0..d {
        for b in a..d {
            terms.clear();
            terms.extend(vs.vectors().map(|v| v[a] * v[b]));
            let s = sum(&terms);
            entries[(a, b)] = s;
            entries[(b, a)] = s;
        }
    }
    let diagonal: Vec<f64> = (0..d).map(|a| entries[(a, a)]).collect();
    let trace = sum(&diagonal);
    FrameOperator { entries, trace, tight_constant: trace / d as f64 }
}

/// `Σ_{i,j} ⟨v_i, v_j⟩²`, summed directly over pairs.
pub fn frame_potential(vs: &VectorSystem) -> f64 {
    let n = vs.count();
    let mut terms = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let g = dot(vs.vector(i), vs.vector(j));
            terms.push(g * g);
        }
    }
    sum(&terms)
}

/// Optimal frame bounds `(A, B)`: the extreme eigenvalues of the frame
/// operator. The lower bound is reported as exactly 0 when the system does
/// not span `R^d`.
pub fn frame_bounds(vs: &VectorSystem) -> (f64, f64) {
    let eig = frame_operator(vs).eigenvalues();
    let threshold = rank_threshold(&eig);
    let lower = eig[0];
    let upper = *eig.last().unwrap();
    let lower = if lower < threshold { 0.0 } else { lower };
    (lower, upper.max(0.0))
}

/// `‖A − (tr A / d) I‖_HS / (tr A / d)`.
pub fn tightness_defect(vs: &VectorSystem) -> Result<f64> {
    let op = frame_operator(vs);
    if op.trace() <= 0.0 {
        return Err(FrameError::ZeroTrace);
    }
    let lambda = op.tight_constant();
    let d = vs.dim();
    let mut residual = op.entries().clone();
    for a in 0..d {
        residual[(a, a)] -= lambda;
    }
    Ok(hs_norm2(&residual).sqrt() / lambda)
}

pub fn is_tight(vs: &VectorSystem, tol: f64) -> Result<bool> {
    Ok(tightness_defect(vs)? <= tol)
}

/// Largest squared inner product over distinct pairs among `indices`
/// (0 when fewer than two indices are given).
pub fn max_pair_coherence2(vs: &VectorSystem, indices: &[usize]) -> f64 {
    let mut best = 0.0_f64;
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            let g = dot(vs.vector(i), vs.vector(j));
            best = best.max(g * g);
        }
    }
    best
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::VectorSystem;

    pub fn orthonormal(d: usize) -> VectorSystem {
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        VectorSystem::new(d, &rows).unwrap()
    }

    pub fn mercedes() -> VectorSystem {
        let h = 3f64.sqrt() / 2.0;
        VectorSystem::new(2, &[vec![1.0, 0.0], vec![-0.5, h], vec![-0.5, -h]]).unwrap()
    }

    pub fn square() -> VectorSystem {
        VectorSystem::new(
            2,
            &[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
        )
        .unwrap()
    }
}
