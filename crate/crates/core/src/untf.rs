//! Reference configurations: random feasible systems, orthogonal systems and
//! scaled unit norm tight frames.
//!
//! Tight frames with `|v_i|² = c` are produced by projected gradient descent
//! of the frame potential over the product of spheres of radius `√c`. For
//! `N ≥ d` the only local minimizers of the frame potential there are tight
//! frames, reaching the lower bound `N² c² / d`.

use crate::frame::{dot, tightness_defect, VectorSystem};
use crate::objective::NormConstraints;
use crate::rng::{stream, uniform, unit_vector};
use crate::{FrameError, Result};

pub const DEFAULT_MAX_ITERS: usize = 20_000;
pub const DEFAULT_DEFECT_TOL: f64 = 1e-8;
pub const BUILD_RESTARTS: u64 = 8;

/// Draws `N` vectors with uniformly random directions and squared norms
/// uniform in `[c1, c2]`.
pub fn random_system(dim: usize, count: usize, constraints: &NormConstraints, seed: u64) -> Result<VectorSystem> {
    if dim == 0 || count == 0 {
        return Err(FrameError::Domain("dimension and count must be at least 1".into()));
    }
    let mut rng = stream(seed);
    let mut coords = Vec::with_capacity(dim * count);
    for _ in 0..count {
        let direction = unit_vector(&mut rng, dim);
        let radius = uniform(&mut rng, constraints.c1, constraints.c2).sqrt();
        coords.extend(direction.into_iter().map(|x| radius * x));
    }
    VectorSystem::from_flat(dim, coords)
}

/// Scaled standard basis vectors `√norms2[i] · e_i`.
pub fn orthonormal_system(dim: usize, norms2: &[f64]) -> Result<VectorSystem> {
    if norms2.len() > dim {
        return Err(FrameError::Domain(format!(
            "cannot place {} pairwise orthogonal nonzero vectors in dimension {dim}",
            norms2.len()
        )));
    }
    if let Some(bad) = norms2.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
        return Err(FrameError::Domain(format!("squared norms must be positive, got {bad}")));
    }
    let mut coords = vec![0.0; dim * norms2.len()];
    for (i, &c) in norms2.iter().enumerate() {
        coords[i * dim + i] = c.sqrt();
    }
    VectorSystem::from_flat(dim, coords)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildRequest {
    pub dim: usize,
    pub count: usize,
    /// Squared norm `c` of every vector.
    pub target_norm2: f64,
    pub seed: u64,
    pub max_iters: usize,
    pub defect_tol: f64,
}

impl BuildRequest {
    pub fn new(dim: usize, count: usize, target_norm2: f64) -> Self {
        Self {
            dim,
            count,
            target_norm2,
            seed: 0,
            max_iters: DEFAULT_MAX_ITERS,
            defect_tol: DEFAULT_DEFECT_TOL,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(FrameError::Domain("dimension must be at least 1".into()));
        }
        if self.count < self.dim {
            return Err(FrameError::Domain(format!(
                "a tight frame of R^{} needs at least {} vectors, got {}",
                self.dim, self.dim, self.count
            )));
        }
        if !(self.target_norm2 > 0.0 && self.target_norm2.is_finite()) {
            return Err(FrameError::Domain(format!(
                "target squared norm must be positive, got {}",
                self.target_norm2
            )));
        }
        if !(self.defect_tol > 0.0) {
            return Err(FrameError::Domain("defect tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Builds `N` vectors of squared norm `c` whose frame operator is `(N c / d) I`
/// up to `defect_tol`.
pub fn build_untf(req: &BuildRequest) -> Result<VectorSystem> {
    req.validate()?;
    let radius = req.target_norm2.sqrt();
    match req.dim {
        1 => return VectorSystem::from_flat(1, vec![radius; req.count]),
        2 => {
            let vs = harmonic_frame(req.count, radius)?;
            if tightness_defect(&vs)? <= req.defect_tol {
                return Ok(vs);
            }
        }
        _ => {}
    }

    let mut best: Option<(f64, VectorSystem)> = None;
    for restart in 0..BUILD_RESTARTS {
        let (defect, vs) = descend(req, req.seed.wrapping_add(restart))?;
        if defect <= req.defect_tol {
            return Ok(vs);
        }
        if best.as_ref().is_none_or(|(b, _)| defect < *b) {
            best = Some((defect, vs));
        }
    }
    Err(FrameError::NotConverged { best_defect: best.map_or(f64::INFINITY, |(d, _)| d) })
}

/// `N` equally spaced directions on the upper half circle.
fn harmonic_frame(count: usize, radius: f64) -> Result<VectorSystem> {
    let coords = (0..count)
        .flat_map(|k| {
            let angle = std::f64::consts::PI * k as f64 / count as f64;
            [radius * angle.cos(), radius * angle.sin()]
        })
        .collect();
    VectorSystem::from_flat(2, coords)
}

fn renormalize(v: &mut [f64], radius: f64) {
    let norm = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x *= radius / norm);
}

/// One descent run from a seeded random start; returns the final defect.
fn descend(req: &BuildRequest, seed: u64) -> Result<(f64, VectorSystem)> {
    let (d, n, c) = (req.dim, req.count, req.target_norm2);
    let radius = c.sqrt();
    let mut rng = stream(seed);
    let mut coords: Vec<f64> = (0..n).flat_map(|_| unit_vector(&mut rng, d)).map(|x| x * radius).collect();
    let step = 1.0 / (4.0 * n as f64 * c);
    let mut frame_op = vec![0.0; d * d];
    let mut defect = f64::INFINITY;

    for iter in 0..=req.max_iters {
        // A = Σ v vᵀ, row-major d × d
        frame_op.iter_mut().for_each(|x| *x = 0.0);
        for v in coords.chunks_exact(d) {
            for a in 0..d {
                for b in 0..d {
                    frame_op[a * d + b] += v[a] * v[b];
                }
            }
        }
        if iter % 16 == 0 || iter == req.max_iters {
            defect = operator_defect(&frame_op, d);
            if defect <= req.defect_tol || iter == req.max_iters {
                break;
            }
        }
        // ∇_k FP = 4 A v_k, projected on the tangent space of the sphere.
        for v in coords.chunks_exact_mut(d) {
            let av: Vec<f64> = (0..d).map(|a| dot(&frame_op[a * d..(a + 1) * d], v)).collect();
            let radial = dot(&av, v) / c;
            for a in 0..d {
                v[a] -= step * 4.0 * (av[a] - radial * v[a]);
            }
            renormalize(v, radius);
        }
    }
    let vs = VectorSystem::from_flat(d, coords)?;
    Ok((defect.min(tightness_defect(&vs)?), vs))
}

fn operator_defect(frame_op: &[f64], d: usize) -> f64 {
    let lambda = (0..d).map(|a| frame_op[a * d + a]).sum::<f64>() / d as f64;
    let mut acc = 0.0;
    for a in 0..d {
        for b in 0..d {
            let target = if a == b { lambda } else { 0.0 };
            acc += (frame_op[a * d + b] - target).powi(2);
        }
    }
    acc.sqrt() / lambda
}

/// Multiplies every vector by `factor > 0`.
pub fn scale_system(vs: &VectorSystem, factor: f64) -> Result<VectorSystem> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(FrameError::InvalidFactor(factor));
    }
    VectorSystem::from_flat(vs.dim(), vs.as_flat().iter().map(|x| x * factor).collect())
}
