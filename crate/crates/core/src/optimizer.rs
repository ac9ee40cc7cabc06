//! Numerical maximization of `min_k μ_k` over `c1 ≤ |v_i|² ≤ c2`.
//!
//! Each restart starts from a seeded random feasible system and runs
//! projected gradient ascent on the softmin
//!
//! ```text
//!     S_β(v) = −(1/β) log Σ_k exp(−β μ_k(v))
//! ```
//!
//! for an increasing schedule of `β`, with radial clamping of every squared
//! norm into `[c1, c2]` after each step. A few sharper stages (`β` growing
//! tenfold each time, restarted from the best point) follow the schedule and
//! stop once they no longer raise the exact min. The best exact min-ratio seen
//! is then polished with two discrete moves that never decrease it:
//!
//! - shrinking a vector towards `|v|² = c1` (always safe at `σ = 0`),
//! - scaling the whole block of vectors above `c1` by `λ < 1` when every
//!   vector in the block has a non-positive scaling derivative.
//!
//! Restarts are independent and run on a rayon pool; the result is the best
//! restart, ties going to the lowest restart index.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, welch_bound};
use crate::frame::{dot, max_pair_coherence2, VectorSystem};
use crate::objective::{block_scaling_indicator, evaluate, scale_block, shrink_vector, ExtReal, NormConstraints, RatioReport};
use crate::rng::{stream, unit_vector};
use crate::untf::{orthonormal_system, random_system};
use crate::{FrameError, Result};

/// Relative slack on `c1` above which a vector counts as having non-minimal norm.
pub const NONMINIMAL_REL_TOL: f64 = 1e-9;

/// Consecutive low-improvement iterations that end a smoothing stage.
const STALL_WINDOW: usize = 50;

const MAX_HALVINGS: usize = 60;

/// Extra stages after the schedule, each with ten times the previous `β`.
const POLISH_STAGES: usize = 8;
const POLISH_ITERS: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Total gradient iterations per restart, shared by all smoothing stages.
    pub max_iters: usize,
    /// Initial step length of the line search.
    pub step_size: f64,
    pub softmin_beta_schedule: Vec<f64>,
    /// Relative improvement below which an iteration counts as stalled.
    pub tolerance: f64,
    pub seed: u64,
    pub enable_shrink_moves: bool,
    pub enable_simultaneous_scaling_moves: bool,
    /// Worker threads for restarts; 0 lets rayon decide.
    pub threads: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 50_000,
            step_size: 0.1,
            softmin_beta_schedule: geometric_schedule(10.0, 1e4, 8),
            tolerance: 1e-13,
            seed: 0,
            enable_shrink_moves: true,
            enable_simultaneous_scaling_moves: true,
            threads: 0,
        }
    }
}

/// `stages` values from `first` to `last`, equally spaced in log scale.
pub fn geometric_schedule(first: f64, last: f64, stages: usize) -> Vec<f64> {
    if stages <= 1 {
        return vec![last];
    }
    let ratio = (last / first).powf(1.0 / (stages - 1) as f64);
    (0..stages).map(|i| if i + 1 == stages { last } else { first * ratio.powi(i as i32) }).collect()
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(FrameError::Domain("restarts must be at least 1".into()));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(FrameError::Domain("step size must be positive".into()));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(FrameError::Domain("tolerance must be non-negative".into()));
        }
        let schedule = &self.softmin_beta_schedule;
        if schedule.is_empty() || schedule.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
            return Err(FrameError::Domain("beta schedule must be non-empty and positive".into()));
        }
        if schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FrameError::Domain("beta schedule must be strictly increasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    pub best_system: VectorSystem,
    pub best_report: RatioReport,
    /// `(iteration, best min-ratio so far)` of the winning restart.
    pub history: Vec<(usize, f64)>,
    pub restart_index: usize,
    pub converged: bool,
    /// Vectors with `|v_i|² > c1 (1 + 1e-9)`.
    pub nonminimal_norm_count: usize,
}

/// Softmin value and its gradient with respect to the row-major coordinates.
#[derive(Debug, Clone)]
pub struct Smoothed {
    pub value: f64,
    pub gradient: Vec<f64>,
    /// Exact `min_k μ_k` at the same point.
    pub min_ratio: f64,
}

/// `S_β` and `∇S_β` at `vs`. Vectors with zero interference and zero noise
/// (infinite ratio) carry zero weight.
pub fn smoothed_objective(vs: &VectorSystem, sigma: f64, beta: f64) -> Smoothed {
    smoothed_flat(vs.as_flat(), vs.dim(), sigma * sigma, beta)
}

fn smoothed_flat(x: &[f64], d: usize, sigma2: f64, beta: f64) -> Smoothed {
    let n = x.len() / d;
    let v = |i: usize| &x[i * d..(i + 1) * d];
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let g = dot(v(i), v(j));
            gram[i * n + j] = g;
            gram[j * n + i] = g;
        }
    }
    let mut denom = vec![0.0; n];
    let mut ratio = vec![f64::INFINITY; n];
    for k in 0..n {
        let interference: f64 = (0..n).filter(|&l| l != k).map(|l| gram[k * n + l].powi(2)).sum();
        denom[k] = sigma2 + interference;
        if denom[k] > 0.0 {
            ratio[k] = gram[k * n + k] / denom[k];
        }
    }
    let min_ratio = ratio.iter().copied().fold(f64::INFINITY, f64::min);
    if !min_ratio.is_finite() {
        return Smoothed { value: f64::INFINITY, gradient: vec![0.0; x.len()], min_ratio };
    }
    let mut weights: Vec<f64> = ratio.iter().map(|&r| (-beta * (r - min_ratio)).exp()).collect();
    let z: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= z);
    let value = min_ratio - z.ln() / beta;

    // a_k = 2 w_k n_k / D_k²;  ∇_j = 2 w_j v_j / D_j − Σ_{l≠j} (a_j + a_l) G_jl v_l
    let a: Vec<f64> = (0..n)
        .map(|k| if weights[k] > 0.0 { 2.0 * weights[k] * gram[k * n + k] / denom[k].powi(2) } else { 0.0 })
        .collect();
    let mut gradient = vec![0.0; x.len()];
    for j in 0..n {
        let gj = &mut gradient[j * d..(j + 1) * d];
        if weights[j] > 0.0 {
            let c = 2.0 * weights[j] / denom[j];
            gj.iter_mut().zip(v(j)).for_each(|(g, &vj)| *g += c * vj);
        }
        for l in 0..n {
            if l == j {
                continue;
            }
            let c = (a[j] + a[l]) * gram[j * n + l];
            if c != 0.0 {
                gj.iter_mut().zip(v(l)).for_each(|(g, &vl)| *g -= c * vl);
            }
        }
    }
    Smoothed { value, gradient, min_ratio }
}

/// Radially clamps every squared norm into `[c1, c2]`.
fn project(x: &mut [f64], d: usize, c1: f64, c2: f64) {
    for v in x.chunks_exact_mut(d) {
        let n2 = dot(v, v);
        let target = n2.clamp(c1, c2);
        if n2 == 0.0 {
            v[0] = target.sqrt();
        } else if target != n2 {
            let s = (target / n2).sqrt();
            v.iter_mut().for_each(|c| *c *= s);
        }
    }
}

struct RestartOutcome {
    system: VectorSystem,
    min_value: f64,
    history: Vec<(usize, f64)>,
    converged: bool,
}

pub fn optimize(dim: usize, count: usize, constraints: &NormConstraints, config: &OptimizerConfig) -> Result<OptResult> {
    constraints.validate()?;
    config.validate()?;
    if dim == 0 || count == 0 {
        return Err(FrameError::Domain("dimension and count must be at least 1".into()));
    }
    if count <= dim {
        let system = orthonormal_system(dim, &vec![constraints.c1; count])?;
        let best_report = evaluate(&system, constraints.sigma)?;
        return Ok(OptResult {
            nonminimal_norm_count: 0,
            best_system: system,
            best_report,
            history: Vec::new(),
            restart_index: 0,
            converged: true,
        });
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| FrameError::Io(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<RestartOutcome>> = pool.install(|| {
        (0..config.restarts)
            .into_par_iter()
            .map(|r| run_restart(dim, count, constraints, config, config.seed.wrapping_add(r as u64)))
            .collect()
    });

    let mut best: Option<(usize, RestartOutcome)> = None;
    for (index, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        if best.as_ref().is_none_or(|(_, b)| outcome.min_value > b.min_value) {
            best = Some((index, outcome));
        }
    }
    let (restart_index, outcome) = best.expect("at least one restart");
    let best_report = evaluate(&outcome.system, constraints.sigma)?;
    Ok(OptResult {
        nonminimal_norm_count: nonminimal_count(&outcome.system, constraints.c1),
        best_system: outcome.system,
        best_report,
        history: outcome.history,
        restart_index,
        converged: outcome.converged,
    })
}

pub fn nonminimal_count(vs: &VectorSystem, c1: f64) -> usize {
    vs.norms2().iter().filter(|&&c| c > c1 * (1.0 + NONMINIMAL_REL_TOL)).count()
}

/// Ascent state of one restart: the current point and the best exact
/// min-ratio seen so far.
struct Ascent<'a> {
    dim: usize,
    nc: &'a NormConstraints,
    config: &'a OptimizerConfig,
    x: Vec<f64>,
    best_x: Vec<f64>,
    best_min: f64,
    iteration: usize,
}

impl Ascent<'_> {
    fn record(&mut self, min_ratio: f64) {
        if min_ratio > self.best_min {
            self.best_min = min_ratio;
            self.best_x.copy_from_slice(&self.x);
        }
    }

    /// Projected ascent on `S_β` for at most `budget` iterations. Returns
    /// whether the stage stopped on its own (stall or failed line search).
    fn stage(&mut self, beta: f64, budget: usize) -> bool {
        let sigma2 = self.nc.sigma2();
        let mut current = smoothed_flat(&self.x, self.dim, sigma2, beta);
        let mut step = self.config.step_size;
        let mut stalled = 0usize;
        for _ in 0..budget {
            self.iteration += 1;
            self.record(current.min_ratio);
            let mut accepted = None;
            for _ in 0..MAX_HALVINGS {
                let mut trial: Vec<f64> = self.x.iter().zip(&current.gradient).map(|(a, g)| a + step * g).collect();
                project(&mut trial, self.dim, self.nc.c1, self.nc.c2);
                let next = smoothed_flat(&trial, self.dim, sigma2, beta);
                if next.value >= current.value {
                    accepted = Some((trial, next));
                    break;
                }
                step *= 0.5;
            }
            let Some((trial, next)) = accepted else {
                self.record(current.min_ratio);
                return true;
            };
            let gain = (next.value - current.value) / current.value.abs().max(f64::MIN_POSITIVE);
            self.x = trial;
            current = next;
            step = (step * 1.5).min(1e6);
            if gain < self.config.tolerance {
                stalled += 1;
                if stalled >= STALL_WINDOW {
                    self.record(current.min_ratio);
                    return true;
                }
            } else {
                stalled = 0;
            }
        }
        self.record(current.min_ratio);
        false
    }
}

fn run_restart(dim: usize, count: usize, nc: &NormConstraints, config: &OptimizerConfig, seed: u64) -> Result<RestartOutcome> {
    let x = random_system(dim, count, nc, seed)?.as_flat().to_vec();
    let mut ascent = Ascent { dim, nc, config, best_x: x.clone(), x, best_min: f64::NEG_INFINITY, iteration: 0 };
    let mut history = Vec::new();
    let mut converged = true;
    let schedule = &config.softmin_beta_schedule;

    let start = smoothed_flat(&ascent.x, dim, nc.sigma2(), schedule[0]);
    if start.gradient.iter().all(|&g| g == 0.0) && start.value.is_finite() {
        jitter(&mut ascent.x, dim, nc, seed);
    }
    for (stage, &beta) in schedule.iter().enumerate() {
        let budget = (config.max_iters - ascent.iteration) / (schedule.len() - stage);
        converged &= ascent.stage(beta, budget);
        history.push((ascent.iteration, ascent.best_min));
    }

    // Near an optimum the exact min moves at first order in the distance,
    // the softmin only at order β·distance², which drops below double
    // resolution long before the min stops improving. Sharper stages from the
    // best point recover those digits.
    let mut beta = *schedule.last().expect("validated schedule");
    for _ in 0..POLISH_STAGES {
        beta *= 10.0;
        let before = ascent.best_min;
        ascent.x.copy_from_slice(&ascent.best_x);
        ascent.stage(beta, POLISH_ITERS);
        history.push((ascent.iteration, ascent.best_min));
        if ascent.best_min <= before {
            break;
        }
    }
    let Ascent { best_x, best_min, iteration, .. } = ascent;

    let mut system = VectorSystem::from_flat(dim, best_x)?;
    let mut min_value = evaluate(&system, nc.sigma)?.min_value.value();
    if config.enable_shrink_moves {
        for (vs, value) in shrink_moves(&system, nc)? {
            system = vs;
            min_value = value;
            history.push((iteration, best_min.max(min_value)));
        }
    }
    if config.enable_simultaneous_scaling_moves {
        for (vs, value) in block_scaling_moves(&system, nc)? {
            system = vs;
            min_value = value;
            history.push((iteration, best_min.max(min_value)));
        }
    }
    Ok(RestartOutcome { system, min_value, history, converged })
}

fn jitter(x: &mut [f64], d: usize, nc: &NormConstraints, seed: u64) {
    let mut rng = stream(seed ^ 0x9e37_79b9_7f4a_7c15);
    let scale = 1e-8 * nc.c1.sqrt();
    for v in x.chunks_exact_mut(d) {
        let dir = unit_vector(&mut rng, d);
        v.iter_mut().zip(dir).for_each(|(c, u)| *c += scale * u);
    }
    project(x, d, nc.c1, nc.c2);
}

/// Shrink factors tried for a move from `|v|² = n2` towards `c1`: the full
/// shrink first, then ever smaller ones.
fn shrink_factors(n2: f64, c1: f64) -> impl Iterator<Item = f64> {
    let full = (c1 / n2).sqrt();
    (0..12).map(move |j| 1.0 - (1.0 - full) / f64::powi(2.0, j))
}

/// Accepted shrink moves, in order. At `σ = 0` shrinking never lowers the
/// min-ratio, so every vector is shrunk to `c1`; for `σ > 0` a move is kept
/// only if the min-ratio does not decrease.
fn shrink_moves(vs: &VectorSystem, nc: &NormConstraints) -> Result<Vec<(VectorSystem, f64)>> {
    let mut moves = Vec::new();
    let mut current = vs.clone();
    let mut report = evaluate(&current, nc.sigma)?;
    let mut order: Vec<usize> = (0..current.count()).collect();
    order.sort_by(|&a, &b| current.norm2(b).total_cmp(&current.norm2(a)));
    for k in order {
        let n2 = current.norm2(k);
        if n2 <= nc.c1 * (1.0 + 1e-12) {
            continue;
        }
        if nc.sigma == 0.0 {
            let next = shrink_vector(&current, k, (nc.c1 / n2).sqrt().min(1.0))?;
            report = evaluate(&next, nc.sigma)?;
            current = next;
            moves.push((current.clone(), report.min_value.value()));
            continue;
        }
        if report.argmin_set.contains(&k) {
            continue;
        }
        for lambda in shrink_factors(n2, nc.c1) {
            let next = shrink_vector(&current, k, lambda.min(1.0))?;
            let next_report = evaluate(&next, nc.sigma)?;
            if next_report.min_value >= report.min_value {
                current = next;
                report = next_report;
                moves.push((current.clone(), report.min_value.value()));
                break;
            }
        }
    }
    Ok(moves)
}

/// Accepted block-scaling moves. The block is every vector above `c1`; it is
/// scaled only when each member's scaling derivative is non-positive, and a
/// scaled system is kept when the min-ratio does not decrease.
fn block_scaling_moves(vs: &VectorSystem, nc: &NormConstraints) -> Result<Vec<(VectorSystem, f64)>> {
    let mut moves = Vec::new();
    let mut current = vs.clone();
    let mut value = evaluate(&current, nc.sigma)?.min_value;
    for _ in 0..32 {
        let block: Vec<usize> = (0..current.count())
            .filter(|&i| current.norm2(i) > nc.c1 * (1.0 + NONMINIMAL_REL_TOL))
            .collect();
        if block.is_empty() {
            break;
        }
        let mut all_nonpositive = true;
        for &k in &block {
            if block_scaling_indicator(&current, &block, k, nc.sigma)? > 0.0 {
                all_nonpositive = false;
                break;
            }
        }
        if !all_nonpositive {
            break;
        }
        let smallest = block.iter().map(|&i| current.norm2(i)).fold(f64::INFINITY, f64::min);
        let mut progressed = false;
        for lambda in shrink_factors(smallest, nc.c1) {
            let next = scale_block(&current, &block, lambda.min(1.0))?;
            let next_value = evaluate(&next, nc.sigma)?.min_value;
            if next_value >= value {
                current = next;
                value = next_value;
                moves.push((current.clone(), value.value()));
                progressed = true;
                break;
            }
        }
        if !progressed {
            break;
        }
    }
    Ok(moves)
}

/// Comparison of one feasible system against every closed-form value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertReport {
    pub dim: usize,
    pub count: usize,
    pub constraints: NormConstraints,
    pub achieved: ExtReal,
    pub achieved_objective: ExtReal,
    /// `d / (c1 (N − d))`, the optimum at `σ = 0`.
    pub sigma0_target: ExtReal,
    /// `sigma0_target − achieved` (absent when both are infinite).
    pub sigma0_gap: Option<f64>,
    /// `achieved ≤ sigma0_target (1 + 1e-7)`; at `σ = 0` this must hold.
    pub within_sigma0_bound: bool,
    pub uniform_value: Option<f64>,
    pub nonminimal_norm_count: usize,
    pub count_bound: Option<f64>,
    pub max_nonminimal_count: Option<u64>,
    /// Largest squared inner product among the vectors above `c1`.
    pub nonminimal_max_coherence2: f64,
    pub nonminimal_welch_bound: f64,
    pub welch_holds: bool,
    /// Two or more vectors above `c1` with `max ⟨v_i, v_j⟩² ≥ σ²`: such a
    /// system cannot be an optimum with least total squared norm.
    pub pair_condition_violated: bool,
    pub mu_upper: Option<f64>,
    pub mu_condition_holds: bool,
    pub within_mu_bound: Option<bool>,
}

pub fn certify(vs: &VectorSystem, constraints: &NormConstraints) -> Result<CertReport> {
    constraints.validate()?;
    constraints.check_feasible(vs, NONMINIMAL_REL_TOL)?;
    let (dim, count) = (vs.dim(), vs.count());
    let NormConstraints { c1, c2, sigma } = *constraints;
    let report = evaluate(vs, sigma)?;
    let achieved = report.min_value;
    let sigma0_target = bounds::sigma0_extremal_value(dim, count, c1)?;
    let sigma0_gap = match (sigma0_target, achieved) {
        (ExtReal::Finite(t), ExtReal::Finite(a)) => Some(t - a),
        (ExtReal::Infinite, ExtReal::Finite(_)) => Some(f64::INFINITY),
        (ExtReal::Finite(_), ExtReal::Infinite) => Some(f64::NEG_INFINITY),
        (ExtReal::Infinite, ExtReal::Infinite) => None,
    }
    .filter(|g| g.is_finite());
    let within_sigma0_bound = achieved.value() <= sigma0_target.value() * (1.0 + 1e-7);

    let above: Vec<usize> = (0..count).filter(|&i| vs.norm2(i) > c1 * (1.0 + NONMINIMAL_REL_TOL)).collect();
    let nonminimal_max_coherence2 = max_pair_coherence2(vs, &above);
    let nonminimal_welch_bound = welch_bound(above.len(), dim, c1);
    let count_bound = bounds::nonminimal_count_bound(dim, c1, sigma)?;

    let (uniform_value, mu) = if count > dim {
        let mu = if count_bound.valid { Some(bounds::mu_upper_bound(dim, count, c1, c2, sigma)?) } else { None };
        (Some(bounds::uniform_value(dim, count, sigma, c1)), mu)
    } else {
        (None, None)
    };
    let mu_upper = mu.and_then(|m| m.mu_bound);
    Ok(CertReport {
        dim,
        count,
        constraints: *constraints,
        achieved,
        achieved_objective: report.objective,
        sigma0_target,
        sigma0_gap,
        within_sigma0_bound,
        uniform_value,
        nonminimal_norm_count: above.len(),
        count_bound: count_bound.bound,
        max_nonminimal_count: count_bound.max_integer_count,
        nonminimal_max_coherence2,
        nonminimal_welch_bound,
        welch_holds: nonminimal_max_coherence2 >= nonminimal_welch_bound - 1e-12,
        pair_condition_violated: above.len() >= 2 && nonminimal_max_coherence2 >= sigma * sigma,
        mu_upper,
        mu_condition_holds: mu.is_some_and(|m| m.condition_holds),
        within_mu_bound: mu_upper.map(|m| achieved.value() <= m + 1e-9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::tightness_defect;
    use crate::untf::{build_untf, scale_system, BuildRequest};

    fn quick_config(seed: u64) -> OptimizerConfig {
        OptimizerConfig { restarts: 4, max_iters: 20_000, seed, ..OptimizerConfig::default() }
    }

    #[test]
    fn schedule_is_geometric() {
        let s = geometric_schedule(10.0, 1e4, 8);
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], 10.0);
        assert_eq!(s[7], 1e4);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        assert!(OptimizerConfig { restarts: 0, ..Default::default() }.validate().is_err());
        assert!(OptimizerConfig { softmin_beta_schedule: vec![10.0, 5.0], ..Default::default() }.validate().is_err());
        assert!(OptimizerConfig { softmin_beta_schedule: vec![], ..Default::default() }.validate().is_err());
        let nc = NormConstraints { c1: 2.0, c2: 1.0, sigma: 0.0 };
        assert!(optimize(2, 4, &nc, &OptimizerConfig::default()).is_err());
    }

    #[test]
    fn too_few_vectors_gives_orthogonal_system() {
        let nc = NormConstraints::new(1.0, 2.0, 0.0).unwrap();
        let r = optimize(2, 2, &nc, &OptimizerConfig::default()).unwrap();
        assert_eq!(r.best_report.min_value, ExtReal::Infinite);
        assert_eq!(dot(r.best_system.vector(0), r.best_system.vector(1)), 0.0);
    }

    #[test]
    fn square_case_reaches_tight_frame() {
        let nc = NormConstraints::new(1.0, 2.0, 0.0).unwrap();
        let r = optimize(2, 4, &nc, &quick_config(3)).unwrap();
        let m = r.best_report.min_value.value();
        assert!(m >= 1.0 - 1e-3 && m <= 1.0 + 1e-6, "min value {m}");
        assert!(tightness_defect(&r.best_system).unwrap() <= 1e-3);
        assert_eq!(r.nonminimal_norm_count, 0);
        let again = evaluate(&r.best_system, 0.0).unwrap();
        assert!((again.min_value.value() - m).abs() <= 1e-10);
        assert!(r.history.windows(2).all(|w| w[1].1 >= w[0].1));
    }

    #[test]
    fn noisy_case_is_bracketed() {
        let nc = NormConstraints::new(1.0, 2.0, 0.05).unwrap();
        let r = optimize(2, 5, &nc, &quick_config(5)).unwrap();
        let m = r.best_report.min_value.value();
        let uniform = 1.0 / (0.0025 + 1.5);
        assert!(m >= uniform * (1.0 - 1e-6), "{m} < {uniform}");
        let mu = bounds::mu_upper_bound(2, 5, 1.0, 2.0, 0.05).unwrap();
        if let (true, Some(b)) = (mu.condition_holds, mu.mu_bound) {
            assert!(m <= b + 1e-9);
        }
    }

    #[test]
    fn optimize_is_deterministic() {
        let nc = NormConstraints::new(1.0, 1.5, 0.02).unwrap();
        let cfg = OptimizerConfig { restarts: 3, max_iters: 3000, seed: 9, ..Default::default() };
        let a = optimize(3, 5, &nc, &cfg).unwrap();
        let b = optimize(3, 5, &nc, &OptimizerConfig { threads: 1, ..cfg }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shrink_moves_reach_c1_at_zero_noise() {
        let nc = NormConstraints::new(1.0, 3.0, 0.0).unwrap();
        let vs = random_system(2, 5, &nc, 4).unwrap();
        let before = evaluate(&vs, 0.0).unwrap().min_value.value();
        let moves = shrink_moves(&vs, &nc).unwrap();
        let mut last = before;
        for (_, v) in &moves {
            assert!(*v >= last * (1.0 - 1e-12));
            last = *v;
        }
        let (final_vs, _) = moves.last().unwrap();
        assert!(final_vs.norms2().iter().all(|&c| (c - 1.0).abs() < 1e-12));
    }

    #[test]
    fn certify_untf() {
        let nc = NormConstraints::new(1.5, 2.0, 0.0).unwrap();
        let vs = scale_system(&build_untf(&BuildRequest::new(3, 7, 1.0)).unwrap(), 1.5f64.sqrt()).unwrap();
        let c = certify(&vs, &nc).unwrap();
        assert!(c.sigma0_gap.unwrap().abs() <= 1e-7 * c.sigma0_target.value());
        assert!(c.within_sigma0_bound);
        assert_eq!(c.nonminimal_norm_count, 0);
    }

    #[test]
    fn certify_duplicated_basis_reports_gap() {
        let nc = NormConstraints::new(1.0, 2.0, 0.0).unwrap();
        let vs = VectorSystem::new(2, &[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = certify(&vs, &nc).unwrap();
        // ratios 1, ∞, 1 against the optimum 2
        assert_eq!(c.achieved, ExtReal::Finite(1.0));
        assert_eq!(c.sigma0_gap, Some(1.0));
        assert!(c.within_sigma0_bound);
    }

    #[test]
    fn certify_rejects_infeasible() {
        let nc = NormConstraints::new(1.0, 2.0, 0.0).unwrap();
        let vs = VectorSystem::new(2, &[vec![3.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(certify(&vs, &nc), Err(FrameError::Infeasible { index: 0, .. })));
    }
}
