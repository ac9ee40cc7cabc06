//! Closed-form values and bounds for the max-min problem.
//!
//! All parameters follow the problem statement: `c1` and `c2` bound the
//! *squared* norms, `sigma` is the noise level itself (not its square).
//!
//! - σ = 0: the optimum is `d / (c1 (N − d))`, attained exactly by scaled
//!   unit norm tight frames with `|v_i|² = c1`.
//! - Uniform systems (`|v_i|² = c` for all `i`): the best value is
//!   `1 / f(c)` with `f(c) = σ²/c + c (N − d)/d`, minimized over `[c1, c2]`.
//! - Welch: `M` vectors with `|w_i|² ≥ c1` have
//!   `max_{i≠j} ⟨w_i, w_j⟩² ≥ c1² (M − d) / (d (M − 1))`.
//! - Count bound: some optimal system has fewer than
//!   `d (c1² − σ²) / (c1² − d σ²)` vectors with `|v_i|² > c1`.
//! - Upper bound on the optimum `μ` from `R = Σ |v_i|²` (see [`mu_upper_bound`]).

use serde::Serialize;

use crate::objective::{ExtReal, NormConstraints};
use crate::{FrameError, Result};

fn check_counts(dim: usize, count: usize) -> Result<()> {
    if dim == 0 {
        return Err(FrameError::Domain("dimension must be at least 1".into()));
    }
    if count <= dim {
        return Err(FrameError::Domain(format!(
            "needs more vectors than dimensions (N = {count}, d = {dim})"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(FrameError::Domain(format!("{name} must be positive and finite, got {x}")))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma >= 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(FrameError::Domain(format!("sigma must be non-negative and finite, got {sigma}")))
    }
}

/// `d / (c1 (N − d))`, or `+∞` when `N ≤ d` (orthogonal systems).
pub fn sigma0_extremal_value(dim: usize, count: usize, c1: f64) -> Result<ExtReal> {
    check_positive("c1", c1)?;
    if dim == 0 {
        return Err(FrameError::Domain("dimension must be at least 1".into()));
    }
    if count <= dim {
        return Ok(ExtReal::Infinite);
    }
    Ok(ExtReal::Finite(dim as f64 / (c1 * (count - dim) as f64)))
}

/// `N · log(1 + d / (c1 (N − d)))`.
pub fn sigma0_answer(dim: usize, count: usize, c1: f64) -> Result<ExtReal> {
    Ok(match sigma0_extremal_value(dim, count, c1)? {
        ExtReal::Finite(v) => ExtReal::Finite(count as f64 * v.ln_1p()),
        ExtReal::Infinite => ExtReal::Infinite,
    })
}

/// `f(c) = σ²/c + c (N − d)/d`, the reciprocal of the best ratio on the sphere
/// of squared radius `c`.
pub fn uniform_objective(dim: usize, count: usize, sigma: f64, c: f64) -> f64 {
    sigma * sigma / c + c * (count - dim) as f64 / dim as f64
}

/// Best ratio `c / (σ² + c² (N − d)/d)` over uniform systems on the sphere of
/// squared radius `c`.
pub fn uniform_value(dim: usize, count: usize, sigma: f64, c: f64) -> f64 {
    c / (sigma * sigma + c * c * (count - dim) as f64 / dim as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformCase {
    /// Minimizer of `f` over `[c1, c2]`.
    pub argmin_c: f64,
    /// `f(argmin_c)`.
    pub value_at_argmin: f64,
    /// Best ratio among uniform systems, `1 / f(argmin_c)`.
    pub uniform_value: f64,
    /// `N · log(1 + uniform_value)`.
    pub uniform_answer: f64,
    /// `σ ≤ c1 √((N − d)/d)`: the unconstrained minimizer of `f` is at most `c1`.
    pub argmin_at_c1: bool,
}

/// Unconstrained minimizer `σ √(d / (N − d))` of `f`.
pub fn uniform_unconstrained_minimizer(dim: usize, count: usize, sigma: f64) -> f64 {
    sigma * (dim as f64 / (count - dim) as f64).sqrt()
}

pub fn uniform_case(dim: usize, count: usize, c1: f64, c2: f64, sigma: f64) -> Result<UniformCase> {
    check_counts(dim, count)?;
    NormConstraints::new(c1, c2, sigma)?;
    let c_star = uniform_unconstrained_minimizer(dim, count, sigma);
    let argmin_c = c_star.clamp(c1, c2);
    let value_at_argmin = uniform_objective(dim, count, sigma, argmin_c);
    let uniform_value = uniform_value(dim, count, sigma, argmin_c);
    Ok(UniformCase {
        argmin_c,
        value_at_argmin,
        uniform_value,
        uniform_answer: count as f64 * uniform_value.ln_1p(),
        argmin_at_c1: sigma <= c1 * ((count - dim) as f64 / dim as f64).sqrt(),
    })
}

/// `c1² (M − d) / (d (M − 1))` for `M ≥ 2`, and `0` for `M ≤ 1`.
pub fn welch_bound(m: usize, dim: usize, c1: f64) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    c1 * c1 * (m as f64 - dim as f64) / (dim as f64 * (m - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountBound {
    /// `d (c1² − σ²) / (c1² − d σ²)`; `None` when the denominator is not positive.
    pub bound: Option<f64>,
    /// `c1² > d σ²`.
    pub valid: bool,
    /// Largest integer strictly below `bound`.
    pub max_integer_count: Option<u64>,
}

/// Relative distance to the nearest integer below which a bound counts as an
/// exact integer.
const INTEGER_SNAP_TOL: f64 = 1e-12;

/// Largest non-negative integer `M` with `M < bound`. Bounds within `1e-12`
/// (relative) of an integer `n` are treated as `n`, giving `n − 1`.
pub fn largest_integer_below(bound: f64) -> Option<u64> {
    if !bound.is_finite() || bound <= 0.0 {
        return None;
    }
    let nearest = bound.round();
    let snapped = if (bound - nearest).abs() <= INTEGER_SNAP_TOL * bound.max(1.0) {
        nearest
    } else {
        bound
    };
    let below = if snapped.fract() == 0.0 { snapped - 1.0 } else { snapped.floor() };
    (below >= 0.0).then_some(below as u64)
}

/// `d (c1² − σ²) / (c1² − d σ²)`.
pub fn nonminimal_count_bound(dim: usize, c1: f64, sigma: f64) -> Result<CountBound> {
    check_positive("c1", c1)?;
    check_sigma(sigma)?;
    let (c1sq, s2, d) = (c1 * c1, sigma * sigma, dim as f64);
    let denominator = c1sq - d * s2;
    let valid = denominator > 0.0;
    let bound = valid.then(|| d * (c1sq - s2) / denominator);
    Ok(CountBound { bound, valid, max_integer_count: bound.and_then(largest_integer_below) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuBound {
    /// Upper bound on the optimal min-ratio; `None` when the inequality gives
    /// no finite bound.
    pub mu_bound: Option<f64>,
    /// The bounding quotient is decreasing in `R` over the whole interval.
    pub condition_holds: bool,
    /// Admissible range `[N c1, N c1 + K (c2 − c1)]` for `R = Σ |v_i|²`,
    /// with `K` the count bound.
    pub r_interval: (f64, f64),
}

/// Parameters of the bounding quotient `q(R) = R / (N σ² + R²/d − S)` where
/// `S = N c1² + (c2² − c1²) K` bounds `Σ |v_i|⁴`.
#[derive(Debug, Clone, Copy)]
struct MuQuotient {
    dim: f64,
    count: f64,
    sigma2: f64,
    fourth_power_sum: f64,
}

impl MuQuotient {
    fn denominator(&self, r: f64) -> f64 {
        self.count * self.sigma2 + r * r / self.dim - self.fourth_power_sum
    }

    /// `None` where the denominator is not positive (no information there).
    fn eval(&self, r: f64) -> Option<f64> {
        let den = self.denominator(r);
        (den > 0.0).then(|| r / den)
    }
}

/// Number of scan points used before golden-section refinement.
const SCAN_POINTS: usize = 64;

/// Maximizes `f` over `[lo, hi]`: a uniform scan brackets the best point,
/// then golden-section search refines inside the bracket. Returns `None` if
/// `f` is undefined anywhere on the scan grid.
pub fn maximize_on_interval<F>(f: F, lo: f64, hi: f64) -> Option<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    if hi <= lo {
        return f(lo);
    }
    let h = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| if i + 1 == SCAN_POINTS { hi } else { lo + h * i as f64 }).collect();
    let values: Option<Vec<f64>> = grid.iter().map(|&x| f(x)).collect();
    let values = values?;
    let (best_i, &best_v) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let mut a = grid[best_i.saturating_sub(1)];
    let mut b = grid[(best_i + 1).min(SCAN_POINTS - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = best_v;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..200 {
        if (b - a) <= 1e-14 * b.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        }
    }
    best = best.max(f1).max(f2);
    Some(best)
}

/// Upper bound on `μ = max min_k μ_k` for `σ > 0` small.
///
/// With `R = Σ |v_i|²` restricted by the count bound `K` to
/// `[N c1, N c1 + K (c2 − c1)]` and `Σ |v_i|⁴ ≤ N c1² + K (c2² − c1²)`,
/// summing `|v_k|² ≥ μ (σ² + E_k − |v_k|⁴)` over `k` gives `μ ≤ q(R)`.
/// When `N² c1² > N d (c1² − σ²) + d (c2² − c1²) K` the quotient is
/// decreasing on the interval and the bound is
///
/// ```text
///     q(N c1) = c1 / (σ² + c1² (N − d)/d − (c2² − c1²) K / N)
/// ```
///
/// Otherwise `q` is maximized numerically; a quotient whose denominator
/// vanishes inside the interval yields no bound.
pub fn mu_upper_bound(dim: usize, count: usize, c1: f64, c2: f64, sigma: f64) -> Result<MuBound> {
    check_counts(dim, count)?;
    NormConstraints::new(c1, c2, sigma)?;
    let count_bound = nonminimal_count_bound(dim, c1, sigma)?;
    let k = count_bound.bound.ok_or_else(|| {
        FrameError::Domain(format!(
            "upper bound needs c1² > d σ² (c1 = {c1}, d = {dim}, sigma = {sigma})"
        ))
    })?;
    let (d, n, s2) = (dim as f64, count as f64, sigma * sigma);
    let (c1sq, c2sq) = (c1 * c1, c2 * c2);
    let r_interval = (n * c1, n * c1 + k * (c2 - c1));
    let quotient = MuQuotient { dim: d, count: n, sigma2: s2, fourth_power_sum: n * c1sq + (c2sq - c1sq) * k };

    let condition_holds = n * n * c1sq > n * d * (c1sq - s2) + d * (c2sq - c1sq) * k;
    let mu_bound = if condition_holds {
        let den = s2 + c1sq * (n - d) / d - (c2sq - c1sq) * k / n;
        Some(c1 / den)
    } else {
        maximize_on_interval(|r| quotient.eval(r), r_interval.0, r_interval.1)
    };
    Ok(MuBound { mu_bound, condition_holds, r_interval })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub sigma0_value: ExtReal,
    pub sigma0_answer: ExtReal,
    pub uniform_argmin_c: f64,
    pub uniform_value: f64,
    pub uniform_answer: f64,
    pub argmin_at_c1: bool,
    /// Welch lower bound on the largest squared inner product of `N` vectors.
    pub welch_value: f64,
    pub count_bound: Option<f64>,
    pub count_bound_valid: bool,
    pub max_nonminimal_count: Option<u64>,
    pub r_interval: Option<(f64, f64)>,
    pub mu_condition_holds: bool,
    pub mu_upper: Option<f64>,
}

/// Every closed-form quantity for one parameter set.
pub fn bounds_report(dim: usize, count: usize, constraints: &NormConstraints) -> Result<BoundsReport> {
    check_counts(dim, count)?;
    constraints.validate()?;
    let NormConstraints { c1, c2, sigma } = *constraints;
    let uniform = uniform_case(dim, count, c1, c2, sigma)?;
    let cb = nonminimal_count_bound(dim, c1, sigma)?;
    let mu = if cb.valid { Some(mu_upper_bound(dim, count, c1, c2, sigma)?) } else { None };
    Ok(BoundsReport {
        sigma0_value: sigma0_extremal_value(dim, count, c1)?,
        sigma0_answer: sigma0_answer(dim, count, c1)?,
        uniform_argmin_c: uniform.argmin_c,
        uniform_value: uniform.uniform_value,
        uniform_answer: uniform.uniform_answer,
        argmin_at_c1: uniform.argmin_at_c1,
        welch_value: welch_bound(count, dim, c1),
        count_bound: cb.bound,
        count_bound_valid: cb.valid,
        max_nonminimal_count: cb.max_integer_count,
        r_interval: mu.map(|m| m.r_interval),
        mu_condition_holds: mu.is_some_and(|m| m.condition_holds),
        mu_upper: mu.and_then(|m| m.mu_bound),
    })
}
