//! The max-min objective and the scaling moves used to reason about it.
//!
//! For a system `v_1..v_N` and noise level `σ ≥ 0` the per-vector ratio is
//!
//! ```text
//!     μ_k = |v_k|² / (σ² + Σ_{l≠k} ⟨v_k, v_l⟩²)
//! ```
//!
//! (written `m_k` when `σ = 0`). The objective is `M = min_k μ_k` and the
//! reported value is `N · log(1 + M)`.
//!
//! Indices are 0-based throughout.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::frame::{dot, gram_matrix, sum, VectorSystem};
use crate::{FrameError, Result};

/// Members of the argmin set lie within this relative distance of the minimum.
pub const ARGMIN_REL_TOL: f64 = 1e-9;

/// A real number or `+∞`. Serialized as a JSON number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtReal::Infinite
        } else {
            ExtReal::Finite(x)
        }
    }

    /// Value as `f64`, with `+∞` for [`ExtReal::Infinite`].
    pub fn value(self) -> f64 {
        match self {
            ExtReal::Finite(x) => x,
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => serializer.serialize_f64(*x),
            ExtReal::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(x) => Ok(ExtReal::Finite(x)),
            Raw::Str(s) if s == "inf" => Ok(ExtReal::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}

/// Problem parameters: `c1 ≤ |v_i|² ≤ c2` and the noise level `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormConstraints {
    pub c1: f64,
    pub c2: f64,
    pub sigma: f64,
}

impl NormConstraints {
    pub fn new(c1: f64, c2: f64, sigma: f64) -> Result<Self> {
        let nc = Self { c1, c2, sigma };
        nc.validate()?;
        Ok(nc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c1.is_finite() && self.c2.is_finite() && self.sigma.is_finite()) {
            return Err(FrameError::Domain("c1, c2 and sigma must be finite".into()));
        }
        if self.c1 <= 0.0 {
            return Err(FrameError::Domain(format!("c1 must be positive, got {}", self.c1)));
        }
        if self.c1 >= self.c2 {
            return Err(FrameError::Domain(format!(
                "c1 must be smaller than c2, got c1 = {} and c2 = {}",
                self.c1, self.c2
            )));
        }
        if self.sigma < 0.0 {
            return Err(FrameError::Domain(format!("sigma must be non-negative, got {}", self.sigma)));
        }
        Ok(())
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// Checks `c1 ≤ |v_i|² ≤ c2` for every vector, with relative slack `slack`.
    pub fn check_feasible(&self, vs: &VectorSystem, slack: f64) -> Result<()> {
        for (index, norm2) in vs.norms2().into_iter().enumerate() {
            if norm2 < self.c1 * (1.0 - slack) || norm2 > self.c2 * (1.0 + slack) {
                return Err(FrameError::Infeasible { index, norm2, c1: self.c1, c2: self.c2 });
            }
        }
        Ok(())
    }
}

/// Per-vector ratios and the resulting objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub ratios: Vec<ExtReal>,
    pub row_energies: Vec<f64>,
    pub min_value: ExtReal,
    pub argmin_set: Vec<usize>,
    pub objective: ExtReal,
}

/// `E_k = Σ_l ⟨v_k, v_l⟩²`, including `l = k`.
pub fn row_energy(vs: &VectorSystem, k: usize) -> Result<f64> {
    vs.check_index(k)?;
    let v = vs.vector(k);
    let terms: Vec<f64> = vs
        .vectors()
        .map(|w| {
            let g = dot(v, w);
            g * g
        })
        .collect();
    Ok(sum(&terms))
}

fn ratio(k: usize, norm2: f64, denominator: f64) -> Result<ExtReal> {
    if denominator > 0.0 {
        Ok(ExtReal::Finite(norm2 / denominator))
    } else if norm2 > 0.0 {
        Ok(ExtReal::Infinite)
    } else {
        Err(FrameError::IndeterminateRatio(k))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma >= 0.0 {
        Ok(())
    } else {
        Err(FrameError::Domain(format!("sigma must be finite and non-negative, got {sigma}")))
    }
}

/// `μ_k = |v_k|² / (σ² + Σ_{l≠k} ⟨v_k, v_l⟩²)`; `+∞` when the denominator vanishes.
pub fn per_vector_ratio(vs: &VectorSystem, sigma: f64, k: usize) -> Result<ExtReal> {
    vs.check_index(k)?;
    check_sigma(sigma)?;
    let v = vs.vector(k);
    let terms: Vec<f64> = vs
        .vectors()
        .enumerate()
        .filter(|&(l, _)| l != k)
        .map(|(_, w)| {
            let g = dot(v, w);
            g * g
        })
        .collect();
    ratio(k, dot(v, v), sigma * sigma + sum(&terms))
}

/// Evaluates all ratios through one Gram matrix.
pub fn evaluate(vs: &VectorSystem, sigma: f64) -> Result<RatioReport> {
    check_sigma(sigma)?;
    let n = vs.count();
    let g = gram_matrix(vs);
    let sigma2 = sigma * sigma;
    let mut ratios = Vec::with_capacity(n);
    let mut row_energies = Vec::with_capacity(n);
    let mut terms = Vec::with_capacity(n);
    for k in 0..n {
        terms.clear();
        terms.extend((0..n).filter(|&l| l != k).map(|l| g.get(k, l) * g.get(k, l)));
        let interference = sum(&terms);
        let norm2 = g.get(k, k);
        ratios.push(ratio(k, norm2, sigma2 + interference)?);
        terms.push(norm2 * norm2);
        row_energies.push(sum(&terms));
    }
    Ok(summarize(ratios, row_energies))
}

pub(crate) fn summarize(ratios: Vec<ExtReal>, row_energies: Vec<f64>) -> RatioReport {
    let min_value = ratios
        .iter()
        .copied()
        .min_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
        .unwrap_or(ExtReal::Infinite);
    let argmin_set = match min_value {
        ExtReal::Finite(m) => {
            let cutoff = m + ARGMIN_REL_TOL * m.abs();
            ratios
                .iter()
                .enumerate()
                .filter(|(_, r)| r.value() <= cutoff)
                .map(|(i, _)| i)
                .collect()
        }
        ExtReal::Infinite => (0..ratios.len()).collect(),
    };
    let objective = match min_value {
        ExtReal::Finite(m) => ExtReal::Finite(ratios.len() as f64 * m.ln_1p()),
        ExtReal::Infinite => ExtReal::Infinite,
    };
    RatioReport { ratios, row_energies, min_value, argmin_set, objective }
}

/// Objective value `N · log(1 + M)`.
pub fn log_objective(count: usize, min_value: ExtReal) -> ExtReal {
    match min_value {
        ExtReal::Finite(m) => ExtReal::Finite(count as f64 * m.ln_1p()),
        ExtReal::Infinite => ExtReal::Infinite,
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(FrameError::InvalidLambda(lambda))
    }
}

/// Replaces `v_k` by `λ v_k`, `λ ∈ (0, 1]`.
pub fn shrink_vector(vs: &VectorSystem, k: usize, lambda: f64) -> Result<VectorSystem> {
    vs.check_index(k)?;
    check_lambda(lambda)?;
    let mut out = vs.clone();
    out.vector_mut(k).iter_mut().for_each(|x| *x *= lambda);
    Ok(out)
}

/// Keeps the first `m` vectors and scales the remaining `N - m` by `λ ∈ (0, 1]`.
pub fn simultaneous_scaling(vs: &VectorSystem, m: usize, lambda: f64) -> Result<VectorSystem> {
    if m > vs.count() {
        return Err(FrameError::IndexOutOfRange { index: m, count: vs.count() });
    }
    let block: Vec<usize> = (m..vs.count()).collect();
    scale_block(vs, &block, lambda)
}

/// Scales the vectors listed in `block` by `λ ∈ (0, 1]`.
pub fn scale_block(vs: &VectorSystem, block: &[usize], lambda: f64) -> Result<VectorSystem> {
    check_lambda(lambda)?;
    let mut out = vs.clone();
    for &i in block {
        vs.check_index(i)?;
        out.vector_mut(i).iter_mut().for_each(|x| *x *= lambda);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// `σ² − Σ_{l ∈ block, l≠k} ⟨v_k, v_l⟩²`. Its sign is the sign of
/// `d μ_k / d λ` at `λ = 1` when the whole block is scaled by `λ`.
pub fn block_scaling_indicator(vs: &VectorSystem, block: &[usize], k: usize, sigma: f64) -> Result<f64> {
    vs.check_index(k)?;
    check_sigma(sigma)?;
    if !block.contains(&k) {
        return Err(FrameError::Domain(format!("vector {k} is not in the scaled block")));
    }
    let v = vs.vector(k);
    let mut terms = Vec::with_capacity(block.len());
    for &l in block {
        vs.check_index(l)?;
        if l != k {
            let g = dot(v, vs.vector(l));
            terms.push(g * g);
        }
    }
    Ok(sigma * sigma - sum(&terms))
}

/// Sign of `d μ̃_k / d λ` at `λ = 1` under [`simultaneous_scaling`] with the
/// first `m` vectors fixed. Requires `m ≤ k`.
pub fn scaling_derivative_sign(vs: &VectorSystem, m: usize, k: usize, sigma: f64) -> Result<Sign> {
    vs.check_index(k)?;
    if k < m {
        return Err(FrameError::Domain(format!(
            "vector {k} is not in the scaled block {m}..{}",
            vs.count()
        )));
    }
    let block: Vec<usize> = (m..vs.count()).collect();
    block_scaling_indicator(vs, &block, k, sigma).map(Sign::of)
}
