//! Numerical toolkit for the max-min frame energy problem
//!
//! ```text
//!     max   min_k  |v_k|² / (σ² + Σ_{l≠k} ⟨v_k, v_l⟩²)
//! ```
//!
//! taken over systems of `N` real vectors in `R^d` with `c1 ≤ |v_k|² ≤ c2`.
//!
//! The crate is organised around the quantities involved:
//!
//! - [`frame`]: vector systems, Gram matrix, frame operator, frame potential,
//!   frame bounds and tightness diagnostics.
//! - [`objective`]: row energies, per-vector ratios, the min-ratio report and
//!   the two scaling transformations used to reason about optimal systems.
//! - [`untf`]: seeded random systems, orthogonal systems and (scaled) unit
//!   norm tight frames built by frame-potential descent.
//! - [`optimizer`]: multi-start smoothed max-min ascent with discrete
//!   shrink / block-scaling moves, plus certification against closed forms.
//! - [`bounds`]: every closed-form value (σ = 0 optimum, uniform-case answer,
//!   Welch bound, count bound, upper bound on the optimum for σ > 0).
//! - [`io`] and [`cli`]: file formats, reports and the `frame-lab` command.

pub mod bounds;
pub mod cli;
mod error;
pub mod frame;
pub mod io;
pub mod objective;
pub mod optimizer;
pub mod rng;
pub mod untf;

pub use error::{FrameError, Result};
pub use frame::{FrameOperator, GramMatrix, VectorSystem};
pub use objective::{ExtReal, NormConstraints, RatioReport};
