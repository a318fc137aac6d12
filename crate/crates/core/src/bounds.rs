//! Computable shapes of the classical bounds the experiment runner
//! measures against: Chang's character-sum saving, Wooley's Vinogradov
//! range exponential-sum bounds, the Ayyad-Cochrane-Zheng quadruple
//! count, the Weil bound for composite mixed sums, and the combined
//! error bound for the box-counting problem.
//!
//! Every function returns the pure shape with implied constant 1; the
//! honest constant is what a sweep estimates as its max ratio. Range
//! hypotheses (such as `h >= p^(1/4+kappa)`) are checked, and a violated
//! hypothesis downgrades the result to the trivial bound with a flag
//! instead of failing: the behavior near a threshold is exactly what the
//! experiments are for.

use crate::counting::{BoxSpec, SystemSpec};
use thiserror::Error;

/// Default exponent in the quadruple-count slack term `C * h^2 * p^eps`.
pub const DEFAULT_SLACK_EPS: f64 = 0.1;

/// Default constant in the quadruple-count slack term.
pub const DEFAULT_SLACK_C: f64 = 1.0;

/// Domain errors for the bound shapes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    /// The saving exponent needs `kappa > 0`.
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    /// An exponent below the formula's domain.
    #[error("exponent {k} below the domain minimum {min}")]
    ExponentTooSmall { k: u64, min: u64 },
    /// Too few variables for the error-bound shape.
    #[error("need at least {min} variables, got {n}")]
    TooFewVariables { n: usize, min: usize },
}

/// A bound value together with its range-hypothesis status.
///
/// When `in_range` is false the hypothesis failed and `value` is the
/// trivial bound (or the bare shape, noted per function); sweeps keep
/// such rows but exclude them from assertions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub in_range: bool,
}

/// The saving exponent `eta(kappa, K) = kappa^2 / (4 (1+2 kappa) (K^2 + 2K + 3))`.
///
/// Strictly increasing in `kappa`, strictly decreasing in `K`, and
/// always below `1/(2K(K-2))` for `K >= 3`, which is what lets the
/// second error channel dominate the first in the counting problem.
pub fn eta(kappa: f64, k: u64) -> Result<f64, BoundError> {
    if !(kappa > 0.0) {
        return Err(BoundError::NonPositiveKappa(kappa));
    }
    if k < 1 {
        return Err(BoundError::ExponentTooSmall { k, min: 1 });
    }
    let kf = k as f64;
    Ok(kappa * kappa / (4.0 * (1.0 + 2.0 * kappa) * (kf * kf + 2.0 * kf + 3.0)))
}

/// Chang's bound `h * p^(-eta(kappa, k))` for mixed character sums over
/// an interval of length `h >= p^(1/4+kappa)`.
///
/// Below that range the trivial bound `h` is returned, flagged.
pub fn chang_bound(h: u64, p: u64, kappa: f64, k: u64) -> Result<BoundValue, BoundError> {
    let e = eta(kappa, k)?;
    let hf = h as f64;
    let pf = p as f64;
    let in_range = hf >= pf.powf(0.25 + kappa);
    let value = if in_range { hf * pf.powf(-e) } else { hf };
    Ok(BoundValue { value, in_range })
}

/// Wooley's bound `h^(1 - 1/(2k(k-2))) + h^(1 - 1/(2(k-2))) * p^(1/(2k(k-2)))`
/// for the exponential sum of a degree-`k` polynomial with unit leading
/// coefficient over an interval of length `h`. Needs `k > 2`.
pub fn wooley_bound(h: u64, p: u64, k: u64) -> Result<f64, BoundError> {
    if k <= 2 {
        return Err(BoundError::ExponentTooSmall { k, min: 3 });
    }
    let kf = k as f64;
    let hf = h as f64;
    let pf = p as f64;
    let inv = 1.0 / (2.0 * kf * (kf - 2.0));
    Ok(hf.powf(1.0 - inv) + hf.powf(1.0 - 1.0 / (2.0 * (kf - 2.0))) * pf.powf(inv))
}

/// The short form `h^(1 - 1/(2k(k-2)))`, which dominates the full
/// expression exactly when `p^(1/(k-1)) <= h < p`; outside that range
/// the same shape is returned but flagged.
pub fn wooley_short_bound(h: u64, p: u64, k: u64) -> Result<BoundValue, BoundError> {
    if k <= 2 {
        return Err(BoundError::ExponentTooSmall { k, min: 3 });
    }
    let kf = k as f64;
    let hf = h as f64;
    let pf = p as f64;
    let in_range = hf >= pf.powf(1.0 / (kf - 1.0)) && hf < pf;
    let value = hf.powf(1.0 - 1.0 / (2.0 * kf * (kf - 2.0)));
    Ok(BoundValue { value, in_range })
}

/// The quadruple-count bound `h^4/p + slack_c * h^2 * p^(slack_eps)`.
///
/// The second term stands in for an unspecified `p^(o(1))` factor, so
/// its size is an explicit, documented choice rather than a constant
/// hidden in the shape; see [`DEFAULT_SLACK_EPS`] and [`DEFAULT_SLACK_C`].
pub fn acz_bound(h: u64, p: u64, slack_eps: f64, slack_c: f64) -> f64 {
    let hf = h as f64;
    let pf = p as f64;
    hf.powi(4) / pf + slack_c * hf * hf * pf.powf(slack_eps)
}

/// The Weil-type bound `p^(1/2) * ln p` for complete mixed sums
/// `sum chi(G(x)) e_p(F(x))` with `G` not a perfect power of another
/// polynomial. Natural logarithm.
pub fn weil_mixed_bound(p: u64) -> f64 {
    let pf = p as f64;
    pf.sqrt() * pf.ln()
}

/// The error bound for the box count, together with its hypothesis and
/// density-threshold diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBound {
    /// `h^n * p^(-1 - eta(n-4)) + h^(n-2) * p^(-eta(n-4))`.
    pub value: f64,
    /// Whether `h >= min(p^(1/4+kappa), p^(1/(k_min-1)))` held.
    pub in_range: bool,
    /// `(s + 1/2)/eta + 4`: the number of variables needed before the
    /// error bound beats the main term `h^n / p^(s+1)`.
    pub density_threshold: f64,
    /// Whether `n` reaches `density_threshold`.
    pub meets_density_threshold: bool,
}

/// Error bound for counting box solutions of the product plus diagonal
/// system: `h^n p^(-1-eta(n-4)) + h^(n-2) p^(-eta(n-4))` with
/// `eta = eta(kappa, k_max)`.
///
/// `k_min` enters only the range hypothesis
/// `h >= min(p^(1/4+kappa), p^(1/(k_min-1)))`; `s` enters only the
/// density threshold. Needs `n >= 3`.
pub fn box_count_error_bound(
    h: u64,
    p: u64,
    n: usize,
    s: usize,
    kappa: f64,
    k_min: u64,
    k_max: u64,
) -> Result<ErrorBound, BoundError> {
    if n < 3 {
        return Err(BoundError::TooFewVariables { n, min: 3 });
    }
    let e = eta(kappa, k_max)?;
    let hf = h as f64;
    let pf = p as f64;
    let hyp_chang = pf.powf(0.25 + kappa);
    let hyp_wooley = if k_min >= 2 {
        pf.powf(1.0 / (k_min as f64 - 1.0))
    } else {
        f64::INFINITY
    };
    let in_range = hf >= hyp_chang.min(hyp_wooley);
    let ex = e * (n as f64 - 4.0);
    let value = hf.powi(n as i32) * pf.powf(-1.0 - ex) + hf.powi(n as i32 - 2) * pf.powf(-ex);
    let density_threshold = (s as f64 + 0.5) / e + 4.0;
    Ok(ErrorBound {
        value,
        in_range,
        density_threshold,
        meets_density_threshold: n as f64 >= density_threshold,
    })
}

/// Parameters for the error-bound shapes, always recomputed from a
/// validated system rather than trusted from input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub kappa: f64,
    /// Smallest diagonal exponent in the system (0 when `s = 0`).
    pub k_min: u64,
    /// Largest diagonal exponent in the system (0 when `s = 0`).
    pub k_max: u64,
    pub n: usize,
    pub s: usize,
    pub h: u32,
    pub p: u32,
}

impl BoundParams {
    /// Extracts the bound parameters of a system and box; `k_min` and
    /// `k_max` come from the system's own exponent table.
    pub fn from_system(sys: &SystemSpec, bx: &BoxSpec, kappa: f64) -> Self {
        BoundParams {
            kappa,
            k_min: sys.min_exponent(),
            k_max: sys.max_exponent(),
            n: sys.n(),
            s: sys.s(),
            h: bx.h(),
            p: sys.p(),
        }
    }

    /// The saving exponent at the largest exponent `k_max`.
    pub fn eta(&self) -> Result<f64, BoundError> {
        eta(self.kappa, self.k_max)
    }

    /// Whether the exponents satisfy the ladder regime `3 <= k_min <= k_max`.
    pub fn ladder_in_regime(&self) -> bool {
        self.k_min >= 3 && self.k_min <= self.k_max
    }

    /// The box-count error bound at these parameters.
    pub fn error_bound(&self) -> Result<ErrorBound, BoundError> {
        box_count_error_bound(
            self.h as u64,
            self.p as u64,
            self.n,
            self.s,
            self.kappa,
            self.k_min,
            self.k_max,
        )
    }
}
