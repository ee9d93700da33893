//! Packing-radius bounds for `k` disks on a hyperbolic surface with Euler
//! characteristic `χ` and `n` cusps.
//!
//! The sharp radius `r_vor` solves `i·α(r) + j·β(r) = 2π` with
//! `i = 6 − (6χ+3n)/k` and `j = 2n/k`. It is compared with the bound
//! `r_boroczky` (the same equation with `n = 0`) and the naive area bound
//! `cosh r_naive = 1 − χ/k`.

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::hyptrig::{alpha, beta, HypLength, TrigError};

/// Environment variable overriding the solver tolerance.
pub const TOLERANCE_ENV: &str = "HYPACK_TOLERANCE";

/// Default relative tolerance on `|f_k(r) − 2π| / 2π`.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Root bracket used by [`solve_vor`].
pub const BRACKET: (f64, f64) = (1e-9, 50.0);

/// Absolute tolerance on `α(r) − 2π/m` in the large-`k` necessary condition.
pub const ANGLE_MATCH_TOLERANCE: f64 = 1e-9;

/// Errors raised by the bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("invalid signature (chi={chi}, n={n}): {reason}")]
    InvalidSignature { chi: i64, n: i64, reason: String },
    #[error("k must be positive, got {0}")]
    InvalidK(i64),
    #[error("r must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error(transparent)]
    Trig(#[from] TrigError),
}

/// Euler characteristic and cusp count of a finite-area hyperbolic surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceSignature {
    pub chi: i64,
    pub n: i64,
}

impl SurfaceSignature {
    /// Validated signature: `χ < 0`, `n ≥ 0` and some surface of either
    /// orientability class has this `(χ, n)`.
    pub fn new(chi: i64, n: i64) -> Result<Self, BoundsError> {
        let sig = SurfaceSignature { chi, n };
        let fail = |reason: &str| BoundsError::InvalidSignature {
            chi,
            n,
            reason: reason.to_string(),
        };
        if chi >= 0 {
            return Err(fail("chi must be negative"));
        }
        if n < 0 {
            return Err(fail("n must be nonnegative"));
        }
        if sig.orientable_genus().is_none() && sig.nonorientable_genus().is_none() {
            return Err(fail("no surface of either orientability has this signature"));
        }
        Ok(sig)
    }

    /// Genus `g` with `χ = 2 − 2g − n`, if it is a nonnegative integer.
    pub fn orientable_genus(&self) -> Option<i64> {
        let twice = 2 - self.chi - self.n;
        (twice >= 0 && twice % 2 == 0).then_some(twice / 2)
    }

    /// Genus `g` with `χ = 2 − g − n`, if it is at least one.
    pub fn nonorientable_genus(&self) -> Option<i64> {
        let g = 2 - self.chi - self.n;
        (g >= 1).then_some(g)
    }
}

/// Exact valences `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Valences {
    pub i: Ratio<i64>,
    pub j: Ratio<i64>,
}

impl Valences {
    /// True when `k | 6χ` and `k | n`, so both valences are integers.
    pub fn integral(&self) -> bool {
        self.i.is_integer() && self.j.is_integer()
    }

    fn as_f64(&self) -> (f64, f64) {
        (ratio_f64(self.i), ratio_f64(self.j))
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Attainability classification of `r_vor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Attainability {
    AttainedByConstruction,
    NotAttained,
    NecessaryConditionFails,
    Unknown,
}

impl Attainability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Attainability::AttainedByConstruction => "AttainedByConstruction",
            Attainability::NotAttained => "NotAttained",
            Attainability::NecessaryConditionFails => "NecessaryConditionFails",
            Attainability::Unknown => "Unknown",
        }
    }
}

/// All bounds for one `(χ, n, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub sig: SurfaceSignature,
    pub k: i64,
    pub r_vor: HypLength,
    pub r_boroczky: HypLength,
    pub r_naive: HypLength,
    pub valences: Valences,
    pub attainability: Attainability,
}

fn check_k(k: i64) -> Result<(), BoundsError> {
    if k >= 1 {
        Ok(())
    } else {
        Err(BoundsError::InvalidK(k))
    }
}

/// `i = 6 − (6χ+3n)/k`, `j = 2n/k` as exact rationals.
pub fn valences(sig: SurfaceSignature, k: i64) -> Result<Valences, BoundsError> {
    check_k(k)?;
    Ok(Valences {
        i: Ratio::from_integer(6) - Ratio::new(6 * sig.chi + 3 * sig.n, k),
        j: Ratio::new(2 * sig.n, k),
    })
}

/// `f_k(r) = i·α(r) + j·β(r)`.
pub fn f_k(r: HypLength, sig: SurfaceSignature, k: i64) -> Result<f64, BoundsError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(BoundsError::InvalidRadius(r));
    }
    let (i, j) = valences(sig, k)?.as_f64();
    Ok(i * alpha(r)? + j * beta(r)?)
}

/// Solver tolerance from `HYPACK_TOLERANCE`, defaulting to [`DEFAULT_TOLERANCE`].
pub fn solver_tolerance() -> f64 {
    std::env::var(TOLERANCE_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(DEFAULT_TOLERANCE)
}

/// Unique root of `f_k(r) = 2π`, using the environment tolerance.
pub fn solve_vor(sig: SurfaceSignature, k: i64) -> Result<HypLength, BoundsError> {
    solve_vor_with_tolerance(sig, k, solver_tolerance())
}

/// Unique root of `f_k(r) = 2π` with `|f_k(r) − 2π| < tol·2π`.
///
/// Bracketed bisection on [`BRACKET`] followed by a secant polish that is
/// kept inside the bracket.
pub fn solve_vor_with_tolerance(sig: SurfaceSignature, k: i64, tol: f64) -> Result<HypLength, BoundsError> {
    let (i, j) = valences(sig, k)?.as_f64();
    let g = |r: f64| -> Result<f64, BoundsError> { Ok(i * alpha(r)? + j * beta(r)? - 2.0 * PI) };
    let target = tol * 2.0 * PI;
    let (mut lo, mut hi) = BRACKET;
    let (mut g_lo, mut g_hi) = (g(lo)?, g(hi)?);
    debug_assert!(g_lo > 0.0 && g_hi < 0.0);
    // Bisect until the bracket is narrow relative to its location.
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid > 0.0 {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    let mut best = if g_lo.abs() < g_hi.abs() {
        (lo, g_lo)
    } else {
        (hi, g_hi)
    };
    for _ in 0..100 {
        if best.1.abs() < target || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let mut x = hi - g_hi * (hi - lo) / (g_hi - g_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let gx = g(x)?;
        if gx > 0.0 {
            lo = x;
            g_lo = gx;
        } else {
            hi = x;
            g_hi = gx;
        }
        if gx.abs() < best.1.abs() {
            best = (x, gx);
        }
        // Guard against one-sided secant stagnation.
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid > 0.0 {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
        if g_mid.abs() < best.1.abs() {
            best = (mid, g_mid);
        }
    }
    Ok(best.0)
}

/// Naive area bound `cosh r_A = 1 − χ/k`.
pub fn naive_bound(chi: i64, k: i64) -> Result<HypLength, BoundsError> {
    check_k(k)?;
    if chi >= 0 {
        return Err(BoundsError::InvalidSignature {
            chi,
            n: 0,
            reason: "chi must be negative".into(),
        });
    }
    Ok((1.0 - chi as f64 / k as f64).acosh())
}

/// Bound derived from Böröczky's density bound: the `n = 0` root.
pub fn boroczky_bound(chi: i64, k: i64) -> Result<HypLength, BoundsError> {
    solve_vor(SurfaceSignature::new(chi, 0)?, k)
}

/// Attainability classification.
pub fn attainability(sig: SurfaceSignature, k: i64) -> Result<Attainability, BoundsError> {
    check_k(k)?;
    let six_chi = 6 * sig.chi;
    if six_chi % k == 0 && sig.n % k == 0 {
        return Ok(Attainability::AttainedByConstruction);
    }
    if sig.n == 0 {
        return Ok(Attainability::NotAttained);
    }
    if k > sig.n {
        let a = alpha(solve_vor(sig, k)?)?;
        let m = (2.0 * PI / a).round();
        let matched = [m - 1.0, m, m + 1.0]
            .iter()
            .filter(|m| **m >= 1.0)
            .any(|m| (a - 2.0 * PI / m).abs() < ANGLE_MATCH_TOLERANCE);
        if !matched {
            return Ok(Attainability::NecessaryConditionFails);
        }
    }
    Ok(Attainability::Unknown)
}

/// Full report for `(χ, n, k)`.
pub fn report(sig: SurfaceSignature, k: i64) -> Result<BoundReport, BoundsError> {
    Ok(BoundReport {
        sig,
        k,
        r_vor: solve_vor(sig, k)?,
        r_boroczky: boroczky_bound(sig.chi, k)?,
        r_naive: naive_bound(sig.chi, k)?,
        valences: valences(sig, k)?,
        attainability: attainability(sig, k)?,
    })
}
