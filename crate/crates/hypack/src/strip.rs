//! Lengths of closed geodesics after inserting a strip of width `ε`.
//!
//! The non-separating case glues a strip across a geodesic of length `δ`.
//! The separating case splits `δ/2` into arcs `a` and `b` and changes
//! regime at `ε* = 2·asinh(1/sinh h)`: below it two auxiliary geodesics meet
//! at an angle `ψ`, above it they are ultraparallel at distance `d`.

use serde::Serialize;
use thiserror::Error;

use crate::hyptrig::{HypLength, Radians};

/// Residual accepted by [`solve_eps`].
pub const SOLVE_TOLERANCE: f64 = 1e-12;

/// Errors raised by strip computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StripError {
    #[error("{name} must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("target length {target} is not above the infimum {infimum}")]
    InfeasibleTarget { target: f64, infimum: f64 },
    #[error("no strip width reaches length {0}")]
    Unreachable(f64),
}

/// Non-separating strip across a geodesic of length `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonSepParams {
    pub delta: HypLength,
    pub h: HypLength,
    pub eps: HypLength,
}

/// Separating strip on arcs of lengths `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SepParams {
    pub a: HypLength,
    pub b: HypLength,
    pub h: HypLength,
    pub eps: HypLength,
}

/// Geometry of a strip without its width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum StripCase {
    NonSeparating { delta: HypLength, h: HypLength },
    Separating { a: HypLength, b: HypLength, h: HypLength },
}

/// Separating-case regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Intersecting,
    Transition,
    Ultraparallel,
}

fn positive(name: &'static str, value: f64) -> Result<f64, StripError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(StripError::InvalidParameter { name, value })
    }
}

/// Side `z` and non-right angle `θ` of the quadrilateral with sides `ε/2`
/// and `h`: `sinh z = cosh h·sinh(ε/2)`, `sin θ = cosh(ε/2)/cosh z`.
pub fn quadfacts(eps: HypLength, h: HypLength) -> Result<(HypLength, Radians), StripError> {
    positive("eps", eps)?;
    positive("h", h)?;
    let z = (h.cosh() * (0.5 * eps).sinh()).asinh();
    let theta = ((0.5 * eps).cosh() / z.cosh()).min(1.0).asin();
    Ok((z, theta))
}

/// Length `2x` of the geodesic crossing a non-separating strip, with
/// `cosh x = cosh h·sinh(ε/2)·sinh(δ/2) + cosh(ε/2)·cosh(δ/2)`.
pub fn nonsep_length(p: &NonSepParams) -> Result<HypLength, StripError> {
    let delta = positive("delta", p.delta)?;
    let h = positive("h", p.h)?;
    let e = positive("eps", p.eps)? * 0.5;
    let c = h.cosh() * e.sinh() * (0.5 * delta).sinh() + e.cosh() * (0.5 * delta).cosh();
    Ok(2.0 * c.acosh())
}

/// Width `ε* = 2·asinh(1/sinh h)` at which the separating regimes meet.
pub fn phase_transition(h: HypLength) -> Result<HypLength, StripError> {
    Ok(2.0 * (1.0 / positive("h", h)?.sinh()).asinh())
}

fn check_sep(p: &SepParams) -> Result<(), StripError> {
    positive("a", p.a)?;
    positive("b", p.b)?;
    positive("h", p.h)?;
    positive("eps", p.eps)?;
    Ok(())
}

/// `s = sinh h·sinh(ε/2)`; the regimes meet at `s = 1`.
fn sep_s(p: &SepParams) -> f64 {
    p.h.sinh() * (0.5 * p.eps).sinh()
}

/// Regime of a separating strip.
pub fn regime(p: &SepParams) -> Result<Regime, StripError> {
    check_sep(p)?;
    let star = phase_transition(p.h)?;
    Ok(if p.eps < star {
        Regime::Intersecting
    } else if p.eps > star {
        Regime::Ultraparallel
    } else {
        Regime::Transition
    })
}

/// `cosh x` below `ε*` from the triangle with angle `ψ` and the pentagon
/// law: `cos ψ = 2s² − 1`, `cosh y = cosh(ε/2)/√(1 − s²)`,
/// `cosh x = ½[(1 − cos ψ)·cosh(2y + a + b) − (1 + cos ψ)·cosh(a − b)]`.
pub fn sep_cosh_intersecting(p: &SepParams) -> Result<f64, StripError> {
    check_sep(p)?;
    let s2 = sep_s(p).powi(2);
    if s2 >= 1.0 {
        return Err(StripError::InvalidParameter {
            name: "eps",
            value: p.eps,
        });
    }
    let cos_psi = 2.0 * s2 - 1.0;
    let y = ((0.5 * p.eps).cosh() / (1.0 - s2).sqrt()).acosh();
    Ok(0.5 * ((1.0 - cos_psi) * (2.0 * y + p.a + p.b).cosh() - (1.0 + cos_psi) * (p.a - p.b).cosh()))
}

/// `cosh x` above `ε*` from the right-angled hexagon law with
/// `cosh d = 2s² − 1`, `cosh y = cosh h·sinh(ε/2)/√(s² − 1)`,
/// `cosh x = ½[cosh(2y + a + b)·(cosh d − 1) − cosh(a − b)·(cosh d + 1)]`.
pub fn sep_cosh_ultraparallel(p: &SepParams) -> Result<f64, StripError> {
    check_sep(p)?;
    let s2 = sep_s(p).powi(2);
    if s2 <= 1.0 {
        return Err(StripError::InvalidParameter {
            name: "eps",
            value: p.eps,
        });
    }
    let cosh_d = 2.0 * s2 - 1.0;
    let y = (p.h.cosh() * (0.5 * p.eps).sinh() / (s2 - 1.0).sqrt()).acosh();
    Ok(0.5 * ((2.0 * y + p.a + p.b).cosh() * (cosh_d - 1.0) - (p.a - p.b).cosh() * (cosh_d + 1.0)))
}

/// Expanded form of the intersecting-regime value:
/// `cosh ε·cosh(a+b) + sinh ε·cosh h·sinh(a+b) + s²·(cosh(a+b) − cosh(a−b))`.
pub fn sep_cosh_expanded(p: &SepParams) -> Result<f64, StripError> {
    check_sep(p)?;
    let (sum, diff) = (p.a + p.b, p.a - p.b);
    Ok(p.eps.cosh() * sum.cosh()
        + p.eps.sinh() * p.h.cosh() * sum.sinh()
        + sep_s(p).powi(2) * (sum.cosh() - diff.cosh()))
}

/// Length `2x` of the geodesic crossing a separating strip.
pub fn sep_length(p: &SepParams) -> Result<HypLength, StripError> {
    let c = match regime(p)? {
        Regime::Intersecting if sep_s(p) < 1.0 => sep_cosh_intersecting(p)?,
        Regime::Ultraparallel if sep_s(p) > 1.0 => sep_cosh_ultraparallel(p)?,
        _ => sep_cosh_expanded(p)?,
    };
    Ok(2.0 * c.acosh())
}

impl StripCase {
    /// Length at width `eps`.
    pub fn length(&self, eps: HypLength) -> Result<HypLength, StripError> {
        match *self {
            StripCase::NonSeparating { delta, h } => nonsep_length(&NonSepParams { delta, h, eps }),
            StripCase::Separating { a, b, h } => sep_length(&SepParams { a, b, h, eps }),
        }
    }

    /// Limit of the length as `ε → 0`.
    pub fn infimum(&self) -> HypLength {
        match *self {
            StripCase::NonSeparating { delta, .. } => delta,
            StripCase::Separating { a, b, .. } => 2.0 * (a + b),
        }
    }

    fn h(&self) -> HypLength {
        match *self {
            StripCase::NonSeparating { h, .. } | StripCase::Separating { h, .. } => h,
        }
    }

    /// `n` samples `(ε, length)` at `ε = m·eps_max/n` for `m = 1..=n`.
    pub fn trace(&self, eps_max: HypLength, n: usize) -> Result<Vec<(HypLength, HypLength)>, StripError> {
        positive("eps_max", eps_max)?;
        (1..=n)
            .map(|m| {
                let eps = eps_max * m as f64 / n as f64;
                Ok((eps, self.length(eps)?))
            })
            .collect()
    }

    /// Default trace range `2ε*`.
    pub fn default_eps_max(&self) -> Result<HypLength, StripError> {
        Ok(2.0 * phase_transition(self.h())?)
    }
}

/// Width `ε` at which the strip geodesic has length `target`, by monotone
/// bisection.
pub fn solve_eps(target: HypLength, case: &StripCase) -> Result<HypLength, StripError> {
    let infimum = case.infimum();
    if !target.is_finite() || target <= infimum {
        return Err(StripError::InfeasibleTarget { target, infimum });
    }
    case.length(1.0)?;
    let mut hi = 1.0;
    while case.length(hi)? < target {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(StripError::Unreachable(target));
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let len = case.length(mid)?;
        if (len - target).abs() <= SOLVE_TOLERANCE * target.max(1.0) {
            return Ok(mid);
        }
        if len < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if lo > 0.0 { 0.5 * (lo + hi) } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonsep_example() {
        let len = nonsep_length(&NonSepParams {
            delta: 0.2,
            h: 1.0,
            eps: 0.5,
        })
        .unwrap();
        assert!((len / 2.0 - 0.3865).abs() < 1e-4);
    }

    #[test]
    fn transition_value() {
        assert!((phase_transition(1.0).unwrap() - 1.5439).abs() < 1e-4);
    }

    #[test]
    fn infeasible_target() {
        let case = StripCase::NonSeparating { delta: 0.2, h: 1.0 };
        assert!(matches!(
            solve_eps(0.1, &case),
            Err(StripError::InfeasibleTarget { .. })
        ));
        assert!(matches!(
            solve_eps(0.2, &case),
            Err(StripError::InfeasibleTarget { .. })
        ));
    }
}
