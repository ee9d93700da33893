//! Hyperbolic trigonometry kernel (curvature −1).
//!
//! Vertex angles of equilateral and horocyclic ideal triangles, their
//! analytic inverses, areas, and the quadrilateral and thick-part relations.
//! All angles are radians and all lengths are intrinsic hyperbolic lengths.

use std::f64::consts::PI;

use thiserror::Error;

/// Angle in radians.
pub type Radians = f64;

/// Hyperbolic length.
pub type HypLength = f64;

/// Two-dimensional Margulis constant used as the upper guard of [`thick_radius`].
pub const MARGULIS_CONSTANT: f64 = 0.962;

/// Errors raised by the trigonometric kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrigError {
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

fn finite(name: &'static str, value: f64) -> Result<f64, TrigError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(TrigError::NonFinite { name, value })
    }
}

fn out_of_range(name: &'static str, value: f64, range: &'static str) -> TrigError {
    TrigError::OutOfRange { name, value, range }
}

/// Vertex angle of the equilateral triangle with side length `2r`:
/// `α(r) = 2·asin(1/(2·cosh r))`.
pub fn alpha(r: HypLength) -> Result<Radians, TrigError> {
    let r = finite("r", r)?;
    if r < 0.0 {
        return Err(out_of_range("r", r, "[0, inf)"));
    }
    Ok(2.0 * (0.5 / r.cosh()).asin())
}

/// Angle at a finite vertex of the horocyclic ideal triangle whose compact
/// side has length `2r`: `β(r) = asin(1/cosh r)`.
pub fn beta(r: HypLength) -> Result<Radians, TrigError> {
    let r = finite("r", r)?;
    if r < 0.0 {
        return Err(out_of_range("r", r, "[0, inf)"));
    }
    Ok((1.0 / r.cosh()).asin())
}

/// Inverse of [`alpha`]: `cosh r = 1/(2·sin(a/2))`.
pub fn inv_alpha(a: Radians) -> Result<HypLength, TrigError> {
    let a = finite("a", a)?;
    if !(a > 0.0 && a <= PI / 3.0 + 4.0 * f64::EPSILON) {
        return Err(out_of_range("a", a, "(0, pi/3]"));
    }
    Ok(acosh_clamped(0.5 / (0.5 * a).sin()))
}

/// Inverse of [`beta`]: `cosh r = 1/sin b`.
pub fn inv_beta(b: Radians) -> Result<HypLength, TrigError> {
    let b = finite("b", b)?;
    if !(b > 0.0 && b <= PI / 2.0 + 4.0 * f64::EPSILON) {
        return Err(out_of_range("b", b, "(0, pi/2]"));
    }
    Ok(acosh_clamped(1.0 / b.sin()))
}

fn acosh_clamped(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x.acosh()
    }
}

/// Areas `(π − 3α(r), π − 2β(r))` of the equilateral and horocyclic ideal
/// triangles with compact sides of length `2r`.
pub fn triangle_areas(r: HypLength) -> Result<(f64, f64), TrigError> {
    let r = finite("r", r)?;
    if r <= 0.0 {
        return Err(out_of_range("r", r, "(0, inf)"));
    }
    Ok((PI - 3.0 * alpha(r)?, PI - 2.0 * beta(r)?))
}

/// Area of a hyperbolic disk of radius `r`: `2π(cosh r − 1)`.
pub fn disk_area(r: HypLength) -> Result<f64, TrigError> {
    let r = finite("r", r)?;
    if r < 0.0 {
        return Err(out_of_range("r", r, "[0, inf)"));
    }
    let s = (0.5 * r).sinh();
    Ok(4.0 * PI * s * s)
}

/// Area `−2πχ` of a complete finite-area hyperbolic surface.
pub fn surface_area(chi: i64) -> Result<f64, TrigError> {
    if chi >= 0 {
        return Err(out_of_range("chi", chi as f64, "(-inf, 0)"));
    }
    Ok(-2.0 * PI * chi as f64)
}

/// Thick-part radius `r′ = asinh((1 − e^{−2r})/2)`, for `0 < r < MARGULIS_CONSTANT`.
pub fn thick_radius(r: HypLength) -> Result<HypLength, TrigError> {
    let r = finite("r", r)?;
    if !(r > 0.0 && r < MARGULIS_CONSTANT) {
        return Err(out_of_range("r", r, "(0, margulis)"));
    }
    Ok((-0.5 * (-2.0 * r).exp_m1()).asinh())
}

/// Length `ℓ` of the based loop at distance `h` from a closed geodesic of
/// length `δ`: `sinh(ℓ/2) = cosh h · sinh(δ/2)`.
pub fn quad_loop_length(delta: HypLength, h: HypLength) -> Result<HypLength, TrigError> {
    let delta = finite("delta", delta)?;
    let h = finite("h", h)?;
    if delta <= 0.0 {
        return Err(out_of_range("delta", delta, "(0, inf)"));
    }
    if h < 0.0 {
        return Err(out_of_range("h", h, "[0, inf)"));
    }
    Ok(2.0 * (h.cosh() * (0.5 * delta).sinh()).asinh())
}

/// Universal lower bound `asinh(2/√3)` on the maximal injectivity radius of a
/// hyperbolic surface.
pub fn yamada_radius() -> HypLength {
    (2.0 / 3f64.sqrt()).asinh()
}
