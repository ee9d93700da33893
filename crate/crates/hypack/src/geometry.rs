//! Geometric realization of marked triangulations.
//!
//! Every non-marked triangle becomes an equilateral triangle of side `2r`
//! and every marked triangle a horocyclic ideal triangle with compact side
//! `2r`, where `r` solves the packing-radius equation. The complex realizes
//! a complete hyperbolic surface with `k` disks of radius `r` exactly when
//! every non-marked vertex closes up to total angle `2π` and every cusp is
//! folded.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{solve_vor, BoundsError, SurfaceSignature};
use crate::complex::{ComplexError, TriangulatedComplex};
use crate::hyptrig::{alpha, beta, disk_area, surface_area, triangle_areas, HypLength, TrigError};

/// Maximum angle defect and area residual accepted by [`realize`].
pub const REALIZE_TOLERANCE: f64 = 1e-9;

/// Errors raised while realizing a complex.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("complex does not realize the extremal surface: {}", .0.failures.join("; "))]
    NotRealized(Box<GeometricCertificate>),
}

/// Angle data at one non-marked vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexAngle {
    /// Corners of equilateral triangles.
    pub i: usize,
    /// Corners of horocyclic triangles.
    pub j: usize,
    pub angle_sum: f64,
    /// `|angle_sum − 2π|`.
    pub defect: f64,
}

/// Result of [`evaluate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometricCertificate {
    pub r: HypLength,
    pub edge_length: HypLength,
    pub vertices: Vec<VertexAngle>,
    pub max_defect: f64,
    pub density: f64,
    /// Total triangle area minus `−2πχ`.
    pub area_residual: f64,
    pub complete: bool,
    pub failures: Vec<String>,
}

impl GeometricCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Packing density `k·disk_area(r)/surface_area(χ)` at `r = solve_vor`.
pub fn density(sig: SurfaceSignature, k: i64) -> Result<f64, GeometryError> {
    let r = solve_vor(sig, k)?;
    Ok(k as f64 * disk_area(r)? / surface_area(sig.chi)?)
}

/// True when each marked triangle's two sides at its marked corner are
/// paired with each other, fixing the marked corner.
pub fn completeness_check(c: &TriangulatedComplex) -> bool {
    c.marked().iter().all(|m| {
        let (out, inn) = (m.out_side(), m.in_side());
        c.pairing_of(out)
            .map(|p| {
                let p = c.pairings()[p];
                p.reversed && p.other(out) == Some(inn)
            })
            .unwrap_or(false)
    })
}

/// Computes angle sums, area and density for `c` with `r = solve_vor(sig, k)`
/// without judging them beyond recording failures.
pub fn evaluate(c: &TriangulatedComplex, sig: SurfaceSignature, k: i64) -> Result<GeometricCertificate, GeometryError> {
    let r = solve_vor(sig, k)?;
    let (a, b) = (alpha(r)?, beta(r)?);
    let marked_tris = c.marked_triangles();
    let vs = c.vertex_structure()?;
    let vertices: Vec<VertexAngle> = vs
        .classes
        .iter()
        .filter(|v| !v.marked)
        .map(|v| {
            let j = v.corners.iter().filter(|k| marked_tris.contains(&k.tri)).count();
            let i = v.triangle_valence - j;
            let angle_sum = i as f64 * a + j as f64 * b;
            VertexAngle {
                i,
                j,
                angle_sum,
                defect: (angle_sum - 2.0 * PI).abs(),
            }
        })
        .collect();
    let max_defect = vertices.iter().map(|v| v.defect).fold(0.0, f64::max);
    let (eq, horo) = triangle_areas(r)?;
    let n_horo = marked_tris.len() as f64;
    let n_eq = c.triangle_count() as f64 - n_horo;
    let area_residual = n_eq * eq + n_horo * horo - surface_area(sig.chi)?;
    let complete = completeness_check(c);
    let mut failures = Vec::new();
    if vertices.len() as i64 != k {
        failures.push(format!("{} non-marked vertices, expected {k}", vertices.len()));
    }
    if marked_tris.len() as i64 != sig.n {
        failures.push(format!("{} cusps, expected {}", marked_tris.len(), sig.n));
    }
    for (idx, v) in vertices.iter().enumerate() {
        if v.defect.is_nan() || v.defect >= REALIZE_TOLERANCE {
            failures.push(format!(
                "vertex {idx} with (i, j) = ({}, {}) has angle defect {:e}",
                v.i, v.j, v.defect
            ));
        }
    }
    if area_residual.is_nan() || area_residual.abs() >= REALIZE_TOLERANCE {
        failures.push(format!("area residual {area_residual:e}"));
    }
    if !complete {
        failures.push("a cusp triangle is not folded onto itself".into());
    }
    Ok(GeometricCertificate {
        r,
        edge_length: 2.0 * r,
        vertices,
        max_defect,
        density: k as f64 * disk_area(r)? / surface_area(sig.chi)?,
        area_residual,
        complete,
        failures,
    })
}

/// Realizes `c` as the extremal surface for `(sig, k)`, failing with the
/// defect report when some check does not hold.
pub fn realize(c: &TriangulatedComplex, sig: SurfaceSignature, k: i64) -> Result<GeometricCertificate, GeometryError> {
    let cert = evaluate(c, sig, k)?;
    if cert.passed() {
        Ok(cert)
    } else {
        Err(GeometryError::NotRealized(Box::new(cert)))
    }
}
