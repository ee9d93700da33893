//! Assembly of closed and marked surfaces from building blocks.
//!
//! Closed surfaces with `k` vertices of equal valence are glued from blocks
//! in rings or around a holed torus, recording every seam as an oriented
//! edge cycle. Marked surfaces either cap blocks with `X_l` or `Z_l`, or
//! unzip every recorded seam edge of a closed surface and sew in a `Y_l`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{build, marked_x, marked_y, marked_z, BlockError, BlockFamily, BlockSpec};
use crate::complex::{
    BoundaryComponent, BoundarySlot, ComplexError, MarkedCertificate, Pairing, Slot, TriangulatedComplex,
};
use crate::polygon::{Polygon, PolygonGluing};

/// Errors raised by the assembler.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("inadmissible request: {0}")]
    Inadmissible(String),
    #[error("no such triangulation: {0}")]
    Unrealizable(String),
    #[error("assembled surface failed its certificate: {0}")]
    CertificateFailed(String),
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// An edge of a complex with a direction: `forward` runs from the start to
/// the end of the pairing's first slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub pairing: usize,
    pub forward: bool,
}

/// A closed surface with its seams as oriented edge cycles. Every vertex is
/// the tail of exactly one seam edge and the head of exactly one.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub complex: TriangulatedComplex,
    pub curves: Vec<Vec<OrientedEdge>>,
}

/// Parameters of a marked surface: Euler characteristic `chi` of the
/// punctured surface, `n` marked points, `k` unmarked vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyRequest {
    pub chi: i64,
    pub n: i64,
    pub k: i64,
    pub orientable: bool,
}

impl AssemblyRequest {
    pub fn new(chi: i64, n: i64, k: i64, orientable: bool) -> Self {
        AssemblyRequest { chi, n, k, orientable }
    }

    /// Genus of the underlying closed surface.
    pub fn genus(&self) -> Result<i64, AssemblyError> {
        let twice = 2 - self.chi - self.n;
        if self.orientable {
            if twice < 0 || twice % 2 != 0 {
                return Err(AssemblyError::Inadmissible(format!(
                    "no orientable surface has chi = {} with {} punctures",
                    self.chi, self.n
                )));
            }
            Ok(twice / 2)
        } else if twice < 1 {
            Err(AssemblyError::Inadmissible(format!(
                "no non-orientable surface has chi = {} with {} punctures",
                self.chi, self.n
            )))
        } else {
            Ok(twice)
        }
    }

    /// Checks sign, divisibility and genus conditions.
    pub fn validate(&self) -> Result<i64, AssemblyError> {
        let bad = |m: String| Err(AssemblyError::Inadmissible(m));
        if self.chi >= 0 {
            return bad(format!("chi must be negative, got {}", self.chi));
        }
        if self.n < 0 {
            return bad(format!("n must be nonnegative, got {}", self.n));
        }
        if self.k < 1 {
            return bad(format!("k must be positive, got {}", self.k));
        }
        if (6 * self.chi) % self.k != 0 {
            return bad(format!("{} does not divide {}", self.k, -6 * self.chi));
        }
        if self.n % self.k != 0 {
            return bad(format!("{} does not divide n = {}", self.k, self.n));
        }
        self.genus()
    }

    /// Non-marked and marked corner counts `(i, j)` required at every vertex.
    pub fn valences(&self) -> (i64, i64) {
        (6 - (6 * self.chi + 3 * self.n) / self.k, 2 * self.n / self.k)
    }
}

/// Corner counts at one non-marked vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexReport {
    pub non_marked: usize,
    pub marked: usize,
}

/// Combinatorial checks on an assembled marked surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssemblyCertificate {
    pub request: AssemblyRequest,
    pub i: i64,
    pub j: i64,
    /// One entry per non-marked vertex.
    pub vertices: Vec<VertexReport>,
    pub euler_characteristic: i64,
    pub triangle_count: usize,
    pub connected: bool,
    pub orientable: bool,
    pub marked: MarkedCertificate,
    pub failures: Vec<String>,
}

impl AssemblyCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks a complex against a request.
pub fn certify(c: &TriangulatedComplex, req: &AssemblyRequest) -> Result<AssemblyCertificate, AssemblyError> {
    let (i, j) = req.valences();
    let mut failures = Vec::new();
    let connected = c.is_connected();
    if !connected {
        failures.push(format!("complex has {} components", c.component_count()));
    }
    let vs = c.vertex_structure()?;
    let marked_tris = c.marked_triangles();
    let vertices: Vec<VertexReport> = vs
        .classes
        .iter()
        .filter(|v| !v.marked)
        .map(|v| {
            let m = v.corners.iter().filter(|k| marked_tris.contains(&k.tri)).count();
            VertexReport {
                non_marked: v.triangle_valence - m,
                marked: m,
            }
        })
        .collect();
    if vertices.len() as i64 != req.k {
        failures.push(format!("{} non-marked vertices, expected {}", vertices.len(), req.k));
    }
    for (idx, v) in vertices.iter().enumerate() {
        if v.non_marked as i64 != i || v.marked as i64 != j {
            failures.push(format!(
                "vertex {idx} has (i, j) = ({}, {}), expected ({i}, {j})",
                v.non_marked, v.marked
            ));
        }
    }
    if vs.classes.iter().any(|v| v.boundary) {
        failures.push("complex has boundary".into());
    }
    let euler_characteristic = c.euler_characteristic()?;
    if euler_characteristic != req.chi + req.n {
        failures.push(format!(
            "Euler characteristic {euler_characteristic}, expected {}",
            req.chi + req.n
        ));
    }
    let triangle_count = c.triangle_count();
    if triangle_count as i64 != 2 * (req.k - req.chi) {
        failures.push(format!(
            "{triangle_count} triangles, expected {}",
            2 * (req.k - req.chi)
        ));
    }
    let orientable = c.orientation_signs().is_some();
    if connected && orientable != req.orientable {
        failures.push(format!("orientable = {orientable}, expected {}", req.orientable));
    }
    let marked = c.validate_marked()?;
    if marked.marked_vertices as i64 != req.n {
        failures.push(format!(
            "{} marked vertices, expected {}",
            marked.marked_vertices, req.n
        ));
    }
    failures.extend(marked.violations.iter().cloned());
    Ok(AssemblyCertificate {
        request: *req,
        i,
        j,
        vertices,
        euler_characteristic,
        triangle_count,
        connected,
        orientable,
        marked,
        failures,
    })
}

/// Incremental gluing of blocks with seam bookkeeping.
struct Builder {
    complex: TriangulatedComplex,
    curves: Vec<Vec<OrientedEdge>>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            complex: TriangulatedComplex::triangles(0),
            curves: Vec::new(),
        }
    }

    /// Adds a disjoint piece and returns its boundary circles.
    fn add(&mut self, piece: &TriangulatedComplex) -> Result<Vec<BoundaryComponent>, AssemblyError> {
        let off = self.complex.triangle_count();
        self.complex = self.complex.disjoint_union(piece);
        Ok(piece
            .boundary_components()?
            .into_iter()
            .map(|bc| BoundaryComponent {
                cycle: bc
                    .cycle
                    .iter()
                    .map(|b| BoundarySlot {
                        slot: Slot::new(b.slot.tri + off, b.slot.side),
                        forward: b.forward,
                    })
                    .collect(),
                vertex_count: bc.vertex_count,
            })
            .collect())
    }

    fn add_block(
        &mut self,
        family: BlockFamily,
        param: usize,
        v: usize,
    ) -> Result<Vec<BoundaryComponent>, AssemblyError> {
        let block = build(BlockSpec::new(family, param, v))?;
        self.add(&block.complex)
    }

    /// Glues two boundary circles orientation-compatibly and records the seam.
    fn join(&mut self, a: &BoundaryComponent, b: &BoundaryComponent) -> Result<(), AssemblyError> {
        let (c, ids) = self.complex.pair_boundaries(a, b, 0, true)?;
        self.complex = c;
        self.curves.push(
            ids.iter()
                .zip(&a.cycle)
                .map(|(&pairing, x)| OrientedEdge {
                    pairing,
                    forward: x.forward,
                })
                .collect(),
        );
        Ok(())
    }

    fn finish(self) -> Assembly {
        Assembly {
            complex: self.complex,
            curves: self.curves,
        }
    }
}

fn check_genus(g: i64, min: i64, kind: &str) -> Result<usize, AssemblyError> {
    if g < min {
        return Err(AssemblyError::Inadmissible(format!(
            "closed {kind} surfaces need genus >= {min}, got {g}"
        )));
    }
    Ok(g as usize)
}

fn check_divides(k: i64, m: i64) -> Result<usize, AssemblyError> {
    if k < 1 || m % k != 0 {
        return Err(AssemblyError::Inadmissible(format!("{k} does not divide {m}")));
    }
    Ok(k as usize)
}

/// Ring `S_0 A_0 S_1 A_1 ...` where each two-holed `S_i` has its second
/// circle joined to `A_i` and `A_i` is joined to the first circle of `S_{i+1}`.
fn ring(
    b: &mut Builder,
    copies: usize,
    two_holed: (BlockFamily, usize),
    spacer: (BlockFamily, usize),
    v: usize,
) -> Result<Vec<Vec<BoundaryComponent>>, AssemblyError> {
    let mut s = Vec::new();
    let mut a = Vec::new();
    for _ in 0..copies {
        s.push(b.add_block(two_holed.0, two_holed.1, v)?);
        a.push(b.add_block(spacer.0, spacer.1, v)?);
    }
    for i in 0..copies {
        b.join(&s[i][1], &a[i][0])?;
        b.join(&a[i][1], &s[(i + 1) % copies][0])?;
    }
    Ok(a)
}

/// Holed torus with `holes` circles of `v` vertices, each capped by a block.
fn torus_with_caps(holes: usize, v: usize, cap: (BlockFamily, usize)) -> Result<Assembly, AssemblyError> {
    let mut b = Builder::new();
    let t = b.add_block(BlockFamily::TorusBHoled, holes, v)?;
    for bc in &t {
        let c = b.add_block(cap.0, cap.1, v)?;
        b.join(bc, &c[0])?;
    }
    Ok(b.finish())
}

/// A two-holed block of genus `g`, or the annulus when `g = 0`.
fn two_holed(g: usize) -> (BlockFamily, usize) {
    if g == 0 {
        (BlockFamily::Annulus, 0)
    } else {
        (BlockFamily::SigmaG2, g)
    }
}

/// Closed orientable surface of genus `g` with `k` vertices of valence
/// `12(g − 1)/k + 6`.
pub fn closed_orientable(g: i64, k: i64) -> Result<Assembly, AssemblyError> {
    let gu = check_genus(g, 2, "orientable")?;
    let ku = check_divides(k, 12 * (g - 1))?;
    if ku == 1 {
        let mut pg = PolygonGluing::new(vec![Polygon::fan(4 * gu, 0)]);
        for i in (0..4 * gu).filter(|i| i % 4 < 2) {
            pg.ident((0, i), (0, i + 2), false);
        }
        return Ok(Assembly {
            complex: pg.build()?.complex,
            curves: vec![vec![OrientedEdge {
                pairing: 0,
                forward: true,
            }]],
        });
    }
    let q = 12 * (gu - 1) / ku;
    let by = |d: usize| ku % d == 0;
    if !by(2) && !by(3) {
        return torus_with_caps(ku, 1, (BlockFamily::SigmaG1, (gu - 1) / ku));
    }
    if by(2) && !by(3) && !by(4) {
        let mut b = Builder::new();
        ring(
            &mut b,
            ku / 2,
            two_holed(2 * (gu - 1) / ku),
            (BlockFamily::Annulus, 0),
            1,
        )?;
        return Ok(b.finish());
    }
    if by(4) && !by(3) {
        let mut b = Builder::new();
        ring(
            &mut b,
            ku / 4,
            two_holed(4 * (gu - 1) / ku),
            (BlockFamily::Annulus, 0),
            2,
        )?;
        return Ok(b.finish());
    }
    if by(3) && !by(2) {
        return torus_with_caps(ku / 3, 3, (BlockFamily::SigmaG1, 3 * (gu - 1) / ku));
    }
    if (by(6) && !by(4)) || q % 2 == 0 {
        let mut b = Builder::new();
        ring(&mut b, ku / 6, two_holed(q / 2), (BlockFamily::Annulus, 0), 3)?;
        return Ok(b.finish());
    }
    // 12 | k with q odd: a cycle of four-holed spheres with doubled edges.
    let nodes = ku / 12;
    let edge = two_holed((q - 1) / 2);
    let mut b = Builder::new();
    let spheres: Vec<Vec<BoundaryComponent>> = (0..nodes)
        .map(|_| b.add_block(BlockFamily::FourHoledSphere, 0, 3))
        .collect::<Result<_, _>>()?;
    for i in 0..nodes {
        for m in 0..2 {
            let e = b.add_block(edge.0, edge.1, 3)?;
            b.join(&spheres[i][m], &e[0])?;
            b.join(&e[1], &spheres[(i + 1) % nodes][m + 2])?;
        }
    }
    Ok(b.finish())
}

/// `(slot, slot, reversed)` with slots as `(triangle, side)`.
type GluingEntry = ((usize, u8), (usize, u8), bool);

/// Closed non-orientable genus-3 surface with 2 vertices of valence 9.
const W9_TRIANGLES: usize = 6;
const W9_PAIRINGS: [GluingEntry; 9] = [
    ((0, 0), (0, 1), false),
    ((0, 2), (1, 1), true),
    ((1, 0), (4, 1), true),
    ((1, 2), (3, 1), true),
    ((2, 0), (4, 0), false),
    ((2, 1), (5, 0), false),
    ((2, 2), (4, 2), true),
    ((3, 0), (5, 1), false),
    ((3, 2), (5, 2), true),
];
/// Integer cocycle with zero holonomy around each vertex, onto `Z`, and
/// vanishing on an orientation-reversing loop.
const W9_SHIFTS: [i64; 9] = [1, 0, 0, 0, -1, 0, -1, 0, -1];
const W9_CYCLE: [(usize, bool); 2] = [(0, true), (6, true)];

/// Closed non-orientable genus-3 surface with 6 vertices of valence 7.
const W7_TRIANGLES: usize = 14;
const W7_PAIRINGS: [GluingEntry; 21] = [
    ((0, 0), (6, 1), false),
    ((0, 1), (7, 0), true),
    ((0, 2), (2, 1), false),
    ((1, 0), (4, 0), true),
    ((1, 1), (9, 1), false),
    ((1, 2), (2, 0), true),
    ((2, 2), (4, 2), true),
    ((3, 0), (8, 0), false),
    ((3, 1), (10, 1), true),
    ((3, 2), (8, 1), true),
    ((4, 1), (12, 2), false),
    ((5, 0), (11, 0), true),
    ((5, 1), (6, 2), true),
    ((5, 2), (9, 2), true),
    ((6, 0), (13, 0), true),
    ((7, 1), (10, 2), true),
    ((7, 2), (11, 1), true),
    ((8, 2), (11, 2), true),
    ((9, 0), (13, 2), false),
    ((10, 0), (13, 1), true),
    ((12, 0), (12, 1), false),
];
const W7_SHIFTS: [i64; 21] = [0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 0, 0, 0];
const W7_CYCLE: [(usize, bool); 6] = [(0, true), (1, true), (2, true), (10, true), (8, true), (9, true)];

fn complex_from_table(triangles: usize, table: &[GluingEntry]) -> Result<TriangulatedComplex, ComplexError> {
    let pairings = table
        .iter()
        .map(|&((a, s), (b, t), r)| Pairing::new(Slot::new(a, s), Slot::new(b, t), r))
        .collect();
    TriangulatedComplex::new(triangles, pairings, [])
}

/// Groups a set of oriented edges forming a cycle cover into cycles.
fn group_cycles(c: &TriangulatedComplex, edges: &[OrientedEdge]) -> Result<Vec<Vec<OrientedEdge>>, AssemblyError> {
    let vs = c.vertex_structure()?;
    let ends = |e: &OrientedEdge| {
        let a = c.pairings()[e.pairing].a;
        let (s, t) = (vs.class_of(a.start()), vs.class_of(a.end()));
        if e.forward {
            (s, t)
        } else {
            (t, s)
        }
    };
    let by_tail: BTreeMap<usize, OrientedEdge> = edges.iter().map(|e| (ends(e).0, *e)).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for e in edges {
        if seen.contains(e) {
            continue;
        }
        let mut cyc = Vec::new();
        let mut cur = *e;
        while seen.insert(cur) {
            cyc.push(cur);
            cur = by_tail[&ends(&cur).1];
        }
        out.push(cyc);
    }
    Ok(out)
}

/// Cyclic cover of a hardcoded genus-3 base with its lifted cycle cover.
fn base_cover(
    triangles: usize,
    table: &[GluingEntry],
    shifts: &[i64],
    cycle: &[(usize, bool)],
    degree: usize,
) -> Result<Assembly, AssemblyError> {
    let base = complex_from_table(triangles, table)?;
    let complex = base.cyclic_cover(shifts, degree)?;
    let p = table.len();
    let edges: Vec<OrientedEdge> = (0..degree)
        .flat_map(|c| {
            cycle.iter().map(move |&(pid, forward)| OrientedEdge {
                pairing: c * p + pid,
                forward,
            })
        })
        .collect();
    let curves = group_cycles(&complex, &edges)?;
    Ok(Assembly { complex, curves })
}

/// Closed non-orientable surface of genus `g` with `k` vertices of valence
/// `6(g − 2)/k + 6`.
pub fn closed_nonorientable(g: i64, k: i64) -> Result<Assembly, AssemblyError> {
    let gu = check_genus(g, 3, "non-orientable")?;
    let ku = check_divides(k, 6 * (g - 2))?;
    if ku == 1 {
        let mut pg = PolygonGluing::new(vec![Polygon::fan(2 * gu, 0)]);
        for i in (0..2 * gu).step_by(2) {
            pg.ident((0, i), (0, i + 1), true);
        }
        return Ok(Assembly {
            complex: pg.build()?.complex,
            curves: vec![vec![OrientedEdge {
                pairing: 0,
                forward: true,
            }]],
        });
    }
    let q = 6 * (gu - 2) / ku;
    let upsilon = |g0: usize| (BlockFamily::UpsilonG1, g0);
    let w9 = || base_cover(W9_TRIANGLES, &W9_PAIRINGS, &W9_SHIFTS, &W9_CYCLE, gu - 2);
    let by = |d: usize| ku % d == 0;
    if !by(2) && !by(3) {
        return torus_with_caps(ku, 1, upsilon((gu - 2) / ku));
    }
    if by(2) && !by(3) {
        let g0 = 2 * (gu - 2) / ku;
        return if g0 == 1 {
            w9()
        } else {
            torus_with_caps(ku / 2, 2, upsilon(g0))
        };
    }
    if by(3) && !by(2) {
        return torus_with_caps(ku / 3, 3, upsilon(3 * (gu - 2) / ku));
    }
    if q % 2 == 0 {
        return torus_with_caps(ku / 3, 3, upsilon(q / 2));
    }
    if q % 3 == 0 {
        let g0 = q / 3;
        return if g0 == 1 {
            w9()
        } else {
            torus_with_caps(ku / 2, 2, upsilon(g0))
        };
    }
    if q == 1 {
        return base_cover(W7_TRIANGLES, &W7_PAIRINGS, &W7_SHIFTS, &W7_CYCLE, gu - 2);
    }
    let (g0, spacer) = if q % 3 == 1 {
        (q.div_ceil(3), BlockFamily::ThreeHoledSphere)
    } else {
        ((q + 1) / 3, BlockFamily::ThreeHoledRP2)
    };
    let mut b = Builder::new();
    let spacers = ring(&mut b, ku / 6, two_holed(g0 - 1), (spacer, 0), 2)?;
    for sp in &spacers {
        let cap = b.add_block(BlockFamily::UpsilonG1, g0, 2)?;
        b.join(&sp[2], &cap[0])?;
    }
    Ok(b.finish())
}

/// Result of [`unzip_insert`].
#[derive(Debug, Clone)]
pub struct Unzipped {
    pub complex: TriangulatedComplex,
    /// Triangle id of `E_0` in each inserted `Y_l`, in edge order.
    pub inserted_e0: Vec<usize>,
}

/// Cuts each listed edge open and sews a copy of `Y_l` into the slit, with
/// the high-valence vertex of `Y_l` at the edge's tail.
///
/// When the edges form a cycle cover every vertex gains `3l` non-marked and
/// `2l` marked-triangle corners.
pub fn unzip_insert(c: &TriangulatedComplex, edges: &[OrientedEdge], l: usize) -> Result<Unzipped, AssemblyError> {
    if l == 0 {
        return Err(AssemblyError::Inadmissible("unzip needs l >= 1".into()));
    }
    let mut removed = vec![false; c.pairings().len()];
    for e in edges {
        let r = removed
            .get_mut(e.pairing)
            .ok_or(ComplexError::NoSuchPairing(e.pairing))?;
        if *r {
            return Err(AssemblyError::Inadmissible(format!("edge {} listed twice", e.pairing)));
        }
        *r = true;
    }
    let kept: Vec<Pairing> = c
        .pairings()
        .iter()
        .zip(&removed)
        .filter(|(_, r)| !**r)
        .map(|(p, _)| *p)
        .collect();
    let mut out = TriangulatedComplex::new(c.triangle_count(), kept, c.marked().iter().copied())?;
    let y = marked_y(l)?;
    let mut inserted_e0 = Vec::with_capacity(edges.len());
    let mut sutures = Vec::with_capacity(2 * edges.len());
    for e in edges {
        let p = c.pairings()[e.pairing];
        let off = out.triangle_count();
        out = out.disjoint_union(&y.complex);
        let s1 = Slot::new(off + y.e0, 1);
        let s2 = Slot::new(off + y.e0, 2);
        sutures.push(Pairing::new(p.a, s2, !e.forward));
        sutures.push(Pairing::new(p.b, s1, e.forward ^ p.reversed));
        inserted_e0.push(off + y.e0);
    }
    let complex = out.add_pairings(&sutures)?.0;
    Ok(Unzipped { complex, inserted_e0 })
}

fn unzip_all(a: &Assembly, l: usize) -> Result<TriangulatedComplex, AssemblyError> {
    let edges: Vec<OrientedEdge> = a.curves.iter().flatten().copied().collect();
    Ok(unzip_insert(&a.complex, &edges, l)?.complex)
}

/// Caps every boundary circle of `base` with its own copy of `cap`, whose
/// single boundary circle must match in length.
fn cap_all(base: &TriangulatedComplex, cap: &TriangulatedComplex) -> Result<Assembly, AssemblyError> {
    let mut b = Builder::new();
    let bcs = b.add(base)?;
    for bc in &bcs {
        let c = b.add(cap)?;
        b.join(bc, &c[0])?;
    }
    Ok(b.finish())
}

fn block(family: BlockFamily, param: usize, v: usize) -> Result<TriangulatedComplex, AssemblyError> {
    Ok(build(BlockSpec::new(family, param, v))?.complex)
}

/// Builds a connected surface with `n` marked vertices of valence 1 and
/// `k` non-marked vertices, each meeting `i` non-marked and `j` marked
/// triangle corners, and certifies it.
pub fn marked_surface(req: &AssemblyRequest) -> Result<(TriangulatedComplex, AssemblyCertificate), AssemblyError> {
    let g = req.validate()?;
    let c = marked_complex(req, g)?;
    let cert = certify(&c, req)?;
    if !cert.passed() {
        return Err(AssemblyError::CertificateFailed(cert.failures.join("; ")));
    }
    Ok((c, cert))
}

fn marked_complex(req: &AssemblyRequest, g: i64) -> Result<TriangulatedComplex, AssemblyError> {
    let (n, k) = (req.n as usize, req.k as usize);
    if n == 0 {
        let a = if req.orientable {
            closed_orientable(g, req.k)?
        } else {
            closed_nonorientable(g, req.k)?
        };
        return Ok(a.complex);
    }
    let l = n / k;
    let gu = g as usize;
    let triangle = TriangulatedComplex::triangles(1);
    if req.orientable {
        match (gu, k) {
            (0, 1) => {
                let i = n / 2;
                let mut b = Builder::new();
                let x1 = b.add(&marked_x(i)?)?;
                let x2 = b.add(&marked_x(n - i)?)?;
                b.join(&x1[0], &x2[0])?;
                Ok(b.finish().complex)
            }
            (_, 1) => Ok(cap_all(&block(BlockFamily::SigmaG1, gu, 1)?, &marked_x(n)?)?.complex),
            (1, _) => Ok(cap_all(&block(BlockFamily::TorusBHoled, k, 1)?, &marked_x(l)?)?.complex),
            (0, 2) => Ok(cap_all(&block(BlockFamily::Annulus, 0, 1)?, &marked_x(l)?)?.complex),
            (0, 3) => Ok(unzip_all(&cap_all(&triangle, &triangle)?, l)?),
            (0, 4) => Ok(cap_all(&block(BlockFamily::Annulus, 0, 2)?, &marked_z(l)?)?.complex),
            (0, 6) => Ok(unzip_all(&cap_all(&block(BlockFamily::Annulus, 0, 3)?, &triangle)?, l)?),
            (0, 12) => Ok(unzip_all(
                &cap_all(&block(BlockFamily::FourHoledSphere, 0, 3)?, &triangle)?,
                l,
            )?),
            (0, _) => Err(AssemblyError::Inadmissible(format!(
                "{k} vertices are impossible on a marked sphere"
            ))),
            _ => Ok(unzip_all(&closed_orientable(g, req.k)?, l)?),
        }
    } else {
        match (gu, k) {
            (_, 1) => Ok(cap_all(&block(BlockFamily::UpsilonG1, gu, 1)?, &marked_x(n)?)?.complex),
            (2, _) => Ok(cap_all(&block(BlockFamily::KleinBHoled, k, 1)?, &marked_x(l)?)?.complex),
            (1, 3) => Ok(unzip_all(
                &cap_all(&block(BlockFamily::UpsilonG1, 1, 3)?, &triangle)?,
                l,
            )?),
            (1, 6) => Ok(cap_all(&block(BlockFamily::ThreeHoledRP2, 0, 2)?, &marked_z(n / 6)?)?.complex),
            (1, 2) => projective_two_vertex(l),
            (1, _) => Err(AssemblyError::Inadmissible(format!(
                "{k} vertices are impossible on a marked projective plane"
            ))),
            _ => Ok(unzip_all(&closed_nonorientable(g, req.k)?, l)?),
        }
    }
}

/// Projective plane with two vertices and `2l` marked points, each
/// non-marked vertex meeting `3l + 3` non-marked corners.
///
/// Starts from the square `a b a b` with vertices of valence 4 and 2,
/// unzips `a` and `b`, then flips the edge between `E_0` and `X_l` in the
/// copy of `Y_l` whose high-valence vertex is the valence-4 vertex. The
/// flip needs a non-marked triangle behind `E_0`, so `l >= 2`.
fn projective_two_vertex(l: usize) -> Result<TriangulatedComplex, AssemblyError> {
    if l < 2 {
        return Err(AssemblyError::Unrealizable(
            "the projective plane with two marked points has no triangulation with two equal non-marked vertices"
                .into(),
        ));
    }
    let mut pg = PolygonGluing::new(vec![Polygon::fan(4, 0)]);
    pg.ident((0, 0), (0, 2), true);
    pg.ident((0, 1), (0, 3), true);
    let rp2 = pg.build()?.complex;
    // Edge 1 runs from the valence-4 vertex to the valence-2 vertex.
    let edges = [
        OrientedEdge {
            pairing: 0,
            forward: true,
        },
        OrientedEdge {
            pairing: 1,
            forward: true,
        },
    ];
    let u = unzip_insert(&rp2, &edges, l)?;
    let seam = u
        .complex
        .pairing_of(Slot::new(u.inserted_e0[1], 0))
        .expect("E_0 is glued to X_l");
    Ok(u.complex.flip_edge(seam)?)
}
