//! Building blocks: compact triangulated surfaces whose non-marked vertices
//! all lie on the boundary, with prescribed triangle valences.
//!
//! Unmarked blocks are triangulated polygons with some edges identified,
//! possibly followed by edge flips or a cyclic cover. Marked blocks `X_l`,
//! `Y_l`, `Z_l` are disks containing `l`, `l` and `2l` marked vertices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{BoundaryComponent, ComplexError, Corner, Pairing, Slot, TriangulatedComplex};
use crate::polygon::{Polygon, PolygonGluing};

/// Errors raised by block constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("invalid block: {0}")]
    InvalidSpec(String),
    #[error("no such block: {0}")]
    Unrealizable(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Block families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockFamily {
    /// Two boundary circles.
    Annulus,
    /// Sphere with three holes; 2 vertices per boundary.
    ThreeHoledSphere,
    /// Sphere with four holes; 3 vertices per boundary.
    FourHoledSphere,
    /// Sphere with six holes; 2 vertices per boundary.
    SixHoledSphere,
    /// Genus `g` orientable, one boundary circle.
    SigmaG1,
    /// Genus `g` orientable, two boundary circles.
    SigmaG2,
    /// Torus with `b` holes.
    TorusBHoled,
    /// Klein bottle with `b` holes; 1 vertex per boundary.
    KleinBHoled,
    /// Projective plane with three holes; 2 vertices per boundary.
    ThreeHoledRP2,
    /// Non-orientable genus `g`, one boundary circle.
    UpsilonG1,
    /// Disk with `l` marked points and one boundary edge.
    MarkedX,
    /// Disk with `l` marked points and two boundary edges.
    MarkedY,
    /// Disk with `2l` marked points and two boundary edges.
    MarkedZ,
}

/// A block family with its integer parameter (`g`, `b` or `l`; ignored for
/// holed spheres and the holed projective plane) and the number of
/// vertices on each boundary circle (ignored for marked blocks).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockSpec {
    pub family: BlockFamily,
    pub param: usize,
    pub vertices_per_boundary: usize,
}

impl BlockSpec {
    pub fn new(family: BlockFamily, param: usize, vertices_per_boundary: usize) -> Self {
        BlockSpec {
            family,
            param,
            vertices_per_boundary,
        }
    }
}

/// A built block and its boundary circles.
#[derive(Debug, Clone)]
pub struct Block {
    pub spec: BlockSpec,
    pub complex: TriangulatedComplex,
    pub boundaries: Vec<BoundaryComponent>,
}

/// Builds the block described by `spec`.
pub fn build(spec: BlockSpec) -> Result<Block, BlockError> {
    use BlockFamily::*;
    let complex = match spec.family {
        MarkedX => marked_x(spec.param)?,
        MarkedY => marked_y(spec.param)?.complex,
        MarkedZ => marked_z(spec.param)?,
        _ => unmarked(spec)?,
    };
    let boundaries = complex.boundary_components()?;
    Ok(Block {
        spec,
        complex,
        boundaries,
    })
}

fn invalid(msg: String) -> BlockError {
    BlockError::InvalidSpec(msg)
}

/// A block in polygon form: its complex before flips and the pairings to flip.
struct Plan {
    complex: TriangulatedComplex,
    flips: Vec<usize>,
}

impl Plan {
    fn from_gluing(g: &PolygonGluing, flip_idents: &[usize]) -> Result<Self, ComplexError> {
        let b = g.build()?;
        Ok(Plan {
            flips: flip_idents.iter().map(|&i| b.ident_ids[i]).collect(),
            complex: b.complex,
        })
    }

    fn finish(self) -> Result<TriangulatedComplex, ComplexError> {
        let mut c = self.complex;
        for pid in self.flips {
            c = c.flip_edge(pid)?;
        }
        Ok(c)
    }
}

fn unmarked(spec: BlockSpec) -> Result<TriangulatedComplex, BlockError> {
    use BlockFamily::*;
    let v = spec.vertices_per_boundary;
    let p = spec.param;
    let need_v = |allowed: &[usize]| -> Result<(), BlockError> {
        if allowed.contains(&v) {
            Ok(())
        } else {
            Err(invalid(format!(
                "{:?} supports {allowed:?} vertices per boundary, got {v}",
                spec.family
            )))
        }
    };
    let need_p = |min: usize| -> Result<(), BlockError> {
        if p >= min {
            Ok(())
        } else {
            Err(invalid(format!("{:?} needs parameter >= {min}, got {p}", spec.family)))
        }
    };
    let plan = match spec.family {
        Annulus => {
            need_v(&[1, 2, 3])?;
            annulus(v)?
        }
        ThreeHoledSphere => {
            need_v(&[2])?;
            three_holed_sphere()?
        }
        FourHoledSphere => {
            need_v(&[3])?;
            four_holed_sphere()?
        }
        SixHoledSphere => {
            need_v(&[2])?;
            six_holed_sphere()?
        }
        ThreeHoledRP2 => {
            need_v(&[2])?;
            three_holed_rp2()?
        }
        SigmaG1 => {
            need_v(&[1, 2, 3])?;
            need_p(1)?;
            sigma_g1(p, v)?
        }
        SigmaG2 => {
            need_v(&[1, 2, 3])?;
            need_p(1)?;
            sigma_g2(p, v)?
        }
        UpsilonG1 => {
            need_v(&[1, 2, 3])?;
            need_p(1)?;
            if p == 1 && v == 2 {
                return Err(BlockError::Unrealizable(
                    "a one-holed projective plane has no triangulation with two boundary vertices of equal valence"
                        .into(),
                ));
            }
            upsilon_g1(p, v)?
        }
        TorusBHoled => {
            need_v(&[1, 2, 3])?;
            need_p(1)?;
            return Ok(torus_b_holed(p, v)?);
        }
        KleinBHoled => {
            need_v(&[1])?;
            need_p(1)?;
            return Ok(klein_b_holed(p)?);
        }
        MarkedX | MarkedY | MarkedZ => unreachable!("marked blocks are built separately"),
    };
    Ok(plan.finish()?)
}

/// Annulus as a strip of `2v` triangles between two `v`-vertex circles.
fn annulus(v: usize) -> Result<Plan, ComplexError> {
    // Vertices b_0..b_v along the bottom, then t_v..t_0 along the top.
    let n = 2 * v + 2;
    let b = |i: usize| i;
    let t = |i: usize| n - 1 - i;
    let mut tris = Vec::new();
    for i in 0..v {
        tris.push([b(i), b(i + 1), t(i)]);
        tris.push([b(i + 1), t(i + 1), t(i)]);
    }
    let mut g = PolygonGluing::new(vec![Polygon {
        size: n,
        triangles: tris,
    }]);
    // Edge v runs b_v -> t_v and edge n-1 runs t_0 -> b_0.
    g.ident((0, v), (0, n - 1), false);
    Plan::from_gluing(&g, &[])
}

/// Hexagon triangulated by the central triangle on its even vertices.
fn central_hexagon() -> Polygon {
    Polygon {
        size: 6,
        triangles: vec![[0, 2, 4], [0, 1, 2], [2, 3, 4], [4, 5, 0]],
    }
}

fn three_holed_sphere() -> Result<Plan, ComplexError> {
    let mut g = PolygonGluing::new(vec![central_hexagon(), central_hexagon()]);
    for i in [0, 2, 4] {
        g.ident((0, i), (1, (i + 3) % 6), true);
    }
    Plan::from_gluing(&g, &[])
}

/// Truncated tetrahedron: each face becomes a hexagon whose even edges lie
/// along the tetrahedron's edges.
fn four_holed_sphere() -> Result<Plan, ComplexError> {
    let faces: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
    let mut g = PolygonGluing::new(vec![central_hexagon(); 4]);
    let directed = |f: &[usize; 3], m: usize| (f[m], f[(m + 1) % 3]);
    for (fi, f) in faces.iter().enumerate() {
        for m in 0..3 {
            let (x, y) = directed(f, m);
            for (fj, h) in faces.iter().enumerate().skip(fi + 1) {
                for m2 in 0..3 {
                    if directed(h, m2) == (y, x) {
                        g.ident((fi, 2 * m), (fj, 2 * m2), false);
                    }
                }
            }
        }
    }
    Plan::from_gluing(&g, &[])
}

/// Dodecagon with alternate edges to be glued and the rest left free.
fn dodecagon() -> Polygon {
    Polygon {
        size: 12,
        triangles: vec![
            [1, 2, 3],
            [5, 6, 7],
            [9, 10, 11],
            [1, 3, 4],
            [5, 7, 8],
            [9, 11, 0],
            [0, 1, 4],
            [4, 5, 8],
            [8, 9, 0],
            [0, 4, 8],
        ],
    }
}

fn six_holed_sphere() -> Result<Plan, ComplexError> {
    let mut g = PolygonGluing::new(vec![dodecagon(), dodecagon()]);
    for i in (1..12).step_by(2) {
        g.ident((0, i), (1, (i + 6) % 12), true);
    }
    Plan::from_gluing(&g, &[])
}

fn three_holed_rp2() -> Result<Plan, ComplexError> {
    let mut g = PolygonGluing::new(vec![dodecagon()]);
    for i in [11, 1, 3] {
        g.ident((0, i), (0, (i + 6) % 12), true);
    }
    Plan::from_gluing(&g, &[])
}

/// Identifications `e_i ~ e_{i+2}` (reversed) for `i ≡ 0, 1 (mod 4)` on a
/// polygon whose first `4g` edges are the surface word.
fn sigma_g1_idents(g: &mut PolygonGluing, genus: usize, edge: impl Fn(usize) -> usize) {
    for i in (0..4 * genus).filter(|i| i % 4 < 2) {
        g.ident((0, edge(i)), (0, edge(i + 2)), false);
    }
}

fn sigma_g1(genus: usize, v: usize) -> Result<Plan, ComplexError> {
    let m = 4 * genus;
    match v {
        1 => {
            let mut g = PolygonGluing::new(vec![Polygon::fan(m + 1, 0)]);
            sigma_g1_idents(&mut g, genus, |i| i);
            Plan::from_gluing(&g, &[])
        }
        2 => {
            // Vertex w = m + 1 subdivides the free edge.
            let mut g = PolygonGluing::new(vec![Polygon::fan(m + 2, m + 1)]);
            sigma_g1_idents(&mut g, genus, |i| i);
            Plan::from_gluing(&g, &(0..genus).collect::<Vec<_>>())
        }
        _ => {
            let (w2, w1) = (m + 1, m + 2);
            let h = 2 * genus;
            let mut tris: Vec<[usize; 3]> = (0..h).map(|i| [w1, i, i + 1]).collect();
            tris.extend((h..m).map(|i| [w2, i, i + 1]));
            tris.push([h, w2, w1]);
            let mut g = PolygonGluing::new(vec![Polygon {
                size: m + 3,
                triangles: tris,
            }]);
            sigma_g1_idents(&mut g, genus, |i| i);
            Plan::from_gluing(&g, &(0..h).collect::<Vec<_>>())
        }
    }
}

fn sigma_g2(genus: usize, v: usize) -> Result<Plan, ComplexError> {
    let n = genus + 1;
    let m = 4 * n;
    match v {
        1 => {
            let mut diags: Vec<(usize, usize)> = (2 * n + 1..m - 1).map(|j| (0, j)).collect();
            diags.extend((1..2 * n - 1).map(|i| (2 * n, i)));
            diags.push((1, 2 * n + 1));
            let mut g = PolygonGluing::new(vec![Polygon::from_diagonals(m, &diags)]);
            for k in 1..2 * n {
                g.ident((0, k), (0, k + 2 * n), false);
            }
            Plan::from_gluing(&g, &[])
        }
        2 => {
            // Order: v_0, w_0, v_1..v_2n, w_2n, v_2n+1..v_4n-1.
            let pv = |i: usize| i + usize::from(i >= 1) + usize::from(i > 2 * n);
            let (w0, w2n) = (1, 2 * n + 2);
            let mut diags = vec![(w0, w2n)];
            diags.extend((2 * n + 1..m).map(|j| (w0, pv(j))));
            diags.extend((1..2 * n).map(|i| (w2n, pv(i))));
            let mut g = PolygonGluing::new(vec![Polygon::from_diagonals(m + 2, &diags)]);
            for k in 1..2 * n {
                g.ident((0, pv(k)), (0, pv(k + 2 * n)), false);
            }
            Plan::from_gluing(&g, &(0..n - 1).collect::<Vec<_>>())
        }
        _ => {
            // Order: v_0, u_0, w_0, v_1..v_2n, u_2n, w_2n, v_2n+1..v_4n-1.
            let pv = |i: usize| i + 2 * usize::from(i >= 1) + 2 * usize::from(i > 2 * n);
            let (u0, w0, u2n, w2n) = (1, 2, 2 * n + 3, 2 * n + 4);
            let mut diags: Vec<(usize, usize)> = Vec::new();
            diags.extend((2..=n).map(|i| (w0, pv(i))));
            diags.extend((n + 1..2 * n).map(|i| (u2n, pv(i))));
            diags.extend((2 * n + 2..=3 * n).map(|i| (w2n, pv(i))));
            diags.extend((3 * n + 1..m).map(|i| (u0, pv(i))));
            diags.extend([(u0, w2n), (u0, pv(3 * n)), (w0, w2n), (w0, u2n), (pv(n), u2n)]);
            let mut g = PolygonGluing::new(vec![Polygon::from_diagonals(m + 4, &diags)]);
            for k in 1..2 * n {
                g.ident((0, pv(k)), (0, pv(k + 2 * n)), false);
            }
            let flips: Vec<usize> = (1..2 * n).filter(|&k| k != n).map(|k| k - 1).collect();
            Plan::from_gluing(&g, &flips)
        }
    }
}

/// Identifications `e_i ~ e_{i+1}` (same direction) for even `i < 2g`.
fn upsilon_idents(g: &mut PolygonGluing, genus: usize) {
    for i in (0..2 * genus).step_by(2) {
        g.ident((0, i), (0, i + 1), true);
    }
}

fn upsilon_g1(genus: usize, v: usize) -> Result<Plan, ComplexError> {
    let m = 2 * genus;
    match v {
        1 => {
            let mut g = PolygonGluing::new(vec![Polygon::fan(m + 1, 0)]);
            upsilon_idents(&mut g, genus);
            Plan::from_gluing(&g, &[])
        }
        2 if genus.is_multiple_of(2) => {
            let mut g = PolygonGluing::new(vec![Polygon::fan(m + 2, m + 1)]);
            upsilon_idents(&mut g, genus);
            Plan::from_gluing(&g, &(0..genus / 2).collect::<Vec<_>>())
        }
        2 => {
            let w = m + 1;
            let mut tris = vec![[0, 1, 2], [w, 0, 2]];
            tris.extend((2..m).map(|i| [w, i, i + 1]));
            let mut g = PolygonGluing::new(vec![Polygon {
                size: m + 2,
                triangles: tris,
            }]);
            upsilon_idents(&mut g, genus);
            Plan::from_gluing(&g, &(1..=genus.div_ceil(2)).collect::<Vec<_>>())
        }
        _ => {
            let (w2, w1) = (m + 1, m + 2);
            let mut tris: Vec<[usize; 3]> = (0..genus).map(|i| [w1, i, i + 1]).collect();
            tris.extend((genus..m).map(|i| [w2, i, i + 1]));
            tris.push([genus, w2, w1]);
            let mut g = PolygonGluing::new(vec![Polygon {
                size: m + 3,
                triangles: tris,
            }]);
            upsilon_idents(&mut g, genus);
            Plan::from_gluing(&g, &(0..genus).collect::<Vec<_>>())
        }
    }
}

/// Flips every lift of the listed base pairings in a cover of `degree`.
fn flip_lifts(
    cover: TriangulatedComplex,
    base_pairings: usize,
    degree: usize,
    flips: &[usize],
) -> Result<TriangulatedComplex, ComplexError> {
    let mut c = cover;
    for &p in flips {
        for copy in 0..degree {
            c = c.flip_edge(copy * base_pairings + p)?;
        }
    }
    Ok(c)
}

/// `b`-fold cyclic cover of the one-holed torus, unwrapped along `e_0`.
fn torus_b_holed(b: usize, v: usize) -> Result<TriangulatedComplex, ComplexError> {
    let plan = sigma_g1(1, v)?;
    let mut shifts = vec![0; plan.complex.pairings().len()];
    shifts[0] = 1;
    let cover = plan.complex.cyclic_cover(&shifts, b)?;
    flip_lifts(cover, shifts.len(), b, &plan.flips)
}

/// `b`-sheeted dihedral cover of the one-holed Klein bottle with word
/// `e_0 e_1 e_0^{-1} e_1`: crossing `e_0` rotates the sheets and crossing
/// `e_1` reflects them. Every boundary lift closes after one sheet and a
/// reflection fixing a sheet keeps the cover non-orientable.
fn klein_b_holed(b: usize) -> Result<TriangulatedComplex, ComplexError> {
    let mut g = PolygonGluing::new(vec![Polygon::fan(5, 0)]);
    g.ident((0, 0), (0, 2), false);
    g.ident((0, 1), (0, 3), true);
    let base = g.build()?.complex;
    let mut perms: Vec<Vec<usize>> = vec![(0..b).collect(); base.pairings().len()];
    perms[0] = (0..b).map(|c| (c + 1) % b).collect();
    perms[1] = (0..b).map(|c| (b - c) % b).collect();
    base.permutation_cover(&perms)
}

fn need_l(l: usize) -> Result<(), BlockError> {
    if l == 0 {
        Err(invalid("marked blocks need l >= 1".into()))
    } else {
        Ok(())
    }
}

/// Triangle with corner 0 marked and the two sides at it folded together.
fn cusp_triangle() -> Result<TriangulatedComplex, ComplexError> {
    TriangulatedComplex::new(
        1,
        vec![Pairing::new(Slot::new(0, 0), Slot::new(0, 2), true)],
        [Corner::new(0, 0)],
    )
}

/// Appends a folded marked triangle whose base is glued to `base`.
fn attach_cusp(c: &TriangulatedComplex, base: Slot) -> Result<TriangulatedComplex, ComplexError> {
    let h = c.triangle_count();
    let u = c.disjoint_union(&cusp_triangle()?);
    Ok(u.add_pairings(&[Pairing::new(base, Slot::new(h, 1), true)])?.0)
}

/// `X_l` together with its single free slot.
fn marked_x_with_edge(l: usize) -> Result<(TriangulatedComplex, Slot), BlockError> {
    need_l(l)?;
    if l == 1 {
        return Ok((cusp_triangle()?, Slot::new(0, 1)));
    }
    let built = PolygonGluing::new(vec![Polygon::fan(l + 1, 0)]).build()?;
    let mut c = built.complex;
    for i in 1..=l {
        c = attach_cusp(&c, built.edge_slot[0][i])?;
    }
    Ok((c, built.edge_slot[0][0]))
}

/// Disk with `l` marked interior vertices of valence 1 and one free slot:
/// `l − 1` fan triangles with a folded marked triangle on all but one
/// polygon edge.
pub fn marked_x(l: usize) -> Result<TriangulatedComplex, BlockError> {
    Ok(marked_x_with_edge(l)?.0)
}

/// `Y_l` with the id of its extra triangle `E_0`.
#[derive(Debug, Clone)]
pub struct MarkedY {
    pub complex: TriangulatedComplex,
    /// `E_0`: side 0 is glued to `X_l`; side 1 runs from the high-valence
    /// boundary vertex to the valence-1 one; side 2 runs back.
    pub e0: usize,
}

impl MarkedY {
    pub fn side1(&self) -> Slot {
        Slot::new(self.e0, 1)
    }

    pub fn side2(&self) -> Slot {
        Slot::new(self.e0, 2)
    }
}

/// `X_l` with one extra triangle glued to its free slot.
pub fn marked_y(l: usize) -> Result<MarkedY, BlockError> {
    let (x, free) = marked_x_with_edge(l)?;
    let e0 = x.triangle_count();
    let u = x.disjoint_union(&TriangulatedComplex::triangles(1));
    let complex = u.add_pairings(&[Pairing::new(free, Slot::new(e0, 0), true)])?.0;
    Ok(MarkedY { complex, e0 })
}

/// Two copies of `Y_l` joined along their second sides.
pub fn marked_z(l: usize) -> Result<TriangulatedComplex, BlockError> {
    let y = marked_y(l)?;
    let off = y.complex.triangle_count();
    let u = y.complex.disjoint_union(&y.complex);
    let s2 = Slot::new(y.e0 + off, 2);
    Ok(u.add_pairings(&[Pairing::new(y.side2(), s2, true)])?.0)
}
