//! Triangulated polygons with edge identifications.
//!
//! A polygon of size `n` has vertices `0..n` in counterclockwise order and
//! edge `i` running from vertex `i` to vertex `i + 1 (mod n)`. Triangles are
//! vertex triples listed counterclockwise. Diagonals shared by two triangles
//! are glued automatically; polygon edges are glued by explicit
//! identifications and otherwise stay on the boundary.

use std::collections::BTreeMap;

use crate::complex::{ComplexError, Pairing, Slot, TriangulatedComplex};

/// Edge `edge` of polygon `poly`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeRef {
    pub poly: usize,
    pub edge: usize,
}

/// One triangulated polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub size: usize,
    pub triangles: Vec<[usize; 3]>,
}

impl Polygon {
    /// Fan triangulation from vertex `apex`.
    pub fn fan(size: usize, apex: usize) -> Self {
        let triangles = (1..size - 1)
            .map(|i| [apex, (apex + i) % size, (apex + i + 1) % size])
            .collect();
        Polygon { size, triangles }
    }

    /// Triangulation cut out by a full set of non-crossing diagonals.
    pub fn from_diagonals(size: usize, diagonals: &[(usize, usize)]) -> Self {
        let mut triangles = Vec::new();
        split(&(0..size).collect::<Vec<_>>(), diagonals, &mut triangles);
        Polygon { size, triangles }
    }
}

fn split(verts: &[usize], diagonals: &[(usize, usize)], out: &mut Vec<[usize; 3]>) {
    let m = verts.len();
    if m == 3 {
        out.push([verts[0], verts[1], verts[2]]);
        return;
    }
    for &(u, v) in diagonals {
        let (Some(i), Some(j)) = (verts.iter().position(|&x| x == u), verts.iter().position(|&x| x == v)) else {
            continue;
        };
        let (i, j) = (i.min(j), i.max(j));
        if j - i < 2 || (i == 0 && j == m - 1) {
            continue;
        }
        split(&verts[i..=j], diagonals, out);
        let rest: Vec<usize> = verts[j..].iter().chain(&verts[..=i]).copied().collect();
        split(&rest, diagonals, out);
        return;
    }
    panic!("diagonal set does not triangulate polygon {verts:?}");
}

/// Polygons plus identifications of their edges.
#[derive(Debug, Clone, Default)]
pub struct PolygonGluing {
    pub polygons: Vec<Polygon>,
    /// `(e, f, same_direction)`: glue edge `e` to edge `f`, matching their
    /// tails when `same_direction` and otherwise tail to head.
    pub idents: Vec<(EdgeRef, EdgeRef, bool)>,
}

/// Result of [`PolygonGluing::build`].
#[derive(Debug, Clone)]
pub struct BuiltPolygons {
    pub complex: TriangulatedComplex,
    /// Slot carrying each polygon edge.
    pub edge_slot: Vec<Vec<Slot>>,
    /// Pairing id of each identification, in order. Identifications come
    /// first, so this is `0..idents.len()`.
    pub ident_ids: Vec<usize>,
}

impl PolygonGluing {
    pub fn new(polygons: Vec<Polygon>) -> Self {
        PolygonGluing {
            polygons,
            idents: Vec::new(),
        }
    }

    pub fn ident(&mut self, a: (usize, usize), b: (usize, usize), same_direction: bool) {
        let r = |(poly, edge)| EdgeRef { poly, edge };
        self.idents.push((r(a), r(b), same_direction));
    }

    /// Builds the complex. Triangles are numbered polygon by polygon in
    /// listed order.
    pub fn build(&self) -> Result<BuiltPolygons, ComplexError> {
        let mut tri = 0;
        let mut edge_slot = Vec::new();
        let mut diagonals = Vec::new();
        for poly in &self.polygons {
            let n = poly.size;
            let mut slots = vec![None; n];
            let mut open: BTreeMap<(usize, usize), Slot> = BTreeMap::new();
            for t in &poly.triangles {
                let turn: usize = (0..3).map(|s| (t[(s + 1) % 3] + n - t[s]) % n).sum();
                assert_eq!(turn, n, "triangle {t:?} is not counterclockwise in an {n}-gon");
                for s in 0..3u8 {
                    let (u, w) = (t[s as usize], t[(s as usize + 1) % 3]);
                    let slot = Slot::new(tri, s);
                    if w == (u + 1) % n {
                        assert!(slots[u].is_none(), "polygon edge {u} used twice");
                        slots[u] = Some(slot);
                    } else if let Some(other) = open.remove(&(w, u)) {
                        diagonals.push(Pairing::new(other, slot, true));
                    } else {
                        open.insert((u, w), slot);
                    }
                }
                tri += 1;
            }
            assert!(open.is_empty(), "unmatched diagonals {:?}", open.keys());
            edge_slot.push(
                slots
                    .into_iter()
                    .map(|s| s.expect("every polygon edge lies in a triangle"))
                    .collect::<Vec<_>>(),
            );
        }
        let mut pairings: Vec<Pairing> = self
            .idents
            .iter()
            .map(|(e, f, same)| Pairing::new(edge_slot[e.poly][e.edge], edge_slot[f.poly][f.edge], !same))
            .collect();
        let ident_ids = (0..pairings.len()).collect();
        pairings.extend(diagonals);
        let complex = TriangulatedComplex::new(tri, pairings, [])?;
        Ok(BuiltPolygons {
            complex,
            edge_slot,
            ident_ids,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_and_diagonals_agree() {
        let a = Polygon::fan(6, 0);
        let b = Polygon::from_diagonals(6, &[(0, 2), (0, 3), (0, 4)]);
        let mut ta = a.triangles.clone();
        let mut tb: Vec<[usize; 3]> = b
            .triangles
            .iter()
            .map(|t| {
                let k = (0..3).min_by_key(|&i| t[i]).unwrap();
                [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
            })
            .collect();
        ta.sort();
        tb.sort();
        assert_eq!(ta, tb);
    }

    #[test]
    fn square_torus() {
        let mut g = PolygonGluing::new(vec![Polygon::fan(4, 0)]);
        g.ident((0, 0), (0, 2), false);
        g.ident((0, 1), (0, 3), false);
        let b = g.build().unwrap();
        let c = &b.complex;
        assert_eq!(c.pairings().len(), 3);
        assert_eq!(c.euler_characteristic().unwrap(), 0);
        assert!(c.orientability().unwrap());
        assert!(c.boundary_components().unwrap().is_empty());
    }
}
