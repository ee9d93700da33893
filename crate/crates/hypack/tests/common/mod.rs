//! Helpers shared by integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hypack::assembler::AssemblyRequest;
use hypack::complex::{Corner, Pairing, Slot, TriangulatedComplex};
use proptest::prelude::*;

/// Union-find over corners driven only by the pairing list.
pub struct CornerUnion {
    parent: Vec<usize>,
}

impl CornerUnion {
    pub fn new(n: usize) -> Self {
        CornerUnion {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn idx(c: Corner) -> usize {
    3 * c.tri + c.corner as usize
}

/// Oracle vertex: corners, whether some side at it is unpaired, and
/// whether it holds a marked corner.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleVertex {
    pub corners: BTreeSet<Corner>,
    pub boundary: bool,
    pub marked: bool,
}

/// Vertices of `c` by brute-force corner identification.
pub fn oracle_vertices(c: &TriangulatedComplex) -> BTreeSet<OracleVertex> {
    let n = 3 * c.triangle_count();
    let mut uf = CornerUnion::new(n);
    for p in c.pairings() {
        if p.reversed {
            uf.union(idx(p.a.start()), idx(p.b.end()));
            uf.union(idx(p.a.end()), idx(p.b.start()));
        } else {
            uf.union(idx(p.a.start()), idx(p.b.start()));
            uf.union(idx(p.a.end()), idx(p.b.end()));
        }
    }
    let mut groups: Vec<Vec<Corner>> = vec![Vec::new(); n];
    for i in 0..n {
        groups[uf.find(i)].push(Corner::new(i / 3, (i % 3) as u8));
    }
    groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|g| OracleVertex {
            boundary: g
                .iter()
                .any(|k| c.pairing_of(k.out_side()).is_none() || c.pairing_of(k.in_side()).is_none()),
            marked: g.iter().any(|k| c.marked().contains(k)),
            corners: g.into_iter().collect(),
        })
        .collect()
}

/// Vertices of `c` as reported by the library, in oracle form.
pub fn library_vertices(c: &TriangulatedComplex) -> BTreeSet<OracleVertex> {
    c.vertex_classes()
        .expect("valid complex")
        .into_iter()
        .map(|v| {
            assert_eq!(v.triangle_valence, v.corners.len());
            OracleVertex {
                corners: v.corners.into_iter().collect(),
                boundary: v.boundary,
                marked: v.marked,
            }
        })
        .collect()
}

/// Random complex with up to `max_triangles` triangles: a random partial
/// matching of slots with random reversal flags and random marked corners.
pub fn arb_complex(max_triangles: usize) -> impl Strategy<Value = TriangulatedComplex> {
    (1..=max_triangles)
        .prop_flat_map(|t| {
            let slots: Vec<usize> = (0..3 * t).collect();
            (
                Just(t),
                Just(slots).prop_shuffle(),
                0..=(3 * t / 2),
                prop::collection::vec(any::<bool>(), 3 * t / 2),
                prop::collection::btree_map(0..t, 0u8..3, 0..3),
            )
        })
        .prop_map(|(t, order, m, flags, marked)| {
            let slot = |i: usize| Slot::new(i / 3, (i % 3) as u8);
            let pairings = (0..m)
                .map(|e| Pairing::new(slot(order[2 * e]), slot(order[2 * e + 1]), flags[e]))
                .collect();
            let marked = marked.into_iter().map(|(tri, corner)| Corner::new(tri, corner));
            TriangulatedComplex::new(t, pairings, marked).expect("matching is valid")
        })
}

/// All admissible `(chi, n, k, orientable)` with `chi >= -8`, `n <= 8`,
/// `k <= 24`.
pub fn admissible() -> Vec<AssemblyRequest> {
    let mut out = Vec::new();
    for chi in -8..=-1 {
        for n in 0..=8 {
            for k in 1..=24 {
                for orientable in [true, false] {
                    let r = AssemblyRequest::new(chi, n, k, orientable);
                    if r.validate().is_ok() {
                        out.push(r);
                    }
                }
            }
        }
    }
    out
}

/// Positive divisors of `m`.
pub fn divisors(m: i64) -> Vec<i64> {
    (1..=m).filter(|d| m % d == 0).collect()
}
