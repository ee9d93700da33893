//! Triangulated complexes: finitely many triangles with some edges paired.
//!
//! Conventions:
//! - Triangle `t` has corners `0, 1, 2`; side `s` runs from corner `s` to
//!   corner `s + 1 (mod 3)`. An edge slot is `(t, s)`.
//! - A pairing identifies two slots. With `reversed = false` the start of
//!   one slot is glued to the start of the other; with `reversed = true`
//!   the start of one is glued to the end of the other. Reading every
//!   triangle counterclockwise, `reversed = true` is an orientation
//!   compatible gluing.
//! - Pairing ids are indices into [`TriangulatedComplex::pairings`].
//!   Operations that add pairings append them; [`TriangulatedComplex::flip_edge`]
//!   keeps every id.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by complex construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("slot {0:?} refers to a missing triangle or side")]
    SlotOutOfRange(Slot),
    #[error("corner {0:?} refers to a missing triangle or corner")]
    CornerOutOfRange(Corner),
    #[error("triangle {0} has more than one marked corner")]
    MultipleMarked(usize),
    #[error("slot {0:?} is used by more than one pairing")]
    SlotReused(Slot),
    #[error("slot {0:?} is paired with itself")]
    SelfPaired(Slot),
    #[error("corner orbit through {0:?} is not a surface link")]
    NonSurface(Corner),
    #[error("complex is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("pairing id {0} does not exist")]
    NoSuchPairing(usize),
    #[error("cannot flip pairing {0}: {1}")]
    BadFlip(usize, &'static str),
    #[error("boundary components have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("slot {0:?} is not an unpaired boundary slot")]
    NotBoundary(Slot),
    #[error("the two boundary components are the same component")]
    SameComponent,
}

/// An edge slot: side `side` of triangle `tri`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub tri: usize,
    pub side: u8,
}

impl Slot {
    pub fn new(tri: usize, side: u8) -> Self {
        Slot { tri, side }
    }

    fn index(&self) -> usize {
        3 * self.tri + self.side as usize
    }

    /// Corner at which the slot starts.
    pub fn start(&self) -> Corner {
        Corner::new(self.tri, self.side)
    }

    /// Corner at which the slot ends.
    pub fn end(&self) -> Corner {
        Corner::new(self.tri, (self.side + 1) % 3)
    }
}

/// A triangle corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Corner {
    pub tri: usize,
    pub corner: u8,
}

impl Corner {
    pub fn new(tri: usize, corner: u8) -> Self {
        Corner { tri, corner }
    }

    fn index(&self) -> usize {
        3 * self.tri + self.corner as usize
    }

    /// Side starting at this corner.
    pub fn out_side(&self) -> Slot {
        Slot::new(self.tri, self.corner)
    }

    /// Side ending at this corner.
    pub fn in_side(&self) -> Slot {
        Slot::new(self.tri, (self.corner + 2) % 3)
    }
}

/// Identification of two edge slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pairing {
    pub a: Slot,
    pub b: Slot,
    pub reversed: bool,
}

impl Pairing {
    pub fn new(a: Slot, b: Slot, reversed: bool) -> Self {
        Pairing { a, b, reversed }
    }

    /// The slot on the other side of `s`, if `s` is one of the two slots.
    pub fn other(&self, s: Slot) -> Option<Slot> {
        if s == self.a {
            Some(self.b)
        } else if s == self.b {
            Some(self.a)
        } else {
            None
        }
    }

    fn normalized(&self) -> Pairing {
        if self.a <= self.b {
            *self
        } else {
            Pairing::new(self.b, self.a, self.reversed)
        }
    }
}

/// One vertex of the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    /// Corners in rotational order around the vertex.
    pub corners: Vec<Corner>,
    pub triangle_valence: usize,
    pub marked: bool,
    /// True when the link is an arc.
    pub boundary: bool,
}

/// Vertex classes plus the corner-to-class map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStructure {
    pub classes: Vec<VertexClass>,
    class_of: Vec<usize>,
}

impl VertexStructure {
    /// Index of the class containing `c`.
    pub fn class_of(&self, c: Corner) -> usize {
        self.class_of[c.index()]
    }
}

/// An unpaired slot traversed in a given direction along a boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoundarySlot {
    pub slot: Slot,
    /// True when traversed from the slot's start corner to its end corner.
    pub forward: bool,
}

impl BoundarySlot {
    /// Corner at which the traversal starts.
    pub fn tail(&self) -> Corner {
        if self.forward {
            self.slot.start()
        } else {
            self.slot.end()
        }
    }

    /// Corner at which the traversal ends.
    pub fn head(&self) -> Corner {
        if self.forward {
            self.slot.end()
        } else {
            self.slot.start()
        }
    }
}

/// One boundary circle, as a cyclic chain of unpaired slots.
///
/// When the complex is orientable the traversal follows the boundary
/// orientation induced by the canonical orientation (the one giving the
/// lowest-numbered triangle of each connected component the
/// counterclockwise orientation). The chain starts at its smallest slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub cycle: Vec<BoundarySlot>,
    pub vertex_count: usize,
}

impl BoundaryComponent {
    pub fn contains(&self, s: Slot) -> bool {
        self.cycle.iter().any(|b| b.slot == s)
    }
}

/// Genus, orientability and number of boundary circles of a connected surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenusInfo {
    pub genus: i64,
    pub orientable: bool,
    pub boundary: usize,
}

/// Result of [`TriangulatedComplex::validate_marked`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedCertificate {
    pub marked_vertices: usize,
    /// Offending vertex classes, described in words.
    pub violations: Vec<String>,
}

impl MarkedCertificate {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Triangles with edge pairings and a set of marked corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulatedComplex {
    triangle_count: usize,
    marked: BTreeSet<Corner>,
    pairings: Vec<Pairing>,
    partner: Vec<Option<usize>>,
}

impl TriangulatedComplex {
    /// Builds and validates a complex.
    pub fn new(
        triangle_count: usize,
        pairings: Vec<Pairing>,
        marked: impl IntoIterator<Item = Corner>,
    ) -> Result<Self, ComplexError> {
        let mut partner = vec![None; 3 * triangle_count];
        for (id, p) in pairings.iter().enumerate() {
            for s in [p.a, p.b] {
                if s.tri >= triangle_count || s.side > 2 {
                    return Err(ComplexError::SlotOutOfRange(s));
                }
            }
            if p.a == p.b {
                return Err(ComplexError::SelfPaired(p.a));
            }
            for s in [p.a, p.b] {
                if partner[s.index()].is_some() {
                    return Err(ComplexError::SlotReused(s));
                }
                partner[s.index()] = Some(id);
            }
        }
        let marked: BTreeSet<Corner> = marked.into_iter().collect();
        for (idx, c) in marked.iter().enumerate() {
            if c.tri >= triangle_count || c.corner > 2 {
                return Err(ComplexError::CornerOutOfRange(*c));
            }
            if marked.iter().skip(idx + 1).any(|d| d.tri == c.tri) {
                return Err(ComplexError::MultipleMarked(c.tri));
            }
        }
        Ok(TriangulatedComplex {
            triangle_count,
            marked,
            pairings,
            partner,
        })
    }

    /// Disjoint triangles with no pairings.
    pub fn triangles(triangle_count: usize) -> Self {
        Self::new(triangle_count, Vec::new(), []).expect("empty complex is valid")
    }

    pub fn triangle_count(&self) -> usize {
        self.triangle_count
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn marked(&self) -> &BTreeSet<Corner> {
        &self.marked
    }

    /// Triangles containing a marked corner.
    pub fn marked_triangles(&self) -> BTreeSet<usize> {
        self.marked.iter().map(|c| c.tri).collect()
    }

    /// Id of the pairing using `s`, if any.
    pub fn pairing_of(&self, s: Slot) -> Option<usize> {
        self.partner.get(s.index()).copied().flatten()
    }

    /// All slots not used by any pairing, in increasing order.
    pub fn unpaired_slots(&self) -> Vec<Slot> {
        (0..self.triangle_count)
            .flat_map(|t| (0..3).map(move |s| Slot::new(t, s)))
            .filter(|s| self.pairing_of(*s).is_none())
            .collect()
    }

    /// Corner reached by crossing `slot` at the given corner of it.
    ///
    /// Returns the corner on the far side and the slot through which it was
    /// reached, or `None` when `slot` is unpaired.
    fn cross(&self, slot: Slot, at_start: bool) -> Option<(Corner, Slot)> {
        let p = self.pairings[self.pairing_of(slot)?];
        let other = p.other(slot).expect("pairing contains slot");
        let lands_at_start = at_start != p.reversed;
        let c = if lands_at_start { other.start() } else { other.end() };
        Some((c, other))
    }

    /// Walks around the vertex at `c`, leaving through `exit`, until the walk
    /// returns to `c` or reaches an unpaired slot.
    ///
    /// Returns the visited corners (excluding `c`), whether the walk closed
    /// up, and the final unpaired exit slot otherwise.
    fn rotate(&self, c: Corner, exit: Slot) -> Result<(Vec<Corner>, Option<Slot>), ComplexError> {
        let mut seen = Vec::new();
        let mut cur = c;
        let mut out = exit;
        loop {
            let at_start = out.start() == cur;
            match self.cross(out, at_start) {
                None => return Ok((seen, Some(out))),
                Some((next, via)) => {
                    let next_exit = if next.out_side() == via {
                        next.in_side()
                    } else {
                        next.out_side()
                    };
                    if next == c && next_exit == exit {
                        return Ok((seen, None));
                    }
                    if next == c || seen.contains(&next) {
                        return Err(ComplexError::NonSurface(c));
                    }
                    seen.push(next);
                    cur = next;
                    out = next_exit;
                }
            }
            if seen.len() > 3 * self.triangle_count {
                return Err(ComplexError::NonSurface(c));
            }
        }
    }

    /// Vertex classes with their corner-to-class map.
    ///
    /// Classes are ordered by their smallest corner.
    pub fn vertex_structure(&self) -> Result<VertexStructure, ComplexError> {
        let n = 3 * self.triangle_count;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for idx in 0..n {
            if class_of[idx] != usize::MAX {
                continue;
            }
            let c = Corner::new(idx / 3, (idx % 3) as u8);
            let (fwd, end) = self.rotate(c, c.out_side())?;
            let (corners, boundary) = if end.is_none() {
                let mut v = vec![c];
                v.extend(fwd);
                (v, false)
            } else {
                let (back, end_back) = self.rotate(c, c.in_side())?;
                if end_back.is_none() {
                    return Err(ComplexError::NonSurface(c));
                }
                let mut v: Vec<Corner> = back.into_iter().rev().collect();
                v.push(c);
                v.extend(fwd);
                (v, true)
            };
            let id = classes.len();
            for k in &corners {
                if class_of[k.index()] != usize::MAX {
                    return Err(ComplexError::NonSurface(*k));
                }
                class_of[k.index()] = id;
            }
            let marked = corners.iter().any(|k| self.marked.contains(k));
            classes.push(VertexClass {
                triangle_valence: corners.len(),
                corners,
                marked,
                boundary,
            });
        }
        Ok(VertexStructure { classes, class_of })
    }

    /// Vertex classes, ordered by their smallest corner.
    pub fn vertex_classes(&self) -> Result<Vec<VertexClass>, ComplexError> {
        Ok(self.vertex_structure()?.classes)
    }

    /// `v − e + f`, counting each pairing and each unpaired slot as one edge.
    pub fn euler_characteristic(&self) -> Result<i64, ComplexError> {
        let v = self.vertex_structure()?.classes.len() as i64;
        let unpaired = 3 * self.triangle_count - 2 * self.pairings.len();
        let e = (self.pairings.len() + unpaired) as i64;
        Ok(v - e + self.triangle_count as i64)
    }

    /// Connected component index of every triangle, numbered by smallest triangle.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.triangle_count];
        let mut next = 0;
        for start in 0..self.triangle_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for s in 0..3 {
                    if let Some(pid) = self.pairing_of(Slot::new(t, s)) {
                        let o = self.pairings[pid].other(Slot::new(t, s)).unwrap();
                        if comp[o.tri] == usize::MAX {
                            comp[o.tri] = next;
                            stack.push(o.tri);
                        }
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Orientation signs `±1` per triangle, or `None` when some component is
    /// non-orientable. The lowest triangle of each component gets `+1`.
    pub fn orientation_signs(&self) -> Option<Vec<i8>> {
        let mut sign = vec![0i8; self.triangle_count];
        for start in 0..self.triangle_count {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for s in 0..3 {
                    let slot = Slot::new(t, s);
                    if let Some(pid) = self.pairing_of(slot) {
                        let p = self.pairings[pid];
                        let o = p.other(slot).unwrap();
                        let want = if p.reversed { sign[t] } else { -sign[t] };
                        if sign[o.tri] == 0 {
                            sign[o.tri] = want;
                            stack.push(o.tri);
                        } else if sign[o.tri] != want {
                            return None;
                        }
                    }
                }
            }
        }
        Some(sign)
    }

    /// True when a consistent orientation exists. Requires a connected complex.
    pub fn orientability(&self) -> Result<bool, ComplexError> {
        let comps = self.component_count();
        if comps != 1 {
            return Err(ComplexError::Disconnected(comps));
        }
        Ok(self.orientation_signs().is_some())
    }

    /// Genus, orientability and boundary count of a connected surface.
    pub fn genus(&self) -> Result<GenusInfo, ComplexError> {
        let orientable = self.orientability()?;
        let chi = self.euler_characteristic()?;
        let b = self.boundary_components()?.len();
        let genus = if orientable {
            (2 - chi - b as i64) / 2
        } else {
            2 - chi - b as i64
        };
        Ok(GenusInfo {
            genus,
            orientable,
            boundary: b,
        })
    }

    /// Boundary circles, each as a cyclic chain of unpaired slots.
    ///
    /// Walks are normalized to the induced orientation when every connected
    /// component is orientable. Components are ordered by smallest slot.
    pub fn boundary_components(&self) -> Result<Vec<BoundaryComponent>, ComplexError> {
        let signs = self.orientation_signs();
        let unpaired = self.unpaired_slots();
        let mut used = BTreeSet::new();
        let mut out = Vec::new();
        for &s in &unpaired {
            if used.contains(&s) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = BoundarySlot { slot: s, forward: true };
            loop {
                used.insert(cur.slot);
                cycle.push(cur);
                let head = cur.head();
                let exit = if head.out_side() == cur.slot {
                    head.in_side()
                } else {
                    head.out_side()
                };
                let (seen, end) = self.rotate(head, exit)?;
                let next_slot = end.ok_or(ComplexError::NonSurface(head))?;
                let at = seen.last().copied().unwrap_or(head);
                let next = BoundarySlot {
                    slot: next_slot,
                    forward: next_slot.start() == at,
                };
                if next.slot == s {
                    break;
                }
                if cycle.len() > unpaired.len() || used.contains(&next.slot) {
                    return Err(ComplexError::NonSurface(head));
                }
                cur = next;
            }
            if let Some(sign) = &signs {
                let induced = sign[cycle[0].slot.tri] > 0;
                if cycle[0].forward != induced {
                    cycle.reverse();
                    for x in cycle.iter_mut() {
                        x.forward = !x.forward;
                    }
                }
            }
            let min_pos = (0..cycle.len()).min_by_key(|&i| cycle[i].slot).unwrap();
            cycle.rotate_left(min_pos);
            let vertex_count = cycle.len();
            out.push(BoundaryComponent { cycle, vertex_count });
        }
        out.sort_by_key(|b| b.cycle[0].slot);
        Ok(out)
    }

    fn with_pairings(&self, pairings: Vec<Pairing>, marked: BTreeSet<Corner>) -> Result<Self, ComplexError> {
        Self::new(self.triangle_count, pairings, marked)
    }

    /// Disjoint union; the second complex's triangles are renumbered after
    /// the first's and its pairing ids after the first's.
    pub fn disjoint_union(&self, other: &TriangulatedComplex) -> TriangulatedComplex {
        let off = self.triangle_count;
        let shift = |s: Slot| Slot::new(s.tri + off, s.side);
        let mut pairings = self.pairings.clone();
        pairings.extend(
            other
                .pairings
                .iter()
                .map(|p| Pairing::new(shift(p.a), shift(p.b), p.reversed)),
        );
        let marked = self
            .marked
            .iter()
            .copied()
            .chain(other.marked.iter().map(|c| Corner::new(c.tri + off, c.corner)));
        Self::new(self.triangle_count + other.triangle_count, pairings, marked)
            .expect("union of valid complexes is valid")
    }

    /// Appends pairings, returning the new complex and the ids assigned.
    pub fn add_pairings(&self, extra: &[Pairing]) -> Result<(Self, Vec<usize>), ComplexError> {
        let start = self.pairings.len();
        let mut pairings = self.pairings.clone();
        pairings.extend_from_slice(extra);
        let c = self.with_pairings(pairings, self.marked.clone())?;
        Ok((c, (start..start + extra.len()).collect()))
    }

    /// Removes one pairing. Ids above `pid` shift down by one.
    pub fn remove_pairing(&self, pid: usize) -> Result<Self, ComplexError> {
        if pid >= self.pairings.len() {
            return Err(ComplexError::NoSuchPairing(pid));
        }
        let mut pairings = self.pairings.clone();
        pairings.remove(pid);
        self.with_pairings(pairings, self.marked.clone())
    }

    /// Replaces one pairing in place, keeping its id.
    pub fn replace_pairing(&self, pid: usize, p: Pairing) -> Result<Self, ComplexError> {
        if pid >= self.pairings.len() {
            return Err(ComplexError::NoSuchPairing(pid));
        }
        let mut pairings = self.pairings.clone();
        pairings[pid] = p;
        self.with_pairings(pairings, self.marked.clone())
    }

    /// Pairs two boundary chains of this complex slot by slot.
    ///
    /// Slot `i` of `bc1` is glued to slot `offset + i` of `bc2`, or to slot
    /// `offset − i` traversed backwards when `reverse` is set. Traversal
    /// directions are matched, so vertices are identified in cyclic order.
    /// Returns the new complex and the ids of the added pairings, in the
    /// order of `bc1`.
    pub fn pair_boundaries(
        &self,
        bc1: &BoundaryComponent,
        bc2: &BoundaryComponent,
        offset: usize,
        reverse: bool,
    ) -> Result<(Self, Vec<usize>), ComplexError> {
        let m = bc1.cycle.len();
        if m != bc2.cycle.len() {
            return Err(ComplexError::LengthMismatch(m, bc2.cycle.len()));
        }
        if bc1.cycle.iter().any(|x| bc2.contains(x.slot)) {
            return Err(ComplexError::SameComponent);
        }
        for b in bc1.cycle.iter().chain(&bc2.cycle) {
            if b.slot.tri >= self.triangle_count || self.pairing_of(b.slot).is_some() {
                return Err(ComplexError::NotBoundary(b.slot));
            }
        }
        let mut extra = Vec::with_capacity(m);
        for (i, x) in bc1.cycle.iter().enumerate() {
            let (y, same_direction) = if reverse {
                (bc2.cycle[(offset + m - i % m) % m], false)
            } else {
                (bc2.cycle[(offset + i) % m], true)
            };
            // Natural directions agree iff traversal flags agree, up to the
            // requested traversal relation.
            let natural_same = (x.forward == y.forward) == same_direction;
            extra.push(Pairing::new(x.slot, y.slot, !natural_same));
        }
        self.add_pairings(&extra)
    }

    /// Joins boundary component `bc1` of `c1` to `bc2` of `c2`.
    ///
    /// See [`TriangulatedComplex::pair_boundaries`] for `offset` and `reverse`.
    pub fn glue(
        c1: &TriangulatedComplex,
        bc1: &BoundaryComponent,
        c2: &TriangulatedComplex,
        bc2: &BoundaryComponent,
        offset: usize,
        reverse: bool,
    ) -> Result<TriangulatedComplex, ComplexError> {
        let off = c1.triangle_count;
        let u = c1.disjoint_union(c2);
        let shifted = BoundaryComponent {
            cycle: bc2
                .cycle
                .iter()
                .map(|b| BoundarySlot {
                    slot: Slot::new(b.slot.tri + off, b.slot.side),
                    forward: b.forward,
                })
                .collect(),
            vertex_count: bc2.vertex_count,
        };
        Ok(u.pair_boundaries(bc1, &shifted, offset, reverse)?.0)
    }

    /// Replaces the shared edge of the two triangles joined by pairing `pid`
    /// by the other diagonal of their union.
    ///
    /// With `pid` joining `(t, s)` to `(t′, s′)`, the edge's endpoints `A`
    /// (start of `(t, s)`) and `B` lose one corner each and the apexes `C`
    /// of `t` and `D` of `t′` gain one. Afterwards `t = (C, A, D)` and
    /// `t′ = (D, B, C)`, and `pid` joins side 2 of `t` to side 2 of `t′`.
    pub fn flip_edge(&self, pid: usize) -> Result<Self, ComplexError> {
        let p = *self.pairings.get(pid).ok_or(ComplexError::NoSuchPairing(pid))?;
        let (t, s) = (p.a.tri, p.a.side);
        let (t2, s2) = (p.b.tri, p.b.side);
        if t == t2 {
            return Err(ComplexError::BadFlip(pid, "both slots lie in one triangle"));
        }
        let nx = |x: u8, d: u8| (x + d) % 3;
        // Old slot -> (new slot, direction flipped).
        let mut remap: Vec<(Slot, Slot, bool)> = vec![
            (Slot::new(t, nx(s, 1)), Slot::new(t2, 1), false),
            (Slot::new(t, nx(s, 2)), Slot::new(t, 0), false),
        ];
        if p.reversed {
            remap.push((Slot::new(t2, nx(s2, 1)), Slot::new(t, 1), false));
            remap.push((Slot::new(t2, nx(s2, 2)), Slot::new(t2, 0), false));
        } else {
            remap.push((Slot::new(t2, nx(s2, 1)), Slot::new(t2, 0), true));
            remap.push((Slot::new(t2, nx(s2, 2)), Slot::new(t, 1), true));
        }
        let map = |x: Slot| -> (Slot, bool) {
            remap
                .iter()
                .find(|(old, _, _)| *old == x)
                .map(|(_, new, f)| (*new, *f))
                .unwrap_or((x, false))
        };
        let mut pairings = Vec::with_capacity(self.pairings.len());
        for (id, q) in self.pairings.iter().enumerate() {
            if id == pid {
                pairings.push(Pairing::new(Slot::new(t, 2), Slot::new(t2, 2), true));
                continue;
            }
            let (a, fa) = map(q.a);
            let (b, fb) = map(q.b);
            pairings.push(Pairing::new(a, b, q.reversed ^ fa ^ fb));
        }
        // Old corner -> new corner: A -> (t,1), B -> (t2,1), C -> (t,0), D -> (t2,0).
        let (a2, b2) = if p.reversed { (nx(s2, 1), s2) } else { (s2, nx(s2, 1)) };
        let corner_map = |c: Corner| -> Corner {
            if c.tri == t {
                match (c.corner + 3 - s) % 3 {
                    0 => Corner::new(t, 1),
                    1 => Corner::new(t2, 1),
                    _ => Corner::new(t, 0),
                }
            } else if c.tri == t2 {
                if c.corner == a2 {
                    Corner::new(t, 1)
                } else if c.corner == b2 {
                    Corner::new(t2, 1)
                } else {
                    Corner::new(t2, 0)
                }
            } else {
                c
            }
        };
        let mut marked = BTreeSet::new();
        for c in &self.marked {
            if !marked.insert(corner_map(*c)) {
                return Err(ComplexError::BadFlip(pid, "two marked corners would merge"));
            }
        }
        self.with_pairings(pairings, marked)
    }

    /// Checks that every marked vertex meets exactly one triangle corner,
    /// which is itself marked, and lies in the interior.
    pub fn validate_marked(&self) -> Result<MarkedCertificate, ComplexError> {
        let vs = self.vertex_structure()?;
        let mut violations = Vec::new();
        let mut count = 0;
        for (id, cls) in vs.classes.iter().enumerate() {
            if !cls.marked {
                continue;
            }
            count += 1;
            if cls.triangle_valence != 1 {
                violations.push(format!(
                    "marked vertex {id} has triangle valence {}",
                    cls.triangle_valence
                ));
            }
            if cls.boundary {
                violations.push(format!("marked vertex {id} lies on the boundary"));
            }
            if cls.corners.iter().any(|c| !self.marked.contains(c)) {
                violations.push(format!("marked vertex {id} has an unmarked corner"));
            }
        }
        Ok(MarkedCertificate {
            marked_vertices: count,
            violations,
        })
    }

    /// Cyclic `degree`-fold cover in which pairing `p` joins copy `c` of its
    /// first slot to copy `c + shifts[p]` of its second slot.
    ///
    /// Copy `c` of triangle `t` is triangle `c·T + t`; copy `c` of pairing
    /// `p` has id `c·P + p`.
    pub fn cyclic_cover(&self, shifts: &[i64], degree: usize) -> Result<Self, ComplexError> {
        let d = degree as i64;
        let perms: Vec<Vec<usize>> = shifts
            .iter()
            .map(|s| (0..d).map(|c| (c + s).rem_euclid(d) as usize).collect())
            .collect();
        self.permutation_cover(&perms)
    }

    /// Cover in which pairing `p` joins copy `c` of its first slot to copy
    /// `perms[p][c]` of its second slot. Numbering as in
    /// [`TriangulatedComplex::cyclic_cover`].
    ///
    /// # Panics
    /// When `perms` has the wrong length or an entry is not a permutation of
    /// a common degree.
    pub fn permutation_cover(&self, perms: &[Vec<usize>]) -> Result<Self, ComplexError> {
        assert_eq!(perms.len(), self.pairings.len(), "one permutation per pairing");
        let degree = perms.first().map_or(1, Vec::len);
        assert!(degree >= 1, "cover degree must be positive");
        for perm in perms {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            assert!(sorted.iter().copied().eq(0..degree), "not a permutation of 0..{degree}");
        }
        let tc = self.triangle_count;
        let lift = |s: Slot, c: usize| Slot::new(c * tc + s.tri, s.side);
        let mut pairings = Vec::with_capacity(degree * self.pairings.len());
        for c in 0..degree {
            for (p, perm) in self.pairings.iter().zip(perms) {
                pairings.push(Pairing::new(lift(p.a, c), lift(p.b, perm[c]), p.reversed));
            }
        }
        let marked = (0..degree).flat_map(|c| self.marked.iter().map(move |m| Corner::new(c * tc + m.tri, m.corner)));
        Self::new(degree * tc, pairings, marked)
    }

    /// Copy with pairings normalized (`a < b`) and sorted lexicographically.
    pub fn canonical(&self) -> Self {
        let mut pairings: Vec<Pairing> = self.pairings.iter().map(|p| p.normalized()).collect();
        pairings.sort();
        self.with_pairings(pairings, self.marked.clone())
            .expect("reordering keeps validity")
    }
}
