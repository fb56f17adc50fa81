//! Marked surfaces and their triangulations.
//!
//! A [`Triangulation`] is a half-edge combinatorial map. Every triangle owns
//! three half-edges listed counterclockwise; a half-edge runs from the marked
//! point at its origin to the origin of the next half-edge of its triangle.
//! Two paired half-edges form one internal arc, an unpaired half-edge is a
//! boundary arc. Pairings always reverse orientation.
//!
//! Half-edge identifiers and marked-point identifiers are stable under flips:
//! a flip rewires the `next` and `origin` data of the two half-edges of the
//! flipped arc and reassigns the triangle membership of the four quadrilateral
//! sides. Pairings therefore never change, and a flipped arc keeps its two
//! half-edges while receiving a fresh [`ArcId`].

mod generators;
mod gluing;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gluing::{GluingTable, SideLabel};

/// A half-edge of a triangulation. Also used to name the triangle corner at
/// the half-edge's origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfEdge(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcId(pub u32);

/// A marked point on the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub u32);

impl HalfEdge {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// An unpunctured marked surface, described by its genus and the number of
/// marked points on each boundary component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedSurface {
    pub genus: u32,
    pub boundary_marked_counts: Vec<u32>,
}

impl MarkedSurface {
    pub fn new(genus: u32, boundary_marked_counts: Vec<u32>) -> Result<Self> {
        if boundary_marked_counts.is_empty() {
            return Err(Error::InvalidSurface(
                "at least one boundary component is required".into(),
            ));
        }
        if boundary_marked_counts.contains(&0) {
            return Err(Error::InvalidSurface(
                "every boundary component needs a marked point".into(),
            ));
        }
        let surface = MarkedSurface {
            genus,
            boundary_marked_counts,
        };
        let n = surface.internal_arc_count();
        if n < 1 {
            return Err(Error::Degenerate(n));
        }
        Ok(surface)
    }

    pub fn boundary_components(&self) -> usize {
        self.boundary_marked_counts.len()
    }

    pub fn marked_points(&self) -> usize {
        self.boundary_marked_counts
            .iter()
            .map(|&m| m as usize)
            .sum()
    }

    /// `6g + 3b + c - 6`.
    pub fn internal_arc_count(&self) -> i64 {
        6 * self.genus as i64 + 3 * self.boundary_components() as i64 + self.marked_points() as i64
            - 6
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipDirection {
    Forward,
    Inverse,
}

impl FlipDirection {
    pub fn opposite(self) -> Self {
        match self {
            FlipDirection::Forward => FlipDirection::Inverse,
            FlipDirection::Inverse => FlipDirection::Forward,
        }
    }
}

/// The quadrilateral around an internal arc.
///
/// With `diagonal` running from `P` to `Q` inside triangle `A = (P, Q, R)` and
/// `diagonal_twin` running from `Q` to `P` inside `B = (Q, P, S)`, the four
/// sides in counterclockwise order around the quadrilateral are
/// `a_next: Q->R`, `a_prev: R->P` (both in `A`) and `b_next: P->S`,
/// `b_prev: S->Q` (both in `B`). `corners` lists `[Q, R, P, S]`.
///
/// Numbering the arcs τ₁..τ₅ with τ₁ the diagonal, τ₃ = `a_next` and
/// τ₄ = `a_prev` border one triangle, τ₂ = `b_next` and τ₅ = `b_prev` the
/// other. Sides are half-edges, so they stay distinct even
/// when two of them are the same arc of the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quad {
    pub diagonal: HalfEdge,
    pub diagonal_twin: HalfEdge,
    pub a_next: HalfEdge,
    pub a_prev: HalfEdge,
    pub b_next: HalfEdge,
    pub b_prev: HalfEdge,
    /// Partners of `[a_next, a_prev, b_next, b_prev]`; `None` for boundary sides.
    pub side_twins: [Option<HalfEdge>; 4],
    pub corners: [PointId; 4],
}

impl Quad {
    pub fn sides(&self) -> [HalfEdge; 4] {
        [self.a_next, self.a_prev, self.b_next, self.b_prev]
    }

    /// The quadrilateral as seen from the same diagonal half-edge after a flip
    /// in `direction`.
    fn after(&self, direction: FlipDirection) -> Quad {
        let [tq, tr, tp, ts] = self.side_twins;
        let [q, r, p, s] = self.corners;
        match direction {
            // diagonal: S->R in (diagonal, a_prev, b_next)
            FlipDirection::Forward => Quad {
                diagonal: self.diagonal,
                diagonal_twin: self.diagonal_twin,
                a_next: self.a_prev,
                a_prev: self.b_next,
                b_next: self.b_prev,
                b_prev: self.a_next,
                side_twins: [tr, tp, ts, tq],
                corners: [r, p, s, q],
            },
            // diagonal: R->S in (diagonal, b_prev, a_next)
            FlipDirection::Inverse => Quad {
                diagonal: self.diagonal,
                diagonal_twin: self.diagonal_twin,
                a_next: self.b_prev,
                a_prev: self.a_next,
                b_next: self.a_prev,
                b_prev: self.b_next,
                side_twins: [ts, tq, tr, tp],
                corners: [s, q, r, p],
            },
        }
    }
}

/// Everything needed to replay or undo a flip and to transport curves across it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlipRecord {
    pub quad: Quad,
    pub old_arc: ArcId,
    pub new_arc: ArcId,
    pub direction: FlipDirection,
}

impl FlipRecord {
    /// Half-edges of the new diagonal: the first shares a triangle with
    /// `a_prev` and `b_next`, the second with `b_prev` and `a_next`.
    pub fn new_diagonal(&self) -> (HalfEdge, HalfEdge) {
        match self.direction {
            FlipDirection::Forward => (self.quad.diagonal, self.quad.diagonal_twin),
            FlipDirection::Inverse => (self.quad.diagonal_twin, self.quad.diagonal),
        }
    }

    /// The record that undoes this flip.
    pub fn inverse(&self) -> FlipRecord {
        FlipRecord {
            quad: self.quad.after(self.direction),
            old_arc: self.new_arc,
            new_arc: self.old_arc,
            direction: self.direction.opposite(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangulation {
    next: Vec<HalfEdge>,
    twin: Vec<Option<HalfEdge>>,
    origin: Vec<PointId>,
    arc: Vec<ArcId>,
    face: Vec<u32>,
    /// Each triangle rotated so that its smallest half-edge comes first.
    faces: Vec<[HalfEdge; 3]>,
    surface: MarkedSurface,
}

fn rotate_min_first(t: [HalfEdge; 3]) -> [HalfEdge; 3] {
    let i = (0..3).min_by_key(|&i| t[i]).unwrap();
    [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
}

impl Triangulation {
    pub fn surface(&self) -> &MarkedSurface {
        &self.surface
    }

    pub fn half_edge_count(&self) -> usize {
        self.next.len()
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        (0..self.next.len() as u32).map(HalfEdge)
    }

    pub fn triangles(&self) -> &[[HalfEdge; 3]] {
        &self.faces
    }

    pub fn contains(&self, h: HalfEdge) -> bool {
        h.idx() < self.next.len()
    }

    #[inline]
    pub fn next(&self, h: HalfEdge) -> HalfEdge {
        self.next[h.idx()]
    }

    #[inline]
    pub fn prev(&self, h: HalfEdge) -> HalfEdge {
        self.next(self.next(h))
    }

    #[inline]
    pub fn twin(&self, h: HalfEdge) -> Option<HalfEdge> {
        self.twin[h.idx()]
    }

    #[inline]
    pub fn origin(&self, h: HalfEdge) -> PointId {
        self.origin[h.idx()]
    }

    #[inline]
    pub fn dest(&self, h: HalfEdge) -> PointId {
        self.origin(self.next(h))
    }

    #[inline]
    pub fn arc(&self, h: HalfEdge) -> ArcId {
        self.arc[h.idx()]
    }

    #[inline]
    pub fn face(&self, h: HalfEdge) -> usize {
        self.face[h.idx()] as usize
    }

    pub fn is_boundary(&self, h: HalfEdge) -> bool {
        self.twin(h).is_none()
    }

    /// Internal arc ids in increasing order.
    pub fn internal_arcs(&self) -> Vec<ArcId> {
        let mut arcs: Vec<ArcId> = self
            .half_edges()
            .filter(|&h| self.twin(h).is_some_and(|t| h < t))
            .map(|h| self.arc(h))
            .collect();
        arcs.sort();
        arcs
    }

    pub fn boundary_arcs(&self) -> Vec<ArcId> {
        let mut arcs: Vec<ArcId> = self
            .half_edges()
            .filter(|&h| self.is_boundary(h))
            .map(|h| self.arc(h))
            .collect();
        arcs.sort();
        arcs
    }

    /// The smaller half-edge carrying `arc`, and its partner if internal.
    pub fn half_edges_of(&self, arc: ArcId) -> Result<(HalfEdge, Option<HalfEdge>)> {
        let h = self
            .half_edges()
            .find(|&h| self.arc(h) == arc)
            .ok_or(Error::UnknownArc(arc))?;
        Ok((h, self.twin(h)))
    }

    pub fn is_internal(&self, arc: ArcId) -> bool {
        matches!(self.half_edges_of(arc), Ok((_, Some(_))))
    }

    pub fn marked_point_count(&self) -> usize {
        self.origin
            .iter()
            .map(|p| p.0 as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Endpoints of an arc as an unordered pair (smaller first).
    pub fn endpoints(&self, arc: ArcId) -> Result<(PointId, PointId)> {
        let (h, _) = self.half_edges_of(arc)?;
        let (a, b) = (self.origin(h), self.dest(h));
        Ok(if a <= b { (a, b) } else { (b, a) })
    }

    pub fn quad(&self, arc: ArcId) -> Result<Quad> {
        let (h, twin) = self.half_edges_of(arc)?;
        let h2 = twin.ok_or(Error::BoundaryArc(arc))?;
        let (h, h2) = if h < h2 { (h, h2) } else { (h2, h) };
        if self.face(h) == self.face(h2) {
            return Err(Error::SelfGlued(self.face(h), arc.to_string()));
        }
        let a_next = self.next(h);
        let a_prev = self.next(a_next);
        let b_next = self.next(h2);
        let b_prev = self.next(b_next);
        Ok(Quad {
            diagonal: h,
            diagonal_twin: h2,
            a_next,
            a_prev,
            b_next,
            b_prev,
            side_twins: [a_next, a_prev, b_next, b_prev].map(|s| self.twin(s)),
            corners: [
                self.origin(h2),
                self.origin(a_prev),
                self.origin(h),
                self.origin(b_prev),
            ],
        })
    }

    fn fresh_arc_id(&self) -> ArcId {
        ArcId(self.arc.iter().map(|a| a.0).max().map_or(0, |m| m + 1))
    }

    /// Replaces an internal arc by the other diagonal of its quadrilateral.
    /// The new arc receives a fresh id; every other arc keeps its id.
    pub fn flip(&self, arc: ArcId) -> Result<(Triangulation, FlipRecord)> {
        let quad = self.quad(arc)?;
        let record = FlipRecord {
            quad,
            old_arc: arc,
            new_arc: self.fresh_arc_id(),
            direction: FlipDirection::Forward,
        };
        let t = self.apply(&record)?;
        Ok((t, record))
    }

    /// Replays a flip record. Fails if the record's quadrilateral is not the
    /// current neighbourhood of its diagonal.
    pub fn apply(&self, record: &FlipRecord) -> Result<Triangulation> {
        let q = &record.quad;
        let ok = self.contains(q.diagonal)
            && self.contains(q.diagonal_twin)
            && self.arc(q.diagonal) == record.old_arc
            && self.twin(q.diagonal) == Some(q.diagonal_twin)
            && self.next(q.diagonal) == q.a_next
            && self.next(q.a_next) == q.a_prev
            && self.next(q.diagonal_twin) == q.b_next
            && self.next(q.b_next) == q.b_prev
            && q.sides()
                .iter()
                .zip(q.side_twins)
                .all(|(&s, t)| self.twin(s) == t)
            && self.face(q.diagonal) != self.face(q.diagonal_twin);
        if !ok {
            return Err(Error::RecordMismatch);
        }
        let [_, r, _, s] = q.corners;
        let (e, e2) = record.new_diagonal();
        let mut t = self.clone();
        let slot_a = self.face(q.diagonal) as u32;
        let slot_b = self.face(q.diagonal_twin) as u32;

        t.origin[e.idx()] = s;
        t.origin[e2.idx()] = r;
        t.next[e.idx()] = q.a_prev;
        t.next[q.a_prev.idx()] = q.b_next;
        t.next[q.b_next.idx()] = e;
        t.next[e2.idx()] = q.b_prev;
        t.next[q.b_prev.idx()] = q.a_next;
        t.next[q.a_next.idx()] = e2;
        t.arc[e.idx()] = record.new_arc;
        t.arc[e2.idx()] = record.new_arc;

        // the original diagonal half-edge keeps its triangle slot
        let (slot_e, slot_e2) = if e == q.diagonal {
            (slot_a, slot_b)
        } else {
            (slot_b, slot_a)
        };
        for h in [e, q.a_prev, q.b_next] {
            t.face[h.idx()] = slot_e;
        }
        for h in [e2, q.b_prev, q.a_next] {
            t.face[h.idx()] = slot_e2;
        }
        t.faces[slot_e as usize] = rotate_min_first([e, q.a_prev, q.b_next]);
        t.faces[slot_e2 as usize] = rotate_min_first([e2, q.b_prev, q.a_next]);
        Ok(t)
    }

    /// Walks around the boundary, returning each component as its cycle of
    /// boundary half-edges.
    pub fn boundary_cycles(&self) -> Vec<Vec<HalfEdge>> {
        let mut seen = vec![false; self.half_edge_count()];
        let mut cycles = Vec::new();
        for h in self.half_edges() {
            if !self.is_boundary(h) || seen[h.idx()] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = h;
            while !seen[x.idx()] {
                seen[x.idx()] = true;
                cycle.push(x);
                x = self.next_boundary(x);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// The boundary half-edge following `h` along its boundary component.
    pub fn next_boundary(&self, h: HalfEdge) -> HalfEdge {
        let mut x = self.next(h);
        while let Some(t) = self.twin(x) {
            x = self.next(t);
        }
        x
    }

    /// Recomputes every structural invariant from scratch.
    pub fn validate(&self) -> ValidationReport {
        let mut reasons = Vec::new();
        let half_edges = self.half_edge_count();
        let triangles = self.faces.len();
        let mut structure_ok = half_edges == 3 * triangles;
        for (i, tri) in self.faces.iter().enumerate() {
            for k in 0..3 {
                let h = tri[k];
                if self.next(h) != tri[(k + 1) % 3] || self.face(h) != i {
                    structure_ok = false;
                }
            }
        }
        if !structure_ok {
            reasons.push("triangle table inconsistent with next pointers".to_string());
        }
        let mut involution_ok = true;
        let mut self_glued = false;
        for h in self.half_edges() {
            if let Some(t) = self.twin(h) {
                if t == h || self.twin(t) != Some(h) || self.arc(t) != self.arc(h) {
                    involution_ok = false;
                }
                if self.origin(t) != self.dest(h) || self.dest(t) != self.origin(h) {
                    involution_ok = false;
                }
                if self.face(t) == self.face(h) {
                    self_glued = true;
                }
            }
        }
        if !involution_ok {
            reasons.push("pairing is not an orientation-reversing involution".to_string());
        }
        if self_glued {
            reasons.push("self-glued triangle".to_string());
        }

        let internal = self.internal_arcs().len();
        let boundary_arcs = self.boundary_arcs().len();
        let corners = self.marked_point_count();
        let cycles = self.boundary_cycles();
        let b = cycles.len();
        let euler = corners as i64 - (internal + boundary_arcs) as i64 + triangles as i64;
        let twice_genus = 2 - b as i64 - euler;
        let genus = if twice_genus >= 0 && twice_genus % 2 == 0 {
            Some((twice_genus / 2) as u32)
        } else {
            None
        };
        let mut counts: Vec<u32> = cycles.iter().map(|c| c.len() as u32).collect();
        counts.sort_unstable();
        let mut declared = self.surface.boundary_marked_counts.clone();
        declared.sort_unstable();
        let euler_ok = genus == Some(self.surface.genus)
            && counts == declared
            && boundary_arcs == self.surface.marked_points()
            && corners == self.surface.marked_points();
        if !euler_ok {
            reasons.push(format!(
                "Euler characteristic mismatch: V - E + F = {euler}, b = {b}, boundary arcs = {boundary_arcs}"
            ));
        }
        let expected_n = self.surface.internal_arc_count();
        let arc_count_ok = internal as i64 == expected_n;
        if !arc_count_ok {
            reasons.push(format!(
                "internal arc count {internal} differs from 6g + 3b + c - 6 = {expected_n}"
            ));
        }
        ValidationReport {
            genus: genus.unwrap_or(self.surface.genus),
            boundary_components: b,
            marked_points: corners,
            internal_arcs: internal,
            boundary_arcs,
            triangles,
            expected_internal_arcs: expected_n,
            euler_ok,
            self_glued_ok: !self_glued,
            ok: reasons.is_empty(),
            reasons,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub genus: u32,
    pub boundary_components: usize,
    pub marked_points: usize,
    pub internal_arcs: usize,
    pub boundary_arcs: usize,
    pub triangles: usize,
    pub expected_internal_arcs: i64,
    pub euler_ok: bool,
    pub self_glued_ok: bool,
    pub ok: bool,
    pub reasons: Vec<String>,
}

#[cfg(test)]
mod tests;
