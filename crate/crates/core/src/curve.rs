//! Curves between marked points, up to homotopy fixing endpoints, recorded
//! as crossing traces relative to a triangulation.
//!
//! A transverse trace starts at a triangle corner, crosses a sequence of
//! internal arcs and ends at a corner. Each crossing is stored as the
//! half-edge through which the curve enters the next triangle. Corners are
//! named by the half-edge whose origin they sit at.
//!
//! A trace is reduced when it has no bigon (two consecutive crossings of the
//! same half-edge pair, i.e. entering and leaving a triangle through the same
//! side) and no half-bigon at either end (leaving the start corner through a
//! side incident to it, or the mirror image at the end). Reduced traces are
//! normal curves and realize the minimal intersection number with every arc.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{ArcId, FlipRecord, HalfEdge, PointId, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveTrace {
    /// The curve is homotopic to the arc carried by `side`, traversed from
    /// its origin (or against it when `reversed`). For internal arcs the
    /// half-edge is always chosen so that `reversed` is false.
    Along { side: HalfEdge, reversed: bool },
    Transverse {
        start: HalfEdge,
        crossings: Vec<HalfEdge>,
        end: HalfEdge,
    },
}

/// Plain JSON form of a trace: `{"start": corner, "crossings": [..], "end": corner}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub start: HalfEdge,
    pub crossings: Vec<HalfEdge>,
    pub end: HalfEdge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intersections {
    /// Crossing count for every internal arc (zeros included).
    pub per_arc: BTreeMap<ArcId, usize>,
    pub total: usize,
}

impl CurveTrace {
    /// The curve running along `side` from its origin to its destination.
    pub fn along(t: &Triangulation, side: HalfEdge) -> CurveTrace {
        CurveTrace::Along {
            side,
            reversed: false,
        }
        .normalized(t)
    }

    fn normalized(self, t: &Triangulation) -> CurveTrace {
        match self {
            CurveTrace::Along {
                side,
                reversed: true,
            } => match t.twin(side) {
                Some(tw) => CurveTrace::Along {
                    side: tw,
                    reversed: false,
                },
                None => self,
            },
            other => other,
        }
    }

    pub fn from_json(json: &TraceJson) -> CurveTrace {
        CurveTrace::Transverse {
            start: json.start,
            crossings: json.crossings.clone(),
            end: json.end,
        }
    }

    pub fn is_along(&self) -> bool {
        matches!(self, CurveTrace::Along { .. })
    }

    pub fn crossings(&self) -> &[HalfEdge] {
        match self {
            CurveTrace::Along { .. } => &[],
            CurveTrace::Transverse { crossings, .. } => crossings,
        }
    }

    pub fn start_point(&self, t: &Triangulation) -> PointId {
        match *self {
            CurveTrace::Along { side, reversed } => {
                if reversed {
                    t.dest(side)
                } else {
                    t.origin(side)
                }
            }
            CurveTrace::Transverse { start, .. } => t.origin(start),
        }
    }

    pub fn end_point(&self, t: &Triangulation) -> PointId {
        match *self {
            CurveTrace::Along { side, reversed } => {
                if reversed {
                    t.origin(side)
                } else {
                    t.dest(side)
                }
            }
            CurveTrace::Transverse { end, .. } => t.origin(end),
        }
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self, t: &Triangulation) -> CurveTrace {
        match self {
            CurveTrace::Along { side, reversed } => CurveTrace::Along {
                side: *side,
                reversed: !reversed,
            }
            .normalized(t),
            CurveTrace::Transverse {
                start,
                crossings,
                end,
            } => CurveTrace::Transverse {
                start: *end,
                crossings: crossings
                    .iter()
                    .rev()
                    .map(|&k| t.twin(k).expect("crossings pass through internal arcs"))
                    .collect(),
                end: *start,
            },
        }
    }

    pub fn check(&self, t: &Triangulation) -> Result<()> {
        match self {
            CurveTrace::Along { side, .. } => {
                if !t.contains(*side) {
                    return Err(Error::UnknownHalfEdge(*side));
                }
                Ok(())
            }
            CurveTrace::Transverse {
                start,
                crossings,
                end,
            } => {
                for &h in std::iter::once(start)
                    .chain(crossings)
                    .chain(std::iter::once(end))
                {
                    if !t.contains(h) {
                        return Err(Error::UnknownHalfEdge(h));
                    }
                }
                let mut face = t.face(*start);
                for (i, &k) in crossings.iter().enumerate() {
                    let exit = t.twin(k).ok_or(Error::InconsistentTrace(i))?;
                    if t.face(exit) != face {
                        return Err(Error::InconsistentTrace(i));
                    }
                    face = t.face(k);
                }
                if t.face(*end) != face {
                    return Err(Error::InconsistentTrace(crossings.len()));
                }
                Ok(())
            }
        }
    }

    /// Removes bigons and end half-bigons until none remain.
    pub fn reduce(&self, t: &Triangulation) -> Result<CurveTrace> {
        self.check(t)?;
        let (mut start, crossings, mut end) = match self {
            CurveTrace::Along { .. } => return Ok(self.clone().normalized(t)),
            CurveTrace::Transverse {
                start,
                crossings,
                end,
            } => (*start, crossings, *end),
        };
        let twin = |h: HalfEdge| t.twin(h).expect("checked");
        let mut stack: Vec<HalfEdge> = Vec::with_capacity(crossings.len());
        for &k in crossings {
            if stack.last() == Some(&twin(k)) {
                stack.pop();
            } else {
                stack.push(k);
            }
        }
        let mut cr: std::collections::VecDeque<HalfEdge> = stack.into();
        loop {
            let mut changed = false;
            if let Some(&k) = cr.front() {
                let exit = twin(k);
                if exit == start {
                    start = t.next(k);
                    cr.pop_front();
                    changed = true;
                } else if exit == t.prev(start) {
                    start = k;
                    cr.pop_front();
                    changed = true;
                }
            }
            if let Some(&k) = cr.back() {
                if k == end {
                    end = t.next(twin(k));
                    cr.pop_back();
                    changed = true;
                } else if k == t.prev(end) {
                    end = twin(k);
                    cr.pop_back();
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if cr.is_empty() {
            if start == end {
                return Err(Error::Contractible);
            }
            let along = if t.next(start) == end {
                CurveTrace::Along {
                    side: start,
                    reversed: false,
                }
            } else {
                CurveTrace::Along {
                    side: end,
                    reversed: true,
                }
            };
            return Ok(along.normalized(t));
        }
        Ok(CurveTrace::Transverse {
            start,
            crossings: cr.into(),
            end,
        })
    }

    pub fn is_reduced(&self, t: &Triangulation) -> bool {
        self.reduce(t).is_ok_and(|r| &r == self)
    }

    pub fn intersection_numbers(&self, t: &Triangulation) -> Intersections {
        let mut per_arc: BTreeMap<ArcId, usize> =
            t.internal_arcs().into_iter().map(|a| (a, 0)).collect();
        for &k in self.crossings() {
            *per_arc.entry(t.arc(k)).or_default() += 1;
        }
        let total = per_arc.values().sum();
        Intersections { per_arc, total }
    }

    /// Number of crossings with one arc.
    pub fn intersection_with(&self, t: &Triangulation, arc: ArcId) -> usize {
        self.crossings()
            .iter()
            .filter(|&&k| t.arc(k) == arc)
            .count()
    }

    /// The first arc crossed when walking from the start of the curve.
    pub fn first_crossed_arc(&self, t: &Triangulation) -> Result<ArcId> {
        self.crossings()
            .first()
            .map(|&k| t.arc(k))
            .ok_or(Error::NoCrossing)
    }

    /// Rewrites the trace across a flip. `target` is the triangulation after
    /// the flip; the result is reduced relative to it.
    pub fn transport(&self, rec: &FlipRecord, target: &Triangulation) -> Result<CurveTrace> {
        let q = &rec.quad;
        let (e, e2) = rec.new_diagonal();
        if !target.contains(e)
            || target.arc(e) != rec.new_arc
            || target.next(e) != q.a_prev
            || target.next(e2) != q.b_prev
        {
            return Err(Error::RecordMismatch);
        }
        let rewritten = match self {
            CurveTrace::Along { side, .. } if *side == q.diagonal => CurveTrace::Transverse {
                start: q.b_next,
                crossings: vec![e2],
                end: q.a_next,
            },
            CurveTrace::Along { side, .. } if *side == q.diagonal_twin => CurveTrace::Transverse {
                start: q.a_next,
                crossings: vec![e],
                end: q.b_next,
            },
            CurveTrace::Along { .. } => self.clone(),
            CurveTrace::Transverse {
                start,
                crossings,
                end,
            } => transport_transverse(rec, *start, crossings, *end)?,
        };
        rewritten.reduce(target)
    }
}

// Ports around the quadrilateral, counterclockwise: Q=0, a_next=1, R=2,
// a_prev=3, P=4, b_next=5, S=6, b_prev=7. The old diagonal joins 4 and 0,
// the new one joins 2 and 6.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Region {
    /// new triangle (e, a_prev, b_next)
    Left,
    /// new triangle (e2, b_prev, a_next)
    Right,
}

fn region_of(port: u8) -> Option<Region> {
    match port {
        3..=5 => Some(Region::Left),
        7 | 0 | 1 => Some(Region::Right),
        _ => None,
    }
}

fn transport_transverse(
    rec: &FlipRecord,
    start: HalfEdge,
    cr: &[HalfEdge],
    end: HalfEdge,
) -> Result<CurveTrace> {
    let q = &rec.quad;
    let (e, e2) = rec.new_diagonal();
    let in_quad = |h: HalfEdge| {
        [
            q.diagonal,
            q.a_next,
            q.a_prev,
            q.diagonal_twin,
            q.b_next,
            q.b_prev,
        ]
        .contains(&h)
    };
    let is_diag = |h: HalfEdge| h == q.diagonal || h == q.diagonal_twin;
    let corner_port = |c: HalfEdge| -> u8 {
        if c == q.diagonal || c == q.b_next {
            4
        } else if c == q.a_next || c == q.diagonal_twin {
            0
        } else if c == q.a_prev {
            2
        } else {
            6
        }
    };
    let side_port = |s: HalfEdge| -> u8 {
        if s == q.a_next {
            1
        } else if s == q.a_prev {
            3
        } else if s == q.b_next {
            5
        } else {
            7
        }
    };
    let exit_port = |k: HalfEdge| -> Result<u8> {
        q.sides()
            .iter()
            .zip(q.side_twins)
            .find(|(_, tw)| *tw == Some(k))
            .map(|(&s, _)| side_port(s))
            .ok_or(Error::RecordMismatch)
    };
    let new_corner = |port: u8, region: Region| -> HalfEdge {
        match (port, region) {
            (0, _) => q.a_next,
            (4, _) => q.b_next,
            (2, Region::Left) => q.a_prev,
            (2, Region::Right) => e2,
            (6, Region::Left) => e,
            _ => q.b_prev,
        }
    };

    let m = cr.len();
    let mut out = Vec::with_capacity(m + 1);
    let (mut new_start, mut new_end) = (start, end);
    let mut j = 0;
    loop {
        let seg_in_quad = if j == 0 {
            in_quad(start)
        } else {
            in_quad(cr[j - 1])
        };
        if seg_in_quad {
            let first = j;
            while j < m && is_diag(cr[j]) {
                j += 1;
            }
            let x = if first == 0 {
                corner_port(start)
            } else {
                side_port(cr[first - 1])
            };
            let y = if j == m {
                corner_port(end)
            } else {
                exit_port(cr[j])?
            };
            if first == 0 && j == m {
                // the whole curve lives in the quadrilateral
                if x == y {
                    return Err(Error::Contractible);
                }
                if (x, y) == (2, 6) {
                    return Ok(CurveTrace::Along {
                        side: e2,
                        reversed: false,
                    });
                }
                if (x, y) == (6, 2) {
                    return Ok(CurveTrace::Along {
                        side: e,
                        reversed: false,
                    });
                }
            }
            let (rx, ry) = match (region_of(x), region_of(y)) {
                (Some(a), Some(b)) => (a, b),
                (None, Some(b)) => (b, b),
                (Some(a), None) => (a, a),
                (None, None) => return Err(Error::InconsistentTrace(first)),
            };
            if first == 0 {
                new_start = new_corner(x, rx);
            }
            if j == m {
                new_end = new_corner(y, ry);
            }
            if rx != ry {
                out.push(if ry == Region::Right { e2 } else { e });
            }
        }
        if j == m {
            break;
        }
        out.push(cr[j]);
        j += 1;
    }
    Ok(CurveTrace::Transverse {
        start: new_start,
        crossings: out,
        end: new_end,
    })
}

/// For triangulations of a polygon whose marked points are the vertices
/// `0..c` in counterclockwise boundary order, the diagonal or boundary
/// segment from `from` to `to` as a reduced trace.
pub fn disc_curve(t: &Triangulation, from: u32, to: u32) -> Result<CurveTrace> {
    let s = t.surface();
    if s.genus != 0 || s.boundary_components() != 1 {
        return Err(Error::InvalidCurve("vertex-pair curves need a disc".into()));
    }
    let c = s.marked_points() as u32;
    let cycle = &t.boundary_cycles()[0];
    let polygon_labels = cycle
        .iter()
        .all(|&h| (t.origin(h).0 + 1) % c == t.dest(h).0);
    if !polygon_labels {
        return Err(Error::InvalidCurve(
            "marked points are not labeled 0..c counterclockwise".into(),
        ));
    }
    if from >= c || to >= c || from == to {
        return Err(Error::InvalidCurve(format!("{from}-{to}")));
    }
    let (from, to) = (PointId(from), PointId(to));
    if let Some(h) = t
        .half_edges()
        .find(|&h| t.origin(h) == from && t.dest(h) == to)
    {
        return Ok(CurveTrace::along(t, h));
    }
    let strictly_between = |a: PointId, v: PointId, b: PointId| {
        let off = |x: PointId| (x.0 + c - a.0) % c;
        off(v) > 0 && off(v) < off(b)
    };
    let start = t
        .half_edges()
        .find(|&h| t.origin(h) == from && strictly_between(t.dest(h), to, t.origin(t.prev(h))))
        .ok_or_else(|| Error::InvalidCurve("no corner contains the diagonal".into()))?;
    let mut crossings = vec![t.twin(t.next(start)).ok_or(Error::InconsistentTrace(0))?];
    loop {
        let k = *crossings.last().unwrap();
        // triangle (k: y->x, next: x->z, prev: z->y)
        let (x, z) = (t.dest(k), t.origin(t.prev(k)));
        if z == to {
            return Ok(CurveTrace::Transverse {
                start,
                crossings,
                end: t.prev(k),
            });
        }
        let exit = if strictly_between(x, to, z) {
            t.next(k)
        } else {
            t.prev(k)
        };
        crossings.push(
            t.twin(exit)
                .ok_or(Error::InconsistentTrace(crossings.len()))?,
        );
        if crossings.len() > t.half_edge_count() {
            return Err(Error::InconsistentTrace(crossings.len()));
        }
    }
}

/// Canonical identity of an arc: its reduced trace relative to the base
/// triangulation, in whichever direction encodes lexicographically smaller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcCode(Vec<u32>);

fn encode(tr: &CurveTrace) -> Vec<u32> {
    match tr {
        CurveTrace::Along { side, reversed } => vec![0, side.0, *reversed as u32],
        CurveTrace::Transverse {
            start,
            crossings,
            end,
        } => {
            let mut v = Vec::with_capacity(crossings.len() + 3);
            v.extend([1, start.0, end.0]);
            v.extend(crossings.iter().map(|k| k.0));
            v
        }
    }
}

impl ArcCode {
    /// `base_trace` must be reduced relative to the base triangulation.
    pub fn from_base_trace(base: &Triangulation, base_trace: &CurveTrace) -> ArcCode {
        let a = encode(base_trace);
        let b = encode(&base_trace.reversed(base));
        ArcCode(a.min(b))
    }

    /// The code's trace relative to the base triangulation, in its canonical
    /// direction.
    pub fn trace(&self) -> CurveTrace {
        match self.0.as_slice() {
            [0, side, rev] => CurveTrace::Along {
                side: HalfEdge(*side),
                reversed: *rev != 0,
            },
            [1, start, end, rest @ ..] => CurveTrace::Transverse {
                start: HalfEdge(*start),
                crossings: rest.iter().map(|&k| HalfEdge(k)).collect(),
                end: HalfEdge(*end),
            },
            _ => unreachable!("codes are only built by encode"),
        }
    }

    pub fn is_base_arc(&self) -> bool {
        self.0.first() == Some(&0)
    }

    pub fn crossing_count(&self) -> usize {
        if self.is_base_arc() {
            0
        } else {
            self.0.len() - 3
        }
    }
}

impl fmt::Display for ArcCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.trace() {
            CurveTrace::Along { side, reversed } => {
                write!(f, "={}{}", side, if reversed { "~" } else { "" })
            }
            CurveTrace::Transverse {
                start,
                crossings,
                end,
            } => {
                write!(f, "{start}[")?;
                for (i, k) in crossings.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, "]{end}")
            }
        }
    }
}

/// Transports `trace` back along a chain of flips. Each step is the record
/// of a flip together with the triangulation it was applied to; steps are
/// given from the most recent flip backwards.
pub fn pull_back<'a>(
    trace: &CurveTrace,
    steps: impl IntoIterator<Item = (&'a FlipRecord, &'a Triangulation)>,
) -> Result<CurveTrace> {
    let mut tr = trace.clone();
    for (rec, before) in steps {
        tr = tr.transport(&rec.inverse(), before)?;
    }
    Ok(tr)
}

/// Transports `trace`, given relative to `base`, forward along a flip path.
pub fn push_forward(
    base: &Triangulation,
    path: &[FlipRecord],
    trace: &CurveTrace,
) -> Result<(Triangulation, CurveTrace)> {
    let mut t = base.clone();
    let mut tr = trace.reduce(base)?;
    for rec in path {
        t = t.apply(rec)?;
        tr = tr.transport(rec, &t)?;
    }
    Ok((t, tr))
}

/// Canonical code of a curve living in the triangulation reached from `base`
/// by `path`.
pub fn canonical_code(
    base: &Triangulation,
    path: &[FlipRecord],
    trace: &CurveTrace,
) -> Result<ArcCode> {
    let mut tris = Vec::with_capacity(path.len() + 1);
    tris.push(base.clone());
    for rec in path {
        let next = tris.last().unwrap().apply(rec)?;
        tris.push(next);
    }
    let here = tris.last().unwrap();
    let tr = trace.reduce(here)?;
    let back = pull_back(&tr, path.iter().zip(&tris).rev())?;
    Ok(ArcCode::from_base_trace(base, &back))
}
