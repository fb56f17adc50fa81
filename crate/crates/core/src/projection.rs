//! Projection of a triangulation onto the face of an oriented arc.
//!
//! The projection repeatedly flips the first arc crossed by the curve,
//! walking from its start, and transports the curve across every flip until
//! the curve becomes an arc of the triangulation.

use serde::{Deserialize, Serialize};

use crate::curve::CurveTrace;
use crate::error::{Error, Result};
use crate::surface::{FlipRecord, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub final_triangulation: Triangulation,
    pub flip_sequence: Vec<FlipRecord>,
    /// The measure of every triangulation the procedure flipped, in order.
    pub measure_trace: Vec<usize>,
    /// The curve relative to the final triangulation (always `Along`).
    pub final_curve: CurveTrace,
}

impl ProjectionResult {
    /// Strictly decreasing measure that reaches 0 exactly at the last flip.
    pub fn measure_decreasing(&self) -> bool {
        match self.measure_trace.last() {
            None => true,
            Some(&last) => last == 0 && self.measure_trace.windows(2).all(|w| w[1] < w[0]),
        }
    }
}

/// `Int(Γ, γ) - Int(τ₁, γ)` where τ₁ is the first arc crossed; 0 when the
/// curve is an arc of the triangulation.
pub fn weight(t: &Triangulation, gamma: &CurveTrace) -> usize {
    match gamma.first_crossed_arc(t) {
        Ok(first) => {
            let total = gamma.crossings().len();
            total - gamma.intersection_with(t, first)
        }
        Err(_) => 0,
    }
}

/// Flip budget for one projection: `(Int(Γ, γ) + 1) * (n + 1)`.
pub fn watchdog_bound(t: &Triangulation, gamma: &CurveTrace) -> usize {
    (gamma.crossings().len() + 1) * (t.internal_arcs().len() + 1)
}

pub fn project(t: &Triangulation, gamma: &CurveTrace) -> Result<ProjectionResult> {
    let mut curve = gamma.reduce(t)?;
    if &curve != gamma {
        return Err(Error::InvalidCurve("curve is not reduced".into()));
    }
    let bound = watchdog_bound(t, &curve);
    let mut current = t.clone();
    let mut flips = Vec::new();
    let mut measures = Vec::new();
    while let Ok(first) = curve.first_crossed_arc(&current) {
        if flips.len() == bound {
            return Err(Error::Watchdog(bound));
        }
        measures.push(weight(&current, &curve));
        let (next, rec) = current.flip(first)?;
        curve = curve.transport(&rec, &next)?;
        current = next;
        flips.push(rec);
    }
    Ok(ProjectionResult {
        final_triangulation: current,
        flip_sequence: flips,
        measure_trace: measures,
        final_curve: curve,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiProjection {
    pub triangulation: Triangulation,
    pub flip_sequence: Vec<FlipRecord>,
    /// The input curves relative to the result, in input order.
    pub curves: Vec<CurveTrace>,
}

/// Composite projection `p_{γ1} ∘ p_{γ2} ∘ ... ∘ p_{γm}`: the last curve is
/// projected first. Fails when a later projection has to flip an arc placed
/// by an earlier one, which happens exactly when two curves cross.
pub fn project_multi(t: &Triangulation, gammas: &[CurveTrace]) -> Result<MultiProjection> {
    let mut curves = gammas
        .iter()
        .map(|g| g.reduce(t))
        .collect::<Result<Vec<_>>>()?;
    let mut current = t.clone();
    let mut flips = Vec::new();
    for i in (0..curves.len()).rev() {
        let result = project(&current, &curves[i])?;
        let mut tri = current;
        for rec in &result.flip_sequence {
            for (j, c) in curves.iter().enumerate().skip(i + 1) {
                if let CurveTrace::Along { side, .. } = c {
                    if tri.arc(*side) == rec.old_arc {
                        return Err(Error::Incompatible {
                            earlier: j,
                            later: i,
                        });
                    }
                }
            }
            tri = tri.apply(rec)?;
            for c in curves.iter_mut() {
                *c = c.transport(rec, &tri)?;
            }
            flips.push(*rec);
        }
        current = tri;
    }
    Ok(MultiProjection {
        triangulation: current,
        flip_sequence: flips,
        curves,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::curve::disc_curve;
    use crate::surface::{ArcId, PointId};

    fn diagonals(t: &Triangulation) -> BTreeSet<(u32, u32)> {
        t.internal_arcs()
            .into_iter()
            .map(|a| {
                let (x, y) = t.endpoints(a).unwrap();
                (x.0, y.0)
            })
            .collect()
    }

    fn arc_between(t: &Triangulation, a: u32, b: u32) -> ArcId {
        t.internal_arcs()
            .into_iter()
            .find(|&arc| t.endpoints(arc).unwrap() == (PointId(a.min(b)), PointId(a.max(b))))
            .unwrap()
    }

    fn set(pairs: &[(u32, u32)]) -> BTreeSet<(u32, u32)> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn weight_examples() {
        let fan = Triangulation::disc(6).unwrap();
        assert_eq!(weight(&fan, &disc_curve(&fan, 1, 4).unwrap()), 1);
        let t = Triangulation::disc_from_diagonals(6, &[(1, 3), (0, 3), (0, 4)]).unwrap();
        assert_eq!(weight(&t, &disc_curve(&t, 1, 4).unwrap()), 0);
        assert_eq!(weight(&fan, &disc_curve(&fan, 0, 3).unwrap()), 0);
    }

    #[test]
    fn project_hexagon_fan() {
        let fan = Triangulation::disc(6).unwrap();
        let g = disc_curve(&fan, 1, 4).unwrap();
        let r = project(&fan, &g).unwrap();
        let flipped: Vec<ArcId> = r.flip_sequence.iter().map(|f| f.old_arc).collect();
        assert_eq!(
            flipped,
            vec![arc_between(&fan, 0, 2), arc_between(&fan, 0, 3)]
        );
        assert_eq!(
            diagonals(&r.final_triangulation),
            set(&[(1, 3), (1, 4), (0, 4)])
        );
        assert_eq!(r.measure_trace, vec![1, 0]);
        assert!(r.measure_decreasing());
        assert!(r.final_curve.is_along());
    }

    #[test]
    fn project_is_identity_inside_face() {
        let fan = Triangulation::disc(6).unwrap();
        let g = disc_curve(&fan, 0, 3).unwrap();
        let r = project(&fan, &g).unwrap();
        assert_eq!(r.final_triangulation, fan);
        assert!(r.flip_sequence.is_empty());
    }

    #[test]
    fn project_one_flip() {
        let t = Triangulation::disc_from_diagonals(6, &[(1, 3), (0, 3), (0, 4)]).unwrap();
        let r = project(&t, &disc_curve(&t, 1, 4).unwrap()).unwrap();
        assert_eq!(r.flip_sequence.len(), 1);
        assert_eq!(r.flip_sequence[0].old_arc, arc_between(&t, 0, 3));
        assert_eq!(
            diagonals(&r.final_triangulation),
            set(&[(1, 3), (1, 4), (0, 4)])
        );
    }

    #[test]
    fn orientations_can_differ() {
        let fan = Triangulation::disc(6).unwrap();
        let fwd = project(&fan, &disc_curve(&fan, 1, 4).unwrap()).unwrap();
        let bwd = project(&fan, &disc_curve(&fan, 4, 1).unwrap()).unwrap();
        assert!(diagonals(&bwd.final_triangulation).contains(&(1, 4)));
        assert_ne!(
            diagonals(&fwd.final_triangulation),
            diagonals(&bwd.final_triangulation)
        );
    }

    #[test]
    fn project_multi_examples() {
        let fan = Triangulation::disc(6).unwrap();
        let gs = [
            disc_curve(&fan, 1, 4).unwrap(),
            disc_curve(&fan, 1, 3).unwrap(),
        ];
        let r = project_multi(&fan, &gs).unwrap();
        let d = diagonals(&r.triangulation);
        assert!(d.contains(&(1, 3)) && d.contains(&(1, 4)));
        assert!(r.curves.iter().all(CurveTrace::is_along));

        let inside = [
            disc_curve(&fan, 0, 2).unwrap(),
            disc_curve(&fan, 4, 0).unwrap(),
        ];
        let r = project_multi(&fan, &inside).unwrap();
        assert_eq!(r.triangulation, fan);

        let crossing = [
            disc_curve(&fan, 1, 3).unwrap(),
            disc_curve(&fan, 2, 4).unwrap(),
        ];
        assert!(matches!(
            project_multi(&fan, &crossing),
            Err(Error::Incompatible {
                earlier: 1,
                later: 0
            })
        ));
    }

    #[test]
    fn unreduced_curve_is_rejected() {
        let fan = Triangulation::disc(6).unwrap();
        let g = disc_curve(&fan, 1, 4).unwrap();
        let CurveTrace::Transverse {
            start,
            mut crossings,
            end,
        } = g
        else {
            panic!()
        };
        let k = crossings[0];
        crossings.splice(1..1, [fan.twin(k).unwrap(), k]);
        let bad = CurveTrace::Transverse {
            start,
            crossings,
            end,
        };
        assert!(matches!(project(&fan, &bad), Err(Error::InvalidCurve(_))));
    }
}
