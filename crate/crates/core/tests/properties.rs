use proptest::prelude::*;

use flipgraph::curve::{canonical_code, push_forward, ArcCode, CurveTrace};
use flipgraph::explorer::Explorer;
use flipgraph::projection::project;
use flipgraph::surface::{FlipRecord, Triangulation};

fn surface(pick: u8) -> Triangulation {
    match pick % 6 {
        0 => Triangulation::disc(5).unwrap(),
        1 => Triangulation::disc(8).unwrap(),
        2 => Triangulation::annulus(1, 2).unwrap(),
        3 => Triangulation::annulus(2, 2).unwrap(),
        4 => Triangulation::annulus(3, 1).unwrap(),
        _ => Triangulation::torus_one_boundary().unwrap(),
    }
}

/// Replays `steps`, each choosing an internal arc by index modulo the count.
fn walk(t: &Triangulation, steps: &[usize]) -> (Vec<Triangulation>, Vec<FlipRecord>) {
    let mut tris = vec![t.clone()];
    let mut recs = Vec::new();
    for &s in steps {
        let cur = tris.last().unwrap();
        let arcs = cur.internal_arcs();
        let (next, rec) = cur.flip(arcs[s % arcs.len()]).unwrap();
        tris.push(next);
        recs.push(rec);
    }
    (tris, recs)
}

/// A curve given by an arc of the triangulation reached by `steps`, as a
/// trace relative to the base.
fn curve(base: &Triangulation, steps: &[usize], pick: usize) -> CurveTrace {
    let (tris, recs) = walk(base, steps);
    let last = tris.last().unwrap();
    let arcs = last.internal_arcs();
    let (h, _) = last.half_edges_of(arcs[pick % arcs.len()]).unwrap();
    canonical_code(base, &recs, &CurveTrace::along(last, h))
        .unwrap()
        .trace()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flip_then_inverse_restores(pick in any::<u8>(), steps in prop::collection::vec(any::<usize>(), 1..8)) {
        let t = surface(pick);
        let (tris, recs) = walk(&t, &steps);
        for (k, rec) in recs.iter().enumerate() {
            let back = tris[k + 1].apply(&rec.inverse()).unwrap();
            prop_assert_eq!(&back, &tris[k]);
            prop_assert!(tris[k + 1].validate().ok);
        }
    }

    #[test]
    fn transport_round_trip(
        pick in any::<u8>(),
        to_curve in prop::collection::vec(any::<usize>(), 0..5),
        which in any::<usize>(),
        path in prop::collection::vec(any::<usize>(), 1..6),
    ) {
        let t = surface(pick);
        let gamma = curve(&t, &to_curve, which);
        let (tris, recs) = walk(&t, &path);
        let mut tr = gamma.reduce(&t).unwrap();
        for (k, rec) in recs.iter().enumerate() {
            let there = tr.transport(rec, &tris[k + 1]).unwrap();
            prop_assert!(there.is_reduced(&tris[k + 1]));
            let back = there.transport(&rec.inverse(), &tris[k]).unwrap();
            prop_assert_eq!(&back, &tr);
            tr = there;
        }
        // the code survives the trip out and back
        let code = canonical_code(&t, &recs, &tr).unwrap();
        prop_assert_eq!(code, ArcCode::from_base_trace(&t, &gamma.reduce(&t).unwrap()));
    }

    #[test]
    fn reduce_is_idempotent_and_removes_bigons(
        pick in any::<u8>(),
        to_curve in prop::collection::vec(any::<usize>(), 1..5),
        which in any::<usize>(),
        at in any::<usize>(),
    ) {
        let t = surface(pick);
        let gamma = curve(&t, &to_curve, which);
        let once = gamma.reduce(&t).unwrap();
        prop_assert_eq!(&once.reduce(&t).unwrap(), &once);
        if let CurveTrace::Transverse { start, mut crossings, end } = once.clone() {
            let i = at % crossings.len();
            let k = crossings[i];
            crossings.splice(i + 1..i + 1, [t.twin(k).unwrap(), k]);
            let padded = CurveTrace::Transverse { start, crossings, end };
            prop_assert!(!padded.is_reduced(&t));
            prop_assert_eq!(padded.reduce(&t).unwrap(), once);
        }
    }

    #[test]
    fn projection_lands_in_the_face(
        pick in any::<u8>(),
        to_curve in prop::collection::vec(any::<usize>(), 0..4),
        which in any::<usize>(),
        path in prop::collection::vec(any::<usize>(), 0..4),
        backwards in any::<bool>(),
    ) {
        let t = surface(pick);
        let gamma = curve(&t, &to_curve, which);
        let code = ArcCode::from_base_trace(&t, &gamma);
        let (tris, recs) = walk(&t, &path);
        let (_, mut here) = push_forward(&t, &recs, &gamma).unwrap();
        if backwards {
            here = here.reversed(tris.last().unwrap());
        }
        let r = project(tris.last().unwrap(), &here).unwrap();
        prop_assert!(r.measure_decreasing());
        prop_assert!(r.final_curve.is_along());
        let mut full = recs.clone();
        full.extend(r.flip_sequence.iter().copied());
        let CurveTrace::Along { side, .. } = r.final_curve else { unreachable!() };
        let final_code = canonical_code(&t, &full, &CurveTrace::along(&r.final_triangulation, side)).unwrap();
        prop_assert_eq!(final_code, code);
    }

    #[test]
    fn explorer_neighbourhoods_are_symmetric(pick in any::<u8>(), path in prop::collection::vec(0usize..3, 0..4)) {
        let mut e = Explorer::new(surface(pick));
        let steps: Vec<usize> = path.iter().map(|s| s % e.arc_count()).collect();
        let node = e.follow(&steps).unwrap();
        let nbrs = e.neighbors(node).unwrap();
        prop_assert_eq!(nbrs.len(), e.arc_count());
        for n in nbrs {
            prop_assert!(e.neighbors(n).unwrap().contains(&node));
            prop_assert_eq!(e.common_arcs(node, n).len(), e.arc_count() - 1);
        }
    }
}
