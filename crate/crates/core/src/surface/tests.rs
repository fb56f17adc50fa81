use std::collections::BTreeSet;

use super::*;

fn diagonal_set(t: &Triangulation) -> BTreeSet<(u32, u32)> {
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
        .expect("diagonal present")
}

fn table(rows: &[[&str; 3]]) -> GluingTable {
    GluingTable {
        triangles: rows.iter().map(|r| r.map(str::to_string)).collect(),
    }
}

#[test]
fn hexagon_fan_from_gluing() {
    let t = table(&[
        ["01", "12", "d2"],
        ["d2", "23", "d3"],
        ["d3", "34", "d4"],
        ["d4", "45", "50"],
    ])
    .build()
    .unwrap();
    let s = t.surface();
    assert_eq!(s.genus, 0);
    assert_eq!(s.boundary_components(), 1);
    assert_eq!(s.marked_points(), 6);
    assert_eq!(s.internal_arc_count(), 3);
    assert!(t.validate().ok);
}

#[test]
fn annulus_one_one_gluing() {
    let t = table(&[["s0", "s1", "o0"], ["s1", "i0", "s0"]])
        .build()
        .unwrap();
    let s = t.surface();
    assert_eq!(
        (s.genus, s.boundary_components(), s.marked_points()),
        (0, 2, 2)
    );
    assert_eq!(t.internal_arcs().len(), 2);
}

#[test]
fn label_used_three_times_is_rejected() {
    let err = table(&[["a", "b", "c"], ["a", "d", "e"], ["a", "f", "g"]])
        .build()
        .unwrap_err();
    assert!(matches!(err, Error::LabelOveruse(ref l, 3) if l == "a"));
}

#[test]
fn self_glued_triangle_is_rejected() {
    let err = table(&[["a", "a", "b"]]).build().unwrap_err();
    assert!(matches!(err, Error::SelfGlued(0, _)));
}

#[test]
fn same_direction_markers_are_non_orientable() {
    let err = table(&[["+a", "b", "c"], ["+a", "d", "e"]])
        .build()
        .unwrap_err();
    assert_eq!(err, Error::NonOrientable("a".into()));
    assert!(table(&[["+a", "b", "c"], ["-a", "d", "e"]]).build().is_ok());
}

#[test]
fn disconnected_table_is_rejected() {
    let err = table(&[["a", "b", "c"], ["d", "e", "f"]])
        .build()
        .unwrap_err();
    assert_eq!(err, Error::Disconnected(2));
}

#[test]
fn single_triangle_is_degenerate() {
    let err = table(&[["a", "b", "c"]]).build().unwrap_err();
    assert_eq!(err, Error::Degenerate(0));
}

#[test]
fn disc_generator() {
    let t = Triangulation::disc(6).unwrap();
    let expected: BTreeSet<(u32, u32)> = [(0, 2), (0, 3), (0, 4)].into_iter().collect();
    assert_eq!(diagonal_set(&t), expected);
    let t4 = Triangulation::disc(4).unwrap();
    assert_eq!(diagonal_set(&t4), [(0, 2)].into_iter().collect());
    assert_eq!(Triangulation::disc(3).unwrap_err(), Error::Degenerate(0));
    // boundary runs 0 -> 1 -> ... -> c-1 counterclockwise
    let cycles = t.boundary_cycles();
    assert_eq!(cycles.len(), 1);
    let mut h = cycles[0]
        .iter()
        .copied()
        .find(|&h| t.origin(h) == PointId(0))
        .unwrap();
    for k in 0..6 {
        assert_eq!(t.origin(h), PointId(k));
        h = t.next_boundary(h);
    }
}

#[test]
fn annulus_generator() {
    for (p, q) in [(1, 1), (2, 2), (1, 3), (3, 2)] {
        let t = Triangulation::annulus(p, q).unwrap();
        let report = t.validate();
        assert!(report.ok, "{report:?}");
        assert_eq!(report.internal_arcs, p + q);
        assert_eq!(report.boundary_components, 2);
        let mut counts = t.surface().boundary_marked_counts.clone();
        counts.sort();
        let mut want = vec![p as u32, q as u32];
        want.sort();
        assert_eq!(counts, want);
    }
    assert!(Triangulation::annulus(0, 1).is_err());
}

#[test]
fn torus_with_one_boundary() {
    let t = Triangulation::torus_one_boundary().unwrap();
    let report = t.validate();
    assert!(report.ok, "{report:?}");
    assert_eq!(report.genus, 1);
    assert_eq!(report.boundary_components, 1);
    assert_eq!(report.marked_points, 1);
    assert_eq!(report.internal_arcs, 4);
}

#[test]
fn flip_in_hexagon() {
    let t = Triangulation::disc(6).unwrap();
    let d03 = arc_between(&t, 0, 3);
    let (t2, rec) = t.flip(d03).unwrap();
    let expected: BTreeSet<(u32, u32)> = [(0, 2), (2, 4), (0, 4)].into_iter().collect();
    assert_eq!(diagonal_set(&t2), expected);
    assert!(t2.validate().ok);
    assert_eq!(rec.old_arc, d03);
    assert!(!t2.internal_arcs().contains(&d03));
    assert!(t2.internal_arcs().contains(&rec.new_arc));
    // other ids untouched
    assert_eq!(arc_between(&t2, 0, 2), arc_between(&t, 0, 2));

    let (t3, _) = t2.flip(rec.new_arc).unwrap();
    assert_eq!(diagonal_set(&t3), diagonal_set(&t));
}

#[test]
fn flip_boundary_or_unknown_arc_fails() {
    let t = Triangulation::disc(6).unwrap();
    let b = t.boundary_arcs()[0];
    assert_eq!(t.flip(b).unwrap_err(), Error::BoundaryArc(b));
    assert_eq!(
        t.flip(ArcId(999)).unwrap_err(),
        Error::UnknownArc(ArcId(999))
    );
}

#[test]
fn record_inverse_restores_exactly() {
    for t in [
        Triangulation::disc(7).unwrap(),
        Triangulation::annulus(1, 1).unwrap(),
        Triangulation::annulus(2, 3).unwrap(),
        Triangulation::torus_one_boundary().unwrap(),
    ] {
        for arc in t.internal_arcs() {
            let (t2, rec) = t.flip(arc).unwrap();
            let back = t2.apply(&rec.inverse()).unwrap();
            assert_eq!(back, t);
            assert_eq!(rec.inverse().inverse(), rec);
            // the inverse record is what a fresh read of the quad would give
            let q = t2.quad(rec.new_arc).unwrap();
            assert_eq!(q, rec.inverse().quad);
            // the record only replays on the triangulation it came from
            assert_eq!(t2.apply(&rec).unwrap_err(), Error::RecordMismatch);
        }
    }
}

#[test]
fn flips_preserve_surface_data() {
    let t = Triangulation::torus_one_boundary().unwrap();
    let mut frontier = vec![t.clone()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for s in &frontier {
            for arc in s.internal_arcs() {
                let (s2, _) = s.flip(arc).unwrap();
                let r = s2.validate();
                assert!(r.ok, "{r:?}");
                assert_eq!(r.genus, 1);
                assert_eq!(r.internal_arcs, 4);
                assert_eq!(r.boundary_arcs, 1);
                next.push(s2);
            }
        }
        frontier = next;
    }
}

#[test]
fn disc_from_diagonals_rejects_crossings() {
    assert!(Triangulation::disc_from_diagonals(6, &[(1, 3), (0, 3), (0, 4)]).is_ok());
    assert!(Triangulation::disc_from_diagonals(6, &[(1, 3), (2, 4), (0, 4)]).is_err());
    assert!(Triangulation::disc_from_diagonals(6, &[(0, 1), (0, 3), (0, 4)]).is_err());
}

#[test]
fn gluing_table_round_trip_keeps_surface() {
    let t = Triangulation::torus_one_boundary().unwrap();
    let (t2, _) = t.flip(t.internal_arcs()[1]).unwrap();
    let json = t2.to_gluing_table().to_json();
    let back = GluingTable::from_json(&json).unwrap().build().unwrap();
    assert_eq!(back.surface(), t2.surface());
}
