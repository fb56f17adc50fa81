use std::collections::BTreeSet;

use flipgraph::curve::{disc_curve, ArcCode};
use flipgraph::explorer::{Explorer, NodeId};
use flipgraph::par::Exec;
use flipgraph::projection::{project, project_multi};
use flipgraph::surface::Triangulation;
use flipgraph::sweep::{self, polygon_diagonals};

fn full_disc(c: usize) -> Explorer {
    let mut e = Explorer::new(Triangulation::disc(c).unwrap());
    e.explore_all().unwrap();
    e
}

#[test]
fn triangle_inequality_in_annulus_ball() {
    let mut e = Explorer::new(Triangulation::annulus(2, 2).unwrap());
    let ball: Vec<NodeId> = e.bfs_ball(0, 2).unwrap().concat();
    let sample: Vec<NodeId> = ball.iter().copied().step_by(2).collect();
    let mut d = std::collections::HashMap::new();
    for &u in &sample {
        for &v in &sample {
            d.insert((u, v), e.distance(u, v).unwrap().distance);
        }
    }
    for &u in &sample {
        for &v in &sample {
            assert_eq!(d[&(u, v)], d[&(v, u)]);
            for &w in &sample {
                assert!(d[&(u, w)] <= d[&(u, v)] + d[&(v, w)]);
            }
        }
    }
}

#[test]
fn intervals_are_symmetric() {
    let mut e = Explorer::new(Triangulation::torus_one_boundary().unwrap());
    let ball: Vec<NodeId> = e.bfs_ball(0, 2).unwrap().concat();
    for &v in ball.iter().take(6) {
        for &w in ball.iter().rev().take(6) {
            let a: BTreeSet<NodeId> = e.geodesic_interval(v, w).unwrap().into_iter().collect();
            let b: BTreeSet<NodeId> = e.geodesic_interval(w, v).unwrap().into_iter().collect();
            assert_eq!(a, b);
            assert!(a.contains(&v) && a.contains(&w));
        }
    }
}

#[test]
fn projection_is_one_lipschitz_on_heptagon() {
    let e = full_disc(7);
    let n = e.len();
    let gammas: Vec<(u32, u32)> = (0..7u32)
        .flat_map(|a| (0..7u32).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            let gap = (b + 7 - a) % 7;
            (2..=5).contains(&gap)
        })
        .collect();
    let dist: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let m = e.frozen_distances(v, usize::MAX, |_| true).unwrap();
            (0..n).map(|w| m[&w]).collect()
        })
        .collect();
    for &(a, b) in &gammas {
        let image: Vec<NodeId> = (0..n)
            .map(|u| {
                let t = e.triangulation(u);
                let r = project(t, &disc_curve(t, a, b).unwrap()).unwrap();
                let key = e.codes_after(u, &r.flip_sequence).unwrap();
                e.lookup(&key).unwrap()
            })
            .collect();
        for v in 0..n {
            for w in 0..n {
                assert!(dist[image[v]][image[w]] <= dist[v][w], "{a}->{b}: {v}, {w}");
            }
        }
    }
}

/// Both orders of two compatible curves always give triangulations
/// containing both; the test records how often the orders disagree.
#[test]
fn project_multi_order_experiment() {
    let mut differ = 0;
    let mut runs = 0;
    for t in flipgraph::oracle::enumerate_all(7).unwrap() {
        let ds: Vec<_> = t.diagonals.iter().copied().collect();
        let tri = Triangulation::disc_from_diagonals(7, &ds).unwrap();
        for (a, b, c, d) in [(1, 4, 4, 6), (0, 3, 3, 5), (2, 5, 2, 6), (1, 3, 4, 6)] {
            let g = disc_curve(&tri, a, b).unwrap();
            let h = disc_curve(&tri, c, d).unwrap();
            let one = project_multi(&tri, &[g.clone(), h.clone()]).unwrap();
            let two = project_multi(&tri, &[h, g]).unwrap();
            let (x, y) = (
                polygon_diagonals(&one.triangulation),
                polygon_diagonals(&two.triangulation),
            );
            for s in [&x, &y] {
                assert!(s.contains(&(a.min(b) as usize, a.max(b) as usize)));
                assert!(s.contains(&(c.min(d) as usize, c.max(d) as usize)));
            }
            runs += 1;
            differ += usize::from(x != y);
        }
    }
    println!("project_multi: {differ} of {runs} runs depend on the order");
    assert_eq!(runs, 42 * 4);
}

#[test]
fn sweeps_agree_across_execution_modes() {
    let a = sweep::disc_nlf(7, Exec::Sequential, 3).unwrap();
    let b = sweep::disc_nlf(7, Exec::Parallel, 3).unwrap();
    assert_eq!(a, b);
    let a = sweep::disc_axioms(6, Exec::Sequential).unwrap();
    let b = sweep::disc_axioms(6, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

fn step(e: &mut Explorer, node: NodeId, code: &ArcCode) -> NodeId {
    let pos = e.codes(node).iter().position(|(_, c)| c == code).unwrap();
    e.neighbors(node).unwrap()[pos]
}

/// Flipping two arcs in either order reaches the same node exactly when it
/// reaches the same triangulation.
#[test]
fn keys_identify_triangulations() {
    let mut e = full_disc(7);
    let mut same = 0;
    for start in 0..e.len() {
        let codes = e.key(start);
        for a in &codes {
            for b in &codes {
                if a == b {
                    continue;
                }
                let x = step(&mut e, start, a);
                let x = step(&mut e, x, b);
                let y = step(&mut e, start, b);
                let y = step(&mut e, y, a);
                let geometric =
                    polygon_diagonals(e.triangulation(x)) == polygon_diagonals(e.triangulation(y));
                assert_eq!(x == y, geometric);
                same += usize::from(x == y);
            }
        }
    }
    assert!(same > 0);
}
