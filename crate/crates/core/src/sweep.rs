//! Bulk property checks over whole exchange graphs or balls in them.
//!
//! Each sweep returns a [`SweepReport`] counting the cases it looked at and
//! describing every violation it found. Heavy loops go through
//! [`crate::par`], so every sweep can run in either execution mode and gives
//! the same report in both.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{canonical_code, disc_curve, ArcCode, CurveTrace};
use crate::error::{Error, Result};
use crate::explorer::{key_strings, Explorer, Key, NlfReport, NlfStatus, NodeId};
use crate::oracle::{self, Diagonal, OracleGraph, PolygonTriangulation};
use crate::par::{self, Exec};
use crate::projection::{project, watchdog_bound};
use crate::surface::{ArcId, FlipRecord, Triangulation};

const KEPT_VIOLATIONS: usize = 20;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub name: String,
    pub checked: usize,
    pub inconclusive: usize,
    pub violation_count: usize,
    /// The first few violations, described.
    pub violations: Vec<String>,
}

impl SweepReport {
    pub fn new(name: impl Into<String>) -> Self {
        SweepReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn ok(&self) -> bool {
        self.violation_count == 0 && self.inconclusive == 0
    }

    pub fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !cond {
            self.violate(what());
        }
    }

    pub fn violate(&mut self, what: String) {
        self.violation_count += 1;
        if self.violations.len() < KEPT_VIOLATIONS {
            self.violations.push(what);
        }
    }

    pub fn absorb(&mut self, other: SweepReport) {
        self.checked += other.checked;
        self.inconclusive += other.inconclusive;
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < KEPT_VIOLATIONS {
                self.violations.push(v);
            }
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} checked, {} violations, {} inconclusive",
            self.name, self.checked, self.violation_count, self.inconclusive
        )
    }
}

/// Diagonal set of a polygon triangulation, read off the marked points.
pub fn polygon_diagonals(t: &Triangulation) -> BTreeSet<Diagonal> {
    t.internal_arcs()
        .into_iter()
        .map(|a| {
            let (x, y) = t.endpoints(a).expect("own arc");
            (x.0 as usize, y.0 as usize)
        })
        .collect()
}

/// Diagonal named by a code of the fan-based disc explorer.
fn decode_diagonal(base: &Triangulation, code: &ArcCode) -> Diagonal {
    let tr = code.trace();
    let (a, b) = (
        tr.start_point(base).0 as usize,
        tr.end_point(base).0 as usize,
    );
    (a.min(b), a.max(b))
}

fn decode_key(base: &Triangulation, key: &[ArcCode]) -> BTreeSet<Diagonal> {
    key.iter().map(|c| decode_diagonal(base, c)).collect()
}

/// `6g + 3b + c - 6` against `validate` for the generator families.
pub fn arc_count_sweep() -> Result<SweepReport> {
    let mut report = SweepReport::new("arc-count");
    let mut cases: Vec<(String, Triangulation)> = Vec::new();
    for c in 4..=12 {
        cases.push((format!("disc({c})"), Triangulation::disc(c)?));
    }
    for p in 1..=3 {
        for q in 1..=3 {
            cases.push((format!("annulus({p},{q})"), Triangulation::annulus(p, q)?));
        }
    }
    cases.push((
        "torus-one-boundary".into(),
        Triangulation::torus_one_boundary()?,
    ));
    for (name, t) in cases {
        let v = t.validate();
        let expected = t.surface().internal_arc_count();
        report.check(v.ok && v.internal_arcs as i64 == expected, || {
            format!(
                "{name}: {} internal arcs, expected {expected}",
                v.internal_arcs
            )
        });
    }
    Ok(report)
}

/// Fully explores the disc exchange graph and matches it with the oracle
/// graph through the diagonals named by the keys.
pub fn associahedron_check(c: usize, exec: Exec) -> Result<SweepReport> {
    let mut report = SweepReport::new(format!("associahedron c={c}"));
    let oracle = OracleGraph::new(c)?;
    let mut e = Explorer::new(Triangulation::disc(c)?).with_exec(exec);
    e.explore_all()?;
    let n = c - 3;
    report.check(e.len() == oracle.nodes.len(), || {
        format!("{} vertices, oracle has {}", e.len(), oracle.nodes.len())
    });
    let edges: usize = (0..e.len())
        .map(|u| e.adjacent(u).map_or(0, <[_]>::len))
        .sum::<usize>()
        / 2;
    report.check(
        edges == oracle.edge_count() && edges == n * e.len() / 2,
        || format!("{edges} edges, oracle has {}", oracle.edge_count()),
    );
    let mut image = vec![usize::MAX; e.len()];
    let mut hit = HashSet::new();
    for (u, slot) in image.iter_mut().enumerate() {
        let diagonals = decode_key(e.base(), &e.key(u));
        report.check(diagonals == polygon_diagonals(e.triangulation(u)), || {
            format!("key of node {u} names {diagonals:?}")
        });
        let t = PolygonTriangulation { c, diagonals };
        match oracle.index.get(&t) {
            Some(&o) => {
                report.check(hit.insert(o), || {
                    format!("two nodes map to {:?}", t.diagonals)
                });
                *slot = o;
            }
            None => report.violate(format!(
                "node {u} maps outside the oracle: {:?}",
                t.diagonals
            )),
        }
    }
    if report.violation_count == 0 {
        for u in 0..e.len() {
            let mine: BTreeSet<usize> = e.adjacent(u).unwrap().iter().map(|&v| image[v]).collect();
            let theirs: BTreeSet<usize> = oracle.adjacency[image[u]].iter().copied().collect();
            report.check(mine == theirs, || {
                format!("neighbourhood of node {u} differs")
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub projections: usize,
    pub edges: usize,
    pub p1: SweepReport,
    pub p2: SweepReport,
    pub p3: SweepReport,
    pub p4: SweepReport,
    pub measure: SweepReport,
}

impl AxiomReport {
    fn new() -> Self {
        AxiomReport {
            p1: SweepReport::new("p1 result contains the curve"),
            p2: SweepReport::new("p2 identity on the face"),
            p3: SweepReport::new("p3 edges map to edges or vertices"),
            p4: SweepReport::new("p4 one-flip neighbours"),
            measure: SweepReport::new("measure decrease"),
            ..Default::default()
        }
    }

    pub fn absorb(&mut self, other: AxiomReport) {
        self.projections += other.projections;
        self.edges += other.edges;
        self.p1.absorb(other.p1);
        self.p2.absorb(other.p2);
        self.p3.absorb(other.p3);
        self.p4.absorb(other.p4);
        self.measure.absorb(other.measure);
    }

    pub fn axioms_ok(&self) -> bool {
        self.p1.ok() && self.p2.ok() && self.p3.ok() && self.p4.ok()
    }
}

fn adjacent_keys(a: &[ArcCode], b: &[ArcCode]) -> bool {
    let a: BTreeSet<&ArcCode> = a.iter().collect();
    let b: BTreeSet<&ArcCode> = b.iter().collect();
    a.difference(&b).count() == 1 && b.difference(&a).count() == 1
}

/// Checks the projection axioms on `nodes` (each must be expanded) and on
/// every edge between two of them, for both orientations of every curve in
/// `gammas`.
pub fn projection_axioms(
    e: &Explorer,
    nodes: &[NodeId],
    gammas: &[ArcCode],
    exec: Exec,
) -> Result<AxiomReport> {
    let per_node = par::map(
        exec,
        nodes,
        |&u| -> Result<(Vec<Option<Key>>, AxiomReport)> {
            let mut rep = AxiomReport::new();
            let tri = e.triangulation(u);
            let key_u = e.key(u);
            let mut images = Vec::with_capacity(2 * gammas.len());
            for code in gammas {
                let fwd = e.trace_in(u, code)?;
                let bwd = fwd.reversed(tri);
                for gamma in [fwd, bwd] {
                    rep.projections += 1;
                    let bound = watchdog_bound(tri, &gamma);
                    let result = match project(tri, &gamma) {
                        Ok(r) => r,
                        Err(err) => {
                            rep.measure
                                .violate(format!("node {u}, curve {code}: {err}"));
                            images.push(None);
                            continue;
                        }
                    };
                    let image = e.codes_after(u, &result.flip_sequence)?;
                    rep.p1.check(image.binary_search(code).is_ok(), || {
                        format!("node {u}, curve {code}: result misses the curve")
                    });
                    if e.contains_code(u, code) {
                        rep.p2
                            .check(result.flip_sequence.is_empty() && image == key_u, || {
                                format!("node {u}, curve {code}: moved a triangulation in the face")
                            });
                    }
                    rep.measure.check(
                        result.measure_decreasing() && result.flip_sequence.len() <= bound,
                        || {
                            format!(
                                "node {u}, curve {code}: measures {:?}",
                                result.measure_trace
                            )
                        },
                    );
                    images.push(Some(image));
                }
            }
            Ok((images, rep))
        },
    );
    let mut report = AxiomReport::new();
    let mut images: HashMap<NodeId, Vec<Option<Key>>> = HashMap::new();
    for (&u, res) in nodes.iter().zip(per_node) {
        let (imgs, rep) = res?;
        report.absorb(rep);
        images.insert(u, imgs);
    }

    let mut edges = Vec::new();
    for &u in nodes {
        let adj = e
            .adjacent(u)
            .ok_or_else(|| Error::InvalidSurface(format!("node {u} is not expanded")))?;
        edges.extend(
            adj.iter()
                .filter(|&&v| u < v && images.contains_key(&v))
                .map(|&v| (u, v)),
        );
    }
    let per_edge = par::map(exec, &edges, |&(u, v)| {
        let mut rep = AxiomReport::new();
        rep.edges = 1;
        let (iu, iv) = (&images[&u], &images[&v]);
        for (g, code) in gammas.iter().enumerate() {
            for k in [2 * g, 2 * g + 1] {
                let (Some(a), Some(b)) = (&iu[k], &iv[k]) else {
                    continue;
                };
                rep.p3.check(a == b || adjacent_keys(a, b), || {
                    format!("edge {u}-{v}, curve {code}: images are not adjacent")
                });
                let (in_u, in_v) = (e.contains_code(u, code), e.contains_code(v, code));
                if in_v && !in_u {
                    rep.p4.check(*a == e.key(v), || {
                        format!("edge {u}-{v}, curve {code}: image of {u} is not {v}")
                    });
                }
                if in_u && !in_v {
                    rep.p4.check(*b == e.key(u), || {
                        format!("edge {u}-{v}, curve {code}: image of {v} is not {u}")
                    });
                }
            }
        }
        rep
    });
    for rep in per_edge {
        report.absorb(rep);
    }
    Ok(report)
}

/// Every code occurring in the listed nodes.
pub fn codes_in(e: &Explorer, nodes: &[NodeId]) -> Vec<ArcCode> {
    let all: BTreeSet<ArcCode> = nodes.iter().flat_map(|&u| e.key(u)).collect();
    all.into_iter().collect()
}

pub fn disc_axioms(c: usize, exec: Exec) -> Result<AxiomReport> {
    let mut e = Explorer::new(Triangulation::disc(c)?).with_exec(exec);
    e.explore_all()?;
    let nodes: Vec<NodeId> = (0..e.len()).collect();
    let gammas = codes_in(&e, &nodes);
    projection_axioms(&e, &nodes, &gammas, exec)
}

/// Axioms over the ball of radius `radius` around the base, with every ball
/// node expanded so edges between outermost nodes are included.
pub fn ball_axioms(base: Triangulation, radius: usize, exec: Exec) -> Result<AxiomReport> {
    let mut e = Explorer::new(base).with_exec(exec);
    let nodes: Vec<NodeId> = e.bfs_ball(e.root(), radius)?.concat();
    e.expand(&nodes)?;
    let gammas = codes_in(&e, &nodes);
    projection_axioms(&e, &nodes, &gammas, exec)
}

/// `project` against the oracle's dragging projection for every
/// triangulation of the `c`-gon and every oriented diagonal.
pub fn disc_oracle_equivalence(c: usize, exec: Exec) -> Result<SweepReport> {
    let all = oracle::enumerate_all(c)?;
    let reports = par::map(exec, &all, |pt| -> Result<SweepReport> {
        let mut rep = SweepReport::new("");
        let ds: Vec<Diagonal> = pt.diagonals.iter().copied().collect();
        let t = Triangulation::disc_from_diagonals(c, &ds)?;
        for from in 0..c {
            for to in 0..c {
                let d = (from.min(to), from.max(to));
                if d.1 - d.0 < 2 || (d.0 == 0 && d.1 == c - 1) {
                    continue;
                }
                let gamma = disc_curve(&t, from as u32, to as u32)?;
                let mine = polygon_diagonals(&project(&t, &gamma)?.final_triangulation);
                let theirs = oracle::stt_project(pt, from, to)?.diagonals;
                rep.check(mine == theirs, || {
                    format!("{:?}, {from}->{to}: {mine:?} vs {theirs:?}", pt.diagonals)
                });
            }
        }
        Ok(rep)
    });
    let mut report = SweepReport::new(format!("disc oracle equivalence c={c}"));
    for r in reports {
        report.absorb(r?);
    }
    Ok(report)
}

pub type DistanceMap = HashMap<NodeId, usize>;

/// Non-leaving-face report for a pair from precomputed distance maps. The
/// maps must be exact for every node within the pair's distance of their
/// source, and `e` must hold the adjacency needed to search the face up to
/// that distance.
pub fn nlf_from_tables(
    e: &Explorer,
    v: NodeId,
    w: NodeId,
    dv: &DistanceMap,
    dw: &DistanceMap,
) -> NlfReport {
    let common = e.common_arcs(v, w);
    let d = dv[&w];
    let mut interval: Vec<NodeId> = dv
        .iter()
        .filter(|(u, &du)| du <= d && dw.get(u) == Some(&(d - du)))
        .map(|(&u, _)| u)
        .collect();
    interval.sort_by_key(|&u| e.key(u));
    let witness = interval
        .iter()
        .find(|&&u| !e.in_face(u, &common))
        .map(|&u| key_strings(&e.key(u)));
    let face_distance = e
        .frozen_distances(v, d, |u| e.in_face(u, &common))
        .and_then(|m| m.get(&w).copied());
    let ok = witness.is_none();
    NlfReport {
        v: key_strings(&e.key(v)),
        w: key_strings(&e.key(w)),
        status: if ok { NlfStatus::Ok } else { NlfStatus::Fail },
        distance: Some(d),
        common_arcs: common.iter().map(ToString::to_string).collect(),
        interval_size: Some(interval.len()),
        face_distance,
        ok,
        witness,
    }
}

/// Reports for every pair `v <= w` of `sources` at distance at most
/// `max_distance`; `tables[i]` holds the distances from `sources[i]`.
pub fn pair_reports(
    e: &Explorer,
    sources: &[NodeId],
    tables: &[DistanceMap],
    max_distance: usize,
    exec: Exec,
) -> Vec<((NodeId, NodeId), NlfReport)> {
    let table_of: HashMap<NodeId, &DistanceMap> = sources.iter().copied().zip(tables).collect();
    let mut pairs = Vec::new();
    for (&v, dv) in sources.iter().zip(tables) {
        let mut ws: Vec<NodeId> = dv
            .iter()
            .filter(|&(&w, &d)| w >= v && d <= max_distance && table_of.contains_key(&w))
            .map(|(&w, _)| w)
            .collect();
        ws.sort_unstable();
        pairs.extend(ws.into_iter().map(|w| (v, w)));
    }
    let reports = par::map(exec, &pairs, |&(v, w)| {
        nlf_from_tables(e, v, w, table_of[&v], table_of[&w])
    });
    pairs.into_iter().zip(reports).collect()
}

fn record_nlf(rep: &mut SweepReport, r: &NlfReport) {
    match r.status {
        NlfStatus::Inconclusive => {
            rep.checked += 1;
            rep.inconclusive += 1;
        }
        _ => rep.check(r.ok && r.face_distance == r.distance, || {
            format!(
                "{:?} vs {:?}: distance {:?}, face distance {:?}, witness {:?}",
                r.v, r.w, r.distance, r.face_distance, r.witness
            )
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NlfSweep {
    pub nlf: SweepReport,
    /// Agreement of the table-driven check with the explorer's own
    /// `nlf_check` on a seeded sample of pairs.
    pub spot_check: SweepReport,
    pub pairs: usize,
    pub seed: u64,
}

const SPOT_CHECKS: usize = 200;

fn spot_check(
    e: &mut Explorer,
    pairs: &[(NodeId, NodeId)],
    reports: &HashMap<(NodeId, NodeId), NlfReport>,
    seed: u64,
) -> Result<SweepReport> {
    let mut rep = SweepReport::new("spot check against nlf_check");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<(NodeId, NodeId)> = pairs
        .choose_multiple(&mut rng, SPOT_CHECKS)
        .copied()
        .collect();
    for (v, w) in sample {
        let direct = e.nlf_check(v, w)?;
        let table = &reports[&(v, w)];
        rep.check(
            direct.status == table.status
                && direct.distance == table.distance
                && direct.interval_size == table.interval_size
                && direct.face_distance == table.face_distance,
            || format!("pair {v}-{w}: {direct:?} vs {table:?}"),
        );
    }
    Ok(rep)
}

/// Every unordered pair of triangulations of the `c`-gon, including
/// `v = w`. Distances are cross-checked against the oracle graph.
pub fn disc_nlf(c: usize, exec: Exec, seed: u64) -> Result<NlfSweep> {
    let mut e = Explorer::new(Triangulation::disc(c)?).with_exec(exec);
    e.explore_all()?;
    let ids: Vec<NodeId> = (0..e.len()).collect();
    let tables = par::map(exec, &ids, |&v| {
        e.frozen_distances(v, usize::MAX, |_| true)
            .expect("fully explored")
    });

    let oracle = OracleGraph::new(c)?;
    let image: Vec<usize> = ids
        .iter()
        .map(|&u| {
            let t = PolygonTriangulation {
                c,
                diagonals: decode_key(e.base(), &e.key(u)),
            };
            oracle
                .index
                .get(&t)
                .copied()
                .ok_or(Error::InvalidSurface(format!(
                    "node {u} is not a triangulation of the {c}-gon"
                )))
        })
        .collect::<Result<_>>()?;
    let mut nlf = SweepReport::new(format!("nlf c={c}"));
    let oracle_rows = par::map(exec, &ids, |&v| oracle.distances_from(image[v]));
    for &v in &ids {
        for &w in &ids {
            if tables[v][&w] != oracle_rows[v][image[w]] {
                nlf.violate(format!("distance {v}-{w} disagrees with the oracle"));
            }
        }
    }

    let reports = pair_reports(&e, &ids, &tables, usize::MAX, exec);
    let pairs: Vec<(NodeId, NodeId)> = reports.iter().map(|(p, _)| *p).collect();
    for (_, r) in &reports {
        record_nlf(&mut nlf, r);
    }
    let by_pair: HashMap<(NodeId, NodeId), NlfReport> = reports.into_iter().collect();
    let spot = spot_check(&mut e, &pairs, &by_pair, seed)?;
    Ok(NlfSweep {
        nlf,
        spot_check: spot,
        pairs: pairs.len(),
        seed,
    })
}

/// Every pair inside the radius-`radius` ball around the base whose distance
/// is at most `max_distance`. The explored region reaches
/// `radius + max_distance`, which makes every distance, interval and face
/// search below exact. Running out of budget marks every pair inconclusive.
pub fn bounded_nlf(
    base: Triangulation,
    radius: usize,
    max_distance: usize,
    budget: usize,
    exec: Exec,
    seed: u64,
) -> Result<NlfSweep> {
    let mut nlf = SweepReport::new("bounded nlf");
    let mut e = Explorer::with_budget(base, budget).with_exec(exec);
    let ball = match e.bfs_ball(e.root(), radius + max_distance) {
        Ok(layers) => layers[..=radius.min(layers.len() - 1)].concat(),
        Err(Error::BudgetExceeded(_)) => {
            nlf.checked = 1;
            nlf.inconclusive = 1;
            return Ok(NlfSweep {
                nlf,
                spot_check: SweepReport::new("spot check against nlf_check"),
                pairs: 0,
                seed,
            });
        }
        Err(err) => return Err(err),
    };
    let mut ball = ball;
    ball.sort_unstable();
    let tables = par::map(exec, &ball, |&v| {
        e.frozen_distances(v, max_distance, |_| true)
            .expect("region explored")
    });
    let reports = pair_reports(&e, &ball, &tables, max_distance, exec);
    let pairs: Vec<(NodeId, NodeId)> = reports.iter().map(|(p, _)| *p).collect();
    for (_, r) in &reports {
        record_nlf(&mut nlf, r);
    }
    let by_pair: HashMap<(NodeId, NodeId), NlfReport> = reports.into_iter().collect();
    let spot = spot_check(&mut e, &pairs, &by_pair, seed)?;
    Ok(NlfSweep {
        nlf,
        spot_check: spot,
        pairs: pairs.len(),
        seed,
    })
}

/// Flip paths from the base: every sequence of at most `max_len` flips,
/// with each step naming an arc by its position in `internal_arcs`.
fn all_paths(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|p: &Vec<usize>| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn replay(base: &Triangulation, steps: &[usize]) -> Result<(Vec<Triangulation>, Vec<FlipRecord>)> {
    let mut tris = vec![base.clone()];
    let mut recs = Vec::new();
    for &i in steps {
        let cur = tris.last().unwrap();
        let arc: ArcId = cur.internal_arcs()[i];
        let (next, rec) = cur.flip(arc)?;
        tris.push(next);
        recs.push(rec);
    }
    Ok((tris, recs))
}

/// Round trips of curve transport and path independence of canonical codes
/// along every flip path of length at most `max_len` from `base`.
///
/// Every code seen within the explored ball is carried along each path and
/// transported back and forth across every flip. At the end of the path the
/// codes computed along it must equal the key the explorer assigned to the
/// same vertex, which in general it reached by a different path. On discs
/// the key is also compared with the diagonals read off the marked points.
pub fn round_trip_sweep(base: Triangulation, max_len: usize, exec: Exec) -> Result<SweepReport> {
    let mut e = Explorer::new(base.clone()).with_exec(exec);
    let ball = e.bfs_ball(e.root(), max_len)?.concat();
    let curves: Vec<CurveTrace> = codes_in(&e, &ball).iter().map(ArcCode::trace).collect();
    let is_disc = base.surface().genus == 0 && base.surface().boundary_components() == 1;
    let paths = all_paths(base.internal_arcs().len(), max_len);
    let e = &e;
    let reports = par::map(exec, &paths, |steps| -> Result<SweepReport> {
        let mut rep = SweepReport::new("");
        let (tris, recs) = replay(&base, steps)?;
        let mut carried: Vec<CurveTrace> = curves.clone();
        for (k, rec) in recs.iter().enumerate() {
            let (before, after) = (&tris[k], &tris[k + 1]);
            for tr in carried.iter_mut() {
                let there = tr.transport(rec, after)?;
                let back = there.transport(&rec.inverse(), before)?;
                rep.check(back == *tr, || {
                    format!("path {steps:?}, step {k}: {tr:?} changed")
                });
                *tr = there;
            }
        }
        let last = tris.last().unwrap();
        let mut key = Vec::new();
        for arc in last.internal_arcs() {
            let (h, _) = last.half_edges_of(arc)?;
            key.push(canonical_code(&base, &recs, &CurveTrace::along(last, h))?);
        }
        key.sort();
        let mut node = e.root();
        for (k, rec) in recs.iter().enumerate() {
            let (h, _) = tris[k].half_edges_of(rec.old_arc)?;
            let code = canonical_code(&base, &recs[..k], &CurveTrace::along(&tris[k], h))?;
            let pos = e
                .codes(node)
                .iter()
                .position(|(_, c)| *c == code)
                .ok_or_else(|| Error::InvalidSurface(format!("path {steps:?} lost code {code}")))?;
            node = e.adjacent(node).expect("inside the explored ball")[pos];
        }
        rep.check(key == e.key(node), || {
            format!("path {steps:?}: key differs from explorer")
        });
        if is_disc {
            rep.check(decode_key(&base, &key) == polygon_diagonals(last), || {
                format!("path {steps:?}: key names the wrong diagonals")
            });
        }
        Ok(rep)
    });
    let mut report = SweepReport::new("round trips");
    for r in reports {
        report.absorb(r?);
    }
    Ok(report)
}
