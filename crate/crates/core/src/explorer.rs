//! The exchange graph of a marked surface as an implicit graph.
//!
//! Vertices are triangulations identified by the sorted list of canonical
//! codes of their internal arcs. The explorer interns every vertex it meets,
//! remembering the flip that first reached it, so any vertex can replay its
//! flip path from the base triangulation. Adjacency is computed lazily, one
//! BFS frontier at a time; neighbour generation for a frontier runs through
//! [`crate::par`] and insertion happens afterwards in frontier order, so node
//! numbering does not depend on thread scheduling.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::curve::{pull_back, ArcCode, CurveTrace};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::surface::{ArcId, FlipRecord, Triangulation};

pub type NodeId = usize;

/// Sorted canonical codes of the internal arcs.
pub type Key = Vec<ArcCode>;

pub const DEFAULT_BUDGET: usize = 1_000_000;

struct Node {
    tri: Triangulation,
    /// Internal arcs with their codes, sorted by code.
    codes: Vec<(ArcId, ArcCode)>,
    parent: Option<(NodeId, FlipRecord)>,
    depth: usize,
}

/// A vertex of the exchange graph with its flip path from the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub key: Key,
    pub triangulation: Triangulation,
    pub flip_path: Vec<FlipRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    pub distance: usize,
    /// A vertex where the two searches met, with its distance from each end.
    pub meeting: NodeId,
    pub from_v: usize,
    pub from_w: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NlfStatus {
    Ok,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NlfReport {
    pub v: Vec<String>,
    pub w: Vec<String>,
    pub status: NlfStatus,
    pub distance: Option<usize>,
    pub common_arcs: Vec<String>,
    pub interval_size: Option<usize>,
    pub face_distance: Option<usize>,
    pub ok: bool,
    /// An interval vertex missing one of the common arcs.
    pub witness: Option<Vec<String>>,
}

pub fn key_strings(key: &[ArcCode]) -> Vec<String> {
    key.iter().map(ToString::to_string).collect()
}

pub struct Explorer {
    base: Triangulation,
    nodes: Vec<Node>,
    index: HashMap<Key, NodeId>,
    adjacency: Vec<Option<Vec<NodeId>>>,
    budget: usize,
    exec: Exec,
}

type Candidate = (FlipRecord, Triangulation, Vec<(ArcId, ArcCode)>);

impl Explorer {
    pub fn new(base: Triangulation) -> Self {
        Self::with_budget(base, DEFAULT_BUDGET)
    }

    pub fn with_budget(base: Triangulation, budget: usize) -> Self {
        let mut codes: Vec<(ArcId, ArcCode)> = base
            .internal_arcs()
            .into_iter()
            .map(|a| {
                let (h, _) = base.half_edges_of(a).expect("own arc");
                (
                    a,
                    ArcCode::from_base_trace(&base, &CurveTrace::along(&base, h)),
                )
            })
            .collect();
        codes.sort_by(|x, y| x.1.cmp(&y.1));
        let key: Key = codes.iter().map(|(_, c)| c.clone()).collect();
        Explorer {
            nodes: vec![Node {
                tri: base.clone(),
                codes,
                parent: None,
                depth: 0,
            }],
            index: HashMap::from([(key, 0)]),
            adjacency: vec![None],
            base,
            budget,
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn base(&self) -> &Triangulation {
        &self.base
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn arc_count(&self) -> usize {
        self.nodes[0].codes.len()
    }

    pub fn triangulation(&self, id: NodeId) -> &Triangulation {
        &self.nodes[id].tri
    }

    pub fn key(&self, id: NodeId) -> Key {
        self.nodes[id]
            .codes
            .iter()
            .map(|(_, c)| c.clone())
            .collect()
    }

    pub fn codes(&self, id: NodeId) -> &[(ArcId, ArcCode)] {
        &self.nodes[id].codes
    }

    pub fn contains_code(&self, id: NodeId, code: &ArcCode) -> bool {
        self.nodes[id]
            .codes
            .binary_search_by(|(_, c)| c.cmp(code))
            .is_ok()
    }

    pub fn arc_with_code(&self, id: NodeId, code: &ArcCode) -> Option<ArcId> {
        let codes = &self.nodes[id].codes;
        codes
            .binary_search_by(|(_, c)| c.cmp(code))
            .ok()
            .map(|i| codes[i].0)
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.nodes[id].depth
    }

    pub fn lookup(&self, key: &[ArcCode]) -> Option<NodeId> {
        self.index.get(key).copied()
    }

    pub fn is_expanded(&self, id: NodeId) -> bool {
        self.adjacency[id].is_some()
    }

    /// Neighbours of an expanded node, in the order of the flipped arcs'
    /// codes.
    pub fn adjacent(&self, id: NodeId) -> Option<&[NodeId]> {
        self.adjacency[id].as_deref()
    }

    /// Flips from the base to `id`, oldest first.
    pub fn flip_path(&self, id: NodeId) -> Vec<FlipRecord> {
        let mut path: Vec<FlipRecord> = self.chain(id).map(|(rec, _)| *rec).collect();
        path.reverse();
        path
    }

    pub fn graph_node(&self, id: NodeId) -> GraphNode {
        GraphNode {
            key: self.key(id),
            triangulation: self.nodes[id].tri.clone(),
            flip_path: self.flip_path(id),
        }
    }

    /// `(record, triangulation before the flip)` from `id` back to the base.
    fn chain(&self, id: NodeId) -> impl Iterator<Item = (&FlipRecord, &Triangulation)> + '_ {
        let mut cur = id;
        std::iter::from_fn(move || {
            let (parent, rec) = self.nodes[cur].parent.as_ref()?;
            cur = *parent;
            Some((rec, &self.nodes[*parent].tri))
        })
    }

    /// Canonical code of a curve given relative to node `id`.
    pub fn code_of(&self, id: NodeId, trace: &CurveTrace) -> Result<ArcCode> {
        let tri = &self.nodes[id].tri;
        let back = pull_back(&trace.reduce(tri)?, self.chain(id))?;
        Ok(ArcCode::from_base_trace(&self.base, &back))
    }

    /// A code's curve relative to node `id`.
    pub fn trace_in(&self, id: NodeId, code: &ArcCode) -> Result<CurveTrace> {
        let path = self.flip_path(id);
        let (_, tr) = crate::curve::push_forward(&self.base, &path, &code.trace())?;
        Ok(tr)
    }

    /// Codes of the internal arcs of the triangulation reached from node
    /// `id` by `flips`.
    pub fn codes_after(&self, id: NodeId, flips: &[FlipRecord]) -> Result<Key> {
        let mut tris = vec![self.nodes[id].tri.clone()];
        for rec in flips {
            let t = tris.last().unwrap().apply(rec)?;
            tris.push(t);
        }
        let last = tris.last().unwrap();
        let mut key = Vec::new();
        for arc in last.internal_arcs() {
            let (h, _) = last.half_edges_of(arc)?;
            let mut tr = CurveTrace::along(last, h);
            tr = pull_back(&tr, flips.iter().zip(&tris).rev())?;
            tr = pull_back(&tr, self.chain(id))?;
            key.push(ArcCode::from_base_trace(&self.base, &tr));
        }
        key.sort();
        Ok(key)
    }

    fn candidates(&self, id: NodeId) -> Result<Vec<Candidate>> {
        let node = &self.nodes[id];
        let mut out = Vec::with_capacity(node.codes.len());
        for (arc, _) in &node.codes {
            let (next, rec) = node.tri.flip(*arc)?;
            let (h, _) = next.half_edges_of(rec.new_arc)?;
            let here = CurveTrace::along(&next, h).transport(&rec.inverse(), &node.tri)?;
            let back = pull_back(&here, self.chain(id))?;
            let code = ArcCode::from_base_trace(&self.base, &back);
            let mut codes: Vec<(ArcId, ArcCode)> = node
                .codes
                .iter()
                .filter(|(a, _)| a != arc)
                .cloned()
                .chain(std::iter::once((rec.new_arc, code)))
                .collect();
            codes.sort_by(|x, y| x.1.cmp(&y.1));
            out.push((rec, next, codes));
        }
        Ok(out)
    }

    /// Computes adjacency for every listed node that lacks it.
    pub fn expand(&mut self, ids: &[NodeId]) -> Result<()> {
        let todo: Vec<NodeId> = ids
            .iter()
            .copied()
            .filter(|&id| self.adjacency[id].is_none())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if todo.is_empty() {
            return Ok(());
        }
        let this = &*self;
        let batches = par::map(self.exec, &todo, |&id| this.candidates(id));
        for (id, batch) in todo.into_iter().zip(batches) {
            let mut nbrs = Vec::new();
            for (rec, tri, codes) in batch? {
                let key: Key = codes.iter().map(|(_, c)| c.clone()).collect();
                let nid = match self.index.get(&key) {
                    Some(&n) => n,
                    None => {
                        if self.nodes.len() >= self.budget {
                            return Err(Error::BudgetExceeded(self.budget));
                        }
                        let n = self.nodes.len();
                        self.nodes.push(Node {
                            tri,
                            codes,
                            parent: Some((id, rec)),
                            depth: self.nodes[id].depth + 1,
                        });
                        self.adjacency.push(None);
                        self.index.insert(key, n);
                        n
                    }
                };
                nbrs.push(nid);
            }
            self.adjacency[id] = Some(nbrs);
        }
        Ok(())
    }

    pub fn neighbors(&mut self, id: NodeId) -> Result<Vec<NodeId>> {
        self.expand(&[id])?;
        Ok(self.adjacency[id].clone().expect("expanded"))
    }

    /// BFS layers around `start` up to `radius`; layer `i` holds the nodes at
    /// distance exactly `i`.
    pub fn bfs_ball(&mut self, start: NodeId, radius: usize) -> Result<Vec<Vec<NodeId>>> {
        self.restricted_ball(start, radius, |_, _| true)
    }

    fn restricted_ball(
        &mut self,
        start: NodeId,
        radius: usize,
        keep: impl Fn(&Explorer, NodeId) -> bool,
    ) -> Result<Vec<Vec<NodeId>>> {
        let mut seen: HashMap<NodeId, usize> = HashMap::from([(start, 0)]);
        let mut layers = vec![vec![start]];
        for d in 1..=radius {
            let frontier = layers.last().unwrap().clone();
            self.expand(&frontier)?;
            let mut layer = Vec::new();
            for u in frontier {
                for &v in self.adjacency[u].as_ref().unwrap() {
                    if !seen.contains_key(&v) && keep(self, v) {
                        seen.insert(v, d);
                        layer.push(v);
                    }
                }
            }
            if layer.is_empty() {
                break;
            }
            layers.push(layer);
        }
        Ok(layers)
    }

    /// Exact flip distance by bidirectional BFS.
    pub fn distance(&mut self, v: NodeId, w: NodeId) -> Result<DistanceCertificate> {
        if v == w {
            return Ok(DistanceCertificate {
                distance: 0,
                meeting: v,
                from_v: 0,
                from_w: 0,
            });
        }
        let mut dist = [HashMap::from([(v, 0usize)]), HashMap::from([(w, 0usize)])];
        let mut frontier = [vec![v], vec![w]];
        loop {
            let side = usize::from(frontier[1].len() < frontier[0].len());
            if frontier[side].is_empty() {
                return Err(Error::InvalidSurface("nodes are not connected".into()));
            }
            self.expand(&frontier[side])?;
            let mut next = Vec::new();
            let mut best: Option<DistanceCertificate> = None;
            for &u in &frontier[side] {
                let du = dist[side][&u];
                for &x in self.adjacency[u].as_ref().unwrap() {
                    if dist[side].contains_key(&x) {
                        continue;
                    }
                    dist[side].insert(x, du + 1);
                    next.push(x);
                    if let Some(&dx) = dist[1 - side].get(&x) {
                        let total = du + 1 + dx;
                        if best.is_none_or(|b| total < b.distance) {
                            let (from_v, from_w) = if side == 0 {
                                (du + 1, dx)
                            } else {
                                (dx, du + 1)
                            };
                            best = Some(DistanceCertificate {
                                distance: total,
                                meeting: x,
                                from_v,
                                from_w,
                            });
                        }
                    }
                }
            }
            if let Some(b) = best {
                return Ok(b);
            }
            frontier[side] = next;
        }
    }

    fn distance_map(&mut self, start: NodeId, radius: usize) -> Result<HashMap<NodeId, usize>> {
        let layers = self.bfs_ball(start, radius)?;
        Ok(layers
            .into_iter()
            .enumerate()
            .flat_map(|(d, layer)| layer.into_iter().map(move |u| (u, d)))
            .collect())
    }

    /// All vertices on some geodesic from `v` to `w`, sorted by key.
    pub fn geodesic_interval(&mut self, v: NodeId, w: NodeId) -> Result<Vec<NodeId>> {
        let d = self.distance(v, w)?.distance;
        self.interval_at(v, w, d)
    }

    fn interval_at(&mut self, v: NodeId, w: NodeId, d: usize) -> Result<Vec<NodeId>> {
        let from_v = self.distance_map(v, d)?;
        let from_w = self.distance_map(w, d)?;
        let mut interval: Vec<NodeId> = from_v
            .iter()
            .filter(|(u, dv)| from_w.get(u).is_some_and(|dw| *dv + dw == d))
            .map(|(&u, _)| u)
            .collect();
        interval.sort_by_key(|&u| self.key(u));
        Ok(interval)
    }

    /// Internal-arc codes present in both triangulations.
    pub fn common_arcs(&self, v: NodeId, w: NodeId) -> BTreeSet<ArcCode> {
        let a: BTreeSet<&ArcCode> = self.nodes[v].codes.iter().map(|(_, c)| c).collect();
        self.nodes[w]
            .codes
            .iter()
            .map(|(_, c)| c)
            .filter(|c| a.contains(c))
            .cloned()
            .collect()
    }

    pub fn in_face(&self, id: NodeId, face: &BTreeSet<ArcCode>) -> bool {
        face.iter().all(|c| self.contains_code(id, c))
    }

    /// Distance within the subgraph of triangulations containing every arc of
    /// `face`.
    pub fn face_distance(
        &mut self,
        v: NodeId,
        w: NodeId,
        face: &BTreeSet<ArcCode>,
    ) -> Result<usize> {
        if !self.in_face(v, face) || !self.in_face(w, face) {
            return Err(Error::NotInFace);
        }
        let mut seen: HashMap<NodeId, usize> = HashMap::from([(v, 0)]);
        let mut frontier = vec![v];
        let mut d = 0;
        while !seen.contains_key(&w) {
            if frontier.is_empty() {
                return Err(Error::InvalidSurface("face is disconnected".into()));
            }
            self.expand(&frontier)?;
            d += 1;
            let mut next = Vec::new();
            for u in frontier {
                for &x in self.adjacency[u].as_ref().unwrap() {
                    if !seen.contains_key(&x) && self.in_face(x, face) {
                        seen.insert(x, d);
                        next.push(x);
                    }
                }
            }
            frontier = next;
        }
        Ok(seen[&w])
    }

    /// Non-leaving-face check for one pair. Budget exhaustion yields an
    /// inconclusive report rather than an error.
    pub fn nlf_check(&mut self, v: NodeId, w: NodeId) -> Result<NlfReport> {
        let common = self.common_arcs(v, w);
        let mut report = NlfReport {
            v: key_strings(&self.key(v)),
            w: key_strings(&self.key(w)),
            status: NlfStatus::Inconclusive,
            distance: None,
            common_arcs: common.iter().map(ToString::to_string).collect(),
            interval_size: None,
            face_distance: None,
            ok: false,
            witness: None,
        };
        let run = |this: &mut Explorer, report: &mut NlfReport| -> Result<()> {
            let d = this.distance(v, w)?.distance;
            report.distance = Some(d);
            let interval = this.interval_at(v, w, d)?;
            report.interval_size = Some(interval.len());
            report.witness = interval
                .iter()
                .find(|&&u| !this.in_face(u, &common))
                .map(|&u| key_strings(&this.key(u)));
            report.face_distance = Some(this.face_distance(v, w, &common)?);
            Ok(())
        };
        match run(self, &mut report) {
            Ok(()) => {
                report.ok = report.witness.is_none();
                report.status = if report.ok {
                    NlfStatus::Ok
                } else {
                    NlfStatus::Fail
                };
                Ok(report)
            }
            Err(Error::BudgetExceeded(_)) => Ok(report),
            Err(e) => Err(e),
        }
    }

    /// Expands everything within `radius` of the base; afterwards every
    /// node at depth < `radius` has its adjacency.
    pub fn explore(&mut self, radius: usize) -> Result<Vec<Vec<NodeId>>> {
        let layers = self.bfs_ball(self.root(), radius)?;
        Ok(layers)
    }

    /// Explores until no new vertices appear (finite graphs only).
    pub fn explore_all(&mut self) -> Result<usize> {
        let mut frontier = vec![self.root()];
        let mut seen: BTreeSet<NodeId> = frontier.iter().copied().collect();
        while !frontier.is_empty() {
            self.expand(&frontier)?;
            let mut next = Vec::new();
            for u in frontier {
                for &x in self.adjacency[u].as_ref().unwrap() {
                    if seen.insert(x) {
                        next.push(x);
                    }
                }
            }
            frontier = next;
        }
        Ok(self.nodes.len())
    }

    /// Read-only BFS over already-expanded nodes. Returns `None` if the
    /// search needs a node whose adjacency is not known yet.
    pub fn frozen_distances(
        &self,
        start: NodeId,
        radius: usize,
        keep: impl Fn(NodeId) -> bool,
    ) -> Option<HashMap<NodeId, usize>> {
        let mut seen = HashMap::from([(start, 0usize)]);
        let mut frontier = vec![start];
        for d in 1..=radius {
            let mut next = Vec::new();
            for u in frontier {
                for &x in self.adjacency[u].as_ref()? {
                    if !seen.contains_key(&x) && keep(x) {
                        seen.insert(x, d);
                        next.push(x);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Some(seen)
    }

    /// Node whose triangulation is reached from the base by flipping the
    /// listed arcs in turn; each step names an internal arc by its position
    /// in the current node's code order.
    pub fn follow(&mut self, steps: &[usize]) -> Result<NodeId> {
        let mut cur = self.root();
        for &i in steps {
            let nbrs = self.neighbors(cur)?;
            cur = *nbrs
                .get(i)
                .ok_or_else(|| Error::InvalidSurface(format!("no arc at position {i}")))?;
        }
        Ok(cur)
    }
}
