//! Construction of triangulations from gluing tables.
//!
//! A gluing table lists triangles as triples of side labels in
//! counterclockwise order. A label used twice glues those two sides; a label
//! used once is a boundary segment. Labels may carry a direction marker:
//! `+a` is traversed along the label's direction and `-a` against it. Glued
//! sides must be traversed in opposite directions, so two occurrences with the
//! same explicit marker describe a non-orientable gluing. An unmarked label
//! is compatible with anything.
//!
//! JSON form: `{"triangles": [["a", "b", "c"], ["-a", "d", "e"]]}`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{ArcId, HalfEdge, MarkedSurface, PointId, Triangulation};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingTable {
    pub triangles: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideLabel {
    pub name: String,
    /// `Some(true)` for `-name`, `Some(false)` for `+name`.
    pub reversed: Option<bool>,
}

impl SideLabel {
    pub fn parse(s: &str) -> SideLabel {
        if let Some(rest) = s.strip_prefix('-') {
            SideLabel {
                name: rest.to_string(),
                reversed: Some(true),
            }
        } else if let Some(rest) = s.strip_prefix('+') {
            SideLabel {
                name: rest.to_string(),
                reversed: Some(false),
            }
        } else {
            SideLabel {
                name: s.to_string(),
                reversed: None,
            }
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let nx = self.0[x];
            self.0[x] = r;
            x = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl GluingTable {
    pub fn from_json(s: &str) -> std::result::Result<GluingTable, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("gluing table serializes")
    }

    /// Builds a triangulation from the table. Marked points are numbered in
    /// order of first appearance of a triangle corner.
    pub fn build(&self) -> Result<Triangulation> {
        assemble(self, None)
    }

    /// Builds a triangulation with caller-chosen marked-point labels, one per
    /// triangle corner (corner `k` is the origin of side `k`).
    pub fn build_labeled(&self, labels: &[[u32; 3]]) -> Result<Triangulation> {
        assemble(self, Some(labels))
    }
}

impl Triangulation {
    /// Reads back a gluing table, labeling arcs by their ids.
    pub fn to_gluing_table(&self) -> GluingTable {
        GluingTable {
            triangles: self
                .triangles()
                .iter()
                .map(|tri| {
                    tri.map(|h| match self.twin(h) {
                        Some(t) if t < h => format!("-a{}", self.arc(h).0),
                        Some(_) => format!("+a{}", self.arc(h).0),
                        None => format!("b{}", self.arc(h).0),
                    })
                })
                .collect(),
        }
    }

    pub fn new_from_gluing(table: &GluingTable) -> Result<Triangulation> {
        table.build()
    }
}

fn assemble(table: &GluingTable, labels: Option<&[[u32; 3]]>) -> Result<Triangulation> {
    let f = table.triangles.len();
    if f == 0 {
        return Err(Error::Empty);
    }
    if let Some(l) = labels {
        if l.len() != f {
            return Err(Error::InconsistentLabels);
        }
    }
    let m = 3 * f;
    let next: Vec<HalfEdge> = (0..m as u32)
        .map(|h| HalfEdge(3 * (h / 3) + (h % 3 + 1) % 3))
        .collect();
    let face: Vec<u32> = (0..m as u32).map(|h| h / 3).collect();

    let mut occurrences: BTreeMap<String, Vec<(usize, Option<bool>)>> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for (i, tri) in table.triangles.iter().enumerate() {
        for (k, raw) in tri.iter().enumerate() {
            let label = SideLabel::parse(raw);
            let entry = occurrences.entry(label.name.clone()).or_default();
            if entry.is_empty() {
                order.push(label.name.clone());
            }
            entry.push((3 * i + k, label.reversed));
        }
    }

    let mut twin: Vec<Option<HalfEdge>> = vec![None; m];
    for (name, occ) in &occurrences {
        match occ.as_slice() {
            [_] => {}
            [(h1, s1), (h2, s2)] => {
                if h1 / 3 == h2 / 3 {
                    return Err(Error::SelfGlued(h1 / 3, name.clone()));
                }
                if let (Some(a), Some(b)) = (s1, s2) {
                    if a == b {
                        return Err(Error::NonOrientable(name.clone()));
                    }
                }
                twin[*h1] = Some(HalfEdge(*h2 as u32));
                twin[*h2] = Some(HalfEdge(*h1 as u32));
            }
            _ => return Err(Error::LabelOveruse(name.clone(), occ.len())),
        }
    }

    let mut faces_uf = UnionFind::new(f);
    for (h, t) in twin.iter().enumerate() {
        if let Some(t) = t {
            faces_uf.union(h / 3, t.idx() / 3);
        }
    }
    let components = (0..f).filter(|&i| faces_uf.find(i) == i).count();
    if components != 1 {
        return Err(Error::Disconnected(components));
    }

    // corners: corner of h sits at origin(h); a gluing h ~ t identifies
    // origin(h) with dest(t) and dest(h) with origin(t).
    let mut corners = UnionFind::new(m);
    for h in 0..m {
        if let Some(t) = twin[h] {
            corners.union(h, next[t.idx()].idx());
            corners.union(next[h].idx(), t.idx());
        }
    }
    let mut class_label: HashMap<usize, u32> = HashMap::new();
    let mut origin = vec![PointId(0); m];
    match labels {
        None => {
            for (h, slot) in origin.iter_mut().enumerate() {
                let root = corners.find(h);
                let fresh = class_label.len() as u32;
                *slot = PointId(*class_label.entry(root).or_insert(fresh));
            }
        }
        Some(labels) => {
            let mut used: HashMap<u32, usize> = HashMap::new();
            for (h, slot) in origin.iter_mut().enumerate() {
                let want = labels[h / 3][h % 3];
                let root = corners.find(h);
                if *class_label.entry(root).or_insert(want) != want {
                    return Err(Error::InconsistentLabels);
                }
                if *used.entry(want).or_insert(root) != root {
                    return Err(Error::InconsistentLabels);
                }
                *slot = PointId(want);
            }
            let count = used.len() as u32;
            if used.keys().any(|&l| l >= count) {
                return Err(Error::InconsistentLabels);
            }
        }
    }
    let points = class_label.len();

    // every marked point must lie on the boundary and have a single fan of
    // corners around it
    let mut corner_count = vec![0usize; points];
    let mut boundary_out: Vec<Vec<usize>> = vec![Vec::new(); points];
    for h in 0..m {
        corner_count[origin[h].0 as usize] += 1;
        if twin[h].is_none() {
            boundary_out[origin[h].0 as usize].push(h);
        }
    }
    for p in 0..points {
        match boundary_out[p].as_slice() {
            [] => return Err(Error::Punctured(p as u32)),
            [start] => {
                let mut walked = 1;
                let mut x = *start;
                loop {
                    let before = next[next[x].idx()].idx();
                    match twin[before] {
                        Some(t) => {
                            x = t.idx();
                            walked += 1;
                            if walked > m {
                                return Err(Error::NonManifoldVertex(p as u32));
                            }
                        }
                        None => break,
                    }
                }
                if walked != corner_count[p] {
                    return Err(Error::NonManifoldVertex(p as u32));
                }
            }
            _ => return Err(Error::NonManifoldVertex(p as u32)),
        }
    }

    // arc ids: internal arcs first, then boundary arcs, each in label order
    let mut arc = vec![ArcId(0); m];
    let mut id = 0u32;
    for boundary_pass in [false, true] {
        for name in &order {
            let occ = &occurrences[name];
            if (occ.len() == 1) == boundary_pass {
                for &(h, _) in occ {
                    arc[h] = ArcId(id);
                }
                id += 1;
            }
        }
    }

    let faces = (0..f as u32)
        .map(|i| [HalfEdge(3 * i), HalfEdge(3 * i + 1), HalfEdge(3 * i + 2)])
        .collect();
    let mut t = Triangulation {
        next,
        twin,
        origin,
        arc,
        face,
        faces,
        surface: MarkedSurface {
            genus: 0,
            boundary_marked_counts: Vec::new(),
        },
    };

    let cycles = t.boundary_cycles();
    let b = cycles.len() as i64;
    let internal = t.internal_arcs().len() as i64;
    let boundary_arcs = t.boundary_arcs().len() as i64;
    let euler = points as i64 - internal - boundary_arcs + f as i64;
    let twice_genus = 2 - b - euler;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::InvalidSurface(format!(
            "Euler characteristic {euler} with {b} boundary components"
        )));
    }
    let surface = MarkedSurface {
        genus: (twice_genus / 2) as u32,
        boundary_marked_counts: cycles.iter().map(|c| c.len() as u32).collect(),
    };
    let n = surface.internal_arc_count();
    if n < 1 {
        return Err(Error::Degenerate(n));
    }
    debug_assert_eq!(n, internal);
    t.surface = surface;
    Ok(t)
}
