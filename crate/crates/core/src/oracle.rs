//! Brute-force model of convex polygon triangulations.
//!
//! Triangulations are plain sets of vertex pairs. Nothing here touches the
//! half-edge machinery, so every result can be used to check it.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

pub type Diagonal = (usize, usize);

pub const MAX_POLYGON: usize = 12;

fn norm(d: Diagonal) -> Diagonal {
    (d.0.min(d.1), d.0.max(d.1))
}

/// True iff the two diagonals' endpoints strictly interleave around the
/// polygon. Diagonals sharing an endpoint never cross.
pub fn crosses(d1: Diagonal, d2: Diagonal) -> bool {
    let (a, b) = norm(d1);
    let (x, y) = norm(d2);
    if a == x || a == y || b == x || b == y {
        return false;
    }
    let inside = |v: usize| a < v && v < b;
    inside(x) != inside(y)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolygonTriangulation {
    pub c: usize,
    pub diagonals: BTreeSet<Diagonal>,
}

impl PolygonTriangulation {
    pub fn new(c: usize, diagonals: impl IntoIterator<Item = Diagonal>) -> Result<Self> {
        let diagonals: BTreeSet<Diagonal> = diagonals.into_iter().map(norm).collect();
        for &(a, b) in &diagonals {
            if b >= c || !is_diagonal(c, (a, b)) {
                return Err(Error::InvalidDiagonal(a, b));
            }
        }
        if diagonals.len() + 3 != c {
            return Err(Error::InvalidSurface(format!(
                "{} diagonals for a {c}-gon",
                diagonals.len()
            )));
        }
        for &d in &diagonals {
            if let Some(&e) = diagonals.iter().find(|&&e| crosses(d, e)) {
                return Err(Error::InvalidSurface(format!("{d:?} crosses {e:?}")));
            }
        }
        Ok(PolygonTriangulation { c, diagonals })
    }

    pub fn fan(c: usize) -> Self {
        PolygonTriangulation {
            c,
            diagonals: (2..c - 1).map(|k| (0, k)).collect(),
        }
    }

    /// Boundary edge or diagonal.
    fn has_segment(&self, a: usize, b: usize) -> bool {
        let (a, b) = norm((a, b));
        b - a == 1 || (a == 0 && b == self.c - 1) || self.diagonals.contains(&(a, b))
    }

    /// The two apexes of the triangles on either side of a diagonal.
    fn apexes(&self, d: Diagonal) -> (usize, usize) {
        let (a, b) = norm(d);
        let left = (a + 1..b)
            .find(|&k| self.has_segment(a, k) && self.has_segment(k, b))
            .expect("triangulated");
        let right = (b + 1..self.c)
            .chain(0..a)
            .find(|&k| self.has_segment(a, k) && self.has_segment(k, b))
            .expect("triangulated");
        (left, right)
    }

    /// Replaces `d` by the other diagonal of its quadrilateral.
    pub fn flip(&self, d: Diagonal) -> PolygonTriangulation {
        let d = norm(d);
        assert!(self.diagonals.contains(&d), "{d:?} is not a diagonal");
        let (l, r) = self.apexes(d);
        let mut diagonals = self.diagonals.clone();
        diagonals.remove(&d);
        diagonals.insert(norm((l, r)));
        PolygonTriangulation {
            c: self.c,
            diagonals,
        }
    }

    pub fn neighbors(&self) -> Vec<PolygonTriangulation> {
        self.diagonals.iter().map(|&d| self.flip(d)).collect()
    }
}

fn is_diagonal(c: usize, d: Diagonal) -> bool {
    let (a, b) = norm(d);
    b < c && b - a >= 2 && !(a == 0 && b == c - 1)
}

/// Every triangulation of a convex `c`-gon, `4 <= c <= 12`.
pub fn enumerate_all(c: usize) -> Result<Vec<PolygonTriangulation>> {
    if !(4..=MAX_POLYGON).contains(&c) {
        return Err(Error::PolygonOutOfRange(c));
    }
    // triangulations of the sub-polygon on vertices lo..=hi, as diagonal lists
    fn rec(lo: usize, hi: usize, c: usize) -> Vec<Vec<Diagonal>> {
        if hi - lo < 2 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for apex in lo + 1..hi {
            for left in rec(lo, apex, c) {
                for right in rec(apex, hi, c) {
                    let mut ds = left.clone();
                    ds.extend(&right);
                    for d in [(lo, apex), (apex, hi)] {
                        if is_diagonal(c, d) {
                            ds.push(d);
                        }
                    }
                    out.push(ds);
                }
            }
        }
        out
    }
    let mut all: Vec<PolygonTriangulation> = rec(0, c - 1, c)
        .into_iter()
        .map(|ds| PolygonTriangulation {
            c,
            diagonals: ds.into_iter().collect(),
        })
        .collect();
    all.sort();
    Ok(all)
}

/// Dragging projection onto the face of `from -> to`: while the diagonal is
/// missing, flip the crossed diagonal that closes a triangle with `from`.
/// Each flip replaces it by a diagonal ending at `from`.
pub fn stt_project(
    t: &PolygonTriangulation,
    from: usize,
    to: usize,
) -> Result<PolygonTriangulation> {
    if !is_diagonal(t.c, (from, to)) {
        return Err(Error::InvalidDiagonal(from, to));
    }
    let gamma = (from, to);
    let mut cur = t.clone();
    while !cur.diagonals.contains(&norm(gamma)) {
        let first = cur
            .diagonals
            .iter()
            .copied()
            .filter(|&d| crosses(d, gamma))
            .find(|&(a, b)| cur.has_segment(from, a) && cur.has_segment(from, b))
            .expect("some crossed diagonal borders the triangle at the start");
        cur = cur.flip(first);
    }
    Ok(cur)
}

/// The full flip graph of a polygon.
pub struct OracleGraph {
    pub nodes: Vec<PolygonTriangulation>,
    pub index: HashMap<PolygonTriangulation, usize>,
    pub adjacency: Vec<Vec<usize>>,
}

impl OracleGraph {
    pub fn new(c: usize) -> Result<Self> {
        let nodes = enumerate_all(c)?;
        let index: HashMap<_, _> = nodes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let adjacency = nodes
            .iter()
            .map(|t| t.neighbors().iter().map(|u| index[u]).collect())
            .collect();
        Ok(OracleGraph {
            nodes,
            index,
            adjacency,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn distances_from(&self, s: usize) -> Vec<usize> {
        self.restricted_distances(s, |_| true)
    }

    fn restricted_distances(&self, s: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX && keep(v) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Distance inside the face of triangulations containing all of `face`.
    pub fn face_distance(&self, s: usize, t: usize, face: &BTreeSet<Diagonal>) -> usize {
        self.restricted_distances(s, |v| face.is_subset(&self.nodes[v].diagonals))[t]
    }

    /// Checks every pair: each vertex on a geodesic contains the pair's
    /// common diagonals, and the face distance equals the distance. Returns
    /// the number of pairs checked and the failing pairs.
    pub fn nlf_exhaustive(&self) -> (usize, Vec<(usize, usize)>) {
        let dist: Vec<Vec<usize>> = (0..self.nodes.len())
            .map(|s| self.distances_from(s))
            .collect();
        let mut failures = Vec::new();
        let mut pairs = 0;
        for v in 0..self.nodes.len() {
            for w in v..self.nodes.len() {
                pairs += 1;
                let common: BTreeSet<Diagonal> = self.nodes[v]
                    .diagonals
                    .intersection(&self.nodes[w].diagonals)
                    .copied()
                    .collect();
                let d = dist[v][w];
                let leaves = (0..self.nodes.len()).any(|u| {
                    dist[v][u] + dist[w][u] == d && !common.is_subset(&self.nodes[u].diagonals)
                });
                if leaves || self.face_distance(v, w, &common) != d {
                    failures.push((v, w));
                }
            }
        }
        (pairs, failures)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(k: usize) -> usize {
        (0..k).fold(1usize, |acc, i| acc * 2 * (2 * i + 1) / (i + 2))
    }

    #[test]
    fn crossing_examples() {
        assert!(crosses((1, 4), (0, 2)));
        assert!(!crosses((1, 4), (0, 4)));
        assert!(!crosses((0, 2), (3, 5)));
        assert!(crosses((4, 1), (2, 0)));
    }

    #[test]
    fn catalan_counts() {
        assert_eq!(enumerate_all(4).unwrap().len(), 2);
        assert_eq!(enumerate_all(6).unwrap().len(), 14);
        assert_eq!(enumerate_all(9).unwrap().len(), 429);
        for c in 4..=MAX_POLYGON {
            let all = enumerate_all(c).unwrap();
            assert_eq!(all.len(), catalan(c - 2), "c = {c}");
            for t in all.iter().take(50) {
                assert!(PolygonTriangulation::new(c, t.diagonals.iter().copied()).is_ok());
            }
        }
        assert!(enumerate_all(3).is_err());
        assert!(enumerate_all(13).is_err());
    }

    #[test]
    fn stt_examples() {
        let fan = PolygonTriangulation::fan(6);
        let fwd = stt_project(&fan, 1, 4).unwrap();
        assert_eq!(
            fwd,
            PolygonTriangulation::new(6, [(1, 3), (1, 4), (0, 4)]).unwrap()
        );
        assert_eq!(stt_project(&fan, 0, 3).unwrap(), fan);
        let bwd = stt_project(&fan, 4, 1).unwrap();
        assert!(bwd.diagonals.contains(&(1, 4)));
        assert_ne!(bwd, fwd);
        assert!(stt_project(&fan, 0, 1).is_err());
    }

    #[test]
    fn hexagon_graph() {
        let g = OracleGraph::new(6).unwrap();
        assert_eq!(g.nodes.len(), 14);
        assert_eq!(g.edge_count(), 21);
        let fan = g.index[&PolygonTriangulation::fan(6)];
        let other = g.index[&PolygonTriangulation::new(6, [(1, 3), (1, 4), (1, 5)]).unwrap()];
        assert_eq!(g.distances_from(fan)[other], 3);
        let (pairs, failures) = g.nlf_exhaustive();
        assert_eq!(pairs, 14 * 15 / 2);
        assert!(failures.is_empty());
    }

    #[test]
    fn flip_is_involution() {
        for t in enumerate_all(7).unwrap() {
            for &d in &t.diagonals {
                let u = t.flip(d);
                let new = *u.diagonals.difference(&t.diagonals).next().unwrap();
                assert_eq!(u.flip(new), t);
            }
        }
    }
}
