//! Deterministic base triangulations.

use std::collections::BTreeSet;

use super::{GluingTable, Triangulation};
use crate::error::{Error, Result};

fn pair_label(a: usize, b: usize) -> String {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    format!("{a}-{b}")
}

impl Triangulation {
    /// Fan triangulation of a convex `c`-gon at vertex 0. Marked points are
    /// the polygon vertices `0..c` in counterclockwise order, so the
    /// diagonals are `(0,2), ..., (0,c-2)`.
    pub fn disc(c: usize) -> Result<Triangulation> {
        if c < 4 {
            return Err(Error::Degenerate(c as i64 - 3));
        }
        let diagonals: Vec<(usize, usize)> = (2..c - 1).map(|k| (0, k)).collect();
        Self::disc_from_diagonals(c, &diagonals)
    }

    /// Triangulation of a convex `c`-gon given by `c - 3` pairwise
    /// non-crossing diagonals. Marked points carry the polygon labels.
    pub fn disc_from_diagonals(c: usize, diagonals: &[(usize, usize)]) -> Result<Triangulation> {
        if c < 4 {
            return Err(Error::Degenerate(c as i64 - 3));
        }
        let mut edges: BTreeSet<(usize, usize)> = (0..c)
            .map(|i| {
                let j = (i + 1) % c;
                (i.min(j), i.max(j))
            })
            .collect();
        let mut diag_set = BTreeSet::new();
        for &(a, b) in diagonals {
            let (a, b) = (a.min(b), a.max(b));
            if b >= c || b - a < 2 || (a == 0 && b == c - 1) {
                return Err(Error::InvalidDiagonal(a, b));
            }
            diag_set.insert((a, b));
        }
        if diag_set.len() != c - 3 {
            return Err(Error::InvalidSurface(format!(
                "a {c}-gon triangulation needs {} distinct diagonals",
                c - 3
            )));
        }
        for &(a, b) in &diag_set {
            for &(x, y) in &diag_set {
                let inside = |v: usize| a < v && v < b;
                if x != a && x != b && y != a && y != b && inside(x) != inside(y) {
                    return Err(Error::InvalidSurface(format!(
                        "diagonals ({a},{b}) and ({x},{y}) cross"
                    )));
                }
            }
        }
        edges.extend(diag_set.iter().copied());
        let has = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
        let mut triangles = Vec::new();
        let mut labels = Vec::new();
        for i in 0..c {
            for j in i + 1..c {
                if !has(i, j) {
                    continue;
                }
                for k in j + 1..c {
                    if has(j, k) && has(i, k) {
                        triangles.push([pair_label(i, j), pair_label(j, k), pair_label(k, i)]);
                        labels.push([i as u32, j as u32, k as u32]);
                    }
                }
            }
        }
        if triangles.len() != c - 2 {
            return Err(Error::InvalidSurface(
                "diagonals cross or do not triangulate the polygon".into(),
            ));
        }
        GluingTable { triangles }.build_labeled(&labels)
    }

    /// Zig-zag triangulation of the annulus with `p` marked points on the
    /// outer boundary and `q` on the inner one.
    ///
    /// Cutting along the spoke `s0` from outer point `o0` to inner point `i0`
    /// gives a strip. Walking along the strip, the first `p` triangles
    /// `(o_j, i_0, o_{j+1})` each carry one outer boundary segment, the next
    /// `q` triangles `(o_0, i_k, i_{k+1})` one inner segment. The `p + q`
    /// spokes are the internal arcs.
    pub fn annulus(p: usize, q: usize) -> Result<Triangulation> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidSurface(
                "every boundary component needs a marked point".into(),
            ));
        }
        let n = p + q;
        let spoke = |k: usize| format!("s{}", k % n);
        let mut triangles = Vec::with_capacity(n);
        for j in 0..p {
            triangles.push([spoke(j), spoke(j + 1), format!("o{j}")]);
        }
        for k in 0..q {
            triangles.push([spoke(p + k), format!("i{k}"), spoke(p + k + 1)]);
        }
        GluingTable { triangles }.build()
    }

    /// Torus with one boundary component carrying one marked point.
    ///
    /// Two triangles `(a, b, c)` and `(d, a, b)` form the square torus; the
    /// third triangle `(c, d, B)` fills the slit between the two copies of
    /// the diagonal with the boundary loop `B`.
    pub fn torus_one_boundary() -> Result<Triangulation> {
        let t = |x: [&str; 3]| x.map(str::to_string);
        GluingTable {
            triangles: vec![t(["a", "b", "c"]), t(["d", "a", "b"]), t(["c", "d", "B"])],
        }
        .build()
    }
}
