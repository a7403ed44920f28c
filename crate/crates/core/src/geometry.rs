//! Planar points and Delaunay triangulation.
//!
//! The triangulator is an incremental Bowyer–Watson construction. The
//! enclosing triangle uses three vertices placed symbolically at infinity, so
//! the result covers the exact convex hull of the input instead of an
//! approximation that depends on how large a finite super-triangle is.
//! Orientation and in-circle tests go through Shewchuk's adaptive predicates.

use std::collections::{BTreeSet, HashMap};

use robust::Coord;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    fn coord(self) -> Coord<f64> {
        Coord { x: self.x, y: self.y }
    }
}

/// Twice the signed area of `(a, b, c)`; positive when counter-clockwise.
pub fn orient(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    robust::orient2d(a.coord(), b.coord(), c.coord())
}

/// Positive when `d` lies strictly inside the circle through `a, b, c`,
/// regardless of the orientation of the triangle.
pub fn in_circle(a: Point2D, b: Point2D, c: Point2D, d: Point2D) -> f64 {
    let det = robust::incircle(a.coord(), b.coord(), c.coord(), d.coord());
    if orient(a, b, c) < 0.0 {
        -det
    } else {
        det
    }
}

/// Output of [`triangulate`]: triangles as counter-clockwise index triples and
/// the edge set with `i < j`.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub triangles: Vec<[usize; 3]>,
    pub edges: BTreeSet<(usize, usize)>,
}

/// Delaunay edge set of `points`.
pub fn delaunay(points: &[Point2D]) -> Result<BTreeSet<(usize, usize)>> {
    triangulate(points).map(|t| t.edges)
}

/// Bowyer–Watson Delaunay triangulation.
///
/// Points are inserted in lexicographic `(x, y)` order. A point lying exactly
/// on a circumcircle is treated as outside it, so among cocircular
/// configurations the diagonal created first in that insertion order is kept.
pub fn triangulate(points: &[Point2D]) -> Result<Triangulation> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!("triangulation needs at least 3 points, got {n}")));
    }
    if let Some(p) = points.iter().find(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite point ({}, {})", p.x, p.y)));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (p, q) = (points[i], points[j]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            return Err(Error::InvalidInput(format!("duplicate points {} and {}", w[0], w[1])));
        }
    }
    let (first, last) = (points[order[0]], points[order[n - 1]]);
    if points.iter().all(|&p| orient(first, last, p) == 0.0) {
        return Err(Error::InvalidInput("all points are collinear".into()));
    }

    let mesh = Mesh { points };
    let mut triangles: Vec<[usize; 3]> = vec![[n, n + 1, n + 2]];
    let mut boundary: HashMap<(usize, usize), u32> = HashMap::new();

    for &p in &order {
        let mut kept = Vec::with_capacity(triangles.len() + 2);
        boundary.clear();
        for tri in triangles.drain(..) {
            if mesh.circumcircle_contains(tri, points[p]) {
                for k in 0..3 {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    *boundary.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                }
            } else {
                kept.push(tri);
            }
        }
        let mut fresh: Vec<(usize, usize)> = boundary
            .iter()
            .filter(|&(_, &count)| count == 1)
            .map(|(&edge, _)| edge)
            .collect();
        fresh.sort_unstable();
        kept.extend(fresh.into_iter().map(|(a, b)| [a, b, p]));
        triangles = kept;
    }

    let mut finite = Vec::new();
    let mut edges = BTreeSet::new();
    for tri in triangles {
        if tri.iter().any(|&v| v >= n) {
            continue;
        }
        let [a, b, c] = tri;
        let tri = if orient(points[a], points[b], points[c]) > 0.0 { [a, b, c] } else { [a, c, b] };
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            edges.insert((u.min(v), u.max(v)));
        }
        finite.push(tri);
    }
    finite.sort_unstable();
    Ok(Triangulation { triangles: finite, edges })
}

struct Mesh<'a> {
    points: &'a [Point2D],
}

impl Mesh<'_> {
    /// Unit direction of symbolic vertex `n + k`; the generic base angle keeps
    /// the directions off every lattice axis and diagonal.
    fn direction(k: usize) -> (f64, f64) {
        let angle = std::f64::consts::FRAC_PI_2 + 0.123_456_789 + k as f64 * 2.0 * std::f64::consts::FRAC_PI_3;
        (angle.cos(), angle.sin())
    }

    /// In-circle test where vertices `>= n` sit at infinity along
    /// [`Self::direction`]; each case is the limit of a finite super-triangle
    /// scaled without bound.
    fn circumcircle_contains(&self, tri: [usize; 3], p: Point2D) -> bool {
        let n = self.points.len();
        let mut finite = [0usize; 3];
        let mut infinite = [0usize; 3];
        let (mut nf, mut ni) = (0, 0);
        for &v in &tri {
            if v < n {
                finite[nf] = v;
                nf += 1;
            } else {
                infinite[ni] = v - n;
                ni += 1;
            }
        }
        match ni {
            0 => {
                let [a, b, c] = finite.map(|i| self.points[i]);
                in_circle(a, b, c, p) > 0.0
            }
            1 => {
                // Circle degenerates to the open half-plane on the far
                // vertex's side of line ab, plus the open segment ab.
                let (a, b) = (self.points[finite[0]], self.points[finite[1]]);
                let d = Self::direction(infinite[0]);
                let side = (b.x - a.x) * d.1 - (b.y - a.y) * d.0;
                let o = orient(a, b, p);
                if o != 0.0 {
                    (o > 0.0) == (side > 0.0)
                } else {
                    let along = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
                    let len2 = (b.x - a.x).powi(2) + (b.y - a.y).powi(2);
                    along > 0.0 && along < len2
                }
            }
            2 => {
                // Boundary near `a` flattens to the line through `a` normal to
                // the bisector of the two far directions.
                let a = self.points[finite[0]];
                let (d1, d2) = (Self::direction(infinite[0]), Self::direction(infinite[1]));
                let q = (d1.0 + d2.0, d1.1 + d2.1);
                (p.x - a.x) * q.0 + (p.y - a.y) * q.1 > 0.0
            }
            _ => true,
        }
    }
}
