//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use netgames::geometry::{triangulate, Point2D};

pub fn orient(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Plain determinant, oriented so that positive means `d` is strictly inside.
pub fn in_circle(a: Point2D, b: Point2D, c: Point2D, d: Point2D) -> f64 {
    let (adx, ady) = (a.x - d.x, a.y - d.y);
    let (bdx, bdy) = (b.x - d.x, b.y - d.y);
    let (cdx, cdy) = (c.x - d.x, c.y - d.y);
    let det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) - (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
    det * orient(a, b, c).signum()
}

/// Brute-force empty-circumcircle audit of a triangulation, with tolerance
/// `1e-9` on the determinant relative to the coordinate scale.
pub fn audit_delaunay(points: &[Point2D]) -> Result<(), String> {
    let t = triangulate(points).map_err(|e| e.to_string())?;
    let scale = points.iter().fold(1.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let tol = 1e-9 * scale.powi(4);
    let mut from_triangles = std::collections::BTreeSet::new();
    for tri in &t.triangles {
        let [a, b, c] = tri.map(|i| points[i]);
        if orient(a, b, c) <= 0.0 {
            return Err(format!("triangle {tri:?} is not counter-clockwise"));
        }
        for (l, &d) in points.iter().enumerate() {
            if !tri.contains(&l) && in_circle(a, b, c, d) > tol {
                return Err(format!("point {l} inside circumcircle of {tri:?}"));
            }
        }
        let [i, j, k] = *tri;
        for (u, v) in [(i, j), (j, k), (i, k)] {
            from_triangles.insert((u.min(v), u.max(v)));
        }
    }
    if from_triangles != t.edges {
        return Err("edge set disagrees with the triangles".into());
    }
    Ok(())
}

/// Common and total mass of two signed vectors, summed separately over the
/// positive and negative parts.
pub fn masses(v: &[f64], r: &[f64]) -> (f64, f64) {
    let (mut common, mut total) = (0.0, 0.0);
    for (&a, &b) in v.iter().zip(r) {
        let (ap, an) = (a.max(0.0), (-a).max(0.0));
        let (bp, bn) = (b.max(0.0), (-b).max(0.0));
        common += ap.min(bp) + an.min(bn);
        total += ap.max(bp) + an.max(bn);
    }
    (common, total)
}

/// Population mean and standard deviation, two passes.
pub fn two_pass(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
