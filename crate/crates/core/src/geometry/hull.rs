use super::{max_modulus, polygon::ConvexPolygon, Complex, DEFAULT_EPS};

/// Convex hull by Andrew's monotone chain, `O(n log n)`.
///
/// Returns a counterclockwise polygon starting at the lexicographically
/// smallest point. Collinear points are dropped; a single distinct point gives
/// a point polygon and a collinear set gives a segment.
pub fn convex_hull(points: &[Complex]) -> ConvexPolygon {
    assert!(!points.is_empty(), "convex hull of an empty point set");
    let eps = DEFAULT_EPS;
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let dup = eps * max_modulus(&pts);
    pts.dedup_by(|b, a| (*b - *a).norm_sqr().sqrt() <= dup);
    if pts.len() < 3 {
        return ConvexPolygon::from_ccw(pts, eps);
    }

    let mut hull: Vec<Complex> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && super::not_left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p, eps) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && super::not_left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p, eps) {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    ConvexPolygon::from_ccw(hull, eps)
}
