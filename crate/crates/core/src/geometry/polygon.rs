use super::{cross, max_modulus, not_left_turn, Complex, Real};

/// A convex polygon with counterclockwise vertices.
///
/// Points (one vertex) and segments (two vertices) are valid degenerate
/// polygons. Consecutive near-duplicates and collinear vertices are pruned on
/// construction, so every retained vertex is a strict corner.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Complex>,
}

impl ConvexPolygon {
    pub fn point(p: Complex) -> Self {
        ConvexPolygon { vertices: vec![p] }
    }

    /// Builds a polygon from vertices already in convex counterclockwise order,
    /// dropping duplicates and collinear corners.
    pub(crate) fn from_ccw(vertices: Vec<Complex>, eps: Real) -> Self {
        debug_assert!(!vertices.is_empty());
        ConvexPolygon { vertices: prune_cyclic(vertices, eps) }
    }

    pub fn vertices(&self) -> &[Complex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn translate(&self, c: Complex) -> ConvexPolygon {
        ConvexPolygon { vertices: self.vertices.iter().map(|v| v + c).collect() }
    }

    /// Shoelace area; zero for points and segments.
    pub fn area(&self) -> Real {
        if self.vertices.len() < 3 {
            return 0.0;
        }
        let n = self.vertices.len();
        let twice: Real = (0..n).map(|j| cross(self.vertices[j], self.vertices[(j + 1) % n])).sum();
        0.5 * twice.abs()
    }

    /// `max |p|^2` over the polygon, attained at a vertex.
    pub fn max_modulus_sq(&self) -> Real {
        self.vertices.iter().map(|p| p.norm_sqr()).fold(0.0, Real::max)
    }

    /// Scale used to turn the relative tolerance into an absolute one.
    fn tolerance_scale(&self) -> Real {
        max_modulus(&self.vertices).max(1.0)
    }

    /// Whether the origin lies inside the polygon or within
    /// `eps * max(1, max |p_j|)` of its boundary.
    ///
    /// For proper polygons this is the sign test on `p_j x (p_{j+1} - p_j)`:
    /// the origin is inside iff all those cross products share a sign. Cross
    /// products within tolerance of zero count as both signs, so ties resolve
    /// toward containment.
    pub fn contains_origin(&self, eps: Real) -> bool {
        let tol = eps * self.tolerance_scale();
        let v = &self.vertices;
        match v.len() {
            1 => v[0].norm_sqr().sqrt() <= tol,
            2 => distance_to_segment(Complex::new(0.0, 0.0), v[0], v[1]) <= tol,
            n => {
                let mut nonneg = true;
                let mut nonpos = true;
                for j in 0..n {
                    let p = v[j];
                    let edge = v[(j + 1) % n] - p;
                    let c = cross(p, edge);
                    let band = tol * edge.norm_sqr().sqrt();
                    if c < -band {
                        nonneg = false;
                    }
                    if c > band {
                        nonpos = false;
                    }
                    if !nonneg && !nonpos {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Area, maximum squared modulus and origin membership of a convex
    /// counterclockwise ring that may still hold repeated or collinear
    /// points, computed without building the polygon. Agrees with
    /// [`ConvexPolygon::contains_origin`] on the pruned ring up to rounding.
    pub(crate) fn ring_summary(ring: &[Complex], eps: Real) -> RingSummary {
        let n = ring.len();
        let max_sq = ring.iter().map(|p| p.norm_sqr()).fold(0.0, Real::max);
        let twice: Real = (0..n).map(|j| cross(ring[j], ring[(j + 1) % n])).sum();
        let scale = max_sq.sqrt().max(1.0);
        // thin or degenerate rings go through the pruned polygon
        if n < 3 || twice.abs() <= 1e-6 * scale * scale {
            let poly = ConvexPolygon::from_ccw(ring.to_vec(), eps);
            return RingSummary {
                contains_origin: poly.contains_origin(eps),
                area: poly.area(),
                max_modulus_sq: poly.max_modulus_sq(),
            };
        }
        let tol = eps * scale;
        let dup = eps * max_sq.sqrt();
        let mut contains_origin = true;
        for j in 0..n {
            let p = ring[j];
            let edge = ring[(j + 1) % n] - p;
            let len = edge.norm_sqr().sqrt();
            // near-duplicate points carry no reliable direction
            if len <= dup {
                continue;
            }
            if cross(p, edge) * twice.signum() < -tol * len {
                contains_origin = false;
                break;
            }
        }
        RingSummary { contains_origin, area: 0.5 * twice.abs(), max_modulus_sq: max_sq }
    }

    /// Membership of an arbitrary point, with the same tolerance rule as
    /// [`ConvexPolygon::contains_origin`].
    pub fn contains_point(&self, z: Complex, eps: Real) -> bool {
        self.translate(-z).contains_origin(eps)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct RingSummary {
    pub contains_origin: bool,
    pub area: Real,
    pub max_modulus_sq: Real,
}

fn distance_to_segment(z: Complex, a: Complex, b: Complex) -> Real {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm_sqr().sqrt();
    }
    let t = (((z - a).re * ab.re + (z - a).im * ab.im) / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm_sqr().sqrt()
}

/// Removes near-duplicates and vertices lying on the segment between their
/// neighbours from a cyclic vertex list that is convex and counterclockwise up
/// to rounding. Reversals (the two ends of a segment) are kept.
pub(crate) fn prune_cyclic(vertices: Vec<Complex>, eps: Real) -> Vec<Complex> {
    let dup = eps * max_modulus(&vertices);
    let mut out: Vec<Complex> = Vec::with_capacity(vertices.len());
    for p in vertices {
        if out.last().is_none_or(|&last| (p - last).norm_sqr().sqrt() > dup) {
            out.push(p);
        }
    }
    while out.len() >= 2 && (out[0] - out[out.len() - 1]).norm_sqr().sqrt() <= dup {
        out.pop();
    }
    if out.len() < 3 {
        return out;
    }
    let mut kept: Vec<Complex> = Vec::with_capacity(out.len());
    for p in out {
        while kept.len() >= 2 && redundant(kept[kept.len() - 2], kept[kept.len() - 1], p, eps) {
            kept.pop();
        }
        kept.push(p);
    }
    loop {
        let n = kept.len();
        if n < 3 {
            break;
        }
        if redundant(kept[n - 2], kept[n - 1], kept[0], eps) {
            kept.pop();
        } else if redundant(kept[n - 1], kept[0], kept[1], eps) {
            kept.remove(0);
        } else {
            break;
        }
    }
    kept
}

/// `v` is not a strict left turn between `prev` and `next` and the path keeps
/// moving forward through it.
fn redundant(prev: Complex, v: Complex, next: Complex, eps: Real) -> bool {
    let u = v - prev;
    let w = next - v;
    let forward = u.re * w.re + u.im * w.im >= 0.0;
    forward && not_left_turn(prev, v, next, eps)
}
