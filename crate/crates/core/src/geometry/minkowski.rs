use super::{convex_hull, cross, polygon::ConvexPolygon, Complex, DEFAULT_EPS};

/// Minkowski sum of two convex polygons.
///
/// Proper polygons are merged by sorting their edge vectors by polar angle in
/// one linear sweep. When either side is a point or a segment the sum falls
/// back to the hull of all pairwise vertex sums, which costs at most
/// `O(2 n log n)` there.
pub fn minkowski_sum(a: &ConvexPolygon, b: &ConvexPolygon) -> ConvexPolygon {
    if a.len() == 1 {
        return b.translate(a.vertices()[0]);
    }
    if b.len() == 1 {
        return a.translate(b.vertices()[0]);
    }
    if a.len() < 3 || b.len() < 3 {
        return minkowski_sum_naive(a, b);
    }

    let p = rotate_to_bottom(a.vertices());
    let q = rotate_to_bottom(b.vertices());
    let (n, m) = (p.len(), q.len());
    let mut out = Vec::with_capacity(n + m);
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        out.push(p[i % n] + q[j % m]);
        let ep = p[(i + 1) % n] - p[i % n];
        let eq = q[(j + 1) % m] - q[j % m];
        let turn = if i == n {
            -1.0
        } else if j == m {
            1.0
        } else {
            cross(ep, eq)
        };
        if turn >= 0.0 {
            i += 1;
        }
        if turn <= 0.0 {
            j += 1;
        }
    }
    ConvexPolygon::from_ccw(out, DEFAULT_EPS)
}

/// Hull of all pairwise vertex sums. Quadratic; used for degenerate inputs
/// and as a reference.
pub fn minkowski_sum_naive(a: &ConvexPolygon, b: &ConvexPolygon) -> ConvexPolygon {
    let sums: Vec<Complex> = a.vertices().iter().flat_map(|&x| b.vertices().iter().map(move |&y| x + y)).collect();
    convex_hull(&sums)
}

/// Minkowski sum of any number of convex polygons in one sweep.
///
/// Every polygon contributes its lowest (then leftmost) vertex to the start
/// point and its edge vectors to a common pool; sorting the pool by polar
/// angle and walking it traces the boundary of the sum. Segments contribute
/// their two opposite edges and points only translate. The sum of no
/// polygons is the point `{0}`.
pub fn minkowski_sum_all<'a, I>(polygons: I) -> ConvexPolygon
where
    I: IntoIterator<Item = &'a ConvexPolygon>,
{
    sweep(polygons.into_iter().map(ConvexPolygon::vertices))
}

/// Sweep over counterclockwise vertex rings that may still contain repeated
/// or collinear points.
pub(crate) fn sweep<'a>(rings: impl Iterator<Item = &'a [Complex]>) -> ConvexPolygon {
    let mut buf = SweepBuffers::default();
    sweep_ring(rings, &mut buf);
    ConvexPolygon::from_ccw(std::mem::take(&mut buf.ring), DEFAULT_EPS)
}

/// Reusable storage for [`sweep_ring`].
#[derive(Default)]
pub(crate) struct SweepBuffers {
    edges: Vec<(f64, Complex)>,
    runs: Vec<usize>,
    heads: Vec<usize>,
    pub ring: Vec<Complex>,
}

/// Writes the unpruned boundary of the sum into `buf.ring`.
///
/// From its lowest vertex each convex ring yields its edges in angular
/// order, so the pooled edges form sorted runs that are merged by repeatedly
/// taking the smallest run head. Zero-length edges are dropped.
pub(crate) fn sweep_ring<'a>(rings: impl Iterator<Item = &'a [Complex]>, buf: &mut SweepBuffers) {
    let SweepBuffers { edges, runs, heads, ring } = buf;
    edges.clear();
    runs.clear();
    heads.clear();
    ring.clear();
    let mut start = Complex::new(0.0, 0.0);
    for v in rings {
        let b = bottom_index(v);
        start += v[b];
        let n = v.len();
        heads.push(edges.len());
        let mut prev = v[b];
        for i in 1..=n {
            let next = v[if b + i < n { b + i } else { b + i - n }];
            let e = next - prev;
            prev = next;
            if e.re != 0.0 || e.im != 0.0 {
                edges.push((pseudo_angle(e), e));
            }
        }
        runs.push(edges.len());
    }
    ring.push(start);
    let mut cur = start;
    // the last edge closes the ring and is not needed
    for _ in 1..edges.len() {
        let mut best = 0;
        let mut key = f64::INFINITY;
        for (r, &h) in heads.iter().enumerate() {
            if h < runs[r] && edges[h].0 < key {
                key = edges[h].0;
                best = r;
            }
        }
        cur += edges[heads[best]].1;
        heads[best] += 1;
        ring.push(cur);
    }
}

/// Strictly increasing function of the polar angle of a nonzero vector,
/// mapping `[0, 2pi)` onto `[0, 4)` without trigonometry.
fn pseudo_angle(z: Complex) -> f64 {
    let (x, y) = (z.re, z.im);
    if y >= 0.0 {
        if x >= 0.0 {
            y / (x + y)
        } else {
            1.0 - x / (y - x)
        }
    } else if x < 0.0 {
        2.0 - y / (-x - y)
    } else {
        3.0 + x / (x - y)
    }
}

fn bottom_index(v: &[Complex]) -> usize {
    (0..v.len()).min_by(|&x, &y| v[x].im.total_cmp(&v[y].im).then(v[x].re.total_cmp(&v[y].re))).unwrap_or(0)
}

/// Counterclockwise vertex list starting at the lowest (then leftmost) vertex.
fn rotate_to_bottom(v: &[Complex]) -> Vec<Complex> {
    let start = bottom_index(v);
    v[start..].iter().chain(&v[..start]).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Real;
    use rand::{Rng, SeedableRng};

    fn c(re: Real, im: Real) -> Complex {
        Complex::new(re, im)
    }

    fn square(side: Real) -> ConvexPolygon {
        convex_hull(&[c(0.0, 0.0), c(side, 0.0), c(side, side), c(0.0, side)])
    }

    #[test]
    fn point_translates() {
        let p = square(1.0);
        let s = minkowski_sum(&ConvexPolygon::point(c(2.0, -1.0)), &p);
        assert_eq!(s, p.translate(c(2.0, -1.0)));
    }

    #[test]
    fn squares_double() {
        let s = minkowski_sum(&square(1.0), &square(1.0));
        assert_eq!(s.len(), 4);
        assert!((s.area() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn segment_plus_segment_is_parallelogram() {
        let a = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let b = convex_hull(&[c(0.0, 0.0), c(0.0, 1.0)]);
        let s = minkowski_sum(&a, &b);
        assert_eq!(s.len(), 4);
        assert!((s.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fold_is_order_independent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let polys: Vec<ConvexPolygon> = (0..6)
            .map(|_| {
                let pts: Vec<Complex> = (0..7).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                convex_hull(&pts)
            })
            .collect();
        let fold = |it: &mut dyn Iterator<Item = &ConvexPolygon>| {
            it.fold(ConvexPolygon::point(c(0.0, 0.0)), |acc, p| minkowski_sum(&acc, p))
        };
        let forward = fold(&mut polys.iter());
        let backward = fold(&mut polys.iter().rev());
        assert_eq!(forward.len(), backward.len());
        for v in forward.vertices() {
            assert!(backward.vertices().iter().any(|w| (v - w).norm() < 1e-9));
        }
    }

    #[test]
    fn sweep_matches_pairwise_fold() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for round in 0..200 {
            let polys: Vec<ConvexPolygon> = (0..rng.gen_range(0..9))
                .map(|_| {
                    // mix of points, segments and proper polygons
                    let count = [1, 2, 5, 9][rng.gen_range(0..4)];
                    let pts: Vec<Complex> =
                        (0..count).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                    convex_hull(&pts)
                })
                .collect();
            let folded = polys.iter().fold(ConvexPolygon::point(c(0.0, 0.0)), |acc, p| minkowski_sum(&acc, p));
            let swept = minkowski_sum_all(&polys);
            assert_eq!(folded.len(), swept.len(), "round {round}");
            for v in folded.vertices() {
                assert!(swept.vertices().iter().any(|w| (v - w).norm() < 1e-9), "round {round}");
            }
        }
    }

    #[test]
    fn pseudo_angle_is_monotone() {
        let mut prev = -1.0;
        for i in 0..3600 {
            let a = i as f64 * std::f64::consts::TAU / 3600.0;
            let p = pseudo_angle(Complex::from_polar(2.5, a));
            assert!(p > prev && (0.0..4.0).contains(&p), "{i}");
            prev = p;
        }
        assert_eq!(pseudo_angle(c(-1.0, 0.0)), 2.0);
        assert_eq!(pseudo_angle(c(0.0, -1.0)), 3.0);
    }

    #[test]
    fn axis_aligned_edges_sort_correctly() {
        let sq = square(1.0);
        let seg = convex_hull(&[c(0.0, 0.0), c(-1.0, 0.0)]);
        let s = minkowski_sum_all([&sq, &seg]);
        assert_eq!(s.len(), 4);
        assert!((s.area() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_sums_are_inside() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let pts: Vec<Complex> = (0..6).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                convex_hull(&pts)
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let s = minkowski_sum(&a, &b);
            for _ in 0..200 {
                let pick = |p: &ConvexPolygon, rng: &mut rand_chacha::ChaCha8Rng| {
                    let w: Vec<Real> = p.vertices().iter().map(|_| rng.gen::<Real>()).collect();
                    let total: Real = w.iter().sum();
                    p.vertices().iter().zip(&w).map(|(v, x)| v * (x / total)).sum::<Complex>()
                };
                let z = pick(&a, &mut rng) + pick(&b, &mut rng);
                assert!(s.contains_point(z, 1e-12));
            }
        }
    }
}
