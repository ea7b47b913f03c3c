use std::f64::consts::PI;

use super::{convex_hull, polygon::ConvexPolygon, AnnularSector, Complex, GeometryError, Real, DEFAULT_EPS};

/// Circumscribing quadrilateral of a sector narrower than `pi`.
///
/// With `w` the angular width, the vertices are `A = r1/cos(w/2) e^{i phi0}`,
/// `B = r1/cos(w/2) e^{i phi1}`, `C = r0 e^{i phi1}` and `D = r0 e^{i phi0}`.
/// Segment `AB` is tangent to the outer arc at its midpoint. Coinciding
/// vertices (`r0 = 0`, zero width) are merged.
pub fn soft_enclosure(s: &AnnularSector) -> Result<ConvexPolygon, GeometryError> {
    let w = s.width();
    if w >= PI {
        return Err(GeometryError::SectorTooWide { width: w });
    }
    Ok(soft_enclosure_unchecked(s.r0(), s.r1(), s.phi0(), w))
}

fn soft_corners(r0: Real, r1: Real, phi0: Real, width: Real) -> [Complex; 4] {
    let outer = r1 / (0.5 * width).cos();
    let phi1 = phi0 + width;
    [
        Complex::from_polar(r0, phi0),
        Complex::from_polar(outer, phi0),
        Complex::from_polar(outer, phi1),
        Complex::from_polar(r0, phi1),
    ]
}

fn soft_enclosure_unchecked(r0: Real, r1: Real, phi0: Real, width: Real) -> ConvexPolygon {
    ConvexPolygon::from_ccw(soft_corners(r0, r1, phi0, width).to_vec(), DEFAULT_EPS)
}

/// Number of sub-arcs used by [`polyenc`] for a sector of angular width `width`.
pub fn subdivision_count(width: Real, factor: u32) -> u32 {
    let mult = if width < PI / 8.0 {
        1
    } else if width < PI / 4.0 {
        2
    } else if width < PI / 2.0 {
        4
    } else if width < PI {
        8
    } else {
        16
    };
    mult * factor
}

/// Polygonal enclosure with precision factor `factor`: the angle range is cut
/// into equal sub-arcs, each gets a soft enclosure, and the result is the
/// convex hull of their union. Works for any width up to a full turn.
///
/// Adjacent soft enclosures share their outer corners, and the inner corners
/// strictly between the two ends never reach the hull, so for widths below
/// `pi` the hull is read off directly as the inner start corner, the `N + 1`
/// outer corners and the inner end corner. From `pi` on the origin lies in
/// the hull of the outer corners, which then swallow the inner ones.
pub fn polyenc(s: &AnnularSector, factor: u32) -> Result<ConvexPolygon, GeometryError> {
    let mut ring = Vec::new();
    polyenc_ring(s, factor, &mut ring)?;
    Ok(ConvexPolygon::from_ccw(ring, DEFAULT_EPS))
}

/// Appends the vertices of [`polyenc`] in counterclockwise order without
/// pruning: repeated or collinear points may remain.
pub(crate) fn polyenc_ring(s: &AnnularSector, factor: u32, ring: &mut Vec<Complex>) -> Result<(), GeometryError> {
    if factor == 0 {
        return Err(GeometryError::ZeroPrecisionFactor);
    }
    let n = subdivision_count(s.width(), factor);
    let step = s.width() / Real::from(n);
    if step == 0.0 || s.r1() == 0.0 {
        ring.extend_from_slice(&soft_corners(s.r0(), s.r1(), s.phi0(), 0.0));
        return Ok(());
    }
    let outer = s.r1() / (0.5 * step).cos();
    let wide = s.width() >= PI;
    let start = Complex::from_polar(1.0, s.phi0());
    if !wide {
        ring.push(start * s.r0());
    }
    let turn = Complex::from_polar(1.0, step);
    let mut p = start * outer;
    // a full circle would repeat its first corner
    let last = if s.is_full() { n - 1 } else { n };
    for _ in 0..last {
        ring.push(p);
        p *= turn;
    }
    let end = Complex::from_polar(1.0, s.phi1());
    if s.is_full() {
        ring.push(p);
    } else {
        ring.push(end * outer);
    }
    if !wide {
        ring.push(end * s.r0());
    }
    Ok(())
}

/// [`polyenc`] computed literally as the hull of all soft-enclosure corners.
pub fn polyenc_by_hull(s: &AnnularSector, factor: u32) -> Result<ConvexPolygon, GeometryError> {
    if factor == 0 {
        return Err(GeometryError::ZeroPrecisionFactor);
    }
    let n = subdivision_count(s.width(), factor);
    let step = s.width() / Real::from(n);
    let mut points = Vec::with_capacity(4 * n as usize);
    for r in 0..n {
        let start = s.phi0() + s.width() * Real::from(r) / Real::from(n);
        points.extend_from_slice(&soft_corners(s.r0(), s.r1(), start, step));
    }
    Ok(convex_hull(&points))
}
