//! Complex-plane geometry used by the theory solver.
//!
//! Two region shapes are supported: [`AnnularSector`]s, which are closed under
//! Minkowski products and scalar multiplication, and [`ConvexPolygon`]s, which
//! are closed under Minkowski sums. Sectors are turned into polygons with
//! [`polyenc`] before they are summed.
//!
//! All values are immutable once constructed and every operation is a pure
//! function of its arguments.

mod enclosure;
mod hull;
mod minkowski;
mod polygon;
mod sector;

pub(crate) use enclosure::polyenc_ring;
pub use enclosure::{polyenc, polyenc_by_hull, soft_enclosure, subdivision_count};
pub use hull::convex_hull;
pub use minkowski::{minkowski_sum, minkowski_sum_all, minkowski_sum_naive};
pub(crate) use minkowski::{sweep_ring, SweepBuffers};
pub use polygon::ConvexPolygon;
pub use sector::AnnularSector;

/// Scalar type used throughout the geometry layer.
///
/// Everything numeric in this module goes through `Real` and [`Complex`], so a
/// different number backend only has to replace these two aliases and the
/// handful of transcendental calls in `sector` and `enclosure`.
pub type Real = f64;

/// Complex numbers in Cartesian form.
pub type Complex = num_complex::Complex<Real>;

/// Relative tolerance used for collinearity pruning and the origin test.
pub const DEFAULT_EPS: Real = 1e-9;

/// Precision factor used when none is given.
pub const DEFAULT_PRECISION_FACTOR: u32 = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid annular sector: r0={r0}, r1={r1}, phi0={phi0}, phi1={phi1}")]
    InvalidSector { r0: Real, r1: Real, phi0: Real, phi1: Real },
    #[error("soft enclosure needs an angular width below pi, got {width}")]
    SectorTooWide { width: Real },
    #[error("precision factor must be at least 1")]
    ZeroPrecisionFactor,
}

#[inline]
pub(crate) fn cross(a: Complex, b: Complex) -> Real {
    a.re * b.im - a.im * b.re
}

/// True when `o -> a -> b` is not a strict left turn, up to a relative
/// tolerance on the sine of the turning angle.
#[inline]
pub(crate) fn not_left_turn(o: Complex, a: Complex, b: Complex, eps: Real) -> bool {
    let u = a - o;
    let v = b - o;
    cross(u, v) <= eps * (u.norm_sqr() * v.norm_sqr()).sqrt()
}

pub(crate) fn max_modulus(points: &[Complex]) -> Real {
    points.iter().map(|p| p.norm_sqr()).fold(0.0, Real::max).sqrt()
}
