use std::f64::consts::TAU;

use super::{Complex, GeometryError, Real};

/// The region `[r0, r1] * exp(i [phi0, phi1])` of the complex plane.
///
/// The start angle is kept in `[0, 2pi)` and the angular width is stored
/// separately, clamped to `2pi`. A width of exactly `2pi` marks a full annulus,
/// so "zero width" and "full turn" never collide the way they would under a
/// plain `mod 2pi` reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnularSector {
    r0: Real,
    r1: Real,
    phi0: Real,
    width: Real,
}

fn normalize_angle(phi: Real) -> Real {
    if (0.0..TAU).contains(&phi) {
        return phi;
    }
    let a = phi.rem_euclid(TAU);
    // rem_euclid can round up to TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

impl AnnularSector {
    pub fn new(r0: Real, r1: Real, phi0: Real, phi1: Real) -> Result<Self, GeometryError> {
        let finite = [r0, r1, phi0, phi1].iter().all(|x| x.is_finite());
        if !finite || r0 < 0.0 || r0 > r1 || phi0 > phi1 {
            return Err(GeometryError::InvalidSector { r0, r1, phi0, phi1 });
        }
        Ok(Self::from_parts(r0, r1, phi0, phi1 - phi0))
    }

    fn from_parts(r0: Real, r1: Real, phi0: Real, width: Real) -> Self {
        AnnularSector { r0, r1, phi0: normalize_angle(phi0), width: width.clamp(0.0, TAU) }
    }

    /// The degenerate sector holding only the origin.
    pub fn origin() -> Self {
        AnnularSector { r0: 0.0, r1: 0.0, phi0: 0.0, width: 0.0 }
    }

    /// The real interval `[lo, hi]` seen as a zero-width sector; requires `0 <= lo <= hi`.
    pub fn radial(lo: Real, hi: Real) -> Result<Self, GeometryError> {
        Self::new(lo, hi, 0.0, 0.0)
    }

    pub fn r0(&self) -> Real {
        self.r0
    }

    pub fn r1(&self) -> Real {
        self.r1
    }

    pub fn phi0(&self) -> Real {
        self.phi0
    }

    /// End angle; may exceed `2pi` since it is `phi0 + width`.
    pub fn phi1(&self) -> Real {
        self.phi0 + self.width
    }

    pub fn width(&self) -> Real {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.width >= TAU
    }

    /// Minkowski product: radii multiply, angle intervals add.
    pub fn product(&self, other: &AnnularSector) -> AnnularSector {
        AnnularSector::from_parts(
            self.r0 * other.r0,
            self.r1 * other.r1,
            self.phi0 + other.phi0,
            self.width + other.width,
        )
    }

    /// `{c * z : z in self}`. Multiplying by zero collapses to [`AnnularSector::origin`].
    pub fn scale(&self, c: Complex) -> AnnularSector {
        let m = c.norm_sqr().sqrt();
        if m == 0.0 {
            return AnnularSector::origin();
        }
        AnnularSector::from_parts(self.r0 * m, self.r1 * m, self.phi0 + c.arg(), self.width)
    }

    /// Membership test with an absolute tolerance on the radius and the angle.
    pub fn contains(&self, z: Complex, tol: Real) -> bool {
        let r = z.norm();
        if r < self.r0 - tol || r > self.r1 + tol {
            return false;
        }
        if self.is_full() || r <= tol {
            return true;
        }
        let offset = normalize_angle(z.arg() - self.phi0);
        let ang_tol = tol / r;
        offset <= self.width + ang_tol || offset >= TAU - ang_tol
    }

    /// The point `rho * exp(i (phi0 + t * width))` for `rho` in `[r0, r1]`, `t` in `[0, 1]`.
    pub fn point_at(&self, rho: Real, t: Real) -> Complex {
        Complex::from_polar(rho, self.phi0 + t * self.width)
    }

    pub fn area(&self) -> Real {
        0.5 * self.width * (self.r1 * self.r1 - self.r0 * self.r0)
    }
}
