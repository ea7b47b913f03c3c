//! Per-constraint theory solver.
//!
//! For product states whose angles lie in a box, `<0|psi_j>` ranges over the
//! radial interval `cos([theta0/2, theta1/2])` and `<1|psi_j>` over the sector
//! `sin([theta0/2, theta1/2]) e^{i [phi0, phi1]}`. Expanding `<v|psi>` in the
//! computational basis gives a sum of `2^k` scaled Minkowski products of these
//! sectors; each term is enclosed in a convex polygon and the polygons are
//! summed. If the origin falls outside the sum, no state in the box satisfies
//! the constraint.

use crate::bloch::AngleBox;
use crate::geometry::{
    polyenc_ring, sweep_ring, AnnularSector, Complex, ConvexPolygon, GeometryError, SweepBuffers, DEFAULT_EPS,
};
use crate::instance::Constraint;

use std::cell::RefCell;
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TheoryError {
    #[error("expected {expected} angle boxes, got {found}")]
    BoxCount { expected: usize, found: usize },
    #[error("angle box {index} is out of range: {angles:?}")]
    InvalidBox { index: usize, angles: AngleBox },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Outcome of one theory check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TheoryVerdict {
    /// The origin is excluded: no state in the box satisfies the constraint.
    UnProdsat,
    /// The origin may be reachable. `area` and `max_mod_sq` describe the
    /// polygon covering every attainable `<v|psi>`.
    Maybe { area: f64, max_mod_sq: f64 },
}

impl TheoryVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, TheoryVerdict::UnProdsat)
    }
}

/// `(<0|psi>, <1|psi>)` ranges for one qubit.
fn qubit_sectors(b: &AngleBox) -> Result<[AnnularSector; 2], GeometryError> {
    let (h0, h1) = (0.5 * b.theta.lo, 0.5 * b.theta.hi);
    let zero = AnnularSector::radial(h1.cos().max(0.0), h0.cos().max(0.0))?;
    let one = AnnularSector::new(h0.sin().max(0.0), h1.sin().max(0.0), b.phi.lo, b.phi.hi)?;
    Ok([zero, one])
}

fn check_boxes(c: &Constraint, boxes: &[AngleBox]) -> Result<(), TheoryError> {
    if boxes.len() != c.locality() {
        return Err(TheoryError::BoxCount { expected: c.locality(), found: boxes.len() });
    }
    for (index, b) in boxes.iter().enumerate() {
        let ok = 0.0 <= b.theta.lo
            && b.theta.lo <= b.theta.hi
            && b.theta.hi <= PI
            && 0.0 <= b.phi.lo
            && b.phi.lo <= b.phi.hi
            && b.phi.hi <= TAU;
        if !ok {
            return Err(TheoryError::InvalidBox { index, angles: *b });
        }
    }
    Ok(())
}

#[derive(Default)]
struct Scratch {
    sectors: Vec<[AnnularSector; 2]>,
    points: Vec<Complex>,
    ends: Vec<usize>,
    sweep: SweepBuffers,
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::default();
}

/// Writes the unpruned boundary of the covering polygon into
/// `scratch.sweep.ring`.
fn region_ring(c: &Constraint, boxes: &[AngleBox], factor: u32, scratch: &mut Scratch) -> Result<(), TheoryError> {
    check_boxes(c, boxes)?;
    let k = c.locality();
    let Scratch { sectors, points, ends, sweep } = scratch;
    sectors.clear();
    for b in boxes {
        sectors.push(qubit_sectors(b)?);
    }
    points.clear();
    ends.clear();
    for t in 0..c.amplitudes.len() {
        let coeff = c.bra(t);
        if coeff == Complex::new(0.0, 0.0) {
            continue;
        }
        let term = (0..k).fold(AnnularSector::radial(1.0, 1.0)?, |acc, j| {
            let bit = (t >> (k - 1 - j)) & 1;
            acc.product(&sectors[j][bit])
        });
        polyenc_ring(&term.scale(coeff), factor, points)?;
        ends.push(points.len());
    }
    let rings = ends.iter().scan(0, |lo, &hi| {
        let ring = &points[*lo..hi];
        *lo = hi;
        Some(ring)
    });
    sweep_ring(rings, sweep);
    Ok(())
}

/// Polygon covering `<v|psi>` over all product states in `boxes`, one box per
/// support qubit in support order. Summands are added in ascending `t`; zero
/// coefficients are skipped since they contribute the point `{0}`.
/// The sum is formed in a single edge sweep over all summands.
pub fn amplitude_region(c: &Constraint, boxes: &[AngleBox], factor: u32) -> Result<ConvexPolygon, TheoryError> {
    SCRATCH.with(|s| {
        let s = &mut *s.borrow_mut();
        region_ring(c, boxes, factor, s)?;
        Ok(ConvexPolygon::from_ccw(s.sweep.ring.clone(), DEFAULT_EPS))
    })
}

/// Refutes the constraint on the box, or reports the covering polygon's area
/// and maximum squared modulus.
pub fn check_constraint(
    c: &Constraint,
    boxes: &[AngleBox],
    factor: u32,
    eps: f64,
) -> Result<TheoryVerdict, TheoryError> {
    SCRATCH.with(|s| {
        let s = &mut *s.borrow_mut();
        region_ring(c, boxes, factor, s)?;
        let summary = ConvexPolygon::ring_summary(&s.sweep.ring, eps);
        Ok(if summary.contains_origin {
            TheoryVerdict::Maybe { area: summary.area, max_mod_sq: summary.max_modulus_sq }
        } else {
            TheoryVerdict::UnProdsat
        })
    })
}
