//! Dichotomic encoding of Bloch-sphere angles as Boolean region variables.
//!
//! Each qubit gets `D` bits for `phi` and `D - 1` bits for `theta`. A bit
//! string `x1..xl` names the interval `[B, B + 2pi/2^l]` with
//! `B = sum_j x_j 2pi/2^j`, i.e. the result of `l` halvings of `[0, 2pi]`.
//! The `theta` interval always carries an implicit leading `0` bit, which
//! confines it to `[0, pi]`.
//!
//! Variables are numbered qubit-major; within a qubit the `theta` levels
//! `1..D-1` come first, then the `phi` levels `1..D`.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported search depth; keeps interval numerators inside a `u64`.
pub const MAX_DEPTH: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AngleKind {
    Theta,
    Phi,
}

/// One Boolean region variable: bit `level` (1-based) of one angle of one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionVar {
    pub qubit: usize,
    pub kind: AngleKind,
    pub level: u32,
}

impl RegionVar {
    pub fn theta(qubit: usize, level: u32) -> Self {
        RegionVar { qubit, kind: AngleKind::Theta, level }
    }

    pub fn phi(qubit: usize, level: u32) -> Self {
        RegionVar { qubit, kind: AngleKind::Phi, level }
    }

    pub fn is_valid(&self, depth: u32) -> bool {
        match self.kind {
            AngleKind::Theta => self.level >= 1 && self.level < depth,
            AngleKind::Phi => self.level >= 1 && self.level <= depth,
        }
    }

    /// Zero-based variable id at search depth `depth`.
    pub fn index(&self, depth: u32) -> usize {
        debug_assert!(self.is_valid(depth), "{self:?} at depth {depth}");
        let per_qubit = vars_per_qubit(depth);
        let offset = match self.kind {
            AngleKind::Theta => self.level as usize - 1,
            AngleKind::Phi => (depth - 1) as usize + self.level as usize - 1,
        };
        self.qubit * per_qubit + offset
    }

    /// Inverse of [`RegionVar::index`].
    pub fn from_index(index: usize, depth: u32) -> Self {
        let per_qubit = vars_per_qubit(depth);
        let qubit = index / per_qubit;
        let offset = (index % per_qubit) as u32;
        if offset < depth - 1 {
            RegionVar::theta(qubit, offset + 1)
        } else {
            RegionVar::phi(qubit, offset - (depth - 1) + 1)
        }
    }
}

impl fmt::Display for RegionVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            AngleKind::Theta => "theta",
            AngleKind::Phi => "phi",
        };
        write!(f, "{name}[{}]^{}", self.qubit, self.level)
    }
}

/// A literal over region variables: `var` when `positive`, `not var` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionLiteral {
    pub var: RegionVar,
    pub positive: bool,
}

impl RegionLiteral {
    /// DIMACS-style signed id (`index + 1`, negated for negative literals).
    pub fn to_dimacs(&self, depth: u32) -> i32 {
        let id = self.var.index(depth) as i32 + 1;
        if self.positive {
            id
        } else {
            -id
        }
    }

    pub fn is_true_under(&self, sigma: &RegionAssignment) -> bool {
        sigma.get(self.var) == self.positive
    }
}

pub fn vars_per_qubit(depth: u32) -> usize {
    2 * depth as usize - 1
}

/// A closed real interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Lower and upper halves.
    pub fn halves(&self) -> (Interval, Interval) {
        let mid = 0.5 * (self.lo + self.hi);
        (Interval::new(self.lo, mid), Interval::new(mid, self.hi))
    }
}

/// `I(x1..xl) = [B, B + 2pi/2^l]`; the empty string gives `[0, 2pi]`.
pub fn interval_of(bits: &[bool]) -> Interval {
    assert!(bits.len() <= 63, "bit string too long");
    let numerator = bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
    let scale = (1u64 << bits.len()) as f64;
    Interval::new(TAU * numerator as f64 / scale, TAU * (numerator + 1) as f64 / scale)
}

/// Angle ranges for one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleBox {
    pub theta: Interval,
    pub phi: Interval,
}

impl AngleBox {
    /// The whole Bloch sphere: `theta` in `[0, pi]`, `phi` in `[0, 2pi]`.
    pub fn full() -> Self {
        AngleBox { theta: interval_of(&[false]), phi: interval_of(&[]) }
    }

    pub fn is_subset_of(&self, other: &AngleBox) -> bool {
        self.theta.is_subset_of(&other.theta) && self.phi.is_subset_of(&other.phi)
    }
}

/// A total assignment of all `n (2D - 1)` region variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegionAssignment {
    qubits: usize,
    depth: u32,
    bits: Vec<bool>,
}

impl RegionAssignment {
    pub fn zeros(qubits: usize, depth: u32) -> Self {
        assert!((1..=MAX_DEPTH).contains(&depth), "depth {depth} out of range");
        RegionAssignment { qubits, depth, bits: vec![false; qubits * vars_per_qubit(depth)] }
    }

    /// Wraps a bit vector indexed by [`RegionVar::index`].
    pub fn from_bits(qubits: usize, depth: u32, bits: Vec<bool>) -> Self {
        assert!((1..=MAX_DEPTH).contains(&depth), "depth {depth} out of range");
        assert_eq!(bits.len(), qubits * vars_per_qubit(depth));
        RegionAssignment { qubits, depth, bits }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn num_vars(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, var: RegionVar) -> bool {
        self.bits[var.index(self.depth)]
    }

    pub fn set(&mut self, var: RegionVar, value: bool) {
        let i = var.index(self.depth);
        self.bits[i] = value;
    }

    /// The first `count` theta bits of `qubit`, preceded by the fixed leading zero.
    fn theta_bits(&self, qubit: usize, count: u32) -> Vec<bool> {
        std::iter::once(false).chain((1..=count).map(|l| self.get(RegionVar::theta(qubit, l)))).collect()
    }

    fn phi_bits(&self, qubit: usize, count: u32) -> Vec<bool> {
        (1..=count).map(|l| self.get(RegionVar::phi(qubit, l))).collect()
    }

    /// Box described by the first `d_theta` theta bits and `d_phi` phi bits.
    pub fn prefix_box(&self, qubit: usize, d_phi: u32, d_theta: u32) -> AngleBox {
        assert!(d_phi <= self.depth && d_theta < self.depth, "prefix out of range");
        AngleBox {
            theta: interval_of(&self.theta_bits(qubit, d_theta)),
            phi: interval_of(&self.phi_bits(qubit, d_phi)),
        }
    }

    /// Box described by all of `qubit`'s bits.
    pub fn box_of(&self, qubit: usize) -> AngleBox {
        self.prefix_box(qubit, self.depth, self.depth - 1)
    }

    /// The slice of bits belonging to `qubit`.
    pub fn qubit_bits(&self, qubit: usize) -> &[bool] {
        let w = vars_per_qubit(self.depth);
        &self.bits[qubit * w..(qubit + 1) * w]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Interval, lo: f64, hi: f64) -> bool {
        (a.lo - lo).abs() < 1e-15 && (a.hi - hi).abs() < 1e-15
    }

    #[test]
    fn dichotomic_intervals() {
        assert!(close(interval_of(&[]), 0.0, TAU));
        assert!(close(interval_of(&[false]), 0.0, PI));
        assert!(close(interval_of(&[false, true]), FRAC_PI_2, PI));
        assert!(close(interval_of(&[false, true, false]), FRAC_PI_2, 3.0 * PI / 4.0));
    }

    #[test]
    fn boxes_from_assignments() {
        let sigma = RegionAssignment::zeros(1, 2);
        let b = sigma.box_of(0);
        assert!(close(b.theta, 0.0, FRAC_PI_2));
        assert!(close(b.phi, 0.0, FRAC_PI_2));

        let mut sigma = RegionAssignment::zeros(1, 2);
        sigma.set(RegionVar::theta(0, 1), true);
        assert!(close(sigma.box_of(0).theta, FRAC_PI_2, PI));
    }

    #[test]
    fn prefix_extremes() {
        let mut sigma = RegionAssignment::zeros(2, 3);
        sigma.set(RegionVar::phi(1, 2), true);
        sigma.set(RegionVar::theta(1, 1), true);
        assert_eq!(sigma.prefix_box(1, 0, 0), AngleBox::full());
        assert_eq!(sigma.prefix_box(1, 3, 2), sigma.box_of(1));
    }

    #[test]
    fn boxes_cover_the_sphere() {
        // enumerate all 2^(2D-1) boxes of one qubit at D = 3 and check that a
        // fine grid of angle pairs is covered
        let depth = 3;
        let nvars = vars_per_qubit(depth);
        let boxes: Vec<AngleBox> = (0..1u32 << nvars)
            .map(|mask| {
                let bits = (0..nvars).map(|i| mask >> i & 1 == 1).collect();
                RegionAssignment::from_bits(1, depth, bits).box_of(0)
            })
            .collect();
        let total: f64 = boxes.iter().map(|b| b.theta.width() * b.phi.width()).sum();
        assert!((total - PI * TAU).abs() < 1e-12);
        for i in 0..=200 {
            for j in 0..=200 {
                let theta = PI * i as f64 / 200.0;
                let phi = TAU * j as f64 / 200.0;
                assert!(boxes.iter().any(|b| b.theta.contains(theta) && b.phi.contains(phi)));
            }
        }
    }

    #[test]
    fn variable_count_and_indexing() {
        for depth in 1..6 {
            let n = 3;
            let sigma = RegionAssignment::zeros(n, depth);
            assert_eq!(sigma.num_vars(), n * (2 * depth as usize - 1));
            for i in 0..sigma.num_vars() {
                let v = RegionVar::from_index(i, depth);
                assert!(v.is_valid(depth));
                assert_eq!(v.index(depth), i);
            }
        }
    }

    proptest! {
        #[test]
        fn intervals_tile(len in 0usize..10) {
            let mut ivs: Vec<Interval> = (0..1u32 << len)
                .map(|m| interval_of(&(0..len).map(|i| m >> (len - 1 - i) & 1 == 1).collect::<Vec<_>>()))
                .collect();
            ivs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
            prop_assert_eq!(ivs[0].lo, 0.0);
            prop_assert_eq!(ivs.last().unwrap().hi, TAU);
            for w in ivs.windows(2) {
                prop_assert_eq!(w[0].hi, w[1].lo);
            }
        }

        #[test]
        fn appending_halves(bits in proptest::collection::vec(any::<bool>(), 0..20), next: bool) {
            let parent = interval_of(&bits);
            let mut longer = bits.clone();
            longer.push(next);
            let child = interval_of(&longer);
            prop_assert!(child.is_subset_of(&parent));
            prop_assert!((child.width() - parent.width() / 2.0).abs() <= 1e-15);
        }

        #[test]
        fn prefixes_nest(
            seed_bits in proptest::collection::vec(any::<bool>(), 9),
            a_phi in 0u32..=5, b_phi in 0u32..=5, a_th in 0u32..5, b_th in 0u32..5,
        ) {
            let sigma = RegionAssignment::from_bits(1, 5, seed_bits);
            let (lo_phi, hi_phi) = (a_phi.min(b_phi), a_phi.max(b_phi));
            let (lo_th, hi_th) = (a_th.min(b_th), a_th.max(b_th));
            let wide = sigma.prefix_box(0, lo_phi, lo_th);
            let narrow = sigma.prefix_box(0, hi_phi, hi_th);
            prop_assert!(narrow.is_subset_of(&wide));
        }
    }
}
