//! Clause generalisation.
//!
//! When the theory solver refutes a constraint on the full-depth box of a
//! total assignment `sigma`, the refutation often survives on a coarser box
//! described by shorter bit prefixes. [`generalise`] greedily shortens the
//! prefixes of every support qubit while the refutation holds and then emits
//! the clause forbidding exactly those prefixes.

use crate::bloch::{RegionAssignment, RegionLiteral, RegionVar};
use crate::instance::Constraint;
use crate::theory::{check_constraint, TheoryError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LearningError {
    #[error("constraint is not refuted on the full-depth box of the assignment")]
    NotRefuted,
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// A disjunction of region literals.
///
/// Clauses produced by [`generalise`] hold, for each support qubit in order,
/// the literals of its `phi` levels `1..=D_j` followed by its `theta` levels
/// `1..=D'_j`. Each literal is the negation of the bit `sigma` gives it, so
/// the clause is false exactly on assignments agreeing with `sigma` on every
/// listed bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockingClause {
    literals: Vec<RegionLiteral>,
}

impl BlockingClause {
    pub fn new(literals: Vec<RegionLiteral>) -> Self {
        BlockingClause { literals }
    }

    pub fn literals(&self) -> &[RegionLiteral] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn to_dimacs(&self, depth: u32) -> Vec<i32> {
        self.literals.iter().map(|l| l.to_dimacs(depth)).collect()
    }

    pub fn is_satisfied_by(&self, sigma: &RegionAssignment) -> bool {
        self.literals.iter().any(|l| l.is_true_under(sigma))
    }

    /// Literal set in canonical order, for deduplication.
    pub fn canonical_key(&self, depth: u32) -> Vec<i32> {
        let mut key = self.to_dimacs(depth);
        key.sort_unstable();
        key.dedup();
        key
    }
}

/// Whether `sigma` falsifies `clause`, i.e. the clause rules `sigma` out.
pub fn clause_excludes(clause: &BlockingClause, sigma: &RegionAssignment) -> bool {
    !clause.is_satisfied_by(sigma)
}

/// Prefix lengths per support qubit, in support order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthVector {
    /// `D_j`, number of `phi` bits kept, in `0..=D`.
    pub phi: Vec<u32>,
    /// `D'_j`, number of `theta` bits kept, in `0..=D-1`.
    pub theta: Vec<u32>,
}

impl DepthVector {
    pub fn full(k: usize, depth: u32) -> Self {
        DepthVector { phi: vec![depth; k], theta: vec![depth - 1; k] }
    }

    pub fn literal_count(&self) -> u32 {
        self.phi.iter().chain(&self.theta).sum()
    }

    pub fn is_within(&self, other: &DepthVector) -> bool {
        self.phi.iter().zip(&other.phi).all(|(a, b)| a <= b) && self.theta.iter().zip(&other.theta).all(|(a, b)| a <= b)
    }
}

/// Result of [`generalise`].
#[derive(Debug, Clone)]
pub struct Generalisation {
    pub clause: BlockingClause,
    pub depths: DepthVector,
    /// Theory-solver calls spent, including the initial full-depth check.
    pub theory_calls: u64,
}

/// Builds the blocking clause for `constraint` and `sigma` at the given prefix depths.
pub fn clause_for_depths(constraint: &Constraint, sigma: &RegionAssignment, depths: &DepthVector) -> BlockingClause {
    let mut literals = Vec::with_capacity(depths.literal_count() as usize);
    for (j, &q) in constraint.support.iter().enumerate() {
        let phi = (1..=depths.phi[j]).map(|l| RegionVar::phi(q, l));
        let theta = (1..=depths.theta[j]).map(|l| RegionVar::theta(q, l));
        for var in phi.chain(theta) {
            literals.push(RegionLiteral { var, positive: !sigma.get(var) });
        }
    }
    BlockingClause::new(literals)
}

/// Runs the theory solver on the prefix boxes of `sigma` given by `depths`.
pub fn refuted_at(
    constraint: &Constraint,
    sigma: &RegionAssignment,
    depths: &DepthVector,
    factor: u32,
    eps: f64,
) -> Result<bool, TheoryError> {
    let boxes: Vec<_> = constraint
        .support
        .iter()
        .enumerate()
        .map(|(j, &q)| sigma.prefix_box(q, depths.phi[j], depths.theta[j]))
        .collect();
    Ok(check_constraint(constraint, &boxes, factor, eps)?.is_refuted())
}

/// Greedy prefix shortening.
///
/// All `2k` depths start at their maximum and are movable. Each round first
/// tries to decrement every movable depth at once. If the refutation fails
/// there, the movable depths are probed one at a time (`phi` before `theta`,
/// support order): a decrement is kept if the refutation survives, otherwise
/// it is undone and that depth is frozen. Depths reaching zero stop moving.
pub fn generalise(
    constraint: &Constraint,
    sigma: &RegionAssignment,
    factor: u32,
    eps: f64,
) -> Result<Generalisation, LearningError> {
    let k = constraint.locality();
    let depth = sigma.depth();
    let mut calls = 0u64;
    let mut test = |d: &DepthVector| -> Result<bool, TheoryError> {
        calls += 1;
        refuted_at(constraint, sigma, d, factor, eps)
    };

    let mut depths = DepthVector::full(k, depth);
    if !test(&depths)? {
        return Err(LearningError::NotRefuted);
    }

    // slot i < k is phi of support qubit i, slot k + i is theta of qubit i
    fn slot(d: &mut DepthVector, i: usize, k: usize) -> &mut u32 {
        if i < k {
            &mut d.phi[i]
        } else {
            &mut d.theta[i - k]
        }
    }

    let mut movable: Vec<bool> = (0..2 * k).map(|i| *slot(&mut depths, i, k) > 0).collect();
    while movable.iter().any(|&m| m) {
        let mut joint = depths.clone();
        for i in (0..2 * k).filter(|&i| movable[i]) {
            *slot(&mut joint, i, k) -= 1;
        }
        if test(&joint)? {
            depths = joint;
        } else {
            for (i, m) in movable.iter_mut().enumerate() {
                if !*m {
                    continue;
                }
                *slot(&mut depths, i, k) -= 1;
                if !test(&depths)? {
                    *slot(&mut depths, i, k) += 1;
                    *m = false;
                }
            }
        }
        for (i, m) in movable.iter_mut().enumerate() {
            if *slot(&mut depths, i, k) == 0 {
                *m = false;
            }
        }
    }

    Ok(Generalisation { clause: clause_for_depths(constraint, sigma, &depths), depths, theory_calls: calls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::vars_per_qubit;
    use crate::geometry::{Complex, DEFAULT_EPS, DEFAULT_PRECISION_FACTOR as F};
    use crate::instance::random_instance;
    use crate::theory::check_constraint;
    use rand::{Rng, SeedableRng};

    fn random_sigma(n: usize, depth: u32, rng: &mut impl Rng) -> RegionAssignment {
        let bits = (0..n * vars_per_qubit(depth)).map(|_| rng.gen()).collect();
        RegionAssignment::from_bits(n, depth, bits)
    }

    fn refuted_full(c: &Constraint, sigma: &RegionAssignment) -> bool {
        let boxes: Vec<_> = c.support.iter().map(|&q| sigma.box_of(q)).collect();
        check_constraint(c, &boxes, F, DEFAULT_EPS).unwrap().is_refuted()
    }

    /// Finds (constraint, sigma) pairs where the full-depth box is refuted.
    fn refuted_pairs(count: usize, depth: u32, seed: u64) -> Vec<(Constraint, RegionAssignment)> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        let mut s = seed;
        while out.len() < count {
            s += 1;
            let inst = random_instance(3, 2, 1, s).unwrap();
            let c = inst.constraints[0].clone();
            for _ in 0..10 {
                let sigma = random_sigma(3, depth, &mut rng);
                if refuted_full(&c, &sigma) {
                    out.push((c.clone(), sigma));
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn clauses_reverify_and_exclude() {
        for (c, sigma) in refuted_pairs(30, 4, 1) {
            let g = generalise(&c, &sigma, F, DEFAULT_EPS).unwrap();
            assert!(g.depths.is_within(&DepthVector::full(2, 4)));
            assert!(refuted_at(&c, &sigma, &g.depths, F, DEFAULT_EPS).unwrap());
            assert!(clause_excludes(&g.clause, &sigma));
            assert_eq!(g.clause.len() as u32, g.depths.literal_count());
            assert!(g.clause.len() <= 2 * (2 * 4 - 1));
            // each depth decremented at most D times, each frozen once
            assert!(g.theory_calls <= 1 + 4 * 4 + 16 * 4);
        }
    }

    #[test]
    fn zero_depths_give_empty_clause() {
        let c = Constraint::new(vec![0], vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
        let sigma = RegionAssignment::zeros(1, 3);
        let clause = clause_for_depths(&c, &sigma, &DepthVector { phi: vec![0], theta: vec![0] });
        assert!(clause.is_empty());
        assert!(clause_excludes(&clause, &sigma));
    }

    #[test]
    fn unrefuted_input_is_rejected() {
        let c = Constraint::new(vec![0], vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]);
        // <1|psi> = sin(theta/2) e^{i phi} vanishes at theta = 0, inside the all-zero box
        let sigma = RegionAssignment::zeros(1, 3);
        assert!(matches!(generalise(&c, &sigma, F, DEFAULT_EPS), Err(LearningError::NotRefuted)));
    }

    #[test]
    fn exclusion_matches_prefix_comparison() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (c, sigma) in refuted_pairs(10, 3, 20) {
            let g = generalise(&c, &sigma, F, DEFAULT_EPS).unwrap();
            for _ in 0..200 {
                let mut other = random_sigma(3, 3, &mut rng);
                // bias toward agreement so both outcomes occur
                for (j, &q) in c.support.iter().enumerate() {
                    if rng.gen_bool(0.7) {
                        for l in 1..=g.depths.phi[j] {
                            other.set(RegionVar::phi(q, l), sigma.get(RegionVar::phi(q, l)));
                        }
                        for l in 1..=g.depths.theta[j] {
                            other.set(RegionVar::theta(q, l), sigma.get(RegionVar::theta(q, l)));
                        }
                    }
                }
                let agrees = c.support.iter().enumerate().all(|(j, &q)| {
                    (1..=g.depths.phi[j]).all(|l| other.get(RegionVar::phi(q, l)) == sigma.get(RegionVar::phi(q, l)))
                        && (1..=g.depths.theta[j])
                            .all(|l| other.get(RegionVar::theta(q, l)) == sigma.get(RegionVar::theta(q, l)))
                });
                assert_eq!(clause_excludes(&g.clause, &other), agrees);
            }
        }
    }

    #[test]
    fn flipping_one_literal_satisfies() {
        for (c, sigma) in refuted_pairs(5, 3, 40) {
            let g = generalise(&c, &sigma, F, DEFAULT_EPS).unwrap();
            for lit in g.clause.literals() {
                let mut other = sigma.clone();
                other.set(lit.var, !sigma.get(lit.var));
                assert!(!clause_excludes(&g.clause, &other));
            }
        }
    }
}
