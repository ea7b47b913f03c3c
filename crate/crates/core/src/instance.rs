//! Quantum k-SAT instances with rank-one projectors.
//!
//! A constraint `|v><v|` on qubits `(s_1, .., s_k)` stores the `2^k`
//! components `<t|v>` for `t` ascending. The most significant bit of `t`
//! belongs to the first support qubit. A product state satisfies the
//! constraint iff `<v|psi_S> = sum_t conj(<t|v>) <t|psi_S>` vanishes.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bloch::{RegionLiteral, RegionVar};
use crate::geometry::Complex;
use crate::learning::BlockingClause;

/// Amplitude vectors whose norm is off by at most this much are rescaled.
pub const NORM_REPAIR_TOLERANCE: f64 = 1e-6;

/// Norm tolerance expected of a validated constraint.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("constraint {constraint}: qubit {qubit} appears twice in the support")]
    DuplicateSupportIndex { constraint: usize, qubit: usize },
    #[error("constraint {constraint}: qubit {qubit} is out of range for {n} qubits")]
    OutOfRangeQubit { constraint: usize, qubit: usize, n: usize },
    #[error("constraint {constraint}: amplitude vector has norm {norm}")]
    NonUnitAmplitude { constraint: usize, norm: f64 },
    #[error("constraint {constraint}: expected locality {expected}, found {found}")]
    LocalityMismatch { constraint: usize, expected: usize, found: usize },
    #[error("constraint {constraint}: expected {expected} amplitudes, found {found}")]
    AmplitudeCount { constraint: usize, expected: usize, found: usize },
    #[error("constraint {constraint}: non-finite amplitude")]
    NonFiniteAmplitude { constraint: usize },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("boolean clause {clause} is not embeddable: {reason}")]
    BadBooleanClause { clause: usize, reason: String },
}

/// Every problem found by [`QsatInstance::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationErrors(pub Vec<InstanceError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

/// A rank-one projector `|v><v|` acting on the qubits in `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub support: Vec<usize>,
    pub amplitudes: Vec<Complex>,
}

impl Constraint {
    pub fn new(support: Vec<usize>, amplitudes: Vec<Complex>) -> Self {
        Constraint { support, amplitudes }
    }

    pub fn locality(&self) -> usize {
        self.support.len()
    }

    /// `<v|t>`, the coefficient of basis state `t` in `<v|psi>`.
    pub fn bra(&self, t: usize) -> Complex {
        self.amplitudes[t].conj()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<v|psi>` for the product state whose factor on the `j`-th support
    /// qubit is `(a0_j, a1_j) = states[j]`.
    pub fn overlap(&self, states: &[(Complex, Complex)]) -> Complex {
        let k = self.support.len();
        debug_assert_eq!(states.len(), k);
        (0..self.amplitudes.len())
            .map(|t| {
                let prod: Complex = (0..k)
                    .map(|j| {
                        let bit = (t >> (k - 1 - j)) & 1;
                        if bit == 1 {
                            states[j].1
                        } else {
                            states[j].0
                        }
                    })
                    .product();
                self.bra(t) * prod
            })
            .sum()
    }
}

/// Single-qubit state `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
pub fn bloch_state(theta: f64, phi: f64) -> (Complex, Complex) {
    let (s, c) = (0.5 * theta).sin_cos();
    (Complex::new(c, 0.0), Complex::from_polar(s, phi))
}

/// `n` qubits and `m` rank-one `k`-local constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct QsatInstance {
    pub n: usize,
    pub k: usize,
    pub constraints: Vec<Constraint>,
}

impl QsatInstance {
    pub fn new(n: usize, k: usize, constraints: Vec<Constraint>) -> Self {
        QsatInstance { n, k, constraints }
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    /// Checks supports, locality and amplitude norms. Vectors whose norm is
    /// within [`NORM_REPAIR_TOLERANCE`] of one are rescaled in the returned copy.
    pub fn validate(&self) -> Result<QsatInstance, ValidationErrors> {
        let mut errors = Vec::new();
        let mut fixed = self.clone();
        for (ci, c) in fixed.constraints.iter_mut().enumerate() {
            if c.support.len() != self.k {
                errors.push(InstanceError::LocalityMismatch {
                    constraint: ci,
                    expected: self.k,
                    found: c.support.len(),
                });
            }
            let mut seen = HashSet::new();
            for &q in &c.support {
                if q >= self.n {
                    errors.push(InstanceError::OutOfRangeQubit { constraint: ci, qubit: q, n: self.n });
                }
                if !seen.insert(q) {
                    errors.push(InstanceError::DuplicateSupportIndex { constraint: ci, qubit: q });
                }
            }
            let expected = 1usize << c.support.len().min(30);
            if c.amplitudes.len() != expected {
                errors.push(InstanceError::AmplitudeCount { constraint: ci, expected, found: c.amplitudes.len() });
                continue;
            }
            if c.amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
                errors.push(InstanceError::NonFiniteAmplitude { constraint: ci });
                continue;
            }
            let norm = c.norm();
            if (norm - 1.0).abs() > NORM_REPAIR_TOLERANCE {
                errors.push(InstanceError::NonUnitAmplitude { constraint: ci, norm });
            } else if (norm - 1.0).abs() > 0.0 {
                for a in &mut c.amplitudes {
                    *a /= norm;
                }
            }
        }
        if errors.is_empty() {
            Ok(fixed)
        } else {
            Err(ValidationErrors(errors))
        }
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            n: self.n,
            k: self.k,
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintFile {
                    support: c.support.clone(),
                    amplitudes: c.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("instance serialization");
        out.push('\n');
        out
    }

    /// Parses the JSON instance format. Only syntax and shape are checked;
    /// call [`QsatInstance::validate`] for the semantic checks.
    pub fn from_json(text: &str) -> Result<QsatInstance, InstanceError> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Ok(QsatInstance {
            n: file.n,
            k: file.k,
            constraints: file
                .constraints
                .into_iter()
                .map(|c| Constraint {
                    support: c.support,
                    amplitudes: c.amplitudes.into_iter().map(|[re, im]| Complex::new(re, im)).collect(),
                })
                .collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    k: usize,
    constraints: Vec<ConstraintFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintFile {
    support: Vec<usize>,
    amplitudes: Vec<[f64; 2]>,
}

/// Random instance: each support is a uniformly drawn `k`-subset of the qubits
/// (sorted ascending) and each `|v>` is Haar-random, drawn as a normalized
/// vector of i.i.d. complex Gaussians.
///
/// The generator is ChaCha8 seeded through `seed_from_u64(seed)`, so output is
/// stable across platforms and releases of this crate.
pub fn random_instance(n: usize, k: usize, m: usize, seed: u64) -> Result<QsatInstance, InstanceError> {
    if k == 0 || k > n {
        return Err(InstanceError::Parameters(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    if m == 0 {
        return Err(InstanceError::Parameters("need at least one constraint".into()));
    }
    if k > 20 {
        return Err(InstanceError::Parameters(format!("locality {k} is too large")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let constraints = (0..m)
        .map(|_| {
            let mut support = sample(&mut rng, n, k).into_vec();
            support.sort_unstable();
            Constraint::new(support, haar_vector(&mut rng, 1 << k))
        })
        .collect();
    Ok(QsatInstance::new(n, k, constraints))
}

fn haar_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex> {
    loop {
        let v: Vec<Complex> =
            (0..dim).map(|_| Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// A clause of Boolean k-SAT; `(x, true)` is `x`, `(x, false)` is `not x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolClause {
    pub literals: Vec<(usize, bool)>,
}

impl BoolClause {
    pub fn new(literals: Vec<(usize, bool)>) -> Self {
        BoolClause { literals }
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.literals.iter().any(|&(x, pol)| assignment[x] == pol)
    }
}

/// Rewrites Boolean k-clauses over `n` variables as blocking clauses, mapping
/// `x_i` to the first `phi` bit of qubit `i`. Each result has the blocking
/// shape with one `phi` level and no `theta` levels per qubit.
pub fn embed_boolean_ksat(clauses: &[BoolClause], n: usize, k: usize) -> Result<Vec<BlockingClause>, InstanceError> {
    clauses
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            if c.literals.is_empty() || c.literals.len() > k {
                return Err(InstanceError::BadBooleanClause {
                    clause: ci,
                    reason: format!("has {} literals, limit is {k}", c.literals.len()),
                });
            }
            let mut seen = HashSet::new();
            let mut literals = Vec::with_capacity(c.literals.len());
            for &(x, positive) in &c.literals {
                if x >= n {
                    return Err(InstanceError::BadBooleanClause {
                        clause: ci,
                        reason: format!("variable {x} out of range for {n} variables"),
                    });
                }
                if !seen.insert(x) {
                    return Err(InstanceError::BadBooleanClause {
                        clause: ci,
                        reason: format!("variable {x} repeated"),
                    });
                }
                literals.push(RegionLiteral { var: RegionVar::phi(x, 1), positive });
            }
            Ok(BlockingClause::new(literals))
        })
        .collect()
}
