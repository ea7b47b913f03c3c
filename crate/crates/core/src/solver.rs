//! The refutation loop.
//!
//! A SAT backend proposes a total region assignment; the theory solver checks
//! every constraint on the induced angle boxes. Refuted constraints are
//! generalised into blocking clauses and handed back to the backend. The loop
//! ends with UN-PRODSAT when the clause set becomes unsatisfiable, or with
//! MAYBE as soon as some assignment survives every constraint.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bloch::{vars_per_qubit, RegionAssignment, MAX_DEPTH};
use crate::geometry::{DEFAULT_EPS, DEFAULT_PRECISION_FACTOR};
use crate::instance::QsatInstance;
use crate::learning::{generalise, BlockingClause, LearningError};
use crate::sat::{BackendError, Cdcl, SatBackend, SatResult};
use crate::theory::{check_constraint, TheoryError, TheoryVerdict};

/// Default search depth.
pub const DEFAULT_DEPTH: u32 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub depth: u32,
    pub precision_factor: u32,
    pub eps: f64,
    /// Energy threshold `E0`; enables SAT-CERTIFIED answers.
    pub e0: Option<f64>,
    pub max_iterations: Option<u64>,
    pub timeout: Option<Duration>,
    /// Reuse the previous verdict of a constraint whose support bits did not change.
    pub incremental_recheck: bool,
    /// Seed for a random initial assignment; all-zero when `None`.
    pub initial_seed: Option<u64>,
    /// Fail with [`SolveError::RepeatedAssignment`] if an assignment recurs.
    pub check_progress: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            depth: DEFAULT_DEPTH,
            precision_factor: DEFAULT_PRECISION_FACTOR,
            eps: DEFAULT_EPS,
            e0: None,
            max_iterations: None,
            timeout: None,
            incremental_recheck: false,
            initial_seed: None,
            check_progress: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunMetrics {
    pub blocking_clauses: u64,
    pub theory_calls: u64,
    pub sat_solver_learnt: Option<u64>,
    pub iterations: u64,
    pub wall_time: Duration,
}

impl fmt::Display for RunMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "blocking_clauses {}", self.blocking_clauses)?;
        writeln!(f, "theory_calls {}", self.theory_calls)?;
        match self.sat_solver_learnt {
            Some(n) => writeln!(f, "sat_solver_learnt {n}")?,
            None => writeln!(f, "sat_solver_learnt n/a")?,
        }
        writeln!(f, "iterations {}", self.iterations)?;
        write!(f, "wall_time_ms {:.3}", self.wall_time.as_secs_f64() * 1e3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// No satisfying product state exists.
    UnProdsat,
    /// Some region survived every constraint. `area` and `rho` are the sums
    /// over constraints of the covering polygons' areas and max squared moduli.
    Maybe { area: f64, rho: f64 },
    /// A MAYBE answer with `rho < E0` under the energy-gap hypothesis.
    SatCertified { area: f64, rho: f64 },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::UnProdsat => write!(f, "UN-PRODSAT"),
            Verdict::Maybe { area, rho } => write!(f, "MAYBE A={area:e} RHO={rho:e}"),
            Verdict::SatCertified { .. } => write!(f, "SAT-CERTIFIED"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub metrics: RunMetrics,
    /// The surviving assignment for MAYBE and SAT-CERTIFIED answers.
    pub witness: Option<RegionAssignment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limit {
    Iterations(u64),
    Timeout(Duration),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("resource limit reached ({limit:?}) after {} iterations; no verdict", metrics.iterations)]
    ResourceLimitExceeded { limit: Limit, metrics: RunMetrics },
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Learning(#[from] LearningError),
    #[error("total assignment repeated at iteration {iteration}")]
    RepeatedAssignment { iteration: u64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// True iff `rho_sum < e0`, strictly and without tolerance.
pub fn certify_energy(rho_sum: f64, e0: f64) -> bool {
    rho_sum < e0
}

/// Fills a backend model into a total assignment, defaulting unassigned or
/// missing variables to `false`.
pub fn complete_assignment(model: &[Option<bool>], qubits: usize, depth: u32) -> RegionAssignment {
    let bits = (0..qubits * vars_per_qubit(depth)).map(|i| model.get(i).copied().flatten().unwrap_or(false)).collect();
    RegionAssignment::from_bits(qubits, depth, bits)
}

/// Solves with the built-in CDCL backend.
pub fn solve(instance: &QsatInstance, config: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    solve_with_backend(instance, config, &mut Cdcl::new())
}

/// Solves with a caller-supplied backend, which should start empty.
pub fn solve_with_backend<B: SatBackend + ?Sized>(
    instance: &QsatInstance,
    config: &SolverConfig,
    backend: &mut B,
) -> Result<SolveOutcome, SolveError> {
    Search::new(instance, config, backend)?.run()
}

struct Search<'a, B: SatBackend + ?Sized> {
    instance: &'a QsatInstance,
    config: &'a SolverConfig,
    backend: &'a mut B,
    metrics: RunMetrics,
    start: Instant,
    clause_keys: HashSet<Vec<i32>>,
    visited: HashSet<Vec<bool>>,
    cache: Vec<Option<(Vec<bool>, TheoryVerdict)>>,
}

impl<'a, B: SatBackend + ?Sized> Search<'a, B> {
    fn new(instance: &'a QsatInstance, config: &'a SolverConfig, backend: &'a mut B) -> Result<Self, SolveError> {
        if !(1..=MAX_DEPTH).contains(&config.depth) {
            return Err(SolveError::Config(format!("depth must be in 1..={MAX_DEPTH}")));
        }
        if config.precision_factor == 0 {
            return Err(SolveError::Config("precision factor must be at least 1".into()));
        }
        if config.eps.is_nan() || config.eps < 0.0 {
            return Err(SolveError::Config("eps must be non-negative".into()));
        }
        if let Some(e0) = config.e0 {
            if e0.is_nan() || e0 <= 0.0 {
                return Err(SolveError::Config("E0 must be positive".into()));
            }
        }
        backend.reserve_vars(instance.n * vars_per_qubit(config.depth));
        Ok(Search {
            instance,
            config,
            backend,
            metrics: RunMetrics::default(),
            start: Instant::now(),
            clause_keys: HashSet::new(),
            visited: HashSet::new(),
            cache: vec![None; instance.m()],
        })
    }

    fn initial_assignment(&self) -> RegionAssignment {
        let (n, depth) = (self.instance.n, self.config.depth);
        match self.config.initial_seed {
            None => RegionAssignment::zeros(n, depth),
            Some(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let bits = (0..n * vars_per_qubit(depth)).map(|_| rng.gen()).collect();
                RegionAssignment::from_bits(n, depth, bits)
            }
        }
    }

    fn check_limits(&mut self) -> Result<(), SolveError> {
        self.metrics.wall_time = self.start.elapsed();
        if let Some(max) = self.config.max_iterations {
            if self.metrics.iterations >= max {
                return Err(self.limit_error(Limit::Iterations(max)));
            }
        }
        if let Some(t) = self.config.timeout {
            if self.metrics.wall_time >= t {
                return Err(self.limit_error(Limit::Timeout(t)));
            }
        }
        Ok(())
    }

    fn limit_error(&self, limit: Limit) -> SolveError {
        let mut metrics = self.metrics;
        metrics.sat_solver_learnt = self.backend.learnt_clauses();
        SolveError::ResourceLimitExceeded { limit, metrics }
    }

    fn verdict(&mut self, index: usize, sigma: &RegionAssignment) -> Result<TheoryVerdict, SolveError> {
        let c = &self.instance.constraints[index];
        let key: Option<Vec<bool>> = self
            .config
            .incremental_recheck
            .then(|| c.support.iter().flat_map(|&q| sigma.qubit_bits(q).iter().copied()).collect());
        if let (Some(key), Some((old, verdict))) = (&key, &self.cache[index]) {
            if key == old {
                return Ok(*verdict);
            }
        }
        let boxes: Vec<_> = c.support.iter().map(|&q| sigma.box_of(q)).collect();
        self.metrics.theory_calls += 1;
        let verdict = check_constraint(c, &boxes, self.config.precision_factor, self.config.eps)?;
        if let Some(key) = key {
            self.cache[index] = Some((key, verdict));
        }
        Ok(verdict)
    }

    fn finish(&mut self, verdict: Verdict, witness: Option<RegionAssignment>) -> SolveOutcome {
        self.metrics.wall_time = self.start.elapsed();
        self.metrics.sat_solver_learnt = self.backend.learnt_clauses();
        SolveOutcome { verdict, metrics: self.metrics, witness }
    }

    fn run(mut self) -> Result<SolveOutcome, SolveError> {
        let depth = self.config.depth;
        let mut sigma = self.initial_assignment();
        loop {
            self.check_limits()?;
            self.metrics.iterations += 1;
            if self.config.check_progress && !self.visited.insert(sigma.bits().to_vec()) {
                return Err(SolveError::RepeatedAssignment { iteration: self.metrics.iterations });
            }

            let mut refuted = Vec::new();
            let (mut area, mut rho) = (0.0, 0.0);
            for j in 0..self.instance.m() {
                match self.verdict(j, &sigma)? {
                    TheoryVerdict::UnProdsat => refuted.push(j),
                    TheoryVerdict::Maybe { area: a, max_mod_sq } => {
                        area += a;
                        rho += max_mod_sq;
                    }
                }
            }

            if refuted.is_empty() {
                let verdict = match self.config.e0 {
                    Some(e0) if certify_energy(rho, e0) => Verdict::SatCertified { area, rho },
                    _ => Verdict::Maybe { area, rho },
                };
                return Ok(self.finish(verdict, Some(sigma)));
            }

            for j in refuted {
                let g =
                    generalise(&self.instance.constraints[j], &sigma, self.config.precision_factor, self.config.eps)?;
                self.metrics.theory_calls += g.theory_calls;
                if g.clause.is_empty() {
                    // refuted on the whole sphere for every support qubit
                    self.metrics.blocking_clauses += 1;
                    return Ok(self.finish(Verdict::UnProdsat, None));
                }
                self.add_blocking_clause(&g.clause)?;
            }

            match self.backend.solve()? {
                SatResult::Unsat => return Ok(self.finish(Verdict::UnProdsat, None)),
                SatResult::Sat(model) => {
                    sigma = complete_assignment(&model, self.instance.n, depth);
                }
            }
        }
    }

    fn add_blocking_clause(&mut self, clause: &BlockingClause) -> Result<(), SolveError> {
        let depth = self.config.depth;
        if self.clause_keys.insert(clause.canonical_key(depth)) {
            self.backend.add_clause(&clause.to_dimacs(depth))?;
            self.metrics.blocking_clauses += 1;
        }
        Ok(())
    }
}
