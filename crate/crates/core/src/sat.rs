//! Incremental SAT backend interface and a small built-in CDCL solver.
//!
//! Literals cross the interface in DIMACS convention: variable `v >= 1` is
//! the literal `v` and its negation is `-v`. Clauses persist across `solve`
//! calls, and so do learnt clauses.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    #[error("literal 0 is not a valid DIMACS literal")]
    ZeroLiteral,
    #[error("backend failure: {0}")]
    Other(String),
}

/// Answer of [`SatBackend::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// A model; entry `i` is the value of variable `i + 1`, `None` if unassigned.
    Sat(Vec<Option<bool>>),
    Unsat,
}

/// An incremental SAT solver.
pub trait SatBackend {
    fn add_clause(&mut self, lits: &[i32]) -> Result<(), BackendError>;

    fn solve(&mut self) -> Result<SatResult, BackendError>;

    /// Declares that variables `1..=n` exist even if no clause mentions them.
    fn reserve_vars(&mut self, n: usize);

    /// Learnt clauses currently kept, when the backend tracks them.
    fn learnt_clauses(&self) -> Option<u64> {
        None
    }

    fn name(&self) -> &'static str;
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Lit(u32);

impl Lit {
    fn from_dimacs(l: i32) -> Self {
        let v = l.unsigned_abs() - 1;
        Lit(2 * v + u32::from(l < 0))
    }
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }
    fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }
    fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }
    fn idx(self) -> usize {
        self.0 as usize
    }
}

const UNDEF: i8 = -1;
const NO_REASON: u32 = u32::MAX;

#[derive(Debug)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
    lbd: u32,
}

#[derive(Clone, Copy)]
struct Watcher {
    clause: u32,
    blocker: Lit,
}

#[derive(PartialEq)]
struct HeapEntry {
    activity: f64,
    var: usize,
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.activity.total_cmp(&other.activity).then_with(|| other.var.cmp(&self.var))
    }
}

/// Counters exposed by [`Cdcl`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CdclStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_total: u64,
}

/// Conflict-driven clause learning with two watched literals, first-UIP
/// learning, VSIDS branching, phase saving, Luby restarts and periodic
/// deletion of low-quality learnt clauses.
///
/// Decisions default to the negative phase, so fresh variables come out
/// `false`.
pub struct Cdcl {
    clauses: Vec<ClauseData>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    phase: Vec<bool>,
    activity: Vec<f64>,
    heap: BinaryHeap<HeapEntry>,
    seen: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    var_inc: f64,
    cla_inc: f64,
    ok: bool,
    num_learnts: usize,
    max_learnts: f64,
    stats: CdclStats,
}

impl Default for Cdcl {
    fn default() -> Self {
        Self::new()
    }
}

impl Cdcl {
    pub fn new() -> Self {
        Cdcl {
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            phase: Vec::new(),
            activity: Vec::new(),
            heap: BinaryHeap::new(),
            seen: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            var_inc: 1.0,
            cla_inc: 1.0,
            ok: true,
            num_learnts: 0,
            max_learnts: 2000.0,
            stats: CdclStats::default(),
        }
    }

    pub fn stats(&self) -> CdclStats {
        self.stats
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    fn ensure_var(&mut self, v: usize) {
        while self.assigns.len() <= v {
            let var = self.assigns.len();
            self.assigns.push(UNDEF);
            self.level.push(0);
            self.reason.push(NO_REASON);
            self.phase.push(false);
            self.activity.push(0.0);
            self.seen.push(false);
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
            self.heap.push(HeapEntry { activity: 0.0, var });
        }
    }

    fn value(&self, l: Lit) -> i8 {
        let a = self.assigns[l.var()];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ i8::from(l.is_neg())
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var();
        self.assigns[v] = i8::from(!l.is_neg());
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var();
            self.phase[v] = !l.is_neg();
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.heap.push(HeapEntry { activity: self.activity[v], var: v });
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn attach(&mut self, cref: u32) {
        let c = &self.clauses[cref as usize];
        let (a, b) = (c.lits[0], c.lits[1]);
        self.watches[a.negate().idx()].push(Watcher { clause: cref, blocker: b });
        self.watches[b.negate().idx()].push(Watcher { clause: cref, blocker: a });
    }

    /// Unit propagation; returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p.negate();
            let mut ws = std::mem::take(&mut self.watches[p.idx()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.clause as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == 1 {
                    ws[j] = Watcher { clause: w.clause, blocker: first };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != 0 {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l.negate().idx()].push(Watcher { clause: w.clause, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher { clause: w.clause, blocker: first };
                j += 1;
                if self.value(first) == 0 {
                    conflict = Some(w.clause);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.clause);
                }
            }
            ws.truncate(j);
            // watchers pushed onto this list during the scan must be kept
            let mut added = std::mem::replace(&mut self.watches[p.idx()], ws);
            self.watches[p.idx()].append(&mut added);
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
            let entries: Vec<HeapEntry> = (0..self.assigns.len())
                .filter(|&u| self.assigns[u] == UNDEF)
                .map(|u| HeapEntry { activity: self.activity[u], var: u })
                .collect();
            self.heap = entries.into_iter().collect();
        }
        if self.assigns[v] == UNDEF {
            self.heap.push(HeapEntry { activity: self.activity[v], var: v });
        }
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut counter = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let start = usize::from(p.is_some());
            let lits = self.clauses[confl as usize].lits.clone();
            for &q in &lits[start..] {
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            confl = self.reason[lit.var()];
            self.seen[lit.var()] = false;
            counter -= 1;
            if counter == 0 {
                break;
            }
        }
        learnt[0] = p.expect("conflict analysis found no UIP").negate();

        // drop literals implied by the rest of the clause through their reasons
        let keep: Vec<bool> = learnt.iter().enumerate().map(|(i, &l)| i == 0 || !self.locally_redundant(l)).collect();
        for &l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let mut learnt: Vec<Lit> = learnt.into_iter().zip(keep).filter(|&(_, k)| k).map(|(l, _)| l).collect();

        let mut bt = 0;
        if learnt.len() > 1 {
            let max_i = (1..learnt.len()).max_by_key(|&i| self.level[learnt[i].var()]).unwrap();
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var()];
        }
        (learnt, bt)
    }

    fn locally_redundant(&self, l: Lit) -> bool {
        let r = self.reason[l.var()];
        if r == NO_REASON {
            return false;
        }
        self.clauses[r as usize].lits[1..].iter().all(|q| self.seen[q.var()] || self.level[q.var()] == 0)
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(HeapEntry { activity, var }) = self.heap.pop() {
            // skip assigned variables and entries superseded by a later bump
            if self.assigns[var] != UNDEF || activity != self.activity[var] {
                continue;
            }
            let pos = self.phase[var];
            return Some(Lit(2 * var as u32 + u32::from(!pos)));
        }
        None
    }

    fn reduce_db(&mut self) {
        let mut learnts: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted && cl.lits.len() > 2 && cl.lbd > 2
            })
            .collect();
        learnts.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.total_cmp(&cb.activity))
        });
        let remove = learnts.len() / 2;
        for &c in &learnts[..remove] {
            if self.is_locked(c) {
                continue;
            }
            self.clauses[c as usize].deleted = true;
            self.clauses[c as usize].lits = Vec::new();
            self.num_learnts -= 1;
        }
        for ws in &mut self.watches {
            let clauses = &self.clauses;
            ws.retain(|w| !clauses[w.clause as usize].deleted);
        }
    }

    fn is_locked(&self, cref: u32) -> bool {
        let c = &self.clauses[cref as usize];
        let l = c.lits[0];
        self.value(l) == 1 && self.reason[l.var()] == cref
    }

    fn luby(mut x: u64) -> u64 {
        let (mut size, mut seq) = (1u64, 0u32);
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) >> 1;
            seq -= 1;
            x %= size;
        }
        1u64 << seq
    }

    /// Adds a problem clause of two or more literals while the trail may be
    /// non-empty, backtracking just far enough to keep the watch invariant:
    /// an all-false clause becomes unit (or open) again, a clause that is
    /// unit under the trail propagates at its proper level.
    fn attach_new(&mut self, mut ls: Vec<Lit>) {
        // non-false literals first, then false ones by decreasing level
        ls.sort_by_key(|&l| match self.value(l) {
            0 => (1, std::cmp::Reverse(self.level[l.var()])),
            _ => (0, std::cmp::Reverse(0)),
        });
        let (a, b) = (ls[0], ls[1]);
        let mut imply = None;
        if self.value(b) == 0 {
            let lb = self.level[b.var()];
            match self.value(a) {
                0 if self.level[a.var()] > lb => {
                    self.cancel_until(lb);
                    imply = Some(a);
                }
                0 => self.cancel_until(lb - 1),
                UNDEF => {
                    self.cancel_until(lb);
                    imply = Some(a);
                }
                _ => {}
            }
        }
        let cref = self.clauses.len() as u32;
        self.clauses.push(ClauseData { lits: ls, learnt: false, deleted: false, activity: 0.0, lbd: 0 });
        self.attach(cref);
        if let Some(a) = imply {
            self.enqueue(a, cref);
        }
    }

    fn search(&mut self, budget: u64) -> Option<bool> {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(false);
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let lbd = self.lbd(&learnt);
                    let cref = self.clauses.len() as u32;
                    let asserting = learnt[0];
                    self.clauses.push(ClauseData { lits: learnt, learnt: true, deleted: false, activity: 0.0, lbd });
                    self.attach(cref);
                    self.bump_clause(cref);
                    self.num_learnts += 1;
                    self.enqueue(asserting, cref);
                }
                self.stats.learnt_total += 1;
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;
            } else {
                if conflicts >= budget {
                    self.cancel_until(0);
                    return None;
                }
                if self.num_learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                match self.pick_branch() {
                    None => return Some(true),
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }
}

impl SatBackend for Cdcl {
    fn add_clause(&mut self, lits: &[i32]) -> Result<(), BackendError> {
        if lits.contains(&0) {
            return Err(BackendError::ZeroLiteral);
        }
        if !self.ok {
            return Ok(());
        }
        let mut ls: Vec<Lit> = lits.iter().map(|&l| Lit::from_dimacs(l)).collect();
        if let Some(max) = ls.iter().map(|l| l.var()).max() {
            self.ensure_var(max);
        }
        ls.sort_unstable_by_key(|l| l.0);
        ls.dedup();
        let root = |s: &Self, l: Lit| s.level[l.var()] == 0 && s.value(l) != UNDEF;
        // tautology or already satisfied at the root
        if ls.windows(2).any(|w| w[0].var() == w[1].var()) || ls.iter().any(|&l| root(self, l) && self.value(l) == 1) {
            return Ok(());
        }
        ls.retain(|&l| !root(self, l));
        match ls.len() {
            0 => self.ok = false,
            1 => {
                self.cancel_until(0);
                self.enqueue(ls[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => self.attach_new(ls),
        }
        Ok(())
    }

    fn solve(&mut self) -> Result<SatResult, BackendError> {
        if !self.ok {
            return Ok(SatResult::Unsat);
        }
        let mut round = 0u64;
        loop {
            let budget = 100 * Self::luby(round);
            match self.search(budget) {
                Some(true) => {
                    // the trail is kept so the next call resumes from it
                    let model = self.assigns.iter().map(|&a| (a != UNDEF).then_some(a == 1)).collect();
                    return Ok(SatResult::Sat(model));
                }
                Some(false) => return Ok(SatResult::Unsat),
                None => {
                    self.stats.restarts += 1;
                    round += 1;
                }
            }
        }
    }

    fn reserve_vars(&mut self, n: usize) {
        if n > 0 {
            self.ensure_var(n - 1);
        }
    }

    fn learnt_clauses(&self) -> Option<u64> {
        Some(self.num_learnts as u64)
    }

    fn name(&self) -> &'static str {
        "cdcl"
    }
}
