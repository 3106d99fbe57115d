//! One-pass drivers: the sampling meta-algorithm and the one-literal branch.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cnf::{Assignment, Clause, ClauseKind, ClauseUniverse, CnfError, LiveClauseSet, Op, StreamEvent, StreamMode};
use crate::cnf::DuplicatePolicy;
use crate::samplers::{L0SampleSet, Reservoir};
use crate::space::{clause_words, SpaceMeter, SpaceReport};

use super::rounding::{perturbed_optimum, rounded_lp};
use super::{evaluate, is_large, MaxSatConfig, MaxSatError, PostProcess};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    /// Every live small clause was kept.
    Exact,
    Reservoir,
    L0,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub clauses: Vec<Clause>,
    pub source: SampleSource,
    /// Distinct clauses actually obtained; may fall short of the target in
    /// dynamic mode when samplers fail or collide.
    pub achieved: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Sampling meta-algorithm.
    Meta,
    /// Few unit clauses: best of Q fair-coin assignments on the rest.
    FairCoin,
    /// Many unit clauses: the whole (short) instance was stored and LP-rounded.
    StoredLp,
}

#[derive(Clone, Debug)]
pub struct MaxSatOutcome {
    pub assignment: Assignment,
    pub satisfied_on_sample: usize,
    pub sample: SampleSet,
    /// Satisfied-on-sample rescaled to the small clauses, plus every dropped
    /// large clause (those are satisfied only with high probability).
    pub estimate: f64,
    /// The same estimate without the large clauses.
    pub estimate_conservative: f64,
    pub small_clauses: u64,
    pub large_clauses: u64,
    pub branch: Branch,
    pub space: SpaceReport,
}

const COUNTER_WORDS: u64 = 3;

enum Sampler {
    Reservoir(Reservoir<Clause>),
    Turnstile {
        universe: ClauseUniverse,
        set: L0SampleSet,
        /// Exact live small clauses while there have never been more than `s`.
        shadow: Option<BTreeSet<Clause>>,
    },
    /// `beta = 1`: no clause is small.
    Nothing,
}

/// Incremental form of [`stream_maxsat`].
pub struct MaxSatStream {
    cfg: MaxSatConfig,
    sampler: Sampler,
    small_live: u64,
    large_live: u64,
    validator: Option<LiveClauseSet>,
    meter: SpaceMeter,
}

impl MaxSatStream {
    pub fn new<R: Rng + ?Sized>(cfg: MaxSatConfig, rng: &mut R) -> Result<Self, MaxSatError> {
        cfg.validate()?;
        let mut meter = SpaceMeter::new();
        meter.set("counters", COUNTER_WORDS);
        let sampler = if cfg.beta <= 1 {
            Sampler::Nothing
        } else {
            match cfg.stream_kind {
                StreamMode::Static => Sampler::Reservoir(Reservoir::new(cfg.sample_size, rng.gen())),
                StreamMode::Dynamic => {
                    let universe = ClauseUniverse::new(cfg.params.n, cfg.beta - 1)?;
                    let set = L0SampleSet::new(universe.size(), cfg.sample_size, cfg.l0_delta, rng.gen())?;
                    meter.set("l0", set.words());
                    Sampler::Turnstile { universe, set, shadow: Some(BTreeSet::new()) }
                }
            }
        };
        let validator = match cfg.stream_kind {
            StreamMode::Dynamic if cfg.validate => Some(LiveClauseSet::new()),
            _ => None,
        };
        let s = MaxSatStream { cfg, sampler, small_live: 0, large_live: 0, validator, meter };
        s.check_budget()?;
        Ok(s)
    }

    pub fn config(&self) -> &MaxSatConfig {
        &self.cfg
    }

    fn check_budget(&self) -> Result<(), MaxSatError> {
        match self.cfg.budget_words {
            Some(budget) if self.meter.peak() > budget => {
                Err(MaxSatError::SpaceBudgetExceeded { used: self.meter.peak(), budget })
            }
            _ => Ok(()),
        }
    }

    pub fn push(&mut self, ev: &StreamEvent) -> Result<(), MaxSatError> {
        let c = &ev.clause;
        if c.kind() != ClauseKind::Disjunctive {
            return Err(MaxSatError::Config("Max-SAT streams carry disjunctive clauses".into()));
        }
        c.check_vars(self.cfg.params.n)?;
        if ev.op == Op::Delete && self.cfg.stream_kind == StreamMode::Static {
            return Err(CnfError::DeleteInStaticStream.into());
        }
        if let Some(v) = &mut self.validator {
            v.apply(ev, self.cfg.stream_kind, DuplicatePolicy::Strict)?;
        }
        let sign: i64 = if ev.op == Op::Insert { 1 } else { -1 };
        if is_large(c, self.cfg.beta) {
            self.large_live = (self.large_live as i64 + sign) as u64;
            return Ok(());
        }
        self.small_live = (self.small_live as i64 + sign) as u64;
        let s = self.cfg.sample_size;
        match &mut self.sampler {
            Sampler::Reservoir(r) => {
                let added = clause_words(c);
                let removed = r.offer(c.clone()).map_or(0, |x| clause_words(&x));
                let cur = self.meter.component("reservoir");
                self.meter.set("reservoir", cur + added - removed);
            }
            Sampler::Turnstile { universe, set, shadow } => {
                set.update(universe.index(c)?, sign)?;
                if let Some(live) = shadow {
                    if sign > 0 {
                        live.insert(c.clone());
                        self.meter.add("shadow", clause_words(c));
                    } else if live.remove(c) {
                        self.meter.sub("shadow", clause_words(c));
                    }
                    if live.len() > s {
                        *shadow = None;
                        self.meter.set("shadow", 0);
                    }
                }
            }
            Sampler::Nothing => {}
        }
        self.check_budget()
    }

    /// The current sample `W` of small clauses.
    pub fn sample(&self) -> SampleSet {
        match &self.sampler {
            Sampler::Reservoir(r) => {
                let source =
                    if self.small_live as usize <= r.capacity() { SampleSource::Exact } else { SampleSource::Reservoir };
                SampleSet { clauses: r.items().to_vec(), source, achieved: r.len() }
            }
            Sampler::Turnstile { universe, set, shadow } => match shadow {
                Some(live) => SampleSet { clauses: live.iter().cloned().collect(), source: SampleSource::Exact, achieved: live.len() },
                None => {
                    let clauses: Vec<Clause> =
                        set.extract_distinct().indices.into_iter().filter_map(|i| universe.decode(i).ok()).collect();
                    SampleSet { achieved: clauses.len(), clauses, source: SampleSource::L0 }
                }
            },
            Sampler::Nothing => SampleSet { clauses: Vec::new(), source: SampleSource::Exact, achieved: 0 },
        }
    }

    pub fn finish<R: Rng + ?Sized>(self, rng: &mut R) -> Result<MaxSatOutcome, MaxSatError> {
        let sample = self.sample();
        let w = &sample.clauses;
        let n = self.cfg.params.n;
        let assignment = match self.cfg.mode {
            PostProcess::ExactPerturb => perturbed_optimum(w, n, self.cfg.params.eps, self.cfg.q, rng)?,
            PostProcess::LpRound => rounded_lp(w, n, self.cfg.q, self.cfg.lp_tol, rng)?,
        };
        let satisfied_on_sample = evaluate(&assignment, w);
        let estimate_conservative = if w.is_empty() {
            0.0
        } else {
            satisfied_on_sample as f64 * self.small_live as f64 / w.len() as f64
        };
        Ok(MaxSatOutcome {
            assignment,
            satisfied_on_sample,
            estimate: estimate_conservative + self.large_live as f64,
            estimate_conservative,
            small_clauses: self.small_live,
            large_clauses: self.large_live,
            branch: Branch::Meta,
            space: self.meter.report(sample.achieved as u64, self.large_live),
            sample,
        })
    }
}

/// Drops large clauses, samples `s` small ones (reservoir for insertion-only
/// streams, L0 samplers for dynamic ones), then post-processes the sample.
pub fn stream_maxsat<'a, I, R>(events: I, cfg: &MaxSatConfig, rng: &mut R) -> Result<MaxSatOutcome, MaxSatError>
where
    I: IntoIterator<Item = &'a StreamEvent>,
    R: Rng + ?Sized,
{
    let mut st = MaxSatStream::new(cfg.clone(), rng)?;
    for ev in events {
        st.push(ev)?;
    }
    st.finish(rng)
}

/// Incremental form of [`one_literal_branch`].
///
/// Both branches are maintained online. Branch A keeps `q` fair-coin
/// assignments and counts, for each, the satisfied non-unit clauses. Branch B
/// stores every clause of length at most `K ln m` until a word budget of order
/// `(n/ε) log m` is reached; that budget suffices whenever more than an ε
/// fraction of the stream is unit clauses, because at most `2n` distinct unit
/// clauses exist.
pub struct OneLiteralStream {
    cfg: MaxSatConfig,
    trials: Vec<Assignment>,
    nonunit_sat: Vec<u64>,
    total_sat: Vec<u64>,
    units: u64,
    total: u64,
    store: Vec<Clause>,
    store_words: u64,
    store_budget: u64,
    store_max_len: usize,
    overflowed: bool,
    long_dropped: u64,
    validator: Option<LiveClauseSet>,
    meter: SpaceMeter,
}

impl OneLiteralStream {
    /// `ceil(2n/ε) · (2 + floor(K ln m))` words.
    pub fn store_budget(cfg: &MaxSatConfig) -> u64 {
        let p = &cfg.params;
        (2.0 * p.n as f64 / p.eps).ceil() as u64 * (2 + Self::store_max_len(cfg) as u64)
    }

    fn store_max_len(cfg: &MaxSatConfig) -> usize {
        ((cfg.params.k * cfg.params.log_m()).floor() as usize).max(1)
    }

    pub fn new<R: Rng + ?Sized>(cfg: MaxSatConfig, rng: &mut R) -> Result<Self, MaxSatError> {
        cfg.validate()?;
        let n = cfg.params.n;
        let trials: Vec<Assignment> =
            (0..cfg.q).map(|_| Assignment::from_bools((0..n).map(|_| rng.gen()).collect())).collect();
        let mut meter = SpaceMeter::new();
        meter.set("counters", COUNTER_WORDS + 2);
        meter.set("trials", cfg.q as u64 * (n.div_ceil(64) as u64 + 2));
        Ok(OneLiteralStream {
            nonunit_sat: vec![0; trials.len()],
            total_sat: vec![0; trials.len()],
            trials,
            units: 0,
            total: 0,
            store: Vec::new(),
            store_words: 0,
            store_budget: Self::store_budget(&cfg),
            store_max_len: Self::store_max_len(&cfg),
            overflowed: false,
            long_dropped: 0,
            validator: cfg.validate.then(LiveClauseSet::new),
            meter,
            cfg,
        })
    }

    pub fn push(&mut self, ev: &StreamEvent) -> Result<(), MaxSatError> {
        let c = &ev.clause;
        if ev.op == Op::Delete {
            return Err(CnfError::DeleteInStaticStream.into());
        }
        if c.kind() != ClauseKind::Disjunctive {
            return Err(MaxSatError::Config("Max-SAT streams carry disjunctive clauses".into()));
        }
        c.check_vars(self.cfg.params.n)?;
        if let Some(v) = &mut self.validator {
            v.apply(ev, StreamMode::Static, DuplicatePolicy::Strict)?;
        }
        self.total += 1;
        let unit = c.len() == 1;
        if unit {
            self.units += 1;
        }
        for (t, a) in self.trials.iter().enumerate() {
            if c.is_satisfied_by(a) {
                self.total_sat[t] += 1;
                if !unit {
                    self.nonunit_sat[t] += 1;
                }
            }
        }
        if c.len() > self.store_max_len {
            self.long_dropped += 1;
        } else if !self.overflowed {
            let w = clause_words(c);
            if self.store_words + w > self.store_budget {
                self.overflowed = true;
                self.store = Vec::new();
                self.store_words = 0;
            } else {
                self.store.push(c.clone());
                self.store_words += w;
            }
            self.meter.set("store", self.store_words);
        }
        match self.cfg.budget_words {
            Some(budget) if self.meter.peak() > budget => {
                Err(MaxSatError::SpaceBudgetExceeded { used: self.meter.peak(), budget })
            }
            _ => Ok(()),
        }
    }

    pub fn finish<R: Rng + ?Sized>(self, rng: &mut R) -> Result<MaxSatOutcome, MaxSatError> {
        let n = self.cfg.params.n;
        if self.units as f64 > self.cfg.params.eps * self.total as f64 {
            if self.overflowed {
                return Err(MaxSatError::SpaceBudgetExceeded { used: self.store_budget + 1, budget: self.store_budget });
            }
            let assignment = rounded_lp(&self.store, n, self.cfg.q, self.cfg.lp_tol, rng)?;
            let sat = evaluate(&assignment, &self.store);
            let achieved = self.store.len();
            return Ok(MaxSatOutcome {
                assignment,
                satisfied_on_sample: sat,
                sample: SampleSet { clauses: self.store, source: SampleSource::Exact, achieved },
                estimate: (sat as u64 + self.long_dropped) as f64,
                estimate_conservative: sat as f64,
                small_clauses: self.total - self.long_dropped,
                large_clauses: self.long_dropped,
                branch: Branch::StoredLp,
                space: self.meter.report(achieved as u64, self.long_dropped),
            });
        }
        let mut best = 0;
        for t in 1..self.trials.len() {
            if self.nonunit_sat[t] > self.nonunit_sat[best] {
                best = t;
            }
        }
        let assignment = self.trials[best].clone();
        Ok(MaxSatOutcome {
            assignment,
            satisfied_on_sample: self.nonunit_sat[best] as usize,
            sample: SampleSet { clauses: Vec::new(), source: SampleSource::Exact, achieved: 0 },
            estimate: self.total_sat[best] as f64,
            estimate_conservative: self.total_sat[best] as f64,
            small_clauses: self.total,
            large_clauses: 0,
            branch: Branch::FairCoin,
            space: self.meter.report(0, 0),
        })
    }
}

/// Insertion-only algorithm that branches on the fraction of unit clauses.
pub fn one_literal_branch<'a, I, R>(events: I, cfg: &MaxSatConfig, rng: &mut R) -> Result<MaxSatOutcome, MaxSatError>
where
    I: IntoIterator<Item = &'a StreamEvent>,
    R: Rng + ?Sized,
{
    let mut st = OneLiteralStream::new(cfg.clone(), rng)?;
    for ev in events {
        st.push(ev)?;
    }
    st.finish(rng)
}
