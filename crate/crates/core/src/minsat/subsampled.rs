//! One settled-variable instance per guess `z` of the optimum, each fed an
//! independent `p(z)`-subsample of the stream.
//!
//! Guesses small enough that `p = 1` would all see the full stream; they
//! share a single instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cnf::{Assignment, Clause, StreamEvent};
use crate::maxsat::evaluate;
use crate::space::SpaceReport;

use super::settled::SettledState;
use super::{inserted, MinSatConfig, MinSatError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceReport {
    /// Guesses served by this instance.
    pub guesses: Vec<u64>,
    pub p: f64,
    pub sampled: u64,
    pub terminated: bool,
    pub words_peak: u64,
    pub settled_count: usize,
    /// Clauses of the subsample satisfied by the instance's assignment.
    pub value_sampled: Option<usize>,
    /// `value_sampled / p`.
    pub estimate: Option<f64>,
    #[serde(skip)]
    pub assignment: Option<Assignment>,
}

impl InstanceReport {
    pub fn survived(&self) -> bool {
        !self.terminated
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsampledOutcome {
    pub assignment: Assignment,
    /// Estimate of the chosen instance.
    pub value_estimate: f64,
    pub chosen: usize,
    pub instances: Vec<InstanceReport>,
    pub guesses_run: usize,
    pub guesses_terminated: usize,
    pub space: SpaceReport,
}

impl SubsampledOutcome {
    /// Oracle-mode selection: the surviving assignment with the fewest
    /// satisfied clauses of `clauses`, earliest instance on ties.
    pub fn select_by_full_evaluation(&self, clauses: &[Clause]) -> (Assignment, usize) {
        self.instances
            .iter()
            .filter_map(|r| r.assignment.as_ref())
            .map(|a| (a.clone(), evaluate(a, clauses)))
            .min_by_key(|(_, v)| *v)
            .expect("at least one instance survives")
    }
}

struct Instance {
    guesses: Vec<u64>,
    p: f64,
    rng: ChaCha8Rng,
    state: Option<SettledState>,
    sampled: u64,
    words_peak: u64,
}

/// Streams `events` through every guess instance and picks an answer by
/// scaled sample value. An estimate is trusted only when it is exact
/// (`p = 1`) or the subsample is large enough for it to concentrate, i.e.
/// at least `(1 - eps) K n / (2 eps²)` sampled clauses are satisfied, which
/// the instance with the right guess meets. If no survivor qualifies the
/// one with the largest `p` is used.
pub fn minsat_subsampled<'a, I, R>(events: I, cfg: &MinSatConfig, rng: &mut R) -> Result<SubsampledOutcome, MinSatError>
where
    I: IntoIterator<Item = &'a StreamEvent>,
    R: Rng + ?Sized,
{
    cfg.validate()?;
    let n = cfg.params.n;
    let budget = cfg.instance_budget();
    let mut instances: Vec<Instance> = Vec::new();
    let mut guesses_run = 0;
    for z in cfg.guesses() {
        guesses_run += 1;
        let p = cfg.p_for(z);
        if let Some(last) = instances.last_mut() {
            if p == 1.0 && last.p == 1.0 {
                last.guesses.push(z);
                continue;
            }
        }
        instances.push(Instance {
            guesses: vec![z],
            p,
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            state: Some(SettledState::new(n, cfg.u)),
            sampled: 0,
            words_peak: 0,
        });
    }

    let mut total_peak = 0u64;
    for ev in events {
        let c = inserted(ev)?;
        c.check_vars(n)?;
        let mut total = 0;
        for inst in &mut instances {
            let Some(st) = inst.state.as_mut() else { continue };
            if inst.p >= 1.0 || inst.rng.gen_bool(inst.p) {
                inst.sampled += 1;
                st.update(c);
                let w = st.words();
                inst.words_peak = inst.words_peak.max(w);
                if w > budget {
                    inst.state = None;
                    continue;
                }
            }
            total += st.words();
        }
        total_peak = total_peak.max(total);
    }

    let mut reports = Vec::with_capacity(instances.len());
    for mut inst in instances {
        let mut rep = InstanceReport {
            guesses: inst.guesses,
            p: inst.p,
            sampled: inst.sampled,
            terminated: inst.state.is_none(),
            words_peak: inst.words_peak,
            settled_count: 0,
            value_sampled: None,
            estimate: None,
            assignment: None,
        };
        if let Some(st) = inst.state.take() {
            let out = st.finish(cfg.offline, &mut inst.rng)?;
            rep.settled_count = out.settled_count;
            rep.value_sampled = Some(out.value);
            rep.estimate = Some(out.value as f64 / inst.p);
            rep.assignment = Some(out.assignment);
        }
        reports.push(rep);
    }

    let guesses_terminated = reports.iter().filter(|r| r.terminated).map(|r| r.guesses.len()).sum();
    let eps = cfg.params.eps;
    let floor = (1.0 - eps) * cfg.params.k * n as f64 / (2.0 * eps * eps);
    let trusted = |r: &InstanceReport| r.p >= 1.0 || r.value_sampled.is_some_and(|v| v as f64 >= floor);
    let mut chosen = None;
    for (i, r) in reports.iter().enumerate() {
        let (Some(e), true) = (r.estimate, trusted(r)) else { continue };
        if chosen.map_or(true, |j: usize| e < reports[j].estimate.unwrap()) {
            chosen = Some(i);
        }
    }
    let chosen = chosen
        .or_else(|| {
            let mut alive = reports.iter().enumerate().filter(|(_, r)| r.survived());
            let first = alive.next()?;
            Some(alive.fold(first, |b, x| if x.1.p > b.1.p { x } else { b }).0)
        })
        .ok_or(MinSatError::AllInstancesTerminated { budget })?;

    let space = SpaceReport {
        words_stored_peak: total_peak,
        samples_achieved: reports[chosen].sampled,
        large_clauses_dropped: 0,
        components: reports
            .iter()
            .map(|r| (format!("guess_{}", r.guesses[0]), r.words_peak))
            .collect(),
    };
    Ok(SubsampledOutcome {
        assignment: reports[chosen].assignment.clone().expect("survivor has an assignment"),
        value_estimate: reports[chosen].estimate.expect("survivor has an estimate"),
        chosen,
        instances: reports,
        guesses_run,
        guesses_terminated,
        space,
    })
}
