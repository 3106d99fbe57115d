//! L0 sampling over a turnstile vector indexed by `[0, N)`.
//!
//! Each repetition hashes indices with an 8-wise independent polynomial and
//! keeps geometric levels: level `l` sees the indices whose hash falls below
//! `p / 2^l`. Every level holds a 1-sparse recovery cell. Extraction returns
//! the element alone at some level of the first repetition that has one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hash::{mod_add, mod_mul, to_field, PolyHash, MERSENNE_61};
use super::SamplerError;

/// Hash independence per repetition.
const INDEPENDENCE: usize = 8;

/// Upper bound on the per-repetition failure probability, used to size the
/// repetition count. Checked empirically in the tests below.
const REPETITION_FAILURE: f64 = 1.0 / 3.0;

/// Largest supported universe; indices must stay below the field modulus.
pub const MAX_UNIVERSE: u128 = MERSENNE_61 as u128;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Cell {
    count: i64,
    sum: i128,
    /// `Σ w·idx² mod p`.
    sumsq: u64,
}

impl Cell {
    fn update(&mut self, idx: u64, delta: i64) {
        self.count += delta;
        self.sum += idx as i128 * delta as i128;
        let sq = mod_mul(idx, idx);
        let d = if delta >= 0 {
            to_field(delta as u128)
        } else {
            MERSENNE_61 - to_field(delta.unsigned_abs() as u128)
        };
        self.sumsq = mod_add(self.sumsq, mod_mul(sq, d));
    }

    fn recover(&self, universe: u128) -> Option<u128> {
        if self.count == 0 || self.sum % self.count as i128 != 0 {
            return None;
        }
        let idx = self.sum / self.count as i128;
        if idx < 0 || idx as u128 >= universe {
            return None;
        }
        let idx = idx as u64;
        let count = if self.count > 0 {
            to_field(self.count as u128)
        } else {
            MERSENNE_61 - to_field(self.count.unsigned_abs() as u128)
        };
        (mod_mul(mod_mul(idx, idx), count) == self.sumsq).then_some(idx as u128)
    }
}

#[derive(Clone, Debug)]
struct Repetition {
    hash: PolyHash,
    cells: Vec<Cell>,
}

#[derive(Clone, Debug)]
pub struct L0Sampler {
    universe: u128,
    delta: f64,
    reps: Vec<Repetition>,
}

impl L0Sampler {
    pub fn new(universe: u128, delta: f64, seed: u64) -> Result<Self, SamplerError> {
        if universe == 0 || universe > MAX_UNIVERSE {
            return Err(SamplerError::UniverseTooLarge(universe));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(SamplerError::InvalidParameter(format!("delta = {delta}")));
        }
        let levels = Self::level_count(universe);
        let reps = Self::repetition_count(delta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reps = (0..reps)
            .map(|_| Repetition {
                hash: PolyHash::random(INDEPENDENCE, &mut rng),
                cells: vec![Cell::default(); levels],
            })
            .collect();
        Ok(L0Sampler { universe, delta, reps })
    }

    /// `ceil(log2 N) + 1` levels.
    pub fn level_count(universe: u128) -> usize {
        let log = 128 - (universe.max(1) - 1).leading_zeros() as usize;
        (log + 1).min(61)
    }

    pub fn repetition_count(delta: f64) -> usize {
        ((1.0 / delta).ln() / (1.0 / REPETITION_FAILURE).ln()).ceil().max(1.0) as usize
    }

    pub fn universe(&self) -> u128 {
        self.universe
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Applies `v[idx] += delta`.
    pub fn update(&mut self, idx: u128, delta: i64) -> Result<(), SamplerError> {
        if idx >= self.universe {
            return Err(SamplerError::IndexOutOfRange(idx));
        }
        let x = idx as u64;
        for rep in &mut self.reps {
            let h = rep.hash.eval(x);
            for (level, cell) in rep.cells.iter_mut().enumerate() {
                if h >= MERSENNE_61 >> level {
                    break;
                }
                cell.update(x, delta);
            }
        }
        Ok(())
    }

    /// A support element, or `None` if the support is empty or recovery failed.
    pub fn extract(&self) -> Option<u128> {
        self.reps.iter().find_map(|rep| Self::extract_rep(rep, self.universe))
    }

    fn extract_rep(rep: &Repetition, universe: u128) -> Option<u128> {
        rep.cells.iter().rev().find_map(|c| c.recover(universe))
    }

    /// Storage in machine words: per cell one count, two for the 128-bit sum,
    /// one fingerprint; plus the hash coefficients.
    pub fn words(&self) -> u64 {
        self.reps
            .iter()
            .map(|r| 4 * r.cells.len() as u64 + r.hash.independence() as u64)
            .sum()
    }
}

/// `s` independent samplers driven by the same update stream.
#[derive(Clone, Debug)]
pub struct L0SampleSet {
    samplers: Vec<L0Sampler>,
}

/// Outcome of extracting from an [`L0SampleSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleExtraction {
    /// Distinct recovered indices, in sampler order of first appearance.
    pub indices: Vec<u128>,
    /// Samplers that returned nothing (empty support or failure).
    pub failed: usize,
}

impl L0SampleSet {
    pub fn new(universe: u128, s: usize, delta: f64, seed: u64) -> Result<Self, SamplerError> {
        let samplers = (0..s as u64)
            .map(|i| L0Sampler::new(universe, delta, super::derive_seed(seed, i)))
            .collect::<Result<_, _>>()?;
        Ok(L0SampleSet { samplers })
    }

    pub fn update(&mut self, idx: u128, delta: i64) -> Result<(), SamplerError> {
        for s in &mut self.samplers {
            s.update(idx, delta)?;
        }
        Ok(())
    }

    pub fn extract_distinct(&self) -> SampleExtraction {
        let mut seen = std::collections::HashSet::new();
        let mut indices = Vec::new();
        let mut failed = 0;
        for s in &self.samplers {
            match s.extract() {
                Some(i) => {
                    if seen.insert(i) {
                        indices.push(i);
                    }
                }
                None => failed += 1,
            }
        }
        SampleExtraction { indices, failed }
    }

    pub fn words(&self) -> u64 {
        self.samplers.iter().map(L0Sampler::words).sum()
    }

    pub fn len(&self) -> usize {
        self.samplers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samplers.is_empty()
    }
}

/// Runs `s` independent samplers over `updates` and returns the distinct
/// recovered indices.
pub fn l0_sample_set<I>(
    updates: I,
    universe: u128,
    s: usize,
    delta: f64,
    seed: u64,
) -> Result<SampleExtraction, SamplerError>
where
    I: IntoIterator<Item = (u128, i64)>,
{
    let mut set = L0SampleSet::new(universe, s, delta, seed)?;
    for (idx, d) in updates {
        set.update(idx, d)?;
    }
    Ok(set.extract_distinct())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::collections::HashMap;

    fn sampler(universe: u128, seed: u64) -> L0Sampler {
        L0Sampler::new(universe, 1e-3, seed).unwrap()
    }

    #[test]
    fn cancellation_leaves_nothing() {
        let mut s = sampler(64, 1);
        s.update(7, 1).unwrap();
        s.update(7, -1).unwrap();
        assert_eq!(s.extract(), None);
    }

    #[test]
    fn singleton_support_is_recovered() {
        for seed in 0..200 {
            let mut s = sampler(1 << 20, seed);
            s.update(3, 1).unwrap();
            assert_eq!(s.extract(), Some(3));
        }
    }

    #[test]
    fn out_of_range_index() {
        let mut s = sampler(8, 0);
        assert_eq!(s.update(8, 1), Err(SamplerError::IndexOutOfRange(8)));
        assert!(L0Sampler::new(MAX_UNIVERSE + 1, 0.1, 0).is_err());
    }

    #[test]
    fn extracts_from_surviving_half() {
        for seed in 0..500 {
            let mut s = sampler(16, seed);
            for i in 0..8 {
                s.update(i, 1).unwrap();
            }
            for i in 0..4 {
                s.update(i, -1).unwrap();
            }
            if let Some(x) = s.extract() {
                assert!((4..8).contains(&x), "seed {seed}: {x}");
            }
        }
    }

    /// Against a reference multiset under random turnstile updates.
    #[test]
    fn never_returns_a_cancelled_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..300 {
            let universe = 1u128 << rng.gen_range(4..40);
            let mut s = sampler(universe, seed);
            let mut reference: HashMap<u128, i64> = HashMap::new();
            let mut live: Vec<u128> = Vec::new();
            for _ in 0..rng.gen_range(1..60) {
                if !live.is_empty() && rng.gen_bool(0.4) {
                    let i = live.swap_remove(rng.gen_range(0..live.len()));
                    s.update(i, -1).unwrap();
                    *reference.get_mut(&i).unwrap() -= 1;
                } else {
                    let i = rng.gen_range(0..universe);
                    if reference.get(&i).copied().unwrap_or(0) == 0 {
                        s.update(i, 1).unwrap();
                        *reference.entry(i).or_default() += 1;
                        live.push(i);
                    }
                }
            }
            match s.extract() {
                Some(x) => assert_eq!(reference.get(&x).copied(), Some(1)),
                None => {}
            }
            if live.is_empty() {
                assert_eq!(s.extract(), None);
            }
        }
    }

    #[test]
    fn two_element_support_is_balanced() {
        let runs = 10_000u64;
        let mut hits = [0u64; 2];
        let mut failures = 0u64;
        for seed in 0..runs {
            let mut s = sampler(1 << 16, seed);
            s.update(2, 1).unwrap();
            s.update(9, 1).unwrap();
            match s.extract() {
                Some(2) => hits[0] += 1,
                Some(9) => hits[1] += 1,
                Some(x) => panic!("not in support: {x}"),
                None => failures += 1,
            }
        }
        for h in hits {
            assert!((h as f64 / runs as f64 - 0.5).abs() <= 0.03, "{hits:?}");
        }
        assert!(failures as f64 <= 1e-3 * runs as f64, "failures {failures}");
    }

    #[test]
    fn single_repetition_failure_is_bounded() {
        let trials = 4000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut failures = 0;
        for seed in 0..trials {
            let universe = 1u128 << 30;
            let mut s = L0Sampler::new(universe, 0.5, seed).unwrap();
            assert_eq!(s.reps.len(), 1);
            let support = rng.gen_range(2..200);
            for idx in rand::seq::index::sample(&mut rng, 1 << 20, support) {
                s.update(idx as u128, 1).unwrap();
            }
            if s.extract().is_none() {
                failures += 1;
            }
        }
        let rate = failures as f64 / trials as f64;
        assert!(rate < REPETITION_FAILURE, "rate {rate}");
    }

    #[test]
    fn small_support_is_exhausted_by_sample_set() {
        let runs = 400u64;
        let support = [3u128, 17, 40];
        let complete = (0..runs)
            .filter(|&seed| {
                let updates = support.iter().map(|&i| (i, 1i64));
                let out = l0_sample_set(updates, 64, 16, 1e-3, seed).unwrap();
                out.indices.len() == support.len()
            })
            .count();
        assert!(complete as f64 / runs as f64 >= 0.95, "{complete}/{runs}");
    }

    #[test]
    fn sample_set_composition() {
        let one = l0_sample_set([(5u128, 1i64), (6, 1)], 64, 1, 1e-3, 11).unwrap();
        let mut single = L0Sampler::new(64, 1e-3, super::super::derive_seed(11, 0)).unwrap();
        single.update(5, 1).unwrap();
        single.update(6, 1).unwrap();
        assert_eq!(one.indices, single.extract().into_iter().collect::<Vec<_>>());

        let none = l0_sample_set([(5u128, 1i64), (5, -1)], 64, 8, 1e-3, 3).unwrap();
        assert!(none.indices.is_empty());
        assert_eq!(none.failed, 8);
    }

    #[test]
    fn words_within_log_squared_budget() {
        for exp in [4u32, 10, 20, 40, 60] {
            for delta in [0.1, 1e-3, 1e-6] {
                let universe = 1u128 << exp;
                let s = L0Sampler::new(universe, delta, 0).unwrap();
                let log_n = (universe as f64).log2();
                let bound = 4.0 * log_n * log_n * (1.0 / delta).log2();
                assert!((s.words() as f64) <= bound, "N=2^{exp} delta={delta}: {}", s.words());
            }
        }
    }
}
