//! Bottom-k distinct-elements sketch.
//!
//! Keeps the `k` smallest 64-bit hashes seen. Sketches built with the same
//! seed and `k` merge by taking the `k` smallest of the union, which makes a
//! merged sketch identical to one built over the union of the inputs.

use std::collections::BTreeSet;

use super::hash::mix64;
use super::SamplerError;

const MAGIC: &[u8; 4] = b"F0SK";
const VERSION: u8 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct F0Sketch {
    k: usize,
    seed: u64,
    delta: f64,
    min_hashes: BTreeSet<u64>,
}

impl F0Sketch {
    pub fn new(k: usize, seed: u64) -> Self {
        assert!(k >= 1, "k must be positive");
        F0Sketch { k, seed, delta: 0.0, min_hashes: BTreeSet::new() }
    }

    /// `k = ceil(3 ln(2/delta) / eps²)`, the Chernoff sizing for a `1 ± eps`
    /// estimate with failure probability `delta`.
    pub fn with_accuracy(eps: f64, delta: f64, seed: u64) -> Self {
        let mut sk = Self::new(Self::retention_for(eps, delta), seed);
        sk.delta = delta;
        sk
    }

    pub fn retention_for(eps: f64, delta: f64) -> usize {
        (3.0 * (2.0 / delta).ln() / (eps * eps)).ceil() as usize
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Retained hashes in increasing order.
    pub fn min_hashes(&self) -> impl Iterator<Item = u64> + '_ {
        self.min_hashes.iter().copied()
    }

    pub fn insert(&mut self, element: u64) {
        self.insert_hash(mix64(element, self.seed));
    }

    fn insert_hash(&mut self, h: u64) {
        if self.min_hashes.len() < self.k {
            self.min_hashes.insert(h);
        } else if h < *self.min_hashes.last().expect("k >= 1") && self.min_hashes.insert(h) {
            self.min_hashes.pop_last();
        }
    }

    fn check_compatible(&self, other: &F0Sketch) -> Result<(), SamplerError> {
        if self.seed != other.seed || self.k != other.k {
            return Err(SamplerError::SeedMismatch);
        }
        Ok(())
    }

    pub fn merge(&self, other: &F0Sketch) -> Result<F0Sketch, SamplerError> {
        let mut out = self.clone();
        out.merge_in(other)?;
        Ok(out)
    }

    pub fn merge_in(&mut self, other: &F0Sketch) -> Result<(), SamplerError> {
        self.check_compatible(other)?;
        for h in other.min_hashes.iter().take(self.k) {
            self.insert_hash(*h);
        }
        Ok(())
    }

    /// Exact count below `k` distinct elements, otherwise `k · 2^64 / h_(k)`.
    pub fn estimate(&self) -> f64 {
        Self::estimate_from(self.k, self.min_hashes.len(), self.min_hashes.last().copied())
    }

    fn estimate_from(k: usize, retained: usize, kth: Option<u64>) -> f64 {
        match kth {
            Some(h) if retained >= k => k as f64 * 2f64.powi(64) / (h as f64 + 1.0),
            _ => retained as f64,
        }
    }

    /// Estimate for the union of `sketches` without materializing the merge.
    pub fn union_estimate<'a, I>(sketches: I) -> Result<f64, SamplerError>
    where
        I: IntoIterator<Item = &'a F0Sketch>,
    {
        let mut it = sketches.into_iter();
        let Some(first) = it.next() else {
            return Ok(0.0);
        };
        let mut acc = first.clone();
        for sk in it {
            acc.merge_in(sk)?;
        }
        Ok(acc.estimate())
    }

    /// 8-word-aligned words: the retained hashes plus `k`, seed and count.
    pub fn words(&self) -> u64 {
        self.min_hashes.len() as u64 + 3
    }

    /// Framed blob: magic, version, `k`, seed, delta, count, hashes (little endian).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(29 + 8 * self.min_hashes.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&(self.k as u32).to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&self.delta.to_le_bytes());
        out.extend_from_slice(&(self.min_hashes.len() as u32).to_le_bytes());
        for h in &self.min_hashes {
            out.extend_from_slice(&h.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SamplerError> {
        let corrupt = |msg: &str| SamplerError::Corrupt(msg.to_string());
        let mut cur = bytes;
        let mut take = |n: usize| -> Result<&[u8], SamplerError> {
            if cur.len() < n {
                return Err(corrupt("truncated"));
            }
            let (head, tail) = cur.split_at(n);
            cur = tail;
            Ok(head)
        };
        if take(4)? != MAGIC {
            return Err(corrupt("bad magic"));
        }
        if take(1)?[0] != VERSION {
            return Err(corrupt("unsupported version"));
        }
        let k = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        let seed = u64::from_le_bytes(take(8)?.try_into().unwrap());
        let delta = f64::from_le_bytes(take(8)?.try_into().unwrap());
        let count = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        if k == 0 || count > k {
            return Err(corrupt("count exceeds k"));
        }
        let mut min_hashes = BTreeSet::new();
        for _ in 0..count {
            min_hashes.insert(u64::from_le_bytes(take(8)?.try_into().unwrap()));
        }
        if min_hashes.len() != count {
            return Err(corrupt("repeated hash"));
        }
        if !take(0)?.is_empty() || bytes.len() != 29 + 8 * count {
            return Err(corrupt("trailing bytes"));
        }
        Ok(F0Sketch { k, seed, delta, min_hashes })
    }
}
