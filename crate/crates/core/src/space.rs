//! Word-level space accounting for the streaming pipelines.
//!
//! One word per counter or index; a stored clause costs `2 + |c|` words
//! (header, length, one word per literal).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cnf::Clause;

pub fn clause_words(c: &Clause) -> u64 {
    2 + c.len() as u64
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub words_stored_peak: u64,
    pub samples_achieved: u64,
    pub large_clauses_dropped: u64,
    /// Peak words per component.
    pub components: BTreeMap<String, u64>,
}

/// Tracks current and peak words per named component.
#[derive(Clone, Debug, Default)]
pub struct SpaceMeter {
    current: BTreeMap<&'static str, u64>,
    component_peak: BTreeMap<&'static str, u64>,
    total: u64,
    peak: u64,
}

impl SpaceMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, component: &'static str, words: u64) {
        let cur = self.current.entry(component).or_insert(0);
        self.total = self.total - *cur + words;
        *cur = words;
        let p = self.component_peak.entry(component).or_insert(0);
        *p = (*p).max(words);
        self.peak = self.peak.max(self.total);
    }

    pub fn add(&mut self, component: &'static str, words: u64) {
        let cur = self.current.get(component).copied().unwrap_or(0);
        self.set(component, cur + words);
    }

    pub fn sub(&mut self, component: &'static str, words: u64) {
        let cur = self.current.get(component).copied().unwrap_or(0);
        self.set(component, cur.saturating_sub(words));
    }

    pub fn component(&self, component: &str) -> u64 {
        self.current.get(component).copied().unwrap_or(0)
    }

    pub fn current(&self) -> u64 {
        self.total
    }

    pub fn peak(&self) -> u64 {
        self.peak
    }

    pub fn report(&self, samples_achieved: u64, large_clauses_dropped: u64) -> SpaceReport {
        SpaceReport {
            words_stored_peak: self.peak,
            samples_achieved,
            large_clauses_dropped,
            components: self.component_peak.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}
