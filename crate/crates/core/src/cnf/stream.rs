//! Stream file grammar.
//!
//! ```text
//! c comment
//! p stream <n> <m> <static|dynamic>
//! p andstream <n> <m>
//! + 1 -2 0
//! - 3 0
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{normalize_clause, Clause, ClauseKind, CnfError, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StreamMode {
    /// Insertion-only.
    Static,
    /// Insertions and deletions.
    Dynamic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Insert,
    Delete,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StreamEvent {
    pub op: Op,
    pub clause: Clause,
}

impl StreamEvent {
    pub fn insert(clause: Clause) -> Self {
        StreamEvent { op: Op::Insert, clause }
    }

    pub fn delete(clause: Clause) -> Self {
        StreamEvent { op: Op::Delete, clause }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub n: usize,
    pub m: usize,
    pub mode: StreamMode,
    pub kind: ClauseKind,
}

impl Header {
    pub fn render(&self) -> String {
        match self.kind {
            ClauseKind::Conjunctive => format!("p andstream {} {}", self.n, self.m),
            ClauseKind::Disjunctive => {
                let mode = match self.mode {
                    StreamMode::Static => "static",
                    StreamMode::Dynamic => "dynamic",
                };
                format!("p stream {} {} {}", self.n, self.m, mode)
            }
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> CnfError {
    CnfError::ParseError { line, msg: msg.into() }
}

pub fn parse_header(line: &str, line_no: usize) -> Result<Header, CnfError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("expected a count, found `{s}`")))
    };
    match toks.as_slice() {
        ["p", "stream", n, m, mode] => {
            let mode = match *mode {
                "static" => StreamMode::Static,
                "dynamic" => StreamMode::Dynamic,
                other => return Err(parse_err(line_no, format!("unknown stream mode `{other}`"))),
            };
            Ok(Header { n: num(n)?, m: num(m)?, mode, kind: ClauseKind::Disjunctive })
        }
        ["p", "andstream", n, m] => Ok(Header {
            n: num(n)?,
            m: num(m)?,
            mode: StreamMode::Static,
            kind: ClauseKind::Conjunctive,
        }),
        _ => Err(parse_err(line_no, "malformed header")),
    }
}

/// Parses one event line. `Ok(None)` means the clause was trivially true and
/// is dropped.
pub fn parse_event(line: &str, line_no: usize, header: &Header) -> Result<Option<StreamEvent>, CnfError> {
    let mut toks = line.split_whitespace();
    let op = match toks.next() {
        Some("+") => Op::Insert,
        Some("-") => Op::Delete,
        Some(t) => return Err(parse_err(line_no, format!("expected `+` or `-`, found `{t}`"))),
        None => return Err(parse_err(line_no, "empty line")),
    };
    if op == Op::Delete && header.mode == StreamMode::Static {
        return Err(parse_err(line_no, "delete in a static stream"));
    }
    let mut lits = Vec::new();
    let mut terminated = false;
    for t in toks {
        if terminated {
            return Err(parse_err(line_no, "tokens after terminating 0"));
        }
        let k: i64 = t
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad literal `{t}`")))?;
        if k == 0 {
            terminated = true;
        } else {
            lits.push(Literal::from_dimacs(k, header.n)?);
        }
    }
    if !terminated {
        return Err(parse_err(line_no, "missing terminating 0"));
    }
    Ok(normalize_clause(lits, header.kind)?.map(|clause| StreamEvent { op, clause }))
}

/// Canonical line for an event: sorted literals, single spaces.
pub fn render_event(ev: &StreamEvent) -> String {
    let mut s = String::from(match ev.op {
        Op::Insert => "+",
        Op::Delete => "-",
    });
    for l in ev.clause.literals() {
        let _ = write!(s, " {}", l.to_dimacs());
    }
    s.push_str(" 0");
    s
}

/// Line-oriented reader: parses the header eagerly, then yields events.
pub struct StreamReader<R> {
    input: R,
    header: Header,
    line_no: usize,
    buf: String,
    trivially_true_dropped: u64,
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('c')
}

impl<R: BufRead> StreamReader<R> {
    pub fn new(mut input: R) -> Result<Self, CnfError> {
        let mut buf = String::new();
        let mut line_no = 0;
        loop {
            buf.clear();
            if input.read_line(&mut buf)? == 0 {
                return Err(parse_err(line_no, "missing header"));
            }
            line_no += 1;
            if !is_skippable(&buf) {
                break;
            }
        }
        let header = parse_header(&buf, line_no)?;
        Ok(StreamReader { input, header, line_no, buf, trivially_true_dropped: 0 })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn trivially_true_dropped(&self) -> u64 {
        self.trivially_true_dropped
    }
}

impl<R: BufRead> Iterator for StreamReader<R> {
    type Item = Result<StreamEvent, CnfError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.input.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line_no += 1;
            if is_skippable(&self.buf) {
                continue;
            }
            match parse_event(&self.buf, self.line_no, &self.header) {
                Ok(Some(ev)) => return Some(Ok(ev)),
                Ok(None) => self.trivially_true_dropped += 1,
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

/// A whole stream held in memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamFile {
    pub header: Header,
    pub events: Vec<StreamEvent>,
    pub trivially_true_dropped: u64,
}

impl StreamFile {
    pub fn new(header: Header, events: Vec<StreamEvent>) -> Self {
        StreamFile { header, events, trivially_true_dropped: 0 }
    }

    /// Insertion-only stream of `clauses`.
    pub fn from_clauses(n: usize, clauses: &[Clause]) -> Self {
        let kind = clauses.first().map(|c| c.kind()).unwrap_or(ClauseKind::Disjunctive);
        let header = Header { n, m: clauses.len().max(1), mode: StreamMode::Static, kind };
        StreamFile::new(header, clauses.iter().cloned().map(StreamEvent::insert).collect())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self, CnfError> {
        let mut reader = StreamReader::new(input)?;
        let events = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
        Ok(StreamFile {
            header: reader.header,
            events,
            trivially_true_dropped: reader.trivially_true_dropped,
        })
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.render())?;
        for ev in &self.events {
            writeln!(out, "{}", render_event(ev))?;
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Clauses live at the end of the stream (multiset semantics).
    pub fn final_clauses(&self) -> Vec<Clause> {
        let mut live: Vec<Clause> = Vec::new();
        for ev in &self.events {
            match ev.op {
                Op::Insert => live.push(ev.clause.clone()),
                Op::Delete => {
                    if let Some(pos) = live.iter().rposition(|c| c == &ev.clause) {
                        live.swap_remove(pos);
                    }
                }
            }
        }
        live
    }
}

/// How repeated inserts of the same clause are treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuplicatePolicy {
    /// A second insert of a live clause is an error.
    #[default]
    Strict,
    /// Repeated inserts are distinct stream items. Only valid for
    /// insertion-only streams.
    Permissive,
}

/// Input validator tracking the live clause multiset. It is not part of any
/// algorithm's space budget.
#[derive(Clone, Debug, Default)]
pub struct LiveClauseSet {
    live: HashMap<Clause, u32>,
}

impl LiveClauseSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.live.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    /// Dynamic streams are always strict; `policy` only matters for static ones.
    pub fn apply(&mut self, ev: &StreamEvent, mode: StreamMode, policy: DuplicatePolicy) -> Result<(), CnfError> {
        match ev.op {
            Op::Insert => {
                let count = self.live.entry(ev.clause.clone()).or_insert(0);
                let strict = mode == StreamMode::Dynamic || policy == DuplicatePolicy::Strict;
                if *count > 0 && strict {
                    return Err(CnfError::DuplicateInsert(ev.clause.to_string()));
                }
                *count += 1;
                Ok(())
            }
            Op::Delete => {
                if mode == StreamMode::Static {
                    return Err(CnfError::DeleteInStaticStream);
                }
                match self.live.get_mut(&ev.clause) {
                    Some(c) if *c > 0 => {
                        *c -= 1;
                        if *c == 0 {
                            self.live.remove(&ev.clause);
                        }
                        Ok(())
                    }
                    _ => Err(CnfError::DeleteOfAbsent(ev.clause.to_string())),
                }
            }
        }
    }
}
