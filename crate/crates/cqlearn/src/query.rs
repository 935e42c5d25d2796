//! Queries, answered transcripts, and the simulated annotator.
//!
//! A learner may ask for the label of a pool point (`sign(f(x))`) or for a
//! comparison between two pool points. Comparisons are normalized to one
//! orientation everywhere: `f(x1) >= f(x2)?`, with non-strict ties, so
//! `compare(a, b)` and `compare(b, a)` are both true exactly when
//! `f(a) = f(b)`.

use crate::error::{Error, Result};
use crate::geometry::{LinearConcept, RationalVector, Sign};
use crate::Rat;
use std::fmt;

/// A question the learner may put to the annotator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Query {
    /// `sign(f(x))?` for the pool point with this id.
    Label(usize),
    /// `f(x1) >= f(x2)?` for the pool points with these ids.
    Compare(usize, usize),
}

/// A query together with its answer; the answer shape matches the variant by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnsweredQuery {
    Label { x: usize, sign: Sign },
    Compare { x1: usize, x2: usize, geq: bool },
}

impl AnsweredQuery {
    pub fn query(&self) -> Query {
        match *self {
            AnsweredQuery::Label { x, .. } => Query::Label(x),
            AnsweredQuery::Compare { x1, x2, .. } => Query::Compare(x1, x2),
        }
    }
}

impl fmt::Display for AnsweredQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AnsweredQuery::Label { x, sign } => write!(f, "L {x} {sign}"),
            AnsweredQuery::Compare { x1, x2, geq } => {
                write!(f, "C {x1} {x2} {}", geq as u8)
            }
        }
    }
}

/// Ordered, append-only record of answered queries. Duplicates are permitted
/// here; constraint extraction deduplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryTranscript {
    entries: Vec<AnsweredQuery>,
}

impl QueryTranscript {
    pub fn new() -> Self {
        QueryTranscript::default()
    }

    pub fn push(&mut self, entry: AnsweredQuery) {
        self.entries.push(entry);
    }

    pub fn extend_from(&mut self, other: &QueryTranscript) {
        self.entries.extend_from_slice(&other.entries);
    }

    pub fn entries(&self) -> &[AnsweredQuery] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Debug dump, one entry per line: `L <id> <+1|-1>` or `C <id1> <id2> <0|1>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

/// Query counters; `total` is always the sum of the two.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub label_count: usize,
    pub compare_count: usize,
}

impl QueryStats {
    pub fn total(&self) -> usize {
        self.label_count + self.compare_count
    }
}

/// Deterministic annotator for a hidden concept over a fixed pool.
///
/// Every answer is a pure function of (hidden, pool); the oracle keeps exact
/// query counters and a transcript of everything it has answered. The values
/// `f(x)` are precomputed once so repeated queries cost no big-rational
/// arithmetic.
#[derive(Debug, Clone)]
pub struct SimulatedOracle {
    hidden: LinearConcept,
    pool: Vec<RationalVector>,
    values: Vec<Rat>,
    stats: QueryStats,
    transcript: QueryTranscript,
}

impl SimulatedOracle {
    pub fn new(hidden: LinearConcept, pool: Vec<RationalVector>) -> Result<Self> {
        let mut values = Vec::with_capacity(pool.len());
        for x in &pool {
            values.push(hidden.eval(x)?);
        }
        Ok(SimulatedOracle {
            hidden,
            pool,
            values,
            stats: QueryStats::default(),
            transcript: QueryTranscript::new(),
        })
    }

    pub fn pool(&self) -> &[RationalVector] {
        &self.pool
    }

    pub fn pool_size(&self) -> usize {
        self.pool.len()
    }

    /// The hidden concept; for verification and reporting only — learners
    /// must reach it exclusively through queries.
    pub fn hidden(&self) -> &LinearConcept {
        &self.hidden
    }

    pub fn stats(&self) -> QueryStats {
        self.stats
    }

    pub fn transcript(&self) -> &QueryTranscript {
        &self.transcript
    }

    fn check_id(&self, x: usize) -> Result<()> {
        if x < self.pool.len() {
            Ok(())
        } else {
            Err(Error::UnknownPointId(x))
        }
    }

    /// Answers `sign(f(x))?`; zero maps to `+1`.
    pub fn query_label(&mut self, x: usize) -> Result<Sign> {
        self.check_id(x)?;
        let sign = Sign::of(&self.values[x]);
        self.stats.label_count += 1;
        self.transcript.push(AnsweredQuery::Label { x, sign });
        Ok(sign)
    }

    /// Answers `f(x1) >= f(x2)?`.
    pub fn query_compare(&mut self, x1: usize, x2: usize) -> Result<bool> {
        self.check_id(x1)?;
        self.check_id(x2)?;
        let geq = self.values[x1] >= self.values[x2];
        self.stats.compare_count += 1;
        self.transcript.push(AnsweredQuery::Compare { x1, x2, geq });
        Ok(geq)
    }
}
