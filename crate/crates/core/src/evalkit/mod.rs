//! Retrieval statistics, original-versus-propositional comparison and
//! per-category aggregation, plus the bundled reference measurements for
//! the 63 evaluation queries.

mod fixtures;
mod pipeline;
mod report;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::speechact::{char_reduction, SpeechActLabel};

pub use fixtures::{bundled_fixtures, load_fixtures, parse_fixtures, FixtureError, BUNDLED_FIXTURES_CSV};
pub use pipeline::{
    load_queries, parse_queries, run_comparison, ComparisonRun, LayerCounts, QueryFailure, QueryInput, QueryRun,
};
pub use report::{
    char_reduction_csv, emit_report, render_summary, summarize, verdicts_csv, EvaluationSummary, ReportFormat,
    UnknownFormat, VerdictCounts,
};

/// Verdicts within this distance of zero count as unchanged.
pub const DEFAULT_EPSILON: f64 = 1e-4;

// Absorbs decimal representation error when |delta| sits exactly on epsilon.
const EPSILON_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no similarity scores to summarize")]
    EmptyScores,
    #[error("no rows for category {0}")]
    NoRowsForCategory(SpeechActLabel),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least two points")]
    TooFewPoints,
    #[error("a series has zero variance")]
    ZeroVariance,
}

/// Summary of the similarity scores of one retrieved set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetrievalStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub std: f64,
    pub segments: usize,
}

/// Min, max, mean and sample standard deviation (0 for a single score).
pub fn retrieval_stats(scores: &[f64]) -> Result<RetrievalStats, EvalError> {
    if scores.is_empty() {
        return Err(EvalError::EmptyScores);
    }
    let n = scores.len();
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = (scores.iter().sum::<f64>() / n as f64).clamp(min, max);
    let std =
        if n == 1 { 0.0 } else { (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt() };
    Ok(RetrievalStats { min, max, mean, std, segments: n })
}

/// Counts of ids found only in `a` and only in `b`.
pub fn distinct_segments<S: AsRef<str>>(a: &[S], b: &[S]) -> (usize, usize) {
    let sa: HashSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let sb: HashSet<&str> = b.iter().map(AsRef::as_ref).collect();
    (sa.difference(&sb).count(), sb.difference(&sa).count())
}

/// One evaluated query in both forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryPairRecord {
    pub qid: u32,
    pub category: SpeechActLabel,
    pub original_text: String,
    pub propositional_text: String,
    pub original_stats: RetrievalStats,
    pub propositional_stats: RetrievalStats,
    pub original_distinct: usize,
    pub propositional_distinct: usize,
}

impl QueryPairRecord {
    /// Checks internal consistency; returns a description of the first
    /// violated constraint.
    pub fn validate(&self) -> Result<(), String> {
        for (name, s, d) in [
            ("original", &self.original_stats, self.original_distinct),
            ("propositional", &self.propositional_stats, self.propositional_distinct),
        ] {
            if !(s.min <= s.mean && s.mean <= s.max) {
                return Err(format!("{name}: expected min <= mean <= max"));
            }
            if s.std < 0.0 {
                return Err(format!("{name}: negative std"));
            }
            if d > s.segments {
                return Err(format!("{name}: distinct {d} exceeds segments {}", s.segments));
            }
        }
        let shared_a = self.original_stats.segments - self.original_distinct;
        let shared_b = self.propositional_stats.segments - self.propositional_distinct;
        if shared_a != shared_b {
            return Err(format!("shared segment counts disagree ({shared_a} vs {shared_b})"));
        }
        Ok(())
    }

    pub fn char_reduction(&self) -> f64 {
        char_reduction(&self.original_text, &self.propositional_text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Improved,
    Decreased,
    Unchanged,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Improved => "improved",
            Verdict::Decreased => "decreased",
            Verdict::Unchanged => "unchanged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonOutcome {
    pub qid: u32,
    pub delta_mean: f64,
    pub verdict: Verdict,
}

pub fn compare_query(qid: u32, orig: &RetrievalStats, prop: &RetrievalStats, epsilon: f64) -> ComparisonOutcome {
    let delta_mean = prop.mean - orig.mean;
    let verdict = if delta_mean.abs() <= epsilon + EPSILON_SLACK {
        Verdict::Unchanged
    } else if delta_mean > 0.0 {
        Verdict::Improved
    } else {
        Verdict::Decreased
    };
    ComparisonOutcome { qid, delta_mean, verdict }
}

pub fn compare_record(r: &QueryPairRecord, epsilon: f64) -> ComparisonOutcome {
    compare_query(r.qid, &r.original_stats, &r.propositional_stats, epsilon)
}

/// Aggregate of one query variant over a category.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariantAggregate {
    pub min: f64,
    pub max: f64,
    /// Segment-weighted mean of the per-query means.
    pub mean: f64,
    /// Unweighted mean of the per-query means.
    pub macro_mean: f64,
    pub segments: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CategoryStats {
    pub category: SpeechActLabel,
    pub queries: usize,
    pub original: VariantAggregate,
    pub propositional: VariantAggregate,
}

pub fn aggregate_category(rows: &[QueryPairRecord], category: SpeechActLabel) -> Result<CategoryStats, EvalError> {
    let sel: Vec<&QueryPairRecord> = rows.iter().filter(|r| r.category == category).collect();
    if sel.is_empty() {
        return Err(EvalError::NoRowsForCategory(category));
    }
    let orig: Vec<&RetrievalStats> = sel.iter().map(|r| &r.original_stats).collect();
    let prop: Vec<&RetrievalStats> = sel.iter().map(|r| &r.propositional_stats).collect();
    Ok(CategoryStats { category, queries: sel.len(), original: aggregate(&orig), propositional: aggregate(&prop) })
}

/// Aggregates every category present in `rows`, in label order.
pub fn aggregate_all(rows: &[QueryPairRecord]) -> Vec<CategoryStats> {
    SpeechActLabel::ALL.into_iter().filter_map(|c| aggregate_category(rows, c).ok()).collect()
}

fn aggregate(stats: &[&RetrievalStats]) -> VariantAggregate {
    let segments: usize = stats.iter().map(|s| s.segments).sum();
    let weighted: f64 = stats.iter().map(|s| s.mean * s.segments as f64).sum();
    let macro_mean = stats.iter().map(|s| s.mean).sum::<f64>() / stats.len() as f64;
    VariantAggregate {
        min: stats.iter().map(|s| s.min).fold(f64::INFINITY, f64::min),
        max: stats.iter().map(|s| s.max).fold(f64::NEG_INFINITY, f64::max),
        mean: if segments == 0 { macro_mean } else { weighted / segments as f64 },
        macro_mean,
        segments,
    }
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(EvalError::TooFewPoints);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(EvalError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Segment-count versus mean-similarity correlation over three row sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentCorrelation {
    pub original: Option<f64>,
    pub propositional: Option<f64>,
    pub all: Option<f64>,
}

pub fn segment_mean_correlation(rows: &[QueryPairRecord]) -> SegmentCorrelation {
    let xy = |stats: Vec<&RetrievalStats>| {
        let x: Vec<f64> = stats.iter().map(|s| s.segments as f64).collect();
        let y: Vec<f64> = stats.iter().map(|s| s.mean).collect();
        pearson(&x, &y).ok()
    };
    let orig: Vec<&RetrievalStats> = rows.iter().map(|r| &r.original_stats).collect();
    let prop: Vec<&RetrievalStats> = rows.iter().map(|r| &r.propositional_stats).collect();
    let all: Vec<&RetrievalStats> = orig.iter().chain(&prop).copied().collect();
    SegmentCorrelation { original: xy(orig), propositional: xy(prop), all: xy(all) }
}

/// Mean character reduction percentage per category, in label order.
pub fn char_reduction_by_category(rows: &[QueryPairRecord]) -> Vec<(SpeechActLabel, f64)> {
    SpeechActLabel::ALL
        .into_iter()
        .filter_map(|c| {
            let vals: Vec<f64> = rows.iter().filter(|r| r.category == c).map(|r| r.char_reduction()).collect();
            (!vals.is_empty()).then(|| (c, vals.iter().sum::<f64>() / vals.len() as f64))
        })
        .collect()
}
