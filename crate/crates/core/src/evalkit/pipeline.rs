use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fixtures::FixtureError;
use super::report::{render_summary, summarize};
use super::{distinct_segments, emit_report, retrieval_stats, QueryPairRecord, ReportFormat, RetrievalStats};
use crate::backends::Extractor;
use crate::corpus::{search, Hit, Index, Layer, SearchPolicy};
use crate::embedding::Embedder;
use crate::pool::bounded_map;
use crate::speechact::{classify, SpeechActLabel, Utterance};

/// One row of a query file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryInput {
    pub qid: u32,
    /// Classified from the text when absent.
    pub category: Option<SpeechActLabel>,
    pub original_text: String,
    /// Produced by the extractor when absent.
    pub propositional_text: Option<String>,
}

#[derive(Debug, Deserialize)]
struct QueryRow {
    qid: u32,
    #[serde(default)]
    category: String,
    original_text: String,
    #[serde(default)]
    propositional_text: String,
}

pub fn load_queries(path: &Path) -> Result<Vec<QueryInput>, FixtureError> {
    let file =
        std::fs::File::open(path).map_err(|source| FixtureError::Io { path: path.display().to_string(), source })?;
    parse_queries(file)
}

/// Parses CSV with columns `qid, category, original_text` and an optional
/// `propositional_text`. Empty cells mean "derive it".
pub fn parse_queries(reader: impl Read) -> Result<Vec<QueryInput>, FixtureError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<QueryRow>().enumerate() {
        let row = i + 2;
        let r = rec.map_err(|e| FixtureError::SchemaError { row, message: e.to_string() })?;
        let category = match r.category.trim() {
            "" => None,
            c => Some(c.parse().map_err(|e: crate::speechact::UnknownLabel| FixtureError::SchemaError {
                row,
                message: e.to_string(),
            })?),
        };
        if r.original_text.trim().is_empty() {
            return Err(FixtureError::SchemaError { row, message: "original_text is empty".into() });
        }
        let prop = r.propositional_text.trim();
        out.push(QueryInput {
            qid: r.qid,
            category,
            original_text: r.original_text,
            propositional_text: (!prop.is_empty()).then(|| prop.to_string()),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LayerCounts {
    pub full: usize,
    pub paragraph: usize,
}

impl LayerCounts {
    fn of(hits: &[Hit]) -> Self {
        let full = hits.iter().filter(|h| h.layer == Layer::FullText).count();
        LayerCounts { full, paragraph: hits.len() - full }
    }
}

/// Retrieval detail for one successfully compared query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryRun {
    pub qid: u32,
    pub original_layers: LayerCounts,
    pub propositional_layers: LayerCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryFailure {
    pub qid: u32,
    pub message: String,
    /// Caused by a remote service rather than the input.
    pub external: bool,
}

/// Outcome of comparing a query set against an index. Everything is ordered
/// by qid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRun {
    pub records: Vec<QueryPairRecord>,
    pub runs: Vec<QueryRun>,
    pub failures: Vec<QueryFailure>,
}

/// Embeds and searches both forms of every query. Per-query failures are
/// collected and the remaining queries still run.
pub fn run_comparison(
    queries: &[QueryInput],
    index: &Index,
    embedder: &Embedder,
    extractor: &Extractor,
    policy: &SearchPolicy,
    jobs: usize,
) -> ComparisonRun {
    let results = bounded_map(queries, jobs, |q| compare_one(q, index, embedder, extractor, policy));
    let mut run = ComparisonRun { records: vec![], runs: vec![], failures: vec![] };
    for r in results {
        match r {
            Ok((rec, detail)) => {
                run.records.push(rec);
                run.runs.push(detail);
            }
            Err(f) => run.failures.push(f),
        }
    }
    run.records.sort_by_key(|r| r.qid);
    run.runs.sort_by_key(|r| r.qid);
    run.failures.sort_by_key(|f| f.qid);
    run
}

fn compare_one(
    q: &QueryInput,
    index: &Index,
    embedder: &Embedder,
    extractor: &Extractor,
    policy: &SearchPolicy,
) -> Result<(QueryPairRecord, QueryRun), QueryFailure> {
    let fail = |message: String, external: bool| QueryFailure { qid: q.qid, message, external };
    let u = Utterance::new(q.original_text.clone()).map_err(|e| fail(e.to_string(), false))?;
    let prop = match &q.propositional_text {
        Some(p) => p.clone(),
        None => extractor.extract(&u).map_err(|e| fail(e.to_string(), e.is_external()))?.text,
    };
    let vecs =
        embedder.embed_batch(&[u.text(), &prop]).map_err(|e| fail(format!("embedding: {e}"), e.is_external()))?;
    let mut hits = Vec::with_capacity(2);
    for v in &vecs {
        hits.push(search(index, v, policy).map_err(|e| fail(e.to_string(), false))?);
    }
    let stats = |h: &[Hit], which: &str| -> Result<RetrievalStats, QueryFailure> {
        let scores: Vec<f64> = h.iter().map(|h| h.score).collect();
        retrieval_stats(&scores).map_err(|_| fail(format!("no chunks retrieved for the {which} query"), false))
    };
    let original_stats = stats(&hits[0], "original")?;
    let propositional_stats = stats(&hits[1], "propositional")?;
    let ids = |h: &[Hit]| h.iter().map(|h| h.chunk_id.clone()).collect::<Vec<_>>();
    let (original_distinct, propositional_distinct) = distinct_segments(&ids(&hits[0]), &ids(&hits[1]));
    let record = QueryPairRecord {
        qid: q.qid,
        category: q.category.unwrap_or_else(|| classify(&u)),
        original_text: q.original_text.clone(),
        propositional_text: prop,
        original_stats,
        propositional_stats,
        original_distinct,
        propositional_distinct,
    };
    let detail = QueryRun {
        qid: q.qid,
        original_layers: LayerCounts::of(&hits[0]),
        propositional_layers: LayerCounts::of(&hits[1]),
    };
    Ok((record, detail))
}

impl ComparisonRun {
    /// Full report: per-query tables, layer counts, failures, and the
    /// category-level summary. JSON Lines emits one record per line followed
    /// by one summary object; CSV emits only the per-query records.
    pub fn render(&self, format: ReportFormat, epsilon: f64) -> String {
        let summary = summarize(&self.records, epsilon);
        match format {
            ReportFormat::Csv => emit_report(&self.records, format),
            ReportFormat::JsonLines => {
                let mut out = emit_report(&self.records, format);
                let tail = serde_json::json!({ "runs": self.runs, "failures": self.failures, "summary": summary });
                out.push_str(&tail.to_string());
                out.push('\n');
                out
            }
            ReportFormat::MarkdownTables => {
                let mut out = emit_report(&self.records, format);
                out.push_str("\n### Retrieved chunks by layer\n\n");
                out.push_str("| QID | Orig. full | Orig. paragraph | Prop. full | Prop. paragraph |\n|---:|---:|---:|---:|---:|\n");
                for r in &self.runs {
                    let (o, p) = (r.original_layers, r.propositional_layers);
                    writeln!(out, "| {} | {} | {} | {} | {} |", r.qid, o.full, o.paragraph, p.full, p.paragraph)
                        .unwrap();
                }
                if !self.failures.is_empty() {
                    out.push_str("\n### Failed queries\n\n");
                    for f in &self.failures {
                        writeln!(out, "- {}: {}", f.qid, f.message).unwrap();
                    }
                }
                out.push('\n');
                out.push_str(&render_summary(&summary, format));
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_optional_columns() {
        let csv = "qid,category,original_text,propositional_text\n1,interrogative,Is it live?,\n2,,Show me the map.,The map.\n";
        let qs = parse_queries(csv.as_bytes()).unwrap();
        assert_eq!(qs[0].category, Some(SpeechActLabel::Interrogative));
        assert_eq!(qs[0].propositional_text, None);
        assert_eq!(qs[1].category, None);
        assert_eq!(qs[1].propositional_text.as_deref(), Some("The map."));
        let three = "qid,category,original_text\n7,directive,List the fees.\n";
        assert_eq!(parse_queries(three.as_bytes()).unwrap()[0].qid, 7);
    }

    #[test]
    fn bad_rows_are_named() {
        let csv = "qid,category,original_text\n1,assertive,ok\nx,assertive,bad\n";
        assert!(matches!(parse_queries(csv.as_bytes()), Err(FixtureError::SchemaError { row: 3, .. })));
        let csv = "qid,category,original_text\n1,question,ok\n";
        assert!(matches!(parse_queries(csv.as_bytes()), Err(FixtureError::SchemaError { row: 2, .. })));
    }
}
