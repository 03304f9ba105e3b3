use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::fixtures::{FixtureRow, HEADER};
use super::{
    aggregate_all, char_reduction_by_category, compare_record, segment_mean_correlation, CategoryStats,
    ComparisonOutcome, QueryPairRecord, RetrievalStats, SegmentCorrelation, Verdict,
};
use crate::speechact::SpeechActLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    JsonLines,
    Csv,
    MarkdownTables,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown format `{0}` (expected jsonl, csv or md)")]
pub struct UnknownFormat(pub String);

impl std::str::FromStr for ReportFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(ReportFormat::JsonLines),
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::MarkdownTables),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

/// Renders per-query records. CSV output uses the fixture schema and parses
/// back to the same records; Markdown groups queries by category with the
/// original and propositional forms on consecutive rows.
pub fn emit_report(records: &[QueryPairRecord], format: ReportFormat) -> String {
    match format {
        ReportFormat::JsonLines => {
            records.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
        }
        ReportFormat::Csv => records_csv(records),
        ReportFormat::MarkdownTables => records_markdown(records),
    }
}

fn records_csv(records: &[QueryPairRecord]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in records {
        for (variant, text, s, d) in [
            ("original", &r.original_text, &r.original_stats, r.original_distinct),
            ("propositional", &r.propositional_text, &r.propositional_stats, r.propositional_distinct),
        ] {
            w.serialize(FixtureRow {
                qid: r.qid,
                category: r.category.to_string(),
                variant: variant.into(),
                query_text: text.clone(),
                min: s.min,
                max: s.max,
                mean: s.mean,
                std: s.std,
                segments: s.segments,
                distinct: d,
            })
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

const MD_HEADER: &str = "| QID | Query Text | Min | Max | Mean | Std | Segments | Dist. |\n\
                         |---:|---|---:|---:|---:|---:|---:|---:|\n";

fn records_markdown(records: &[QueryPairRecord]) -> String {
    let mut out = String::new();
    for c in SpeechActLabel::ALL {
        let rows: Vec<&QueryPairRecord> = records.iter().filter(|r| r.category == c).collect();
        if rows.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        writeln!(out, "### Metrics for {} queries\n", c.title()).unwrap();
        out.push_str(MD_HEADER);
        for r in rows {
            md_row(&mut out, &r.qid.to_string(), &r.original_text, &r.original_stats, r.original_distinct);
            md_row(&mut out, "", &r.propositional_text, &r.propositional_stats, r.propositional_distinct);
        }
    }
    if out.is_empty() {
        out.push_str(MD_HEADER);
    }
    out
}

fn md_row(out: &mut String, qid: &str, text: &str, s: &RetrievalStats, distinct: usize) {
    writeln!(
        out,
        "| {qid} | {} | {:.4} | {:.4} | {:.4} | {:.4} | {} | {distinct} |",
        text.replace('|', "\\|"),
        s.min,
        s.max,
        s.mean,
        s.std,
        s.segments
    )
    .unwrap();
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct VerdictCounts {
    pub improved: usize,
    pub decreased: usize,
    pub unchanged: usize,
}

/// Everything derived from a set of records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationSummary {
    pub epsilon: f64,
    pub categories: Vec<CategoryStats>,
    pub verdicts: Vec<(SpeechActLabel, VerdictCounts)>,
    pub outcomes: Vec<ComparisonOutcome>,
    pub correlation: SegmentCorrelation,
    pub char_reduction_pct: Vec<(SpeechActLabel, f64)>,
}

pub fn summarize(records: &[QueryPairRecord], epsilon: f64) -> EvaluationSummary {
    let outcomes: Vec<ComparisonOutcome> = records.iter().map(|r| compare_record(r, epsilon)).collect();
    let verdicts = SpeechActLabel::ALL
        .into_iter()
        .filter(|c| records.iter().any(|r| r.category == *c))
        .map(|c| {
            let mut n = VerdictCounts::default();
            for (r, o) in records.iter().zip(&outcomes) {
                if r.category == c {
                    match o.verdict {
                        Verdict::Improved => n.improved += 1,
                        Verdict::Decreased => n.decreased += 1,
                        Verdict::Unchanged => n.unchanged += 1,
                    }
                }
            }
            (c, n)
        })
        .collect();
    EvaluationSummary {
        epsilon,
        categories: aggregate_all(records),
        verdicts,
        outcomes,
        correlation: segment_mean_correlation(records),
        char_reduction_pct: char_reduction_by_category(records),
    }
}

/// Renders a summary. JSON Lines gives one object; CSV gives the category
/// table; Markdown gives every section.
pub fn render_summary(s: &EvaluationSummary, format: ReportFormat) -> String {
    match format {
        ReportFormat::JsonLines => serde_json::to_string(s).expect("summary serializes") + "\n",
        ReportFormat::Csv => category_csv(&s.categories),
        ReportFormat::MarkdownTables => summary_markdown(s),
    }
}

fn category_csv(cats: &[CategoryStats]) -> String {
    let mut out = String::from(
        "category,orig_min,orig_max,orig_mean,orig_macro_mean,prop_min,prop_max,prop_mean,prop_macro_mean\n",
    );
    for c in cats {
        let (o, p) = (&c.original, &c.propositional);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            c.category, o.min, o.max, o.mean, o.macro_mean, p.min, p.max, p.mean, p.macro_mean
        )
        .unwrap();
    }
    out
}

fn opt4(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |x| format!("{x:.4}"))
}

fn summary_markdown(s: &EvaluationSummary) -> String {
    let mut out = String::from("### Similarity by speech act type\n\n");
    out.push_str("Means are weighted by retrieved segment count; unweighted means are shown separately.\n\n");
    out.push_str("| Speech Act | Orig. Min | Orig. Max | Orig. Mean | Prop. Min | Prop. Max | Prop. Mean | Orig. Mean (unweighted) | Prop. Mean (unweighted) |\n");
    out.push_str("|---|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for c in &s.categories {
        let (o, p) = (&c.original, &c.propositional);
        writeln!(
            out,
            "| {} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} |",
            c.category.title(),
            o.min,
            o.max,
            o.mean,
            p.min,
            p.max,
            p.mean,
            o.macro_mean,
            p.macro_mean
        )
        .unwrap();
    }

    writeln!(out, "\n### Mean similarity change (epsilon {})\n", s.epsilon).unwrap();
    out.push_str("| Speech Act | Improved | Decreased | Unchanged |\n|---|---:|---:|---:|\n");
    for (c, n) in &s.verdicts {
        writeln!(out, "| {} | {} | {} | {} |", c.title(), n.improved, n.decreased, n.unchanged).unwrap();
    }

    out.push_str("\n### Character reduction\n\n| Speech Act | Mean reduction (%) |\n|---|---:|\n");
    for (c, v) in &s.char_reduction_pct {
        writeln!(out, "| {} | {v:.2} |", c.title()).unwrap();
    }

    let r = &s.correlation;
    out.push_str("\n### Segments vs. mean similarity (Pearson r)\n\n| Rows | r |\n|---|---:|\n");
    writeln!(out, "| original | {} |", opt4(r.original)).unwrap();
    writeln!(out, "| propositional | {} |", opt4(r.propositional)).unwrap();
    writeln!(out, "| all | {} |", opt4(r.all)).unwrap();
    out
}

/// `category,mean_reduction_pct`, one row per category present.
pub fn char_reduction_csv(records: &[QueryPairRecord]) -> String {
    let mut out = String::from("category,mean_reduction_pct\n");
    for (c, v) in char_reduction_by_category(records) {
        writeln!(out, "{c},{v}").unwrap();
    }
    out
}

/// `qid,category,mean_orig,mean_prop,verdict`, one row per query.
pub fn verdicts_csv(records: &[QueryPairRecord], epsilon: f64) -> String {
    let mut out = String::from("qid,category,mean_orig,mean_prop,verdict\n");
    for r in records {
        let o = compare_record(r, epsilon);
        writeln!(
            out,
            "{},{},{},{},{}",
            r.qid,
            r.category,
            r.original_stats.mean,
            r.propositional_stats.mean,
            o.verdict.as_str()
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalkit::{bundled_fixtures, parse_fixtures, DEFAULT_EPSILON};

    #[test]
    fn empty_records_give_headers_only() {
        assert_eq!(emit_report(&[], ReportFormat::JsonLines), "");
        assert_eq!(emit_report(&[], ReportFormat::Csv), format!("{}\n", HEADER.join(",")));
        assert_eq!(emit_report(&[], ReportFormat::MarkdownTables), MD_HEADER);
    }

    #[test]
    fn csv_round_trips() {
        let rows = bundled_fixtures();
        let text = emit_report(rows, ReportFormat::Csv);
        assert_eq!(parse_fixtures(text.as_bytes()).unwrap(), rows);
    }

    #[test]
    fn markdown_layout() {
        let md = emit_report(&bundled_fixtures()[..2], ReportFormat::MarkdownTables);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "### Metrics for Assertive queries");
        assert!(lines[2].starts_with("| QID | Query Text | Min |"));
        assert!(lines[4].starts_with("| 0 | The 5x5 TECSummit"));
        assert!(lines[5].starts_with("|  | The 5x5 TECSummit"));
        assert!(lines[4].ends_with("| 0.6136 | 0.7258 | 0.6506 | 0.0337 | 18 | 0 |"));
        assert_eq!(lines.len(), 8);
    }

    #[test]
    fn pipes_are_escaped() {
        let mut r = bundled_fixtures()[0].clone();
        r.original_text = "a|b".into();
        assert!(emit_report(&[r], ReportFormat::MarkdownTables).contains("a\\|b"));
    }

    #[test]
    fn plot_csvs() {
        let rows = bundled_fixtures();
        let f2 = char_reduction_csv(rows);
        assert_eq!(f2.lines().count(), 8);
        let f3 = verdicts_csv(rows, DEFAULT_EPSILON);
        assert_eq!(f3.lines().count(), 64);
        assert!(f3.contains("\n6,assertive,0.7225,0.6965,decreased\n"));
    }

    #[test]
    fn summary_renders_all_formats() {
        let s = summarize(bundled_fixtures(), DEFAULT_EPSILON);
        assert!(render_summary(&s, ReportFormat::MarkdownTables).contains("| Assertive | 0.5531 | 0.8137 | 0.6871 |"));
        assert_eq!(render_summary(&s, ReportFormat::Csv).lines().count(), 8);
        let v: serde_json::Value = serde_json::from_str(&render_summary(&s, ReportFormat::JsonLines)).unwrap();
        assert_eq!(v["categories"].as_array().unwrap().len(), 7);
    }
}
