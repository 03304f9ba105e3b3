use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{QueryPairRecord, RetrievalStats};
use crate::speechact::SpeechActLabel;

/// The 63 reference queries with their reference retrieval measurements.
pub const BUNDLED_FIXTURES_CSV: &str = include_str!("../../data/reference_metrics.csv");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("row {row}: {message}")]
    SchemaError { row: usize, message: String },
}

/// One CSV row: a single variant of a query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct FixtureRow {
    pub qid: u32,
    pub category: String,
    pub variant: String,
    pub query_text: String,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub std: f64,
    pub segments: usize,
    pub distinct: usize,
}

pub(crate) const HEADER: [&str; 10] =
    ["qid", "category", "variant", "query_text", "min", "max", "mean", "std", "segments", "distinct"];

type NumberedRow = (usize, FixtureRow);

pub fn bundled_fixtures() -> &'static [QueryPairRecord] {
    static CELL: OnceLock<Vec<QueryPairRecord>> = OnceLock::new();
    CELL.get_or_init(|| parse_fixtures(BUNDLED_FIXTURES_CSV.as_bytes()).expect("bundled fixtures are well-formed"))
}

pub fn load_fixtures(path: &Path) -> Result<Vec<QueryPairRecord>, FixtureError> {
    let file =
        std::fs::File::open(path).map_err(|source| FixtureError::Io { path: path.display().to_string(), source })?;
    parse_fixtures(file)
}

/// Parses fixture CSV. Each qid needs exactly one `original` and one
/// `propositional` row of the same category. Row numbers in errors count
/// the header as row 1.
pub fn parse_fixtures(reader: impl Read) -> Result<Vec<QueryPairRecord>, FixtureError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let header_err = |message: String| FixtureError::SchemaError { row: 1, message };
    let headers = rdr.headers().map_err(|e| header_err(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(header_err(format!("expected header `{}`", HEADER.join(","))));
    }

    let mut order: Vec<u32> = Vec::new();
    let mut pairs: BTreeMap<u32, (Option<NumberedRow>, Option<NumberedRow>)> = BTreeMap::new();
    for (i, rec) in rdr.deserialize::<FixtureRow>().enumerate() {
        let row = i + 2;
        let r = rec.map_err(|e| FixtureError::SchemaError { row, message: e.to_string() })?;
        let entry = pairs.entry(r.qid).or_insert_with(|| {
            order.push(r.qid);
            (None, None)
        });
        let slot = match r.variant.as_str() {
            "original" => &mut entry.0,
            "propositional" => &mut entry.1,
            other => {
                return Err(FixtureError::SchemaError { row, message: format!("unknown variant `{other}`") });
            }
        };
        if slot.is_some() {
            return Err(FixtureError::SchemaError {
                row,
                message: format!("second {} row for qid {}", r.variant, r.qid),
            });
        }
        *slot = Some((row, r));
    }

    let mut out = Vec::with_capacity(order.len());
    for qid in order {
        let (o, p) = pairs.remove(&qid).expect("qid was recorded");
        let ((orow, o), (prow, p)) = match (o, p) {
            (Some(o), Some(p)) => (o, p),
            (Some((row, _)), None) | (None, Some((row, _))) => {
                return Err(FixtureError::SchemaError { row, message: format!("qid {qid} lacks its counterpart row") });
            }
            (None, None) => unreachable!(),
        };
        let category = o
            .category
            .parse::<SpeechActLabel>()
            .map_err(|e| FixtureError::SchemaError { row: orow, message: e.to_string() })?;
        if p.category.parse::<SpeechActLabel>().ok() != Some(category) {
            return Err(FixtureError::SchemaError { row: prow, message: format!("category differs from row {orow}") });
        }
        let rec = QueryPairRecord {
            qid,
            category,
            original_text: o.query_text,
            propositional_text: p.query_text,
            original_stats: RetrievalStats { min: o.min, max: o.max, mean: o.mean, std: o.std, segments: o.segments },
            propositional_stats: RetrievalStats {
                min: p.min,
                max: p.max,
                mean: p.mean,
                std: p.std,
                segments: p.segments,
            },
            original_distinct: o.distinct,
            propositional_distinct: p.distinct,
        };
        rec.validate().map_err(|message| FixtureError::SchemaError { row: orow, message })?;
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_has_nine_per_category() {
        let rows = bundled_fixtures();
        assert_eq!(rows.len(), 63);
        for c in SpeechActLabel::ALL {
            assert_eq!(rows.iter().filter(|r| r.category == c).count(), 9, "{c}");
        }
    }

    #[test]
    fn qid_5_original() {
        let r = bundled_fixtures().iter().find(|r| r.qid == 5).unwrap();
        let s = r.original_stats;
        assert_eq!((s.min, s.max, s.mean, s.std, s.segments), (0.5531, 0.7539, 0.6490, 0.0835, 7));
        assert_eq!(r.original_distinct, 0);
    }

    #[test]
    fn malformed_row_is_named() {
        let csv = format!(
            "{}\n0,assertive,original,x,0.1,0.2,0.15,0.0,2,0\n0,assertive,propositional,x,abc,0.2,0.15,0,2,0\n",
            HEADER.join(",")
        );
        match parse_fixtures(csv.as_bytes()) {
            Err(FixtureError::SchemaError { row, .. }) => assert_eq!(row, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_counterpart_and_bad_header() {
        let csv = format!("{}\n0,assertive,original,x,0.1,0.2,0.15,0.0,2,0\n", HEADER.join(","));
        assert!(matches!(parse_fixtures(csv.as_bytes()), Err(FixtureError::SchemaError { row: 2, .. })));
        assert!(matches!(parse_fixtures("a,b\n".as_bytes()), Err(FixtureError::SchemaError { row: 1, .. })));
    }

    #[test]
    fn inconsistent_stats_rejected() {
        let csv = format!(
            "{}\n0,assertive,original,x,0.3,0.2,0.25,0.0,2,0\n0,assertive,propositional,x,0.1,0.2,0.15,0,2,0\n",
            HEADER.join(",")
        );
        assert!(matches!(parse_fixtures(csv.as_bytes()), Err(FixtureError::SchemaError { row: 2, .. })));
    }
}
