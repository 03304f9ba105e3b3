//! Document ingestion into a two-layer vector index (one full-text chunk per
//! document plus one chunk per paragraph), persistence, and exhaustive
//! cosine search.

mod index_io;
mod search;

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{Embedder, EmbeddingError, EmbeddingProviderConfig, EmbeddingVector};
use crate::pool::bounded_map;

pub use index_io::{load_index, read_index, save_index, write_index, FORMAT_VERSION, MAGIC};
pub use search::{search, Hit, SearchMode, SearchPolicy};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("corpus line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate doc_id `{0}`")]
    DuplicateDocId(String),
    #[error("document `{0}` has neither title nor body")]
    EmptyDocument(String),
    #[error("embedding document `{doc_id}`: {source}")]
    Embedding { doc_id: String, source: EmbeddingError },
    #[error("dimension mismatch: index has {expected}, query has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid search policy: {0}")]
    InvalidPolicy(String),
    #[error("not an index file")]
    BadMagic,
    #[error("index format version {found} is not supported (expected {expected})")]
    FormatVersionMismatch { expected: u32, found: u32 },
    #[error("corrupt index: {0}")]
    Corrupt(String),
}

impl CorpusError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CorpusError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub body: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    #[serde(rename = "full")]
    FullText,
    Paragraph,
}

impl Layer {
    pub fn as_str(self) -> &'static str {
        match self {
            Layer::FullText => "full",
            Layer::Paragraph => "paragraph",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chunk {
    pub chunk_id: String,
    pub doc_id: String,
    pub layer: Layer,
    pub ordinal: u32,
    pub text: String,
    pub vector: EmbeddingVector,
}

pub fn full_text_id(doc_id: &str) -> String {
    format!("{doc_id}#full")
}

pub fn paragraph_id(doc_id: &str, ordinal: u32) -> String {
    format!("{doc_id}#p{ordinal:04}")
}

/// An immutable flat vector index.
#[derive(Debug, Clone, PartialEq)]
pub struct Index {
    dim: usize,
    chunks: Vec<Chunk>,
}

impl Index {
    /// Builds an index, checking that every vector has dimension `dim`.
    pub fn new(dim: usize, chunks: Vec<Chunk>) -> Result<Self, CorpusError> {
        if let Some(c) = chunks.iter().find(|c| c.vector.dim() != dim) {
            return Err(CorpusError::DimensionMismatch { expected: dim, found: c.vector.dim() });
        }
        Ok(Index { dim, chunks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn chunks(&self) -> &[Chunk] {
        &self.chunks
    }

    pub fn len(&self) -> usize {
        self.chunks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }

    pub fn summary(&self) -> IngestSummary {
        let docs = self.chunks.iter().filter(|c| c.layer == Layer::FullText).count();
        IngestSummary { docs, paragraphs: self.chunks.len() - docs, chunks: self.chunks.len() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IngestSummary {
    pub docs: usize,
    pub paragraphs: usize,
    pub chunks: usize,
}

impl fmt::Display for IngestSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "docs={} paragraphs={} chunks={}", self.docs, self.paragraphs, self.chunks)
    }
}

/// Splits a body on blank lines. Whitespace-only paragraphs are dropped.
pub fn segment_paragraphs(body: &str) -> Vec<String> {
    let canon = body.replace("\r\n", "\n").replace('\r', "\n");
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in canon.split('\n') {
        if line.trim().is_empty() {
            flush(&mut current, &mut out);
        } else {
            current.push(line);
        }
    }
    flush(&mut current, &mut out);
    out
}

fn flush(lines: &mut Vec<&str>, out: &mut Vec<String>) {
    if !lines.is_empty() {
        let para = lines.join("\n").trim().to_string();
        if !para.is_empty() {
            out.push(para);
        }
        lines.clear();
    }
}

fn full_text(doc: &Document) -> String {
    match doc.title.as_deref().map(str::trim).filter(|t| !t.is_empty()) {
        Some(t) if doc.body.trim().is_empty() => t.to_string(),
        Some(t) => format!("{t}\n\n{}", doc.body.trim()),
        None => doc.body.trim().to_string(),
    }
}

/// Embeds every document and its paragraphs with the configured provider.
pub fn ingest(docs: &[Document], cfg: &EmbeddingProviderConfig) -> Result<Index, CorpusError> {
    let embedder = Embedder::new(cfg).map_err(|source| CorpusError::Embedding { doc_id: String::new(), source })?;
    ingest_with(docs, &embedder)
}

pub fn ingest_with(docs: &[Document], embedder: &Embedder) -> Result<Index, CorpusError> {
    let mut seen = HashSet::new();
    for d in docs {
        if !seen.insert(d.doc_id.as_str()) {
            return Err(CorpusError::DuplicateDocId(d.doc_id.clone()));
        }
        if full_text(d).is_empty() {
            return Err(CorpusError::EmptyDocument(d.doc_id.clone()));
        }
    }
    let per_doc = bounded_map(docs, embedder.parallelism(), |d| doc_chunks(d, embedder));
    let mut chunks = Vec::new();
    for r in per_doc {
        chunks.extend(r?);
    }
    Index::new(embedder.dim(), chunks)
}

fn doc_chunks(doc: &Document, embedder: &Embedder) -> Result<Vec<Chunk>, CorpusError> {
    let mut texts = vec![(Layer::FullText, 0u32, full_text(doc))];
    for (i, p) in segment_paragraphs(&doc.body).into_iter().enumerate() {
        texts.push((Layer::Paragraph, i as u32, p));
    }
    let refs: Vec<&str> = texts.iter().map(|(_, _, t)| t.as_str()).collect();
    let vectors =
        embedder.embed_batch(&refs).map_err(|source| CorpusError::Embedding { doc_id: doc.doc_id.clone(), source })?;
    Ok(texts
        .into_iter()
        .zip(vectors)
        .map(|((layer, ordinal, text), vector)| Chunk {
            chunk_id: match layer {
                Layer::FullText => full_text_id(&doc.doc_id),
                Layer::Paragraph => paragraph_id(&doc.doc_id, ordinal),
            },
            doc_id: doc.doc_id.clone(),
            layer,
            ordinal,
            text,
            vector,
        })
        .collect())
}

/// Reads a JSON Lines corpus. Blank lines are skipped.
pub fn load_corpus(path: &Path) -> Result<Vec<Document>, CorpusError> {
    let file = std::fs::File::open(path).map_err(|e| CorpusError::io(path, e))?;
    parse_corpus(std::io::BufReader::new(file)).map_err(|e| match e {
        CorpusError::Io { source, .. } => CorpusError::io(path, source),
        other => other,
    })
}

pub fn parse_corpus(reader: impl BufRead) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CorpusError::io(Path::new("<corpus>"), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document =
            serde_json::from_str(&line).map_err(|e| CorpusError::Parse { line: i + 1, message: e.to_string() })?;
        docs.push(doc);
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, body: &str) -> Document {
        Document { doc_id: id.into(), title: Some(format!("Title {id}")), body: body.into() }
    }

    fn cfg() -> EmbeddingProviderConfig {
        EmbeddingProviderConfig::local(64, 16, 0)
    }

    #[test]
    fn segments_on_blank_runs() {
        assert_eq!(segment_paragraphs("A\n\nB"), vec!["A", "B"]);
        assert_eq!(segment_paragraphs("A\r\n\r\n\r\nB\n"), vec!["A", "B"]);
        assert_eq!(segment_paragraphs("one line\nsame paragraph"), vec!["one line\nsame paragraph"]);
        assert!(segment_paragraphs(" \n\t\n").is_empty());
        assert_eq!(segment_paragraphs("A\n   \nB"), vec!["A", "B"]);
    }

    #[test]
    fn chunk_counts() {
        let docs = vec![doc("a", "p1\n\np2\n\np3"), doc("b", "q1\n\nq2")];
        let ix = ingest(&docs, &cfg()).unwrap();
        assert_eq!(ix.summary().to_string(), "docs=2 paragraphs=5 chunks=7");
        assert_eq!(ix.chunks()[0].chunk_id, "a#full");
        assert_eq!(ix.chunks()[3].chunk_id, "a#p0002");
        assert_eq!(ix.chunks()[3].ordinal, 2);
    }

    #[test]
    fn empty_body_gives_single_full_text_chunk() {
        let ix = ingest(&[doc("e", "")], &cfg()).unwrap();
        assert_eq!(ix.len(), 1);
        assert_eq!(ix.chunks()[0].layer, Layer::FullText);
        assert_eq!(ix.chunks()[0].text, "Title e");
    }

    #[test]
    fn rejects_duplicates_and_blank_docs() {
        let dup = vec![doc("a", "x"), doc("a", "y")];
        assert!(matches!(ingest(&dup, &cfg()), Err(CorpusError::DuplicateDocId(id)) if id == "a"));
        let blank = Document { doc_id: "z".into(), title: None, body: " ".into() };
        assert!(matches!(ingest(&[blank], &cfg()), Err(CorpusError::EmptyDocument(_))));
    }

    #[test]
    fn full_scale_identity() {
        let s = IngestSummary { docs: 64_983, paragraphs: 189_585, chunks: 64_983 + 189_585 };
        assert_eq!(s.chunks, 254_568);
    }

    #[test]
    fn parse_jsonl() {
        let text = "{\"doc_id\":\"a\",\"title\":\"T\",\"body\":\"B\"}\n\n{\"doc_id\":\"b\",\"body\":\"C\"}\n";
        let docs = parse_corpus(text.as_bytes()).unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[1].title, None);
        let err = parse_corpus("{\"doc_id\":\"a\"}\nnot json\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CorpusError::Parse { line: 2, .. }));
    }
}
