//! Force-indicator lexicons and the line-oriented file format that carries them.
//!
//! A lexicon file is UTF-8 text split into sections by `# lexicon: <name>`
//! headers. Every other line starting with `#` is a comment; blank lines are
//! ignored. Phrase lexicons hold one lowercase phrase per line, table
//! lexicons hold `key value` pairs (or `key => value` when the value spans
//! several words).

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

const BUNDLED: &str = include_str!("../../data/lexicon.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read lexicon file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// What a frame expects to find after itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Clause,
    NounPhrase,
    Verb,
    Modal,
    Designation,
}

impl Slot {
    fn from_marker(marker: &str) -> Option<Self> {
        match marker {
            "<clause>" => Some(Slot::Clause),
            "<np>" => Some(Slot::NounPhrase),
            "<verb>" => Some(Slot::Verb),
            "<modal>" => Some(Slot::Modal),
            "<designation>" => Some(Slot::Designation),
            _ => None,
        }
    }

    fn infer(phrase: &str) -> Self {
        let last = phrase.rsplit(' ').next().unwrap_or("");
        match last {
            "to" => Slot::Verb,
            "will" | "shall" => Slot::Modal,
            "that" | "whether" | "if" | "how" | "why" | "what" => Slot::Clause,
            "about" | "of" | "on" | "for" | "regarding" => Slot::NounPhrase,
            _ => Slot::Clause,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub phrase: String,
    pub slot: Slot,
}

/// A frame found at the start of a text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMatch<'a> {
    pub frame: &'a Frame,
    /// The matched span as written in the input (original casing).
    pub span: String,
    /// Text after the frame, with separating spaces and commas removed.
    pub rest: String,
}

/// Lexicons that drive classification and extraction.
#[derive(Debug, Clone, Default)]
pub struct IfidLexicon {
    pub question_leads: Vec<String>,
    pub wh_words: Vec<String>,
    pub imperative_verbs: Vec<String>,
    pub politeness_terms: Vec<String>,
    pub performative_verbs: Vec<Frame>,
    pub directive_fillers: Vec<String>,
    pub object_pronouns: Vec<String>,
    pub expressive_frames: Vec<Frame>,
    pub commissive_frames: Vec<Frame>,
    pub indirect_frames: Vec<Frame>,
    pub declarative_frames: Vec<Frame>,
    pub articles: Vec<String>,
    pub first_person_possessives: Vec<String>,
    pub subject_determiners: Vec<String>,
    pub adverbs: Vec<String>,
    pub noun_forms: HashMap<String, String>,
    pub irregular_past: HashMap<String, String>,
    pub irregular_participle: HashMap<String, String>,
    pub irregular_gerund: HashMap<String, String>,
}

impl IfidLexicon {
    /// The lexicon shipped with the crate.
    pub fn bundled() -> &'static IfidLexicon {
        static LEXICON: OnceLock<IfidLexicon> = OnceLock::new();
        LEXICON.get_or_init(|| IfidLexicon::parse(BUNDLED).expect("bundled lexicon is well-formed"))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses lexicon text. Sections not named in [`IfidLexicon`] are rejected,
    /// and a section that appears twice is extended rather than replaced.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = IfidLexicon::default();
        let mut section: Option<String> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                if let Some(name) = header.trim().strip_prefix("lexicon:") {
                    let name = name.trim().to_string();
                    if !KNOWN_SECTIONS.contains(&name.as_str()) {
                        return Err(LexiconError::Parse {
                            line: line_no,
                            message: format!("unknown lexicon `{name}`"),
                        });
                    }
                    section = Some(name);
                }
                continue;
            }
            let Some(name) = section.as_deref() else {
                return Err(LexiconError::Parse {
                    line: line_no,
                    message: "entry before any `# lexicon:` header".into(),
                });
            };
            if line.chars().any(char::is_uppercase) {
                return Err(LexiconError::Parse { line: line_no, message: format!("entry `{line}` is not lowercase") });
            }
            lex.add_entry(name, line).map_err(|message| LexiconError::Parse { line: line_no, message })?;
        }
        Ok(lex)
    }

    fn add_entry(&mut self, section: &str, line: &str) -> Result<(), String> {
        let word = || line.to_string();
        match section {
            "question_leads" => self.question_leads.push(word()),
            "wh_words" => self.wh_words.push(word()),
            "imperative_verbs" => self.imperative_verbs.push(word()),
            "politeness_terms" => self.politeness_terms.push(word()),
            "directive_fillers" => self.directive_fillers.push(word()),
            "object_pronouns" => self.object_pronouns.push(word()),
            "articles" => self.articles.push(word()),
            "first_person_possessives" => self.first_person_possessives.push(word()),
            "subject_determiners" => self.subject_determiners.push(word()),
            "adverbs" => self.adverbs.push(word()),
            "performative_verbs" => self.performative_verbs.push(parse_frame(line)),
            "expressive_frames" => self.expressive_frames.push(parse_frame(line)),
            "commissive_frames" => self.commissive_frames.push(parse_frame(line)),
            "indirect_frames" => self.indirect_frames.push(parse_frame(line)),
            "declarative_frames" => self.declarative_frames.push(parse_frame(line)),
            "noun_forms" => {
                let (k, v) =
                    line.split_once("=>").ok_or_else(|| format!("expected `verb => noun form`, got `{line}`"))?;
                self.noun_forms.insert(k.trim().to_string(), v.trim().to_string());
            }
            "irregular_past" | "irregular_participle" | "irregular_gerund" => {
                let mut parts = line.split_whitespace();
                let (Some(k), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(format!("expected `form form`, got `{line}`"));
                };
                let table = match section {
                    "irregular_past" => &mut self.irregular_past,
                    "irregular_participle" => &mut self.irregular_participle,
                    _ => &mut self.irregular_gerund,
                };
                table.insert(k.to_string(), v.to_string());
            }
            _ => unreachable!("section names are validated on header parse"),
        }
        Ok(())
    }

    /// Every phrase a proposition must not start with.
    pub fn frame_prefixes(&self) -> impl Iterator<Item = (&'static str, &str)> {
        let frames = [
            ("indirect_frames", &self.indirect_frames),
            ("expressive_frames", &self.expressive_frames),
            ("commissive_frames", &self.commissive_frames),
            ("declarative_frames", &self.declarative_frames),
            ("performative_verbs", &self.performative_verbs),
        ];
        frames
            .into_iter()
            .flat_map(|(name, list)| list.iter().map(move |f| (name, f.phrase.as_str())))
            .chain(self.politeness_terms.iter().map(|p| ("politeness_terms", p.as_str())))
    }
}

const KNOWN_SECTIONS: &[&str] = &[
    "question_leads",
    "wh_words",
    "imperative_verbs",
    "politeness_terms",
    "performative_verbs",
    "directive_fillers",
    "object_pronouns",
    "expressive_frames",
    "commissive_frames",
    "indirect_frames",
    "declarative_frames",
    "articles",
    "first_person_possessives",
    "subject_determiners",
    "adverbs",
    "noun_forms",
    "irregular_past",
    "irregular_participle",
    "irregular_gerund",
];

fn parse_frame(line: &str) -> Frame {
    if let Some((phrase, marker)) = line.rsplit_once(' ') {
        if let Some(slot) = Slot::from_marker(marker) {
            return Frame { phrase: phrase.trim().to_string(), slot };
        }
    }
    Frame { phrase: line.to_string(), slot: Slot::infer(line) }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.phrase)
    }
}

/// Length in bytes of `phrase` as a case-insensitive, word-bounded prefix of
/// `text`, or `None`.
pub(crate) fn prefix_len(text: &str, phrase: &str) -> Option<usize> {
    let mut t = text.char_indices();
    let mut end = 0;
    for pc in phrase.chars() {
        let (i, tc) = t.next()?;
        if !tc.to_lowercase().eq(pc.to_lowercase()) {
            return None;
        }
        end = i + tc.len_utf8();
    }
    match text[end..].chars().next() {
        Some(c) if c.is_alphanumeric() && phrase.chars().last().is_some_and(char::is_alphanumeric) => None,
        _ => Some(end),
    }
}

/// Longest frame of `frames` that prefixes `text`.
pub(crate) fn match_frame<'a>(frames: &'a [Frame], text: &str) -> Option<FrameMatch<'a>> {
    frames
        .iter()
        .filter_map(|f| prefix_len(text, &f.phrase).map(|n| (f, n)))
        .max_by(|(fa, a), (fb, b)| a.cmp(b).then_with(|| fb.phrase.cmp(&fa.phrase)))
        .map(|(frame, n)| FrameMatch {
            frame,
            span: text[..n].to_string(),
            rest: trim_separators(&text[n..]).to_string(),
        })
}

/// Longest word phrase of `words` that prefixes `text`, returned with the span length.
pub(crate) fn match_word<'a>(words: &'a [String], text: &str) -> Option<(&'a str, usize)> {
    words
        .iter()
        .filter_map(|w| prefix_len(text, w).map(|n| (w.as_str(), n)))
        .max_by(|(wa, a), (wb, b)| a.cmp(b).then_with(|| wb.cmp(wa)))
}

pub(crate) fn trim_separators(s: &str) -> &str {
    s.trim_start_matches(|c: char| c.is_whitespace() || c == ',' || c == ':' || c == ';')
}
