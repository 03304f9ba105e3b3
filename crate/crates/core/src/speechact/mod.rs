//! Speech-act classification and rule-based propositional content extraction.
//!
//! An utterance is treated as a force `F` applied to a propositional content
//! `p`. [`classify`] recovers the force as one of seven [`SpeechActLabel`]s by
//! looking for force-indicating devices (question leads, imperative verbs,
//! performative and attitudinal frames). [`extract_rule`] removes those
//! devices and returns `p` as a declarative sentence or topical phrase.
//!
//! Both functions are pure. The lexicons they consult live in a plain text
//! file (see [`IfidLexicon`]) so that domain-specific frames can be added
//! without touching code.

mod classify;
mod extract;
mod inflect;
mod lexicon;
mod normalize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classify::{classify, classify_text, classify_with};
pub use extract::{extract_rule, extract_rule_with};
pub use inflect::{reinflect, Reinflection};
pub use lexicon::{Frame, IfidLexicon, LexiconError, Slot};
pub use normalize::{comparable, normalize_text};

/// Illocutionary force category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeechActLabel {
    Assertive,
    Interrogative,
    Directive,
    Expressive,
    Commissive,
    Indirect,
    Declarative,
}

impl SpeechActLabel {
    /// All categories in reporting order.
    pub const ALL: [SpeechActLabel; 7] = [
        SpeechActLabel::Assertive,
        SpeechActLabel::Interrogative,
        SpeechActLabel::Directive,
        SpeechActLabel::Expressive,
        SpeechActLabel::Commissive,
        SpeechActLabel::Indirect,
        SpeechActLabel::Declarative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpeechActLabel::Assertive => "assertive",
            SpeechActLabel::Interrogative => "interrogative",
            SpeechActLabel::Directive => "directive",
            SpeechActLabel::Expressive => "expressive",
            SpeechActLabel::Commissive => "commissive",
            SpeechActLabel::Indirect => "indirect",
            SpeechActLabel::Declarative => "declarative",
        }
    }

    /// Capitalized name, for table captions.
    pub fn title(self) -> &'static str {
        match self {
            SpeechActLabel::Assertive => "Assertive",
            SpeechActLabel::Interrogative => "Interrogative",
            SpeechActLabel::Directive => "Directive",
            SpeechActLabel::Expressive => "Expressive",
            SpeechActLabel::Commissive => "Commissive",
            SpeechActLabel::Indirect => "Indirect",
            SpeechActLabel::Declarative => "Declarative",
        }
    }
}

impl fmt::Display for SpeechActLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown speech act category `{0}`")]
pub struct UnknownLabel(pub String);

impl FromStr for SpeechActLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        SpeechActLabel::ALL.into_iter().find(|l| l.as_str() == lower).ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("utterance is empty")]
pub struct EmptyUtterance;

/// A non-empty user utterance together with its normalized form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    text: String,
    normalized: String,
}

impl Utterance {
    pub fn new(text: impl Into<String>) -> Result<Self, EmptyUtterance> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(EmptyUtterance);
        }
        let normalized = normalize_text(&text);
        Ok(Utterance { text, normalized })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn normalized(&self) -> &str {
        &self.normalized
    }
}

impl FromStr for Utterance {
    type Err = EmptyUtterance;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Utterance::new(s)
    }
}

/// Identifier of one rewrite step, recorded in [`ExtractionTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    DropFrame,
    DropPoliteness,
    DropImperative,
    DropPronoun,
    DropFiller,
    DropWhWord,
    DropAuxiliary,
    DropArticle,
    DropPossessive,
    UnInvert,
    ReinflectPast,
    ReinflectPresent,
    Nominalize,
    Gerundize,
    Topicalize,
    Designate,
    StripQuestionMark,
    RemoteLlm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedFrame {
    pub lexicon: String,
    pub span: String,
}

/// Record of which indicators were found and which rewrites ran.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub matched_frames: Vec<MatchedFrame>,
    pub transforms_applied: Vec<Transform>,
}

impl ExtractionTrace {
    pub fn is_empty(&self) -> bool {
        self.matched_frames.is_empty() && self.transforms_applied.is_empty()
    }

    pub(crate) fn frame(&mut self, lexicon: &str, span: &str) {
        self.matched_frames.push(MatchedFrame { lexicon: lexicon.to_string(), span: span.to_string() });
    }

    pub(crate) fn push(&mut self, t: Transform) {
        self.transforms_applied.push(t);
    }
}

/// Propositional content extracted from an utterance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposition {
    pub text: String,
    pub source_category: SpeechActLabel,
    pub trace: ExtractionTrace,
}

/// Percentage of characters removed going from `original` to `proposition`.
/// Negative when the proposition is longer; `0.0` for an empty original.
pub fn char_reduction(original: &str, proposition: &str) -> f64 {
    let before = original.chars().count();
    if before == 0 {
        return 0.0;
    }
    let after = proposition.chars().count();
    100.0 * (before as f64 - after as f64) / before as f64
}

/// Checks the two invariants every proposition must satisfy: no question
/// mark, and no leading force-indicating frame. Returns the offending
/// lexicon name on failure.
pub fn proposition_violation(lex: &IfidLexicon, text: &str) -> Option<String> {
    if text.contains('?') {
        return Some("question mark".into());
    }
    lex.frame_prefixes()
        .find(|(_, phrase)| lexicon::prefix_len(text, phrase).is_some())
        .map(|(name, phrase)| format!("{name}: `{phrase}`"))
}

pub(crate) fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
