use super::lexicon::{match_frame, match_word, IfidLexicon};
use super::{SpeechActLabel, Utterance};

/// Classifies with the bundled lexicon.
pub fn classify(u: &Utterance) -> SpeechActLabel {
    classify_with(IfidLexicon::bundled(), u)
}

pub fn classify_with(lex: &IfidLexicon, u: &Utterance) -> SpeechActLabel {
    classify_text(lex, u.normalized())
}

/// Classifies already-normalized text.
///
/// Categories are tried in a fixed order and the first whose indicators are
/// present wins: declarative, commissive, expressive, indirect, directive,
/// interrogative. Text with no indicator is assertive.
pub fn classify_text(lex: &IfidLexicon, text: &str) -> SpeechActLabel {
    if match_frame(&lex.declarative_frames, text).is_some() {
        SpeechActLabel::Declarative
    } else if match_frame(&lex.commissive_frames, text).is_some() {
        SpeechActLabel::Commissive
    } else if match_frame(&lex.expressive_frames, text).is_some() {
        SpeechActLabel::Expressive
    } else if match_frame(&lex.indirect_frames, text).is_some() {
        SpeechActLabel::Indirect
    } else if is_directive(lex, text) {
        SpeechActLabel::Directive
    } else if is_interrogative(lex, text) {
        SpeechActLabel::Interrogative
    } else {
        SpeechActLabel::Assertive
    }
}

fn is_directive(lex: &IfidLexicon, text: &str) -> bool {
    match_word(&lex.politeness_terms, text).is_some()
        || match_word(&lex.imperative_verbs, text).is_some()
        || match_frame(&lex.performative_verbs, text).is_some()
}

fn is_interrogative(lex: &IfidLexicon, text: &str) -> bool {
    text.contains('?') || match_word(&lex.question_leads, text).is_some()
}
