use super::classify::classify_text;
use super::inflect::{reinflect, Reinflection};
use super::lexicon::{match_frame, match_word, trim_separators, Frame, IfidLexicon, Slot};
use super::normalize::is_terminator;
use super::{capitalize, ExtractionTrace, Proposition, SpeechActLabel, Transform, Utterance};

/// Upper bound on rewrite passes; each pass removes at least one indicator.
const MAX_PASSES: usize = 4;

const BE_FORMS: &[&str] = &["is", "are", "am", "was", "were"];
const MODALS: &[&str] = &["can", "could", "will", "would", "should", "shall"];
const COMPLEMENTIZERS: &[&str] = &["how", "whether", "if", "what", "why", "where", "when"];
const SUBORDINATORS: &[&str] = &["after", "before", "once", "while", "until", "when"];
const SPEAKER_PRONOUNS: &[&str] = &["i", "we"];
const POSSESSIVE_DETERMINERS: &[&str] = &["its", "their", "his", "her"];
const PREPOSITIONS: &[&str] = &["in", "on", "at", "for", "with", "during", "of", "from", "to"];

/// Extracts with the bundled lexicon.
pub fn extract_rule(u: &Utterance) -> Proposition {
    extract_rule_with(IfidLexicon::bundled(), u)
}

/// Strips force-indicating devices from `u` and returns its propositional
/// content. Assertive input is returned as its normalized text with an empty
/// trace.
pub fn extract_rule_with(lex: &IfidLexicon, u: &Utterance) -> Proposition {
    let source_category = classify_text(lex, u.normalized());
    let mut trace = ExtractionTrace::default();
    let mut text = u.normalized().to_string();
    let mut category = source_category;

    for _ in 0..MAX_PASSES {
        if category == SpeechActLabel::Assertive {
            break;
        }
        let Some(step) = rewrite(lex, category, &text, &mut trace) else {
            break;
        };
        let next = finish(&step.text, step.bare);
        if next.is_empty() {
            break;
        }
        if next == text {
            break;
        }
        text = next;
        category = classify_text(lex, &text);
    }

    if text.contains('?') {
        // Degenerate input: nothing usable survived rewriting.
        text = finish(&text, false);
        trace.push(Transform::StripQuestionMark);
    }
    Proposition { text, source_category, trace }
}

struct Step {
    text: String,
    /// Bare topical phrase; no terminal period.
    bare: bool,
}

impl Step {
    fn clause(text: String) -> Option<Step> {
        Some(Step { text, bare: false })
    }
}

fn rewrite(lex: &IfidLexicon, category: SpeechActLabel, text: &str, trace: &mut ExtractionTrace) -> Option<Step> {
    let body = text.trim_end_matches(is_terminator);
    if text.contains('?') {
        trace.push(Transform::StripQuestionMark);
    }
    let body = body.replace('?', "");
    match category {
        SpeechActLabel::Assertive => None,
        SpeechActLabel::Interrogative => interrogative(lex, &body, trace),
        SpeechActLabel::Directive => directive(lex, &body, trace),
        SpeechActLabel::Expressive => framed(lex, &lex.expressive_frames, "expressive_frames", category, &body, trace),
        SpeechActLabel::Commissive => framed(lex, &lex.commissive_frames, "commissive_frames", category, &body, trace),
        SpeechActLabel::Indirect => framed(lex, &lex.indirect_frames, "indirect_frames", category, &body, trace),
        SpeechActLabel::Declarative => {
            framed(lex, &lex.declarative_frames, "declarative_frames", category, &body, trace)
        }
    }
}

/// Collapses whitespace, drops question marks and dangling punctuation,
/// capitalizes and terminates.
fn finish(text: &str, bare: bool) -> String {
    let cleaned: String = text.replace('?', " ");
    let joined = cleaned.split_whitespace().collect::<Vec<_>>().join(" ");
    let core = joined
        .trim_start_matches([',', ';', ':'])
        .trim_end_matches(|c: char| is_terminator(c) || c == ',' || c == ';' || c == ':')
        .trim();
    if core.is_empty() {
        return String::new();
    }
    let mut out = capitalize(core);
    if !bare {
        out.push('.');
    }
    out
}

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

fn lower(w: &str) -> String {
    w.to_lowercase()
}

fn in_list(list: &[String], w: &str) -> bool {
    let w = lower(w);
    list.contains(&w)
}

fn is_possessive(w: &str) -> bool {
    w.ends_with("'s") || (w.ends_with('\'') && w.len() > 1)
}

fn is_proper(w: &str) -> bool {
    w.chars().next().is_some_and(|c| c.is_uppercase() || c.is_ascii_digit())
}

// ---------------------------------------------------------------------------
// Interrogatives

fn interrogative(lex: &IfidLexicon, body: &str, trace: &mut ExtractionTrace) -> Option<Step> {
    let ws = words(body);
    let first = lower(ws.first()?);

    if in_list(&lex.wh_words, &first) {
        trace.frame("wh_words", &ws[0]);
        trace.push(Transform::DropWhWord);
        let rest = &ws[1..];
        let next = rest.first().map(|w| lower(w)).unwrap_or_default();
        if rest.is_empty() {
            return None;
        }
        if matches!(first.as_str(), "what" | "who" | "which") && BE_FORMS.contains(&next.as_str()) {
            // "What is NP?" asks for a definition: the NP is the content,
            // unless the clause carries its own progressive verb.
            let span = subject_span(lex, &rest[1..]);
            let after = skip_adverbs(lex, &rest[1..], span);
            let progressive = span > 0 && rest[1..].get(after).is_some_and(|w| lower(w).ends_with("ing"));
            if !progressive {
                trace.push(Transform::DropAuxiliary);
                return Step::clause(rest[1..].join(" "));
            }
        }
        if in_list(&lex.question_leads, &next) && !in_list(&lex.wh_words, &next) {
            return un_invert(lex, rest, trace).or_else(|| Step::clause(rest[1..].join(" ")));
        }
        return Step::clause(rest.join(" "));
    }

    if in_list(&lex.question_leads, &first) {
        return un_invert(lex, &ws, trace).or_else(|| {
            trace.push(Transform::DropAuxiliary);
            Step::clause(ws[1..].join(" "))
        });
    }
    Step::clause(body.to_string())
}

/// Length of the subject noun phrase at the start of `ws`.
fn subject_span(lex: &IfidLexicon, ws: &[String]) -> usize {
    let mut i = 0;
    while i < ws.len() && in_list(&lex.subject_determiners, &ws[i]) {
        i += 1;
    }
    if i >= ws.len() {
        return 0;
    }
    i += 1;
    while i < ws.len() {
        let w = &ws[i];
        if is_possessive(&ws[i - 1]) || is_proper(w) {
            i += 1;
        } else if matches!(lower(w).as_str(), "and" | "&" | "of") && ws.get(i + 1).is_some_and(|n| is_proper(n)) {
            i += 2;
        } else {
            break;
        }
    }
    i
}

fn skip_adverbs(lex: &IfidLexicon, ws: &[String], mut i: usize) -> usize {
    while i < ws.len() && in_list(&lex.adverbs, &ws[i]) {
        i += 1;
    }
    i
}

/// Undoes subject-auxiliary inversion in a yes/no question whose first word
/// is the auxiliary.
fn un_invert(lex: &IfidLexicon, ws: &[String], trace: &mut ExtractionTrace) -> Option<Step> {
    let aux = lower(ws.first()?);
    let rest = &ws[1..];
    let subj = subject_span(lex, rest);
    if subj == 0 {
        return None;
    }
    trace.frame("question_leads", &ws[0]);
    let verb_at = skip_adverbs(lex, rest, subj);
    let subject = &rest[..subj];
    let adverbs = &rest[subj..verb_at];
    let verb = rest.get(verb_at);
    let tail = rest.get(verb_at + 1..).unwrap_or(&[]);

    let assemble = |aux_word: Option<&str>, verb_word: Option<String>| -> String {
        let mut out: Vec<String> = subject.to_vec();
        if let Some(a) = aux_word {
            out.push(a.to_string());
        }
        out.extend(adverbs.iter().cloned());
        if let Some(v) = verb_word {
            out.push(v);
        }
        out.extend(tail.iter().cloned());
        out.join(" ")
    };

    trace.push(Transform::UnInvert);
    let text = match aux.as_str() {
        "did" | "does" | "do" => {
            let v = verb?;
            let mode = match aux.as_str() {
                "did" => Some((Reinflection::BaseToPast, Transform::ReinflectPast)),
                "does" => Some((Reinflection::BaseToPresent3sg, Transform::ReinflectPresent)),
                _ => None,
            };
            let v = match mode {
                Some((m, t)) => {
                    trace.push(t);
                    reinflect(lex, v, m)
                }
                None => v.clone(),
            };
            assemble(None, Some(v))
        }
        "has" | "have" => match verb {
            Some(v) => {
                trace.push(Transform::ReinflectPast);
                assemble(None, Some(reinflect(lex, v, Reinflection::ParticipleToPast)))
            }
            None => assemble(Some(&aux), None),
        },
        "is" | "am" | "are" => match verb {
            Some(v) if lower(v).ends_with("ing") && v.len() > 4 => {
                trace.push(Transform::ReinflectPresent);
                let mode = if aux == "are" { Reinflection::IngToBase } else { Reinflection::IngToPresent3sg };
                assemble(None, Some(reinflect(lex, v, mode)))
            }
            v => assemble(Some(&aux), v.cloned()),
        },
        a if BE_FORMS.contains(&a) || MODALS.contains(&a) || a == "had" => assemble(Some(&aux), verb.cloned()),
        _ => return None,
    };
    Step::clause(text)
}

// ---------------------------------------------------------------------------
// Directives

fn directive(lex: &IfidLexicon, body: &str, trace: &mut ExtractionTrace) -> Option<Step> {
    let mut rest = strip_trailing_politeness(lex, body, trace);
    let mut clause = false;
    let start = rest.clone();

    rest = strip_politeness(lex, &rest, trace);

    if let Some(m) = match_frame(&lex.performative_verbs, &rest) {
        trace.frame("performative_verbs", &m.span);
        trace.push(Transform::DropFrame);
        clause = m.frame.slot == Slot::Clause;
        rest = m.rest;
    } else if let Some((_, n)) = match_word(&lex.imperative_verbs, &rest) {
        trace.frame("imperative_verbs", &rest[..n]);
        trace.push(Transform::DropImperative);
        rest = trim_separators(&rest[n..]).to_string();

        if let Some((_, n)) = match_word(&lex.object_pronouns, &rest) {
            trace.push(Transform::DropPronoun);
            rest = trim_separators(&rest[n..]).to_string();
        }
        rest = strip_politeness(lex, &rest, trace);
        if let Some((filler, n)) = match_word(&lex.directive_fillers, &rest) {
            trace.push(Transform::DropFiller);
            clause = filler.ends_with(" how");
            rest = trim_separators(&rest[n..]).to_string();
        }
        let first = rest.split_whitespace().next().map(lower).unwrap_or_default();
        if COMPLEMENTIZERS.contains(&first.as_str()) && rest.split_whitespace().count() > 1 {
            trace.push(Transform::DropFiller);
            clause = true;
            rest = trim_separators(&rest[first.len()..]).to_string();
        }
    }

    if rest == start {
        return None;
    }
    if clause {
        return Step::clause(drop_progressive_aux(&rest, trace));
    }
    if let Some(np) = topicalize(lex, &rest) {
        trace.push(Transform::Topicalize);
        return Some(Step { text: np, bare: true });
    }
    Step::clause(drop_article(lex, &rest, trace))
}

fn strip_politeness(lex: &IfidLexicon, text: &str, trace: &mut ExtractionTrace) -> String {
    match match_word(&lex.politeness_terms, text) {
        Some((_, n)) => {
            trace.frame("politeness_terms", &text[..n]);
            trace.push(Transform::DropPoliteness);
            trim_separators(&text[n..]).to_string()
        }
        None => text.to_string(),
    }
}

fn strip_trailing_politeness(lex: &IfidLexicon, text: &str, trace: &mut ExtractionTrace) -> String {
    let trimmed = text.trim_end();
    for term in &lex.politeness_terms {
        let lowered = trimmed.to_lowercase();
        if let Some(head) = lowered.strip_suffix(term.as_str()) {
            if head.ends_with(' ') || head.ends_with(',') {
                trace.frame("politeness_terms", &trimmed[head.len()..]);
                trace.push(Transform::DropPoliteness);
                return trimmed[..head.len()].trim_end_matches([' ', ',']).to_string();
            }
        }
    }
    trimmed.to_string()
}

/// "X are improving Y" -> "X improving Y": a topical gerund phrase.
fn drop_progressive_aux(text: &str, trace: &mut ExtractionTrace) -> String {
    let ws = words(text);
    let pos = (1..ws.len().saturating_sub(1))
        .find(|&i| matches!(lower(&ws[i]).as_str(), "is" | "are") && lower(&ws[i + 1]).ends_with("ing"));
    match pos {
        Some(i) => {
            trace.push(Transform::DropAuxiliary);
            ws.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, w)| w.as_str()).collect::<Vec<_>>().join(" ")
        }
        None => text.to_string(),
    }
}

fn drop_article(lex: &IfidLexicon, text: &str, trace: &mut ExtractionTrace) -> String {
    match match_word(&lex.articles, text) {
        Some((_, n)) if text.len() > n => {
            trace.push(Transform::DropArticle);
            trim_separators(&text[n..]).to_string()
        }
        _ => text.to_string(),
    }
}

/// Moves the agent of a reduced relative clause in front of its head noun:
/// "the discounts Acme offered in its 2020 sale in Brazil" becomes
/// "Acme 2020 sale discounts in Brazil".
fn topicalize(lex: &IfidLexicon, text: &str) -> Option<String> {
    let ws = words(text);
    let mut i = 0;
    if ws.first().is_some_and(|w| in_list(&lex.articles, w)) {
        i = 1;
    }
    let head_start = i;
    while i < ws.len() && !is_proper(&ws[i]) && i - head_start < 3 {
        i += 1;
    }
    let head = &ws[head_start..i];
    if head.is_empty() || head.iter().any(|w| !w.chars().all(|c| c.is_alphabetic() || c == '-')) {
        return None;
    }
    let agent_start = i;
    while i < ws.len() && is_proper(&ws[i]) {
        i += 1;
    }
    let agent = &ws[agent_start..i];
    if agent.is_empty() {
        return None;
    }
    let verb = lower(ws.get(i)?);
    if !(verb.ends_with("ed") || lex.irregular_past.values().any(|p| *p == verb)) {
        return None;
    }
    let prep = lower(ws.get(i + 1)?);
    let poss = lower(ws.get(i + 2)?);
    if !PREPOSITIONS.contains(&prep.as_str()) || !POSSESSIVE_DETERMINERS.contains(&poss.as_str()) {
        return None;
    }
    let mod_start = i + 3;
    let mut j = mod_start;
    while j < ws.len() && !PREPOSITIONS.contains(&lower(&ws[j]).as_str()) {
        j += 1;
    }
    if j == mod_start {
        return None;
    }
    let out: Vec<&str> =
        agent.iter().chain(&ws[mod_start..j]).chain(head).chain(&ws[j..]).map(String::as_str).collect();
    Some(out.join(" "))
}

// ---------------------------------------------------------------------------
// Frame-introduced acts: expressive, commissive, indirect, declarative

fn framed(
    lex: &IfidLexicon,
    frames: &[Frame],
    lexicon_name: &str,
    category: SpeechActLabel,
    body: &str,
    trace: &mut ExtractionTrace,
) -> Option<Step> {
    let m = match_frame(frames, body)?;
    if m.rest.is_empty() {
        return None;
    }
    trace.frame(lexicon_name, &m.span);
    trace.push(Transform::DropFrame);
    match m.frame.slot {
        Slot::Clause => Step::clause(m.rest),
        Slot::NounPhrase => Step::clause(drop_article(lex, &m.rest, trace)),
        Slot::Designation => match designate(&m.rest) {
            Some(t) => {
                trace.push(Transform::Designate);
                Step::clause(t)
            }
            None => Step::clause(drop_article(lex, &m.rest, trace)),
        },
        Slot::Verb => Step::clause(verbal(lex, &m.rest, None, category, trace)),
        Slot::Modal => {
            let subject = m.span.split_whitespace().next().unwrap_or_default().to_string();
            Step::clause(verbal(lex, &m.rest, Some(&subject), category, trace))
        }
    }
}

/// "X as Y" -> "X is Y".
fn designate(text: &str) -> Option<String> {
    let lowered = text.to_lowercase();
    let at = lowered.find(" as ")?;
    Some(format!("{} is {}", &text[..at], &text[at + 4..]))
}

/// Handles the verb phrase after "to"/"will" frames. A verb with a listed
/// noun form is nominalized; otherwise the clause is kept, with the subject
/// restored when the frame was modal.
fn verbal(
    lex: &IfidLexicon,
    rest: &str,
    subject: Option<&str>,
    category: SpeechActLabel,
    trace: &mut ExtractionTrace,
) -> String {
    let mut ws = words(rest);
    let Some(first) = ws.first().map(|w| lower(w)) else {
        return rest.to_string();
    };
    if first.ends_with("ing") && first.len() > 4 {
        return rest.to_string();
    }
    if let Some(noun) = lex.noun_forms.get(&first) {
        trace.push(Transform::Nominalize);
        ws.splice(0..1, noun.split_whitespace().map(str::to_string));
        if category == SpeechActLabel::Commissive {
            let head_len = noun.split_whitespace().count();
            impersonalize(lex, &mut ws, head_len, trace);
        }
        return ws.join(" ");
    }
    match subject {
        Some(s) => {
            trace.push(Transform::DropAuxiliary);
            format!("{s} {rest}")
        }
        None => rest.to_string(),
    }
}

/// Removes the speaker from a nominalized commitment: a possessive right
/// after the head is dropped, later ones become "the", and "after I read"
/// becomes "after reading".
fn impersonalize(lex: &IfidLexicon, ws: &mut Vec<String>, head_len: usize, trace: &mut ExtractionTrace) {
    if ws.get(head_len).is_some_and(|w| in_list(&lex.first_person_possessives, w)) {
        ws.remove(head_len);
        trace.push(Transform::DropPossessive);
    }
    for w in ws.iter_mut().skip(head_len) {
        if in_list(&lex.first_person_possessives, w) {
            *w = "the".to_string();
            trace.push(Transform::DropPossessive);
        }
    }
    let mut i = head_len;
    while i + 2 < ws.len() {
        if SUBORDINATORS.contains(&lower(&ws[i]).as_str()) && SPEAKER_PRONOUNS.contains(&lower(&ws[i + 1]).as_str()) {
            let g = reinflect(lex, &ws[i + 2], Reinflection::BaseToGerund);
            ws.splice(i + 1..i + 3, [g]);
            trace.push(Transform::Gerundize);
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speechact::comparable;

    fn ex(s: &str) -> Proposition {
        extract_rule(&Utterance::new(s).unwrap())
    }

    fn assert_extracts(input: &str, expected: &str) {
        let p = ex(input);
        assert_eq!(comparable(&p.text), comparable(expected), "input: {input}");
    }

    #[test]
    fn assertive_is_identity_with_empty_trace() {
        let p = ex("The new Anatel Licensing Regulation began to be enforced on November 3.");
        assert_eq!(p.text, "The new Anatel Licensing Regulation began to be enforced on November 3.");
        assert!(p.trace.is_empty());
        assert_eq!(p.source_category, SpeechActLabel::Assertive);
    }

    #[test]
    fn perfect_aspect_question() {
        assert_extracts(
            "Has TelComp challenged the charging of TPU fees in other municipalities?",
            "TelComp challenged the charging of TPU fees in other municipalities.",
        );
    }

    #[test]
    fn progressive_question() {
        assert_extracts(
            "Is Seaborn providing international connectivity through the AMX-1 submarine cable?",
            "Seaborn provides international connectivity through the AMX-1 submarine cable.",
        );
    }

    #[test]
    fn do_support_with_possessive_subject() {
        assert_extracts(
            "Does Blob\u{2019}s device come with a built-in location system for customers in Rio and São Paulo?",
            "Blob's device comes with a built-in location system for customers in Rio and São Paulo.",
        );
    }

    #[test]
    fn wh_object_question() {
        assert_extracts("What did Artur Coimbra say?", "Artur Coimbra said.");
    }

    #[test]
    fn wh_definition_question() {
        assert_extracts(
            "What is Christiano Morette\u{2019}s role at Highline?",
            "Christiano Morette's role at Highline.",
        );
    }

    #[test]
    fn passive_question_keeps_be() {
        assert_extracts(
            "Are operators required to harmonize station licensing under the new Anatel RGL?",
            "Operators are required to harmonize station licensing under the new Anatel RGL.",
        );
    }

    #[test]
    fn directive_with_reduced_relative() {
        let p = ex("List the discounts Disney+ offered in its 2020 pre-sale in Brazil.");
        assert_eq!(p.text, "Disney+ 2020 pre-sale discounts in Brazil");
        assert!(p.trace.transforms_applied.contains(&Transform::Topicalize));
    }

    #[test]
    fn directive_with_pronoun_and_filler() {
        assert_extracts(
            "Tell me more about the appointment of Christiano Morette at Highline.",
            "Appointment of Christiano Morette at Highline.",
        );
        assert_extracts(
            "Provide information on how Seaborn and Telecall are improving submarine cable connectivity.",
            "Seaborn and Telecall improving submarine cable connectivity.",
        );
    }

    #[test]
    fn politeness_is_removed() {
        assert_extracts("Please show the Anatel auction results.", "Anatel auction results.");
        assert_extracts("Show the Anatel auction results, please.", "Anatel auction results.");
    }

    #[test]
    fn expressive_frames() {
        assert_extracts(
            "It\u{2019}s surprising that Seaborn quickly activated its services after connecting the AMX-1 cable.",
            "Seaborn quickly activated its services after connecting the AMX-1 cable.",
        );
        assert_extracts(
            "I am thrilled about the 5x5 TECSummit\u{2019}s focus on digital markets.",
            "5x5 TECSummit's focus on digital markets.",
        );
        assert_extracts("Unfortunately, the auction was delayed.", "The auction was delayed.");
    }

    #[test]
    fn commissive_nominalization() {
        assert_extracts(
            "I will share my summary of the 5x5 TECSummit after I read all related articles.",
            "Sharing summary of the 5x5 TECSummit after reading all related articles.",
        );
        assert_extracts(
            "I plan to report on the new Anatel RGL in our monthly regulatory newsletter.",
            "Report on the new Anatel RGL in the monthly regulatory newsletter.",
        );
    }

    #[test]
    fn commissive_without_noun_form_keeps_subject() {
        assert_extracts(
            "We will highlight Christiano Morette\u{2019}s operational initiatives in our next board review.",
            "We highlight Christiano Morette's operational initiatives in our next board review.",
        );
    }

    #[test]
    fn commissive_with_gerund_complement() {
        assert_extracts(
            "I commit to following the Anatel satellite auction process and sharing all updates.",
            "Following the Anatel satellite auction process and sharing all updates.",
        );
    }

    #[test]
    fn indirect_frames() {
        assert_extracts(
            "Could it be that Seaborn\u{2019}s partnership with Telecall ensures better redundancy in Rio?",
            "Seaborn's partnership with Telecall ensures better redundancy in Rio.",
        );
        assert_extracts(
            "I wonder whether the 5x5 TECSummit provided insights into digital transformation.",
            "The 5x5 TECSummit provided insights into digital transformation.",
        );
    }

    #[test]
    fn indirect_then_directive() {
        // Two passes: the indirect frame, then the imperative it wrapped.
        assert_extracts("Could you please list the Anatel auction results?", "Anatel auction results.");
    }

    #[test]
    fn declarative_frames() {
        assert_extracts(
            "We hereby announce our intention to use the 5x5 TECSummit findings in our corporate strategy.",
            "Use of the 5x5 TECSummit findings in our corporate strategy.",
        );
        assert_extracts(
            "We declare the integration of Abrint\u{2019}s data into our official telecom analysis.",
            "Integration of Abrint's data into our official telecom analysis.",
        );
        assert_extracts(
            "We pronounce Telefónica Tech as a consolidated cybersecurity hub in Brazil.",
            "Telefónica Tech is a consolidated cybersecurity hub in Brazil.",
        );
    }

    #[test]
    fn degenerate_inputs_fall_back() {
        let p = ex("I will.");
        assert_eq!(p.text, "I will.");
        let p = ex("What?");
        assert!(!p.text.contains('?'));
        let p = ex("Thanks!");
        assert_eq!(p.text, "Thanks!");
        assert!(p.trace.is_empty());
    }

    #[test]
    fn trace_records_frames() {
        let p = ex("I wonder if the cable is live.");
        assert_eq!(p.trace.matched_frames[0].lexicon, "indirect_frames");
        assert_eq!(p.trace.matched_frames[0].span, "I wonder if");
        assert_eq!(p.trace.transforms_applied, vec![Transform::DropFrame]);
    }
}
