mod common;

use common::GOLDEN;
use propshift::evalkit::bundled_fixtures;
use propshift::speechact::{
    classify, classify_text, comparable, extract_rule, normalize_text, proposition_violation, reinflect, IfidLexicon,
    Reinflection, SpeechActLabel, Transform, Utterance,
};

fn u(s: &str) -> Utterance {
    Utterance::new(s).unwrap()
}

#[test]
fn golden_rows_classify_and_extract() {
    for (label, input, expected) in GOLDEN {
        assert_eq!(classify(&u(input)), label, "{input}");
        assert_eq!(comparable(&extract_rule(&u(input)).text), comparable(expected), "{input}");
    }
}

#[test]
fn every_fixture_query_is_classified_into_its_table() {
    for r in bundled_fixtures() {
        assert_eq!(classify(&u(&r.original_text)), r.category, "QID {}", r.qid);
    }
}

#[test]
fn outputs_are_assertive_and_well_formed() {
    let lex = IfidLexicon::bundled();
    for r in bundled_fixtures() {
        let p = extract_rule(&u(&r.original_text));
        assert_eq!(p.source_category, r.category);
        assert_eq!(classify_text(lex, &p.text), SpeechActLabel::Assertive, "QID {}: {}", r.qid, p.text);
        assert_eq!(proposition_violation(lex, &p.text), None, "QID {}", r.qid);
        assert!(!p.text.is_empty());
    }
}

#[test]
fn extraction_is_idempotent() {
    for r in bundled_fixtures() {
        let once = extract_rule(&u(&r.original_text)).text;
        let twice = extract_rule(&u(&once)).text;
        assert_eq!(once, twice, "QID {}", r.qid);
    }
}

#[test]
fn assertives_pass_through_except_the_one_edited_reference() {
    for r in bundled_fixtures().iter().filter(|r| r.category == SpeechActLabel::Assertive) {
        let p = extract_rule(&u(&r.original_text));
        assert_eq!(p.text, normalize_text(&r.original_text), "QID {}", r.qid);
        assert!(p.trace.is_empty());
        let matches = comparable(&p.text) == comparable(&r.propositional_text);
        assert_eq!(matches, r.qid != 6, "QID {}", r.qid);
    }
}

#[test]
fn worked_examples() {
    let p = extract_rule(&u("I wonder whether the 5x5 TECSummit provided insights into digital transformation."));
    assert_eq!(p.text, "The 5x5 TECSummit provided insights into digital transformation.");
    assert_eq!(p.source_category, SpeechActLabel::Indirect);
    assert_eq!(p.trace.matched_frames[0].lexicon, "indirect_frames");

    let p = extract_rule(&u("Is Seaborn providing international connectivity through the AMX-1 submarine cable?"));
    assert_eq!(p.text, "Seaborn provides international connectivity through the AMX-1 submarine cable.");
    assert!(p.trace.transforms_applied.contains(&Transform::UnInvert));
    assert!(p.trace.transforms_applied.contains(&Transform::ReinflectPresent));
}

#[test]
fn reinflection_examples() {
    let lex = IfidLexicon::bundled();
    let cases = [
        ("contribute", Reinflection::BaseToPast, "contributed"),
        ("postpone", Reinflection::BaseToPast, "postponed"),
        ("give", Reinflection::BaseToPast, "gave"),
        ("given", Reinflection::ParticipleToPast, "gave"),
        ("challenged", Reinflection::ParticipleToPast, "challenged"),
        ("providing", Reinflection::IngToPresent3sg, "provides"),
        ("providing", Reinflection::IngToBase, "provide"),
        ("come", Reinflection::BaseToPresent3sg, "comes"),
        ("read", Reinflection::BaseToGerund, "reading"),
        ("Share", Reinflection::BaseToGerund, "Sharing"),
    ];
    for (verb, mode, want) in cases {
        assert_eq!(reinflect(lex, verb, mode), want, "{verb} {mode:?}");
    }
}

#[test]
fn frames_are_case_insensitive_and_word_bounded() {
    assert_eq!(classify(&u("PLEASE list the fees.")), SpeechActLabel::Directive);
    assert_eq!(classify(&u("Island operators expanded coverage.")), SpeechActLabel::Assertive);
    assert_eq!(classify(&u("Whatever happened, Anatel approved it.")), SpeechActLabel::Assertive);
}

#[test]
fn empty_utterances_are_rejected() {
    assert!(Utterance::new("   ").is_err());
    assert!(Utterance::new("").is_err());
}

#[test]
fn readme_snippet() {
    let u = Utterance::new("Has TelComp challenged the charging of TPU fees?").unwrap();
    assert_eq!(classify(&u).as_str(), "interrogative");
    assert_eq!(extract_rule(&u).text, "TelComp challenged the charging of TPU fees.");
}
