//! Rule-based extraction with its trace.

use propshift::speechact::{char_reduction, extract_rule, Utterance};

fn main() {
    let utterances = [
        "Has TelComp challenged the charging of TPU fees in other municipalities?",
        "List the discounts Disney+ offered in its 2020 pre-sale in Brazil.",
        "I will share my summary of the 5x5 TECSummit after I read all related articles.",
        "Could it be that Seaborn's partnership with Telecall ensures better redundancy in Rio?",
    ];
    for text in utterances {
        let u = Utterance::new(text).expect("non-empty");
        let p = extract_rule(&u);
        println!("{} ({})", text, p.source_category);
        println!("  -> {}", p.text);
        for f in &p.trace.matched_frames {
            println!("     frame {}: {:?}", f.lexicon, f.span);
        }
        println!("     transforms {:?}", p.trace.transforms_applied);
        println!("     {:.1}% shorter", char_reduction(text, &p.text));
    }
}
