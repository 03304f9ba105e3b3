//! Labels a few utterances with their speech-act category.
//!
//! cargo run --example classify -- "Could you show me the fees?"

use propshift::speechact::{classify, Utterance};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        vec![
            "Anatel approved the new licensing rules.".to_string(),
            "Has TelComp challenged the TPU fees?".to_string(),
            "Please list the fees charged in 2021.".to_string(),
            "I will review the auction results tomorrow.".to_string(),
            "It's surprising that the cable was activated so quickly.".to_string(),
            "I wonder whether the summit covered 5G.".to_string(),
            "We hereby declare the review closed.".to_string(),
        ]
    } else {
        args
    };
    for text in inputs {
        match Utterance::new(text.as_str()) {
            Ok(u) => println!("{:<13} {text}", classify(&u).as_str()),
            Err(e) => eprintln!("skipping: {e}"),
        }
    }
}
