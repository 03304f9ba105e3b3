#![allow(dead_code)]

use propshift::speechact::SpeechActLabel::{self, *};

/// (category, utterance, expected proposition)
pub const GOLDEN: [(SpeechActLabel, &str, &str); 7] = [
    (
        Assertive,
        "The new Anatel Licensing Regulation began to be enforced on November 3.",
        "The new Anatel Licensing Regulation began to be enforced on November 3.",
    ),
    (
        Interrogative,
        "Has TelComp challenged the charging of TPU fees in other municipalities?",
        "TelComp challenged the charging of TPU fees in other municipalities.",
    ),
    (
        Directive,
        "List the discounts Disney+ offered in its 2020 pre-sale in Brazil.",
        "Disney+ 2020 pre-sale discounts in Brazil",
    ),
    (
        Expressive,
        "It\u{2019}s surprising that Seaborn quickly activated its services after connecting the AMX-1 cable.",
        "Seaborn quickly activated its services after connecting the AMX-1 cable.",
    ),
    (
        Commissive,
        "I will share my summary of the 5x5 TECSummit after I read all related articles.",
        "Sharing summary of the 5x5 TECSummit after reading all related articles.",
    ),
    (
        Indirect,
        "Could it be that Seaborn\u{2019}s partnership with Telecall ensures better redundancy in Rio?",
        "Seaborn's partnership with Telecall ensures better redundancy in Rio.",
    ),
    (
        Declarative,
        "We hereby announce our intention to use the 5x5 TECSummit findings in our corporate strategy.",
        "Use of the 5x5 TECSummit findings in our corporate strategy.",
    ),
];

/// Reference per-category aggregates:
/// (category, [orig min, prop min, orig max, prop max, orig mean, prop mean]).
#[allow(clippy::approx_constant)]
pub const CATEGORY_AGGREGATES: [(SpeechActLabel, [f64; 6]); 7] = [
    (Assertive, [0.5531, 0.5531, 0.8137, 0.8100, 0.6871, 0.6827]),
    (Commissive, [0.4261, 0.4667, 0.6786, 0.7530, 0.5571, 0.6001]),
    (Declarative, [0.4493, 0.5300, 0.7570, 0.7761, 0.6224, 0.6396]),
    (Directive, [0.4478, 0.4836, 0.8008, 0.8124, 0.6405, 0.6619]),
    (Expressive, [0.4429, 0.5315, 0.7504, 0.8196, 0.6039, 0.6482]),
    (Indirect, [0.4209, 0.4666, 0.7334, 0.7913, 0.6002, 0.6503]),
    (Interrogative, [0.4532, 0.4601, 0.7854, 0.7891, 0.6449, 0.6526]),
];

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}
