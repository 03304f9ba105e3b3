//! Minimal English verb morphology: enough to undo subject-auxiliary
//! inversion and build gerunds. Irregular tables come from the lexicon.

use super::lexicon::IfidLexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reinflection {
    /// `contribute` -> `contributed`
    BaseToPast,
    /// `challenged` -> `challenged`, `given` -> `gave`
    ParticipleToPast,
    /// `providing` -> `provides`
    IngToPresent3sg,
    /// `providing` -> `provide`
    IngToBase,
    /// `come` -> `comes`
    BaseToPresent3sg,
    /// `read` -> `reading`
    BaseToGerund,
}

/// Reinflects a single verb token. Casing of the first letter is preserved.
pub fn reinflect(lex: &IfidLexicon, verb: &str, mode: Reinflection) -> String {
    let lower = verb.to_lowercase();
    let out = match mode {
        Reinflection::BaseToPast => lex.irregular_past.get(&lower).cloned().unwrap_or_else(|| regular_past(&lower)),
        Reinflection::ParticipleToPast => lex.irregular_participle.get(&lower).cloned().unwrap_or(lower),
        Reinflection::IngToBase => ing_to_base(lex, &lower),
        Reinflection::IngToPresent3sg => present_3sg(&ing_to_base(lex, &lower)),
        Reinflection::BaseToPresent3sg => present_3sg(&lower),
        Reinflection::BaseToGerund => gerund(&lower),
    };
    match_case(verb, out)
}

fn match_case(template: &str, word: String) -> String {
    if template.chars().next().is_some_and(char::is_uppercase) {
        super::capitalize(&word)
    } else {
        word
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Single short vowel between consonants at the end of a one-syllable word.
fn doubles_final_consonant(word: &str) -> bool {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    if n < 3 {
        return false;
    }
    let (a, b, c) = (chars[n - 3], chars[n - 2], chars[n - 1]);
    let vowel_groups = chars
        .iter()
        .zip(std::iter::once(&' ').chain(chars.iter()))
        .filter(|(c, prev)| is_vowel(**c) && !is_vowel(**prev))
        .count();
    vowel_groups == 1 && !is_vowel(a) && is_vowel(b) && !is_vowel(c) && !matches!(c, 'w' | 'x' | 'y')
}

fn regular_past(base: &str) -> String {
    if base.ends_with('e') {
        format!("{base}d")
    } else if let Some(stem) = base.strip_suffix('y').filter(|s| s.chars().last().is_some_and(|c| !is_vowel(c))) {
        format!("{stem}ied")
    } else if doubles_final_consonant(base) {
        format!("{base}{}ed", base.chars().last().unwrap())
    } else {
        format!("{base}ed")
    }
}

fn present_3sg(base: &str) -> String {
    match base {
        "be" => return "is".into(),
        "have" => return "has".into(),
        "do" => return "does".into(),
        "go" => return "goes".into(),
        _ => {}
    }
    if ["s", "x", "z", "ch", "sh"].iter().any(|s| base.ends_with(s)) {
        format!("{base}es")
    } else if let Some(stem) = base.strip_suffix('y').filter(|s| s.chars().last().is_some_and(|c| !is_vowel(c))) {
        format!("{stem}ies")
    } else {
        format!("{base}s")
    }
}

fn gerund(base: &str) -> String {
    if let Some(stem) = base.strip_suffix("ie") {
        format!("{stem}ying")
    } else if base.ends_with('e') && !base.ends_with("ee") && base.len() > 2 {
        format!("{}ing", &base[..base.len() - 1])
    } else if doubles_final_consonant(base) {
        format!("{base}{}ing", base.chars().last().unwrap())
    } else {
        format!("{base}ing")
    }
}

fn ing_to_base(lex: &IfidLexicon, word: &str) -> String {
    if let Some(base) = lex.irregular_gerund.get(word) {
        return base.clone();
    }
    let Some(stem) = word.strip_suffix("ing").filter(|s| s.len() >= 2) else {
        return word.to_string();
    };
    if let Some(s) = stem.strip_suffix('y').filter(|_| stem.len() == 2) {
        // dying, lying, tying
        return format!("{s}ie");
    }
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    let last = chars[n - 1];
    let prev = chars[n - 2];
    if last == prev && !matches!(last, 'l' | 's' | 'z' | 'f') && !is_vowel(last) && n >= 4 {
        let (c, v) = (chars[n - 3], chars[n - 4]);
        if is_vowel(c) && !is_vowel(v) {
            return chars[..n - 1].iter().collect();
        }
    }
    if needs_silent_e(&chars) {
        return format!("{stem}e");
    }
    stem.to_string()
}

/// Whether a stem stripped of `-ing` lost a silent `e` (`provid`, `charg`).
fn needs_silent_e(stem: &[char]) -> bool {
    let n = stem.len();
    let last = stem[n - 1];
    let prev = stem[n - 2];
    let before = if n >= 3 { Some(stem[n - 3]) } else { None };
    let single_vowel = is_vowel(prev) && before.is_none_or(|c| !is_vowel(c));
    match last {
        'v' | 'c' => true,
        'z' => !matches!(prev, 'z'),
        'g' => matches!(prev, 'r' | 'd') || (prev == 'n' && before == Some('a')),
        'a' | 'e' | 'i' | 'o' | 'u' | 'w' | 'x' | 'y' => false,
        's' => matches!(prev, 'r' | 'n' | 'p' | 'l') || (single_vowel && n <= 3),
        'd' | 't' | 'k' | 'b' | 'r' | 'n' | 'm' | 'p' | 'l' => {
            single_vowel && prev != 'e' && !(last == 'n' && prev == 'o')
        }
        _ => false,
    }
}
