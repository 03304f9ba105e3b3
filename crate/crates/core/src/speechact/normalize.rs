/// Canonical form used for matching and for comparing against reference strings.
///
/// Typographic quotes become ASCII, whitespace runs collapse to one space, the
/// ends are trimmed and a trailing run of sentence terminators is cut to its
/// first character.
pub fn normalize_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars() {
        let c = match c {
            '\u{2018}' | '\u{2019}' | '\u{201B}' | '\u{2032}' | '\u{00B4}' | '`' => '\'',
            '\u{201C}' | '\u{201D}' | '\u{201F}' | '\u{2033}' => '"',
            c => c,
        };
        if c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.push(c);
    }

    let body_len = out.trim_end_matches(is_terminator).len();
    if body_len < out.len() {
        let first = out[body_len..].chars().next().unwrap();
        out.truncate(body_len);
        out.push(first);
    }
    out
}

pub(crate) fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '?' | '!')
}

/// Strips one trailing `.` after normalization; the form used when comparing
/// extracted text with reference text.
pub fn comparable(text: &str) -> String {
    let mut n = normalize_text(text);
    if n.ends_with('.') {
        n.pop();
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes_apostrophes_and_space() {
        assert_eq!(normalize_text("Seaborn\u{2019}s  cable"), "Seaborn's cable");
    }

    #[test]
    fn identity_on_normal_text() {
        assert_eq!(normalize_text("abc"), "abc");
    }

    #[test]
    fn trims() {
        assert_eq!(normalize_text("  X.  "), "X.");
        assert_eq!(normalize_text("\tA\n\nB "), "A B");
    }

    #[test]
    fn keeps_one_terminator() {
        assert_eq!(normalize_text("Really?!"), "Really?");
        assert_eq!(normalize_text("Done..."), "Done.");
        assert_eq!(normalize_text("..."), ".");
    }

    #[test]
    fn comparable_drops_one_period() {
        assert_eq!(comparable("A b."), "A b");
        assert_eq!(comparable("A b"), "A b");
    }
}
