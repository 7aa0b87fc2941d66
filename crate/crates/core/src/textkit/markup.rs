//! Inline LaTeX cleanup for arXiv-style abstracts.

/// Placeholder token that replaces inline math.
pub const MATH_PLACEHOLDER: &str = "MATHEXPR";

const MATH_DELIMITERS: [(&str, &str); 4] = [("$$", "$$"), ("$", "$"), ("\\(", "\\)"), ("\\[", "\\]")];

/// Replaces inline math with [`MATH_PLACEHOLDER`], reduces `\cmd{arg}` to `arg`
/// and collapses whitespace. Unbalanced delimiters are left as they are.
pub fn strip_markup(raw: &str) -> String {
    let mut text = raw.to_string();
    loop {
        let next = reduce_commands(&replace_math(&text));
        if next == text {
            break;
        }
        text = next;
    }
    normalize_whitespace(&text)
}

fn replace_math(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    'outer: while !rest.is_empty() {
        for (open, close) in MATH_DELIMITERS {
            if let Some(body) = rest.strip_prefix(open) {
                // \$ is a literal dollar sign
                if open.starts_with('$') && out.ends_with('\\') {
                    out.push_str(open);
                    rest = body;
                    continue 'outer;
                }
                if let Some(end) = find_close(body, close) {
                    if end > 0 {
                        let after = &body[end + close.len()..];
                        push_placeholder(&mut out, after);
                        rest = after;
                        continue 'outer;
                    }
                }
                out.push_str(open);
                rest = body;
                continue 'outer;
            }
        }
        let ch = rest.chars().next().expect("non-empty");
        out.push(ch);
        rest = &rest[ch.len_utf8()..];
    }
    out
}

fn find_close(body: &str, close: &str) -> Option<usize> {
    let mut from = 0;
    while let Some(idx) = body[from..].find(close) {
        let at = from + idx;
        if close.starts_with('$') && at > 0 && body.as_bytes()[at - 1] == b'\\' {
            from = at + 1;
            continue;
        }
        return Some(at);
    }
    None
}

fn push_placeholder(out: &mut String, following: &str) {
    if out.chars().last().is_some_and(char::is_alphanumeric) {
        out.push(' ');
    }
    out.push_str(MATH_PLACEHOLDER);
    if following.chars().next().is_some_and(char::is_alphanumeric) {
        out.push(' ');
    }
}

/// One left-to-right pass of `\word{arg}` -> `arg`.
fn reduce_commands(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'\\' {
            let name_start = i + 1;
            let mut j = name_start;
            while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                j += 1;
            }
            if j > name_start && j < bytes.len() && bytes[j] == b'{' {
                if let Some(close) = matching_brace(bytes, j) {
                    out.push_str(&text[j + 1..close]);
                    i = close + 1;
                    continue;
                }
            }
        }
        let ch = text[i..].chars().next().expect("char boundary");
        out.push(ch);
        i += ch.len_utf8();
    }
    out
}

fn matching_brace(bytes: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (k, &b) in bytes.iter().enumerate().skip(open) {
        match b {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(k);
                }
            }
            _ => {}
        }
    }
    None
}

fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inline_math_becomes_placeholder() {
        assert_eq!(strip_markup("mass $m_e$ shift"), "mass MATHEXPR shift");
        assert_eq!(strip_markup("mass \\(m_e\\) shift"), "mass MATHEXPR shift");
        assert_eq!(strip_markup("see $$E = mc^2$$ here"), "see MATHEXPR here");
    }

    #[test]
    fn plain_prose_is_unchanged() {
        let s = "We propose a simple method. It works well on benchmarks.";
        assert_eq!(strip_markup(s), s);
    }

    #[test]
    fn commands_reduce_to_argument() {
        assert_eq!(strip_markup("\\textit{robust} bound"), "robust bound");
        assert_eq!(strip_markup("\\textbf{\\emph{very}} good"), "very good");
    }

    #[test]
    fn unbalanced_delimiters_survive() {
        assert_eq!(strip_markup("costs $5 only"), "costs $5 only");
        assert_eq!(strip_markup("\\textit{open"), "\\textit{open");
        assert_eq!(strip_markup("a \\$ b"), "a \\$ b");
    }

    #[test]
    fn math_glued_to_words_is_separated() {
        assert_eq!(strip_markup("the$k$-means"), "the MATHEXPR-means");
        assert_eq!(strip_markup("a $n$th root"), "a MATHEXPR th root");
    }

    #[test]
    fn whitespace_collapses() {
        assert_eq!(strip_markup("  a \n\t b  "), "a b");
    }

    proptest! {
        #[test]
        fn idempotent(s in "[a-z $\\\\(){}.,]{0,60}") {
            let once = strip_markup(&s);
            prop_assert_eq!(strip_markup(&once), once.clone());
        }
    }
}
