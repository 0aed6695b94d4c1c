//! Small English string helpers shared by the crawler and the renderer.

/// Lowercases, trims, and collapses runs of whitespace.
pub fn normalize_phrase(raw: &str) -> String {
    raw.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Base form of a third-person-singular present verb ("finds" -> "find",
/// "watches" -> "watch", "carries" -> "carry"). Words that do not look
/// inflected are returned unchanged.
pub fn verb_base_form(word: &str) -> String {
    match word {
        "has" => return "have".into(),
        "does" => return "do".into(),
        "goes" => return "go".into(),
        "is" => return "be".into(),
        _ => {}
    }
    if word.len() > 3 && word.ends_with("ies") {
        return format!("{}y", &word[..word.len() - 3]);
    }
    for suffix in ["sses", "shes", "ches", "xes", "zes", "oes"] {
        if word.len() > suffix.len() && word.ends_with(suffix) {
            return word[..word.len() - 2].to_string();
        }
    }
    if word.len() > 2 && word.ends_with('s') && !word.ends_with("ss") && !word.ends_with("us") {
        return word[..word.len() - 1].to_string();
    }
    word.to_string()
}

/// Auxiliaries and copulas after which a plain `not` can be inserted.
const AUXILIARIES: [&str; 16] = [
    "is", "are", "was", "were", "will", "would", "should", "can", "could", "must", "may",
    "might", "shall", "does", "do", "did",
];

/// Negates a verb phrase by attaching `not` to its leading verb group:
/// `is worse at x` -> `is not worse at x`, `finds it harder` -> `does not
/// find it harder`.
pub fn negate_verb_phrase(phrase: &str) -> String {
    let phrase = phrase.trim();
    let (head, rest) = match phrase.split_once(' ') {
        Some((h, r)) => (h, Some(r)),
        None => (phrase, None),
    };
    let negated_head = if AUXILIARIES.contains(&head.to_lowercase().as_str()) {
        format!("{head} not")
    } else if head == "has" && rest.is_some_and(|r| r.starts_with("been ")) {
        "has not".to_string()
    } else {
        format!("does not {}", verb_base_form(head))
    };
    match rest {
        Some(r) => format!("{negated_head} {r}"),
        None => negated_head,
    }
}

/// Uppercases the first character.
pub fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Number of chars (not bytes) in `s`; spans are expressed in chars so
/// that consumers in other languages can index the same way.
pub fn char_len(s: &str) -> usize {
    s.chars().count()
}
