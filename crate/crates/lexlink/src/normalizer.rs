//! Resolves raw translation and cue phrases to lookupable lemmas.
//!
//! Two naive suffix-rule lemmatizers (one per language side, each checked
//! against a presence oracle) plus a longest-combination search for
//! multiword phrases: contiguous token windows are tried longest-first,
//! joined by underscores; if none is found, the individual tokens that the
//! oracle accepts are returned instead. Bracketed tokens may only surface
//! inside a compound, never on their own.

/// Presence oracle: taxonomy lemmas on the target side, dictionary
/// headwords on the source side.
pub type Lookup<'a> = dyn Fn(&str) -> bool + 'a;

/// Per-token lemmatizer, already bound to its oracle.
pub type Lemmatize<'a> = dyn Fn(&str) -> Option<String> + 'a;

/// Articles and particles skipped in the components fallback. They still
/// participate in combination windows.
const STOPWORDS: [&str; 9] = ["the", "of", "a", "de", "d", "du", "des", "la", "le"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedKind {
    /// The phrase is a single token already present in the lexicon.
    Direct,
    /// A single token matched after suffix stripping.
    Morphological,
    /// A multi-token window matched as one underscore-joined lemma.
    Compound,
    /// No window matched; these are the individually present tokens.
    Components,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedPhrase {
    pub original: String,
    pub resolved: Vec<String>,
    pub kind: ResolvedKind,
}

impl ResolvedPhrase {
    fn unresolved(original: &str) -> Self {
        ResolvedPhrase {
            original: original.to_string(),
            resolved: Vec::new(),
            kind: ResolvedKind::Unresolved,
        }
    }
}

/// Target-side lemmatizer: identity, then `-s`, `-es`, `-ies -> -y`,
/// `-ves -> -f/-fe`, in that order, each candidate checked against the
/// oracle. Returns the first present form.
pub fn lemmatize_target(form: &str, present: &Lookup) -> Option<String> {
    if present(form) {
        return Some(form.to_string());
    }
    let mut candidates: Vec<String> = Vec::new();
    if let Some(stem) = form.strip_suffix('s') {
        if !stem.is_empty() {
            candidates.push(stem.to_string());
        }
    }
    if let Some(stem) = form.strip_suffix("es") {
        if !stem.is_empty() {
            candidates.push(stem.to_string());
        }
    }
    if let Some(stem) = form.strip_suffix("ies") {
        if !stem.is_empty() {
            candidates.push(format!("{stem}y"));
        }
    }
    if let Some(stem) = form.strip_suffix("ves") {
        if !stem.is_empty() {
            candidates.push(format!("{stem}f"));
            candidates.push(format!("{stem}fe"));
        }
    }
    candidates.into_iter().find(|c| present(c))
}

/// Source-side lemmatizer: identity, then `-s`, `-x`, `-aux -> -al`,
/// checked against the dictionary headword oracle.
pub fn lemmatize_source(form: &str, present: &Lookup) -> Option<String> {
    if present(form) {
        return Some(form.to_string());
    }
    let mut candidates: Vec<String> = Vec::new();
    if let Some(stem) = form.strip_suffix('s') {
        if !stem.is_empty() {
            candidates.push(stem.to_string());
        }
    }
    if let Some(stem) = form.strip_suffix('x') {
        if !stem.is_empty() {
            candidates.push(stem.to_string());
        }
    }
    if let Some(stem) = form.strip_suffix("aux") {
        if !stem.is_empty() {
            candidates.push(format!("{stem}al"));
        }
    }
    candidates.into_iter().find(|c| present(c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token {
    text: String,
    bracketed: bool,
}

/// Splits on whitespace, commas and apostrophes; parentheses delimit
/// tokens and mark everything inside as bracketed.
fn tokenize(phrase: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    let flush = |current: &mut String, depth: usize, tokens: &mut Vec<Token>| {
        if !current.is_empty() {
            tokens.push(Token {
                text: current.to_lowercase(),
                bracketed: depth > 0,
            });
            current.clear();
        }
    };
    for ch in phrase.chars() {
        match ch {
            '(' => {
                flush(&mut current, depth, &mut tokens);
                depth += 1;
            }
            ')' => {
                flush(&mut current, depth, &mut tokens);
                depth = depth.saturating_sub(1);
            }
            c if c.is_whitespace() || c == ',' || c == '\'' => {
                flush(&mut current, depth, &mut tokens);
            }
            c => current.push(c),
        }
    }
    flush(&mut current, depth, &mut tokens);
    tokens
}

fn is_stopword(token: &str) -> bool {
    STOPWORDS.contains(&token)
}

/// Resolves a raw phrase against a lexicon.
///
/// Single tokens go through the lemmatizer (`Direct` / `Morphological`).
/// Multi-token phrases try every contiguous window longest-first, ties by
/// leftmost start, the window joined by `_` and lemmatized as a whole
/// (`Compound`). If no window is present, each non-stopword, non-bracketed
/// token is lemmatized on its own and the hits are returned as
/// `Components`. A phrase with no hits at all is `Unresolved`.
pub fn resolve_complex(phrase: &str, lemmatize: &Lemmatize) -> ResolvedPhrase {
    let tokens = tokenize(phrase);
    match tokens.len() {
        0 => ResolvedPhrase::unresolved(phrase),
        1 => {
            let token = &tokens[0];
            if token.bracketed {
                // A fully bracketed phrase has no standalone words to offer.
                return ResolvedPhrase::unresolved(phrase);
            }
            match lemmatize(&token.text) {
                Some(lemma) => {
                    let kind = if lemma == token.text {
                        ResolvedKind::Direct
                    } else {
                        ResolvedKind::Morphological
                    };
                    ResolvedPhrase {
                        original: phrase.to_string(),
                        resolved: vec![lemma],
                        kind,
                    }
                }
                None => ResolvedPhrase::unresolved(phrase),
            }
        }
        n => {
            for width in (2..=n).rev() {
                for start in 0..=(n - width) {
                    let joined = tokens[start..start + width]
                        .iter()
                        .map(|t| t.text.as_str())
                        .collect::<Vec<_>>()
                        .join("_");
                    if let Some(lemma) = lemmatize(&joined) {
                        return ResolvedPhrase {
                            original: phrase.to_string(),
                            resolved: vec![lemma],
                            kind: ResolvedKind::Compound,
                        };
                    }
                }
            }
            let mut resolved: Vec<String> = Vec::new();
            for token in &tokens {
                if token.bracketed || is_stopword(&token.text) {
                    continue;
                }
                if let Some(lemma) = lemmatize(&token.text) {
                    if !resolved.contains(&lemma) {
                        resolved.push(lemma);
                    }
                }
            }
            if resolved.is_empty() {
                ResolvedPhrase::unresolved(phrase)
            } else {
                ResolvedPhrase {
                    original: phrase.to_string(),
                    resolved,
                    kind: ResolvedKind::Components,
                }
            }
        }
    }
}

/// Resolves a target-language phrase against taxonomy lemmas.
pub fn resolve_target_phrase(phrase: &str, present: &Lookup) -> ResolvedPhrase {
    resolve_complex(phrase, &|form| lemmatize_target(form, present))
}

/// Resolves a source-language phrase against dictionary headwords.
pub fn resolve_source_phrase(phrase: &str, present: &Lookup) -> ResolvedPhrase {
    resolve_complex(phrase, &|form| lemmatize_source(form, present))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn lexicon(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    fn resolve_t(phrase: &str, words: &[&str]) -> ResolvedPhrase {
        let lex = lexicon(words);
        resolve_target_phrase(phrase, &|w| lex.contains(w))
    }

    #[test]
    fn drums_strips_plural() {
        let lex = lexicon(&["drum"]);
        assert_eq!(
            lemmatize_target("drums", &|w| lex.contains(w)),
            Some("drum".to_string())
        );
    }

    #[test]
    fn present_form_is_identity() {
        let lex = lexicon(&["drum"]);
        assert_eq!(
            lemmatize_target("drum", &|w| lex.contains(w)),
            Some("drum".to_string())
        );
    }

    #[test]
    fn ies_rule_restores_y() {
        let lex = lexicon(&["lady"]);
        assert_eq!(
            lemmatize_target("ladies", &|w| lex.contains(w)),
            Some("lady".to_string())
        );
    }

    #[test]
    fn ves_rule_tries_f_then_fe() {
        let lex = lexicon(&["wolf", "knife"]);
        assert_eq!(
            lemmatize_target("wolves", &|w| lex.contains(w)),
            Some("wolf".to_string())
        );
        assert_eq!(
            lemmatize_target("knives", &|w| lex.contains(w)),
            Some("knife".to_string())
        );
    }

    #[test]
    fn source_identity_keeps_prix() {
        let dict = lexicon(&["prix"]);
        assert_eq!(
            lemmatize_source("prix", &|w| dict.contains(w)),
            Some("prix".to_string())
        );
    }

    #[test]
    fn source_aux_rule_finds_cheval() {
        let dict = lexicon(&["cheval"]);
        assert_eq!(
            lemmatize_source("chevaux", &|w| dict.contains(w)),
            Some("cheval".to_string())
        );
    }

    #[test]
    fn absent_form_stays_absent() {
        let dict: BTreeSet<String> = BTreeSet::new();
        assert_eq!(lemmatize_source("zzzs", &|w| dict.contains(w)), None);
    }

    #[test]
    fn married_couple_found_as_compound() {
        let got = resolve_t("the married couple", &["married_couple", "couple"]);
        assert_eq!(got.kind, ResolvedKind::Compound);
        assert_eq!(got.resolved, ["married_couple"]);
    }

    #[test]
    fn port_of_call_falls_back_to_components() {
        let got = resolve_t("port of call", &["port", "call"]);
        assert_eq!(got.kind, ResolvedKind::Components);
        assert_eq!(got.resolved, ["port", "call"]);
    }

    #[test]
    fn port_of_call_prefers_full_window() {
        let got = resolve_t("port of call", &["port", "call", "port_of_call"]);
        assert_eq!(got.kind, ResolvedKind::Compound);
        assert_eq!(got.resolved, ["port_of_call"]);
    }

    #[test]
    fn elided_cue_splits_into_nouns() {
        let dict = lexicon(&["eau", "prix"]);
        let got = resolve_source_phrase("d'eau, de prix", &|w| dict.contains(w));
        assert_eq!(got.kind, ResolvedKind::Components);
        assert_eq!(got.resolved, ["eau", "prix"]);
    }

    #[test]
    fn bracketed_token_never_stands_alone() {
        let got = resolve_t("(dead) body", &["body", "dead"]);
        assert_eq!(got.kind, ResolvedKind::Components);
        assert_eq!(got.resolved, ["body"]);
    }

    #[test]
    fn bracketed_token_allowed_inside_compound() {
        let got = resolve_t("(dead) body", &["dead_body"]);
        assert_eq!(got.kind, ResolvedKind::Compound);
        assert_eq!(got.resolved, ["dead_body"]);
    }

    #[test]
    fn single_present_token_is_direct() {
        let got = resolve_t("madness", &["madness"]);
        assert_eq!(got.kind, ResolvedKind::Direct);
        assert_eq!(got.resolved, ["madness"]);
    }

    #[test]
    fn single_plural_token_is_morphological() {
        let got = resolve_t("drums", &["drum"]);
        assert_eq!(got.kind, ResolvedKind::Morphological);
        assert_eq!(got.resolved, ["drum"]);
    }

    #[test]
    fn nothing_present_is_unresolved() {
        let got = resolve_t("zzz qqq", &["other"]);
        assert_eq!(got.kind, ResolvedKind::Unresolved);
        assert!(got.resolved.is_empty());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = String> {
            "[a-e]{1,4}"
        }

        fn phrase_and_lexicon() -> impl Strategy<Value = (String, BTreeSet<String>)> {
            (
                proptest::collection::vec(word(), 1..5),
                proptest::collection::btree_set(
                    proptest::collection::vec(word(), 1..3)
                        .prop_map(|ws| ws.join("_")),
                    0..12,
                ),
            )
                .prop_map(|(tokens, lex)| (tokens.join(" "), lex))
        }

        proptest! {
            #[test]
            fn resolved_lemmas_all_satisfy_oracle((phrase, lex) in phrase_and_lexicon()) {
                let got = resolve_target_phrase(&phrase, &|w| lex.contains(w));
                for lemma in &got.resolved {
                    prop_assert!(lex.contains(lemma), "invented lemma {lemma}");
                }
            }

            #[test]
            fn longest_present_window_wins((phrase, lex) in phrase_and_lexicon()) {
                let got = resolve_target_phrase(&phrase, &|w| lex.contains(w));
                let tokens: Vec<String> =
                    phrase.split_whitespace().map(str::to_string).collect();
                let n = tokens.len();
                let mut best = 0usize;
                if n > 1 {
                    for width in 2..=n {
                        for start in 0..=(n - width) {
                            if lex.contains(&tokens[start..start + width].join("_")) {
                                best = best.max(width);
                            }
                        }
                    }
                }
                if best > 0 {
                    prop_assert_eq!(got.kind, ResolvedKind::Compound);
                    let compound_width =
                        got.resolved[0].split('_').count();
                    prop_assert!(compound_width >= best);
                } else if n > 1 {
                    prop_assert_ne!(got.kind, ResolvedKind::Compound);
                }
            }

            #[test]
            fn resolution_is_deterministic((phrase, lex) in phrase_and_lexicon()) {
                let a = resolve_target_phrase(&phrase, &|w| lex.contains(w));
                let b = resolve_target_phrase(&phrase, &|w| lex.contains(w));
                prop_assert_eq!(a, b);
            }

            #[test]
            fn present_single_token_is_direct(token in word()) {
                let mut lex = BTreeSet::new();
                lex.insert(token.clone());
                let got = resolve_target_phrase(&token, &|w| lex.contains(w));
                prop_assert_eq!(got.kind, ResolvedKind::Direct);
                prop_assert_eq!(got.resolved, vec![token]);
            }
        }
    }
}
