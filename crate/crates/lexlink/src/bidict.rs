//! Bilingual dictionary parsing, subentry case classification, and the
//! two-direction merge into an equivalence-pair set.
//!
//! Input is a normalized TSV, one subentry per line, `#` starts a comment:
//!
//! ```text
//! <headword>\t<index>\t<pos>\t<cue|->\t<semfield|->\t<translation(;translation)*>
//! ```
//!
//! Direction (which side is the taxonomy language) is declared by the
//! caller, never inferred. A small convertor for the compact entry style
//! (`head N: pos (cue) (field.) trans, trans`) is provided for fixtures.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::normalizer::{self, ResolvedKind};
use crate::taxonomy::TaxonomyIndex;

/// One numbered sense of a bilingual headword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subentry {
    pub headword: String,
    pub index: u32,
    /// Recorded even when the subentry is filtered out by part of speech.
    pub pos: String,
    pub cue: Option<String>,
    pub semfield: Option<String>,
    /// Raw translation phrases, pre-normalization, in file order.
    pub translations: Vec<String>,
    /// True when `pos` did not match the requested filter.
    pub filtered: bool,
}

/// Non-exclusive classification of a subentry into the disambiguation
/// cases. `not_in_taxonomy` overrides: when no translation resolves, all
/// four case flags stay false.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CaseSet {
    pub case1_monosemous: bool,
    pub case2_multi_translation: bool,
    pub case3_cue: bool,
    pub case4_semfield: bool,
    pub not_in_taxonomy: bool,
}

impl CaseSet {
    pub fn unclassifiable(&self) -> bool {
        !self.not_in_taxonomy
            && !self.case1_monosemous
            && !self.case2_multi_translation
            && !self.case3_cue
            && !self.case4_semfield
    }

    pub fn any_case(&self) -> bool {
        self.case1_monosemous
            || self.case2_multi_translation
            || self.case3_cue
            || self.case4_semfield
    }
}

/// A (taxonomy-language noun, other-language noun) translation pair from
/// the merged dictionary. Both sides normalized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EquivalencePair {
    pub target_noun: String,
    pub source_noun: String,
}

impl EquivalencePair {
    pub fn new(target: &str, source: &str) -> Self {
        EquivalencePair {
            target_noun: normalize_lemma(target),
            source_noun: normalize_lemma(source),
        }
    }
}

/// Deduplicated pair set with both lookup directions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergedDictionary {
    pairs: BTreeSet<EquivalencePair>,
    by_target: BTreeMap<String, BTreeSet<String>>,
    by_source: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BidictError {
    #[error("line {line}: expected 6 tab-separated fields, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: empty headword")]
    EmptyHeadword { line: usize },
    #[error("line {line}: subentry index `{text}` is not a positive integer")]
    BadIndex { line: usize, text: String },
    #[error("line {line}: empty translation field")]
    EmptyTranslation { line: usize },
    #[error("cannot parse entry `{text}`")]
    BadInlineEntry { text: String },
}

/// Lowercases and joins internal whitespace with underscores.
pub fn normalize_lemma(raw: &str) -> String {
    raw.trim()
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
}

/// Parses the bilingual TSV. Subentries come back in file order; entries
/// whose part of speech does not match `pos_filter` are kept but flagged.
/// The filter matches on the first dot-separated component of the tag, so
/// `n` accepts `n.`, `n.m.` and `n.f.`.
pub fn parse_bidict(text: &str, pos_filter: &str) -> Result<Vec<Subentry>, BidictError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 6 {
            return Err(BidictError::MalformedLine {
                line,
                found: fields.len(),
            });
        }
        let headword = fields[0].trim();
        if headword.is_empty() {
            return Err(BidictError::EmptyHeadword { line });
        }
        let index: u32 = fields[1]
            .trim()
            .parse()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| BidictError::BadIndex {
                line,
                text: fields[1].trim().to_string(),
            })?;
        let pos = fields[2].trim().to_string();
        let cue = optional_field(fields[3]);
        let semfield = optional_field(fields[4]);
        let mut translations = Vec::new();
        for t in fields[5].split(';') {
            let t = t.trim();
            if t.is_empty() {
                return Err(BidictError::EmptyTranslation { line });
            }
            translations.push(t.to_string());
        }
        if translations.is_empty() {
            return Err(BidictError::EmptyTranslation { line });
        }
        let filtered = !pos_matches(&pos, pos_filter);
        out.push(Subentry {
            headword: headword.to_string(),
            index,
            pos,
            cue,
            semfield,
            translations,
            filtered,
        });
    }
    Ok(out)
}

fn optional_field(raw: &str) -> Option<String> {
    let v = raw.trim();
    if v.is_empty() || v == "-" {
        None
    } else {
        Some(v.to_string())
    }
}

fn pos_matches(pos: &str, filter: &str) -> bool {
    let head = pos.split('.').next().unwrap_or("");
    head.eq_ignore_ascii_case(filter.trim_end_matches('.'))
}

/// Fixture convertor for the compact entry style:
/// `head N: pos (cue) (field.) trans, trans`. A parenthesized group ending
/// in a dot with no spaces is a semantic field code; any other group is a
/// cue. Translations are comma-separated.
pub fn parse_inline_subentry(entry: &str) -> Result<Subentry, BidictError> {
    let bad = || BidictError::BadInlineEntry {
        text: entry.to_string(),
    };
    let (head_part, rest) = entry.split_once(':').ok_or_else(bad)?;
    let mut head_tokens = head_part.split_whitespace().collect::<Vec<_>>();
    let index: u32 = head_tokens
        .pop()
        .and_then(|t| t.parse().ok())
        .filter(|n| *n >= 1)
        .ok_or_else(bad)?;
    if head_tokens.is_empty() {
        return Err(bad());
    }
    let headword = head_tokens.join(" ");

    let mut rest = rest.trim();
    let pos_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let pos = rest[..pos_end].to_string();
    if pos.is_empty() {
        return Err(bad());
    }
    rest = rest[pos_end..].trim_start();

    let mut cue = None;
    let mut semfield = None;
    while rest.starts_with('(') {
        let close = rest.find(')').ok_or_else(bad)?;
        let group = rest[1..close].trim();
        let is_field = group.ends_with('.') && !group.contains(char::is_whitespace);
        if is_field {
            if semfield.replace(group.trim_end_matches('.').to_string()).is_some() {
                return Err(bad());
            }
        } else if cue.replace(group.to_string()).is_some() {
            return Err(bad());
        }
        rest = rest[close + 1..].trim_start();
    }

    let translations: Vec<String> = rest
        .trim_end_matches('.')
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect();
    if translations.is_empty() {
        return Err(bad());
    }

    Ok(Subentry {
        headword,
        index,
        pos,
        cue,
        semfield,
        translations,
        filtered: false,
    })
}

/// Resolves every translation phrase of a subentry to taxonomy lemmas,
/// deduplicated in first-appearance order.
pub fn resolved_translation_lemmas(s: &Subentry, tax: &TaxonomyIndex) -> Vec<String> {
    let mut lemmas = Vec::new();
    for phrase in &s.translations {
        let resolved = normalizer::resolve_target_phrase(phrase, &|w| tax.has_lemma(w));
        if resolved.kind == ResolvedKind::Unresolved {
            continue;
        }
        for lemma in resolved.resolved {
            if !lemmas.contains(&lemma) {
                lemmas.push(lemma);
            }
        }
    }
    lemmas
}

/// Flags the disambiguation cases a subentry belongs to. Case flags are
/// independent and non-exclusive; a subentry whose translations all miss
/// the taxonomy is `not_in_taxonomy` and carries no case flag.
pub fn classify_subentry(s: &Subentry, tax: &TaxonomyIndex) -> CaseSet {
    let lemmas = resolved_translation_lemmas(s, tax);
    if lemmas.is_empty() {
        return CaseSet {
            not_in_taxonomy: true,
            ..CaseSet::default()
        };
    }
    let distinct: BTreeSet<&str> = s.translations.iter().map(|t| t.trim()).collect();
    CaseSet {
        case1_monosemous: lemmas.iter().any(|l| tax.is_monosemous(l)),
        case2_multi_translation: distinct.len() > 1,
        case3_cue: s.cue.is_some(),
        case4_semfield: s.semfield.is_some(),
        not_in_taxonomy: false,
    }
}

impl MergedDictionary {
    pub fn from_pairs(pairs: impl IntoIterator<Item = EquivalencePair>) -> Self {
        let mut md = MergedDictionary::default();
        for pair in pairs {
            if pair.target_noun.is_empty() || pair.source_noun.is_empty() {
                continue;
            }
            md.by_target
                .entry(pair.target_noun.clone())
                .or_default()
                .insert(pair.source_noun.clone());
            md.by_source
                .entry(pair.source_noun.clone())
                .or_default()
                .insert(pair.target_noun.clone());
            md.pairs.insert(pair);
        }
        md
    }

    pub fn pairs(&self) -> &BTreeSet<EquivalencePair> {
        &self.pairs
    }

    pub fn target_nouns(&self) -> impl Iterator<Item = &str> {
        self.by_target.keys().map(String::as_str)
    }

    pub fn source_nouns(&self) -> impl Iterator<Item = &str> {
        self.by_source.keys().map(String::as_str)
    }

    pub fn target_count(&self) -> usize {
        self.by_target.len()
    }

    pub fn source_count(&self) -> usize {
        self.by_source.len()
    }

    pub fn sources_of(&self, target: &str) -> Option<&BTreeSet<String>> {
        self.by_target.get(target)
    }

    pub fn targets_of(&self, source: &str) -> Option<&BTreeSet<String>> {
        self.by_source.get(source)
    }
}

/// Set union of two same-orientation pair lists; the caller flips one
/// direction beforehand. Order-independent and idempotent.
pub fn merge_directions(
    ab: impl IntoIterator<Item = EquivalencePair>,
    ba: impl IntoIterator<Item = EquivalencePair>,
) -> MergedDictionary {
    MergedDictionary::from_pairs(ab.into_iter().chain(ba))
}

/// Extracts equivalence pairs from parsed subentries. With
/// `headword_is_target` the headword is the taxonomy-language noun and
/// every translation a source-language noun; otherwise the roles swap.
/// Filtered subentries contribute nothing.
pub fn pairs_from_subentries(subs: &[Subentry], headword_is_target: bool) -> Vec<EquivalencePair> {
    let mut pairs = Vec::new();
    for s in subs {
        if s.filtered {
            continue;
        }
        for t in &s.translations {
            let pair = if headword_is_target {
                EquivalencePair::new(&s.headword, t)
            } else {
                EquivalencePair::new(t, &s.headword)
            };
            pairs.push(pair);
        }
    }
    pairs
}

/// Taxonomy coverage of a merged dictionary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CoverageCounts {
    /// Distinct target nouns that are taxonomy lemmas.
    pub targets_in_taxonomy: u64,
    /// Union of the senses of those nouns.
    pub reachable_synsets: u64,
    /// Pairs whose target noun is a taxonomy lemma.
    pub pairs_covered: u64,
    /// Distinct source nouns with at least one covered pair.
    pub sources_covered: u64,
}

pub fn coverage_report(md: &MergedDictionary, tax: &TaxonomyIndex) -> CoverageCounts {
    let mut synsets = BTreeSet::new();
    let mut targets = 0u64;
    let mut pairs = 0u64;
    let mut sources: BTreeSet<&str> = BTreeSet::new();
    for target in md.target_nouns() {
        let senses = tax.senses_of(target);
        if senses.is_empty() {
            continue;
        }
        targets += 1;
        synsets.extend(senses.iter().cloned());
        let linked = md.sources_of(target).expect("known target");
        pairs += linked.len() as u64;
        sources.extend(linked.iter().map(String::as_str));
    }
    CoverageCounts {
        targets_in_taxonomy: targets,
        reachable_synsets: synsets.len() as u64,
        pairs_covered: pairs,
        sources_covered: sources.len() as u64,
    }
}
