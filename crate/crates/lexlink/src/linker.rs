//! The two end-to-end linking procedures.
//!
//! Entry pipeline: for each dictionary subentry, monosemous translations
//! are linked first; failing that, multiple translations disambiguate each
//! other; failing that, the cue word's own translations provide context.
//! The first productive stage wins. Translations with too many senses can
//! be declined on the cue path (and optionally on the multi path).
//!
//! Structural merge: four cases over the merged two-direction dictionary —
//! monosemous target nouns, source nouns with a unique translation, target
//! nouns with a unique source, and synsets several of whose lemmas share
//! the same source noun. Case links are unioned with method tags kept.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::bidict::{self, MergedDictionary, Subentry};
use crate::density;
use crate::normalizer::{self, ResolvedKind};
use crate::taxonomy::{SynsetId, TaxonomyIndex};

/// Which procedure produced a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Mono,
    Multi,
    Cue,
    Case1,
    Case2,
    Case3,
    Case4,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Mono => "mono",
            Method::Multi => "multi",
            Method::Cue => "cue",
            Method::Case1 => "case1",
            Method::Case2 => "case2",
            Method::Case3 => "case3",
            Method::Case4 => "case4",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "mono" => Some(Method::Mono),
            "multi" => Some(Method::Multi),
            "cue" => Some(Method::Cue),
            "case1" => Some(Method::Case1),
            "case2" => Some(Method::Case2),
            "case3" => Some(Method::Case3),
            "case4" => Some(Method::Case4),
            _ => None,
        }
    }

    pub fn merge_case(n: u8) -> Option<Method> {
        match n {
            1 => Some(Method::Case1),
            2 => Some(Method::Case2),
            3 => Some(Method::Case3),
            4 => Some(Method::Case4),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One attachment of a source-language word to a synset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenseLink {
    pub source_lemma: String,
    pub synset: SynsetId,
    pub method: Method,
    /// Density for multi/cue links, 1 otherwise.
    pub score: Ratio<u64>,
}

impl SenseLink {
    fn unit(source: &str, synset: SynsetId, method: Method) -> Self {
        SenseLink {
            source_lemma: source.to_string(),
            synset,
            method,
            score: Ratio::from_integer(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkerConfig {
    /// Cue-path translations with more senses than this are not
    /// disambiguated.
    pub max_cue_senses: usize,
    /// Apply the same limit on the multi-translation path.
    pub apply_heuristic_to_multi: bool,
    pub enabled_merge_cases: BTreeSet<u8>,
}

impl Default for LinkerConfig {
    fn default() -> Self {
        LinkerConfig {
            max_cue_senses: 5,
            apply_heuristic_to_multi: false,
            enabled_merge_cases: [1, 2, 3, 4].into(),
        }
    }
}

/// Why a stage produced nothing (or less than it could) for a subentry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Skip {
    /// Multi path needs at least two resolved translation lemmas.
    SingleTranslation,
    /// The cue did not resolve to any dictionary headword with
    /// translations.
    CueNotFound { cue: String },
    /// A translation exceeded the sense limit and was declined.
    SenseLimit { lemma: String, senses: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageOutcome {
    pub links: Vec<SenseLink>,
    pub skips: Vec<Skip>,
}

/// Source-language dictionary view used to translate cue words.
#[derive(Debug, Clone, Default)]
pub struct SourceDictionary {
    translations: BTreeMap<String, Vec<String>>,
}

impl SourceDictionary {
    /// Collects headword -> raw translations over all unfiltered
    /// subentries (all subentries of a headword pooled together).
    /// Headwords are keyed in normalized form so that multiword cues
    /// resolve against the same underscore-joined shape.
    pub fn from_subentries(subs: &[Subentry]) -> Self {
        let mut translations: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for s in subs {
            if s.filtered {
                continue;
            }
            let slot = translations
                .entry(bidict::normalize_lemma(&s.headword))
                .or_default();
            for t in &s.translations {
                if !slot.contains(t) {
                    slot.push(t.clone());
                }
            }
        }
        SourceDictionary { translations }
    }

    pub fn contains_headword(&self, word: &str) -> bool {
        self.translations.contains_key(word)
    }

    pub fn translations_of(&self, word: &str) -> Option<&[String]> {
        self.translations.get(word).map(Vec::as_slice)
    }
}

/// Links every monosemous normalized translation lemma to its unique
/// sense. Empty when nothing is monosemous.
pub fn link_monosemous(s: &Subentry, tax: &TaxonomyIndex) -> Vec<SenseLink> {
    let source = bidict::normalize_lemma(&s.headword);
    let mut links = Vec::new();
    for lemma in bidict::resolved_translation_lemmas(s, tax) {
        let senses = tax.senses_of(&lemma);
        if senses.len() == 1 {
            let synset = senses.iter().next().expect("len checked").clone();
            let link = SenseLink::unit(&source, synset, Method::Mono);
            if !links.contains(&link) {
                links.push(link);
            }
        }
    }
    links
}

/// Disambiguates each translation lemma against the other translations.
/// Requires at least two resolved lemmas.
pub fn link_by_translations(s: &Subentry, tax: &TaxonomyIndex, cfg: &LinkerConfig) -> StageOutcome {
    let lemmas = bidict::resolved_translation_lemmas(s, tax);
    if lemmas.len() < 2 {
        return StageOutcome {
            links: Vec::new(),
            skips: vec![Skip::SingleTranslation],
        };
    }
    let source = bidict::normalize_lemma(&s.headword);
    let mut outcome = StageOutcome::default();
    for lemma in &lemmas {
        if cfg.apply_heuristic_to_multi {
            let senses = tax.senses_of(lemma).len();
            if senses > cfg.max_cue_senses {
                outcome.skips.push(Skip::SenseLimit {
                    lemma: lemma.clone(),
                    senses,
                });
                continue;
            }
        }
        let context: Vec<String> = lemmas.iter().filter(|l| *l != lemma).cloned().collect();
        let got = density::disambiguate(tax, lemma, &context).expect("lemma resolved in taxonomy");
        for sense in got.chosen_senses {
            let link = SenseLink {
                source_lemma: source.clone(),
                synset: sense,
                method: Method::Multi,
                score: got.score.density,
            };
            if !outcome.links.contains(&link) {
                outcome.links.push(link);
            }
        }
    }
    outcome
}

/// Resolves the cue against the source dictionary, translates it, and uses
/// those translations as context for each translation lemma within the
/// sense limit.
pub fn link_by_cue(
    s: &Subentry,
    dict: &SourceDictionary,
    tax: &TaxonomyIndex,
    cfg: &LinkerConfig,
) -> StageOutcome {
    let Some(cue) = s.cue.as_deref() else {
        return StageOutcome::default();
    };
    let resolved = normalizer::resolve_source_phrase(cue, &|w| dict.contains_headword(w));
    let mut context: Vec<String> = Vec::new();
    for cue_lemma in &resolved.resolved {
        let Some(raw_translations) = dict.translations_of(cue_lemma) else {
            continue;
        };
        for phrase in raw_translations {
            let r = normalizer::resolve_target_phrase(phrase, &|w| tax.has_lemma(w));
            if r.kind == ResolvedKind::Unresolved {
                continue;
            }
            for lemma in r.resolved {
                if !context.contains(&lemma) {
                    context.push(lemma);
                }
            }
        }
    }
    if context.is_empty() {
        return StageOutcome {
            links: Vec::new(),
            skips: vec![Skip::CueNotFound {
                cue: cue.to_string(),
            }],
        };
    }
    let source = bidict::normalize_lemma(&s.headword);
    let mut outcome = StageOutcome::default();
    for lemma in bidict::resolved_translation_lemmas(s, tax) {
        let senses = tax.senses_of(&lemma).len();
        if senses > cfg.max_cue_senses {
            outcome.skips.push(Skip::SenseLimit {
                lemma: lemma.clone(),
                senses,
            });
            continue;
        }
        let got = density::disambiguate(tax, &lemma, &context).expect("lemma resolved");
        for sense in got.chosen_senses {
            let link = SenseLink {
                source_lemma: source.clone(),
                synset: sense,
                method: Method::Cue,
                score: got.score.density,
            };
            if !outcome.links.contains(&link) {
                outcome.links.push(link);
            }
        }
    }
    outcome
}

/// Per-stage tallies for a pipeline run. Counts sum to the number of
/// processed subentries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub mono: u64,
    pub multi: u64,
    pub cue: u64,
    pub no_result: u64,
    /// Translations declined because of the sense limit.
    pub heuristic_skips: u64,
    /// Cue lookups that failed to produce any context.
    pub cue_not_found: u64,
}

impl CoverageReport {
    pub fn linked(&self) -> u64 {
        self.mono + self.multi + self.cue
    }

    pub fn total(&self) -> u64 {
        self.linked() + self.no_result
    }
}

/// Runs the staged pipeline over every unfiltered subentry.
///
/// Subentries whose only disambiguation source is a semantic field are
/// counted as `no_result` without any stage attempt; field-based
/// inference is out of scope. Links come back sorted by (headword,
/// subentry index, synset).
pub fn run_entry_pipeline(
    subs: &[Subentry],
    dict: &SourceDictionary,
    tax: &TaxonomyIndex,
    cfg: &LinkerConfig,
) -> (Vec<SenseLink>, CoverageReport) {
    let mut report = CoverageReport::default();
    let mut keyed: Vec<(String, u32, SenseLink)> = Vec::new();
    for s in subs {
        if s.filtered {
            continue;
        }
        let cases = bidict::classify_subentry(s, tax);
        let field_only = cases.case4_semfield
            && !cases.case1_monosemous
            && !cases.case2_multi_translation
            && !cases.case3_cue;
        if cases.not_in_taxonomy || field_only {
            report.no_result += 1;
            continue;
        }

        let mono = link_monosemous(s, tax);
        if !mono.is_empty() {
            report.mono += 1;
            keyed.extend(mono.into_iter().map(|l| (l.source_lemma.clone(), s.index, l)));
            continue;
        }

        let multi = link_by_translations(s, tax, cfg);
        report.heuristic_skips += multi
            .skips
            .iter()
            .filter(|k| matches!(k, Skip::SenseLimit { .. }))
            .count() as u64;
        if !multi.links.is_empty() {
            report.multi += 1;
            keyed.extend(
                multi
                    .links
                    .into_iter()
                    .map(|l| (l.source_lemma.clone(), s.index, l)),
            );
            continue;
        }

        let cue = link_by_cue(s, dict, tax, cfg);
        for skip in &cue.skips {
            match skip {
                Skip::SenseLimit { .. } => report.heuristic_skips += 1,
                Skip::CueNotFound { .. } => report.cue_not_found += 1,
                Skip::SingleTranslation => {}
            }
        }
        if !cue.links.is_empty() {
            report.cue += 1;
            keyed.extend(
                cue.links
                    .into_iter()
                    .map(|l| (l.source_lemma.clone(), s.index, l)),
            );
            continue;
        }

        report.no_result += 1;
    }
    keyed.sort_by(|a, b| {
        (&a.0, a.1, &a.2.synset, a.2.method)
            .cmp(&(&b.0, b.1, &b.2.synset, b.2.method))
    });
    let links = keyed.into_iter().map(|(_, _, l)| l).collect();
    (links, report)
}

/// Case 1: pairs whose target noun is monosemous link the source noun to
/// that unique sense.
pub fn merge_case1(md: &MergedDictionary, tax: &TaxonomyIndex) -> Vec<SenseLink> {
    let mut links = BTreeSet::new();
    for pair in md.pairs() {
        let senses = tax.senses_of(&pair.target_noun);
        if senses.len() == 1 {
            let synset = senses.iter().next().expect("len checked").clone();
            links.insert((pair.source_noun.clone(), synset));
        }
    }
    links
        .into_iter()
        .map(|(source, synset)| SenseLink::unit(&source, synset, Method::Case1))
        .collect()
}

/// Case 2: a source noun with exactly one translation, and that
/// translation in the taxonomy, links to every sense of it.
pub fn merge_case2(md: &MergedDictionary, tax: &TaxonomyIndex) -> Vec<SenseLink> {
    let mut links = BTreeSet::new();
    for source in md.source_nouns() {
        let targets = md.targets_of(source).expect("known source");
        if targets.len() != 1 {
            continue;
        }
        let target = targets.iter().next().expect("len checked");
        for synset in tax.senses_of(target) {
            links.insert((source.to_string(), synset.clone()));
        }
    }
    links
        .into_iter()
        .map(|(source, synset)| SenseLink::unit(&source, synset, Method::Case2))
        .collect()
}

/// Case 3: a target noun in the taxonomy with exactly one source noun
/// links that source to every sense of the target.
pub fn merge_case3(md: &MergedDictionary, tax: &TaxonomyIndex) -> Vec<SenseLink> {
    let mut links = BTreeSet::new();
    for target in md.target_nouns() {
        let senses = tax.senses_of(target);
        if senses.is_empty() {
            continue;
        }
        let sources = md.sources_of(target).expect("known target");
        if sources.len() != 1 {
            continue;
        }
        let source = sources.iter().next().expect("len checked");
        for synset in senses {
            links.insert((source.to_string(), synset.clone()));
        }
    }
    links
        .into_iter()
        .map(|(source, synset)| SenseLink::unit(&source, synset, Method::Case3))
        .collect()
}

/// Case 4: a synset at least two of whose lemmas translate to the same
/// source noun links that noun to the synset.
pub fn merge_case4(md: &MergedDictionary, tax: &TaxonomyIndex) -> Vec<SenseLink> {
    let mut links = BTreeSet::new();
    for synset in tax.synsets() {
        if synset.lemmas.len() < 2 {
            continue;
        }
        let mut witness_count: BTreeMap<&str, usize> = BTreeMap::new();
        for lemma in &synset.lemmas {
            if let Some(sources) = md.sources_of(lemma) {
                for source in sources {
                    *witness_count.entry(source.as_str()).or_insert(0) += 1;
                }
            }
        }
        for (source, witnesses) in witness_count {
            if witnesses >= 2 {
                links.insert((source.to_string(), synset.id.clone()));
            }
        }
    }
    links
        .into_iter()
        .map(|(source, synset)| SenseLink::unit(&source, synset, Method::Case4))
        .collect()
}

/// A deduplicated merge link carrying every method tag that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedLink {
    pub source_lemma: String,
    pub synset: SynsetId,
    pub methods: BTreeSet<Method>,
    pub score: Ratio<u64>,
}

/// Link counts and ratio statistics for one scope (a case or the total).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeStats {
    /// Distinct taxonomy-language nouns behind the links, when known.
    pub target_nouns: Option<u64>,
    pub source_nouns: u64,
    pub synsets: u64,
    pub connections: u64,
}

impl MergeStats {
    pub fn from_counts(connections: u64, source_nouns: u64, synsets: u64) -> Self {
        MergeStats {
            target_nouns: None,
            source_nouns,
            synsets,
            connections,
        }
    }

    /// Linked synsets per source noun, exact. None when no source nouns.
    pub fn polysemy(&self) -> Option<Ratio<u64>> {
        (self.source_nouns > 0).then(|| Ratio::new(self.connections, self.source_nouns))
    }

    /// Source nouns per linked synset, exact. None when no synsets.
    pub fn synonymy(&self) -> Option<Ratio<u64>> {
        (self.synsets > 0).then(|| Ratio::new(self.connections, self.synsets))
    }
}

/// Statistics over any collection of (source lemma, synset) attachments.
pub fn compute_stats<'a>(links: impl IntoIterator<Item = (&'a str, &'a SynsetId)>) -> MergeStats {
    let mut sources: BTreeSet<&str> = BTreeSet::new();
    let mut synsets: BTreeSet<&SynsetId> = BTreeSet::new();
    let mut distinct: BTreeSet<(&str, &SynsetId)> = BTreeSet::new();
    for (source, synset) in links {
        sources.insert(source);
        synsets.insert(synset);
        distinct.insert((source, synset));
    }
    MergeStats {
        target_nouns: None,
        source_nouns: sources.len() as u64,
        synsets: synsets.len() as u64,
        connections: distinct.len() as u64,
    }
}

pub fn stats_of_links(links: &[SenseLink]) -> MergeStats {
    compute_stats(links.iter().map(|l| (l.source_lemma.as_str(), &l.synset)))
}

/// Everything `merge_all` produces: the deduplicated union plus per-case
/// and total statistics. Per-case stats are computed on each case's own
/// links before the union; the total row uses the union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcome {
    pub links: Vec<MergedLink>,
    pub per_case: Vec<(u8, MergeStats)>,
    pub total: MergeStats,
}

/// Runs the enabled cases and unions their links. The union is keyed by
/// (source lemma, synset); every contributing case's tag is kept.
pub fn merge_all(md: &MergedDictionary, tax: &TaxonomyIndex, cfg: &LinkerConfig) -> MergeOutcome {
    let mut union: BTreeMap<(String, SynsetId), BTreeSet<Method>> = BTreeMap::new();
    let mut per_case = Vec::new();
    for case in &cfg.enabled_merge_cases {
        let links = match case {
            1 => merge_case1(md, tax),
            2 => merge_case2(md, tax),
            3 => merge_case3(md, tax),
            4 => merge_case4(md, tax),
            _ => continue,
        };
        let mut stats = stats_of_links(&links);
        stats.target_nouns = Some(case_target_nouns(*case, md, tax));
        per_case.push((*case, stats));
        for link in links {
            union
                .entry((link.source_lemma, link.synset))
                .or_default()
                .insert(link.method);
        }
    }
    let links: Vec<MergedLink> = union
        .into_iter()
        .map(|((source_lemma, synset), methods)| MergedLink {
            source_lemma,
            synset,
            methods,
            score: Ratio::from_integer(1),
        })
        .collect();
    let mut total = compute_stats(links.iter().map(|l| (l.source_lemma.as_str(), &l.synset)));
    total.target_nouns = Some(total_target_nouns(md, tax, cfg));
    MergeOutcome {
        links,
        per_case,
        total,
    }
}

/// Distinct target nouns a single case draws links from.
fn case_target_nouns(case: u8, md: &MergedDictionary, tax: &TaxonomyIndex) -> u64 {
    let targets = case_target_noun_set(case, md, tax);
    targets.len() as u64
}

fn total_target_nouns(md: &MergedDictionary, tax: &TaxonomyIndex, cfg: &LinkerConfig) -> u64 {
    let mut all: BTreeSet<String> = BTreeSet::new();
    for case in &cfg.enabled_merge_cases {
        all.extend(case_target_noun_set(*case, md, tax));
    }
    all.len() as u64
}

fn case_target_noun_set(case: u8, md: &MergedDictionary, tax: &TaxonomyIndex) -> BTreeSet<String> {
    let mut targets: BTreeSet<String> = BTreeSet::new();
    match case {
        1 => {
            for pair in md.pairs() {
                if tax.senses_of(&pair.target_noun).len() == 1 {
                    targets.insert(pair.target_noun.clone());
                }
            }
        }
        2 => {
            for source in md.source_nouns() {
                let ts = md.targets_of(source).expect("known source");
                if ts.len() == 1 {
                    let t = ts.iter().next().expect("len checked");
                    if tax.has_lemma(t) {
                        targets.insert(t.clone());
                    }
                }
            }
        }
        3 => {
            for target in md.target_nouns() {
                if tax.has_lemma(target)
                    && md.sources_of(target).expect("known target").len() == 1
                {
                    targets.insert(target.to_string());
                }
            }
        }
        4 => {
            for synset in tax.synsets() {
                if synset.lemmas.len() < 2 {
                    continue;
                }
                let mut by_source: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
                for lemma in &synset.lemmas {
                    if let Some(sources) = md.sources_of(lemma) {
                        for source in sources {
                            by_source.entry(source).or_default().insert(lemma);
                        }
                    }
                }
                for lemmas in by_source.values() {
                    if lemmas.len() >= 2 {
                        targets.extend(lemmas.iter().map(|l| l.to_string()));
                    }
                }
            }
        }
        _ => {}
    }
    targets
}
