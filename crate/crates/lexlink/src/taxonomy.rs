//! Immutable WordNet-style noun taxonomy: synsets, lemmas and the
//! hypernym/hyponym DAG, loaded from a line-oriented text format.
//!
//! File format, one synset per line, `#` starts a comment line:
//!
//! ```text
//! <id>\t<lemma(,lemma)*>\t<hypernym-id(,hypernym-id)*>
//! ```
//!
//! The third field is empty for roots. Lemmas are lowercase, with
//! underscores joining multiword expressions. Multiple hypernyms are
//! allowed (a DAG, not a tree); closures are set-wise so diamonds count
//! once. The index is immutable after load and every query is pure.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Identifier of a synset, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId(String);

impl SynsetId {
    pub fn new(id: impl Into<String>) -> Self {
        SynsetId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SynsetId {
    fn from(s: &str) -> Self {
        SynsetId(s.to_string())
    }
}

/// One concept node: a nonempty set of synonymous lemmas plus hypernym links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    pub lemmas: BTreeSet<String>,
    pub hypernyms: BTreeSet<SynsetId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("line {line}: expected 3 tab-separated fields, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: empty synset id")]
    EmptyId { line: usize },
    #[error("line {line}: duplicate synset id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: synset `{id}` has an empty lemma list")]
    EmptyLemmas { line: usize, id: String },
    #[error("line {line}: lemma `{lemma}` contains whitespace (use underscores)")]
    LemmaWhitespace { line: usize, lemma: String },
    #[error("line {line}: synset `{id}` lists itself as hypernym")]
    SelfHypernym { line: usize, id: String },
    #[error("line {line}: hypernym `{hypernym}` of `{id}` does not resolve")]
    DanglingHypernym {
        line: usize,
        id: String,
        hypernym: String,
    },
    #[error("hypernym cycle involving: {}", ids.join(", "))]
    Cycle { ids: Vec<String> },
    #[error("unknown synset id `{id}`")]
    UnknownSynset { id: String },
}

/// Validated, immutable taxonomy with lemma and hyponym indexes.
#[derive(Debug, Clone)]
pub struct TaxonomyIndex {
    synsets: BTreeMap<SynsetId, Synset>,
    lemma_index: BTreeMap<String, BTreeSet<SynsetId>>,
    hyponym_index: BTreeMap<SynsetId, BTreeSet<SynsetId>>,
    roots: BTreeSet<SynsetId>,
}

static EMPTY_IDS: BTreeSet<SynsetId> = BTreeSet::new();

/// Parses and validates a taxonomy file. Reports the first structural
/// problem with its line number; cycle detection runs over the whole graph
/// and names every synset on a cycle.
pub fn load_taxonomy(text: &str) -> Result<TaxonomyIndex, TaxonomyError> {
    let mut synsets: BTreeMap<SynsetId, Synset> = BTreeMap::new();
    let mut line_of: BTreeMap<SynsetId, usize> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        // A root line may lose its trailing tab to whitespace-trimming
        // editors; two fields therefore mean an empty hypernym list.
        if fields.len() < 2 || fields.len() > 3 {
            return Err(TaxonomyError::MalformedLine {
                line,
                found: fields.len(),
            });
        }
        let id_str = fields[0].trim();
        if id_str.is_empty() {
            return Err(TaxonomyError::EmptyId { line });
        }
        let id = SynsetId::new(id_str);
        if synsets.contains_key(&id) {
            return Err(TaxonomyError::DuplicateId {
                line,
                id: id_str.to_string(),
            });
        }

        let mut lemmas = BTreeSet::new();
        for lemma in fields[1].split(',') {
            let lemma = lemma.trim();
            if lemma.is_empty() {
                continue;
            }
            if lemma.chars().any(char::is_whitespace) {
                return Err(TaxonomyError::LemmaWhitespace {
                    line,
                    lemma: lemma.to_string(),
                });
            }
            lemmas.insert(lemma.to_lowercase());
        }
        if lemmas.is_empty() {
            return Err(TaxonomyError::EmptyLemmas {
                line,
                id: id_str.to_string(),
            });
        }

        let mut hypernyms = BTreeSet::new();
        for h in fields.get(2).copied().unwrap_or("").split(',') {
            let h = h.trim();
            if h.is_empty() {
                continue;
            }
            if h == id_str {
                return Err(TaxonomyError::SelfHypernym {
                    line,
                    id: id_str.to_string(),
                });
            }
            hypernyms.insert(SynsetId::new(h));
        }

        line_of.insert(id.clone(), line);
        synsets.insert(
            id.clone(),
            Synset {
                id,
                lemmas,
                hypernyms,
            },
        );
    }

    // Resolve hypernym references and build the reverse index.
    let mut hyponym_index: BTreeMap<SynsetId, BTreeSet<SynsetId>> = BTreeMap::new();
    for synset in synsets.values() {
        for hyper in &synset.hypernyms {
            if !synsets.contains_key(hyper) {
                return Err(TaxonomyError::DanglingHypernym {
                    line: line_of[&synset.id],
                    id: synset.id.to_string(),
                    hypernym: hyper.to_string(),
                });
            }
            hyponym_index
                .entry(hyper.clone())
                .or_default()
                .insert(synset.id.clone());
        }
    }

    // Kahn's algorithm over hypernym edges; leftovers are exactly the
    // synsets involved in (or trapped under) a cycle.
    let mut indegree: BTreeMap<&SynsetId, usize> =
        synsets.keys().map(|id| (id, 0)).collect();
    for synset in synsets.values() {
        for hyper in &synset.hypernyms {
            *indegree.get_mut(hyper).expect("resolved above") += 1;
        }
    }
    let mut queue: VecDeque<&SynsetId> = indegree
        .iter()
        .filter(|(_, deg)| **deg == 0)
        .map(|(id, _)| *id)
        .collect();
    let mut visited = 0usize;
    while let Some(id) = queue.pop_front() {
        visited += 1;
        for hyper in &synsets[id].hypernyms {
            let deg = indegree.get_mut(hyper).expect("resolved above");
            *deg -= 1;
            if *deg == 0 {
                queue.push_back(hyper);
            }
        }
    }
    if visited != synsets.len() {
        let ids = indegree
            .iter()
            .filter(|(_, deg)| **deg > 0)
            .map(|(id, _)| id.to_string())
            .collect();
        return Err(TaxonomyError::Cycle { ids });
    }

    let mut lemma_index: BTreeMap<String, BTreeSet<SynsetId>> = BTreeMap::new();
    let mut roots = BTreeSet::new();
    for synset in synsets.values() {
        for lemma in &synset.lemmas {
            lemma_index
                .entry(lemma.clone())
                .or_default()
                .insert(synset.id.clone());
        }
        if synset.hypernyms.is_empty() {
            roots.insert(synset.id.clone());
        }
    }

    Ok(TaxonomyIndex {
        synsets,
        lemma_index,
        hyponym_index,
        roots,
    })
}

impl TaxonomyIndex {
    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, id: &SynsetId) -> Option<&Synset> {
        self.synsets.get(id)
    }

    pub fn contains(&self, id: &SynsetId) -> bool {
        self.synsets.contains_key(id)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    pub fn roots(&self) -> &BTreeSet<SynsetId> {
        &self.roots
    }

    pub fn lemma_count(&self) -> usize {
        self.lemma_index.len()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemma_index.keys().map(String::as_str)
    }

    /// Total number of (lemma, synset) memberships.
    pub fn sense_count(&self) -> usize {
        self.lemma_index.values().map(BTreeSet::len).sum()
    }

    /// Synsets carrying `lemma`, ordered by id. Absence is an empty set.
    /// The lemma must already be normalized (lowercase, underscores).
    pub fn senses_of(&self, lemma: &str) -> &BTreeSet<SynsetId> {
        self.lemma_index.get(lemma).unwrap_or(&EMPTY_IDS)
    }

    pub fn has_lemma(&self, lemma: &str) -> bool {
        self.lemma_index.contains_key(lemma)
    }

    pub fn is_monosemous(&self, lemma: &str) -> bool {
        self.senses_of(lemma).len() == 1
    }

    /// Hyponym closure of `root`, including `root` itself.
    pub fn descendants(&self, root: &SynsetId) -> Result<BTreeSet<SynsetId>, TaxonomyError> {
        if !self.synsets.contains_key(root) {
            return Err(TaxonomyError::UnknownSynset {
                id: root.to_string(),
            });
        }
        let mut seen: BTreeSet<SynsetId> = BTreeSet::new();
        let mut stack = vec![root.clone()];
        while let Some(id) = stack.pop() {
            if !seen.insert(id.clone()) {
                continue;
            }
            if let Some(children) = self.hyponym_index.get(&id) {
                for child in children {
                    if !seen.contains(child) {
                        stack.push(child.clone());
                    }
                }
            }
        }
        Ok(seen)
    }

    /// Hypernym closure of `id`, excluding `id`, ordered by increasing
    /// distance and then by id. Each ancestor appears once, at its
    /// shortest distance.
    pub fn ancestors(&self, id: &SynsetId) -> Result<Vec<SynsetId>, TaxonomyError> {
        let start = self
            .synsets
            .get(id)
            .ok_or_else(|| TaxonomyError::UnknownSynset { id: id.to_string() })?;
        let mut out = Vec::new();
        let mut seen: BTreeSet<SynsetId> = BTreeSet::new();
        seen.insert(id.clone());
        let mut frontier: BTreeSet<SynsetId> = start.hypernyms.clone();
        while !frontier.is_empty() {
            let mut next: BTreeSet<SynsetId> = BTreeSet::new();
            for node in frontier {
                if !seen.insert(node.clone()) {
                    continue;
                }
                next.extend(self.synsets[&node].hypernyms.iter().cloned());
                out.push(node);
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Renders the index back into the taxonomy file format. Loading the
    /// result reproduces the same index.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for synset in self.synsets.values() {
            let lemmas: Vec<&str> = synset.lemmas.iter().map(String::as_str).collect();
            let hypers: Vec<&str> = synset.hypernyms.iter().map(SynsetId::as_str).collect();
            out.push_str(synset.id.as_str());
            out.push('\t');
            out.push_str(&lemmas.join(","));
            out.push('\t');
            out.push_str(&hypers.join(","));
            out.push('\n');
        }
        out
    }
}
