//! Subtree semantic-density disambiguation.
//!
//! Every sense of a target word lives somewhere in the taxonomy; so do the
//! senses of its context words. Each candidate subtree (a target sense or
//! any of its ancestors) is scored by the number of sense marks it
//! contains relative to its synset count, as an exact rational. The
//! densest subtree wins and every target sense inside it is returned,
//! possibly more than one.
//!
//! Ties break by more marks, then smaller subtree, then synset id, so the
//! outcome is deterministic and independent of evaluation order.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use thiserror::Error;

use crate::taxonomy::{SynsetId, TaxonomyIndex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DensityError {
    #[error("target lemma `{lemma}` has no senses in the taxonomy")]
    UnknownTarget { lemma: String },
}

/// Sense marks for a target word and its context words. `marks[s]` counts
/// the distinct words (target included) having `s` as one of their senses;
/// duplicated context words count once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkSet {
    pub target: String,
    pub context: BTreeSet<String>,
    pub marks: BTreeMap<SynsetId, u64>,
}

/// Score of one candidate subtree root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityScore {
    pub root: SynsetId,
    /// Sense marks falling inside the subtree.
    pub marks: u64,
    /// Synsets in the subtree, root included.
    pub subtree_size: u64,
    /// marks / subtree_size, exact.
    pub density: Ratio<u64>,
}

impl DensityScore {
    fn new(root: SynsetId, marks: u64, subtree_size: u64) -> Self {
        DensityScore {
            root,
            marks,
            subtree_size,
            density: Ratio::new(marks, subtree_size),
        }
    }

    /// Total order used for ranking: density desc, marks desc, smaller
    /// subtree first, then id. Rational comparison, no floating point.
    pub fn ranking_key(&self) -> impl Ord + '_ {
        (
            std::cmp::Reverse(self.density),
            std::cmp::Reverse(self.marks),
            self.subtree_size,
            &self.root,
        )
    }
}

/// Result of disambiguating one target word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disambiguation {
    /// Target senses inside the winning subtree, ordered by id.
    pub chosen_senses: Vec<SynsetId>,
    pub winning_root: SynsetId,
    pub score: DensityScore,
}

/// Marks every sense of the target and of each distinct context word.
/// Context lemmas absent from the taxonomy contribute nothing.
pub fn mark_senses(
    tax: &TaxonomyIndex,
    target: &str,
    context: &[String],
) -> Result<MarkSet, DensityError> {
    if tax.senses_of(target).is_empty() {
        return Err(DensityError::UnknownTarget {
            lemma: target.to_string(),
        });
    }
    let mut words: BTreeSet<&str> = context.iter().map(String::as_str).collect();
    words.insert(target);
    let mut marks: BTreeMap<SynsetId, u64> = BTreeMap::new();
    for word in words {
        for sense in tax.senses_of(word) {
            *marks.entry(sense.clone()).or_insert(0) += 1;
        }
    }
    Ok(MarkSet {
        target: target.to_string(),
        context: context.iter().map(|w| w.to_string()).collect(),
        marks,
    })
}

/// Scores every candidate root: each target sense plus all of its
/// ancestors. Returns the full ranking, best first.
pub fn score_subtrees(tax: &TaxonomyIndex, ms: &MarkSet) -> Vec<DensityScore> {
    let mut candidates: BTreeSet<SynsetId> = BTreeSet::new();
    for sense in tax.senses_of(&ms.target) {
        candidates.insert(sense.clone());
        candidates.extend(tax.ancestors(sense).expect("sense ids come from the index"));
    }
    let mut scores: Vec<DensityScore> = candidates
        .into_iter()
        .map(|root| {
            let subtree = tax.descendants(&root).expect("candidate is in the index");
            let marks = subtree
                .iter()
                .map(|id| ms.marks.get(id).copied().unwrap_or(0))
                .sum();
            DensityScore::new(root, marks, subtree.len() as u64)
        })
        .collect();
    scores.sort_by(|a, b| a.ranking_key().cmp(&b.ranking_key()));
    scores
}

/// Picks the densest candidate subtree and returns every sense of the
/// target inside it.
pub fn disambiguate(
    tax: &TaxonomyIndex,
    target: &str,
    context: &[String],
) -> Result<Disambiguation, DensityError> {
    let ms = mark_senses(tax, target, context)?;
    let scores = score_subtrees(tax, &ms);
    let best = scores.into_iter().next().expect("target has >= 1 sense");
    let subtree = tax
        .descendants(&best.root)
        .expect("winning root is in the index");
    let chosen_senses: Vec<SynsetId> = tax
        .senses_of(target)
        .iter()
        .filter(|s| subtree.contains(s))
        .cloned()
        .collect();
    Ok(Disambiguation {
        chosen_senses,
        winning_root: best.root.clone(),
        score: best,
    })
}
