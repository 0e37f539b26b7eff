//! Shared helpers for integration tests: fixture paths, random input
//! generators, and independent brute-force oracles that never touch the
//! library's index structures.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture present")
}

pub fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_lexlink")
}

/// Raw taxonomy view used by the oracles: plain adjacency, no index.
pub struct RawTax {
    pub ids: Vec<String>,
    pub lemmas: Vec<Vec<String>>,
    /// hypernym edges, child -> parents, as indexes into `ids`
    pub parents: Vec<Vec<usize>>,
    /// reversed edges, parent -> children
    pub children: Vec<Vec<usize>>,
}

impl RawTax {
    /// Parses the taxonomy file format directly, without validation.
    pub fn parse(text: &str) -> RawTax {
        let mut ids = Vec::new();
        let mut lemmas = Vec::new();
        let mut parent_names: Vec<Vec<String>> = Vec::new();
        for raw in text.lines() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            ids.push(fields[0].trim().to_string());
            lemmas.push(
                fields[1]
                    .split(',')
                    .map(|l| l.trim().to_lowercase())
                    .filter(|l| !l.is_empty())
                    .collect(),
            );
            parent_names.push(
                fields
                    .get(2)
                    .copied()
                    .unwrap_or("")
                    .split(',')
                    .map(str::trim)
                    .filter(|h| !h.is_empty())
                    .map(str::to_string)
                    .collect(),
            );
        }
        let index: BTreeMap<&str, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let parents: Vec<Vec<usize>> = parent_names
            .iter()
            .map(|ps| ps.iter().map(|p| index[p.as_str()]).collect())
            .collect();
        let mut children = vec![Vec::new(); ids.len()];
        for (child, ps) in parents.iter().enumerate() {
            for p in ps {
                children[*p].push(child);
            }
        }
        RawTax {
            ids,
            lemmas,
            parents,
            children,
        }
    }

    pub fn senses_of(&self, lemma: &str) -> Vec<usize> {
        (0..self.ids.len())
            .filter(|i| self.lemmas[*i].iter().any(|l| l == lemma))
            .collect()
    }

    fn closure(&self, start: usize, edges: &[Vec<usize>]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            if seen.insert(node) {
                queue.extend(edges[node].iter().copied());
            }
        }
        seen
    }

    pub fn descendants(&self, root: usize) -> BTreeSet<usize> {
        self.closure(root, &self.children)
    }

    pub fn ancestors(&self, node: usize) -> BTreeSet<usize> {
        let mut up = self.closure(node, &self.parents);
        up.remove(&node);
        up
    }
}

/// Outcome of the naive density enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleChoice {
    pub winning_root: String,
    pub chosen_senses: Vec<String>,
    /// Full ranking as (root, marks, size), best first.
    pub ranking: Vec<(String, u64, u64)>,
}

/// Re-derives the densest-subtree choice from the raw file text: marks,
/// candidate roots, subtree sums and the full tie chain, all recomputed
/// with plain breadth-first searches.
pub fn oracle_disambiguate(text: &str, target: &str, context: &[String]) -> OracleChoice {
    let raw = RawTax::parse(text);
    let target_senses = raw.senses_of(target);
    assert!(!target_senses.is_empty(), "oracle needs a known target");

    let mut words: BTreeSet<&str> = context.iter().map(String::as_str).collect();
    words.insert(target);
    let mut marks: BTreeMap<usize, u64> = BTreeMap::new();
    for word in words {
        for sense in raw.senses_of(word) {
            *marks.entry(sense).or_insert(0) += 1;
        }
    }

    let mut candidates: BTreeSet<usize> = BTreeSet::new();
    for sense in &target_senses {
        candidates.insert(*sense);
        candidates.extend(raw.ancestors(*sense));
    }

    let mut scored: Vec<(String, u64, u64)> = Vec::new();
    for root in candidates {
        let subtree = raw.descendants(root);
        let m: u64 = subtree
            .iter()
            .map(|n| marks.get(n).copied().unwrap_or(0))
            .sum();
        scored.push((raw.ids[root].clone(), m, subtree.len() as u64));
    }
    // density desc (by cross-multiplication), marks desc, size asc, id asc
    scored.sort_by(|a, b| {
        let left = (a.1 as u128) * (b.2 as u128);
        let right = (b.1 as u128) * (a.2 as u128);
        right
            .cmp(&left)
            .then(b.1.cmp(&a.1))
            .then(a.2.cmp(&b.2))
            .then(a.0.cmp(&b.0))
    });

    let winning_root = scored[0].0.clone();
    let root_idx = raw.ids.iter().position(|id| *id == winning_root).unwrap();
    let subtree = raw.descendants(root_idx);
    let mut chosen: Vec<String> = target_senses
        .iter()
        .filter(|s| subtree.contains(s))
        .map(|s| raw.ids[*s].clone())
        .collect();
    chosen.sort();
    OracleChoice {
        winning_root,
        chosen_senses: chosen,
        ranking: scored,
    }
}

/// Random taxonomy in the file format plus a target with bounded senses
/// and a context list. Node `i` may only point at nodes `< i`.
pub struct RandomScenario {
    pub text: String,
    pub target: String,
    pub context: Vec<String>,
}

pub fn random_scenario(rng: &mut ChaCha8Rng, max_nodes: usize) -> RandomScenario {
    let n = rng.gen_range(2..=max_nodes);
    let target_sense_count = rng.gen_range(1..=8.min(n));
    let mut target_senses: BTreeSet<usize> = BTreeSet::new();
    while target_senses.len() < target_sense_count {
        target_senses.insert(rng.gen_range(0..n));
    }
    let context_words = rng.gen_range(0..=10usize);
    let mut lemma_lists: Vec<Vec<String>> = (0..n).map(|i| vec![format!("filler{i}")]).collect();
    for s in &target_senses {
        lemma_lists[*s].push("tgt".to_string());
    }
    let mut context = Vec::new();
    for w in 0..context_words {
        let word = format!("ctx{w}");
        // A context word may be absent from the taxonomy entirely.
        if rng.gen_bool(0.85) {
            for _ in 0..rng.gen_range(1..=3) {
                let node = rng.gen_range(0..n);
                if !lemma_lists[node].contains(&word) {
                    lemma_lists[node].push(word.clone());
                }
            }
        }
        context.push(word);
    }
    // Duplicate context entries now and then: they must count once.
    if !context.is_empty() && rng.gen_bool(0.3) {
        let dup = context[rng.gen_range(0..context.len())].clone();
        context.push(dup);
    }
    let mut text = String::new();
    for (i, lemmas) in lemma_lists.iter().enumerate() {
        let mut parents: BTreeSet<usize> = BTreeSet::new();
        if i > 0 {
            for _ in 0..rng.gen_range(0..=2) {
                parents.insert(rng.gen_range(0..i));
            }
        }
        let hypers: Vec<String> = parents.iter().map(|p| format!("s{p:03}")).collect();
        text.push_str(&format!(
            "s{i:03}\t{}\t{}\n",
            lemmas.join(","),
            hypers.join(",")
        ));
    }
    RandomScenario {
        text,
        target: "tgt".to_string(),
        context,
    }
}

/// Random taxonomy plus pair list for the merge-case property suite.
pub struct RandomMergeScenario {
    pub tax_text: String,
    pub pairs: Vec<(String, String)>,
}

pub fn random_merge_scenario(rng: &mut ChaCha8Rng) -> RandomMergeScenario {
    let n = rng.gen_range(1..=30usize);
    let lemma_pool = 14u8;
    let mut lemma_lists: Vec<BTreeSet<String>> = (0..n).map(|_| BTreeSet::new()).collect();
    for (i, lemmas) in lemma_lists.iter_mut().enumerate() {
        for _ in 0..rng.gen_range(1..=3) {
            lemmas.insert(format!("w{:02}", rng.gen_range(0..lemma_pool)));
        }
        if lemmas.is_empty() {
            lemmas.insert(format!("only{i}"));
        }
    }
    let mut tax_text = String::new();
    for (i, lemmas) in lemma_lists.iter().enumerate() {
        let mut parents: BTreeSet<usize> = BTreeSet::new();
        if i > 0 {
            for _ in 0..rng.gen_range(0..=2) {
                parents.insert(rng.gen_range(0..i));
            }
        }
        let hypers: Vec<String> = parents.iter().map(|p| format!("s{p:02}")).collect();
        let ls: Vec<String> = lemmas.iter().cloned().collect();
        tax_text.push_str(&format!("s{i:02}\t{}\t{}\n", ls.join(","), hypers.join(",")));
    }
    let mut pairs = Vec::new();
    for _ in 0..rng.gen_range(0..=25usize) {
        // Half the targets come from the lemma pool, half miss the
        // taxonomy on purpose.
        let target = if rng.gen_bool(0.5) {
            format!("w{:02}", rng.gen_range(0..lemma_pool + 4))
        } else {
            format!("x{:02}", rng.gen_range(0..6))
        };
        let source = format!("src{:01}", rng.gen_range(0..8));
        pairs.push((target, source));
    }
    RandomMergeScenario { tax_text, pairs }
}
