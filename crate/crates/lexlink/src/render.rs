//! Output rendering: link and stats files, human-readable tables, and the
//! run manifest.
//!
//! Machine files are TSV, UTF-8, LF, sorted, and bit-exact across runs.
//! Rendered tables group thousands with commas and print ratios to two
//! decimals (round half up); the `LEXLINK_NO_COLOR` environment variable
//! disables the ANSI decoration.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Duration;

use num_rational::Ratio;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bidict::{CoverageCounts, MergedDictionary};
use crate::linker::{CoverageReport, MergeStats, MergedLink, Method, SenseLink};
use crate::taxonomy::{SynsetId, TaxonomyIndex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinkFileError {
    #[error("line {line}: expected 4 tab-separated fields, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: unknown method `{method}`")]
    UnknownMethod { line: usize, method: String },
    #[error("line {line}: bad score `{score}`")]
    BadScore { line: usize, score: String },
}

/// Rounds an exact ratio to two decimals, half away from zero.
pub fn ratio_2dp(r: Ratio<u64>) -> String {
    let n = *r.numer() as u128;
    let d = *r.denom() as u128;
    let mut q = n * 100 / d;
    if (n * 100 % d) * 2 >= d {
        q += 1;
    }
    format!("{}.{:02}", q / 100, q % 100)
}

fn opt_ratio_2dp(r: Option<Ratio<u64>>) -> String {
    r.map(ratio_2dp).unwrap_or_else(|| "-".to_string())
}

/// Decimal rendering of a link score: up to six fractional digits, half
/// up, trailing zeros trimmed.
pub fn score_decimal(r: Ratio<u64>) -> String {
    let n = *r.numer() as u128;
    let d = *r.denom() as u128;
    let scale = 1_000_000u128;
    let mut q = n * scale / d;
    if (n * scale % d) * 2 >= d {
        q += 1;
    }
    let whole = q / scale;
    let frac = q % scale;
    if frac == 0 {
        return whole.to_string();
    }
    let mut digits = format!("{frac:06}");
    while digits.ends_with('0') {
        digits.pop();
    }
    format!("{whole}.{digits}")
}

/// Integer percentage `n / d`, half up. `-` when the denominator is zero.
pub fn percent(n: u64, d: u64) -> String {
    if d == 0 {
        return "-".to_string();
    }
    let mut q = (n as u128) * 100 / (d as u128);
    if ((n as u128) * 100 % (d as u128)) * 2 >= d as u128 {
        q += 1;
    }
    format!("{q}%")
}

/// Comma-grouped integer, as in rendered tables only.
pub fn group_thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// One link-file line before serialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct FileLink {
    source: String,
    synset: String,
    method: String,
    score: String,
}

fn serialize_links(mut rows: Vec<FileLink>) -> String {
    rows.sort();
    rows.dedup();
    let mut out = String::new();
    for row in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            row.source, row.synset, row.method, row.score
        );
    }
    out
}

/// Link file for pipeline links: one line per link, sorted by
/// (source, synset, method), identical lines collapsed.
pub fn link_file(links: &[SenseLink]) -> String {
    serialize_links(
        links
            .iter()
            .map(|l| FileLink {
                source: l.source_lemma.clone(),
                synset: l.synset.to_string(),
                method: l.method.to_string(),
                score: score_decimal(l.score),
            })
            .collect(),
    )
}

/// Link file for merged links: the method column carries every
/// contributing case tag, comma-joined.
pub fn merged_link_file(links: &[MergedLink]) -> String {
    serialize_links(
        links
            .iter()
            .map(|l| FileLink {
                source: l.source_lemma.clone(),
                synset: l.synset.to_string(),
                method: l
                    .methods
                    .iter()
                    .map(Method::as_str)
                    .collect::<Vec<_>>()
                    .join(","),
                score: score_decimal(l.score),
            })
            .collect(),
    )
}

/// Reads a link file back into links; comma-joined method tags expand to
/// one link per tag.
pub fn parse_link_file(text: &str) -> Result<Vec<SenseLink>, LinkFileError> {
    let mut links = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 4 {
            return Err(LinkFileError::MalformedLine {
                line,
                found: fields.len(),
            });
        }
        let score = parse_score(fields[3]).ok_or_else(|| LinkFileError::BadScore {
            line,
            score: fields[3].to_string(),
        })?;
        for tag in fields[2].split(',') {
            let method = Method::parse(tag).ok_or_else(|| LinkFileError::UnknownMethod {
                line,
                method: tag.to_string(),
            })?;
            links.push(SenseLink {
                source_lemma: fields[0].to_string(),
                synset: SynsetId::from(fields[1]),
                method,
                score,
            });
        }
    }
    Ok(links)
}

fn parse_score(text: &str) -> Option<Ratio<u64>> {
    match text.split_once('.') {
        None => text.parse::<u64>().ok().map(Ratio::from_integer),
        Some((whole, frac)) => {
            if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let whole: u64 = whole.parse().ok()?;
            let denom = 10u64.pow(frac.len() as u32);
            let numer = whole.checked_mul(denom)? + frac.parse::<u64>().ok()?;
            Some(Ratio::new(numer, denom))
        }
    }
}

const STATS_HEADER: &str = "scope\ttarget_nouns\tsource_nouns\tsynsets\tconnections\tpoly\tsyn";

/// Machine-readable stats file: one row per scope plus the header.
/// Ratios to two decimals, `-` where undefined.
pub fn stats_file(rows: &[(String, MergeStats)]) -> String {
    let mut out = String::from(STATS_HEADER);
    out.push('\n');
    for (scope, stats) in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            scope,
            stats
                .target_nouns
                .map(|n| n.to_string())
                .unwrap_or_else(|| "-".to_string()),
            stats.source_nouns,
            stats.synsets,
            stats.connections,
            opt_ratio_2dp(stats.polysemy()),
            opt_ratio_2dp(stats.synonymy()),
        );
    }
    out
}

/// True when table decoration should be skipped.
fn plain_tables() -> bool {
    std::env::var_os("LEXLINK_NO_COLOR").is_some_and(|v| !v.is_empty())
}

fn emit_row(out: &mut String, widths: &[usize], cells: &[String]) {
    let mut line = String::new();
    for (i, cell) in cells.iter().enumerate() {
        if i == 0 {
            line.push_str(&format!("{:<width$}", cell, width = widths[0]));
        } else {
            line.push_str(&format!("  {:>width$}", cell, width = widths[i]));
        }
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

fn render_table(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let decorated = !plain_tables();
    if decorated {
        out.push_str("\u{1b}[1m");
    }
    emit_row(&mut out, &widths, &header);
    if decorated {
        // Close the bold sequence right before the newline.
        out.pop();
        out.push_str("\u{1b}[0m\n");
        let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        out.push_str(&"-".repeat(total));
        out.push('\n');
    }
    for row in rows {
        emit_row(&mut out, &widths, &row);
    }
    out
}

/// Everything the merge table needs besides the per-case rows.
pub struct MergeTableContext<'a> {
    pub taxonomy: &'a TaxonomyIndex,
    pub dictionary: &'a MergedDictionary,
    pub coverage: CoverageCounts,
}

fn stats_cells(label: &str, s: &MergeStats) -> Vec<String> {
    vec![
        label.to_string(),
        s.target_nouns
            .map(group_thousands)
            .unwrap_or_else(|| "-".to_string()),
        group_thousands(s.source_nouns),
        group_thousands(s.synsets),
        group_thousands(s.connections),
        opt_ratio_2dp(s.polysemy()),
        opt_ratio_2dp(s.synonymy()),
    ]
}

/// Table with the merge results: taxonomy, dictionary and maximum-coverage
/// context rows, one row per enabled case, the total, and the total's
/// percentage breakdown against each denominator.
pub fn render_merge_table(
    ctx: &MergeTableContext,
    per_case: &[(u8, MergeStats)],
    total: &MergeStats,
) -> String {
    let header = vec![
        "scope".to_string(),
        "target nouns".to_string(),
        "source nouns".to_string(),
        "synsets".to_string(),
        "connections".to_string(),
        "poly".to_string(),
        "syn".to_string(),
    ];
    let tax = ctx.taxonomy;
    let dict = ctx.dictionary;
    let cov = ctx.coverage;
    let dash = || "-".to_string();

    let mut rows: Vec<Vec<String>> = Vec::new();
    let tax_senses = tax.sense_count() as u64;
    let tax_lemmas = tax.lemma_count() as u64;
    let tax_synsets = tax.len() as u64;
    rows.push(vec![
        "taxonomy".to_string(),
        group_thousands(tax_lemmas),
        dash(),
        group_thousands(tax_synsets),
        group_thousands(tax_senses),
        opt_ratio_2dp((tax_lemmas > 0).then(|| Ratio::new(tax_senses, tax_lemmas))),
        opt_ratio_2dp((tax_synsets > 0).then(|| Ratio::new(tax_senses, tax_synsets))),
    ]);
    rows.push(vec![
        "dictionary".to_string(),
        group_thousands(dict.target_count() as u64),
        group_thousands(dict.source_count() as u64),
        dash(),
        group_thousands(dict.pairs().len() as u64),
        dash(),
        dash(),
    ]);
    rows.push(vec![
        "max coverage".to_string(),
        group_thousands(cov.targets_in_taxonomy),
        group_thousands(cov.sources_covered),
        group_thousands(cov.reachable_synsets),
        group_thousands(cov.pairs_covered),
        opt_ratio_2dp(
            (cov.sources_covered > 0).then(|| Ratio::new(cov.pairs_covered, cov.sources_covered)),
        ),
        opt_ratio_2dp(
            (cov.reachable_synsets > 0)
                .then(|| Ratio::new(cov.pairs_covered, cov.reachable_synsets)),
        ),
    ]);
    for (case, stats) in per_case {
        rows.push(stats_cells(&format!("case {case}"), stats));
    }
    rows.push(stats_cells("total", total));

    let total_targets = total.target_nouns.unwrap_or(0);
    rows.push(vec![
        "  of taxonomy".to_string(),
        percent(total_targets, tax_lemmas),
        dash(),
        percent(total.synsets, tax_synsets),
        percent(total.connections, tax_senses),
        dash(),
        dash(),
    ]);
    rows.push(vec![
        "  of dictionary".to_string(),
        percent(total_targets, dict.target_count() as u64),
        percent(total.source_nouns, dict.source_count() as u64),
        dash(),
        percent(total.connections, dict.pairs().len() as u64),
        dash(),
        dash(),
    ]);
    rows.push(vec![
        "  of maximum".to_string(),
        percent(total_targets, cov.targets_in_taxonomy),
        percent(total.source_nouns, cov.sources_covered),
        percent(total.synsets, cov.reachable_synsets),
        percent(total.connections, cov.pairs_covered),
        dash(),
        dash(),
    ]);
    render_table(header, rows)
}

/// Plain stats table without context rows, for `lexlink stats`.
pub fn render_stats_rows(rows: &[(String, MergeStats)]) -> String {
    let header = vec![
        "scope".to_string(),
        "target nouns".to_string(),
        "source nouns".to_string(),
        "synsets".to_string(),
        "connections".to_string(),
        "poly".to_string(),
        "syn".to_string(),
    ];
    let body = rows
        .iter()
        .map(|(scope, stats)| stats_cells(scope, stats))
        .collect();
    render_table(header, body)
}

/// Per-stage coverage table for a pipeline run.
pub fn render_coverage_table(report: &CoverageReport) -> String {
    let total = report.total();
    let header = vec![
        "outcome".to_string(),
        "subentries".to_string(),
        "share".to_string(),
    ];
    let row = |label: &str, n: u64| {
        vec![
            label.to_string(),
            group_thousands(n),
            percent(n, total),
        ]
    };
    let rows = vec![
        row("no link", report.no_result),
        row("linked", report.linked()),
        row("  monosemous", report.mono),
        row("  multi-translation", report.multi),
        row("  cue", report.cue),
        row("total", total),
    ];
    let mut out = render_table(header, rows);
    let _ = writeln!(
        out,
        "\ndeclined by sense limit: {}\nunresolved cues: {}",
        report.heuristic_skips, report.cue_not_found
    );
    out
}

/// Record of one batch run: inputs with digests, configuration echo,
/// outputs, elapsed wall time.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub config: Vec<(String, String)>,
    pub outputs: Vec<String>,
    pub elapsed: Duration,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            ..RunManifest::default()
        }
    }

    pub fn add_input(&mut self, path: &str, content: &str) {
        self.inputs.push((path.to_string(), content_digest(content)));
    }

    pub fn set_config(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.to_string(), value.to_string()));
    }

    pub fn add_output(&mut self, path: &str) {
        self.outputs.push(path.to_string());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command\t{}", self.command);
        for (path, digest) in &self.inputs {
            let _ = writeln!(out, "input\t{path}\t{digest}");
        }
        for (key, value) in &self.config {
            let _ = writeln!(out, "config\t{key}\t{value}");
        }
        for path in &self.outputs {
            let _ = writeln!(out, "output\t{path}");
        }
        let _ = writeln!(out, "elapsed_ms\t{}", self.elapsed.as_millis());
        out
    }
}

pub fn content_digest(content: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(content.as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

/// Scopes of a parsed link file: one row per method tag present plus a
/// total row.
pub fn stats_rows_from_links(links: &[SenseLink]) -> Vec<(String, MergeStats)> {
    let methods: BTreeSet<Method> = links.iter().map(|l| l.method).collect();
    let mut rows = Vec::new();
    for method in methods {
        let subset: Vec<(&str, &SynsetId)> = links
            .iter()
            .filter(|l| l.method == method)
            .map(|l| (l.source_lemma.as_str(), &l.synset))
            .collect();
        rows.push((method.to_string(), crate::linker::compute_stats(subset)));
    }
    rows.push((
        "total".to_string(),
        crate::linker::compute_stats(
            links.iter().map(|l| (l.source_lemma.as_str(), &l.synset)),
        ),
    ));
    rows
}
