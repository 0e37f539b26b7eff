//! Batch front end: load a taxonomy and bilingual dictionaries, run either
//! linking procedure, and emit link files, stats files and rendered tables.
//!
//! Exit codes: 0 success, 2 usage or I/O problems, 3 input validation
//! failures (parse errors carry line numbers).

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use lexlink::bidict::{self, MergedDictionary, Subentry};
use lexlink::density;
use lexlink::linker::{self, LinkerConfig, SourceDictionary};
use lexlink::normalizer;
use lexlink::render::{self, MergeTableContext, RunManifest};
use lexlink::taxonomy::{self, TaxonomyIndex};

#[derive(Parser)]
#[command(name = "lexlink", version, about = "Link bilingual dictionary nouns to taxonomy synsets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the per-subentry pipeline (monosemous, multi-translation, cue).
    Link(LinkArgs),
    /// Merge a two-direction dictionary and run the structural cases.
    Merge(MergeArgs),
    /// Disambiguate one word against context words.
    Wsd(WsdArgs),
    /// Resolve a raw phrase to lookupable lemmas.
    Normalize(NormalizeArgs),
    /// Recompute statistics from a link file.
    Stats(StatsArgs),
}

#[derive(Args)]
struct LinkArgs {
    /// Taxonomy file.
    #[arg(long)]
    taxonomy: PathBuf,
    /// Bilingual dictionary (headwords in the source language).
    #[arg(long)]
    dict: PathBuf,
    /// Part-of-speech filter (first dot-separated component).
    #[arg(long, default_value = "n")]
    pos: String,
    /// Decline cue-path translations with more senses than this.
    #[arg(long, default_value_t = 5)]
    max_cue_senses: usize,
    /// Apply the sense limit on the multi-translation path too.
    #[arg(long)]
    multi_heuristic: bool,
    /// Link file destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Coverage table destination (stdout when absent).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Run manifest destination.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct MergeArgs {
    /// Taxonomy file.
    #[arg(long)]
    taxonomy: PathBuf,
    /// Dictionary whose headwords are taxonomy-language nouns.
    #[arg(long)]
    dict_ab: PathBuf,
    /// Dictionary whose headwords are source-language nouns.
    #[arg(long)]
    dict_ba: PathBuf,
    /// Part-of-speech filter.
    #[arg(long, default_value = "n")]
    pos: String,
    /// Comma-separated merge cases to run.
    #[arg(long, default_value = "1,2,3,4")]
    cases: String,
    /// Link file destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stats file destination.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Run manifest destination.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct WsdArgs {
    #[arg(long)]
    taxonomy: PathBuf,
    /// Target lemma (normalized form).
    #[arg(long)]
    word: String,
    /// Comma-separated context lemmas.
    #[arg(long, default_value = "")]
    context: String,
}

#[derive(Args)]
struct NormalizeArgs {
    /// Raw phrase to resolve.
    #[arg(long)]
    phrase: String,
    /// Resolve against this taxonomy's lemmas.
    #[arg(long, conflicts_with = "dict")]
    taxonomy: Option<PathBuf>,
    /// Resolve against this dictionary's headwords.
    #[arg(long)]
    dict: Option<PathBuf>,
    #[arg(long, default_value = "n")]
    pos: String,
}

#[derive(Args)]
struct StatsArgs {
    /// Link file to read back.
    #[arg(long)]
    links: PathBuf,
}

enum CliError {
    /// Usage and I/O problems: exit 2.
    Usage(String),
    /// Input validation problems: exit 3.
    Data(String),
}

impl CliError {
    fn report(&self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            CliError::Data(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(3)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Link(args) => cmd_link(args),
        Command::Merge(args) => cmd_merge(args),
        Command::Wsd(args) => cmd_wsd(args),
        Command::Normalize(args) => cmd_normalize(args),
        Command::Stats(args) => cmd_stats(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => err.report(),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_taxonomy_file(path: &Path) -> Result<(TaxonomyIndex, String), CliError> {
    let text = read_input(path)?;
    let tax = taxonomy::load_taxonomy(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok((tax, text))
}

fn load_dict_file(path: &Path, pos: &str) -> Result<(Vec<Subentry>, String), CliError> {
    let text = read_input(path)?;
    let subs = bidict::parse_bidict(&text, pos)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok((subs, text))
}

fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_output(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_link(args: LinkArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("link");
    let (tax, tax_text) = load_taxonomy_file(&args.taxonomy)?;
    let (subs, dict_text) = load_dict_file(&args.dict, &args.pos)?;
    manifest.add_input(&args.taxonomy.display().to_string(), &tax_text);
    manifest.add_input(&args.dict.display().to_string(), &dict_text);
    manifest.set_config("pos", &args.pos);
    manifest.set_config("max_cue_senses", args.max_cue_senses);
    manifest.set_config("multi_heuristic", args.multi_heuristic);

    let cfg = LinkerConfig {
        max_cue_senses: args.max_cue_senses,
        apply_heuristic_to_multi: args.multi_heuristic,
        ..LinkerConfig::default()
    };
    let dict = SourceDictionary::from_subentries(&subs);
    let (links, report) = linker::run_entry_pipeline(&subs, &dict, &tax, &cfg);

    emit(args.out.as_deref(), &render::link_file(&links))?;
    emit(args.report.as_deref(), &render::render_coverage_table(&report))?;

    if let Some(path) = &args.manifest {
        if let Some(out) = &args.out {
            manifest.add_output(&out.display().to_string());
        }
        if let Some(report_path) = &args.report {
            manifest.add_output(&report_path.display().to_string());
        }
        manifest.elapsed = started.elapsed();
        write_output(path, &manifest.render())?;
    }
    Ok(())
}

fn parse_cases(text: &str) -> Result<BTreeSet<u8>, CliError> {
    let mut cases = BTreeSet::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let n: u8 = part
            .parse()
            .ok()
            .filter(|n| (1..=4).contains(n))
            .ok_or_else(|| CliError::Usage(format!("unknown merge case `{part}`")))?;
        cases.insert(n);
    }
    Ok(cases)
}

fn cmd_merge(args: MergeArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let cases = parse_cases(&args.cases)?;
    let mut manifest = RunManifest::new("merge");
    let (tax, tax_text) = load_taxonomy_file(&args.taxonomy)?;
    let (ab_subs, ab_text) = load_dict_file(&args.dict_ab, &args.pos)?;
    let (ba_subs, ba_text) = load_dict_file(&args.dict_ba, &args.pos)?;
    manifest.add_input(&args.taxonomy.display().to_string(), &tax_text);
    manifest.add_input(&args.dict_ab.display().to_string(), &ab_text);
    manifest.add_input(&args.dict_ba.display().to_string(), &ba_text);
    manifest.set_config("pos", &args.pos);
    manifest.set_config(
        "cases",
        cases
            .iter()
            .map(u8::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );

    let md: MergedDictionary = bidict::merge_directions(
        bidict::pairs_from_subentries(&ab_subs, true),
        bidict::pairs_from_subentries(&ba_subs, false),
    );
    let cfg = LinkerConfig {
        enabled_merge_cases: cases,
        ..LinkerConfig::default()
    };
    let outcome = linker::merge_all(&md, &tax, &cfg);
    let coverage = bidict::coverage_report(&md, &tax);

    emit(args.out.as_deref(), &render::merged_link_file(&outcome.links))?;

    let mut stats_rows: Vec<(String, linker::MergeStats)> = outcome
        .per_case
        .iter()
        .map(|(case, stats)| (format!("case{case}"), *stats))
        .collect();
    stats_rows.push(("total".to_string(), outcome.total));
    if let Some(path) = &args.stats {
        write_output(path, &render::stats_file(&stats_rows))?;
    }

    let ctx = MergeTableContext {
        taxonomy: &tax,
        dictionary: &md,
        coverage,
    };
    print!(
        "{}",
        render::render_merge_table(&ctx, &outcome.per_case, &outcome.total)
    );

    if let Some(path) = &args.manifest {
        if let Some(out) = &args.out {
            manifest.add_output(&out.display().to_string());
        }
        if let Some(stats) = &args.stats {
            manifest.add_output(&stats.display().to_string());
        }
        manifest.elapsed = started.elapsed();
        write_output(path, &manifest.render())?;
    }
    Ok(())
}

fn cmd_wsd(args: WsdArgs) -> Result<(), CliError> {
    let (tax, _) = load_taxonomy_file(&args.taxonomy)?;
    let context: Vec<String> = args
        .context
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(bidict::normalize_lemma)
        .collect();
    let word = bidict::normalize_lemma(&args.word);
    let got = density::disambiguate(&tax, &word, &context)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let senses: Vec<&str> = got.chosen_senses.iter().map(|s| s.as_str()).collect();
    println!(
        "{}\t{}\t{}/{}",
        senses.join(","),
        got.winning_root,
        got.score.marks,
        got.score.subtree_size
    );
    Ok(())
}

fn cmd_normalize(args: NormalizeArgs) -> Result<(), CliError> {
    let resolved = match (&args.taxonomy, &args.dict) {
        (Some(tax_path), None) => {
            let (tax, _) = load_taxonomy_file(tax_path)?;
            normalizer::resolve_target_phrase(&args.phrase, &|w| tax.has_lemma(w))
        }
        (None, Some(dict_path)) => {
            let (subs, _) = load_dict_file(dict_path, &args.pos)?;
            let dict = SourceDictionary::from_subentries(&subs);
            normalizer::resolve_source_phrase(&args.phrase, &|w| dict.contains_headword(w))
        }
        _ => {
            return Err(CliError::Usage(
                "exactly one of --taxonomy or --dict is required".to_string(),
            ))
        }
    };
    let kind = match resolved.kind {
        normalizer::ResolvedKind::Direct => "direct",
        normalizer::ResolvedKind::Morphological => "morphological",
        normalizer::ResolvedKind::Compound => "compound",
        normalizer::ResolvedKind::Components => "components",
        normalizer::ResolvedKind::Unresolved => "unresolved",
    };
    println!("{}\t{}", kind, resolved.resolved.join(","));
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<(), CliError> {
    let text = read_input(&args.links)?;
    let links = render::parse_link_file(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.links.display())))?;
    let rows = render::stats_rows_from_links(&links);
    print!("{}", render::stats_file(&rows));
    Ok(())
}
