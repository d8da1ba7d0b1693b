//! Command-line driver: ingest, typemap, dict, match, eval, sweep, synth.
//!
//! Settings come from an optional `key = value` config file; command-line
//! flags override it. Exit codes: 2 unreadable corpus or I/O failure,
//! 3 no mapped entity types, 4 evaluation input mismatch, 1 anything else.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use infomatch::corpus::{load_corpus, Corpus, Lang};
use infomatch::dictionary::build_dictionary;
use infomatch::error::Error;
use infomatch::evaluation::GroundTruth;
use infomatch::pipeline::{
    evaluate, match_and_eval, run_match, write_atomic, MatchFile, RunConfig,
};
use infomatch::synth::{generate, SynthSpec};
use infomatch::typemap::match_entity_types;

#[derive(Parser)]
#[command(name = "infomatch", version, about = "Cross-language infobox schema matching")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Key-value config file; flags override its settings.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    #[arg(long, global = true)]
    lang_left: Option<String>,
    #[arg(long, global = true)]
    lang_right: Option<String>,
    #[arg(long, global = true)]
    t_sim: Option<f64>,
    #[arg(long, global = true)]
    t_lsi: Option<f64>,
    #[arg(long, global = true)]
    t_group: Option<f64>,
    /// Truncation rank of the co-occurrence factorization.
    #[arg(long, global = true)]
    svd_f: Option<usize>,
    #[arg(long, global = true)]
    min_type_support: Option<usize>,
    #[arg(long, global = true)]
    min_type_fraction: Option<f64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.corpus {
            cfg.corpus = v.clone();
        }
        if let Some(v) = &self.lang_left {
            cfg.lang_left = Lang::new(v);
        }
        if let Some(v) = &self.lang_right {
            cfg.lang_right = Lang::new(v);
        }
        if let Some(v) = self.t_sim {
            cfg.alignment.t_sim = v;
        }
        if let Some(v) = self.t_lsi {
            cfg.alignment.t_lsi = v;
        }
        if let Some(v) = self.t_group {
            cfg.alignment.t_group = v;
        }
        if let Some(v) = self.svd_f {
            cfg.alignment.svd_f = Some(v);
        }
        if let Some(v) = self.min_type_support {
            cfg.min_type_support = v;
        }
        if let Some(v) = self.min_type_fraction {
            cfg.min_type_fraction = v;
        }
        if let Some(v) = &self.out_dir {
            cfg.out_dir = v.clone();
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        Ok(cfg)
    }
}

/// Ablation switches shared by `match` and `sweep`.
#[derive(Args, Clone, Default)]
struct AblationArgs {
    /// Skip the uncertain-match revision phase.
    #[arg(long)]
    no_revise: bool,
    /// Zero out translated value similarity.
    #[arg(long)]
    no_vsim: bool,
    /// Zero out link-set similarity.
    #[arg(long)]
    no_lsim: bool,
    /// Order candidates by max(vsim, lsim) instead of the
    /// co-occurrence correlation; skip correlation checks.
    #[arg(long)]
    no_lsi: bool,
    /// Skip the all-members correlation test when joining a match.
    #[arg(long)]
    no_integrate: bool,
    /// Shuffle the candidate queue with the run seed.
    #[arg(long)]
    random_order: bool,
    /// Accept every candidate with positive vsim or lsim in one pass.
    #[arg(long)]
    single_step: bool,
}

impl AblationArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        let a = &mut cfg.alignment.ablation;
        a.revise = !self.no_revise;
        a.use_vsim = !self.no_vsim;
        a.use_lsim = !self.no_lsim;
        a.use_lsi = !self.no_lsi;
        a.integrate_check = !self.no_integrate;
        a.single_step = self.single_step;
        a.random_order = self.random_order.then_some(cfg.seed);
    }

    fn active_labels(&self) -> Vec<&'static str> {
        let mut labels = Vec::new();
        if self.no_revise {
            labels.push("no-revise");
        }
        if self.no_vsim {
            labels.push("no-vsim");
        }
        if self.no_lsim {
            labels.push("no-lsim");
        }
        if self.no_lsi {
            labels.push("no-lsi");
        }
        if self.no_integrate {
            labels.push("no-integrate");
        }
        if self.random_order {
            labels.push("random-order");
        }
        if self.single_step {
            labels.push("single-step");
        }
        labels
    }
}

#[derive(Subcommand)]
enum Command {
    /// Load the corpus and print the ingestion report.
    Ingest,
    /// Map entity types across the language pair; writes typemap.json.
    Typemap,
    /// Build the title-translation dictionary; writes dictionary.tsv.
    Dict,
    /// Align attributes; writes one match file per mapped type pair.
    Match {
        #[command(flatten)]
        ablation: AblationArgs,
    },
    /// Score match files against a ground truth.
    Eval {
        /// Match files, or a directory of match_*.json files.
        #[arg(long, required = true, num_args = 1..)]
        matches: Vec<PathBuf>,
        /// Ground truth TSV: type_left::type_right, attr, counterpart.
        #[arg(long)]
        gt: PathBuf,
    },
    /// Run match + eval over a threshold grid; writes sweep.csv.
    Sweep {
        /// Threshold to vary.
        #[arg(long, value_parser = ["t_sim", "t_lsi"], default_value = "t_lsi")]
        param: String,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 0.9)]
        to: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long)]
        gt: PathBuf,
        #[command(flatten)]
        ablation: AblationArgs,
    },
    /// Generate a synthetic bilingual corpus with planted ground truth.
    Synth {
        #[arg(long, default_value_t = 1)]
        n_types: usize,
        #[arg(long, default_value_t = 100)]
        n_entities: usize,
        #[arg(long, default_value_t = 8)]
        n_synonym_sets: usize,
        /// Target schema overlap between paired infoboxes, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        overlap: f64,
        #[arg(long, default_value_t = 6)]
        value_pool_size: usize,
        /// Fraction of each value pool translatable across languages.
        #[arg(long, default_value_t = 1.0)]
        value_overlap: f64,
        #[arg(long, default_value_t = 0.5)]
        link_density: f64,
        #[arg(long, default_value_t = 0.0)]
        value_perturbation: f64,
        #[arg(long, default_value_t = 0.0)]
        rare_attr_fraction: f64,
        /// Fraction of synonym sets with untranslatable, unlinked values.
        #[arg(long, default_value_t = 0.0)]
        opaque_set_fraction: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.common.resolve() {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    match run(&cli.command, cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        Error::Io(_) => 2,
        Error::NoMappedTypes => 3,
        Error::Eval(_) => 4,
        _ => 1,
    })
}

fn load(cfg: &RunConfig) -> Result<Corpus, Error> {
    let (corpus, report) = load_corpus(&cfg.corpus)?;
    if report.skipped_lines > 0 || report.duplicate_ids > 0 {
        eprintln!(
            "warning: skipped {} malformed lines, {} duplicate ids",
            report.skipped_lines, report.duplicate_ids
        );
    }
    Ok(corpus)
}

fn safe_name(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn run(command: &Command, mut cfg: RunConfig) -> Result<(), Error> {
    match command {
        Command::Ingest => {
            let (corpus, report) = load_corpus(&cfg.corpus)?;
            println!(
                "{}",
                serde_json::json!({
                    "articles": corpus.len(),
                    "loaded": report.loaded,
                    "skipped_lines": report.skipped_lines,
                    "duplicate_ids": report.duplicate_ids,
                })
            );
        }
        Command::Typemap => {
            let corpus = load(&cfg)?;
            let mapping = match_entity_types(
                &corpus,
                &cfg.lang_left,
                &cfg.lang_right,
                cfg.min_type_support,
                cfg.min_type_fraction,
            );
            if mapping.is_empty() {
                return Err(Error::NoMappedTypes);
            }
            let path = cfg.out_dir.join("typemap.json");
            let json = serde_json::to_vec_pretty(&mapping)
                .map_err(|e| Error::Io(e.to_string()))?;
            write_atomic(&path, &json)?;
            println!("{} type pairs -> {}", mapping.pairs.len(), path.display());
        }
        Command::Dict => {
            let corpus = load(&cfg)?;
            let dict = build_dictionary(&corpus, &cfg.lang_left, &cfg.lang_right);
            let mut buf = Vec::new();
            dict.write_tsv(&mut buf)?;
            let path = cfg.out_dir.join("dictionary.tsv");
            write_atomic(&path, &buf)?;
            println!("{} entries -> {}", dict.len(), path.display());
        }
        Command::Match { ablation } => {
            ablation.apply(&mut cfg);
            let corpus = load(&cfg)?;
            let run = run_match(&corpus, &cfg)?;
            for result in &run.results {
                let file = MatchFile::from_result(result);
                let path = cfg.out_dir.join(format!(
                    "match_{}__{}.json",
                    safe_name(&file.type_left),
                    safe_name(&file.type_right)
                ));
                let json = serde_json::to_vec_pretty(&file)
                    .map_err(|e| Error::Io(e.to_string()))?;
                write_atomic(&path, &json)?;
            }
            let log = serde_json::to_vec_pretty(&run.log)
                .map_err(|e| Error::Io(e.to_string()))?;
            write_atomic(&cfg.out_dir.join("run_log.json"), &log)?;
            println!(
                "{} matches over {} type pairs ({} certain, {} revised) -> {}",
                run.log.matches_total,
                run.log.type_pairs,
                run.log.certain_events,
                run.log.revised_events,
                cfg.out_dir.display()
            );
        }
        Command::Eval { matches, gt } => {
            let corpus = load(&cfg)?;
            let gt = read_ground_truth(gt)?;
            let files = read_match_files(matches)?;
            let report = evaluate(&corpus, &cfg, &files, &gt)?;
            let json = serde_json::to_vec_pretty(&report)
                .map_err(|e| Error::Io(e.to_string()))?;
            write_atomic(&cfg.out_dir.join("eval.json"), &json)?;
            print!("{}", report.render_table());
        }
        Command::Sweep {
            param,
            from,
            to,
            step,
            gt,
            ablation,
        } => {
            let corpus = load(&cfg)?;
            let gt = read_ground_truth(gt)?;
            if *step <= 0.0 || to < from {
                return Err(Error::Param("sweep grid must ascend".into()));
            }
            let mut grid = Vec::new();
            let mut t = *from;
            while t <= to + 1e-9 {
                grid.push((t * 1e9).round() / 1e9);
                t += step;
            }

            // grid points are independent runs
            let rows: Vec<Result<String, Error>> = std::thread::scope(|scope| {
                let handles: Vec<_> = grid
                    .iter()
                    .map(|&t| {
                        let mut run_cfg = cfg.clone();
                        match param.as_str() {
                            "t_sim" => run_cfg.alignment.t_sim = t,
                            _ => run_cfg.alignment.t_lsi = t,
                        }
                        let corpus = &corpus;
                        let gt = &gt;
                        scope.spawn(move || {
                            let r = match_and_eval(corpus, &run_cfg, gt)?;
                            Ok(format!(
                                "grid,{t},{:.6},{:.6},{:.6}",
                                r.weighted.precision, r.weighted.recall, r.weighted.f1
                            ))
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });

            let mut csv = String::from("label,threshold,precision,recall,f1\n");
            for row in rows {
                csv.push_str(&row?);
                csv.push('\n');
            }
            if !ablation.active_labels().is_empty() {
                let mut run_cfg = cfg.clone();
                ablation.apply(&mut run_cfg);
                let r = match_and_eval(&corpus, &run_cfg, &gt)?;
                let label = ablation.active_labels().join("+");
                csv.push_str(&format!(
                    "{label},{},{:.6},{:.6},{:.6}\n",
                    run_cfg.alignment.t_lsi, r.weighted.precision, r.weighted.recall, r.weighted.f1
                ));
            }
            write_atomic(&cfg.out_dir.join("sweep.csv"), csv.as_bytes())?;
            print!("{csv}");
        }
        Command::Synth {
            n_types,
            n_entities,
            n_synonym_sets,
            overlap,
            value_pool_size,
            value_overlap,
            link_density,
            value_perturbation,
            rare_attr_fraction,
            opaque_set_fraction,
        } => {
            let spec = SynthSpec {
                seed: cfg.seed,
                n_types: *n_types,
                n_entities: *n_entities,
                n_synonym_sets: *n_synonym_sets,
                overlap: *overlap,
                value_pool_size: *value_pool_size,
                value_overlap: *value_overlap,
                link_density: *link_density,
                value_perturbation: *value_perturbation,
                rare_attr_fraction: *rare_attr_fraction,
                opaque_set_fraction: *opaque_set_fraction,
            };
            let out = generate(&spec)?;
            write_atomic(&cfg.out_dir.join("corpus.jsonl"), out.corpus_jsonl.as_bytes())?;
            write_atomic(
                &cfg.out_dir.join("ground_truth.tsv"),
                out.ground_truth_tsv.as_bytes(),
            )?;
            println!(
                "corpus.jsonl + ground_truth.tsv -> {}",
                cfg.out_dir.display()
            );
        }
    }
    Ok(())
}

fn read_ground_truth(path: &Path) -> Result<GroundTruth, Error> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    GroundTruth::read_tsv(std::io::BufReader::new(file))
}

fn read_match_files(paths: &[PathBuf]) -> Result<Vec<MatchFile>, Error> {
    let mut expanded = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: BTreeSet<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.file_name()
                        .and_then(|n| n.to_str())
                        .is_some_and(|n| n.starts_with("match_") && n.ends_with(".json"))
                })
                .collect();
            expanded.append(&mut entries.iter().cloned().collect());
            entries.clear();
        } else {
            expanded.push(p.clone());
        }
    }
    if expanded.is_empty() {
        return Err(Error::Eval("no match files given".into()));
    }
    let mut files = Vec::new();
    for p in expanded {
        let text = std::fs::read_to_string(&p)
            .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        files.push(
            serde_json::from_str(&text)
                .map_err(|e| Error::Eval(format!("{}: {e}", p.display())))?,
        );
    }
    Ok(files)
}
