use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hatenet_core::pipeline::{self, Command, Outcome, PipelineError, RunConfig, CONFIG_ENV};
use hatenet_core::synth::CorpusConfig;

/// Hate and counterspeech analysis over tweet corpora and follower graphs.
///
/// Settings come from a TOML config (`--config` or $HATENET_CONFIG); every
/// flag below overrides the matching config key.
#[derive(Parser, Debug)]
#[command(name = "hatenet", version)]
struct Cli {
    /// Run configuration file.
    #[arg(short, long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Filter raw records by keyword, attach labels, deduplicate.
    Ingest,
    /// Cross-validate the feature classifiers and label unlabeled records.
    Classify,
    /// Categorize users and compare hate and counterspeech users.
    Users,
    /// Daily label counts and spike changes.
    Timeline,
    /// Connectivity ratios against degree-preserving shuffles.
    Homophily,
    /// Infection risk curves against cascade-shuffle baselines.
    Contagion,
    /// Render SVG charts from the analysis artifacts.
    Report,
    /// Run every command in order.
    Run,
    /// Write a synthetic dataset and a config for it.
    Generate(GenerateArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Directory to write into.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 2020)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    users: usize,
    /// Retained records after filtering.
    #[arg(long, default_value_t = 1000)]
    record_count: usize,
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// Raw records (newline-delimited JSON).
    #[arg(long, global = true)]
    records: Option<PathBuf>,
    /// `tweet_id,label` CSV.
    #[arg(long, global = true)]
    labels: Option<PathBuf>,
    /// Follower edge list, `src<TAB>dst`.
    #[arg(long, global = true)]
    edges: Option<PathBuf>,
    /// `user_id,covid_flag,category` CSV.
    #[arg(long, global = true)]
    nodes: Option<PathBuf>,
    /// `builtin` or a keyword file.
    #[arg(long, global = true)]
    keywords: Option<String>,
    /// First day of the observation window (YYYY-MM-DD).
    #[arg(long, global = true)]
    window_start: Option<String>,
    /// Last day of the observation window (YYYY-MM-DD).
    #[arg(long, global = true)]
    window_end: Option<String>,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    folds: Option<usize>,
    #[arg(long, global = true)]
    epochs: Option<usize>,
    #[arg(long, global = true)]
    batch_size: Option<usize>,
    #[arg(long, global = true)]
    learning_rate: Option<f64>,
    /// Days before and after each event for spike changes.
    #[arg(long, global = true)]
    window_days: Option<u32>,
    /// Event day for spike changes; repeatable.
    #[arg(long = "event", global = true)]
    events: Vec<String>,
    #[arg(long, global = true)]
    homophily_replicates: Option<usize>,
    /// Swap attempts per edge.
    #[arg(long, global = true)]
    swap_factor: Option<f64>,
    /// Connectivity neighbors: out, in or union.
    #[arg(long, global = true)]
    homophily_direction: Option<String>,
    /// Connectivity mode: edge or ego.
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true)]
    contagion_replicates: Option<usize>,
    /// Exposure neighbors: out, in or union.
    #[arg(long, global = true)]
    exposure_direction: Option<String>,
    /// Risk pair such as `hate->hate`; repeatable.
    #[arg(long = "pair", global = true)]
    pairs: Vec<String>,
    /// Highest exposure level; 0 picks it from --min-exposed.
    #[arg(long, global = true)]
    n_max: Option<u32>,
    #[arg(long, global = true)]
    min_exposed: Option<u64>,
    /// Exposed population: covid or all.
    #[arg(long, global = true)]
    population: Option<String>,
    /// Count dual users as infected.
    #[arg(long, global = true)]
    include_dual: bool,
}

impl Overrides {
    fn apply(self, cfg: &mut RunConfig) {
        let i = &mut cfg.input;
        set(&mut i.records, self.records.map(Some));
        set(&mut i.labels, self.labels.map(Some));
        set(&mut i.edges, self.edges.map(Some));
        set(&mut i.nodes, self.nodes.map(Some));
        set(&mut i.keywords, self.keywords);
        set(&mut cfg.window.start, self.window_start);
        set(&mut cfg.window.end, self.window_end);
        set(&mut cfg.run.output, self.output);
        set(&mut cfg.run.seed, self.seed);
        set(&mut cfg.run.threads, self.threads);
        set(&mut cfg.classify.folds, self.folds);
        set(&mut cfg.classify.epochs, self.epochs);
        set(&mut cfg.classify.batch_size, self.batch_size);
        set(&mut cfg.classify.learning_rate, self.learning_rate);
        set(&mut cfg.timeline.window_days, self.window_days);
        if !self.events.is_empty() {
            cfg.timeline.events = self.events;
        }
        set(&mut cfg.homophily.replicates, self.homophily_replicates);
        set(&mut cfg.homophily.swap_factor, self.swap_factor);
        set(&mut cfg.homophily.direction, self.homophily_direction);
        set(&mut cfg.homophily.mode, self.mode);
        set(&mut cfg.contagion.replicates, self.contagion_replicates);
        set(&mut cfg.contagion.direction, self.exposure_direction);
        if !self.pairs.is_empty() {
            cfg.contagion.pairs = self.pairs;
        }
        set(&mut cfg.contagion.n_max, self.n_max);
        set(&mut cfg.contagion.min_exposed, self.min_exposed);
        set(&mut cfg.contagion.population, self.population);
        if self.include_dual {
            cfg.contagion.include_dual = true;
        }
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn print_outcome(o: &Outcome) {
    println!("{}: {} artifacts", o.command, o.artifacts.len());
    for a in &o.artifacts {
        println!("  {a}");
    }
    for w in &o.warnings {
        eprintln!("warning: {}: {w}", o.command);
    }
}

fn run(cli: Cli) -> Result<(), (Option<&'static str>, PipelineError)> {
    if let Cmd::Generate(g) = &cli.command {
        let corpus = CorpusConfig {
            users: g.users,
            records: g.record_count,
            seed: g.seed,
            ..CorpusConfig::default()
        };
        let files = pipeline::generate(&g.out, &corpus).map_err(|e| (Some("generate"), e))?;
        for f in files {
            println!("{}", g.out.join(f).display());
        }
        return Ok(());
    }
    let mut cfg = pipeline::load_config(cli.config.as_deref()).map_err(|e| (None, e))?;
    cli.overrides.apply(&mut cfg);
    let command = match cli.command {
        Cmd::Ingest => Command::Ingest,
        Cmd::Classify => Command::Classify,
        Cmd::Users => Command::Users,
        Cmd::Timeline => Command::Timeline,
        Cmd::Homophily => Command::Homophily,
        Cmd::Contagion => Command::Contagion,
        Cmd::Report => Command::Report,
        Cmd::Run => {
            for o in pipeline::run_all(&cfg).map_err(|e| (Some("run"), e))? {
                print_outcome(&o);
            }
            return Ok(());
        }
        Cmd::Generate(_) => unreachable!("handled above"),
    };
    let outcome = pipeline::execute(command, &cfg).map_err(|e| (Some(command.name()), e))?;
    print_outcome(&outcome);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let err = PipelineError::Validation(e.kind().to_string());
            eprintln!("{}", err.to_json(None));
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((command, e)) => {
            eprintln!("{}", e.to_json(command));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
