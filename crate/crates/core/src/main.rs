use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use log::info;

use gecsynth::errortypes::type_distribution;
use gecsynth::m2::{evaluate_corpus, parse_m2, ScoreOptions, DEFAULT_MAX_UNCHANGED};
use gecsynth::pair::read_pairs;
use gecsynth::pipeline::{
    generate_to_file, mix_to_file, read_manifest, rule_corrupt_file, sidecar_path, BackendKind, BitextCorpus,
    GenerateSettings, PipelineConfig,
};
use gecsynth::predict::conformance::run_conformance;
use gecsynth::predict::{EchoBackend, LexiconBackend, PredictorBackend, StubServer};
use gecsynth::rulegen::ConfusionSet;
use gecsynth::text::LangProfile;

#[derive(Parser)]
#[command(name = "gecsynth", version, about = "Synthetic GEC data generation, M2 scoring and error-type analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate erroneous pairs from bitext through a masked-infill predictor.
    Generate(GenerateArgs),
    /// Corrupt monolingual sentences with rule-based noise.
    RuleCorrupt(RuleArgs),
    /// Sample and shuffle two pair files into one.
    Mix(MixArgs),
    /// Score system output against M2 gold annotations.
    Score(ScoreArgs),
    /// Print the error-type distribution of a pair file.
    Types(TypesArgs),
    /// Serve a lexicon or echo backend over the predictor wire protocol.
    StubServe(StubArgs),
    /// Run the protocol conformance checks against a predictor server.
    Conformance(ConformanceArgs),
}

#[derive(Args)]
struct Common {
    /// Global seed (overrides the config file).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (overrides the config file).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
    /// Bitext as `english TAB target` lines.
    #[arg(long, conflicts_with_all = ["english", "target"], required_unless_present = "english")]
    input: Option<PathBuf>,
    /// English side of a line-aligned parallel corpus.
    #[arg(long, requires = "target")]
    english: Option<PathBuf>,
    /// Target side of a line-aligned parallel corpus.
    #[arg(long, requires = "english")]
    target: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
    /// Predictor server URL (overrides the config backend).
    #[arg(long)]
    backend_url: Option<String>,
    /// Continue after the record recorded in the output's manifest.
    #[arg(long)]
    resume: bool,
}

#[derive(Args)]
struct RuleArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
    /// One sentence per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// `token TAB alternatives` file.
    #[arg(long)]
    confusion: Option<PathBuf>,
}

#[derive(Args)]
struct MixArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    n_a: usize,
    #[arg(long)]
    n_b: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    /// Tokenized system output, one sentence per line.
    #[arg(long)]
    hyp: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long)]
    lowercase: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_UNCHANGED)]
    max_unchanged: usize,
}

#[derive(Args)]
struct TypesArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    top: Option<usize>,
    /// Treat every grapheme as a token (CJK).
    #[arg(long)]
    char_level: bool,
}

#[derive(Args)]
struct StubArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: String,
    /// `token TAB count` file.
    #[arg(long, conflicts_with = "echo", required_unless_present = "echo")]
    lexicon: Option<PathBuf>,
    /// `id TAB tokens` oracle file.
    #[arg(long)]
    echo: Option<PathBuf>,
}

#[derive(Args)]
struct ConformanceArgs {
    #[arg(long)]
    url: String,
    #[arg(long, default_value_t = 16)]
    top_k: usize,
}

fn load_config(path: Option<&Path>, common: &Common) -> anyhow::Result<PipelineConfig> {
    let mut cfg = match path {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(w) = common.workers {
        cfg.workers = w as usize;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let mut cfg = load_config(args.config.as_deref(), &args.common)?;
    if let Some(url) = args.backend_url {
        cfg.backend.kind = BackendKind::Remote;
        cfg.backend.url = Some(url);
    }
    let corpus = match (args.input, args.english, args.target) {
        (Some(tsv), _, _) => BitextCorpus::Tsv(tsv),
        (None, Some(english), Some(target)) => BitextCorpus::Parallel { english, target },
        _ => bail!("either --input or both --english and --target are required"),
    };
    let mut settings = GenerateSettings::from_config(&cfg);
    if args.resume {
        let manifest = sidecar_path(&args.output, ".manifest.json");
        let m = read_manifest(&manifest).context("--resume needs the manifest of a failed run")?;
        settings.resume_after = m.last_completed_record_id;
        info!("resuming after record {:?}", settings.resume_after);
    }
    let backend = cfg.backend.build(cfg.batch_size)?;
    let stats = generate_to_file(&corpus, &settings, backend.as_ref(), &args.output)?;
    info!(
        "read {} emitted {} filtered {} in {:.2}s",
        stats.records_read, stats.emitted, stats.filtered, stats.elapsed_secs
    );
    Ok(())
}

fn rule_corrupt(args: RuleArgs) -> anyhow::Result<()> {
    let cfg = load_config(args.config.as_deref(), &args.common)?;
    let cs = args.confusion.as_deref().map(ConfusionSet::load).transpose()?;
    let stats = rule_corrupt_file(&args.input, &args.output, &cfg.rule, cs.as_ref(), &cfg.lang, cfg.seed, cfg.workers)?;
    info!("read {} emitted {} skipped {}", stats.records_read, stats.emitted, stats.skipped);
    Ok(())
}

fn score(args: ScoreArgs) -> anyhow::Result<()> {
    let gold = parse_m2(&args.gold)?;
    let text = std::fs::read_to_string(&args.hyp).with_context(|| format!("reading {}", args.hyp.display()))?;
    let hyps: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect();
    let opts = ScoreOptions {
        beta: args.beta,
        max_unchanged: args.max_unchanged,
        lowercase: args.lowercase,
    };
    let report = evaluate_corpus(&hyps, &gold, &opts)?;
    println!("{}", report.summary_line());
    Ok(())
}

fn types(args: TypesArgs) -> anyhow::Result<()> {
    let pairs = read_pairs(&args.pairs)?;
    let profile = if args.char_level {
        LangProfile::char_level()
    } else {
        LangProfile::whitespace()
    };
    let hist = type_distribution(&pairs, &profile)?;
    for (t, ratio) in hist.ranked().into_iter().take(args.top.unwrap_or(usize::MAX)) {
        println!("{} {ratio:.4}", t.as_str());
    }
    Ok(())
}

fn stub_serve(args: StubArgs) -> anyhow::Result<()> {
    let backend: Arc<dyn PredictorBackend> = match (args.lexicon, args.echo) {
        (Some(p), _) => Arc::new(LexiconBackend::load(&p)?),
        (None, Some(p)) => Arc::new(EchoBackend::load(&p)?),
        (None, None) => bail!("one of --lexicon or --echo is required"),
    };
    let server = StubServer::spawn(backend, &args.addr)?;
    println!("{}", server.url());
    server.join();
    Ok(())
}

fn conformance(args: ConformanceArgs) -> anyhow::Result<()> {
    let outcomes = run_conformance(&args.url, args.top_k);
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        bail!("{failed} conformance check(s) failed");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::RuleCorrupt(a) => rule_corrupt(a),
        Command::Mix(a) => mix_to_file(&a.a, &a.b, a.n_a, a.n_b, a.seed, &a.output)
            .map(|_| ())
            .map_err(Into::into),
        Command::Score(a) => score(a),
        Command::Types(a) => types(a),
        Command::StubServe(a) => stub_serve(a),
        Command::Conformance(a) => conformance(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
