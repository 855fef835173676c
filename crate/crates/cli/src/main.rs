//! `unilearn`: run trials, compute dimensions, walk adversaries, list
//! experts and run the condition checkers.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use unilearn::concepts::HypothesisSpace;
use unilearn::harness::{
    adversary_csv, build_space, check_c2, check_condition1, render_report, render_traces, run_trials, write_file,
    ClassSpec, Config, Format, Source, Verdict,
};
use unilearn::learners::experts::{expert_sets, expert_sets_text, ExpertSet};
use unilearn::trees::{
    build_vcl_tree_nodes, littlestone_dimension, littlestone_tree_file, littlestone_tree_text, littlestone_witness,
    vc_dimension, vcl_depth, vcl_tree_file, vcl_tree_text, MAX_VCL_NODES,
};
use unilearn::{Error, Result};

#[derive(Parser)]
#[command(name = "unilearn", version, about = "Universal online learning laboratory")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv, jsonl or svg.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    #[command(flatten)]
    class: ClassArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ClassArgs {
    /// Class preset: thresholds, singletons, full, union-split, all-functions.
    #[arg(long, global = true)]
    class: Option<String>,
    /// Preset parameters, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    params: Option<Vec<usize>>,
    /// Class file: a `domain:` header, then one `{0,1,*}` row per hypothesis.
    #[arg(long, global = true)]
    class_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a learner over seeded trials and emit the traces.
    Run(RunArgs),
    /// Print VC, Littlestone and VCL dimensions, with an optional witness tree.
    Dims(DimsArgs),
    /// Emit a tree-walk adversary stream.
    Adversary(AdversaryArgs),
    /// List expert sets or convert between sets and indices.
    Experts(ExpertArgs),
    /// Run a condition checker.
    Check(CheckArgs),
}

#[derive(Args)]
struct RunArgs {
    /// soa, alg2, alg1, wm, squint or constant.
    #[arg(long)]
    learner: Option<String>,
    #[arg(long)]
    rollouts: Option<usize>,
    #[arg(long)]
    experts_max: Option<usize>,
    /// Process kind.
    #[arg(long)]
    process: Option<String>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Witness {
    Littlestone,
    Vcl,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFormat {
    Text,
    File,
}

#[derive(Args)]
struct DimsArgs {
    /// Search depth cap for the Littlestone and VCL searches.
    #[arg(long, default_value_t = 12)]
    cap: usize,
    #[arg(long, value_enum)]
    witness: Option<Witness>,
    #[arg(long, value_enum, default_value = "text")]
    tree_format: TreeFormat,
}

#[derive(Args)]
struct AdversaryArgs {
    /// littlestone-walk or vcl-walk.
    #[arg(long)]
    kind: Option<String>,
    /// Witness depth, or node count for vcl-walk.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args)]
struct ExpertArgs {
    /// List the sets with indices 1..=COUNT.
    #[arg(long, conflicts_with_all = ["index", "set"])]
    count: Option<usize>,
    /// Print the set with this index.
    #[arg(long, conflicts_with = "set")]
    index: Option<String>,
    /// Print the index of this set (space or comma separated rounds).
    #[arg(long)]
    set: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Condition1,
    C2,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: CheckKind,
    /// Process kind.
    #[arg(long)]
    process: Option<String>,
    /// Domain size for c2; the class domain when absent.
    #[arg(long)]
    domain: Option<usize>,
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| match e {
            Error::Io { .. } => Error::Config(e.to_string()),
            e => e,
        })?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(file) = &cli.class.class_file {
        config.class.file = Some(file.clone());
    } else if let Some(name) = &cli.class.class {
        let params = cli.class.params.clone().unwrap_or_default();
        config.class = ClassSpec::preset(name, &params);
    } else if let Some(params) = &cli.class.params {
        config.class.params = params.clone();
    }
    Ok(config)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli, args: &RunArgs) -> Result<ExitCode> {
    let format: Format = cli.format.parse()?;
    let mut config = load_config(cli)?;
    if let Some(name) = &args.learner {
        config.learner.name = name.clone();
    }
    if let Some(m) = args.rollouts {
        config.learner.rollouts = m;
    }
    if let Some(i) = args.experts_max {
        config.learner.experts_max = i;
    }
    if let Some(kind) = &args.process {
        config.process.kind = kind.clone();
    }
    if let Some(t) = args.rounds {
        config.trial.rounds = t;
    }
    if let Some(s) = args.seeds {
        config.trial.seeds = s;
    }
    config.validate()?;
    let traces = run_trials(&config)?;
    for t in &traces {
        eprintln!(
            "seed {}: {} rounds, {} mistakes, regret {}",
            t.meta.seed,
            t.len(),
            t.mistakes(),
            t.regret()
        );
    }
    emit(cli, &render_traces(&traces, format)?)?;
    Ok(ExitCode::SUCCESS)
}

fn dims(cli: &Cli, args: &DimsArgs) -> Result<ExitCode> {
    let config = load_config(cli)?;
    let space = build_space(&config.class)?;
    let class = space
        .table()
        .ok_or_else(|| Error::Config("dims needs an extensional class; use full(n) for small domains".into()))?;
    let vc = vc_dimension(class).map_or("none".into(), |d| d.to_string());
    let ldim = littlestone_dimension(class, args.cap);
    let vcl = vcl_depth(class, args.cap);
    let show = |d: Option<unilearn::trees::Depth>| d.map_or("none".into(), |d| d.to_string());
    let mut out = format!("vc={vc}, littlestone={}, vcl_depth={}\n", show(ldim), show(vcl));
    match args.witness {
        None => {}
        Some(Witness::Littlestone) => {
            let depth = ldim.map_or(0, |d| d.value());
            let tree = littlestone_witness(&space, depth)?;
            out += &match args.tree_format {
                TreeFormat::Text => littlestone_tree_text(&tree, space.domain()),
                TreeFormat::File => littlestone_tree_file(&tree, space.domain()),
            };
        }
        Some(Witness::Vcl) => {
            // the largest BFS prefix of the tree that fits the domain
            let mut tree = Err(Error::Infeasible("no VCL tree node fits".into()));
            for count in (1..=MAX_VCL_NODES).rev() {
                tree = build_vcl_tree_nodes(&space, count);
                if tree.is_ok() {
                    break;
                }
            }
            let tree = tree?;
            out += &match args.tree_format {
                TreeFormat::Text => vcl_tree_text(&tree),
                TreeFormat::File => vcl_tree_file(&tree),
            };
        }
    }
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn adversary(cli: &Cli, args: &AdversaryArgs) -> Result<ExitCode> {
    let mut config = load_config(cli)?;
    if let Some(kind) = &args.kind {
        config.process.kind = kind.clone();
    }
    if args.depth.is_some() {
        config.process.depth = args.depth;
    }
    if !matches!(config.process.kind.as_str(), "littlestone-walk" | "vcl-walk") {
        return Err(Error::Config(format!(
            "adversary needs process kind littlestone-walk or vcl-walk, got {}",
            config.process.kind
        )));
    }
    let space = build_space(&config.class)?;
    let rounds = match config.process.kind.as_str() {
        "littlestone-walk" => config.process.depth.unwrap_or(config.trial.rounds),
        _ => (1usize << config.process.depth.unwrap_or(MAX_VCL_NODES)) - 1,
    };
    let source = Source::new(space.clone(), &config.process, &config.trial, rounds)?;
    let stream = source.stream(config.seed)?;
    let trace = stream
        .adversary
        .ok_or_else(|| Error::Invariant("walk produced no adversary trace".into()))?;
    emit(cli, &adversary_csv(&trace, space.domain())?)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_set(text: &str) -> Result<ExpertSet> {
    let rounds = text
        .split([' ', ','])
        .filter(|f| !f.is_empty())
        .map(|f| f.parse::<u64>().map_err(|e| Error::Config(format!("bad round {f}: {e}"))))
        .collect::<Result<_>>()?;
    ExpertSet::new(rounds)
}

fn experts(cli: &Cli, args: &ExpertArgs) -> Result<ExitCode> {
    let out = if let Some(index) = &args.index {
        let index: BigUint = index
            .parse()
            .map_err(|e| Error::Config(format!("bad index {index}: {e}")))?;
        format!("{}\n", ExpertSet::from_index(index)?)
    } else if let Some(set) = &args.set {
        format!("{}\n", parse_set(set)?.index())
    } else {
        expert_sets_text(&expert_sets(args.count.unwrap_or(16))?)
    };
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn check(cli: &Cli, args: &CheckArgs) -> Result<ExitCode> {
    let format: Format = cli.format.parse()?;
    let mut config = load_config(cli)?;
    if let Some(kind) = &args.process {
        config.process.kind = kind.clone();
    }
    let report = match args.kind {
        CheckKind::Condition1 => {
            let space = match &config.class {
                c if c.preset == "all-functions" && c.file.is_none() => {
                    let n = config.condition1.n_grid.iter().copied().max().unwrap_or(0);
                    HypothesisSpace::all_functions(c.params.first().copied().unwrap_or(n).max(n))?
                }
                c => build_space(c)?,
            };
            check_condition1(&space, &config.process, &config.condition1, config.seed)?
        }
        CheckKind::C2 => {
            let n = match args.domain {
                Some(n) => n,
                None => build_space(&config.class)?.domain().len(),
            };
            check_c2(&config.process, n, &config.c2, config.seed)?
        }
    };
    eprintln!(
        "{}: {} (last {:.6}, threshold {})",
        report.check,
        report.verdict,
        report.last().unwrap_or(f64::NAN),
        report.threshold
    );
    emit(cli, &render_report(&report, format)?)?;
    Ok(match report.verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail | Verdict::Inconclusive => ExitCode::from(1),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => run(&cli, a),
        Command::Dims(a) => dims(&cli, a),
        Command::Adversary(a) => adversary(&cli, a),
        Command::Experts(a) => experts(&cli, a),
        Command::Check(a) => check(&cli, a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
