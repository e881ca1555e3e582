use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use sktr::exec::Parallel;
use sktr::export::{
    move_table_csv, product_pnml, sweep_csv, sweep_json, AlignmentRecord, TraceReport, TraceStatus,
};
use sktr::pnml::{read_pnml, serialize_pnml};
use sktr::sklog::write_sk_csv;
use sktr::xes::write_xes;
use sktr::{read_log, sklog};
use sktr_core::align::{search_optimal_alignment, Heuristic, SearchLimits, SearchOptions};
use sktr_core::noise::{inject_noise, pa_grid, run_pa_sweep, split_log, LabelPool, Method, NoiseConfig};
use sktr_core::tree::{benchmark_tree, running_example_model};
use sktr_core::{
    argmax_recover, build_sync_product, build_trace_net, Activity, CostFunction, SkEvent, SkTrace,
    SystemNet,
};

const EXIT_VALIDATION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

/// Trace recovery from stochastically known event logs.
#[derive(Parser)]
#[command(name = "sktr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recover the most likely deterministic trace for every case of a log.
    Recover(RecoverArgs),
    /// Compute optimal alignments and print them.
    Align(AlignArgs),
    /// Score recovery methods over a grid of noise levels.
    Sweep(SweepArgs),
    /// Turn a deterministic log into a stochastically known one.
    Inject(InjectArgs),
    /// Split off a random sample of traces, e.g. for process discovery.
    Subsample(SubsampleArgs),
    /// Export the synchronous product of the model and one trace.
    Product(ProductArgs),
    /// Write a built-in model and a log simulated from it.
    Synth(SynthArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Process model (PNML).
    #[arg(long)]
    model: PathBuf,
    /// Final marking as JSON `{"final": {place: count}}`, for models without one.
    #[arg(long = "final")]
    final_marking: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CostArg {
    Exp,
    Lin,
    Log,
}

#[derive(Args)]
struct CostArgs {
    #[arg(long, value_enum, default_value = "exp")]
    cost: CostArg,
    /// Logarithmic normalization constant, or `auto` for the per-trace maximum.
    #[arg(long, default_value = "2.4")]
    c: String,
    /// Log-move perturbation.
    #[arg(long, default_value_t = sktr_core::cost::DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Args)]
struct SearchArgs {
    /// Order the search with an admissible remaining-events bound.
    #[arg(long)]
    astar: bool,
    #[arg(long, default_value_t = SearchLimits::default().max_states)]
    max_states: usize,
    #[arg(long, default_value_t = SearchLimits::default().token_cap)]
    token_cap: u32,
}

impl SearchArgs {
    fn options(&self) -> anyhow::Result<SearchOptions> {
        if self.max_states == 0 || self.token_cap == 0 {
            bail!("--max-states and --token-cap must be positive");
        }
        Ok(SearchOptions {
            limits: SearchLimits {
                max_states: self.max_states,
                token_cap: self.token_cap,
            },
            heuristic: if self.astar { Heuristic::RemainingEvents } else { Heuristic::Zero },
            ..SearchOptions::default()
        })
    }

    fn echo(&self) -> serde_json::Value {
        json!({"astar": self.astar, "max_states": self.max_states, "token_cap": self.token_cap})
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Sktr,
    Argmax,
}

#[derive(Args)]
struct RecoverArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// SK log (.skcsv/.csv, .json, or deterministic .xes).
    #[arg(long)]
    log: PathBuf,
    #[command(flatten)]
    cost: CostArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value = "sktr")]
    method: MethodArg,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AlignArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    log: PathBuf,
    #[command(flatten)]
    cost: CostArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Print every move of each alignment, not just the summary.
    #[arg(long)]
    emit_alignment: bool,
    /// Only this case.
    #[arg(long)]
    case: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PoolArg {
    All,
    Topk,
}

#[derive(Args)]
struct NoiseArgs {
    /// Labels per uncertain event, true label included.
    #[arg(long, default_value_t = 2)]
    nt: usize,
    /// Fraction of each trace's events made uncertain.
    #[arg(long, default_value_t = 1.0)]
    tp: f64,
    #[arg(long, value_enum, default_value = "all")]
    pool: PoolArg,
    /// Pool size for `--pool topk`.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl NoiseArgs {
    fn pool(&self) -> anyhow::Result<LabelPool> {
        match (self.pool, self.k) {
            (PoolArg::All, None) => Ok(LabelPool::All),
            (PoolArg::All, Some(_)) => bail!("--k requires --pool topk"),
            (PoolArg::Topk, Some(k)) => Ok(LabelPool::TopK(k)),
            (PoolArg::Topk, None) => bail!("--pool topk requires --k"),
        }
    }

    fn config(&self, p_a: f64) -> anyhow::Result<NoiseConfig> {
        let cfg = NoiseConfig {
            n_t: self.nt,
            t_p: self.tp,
            p_a,
            label_pool: self.pool()?,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Deterministic log (.xes, or an SK log whose events are all certain).
    #[arg(long)]
    log: PathBuf,
    #[command(flatten)]
    noise: NoiseArgs,
    /// `start:end:step` over P_a.
    #[arg(long, default_value = "0:1:0.05")]
    grid: String,
    /// Comma-separated: exp, lin, log:<c>, argmax.
    #[arg(long, default_value = "exp,lin,log:2.4,log:20,argmax")]
    methods: String,
    /// Evaluate a seeded random sample of this many traces.
    #[arg(long)]
    sample: Option<usize>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InjectArgs {
    #[arg(long)]
    log: PathBuf,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    pa: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SubsampleArgs {
    #[arg(long)]
    log: PathBuf,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProductArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    log: PathBuf,
    /// Case to use; defaults to the first.
    #[arg(long)]
    case: Option<String>,
    /// Output directory; the move table goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthModel {
    Benchmark,
    RunningExample,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value = "benchmark")]
    model: SynthModel,
    #[arg(long, default_value_t = 500)]
    traces: usize,
    #[arg(long, default_value_t = 5)]
    min_len: usize,
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    /// Probability of another loop iteration.
    #[arg(long, default_value_t = 0.3)]
    repeat: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Failure classes, each with its own exit code.
enum Failure {
    Validation(anyhow::Error),
    Infeasible(String),
    Resource(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Validation(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Recover(a) => recover(a),
        Command::Align(a) => align(a),
        Command::Sweep(a) => sweep(a),
        Command::Inject(a) => inject(a),
        Command::Subsample(a) => subsample(a),
        Command::Product(a) => product(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}

/// Prints to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn load_model(m: &ModelArgs) -> anyhow::Result<SystemNet> {
    read_pnml(&m.model, m.final_marking.as_deref())
        .with_context(|| format!("reading model {}", m.model.display()))
}

fn load_log(path: &Path) -> anyhow::Result<Vec<SkTrace>> {
    Ok(read_log(path)?)
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn out_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn pool(jobs: usize) -> anyhow::Result<Parallel> {
    Parallel::new(jobs).context("starting worker threads")
}

/// Resolves the cost flags, for one trace when `--c auto`.
fn cost_function(args: &CostArgs, trace: &SkTrace) -> anyhow::Result<CostFunction> {
    let f = match args.cost {
        CostArg::Exp => CostFunction::exponential(),
        CostArg::Lin => CostFunction::linear(),
        CostArg::Log if args.c == "auto" => CostFunction::logarithmic_auto(trace),
        CostArg::Log => CostFunction::logarithmic(
            args.c.parse().map_err(|_| anyhow!("--c must be a number or `auto`, got `{}`", args.c))?,
        ),
    }
    .with_epsilon(args.epsilon);
    f.validate()?;
    Ok(f)
}

fn cost_echo(args: &CostArgs) -> serde_json::Value {
    let kind = match args.cost {
        CostArg::Exp => "exp",
        CostArg::Lin => "lin",
        CostArg::Log => "log",
    };
    json!({"cost": kind, "c": args.c, "epsilon": args.epsilon})
}

/// A certain trace carrying the labels `labels` and the event ids and
/// timestamps of `like`.
fn relabel(like: &SkTrace, labels: &[Activity]) -> SkTrace {
    let events = like
        .events()
        .iter()
        .zip(labels)
        .map(|(e, l)| SkEvent::deterministic(e.event_id.clone(), l.clone(), e.timestamp))
        .collect();
    SkTrace::new(like.case_id.clone(), events).expect("timestamps were validated on input")
}

/// Fails with the exit class of the first infeasible or resource failure.
fn check_failures(reports: &[TraceReport]) -> Outcome {
    let failed = |s: TraceStatus| reports.iter().filter(|r| r.status == s).collect::<Vec<_>>();
    let invalid = failed(TraceStatus::Invalid);
    if let Some(r) = invalid.first() {
        return Err(Failure::Validation(anyhow!(
            "case `{}`: {}",
            r.case_id,
            r.error.as_deref().unwrap_or("invalid input")
        )));
    }
    let infeasible = failed(TraceStatus::Infeasible);
    if !infeasible.is_empty() {
        return Err(Failure::Infeasible(format!(
            "{} of {} traces cannot reach the final marking (first: case `{}`)",
            infeasible.len(),
            reports.len(),
            infeasible[0].case_id
        )));
    }
    let capped = failed(TraceStatus::ResourceCap);
    if !capped.is_empty() {
        return Err(Failure::Resource(format!(
            "{} of {} traces hit a search limit (first: case `{}`)",
            capped.len(),
            reports.len(),
            capped[0].case_id
        )));
    }
    Ok(())
}

fn recover_one(
    model: &SystemNet,
    trace: &SkTrace,
    method: MethodArg,
    cost: &CostArgs,
    opts: &SearchOptions,
) -> anyhow::Result<(TraceReport, Option<SkTrace>)> {
    if method == MethodArg::Argmax {
        let labels = argmax_recover(trace);
        return Ok((TraceReport::argmax(&trace.case_id, &labels), Some(relabel(trace, &labels))));
    }
    let f = cost_function(cost, trace)?;
    let stn = build_trace_net(trace).with_context(|| format!("case `{}`", trace.case_id))?;
    let sp = build_sync_product(model, &stn);
    let start = Instant::now();
    Ok(match search_optimal_alignment(&sp, &f, opts) {
        Ok(a) => (
            TraceReport::from_alignment(&trace.case_id, &f, &a, start.elapsed()),
            Some(relabel(trace, &a.recovered)),
        ),
        Err(e) => (TraceReport::failure(&trace.case_id, &f, &e, start.elapsed()), None),
    })
}

fn recover(a: RecoverArgs) -> Outcome {
    let model = load_model(&a.model)?;
    let log = load_log(&a.log)?;
    let opts = a.search.options()?;
    // surface flag errors once, before any work
    if let Some(t) = log.first() {
        cost_function(&a.cost, t)?;
    }
    let results = pool(a.jobs)?.map(log.len(), |i| recover_one(&model, &log[i], a.method, &a.cost, &opts));
    let mut reports = Vec::new();
    let mut recovered = Vec::new();
    for r in results {
        let (report, trace) = r?;
        reports.push(report);
        recovered.extend(trace);
    }
    let doc = json!({
        "config": {
            "command": "recover",
            "model": a.model.model,
            "log": a.log,
            "method": if a.method == MethodArg::Argmax { "argmax" } else { "sktr" },
            "cost": cost_echo(&a.cost),
            "search": a.search.echo(),
        },
        "traces": reports,
    });
    let text = serde_json::to_string_pretty(&doc).expect("report serializes");
    match &a.out {
        None => emit(&format!("{text}\n"))?,
        Some(dir) => {
            out_dir(dir)?;
            write(&dir.join("report.json"), &text)?;
            write(&dir.join("recovered.skcsv"), &write_sk_csv(&recovered).context("writing CSV")?)?;
            write(&dir.join("recovered.xes"), &write_xes(&recovered).context("writing XES")?)?;
            eprintln!("recovered {} of {} traces into {}", recovered.len(), log.len(), dir.display());
        }
    }
    check_failures(&reports)
}

fn align(a: AlignArgs) -> Outcome {
    let model = load_model(&a.model)?;
    let mut log = load_log(&a.log)?;
    if let Some(case) = &a.case {
        log.retain(|t| &t.case_id == case);
        if log.is_empty() {
            return Err(anyhow!("no case `{case}` in {}", a.log.display()).into());
        }
    }
    let opts = a.search.options()?;
    let results = pool(a.jobs)?.map(log.len(), |i| -> anyhow::Result<(TraceReport, Option<AlignmentRecord>)> {
        let trace = &log[i];
        let f = cost_function(&a.cost, trace)?;
        let stn = build_trace_net(trace).with_context(|| format!("case `{}`", trace.case_id))?;
        let sp = build_sync_product(&model, &stn);
        let start = Instant::now();
        Ok(match search_optimal_alignment(&sp, &f, &opts) {
            Ok(al) => {
                let wall = start.elapsed();
                (
                    TraceReport::from_alignment(&trace.case_id, &f, &al, wall),
                    Some(AlignmentRecord::new(&trace.case_id, &model, &stn, &sp, &f, &al, wall)),
                )
            }
            Err(e) => (TraceReport::failure(&trace.case_id, &f, &e, start.elapsed()), None),
        })
    });
    let mut reports = Vec::new();
    let mut records = Vec::new();
    for r in results {
        let (report, record) = r?;
        reports.push(report);
        records.extend(record);
    }
    let text = if a.emit_alignment {
        serde_json::to_string_pretty(&records)
    } else {
        serde_json::to_string_pretty(&reports)
    }
    .expect("report serializes");
    match &a.out {
        None => emit(&format!("{text}\n"))?,
        Some(path) => write(path, &text)?,
    }
    check_failures(&reports)
}

fn parse_methods(spec: &str) -> anyhow::Result<Vec<Method>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let m = match s {
                "argmax" => Method::Argmax,
                "exp" => Method::Sktr(CostFunction::exponential()),
                "lin" => Method::Sktr(CostFunction::linear()),
                "log" => Method::Sktr(CostFunction::logarithmic(sktr_core::cost::DEFAULT_LOG_C)),
                _ => match s.strip_prefix("log:").map(str::parse::<f64>) {
                    Some(Ok(c)) => Method::Sktr(CostFunction::logarithmic(c)),
                    _ => bail!("unknown method `{s}` (expected exp, lin, log:<c> or argmax)"),
                },
            };
            if let Method::Sktr(f) = &m {
                f.validate().with_context(|| format!("method `{s}`"))?;
            }
            Ok(m)
        })
        .collect()
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    match nums.ok().as_deref() {
        Some(&[start, end, step]) => Ok(pa_grid(start, end, step)?),
        Some(&[p]) => Ok(pa_grid(p, p, 1.0)?),
        _ => bail!("--grid must be start:end:step, got `{spec}`"),
    }
}

fn sweep(a: SweepArgs) -> Outcome {
    let model = load_model(&a.model)?;
    let mut log = load_log(&a.log)?;
    if let Some(n) = a.sample {
        log = split_log(&log, n, a.noise.seed).0;
    }
    let base = a.noise.config(0.0)?;
    let methods = parse_methods(&a.methods)?;
    if methods.is_empty() {
        return Err(anyhow!("--methods is empty").into());
    }
    let grid = parse_grid(&a.grid)?;
    let opts = a.search.options()?;
    let exec = pool(a.jobs)?;
    let start = Instant::now();
    let report = run_pa_sweep(&model, &log, &base, &methods, &grid, &opts, &exec)?;
    let config = json!({
        "command": "sweep",
        "model": a.model.model,
        "log": a.log,
        "sample": a.sample,
        "grid": a.grid,
        "methods": a.methods,
        "seed": a.noise.seed,
        "search": a.search.echo(),
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    out_dir(&a.out)?;
    write(&a.out.join("sweep.csv"), &sweep_csv(&report).context("writing CSV")?)?;
    let doc = sweep_json(&report, config);
    write(&a.out.join("sweep.json"), &serde_json::to_string_pretty(&doc).expect("report serializes"))?;
    let mut table = format!("{:>6}  {:<8} {:<10} {:>9} {:>8}\n", "p_a", "method", "cost", "accuracy", "failures");
    for r in &report.rows {
        let acc = r.accuracy.map_or("-".to_string(), |x| format!("{x:.4}"));
        table += &format!("{:>6.2}  {:<8} {:<10} {:>9} {:>8}\n", r.p_a, r.method, r.cost_function, acc, r.failures);
    }
    emit(&table)?;
    Ok(())
}

fn inject(a: InjectArgs) -> Outcome {
    let log = load_log(&a.log)?;
    let cfg = a.noise.config(a.pa)?;
    let noisy = inject_noise(&log, &cfg)?;
    let truth: Vec<SkTrace> = noisy.traces.iter().zip(&noisy.truth).map(|(t, l)| relabel(t, l)).collect();
    out_dir(&a.out)?;
    write(&a.out.join("noisy.skcsv"), &write_sk_csv(&noisy.traces).context("writing CSV")?)?;
    write(&a.out.join("truth.skcsv"), &write_sk_csv(&truth).context("writing CSV")?)?;
    let config = json!({
        "command": "inject",
        "log": a.log,
        "n_t": cfg.n_t,
        "t_p": cfg.t_p,
        "p_a": cfg.p_a,
        "label_pool": match cfg.label_pool { LabelPool::All => json!("all"), LabelPool::TopK(k) => json!({"topk": k}) },
        "seed": cfg.seed,
    });
    write(&a.out.join("config.json"), &serde_json::to_string_pretty(&config).expect("config serializes"))?;
    eprintln!("wrote {} noisy traces to {}", noisy.traces.len(), a.out.display());
    Ok(())
}

fn write_any_log(dir: &Path, stem: &str, log: &[SkTrace]) -> anyhow::Result<()> {
    if log.iter().all(SkTrace::is_deterministic) {
        write(&dir.join(format!("{stem}.xes")), &write_xes(log)?)
    } else {
        write(&dir.join(format!("{stem}.skcsv")), &sklog::write_sk_csv(log)?)
    }
}

fn subsample(a: SubsampleArgs) -> Outcome {
    let log = load_log(&a.log)?;
    if a.count > log.len() {
        return Err(anyhow!("--count {} exceeds the {} traces in the log", a.count, log.len()).into());
    }
    let (sample, rest) = split_log(&log, a.count, a.seed);
    out_dir(&a.out)?;
    write_any_log(&a.out, "sample", &sample)?;
    write_any_log(&a.out, "rest", &rest)?;
    eprintln!("sampled {} of {} traces", sample.len(), log.len());
    Ok(())
}

fn product(a: ProductArgs) -> Outcome {
    let model = load_model(&a.model)?;
    let log = load_log(&a.log)?;
    let trace = match &a.case {
        Some(c) => log.iter().find(|t| &t.case_id == c).ok_or_else(|| anyhow!("no case `{c}`"))?,
        None => log.first().ok_or_else(|| anyhow!("the log is empty"))?,
    };
    let stn = build_trace_net(trace).context("building the trace net")?;
    let sp = build_sync_product(&model, &stn);
    let table = move_table_csv(&sp, &model, &stn).context("writing CSV")?;
    match &a.out {
        None => emit(&table)?,
        Some(dir) => {
            out_dir(dir)?;
            write(&dir.join("moves.csv"), &table)?;
            write(&dir.join("product.pnml"), &product_pnml(&sp, &model, &stn))?;
        }
    }
    Ok(())
}

fn synth(a: SynthArgs) -> Outcome {
    if a.min_len == 0 || a.min_len > a.max_len {
        return Err(anyhow!("need 0 < --min-len <= --max-len").into());
    }
    if !(0.0..1.0).contains(&a.repeat) {
        return Err(anyhow!("--repeat must lie in [0, 1)").into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (net, log) = match a.model {
        SynthModel::Benchmark => {
            let tree = benchmark_tree();
            let log = tree.generate_log(&mut rng, a.traces, a.min_len, a.max_len, a.repeat);
            (tree.to_net(), log)
        }
        SynthModel::RunningExample => {
            let words = [["B", "C", "E"], ["A", "D", "F"]];
            let log = (0..a.traces)
                .map(|i| SkTrace::from_labels(format!("case{i}"), words[rand::Rng::gen_range(&mut rng, 0..2)]))
                .collect();
            (running_example_model(), log)
        }
    };
    out_dir(&a.out)?;
    write(&a.out.join("model.pnml"), &serialize_pnml(&net))?;
    write(&a.out.join("log.xes"), &write_xes(&log)?)?;
    eprintln!("wrote model ({} places, {} transitions) and {} traces", net.place_count(), net.transition_count(), log.len());
    Ok(())
}
