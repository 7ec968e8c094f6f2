//! The `actexp` command line.
//!
//! Exit codes: 0 success, 1 unsolvable problem or failed validation, 2 bad
//! usage or input. Domains are builtin names (`blocksworld`,
//! `blocksworld-comparison`, `taxi`) or paths to JSON domain files.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cost::Cost;
use crate::domain::DomainModel;
use crate::error::{Error, Result};
use crate::experiments::validation::{run_validation, validate_domain, ValidationReport};
use crate::experiments::{
    existing_manifest, run_experiment, write_result, DomainSelector, ExperimentConfig,
    ExperimentKind,
};
use crate::explicability::{InferenceParams, ObservationTrace};
use crate::format::{Domain, DomainFile, SCHEMA_VERSION};
use crate::planner::Plan;
use crate::synthesis::{Objective, SynthesisConfig, SynthesisResult, Synthesizer};

/// Default output directory for `experiment` when `--out` is not given.
pub const OUT_DIR_ENV: &str = "ACTEXP_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "results";

#[derive(Debug, Parser)]
#[command(name = "actexp", version, about = "Active explicable planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Select a plan under one objective and print it as JSON.
    Plan(PlanArgs),
    /// Score a given plan by active and static explicability.
    Score(ScoreArgs),
    /// Write the observer's belief after each step of a plan as CSV.
    BeliefTrace(TraceArgs),
    /// Run an experiment and write its CSV tables and JSON manifest.
    Experiment(ExperimentArgs),
    /// Cross-check the forward belief filter against the exact oracle.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Inference and selection parameters. Unset flags keep the library
/// defaults, or the experiment preset for `experiment`.
#[derive(Debug, Clone, Default, Args)]
struct ParamArgs {
    /// Candidate cost bound factor, >= 1 (decimal or p/q) [default: 1.1]
    #[arg(long)]
    zeta: Option<Cost>,
    /// Boltzmann rationality, >= 0 [default: 1.0]
    #[arg(long)]
    beta: Option<f64>,
    /// Belief transition weight in [0, 1] [default: 0.5]
    #[arg(long)]
    alpha: Option<f64>,
    /// Cost weight, >= 0 [default: 0.05]
    #[arg(long)]
    gamma: Option<f64>,
    /// Candidate plans kept per set [default: 1000]
    #[arg(long)]
    max_plans: Option<usize>,
}

impl ParamArgs {
    fn apply(&self, mut config: SynthesisConfig) -> SynthesisConfig {
        let p = &mut config.params;
        p.zeta = self.zeta.unwrap_or(p.zeta);
        p.beta = self.beta.unwrap_or(p.beta);
        p.alpha = self.alpha.unwrap_or(p.alpha);
        p.max_plans = self.max_plans.unwrap_or(p.max_plans);
        config.gamma = self.gamma.unwrap_or(config.gamma);
        config
    }
}

#[derive(Debug, Args)]
struct DomainArgs {
    /// Builtin domain name or domain file path
    domain: String,
    /// Problem index within the domain
    #[arg(long, default_value_t = 0)]
    problem: usize,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[command(flatten)]
    target: DomainArgs,
    /// op, exp or activeexp
    #[arg(long, default_value = "activeexp", value_parser = parse_objective)]
    objective: Objective,
    #[command(flatten)]
    params: ParamArgs,
    /// Also list the true model's candidate plans
    #[arg(long)]
    dump_plans: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[command(flatten)]
    target: DomainArgs,
    /// Space- or comma-separated action ids
    #[arg(long, allow_hyphen_values = true)]
    plan: String,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[command(flatten)]
    target: DomainArgs,
    /// Space- or comma-separated action ids; empty for the prior alone
    #[arg(long, allow_hyphen_values = true, conflicts_with = "plan_file")]
    plan: Option<String>,
    /// File with one action id per line
    #[arg(long)]
    plan_file: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    /// CSV destination; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// convergence, noise or comparison
    #[arg(value_parser = parse_kind)]
    kind: ExperimentKind,
    /// JSON experiment config; the shipped preset when absent
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin domain name or domain file path (overrides the config)
    #[arg(long)]
    domain: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
    /// Comma-separated noise levels in [0, 1]
    #[arg(long, visible_alias = "levels", value_delimiter = ',')]
    noise_levels: Option<Vec<f64>>,
    /// Number of seeds; runs seeds 0..N
    #[arg(long)]
    seeds: Option<u64>,
    /// Carry the belief across problems
    #[arg(long)]
    carry_belief: Option<bool>,
    /// op, exp or activeexp
    #[arg(long, value_parser = parse_objective)]
    objective: Option<Objective>,
    /// Output directory [default: $ACTEXP_OUT_DIR, else ./results]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recompute even if results for this config already exist
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Check this domain's problems instead of random instances
    domain: Option<String>,
    /// Random instances to check
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: ParamArgs,
}

fn parse_objective(s: &str) -> std::result::Result<Objective, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<ExperimentKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_unsolvable() {
                1
            } else {
                2
            }
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Plan(a) => cmd_plan(a, stdout),
        Command::Score(a) => cmd_score(a, stdout),
        Command::BeliefTrace(a) => cmd_belief_trace(a, stdout),
        Command::Experiment(a) => cmd_experiment(a, stdout, stderr),
        Command::Validate(a) => cmd_validate(a, stdout),
    }
}

fn load_domain(spec: &str) -> Result<Domain> {
    let selector: DomainSelector = spec.parse()?;
    let text = selector.source()?;
    DomainFile::parse(&text)
        .and_then(DomainFile::into_domain)
        .map_err(|e| match e {
            Error::Format(msg) => Error::Format(format!("{spec}: {msg}")),
            other => other,
        })
}

/// Writes to `out` if given, else to standard output. Files are written in
/// one piece, so failures leave no partial output.
fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn split_actions(text: &str) -> Vec<String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Executes `actions` under `model`, naming the first bad step.
fn checked_trace(
    model: &DomainModel,
    initial: &crate::domain::State,
    actions: &[String],
) -> Result<ObservationTrace> {
    let mut state = initial.clone();
    for (t, action) in actions.iter().enumerate() {
        state = model
            .apply_action(&state, action)
            .map_err(|e| Error::InvalidParameter(format!("step {}: {e}", t + 1)))?;
    }
    ObservationTrace::execute(model, initial, actions)
}

#[derive(Serialize)]
struct PlanOutput<'a> {
    schema_version: u32,
    problem: usize,
    #[serde(flatten)]
    result: &'a SynthesisResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidates: Option<Vec<Plan>>,
}

fn cmd_plan(a: PlanArgs, stdout: &mut dyn Write) -> Result<i32> {
    let config = a
        .params
        .apply(SynthesisConfig::default())
        .with_objective(a.objective);
    config.validate()?;
    let domain = load_domain(&a.target.domain)?;
    let problem = domain.problem(a.target.problem)?;
    let syn = Synthesizer::new(&domain.space, problem, config)?;
    let result = syn.select(a.objective, &domain.prior_or_uniform())?;
    let text = match a.format {
        Format::Json => {
            let candidates = if a.dump_plans {
                Some(syn.candidates()?.plans)
            } else {
                None
            };
            let out = PlanOutput {
                schema_version: SCHEMA_VERSION,
                problem: a.target.problem,
                result: &result,
                candidates,
            };
            serde_json::to_string_pretty(&out)? + "\n"
        }
        Format::Text => {
            let mut text = format!("objective {}\ncost {}\n", result.objective, result.cost);
            if let Some(score) = result.score {
                text += &format!("score {score}\n");
            }
            for (i, action) in result.plan.actions.iter().enumerate() {
                text += &format!("{:>3}. {action}\n", i + 1);
            }
            if a.dump_plans {
                text += "candidates\n";
                for plan in syn.candidates()?.plans {
                    text += &format!("  {} [{}]\n", plan.actions.join(" "), plan.cost);
                }
            }
            text
        }
    };
    emit(&a.out, stdout, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct ScoreOutput {
    schema_version: u32,
    problem: usize,
    actions: Vec<String>,
    cost: Cost,
    reaches_goal: bool,
    active_explicability: f64,
    step_scores: Vec<f64>,
    static_explicability: f64,
    truncated: bool,
}

fn cmd_score(a: ScoreArgs, stdout: &mut dyn Write) -> Result<i32> {
    let params = a.params.apply(SynthesisConfig::default());
    params.validate()?;
    let domain = load_domain(&a.target.domain)?;
    let problem = domain.problem(a.target.problem)?;
    let truth = domain.space.true_model();
    let actions = split_actions(&a.plan);
    let trace = checked_trace(truth, &problem.initial, &actions)?;
    let observer =
        crate::explicability::Observer::new(&domain.space, problem.goal.clone(), params.params)?;
    let prior = domain.prior_or_uniform();
    let active = observer.active_explicability(&actions, &problem.initial, &prior)?;
    let stat = observer.static_explicability(&actions, &problem.initial, &prior)?;
    let out = ScoreOutput {
        schema_version: SCHEMA_VERSION,
        problem: a.target.problem,
        cost: truth.plan_cost(&actions)?,
        reaches_goal: problem.is_goal(trace.states.last().expect("trace has an initial state")),
        actions,
        active_explicability: active.score,
        step_scores: active.step_scores,
        static_explicability: stat.score,
        truncated: active.truncated || stat.truncated,
    };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&out)? + "\n",
        Format::Text => format!(
            "cost {}\nreaches_goal {}\nactive_explicability {}\nstatic_explicability {}\n",
            out.cost, out.reaches_goal, out.active_explicability, out.static_explicability
        ),
    };
    emit(&a.out, stdout, &text)?;
    Ok(0)
}

/// Header of the belief-trace CSV; `step` 0 is the prior.
pub const BELIEF_TRACE_HEADER: [&str; 3] = ["step", "model_mask", "probability"];

fn cmd_belief_trace(a: TraceArgs, stdout: &mut dyn Write) -> Result<i32> {
    let params: InferenceParams = a.params.apply(SynthesisConfig::default()).params;
    params.validate()?;
    let domain = load_domain(&a.target.domain)?;
    let problem = domain.problem(a.target.problem)?;
    let actions = match (&a.plan, &a.plan_file) {
        (_, Some(path)) => split_actions(&std::fs::read_to_string(path)?),
        (Some(text), None) => split_actions(text),
        (None, None) => return Err(Error::InvalidParameter("give --plan or --plan-file".into())),
    };
    let trace = checked_trace(domain.space.true_model(), &problem.initial, &actions)?;
    let observer =
        crate::explicability::Observer::new(&domain.space, problem.goal.clone(), params)?;
    let beliefs = observer.trace(&domain.prior_or_uniform(), &trace)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(BELIEF_TRACE_HEADER)?;
    for (step, belief) in beliefs.beliefs.iter().enumerate() {
        for (mask, p) in belief.weights().iter().enumerate() {
            writer.write_record([step.to_string(), mask.to_string(), p.to_string()])?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    emit(
        &a.out,
        stdout,
        &String::from_utf8(bytes).expect("csv output is UTF-8"),
    )?;
    Ok(0)
}

fn experiment_config(a: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut config = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidParameter(format!("cannot read {}: {e}", path.display()))
            })?;
            ExperimentConfig::parse(&text)
                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
        }
        None => {
            let builtin = match &a.domain {
                Some(d) => match d.parse::<DomainSelector>()? {
                    DomainSelector::Builtin(b) => Some(b),
                    DomainSelector::File(_) => None,
                },
                None => None,
            };
            ExperimentConfig::preset(a.kind, builtin)
        }
    };
    if let Some(d) = &a.domain {
        config.domain = d.parse()?;
    }
    let synthesis = a.params.apply(config.synthesis());
    config.zeta = synthesis.params.zeta;
    config.beta = synthesis.params.beta;
    config.alpha = synthesis.params.alpha;
    config.max_plans = synthesis.params.max_plans;
    config.gamma = synthesis.gamma;
    if let Some(levels) = &a.noise_levels {
        config.noise_levels = levels.clone();
    }
    if let Some(n) = a.seeds {
        config.seeds = (0..n).collect();
    }
    if let Some(carry) = a.carry_belief {
        config.carry_belief = carry;
    }
    if let Some(objective) = a.objective {
        config.objective = objective;
    }
    config.validate()?;
    Ok(config)
}

fn out_dir(explicit: &Option<PathBuf>) -> PathBuf {
    explicit
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn cmd_experiment(
    a: ExperimentArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let config = experiment_config(&a)?;
    let dir = out_dir(&a.out);
    let hash = config.hash(&config.domain.source()?)?;
    if !a.force {
        if let Some(manifest) = existing_manifest(&dir, a.kind, &hash) {
            writeln!(
                stderr,
                "reused results for config {hash} in {}",
                dir.display()
            )?;
            write!(stdout, "{}", manifest.summary)?;
            return Ok(0);
        }
    }
    let result = run_experiment(a.kind, &config)?;
    let files = write_result(&result, &dir)?;
    for f in &files {
        writeln!(stderr, "wrote {}", f.display())?;
    }
    write!(stdout, "{}", result.summary_table())?;
    Ok(0)
}

fn print_report(stdout: &mut dyn Write, what: &str, report: &ValidationReport) -> Result<i32> {
    writeln!(
        stdout,
        "{what}: {} checks, max |forward - exact| = {:e}, {} over tolerance {:e}",
        report.instances, report.max_error, report.failures, report.tolerance
    )?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_validate(a: ValidateArgs, stdout: &mut dyn Write) -> Result<i32> {
    match &a.domain {
        None => {
            let report = run_validation(a.instances, a.seed)?;
            print_report(stdout, "random instances", &report)
        }
        Some(spec) => {
            let params = a.params.apply(SynthesisConfig::default()).params;
            params.validate()?;
            let domain = load_domain(spec)?;
            let report = validate_domain(
                &domain.space,
                &domain.problems,
                &domain.prior_or_uniform(),
                &params,
            )?;
            print_report(stdout, spec, &report)
        }
    }
}
