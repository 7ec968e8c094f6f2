//! Convergence, noise and comparison runs.

use serde::{Deserialize, Serialize};

use crate::domain::PlanningProblem;
use crate::error::{Error, Result};
use crate::explicability::{Belief, ObservationTrace};
use crate::format::Domain;
use crate::planner::Plan;
use crate::synthesis::{Objective, Synthesizer};

use super::config::{BuiltinDomain, ExperimentConfig, ExperimentKind};
use super::noise::{cell_seed, corrupt_trace, NoiseModel};
use super::taxi;

/// Belief over every model after each observed step of a problem. Step 0
/// is the belief the problem started from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefRow {
    pub problem: usize,
    pub step: usize,
    pub model_mask: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRow {
    pub problem: usize,
    pub objective: Objective,
    pub cost: String,
    pub active_explicability: f64,
    pub static_explicability: f64,
    /// `Σ reward − Σ travel` under the true model; Taxi only.
    pub payoff: Option<String>,
    pub actions: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub level: f64,
    pub seed: u64,
    pub final_true_belief: f64,
    pub final_argmax: usize,
    pub substitutions: usize,
    pub noop_corruptions: usize,
}

/// Mean belief in the true model across seeds, per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseCurveRow {
    pub level: f64,
    pub problem: usize,
    pub step: usize,
    pub mean_true_belief: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSummaryRow {
    pub level: f64,
    pub seeds: usize,
    pub mean_final_true_belief: f64,
    /// Fraction of seeds whose final belief peaks at the true model.
    pub argmax_true_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub kind: ExperimentKind,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub models: usize,
    pub true_mask: usize,
    /// Domain problem indices in run order.
    pub problems: Vec<usize>,
    pub beliefs: Vec<BeliefRow>,
    pub plans: Vec<PlanRow>,
    pub noise: Vec<NoiseRow>,
    pub noise_curves: Vec<NoiseCurveRow>,
    pub noise_summary: Vec<NoiseSummaryRow>,
    /// Belief at the end of each problem (convergence runs).
    pub problem_end_beliefs: Vec<Vec<f64>>,
    /// Some candidate set hit `max_plans`.
    pub truncated: bool,
    pub zero_evidence_steps: usize,
}

struct Prepared {
    config: ExperimentConfig,
    domain: Domain,
    hash: String,
    problems: Vec<(usize, PlanningProblem)>,
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    config.validate()?;
    let source = config.domain.source()?;
    let domain = crate::format::DomainFile::parse(&source)?.into_domain()?;
    let indices = match &config.problems {
        Some(list) => list.clone(),
        None => (0..domain.problems.len()).collect(),
    };
    if indices.is_empty() {
        return Err(Error::InvalidParameter("the domain has no problems".into()));
    }
    let problems = indices
        .iter()
        .map(|&i| domain.problem(i).cloned().map(|p| (i, p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared {
        config: config.clone(),
        hash: config.hash(&source)?,
        domain,
        problems,
    })
}

impl Prepared {
    fn result(&self, kind: ExperimentKind) -> ExperimentResult {
        ExperimentResult {
            kind,
            config: self.config.clone(),
            config_hash: self.hash.clone(),
            models: self.domain.space.len(),
            true_mask: self.domain.space.true_mask(),
            problems: self.problems.iter().map(|(i, _)| *i).collect(),
            beliefs: Vec::new(),
            plans: Vec::new(),
            noise: Vec::new(),
            noise_curves: Vec::new(),
            noise_summary: Vec::new(),
            problem_end_beliefs: Vec::new(),
            truncated: false,
            zero_evidence_steps: 0,
        }
    }

    fn synthesizers(&self) -> Result<Vec<Synthesizer<'_>>> {
        self.problems
            .iter()
            .map(|(i, p)| {
                Synthesizer::new(&self.domain.space, p, self.config.synthesis())
                    .map_err(|e| Error::in_problem(*i, e))
            })
            .collect()
    }

    fn payoff(&self, plan: &Plan) -> Result<Option<String>> {
        if self.config.domain.builtin() != Some(BuiltinDomain::Taxi) {
            return Ok(None);
        }
        let heavy = self.domain.space.true_mask() == taxi::HEAVY;
        Ok(Some(
            taxi::TaxiGrid::default().payoff(plan, heavy)?.to_string(),
        ))
    }

    fn plan_row(
        &self,
        syn: &Synthesizer<'_>,
        index: usize,
        objective: Objective,
        plan: &Plan,
        belief: &Belief,
    ) -> Result<PlanRow> {
        let initial = &self
            .problems
            .iter()
            .find(|(i, _)| *i == index)
            .expect("known problem")
            .1
            .initial;
        let observer = syn.observer();
        Ok(PlanRow {
            problem: index,
            objective,
            cost: plan.cost.to_string(),
            active_explicability: observer
                .active_explicability(&plan.actions, initial, belief)?
                .score,
            static_explicability: observer
                .static_explicability(&plan.actions, initial, belief)?
                .score,
            payoff: self.payoff(plan)?,
            actions: plan.actions.join(" "),
        })
    }
}

/// Runs the configured kind.
pub fn run_experiment(kind: ExperimentKind, config: &ExperimentConfig) -> Result<ExperimentResult> {
    match kind {
        ExperimentKind::Convergence => run_convergence(config),
        ExperimentKind::Noise => run_noise_sweep(config),
        ExperimentKind::Comparison => run_comparison(config),
    }
}

/// The robot's plans and the noiseless belief evolution over the problem
/// sequence.
fn noiseless(
    prep: &Prepared,
    syns: &[Synthesizer<'_>],
    result: &mut ExperimentResult,
) -> Result<Vec<ObservationTrace>> {
    let prior = prep.domain.prior_or_uniform();
    let truth = prep.domain.space.true_model();
    let mut belief = prior.clone();
    let mut traces = Vec::with_capacity(syns.len());
    for ((index, problem), syn) in prep.problems.iter().zip(syns) {
        let index = *index;
        let in_problem = |e| Error::in_problem(index, e);
        let chosen = syn
            .select(prep.config.objective, &belief)
            .map_err(in_problem)?;
        let trace = ObservationTrace::execute(truth, &problem.initial, &chosen.plan.actions)
            .map_err(in_problem)?;
        let beliefs = syn.observer().trace(&belief, &trace).map_err(in_problem)?;
        result
            .plans
            .push(prep.plan_row(syn, index, chosen.objective, &chosen.plan, &belief)?);
        for (step, b) in beliefs.beliefs.iter().enumerate() {
            result.beliefs.extend(b.weights().iter().enumerate().map(
                |(model_mask, &probability)| BeliefRow {
                    problem: index,
                    step,
                    model_mask,
                    probability,
                },
            ));
        }
        result.truncated |=
            chosen.candidates_truncated || chosen.scores_truncated || beliefs.truncated();
        result.zero_evidence_steps += beliefs.zero_evidence_steps();
        result
            .problem_end_beliefs
            .push(beliefs.last().weights().to_vec());
        belief = if prep.config.carry_belief {
            beliefs.last().clone()
        } else {
            prior.clone()
        };
        traces.push(trace);
    }
    Ok(traces)
}

/// Executes the selected plan of each problem under the true model and
/// folds the observer's belief along it, carrying it across problems when
/// `carry_belief` is set.
pub fn run_convergence(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let prep = prepare(config)?;
    let syns = prep.synthesizers()?;
    let mut result = prep.result(ExperimentKind::Convergence);
    noiseless(&prep, &syns, &mut result)?;
    Ok(result)
}

/// Replays the noiseless plans with corrupted observations for every
/// (noise level, seed) pair.
pub fn run_noise_sweep(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let prep = prepare(config)?;
    let syns = prep.synthesizers()?;
    let mut result = prep.result(ExperimentKind::Noise);
    let traces = noiseless(&prep, &syns, &mut result)?;
    let prior = prep.domain.prior_or_uniform();
    let truth_mask = prep.domain.space.true_mask();
    let truth = prep.domain.space.true_model();
    for &level in &config.noise_levels {
        let steps: usize = traces.iter().map(|t| t.len() + 1).sum();
        let mut curve = vec![0.0; steps];
        let mut finals = Vec::with_capacity(config.seeds.len());
        for &seed in &config.seeds {
            let mut belief = prior.clone();
            let (mut substitutions, mut noop_corruptions, mut at) = (0, 0, 0);
            for (((index, _), syn), trace) in prep.problems.iter().zip(&syns).zip(&traces) {
                let in_problem = |e| Error::in_problem(*index, e);
                let noise = NoiseModel::new(level, cell_seed(seed, *index))?;
                let corrupted = corrupt_trace(trace, truth, noise).map_err(in_problem)?;
                substitutions += corrupted.substitutions;
                noop_corruptions += corrupted.noop_corruptions;
                let beliefs = syn
                    .observer()
                    .trace(&belief, &corrupted.trace)
                    .map_err(in_problem)?;
                for b in &beliefs.beliefs {
                    curve[at] += b.get(truth_mask);
                    at += 1;
                }
                result.truncated |= beliefs.truncated();
                belief = if config.carry_belief {
                    beliefs.last().clone()
                } else {
                    prior.clone()
                };
            }
            finals.push((belief.get(truth_mask), belief.argmax() == truth_mask));
            result.noise.push(NoiseRow {
                level,
                seed,
                final_true_belief: belief.get(truth_mask),
                final_argmax: belief.argmax(),
                substitutions,
                noop_corruptions,
            });
        }
        let n = config.seeds.len() as f64;
        let mut at = 0;
        for ((index, _), trace) in prep.problems.iter().zip(&traces) {
            for step in 0..=trace.len() {
                result.noise_curves.push(NoiseCurveRow {
                    level,
                    problem: *index,
                    step,
                    mean_true_belief: curve[at] / n,
                });
                at += 1;
            }
        }
        result.noise_summary.push(NoiseSummaryRow {
            level,
            seeds: config.seeds.len(),
            mean_final_true_belief: finals.iter().map(|f| f.0).sum::<f64>() / n,
            argmax_true_fraction: finals.iter().filter(|f| f.1).count() as f64 / n,
        });
    }
    Ok(result)
}

/// OP, EXP and ActiveEXP plans for each problem, each scored by active and
/// static explicability from the domain prior.
pub fn run_comparison(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let prep = prepare(config)?;
    let syns = prep.synthesizers()?;
    let mut result = prep.result(ExperimentKind::Comparison);
    let prior = prep.domain.prior_or_uniform();
    for ((index, _), syn) in prep.problems.iter().zip(&syns) {
        for objective in Objective::ALL {
            let chosen = syn
                .select(objective, &prior)
                .map_err(|e| Error::in_problem(*index, e))?;
            result.truncated |= chosen.candidates_truncated || chosen.scores_truncated;
            result
                .plans
                .push(prep.plan_row(syn, *index, objective, &chosen.plan, &prior)?);
        }
    }
    Ok(result)
}

impl ExperimentResult {
    /// Plain-text summary printed by the CLI.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        match self.kind {
            ExperimentKind::Convergence => {
                let bits = self.models.trailing_zeros() as usize;
                out.push_str("problem  cost  E_A     b(M_R)  argmax\n");
                for (row, end) in self.plans.iter().zip(&self.problem_end_beliefs) {
                    let argmax = Belief::from_weights(end.clone())
                        .map(|b| b.argmax())
                        .unwrap_or(0);
                    out.push_str(&format!(
                        "{:<8} {:<5} {:<7.4} {:<7.4} {:0bits$b}\n",
                        row.problem,
                        row.cost,
                        row.active_explicability,
                        end[self.true_mask],
                        argmax,
                    ));
                }
            }
            ExperimentKind::Noise => {
                out.push_str("level  seeds  mean b(M_R)  argmax=M_R\n");
                for row in &self.noise_summary {
                    out.push_str(&format!(
                        "{:<6} {:<6} {:<12.4} {:.2}\n",
                        row.level, row.seeds, row.mean_final_true_belief, row.argmax_true_fraction
                    ));
                }
            }
            ExperimentKind::Comparison => {
                let payoff = self.plans.iter().any(|r| r.payoff.is_some());
                let names = ["OP", "EXP", "ActiveEXP"];
                out.push_str("problem ");
                for name in &names {
                    out.push_str(&format!(
                        " {:<14} {:<13}",
                        format!("{name} cost"),
                        format!("{name} E_A")
                    ));
                }
                if payoff {
                    for name in &names {
                        out.push_str(&format!(" {:<13}", format!("{name} pay")));
                    }
                }
                trim_line_end(&mut out);
                out.push('\n');
                for rows in self.plans.chunks(3) {
                    out.push_str(&format!("{:<8}", rows[0].problem));
                    for r in rows {
                        out.push_str(&format!(" {:<14} {:<13.4}", r.cost, r.active_explicability));
                    }
                    if payoff {
                        for r in rows {
                            out.push_str(&format!(" {:<13}", r.payoff.as_deref().unwrap_or("-")));
                        }
                    }
                    trim_line_end(&mut out);
                    out.push('\n');
                }
            }
        }
        if self.truncated {
            out.push_str("warning: some candidate sets were truncated at max_plans\n");
        }
        out
    }
}

fn trim_line_end(out: &mut String) {
    out.truncate(out.trim_end_matches(' ').len());
}
