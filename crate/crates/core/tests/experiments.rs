//! Benchmark domains, observation noise and the experiment harness.

use std::path::PathBuf;

use active_explicable::experiments::blocksworld::{
    build_blocksworld, FeatureChoice, COMPARISON_COSTS,
};
use active_explicable::experiments::config::DomainSelector;
use active_explicable::experiments::output::render;
use active_explicable::experiments::taxi::{build_taxi, TaxiGrid};
use active_explicable::experiments::{
    corrupt_trace, run_comparison, run_convergence, run_noise_sweep, write_result, BuiltinDomain,
    ExperimentConfig, ExperimentKind, NoiseModel,
};
use active_explicable::synthesis::Objective;
use active_explicable::*;
use approx::assert_abs_diff_eq;
use tempfile::TempDir;

const CHAIN_DOMAIN: &str = r#"{
  "fluents": ["s0", "s1", "s2"],
  "actions": [
    {"id": "a", "pre": ["s0"], "add": ["s1"], "del": ["s0"], "cost": 1},
    {"id": "b", "pre": ["s1"], "add": ["s2"], "del": ["s1"], "cost": 1}
  ],
  "features": [],
  "problems": [{"initial": ["s0"], "goal": ["s2"]}]
}"#;

fn file_config(dir: &TempDir, text: &str) -> ExperimentConfig {
    let path = dir.path().join("domain.json");
    std::fs::write(&path, text).unwrap();
    ExperimentConfig::new(DomainSelector::File(path))
}

fn blocksworld_trace(domain: &Domain) -> ObservationTrace {
    let p = &domain.problems[0];
    let plan = Planner::default()
        .optimal_plan(domain.space.true_model(), p)
        .unwrap();
    ObservationTrace::execute(domain.space.true_model(), &p.initial, &plan.actions).unwrap()
}

#[test]
fn shipped_domains_match_their_generators() {
    for builtin in BuiltinDomain::ALL {
        let shipped = builtin.load().unwrap();
        let generated = builtin.generate().unwrap();
        let (a, b) = (shipped.to_file(), generated.to_file());
        assert_eq!(a.fluents, b.fluents, "{}", builtin.name());
        assert_eq!(a.true_mask, b.true_mask);
        assert_eq!(shipped.problems, generated.problems, "{}", builtin.name());
        assert_eq!(shipped.space.len(), generated.space.len());
        for (x, y) in shipped.space.models().zip(generated.space.models()) {
            assert_eq!(x.action_specs(), y.action_specs());
        }
        match (&shipped.prior, &generated.prior) {
            (Some(x), Some(y)) => {
                for (p, q) in x.weights().iter().zip(y.weights()) {
                    assert_abs_diff_eq!(p, q, epsilon = 1e-12);
                }
            }
            (None, None) => {}
            _ => panic!("prior presence differs for {}", builtin.name()),
        }
    }
}

#[test]
fn benchmark_space_sizes_and_solvability() {
    let (space, problems) = build_blocksworld(4, &FeatureChoice::Default).unwrap();
    assert_eq!(space.len(), 16);
    assert_eq!(problems.len(), 10);
    let (taxi, taxi_problems) = build_taxi(&TaxiGrid::default()).unwrap();
    assert_eq!(taxi.len(), 2);
    let planner = Planner::default();
    for (space, problems) in [(&space, &problems), (&taxi, &taxi_problems)] {
        for p in problems {
            for model in [space.base(), space.true_model()] {
                let plan = planner.optimal_plan(model, p).unwrap();
                assert!(model.validate_plan(p, &plan));
            }
        }
    }
    let comparison = BuiltinDomain::BlocksworldComparison.load().unwrap();
    let costs: Vec<Cost> = comparison
        .problems
        .iter()
        .map(|p| {
            planner
                .optimal_plan(comparison.space.true_model(), p)
                .unwrap()
                .cost
        })
        .collect();
    assert_eq!(costs, COMPARISON_COSTS.map(Cost::integer));
}

#[test]
fn zero_noise_leaves_the_trace_alone() {
    let domain = BuiltinDomain::Blocksworld.load().unwrap();
    let trace = blocksworld_trace(&domain);
    let out = corrupt_trace(
        &trace,
        domain.space.true_model(),
        NoiseModel::new(0.0, 3).unwrap(),
    )
    .unwrap();
    assert_eq!(out.trace, trace);
    assert_eq!((out.substitutions, out.noop_corruptions), (0, 0));
}

#[test]
fn forced_states_only_produce_noop_corruptions() {
    let domain = DomainFile::parse(CHAIN_DOMAIN)
        .unwrap()
        .into_domain()
        .unwrap();
    let model = domain.space.true_model();
    let trace = ObservationTrace::execute(model, &domain.problems[0].initial, &["a", "b"]).unwrap();
    let out = corrupt_trace(&trace, model, NoiseModel::new(1.0, 9).unwrap()).unwrap();
    assert_eq!(out.trace, trace);
    assert_eq!((out.substitutions, out.noop_corruptions), (0, 2));
}

#[test]
fn corrupted_blocksworld_trace_golden() {
    let domain = BuiltinDomain::Blocksworld.load().unwrap();
    let model = domain.space.true_model();
    let trace = blocksworld_trace(&domain);
    let noise = NoiseModel::new(0.4, 42).unwrap();
    let out = corrupt_trace(&trace, model, noise).unwrap();
    assert_eq!(out, corrupt_trace(&trace, model, noise).unwrap());
    assert_eq!(out.trace.states, trace.states);
    assert!(out.trace.check_applicable(model).is_ok());
    let golden = include_str!("golden/corrupted_trace.txt");
    assert_eq!(out.trace.actions.join(" "), golden.trim());
}

#[test]
fn noise_level_is_range_checked() {
    assert!(NoiseModel::new(1.5, 0).is_err());
    assert!(NoiseModel::new(-0.1, 0).is_err());
}

#[test]
fn single_model_convergence_is_flat_at_one() {
    let dir = TempDir::new().unwrap();
    let result = run_convergence(&file_config(&dir, CHAIN_DOMAIN)).unwrap();
    assert!(!result.beliefs.is_empty());
    assert!(result.beliefs.iter().all(|row| row.probability == 1.0));
}

#[test]
fn zero_alpha_keeps_every_curve_at_the_prior() {
    let mut config = ExperimentConfig::preset(ExperimentKind::Convergence, None);
    config.alpha = 0.0;
    config.problems = Some(vec![0, 1, 2]);
    let result = run_convergence(&config).unwrap();
    for row in &result.beliefs {
        assert_abs_diff_eq!(row.probability, 1.0 / 16.0, epsilon = 1e-12);
    }
}

#[test]
fn noise_sweep_at_level_zero_reproduces_the_noiseless_run() {
    let mut config = ExperimentConfig::preset(ExperimentKind::Noise, None);
    config.noise_levels = vec![0.0];
    config.seeds = vec![0, 1, 2];
    let noisy = run_noise_sweep(&config).unwrap();
    let clean = run_convergence(&config).unwrap();
    let final_true = clean.problem_end_beliefs.last().unwrap()[clean.true_mask];
    assert_eq!(noisy.noise_summary.len(), 1);
    assert_abs_diff_eq!(
        noisy.noise_summary[0].mean_final_true_belief,
        final_true,
        epsilon = 1e-12
    );
    assert!(noisy.noise.iter().all(|row| row.substitutions == 0));
}

#[test]
fn coinciding_objectives_repeat_one_row() {
    let dir = TempDir::new().unwrap();
    let result = run_comparison(&file_config(&dir, CHAIN_DOMAIN)).unwrap();
    assert_eq!(result.plans.len(), 3);
    let objectives: Vec<Objective> = result.plans.iter().map(|r| r.objective).collect();
    assert_eq!(
        objectives,
        [Objective::Op, Objective::Exp, Objective::ActiveExp]
    );
    for row in &result.plans {
        assert_eq!((row.cost.as_str(), row.actions.as_str()), ("2", "a b"));
        assert_eq!(row.active_explicability, 1.0);
    }
}

#[test]
fn comparison_table_has_four_rows_per_objective() {
    let result =
        run_comparison(&ExperimentConfig::preset(ExperimentKind::Comparison, None)).unwrap();
    assert_eq!(result.plans.len(), 12);
    let table = result.summary_table();
    for header in ["OP", "EXP", "ActiveEXP"] {
        assert!(table.contains(header), "{table}");
    }
}

#[test]
fn unsolvable_problem_aborts_with_its_index() {
    let dir = TempDir::new().unwrap();
    let text = CHAIN_DOMAIN.replace(
        r#"[{"initial": ["s0"], "goal": ["s2"]}]"#,
        r#"[{"initial": ["s0"], "goal": ["s2"]}, {"initial": ["s2"], "goal": ["s0"]}]"#,
    );
    let err = run_convergence(&file_config(&dir, &text)).unwrap_err();
    assert!(err.to_string().contains("problem 1"), "{err}");
}

#[test]
fn reruns_render_identical_bytes() {
    let mut config = ExperimentConfig::preset(ExperimentKind::Noise, None);
    config.problems = Some(vec![0, 1]);
    config.seeds = vec![3, 4];
    let a = render(&run_noise_sweep(&config).unwrap()).unwrap();
    let b = render(&run_noise_sweep(&config).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn results_land_under_hashed_names() {
    let dir = TempDir::new().unwrap();
    let mut config = ExperimentConfig::preset(ExperimentKind::Convergence, None);
    config.problems = Some(vec![0]);
    let result = run_convergence(&config).unwrap();
    let written: Vec<PathBuf> = write_result(&result, dir.path()).unwrap();
    for path in &written {
        let name = path.file_name().unwrap().to_string_lossy();
        assert!(
            name.starts_with(&format!("convergence-{}", result.config_hash)),
            "{name}"
        );
        assert!(path.exists());
    }
    assert!(written.iter().any(|p| p.extension().unwrap() == "json"));
    let again = run_convergence(&config).unwrap();
    assert_eq!(again.config_hash, result.config_hash);
    assert!(active_explicable::experiments::existing_manifest(
        dir.path(),
        ExperimentKind::Convergence,
        &result.config_hash
    )
    .is_some());
}

#[test]
fn config_hash_tracks_parameters() {
    let a = ExperimentConfig::preset(ExperimentKind::Convergence, None);
    let mut b = a.clone();
    b.gamma = 0.5;
    assert_ne!(a.hash("x").unwrap(), b.hash("x").unwrap());
    assert_ne!(a.hash("x").unwrap(), a.hash("y").unwrap());
    assert_eq!(a.hash("x").unwrap(), a.clone().hash("x").unwrap());
}

#[test]
fn config_files_reject_unknown_keys_and_bad_values() {
    assert!(ExperimentConfig::parse(r#"{"domain": {"builtin": "taxi"}, "bogus": 1}"#).is_err());
    let config =
        ExperimentConfig::parse(r#"{"domain": {"builtin": "taxi"}, "alpha": 2.0}"#).unwrap();
    assert!(config.validate().is_err());
}
