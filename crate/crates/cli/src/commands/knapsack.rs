use std::path::Path;

use pcoproc::bench::{run_point, sweep_tts, SweepConfig};
use pcoproc::coproc::CoprocConfig;
use pcoproc::kernels::knapsack::{run_chains, KnapsackInstance};
use pcoproc::oracles::{knapsack_dp, knapsack_exhaustive};
use pcoproc::rng::SeedPlan;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::manifest::{emit, Manifest};
use crate::{CliError, KnapsackArgs};

#[derive(Deserialize)]
struct InstanceFile {
    n: usize,
    values: Vec<u32>,
    weights: Vec<u32>,
    capacity: u64,
}

fn load_instance(path: &Path) -> Result<KnapsackInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("reading {}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if file.n != file.values.len() {
        return Err(CliError::Usage(format!(
            "{}: n = {} but {} values",
            path.display(),
            file.n,
            file.values.len()
        )));
    }
    Ok(KnapsackInstance::new(file.values, file.weights, file.capacity)?)
}

/// Exact optimum: DP when the table fits, else brute force when n allows.
fn oracle_optimum(instance: &KnapsackInstance) -> Result<(u64, &'static str), CliError> {
    match knapsack_dp(instance) {
        Ok(opt) => Ok((opt, "dp")),
        Err(pcoproc::Error::DpTableTooLarge(_)) => match knapsack_exhaustive(instance) {
            Ok(opt) => Ok((opt, "exhaustive")),
            Err(_) => Err(CliError::Usage(
                "no oracle can certify this instance (DP table too large and n > 20); \
                 success analysis refused"
                    .into(),
            )),
        },
        Err(e) => Err(e.into()),
    }
}

fn config_string(config: &[bool]) -> String {
    config.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn run(args: KnapsackArgs) -> Result<(), CliError> {
    let instance = match (&args.instance, args.n) {
        (Some(path), _) => load_instance(path)?,
        (None, Some(n)) => {
            if n < 2 {
                return Err(CliError::Usage("--n must be at least 2".into()));
            }
            KnapsackInstance::generate(n, args.seed)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "either --n or --instance is required".into(),
            ))
        }
    };
    let (optimum, oracle) = oracle_optimum(&instance)?;
    let coproc = CoprocConfig::new(args.chains, args.fclk, 0)?;
    let plan = SeedPlan::new(args.seed, args.chains)?;
    let manifest = Manifest::start(
        "knapsack",
        args.seed,
        json!({
            "n": instance.len(),
            "instance": args.instance.as_ref().map(|p| p.display().to_string()),
            "capacity": instance.capacity(),
            "trials": args.trials,
            "chains": args.chains,
            "sweep": args.sweep,
            "x_min": args.x_min,
            "x_max": args.x_max,
            "samples": args.samples,
            "t0": args.t0,
            "threshold": args.threshold,
            "fclk": args.fclk,
            "oracle": oracle,
            "optimum": optimum,
        }),
    );

    let mut results: Vec<Value> = Vec::new();
    let (min_tts, min_exponent, best_overall);
    if args.sweep {
        if args.x_min < 1 || args.x_min > args.x_max {
            return Err(CliError::Usage(format!(
                "sweep needs 1 <= x_min <= x_max, got {}..={}",
                args.x_min, args.x_max
            )));
        }
        let cfg = SweepConfig::new(
            (args.x_min..=args.x_max).collect(),
            args.trials,
            args.threshold,
        )?;
        let sweep = sweep_tts(
            &instance,
            &cfg,
            &coproc,
            args.chains,
            args.t0,
            optimum,
            &plan,
        )?;
        for point in &sweep.points {
            results.push(json!({
                "manifest": manifest.digest,
                "kind": "knapsack_point",
                "exponent": point.exponent,
                "n_s": point.n_s,
                "trials": point.estimate.trials,
                "successes": point.estimate.successes,
                "p_s": point.estimate.p_s,
                "t_run_seconds": point.estimate.t_run,
                "tts_seconds": point.estimate.tts,
                "best_value": point.best_value,
            }));
        }
        let min = sweep.min_tts();
        min_tts = min.map(|p| p.estimate.tts);
        min_exponent = min.map(|p| p.exponent);
        best_overall = sweep.points.iter().map(|p| p.best_value).max().unwrap_or(0);
    } else {
        let (estimate, best) = run_point(
            &instance,
            args.samples,
            args.trials,
            args.threshold,
            args.chains,
            args.t0,
            optimum,
            args.fclk,
            &plan,
            0,
        )?;
        results.push(json!({
            "manifest": manifest.digest,
            "kind": "knapsack_point",
            "exponent": null,
            "n_s": args.samples,
            "trials": estimate.trials,
            "successes": estimate.successes,
            "p_s": estimate.p_s,
            "t_run_seconds": estimate.t_run,
            "tts_seconds": estimate.tts,
            "best_value": best,
        }));
        min_tts = estimate.tts.is_finite().then_some(estimate.tts);
        min_exponent = None;
        best_overall = best;
    }

    // A representative best configuration, replayed from the first trial
    // plan at the largest budget.
    let best_n_s = if args.sweep {
        10u64 << args.x_max
    } else {
        args.samples
    };
    let replay_plan = SeedPlan::new(args.seed, args.chains)?;
    let best_run = run_chains(&instance, best_n_s, args.chains, args.t0, &replay_plan)?;
    results.push(json!({
        "manifest": manifest.digest,
        "kind": "knapsack_summary",
        "n": instance.len(),
        "capacity": instance.capacity(),
        "oracle": oracle,
        "optimum": optimum,
        "threshold": args.threshold,
        "min_tts_seconds": min_tts,
        "min_tts_exponent": min_exponent,
        "best_value_overall": best_overall,
        "example_best_value": best_run.best_value,
        "example_best_config": config_string(&best_run.best_config),
    }));
    emit(&manifest.into_document(results), args.out.as_deref())
}
