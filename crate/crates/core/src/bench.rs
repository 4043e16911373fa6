//! Success-probability estimation, time-to-solution arithmetic, annealing
//! budget sweeps, error-scaling fits, and a single-stream baseline runner.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coproc::{run, Collector, CoprocConfig, CycleLedger, Kernel};
use crate::error::{Error, Result};
use crate::kernels::knapsack::{run_chains, KnapsackInstance};
use crate::rng::SeedPlan;

/// Standard deviation of the single-sample pi estimator:
/// `sqrt(pi * (1 - pi/4) / 4)`, about 0.4105458.
pub fn sigma_pi() -> f64 {
    let pi = std::f64::consts::PI;
    (pi * (1.0 - pi / 4.0) / 4.0).sqrt()
}

/// Time to solution at 99% confidence: `t_run * ln(0.01) / ln(1 - p_s)`.
///
/// The formula is singular at both ends: `p_s = 0` yields the infinity
/// sentinel, and `p_s >= 0.99` already meets the confidence target in a
/// single run, so the TTS is `t_run` itself.
pub fn tts_opt(t_run: f64, p_s: f64) -> Result<f64> {
    if !(t_run.is_finite() && t_run >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "run time must be non-negative, got {t_run}"
        )));
    }
    if !(0.0..=1.0).contains(&p_s) {
        return Err(Error::InvalidConfig(format!(
            "success probability must be in [0, 1], got {p_s}"
        )));
    }
    if p_s == 0.0 {
        Ok(f64::INFINITY)
    } else if p_s >= 0.99 {
        Ok(t_run)
    } else {
        Ok(t_run * (0.01f64).ln() / (1.0 - p_s).ln())
    }
}

/// Success count and probability for one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TtsEstimate {
    /// Modeled single-run time `n_s / f_clk`, seconds.
    pub t_run: f64,
    pub trials: u64,
    pub successes: u64,
    pub p_s: f64,
    /// Seconds; infinity when no trial succeeded.
    pub tts: f64,
}

/// Counts trials whose best value reached `threshold * optimum`.
///
/// The threshold is relative, so rescaling all values together with the
/// optimum leaves the verdict unchanged.
pub fn estimate_success(best_values: &[u64], optimum: u64, threshold: f64) -> Result<(u64, f64)> {
    if best_values.is_empty() {
        return Err(Error::EmptyResults);
    }
    if !(threshold.is_finite() && threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "threshold must be in (0, 1], got {threshold}"
        )));
    }
    let target = threshold * optimum as f64;
    let successes = best_values
        .iter()
        .filter(|&&best| best as f64 >= target)
        .count() as u64;
    Ok((successes, successes as f64 / best_values.len() as f64))
}

/// An annealing-budget sweep: sample budgets `n_s = 2^x * 10` for each
/// exponent, a fixed number of independent trials per point, and the
/// relative success threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub exponents: Vec<u32>,
    pub trials: u64,
    pub threshold: f64,
}

impl SweepConfig {
    pub fn new(exponents: Vec<u32>, trials: u64, threshold: f64) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidConfig("sweep needs at least one exponent".into()));
        }
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "sweep exponents must be strictly increasing".into(),
            ));
        }
        if *exponents.last().unwrap() > 50 {
            return Err(Error::InvalidConfig("sweep exponent above 50".into()));
        }
        if trials == 0 {
            return Err(Error::InvalidConfig("sweep needs at least one trial".into()));
        }
        if !(threshold.is_finite() && threshold > 0.0 && threshold <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "threshold must be in (0, 1], got {threshold}"
            )));
        }
        Ok(Self {
            exponents,
            trials,
            threshold,
        })
    }

    /// Exponents 1..=x_max with the default 100 trials at threshold 0.99.
    pub fn standard(x_max: u32) -> Result<Self> {
        Self::new((1..=x_max).collect(), 100, 0.99)
    }
}

/// One point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub exponent: u32,
    pub n_s: u64,
    pub estimate: TtsEstimate,
    /// Best value over every trial at this budget.
    pub best_value: u64,
}

/// Full sweep outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub optimum: u64,
    /// Index into `points` of the minimum finite TTS, if any trial anywhere
    /// succeeded. `None` reports "no finite TTS at this budget", not an
    /// error.
    pub min_tts_index: Option<usize>,
}

impl SweepResult {
    pub fn min_tts(&self) -> Option<&SweepPoint> {
        self.min_tts_index.map(|i| &self.points[i])
    }
}

/// Seed for one trial: a second derivation level under the sweep master so
/// every (point, trial, chain) stream is distinct and replayable.
fn trial_plan(master: &SeedPlan, point: usize, trial: u64, trials: u64, chains: u64) -> Result<SeedPlan> {
    let flat = point as u64 * trials + trial;
    let outer = SeedPlan::new(master.master_seed(), (point as u64 + 1) * trials)?;
    SeedPlan::new(outer.derive(flat)?, chains)
}

/// Runs `trials` independent multi-chain annealed runs at one sample budget
/// and scores them against the oracle optimum. `point_index` keeps seed
/// streams distinct across the points of a sweep. Returns the estimate and
/// the best value over all trials.
#[allow(clippy::too_many_arguments)]
pub fn run_point(
    instance: &KnapsackInstance,
    n_s: u64,
    trials: u64,
    threshold: f64,
    chains: u64,
    t0: f64,
    optimum: u64,
    f_clk: f64,
    plan: &SeedPlan,
    point_index: usize,
) -> Result<(TtsEstimate, u64)> {
    if trials == 0 {
        return Err(Error::InvalidConfig("need at least one trial".into()));
    }
    let bests: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let tp = trial_plan(plan, point_index, trial, trials, chains)?;
            Ok(run_chains(instance, n_s, chains, t0, &tp)?.best_value)
        })
        .collect::<Result<_>>()?;
    let (successes, p_s) = estimate_success(&bests, optimum, threshold)?;
    let t_run = n_s as f64 / f_clk;
    Ok((
        TtsEstimate {
            t_run,
            trials,
            successes,
            p_s,
            tts: tts_opt(t_run, p_s)?,
        },
        *bests.iter().max().expect("trials nonempty"),
    ))
}

/// Sweeps annealing budgets for one instance against its oracle optimum.
///
/// For each `n_s = 2^x * 10`, runs `trials` independent multi-chain
/// annealed runs, estimates the success probability against
/// `threshold * optimum`, and converts `t_run = n_s / f_clk` into a TTS.
/// Trials run concurrently; aggregation is order-independent.
pub fn sweep_tts(
    instance: &KnapsackInstance,
    cfg: &SweepConfig,
    coproc: &CoprocConfig,
    chains: u64,
    t0: f64,
    optimum: u64,
    plan: &SeedPlan,
) -> Result<SweepResult> {
    let mut points = Vec::with_capacity(cfg.exponents.len());
    for (idx, &x) in cfg.exponents.iter().enumerate() {
        let n_s = 10u64
            .checked_shl(x)
            .filter(|_| x <= 50)
            .ok_or_else(|| Error::InvalidConfig(format!("exponent {x} too large")))?;
        let (estimate, best_value) = run_point(
            instance,
            n_s,
            cfg.trials,
            cfg.threshold,
            chains,
            t0,
            optimum,
            coproc.f_clk,
            plan,
            idx,
        )?;
        points.push(SweepPoint {
            exponent: x,
            n_s,
            estimate,
            best_value,
        });
    }
    let min_tts_index = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.estimate.tts.is_finite())
        .min_by(|(_, a), (_, b)| a.estimate.tts.partial_cmp(&b.estimate.tts).unwrap())
        .map(|(i, _)| i);
    Ok(SweepResult {
        points,
        optimum,
        min_tts_index,
    })
}

/// Least-squares fit of `log(error)` against `log(n_s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub sample_counts: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

/// Fits the error-scaling exponent; for well-behaved Monte Carlo the slope
/// is close to -1/2.
pub fn fit_error_scaling(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    for &(n, e) in points {
        if !(n.is_finite() && n > 0.0) || !(e.is_finite() && e > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "scaling fit needs positive finite points, got ({n}, {e})"
            )));
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, e)| (n.ln(), e.ln())).collect();
    let m = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    Ok(ScalingFit {
        sample_counts: points.iter().map(|p| p.0).collect(),
        errors: points.iter().map(|p| p.1).collect(),
        slope,
        intercept: mean_y - slope * mean_x,
    })
}

/// Runs the kernel as a single sequential stream with wall-clock timing:
/// the one-block comparison curve. The statistical output is the same
/// collector the block-parallel path produces for a one-block plan with the
/// same seed.
pub fn baseline_run<K: Kernel>(
    kernel: &K,
    n_samples: u64,
    seed: u64,
) -> Result<(Collector, CycleLedger, f64)> {
    let config = CoprocConfig::new(1, 1.0, 0)?;
    let plan = SeedPlan::new(seed, 1)?;
    let start = Instant::now();
    let (collector, ledger) = run(&config, kernel, n_samples, &plan)?;
    Ok((collector, ledger, start.elapsed().as_secs_f64()))
}
