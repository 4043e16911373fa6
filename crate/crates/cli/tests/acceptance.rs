//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured numbers (visible with `--nocapture`).
//!
//! Run with `cargo test -p pcoproc-cli --test acceptance`.

use std::collections::HashMap;
use std::process::Command;

use rayon::prelude::*;
use serde_json::Value;

use pcoproc::bench::{baseline_run, fit_error_scaling, sigma_pi, tts_opt};
use pcoproc::coproc::{self, Collector, CoprocConfig, HistogramCollector};
use pcoproc::kernels::bayes::{BayesKernel, BayesNetwork};
use pcoproc::kernels::bootstrap::{bootstrap_statistic, BootstrapKernel, BootstrapSpec};
use pcoproc::kernels::knapsack::{run_chains, KnapsackInstance};
use pcoproc::kernels::pi::{pi_estimate, point_inside, PiKernel};
use pcoproc::oracles::{
    exact_bootstrap, knapsack_dp, knapsack_exhaustive, pi_lattice_count, ExactBayes,
};
use pcoproc::rng::{LfsrState, RngBlock, SeedPlan};

/// Two-group fixture shared with the golden files: six integer-valued rows
/// so every resample mean is exactly representable.
const FIXTURE_A: [f64; 3] = [120.0, 113.0, 128.0];
const FIXTURE_B: [f64; 3] = [105.0, 116.0, 100.0];

const PI: f64 = std::f64::consts::PI;

fn pi_run_estimate(samples: u64, seed: u64) -> f64 {
    let config = CoprocConfig::new(2800, 1.25e8, 0).unwrap();
    let plan = SeedPlan::new(seed, 2800).unwrap();
    let (collector, _) = coproc::run(&config, &PiKernel::default(), samples, &plan).unwrap();
    let Collector::Counter(c) = collector else {
        panic!("pi kernel fills a counter")
    };
    pi_estimate(c.hits, c.total).unwrap()
}

#[test]
fn c1_pi_accuracy_and_error_scaling() {
    // Headline accuracy at one million samples. The bound 4 sigma / sqrt(N)
    // with sigma = sqrt(p(1-p)), p = pi/4, is one standard deviation of the
    // pi estimate itself (which averages 4x the inside indicator).
    let bound = 4.0 * sigma_pi() / 1e3;
    let error_1m = (pi_run_estimate(1_000_000, 0) - PI).abs();
    assert!(
        error_1m <= bound,
        "pi error {error_1m} exceeds 4 sigma bound {bound}"
    );

    // Mean absolute error over 100 seeds at four sample counts follows the
    // inverse-square-root law with the estimator's own constant
    // 4 sigma sqrt(2/pi).
    let sample_counts = [1_000u64, 10_000, 100_000, 1_000_000];
    let points: Vec<(f64, f64)> = sample_counts
        .iter()
        .map(|&n| {
            let total: f64 = (0..100u64)
                .into_par_iter()
                .map(|seed| (pi_run_estimate(n, 1000 + seed) - PI).abs())
                .sum();
            (n as f64, total / 100.0)
        })
        .collect();
    for &(n, mae) in &points {
        let law = 4.0 * sigma_pi() * (2.0 / PI).sqrt() / n.sqrt();
        assert!(
            (0.5..=1.5).contains(&(mae / law)),
            "MAE {mae} at N={n} outside [0.5, 1.5] of the law value {law}"
        );
    }
    let fit = fit_error_scaling(&points).unwrap();
    assert!(
        (-0.6..=-0.4).contains(&fit.slope),
        "log-log error slope {} outside [-0.6, -0.4] (points {points:?})",
        fit.slope
    );
    println!(
        "criterion 1 PASS: |pi - {:.6}| = {error_1m:.2e} <= {bound:.2e}; MAE slope {:.3}",
        PI, fit.slope
    );
}

#[test]
fn c2_cycle_law_and_closed_form_tts() {
    let mut gen = LfsrState::from_seed(32, 0xACCE55).unwrap();
    let kernel = PiKernel::default();
    for trial in 0..50 {
        let n_p = gen.bits(10) + 1;
        let n_samples = gen.bits(14) + 1;
        let depth = gen.bits(5);
        let f_clk = 1e6 * (gen.bits(8) + 1) as f64;
        let config = CoprocConfig::new(n_p, f_clk, depth).unwrap();
        let plan = SeedPlan::new(trial, (n_p).min(16)).unwrap();
        let (_, ledger) = coproc::run(&config, &kernel, n_samples, &plan).unwrap();
        // Independent ceiling form.
        let expected_cycles = (n_samples as u128 + n_p as u128 - 1) as u64 / n_p + depth;
        assert_eq!(
            ledger.cycles, expected_cycles,
            "cycle law broke at n_p={n_p}, n_samples={n_samples}, depth={depth}"
        );
        let tts = coproc::emulated_tts(&config, n_samples).unwrap();
        let closed_form = expected_cycles as f64 / f_clk;
        assert!(
            (tts - closed_form).abs() <= 1e-12 * closed_form,
            "tts {tts} vs closed form {closed_form}"
        );
    }
    println!("criterion 2 PASS: cycle law and closed-form TTS exact on 50 random shapes");
}

#[test]
fn c3_pi_kernel_matches_lattice_oracle() {
    let oracle = pi_lattice_count(8).unwrap();
    // Golden integer frozen from the pre-build enumeration.
    assert_eq!(oracle, 51_720);
    let mut kernel_count = 0u64;
    for x in 0..256u64 {
        for y in 0..256u64 {
            if point_inside(x, y, 8) {
                kernel_count += 1;
            }
        }
    }
    assert_eq!(kernel_count, oracle);
    println!("criterion 3 PASS: inside-test reproduces lattice count {oracle} over the full 2^16 grid");
}

#[test]
fn c4_bootstrap_matches_exact_enumeration() {
    let pmf = exact_bootstrap(&FIXTURE_A, &FIXTURE_B).unwrap();
    assert_eq!(pmf.cases, 729);

    // Raw-atom total variation from a single sampled stream. Integer data
    // makes every statistic bit-compare against the oracle atoms.
    let spec = BootstrapSpec::new(FIXTURE_A.to_vec(), FIXTURE_B.to_vec(), 64, -4.0, 0.5).unwrap();
    let n_stats = 100_000u64;
    let mut rng = RngBlock::from_seed(32, 18, 0xB0075).unwrap();
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for _ in 0..n_stats {
        let stat = bootstrap_statistic(&spec, &mut rng);
        *counts.entry(stat.to_bits()).or_insert(0) += 1;
    }
    let mut tv = 0.0;
    for &(v, p) in &pmf.atoms {
        let emp = counts.get(&v.to_bits()).copied().unwrap_or(0) as f64 / n_stats as f64;
        tv += (p - emp).abs();
    }
    for (&bits, &c) in &counts {
        if pmf.prob(f64::from_bits(bits)) == 0.0 {
            tv += c as f64 / n_stats as f64;
        }
    }
    tv /= 2.0;
    assert!(tv <= 0.02, "raw total variation {tv}");

    // The histogram path conserves mass exactly and agrees with the binned
    // oracle distribution.
    let blocks = 1500u64;
    let per_block = n_stats.div_ceil(blocks);
    let emitted = per_block * blocks;
    let n_samples = emitted * spec.draws_per_statistic();
    let kernel = BootstrapKernel::new(spec);
    let config = CoprocConfig::new(blocks, 1.25e8, 0).unwrap();
    let plan = SeedPlan::new(0xB0071, blocks).unwrap();
    let (collector, _) = coproc::run(&config, &kernel, n_samples, &plan).unwrap();
    let Collector::Histogram(hist) = collector else {
        panic!("bootstrap kernel fills a histogram")
    };
    assert_eq!(hist.mass(), emitted, "histogram mass conservation");
    let reference = HistogramCollector::new(64, -4.0, 0.5).unwrap();
    let mut oracle_bins = vec![0.0f64; 64];
    for &(v, p) in &pmf.atoms {
        oracle_bins[reference.bin_index(v).unwrap()] += p;
    }
    let binned_tv = hist
        .counts
        .iter()
        .zip(&oracle_bins)
        .map(|(&c, &p)| (c as f64 / emitted as f64 - p).abs())
        .sum::<f64>()
        / 2.0;
    assert!(binned_tv <= 0.02, "binned total variation {binned_tv}");
    println!(
        "criterion 4 PASS: TV raw {tv:.4} / binned {binned_tv:.4} <= 0.02; mass {emitted} exact"
    );
}

fn bayes_collect(
    net: &BayesNetwork,
    subsets: Vec<Vec<usize>>,
    copies: u64,
    samples: u64,
    seed: u64,
) -> pcoproc::coproc::CorrelationCollector {
    let kernel = BayesKernel::new(net.clone(), subsets).unwrap();
    let config = CoprocConfig::new(copies, 1.25e8, 0).unwrap();
    let plan = SeedPlan::new(seed, copies).unwrap();
    let (collector, _) = coproc::run(&config, &kernel, samples, &plan).unwrap();
    match collector {
        Collector::Correlation(c) => c,
        _ => panic!("bayes kernel fills a correlation collector"),
    }
}

#[test]
fn c5_bayes_relatedness_and_marginals() {
    // Small tree against the exact enumeration.
    let net = BayesNetwork::family_tree(3, 4).unwrap();
    let exact = ExactBayes::enumerate(&net).unwrap();
    assert_eq!(exact.correlation(0, 4).unwrap(), 0.5);
    assert_eq!(exact.correlation(0, 6).unwrap(), 0.25);
    assert_eq!(exact.correlation(0, 1).unwrap(), 0.0);
    let subsets = vec![vec![4, 0], vec![0, 1]];
    let collector = bayes_collect(&net, subsets.clone(), 10, 100_000, 0xBAE5);
    for (i, j) in [(0usize, 4usize), (0, 6), (0, 1)] {
        let measured = collector.correlation(i, j).unwrap().abs();
        let expected = exact.correlation(i, j).unwrap().abs();
        assert!(
            (measured - expected).abs() <= 0.01,
            "|corr({i},{j})| = {measured} vs exact {expected}"
        );
    }
    for subset in &subsets {
        let measured = collector.marginal(subset).unwrap();
        let expected = exact.marginal(&net, subset).unwrap();
        for (m, e) in measured.iter().zip(&expected) {
            assert!((m - e).abs() <= 0.01, "marginal {subset:?}: {measured:?} vs {expected:?}");
        }
    }

    // Full 127-node, 10-copy preset: relatedness decays monotonically with
    // ancestor-descendant distance.
    let tree = BayesNetwork::family_tree(7, 64).unwrap();
    assert_eq!(tree.len(), 127);
    let collector = bayes_collect(&tree, vec![], 10, 200_000, 0x7EE);
    let mut by_distance = Vec::new();
    for k in 1..=6usize {
        let mut total = 0.0;
        let mut pairs = 0u64;
        for layer in 0..=(6 - k) {
            let descendants = tree.layer_sizes()[layer + k];
            for d in 0..descendants {
                let descendant = tree.node_id(layer + k, d).unwrap();
                // Ancestors of descendant `d` at distance k occupy the
                // contiguous index range [d * 2^k, (d+1) * 2^k).
                for a in (d << k)..((d + 1) << k) {
                    let ancestor = tree.node_id(layer, a).unwrap();
                    total += collector.correlation(ancestor, descendant).unwrap().abs();
                    pairs += 1;
                }
            }
        }
        by_distance.push(total / pairs as f64);
    }
    for window in by_distance.windows(2) {
        assert!(
            window[1] < window[0],
            "relatedness failed to decay: {by_distance:?}"
        );
    }
    println!(
        "criterion 5 PASS: 7-node tree within 0.01 of enumeration; 127-node relatedness decays {:?}",
        by_distance.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>()
    );
}

#[test]
fn c6_knapsack_oracles_annealing_and_eq3() {
    // Oracle cross-agreement on 100 random instances.
    let mut gen = LfsrState::from_seed(32, 0x6E4B).unwrap();
    for trial in 0..100u64 {
        let n = 5 + (gen.bits(4) % 16) as usize;
        let inst = KnapsackInstance::generate(n, 0xC6_0000 + trial);
        assert_eq!(
            knapsack_dp(&inst).unwrap(),
            knapsack_exhaustive(&inst).unwrap(),
            "oracle disagreement at n={n}, trial={trial}"
        );
    }

    // Annealed MCMC reaches within 1% of the optimum for at least 95% of
    // (instance, seed) pairs, sweeping budgets n_s = 2^x * 10, x <= 14.
    let instances: Vec<KnapsackInstance> =
        (0..20u64).map(|i| KnapsackInstance::generate(20, 0xA11 + i)).collect();
    let optima: Vec<u64> = instances.iter().map(|i| knapsack_dp(i).unwrap()).collect();
    let seeds_per_instance = 5u64;
    let successes: u64 = (0..instances.len() as u64 * seeds_per_instance)
        .into_par_iter()
        .map(|pair| {
            let inst = &instances[(pair / seeds_per_instance) as usize];
            let target = 0.99 * optima[(pair / seeds_per_instance) as usize] as f64;
            let pair_master = SeedPlan::new(0xC6B, 100).unwrap().derive(pair).unwrap();
            let budget_seeds = SeedPlan::new(pair_master, 14).unwrap();
            for x in 1..=14u32 {
                let plan = SeedPlan::new(budget_seeds.derive(x as u64 - 1).unwrap(), 10).unwrap();
                let best = run_chains(inst, 10 << x, 10, 1000.0, &plan).unwrap().best_value;
                if best as f64 >= target {
                    return 1;
                }
            }
            0
        })
        .sum();
    let total_pairs = instances.len() as u64 * seeds_per_instance;
    let rate = successes as f64 / total_pairs as f64;
    assert!(
        rate >= 0.95,
        "only {successes}/{total_pairs} pairs reached 99% of optimum"
    );

    // Eq. 3 boundary values.
    let t_run = 0.375;
    assert_eq!(tts_opt(t_run, 0.99).unwrap(), t_run);
    let half = tts_opt(t_run, 0.5).unwrap();
    let closed_form = t_run * (0.01f64).ln() / (0.5f64).ln();
    assert!(
        (half - closed_form).abs() <= 1e-9 * closed_form,
        "{half} vs {closed_form}"
    );
    assert!((half / t_run - 6.6439).abs() < 1e-4);
    println!(
        "criterion 6 PASS: oracles agree on 100 instances; {successes}/{total_pairs} pairs hit 99% of optimum; Eq. 3 boundaries exact"
    );
}

fn run_cli(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_pcoproc"))
        .args(args)
        .output()
        .expect("spawn pcoproc");
    assert!(
        out.status.success(),
        "command failed: {args:?}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn canonical_without_times(mut doc: Value) -> String {
    let manifest = doc["manifest"].as_object_mut().unwrap();
    manifest.remove("started_unix");
    manifest.remove("finished_unix");
    manifest.remove("wall_seconds");
    serde_json::to_string(&doc).unwrap()
}

#[test]
fn c7_cli_replay_determinism() {
    let data = format!(
        "{}/../../data/ab_synthetic.csv",
        env!("CARGO_MANIFEST_DIR")
    );
    let commands: Vec<Vec<&str>> = vec![
        vec!["pi", "--samples", "30000", "--seed", "7"],
        vec![
            "bootstrap", "--data", &data, "--statistics", "1500", "--blocks", "1500",
            "--seed", "7",
        ],
        vec![
            "bayes", "--generations", "3", "--first-layer", "4", "--samples", "5000",
            "--marginal", "0,4", "--seed", "7",
        ],
        vec![
            "knapsack", "--n", "10", "--sweep", "--x-min", "1", "--x-max", "6",
            "--trials", "10", "--seed", "7",
        ],
    ];
    for args in &commands {
        let first = run_cli(args);
        let second = run_cli(args);
        assert_eq!(
            first["results"], second["results"],
            "result records differ for {args:?}"
        );
        assert_eq!(
            canonical_without_times(first),
            canonical_without_times(second),
            "replay not byte-identical for {args:?}"
        );
    }
    println!("criterion 7 PASS: all four subcommands replay byte-identically modulo timestamps");
}

#[test]
fn c8_model_speedups_and_stream_parity() {
    // The absolute hardware curves are not reproducible; the model must
    // instead show the exact block-parallel speedups and stream parity.
    let n_pi = 2800 * 700u64;
    let wide = CoprocConfig::new(2800, 1.25e8, 0).unwrap();
    let single = CoprocConfig::new(1, 1.25e8, 0).unwrap();
    let ratio_pi = coproc::emulated_tts(&single, n_pi).unwrap()
        / coproc::emulated_tts(&wide, n_pi).unwrap();
    assert!((ratio_pi - 2800.0).abs() < 1e-9 * 2800.0);

    let n_boot = 1500 * 700u64;
    let wide = CoprocConfig::new(1500, 1.25e8, 0).unwrap();
    let ratio_boot = coproc::emulated_tts(&single, n_boot).unwrap()
        / coproc::emulated_tts(&wide, n_boot).unwrap();
    assert!((ratio_boot - 1500.0).abs() < 1e-9 * 1500.0);

    // Identical seed stream: the single-stream baseline and the coproc path
    // produce bit-identical collectors, for both a counter and a histogram
    // workload.
    let pi_kernel = PiKernel::default();
    let (baseline, _, _) = baseline_run(&pi_kernel, 200_000, 0xC8).unwrap();
    let plan = SeedPlan::new(0xC8, 1).unwrap();
    let (via_coproc, _) = coproc::run(&wide, &pi_kernel, 200_000, &plan).unwrap();
    assert_eq!(baseline, via_coproc);
    let (Collector::Counter(a), Collector::Counter(b)) = (&baseline, &via_coproc) else {
        panic!("pi kernel fills counters")
    };
    assert_eq!(
        pi_estimate(a.hits, a.total).unwrap().to_bits(),
        pi_estimate(b.hits, b.total).unwrap().to_bits()
    );

    let spec = BootstrapSpec::new(FIXTURE_A.to_vec(), FIXTURE_B.to_vec(), 64, -4.0, 0.5).unwrap();
    let kernel = BootstrapKernel::new(spec);
    let (baseline, _, _) = baseline_run(&kernel, 60_000, 0xC8).unwrap();
    let (via_coproc, _) = coproc::run(&single, &kernel, 60_000, &plan).unwrap();
    assert_eq!(baseline, via_coproc);
    println!(
        "criterion 8 PASS: model speedups exactly {ratio_pi:.0}x (pi) and {ratio_boot:.0}x (bootstrap); baseline/coproc streams bit-identical"
    );
}
