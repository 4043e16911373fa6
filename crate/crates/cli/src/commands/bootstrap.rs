use pcoproc::coproc::{self, Collector, CoprocConfig};
use pcoproc::kernels::bootstrap::{BootstrapKernel, BootstrapSpec};
use pcoproc::rng::SeedPlan;
use serde_json::json;

use crate::dataset::load_ab_dataset;
use crate::manifest::{emit, Manifest};
use crate::{BootstrapArgs, CliError};

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64
}

/// Default bin layout: the statistic's CLT scale, centered on the observed
/// mean difference, covering +/- 4 standard errors.
fn auto_bins(group_a: &[f64], group_b: &[f64], bins: usize) -> (f64, f64) {
    let center = mean(group_a) - mean(group_b);
    let scale = (sample_variance(group_a) / group_a.len() as f64
        + sample_variance(group_b) / group_b.len() as f64)
        .sqrt();
    let scale = if scale > 0.0 { scale } else { 1.0 };
    (center - 4.0 * scale, 8.0 * scale / bins as f64)
}

pub fn run(args: BootstrapArgs) -> Result<(), CliError> {
    let dataset = load_ab_dataset(&args.data)?;
    let (auto_lo, auto_width) = auto_bins(&dataset.group_a, &dataset.group_b, args.bins.max(1));
    let bin_lo = args.bin_lo.unwrap_or(auto_lo);
    let bin_width = args.bin_width.unwrap_or(auto_width);
    let spec = BootstrapSpec::new(
        dataset.group_a.clone(),
        dataset.group_b.clone(),
        args.bins,
        bin_lo,
        bin_width,
    )?;

    // Whole statistics per block: each block must finish what it starts, so
    // the requested count rounds up to a block multiple.
    let per_block = args.statistics.div_ceil(args.blocks);
    let statistics_emitted = per_block * args.blocks;
    let draws = spec.draws_per_statistic();
    let n_samples = statistics_emitted * draws;

    let config = CoprocConfig::new(args.blocks, args.fclk, args.depth)?;
    let plan = SeedPlan::new(args.seed, args.blocks)?;
    let manifest = Manifest::start(
        "bootstrap",
        args.seed,
        json!({
            "data": args.data.display().to_string(),
            "rows": dataset.rows(),
            "group_a_size": dataset.group_a.len(),
            "group_b_size": dataset.group_b.len(),
            "bins": args.bins,
            "bin_lo": bin_lo,
            "bin_width": bin_width,
            "statistics_requested": args.statistics,
            "statistics_emitted": statistics_emitted,
            "draws_per_statistic": draws,
            "samples": n_samples,
            "blocks": args.blocks,
            "fclk": args.fclk,
            "pipeline_depth": args.depth,
        }),
    );

    let kernel = BootstrapKernel::new(spec);
    let (collector, ledger) = coproc::run(&config, &kernel, n_samples, &plan)?;
    let Collector::Histogram(hist) = collector else {
        return Err(CliError::Runtime(
            "bootstrap kernel produced a non-histogram".into(),
        ));
    };
    let tts = coproc::emulated_tts(&config, n_samples)?;

    let record = json!({
        "manifest": manifest.digest,
        "kind": "bootstrap",
        "group_a_size": dataset.group_a.len(),
        "group_a_mean": mean(&dataset.group_a),
        "group_b_size": dataset.group_b.len(),
        "group_b_mean": mean(&dataset.group_b),
        "observed_mean_difference": mean(&dataset.group_a) - mean(&dataset.group_b),
        "statistics_requested": args.statistics,
        "statistics_emitted": statistics_emitted,
        "samples": n_samples,
        "histogram": {
            "bin_lo": hist.bin_lo,
            "bin_width": hist.bin_width,
            "counts": hist.counts,
        },
        "cycles": ledger.cycles,
        "samples_emitted": ledger.samples_emitted,
        "emulated_tts_seconds": tts,
    });
    emit(&manifest.into_document(vec![record]), args.out.as_deref())
}
