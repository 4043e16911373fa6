use pcoproc::coproc::{self, Collector, CoprocConfig};
use pcoproc::kernels::pi::{pi_estimate, PiKernel};
use pcoproc::rng::SeedPlan;
use serde_json::json;

use crate::manifest::{emit, Manifest};
use crate::{CliError, PiArgs};

pub fn run(args: PiArgs) -> Result<(), CliError> {
    let kernel = PiKernel::new(args.coord_bits)?;
    let config = CoprocConfig::new(args.blocks, args.fclk, args.depth)?;
    let plan = SeedPlan::new(args.seed, args.blocks)?;
    let manifest = Manifest::start(
        "pi",
        args.seed,
        json!({
            "samples": args.samples,
            "blocks": args.blocks,
            "coord_bits": args.coord_bits,
            "fclk": args.fclk,
            "pipeline_depth": args.depth,
            "project": args.project,
            "project_clock": args.project_clock,
            "project_parallel": args.project_parallel,
        }),
    );

    let (collector, ledger) = coproc::run(&config, &kernel, args.samples, &plan)?;
    let Collector::Counter(counter) = collector else {
        return Err(CliError::Runtime("pi kernel produced a non-counter".into()));
    };
    let estimate = pi_estimate(counter.hits, counter.total)?;
    let tts = coproc::emulated_tts(&config, args.samples)?;
    let projected = if args.project {
        Some(coproc::project_tts(
            &config,
            args.samples,
            args.project_clock,
            args.project_parallel,
        )?)
    } else {
        None
    };

    let record = json!({
        "manifest": manifest.digest,
        "kind": "pi",
        "samples": args.samples,
        "n_in": counter.hits,
        "n_all": counter.total,
        "estimate": estimate,
        "abs_error": (estimate - std::f64::consts::PI).abs(),
        "cycles": ledger.cycles,
        "samples_emitted": ledger.samples_emitted,
        "emulated_tts_seconds": tts,
        "projected_tts_seconds": projected,
    });
    emit(&manifest.into_document(vec![record]), args.out.as_deref())
}
