use pcoproc::coproc::{self, Collector, CoprocConfig, Kernel};
use pcoproc::kernels::bayes::{BayesKernel, BayesNetwork};
use pcoproc::rng::SeedPlan;
use serde_json::json;

use crate::manifest::{emit, Manifest};
use crate::{BayesArgs, CliError};

fn parse_nodes(text: &str, net: &BayesNetwork, flag: &str) -> Result<Vec<usize>, CliError> {
    let nodes: Vec<usize> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("--{flag} '{text}': '{part}' is not a node id")))
        })
        .collect::<Result<_, _>>()?;
    if nodes.is_empty() {
        return Err(CliError::Usage(format!("--{flag} needs node ids")));
    }
    for &n in &nodes {
        if n >= net.len() {
            return Err(CliError::Usage(format!(
                "--{flag} '{text}': node {n} does not exist (network has {} nodes)",
                net.len()
            )));
        }
    }
    Ok(nodes)
}

/// Default report: the founder pair plus node 0 against its descendant at
/// every generation distance.
fn default_pairs(net: &BayesNetwork) -> Vec<(usize, usize)> {
    let mut pairs = vec![(0usize, 1usize)];
    for layer in 1..net.layer_sizes().len() {
        if let Some(id) = net.node_id(layer, 0) {
            pairs.push((0, id));
        }
    }
    pairs
}

pub fn run(args: BayesArgs) -> Result<(), CliError> {
    let net = BayesNetwork::family_tree(args.generations, args.first_layer)?;
    let pairs: Vec<(usize, usize)> = if args.pairs.is_empty() {
        default_pairs(&net)
    } else {
        args.pairs
            .iter()
            .map(|text| {
                let nodes = parse_nodes(text, &net, "pair")?;
                if nodes.len() != 2 {
                    return Err(CliError::Usage(format!(
                        "--pair '{text}': expected exactly two node ids"
                    )));
                }
                Ok((nodes[0], nodes[1]))
            })
            .collect::<Result<_, _>>()?
    };
    let subsets: Vec<Vec<usize>> = args
        .marginals
        .iter()
        .map(|text| parse_nodes(text, &net, "marginal"))
        .collect::<Result<_, _>>()?;

    let kernel = BayesKernel::new(net.clone(), subsets.clone())?;
    let depth = args.depth.unwrap_or_else(|| kernel.pipeline_depth());
    let config = CoprocConfig::new(args.copies, args.fclk, depth)?;
    let plan = SeedPlan::new(args.seed, args.copies)?;
    let p_bits = net.len() as u64 * args.copies;
    let manifest = Manifest::start(
        "bayes",
        args.seed,
        json!({
            "generations": args.generations,
            "first_layer": args.first_layer,
            "nodes": net.len(),
            "copies": args.copies,
            "p_bits": p_bits,
            "samples": args.samples,
            "pairs": pairs,
            "marginals": subsets,
            "fclk": args.fclk,
            "pipeline_depth": depth,
        }),
    );

    let (collector, ledger) = coproc::run(&config, &kernel, args.samples, &plan)?;
    let Collector::Correlation(corr) = collector else {
        return Err(CliError::Runtime(
            "bayes kernel produced a non-correlation collector".into(),
        ));
    };
    let tts = coproc::emulated_tts(&config, args.samples)?;

    let mut results = vec![json!({
        "manifest": manifest.digest,
        "kind": "bayes_run",
        "nodes": net.len(),
        "copies": args.copies,
        "p_bits": p_bits,
        "samples": args.samples,
        "cycles": ledger.cycles,
        "samples_emitted": ledger.samples_emitted,
        "emulated_tts_seconds": tts,
    })];
    for &(i, j) in &pairs {
        let c = corr.correlation(i, j)?;
        results.push(json!({
            "manifest": manifest.digest,
            "kind": "bayes_correlation",
            "node_i": i,
            "node_j": j,
            "generation_i": net.layer_of(i),
            "generation_j": net.layer_of(j),
            "correlation": c,
            "abs_correlation": c.abs(),
        }));
    }
    for subset in &subsets {
        let (counts, total) = corr.marginal_counts(subset)?;
        results.push(json!({
            "manifest": manifest.digest,
            "kind": "bayes_marginal",
            "nodes": subset,
            "counts": counts,
            "total": total,
            "probabilities": corr.marginal(subset)?,
        }));
    }
    emit(&manifest.into_document(results), args.out.as_deref())
}
