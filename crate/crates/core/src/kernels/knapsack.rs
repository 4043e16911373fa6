//! Annealed Markov-chain sampling of the 0/1 knapsack problem.
//!
//! A proposal redraws the state of two distinct items of the current
//! configuration (a pure double flip would lock the selection-count parity
//! and cut half the configurations off from the all-zeros start); the new
//! weight and value are computed incrementally from just the changed items.
//! Infeasible proposals are discarded before the accept/reject stage; the
//! rest accept with probability `min(1, exp(dv / T))`. The temperature halves
//! every tenth of the sample budget, ten times over a run. Several
//! independent chains run from the all-zeros state and the best feasible
//! value seen anywhere is reported.

use serde::{Deserialize, Serialize};

use crate::coproc::{Collector, CounterCollector, Kernel, Sample};
use crate::error::{Error, Result};
use crate::kernels::bootstrap::{index_from_bits, INDEX_BITS};
use crate::rng::{RngBlock, SeedPlan};

/// Value/weight range for generated instances.
pub const ITEM_RANGE: u32 = 1000;

/// Lane layout of the knapsack RNG block: 18-bit words for the two item
/// picks and the acceptance draw, one lane per fresh item state.
const LANES_I: std::ops::Range<usize> = 0..18;
const LANES_J: std::ops::Range<usize> = 18..36;
const LANE_STATE_I: usize = 36;
const LANE_STATE_J: usize = 37;
const LANES_ACCEPT: std::ops::Range<usize> = 38..56;
const LANE_COUNT: usize = 56;

/// A 0/1 knapsack instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    values: Vec<u32>,
    weights: Vec<u32>,
    capacity: u64,
}

impl KnapsackInstance {
    pub fn new(values: Vec<u32>, weights: Vec<u32>, capacity: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooFewItems { needed: 1, got: 0 });
        }
        if values.len() != weights.len() {
            return Err(Error::InvalidConfig(format!(
                "{} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        Ok(Self {
            values,
            weights,
            capacity,
        })
    }

    /// Random instance: values and weights uniform over 0..=1000, capacity
    /// half the total weight (rounded down). Deterministic in `(n, seed)`.
    pub fn generate(n: usize, seed: u64) -> Self {
        assert!(n >= 1, "instance needs at least one item");
        let plan = SeedPlan::new(seed, 1).expect("one block");
        let mut rng = RngBlock::from_seed(32, INDEX_BITS as usize, plan.derive(0).expect("in range"))
            .expect("width 32 is shipped");
        let mut values = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for _ in 0..n {
            values.push(index_from_bits(rng.word(0..18), ITEM_RANGE as usize + 1) as u32);
            weights.push(index_from_bits(rng.word(0..18), ITEM_RANGE as usize + 1) as u32);
        }
        let capacity = weights.iter().map(|&w| w as u64).sum::<u64>() / 2;
        Self {
            values,
            weights,
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> u32 {
        self.values[i]
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn total_value(&self) -> u64 {
        self.values.iter().map(|&v| v as u64).sum()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }
}

/// A two-item state change with its incremental weight and value deltas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Proposal {
    pub i: usize,
    pub j: usize,
    pub new_i: bool,
    pub new_j: bool,
    pub dw: i64,
    pub dv: i64,
}

impl Proposal {
    /// Deltas for setting items `i` and `j` of configuration `x` to the
    /// given states; only the two touched items contribute.
    pub fn for_targets(
        instance: &KnapsackInstance,
        x: &[bool],
        i: usize,
        j: usize,
        new_i: bool,
        new_j: bool,
    ) -> Self {
        let mut dw = 0i64;
        let mut dv = 0i64;
        for (k, new) in [(i, new_i), (j, new_j)] {
            let delta = new as i64 - x[k] as i64;
            dw += delta * instance.weight(k) as i64;
            dv += delta * instance.value(k) as i64;
        }
        Self {
            i,
            j,
            new_i,
            new_j,
            dw,
            dv,
        }
    }
}

/// Accept probability `min(1, exp(dv / temperature))`.
#[inline]
pub fn accept_threshold(dv: i64, temperature: f64) -> f64 {
    if dv >= 0 {
        1.0
    } else {
        (dv as f64 / temperature).exp()
    }
}

/// One annealed Markov chain over a fixed instance.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackChain {
    x: Vec<bool>,
    w_cur: u64,
    v_cur: u64,
    samples_done: u64,
    n_s_total: u64,
    t0: f64,
}

impl KnapsackChain {
    /// Fresh chain in the all-zeros state (always feasible). The schedule
    /// needs at least 10 steps so each of the 10 halvings lands.
    pub fn new(n_items: usize, n_s_total: u64, t0: f64) -> Result<Self> {
        if n_items < 2 {
            return Err(Error::TooFewItems {
                needed: 2,
                got: n_items,
            });
        }
        if n_s_total < 10 {
            return Err(Error::ScheduleTooShort(n_s_total));
        }
        if !(t0.is_finite() && t0 > 0.0) {
            return Err(Error::InvalidTemperature(t0));
        }
        Ok(Self {
            x: vec![false; n_items],
            w_cur: 0,
            v_cur: 0,
            samples_done: 0,
            n_s_total,
            t0,
        })
    }

    /// Current temperature: `t0 / 2^k` after `k` tenths of the budget,
    /// independent of acceptance history.
    pub fn temperature(&self) -> f64 {
        let stage = (10 * self.samples_done / self.n_s_total).min(10);
        self.t0 * 0.5f64.powi(stage as i32)
    }

    pub fn samples_done(&self) -> u64 {
        self.samples_done
    }

    pub fn value(&self) -> u64 {
        self.v_cur
    }

    pub fn weight(&self) -> u64 {
        self.w_cur
    }

    pub fn config(&self) -> &[bool] {
        &self.x
    }

    /// Picks two distinct items uniformly (the second draw re-rolls on
    /// collision, deterministically from the stream), draws one fresh state
    /// bit for each, and returns the incremental deltas.
    pub fn propose(&self, instance: &KnapsackInstance, rng: &mut RngBlock) -> Result<Proposal> {
        let n = instance.len();
        if n < 2 {
            return Err(Error::TooFewItems { needed: 2, got: n });
        }
        let i = index_from_bits(rng.word(LANES_I), n);
        let mut j = index_from_bits(rng.word(LANES_J), n);
        while j == i {
            j = index_from_bits(rng.word(LANES_J), n);
        }
        let new_i = rng.bit(LANE_STATE_I) == 1;
        let new_j = rng.bit(LANE_STATE_J) == 1;
        Ok(Proposal::for_targets(instance, &self.x, i, j, new_i, new_j))
    }

    /// Applies the feasibility gate, then accept/reject, then advances the
    /// annealing clock. Returns whether the proposal was accepted.
    pub fn step(
        &mut self,
        instance: &KnapsackInstance,
        proposal: Proposal,
        rng: &mut RngBlock,
    ) -> bool {
        let new_w = self.w_cur as i128 + proposal.dw as i128;
        let mut accepted = false;
        // Infeasible states never reach the accept/reject stage and consume
        // no acceptance draw.
        if new_w <= instance.capacity() as i128 {
            let u = rng.uniform(LANES_ACCEPT);
            if u < accept_threshold(proposal.dv, self.temperature()) {
                self.x[proposal.i] = proposal.new_i;
                self.x[proposal.j] = proposal.new_j;
                self.w_cur = new_w as u64;
                self.v_cur = (self.v_cur as i64 + proposal.dv) as u64;
                accepted = true;
                debug_assert_eq!(self.w_cur, recomputed_weight(instance, &self.x));
                debug_assert_eq!(self.v_cur, recomputed_value(instance, &self.x));
                debug_assert!(self.w_cur <= instance.capacity());
            }
        }
        self.samples_done += 1;
        accepted
    }
}

pub(crate) fn recomputed_weight(instance: &KnapsackInstance, x: &[bool]) -> u64 {
    x.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| instance.weight(k) as u64)
        .sum()
}

pub(crate) fn recomputed_value(instance: &KnapsackInstance, x: &[bool]) -> u64 {
    x.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| instance.value(k) as u64)
        .sum()
}

/// Outcome of a multi-chain annealed run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackRunResult {
    /// Best feasible value observed across all chains and steps.
    pub best_value: u64,
    /// A configuration achieving it.
    pub best_config: Vec<bool>,
}

/// Runs `chains` independent annealed chains of `n_s` steps each from the
/// all-zeros state; chain `c` is seeded from plan block `c`.
pub fn run_chains(
    instance: &KnapsackInstance,
    n_s: u64,
    chains: u64,
    t0: f64,
    plan: &SeedPlan,
) -> Result<KnapsackRunResult> {
    if chains == 0 {
        return Err(Error::InvalidConfig("need at least one chain".into()));
    }
    if plan.block_count() < chains {
        return Err(Error::InvalidConfig(format!(
            "seed plan has {} blocks for {} chains",
            plan.block_count(),
            chains
        )));
    }
    let mut best_value = 0u64;
    let mut best_config = vec![false; instance.len()];
    for c in 0..chains {
        let mut rng = RngBlock::from_seed(32, LANE_COUNT, plan.derive(c)?)?;
        let mut chain = KnapsackChain::new(instance.len(), n_s, t0)?;
        for _ in 0..n_s {
            let proposal = chain.propose(instance, &mut rng)?;
            chain.step(instance, proposal, &mut rng);
            if chain.value() > best_value {
                best_value = chain.value();
                best_config.copy_from_slice(chain.config());
            }
        }
    }
    Ok(KnapsackRunResult {
        best_value,
        best_config,
    })
}

/// The knapsack workload as a coprocessor kernel: one chain per block, one
/// proposal per cycle, accepted states fed back into the proposal source.
/// The counter collects acceptance telemetry.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackKernel {
    instance: KnapsackInstance,
    n_s: u64,
    t0: f64,
}

impl KnapsackKernel {
    pub fn new(instance: KnapsackInstance, n_s: u64, t0: f64) -> Result<Self> {
        KnapsackChain::new(instance.len(), n_s, t0)?;
        Ok(Self { instance, n_s, t0 })
    }
}

impl Kernel for KnapsackKernel {
    type Block = KnapsackChain;

    fn rng_lanes(&self) -> usize {
        LANE_COUNT
    }

    fn make_block(&self, _: u64) -> KnapsackChain {
        KnapsackChain::new(self.instance.len(), self.n_s, self.t0)
            .expect("validated at construction")
    }

    fn make_collector(&self) -> Collector {
        Collector::Counter(CounterCollector::default())
    }

    fn cycle(&self, block: &mut KnapsackChain, rng: &mut RngBlock) -> Option<Sample> {
        let proposal = block.propose(&self.instance, rng).expect("n >= 2 checked");
        Some(Sample::Bit(block.step(&self.instance, proposal, rng)))
    }

    fn feedback(&self) -> bool {
        true
    }
}
