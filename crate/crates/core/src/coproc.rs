//! The block-parallel architecture model.
//!
//! A run steps `N_p` parallel (RNG -> Kernel) blocks cycle by cycle into a
//! shared data collector and keeps an exact cycle ledger. Statistics are a
//! function of the [`SeedPlan`] alone: the plan fixes the logical sample
//! streams, while `n_p` only decides how many of them the modeled hardware
//! advances per clock. Timing therefore scales with `n_p` and the collected
//! result does not, which is exactly the platform-independence property the
//! workloads rely on.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{RngBlock, SeedPlan};

/// Largest accepted sample count; keeps `cycles * n_p` inside u64.
const MAX_SAMPLES: u64 = 1 << 62;

/// Physical shape of the modeled coprocessor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoprocConfig {
    /// Parallel (RNG -> Kernel) blocks.
    pub n_p: u64,
    /// Clock frequency in Hz.
    pub f_clk: f64,
    /// Pipeline fill latency in cycles, charged once per run.
    pub pipeline_depth: u64,
}

impl CoprocConfig {
    pub fn new(n_p: u64, f_clk: f64, pipeline_depth: u64) -> Result<Self> {
        if n_p == 0 {
            return Err(Error::InvalidConfig("n_p must be at least 1".into()));
        }
        if !(f_clk.is_finite() && f_clk > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "f_clk must be positive and finite, got {f_clk}"
            )));
        }
        Ok(Self {
            n_p,
            f_clk,
            pipeline_depth,
        })
    }
}

/// Exact cycle accounting for one completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleLedger {
    pub cycles: u64,
    pub samples_emitted: u64,
}

/// One value leaving a kernel block in one cycle.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    /// A hit/miss outcome (e.g. point inside the circle).
    Bit(bool),
    /// A finished scalar statistic.
    Real(f64),
    /// A joint bipolar sample over every network node.
    Joint(Vec<i8>),
}

/// Pair of 64-bit tallies: hits and total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CounterCollector {
    pub hits: u64,
    pub total: u64,
}

impl CounterCollector {
    fn add(&mut self, hit: bool) -> Result<()> {
        self.total = self.total.checked_add(1).ok_or(Error::TallyOverflow)?;
        if hit {
            self.hits += 1;
        }
        Ok(())
    }

    fn merge(&mut self, other: &Self) -> Result<()> {
        self.hits = self.hits.checked_add(other.hits).ok_or(Error::TallyOverflow)?;
        self.total = self
            .total
            .checked_add(other.total)
            .ok_or(Error::TallyOverflow)?;
        Ok(())
    }
}

/// Fixed-geometry histogram with clamp-to-edge out-of-range policy, so no
/// accumulated value is ever dropped and total mass is conserved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramCollector {
    pub bin_lo: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

impl HistogramCollector {
    pub fn new(bin_count: usize, bin_lo: f64, bin_width: f64) -> Result<Self> {
        if bin_count == 0 {
            return Err(Error::InvalidConfig("histogram needs at least 1 bin".into()));
        }
        if !bin_lo.is_finite() {
            return Err(Error::NonFiniteValue(bin_lo));
        }
        if !(bin_width.is_finite() && bin_width > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "bin width must be positive, got {bin_width}"
            )));
        }
        Ok(Self {
            bin_lo,
            bin_width,
            counts: vec![0; bin_count],
        })
    }

    /// Bin index for `v`: `floor((v - bin_lo) / bin_width)` clamped to the
    /// edge bins.
    pub fn bin_index(&self, v: f64) -> Result<usize> {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(v));
        }
        let raw = ((v - self.bin_lo) / self.bin_width).floor();
        let last = self.counts.len() - 1;
        if raw < 0.0 {
            Ok(0)
        } else if raw > last as f64 {
            Ok(last)
        } else {
            Ok(raw as usize)
        }
    }

    fn add(&mut self, v: f64) -> Result<()> {
        let idx = self.bin_index(v)?;
        self.counts[idx] = self.counts[idx].checked_add(1).ok_or(Error::TallyOverflow)?;
        Ok(())
    }

    /// Total accumulated mass.
    pub fn mass(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn merge(&mut self, other: &Self) -> Result<()> {
        if self.counts.len() != other.counts.len()
            || self.bin_lo.to_bits() != other.bin_lo.to_bits()
            || self.bin_width.to_bits() != other.bin_width.to_bits()
        {
            return Err(Error::GeometryMismatch("histogram bin layout"));
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c = c.checked_add(*o).ok_or(Error::TallyOverflow)?;
        }
        Ok(())
    }
}

/// Joint tallies for a subset of nodes: counts of each of the `2^|subset|`
/// bipolar assignments, indexed by the bitmask with bit `k` set when node
/// `subset[k]` sampled +1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetTally {
    pub nodes: Vec<usize>,
    pub counts: Vec<u64>,
}

/// Pairwise-product and per-node accumulator over joint bipolar samples,
/// plus joint tables for any subsets configured up front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCollector {
    n_nodes: usize,
    count: u64,
    sums: Vec<i64>,
    /// Upper triangle (including diagonal), row-major.
    prod_sums: Vec<i64>,
    subsets: Vec<SubsetTally>,
}

impl CorrelationCollector {
    pub fn new(n_nodes: usize, subsets: &[Vec<usize>]) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::InvalidConfig("correlation collector needs nodes".into()));
        }
        let mut tallies = Vec::with_capacity(subsets.len());
        for subset in subsets {
            if subset.len() > 20 {
                return Err(Error::SubsetTooLarge(subset.len()));
            }
            for &n in subset {
                if n >= n_nodes {
                    return Err(Error::UnknownNode(n));
                }
            }
            tallies.push(SubsetTally {
                nodes: subset.clone(),
                counts: vec![0; 1usize << subset.len()],
            });
        }
        Ok(Self {
            n_nodes,
            count: 0,
            sums: vec![0; n_nodes],
            prod_sums: vec![0; n_nodes * (n_nodes + 1) / 2],
            subsets: tallies,
        })
    }

    fn tri_index(&self, i: usize, j: usize) -> usize {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        // Row `lo` of the upper triangle starts after `lo` full rows.
        lo * self.n_nodes - lo * (lo + 1) / 2 + lo + (hi - lo)
    }

    fn add(&mut self, joint: &[i8]) -> Result<()> {
        if joint.len() != self.n_nodes {
            return Err(Error::GeometryMismatch("joint sample width"));
        }
        self.count = self.count.checked_add(1).ok_or(Error::TallyOverflow)?;
        for i in 0..self.n_nodes {
            self.sums[i] += joint[i] as i64;
            let row = self.tri_index(i, i);
            for j in i..self.n_nodes {
                self.prod_sums[row + (j - i)] += (joint[i] * joint[j]) as i64;
            }
        }
        for tally in &mut self.subsets {
            let mut idx = 0usize;
            for (k, &node) in tally.nodes.iter().enumerate() {
                if joint[node] == 1 {
                    idx |= 1 << k;
                }
            }
            tally.counts[idx] += 1;
        }
        Ok(())
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Empirical mean of node `i`.
    pub fn mean(&self, i: usize) -> Result<f64> {
        if i >= self.n_nodes {
            return Err(Error::UnknownNode(i));
        }
        if self.count == 0 {
            return Err(Error::NoSamples);
        }
        Ok(self.sums[i] as f64 / self.count as f64)
    }

    /// Empirical `<s_i * s_j>`; exactly 1 on the diagonal since `s^2 = 1`.
    pub fn correlation(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.n_nodes {
            return Err(Error::UnknownNode(i));
        }
        if j >= self.n_nodes {
            return Err(Error::UnknownNode(j));
        }
        if self.count == 0 {
            return Err(Error::NoSamples);
        }
        Ok(self.prod_sums[self.tri_index(i, j)] as f64 / self.count as f64)
    }

    /// Joint assignment counts for a subset configured at construction.
    pub fn marginal_counts(&self, subset: &[usize]) -> Result<(&[u64], u64)> {
        self.subsets
            .iter()
            .find(|t| t.nodes == subset)
            .map(|t| (t.counts.as_slice(), self.count))
            .ok_or_else(|| Error::SubsetNotConfigured(subset.to_vec()))
    }

    /// Empirical joint probabilities over a configured subset, indexed like
    /// [`SubsetTally::counts`]. The underlying counts sum to the sample
    /// count exactly.
    pub fn marginal(&self, subset: &[usize]) -> Result<Vec<f64>> {
        let (counts, total) = self.marginal_counts(subset)?;
        if total == 0 {
            return Err(Error::NoSamples);
        }
        Ok(counts.iter().map(|&c| c as f64 / total as f64).collect())
    }

    fn merge(&mut self, other: &Self) -> Result<()> {
        if self.n_nodes != other.n_nodes {
            return Err(Error::GeometryMismatch("correlation node count"));
        }
        let same_subsets = self.subsets.len() == other.subsets.len()
            && self
                .subsets
                .iter()
                .zip(&other.subsets)
                .all(|(a, b)| a.nodes == b.nodes);
        if !same_subsets {
            return Err(Error::GeometryMismatch("correlation subsets"));
        }
        self.count = self.count.checked_add(other.count).ok_or(Error::TallyOverflow)?;
        for (s, o) in self.sums.iter_mut().zip(&other.sums) {
            *s += o;
        }
        for (s, o) in self.prod_sums.iter_mut().zip(&other.prod_sums) {
            *s += o;
        }
        for (t, o) in self.subsets.iter_mut().zip(&other.subsets) {
            for (c, oc) in t.counts.iter_mut().zip(&o.counts) {
                *c = c.checked_add(*oc).ok_or(Error::TallyOverflow)?;
            }
        }
        Ok(())
    }
}

/// The data collector block. Merging two collectors of identical geometry
/// is an elementwise sum: associative, commutative, with the empty
/// collector as identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Collector {
    Counter(CounterCollector),
    Histogram(HistogramCollector),
    Correlation(CorrelationCollector),
}

impl Collector {
    pub fn accumulate(&mut self, sample: &Sample) -> Result<()> {
        match (self, sample) {
            (Collector::Counter(c), Sample::Bit(b)) => c.add(*b),
            (Collector::Histogram(h), Sample::Real(v)) => h.add(*v),
            (Collector::Correlation(c), Sample::Joint(j)) => c.add(j),
            (Collector::Counter(_), _) => Err(Error::CollectorMismatch("counter expects bits")),
            (Collector::Histogram(_), _) => {
                Err(Error::CollectorMismatch("histogram expects reals"))
            }
            (Collector::Correlation(_), _) => {
                Err(Error::CollectorMismatch("correlation expects joint samples"))
            }
        }
    }

    /// Number of values accumulated so far.
    pub fn mass(&self) -> u64 {
        match self {
            Collector::Counter(c) => c.total,
            Collector::Histogram(h) => h.mass(),
            Collector::Correlation(c) => c.count(),
        }
    }

    pub fn merge_from(&mut self, other: &Collector) -> Result<()> {
        match (self, other) {
            (Collector::Counter(a), Collector::Counter(b)) => a.merge(b),
            (Collector::Histogram(a), Collector::Histogram(b)) => a.merge(b),
            (Collector::Correlation(a), Collector::Correlation(b)) => a.merge(b),
            _ => Err(Error::GeometryMismatch("collector kind")),
        }
    }
}

/// Elementwise sum of two collectors of identical geometry.
pub fn merge(a: &Collector, b: &Collector) -> Result<Collector> {
    let mut out = a.clone();
    out.merge_from(b)?;
    Ok(out)
}

/// One workload kernel: a per-block state machine that turns the block's
/// random bits into at most one collected value per cycle.
pub trait Kernel: Sync {
    /// Per-block pipeline state.
    type Block: Send;

    /// Width of the block's N-bit RNG: how many one-bit lanes it draws
    /// from each cycle.
    fn rng_lanes(&self) -> usize;

    /// Fresh state for block `block_index`.
    fn make_block(&self, block_index: u64) -> Self::Block;

    /// Empty collector of the kind this kernel emits into.
    fn make_collector(&self) -> Collector;

    /// Processes one sample; returns the value (if any) finished this cycle.
    fn cycle(&self, block: &mut Self::Block, rng: &mut RngBlock) -> Option<Sample>;

    /// Whether emitted results feed back into the block's proposal state.
    /// Feedback-free kernels are pure streams: block outputs are independent
    /// across blocks given distinct seeds.
    fn feedback(&self) -> bool {
        false
    }

    /// Fill latency this kernel asks for when the caller has no override.
    fn pipeline_depth(&self) -> u64 {
        0
    }

    /// LFSR register width driving each block.
    fn rng_width(&self) -> u32 {
        32
    }
}

fn block_quota(n_samples: u64, block_count: u64, block: u64) -> u64 {
    n_samples / block_count + u64::from(block < n_samples % block_count)
}

/// Runs one logical block to completion and returns its private collector.
fn run_block<K: Kernel>(kernel: &K, plan: &SeedPlan, block: u64, quota: u64) -> Result<Collector> {
    let mut collector = kernel.make_collector();
    let mut rng = RngBlock::from_seed(kernel.rng_width(), kernel.rng_lanes(), plan.derive(block)?)?;
    let mut state = kernel.make_block(block);
    for _ in 0..quota {
        if let Some(sample) = kernel.cycle(&mut state, &mut rng) {
            collector.accumulate(&sample)?;
        }
    }
    Ok(collector)
}

/// Steps all blocks until `n_samples` samples are processed and returns the
/// merged collector plus the exact ledger.
///
/// The plan's `block_count` logical streams split `n_samples` evenly (first
/// streams take the remainder); the ledger charges
/// `ceil(n_samples / n_p) + pipeline_depth` cycles. Replaying the same
/// `(config, kernel, n_samples, plan)` is bit-identical, and the collector
/// does not depend on `n_p`.
pub fn run<K: Kernel>(
    config: &CoprocConfig,
    kernel: &K,
    n_samples: u64,
    plan: &SeedPlan,
) -> Result<(Collector, CycleLedger)> {
    if n_samples == 0 {
        return Err(Error::EmptyRun);
    }
    if n_samples > MAX_SAMPLES {
        return Err(Error::RunTooLarge(n_samples));
    }
    let blocks = plan.block_count();
    let per_block: Vec<Collector> = (0..blocks)
        .into_par_iter()
        .map(|b| run_block(kernel, plan, b, block_quota(n_samples, blocks, b)))
        .collect::<Result<_>>()?;
    let mut collector = kernel.make_collector();
    for c in &per_block {
        collector.merge_from(c)?;
    }
    let ledger = CycleLedger {
        cycles: n_samples
            .div_ceil(config.n_p)
            .checked_add(config.pipeline_depth)
            .ok_or(Error::RunTooLarge(n_samples))?,
        samples_emitted: n_samples,
    };
    Ok((collector, ledger))
}

/// Modeled wall time of a run: `(ceil(n_samples / n_p) + depth) / f_clk`.
///
/// With `n_p | n_samples` and zero depth this is exactly the linear law
/// `n_samples / (f_clk * n_p)`; the depth term is the one-time pipeline
/// fill, negligible for any realistic run length.
pub fn emulated_tts(config: &CoprocConfig, n_samples: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::EmptyRun);
    }
    if n_samples > MAX_SAMPLES {
        return Err(Error::RunTooLarge(n_samples));
    }
    let cycles = n_samples
        .div_ceil(config.n_p)
        .checked_add(config.pipeline_depth)
        .ok_or(Error::RunTooLarge(n_samples))?;
    Ok(cycles as f64 / config.f_clk)
}

/// [`emulated_tts`] for a scaled-up machine: clock times `clock_factor`,
/// block count times `parallel_factor` (rounded up to whole blocks).
/// Factors below 1 are rejected; projection only speeds up.
pub fn project_tts(
    base: &CoprocConfig,
    n_samples: u64,
    clock_factor: f64,
    parallel_factor: f64,
) -> Result<f64> {
    if !(clock_factor.is_finite() && clock_factor >= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "clock factor must be >= 1, got {clock_factor}"
        )));
    }
    if !(parallel_factor.is_finite() && parallel_factor >= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "parallel factor must be >= 1, got {parallel_factor}"
        )));
    }
    let scaled = CoprocConfig::new(
        (base.n_p as f64 * parallel_factor).ceil() as u64,
        base.f_clk * clock_factor,
        base.pipeline_depth,
    )?;
    emulated_tts(&scaled, n_samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimal feedback-free kernel: emits each 8-bit draw as a real.
    struct ByteStream;

    impl Kernel for ByteStream {
        type Block = ();

        fn rng_lanes(&self) -> usize {
            8
        }

        fn make_block(&self, _: u64) -> Self::Block {}

        fn make_collector(&self) -> Collector {
            Collector::Histogram(HistogramCollector::new(16, 0.0, 16.0).unwrap())
        }

        fn cycle(&self, _: &mut Self::Block, rng: &mut RngBlock) -> Option<Sample> {
            Some(Sample::Real(rng.word(0..8) as f64))
        }
    }

    /// Bit kernel for counter-path tests.
    struct CoinStream;

    impl Kernel for CoinStream {
        type Block = ();

        fn rng_lanes(&self) -> usize {
            1
        }

        fn make_block(&self, _: u64) -> Self::Block {}

        fn make_collector(&self) -> Collector {
            Collector::Counter(CounterCollector::default())
        }

        fn cycle(&self, _: &mut Self::Block, rng: &mut RngBlock) -> Option<Sample> {
            Some(Sample::Bit(rng.bit(0) == 1))
        }
    }

    fn cfg(n_p: u64, depth: u64) -> CoprocConfig {
        CoprocConfig::new(n_p, 1e8, depth).unwrap()
    }

    #[test]
    fn one_cycle_when_blocks_cover_samples() {
        let plan = SeedPlan::new(3, 2800).unwrap();
        let (_, ledger) = run(&cfg(2800, 0), &CoinStream, 2800, &plan).unwrap();
        assert_eq!(ledger.cycles, 1);
        assert_eq!(ledger.samples_emitted, 2800);
    }

    #[test]
    fn pipeline_depth_adds_to_cycles() {
        let plan = SeedPlan::new(3, 1).unwrap();
        let (_, ledger) = run(&cfg(1, 3), &CoinStream, 5, &plan).unwrap();
        assert_eq!(ledger.cycles, 8);
    }

    #[test]
    fn collector_is_independent_of_parallelism() {
        // Same plan, same total samples: n_p only changes timing.
        let plan = SeedPlan::new(77, 4).unwrap();
        let (c4, l4) = run(&cfg(4, 0), &ByteStream, 1000, &plan).unwrap();
        let (c2, l2) = run(&cfg(2, 0), &ByteStream, 1000, &plan).unwrap();
        assert_eq!(c4, c2);
        assert_eq!(l4.cycles, 250);
        assert_eq!(l2.cycles, 500);
    }

    #[test]
    fn replay_is_bit_identical() {
        let plan = SeedPlan::new(5, 7).unwrap();
        let a = run(&cfg(7, 2), &ByteStream, 999, &plan).unwrap();
        let b = run(&cfg(7, 2), &ByteStream, 999, &plan).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn cycle_law_holds_for_random_shapes() {
        let mut s = crate::rng::LfsrState::from_seed(32, 0xC0FFEE).unwrap();
        for _ in 0..50 {
            let n_p = s.bits(6) + 1;
            let n_samples = s.bits(12) + 1;
            let depth = s.bits(4);
            let plan = SeedPlan::new(1, n_p.min(8)).unwrap();
            let (_, ledger) = run(&cfg(n_p, depth), &CoinStream, n_samples, &plan).unwrap();
            assert_eq!(ledger.cycles, n_samples.div_ceil(n_p) + depth);
        }
    }

    #[test]
    fn split_run_merges_to_single_run() {
        let plan = SeedPlan::new(11, 1).unwrap();
        let (whole, _) = run(&cfg(1, 0), &ByteStream, 500, &plan).unwrap();
        // Same stream split in two halves through a fresh collector.
        let kernel = ByteStream;
        let mut rng =
            RngBlock::from_seed(32, kernel.rng_lanes(), plan.derive(0).unwrap()).unwrap();
        let mut first = kernel.make_collector();
        let mut second = kernel.make_collector();
        for i in 0..500 {
            let sample = kernel.cycle(&mut (), &mut rng).unwrap();
            let target = if i < 250 { &mut first } else { &mut second };
            target.accumulate(&sample).unwrap();
        }
        assert_eq!(merge(&first, &second).unwrap(), whole);
    }

    #[test]
    fn merge_is_a_commutative_monoid() {
        let (a, _) = run(&cfg(2, 0), &ByteStream, 100, &SeedPlan::new(2, 2).unwrap()).unwrap();
        let (b, _) = run(&cfg(2, 0), &ByteStream, 80, &SeedPlan::new(9, 2).unwrap()).unwrap();
        let (c, _) = run(&cfg(2, 0), &ByteStream, 60, &SeedPlan::new(4, 2).unwrap()).unwrap();
        let empty = ByteStream.make_collector();
        assert_eq!(merge(&a, &empty).unwrap(), a);
        assert_eq!(merge(&a, &b).unwrap(), merge(&b, &a).unwrap());
        assert_eq!(
            merge(&merge(&a, &b).unwrap(), &c).unwrap(),
            merge(&a, &merge(&b, &c).unwrap()).unwrap()
        );
    }

    #[test]
    fn merge_rejects_geometry_mismatch() {
        let h16 = Collector::Histogram(HistogramCollector::new(16, 0.0, 1.0).unwrap());
        let h8 = Collector::Histogram(HistogramCollector::new(8, 0.0, 1.0).unwrap());
        assert!(matches!(merge(&h16, &h8), Err(Error::GeometryMismatch(_))));
        let counter = Collector::Counter(CounterCollector::default());
        assert!(matches!(merge(&h16, &counter), Err(Error::GeometryMismatch(_))));
    }

    #[test]
    fn accumulate_rejects_kind_mismatch() {
        let mut counter = Collector::Counter(CounterCollector::default());
        assert!(matches!(
            counter.accumulate(&Sample::Real(1.0)),
            Err(Error::CollectorMismatch(_))
        ));
    }

    #[test]
    fn histogram_conserves_mass() {
        let plan = SeedPlan::new(4, 3).unwrap();
        let (c, ledger) = run(&cfg(3, 0), &ByteStream, 12345, &plan).unwrap();
        assert_eq!(c.mass(), ledger.samples_emitted);
    }

    #[test]
    fn histogram_clamps_out_of_range() {
        let h = HistogramCollector::new(64, 0.0, 1.0).unwrap();
        assert_eq!(h.bin_index(3.5).unwrap(), 3);
        assert_eq!(h.bin_index(-2.0).unwrap(), 0);
        assert_eq!(h.bin_index(64.0 + 7.0).unwrap(), 63);
        assert!(matches!(
            h.bin_index(f64::NAN),
            Err(Error::NonFiniteValue(_))
        ));
    }

    #[test]
    fn tts_matches_linear_law() {
        let c = CoprocConfig::new(2800, 1e8, 0).unwrap();
        let tts = emulated_tts(&c, 2_800_000).unwrap();
        assert!((tts - 1e-5).abs() < 1e-18);
        // One full cycle when samples equal blocks.
        assert_eq!(emulated_tts(&c, 2800).unwrap(), 1.0 / 1e8);
    }

    #[test]
    fn tts_is_linear_in_samples() {
        let c = CoprocConfig::new(16, 2.5e8, 0).unwrap();
        for k in 1..6u64 {
            for m in 1..4u64 {
                let base = emulated_tts(&c, 16 * m).unwrap();
                let scaled = emulated_tts(&c, 16 * m * k).unwrap();
                assert!((scaled / base - k as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_scales_clock_and_blocks() {
        let c = CoprocConfig::new(100, 1e8, 0).unwrap();
        let base = emulated_tts(&c, 1_000_000).unwrap();
        assert_eq!(project_tts(&c, 1_000_000, 1.0, 1.0).unwrap(), base);
        let fast = project_tts(&c, 1_000_000, 10.0, 100.0).unwrap();
        assert!((fast / base - 1e-3).abs() < 1e-12);
        // Equal split of the same overall factor, up to block rounding.
        let split = project_tts(&c, 1_000_000, 31.6, 31.6).unwrap();
        assert!((split / (base / 1000.0) - 1.0).abs() < 0.02);
        assert!(project_tts(&c, 10, 0.5, 1.0).is_err());
    }

    #[test]
    fn run_rejects_degenerate_inputs() {
        let plan = SeedPlan::new(0, 1).unwrap();
        assert!(matches!(
            run(&cfg(1, 0), &CoinStream, 0, &plan),
            Err(Error::EmptyRun)
        ));
        assert!(matches!(
            run(&cfg(1, 0), &CoinStream, MAX_SAMPLES + 1, &plan),
            Err(Error::RunTooLarge(_))
        ));
    }
}
