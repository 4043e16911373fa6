//! Bootstrap resampling of a two-group dataset.
//!
//! A block redraws one value per cycle, with replacement: first `|a|` draws
//! from group A, then `|b|` from group B. After `|a| + |b|` cycles it emits
//! `mean(resample_a) - mean(resample_b)` into a histogram. The sample count
//! of a run counts individual redraws, one per block per cycle; finished
//! statistics are rarer by the factor `draws_per_statistic`.

use crate::coproc::{Collector, HistogramCollector, Kernel, Sample};
use crate::error::{Error, Result};
use crate::rng::RngBlock;

/// Bits per index draw; `floor(u * size)` at this resolution has a bias
/// below 2^-10 per draw for the group sizes this workload sees.
pub const INDEX_BITS: u32 = 18;

/// `floor(u * size)` for `u = k / 2^INDEX_BITS`, computed exactly in
/// integer arithmetic.
#[inline]
pub fn index_from_bits(k: u64, size: usize) -> usize {
    debug_assert!(size >= 1 && (size as u64) < (1 << 32));
    ((k * size as u64) >> INDEX_BITS) as usize
}

/// Uniform index in `[0, size)` from one cross-lane word.
#[inline]
pub fn draw_index(rng: &mut RngBlock, size: usize) -> usize {
    index_from_bits(rng.word(0..INDEX_BITS as usize), size)
}

/// The two-group dataset and the externally configured histogram readout.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapSpec {
    group_a: Vec<f64>,
    group_b: Vec<f64>,
    bin_count: usize,
    bin_lo: f64,
    bin_width: f64,
}

impl BootstrapSpec {
    pub fn new(
        group_a: Vec<f64>,
        group_b: Vec<f64>,
        bin_count: usize,
        bin_lo: f64,
        bin_width: f64,
    ) -> Result<Self> {
        if group_a.is_empty() {
            return Err(Error::EmptyGroup("a"));
        }
        if group_b.is_empty() {
            return Err(Error::EmptyGroup("b"));
        }
        for &v in group_a.iter().chain(group_b.iter()) {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(v));
            }
        }
        // Validates the bin geometry.
        HistogramCollector::new(bin_count, bin_lo, bin_width)?;
        Ok(Self {
            group_a,
            group_b,
            bin_count,
            bin_lo,
            bin_width,
        })
    }

    pub fn group_a(&self) -> &[f64] {
        &self.group_a
    }

    pub fn group_b(&self) -> &[f64] {
        &self.group_b
    }

    /// Redraws consumed per emitted statistic: `|a| + |b|`.
    pub fn draws_per_statistic(&self) -> u64 {
        (self.group_a.len() + self.group_b.len()) as u64
    }

    /// Histogram bin for a statistic value (clamped at the edges).
    pub fn bin_value(&self, v: f64) -> Result<usize> {
        HistogramCollector::new(self.bin_count, self.bin_lo, self.bin_width)
            .expect("validated at construction")
            .bin_index(v)
    }

    /// The statistic for explicit resample indices; the deterministic replay
    /// form of the sampled path.
    pub fn statistic_from_indices(&self, idx_a: &[usize], idx_b: &[usize]) -> f64 {
        let sum_a: f64 = idx_a.iter().map(|&i| self.group_a[i]).sum();
        let sum_b: f64 = idx_b.iter().map(|&i| self.group_b[i]).sum();
        sum_a / idx_a.len() as f64 - sum_b / idx_b.len() as f64
    }
}

/// In-flight resample accumulator for one block.
#[derive(Debug, Clone, Copy, Default)]
pub struct BootstrapBlock {
    sum_a: f64,
    sum_b: f64,
    pos: u64,
}

/// One redraw cycle; emits the finished statistic every
/// `draws_per_statistic` cycles.
fn bootstrap_cycle(spec: &BootstrapSpec, block: &mut BootstrapBlock, rng: &mut RngBlock) -> Option<f64> {
    let a_len = spec.group_a.len() as u64;
    if block.pos < a_len {
        block.sum_a += spec.group_a[draw_index(rng, spec.group_a.len())];
    } else {
        block.sum_b += spec.group_b[draw_index(rng, spec.group_b.len())];
    }
    block.pos += 1;
    if block.pos == spec.draws_per_statistic() {
        let stat = block.sum_a / spec.group_a.len() as f64 - block.sum_b / spec.group_b.len() as f64;
        *block = BootstrapBlock::default();
        Some(stat)
    } else {
        None
    }
}

/// Draws one complete bootstrap statistic from the stream.
pub fn bootstrap_statistic(spec: &BootstrapSpec, rng: &mut RngBlock) -> f64 {
    let mut block = BootstrapBlock::default();
    loop {
        if let Some(stat) = bootstrap_cycle(spec, &mut block, rng) {
            return stat;
        }
    }
}

/// The bootstrap workload; serial mean per block, many blocks in parallel.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapKernel {
    spec: BootstrapSpec,
}

impl BootstrapKernel {
    pub fn new(spec: BootstrapSpec) -> Self {
        Self { spec }
    }

    pub fn spec(&self) -> &BootstrapSpec {
        &self.spec
    }
}

impl Kernel for BootstrapKernel {
    type Block = BootstrapBlock;

    fn rng_lanes(&self) -> usize {
        INDEX_BITS as usize
    }

    fn make_block(&self, _: u64) -> BootstrapBlock {
        BootstrapBlock::default()
    }

    fn make_collector(&self) -> Collector {
        Collector::Histogram(
            HistogramCollector::new(self.spec.bin_count, self.spec.bin_lo, self.spec.bin_width)
                .expect("validated at construction"),
        )
    }

    fn cycle(&self, block: &mut BootstrapBlock, rng: &mut RngBlock) -> Option<Sample> {
        bootstrap_cycle(&self.spec, block, rng).map(Sample::Real)
    }
}
