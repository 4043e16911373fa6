//! Deterministic random-number sources.
//!
//! Two generation paths feed the kernels: a bit-exact linear-feedback shift
//! register (the emulation path) and the tanh p-bit behavioral model (the
//! device path). A [`SeedPlan`] derives decorrelated per-block seeds from one
//! master seed, so a whole multi-block run replays from a single integer.

use crate::error::{Error, Result};

/// Shipped maximal-length tap sets, one per supported register width.
///
/// Each entry lists the exponents of a primitive characteristic polynomial
/// `x^w + x^t1 + ... + 1` (the leading exponent `w` is included). A tap `t`
/// XORs register bit `t % width` into the feedback, with bit 0 the output
/// end, so independent implementations of the step rule below are
/// bit-compatible with this one.
pub const TAP_TABLE: &[(u32, &[u32])] = &[
    (4, &[4, 3]),
    (8, &[8, 6, 5, 4]),
    (16, &[16, 15, 13, 4]),
    (18, &[18, 11]),
    (24, &[24, 23, 22, 17]),
    (32, &[32, 22, 2, 1]),
    (64, &[64, 63, 61, 60]),
];

/// Tap set for `width`, if the table ships one.
pub fn taps_for_width(width: u32) -> Option<&'static [u32]> {
    TAP_TABLE
        .iter()
        .find(|(w, _)| *w == width)
        .map(|(_, taps)| *taps)
}

fn feedback_mask(width: u32, taps: &[u32]) -> u64 {
    taps.iter().fold(0u64, |m, &t| m | 1u64 << (t % width))
}

fn width_mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// A Fibonacci-configuration LFSR over one of the shipped tap sets.
///
/// One step emits the bit at the output end (bit 0), shifts the register one
/// position toward it, and inserts the XOR of the tapped bits at the vacated
/// top position. With the shipped primitive tap sets the nonzero states form
/// a single cycle of period `2^width - 1`; the all-zero state is absorbing
/// and rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LfsrState {
    width: u32,
    mask: u64,
    state: u64,
}

impl LfsrState {
    /// Register of `width` bits starting in `state`.
    pub fn new(width: u32, state: u64) -> Result<Self> {
        let taps = taps_for_width(width).ok_or(Error::UnsupportedLfsrWidth(width))?;
        if state == 0 {
            return Err(Error::InvalidLfsrState {
                width,
                state,
                reason: "all-zero state is absorbing",
            });
        }
        if width < 64 && state >= 1u64 << width {
            return Err(Error::InvalidLfsrState {
                width,
                state,
                reason: "state wider than the register",
            });
        }
        Ok(Self {
            width,
            mask: feedback_mask(width, taps),
            state,
        })
    }

    /// Register seeded from an arbitrary 64-bit value: the seed is truncated
    /// to `width` bits and a zero result is remapped to 1.
    pub fn from_seed(width: u32, seed: u64) -> Result<Self> {
        let truncated = seed & width_mask(width);
        Self::new(width, if truncated == 0 { 1 } else { truncated })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    /// Advances one position and returns the emitted bit.
    #[inline]
    pub fn step(&mut self) -> u64 {
        let out = self.state & 1;
        let fb = ((self.state & self.mask).count_ones() & 1) as u64;
        self.state = (self.state >> 1) | (fb << (self.width - 1));
        out
    }

    /// Draws `nbits` consecutive bits, assembled most-significant-bit first.
    ///
    /// Panics if `nbits` is 0 or exceeds 64.
    #[inline]
    pub fn bits(&mut self, nbits: u32) -> u64 {
        assert!((1..=64).contains(&nbits), "nbits must be in 1..=64");
        let mut k = 0u64;
        for _ in 0..nbits {
            k = (k << 1) | self.step();
        }
        k
    }

    /// Draws an `nbits`-bit integer `k` and returns `k / 2^nbits` in [0, 1).
    ///
    /// Panics if `nbits` is 0 or exceeds 64.
    #[inline]
    pub fn uniform(&mut self, nbits: u32) -> f64 {
        fraction_from_bits(self.bits(nbits), nbits)
    }
}

/// `k / 2^nbits` as a double.
#[inline]
pub(crate) fn fraction_from_bits(k: u64, nbits: u32) -> f64 {
    k as f64 / 2f64.powi(nbits as i32)
}

/// The N-bit RNG block of the architecture: an array of independently
/// seeded 1-bit LFSR lanes, stepped one bit per lane per cycle.
///
/// Multi-bit words are assembled across lanes rather than from consecutive
/// steps of one register: consecutive windows of a single m-sequence are
/// linearly dependent and visibly inflate Monte Carlo variance, while
/// parallel lanes at independent phases have the flat autocorrelation of
/// the underlying sequence. The hardware analog is an array of p-bits
/// emitting one bit each per clock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngBlock {
    lanes: Vec<LfsrState>,
}

impl RngBlock {
    /// `lane_count` lanes of `width`-bit registers; lane seeds derive from
    /// `block_seed`.
    pub fn from_seed(width: u32, lane_count: usize, block_seed: u64) -> Result<Self> {
        let plan = SeedPlan::new(block_seed, lane_count as u64)?;
        let lanes = (0..lane_count)
            .map(|k| LfsrState::from_seed(width, plan.derive(k as u64)?))
            .collect::<Result<_>>()?;
        Ok(Self { lanes })
    }

    pub fn lane_count(&self) -> usize {
        self.lanes.len()
    }

    /// One bit from one lane.
    #[inline]
    pub fn bit(&mut self, lane: usize) -> u64 {
        self.lanes[lane].step()
    }

    /// One step of every lane in `range`, assembled with the first lane as
    /// the most significant bit.
    #[inline]
    pub fn word(&mut self, range: std::ops::Range<usize>) -> u64 {
        assert!(range.end <= self.lanes.len() && !range.is_empty() && range.len() <= 64);
        let mut k = 0u64;
        for lane in range {
            k = (k << 1) | self.lanes[lane].step();
        }
        k
    }

    /// [`Self::word`] scaled to [0, 1).
    #[inline]
    pub fn uniform(&mut self, range: std::ops::Range<usize>) -> f64 {
        let nbits = range.len() as u32;
        fraction_from_bits(self.word(range), nbits)
    }

    /// `nbits` consecutive steps of a single lane, MSB first: the one-unit
    /// serial draw (a lone tunable p-bit sampled over `nbits` clocks).
    #[inline]
    pub fn window(&mut self, lane: usize, nbits: u32) -> u64 {
        self.lanes[lane].bits(nbits)
    }

    /// [`Self::window`] scaled to [0, 1).
    #[inline]
    pub fn uniform_window(&mut self, lane: usize, nbits: u32) -> f64 {
        fraction_from_bits(self.window(lane, nbits), nbits)
    }
}

/// Tunable binary stochastic unit: the mean of its bipolar output follows
/// `tanh(v_in / v0)`, i.e. `P(+1) = (1 + tanh(v_in / v0)) / 2`.
///
/// Outputs are in {-1, +1}, the supply-normalized form of the device's
/// bipolar output levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PBitModel {
    v0: f64,
}

impl PBitModel {
    pub fn new(v0: f64) -> Result<Self> {
        if !(v0.is_finite() && v0 > 0.0) {
            return Err(Error::InvalidReferenceVoltage(v0));
        }
        Ok(Self { v0 })
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// `P(+1)` for a given input bias.
    #[inline]
    pub fn prob_plus(&self, v_in: f64) -> f64 {
        (1.0 + (v_in / self.v0).tanh()) / 2.0
    }

    /// One bipolar draw: +1 iff `u < P(+1 | v_in)`.
    ///
    /// `u` is expected from an LFSR uniform so the whole stack stays
    /// deterministic. Panics on non-finite `v_in`.
    #[inline]
    pub fn sample(&self, v_in: f64, u: f64) -> i8 {
        assert!(v_in.is_finite(), "p-bit input must be finite");
        if u < self.prob_plus(v_in) {
            1
        } else {
            -1
        }
    }
}

impl Default for PBitModel {
    /// Reference voltage 1.0; no physical device value is assumed.
    fn default() -> Self {
        Self { v0: 1.0 }
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derives decorrelated per-block seeds from one master seed.
///
/// Sequential seeds would start neighboring LFSRs in overlapping stretches
/// of the same cycle; each block instead gets an avalanche-mixed seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedPlan {
    master_seed: u64,
    block_count: u64,
}

impl SeedPlan {
    pub fn new(master_seed: u64, block_count: u64) -> Result<Self> {
        if block_count == 0 {
            return Err(Error::InvalidConfig(
                "seed plan needs at least one block".into(),
            ));
        }
        Ok(Self {
            master_seed,
            block_count,
        })
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn block_count(&self) -> u64 {
        self.block_count
    }

    /// Seed for block `block_index`; pure in `(master_seed, block_index)`.
    ///
    /// Applies a 64-bit avalanche mixer to
    /// `master_seed + (block_index + 1) * 0x9E3779B97F4A7C15`; a zero output
    /// is remapped to 0x1 so LFSR states stay legal.
    pub fn derive(&self, block_index: u64) -> Result<u64> {
        if block_index >= self.block_count {
            return Err(Error::BlockIndexOutOfRange {
                index: block_index,
                count: self.block_count,
            });
        }
        let mut x = self
            .master_seed
            .wrapping_add(block_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        x ^= x >> 30;
        x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x ^= x >> 27;
        x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^= x >> 31;
        if x == 0 {
            x = 0x1;
        }
        Ok(x)
    }
}
