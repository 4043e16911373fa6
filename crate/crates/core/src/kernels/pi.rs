//! Monte Carlo estimation of pi.
//!
//! Each cycle draws one coordinate pair from the unit square as two
//! fixed-point integers and tests it against the inscribed quarter circle in
//! exact integer arithmetic; the estimate is `4 * N_in / N_all`.

use crate::coproc::{Collector, CounterCollector, Kernel, Sample};
use crate::error::{Error, Result};
use crate::rng::RngBlock;

/// Strict inside test: `x^2 + y^2 < (2^bits)^2` over integer coordinates.
///
/// Points exactly on the arc count as outside; the lattice-count oracle pins
/// the resulting counts either way.
#[inline]
pub fn point_inside(x: u64, y: u64, bits: u32) -> bool {
    debug_assert!((1..=31).contains(&bits));
    x * x + y * y < 1u64 << (2 * bits)
}

/// Tallies for one sampling block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiState {
    coord_bits: u32,
    n_in: u64,
    n_all: u64,
}

impl PiState {
    pub fn new(coord_bits: u32) -> Result<Self> {
        if coord_bits == 0 || coord_bits > 31 {
            return Err(Error::InvalidConfig(format!(
                "coordinate width must be in 1..=31 bits, got {coord_bits}"
            )));
        }
        Ok(Self {
            coord_bits,
            n_in: 0,
            n_all: 0,
        })
    }

    /// Processes one coordinate pair (x from the low lanes, y from the
    /// high lanes, one bit per lane); returns whether it landed inside.
    #[inline]
    pub fn cycle(&mut self, rng: &mut RngBlock) -> bool {
        let b = self.coord_bits as usize;
        let x = rng.word(0..b);
        let y = rng.word(b..2 * b);
        let inside = point_inside(x, y, self.coord_bits);
        self.n_all += 1;
        if inside {
            self.n_in += 1;
        }
        inside
    }

    pub fn n_in(&self) -> u64 {
        self.n_in
    }

    pub fn n_all(&self) -> u64 {
        self.n_all
    }

    pub fn estimate(&self) -> Result<f64> {
        pi_estimate(self.n_in, self.n_all)
    }
}

/// `4 * n_in / n_all`.
pub fn pi_estimate(n_in: u64, n_all: u64) -> Result<f64> {
    if n_all == 0 {
        return Err(Error::NoSamples);
    }
    Ok(4.0 * n_in as f64 / n_all as f64)
}

/// The pi workload: one point test per block per cycle into a counter.
#[derive(Debug, Clone, Copy)]
pub struct PiKernel {
    coord_bits: u32,
}

impl PiKernel {
    pub fn new(coord_bits: u32) -> Result<Self> {
        PiState::new(coord_bits)?;
        Ok(Self { coord_bits })
    }

    pub fn coord_bits(&self) -> u32 {
        self.coord_bits
    }
}

impl Default for PiKernel {
    /// 18-bit coordinates.
    fn default() -> Self {
        Self { coord_bits: 18 }
    }
}

impl Kernel for PiKernel {
    type Block = PiState;

    fn rng_lanes(&self) -> usize {
        2 * self.coord_bits as usize
    }

    fn make_block(&self, _: u64) -> PiState {
        PiState::new(self.coord_bits).expect("validated at construction")
    }

    fn make_collector(&self) -> Collector {
        Collector::Counter(CounterCollector::default())
    }

    fn cycle(&self, block: &mut PiState, rng: &mut RngBlock) -> Option<Sample> {
        Some(Sample::Bit(block.cycle(rng)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coproc::{run, CoprocConfig};
    use crate::oracles::pi_lattice_count;
    use crate::rng::SeedPlan;

    #[test]
    fn origin_is_inside_and_far_corner_is_outside() {
        assert!(point_inside(0, 0, 18));
        let max = (1u64 << 18) - 1;
        assert!(!point_inside(max, max, 18));
    }

    #[test]
    fn inside_test_matches_lattice_oracle_at_8_bits() {
        let mut inside = 0u64;
        for x in 0..256u64 {
            for y in 0..256u64 {
                if point_inside(x, y, 8) {
                    inside += 1;
                }
            }
        }
        assert_eq!(inside, pi_lattice_count(8).unwrap());
        // Frozen golden value from the pre-build enumeration.
        assert_eq!(inside, 51_720);
    }

    #[test]
    fn estimate_arithmetic() {
        assert_eq!(pi_estimate(0, 1000).unwrap(), 0.0);
        assert_eq!(pi_estimate(1000, 1000).unwrap(), 4.0);
        #[allow(clippy::approx_constant)]
        let expected = 3.14;
        assert_eq!(pi_estimate(785, 1000).unwrap(), expected);
        assert!(matches!(pi_estimate(0, 0), Err(Error::NoSamples)));
    }

    #[test]
    fn rejects_bad_coordinate_widths() {
        assert!(PiKernel::new(0).is_err());
        assert!(PiKernel::new(32).is_err());
        assert!(PiKernel::new(18).is_ok());
    }

    #[test]
    fn block_tallies_track_samples() {
        let mut state = PiState::new(18).unwrap();
        let mut rng = RngBlock::from_seed(32, 36, 9).unwrap();
        for _ in 0..1000 {
            state.cycle(&mut rng);
        }
        assert_eq!(state.n_all(), 1000);
        assert!(state.n_in() <= state.n_all());
    }

    #[test]
    fn parallel_run_estimates_pi() {
        let config = CoprocConfig::new(2800, 1e8, 0).unwrap();
        let plan = SeedPlan::new(0, 2800).unwrap();
        let (collector, ledger) = run(&config, &PiKernel::default(), 1_000_000, &plan).unwrap();
        let Collector::Counter(c) = collector else {
            panic!("pi kernel fills a counter")
        };
        assert_eq!(c.total, 1_000_000);
        assert_eq!(ledger.cycles, 1_000_000u64.div_ceil(2800));
        let estimate = pi_estimate(c.hits, c.total).unwrap();
        // One standard deviation of the estimate: 4 sigma / sqrt(N) with
        // sigma = sqrt(pi (1 - pi/4) / 4).
        assert!((estimate - std::f64::consts::PI).abs() < 1.65e-3);
    }
}
