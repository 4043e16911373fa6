//! Independent brute-force references.
//!
//! Every statistical claim made by a kernel is pinned at desk scale by an
//! exhaustive enumeration in this module. The oracles share no code with the
//! kernels they check and are pure functions of their inputs, so results can
//! be frozen as golden files keyed by an input digest.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::kernels::bayes::BayesNetwork;
use crate::kernels::knapsack::KnapsackInstance;

/// 64-bit FNV-1a over a canonical byte encoding; used to key golden files.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Hex form of [`fnv1a64`].
pub fn digest_hex(bytes: &[u8]) -> String {
    format!("{:016x}", fnv1a64(bytes))
}

/// One frozen oracle result: what was computed, over which input, and how
/// many cases the enumeration visited.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub oracle: String,
    pub input_digest: String,
    pub enumeration_size: u64,
    pub values: Value,
}

impl OracleReport {
    pub fn new(oracle: &str, input: &str, enumeration_size: u64, values: Value) -> Self {
        Self {
            oracle: oracle.to_string(),
            input_digest: digest_hex(input.as_bytes()),
            enumeration_size,
            values,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Exact number of grid points (x, y) in [0, 2^bits)^2 with
/// x^2 + y^2 < (2^bits)^2, by full enumeration.
pub fn pi_lattice_count(bits: u32) -> Result<u64> {
    if bits == 0 || bits > 12 {
        return Err(Error::EnumerationTooLarge(1u128 << (2 * bits.max(13))));
    }
    let side = 1u64 << bits;
    let r2 = side * side;
    let mut count = 0u64;
    for x in 0..side {
        let x2 = x * x;
        for y in 0..side {
            if x2 + y * y < r2 {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// [`pi_lattice_count`] packaged as a report.
pub fn pi_lattice_report(bits: u32) -> Result<OracleReport> {
    let count = pi_lattice_count(bits)?;
    Ok(OracleReport::new(
        "pi_lattice_count",
        &format!("bits={bits}"),
        1u64 << (2 * bits),
        serde_json::json!({ "bits": bits, "inside": count }),
    ))
}

/// Exact distribution of `mean(resample_a) - mean(resample_b)` over all
/// equally likely with-replacement redraws.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapPmf {
    /// (statistic value, probability), sorted by value.
    pub atoms: Vec<(f64, f64)>,
    /// Number of enumerated resample pairs.
    pub cases: u64,
}

impl BootstrapPmf {
    /// Probability of an exact atom value, 0 if absent.
    pub fn prob(&self, v: f64) -> f64 {
        self.atoms
            .iter()
            .find(|(a, _)| *a == v)
            .map(|(_, p)| *p)
            .unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, p)| p).sum()
    }
}

/// All `len^len` resample means of one group, as (mean, count) pairs.
///
/// Sums run left to right in draw order, matching the sampling path's
/// accumulation, so atom values are bit-comparable for exactly-representable
/// data.
fn group_mean_counts(group: &[f64]) -> Vec<(f64, u64)> {
    let len = group.len();
    let mut counts: Vec<(f64, u64)> = Vec::new();
    let mut indices = vec![0usize; len];
    loop {
        let mut sum = 0.0;
        for &i in &indices {
            sum += group[i];
        }
        let mean = sum / len as f64;
        match counts.iter_mut().find(|(v, _)| *v == mean) {
            Some((_, c)) => *c += 1,
            None => counts.push((mean, 1)),
        }
        // Odometer increment over base-`len` index tuples.
        let mut pos = len;
        loop {
            if pos == 0 {
                return counts;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < len {
                break;
            }
            indices[pos] = 0;
        }
    }
}

/// Exact probability mass function of the bootstrap mean difference by full
/// enumeration of every resample pair.
pub fn exact_bootstrap(group_a: &[f64], group_b: &[f64]) -> Result<BootstrapPmf> {
    if group_a.is_empty() {
        return Err(Error::EmptyGroup("a"));
    }
    if group_b.is_empty() {
        return Err(Error::EmptyGroup("b"));
    }
    let cases_a = (group_a.len() as u128).pow(group_a.len() as u32);
    let cases_b = (group_b.len() as u128).pow(group_b.len() as u32);
    let cases = cases_a * cases_b;
    if cases > 100_000_000 {
        return Err(Error::EnumerationTooLarge(cases));
    }
    let means_a = group_mean_counts(group_a);
    let means_b = group_mean_counts(group_b);
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let total = cases as f64;
    for &(ma, ca) in &means_a {
        for &(mb, cb) in &means_b {
            let v = ma - mb;
            let p = (ca as f64 * cb as f64) / total;
            match atoms.iter_mut().find(|(a, _)| *a == v) {
                Some((_, acc)) => *acc += p,
                None => atoms.push((v, p)),
            }
        }
    }
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(BootstrapPmf {
        atoms,
        cases: cases as u64,
    })
}

/// Exact expectations for a layered bipolar network, by enumerating every
/// founder assignment and every child parent-choice outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBayes {
    n_nodes: usize,
    cases: u64,
    sums: Vec<i64>,
    prod_sums: Vec<i64>,
}

impl ExactBayes {
    /// Enumerates the network. Founders and children each contribute one
    /// fair binary choice; networks with more than 20 choice points are
    /// rejected.
    pub fn enumerate(net: &BayesNetwork) -> Result<Self> {
        let n = net.len();
        let founders: Vec<usize> = (0..n).filter(|&i| net.parents(i).is_none()).collect();
        let children: Vec<usize> = (0..n).filter(|&i| net.parents(i).is_some()).collect();
        let choice_points = founders.len() + children.len();
        if choice_points > 20 {
            return Err(Error::EnumerationTooLarge(1u128 << choice_points));
        }
        let cases = 1u64 << choice_points;
        let mut sums = vec![0i64; n];
        let mut prod_sums = vec![0i64; n * (n + 1) / 2];
        let mut values = vec![0i8; n];
        for assignment in 0..cases {
            for (bit, &node) in founders.iter().enumerate() {
                values[node] = if assignment >> bit & 1 == 1 { 1 } else { -1 };
            }
            for (bit, &node) in children.iter().enumerate() {
                let (mother, father) = net.parents(node).unwrap();
                let take_mother = assignment >> (founders.len() + bit) & 1 == 1;
                values[node] = if take_mother {
                    values[mother]
                } else {
                    values[father]
                };
            }
            let mut idx = 0;
            for i in 0..n {
                sums[i] += values[i] as i64;
                for j in i..n {
                    prod_sums[idx] += (values[i] * values[j]) as i64;
                    idx += 1;
                }
            }
        }
        Ok(Self {
            n_nodes: n,
            cases,
            sums,
            prod_sums,
        })
    }

    pub fn cases(&self) -> u64 {
        self.cases
    }

    fn tri_index(&self, i: usize, j: usize) -> usize {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        lo * self.n_nodes - lo * (lo + 1) / 2 + lo + (hi - lo)
    }

    /// Exact `E[s_i]`. Integer sums over a power-of-two case count divide
    /// exactly in double precision.
    pub fn mean(&self, i: usize) -> Result<f64> {
        if i >= self.n_nodes {
            return Err(Error::UnknownNode(i));
        }
        Ok(self.sums[i] as f64 / self.cases as f64)
    }

    /// Exact `E[s_i * s_j]`.
    pub fn correlation(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.n_nodes {
            return Err(Error::UnknownNode(i));
        }
        if j >= self.n_nodes {
            return Err(Error::UnknownNode(j));
        }
        Ok(self.prod_sums[self.tri_index(i, j)] as f64 / self.cases as f64)
    }

    /// Exact joint distribution over a subset, indexed by the bitmask with
    /// bit `k` set when node `subset[k]` is +1. Requires a second
    /// enumeration pass.
    pub fn marginal(&self, net: &BayesNetwork, subset: &[usize]) -> Result<Vec<f64>> {
        if subset.len() > 20 {
            return Err(Error::SubsetTooLarge(subset.len()));
        }
        for &i in subset {
            if i >= self.n_nodes {
                return Err(Error::UnknownNode(i));
            }
        }
        let n = net.len();
        let founders: Vec<usize> = (0..n).filter(|&i| net.parents(i).is_none()).collect();
        let children: Vec<usize> = (0..n).filter(|&i| net.parents(i).is_some()).collect();
        let mut counts = vec![0u64; 1 << subset.len()];
        let mut values = vec![0i8; n];
        for assignment in 0..self.cases {
            for (bit, &node) in founders.iter().enumerate() {
                values[node] = if assignment >> bit & 1 == 1 { 1 } else { -1 };
            }
            for (bit, &node) in children.iter().enumerate() {
                let (mother, father) = net.parents(node).unwrap();
                let take_mother = assignment >> (founders.len() + bit) & 1 == 1;
                values[node] = if take_mother {
                    values[mother]
                } else {
                    values[father]
                };
            }
            let mut idx = 0usize;
            for (k, &node) in subset.iter().enumerate() {
                if values[node] == 1 {
                    idx |= 1 << k;
                }
            }
            counts[idx] += 1;
        }
        Ok(counts
            .iter()
            .map(|&c| c as f64 / self.cases as f64)
            .collect())
    }
}

/// Exact 0/1 knapsack optimum by the classic O(n * capacity) table.
pub fn knapsack_dp(instance: &KnapsackInstance) -> Result<u64> {
    let n = instance.len() as u128;
    let capacity = instance.capacity();
    let cells = n * (capacity as u128 + 1);
    if cells > 1_000_000_000 {
        return Err(Error::DpTableTooLarge(cells));
    }
    let cap = capacity as usize;
    let mut best = vec![0u64; cap + 1];
    for i in 0..instance.len() {
        let w = instance.weight(i) as usize;
        let v = instance.value(i) as u64;
        if w > cap {
            continue;
        }
        for budget in (w..=cap).rev() {
            let candidate = best[budget - w] + v;
            if candidate > best[budget] {
                best[budget] = candidate;
            }
        }
    }
    Ok(best[cap])
}

/// Exact 0/1 knapsack optimum by brute force over all subsets (n <= 20).
pub fn knapsack_exhaustive(instance: &KnapsackInstance) -> Result<u64> {
    let n = instance.len();
    if n > 20 {
        return Err(Error::ExhaustiveTooLarge(n));
    }
    let mut best = 0u64;
    for mask in 0u32..1u32 << n {
        let mut weight = 0u64;
        let mut value = 0u64;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                weight += instance.weight(i) as u64;
                value += instance.value(i) as u64;
            }
        }
        if weight <= instance.capacity() && value > best {
            best = value;
        }
    }
    Ok(best)
}
