//! Forward sampling of layered Bayesian networks.
//!
//! Every node is one tunable binary stochastic unit. Founders draw unbiased;
//! each child copies its mother with probability 1/2 and its father
//! otherwise. The joint sample over all nodes is emitted each cycle, and
//! expectations (relatedness correlations, subset marginals) are read off
//! the collector directly: observed nodes are measured without integrating
//! over the unobserved ones.

use crate::coproc::{Collector, CorrelationCollector, Kernel, Sample};
use crate::error::{Error, Result};
use crate::rng::{PBitModel, RngBlock};

/// Bits per node decision; both the founder draw and the parent choice
/// consume one uniform at this resolution, so probability 1/2 is exact.
/// Each node owns one RNG lane, the emulation stand-in for its p-bit.
pub const NODE_BITS: u32 = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BayesNode {
    pub layer: usize,
    /// `(mother, father)` ids in an earlier layer; `None` for founders.
    pub parents: Option<(usize, usize)>,
}

/// A layered DAG of binary nodes in topological id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BayesNetwork {
    nodes: Vec<BayesNode>,
    layer_sizes: Vec<usize>,
}

impl BayesNetwork {
    /// Validates layering: parents must exist, sit in strictly earlier
    /// layers, and carry smaller ids, which makes id order topological.
    pub fn new(nodes: Vec<BayesNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidNetwork("network has no nodes".into()));
        }
        let mut layer_sizes: Vec<usize> = Vec::new();
        for (id, node) in nodes.iter().enumerate() {
            if node.layer >= layer_sizes.len() {
                layer_sizes.resize(node.layer + 1, 0);
            }
            layer_sizes[node.layer] += 1;
            if let Some((m, f)) = node.parents {
                for p in [m, f] {
                    if p >= nodes.len() {
                        return Err(Error::InvalidNetwork(format!(
                            "node {id} references missing parent {p}"
                        )));
                    }
                    if p >= id || nodes[p].layer >= node.layer {
                        return Err(Error::InvalidNetwork(format!(
                            "node {id} must have parents in earlier layers"
                        )));
                    }
                }
            } else if node.layer != 0 {
                return Err(Error::InvalidNetwork(format!(
                    "founder {id} must sit in layer 0"
                )));
            }
        }
        if layer_sizes.contains(&0) {
            return Err(Error::InvalidNetwork("empty layer".into()));
        }
        Ok(Self { nodes, layer_sizes })
    }

    /// The family-tree preset: layer `k` has `first_layer / 2^k` nodes and
    /// consecutive disjoint pairs parent one node of the next layer, down to
    /// a single node. `first_layer` must be a power of two with
    /// `generations = log2(first_layer) + 1`.
    pub fn family_tree(generations: u32, first_layer: usize) -> Result<Self> {
        if !first_layer.is_power_of_two() {
            return Err(Error::InvalidNetwork(format!(
                "first layer must be a power of two, got {first_layer}"
            )));
        }
        if generations as usize != first_layer.trailing_zeros() as usize + 1 {
            return Err(Error::InvalidNetwork(format!(
                "{first_layer} founders need log2({first_layer}) + 1 generations, got {generations}"
            )));
        }
        let mut nodes = Vec::with_capacity(2 * first_layer - 1);
        let mut layer_start = 0usize;
        let mut size = first_layer;
        for layer in 0..generations as usize {
            for i in 0..size {
                let parents = if layer == 0 {
                    None
                } else {
                    Some((layer_start - 2 * size + 2 * i, layer_start - 2 * size + 2 * i + 1))
                };
                nodes.push(BayesNode { layer, parents });
            }
            layer_start += size;
            size /= 2;
        }
        Self::new(nodes)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn layer_of(&self, id: usize) -> Option<usize> {
        self.nodes.get(id).map(|n| n.layer)
    }

    pub fn parents(&self, id: usize) -> Option<(usize, usize)> {
        self.nodes.get(id).and_then(|n| n.parents)
    }

    /// Id of node `index` within `layer`, counting layers from the founders.
    pub fn node_id(&self, layer: usize, index: usize) -> Option<usize> {
        if layer >= self.layer_sizes.len() || index >= self.layer_sizes[layer] {
            return None;
        }
        Some(self.layer_sizes[..layer].iter().sum::<usize>() + index)
    }

    /// One topological forward sample over all nodes, into `values`.
    /// Node `k` draws from its own lane `k`.
    pub fn sample_into(&self, pbit: &PBitModel, rng: &mut RngBlock, values: &mut Vec<i8>) {
        values.clear();
        for (k, node) in self.nodes.iter().enumerate() {
            let v = match node.parents {
                None => pbit.sample(0.0, rng.uniform_window(k, NODE_BITS)),
                Some((mother, father)) => {
                    if pbit.sample(0.0, rng.uniform_window(k, NODE_BITS)) == 1 {
                        values[mother]
                    } else {
                        values[father]
                    }
                }
            };
            values.push(v);
        }
    }

    /// One topological forward sample, allocating the output.
    pub fn sample(&self, pbit: &PBitModel, rng: &mut RngBlock) -> Vec<i8> {
        let mut values = Vec::with_capacity(self.len());
        self.sample_into(pbit, rng, &mut values);
        values
    }
}

/// The Bayesian-network workload: one network copy per block, one joint
/// sample per cycle, layers pipelined in series.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesKernel {
    net: BayesNetwork,
    pbit: PBitModel,
    subsets: Vec<Vec<usize>>,
}

impl BayesKernel {
    /// `subsets` configures which joint marginals the collector tabulates.
    pub fn new(net: BayesNetwork, subsets: Vec<Vec<usize>>) -> Result<Self> {
        // Validate subsets against the network up front.
        CorrelationCollector::new(net.len(), &subsets)?;
        Ok(Self {
            net,
            pbit: PBitModel::default(),
            subsets,
        })
    }

    pub fn network(&self) -> &BayesNetwork {
        &self.net
    }
}

impl Kernel for BayesKernel {
    type Block = Vec<i8>;

    fn rng_lanes(&self) -> usize {
        self.net.len()
    }

    fn make_block(&self, _: u64) -> Vec<i8> {
        Vec::with_capacity(self.net.len())
    }

    fn make_collector(&self) -> Collector {
        Collector::Correlation(
            CorrelationCollector::new(self.net.len(), &self.subsets)
                .expect("validated at construction"),
        )
    }

    fn cycle(&self, block: &mut Vec<i8>, rng: &mut RngBlock) -> Option<Sample> {
        self.net.sample_into(&self.pbit, rng, block);
        Some(Sample::Joint(block.clone()))
    }

    /// One stage per layer beyond the founders.
    fn pipeline_depth(&self) -> u64 {
        self.net.layer_sizes().len() as u64 - 1
    }
}
