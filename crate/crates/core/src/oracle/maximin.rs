//! Taxicab partitions and maximin information over finite joint ranges.
//!
//! Two input-output pairs are taxicab connected when a chain of realized
//! pairs links them, each step sharing an input or an output. The number
//! of taxicab-isolated components of the optimal input range, per block
//! symbol, recovers the zero-error capacity — computed here by exhaustive
//! search over input ranges and cross-checked against the independent-set
//! route.

use super::codebook::max_codebook;
use super::confusability::build_confusability;
use super::patterns::{enumerate_supports_from, enumerate_value_patterns_from};
use super::{decode_word, Word};
use crate::caps::ResourceCaps;
use crate::channel::{ChannelKind, ChannelSpec, ChannelState};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// A finite joint range: the realized `(x, y)` pairs of two uncertain
/// variables, as opaque point ids.
#[derive(Debug, Clone, Default)]
pub struct JointRange {
    pub pairs: Vec<(u64, u64)>,
}

impl JointRange {
    pub fn new(pairs: Vec<(u64, u64)>) -> Self {
        Self { pairs }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The finest taxicab-isolated partition of the x-marginal.
#[derive(Debug, Clone)]
pub struct TaxicabPartition {
    /// Groups of x values, each group taxicab connected, distinct groups
    /// isolated; sorted for determinism.
    pub components: Vec<Vec<u64>>,
}

impl TaxicabPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Maximin information `I* = log_q(#components)`.
    pub fn i_star(&self, q: usize) -> f64 {
        (self.len() as f64).ln() / (q as f64).ln()
    }
}

/// Union-find over the points of the joint range: points sharing an x or
/// a y coordinate are merged, and the surviving classes partition the
/// x-marginal.
pub fn taxicab_partition(jr: &JointRange) -> Result<TaxicabPartition> {
    if jr.is_empty() {
        return Err(Error::InvalidArgument("empty joint range".into()));
    }
    let n = jr.pairs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    let mut by_x: HashMap<u64, usize> = HashMap::new();
    let mut by_y: HashMap<u64, usize> = HashMap::new();
    for (i, &(x, y)) in jr.pairs.iter().enumerate() {
        if let Some(&j) = by_x.get(&x) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        } else {
            by_x.insert(x, i);
        }
        if let Some(&j) = by_y.get(&y) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        } else {
            by_y.insert(y, i);
        }
    }
    let mut groups: HashMap<usize, Vec<u64>> = HashMap::new();
    let mut seen_x: std::collections::HashSet<u64> = std::collections::HashSet::new();
    for (i, &(x, _)) in jr.pairs.iter().enumerate() {
        if seen_x.insert(x) {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(x);
        }
    }
    let mut components: Vec<Vec<u64>> = groups
        .into_values()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    components.sort();
    Ok(TaxicabPartition { components })
}

/// The joint range of a block channel: `(input word, output word)` pairs
/// over the given input set and all noise admissible from the all-clear
/// state. Words are encoded as integers (outputs in base `q + 1` to cover
/// the erasure sentinel).
pub fn channel_joint_range(
    spec: &ChannelSpec,
    inputs: &[Word],
    block_len: usize,
) -> JointRange {
    let all_clear = ChannelState::all_clear(spec.n);
    let mut pairs = Vec::new();
    match spec.kind {
        ChannelKind::Nse => {
            let supports = enumerate_supports_from(spec, &all_clear, block_len);
            for x in inputs {
                let xc = super::encode_word(x, spec.q);
                for s in &supports {
                    let y: Word = x
                        .iter()
                        .zip(s)
                        .map(|(&sym, &e)| if e { spec.q as u8 } else { sym })
                        .collect();
                    pairs.push((xc, super::encode_word(&y, spec.q + 1)));
                }
            }
        }
        ChannelKind::Nss => {
            let patterns = enumerate_value_patterns_from(spec, &all_clear, block_len);
            for x in inputs {
                let xc = super::encode_word(x, spec.q);
                for p in &patterns {
                    let y: Word = x
                        .iter()
                        .zip(p)
                        .map(|(&sym, &e)| ((sym as usize + e as usize) % spec.q) as u8)
                        .collect();
                    pairs.push((xc, super::encode_word(&y, spec.q + 1)));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    JointRange::new(pairs)
}

/// The maximin route to the zero-error rate at one block length, with the
/// independent-set route alongside.
#[derive(Debug, Clone)]
pub struct MaximinPoint {
    pub block_len: usize,
    /// Max over nonempty input ranges of the number of taxicab components.
    pub max_components: usize,
    /// `I* = log_q(max_components)`.
    pub i_star: f64,
    /// `I* / block_len`.
    pub rate: f64,
    /// Size of the maximum codebook at the same block length.
    pub codebook_size: usize,
    /// Whether the two routes agree (`max_components == codebook_size`).
    pub agrees: bool,
}

/// For each block length `1..=max_block_len`, compute the maximin rate by
/// exhaustive search over input ranges (every nonempty subset of the
/// `q^block_len` input words) and compare with the maximum-independent-set
/// rate.
pub fn c0_via_maximin(
    spec: &ChannelSpec,
    max_block_len: usize,
    caps: &ResourceCaps,
) -> Result<Vec<MaximinPoint>> {
    let mut out = Vec::new();
    for block_len in 1..=max_block_len {
        let n_words = (spec.q as u128)
            .checked_pow(block_len as u32)
            .ok_or_else(|| Error::InvalidArgument("block too long".into()))?;
        if n_words > caps.maximin_words {
            return Err(Error::ResourceCap {
                what: "maximin input-range search",
                required: n_words,
                cap: caps.maximin_words,
            });
        }
        let n_words = n_words as usize;
        let words: Vec<Word> =
            (0..n_words as u64).map(|c| decode_word(c, spec.q, block_len)).collect();

        // Per-word point lists, computed once.
        let full = channel_joint_range(spec, &words, block_len);
        let mut points_of: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n_words];
        for &(x, y) in &full.pairs {
            // x encodes a word index below n_words.
            points_of[x as usize].push((x, y));
        }

        let mut max_components = 0;
        for mask in 1u64..(1 << n_words) {
            let mut pairs = Vec::new();
            for (w, pts) in points_of.iter().enumerate() {
                if mask >> w & 1 == 1 {
                    pairs.extend_from_slice(pts);
                }
            }
            let partition = taxicab_partition(&JointRange::new(pairs))?;
            max_components = max_components.max(partition.len());
        }

        let graph = build_confusability(spec, block_len, caps)?;
        let codebook = max_codebook(&graph, caps);
        let i_star = (max_components as f64).ln() / (spec.q as f64).ln();
        out.push(MaximinPoint {
            block_len,
            max_components,
            i_star,
            rate: i_star / block_len as f64,
            codebook_size: codebook.len(),
            agrees: max_components == codebook.len(),
        });
    }
    Ok(out)
}
