//! Confusability of input blocks and the confusability graph.

use super::patterns::{support_admissible, support_admissible_from};
use super::{decode_word, encode_word, Word};
use crate::caps::ResourceCaps;
use crate::channel::{ChannelKind, ChannelSpec, ChannelState};
use crate::error::{Error, Result};

/// Are `x` and `y` confusable from the all-clear initial state?
///
/// NSE: some admissible erasure pattern covers every differing position
/// (equivalently, the difference support itself is admissible). NSS: the
/// difference support splits into two disjoint sets, each admissible on
/// its own — one charged to the noise of `x`, the other to the noise of
/// `y`. A necessary window filter (at most `2d` differences per window)
/// rejects most pairs before the exact split search.
pub fn adjacent(spec: &ChannelSpec, x: &[u8], y: &[u8]) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x == y {
        return Ok(false);
    }
    let support: Vec<bool> = x.iter().zip(y).map(|(a, b)| a != b).collect();
    Ok(match spec.kind {
        ChannelKind::Nse => support_admissible(spec, &support),
        ChannelKind::Nss => support_splittable(spec, &support),
    })
}

/// Can `support` be partitioned into two supports, each admissible from
/// the all-clear state?
pub(crate) fn support_splittable(spec: &ChannelSpec, support: &[bool]) -> bool {
    // Necessary filter: each side contributes at most d per window.
    let all_clear = ChannelState::all_clear(spec.n);
    if !support_admissible_from(spec, &all_clear, support, 2 * spec.d) {
        return false;
    }
    let positions: Vec<usize> =
        (0..support.len()).filter(|&i| support[i]).collect();
    // Assign positions in increasing order to side A or B, keeping both
    // sliding counts within budget as we go.
    fn split(
        spec: &ChannelSpec,
        positions: &[usize],
        i: usize,
        side_a: &mut Vec<usize>,
        side_b: &mut Vec<usize>,
    ) -> bool {
        if i == positions.len() {
            return true;
        }
        let p = positions[i];
        for side in [0, 1] {
            let chosen = if side == 0 { &mut *side_a } else { &mut *side_b };
            // Window check: errors of this side within (p - n, p].
            let recent =
                chosen.iter().rev().take_while(|&&x| x + spec.n > p).count();
            if recent < spec.d {
                chosen.push(p);
                let ok = split(spec, positions, i + 1, side_a, side_b);
                if side == 0 {
                    side_a.pop();
                } else {
                    side_b.pop();
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    spec.d > 0 && split(spec, &positions, 0, &mut a, &mut b)
}

/// Adjacency structure over all `q^t` input words of block length `t`,
/// computed from the all-clear initial state.
#[derive(Debug, Clone)]
pub struct ConfusabilityGraph {
    spec: ChannelSpec,
    t: usize,
    neighbors: Vec<Vec<u32>>,
    n_edges: usize,
}

/// Build the confusability graph for block length `t`.
///
/// Rather than testing all pairs, the difference supports that cause
/// confusion are enumerated once and applied to every word.
pub fn build_confusability(
    spec: &ChannelSpec,
    t: usize,
    caps: &ResourceCaps,
) -> Result<ConfusabilityGraph> {
    let n_vertices = (spec.q as u128)
        .checked_pow(t as u32)
        .ok_or_else(|| Error::InvalidArgument("block too long".into()))?;
    if n_vertices > caps.confusability_vertices {
        return Err(Error::ResourceCap {
            what: "confusability graph",
            required: n_vertices,
            cap: caps.confusability_vertices,
        });
    }
    let n_vertices = n_vertices as usize;

    // Confusing difference supports (nonzero only).
    let mut supports = Vec::new();
    for mask in 1u64..(1 << t) {
        let support: Vec<bool> = (0..t).map(|i| mask >> i & 1 == 1).collect();
        let confusing = match spec.kind {
            ChannelKind::Nse => support_admissible(spec, &support),
            ChannelKind::Nss => support_splittable(spec, &support),
        };
        if confusing {
            supports.push(support);
        }
    }

    let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n_vertices];
    let mut n_edges = 0;
    let mut word = vec![0u8; t];
    for code in 0..n_vertices as u64 {
        word.copy_from_slice(&decode_word(code, spec.q, t));
        for support in &supports {
            // All words differing from `word` exactly on `support`.
            let positions: Vec<usize> =
                (0..t).filter(|&i| support[i]).collect();
            let mut delta = vec![1u8; positions.len()];
            loop {
                let mut other = word.clone();
                for (j, &p) in positions.iter().enumerate() {
                    other[p] = ((other[p] as usize + delta[j] as usize) % spec.q) as u8;
                }
                let other_code = encode_word(&other, spec.q);
                if other_code > code {
                    neighbors[code as usize].push(other_code as u32);
                    neighbors[other_code as usize].push(code as u32);
                    n_edges += 1;
                }
                // Next difference-value assignment.
                let mut j = 0;
                loop {
                    if j == delta.len() {
                        break;
                    }
                    if (delta[j] as usize) + 1 < spec.q {
                        delta[j] += 1;
                        delta[..j].fill(1);
                        break;
                    }
                    j += 1;
                }
                if j == delta.len() {
                    break;
                }
            }
        }
    }
    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }

    Ok(ConfusabilityGraph { spec: *spec, t, neighbors, n_edges })
}

impl ConfusabilityGraph {
    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn block_len(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[v]
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&(b as u32)).is_ok()
    }

    pub fn word(&self, v: usize) -> Word {
        decode_word(v as u64, self.spec.q, self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nse31() -> ChannelSpec {
        ChannelSpec::nse(3, 1, 2).unwrap()
    }

    #[test]
    fn adjacency_examples() {
        let spec = nse31();
        assert!(adjacent(&spec, &[0, 0, 0], &[0, 0, 1]).unwrap());
        assert!(!adjacent(&spec, &[0, 0, 0], &[0, 0, 0]).unwrap());
        assert!(!adjacent(&spec, &[0, 0, 0], &[0, 1, 1]).unwrap());
        assert!(adjacent(&spec, &[1, 2], &[1, 2, 3]).is_err());
    }

    #[test]
    fn nse_3_1_block_3_is_hamming_ball() {
        let g = build_confusability(&nse31(), 3, &ResourceCaps::default()).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.n_edges(), 12);
        for a in 0..8usize {
            for b in 0..8usize {
                let dist = (a ^ b).count_ones();
                assert_eq!(g.is_adjacent(a, b), a != b && dist <= 1);
            }
        }
    }

    #[test]
    fn single_symbol_blocks_are_complete() {
        let spec = ChannelSpec::nse(3, 1, 4).unwrap();
        let g = build_confusability(&spec, 1, &ResourceCaps::default()).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.n_edges(), 6);
    }

    #[test]
    fn nss_3_1_block_3_is_double_hamming_ball() {
        let spec = ChannelSpec::nss(3, 1, 2).unwrap();
        let g = build_confusability(&spec, 3, &ResourceCaps::default()).unwrap();
        for a in 0..8usize {
            for b in 0..8usize {
                let dist = (a ^ b).count_ones();
                assert_eq!(g.is_adjacent(a, b), a != b && dist <= 2, "{a} {b}");
            }
        }
    }

    #[test]
    fn nse_adjacency_matches_exhaustive_pattern_search() {
        // Independent route: x ~ y iff some admissible pattern's support
        // contains every differing position.
        for (n, d) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
            let spec = ChannelSpec::nse(n, d, 2).unwrap();
            for t in 1..=8usize {
                let patterns: Vec<Vec<bool>> = (0u32..1 << t)
                    .map(|m| (0..t).map(|i| m >> i & 1 == 1).collect::<Vec<bool>>())
                    .filter(|s| support_admissible(&spec, s))
                    .collect();
                for mask in 1u32..1 << t {
                    let support: Vec<bool> =
                        (0..t).map(|i| mask >> i & 1 == 1).collect();
                    let covered = patterns.iter().any(|p| {
                        support.iter().zip(p).all(|(&s, &pp)| !s || pp)
                    });
                    assert_eq!(
                        support_admissible(&spec, &support),
                        covered,
                        "({n},{d}) t={t} mask={mask:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let caps = ResourceCaps { confusability_vertices: 4, ..ResourceCaps::default() };
        assert!(matches!(
            build_confusability(&nse31(), 3, &caps),
            Err(Error::ResourceCap { .. })
        ));
    }
}
