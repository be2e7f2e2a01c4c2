//! Zero-error codebooks: construction, exhaustive verification, decoding,
//! and the JSON interchange format.

use super::confusability::ConfusabilityGraph;
use super::mis::max_independent_set;
use super::patterns::{enumerate_supports_from, enumerate_value_patterns_from};
use super::{word_from_string, word_string, Word};
use crate::caps::ResourceCaps;
use crate::channel::{ChannelKind, ChannelSpec, StateGraph};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A finite-length block code whose codewords are pairwise non-confusable.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub spec: ChannelSpec,
    /// Block length.
    pub t: usize,
    pub codewords: Vec<Word>,
    /// Achieved rate `log_q |codebook| / t`.
    pub rate: f64,
    /// Whether the codebook is a proven maximum (search ran to
    /// completion).
    pub exact: bool,
    /// Whether `verify_zero_error` has passed.
    pub verified: bool,
}

impl Codebook {
    pub fn new(spec: ChannelSpec, t: usize, codewords: Vec<Word>, exact: bool) -> Self {
        let rate = if t == 0 {
            0.0
        } else {
            spec.log_q(codewords.len() as f64) / t as f64
        };
        Self { spec, t, codewords, rate, exact, verified: false }
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Run the exhaustive zero-error check and record the outcome.
    pub fn verify(&mut self, caps: &ResourceCaps) -> Result<bool> {
        let report = verify_zero_error(self, caps)?;
        self.verified = report.ok;
        Ok(report.ok)
    }
}

/// Extract a maximum codebook from a confusability graph.
pub fn max_codebook(graph: &ConfusabilityGraph, caps: &ResourceCaps) -> Codebook {
    let neighbors: Vec<Vec<u32>> =
        (0..graph.len()).map(|v| graph.neighbors(v).to_vec()).collect();
    let mis = max_independent_set(&neighbors, caps.mis_time_budget_ms);
    let codewords: Vec<Word> =
        mis.vertices.iter().map(|&v| graph.word(v as usize)).collect();
    Codebook::new(*graph.spec(), graph.block_len(), codewords, mis.exact)
}

/// The `n`-fold repetition code `{0^n, 1^n, ..., (q-1)^n}`, which carries
/// one symbol per window and is zero-error whenever `d < n` (NSE) or
/// `2d < n` (NSS).
pub fn repetition_codebook(spec: &ChannelSpec) -> Codebook {
    let codewords: Vec<Word> =
        (0..spec.q as u8).map(|s| vec![s; spec.n]).collect();
    Codebook::new(*spec, spec.n, codewords, false)
}

/// One concrete collision uncovered by verification.
#[derive(Debug, Clone, PartialEq)]
pub struct Collision {
    pub codeword_a: usize,
    pub codeword_b: usize,
    /// Initial state (index into the state graph) from which the
    /// colliding noise is admissible.
    pub initial_state: usize,
    /// The colliding output word (erasures encoded as the sentinel `q`).
    pub output: Word,
}

/// Outcome of the exhaustive zero-error check.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub ok: bool,
    pub witness: Option<Collision>,
    pub states_checked: usize,
    pub patterns_checked: usize,
    /// Every per-state admissible pattern set was contained in the
    /// all-clear state's set (the dominance property the single-state
    /// shortcut relies on).
    pub dominance_validated: bool,
}

/// Exhaustively check that no two codewords can produce the same output,
/// over all admissible noise patterns from *every* initial state.
///
/// For NSE two outputs collide only under the same erasure set (locations
/// are visible), so each admissible support is applied to all codewords
/// and the masked words must stay distinct. For NSS each admissible value
/// pattern is added to each codeword and the resulting outputs must be
/// globally distinct.
pub fn verify_zero_error(cb: &Codebook, caps: &ResourceCaps) -> Result<VerifyReport> {
    let spec = &cb.spec;
    for w in &cb.codewords {
        if w.len() != cb.t {
            return Err(Error::LengthMismatch(w.len(), cb.t));
        }
    }
    let graph = StateGraph::build(*spec)?;
    let all_clear = graph.all_clear_index();

    // Guard with the worst-case work estimate q^t * patterns^2.
    let clear_patterns: u128 = match spec.kind {
        ChannelKind::Nse => {
            enumerate_supports_from(spec, graph.state(all_clear), cb.t).len() as u128
        }
        ChannelKind::Nss => {
            enumerate_value_patterns_from(spec, graph.state(all_clear), cb.t).len() as u128
        }
    };
    let work = (spec.q as u128)
        .checked_pow(cb.t as u32)
        .and_then(|v| v.checked_mul(clear_patterns * clear_patterns))
        .ok_or_else(|| Error::InvalidArgument("verification work overflows".into()))?;
    if work > caps.verify_work {
        return Err(Error::ResourceCap {
            what: "zero-error verification",
            required: work,
            cap: caps.verify_work,
        });
    }

    let mut patterns_checked = 0;
    let mut dominance_validated = true;
    let mut witness = None;

    let clear_supports: std::collections::HashSet<Vec<bool>> =
        enumerate_supports_from(spec, graph.state(all_clear), cb.t).into_iter().collect();
    let clear_patterns_set: std::collections::HashSet<Word> = match spec.kind {
        ChannelKind::Nss => {
            enumerate_value_patterns_from(spec, graph.state(all_clear), cb.t)
                .into_iter()
                .collect()
        }
        ChannelKind::Nse => Default::default(),
    };

    'states: for s in 0..graph.len() {
        match spec.kind {
            ChannelKind::Nse => {
                let supports = enumerate_supports_from(spec, graph.state(s), cb.t);
                if s != all_clear && !supports.iter().all(|p| clear_supports.contains(p)) {
                    dominance_validated = false;
                }
                for support in supports {
                    patterns_checked += 1;
                    let mut seen: HashMap<Word, usize> = HashMap::new();
                    for (i, c) in cb.codewords.iter().enumerate() {
                        let masked: Word = c
                            .iter()
                            .zip(&support)
                            .map(|(&sym, &erased)| if erased { spec.q as u8 } else { sym })
                            .collect();
                        if let Some(&j) = seen.get(&masked) {
                            witness = Some(Collision {
                                codeword_a: j,
                                codeword_b: i,
                                initial_state: s,
                                output: masked,
                            });
                            break 'states;
                        }
                        seen.insert(masked, i);
                    }
                }
            }
            ChannelKind::Nss => {
                let patterns = enumerate_value_patterns_from(spec, graph.state(s), cb.t);
                if s != all_clear && !patterns.iter().all(|p| clear_patterns_set.contains(p)) {
                    dominance_validated = false;
                }
                let mut seen: HashMap<Word, usize> = HashMap::new();
                for pattern in &patterns {
                    patterns_checked += 1;
                    for (i, c) in cb.codewords.iter().enumerate() {
                        let output: Word = c
                            .iter()
                            .zip(pattern)
                            .map(|(&sym, &e)| ((sym as usize + e as usize) % spec.q) as u8)
                            .collect();
                        if let Some(&j) = seen.get(&output) {
                            if j != i {
                                witness = Some(Collision {
                                    codeword_a: j,
                                    codeword_b: i,
                                    initial_state: s,
                                    output,
                                });
                                break 'states;
                            }
                        } else {
                            seen.insert(output, i);
                        }
                    }
                }
            }
        }
    }

    Ok(VerifyReport {
        ok: witness.is_none(),
        witness,
        states_checked: graph.len(),
        patterns_checked,
        dominance_validated,
    })
}

/// NSE block decoding: `received` uses the sentinel `q` for erasures; the
/// unique codeword agreeing on all unerased positions is returned.
pub fn decode_nse(cb: &Codebook, received: &[u8]) -> Option<usize> {
    if received.len() != cb.t {
        return None;
    }
    let q = cb.spec.q as u8;
    let mut found = None;
    for (i, c) in cb.codewords.iter().enumerate() {
        let consistent = c
            .iter()
            .zip(received)
            .all(|(&sym, &r)| r == q || r == sym);
        if consistent {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

/// NSS block decoding: the unique codeword whose difference from the
/// received word is an admissible noise pattern (from the all-clear state,
/// which dominates every other start).
pub fn decode_nss(cb: &Codebook, received: &[u8]) -> Option<usize> {
    if received.len() != cb.t {
        return None;
    }
    let spec = &cb.spec;
    let mut found = None;
    for (i, c) in cb.codewords.iter().enumerate() {
        let support: Vec<bool> =
            c.iter().zip(received).map(|(&sym, &r)| sym != r).collect();
        if super::patterns::support_admissible(spec, &support) {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

#[derive(Serialize, Deserialize)]
struct CodebookFile {
    spec: ChannelSpec,
    t: usize,
    codewords: Vec<String>,
    rate: f64,
    exact: bool,
    verified: bool,
}

/// JSON form: `{spec, t, codewords:[base-q strings], rate, exact,
/// verified}`.
pub fn codebook_to_json(cb: &Codebook) -> String {
    let file = CodebookFile {
        spec: cb.spec,
        t: cb.t,
        codewords: cb.codewords.iter().map(|w| word_string(w, cb.spec.q)).collect(),
        rate: cb.rate,
        exact: cb.exact,
        verified: cb.verified,
    };
    serde_json::to_string_pretty(&file).expect("codebook serializes")
}

pub fn codebook_from_json(json: &str) -> Result<Codebook> {
    let file: CodebookFile =
        serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
    let spec = ChannelSpec::new(file.spec.kind, file.spec.n, file.spec.d, file.spec.q)?;
    let codewords = file
        .codewords
        .iter()
        .map(|s| {
            let w = word_from_string(s, spec.q)?;
            if w.len() != file.t {
                return Err(Error::LengthMismatch(w.len(), file.t));
            }
            Ok(w)
        })
        .collect::<Result<Vec<Word>>>()?;
    let mut cb = Codebook::new(spec, file.t, codewords, file.exact);
    cb.verified = file.verified;
    Ok(cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::build_confusability;

    fn caps() -> ResourceCaps {
        ResourceCaps::default()
    }

    #[test]
    fn max_codebook_3_1_block_3() {
        let spec = ChannelSpec::nse(3, 1, 2).unwrap();
        let g = build_confusability(&spec, 3, &caps()).unwrap();
        let mut cb = max_codebook(&g, &caps());
        assert_eq!(cb.len(), 4);
        assert!((cb.rate - 2.0 / 3.0).abs() < 1e-12);
        assert!(cb.exact);
        assert!(cb.verify(&caps()).unwrap());
        assert!(cb.verified);
    }

    #[test]
    fn complete_graph_gives_single_codeword() {
        let spec = ChannelSpec::nse(3, 1, 4).unwrap();
        let g = build_confusability(&spec, 1, &caps()).unwrap();
        let cb = max_codebook(&g, &caps());
        assert_eq!(cb.len(), 1);
        assert_eq!(cb.rate, 0.0);
    }

    #[test]
    fn repetition_codebook_is_zero_error() {
        for n in 1..=5usize {
            for q in [2usize, 3] {
                let spec = ChannelSpec::nse(n, n - 1, q).unwrap();
                let mut cb = repetition_codebook(&spec);
                assert_eq!(cb.len(), q);
                assert!((cb.rate - 1.0 / n as f64).abs() < 1e-12);
                if n > spec.d {
                    assert!(cb.verify(&caps()).unwrap(), "n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn repetition_words_are_non_adjacent() {
        let spec = ChannelSpec::nse(3, 1, 2).unwrap();
        assert!(!crate::oracle::adjacent(&spec, &[0, 0, 0], &[1, 1, 1]).unwrap());
    }

    #[test]
    fn known_bad_codebook_yields_witness() {
        let spec = ChannelSpec::nse(3, 1, 2).unwrap();
        let cb = Codebook::new(spec, 3, vec![vec![0, 0, 0], vec![0, 0, 1]], true);
        let report = verify_zero_error(&cb, &caps()).unwrap();
        assert!(!report.ok);
        let w = report.witness.unwrap();
        // They collide exactly when the final position is erased.
        assert_eq!(w.output, vec![0, 0, 2]);
    }

    #[test]
    fn single_codeword_always_verifies() {
        let spec = ChannelSpec::nss(3, 1, 3).unwrap();
        let cb = Codebook::new(spec, 3, vec![vec![1, 2, 0]], true);
        assert!(verify_zero_error(&cb, &caps()).unwrap().ok);
    }

    #[test]
    fn dominance_holds_across_initial_states() {
        for spec in [
            ChannelSpec::nse(3, 1, 2).unwrap(),
            ChannelSpec::nss(3, 1, 3).unwrap(),
        ] {
            let g = build_confusability(&spec, 3, &caps()).unwrap();
            let cb = max_codebook(&g, &caps());
            let report = verify_zero_error(&cb, &caps()).unwrap();
            assert!(report.ok);
            assert!(report.dominance_validated);
            assert!(report.states_checked > 1);
        }
    }

    #[test]
    fn decoding_round_trip_nse() {
        let spec = ChannelSpec::nse(3, 1, 2).unwrap();
        let g = build_confusability(&spec, 3, &caps()).unwrap();
        let cb = max_codebook(&g, &caps());
        for (i, c) in cb.codewords.iter().enumerate() {
            for support in enumerate_supports_from(
                &spec,
                &crate::channel::ChannelState::all_clear(3),
                3,
            ) {
                let received: Vec<u8> = c
                    .iter()
                    .zip(&support)
                    .map(|(&s, &e)| if e { spec.q as u8 } else { s })
                    .collect();
                assert_eq!(decode_nse(&cb, &received), Some(i));
            }
        }
    }

    #[test]
    fn decoding_round_trip_nss() {
        let spec = ChannelSpec::nss(3, 1, 2).unwrap();
        let g = build_confusability(&spec, 3, &caps()).unwrap();
        let cb = max_codebook(&g, &caps());
        assert_eq!(cb.len(), 2);
        for (i, c) in cb.codewords.iter().enumerate() {
            for pattern in enumerate_value_patterns_from(
                &spec,
                &crate::channel::ChannelState::all_clear(3),
                3,
            ) {
                let received: Vec<u8> = c
                    .iter()
                    .zip(&pattern)
                    .map(|(&s, &e)| ((s as usize + e as usize) % spec.q) as u8)
                    .collect();
                assert_eq!(decode_nss(&cb, &received), Some(i));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = ChannelSpec::nse(3, 1, 2).unwrap();
        let g = build_confusability(&spec, 3, &caps()).unwrap();
        let mut cb = max_codebook(&g, &caps());
        cb.verify(&caps()).unwrap();
        let json = codebook_to_json(&cb);
        let back = codebook_from_json(&json).unwrap();
        assert_eq!(back, cb);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["codewords"].as_array().unwrap().len(), 4);
        assert_eq!(v["verified"], true);
    }
}
