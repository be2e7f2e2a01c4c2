//! Cross-module invariants: dual-route checks that pit independent
//! computations against each other on small instances.

use proptest::prelude::*;
use std::collections::HashSet;
use swchan_core::channel::ChannelState;
use swchan_core::oracle::{
    adjacent, build_confusability, decode_word, enumerate_supports_from,
    enumerate_value_patterns_from, max_codebook, support_admissible, verify_zero_error, Codebook,
    Word,
};
use swchan_core::{AdversaryPolicy, ChannelKind, ChannelRuntime, ChannelSpec, ResourceCaps};

fn caps() -> ResourceCaps {
    ResourceCaps::default()
}

/// Output set of a word from the all-clear state, as canonical byte words
/// (erasure = q).
fn output_set(spec: &ChannelSpec, word: &[u8]) -> HashSet<Word> {
    let all_clear = ChannelState::all_clear(spec.n);
    let mut out = HashSet::new();
    match spec.kind {
        ChannelKind::Nse => {
            for support in enumerate_supports_from(spec, &all_clear, word.len()) {
                out.insert(
                    word.iter()
                        .zip(&support)
                        .map(|(&s, &e)| if e { spec.q as u8 } else { s })
                        .collect(),
                );
            }
        }
        ChannelKind::Nss => {
            for pattern in enumerate_value_patterns_from(spec, &all_clear, word.len()) {
                out.insert(
                    word.iter()
                        .zip(&pattern)
                        .map(|(&s, &e)| ((s as usize + e as usize) % spec.q) as u8)
                        .collect(),
                );
            }
        }
    }
    out
}

/// Adjacency is by definition a nonempty intersection of output sets; the
/// implementation decides it combinatorially. Compare the two routes
/// exhaustively on small blocks.
#[test]
fn adjacency_agrees_with_output_set_intersection() {
    let cases = [
        (ChannelSpec::nse(2, 1, 2).unwrap(), 4),
        (ChannelSpec::nse(3, 1, 2).unwrap(), 5),
        (ChannelSpec::nse(3, 2, 2).unwrap(), 4),
        (ChannelSpec::nse(3, 1, 3).unwrap(), 3),
        (ChannelSpec::nss(2, 1, 2).unwrap(), 4),
        (ChannelSpec::nss(3, 1, 2).unwrap(), 4),
        (ChannelSpec::nss(3, 1, 3).unwrap(), 3),
        (ChannelSpec::nss(2, 2, 3).unwrap(), 3),
        (ChannelSpec::nss(4, 2, 2).unwrap(), 4),
    ];
    for (spec, t_max) in cases {
        for t in 1..=t_max {
            let n_words = (spec.q as u64).pow(t as u32);
            let outputs: Vec<HashSet<Word>> = (0..n_words)
                .map(|c| output_set(&spec, &decode_word(c, spec.q, t)))
                .collect();
            for a in 0..n_words {
                let wa = decode_word(a, spec.q, t);
                for b in 0..n_words {
                    let wb = decode_word(b, spec.q, t);
                    let expected = a != b
                        && !outputs[a as usize].is_disjoint(&outputs[b as usize]);
                    assert_eq!(
                        adjacent(&spec, &wa, &wb).unwrap(),
                        expected,
                        "{spec} t={t} {wa:?} {wb:?}"
                    );
                }
            }
        }
    }
}

/// Concatenating a zero-error codebook with itself stays zero-error
/// (admissible patterns restrict to admissible per-block patterns), so the
/// rate never drops under blockwise repetition.
#[test]
fn codebook_concatenation_preserves_rate() {
    for spec in [ChannelSpec::nse(3, 1, 2).unwrap(), ChannelSpec::nss(3, 1, 2).unwrap()] {
        let base = build_confusability(&spec, 3, &caps()).unwrap();
        let cb = max_codebook(&base, &caps());
        assert!(cb.exact);
        for k in 2..=3usize {
            let t = 3 * k;
            let mut words: Vec<Word> = vec![Vec::new()];
            for _ in 0..k {
                words = words
                    .iter()
                    .flat_map(|prefix| {
                        cb.codewords.iter().map(move |c| {
                            let mut w = prefix.clone();
                            w.extend_from_slice(c);
                            w
                        })
                    })
                    .collect();
            }
            assert_eq!(words.len(), cb.len().pow(k as u32));
            for (i, a) in words.iter().enumerate() {
                for b in &words[i + 1..] {
                    assert!(
                        !adjacent(&spec, a, b).unwrap(),
                        "{spec} k={k}: concatenation became confusable"
                    );
                }
            }
            let concat = Codebook::new(spec, t, words, true);
            assert!(concat.rate >= cb.rate - 1e-12);
        }
    }
}

/// With the input fixed, state paths and output sequences determine each
/// other. Exhaustive over inputs and admissible paths on small (3,1)
/// instances.
#[test]
fn state_paths_biject_with_outputs_given_input() {
    for spec in [
        ChannelSpec::nse(3, 1, 2).unwrap(),
        ChannelSpec::nss(3, 1, 3).unwrap(),
    ] {
        for len in 1..=8usize {
            for input_code in 0..(spec.q as u64).pow(len as u32) {
                let input = decode_word(input_code, spec.q, len);
                // Enumerate admissible label sequences (= state paths).
                let mut paths: Vec<Vec<u8>> = Vec::new();
                let mut stack = vec![(ChannelState::all_clear(spec.n), Vec::<u8>::new())];
                while let Some((window, labels)) = stack.pop() {
                    if labels.len() == len {
                        paths.push(labels);
                        continue;
                    }
                    for label in 0..spec.label_count() as u8 {
                        if window.admits(label, spec.d) {
                            let mut next = labels.clone();
                            next.push(label);
                            stack.push((window.shifted(label), next));
                        }
                    }
                }
                let outputs: HashSet<Word> = paths
                    .iter()
                    .map(|labels| {
                        labels
                            .iter()
                            .zip(&input)
                            .map(|(&e, &x)| match (spec.kind, e) {
                                (_, 0) => x,
                                (ChannelKind::Nse, _) => spec.q as u8,
                                (ChannelKind::Nss, v) => {
                                    ((x as usize + v as usize) % spec.q) as u8
                                }
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(
                    outputs.len(),
                    paths.len(),
                    "{spec}: distinct paths must give distinct outputs"
                );
            }
        }
    }
}

/// All-states verification never contradicts the all-clear check: if a
/// codebook passes from the dominant state it passes everywhere.
#[test]
fn dominance_backs_single_state_verification() {
    for spec in [
        ChannelSpec::nse(4, 2, 2).unwrap(),
        ChannelSpec::nss(3, 1, 3).unwrap(),
    ] {
        let graph = build_confusability(&spec, 4, &caps()).unwrap();
        let cb = max_codebook(&graph, &caps());
        let report = verify_zero_error(&cb, &caps()).unwrap();
        assert!(report.ok);
        assert!(report.dominance_validated);
    }
}

proptest! {
    /// The runtime never lets any window exceed the budget, whatever the
    /// adversary tries.
    #[test]
    fn window_budget_is_invariant(
        n in 1usize..6,
        d_raw in 0usize..6,
        q in 2usize..5,
        nse in proptest::bool::ANY,
        script in proptest::collection::vec(0u8..4, 0..150),
        inputs in proptest::collection::vec(0usize..16, 0..150),
    ) {
        let d = d_raw.min(n);
        let spec = if nse {
            ChannelSpec::nse(n, d, q).unwrap()
        } else {
            ChannelSpec::nss(n, d, q).unwrap()
        };
        let mut rt = ChannelRuntime::new(spec);
        let mut adv = AdversaryPolicy::scripted(script);
        for &x in &inputs {
            rt.step(x % q, &mut adv).unwrap();
            prop_assert!(rt.state().error_count() <= d);
        }
    }

    /// Confusability is symmetric and anti-reflexive.
    #[test]
    fn adjacency_symmetric(
        n in 1usize..5,
        d_raw in 0usize..5,
        q in 2usize..4,
        nse in proptest::bool::ANY,
        t in 1usize..6,
        a_seed in proptest::num::u64::ANY,
        b_seed in proptest::num::u64::ANY,
    ) {
        let d = d_raw.min(n);
        let spec = if nse {
            ChannelSpec::nse(n, d, q).unwrap()
        } else {
            ChannelSpec::nss(n, d, q).unwrap()
        };
        let total = (q as u64).pow(t as u32);
        let wa = decode_word(a_seed % total, q, t);
        let wb = decode_word(b_seed % total, q, t);
        prop_assert!(!adjacent(&spec, &wa, &wa).unwrap());
        prop_assert_eq!(
            adjacent(&spec, &wa, &wb).unwrap(),
            adjacent(&spec, &wb, &wa).unwrap()
        );
    }

    /// The sliding-window predicate matches a direct window-by-window
    /// count.
    #[test]
    fn support_rule_matches_naive_windows(
        n in 1usize..6,
        d_raw in 0usize..6,
        support in proptest::collection::vec(proptest::bool::ANY, 0..24),
    ) {
        let d = d_raw.min(n);
        let spec = ChannelSpec::nse(n, d, 2).unwrap();
        // Naive route: pad with n clear slots, check every window.
        let mut padded = vec![false; n];
        padded.extend(&support);
        let naive = (0..support.len()).all(|end| {
            let hi = n + end + 1;
            let lo = hi - n;
            padded[lo..hi].iter().filter(|&&b| b).count() <= d
        });
        prop_assert_eq!(support_admissible(&spec, &support), naive);
    }
}
