//! Admissible error patterns over a finite horizon.
//!
//! A pattern for transmissions `0..t` is admissible from an initial window
//! when every sliding window of the combined (initial + new) event
//! sequence stays within the budget — exactly the rule the channel runtime
//! enforces step by step.

use crate::channel::{ChannelSpec, ChannelState, StateGraph};

/// Does `support` (error positions over `0..t`) satisfy every sliding
/// window constraint with budget `budget`, starting from `initial`?
pub fn support_admissible_from(
    spec: &ChannelSpec,
    initial: &ChannelState,
    support: &[bool],
    budget: usize,
) -> bool {
    debug_assert_eq!(initial.len(), spec.n);
    // Running count of errors among the last n events, seeded with the
    // initial window.
    let mut events: Vec<bool> = initial.window().iter().map(|&e| e != 0).collect();
    let mut count = events.iter().filter(|&&b| b).count();
    for (k, &err) in support.iter().enumerate() {
        let leaving = events[k];
        count -= usize::from(leaving);
        count += usize::from(err);
        if count > budget {
            return false;
        }
        events.push(err);
    }
    true
}

/// Admissibility from the all-clear start with the spec's own budget.
pub fn support_admissible(spec: &ChannelSpec, support: &[bool]) -> bool {
    support_admissible_from(spec, &ChannelState::all_clear(spec.n), support, spec.d)
}

/// All admissible supports of length `t` from `initial`, in lexicographic
/// order (`false < true`).
pub fn enumerate_supports_from(
    spec: &ChannelSpec,
    initial: &ChannelState,
    t: usize,
) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(t);
    fn dfs(
        spec: &ChannelSpec,
        window: &ChannelState,
        t: usize,
        current: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if current.len() == t {
            out.push(current.clone());
            return;
        }
        for err in [false, true] {
            let label = u8::from(err);
            if !window.admits(label, spec.d) {
                continue;
            }
            current.push(err);
            dfs(spec, &window.shifted(label), t, current, out);
            current.pop();
        }
    }
    dfs(spec, initial, t, &mut current, &mut out);
    out
}

/// All admissible NSS value patterns of length `t` from `initial`: every
/// admissible support with every assignment of nonzero values.
pub fn enumerate_value_patterns_from(
    spec: &ChannelSpec,
    initial: &ChannelState,
    t: usize,
) -> Vec<Vec<u8>> {
    let supports = enumerate_supports_from(spec, initial, t);
    let mut out = Vec::new();
    for support in supports {
        let positions: Vec<usize> =
            (0..t).filter(|&i| support[i]).collect();
        let mut pattern = vec![0u8; t];
        fn assign(
            q: usize,
            positions: &[usize],
            i: usize,
            pattern: &mut Vec<u8>,
            out: &mut Vec<Vec<u8>>,
        ) {
            if i == positions.len() {
                out.push(pattern.clone());
                return;
            }
            for v in 1..q as u8 {
                pattern[positions[i]] = v;
                assign(q, positions, i + 1, pattern, out);
                pattern[positions[i]] = 0;
            }
        }
        assign(spec.q, &positions, 0, &mut pattern, &mut out);
    }
    out
}

/// Exact maximum number of errors over admissible length-`horizon`
/// patterns from the all-clear start, by dynamic programming over the
/// state graph.
pub fn max_errors_in_horizon(spec: &ChannelSpec, horizon: usize) -> crate::Result<usize> {
    // Error budgets ignore NSS values, so the binary-support graph of the
    // same (n, d) carries the count.
    let binary = ChannelSpec::nse(spec.n, spec.d, 2)?;
    let graph = StateGraph::build(binary)?;
    let mut best = vec![i64::MIN; graph.len()];
    best[graph.all_clear_index()] = 0;
    for _ in 0..horizon {
        let mut next = vec![i64::MIN; graph.len()];
        for (s, &reached) in best.iter().enumerate() {
            if reached == i64::MIN {
                continue;
            }
            for e in graph.out_edges(s) {
                let val = reached + i64::from(e.is_error());
                if val > next[e.to] {
                    next[e.to] = val;
                }
            }
        }
        best = next;
    }
    Ok(best.iter().copied().max().unwrap_or(0).max(0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec31() -> ChannelSpec {
        ChannelSpec::nse(3, 1, 2).unwrap()
    }

    #[test]
    fn sliding_rule_examples() {
        let spec = spec31();
        assert!(support_admissible(&spec, &[true, false, false]));
        assert!(!support_admissible(&spec, &[true, true, false]));
        assert!(!support_admissible(&spec, &[false, true, true]));
        // One erasure every n uses.
        assert!(support_admissible(&spec, &[true, false, false, true, false, false, true]));
        assert!(!support_admissible(&spec, &[true, false, false, true, false, true]));
    }

    #[test]
    fn initial_window_constrains_early_errors() {
        let spec = spec31();
        let saturated = ChannelState::from_word("oo*", crate::ChannelKind::Nse).unwrap();
        assert!(!support_admissible_from(&spec, &saturated, &[true, false, false], spec.d));
        assert!(support_admissible_from(&spec, &saturated, &[false, false, true], spec.d));
    }

    #[test]
    fn enumeration_agrees_with_predicate() {
        let spec = ChannelSpec::nse(3, 2, 2).unwrap();
        for t in 0..=6 {
            let listed = enumerate_supports_from(&spec, &ChannelState::all_clear(3), t);
            let mut count = 0;
            for mask in 0u32..(1 << t) {
                let support: Vec<bool> = (0..t).map(|i| mask >> i & 1 == 1).collect();
                if support_admissible(&spec, &support) {
                    count += 1;
                    assert!(listed.contains(&support));
                }
            }
            assert_eq!(listed.len(), count);
        }
    }

    #[test]
    fn short_blocks_cap_total_errors() {
        // t < n: the only constraint is the total count.
        let spec = ChannelSpec::nse(5, 2, 2).unwrap();
        assert!(support_admissible(&spec, &[true, true]));
        assert!(!support_admissible(&spec, &[true, true, true]));
    }

    #[test]
    fn value_pattern_count() {
        let spec = ChannelSpec::nss(3, 1, 3).unwrap();
        let patterns = enumerate_value_patterns_from(&spec, &ChannelState::all_clear(3), 3);
        // Supports: {}, {0}, {1}, {2}; nonzero supports carry 2 values.
        assert_eq!(patterns.len(), 1 + 3 * 2);
    }

    #[test]
    fn max_errors_examples() {
        let spec = spec31();
        assert_eq!(max_errors_in_horizon(&spec, 0).unwrap(), 0);
        assert_eq!(max_errors_in_horizon(&spec, 3).unwrap(), 1);
        assert_eq!(max_errors_in_horizon(&spec, 7).unwrap(), 3);
    }

    #[test]
    fn max_errors_matches_brute_force() {
        for (n, d) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
            let spec = ChannelSpec::nse(n, d, 2).unwrap();
            for horizon in 0..=10usize {
                let mut best = 0;
                for mask in 0u32..(1 << horizon) {
                    let support: Vec<bool> =
                        (0..horizon).map(|i| mask >> i & 1 == 1).collect();
                    if support_admissible(&spec, &support) {
                        best = best.max(support.iter().filter(|&&b| b).count());
                    }
                }
                assert_eq!(
                    max_errors_in_horizon(&spec, horizon).unwrap(),
                    best,
                    "({n},{d}) horizon {horizon}"
                );
            }
        }
    }
}
