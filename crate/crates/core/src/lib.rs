//! Worst-case sliding-window channel models and their zero-error analysis.
//!
//! Two channel families are modeled as finite-state machines:
//!
//! * **NSE** — non-stochastic sliding-window *erasure* channels: at most `d`
//!   erasures in every window of `n` consecutive uses, erasure locations
//!   visible to the receiver.
//! * **NSS** — non-stochastic sliding-window *symmetric* channels: at most
//!   `d` symbol substitutions per window of `n` uses, invisible to the
//!   receiver.
//!
//! On top of the state graph the crate computes zero-error feedback capacity
//! (min-plus dynamic programming and an exact minimum-mean-cycle
//! reformulation), topological entropy of the state dynamics
//! (Perron-Frobenius eigenvalue), entropy-based lower bounds on the
//! zero-error capacity, exact finite-length zero-error codebooks via maximum
//! independent sets of confusability graphs, maximin information over finite
//! joint ranges, and bounded-error state estimation of unstable linear
//! plants driven through these channels.
//!
//! All rates and logarithms are in base `q`, the channel input alphabet
//! size, so capacities are in symbols per channel use.

pub mod capacity;
pub mod caps;
pub mod channel;
pub mod entropy;
pub mod error;
pub mod estimation;
pub mod oracle;

pub use caps::ResourceCaps;
pub use channel::{
    AdversaryPolicy, ChannelKind, ChannelRuntime, ChannelSpec, ChannelState, StateClass,
    StateGraph,
};
pub use error::{Error, Result};

/// `V_r^n(q) = sum_{i=0}^{r} C(n,i) (q-1)^i`, the number of length-`n`
/// windows over a `q`-ary error alphabet with at most `r` nonzero entries.
pub fn ball_volume(n: usize, r: usize, q: usize) -> u128 {
    let mut total: u128 = 0;
    for i in 0..=r.min(n) {
        let mut term: u128 = 1;
        // C(n, i), computed incrementally to stay exact.
        for j in 0..i {
            term = term * (n - j) as u128 / (j + 1) as u128;
        }
        for _ in 0..i {
            term *= (q - 1) as u128;
        }
        total += term;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volume_small_cases() {
        assert_eq!(ball_volume(3, 1, 2), 4);
        assert_eq!(ball_volume(3, 1, 3), 7);
        // 1 + 7 + 21 + 35
        assert_eq!(ball_volume(7, 3, 2), 64);
        assert_eq!(ball_volume(5, 5, 2), 32);
        assert_eq!(ball_volume(4, 0, 7), 1);
    }

    #[test]
    fn ball_volume_matches_direct_summation() {
        // Independent route: enumerate all q^n windows and count those with
        // at most r nonzero entries.
        for n in 1..=6 {
            for q in 2..=4usize {
                for r in 0..=n {
                    let mut count = 0u128;
                    let total = (q as u128).pow(n as u32);
                    for code in 0..total {
                        let mut c = code;
                        let mut nonzero = 0;
                        for _ in 0..n {
                            if c % q as u128 != 0 {
                                nonzero += 1;
                            }
                            c /= q as u128;
                        }
                        if nonzero <= r as u128 {
                            count += 1;
                        }
                    }
                    assert_eq!(ball_volume(n, r, q), count, "n={n} r={r} q={q}");
                }
            }
        }
    }
}
