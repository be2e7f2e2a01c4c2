//! Resource caps for the exhaustive analyses.
//!
//! Every guarded operation takes the caps explicitly so library callers can
//! tighten or relax them per call; the CLI additionally honors environment
//! overrides (`SWCHAN_*`).

/// Limits for exhaustive enumeration and search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceCaps {
    /// Maximum number of vertices of a confusability graph (q^t).
    pub confusability_vertices: u128,
    /// Maximum value of q^(t_max+1) * |S| in the finite-memory check.
    pub finite_memory_work: u128,
    /// Maximum value of q^t * (#admissible patterns)^2 in codebook
    /// verification.
    pub verify_work: u128,
    /// Maximum number of input words (q^t) in the exhaustive maximin
    /// search over input ranges; subsets enumerated are 2^(q^t).
    pub maximin_words: u128,
    /// Time budget for the exact independent-set search, in milliseconds.
    /// When exceeded the best codebook found so far is returned with
    /// `exact = false`.
    pub mis_time_budget_ms: u64,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        Self {
            confusability_vertices: 1 << 20,
            finite_memory_work: 10_000_000,
            verify_work: 100_000_000,
            maximin_words: 16,
            mis_time_budget_ms: 60_000,
        }
    }
}

impl ResourceCaps {
    /// Default caps with any `SWCHAN_*` environment overrides applied.
    ///
    /// Recognized variables: `SWCHAN_CONFUSABILITY_VERTICES`,
    /// `SWCHAN_FINITE_MEMORY_WORK`, `SWCHAN_VERIFY_WORK`,
    /// `SWCHAN_MAXIMIN_WORDS`, `SWCHAN_MIS_TIME_BUDGET_MS`.
    pub fn from_env() -> Self {
        let mut caps = Self::default();
        fn read<T: std::str::FromStr>(name: &str, into: &mut T) {
            if let Ok(v) = std::env::var(name) {
                if let Ok(parsed) = v.parse::<T>() {
                    *into = parsed;
                }
            }
        }
        read(
            "SWCHAN_CONFUSABILITY_VERTICES",
            &mut caps.confusability_vertices,
        );
        read("SWCHAN_FINITE_MEMORY_WORK", &mut caps.finite_memory_work);
        read("SWCHAN_VERIFY_WORK", &mut caps.verify_work);
        read("SWCHAN_MAXIMIN_WORDS", &mut caps.maximin_words);
        read("SWCHAN_MIS_TIME_BUDGET_MS", &mut caps.mis_time_budget_ms);
        caps
    }
}
