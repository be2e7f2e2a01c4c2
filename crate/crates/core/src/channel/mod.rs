//! Channel model: specs, states, the labeled transition graph, and a
//! runtime that steps symbols under an adversary while enforcing the
//! sliding-window error budget.

mod export;
mod graph;
mod memory;
mod runtime;

pub use export::{graph_from_json, graph_to_dot, graph_to_json};
pub use graph::{enumerate_states, Edge, StateClass, StateGraph, Transition};
pub use memory::verify_finite_memory;
pub use runtime::{AdversaryPolicy, ChannelEvent, ChannelRuntime, Output, StepRecord};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which of the two sliding-window channel families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    /// Erasure channel: symbols are received perfectly or erased, and the
    /// receiver sees the erasure locations.
    Nse,
    /// Symmetric channel: symbols may be substituted by any other symbol,
    /// invisibly to the receiver.
    Nss,
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChannelKind::Nse => write!(f, "nse"),
            ChannelKind::Nss => write!(f, "nss"),
        }
    }
}

/// An `(n, d)` sliding-window channel over a `q`-ary input alphabet: at
/// most `d` errors in every window of `n` consecutive uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    /// Window length, in channel uses.
    pub n: usize,
    /// Maximum errors per window.
    pub d: usize,
    /// Input alphabet size.
    pub q: usize,
}

/// Maximum alphabet size; symbols serialize as single alphanumeric digits.
pub const MAX_ALPHABET: usize = 36;

impl ChannelSpec {
    pub fn new(kind: ChannelKind, n: usize, d: usize, q: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("window length n must be positive".into()));
        }
        if d > n {
            return Err(Error::InvalidSpec(format!(
                "error budget d = {d} exceeds window length n = {n}"
            )));
        }
        if q < 2 {
            return Err(Error::InvalidSpec(format!("alphabet size q = {q} must be >= 2")));
        }
        if q > MAX_ALPHABET {
            return Err(Error::InvalidSpec(format!(
                "alphabet size q = {q} exceeds supported maximum {MAX_ALPHABET}"
            )));
        }
        Ok(Self { kind, n, d, q })
    }

    pub fn nse(n: usize, d: usize, q: usize) -> Result<Self> {
        Self::new(ChannelKind::Nse, n, d, q)
    }

    pub fn nss(n: usize, d: usize, q: usize) -> Result<Self> {
        Self::new(ChannelKind::Nss, n, d, q)
    }

    /// Number of distinct per-use error events: 2 for NSE (clear/erased),
    /// `q` for NSS (additive noise value in Z_q, 0 meaning no error).
    pub fn label_count(&self) -> usize {
        match self.kind {
            ChannelKind::Nse => 2,
            ChannelKind::Nss => self.q,
        }
    }

    /// Expected number of channel states, `V_d^n(2)` for NSE and
    /// `V_d^n(q)` for NSS.
    pub fn state_count(&self) -> u128 {
        crate::ball_volume(self.n, self.d, self.label_count())
    }

    /// log base q.
    pub fn log_q(&self, x: f64) -> f64 {
        x.ln() / (self.q as f64).ln()
    }

    /// Maximum error rate `d/n` as a float.
    pub fn error_rate(&self) -> f64 {
        self.d as f64 / self.n as f64
    }

    pub fn validate_symbol(&self, x: usize) -> Result<()> {
        if x >= self.q {
            Err(Error::SymbolOutOfRange { symbol: x, q: self.q })
        } else {
            Ok(())
        }
    }
}

impl std::fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{},{},{}", self.kind, self.n, self.d, self.q)
    }
}

/// The error events of the last `n` transmissions. Entry 0 is the oldest
/// slot, entry `n-1` the most recent; 0 means an error-free use and a
/// nonzero value `v` means an erasure (NSE) or an additive error `v` (NSS).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelState {
    window: Vec<u8>,
}

impl ChannelState {
    pub fn all_clear(n: usize) -> Self {
        Self { window: vec![0; n] }
    }

    pub fn new(window: Vec<u8>) -> Self {
        Self { window }
    }

    pub fn window(&self) -> &[u8] {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    /// Number of errors currently inside the window.
    pub fn error_count(&self) -> usize {
        self.window.iter().filter(|&&e| e != 0).count()
    }

    /// Window after one transmission with error event `label`.
    pub fn shifted(&self, label: u8) -> Self {
        let mut w = Vec::with_capacity(self.window.len());
        w.extend_from_slice(&self.window[1..]);
        w.push(label);
        Self { window: w }
    }

    /// Whether a transmission with error event `label` keeps the window
    /// within budget `d`.
    pub fn admits(&self, label: u8, d: usize) -> bool {
        if label == 0 {
            return true;
        }
        let leaving = usize::from(self.window[0] != 0);
        self.error_count() - leaving < d
    }

    /// Serialize the window word: `o` for a clear slot, `*` for an NSE
    /// erasure, and the digit of the error value for NSS.
    pub fn word(&self, kind: ChannelKind) -> String {
        self.window
            .iter()
            .map(|&e| match (kind, e) {
                (_, 0) => 'o',
                (ChannelKind::Nse, _) => '*',
                (ChannelKind::Nss, v) => char::from_digit(v as u32, 36).unwrap(),
            })
            .collect()
    }

    /// Parse a window word in the `word` format.
    pub fn from_word(s: &str, kind: ChannelKind) -> Result<Self> {
        let window = s
            .chars()
            .map(|c| match (kind, c) {
                (_, 'o') => Ok(0),
                (ChannelKind::Nse, '*') => Ok(1),
                (ChannelKind::Nss, c) => c
                    .to_digit(36)
                    .map(|v| v as u8)
                    .ok_or_else(|| Error::Format(format!("bad window char {c:?}"))),
                (ChannelKind::Nse, c) => Err(Error::Format(format!("bad window char {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { window })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(ChannelSpec::nse(3, 1, 2).is_ok());
        assert!(matches!(ChannelSpec::nse(0, 0, 2), Err(Error::InvalidSpec(_))));
        assert!(matches!(ChannelSpec::nse(3, 5, 2), Err(Error::InvalidSpec(_))));
        assert!(matches!(ChannelSpec::nse(3, 1, 1), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn window_shift_and_admissibility() {
        let s = ChannelState::all_clear(3);
        assert_eq!(s.error_count(), 0);
        assert!(s.admits(1, 1));
        let s = s.shifted(1);
        assert_eq!(s.window(), &[0, 0, 1]);
        // Budget d = 1 is exhausted until the erasure rolls out.
        assert!(!s.admits(1, 1));
        let s = s.shifted(0);
        assert_eq!(s.window(), &[0, 1, 0]);
        assert!(!s.admits(1, 1));
        let s = s.shifted(0);
        assert_eq!(s.window(), &[1, 0, 0]);
        // The erasure is about to leave the window, so a new one fits.
        assert!(s.admits(1, 1));
    }

    #[test]
    fn word_round_trip() {
        let s = ChannelState::new(vec![0, 0, 1]);
        assert_eq!(s.word(ChannelKind::Nse), "oo*");
        assert_eq!(ChannelState::from_word("oo*", ChannelKind::Nse).unwrap(), s);
        let s = ChannelState::new(vec![0, 2, 0]);
        assert_eq!(s.word(ChannelKind::Nss), "o2o");
        assert_eq!(ChannelState::from_word("o2o", ChannelKind::Nss).unwrap(), s);
    }
}
