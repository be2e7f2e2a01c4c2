//! Channel runtime: steps input symbols under an adversary while the
//! sliding-window budget is enforced.

use super::{ChannelKind, ChannelSpec, ChannelState};
use crate::error::Result;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What happened to one transmitted symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelEvent {
    /// Received exactly as sent.
    Clear,
    /// NSE: the symbol was erased (location visible to the receiver).
    Erased,
    /// NSS: the symbol was shifted by `v` mod q (invisible).
    Substituted(u8),
}

impl ChannelEvent {
    fn from_label(kind: ChannelKind, label: u8) -> Self {
        match (kind, label) {
            (_, 0) => ChannelEvent::Clear,
            (ChannelKind::Nse, _) => ChannelEvent::Erased,
            (ChannelKind::Nss, v) => ChannelEvent::Substituted(v),
        }
    }

    pub fn is_error(&self) -> bool {
        !matches!(self, ChannelEvent::Clear)
    }
}

impl std::fmt::Display for ChannelEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChannelEvent::Clear => write!(f, "o"),
            ChannelEvent::Erased => write!(f, "*"),
            ChannelEvent::Substituted(v) => {
                write!(f, "{}", char::from_digit(*v as u32, 36).unwrap())
            }
        }
    }
}

/// One received symbol: the value, or an erasure mark (NSE only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Symbol(usize),
    Erasure,
}

/// Log entry for one channel use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub input: usize,
    pub event: ChannelEvent,
    pub output: Output,
    /// The adversary requested an inadmissible error and was overridden.
    pub overridden: bool,
}

/// Custom adversary: sees the current window, the input symbol, and the
/// step index, and proposes an error label.
pub type AdversaryHook = Box<dyn FnMut(&ChannelState, usize, usize) -> u8 + Send>;

/// How the adversary chooses error events. Whatever it asks for, the
/// runtime enforces admissibility: inadmissible requests are downgraded to
/// the error-free event and logged.
pub enum AdversaryPolicy {
    /// Inject an error whenever the budget admits one (value 1 for NSS).
    Greedy,
    /// Flip a fair coin between "no error" and an error with a uniformly
    /// random value, independently each use; inadmissible picks are
    /// overridden by the runtime.
    RandomAdmissible(Box<ChaCha8Rng>),
    /// Replay a fixed label sequence (0 = no error); past its end, no
    /// errors are requested.
    Scripted(Vec<u8>, usize),
    /// Arbitrary hook with full view of the window, input, and step index.
    Omniscient(AdversaryHook),
}

impl AdversaryPolicy {
    pub fn random(seed: u64) -> Self {
        AdversaryPolicy::RandomAdmissible(Box::new(ChaCha8Rng::seed_from_u64(seed)))
    }

    pub fn scripted(labels: Vec<u8>) -> Self {
        AdversaryPolicy::Scripted(labels, 0)
    }

    fn propose(&mut self, spec: &ChannelSpec, window: &ChannelState, input: usize, step: usize) -> u8 {
        match self {
            AdversaryPolicy::Greedy => 1,
            AdversaryPolicy::RandomAdmissible(rng) => {
                if rng.gen_bool(0.5) {
                    match spec.kind {
                        ChannelKind::Nse => 1,
                        ChannelKind::Nss => rng.gen_range(1..spec.q) as u8,
                    }
                } else {
                    0
                }
            }
            AdversaryPolicy::Scripted(labels, pos) => {
                let label = labels.get(*pos).copied().unwrap_or(0);
                *pos += 1;
                label
            }
            AdversaryPolicy::Omniscient(hook) => hook(window, input, step),
        }
    }
}

impl std::fmt::Debug for AdversaryPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdversaryPolicy::Greedy => write!(f, "Greedy"),
            AdversaryPolicy::RandomAdmissible(_) => write!(f, "RandomAdmissible"),
            AdversaryPolicy::Scripted(labels, pos) => {
                write!(f, "Scripted({} labels, at {pos})", labels.len())
            }
            AdversaryPolicy::Omniscient(_) => write!(f, "Omniscient"),
        }
    }
}

/// A live channel: the current window plus an optional step log.
///
/// The default initial state is the all-clear window; zero-error codes
/// built for it remain valid from every other start, but an explicit
/// initial state can be supplied for testing those.
#[derive(Debug, Clone)]
pub struct ChannelRuntime {
    spec: ChannelSpec,
    current: ChannelState,
    step: usize,
    history: Option<Vec<StepRecord>>,
}

impl ChannelRuntime {
    pub fn new(spec: ChannelSpec) -> Self {
        let current = ChannelState::all_clear(spec.n);
        Self { spec, current, step: 0, history: None }
    }

    pub fn with_initial_state(spec: ChannelSpec, initial: ChannelState) -> Self {
        debug_assert_eq!(initial.len(), spec.n);
        debug_assert!(initial.error_count() <= spec.d);
        Self { spec, current: initial, step: 0, history: None }
    }

    /// Enable the (input, event, output) log.
    pub fn record_history(mut self) -> Self {
        self.history = Some(Vec::new());
        self
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn state(&self) -> &ChannelState {
        &self.current
    }

    pub fn history(&self) -> Option<&[StepRecord]> {
        self.history.as_deref()
    }

    /// Transmit one symbol. The adversary proposes an error event; if the
    /// proposal would break the window budget it is overridden with
    /// "no error" and the override is logged.
    pub fn step(&mut self, x: usize, adv: &mut AdversaryPolicy) -> Result<Output> {
        self.spec.validate_symbol(x)?;
        let mut label = adv.propose(&self.spec, &self.current, x, self.step);
        if self.spec.kind == ChannelKind::Nse {
            label = label.min(1);
        } else {
            label = (label as usize % self.spec.q) as u8;
        }
        let mut overridden = false;
        if !self.current.admits(label, self.spec.d) {
            label = 0;
            overridden = true;
        }
        let event = ChannelEvent::from_label(self.spec.kind, label);
        let output = match event {
            ChannelEvent::Clear => Output::Symbol(x),
            ChannelEvent::Erased => Output::Erasure,
            ChannelEvent::Substituted(v) => Output::Symbol((x + v as usize) % self.spec.q),
        };
        self.current = self.current.shifted(label);
        self.step += 1;
        if let Some(h) = &mut self.history {
            h.push(StepRecord { input: x, event, output, overridden });
        }
        Ok(output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_erases_whenever_admissible() {
        let spec = ChannelSpec::nse(3, 1, 2).unwrap();
        let mut rt = ChannelRuntime::new(spec).record_history();
        let mut adv = AdversaryPolicy::Greedy;
        let outputs: Vec<Output> =
            (0..4).map(|_| rt.step(0, &mut adv).unwrap()).collect();
        assert_eq!(
            outputs,
            vec![Output::Erasure, Output::Symbol(0), Output::Symbol(0), Output::Erasure]
        );
        let overrides: Vec<bool> =
            rt.history().unwrap().iter().map(|r| r.overridden).collect();
        assert_eq!(overrides, vec![false, true, true, false]);
    }

    #[test]
    fn saturated_state_cannot_erase() {
        let spec = ChannelSpec::nse(3, 1, 2).unwrap();
        let initial = ChannelState::from_word("oo*", ChannelKind::Nse).unwrap();
        let mut rt = ChannelRuntime::with_initial_state(spec, initial);
        let mut adv = AdversaryPolicy::Greedy;
        assert_eq!(rt.step(1, &mut adv).unwrap(), Output::Symbol(1));
    }

    #[test]
    fn perfect_channel_passes_symbols_through() {
        let spec = ChannelSpec::nse(4, 0, 8).unwrap();
        let mut rt = ChannelRuntime::new(spec);
        let mut adv = AdversaryPolicy::Greedy;
        assert_eq!(rt.step(5, &mut adv).unwrap(), Output::Symbol(5));
    }

    #[test]
    fn nss_substitution_is_additive_mod_q() {
        let spec = ChannelSpec::nss(2, 1, 3).unwrap();
        let mut rt = ChannelRuntime::new(spec);
        let mut adv = AdversaryPolicy::scripted(vec![2, 0]);
        assert_eq!(rt.step(2, &mut adv).unwrap(), Output::Symbol(1));
        assert_eq!(rt.step(2, &mut adv).unwrap(), Output::Symbol(2));
    }

    #[test]
    fn symbol_out_of_range_rejected() {
        let spec = ChannelSpec::nse(3, 1, 2).unwrap();
        let mut rt = ChannelRuntime::new(spec);
        let mut adv = AdversaryPolicy::Greedy;
        assert!(rt.step(2, &mut adv).is_err());
    }

    #[test]
    fn window_budget_never_violated_under_random_play() {
        for (spec, seed) in [
            (ChannelSpec::nse(5, 2, 2).unwrap(), 7u64),
            (ChannelSpec::nss(4, 2, 3).unwrap(), 11),
        ] {
            let mut rt = ChannelRuntime::new(spec);
            let mut adv = AdversaryPolicy::random(seed);
            let mut input = ChaCha8Rng::seed_from_u64(seed ^ 0xffff);
            for _ in 0..100_000 {
                let x = input.gen_range(0..spec.q);
                rt.step(x, &mut adv).unwrap();
                assert!(rt.state().error_count() <= spec.d);
            }
        }
    }
}
