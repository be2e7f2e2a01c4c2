//! State enumeration and the labeled transition graph.

use super::{ChannelSpec, ChannelState};
use crate::error::{Error, Result};

/// A labeled transition `from --label--> to`; label 0 is the error-free
/// event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: u8,
}

impl Edge {
    /// Whether this edge corresponds to an erasure/substitution.
    pub fn is_error(&self) -> bool {
        self.label != 0
    }
}

/// One outgoing transition, as `(label, successor index)`.
pub type Transition = (u8, usize);

/// Classification of a state by whether a further error is admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    /// An error may still occur: 2 successors for NSE, `q` for NSS.
    ErrorAdmissible,
    /// The budget is saturated; only the error-free transition exists.
    Saturated,
}

/// The complete state transition graph of a sliding-window channel.
///
/// States are indexed in lexicographic order of their window word (oldest
/// slot first, clear < error values), which makes indices reproducible
/// across runs and matches the usual tabulation of small examples.
#[derive(Debug, Clone)]
pub struct StateGraph {
    spec: ChannelSpec,
    states: Vec<ChannelState>,
    edges: Vec<Edge>,
    /// CSR-style offsets into `edges`, one slice per source state.
    out_offsets: Vec<usize>,
}

/// Enumerate all admissible windows and labeled transitions of `spec`.
pub fn enumerate_states(spec: &ChannelSpec) -> Result<StateGraph> {
    StateGraph::build(*spec)
}

impl StateGraph {
    pub fn build(spec: ChannelSpec) -> Result<Self> {
        let alphabet = spec.label_count();
        let total = (alphabet as u128)
            .checked_pow(spec.n as u32)
            .ok_or_else(|| Error::InvalidArgument("window space overflows".into()))?;
        const ENUM_CAP: u128 = 10_000_000;
        if total > ENUM_CAP {
            return Err(Error::ResourceCap {
                what: "state enumeration",
                required: total,
                cap: ENUM_CAP,
            });
        }

        // Odometer enumeration over the window alphabet visits words in
        // lexicographic order, so the retained states are already sorted.
        let mut states = Vec::new();
        let mut window = vec![0u8; spec.n];
        loop {
            if window.iter().filter(|&&e| e != 0).count() <= spec.d {
                states.push(ChannelState::new(window.clone()));
            }
            let mut pos = spec.n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if (window[pos] as usize) + 1 < alphabet {
                    window[pos] += 1;
                    window[pos + 1..].fill(0);
                    break;
                }
                if pos == 0 {
                    window.clear();
                    break;
                }
            }
            if window.is_empty() {
                break;
            }
        }
        debug_assert_eq!(states.len() as u128, spec.state_count());

        let index_of = |w: &ChannelState| states.binary_search(w).expect("successor enumerated");

        let mut edges = Vec::new();
        let mut out_offsets = Vec::with_capacity(states.len() + 1);
        out_offsets.push(0);
        for (i, state) in states.iter().enumerate() {
            for label in 0..alphabet as u8 {
                if state.admits(label, spec.d) {
                    let to = index_of(&state.shifted(label));
                    edges.push(Edge { from: i, to, label });
                }
            }
            out_offsets.push(edges.len());
        }

        Ok(Self { spec, states, edges, out_offsets })
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[ChannelState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &ChannelState {
        &self.states[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, s: usize) -> &[Edge] {
        &self.edges[self.out_offsets[s]..self.out_offsets[s + 1]]
    }

    /// Index of a state by window contents.
    pub fn index_of(&self, state: &ChannelState) -> Option<usize> {
        self.states.binary_search(state).ok()
    }

    /// Index of the all-clear state (always present).
    pub fn all_clear_index(&self) -> usize {
        self.index_of(&ChannelState::all_clear(self.spec.n)).expect("all-clear state exists")
    }

    /// Outgoing transitions of `s` plus its error-admissibility class.
    pub fn transitions_from(&self, s: usize) -> (Vec<Transition>, StateClass) {
        let ts: Vec<Transition> = self.out_edges(s).iter().map(|e| (e.label, e.to)).collect();
        let class = if ts.len() > 1 { StateClass::ErrorAdmissible } else { StateClass::Saturated };
        (ts, class)
    }

    /// States whose window holds exactly `d` errors (the saturated-budget
    /// set driving the capacity recursion). Empty when `d = 0`.
    pub fn max_budget_states(&self) -> Vec<usize> {
        if self.spec.d == 0 {
            return Vec::new();
        }
        (0..self.len()).filter(|&i| self.states[i].error_count() == self.spec.d).collect()
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.len()]; self.len()];
        for e in &self.edges {
            m[e.from][e.to] = 1;
        }
        m
    }

    /// Maximum out-degree.
    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|s| self.out_edges(s).len()).max().unwrap_or(0)
    }

    /// Minimum out-degree.
    pub fn min_degree(&self) -> usize {
        (0..self.len()).map(|s| self.out_edges(s).len()).min().unwrap_or(0)
    }

    /// Average out-degree.
    pub fn average_degree(&self) -> f64 {
        self.edges.len() as f64 / self.len() as f64
    }

    /// Whether every state can reach every other (forward and reverse
    /// reachability from state 0).
    pub fn is_strongly_connected(&self) -> bool {
        if self.states.is_empty() {
            return false;
        }
        let n = self.len();
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            reverse[e.to].push(e.from);
        }
        let bfs = |forward: bool| -> usize {
            let mut seen = vec![false; n];
            let mut queue = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(u) = queue.pop() {
                if forward {
                    for e in self.out_edges(u) {
                        if !seen[e.to] {
                            seen[e.to] = true;
                            count += 1;
                            queue.push(e.to);
                        }
                    }
                } else {
                    for &v in &reverse[u] {
                        if !seen[v] {
                            seen[v] = true;
                            count += 1;
                            queue.push(v);
                        }
                    }
                }
            }
            count
        };
        bfs(true) == n && bfs(false) == n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelKind;

    fn nse31() -> StateGraph {
        StateGraph::build(ChannelSpec::nse(3, 1, 2).unwrap()).unwrap()
    }

    #[test]
    fn nse_3_1_states_in_lexicographic_order() {
        let g = nse31();
        let words: Vec<String> =
            g.states().iter().map(|s| s.word(ChannelKind::Nse)).collect();
        assert_eq!(words, vec!["ooo", "oo*", "o*o", "*oo"]);
    }

    #[test]
    fn nss_3_1_q3_has_seven_states() {
        let g = StateGraph::build(ChannelSpec::nss(3, 1, 3).unwrap()).unwrap();
        assert_eq!(g.len(), 7);
        let words: std::collections::BTreeSet<String> =
            g.states().iter().map(|s| s.word(ChannelKind::Nss)).collect();
        let expected: std::collections::BTreeSet<String> =
            ["ooo", "oo1", "oo2", "o1o", "o2o", "1oo", "2oo"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn nse_7_3_state_count() {
        let g = StateGraph::build(ChannelSpec::nse(7, 3, 2).unwrap()).unwrap();
        assert_eq!(g.len(), 64);
    }

    #[test]
    fn zero_budget_single_state_self_loop() {
        let g = StateGraph::build(ChannelSpec::nse(2, 0, 5).unwrap()).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.edges(), &[Edge { from: 0, to: 0, label: 0 }]);
    }

    #[test]
    fn nse_3_1_transitions_match_figure() {
        let g = nse31();
        // s1 = ooo can stay clean or take an erasure to s2 = oo*.
        let (ts, class) = g.transitions_from(0);
        assert_eq!(ts, vec![(0, 0), (1, 1)]);
        assert_eq!(class, StateClass::ErrorAdmissible);
        // s2 = oo* is saturated and must move to s3 = o*o.
        let (ts, class) = g.transitions_from(1);
        assert_eq!(ts, vec![(0, 2)]);
        assert_eq!(class, StateClass::Saturated);
        // s3 = o*o -> s4 = *oo only.
        let (ts, _) = g.transitions_from(2);
        assert_eq!(ts, vec![(0, 3)]);
        // s4 = *oo: the erasure rolls out, both events admissible.
        let (ts, class) = g.transitions_from(3);
        assert_eq!(ts, vec![(0, 0), (1, 1)]);
        assert_eq!(class, StateClass::ErrorAdmissible);
    }

    #[test]
    fn nss_3_1_q3_error_free_state_has_three_successors() {
        let g = StateGraph::build(ChannelSpec::nss(3, 1, 3).unwrap()).unwrap();
        let s1 = g.all_clear_index();
        let (ts, class) = g.transitions_from(s1);
        assert_eq!(class, StateClass::ErrorAdmissible);
        let words: Vec<String> =
            ts.iter().map(|&(_, to)| g.state(to).word(ChannelKind::Nss)).collect();
        assert_eq!(words, vec!["ooo", "oo1", "oo2"]);
    }

    #[test]
    fn adjacency_matrix_matches_edges() {
        let g = nse31();
        let m = g.adjacency_matrix();
        assert_eq!(
            m,
            vec![
                vec![1, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 1, 0, 0],
            ]
        );
    }

    #[test]
    fn state_count_matches_ball_volume_grid() {
        for n in 1..=8 {
            for d in 0..=n {
                for q in [2usize, 3, 4] {
                    let spec = ChannelSpec::nse(n, d, q).unwrap();
                    let g = StateGraph::build(spec).unwrap();
                    assert_eq!(g.len() as u128, crate::ball_volume(n, d, 2));
                    let spec = ChannelSpec::nss(n, d, q).unwrap();
                    let g = StateGraph::build(spec).unwrap();
                    assert_eq!(g.len() as u128, crate::ball_volume(n, d, q));
                }
            }
        }
    }

    #[test]
    fn strongly_connected_whenever_nontrivial() {
        for n in 1..=6 {
            for d in 0..=n {
                for (kind, q) in [(ChannelKind::Nse, 2), (ChannelKind::Nss, 3)] {
                    let spec = ChannelSpec::new(kind, n, d, q).unwrap();
                    let g = StateGraph::build(spec).unwrap();
                    assert!(g.is_strongly_connected(), "{spec} not strongly connected");
                }
            }
        }
    }

    #[test]
    fn successor_count_matches_classification() {
        for spec in [
            ChannelSpec::nse(4, 2, 2).unwrap(),
            ChannelSpec::nss(3, 1, 4).unwrap(),
        ] {
            let g = StateGraph::build(spec).unwrap();
            for s in 0..g.len() {
                let (ts, class) = g.transitions_from(s);
                match class {
                    StateClass::ErrorAdmissible => assert_eq!(ts.len(), spec.label_count()),
                    StateClass::Saturated => assert_eq!(ts.len(), 1),
                }
            }
        }
    }
}
