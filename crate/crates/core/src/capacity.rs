//! Zero-error feedback capacity of sliding-window channels.
//!
//! The worst-case sequential optimization reduces to a min-plus value
//! iteration over the state graph with per-edge gains: an error-free use
//! multiplies the cost-to-go by `q`, an erasure by 1, and an NSS
//! substitution by `q/(q-1)`. Working in base-q logarithms, the per-edge
//! log-gains are `1`, `0`, and `1 - log_q(q-1)` respectively, and the
//! capacity is the asymptotic per-step value of the iteration — which on a
//! strongly connected graph equals the minimum cycle mean. The cycle mean
//! is computed exactly (Karp recursion over integer error counts), so the
//! NSE value `1 - d/n` comes out as a rational identity rather than a
//! float limit.

use crate::channel::{ChannelKind, ChannelSpec, Edge, StateGraph};
use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

/// State graph with per-edge DP gains attached.
#[derive(Debug, Clone)]
pub struct GainGraph {
    graph: StateGraph,
    /// Log-gain of an error edge: 0 for NSE, `1 - log_q(q-1)` for NSS.
    error_log_gain: f64,
}

impl GainGraph {
    pub fn new(graph: StateGraph) -> Self {
        let spec = graph.spec();
        let error_log_gain = match spec.kind {
            ChannelKind::Nse => 0.0,
            ChannelKind::Nss => 1.0 - spec.log_q((spec.q - 1) as f64),
        };
        Self { graph, error_log_gain }
    }

    pub fn for_spec(spec: &ChannelSpec) -> Result<Self> {
        Ok(Self::new(StateGraph::build(*spec)?))
    }

    pub fn graph(&self) -> &StateGraph {
        &self.graph
    }

    pub fn spec(&self) -> &ChannelSpec {
        self.graph.spec()
    }

    /// Per-edge log-gain `ghat(s, s') = log_q a(s, s')`.
    pub fn log_gain(&self, edge: &Edge) -> f64 {
        if edge.is_error() {
            self.error_log_gain
        } else {
            1.0
        }
    }

    /// `log_q(q - 1)` for NSS, 1 for NSE: the per-error discount so that
    /// every edge has log-gain `1 - kappa * err(edge)`.
    pub fn kappa(&self) -> f64 {
        1.0 - self.error_log_gain
    }
}

/// One min-plus iteration: `w(s) = min over successors s' of
/// [ghat(s,s') + w_prev(s')]`.
pub fn reduced_dp_step(g: &GainGraph, w_prev: &[f64]) -> Vec<f64> {
    assert_eq!(w_prev.len(), g.graph.len(), "one value per state");
    (0..g.graph.len())
        .map(|s| {
            g.graph
                .out_edges(s)
                .iter()
                .map(|e| g.log_gain(e) + w_prev[e.to])
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Trajectory of the value iteration in the base-q log domain.
#[derive(Debug, Clone)]
pub struct DPTrajectory {
    pub k_max: usize,
    /// `w[k][s] = log_q W(k, s)`, rows `k = 0..=k_max`.
    pub w: Vec<Vec<f64>>,
    /// For each `k >= 1`, the lowest state index attaining `min_s w(k,s)`.
    pub argmin_state: Vec<usize>,
    /// `rate_estimates[k-1] = min_s w(k, s) / k`.
    pub rate_estimates: Vec<f64>,
}

impl DPTrajectory {
    /// The last rate estimate.
    pub fn final_estimate(&self) -> f64 {
        *self.rate_estimates.last().expect("k_max >= 1")
    }
}

/// Run the value iteration for `k_max` steps (`k_max >= |S|`).
pub fn dp_capacity(g: &GainGraph, k_max: usize) -> Result<DPTrajectory> {
    let n_states = g.graph.len();
    if k_max < n_states {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} must be at least |S| = {n_states}"
        )));
    }
    let mut w = Vec::with_capacity(k_max + 1);
    w.push(vec![0.0; n_states]);
    let mut argmin_state = Vec::with_capacity(k_max);
    let mut rate_estimates = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let next = reduced_dp_step(g, &w[k - 1]);
        let (argmin, min) = next
            .iter()
            .enumerate()
            .fold((0usize, f64::INFINITY), |(ai, am), (i, &v)| {
                if v < am {
                    (i, v)
                } else {
                    (ai, am)
                }
            });
        argmin_state.push(argmin);
        rate_estimates.push(min / k as f64);
        w.push(next);
    }
    Ok(DPTrajectory { k_max, w, argmin_state, rate_estimates })
}

/// Exact minimum mean cycle of a gain graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMeanCycle {
    /// Maximum error density over directed cycles, as an exact rational
    /// `(error edges) / (cycle length)`.
    pub error_density: Ratio<i64>,
    /// Minimum mean log-gain `1 - kappa * error_density` as a float.
    pub mean_log_gain: f64,
    /// Exact rational mean log-gain when the gains are rational (NSE).
    pub mean_log_gain_exact: Option<Ratio<i64>>,
    /// States of one witness cycle, in traversal order (last wraps to
    /// first).
    pub witness: Vec<usize>,
}

/// Karp's recursion for the minimum cycle mean of integer edge weights.
/// Returns the mean and a witness cycle (deterministic for fixed input).
fn karp_min_mean_i64(
    n_states: usize,
    edges: &[(usize, usize, i64)],
) -> (Ratio<i64>, Vec<usize>) {
    let n = n_states;
    const UNREACHED: i64 = i64::MAX;
    // dist[k][v] = min weight of a walk with exactly k edges from 0 to v.
    let mut dist = vec![vec![UNREACHED; n]; n + 1];
    let mut pred = vec![vec![usize::MAX; n]; n + 1];
    dist[0][0] = 0;
    for k in 1..=n {
        for (idx, &(u, v, wt)) in edges.iter().enumerate() {
            if dist[k - 1][u] != UNREACHED && dist[k - 1][u] + wt < dist[k][v] {
                dist[k][v] = dist[k - 1][u] + wt;
                pred[k][v] = idx;
            }
        }
    }

    let mut best: Option<(Ratio<i64>, usize)> = None;
    for (v, &d_final) in dist[n].iter().enumerate() {
        if d_final == UNREACHED {
            continue;
        }
        let mut worst: Option<Ratio<i64>> = None;
        for (k, level) in dist.iter().enumerate().take(n) {
            if level[v] == UNREACHED {
                continue;
            }
            let ratio = Ratio::new(d_final - level[v], (n - k) as i64);
            if worst.is_none_or(|w| ratio > w) {
                worst = Some(ratio);
            }
        }
        let worst = worst.expect("k = 0 unreachable only if v unreachable");
        if best.is_none_or(|(b, _)| worst < b) {
            best = Some((worst, v));
        }
    }
    let (mean, v_star) = best.expect("strongly connected graph has a cycle");

    // Walk the predecessor chain of the n-edge walk to v_star; every cycle
    // on it attains the optimal mean, so extract the first one found.
    let mut walk = vec![v_star];
    let mut v = v_star;
    for k in (1..=n).rev() {
        let e = pred[k][v];
        v = edges[e].0;
        walk.push(v);
    }
    walk.reverse();
    let mut seen = vec![usize::MAX; n];
    let mut cycle = Vec::new();
    for (pos, &s) in walk.iter().enumerate() {
        if seen[s] != usize::MAX {
            cycle = walk[seen[s]..pos].to_vec();
            break;
        }
        seen[s] = pos;
    }
    debug_assert!(!cycle.is_empty(), "an n-edge walk over n states repeats a state");
    (mean, cycle)
}

/// Exact minimum mean cycle, with one witness cycle.
pub fn min_mean_cycle(g: &GainGraph) -> Result<MinMeanCycle> {
    if !g.graph.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    // Maximize the error density: run Karp on weight -err(edge).
    let edges: Vec<(usize, usize, i64)> = g
        .graph
        .edges()
        .iter()
        .map(|e| (e.from, e.to, -i64::from(e.is_error())))
        .collect();
    let (neg_density, witness) = karp_min_mean_i64(g.graph.len(), &edges);
    let error_density = -neg_density;
    let spec = g.spec();
    let (mean_log_gain, mean_log_gain_exact) = match spec.kind {
        ChannelKind::Nse => {
            let exact = Ratio::from_integer(1) - error_density;
            (exact.to_f64().unwrap(), Some(exact))
        }
        ChannelKind::Nss => {
            let kappa = g.kappa();
            (1.0 - kappa * error_density.to_f64().unwrap(), None)
        }
    };
    Ok(MinMeanCycle { error_density, mean_log_gain, mean_log_gain_exact, witness })
}

/// Whether a closed-form capacity value is exact or only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityFlag {
    Exact,
    UpperBound,
}

/// Closed-form zero-error feedback capacity (NSE) or upper bound (NSS).
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormC0f {
    pub value: f64,
    /// Exact rational value when one exists (NSE always; NSS only the
    /// zero case).
    pub exact: Option<Ratio<i64>>,
    pub flag: CapacityFlag,
}

/// `C0f = 1 - d/n` for NSE (exact); for NSS, `1 - (d/n) log_q(q-1)` as an
/// upper bound when `d < n/2` and exactly 0 when `d >= n/2`.
pub fn closed_form_c0f(spec: &ChannelSpec) -> ClosedFormC0f {
    match spec.kind {
        ChannelKind::Nse => {
            let exact = Ratio::from_integer(1) - Ratio::new(spec.d as i64, spec.n as i64);
            ClosedFormC0f {
                value: exact.to_f64().unwrap(),
                exact: Some(exact),
                flag: CapacityFlag::Exact,
            }
        }
        ChannelKind::Nss => {
            if 2 * spec.d >= spec.n {
                ClosedFormC0f {
                    value: 0.0,
                    exact: Some(Ratio::from_integer(0)),
                    flag: CapacityFlag::Exact,
                }
            } else {
                let value =
                    1.0 - spec.error_rate() * spec.log_q((spec.q - 1) as f64);
                ClosedFormC0f { value, exact: None, flag: CapacityFlag::UpperBound }
            }
        }
    }
}

/// Structural checks on an NSE value-iteration trajectory: saturated
/// states recur with period `n` and total log-gain `n - d`, the all-clear
/// state attains the minimum at every step, and its value stays 0 through
/// the first `d` steps.
pub fn verify_sm_recurrence(g: &GainGraph, traj: &DPTrajectory) -> Result<bool> {
    let spec = g.spec();
    if spec.kind != ChannelKind::Nse {
        return Err(Error::InvalidArgument("recurrence check is NSE-specific".into()));
    }
    if traj.k_max < 2 * spec.n + spec.d {
        return Err(Error::InvalidArgument(format!(
            "k_max = {} too small; need at least 2n + d = {}",
            traj.k_max,
            2 * spec.n + spec.d
        )));
    }
    let tol = 1e-9;
    let s1 = g.graph.all_clear_index();
    let period_gain = (spec.n - spec.d) as f64;

    for s in g.graph.max_budget_states() {
        for k in spec.n..=traj.k_max {
            if (traj.w[k][s] - period_gain - traj.w[k - spec.n][s]).abs() > tol {
                return Ok(false);
            }
        }
    }
    for k in 1..=traj.k_max {
        let min = traj.w[k].iter().cloned().fold(f64::INFINITY, f64::min);
        if (traj.w[k][s1] - min).abs() > tol {
            return Ok(false);
        }
    }
    for k in 0..=spec.d.min(traj.k_max) {
        if traj.w[k][s1].abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Combined capacity report for one spec.
#[derive(Debug, Clone)]
pub struct CapacityReport {
    pub spec: ChannelSpec,
    pub dp: DPTrajectory,
    pub mmc: MinMeanCycle,
    pub closed: ClosedFormC0f,
    /// `|dp estimate - min mean cycle|` at `k_max`.
    pub convergence_gap: f64,
}

/// Run all three routes (value iteration for `k_max` steps, exact minimum
/// mean cycle, closed form).
pub fn capacity_report(spec: &ChannelSpec, k_max: Option<usize>) -> Result<CapacityReport> {
    let g = GainGraph::for_spec(spec)?;
    let k_max = k_max.unwrap_or(10 * g.graph().len()).max(g.graph().len());
    let dp = dp_capacity(&g, k_max)?;
    let mmc = min_mean_cycle(&g)?;
    let convergence_gap = (dp.final_estimate() - mmc.mean_log_gain).abs();
    Ok(CapacityReport { spec: *spec, dp, mmc, closed: closed_form_c0f(spec), convergence_gap })
}

/// Numerical spot-check of the unreduced first DP step: maximize over a
/// simplex grid of input distributions the min over successors of the
/// worst-case per-output mass ratio. Agrees with the reduced per-edge
/// gains up to grid resolution.
pub fn full_dp_first_step_grid(g: &GainGraph, grid: usize) -> Vec<f64> {
    let spec = *g.spec();
    let q = spec.q;
    let mut dists: Vec<Vec<f64>> = Vec::new();
    let mut stack = vec![(Vec::<usize>::new(), grid)];
    while let Some((prefix, left)) = stack.pop() {
        if prefix.len() == q - 1 {
            let mut p = prefix.clone();
            p.push(left);
            dists.push(p.iter().map(|&k| k as f64 / grid as f64).collect());
            continue;
        }
        for k in 0..=left {
            let mut next = prefix.clone();
            next.push(k);
            stack.push((next, left - k));
        }
    }

    (0..g.graph.len())
        .map(|s| {
            let mut best = f64::NEG_INFINITY;
            for p in &dists {
                let max_p = p.iter().cloned().fold(0.0, f64::max);
                let min_p = p.iter().cloned().fold(1.0, f64::min);
                if max_p == 0.0 {
                    continue;
                }
                let value = g
                    .graph
                    .out_edges(s)
                    .iter()
                    .map(|e| {
                        if !e.is_error() {
                            1.0 / max_p
                        } else {
                            match spec.kind {
                                // An erasure reveals nothing: the feasible
                                // input set is the whole alphabet.
                                ChannelKind::Nse => 1.0,
                                // A substitution rules out only the output
                                // symbol itself.
                                ChannelKind::Nss => 1.0 / (1.0 - min_p),
                            }
                        }
                    })
                    .fold(f64::INFINITY, f64::min);
                best = best.max(value);
            }
            best
        })
        .collect()
}
