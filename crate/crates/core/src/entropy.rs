//! Topological entropy of the channel state dynamics.
//!
//! The number of admissible error-pattern sequences grows like
//! `lambda_PF^N`, where `lambda_PF` is the Perron-Frobenius eigenvalue of
//! the 0/1 state transition matrix; its base-q logarithm `h_ch` is the
//! channel's topological entropy and enters the entropy lower bounds on
//! the zero-error capacity.

use crate::channel::{ChannelKind, ChannelSpec, StateGraph};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Spectral data of the state transition matrix.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub lambda_pf: f64,
    /// Topological entropy `log_q(lambda_pf)`.
    pub h_ch: f64,
    /// `max |A v - lambda v|` on the eigenvector normalized to unit
    /// max-norm.
    pub residual: f64,
    /// Average out-degree of the state graph.
    pub d_ave: f64,
    /// Maximum out-degree.
    pub d_max: usize,
    /// Minimum out-degree. For a directed graph this, not the average
    /// degree, is the sound lower bound on `lambda_pf`.
    pub d_min: usize,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 500_000;

/// Power iteration on the adjacency matrix.
///
/// The state graphs are irreducible but not necessarily aperiodic, so the
/// iterate is averaged with its predecessor (equivalently, `(A + I)` is
/// iterated), which always converges for irreducible nonnegative
/// matrices. Iteration stops when successive Rayleigh quotients differ by
/// less than `tol`.
pub fn perron_frobenius(graph: &StateGraph, tol: f64) -> Result<SpectralResult> {
    if !graph.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let n = graph.len();
    let matvec = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|s| graph.out_edges(s).iter().map(|e| v[e.to]).sum())
            .collect()
    };

    let mut v = vec![1.0; n];
    let mut lambda = 0.0;
    let mut residual;
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NonConvergence(MAX_ITERATIONS));
        }
        let av = matvec(&v);
        let rayleigh = dot(&v, &av) / dot(&v, &v);
        // Residual on the max-normalized iterate.
        let v_scale = v.iter().cloned().fold(0.0, f64::max);
        residual = av
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - rayleigh * b).abs())
            .fold(0.0, f64::max)
            / v_scale;
        let done = iterations > 1 && (rayleigh - lambda).abs() < tol && residual <= tol;
        lambda = rayleigh;
        if done {
            break;
        }
        // Averaged update guards against a periodic adjacency structure.
        let mut next: Vec<f64> = av.iter().zip(&v).map(|(a, b)| a + b).collect();
        let norm = next.iter().cloned().fold(0.0, f64::max);
        for x in &mut next {
            *x /= norm;
        }
        v = next;
    }

    let max = v.iter().cloned().fold(0.0, f64::max);
    for x in &mut v {
        *x /= max;
    }
    if v.iter().any(|&x| x <= 0.0) {
        return Err(Error::NonConvergence(iterations));
    }

    let spec = graph.spec();
    Ok(SpectralResult {
        lambda_pf: lambda,
        h_ch: spec.log_q(lambda),
        residual,
        d_ave: graph.average_degree(),
        d_max: graph.max_degree(),
        d_min: graph.min_degree(),
        iterations,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact number of state trajectories (equivalently, output sequences for
/// a fixed input) of length `steps` from state `s0`: the `s0` entry of
/// `A^steps * 1`, in arbitrary precision.
pub fn count_outputs(graph: &StateGraph, s0: usize, steps: usize) -> BigUint {
    count_outputs_all(graph, steps)[s0].clone()
}

/// `A^steps * 1` for every starting state.
pub fn count_outputs_all(graph: &StateGraph, steps: usize) -> Vec<BigUint> {
    let mut u = vec![BigUint::one(); graph.len()];
    for _ in 0..steps {
        u = (0..graph.len())
            .map(|s| graph.out_edges(s).iter().map(|e| u[e.to].clone()).sum())
            .collect();
    }
    u
}

/// Exact output counts at horizon `n_steps` plus the empirical growth
/// constant.
#[derive(Debug, Clone)]
pub struct OutputCountResult {
    pub n_steps: usize,
    pub counts_by_state: Vec<BigUint>,
    /// Empirical `beta`: max over `0 <= j <= n_steps` and states of
    /// `counts_j(s) / lambda_pf^j`.
    pub beta_bound: f64,
}

pub fn output_count_report(
    graph: &StateGraph,
    spectral: &SpectralResult,
    n_steps: usize,
) -> OutputCountResult {
    let mut u = vec![BigUint::one(); graph.len()];
    let mut beta: f64 = 1.0;
    let mut scale = 1.0;
    for _ in 0..n_steps {
        u = (0..graph.len())
            .map(|s| graph.out_edges(s).iter().map(|e| u[e.to].clone()).sum())
            .collect();
        scale *= spectral.lambda_pf;
        for c in &u {
            beta = beta.max(c.to_f64().unwrap_or(f64::INFINITY) / scale);
        }
    }
    OutputCountResult { n_steps, counts_by_state: u, beta_bound: beta }
}

/// Entropy lower bound on the zero-error capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct C0LowerBound {
    /// `1 - d/n - h_ch` for NSE; `1 - 2 h_ch` for NSS. May be
    /// negative; clamping is left to display code.
    pub value: f64,
    /// For NSS only: the alternative form `1 - d/n - 2 h_ch`. The two
    /// known forms of this bound differ by `d/n`; both are reported
    /// rather than silently picking one.
    pub appendix_variant: Option<f64>,
}

impl C0LowerBound {
    pub fn clamped(&self) -> f64 {
        self.value.max(0.0)
    }
}

pub fn c0_lower_bound(spec: &ChannelSpec, spectral: &SpectralResult) -> C0LowerBound {
    match spec.kind {
        ChannelKind::Nse => C0LowerBound {
            value: 1.0 - spec.error_rate() - spectral.h_ch,
            appendix_variant: None,
        },
        ChannelKind::Nss => C0LowerBound {
            value: 1.0 - 2.0 * spectral.h_ch,
            appendix_variant: Some(1.0 - spec.error_rate() - 2.0 * spectral.h_ch),
        },
    }
}

/// The loose degree-based bound `1 - d/n - log_q(d_max)` for NSE graphs
/// (`d_max = 2` whenever `d >= 1`).
pub fn degree_bound_estimate(graph: &StateGraph) -> Result<f64> {
    let spec = graph.spec();
    if spec.kind != ChannelKind::Nse {
        return Err(Error::InvalidArgument("degree bound is NSE-specific".into()));
    }
    Ok(1.0 - spec.error_rate() - spec.log_q(graph.max_degree() as f64))
}

/// `det(xI - A)` by Gaussian elimination with partial pivoting.
pub fn char_poly_eval(graph: &StateGraph, x: f64) -> f64 {
    let n = graph.len();
    let mut m = vec![vec![0.0f64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = x;
    }
    for e in graph.edges() {
        m[e.from][e.to] -= 1.0;
    }
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let f = row[col] / pivot_row[col];
            for (a, b) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *a -= f * b;
            }
        }
    }
    det
}

/// Dominant root of the characteristic polynomial by downward scan and
/// bisection — an eigenvalue route independent of power iteration, for
/// cross-validation on graphs of up to a few hundred states.
pub fn char_poly_dominant_root(graph: &StateGraph, tol: f64) -> Result<f64> {
    if graph.len() > 256 {
        return Err(Error::InvalidArgument(
            "characteristic-polynomial validation is for small graphs".into(),
        ));
    }
    // Beyond the largest real root the polynomial is positive (leading
    // coefficient 1); the Perron root is simple, so the sign flips just
    // below it.
    let mut hi = graph.max_degree() as f64 + 1.0;
    if char_poly_eval(graph, hi) <= 0.0 {
        return Err(Error::NonConvergence(0));
    }
    let step = 1.0 / 64.0;
    let mut lo = hi - step;
    while lo > -1.0 {
        if char_poly_eval(graph, lo) <= 0.0 {
            break;
        }
        hi = lo;
        lo -= step;
    }
    if char_poly_eval(graph, lo) > 0.0 {
        return Err(Error::NonConvergence(0));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if char_poly_eval(graph, mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < tol {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
