//! State estimation of unstable linear plants over sliding-window
//! channels.
//!
//! A scalar or diagonal plant `x(t+1) = A x(t) + v(t)` is estimated
//! through the channel by a set-valued coder-estimator: both ends track an
//! interval per mode that provably contains the state; each block of `tau`
//! channel uses the encoder quantizes one unstable mode's interval into
//! `M` cells (`M` = codebook size) and sends the cell index as a
//! zero-error codeword, so the decoder contracts the same interval without
//! any possibility of disagreement. Per block the interval contracts by
//! `|a|^tau / M` — below 1 the error stays bounded, above 1 the adversary
//! wins regardless of decoding.

use crate::capacity::closed_form_c0f;
use crate::channel::{AdversaryPolicy, ChannelEvent, ChannelKind, ChannelRuntime, ChannelSpec};
use crate::entropy::SpectralResult;
use crate::error::{Error, Result};
use crate::oracle::{decode_nse, decode_nss, Codebook};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A diagonal (or scalar) LTI plant with uniformly bounded disturbances
/// and initial condition in the ball of radius `initial_radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantSpec {
    /// Diagonal entries of `A`; the plant is scalar when there is one.
    pub eigenvalues: Vec<f64>,
    /// Radius `l` of the initial-state ball.
    pub initial_radius: f64,
    /// Process-noise bound `|v(t)| <= v_max` per mode.
    pub v_max: f64,
    /// Measurement-noise bound (the simulation observes the full state,
    /// so this only documents the assumption set).
    pub w_max: f64,
}

impl PlantSpec {
    pub fn scalar(a: f64, initial_radius: f64, v_max: f64) -> Self {
        Self { eigenvalues: vec![a], initial_radius, v_max, w_max: 0.0 }
    }

    /// `h_lin = sum over |lambda| >= 1 of log_q |lambda|`, in the base of
    /// the companion channel.
    pub fn h_lin(&self, q: usize) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|a| a.abs() >= 1.0)
            .map(|a| a.abs().ln() / (q as f64).ln())
            .sum()
    }

    /// Indices of strictly unstable modes.
    pub fn unstable_modes(&self) -> Vec<usize> {
        (0..self.eigenvalues.len())
            .filter(|&i| self.eigenvalues[i].abs() > 1.0)
            .collect()
    }

    pub fn is_unstable(&self) -> bool {
        !self.unstable_modes().is_empty()
    }

    fn validate_for_simulation(&self) -> Result<()> {
        if self.eigenvalues.is_empty() {
            return Err(Error::UnsupportedPlant("no modes".into()));
        }
        if let Some(a) = self.eigenvalues.iter().find(|a| a.abs() == 1.0) {
            // The theory is silent on magnitude-one modes; refuse rather
            // than guess.
            return Err(Error::UnsupportedPlant(format!(
                "eigenvalue {a} has magnitude exactly 1; bounded estimation is undefined here"
            )));
        }
        let bad = |x: f64| x.is_nan();
        if bad(self.initial_radius) || self.initial_radius <= 0.0 || bad(self.v_max) || self.v_max < 0.0
        {
            return Err(Error::UnsupportedPlant("need l > 0 and v_max >= 0".into()));
        }
        Ok(())
    }
}

/// Feasibility of uniformly bounded estimation over a given channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    /// The sufficient condition for achievability holds.
    AchievableBySufficientCondition,
    /// The necessary condition fails, so no coder-estimator works.
    InfeasibleByNecessaryCondition,
    /// Between the bounds (or exactly on a boundary).
    Indeterminate,
}

/// Classification outcome with the quantities that were compared.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityVerdict {
    pub verdict: Verdict,
    pub h_lin: f64,
    pub h_ch: f64,
    /// Left side of the sufficient condition (`h_lin + h_ch` for NSE,
    /// `h_lin + 2 h_ch` for NSS).
    pub sufficient_lhs: f64,
    /// Right side of the sufficient condition (`1 - d/n` for NSE, 1 for
    /// NSS).
    pub sufficient_rhs: f64,
    /// Infeasibility threshold on `h_lin` (`1 - d/n` for NSE,
    /// `1 - (d/n) log_q(q-1)` for NSS).
    pub necessary_threshold: f64,
}

/// Apply the achievability/converse inequalities. Strict inequalities
/// only; boundary ties come out `Indeterminate`. For NSS the capacity is
/// only bracketed, so the verdict never claims tightness.
pub fn classify_feasibility(
    plant: &PlantSpec,
    spec: &ChannelSpec,
    spectral: &SpectralResult,
) -> FeasibilityVerdict {
    let h_lin = plant.h_lin(spec.q);
    let h_ch = spectral.h_ch;
    let (sufficient_lhs, sufficient_rhs, necessary_threshold) = match spec.kind {
        ChannelKind::Nse => {
            let cap = 1.0 - spec.error_rate();
            (h_lin + h_ch, cap, cap)
        }
        ChannelKind::Nss => {
            (h_lin + 2.0 * h_ch, 1.0, closed_form_c0f(spec).value)
        }
    };
    let verdict = if sufficient_lhs < sufficient_rhs {
        Verdict::AchievableBySufficientCondition
    } else if h_lin > necessary_threshold {
        Verdict::InfeasibleByNecessaryCondition
    } else {
        Verdict::Indeterminate
    };
    FeasibilityVerdict { verdict, h_lin, h_ch, sufficient_lhs, sufficient_rhs, necessary_threshold }
}

/// Bounded process-noise generators.
pub enum NoiseGenerator {
    Zero,
    /// Fixed value each step, clamped to the bound.
    Constant(f64),
    /// `±v_max` pushing the state away from the decoder's interval
    /// center, the widening direction.
    Extremal,
    /// Uniform on `[-v_max, v_max]`.
    Uniform(Box<ChaCha8Rng>),
}

impl NoiseGenerator {
    pub fn uniform(seed: u64) -> Self {
        NoiseGenerator::Uniform(Box::new(ChaCha8Rng::seed_from_u64(seed)))
    }

    /// `offset` is the state's signed distance from the decoder's interval
    /// center.
    fn sample(&mut self, v_max: f64, offset: f64) -> f64 {
        match self {
            NoiseGenerator::Zero => 0.0,
            NoiseGenerator::Constant(v) => v.clamp(-v_max, v_max),
            NoiseGenerator::Extremal => {
                if offset >= 0.0 {
                    v_max
                } else {
                    -v_max
                }
            }
            NoiseGenerator::Uniform(rng) => rng.gen_range(-v_max..=v_max),
        }
    }
}

impl std::fmt::Debug for NoiseGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoiseGenerator::Zero => write!(f, "Zero"),
            NoiseGenerator::Constant(v) => write!(f, "Constant({v})"),
            NoiseGenerator::Extremal => write!(f, "Extremal"),
            NoiseGenerator::Uniform(_) => write!(f, "Uniform"),
        }
    }
}

/// Per-step record of a simulation run.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub t: usize,
    pub x: Vec<f64>,
    pub x_hat: Vec<f64>,
    pub error: Vec<f64>,
    /// Decoder-side interval per mode; always contains the true state.
    pub intervals: Vec<(f64, f64)>,
    pub event: ChannelEvent,
}

/// Full simulation record.
#[derive(Debug, Clone)]
pub struct EstimationTrace {
    pub steps: Vec<TraceStep>,
    /// `sup_t max_i |e_i(t)|`.
    pub sup_error: f64,
    /// True when the state stayed inside the interval at every step.
    pub sound: bool,
    /// Contraction factor `|a|^tau / M` of the slowest unstable mode.
    pub block_factor: f64,
}

/// Options for one simulation run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub horizon: usize,
    /// Initial state, one entry per mode, inside the `l`-ball.
    pub x0: Vec<f64>,
}

/// One mode of the set-valued estimator, tracked in interval-relative
/// coordinates. The interval is `center ± width/2` and
/// `delta = x - center` is maintained directly, so the estimation error
/// keeps full floating-point resolution even when the absolute state has
/// grown far beyond the noise scale.
#[derive(Debug, Clone, Copy)]
struct ModeState {
    a: f64,
    center: f64,
    width: f64,
    delta: f64,
}

impl ModeState {
    fn x(&self) -> f64 {
        self.center + self.delta
    }

    fn interval(&self) -> (f64, f64) {
        (self.center - 0.5 * self.width, self.center + 0.5 * self.width)
    }

    /// Plant step plus decoder propagation: `x' = a x + v`, interval
    /// bounds inflate by the noise bound.
    fn step(&mut self, v: f64, v_max: f64) {
        self.delta = self.a * self.delta + v;
        self.center *= self.a;
        self.width = self.a.abs() * self.width + 2.0 * v_max;
    }

    fn cell_of(&self, m: usize) -> usize {
        if self.width <= 0.0 || m <= 1 {
            return 0;
        }
        let r = self.delta / self.width + 0.5;
        ((r * m as f64).floor() as isize).clamp(0, m as isize - 1) as usize
    }
}

/// Simulate the set-valued coder-estimator over the channel.
///
/// Each block the encoder refines one unstable mode (round robin when
/// there are several); stable modes are never transmitted and stay
/// bounded by propagation alone. The decoder recovers the cell index
/// exactly thanks to the zero-error codebook, so encoder and decoder
/// intervals never diverge.
pub fn run_estimation(
    plant: &PlantSpec,
    spec: &ChannelSpec,
    codebook: &Codebook,
    adversary: &mut AdversaryPolicy,
    noise: &mut NoiseGenerator,
    opts: &RunOptions,
) -> Result<EstimationTrace> {
    plant.validate_for_simulation()?;
    if !codebook.verified {
        return Err(Error::CodebookNotVerified);
    }
    if codebook.spec != *spec {
        return Err(Error::InvalidArgument("codebook built for a different channel".into()));
    }
    if opts.x0.len() != plant.eigenvalues.len() {
        return Err(Error::InvalidArgument("x0 dimension mismatch".into()));
    }
    if opts.x0.iter().any(|x| x.abs() > plant.initial_radius) {
        return Err(Error::InvalidArgument("x0 outside the initial ball".into()));
    }

    let tau = codebook.t;
    let m_cells = codebook.len().max(1);
    let unstable = plant.unstable_modes();
    let l = plant.initial_radius;

    let mut modes: Vec<ModeState> = plant
        .eigenvalues
        .iter()
        .zip(&opts.x0)
        .map(|(&a, &x0)| ModeState { a, center: 0.0, width: 2.0 * l, delta: x0 })
        .collect();
    let mut rt = ChannelRuntime::new(*spec).record_history();

    let mut steps: Vec<TraceStep> = Vec::with_capacity(opts.horizon);
    let mut sup_error: f64 = 0.0;
    let mut sound = true;
    let eps = 1e-9;

    let mut target_mode = 0usize;
    let mut sent_cell = 0usize;
    let mut start_width = 2.0 * l;
    let mut received: Vec<u8> = Vec::with_capacity(tau);

    for t in 0..opts.horizon {
        let in_block = if tau > 0 { t % tau } else { 0 };
        if !unstable.is_empty() && tau > 0 && in_block == 0 {
            let block_index = t / tau;
            target_mode = unstable[block_index % unstable.len()];
            sent_cell = modes[target_mode].cell_of(m_cells);
            start_width = modes[target_mode].width;
            received.clear();
        }

        // Transmit this block's codeword symbol.
        let event = if !unstable.is_empty() && tau > 0 {
            let symbol = codebook.codewords[sent_cell][in_block] as usize;
            let output = rt.step(symbol, adversary)?;
            received.push(match output {
                crate::channel::Output::Symbol(s) => s as u8,
                crate::channel::Output::Erasure => spec.q as u8,
            });
            rt.history().and_then(|h| h.last()).map(|r| r.event).unwrap_or(ChannelEvent::Clear)
        } else {
            ChannelEvent::Clear
        };

        // Record the step against the current decoder knowledge.
        for m in &modes {
            let tol = eps * (1.0 + m.width);
            if m.delta.abs() > 0.5 * m.width + tol {
                sound = false;
            }
            sup_error = sup_error.max(m.delta.abs());
        }
        steps.push(TraceStep {
            t,
            x: modes.iter().map(ModeState::x).collect(),
            x_hat: modes.iter().map(|m| m.center).collect(),
            error: modes.iter().map(|m| m.delta).collect(),
            intervals: modes.iter().map(ModeState::interval).collect(),
            event,
        });

        // Plant evolves; decoder knowledge propagates alongside.
        for m in &mut modes {
            let v = noise.sample(plant.v_max, m.delta);
            m.step(v, plant.v_max);
        }

        // Block boundary: decode and contract retroactively.
        if !unstable.is_empty() && tau > 0 && in_block == tau - 1 {
            let decoded = match spec.kind {
                ChannelKind::Nse => decode_nse(codebook, &received),
                ChannelKind::Nss => decode_nss(codebook, &received),
            }
            .ok_or_else(|| {
                Error::InvalidArgument("block decoding failed; codebook is not zero-error".into())
            })?;
            if decoded != sent_cell {
                return Err(Error::InvalidArgument(
                    "block decoded to the wrong cell; codebook is not zero-error".into(),
                ));
            }
            // Contract the block-start interval to the decoded cell, then
            // replay the block's propagation on it. The center shifts by
            // the cell offset, scaled through tau plant steps.
            let mode = &mut modes[target_mode];
            let shift = ((decoded as f64 + 0.5) / m_cells as f64 - 0.5) * start_width;
            let scale = mode.a.powi(tau as i32);
            mode.center += scale * shift;
            mode.delta -= scale * shift;
            let mut width = start_width / m_cells as f64;
            for _ in 0..tau {
                width = mode.a.abs() * width + 2.0 * plant.v_max;
            }
            mode.width = width;
        }
    }

    let block_factor = unstable
        .iter()
        .map(|&i| plant.eigenvalues[i].abs().powi(tau as i32) / m_cells as f64)
        .fold(0.0, f64::max);
    Ok(EstimationTrace { steps, sup_error, sound, block_factor })
}

/// Counting lower bound on the worst-case error at a horizon: a code of
/// rate `R` distinguishes at most `q^(R t)` messages by time `t`, so some
/// initial cell of diameter `2 l q^(-R t)` stays unresolved and the error
/// reaches `l |a|^t q^(-R t)`.
#[derive(Debug, Clone)]
pub struct NecessityCertificate {
    /// `log_q|a| - R`; positive means the bound diverges.
    pub growth_exponent: f64,
    pub diverges: bool,
    /// `bound[t] = l * |a|^t * q^(-R t)` for `t = 0..=horizon`.
    pub bounds: Vec<f64>,
}

pub fn necessity_certificate(
    plant: &PlantSpec,
    q: usize,
    rate: f64,
    horizon: usize,
    l: f64,
) -> Result<NecessityCertificate> {
    if plant.eigenvalues.len() != 1 {
        return Err(Error::UnsupportedPlant(
            "the counting certificate is stated for scalar plants".into(),
        ));
    }
    let a = plant.eigenvalues[0].abs();
    if a <= 1.0 {
        return Err(Error::UnsupportedPlant("certificate needs |a| > 1".into()));
    }
    if rate < 0.0 {
        return Err(Error::InvalidArgument("rate must be nonnegative".into()));
    }
    let lnq = (q as f64).ln();
    let growth_exponent = a.ln() / lnq - rate;
    let bounds = (0..=horizon)
        .map(|t| l * (lnq * growth_exponent * t as f64).exp())
        .collect();
    Ok(NecessityCertificate { growth_exponent, diverges: growth_exponent > 0.0, bounds })
}

/// Error envelope across a suite of channel adversaries, noise generators,
/// and initial conditions.
#[derive(Debug, Clone)]
pub struct ErrorGrowthEnvelope {
    /// Per step: max over the suite of the error magnitude.
    pub per_step_max: Vec<f64>,
    /// Max of `per_step_max` within each block.
    pub block_peaks: Vec<f64>,
    /// Geometric mean of consecutive block-peak ratios (from block 1 on).
    pub mean_block_growth: f64,
    pub runs: usize,
}

/// Run the estimator against greedy, seeded-random, and block-targeted
/// adversaries crossed with extremal/constant/random noise and a grid of
/// initial conditions, and fold the traces into a worst-case envelope.
pub fn adversarial_error_growth(
    plant: &PlantSpec,
    spec: &ChannelSpec,
    codebook: &Codebook,
    n_blocks: usize,
) -> Result<ErrorGrowthEnvelope> {
    let tau = codebook.t.max(1);
    let horizon = n_blocks * tau;
    let l = plant.initial_radius;
    if horizon == 0 {
        return Ok(ErrorGrowthEnvelope {
            per_step_max: vec![l],
            block_peaks: vec![l],
            mean_block_growth: 1.0,
            runs: 0,
        });
    }

    let make_adversary = |idx: usize| -> AdversaryPolicy {
        match idx {
            0 => AdversaryPolicy::Greedy,
            1 => AdversaryPolicy::random(1),
            2 => AdversaryPolicy::random(2),
            // Target the first symbol of every block.
            _ => AdversaryPolicy::scripted(
                (0..horizon).map(|t| u8::from(t % tau == 0)).collect(),
            ),
        }
    };
    let noises = [0usize, 1, 2, 3, 4];
    let x0_grid = [-0.77, -0.31, 0.31, 0.77, 0.999];

    let mut per_step_max = vec![0.0f64; horizon];
    let mut runs = 0;
    for adv_idx in 0..4 {
        for &noise_idx in &noises {
            for &frac in &x0_grid {
                let mut adv = make_adversary(adv_idx);
                let mut noise = match noise_idx {
                    0 => NoiseGenerator::Extremal,
                    1 => NoiseGenerator::Constant(plant.v_max),
                    2 => NoiseGenerator::Constant(-plant.v_max),
                    3 => NoiseGenerator::uniform(5),
                    _ => NoiseGenerator::uniform(6),
                };
                let x0 = vec![frac * l; plant.eigenvalues.len()];
                let trace = run_estimation(
                    plant,
                    spec,
                    codebook,
                    &mut adv,
                    &mut noise,
                    &RunOptions { horizon, x0 },
                )?;
                if !trace.sound {
                    return Err(Error::InvalidArgument(
                        "estimator lost the state; soundness violated".into(),
                    ));
                }
                for (t, step) in trace.steps.iter().enumerate() {
                    let mag =
                        step.error.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
                    per_step_max[t] = per_step_max[t].max(mag);
                }
                runs += 1;
            }
        }
    }

    let block_peaks: Vec<f64> = (0..n_blocks)
        .map(|b| {
            per_step_max[b * tau..(b + 1) * tau]
                .iter()
                .cloned()
                .fold(0.0, f64::max)
        })
        .collect();
    let mean_block_growth = if block_peaks.len() >= 3 && block_peaks[1] > 0.0 {
        let first = block_peaks[1];
        let last = *block_peaks.last().unwrap();
        (last / first).powf(1.0 / (block_peaks.len() - 2) as f64)
    } else {
        1.0
    };
    Ok(ErrorGrowthEnvelope { per_step_max, block_peaks, mean_block_growth, runs })
}
