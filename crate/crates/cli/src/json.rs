//! JSON builders for each analysis, shared by the subcommands and the
//! batch report. Exact values are emitted as `{num, den}` objects; float
//! sections carry the tolerance they were computed under.

use num_rational::Ratio;
use serde_json::{json, Value};
use swchan_core::capacity::{CapacityFlag, CapacityReport};
use swchan_core::entropy::{C0LowerBound, OutputCountResult, SpectralResult};
use swchan_core::estimation::{EstimationTrace, FeasibilityVerdict, Verdict};
use swchan_core::oracle::{word_string, Codebook};
use swchan_core::{ChannelSpec, StateGraph};

pub fn ratio_json(r: Ratio<i64>) -> Value {
    json!({"num": *r.numer(), "den": *r.denom()})
}

pub fn spec_json(spec: &ChannelSpec) -> Value {
    json!({
        "kind": spec.kind.to_string(),
        "n": spec.n,
        "d": spec.d,
        "q": spec.q,
    })
}

fn flag_str(flag: CapacityFlag) -> &'static str {
    match flag {
        CapacityFlag::Exact => "exact",
        CapacityFlag::UpperBound => "upper_bound",
    }
}

pub fn capacity_json(report: &CapacityReport, include_dp: bool, include_mmc: bool, include_closed: bool) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("spec".into(), spec_json(&report.spec));
    if include_dp {
        out.insert("c0f_dp".into(), json!(report.dp.final_estimate()));
        out.insert("dp_iters".into(), json!(report.dp.k_max));
        out.insert("convergence_gap".into(), json!(report.convergence_gap));
    }
    if include_mmc {
        let mmc = match report.mmc.mean_log_gain_exact {
            Some(exact) => ratio_json(exact),
            None => json!({
                "value": report.mmc.mean_log_gain,
                "tol": 1e-9,
                "error_density": ratio_json(report.mmc.error_density),
            }),
        };
        out.insert("c0f_mmc".into(), mmc);
        out.insert("witness_cycle".into(), json!(report.mmc.witness));
    }
    if include_closed {
        let closed = match report.closed.exact {
            Some(exact) => ratio_json(exact),
            None => json!({"value": report.closed.value, "tol": 1e-9}),
        };
        out.insert("c0f_closed".into(), closed);
        out.insert("flag".into(), json!(flag_str(report.closed.flag)));
    }
    Value::Object(out)
}

pub fn entropy_json(spec: &ChannelSpec, spectral: &SpectralResult, bound: &C0LowerBound, tol: f64) -> Value {
    json!({
        "spec": spec_json(spec),
        "lambda_pf": spectral.lambda_pf,
        "h_ch": spectral.h_ch,
        "residual": spectral.residual,
        "d_ave": spectral.d_ave,
        "d_max": spectral.d_max,
        "d_min": spectral.d_min,
        "lower_bound": bound.value,
        "lower_bound_appendix_variant": bound.appendix_variant,
        "tol": tol,
    })
}

pub fn bounds_json(
    spec: &ChannelSpec,
    report: &CapacityReport,
    spectral: &SpectralResult,
    bound: &C0LowerBound,
    degree_bound: Option<f64>,
) -> Value {
    let closed = match report.closed.exact {
        Some(exact) => ratio_json(exact),
        None => json!({"value": report.closed.value, "tol": 1e-9}),
    };
    json!({
        "spec": spec_json(spec),
        "c0f_closed": closed,
        "flag": flag_str(report.closed.flag),
        "c0_lower_bound": bound.value,
        "c0_lower_bound_clamped": bound.clamped(),
        "c0_lower_bound_appendix_variant": bound.appendix_variant,
        "degree_bound": degree_bound,
        "h_ch": spectral.h_ch,
        "tol": 1e-9,
    })
}

pub fn counts_json(graph: &StateGraph, from: Option<usize>, counts: &OutputCountResult) -> Value {
    let kind = graph.spec().kind;
    let states: Vec<Value> = (0..graph.len())
        .filter(|s| from.is_none_or(|f| f == *s))
        .map(|s| {
            json!({
                "state": s,
                "word": graph.state(s).word(kind),
                "count": counts.counts_by_state[s].to_string(),
            })
        })
        .collect();
    json!({
        "spec": spec_json(graph.spec()),
        "steps": counts.n_steps,
        "counts": states,
        "beta_bound": counts.beta_bound,
    })
}

pub fn rate_row_json(spec: &ChannelSpec, cb: &Codebook) -> Value {
    json!({
        "t": cb.t,
        "size": cb.len(),
        "rate": cb.rate,
        "exact": cb.exact,
        "codewords": cb.codewords.iter().map(|w| word_string(w, spec.q)).collect::<Vec<_>>(),
    })
}

pub fn classify_json(spec: &ChannelSpec, verdict: &FeasibilityVerdict) -> Value {
    let v = match verdict.verdict {
        Verdict::AchievableBySufficientCondition => "achievable_by_sufficient_condition",
        Verdict::InfeasibleByNecessaryCondition => "infeasible_by_necessary_condition",
        Verdict::Indeterminate => "indeterminate",
    };
    json!({
        "spec": spec_json(spec),
        "verdict": v,
        "h_lin": verdict.h_lin,
        "h_ch": verdict.h_ch,
        "sufficient_lhs": verdict.sufficient_lhs,
        "sufficient_rhs": verdict.sufficient_rhs,
        "necessary_threshold": verdict.necessary_threshold,
    })
}

pub fn simulate_summary_json(trace: &EstimationTrace) -> Value {
    json!({
        "steps": trace.steps.len(),
        "sup_error": trace.sup_error,
        "sound": trace.sound,
        "block_factor": trace.block_factor,
    })
}

/// Trace CSV with the `t,x,xhat,err,interval_lo,interval_hi,channel_event`
/// schema (scalar plants only).
pub fn trace_csv(trace: &EstimationTrace) -> Result<String, swchan_core::Error> {
    let mut out = String::from("t,x,xhat,err,interval_lo,interval_hi,channel_event\n");
    for step in &trace.steps {
        if step.x.len() != 1 {
            return Err(swchan_core::Error::UnsupportedPlant(
                "trace CSV is defined for scalar plants".into(),
            ));
        }
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            step.t,
            step.x[0],
            step.x_hat[0],
            step.error[0],
            step.intervals[0].0,
            step.intervals[0].1,
            step.event,
        ));
    }
    Ok(out)
}
