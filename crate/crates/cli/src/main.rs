//! `swchan`: command-line front end for sliding-window channel analysis.

mod args;
mod config;
mod json;

use args::{
    parse_adversary, parse_block_range, parse_channel, parse_noise, parse_plant, CapacityMethod,
    Cli, Command, GraphFormat, OracleCommand, SpecArgsOpt, TableFormat,
};
use clap::Parser;
use config::ExperimentConfig;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use swchan_core::capacity::capacity_report;
use swchan_core::channel::{graph_to_dot, graph_to_json};
use swchan_core::entropy::{
    c0_lower_bound, degree_bound_estimate, output_count_report, perron_frobenius,
};
use swchan_core::estimation::{classify_feasibility, run_estimation, PlantSpec, RunOptions};
use swchan_core::oracle::{
    build_confusability, codebook_from_json, codebook_to_json, max_codebook,
};
use swchan_core::{ChannelKind, ChannelSpec, Error as CoreError, ResourceCaps, StateGraph};

/// Process failure with the documented exit codes: 2 config, 3 analysis,
/// 4 resource cap.
enum AppError {
    Config(String),
    Analysis(String),
    Cap(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Config(_) => 2,
            AppError::Analysis(_) => 3,
            AppError::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Config(m) | AppError::Analysis(m) | AppError::Cap(m) => m,
        }
    }
}

/// Tag a core error with the analysis it came from and sort it into an
/// exit class.
fn core_err(analysis: &str, e: CoreError) -> AppError {
    let message = format!("[{analysis}] {e}");
    match e {
        CoreError::ResourceCap { .. } => AppError::Cap(message),
        CoreError::InvalidSpec(_) => AppError::Config(message),
        _ => AppError::Analysis(message),
    }
}

fn config_err(message: impl Into<String>) -> AppError {
    AppError::Config(message.into())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), AppError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| AppError::Analysis(format!("writing {}: {e}", path.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    let caps = ResourceCaps::from_env();
    match cli.command {
        Command::States { spec, format, out } => {
            let spec = spec.to_spec().map_err(|e| core_err("states", e))?;
            let graph = StateGraph::build(spec).map_err(|e| core_err("states", e))?;
            let content = match format {
                GraphFormat::Json => graph_to_json(&graph),
                GraphFormat::Dot => graph_to_dot(&graph),
            };
            emit(&out, &content)
        }
        Command::Capacity { spec, method, iters, out } => {
            let spec = spec.to_spec().map_err(|e| core_err("capacity", e))?;
            let report =
                capacity_report(&spec, iters).map_err(|e| core_err("capacity", e))?;
            let (dp, mmc, closed) = match method {
                CapacityMethod::All => (true, true, true),
                CapacityMethod::Dp => (true, false, false),
                CapacityMethod::Mmc => (false, true, false),
                CapacityMethod::Closed => (false, false, true),
            };
            emit(&out, &pretty(&json::capacity_json(&report, dp, mmc, closed)))
        }
        Command::Entropy { spec, tol, out } => {
            let spec = spec.to_spec().map_err(|e| core_err("entropy", e))?;
            let graph = StateGraph::build(spec).map_err(|e| core_err("entropy", e))?;
            let spectral =
                perron_frobenius(&graph, tol).map_err(|e| core_err("entropy", e))?;
            let bound = c0_lower_bound(&spec, &spectral);
            emit(&out, &pretty(&json::entropy_json(&spec, &spectral, &bound, tol)))
        }
        Command::Count { spec, steps, from, out } => {
            let spec = spec.to_spec().map_err(|e| core_err("count", e))?;
            let graph = StateGraph::build(spec).map_err(|e| core_err("count", e))?;
            let from = match from.as_str() {
                "all" => None,
                s => Some(
                    s.parse::<usize>()
                        .ok()
                        .filter(|&i| i < graph.len())
                        .ok_or_else(|| config_err(format!("bad --from {s:?}")))?,
                ),
            };
            let spectral =
                perron_frobenius(&graph, 1e-10).map_err(|e| core_err("count", e))?;
            let counts = output_count_report(&graph, &spectral, steps);
            emit(&out, &pretty(&json::counts_json(&graph, from, &counts)))
        }
        Command::Bounds { spec, tol, out } => {
            let spec = spec.to_spec().map_err(|e| core_err("bounds", e))?;
            let content = bounds_analysis(&spec, tol)?;
            emit(&out, &pretty(&content))
        }
        Command::Oracle(cmd) => run_oracle(cmd, &caps),
        Command::Classify { plant, channel, out } => {
            let plant = parse_plant(&plant).map_err(config_err)?;
            let spec = parse_channel(&channel).map_err(config_err)?;
            let content = classify_analysis(&spec, &plant)?;
            emit(&out, &pretty(&content))
        }
        Command::Simulate { plant, channel, code, adversary, noise, steps, x0, trace, out } => {
            let plant = parse_plant(&plant).map_err(config_err)?;
            let spec = parse_channel(&channel).map_err(config_err)?;
            let summary = simulate_analysis(
                &spec,
                &plant,
                &code,
                &adversary,
                &noise,
                steps,
                x0.as_deref(),
                trace.as_deref(),
            )?;
            emit(&out, &pretty(&summary))
        }
        Command::Report { config, spec, out } => {
            let content = run_report(config.as_deref(), spec, &caps)?;
            emit(&out, &pretty(&content))
        }
    }
}

fn run_oracle(cmd: OracleCommand, caps: &ResourceCaps) -> Result<(), AppError> {
    match cmd {
        OracleCommand::Rate { spec, t, format, out } => {
            let spec = spec.to_spec().map_err(|e| core_err("oracle", e))?;
            let (lo, hi) = parse_block_range(&t).map_err(config_err)?;
            let mut rows = Vec::new();
            for t in lo..=hi {
                let graph =
                    build_confusability(&spec, t, caps).map_err(|e| core_err("oracle", e))?;
                let cb = max_codebook(&graph, caps);
                rows.push(cb);
            }
            let content = match format {
                TableFormat::Csv => {
                    let mut s = String::from("t,size,rate,exact\n");
                    for cb in &rows {
                        s.push_str(&format!("{},{},{},{}\n", cb.t, cb.len(), cb.rate, cb.exact));
                    }
                    s
                }
                TableFormat::Json => {
                    let rows: Vec<Value> =
                        rows.iter().map(|cb| json::rate_row_json(&spec, cb)).collect();
                    pretty(&json!({"spec": json::spec_json(&spec), "rates": rows}))
                }
            };
            emit(&out, &content)
        }
        OracleCommand::Codebook { spec, t, no_verify, out } => {
            let spec = spec.to_spec().map_err(|e| core_err("oracle", e))?;
            let graph =
                build_confusability(&spec, t, caps).map_err(|e| core_err("oracle", e))?;
            let mut cb = max_codebook(&graph, caps);
            if !no_verify {
                let ok = cb.verify(caps).map_err(|e| core_err("oracle", e))?;
                if !ok {
                    return Err(AppError::Analysis(
                        "[oracle] constructed codebook failed zero-error verification".into(),
                    ));
                }
            }
            emit(&out, &codebook_to_json(&cb))
        }
    }
}

fn bounds_analysis(spec: &ChannelSpec, tol: f64) -> Result<Value, AppError> {
    let graph = StateGraph::build(*spec).map_err(|e| core_err("bounds", e))?;
    let spectral = perron_frobenius(&graph, tol).map_err(|e| core_err("bounds", e))?;
    let bound = c0_lower_bound(spec, &spectral);
    let report = capacity_report(spec, Some(graph.len())).map_err(|e| core_err("bounds", e))?;
    let degree = match spec.kind {
        ChannelKind::Nse => Some(degree_bound_estimate(&graph).map_err(|e| core_err("bounds", e))?),
        ChannelKind::Nss => None,
    };
    Ok(json::bounds_json(spec, &report, &spectral, &bound, degree))
}

fn classify_analysis(spec: &ChannelSpec, plant: &PlantSpec) -> Result<Value, AppError> {
    let graph = StateGraph::build(*spec).map_err(|e| core_err("classify", e))?;
    let spectral = perron_frobenius(&graph, 1e-12).map_err(|e| core_err("classify", e))?;
    let verdict = classify_feasibility(plant, spec, &spectral);
    Ok(json::classify_json(spec, &verdict))
}

#[allow(clippy::too_many_arguments)]
fn simulate_analysis(
    spec: &ChannelSpec,
    plant: &PlantSpec,
    code: &Path,
    adversary: &str,
    noise: &str,
    steps: usize,
    x0: Option<&str>,
    trace_out: Option<&Path>,
) -> Result<Value, AppError> {
    let text = std::fs::read_to_string(code).map_err(|e| {
        AppError::Analysis(format!("[simulate] reading codebook {}: {e}", code.display()))
    })?;
    let codebook = codebook_from_json(&text).map_err(|e| core_err("simulate", e))?;
    let mut adversary = parse_adversary(adversary).map_err(config_err)?;
    let mut noise = parse_noise(noise).map_err(config_err)?;
    let x0: Vec<f64> = match x0 {
        Some(s) => s
            .split('|')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| config_err(format!("bad x0 {s:?}")))?,
        None => vec![0.9 * plant.initial_radius; plant.eigenvalues.len()],
    };
    let trace = run_estimation(
        plant,
        spec,
        &codebook,
        &mut adversary,
        &mut noise,
        &RunOptions { horizon: steps, x0 },
    )
    .map_err(|e| core_err("simulate", e))?;
    if let Some(path) = trace_out {
        let csv = json::trace_csv(&trace).map_err(|e| core_err("simulate", e))?;
        std::fs::write(path, csv).map_err(|e| {
            AppError::Analysis(format!("[simulate] writing {}: {e}", path.display()))
        })?;
    }
    Ok(json::simulate_summary_json(&trace))
}

fn run_report(
    config_path: Option<&Path>,
    flags: Option<SpecArgsOpt>,
    env_caps: &ResourceCaps,
) -> Result<Value, AppError> {
    let config = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                config_err(format!("reading config {}: {e}", path.display()))
            })?;
            ExperimentConfig::parse(&text).map_err(config_err)?
        }
        None => ExperimentConfig::parse("").map_err(config_err)?,
    };
    let caps = config.resource_caps(*env_caps);

    // The config file wins over flags; flags fill the gaps.
    let spec = match config.channel_spec().map_err(config_err)? {
        Some(spec) => spec,
        None => {
            let f = flags.ok_or_else(|| config_err("no channel given (flags or config)"))?;
            let (Some(kind), Some(n), Some(d), Some(q)) = (f.kind, f.n, f.d, f.q) else {
                return Err(config_err("need --kind, --n, --d, --q or a [channel] config"));
            };
            ChannelSpec::new(kind.into(), n, d, q).map_err(|e| core_err("report", e))?
        }
    };

    let mut results = serde_json::Map::new();
    for analysis in config.default_analyses() {
        let value = match analysis.as_str() {
            "states" => {
                let graph = StateGraph::build(spec).map_err(|e| core_err("states", e))?;
                serde_json::from_str::<Value>(&graph_to_json(&graph)).expect("valid json")
            }
            "capacity" => {
                let report = capacity_report(&spec, config.capacity.iters)
                    .map_err(|e| core_err("capacity", e))?;
                json::capacity_json(&report, true, true, true)
            }
            "entropy" => {
                let tol = config.entropy.as_ref().and_then(|e| e.tol).unwrap_or(1e-10);
                let graph = StateGraph::build(spec).map_err(|e| core_err("entropy", e))?;
                let spectral =
                    perron_frobenius(&graph, tol).map_err(|e| core_err("entropy", e))?;
                let bound = c0_lower_bound(&spec, &spectral);
                let mut value = json::entropy_json(&spec, &spectral, &bound, tol);
                if let Some(steps) = config.entropy.as_ref().and_then(|e| e.count_steps) {
                    let counts = output_count_report(&graph, &spectral, steps);
                    value["counts"] = json::counts_json(&graph, None, &counts);
                }
                value
            }
            "bounds" => bounds_analysis(&spec, 1e-10)?,
            "oracle" => {
                let (lo, hi) = match &config.oracle {
                    Some(o) => (o.t_min.unwrap_or(1), o.t_max.unwrap_or(4)),
                    None => (1, 4),
                };
                let mut rows = Vec::new();
                for t in lo..=hi.max(lo) {
                    let graph = build_confusability(&spec, t, &caps)
                        .map_err(|e| core_err("oracle", e))?;
                    let cb = max_codebook(&graph, &caps);
                    rows.push(json::rate_row_json(&spec, &cb));
                }
                json!({"rates": rows})
            }
            "classify" => {
                let cc = config
                    .classify
                    .as_ref()
                    .ok_or_else(|| config_err("classify requested but no [classify] config"))?;
                let plant = parse_plant(&cc.plant).map_err(config_err)?;
                classify_analysis(&spec, &plant)?
            }
            "simulate" => {
                let sc = config
                    .simulate
                    .as_ref()
                    .ok_or_else(|| config_err("simulate requested but no [simulate] config"))?;
                let plant = parse_plant(&sc.plant).map_err(config_err)?;
                simulate_analysis(
                    &spec,
                    &plant,
                    Path::new(&sc.code),
                    sc.adversary.as_deref().unwrap_or("greedy"),
                    sc.noise.as_deref().unwrap_or("extremal"),
                    sc.steps,
                    sc.x0.as_deref(),
                    sc.trace.as_deref().map(Path::new),
                )?
            }
            other => return Err(config_err(format!("unknown analysis {other:?}"))),
        };
        results.insert(analysis, value);
    }

    Ok(json!({
        "config": {
            "channel": json::spec_json(&spec),
            "analyses": config.default_analyses(),
            "seed": config.seed,
        },
        "results": Value::Object(results),
        "versions": {
            "swchan": env!("CARGO_PKG_VERSION"),
        },
    }))
}
