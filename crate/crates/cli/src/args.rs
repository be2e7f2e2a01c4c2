//! Command-line surface and the small string parsers for compound flags.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use swchan_core::estimation::{NoiseGenerator, PlantSpec};
use swchan_core::{AdversaryPolicy, ChannelKind, ChannelSpec};

#[derive(Parser)]
#[command(
    name = "swchan",
    version,
    about = "Worst-case sliding-window channels: state graphs, zero-error capacity bounds, exact codebooks, and estimation experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Nse,
    Nss,
}

impl From<KindArg> for ChannelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Nse => ChannelKind::Nse,
            KindArg::Nss => ChannelKind::Nss,
        }
    }
}

/// The shared `--kind/--n/--d/--q` channel flags.
#[derive(Args, Clone, Copy)]
pub struct SpecArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub q: usize,
}

impl SpecArgs {
    pub fn to_spec(self) -> swchan_core::Result<ChannelSpec> {
        ChannelSpec::new(self.kind.into(), self.n, self.d, self.q)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CapacityMethod {
    All,
    Dp,
    Mmc,
    Closed,
}

#[derive(Subcommand)]
pub enum Command {
    /// Enumerate channel states and transitions.
    States {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zero-error feedback capacity: value iteration, exact minimum mean
    /// cycle, and closed form.
    Capacity {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "all")]
        method: CapacityMethod,
        /// Value-iteration steps (default 10 |S|).
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perron-Frobenius eigenvalue and topological entropy.
    Entropy {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact output-sequence counts per initial state.
    Count {
        #[command(flatten)]
        spec: SpecArgs,
        /// Horizon N.
        #[arg(short = 'N', long = "steps")]
        steps: usize,
        /// Initial state index, or "all".
        #[arg(long, default_value = "all")]
        from: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Capacity bounds: closed forms, entropy lower bounds, degree bound.
    Bounds {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zero-error codebook construction.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Feasibility of bounded estimation for a plant over a channel.
    Classify {
        /// Plant, e.g. "a=1.2,l=1,vmax=0.01" (multi-mode: "a=1.2|0.5,...").
        #[arg(long)]
        plant: String,
        /// Channel, e.g. "nse:3,1,2".
        #[arg(long)]
        channel: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the set-valued coder-estimator over an adversarial channel.
    Simulate {
        #[arg(long)]
        plant: String,
        #[arg(long)]
        channel: String,
        /// Path to a codes.json file (see `oracle codebook`).
        #[arg(long)]
        code: PathBuf,
        /// "greedy", "random:SEED", or "script:011...".
        #[arg(long, default_value = "greedy")]
        adversary: String,
        /// "extremal", "zero", "uniform:SEED", or "const:V".
        #[arg(long, default_value = "extremal")]
        noise: String,
        #[arg(long)]
        steps: usize,
        /// Initial state per mode, '|'-separated (default 0.9 l).
        #[arg(long)]
        x0: Option<String>,
        /// Write the per-step trace CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a batch of analyses and emit one JSON report.
    Report {
        /// TOML experiment config; its values override the flags below.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        spec: Option<SpecArgsOpt>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Optional variant of the channel flags for `report`, where a config
/// file may supply them instead.
#[derive(Args, Clone, Copy)]
pub struct SpecArgsOpt {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(Subcommand)]
pub enum OracleCommand {
    /// Best exact codebook rate per block length.
    Rate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Block lengths, "3" or "3..6" (inclusive).
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build (and verify) one maximum codebook, emitting codes.json.
    Codebook {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        t: usize,
        /// Skip the exhaustive zero-error verification.
        #[arg(long)]
        no_verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse "nse:3,1,2".
pub fn parse_channel(s: &str) -> Result<ChannelSpec, String> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("channel {s:?} should look like nse:3,1,2"))?;
    let kind = match kind {
        "nse" => ChannelKind::Nse,
        "nss" => ChannelKind::Nss,
        other => return Err(format!("unknown channel kind {other:?}")),
    };
    let parts: Vec<&str> = rest.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("channel {s:?} needs n,d,q"));
    }
    let parse = |p: &str, name: &str| {
        p.trim().parse::<usize>().map_err(|_| format!("bad {name} in channel {s:?}"))
    };
    ChannelSpec::new(kind, parse(parts[0], "n")?, parse(parts[1], "d")?, parse(parts[2], "q")?)
        .map_err(|e| e.to_string())
}

/// Parse "a=1.2,l=1,vmax=0.01[,wmax=0]"; `a` may be '|'-separated for
/// diagonal plants.
pub fn parse_plant(s: &str) -> Result<PlantSpec, String> {
    let mut eigenvalues = None;
    let mut l = None;
    let mut v_max = None;
    let mut w_max = 0.0;
    for part in s.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("plant field {part:?} should be key=value"))?;
        match key.trim() {
            "a" => {
                let parsed: Result<Vec<f64>, _> =
                    value.split('|').map(|v| v.trim().parse::<f64>()).collect();
                eigenvalues = Some(parsed.map_err(|_| format!("bad eigenvalues {value:?}"))?);
            }
            "l" => l = Some(value.trim().parse().map_err(|_| format!("bad l {value:?}"))?),
            "vmax" => {
                v_max = Some(value.trim().parse().map_err(|_| format!("bad vmax {value:?}"))?)
            }
            "wmax" => {
                w_max = value.trim().parse().map_err(|_| format!("bad wmax {value:?}"))?
            }
            other => return Err(format!("unknown plant field {other:?}")),
        }
    }
    Ok(PlantSpec {
        eigenvalues: eigenvalues.ok_or("plant needs a=...")?,
        initial_radius: l.ok_or("plant needs l=...")?,
        v_max: v_max.ok_or("plant needs vmax=...")?,
        w_max,
    })
}

/// Parse "greedy", "random:SEED", "script:0110...".
pub fn parse_adversary(s: &str) -> Result<AdversaryPolicy, String> {
    if s == "greedy" {
        return Ok(AdversaryPolicy::Greedy);
    }
    if let Some(seed) = s.strip_prefix("random:") {
        let seed = seed.parse().map_err(|_| format!("bad seed in {s:?}"))?;
        return Ok(AdversaryPolicy::random(seed));
    }
    if let Some(script) = s.strip_prefix("script:") {
        let labels = script
            .chars()
            .map(|c| c.to_digit(36).map(|v| v as u8).ok_or(format!("bad script char {c:?}")))
            .collect::<Result<Vec<u8>, _>>()?;
        return Ok(AdversaryPolicy::scripted(labels));
    }
    Err(format!("unknown adversary {s:?}"))
}

/// Parse "extremal", "zero", "uniform:SEED", "const:V".
pub fn parse_noise(s: &str) -> Result<NoiseGenerator, String> {
    if s == "extremal" {
        return Ok(NoiseGenerator::Extremal);
    }
    if s == "zero" {
        return Ok(NoiseGenerator::Zero);
    }
    if let Some(seed) = s.strip_prefix("uniform:") {
        let seed = seed.parse().map_err(|_| format!("bad seed in {s:?}"))?;
        return Ok(NoiseGenerator::uniform(seed));
    }
    if let Some(v) = s.strip_prefix("const:") {
        let v = v.parse().map_err(|_| format!("bad value in {s:?}"))?;
        return Ok(NoiseGenerator::Constant(v));
    }
    Err(format!("unknown noise generator {s:?}"))
}

/// Parse "3" or "3..6" into an inclusive range.
pub fn parse_block_range(s: &str) -> Result<(usize, usize), String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo = lo.parse().map_err(|_| format!("bad range {s:?}"))?;
        let hi = hi.parse().map_err(|_| format!("bad range {s:?}"))?;
        if lo == 0 || hi < lo {
            return Err(format!("bad range {s:?}"));
        }
        Ok((lo, hi))
    } else {
        let t = s.parse().map_err(|_| format!("bad block length {s:?}"))?;
        if t == 0 {
            return Err("block length must be positive".into());
        }
        Ok((t, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_parser() {
        let spec = parse_channel("nse:3,1,2").unwrap();
        assert_eq!((spec.kind, spec.n, spec.d, spec.q), (ChannelKind::Nse, 3, 1, 2));
        assert!(parse_channel("nse:5,3").is_err());
        assert!(parse_channel("foo:3,1,2").is_err());
        assert!(parse_channel("nse:3,5,2").is_err());
    }

    #[test]
    fn plant_parser() {
        let p = parse_plant("a=1.2,l=1,vmax=0.01").unwrap();
        assert_eq!(p.eigenvalues, vec![1.2]);
        assert_eq!(p.initial_radius, 1.0);
        let p = parse_plant("a=1.2|0.5,l=2,vmax=0.01,wmax=0.1").unwrap();
        assert_eq!(p.eigenvalues.len(), 2);
        assert_eq!(p.w_max, 0.1);
        assert!(parse_plant("l=1,vmax=0").is_err());
        assert!(parse_plant("a=x,l=1,vmax=0").is_err());
    }

    #[test]
    fn range_parser() {
        assert_eq!(parse_block_range("3").unwrap(), (3, 3));
        assert_eq!(parse_block_range("3..6").unwrap(), (3, 6));
        assert!(parse_block_range("6..3").is_err());
        assert!(parse_block_range("0").is_err());
    }

    #[test]
    fn adversary_and_noise_parsers() {
        assert!(parse_adversary("greedy").is_ok());
        assert!(parse_adversary("random:7").is_ok());
        assert!(parse_adversary("script:0101").is_ok());
        assert!(parse_adversary("omniscient").is_err());
        assert!(parse_noise("extremal").is_ok());
        assert!(parse_noise("uniform:3").is_ok());
        assert!(parse_noise("const:0.01").is_ok());
        assert!(parse_noise("gauss").is_err());
    }
}
