//! Command-line front end: instance I/O, method selection, atlas /
//! expectation / enumeration / decomposition commands, seeded sampling, and
//! machine-readable JSON output.
//!
//! All rationals are emitted as `"num/den"` strings; identical arguments and
//! seed produce byte-identical output. Exit codes: 0 success, 2 validation
//! error, 3 resource cap.

use apportion_core::adversary::{adversary_fixed_divisor, adversary_stationary};
use apportion_core::arrangement::{instance_from_arrangement, ArrangementSpec};
use apportion_core::dist::{DeltaDistribution, TieBreak};
use apportion_core::flow::{
    decompose_quota, enumerate_hm_quota, phi, sample_hm_method, FlowLimits,
};
use apportion_core::hamilton::apportion_hamilton;
use apportion_core::power_mean::{apportion_power_mean, PowerMean};
use apportion_core::randomized::{
    apportion_fixed_divisor, draw_delta, expected_apportionment, fixed_pop_bound_check,
    paired_shifts_with, sample_randomized_divisor_with, stream_rng, ShiftVector,
};
use apportion_core::stationary::apportion_stationary;
use apportion_core::sweep::{breakpoint_atlas, quota_partition};
use apportion_core::{Error, Instance, Outcome, Rat};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "apportion", version, about = "Exact apportionment methods and their outcome spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Instance JSON file: {"populations":[...],"house":H}
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (only json)
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Apportion one instance under a named method
    Apportion {
        #[command(flatten)]
        io: Io,
        /// stationary | adams | webster | jefferson | power-mean | dean | hill | hamilton
        #[arg(long)]
        method: String,
        /// Shift parameter for --method stationary
        #[arg(long)]
        delta: Option<String>,
        /// Exponent for --method power-mean: rational, +inf, or -inf
        #[arg(long)]
        q: Option<String>,
    },
    /// Breakpoints and outcomes of all stationary divisor methods
    Atlas {
        #[command(flatten)]
        io: Io,
    },
    /// The lower/upper quota partition thresholds (tau, tau_bar)
    QuotaPartition {
        #[command(flatten)]
        io: Io,
    },
    /// Exact expected apportionment under a shift distribution
    Expect {
        #[command(flatten)]
        io: Io,
        /// Shift distribution JSON file
        #[arg(long)]
        g: PathBuf,
        /// uniform | lexmax | lexmin | random
        #[arg(long, default_value = "uniform")]
        tiebreak: String,
    },
    /// Seeded sampling of randomized methods
    Sample {
        #[command(flatten)]
        io: Io,
        /// stationary | fixed-divisor
        #[arg(long)]
        method: String,
        /// Shift distribution JSON (required for stationary; optional for
        /// fixed-divisor, which defaults to the paired uniform sampler)
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: u64,
        #[arg(long, default_value = "uniform")]
        tiebreak: String,
    },
    /// House-monotone quota-compliant machinery
    #[command(subcommand)]
    Hm(HmCommand),
    /// Adversarial instances certifying worst-case deviation bounds
    GenAdversary {
        #[command(flatten)]
        io: Io,
        /// stationary | fixed-divisor
        #[arg(long)]
        kind: String,
        #[arg(long)]
        house: Option<u64>,
        #[arg(long)]
        delta: Option<String>,
        /// Comma-separated first signposts for --kind fixed-divisor
        #[arg(long)]
        signposts: Option<String>,
        #[arg(long)]
        eps: String,
    },
    /// Instance whose level reproduces the k-level of a line arrangement
    GenFromArrangement {
        #[command(flatten)]
        io: Io,
        /// Arrangement JSON file: {"lines":[{"m":"7/4","c":"7/4"},...]}
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum HmCommand {
    /// All apportionments reachable by house-monotone quota-compliant
    /// solutions
    Enumerate {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        house: u64,
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        max_horizon: Option<u64>,
    },
    /// The lookahead table Phi(p, 0..=H)
    Phi {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        house: u64,
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        max_horizon: Option<u64>,
    },
    /// Exact convex decomposition of the proportional point
    Decompose {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        max_horizon: Option<u64>,
    },
    /// One draw of the induced randomized method
    Sample {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        house: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        max_horizon: Option<u64>,
    },
}

fn limits(max_nodes: Option<usize>, max_horizon: Option<u64>) -> FlowLimits {
    let mut l = FlowLimits::default();
    if let Some(n) = max_nodes {
        l.max_nodes = n;
    }
    if let Some(h) = max_horizon {
        l.max_horizon = h;
    }
    l
}

fn outcome_json(o: &Outcome) -> Value {
    json!({"base": o.base, "tied": o.tied, "extra": o.extra})
}

fn read_instance(io: &Io) -> Result<Instance, Error> {
    let path = io
        .instance
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("--instance is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInstance(format!("{}: {e}", path.display())))?;
    Instance::from_json(&text)
}

fn read_dist(path: &PathBuf) -> Result<DeltaDistribution, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidDistribution(format!("{}: {e}", path.display())))?;
    DeltaDistribution::from_json(&text)
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    Rat::from_str(s)
}

fn run_command(cmd: Command) -> Result<(Io, Value), Error> {
    match cmd {
        Command::Apportion {
            io,
            method,
            delta,
            q,
        } => {
            let inst = read_instance(&io)?;
            let o = match method.as_str() {
                "stationary" => {
                    let d = delta
                        .ok_or_else(|| Error::InvalidParameter("--delta required".into()))?;
                    apportion_stationary(&inst, &parse_rat(&d)?)?
                }
                "adams" => apportion_stationary(&inst, &Rat::zero())?,
                "webster" => apportion_stationary(&inst, &Rat::new(1, 2))?,
                "jefferson" => apportion_stationary(&inst, &Rat::one())?,
                "power-mean" => {
                    let q = q.ok_or_else(|| Error::InvalidParameter("--q required".into()))?;
                    apportion_power_mean(&inst, &PowerMean::parse(&q)?)?
                }
                "dean" => apportion_power_mean(&inst, &PowerMean::Finite(Rat::from_int(-1)))?,
                "hill" => apportion_power_mean(&inst, &PowerMean::Finite(Rat::zero()))?,
                "hamilton" => apportion_hamilton(&inst)?,
                other => {
                    return Err(Error::InvalidParameter(format!("unknown method {other:?}")))
                }
            };
            Ok((io, outcome_json(&o)))
        }
        Command::Atlas { io } => {
            let inst = read_instance(&io)?;
            let atlas = breakpoint_atlas(&inst);
            let intervals: Vec<Value> = atlas
                .interval_outcomes
                .iter()
                .enumerate()
                .map(|(j, o)| {
                    let (lo, hi) = atlas.interval_bounds(j);
                    json!({
                        "lo": lo.to_string(),
                        "hi": hi.to_string(),
                        "base": o.base,
                        "tied": o.tied,
                        "extra": o.extra,
                    })
                })
                .collect();
            let at_breakpoints: Vec<Value> = atlas
                .breakpoints
                .iter()
                .zip(&atlas.breakpoint_outcomes)
                .map(|(tau, o)| {
                    json!({
                        "at": tau.to_string(),
                        "base": o.base,
                        "tied": o.tied,
                        "extra": o.extra,
                    })
                })
                .collect();
            let at0 = match &atlas.endpoints.at_zero {
                Some(o) => outcome_json(o),
                None => json!({"empty": true}),
            };
            Ok((
                io,
                json!({
                    "breakpoints": atlas.breakpoints.iter().map(Rat::to_string).collect::<Vec<_>>(),
                    "intervals": intervals,
                    "at_breakpoints": at_breakpoints,
                    "endpoints": {"at0": at0, "at1": outcome_json(&atlas.endpoints.at_one)},
                }),
            ))
        }
        Command::QuotaPartition { io } => {
            let inst = read_instance(&io)?;
            let qp = quota_partition(&inst);
            Ok((
                io,
                json!({"tau": qp.tau_low.to_string(), "tau_bar": qp.tau_high.to_string()}),
            ))
        }
        Command::Expect { io, g, tiebreak } => {
            let inst = read_instance(&io)?;
            let g = read_dist(&g)?;
            let b = TieBreak::parse(&tiebreak)?;
            let expected = expected_apportionment(&inst, &g, b)?;
            let bounds = if g.mean() == Rat::new(1, 2) {
                let report = fixed_pop_bound_check(&inst, &g)?;
                json!({
                    "pop_ratio": report.entries.iter().map(|e| e.bound.to_string()).collect::<Vec<_>>(),
                    "holds": report.ok,
                })
            } else {
                Value::Null
            };
            Ok((
                io,
                json!({
                    "expected": expected.iter().map(Rat::to_string).collect::<Vec<_>>(),
                    "bounds": bounds,
                }),
            ))
        }
        Command::Sample {
            io,
            method,
            g,
            seed,
            reps,
            tiebreak,
        } => {
            let inst = read_instance(&io)?;
            let b = TieBreak::parse(&tiebreak)?;
            let mut samples = Vec::with_capacity(reps as usize);
            match method.as_str() {
                "stationary" => {
                    let g = g.ok_or_else(|| {
                        Error::InvalidParameter("--g required for stationary sampling".into())
                    })?;
                    let g = read_dist(&g)?;
                    for rep in 0..reps {
                        let mut rng = stream_rng(seed, rep);
                        samples.push(sample_randomized_divisor_with(&inst, &g, b, &mut rng)?);
                    }
                }
                "fixed-divisor" => {
                    let g = g.map(|p| read_dist(&p)).transpose()?;
                    for rep in 0..reps {
                        let mut rng = stream_rng(seed, rep);
                        let shifts = match &g {
                            // default: the paired sampler of the variable-size method
                            None => paired_shifts_with(inst.n(), &mut rng),
                            // i.i.d. per-state shifts from G, for comparison
                            Some(g) => ShiftVector(
                                (0..inst.n()).map(|_| draw_delta(g, &mut rng)).collect(),
                            ),
                        };
                        samples.push(apportion_fixed_divisor(&inst, &shifts)?);
                    }
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown sampling method {other:?}"
                    )))
                }
            }
            Ok((io, json!({"samples": samples})))
        }
        Command::Hm(hm) => match hm {
            HmCommand::Enumerate {
                io,
                house,
                max_nodes,
                max_horizon,
            } => {
                let inst = read_instance(&io)?;
                let l = limits(max_nodes, max_horizon);
                let vecs = enumerate_hm_quota(&inst, house, &l)?;
                Ok((io, json!(vecs)))
            }
            HmCommand::Phi {
                io,
                house,
                max_nodes,
                max_horizon,
            } => {
                let inst = read_instance(&io)?;
                let l = limits(max_nodes, max_horizon);
                let table = phi(&inst, house, &l)?;
                Ok((io, json!({"phi": table.values})))
            }
            HmCommand::Decompose {
                io,
                max_nodes,
                max_horizon,
            } => {
                let inst = read_instance(&io)?;
                let l = limits(max_nodes, max_horizon);
                let d = decompose_quota(&inst, &l)?;
                Ok((
                    io,
                    json!({
                        "points": d.points.iter().map(|x| x.assign.clone()).collect::<Vec<_>>(),
                        "weights": d.weights.iter().map(Rat::to_string).collect::<Vec<_>>(),
                    }),
                ))
            }
            HmCommand::Sample {
                io,
                house,
                seed,
                max_nodes,
                max_horizon,
            } => {
                let inst = read_instance(&io)?;
                let l = limits(max_nodes, max_horizon);
                let x = sample_hm_method(&inst, house, seed, &l)?;
                Ok((io, json!(x)))
            }
        },
        Command::GenAdversary {
            io,
            kind,
            house,
            delta,
            signposts,
            eps,
        } => {
            let eps = parse_rat(&eps)?;
            let inst = match kind.as_str() {
                "stationary" => {
                    let house = house
                        .ok_or_else(|| Error::InvalidParameter("--house required".into()))?;
                    let delta = delta
                        .ok_or_else(|| Error::InvalidParameter("--delta required".into()))?;
                    adversary_stationary(house, &parse_rat(&delta)?, &eps)?
                }
                "fixed-divisor" => {
                    let s = signposts
                        .ok_or_else(|| Error::InvalidParameter("--signposts required".into()))?;
                    let shifts = s
                        .split(',')
                        .map(|x| parse_rat(x.trim()))
                        .collect::<Result<Vec<_>, _>>()?;
                    adversary_fixed_divisor(&shifts, &eps)?
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown adversary kind {other:?}"
                    )))
                }
            };
            let v = serde_json::to_value(&inst).expect("instance serializes");
            Ok((io, v))
        }
        Command::GenFromArrangement { io, spec, k } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Error::DegenerateArrangement(format!("{}: {e}", spec.display())))?;
            let spec = ArrangementSpec::from_json(&text)?;
            let ai = instance_from_arrangement(&spec, k)?;
            Ok((
                io,
                json!({
                    "populations_rational": ai.populations.iter().map(Rat::to_string).collect::<Vec<_>>(),
                    "scale": ai.scale.to_string(),
                    "instance": serde_json::to_value(&ai.instance).unwrap(),
                }),
            ))
        }
    }
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::ResourceCap(_) => ("resource-cap", 3),
        Error::InvalidInstance(_) => ("invalid-instance", 2),
        Error::InvalidDelta(_) => ("invalid-delta", 2),
        Error::EmptyOutcome { .. } => ("empty-outcome", 2),
        Error::RankOutOfRange { .. } => ("rank-out-of-range", 2),
        Error::DimensionMismatch { .. } => ("dimension-mismatch", 2),
        Error::ParseRat(_) => ("parse-rational", 2),
        Error::InvalidDistribution(_) => ("invalid-distribution", 2),
        Error::SeededRandomExpectation => ("seeded-random-expectation", 2),
        Error::MeanNotHalf(_) => ("mean-not-half", 2),
        Error::DegenerateArrangement(_) => ("degenerate-arrangement", 2),
        Error::InvalidParameter(_) => ("invalid-parameter", 2),
    }
}

/// Parses `argv`, dispatches, writes JSON to stdout or `--out`, and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok((io, value)) => {
            if io.format != "json" {
                eprintln!(
                    "{}",
                    json!({"error": {"kind": "invalid-parameter", "detail": "only --format json is supported"}})
                );
                return 2;
            }
            let text = serde_json::to_string(&value).expect("output serializes");
            match io.out {
                None => println!("{text}"),
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text + "\n") {
                        eprintln!(
                            "{}",
                            json!({"error": {"kind": "io", "detail": format!("{}: {e}", path.display())}})
                        );
                        return 2;
                    }
                }
            }
            0
        }
        Err(e) => {
            let (kind, code) = error_kind(&e);
            eprintln!("{}", json!({"error": {"kind": kind, "detail": e.to_string()}}));
            code
        }
    }
}
