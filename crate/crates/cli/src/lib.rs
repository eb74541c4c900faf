//! Command-line front end: reads a JSON configuration, runs one command
//! and emits a deterministic report.

pub mod config;
pub mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hcn_core::classnum::{ClassNumberEngine, ClassNumberReport, DEFAULT_BUDGET};
use hcn_core::massform::{mass_hereditary, mass_maximal};
use hcn_core::omega::{enumerate_omega, LocalShape};
use hcn_core::theta::{theta, ThetaEngine};
use hcn_core::{arith, BigInt, OrderSpec, Rational};
use num_traits::One;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use config::{config_to_json, parse_config, ConfigError, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "hcn", version, about = "Class numbers of hereditary orders over function fields")]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub output: OutputFormat,
    /// Upper bound on enumerated global index tuples and genera.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    pub budget: u64,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Enum,
    Genfun,
}

impl From<EngineChoice> for ThetaEngine {
    fn from(e: EngineChoice) -> Self {
        match e {
            EngineChoice::Enum => ThetaEngine::Enum,
            EngineChoice::Genfun => ThetaEngine::GenFun,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThetaChoice {
    Enum,
    Genfun,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight class numbers h_s and the class number h.
    Classnum {
        #[arg(long, value_enum, default_value_t = EngineChoice::Genfun)]
        engine: EngineChoice,
    },
    /// Mass of the order and of the maximal order.
    Mass,
    /// The local factor Θ_v at one place.
    Theta {
        #[arg(long)]
        place: String,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value_t = ThetaChoice::Both)]
        engine: ThetaChoice,
    },
    /// The local index set Ω_v at one place.
    Omega {
        #[arg(long)]
        place: String,
        #[arg(long)]
        s: u32,
        /// List every element.
        #[arg(long)]
        list: bool,
    },
    /// Class numbers of all genera of right ideals.
    Genera {
        #[arg(long, value_enum, default_value_t = EngineChoice::Genfun)]
        engine: EngineChoice,
    },
    /// Number of optimal embeddings of O_{L_s}.
    Embed {
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value_t = EngineChoice::Genfun)]
        engine: EngineChoice,
    },
    /// Both sides of the transfer identity for the pair (s, s2).
    Transfer {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        s2: u32,
        #[arg(long, value_enum, default_value_t = EngineChoice::Genfun)]
        engine: EngineChoice,
    },
    /// Internal consistency checks on the given specification.
    Selfcheck,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Core(#[from] hcn_core::Error),
    #[error("{0}")]
    Io(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    /// 2 for invalid input, 3 for an integrality violation, 4 for an
    /// exhausted budget, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use hcn_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::IntegralityViolation { .. }) => 3,
            CliError::Core(E::BudgetExceeded { .. }) => 4,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::CheckFailed(_) => 1,
        }
    }
}

/// A finished command: the report, and whether its checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub report: Value,
    pub passed: bool,
}

impl Output {
    fn ok(report: Value) -> Self {
        Output { report, passed: true }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Text => report::to_text(&self.report),
        }
    }
}

pub fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Io("--config PATH is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

pub fn run(cli: &Cli, config: &RunConfig) -> Result<Output, CliError> {
    let start = Instant::now();
    let order = &config.order;
    let mut out = match &cli.command {
        Command::Classnum { engine } => {
            let engine = ClassNumberEngine::new((*engine).into(), cli.budget);
            Output::ok(classnum_report(&*engine.weight_class_numbers(order)?))
        }
        Command::Mass => Output::ok(json!({
            "mass": report::rational(&mass_hereditary(order)?),
            "mass_maximal": report::rational(&mass_maximal(order.algebra())?),
            "s0": order.algebra().constant_field_degree(),
        })),
        Command::Theta { place, s, engine } => theta_report(order, place, *s, *engine)?,
        Command::Omega { place, s, list } => Output::ok(omega_report(order, place, *s, *list, cli.budget)?),
        Command::Genera { engine } => {
            let engine = ClassNumberEngine::new((*engine).into(), cli.budget);
            let g = engine.total_class_number_genera(order)?;
            let genera: Vec<Value> = g
                .per_genus
                .iter()
                .map(|x| json!({"genus": x.genus.0, "reduced": x.reduced, "h": report::int(&x.h)}))
                .collect();
            Output::ok(json!({"count": genera.len(), "genera": genera, "h_total": report::int(&g.total)}))
        }
        Command::Embed { s, engine } => {
            let engine = ClassNumberEngine::new((*engine).into(), cli.budget);
            let e = engine.embedding_count(order, *s)?;
            Output::ok(json!({"s": s, "embedding_count": report::int(&e)}))
        }
        Command::Transfer { s, s2, engine } => {
            let engine = ClassNumberEngine::new((*engine).into(), cli.budget);
            let t = engine.transfer_check(order, *s, *s2)?;
            Output {
                report: json!({
                    "s": t.s,
                    "s2": t.s2,
                    "lhs": report::int(&t.lhs),
                    "rhs": report::int(&t.rhs),
                    "summands": t.summands,
                    "equal": t.equal,
                }),
                passed: t.equal,
            }
        }
        Command::Selfcheck => selfcheck(order, cli.budget)?,
    };
    if !config.warnings.is_empty() {
        if let Value::Object(map) = &mut out.report {
            map.insert("warnings".into(), json!(config.warnings));
        }
    }
    if cli.timings {
        if let Value::Object(map) = &mut out.report {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            map.insert("timings_ms".into(), json!({ "total": format!("{ms:.3}") }));
        }
    }
    Ok(out)
}

pub fn classnum_report(r: &ClassNumberReport) -> Value {
    let key = |s: &u32| s.to_string();
    let h: Map<String, Value> = r.per_s.iter().map(|(s, e)| (key(s), report::int(&e.h))).collect();
    let theta: Map<String, Value> = r
        .per_s
        .iter()
        .map(|(s, e)| {
            let per_place: Map<String, Value> =
                e.theta.iter().map(|(l, v)| (l.clone(), report::rational(v))).collect();
            (key(s), Value::Object(per_place))
        })
        .collect();
    let derived: Map<String, Value> = r
        .per_s
        .iter()
        .map(|(s, e)| (key(s), report::rational(&e.derived_mass)))
        .collect();
    json!({
        "s0": r.s0,
        "mass": report::rational(&r.mass),
        "h": h,
        "h_total": report::int(&r.h_total),
        "theta": theta,
        "derived_mass": derived,
    })
}

fn find_place<'a>(order: &'a OrderSpec, label: &str) -> Result<&'a hcn_core::Place, CliError> {
    order
        .algebra()
        .finite_places
        .iter()
        .find(|p| p.label == label)
        .ok_or_else(|| CliError::Core(hcn_core::Error::UnknownPlace(label.to_string())))
}

fn theta_report(order: &OrderSpec, label: &str, s: u32, choice: ThetaChoice) -> Result<Output, CliError> {
    let place = find_place(order, label)?;
    let q = order.base().q();
    let f = order.invariant(place);
    let mut engines = Map::new();
    if choice != ThetaChoice::Genfun {
        engines.insert("enum".into(), report::rational(&theta(ThetaEngine::Enum, q, place, &f, s)));
    }
    if choice != ThetaChoice::Enum {
        engines.insert("genfun".into(), report::rational(&theta(ThetaEngine::GenFun, q, place, &f, s)));
    }
    let values: Vec<&Value> = engines.values().collect();
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let value = values[0].clone();
    Ok(Output {
        report: json!({
            "place": label,
            "s": s,
            "invariant": f,
            "theta": value,
            "engines": engines,
            "agree": agree,
        }),
        passed: agree,
    })
}

fn omega_report(order: &OrderSpec, label: &str, s: u32, list: bool, budget: u64) -> Result<Value, CliError> {
    let place = find_place(order, label)?;
    let f = order.invariant(place);
    let shape = LocalShape::new(place, &f, s);
    let count = enumerate_omega(place, &f, s).count() as u64;
    let mut report = json!({
        "place": label,
        "s": s,
        "invariant": f,
        "count": count,
        "shape": shape.as_ref().map(|sh| json!({
            "splits": sh.splits,
            "rows": sh.rows,
            "columns": sh.columns,
            "slice_total": sh.slice_total,
            "row_totals": sh.row_totals,
        })),
    });
    if list {
        if count > budget {
            return Err(CliError::Core(hcn_core::Error::BudgetExceeded {
                needed: count.to_string(),
                budget,
            }));
        }
        let elements: Vec<Value> = enumerate_omega(place, &f, s)
            .map(|e| {
                let slices: Vec<Value> = (0..e.splits as usize)
                    .map(|w| {
                        let rows: Vec<Vec<u32>> = (0..e.rows as usize)
                            .map(|i| (0..e.columns as usize).map(|j| e.entry(w, i, j)).collect())
                            .collect();
                        json!({"matrix": rows, "stripped": e.flatten_strip(w)})
                    })
                    .collect();
                Value::Array(slices)
            })
            .collect();
        report["elements"] = Value::Array(elements);
    }
    Ok(report)
}

fn rotate(f: &[u32], k: usize) -> Vec<u32> {
    f[k..].iter().chain(&f[..k]).copied().collect()
}

/// Mass consistency, engine agreement and rotation invariance.
fn selfcheck(order: &OrderSpec, budget: u64) -> Result<Output, CliError> {
    let engine = ClassNumberEngine::new(ThetaEngine::GenFun, budget);
    let reference = engine.weight_class_numbers(order)?;
    let mut checks: BTreeMap<&str, (bool, String)> = BTreeMap::new();

    let q = order.base().q();
    let sum = reference.per_s.iter().fold(Rational::from_integer(BigInt::from(0)), |acc, (s, e)| {
        acc + Rational::new(e.h.clone(), arith::pow(q, *s) - BigInt::one())
    });
    checks.insert(
        "mass_consistency",
        (sum == reference.mass, format!("Σ h_s/(q^s-1) = {sum}, mass = {}", reference.mass)),
    );

    let mut disagreements = Vec::new();
    let mut compared = 0;
    for place in &order.algebra().finite_places {
        let f = order.invariant(place);
        for s in reference.per_s.keys() {
            let a = theta(ThetaEngine::Enum, q, place, &f, *s);
            let b = theta(ThetaEngine::GenFun, q, place, &f, *s);
            compared += 1;
            if a != b {
                disagreements.push(format!("{} at s = {s}: {a} vs {b}", place.label));
            }
        }
    }
    checks.insert(
        "engine_equivalence",
        (
            disagreements.is_empty(),
            if disagreements.is_empty() {
                format!("{compared} local factors agree")
            } else {
                disagreements.join("; ")
            },
        ),
    );

    let mut rotations = 0;
    let mut changed = Vec::new();
    for (label, f) in order.invariants() {
        for k in 1..f.len() {
            let mut invariants = order.invariants().clone();
            invariants.insert(label.clone(), rotate(f, k));
            let rotated = OrderSpec::new(order.algebra().clone(), invariants)?;
            let fresh = ClassNumberEngine::new(ThetaEngine::Enum, budget).weight_class_numbers(&rotated)?;
            rotations += 1;
            if *fresh != *reference {
                changed.push(format!("{label} rotated by {k}"));
            }
        }
    }
    checks.insert(
        "rotation_invariance",
        (
            changed.is_empty(),
            if changed.is_empty() {
                format!("{rotations} rotations leave the report unchanged")
            } else {
                changed.join("; ")
            },
        ),
    );

    let passed = checks.values().all(|(ok, _)| *ok);
    let checks: Map<String, Value> = checks
        .into_iter()
        .map(|(name, (ok, detail))| (name.to_string(), json!({"pass": ok, "detail": detail})))
        .collect();
    Ok(Output {
        report: json!({"checks": checks, "pass": passed}),
        passed,
    })
}
