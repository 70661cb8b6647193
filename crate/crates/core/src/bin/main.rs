use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use toric_period::characters::cache::CharCache;
use toric_period::characters::notation::{parse_character, parse_test_vector};
use toric_period::characters::MultChar;
use toric_period::cyclo::{CycloNumber, DEFAULT_ORDER_CAP};
use toric_period::induction::data::default_precision;
use toric_period::induction::SupercuspidalData;
use toric_period::padic::FieldDescriptor;
use toric_period::period::newform::newform_period;
use toric_period::period::{period_integral, phase_factor, EmbeddingSpec, IntegralOptions};
use toric_period::quadext::QuadExtDescriptor;
use toric_period::verify::{self, SuiteReport};
use toric_period::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

const SYLVESTER_PRIMES: [u64; 4] = [7, 13, 31, 43];

#[derive(Parser, Debug)]
#[command(
    name = "toric-period",
    version,
    about = "Exact local toric period integrals for supercuspidal representations of GL(2)"
)]
struct Cli {
    /// Residue characteristic.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Working p-adic precision (default 2c+6 for conductor c).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Extra refinement levels before a sum is declared unstable.
    #[arg(long, global = true, default_value_t = 4)]
    max_refine: u32,
    /// Largest cyclotomic order allowed in any value.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    cyclo_cap: u64,
    /// Character-table cache directory.
    #[arg(
        long,
        global = true,
        env = "TORIC_PERIOD_CACHE_DIR",
        default_value = ".toric-period-cache"
    )]
    cache_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Sec24Diagonal,
    CorExpansion,
    PropSingle,
    PropNewform,
    LemmaSupport,
    Sylvester,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification sweep and compare every value with its closed form.
    Verify {
        #[arg(value_enum)]
        target: Target,
        /// Conductors c(θ) to sweep.
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 4])]
        conductors: Vec<u32>,
        /// Sample size for cor-expansion.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compute one period integral {φ₁, φ₂}.
    Compute {
        /// D with E = L = Q_p(√D).
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// θ as generator values, or @name for a cached table.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        /// χ as generator values, or @name
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        /// φ₁ as `u,v;u,v;...`.
        #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
        vector: String,
        /// φ₂, defaulting to φ₁.
        #[arg(long, allow_hyphen_values = true)]
        vector2: Option<String>,
        /// Compute the normalized newform period instead.
        #[arg(long)]
        newform: bool,
        /// Also report the phase factor θχ(√D) computed from Φ.
        #[arg(long)]
        phase: bool,
        /// List the torus cosets with nonzero integrand
        #[arg(long)]
        trace: bool,
    },
    /// Manage cached character tables.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Store a character given in generator notation.
    Store {
        /// Cache entry name
        name: String,
        /// D with E = Q_p(√D)
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// LEVEL:UNIF:a,b=ANGLE;...
        #[arg(long, allow_hyphen_values = true)]
        char: String,
    },
    List,
    Clear,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. }
            | Error::OrderBudgetExceeded { .. }
            | Error::UnstableSum(_) => EXIT_BUDGET,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

fn options(cli: &Cli) -> Result<IntegralOptions, Failure> {
    if cli.cyclo_cap == 0 {
        return Err(config_error("--cyclo-cap must be positive"));
    }
    Ok(IntegralOptions {
        max_refine: cli.max_refine,
        order_cap: cli.cyclo_cap,
        keep_trace: false,
    })
}

fn config_json(cli: &Cli, p: Option<u64>) -> Value {
    json!({
        "p": p,
        "precision": cli.precision,
        "max_refine": cli.max_refine,
        "cyclo_cap": cli.cyclo_cap,
        "format": cli.format,
    })
}

fn value_json(v: &CycloNumber) -> (Value, Value) {
    let (re, im) = v.approx();
    (
        serde_json::to_value(v).expect("serializable"),
        json!({ "re": re, "im": im }),
    )
}

fn suite_json(report: &SuiteReport, config: Value) -> Value {
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let (value, approx) = value_json(&e.computed);
            json!({
                "label": e.label,
                "kind": e.kind,
                "value": value,
                "approx": approx,
                "predicted": e.predicted,
                "certificate": e.certificate,
                "ok": e.ok,
                "note": e.note,
            })
        })
        .collect();
    json!({
        "target": report.target,
        "ok": report.ok(),
        "passed": report.passed,
        "failed": report.failed,
        "entries": entries,
        "config": config,
    })
}

fn suite_table(report: &SuiteReport) -> String {
    let mut out = format!(
        "{}: {} passed, {} failed\n",
        report.target, report.passed, report.failed
    );
    for e in &report.entries {
        let l = &e.label;
        let predicted = e
            .predicted
            .as_ref()
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "p={} D={} c={} θ#{} χ#{} c(θχ̄)={}  {:<22} {:>12} {:>12}  {}  {}\n",
            l.p,
            l.d,
            l.c_theta,
            l.theta,
            l.chi,
            l.c_twist,
            e.kind,
            e.computed.to_string(),
            predicted,
            if e.ok { "ok" } else { "MISMATCH" },
            e.note
        ));
    }
    out
}

fn run_verify(
    cli: &Cli,
    target: Target,
    conductors: &[u32],
    samples: usize,
    seed: u64,
) -> Result<(Value, String, bool), Failure> {
    let opts = options(cli)?;
    let report = match target {
        Target::Sylvester => {
            let primes: Vec<u64> = cli
                .p
                .map(|p| vec![p])
                .unwrap_or_else(|| SYLVESTER_PRIMES.to_vec());
            verify::sylvester_suite(&primes, cli.precision, &opts)?
        }
        _ => {
            let p = cli.p.unwrap_or(3);
            let configs = verify::sweep_configs(p, conductors, cli.precision)?;
            match target {
                Target::Sec24Diagonal => verify::diagonal_suite(&configs, &opts)?,
                Target::CorExpansion => verify::expansion_suite(&configs, samples, seed, &opts)?,
                Target::PropSingle => {
                    verify::single_suite(&verify::newform_records(&configs, &opts)?)?
                }
                Target::PropNewform => {
                    let records = verify::newform_records(&configs, &opts)?;
                    let mut report = verify::newform_suite(&configs, &records)?;
                    let cross = verify::cross_suite(&records)?;
                    report.entries.extend(cross.entries);
                    SuiteReport::new("prop-newform", report.entries)
                }
                Target::LemmaSupport => verify::support_suite(&configs)?,
                Target::Sylvester => unreachable!(),
            }
        }
    };
    let config = config_json(cli, cli.p);
    Ok((
        suite_json(&report, config),
        suite_table(&report),
        report.ok(),
    ))
}

fn resolve_char(
    cli: &Cli,
    e: QuadExtDescriptor,
    spec: &str,
) -> Result<MultChar<QuadExtDescriptor>, Failure> {
    match spec.strip_prefix('@') {
        Some(name) => CharCache::new(&cli.cache_dir)
            .fetch(name, e.base())?
            .ok_or_else(|| config_error(format!("no cached table named '{name}'"))),
        None => Ok(parse_character(e, spec)?),
    }
}

fn char_json(chi: &MultChar<QuadExtDescriptor>) -> Value {
    json!({ "conductor": chi.conductor(), "level": chi.level(), "unif": chi.unif_value() })
}

#[allow(clippy::too_many_arguments)]
fn run_compute(
    cli: &Cli,
    d: i64,
    theta: &str,
    chi: &str,
    vector: &str,
    vector2: Option<&str>,
    newform: bool,
    phase: bool,
    trace: bool,
) -> Result<(Value, String), Failure> {
    let p = cli.p.ok_or_else(|| config_error("--p is required"))?;
    let mut opts = options(cli)?;
    opts.keep_trace = trace;
    // the precision is fixed before θ is known, so size it for the level in the notation
    let probe = QuadExtDescriptor::new(FieldDescriptor::new(p, 8)?, d)?;
    let probe_level = resolve_char(cli, probe, theta)?.conductor();
    let k = cli
        .precision
        .unwrap_or_else(|| default_precision(probe_level.max(2)));
    let e = QuadExtDescriptor::new(FieldDescriptor::new(p, k)?, d)?;
    let theta = resolve_char(cli, e, theta)?;
    let chi = resolve_char(cli, e, chi)?;
    let data = SupercuspidalData::classify(&theta)?;
    let emb = EmbeddingSpec::standard(e);
    let result = if newform {
        newform_period(&data, &chi, &emb, &opts)?.direct
    } else {
        let phi1 = parse_test_vector(e.base(), vector)?;
        let phi2 = match vector2 {
            Some(s) => parse_test_vector(e.base(), s)?,
            None => phi1.clone(),
        };
        period_integral(&data, &chi, &phi1, &phi2, &emb, &opts)?
    };
    let (value, approx) = value_json(&result.value);
    let mut report = json!({
        "value": value,
        "approx": approx,
        "certificate": result.certificate,
        "start_level": result.start_level,
        "inputs": { "d": d, "theta": char_json(&theta), "chi": char_json(&chi), "newform": newform },
        "config": config_json(cli, Some(p)),
    });
    if trace {
        report["support_trace"] =
            serde_json::to_value(&result.support_trace).expect("serializable");
    }
    let mut table = format!(
        "value {}\napprox {:.12} {:+.12}i\ncertificate m={} m+1 equal={}\n",
        result.value,
        approx["re"],
        approx["im"],
        result.certificate.m,
        result.certificate.m_plus_one_equal
    );
    if phase {
        let ph = phase_factor(&data, &chi)?;
        let (pv, _) = value_json(&ph.direct);
        report["phase"] = json!({ "direct": pv, "predicted": ph.predicted, "holds": ph.holds() });
        table.push_str(&format!(
            "phase {} (predicted {})\n",
            ph.direct, ph.predicted
        ));
    }
    Ok((report, table))
}

fn run_cache(cli: &Cli, action: &CacheAction) -> Result<(Value, String), Failure> {
    let cache = CharCache::new(&cli.cache_dir);
    match action {
        CacheAction::Store { name, d, char } => {
            let p = cli.p.ok_or_else(|| config_error("--p is required"))?;
            let probe = QuadExtDescriptor::new(FieldDescriptor::new(p, 8)?, *d)?;
            let level = parse_character(probe, char)?.conductor();
            let k = cli
                .precision
                .unwrap_or_else(|| default_precision(level.max(2)));
            let e = QuadExtDescriptor::new(FieldDescriptor::new(p, k)?, *d)?;
            let chi = parse_character(e, char)?;
            let path = cache.store(name, &chi)?;
            Ok((
                json!({ "stored": name, "path": path }),
                format!("stored {}\n", path.display()),
            ))
        }
        CacheAction::List => {
            let names = cache.list()?;
            let table = names.iter().map(|n| format!("{n}\n")).collect();
            Ok((json!({ "tables": names }), table))
        }
        CacheAction::Clear => {
            let n = cache.clear()?;
            Ok((json!({ "removed": n }), format!("removed {n}\n")))
        }
    }
}

fn emit(format: Format, json: &Value, table: &str) {
    let text = match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(json).expect("serializable")
        ),
        Format::Table => table.to_string(),
    };
    // a closed pipe (e.g. `| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Some(p) = cli.p {
        FieldDescriptor::new(p, 2)?;
    }
    match &cli.command {
        Command::Verify {
            target,
            conductors,
            samples,
            seed,
        } => {
            let (json, table, ok) = run_verify(cli, *target, conductors, *samples, *seed)?;
            emit(cli.format, &json, &table);
            Ok(ok)
        }
        Command::Compute {
            d,
            theta,
            chi,
            vector,
            vector2,
            newform,
            phase,
            trace,
        } => {
            let (json, table) = run_compute(
                cli,
                *d,
                theta,
                chi,
                vector,
                vector2.as_deref(),
                *newform,
                *phase,
                *trace,
            )?;
            let ok = json
                .get("phase")
                .map(|p| p["holds"] == true)
                .unwrap_or(true);
            emit(cli.format, &json, &table);
            Ok(ok)
        }
        Command::Cache { action } => {
            let (json, table) = run_cache(cli, action)?;
            emit(cli.format, &json, &table);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_MISMATCH),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
