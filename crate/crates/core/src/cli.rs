//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the process exit code.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 validation failure
//! (constraint violations, unstable target sets, malformed families),
//! 3 oracle mismatch, 4 internal consistency or numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coupling::{compose_check, coupling_check, decompose_check, triple_coupling_check};
use crate::dynamics::{
    field_csv, samples_csv, simulate, vector_field_grid, GridAxis, SimConfig, DEFAULT_MAX_SWITCHES, DEFAULT_MAX_TIME,
};
use crate::error::GlassError;
use crate::factorization::{factorize, factorize_blocks, verify_factorization, DEFAULT_EPSILON};
use crate::index_set::IndexSet;
use crate::network::{ConstraintCheck, GlassNetwork, NetworkFile};
use crate::oracle::{oracle_counts, oracle_dynamics, oracle_equivalence, oracle_signs, oracle_theorems, OracleReport};
use crate::signs::{
    bound_curve, brute_force_row_signatures, count_allowed_row_signatures, curve_csv, ei_bounds, parse_set,
    serialize_bigint, sign_pattern, CountMode, CurveSpec, SignPattern, StableFamily, BRUTE_FORCE_CAP,
};
use crate::stability::{enumerate_stable_sets, Listing, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "glassnet", version, about = "Stable sets, sign patterns and dynamics of Glass networks")]
pub struct Cli {
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Load networks that violate the output constraint.
    #[arg(long, global = true)]
    pub allow_violations: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the stable sets of a network, one JSON object per line.
    Analyze(AnalyzeArgs),
    /// Sign-pattern queries: allowed sets, families, bounds and counts.
    Signs(SignsArgs),
    /// CSV of connection bounds and allowed-signature fractions against set size.
    Curves(CurvesArgs),
    /// Semipositive factorization certifying a stable set.
    Factor(FactorArgs),
    /// Composition, decomposition and coupling of stable sets.
    Couple(CoupleArgs),
    /// Exact event-driven trajectory from an initial state.
    Simulate(SimulateArgs),
    /// Vector field on a 2-dimensional grid, as CSV.
    Field(FieldArgs),
    /// Seeded brute-force audits of the closed forms and theorems.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub network: PathBuf,
    /// Also list unstable parts.
    #[arg(long)]
    pub all: bool,
    /// Also list the all-inactive origin candidate.
    #[arg(long)]
    pub with_origin: bool,
}

#[derive(Debug, Args)]
pub struct SignsArgs {
    /// Take the sign pattern of this network.
    #[arg(long, value_name = "NETWORK")]
    pub pattern_of: Option<PathBuf>,
    /// Sign pattern literal, rows separated by `;`, e.g. "1,-1;-1,1".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "pattern_of")]
    pub pattern: Option<String>,
    /// Set to test against the pattern, e.g. "1,3".
    #[arg(long, value_name = "SET")]
    pub allows: Option<String>,
    /// Family literal, e.g. "nested:1;1,2".
    #[arg(long)]
    pub family: Option<String>,
    /// Count allowed row signatures for the family.
    #[arg(long, value_enum, value_name = "MODE")]
    pub count_signatures: Option<ModeArg>,
    /// Lower bounds on excitatory and inhibitory connections for the family.
    #[arg(long)]
    pub ei_bounds: bool,
    /// Number of units (defaults to the pattern's dimension).
    #[arg(long)]
    pub n: Option<usize>,
    /// Restrict counts to one 1-based row.
    #[arg(long)]
    pub row: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Unconstrained,
    Vanishing,
    Nonvanishing,
}

impl From<ModeArg> for CountMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Unconstrained => CountMode::Unconstrained,
            ModeArg::Vanishing => CountMode::Vanishing,
            ModeArg::Nonvanishing => CountMode::Nonvanishing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Single,
    Disjoint,
    Nested,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long, value_enum)]
    pub kind: CurveKind,
    #[arg(long)]
    pub n: usize,
    /// Number of disjoint sets (disjoint curves).
    #[arg(long, default_value_t = 2)]
    pub sets: usize,
    /// Size of the innermost set (nested curves).
    #[arg(long, default_value_t = 1)]
    pub k1: usize,
    #[arg(long, value_enum, default_value = "unconstrained")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    pub network: PathBuf,
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Factorize the blocks W[α] and W[αᶜ, α] instead.
    #[arg(long)]
    pub blocks: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CoupleModes {
    /// Stable disjoint A and B compose to a stable union.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub compose: Option<Vec<String>>,
    /// Stable G splits into stable A and G \ A.
    #[arg(long, num_args = 2, value_names = ["G", "A"])]
    pub decompose: Option<Vec<String>>,
    /// For stable A, B is stable.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub couple: Option<Vec<String>>,
    /// For stable A and B, G is stable.
    #[arg(long, num_args = 3, value_names = ["A", "B", "G"])]
    pub triple: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct CoupleArgs {
    pub network: PathBuf,
    #[command(flatten)]
    pub modes: CoupleModes,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub network: PathBuf,
    /// Initial state, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value_t = DEFAULT_MAX_TIME)]
    pub max_time: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_SWITCHES)]
    pub max_switches: usize,
    /// Add states sampled every DT to the output.
    #[arg(long, value_name = "DT")]
    pub sample_dt: Option<f64>,
    /// Also write the samples as CSV to this file.
    #[arg(long, requires = "sample_dt")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    pub network: PathBuf,
    /// Free axes, 1-based coordinates.
    #[arg(long, default_value_t = 1)]
    pub x_axis: usize,
    #[arg(long, default_value_t = 2)]
    pub y_axis: usize,
    /// MIN:MAX:STEPS for the first axis.
    #[arg(long, allow_hyphen_values = true, default_value = "-1:6:8")]
    pub x_range: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-1:6:8")]
    pub y_range: String,
    /// Fix a coordinate, e.g. "3=1"; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub fix: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    All,
    Unconstrained,
    Vanishing,
    Nonvanishing,
}

#[derive(Debug, Args)]
#[group(id = "scope", required = true, multiple = false)]
pub struct OracleScope {
    #[arg(long)]
    pub counts: bool,
    #[arg(long)]
    pub theorems: bool,
    #[arg(long)]
    pub equivalence: bool,
    #[arg(long)]
    pub dynamics: bool,
    #[arg(long)]
    pub signs: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub scope: OracleScope,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Random trials (families per kind for --counts).
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Count modes audited by --counts.
    #[arg(long, value_enum, default_value = "all")]
    pub mode: OracleMode,
}

/// A failure with its exit code and message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<GlassError> for Failure {
    fn from(e: GlassError) -> Self {
        let code = match &e {
            GlassError::Parse(_) => EXIT_USAGE,
            GlassError::InternalConsistency(_) | GlassError::NumericalFailure(_) => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Output text plus warnings and an optional nonzero exit with results.
struct Outcome {
    text: String,
    warnings: Vec<String>,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, warnings: Vec::new(), code: EXIT_OK }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let written = match &cli.output {
                Some(path) => {
                    fs::write(path, &outcome.text).map_err(|e| format!("cannot write {}: {e}", path.display()))
                }
                None => out.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let check = if cli.allow_violations { ConstraintCheck::Bypass } else { ConstraintCheck::Enforce };
    match &cli.command {
        Command::Analyze(a) => analyze(a, check),
        Command::Signs(a) => signs(a, check),
        Command::Curves(a) => curves(a),
        Command::Factor(a) => factor(a, check),
        Command::Couple(a) => couple(a, check),
        Command::Simulate(a) => simulate_cmd(a, check),
        Command::Field(a) => field(a, check),
        Command::Oracle(a) => oracle(a),
    }
}

fn load_network(path: &Path, check: ConstraintCheck) -> CliResult<GlassNetwork> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let file = NetworkFile::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(file.into_network(check)?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn parse_floats(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("bad number {t:?} in {text:?}"))))
        .collect()
}

fn constraint_warnings(net: &GlassNetwork) -> CliResult<Vec<String>> {
    Ok(net
        .near_zero_outputs()?
        .into_iter()
        .map(|s| format!("W·p for {s} has a component below 1e-12 in magnitude"))
        .collect())
}

fn analyze(a: &AnalyzeArgs, check: ConstraintCheck) -> CliResult<Outcome> {
    let net = load_network(&a.network, check)?;
    let listing = if a.all { Listing::All } else { Listing::StableAndOrigin };
    let mut text = String::new();
    let mut warnings = constraint_warnings(&net)?;
    for r in enumerate_stable_sets(&net, listing)? {
        if r.verdict == Verdict::OriginCandidate && !(a.with_origin || a.all) {
            continue;
        }
        if r.boundary_candidate {
            warnings.push(format!("{} has its attractor on the part boundary", r.set));
        } else if r.near_degenerate {
            warnings.push(format!("{} has a margin below 1e-12", r.set));
        }
        text.push_str(&to_json(&r));
        text.push('\n');
    }
    Ok(Outcome { text, warnings, code: EXIT_OK })
}

fn parse_pattern(text: &str) -> CliResult<SignPattern> {
    let rows = text
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|t| t.trim().parse::<i8>().map_err(|_| usage(format!("bad sign {t:?} in pattern"))))
                .collect::<CliResult<Vec<i8>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SignPattern::from_rows(&rows)?)
}

#[derive(Serialize)]
struct RowCount {
    row: usize,
    #[serde(serialize_with = "serialize_bigint")]
    formula: num_bigint::BigInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumeration: Option<u64>,
}

fn signs(a: &SignsArgs, check: ConstraintCheck) -> CliResult<Outcome> {
    let pattern = match (&a.pattern_of, &a.pattern) {
        (Some(path), _) => Some(sign_pattern(load_network(path, check)?.weights())),
        (None, Some(text)) => Some(parse_pattern(text)?),
        (None, None) => None,
    };
    let n = match (a.n, &pattern) {
        (Some(n), Some(p)) if n != p.dim() => {
            return Err(usage(format!("--n {n} disagrees with the {}-unit pattern", p.dim())));
        }
        (Some(n), _) => n,
        (None, Some(p)) => p.dim(),
        (None, None) => return Err(usage("give --n, --pattern or --pattern-of")),
    };
    let hyperplane = a.count_signatures == Some(ModeArg::Nonvanishing);
    let family = a.family.as_deref().map(|f| StableFamily::parse(f, n, hyperplane)).transpose()?;
    let mut result = serde_json::Map::new();
    let mut warnings = Vec::new();
    let mut code = EXIT_OK;
    if let Some(p) = &pattern {
        result.insert("pattern".into(), json!(p));
    }
    if let Some(set) = &a.allows {
        let p = pattern.as_ref().ok_or_else(|| usage("--allows needs --pattern or --pattern-of"))?;
        let s = parse_set(set, n)?;
        if s.is_empty() {
            return Err(usage("--allows needs a nonempty set"));
        }
        result.insert(
            "allows".into(),
            json!({
                "set": s,
                "allowed": p.allows_stable(&s),
                "sign_stable": p.is_sign_stable(&s),
                "requires_minimal_stability": p.requires_minimal_stability(&s),
            }),
        );
    }
    if let (Some(p), Some(f)) = (&pattern, &family) {
        result.insert("allows_family".into(), json!(p.allows_family(f)));
    }
    if a.ei_bounds {
        let f = family.as_ref().ok_or_else(|| usage("--ei-bounds needs --family"))?;
        result.insert("ei_bounds".into(), json!(ei_bounds(f, n)?));
    }
    if let Some(mode) = a.count_signatures {
        let f = family.as_ref().ok_or_else(|| usage("--count-signatures needs --family"))?;
        let mode = CountMode::from(mode);
        let last = if mode == CountMode::Nonvanishing { n - 1 } else { n };
        let rows: Vec<usize> = match a.row {
            Some(r) => vec![r],
            None => (1..=last).collect(),
        };
        let mut counts = Vec::new();
        for row in rows {
            let formula = count_allowed_row_signatures(f, n, row, mode)?;
            let enumeration =
                if n <= BRUTE_FORCE_CAP { Some(brute_force_row_signatures(f, n, row, mode)?) } else { None };
            if let Some(e) = enumeration {
                if num_bigint::BigInt::from(e) != formula {
                    warnings.push(format!("row {row}: closed form gives {formula} but enumeration gives {e}"));
                    code = EXIT_MISMATCH;
                }
            }
            counts.push(RowCount { row, formula, enumeration });
        }
        result.insert("mode".into(), json!(mode));
        result.insert("counts".into(), serde_json::to_value(&counts).expect("serializable"));
    }
    if result.is_empty() {
        return Err(usage("nothing to do; see `glassnet signs --help`"));
    }
    Ok(Outcome { text: pretty(&Value::Object(result)), warnings, code })
}

fn curves(a: &CurvesArgs) -> CliResult<Outcome> {
    let spec = match a.kind {
        CurveKind::Single => CurveSpec::Single,
        CurveKind::Disjoint => CurveSpec::Disjoint { sets: a.sets },
        CurveKind::Nested => CurveSpec::Nested { k1: a.k1 },
    };
    Ok(Outcome::ok(curve_csv(&bound_curve(spec, a.n, a.mode.into())?)))
}

fn parse_target(net: &GlassNetwork, text: &str) -> CliResult<IndexSet> {
    Ok(parse_set(text, net.dim())?)
}

fn factor(a: &FactorArgs, check: ConstraintCheck) -> CliResult<Outcome> {
    let net = load_network(&a.network, check)?;
    let set = parse_target(&net, &a.set)?;
    if a.blocks {
        return Ok(Outcome::ok(pretty(&factorize_blocks(&net, &set, a.epsilon)?)));
    }
    let f = factorize(&net, &set, a.epsilon)?;
    let verification = verify_factorization(&f, &net);
    let out = json!({
        "set": f.target_set,
        "epsilon": f.epsilon,
        "x": f.x,
        "y": f.y,
        "x_inv_p": f.x_inv_p,
        "residual": f.residual,
        "condition": f.condition,
        "verified": verification.ok,
        "violations": verification.violations,
    });
    Ok(Outcome { text: pretty(&out), warnings: f.warnings.clone(), code: EXIT_OK })
}

fn couple(a: &CoupleArgs, check: ConstraintCheck) -> CliResult<Outcome> {
    let net = load_network(&a.network, check)?;
    let sets = |v: &[String]| v.iter().map(|s| parse_target(&net, s)).collect::<CliResult<Vec<_>>>();
    let m = &a.modes;
    let (kind, verdict) = if let Some(v) = &m.compose {
        let s = sets(v)?;
        ("compose", compose_check(&net, &s[0], &s[1])?)
    } else if let Some(v) = &m.decompose {
        let s = sets(v)?;
        ("decompose", decompose_check(&net, &s[0], &s[1])?)
    } else if let Some(v) = &m.couple {
        let s = sets(v)?;
        ("couple", coupling_check(&net, &s[0], &s[1])?)
    } else if let Some(v) = &m.triple {
        let s = sets(v)?;
        ("triple", triple_coupling_check(&net, &s[0], &s[1], &s[2])?)
    } else {
        return Err(usage("choose one of --compose, --decompose, --couple, --triple"));
    };
    let warnings = verdict.warnings.clone();
    let mut value = serde_json::to_value(&verdict).expect("serializable");
    value.as_object_mut().expect("object").insert("check".into(), json!(kind));
    Ok(Outcome { text: pretty(&value), warnings, code: EXIT_OK })
}

fn simulate_cmd(a: &SimulateArgs, check: ConstraintCheck) -> CliResult<Outcome> {
    let net = load_network(&a.network, check)?;
    let x0 = parse_floats(&a.x0)?;
    let tr = simulate(&net, &x0, &SimConfig { max_time: a.max_time, max_switches: a.max_switches })?;
    let mut value = serde_json::to_value(&tr).expect("serializable");
    if let Some(dt) = a.sample_dt {
        let samples = tr.sample(dt)?;
        if let Some(path) = &a.csv {
            fs::write(path, samples_csv(&samples))
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        }
        value.as_object_mut().expect("object").insert("samples".into(), json!(samples));
    }
    Ok(Outcome::ok(pretty(&value)))
}

fn parse_range(coordinate: usize, text: &str) -> CliResult<GridAxis> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("range {text:?} is not MIN:MAX:STEPS")));
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| usage(format!("bad number {t:?} in range {text:?}")));
    let steps = parts[2].trim().parse::<usize>().map_err(|_| usage(format!("bad step count in range {text:?}")))?;
    Ok(GridAxis { coordinate, min: num(parts[0])?, max: num(parts[1])?, steps })
}

fn field(a: &FieldArgs, check: ConstraintCheck) -> CliResult<Outcome> {
    let net = load_network(&a.network, check)?;
    let coord = |c: usize| {
        if c == 0 || c > net.dim() {
            Err(Failure::from(GlassError::IndexOutOfRange { index: c, n: net.dim() }))
        } else {
            Ok(c - 1)
        }
    };
    let axes = [parse_range(coord(a.x_axis)?, &a.x_range)?, parse_range(coord(a.y_axis)?, &a.y_range)?];
    let mut fixed = Vec::new();
    for f in &a.fix {
        let (c, v) = f.split_once('=').ok_or_else(|| usage(format!("--fix {f:?} is not COORD=VALUE")))?;
        let c = c.trim().parse::<usize>().map_err(|_| usage(format!("bad coordinate in --fix {f:?}")))?;
        let v = v.trim().parse::<f64>().map_err(|_| usage(format!("bad value in --fix {f:?}")))?;
        fixed.push((coord(c)?, v));
    }
    Ok(Outcome::ok(field_csv(&vector_field_grid(&net, &axes, &fixed)?)))
}

fn oracle(a: &OracleArgs) -> CliResult<Outcome> {
    let s = &a.scope;
    let report: OracleReport = if s.counts {
        let modes: Vec<CountMode> = match a.mode {
            OracleMode::All => CountMode::ALL.to_vec(),
            OracleMode::Unconstrained => vec![CountMode::Unconstrained],
            OracleMode::Vanishing => vec![CountMode::Vanishing],
            OracleMode::Nonvanishing => vec![CountMode::Nonvanishing],
        };
        oracle_counts(a.n, a.trials, &modes, a.seed)?
    } else if s.theorems {
        oracle_theorems(a.n, a.trials, a.seed)?
    } else if s.equivalence {
        oracle_equivalence(a.n, a.trials, a.seed)?
    } else if s.dynamics {
        oracle_dynamics(a.n, a.trials, 20, a.seed)?
    } else {
        let audit = oracle_signs(a.trials, a.trials, 100, a.n.min(6), a.seed)?;
        let code = if audit.passed() { EXIT_OK } else { EXIT_MISMATCH };
        return Ok(Outcome { text: pretty(&audit), warnings: Vec::new(), code });
    };
    let summary = if report.passed() {
        match report.scope.as_str() {
            "counts" => "all formulas match brute force".to_string(),
            _ => format!("all {} checks pass", report.checks),
        }
    } else {
        format!("{} of {} checks failed", report.failures.len(), report.checks)
    };
    let warnings: Vec<String> = report
        .failures
        .iter()
        .map(|f| format!("[{}] {}: expected {}, got {}", f.module, f.inputs, f.expected, f.got))
        .collect();
    let out = json!({
        "scope": report.scope,
        "seed": a.seed,
        "checks": report.checks,
        "failures": report.failures,
        "summary": summary,
    });
    let code = if report.passed() { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { text: pretty(&out), warnings, code })
}
