//! The `quadcong` command line.
//!
//! Every run prints its fully resolved configuration (defaults, seed and
//! tool version included) before any result. JSON output is a single
//! object whose keys are sorted at every level, so parsing it and
//! serializing again with `serde_json::to_string_pretty` reproduces it byte
//! for byte.
//!
//! Exit codes: 0 success, 1 internal check failed, 2 inadmissible input,
//! 3 budget exceeded, 4 parse error, 5 domain error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::conic::{count_solutions, enumerate_all, TernaryForm};
use crate::counting::{run_asymptotic_experiment, ExperimentOptions, CLASS_BUDGET};
use crate::error::{Error, Result};
use crate::expsum::{cochrane_eval, s_alpha_direct, CochraneOutcome};
use crate::modarith::PrimePowerModulus;
use crate::oracle::conic_solutions;
use crate::polyrat::RationalAmplitude;
use crate::quadric::{bound_sweep, dual_form, IntegralTernaryForm, ZERO_COUNT_BUDGET};
use crate::MASTER_SEED;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default location of frozen golden data.
pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

#[derive(Debug, Parser)]
#[command(name = "quadcong", version, about = "Quadratic congruences modulo prime powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, default_value_t = MASTER_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Work cap; each subcommand has its own default.
    #[arg(long)]
    budget_terms: Option<u64>,
}

#[derive(Debug, Args)]
struct FreezeArgs {
    /// Also write the result as golden CSV.
    #[arg(long)]
    freeze: bool,
    #[arg(long)]
    golden_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of solutions of q(x, y) = 0 mod p^n.
    Count {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Compare with exhaustive search.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// List the solutions by stratum as (s, t, x, y).
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Ignore the listing budget.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        freeze: FreezeArgs,
        #[command(flatten)]
        common: Common,
    },
    /// S_alpha(f; p^n) by stationary phase, falling back to direct summation.
    Expsum {
        /// Amplitude such as "x^2 + 3*x" or "(1 + x)/(2 + x^2)".
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Ratio of the weighted count T to its main term over a range of n.
    Asymptotic {
        #[arg(long, allow_hyphen_values = true, default_value = "1 0 1 0 0 1")]
        form: String,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value = "5:10")]
        n_range: String,
        #[arg(long, default_value_t = 0.6)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "0 0 0")]
        center: String,
        #[command(flatten)]
        freeze: FreezeArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Dual form invariants and a primitive-zero sweep.
    Quadric {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// lo:hi or lo:hi:step
        #[arg(long, default_value = "5:100:5")]
        b_range: String,
        /// Sweep the dual form or the input form itself.
        #[arg(long, value_enum, default_value_t = Target::Dual)]
        target: Target,
        #[command(flatten)]
        freeze: FreezeArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Dual,
    Form,
}

/// What a run produced: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotAdmissible(_) | Error::SingularForm | Error::NoSolutionModP { .. } => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::Parse(_) => 4,
        Error::NotOddPrime(_)
        | Error::ZeroExponent
        | Error::ModulusTooLarge { .. }
        | Error::NonUnit { .. }
        | Error::PoleModP { .. }
        | Error::ZeroDenominator
        | Error::DegreeTooLarge(_)
        | Error::InvalidConfig(_) => 5,
        Error::CardinalityMismatch { .. } | Error::FormulaMismatch { .. } | Error::IdentityMismatch(_) => 1,
    }
}

/// Runs the CLI on `args` (program name first) without touching the process.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    let mut stderr = String::new();
    match run(cli.command, &mut stderr) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Outcome { code: exit_code(&e), stdout: String::new(), stderr }
        }
    }
}

pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let out = execute(args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

fn parse_form(text: &str) -> Result<TernaryForm> {
    text.parse()
}

fn parse_center(text: &str) -> Result<[i64; 3]> {
    let parts: Vec<i64> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad center coordinate {t:?}"))))
        .collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|_| Error::Parse(format!("center needs three integers, got {text:?}")))
}

/// `lo:hi` or `lo:hi:step`, inclusive.
fn parse_range(text: &str) -> Result<Vec<i64>> {
    let parts: Vec<i64> = text
        .split(':')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad range {text:?}"))))
        .collect::<Result<_>>()?;
    let (lo, hi, step) = match parts[..] {
        [lo, hi] => (lo, hi, 1),
        [lo, hi, step] => (lo, hi, step),
        _ => return Err(Error::Parse(format!("range {text:?} is not lo:hi[:step]"))),
    };
    if step <= 0 || lo > hi {
        return Err(Error::InvalidConfig(format!("empty range {text:?}")));
    }
    Ok((lo..=hi).step_by(step as usize).collect())
}

fn form_tag(form: &TernaryForm) -> String {
    form.coefficients().map(|c| c.to_string()).join("_")
}

/// Integers as JSON numbers when they fit in `i64`, otherwise as strings.
fn big(x: i128) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(format: Format, config: &Map<String, Value>, scalars: &Map<String, Value>, table: Option<&Table>) -> String {
    match format {
        Format::Json => {
            let mut obj = scalars.clone();
            obj.insert("config".into(), Value::Object(config.clone()));
            if let Some(t) = table {
                let rows = t
                    .rows
                    .iter()
                    .map(|r| Value::Object(t.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                    .collect();
                obj.insert("rows".into(), Value::Array(rows));
            }
            canonical_json(&Value::Object(obj))
        }
        Format::Csv => {
            let mut out = String::new();
            for (k, v) in config.iter().chain(scalars) {
                let _ = writeln!(out, "# {k}={}", cell(v));
            }
            if let Some(t) = table {
                out.push_str(&table_csv(t));
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for (k, v) in config {
                let _ = writeln!(out, "# {k} = {}", cell(v));
            }
            for (k, v) in scalars {
                let _ = writeln!(out, "{k}: {}", cell(v));
            }
            if let Some(t) = table {
                let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
                let widths: Vec<usize> = (0..t.columns.len())
                    .map(|j| cells.iter().map(|r| r[j].len()).chain([t.columns[j].len()]).max().unwrap_or(0))
                    .collect();
                let line = |items: Vec<&str>| {
                    items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ")
                };
                let _ = writeln!(out, "{}", line(t.columns.clone()));
                for r in &cells {
                    let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
                }
            }
            out
        }
    }
}

/// Pretty JSON with sorted keys; a fixed point of parse-then-print.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn table_csv(t: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.columns).expect("in-memory write");
    for r in &t.rows {
        w.write_record(r.iter().map(cell)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

fn freeze(args: &FreezeArgs, name: &str, config: &Map<String, Value>, scalars: &Map<String, Value>, table: &Table, log: &mut String) -> Result<()> {
    if !args.freeze {
        return Ok(());
    }
    let dir = args.golden_dir.clone().unwrap_or_else(default_golden_dir);
    let path = dir.join(name);
    std::fs::create_dir_all(&dir)
        .and_then(|_| std::fs::write(&path, render(Format::Csv, config, scalars, Some(table))))
        .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))?;
    let _ = writeln!(log, "froze {}", path.display());
    Ok(())
}

fn base_config(command: &str, common: &Common, budget: u64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(VERSION));
    m.insert("seed".into(), json!(common.seed));
    m.insert("format".into(), json!(common.format.name()));
    m.insert("budget_terms".into(), json!(budget));
    m
}

fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget: budget as u128 })
    } else {
        Ok(())
    }
}

fn run(command: Command, log: &mut String) -> Result<String> {
    match command {
        Command::Count { form, p, n, verify, common } => {
            let budget = common.budget_terms.unwrap_or(100_000_000);
            let mut config = base_config("count", &common, budget);
            let q_form = parse_form(&form)?;
            config.insert("form".into(), json!(q_form.to_string()));
            config.insert("p".into(), json!(p));
            config.insert("n".into(), json!(n));
            config.insert("verify".into(), json!(verify));
            let m = PrimePowerModulus::new(p, n)?;
            q_form.validate(p).require()?;
            let count = count_solutions(&q_form.dehomogenize(), &m)?;
            let mut scalars = Map::new();
            scalars.insert("count".into(), json!(count));
            if verify {
                check_budget((m.q() as u128).pow(2), budget)?;
                let oracle = conic_solutions(&q_form, m.q()).len() as u64;
                scalars.insert("oracle".into(), json!(oracle));
                scalars.insert("status".into(), json!(if oracle == count { "OK" } else { "MISMATCH" }));
                if oracle != count {
                    let _ = write!(log, "{}", render(common.format, &config, &scalars, None));
                    return Err(Error::FormulaMismatch { expected: count, found: oracle });
                }
            }
            Ok(render(common.format, &config, &scalars, None))
        }
        Command::Enumerate { form, p, n, force, verify, freeze: fz, common } => {
            let budget = common.budget_terms.unwrap_or(100_000);
            let mut config = base_config("enumerate", &common, budget);
            let q_form = parse_form(&form)?;
            config.insert("form".into(), json!(q_form.to_string()));
            config.insert("p".into(), json!(p));
            config.insert("n".into(), json!(n));
            config.insert("force".into(), json!(force));
            config.insert("verify".into(), json!(verify));
            let m = PrimePowerModulus::new(p, n)?;
            q_form.validate(p).require()?;
            let count = count_solutions(&q_form.dehomogenize(), &m)?;
            if !force {
                check_budget(count as u128, budget)?;
            }
            let set = enumerate_all(&q_form.dehomogenize(), &m)?;
            let mut scalars = Map::new();
            scalars.insert("count".into(), json!(set.len()));
            scalars.insert("base".into(), json!([set.base().alpha.value(), set.base().beta.value()]));
            if verify {
                let mut listed: Vec<(u64, u64)> = set.points().collect();
                listed.sort_unstable();
                let oracle = conic_solutions(&q_form, m.q());
                scalars.insert("status".into(), json!(if listed == oracle { "OK" } else { "MISMATCH" }));
                if listed != oracle {
                    return Err(Error::CardinalityMismatch { expected: oracle.len() as u64, found: listed.len() as u64 });
                }
            }
            let table = Table {
                columns: vec!["s", "t", "x", "y"],
                rows: set
                    .entries()
                    .iter()
                    .map(|e| vec![json!(e.stratum), json!(e.t), json!(e.x.value()), json!(e.y.value())])
                    .collect(),
            };
            let name = format!("enumerate_{}_p{p}_n{n}.csv", form_tag(&q_form));
            freeze(&fz, &name, &config, &scalars, &table, log)?;
            Ok(render(common.format, &config, &scalars, Some(&table)))
        }
        Command::Expsum { f, p, n, alpha, verify, common } => {
            let budget = common.budget_terms.unwrap_or(100_000_000);
            let mut config = base_config("expsum", &common, budget);
            let amp: RationalAmplitude = f.parse()?;
            config.insert("f".into(), json!(amp.to_string()));
            config.insert("p".into(), json!(p));
            config.insert("n".into(), json!(n));
            config.insert("alpha".into(), json!(alpha));
            config.insert("verify".into(), json!(verify));
            let m = PrimePowerModulus::new(p, n)?;
            let outcome = cochrane_eval(&amp, alpha as i128, &m)?;
            let mut scalars = Map::new();
            let direct = |scalars: &mut Map<String, Value>| -> Result<_> {
                check_budget(m.p_pow(n - 1) as u128, budget)?;
                let v = s_alpha_direct(&amp, alpha as i128, &m)?;
                scalars.insert("direct_re".into(), json!(v.re));
                scalars.insert("direct_im".into(), json!(v.im));
                Ok(v)
            };
            let value = match outcome {
                CochraneOutcome::Evaluated { value, r, alpha_star } => {
                    scalars.insert("method".into(), json!("cochrane"));
                    scalars.insert("r".into(), json!(r));
                    scalars.insert("alpha_star".into(), json!(alpha_star));
                    if verify {
                        let d = direct(&mut scalars)?;
                        scalars.insert("difference".into(), json!((value - d).norm()));
                    }
                    value
                }
                CochraneOutcome::Unsupported(reason) => {
                    scalars.insert("method".into(), json!("direct-fallback"));
                    scalars.insert("unsupported".into(), json!(format!("{reason:?}")));
                    direct(&mut scalars)?
                }
            };
            scalars.insert("re".into(), json!(value.re));
            scalars.insert("im".into(), json!(value.im));
            Ok(render(common.format, &config, &scalars, None))
        }
        Command::Asymptotic { form, p, n_range, theta, center, freeze: fz, common } => {
            let budget = common.budget_terms.unwrap_or(CLASS_BUDGET as u64);
            let mut config = base_config("asymptotic", &common, budget);
            let q_form = parse_form(&form)?;
            let exponents = parse_range(&n_range)?;
            let center = parse_center(&center)?;
            let opts = ExperimentOptions { center, class_budget: budget as u128, ..Default::default() };
            config.insert("form".into(), json!(q_form.to_string()));
            config.insert("p".into(), json!(p));
            config.insert("n_range".into(), json!(n_range));
            config.insert("theta".into(), json!(theta));
            config.insert("center".into(), json!(center));
            config.insert("naive_budget".into(), json!(opts.naive_budget as u64));
            PrimePowerModulus::new(p, 1)?;
            q_form.validate(p).require()?;
            let exponents: Vec<u32> = exponents
                .into_iter()
                .map(|n| u32::try_from(n).map_err(|_| Error::InvalidConfig(format!("exponent {n} out of range"))))
                .collect::<Result<_>>()?;
            if exponents.contains(&0) {
                return Err(Error::ZeroExponent);
            }
            let rows = run_asymptotic_experiment(&q_form, p, &exponents, theta, &opts)?;
            let table = Table {
                columns: vec!["n", "q", "N", "theta", "T", "T0", "ratio", "method", "seconds"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            json!(r.n),
                            json!(r.q),
                            json!(r.scale),
                            json!(r.theta),
                            json!(r.t),
                            json!(r.t0),
                            json!(r.ratio),
                            json!(r.method),
                            json!(r.seconds),
                        ]
                    })
                    .collect(),
            };
            let scalars = Map::new();
            let name = format!("asymptotic_{}_p{p}_theta{theta}_n{}.csv", form_tag(&q_form), n_range.replace(':', "-"));
            freeze(&fz, &name, &config, &scalars, &table, log)?;
            Ok(render(common.format, &config, &scalars, Some(&table)))
        }
        Command::Quadric { form, b_range, target, freeze: fz, common } => {
            let budget = common.budget_terms.unwrap_or(ZERO_COUNT_BUDGET as u64);
            let mut config = base_config("quadric", &common, budget);
            let q_form = parse_form(&form)?;
            let bounds = parse_range(&b_range)?;
            config.insert("form".into(), json!(q_form.to_string()));
            config.insert("b_range".into(), json!(b_range));
            config.insert("target".into(), json!(match target {
                Target::Dual => "dual",
                Target::Form => "form",
            }));
            let dual = dual_form(&q_form)?;
            let mut scalars = Map::new();
            for (k, v) in [("M", dual.m), ("N", dual.n), ("O", dual.o), ("P", dual.p), ("Qc", dual.qc), ("R", dual.r)] {
                scalars.insert(format!("dual_{k}"), big(v));
            }
            scalars.insert("dual_det".into(), big(dual.det_assoc));
            scalars.insert("dual_minor_gcd".into(), big(dual.minor_gcd as i128));
            scalars.insert("dual_tau".into(), json!(dual.tau_det));
            let (swept, inv) = match target {
                Target::Dual => (dual.as_form(), dual.invariants()),
                Target::Form => {
                    let f = IntegralTernaryForm::from(&q_form);
                    (f, f.invariants()?)
                }
            };
            scalars.insert("swept_det".into(), big(inv.det));
            scalars.insert("swept_minor_gcd".into(), big(inv.minor_gcd as i128));
            scalars.insert("swept_tau".into(), json!(inv.tau_det));
            let rows = bound_sweep(&swept, &inv, &bounds, budget as u128)?;
            let table = Table {
                columns: vec!["B", "count", "bound", "ratio"],
                rows: rows
                    .iter()
                    .map(|r| vec![json!(r.bound), json!(r.count), json!(r.bound_value), json!(r.ratio)])
                    .collect(),
            };
            let tag = match target {
                Target::Dual => "dual",
                Target::Form => "form",
            };
            let name = format!("quadric_{}_{tag}_B{}.csv", form_tag(&q_form), b_range.replace(':', "-"));
            freeze(&fz, &name, &config, &scalars, &table, log)?;
            Ok(render(common.format, &config, &scalars, Some(&table)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        execute(std::iter::once("quadcong").chain(args.iter().copied()))
    }

    #[test]
    fn count_examples() {
        let out = run_args(&["count", "--form", "1 0 1 0 0 1", "--p", "5", "--n", "2"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("count: 20"));
        let out = run_args(&["count", "--form", "1 0 1 0 0 1", "--p", "3", "--n", "1", "--verify"]);
        assert!(out.stdout.contains("count: 4") && out.stdout.contains("oracle: 4") && out.stdout.contains("OK"));
        let out = run_args(&["count", "--form", "5 0 1 0 0 1", "--p", "5", "--n", "2"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("p divides a"));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5:8").unwrap(), vec![5, 6, 7, 8]);
        assert_eq!(parse_range("5:20:5").unwrap(), vec![5, 10, 15, 20]);
        assert!(matches!(parse_range("5"), Err(Error::Parse(_))));
        assert!(matches!(parse_range("9:5"), Err(Error::InvalidConfig(_))));
        assert_eq!(parse_center("7 -3 11").unwrap(), [7, -3, 11]);
        assert!(parse_center("1 2").is_err());
    }

    #[test]
    fn big_integers_stay_exact() {
        assert_eq!(big(5), json!(5));
        assert_eq!(big(1 << 80), json!((1i128 << 80).to_string()));
    }
}
