//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 argument error,
//! 3 budget exceeded (or exact-integer overflow).

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::Serialize;
use serde_json::json;

use crate::debruijn;
use crate::error::Error;
use crate::quantum::{
    char_poly_direct, evolution_operator, PseudoOrbitExpansion, SpectralInstance, DEFAULT_DIM_CAP,
};
use crate::spectral_stats::{self, VarianceReport};
use crate::words::{self, Word, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Largest allowed `|a_n^orbits - a_n^det|` for `coeffs --method both`.
pub const COEFF_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "qnary",
    version,
    about = "Lyndon words, q-nary graphs and pseudo-orbit expansions"
)]
pub struct Cli {
    /// Output format (default: plain, except `variance` which defaults to json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Work budget: maximum number of words or edges an enumeration may touch.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lyndon word utilities.
    Lyndon {
        #[command(subcommand)]
        action: LyndonAction,
    },
    /// Lyndon factorization of a word.
    Factorize(FactorizeArgs),
    /// Number of words of length n with strictly decreasing factorization.
    Count(CountArgs),
    /// Primitive pseudo orbits of total length n.
    Orbits(OrbitsArgs),
    /// Characteristic polynomial coefficients of U(k).
    Coeffs(CoeffsArgs),
    /// Variance of characteristic polynomial coefficients.
    Variance(VarianceArgs),
}

#[derive(Debug, Subcommand)]
pub enum LyndonAction {
    /// All Lyndon words of length l in lexicographic order.
    List {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        l: usize,
    },
}

#[derive(Debug, Args)]
pub struct FactorizeArgs {
    /// Digits for q <= 10, comma-separated letter indices otherwise.
    pub word: String,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMode {
    Formula,
    Bruteforce,
    Both,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = CountMode::Formula)]
    pub mode: CountMode,
}

#[derive(Debug, Args)]
pub struct OrbitsArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffMethod {
    Det,
    Orbits,
    Both,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = CoeffMethod::Det)]
    pub method: CoeffMethod,
}

#[derive(Debug, Args)]
pub struct VarianceArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte-Carlo samples; 0 skips the Monte-Carlo estimate.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long = "k-max", default_value_t = 1e4)]
    pub k_max: f64,
}

/// A failure mapped onto the exit-code contract.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) => EXIT_ARGUMENT,
            Error::BudgetExceeded { .. } | Error::Overflow(_) => EXIT_BUDGET,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_ARGUMENT,
            message: format!("write failed: {e}"),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_ARGUMENT,
        message: msg.into(),
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_ARGUMENT
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Lyndon {
            action: LyndonAction::List { q, l },
        } => cmd_lyndon_list(*q, *l, fmt(Format::Plain), out),
        Command::Factorize(a) => cmd_factorize(&a.word, a.q, fmt(Format::Plain), out),
        Command::Count(a) => cmd_count(a, cli.budget, fmt(Format::Plain), out),
        Command::Orbits(a) => cmd_orbits(a, cli.budget, fmt(Format::Plain), out),
        Command::Coeffs(a) => cmd_coeffs(a, cli.budget, fmt(Format::Plain), out),
        Command::Variance(a) => cmd_variance(a, cli.budget, fmt(Format::Json), out),
    }
}

fn word_alphabet(q: u32) -> Result<(), Failure> {
    if q < 1 {
        return Err(invalid("q must be at least 1"));
    }
    Ok(())
}

fn graph_alphabet(q: u32, m: usize) -> Result<(), Failure> {
    if q < 2 {
        return Err(invalid("graph subcommands need q >= 2"));
    }
    if m < 1 {
        return Err(invalid("graph order m must be at least 1"));
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(|e| invalid(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_lyndon_list(q: u32, l: usize, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    word_alphabet(q)?;
    let list: Vec<String> = words::lyndon_words(q, l)?.iter().map(Word::to_string).collect();
    match format {
        Format::Json => write_json(out, &list)?,
        Format::Csv => {
            writeln!(out, "word")?;
            for w in &list {
                writeln!(out, "\"{w}\"")?;
            }
        }
        Format::Plain => {
            for w in &list {
                writeln!(out, "{w}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_factorize(word: &str, q: u32, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    word_alphabet(q)?;
    let w = Word::parse(word, q)?;
    let f = words::duval_factorize(&w)?;
    let strict = words::is_strictly_decreasing(&f);
    let factors: Vec<String> = f.factors().iter().map(Word::to_string).collect();
    match format {
        Format::Json => write_json(
            out,
            &json!({ "word": w.to_string(), "q": q, "factors": factors, "strict": strict }),
        )?,
        Format::Csv => {
            writeln!(out, "word,factors,strict")?;
            writeln!(out, "\"{w}\",\"{f}\",{strict}")?;
        }
        Format::Plain => writeln!(out, "{f} strict={strict}")?,
    }
    Ok(EXIT_OK)
}

fn cmd_count(a: &CountArgs, budget: u64, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    word_alphabet(a.q)?;
    let formula = match a.mode {
        CountMode::Formula | CountMode::Both => Some(words::str_count(a.q, a.n)?),
        CountMode::Bruteforce => None,
    };
    let brute = match a.mode {
        CountMode::Bruteforce | CountMode::Both => {
            Some(words::count_strictly_decreasing_bruteforce(a.q, a.n, budget)?)
        }
        CountMode::Formula => None,
    };
    let agree = match (formula, brute) {
        (Some(f), Some(b)) => Some(f == b),
        _ => None,
    };
    match format {
        Format::Json => {
            let mut v = json!({ "q": a.q, "n": a.n });
            if let Some(f) = formula {
                v["formula"] = json!(f);
            }
            if let Some(b) = brute {
                v["bruteforce"] = json!(b);
            }
            if let Some(ok) = agree {
                v["agree"] = json!(ok);
            }
            write_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "q,n,formula,bruteforce,agree")?;
            let opt = |x: Option<u128>| x.map(|v| v.to_string()).unwrap_or_default();
            let ok = agree.map(|v| v.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{},{ok}", a.q, a.n, opt(formula), opt(brute))?;
        }
        Format::Plain => match (formula, brute) {
            (Some(f), Some(b)) => writeln!(out, "formula={f} bruteforce={b} agree={}", f == b)?,
            (Some(f), None) => writeln!(out, "{f}")?,
            (None, Some(b)) => writeln!(out, "{b}")?,
            (None, None) => unreachable!("every mode computes something"),
        },
    }
    Ok(if agree == Some(false) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    })
}

fn cmd_orbits(a: &OrbitsArgs, budget: u64, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    graph_alphabet(a.q, a.m)?;
    // The graph itself is only needed to validate (q, m) against the budget.
    debruijn::build_graph(a.q, a.m, budget)?;
    let pos = debruijn::enumerate_primitive_pseudo_orbits(a.q, a.n, budget)?;
    match format {
        Format::Json => {
            let list: Vec<Vec<String>> = pos
                .iter()
                .map(|p| p.orbits().iter().map(|o| o.to_string()).collect())
                .collect();
            write_json(
                out,
                &json!({ "q": a.q, "m": a.m, "n": a.n, "count": pos.len(), "pseudo_orbits": list }),
            )?;
        }
        Format::Csv => {
            writeln!(out, "pseudo_orbit,orbit_count,length")?;
            for p in &pos {
                writeln!(out, "\"{p}\",{},{}", p.orbit_count(), p.topological_length())?;
            }
        }
        Format::Plain => {
            for p in &pos {
                writeln!(out, "{p}")?;
            }
            writeln!(out, "count={}", pos.len())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_coeffs(a: &CoeffsArgs, budget: u64, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    graph_alphabet(a.q, a.m)?;
    if !a.k.is_finite() {
        return Err(invalid("k must be finite"));
    }
    let inst = SpectralInstance::<f64>::new(a.q, a.m, a.seed, budget)?;
    if inst.dimension() > DEFAULT_DIM_CAP {
        return Err(invalid(format!(
            "dimension {} exceeds the cap of {DEFAULT_DIM_CAP}",
            inst.dimension()
        )));
    }
    let det = match a.method {
        CoeffMethod::Det | CoeffMethod::Both => Some(char_poly_direct(
            &evolution_operator(&inst, a.k)?,
            DEFAULT_DIM_CAP,
        )?),
        CoeffMethod::Orbits => None,
    };
    let orbits = match a.method {
        CoeffMethod::Orbits | CoeffMethod::Both => Some(
            PseudoOrbitExpansion::new(&inst, inst.dimension(), budget)?.coefficients(a.k)?,
        ),
        CoeffMethod::Det => None,
    };
    let max_delta = match (&det, &orbits) {
        (Some(d), Some(o)) => Some(d.max_abs_diff(o)),
        _ => None,
    };
    let shown = det.as_ref().or(orbits.as_ref()).expect("one method ran");
    let pairs: Vec<[f64; 2]> = shown.coeffs().iter().map(|c: &Complex<f64>| [c.re, c.im]).collect();
    let method = match a.method {
        CoeffMethod::Det => "det",
        CoeffMethod::Orbits => "orbits",
        CoeffMethod::Both => "both",
    };
    match format {
        Format::Json => {
            let mut v = json!({
                "q": a.q, "m": a.m, "k": a.k, "seed": a.seed, "method": method,
                "dimension": inst.dimension(), "coefficients": pairs,
            });
            if let Some(d) = max_delta {
                v["max_delta"] = json!(d);
                v["tolerance"] = json!(COEFF_TOLERANCE);
            }
            write_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "q,m,k,seed,n,re,im")?;
            for (n, [re, im]) in pairs.iter().enumerate() {
                writeln!(out, "{},{},{},{},{n},{re:e},{im:e}", a.q, a.m, a.k, a.seed)?;
            }
        }
        Format::Plain => {
            writeln!(out, "seed={} q={} m={} k={} method={method}", a.seed, a.q, a.m, a.k)?;
            for (n, [re, im]) in pairs.iter().enumerate() {
                writeln!(out, "a[{n}] = ({re:.15e}, {im:.15e})")?;
            }
            if let Some(d) = max_delta {
                writeln!(out, "max_delta={d:e}")?;
            }
        }
    }
    Ok(match max_delta {
        Some(d) if !(d < COEFF_TOLERANCE) => EXIT_MISMATCH,
        _ => EXIT_OK,
    })
}

const VARIANCE_CSV_HEADER: &str = "q,m,n,dimension,seed,pseudo_orbit_count,degeneracy_groups,diag,diag_from_orbits,exact_grouped,cue_ref,coe_ref,samples,k_max,mc_estimate,std_error";

fn variance_csv_row(r: &VarianceReport) -> String {
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.q,
        r.m,
        r.n,
        r.dimension,
        r.seed,
        r.pseudo_orbit_count,
        r.degeneracy_groups,
        r.diag,
        r.diag_from_orbits,
        r.exact_grouped,
        r.cue_ref,
        r.coe_ref,
        r.samples.map(|s| s.to_string()).unwrap_or_default(),
        opt(r.k_max),
        opt(r.mc_estimate),
        opt(r.std_error),
    )
}

fn cmd_variance(a: &VarianceArgs, budget: u64, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    graph_alphabet(a.q, a.m)?;
    if a.samples == 1 {
        return Err(invalid("--samples must be 0 or at least 2"));
    }
    let r = spectral_stats::variance_report(a.q, a.m, a.n, a.seed, a.samples, a.k_max, budget)?;
    match format {
        Format::Json => write_json(out, &r)?,
        Format::Csv => {
            writeln!(out, "{VARIANCE_CSV_HEADER}")?;
            writeln!(out, "{}", variance_csv_row(&r))?;
        }
        Format::Plain => {
            writeln!(out, "q={} m={} n={} E={} seed={}", r.q, r.m, r.n, r.dimension, r.seed)?;
            writeln!(out, "pseudo_orbit_count={} degeneracy_groups={}", r.pseudo_orbit_count, r.degeneracy_groups)?;
            writeln!(out, "diag={} diag_from_orbits={}", r.diag, r.diag_from_orbits)?;
            writeln!(out, "exact_grouped={}", r.exact_grouped)?;
            writeln!(out, "cue_ref={} coe_ref={}", r.cue_ref, r.coe_ref)?;
            if let (Some(e), Some(s)) = (r.mc_estimate, r.std_error) {
                writeln!(out, "mc_estimate={e} std_error={s} samples={}", a.samples)?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["qnary"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lyndon_list() {
        let (code, out, _) = call(&["lyndon", "list", "--q", "2", "--l", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0001\n0011\n0111\n");
        let (_, out, _) = call(&["lyndon", "list", "--q", "2", "--l", "4", "--format", "json"]);
        assert_eq!(out.trim(), r#"["0001","0011","0111"]"#);
        let (code, _, err) = call(&["lyndon", "list", "--q", "2", "--l", "0"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn factorize() {
        assert_eq!(call(&["factorize", "110", "--q", "2"]).1, "(1)(1)(0) strict=false\n");
        assert_eq!(call(&["factorize", "101", "--q", "2"]).1, "(1)(01) strict=true\n");
        assert_eq!(call(&["factorize", "2", "--q", "2"]).0, 2);
        assert_eq!(call(&["factorize", "", "--q", "2"]).0, 2);
        assert_eq!(call(&["factorize", "11,3,0", "--q", "12"]).1, "(11)(3)(0) strict=true\n");
    }

    #[test]
    fn count() {
        let (code, out, _) = call(&["count", "--q", "2", "--n", "4", "--mode", "both"]);
        assert_eq!((code, out.as_str()), (0, "formula=8 bruteforce=8 agree=true\n"));
        assert_eq!(call(&["count", "--q", "3", "--n", "2", "--mode", "bruteforce"]).1, "6\n");
        assert_eq!(call(&["count", "--q", "2", "--n", "40", "--mode", "bruteforce"]).0, 3);
        assert_eq!(call(&["count", "--q", "2", "--n", "12", "--mode", "bruteforce", "--budget", "100"]).0, 3);
        assert_eq!(call(&["count", "--q", "0", "--n", "3"]).0, 2);
    }

    #[test]
    fn orbits() {
        let (code, out, _) = call(&["orbits", "--q", "2", "--m", "3", "--n", "4"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("count=8\n"));
        assert_eq!(out.lines().count(), 9);
        let (_, out, _) = call(&["orbits", "--q", "2", "--m", "3", "--n", "0"]);
        assert_eq!(out, "{}\ncount=1\n");
        assert_eq!(call(&["orbits", "--q", "1", "--m", "3", "--n", "2"]).0, 2);
    }

    #[test]
    fn coeffs() {
        let args = ["coeffs", "--q", "2", "--m", "2", "--k", "3.5", "--seed", "7", "--method", "both", "--format", "json"];
        let (code, out, _) = call(&args);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["max_delta"].as_f64().unwrap() < 1e-9);
        assert_eq!(v["seed"], 7);
        let a0 = &v["coefficients"][0];
        assert!((a0[0].as_f64().unwrap() - 1.0).abs() < 1e-12 && a0[1].as_f64().unwrap().abs() < 1e-12);
        assert_eq!(call(&args).1, out);
        assert_eq!(call(&["coeffs", "--q", "2", "--m", "0", "--k", "1"]).0, 2);
        assert_eq!(call(&["coeffs", "--q", "2", "--m", "1", "--k", "-2.5"]).0, 0);
    }

    #[test]
    fn variance() {
        let (code, out, _) = call(&["variance", "--q", "2", "--m", "2", "--n", "4", "--samples", "0"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["diag"], 0.5);
        assert_eq!(v["cue_ref"], 1.0);
        assert_eq!(v["pseudo_orbit_count"], 8);
        assert!(v.get("mc_estimate").is_none());
        let (_, csv, _) = call(&["variance", "--q", "3", "--m", "1", "--n", "3", "--format", "csv"]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), VARIANCE_CSV_HEADER);
        assert_eq!(lines.next().unwrap().split(',').count(), VARIANCE_CSV_HEADER.split(',').count());
        assert_eq!(call(&["variance", "--q", "2", "--m", "1", "--n", "5"]).0, 2);
        assert_eq!(call(&["variance", "--q", "2", "--m", "1", "--n", "2", "--samples", "1"]).0, 2);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["count", "--q", "2"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
