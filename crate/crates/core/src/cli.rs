//! Command-line front end. Every command prints one line of JSON on stdout
//! (`scan` prints one line per record, then a summary line).
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 search exhausted.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::existence::{self, bound_chain, critical_bound_check, noncritical_bound_check, sieve};
use crate::ff::{Fq, PrimePower};
use crate::linearized::{fq_order, k_normality, linearized_eval};
use crate::num_theory::{parse_decimal, FactorCache, Factorizer};
use crate::property_a::{classify_or_enumerate, property_a_exhaustive, property_a_classify};
use crate::search::{
    census_by_k, explicit_element, knormal_count_formula, scan_each, verify_certificate, Certificate,
    ScanOptions, DEFAULT_CENSUS_GUARD,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "knormal", version, about = "Primitive k-normal elements of F_{q^n} over F_q")]
pub struct Cli {
    /// Wrap output as {"command", "status", "payload" | "message"}.
    #[arg(long, global = true)]
    envelope: bool,

    /// Factorization cache: lines `value=p1^e1*p2^e2`, `#` comments.
    #[arg(long, global = true, value_name = "FILE")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factor a positive integer below 2^128.
    Factor { n: u128 },
    /// Existence verdict for primitive k-normal elements of F_{q^n}.
    Exists {
        q: u64,
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Sieve trace for n = 6, every r tried.
    Sieve { q: u64 },
    /// Certificate for a primitive 3-normal element of F_{q^6}.
    Search { q: u64 },
    /// Re-check a certificate file.
    Verify { file: PathBuf },
    /// Count elements of F_{q^n} with k-normality k by enumeration.
    Census {
        q: u64,
        n: usize,
        k: usize,
        #[arg(long)]
        primitive: bool,
        /// Largest q^n to enumerate.
        #[arg(long, default_value_t = DEFAULT_CENSUS_GUARD)]
        guard: u128,
    },
    /// Property-(A) classification of (q, k) with n = 2k.
    Classify { q: u64, k: usize },
    /// Initial bound and refinement chain for n = 6.
    Bounds {
        #[arg(long, default_value = "6.48")]
        t: String,
        #[arg(long, default_value = "11.23")]
        u: String,
        /// Bits of fixed-point precision.
        #[arg(long, default_value_t = existence::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Admissibility, sieve and optional witness for every prime power in [lo, hi].
    Scan {
        lo: u64,
        hi: u64,
        /// Attach a verified certificate to each admissible q.
        #[arg(long)]
        witness: bool,
        /// Only admissible q where the sieve fails.
        #[arg(long)]
        failures_only: bool,
        /// Print only the summary line.
        #[arg(long)]
        summary_only: bool,
        /// Worker threads (0: one per core).
        #[arg(long, env = "KNORMAL_JOBS", default_value_t = 0)]
        jobs: usize,
    },
    /// Quick run of the witness, bound and oracle checks.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Factor { .. } => "factor",
            Command::Exists { .. } => "exists",
            Command::Sieve { .. } => "sieve",
            Command::Search { .. } => "search",
            Command::Verify { .. } => "verify",
            Command::Census { .. } => "census",
            Command::Classify { .. } => "classify",
            Command::Bounds { .. } => "bounds",
            Command::Scan { .. } => "scan",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Serialize)]
struct FactorPayload<'a> {
    value: u128,
    factors: &'a [(u128, u32)],
}

/// A command that ran to completion but reports failure (e.g. an invalid certificate).
struct Failure {
    payload: String,
    message: String,
}

enum Outcome {
    /// Serialized JSON payload.
    Ok(String),
    Failed(Failure),
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SearchExhausted(_) => EXIT_EXHAUSTED,
        _ => EXIT_DOMAIN,
    }
}

fn prime_power(q: u64) -> Result<PrimePower> {
    PrimePower::new(q)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn digits_poly(fq: &Fq, coeffs: &[u64]) -> Vec<Vec<u64>> {
    coeffs.iter().map(|&c| fq.digits(c)).collect()
}

fn cmd_exists(q: u64, n: u32, k: u32, factorizer: &Factorizer) -> Result<Value> {
    let pp = prime_power(q)?;
    if 2 * k > n {
        return Err(Error::InvalidInput(format!("need 2k <= n (n = {n}, k = {k})")));
    }
    if 2 * k < n {
        let ok = noncritical_bound_check(pp, n, k, factorizer)?;
        return Ok(json!({
            "q": q, "n": n, "k": k,
            "noncritical_bound": ok,
            "verdict": if ok { "exists" } else { "undecided" },
        }));
    }
    let class = classify_or_enumerate(pp, k as usize)?;
    let critical = critical_bound_check(pp, n, factorizer)?;
    let mut out = json!({
        "q": q, "n": n, "k": k,
        "property_a": class,
        "critical_bound": critical,
    });
    let verdict = if !class.exists {
        "does-not-exist"
    } else if n == 6 {
        out["admissible"] = json!(pp.admissible_n6());
        out["sieve"] = json!(sieve(pp, factorizer)?.passed);
        "exists"
    } else if critical {
        "exists"
    } else {
        "undecided"
    };
    out["verdict"] = json!(verdict);
    Ok(out)
}

fn cmd_classify(q: u64, k: usize) -> Result<Value> {
    let pp = prime_power(q)?;
    let class = classify_or_enumerate(pp, k)?;
    let fq = Fq::new(pp)?;
    let witness = property_a_exhaustive(pp, k)?.map(|g| digits_poly(&fq, g.coeffs()));
    let mut v = to_value(&class)?;
    v["witness"] = json!(witness);
    Ok(v)
}

fn cmd_census(q: u64, n: usize, k: usize, primitive: bool, guard: u128) -> Result<Value> {
    let pp = prime_power(q)?;
    if k > n {
        return Err(Error::InvalidInput(format!("need k <= n (n = {n}, k = {k})")));
    }
    let counts = census_by_k(pp, n, primitive, guard)?;
    let mut v = json!({
        "q": q, "n": n, "k": k, "primitive": primitive,
        "count": counts[k],
    });
    if !primitive {
        let formula: BigUint = knormal_count_formula(pp, n, k)?;
        v["formula"] = json!(formula.to_string());
    }
    Ok(v)
}

fn cmd_bounds(t: &str, u: &str, precision: u32) -> Result<Value> {
    let report = bound_chain(&parse_decimal(t)?, &parse_decimal(u)?, precision)?;
    let mut v = to_value(&report)?;
    v["final_bound"] = json!(existence::sci_upper(report.final_bound(), 6));
    Ok(v)
}

fn cmd_verify(file: &PathBuf, factorizer: &Factorizer) -> Result<Outcome> {
    let text = std::fs::read_to_string(file)?;
    let cert: Certificate = serde_json::from_str(&text)
        .map_err(|e| Error::MalformedCertificate(e.to_string()))?;
    let v = verify_certificate(&cert, factorizer)?;
    let payload = serde_json::to_string(&v)?;
    if v.valid {
        Ok(Outcome::Ok(payload))
    } else {
        Ok(Outcome::Failed(Failure {
            message: format!("certificate failed verification: {}", v.diagnostics.join("; ")),
            payload,
        }))
    }
}

fn selftest(factorizer: &Factorizer) -> Result<Outcome> {
    let mut checks: Vec<(String, bool)> = Vec::new();

    // fixed q = 7 construction
    let base = Fq::new(prime_power(7)?)?;
    let ctx = crate::ff::FieldCtx::with_modulus(
        base,
        crate::ff::Poly::from_u64s(vec![2, 2, 4, 3, 2, 2, 1]),
        factorizer,
    )?;
    let f = crate::ff::Poly::from_u64s(vec![4, 5, 5, 1]);
    let gamma = {
        use crate::ff::Field;
        ctx.add(&linearized_eval(&ctx, &f, &ctx.generator()), &ctx.one())
    };
    checks.push((
        "q=7 witness: order 117648, 3-normal".into(),
        ctx.element_order(&gamma)? == BigUint::from(117648u32) && k_normality(&ctx, &gamma)? == 3,
    ));
    checks.push((
        "q=7 witness: F_q-order has degree 3".into(),
        fq_order(&ctx, &gamma)?.degree() == Some(3),
    ));

    for q in [3u64, 4, 5, 7, 9] {
        let r = explicit_element(prime_power(q)?, factorizer)?;
        checks.push((format!("search q={q} verifies"), verify_certificate(&r.certificate, factorizer)?.valid));
    }

    for q in [2u64, 3, 4] {
        let pp = prime_power(q)?;
        let counts = census_by_k(pp, 6, false, DEFAULT_CENSUS_GUARD)?;
        let ok = (0..=6).all(|k| knormal_count_formula(pp, 6, k).map(|f| f == BigUint::from(counts[k])).unwrap_or(false));
        checks.push((format!("census q={q} n=6 matches divisor formula"), ok));
    }
    let prim2 = census_by_k(prime_power(2)?, 6, true, DEFAULT_CENSUS_GUARD)?[3];
    let prim3 = census_by_k(prime_power(3)?, 6, true, DEFAULT_CENSUS_GUARD)?[3];
    checks.push(("primitive 3-normal: none for q=2, some for q=3".into(), prim2 == 0 && prim3 > 0));

    let mut agree = true;
    for pp in crate::ff::prime_powers_in(2, 32) {
        for k in 2..=6 {
            agree &= property_a_classify(pp, k)?.exists == property_a_exhaustive(pp, k)?.is_some();
        }
    }
    checks.push(("classification agrees with enumeration, q <= 32, k <= 6".into(), agree));

    let sieve_ok = [2u64, 3, 7].iter().all(|&q| !sieve(PrimePower::new(q).unwrap(), factorizer).map(|s| s.passed).unwrap_or(true));
    checks.push(("sieve fails for q = 2, 3, 7".into(), sieve_ok));

    let report = bound_chain(&parse_decimal("6.48")?, &parse_decimal("11.23")?, existence::DEFAULT_PRECISION)?;
    let omegas: Vec<usize> = report.chain.iter().map(|s| s.omega_max).collect();
    checks.push(("r(6.48, 11.23) = 19137".into(), report.r_count == 19137));
    checks.push(("chain omega_max 177, 39, 30, 29".into(), omegas.starts_with(&[177, 39, 30, 29])));
    checks.push((
        "final bound below 2.79e7".into(),
        *report.final_bound() <= parse_decimal("2.79e7")?,
    ));

    let passed = checks.iter().all(|c| c.1);
    let payload = json!({
        "passed": passed,
        "checks": checks.iter().map(|(name, ok)| json!({"name": name, "pass": ok})).collect::<Vec<_>>(),
    })
    .to_string();
    if passed {
        Ok(Outcome::Ok(payload))
    } else {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
        Ok(Outcome::Failed(Failure { payload, message: format!("failed: {}", failed.join("; ")) }))
    }
}

fn envelope_line(name: &str, status: &str, payload: Option<&str>, message: Option<&str>) -> String {
    let mut line = format!("{{\"command\":{},\"status\":\"{status}\"", Value::from(name));
    if let Some(p) = payload {
        line.push_str(",\"payload\":");
        line.push_str(p);
    }
    if let Some(m) = message {
        line.push_str(",\"message\":");
        line.push_str(&Value::from(m).to_string());
    }
    line.push('}');
    line
}

fn emit(out: &mut dyn Write, envelope: bool, name: &str, result: std::result::Result<Outcome, Error>) -> std::io::Result<i32> {
    let (code, line) = match result {
        Ok(Outcome::Ok(payload)) => {
            let line = if envelope { envelope_line(name, "ok", Some(&payload), None) } else { payload };
            (EXIT_OK, line)
        }
        Ok(Outcome::Failed(f)) => {
            let line = if envelope {
                envelope_line(name, "error", Some(&f.payload), Some(&f.message))
            } else {
                f.payload
            };
            (EXIT_DOMAIN, line)
        }
        Err(e) => {
            let code = exit_code(&e);
            if !envelope {
                return Ok(code);
            }
            (code, envelope_line(name, "error", None, Some(&e.to_string())))
        }
    };
    writeln!(out, "{line}")?;
    Ok(code)
}

fn run_scan(
    lo: u64,
    hi: u64,
    opts: ScanOptions,
    summary_only: bool,
    envelope: bool,
    factorizer: &Factorizer,
    out: &mut dyn Write,
) -> std::io::Result<i32> {
    let result = scan_each(lo, hi, &opts, factorizer, |r| {
        if !summary_only {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        }
        Ok(())
    });
    let summary = match result {
        Ok(s) => s,
        Err(e) => return emit(out, envelope, "scan", Err(e)),
    };
    let payload = json!({ "summary": summary }).to_string();
    let bad = summary.verification_failures + summary.errors;
    let outcome = if bad == 0 {
        Outcome::Ok(payload)
    } else {
        Outcome::Failed(Failure {
            payload,
            message: format!("{bad} prime powers failed verification or errored"),
        })
    };
    emit(out, envelope, "scan", Ok(outcome))
}

/// Parses `argv` (including the program name) and runs the command, writing
/// JSON to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let name = cli.command.name();
    let factorizer = match &cli.cache {
        Some(path) => match FactorCache::load(path) {
            Ok(cache) => Factorizer::with_cache(cache),
            Err(e) => return emit(out, cli.envelope, name, Err(e)),
        },
        None => Factorizer::new(),
    };
    let fz = &factorizer;
    let ok = |v: Result<Value>| v.map(|v| Outcome::Ok(v.to_string()));
    let result = match &cli.command {
        Command::Factor { n } => fz.factor(*n).and_then(|f| {
            Ok(Outcome::Ok(serde_json::to_string(&FactorPayload { value: *n, factors: f.factors() })?))
        }),
        Command::Exists { q, n, k } => ok(cmd_exists(*q, *n, *k, fz)),
        Command::Sieve { q } => ok(prime_power(*q).and_then(|pp| to_value(&sieve(pp, fz)?))),
        Command::Search { q } => {
            ok(prime_power(*q).and_then(|pp| to_value(&explicit_element(pp, fz)?.certificate)))
        }
        Command::Verify { file } => cmd_verify(file, fz),
        Command::Census { q, n, k, primitive, guard } => ok(cmd_census(*q, *n, *k, *primitive, *guard)),
        Command::Classify { q, k } => ok(cmd_classify(*q, *k)),
        Command::Bounds { t, u, precision } => ok(cmd_bounds(t, u, *precision)),
        Command::Scan { lo, hi, witness, failures_only, summary_only, jobs } => {
            let opts = ScanOptions {
                witness: *witness,
                sieve_failures_only: *failures_only,
                jobs: *jobs,
            };
            return run_scan(*lo, *hi, opts, *summary_only, cli.envelope, fz, out);
        }
        Command::Selftest => selftest(fz),
    };
    if let Err(e) = &result {
        writeln!(err, "error: {e}")?;
    }
    emit(out, cli.envelope, name, result)
}
