//! `cylcert` command line: every command reads JSON, prints one JSON run
//! report and exits with
//!
//! * 0: success or pass
//! * 1: mathematical failure (singular, verification failed, refuted, vanishing locus)
//! * 2: unreadable or invalid input
//! * 3: a capacity cap was hit before a verdict

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::multipoly::vars;
use crate::arith::text::parse_poly;
use crate::arith::{Rational, UniPoly};
use crate::batch::{random_specs, CorpusShape};
use crate::classify::{build_eta, scaling_equivalent, verify_ring_map};
use crate::cylinder::{
    build_cylinder_certificate, build_family_certificate, on_vanishing_locus, specialize_family_at,
    verify_cylinder_certificate, verify_family_certificate, CertificateFile, FamilyCertificateFile, PointValue, VerifyReport,
};
use crate::error::Error;
use crate::groebner::DEFAULT_PAIR_CAP;
use crate::lnd::{check_locally_nilpotent, check_well_defined, DerivationFile, NilpotencyOutcome, DEFAULT_NILPOTENCY_CAP};
use crate::variety::{build_defining, check_smooth, SmoothnessVerdict, SpecFile, VarietySpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cylcert", version, about = "Exact certificates for the varieties x^n y + z^q + t^r + x0 p(x) = 0")]
struct Cli {
    /// Maximum number of critical pairs Buchberger may treat.
    #[arg(long, global = true, default_value_t = DEFAULT_PAIR_CAP)]
    pair_cap: usize,
    /// Maximum number of derivation applications per generator.
    #[arg(long, global = true, default_value_t = DEFAULT_NILPOTENCY_CAP)]
    nilpotency_cap: usize,
    /// Write the run report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for corpus generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print per-check wall-clock timings to standard error.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a spec and print its defining polynomial.
    Build { spec: PathBuf },
    /// Jacobian smoothness check.
    Smooth { spec: PathBuf },
    /// Emit or verify a cylinder certificate.
    Cylinder(CylinderArgs),
    /// Generic family certificate, optionally specialized.
    Family(FamilyArgs),
    /// Scaling equivalence of two specs sharing (m, n, q, r).
    Classify { spec1: PathBuf, spec2: PathBuf },
    /// Well-definedness and local nilpotency of a derivation.
    Lnd { spec: PathBuf, derivation: PathBuf },
    /// Random valid specs drawn from --seed.
    Corpus {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        max_m: usize,
        #[arg(long, default_value_t = 4)]
        max_n: u32,
        #[arg(long, default_value_t = 2)]
        max_deg: usize,
    },
}

#[derive(Args, Debug)]
struct CylinderArgs {
    spec: PathBuf,
    /// Build a certificate and write it to this file.
    #[arg(long, required_unless_present = "verify", conflicts_with = "verify")]
    emit: Option<PathBuf>,
    /// Replay the certificate in this file against SPEC.
    #[arg(long)]
    verify: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    r: u32,
    /// Values for a2, ..., a_{n-2}, either positional (`0`, `1/3`) or named (`a2=1/3`).
    /// A value `root(<polynomial in that parameter>)` stands for a root of the polynomial.
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    specialize: Option<Vec<String>>,
}

/// Everything a command reports; serialized with sorted keys.
struct RunReport {
    command: &'static str,
    inputs: Vec<(String, String)>,
    verdict: &'static str,
    details: Value,
    result: Value,
}

impl RunReport {
    fn to_json(&self) -> String {
        let inputs: Vec<Value> = self.inputs.iter().map(|(p, d)| json!({ "path": p, "sha256": d })).collect();
        let v = json!({
            "command": self.command,
            "inputs": inputs,
            "verdict": self.verdict,
            "details": self.details,
            "result": self.result,
        });
        serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
    }
}

/// Failure before a verdict: exit code plus a message naming the clause or cause.
struct Abort {
    code: i32,
    details: Value,
}

impl From<Error> for Abort {
    fn from(e: Error) -> Abort {
        let code = match e {
            Error::Capacity(_) => EXIT_CAPACITY,
            Error::Construction(_) => EXIT_FAIL,
            _ => EXIT_INPUT,
        };
        let clause = match &e {
            Error::Validation { clause, .. } => json!(clause),
            _ => Value::Null,
        };
        Abort { code, details: json!({ "error": e.to_string(), "clause": clause }) }
    }
}

fn input_error(msg: String) -> Abort {
    Abort { code: EXIT_INPUT, details: json!({ "error": msg, "clause": Value::Null }) }
}

struct Ctx {
    inputs: Vec<(String, String)>,
    timings: bool,
    clock: Instant,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String, Abort> {
        let bytes = std::fs::read(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push((path.display().to_string(), hex::encode(Sha256::digest(&bytes))));
        String::from_utf8(bytes).map_err(|_| input_error(format!("{} is not UTF-8", path.display())))
    }

    fn spec(&mut self, path: &Path) -> Result<VarietySpec, Abort> {
        let text = self.read(path)?;
        Ok(SpecFile::parse(&text)?.to_spec()?)
    }

    fn lap(&mut self, label: &str) {
        if self.timings {
            eprintln!("{label}: {:.3} ms", self.clock.elapsed().as_secs_f64() * 1e3);
            self.clock = Instant::now();
        }
    }
}

fn checks_json(rep: &VerifyReport) -> Value {
    let checks: Vec<Value> = rep.checks.iter().map(|(n, ok)| json!({ "check": n, "passed": ok })).collect();
    json!({ "checks": checks, "first_failure": rep.first_failure() })
}

type Outcome = Result<(i32, Value, Value), Abort>;

fn verdict_of(code: i32) -> &'static str {
    match code {
        EXIT_PASS => "pass",
        EXIT_FAIL => "fail",
        EXIT_CAPACITY => "inconclusive",
        _ => "error",
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let mut ctx = Ctx { inputs: Vec::new(), timings: cli.timings, clock: Instant::now() };
    let (name, outcome) = run(&cli, &mut ctx);
    let (code, details, result) = match outcome {
        Ok(t) => t,
        Err(a) => {
            eprintln!("cylcert {name}: {}", a.details["error"].as_str().unwrap_or("failed"));
            (a.code, a.details, Value::Null)
        }
    };
    let report = RunReport { command: name, inputs: ctx.inputs, verdict: verdict_of(code), details, result };
    let text = report.to_json();
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{text}"),
    }
    code
}

fn run(cli: &Cli, ctx: &mut Ctx) -> (&'static str, Outcome) {
    match &cli.command {
        Command::Build { spec } => ("build", cmd_build(ctx, spec)),
        Command::Smooth { spec } => ("smooth", cmd_smooth(ctx, spec, cli.pair_cap)),
        Command::Cylinder(a) => ("cylinder", cmd_cylinder(ctx, a)),
        Command::Family(a) => ("family", cmd_family(ctx, a)),
        Command::Classify { spec1, spec2 } => ("classify", cmd_classify(ctx, spec1, spec2)),
        Command::Lnd { spec, derivation } => ("lnd", cmd_lnd(ctx, spec, derivation, cli.nilpotency_cap)),
        Command::Corpus { count, max_m, max_n, max_deg } => {
            ("corpus", cmd_corpus(cli.seed, *count, CorpusShape { max_m: *max_m, max_n: *max_n, max_deg: *max_deg }))
        }
    }
}

fn cmd_build(ctx: &mut Ctx, path: &Path) -> Outcome {
    let spec = ctx.spec(path)?;
    let f = build_defining(&spec)?;
    ctx.lap("build");
    let vars: Vec<&str> = f.value.vars().iter().map(|s| s.as_str()).collect();
    Ok((EXIT_PASS, json!({ "validation": "all clauses hold" }), json!({ "F": f.value.to_string(), "variables": vars })))
}

fn cmd_smooth(ctx: &mut Ctx, path: &Path, pair_cap: usize) -> Outcome {
    let spec = ctx.spec(path)?;
    let rep = check_smooth(&spec, pair_cap)?;
    ctx.lap("smooth");
    let code = match rep.verdict {
        SmoothnessVerdict::Smooth => EXIT_PASS,
        SmoothnessVerdict::Singular => EXIT_FAIL,
        SmoothnessVerdict::UndecidedCapacity => EXIT_CAPACITY,
    };
    Ok((code, json!({ "pair_cap": pair_cap }), rep.to_json()))
}

fn cmd_cylinder(ctx: &mut Ctx, a: &CylinderArgs) -> Outcome {
    let spec = ctx.spec(&a.spec)?;
    if let Some(out) = &a.emit {
        let cert = build_cylinder_certificate(&spec)?;
        ctx.lap("construct");
        let rep = verify_cylinder_certificate(&spec, &cert);
        ctx.lap("verify");
        let file = CertificateFile::from_certificate(&cert);
        std::fs::write(out, file.to_json() + "\n").map_err(|e| input_error(format!("cannot write {}: {e}", out.display())))?;
        let code = if rep.passed() { EXIT_PASS } else { EXIT_FAIL };
        return Ok((code, checks_json(&rep), json!({ "certificate": out.display().to_string() })));
    }
    let path = a.verify.as_ref().expect("clap enforces one mode");
    let text = ctx.read(path)?;
    let cert = CertificateFile::parse(&text)?.to_certificate()?;
    let rep = verify_cylinder_certificate(&spec, &cert);
    ctx.lap("verify");
    let code = if rep.passed() { EXIT_PASS } else { EXIT_FAIL };
    Ok((code, checks_json(&rep), json!({ "passed": rep.passed() })))
}

fn parse_point_value(text: &str, param: &str) -> Result<PointValue, Abort> {
    let text = text.trim();
    let Some(body) = text.strip_prefix("root(").and_then(|t| t.strip_suffix(')')) else {
        return Ok(PointValue::Rational(text.parse()?));
    };
    let pv = vars(&[param]);
    let poly = parse_poly(body, &pv)?;
    let mut coeffs = vec![Rational::zero(); poly.degree_in(0) as usize + 1];
    for (mono, c) in poly.terms() {
        coeffs[mono.0[0] as usize] = c.clone();
    }
    Ok(PointValue::Root(UniPoly::new(coeffs)))
}

fn parse_values(raw: &[String], params: &[String]) -> Result<Vec<PointValue>, Abort> {
    let mut out: Vec<Option<PointValue>> = vec![None; params.len()];
    for (i, item) in raw.iter().enumerate() {
        let (slot, text) = match item.split_once('=') {
            Some((name, v)) => {
                let slot = params.iter().position(|p| p == name.trim()).ok_or_else(|| input_error(format!("unknown parameter {name}")))?;
                (slot, v)
            }
            None => (i, item.as_str()),
        };
        if slot >= params.len() {
            return Err(input_error(format!("{} values given for parameters {params:?}", raw.len())));
        }
        out[slot] = Some(parse_point_value(text, &params[slot])?);
    }
    out.into_iter()
        .zip(params)
        .map(|(v, p)| v.ok_or_else(|| input_error(format!("no value for {p}"))))
        .collect()
}

fn cmd_family(ctx: &mut Ctx, a: &FamilyArgs) -> Outcome {
    let fam = build_family_certificate(a.n, a.m, a.q, a.r)?;
    ctx.lap("construct");
    let rep = verify_family_certificate(&fam);
    ctx.lap("verify family");
    let file = FamilyCertificateFile::from_certificate(&fam);
    let Some(raw) = &a.specialize else {
        let code = if rep.passed() { EXIT_PASS } else { EXIT_FAIL };
        return Ok((code, checks_json(&rep), serde_json::to_value(&file).expect("serializes")));
    };
    let point = parse_values(raw, &fam.parameters)?;
    let shown: Vec<String> = point
        .iter()
        .zip(&fam.parameters)
        .map(|(v, name)| match v {
            PointValue::Rational(c) => c.to_string(),
            PointValue::Root(m) => format!("root of {}", m.substitute_product(&vars(&[name]), 1)),
        })
        .collect();
    if on_vanishing_locus(&fam, &point)? {
        let locus = json!({ "resultant": fam.resultant.to_string(), "point": shown });
        return Ok((EXIT_FAIL, json!({ "error": "point lies on the vanishing locus of the resultant", "vanishing_locus": locus }), Value::Null));
    }
    let cert = specialize_family_at(&fam, &point)?;
    ctx.lap("specialize");
    let spec = cert.spec.clone();
    let prep = verify_cylinder_certificate(&spec, &cert);
    ctx.lap("verify specialization");
    let code = if rep.passed() && prep.passed() { EXIT_PASS } else { EXIT_FAIL };
    let values: Vec<Rational> = point.iter().map(|v| match v {
        PointValue::Rational(c) => c.clone(),
        PointValue::Root(m) => -(m.coeff(0) / m.coeff(1)),
    }).collect();
    let at = fam.resultant.eval(&values);
    let details = json!({ "family": checks_json(&rep), "specialization": checks_json(&prep), "resultant_value": at.to_string() });
    Ok((code, details, serde_json::to_value(CertificateFile::from_certificate(&cert)).expect("serializes")))
}

fn cmd_classify(ctx: &mut Ctx, p1: &Path, p2: &Path) -> Outcome {
    let s1 = ctx.spec(p1)?;
    let s2 = ctx.spec(p2)?;
    s1.validate()?;
    s2.validate()?;
    if (s1.m, &s1.n, s1.q, s1.r) != (s2.m, &s2.n, s2.q, s2.r) {
        return Err(input_error("specs must share (m, n, q, r)".into()));
    }
    let Some(w) = scaling_equivalent(&s1.p, &s2.p, s1.n[0])? else {
        ctx.lap("classify");
        return Ok((EXIT_PASS, json!({}), json!({ "equivalent": false })));
    };
    let mut result = json!({ "equivalent": true, "mu": w.mu.to_string(), "lambda": w.lambda.to_string() });
    let mut details = json!({});
    if s1.m >= 1 {
        let eta = build_eta(&s1, &w)?;
        let rep = verify_ring_map(&s1, &s2, &eta);
        result["eta"] = eta.to_json();
        details = json!({ "eta_verified": rep.passed, "unit": rep.unit.map(|u| u.to_string()), "failure": rep.failure });
        if !rep.passed {
            return Ok((EXIT_FAIL, details, result));
        }
    }
    ctx.lap("classify");
    Ok((EXIT_PASS, details, result))
}

fn cmd_lnd(ctx: &mut Ctx, spec_path: &Path, der_path: &Path, cap: usize) -> Outcome {
    let spec = ctx.spec(spec_path)?;
    spec.validate()?;
    let text = ctx.read(der_path)?;
    let d = DerivationFile::parse(&text)?.to_derivation(spec.m)?;
    let wd = check_well_defined(&spec, &d)?;
    ctx.lap("well-definedness");
    let wd_json = json!({
        "passed": wd.passed,
        "image_of_F": wd.image_of_f.to_string(),
        "cofactor": wd.cofactor.as_ref().map(|c| c.to_string()),
    });
    if !wd.passed {
        return Ok((EXIT_FAIL, json!({ "first_failure": "well-definedness" }), json!({ "well_defined": wd_json })));
    }
    let nil = check_locally_nilpotent(&spec, &d, cap)?;
    ctx.lap("nilpotency");
    let code = match nil {
        NilpotencyOutcome::Nilpotent(_) => EXIT_PASS,
        NilpotencyOutcome::Refuted { .. } => EXIT_FAIL,
        NilpotencyOutcome::Inconclusive { .. } => EXIT_CAPACITY,
    };
    Ok((code, json!({ "nilpotency_cap": cap }), json!({ "well_defined": wd_json, "nilpotency": nil.to_json() })))
}

fn cmd_corpus(seed: u64, count: usize, shape: CorpusShape) -> Outcome {
    if shape.max_n < 2 {
        return Err(input_error("--max-n must be at least 2".into()));
    }
    let specs: Vec<Value> =
        random_specs(seed, count, shape).iter().map(|s| serde_json::to_value(SpecFile::from_spec(s)).expect("serializes")).collect();
    Ok((EXIT_PASS, json!({ "seed": seed, "count": count }), Value::Array(specs)))
}
