//! Command-line front end. Every subcommand produces a [`Report`]; the
//! binary only prints it. Reports contain no timings or other run-dependent
//! data, so identical inputs give identical bytes.

use std::{collections::BTreeMap, fmt::Write as _, path::Path};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{rngs::StdRng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{
  binom::{BinomialPoly, MultiIndex},
  coeff::{certify_p_integral, mahler_profile, PadicApprox},
  error::NumaError,
  expr::Expr,
  golden,
  homalg::{smith_normal_form, FreeComplex, IntMatrix},
  nilgroup::{
    heisenberg, parse_rational, passi_degree, power, power_binomial_series, power_padic, sample_augmentation_power,
    unipotent_group, MalcevGroup, UnipotentMatrix,
  },
  numring::{check_axioms, structure_f, structure_g, structure_h, FreeNumerical, Integers, PointwiseFunctions, RingSpec},
  simplicial::{coboundary_solve, graded_cohomology, k_z_1, lens_orbits, p_cocycle, BasisMode, CochainMode, CoboundaryOutcome},
};

#[derive(Parser, Debug)]
#[command(name = "numa", version, about = "Exact computations with numerical (binomial-basis) maps")]
struct Cli {
  /// Report format.
  #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
  output:  Format,
  #[command(subcommand)]
  command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
  Json,
  Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StructKind {
  H,
  F,
  G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Basis {
  Poly,
  Binom,
}

#[derive(Subcommand, Debug)]
enum Command {
  /// Structure polynomial h(m,n), f(n) or g(m,n).
  Struct {
    #[arg(value_enum)]
    kind: StructKind,
    /// `m` for h and g; `n` for f.
    a:    u32,
    b:    Option<u32>,
  },
  /// Numerical-ring axioms (i)-(vii) on a sample set.
  Axioms {
    /// integers, pointwise:<size> or free:<generators>
    #[arg(long)]
    ring:      String,
    /// Inclusive integer range `a..b`.
    #[arg(long, allow_hyphen_values = true)]
    range:     String,
    /// Largest binomial index in the axioms.
    #[arg(long, default_value_t = 3)]
    bound:     u32,
    /// For free rings: also sample C(x_j, i) for 1 <= i <= this.
    #[arg(long, default_value_t = 2)]
    basis_max: u32,
  },
  /// Homology of a free chain complex given as JSON.
  Homology { file: String },
  /// Smith normal form of an integer matrix given as JSON rows.
  Snf { file: String },
  /// Graded numerical cohomology of K(Z,1).
  Kz1Cohomology {
    #[arg(long, default_value_t = 4)]
    nmax:         usize,
    #[arg(long, default_value_t = 6)]
    dmax:         u32,
    #[arg(long)]
    unnormalized: bool,
  },
  /// Tries to write ((x+y)^p - x^p - y^p)/p as a coboundary on K(Z,1).
  CocycleSolve {
    #[arg(long)]
    p:     u32,
    #[arg(long, value_enum)]
    basis: Basis,
    /// Ansatz degree; defaults to p+1 for poly and p for binom.
    #[arg(long)]
    dmax:  Option<u32>,
  },
  /// Orbits of (Z/n)^* under ±β² and under ±1.
  LensOrbits { n: u64 },
  /// Passi degree of a function on a nilpotent group.
  Passi {
    /// heisenberg, u<n>, abelian:<d> or a group JSON file
    #[arg(long)]
    group:   String,
    /// Polynomial JSON (inline or file) or an expression in x, y, z / x1, x2, ...
    #[arg(long = "fn")]
    func:    String,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 3)]
    radius:  usize,
    #[arg(long, default_value_t = 1)]
    seed:    u64,
  },
  /// Rational (or p-adic) power g^r in a unipotent group.
  Power {
    /// heisenberg or u<n>
    #[arg(long)]
    group: String,
    /// Comma-separated rational coordinates.
    #[arg(long, allow_hyphen_values = true)]
    g:     String,
    #[arg(long, allow_hyphen_values = true)]
    r:     String,
    /// Also check (g^r)^s = g^(rs).
    #[arg(long, allow_hyphen_values = true)]
    s:     Option<String>,
    /// Also compute g^r in Z_p mod p^N, given as `p:N`.
    #[arg(long)]
    padic: Option<String>,
  },
  /// Mahler coefficients of an integer-valued function of x.
  Mahler {
    #[arg(long)]
    p:    u64,
    #[arg(long = "fn")]
    func: String,
    #[arg(long, default_value_t = 32)]
    kmax: u32,
  },
  /// p-integrality certificate for a binomial polynomial given as JSON.
  Certify {
    #[arg(long)]
    p:       u64,
    file:    String,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed:    u64,
  },
  /// Runs every acceptance criterion.
  Golden,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
  pub command:       Vec<String>,
  pub inputs_digest: String,
  pub results:       Value,
  pub cutoffs:       BTreeMap<String, Value>,
  pub verdicts:      BTreeMap<String, bool>,
}

#[derive(Default)]
struct Outcome {
  results:  Value,
  cutoffs:  BTreeMap<String, Value>,
  verdicts: BTreeMap<String, bool>,
  /// Overall failure that is not an error (used by `golden`).
  failed:   bool,
}

enum CliError {
  Usage(String),
  Domain(NumaError),
}

impl From<NumaError> for CliError {
  fn from(e: NumaError) -> Self { CliError::Domain(e) }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError { CliError::Usage(msg.into()) }

/// Exit code plus what goes to standard output and standard error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
  pub code:   i32,
  pub stdout: String,
  pub stderr: String,
}

/// Files read during a run, hashed into the report digest.
#[derive(Default)]
struct Inputs(Vec<(String, Vec<u8>)>);

impl Inputs {
  fn read(&mut self, path: &str) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| usage(format!("{path} is not UTF-8")))?;
    self.0.push((path.to_string(), bytes));
    Ok(text)
  }
}

fn digest(argv: &[String], inputs: &Inputs) -> String {
  let mut h = Sha256::new();
  for a in argv {
    h.update(a.as_bytes());
    h.update([0]);
  }
  for (path, bytes) in &inputs.0 {
    h.update(path.as_bytes());
    h.update([0]);
    h.update(bytes);
    h.update([0]);
  }
  format!("sha256:{:x}", h.finalize())
}

fn error_kind(e: &NumaError) -> &'static str {
  match e {
    NumaError::NotNumerical(_) => "NotNumerical",
    NumaError::ArityMismatch { .. } => "ArityMismatch",
    NumaError::NotACocycle(_) => "NotACocycle",
    NumaError::NonAdditiveFaces(_) => "NonAdditiveFaces",
    NumaError::NotAGroup(_) => "NotAGroup",
    NumaError::InvalidTwisting(_) => "InvalidTwisting",
    NumaError::PrecisionExhausted { .. } => "PrecisionExhausted",
    NumaError::TruncationTooSmall { .. } => "TruncationTooSmall",
    NumaError::InconsistentData(_) => "InconsistentData",
    NumaError::NonNilpotentAction(_) => "NonNilpotentAction",
    NumaError::InvalidInput(_) => "InvalidInput",
  }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> Invocation
where
  I: IntoIterator<Item = S>,
  S: Into<String>,
{
  let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
  let cli = match Cli::try_parse_from(&argv) {
    Ok(c) => c,
    Err(e) => {
      let text = e.render().to_string();
      return if e.use_stderr() {
        Invocation { code: 2, stdout: String::new(), stderr: text }
      } else {
        Invocation { code: 0, stdout: text, stderr: String::new() }
      };
    },
  };
  let command: Vec<String> = argv.iter().skip(1).cloned().collect();
  let mut inputs = Inputs::default();
  let outcome = dispatch(&cli.command, &mut inputs);
  let digest = digest(&command, &inputs);
  match outcome {
    Ok(o) => {
      let report = Report { command, inputs_digest: digest, results: o.results, cutoffs: o.cutoffs, verdicts: o.verdicts };
      Invocation { code: i32::from(o.failed), stdout: render(&report, cli.output), stderr: String::new() }
    },
    Err(CliError::Usage(msg)) => Invocation { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n\nFor more information, try 'numa --help'.\n") },
    Err(CliError::Domain(e)) => {
      let body = json!({ "command": command, "inputs_digest": digest, "error": { "kind": error_kind(&e), "message": e.to_string() } });
      let stdout = match cli.output {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&body).expect("json")),
        Format::Text => format!("error ({}): {e}\n", error_kind(&e)),
      };
      Invocation { code: 1, stdout, stderr: format!("numa: {e}\n") }
    },
  }
}

fn render(report: &Report, format: Format) -> String {
  match format {
    Format::Json => format!("{}\n", serde_json::to_string_pretty(report).expect("reports serialize")),
    Format::Text => {
      let mut out = String::new();
      let _ = writeln!(out, "command: numa {}", report.command.join(" "));
      let _ = writeln!(out, "inputs: {}", report.inputs_digest);
      let _ = writeln!(out, "results:");
      text_value(&report.results, 1, &mut out);
      if !report.cutoffs.is_empty() {
        let _ = writeln!(out, "cutoffs:");
        for (k, v) in &report.cutoffs {
          let _ = writeln!(out, "  {k}: {}", scalar(v));
        }
      }
      if !report.verdicts.is_empty() {
        let _ = writeln!(out, "verdicts:");
        for (k, v) in &report.verdicts {
          let _ = writeln!(out, "  {k}: {}", if *v { "pass" } else { "FAIL" });
        }
      }
      out
    },
  }
}

fn is_scalar(v: &Value) -> bool {
  match v {
    Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
    Value::Object(_) => false,
    _ => true,
  }
}

fn scalar(v: &Value) -> String {
  match v {
    Value::String(s) => s.clone(),
    Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
    other => other.to_string(),
  }
}

fn text_value(v: &Value, depth: usize, out: &mut String) {
  let pad = "  ".repeat(depth);
  match v {
    Value::Object(m) => {
      for (k, x) in m {
        if is_scalar(x) {
          let _ = writeln!(out, "{pad}{k}: {}", scalar(x));
        } else {
          let _ = writeln!(out, "{pad}{k}:");
          text_value(x, depth + 1, out);
        }
      }
    },
    Value::Array(a) => {
      for x in a {
        if is_scalar(x) {
          let _ = writeln!(out, "{pad}- {}", scalar(x));
        } else {
          let _ = writeln!(out, "{pad}-");
          text_value(x, depth + 1, out);
        }
      }
    },
    other => {
      let _ = writeln!(out, "{pad}{}", scalar(other));
    },
  }
}

fn strings(v: &[BigInt]) -> Vec<String> { v.iter().map(ToString::to_string).collect() }

fn to_json<T: Serialize>(v: &T) -> Value { serde_json::to_value(v).expect("results serialize") }

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> CliResult<Outcome> {
  match cmd {
    Command::Struct { kind, a, b } => cmd_struct(*kind, *a, *b),
    Command::Axioms { ring, range, bound, basis_max } => cmd_axioms(ring, range, *bound, *basis_max),
    Command::Homology { file } => cmd_homology(&inputs.read(file)?),
    Command::Snf { file } => cmd_snf(&inputs.read(file)?),
    Command::Kz1Cohomology { nmax, dmax, unnormalized } => cmd_kz1(*nmax, *dmax, *unnormalized),
    Command::CocycleSolve { p, basis, dmax } => cmd_cocycle(*p, *basis, *dmax),
    Command::LensOrbits { n } => Ok(Outcome { results: to_json(&lens_orbits(*n)?), ..Outcome::default() }),
    Command::Passi { group, func, samples, radius, seed } => cmd_passi(group, func, *samples, *radius, *seed, inputs),
    Command::Power { group, g, r, s, padic } => cmd_power(group, g, r, s.as_deref(), padic.as_deref()),
    Command::Mahler { p, func, kmax } => cmd_mahler(*p, func, *kmax),
    Command::Certify { p, file, samples, seed } => cmd_certify(*p, &inputs.read(file)?, *samples, *seed),
    Command::Golden => cmd_golden(),
  }
}

const MAX_STRUCT_INDEX: u32 = 64;

fn cmd_struct(kind: StructKind, a: u32, b: Option<u32>) -> CliResult<Outcome> {
  if a > MAX_STRUCT_INDEX || b.is_some_and(|b| b > MAX_STRUCT_INDEX) {
    return Err(usage(format!("structure indices are limited to {MAX_STRUCT_INDEX}")));
  }
  let table = match (kind, b) {
    (StructKind::F, None) => structure_f(a),
    (StructKind::F, Some(_)) => return Err(usage("f takes a single index: numa struct f <n>")),
    (_, None) => return Err(usage("h and g take two indices: numa struct h|g <m> <n>")),
    (StructKind::H, Some(b)) => structure_h(a, b),
    (StructKind::G, Some(b)) => structure_g(a, b),
  };
  Ok(Outcome { results: to_json(&*table), ..Outcome::default() })
}

fn parse_range(s: &str) -> CliResult<(i64, i64)> {
  let bad = || usage(format!("range must look like a..b, got {s:?}"));
  let (a, b) = s.split_once("..").ok_or_else(bad)?;
  let b = b.strip_prefix('=').unwrap_or(b);
  let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
  if a > b || b - a > 200 {
    return Err(usage(format!("range {s:?} must be nonempty with at most 201 values")));
  }
  Ok((a, b))
}

fn cmd_axioms(ring: &str, range: &str, bound: u32, basis_max: u32) -> CliResult<Outcome> {
  let spec: RingSpec = ring.parse().map_err(|e: NumaError| usage(e.to_string()))?;
  let (a, b) = parse_range(range)?;
  if bound > 8 {
    return Err(usage("--bound is limited to 8"));
  }
  let values: Vec<BigInt> = (a..=b).map(BigInt::from).collect();
  let (report, samples) = match spec {
    RingSpec::Integers => (check_axioms(&Integers, &values, bound), values.len()),
    RingSpec::Pointwise(size) => {
      if size == 0 {
        return Err(usage("pointwise rings need at least one point"));
      }
      // cyclic windows of the range, one vector per start
      let samples: Vec<Vec<BigInt>> =
        (0..values.len()).map(|t| (0..size).map(|i| values[(t + i) % values.len()].clone()).collect()).collect();
      (check_axioms(&PointwiseFunctions { size }, &samples, bound), samples.len())
    },
    RingSpec::Free(k) => {
      if k == 0 || k > 3 || basis_max > 4 {
        return Err(usage("free rings are limited to 1..=3 generators and --basis-max <= 4"));
      }
      let mut samples: Vec<BinomialPoly> = values.iter().map(|c| BinomialPoly::constant(k, c.clone())).collect();
      for j in 0..k {
        for i in 1..=basis_max {
          let mut idx = MultiIndex::zero(k);
          idx.0[j] = i;
          samples.push(BinomialPoly::basis(idx));
        }
      }
      (check_axioms(&FreeNumerical { nvars: k }, &samples, bound), samples.len())
    },
  };
  let mut o = Outcome { results: to_json(&report), ..Outcome::default() };
  o.cutoffs.insert("bound".into(), json!(bound));
  o.cutoffs.insert("range".into(), json!([a, b]));
  o.cutoffs.insert("samples".into(), json!(samples));
  o.verdicts.insert("axioms_hold".into(), report.passed());
  Ok(o)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> CliResult<T> {
  serde_json::from_str(text).map_err(|e| usage(format!("bad {what} JSON: {e}")))
}

fn cmd_homology(text: &str) -> CliResult<Outcome> {
  let c: FreeComplex = parse_json(text, "complex")?;
  let mut degrees = serde_json::Map::new();
  let (lo, hi) = (c.min_degree().unwrap_or(0), c.max_degree().unwrap_or(0));
  for n in lo..=hi {
    let h = c.homology(n);
    degrees.insert(n.to_string(), json!({ "group": h.to_string(), "free_rank": h.free_rank, "torsion": strings(&h.torsion) }));
  }
  let mut o = Outcome { results: json!({ "orientation": to_json(&c.orientation()), "homology": degrees }), ..Outcome::default() };
  o.cutoffs.insert("degrees".into(), json!([lo, hi]));
  Ok(o)
}

fn cmd_snf(text: &str) -> CliResult<Outcome> {
  let a: IntMatrix = parse_json(text, "matrix")?;
  let s = smith_normal_form(&a);
  let factors = s.invariant_factors();
  let uav = s.u.mul(&a).and_then(|m| m.mul(&s.v)).map(|m| m == s.d).unwrap_or(false);
  let chain = factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
  let mut o = Outcome {
    results: json!({
      "rank": s.rank(),
      "invariant_factors": strings(&factors),
      "d": to_json(&s.d),
      "u": to_json(&s.u),
      "v": to_json(&s.v),
    }),
    ..Outcome::default()
  };
  o.verdicts.insert("uav_equals_d".into(), uav);
  o.verdicts.insert("u_unimodular".into(), s.u.is_unimodular());
  o.verdicts.insert("v_unimodular".into(), s.v.is_unimodular());
  o.verdicts.insert("divisibility_chain".into(), chain);
  Ok(o)
}

fn cmd_kz1(nmax: usize, dmax: u32, unnormalized: bool) -> CliResult<Outcome> {
  if !(1..=6).contains(&nmax) || dmax > 12 {
    return Err(usage("kz1-cohomology supports 1 <= nmax <= 6 and dmax <= 12"));
  }
  let mode = if unnormalized { CochainMode::Unnormalized } else { CochainMode::Normalized };
  let h = graded_cohomology(&k_z_1(nmax), dmax, mode)?;
  let table: Vec<Value> = h
    .entries
    .iter()
    .map(|e| {
      json!({
        "n": e.n, "d": e.d, "cochain_rank": e.rank, "group": e.group.to_string(),
        "free_rank": e.group.free_rank, "invariant_factors": strings(&e.group.torsion),
      })
    })
    .collect();
  let totals: Vec<String> = h.totals.iter().map(ToString::to_string).collect();
  let mut o = Outcome { results: json!({ "mode": to_json(&mode), "pieces": table, "totals": totals }), ..Outcome::default() };
  o.cutoffs.insert("n_max".into(), json!(nmax));
  o.cutoffs.insert("d_max".into(), json!(dmax));
  o.cutoffs.insert("degrees_reported".into(), json!(format!("0..{}", nmax - 1)));
  let z = crate::homalg::FinAbGroup::free(1);
  o.verdicts.insert("h0_is_z_in_degree_0".into(), (0..=dmax).all(|d| h.get(0, d).is_some_and(|g| *g == if d == 0 { z.clone() } else { Default::default() })));
  if nmax > 1 {
    o.verdicts.insert("h1_is_z_in_degree_1".into(), (0..=dmax).all(|d| h.get(1, d).is_some_and(|g| *g == if d == 1 { z.clone() } else { Default::default() })));
  }
  if nmax > 2 {
    o.verdicts.insert("higher_vanish".into(), h.entries.iter().filter(|e| e.n >= 2).all(|e| e.group.is_zero()));
  }
  Ok(o)
}

fn cmd_cocycle(p: u32, basis: Basis, dmax: Option<u32>) -> CliResult<Outcome> {
  if !(2..=13).contains(&p) || !crate::coeff::is_prime(u64::from(p)) {
    return Err(usage("--p must be a prime at most 13"));
  }
  let (mode, d) = match basis {
    Basis::Poly => (BasisMode::IntegerPolynomial, dmax.unwrap_or(p + 1)),
    Basis::Binom => (BasisMode::Binomial, dmax.unwrap_or(p)),
  };
  if d > 16 {
    return Err(usage("--dmax is limited to 16"));
  }
  let target = p_cocycle(p)?;
  let report = coboundary_solve(&k_z_1(3), 2, &target, mode, d)?;
  let mut o = Outcome { results: json!({ "target": to_json(&target), "report": to_json(&report) }), ..Outcome::default() };
  o.cutoffs.insert("d_max".into(), json!(d));
  o.cutoffs.insert("n_max".into(), json!(3));
  o.verdicts.insert("witness_found".into(), matches!(report.outcome, CoboundaryOutcome::Witness { .. }));
  o.verdicts.insert("verified".into(), report.verified);
  Ok(o)
}

#[derive(Deserialize)]
struct GroupJson {
  mult:       Vec<BinomialPoly>,
  inv:        Vec<BinomialPoly>,
  #[serde(with = "crate::homalg::bigint_json::vec")]
  unit:       Vec<BigInt>,
  generators: Vec<Vec<Value>>,
}

fn json_int(v: &Value) -> CliResult<BigInt> {
  match v {
    Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| usage(format!("{n} is not an integer"))),
    Value::String(s) => s.trim().parse().map_err(|_| usage(format!("{s:?} is not an integer"))),
    other => Err(usage(format!("{other} is not an integer"))),
  }
}

fn unipotent_size(name: &str) -> Option<usize> {
  match name {
    "heisenberg" => Some(3),
    _ => name.strip_prefix('u').and_then(|n| n.parse().ok()),
  }
}

fn load_group(spec: &str, inputs: &mut Inputs) -> CliResult<MalcevGroup> {
  if spec == "heisenberg" {
    return Ok(heisenberg());
  }
  if let Some(n) = unipotent_size(spec) {
    if !(2..=5).contains(&n) {
      return Err(usage("unipotent groups u<n> are supported for 2 <= n <= 5"));
    }
    return Ok(unipotent_group(n)?);
  }
  if let Some(d) = spec.strip_prefix("abelian:") {
    let d: usize = d.parse().map_err(|_| usage(format!("bad group {spec:?}")))?;
    if !(1..=4).contains(&d) {
      return Err(usage("abelian:<d> is supported for 1 <= d <= 4"));
    }
    return Ok(MalcevGroup::abelian(d));
  }
  if !Path::new(spec).is_file() {
    return Err(usage(format!("unknown group {spec:?}; expected heisenberg, u<n>, abelian:<d> or a JSON file")));
  }
  let raw: GroupJson = parse_json(&inputs.read(spec)?, "group")?;
  let generators = raw.generators.iter().map(|g| g.iter().map(json_int).collect()).collect::<CliResult<Vec<Vec<BigInt>>>>()?;
  Ok(MalcevGroup::new(raw.mult, raw.inv, raw.unit, generators)?)
}

fn variable_names(d: usize) -> Vec<String> {
  if d <= 3 {
    ["x", "y", "z"][..d].iter().map(|s| s.to_string()).collect()
  } else {
    (1..=d).map(|i| format!("x{i}")).collect()
  }
}

/// A polynomial from inline JSON, a JSON file, or an expression.
fn load_function(s: &str, nvars: usize, inputs: &mut Inputs) -> CliResult<BinomialPoly> {
  let f: BinomialPoly = if s.trim_start().starts_with('{') {
    parse_json(s, "polynomial")?
  } else if Path::new(s).is_file() {
    parse_json(&inputs.read(s)?, "polynomial")?
  } else {
    let names = variable_names(nvars);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let e = Expr::parse(s, &refs).map_err(|e| usage(e.to_string()))?;
    e.to_binomial(nvars)?
  };
  if f.nvars() != nvars {
    return Err(NumaError::ArityMismatch { expected: nvars, found: f.nvars() }.into());
  }
  Ok(f)
}

fn cmd_passi(group: &str, func: &str, samples: usize, radius: usize, seed: u64, inputs: &mut Inputs) -> CliResult<Outcome> {
  if radius > 4 || samples > 100_000 {
    return Err(usage("--radius is limited to 4 and --samples to 100000"));
  }
  let g = load_group(group, inputs)?;
  let f = load_function(func, g.dim, inputs)?;
  let (k, cert) = passi_degree(&f, &g)?;
  let mut rng = StdRng::seed_from_u64(seed);
  let at_k = sample_augmentation_power(&f, &g, k, samples, radius, &mut rng)?;
  let below = if k > 0 { Some(sample_augmentation_power(&f, &g, k - 1, samples, radius, &mut rng)?) } else { None };
  let mut o = Outcome {
    results: json!({
      "passi_degree": k,
      "certificate": to_json(&cert),
      "spanning_sample": to_json(&at_k),
      "spanning_sample_below": below.as_ref().map(to_json),
    }),
    ..Outcome::default()
  };
  o.cutoffs.insert("radius".into(), json!(radius));
  o.cutoffs.insert("samples".into(), json!(samples));
  o.cutoffs.insert("seed".into(), json!(seed));
  o.verdicts.insert("certificate_verified".into(), cert.verify(&g));
  o.verdicts.insert("vanishes_on_sampled_power".into(), at_k.nonzero == 0);
  if let Some(b) = below {
    o.verdicts.insert("nonzero_on_sampled_lower_power".into(), b.nonzero > 0);
  }
  Ok(o)
}

fn rational_strings(v: &[BigRational]) -> Vec<String> { v.iter().map(ToString::to_string).collect() }

fn cmd_power(group: &str, g: &str, r: &str, s: Option<&str>, padic: Option<&str>) -> CliResult<Outcome> {
  let n = unipotent_size(group).filter(|n| (2..=6).contains(n)).ok_or_else(|| usage("--group must be heisenberg or u<n> with 2 <= n <= 6"))?;
  let coords = g.split(',').map(|c| parse_rational(c).map_err(|e| usage(e.to_string()))).collect::<CliResult<Vec<_>>>()?;
  let r = parse_rational(r).map_err(|e| usage(e.to_string()))?;
  let gm = UnipotentMatrix::from_coordinates(n, &coords)?;
  let gr = power(&gm, &r);
  let series = power_binomial_series(&gm, &r);
  let mut results = serde_json::Map::new();
  results.insert("g".into(), json!(rational_strings(&coords)));
  results.insert("r".into(), json!(r.to_string()));
  results.insert("power".into(), json!(rational_strings(&gr.coordinates())));
  results.insert("matrix".into(), json!(gr.matrix().0.iter().map(|row| rational_strings(row)).collect::<Vec<_>>()));
  let mut o = Outcome::default();
  o.verdicts.insert("binomial_series_agrees".into(), gr == series);
  if let Some(s) = s {
    let s = parse_rational(s).map_err(|e| usage(e.to_string()))?;
    let lhs = power(&gr, &s);
    let rhs = power(&gm, &(&r * &s));
    results.insert("s".into(), json!(s.to_string()));
    results.insert("power_of_power".into(), json!(rational_strings(&lhs.coordinates())));
    o.verdicts.insert("power_law".into(), lhs == rhs);
  }
  if let Some(spec) = padic {
    let bad = || usage(format!("--padic must look like p:N, got {spec:?}"));
    let (p, prec) = spec.split_once(':').ok_or_else(bad)?;
    let (p, prec): (u64, u32) = (p.parse().map_err(|_| bad())?, prec.parse().map_err(|_| bad())?);
    crate::coeff::check_prime(p)?;
    if prec == 0 || prec > 256 {
      return Err(usage("p-adic precision must lie in 1..=256"));
    }
    let rp = PadicApprox::from_rational(p, &r, prec)?;
    let m = power_padic(&gm, &rp)?;
    let rows: Vec<Vec<String>> = m.iter().map(|row| row.iter().map(|x| x.residue.to_string()).collect()).collect();
    let precision: Vec<Vec<u32>> = m.iter().map(|row| row.iter().map(|x| x.precision).collect()).collect();
    // exact rational power reduced mod p^precision, entry by entry
    let agrees = gr.matrix().0.iter().flatten().zip(m.iter().flatten()).all(|(q, x)| {
      PadicApprox::from_rational(p, q, x.precision).map(|y| y.congruent(x)).unwrap_or(false)
    });
    results.insert("padic".into(), json!({ "p": p, "residues": rows, "precision": precision }));
    o.cutoffs.insert("padic_precision".into(), json!(prec));
    o.verdicts.insert("padic_agrees_with_rational".into(), agrees);
  }
  o.results = Value::Object(results);
  Ok(o)
}

fn cmd_mahler(p: u64, func: &str, kmax: u32) -> CliResult<Outcome> {
  if kmax > 512 {
    return Err(usage("--kmax is limited to 512"));
  }
  let e = Expr::parse(func, &["x"]).map_err(|e| usage(e.to_string()))?;
  let prof = mahler_profile(|x: &BigInt| e.eval_int(std::slice::from_ref(x)), p, kmax)?;
  let mut o = Outcome { results: to_json(&prof), ..Outcome::default() };
  o.cutoffs.insert("k_max".into(), json!(kmax));
  Ok(o)
}

fn cmd_certify(p: u64, text: &str, samples: usize, seed: u64) -> CliResult<Outcome> {
  if samples > 100_000 {
    return Err(usage("--samples is limited to 100000"));
  }
  let f: BinomialPoly = parse_json(text, "polynomial")?;
  let mut rng = StdRng::seed_from_u64(seed);
  let cert = certify_p_integral(&f, p, samples, &mut rng)?;
  let mut o = Outcome { results: to_json(&cert), ..Outcome::default() };
  o.cutoffs.insert("samples".into(), json!(samples));
  o.cutoffs.insert("seed".into(), json!(seed));
  o.cutoffs.insert("sample_height".into(), json!(1_000_000));
  o.verdicts.insert("p_integral".into(), cert.passed());
  Ok(o)
}

fn cmd_golden() -> CliResult<Outcome> {
  let results = golden::run_all();
  let verdicts = golden::verdicts(&results);
  let failed = verdicts.values().any(|v| !v);
  Ok(Outcome { results: to_json(&results), cutoffs: BTreeMap::new(), verdicts, failed })
}

#[cfg(test)]
mod tests {
  use super::*;

  fn json_of(inv: &Invocation) -> Value { serde_json::from_str(&inv.stdout).unwrap() }

  #[test]
  fn struct_h_2_2() {
    let inv = run(["numa", "struct", "h", "2", "2"]);
    assert_eq!(inv.code, 0, "{}", inv.stderr);
    let v = json_of(&inv);
    assert_eq!(v["results"]["coefficients"], json!({ "c2": 1, "c3": 6, "c4": 6 }));
    assert!(v["inputs_digest"].as_str().unwrap().starts_with("sha256:"));
  }

  #[test]
  fn usage_and_domain_exit_codes() {
    assert_eq!(run(["numa", "struct", "h", "2"]).code, 2);
    assert_eq!(run(["numa", "frobnicate"]).code, 2);
    assert_eq!(run(["numa", "mahler", "--p", "2", "--fn", "x/2"]).code, 1);
    assert_eq!(run(["numa", "lens-orbits", "1"]).code, 1);
  }

  #[test]
  fn reports_are_byte_stable() {
    let a = run(["numa", "passi", "--group", "heisenberg", "--fn", "z", "--samples", "50"]);
    let b = run(["numa", "passi", "--group", "heisenberg", "--fn", "z", "--samples", "50"]);
    assert_eq!(a, b);
    assert_eq!(json_of(&a)["results"]["passi_degree"], json!(3));
  }

  #[test]
  fn negative_range_and_power() {
    let inv = run(["numa", "axioms", "--ring", "integers", "--range", "-3..3", "--bound", "2"]);
    assert_eq!(inv.code, 0, "{}", inv.stderr);
    assert_eq!(json_of(&inv)["verdicts"]["axioms_hold"], json!(true));
    let inv = run(["numa", "power", "--group", "u3", "--g", "1,1,0", "--r", "-1/2", "--s", "4", "--padic", "3:8"]);
    assert_eq!(inv.code, 0, "{}", inv.stderr);
    let v = json_of(&inv);
    assert_eq!(v["results"]["power"], json!(["-1/2", "-1/2", "3/8"]));
    assert!(v["verdicts"].as_object().unwrap().values().all(|x| *x == json!(true)));
  }
}
