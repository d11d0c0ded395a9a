//! `stabspace` command line. [`run`] parses arguments, dispatches to the
//! core library and writes one report per invocation.
//!
//! Exit codes: 0 when the analysis completed, 1 for input or validation
//! errors, 2 when an internal consistency check or a proven bound failed.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use stabspace_core::dense::{DenseCap, DEFAULT_DENSE_CAP, DENSE_CAP_ENV};
use stabspace_core::explorer::{scan_resumable, ScanConfig, ScanKind, DEFAULT_BUDGET};
use stabspace_core::kspace::{
    build_kspace, commutation_vectors, conjecture1_bound, lemma2_check, sigma_count, sigma_lower_bound, sigma_min,
    sigma_table, theorem2_check,
};
use stabspace_core::npt::{verify_npt, DEFAULT_SAMPLES};
use stabspace_core::smax::{construct, SmaxParams};
use stabspace_core::zd::is_prime;
use stabspace_core::{
    is_entangled_wrt, is_genuinely_entangled, validate, Bipartition, Error, GeneratorSet, Stabilizer, ZdVector,
};

#[derive(Debug, Parser)]
#[command(name = "stabspace", version, about = "Entanglement analysis of qudit stabilizer subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest dense matrix dimension d^N allowed.
    #[arg(long, global = true, env = DENSE_CAP_ENV, default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Input {
    /// Generator file: a `d=<int> n=<int>` header, then one word per line.
    #[arg(long, conflicts_with = "gens")]
    file: Option<PathBuf>,
    /// Inline generators separated by `;`, e.g. "X X X; Z Z Z".
    #[arg(long, requires = "d")]
    gens: Option<String>,
    /// Local dimension for --gens.
    #[arg(long)]
    d: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check commutation, orders, independence and scalars.
    Validate(Input),
    /// Entanglement across one bipartition.
    Entangled {
        #[command(flatten)]
        input: Input,
        /// Bipartition as a bit string, site 1 leftmost, Q marked 1.
        #[arg(long, conflicts_with = "sites", required_unless_present = "sites")]
        cut: Option<String>,
        /// Sites of Q, 1-based and comma separated.
        #[arg(long, value_delimiter = ',')]
        sites: Option<Vec<usize>>,
    },
    /// Genuine entanglement over all bipartitions.
    Ge(Input),
    /// The commutation space K(S) and the criteria built on it.
    Kspace(Input),
    /// Build S_max(N, d).
    Smax {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
    /// Dense NPT verification on every cut.
    Npt {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Exhaustive scan of small stabilizers.
    Scan {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = CheckArg::Conjecture1)]
        check: CheckArg,
        /// Enumerate ordered generator tuples instead of row spaces.
        #[arg(long)]
        raw: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from --checkpoint if it exists.
        #[arg(long, requires = "checkpoint")]
        resume: bool,
    },
    /// σ(N, β) counts of bipartitions with h(u, φ) = β.
    Sigma {
        /// Entries of u, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<u32>,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        beta: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Conjecture1,
    Theorem2,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
    /// Report to emit before failing, if any.
    report: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Inconsistency(_) | Error::Violation { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string(), report: None }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into(), report: None }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    let format = cli.format;
    let (report, code) = match dispatch(&cli) {
        Ok(report) => (Some(report), 0),
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            (f.report, f.code)
        }
    };
    if let Some(mut report) = report {
        round_floats(&mut report);
        let text = match format {
            Format::Json => serde_json::to_string_pretty(&report).expect("reports are plain JSON") + "\n",
            Format::Text => render_text(&report),
        };
        if out.write_all(text.as_bytes()).is_err() {
            return 1;
        }
    }
    code
}

fn dispatch(cli: &Cli) -> Result<Value, Failure> {
    let cap = DenseCap(cli.dense_cap);
    match &cli.command {
        Command::Validate(input) => cmd_validate(input),
        Command::Entangled { input, cut, sites } => cmd_entangled(input, cut.as_deref(), sites.as_deref()),
        Command::Ge(input) => cmd_ge(input),
        Command::Kspace(input) => cmd_kspace(input),
        Command::Smax { n, d } => cmd_smax(*n, *d),
        Command::Npt { input, samples } => cmd_npt(input, *samples, cli.seed, cap),
        Command::Scan { d, n, k, check, raw, budget, limit, threads, checkpoint, resume } => {
            let config = ScanConfig {
                d: *d,
                n: *n,
                k: *k,
                canonicalize: !raw,
                limit: *limit,
                budget: *budget,
                threads: *threads,
            };
            let kind = match check {
                CheckArg::Conjecture1 => ScanKind::Conjecture1,
                CheckArg::Theorem2 => ScanKind::Theorem2,
            };
            let report = scan_resumable(kind, &config, checkpoint.as_deref(), *resume)?;
            let mut v = serde_json::to_value(&report).expect("serializable");
            tag(&mut v, "scan");
            Ok(v)
        }
        Command::Sigma { u, d, beta } => cmd_sigma(u, *d, *beta),
    }
}

fn load(input: &Input) -> Result<GeneratorSet, Failure> {
    match (&input.file, &input.gens) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            GeneratorSet::from_text(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
        (None, Some(gens)) => {
            let d = input.d.expect("clap enforces --d with --gens");
            let words: Vec<&str> = gens.split(';').map(str::trim).filter(|w| !w.is_empty()).collect();
            Ok(GeneratorSet::parse_words(d, &words)?)
        }
        (None, None) => Err(input_error("need --file or --gens")),
    }
}

fn load_stabilizer(input: &Input) -> Result<Stabilizer, Failure> {
    Ok(Stabilizer::new(load(input)?)?)
}

fn words(set: &GeneratorSet) -> Vec<String> {
    set.generators().iter().map(|g| g.to_string()).collect()
}

fn header(command: &str, set: &GeneratorSet) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("d".into(), json!(set.modulus()));
    m.insert("n".into(), json!(set.num_sites()));
    m.insert("generators".into(), json!(words(set)));
    m
}

fn tag(v: &mut Value, command: &str) {
    if let Value::Object(m) = v {
        let mut tagged = Map::new();
        tagged.insert("command".into(), json!(command));
        tagged.append(m);
        *m = tagged;
    }
}

fn cmd_validate(input: &Input) -> Result<Value, Failure> {
    let set = load(input)?;
    let report = validate(&set);
    let mut m = header("validate", &set);
    m.insert("valid".into(), json!(report.is_stabilizer()));
    m.insert("commuting".into(), json!(report.commuting));
    m.insert("ordersOk".into(), json!(report.orders_ok));
    m.insert("independent".into(), json!(report.independent));
    m.insert("scalarFree".into(), json!(report.scalar_free));
    m.insert("failures".into(), json!(report.failures.iter().map(|f| f.detail.clone()).collect::<Vec<_>>()));
    if report.is_stabilizer() && is_prime(set.modulus()) {
        let s = Stabilizer::new(set)?;
        m.insert("dimV".into(), dim_v(&s)?);
    }
    if report.is_stabilizer() {
        Ok(Value::Object(m))
    } else {
        Err(Failure { code: 1, message: report.summary(), report: Some(Value::Object(m)) })
    }
}

/// d^(N-k); a string when it does not fit a JSON-safe integer.
fn dim_v(s: &Stabilizer) -> Result<Value, Failure> {
    let dim = s.subspace_dimension()?;
    Ok(if dim < (1u128 << 53) { json!(dim as u64) } else { json!(dim.to_string()) })
}

fn cmd_entangled(input: &Input, cut: Option<&str>, sites: Option<&[usize]>) -> Result<Value, Failure> {
    let s = load_stabilizer(input)?;
    let q: Bipartition = match (cut, sites) {
        (Some(bits), _) => bits.parse()?,
        (None, Some(sites)) => Bipartition::from_sites(s.num_sites(), sites)?,
        (None, None) => return Err(input_error("need --cut or --sites")),
    };
    let verdict = is_entangled_wrt(&s, &q)?;
    let mut m = header("entangled", s.set());
    m.insert("cut".into(), json!(q.canonical().to_string()));
    m.insert("entangled".into(), json!(verdict.entangled));
    m.insert("witness".into(), json!(verdict.witness));
    Ok(Value::Object(m))
}

fn cmd_ge(input: &Input) -> Result<Value, Failure> {
    let s = load_stabilizer(input)?;
    let verdict = is_genuinely_entangled(&s)?;
    let mut m = header("ge", s.set());
    m.insert("ge".into(), json!(verdict.genuinely_entangled));
    m.insert("counterexampleCut".into(), json!(verdict.counterexample.map(|q| q.to_string())));
    Ok(Value::Object(m))
}

fn cmd_kspace(input: &Input) -> Result<Value, Failure> {
    let s = load_stabilizer(input)?;
    let ks = build_kspace(&s)?;
    let ge = is_genuinely_entangled(&s)?.genuinely_entangled;
    let (d, n) = (s.modulus(), s.num_sites());
    let mut m = header("kspace", s.set());
    let vectors: Vec<Value> = {
        let vs = commutation_vectors(&s)?;
        let k = s.len();
        let pairs = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i + 1, j + 1)));
        pairs.zip(vs).map(|((i, j), v)| json!({ "i": i, "j": j, "v": v.entries() })).collect()
    };
    m.insert("vectors".into(), Value::Array(vectors));
    m.insert("dimK".into(), json!(ks.dim()));
    m.insert("basis".into(), json!(ks.basis().rows().iter().map(|r| r.entries().to_vec()).collect::<Vec<_>>()));
    m.insert("ge".into(), json!(ge));
    let bound = conjecture1_bound(n, d)?;
    m.insert("bound".into(), json!(bound));
    m.insert("meetsBound".into(), json!(ks.dim() >= bound));
    if d == 2 {
        let t = theorem2_check(&s)?;
        if !t.iff_consistent {
            return Err(Failure {
                code: 2,
                message: format!("GE ⇔ dim K = N-1 fails on this set (GE {}, dim K {})", t.ge, t.dim_k),
                report: Some(Value::Object(m)),
            });
        }
        m.insert("theorem2".into(), json!({ "ge": t.ge, "dimK": t.dim_k, "consistent": t.iff_consistent }));
    }
    if ks.dim() + 1 == n {
        m.insert("zeroSumHyperplane".into(), json!(lemma2_check(&s)?));
    }
    Ok(Value::Object(m))
}

fn cmd_smax(n: usize, d: u32) -> Result<Value, Failure> {
    let s = construct(n, d)?;
    let params = SmaxParams::new(n, d)?;
    let ks = build_kspace(&s)?;
    let ge = is_genuinely_entangled(&s)?.genuinely_entangled;
    let mut m = header("smax", s.set());
    m.insert("k".into(), json!(params.k));
    m.insert("branch".into(), json!(params.branch));
    m.insert("l".into(), json!(params.l));
    m.insert("m".into(), json!(params.m));
    m.insert("bound".into(), json!(params.bound));
    m.insert("dimK".into(), json!(ks.dim()));
    m.insert("ge".into(), json!(ge));
    m.insert("dimV".into(), dim_v(&s)?);
    if !ge || ks.dim() != params.bound {
        return Err(Failure {
            code: 2,
            message: format!("S_max({n},{d}) has GE {ge}, dim K {} (want {})", ks.dim(), params.bound),
            report: Some(Value::Object(m)),
        });
    }
    Ok(Value::Object(m))
}

fn cmd_npt(input: &Input, samples: usize, seed: u64, cap: DenseCap) -> Result<Value, Failure> {
    let s = load_stabilizer(input)?;
    let report = verify_npt(&s, samples, seed, cap)?;
    let mut v = serde_json::to_value(&report).expect("serializable");
    tag(&mut v, "npt");
    if let Value::Object(m) = &mut v {
        m.insert("generators".into(), json!(words(s.set())));
    }
    if report.consistent {
        Ok(v)
    } else {
        let bad: Vec<&str> = report
            .cuts
            .iter()
            .filter(|c| !matches!(c.verdict, stabspace_core::npt::CutOutcome::Npt | stabspace_core::npt::CutOutcome::PptExample))
            .map(|c| c.mask.as_str())
            .collect();
        Err(Failure { code: 2, message: format!("NPT check failed on cuts {}", bad.join(", ")), report: Some(v) })
    }
}

fn cmd_sigma(u: &[u32], d: u32, beta: Option<u32>) -> Result<Value, Failure> {
    let v = ZdVector::new(d, u.iter().copied())?;
    let table = sigma_table(&v)?;
    let min = sigma_min(&v)?;
    let bound = sigma_lower_bound(v.len(), d);
    let mut m = Map::new();
    m.insert("command".into(), json!("sigma"));
    m.insert("d".into(), json!(d));
    m.insert("n".into(), json!(v.len()));
    m.insert("u".into(), json!(v.entries()));
    m.insert("table".into(), json!(table));
    m.insert("min".into(), json!(min));
    m.insert("lowerBound".into(), json!(bound));
    m.insert("holds".into(), json!(min >= bound));
    if let Some(b) = beta {
        m.insert("beta".into(), json!(b % d));
        m.insert("count".into(), json!(sigma_count(&v, b)?));
    }
    if min < bound {
        return Err(Failure { code: 2, message: format!("σ_min = {min} below {bound}"), report: Some(Value::Object(m)) });
    }
    Ok(Value::Object(m))
}

/// 12 significant digits.
fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round12).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Indented `key: value` lines. Generator lists of set-valued reports are
/// printed in the input file format so they can be fed back in.
fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = v {
        let mut lead = "";
        if let (Some(d), Some(n), Some(Value::Array(gens))) = (m.get("d"), m.get("n"), m.get("generators")) {
            out.push_str(&format!("d={d} n={n}\n"));
            for g in gens {
                out.push_str(&format!("{}\n", g.as_str().unwrap_or_default()));
            }
            // the rest becomes comments to the file parser
            lead = "# ";
        }
        for (k, val) in m {
            if k == "generators" {
                continue;
            }
            render_entry(&mut out, lead, k, val, 0);
        }
    }
    out
}

fn render_entry(out: &mut String, lead: &str, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{lead}{pad}{key}: {s}\n"));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
            let joined: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push_str(&format!("{lead}{pad}{key}: [{}]\n", joined.join(", ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{lead}{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                render_entry(out, lead, &format!("- {}", i + 1), item, depth + 1);
            }
        }
        Value::Object(m) if m.is_empty() => out.push_str(&format!("{lead}{pad}{key}: {{}}\n")),
        Value::Object(m) => {
            out.push_str(&format!("{lead}{pad}{key}:\n"));
            for (k, val) in m {
                render_entry(out, lead, k, val, depth + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}
