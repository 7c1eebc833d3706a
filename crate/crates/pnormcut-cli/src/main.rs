//! Command-line front end for the max-cut ↔ matrix p-norm pipeline.
//!
//! Subcommands: `build` (graph → reduction matrix file), `solve` (norm of a
//! matrix or graph), `maxcut` (end-to-end decode, oracle or pipeline),
//! `verify` (property suites), `epsilons` (hardness accuracy schedules).
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/parse error.
//! With identical inputs and seed the results record is byte-identical;
//! only the `timings` fields vary run to run.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use pnormcut::graph::maxcut_bruteforce_with_limit;
use pnormcut::norms::{
    infinity_p_norm_exact_with_limit, p_norm_ascent, p_norm_sign_search_with_limit,
};
use pnormcut::reduction::{
    build_z, build_zdoublestar, build_zstar, build_ztilde, pad_square, required_epsilon_inftyp,
    required_epsilon_pnorm, solve_maxcut_via_pnorm_with_limit, MatrixRepr, Provenance,
    ReductionInstance, DEFAULT_ROW_LIMIT,
};
use pnormcut::scalar::PExponent;
use pnormcut::verify::run_suite;
use pnormcut::{
    parse_graph, AscentConfig, DenseMatrix, Float, Graph, Integer, NormEstimate, Pow, Rational,
    DEFAULT_ENUM_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "pnormcut",
    version,
    about = "Encode max-cut instances as matrix p-norm problems and decode them back"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a reduction matrix from a graph file and write it with a
    /// metadata sidecar
    Build(BuildArgs),
    /// Compute a norm of a matrix (or of a graph's incidence matrix)
    Solve(SolveArgs),
    /// Compute the maximum cut of a graph, by brute force or through the
    /// p-norm pipeline
    Maxcut(MaxcutArgs),
    /// Run seeded property suites; exits 1 if any property fails
    Verify(VerifyArgs),
    /// Print the accuracy schedules below which norm approximation
    /// becomes as hard as max-cut
    Epsilons(EpsilonsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    Ztilde,
    Z,
    Zstar,
    Zdoublestar,
    Padded,
}

#[derive(Args)]
struct BuildArgs {
    /// Graph file ("n m" header, then one "u v" edge per line, 1-based)
    graph_file: PathBuf,
    /// Which reduction matrix to build
    #[arg(long, value_enum, default_value = "z")]
    construction: Construction,
    /// Norm exponent p > 2, as a decimal or fraction (e.g. 3, 5/2, 2.5)
    #[arg(long, default_value = "3")]
    p: PExponent,
    /// Gadget weight α ≥ 1 (z only); defaults to 64pn⁸/(p−2)
    #[arg(long, value_parser = parse_rational_arg)]
    alpha: Option<Rational>,
    /// Gadget repetition count (zdoublestar only); defaults to ⌈α^p⌉
    #[arg(long)]
    k: Option<u64>,
    /// Output matrix file; defaults to <graph stem>.<construction>.mat
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Serialize every entry as num/den instead of decimals where possible
    #[arg(long)]
    rational: bool,
    /// Emit the run report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    /// Exact mixed (∞,p) norm by hypercube enumeration
    InftypExact,
    /// p→p norm lower bound by multistart nonlinear power iteration
    PnormAscent,
    /// p→p norm lower bound over sign vectors
    PnormSignsearch,
}

#[derive(Args)]
struct SolveArgs {
    /// Matrix file ("rows cols" header) or graph file; graphs are replaced
    /// by their edge incidence matrix
    input_file: PathBuf,
    #[arg(long, value_enum)]
    mode: SolveMode,
    /// Norm exponent p ≥ 1
    #[arg(long, default_value = "3")]
    p: PExponent,
    /// Working precision in bits for norm values
    #[arg(long, default_value_t = 96)]
    bits: u32,
    /// Ascent restarts
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    /// Ascent stall tolerance
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Random seed for ascent restarts
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Max columns for hypercube enumeration
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    limit_enum: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MaxcutMethod {
    Oracle,
    Pnorm,
}

#[derive(Args)]
struct MaxcutArgs {
    graph_file: PathBuf,
    #[arg(long, value_enum, default_value = "pnorm")]
    method: MaxcutMethod,
    /// Norm exponent (pnorm method); p in (1,2) is solved through the
    /// transposed instance at the conjugate exponent
    #[arg(long, default_value = "3")]
    p: PExponent,
    /// Gadget weight α ≥ 1; defaults to 64pn⁸/(p−2)
    #[arg(long, value_parser = parse_rational_arg)]
    alpha: Option<Rational>,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    limit_enum: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: prop1, lemma4, lemma5, lemma6, prop2, prop6, prop7,
    /// prop8, duality, replication, padding, or all
    #[arg(default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated graph/matrix sizes where the suite has a size notion
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EpsilonsArgs {
    /// Norm exponent p ≥ 1
    #[arg(long)]
    p: PExponent,
    /// Graph size for the p-norm schedule (requires p > 2)
    #[arg(long)]
    n: Option<usize>,
    /// Slack δ > 0 in the mixed-norm schedule
    #[arg(long, value_parser = parse_rational_arg, default_value = "1")]
    delta: Rational,
    /// Evaluation precision in bits
    #[arg(long, default_value_t = 128)]
    bits: u32,
    #[arg(long)]
    json: bool,
}

/// Accepts "10", "5/2", or "2.5" (exact decimal).
fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let sign = if whole.starts_with('-') { -1 } else { 1 };
        let whole: Integer = whole
            .parse()
            .map_err(|e| format!("bad rational '{s}': {e}"))?;
        let digits = frac.len() as u32;
        let num: Integer = frac
            .parse()
            .map_err(|e| format!("bad rational '{s}': {e}"))?;
        let den = Integer::from(10u32).pow(digits);
        return Ok(Rational::from(whole) + Rational::from((num, den)) * sign);
    }
    Err(format!("'{s}' is not an integer, fraction, or decimal"))
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_sha256: Option<String>,
    record: T,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

fn read_input(path: &Path) -> Result<(String, String)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let digest = sha256_hex(text.as_bytes());
    Ok((text, digest))
}

fn emit<T: Serialize>(json: bool, report: &Report<T>, text: impl FnOnce()) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(report)?);
    } else {
        text();
    }
    Ok(())
}

fn float_str(f: &Float) -> String {
    f.to_string()
}

#[derive(Serialize)]
struct BuildRecord {
    provenance: String,
    n: usize,
    edges: usize,
    p: String,
    alpha: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<String>,
    bits: u32,
    rows: usize,
    cols: usize,
    matrix_file: String,
    sidecar_file: String,
    timings: TimingsMs,
}

#[derive(Serialize)]
struct TimingsMs {
    total_ms: f64,
}

fn cmd_build(args: &BuildArgs) -> Result<()> {
    let t0 = Instant::now();
    let (text, digest) = read_input(&args.graph_file)?;
    let g = parse_graph(&text)?;
    if args.alpha.is_some() && args.construction != Construction::Z {
        bail!("--alpha only applies to the z construction");
    }
    if args.k.is_some() && args.construction != Construction::Zdoublestar {
        bail!("--k only applies to the zdoublestar construction");
    }
    let (inst, dense, k): (ReductionInstance, DenseMatrix, Option<Integer>) =
        match args.construction {
            Construction::Ztilde => {
                let inst = build_ztilde(&g, &args.p)?;
                let m = inst.dense()?.clone();
                (inst, m, None)
            }
            Construction::Z => {
                let inst = build_z(&g, &args.p, args.alpha.clone())?;
                let m = inst.dense()?.clone();
                (inst, m, None)
            }
            Construction::Zstar => {
                let inst = build_zstar(&g, &args.p)?;
                let m = inst.dense()?.clone();
                (inst, m, None)
            }
            Construction::Zdoublestar => {
                let inst = build_zdoublestar(&g, &args.p, args.k.map(Integer::from))?;
                let MatrixRepr::Blocks(spec) = &inst.matrix else {
                    bail!("zdoublestar must produce a block representation");
                };
                let m = spec.materialize(DEFAULT_ROW_LIMIT).with_context(|| {
                    format!(
                        "the default repetition count is astronomically large; \
                         pass --k to materialize at most {DEFAULT_ROW_LIMIT} rows"
                    )
                })?;
                let k = spec.blocks[0].reps.clone();
                (inst, m, Some(k))
            }
            Construction::Padded => {
                let inst = build_z(&g, &args.p, None)?;
                let m = pad_square(inst.dense()?);
                let padded = ReductionInstance {
                    matrix: MatrixRepr::Dense(m.clone()),
                    provenance: Provenance::Padded,
                    ..inst
                };
                (padded, m, None)
            }
        };

    let out = args.out.clone().unwrap_or_else(|| {
        let stem = args
            .graph_file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "graph".into());
        PathBuf::from(format!("{stem}.{}.mat", inst.provenance))
    });
    fs::write(&out, dense.serialize(args.rational))
        .with_context(|| format!("cannot write {}", out.display()))?;

    let record = BuildRecord {
        provenance: inst.provenance.to_string(),
        n: g.n(),
        edges: g.m(),
        p: args.p.to_string(),
        alpha: inst.alpha.to_string(),
        k: k.map(|k| k.to_string()),
        bits: inst.bits,
        rows: dense.rows(),
        cols: dense.cols(),
        matrix_file: out.display().to_string(),
        sidecar_file: format!("{}.meta.json", out.display()),
        timings: TimingsMs {
            total_ms: t0.elapsed().as_secs_f64() * 1e3,
        },
    };
    let sidecar = serde_json::json!({
        "provenance": record.provenance,
        "n": record.n,
        "edges": record.edges,
        "p": record.p,
        "alpha": record.alpha,
        "k": record.k,
        "bits": record.bits,
        "rows": record.rows,
        "cols": record.cols,
        "graph_sha256": digest,
    });
    fs::write(
        &record.sidecar_file,
        serde_json::to_string_pretty(&sidecar)?,
    )?;

    let report = Report {
        command: "build".into(),
        input_sha256: Some(digest),
        record,
    };
    emit(args.json, &report, || {
        let r = &report.record;
        println!(
            "built {} matrix: {}×{} (n = {}, {} edges, p = {}, alpha = {}, decode floor {} bits)",
            r.provenance, r.rows, r.cols, r.n, r.edges, r.p, r.alpha, r.bits
        );
        println!("matrix  → {}", r.matrix_file);
        println!("sidecar → {}", r.sidecar_file);
    })
}

#[derive(Serialize)]
struct SolveRecord {
    input_kind: String,
    rows: usize,
    cols: usize,
    p: String,
    mode: String,
    value: String,
    certified: bool,
    witness: Vec<f64>,
    timings: TimingsMs,
}

fn load_matrix_or_graph(text: &str) -> Result<(DenseMatrix, String)> {
    match parse_graph(text) {
        Ok(g) => Ok((pnormcut::incidence_matrix(&g), "graph".into())),
        Err(graph_err) => match DenseMatrix::parse(text) {
            Ok(m) => Ok((m, "matrix".into())),
            Err(matrix_err) => Err(anyhow!(
                "input parses as neither graph ({graph_err}) nor matrix ({matrix_err})"
            )),
        },
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let t0 = Instant::now();
    let (text, digest) = read_input(&args.input_file)?;
    let (m, input_kind) = load_matrix_or_graph(&text)?;
    let mode_name = match args.mode {
        SolveMode::InftypExact => "inftyp-exact",
        SolveMode::PnormAscent => "pnorm-ascent",
        SolveMode::PnormSignsearch => "pnorm-signsearch",
    };
    let est: NormEstimate = match args.mode {
        SolveMode::InftypExact => {
            infinity_p_norm_exact_with_limit(&m, &args.p, args.bits, args.limit_enum)?
        }
        SolveMode::PnormSignsearch => {
            p_norm_sign_search_with_limit(&m, &args.p, args.bits, args.limit_enum)?
        }
        SolveMode::PnormAscent => {
            let cfg = AscentConfig {
                restarts: args.restarts,
                tol: args.tol,
                seed: args.seed,
                ..AscentConfig::default()
            };
            p_norm_ascent(&m, &args.p, &cfg)?
        }
    };
    let record = SolveRecord {
        input_kind,
        rows: m.rows(),
        cols: m.cols(),
        p: args.p.to_string(),
        mode: mode_name.into(),
        value: float_str(&est.value),
        certified: est.certified,
        witness: est.witness.iter().map(|v| v.to_f64()).collect(),
        timings: TimingsMs {
            total_ms: t0.elapsed().as_secs_f64() * 1e3,
        },
    };
    let report = Report {
        command: "solve".into(),
        input_sha256: Some(digest),
        record,
    };
    emit(args.json, &report, || {
        let r = &report.record;
        println!(
            "{} of {}×{} {} at p = {}: {}",
            r.mode, r.rows, r.cols, r.input_kind, r.p, r.value
        );
        println!(
            "certified lower bound: {}; witness: {:?}",
            r.certified, r.witness
        );
    })
}

#[derive(Serialize)]
struct MaxcutRecord {
    n: usize,
    p: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    solved_p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    maxcut_estimate: Option<String>,
    maxcut_rounded: i64,
    witness: Vec<i8>,
    method: String,
    timings: PipelineTimingsMs,
}

#[derive(Serialize)]
struct PipelineTimingsMs {
    build_ms: f64,
    solve_ms: f64,
    decode_ms: f64,
}

fn cmd_maxcut(args: &MaxcutArgs) -> Result<()> {
    let (text, digest) = read_input(&args.graph_file)?;
    let g: Graph = parse_graph(&text)?;
    let record = match args.method {
        MaxcutMethod::Oracle => {
            let t0 = Instant::now();
            let cut = maxcut_bruteforce_with_limit(&g, args.limit_enum)?;
            MaxcutRecord {
                n: g.n(),
                p: args.p.to_string(),
                solved_p: None,
                alpha: None,
                bits: None,
                f: None,
                maxcut_estimate: None,
                maxcut_rounded: cut.value as i64,
                witness: cut.witness.as_slice().to_vec(),
                method: "oracle".into(),
                timings: PipelineTimingsMs {
                    build_ms: 0.0,
                    solve_ms: t0.elapsed().as_secs_f64() * 1e3,
                    decode_ms: 0.0,
                },
            }
        }
        MaxcutMethod::Pnorm => {
            // p in (1,2) runs on the transposed instance at the conjugate
            // exponent: ‖Z‖_p = ‖Zᵀ‖_{p'} with p' > 2
            let (p_eff, solved_p) = if args.p.is_one() {
                bail!("the pipeline needs p > 1 (p = 1 reduces to column sums, not max-cut)");
            } else if args.p.numerator() == 2 * args.p.denominator() {
                bail!("p must exceed 2 for this construction (p = 2 is the spectral norm)");
            } else if args.p.numerator() < 2 * args.p.denominator() {
                let q = args.p.conjugate()?;
                let s = q.to_string();
                (q, Some(s))
            } else {
                (args.p.clone(), None)
            };
            let cfg = AscentConfig {
                restarts: args.restarts,
                tol: args.tol,
                seed: args.seed,
                ..AscentConfig::default()
            };
            let r = solve_maxcut_via_pnorm_with_limit(
                &g,
                &p_eff,
                args.alpha.clone(),
                &cfg,
                args.limit_enum,
            )?;
            let wit = r.decode.witness_cut.as_ref().expect("pipeline sets witness");
            MaxcutRecord {
                n: r.n,
                p: args.p.to_string(),
                solved_p,
                alpha: Some(r.alpha.to_string()),
                bits: Some(r.bits),
                f: Some(float_str(&r.f)),
                maxcut_estimate: Some(float_str(&r.decode.maxcut_estimate)),
                maxcut_rounded: r.decode.maxcut_rounded,
                witness: wit.witness.as_slice().to_vec(),
                method: r.method.clone(),
                timings: PipelineTimingsMs {
                    build_ms: r.timings.build_ms,
                    solve_ms: r.timings.solve_ms,
                    decode_ms: r.timings.decode_ms,
                },
            }
        }
    };
    let report = Report {
        command: "maxcut".into(),
        input_sha256: Some(digest),
        record,
    };
    emit(args.json, &report, || {
        let r = &report.record;
        println!("maxcut = {} (method {})", r.maxcut_rounded, r.method);
        if let Some(est) = &r.maxcut_estimate {
            println!("estimate {est}");
        }
        if let Some(sp) = &r.solved_p {
            println!("p = {} solved through the dual instance at p' = {sp}", r.p);
        }
        println!("witness {:?}", r.witness);
    })
}

#[derive(Serialize)]
struct VerifyLine {
    name: String,
    pass: bool,
    cases: usize,
    worst_margin: f64,
    detail: String,
}

#[derive(Serialize)]
struct VerifyRecord {
    suite: String,
    seed: u64,
    checks: Vec<VerifyLine>,
    all_pass: bool,
    timings: TimingsMs,
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let t0 = Instant::now();
    let reports = run_suite(&args.suite, args.seed, args.sizes.as_deref())?;
    let checks: Vec<VerifyLine> = reports
        .iter()
        .map(|r| VerifyLine {
            name: r.name.clone(),
            pass: r.pass,
            cases: r.cases,
            worst_margin: r.worst_margin,
            detail: r.detail.clone(),
        })
        .collect();
    let all_pass = checks.iter().all(|c| c.pass);
    let record = VerifyRecord {
        suite: args.suite.clone(),
        seed: args.seed,
        checks,
        all_pass,
        timings: TimingsMs {
            total_ms: t0.elapsed().as_secs_f64() * 1e3,
        },
    };
    let report = Report {
        command: "verify".into(),
        input_sha256: None,
        record,
    };
    emit(args.json, &report, || {
        for c in &report.record.checks {
            println!(
                "{:<12} {}  worst slack {:+.3e}  ({} cases; {})",
                c.name,
                if c.pass { "pass" } else { "FAIL" },
                c.worst_margin,
                c.cases,
                c.detail
            );
        }
    })?;
    Ok(all_pass)
}

#[derive(Serialize)]
struct EpsilonsRecord {
    p: String,
    delta: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// ((33+δ)·p·2^{p−1})⁻¹: accuracy below which the mixed (∞,p)
    /// approximation is hard
    epsilon_inftyp: String,
    /// schedule for the p→p norm; needs n and p > 2
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon_pnorm: Option<String>,
    timings: TimingsMs,
}

fn cmd_epsilons(args: &EpsilonsArgs) -> Result<()> {
    let t0 = Instant::now();
    let e_inftyp = required_epsilon_inftyp(&args.p, &args.delta, args.bits)?;
    let e_pnorm = match args.n {
        Some(n) => Some(required_epsilon_pnorm(n, &args.p, args.bits)?),
        None => None,
    };
    let record = EpsilonsRecord {
        p: args.p.to_string(),
        delta: args.delta.to_string(),
        n: args.n,
        epsilon_inftyp: float_str(&e_inftyp),
        epsilon_pnorm: e_pnorm.as_ref().map(float_str),
        timings: TimingsMs {
            total_ms: t0.elapsed().as_secs_f64() * 1e3,
        },
    };
    let report = Report {
        command: "epsilons".into(),
        input_sha256: None,
        record,
    };
    emit(args.json, &report, || {
        let r = &report.record;
        println!(
            "mixed (∞,p) schedule: p = {}, δ = {} → ε = {}",
            r.p, r.delta, r.epsilon_inftyp
        );
        match (&r.epsilon_pnorm, r.n) {
            (Some(e), Some(n)) => println!("p-norm schedule: n = {n}, p = {} → ε = {e}", r.p),
            _ => println!("p-norm schedule: pass --n (and p > 2) to evaluate"),
        }
    })
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Build(a) => cmd_build(a).map(|_| true),
        Command::Solve(a) => cmd_solve(a).map(|_| true),
        Command::Maxcut(a) => cmd_maxcut(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Epsilons(a) => cmd_epsilons(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
