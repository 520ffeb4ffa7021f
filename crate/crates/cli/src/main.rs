//! Command line front end: run a verification case, export matrices, or
//! sweep a deformation grid. Reports are deterministic JSON (17 significant
//! digits, fixed field order), so identical configs diff cleanly modulo the
//! wall-time fields.
//!
//! Exit codes: 0 all gates pass, 1 a gate failed or the engine refused a
//! well-formed request, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use qflag_core::flag::{
    run_case_shared, FlagContext, DEFAULT_BLOCK, DEFAULT_TRUNC, GATE_EPS_DIST, GATE_RELATION,
    GATE_TIGHT,
};
use qflag_core::linalg::{to_complex, CMat};
use qflag_core::pol::BATTERY_DEPTH;
use qflag_core::report::{matrices_json, matrix_json, report_json, CaseReport};
use qflag_core::rmatrix::universal_r;
use qflag_core::roots::{LieType, RootDatum, Weight};
use qflag_core::session::Session;
use qflag_core::uqalg::{Sym, WordSum};
use qflag_core::Error;

const EXIT_GATE: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Largest dense square matrix the export path will serialize per side.
const EXPORT_DIM_CAP: usize = 1024;

#[derive(Parser)]
#[command(name = "qflag", version, about = "Quantized flag manifold verification toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every check for one context and emit its report
    Verify(CaseArgs),
    /// Export representation, braiding, or generator matrices as JSON
    Matrices {
        #[command(flatten)]
        case: CaseArgs,
        /// One of irrep:<coeffs>, rmatrix:<coeffs>;<coeffs>, kop:<coeffs>, xop:<node>
        #[arg(long)]
        what: String,
    },
    /// Run one context over a grid of deformation values in parallel
    Sweep {
        #[command(flatten)]
        case: CaseArgs,
        /// Comma-separated q values, e.g. 0.3,0.5,0.7
        #[arg(long = "q-grid")]
        q_grid: String,
        /// Worker threads (default: one per core)
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct CaseArgs {
    /// Series letter, e.g. A or B
    #[arg(long = "type")]
    lie_type: char,
    /// Number of nodes
    #[arg(long)]
    rank: usize,
    /// Deformation parameter, strictly between 0 and 1
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Parabolic node set, 1-indexed and comma-separated; empty for the full flag
    #[arg(long, default_value = "")]
    subset: String,
    /// Fock truncation per tensor leg
    #[arg(long, default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
    /// Measured corner block per tensor leg
    #[arg(long, default_value_t = DEFAULT_BLOCK)]
    block: usize,
    /// Write the JSON payload here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A fully resolved run request. The residual gates and the pairing battery
/// depth are pinned inside the engine and echoed per check in every report;
/// they are carried here so a logged config names the active values.
struct RunConfig {
    lie_type: LieType,
    rank: usize,
    q: f64,
    /// 0-indexed, sorted, deduplicated.
    subset: Vec<usize>,
    trunc: usize,
    block: usize,
    gates: [f64; 3],
    battery_depth: usize,
    q_grid: Vec<f64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
}

fn resolve(args: &CaseArgs) -> Result<RunConfig, String> {
    let lie_type = LieType::from_letter(args.lie_type.to_ascii_uppercase())
        .ok_or_else(|| format!("unknown series letter {:?}", args.lie_type))?;
    if args.rank == 0 {
        return Err("rank must be at least 1".into());
    }
    if !(args.q > 0.0 && args.q < 1.0) {
        return Err(format!("q must lie strictly between 0 and 1, got {}", args.q));
    }
    let mut subset = Vec::new();
    for tok in args.subset.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let s: usize = tok
            .parse()
            .map_err(|_| format!("subset entry {tok:?} is not a node number"))?;
        if s < 1 || s > args.rank {
            return Err(format!("subset node {s} out of range for rank {}", args.rank));
        }
        subset.push(s - 1);
    }
    subset.sort_unstable();
    subset.dedup();
    if args.block < 1 || args.block > args.trunc {
        return Err(format!(
            "block {} must lie between 1 and the truncation {}",
            args.block, args.trunc
        ));
    }
    Ok(RunConfig {
        lie_type,
        rank: args.rank,
        q: args.q,
        subset,
        trunc: args.trunc,
        block: args.block,
        gates: [GATE_TIGHT, GATE_RELATION, GATE_EPS_DIST],
        battery_depth: BATTERY_DEPTH,
        q_grid: Vec::new(),
        workers: None,
        out: args.out.clone(),
    })
}

fn usage(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

/// Config-shaped engine rejections count as usage errors; everything else is
/// a runtime failure.
fn engine_exit(e: &Error) -> u8 {
    let code = match e {
        Error::UnsupportedType(..)
        | Error::QOutOfRange(..)
        | Error::InvalidParameter(..)
        | Error::NotDominant(..) => EXIT_USAGE,
        _ => EXIT_GATE,
    };
    eprintln!("error: {e}");
    code
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, format!("{payload}\n"))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            match so
                .write_all(payload.as_bytes())
                .and_then(|_| so.write_all(b"\n"))
            {
                Ok(()) => Ok(()),
                // a closed pipe downstream is not our failure
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(format!("cannot write report: {e}")),
            }
        }
    }
}

fn config_line(cfg: &RunConfig) -> String {
    format!(
        "gates: tight {:.0e}, relation {:.0e}, eps {:.0e}; battery depth {}",
        cfg.gates[0], cfg.gates[1], cfg.gates[2], cfg.battery_depth
    )
}

fn case_line(r: &CaseReport) -> String {
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    format!(
        "{}{} S={:?} q={}: {} checks, {} failed, eps_fitted={:?}, {} ms",
        r.lie_type,
        r.rank,
        r.subset,
        r.q,
        r.checks.len(),
        failed,
        r.eps_fitted,
        r.wall_ms
    )
}

fn cmd_verify(cfg: &RunConfig) -> u8 {
    eprintln!("{}", config_line(cfg));
    let session = Arc::new(Session::new());
    let report = match run_case_shared(
        &session,
        cfg.lie_type,
        cfg.rank,
        cfg.q,
        &cfg.subset,
        cfg.trunc,
        cfg.block,
    ) {
        Ok(r) => r,
        Err(e) => return engine_exit(&e),
    };
    eprintln!("{}", case_line(&report));
    let json = report_json(std::slice::from_ref(&report));
    if let Err(msg) = emit(&cfg.out, &json) {
        return usage(&msg);
    }
    if report.all_pass() {
        0
    } else {
        EXIT_GATE
    }
}

fn parse_weight(s: &str, rank: usize) -> Result<Weight, String> {
    let mut coeffs = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        coeffs.push(
            tok.parse::<i64>()
                .map_err(|_| format!("weight entry {tok:?} is not an integer"))?,
        );
    }
    if coeffs.len() != rank {
        return Err(format!(
            "weight needs {rank} coefficients, got {}",
            coeffs.len()
        ));
    }
    Ok(Weight(coeffs))
}

fn cmd_matrices(cfg: &RunConfig, what: &str) -> u8 {
    let Some((kind, payload)) = what.split_once(':') else {
        return usage("--what must look like kind:payload, e.g. irrep:1,0");
    };
    let datum = match RootDatum::new(cfg.lie_type, cfg.rank, cfg.q) {
        Ok(d) => d,
        Err(e) => return engine_exit(&e),
    };
    let session = Session::new();
    let json = match kind {
        "irrep" => {
            let lam = match parse_weight(payload, cfg.rank) {
                Ok(w) => w,
                Err(msg) => return usage(&msg),
            };
            let v = match session.irrep(&datum, &lam) {
                Ok(v) => v,
                Err(e) => return engine_exit(&e),
            };
            let mut entries: Vec<(String, CMat)> = Vec::new();
            for r in 0..cfg.rank {
                entries.push((format!("E{}", r + 1), v.wordsum_matrix(&WordSum::gen(Sym::E(r)))));
                entries.push((format!("F{}", r + 1), v.wordsum_matrix(&WordSum::gen(Sym::F(r)))));
                entries.push((format!("K{}", r + 1), to_complex(&v.l_matrix(&datum.alpha(r)))));
            }
            matrices_json(&entries)
        }
        "rmatrix" => {
            let Some((a, b)) = payload.split_once(';') else {
                return usage("rmatrix payload must be <coeffs>;<coeffs>");
            };
            let (la, lb) = match (parse_weight(a, cfg.rank), parse_weight(b, cfg.rank)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(msg), _) | (_, Err(msg)) => return usage(&msg),
            };
            let va = match session.irrep(&datum, &la) {
                Ok(v) => v,
                Err(e) => return engine_exit(&e),
            };
            let vb = match session.irrep(&datum, &lb) {
                Ok(v) => v,
                Err(e) => return engine_exit(&e),
            };
            match universal_r(&va, &vb) {
                Ok(r) => matrix_json(&to_complex(&r.mat)),
                Err(e) => return engine_exit(&e),
            }
        }
        "kop" => {
            let om = match parse_weight(payload, cfg.rank) {
                Ok(w) => w,
                Err(msg) => return usage(&msg),
            };
            let ctx = match FlagContext::new(
                cfg.lie_type,
                cfg.rank,
                cfg.q,
                &cfg.subset,
                cfg.trunc,
                cfg.block,
            ) {
                Ok(c) => c,
                Err(e) => return engine_exit(&e),
            };
            let diag = ctx.k_general(&om).shift_zero_diag();
            matrix_json(&CMat::from_fn(diag.len(), 1, |i, _| diag[i]))
        }
        "xop" => {
            let r: usize = match payload.trim().parse() {
                Ok(r) => r,
                Err(_) => return usage("xop payload must be a 1-indexed node number"),
            };
            if r < 1 || r > cfg.rank {
                return usage(&format!("node {r} out of range for rank {}", cfg.rank));
            }
            let ctx = match FlagContext::new(
                cfg.lie_type,
                cfg.rank,
                cfg.q,
                &cfg.subset,
                cfg.trunc,
                cfg.block,
            ) {
                Ok(c) => c,
                Err(e) => return engine_exit(&e),
            };
            let op = ctx.x_plus(r - 1);
            let dim = cfg.block.pow(op.legs as u32);
            if dim > EXPORT_DIM_CAP {
                return usage(&format!(
                    "block {} over {} legs gives a {dim}x{dim} export; reduce --block",
                    cfg.block, op.legs
                ));
            }
            matrix_json(&op.dense_block(cfg.block))
        }
        other => return usage(&format!("unknown matrix target {other:?}")),
    };
    if let Err(msg) = emit(&cfg.out, &json) {
        return usage(&msg);
    }
    0
}

fn cmd_sweep(cfg: &RunConfig) -> u8 {
    if cfg.q_grid.is_empty() {
        return usage("q grid is empty");
    }
    eprintln!("{}", config_line(cfg));
    let mut grid = cfg.q_grid.clone();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("grid values are finite"));
    grid.dedup_by_key(|x| x.to_bits());
    if let Some(w) = cfg.workers {
        if w == 0 {
            return usage("workers must be at least 1");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return EXIT_GATE;
        }
    }
    let session = Arc::new(Session::new());
    let results: Vec<Result<CaseReport, Error>> = grid
        .par_iter()
        .map(|&q| {
            run_case_shared(
                &session,
                cfg.lie_type,
                cfg.rank,
                q,
                &cfg.subset,
                cfg.trunc,
                cfg.block,
            )
        })
        .collect();
    let mut reports = Vec::new();
    let mut broken = 0usize;
    for (q, res) in grid.iter().zip(results) {
        match res {
            Ok(r) => {
                eprintln!("{}", case_line(&r));
                reports.push(r);
            }
            Err(e) => {
                eprintln!("q={q}: error: {e}");
                broken += 1;
            }
        }
    }
    let json = report_json(&reports);
    if let Err(msg) = emit(&cfg.out, &json) {
        return usage(&msg);
    }
    if broken == 0 && reports.iter().all(|r| r.all_pass()) {
        0
    } else {
        EXIT_GATE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Verify(case) => match resolve(case) {
            Ok(cfg) => cmd_verify(&cfg),
            Err(msg) => usage(&msg),
        },
        Cmd::Matrices { case, what } => match resolve(case) {
            Ok(cfg) => cmd_matrices(&cfg, what),
            Err(msg) => usage(&msg),
        },
        Cmd::Sweep {
            case,
            q_grid,
            workers,
        } => match resolve(case) {
            Ok(mut cfg) => {
                let mut parsed = Vec::new();
                let mut bad = None;
                for tok in q_grid.split(',') {
                    let tok = tok.trim();
                    if tok.is_empty() {
                        continue;
                    }
                    match tok.parse::<f64>() {
                        Ok(q) if q > 0.0 && q < 1.0 => parsed.push(q),
                        _ => {
                            bad = Some(format!("grid entry {tok:?} is not a q in (0, 1)"));
                            break;
                        }
                    }
                }
                match bad {
                    Some(msg) => usage(&msg),
                    None => {
                        cfg.q_grid = parsed;
                        cfg.workers = *workers;
                        cmd_sweep(&cfg)
                    }
                }
            }
            Err(msg) => usage(&msg),
        },
    };
    ExitCode::from(code)
}
