//! `gsf`: generate Grassmannian points, build operators, verify identities.
//!
//! Exit codes: 0 when every selected check passes (or is skipped), 1 when a
//! check fails, 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gsf_core::combinatorics::{
    color_positions, gon_positions, propagate_gon_indices, simplex_positions, Side,
};
use gsf_core::grassmann::{random_point, DEFAULT_MAX_TRIES};
use gsf_core::solutions::{build_a, build_b, build_r, build_z};
use gsf_core::verify::{run_checks, Check, ReductionOptions, DEFAULT_DEPTH};
use gsf_core::{Field, GrassmannPoint, Kind, Scalar};

const SEED_ENV: &str = "GSF_SEED";

#[derive(Parser)]
#[command(name = "gsf", version, about = "Grassmannian solutions of polygon and simplex equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a point with all Plücker coordinates nonzero.
    Gen {
        #[arg(long)]
        n: usize,
        /// Field descriptor: q, gf(p) or gf(p,k;c0,...,ck).
        #[arg(long, default_value = "q")]
        field: String,
        /// Overridden by the GSF_SEED environment variable.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_TRIES)]
        max_tries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build A, B, R or Z operators of a point.
    Build {
        #[arg(long)]
        point: PathBuf,
        /// Comma-separated kinds among A, B, R, Z.
        #[arg(long, default_value = "A")]
        what: String,
        /// `all` or a comma-separated list of labels.
        #[arg(long, default_value = "all")]
        q: String,
        /// λ for Z, written in the point's field.
        #[arg(long, default_value = "0")]
        lambda: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks on a point.
    Verify {
        #[arg(long)]
        point: PathBuf,
        /// Comma-separated checks, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Comma-separated λ values for the reduction check.
        #[arg(long, default_value = "0,1")]
        lambda: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Write 0 for every timing so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print position sets, and optionally colorings and index traces.
    Positions {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Equation::Gon)]
        equation: Equation,
        #[arg(long)]
        coloring: bool,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Equation {
    Gon,
    Simplex,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { n, field, seed, max_tries, out } => gen(n, &field, seed, max_tries, out.as_deref()),
        Command::Build { point, what, q, lambda, out } => build(&point, &what, &q, &lambda, out.as_deref()),
        Command::Verify { point, checks, lambda, depth, no_timing, out } => {
            verify(&point, &checks, &lambda, depth, no_timing, out.as_deref())
        }
        Command::Positions { n, equation, coloring, trace, out } => {
            positions(n, equation, coloring, trace, out.as_deref())
        }
    }
}

fn emit(v: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn effective_seed(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().with_context(|| format!("{SEED_ENV}={s:?} is not a seed")),
        Err(_) => Ok(flag),
    }
}

fn load_point(path: &Path) -> Result<GrassmannPoint> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let pt = GrassmannPoint::from_json(&v).with_context(|| format!("loading {}", path.display()))?;
    pt.require_nonvanishing().context("the point does not satisfy the nonvanishing assumption")?;
    Ok(pt)
}

fn parse_scalars(field: &Field, text: &str) -> Result<Vec<Scalar>> {
    let v = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| field.parse_scalar(s).with_context(|| format!("λ value {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        bail!("no λ values given");
    }
    Ok(v)
}

fn gen(n: usize, field: &str, seed: u64, max_tries: usize, out: Option<&Path>) -> Result<ExitCode> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    let field = Field::parse(field)?;
    let seed = effective_seed(seed)?;
    let pt = random_point(n, &field, seed, max_tries)?;
    let summary = json!({
        "n": n,
        "field": field.descriptor(),
        "seed": seed,
        "nonvanishing": pt.table().vanishing().is_empty(),
        "pluecker": pt.table().entries()
            .map(|(k, v)| json!({"indices": k.to_vec(), "value": v.to_json()}))
            .collect::<Vec<_>>(),
    });
    match out {
        Some(_) => {
            emit(&pt.to_json(), out)?;
            emit(&summary, None)?;
        }
        None => {
            emit(&pt.to_json(), None)?;
            eprintln!("{}", serde_json::to_string(&summary)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_labels(text: &str, max: usize) -> Result<Vec<usize>> {
    if text.trim() == "all" {
        return Ok((1..=max).collect());
    }
    text.split(',')
        .map(|s| {
            let q: usize = s.trim().parse().with_context(|| format!("label {s:?}"))?;
            if q == 0 || q > max {
                bail!("label {q} outside 1..={max}");
            }
            Ok(q)
        })
        .collect()
}

fn build(point: &Path, what: &str, q: &str, lambda: &str, out: Option<&Path>) -> Result<ExitCode> {
    let pt = load_point(point)?;
    let t = pt.table();
    let kinds = what
        .split(',')
        .map(|s| s.trim().parse::<Kind>())
        .collect::<gsf_core::Result<Vec<_>>>()?;
    let labels = parse_labels(q, t.dim())?;
    let lambda = pt.field().parse_scalar(lambda).context("λ value")?;
    let mut ops = Vec::new();
    for kind in kinds {
        for &label in &labels {
            let slot = match kind {
                Kind::A => build_a(t, label)?,
                Kind::B => build_b(t, label)?,
                Kind::R => build_r(t, label)?,
                Kind::Z => build_z(t, label, &lambda)?,
            };
            ops.push(slot.to_json());
        }
    }
    let v = json!({"n": pt.n(), "field": pt.field().descriptor(), "operators": ops});
    emit(&v, out)?;
    Ok(ExitCode::SUCCESS)
}

fn verify(
    point: &Path,
    checks: &str,
    lambda: &str,
    depth: usize,
    no_timing: bool,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let pt = load_point(point)?;
    let checks = Check::parse_list(checks)?;
    let red = ReductionOptions { lambdas: parse_scalars(pt.field(), lambda)?, depth };
    if checks.contains(&Check::Reduction) && (depth == 0 || depth > 2 * pt.n() - 1) {
        bail!("reduction depth {depth} outside 1..={} for n = {}", 2 * pt.n() - 1, pt.n());
    }
    let mut reports = run_checks(&pt, &checks, &red)?;
    if no_timing {
        reports = reports.into_iter().map(|r| r.without_timing()).collect();
    }
    let failed: Vec<&str> = reports.iter().filter(|r| r.failed()).map(|r| r.check.as_str()).collect();
    let v = json!({
        "point": pt.params(),
        "status": if failed.is_empty() { "pass" } else { "fail" },
        "reports": reports,
    });
    emit(&v, out)?;
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn positions(n: usize, equation: Equation, coloring: bool, trace: bool, out: Option<&Path>) -> Result<ExitCode> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    let mut sets = serde_json::Map::new();
    for q in 1..=2 * n + 1 {
        let set = match equation {
            Equation::Gon => gon_positions(n, q)?,
            Equation::Simplex => simplex_positions(2 * n, q)?,
        };
        sets.insert(q.to_string(), json!(set.positions));
    }
    let name = match equation {
        Equation::Gon => "gon",
        Equation::Simplex => "simplex",
    };
    let mut v = json!({"equation": name, "n": n, "sets": sets});
    let label = |p: &(usize, usize)| format!("{}{}", p.0, p.1);
    if coloring {
        let c = color_positions(n)?;
        let word = |cs: &[gsf_core::combinatorics::Color]| cs.iter().map(|c| c.letter()).collect::<String>();
        v["coloring"] = json!({
            "initial": c.pairs.iter().zip(c.initial()).map(|(p, col)| format!("{}{}", label(p), col.letter())).collect::<Vec<_>>(),
            "steps": c.steps.iter().map(|s| word(s)).collect::<Vec<_>>(),
            "histories": c.histories.iter().map(|h| word(h)).collect::<Vec<_>>(),
        });
    }
    if trace {
        let mut traces = serde_json::Map::new();
        for (key, side) in [("lhs", Side::Lhs), ("rhs", Side::Rhs)] {
            let t = propagate_gon_indices(n, side)?;
            traces.insert(key.into(), json!({
                "labels": t.labels,
                "rows": t.rows.iter().map(|r| r.iter().map(label).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }));
        }
        v["trace"] = Value::Object(traces);
    }
    emit(&v, out)?;
    Ok(ExitCode::SUCCESS)
}
