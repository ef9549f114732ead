//! `latcell`: Voronoi cells, covering radii and second-moment checks for
//! small lattices given by rational Gram matrices.

mod input;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use latcell::montecarlo::{self, McEstimate};
use latcell::random::random_batch;
use latcell::verify::{verify_all_deep_holes, verify_batch, verify_main, ProofReport, VerifyConfig};
use latcell::voronoi::{covering_radius_sq, voronoi_cell};
use latcell::{catalog, Execution, GramLattice, RatVec, DEFAULT_DIMENSION_CAP};
use serde_json::json;

use input::LatticeInput;

const EXIT_INPUT: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "latcell", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in lattices.
    Catalog(Output),
    /// Voronoi cell, covering radius, volume and second moment.
    Cell {
        #[command(flatten)]
        lattice: LatticeInput,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Check every step of the moment inequality and classify equality.
    Verify {
        #[command(flatten)]
        lattice: LatticeInput,
        #[command(flatten)]
        run: RunArgs,
        /// Repeat the check at every deep hole.
        #[arg(long)]
        all_deep_holes: bool,
        /// Also attach a Monte-Carlo estimate with this many samples.
        #[arg(long, default_value_t = 0)]
        mc_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Verify a seeded batch of random lattices.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw diagonal Gram matrices only (rectangular lattices).
        #[arg(long)]
        diagonal_only: bool,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Floating-point estimate of |P| and ∫_P Q for comparison with the exact values.
    Montecarlo {
        #[command(flatten)]
        lattice: LatticeInput,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1_000_000)]
        mc_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Largest dimension accepted (default 5, or HLR_CAP).
    #[arg(long, env = "HLR_CAP")]
    cap: Option<usize>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn config(&self) -> anyhow::Result<VerifyConfig> {
        let cap = self.cap.unwrap_or(DEFAULT_DIMENSION_CAP);
        if cap == 0 {
            bail!("--cap must be at least 1");
        }
        let exec = if self.sequential { Execution::Sequential } else { Execution::Parallel };
        Ok(VerifyConfig { cap, exec })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, body: &str) -> anyhow::Result<()> {
        let mut body = body.to_string();
        if !body.ends_with('\n') {
            body.push('\n');
        }
        match &self.out {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
            None => Ok(std::io::stdout().write_all(body.as_bytes())?),
        }
    }
}

/// Failure with a chosen exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = match error.downcast_ref::<latcell::Error>() {
            Some(latcell::Error::InternalInconsistency(_)) => EXIT_INCONSISTENT,
            _ => EXIT_INPUT,
        };
        Failure { code, error }
    }
}

/// Exit status of a completed run: did every record pass?
type Outcome = Result<bool, Failure>;

fn json_string<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn cmd_catalog(out: &Output) -> Outcome {
    let entries = catalog::entries();
    let body = match out.format {
        Format::Json => json_string(
            &entries
                .iter()
                .map(|e| json!({"name": e.name, "n": e.gram.dim(), "gram": e.gram, "R2": e.r_sq, "ratio": e.ratio, "note": e.note}))
                .collect::<Vec<_>>(),
        )?,
        Format::Csv => {
            let show = |x: &Option<latcell::Rat>| x.as_ref().map_or(String::new(), |r| r.to_string());
            render::csv(
                &["name", "n", "R2", "ratio"],
                entries.iter().map(|e| vec![e.name.clone(), e.gram.dim().to_string(), show(&e.r_sq), show(&e.ratio)]),
            )?
        }
        Format::Text => entries.iter().map(|e| format!("{:<6} n = {}  {}\n", e.name, e.gram.dim(), e.note)).collect(),
    };
    out.emit(&body)?;
    Ok(true)
}

fn cmd_cell(lattice: &LatticeInput, run: &RunArgs, out: &Output) -> Outcome {
    let (name, lat) = lattice.resolve()?;
    let cfg = run.config()?;
    let cell = voronoi_cell(&lat, cfg.cap)?;
    let r_sq = covering_radius_sq(&lat, &cell);
    let volume = cell.volume();
    let moment = cell.second_moment(lat.gram(), &RatVec::zeros(lat.dim()));
    let body = match out.format {
        Format::Json => json_string(&json!({
            "lattice": {"name": name, "n": lat.dim(), "gram": lat.gram()},
            "R2": r_sq,
            "volume": volume,
            "second_moment": moment,
            "cell": cell.to_dump(),
        }))?,
        Format::Csv => render::csv(
            &["name", "n", "R2", "volume", "moment", "facets", "vertices"],
            [vec![
                name,
                lat.dim().to_string(),
                r_sq.to_string(),
                volume.to_string(),
                moment.to_string(),
                cell.halfspaces().len().to_string(),
                cell.vertices().len().to_string(),
            ]],
        )?,
        Format::Text => {
            let mut s = format!("{name}: R² = {r_sq}, |P| = {volume}, ∫ = {moment}\n");
            s += &format!("{} facets:\n", cell.halfspaces().len());
            for h in cell.halfspaces() {
                s += &format!("  {} · x ≤ {}\n", render::vec(&h.functional), h.offset);
            }
            s += &format!("{} vertices:\n", cell.vertices().len());
            for v in cell.vertices() {
                s += &format!("  {}\n", render::vec(v));
            }
            s
        }
    };
    out.emit(&body)?;
    Ok(true)
}

fn mc_for(lat: &GramLattice, cfg: &VerifyConfig, samples: usize, seed: u64) -> anyhow::Result<McEstimate> {
    if samples == 0 {
        bail!("--mc-samples must be positive");
    }
    let cell = voronoi_cell(lat, cfg.cap)?;
    let moment = cell.second_moment(lat.gram(), &RatVec::zeros(lat.dim()));
    Ok(montecarlo::estimate(lat, &cell, &cell.volume(), &moment, samples, seed, cfg.exec))
}

fn mc_text(mc: &McEstimate) -> String {
    format!(
        "Monte Carlo ({} samples): |P| ≈ {:.6} (exact {:.6}, rel. dev {:.4}), ∫ ≈ {:.6} (exact {:.6}, rel. dev {:.4})\n",
        mc.samples, mc.volume, mc.volume_exact, mc.volume_rel_dev, mc.second_moment, mc.second_moment_exact, mc.second_moment_rel_dev
    )
}

fn reports_body(reports: &[ProofReport], format: Format, single: bool) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json if single => json_string(&reports[0])?,
        Format::Json => json_string(&reports)?,
        Format::Csv => render::csv(&render::REPORT_COLUMNS, reports.iter().map(render::report_row))?,
        Format::Text => reports.iter().map(render::text).collect::<Vec<_>>().join("\n"),
    })
}

fn cmd_verify(
    lattice: &LatticeInput,
    run: &RunArgs,
    all_holes: bool,
    mc_samples: usize,
    seed: u64,
    out: &Output,
) -> Outcome {
    let (name, lat) = lattice.resolve()?;
    let cfg = run.config()?;
    let reports =
        if all_holes { verify_all_deep_holes(&name, &lat, &cfg)? } else { vec![verify_main(&name, &lat, &cfg)?] };
    let mc = if mc_samples > 0 { Some(mc_for(&lat, &cfg, mc_samples, seed)?) } else { None };
    let mut body = reports_body(&reports, out.format, !all_holes)?;
    if let Some(mc) = &mc {
        match out.format {
            Format::Json => {
                let value = serde_json::from_str::<serde_json::Value>(&body)?;
                body = json_string(&json!({"report": value, "montecarlo": mc}))?;
            }
            _ => body += &mc_text(mc),
        }
    }
    out.emit(&body)?;
    Ok(reports.iter().all(|r| r.all_pass))
}

fn cmd_random(n: usize, count: usize, seed: u64, diagonal: bool, run: &RunArgs, out: &Output) -> Outcome {
    let cfg = run.config()?;
    if n == 0 || n > cfg.cap {
        return Err(latcell::Error::DimensionCapExceeded { n, cap: cfg.cap }.into());
    }
    let items = random_batch(n, seed, count, diagonal);
    let reports = verify_batch(&items, &cfg).into_iter().collect::<latcell::Result<Vec<_>>>()?;
    let body = match out.format {
        Format::Text => {
            let s = render::csv(&render::REPORT_COLUMNS, reports.iter().map(render::report_row))?;
            let passed = reports.iter().filter(|r| r.all_pass).count();
            s + &format!("{passed}/{} lattices pass every record\n", reports.len())
        }
        f => reports_body(&reports, f, false)?,
    };
    out.emit(&body)?;
    Ok(reports.iter().all(|r| r.all_pass))
}

fn cmd_montecarlo(lattice: &LatticeInput, run: &RunArgs, samples: usize, seed: u64, out: &Output) -> Outcome {
    let (name, lat) = lattice.resolve()?;
    let cfg = run.config()?;
    let mc = mc_for(&lat, &cfg, samples, seed)?;
    let body = match out.format {
        Format::Json => json_string(&json!({"lattice": name, "estimate": mc}))?,
        Format::Csv => {
            let floats = [mc.volume, mc.volume_exact, mc.volume_rel_dev, mc.second_moment, mc.second_moment_exact];
            let mut row = vec![name, mc.samples.to_string()];
            row.extend(floats.iter().chain([&mc.second_moment_rel_dev]).map(f64::to_string));
            render::csv(
                &[
                    "name",
                    "samples",
                    "volume",
                    "volume_exact",
                    "volume_rel_dev",
                    "moment",
                    "moment_exact",
                    "moment_rel_dev",
                ],
                [row],
            )?
        }
        Format::Text => format!("{name}: {}", mc_text(&mc)),
    };
    out.emit(&body)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Catalog(out) => cmd_catalog(out),
        Command::Cell { lattice, run, out } => cmd_cell(lattice, run, out),
        Command::Verify { lattice, run, all_deep_holes, mc_samples, seed, out } => {
            cmd_verify(lattice, run, *all_deep_holes, *mc_samples, *seed, out)
        }
        Command::Random { n, count, seed, diagonal_only, run, out } => {
            cmd_random(*n, *count, *seed, *diagonal_only, run, out)
        }
        Command::Montecarlo { lattice, run, mc_samples, seed, out } => {
            cmd_montecarlo(lattice, run, *mc_samples, *seed, out)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("latcell: some records failed");
            ExitCode::from(EXIT_INCONSISTENT)
        }
        Err(f) => {
            eprintln!("latcell: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
