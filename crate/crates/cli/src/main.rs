//! nflux: closed-form and finite-element computations for the Helmholtz
//! problem with constant Neumann data, its boundary functional f(c), the
//! constrained spectra, and the domain classification built on them.
//!
//! Exit codes: 0 success, 1 acceptance failure, 2 bad arguments,
//! 3 numerical failure.

mod domain_args;
mod output;

use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};

use neumann_flux::acceptance;
use neumann_flux::closed_form::{alpha0, radial_boundary_linearization, BallSpec, BoxSpec, EquilateralSpec, SectorSpec};
use neumann_flux::config::RunConfig;
use neumann_flux::geometry::{triangulate, DomainSpec};
use neumann_flux::sweeps::{
    classify_domain, observation_suite, sector_study, sweep_csv, sweep_f, default_grid,
};

use domain_args::DomainArgs;
use output::{write_json, write_text, OutputArgs};

#[derive(Parser)]
#[command(name = "nflux", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct MeshArgs {
    /// Refinement stops once the fine mesh reaches this node count
    #[arg(long, default_value_t = 2000)]
    target_nodes: usize,
    /// Points in the c-grid
    #[arg(long, default_value_t = 50)]
    grid: usize,
    /// Seed for randomized suites
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Run sweep points sequentially
    #[arg(long)]
    serial: bool,
}

impl MeshArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            target_nodes: self.target_nodes,
            c_grid_size: self.grid,
            seed: self.seed,
            parallel: !self.serial,
            ..RunConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form ball functional: f(c) sweep and limits
    Ball {
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[command(flatten)]
        mesh: MeshArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form box functional: f(c) sweep, limit, inequality gap
    Box {
        /// Comma-separated half-lengths, e.g. 1,1,1
        #[arg(long, value_delimiter = ',')]
        half_lengths: Vec<f64>,
        #[command(flatten)]
        mesh: MeshArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Equilateral triangle: critical solution, functional at mu2, small-c expansion
    Triangle {
        #[arg(long, default_value_t = 2.0)]
        side: f64,
        #[command(flatten)]
        mesh: MeshArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sector analytics: mu2 branch, boundary integral, crossover aperture
    Sector {
        #[arg(long)]
        alpha: Option<f64>,
        /// Report the crossover aperture alpha_0 instead of one sector
        #[arg(long)]
        alpha0: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify a planar domain by the sign structure of f
    Classify {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        mesh: MeshArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Also export the fine mesh as a plain-text node/element file
        #[arg(long)]
        export_mesh: Option<std::path::PathBuf>,
    },
    /// Tabulate f(c) over the default grid for a domain
    Sweep {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        mesh: MeshArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reproduce the numerical observation families (WARN-only report)
    Observe {
        /// Emit the per-family table used by the acceptance suite
        #[arg(long)]
        paper_table: bool,
        #[command(flatten)]
        mesh: MeshArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the acceptance criteria; exit 1 on any FAIL
    Accept {
        /// Run only criteria whose slug contains this substring
        #[arg(long)]
        only: Option<String>,
        #[command(flatten)]
        mesh: MeshArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let payload = serde_json::json!({ "error": format!("{err:#}") });
            eprintln!("{payload}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// 2 for invalid arguments or domains, 3 for numerical failures.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<domain_args::BadArgs>().is_some() {
        return 2;
    }
    match err.downcast_ref::<neumann_flux::Error>() {
        Some(neumann_flux::Error::InvalidArgument(_)) | Some(neumann_flux::Error::InvalidDomain(_)) => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Ball { dim, radius, mesh, out } => {
            let cfg = mesh.config();
            let ball = BallSpec::new(dim, radius)?;
            let mu2 = ball.mu2()?;
            let grid = default_grid(mu2, cfg.c_grid_size);
            let mut records = Vec::new();
            for &c in &grid {
                records.push(neumann_flux::sweeps::SweepRecord {
                    c,
                    f_value: ball.f_value(c)?,
                    boundary_integral: ball.f_value(c)? / c,
                    boundary_min: ball.flux_profile(c)?.eval(radius),
                    residual: 0.0,
                    guard_band_hit: false,
                });
            }
            let id = format!("ball-{dim}d-r{radius}");
            write_text(&out, &format!("{id}-sweep.csv"), &sweep_csv(&id, &records, &cfg))?;
            let summary = serde_json::json!({
                "schema": "neumann-flux/ball-summary/v1",
                "config": cfg,
                "dim": dim,
                "radius": radius,
                "mu2": mu2,
                "isoperimetric_ratio": ball.isoperimetric_ratio(),
                "limit_at_zero": ball.f_value(1e-10)?,
                "limit_at_mu2": ball.limit_f_at_mu2()?,
            });
            write_json(&out, &format!("{id}-summary.json"), &summary)?;
            println!("{id}: mu2 = {mu2:.12}, limit at mu2 = {:.12}", ball.limit_f_at_mu2()?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Box { half_lengths, mesh, out } => {
            let cfg = mesh.config();
            let bx = BoxSpec::new(half_lengths)?;
            let mu2 = bx.mu2();
            let grid = default_grid(mu2, cfg.c_grid_size);
            let mut records = Vec::new();
            for &c in &grid {
                let sol = bx.flux_solution(c)?;
                records.push(neumann_flux::sweeps::SweepRecord {
                    c,
                    f_value: bx.f_value(c)?,
                    boundary_integral: bx.f_value(c)? / c,
                    boundary_min: sol.boundary_min(),
                    residual: 0.0,
                    guard_band_hit: false,
                });
            }
            let id = DomainSpec::Box { spec: bx.clone() }.id();
            write_text(&out, &format!("{id}-sweep.csv"), &sweep_csv(&id, &records, &cfg))?;
            let bundle = bx.sym_poly_bundle();
            let summary = serde_json::json!({
                "schema": "neumann-flux/box-summary/v1",
                "config": cfg,
                "half_lengths": bx.half_lengths(),
                "mu2": mu2,
                "isoperimetric_ratio": bx.isoperimetric_ratio(),
                "limit_at_zero": bx.f_value(1e-10)?,
                "limit_at_mu2": bx.limit_at_mu2(),
                "inequality_gap": bx.inequality_gap(),
                "sym_poly": { "sigma": bundle.sigma, "d": bundle.d, "e": bundle.e },
            });
            write_json(&out, &format!("{id}-summary.json"), &summary)?;
            println!("{id}: limit at mu2 = {:.12}, gap = {:.12}", bx.limit_at_mu2(), bx.inequality_gap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Triangle { side, mesh, out } => {
            let cfg = mesh.config();
            let tri = EquilateralSpec::new(side)?;
            let mu2 = tri.mu2();
            // the small-c expansion serves the lower half of the spectrum
            let grid: Vec<f64> = default_grid(mu2, cfg.c_grid_size)
                .into_iter()
                .filter(|&c| c < 0.45 * mu2)
                .collect();
            let mut records = Vec::new();
            for &c in &grid {
                let f = tri.f_small_c(c)?;
                records.push(neumann_flux::sweeps::SweepRecord {
                    c,
                    f_value: f,
                    boundary_integral: f / c,
                    boundary_min: f64::NAN,
                    residual: 0.0,
                    guard_band_hit: false,
                });
            }
            let id = format!("equilateral-{side}");
            write_text(&out, &format!("{id}-sweep.csv"), &sweep_csv(&id, &records, &cfg))?;
            let summary = serde_json::json!({
                "schema": "neumann-flux/triangle-summary/v1",
                "config": cfg,
                "side": side,
                "mu2": mu2,
                "isoperimetric_ratio": tri.isoperimetric_ratio(),
                "limit_at_zero": tri.f_small_c(1e-10)?,
                "f_at_mu2": tri.f_at_mu2(),
                "half_isoperimetric_ratio": 0.5 * tri.isoperimetric_ratio(),
                "exceeds_half_ratio": tri.f_at_mu2() > 0.5 * tri.isoperimetric_ratio(),
            });
            write_json(&out, &format!("{id}-summary.json"), &summary)?;
            println!("{id}: mu2 = {mu2:.12}, f at mu2 = {:.12}", tri.f_at_mu2());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sector { alpha, alpha0: want_alpha0, out } => {
            if want_alpha0 {
                let a0 = alpha0()?;
                let summary = serde_json::json!({
                    "schema": "neumann-flux/sector-alpha0/v1",
                    "alpha0": a0,
                });
                write_json(&out, "sector-alpha0.json", &summary)?;
                println!("alpha0 = {a0:.12}");
                return Ok(ExitCode::SUCCESS);
            }
            let alpha = alpha.ok_or_else(|| domain_args::BadArgs("pass --alpha <value> or --alpha0".to_string()))?;
            let sector = SectorSpec::new(alpha)?;
            let (mu2, parity) = sector.mu2()?;
            let (a, b) = radial_boundary_linearization()?;
            let summary = serde_json::json!({
                "schema": "neumann-flux/sector-summary/v1",
                "alpha": alpha,
                "mu2": mu2,
                "parity": parity,
                "boundary_integral_radial_mode": sector.boundary_integral_radial_mode()?,
                "linearization": { "constant": a, "slope": b },
                "trial_upper_bound": sector.trial_upper_bound()?,
            });
            write_json(&out, &format!("sector-{alpha}-summary.json"), &summary)?;
            println!("sector alpha={alpha}: mu2 = {mu2:.12} ({parity:?}), trial bound = {:.12}", sector.trial_upper_bound()?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { domain, mesh, out, export_mesh } => {
            let cfg = mesh.config();
            let spec = domain.to_spec()?;
            if let Some(path) = export_mesh {
                let lp = spec.boundary_loop()?;
                let m = triangulate(&lp)?.refine_to(cfg.target_nodes, cfg.node_cap);
                std::fs::write(&path, m.export_text())
                    .with_context(|| format!("writing mesh to {}", path.display()))?;
            }
            let cls = classify_domain(&spec, &cfg)?;
            let doc = serde_json::json!({
                "schema": "neumann-flux/classification/v1",
                "config": cfg,
                "classification": cls,
            });
            write_json(&out, &format!("{}-classification.json", spec.id()), &doc)?;
            println!(
                "{}: verdict={:?} mu2={:.9} kappa1={:.9} in_class_f={:?} m0={:?}",
                cls.domain_id, cls.verdict, cls.mu2, cls.kappa1, cls.in_class_f, cls.m0
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { domain, mesh, out } => {
            let cfg = mesh.config();
            let spec = domain.to_spec()?;
            let (records, backend) = sweep_f(&spec, &cfg)?;
            write_text(&out, &format!("{}-sweep.csv", spec.id()), &sweep_csv(&spec.id(), &records, &cfg))?;
            let solved = records.iter().filter(|r| r.f_value.is_finite()).count();
            println!("{}: {} points ({} solved) via {:?}", spec.id(), records.len(), solved, backend);
            Ok(ExitCode::SUCCESS)
        }
        Command::Observe { paper_table, mesh, out } => {
            let cfg = mesh.config();
            let report = observation_suite(&cfg)?;
            for item in &report.items {
                println!("[{:?}] {} — {}", item.status, item.id, item.title);
                if paper_table {
                    for line in &item.lines {
                        let mark = if line.pass { "pass" } else { "warn" };
                        match line.reference {
                            Some(r) => println!(
                                "    {mark:<4} {:<28} {:<46} {:+.9e} vs {:+.9e}",
                                line.domain_id, line.quantity, line.measured, r
                            ),
                            None => println!(
                                "    {mark:<4} {:<28} {:<46} {:+.9e}",
                                line.domain_id, line.quantity, line.measured
                            ),
                        }
                    }
                }
            }
            let doc = serde_json::json!({
                "schema": "neumann-flux/observations/v1",
                "config": cfg,
                "report": report,
            });
            write_json(&out, "observations.json", &doc)?;
            // a sector table accompanies the paper-table view
            if paper_table {
                let rows = sector_study(&[1.0, 1.1748, 1.25], &cfg)?;
                println!("sectors (alpha0 = {:.6}):", rows.alpha0);
                for r in rows.rows {
                    println!(
                        "    alpha={:<8} mu2={:<12.6} parity={:?} kappa1_fem={:<12.6} trial={:<12.6} strict_fem={}",
                        r.alpha, r.mu2, r.parity, r.kappa1_fem, r.trial_bound, r.strict_by_fem
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Accept { only, mesh } => {
            let cfg = mesh.config();
            let outcomes = acceptance::run_all(&cfg, only.as_deref())?;
            let mut all_pass = true;
            for o in &outcomes {
                print!("{}", o.render());
                all_pass &= o.pass;
            }
            let summary = outcomes
                .iter()
                .map(|o| format!("{}:{}", o.id, if o.pass { "PASS" } else { "FAIL" }))
                .collect::<Vec<_>>()
                .join(" ");
            println!("acceptance: {summary}");
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
