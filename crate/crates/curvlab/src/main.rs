use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use curvlab::config::{
    ConditionExpect, Experiment, ExperimentConfig, Operation, OutputConfig, Pair, Resolution, SolitonExpect,
    SpaceConfig, SurfaceConfig,
};
use curvlab::experiments::run_config;
use curvlab::geometry::init_threads;
use curvlab::plot::{render_svg, select};
use curvlab::report::Report;
use curvlab::suite::paper_suite;

/// Numerical verification of integral identities and rigidity statements
/// for hypersurfaces in warped products.
#[derive(Parser)]
#[command(name = "curvlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment of a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Plot a profile table of a report as SVG.
    Plot {
        /// report.json to read.
        #[arg(long)]
        report: PathBuf,
        /// Profile quantity, e.g. H1, h4, brendle_gap.
        #[arg(long)]
        quantity: String,
        /// Experiment owning the table, when the quantity is ambiguous.
        #[arg(long)]
        experiment: Option<String>,
        /// Output file; defaults to `<quantity>.svg` next to the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the ambient conditions H1-H4 on a radial grid.
    CheckConditions {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 100)]
        grid_points: usize,
        /// Upper end of the grid for unbounded spaces.
        #[arg(long)]
        grid_max: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classical integral identity in Euclidean space.
    VerifyHm {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        orders: Vec<usize>,
    },
    /// Weighted integral identity in a warped product.
    VerifyWeightedHm {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        orders: Vec<usize>,
        /// Radial weight as an expression in r.
        #[arg(long, default_value = "1")]
        phi: String,
    },
    /// Gap of the Heintze-Karcher-type inequality.
    Brendle {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Radial profiles of H1 and H2/H1 on a Euclidean torus.
    TorusCounterexample {
        #[arg(long = "R1", default_value_t = 2.0)]
        r1: f64,
        #[arg(long = "R2", default_value_t = 0.5)]
        r2: f64,
        /// Ambient dimension, 3 or 4.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        spread_tol: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Residual of the curvature-ratio soliton equation.
    SolitonCheck {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Weighted pairs `i:j:a`, comma separated; uniform over all pairs if absent.
        #[arg(long, value_delimiter = ',')]
        pairs: Vec<String>,
        /// Fixed speed; fitted by least squares if absent.
        #[arg(long)]
        mu: Option<f64>,
        /// `soliton` or `not_soliton`; without it the residual is reported only.
        #[arg(long)]
        expect: Option<String>,
        /// Smallest sup residual accepted for `not_soliton`.
        #[arg(long)]
        min_residual: Option<f64>,
    },
    /// Randomized checks of the symmetric-function layer.
    NewtonProps {
        #[arg(long, default_value_t = 10_000)]
        vectors: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        max_m: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the built-in verification battery.
    PaperSuite {
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Directory for report.json and CSV tables.
    #[arg(long, default_value = "curvlab-out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Leave the timestamp out of the report.
    #[arg(long)]
    omit_timestamp: bool,
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// euclidean, hyperbolic, hemisphere, schwarzschild, reissner_nordstrom.
    #[arg(long, default_value = "euclidean")]
    space: String,
    /// Ambient dimension.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Mass parameter.
    #[arg(long)]
    m: Option<f64>,
    /// Charge parameter.
    #[arg(long)]
    q: Option<f64>,
    /// Integration extent for ODE-defined spaces.
    #[arg(long)]
    extent: Option<f64>,
}

impl SpaceArgs {
    fn config(&self) -> SpaceConfig {
        SpaceConfig { kind: self.space.clone(), n: self.n, mass: self.m, charge: self.q, extent: self.extent }
    }
}

#[derive(Args, Clone)]
struct SurfaceArgs {
    /// slice, sphere, torus3, torus4, ellipsoid, radial_graph.
    #[arg(long, default_value = "sphere")]
    surface: String,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    /// Sphere center offset along the last axis.
    #[arg(long, default_value_t = 0.0)]
    offset: f64,
    #[arg(long = "R1")]
    r1: Option<f64>,
    #[arg(long = "R2")]
    r2: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    semi_axes: Vec<f64>,
    /// Radial graph in the sphere variables z, theta, x1..xn.
    #[arg(long)]
    rho: Option<String>,
}

impl SurfaceArgs {
    fn config(&self) -> Result<SurfaceConfig> {
        let need = |v: Option<f64>, flag: &str| v.with_context(|| format!("--surface {} needs {flag}", self.surface));
        Ok(match self.surface.as_str() {
            "slice" => SurfaceConfig::Slice { r0: need(self.r0, "--r0")? },
            "sphere" => SurfaceConfig::Sphere { offset: self.offset, radius: self.radius.unwrap_or(1.0) },
            "torus3" => SurfaceConfig::Torus3 { r1: need(self.r1, "--R1")?, r2: need(self.r2, "--R2")? },
            "torus4" => SurfaceConfig::Torus4 { r1: need(self.r1, "--R1")?, r2: need(self.r2, "--R2")? },
            "ellipsoid" => {
                if self.semi_axes.is_empty() {
                    bail!("--surface ellipsoid needs --semi-axes");
                }
                SurfaceConfig::Ellipsoid { semi_axes: self.semi_axes.clone() }
            }
            "radial_graph" => {
                SurfaceConfig::RadialGraph { rho: self.rho.clone().context("--surface radial_graph needs --rho")? }
            }
            other => bail!("unknown surface family {other:?}"),
        })
    }
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Grid resolution (fine grid in convergence mode).
    #[arg(long)]
    resolution: Option<usize>,
    /// Also run at this coarser resolution and report the convergence order.
    #[arg(long)]
    coarse: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Derive curvatures from the immersion engine even when closed forms exist.
    #[arg(long)]
    engine: bool,
    #[command(flatten)]
    out: OutArgs,
}

impl CommonArgs {
    fn resolution(&self, default: usize) -> Resolution {
        let fine = self.resolution.unwrap_or(default);
        match self.coarse {
            Some(coarse) => Resolution::Pair { coarse, fine },
            None => Resolution::Single(fine),
        }
    }
}

fn single(id: &str, space: Option<SpaceConfig>, tol: Option<f64>, engine: bool, op: Operation) -> ExperimentConfig {
    ExperimentConfig {
        id: id.to_string(),
        seed: 0,
        space,
        experiments: vec![Experiment { name: Some(id.to_string()), space: None, tol, engine, operation: op }],
        output: OutputConfig::default(),
    }
}

fn parse_pairs(items: &[String], m: usize) -> Result<Vec<Pair>> {
    if items.is_empty() {
        let all: Vec<(usize, usize)> = (0..=m).flat_map(|i| (i + 1..=m).map(move |j| (i, j))).collect();
        let a = 1.0 / all.len() as f64;
        return Ok(all.into_iter().map(|(i, j)| Pair(i, j, a)).collect());
    }
    items
        .iter()
        .map(|s| {
            let parts: Vec<&str> = s.split(':').collect();
            let [i, j, a] = parts.as_slice() else { bail!("pair {s:?} is not of the form i:j:a") };
            Ok(Pair(i.trim().parse()?, j.trim().parse()?, a.trim().parse()?))
        })
        .collect::<Result<_>>()
        .context("parsing --pairs")
}

enum Failure {
    Usage(anyhow::Error),
    Checks,
}

fn execute(mut cfg: ExperimentConfig, out: &OutArgs) -> Result<(), Failure> {
    if let Some(seed) = out.seed {
        cfg.seed = seed;
    }
    cfg.validate().map_err(Failure::Usage)?;
    let mut report = run_config(&cfg).map_err(Failure::Usage)?;
    if !(out.omit_timestamp || cfg.output.omit_timestamp) {
        report.stamp();
    }
    let dir = cfg.output.dir.as_deref().map(Path::new).unwrap_or(&out.out);
    let written = report.write(dir).map_err(Failure::Usage)?;
    // write errors (a closed pipe) must not change the exit status
    let mut stdout = std::io::stdout().lock();
    for c in &report.checks {
        let _ = writeln!(stdout, "{:<8} {:<32} {}", c.verdict.label(), c.experiment, c.name);
    }
    let s = &report.summary;
    let _ = writeln!(
        stdout,
        "{} pass, {} fail, {} skipped, {} violated, {} info",
        s.pass, s.fail, s.skipped, s.violated, s.info
    );
    for p in written {
        let _ = writeln!(stdout, "wrote {}", p.display());
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let usage = Failure::Usage;
    match cli.command {
        Command::Run { config, out } => execute(ExperimentConfig::load(&config).map_err(usage)?, &out),
        Command::Plot { report, quantity, experiment, out } => {
            let rep = Report::load(&report).map_err(usage)?;
            let table = select(&rep, &quantity, experiment.as_deref()).map_err(usage)?;
            let svg = render_svg(table).map_err(usage)?;
            let path = out.unwrap_or_else(|| {
                report
                    .parent()
                    .unwrap_or(Path::new("."))
                    .join(format!("{}.svg", curvlab::report::file_stem(&quantity)))
            });
            std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display())).map_err(usage)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::CheckConditions { space, grid_points, grid_max, common } => {
            let op = Operation::CheckConditions { grid_points, grid_max, expect: ConditionExpect::default(), ricci: None };
            execute(single("check-conditions", Some(space.config()), common.tol, false, op), &common.out)
        }
        Command::VerifyHm { space, surface, common, orders } => {
            let op = Operation::VerifyHm { surface: surface.config().map_err(usage)?, resolution: common.resolution(64), orders };
            execute(single("verify-hm", Some(space.config()), common.tol, common.engine, op), &common.out)
        }
        Command::VerifyWeightedHm { space, surface, common, orders, phi } => {
            let op = Operation::VerifyWeightedHm {
                surface: surface.config().map_err(usage)?,
                resolution: common.resolution(64),
                orders,
                phi,
            };
            execute(single("verify-weighted-hm", Some(space.config()), common.tol, common.engine, op), &common.out)
        }
        Command::Brendle { space, surface, common } => {
            let op = Operation::Brendle { surface: surface.config().map_err(usage)?, resolution: common.resolution(64), expect: None };
            execute(single("brendle", Some(space.config()), common.tol, common.engine, op), &common.out)
        }
        Command::TorusCounterexample { r1, r2, dim, spread_tol, common } => {
            let (surface, default_res) = match dim {
                3 => (SurfaceConfig::Torus3 { r1, r2 }, 256),
                4 => (SurfaceConfig::Torus4 { r1, r2 }, 32),
                d => return Err(usage(anyhow::anyhow!("--dim must be 3 or 4, got {d}"))),
            };
            let space = SpaceConfig { kind: "euclidean".into(), n: dim, mass: None, charge: None, extent: None };
            let op = Operation::TorusCounterexample { surface, resolution: common.resolution(default_res), spread_tol };
            let engine = common.engine || dim == 4;
            execute(single("torus-counterexample", Some(space), common.tol, engine, op), &common.out)
        }
        Command::SolitonCheck { space, surface, common, pairs, mu, expect, min_residual } => {
            let pairs = parse_pairs(&pairs, space.n.saturating_sub(1)).map_err(usage)?;
            let expect = match expect.as_deref() {
                None => None,
                Some("soliton") => Some(SolitonExpect::Soliton),
                Some("not_soliton") => Some(SolitonExpect::NotSoliton),
                Some(other) => return Err(usage(anyhow::anyhow!("unknown --expect {other:?}"))),
            };
            let op = Operation::SolitonCheck {
                surface: surface.config().map_err(usage)?,
                resolution: common.resolution(32),
                pairs,
                mu,
                expect,
                min_residual,
            };
            execute(single("soliton-check", Some(space.config()), common.tol, common.engine, op), &common.out)
        }
        Command::NewtonProps { vectors, samples, max_m, out } => {
            let op = Operation::NewtonProps { oracle_vectors: vectors, garding_samples: samples, max_m };
            execute(single("newton-props", None, None, false, op), &out)
        }
        Command::PaperSuite { out } => execute(paper_suite(None).map_err(usage)?, &out),
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
