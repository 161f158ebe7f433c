//! The `fracchain` command line.
//!
//! Every subcommand resolves its options into a [`RunConfig`], writes it to
//! `<out>/run.json`, calls the library and writes the artifacts next to it.
//! `fracchain replay <out>/run.json` re-runs a manifest and reproduces the
//! same artifact files.
//!
//! Exit status: 0 success, 2 configuration or input error, 3 divergence,
//! 4 internal/numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::equilibria::{find_equilibria, write_equilibria_csv, EquilibriumKind};
use crate::error::{Error, Result};
use crate::fode::{convergence_study, ErrorNorm, FodeProblem, MemoryPolicy, DEFAULT_STEP};
use crate::model::{nondimensionalize, DimParams, State};
use crate::plot::lines_svg;
use crate::scan::{
    bifurcation_sweep, order_sweep, simulate, AttractorLabel, OmegaCheck, SimulationSpec, SweepResult, SweepSettings,
    SweptParam, DEFAULT_CLUSTER_TOL, DEFAULT_TRANSIENT_FRACTION,
};
use crate::specfun::mittag_leffler;
use crate::stability::{boundedness_check, global_stability_check, lipschitz_constant, stability_report};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_DIVERGENCE: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

pub const MANIFEST_NAME: &str = "run.json";

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Divergence { .. } => EXIT_DIVERGENCE,
        Error::Config { .. }
        | Error::Parse { .. }
        | Error::Io { .. }
        | Error::Domain { .. }
        | Error::NoInteriorEquilibrium => EXIT_CONFIG,
        Error::Convergence { .. } | Error::DegenerateFit(_) => EXIT_INTERNAL,
    }
}

#[derive(Parser, Debug)]
#[command(name = "fracchain", version, about = "Caputo fractional food-chain analysis")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Integrate the dimensional system and monitor its invariants.
    Simulate {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List the feasible equilibria with existence conditions.
    Equilibria {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Local stability of every equilibrium at one fractional order.
    Classify {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 1.0)]
        order: f64,
    },
    /// Global-stability conditions at the interior equilibrium.
    GlobalCheck {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Ultimate-boundedness condition, absorbing region and Lipschitz constant.
    BoundsCheck {
        #[command(flatten)]
        io: IoArgs,
        /// Cube half-width for the Lipschitz constant.
        #[arg(long)]
        m1: Option<f64>,
    },
    /// Attractor characterization along a parameter sweep.
    Bifurcate {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        sweep: SweptParam,
        /// `lo:hi`
        #[arg(long, value_parser = parse_range)]
        range: (f64, f64),
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
    },
    /// Attractor characterization for a list of fractional orders.
    OrderSweep {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated orders, e.g. `1,0.95,0.85`.
        #[arg(long, value_parser = parse_list)]
        orders: ::std::vec::Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
    },
    /// Observed convergence order on D^m x = -x, x(0) = 1.
    Convergence {
        #[arg(long, default_value_t = 1.0)]
        order: f64,
        #[arg(long, default_value_t = 5.0)]
        tfinal: f64,
        /// Comma-separated halving step sizes.
        #[arg(long, value_parser = parse_list, default_value = "0.04,0.02,0.01")]
        steps: ::std::vec::Vec<f64>,
        /// Error measured at the endpoint or over the whole grid.
        #[arg(long, value_enum, default_value_t = NormArg::Endpoint)]
        norm: NormArg,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-run a `run.json` manifest.
    Replay {
        manifest: PathBuf,
        /// Output directory (defaults to the one recorded in the manifest).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum NormArg {
    Endpoint,
    Grid,
}

impl From<NormArg> for ErrorNorm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Endpoint => ErrorNorm::Endpoint,
            NormArg::Grid => ErrorNorm::Grid,
        }
    }
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Parameter file with one `name = value` per line.
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 1.0)]
    order: f64,
    #[arg(long, default_value_t = crate::scan::DEFAULT_T_FINAL)]
    tfinal: f64,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    /// Initial state `x,y,z` (dimensional).
    #[arg(long, value_parser = parse_state, default_value = "1.2,1.2,1.2")]
    init: State,
    #[arg(long, default_value_t = DEFAULT_TRANSIENT_FRACTION)]
    transient: f64,
    /// Keep only this much history (time units) in the memory sums.
    #[arg(long)]
    window: Option<f64>,
}

impl RunArgs {
    fn memory(&self) -> MemoryPolicy {
        match self.window {
            Some(window_length) => MemoryPolicy::Truncated { window_length },
            None => MemoryPolicy::Full,
        }
    }

    fn sweep_settings(&self, cluster_tol: f64) -> SweepSettings {
        SweepSettings {
            order: self.order,
            initial_state: self.init,
            t_final: self.tfinal,
            step: self.step,
            transient_fraction: self.transient,
            cluster_tol,
            coordinate: 0,
            memory: self.memory(),
        }
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{}` is not a number", v.trim()))
        })
        .collect()
}

fn parse_state(s: &str) -> std::result::Result<State, String> {
    match parse_list(s)?.as_slice() {
        &[x, y, z] => Ok(State::new(x, y, z)),
        v => Err(format!("expected three comma-separated values, got {}", v.len())),
    }
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{}` is not a number", v.trim()))
    };
    Ok((num(lo)?, num(hi)?))
}

/// A fully resolved subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Task {
    Simulate {
        order: f64,
        t_final: f64,
        step: f64,
        initial_state: State,
        transient_fraction: f64,
        memory: MemoryPolicy,
    },
    Equilibria,
    Classify {
        order: f64,
    },
    GlobalCheck,
    BoundsCheck {
        m1: Option<f64>,
    },
    Bifurcate {
        swept: SweptParam,
        range: (f64, f64),
        points: usize,
        settings: SweepSettings,
    },
    OrderSweep {
        orders: Vec<f64>,
        settings: SweepSettings,
    },
    Convergence {
        order: f64,
        t_final: f64,
        steps: Vec<f64>,
        norm: ErrorNorm,
    },
}

/// Everything needed to reproduce a run; serialized as `run.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tool_version: String,
    pub params_file: Option<PathBuf>,
    /// Parameter values as read; replays use these, not the file.
    pub params: Option<DimParams>,
    pub out_dir: PathBuf,
    pub task: Task,
}

impl RunConfig {
    pub fn from_manifest(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::config("manifest", format!("{}: {e}", path.display())))
    }

    fn params(&self) -> Result<&DimParams> {
        self.params
            .as_ref()
            .ok_or_else(|| Error::config("params", "this subcommand needs a parameter file"))
    }
}

/// Files written and a short human-readable summary.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub artifacts: Vec<PathBuf>,
    pub summary: String,
}

struct Writer {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Writer {
    fn file(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn csv(&mut self, name: &str, fill: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        fill(&mut buf).map_err(|e| Error::io(self.dir.join(name), e))?;
        self.file(name, buf)
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::config(name, e.to_string()))?;
        text.push('\n');
        self.file(name, text)
    }
}

fn resolve(command: CliCommand) -> Result<RunConfig> {
    let with_params = |io: IoArgs, task: Task| -> Result<RunConfig> {
        let params = DimParams::from_file(&io.params)?;
        Ok(RunConfig {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            params_file: Some(io.params),
            params: Some(params),
            out_dir: io.out,
            task,
        })
    };
    match command {
        CliCommand::Simulate { io, run } => with_params(
            io,
            Task::Simulate {
                order: run.order,
                t_final: run.tfinal,
                step: run.step,
                initial_state: run.init,
                transient_fraction: run.transient,
                memory: run.memory(),
            },
        ),
        CliCommand::Equilibria { io } => with_params(io, Task::Equilibria),
        CliCommand::Classify { io, order } => with_params(io, Task::Classify { order }),
        CliCommand::GlobalCheck { io } => with_params(io, Task::GlobalCheck),
        CliCommand::BoundsCheck { io, m1 } => with_params(io, Task::BoundsCheck { m1 }),
        CliCommand::Bifurcate {
            io,
            run,
            sweep,
            range,
            points,
            cluster_tol,
        } => with_params(
            io,
            Task::Bifurcate {
                swept: sweep,
                range,
                points,
                settings: run.sweep_settings(cluster_tol),
            },
        ),
        CliCommand::OrderSweep {
            io,
            run,
            orders,
            cluster_tol,
        } => with_params(
            io,
            Task::OrderSweep {
                orders,
                settings: run.sweep_settings(cluster_tol),
            },
        ),
        CliCommand::Convergence {
            order,
            tfinal,
            steps,
            norm,
            out,
        } => Ok(RunConfig {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            params_file: None,
            params: None,
            out_dir: out,
            task: Task::Convergence {
                order,
                t_final: tfinal,
                steps,
                norm: norm.into(),
            },
        }),
        CliCommand::Replay { manifest, out } => {
            let mut cfg = RunConfig::from_manifest(&manifest)?;
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            Ok(cfg)
        }
    }
}

/// Executes a resolved configuration: writes the manifest, then the artifacts.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let mut w = Writer {
        dir: cfg.out_dir.clone(),
        written: vec![],
    };
    w.json(MANIFEST_NAME, cfg)?;
    let mut summary = String::new();

    match &cfg.task {
        Task::Simulate {
            order,
            t_final,
            step,
            initial_state,
            transient_fraction,
            memory,
        } => {
            let spec = SimulationSpec {
                params: *cfg.params()?,
                order: *order,
                initial_state: *initial_state,
                t_final: *t_final,
                step: *step,
                transient_fraction: *transient_fraction,
                memory: *memory,
            };
            let sim = simulate(&spec)?;
            let traj = &sim.trajectory;
            w.csv("trajectory.csv", |b| traj.write_csv(b))?;
            let series: Vec<(&str, Vec<f64>)> = ["X", "Y", "Z"]
                .iter()
                .enumerate()
                .map(|(c, n)| (*n, traj.component(c).collect()))
                .collect();
            w.file(
                "trajectory.svg",
                lines_svg(&traj.times, &series, &format!("m = {order}"), "t"),
            )?;
            w.json("monitor.json", &sim.monitor)?;
            let last = State::from_slice(traj.last_state());
            let _ = writeln!(summary, "steps: {}", traj.steps_accepted);
            let _ = writeln!(summary, "final state (t = {}): {last}", traj.times[traj.len() - 1]);
            let _ = writeln!(summary, "negative entries: {}", sim.monitor.negativity.len());
            let _ = match &sim.monitor.omega {
                OmegaCheck::NotApplicable => writeln!(summary, "absorbing region: not applicable"),
                OmegaCheck::Checked(v) => writeln!(summary, "absorbing region exits: {}", v.len()),
            };
        }
        Task::Equilibria => {
            let p = cfg.params()?;
            let q = nondimensionalize(p);
            let eqs = find_equilibria(&q, Some(p));
            w.csv("equilibria.csv", |b| write_equilibria_csv(b, &eqs))?;
            for e in &eqs {
                let _ = write!(summary, "{:<9} nondim {}", e.kind.as_str(), e.coords_nondim);
                if let Some(d) = e.coords_dim {
                    let _ = write!(summary, "  dim {d}");
                }
                let _ = writeln!(summary);
                for c in &e.existence_report {
                    let _ = writeln!(
                        summary,
                        "    {} = {:.4} ({})",
                        c.name,
                        c.value,
                        if c.satisfied { "holds" } else { "fails" }
                    );
                }
            }
            w.file("equilibria.txt", &summary)?;
        }
        Task::Classify { order } => {
            let p = cfg.params()?;
            let q = nondimensionalize(p);
            let reports: Vec<_> = find_equilibria(&q, Some(p))
                .iter()
                .map(|e| stability_report(&q, e, *order))
                .collect();
            for r in &reports {
                summary.push_str(&r.to_text());
                summary.push('\n');
            }
            if !reports.iter().any(|r| r.kind == EquilibriumKind::Interior) {
                summary.push_str("no feasible interior equilibrium\n");
            }
            w.file("stability.txt", &summary)?;
            w.csv("stability.csv", |b| {
                use std::io::Write;
                writeln!(b, "equilibrium,quantity,value")?;
                for (i, r) in reports.iter().enumerate() {
                    for (k, v) in r.csv_rows() {
                        writeln!(b, "{}:{},{k},{v}", i + 1, r.kind.as_str())?;
                    }
                }
                Ok(())
            })?;
        }
        Task::GlobalCheck => {
            let g = global_stability_check(cfg.params()?)?;
            w.json("global.json", &g)?;
            let _ = writeln!(summary, "interior equilibrium (nondim): {}", g.equilibrium);
            for (name, v) in [
                ("condition 1", g.cond1),
                ("condition 2", g.cond2),
                ("condition 3", g.cond3),
            ] {
                let _ = writeln!(summary, "{name}: {v:.4} ({})", if v < 0.0 { "holds" } else { "fails" });
            }
            let _ = writeln!(summary, "alpha: {:.4}", g.alpha);
            let _ = writeln!(summary, "globally asymptotically stable: {}", g.all_satisfied);
        }
        Task::BoundsCheck { m1 } => {
            let p = cfg.params()?;
            let b = boundedness_check(p);
            let lipschitz = m1.map(|m| lipschitz_constant(&nondimensionalize(p), m)).transpose()?;
            #[derive(Serialize)]
            struct Bounds<'a> {
                #[serde(flatten)]
                report: &'a crate::stability::BoundednessReport,
                m1: Option<f64>,
                lipschitz: Option<f64>,
            }
            w.json(
                "bounds.json",
                &Bounds {
                    report: &b,
                    m1: *m1,
                    lipschitz,
                },
            )?;
            let _ = writeln!(
                summary,
                "beta + beta/(4b) + r = {:.4} {} q/p = {:.4}: {}",
                b.lhs,
                if b.satisfied { "<" } else { ">=" },
                b.rhs,
                if b.satisfied { "bounded" } else { "condition fails" }
            );
            if let (Some(m), Some(top)) = (b.m_bound, b.omega_bounds.2) {
                let _ = writeln!(
                    summary,
                    "M = {m:.6}; region: x <= {:.4}, x + y/beta <= {:.4}, x + y/beta + alpha z <= {top:.4}",
                    b.omega_bounds.0, b.omega_bounds.1
                );
            }
            if let (Some(m), Some(l)) = (m1, lipschitz) {
                let _ = writeln!(summary, "Lipschitz constant on max|.| <= {m}: {l:.6}");
            }
        }
        Task::Bifurcate {
            swept,
            range,
            points,
            settings,
        } => {
            let r = bifurcation_sweep(cfg.params()?, *swept, *range, *points, settings)?;
            write_sweep(&mut w, "sweep", &r, &mut summary)?;
        }
        Task::OrderSweep { orders, settings } => {
            let r = order_sweep(cfg.params()?, orders, settings)?;
            write_sweep(&mut w, "order_sweep", &r, &mut summary)?;
        }
        Task::Convergence {
            order,
            t_final,
            steps,
            norm,
        } => {
            let m = *order;
            let problem = FodeProblem::new(
                m,
                vec![1.0],
                0.0,
                *t_final,
                steps[0],
                |_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = -y[0],
            );
            // reference errors surface after the solve; collect the first one
            let oracle_error = std::cell::RefCell::new(None);
            let study = convergence_study(
                &problem,
                |t| match mittag_leffler(m, -t.powf(m)) {
                    Ok(v) => vec![v],
                    Err(e) => {
                        oracle_error.borrow_mut().get_or_insert(e);
                        vec![f64::NAN]
                    }
                },
                steps,
                *norm,
            );
            if let Some(e) = oracle_error.into_inner() {
                return Err(e);
            }
            let study = study?;
            w.csv("convergence.csv", |b| {
                use std::io::Write;
                writeln!(b, "h,error")?;
                for (h, e) in study.steps.iter().zip(&study.errors) {
                    writeln!(b, "{h:.12e},{e:.12e}")?;
                }
                Ok(())
            })?;
            w.json("convergence.json", &study)?;
            for (h, e) in study.steps.iter().zip(&study.errors) {
                let _ = writeln!(summary, "h = {h}: error {e:.3e}");
            }
            let _ = writeln!(summary, "observed order: {:.4}", study.slope);
        }
    }

    Ok(RunOutcome {
        artifacts: w.written,
        summary,
    })
}

fn write_sweep(w: &mut Writer, stem: &str, r: &SweepResult, summary: &mut String) -> Result<()> {
    w.csv(&format!("{stem}.csv"), |b| r.write_csv(b))?;
    w.file(&format!("{stem}.svg"), r.to_svg())?;
    for rec in &r.records {
        let label = match (&rec.label, &rec.error) {
            (Some(l), _) => l.to_string(),
            (None, Some(e)) => format!("error: {e}"),
            (None, None) => String::new(),
        };
        let _ = writeln!(summary, "{} = {:.6}: {label}", r.swept_name, rec.value);
    }
    let fixed = r.count(|l| l == AttractorLabel::FixedPoint);
    let periodic = r.count(|l| matches!(l, AttractorLabel::Periodic(_)));
    let aperiodic = r.count(|l| l == AttractorLabel::Aperiodic);
    let failed = r.records.iter().filter(|x| x.error.is_some()).count();
    let _ = writeln!(
        summary,
        "fixed-point {fixed}, periodic {periodic}, aperiodic {aperiodic}, failed {failed}"
    );
    for n in &r.notes {
        let _ = writeln!(summary, "note: {n}");
    }
    Ok(())
}

/// Parses arguments, runs, prints the summary; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    match resolve(cli.command).and_then(|cfg| run(&cfg)) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
