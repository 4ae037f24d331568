use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use raman_ctrl_cli::config::{EffectiveConfig, InitialState, RunConfig, Scheme};
use raman_ctrl_cli::run::{
    cmd_evolve, cmd_robustness, cmd_scan, cmd_stirap_optimize, cmd_two_qubit, parse_complex,
    scan_csv, to_json_pretty, write_file,
};
use raman_ctrl_cli::CliError;

/// Three-level stimulated Raman transition control toolkit.
#[derive(Parser)]
#[command(name = "raman-ctrl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the run-style subcommands; each overrides the matching
/// config-file field.
#[derive(Args, Default)]
struct RunFlags {
    /// JSON config file mirroring these flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Control scheme
    #[arg(long, value_enum)]
    scheme: Option<Scheme>,
    /// Detuning in units of the coupling norm, Δ/Ω
    #[arg(long)]
    delta_ratio: Option<f64>,
    /// Coupling norm Ω in angular frequency (default 2π)
    #[arg(long)]
    omega: Option<f64>,
    /// Rotation angle ϑ: a float or pi token such as `pi`, `pi/2`, `2pi`
    #[arg(long, value_parser = parse_angle_arg)]
    theta: Option<f64>,
    /// Relative phase ξ of Ω₂ against Ω₁ (float or pi token)
    #[arg(long, value_parser = parse_angle_arg)]
    xi: Option<f64>,
    /// Initial state
    #[arg(long, value_enum)]
    initial: Option<InitialState>,
    /// Decay rate γ of the intermediate state (Lindblad evolution when > 0)
    #[arg(long)]
    gamma: Option<f64>,
    /// Static amplitude error δΩ (absolute angular frequency)
    #[arg(long)]
    delta_omega: Option<f64>,
    /// Static detuning error δΔ (absolute angular frequency)
    #[arg(long)]
    delta_delta: Option<f64>,
    /// STIRAP pulse width σ
    #[arg(long)]
    sigma: Option<f64>,
    /// STIRAP pulse separation t_m
    #[arg(long)]
    tm: Option<f64>,
    /// STIRAP total time T
    #[arg(long)]
    total_time: Option<f64>,
    /// Samples per STIRAP envelope
    #[arg(long)]
    n_samples: Option<usize>,
    /// Integrator step override
    #[arg(long)]
    dt: Option<f64>,
    /// Steps between recorded points
    #[arg(long)]
    record_stride: Option<usize>,
    /// Generator seed recorded in outputs
    #[arg(long)]
    seed: Option<u64>,
    /// Trajectory/grid CSV output path
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Summary JSON output path (stdout when omitted)
    #[arg(long)]
    out_json: Option<PathBuf>,
}

fn parse_angle_arg(s: &str) -> Result<f64, String> {
    raman_ctrl::parse::parse_angle(s).map_err(|e| e.to_string())
}

impl RunFlags {
    fn resolve(self) -> Result<(EffectiveConfig, Option<PathBuf>, Option<PathBuf>), CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path).map_err(CliError::Config)?,
            None => RunConfig::default(),
        };
        cfg = cfg.merged_with(RunConfig {
            scheme: self.scheme,
            delta_ratio: self.delta_ratio,
            omega: self.omega,
            theta: self.theta,
            xi: self.xi,
            initial: self.initial,
            gamma: self.gamma,
            delta_omega: self.delta_omega,
            delta_delta: self.delta_delta,
            sigma: self.sigma,
            t_m: self.tm,
            total_time: self.total_time,
            n_samples: self.n_samples,
            dt: self.dt,
            record_stride: self.record_stride,
            seed: self.seed,
            out_csv: self.out_csv,
            out_json: self.out_json,
        });
        let out_csv = cfg.out_csv.clone();
        let out_json = cfg.out_json.clone();
        let effective = EffectiveConfig::resolve(&cfg).map_err(CliError::Config)?;
        Ok((effective, out_csv, out_json))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one schedule and emit the trajectory CSV plus a summary JSON
    Evolve(RunFlags),
    /// Sweep Δ/Ω at fixed ϑ, reporting fidelities and leakage per point
    Scan {
        #[command(flatten)]
        flags: RunFlags,
        /// Sweep start (Δ/Ω)
        #[arg(long, default_value_t = 1.0)]
        delta_ratio_min: f64,
        /// Sweep end (Δ/Ω)
        #[arg(long, default_value_t = 10.0)]
        delta_ratio_max: f64,
        /// Points in the sweep
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// State-averaged fidelity over a static-error grid
    Robustness {
        #[command(flatten)]
        flags: RunFlags,
        /// Half-width of both error axes as a fraction of Ω
        #[arg(long, default_value_t = 0.1)]
        err_range: f64,
        /// Points per error axis
        #[arg(long, default_value_t = 41)]
        err_points: usize,
        /// Haar samples per cell
        #[arg(long, default_value_t = 2048)]
        haar_samples: usize,
    },
    /// Search STIRAP pulse parameters (σ, t_m) for maximal transfer fidelity
    StirapOptimize {
        #[command(flatten)]
        flags: RunFlags,
        /// Simplex restarts from the best coarse-grid cells
        #[arg(long, default_value_t = 5)]
        n_restarts: usize,
    },
    /// Synthesize the cavity-mediated two-qubit gate
    TwoQubit {
        /// Coupling g₁ as `re` or `re,im`
        #[arg(long)]
        g1: String,
        /// Coupling g₂ as `re` or `re,im`
        #[arg(long)]
        g2: String,
        /// Common detuning Δ (absolute angular frequency)
        #[arg(long)]
        delta: f64,
        /// Rotation angle ϑ (float or pi token)
        #[arg(long, value_parser = parse_angle_arg, default_value = "pi")]
        theta: f64,
        /// Scheme used inside the single-excitation subspace
        #[arg(long, value_enum, default_value_t = Scheme::Ps)]
        scheme: Scheme,
        /// Gate JSON output path (stdout when omitted)
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
    /// Emit the dataset directory for one figure
    Reproduce {
        /// Figure id: fig2, fig3, fig4, fig5, or fig6
        figure: String,
        /// Output directory root
        #[arg(long, default_value = "fig_data")]
        out_dir: PathBuf,
        /// Monte Carlo angle samples per cell (fig6)
        #[arg(long, default_value_t = 256)]
        mc_samples: usize,
    },
}

fn emit_json(doc: String, out_json: Option<&PathBuf>) -> Result<(), CliError> {
    match out_json {
        Some(path) => write_file(path, &doc),
        None => {
            println!("{doc}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Evolve(flags) => {
            let (cfg, out_csv, out_json) = flags.resolve()?;
            let summary = cmd_evolve(&cfg, out_csv.as_deref())?;
            emit_json(to_json_pretty(&summary), out_json.as_ref())
        }
        Command::Scan { flags, delta_ratio_min, delta_ratio_max, points } => {
            let (cfg, out_csv, out_json) = flags.resolve()?;
            let summary = cmd_scan(&cfg, delta_ratio_min, delta_ratio_max, points)?;
            if let Some(path) = out_csv {
                write_file(&path, &scan_csv(&summary))?;
            }
            emit_json(to_json_pretty(&summary), out_json.as_ref())
        }
        Command::Robustness { flags, err_range, err_points, haar_samples } => {
            let (cfg, out_csv, out_json) = flags.resolve()?;
            let summary = cmd_robustness(&cfg, err_range, err_points, haar_samples)?;
            if let Some(path) = out_csv {
                write_file(&path, &summary.grid.to_csv_string())?;
            }
            emit_json(to_json_pretty(&summary), out_json.as_ref())
        }
        Command::StirapOptimize { mut flags, n_restarts } => {
            // scheme is implied; accept configs that leave it unset
            if flags.scheme.is_none() {
                flags.scheme = Some(Scheme::Stirap);
            }
            let (cfg, _, out_json) = flags.resolve()?;
            let summary = cmd_stirap_optimize(&cfg, n_restarts)?;
            emit_json(to_json_pretty(&summary), out_json.as_ref())
        }
        Command::TwoQubit { g1, g2, delta, theta, scheme, out_json } => {
            let Some(kind) = scheme.kind() else {
                return Err(CliError::Config("two-qubit gates use the ae or ps scheme".into()));
            };
            let summary =
                cmd_two_qubit(parse_complex(&g1)?, parse_complex(&g2)?, delta, theta, kind)?;
            emit_json(to_json_pretty(&summary), out_json.as_ref())
        }
        Command::Reproduce { figure, out_dir, mc_samples } => {
            let dir = raman_ctrl_cli::reproduce::reproduce(&figure, &out_dir, mc_samples)?;
            eprintln!("wrote {}", dir.display());
            Ok(())
        }
    }
}

fn main() {
    // worker cap; scan/grid cells parallelize through rayon
    if let Ok(threads) = std::env::var("RAMAN_CTRL_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
