//! `rogon` — closed-form rogue-wave fields for the nonlinear option-pricing
//! model, spectral PDE certification, split-step propagation, the
//! modulation-instability scenario, and the linear Black–Scholes baseline,
//! all driven by one config file and exported as deterministic artifacts.
//!
//! Exit codes: `0` success, `1` rejected input (config, flags, file I/O),
//! `2` numerical failure (blow-up, non-finite data, tolerance breach).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rogon::config::{ScenarioConfig, ScenarioKind};
use rogon::dynamics::{SimState, SimulationReport};
use rogon::grid::WaveField;
use rogon::rogons::SolutionKind;
use rogon::{
    bs_call_price, bs_closed_form_residual, bs_put_price, eval_field, mi_scenario,
    parse_config_with_overrides, peak_statistics, put_call_parity_gap, render_heatmap_file,
    residual_at, simulate, write_csv_file, Error,
};

/// Probe step for the spectral residual certification, matching the
/// library's verification convention.
const DT_PROBE: f64 = 1e-3;

#[derive(Parser)]
#[command(
    name = "rogon",
    version,
    about = "Rogue-wave option-pricing toolkit: analytic fields, PDE certification, \
             split-step dynamics, modulation instability, and a Black-Scholes baseline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct Common {
    /// Scenario configuration file (line-based `key = value`, `#` comments).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Override one config key (repeatable; applied in order, last wins).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Artifact directory (overrides `output.dir` from the config;
    /// defaults to the current directory).
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured closed-form field; write CSV and heatmap.
    Eval(Common),
    /// Certify the configured closed form against the model PDE.
    Residual {
        #[command(flatten)]
        common: Common,
        /// Largest acceptable residual max-norm.
        #[arg(long, value_name = "TOL", default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Propagate the configured initial data with the split-step integrator.
    Simulate(Common),
    /// Run the modulation-instability scenario and fit mode growth rates.
    Mi(Common),
    /// Price with the Black-Scholes baseline and certify its PDE residual.
    Bs(Common),
    /// Render the configured field's intensity heatmap (no CSV).
    Render(Common),
}

/// CLI-level failure: wraps library errors and adds the conditions only the
/// command layer can detect.
enum CliError {
    Lib(Error),
    Io { context: String, source: std::io::Error },
    WrongKind { subcommand: &'static str, got: ScenarioKind, expected: &'static str },
    MissingReference,
    BadTolerance { tolerance: f64 },
    ToleranceBreach { linf: f64, tolerance: f64 },
}

impl CliError {
    /// Exit code 2 for failures of the numerics themselves, 1 otherwise.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_numerical() => 2,
            CliError::ToleranceBreach { .. } => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io { context, source } => write!(f, "{context}: {source}"),
            CliError::WrongKind { subcommand, got, expected } => write!(
                f,
                "`{subcommand}` needs a config with solution = {expected}, \
                 but this one declares solution = {got}"
            ),
            CliError::MissingReference => write!(
                f,
                "`simulate` builds its initial data from sim.reference; set it to \
                 plane, rogon1 or rogon2 (`none` is only meaningful for library \
                 callers that supply their own initial state)"
            ),
            CliError::BadTolerance { tolerance } => {
                write!(f, "--tolerance must be positive and finite, got {tolerance}")
            }
            CliError::ToleranceBreach { linf, tolerance } => write!(
                f,
                "residual max-norm {linf:e} exceeds the tolerance {tolerance:e}"
            ),
        }
    }
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Lib(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(c) => run_eval(c, true),
        Command::Render(c) => run_eval(c, false),
        Command::Residual { common, tolerance } => run_residual(common, *tolerance),
        Command::Simulate(c) => run_simulate(c),
        Command::Mi(c) => run_mi(c),
        Command::Bs(c) => run_bs(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Reads and parses the config, applies `--set` overrides, and resolves the
/// artifact directory (creating it).
fn load(common: &Common) -> Result<(ScenarioConfig, PathBuf), CliError> {
    let text = fs::read_to_string(&common.config).map_err(|source| CliError::Io {
        context: format!("cannot read config {}", common.config.display()),
        source,
    })?;
    let cfg = parse_config_with_overrides(&text, &common.set)?;
    let out_dir = common
        .output
        .clone()
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir).map_err(|source| CliError::Io {
        context: format!("cannot create output directory {}", out_dir.display()),
        source,
    })?;
    Ok((cfg, out_dir))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        context: format!("cannot write {}", path.display()),
        source,
    })
}

/// The analytic solution a field-evaluation config designates.
fn solution_of(cfg: &ScenarioConfig, subcommand: &'static str) -> Result<SolutionKind, CliError> {
    cfg.kind.solution().ok_or(CliError::WrongKind {
        subcommand,
        got: cfg.kind,
        expected: "plane, rogon1 or rogon2",
    })
}

fn print_scenario_header(cfg: &ScenarioConfig) {
    let p = cfg.params();
    println!(
        "scenario: {} (sigma={}, beta={}, alpha={}, k={})",
        cfg.kind,
        p.sigma(),
        p.beta(),
        p.alpha(),
        p.k()
    );
    if let Some(g) = &cfg.grid {
        println!(
            "grid: S in [{}, {}) x {}, t in [{}, {}] x {}",
            g.s_min(),
            g.s_max(),
            g.n_s(),
            g.t_min(),
            g.t_max(),
            g.n_t()
        );
    }
}

fn run_eval(common: &Common, with_csv: bool) -> Result<(), CliError> {
    let (cfg, out_dir) = load(common)?;
    let which = solution_of(&cfg, if with_csv { "eval" } else { "render" })?;
    let field = eval_field(which, cfg.params(), cfg.grid())?;
    print_scenario_header(&cfg);

    let (peak, s_peak, t_peak) = peak_statistics(&field);
    println!("peak |psi|^2 = {peak} at (S, t) = ({s_peak}, {t_peak})");

    if with_csv {
        let csv_path = out_dir.join("field.csv");
        write_csv_file(&field, &csv_path)?;
        println!("wrote {}", csv_path.display());
    }
    let pgm_path = out_dir.join("field.pgm");
    render_heatmap_file(&field, cfg.normalization, &pgm_path)?;
    println!("wrote {}", pgm_path.display());
    Ok(())
}

fn run_residual(common: &Common, tolerance: f64) -> Result<(), CliError> {
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(CliError::BadTolerance { tolerance });
    }
    let (cfg, out_dir) = load(common)?;
    let which = solution_of(&cfg, "residual")?;
    let p = cfg.params();
    let report = residual_at(&which.sampler(p), p, cfg.grid(), DT_PROBE)?;
    print_scenario_header(&cfg);

    let mut text = String::new();
    let _ = writeln!(text, "solution = {}", cfg.kind);
    let _ = writeln!(text, "residual_linf = {}", report.linf);
    let _ = writeln!(text, "residual_l2 = {}", report.l2);
    let _ = writeln!(text, "boundary_mismatch = {}", report.boundary_mismatch);
    let _ = writeln!(text, "n_s = {}", report.n_s);
    let _ = writeln!(text, "n_t = {}", report.n_t);
    let _ = writeln!(text, "dt_probe = {}", report.dt_probe);
    let _ = writeln!(text, "tolerance = {tolerance}");
    let verdict = if report.linf <= tolerance { "pass" } else { "fail" };
    let _ = writeln!(text, "verdict = {verdict}");
    let path = out_dir.join("residual.txt");
    write_text(&path, &text)?;

    println!("residual linf = {:e}  (tolerance {:e})", report.linf, tolerance);
    println!("residual l2   = {:e}", report.l2);
    println!("boundary mismatch = {:e}", report.boundary_mismatch);
    if report.boundary_mismatch > 1e-9 {
        println!(
            "note: the sampler is not numerically periodic on this domain \
             (carrier wavenumber off the 2*pi/L lattice?); the spectral \
             S-derivatives see the seam"
        );
    }
    println!("wrote {}", path.display());
    if report.linf > tolerance {
        return Err(CliError::ToleranceBreach { linf: report.linf, tolerance });
    }
    println!("PASS: residual within tolerance");
    Ok(())
}

/// Formats one trace row: time plus the per-record diagnostics.
fn traces_csv(report: &SimulationReport) -> String {
    let mut text = String::from("t,error_linf,mass,hamiltonian\n");
    for (i, &t) in report.times.iter().enumerate() {
        let err = match &report.error_linf_vs_analytic {
            Some(errs) => errs[i].to_string(),
            None => String::new(),
        };
        let _ = writeln!(
            text,
            "{t},{err},{mass},{ham}",
            mass = report.mass_trace[i],
            ham = report.hamiltonian_trace[i]
        );
    }
    text
}

/// Stacks the per-snapshot rows into one field on `grid` (the snapshot
/// schedule is exactly the grid's time axis).
fn stack_snapshots(cfg: &ScenarioConfig, snapshots: &[WaveField]) -> Result<WaveField, Error> {
    let g = cfg.grid();
    let samples: Vec<_> =
        snapshots.iter().take(g.n_t()).flat_map(|f| f.samples().iter().copied()).collect();
    Ok(WaveField::new(*g, *cfg.params(), cfg.kind.as_str(), samples)?)
}

fn run_simulate(common: &Common) -> Result<(), CliError> {
    let (cfg, out_dir) = load(common)?;
    if cfg.kind != ScenarioKind::Simulate {
        return Err(CliError::WrongKind {
            subcommand: "simulate",
            got: cfg.kind,
            expected: "simulate",
        });
    }
    let sim = cfg.sim.as_ref().expect("validated: simulate carries sim settings");
    let reference = sim.reference.ok_or(CliError::MissingReference)?;
    let p = cfg.params();
    let g = cfg.grid();

    let sampler = reference.sampler(p);
    let state = SimState::from_sampler(p, g.domain_length(), g.n_s(), g.t_min(), &sampler)?;

    // Snapshots at every grid time, plus the final state if the schedule
    // stops earlier (a single-time grid records only the start).
    let mut snapshot_times = g.t_values();
    if snapshot_times.last() != Some(&g.t_max()) {
        snapshot_times.push(g.t_max());
    }
    let report = simulate(&state, g.t_max(), sim.dt, Some(&sampler), &snapshot_times)?;

    print_scenario_header(&cfg);
    let steps = report.times.len() - 1;
    println!("initial data: {} at t = {}", reference.as_str(), g.t_min());
    println!("steps: {steps} x dt = {}", sim.dt);

    let final_err = report
        .error_linf_vs_analytic
        .as_ref()
        .and_then(|e| e.last().copied())
        .expect("reference designated");
    let mass_drift = SimulationReport::relative_drift(&report.mass_trace);
    let ham_drift = SimulationReport::relative_drift(&report.hamiltonian_trace);
    println!("final linf error vs {} = {:e}", reference.as_str(), final_err);
    println!("mass drift = {mass_drift:e}");
    println!("hamiltonian drift = {ham_drift:e}");

    let traces_path = out_dir.join("traces.csv");
    write_text(&traces_path, &traces_csv(&report))?;
    println!("wrote {}", traces_path.display());

    let final_field = report.snapshots.last().expect("schedule is never empty");
    let final_path = out_dir.join("final.csv");
    write_csv_file(final_field, &final_path)?;
    println!("wrote {}", final_path.display());

    let stacked = stack_snapshots(&cfg, &report.snapshots)?;
    let field_path = out_dir.join("field.csv");
    write_csv_file(&stacked, &field_path)?;
    println!("wrote {}", field_path.display());
    if g.n_t() >= 2 {
        let pgm_path = out_dir.join("field.pgm");
        render_heatmap_file(&stacked, cfg.normalization, &pgm_path)?;
        println!("wrote {}", pgm_path.display());
    }
    Ok(())
}

fn run_mi(common: &Common) -> Result<(), CliError> {
    let (cfg, out_dir) = load(common)?;
    if cfg.kind != ScenarioKind::Mi {
        return Err(CliError::WrongKind { subcommand: "mi", got: cfg.kind, expected: "mi" });
    }
    let mi = cfg.mi.as_ref().expect("validated: mi carries mi settings");
    let p = cfg.params();
    let report =
        mi_scenario(p, mi.l, mi.n_s, mi.eps, mi.m_pert, mi.t_end, mi.dt, mi.rng_seed)?;

    print_scenario_header(&cfg);
    println!(
        "seeded mode {} (kappa = {}), eps = {}, horizon {} x dt = {}",
        report.m_pert, report.kappa, report.eps, mi.t_end, mi.dt
    );

    let fit = report.pert_fit();
    let fitted = fit.fitted;
    println!("theory growth rate at kappa: {:e}", fit.theory);
    match fitted {
        Some(rate) => {
            let gap = if fit.theory != 0.0 { (rate - fit.theory).abs() / fit.theory } else { 0.0 };
            println!("fitted growth rate: {rate:e}  (relative gap {:.3}%)", 100.0 * gap);
        }
        None => println!("fitted growth rate: none (too few usable records)"),
    }
    println!("theory peak rate = {:e} at kappa = |alpha|", report.theory_peak_rate);
    println!("instability cutoff kappa = {:e}", report.cutoff_kappa);

    // modes.csv: one row per mode with its growth fit.
    let mut modes = String::from("mode,kappa,theory,fitted,initial_amplitude,max_amplitude,window_len\n");
    for f in &report.fits {
        let fitted = f.fitted.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            modes,
            "{},{},{},{fitted},{},{},{}",
            f.mode, f.kappa, f.theory, f.initial_amplitude, f.max_amplitude, f.window_len
        );
    }
    let modes_path = out_dir.join("modes.csv");
    write_text(&modes_path, &modes)?;
    println!("wrote {}", modes_path.display());

    // mi_trace.csv: per-record conserved quantities and the seeded mode.
    let mut trace = String::from("t,mass,hamiltonian,a_pert\n");
    for (i, &t) in report.sim.times.iter().enumerate() {
        let _ = writeln!(
            trace,
            "{t},{},{},{}",
            report.sim.mass_trace[i],
            report.sim.hamiltonian_trace[i],
            report.mode_amplitudes[i][report.m_pert]
        );
    }
    let trace_path = out_dir.join("mi_trace.csv");
    write_text(&trace_path, &trace)?;
    println!("wrote {}", trace_path.display());

    let mut summary = String::new();
    let _ = writeln!(summary, "m_pert = {}", report.m_pert);
    let _ = writeln!(summary, "kappa = {}", report.kappa);
    let _ = writeln!(summary, "eps = {}", report.eps);
    let _ = writeln!(summary, "rng_seed = {}", report.rng_seed);
    let _ = writeln!(summary, "theory_rate = {}", fit.theory);
    let _ = writeln!(
        summary,
        "fitted_rate = {}",
        fitted.map(|v| v.to_string()).unwrap_or_default()
    );
    let _ = writeln!(summary, "theory_peak_rate = {}", report.theory_peak_rate);
    let _ = writeln!(summary, "cutoff_kappa = {}", report.cutoff_kappa);
    let _ = writeln!(summary, "max_noncarrier_amplitude = {}", report.max_noncarrier_amplitude());
    let _ = writeln!(summary, "mass_drift = {}", SimulationReport::relative_drift(&report.sim.mass_trace));
    let report_path = out_dir.join("report.txt");
    write_text(&report_path, &summary)?;
    println!("wrote {}", report_path.display());
    Ok(())
}

fn run_bs(common: &Common) -> Result<(), CliError> {
    let (cfg, out_dir) = load(common)?;
    if cfg.kind != ScenarioKind::Bs {
        return Err(CliError::WrongKind { subcommand: "bs", got: cfg.kind, expected: "bs" });
    }
    let bs = cfg.bs.as_ref().expect("validated: bs carries bs settings");
    let bp = &bs.params;
    println!(
        "scenario: bs (r={}, sigma_bs={}, strike={}, maturity={})",
        bp.r(),
        bp.sigma_bs(),
        bp.strike(),
        bp.maturity()
    );

    let s_grid = bs.s_grid();
    let mut prices = String::from("s,call,put,parity_gap\n");
    let mut max_gap: f64 = 0.0;
    for &s in &s_grid {
        let call = bs_call_price(s, bp)?;
        let put = bs_put_price(s, bp)?;
        let gap = put_call_parity_gap(s, bp)?;
        max_gap = max_gap.max(gap);
        let _ = writeln!(prices, "{s},{call},{put},{gap}");
    }
    let prices_path = out_dir.join("prices.csv");
    write_text(&prices_path, &prices)?;

    let residual = bs_closed_form_residual(&s_grid, bp, bs.bump)?;
    println!(
        "spots: {} points in [{}, {}]",
        s_grid.len(),
        bs.s_min,
        bs.s_max
    );
    println!("pde residual linf (closed form, bump={}) = {residual:e}", bs.bump);
    println!("max put-call parity gap = {max_gap:e}");
    println!("wrote {}", prices_path.display());
    Ok(())
}
