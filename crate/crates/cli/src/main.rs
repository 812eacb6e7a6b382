//! Command-line front end for the Wiener algebra Bezout solver.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 input error.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wiener_bezout::bundle::{read_bundle, write_bundle};
use wiener_bezout::diagnostics::{verify, VerifyConfig};
use wiener_bezout::kernels::SPoint;
use wiener_bezout::matrix::to_repr;
use wiener_bezout::oracle::WorkedInstance;
use wiener_bezout::problem::ProblemSpec;
use wiener_bezout::solver::{certify_right_invertible, solve};
use wiener_bezout::{json as wjson, Complex64, Error, Matrix};

const THREADS_VAR: &str = "WIENER_BEZOUT_THREADS";

#[derive(Parser)]
#[command(name = "wiener-bezout", version, about = "Solve G(s) X(s) = I over the analytic Wiener algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify that T_G is right invertible.
    Check {
        spec: PathBuf,
        /// Write the JSON result here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Solve and write a solution bundle.
    Solve {
        spec: PathBuf,
        /// Bundle directory.
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the identity checks on a bundle.
    Verify {
        bundle: PathBuf,
        /// Add the operator-level checks and random minimality draws.
        #[arg(long)]
        full: bool,
        /// Report directory (defaults to the bundle).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Tolerance of the identity checks.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        freq: FreqArgs,
    },
    /// Print G, Y, Y^-1, Xi and Theta at one point.
    Eval {
        bundle: PathBuf,
        /// Point i*omega on the imaginary axis.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "s")]
        omega: Option<f64>,
        /// Point of the closed right half plane as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
    },
    /// Emit the worked instance G = [1, c/(s+b)] and its closed-form values.
    Demo {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Directory for problem.json and expected.json (stdout otherwise).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Tolerance of the identity checks, stored with the problem.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    freq: FreqArgs,
}

#[derive(Args)]
struct FreqArgs {
    #[arg(long)]
    freq_max: Option<f64>,
    #[arg(long)]
    freq_count: Option<usize>,
}

impl FreqArgs {
    fn apply(&self, spec: &mut ProblemSpec) {
        if let Some(w) = self.freq_max {
            spec.freq.omega_max = w;
        }
        if let Some(n) = self.freq_count {
            spec.freq.count = n;
        }
    }
}

impl GridArgs {
    fn load(&self, path: &Path) -> Result<ProblemSpec, Error> {
        let mut spec = ProblemSpec::load(path)?;
        if let Some(h) = self.grid_step {
            spec.grid.h = h;
        }
        if let Some(t) = self.horizon {
            spec.grid.horizon = t;
        }
        if let Some(tol) = self.tol {
            spec.tolerances.identity = Some(tol);
        }
        self.freq.apply(&mut spec);
        spec.validate()?;
        Ok(spec)
    }
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_VAR} must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Check { spec, output, grid } => cmd_check(&grid.load(&spec)?, output.as_deref()),
        Command::Solve { spec, output, grid } => cmd_solve(&grid.load(&spec)?, &output),
        Command::Verify { bundle, full, output, tol, freq } => {
            cmd_verify(&bundle, full, output.as_deref().unwrap_or(&bundle), tol, &freq)
        }
        Command::Eval { bundle, omega, s } => cmd_eval(&bundle, omega, s.as_deref()),
        Command::Demo { b, c, output } => cmd_demo(b, c, output.as_deref()),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_check(spec: &ProblemSpec, output: Option<&Path>) -> Result<Outcome, Error> {
    let g = spec.symbol::<f64>()?;
    let grid = spec.time_grid::<f64>()?;
    let cfg = spec.solver_config();
    let cert = certify_right_invertible(&g, &grid, &cfg.certify)?;
    let certified = cert.route_a && cert.route_b;
    let out = json!({
        "certified": certified,
        "lambda_min": cert.lambda_min,
        "lambda_min_discrete": cert.lambda_min_discrete,
        "norm_tgtg": cert.norm_tgtg,
        "lambda_tr": cert.lambda_tr,
        "lambda_schur": cert.lambda_schur,
        "hankel_rank": cert.hankel_rank,
        "route_A": cert.route_a,
        "route_B": cert.route_b,
        "threshold": cfg.certify.threshold,
    });
    emit(&wjson::to_string(&out)?, output)?;
    Ok(if certified { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_solve(spec: &ProblemSpec, dir: &Path) -> Result<Outcome, Error> {
    let g = spec.symbol::<f64>()?;
    let grid = spec.time_grid::<f64>()?;
    let sol = match solve(&g, &grid, &spec.solver_config()) {
        Ok(sol) => sol,
        Err(e) if !e.is_input_error() => {
            eprintln!("solve failed [{}]: {e}", failure_stage(&e));
            return Ok(Outcome::Fail);
        }
        Err(e) => return Err(e),
    };
    write_bundle(dir, spec, &sol)?;
    Ok(Outcome::Pass)
}

fn failure_stage(e: &Error) -> &'static str {
    match e {
        Error::NotRightInvertible { .. } | Error::RouteDisagreement { .. } | Error::SurjectivityFailure { .. } => {
            "certification"
        }
        Error::NoConvergence { .. } | Error::ResidualTooLarge { .. } | Error::NotPositiveDefinite => "normal_equations",
        _ => "solver",
    }
}

fn cmd_verify(bundle: &Path, full: bool, out_dir: &Path, tol: Option<f64>, freq: &FreqArgs) -> Result<Outcome, Error> {
    let (mut spec, sol) = read_bundle::<f64>(bundle)?;
    freq.apply(&mut spec);
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter(format!("--tol must be positive, got {t}")));
        }
    }
    let fgrid = spec.freq_grid::<f64>()?;
    let cfg = VerifyConfig {
        full,
        tolerance: tol.or(spec.tolerances.identity),
        certify: spec.solver_config().certify,
        ..VerifyConfig::default()
    };
    let report = verify(&sol, &fgrid, &cfg);
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("report.json"), report.to_json()?)?;
    report.write_csv(fs::File::create(out_dir.join("report.csv"))?)?;
    for e in report.failures() {
        eprintln!("FAIL {}: residual {:.3e} > tolerance {:.3e}", e.check, e.residual, e.tolerance);
    }
    Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
}

fn parse_point(omega: Option<f64>, s: Option<&str>) -> Result<Complex64, Error> {
    let z = match (omega, s) {
        (Some(w), None) => Complex64::new(0.0, w),
        (None, Some(text)) => {
            let parts: Vec<&str> = text.split(',').map(str::trim).collect();
            let bad = || Error::InvalidParameter(format!("--s expects \"re,im\", got {text:?}"));
            if parts.len() != 2 {
                return Err(bad());
            }
            let re = parts[0].parse::<f64>().map_err(|_| bad())?;
            let im = parts[1].parse::<f64>().map_err(|_| bad())?;
            Complex64::new(re, im)
        }
        _ => return Err(Error::InvalidParameter("exactly one of --omega or --s is required".into())),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinitePoint);
    }
    if z.re < 0.0 {
        return Err(Error::LeftHalfPlane(z.re));
    }
    Ok(z)
}

fn cmd_eval(bundle: &Path, omega: Option<f64>, s: Option<&str>) -> Result<Outcome, Error> {
    let z = parse_point(omega, s)?;
    let (_, sol) = read_bundle::<f64>(bundle)?;
    let at = SPoint::Finite(z);
    let out = json!({
        "s": [z.re, z.im],
        "G": to_repr(&sol.g.eval(at)?),
        "Y": to_repr(&sol.big_y.eval(at)?),
        "Y_inv": to_repr(&sol.eval_y_inverse(at)?),
        "Xi": to_repr(&sol.xi.eval(at)?),
        "Theta": to_repr(&sol.theta.eval(at)?),
    });
    emit(&wjson::to_string(&out)?, None)?;
    Ok(Outcome::Pass)
}

fn real(m: &Matrix) -> Value {
    json!(to_repr(m))
}

fn cmd_demo(b: f64, c: f64, output: Option<&Path>) -> Result<Outcome, Error> {
    let w = WorkedInstance::new(b, c)?;
    let problem = ProblemSpec::worked_family(b, c);
    let zero = Complex64::new(0.0, 0.0);
    let expected = json!({
        "a": w.a,
        "y": {"coeff": real(&w.y_at(0.0)), "rate": w.a},
        "d_plus": real(&w.d_plus()),
        "e": real(&w.e()),
        "theta_at_0": real(&w.theta(zero)),
        "y_inverse_at_0": real(&w.y_inverse(zero)),
        "det_y_at_0": [w.det_y(zero).re, w.det_y(zero).im],
        "theta_star_xi_mass": w.theta_star_xi_mass(),
    });
    match output {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("problem.json"), problem.to_json()?)?;
            fs::write(dir.join("expected.json"), wjson::to_string(&expected)?)?;
        }
        None => {
            let both = json!({"problem": serde_json::to_value(&problem)?, "expected": expected});
            emit(&wjson::to_string(&both)?, None)?;
        }
    }
    Ok(Outcome::Pass)
}
