//! `biqo` — quantumness measures for a pair of pure states from the shell.
//!
//! Exit codes: 0 success / PASS, 1 verification FAIL, 2 usage error, 3 I/O error.
//! Every number printed is a library result; this file only formats.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use biqo_core::{
    check_overlap, maximize, measure_curve, overlap_from_theta_degrees, probe_oracle, simulate_b92,
    tradeoff_curve, verify, CurveRow, EavesdropConfig, MaximizeTarget, Measure, MeasureReport,
    VerifyBudget, VerifyTarget,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "biqo",
    version,
    about = "Quantumness of two nonorthogonal pure states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every measure at one overlap.
    Quantify {
        #[command(flatten)]
        overlap: Overlap,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Tabulate a measure over the overlap, or D(P) at fixed overlap.
    Curve {
        /// pe, c1, cinf, q, dmi, fg, fl or tradeoff
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Required for `tradeoff`.
        #[command(flatten)]
        overlap: OptOverlap,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
        format: DataFormat,
    },
    /// Run a numerical oracle and compare it with the closed form.
    Verify {
        /// c1, cinf, tradeoff, clone-global or clone-local
        #[arg(long)]
        target: String,
        #[command(flatten)]
        overlap: Overlap,
        /// Eve at maximal information (the default for `tradeoff`).
        #[arg(long, conflicts_with = "p")]
        at_max_info: bool,
        /// Eve's error bound for `tradeoff`.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = VerifyBudget::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = VerifyBudget::default().angle_steps)]
        angle_steps: usize,
        #[arg(long, default_value_t = VerifyBudget::default().prior_steps)]
        prior_steps: usize,
        #[arg(long, env = "BIQO_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Golden-section search for the most-quantum overlap.
    Maximize {
        /// q, dmi, fg-deficit or fl-deficit
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Monte Carlo B92 transmission, with or without Eve's optimal probe.
    Simulate {
        #[command(flatten)]
        overlap: OptOverlap,
        #[arg(long, default_value_t = 100_000)]
        rounds: u64,
        #[arg(long, env = "BIQO_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        eve: Switch,
        /// Restarts for the probe search when Eve is on.
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Overlap {
    /// Overlap x = <psi0|psi1> in [0, 1].
    #[arg(long)]
    overlap: Option<f64>,
    /// Angle between the states; x = cos(theta).
    #[arg(long)]
    theta_degrees: Option<f64>,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct OptOverlap {
    /// Overlap x = <psi0|psi1> in [0, 1].
    #[arg(long)]
    overlap: Option<f64>,
    /// Angle between the states; x = cos(theta).
    #[arg(long)]
    theta_degrees: Option<f64>,
}

fn resolve(overlap: Option<f64>, theta: Option<f64>) -> Option<f64> {
    overlap.or(theta.map(overlap_from_theta_degrees))
}

impl Overlap {
    fn get(&self) -> Result<f64, Failure> {
        let x = resolve(self.overlap, self.theta_degrees).expect("clap enforces the group");
        Ok(check_overlap(x)?)
    }
}

impl OptOverlap {
    fn get(&self) -> Result<Option<f64>, Failure> {
        match resolve(self.overlap, self.theta_degrees) {
            Some(x) => Ok(Some(check_overlap(x)?)),
            None => Ok(None),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<biqo_core::Error> for Failure {
    fn from(e: biqo_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// `%.12g`: twelve significant digits, trailing zeros dropped, exponent
/// outside `[1e-5, 1e12)`.
fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..12).contains(&exp) {
        let fixed = format!("{v:.*}", (11 - exp) as usize);
        trim_zeros(&fixed).to_string()
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("report serialises")
    );
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().fold(String::new(), |mut s, (k, v)| {
        let _ = writeln!(s, "{k:<width$}  {v}");
        s
    })
}

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

fn quantify(x: f64, format: TextFormat) {
    let r = MeasureReport::at(x).expect("overlap already checked");
    match format {
        TextFormat::Json => print_json(&r),
        TextFormat::Text => print!(
            "{}",
            table(&[
                ("x", f6(r.x)),
                ("p_e", f6(r.p_e)),
                ("c1", f6(r.c1)),
                ("c_inf", f6(r.c_inf)),
                ("q", f6(r.q)),
                ("d_at_mi", f6(r.d_at_mi)),
                ("f_g", f6(r.f_g)),
                ("f_l", f6(r.f_l)),
            ])
        ),
    }
}

fn curve(
    measure: &str,
    steps: usize,
    x: Option<f64>,
    out: Option<PathBuf>,
    format: DataFormat,
) -> Result<(), Failure> {
    let (header, rows): ([&str; 2], Vec<CurveRow>) = if measure == "tradeoff" {
        let x =
            x.ok_or_else(|| Failure::Usage("curve --measure tradeoff needs --overlap".into()))?;
        (["p", "d"], tradeoff_curve(x, steps)?)
    } else {
        let m: Measure = measure.parse()?;
        (["x", m.name()], measure_curve(m, steps)?)
    };
    let body = match format {
        DataFormat::Csv => {
            let mut s = format!("{},{}\n", header[0], header[1]);
            for r in &rows {
                let _ = writeln!(s, "{},{}", sig12(r.x), sig12(r.value));
            }
            s
        }
        DataFormat::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|r| json!({ header[0]: r.x, header[1]: r.value }))
                .collect();
            serde_json::to_string_pretty(&arr).expect("rows serialise") + "\n"
        }
    };
    match out {
        Some(path) => std::fs::write(&path, body)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Quantify { overlap, format } => quantify(overlap.get()?, format),
        Command::Curve {
            measure,
            steps,
            overlap,
            out,
            format,
        } => curve(&measure, steps, overlap.get()?, out, format)?,
        Command::Verify {
            target,
            overlap,
            at_max_info: _,
            p,
            restarts,
            angle_steps,
            prior_steps,
            seed,
            format,
        } => {
            let target: VerifyTarget = target.parse()?;
            let budget = VerifyBudget {
                angle_steps,
                prior_steps,
                restarts,
                seed,
                p_eve: p,
            };
            let r = verify(target, overlap.get()?, &budget)?;
            match format {
                TextFormat::Json => print_json(&r),
                TextFormat::Text => {
                    let mut rows = vec![
                        ("target", r.target.name().to_string()),
                        ("x", f6(r.x)),
                        ("closed", sig12(r.closed)),
                        ("oracle", sig12(r.oracle)),
                        ("deviation", format!("{:.3e}", r.deviation)),
                        ("tolerance", format!("{:.0e}", r.tolerance)),
                        ("converged", r.converged.to_string()),
                    ];
                    if let Some(a) = r.auxiliary {
                        let label = match r.target {
                            VerifyTarget::Cinf => "argmax_prior",
                            VerifyTarget::Tradeoff => "p_achieved",
                            _ => "marginal_residual",
                        };
                        rows.push((label, sig12(a)));
                    }
                    rows.push(("result", if r.pass { "PASS" } else { "FAIL" }.to_string()));
                    print!("{}", table(&rows));
                }
            }
            if !r.pass {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Maximize {
            measure,
            tol,
            format,
        } => {
            let target: MaximizeTarget = measure.parse()?;
            let r = maximize(target, tol)?;
            match format {
                TextFormat::Json => print_json(&r),
                TextFormat::Text => print!(
                    "{}",
                    table(&[
                        ("measure", target.name().to_string()),
                        ("argmax", sig12(r.search.argmax)),
                        ("value", sig12(r.search.value)),
                        ("expected_argmax", sig12(r.expected_argmax)),
                        ("deviation", format!("{:.3e}", r.deviation)),
                        ("iterations", r.search.iterations.to_string()),
                    ])
                ),
            }
        }
        Command::Simulate {
            overlap,
            rounds,
            seed,
            eve,
            restarts,
            format,
        } => {
            let x = overlap.get()?.unwrap_or(std::f64::consts::FRAC_1_SQRT_2);
            let probe = match eve {
                Switch::Off => None,
                Switch::On => {
                    let mut cfg = EavesdropConfig::at_max_info(x)?;
                    cfg.restarts = restarts;
                    cfg.seed = seed;
                    Some(probe_oracle(&cfg)?)
                }
            };
            let s = simulate_b92(x, rounds, probe.as_ref(), seed)?;
            match format {
                TextFormat::Json => print_json(&s),
                TextFormat::Text => {
                    let mut rows = vec![
                        ("x", f6(s.x)),
                        ("rounds", s.rounds.to_string()),
                        ("seed", s.seed.to_string()),
                        ("eve", if s.eve_present { "on" } else { "off" }.to_string()),
                    ];
                    if let (Some(n), Some(rate), Some(se), Some(exp)) = (
                        s.eve_errors,
                        s.eve_error_rate,
                        s.eve_error_se,
                        s.expected_eve_error,
                    ) {
                        rows.push(("eve_errors", n.to_string()));
                        rows.push(("eve_error_rate", format!("{rate:.6} ± {se:.6}")));
                        rows.push(("expected_eve_error", f6(exp)));
                    }
                    rows.push(("detections", s.detections.to_string()));
                    rows.push((
                        "disturbance_rate",
                        format!("{:.6} ± {:.6}", s.disturbance_rate, s.disturbance_se),
                    ));
                    rows.push(("expected_disturbance", f6(s.expected_disturbance)));
                    print!("{}", table(&rows));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
