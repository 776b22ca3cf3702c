//! Batch divergence computation between Gaussian measures, Brownian
//! trajectory emission, large-variance limits and oracle self-verification.
//!
//! Exit codes: 0 success, 1 usage or I/O or file-level parse failure,
//! 2 partial row failures in a batch, 3 verification bound violation.

mod records;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use gaussdiv::gaussian::Gaussian1D;
use gaussdiv::psi::{brownian_psi, psi_closed_form, psi_limit_sigma, BrownianPair};
use records::{compute_row, parse_csv, parse_json, write_csv, write_json, ReportRow};
use verify::GridSize;

#[derive(Parser)]
#[command(
    name = "gaussdiv",
    version,
    about = "Spherical and hyperbolic divergences between Gaussian measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Grid {
    Small,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all divergences for a batch of parameter pairs.
    Div {
        /// Input file: JSON array of pair records, or CSV with columns
        /// id,mu_p,sigma_p,mu_q,sigma_q (univariate only).
        #[arg(long)]
        input: PathBuf,
        /// Input and output encoding.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit the invariant of two Brownian laws over a uniform time grid.
    Brownian {
        #[arg(long)]
        drift_p: f64,
        #[arg(long)]
        vol_p: f64,
        #[arg(long)]
        drift_q: f64,
        #[arg(long)]
        vol_q: f64,
        #[arg(long)]
        t_start: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long)]
        steps: u32,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the large-variance limit for a fixed sigma and the convergence
    /// gaps toward it.
    Limits {
        #[arg(long)]
        sigma: f64,
    },
    /// Cross-check every closed form against its numerical oracle.
    Verify {
        #[arg(long, value_enum, default_value = "small")]
        grid: Grid,
        /// Debug hook: offset the cross term inside the lambda identity
        /// check to exercise the failure path.
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_lambda: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Div { input, format, output } => cmd_div(&input, format, output.as_deref()),
        Command::Brownian {
            drift_p,
            vol_p,
            drift_q,
            vol_q,
            t_start,
            t_end,
            steps,
            output,
        } => cmd_brownian(
            drift_p,
            vol_p,
            drift_q,
            vol_q,
            t_start,
            t_end,
            steps,
            output.as_deref(),
        ),
        Command::Limits { sigma } => cmd_limits(sigma),
        Command::Verify { grid, perturb_lambda } => cmd_verify(
            match grid {
                Grid::Small => GridSize::Small,
                Grid::Full => GridSize::Full,
            },
            perturb_lambda,
        ),
    };
    ExitCode::from(code)
}

fn emit(output: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("stdout: {e}")),
    }
}

fn cmd_div(input: &std::path::Path, format: Format, output: Option<&std::path::Path>) -> u8 {
    let bytes = match std::fs::read(input) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", input.display());
            return 1;
        }
    };
    let parsed = match format {
        Format::Json => parse_json(&bytes),
        Format::Csv => parse_csv(&bytes),
    };
    let records = match parsed {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let rows: Vec<ReportRow> = records
        .iter()
        .map(|rec| match rec {
            Ok(rec) => compute_row(rec),
            Err(row) => (**row).clone(),
        })
        .collect();
    let any_error = rows.iter().any(|r| r.error.is_some());
    let encoded = match format {
        Format::Json => write_json(&rows),
        Format::Csv => write_csv(&rows),
    };
    if let Err(e) = emit(output, &encoded) {
        eprintln!("error: {e}");
        return 1;
    }
    if any_error {
        2
    } else {
        0
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_brownian(
    drift_p: f64,
    vol_p: f64,
    drift_q: f64,
    vol_q: f64,
    t_start: f64,
    t_end: f64,
    steps: u32,
    output: Option<&std::path::Path>,
) -> u8 {
    if !(t_start > 0.0 && t_end > t_start) {
        eprintln!("error: need 0 < t_start < t_end, got [{t_start}, {t_end}]");
        return 1;
    }
    if steps < 2 {
        eprintln!("error: steps must be >= 2, got {steps}");
        return 1;
    }
    let pair = match BrownianPair::new(drift_p, vol_p, drift_q, vol_q) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let mut out = Vec::new();
    let t_min = pair.t_min();
    out.extend_from_slice(format!("# t_min = {t_min}\n").as_bytes());
    out.extend_from_slice(b"t,psi,status\n");
    let dt = (t_end - t_start) / (steps - 1) as f64;
    for i in 0..steps {
        let t = t_start + dt * i as f64;
        match brownian_psi(&pair, t) {
            Ok(psi) => out.extend_from_slice(format!("{t},{psi},ok\n").as_bytes()),
            Err(gaussdiv::Error::BelowValidityTime { .. }) => {
                out.extend_from_slice(format!("{t},,below_t_min\n").as_bytes())
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        }
    }
    if let Err(e) = emit(output, &out) {
        eprintln!("error: {e}");
        return 1;
    }
    0
}

fn cmd_limits(sigma: f64) -> u8 {
    let fixed = match Gaussian1D::new(0.0, sigma) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let limit = match psi_limit_sigma(&fixed) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    println!("sigma = {sigma}");
    println!("limit = {limit}");
    for sigma_other in [10.0, 1e3, 1e6] {
        let other = Gaussian1D::new(0.0, sigma_other).unwrap();
        let psi = psi_closed_form(&fixed, &other).unwrap().psi;
        let gap = (psi - limit).abs();
        println!("sigma_other = {sigma_other}: psi = {psi}, gap = {gap}");
    }
    0
}

fn cmd_verify(grid: GridSize, perturb_lambda: f64) -> u8 {
    let start = std::time::Instant::now();
    let results = verify::run_all(grid, perturb_lambda);
    let mut all_ok = true;
    for check in &results {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        println!(
            "check {}: max err {:.3e} (bound {:.0e}) {status}",
            check.name, check.max_err, check.bound
        );
        if !check.passed() {
            all_ok = false;
            println!("  offending parameters: {}", check.worst);
        }
    }
    eprintln!("verify completed in {:.2} s", start.elapsed().as_secs_f64());
    if all_ok {
        println!("all {} checks passed", results.len());
        0
    } else {
        3
    }
}
