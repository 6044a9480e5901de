use std::path::PathBuf;
use std::process::ExitCode;

use circlemix::commands::{parse_angle, parse_p_list, parse_poly, parse_u32_list};
use circlemix::{run, CliError, Command, Format, RunConfig};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    /// Adaptedness, aperiodicity, coefficient supremum and Doeblin verdicts.
    Describe,
    /// Norm curves of P^n − E for each p.
    Norms,
    /// Fourier table and spectrum point cloud.
    Spectrum,
    /// Ergodic Hilbert transform: partial sums against the closed form.
    Hilbert,
    /// Monte-Carlo estimates of P^n f(x0).
    Simulate,
    /// Discretized chain on Z_N: norms, eigenvalues and a binary snapshot.
    Grid,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fmt {
    Csv,
    Json,
}

/// Mixing and spectral diagnostics for convolution operators on the circle.
#[derive(Debug, Parser)]
#[command(name = "circlemix", version)]
struct Args {
    command: Sub,
    /// Measure spec file (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Half-width N of the Fourier window.
    #[arg(long, default_value_t = 1024)]
    window: usize,
    /// Grid size for discretized chains.
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    /// Largest power n (default 20; 1000 for hilbert).
    #[arg(long)]
    nmax: Option<u32>,
    /// Norm exponents, e.g. 1,1.5,2,inf.
    #[arg(long, default_value = "1,2,inf")]
    p: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Fmt::Csv)]
    format: Fmt,
    /// Trigonometric polynomial as j:re[:im] terms, e.g. 1:1,-1:1.
    #[arg(long, default_value = "1:1")]
    f: String,
    /// Starting point x0 as an angle expression.
    #[arg(long, default_value = "0")]
    x0: String,
    /// Step counts n for simulate, e.g. 1,10,50.
    #[arg(long, default_value = "1,10")]
    steps: String,
    /// Number of trajectories M.
    #[arg(long, default_value_t = 10_000)]
    trajectories: usize,
}

fn config(a: Args) -> Result<RunConfig, CliError> {
    let command = match a.command {
        Sub::Describe => Command::Describe,
        Sub::Norms => Command::Norms,
        Sub::Spectrum => Command::Spectrum,
        Sub::Hilbert => Command::Hilbert,
        Sub::Simulate => Command::Simulate,
        Sub::Grid => Command::Grid,
    };
    let mut cfg = RunConfig::new(command, a.spec);
    cfg.window = a.window;
    cfg.grid = a.grid;
    cfg.n_max = a.nmax;
    cfg.p = parse_p_list(&a.p)?;
    cfg.seed = a.seed;
    cfg.out = a.out;
    cfg.format = match a.format {
        Fmt::Csv => Format::Csv,
        Fmt::Json => Format::Json,
    };
    cfg.f = parse_poly(&a.f)?;
    cfg.x0 = parse_angle(&a.x0)?;
    cfg.steps = parse_u32_list(&a.steps)?;
    cfg.trajectories = a.trajectories;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match config(args).and_then(|c| run(&c)) {
        Ok(outcome) => {
            for l in &outcome.lines {
                println!("{l}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
