use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use memflip::sweep::{
    entanglement_sweep, fidelity_sweep, Axis, CoefficientReport, FixedParams, SweepParam, SweepSpec,
};
use memflip::verify;

#[derive(Parser, Debug)]
#[command(
    name = "memflip",
    version,
    about = "Correlated-noise suppression over lossy bosonic memory channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Squared output coefficients of the scheme.
    Coefficients(CoefficientArgs),
    /// Coherent-state fidelity over an (eta, eps) grid.
    Fidelity(SweepArgs),
    /// Entanglement survival of a two-mode squeezed vacuum over an (eta, eps) grid.
    Entanglement(SweepArgs),
    /// Run the self-check suite; exits 2 if any check fails.
    Verify {
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoefficientArgs {
    #[arg(long = "n", default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0.6)]
    eta: f64,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = OnOff::On)]
    flips: OnOff,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long = "n", default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value_t = OnOff::On)]
    flips: OnOff,
    /// Mean thermal excitation per environment mode (default 3 for fidelity, 1 for entanglement).
    #[arg(long = "T")]
    t: Option<f64>,
    /// Mean photon number |alpha|^2 of the coherent input.
    #[arg(long, default_value_t = 8.0)]
    alpha2: f64,
    /// Two-mode squeezing parameter mu = tanh r.
    #[arg(long, default_value_t = 0.6)]
    mu: f64,
    /// Grid resolution as ETAxEPS step counts.
    #[arg(long, default_value = "51x51")]
    grid: String,
    /// Eta range START:STOP.
    #[arg(long, default_value = "0:1")]
    eta_range: String,
    /// Eps range START:STOP.
    #[arg(long, default_value = "0:1")]
    eps_range: String,
    #[command(flatten)]
    output: Output,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<memflip::Error> for Failure {
    fn from(e: memflip::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn validation(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| validation(format!("grid `{s}` is not of the form AxB")))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| validation(format!("grid `{s}` has a non-integer size")))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_range(s: &str) -> Result<(f64, f64), Failure> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| validation(format!("range `{s}` is not of the form START:STOP")))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| validation(format!("range `{s}` has a non-numeric bound")))
    };
    Ok((parse(a)?, parse(b)?))
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep_spec(args: &SweepArgs, default_t: f64) -> Result<SweepSpec, Failure> {
    let (eta_steps, eps_steps) = parse_grid(&args.grid)?;
    let (eta0, eta1) = parse_range(&args.eta_range)?;
    let (eps0, eps1) = parse_range(&args.eps_range)?;
    let fixed = FixedParams {
        n: args.n,
        t: args.t.unwrap_or(default_t),
        mu: args.mu,
        alpha2: args.alpha2,
        flips: matches!(args.flips, OnOff::On),
        ..FixedParams::default()
    };
    // surface parameter errors before the sweep starts
    fixed.channel_params()?;
    Ok(SweepSpec::new(
        Axis::new(SweepParam::Eta, eta0, eta1, eta_steps)?,
        Axis::new(SweepParam::Eps, eps0, eps1, eps_steps)?,
        fixed,
    )?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Coefficients(args) => {
            let report = CoefficientReport::compute(
                args.n,
                args.eta,
                args.eps,
                matches!(args.flips, OnOff::On),
            )?;
            let text = match args.output.format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            emit(&args.output, &text)
        }
        Command::Fidelity(args) => {
            let table = fidelity_sweep(&sweep_spec(&args, 3.0)?)?;
            let text = match args.output.format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(),
            };
            emit(&args.output, &text)
        }
        Command::Entanglement(args) => {
            let table = entanglement_sweep(&sweep_spec(&args, 1.0)?)?;
            let text = match args.output.format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(),
            };
            emit(&args.output, &text)
        }
        Command::Verify { seed } => {
            let report = verify::run_checks(&memflip::Pipeline::default(), seed);
            print!("{}", report.render());
            if report.all_passed() {
                println!("all checks passed");
                Ok(())
            } else {
                Err(Failure {
                    code: 2,
                    message: "verification failed".into(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
