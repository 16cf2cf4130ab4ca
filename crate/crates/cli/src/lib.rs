//! Library side of the `smearstat` command-line tool: argument definitions,
//! dispatch, exit codes and the serializable reports.
//!
//! All values are in units where the window width τ is one unless `--tau` is
//! given. Moments of order n scale as τ^{-2n} (τ^{-4n} for the derivative
//! field), distribution parameters β as τ², ω₀ as τ^{-2}.

pub mod reports;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smearstat::Error;

pub use reports::Format;

#[derive(Parser, Debug)]
#[command(name = "smearstat", version, about = "Probability distributions of time-smeared vacuum fluctuations")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Window width τ; outputs carry their scaling with τ.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tau: f64,
    /// Central charge of the two-dimensional CFT.
    #[arg(short = 'c', long = "central-charge", global = true, default_value_t = 1.0)]
    pub central_charge: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of standard output. Relative paths are
    /// resolved against $SMEARSTAT_OUT_DIR when it is set.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for the exact moment engine.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Chiral,
    EnergyDensity,
    Phi2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Gaussian,
    Lorentzian,
    SquaredLorentzian,
}

impl From<WindowArg> for smearstat::func::Window {
    fn from(w: WindowArg) -> Self {
        use smearstat::func::Window;
        match w {
            WindowArg::Gaussian => Window::Gaussian,
            WindowArg::Lorentzian => Window::Lorentzian,
            WindowArg::SquaredLorentzian => Window::SquaredLorentzian,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Cft2d,
    Wick4d,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Shifted-Gamma parameters, probability of a negative result and the
    /// quantum inequality bound.
    Dist {
        #[arg(long, value_enum)]
        case: Case,
        /// Window for the phi2 case.
        #[arg(long, value_enum, default_value_t = WindowArg::Lorentzian)]
        window: WindowArg,
    },
    /// Exact moments of the Lorentzian-smeared Wick square, checked against
    /// the embedded table.
    Table1 {
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Largest cycle length to evaluate; orders past 8 have no golden.
        #[arg(long, default_value_t = 8)]
        budget: usize,
    },
    /// Energy-density distribution P(x), x = ρτ², on a grid refined toward
    /// the lower endpoint.
    Fig1 {
        /// Right edge of the grid.
        #[arg(long, default_value_t = 0.3)]
        x_max: f64,
    },
    /// Seeded draws from a distribution.
    Sample {
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long, value_enum, default_value_t = WindowArg::Lorentzian)]
        window: WindowArg,
        #[arg(short = 'n', long, default_value_t = 10000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact moment sequences.
    Moments {
        #[arg(long, value_enum)]
        engine: Engine,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value_t = WindowArg::Lorentzian)]
        window: WindowArg,
        /// Smear the squared time derivative instead of the field square.
        #[arg(long)]
        derivative: bool,
        #[arg(long, default_value_t = smearstat::wick4d::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Quantum inequality bounds for a window.
    Qi {
        #[arg(long, value_enum, default_value_t = WindowArg::Gaussian)]
        window: WindowArg,
    },
}

/// Failures carry their exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Engine(Error),
    /// Computation finished but disagrees with a golden value.
    Golden(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Engine(Error::Intractable { .. }) => 2,
            Failure::Engine(Error::InvalidParameter(_) | Error::Parse(_)) => 64,
            Failure::Engine(_) | Failure::Golden(_) | Failure::Io(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Golden(m) => m.clone(),
            Failure::Engine(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

fn validate(common: &Common) -> Result<(), Failure> {
    if !(common.tau > 0.0 && common.tau.is_finite()) {
        return Err(Failure::Usage(format!("--tau must be positive, got {}", common.tau)));
    }
    if !(common.central_charge > 0.0 && common.central_charge.is_finite()) {
        return Err(Failure::Usage(format!(
            "--central-charge must be positive, got {}",
            common.central_charge
        )));
    }
    if common.threads == Some(0) {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    Ok(())
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.output {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let path = match std::env::var_os("SMEARSTAT_OUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            std::fs::write(path, text)?;
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    let common = &cli.common;
    validate(common)?;
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let (text, failure) = match cli.command {
        Command::Dist { case, window } => (reports::dist(common, case, window)?, None),
        Command::Table1 { order, budget } => reports::table1(common, order, budget)?,
        Command::Fig1 { x_max } => (reports::fig1(common, x_max)?, None),
        Command::Sample { case, window, count, seed } => (reports::sample(common, case, window, count, seed)?, None),
        Command::Moments { engine, order, window, derivative, budget } => {
            (reports::moments(common, engine, order, window, derivative, budget)?, None)
        }
        Command::Qi { window } => (reports::qi(common, window)?, None),
    };
    emit(common, &text)?;
    match failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// Parses the process arguments, runs the command and maps the outcome to
/// an exit code.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::Usage("x".into()).code(), 64);
        assert_eq!(Failure::Engine(Error::Intractable { k: 9, budget: 8 }).code(), 2);
        assert_eq!(Failure::Engine(Error::InvalidParameter("tau".into())).code(), 64);
        assert_eq!(Failure::Engine(Error::FlowPole { lambda: 1.0, pole: 0.5 }).code(), 1);
        assert_eq!(Failure::Golden("order 3".into()).code(), 1);
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        assert_eq!(Failure::from(io).code(), 1);
    }

    #[test]
    fn parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["smearstat", "qi", "--tau", "2", "--format", "json"]).unwrap();
        assert_eq!(cli.common.tau, 2.0);
        assert!(matches!(cli.command, Command::Qi { .. }));
        assert!(Cli::try_parse_from(["smearstat", "dist", "--case", "nope"]).is_err());
    }
}
