//! `resonance`: pole searches, S-matrix scans, wavefunctions, decay curves,
//! Green-function slices and the invariant suite for one barrier.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use resonance_core::{BarrierSpec, ComplexRect};

#[derive(Parser, Debug)]
#[command(name = "resonance", version, about = "Resonance poles of the 3-D square barrier")]
pub struct Cli {
    /// JSON barrier file `{"v0", "a", "b", "hbar", "mass"}`; reference barrier if absent
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Partial wave
    #[arg(long, global = true, default_value_t = 0)]
    pub l: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout if absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Search rectangle in the k-plane. The upper edge is clipped below the real axis.
#[derive(Args, Debug, Clone, Copy)]
pub struct RectArgs {
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub re_min: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub re_max: f64,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub im_min: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub im_max: f64,
}

impl RectArgs {
    pub fn rect(&self) -> Result<ComplexRect, CliError> {
        ComplexRect::new(self.re_min, self.re_max, self.im_min, self.im_max).map_err(CliError::usage)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Poles of S_l in a rectangle, certified by three methods
    Poles {
        #[command(flatten)]
        rect: RectArgs,
        #[arg(long, default_value_t = 16)]
        max_poles: usize,
    },
    /// S_l(E) and δ_l(E) on a uniform energy grid
    Smatrix {
        #[arg(long)]
        e_min: f64,
        #[arg(long)]
        e_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// χ_l(r) at a real energy or the Gamow state of a pole
    Wavefunction {
        /// Index into the pole list (sorted by Re k)
        #[arg(long, conflicts_with = "energy", required_unless_present = "energy")]
        pole: Option<usize>,
        #[arg(long)]
        energy: Option<f64>,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        rect: RectArgs,
    },
    /// Shell-detection probability of a decaying Gamow state
    Decay {
        #[arg(long, default_value_t = 0)]
        pole: usize,
        #[arg(long)]
        r0: f64,
        #[arg(long, default_value_t = 0.1)]
        dr0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t_min: f64,
        /// Defaults to r0/v + 10ħ/Γ
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[command(flatten)]
        rect: RectArgs,
    },
    /// G_l(r, r'; k) along r at fixed r'
    Green {
        #[arg(long, allow_negative_numbers = true)]
        k_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        k_im: f64,
        #[arg(long)]
        rprime: f64,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Run the invariant suite; exit 0 iff everything passes
    Verify {
        #[command(flatten)]
        rect: RectArgs,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// bad flags or config, exit 2
    Usage(String),
    /// computation or verification failed, exit 1
    Failure(String),
}

impl CliError {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn failure(e: impl std::fmt::Display) -> Self {
        CliError::Failure(e.to_string())
    }
}

fn load_spec(path: Option<&PathBuf>) -> Result<BarrierSpec, CliError> {
    match path {
        None => Ok(BarrierSpec::reference()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            BarrierSpec::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_spec(cli.config.as_ref()).and_then(|spec| commands::run(&cli, &spec));
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
