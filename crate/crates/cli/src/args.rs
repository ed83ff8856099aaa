use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::table::Format;

#[derive(Debug, Parser)]
#[command(name = "xpzeta", version, about = "Spectra of the interacting xp model and the Riemann zeros")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Run-metadata JSON path; defaults to <output>.meta.json when --output is set.
    #[arg(long, global = true)]
    pub meta: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    pub format: Format,
    /// key=value file supplying parameters not given as flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountingKind {
    BerryKeating,
    Connes,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Step,
    ZetaSigma,
    Critical,
    Smooth,
    TypeI,
    TypeII,
}

/// Parameters selecting a Jost function.
#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub a1: Option<f64>,
    /// Step edge as a rational, e.g. 2 or 3/2.
    #[arg(long)]
    pub x1: Option<String>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Dirichlet polynomial 𝐚 as JSON (type-i and type-ii models).
    #[arg(long)]
    pub poly_a: Option<PathBuf>,
    /// Dirichlet polynomial 𝐛 as JSON (type-ii model).
    #[arg(long)]
    pub poly_b: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub t_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_hi: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semiclassical counting function on an energy grid.
    Counting {
        #[arg(long, value_enum)]
        variant: Option<CountingKind>,
        #[arg(long)]
        e_lo: Option<f64>,
        #[arg(long)]
        e_hi: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        l_x: Option<f64>,
    },
    /// Eigenvalues of the self-adjoint xp operator on the box (1, N).
    XpSpectrum {
        #[arg(long = "n-box")]
        n_box: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        n_lo: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        n_hi: Option<i64>,
    },
    /// Roots of the Russian-doll eigencondition.
    RdSpectrum {
        #[arg(long, allow_hyphen_values = true)]
        g: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<f64>,
        #[arg(long = "n-box")]
        n_box: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        e_lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        e_hi: Option<f64>,
    },
    /// Smooth approximation to the first zeros, θ(E) = (n − ½)π.
    SmoothZeros {
        #[arg(long)]
        count: Option<u32>,
    },
    /// Riemann zeros from sign changes of Z(t).
    TrueZeros {
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Bound states of the step potential with their analytic values.
    StepDemo {
        #[arg(long)]
        a1: Option<f64>,
        #[arg(long)]
        x1: Option<String>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Jost function F(t) on a grid, for Argand plots.
    Argand {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Reconstruct the potential 𝐚 for the target ζ(σ − it)/ζ(σ).
    Invert {
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        n_terms: Option<u64>,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long)]
        coeff_floor: Option<f64>,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Also write the converged 𝐚 as Dirichlet-polynomial JSON.
        #[arg(long)]
        potential_out: Option<PathBuf>,
    },
    /// Mellin transform of the sine potential against its stated asymptotics.
    MellinCheck {
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Spectrum of the discretized inverse Hamiltonian.
    MatrixOracle {
        #[arg(long = "n-box")]
        n_box: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        /// Step height; the free kernel when omitted.
        #[arg(long)]
        a1: Option<f64>,
        #[arg(long)]
        x1: Option<String>,
        /// Localization edge in x; defaults to 2·x1, or 4 for the free kernel.
        #[arg(long)]
        edge: Option<f64>,
        /// Also dump eigenvectors as little-endian f64 rows (μ, re, im, ...).
        #[arg(long)]
        eigenvectors: Option<PathBuf>,
    },
    /// Reality, regularity and positivity checks of a Jost function.
    ValidateJost {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        scan: ScanArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Counting { .. } => "counting",
            Command::XpSpectrum { .. } => "xp-spectrum",
            Command::RdSpectrum { .. } => "rd-spectrum",
            Command::SmoothZeros { .. } => "smooth-zeros",
            Command::TrueZeros { .. } => "true-zeros",
            Command::StepDemo { .. } => "step-demo",
            Command::Argand { .. } => "argand",
            Command::Invert { .. } => "invert",
            Command::MellinCheck { .. } => "mellin-check",
            Command::MatrixOracle { .. } => "matrix-oracle",
            Command::ValidateJost { .. } => "validate-jost",
        }
    }
}
