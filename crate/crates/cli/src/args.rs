use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "moduli",
    version,
    about = "Crown and disc moduli volumes, sweeps and identity checks"
)]
pub struct Cli {
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add a wall_time_ms field to every record.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one volume.
    #[command(subcommand)]
    Volume(VolumeKind),
    /// Crown volumes over a grid of perimeters, as CSV.
    Sweep(SweepArgs),
    /// Run an identity suite and report residuals.
    Check(CheckArgs),
}

#[derive(Debug, Subcommand)]
pub enum VolumeKind {
    /// Crown with n cusps on a hole of perimeter P.
    Crown(CrownArgs),
    /// Disc with n boundary cusps.
    Disc(DiscArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mc,
    Quad,
    Closed,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Mc => "mc",
            Method::Quad => "quad",
            Method::Closed => "closed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProposalArg {
    Uniform,
    DirichletHalf,
}

impl From<ProposalArg> for moduli_core::Proposal {
    fn from(p: ProposalArg) -> Self {
        match p {
            ProposalArg::Uniform => moduli_core::Proposal::Uniform,
            ProposalArg::DirichletHalf => moduli_core::Proposal::DirichletHalf,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Monte Carlo sample count (default 10^6 up to four cusps, 10^7 beyond).
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Default: Monte Carlo if --samples is given, else closed form where
    /// known, then quadrature, then Monte Carlo.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, value_enum, default_value_t = ProposalArg::DirichletHalf)]
    pub proposal: ProposalArg,
}

#[derive(Debug, Args)]
pub struct CrownArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub pmin: f64,
    #[arg(long)]
    pub pmax: f64,
    #[arg(long)]
    pub steps: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Specfun,
    Poisson,
    Geometry,
    Continuum,
    All,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}
