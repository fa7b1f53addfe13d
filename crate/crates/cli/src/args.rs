use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{
    Axis, Condition, EnvelopeKind, Format, MarkerBasisArg, Order, Parameters, PatternKind, Preset, SignArg, Source,
};

#[derive(Debug, Parser)]
#[command(name = "eraser", version, about = "Quantum eraser scenario runner")]
pub struct Cli {
    /// TOML scenario file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file, `-` for stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Directory for artifacts when no output path is given.
    #[arg(long, global = true, env = "ERASER_OUTPUT_DIR", value_name = "DIR")]
    pub output_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detector probabilities of the n-channel interferometer.
    Nchannel(NchannelArgs),
    /// Screen pattern of the two-slit eraser.
    Twoslit(TwoslitArgs),
    /// Joint spin table of the singlet-like pair.
    Epr(EprArgs),
    /// Seeded event log of joint system and marker outcomes.
    Sample(SampleArgs),
    /// Run the scenario named by `kind` in the config file.
    Run,
    /// Run the invariant suite.
    Check,
}

#[derive(Debug, Args)]
pub struct NchannelArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Comma-separated splitter phases θ_j.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub thetas: Option<Vec<f64>>,
    /// Comma-separated splitter phases φ_j.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub phis: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub condition: Option<Condition>,
    /// Erasure-basis angle for dplus and dminus.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Omit the marker.
    #[arg(long)]
    pub bare: bool,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    /// Slit separation.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Slit-to-screen distance.
    #[arg(long)]
    pub distance: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long, value_enum)]
    pub envelope: Option<EnvelopeKind>,
    /// Width of the gaussian envelope.
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TwoslitArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, value_enum)]
    pub sign: Option<SignArg>,
    #[arg(long, value_enum)]
    pub pattern: Option<PatternKind>,
}

#[derive(Debug, Args)]
pub struct EprArgs {
    #[arg(long, value_enum)]
    pub basis1: Option<Axis>,
    #[arg(long, value_enum)]
    pub basis2: Option<Axis>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub source: Option<Source>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub thetas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub phis: Option<Vec<f64>>,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Marker measurement basis.
    #[arg(long, value_enum)]
    pub basis: Option<MarkerBasisArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, value_enum)]
    pub basis1: Option<Axis>,
    #[arg(long, value_enum)]
    pub basis2: Option<Axis>,
    #[arg(long, value_enum)]
    pub order: Option<Order>,
    /// Number of events.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Scenario id written in every log row.
    #[arg(long)]
    pub id: Option<String>,
}

impl GeometryArgs {
    fn fill(&self, p: Parameters) -> Parameters {
        Parameters {
            d: self.d,
            lambda: self.lambda,
            distance: self.distance,
            x_min: self.x_min,
            x_max: self.x_max,
            bins: self.bins,
            envelope: self.envelope,
            sigma: self.sigma,
            ..p
        }
    }
}

impl NchannelArgs {
    pub fn parameters(&self) -> Parameters {
        Parameters {
            n: self.n,
            preset: self.preset,
            thetas: self.thetas.clone(),
            phis: self.phis.clone(),
            condition: self.condition,
            theta: self.theta,
            bare: self.bare.then_some(true),
            ..Default::default()
        }
    }
}

impl TwoslitArgs {
    pub fn parameters(&self) -> Parameters {
        self.geometry.fill(Parameters {
            preset: self.preset,
            theta: self.theta,
            sign: self.sign,
            pattern: self.pattern,
            ..Default::default()
        })
    }
}

impl EprArgs {
    pub fn parameters(&self) -> Parameters {
        Parameters { basis1: self.basis1, basis2: self.basis2, ..Default::default() }
    }
}

impl SampleArgs {
    pub fn parameters(&self) -> Parameters {
        self.geometry.fill(Parameters {
            source: self.source,
            n: self.n,
            preset: self.preset,
            thetas: self.thetas.clone(),
            phis: self.phis.clone(),
            basis: self.basis,
            theta: self.theta,
            basis1: self.basis1,
            basis2: self.basis2,
            order: self.order,
            count: self.count,
            seed: self.seed,
            id: self.id.clone(),
            ..Default::default()
        })
    }
}
