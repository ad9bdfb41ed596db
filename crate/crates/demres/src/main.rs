//! `demres`: exact Morse intersection numbers on Demailly jet towers.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use demres_core::morse::{PipelineSelection, SearchRequest};
use demres_core::rational::to_fraction_string;
use demres_core::{
    chern_of_geometry, minimal_degree_search, morse_number, Basis, Execution, GeometryKind,
    MorseError, MorseReport, SearchReport, TowerConfig, TowerError, WeightVector,
};

#[derive(Parser, Debug)]
#[command(
    name = "demres",
    version,
    about = "Intersection numbers on Demailly towers via iterated residues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Morse intersection number for one geometry.
    Compute(ComputeArgs),
    /// Scan hypersurface degrees for a positive Morse number.
    Search(SearchArgs),
    /// Check a weight vector against a relative ampleness condition.
    ValidateWeights(ValidateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GeometryArg {
    Pn,
    Hypersurface,
    #[value(name = "log-pn")]
    LogPn,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Pn => GeometryKind::ProjectiveSpace,
            GeometryArg::Hypersurface => GeometryKind::HypersurfaceTangent,
            GeometryArg::LogPn => GeometryKind::LogProjective,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PipelineArg {
    Residue,
    Stepwise,
    Phi,
    All,
}

impl From<PipelineArg> for PipelineSelection {
    fn from(p: PipelineArg) -> Self {
        use demres_core::Pipeline;
        match p {
            PipelineArg::Residue => PipelineSelection::Single(Pipeline::Residue),
            PipelineArg::Stepwise => PipelineSelection::Single(Pipeline::Stepwise),
            PipelineArg::Phi => PipelineSelection::Single(Pipeline::PhiForm),
            PipelineArg::All => PipelineSelection::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BasisArg {
    Taut,
    #[value(name = "L", alias = "l")]
    L,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Taut => Basis::Taut,
            BasisArg::L => Basis::L,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum OutputArg {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long, value_enum)]
    geometry: GeometryArg,
    /// Dimension of the base.
    #[arg(long)]
    n: u32,
    #[arg(long)]
    kappa: usize,
    /// Comma separated weights a_1,...,a_kappa.
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    ample_power: u32,
    #[arg(long, value_enum, default_value_t = PipelineArg::Residue)]
    pipeline: PipelineArg,
    #[arg(long, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,
    #[arg(long, value_enum, default_value_t = BasisArg::Taut)]
    basis: BasisArg,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Degree of the hypersurface or log divisor.
    #[arg(long)]
    degree: Option<u32>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    d_max: u32,
    /// Evaluate degrees one after another.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long, value_enum)]
    basis: BasisArg,
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<u32>,
}

enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<MorseError> for Failure {
    fn from(e: MorseError) -> Self {
        match e {
            MorseError::PipelineDisagreement(_) => Failure::Internal(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<TowerError> for Failure {
    fn from(e: TowerError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn weights_for(common: &CommonArgs) -> Result<WeightVector, Failure> {
    if common.weights.len() != common.kappa {
        return Err(Failure::Invalid(format!(
            "expected {} weights for kappa = {}, found {}",
            common.kappa,
            common.kappa,
            common.weights.len()
        )));
    }
    Ok(WeightVector::new(
        common.weights.clone(),
        common.ample_power,
    )?)
}

fn compute(args: &ComputeArgs) -> Result<String, Failure> {
    let c = &args.common;
    let kind = GeometryKind::from(c.geometry);
    if !kind.uses_degree() && args.degree.is_some() {
        return Err(MorseError::DegreeNotApplicable.into());
    }
    if kind.uses_degree() && args.degree.is_none() {
        return Err(Failure::Invalid(format!(
            "--degree is required for {}",
            kind.cli_name()
        )));
    }
    let weights = weights_for(c)?;
    let geom = chern_of_geometry(kind, c.n, args.degree).map_err(MorseError::from)?;
    let cfg = TowerConfig::for_geometry(&geom, c.kappa)?;
    let report = morse_number(&geom, &cfg, &weights, c.pipeline.into(), c.basis.into())?;
    Ok(match c.output {
        OutputArg::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        OutputArg::Text => compute_text(&report),
    })
}

fn compute_text(r: &MorseReport) -> String {
    let mut out = format!("geometry   {}\n", r.geometry);
    out += &format!("n          {}\n", r.n);
    if let Some(d) = r.degree {
        out += &format!("degree     {d}\n");
    }
    out += &format!(
        "kappa      {} (r = {}, n_kappa = {})\n",
        r.kappa, r.r, r.n_kappa
    );
    out += &format!(
        "weights    {:?}, ample power {}\n",
        r.weights, r.ample_power
    );
    out += &format!("pipeline   {}\n", r.pipeline);
    out += &format!("value      {}\n", to_fraction_string(&r.value));
    out += &format!("positive   {}\n", r.positive);
    for (p, ms) in &r.timings_ms {
        out += &format!("time[{p}]  {ms:.3} ms\n");
    }
    out
}

fn search(args: &SearchArgs) -> Result<String, Failure> {
    let c = &args.common;
    let req = SearchRequest {
        kind: c.geometry.into(),
        n: c.n,
        kappa: c.kappa,
        weights: weights_for(c)?,
        d_max: args.d_max,
        selection: c.pipeline.into(),
        basis: c.basis.into(),
    };
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let report = minimal_degree_search(&req, exec)?;
    Ok(match c.output {
        OutputArg::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        OutputArg::Text => search_text(&report),
    })
}

fn search_text(r: &SearchReport) -> String {
    let mut out = String::new();
    for e in &r.entries {
        out += &format!(
            "d = {:>3}  {:>6}  {}\n",
            e.degree,
            if e.positive { "+" } else { "-" },
            to_fraction_string(&e.value)
        );
    }
    match (r.minimal_degree, r.stays_positive) {
        (Some(d), Some(stays)) => {
            out +=
                &format!("minimal degree {d}; positive for every larger scanned degree: {stays}\n")
        }
        _ => out += &format!("no positive value for d <= {}\n", r.d_max),
    }
    out
}

fn validate(args: &ValidateArgs) -> Result<String, Failure> {
    let basis = Basis::from(args.basis);
    if basis.validate(&args.weights)? {
        Ok(format!("valid ({basis} basis)"))
    } else {
        Err(Failure::Invalid(format!(
            "weights {:?} fail the {basis} basis condition",
            args.weights
        )))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Search(a) => search(a),
        Command::ValidateWeights(a) => validate(a),
    };
    match result {
        Ok(text) => {
            println!("{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
