//! `slocc`: classify three-qubit states, check the measurement mappings, run
//! tomography and regenerate the result tables.

mod inputs;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use slocc_core::mapping::{protocol_expectations_dm, verification_report};
use slocc_core::measurement::{derive_seed, mean_std, ExactSource, MeanStd, SampledSource};
use slocc_core::entanglement::negativity_min_dm;
use slocc_core::{
    classify_record, fidelity, negativity_min, results_row, tomography, MeasurementConfig, NamedState,
    NoiseModel, RunSettings, StateDocument, StateInput,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl From<slocc_core::Error> for CliError {
    fn from(e: slocc_core::Error) -> Self {
        use slocc_core::Error as E;
        match e {
            E::NegativeTangle(_) | E::RecipeVerification { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "slocc", version, about = "Three-qubit SLOCC classification from four Pauli expectations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure the four protocol observables and label each state.
    Classify {
        #[command(flatten)]
        states: StateArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check all 63 Pauli-to-z mapping circuits.
    VerifyMappings {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Results and negativity tables; defaults to the seven named states plus
    /// 20 generated ones, 10^4 shots and depolarizing p = 0.08.
    Tables {
        #[command(flatten)]
        states: StateArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reconstruct density matrices from all 63 Pauli settings.
    Tomography {
        #[command(flatten)]
        states: StateArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit seeded random canonical-form states as re-ingestible documents.
    RandomGen {
        /// Number of states.
        #[arg(long = "random", value_name = "N", default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct StateArgs {
    /// State document(s): a JSON file path, or inline JSON.
    #[arg(long, value_name = "PATH|JSON")]
    state: Option<String>,
    /// Comma-separated named states (GHZ, WWbar, W, BS1, BS2, BS3, Sep) or "all".
    #[arg(long, value_name = "NAMES")]
    named: Option<String>,
    /// Canonical parameters a0,a1,a2,a3,a4,theta; repeatable.
    #[arg(long, value_name = "PARAMS", allow_hyphen_values = true)]
    canonical: Vec<String>,
    /// Add N seeded random canonical states.
    #[arg(long, value_name = "N")]
    random: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Master seed for generation and sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shots per measurement setting.
    #[arg(long, conflicts_with = "exact")]
    shots: Option<u64>,
    /// Exact expectations instead of shot sampling.
    #[arg(long)]
    exact: bool,
    /// Depolarizing weight p in [0, 1].
    #[arg(long, value_name = "P")]
    depolarizing: Option<f64>,
    /// Gaussian readout noise on each estimate.
    #[arg(long, value_name = "SIGMA", default_value_t = 0.0)]
    readout_sigma: f64,
    /// Threshold above which a value counts as nonzero.
    #[arg(long, default_value_t = slocc_core::classifier::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Repetitions for mean and spread.
    #[arg(long, default_value_t = 1)]
    reps: usize,
}

impl RunArgs {
    fn settings(&self, default_shots: Option<u64>, default_p: f64) -> Result<RunSettings, CliError> {
        let settings = RunSettings {
            shots: if self.exact { None } else { self.shots.or(default_shots) },
            noise: NoiseModel {
                depolarizing_p: self.depolarizing.unwrap_or(default_p),
                readout_sigma: self.readout_sigma,
            },
            epsilon: self.epsilon,
            repetitions: self.reps,
            seed: self.seed,
        };
        settings.validate()?;
        Ok(settings)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; a directory for `tables`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl StateArgs {
    fn is_empty(&self) -> bool {
        self.state.is_none() && self.named.is_none() && self.canonical.is_empty() && self.random.is_none()
    }

    fn inputs(&self, seed: u64) -> Result<Vec<StateInput>, CliError> {
        let mut all = Vec::new();
        if let Some(arg) = &self.named {
            all.extend(inputs::named_inputs(&inputs::parse_named(arg)?));
        }
        for (k, arg) in self.canonical.iter().enumerate() {
            let p = inputs::parse_canonical(arg)?;
            all.push(StateInput { name: format!("C{}", k + 1), document: StateDocument::Canonical(p), generated: false });
        }
        if let Some(arg) = &self.state {
            all.extend(inputs::document_inputs(inputs::load_documents(arg)?));
        }
        if let Some(n) = self.random {
            all.extend(inputs::generated_inputs(n, seed));
        }
        Ok(all)
    }
}

fn require_states(states: &StateArgs, command: &str) -> Result<(), CliError> {
    if states.is_empty() {
        return Err(CliError::Usage(format!("{command}: one of --state, --named, --canonical or --random is required")));
    }
    Ok(())
}

fn run_classify(states: &StateArgs, run: &RunArgs, output: &OutputArgs) -> Result<(), CliError> {
    require_states(states, "classify")?;
    let settings = run.settings(None, 0.0)?;
    let inputs = states.inputs(run.seed)?;
    let records = inputs
        .par_iter()
        .enumerate()
        .map(|(k, input)| classify_record(input, &settings, inputs::state_seed(run.seed, k)))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&records)?,
        Format::Csv => output::classify_csv(&records)?,
    };
    output::emit(&text, output.out.as_deref())
}

fn run_verify(output: &OutputArgs) -> Result<(), CliError> {
    let report = verification_report();
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&report)?,
        Format::Csv => output::verification_csv(&report)?,
    };
    output::emit(&text, output.out.as_deref())
}

#[derive(Serialize)]
struct Tables<'a> {
    settings: RunSettings,
    rows: &'a [slocc_core::ResultsRow],
}

fn run_tables(states: &StateArgs, run: &RunArgs, output: &OutputArgs) -> Result<(), CliError> {
    let settings = run.settings(Some(10_000), 0.08)?;
    let inputs = if states.is_empty() {
        let mut all = inputs::named_inputs(&NamedState::ALL);
        all.extend(inputs::generated_inputs(20, run.seed));
        all
    } else {
        states.inputs(run.seed)?
    };
    let rows = inputs
        .par_iter()
        .enumerate()
        .map(|(k, input)| results_row(input, &settings, inputs::state_seed(run.seed, k)))
        .collect::<Result<Vec<_>, _>>()?;
    let format = output.format.unwrap_or(Format::Csv);
    let files = match format {
        Format::Json => vec![("tables.json", output::json(&Tables { settings, rows: &rows })?)],
        Format::Csv => vec![("results.csv", output::results_csv(&rows)?), ("negativity.csv", output::negativity_csv(&rows)?)],
    };
    match &output.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("creating {}: {e}", dir.display())))?;
            for (name, text) in &files {
                output::emit(text, Some(&dir.join(name)))?;
            }
            Ok(())
        }
        None if format == Format::Json => output::emit(&files[0].1, None),
        None => {
            let joined = files.iter().map(|(name, text)| format!("# {name}\n{text}")).collect::<Vec<_>>().join("\n");
            output::emit(&joined, None)
        }
    }
}

#[derive(Serialize)]
struct DensityDocument {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TomographyRecord {
    state: String,
    document: StateDocument,
    provenance: MeasurementConfig,
    fidelity: MeanStd,
    negativity_theory: f64,
    negativity_reconstructed: MeanStd,
    protocol_values: [f64; 4],
    /// Reconstruction from the first repetition.
    density_matrix: DensityDocument,
}

fn tomography_record(input: &StateInput, settings: &RunSettings, seed: u64) -> Result<TomographyRecord, CliError> {
    let psi = input.state()?;
    let ideal = psi.to_density();
    let prepared = settings.noise.depolarize(&ideal)?;
    let reconstructions = (0..settings.repetitions as u64)
        .map(|rep| match settings.shots {
            None => tomography(&ExactSource(&prepared)),
            Some(shots) => tomography(&SampledSource { rho: &ideal, shots, seed: derive_seed(seed, rep), noise: settings.noise }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fidelities = reconstructions.iter().map(|r| fidelity(r, &ideal)).collect::<Result<Vec<_>, _>>()?;
    let negativities = reconstructions.iter().map(negativity_min_dm).collect::<Result<Vec<_>, _>>()?;
    let first = reconstructions[0].matrix();
    let part = |im: bool| (0..8).map(|r| (0..8).map(|c| if im { first[(r, c)].im } else { first[(r, c)].re }).collect()).collect();
    Ok(TomographyRecord {
        state: input.name.clone(),
        document: input.document.clone(),
        provenance: settings.measurement(seed),
        fidelity: mean_std(&fidelities),
        negativity_theory: negativity_min(&psi)?,
        negativity_reconstructed: mean_std(&negativities),
        protocol_values: protocol_expectations_dm(&reconstructions[0]),
        density_matrix: DensityDocument { re: part(false), im: part(true) },
    })
}

fn run_tomography(states: &StateArgs, run: &RunArgs, output: &OutputArgs) -> Result<(), CliError> {
    require_states(states, "tomography")?;
    let settings = run.settings(None, 0.0)?;
    let inputs = states.inputs(run.seed)?;
    let records = inputs
        .par_iter()
        .enumerate()
        .map(|(k, input)| tomography_record(input, &settings, inputs::state_seed(run.seed, k)))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&records)?,
        Format::Csv => output::tomography_csv(&records.iter().map(|r| r.summary()).collect::<Vec<_>>())?,
    };
    output::emit(&text, output.out.as_deref())
}

impl TomographyRecord {
    fn summary(&self) -> output::TomographySummary {
        output::TomographySummary {
            state: self.state.clone(),
            fidelity: self.fidelity,
            negativity_theory: self.negativity_theory,
            negativity_reconstructed: self.negativity_reconstructed,
            protocol_values: self.protocol_values,
        }
    }
}

fn run_random_gen(count: usize, seed: u64, output: &OutputArgs) -> Result<(), CliError> {
    let docs: Vec<StateDocument> = inputs::generated_params(count, seed).into_iter().map(StateDocument::Canonical).collect();
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&docs)?,
        Format::Csv => {
            let names: Vec<String> = (1..=count).map(|k| format!("R{k}")).collect();
            output::documents_csv(&names, &docs)?
        }
    };
    output::emit(&text, output.out.as_deref())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify { states, run, output } => run_classify(states, run, output),
        Command::VerifyMappings { output } => run_verify(output),
        Command::Tables { states, run, output } => run_tables(states, run, output),
        Command::Tomography { states, run, output } => run_tomography(states, run, output),
        Command::RandomGen { count, seed, output } => run_random_gen(*count, *seed, output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => Cli::command().error(ErrorKind::MissingRequiredArgument, msg).exit(),
        Err(e) => {
            let (CliError::Validation(msg) | CliError::Runtime(msg) | CliError::Usage(msg)) = &e;
            eprintln!("error: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
