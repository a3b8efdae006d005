//! `qdisc`: train, run, synthesize, verify, and benchmark the quantum
//! discriminator from the command line.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad input files, failed
//! verification), 2 on usage errors (unknown flags, invalid configs).

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdisc::bench::{
    emit_results, prepare_feature_set, run_experiment, DatasetKind, ExperimentConfig, NoiseConfig,
};
use qdisc::datasets::{
    bas_enumerate, iris_binary_subset, load_iris, separability_check, LabeledData, ThresholdRegime,
};
use qdisc::discriminator::{l1_error, Discriminator, FeatureVector, LabeledFeatureSet};
use qdisc::qcore::Circuit;
use qdisc::synth::{synthesize, two_bit_cases, verify_model_circuit};

#[derive(Parser)]
#[command(
    name = "qdisc",
    about = "Quantum discriminator for binary classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model from labeled binary features or an Iris CSV
    Train(TrainArgs),
    /// Predict the class of one feature bitstring
    Predict(PredictArgs),
    /// Compile a model into a circuit text file
    Synth(SynthArgs),
    /// Check circuits against model unitaries (all 16 reference cases, or
    /// one model/circuit pair)
    Verify(VerifyArgs),
    /// Run a Monte-Carlo benchmark experiment
    Bench(BenchArgs),
    /// Print all 22 viable bars-and-stripes grids as JSON
    EnumerateBas(EnumerateBasArgs),
}

#[derive(Args)]
struct TrainArgs {
    /// Labeled feature file: one `<bitstring> <label>` record per line
    #[arg(long, conflicts_with = "iris")]
    data: Option<PathBuf>,
    /// Iris CSV; trains on the Setosa/Virginica subset
    #[arg(long)]
    iris: Option<PathBuf>,
    /// Iris thresholds `sepal_length,sepal_width,petal_length` in cm
    #[arg(long, requires = "iris", value_parser = parse_regime)]
    regime: Option<ThresholdRegime>,
    /// Output model file (JSON)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Model file written by `train`
    #[arg(long)]
    model: PathBuf,
    /// Feature bitstring, e.g. `10`
    #[arg(long)]
    input: String,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    model: PathBuf,
    /// Output circuit text file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify the full 16-case two-bit reference suite
    #[arg(long = "all-16", conflicts_with_all = ["model", "circuit"])]
    all_16: bool,
    #[arg(long, requires = "circuit")]
    model: Option<PathBuf>,
    #[arg(long, requires = "model")]
    circuit: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = parse_dataset)]
    dataset: DatasetKind,
    /// Training partition size N; the rest of the dataset validates
    #[arg(long)]
    train_size: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Iris CSV (required when --dataset iris)
    #[arg(long)]
    iris_csv: Option<PathBuf>,
    /// Iris thresholds `sepal_length,sepal_width,petal_length` in cm
    #[arg(long, value_parser = parse_regime)]
    regime: Option<ThresholdRegime>,
    /// Noise model, e.g. `readout=0.035,gate=0.015,shots=1024`
    #[arg(long, value_parser = parse_noise)]
    noise: Option<NoiseConfig>,
    /// Output directory for results.json and histogram.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EnumerateBasArgs {
    /// Write the JSON array here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Domain failure (exit 1) or usage failure (exit 2).
enum CliError {
    Domain(String),
    Usage(String),
}

impl CliError {
    fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_regime(text: &str) -> Result<ThresholdRegime, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated thresholds".into());
    }
    let value = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    };
    let regime = ThresholdRegime {
        sepal_length_cm: value(parts[0])?,
        sepal_width_cm: value(parts[1])?,
        petal_length_cm: value(parts[2])?,
    };
    for t in [
        regime.sepal_length_cm,
        regime.sepal_width_cm,
        regime.petal_length_cm,
    ] {
        if !t.is_finite() {
            return Err("thresholds must be finite".into());
        }
    }
    Ok(regime)
}

fn parse_dataset(text: &str) -> Result<DatasetKind, String> {
    match text {
        "iris" => Ok(DatasetKind::Iris),
        "bas" => Ok(DatasetKind::Bas),
        other => Err(format!(
            "unknown dataset `{other}` (expected `iris` or `bas`)"
        )),
    }
}

fn parse_noise(text: &str) -> Result<NoiseConfig, String> {
    let mut noise = NoiseConfig::default();
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        match key.trim() {
            "readout" => {
                noise.readout_flip_prob = value
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad readout probability `{value}`"))?
            }
            "gate" => {
                noise.gate_flip_prob = value
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad gate probability `{value}`"))?
            }
            "shots" => {
                noise.shots = value
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad shot count `{value}`"))?
            }
            other => return Err(format!("unknown noise key `{other}`")),
        }
    }
    noise.validate()?;
    Ok(noise)
}

/// Parse the labeled feature file format: `<bitstring> <label>` per line,
/// `#` comments and blank lines ignored.
fn parse_feature_file(text: &str) -> CliResult<LabeledFeatureSet> {
    let mut pairs = Vec::new();
    for (index, raw_line) in text.lines().enumerate() {
        let row = index + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(bits), Some(label), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(CliError::Domain(format!(
                "row {row}: expected `<bitstring> <label>`, got `{line}`"
            )));
        };
        let features = FeatureVector::from_bitstring(bits)
            .map_err(|e| CliError::Domain(format!("row {row}: {e}")))?;
        let label: u8 = match label {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(CliError::Domain(format!(
                    "row {row}: label `{other}` is not 0 or 1"
                )))
            }
        };
        pairs.push((features, label));
    }
    let widths: Vec<usize> = pairs.iter().map(|(x, _)| x.width()).collect();
    if let Some(first) = widths.first() {
        if let Some(offender) = widths.iter().position(|w| w != first) {
            return Err(CliError::Domain(format!(
                "row {}: feature width {} differs from width {} of the first record",
                offender + 1,
                widths[offender],
                first
            )));
        }
    }
    LabeledFeatureSet::from_pairs(pairs).map_err(CliError::domain)
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))
}

fn load_model(path: &Path) -> CliResult<Discriminator> {
    Discriminator::from_json(&read_file(path)?).map_err(CliError::domain)
}

fn load_iris_subset(path: &Path) -> CliResult<LabeledData<qdisc::datasets::IrisDatum>> {
    let file = fs::File::open(path)
        .map_err(|e| CliError::Domain(format!("cannot open {}: {e}", path.display())))?;
    let rows = load_iris(BufReader::new(file)).map_err(CliError::domain)?;
    Ok(iris_binary_subset(&rows))
}

fn cmd_train(args: &TrainArgs) -> CliResult<()> {
    let data = match (&args.data, &args.iris) {
        (Some(path), None) => parse_feature_file(&read_file(path)?)?,
        (None, Some(path)) => {
            let subset = load_iris_subset(path)?;
            let regime = args.regime.unwrap_or_default();
            qdisc::datasets::iris_feature_set(&subset, &regime)
        }
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --data or --iris".into(),
            ))
        }
    };
    if data.is_empty() {
        return Err(CliError::Domain("no training records found".into()));
    }

    let model = Discriminator::train(&data);
    write_file(&args.out, &(model.to_json() + "\n"))?;

    let predictions: Vec<u8> = data
        .features()
        .iter()
        .map(|x| model.predict(x).expect("widths match by construction"))
        .collect();
    let accuracy = 1.0 - l1_error(&predictions, data.labels()).map_err(CliError::domain)?;
    println!(
        "N={} b={} |theta|={} training_accuracy={:.4}",
        data.len(),
        data.width(),
        model.theta_count(),
        accuracy
    );
    let report = separability_check(&data);
    if !report.separable {
        eprintln!(
            "warning: data not separable; {} pattern(s) carry both labels and train to class 1",
            report.conflicts.len()
        );
    }
    Ok(())
}

fn cmd_predict(args: &PredictArgs) -> CliResult<()> {
    let model = load_model(&args.model)?;
    let x = FeatureVector::from_bitstring(&args.input).map_err(CliError::domain)?;
    let label = model.predict(&x).map_err(CliError::domain)?;
    println!("{label}");
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> CliResult<()> {
    let model = load_model(&args.model)?;
    let circuit = synthesize(&model);
    write_file(&args.out, &circuit.to_text())?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    if args.all_16 {
        return verify_all_16();
    }
    let (Some(model_path), Some(circuit_path)) = (&args.model, &args.circuit) else {
        return Err(CliError::Usage(
            "pass --all-16, or both --model and --circuit".into(),
        ));
    };
    let model = load_model(model_path)?;
    let circuit = Circuit::parse(&read_file(circuit_path)?, model.feature_width() + 1)
        .map_err(CliError::domain)?;
    if verify_model_circuit(&model, &circuit).map_err(CliError::domain)? {
        println!("PASS: circuit matches the model unitary");
        Ok(())
    } else {
        Err(CliError::Domain(
            "FAIL: circuit does not match the model unitary".into(),
        ))
    }
}

/// Check every two-bit reference case end to end: training reproduces the
/// reference matrix, and both the synthesized and the reference circuits
/// verify against it.
fn verify_all_16() -> CliResult<()> {
    let mut failures = Vec::new();
    for fixture in two_bit_cases() {
        let model = Discriminator::train(&fixture.labeled_points());
        let trained_matrix =
            model.build_unitary().map_err(CliError::domain)? == fixture.reference_unitary;
        let synthesized_ok =
            verify_model_circuit(&model, &synthesize(&model)).map_err(CliError::domain)?;
        let reference_ok =
            verify_model_circuit(&model, &fixture.reference_circuit).map_err(CliError::domain)?;
        let ok = trained_matrix && synthesized_ok && reference_ok;
        println!(
            "case {:2}: {}",
            fixture.case_id,
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failures.push(fixture.case_id);
        }
    }
    let passed = 16 - failures.len();
    println!("{passed}/16 PASS");
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Domain(format!("failing cases: {failures:?}")))
    }
}

fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let config = ExperimentConfig {
        dataset: args.dataset,
        train_size: args.train_size,
        trials: args.trials,
        master_seed: args.seed,
        noise: args.noise,
        regime: match args.dataset {
            DatasetKind::Iris => Some(args.regime.unwrap_or_default()),
            DatasetKind::Bas => None,
        },
    };

    let iris_data = match args.dataset {
        DatasetKind::Iris => {
            let path = args.iris_csv.as_ref().ok_or_else(|| {
                CliError::Usage("--dataset iris requires --iris-csv <path>".into())
            })?;
            Some(load_iris_subset(path)?)
        }
        DatasetKind::Bas => None,
    };

    let data = prepare_feature_set(&config, iris_data.as_ref()).map_err(|e| match e {
        qdisc::bench::BenchError::InvalidConfig(msg) => CliError::Usage(msg),
        other => CliError::domain(other),
    })?;
    config
        .validate(data.len())
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let (stats, trials) = run_experiment(&data, &config).map_err(CliError::domain)?;
    emit_results(&config, &stats, &trials, &args.out).map_err(CliError::domain)?;
    println!(
        "accuracy mean = {:.2}% +- {:.2}% ({} trials, N={})",
        stats.accuracy.mean * 100.0,
        stats.accuracy.std * 100.0,
        args.trials,
        args.train_size
    );
    Ok(())
}

fn cmd_enumerate_bas(args: &EnumerateBasArgs) -> CliResult<()> {
    let grids = bas_enumerate();
    let mut json = serde_json::to_string_pretty(&grids).expect("grids serialize cleanly");
    json.push('\n');
    match &args.out {
        Some(path) => write_file(path, &json)?,
        None => print!("{json}"),
    }
    Ok(())
}

/// Cap rayon's pool when QDISC_THREADS is set; results do not depend on it.
fn configure_threads() -> CliResult<()> {
    if let Ok(value) = std::env::var("QDISC_THREADS") {
        let threads: usize = value.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
            CliError::Usage(format!("QDISC_THREADS=`{value}` is not a positive integer"))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Domain(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    configure_threads()?;
    match &cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::EnumerateBas(args) => cmd_enumerate_bas(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
    }
}
