use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use setsketch::RandomStream;
use setsketch_cli::{
    audit_passed, default_cardinality_grid, default_jaccard_grid, default_ratio_grid, files,
    generate_set, run_cardinality_experiment, run_joint_experiment, run_special_function_audit,
    run_throughput_benchmark, write_csv, CardinalitySpec, CsvRecord, HarnessError, JointEstimator,
    JointSpec, SketchKind, SketchParams, ThroughputSpec,
};

/// Cardinality that sketch files are sized for when `--q` is omitted, so
/// files built from different inputs stay mergeable.
const FILE_CAPACITY: u64 = 1 << 40;

#[derive(Parser)]
#[command(
    name = "setsketch",
    version,
    about = "SetSketch experiments and sketch files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relative bias, RMSE and kurtosis of cardinality estimates.
    Cardinality {
        #[command(flatten)]
        common: Common,
        /// Cardinalities to estimate at, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = default_cardinality_grid())]
        grid: Vec<u64>,
    },
    /// RMSE of Jaccard similarity and derived quantities.
    Joint {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        union_size: usize,
        #[arg(long, value_delimiter = ',', default_values_t = default_jaccard_grid())]
        jaccard_grid: Vec<f64>,
        /// Values of |A\B| / |B\A|.
        #[arg(long, value_delimiter = ',', default_values_t = default_ratio_grid())]
        ratio_grid: Vec<f64>,
        /// Give the likelihood estimator the true set sizes instead of estimates.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        known_cardinalities: bool,
    },
    /// Insert time and hash values generated per element.
    Throughput {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = vec![100u64, 1_000, 10_000, 100_000, 1_000_000])]
        grid: Vec<u64>,
        /// Lower-bound tracking for GHLL.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        ghll_lower_bound: bool,
    },
    /// Check the series functions against their stated error bounds.
    Audit {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build, merge and query sketch files.
    #[command(subcommand)]
    Sketch(SketchCommand),
}

#[derive(Subcommand)]
enum SketchCommand {
    /// Sketch integers read from a file (one per line) or random ones.
    Build {
        #[command(flatten)]
        config: ConfigArgs,
        /// Input file, `-` for stdin.
        #[arg(long, conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Number of random elements to insert instead of reading input.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Union of sketches with identical parameters.
    Merge {
        #[arg(required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cardinality of one sketch, or joint quantities of two.
    Estimate {
        #[arg(num_args = 1..=2, required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, value_enum, default_value_t = SketchKind::SetSketch1)]
    sketch: SketchKind,
    #[arg(long, default_value_t = 256)]
    m: usize,
    #[arg(long, default_value_t = 2.0)]
    b: f64,
    #[arg(long, default_value_t = 20.0)]
    a: f64,
    /// Largest regular register value; derived from the cardinality range if omitted.
    #[arg(long)]
    q: Option<u32>,
}

impl ConfigArgs {
    fn params(&self) -> SketchParams {
        SketchParams {
            q: self.q,
            ..SketchParams::new(self.sketch, self.m, self.b, self.a)
        }
    }
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit<R: CsvRecord>(records: &[R], out: Option<&PathBuf>) -> Result<(), HarnessError> {
    match out {
        Some(path) => write_csv(records, File::create(path)?),
        None => write_csv(records, io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Cardinality { common, grid } => {
            let spec = CardinalitySpec {
                sketch: common.config.params(),
                trials: common.trials,
                seed: common.seed,
                grid,
            };
            emit(&run_cardinality_experiment(&spec)?, common.out.as_ref())?;
        }
        Command::Joint {
            common,
            union_size,
            jaccard_grid,
            ratio_grid,
            known_cardinalities,
        } => {
            let kind = common.config.sketch;
            let spec = JointSpec {
                sketch: common.config.params(),
                trials: common.trials,
                seed: common.seed,
                union_size,
                jaccard_grid,
                ratio_grid,
                estimators: JointEstimator::defaults(kind, known_cardinalities),
            };
            emit(&run_joint_experiment(&spec)?, common.out.as_ref())?;
        }
        Command::Throughput {
            common,
            grid,
            ghll_lower_bound,
        } => {
            let spec = ThroughputSpec {
                sketch: SketchParams {
                    ghll_lower_bound,
                    ..common.config.params()
                },
                trials: common.trials,
                seed: common.seed,
                grid,
            };
            emit(&run_throughput_benchmark(&spec)?, common.out.as_ref())?;
        }
        Command::Audit { out } => {
            let records = run_special_function_audit()?;
            emit(&records, out.as_ref())?;
            if !audit_passed(&records) {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Sketch(cmd) => sketch_command(cmd)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn sketch_command(cmd: SketchCommand) -> Result<(), HarnessError> {
    let mut stdout = io::stdout().lock();
    match cmd {
        SketchCommand::Build {
            config,
            input,
            random,
            seed,
            out,
        } => {
            let elements = match (input, random) {
                (_, Some(n)) => generate_set(n, &mut RandomStream::from_seed(seed)),
                (Some(path), None) if path.as_os_str() == "-" => {
                    files::read_elements(io::stdin().lock())?
                }
                (Some(path), None) => files::read_elements(BufReader::new(File::open(path)?))?,
                (None, None) => {
                    return Err(HarnessError::Spec(
                        "either --input or --random is required".into(),
                    ));
                }
            };
            let mut sketch = config.params().build(FILE_CAPACITY)?;
            elements.iter().for_each(|&e| sketch.insert(e));
            files::save(&sketch, &out)?;
        }
        SketchCommand::Merge { inputs, out } => {
            let sketches = inputs
                .iter()
                .map(|p| files::load(p))
                .collect::<Result<Vec<_>, _>>()?;
            files::save(&files::merge_all(&sketches)?, &out)?;
        }
        SketchCommand::Estimate { inputs } => {
            let sketches = inputs
                .iter()
                .map(|p| files::load(p))
                .collect::<Result<Vec<_>, _>>()?;
            if let [one] = sketches.as_slice() {
                writeln!(stdout, "{}\t{}", one.kind_name(), one.estimate()?)?;
            } else {
                let joint = files::compare(&sketches[0], &sketches[1])?;
                writeln!(stdout, "cardinality_a\t{}", joint.n_a)?;
                writeln!(stdout, "cardinality_b\t{}", joint.n_b)?;
                writeln!(stdout, "jaccard\t{}", joint.jaccard)?;
                let q = joint.quantities();
                for (name, value) in [
                    ("union", q.union_size),
                    ("intersection", q.intersection_size),
                    ("difference_a_minus_b", q.diff_a_minus_b),
                    ("difference_b_minus_a", q.diff_b_minus_a),
                    ("cosine", q.cosine),
                    ("inclusion_a", q.inclusion_a),
                    ("inclusion_b", q.inclusion_b),
                ] {
                    writeln!(stdout, "{name}\t{value}")?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
