use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use concentra::distance::{envelope, Threshold};
use concentra::format::g12;
use concentra::functionals::{compute_report, Reference};
use concentra::grid::{read_gset, write_gset};
use concentra::shapes::{generate, ShapeSpec};
use concentra::steiner::{polylem_constant, MAX_DEGREE};
use concentra::sweep::{summary_json, sweep, write_csv, SweepOptions, DEFAULT_R_GRID};
use concentra::verify::{run_verify, Level, VerifyOptions};
use concentra::{Error, GridSet};

#[derive(Parser)]
#[command(name = "concentra", version, about = "Concentration and isoperimetric deficits of planar grid sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every functional of one set at neighborhood radius r; prints JSON.
    Compute {
        /// GSET1 file or ShapeSpec JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long, value_enum, default_value_t = RefArg::Analytic)]
        reference: RefArg,
    },
    /// Sweep a shape corpus over a grid of radii; writes sweep.csv and summary.json.
    Sweep {
        #[arg(long)]
        corpus: String,
        #[arg(long)]
        h: f64,
        /// Radii as multiples of r_E, comma separated.
        #[arg(long, value_delimiter = ',')]
        r_grid: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = RefArg::Analytic)]
        reference: RefArg,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Smoke)]
        level: LevelArg,
        #[arg(long, value_enum, default_value_t = ThresholdArg::Closed, hide = true)]
        dilation_threshold: ThresholdArg,
    },
    /// Print the constants c(N) of the polynomial integral bound.
    Polylem {
        #[arg(long, default_value_t = MAX_DEGREE)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write the r-envelope of a set as GSET1.
    Envelope {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RefArg {
    Analytic,
    GridCalibrated,
}

impl From<RefArg> for Reference {
    fn from(r: RefArg) -> Self {
        match r {
            RefArg::Analytic => Reference::Analytic,
            RefArg::GridCalibrated => Reference::GridCalibrated,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Smoke,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdArg {
    Closed,
    Open,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("concentra: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("concentra: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::EmptySet => 3,
        Error::Parse(_) | Error::Json(_) | Error::BadParameters(_) | Error::InvalidArgument(_) | Error::UnknownCorpus(_) => 2,
        _ => 1,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("CONCENTRA_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("CONCENTRA_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Compute { input, r, reference } => {
            let e = load(&input)?;
            let report = compute_report(&e, r, reference.into())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Sweep { corpus, h, r_grid, out, reference } => {
            let opts = SweepOptions {
                h: Some(h),
                r_grid: r_grid.unwrap_or_else(|| DEFAULT_R_GRID.to_vec()),
                reference: reference.into(),
            };
            let result = sweep(&corpus, &opts)?;
            fs::create_dir_all(&out)?;
            let mut csv = BufWriter::new(File::create(out.join("sweep.csv"))?);
            write_csv(&result, &mut csv)?;
            csv.flush()?;
            let summary = serde_json::to_string_pretty(&summary_json(&result))?;
            fs::write(out.join("summary.json"), format!("{summary}\n"))?;
            println!("{summary}");
        }
        Command::Verify { level, dilation_threshold } => {
            let opts = VerifyOptions {
                level: match level {
                    LevelArg::Smoke => Level::Smoke,
                    LevelArg::Full => Level::Full,
                },
                threshold: match dilation_threshold {
                    ThresholdArg::Closed => Threshold::Closed,
                    ThresholdArg::Open => Threshold::Open,
                },
            };
            let report = run_verify(&opts)?;
            let mut out = io::stdout().lock();
            writeln!(out, "{:<24} {:<6} {:>9}  detail", "invariant", "result", "seconds")?;
            for r in &report.results {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{:<24} {:<6} {:>9.3}  {}", r.name, verdict, r.seconds, r.detail)?;
            }
            if !report.passed() {
                eprintln!("concentra: failed invariants: {}", report.failures().join(", "));
                return Ok(ExitCode::from(1));
            }
        }
        Command::Polylem { max_n, json } => {
            let results = (0..=max_n).map(polylem_constant).collect::<Result<Vec<_>, _>>()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&results)?);
            } else {
                println!("{:>2}  {:>14}  {:>14}  minimizer", "N", "c(N)", "4^-N");
                for res in &results {
                    let mins: Vec<String> = res.minimizer.iter().map(|&x| g12(x)).collect();
                    println!(
                        "{:>2}  {:>14}  {:>14}  [{}]",
                        res.n,
                        g12(res.c_value),
                        g12(0.25f64.powi(res.n as i32)),
                        mins.join(", ")
                    );
                }
            }
        }
        Command::Envelope { input, r, out } => {
            let e = load(&input)?;
            let env = envelope(&e, r)?;
            let mut w = BufWriter::new(File::create(&out)?);
            write_gset(&env, &mut w)?;
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Reads a GSET1 file, or rasterizes a ShapeSpec given as JSON.
fn load(path: &Path) -> Result<GridSet, Error> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(b"GSET1") {
        return read_gset(bytes.as_slice());
    }
    let spec: ShapeSpec = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Parse(format!("{}: neither GSET1 nor a shape spec ({e})", path.display())))?;
    generate(&spec)
}
