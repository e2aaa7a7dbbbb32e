//! `bosonrace` command-line driver.
//!
//! Every run writes `config.json` with all defaults resolved; `bosonrace
//! replay config.json` reproduces the run byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use bosonrace::distributions::{distinguishable_distribution, StreamMeta};
use bosonrace::validation::{Verdict, DEFAULT_A1, DEFAULT_A2};
use bosonrace::*;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Tolerance on max |U U^dagger - I| before a matrix is rejected.
const UNITARITY_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "bosonrace",
    version,
    about = "Boson-sampling distributions, validation and race tables"
)]
struct Cli {
    /// Root seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of optical modes.
    #[arg(short = 'm', global = true, default_value_t = 9)]
    modes: usize,
    /// Number of photons (defaults to the length of --input, else 3).
    #[arg(short = 'n', global = true)]
    photons: Option<usize>,
    /// Occupied input modes, comma separated (default: the first n modes).
    #[arg(long, global = true, value_delimiter = ',')]
    input: Option<Vec<usize>>,
    #[arg(long, global = true, default_value = "no-collision")]
    restriction: Restriction,
    /// Distribution used by `dist` and `sample`.
    #[arg(long, global = true, value_enum, default_value_t = Model::Boson)]
    model: Model,
    /// Output directory (default: current directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also print errors as a JSON object on stderr.
    #[arg(long, global = true)]
    error_json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    Boson,
    Distinguishable,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Alternative {
    Uniform,
    Distinguishable,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Write a unitary to matrix.json (Haar-random by default).
    Matrix {
        #[arg(long, conflicts_with = "mesh")]
        #[serde(default)]
        haar: bool,
        /// Compose the unitary from a mesh description instead.
        #[arg(long)]
        mesh: Option<PathBuf>,
    },
    /// Write the output distribution to dist.csv.
    Dist {
        /// Unitary in matrix JSON format (default: Haar-random from --seed).
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Draw events from the chosen model into events.csv and events.json.
    Sample {
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Test recorded events against the boson hypothesis.
    Validate {
        /// Event CSV, one configuration per line.
        #[arg(long)]
        events: PathBuf,
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Alternative hypothesis of the Bayesian test.
        #[arg(long, value_enum, default_value_t = Alternative::Uniform)]
        alternative: Alternative,
        #[arg(long, default_value_t = DEFAULT_A1)]
        a1: f64,
        #[arg(long, default_value_t = DEFAULT_A2)]
        a2: f64,
    },
    /// Write the race table to race.csv and race.json.
    Race {
        /// Use the built-in machines (the default when --machines is absent).
        #[arg(long, conflicts_with = "machines")]
        #[serde(default)]
        defaults: bool,
        /// Machine registry JSON.
        #[arg(long)]
        machines: Option<PathBuf>,
    },
    /// Re-run a saved config.json.
    #[serde(skip)]
    Replay { config: PathBuf },
}

/// Effective configuration of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunConfig {
    #[serde(flatten)]
    command: Command,
    seed: u64,
    m: usize,
    n: usize,
    input: Vec<usize>,
    restriction: Restriction,
    model: Model,
    out: PathBuf,
}

fn resolve(cli: Cli) -> anyhow::Result<RunConfig> {
    if let Command::Replay { config } = &cli.command {
        let text = read(config)?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", config.display())))?;
        if let Some(out) = cli.out {
            cfg.out = out;
        }
        return Ok(cfg);
    }
    let n = cli
        .photons
        .or_else(|| cli.input.as_ref().map(Vec::len))
        .unwrap_or(3);
    let input = cli.input.unwrap_or_else(|| (0..n).collect());
    Ok(RunConfig {
        command: cli.command,
        seed: cli.seed,
        m: cli.modes,
        n,
        input,
        restriction: cli.restriction,
        model: cli.model,
        out: cli.out.unwrap_or_else(|| PathBuf::from(".")),
    })
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn checked_unitary(u: ComplexMatrix) -> anyhow::Result<(ComplexMatrix, f64)> {
    let report = check_unitary(&u, UNITARITY_TOL)?;
    if !report.pass {
        return Err(Error::Domain(format!(
            "matrix is not unitary: deviation {:.3e} exceeds {UNITARITY_TOL:e}",
            report.max_deviation
        ))
        .into());
    }
    Ok((u, report.max_deviation))
}

impl RunConfig {
    fn unitary(&self, matrix: Option<&Path>) -> anyhow::Result<ComplexMatrix> {
        let u = match matrix {
            Some(path) => ComplexMatrix::from_json(&read(path)?)?,
            None => haar_unitary(self.m, self.seed)?,
        };
        if u.rows() != self.m || u.cols() != self.m {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but -m is {}",
                u.rows(),
                u.cols(),
                self.m
            ))
            .into());
        }
        Ok(checked_unitary(u)?.0)
    }

    fn input_config(&self) -> anyhow::Result<ModeConfig> {
        let input = ModeConfig::from_modes(self.m, &self.input)?;
        if input.photons() != self.n {
            return Err(Error::Config(format!(
                "input {:?} carries {} photons but -n is {}",
                self.input,
                input.photons(),
                self.n
            ))
            .into());
        }
        Ok(input)
    }

    fn distribution(&self, u: &ComplexMatrix, model: Model) -> anyhow::Result<OutcomeDistribution> {
        let input = self.input_config()?;
        Ok(match model {
            Model::Boson => boson_distribution(u, &input, self.restriction)?,
            Model::Distinguishable => distinguishable_distribution(u, &input, self.restriction)?,
            Model::Uniform => {
                uniform_distribution(self.restriction.outcomes(self.m, self.n)?, self.restriction)?
            }
        })
    }

    fn run(&self) -> anyhow::Result<()> {
        fs::create_dir_all(&self.out)
            .with_context(|| format!("creating {}", self.out.display()))?;
        let out = self.out.as_path();
        match &self.command {
            Command::Matrix { mesh, .. } => {
                let u = match mesh {
                    Some(path) => mesh_unitary(&MeshSpec::from_json(&read(path)?)?)?,
                    None => haar_unitary(self.m, self.seed)?,
                };
                let (u, deviation) = checked_unitary(u)?;
                write(out, "matrix.json", &u.to_json())?;
                println!("unitarity deviation {deviation:.3e}");
            }
            Command::Dist { matrix } => {
                let u = self.unitary(matrix.as_deref())?;
                let dist = self.distribution(&u, self.model)?;
                write(out, "dist.csv", &dist.to_csv())?;
                println!("{} outcomes", dist.len());
            }
            Command::Sample { matrix, count } => {
                let u = self.unitary(matrix.as_deref())?;
                let dist = self.distribution(&u, self.model)?;
                let events = draw_samples(&dist, *count, self.seed)?;
                write(out, "events.csv", &events.to_csv(self.restriction))?;
                write(
                    out,
                    "events.json",
                    &serde_json::to_string_pretty(&events.meta())?,
                )?;
                println!("{} events", events.len());
            }
            Command::Validate {
                events,
                matrix,
                alternative,
                a1,
                a2,
            } => {
                let u = self.unitary(matrix.as_deref())?;
                let boson = self.distribution(&u, Model::Boson)?;
                let dist = self.distribution(&u, Model::Distinguishable)?;
                let alt = match alternative {
                    Alternative::Uniform => self.distribution(&u, Model::Uniform)?,
                    Alternative::Distinguishable => dist.clone(),
                };
                let stream = load_events(events, self.m, self.restriction)?;
                let bayes = bayesian_trace(&stream, &boson, &alt)?;
                let counter = counter_trace(&stream, &boson, &dist, *a1, *a2)?;
                let report = metrics(&empirical_frequencies(&stream, &boson)?, &boson)?;
                let verdict = Verdict::new(&bayes, &counter, report);
                write(out, "bayes_trace.csv", &bayes.to_csv())?;
                write(out, "counter_trace.csv", &counter.to_csv())?;
                write(
                    out,
                    "verdict.json",
                    &serde_json::to_string_pretty(&verdict)?,
                )?;
                println!(
                    "posterior {:.6}, counter {}, similarity {:.6}",
                    verdict.final_posterior, verdict.final_counter, verdict.metrics.similarity
                );
            }
            Command::Race { machines, .. } => {
                let machines = match machines {
                    Some(path) => MachineSpec::registry_from_json(&read(path)?)?,
                    None => MachineSpec::builtin(),
                };
                let table = race_table(&RaceInputs {
                    machines,
                    ..RaceInputs::default()
                })?;
                let csv = table.to_csv();
                write(out, "race.csv", &csv)?;
                write(out, "race.json", &serde_json::to_string_pretty(&table)?)?;
                print!("{csv}");
            }
            Command::Replay { .. } => bail!("a saved config cannot itself be a replay"),
        }
        write(out, "config.json", &serde_json::to_string_pretty(self)?)
    }
}

/// Reads an event CSV and, when present, checks it against its JSON sidecar.
fn load_events(path: &Path, m: usize, restriction: Restriction) -> anyhow::Result<EventStream> {
    let sidecar = path.with_extension("json");
    let meta: Option<StreamMeta> = if sidecar.exists() {
        let text = read(&sidecar)?;
        Some(
            serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", sidecar.display())))?,
        )
    } else {
        None
    };
    let (source, seed) = meta
        .as_ref()
        .map_or((Source::File, None), |m| (m.source, m.seed));
    let stream = EventStream::from_csv(&read(path)?, m, restriction, source, seed)?;
    if let Some(meta) = meta {
        if meta.count != stream.len() {
            return Err(Error::Alignment(format!(
                "sidecar declares {} events but {} holds {}",
                meta.count,
                path.display(),
                stream.len()
            ))
            .into());
        }
    }
    Ok(stream)
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return e.kind();
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
        if cause.is::<serde_json::Error>() {
            return "parse";
        }
    }
    "other"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let error_json = cli.error_json;
    match resolve(cli).and_then(|cfg| cfg.run()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if error_json {
                let report =
                    serde_json::json!({ "error": error_kind(&err), "message": format!("{err:#}") });
                eprintln!("{report}");
            }
            ExitCode::FAILURE
        }
    }
}
