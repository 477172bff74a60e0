//! Command-line front end for the invariant dataset toolkit.
//!
//! Exit codes are a stable contract: 0 success/valid, 1 invalid data,
//! 2 missing or corrupt data, 64 usage error. Every command prints a human
//! summary line followed by a machine-parseable `key=value` block (except
//! `cat`, whose output is the dataset text itself).

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use invariant_core::generate::{FestoSpec, GeneratorSpec, KinectSpec, TrainsSpec, WeatherSpec};
use invariant_core::query;
use invariant_core::registry::Registry;
use invariant_core::schema::{self, Collection, SchemaReport};
use invariant_core::{parse, print, DatasetName, Formula};
use invariant_data::{ArchiveStore, StoreConfig, StoreError};

#[derive(Parser)]
#[command(
    name = "invariant-data",
    version,
    about = "Generate, validate, inspect and convert spatio-temporal invariant datasets"
)]
struct Cli {
    /// Data directory holding the archives (env INVARIANT_DATA_DIR,
    /// default ../data).
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,

    /// Extra registry manifest: one 'path dataset collection' triple per line.
    #[arg(long, global = true, value_name = "FILE")]
    registry: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset and archive it under a name.
    Generate {
        #[arg(long)]
        collection: Collection,
        /// Archive name, e.g. test.trains.t7.
        #[arg(long)]
        name: DatasetName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point count (kinect only; default 217088).
        #[arg(long)]
        points: Option<usize>,
        /// Color count (kinect only; default 2764800).
        #[arg(long)]
        colors: Option<usize>,
        /// Event count (festo only; default 4761).
        #[arg(long)]
        events: Option<usize>,
        /// Frame count (trains only; default 9601).
        #[arg(long)]
        frames: Option<usize>,
        /// Sample count (weather only; default 439).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Validate a dataset (by archive name) or a file (by path).
    Validate {
        target: String,
        /// Check against one collection instead of auto-detecting.
        #[arg(long)]
        collection: Option<Collection>,
    },
    /// Show the detected collection, stats and time range of a dataset.
    Inspect {
        target: String,
        /// Export a series as comma-separated text instead of the summary:
        /// 'times', 'uv', or 'component:<name>'.
        #[arg(long, value_name = "KIND")]
        csv: Option<CsvKind>,
    },
    /// Convert a dataset file between compressed archive and plain text.
    Convert {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
    },
    /// List registry entries and archives on disk.
    Ls,
    /// Print a dataset's canonical text.
    Cat {
        target: String,
        /// Print only the first N conjuncts of the top-level conjunction.
        #[arg(long, value_name = "N")]
        head: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConvertTarget {
    /// Plain canonical text.
    Txt,
    /// Gzip-compressed canonical text.
    Archive,
}

#[derive(Clone, Debug)]
enum CsvKind {
    /// All premise time points.
    Times,
    /// The UV index series of a weather dataset.
    Uv,
    /// One component's event series of a factory dataset.
    Component(String),
}

impl std::str::FromStr for CsvKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "times" => Ok(CsvKind::Times),
            "uv" => Ok(CsvKind::Uv),
            other => match other.strip_prefix("component:") {
                Some(name) if !name.is_empty() => Ok(CsvKind::Component(name.to_string())),
                _ => Err(format!(
                    "'{other}' is not a series kind (expected times, uv or component:<name>)"
                )),
            },
        }
    }
}

enum CliError {
    /// Exit 1: data that loaded fine but does not validate.
    Invalid(String),
    /// Exit 2: missing, unreadable or corrupt data.
    Missing(String),
    /// Exit 64: bad invocation.
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Missing(_) => 2,
            CliError::Usage(_) => 64,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Missing(m) | CliError::Usage(m) => m,
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        CliError::Missing(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(64);
        }
        Err(e) => {
            // --help / --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.data_dir {
        Some(dir) => StoreConfig::new(dir.clone()),
        None => StoreConfig::default(),
    };
    let store = ArchiveStore::new(config);
    match cli.command {
        Command::Generate {
            collection,
            name,
            seed,
            points,
            colors,
            events,
            frames,
            samples,
        } => {
            let spec = build_spec(collection, seed, points, colors, events, frames, samples)?;
            cmd_generate(&store, &spec, &name)
        }
        Command::Validate { target, collection } => cmd_validate(&store, &target, collection),
        Command::Inspect { target, csv } => cmd_inspect(&store, &target, csv),
        Command::Convert { input, output, to } => cmd_convert(&input, &output, to),
        Command::Ls => cmd_ls(&store, registry(cli.registry.as_deref())?),
        Command::Cat { target, head } => cmd_cat(&store, &target, head),
    }
}

fn registry(manifest: Option<&Path>) -> Result<Registry, CliError> {
    let mut registry = Registry::builtin();
    if let Some(path) = manifest {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read registry manifest: {e}")))?;
        registry
            .load_manifest(&text)
            .map_err(|e| CliError::Usage(format!("registry manifest: {e}")))?;
    }
    Ok(registry)
}

fn build_spec(
    collection: Collection,
    seed: u64,
    points: Option<usize>,
    colors: Option<usize>,
    events: Option<usize>,
    frames: Option<usize>,
    samples: Option<usize>,
) -> Result<GeneratorSpec, CliError> {
    let reject = |flag: &str, applies: &str| {
        CliError::Usage(format!("--{flag} only applies to the {applies} collection"))
    };
    match collection {
        Collection::Kinect => {
            require_unset(events, || reject("events", "festo"))?;
            require_unset(frames, || reject("frames", "trains"))?;
            require_unset(samples, || reject("samples", "weather"))?;
            let mut spec = KinectSpec {
                seed,
                ..KinectSpec::default()
            };
            if let Some(points) = points {
                spec.n_points = points;
            }
            if let Some(colors) = colors {
                spec.n_colors = colors;
            }
            Ok(GeneratorSpec::Kinect(spec))
        }
        Collection::Festo => {
            require_unset(points, || reject("points", "kinect"))?;
            require_unset(colors, || reject("colors", "kinect"))?;
            require_unset(frames, || reject("frames", "trains"))?;
            require_unset(samples, || reject("samples", "weather"))?;
            let mut spec = FestoSpec {
                seed,
                ..FestoSpec::default()
            };
            if let Some(events) = events {
                spec.n_events = events;
            }
            Ok(GeneratorSpec::Festo(spec))
        }
        Collection::Trains => {
            require_unset(points, || reject("points", "kinect"))?;
            require_unset(colors, || reject("colors", "kinect"))?;
            require_unset(events, || reject("events", "festo"))?;
            require_unset(samples, || reject("samples", "weather"))?;
            let mut spec = TrainsSpec {
                seed,
                ..TrainsSpec::default()
            };
            if let Some(frames) = frames {
                spec.n_frames = frames;
            }
            Ok(GeneratorSpec::Trains(spec))
        }
        Collection::Weather => {
            require_unset(points, || reject("points", "kinect"))?;
            require_unset(colors, || reject("colors", "kinect"))?;
            require_unset(events, || reject("events", "festo"))?;
            require_unset(frames, || reject("frames", "trains"))?;
            let mut spec = WeatherSpec {
                seed,
                ..WeatherSpec::default()
            };
            if let Some(samples) = samples {
                spec.n_samples = samples;
            }
            Ok(GeneratorSpec::Weather(spec))
        }
    }
}

fn require_unset<T>(flag: Option<T>, err: impl FnOnce() -> CliError) -> Result<(), CliError> {
    match flag {
        Some(_) => Err(err()),
        None => Ok(()),
    }
}

fn cmd_generate(
    store: &ArchiveStore,
    spec: &GeneratorSpec,
    name: &DatasetName,
) -> Result<(), CliError> {
    let formula = spec.generate();
    let report = spec.collection().validate(&formula);
    debug_assert!(report.is_valid(), "generator output must validate");
    store.save(&formula, name)?;
    println!(
        "generated and archived '{name}': {}",
        report.summary()
    );
    println!("name={name}");
    println!("file={}", store.archive_path(name).display());
    print_report_kv(&report);
    Ok(())
}

/// Loads a dataset for read-side commands: an existing path is a file
/// (compressed or plain, sniffed), anything else is an archive name.
fn load_target(store: &ArchiveStore, target: &str) -> Result<Formula, CliError> {
    let path = Path::new(target);
    if path.exists() {
        return read_dataset_file(path);
    }
    let name = DatasetName::new(target).map_err(|e| {
        CliError::Usage(format!("'{target}' is neither an existing file nor a dataset name: {e}"))
    })?;
    Ok(store.load_or_throw(&name)?)
}

fn read_dataset_file(path: &Path) -> Result<Formula, CliError> {
    let bytes =
        fs::read(path).map_err(|e| CliError::Missing(format!("{}: {e}", path.display())))?;
    let text = decode_bytes(&bytes)
        .map_err(|e| CliError::Missing(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::Missing(format!("{}: {e}", path.display())))
}

/// Gzip archives start with the 0x1f 0x8b magic; everything else is
/// treated as plain text.
fn decode_bytes(bytes: &[u8]) -> Result<String, String> {
    if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut text = String::new();
        GzDecoder::new(bytes)
            .read_to_string(&mut text)
            .map_err(|e| format!("decompression failed: {e}"))?;
        Ok(text)
    } else {
        String::from_utf8(bytes.to_vec()).map_err(|e| format!("not valid UTF-8: {e}"))
    }
}

fn print_report_kv(report: &SchemaReport) {
    println!("{}", report.render_kv());
}

const MAX_PRINTED_VIOLATIONS: usize = 20;

fn cmd_validate(
    store: &ArchiveStore,
    target: &str,
    collection: Option<Collection>,
) -> Result<(), CliError> {
    let formula = load_target(store, target)?;
    let report = match collection {
        Some(collection) => collection.validate(&formula),
        None => match schema::detect_collection(&formula) {
            Some(collection) => collection.validate(&formula),
            None => {
                println!("no single collection accepts '{target}'");
                for collection in Collection::ALL {
                    let report = collection.validate(&formula);
                    println!(
                        "candidate.{collection}={} violation(s)",
                        report.violations.len()
                    );
                }
                return Err(CliError::Invalid(format!(
                    "'{target}' does not validate against exactly one collection"
                )));
            }
        },
    };
    println!("{}", report.summary());
    for violation in report.violations.iter().take(MAX_PRINTED_VIOLATIONS) {
        println!("  {violation}");
    }
    if report.violations.len() > MAX_PRINTED_VIOLATIONS {
        println!(
            "  ... and {} more",
            report.violations.len() - MAX_PRINTED_VIOLATIONS
        );
    }
    print_report_kv(&report);
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("'{target}' is invalid")))
    }
}

fn cmd_inspect(store: &ArchiveStore, target: &str, csv: Option<CsvKind>) -> Result<(), CliError> {
    let formula = load_target(store, target)?;
    if let Some(kind) = csv {
        return export_csv(&formula, kind);
    }
    let Some(collection) = schema::detect_collection(&formula) else {
        return Err(CliError::Invalid(format!(
            "'{target}' does not validate against exactly one collection"
        )));
    };
    let report = collection.validate(&formula);
    println!("{target}: {}", report.summary());
    print_report_kv(&report);
    let times = query::time_points(&formula).expect("detected datasets have time points");
    if let (Some(first), Some(last)) = (times.first(), times.last()) {
        println!("first_time={first}");
        println!("last_time={last}");
    }
    Ok(())
}

/// Comma-separated series export. Time points carry no commas in any
/// collection, so no field quoting is needed.
fn export_csv(formula: &Formula, kind: CsvKind) -> Result<(), CliError> {
    let query_err = |e: query::QueryError| CliError::Invalid(e.to_string());
    match kind {
        CsvKind::Times => {
            println!("time");
            for time in query::time_points(formula).map_err(query_err)? {
                println!("{time}");
            }
        }
        CsvKind::Uv => {
            println!("time,uv_index");
            for (time, uv) in query::uv_series(formula).map_err(query_err)? {
                println!("{time},{uv}");
            }
        }
        CsvKind::Component(name) => {
            println!("time,component,value");
            for sample in query::component_series(formula, &name).map_err(query_err)? {
                println!("{},{},{}", sample.time, sample.component, sample.value);
            }
        }
    }
    Ok(())
}

fn cmd_convert(input: &Path, output: &Path, to: ConvertTarget) -> Result<(), CliError> {
    let formula = read_dataset_file(input)?;
    let text = print(&formula);
    let io_err = |e: std::io::Error| CliError::Missing(format!("{}: {e}", output.display()));
    match to {
        ConvertTarget::Txt => fs::write(output, text).map_err(io_err)?,
        ConvertTarget::Archive => {
            let mut encoder = GzEncoder::new(Vec::new(), Compression::default());
            std::io::Write::write_all(&mut encoder, text.as_bytes()).map_err(io_err)?;
            fs::write(output, encoder.finish().map_err(io_err)?).map_err(io_err)?;
        }
    }
    println!(
        "converted {} -> {} ({})",
        input.display(),
        output.display(),
        match to {
            ConvertTarget::Txt => "plain text",
            ConvertTarget::Archive => "compressed archive",
        }
    );
    println!("input={}", input.display());
    println!("output={}", output.display());
    Ok(())
}

fn cmd_ls(store: &ArchiveStore, registry: Registry) -> Result<(), CliError> {
    let entries = registry.list_entries();
    let archives = store.list_archives();
    println!(
        "{} registry entries, {} archives in {}",
        entries.len(),
        archives.len(),
        store.data_dir().display()
    );
    for entry in entries {
        println!(
            "entry={} dataset={} collection={}",
            entry.path, entry.dataset, entry.collection
        );
    }
    for name in archives {
        let bytes = fs::metadata(store.archive_path(&name))
            .map(|m| m.len())
            .unwrap_or(0);
        println!("archive={name} bytes={bytes}");
    }
    Ok(())
}

fn cmd_cat(store: &ArchiveStore, target: &str, head: Option<usize>) -> Result<(), CliError> {
    let formula = load_target(store, target)?;
    let truncated = match (head, formula) {
        (Some(n), Formula::BigAnd(mut items)) => {
            items.truncate(n);
            Formula::BigAnd(items)
        }
        (_, formula) => formula,
    };
    println!("{truncated}");
    Ok(())
}
