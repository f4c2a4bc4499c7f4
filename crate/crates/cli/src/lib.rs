//! `spinflip` command line: configuration, subcommands and tabular output.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or configuration error,
//! 3 numeric regime error. Errors go to stderr as `code: message` lines.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use toml::{Table, Value};

use config::{
    apply_override, from_table, parse_table, table_from_csv_header, ConfigError, OutputKind,
    RunConfig,
};
use output::{write_csv, write_json, DataTable, Header};

pub const THREADS_ENV: &str = "SPINFLIP_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "spinflip",
    version,
    about = "Spin precession and spin-flip resonance in an intense plane wave"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration, or a CSV previously written by spinflip.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set wave.eta=1.5` or `--set g=2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write a JSON mirror of the table.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Propagate the spin and write P(t) with the effective field.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Write the field decomposition (rest-frame, Thomas, total) as CSV.
        #[arg(long, value_name = "PATH")]
        dump_field: Option<PathBuf>,
    },
    /// Flip amplitude and Rabi frequency over the [scan] grid of eta.
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// Locate the field strength of maximal flip amplitude.
    Resonance {
        #[command(flatten)]
        common: Common,
    },
    /// Sample the classical orbit and the lab fields at the particle.
    Trajectory {
        #[command(flatten)]
        common: Common,
    },
    /// Solve for the average rest frame and report the orbit parameters.
    Frame {
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate sn, cn, dn and am at parameter m.
    Elliptic {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        u_min: f64,
        /// Defaults to one real period (10 at m = 1).
        #[arg(long, allow_negative_numbers = true)]
        u_max: Option<f64>,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(ConfigError),
    Core(spinflip_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Core(e) if !e.is_numeric() => 2,
            CliError::Core(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    /// One `code: message` line per problem.
    pub fn lines(&self) -> Vec<String> {
        match self {
            CliError::Usage(m) => vec![format!("usage: {m}")],
            CliError::Config(ConfigError::Schema(v)) => {
                v.iter().map(|v| format!("config: {v}")).collect()
            }
            CliError::Config(e) => vec![format!("config: {e}")],
            CliError::Core(e) => vec![format!("{}: {e}", e.code())],
            CliError::Io(m) => vec![format!("io: {m}")],
        }
    }
}

impl From<spinflip_core::Error> for CliError {
    fn from(e: spinflip_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Scan worker count from `SPINFLIP_THREADS`, else the machine's parallelism.
pub fn worker_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} = `{v}` must be a positive integer"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig, CliError> {
    let mut table = match path {
        None => Table::new(),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            match table_from_csv_header(&text) {
                Some(t) => t?,
                None => parse_table(&text)?,
            }
        }
    };
    for o in overrides {
        apply_override(&mut table, o).map_err(CliError::Usage)?;
    }
    Ok(from_table(table)?)
}

struct Sink<'a> {
    stdout: &'a mut dyn Write,
}

impl Sink<'_> {
    fn emit(
        &mut self,
        out: Option<&Path>,
        json: Option<&Path>,
        header: &Header,
        table: &DataTable,
    ) -> Result<(), CliError> {
        match out {
            Some(p) => {
                let mut f = fs::File::create(p).map_err(|e| io_err(p, e))?;
                write_csv(&mut f, header, table).map_err(|e| io_err(p, e))?;
            }
            None => match write_csv(self.stdout, header, table) {
                // reader went away, e.g. `| head`
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => return Ok(()),
                r => r.map_err(|e| CliError::Io(format!("stdout: {e}")))?,
            },
        }
        if let Some(p) = json {
            let mut f = fs::File::create(p).map_err(|e| io_err(p, e))?;
            write_json(&mut f, header, table).map_err(|e| io_err(p, e))?;
        }
        Ok(())
    }
}

fn header(command: &str, cfg: &RunConfig) -> Header {
    Header {
        command: command.into(),
        config: cfg.to_table(),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut sink = Sink { stdout };
    match cli.command {
        Command::Simulate { common, dump_field } => {
            let cfg = load_config(common.config.as_deref(), &common.overrides)?;
            let wants = |k| cfg.sim.outputs.contains(&k);
            let field_path = match (
                dump_field,
                wants(OutputKind::Field),
                wants(OutputKind::Spin),
            ) {
                (Some(p), _, _) => Some(p),
                (None, true, true) => match &common.out {
                    Some(out) => Some(out.with_extension("field.csv")),
                    None => {
                        return Err(CliError::Usage(
                            "field output alongside spin output needs --out or --dump-field".into(),
                        ))
                    }
                },
                _ => None,
            };
            let field_only = wants(OutputKind::Field) && !wants(OutputKind::Spin);
            let sim = commands::simulate(&cfg, field_path.is_some() || field_only)?;
            let h = header("simulate", &cfg);
            match (field_only, sim.field) {
                (true, Some(field)) => {
                    sink.emit(common.out.as_deref(), common.json.as_deref(), &h, &field)?;
                    if let Some(p) = field_path {
                        sink.emit(Some(&p), None, &h, &field)?;
                    }
                }
                (_, field) => {
                    sink.emit(common.out.as_deref(), common.json.as_deref(), &h, &sim.spin)?;
                    if let (Some(p), Some(field)) = (field_path, field) {
                        sink.emit(Some(&p), None, &h, &field)?;
                    }
                }
            }
        }
        Command::Scan { common } => {
            let cfg = load_config(common.config.as_deref(), &common.overrides)?;
            let table = commands::scan(&cfg, worker_count()?)?;
            sink.emit(
                common.out.as_deref(),
                common.json.as_deref(),
                &header("scan", &cfg),
                &table,
            )?;
        }
        Command::Resonance { common } => {
            let cfg = load_config(common.config.as_deref(), &common.overrides)?;
            let table = commands::resonance(&cfg)?;
            sink.emit(
                common.out.as_deref(),
                common.json.as_deref(),
                &header("resonance", &cfg),
                &table,
            )?;
        }
        Command::Trajectory { common } => {
            let cfg = load_config(common.config.as_deref(), &common.overrides)?;
            let table = commands::trajectory(&cfg)?;
            sink.emit(
                common.out.as_deref(),
                common.json.as_deref(),
                &header("trajectory", &cfg),
                &table,
            )?;
        }
        Command::Frame { common } => {
            let cfg = load_config(common.config.as_deref(), &common.overrides)?;
            let table = commands::frame(&cfg)?;
            sink.emit(
                common.out.as_deref(),
                common.json.as_deref(),
                &header("frame", &cfg),
                &table,
            )?;
        }
        Command::Elliptic {
            m,
            u_min,
            u_max,
            points,
            out,
            json,
        } => {
            let u_max = match u_max {
                Some(u) => u,
                None => commands::default_u_max(m)?,
            };
            let table = commands::elliptic(m, u_min, u_max, points)?;
            let config: Table = [
                ("m", Value::Float(m)),
                ("u_min", Value::Float(u_min)),
                ("u_max", Value::Float(u_max)),
                ("points", Value::Integer(points as i64)),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
            let h = Header {
                command: "elliptic".into(),
                config,
            };
            sink.emit(out.as_deref(), json.as_deref(), &h, &table)?;
        }
    }
    Ok(())
}

/// Run with the given argv (program name first); returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let first = first.strip_prefix("error: ").unwrap_or(first);
                    let _ = writeln!(stderr, "usage: {first}");
                    let rest: Vec<&str> = rendered.lines().skip(1).collect();
                    let _ = writeln!(stderr, "{}", rest.join("\n").trim_end());
                    2
                }
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            for line in e.lines() {
                let _ = writeln!(stderr, "{line}");
            }
            e.exit_code()
        }
    }
}
