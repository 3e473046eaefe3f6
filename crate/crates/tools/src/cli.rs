//! The `locality` command line.

use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use locality_core::locality::Locality;
use locality_core::normal::{all_partial_normal_subgroups, quotient, verify_quotient};
use locality_core::products::{product_normal, verify_products};
use locality_core::report::Report;

use crate::io::{load, save, to_text, Object};
use crate::suite::{describe_normal, run_suite, ConfigError, NormalSpec, OutputFormat, RunConfig, RunError, Suite};

#[derive(Debug, Parser)]
#[command(name = "locality", version, about = "Build and check finite partial groups and localities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Materialize an input and write it in the explicit format.
    Build {
        input: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run check suites.
    Verify {
        input: String,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        prime: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Form and check quotients by partial normal subgroups.
    Quotient {
        input: String,
        /// `all` or `gen:<i>,<j>,...`
        #[arg(long)]
        normal: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Save the quotient (only with a single normal subgroup).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the partial normal subgroups.
    Normals { input: String },
    /// Form and check the product of two partial normal subgroups.
    Product {
        input: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
    },
    /// Run every suite and print the report.
    Report {
        input: String,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

/// Exit code 2: the input could not be loaded or the options are invalid.
#[derive(Debug, thiserror::Error)]
#[error(transparent)]
pub struct UsageError(#[from] anyhow::Error);

fn need_locality(obj: &Object) -> Result<&Locality, UsageError> {
    obj.locality().ok_or_else(|| UsageError(ConfigError::NotLocality("the input is not a locality".into()).into()))
}

fn usage<E: Into<anyhow::Error>>(e: E) -> UsageError {
    UsageError(e.into())
}

fn load_input(input: &str) -> Result<Object, UsageError> {
    load(input).map_err(usage)
}

fn print_report(out: &mut dyn Write, r: &Report) -> std::io::Result<()> {
    write!(out, "{r}")
}

/// Runs a parsed command; `Ok(code)` is 0 or 1, errors map to 2.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, UsageError> {
    match cli.command {
        Command::Build { input, output } => {
            let obj = load_input(&input)?;
            save(&obj, &output).map_err(usage)?;
            writeln!(out, "wrote {} ({} elements)", output.display(), obj.view().size()).map_err(usage)?;
            Ok(0)
        }
        Command::Verify { input, suite, bound, workers, prime, json } => {
            let suite: Suite = suite.parse().map_err(usage)?;
            let cfg = RunConfig {
                input,
                bound,
                prime,
                suite,
                format: if json { OutputFormat::Json } else { OutputFormat::Text },
                workers,
            };
            emit(cfg, out)
        }
        Command::Report { input, json, bound, workers } => {
            let cfg = RunConfig {
                input,
                bound,
                prime: None,
                suite: Suite::All,
                format: if json { OutputFormat::Json } else { OutputFormat::Text },
                workers,
            };
            emit(cfg, out)
        }
        Command::Normals { input } => {
            let obj = load_input(&input)?;
            let loc = need_locality(&obj)?;
            for (i, n) in all_partial_normal_subgroups(loc).iter().enumerate() {
                writeln!(out, "{}", describe_normal(loc, &format!("N#{i}"), n)).map_err(usage)?;
            }
            Ok(0)
        }
        Command::Quotient { input, normal, bound, output } => {
            if bound < 2 {
                return Err(usage(ConfigError::Bound(bound)));
            }
            let obj = load_input(&input)?;
            let loc = need_locality(&obj)?;
            let spec: NormalSpec = normal.parse().map_err(usage)?;
            let chosen = spec.resolve(loc).map_err(usage)?;
            if output.is_some() && chosen.len() != 1 {
                return Err(usage(anyhow::anyhow!("--output needs a single normal subgroup")));
            }
            let mut code = 0;
            for (label, n) in &chosen {
                let q = quotient(loc, n).map_err(usage)?;
                writeln!(out, "SECTION quotient {} blocks={}", describe_normal(loc, label, n), q.locality.size()).map_err(usage)?;
                let r = verify_quotient(loc, n, bound);
                print_report(out, &r).map_err(usage)?;
                if !r.all_pass() {
                    code = 1;
                }
                if let Some(path) = &output {
                    save(&Object::Locality(q.locality.clone()), path).map_err(usage)?;
                }
            }
            Ok(code)
        }
        Command::Product { input, m, n } => {
            let obj = load_input(&input)?;
            let loc = need_locality(&obj)?;
            let ms = m.parse::<NormalSpec>().and_then(|s| s.resolve(loc)).map_err(usage)?;
            let ns = n.parse::<NormalSpec>().and_then(|s| s.resolve(loc)).map_err(usage)?;
            let mut code = 0;
            for (ml, mm) in &ms {
                for (nl, nn) in &ns {
                    writeln!(out, "SECTION product M={} N={}", describe_normal(loc, ml, mm), describe_normal(loc, nl, nn))
                        .map_err(usage)?;
                    match product_normal(loc, mm, nn) {
                        Ok(mn) => writeln!(out, "PRODUCT size={} T={} members={}", mn.len(), mn.t(loc), mn.members()),
                        Err(e) => writeln!(out, "REFUSED {e}"),
                    }
                    .map_err(usage)?;
                    let r = verify_products(loc, mm, nn);
                    print_report(out, &r).map_err(usage)?;
                    if !r.all_pass() {
                        code = 1;
                    }
                }
            }
            Ok(code)
        }
    }
}

fn emit(cfg: RunConfig, out: &mut dyn Write) -> Result<i32, UsageError> {
    let report = run_suite(&cfg).map_err(|e| match e {
        RunError::Config(c) => usage(c),
        RunError::Load(l) => usage(l),
    })?;
    let text = match cfg.format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Json => report.to_json() + "\n",
    };
    out.write_all(text.as_bytes()).context("writing the report").map_err(UsageError)?;
    Ok(report.exit_code())
}

/// Parses arguments and runs; returns the process exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

/// Text form of an input, as `build` writes it.
pub fn built_text(input: &str) -> anyhow::Result<String> {
    let obj = load(input)?;
    Ok(to_text(&obj)?)
}
