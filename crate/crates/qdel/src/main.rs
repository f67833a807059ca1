//! Command-line surface over the `qdel` library: regenerate the reference
//! fidelity tables, inspect the deleter + transformer pipeline, compute
//! average fidelities, and run the verification suite.
//!
//! Exit codes: 0 success / all checks pass, 1 verification failure,
//! 2 usage or validation error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::process::ExitCode;

use qdel::machines::{Machine, Transformer};
use qdel::sweep::{
    render_average_report, render_pb_report, render_table, GridSpec, OutputFormat, SweepConfig,
    TableKind,
};
use qdel::verify::{all_passed, render_verification_report, run_verification, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Tsv => OutputFormat::Tsv,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Decimal places for reported numbers (1 to 15).
    #[arg(long, default_value_t = 4)]
    precision: usize,
    /// Output target: a file path, or `-` for standard output.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "qdel",
    version,
    about = "Approximate quantum deletion machines: fidelity tables, sweeps, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fidelity table of the limiting one-transformer machine.
    Table1 {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fidelity table of the limiting two-transformer machine.
    Table2 {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Deleter + transformer pipeline at explicit blank parameters.
    #[command(allow_negative_numbers = true)]
    Pb {
        /// Real blank amplitude m1.
        #[arg(long)]
        m1: f64,
        /// Real blank amplitude m2; its sign fixes the branch.
        #[arg(long)]
        m2: f64,
        /// Input amplitude alpha: a single value or `start:stop:step`.
        #[arg(long, default_value = "0:1:0.1")]
        alpha: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Quadrature average fidelity of a machine.
    #[command(allow_negative_numbers = true)]
    Average {
        /// Machine id: one-transformer-limit, two-transformer-limit,
        /// pb-with-transformer, or pb-alone.
        #[arg(long)]
        machine: String,
        #[arg(long)]
        m1: f64,
        #[arg(long)]
        m2: f64,
        /// Quadrature grid points over alpha^2 (at least 2).
        #[arg(long, default_value_t = 10_001)]
        samples: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run every invariant, cross-check and table comparison.
    Verify {
        /// Override every check tolerance with one value.
        #[arg(long)]
        tol: Option<f64>,
        /// Fault-injection fixture: perturb one transformer entry by this
        /// amount before verifying. Exists to test the exit-status contract.
        #[arg(long, value_name = "EPS")]
        perturb_t: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn write_output(target: &str, text: &str) -> Result<(), String> {
    if target == "-" {
        print!("{text}");
        return Ok(());
    }
    let mut file = std::fs::File::create(target)
        .map_err(|e| format!("cannot write output target {target:?}: {e}"))?;
    file.write_all(text.as_bytes())
        .map_err(|e| format!("cannot write output target {target:?}: {e}"))?;
    Ok(())
}

fn config_from(out: &OutputArgs) -> SweepConfig {
    SweepConfig {
        format: out.format.into(),
        precision: out.precision,
        ..SweepConfig::default()
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Table1 { out } => {
            let text = render_table(TableKind::OneTransformer, &config_from(&out))
                .map_err(|e| e.to_string())?;
            write_output(&out.output, &text)?;
            Ok(0)
        }
        Command::Table2 { out } => {
            let text = render_table(TableKind::TwoTransformer, &config_from(&out))
                .map_err(|e| e.to_string())?;
            write_output(&out.output, &text)?;
            Ok(0)
        }
        Command::Pb { m1, m2, alpha, out } => {
            let grid = GridSpec::parse(&alpha).map_err(|e| e.to_string())?;
            let text =
                render_pb_report(m1, m2, &grid, &config_from(&out)).map_err(|e| e.to_string())?;
            write_output(&out.output, &text)?;
            Ok(0)
        }
        Command::Average {
            machine,
            m1,
            m2,
            samples,
            out,
        } => {
            let machine: Machine = machine.parse().map_err(|e: qdel::Error| e.to_string())?;
            let text = render_average_report(machine, m1, m2, samples, &config_from(&out))
                .map_err(|e| e.to_string())?;
            write_output(&out.output, &text)?;
            Ok(0)
        }
        Command::Verify {
            tol,
            perturb_t,
            out,
        } => {
            let cfg = config_from(&out);
            cfg.validate().map_err(|e| e.to_string())?;
            let tolerances = match tol {
                Some(t) => {
                    if !(t.is_finite() && t >= 0.0) {
                        return Err(format!("tolerance must be a non-negative number, got {t}"));
                    }
                    Tolerances::uniform(t)
                }
                None => Tolerances::default(),
            };
            let transformer = match perturb_t {
                Some(eps) => Transformer::perturbed(eps),
                None => Transformer::new(),
            };
            let outcomes = run_verification(&transformer, &tolerances);
            let text = render_verification_report(&outcomes, cfg.format, cfg.precision);
            write_output(&out.output, &text)?;
            Ok(if all_passed(&outcomes) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
