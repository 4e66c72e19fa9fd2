use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use d4sigma::rootsys::{pairing, radical_permutation, Coweight, Root, Simple, TwistedWeylWord};
use d4sigma::scenario::{emit, run_many, scenario_ids, Format, REGISTRY};

#[derive(Parser)]
#[command(name = "d4sigma", version, about = "Verify symbolic computations in D4 ⋊ <sigma> over characteristic 2")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Write output to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// List scenario ids and claims.
    List,
    /// Run scenarios and print their reports.
    Verify {
        /// Scenario ids such as S1 or S10.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        ids: Vec<String>,
        /// Run every registered scenario.
        #[arg(long)]
        all: bool,
    },
    /// Print the 24 roots with coordinates, height and pairing with λ.
    DumpRoots {
        #[arg(long, value_enum)]
        format: TableFormat,
    },
}

fn self_check() -> Result<(), String> {
    let perm = radical_permutation(&TwistedWeylWord::n_alpha_sigma(), Coweight::lambda()).map_err(|e| e.to_string())?;
    if perm.to_string() != "(4 5 8 11 10 7)(6 9)(12)" || Root::all().count() != 24 {
        return Err(format!("root table self-check failed: n_alpha sigma acts as {perm}"));
    }
    Ok(())
}

fn dump_roots(format: TableFormat) -> String {
    let names = Simple::ALL.map(|s| s.symbol());
    match format {
        TableFormat::Tsv => {
            let mut out = format!("label\t{}\theight\tpairing\n", names.join("\t"));
            for z in Root::all() {
                let c = z.coords();
                let w = pairing(z, Coweight::lambda());
                out.push_str(&format!("{}\t{}\t{}\t{}\t{}\t{}\t{w}\n", z.label(), c[0], c[1], c[2], c[3], z.height()));
            }
            out
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = Root::all()
                .map(|z| {
                    let coords: serde_json::Map<String, serde_json::Value> =
                        names.iter().zip(z.coords()).map(|(n, c)| (n.to_string(), c.into())).collect();
                    serde_json::json!({
                        "label": z.label(),
                        "coords": coords,
                        "height": z.height(),
                        "pairing": pairing(z, Coweight::lambda()),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("json") + "\n"
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = self_check() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let format = match cli.format {
        ReportFormat::Text => Format::Text,
        ReportFormat::Json => Format::Json,
    };
    let (text, code) = match &cli.command {
        Command::List => {
            let lines: String = REGISTRY.iter().map(|s| format!("{}\t{}\n", s.id, s.claim)).collect();
            (lines, 0)
        }
        Command::DumpRoots { format } => (dump_roots(*format), 0),
        Command::Verify { ids, all } => {
            let selected: Vec<&str> = if *all { scenario_ids() } else { ids.iter().map(String::as_str).collect() };
            match run_many(&selected) {
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
                Ok(reports) => {
                    let code = if reports.iter().any(|r| r.status == d4sigma::scenario::Status::Error) {
                        2
                    } else if reports.iter().all(|r| r.passed()) {
                        0
                    } else {
                        1
                    };
                    (emit(&reports, format), code)
                }
            }
        }
    };
    if let Err(e) = write_output(&cli.out, &text) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
