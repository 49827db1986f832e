use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use normk::report::{
    write_csv, write_json, ClassGroupReport, Format, K0Report, ScanDocument, ScanRow, CLASSGROUP_COLUMNS,
    SCAN_COLUMNS,
};
use normk::scan::{self, ScanConfig};
use normk::verify::verify;
use normk_core::Discriminant;

const K0_BUDGET: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "normk", version, about = "Class groups, K₀ of the norm functor and genus scans for ℚ(√Δ)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Class group, narrow class group and unit data.
    Classgroup(ClassgroupArgs),
    /// Order and structure of K₀ with exactness verdicts.
    K0 {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Genus-theory verdicts for every fundamental discriminant in a range.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        min: i64,
        #[arg(long, allow_hyphen_values = true)]
        max: i64,
        /// Output file; `.csv` selects CSV, anything else JSON. Defaults to stdout (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Seeded property checks of the Mayer–Vietoris maps.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct ClassgroupArgs {
    #[arg(long, allow_hyphen_values = true)]
    disc: i64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn discriminant(n: i64) -> Result<Discriminant, Failure> {
    Discriminant::new(n).map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(pass)` on completion; `pass` is false on a mathematical verdict failure.
fn run(cmd: Cmd) -> Result<bool, Failure> {
    let stdout = io::stdout().lock();
    match cmd {
        Cmd::Classgroup(a) => {
            let report = ClassGroupReport::compute(&discriminant(a.disc)?);
            if a.csv {
                write_csv(stdout, &CLASSGROUP_COLUMNS, &[report.csv_row()])?;
            } else {
                write_json(stdout, &report)?;
            }
            Ok(true)
        }
        Cmd::K0 { disc } => {
            let report = K0Report::compute(&discriminant(disc)?, K0_BUDGET).map_err(|e| Failure::Usage(e.to_string()))?;
            write_json(stdout, &report)?;
            Ok(report.pass)
        }
        Cmd::Scan { min, max, out, jobs } => {
            if min > max {
                return Err(Failure::Usage(format!("--min {min} exceeds --max {max}")));
            }
            if jobs == Some(0) {
                return Err(Failure::Usage("--jobs must be positive".into()));
            }
            let reports = scan::run(&ScanConfig { min, max, jobs }).map_err(|e| Failure::Usage(e.to_string()))?;
            let doc = ScanDocument::new(min, max, reports.iter().map(ScanRow::from).collect());
            match &out {
                Some(path) => emit_scan(BufWriter::new(File::create(path)?), &doc, format_of(path))?,
                None => emit_scan(stdout, &doc, Format::Json)?,
            }
            eprintln!("scanned {} discriminants in [{min}, {max}], {} violations", doc.count, doc.violations);
            Ok(doc.violations == "0")
        }
        Cmd::Verify { disc, samples, seed } => {
            let report = verify(&discriminant(disc)?, samples, seed);
            write_json(stdout, &report)?;
            Ok(report.pass)
        }
    }
}

fn format_of(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    }
}

fn emit_scan<W: Write>(w: W, doc: &ScanDocument, format: Format) -> io::Result<()> {
    match format {
        Format::Json => write_json(w, doc),
        Format::Csv => write_csv(w, &SCAN_COLUMNS, &doc.rows),
    }
}
