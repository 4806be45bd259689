//! Command-line front end: `build`, `run`, `oracle` and `estimate`.
//!
//! Exit codes: 0 on success, 2 for invalid input, 1 for internal failures
//! such as an unwritable output.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::engine::{self, CasReport};
use crate::error::Error;
use crate::forest::{self, Forest, Orientation};
use crate::neighborhood::ball_size;
use crate::oracle::{oracle_cas, CasInstance};
use crate::perf::{self, ResourceProfile};
use crate::sequence::{parse_fasta_str, Alphabet, SearchConfig, Sequence};

#[derive(Parser, Debug)]
#[command(
    name = "systolic-cas",
    version,
    about = "Build, simulate and size systolic motif forests for common approximate substring search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Preprocess the first FASTA record into a forest file.
    Build(BuildArgs),
    /// Stream query strings through a forest and report verified motifs.
    Run(RunArgs),
    /// Solve the same problem by brute force.
    Oracle(OracleArgs),
    /// CLB, feasibility and latency estimates for a forest.
    Estimate(EstimateArgs),
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    fasta: PathBuf,
    /// Motif length.
    #[arg(long = "m")]
    m: usize,
    /// Allowed substitutions.
    #[arg(long = "d")]
    d: usize,
    /// Number of strings including the database string; defaults to the
    /// FASTA record count.
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long, default_value = "motif-reversed", value_parser = parse_orientation)]
    orientation: Orientation,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    forest: PathBuf,
    /// Either all n records (the first, the database string, is skipped)
    /// or only the n - 1 query records.
    #[arg(long)]
    queries: PathBuf,
    /// Report destination; standard output when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    fasta: PathBuf,
    #[arg(long = "m")]
    m: usize,
    #[arg(long = "d")]
    d: usize,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long)]
    forest: PathBuf,
    #[arg(long, default_value_t = perf::DEFAULT_DEVICE_CLBS)]
    device_clbs: u64,
    /// Query length for latency figures.
    #[arg(long = "l")]
    l: Option<usize>,
}

fn parse_orientation(s: &str) -> Result<Orientation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    User(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::User(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn internal(e: io::Error) -> Failure {
    Failure::Internal(e.to_string())
}

/// Runs the command line given in `args` (program name first).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Build(a) => cmd_build(&a, stderr),
        Command::Run(a) => cmd_run(&a, stdout),
        Command::Oracle(a) => cmd_oracle(&a, stdout),
        Command::Estimate(a) => cmd_estimate(&a, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::User(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            1
        }
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn read_fasta(path: &Path, alphabet: &Alphabet) -> CliResult<Vec<Sequence>> {
    let text = read_input(path)?;
    parse_fasta_str(&text, alphabet).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn read_forest(path: &Path) -> CliResult<Forest> {
    let text = read_input(path)?;
    forest::deserialize(&text).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn cmd_build(args: &BuildArgs, stderr: &mut dyn Write) -> CliResult {
    let alphabet = Alphabet::dna();
    let records = read_fasta(&args.fasta, &alphabet)?;
    let Some(db) = records.first() else {
        return Err(Failure::User(format!("{}: no FASTA records", args.fasta.display())));
    };
    let config = SearchConfig::new(args.m, args.d, args.n.unwrap_or(records.len()))?;
    let forest = Forest::build(db, config, &alphabet, args.orientation)?;
    fs::write(&args.out, forest::serialize(&forest)).map_err(internal)?;

    let counts = forest.node_counts();
    let per_generator = ball_size(config.m, config.d, alphabet.sigma())?;
    let generators = db.len() - config.m + 1;
    writeln!(stderr, "processing nodes: {}", counts.processing).map_err(internal)?;
    writeln!(stderr, "exit nodes: {}", counts.exits).map_err(internal)?;
    writeln!(stderr, "leaf bound per generator: {per_generator}").map_err(internal)?;
    writeln!(
        stderr,
        "leaf bound for {generators} generators: {}",
        per_generator.saturating_mul(generators as u128)
    )
    .map_err(internal)?;
    Ok(())
}

fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> CliResult {
    let forest = read_forest(&args.forest)?;
    let records = read_fasta(&args.queries, forest.alphabet())?;
    let n = forest.config().n;
    let queries = if records.len() == n {
        &records[1..]
    } else if records.len() + 1 == n {
        &records[..]
    } else {
        return Err(Failure::User(format!(
            "{}: forest expects {} query strings (or {n} records including the database string), found {} records",
            args.queries.display(),
            n - 1,
            records.len()
        )));
    };

    let report = engine::run_all(&forest, queries)?;
    let tsv = report_tsv(&report, forest.exits().len());
    match &args.report {
        Some(path) => fs::write(path, tsv).map_err(internal)?,
        None => stdout.write_all(tsv.as_bytes()).map_err(internal)?,
    }

    if let Some(path) = &args.trace {
        let file = fs::File::create(path).map_err(internal)?;
        let mut sink = BufWriter::new(file);
        for q in queries {
            engine::trace(&forest, q, &mut sink).map_err(|e| match e {
                Error::Io(io) => internal(io),
                other => other.into(),
            })?;
        }
        sink.flush().map_err(internal)?;
    }
    Ok(())
}

/// Tab-separated, one record per exit sorted by motif, `#` header and
/// trailing `#` summary.
pub fn report_tsv(report: &CasReport, exits: usize) -> String {
    let mut records: Vec<_> = report.records.iter().collect();
    records.sort_by(|a, b| a.motif.cmp(&b.motif));
    let mut out = String::from("#motif\tstring_bits\tpotential_count\tverified\n");
    for r in records {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.motif,
            r.string_bits,
            r.potential_count(),
            r.verified
        ));
    }
    out.push_str(&format!(
        "# verified={} exits={exits} strings={}\n",
        report.verified_count(),
        report.n
    ));
    out
}

fn cmd_oracle(args: &OracleArgs, stdout: &mut dyn Write) -> CliResult {
    let alphabet = Alphabet::dna();
    let strings = read_fasta(&args.fasta, &alphabet)?;
    if strings.is_empty() {
        return Err(Failure::User(format!("{}: no FASTA records", args.fasta.display())));
    }
    let config = SearchConfig::new(args.m, args.d, strings.len())?;
    let instance = CasInstance::new(strings, config)?;
    let mut out = String::new();
    for motif in oracle_cas(&instance, &alphabet) {
        out.push_str(motif.as_str());
        out.push('\n');
    }
    stdout.write_all(out.as_bytes()).map_err(internal)
}

fn cmd_estimate(args: &EstimateArgs, stdout: &mut dyn Write) -> CliResult {
    let forest = read_forest(&args.forest)?;
    let profile = ResourceProfile::default();
    let counts = forest.node_counts();
    let config = forest.config();
    let fit = perf::feasibility(counts, &profile, args.device_clbs)?;

    let mut out = String::new();
    out.push_str(&format!("processing nodes: {}\n", counts.processing));
    out.push_str(&format!("exit nodes: {}\n", counts.exits));
    out.push_str(&format!(
        "estimated CLBs: {} ({} x {} + {} x {})\n",
        fit.required_clbs,
        counts.processing,
        profile.clb_per_processing_node,
        counts.exits,
        profile.clb_per_exit_node
    ));
    if counts.processing == 21 && counts.exits == 10 {
        out.push_str(&format!(
            "note: measured {} CLBs for this forest after synthesis ({} with clock divider)\n",
            perf::MEASURED_ACT_FOREST_CLBS,
            perf::MEASURED_ACT_FOREST_DIVIDED_CLBS
        ));
    }
    out.push_str(&format!(
        "device CLBs: {}, utilization {:.2}%: {}\n",
        fit.device_clbs,
        fit.utilization * 100.0,
        if fit.fits { "feasible" } else { "infeasible" }
    ));

    let worst = perf::unshared_counts(config.m, config.d, forest.alphabet().sigma())?;
    let worst_fit = perf::feasibility(worst, &profile, args.device_clbs)?;
    out.push_str(&format!(
        "unshared worst case per generator (m={}, d={}): {} processing + {} exits = {} CLBs, utilization {:.2}%: {}\n",
        config.m,
        config.d,
        worst.processing,
        worst.exits,
        worst_fit.required_clbs,
        worst_fit.utilization * 100.0,
        if worst_fit.fits { "feasible" } else { "infeasible" }
    ));

    if let Some(l) = args.l {
        out.push_str(&format!("latency for l={l}: {} steps\n", 2 * l + config.m));
        for (label, hz) in [
            ("processing-node clock", profile.clock_processing_hz),
            ("exit-node clock", profile.clock_exit_hz),
            ("clock-divided", profile.clock_divided_hz),
        ] {
            let secs = perf::estimate_latency(l, config.m, hz)?;
            out.push_str(&format!("  {label} {:.3} MHz: {secs:.6e} s\n", hz / 1e6));
        }
    }
    stdout.write_all(out.as_bytes()).map_err(internal)
}
