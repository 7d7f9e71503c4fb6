use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nildegen::catalog::{instance_name, AlgRef, Corpus};
use nildegen::degeneration;
use nildegen::graph::{check_dot, to_dot};
use nildegen::invariants::fingerprint;
use nildegen::report::Report;
use nildegen::suite::{self, SuiteOptions, VARIETIES};

#[derive(Parser)]
#[command(name = "nildegen", version, about = "Verify degenerations of small nilpotent algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay every catalog, witness and certificate check.
    VerifyAll(RunArgs),
    /// Verify selected rows, e.g. `comm4.38` or `nil3-non`.
    Verify {
        #[arg(required = true)]
        rows: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write the degeneration graph of a variety as DOT.
    Graph {
        #[arg(value_parser = VARIETIES)]
        variety: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Maximal elements of the verified degeneration preorders.
    Rigidity {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a catalog algebra and its invariants.
    Show {
        /// `ID` or `ID(value)`, e.g. `C19(1/2)`.
        algebra: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Read the corpus from a directory instead of the built-in copy.
    #[arg(long)]
    corpus_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run sequentially even when built with the parallel feature.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Restrict to row ids, id prefixes (`nil3`, `comm4-non`) or kinds;
    /// repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Search budget per non-degeneration target.
    #[arg(long, default_value_t = nildegen::nondegeneration::DEFAULT_SEARCH_BUDGET)]
    trials: usize,
    #[arg(long, default_value_t = nildegen::nondegeneration::DEFAULT_BOREL_TRIALS)]
    borel_trials: usize,
    /// Working digits for the numeric mode.
    #[arg(long, default_value_t = degeneration::DEFAULT_DIGITS)]
    numeric_precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print details for passing rows too.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn load(common: &CommonArgs) -> Result<Corpus, String> {
    let corpus = match &common.corpus_dir {
        Some(dir) => Corpus::from_dir(dir).map_err(|e| e.to_string())?,
        None => Corpus::embedded(),
    };
    for n in &corpus.notes {
        eprintln!("note: {n}");
    }
    Ok(corpus)
}

fn options(run: &RunArgs, only: Vec<String>) -> SuiteOptions {
    SuiteOptions {
        seed: run.common.seed,
        search_budget: run.trials,
        borel_trials: run.borel_trials,
        digits: run.numeric_precision,
        parallel: !run.common.sequential,
        only,
        ..Default::default()
    }
}

fn emit(report: &Report, format: Format, verbose: bool) -> Result<(), String> {
    match format {
        Format::Text => print!("{}", report.to_text(verbose)),
        Format::Json => println!("{}", serde_json::to_string_pretty(report).map_err(|e| e.to_string())?),
    }
    Ok(())
}

fn exit_for(report: &Report) -> ExitCode {
    let failed = report.failures();
    for r in &failed {
        eprintln!("failed: {} ({})", r.id, r.kind);
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn verify(run: &RunArgs, only: Vec<String>) -> Result<ExitCode, String> {
    let corpus = load(&run.common)?;
    let opts = options(run, only);
    let result = suite::run(&corpus, &opts);
    if result.report.rows.is_empty() {
        return Err(format!("no rows match {}", opts.only.join(",")));
    }
    emit(&result.report, run.format, run.verbose)?;
    Ok(exit_for(&result.report))
}

fn all_degenerations(corpus: &Corpus, common: &CommonArgs) -> Vec<degeneration::DegenReport> {
    let ws: Vec<_> = corpus.witnesses.iter().collect();
    let opts = degeneration::Options { seed: common.seed, ..Default::default() };
    degeneration::verify_all(corpus, &ws, &opts, !common.sequential)
}

fn graph(variety: &str, out: Option<&PathBuf>, common: &CommonArgs) -> Result<ExitCode, String> {
    let corpus = load(common)?;
    let fig = corpus.figure(variety).ok_or_else(|| format!("unknown figure {variety}"))?;
    let reports = all_degenerations(&corpus, common);
    let pre = suite::preorders(&corpus, &reports);
    let dot = to_dot(&corpus, fig, &pre[variety]);
    check_dot(&dot).map_err(|e| format!("generated DOT is malformed: {e}"))?;
    match out {
        Some(path) => std::fs::write(path, &dot).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{dot}"),
    }
    let cov = suite::coverage_row(&corpus, variety, &reports);
    eprintln!("{}", cov.details[0]);
    Ok(ExitCode::SUCCESS)
}

fn rigidity(common: &CommonArgs, format: Format) -> Result<ExitCode, String> {
    let corpus = load(common)?;
    let reports = all_degenerations(&corpus, common);
    let mut rows: Vec<_> = reports
        .iter()
        .filter(|r| corpus.witness(&r.id).is_some_and(|w| w.index.is_some()))
        .map(|r| suite::degeneration_row(&corpus, r))
        .collect();
    rows.extend(VARIETIES.iter().map(|c| suite::rigidity_row(&corpus, c, &reports)));
    let report = Report { rows };
    emit(&report, format, true)?;
    Ok(exit_for(&report))
}

fn show(name: &str, common: &CommonArgs) -> Result<ExitCode, String> {
    let corpus = load(common)?;
    let r = AlgRef::parse(name).map_err(|e| e.to_string())?;
    let a = corpus.instance(&r, &Default::default()).map_err(|e| e.to_string())?;
    let e = corpus.get(&r.id).map_err(|e| e.to_string())?;
    let p = r.param_value(&Default::default()).map_err(|e| e.to_string())?;
    println!("{}: {} ({})", instance_name(&r.id, p.as_ref()), e.class, e.flavor.as_str());
    for l in a.table_lines() {
        println!("  {l}");
    }
    println!("  {}", fingerprint(&a));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::VerifyAll(run) => verify(run, run.only.clone()),
        Command::Verify { rows, run } => {
            let mut only: Vec<String> = rows.iter().flat_map(|r| r.split(',')).map(str::to_string).collect();
            only.extend(run.only.iter().cloned());
            verify(run, only)
        }
        Command::Graph { variety, out, common } => graph(variety, out.as_ref(), common),
        Command::Rigidity { common, format } => rigidity(common, *format),
        Command::Show { algebra, common } => show(algebra, common),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use nildegen::report::Verdict;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn only_accepts_commas() {
        let cli = Cli::try_parse_from(["nildegen", "verify-all", "--only=nil3,comm4.38", "--format", "json"]).unwrap();
        let Command::VerifyAll(run) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(run.only, vec!["nil3", "comm4.38"]);
        assert!(run.format == Format::Json);
    }

    #[test]
    fn unknown_variety_is_rejected() {
        assert!(Cli::try_parse_from(["nildegen", "graph", "nil4"]).is_err());
    }

    #[test]
    fn verdict_strings() {
        assert_eq!(Verdict::PassWithNote.as_str(), "PASS*");
    }
}
