//! `cscc`: coloured SCC decomposition of partially specified Boolean
//! networks and coloured edge lists.
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 when `--verify`
//! finds a difference, 3 when the timeout stopped the run.

mod bench;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use cscc_core::corpus::{corpus, CorpusParams};
use cscc_core::RunConfig;

use run::{load, Format};

#[derive(Parser, Debug)]
#[command(name = "cscc", version, about = "Symbolic coloured SCC decomposition")]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Model file (`bnet-psbn` network or coloured edge list).
    #[arg(required = true)]
    model: Option<PathBuf>,
    /// Input format; guessed from the file extension when absent.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Use saturation for reachability steps (default).
    #[arg(long, overrides_with = "no_saturation")]
    saturation: bool,
    /// Use plain image steps.
    #[arg(long, overrides_with = "saturation")]
    no_saturation: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Skip trimming of trivial components.
    #[arg(long)]
    no_trim: bool,
    /// Stop trimming once a diagram grows beyond this factor.
    #[arg(long, default_value_t = 2.0)]
    trim_cutoff: f64,
    /// Stop after this many seconds and report partial results.
    #[arg(long)]
    timeout: Option<f64>,
    /// Check the result against explicit enumeration (small models only).
    #[arg(long)]
    verify: bool,
    /// Write the relation in binary form to this file.
    #[arg(long)]
    dump_relation: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print one line per decomposition call on standard error.
    #[arg(long)]
    progress: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every model of a directory under several configurations.
    Bench {
        dir: PathBuf,
        /// Thread counts for the parallel configurations.
        #[arg(long, value_delimiter = ',', default_value = "4")]
        threads: Vec<usize>,
        /// Per-run timeout in seconds; runs that hit it are marked DNF.
        #[arg(long)]
        timeout: Option<f64>,
        /// Write the rows as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write seeded random networks into a directory.
    Corpus {
        dir: PathBuf,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_variables: usize,
        #[arg(long, default_value_t = 6)]
        max_inputs: usize,
    },
}

fn timeout(seconds: Option<f64>) -> Result<Option<Duration>, String> {
    seconds
        .map(|s| Duration::try_from_secs_f64(s).map_err(|_| format!("invalid timeout `{s}`")))
        .transpose()
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write `{}`: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_model(args: RunArgs) -> Result<ExitCode, String> {
    let model = args.model.expect("clap requires a model");
    if args.threads == 0 {
        return Err("--threads must be at least 1".into());
    }
    if !(args.trim_cutoff > 0.0) {
        return Err("--trim-cutoff must be positive".into());
    }
    let cfg = RunConfig {
        saturation: !args.no_saturation,
        threads: args.threads,
        trimming: !args.no_trim,
        trim_cutoff_factor: args.trim_cutoff,
        record_relation: args.dump_relation.is_some(),
        timeout: timeout(args.timeout)?,
    };
    let format = args.format.unwrap_or_else(|| Format::guess(&model));
    let loaded = load(&model, format).map_err(|e| e.to_string())?;
    let out = run::run(&loaded, &cfg, args.verify, args.progress).map_err(|e| e.to_string())?;

    if let Some(path) = &args.dump_relation {
        let relation = out.result.relation.as_ref().expect("relation is recorded when dumping");
        std::fs::write(path, relation.dump()).map_err(|e| format!("cannot write `{}`: {e}", path.display()))?;
    }
    let json = serde_json::to_string_pretty(&out.report).expect("reports serialise") + "\n";
    write_output(args.out.as_deref(), &json)?;

    Ok(if out.report.mismatch() {
        ExitCode::from(2)
    } else if !out.report.is_complete() {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_bench(dir: &Path, threads: &[usize], seconds: Option<f64>, out: Option<&Path>) -> Result<ExitCode, String> {
    if threads.contains(&0) {
        return Err("--threads must be at least 1".into());
    }
    let files = bench::model_files(dir).map_err(|e| format!("cannot list `{}`: {e}", dir.display()))?;
    let rows = bench::bench(&files, &bench::configurations(threads, timeout(seconds)?));
    print!("{}", bench::table(&rows));
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(&rows).expect("rows serialise") + "\n";
        write_output(Some(path), &json)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn write_corpus(dir: &Path, count: usize, seed: u64, params: &CorpusParams) -> Result<ExitCode, String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create `{}`: {e}", dir.display()))?;
    for (i, net) in corpus(seed, count, params).iter().enumerate() {
        let path = dir.join(format!("random_{seed}_{i:04}.bnet"));
        std::fs::write(&path, net.to_bnet()).map_err(|e| format!("cannot write `{}`: {e}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        None => run_model(cli.run),
        Some(Command::Bench { dir, threads, timeout, out }) => run_bench(&dir, &threads, timeout, out.as_deref()),
        Some(Command::Corpus { dir, count, seed, max_variables, max_inputs }) => {
            let params = CorpusParams { max_variables, max_inputs, ..CorpusParams::default() };
            write_corpus(&dir, count, seed, &params)
        }
    };
    outcome.unwrap_or_else(|message| {
        eprintln!("error: {message}");
        ExitCode::from(1)
    })
}
