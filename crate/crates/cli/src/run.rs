use std::fmt;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use cscc_core::oracle::{self, Verdict};
use cscc_core::scc::Progress;
use cscc_core::{
    coloured_scc_with, expand, parse_edges, parse_model, ColouredGraph, EdgeList, Engine, ExpandedNetwork, RunConfig,
    RunHooks, RunStatus, SccRelation,
};

/// Largest coloured state space `--verify` accepts.
pub const VERIFY_LIMIT: u128 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(name = "bnet-psbn")]
    BnetPsbn,
    Edges,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::BnetPsbn => "bnet-psbn",
            Format::Edges => "edges",
        }
    }

    /// `.edges` files are edge lists, anything else a network.
    pub fn guess(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("edges") => Format::Edges,
            _ => Format::BnetPsbn,
        }
    }
}

/// Errors that end a run before a report exists.
#[derive(Debug)]
pub enum LoadError {
    Read(String),
    Parse(String),
    TooLarge(String),
    Run(String),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Read(m) | LoadError::Parse(m) | LoadError::TooLarge(m) | LoadError::Run(m) => f.write_str(m),
        }
    }
}

enum Source {
    Network(ExpandedNetwork),
    Edges(EdgeList),
}

pub struct Loaded {
    pub name: String,
    pub format: Format,
    pub graph: ColouredGraph,
    source: Source,
}

pub fn load(path: &Path, format: Format) -> Result<Loaded, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Read(format!("cannot read `{}`: {e}", path.display())))?;
    let parse_error = |e: &dyn fmt::Display| LoadError::Parse(format!("cannot parse `{}`: {e}", path.display()));
    let (graph, source) = match format {
        Format::BnetPsbn => {
            let net = expand(&parse_model(&text).map_err(|e| parse_error(&e))?);
            let universe = net.universe().map_err(|e| parse_error(&e))?;
            let engine = Engine::new(Arc::new(universe));
            let graph = ColouredGraph::from_network(&net, &engine).map_err(|e| parse_error(&e))?;
            (graph, Source::Network(net))
        }
        Format::Edges => {
            let list = parse_edges(&text).map_err(|e| parse_error(&e))?;
            let graph = ColouredGraph::from_edge_list(&list).map_err(|e| parse_error(&e))?;
            (graph, Source::Edges(list))
        }
    };
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Loaded { name, format, graph, source })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SccRange {
    pub min: u64,
    pub max: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub saturation: bool,
    pub threads: usize,
    pub trimming: bool,
    pub trim_cutoff: f64,
    pub timeout_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    /// `equal`, `mismatch` or `skipped`.
    pub verdict: &'static str,
    pub detail: Option<String>,
}

/// Result of one run. Large counts are decimal strings; the wall time is
/// the last field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub model: String,
    pub format: &'static str,
    pub variables: usize,
    pub inputs: usize,
    pub valid_colours: String,
    pub coloured_states: String,
    /// Smallest and largest number of non-trivial SCCs over valid colours.
    pub nontrivial_sccs: Option<SccRange>,
    /// (colour, SCC) pairs, trivial ones included.
    pub total_sccs: String,
    pub components: usize,
    pub trimmed_states: String,
    pub trim_cutoffs: usize,
    pub symbolic_steps: u64,
    pub config: ConfigEcho,
    /// `complete` or `timeout-partial`.
    pub status: &'static str,
    pub verification: Option<Verification>,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn is_complete(&self) -> bool {
        self.status == "complete"
    }

    pub fn mismatch(&self) -> bool {
        self.verification.as_ref().is_some_and(|v| v.verdict == "mismatch")
    }
}

pub struct RunOutput {
    pub report: RunReport,
    pub result: SccRelation,
}

fn oracle_graph(loaded: &Loaded) -> Result<oracle::ExplicitColouredGraph, LoadError> {
    let too_large = |e: oracle::OracleError| LoadError::TooLarge(format!("--verify refused for `{}`: {e}", loaded.name));
    match &loaded.source {
        Source::Network(net) => oracle::enumerate_graph(net, VERIFY_LIMIT).map_err(too_large),
        Source::Edges(list) => {
            let g = oracle::graph_from_edges(list).map_err(too_large)?;
            let pairs = g.num_vertices as u128 * g.colours.len() as u128;
            if pairs > VERIFY_LIMIT {
                return Err(too_large(oracle::OracleError::TooLarge { pairs, limit: VERIFY_LIMIT }));
            }
            Ok(g)
        }
    }
}

/// Runs the decomposition and, if asked, the explicit check.
pub fn run(loaded: &Loaded, cfg: &RunConfig, verify: bool, progress: bool) -> Result<RunOutput, LoadError> {
    let explicit = verify.then(|| oracle_graph(loaded)).transpose()?;
    let g = &loaded.graph;
    let u = g.engine().universe();

    let report_progress = |p: &Progress| {
        eprintln!("task: {} coloured states, {} components so far, {} steps", p.pairs, p.components, p.steps);
    };
    let hooks = RunHooks {
        progress: progress.then_some(&report_progress as &(dyn Fn(&Progress) + Sync)),
        cancel: None,
    };
    let mut cfg = cfg.clone();
    cfg.record_relation |= verify;
    let start = Instant::now();
    let result = coloured_scc_with(g, &cfg, &hooks).map_err(|e| LoadError::Run(e.to_string()))?;
    let wall = start.elapsed().as_secs_f64();

    let complete = result.status == RunStatus::Complete;
    let verification = explicit.map(|explicit| {
        if !complete {
            return Verification { verdict: "skipped", detail: Some("run did not complete".into()) };
        }
        let rel = oracle::tarjan_per_colour(&explicit);
        let relation = result.relation.as_ref().expect("relation is recorded when verifying");
        match oracle::compare(relation, &explicit, &rel) {
            Verdict::Equal if result.nontrivial_range() == rel.nontrivial_range() => {
                Verification { verdict: "equal", detail: None }
            }
            Verdict::Equal => Verification {
                verdict: "mismatch",
                detail: Some(format!(
                    "non-trivial SCC range {:?}, explicit {:?}",
                    result.nontrivial_range(),
                    rel.nontrivial_range()
                )),
            },
            Verdict::Missing { u, colour, v } => Verification {
                verdict: "mismatch",
                detail: Some(format!("missing {}", explicit.describe(u, colour, v))),
            },
            Verdict::Extra { u, colour, v } => Verification {
                verdict: "mismatch",
                detail: Some(format!("unexpected (state {u:b}, colour {colour:b}, state {v:b})")),
            },
        }
    });

    let count = |s: &cscc_core::SymSet, over| s.count_assignments(over).map(|n| n.to_string()).unwrap_or_default();
    let report = RunReport {
        model: loaded.name.clone(),
        format: loaded.format.name(),
        variables: u.num_states(),
        inputs: u.num_inputs(),
        valid_colours: count(g.valid_colours(), &u.input_set()),
        coloured_states: count(&g.vertex_colour_space(), &u.vertex_colour_set()),
        nontrivial_sccs: result.nontrivial_range().map(|(min, max)| SccRange { min, max }),
        total_sccs: result.total_components().to_string(),
        components: result.components.len(),
        trimmed_states: count(&result.trimmed, &u.vertex_colour_set()),
        trim_cutoffs: result.trim_cutoffs,
        symbolic_steps: result.steps,
        config: ConfigEcho {
            saturation: cfg.saturation,
            threads: cfg.threads,
            trimming: cfg.trimming,
            trim_cutoff: cfg.trim_cutoff_factor,
            timeout_seconds: cfg.timeout.map(|t| t.as_secs_f64()),
        },
        status: if complete { "complete" } else { "timeout-partial" },
        verification,
        wall_time_seconds: wall,
    };
    Ok(RunOutput { report, result })
}
