//! Command-line front end. [`run_command`] does all the work and returns the
//! exit code with the rendered output so tests can drive it in-process.
//!
//! Exit codes: 0 success or the property holds, 1 the property fails,
//! 2 usage, parse or input errors.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{condition_report, find_sub_system};
use crate::constructions::{
    affine_sts9, builtin, develop_cyclic, disjoint_union_search, DEFAULT_SEARCH_TRIES, DEFAULT_SEED,
};
use crate::design::{validate_pbd_with_limit, validate_t_design_with_limit, Design, DEFAULT_VIOLATION_LIMIT};
use crate::ec::{find_dominating_union_pair, is_2_ec_fast, is_n_ec, xi_with_cap, DEFAULT_XI_CAP};
use crate::graph::{build_big, build_s_big, Graph};
use crate::io::{parse_blocks_file, write_blocks_file};
use crate::report::{
    DesignSummary, DominatingSection, EcSection, GraphSummary, Report, SubsystemSection, ValidationSection,
    XiSection,
};
use crate::suite::{verify_paper_suite, SuiteOptions, EXTRA_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker count (0 or unset = automatic).
pub const THREADS_ENV: &str = "EC_DESIGNS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ec-designs", version, about = "Block designs, their intersection graphs and existential closure")]
pub struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphMode {
    Big,
    Sbig,
}

#[derive(Debug, Args)]
pub struct GraphOpts {
    /// Which intersection graph to build.
    #[arg(long = "graph-mode", alias = "mode", value_enum, default_value = "big")]
    pub mode: GraphMode,
    /// Intersection sizes joined by an edge in `sbig` mode, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named design or a cyclic development `cyclic:<v>:<a,b,c>/<d,e,f>`.
    Construct {
        spec: String,
        /// Write the blocks file here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check t-design or PBD axioms.
    Validate {
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Validate as a PBD with these block sizes.
        #[arg(long, value_delimiter = ',', conflicts_with = "k")]
        k_set: Vec<usize>,
        #[arg(long)]
        lambda: u64,
        #[arg(long, default_value_t = DEFAULT_VIOLATION_LIMIT)]
        max_violations: usize,
        source: String,
    },
    /// Build the BIG or an S-BIG and optionally export its edge list.
    Graph {
        #[command(flatten)]
        graph: GraphOpts,
        /// Edge list destination: `n <n>`, `m <m>`, then one `u v` per line.
        #[arg(long)]
        out: Option<PathBuf>,
        source: String,
    },
    /// Decide whether the intersection graph is n-e.c.
    Ec {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        graph: GraphOpts,
        source: String,
    },
    /// Existential closure number of the intersection graph.
    Xi {
        #[arg(long, default_value_t = DEFAULT_XI_CAP)]
        cap: usize,
        #[command(flatten)]
        graph: GraphOpts,
        source: String,
    },
    /// Look for two blocks whose union meets every block.
    Dominate { source: String },
    /// Look for a point set carrying a 2-(w, k, lambda) sub-design.
    Subsys {
        #[arg(long)]
        w: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: u64,
        source: String,
    },
    /// Evaluate the parameter inequalities for n-e.c. intersection graphs.
    Conditions {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        n: u64,
    },
    /// Run the end-to-end checks.
    VerifyPaper {
        /// Skip the SQS(32) stress check.
        #[arg(long)]
        fast: bool,
        /// Supply an external design, e.g. `sqs14=path/to/file`.
        #[arg(long = "extra", value_parser = parse_extra)]
        extras: Vec<(String, PathBuf)>,
    },
}

fn parse_extra(s: &str) -> Result<(String, PathBuf), String> {
    let (name, path) = s.split_once('=').ok_or("expected name=path")?;
    if !EXTRA_NAMES.contains(&name) {
        return Err(format!("unknown extra '{name}', expected one of {}", EXTRA_NAMES.join(", ")));
    }
    Ok((name.to_string(), PathBuf::from(path)))
}

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Option<Report>,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { exit_code: EXIT_USAGE, report: None, stdout: String::new(), stderr }
    }
}

/// Applies [`THREADS_ENV`] to the global rayon pool. Only the first call in
/// a process has an effect.
pub fn configure_threads() {
    let n = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn parse_cyclic(spec: &str) -> Result<Design, String> {
    let rest = spec.strip_prefix("cyclic:").ok_or("not a cyclic spec")?;
    let (v, bases) = rest.split_once(':').ok_or("expected cyclic:<v>:<base blocks>")?;
    let v: usize = v.parse().map_err(|_| format!("bad modulus '{v}'"))?;
    let base_blocks = bases
        .split('/')
        .map(|b| {
            b.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad point '{x}'")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dev = develop_cyclic(v, &base_blocks).map_err(|e| e.to_string())?;
    Ok(dev.design)
}

/// Resolves a builtin name, a cyclic spec, or a blocks file path, in that
/// order.
pub fn resolve_source(source: &str, seed: u64) -> Result<Design, String> {
    if source == "ts9_2" {
        return disjoint_union_search(&affine_sts9(), seed, DEFAULT_SEARCH_TRIES)
            .map(|(d, _)| d)
            .ok_or_else(|| format!("no block-disjoint STS(9) pair within {DEFAULT_SEARCH_TRIES} tries"));
    }
    match builtin(source) {
        Ok(d) => return Ok(d),
        Err(crate::design::DesignError::UnknownBuiltin(_)) => {}
        Err(e) => return Err(format!("{source}: {e}")),
    }
    if source.starts_with("cyclic:") {
        return parse_cyclic(source).map_err(|e| format!("{source}: {e}"));
    }
    let text = fs::read_to_string(source).map_err(|e| format!("{source}: {e}"))?;
    parse_blocks_file(&text).map_err(|e| format!("{source}: {e}"))
}

fn build_graph(d: &Design, opts: &GraphOpts) -> Result<(Graph, GraphSummary), String> {
    let (g, s) = match opts.mode {
        GraphMode::Big => {
            if !opts.s.is_empty() {
                return Err("--s only applies to --graph-mode sbig".into());
            }
            let kmax = d.block_size_range().map_or(0, |(_, hi)| hi);
            (build_big(d), (1..=kmax).collect())
        }
        GraphMode::Sbig => {
            if opts.s.is_empty() {
                return Err("--graph-mode sbig needs --s".into());
            }
            let mut s = opts.s.clone();
            s.sort_unstable();
            s.dedup();
            (build_s_big(d, &s), s)
        }
    };
    let summary = GraphSummary {
        mode: match opts.mode {
            GraphMode::Big => "big".into(),
            GraphMode::Sbig => "sbig".into(),
        },
        s,
        vertices: g.n(),
        edges: g.edge_count(),
        stats: g.degree_stats(),
        written_to: None,
    };
    Ok((g, summary))
}

fn edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\nm {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

struct Timer {
    start: Instant,
}

impl Timer {
    fn start() -> Self {
        Timer { start: Instant::now() }
    }

    fn record(self, report: &mut Report, key: &str) {
        report.timings_us.insert(key.to_string(), self.start.elapsed().as_micros() as u64);
    }
}

fn load(report: &mut Report, source: &str, seed: u64) -> Result<Design, String> {
    let t = Timer::start();
    let d = resolve_source(source, seed)?;
    t.record(report, "load");
    report.source = Some(source.to_string());
    report.design = Some(DesignSummary::of(&d));
    Ok(d)
}

fn execute(cli: &Cli) -> Result<(i32, Report), String> {
    let seed = cli.seed;
    let mut code = EXIT_OK;
    let report = match &cli.command {
        Command::Construct { spec, out } => {
            let mut r = Report::new("construct", seed);
            let d = load(&mut r, spec, seed)?;
            let text = write_blocks_file(&d);
            match out {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
                }
                None => r.blocks_file = Some(text),
            }
            r
        }
        Command::Validate { t, k, k_set, lambda, max_violations, source } => {
            let mut r = Report::new("validate", seed);
            let d = load(&mut r, source, seed)?;
            let timer = Timer::start();
            let section = if k_set.is_empty() {
                let k = k.ok_or("validate needs --k or --k-set")?;
                let rep = validate_t_design_with_limit(&d, *t, k, *lambda, *max_violations)
                    .map_err(|e| e.to_string())?;
                ValidationSection { kind: "t-design".into(), t: *t, k_set: vec![k], lambda: *lambda, report: rep }
            } else {
                if *t != 2 {
                    return Err("--k-set validates pairwise balance, so --t must be 2".into());
                }
                let rep = validate_pbd_with_limit(&d, k_set, *lambda, *max_violations).map_err(|e| e.to_string())?;
                let mut ks = k_set.clone();
                ks.sort_unstable();
                ks.dedup();
                ValidationSection { kind: "pbd".into(), t: 2, k_set: ks, lambda: *lambda, report: rep }
            };
            timer.record(&mut r, "validate");
            if !section.report.ok {
                code = EXIT_FAILS;
            }
            r.validation = Some(section);
            r
        }
        Command::Graph { graph, out, source } => {
            let mut r = Report::new("graph", seed);
            let d = load(&mut r, source, seed)?;
            let timer = Timer::start();
            let (g, mut summary) = build_graph(&d, graph)?;
            timer.record(&mut r, "graph");
            if let Some(path) = out {
                fs::write(path, edge_list(&g)).map_err(|e| format!("{}: {e}", path.display()))?;
                summary.written_to = Some(path.display().to_string());
            }
            r.graph = Some(summary);
            r
        }
        Command::Ec { n, graph, source } => {
            let mut r = Report::new("ec", seed);
            let d = load(&mut r, source, seed)?;
            let timer = Timer::start();
            let (g, summary) = build_graph(&d, graph)?;
            timer.record(&mut r, "graph");
            let timer = Timer::start();
            let result = if *n == 2 { is_2_ec_fast(&g) } else { is_n_ec(&g, *n) }.map_err(|e| e.to_string())?;
            timer.record(&mut r, "ec");
            if !result.holds {
                code = EXIT_FAILS;
            }
            r.graph = Some(summary);
            r.ec = Some(EcSection { n: *n, result });
            r
        }
        Command::Xi { cap, graph, source } => {
            let mut r = Report::new("xi", seed);
            let d = load(&mut r, source, seed)?;
            let timer = Timer::start();
            let (g, summary) = build_graph(&d, graph)?;
            timer.record(&mut r, "graph");
            let timer = Timer::start();
            let result = xi_with_cap(&g, *cap);
            timer.record(&mut r, "xi");
            r.graph = Some(summary);
            r.xi = Some(XiSection { cap: *cap, result });
            r
        }
        Command::Dominate { source } => {
            let mut r = Report::new("dominate", seed);
            let d = load(&mut r, source, seed)?;
            let timer = Timer::start();
            let pair = find_dominating_union_pair(&d);
            timer.record(&mut r, "dominate");
            let blocks = pair.map(|(i, j)| (d.block(i).to_vec(), d.block(j).to_vec()));
            r.dominating = Some(DominatingSection { pair, blocks });
            r
        }
        Command::Subsys { w, k, lambda, source } => {
            let mut r = Report::new("subsys", seed);
            let d = load(&mut r, source, seed)?;
            let timer = Timer::start();
            let points = find_sub_system(&d, *w, *k, *lambda).map_err(|e| e.to_string())?;
            timer.record(&mut r, "subsys");
            r.subsystem = Some(SubsystemSection { w: *w, k: *k, lambda: *lambda, points });
            r
        }
        Command::Conditions { v, k, lambda, n } => {
            let mut r = Report::new("conditions", seed);
            r.conditions = Some(condition_report(*v, *k, *lambda, *n).map_err(|e| e.to_string())?);
            r
        }
        Command::VerifyPaper { fast, extras } => {
            let mut r = Report::new("verify-paper", seed);
            let mut loaded = Vec::new();
            for (name, path) in extras {
                let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                let d = parse_blocks_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                loaded.push((name.clone(), d));
            }
            let timer = Timer::start();
            let suite = verify_paper_suite(&SuiteOptions { fast: *fast, seed, extras: loaded });
            timer.record(&mut r, "suite");
            if !suite.all_passed {
                code = EXIT_FAILS;
            }
            r.suite = Some(suite);
            r
        }
    };
    Ok((code, report))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(rendered)
            } else {
                Outcome { exit_code: EXIT_OK, report: None, stdout: rendered, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((exit_code, report)) => {
            let stdout = if cli.json {
                report.to_json()
            } else if let (Command::Construct { .. }, Some(text)) = (&cli.command, &report.blocks_file) {
                text.clone()
            } else {
                report.to_text()
            };
            Outcome { exit_code, report: Some(report), stdout, stderr: String::new() }
        }
        Err(msg) => Outcome::usage(format!("error: {msg}")),
    }
}
