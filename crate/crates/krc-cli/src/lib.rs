//! File formats and command dispatch for the `krc` binary.

#![warn(missing_docs)]

pub mod error;
pub mod formats;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use krc_core::cw::{check_cw_input, reconstruct_center_cw, solve_cw_count};
use krc_core::generators::{
    gen_mis_vc_instance, gen_random_cnf, gen_random_cw_expression, gen_random_instance, gen_sat_td_instance,
    gen_seth_cw_instance, mark_random_irrelevant, seth_witness_from_assignment, Cnf, MisMode, SatTdMode,
};
use krc_core::oracle::{
    brute_force_decide, brute_force_min_radius, enumerate_valid_cw_labelings_all, mis_brute, sat_brute, DEFAULT_LIMIT,
};
use krc_core::param::{compute_vertex_cover, solve_td, solve_vc};
use krc_core::tw::{approx_cw, approx_tw, solve_tw_exact, ApproxOutcome, CwApproxConfig};
use krc_core::witness::{eval_cw_expression, heuristic_decomposition, make_nice, CwExpression, TreeDecomposition};
use krc_core::{verify_center, CenterSet, Graph, KrcError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

pub use error::{CliError, CliResult};
pub use report::{InstanceStats, RunReport, RunResult};

/// Command line of `krc`.
#[derive(Debug, Parser)]
#[command(name = "krc", version, about = "Exact and approximate (k,r)-Center solvers")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include the wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Worker threads made available to the solvers (they run deterministically).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// The command.
    #[command(subcommand)]
    pub command: Command,
}

/// Sub-commands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether k centers of radius r exist and report them.
    Solve(SolveArgs),
    /// Count center sets of every size on a clique-width expression.
    Count(CountArgs),
    /// Run an approximation scheme.
    Approx(ApproxArgs),
    /// Check a center set.
    Verify(VerifyArgs),
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenKind),
    /// Run an exhaustive oracle.
    #[command(subcommand)]
    Oracle(OracleKind),
    /// Time the solvers on seeded random graphs.
    Bench(BenchArgs),
}

/// Exact algorithms of `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveAlgo {
    /// Exhaustive search.
    Bf,
    /// Tree decomposition program.
    Tw,
    /// Clique-width program (unit weights).
    Cw,
    /// Vertex cover algorithm (unit weights).
    Vc,
    /// Tree-depth algorithm (unit weights).
    Td,
}

/// Approximation pipelines of `approx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ApproxAlgo {
    /// Scheme on a tree decomposition.
    Tw,
    /// Scheme on a clique-width expression.
    Cw,
}

/// Arguments of `solve`.
#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Algorithm.
    #[arg(long, value_enum)]
    pub algo: SolveAlgo,
    /// Graph file (`.grw`); for `cw` the expression's graph is used when absent.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Tree decomposition (`.td`); a heuristic one is computed when absent.
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Clique-width expression (`.cwe`), required by `cw`.
    #[arg(long)]
    pub cwe: Option<PathBuf>,
    /// Number of centers.
    #[arg(short = 'k')]
    pub k: usize,
    /// Radius.
    #[arg(short = 'r')]
    pub r: u64,
    /// Vertex cover for `vc` as 1-indexed ids `1,4,7`; computed when absent.
    #[arg(long)]
    pub vc_set: Option<String>,
    /// Claimed tree-depth of the graph for `td`.
    #[arg(long)]
    pub td_bound: Option<usize>,
    /// Enumeration limit of `bf`.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    pub limit: u128,
}

/// Arguments of `count`.
#[derive(Debug, Args)]
pub struct CountArgs {
    /// Clique-width expression (`.cwe`).
    #[arg(long)]
    pub cwe: PathBuf,
    /// Graph the expression must describe; the expression's graph when absent.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Largest number of centers counted.
    #[arg(short = 'k')]
    pub k: usize,
    /// Radius.
    #[arg(short = 'r')]
    pub r: u64,
}

/// Arguments of `approx`.
#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Pipeline.
    #[arg(long, value_enum)]
    pub algo: ApproxAlgo,
    /// Graph file for `tw`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Tree decomposition for `tw`; a heuristic one is computed when absent.
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Expression for `cw`.
    #[arg(long)]
    pub cwe: Option<PathBuf>,
    /// Number of centers.
    #[arg(short = 'k')]
    pub k: usize,
    /// Radius.
    #[arg(short = 'r')]
    pub r: u64,
    /// Error bound as an exact rational `p/q` in `(0, 1]`.
    #[arg(long)]
    pub eps: String,
}

/// Arguments of `verify`.
#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Graph file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Centers as 1-indexed ids `1,4,7`.
    #[arg(long)]
    pub centers: String,
    /// Radius.
    #[arg(short = 'r')]
    pub r: u64,
}

/// Instance generators. Each writes `--out` and a JSON sidecar next to it.
#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Clique-width lower-bound instance of a CNF formula.
    SethCw {
        /// Formula (DIMACS CNF).
        #[arg(long)]
        cnf: PathBuf,
        /// Radius.
        #[arg(short = 'r')]
        r: u64,
        /// Variables per group parameter `p`.
        #[arg(short = 'p', default_value_t = 1)]
        p: usize,
        /// Number of columns instead of the default.
        #[arg(long)]
        columns: Option<usize>,
        /// Output graph.
        #[arg(long)]
        out: PathBuf,
    },
    /// Weighted vertex-cover-parameterized instance of multicolored independent set.
    MisVc {
        /// Source graph.
        #[arg(long)]
        graph: PathBuf,
        /// Parts as `1,2;3,4`.
        #[arg(long)]
        parts: String,
        /// Output graph.
        #[arg(long)]
        out: PathBuf,
    },
    /// Unweighted feedback-vertex-set-parameterized variant.
    MisFvs {
        /// Source graph.
        #[arg(long)]
        graph: PathBuf,
        /// Parts as `1,2;3,4`.
        #[arg(long)]
        parts: String,
        /// Plain subdivision of every weighted edge.
        #[arg(long)]
        literal: bool,
        /// Output graph.
        #[arg(long)]
        out: PathBuf,
    },
    /// Tree-depth instance of a CNF formula with a square number of variables.
    SatTd {
        /// Formula (DIMACS CNF).
        #[arg(long)]
        cnf: PathBuf,
        /// Plain construction without the coverage repairs.
        #[arg(long)]
        literal: bool,
        /// Output graph.
        #[arg(long)]
        out: PathBuf,
    },
    /// Connected random graph.
    Random {
        /// Vertices.
        #[arg(short = 'n')]
        n: usize,
        /// Edges.
        #[arg(short = 'm')]
        m: usize,
        /// Largest weight.
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        /// Seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Percentage of vertices marked irrelevant.
        #[arg(long, default_value_t = 0)]
        irrelevant_percent: u8,
        /// Also write a heuristic tree decomposition next to the graph.
        #[arg(long)]
        with_td: bool,
        /// Output graph.
        #[arg(long)]
        out: PathBuf,
    },
    /// Random clique-width expression.
    RandomCwe {
        /// Vertices.
        #[arg(short = 'n')]
        n: usize,
        /// Labels.
        #[arg(long, default_value_t = 3)]
        cw: usize,
        /// Largest weight.
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        /// Seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output expression.
        #[arg(long)]
        out: PathBuf,
    },
    /// Random CNF formula.
    RandomCnf {
        /// Variables.
        #[arg(long)]
        vars: usize,
        /// Clauses.
        #[arg(long)]
        clauses: usize,
        /// Literals per clause.
        #[arg(long, default_value_t = 3)]
        width: usize,
        /// Seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output formula.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Exhaustive oracles.
#[derive(Debug, Subcommand)]
pub enum OracleKind {
    /// Smallest center set of size at most k.
    Decide {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Number of centers.
        #[arg(short = 'k')]
        k: usize,
        /// Radius.
        #[arg(short = 'r')]
        r: u64,
        /// Enumeration limit.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u128,
    },
    /// Optimal radius with k centers.
    MinRadius {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Number of centers.
        #[arg(short = 'k')]
        k: usize,
        /// Enumeration limit.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u128,
    },
    /// Valid labelings of an expression by number of zeros.
    Count {
        /// Expression file.
        #[arg(long)]
        cwe: PathBuf,
        /// Largest number of centers for the decision.
        #[arg(short = 'k')]
        k: usize,
        /// Radius.
        #[arg(short = 'r')]
        r: u64,
        /// Enumeration limit.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u128,
    },
    /// Satisfiability by enumeration.
    Sat {
        /// Formula (DIMACS CNF).
        #[arg(long)]
        cnf: PathBuf,
        /// Enumeration limit.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u128,
    },
    /// Multicolored independent set by enumeration.
    Mis {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Parts as `1,2;3,4`.
        #[arg(long)]
        parts: String,
        /// Enumeration limit.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u128,
    },
}

/// Arguments of `bench`.
#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Graph sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 12, 16])]
    pub sizes: Vec<usize>,
    /// Seeds per size.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    /// Number of centers.
    #[arg(short = 'k', default_value_t = 2)]
    pub k: usize,
    /// Radius.
    #[arg(short = 'r', default_value_t = 2)]
    pub r: u64,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn with_file<T>(path: &Path, f: impl FnOnce(&str) -> CliResult<T>) -> CliResult<T> {
    f(&read(path)?).map_err(|e| match e {
        CliError::Syntax { line, msg } => CliError::Usage(format!("{}: line {line}: {msg}", path.display())),
        other => other,
    })
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    with_file(path, formats::parse_graph)
}

fn load_cwe(path: &Path) -> CliResult<CwExpression> {
    with_file(path, formats::parse_cwe)
}

fn load_cnf(path: &Path) -> CliResult<Cnf> {
    with_file(path, formats::parse_cnf)
}

fn require<'a>(p: &'a Option<PathBuf>, flag: &str, what: &str) -> CliResult<&'a Path> {
    p.as_deref().ok_or_else(|| CliError::Usage(format!("{what} needs {flag}")))
}

fn decomposition(g: &Graph, path: &Option<PathBuf>) -> CliResult<TreeDecomposition> {
    match path {
        Some(p) => with_file(p, |t| formats::parse_td(t, Some(g))),
        None => Ok(heuristic_decomposition(g)),
    }
}

fn edge_count(g: &Graph) -> usize {
    if g.is_undirected() {
        g.arc_count() / 2
    } else {
        g.arc_count()
    }
}

fn graph_stats(g: &Graph) -> InstanceStats {
    InstanceStats {
        n: Some(g.n()),
        m: Some(edge_count(g)),
        irrelevant: Some(g.irrelevant_vertices().len()),
        ..InstanceStats::default()
    }
}

/// Checks `c` on `g` within `bound` and returns its measured radius.
fn certify(g: &Graph, c: &CenterSet, bound: u64) -> CliResult<u64> {
    let rep = verify_center(g, c, bound)?;
    if !rep.covered {
        return Err(KrcError::Internal(format!("reported centers do not cover the graph within {bound}")).into());
    }
    Ok(rep.max_distance.unwrap_or(0))
}

fn decide(rep: &mut RunReport, g: &Graph, centers: Option<CenterSet>, bound: u64) -> CliResult<()> {
    match centers {
        Some(c) => {
            rep.certified_radius = Some(certify(g, &c, bound)?);
            rep.result.decision = Some(true);
            rep.result.centers = Some(formats::one_indexed(&c));
            rep.exit_code = 0;
        }
        None => {
            rep.result.decision = Some(false);
            rep.exit_code = 1;
        }
    }
    Ok(())
}

fn solve(a: &SolveArgs, rep: &mut RunReport) -> CliResult<()> {
    rep.algorithm = format!("solve-{:?}", a.algo).to_lowercase();
    rep.result.radius = Some(a.r);
    if a.algo == SolveAlgo::Cw {
        let e = load_cwe(require(&a.cwe, "--cwe", "solve --algo cw")?)?;
        let g = match &a.graph {
            Some(p) => load_graph(p)?,
            None => eval_cw_expression(&e)?,
        };
        check_cw_input(&g, &e)?;
        rep.instance = InstanceStats { cw: Some(e.cw), ..graph_stats(&g) };
        let c = reconstruct_center_cw(&g, &e, a.k, a.r)?;
        return decide(rep, &g, c, a.r);
    }
    let g = load_graph(require(&a.graph, "--graph", "solve")?)?;
    rep.instance = graph_stats(&g);
    let centers = match a.algo {
        SolveAlgo::Bf => brute_force_decide(&g, a.k, a.r, a.limit)?,
        SolveAlgo::Tw | SolveAlgo::Td => {
            let ntd = make_nice(&decomposition(&g, &a.td)?);
            rep.instance.width = Some(ntd.width());
            rep.instance.height = Some(ntd.height());
            if a.algo == SolveAlgo::Tw {
                solve_tw_exact(&g, &ntd, a.k, a.r)?
            } else {
                let res = solve_td(&g, &ntd, a.td_bound, a.k, a.r)?;
                rep.details = json!({
                    "trivial_components": res.trivial_components,
                    "dp_components": res.dp_components,
                    "warnings": res.warnings,
                });
                res.centers
            }
        }
        SolveAlgo::Vc => {
            let cover = match &a.vc_set {
                Some(s) => formats::parse_vertex_list(s, g.n())?,
                None => compute_vertex_cover(&g)?,
            };
            let res = solve_vc(&g, &cover, a.k, a.r)?;
            rep.details = json!({
                "cover": cover.iter().map(|v| v + 1).collect::<Vec<_>>(),
                "partitions": res.stats.partitions.to_string(),
                "work": res.stats.work.to_string(),
                "rejected": res.stats.rejected.to_string(),
                "fallback_components": res.stats.fallback_components,
            });
            res.centers
        }
        SolveAlgo::Cw => unreachable!("handled above"),
    };
    decide(rep, &g, centers, a.r)
}

fn count(a: &CountArgs, rep: &mut RunReport) -> CliResult<()> {
    rep.algorithm = "count-cw".into();
    let e = load_cwe(&a.cwe)?;
    let g = match &a.graph {
        Some(p) => load_graph(p)?,
        None => eval_cw_expression(&e)?,
    };
    rep.instance = InstanceStats { cw: Some(e.cw), ..graph_stats(&g) };
    let res = solve_cw_count(&g, &e, a.k, a.r)?;
    rep.result.decision = Some(res.decision);
    rep.result.counts = Some(res.counts.iter().map(ToString::to_string).collect());
    rep.result.radius = Some(a.r);
    rep.exit_code = if res.decision { 0 } else { 1 };
    Ok(())
}

/// `⌊(1 + ε) r⌋`.
fn stretched(r: u64, eps: &BigRational) -> u64 {
    let x = (BigRational::from_integer(BigInt::from(1)) + eps) * BigRational::from_integer(BigInt::from(r));
    x.floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

fn approx(a: &ApproxArgs, rep: &mut RunReport) -> CliResult<()> {
    let eps = formats::parse_rational(&a.eps)?;
    rep.result.radius = Some(a.r);
    let (g, outcome) = match a.algo {
        ApproxAlgo::Tw => {
            rep.algorithm = "approx-tw".into();
            let g = load_graph(require(&a.graph, "--graph", "approx --algo tw")?)?;
            let td = decomposition(&g, &a.td)?;
            let res = approx_tw(&g, &td, a.k, a.r, &eps)?;
            rep.instance = InstanceStats { width: Some(res.width), height: Some(res.height), ..graph_stats(&g) };
            rep.details = json!({ "eps_prime": res.eps_prime.to_string(), "runs": res.runs.len() });
            (g, res.outcome)
        }
        ApproxAlgo::Cw => {
            rep.algorithm = "approx-cw".into();
            let e = load_cwe(require(&a.cwe, "--cwe", "approx --algo cw")?)?;
            let g = eval_cw_expression(&e)?;
            let res = approx_cw(&e, a.k, a.r, &eps, &CwApproxConfig::default())?;
            rep.instance = InstanceStats {
                cw: Some(e.cw),
                width: Some(res.used_width),
                height: Some(res.inner.height),
                ..graph_stats(&g)
            };
            rep.details = json!({
                "eps_prime": res.inner.eps_prime.to_string(),
                "added_vertices": res.added_vertices,
                "transform_width": res.transform_width,
                "runs": res.inner.runs.len(),
            });
            (g, res.inner.outcome)
        }
    };
    match outcome {
        ApproxOutcome::Center(c) => decide(rep, &g, Some(c.centers), stretched(a.r, &eps)),
        ApproxOutcome::NoCenter(cert) => {
            rep.details["certificate"] = serde_json::to_value(&cert).expect("certificates serialize");
            decide(rep, &g, None, a.r)
        }
    }
}

fn verify(a: &VerifyArgs, rep: &mut RunReport) -> CliResult<()> {
    rep.algorithm = "verify".into();
    let g = load_graph(&a.graph)?;
    rep.instance = graph_stats(&g);
    let c = CenterSet::new(formats::parse_vertex_list(&a.centers, g.n())?);
    let res = verify_center(&g, &c, a.r)?;
    rep.result.decision = Some(res.covered);
    rep.result.centers = Some(formats::one_indexed(&c));
    rep.result.radius = Some(a.r);
    rep.certified_radius = res.max_distance;
    rep.details = json!({
        "uncovered": res.uncovered.iter().map(|&(v, d)| json!({ "vertex": v + 1, "distance": d })).collect::<Vec<_>>(),
    });
    rep.exit_code = if res.covered { 0 } else { 1 };
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn ids(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn emit(rep: &mut RunReport, out: &Path, text: &str, sidecar: serde_json::Value) -> CliResult<()> {
    write(out, text)?;
    let side = sidecar_path(out);
    write(&side, &(serde_json::to_string_pretty(&sidecar).expect("json values serialize") + "\n"))?;
    rep.details = json!({ "out": out.display().to_string(), "sidecar": side.display().to_string(), "info": sidecar });
    rep.exit_code = 0;
    Ok(())
}

fn generate(kind: &GenKind, rep: &mut RunReport) -> CliResult<()> {
    match kind {
        GenKind::SethCw { cnf, r, p, columns, out } => {
            rep.algorithm = "gen-seth-cw".into();
            let f = load_cnf(cnf)?;
            let inst = gen_seth_cw_instance(&f, *r, *p, *columns)?;
            rep.instance = graph_stats(&inst.graph);
            let witness = match sat_brute(&f, DEFAULT_LIMIT)? {
                Some(assign) => {
                    let w = seth_witness_from_assignment(&inst, &f, &assign)?;
                    certify(&inst.graph, &w, inst.r)?;
                    Some(formats::one_indexed(&w))
                }
                None => None,
            };
            let side = json!({
                "kind": "seth-cw", "k": inst.k, "r": inst.r, "p": inst.p, "t": inst.t, "gamma": inst.gamma,
                "columns": inst.columns, "faithful": inst.faithful, "satisfiable": witness.is_some(), "witness": witness,
            });
            emit(rep, out, &formats::write_graph(&inst.graph), side)
        }
        GenKind::MisVc { graph, parts, out } | GenKind::MisFvs { graph, parts, out, .. } => {
            let mode = match kind {
                GenKind::MisVc { .. } => MisMode::Weighted,
                GenKind::MisFvs { literal: true, .. } => MisMode::Literal,
                _ => MisMode::Subdivided,
            };
            rep.algorithm = format!("gen-mis-{mode:?}").to_lowercase();
            let g = load_graph(graph)?;
            let parts = formats::parse_parts(parts, g.n())?;
            let inst = gen_mis_vc_instance(&g, &parts, mode)?;
            rep.instance = graph_stats(&inst.graph);
            let side = json!({
                "kind": "mis", "mode": format!("{mode:?}"), "k": inst.k, "r": inst.r,
                "p": inst.p.iter().map(|x| ids(x)).collect::<Vec<_>>(),
                "a": ids(&inst.a), "b": ids(&inst.b),
                "designated": ids(&inst.designated),
            });
            emit(rep, out, &formats::write_graph(&inst.graph), side)
        }
        GenKind::SatTd { cnf, literal, out } => {
            rep.algorithm = "gen-sat-td".into();
            let f = load_cnf(cnf)?;
            let mode = if *literal { SatTdMode::Literal } else { SatTdMode::Repaired };
            let inst = gen_sat_td_instance(&f, mode)?;
            rep.instance = graph_stats(&inst.graph);
            let side = json!({
                "kind": "sat-td", "mode": format!("{mode:?}"), "k": inst.k, "r": inst.r, "l": inst.l,
                "p": inst.p.iter().map(|x| ids(x)).collect::<Vec<_>>(),
                "designated": ids(&inst.designated), "trivially_no": inst.trivially_no,
            });
            emit(rep, out, &formats::write_graph(&inst.graph), side)
        }
        GenKind::Random { n, m, max_weight, seed, irrelevant_percent, with_td, out } => {
            rep.algorithm = "gen-random".into();
            let mut g = gen_random_instance(*n, *m, *max_weight, *seed)?;
            if *irrelevant_percent > 0 {
                mark_random_irrelevant(&mut g, f64::from((*irrelevant_percent).min(100)) / 100.0, *seed);
            }
            rep.instance = graph_stats(&g);
            let mut side = json!({ "kind": "random", "n": n, "m": m, "max_weight": max_weight, "seed": seed });
            if *with_td {
                let td = heuristic_decomposition(&g);
                let td_path = out.with_extension("td");
                write(&td_path, &formats::write_td(&td, g.n()))?;
                side["td"] = json!(td_path.display().to_string());
                side["width"] = json!(td.width());
            }
            emit(rep, out, &formats::write_graph(&g), side)
        }
        GenKind::RandomCwe { n, cw, max_weight, seed, out } => {
            rep.algorithm = "gen-random-cwe".into();
            let e = gen_random_cw_expression(*n, *cw, *max_weight, *seed)?;
            rep.instance = InstanceStats { cw: Some(e.cw), ..graph_stats(&eval_cw_expression(&e)?) };
            let side = json!({ "kind": "random-cwe", "n": n, "cw": cw, "max_weight": max_weight, "seed": seed });
            emit(rep, out, &formats::write_cwe(&e), side)
        }
        GenKind::RandomCnf { vars, clauses, width, seed, out } => {
            rep.algorithm = "gen-random-cnf".into();
            let f = gen_random_cnf(*vars, *clauses, *width, *seed)?;
            let side = json!({ "kind": "random-cnf", "vars": vars, "clauses": clauses, "width": width, "seed": seed });
            emit(rep, out, &formats::write_cnf(&f), side)
        }
    }
}

fn oracle(kind: &OracleKind, rep: &mut RunReport) -> CliResult<()> {
    match kind {
        OracleKind::Decide { graph, k, r, limit } => {
            rep.algorithm = "oracle-decide".into();
            let g = load_graph(graph)?;
            rep.instance = graph_stats(&g);
            rep.result.radius = Some(*r);
            let c = brute_force_decide(&g, *k, *r, *limit)?;
            decide(rep, &g, c, *r)
        }
        OracleKind::MinRadius { graph, k, limit } => {
            rep.algorithm = "oracle-min-radius".into();
            let g = load_graph(graph)?;
            rep.instance = graph_stats(&g);
            let best = brute_force_min_radius(&g, *k, *limit)?;
            rep.result.radius = best;
            rep.result.decision = Some(best.is_some());
            if let Some(r) = best {
                let c = brute_force_decide(&g, *k, r, *limit)?;
                decide(rep, &g, c, r)?;
            } else {
                rep.exit_code = 1;
            }
            Ok(())
        }
        OracleKind::Count { cwe, k, r, limit } => {
            rep.algorithm = "oracle-count".into();
            let e = load_cwe(cwe)?;
            rep.instance = InstanceStats { cw: Some(e.cw), ..graph_stats(&eval_cw_expression(&e)?) };
            let counts = enumerate_valid_cw_labelings_all(&e, *r, *limit)?;
            let yes = counts.iter().take(k + 1).any(|c| c.bits() > 0);
            rep.result.counts = Some(counts.iter().map(ToString::to_string).collect());
            rep.result.decision = Some(yes);
            rep.result.radius = Some(*r);
            rep.exit_code = if yes { 0 } else { 1 };
            Ok(())
        }
        OracleKind::Sat { cnf, limit } => {
            rep.algorithm = "oracle-sat".into();
            let f = load_cnf(cnf)?;
            let res = sat_brute(&f, *limit)?;
            rep.result.decision = Some(res.is_some());
            if let Some(a) = &res {
                let lits: Vec<i64> =
                    a.iter().enumerate().map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) }).collect();
                rep.details = json!({ "assignment": lits });
            }
            rep.exit_code = if res.is_some() { 0 } else { 1 };
            Ok(())
        }
        OracleKind::Mis { graph, parts, limit } => {
            rep.algorithm = "oracle-mis".into();
            let g = load_graph(graph)?;
            rep.instance = graph_stats(&g);
            let parts = formats::parse_parts(parts, g.n())?;
            let res = mis_brute(&g, &parts, *limit)?;
            rep.result.decision = Some(res.is_some());
            if let Some(sel) = &res {
                rep.details = json!({ "selection": ids(sel) });
            }
            rep.exit_code = if res.is_some() { 0 } else { 1 };
            Ok(())
        }
    }
}

fn millis(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn bench(a: &BenchArgs, rep: &mut RunReport) -> CliResult<()> {
    rep.algorithm = "bench".into();
    let eps = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut rows = Vec::new();
    for &n in &a.sizes {
        for seed in 0..a.seeds {
            let g = gen_random_instance(n, n + n / 2, 1, seed)?;
            let td = heuristic_decomposition(&g);
            let ntd = make_nice(&td);
            let t = Instant::now();
            let tw = solve_tw_exact(&g, &ntd, a.k, a.r)?;
            let tw_ms = millis(t);
            let t = Instant::now();
            let bf = brute_force_decide(&g, a.k, a.r, DEFAULT_LIMIT)?;
            let bf_ms = millis(t);
            let t = Instant::now();
            let ap = approx_tw(&g, &td, a.k, a.r, &eps)?;
            let ap_ms = millis(t);
            if tw.is_some() != bf.is_some() {
                return Err(KrcError::Internal(format!("tw and bf disagree on n = {n}, seed = {seed}")).into());
            }
            if let Some(c) = ap.outcome.center() {
                certify(&g, &c.centers, stretched(a.r, &eps))?;
            }
            rows.push(json!({
                "n": n, "seed": seed, "width": td.width(), "answer": tw.is_some(),
                "tw_ms": tw_ms, "bf_ms": bf_ms, "approx_ms": ap_ms,
            }));
        }
    }
    rep.details = json!({ "k": a.k, "r": a.r, "eps": "1/2", "runs": rows });
    rep.exit_code = 0;
    Ok(())
}

/// Runs a parsed command line and returns its report.
pub fn dispatch(cli: &Cli, command: Vec<String>) -> RunReport {
    let start = Instant::now();
    let mut rep = RunReport { command, exit_code: 2, ..RunReport::default() };
    let res = if cli.threads == 0 {
        Err(CliError::Usage("--threads must be at least 1".into()))
    } else {
        match &cli.command {
            Command::Solve(a) => solve(a, &mut rep),
            Command::Count(a) => count(a, &mut rep),
            Command::Approx(a) => approx(a, &mut rep),
            Command::Verify(a) => verify(a, &mut rep),
            Command::Gen(k) => generate(k, &mut rep),
            Command::Oracle(k) => oracle(k, &mut rep),
            Command::Bench(a) => bench(a, &mut rep),
        }
    };
    if let Err(e) = res {
        rep.error = Some(e.to_string());
        rep.exit_code = 2;
    }
    if cli.timing {
        rep.wall_time_ms = Some(millis(start));
    }
    rep
}

/// What a run prints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    /// Text for standard output.
    pub stdout: String,
    /// Text for standard error.
    pub stderr: String,
    /// Process exit code.
    pub code: i32,
}

/// Parses `args` (program name excluded) and runs the command. Reports go
/// to standard output; usage errors, and errors in human-readable mode, go
/// to standard error.
pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("krc".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            return Output { stdout: String::new(), stderr: e.render().to_string(), code: 2 };
        }
        Err(e) => return Output { stdout: e.render().to_string(), stderr: String::new(), code: 0 },
    };
    let rep = dispatch(&cli, args);
    if cli.json {
        Output { stdout: rep.to_json(), stderr: String::new(), code: rep.exit_code }
    } else if rep.exit_code == 2 {
        Output { stdout: String::new(), stderr: rep.to_text(), code: 2 }
    } else {
        Output { stdout: rep.to_text(), stderr: String::new(), code: rep.exit_code }
    }
}
