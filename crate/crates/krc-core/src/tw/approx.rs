//! The approximation scheme on tree decompositions and the clique-width
//! pipeline built on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::engine::{run_engine, EngineConfig, EngineOutcome, JoinMode};
use super::labels::{delta_for_height, delta_labels, estimate_delta_label_count, DeltaSpace, ExactLabels};
use crate::error::{KrcError, Result};
use crate::graph::{coverage_radius, CenterSet, Graph};
use crate::witness::cw::{eval_cw_expression, CwExpression};
use crate::witness::metric::{metric_closure_bags, rescale_positive, RescaleInfo};
use crate::witness::nice::{make_nice, NiceTreeDecomposition};
use crate::witness::td::{heuristic_decomposition, rebalance, require_valid, TreeDecomposition};
use crate::witness::transform::{cw_to_tw_transform, TransformConfig};

/// Which runs the scheme performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ApproxMode {
    /// Coarse steps `δ = 1, 1/2, 1/4, …` down to the proven step, each run
    /// only while its alphabet is smaller than the integer alphabet; the
    /// integer-label program settles the query when it is cheaper.
    #[default]
    Schedule,
    /// A single run at the proven step `δ = ε′/(2H)`.
    ProvenOnly,
}

/// Options of [`approx_tw_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxConfig {
    /// Rebalance the decomposition before making it nice.
    pub rebalance: bool,
    /// Join strategy of the dynamic program.
    pub join: JoinMode,
    /// Run selection.
    pub mode: ApproxMode,
    /// Largest table allowed at a single node.
    pub max_entries: usize,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig { rebalance: false, join: JoinMode::Naive, mode: ApproxMode::Schedule, max_entries: 1 << 26 }
    }
}

/// How a negative answer was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateMethod {
    /// No valid labeling at the proven step.
    ProvenDelta {
        /// The step `ε′/(2H)`.
        delta: BigRational,
        /// Height `H` of the nice decomposition.
        height: usize,
        /// Size of the alphabet including 0.
        labels: usize,
    },
    /// No valid integer labeling.
    Exact,
}

/// Evidence that no `(k, r)`-center exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoCenterCertificate {
    /// Number of centers.
    pub k: usize,
    /// Queried radius.
    pub r: u64,
    /// Radius queried on the processed graph.
    pub processed_radius: u64,
    /// Settling run.
    pub method: CertificateMethod,
}

/// A center set with a verified radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxCenter {
    /// The centers.
    pub centers: CenterSet,
    /// Verified radius on the input graph.
    pub radius: u64,
}

/// Outcome of the scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApproxOutcome {
    /// A center set of radius at most `(1+ε)r`.
    Center(ApproxCenter),
    /// No `(k, r)`-center exists.
    NoCenter(NoCenterCertificate),
}

impl ApproxOutcome {
    /// The center, if one was found.
    pub fn center(&self) -> Option<&ApproxCenter> {
        match self {
            ApproxOutcome::Center(c) => Some(c),
            ApproxOutcome::NoCenter(_) => None,
        }
    }
}

/// One dynamic-programming run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInfo {
    /// Step of the run, `None` for integer labels.
    pub delta: Option<BigRational>,
    /// Alphabet size including 0 and top.
    pub labels: usize,
    /// Whether a labeling within the budget was found.
    pub found: bool,
    /// Largest table.
    pub max_table: usize,
}

/// Full report of [`approx_tw_with`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxReport {
    /// The answer.
    pub outcome: ApproxOutcome,
    /// Internal error budget `ε′ = ε/4`.
    pub eps_prime: BigRational,
    /// Width of the nice decomposition used.
    pub width: usize,
    /// Height `H` of the nice decomposition used.
    pub height: usize,
    /// Arcs added by the metric closure.
    pub closure_added: usize,
    /// Rescaling applied because of zero weights.
    pub rescale: Option<RescaleInfo>,
    /// Runs in order.
    pub runs: Vec<RunInfo>,
}

fn rational(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::MAX)
}

struct Prepared {
    graph: Graph,
    ntd: NiceTreeDecomposition,
    radius: u64,
    closure_added: usize,
}

fn prepare(g: &Graph, td: &TreeDecomposition, radius: u64) -> Prepared {
    let closure = metric_closure_bags(g, td);
    Prepared { graph: closure.graph, ntd: make_nice(td), radius, closure_added: closure.added }
}

/// Runs the scheme with default options.
pub fn approx_tw(g: &Graph, td: &TreeDecomposition, k: usize, r: u64, eps: &BigRational) -> Result<ApproxReport> {
    approx_tw_with(g, td, k, r, eps, &ApproxConfig::default())
}

/// Either returns a center set whose radius, verified on `g`, is at most
/// `(1+ε)r`, or certifies that `g` has no `(k, r)`-center.
///
/// With `ε′ = ε/4`: zero weights are removed by rescaling with budget `ε′`,
/// the decomposition is optionally rebalanced and made nice, bag pairs are
/// closed metrically, and the labeling program runs with satisfaction test
/// `dl(u) ≥ dl(v) + w/(1+ε′)` over powers of `1+δ`.
pub fn approx_tw_with(
    g: &Graph,
    td: &TreeDecomposition,
    k: usize,
    r: u64,
    eps: &BigRational,
    config: &ApproxConfig,
) -> Result<ApproxReport> {
    require_valid(g, td)?;
    if !eps.is_positive() || *eps > BigRational::one() {
        return Err(KrcError::InvalidParameter("epsilon must lie in (0, 1]".into()));
    }
    let eps_p = eps / rational(4);
    let td = if config.rebalance { rebalance(td) } else { td.clone() };
    let n = g.n() as u64;
    let (delta_graph, exact_graph, rescale) = if g.has_zero_weight() {
        let rs = rescale_positive(g, r, &eps_p)?;
        let delta_r = rs
            .r_prime
            .checked_add(n.saturating_sub(1))
            .ok_or_else(|| KrcError::InvalidParameter("rescaled radius overflows".into()))?;
        let info = RescaleInfo { b: rs.b, r_prime: delta_r };
        let exact_b = n.max(1);
        let exact = g.map_weights(false, |w| w * exact_b + 1)?;
        let exact_r = r * exact_b + n.saturating_sub(1);
        (prepare(&rs.graph, &td, delta_r), prepare(&exact, &td, exact_r), Some(info))
    } else {
        let p = prepare(g, &td, r);
        let q = Prepared { graph: p.graph.clone(), ntd: p.ntd.clone(), radius: r, closure_added: p.closure_added };
        (p, q, None)
    };
    let height = delta_graph.ntd.height().max(1);
    let width = delta_graph.ntd.width();
    let mut report = ApproxReport {
        outcome: ApproxOutcome::NoCenter(NoCenterCertificate {
            k,
            r,
            processed_radius: exact_graph.radius,
            method: CertificateMethod::Exact,
        }),
        eps_prime: eps_p.clone(),
        width,
        height,
        closure_added: delta_graph.closure_added,
        rescale,
        runs: Vec::new(),
    };
    let bound = (BigRational::one() + eps) * rational(r);
    let cap = u32::try_from(k.min(g.n())).unwrap_or(u32::MAX - 1);
    let engine_config = EngineConfig { cap, join: config.join, max_entries: config.max_entries };
    let proven = delta_for_height(&eps_p, height)?;
    let exact_len = exact_graph.radius as f64 + 2.0;
    let accept = |out: &EngineOutcome, report: &mut ApproxReport| -> Result<bool> {
        let Some(zeros) = out.zeros() else {
            return Ok(false);
        };
        let centers = CenterSet::new(zeros);
        let radius = coverage_radius(g, &centers)?.unwrap_or(u64::MAX);
        if rational(radius) > bound {
            return Err(KrcError::Internal(format!("labeling yields radius {radius}, above the guaranteed {bound}")));
        }
        let centers = centers.with_radius(radius);
        report.outcome = ApproxOutcome::Center(ApproxCenter { centers, radius });
        Ok(true)
    };
    let mut deltas = Vec::new();
    if delta_graph.radius > 0 {
        if config.mode == ApproxMode::Schedule {
            let mut d = BigRational::one();
            while d > proven {
                deltas.push(d.clone());
                d /= rational(2);
            }
        }
        deltas.push(proven.clone());
    }
    for delta in deltas {
        let is_proven = delta == proven;
        let est = estimate_delta_label_count(delta_graph.radius, to_f64(&eps_p), to_f64(&delta), true);
        if config.mode == ApproxMode::Schedule && est >= exact_len {
            break;
        }
        let labels = delta_labels(delta_graph.radius, &eps_p, &delta, true)?;
        let nlabels = labels.len();
        let weights: Vec<u64> = delta_graph.graph.arcs().iter().map(|a| a.weight).collect();
        let space = DeltaSpace::new(labels, weights);
        let out = run_engine(&delta_graph.graph, &delta_graph.ntd, &space, &engine_config)?;
        report.runs.push(RunInfo {
            delta: Some(delta.clone()),
            labels: out.stats.labels,
            found: out.cost.is_some(),
            max_table: out.stats.max_table,
        });
        if accept(&out, &mut report)? {
            return Ok(report);
        }
        if is_proven {
            report.outcome = ApproxOutcome::NoCenter(NoCenterCertificate {
                k,
                r,
                processed_radius: delta_graph.radius,
                method: CertificateMethod::ProvenDelta { delta, height, labels: nlabels },
            });
            return Ok(report);
        }
    }
    let out = run_engine(&exact_graph.graph, &exact_graph.ntd, &ExactLabels::new(exact_graph.radius), &engine_config)?;
    report.runs.push(RunInfo {
        delta: None,
        labels: out.stats.labels,
        found: out.cost.is_some(),
        max_table: out.stats.max_table,
    });
    accept(&out, &mut report)?;
    Ok(report)
}

/// Options of [`approx_cw`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct CwApproxConfig {
    /// Big-class threshold of the transform.
    pub transform: TransformConfig,
    /// Options of the treewidth scheme.
    pub approx: ApproxConfig,
}

/// Report of [`approx_cw`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwApproxReport {
    /// Report of the treewidth scheme on the transformed graph.
    pub inner: ApproxReport,
    /// Representative vertices added by the transform.
    pub added_vertices: usize,
    /// Width of the small-class decomposition.
    pub transform_width: usize,
    /// Width of the decomposition used.
    pub used_width: usize,
}

impl CwApproxReport {
    /// The answer.
    pub fn outcome(&self) -> &ApproxOutcome {
        &self.inner.outcome
    }
}

/// The clique-width approximation pipeline: transform the expression so
/// that big label classes are represented by irrelevant vertices, take the
/// narrower of the small-class decomposition and a min-degree heuristic
/// decomposition of the result, and run [`approx_tw_with`].
pub fn approx_cw(
    e: &CwExpression,
    k: usize,
    r: u64,
    eps: &BigRational,
    config: &CwApproxConfig,
) -> Result<CwApproxReport> {
    let g0 = eval_cw_expression(e)?;
    let tr = cw_to_tw_transform(e, &[], &config.transform)?;
    let heur = heuristic_decomposition(&tr.graph);
    let transform_width = tr.decomposition.width();
    let td = if heur.width() < transform_width { heur } else { tr.decomposition.clone() };
    let used_width = td.width();
    let inner = approx_tw_with(&tr.graph, &td, k, r, eps, &config.approx)?;
    if let ApproxOutcome::Center(c) = &inner.outcome {
        if c.centers.vertices.iter().any(|&v| v >= e.n) {
            return Err(KrcError::Internal("representative vertex chosen as a center".into()));
        }
        let radius = coverage_radius(&g0, &c.centers)?.unwrap_or(u64::MAX);
        if rational(radius) > (BigRational::one() + eps) * rational(r) {
            return Err(KrcError::Internal("pipeline center exceeds the guaranteed radius".into()));
        }
    }
    let added_vertices = tr.added.iter().map(|a| usize::from(a.s.is_some()) + usize::from(a.t.is_some())).sum();
    Ok(CwApproxReport { inner, added_vertices, transform_width, used_width })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_decide, DEFAULT_LIMIT};
    use crate::witness::cw::path_expression;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn path(ws: &[u64]) -> Graph {
        let mut g = Graph::new_undirected(ws.len() + 1);
        for (i, &w) in ws.iter().enumerate() {
            g.add_edge(i, i + 1, w).unwrap();
        }
        g
    }

    #[test]
    fn p5_weights_ten() {
        let g = path(&[10, 10, 10, 10]);
        let td = heuristic_decomposition(&g);
        let rep = approx_tw(&g, &td, 1, 20, &q(1, 2)).unwrap();
        let c = rep.outcome.center().expect("center");
        assert!(c.radius <= 30);
        let rep = approx_tw(&g, &td, 1, 10, &q(1, 2)).unwrap();
        assert!(matches!(rep.outcome, ApproxOutcome::NoCenter(_)));
    }

    #[test]
    fn trivial_radius() {
        let g = path(&[3, 1, 2]);
        let td = heuristic_decomposition(&g);
        for eps in [q(1, 1), q(1, 10)] {
            assert!(approx_tw(&g, &td, 1, 6, &eps).unwrap().outcome.center().is_some());
        }
    }

    #[test]
    fn proven_step_is_complete_on_small_paths() {
        let cfg = ApproxConfig { mode: ApproxMode::ProvenOnly, ..Default::default() };
        for ws in [vec![1, 2, 1], vec![2, 2], vec![1, 1, 1]] {
            let g = path(&ws);
            let td = heuristic_decomposition(&g);
            for r in 1..=3 {
                let bf = brute_force_decide(&g, 1, r, DEFAULT_LIMIT).unwrap();
                let rep = approx_tw_with(&g, &td, 1, r, &q(1, 1), &cfg).unwrap();
                if bf.is_some() {
                    assert!(rep.outcome.center().is_some(), "{ws:?} r={r}");
                }
                assert!(matches!(
                    rep.runs.last().unwrap().delta, Some(ref d) if *d == delta_for_height(&q(1, 4), rep.height).unwrap()
                ));
            }
        }
    }

    #[test]
    fn rebalanced_run_agrees() {
        let g = path(&[1; 15]);
        let td = heuristic_decomposition(&g);
        let cfg = ApproxConfig { rebalance: true, ..Default::default() };
        let rep = approx_tw_with(&g, &td, 2, 4, &q(1, 2), &cfg).unwrap();
        assert!(rep.outcome.center().unwrap().radius <= 6);
        let rep = approx_tw_with(&g, &td, 2, 2, &q(1, 2), &cfg).unwrap();
        assert!(matches!(rep.outcome, ApproxOutcome::NoCenter(_)));
    }

    #[test]
    fn cw_pipeline_on_weighted_path() {
        let e = path_expression(&[10, 10, 10, 10]);
        let rep = approx_cw(&e, 1, 20, &q(1, 2), &CwApproxConfig::default()).unwrap();
        assert!(rep.outcome().center().unwrap().radius <= 30);
        let rep = approx_cw(&e, 1, 10, &q(1, 2), &CwApproxConfig::default()).unwrap();
        assert!(matches!(rep.outcome(), ApproxOutcome::NoCenter(_)));
    }
}
