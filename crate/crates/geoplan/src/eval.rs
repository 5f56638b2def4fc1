//! Exact latency evaluation of storage schemes.
//!
//! Decode latency of file j at node i is the smallest RTT threshold L
//! such that the generator columns of all nodes within L of i span the
//! unit vector e_j. The sweep only needs to test the distinct values of
//! the sorted RTT row, since the minimum is attained at one of them.

use serde_json::{json, Value};

use crate::field::{FieldMatrix, FieldSpec};
use crate::network::Network;
use crate::nngraph::NearestNeighborGraph;
use crate::rational::{rat_display, rat_to_f64, rat_to_json, Rat};
use crate::scheme::{solve_decode, SchemeKind};
use crate::Error;

/// One decoding plan cell: which helper nodes supply file `j` at node
/// `i`, with what field coefficients, and the achieved latency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanEntry {
    pub helpers: Vec<usize>,
    pub coeffs: Vec<u64>,
    pub latency: Rat,
}

/// Full evaluation of a scheme on a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatencyReport {
    /// l[i][j]: latency of decoding file j at node i.
    pub l: Vec<Vec<Rat>>,
    pub plans: Vec<Vec<PlanEntry>>,
    pub worst_case: Vec<Rat>,
    pub average: Rat,
    /// λ_{k−1}⁽ⁱ⁾ per node.
    pub per_node_bound: Vec<Rat>,
    pub average_bound: Rat,
    pub per_node_worstcase_optimal: Vec<bool>,
    pub average_optimal: bool,
    /// Set when a nearest-neighbor graph was supplied for the check.
    pub admissible_on_graph: Option<bool>,
}

/// Minimum wait time at node `i` to decode file `j`, with the plan that
/// achieves it. The generator must have full rank `k`.
pub fn decode_latency(
    net: &Network,
    generator: &FieldMatrix,
    i: usize,
    j: usize,
) -> Result<(Rat, PlanEntry), Error> {
    let n = net.len();
    assert_eq!(generator.cols, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&t| (net.rtt(t, i), t));
    let mut prefix_end = 0;
    while prefix_end < n {
        // extend to the full tie group at this threshold
        let threshold = net.rtt(order[prefix_end], i);
        let mut end = prefix_end + 1;
        while end < n && net.rtt(order[end], i) == threshold {
            end += 1;
        }
        let selected = &order[..end];
        let cols = generator.select_columns(selected);
        if let Some(v) = solve_decode(&cols, j) {
            let (helpers, coeffs): (Vec<usize>, Vec<u64>) = selected
                .iter()
                .zip(&v)
                .filter(|(_, &c)| c != 0)
                .map(|(&t, &c)| (t, c))
                .unzip();
            let latency = helpers
                .iter()
                .map(|&t| net.rtt(t, i))
                .max()
                .unwrap_or_else(|| Rat::from_integer(0));
            return Ok((
                latency,
                PlanEntry {
                    helpers,
                    coeffs,
                    latency,
                },
            ));
        }
        prefix_end = end;
    }
    // rank(G) = k guarantees the full node set decodes everything
    Err(Error::Undecodable { node: i, file: j })
}

pub fn evaluate(net: &Network, scheme: &SchemeKind) -> Result<LatencyReport, Error> {
    evaluate_on(net, scheme, None)
}

/// Evaluates the scheme, additionally checking admissibility when a
/// nearest-neighbor graph is supplied.
pub fn evaluate_on(
    net: &Network,
    scheme: &SchemeKind,
    graph: Option<&NearestNeighborGraph>,
) -> Result<LatencyReport, Error> {
    let n = net.len();
    let k = scheme.file_count();
    if scheme.node_count() != n {
        return Err(Error::DimensionMismatch(format!(
            "scheme spans {} nodes, network has {n}",
            scheme.node_count()
        )));
    }
    let generator = scheme.generator_matrix(FieldSpec::GF2);
    if generator.rank() != k {
        return Err(Error::RankDeficient);
    }

    let mut l = vec![Vec::with_capacity(k); n];
    let mut plans = vec![Vec::with_capacity(k); n];
    for i in 0..n {
        for j in 0..k {
            let (latency, plan) = decode_latency(net, &generator, i, j)?;
            l[i].push(latency);
            plans[i].push(plan);
        }
    }

    let profile = net.lambda_profile();
    let per_node_bound: Vec<Rat> = (0..n)
        .map(|i| profile.worstcase_lower_bound(k, i))
        .collect::<Result<_, _>>()?;
    let average_bound = profile.avg_latency_lower_bound(k)?;
    let worst_case: Vec<Rat> = l.iter().map(|row| *row.iter().max().unwrap()).collect();
    let average = l.iter().flatten().sum::<Rat>() / Rat::from_integer((k * n) as i128);
    let per_node_worstcase_optimal: Vec<bool> = worst_case
        .iter()
        .zip(&per_node_bound)
        .map(|(w, b)| w == b)
        .collect();
    let average_optimal = average == average_bound;
    let admissible_on_graph =
        graph.map(|g| is_admissible_on(scheme, g).0);

    Ok(LatencyReport {
        l,
        plans,
        worst_case,
        average,
        per_node_bound,
        average_bound,
        per_node_worstcase_optimal,
        average_optimal,
        admissible_on_graph,
    })
}

/// Checks admissibility on a nearest-neighbor graph: every node must be
/// able to decode every file from itself plus its in-neighbors alone.
/// Returns the verdict and the list of failing (node, file) pairs.
pub fn is_admissible_on(
    scheme: &SchemeKind,
    g: &NearestNeighborGraph,
) -> (bool, Vec<(usize, usize)>) {
    let k = scheme.file_count();
    let generator = scheme.generator_matrix(FieldSpec::GF2);
    let mut failures = Vec::new();
    for i in 0..g.node_count() {
        let mut allowed: Vec<usize> = vec![i];
        allowed.extend_from_slice(g.in_neighbors(i));
        let cols = generator.select_columns(&allowed);
        for j in 0..k {
            if solve_decode(&cols, j).is_none() {
                failures.push((i, j));
            }
        }
    }
    (failures.is_empty(), failures)
}

/// Renders one plan cell as an equation, e.g. `W2 = X_S + X_M + X_O`
/// or `W1 = X_A + 2*X_B` over larger fields.
pub fn decoding_plan_text(net: &Network, j: usize, plan: &PlanEntry) -> String {
    let terms: Vec<String> = plan
        .helpers
        .iter()
        .zip(&plan.coeffs)
        .map(|(&t, &c)| {
            let name = &net.names()[t];
            if c == 1 {
                format!("X_{name}")
            } else {
                format!("{c}*X_{name}")
            }
        })
        .collect();
    format!("W{} = {}", j + 1, terms.join(" + "))
}

impl LatencyReport {
    pub fn to_json(&self, net: &Network) -> Value {
        let k = self.l[0].len();
        json!({
            "format": 1,
            "latency_ms": self.l.iter()
                .map(|row| row.iter().map(rat_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "worst_case_ms": self.worst_case.iter().map(rat_to_json).collect::<Vec<_>>(),
            "average_ms": rat_to_json(&self.average),
            "average_ms_approx": rat_to_f64(&self.average),
            "per_node_bound_ms": self.per_node_bound.iter().map(rat_to_json).collect::<Vec<_>>(),
            "average_bound_ms": rat_to_json(&self.average_bound),
            "average_bound_ms_approx": rat_to_f64(&self.average_bound),
            "per_node_worstcase_optimal": self.per_node_worstcase_optimal,
            "average_optimal": self.average_optimal,
            "admissible_on_graph": self.admissible_on_graph,
            "plans": self.plans.iter().enumerate().map(|(i, row)| {
                json!({
                    "node": net.names()[i],
                    "decodes": (0..k).map(|j| decoding_plan_text(net, j, &row[j])).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
        })
    }

    /// Plain-text table: one row per node with per-file latencies.
    pub fn to_text(&self, net: &Network) -> String {
        let k = self.l[0].len();
        let mut out = String::new();
        let header: Vec<String> = (1..=k).map(|j| format!("W{j}")).collect();
        out.push_str(&format!("{:<12} {}  worst-case\n", "node", header.join("  ")));
        for (i, row) in self.l.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(rat_display).collect();
            out.push_str(&format!(
                "{:<12} {}  {}{}\n",
                net.names()[i],
                cells.join("  "),
                rat_display(&self.worst_case[i]),
                if self.per_node_worstcase_optimal[i] {
                    " (optimal)"
                } else {
                    ""
                }
            ));
        }
        out.push_str(&format!(
            "average: {} ms (bound {} ms){}\n",
            rat_display(&self.average),
            rat_display(&self.average_bound),
            if self.average_optimal { " (optimal)" } else { "" }
        ));
        out
    }
}
