//! End-to-end planning pipeline: bounds, nearest-neighbor graphs,
//! coloring, scheme construction, evaluation.

use serde_json::{json, Value};

use crate::coloring::{chromatic_number, k_colorable, Coloring};
use crate::constructors::{enumerate_binary_codes, scalar_mds_scheme, uncoded_from_coloring};
use crate::eval::{evaluate_on, LatencyReport};
use crate::field::{smallest_prime_above, FieldSpec};
use crate::network::Network;
use crate::nngraph::{build_nn_graphs, NearestNeighborGraph};
use crate::scheme::SchemeKind;
use crate::Error;

/// How the pipeline resolved the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    OptimalUncoded,
    BinaryCoded,
    /// χ(H) > k+1 on every variant: no construction from this family
    /// is known; an MDS scheme is emitted as the fallback.
    NoConstruction,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::OptimalUncoded => "optimal-uncoded",
            Verdict::BinaryCoded => "binary-coded(chi=k+1)",
            Verdict::NoConstruction => "no-construction(chi>k+1)",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlanOptions {
    pub variant_cap: usize,
    pub coloring_budget: u64,
    pub field: Option<FieldSpec>,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            variant_cap: crate::oracle::DEFAULT_VARIANT_CAP,
            coloring_budget: crate::coloring::DEFAULT_EXPANSION_BUDGET,
            field: None,
        }
    }
}

/// Everything a `plan` run produces.
#[derive(Debug, Clone)]
pub struct PlanDocument {
    pub k: usize,
    pub verdict: Verdict,
    pub graph: NearestNeighborGraph,
    pub variant_index: usize,
    pub variants_truncated: bool,
    pub coloring: Option<Coloring>,
    pub scheme: SchemeKind,
    pub report: LatencyReport,
}

/// Tries, in order: optimal uncoded placement (some variant's H is
/// k-colorable), binary XOR code (χ(H) = k+1 on some variant), MDS
/// fallback otherwise.
pub fn plan(net: &Network, k: usize, options: &PlanOptions) -> Result<PlanDocument, Error> {
    let n = net.len();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let set = build_nn_graphs(net, k, options.variant_cap)?;

    // Route 1: optimal uncoded from a k-coloring.
    for (idx, g) in set.graphs.iter().enumerate() {
        if let Some(c) = k_colorable(&g.extend(), k, options.coloring_budget)? {
            let scheme = SchemeKind::Uncoded(uncoded_from_coloring(g, &c)?);
            let report = evaluate_on(net, &scheme, Some(g))?;
            return Ok(PlanDocument {
                k,
                verdict: Verdict::OptimalUncoded,
                graph: g.clone(),
                variant_index: idx,
                variants_truncated: set.truncated,
                coloring: Some(c),
                scheme,
                report,
            });
        }
    }

    // Route 2: binary code from a (k+1)-coloring, best average first.
    if k >= 2 {
        let mut best: Option<PlanDocument> = None;
        for (idx, g) in set.graphs.iter().enumerate() {
            let (chi, c) = chromatic_number(&g.extend(), options.coloring_budget)?;
            if chi != k + 1 {
                continue;
            }
            let codes = enumerate_binary_codes(net, g, &c)?;
            let (scheme, _, avg) = codes.into_iter().next().expect("k+1 coloring yields codes");
            if best.as_ref().is_none_or(|doc| avg < doc.report.average) {
                let scheme = SchemeKind::Linear(scheme);
                let report = evaluate_on(net, &scheme, Some(g))?;
                best = Some(PlanDocument {
                    k,
                    verdict: Verdict::BinaryCoded,
                    graph: g.clone(),
                    variant_index: idx,
                    variants_truncated: set.truncated,
                    coloring: Some(c),
                    scheme,
                    report,
                });
            }
        }
        if let Some(doc) = best {
            return Ok(doc);
        }
    }

    // Route 3: MDS fallback; worst-case optimal, average not.
    let field = options
        .field
        .unwrap_or_else(|| FieldSpec::new(smallest_prime_above(n as u64)).expect("prime"));
    let g = set.graphs[0].clone();
    let scheme = SchemeKind::Linear(scalar_mds_scheme(net, k, field)?);
    let report = evaluate_on(net, &scheme, Some(&g))?;
    Ok(PlanDocument {
        k,
        verdict: Verdict::NoConstruction,
        graph: g,
        variant_index: 0,
        variants_truncated: set.truncated,
        coloring: None,
        scheme,
        report,
    })
}

impl PlanDocument {
    pub fn to_json(&self, net: &Network) -> Value {
        json!({
            "format": 1,
            "k": self.k,
            "verdict": self.verdict.as_str(),
            "variant_index": self.variant_index,
            "variants_truncated": self.variants_truncated,
            "graph": net.names().iter().enumerate().map(|(i, name)| {
                json!({
                    "node": name,
                    "in_neighbors": self.graph.in_neighbors(i).iter()
                        .map(|&j| net.names()[j].clone()).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
            "coloring": self.coloring.as_ref().map(|c| {
                net.names().iter().zip(&c.colors)
                    .map(|(name, &col)| (name.clone(), Value::from(col as u64)))
                    .collect::<serde_json::Map<String, Value>>()
            }),
            "scheme": self.scheme.to_json(net),
            "report": self.report.to_json(net),
        })
    }
}
