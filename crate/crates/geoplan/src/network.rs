//! Storage network model: node set, symmetric RTT matrix, sorted RTT
//! profiles, and the latency lower bounds they induce.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::rational::{rat_from_json, rat_to_json, Rat};
use crate::Error;

/// A validated storage network: `n` named nodes and a symmetric,
/// zero-diagonal, non-negative RTT matrix in milliseconds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    names: Vec<String>,
    rtt: Vec<Vec<Rat>>,
}

impl Network {
    /// Validates a raw node list and matrix.
    pub fn new(names: Vec<String>, rtt: Vec<Vec<Rat>>) -> Result<Self, Error> {
        let n = names.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty node list".into()));
        }
        if rtt.len() != n || rtt.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n} matrix for {n} nodes"
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if names[i] == names[j] {
                    return Err(Error::DimensionMismatch(format!(
                        "duplicate node name {:?}",
                        names[i]
                    )));
                }
            }
        }
        for i in 0..n {
            if !rtt[i][i].is_zero() {
                return Err(Error::NonzeroDiagonal(names[i].clone()));
            }
            for j in 0..n {
                if rtt[i][j] < Rat::zero() {
                    return Err(Error::NegativeRtt(names[i].clone(), names[j].clone()));
                }
                if rtt[i][j] != rtt[j][i] {
                    return Err(Error::AsymmetricRtt(names[i].clone(), names[j].clone()));
                }
            }
        }
        Ok(Network { names, rtt })
    }

    // A validated network is never empty, so no `is_empty` to pair.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rtt(&self, i: usize, j: usize) -> Rat {
        self.rtt[i][j]
    }

    pub fn rtt_row(&self, i: usize) -> &[Rat] {
        &self.rtt[i]
    }

    pub fn node_index(&self, name: &str) -> Result<usize, Error> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// True when the matrix already satisfies the triangle inequality.
    pub fn is_metric(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.rtt[a][c] + self.rtt[c][b] < self.rtt[a][b] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Replaces each entry with the all-pairs shortest-path distance,
    /// modeling multi-hop routes as the sum of link RTTs. Idempotent.
    pub fn reduce_multihop(&self) -> Network {
        let n = self.len();
        let mut d = self.rtt.clone();
        for via in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let through = d[a][via] + d[via][b];
                    if through < d[a][b] {
                        d[a][b] = through;
                    }
                }
            }
        }
        Network {
            names: self.names.clone(),
            rtt: d,
        }
    }

    /// Per-node ascending RTT profiles λ⁽ⁱ⁾.
    pub fn lambda_profile(&self) -> LambdaProfile {
        let rows = self
            .rtt
            .iter()
            .map(|row| {
                let mut sorted = row.clone();
                sorted.sort();
                sorted
            })
            .collect();
        LambdaProfile { rows }
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("expected JSON object".into()))?;
        let names: Vec<String> = obj
            .get("nodes")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"nodes\" array".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse("node names must be strings".into()))
            })
            .collect::<Result<_, _>>()?;
        let rtt: Vec<Vec<Rat>> = obj
            .get("rtt_ms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"rtt_ms\" matrix".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("rtt_ms rows must be arrays".into()))?
                    .iter()
                    .map(rat_from_json)
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Network::new(names, rtt)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": 1,
            "nodes": self.names,
            "rtt_ms": self.rtt.iter()
                .map(|row| row.iter().map(rat_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Sorted per-node RTT lists; row `i` is the ascending sort of all RTTs
/// to node `i`, so `row[i][0] = 0` always.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaProfile {
    rows: Vec<Vec<Rat>>,
}

impl LambdaProfile {
    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.rows[i]
    }

    fn check_k(&self, k: usize) -> Result<(), Error> {
        if k < 1 || k > self.node_count() {
            Err(Error::KOutOfRange {
                k,
                n: self.node_count(),
            })
        } else {
            Ok(())
        }
    }

    /// Per-node worst-case latency lower bound λ_{k−1}⁽ⁱ⁾.
    pub fn worstcase_lower_bound(&self, k: usize, i: usize) -> Result<Rat, Error> {
        self.check_k(k)?;
        Ok(self.rows[i][k - 1])
    }

    /// System average latency lower bound (1/kn)·Σᵢ Σ_{m<k} λ_m⁽ⁱ⁾.
    pub fn avg_latency_lower_bound(&self, k: usize) -> Result<Rat, Error> {
        self.check_k(k)?;
        let n = self.node_count();
        let total: Rat = self
            .rows
            .iter()
            .map(|row| row[..k].iter().sum::<Rat>())
            .sum();
        Ok(total / Rat::from_integer((k * n) as i128))
    }
}
