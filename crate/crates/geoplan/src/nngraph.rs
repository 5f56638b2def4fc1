//! Nearest-neighbor graphs and their undirected extended graphs.
//!
//! Each node of the directed graph has in-edges from its k−1 lowest-RTT
//! nodes. When several nodes tie at the threshold RTT, multiple graphs
//! exist; `build_nn_graphs` enumerates them deterministically.

use itertools::Itertools;

use crate::network::Network;
use crate::rational::Rat;
use crate::Error;

/// Directed nearest-neighbor graph: per node, the k−1 in-edge sources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestNeighborGraph {
    k: usize,
    in_neighbors: Vec<Vec<usize>>,
}

impl NearestNeighborGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.in_neighbors.len()
    }

    /// Sorted in-edge sources of node `i`.
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_neighbors[i]
    }

    /// Nodes that receive from `t`, i.e. have `t` as an in-neighbor.
    pub fn receive_set(&self, t: usize) -> Result<Vec<usize>, Error> {
        if t >= self.node_count() {
            return Err(Error::UnknownNode(format!("node index {t}")));
        }
        Ok((0..self.node_count())
            .filter(|&j| self.in_neighbors[j].contains(&t))
            .collect())
    }

    /// Undirected extension: directed edges, plus an edge between any two
    /// nodes that are in-neighbors of a common node.
    pub fn extend(&self) -> ExtendedGraph {
        let n = self.node_count();
        let mut adj = vec![vec![false; n]; n];
        let mut connect = |a: usize, b: usize| {
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        };
        for i in 0..n {
            for &j in &self.in_neighbors[i] {
                connect(i, j);
            }
            for pair in self.in_neighbors[i].iter().combinations(2) {
                connect(*pair[0], *pair[1]);
            }
        }
        ExtendedGraph { adj }
    }

    /// Edge list lines `src -> dst weight_ms`, sources sorted per node.
    pub fn edge_list_text(&self, net: &Network) -> String {
        let mut out = String::new();
        for dst in 0..self.node_count() {
            for &src in &self.in_neighbors[dst] {
                out.push_str(&format!(
                    "{} -> {} {}\n",
                    net.names()[src],
                    net.names()[dst],
                    net.rtt(src, dst)
                ));
            }
        }
        out
    }
}

/// Undirected loop-free adjacency over the network's node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedGraph {
    adj: Vec<Vec<bool>>,
}

impl ExtendedGraph {
    pub fn from_adjacency(adj: Vec<Vec<bool>>) -> Self {
        ExtendedGraph { adj }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v]
            .iter()
            .enumerate()
            .filter_map(|(u, &e)| e.then_some(u))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&e| e).count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.node_count();
        let mut out = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.adj[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .tuple_combinations()
            .all(|(&a, &b)| self.adj[a][b])
    }
}

/// Enumeration result; `truncated` is set when the tie-variant product
/// exceeded the cap.
#[derive(Debug, Clone)]
pub struct NnGraphSet {
    pub graphs: Vec<NearestNeighborGraph>,
    pub truncated: bool,
}

/// Enumerates all nearest-neighbor graph variants arising from RTT ties,
/// in deterministic order, truncated at `cap`.
pub fn build_nn_graphs(net: &Network, k: usize, cap: usize) -> Result<NnGraphSet, Error> {
    let n = net.len();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    assert!(cap >= 1);
    let profile = net.lambda_profile();

    // Per node: the forced in-neighbors (strictly below the threshold)
    // and the alternative subsets of tied candidates filling the rest.
    let mut per_node_choices: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);
    for i in 0..n {
        if k == 1 {
            per_node_choices.push(vec![vec![]]);
            continue;
        }
        let threshold: Rat = profile.row(i)[k - 1];
        let mut forced: Vec<usize> = Vec::new();
        let mut tied: Vec<usize> = Vec::new();
        for j in 0..n {
            if j == i {
                continue;
            }
            if net.rtt(j, i) < threshold {
                forced.push(j);
            } else if net.rtt(j, i) == threshold {
                tied.push(j);
            }
        }
        let slots = (k - 1) - forced.len();
        let choices: Vec<Vec<usize>> = tied
            .iter()
            .copied()
            .combinations(slots)
            .map(|extra| {
                let mut set = forced.clone();
                set.extend(extra);
                set.sort_unstable();
                set
            })
            .collect();
        per_node_choices.push(choices);
    }

    // Cartesian product over nodes, node-major, truncated at cap.
    let mut graphs = Vec::new();
    let mut truncated = false;
    let mut idx = vec![0usize; n];
    loop {
        if graphs.len() == cap {
            truncated = true;
            break;
        }
        graphs.push(NearestNeighborGraph {
            k,
            in_neighbors: (0..n).map(|i| per_node_choices[i][idx[i]].clone()).collect(),
        });
        // odometer increment, last node fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(NnGraphSet { graphs, truncated });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_node_choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    Ok(NnGraphSet { graphs, truncated })
}
