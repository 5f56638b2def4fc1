//! Exact vertex coloring: k-colorability decision and chromatic number.
//!
//! DSATUR-ordered backtracking with a greedy clique lower bound. Graphs
//! here are extended nearest-neighbor graphs of desk-scale networks, so
//! exact search is feasible; a node-expansion budget caps the worst case.

use crate::nngraph::ExtendedGraph;
use crate::Error;

pub const DEFAULT_EXPANSION_BUDGET: u64 = 10_000_000;

/// Proper vertex coloring witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub color_count: usize,
}

impl Coloring {
    /// Checks properness against `h` by direct edge scan.
    pub fn is_proper(&self, h: &ExtendedGraph) -> bool {
        if self.colors.len() != h.node_count() {
            return false;
        }
        if self.colors.iter().any(|&c| c >= self.color_count) {
            return false;
        }
        h.edges()
            .iter()
            .all(|&(a, b)| self.colors[a] != self.colors[b])
    }

    /// Color classes actually used, in index order.
    pub fn used_colors(&self) -> Vec<usize> {
        let mut used = vec![false; self.color_count];
        for &c in &self.colors {
            used[c] = true;
        }
        (0..self.color_count).filter(|&c| used[c]).collect()
    }
}

struct Search<'a> {
    h: &'a ExtendedGraph,
    budget: u64,
    expansions: u64,
    colors: Vec<Option<usize>>,
}

impl<'a> Search<'a> {
    fn new(h: &'a ExtendedGraph, budget: u64) -> Self {
        Search {
            h,
            budget,
            expansions: 0,
            colors: vec![None; h.node_count()],
        }
    }

    /// Next vertex by (saturation, degree, index), descending on the
    /// first two so the most constrained vertex is colored first.
    fn pick_vertex(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, std::cmp::Reverse<usize>)> = None;
        let mut pick = None;
        for v in 0..self.h.node_count() {
            if self.colors[v].is_some() {
                continue;
            }
            let mut seen = std::collections::BTreeSet::new();
            for u in self.h.neighbors(v) {
                if let Some(c) = self.colors[u] {
                    seen.insert(c);
                }
            }
            let key = (seen.len(), self.h.degree(v), std::cmp::Reverse(v));
            if best.is_none_or(|b| key > b) {
                best = Some(key);
                pick = Some(v);
            }
        }
        pick
    }

    fn color_rec(&mut self, budget_k: usize, max_used: usize) -> Result<bool, Error> {
        let v = match self.pick_vertex() {
            Some(v) => v,
            None => return Ok(true),
        };
        self.expansions += 1;
        if self.expansions > self.budget {
            return Err(Error::TimeBudgetExceeded);
        }
        let mut forbidden = vec![false; budget_k];
        for u in self.h.neighbors(v) {
            if let Some(c) = self.colors[u] {
                forbidden[c] = true;
            }
        }
        // Trying at most one fresh color avoids symmetric permutations.
        let limit = budget_k.min(max_used + 1);
        for c in 0..limit {
            if forbidden[c] {
                continue;
            }
            self.colors[v] = Some(c);
            if self.color_rec(budget_k, max_used.max(c + 1))? {
                return Ok(true);
            }
            self.colors[v] = None;
        }
        Ok(false)
    }
}

/// Returns a proper coloring of `h` with at most `k` colors, or `None`
/// when no such coloring exists. Exact and deterministic.
pub fn k_colorable(h: &ExtendedGraph, k: usize, budget: u64) -> Result<Option<Coloring>, Error> {
    assert!(k >= 1);
    if greedy_clique(h).len() > k {
        return Ok(None);
    }
    let mut search = Search::new(h, budget);
    if search.color_rec(k, 0)? {
        let colors: Vec<usize> = search.colors.iter().map(|c| c.unwrap()).collect();
        let coloring = Coloring {
            colors,
            color_count: k,
        };
        debug_assert!(coloring.is_proper(h));
        Ok(Some(coloring))
    } else {
        Ok(None)
    }
}

/// Exact chromatic number with a witness, searching upward from the
/// clique lower bound.
pub fn chromatic_number(h: &ExtendedGraph, budget: u64) -> Result<(usize, Coloring), Error> {
    let lb = greedy_clique(h).len().max(1);
    for k in lb..=h.node_count() {
        if let Some(mut c) = k_colorable(h, k, budget)? {
            c.color_count = k;
            debug_assert_eq!(c.used_colors().len(), k);
            return Ok((k, c));
        }
    }
    unreachable!("every graph is n-colorable")
}

/// Greedy clique: grows from each start vertex in degree order. The
/// result size is a valid lower bound on the chromatic number.
pub fn greedy_clique(h: &ExtendedGraph) -> Vec<usize> {
    let n = h.node_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    let mut best: Vec<usize> = Vec::new();
    for &start in &order {
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&u| h.has_edge(u, v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}
