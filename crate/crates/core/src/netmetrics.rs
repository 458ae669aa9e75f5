//! Topological metrics of one trading network.
//!
//! * degree and strength centralization, inward minus outward;
//! * assortative index over the edge list, with each endpoint valued by its
//!   total (in + out) degree or strength;
//! * average shortest-path length on the undirected simple projection.
//!
//! Undefined values (too few nodes, zero denominators, no reachable pair) are
//! `None`, never `0` or NaN.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::network::{undirected_simple_projection, SimpleGraph, TradingNetwork};

/// In-, out- and net centralization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centralization {
    pub inward: f64,
    pub outward: f64,
    /// `inward - outward`: +1 for a sink star, −1 for a source star.
    pub net: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NetworkMetrics {
    pub c_k_in: Option<f64>,
    pub c_k_out: Option<f64>,
    pub c_k: Option<f64>,
    pub c_s_in: Option<f64>,
    pub c_s_out: Option<f64>,
    pub c_s: Option<f64>,
    pub e_k: Option<f64>,
    pub e_s: Option<f64>,
    pub l: Option<f64>,
}

/// Freeman in/out-degree centralization with the `(n-1)^2` normalization.
///
/// Σᵢ (k_max − kᵢ) is evaluated as `n·k_max − m`, exact in integers. The
/// normalization is the simple-digraph maximum, so repeated trades between the
/// same pair can push a side above 1.
pub fn degree_centralization(net: &TradingNetwork) -> Option<Centralization> {
    let n = net.n() as u128;
    if n < 2 {
        return None;
    }
    let m = net.m() as u128;
    let norm = ((n - 1) * (n - 1)) as f64;
    let one_side = |deg: &[u64]| {
        let k_max = deg.iter().copied().max().unwrap_or(0) as u128;
        (n * k_max - m) as f64 / norm
    };
    let inward = one_side(net.in_degree());
    let outward = one_side(net.out_degree());
    Some(Centralization { inward, outward, net: inward - outward })
}

/// Strength centralization: Σᵢ (s_max − sᵢ) / ((n−1) Σᵢ sᵢ) per direction.
pub fn strength_centralization(net: &TradingNetwork) -> Option<Centralization> {
    let n = net.n();
    if n < 2 {
        return None;
    }
    let one_side = |strength: &[f64]| -> Option<f64> {
        let total: f64 = strength.iter().sum();
        if total <= 0.0 {
            return None;
        }
        let s_max = strength.iter().copied().fold(0.0, f64::max);
        let spread = n as f64 * s_max - total;
        Some((spread / ((n - 1) as f64 * total)).clamp(0.0, 1.0))
    };
    let inward = one_side(net.in_strength())?;
    let outward = one_side(net.out_strength())?;
    Some(Centralization { inward, outward, net: inward - outward })
}

/// Assortative index of an edge sample given the value of each endpoint.
///
/// Equivalent to the Pearson correlation of the symmetrized sample
/// {(a, b), (b, a)}; computed about the pooled mean for stability.
fn edge_assortativity(values: &[(f64, f64)]) -> Option<f64> {
    let m = values.len();
    if m < 2 {
        return None;
    }
    let mf = m as f64;
    let mean = values.iter().map(|&(a, b)| a + b).sum::<f64>() / (2.0 * mf);
    let (mut cross, mut squares) = (0.0, 0.0);
    for &(a, b) in values {
        let (da, db) = (a - mean, b - mean);
        cross += da * db;
        squares += da * da + db * db;
    }
    let num = cross / mf;
    let den = squares / (2.0 * mf);
    if den <= 1e-26 * mean * mean {
        return None;
    }
    Some((num / den).clamp(-1.0, 1.0))
}

/// Degree assortativity; endpoints valued by total degree.
pub fn assortativity_degree(net: &TradingNetwork) -> Option<f64> {
    let values: Vec<(f64, f64)> = net
        .edges()
        .iter()
        .map(|e| (net.total_degree(e.seller) as f64, net.total_degree(e.buyer) as f64))
        .collect();
    edge_assortativity(&values)
}

/// Strength assortativity; endpoints valued by total strength.
pub fn assortativity_strength(net: &TradingNetwork) -> Option<f64> {
    let values: Vec<(f64, f64)> = net
        .edges()
        .iter()
        .map(|e| (net.total_strength(e.seller), net.total_strength(e.buyer)))
        .collect();
    edge_assortativity(&values)
}

/// Sum of shortest-path distances and number of unordered pairs of distinct,
/// mutually reachable nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathTotals {
    pub distance_sum: u64,
    pub pairs: u64,
}

impl PathTotals {
    pub fn mean(&self) -> Option<f64> {
        (self.pairs > 0).then(|| self.distance_sum as f64 / self.pairs as f64)
    }
}

/// Breadth-first search from every node.
pub fn path_totals(graph: &SimpleGraph) -> PathTotals {
    let n = graph.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    let (mut sum, mut pairs) = (0u64, 0u64);
    for source in 0..n {
        if graph.neighbors(source).is_empty() {
            continue;
        }
        dist.fill(u32::MAX);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in graph.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = next;
                    // each unordered pair once
                    if v > source {
                        sum += u64::from(next);
                        pairs += 1;
                    }
                    queue.push_back(v);
                }
            }
        }
    }
    PathTotals { distance_sum: sum, pairs }
}

/// Mean shortest-path length over reachable pairs, direction and weights
/// ignored.
pub fn average_path_length(net: &TradingNetwork) -> Option<f64> {
    path_totals(&undirected_simple_projection(net)).mean()
}

pub fn compute_all(net: &TradingNetwork) -> NetworkMetrics {
    let k = degree_centralization(net);
    let s = strength_centralization(net);
    NetworkMetrics {
        c_k_in: k.map(|c| c.inward),
        c_k_out: k.map(|c| c.outward),
        c_k: k.map(|c| c.net),
        c_s_in: s.map(|c| c.inward),
        c_s_out: s.map(|c| c.outward),
        c_s: s.map(|c| c.net),
        e_k: assortativity_degree(net),
        e_s: assortativity_strength(net),
        l: average_path_length(net),
    }
}
