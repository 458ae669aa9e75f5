#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use tradenet_core::network::Edge;
use tradenet_core::TradingNetwork;

/// Random multigraph on at most `max_n` nodes, loops and parallel edges
/// allowed, no isolated nodes.
pub fn random_multigraph<R: Rng>(rng: &mut R, max_n: usize) -> TradingNetwork {
    let cap = rng.random_range(1..=max_n);
    let m = rng.random_range(0..=3 * cap);
    let loop_rate = rng.random::<f64>() * 0.2;
    let edges: Vec<(String, String, f64)> = (0..m)
        .map(|_| {
            let s = rng.random_range(0..cap);
            let b = if rng.random::<f64>() < loop_rate { s } else { rng.random_range(0..cap) };
            let w = (rng.random_range(1..=500u32) * 100) as f64;
            (format!("N{s}"), format!("N{b}"), w)
        })
        .collect();
    TradingNetwork::from_edges(edges)
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn star(n: usize, sink: bool) -> TradingNetwork {
    let edges: Vec<Edge> = (1..n)
        .map(|leaf| if sink { Edge { seller: leaf, buyer: 0, weight: 100.0 } } else { Edge { seller: 0, buyer: leaf, weight: 100.0 } })
        .collect();
    TradingNetwork::from_indexed((0..n).map(|i| format!("T{i}")).collect(), edges)
}

/// Mean shortest-path length over connected unordered pairs, by Floyd–Warshall
/// on the undirected, loop-free, unweighted view.
pub fn floyd_warshall_l(net: &TradingNetwork) -> Option<f64> {
    let n = net.n();
    const INF: u64 = u64::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in net.edges() {
        if e.seller != e.buyer {
            d[e.seller][e.buyer] = 1;
            d[e.buyer][e.seller] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let (mut sum, mut pairs) = (0u64, 0u64);
    for (i, row) in d.iter().enumerate() {
        for &dist in &row[i + 1..] {
            if dist < INF {
                sum += dist;
                pairs += 1;
            }
        }
    }
    (pairs > 0).then(|| sum as f64 / pairs as f64)
}

/// Plain Pearson correlation of the edge sample with both orientations of
/// every edge pooled together.
pub fn pooled_pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    if pairs.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let ys: Vec<f64> = pairs.iter().flat_map(|&(a, b)| [b, a]).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    // constant sample, up to rounding
    if sxx <= 1e-20 * n * mx * mx || syy <= 1e-20 * n * my * my {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

pub fn degree_pairs(net: &TradingNetwork) -> Vec<(f64, f64)> {
    let total = |i: usize| (net.in_degree()[i] + net.out_degree()[i]) as f64;
    net.edges().iter().map(|e| (total(e.seller), total(e.buyer))).collect()
}

pub fn strength_pairs(net: &TradingNetwork) -> Vec<(f64, f64)> {
    let total = |i: usize| net.in_strength()[i] + net.out_strength()[i];
    net.edges().iter().map(|e| (total(e.seller), total(e.buyer))).collect()
}

/// Σᵢ (max − xᵢ) / norm, summed node by node.
fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    xs.iter().map(|x| max - x).sum()
}

/// `(in, out)` degree centralization from the defining sum.
pub fn direct_degree_centralization(net: &TradingNetwork) -> Option<(f64, f64)> {
    let n = net.n();
    if n < 2 {
        return None;
    }
    let norm = ((n - 1) * (n - 1)) as f64;
    let ins: Vec<f64> = net.in_degree().iter().map(|&k| k as f64).collect();
    let outs: Vec<f64> = net.out_degree().iter().map(|&k| k as f64).collect();
    Some((spread(&ins) / norm, spread(&outs) / norm))
}

/// `(in, out)` strength centralization from the defining sum.
pub fn direct_strength_centralization(net: &TradingNetwork) -> Option<(f64, f64)> {
    let n = net.n();
    let total: f64 = net.in_strength().iter().sum();
    if n < 2 || total <= 0.0 {
        return None;
    }
    let norm = (n - 1) as f64 * total;
    Some((spread(net.in_strength()) / norm, spread(net.out_strength()) / norm))
}

pub fn close(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        (None, None) => true,
        _ => false,
    }
}
