//! Directed weighted trading multigraphs.
//!
//! One edge per executed trade, pointing from seller to buyer and weighted by
//! trade size. Parallel edges and self-loops (buyer = seller) are kept; a
//! self-loop adds one to both the in- and out-degree of its node and its full
//! weight to both strengths.

use std::collections::HashMap;
use std::io::Write;

use crate::error::Result;
use crate::ingest::Window;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub seller: usize,
    pub buyer: usize,
    pub weight: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.seller == self.buyer
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradingNetwork {
    labels: Vec<String>,
    edges: Vec<Edge>,
    in_degree: Vec<u64>,
    out_degree: Vec<u64>,
    in_strength: Vec<f64>,
    out_strength: Vec<f64>,
}

impl TradingNetwork {
    /// Builds a network from `(seller, buyer, weight)` triples. Nodes are
    /// numbered in order of first appearance.
    pub fn from_edges<S, I>(edges: I) -> Self
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (S, S, f64)>,
    {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut node = |id: &str, labels: &mut Vec<String>| -> usize {
            if let Some(&i) = index.get(id) {
                return i;
            }
            let i = labels.len();
            labels.push(id.to_owned());
            index.insert(id.to_owned(), i);
            i
        };
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(s, b, weight)| {
                let seller = node(s.as_ref(), &mut labels);
                let buyer = node(b.as_ref(), &mut labels);
                Edge { seller, buyer, weight }
            })
            .collect();
        Self::from_indexed(labels, edges)
    }

    /// Builds a network over pre-numbered nodes.
    ///
    /// # Panics
    /// If an edge refers to a node index outside `labels`.
    pub fn from_indexed(labels: Vec<String>, edges: Vec<Edge>) -> Self {
        let n = labels.len();
        let mut net = TradingNetwork {
            labels,
            edges,
            in_degree: vec![0; n],
            out_degree: vec![0; n],
            in_strength: vec![0.0; n],
            out_strength: vec![0.0; n],
        };
        for e in &net.edges {
            net.out_degree[e.seller] += 1;
            net.in_degree[e.buyer] += 1;
            net.out_strength[e.seller] += e.weight;
            net.in_strength[e.buyer] += e.weight;
        }
        net
    }

    pub fn empty() -> Self {
        Self::from_indexed(Vec::new(), Vec::new())
    }

    /// Number of traders.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges (trades), loops and parallels included.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn in_degree(&self) -> &[u64] {
        &self.in_degree
    }

    pub fn out_degree(&self) -> &[u64] {
        &self.out_degree
    }

    pub fn in_strength(&self) -> &[f64] {
        &self.in_strength
    }

    pub fn out_strength(&self) -> &[f64] {
        &self.out_strength
    }

    pub fn total_degree(&self, node: usize) -> u64 {
        self.in_degree[node] + self.out_degree[node]
    }

    pub fn total_strength(&self, node: usize) -> f64 {
        self.in_strength[node] + self.out_strength[node]
    }

    pub fn node(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Same network with every edge pointing the other way.
    pub fn reversed(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { seller: e.buyer, buyer: e.seller, weight: e.weight })
            .collect();
        Self::from_indexed(self.labels.clone(), edges)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let edges = self.edges.iter().map(|e| Edge { weight: e.weight * factor, ..*e }).collect();
        Self::from_indexed(self.labels.clone(), edges)
    }

    /// Renumbers nodes: old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n());
        let mut labels = vec![String::new(); self.n()];
        for (old, &new) in perm.iter().enumerate() {
            labels[new] = self.labels[old].clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { seller: perm[e.seller], buyer: perm[e.buyer], weight: e.weight })
            .collect();
        Self::from_indexed(labels, edges)
    }

    /// Debug export: one `seller,buyer,weight` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut sink: W) -> Result<()> {
        for e in &self.edges {
            writeln!(sink, "{},{},{}", self.labels[e.seller], self.labels[e.buyer], e.weight)?;
        }
        Ok(())
    }
}

/// One edge per transaction of the window, seller → buyer, weight = size.
/// The window's canonical `(timestamp, txn_id)` order fixes the edge order.
pub fn build_network(window: &Window) -> TradingNetwork {
    TradingNetwork::from_edges(
        window
            .transactions
            .iter()
            .map(|t| (t.seller_id.as_str(), t.buyer_id.as_str(), t.size as f64)),
    )
}

/// Undirected simple graph: parallel edges merged, loops dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adjacency: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        pairs.sort_unstable();
        pairs
    }
}

pub fn undirected_simple_projection(net: &TradingNetwork) -> SimpleGraph {
    let mut adjacency = vec![Vec::new(); net.n()];
    for e in net.edges().iter().filter(|e| !e.is_loop()) {
        adjacency[e.seller].push(e.buyer);
        adjacency[e.buyer].push(e.seller);
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
        nbrs.dedup();
    }
    SimpleGraph { adjacency }
}
