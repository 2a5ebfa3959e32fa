//! Weighted undirected simple graphs in compressed sparse adjacency form.
//!
//! Vertices are `0..n` inside the library. File formats and the CLI use
//! 1-based ids; conversion happens in [`crate::io`] and the command-line
//! front end only.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// An undirected edge `u < v` with its weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Weighted simple graph.
///
/// Adjacency is stored CSR-style: the neighbors of `i` are
/// `targets[offsets[i]..offsets[i + 1]]`, sorted ascending, with matching
/// entries in `weights`. Every edge appears in both endpoint lists with the
/// same weight. All stored weights are strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    weighted_degrees: Vec<f64>,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list.
    ///
    /// Repeated pairs (in either orientation) are summed and pairs whose
    /// total weight is zero are dropped. Self-loops, out-of-range ids and
    /// negative or non-finite weights are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::TooLarge {
                what: "vertex count",
                size: n,
                limit: u32::MAX as usize,
            });
        }
        let mut entries: Vec<(u32, u32, f64)> = Vec::new();
        for (i, j, w) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { i, j, weight: w });
            }
            entries.push((i as u32, j as u32, w));
            entries.push((j as u32, i as u32, w));
        }
        entries.sort_unstable_by_key(|&(i, j, _)| (i, j));

        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(entries.len());
        let mut weights = Vec::with_capacity(entries.len());
        let mut iter = entries.into_iter().peekable();
        while let Some((i, j, mut w)) = iter.next() {
            while let Some(&(i2, j2, w2)) = iter.peek() {
                if i2 != i || j2 != j {
                    break;
                }
                w += w2;
                iter.next();
            }
            if w > 0.0 {
                offsets[i as usize + 1] += 1;
                targets.push(j);
                weights.push(w);
            }
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let weighted_degrees = (0..n).map(|i| weights[offsets[i]..offsets[i + 1]].iter().sum()).collect();
        Ok(Self {
            n,
            offsets,
            targets,
            weights,
            weighted_degrees,
        })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    /// Neighbor ids and weights of `i` as parallel slices.
    #[inline]
    pub fn adjacency(&self, i: usize) -> (&[u32], &[f64]) {
        let range = self.offsets[i]..self.offsets[i + 1];
        (&self.targets[range.clone()], &self.weights[range])
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (t, w) = self.adjacency(i);
        t.iter().zip(w).map(|(&j, &w)| (j as usize, w))
    }

    /// Unweighted degree (number of incident edges).
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Weighted degree `d_ii = sum_j w_ij`.
    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.weighted_degrees[i]
    }

    pub fn weighted_degrees(&self) -> &[f64] {
        &self.weighted_degrees
    }

    /// Weight of edge `(i, j)`, zero when absent.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let (t, w) = self.adjacency(i);
        match t.binary_search(&(j as u32)) {
            Ok(pos) => w[pos],
            Err(_) => 0.0,
        }
    }

    /// Edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v > u)
                .map(move |(v, w)| Edge { u, v, w })
        })
    }

    pub fn edge_weights(&self) -> Vec<f64> {
        self.edges().map(|e| e.w).collect()
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.edges().map(|e| e.w).sum()
    }

    /// For every adjacency slot (aligned with the concatenated neighbor
    /// lists), the id of its edge in [`Graph::edges`] order.
    pub fn adjacency_edge_ids(&self) -> Vec<usize> {
        let mut ids = vec![usize::MAX; self.targets.len()];
        let mut next = 0;
        for u in 0..self.n {
            for p in self.offsets[u]..self.offsets[u + 1] {
                let v = self.targets[p] as usize;
                if v > u {
                    ids[p] = next;
                    next += 1;
                } else {
                    let (tv, _) = self.adjacency(v);
                    let q = tv.binary_search(&(u as u32)).expect("symmetric adjacency");
                    ids[p] = ids[self.offsets[v] + q];
                }
            }
        }
        ids
    }

    /// Start of the adjacency slots of `i` within the concatenated lists.
    pub fn adjacency_offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Fails with the first vertex whose weighted degree is zero.
    pub fn check_no_isolated(&self) -> Result<()> {
        match self.weighted_degrees.iter().position(|&d| d <= 0.0) {
            Some(i) => Err(Error::IsolatedVertex(i)),
            None => Ok(()),
        }
    }

    /// Component label per vertex (labels are `0..count`, assigned in
    /// order of the smallest vertex in each component) and the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for (v, _) in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// True iff a traversal from vertex 0 reaches every vertex.
    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// True iff every component admits a proper 2-coloring.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for (v, _) in self.neighbors(u) {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Induced subgraph on the largest connected component (ties go to
    /// the component containing the smaller vertex id). Returns the
    /// subgraph and, for each new vertex, its id in `self`.
    pub fn largest_component(&self) -> (Graph, Vec<usize>) {
        let (label, count) = self.components();
        let mut sizes = vec![0usize; count];
        for &l in &label {
            sizes[l] += 1;
        }
        let best = (0..count).max_by_key(|&c| (sizes[c], usize::MAX - c)).unwrap_or(0);
        let kept: Vec<usize> = (0..self.n).filter(|&i| label[i] == best).collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (k, &old) in kept.iter().enumerate() {
            new_id[old] = k;
        }
        let edges = self
            .edges()
            .filter(|e| label[e.u] == best)
            .map(|e| (new_id[e.u], new_id[e.v], e.w));
        let sub = Graph::from_edges(kept.len(), edges).expect("subgraph of a valid graph is valid");
        (sub, kept)
    }
}
