//! Hypergraphs and their bipartite (star) expansion.

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperedge {
    pub pins: Vec<usize>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hypergraph {
    num_vertices: usize,
    hyperedges: Vec<Hyperedge>,
}

impl Hypergraph {
    /// Validates and builds a hypergraph over vertices `0..num_vertices`.
    pub fn new(num_vertices: usize, hyperedges: Vec<Hyperedge>) -> Result<Self> {
        let mut seen = vec![usize::MAX; num_vertices];
        for (e, h) in hyperedges.iter().enumerate() {
            if h.pins.is_empty() {
                return Err(Error::EmptyHyperedge(e));
            }
            if !h.weight.is_finite() || h.weight < 0.0 {
                return Err(Error::InvalidWeight {
                    i: e,
                    j: e,
                    weight: h.weight,
                });
            }
            for &v in &h.pins {
                if v >= num_vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        n: num_vertices,
                    });
                }
                if seen[v] == e {
                    return Err(Error::RepeatedPin { hyperedge: e, vertex: v });
                }
                seen[v] = e;
            }
        }
        Ok(Self {
            num_vertices,
            hyperedges,
        })
    }

    pub fn from_pins<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        let hyperedges = edges.into_iter().map(|(pins, weight)| Hyperedge { pins, weight }).collect();
        Self::new(num_vertices, hyperedges)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_hyperedges(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn weights(&self) -> Vec<f64> {
        self.hyperedges.iter().map(|h| h.weight).collect()
    }

    pub fn num_pins(&self) -> usize {
        self.hyperedges.iter().map(|h| h.pins.len()).sum()
    }

    /// Same structure with the hyperedge weights replaced.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.hyperedges.len() {
            return Err(Error::LengthMismatch {
                expected: self.hyperedges.len(),
                got: weights.len(),
            });
        }
        let hyperedges = self
            .hyperedges
            .iter()
            .zip(weights)
            .map(|(h, &weight)| Hyperedge {
                pins: h.pins.clone(),
                weight,
            })
            .collect();
        Self::new(self.num_vertices, hyperedges)
    }

    /// For every vertex, the ids of the hyperedges containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_vertices];
        for (e, h) in self.hyperedges.iter().enumerate() {
            for &v in &h.pins {
                inc[v].push(e);
            }
        }
        inc
    }

    /// Star expansion: one graph node per vertex followed by one node per
    /// hyperedge; each pin becomes an edge carrying the hyperedge weight.
    pub fn bipartite_expand(&self) -> BipartiteModel {
        let nv = self.num_vertices;
        let edges = self
            .hyperedges
            .iter()
            .enumerate()
            .flat_map(|(e, h)| h.pins.iter().map(move |&v| (v, nv + e, h.weight)));
        let graph = Graph::from_edges(nv + self.hyperedges.len(), edges).expect("validated hypergraph expands to a valid graph");
        BipartiteModel { graph, num_vertices: nv }
    }
}

/// The graph produced by [`Hypergraph::bipartite_expand`].
///
/// Vertex `v` of the hypergraph is graph node `v`; hyperedge `e` is graph
/// node `num_vertices + e`.
#[derive(Clone, Debug)]
pub struct BipartiteModel {
    pub graph: Graph,
    pub num_vertices: usize,
}

impl BipartiteModel {
    pub fn vertex_node(&self, v: usize) -> usize {
        v
    }

    pub fn hyperedge_node(&self, e: usize) -> usize {
        self.num_vertices + e
    }

    /// Maps a graph node back to `Ok(vertex)` or `Err(hyperedge)`.
    pub fn node_origin(&self, node: usize) -> std::result::Result<usize, usize> {
        if node < self.num_vertices {
            Ok(node)
        } else {
            Err(node - self.num_vertices)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_hyperedges_expand() {
        let h = Hypergraph::from_pins(3, [(vec![0, 1], 1.0), (vec![1, 2], 1.0)]).unwrap();
        let b = h.bipartite_expand();
        assert_eq!(b.graph.n(), 5);
        assert_eq!(b.graph.num_edges(), 4);
        assert!(b.graph.is_bipartite());
        assert!(b.graph.is_connected());
        assert_eq!(b.node_origin(4), Err(1));
        assert_eq!(b.node_origin(2), Ok(2));
    }

    #[test]
    fn single_hyperedge_is_star() {
        let h = Hypergraph::from_pins(3, [(vec![0, 1, 2], 2.0)]).unwrap();
        let b = h.bipartite_expand();
        let center = b.hyperedge_node(0);
        assert_eq!(b.graph.degree(center), 3);
        for v in 0..3 {
            assert_eq!(b.graph.weight(v, center), 2.0);
        }
    }

    #[test]
    fn rejects_invalid() {
        assert!(matches!(
            Hypergraph::from_pins(3, [(vec![], 1.0)]),
            Err(Error::EmptyHyperedge(0))
        ));
        assert!(matches!(
            Hypergraph::from_pins(3, [(vec![0, 3], 1.0)]),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            Hypergraph::from_pins(3, [(vec![1, 1], 1.0)]),
            Err(Error::RepeatedPin { .. })
        ));
    }

    #[test]
    fn incidence_lists() {
        let h = Hypergraph::from_pins(3, [(vec![0, 1], 1.0), (vec![1, 2], 1.0)]).unwrap();
        assert_eq!(h.incidence(), vec![vec![0], vec![0, 1], vec![1]]);
        assert_eq!(h.num_pins(), 4);
    }
}
