//! Seeded synthetic graphs and hypergraphs for tests, benchmarks and the
//! bundled corpus.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::hypergraph::{Hyperedge, Hypergraph};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weight(rng: &mut ChaCha8Rng) -> f64 {
    0.1 + rng.random::<f64>()
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i, 1.0))).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0))).expect("valid cycle")
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let edges: Vec<_> = (1..n).map(|i| (r.random_range(0..i), i, weight(&mut r))).collect();
    Graph::from_edges(n, edges).expect("valid tree")
}

/// Random spanning tree plus `extra` uniform random edges (duplicates
/// merge), weights in `[0.1, 1.1)`. Always connected.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges: Vec<_> = (1..n).map(|i| (r.random_range(0..i), i, weight(&mut r))).collect();
    if n >= 2 {
        for _ in 0..extra {
            let u = r.random_range(0..n);
            let mut v = r.random_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            edges.push((u, v, weight(&mut r)));
        }
    }
    Graph::from_edges(n, edges).expect("valid graph")
}

/// `rows x cols` grid with random weights.
pub fn grid(rows: usize, cols: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let id = |i: usize, j: usize| i * cols + j;
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push((id(i, j), id(i, j + 1), weight(&mut r)));
            }
            if i + 1 < rows {
                edges.push((id(i, j), id(i + 1, j), weight(&mut r)));
            }
        }
    }
    Graph::from_edges(rows * cols, edges).expect("valid grid")
}

/// Ring on `n` vertices plus `per_vertex - 1` further edges per vertex to
/// random vertices at most `bandwidth` positions ahead. About
/// `n * per_vertex` edges with good memory locality.
pub fn banded(n: usize, per_vertex: usize, bandwidth: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let bandwidth = bandwidth.clamp(2, n.max(3) - 1);
    let mut edges = Vec::with_capacity(n * per_vertex);
    for i in 0..n {
        edges.push((i, (i + 1) % n, weight(&mut r)));
        for _ in 1..per_vertex {
            let off = r.random_range(2..=bandwidth);
            edges.push((i, (i + off) % n, weight(&mut r)));
        }
    }
    Graph::from_edges(n, edges).expect("valid banded graph")
}

/// Two dense random communities joined by `bridges` light edges.
pub fn two_communities(half: usize, inner_degree: usize, bridges: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let n = 2 * half;
    let mut edges = Vec::new();
    for base in [0, half] {
        for i in 1..half {
            edges.push((base + r.random_range(0..i), base + i, 1.0 + weight(&mut r)));
        }
        for _ in 0..half * inner_degree / 2 {
            let u = r.random_range(0..half);
            let v = r.random_range(0..half);
            if u != v {
                edges.push((base + u, base + v, 1.0 + weight(&mut r)));
            }
        }
    }
    for _ in 0..bridges.max(1) {
        edges.push((r.random_range(0..half), half + r.random_range(0..half), 0.1 * weight(&mut r)));
    }
    Graph::from_edges(n, edges).expect("valid graph")
}

/// Hypergraph on `nv` vertices: a chain of 2-pin hyperedges for
/// connectivity plus `extra` hyperedges with 2..=`max_pins` pins drawn from
/// a window of `window` consecutive vertices. Integer weights in 1..=10.
pub fn random_hypergraph(nv: usize, extra: usize, max_pins: usize, window: usize, seed: u64) -> Hypergraph {
    let mut r = rng(seed);
    let window = window.clamp(2, nv.max(2));
    let max_pins = max_pins.clamp(2, window);
    let mut hyperedges: Vec<Hyperedge> = (1..nv)
        .map(|i| Hyperedge {
            pins: vec![i - 1, i],
            weight: r.random_range(1..=10) as f64,
        })
        .collect();
    if nv >= 2 {
        for _ in 0..extra {
            let start = r.random_range(0..nv);
            let size = r.random_range(2..=max_pins);
            let pins = sample(&mut r, window, size).into_iter().map(|o| (start + o) % nv).collect();
            hyperedges.push(Hyperedge {
                pins,
                weight: r.random_range(1..=10) as f64,
            });
        }
    }
    Hypergraph::new(nv, hyperedges).expect("valid hypergraph")
}
