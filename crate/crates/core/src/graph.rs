//! Dense bitset graphs and the (S-)block intersection graphs of a design.
//!
//! Vertex `i` of a block intersection graph is block `i` of the normalized
//! design, so repeated blocks become distinct vertices with equal
//! neighbourhoods.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset;
use crate::design::Design;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// Simple undirected graph on `0..n` stored as `n` adjacency bit rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = bitset::words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        Graph::empty(n).complement()
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        bitset::set(self.row_mut(u), v);
        bitset::set(self.row_mut(v), u);
    }

    fn row_mut(&mut self, u: usize) -> &mut [u64] {
        let w = self.words;
        &mut self.rows[u * w..(u + 1) * w]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    /// Adjacency row of `u` (bit `v` set iff `uv` is an edge).
    pub fn neighbors(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bitset::get(self.neighbors(u), v)
    }

    pub fn degree(&self, u: usize) -> usize {
        bitset::count(self.neighbors(u))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            bitset::ones(self.neighbors(u))
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Complement on the same vertex set (still loop-free).
    pub fn complement(&self) -> Graph {
        let full = bitset::full(self.n);
        let mut g = self.clone();
        for u in 0..self.n {
            let row = g.row_mut(u);
            for (w, f) in row.iter_mut().zip(&full) {
                *w = !*w & f;
            }
            bitset::clear(row, u);
        }
        g
    }

    /// Subgraph induced on `vertices`, relabelled in ascending order. The
    /// returned map sends each new label to its original vertex.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        if let Some(&vertex) = vertices.iter().find(|&&x| x >= self.n) {
            return Err(GraphError::VertexOutOfRange { vertex, n: self.n });
        }
        let mut labels = vertices.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let mut g = Graph::empty(labels.len());
        for (i, &u) in labels.iter().enumerate() {
            for (j, &v) in labels.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok((g, labels))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = bitset::from_indices(self.n, [0]);
        let mut frontier = vec![0usize];
        while let Some(u) = frontier.pop() {
            let row = self.neighbors(u);
            for (wi, (s, &r)) in seen.iter_mut().zip(row).enumerate() {
                let mut fresh = r & !*s;
                *s |= r;
                while fresh != 0 {
                    frontier.push(wi * bitset::WORD + fresh.trailing_zeros() as usize);
                    fresh &= fresh - 1;
                }
            }
        }
        bitset::count(&seen) == self.n
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let degrees = (0..self.n).map(|u| self.degree(u));
        DegreeStats {
            n: self.n,
            min_degree: degrees.clone().min().unwrap_or(0),
            max_degree: degrees.max().unwrap_or(0),
            is_connected: self.is_connected(),
        }
    }

    /// Symmetric, loop-free and no bits past `n`.
    pub fn is_well_formed(&self) -> bool {
        let full = bitset::full(self.n);
        (0..self.n).all(|u| {
            let row = self.neighbors(u);
            !bitset::get(row, u)
                && bitset::is_subset(row, &full)
                && bitset::ones(row).all(|v| self.has_edge(v, u))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub n: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub is_connected: bool,
}

/// `|B_i ∩ B_j|` for every pair of blocks, so that several S-BIGs of one
/// design share the intersection work.
#[derive(Debug, Clone)]
pub struct IntersectionMatrix {
    b: usize,
    max_block: usize,
    sizes: Vec<u16>,
}

impl IntersectionMatrix {
    pub fn new(d: &Design) -> Self {
        let b = d.b();
        let mut sizes = vec![0u16; b * b];
        if b > 0 {
            sizes.par_chunks_mut(b).enumerate().for_each(|(i, row)| {
                let mi = d.block_mask(i);
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = bitset::intersection_size(mi, d.block_mask(j)) as u16;
                }
            });
        }
        IntersectionMatrix {
            b,
            max_block: d.block_size_range().map_or(0, |(_, hi)| hi),
            sizes,
        }
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn max_block_size(&self) -> usize {
        self.max_block
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.sizes[i * self.b + j] as usize
    }

    /// Graph joining distinct blocks whose intersection size lies in `s`.
    pub fn s_big(&self, s: &[usize]) -> Graph {
        let admitted: Vec<bool> = (0..=self.max_block).map(|x| s.contains(&x)).collect();
        let mut g = Graph::empty(self.b);
        let words = g.words;
        g.rows.par_chunks_mut(words.max(1)).enumerate().for_each(|(i, row)| {
            if i >= self.b {
                return;
            }
            for j in (0..self.b).filter(|&j| j != i) {
                if admitted[self.get(i, j)] {
                    bitset::set(row, j);
                }
            }
        });
        g
    }
}

/// Block intersection graph: blocks adjacent iff they meet.
pub fn build_big(d: &Design) -> Graph {
    let s: Vec<usize> = (1..=d.block_size_range().map_or(0, |(_, hi)| hi)).collect();
    build_s_big(d, &s)
}

/// S-block intersection graph: blocks adjacent iff `|B_i ∩ B_j| ∈ s`.
pub fn build_s_big(d: &Design, s: &[usize]) -> Graph {
    IntersectionMatrix::new(d).s_big(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn from_edges_validates() {
        assert_eq!(Graph::from_edges(2, [(0, 2)]).unwrap_err(), GraphError::VertexOutOfRange { vertex: 2, n: 2 });
        assert_eq!(Graph::from_edges(2, [(1, 1)]).unwrap_err(), GraphError::SelfLoop(1));
    }

    #[test]
    fn complement_of_edgeless_is_complete() {
        for n in [0, 1, 5, 64, 65] {
            let k = Graph::empty(n).complement();
            assert_eq!(k.edge_count(), n * n.saturating_sub(1) / 2);
            assert!(k.is_well_formed());
            assert_eq!(k.complement(), Graph::empty(n));
        }
    }

    #[test]
    fn induced_singleton_and_full() {
        let g = path(5);
        let (h, map) = g.induced_subgraph(&[3]).unwrap();
        assert_eq!((h.n(), h.edge_count(), map), (1, 0, vec![3]));
        let (h, _) = g.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(h, g);
        assert!(g.induced_subgraph(&[5]).is_err());
    }

    #[test]
    fn induced_relabels_in_order() {
        let g = path(5);
        let (h, map) = g.induced_subgraph(&[4, 1, 2]).unwrap();
        assert_eq!(map, vec![1, 2, 4]);
        assert!(h.has_edge(0, 1));
        assert!(!h.has_edge(1, 2));
    }

    #[test]
    fn degree_stats_cases() {
        let k = Graph::complete(6);
        assert_eq!(
            k.degree_stats(),
            DegreeStats { n: 6, min_degree: 5, max_degree: 5, is_connected: true }
        );
        let two_edges = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.degree_stats().is_connected);
        assert!(path(130).is_connected());
    }

    #[test]
    fn edges_listing() {
        let g = Graph::from_edges(4, [(2, 0), (1, 3)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn big_of_pairs_is_cocktail_party() {
        let d = crate::constructions::complete_design(4, 2).unwrap();
        let g = build_big(&d);
        assert_eq!(g.n(), 6);
        // Each pair misses only its complementary pair.
        for u in 0..6 {
            assert_eq!(g.degree(u), 4);
        }
        let missing: Vec<_> = g.complement().edges().collect();
        for (u, v) in missing {
            let (a, b) = (d.block(u), d.block(v));
            assert!(a.iter().all(|x| !b.contains(x)));
        }
    }
}
