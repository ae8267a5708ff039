//! Exclusivity graphs: simple undirected graphs on at most 64 vertices.
//!
//! Vertices are events of a correlation experiment, edges join mutually
//! exclusive events. Adjacency is stored as one `u64` bit row per vertex so
//! set operations (neighbourhood intersections, complements) are single
//! machine-word instructions.

mod codec;
mod family;
mod perm;

pub use codec::{parse_edge_list, parse_graph6, parse_graph_text, to_edge_list, to_graph6};
pub use family::{FamilyKind, FamilySpec};
pub use perm::{AutomorphismGroup, VertexPermutation, AUTOMORPHISM_ORDER_CAP};

use crate::error::{Error, Result};

/// Hard cap on the vertex count: adjacency rows must fit one machine word.
pub const MAX_VERTICES: usize = 64;

#[inline]
const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A simple undirected graph on `n <= 64` vertices with dense 0-based labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("graph needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::Capacity(format!(
                "{n} vertices exceeds the {MAX_VERTICES}-vertex cap"
            )));
        }
        Ok(Graph { n, rows: vec![0; n] })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        let mask = low_mask(n);
        for u in 0..n {
            g.rows[u] = mask & !bit(u);
        }
        Ok(g)
    }

    /// Builds a graph from an explicit edge list. Duplicate edges are fine;
    /// self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts the edge `u-v`.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Parameter(format!(
                "edge {u}-{v} out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Parameter(format!("self-loop at vertex {u}")));
        }
        self.rows[u] |= bit(v);
        self.rows[v] |= bit(u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.rows[u] & bit(v) != 0
    }

    /// Neighbourhood of `u` as a bit set.
    #[inline]
    pub fn neighbors(&self, u: usize) -> u64 {
        self.rows[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as ordered pairs `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut rest = self.rows[u] & !low_mask(u + 1);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                out.push((u, v));
                rest &= rest - 1;
            }
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    /// Edge-complement: `u-v` present iff absent here (`u != v`).
    pub fn complement(&self) -> Graph {
        let mask = low_mask(self.n);
        let rows = (0..self.n)
            .map(|u| !self.rows[u] & mask & !bit(u))
            .collect();
        Graph { n: self.n, rows }
    }

    /// OR product (co-normal product): vertex set is the Cartesian product,
    /// `(u1,u2) ~ (v1,v2)` iff `u1 ~ v1` here or `u2 ~ v2` in `other`.
    ///
    /// Vertex `(u1,u2)` gets index `u1 * other.n + u2`.
    pub fn or_product(&self, other: &Graph) -> Result<Graph> {
        let n = self.n * other.n;
        if n > MAX_VERTICES {
            return Err(Error::Capacity(format!(
                "OR product has {} x {} = {n} vertices, cap is {MAX_VERTICES}",
                self.n, other.n
            )));
        }
        let mut g = Graph::empty(n)?;
        for u1 in 0..self.n {
            for u2 in 0..other.n {
                let a = u1 * other.n + u2;
                for v1 in 0..self.n {
                    for v2 in 0..other.n {
                        let b = v1 * other.n + v2;
                        if a < b && (self.has_edge(u1, v1) || other.has_edge(u2, v2)) {
                            g.rows[a] |= bit(b);
                            g.rows[b] |= bit(a);
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    /// Relabels vertices: the image has an edge `(perm(u), perm(v))` for
    /// every edge `(u, v)` here.
    pub fn relabel(&self, perm: &VertexPermutation) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Parameter(format!(
                "permutation on {} points applied to {}-vertex graph",
                perm.len(),
                self.n
            )));
        }
        let mut g = Graph::empty(self.n).expect("same size");
        for (u, v) in self.edges() {
            g.add_edge(perm.apply(u), perm.apply(v)).expect("in range");
        }
        Ok(g)
    }

    /// True when every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        let mut seen = bit(0);
        let mut frontier = bit(0);
        while frontier != 0 {
            let mut next = 0u64;
            let mut rest = frontier;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                next |= self.rows[u];
                rest &= rest - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == low_mask(self.n)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}
