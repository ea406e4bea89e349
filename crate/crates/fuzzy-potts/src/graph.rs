//! Finite multigraphs and edge configurations.
//!
//! A [`Graph`] is a vertex count together with an ordered list of
//! undirected edges; loops and parallel edges are allowed. An
//! [`EdgeConfig`] assigns each edge open (1) or closed (0) and is encoded
//! as a rank: bit `i` of the rank is the state of edge `i`. Measures on
//! configurations are dense tables indexed by rank, so the rank encoding
//! is the single source of truth for configuration order everywhere.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// A finite undirected multigraph with vertices `0..vertex_count`.
///
/// Edges are stored in a fixed order; that order defines the bit layout of
/// [`EdgeConfig`] ranks and therefore the indexing of every measure table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Creates a graph, validating that every endpoint names a vertex.
    /// Loops (`u == u`) and parallel edges are permitted.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Graph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Endpoints of edge `e` (equal endpoints for a loop).
    pub fn endpoints(&self, e: usize) -> Result<(usize, usize)> {
        self.edges.get(e).copied().ok_or(Error::EdgeOutOfRange {
            edge: e,
            edge_count: self.edges.len(),
        })
    }

    /// Number of edge configurations, `2^edge_count`.
    pub fn config_count(&self) -> u64 {
        assert!(
            self.edges.len() < 64,
            "configuration ranks are 64-bit; {} edges do not fit",
            self.edges.len()
        );
        1u64 << self.edges.len()
    }

    /// Iterates all configuration ranks in increasing order.
    pub fn configs(&self) -> impl Iterator<Item = EdgeConfig> {
        (0..self.config_count()).map(EdgeConfig)
    }

    /// Checks that a configuration rank is valid for this graph.
    pub fn check_config(&self, c: EdgeConfig) -> Result<()> {
        if c.0 < self.config_count() {
            Ok(())
        } else {
            Err(Error::ConfigOutOfRange {
                rank: c.0,
                edge_count: self.edges.len(),
            })
        }
    }

    /// Checks that a vertex index is valid for this graph.
    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count,
            })
        }
    }
}

/// An assignment of open/closed to every edge, encoded as a rank:
/// bit `i` set means edge `i` is open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeConfig(pub u64);

impl EdgeConfig {
    /// The all-closed configuration.
    pub const EMPTY: EdgeConfig = EdgeConfig(0);

    /// The all-open configuration on `edge_count` edges.
    pub fn full(edge_count: usize) -> EdgeConfig {
        assert!(edge_count < 64);
        EdgeConfig(((1u128 << edge_count) - 1) as u64)
    }

    /// Whether edge `e` is open.
    pub fn is_open(self, e: usize) -> bool {
        (self.0 >> e) & 1 == 1
    }

    /// This configuration with edge `e` forced to `open`.
    pub fn with_edge(self, e: usize, open: bool) -> EdgeConfig {
        if open {
            EdgeConfig(self.0 | (1u64 << e))
        } else {
            EdgeConfig(self.0 & !(1u64 << e))
        }
    }

    /// Number of open edges.
    pub fn open_count(self) -> u32 {
        self.0.count_ones()
    }

    /// Coordinatewise minimum (both open).
    pub fn meet(self, other: EdgeConfig) -> EdgeConfig {
        EdgeConfig(self.0 & other.0)
    }

    /// Coordinatewise maximum (either open).
    pub fn join(self, other: EdgeConfig) -> EdgeConfig {
        EdgeConfig(self.0 | other.0)
    }

    /// Coordinatewise partial order: every edge open here is open in `other`.
    pub fn le(self, other: EdgeConfig) -> bool {
        self.0 & !other.0 == 0
    }
}

/// A partition of the vertex set into disjoint blocks.
///
/// Canonical form: each block is sorted ascending, and blocks are ordered
/// by their least element, so equal partitions compare equal and the
/// derived ordering is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from a membership function given as the block
    /// representative (any stable label) per vertex.
    fn from_labels(labels: &[usize]) -> Partition {
        let mut by_label: Vec<(usize, Vec<usize>)> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            match by_label.iter_mut().find(|(key, _)| *key == l) {
                Some((_, block)) => block.push(v),
                None => by_label.push((l, vec![v])),
            }
        }
        let mut blocks: Vec<Vec<usize>> = by_label.into_iter().map(|(_, b)| b).collect();
        // Vertices were visited in increasing order, so each block is
        // already sorted; order blocks by least element.
        blocks.sort_by_key(|b| b[0]);
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total number of vertices covered.
    pub fn vertex_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Index of the block containing `v`, if `v` is covered.
    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&v).is_ok())
    }

    /// Whether `u` and `v` lie in the same block.
    pub fn same_block(&self, u: usize, v: usize) -> bool {
        match (self.block_of(u), self.block_of(v)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Union-find over `0..n`, used for connectivity.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Unites the classes of `a` and `b`; returns true if they were distinct.
    fn unite(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Deterministic: the smaller root absorbs the larger.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        lo != hi
    }
}

fn components(g: &Graph, c: EdgeConfig) -> Result<UnionFind> {
    g.check_config(c)?;
    let mut uf = UnionFind::new(g.vertex_count);
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        if c.is_open(i) {
            uf.unite(u, v);
        }
    }
    Ok(uf)
}

/// Number of connected components of the open subgraph. Isolated vertices
/// count as components; open loops never change the count.
pub fn component_count(g: &Graph, c: EdgeConfig) -> Result<usize> {
    let mut uf = components(g, c)?;
    let mut count = 0;
    for v in 0..g.vertex_count {
        if uf.find(v) == v {
            count += 1;
        }
    }
    Ok(count)
}

/// The partition of the vertex set into open components.
pub fn component_partition(g: &Graph, c: EdgeConfig) -> Result<Partition> {
    let mut uf = components(g, c)?;
    let labels: Vec<usize> = (0..g.vertex_count).map(|v| uf.find(v)).collect();
    Ok(Partition::from_labels(&labels))
}

/// Whether the open subgraph is acyclic. An open loop is a cycle, and so
/// is any pair of open parallel edges.
pub fn is_forest(g: &Graph, c: EdgeConfig) -> Result<bool> {
    g.check_config(c)?;
    let mut uf = UnionFind::new(g.vertex_count);
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        if c.is_open(i) && !uf.unite(u, v) {
            // Edge joined an already-connected pair: a cycle. Loops take
            // this branch because find(u) == find(v) trivially.
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the open subgraph connects all vertices of `g`.
pub fn is_connected(g: &Graph, c: EdgeConfig) -> Result<bool> {
    Ok(component_count(g, c)? == 1)
}

/// Contracts edge `e`: its endpoints merge into one vertex and every other
/// edge is kept (parallel edges of `e` become loops). Contracting a loop
/// merges nothing and just removes the loop. Returns the contracted graph
/// and the vertex map from old indices to new.
pub fn contract_edge(g: &Graph, e: usize) -> Result<(Graph, Vec<usize>)> {
    let (u, v) = g.endpoints(e)?;
    if u == v {
        // Loop: deletion and contraction coincide; vertex map is identity.
        let deleted = delete_edge(g, e)?;
        return Ok((deleted, (0..g.vertex_count).collect()));
    }
    let (keep, gone) = if u < v { (u, v) } else { (v, u) };
    let map: Vec<usize> = (0..g.vertex_count)
        .map(|w| {
            if w == gone {
                keep
            } else if w > gone {
                w - 1
            } else {
                w
            }
        })
        .collect();
    let edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, &(a, b))| (map[a], map[b]))
        .collect();
    let contracted = Graph {
        vertex_count: g.vertex_count - 1,
        edges,
    };
    Ok((contracted, map))
}

/// Deletes edge `e`, keeping all vertices.
pub fn delete_edge(g: &Graph, e: usize) -> Result<Graph> {
    g.endpoints(e)?;
    let edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, &p)| p)
        .collect();
    Ok(Graph {
        vertex_count: g.vertex_count,
        edges,
    })
}

/// The two-path family: vertices `x = 0` and `y = 1` joined by a direct
/// edge `e = {x, y}` and by `m >= 1` internally disjoint two-edge paths
/// through midpoints `u_1, ..., u_m`.
///
/// Edge order: edge 0 is `e`; then for each `i`, edge `2i + 1` is
/// `{x, u_i}` and edge `2i + 2` is `{u_i, y}`. Returns the graph, the
/// distinguished vertex `x`, and the index of `e`.
pub fn figure1_graph(m: usize) -> Result<(Graph, usize, usize)> {
    if m == 0 {
        return Err(Error::ParameterOutOfRange(
            "the two-path family needs at least one path (m >= 1)",
        ));
    }
    let mut edges = Vec::with_capacity(1 + 2 * m);
    edges.push((0usize, 1usize));
    for i in 0..m {
        let mid = 2 + i;
        edges.push((0, mid));
        edges.push((1, mid));
    }
    let g = Graph {
        vertex_count: m + 2,
        edges,
    };
    Ok((g, 0, 0))
}

/// All connected simple graphs with exactly `vertex_count` vertices and at
/// most `max_edges` edges, one representative per isomorphism class, in a
/// deterministic order: by edge count, then lexicographically by the
/// canonical edge list. The representative is itself canonical (the
/// lexicographically least relabeling).
///
/// Intended for small corpora; the cost grows as `2^(n(n-1)/2) * n!`.
pub fn enumerate_connected_graphs(vertex_count: usize, max_edges: usize) -> Vec<Graph> {
    assert!(
        vertex_count <= 6,
        "isomorphism-class enumeration is intended for at most 6 vertices"
    );
    if vertex_count == 0 {
        return Vec::new();
    }
    let n = vertex_count;
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    let perms = permutations(n);
    let mut seen: Vec<Vec<(usize, usize)>> = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let count = mask.count_ones() as usize;
        if count > max_edges {
            continue;
        }
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = Graph {
            vertex_count: n,
            edges: edges.clone(),
        };
        if !is_connected(&g, EdgeConfig::full(g.edge_count())).expect("valid config") {
            continue;
        }
        let canon = canonical_edges(&edges, &perms);
        if !seen.contains(&canon) {
            seen.push(canon);
        }
    }
    seen.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    seen.into_iter()
        .map(|edges| Graph {
            vertex_count: n,
            edges,
        })
        .collect()
}

/// The standard small-graph corpus: connected simple graphs with at most
/// `max_vertices` vertices and `max_edges` edges, one per isomorphism
/// class, ordered by vertex count and then as in
/// [`enumerate_connected_graphs`].
pub fn corpus_up_to(max_vertices: usize, max_edges: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        out.extend(enumerate_connected_graphs(n, max_edges));
    }
    out
}

fn canonical_edges(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut best: Option<Vec<(usize, usize)>> = None;
    for perm in perms {
        let mut relabeled: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().map_or(true, |b| relabeled < *b) {
            best = Some(relabeled);
        }
    }
    best.expect("at least the identity permutation")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn rejects_out_of_range_endpoints() {
        assert_eq!(
            Graph::new(2, vec![(0, 2)]).unwrap_err(),
            Error::VertexOutOfRange {
                vertex: 2,
                vertex_count: 2
            }
        );
    }

    #[test]
    fn config_encoding_round_trip() {
        let c = EdgeConfig::EMPTY.with_edge(0, true).with_edge(2, true);
        assert_eq!(c.0, 0b101);
        assert!(c.is_open(0) && !c.is_open(1) && c.is_open(2));
        assert_eq!(c.with_edge(0, false).0, 0b100);
        assert_eq!(c.open_count(), 2);
        assert_eq!(EdgeConfig::full(3).0, 0b111);
        assert_eq!(EdgeConfig::full(0).0, 0);
        assert_eq!(c.meet(EdgeConfig(0b011)).0, 0b001);
        assert_eq!(c.join(EdgeConfig(0b011)).0, 0b111);
        assert!(EdgeConfig(0b001).le(EdgeConfig(0b101)));
        assert!(!EdgeConfig(0b010).le(EdgeConfig(0b101)));
    }

    #[test]
    fn component_counts_on_a_path() {
        // Path 0-1-2: edge 0 = (0,1), edge 1 = (1,2).
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(component_count(&g, EdgeConfig(0b00)).unwrap(), 3);
        assert_eq!(component_count(&g, EdgeConfig(0b01)).unwrap(), 2);
        assert_eq!(component_count(&g, EdgeConfig(0b11)).unwrap(), 1);
        assert!(is_connected(&g, EdgeConfig(0b11)).unwrap());
        assert!(!is_connected(&g, EdgeConfig(0b01)).unwrap());
        assert_eq!(
            component_count(&g, EdgeConfig(4)).unwrap_err(),
            Error::ConfigOutOfRange {
                rank: 4,
                edge_count: 2
            }
        );
    }

    #[test]
    fn loops_and_parallel_edges() {
        // Vertex 0 with a loop, plus a double edge 0-1.
        let g = graph(2, &[(0, 0), (0, 1), (0, 1)]);
        // The open loop does not change the component count.
        assert_eq!(component_count(&g, EdgeConfig(0b001)).unwrap(), 2);
        assert_eq!(component_count(&g, EdgeConfig(0b011)).unwrap(), 1);
        // But it is a cycle.
        assert!(!is_forest(&g, EdgeConfig(0b001)).unwrap());
        // Two parallel open edges form a cycle.
        assert!(!is_forest(&g, EdgeConfig(0b110)).unwrap());
        assert!(is_forest(&g, EdgeConfig(0b010)).unwrap());
    }

    #[test]
    fn partitions_are_canonical() {
        let g = graph(5, &[(3, 1), (2, 4)]);
        let p = component_partition(&g, EdgeConfig(0b11)).unwrap();
        assert_eq!(
            p.blocks(),
            &[vec![0], vec![1, 3], vec![2, 4]]
        );
        assert_eq!(p.block_count(), 3);
        assert_eq!(p.vertex_count(), 5);
        assert_eq!(p.block_of(4), Some(2));
        assert_eq!(p.block_of(7), None);
        assert!(p.same_block(1, 3));
        assert!(!p.same_block(0, 1));
    }

    #[test]
    fn forest_counts_on_the_triangle() {
        let g = graph(3, &[(0, 1), (0, 2), (1, 2)]);
        let forests = g
            .configs()
            .filter(|&c| is_forest(&g, c).unwrap())
            .count();
        // All 7 proper subsets of the edges are forests; the full triangle
        // is the only cycle.
        assert_eq!(forests, 7);
        let spanning_trees = g
            .configs()
            .filter(|&c| is_forest(&g, c).unwrap() && is_connected(&g, c).unwrap())
            .count();
        assert_eq!(spanning_trees, 3);
    }

    #[test]
    fn contraction_merges_endpoints_and_keeps_parallels_as_loops() {
        // Triangle with a parallel edge alongside edge 0.
        let g = graph(3, &[(0, 1), (0, 1), (0, 2), (1, 2)]);
        let (h, map) = contract_edge(&g, 0).unwrap();
        assert_eq!(map, vec![0, 0, 1]);
        assert_eq!(h.vertex_count(), 2);
        // The parallel edge becomes a loop at the merged vertex; the two
        // remaining triangle sides become parallel edges 0-1.
        assert_eq!(h.edges(), &[(0, 0), (0, 1), (0, 1)]);
    }

    #[test]
    fn contracting_a_loop_only_deletes_it() {
        let g = graph(2, &[(1, 1), (0, 1)]);
        let (h, map) = contract_edge(&g, 0).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edges(), &[(0, 1)]);
    }

    #[test]
    fn deletion_keeps_vertices() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let h = delete_edge(&g, 1).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edges(), &[(0, 1)]);
        assert!(delete_edge(&g, 2).is_err());
    }

    #[test]
    fn two_path_family_shape() {
        assert!(figure1_graph(0).is_err());
        let (g, x, e) = figure1_graph(3).unwrap();
        assert_eq!(x, 0);
        assert_eq!(e, 0);
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(
            g.edges(),
            &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]
        );
        // Whole graph is connected.
        assert!(is_connected(&g, EdgeConfig::full(7)).unwrap());
    }

    #[test]
    fn corpus_is_frozen() {
        // Independently derived list of connected simple graphs with at
        // most 4 vertices and 6 edges, one per isomorphism class, in
        // canonical order.
        let expected: &[(usize, &[(usize, usize)])] = &[
            (1, &[]),
            (2, &[(0, 1)]),
            (3, &[(0, 1), (0, 2)]),
            (3, &[(0, 1), (0, 2), (1, 2)]),
            (4, &[(0, 1), (0, 2), (0, 3)]),
            (4, &[(0, 1), (0, 2), (1, 3)]),
            (4, &[(0, 1), (0, 2), (0, 3), (1, 2)]),
            (4, &[(0, 1), (0, 2), (1, 3), (2, 3)]),
            (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
            (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        ];
        let corpus = corpus_up_to(4, 6);
        assert_eq!(corpus.len(), expected.len());
        for (g, &(n, edges)) in corpus.iter().zip(expected) {
            assert_eq!(g.vertex_count(), n);
            assert_eq!(g.edges(), edges);
        }
    }

    #[test]
    fn five_vertex_tree_classes() {
        // There are 3 isomorphism classes of trees on 5 vertices.
        let trees: Vec<_> = enumerate_connected_graphs(5, 4)
            .into_iter()
            .filter(|g| g.edge_count() == 4)
            .collect();
        assert_eq!(trees.len(), 3);
    }
}
