//! Multigraphs and quivers: spectral dual graphs, Betti numbers, vertex
//! contraction, doubling, integer boundary maps and canonical keys.
//!
//! Edges are labeled by their position in the edge list. Two graphs that
//! differ only in edge order are different values but share a canonical key.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::intlinalg::{ExactInteger, IntMatrix};
use crate::partitions::Partition;

/// Undirected multigraph on vertices `0..vertex_count`; parallel edges and loops allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidArgument("a graph needs at least one vertex".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertex_count || v >= vertex_count) {
            return Err(Error::InvalidArgument(format!(
                "edge ({u},{v}) out of range for {vertex_count} vertices"
            )));
        }
        Ok(MultiGraph { vertex_count, edges })
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn banana(k: usize) -> Self {
        MultiGraph { vertex_count: 2, edges: vec![(0, 1); k] }
    }

    /// Path with `len` edges.
    pub fn path(len: usize) -> Self {
        MultiGraph { vertex_count: len + 1, edges: (0..len).map(|i| (i, i + 1)).collect() }
    }

    /// Cycle on `n >= 1` vertices (`n == 1` is a loop, `n == 2` a banana).
    pub fn cycle(n: usize) -> Self {
        MultiGraph { vertex_count: n, edges: (0..n).map(|i| (i, (i + 1) % n)).collect() }
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

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// Symmetric multiplicity matrix of non-loop edges.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![vec![0u32; self.vertex_count]; self.vertex_count];
        for &(u, v) in &self.edges {
            if u != v {
                adj[u][v] += 1;
                adj[v][u] += 1;
            }
        }
        adj
    }

    pub fn loops_per_vertex(&self) -> Vec<u32> {
        let mut loops = vec![0u32; self.vertex_count];
        for &(u, v) in &self.edges {
            if u == v {
                loops[u] += 1;
            }
        }
        loops
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_without(&[])
    }

    /// Connectivity after removing the edges whose positions are flagged.
    pub fn is_connected_without(&self, removed: &[bool]) -> bool {
        let mut dsu = DisjointSets::new(self.vertex_count);
        let mut components = self.vertex_count;
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            if removed.get(k).copied().unwrap_or(false) {
                continue;
            }
            if dsu.union(u, v) {
                components -= 1;
            }
        }
        components == 1
    }

    /// True when no edge is a bridge. Only edges without a parallel copy need
    /// the deletion test.
    pub fn is_bridgeless(&self) -> bool {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for &(u, v) in &self.edges {
            *seen.entry((u.min(v), u.max(v))).or_default() += 1;
        }
        self.edges.iter().enumerate().all(|(k, &(u, v))| {
            if u == v || seen[&(u.min(v), u.max(v))] > 1 {
                return true;
            }
            let mut removed = vec![false; self.edges.len()];
            removed[k] = true;
            self.is_connected_without(&removed)
        })
    }

    /// True when every block of `vp` induces a connected subgraph, i.e. the
    /// partition is a flat of the graphic matroid.
    pub fn has_connected_blocks(&self, vp: &VertexPartition) -> bool {
        let block = vp.block_index();
        let mut dsu = DisjointSets::new(self.vertex_count);
        let mut merges = 0;
        for &(u, v) in &self.edges {
            if block[u] == block[v] && dsu.union(u, v) {
                merges += 1;
            }
        }
        merges + vp.len() == self.vertex_count
    }

    /// First Betti number `s - r + 1` of a connected graph.
    pub fn betti1(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::PreconditionViolation("betti1 needs a connected graph".into()));
        }
        Ok(self.edges.len() + 1 - self.vertex_count)
    }

    /// Same vertices, edges listed in a different order (`order[k]` is the old position).
    pub fn reorder_edges(&self, order: &[usize]) -> Self {
        MultiGraph { vertex_count: self.vertex_count, edges: order.iter().map(|&k| self.edges[k]).collect() }
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        MultiGraph {
            vertex_count: self.vertex_count,
            edges: self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect(),
        }
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  {v};");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }

    /// Isomorphism-invariant byte encoding (vertex relabeling and edge
    /// reordering both leave it unchanged). It decodes back to a graph with
    /// [`MultiGraph::from_canonical_key`].
    pub fn canonical_key(&self) -> Vec<u8> {
        canonical_key_from_adjacency(&self.adjacency(), &self.loops_per_vertex())
    }

    /// Rebuilds a representative graph from a canonical key.
    pub fn from_canonical_key(key: &[u8]) -> Result<Self> {
        let bad = || Error::InvalidArgument("malformed canonical key".into());
        if !key.len().is_multiple_of(4) || key.len() < 4 {
            return Err(bad());
        }
        let words: Vec<u32> = key.chunks_exact(4).map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]])).collect();
        let r = words[0] as usize;
        if words.len() != 1 + r + r * r.saturating_sub(1) / 2 {
            return Err(bad());
        }
        let mut edges = Vec::new();
        for v in 0..r {
            edges.extend(std::iter::repeat_n((v, v), words[1 + v] as usize));
        }
        let mut pos = 1 + r;
        for i in 0..r {
            for j in i + 1..r {
                edges.extend(std::iter::repeat_n((i, j), words[pos] as usize));
                pos += 1;
            }
        }
        MultiGraph::new(r, edges)
    }
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two different sets were merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Canonical encoding of a multigraph given by its symmetric multiplicity
/// matrix and per-vertex loop counts.
///
/// Colour refinement followed by individualisation of the first non-singleton
/// cell; every discrete leaf yields an ordering and the lexicographically
/// smallest encoding wins. Words are big-endian so byte order matches
/// numeric order.
pub(crate) fn canonical_key_from_adjacency(adj: &[Vec<u32>], loops: &[u32]) -> Vec<u8> {
    let r = adj.len();
    let initial: Vec<(u32, u32)> =
        (0..r).map(|v| (loops[v], adj[v].iter().sum::<u32>())).collect();
    let colors = rank_signatures(&initial);
    let mut best: Option<Vec<u8>> = None;
    canonical_search(adj, loops, colors, &mut best);
    best.expect("search visits at least one leaf")
}

fn rank_signatures<S: Ord + Clone>(sigs: &[S]) -> Vec<usize> {
    let mut uniq: Vec<S> = sigs.to_vec();
    uniq.sort();
    uniq.dedup();
    sigs.iter().map(|s| uniq.binary_search(s).expect("present")).collect()
}

fn refine(adj: &[Vec<u32>], mut colors: Vec<usize>) -> Vec<usize> {
    let r = adj.len();
    let mut classes = colors.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..r)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> =
                    (0..r).filter(|&w| w != v && adj[v][w] > 0).map(|w| (colors[w], adj[v][w])).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank_signatures(&sigs);
        let next_classes = next.iter().copied().max().map_or(0, |m| m + 1);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn canonical_search(adj: &[Vec<u32>], loops: &[u32], colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
    let colors = refine(adj, colors);
    let r = adj.len();
    let mut sizes = vec![0usize; r];
    for &c in &colors {
        sizes[c] += 1;
    }
    match (0..r).find(|&c| sizes[c] > 1) {
        None => {
            let mut order = vec![0usize; r];
            for v in 0..r {
                order[colors[v]] = v;
            }
            let enc = encode(adj, loops, &order);
            if best.as_ref().is_none_or(|b| enc < *b) {
                *best = Some(enc);
            }
        }
        Some(cell) => {
            for v in (0..r).filter(|&v| colors[v] == cell) {
                let split: Vec<(usize, bool)> = (0..r).map(|w| (colors[w], w != v)).collect();
                canonical_search(adj, loops, rank_signatures(&split), best);
            }
        }
    }
}

fn encode(adj: &[Vec<u32>], loops: &[u32], order: &[usize]) -> Vec<u8> {
    let r = order.len();
    let mut out = Vec::with_capacity(4 * (1 + r + r * r / 2));
    out.extend_from_slice(&(r as u32).to_be_bytes());
    for &v in order {
        out.extend_from_slice(&loops[v].to_be_bytes());
    }
    for i in 0..r {
        for j in i + 1..r {
            out.extend_from_slice(&adj[order[i]][order[j]].to_be_bytes());
        }
    }
    out
}

/// A quiver: a multigraph with every edge oriented `source → target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let g = MultiGraph::new(vertex_count, arrows)?;
        Ok(Quiver { vertex_count, arrows: g.edges })
    }

    /// Orients each edge from its first listed endpoint to its second.
    pub fn from_graph(graph: &MultiGraph) -> Self {
        Quiver { vertex_count: graph.vertex_count, arrows: graph.edges.clone() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn underlying(&self) -> MultiGraph {
        MultiGraph { vertex_count: self.vertex_count, edges: self.arrows.clone() }
    }

    pub fn is_connected(&self) -> bool {
        self.underlying().is_connected()
    }

    pub fn betti1(&self) -> Result<usize> {
        self.underlying().betti1()
    }

    /// Identifies the vertices of each block and deletes the edges that become loops.
    pub fn contract(&self, vp: &VertexPartition) -> Result<Contraction> {
        if vp.vertex_count() != self.vertex_count {
            return Err(Error::InvalidArgument(format!(
                "vertex partition covers {} vertices, quiver has {}",
                vp.vertex_count(),
                self.vertex_count
            )));
        }
        let block = vp.block_index();
        let mut arrows = Vec::with_capacity(self.arrows.len());
        let mut deleted_loops = 0;
        for &(s, t) in &self.arrows {
            let (bs, bt) = (block[s], block[t]);
            if bs == bt {
                deleted_loops += 1;
            } else {
                arrows.push((bs, bt));
            }
        }
        Ok(Contraction { quiver: Quiver { vertex_count: vp.len(), arrows }, deleted_loops })
    }

    /// The double: arrow `k` becomes arrows `2k` (same orientation) and `2k+1` (reversed).
    pub fn double(&self) -> Quiver {
        let arrows = self.arrows.iter().flat_map(|&(s, t)| [(s, t), (t, s)]).collect();
        Quiver { vertex_count: self.vertex_count, arrows }
    }

    /// Boundary map `Z^s → Z^{r-1}`, `e ↦ s(e) - t(e)`, written in the basis
    /// `v0 - v1, ..., v0 - v(r-1)`; the column of `i → j` is `e_{j-1} - e_{i-1}`
    /// with `e_{-1} = 0`.
    pub fn boundary_matrix<T: ExactInteger>(&self) -> Result<IntMatrix<T>> {
        if self.vertex_count < 2 {
            return Err(Error::InvalidArgument("boundary matrix needs at least two vertices".into()));
        }
        let mut a: IntMatrix<T> = IntMatrix::zeros(self.vertex_count - 1, self.arrows.len());
        for (k, &(s, t)) in self.arrows.iter().enumerate() {
            if s == t {
                continue;
            }
            if t > 0 {
                a[(t - 1, k)] = a[(t - 1, k)].clone() + T::one();
            }
            if s > 0 {
                a[(s - 1, k)] = a[(s - 1, k)].clone() - T::one();
            }
        }
        Ok(a)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph Q {\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  {v};");
        }
        for &(s, t) in &self.arrows {
            let _ = writeln!(out, "  {s} -> {t};");
        }
        out.push_str("}\n");
        out
    }
}

/// Result of [`Quiver::contract`]: the loop-free contracted quiver and the
/// number of edges that were deleted as loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub quiver: Quiver,
    pub deleted_loops: usize,
}

/// A set partition of `0..vertex_count`. Blocks are kept sorted internally and
/// ordered by their smallest element, so block `i` is vertex `i` of the contraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(vertex_count: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; vertex_count];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block in vertex partition".into()));
            }
            b.sort_unstable();
            for &v in b.iter() {
                if v >= vertex_count || seen[v] {
                    return Err(Error::InvalidArgument(format!("vertex {v} out of range or repeated")));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("vertex partition does not cover every vertex".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(VertexPartition { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition { blocks: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn whole(n: usize) -> Self {
        VertexPartition { blocks: vec![(0..n).collect()] }
    }

    /// Every set partition of `0..n`, in restricted-growth-string order
    /// (starting with the one-block partition).
    pub fn all(n: usize) -> Vec<VertexPartition> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut rgs = vec![0usize; n];
        fn go(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<VertexPartition>) {
            let n = rgs.len();
            if i == n {
                let mut blocks = vec![Vec::new(); max + 1];
                for (v, &b) in rgs.iter().enumerate() {
                    blocks[b].push(v);
                }
                out.push(VertexPartition { blocks });
                return;
            }
            for b in 0..=max + 1 {
                rgs[i] = b;
                go(i + 1, max.max(b), rgs, out);
            }
        }
        go(1, 0, &mut rgs, &mut out);
        out
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// `block_index()[v]` is the block containing `v`.
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.vertex_count()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                idx[v] = i;
            }
        }
        idx
    }

    /// Merges blocks according to a partition of the block indices.
    pub fn coarsen(&self, of_blocks: &VertexPartition) -> Result<VertexPartition> {
        if of_blocks.vertex_count() != self.len() {
            return Err(Error::InvalidArgument("coarsening must partition the blocks".into()));
        }
        let merged = of_blocks
            .blocks
            .iter()
            .map(|group| group.iter().flat_map(|&b| self.blocks[b].iter().copied()).collect())
            .collect();
        VertexPartition::new(self.vertex_count(), merged)
    }
}

impl std::fmt::Display for VertexPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (k, v) in b.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Dual graph of a generic nodal spectral curve for the partition `p` on a
/// base curve of genus `g`: one vertex per part, `n_i n_j (2g - 2)` parallel
/// edges between distinct vertices, listed pair by pair in lexicographic order.
pub fn spectral_dual_graph(p: &Partition, g: u32) -> Result<MultiGraph> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("genus must be at least 2, got {g}")));
    }
    let parts = p.parts();
    let r = parts.len();
    let mut edges = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let k = parts[i] as usize * parts[j] as usize * (2 * g as usize - 2);
            edges.extend(std::iter::repeat_n((i, j), k));
        }
    }
    MultiGraph::new(r, edges)
}
