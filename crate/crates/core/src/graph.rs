//! Labeled simple graphs and the structural operations the rest of the
//! crate builds on: vertex deletion, edge contraction, minor enumeration,
//! canonical forms, automorphisms, and reducible decompositions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count for which we run exhaustive permutation search
/// (canonical forms, automorphisms, treewidth).
pub const EXHAUSTIVE_VERTEX_CAP: usize = 8;

/// A simple undirected graph on a set of stable integer labels.
///
/// Labels survive vertex deletion and edge contraction (a contracted edge
/// keeps the smaller endpoint's label), which is what makes minor traces
/// replayable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    vertices: BTreeSet<u32>,
    edges: BTreeSet<(u32, u32)>,
}

fn ordered(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// Graph on labels `0..n` with no edges.
    pub fn empty(n: usize) -> Graph {
        Graph {
            vertices: (0..n as u32).collect(),
            edges: BTreeSet::new(),
        }
    }

    /// Graph on labels `0..n` with the given edges.
    pub fn with_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_parts(vertices: BTreeSet<u32>, edges: BTreeSet<(u32, u32)>) -> Result<Graph> {
        for &(u, v) in &edges {
            if u >= v {
                return Err(Error::argument(format!("edge ({u},{v}) is not ordered")));
            }
            if !vertices.contains(&u) || !vertices.contains(&v) {
                return Err(Error::argument(format!(
                    "edge ({u},{v}) touches a vertex outside the vertex set"
                )));
            }
        }
        Ok(Graph { vertices, edges })
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        if u == v {
            return Err(Error::argument(format!("loop at vertex {u}")));
        }
        if !self.vertices.contains(&u) || !self.vertices.contains(&v) {
            return Err(Error::argument(format!(
                "edge ({u},{v}) touches an unknown vertex"
            )));
        }
        self.edges.insert(ordered(u, v));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.iter().copied()
    }

    /// Vertex labels in sorted order; the position of a label in this list
    /// is its coordinate in index strings.
    pub fn vertex_list(&self) -> Vec<u32> {
        self.vertices.iter().copied().collect()
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, in sorted order.
    pub fn edge_list(&self) -> Vec<(u32, u32)> {
        self.edges.iter().copied().collect()
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && self.edges.contains(&ordered(u, v))
    }

    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    /// Vertices incident to no edge.
    pub fn isolated_vertices(&self) -> Vec<u32> {
        let mut covered = BTreeSet::new();
        for &(u, v) in &self.edges {
            covered.insert(u);
            covered.insert(v);
        }
        self.vertices
            .iter()
            .copied()
            .filter(|v| !covered.contains(v))
            .collect()
    }

    /// Removes `v` and all incident edges.
    pub fn delete_vertex(&self, v: u32) -> Result<Graph> {
        if !self.vertices.contains(&v) {
            return Err(Error::argument(format!("unknown vertex {v}")));
        }
        let vertices = self.vertices.iter().copied().filter(|&w| w != v).collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| a != v && b != v)
            .collect();
        Ok(Graph { vertices, edges })
    }

    /// Merges the endpoints of `{u, v}` into the smaller label.  Parallel
    /// edges collapse and the loop created by the contracted edge is dropped.
    pub fn contract_edge(&self, u: u32, v: u32) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::argument(format!("({u},{v}) is not an edge")));
        }
        let (keep, gone) = ordered(u, v);
        let vertices: BTreeSet<u32> = self
            .vertices
            .iter()
            .copied()
            .filter(|&w| w != gone)
            .collect();
        let mut edges = BTreeSet::new();
        for &(a, b) in &self.edges {
            let a = if a == gone { keep } else { a };
            let b = if b == gone { keep } else { b };
            if a != b {
                edges.insert(ordered(a, b));
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// Removes a single edge, keeping both endpoints.  Not a minor
    /// operation in this crate's sense; used by the forest recurrence and
    /// the experimental edge-deletion exploration.
    pub fn delete_edge(&self, u: u32, v: u32) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::argument(format!("({u},{v}) is not an edge")));
        }
        let mut g = self.clone();
        g.edges.remove(&ordered(u, v));
        Ok(g)
    }

    /// Connected components as sorted vertex sets, sorted by least member.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let verts = self.vertex_list();
        let index: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = DisjointSets::new(verts.len());
        for &(u, v) in &self.edges {
            dsu.union(index[&u], index[&v]);
        }
        let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            groups.entry(dsu.find(i)).or_default().push(v);
        }
        let mut out: Vec<Vec<u32>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Induced subgraph on the given labels.
    pub fn induced(&self, keep: &BTreeSet<u32>) -> Graph {
        let vertices: BTreeSet<u32> = self.vertices.intersection(keep).copied().collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| vertices.contains(&u) && vertices.contains(&v))
            .collect();
        Graph { vertices, edges }
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.vertex_count()
    }

    /// Relabels vertices to `0..n` in sorted-label order.
    pub fn compacted(&self) -> Graph {
        let verts = self.vertex_list();
        let index: BTreeMap<u32, u32> = verts
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let vertices = (0..verts.len() as u32).collect();
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| ordered(index[&u], index[&v]))
            .collect();
        Graph { vertices, edges }
    }

    /// Canonical label sequence: the lexicographically least edge list over
    /// all relabelings, prefixed by the vertex count.  Equal exactly for
    /// isomorphic graphs.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        let n = self.vertex_count();
        if n > EXHAUSTIVE_VERTEX_CAP {
            return Err(Error::capability(format!(
                "canonical form uses exhaustive search, capped at {EXHAUSTIVE_VERTEX_CAP} vertices (got {n})"
            )));
        }
        let g = self.compacted();
        let mut best: Option<Vec<(u32, u32)>> = None;
        for perm in permutations(n) {
            let mut relabeled: Vec<(u32, u32)> = g
                .edges
                .iter()
                .map(|&(u, v)| ordered(perm[u as usize], perm[v as usize]))
                .collect();
            relabeled.sort_unstable();
            if best.as_ref().map_or(true, |b| relabeled < *b) {
                best = Some(relabeled);
            }
        }
        Ok(CanonicalForm {
            n,
            edges: best.unwrap_or_default(),
        })
    }

    /// All vertex permutations preserving the edge set, as maps on
    /// positions `0..n` (sorted-label order).  The identity is always
    /// included.
    pub fn automorphisms(&self) -> Result<Vec<Vec<u32>>> {
        let n = self.vertex_count();
        if n > EXHAUSTIVE_VERTEX_CAP {
            return Err(Error::capability(format!(
                "automorphism search is exhaustive, capped at {EXHAUSTIVE_VERTEX_CAP} vertices (got {n})"
            )));
        }
        let g = self.compacted();
        let mut out = Vec::new();
        for perm in permutations(n) {
            let ok = g.edges.iter().all(|&(u, v)| {
                g.edges
                    .contains(&ordered(perm[u as usize], perm[v as usize]))
            });
            if ok {
                out.push(perm);
            }
        }
        Ok(out)
    }

    /// Exact treewidth by dynamic programming over elimination orders.
    pub fn treewidth(&self) -> Result<usize> {
        let n = self.vertex_count();
        if n > EXHAUSTIVE_VERTEX_CAP {
            return Err(Error::capability(format!(
                "treewidth search is exhaustive, capped at {EXHAUSTIVE_VERTEX_CAP} vertices (got {n})"
            )));
        }
        if n == 0 {
            return Ok(0);
        }
        let g = self.compacted();
        let mut adj = vec![0u32; n];
        for &(u, v) in &g.edges {
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
        // q(s, v): neighbors of v reachable through the eliminated set s.
        let q = |s: u32, v: usize| -> u32 {
            let mut seen = 1u32 << v;
            let mut frontier = 1u32 << v;
            let mut reach = 0u32;
            while frontier != 0 {
                let mut next = 0u32;
                let mut f = frontier;
                while f != 0 {
                    let w = f.trailing_zeros() as usize;
                    f &= f - 1;
                    reach |= adj[w] & !s;
                    next |= adj[w] & s & !seen;
                }
                seen |= next;
                frontier = next;
            }
            reach & !(1 << v)
        };
        let full = (1u32 << n) - 1;
        let mut memo = vec![usize::MAX; 1 << n];
        memo[0] = 0;
        for s in 1..=full {
            let mut best = usize::MAX;
            let mut iter = s;
            while iter != 0 {
                let v = iter.trailing_zeros() as usize;
                iter &= iter - 1;
                let prev = s & !(1 << v);
                let width = q(prev, v).count_ones() as usize;
                best = best.min(width.max(memo[prev as usize]));
            }
            memo[s as usize] = best;
        }
        Ok(memo[full as usize])
    }
}

/// Canonical label sequence of a graph; hashable key for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = (0..n as u32).collect();
    heap_permute(&mut current, n, &mut out);
    out
}

fn heap_permute(arr: &mut Vec<u32>, k: usize, out: &mut Vec<Vec<u32>>) {
    if k <= 1 {
        out.push(arr.clone());
        return;
    }
    for i in 0..k {
        heap_permute(arr, k - 1, out);
        if k % 2 == 0 {
            arr.swap(i, k - 1);
        } else {
            arr.swap(0, k - 1);
        }
    }
}

/// Simple union-find used for component computations.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> DisjointSets {
        DisjointSets {
            parent: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut c = x;
        while self.parent[c] as usize != c {
            let next = self.parent[c] as usize;
            self.parent[c] = r as u32;
            c = next;
        }
        r
    }

    /// Returns true when the call merged two distinct sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb as u32;
        true
    }
}

/// A single step of a minor construction, expressed against the
/// intermediate graph it applies to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinorStep {
    DeleteVertex(u32),
    ContractEdge(u32, u32),
}

/// A minor together with a replayable construction from its base graph.
///
/// `vertex_map` sends each base vertex to the result vertex it survives as,
/// or `None` when it was deleted (directly or as part of a deleted block).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorTrace {
    pub base: Graph,
    pub steps: Vec<MinorStep>,
    pub vertex_map: BTreeMap<u32, Option<u32>>,
    pub result: Graph,
}

impl MinorTrace {
    /// Re-applies `steps` to `base`; must reproduce `result` exactly.
    pub fn replay(&self) -> Result<Graph> {
        let mut g = self.base.clone();
        for step in &self.steps {
            g = match *step {
                MinorStep::DeleteVertex(v) => g.delete_vertex(v)?,
                MinorStep::ContractEdge(u, v) => g.contract_edge(u, v)?,
            };
        }
        Ok(g)
    }
}

/// Enumerates every distinct minor "effect" of `g`: a partition of the
/// vertices into connected blocks plus a choice of which blocks survive.
/// Each effect is realizable as a delete/contract sequence (contract a
/// spanning tree of each block, then delete the dropped blocks), and every
/// delete/contract sequence realizes some effect.
///
/// Effects are finer than isomorphism classes: two effects with the same
/// result graph but different vertex maps are both listed.  The degree-d
/// generator pipeline needs that granularity.
pub fn enumerate_minor_effects(g: &Graph) -> Vec<MinorTrace> {
    let verts = g.vertex_list();
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    partition_connected(g, &verts, 0, &mut blocks, &mut out);
    out
}

fn partition_connected(
    g: &Graph,
    verts: &[u32],
    next: usize,
    blocks: &mut Vec<Vec<u32>>,
    out: &mut Vec<MinorTrace>,
) {
    if next == verts.len() {
        emit_effects(g, blocks, out);
        return;
    }
    let v = verts[next];
    // Open a new block with v.
    blocks.push(vec![v]);
    partition_connected(g, verts, next + 1, blocks, out);
    blocks.pop();
    // Or add v to an existing block, provided the block stays connected.
    for i in 0..blocks.len() {
        blocks[i].push(v);
        if block_connected(g, &blocks[i]) {
            partition_connected(g, verts, next + 1, blocks, out);
        }
        blocks[i].pop();
    }
}

fn block_connected(g: &Graph, block: &[u32]) -> bool {
    let set: BTreeSet<u32> = block.iter().copied().collect();
    g.induced(&set).components().len() == 1
}

fn emit_effects(g: &Graph, blocks: &[Vec<u32>], out: &mut Vec<MinorTrace>) {
    let k = blocks.len();
    // Every nonempty subset of blocks may survive.
    for keep_mask in 1u32..(1 << k) {
        out.push(effect_trace(g, blocks, keep_mask));
    }
}

fn effect_trace(g: &Graph, blocks: &[Vec<u32>], keep_mask: u32) -> MinorTrace {
    let mut steps = Vec::new();
    let mut rep: BTreeMap<u32, u32> = g.vertices().map(|v| (v, v)).collect();
    let mut current = g.clone();
    for block in blocks {
        if block.len() < 2 {
            continue;
        }
        // Contract a spanning tree of the block, always into the least label.
        let set: BTreeSet<u32> = block.iter().copied().collect();
        let mut merged: BTreeSet<u32> = BTreeSet::new();
        merged.insert(*block.iter().min().unwrap());
        while merged.len() < block.len() {
            let mut found = None;
            'search: for &(a, b) in &g.induced(&set).edge_list() {
                let (ina, inb) = (merged.contains(&a), merged.contains(&b));
                if ina != inb {
                    found = Some((a, b));
                    break 'search;
                }
            }
            let (a, b) = found.expect("block is connected");
            let (ra, rb) = (rep[&a], rep[&b]);
            steps.push(MinorStep::ContractEdge(ra, rb));
            current = current.contract_edge(ra, rb).expect("edge exists");
            let keep = ra.min(rb);
            for r in rep.values_mut() {
                if *r == ra || *r == rb {
                    *r = keep;
                }
            }
            merged.insert(a);
            merged.insert(b);
        }
    }
    for (i, block) in blocks.iter().enumerate() {
        if keep_mask & (1 << i) == 0 {
            let r = rep[block.iter().min().unwrap()];
            steps.push(MinorStep::DeleteVertex(r));
            current = current.delete_vertex(r).expect("vertex exists");
        }
    }
    let mut vertex_map = BTreeMap::new();
    for (i, block) in blocks.iter().enumerate() {
        let kept = keep_mask & (1 << i) != 0;
        for &v in block {
            vertex_map.insert(v, if kept { Some(rep[&v]) } else { None });
        }
    }
    MinorTrace {
        base: g.clone(),
        steps,
        vertex_map,
        result: current,
    }
}

/// All minors of `g` up to isomorphism, each with one witnessing trace.
/// `max_out` bounds the number of isomorphism classes returned; hitting it
/// sets the truncation flag.
pub fn enumerate_minors(g: &Graph, max_out: usize) -> Result<(Vec<MinorTrace>, bool)> {
    if g.vertex_count() > EXHAUSTIVE_VERTEX_CAP {
        return Err(Error::capability(format!(
            "minor enumeration is exhaustive, capped at {EXHAUSTIVE_VERTEX_CAP} vertices"
        )));
    }
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut out = Vec::new();
    let mut truncated = false;
    for trace in enumerate_minor_effects(g) {
        let key = trace.result.canonical_form()?;
        if seen.insert(key) {
            if out.len() == max_out {
                truncated = true;
                break;
            }
            out.push(trace);
        }
    }
    Ok((out, truncated))
}

/// The kind of separator in a reducible decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeparatorKind {
    Empty,
    Vertex(u32),
    Edge(u32, u32),
}

/// A reducible decomposition `(V1, S, V2)`: no edges cross between `V1`
/// and `V2`, and `S` is empty, a shared vertex, or a shared edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub v1: BTreeSet<u32>,
    pub separator: SeparatorKind,
    pub v2: BTreeSet<u32>,
}

impl Decomposition {
    pub fn separator_set(&self) -> BTreeSet<u32> {
        match self.separator {
            SeparatorKind::Empty => BTreeSet::new(),
            SeparatorKind::Vertex(v) => [v].into_iter().collect(),
            SeparatorKind::Edge(u, v) => [u, v].into_iter().collect(),
        }
    }

    /// The two induced pieces `G[V1 ∪ S]` and `G[V2 ∪ S]`.
    pub fn pieces(&self, g: &Graph) -> (Graph, Graph) {
        let s = self.separator_set();
        let side1: BTreeSet<u32> = self.v1.union(&s).copied().collect();
        let side2: BTreeSet<u32> = self.v2.union(&s).copied().collect();
        (g.induced(&side1), g.induced(&side2))
    }
}

/// All decompositions of `g` up to swapping `V1`/`V2`.  Empty exactly when
/// `g` is irreducible.
pub fn find_decompositions(g: &Graph) -> Vec<Decomposition> {
    let mut out = Vec::new();
    let mut separators: Vec<SeparatorKind> = vec![SeparatorKind::Empty];
    for v in g.vertices() {
        separators.push(SeparatorKind::Vertex(v));
    }
    for (u, v) in g.edge_list() {
        separators.push(SeparatorKind::Edge(u, v));
    }
    for sep in separators {
        let s = match &sep {
            SeparatorKind::Empty => BTreeSet::new(),
            SeparatorKind::Vertex(v) => [*v].into_iter().collect(),
            SeparatorKind::Edge(u, v) => [*u, *v].into_iter().collect(),
        };
        let rest: BTreeSet<u32> = g.vertices().filter(|v| !s.contains(v)).collect();
        if rest.is_empty() {
            continue;
        }
        // Components of G - S; edges within S stay, edges into S are allowed.
        let comps = g.induced(&rest).components();
        if comps.len() < 2 {
            continue;
        }
        // Split components into two nonempty groups; fix the group holding
        // the least component in V1 to quotient out the V1/V2 swap.
        let k = comps.len();
        for mask in 0u32..(1 << (k - 1)) {
            // Component 0 always goes to V1; mask assigns the rest.
            let mut v1 = BTreeSet::new();
            let mut v2 = BTreeSet::new();
            for (i, comp) in comps.iter().enumerate() {
                let to_v1 = i == 0 || (mask >> (i - 1)) & 1 == 1;
                for &v in comp {
                    if to_v1 {
                        v1.insert(v);
                    } else {
                        v2.insert(v);
                    }
                }
            }
            if v2.is_empty() {
                continue;
            }
            out.push(Decomposition {
                v1,
                separator: sep.clone(),
                v2,
            });
        }
    }
    out
}
