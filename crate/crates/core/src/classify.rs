//! Structural classification of low-degree minimal generators: the
//! fundamental graph X_d and its distinguished generator, degree-2
//! classes from vertex partitions, degree-3 generators from 3-rigid
//! minors and coloring components, the general degree-d pullback
//! pipeline, and move canonicalization under the model's symmetry group.

use std::collections::{BTreeSet, HashSet};

use crate::basis::is_minimal_binomial;
use crate::error::{Error, Result};
use crate::graph::{enumerate_minor_effects, Graph, MinorTrace};
use crate::model::{is_move, Move, Table};

/// A vertex (S, T) of the fundamental graph X_d: equal-cardinality
/// nonempty subsets of {1..d}, stored as bitmasks over bits 0..d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FundamentalVertex {
    pub s: u32,
    pub t: u32,
}

/// Largest degree for which the fundamental graph is materialized.
pub const FUNDAMENTAL_DEGREE_CAP: usize = 6;

/// The fundamental graph X_d together with its vertex labels, in the
/// order used for graph vertex ids.
///
/// (S, T) ranges over pairs with 1 <= |S| = |T| <= d/2, and 1 in S when
/// |S| = d/2.  Empty S is excluded: a generator column with no 1s on
/// either side is a constant column, already removed by vertex deletion
/// before the map to X_d is taken, and the printed vertex counts (2 for
/// X_2, 34 for X_4) confirm the exclusion.
pub fn fundamental_graph(d: usize) -> Result<(Graph, Vec<FundamentalVertex>)> {
    if !(2..=FUNDAMENTAL_DEGREE_CAP).contains(&d) {
        return Err(Error::capability(format!(
            "fundamental graph supported for degrees 2..={FUNDAMENTAL_DEGREE_CAP}, got {d}"
        )));
    }
    let mut labels = Vec::new();
    for s in 1u32..(1 << d) {
        let k = s.count_ones() as usize;
        if 2 * k > d {
            continue;
        }
        if 2 * k == d && s & 1 == 0 {
            continue;
        }
        for t in 1u32..(1 << d) {
            if t.count_ones() as usize == k {
                labels.push(FundamentalVertex { s, t });
            }
        }
    }
    labels.sort();
    let mut g = Graph::empty(labels.len());
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            let (a, b) = (labels[i], labels[j]);
            if (a.s & b.s).count_ones() == (a.t & b.t).count_ones() {
                g.add_edge(i as u32, j as u32)?;
            }
        }
    }
    Ok((g, labels))
}

/// The distinguished generator f_d on X_d: row j of the plus tableau has
/// a 1 at vertex (S, T) exactly when j is in S, and the minus tableau
/// uses T.  Capped where X_d's cells still fit the table representation
/// (X_6 has 461 vertices).
pub fn distinguished_generator(d: usize) -> Result<Move> {
    let (graph, labels) = fundamental_graph(d)?;
    let n = graph.vertex_count();
    if n > 128 {
        return Err(Error::capability(format!(
            "X_{d} has {n} vertices; its cells exceed the 128-bit table representation"
        )));
    }
    let row = |member: fn(&FundamentalVertex) -> u32, j: usize| -> u128 {
        let mut cell = 0u128;
        for (i, v) in labels.iter().enumerate() {
            if member(v) >> (j - 1) & 1 == 1 {
                cell |= 1 << (n - 1 - i);
            }
        }
        cell
    };
    let plus = Table::from_cells((1..=d).map(|j| row(|v| v.s, j)).collect());
    let minus = Table::from_cells((1..=d).map(|j| row(|v| v.t, j)).collect());
    Ok(Move::new(plus, minus))
}

/// One equivalence class of degree-2 generators: a partition of the
/// vertices into V1, V2, V3 with V1 and V2 nonempty and no edges between
/// them, plus the printed representative move.
#[derive(Clone, Debug)]
pub struct Degree2Class {
    pub v1: BTreeSet<u32>,
    pub v2: BTreeSet<u32>,
    pub v3: BTreeSet<u32>,
    pub representative: Move,
}

fn cell_from_bits(on: &BTreeSet<u32>, verts: &[u32]) -> u128 {
    let n = verts.len();
    let mut cell = 0u128;
    for (idx, v) in verts.iter().enumerate() {
        if on.contains(v) {
            cell |= 1 << (n - 1 - idx);
        }
    }
    cell
}

/// All degree-2 classes of `g`, one per unordered valid partition.
pub fn degree2_classes(g: &Graph) -> Vec<Degree2Class> {
    let verts = g.vertex_list();
    let n = verts.len();
    let mut out = Vec::new();
    // Assign each vertex to V1 (0), V2 (1), or V3 (2); quotient the
    // V1/V2 swap by forcing the least non-V3 vertex into V1.
    let mut assign = vec![0u8; n];
    loop {
        'check: {
            let mut v1 = BTreeSet::new();
            let mut v2 = BTreeSet::new();
            let mut v3 = BTreeSet::new();
            for (i, &a) in assign.iter().enumerate() {
                match a {
                    0 => v1.insert(verts[i]),
                    1 => v2.insert(verts[i]),
                    _ => v3.insert(verts[i]),
                };
            }
            if v1.is_empty() || v2.is_empty() {
                break 'check;
            }
            if v2.iter().next() < v1.iter().next() {
                break 'check;
            }
            for &a in &v1 {
                for &b in &v2 {
                    if g.has_edge(a, b) {
                        break 'check;
                    }
                }
            }
            // Rows of the printed class representative: V1/V3 high in one
            // row, V2/V3 high in the other, against V1 V2 V3 all high and
            // V3 alone high.
            let u1: BTreeSet<u32> = v1.union(&v3).copied().collect();
            let u2: BTreeSet<u32> = v2.union(&v3).copied().collect();
            let all: BTreeSet<u32> = u1.union(&v2).copied().collect();
            let plus = Table::from_cells(vec![
                cell_from_bits(&u1, &verts),
                cell_from_bits(&u2, &verts),
            ]);
            let minus = Table::from_cells(vec![
                cell_from_bits(&all, &verts),
                cell_from_bits(&v3, &verts),
            ]);
            out.push(Degree2Class {
                v1,
                v2,
                v3,
                representative: Move::new(plus, minus).normalized(),
            });
        }
        // Next assignment in base 3.
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            assign[i] += 1;
            if assign[i] < 3 {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

/// Expands a degree-2 class into all raw moves it stands for: choices of
/// an unordered pair of distinct strings on V1, likewise on V2, and an
/// arbitrary shared string on V3.
pub fn expand_degree2_class(g: &Graph, class: &Degree2Class) -> Vec<Move> {
    let verts = g.vertex_list();
    let pos: Vec<usize> = (0..verts.len()).collect();
    let _ = pos;
    let spread = |set: &BTreeSet<u32>, bits: u32| -> BTreeSet<u32> {
        set.iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    };
    let n1 = class.v1.len();
    let n2 = class.v2.len();
    let n3 = class.v3.len();
    let mut out = Vec::new();
    for a in 0u32..(1 << n1) {
        for a2 in (a + 1)..(1 << n1) {
            for b in 0u32..(1 << n2) {
                for b2 in (b + 1)..(1 << n2) {
                    for c in 0u32..(1 << n3) {
                        let sa = spread(&class.v1, a);
                        let sa2 = spread(&class.v1, a2);
                        let sb = spread(&class.v2, b);
                        let sb2 = spread(&class.v2, b2);
                        let sc = spread(&class.v3, c);
                        let cell = |x: &BTreeSet<u32>, y: &BTreeSet<u32>| {
                            let mut on: BTreeSet<u32> = x.union(y).copied().collect();
                            on.extend(sc.iter().copied());
                            cell_from_bits(&on, &verts)
                        };
                        let plus =
                            Table::from_cells(vec![cell(&sa, &sb), cell(&sa2, &sb2)]);
                        let minus =
                            Table::from_cells(vec![cell(&sa, &sb2), cell(&sa2, &sb)]);
                        out.push(Move::new(plus, minus).normalized());
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Vertex cap for proper-3-coloring enumeration.
pub const COLORING_VERTEX_CAP: usize = 10;

/// One component of the 3-coloring graph C_3(G).
#[derive(Clone, Debug)]
pub struct ColoringComponent {
    /// First proper coloring of the component in enumeration order, as
    /// colors 0..3 per vertex position.
    pub representative: Vec<u8>,
    pub size: usize,
}

fn proper_colorings(g: &Graph) -> Vec<Vec<u8>> {
    let verts = g.vertex_list();
    let n = verts.len();
    let mut adj = vec![Vec::new(); n];
    for (i, &u) in verts.iter().enumerate() {
        for (j, &v) in verts.iter().enumerate() {
            if j < i && g.has_edge(u, v) {
                adj[i].push(j);
            }
        }
    }
    let mut out = Vec::new();
    let mut colors = vec![0u8; n];
    fn rec(i: usize, adj: &[Vec<usize>], colors: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == colors.len() {
            out.push(colors.clone());
            return;
        }
        for c in 0..3u8 {
            if adj[i].iter().all(|&j| colors[j] != c) {
                colors[i] = c;
                rec(i + 1, adj, colors, out);
            }
        }
    }
    rec(0, &adj, &mut colors, &mut out);
    out
}

/// Components of the 3-coloring graph under the two-color component swap
/// move.  A graph with no proper 3-coloring yields no components.
pub fn coloring_graph_components(g: &Graph) -> Result<Vec<ColoringComponent>> {
    let n = g.vertex_count();
    if n > COLORING_VERTEX_CAP {
        return Err(Error::capability(format!(
            "3-coloring enumeration capped at {COLORING_VERTEX_CAP} vertices (got {n})"
        )));
    }
    let verts = g.vertex_list();
    let colorings = proper_colorings(g);
    let index: std::collections::BTreeMap<&Vec<u8>, usize> =
        colorings.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut dsu = crate::graph::DisjointSets::new(colorings.len());
    for (i, coloring) in colorings.iter().enumerate() {
        for avoid in 0..3u8 {
            // Components of the subgraph on vertices not colored `avoid`.
            let keep: BTreeSet<u32> = verts
                .iter()
                .enumerate()
                .filter(|(k, _)| coloring[*k] != avoid)
                .map(|(_, &v)| v)
                .collect();
            for comp in g.induced(&keep).components() {
                let mut swapped = coloring.clone();
                for (k, &v) in verts.iter().enumerate() {
                    if comp.contains(&v) {
                        swapped[k] = 3 - avoid - swapped[k];
                    }
                }
                dsu.union(i, index[&swapped]);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, ColoringComponent> =
        std::collections::BTreeMap::new();
    for (i, coloring) in colorings.iter().enumerate() {
        let root = dsu.find(i);
        groups
            .entry(root)
            .or_insert_with(|| ColoringComponent {
                representative: coloring.clone(),
                size: 0,
            })
            .size += 1;
    }
    Ok(groups.into_values().collect())
}

/// Whether C_3(G) is disconnected.  Graphs with no proper 3-coloring are
/// vacuously not 3-rigid: the degree-3 construction needs two colorings.
pub fn is_3rigid(g: &Graph) -> Result<bool> {
    Ok(coloring_graph_components(g)?.len() >= 2)
}

/// How a classified generator candidate was produced.
#[derive(Clone, Debug)]
pub enum Provenance {
    /// Composite assignment of each vertex position of G to an X_d vertex
    /// index, or `None` for deleted.
    Pullback { degree: usize, assignment: Vec<Option<usize>> },
    Degree2 {
        v1: BTreeSet<u32>,
        v2: BTreeSet<u32>,
        v3: BTreeSet<u32>,
    },
    /// A 3-rigid minor plus two colorings from distinct components of its
    /// coloring graph, possibly composed with an index flip.
    ColoringPair {
        minor: Graph,
        left: Vec<u8>,
        right: Vec<u8>,
        flip: u128,
    },
}

/// A classified generator candidate.
#[derive(Clone, Debug)]
pub struct GeneratorCandidate {
    pub mv: Move,
    pub provenance: Provenance,
    /// Certified against the fiber-component test; `None` when the check
    /// was not run.
    pub minimal: Option<bool>,
}

fn flip_table(t: &Table, mask: u128) -> Table {
    Table::from_cells(t.cells().iter().map(|&c| c ^ mask).collect())
}

fn flip_move(m: &Move, mask: u128) -> Move {
    Move::new(flip_table(&m.plus, mask), flip_table(&m.minus, mask)).normalized()
}

fn coloring_move(g: &Graph, trace: &MinorTrace, left: &[u8], right: &[u8]) -> Move {
    let verts = g.vertex_list();
    let n = verts.len();
    let minor_verts = trace.result.vertex_list();
    let minor_pos = |v: u32| minor_verts.iter().position(|&w| w == v).unwrap();
    let row = |colors: &[u8], j: u8| -> u128 {
        let mut cell = 0u128;
        for (idx, v) in verts.iter().enumerate() {
            let on = match trace.vertex_map[v] {
                None => true, // deleted vertices carry a constant 1 column
                Some(w) => colors[minor_pos(w)] == j,
            };
            if on {
                cell |= 1 << (n - 1 - idx);
            }
        }
        cell
    };
    let plus = Table::from_cells((0..3).map(|j| row(left, j)).collect());
    let minus = Table::from_cells((0..3).map(|j| row(right, j)).collect());
    Move::new(plus, minus)
}

/// All raw degree-3 minimal generators of `g`, built from 3-rigid minors
/// and cross-component coloring pairs, closed under index flips.  Each
/// candidate is certified against the brute-force fiber test when
/// `certify` is set.
pub fn degree3_generators(g: &Graph, certify: bool, budget: u64) -> Result<Vec<GeneratorCandidate>> {
    let n = g.vertex_count();
    let mut seen: HashSet<Move> = HashSet::new();
    let mut out = Vec::new();
    for trace in enumerate_minor_effects(g) {
        let comps = coloring_graph_components(&trace.result)?;
        if comps.len() < 2 {
            continue;
        }
        let colorings = proper_colorings(&trace.result);
        let index: std::collections::BTreeMap<&Vec<u8>, usize> =
            colorings.iter().enumerate().map(|(i, c)| (c, i)).collect();
        // Component label per coloring, via the same swap union-find.
        let mut label = vec![0usize; colorings.len()];
        let mut dsu = crate::graph::DisjointSets::new(colorings.len());
        {
            let verts = trace.result.vertex_list();
            for (i, coloring) in colorings.iter().enumerate() {
                for avoid in 0..3u8 {
                    let keep: BTreeSet<u32> = verts
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| coloring[*k] != avoid)
                        .map(|(_, &v)| v)
                        .collect();
                    for comp in trace.result.induced(&keep).components() {
                        let mut swapped = coloring.clone();
                        for (k, &v) in verts.iter().enumerate() {
                            if comp.contains(&v) {
                                swapped[k] = 3 - avoid - swapped[k];
                            }
                        }
                        dsu.union(i, index[&swapped]);
                    }
                }
            }
            for (i, l) in label.iter_mut().enumerate() {
                *l = dsu.find(i);
            }
        }
        for (i, left) in colorings.iter().enumerate() {
            for (j, right) in colorings.iter().enumerate() {
                if i >= j || label[i] == label[j] {
                    continue;
                }
                let base = coloring_move(g, &trace, left, right);
                if !is_move(g, &base) {
                    continue;
                }
                for mask in 0u128..(1 << n) {
                    let m = flip_move(&base, mask);
                    if seen.insert(m.clone()) {
                        let minimal = if certify {
                            Some(is_minimal_binomial(g, &m, budget)?)
                        } else {
                            None
                        };
                        out.push(GeneratorCandidate {
                            mv: m,
                            provenance: Provenance::ColoringPair {
                                minor: trace.result.clone(),
                                left: left.clone(),
                                right: right.clone(),
                                flip: mask,
                            },
                            minimal,
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.mv.cmp(&b.mv));
    Ok(out)
}

/// All adjacency-preserving vertex maps from `g` into `h`, as position
/// maps.  Truncates (second return) once `budget` maps are collected.
pub fn homomorphisms(g: &Graph, h: &Graph, budget: usize) -> Result<(Vec<Vec<u32>>, bool)> {
    let gverts = g.vertex_list();
    let hverts = h.vertex_list();
    let n = gverts.len();
    let mut out = Vec::new();
    let mut truncated = false;
    let mut image = vec![0u32; n];
    fn rec(
        i: usize,
        g: &Graph,
        gverts: &[u32],
        h: &Graph,
        hverts: &[u32],
        image: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        budget: usize,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        if i == gverts.len() {
            if out.len() == budget {
                *truncated = true;
            } else {
                out.push(image.clone());
            }
            return;
        }
        'target: for (hi, &hv) in hverts.iter().enumerate() {
            for j in 0..i {
                if g.has_edge(gverts[i], gverts[j])
                    && !h.has_edge(hv, hverts[image[j] as usize])
                {
                    continue 'target;
                }
            }
            image[i] = hi as u32;
            rec(i + 1, g, gverts, h, hverts, image, out, budget, truncated);
        }
    }
    rec(
        0, g, &gverts, h, &hverts, &mut image, &mut out, budget, &mut truncated,
    );
    Ok((out, truncated))
}

/// The degree-`d` pullback pipeline: enumerate composite assignments of
/// each vertex of `g` to an X_d vertex or deletion (the composition of a
/// minor map with a homomorphism into X_d), pull the distinguished
/// generator back along each, and certify the distinct results against
/// the fiber test.  The certified set contains every degree-`d` minimal
/// generator.
pub fn pullback_candidates(g: &Graph, d: usize, budget: u64) -> Result<Vec<GeneratorCandidate>> {
    let (xd, labels) = fundamental_graph(d)?;
    let n = g.vertex_count();
    let verts = g.vertex_list();
    let xadj: Vec<Vec<bool>> = (0..labels.len())
        .map(|i| {
            (0..labels.len())
                .map(|j| xd.has_edge(i as u32, j as u32))
                .collect()
        })
        .collect();
    let mut seen: HashSet<Move> = HashSet::new();
    let mut out = Vec::new();
    // assignment[i]: None deleted, Some(x) maps to X_d vertex x.
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut stack = vec![0usize; n]; // option counter per depth
    let options = labels.len() + 1;
    let mut depth = 0;
    loop {
        if depth == n {
            emit_pullback(
                g, &verts, d, &labels, &assignment, &mut seen, &mut out, budget,
            )?;
            depth -= 1;
            loop {
                stack[depth] += 1;
                if stack[depth] < options {
                    break;
                }
                stack[depth] = 0;
                if depth == 0 {
                    out.sort_by(|a, b| a.mv.cmp(&b.mv));
                    return Ok(out);
                }
                depth -= 1;
            }
        }
        // Interpret stack[depth]: 0 = deleted, k+1 = X_d vertex k.
        let choice = stack[depth];
        assignment[depth] = if choice == 0 { None } else { Some(choice - 1) };
        // Edge constraints against earlier vertices.
        let ok = match assignment[depth] {
            None => true,
            Some(x) => (0..depth).all(|j| {
                !g.has_edge(verts[depth], verts[j])
                    || match assignment[j] {
                        None => true,
                        Some(y) => x == y || xadj[x][y],
                    }
            }),
        };
        if ok {
            depth += 1;
        } else {
            loop {
                stack[depth] += 1;
                if stack[depth] < options {
                    break;
                }
                stack[depth] = 0;
                if depth == 0 {
                    out.sort_by(|a, b| a.mv.cmp(&b.mv));
                    return Ok(out);
                }
                depth -= 1;
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn emit_pullback(
    g: &Graph,
    verts: &[u32],
    d: usize,
    labels: &[FundamentalVertex],
    assignment: &[Option<usize>],
    seen: &mut HashSet<Move>,
    out: &mut Vec<GeneratorCandidate>,
    budget: u64,
) -> Result<()> {
    let n = verts.len();
    let row = |member: fn(&FundamentalVertex) -> u32, j: usize| -> u128 {
        let mut cell = 0u128;
        for (idx, a) in assignment.iter().enumerate() {
            if let Some(x) = a {
                if member(&labels[*x]) >> (j - 1) & 1 == 1 {
                    cell |= 1 << (n - 1 - idx);
                }
            }
        }
        cell
    };
    let plus = Table::from_cells((1..=d).map(|j| row(|v| v.s, j)).collect());
    let minus = Table::from_cells((1..=d).map(|j| row(|v| v.t, j)).collect());
    if !plus.supports_disjoint(&minus) {
        return Ok(()); // shared cells divide out; not a degree-d generator
    }
    let m = Move::new(plus, minus).normalized();
    debug_assert!(is_move(g, &m));
    if seen.insert(m.clone()) {
        let minimal = Some(is_minimal_binomial(g, &m, budget)?);
        out.push(GeneratorCandidate {
            mv: m,
            provenance: Provenance::Pullback {
                degree: d,
                assignment: assignment.to_vec(),
            },
            minimal,
        });
    }
    Ok(())
}

/// The canonical representative of `m`'s orbit under bit flips, graph
/// automorphisms, and the plus/minus side swap: the minimum move over the
/// whole orbit.
pub fn canonicalize_move(g: &Graph, m: &Move) -> Result<Move> {
    if !is_move(g, m) {
        return Err(Error::argument(format!("not a move for this graph: {m}")));
    }
    let n = g.vertex_count();
    let auts = g.automorphisms()?;
    let mut best: Option<Move> = None;
    for aut in &auts {
        let permute = |cell: u128| -> u128 {
            let mut out = 0u128;
            for (i, &pi) in aut.iter().enumerate() {
                if cell >> (n - 1 - i) & 1 == 1 {
                    out |= 1 << (n - 1 - pi as usize);
                }
            }
            out
        };
        let plus = Table::from_cells(m.plus.cells().iter().map(|&c| permute(c)).collect());
        let minus = Table::from_cells(m.minus.cells().iter().map(|&c| permute(c)).collect());
        let permuted = Move::new(plus, minus);
        for mask in 0u128..(1 << n) {
            let candidate = flip_move(&permuted, mask);
            if best.as_ref().map_or(true, |b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{minimal_binomials_at_degree, markov_basis_up_to};
    use crate::catalog;
    use crate::model::parse_cell;

    #[test]
    fn fundamental_graph_sizes() {
        let (x2, l2) = fundamental_graph(2).unwrap();
        assert_eq!(l2.len(), 2);
        assert_eq!(x2.edge_count(), 0);

        let (x3, l3) = fundamental_graph(3).unwrap();
        assert_eq!(l3.len(), 9);
        for v in x3.vertices() {
            assert_eq!(x3.degree(v), 4);
        }
        // (i,j) adjacent to (k,l) iff i != k and j != l.
        for (i, a) in l3.iter().enumerate() {
            for (j, b) in l3.iter().enumerate() {
                if i < j {
                    let expect = a.s != b.s && a.t != b.t;
                    assert_eq!(x3.has_edge(i as u32, j as u32), expect);
                }
            }
        }

        let (_, l4) = fundamental_graph(4).unwrap();
        assert_eq!(l4.len(), 34);
        let (_, l5) = fundamental_graph(5).unwrap();
        assert_eq!(l5.len(), 125);
    }

    #[test]
    fn distinguished_generators_are_moves() {
        for d in 2..=5 {
            let (xd, _) = fundamental_graph(d).unwrap();
            let fd = distinguished_generator(d).unwrap();
            assert_eq!(fd.degree(), d);
            assert!(is_move(&xd, &fd), "f_{d} not in the kernel");
        }
    }

    #[test]
    fn f2_is_the_determinant() {
        let f2 = distinguished_generator(2).unwrap();
        let cell = |s: &str| parse_cell(s).unwrap().0;
        assert_eq!(f2.plus.cells(), &[cell("00"), cell("11")]);
        assert_eq!(f2.minus.cells(), &[cell("01"), cell("10")]);
    }

    #[test]
    fn f3_matches_the_printed_tableau() {
        // Labels sort as (1,1),(1,2),(1,3),(2,1),...,(3,3); row j of the
        // plus side is 1 exactly on the (j,*) block, row j of the minus
        // side on the (*,j) positions.
        let f3 = distinguished_generator(3).unwrap();
        let cell = |s: &str| parse_cell(s).unwrap().0;
        assert_eq!(
            f3.plus.cells(),
            &[cell("000000111"), cell("000111000"), cell("111000000")]
        );
        assert_eq!(
            f3.minus.cells(),
            &[cell("001001001"), cell("010010010"), cell("100100100")]
        );
    }

    #[test]
    fn degree2_classes_examples() {
        assert!(degree2_classes(&catalog::complete(4)).is_empty());

        let c4 = catalog::cycle(4);
        let classes = degree2_classes(&c4);
        assert_eq!(classes.len(), 2);
        for cl in &classes {
            assert!(is_move(&c4, &cl.representative));
        }
        let mut expanded: Vec<Move> = classes
            .iter()
            .flat_map(|cl| expand_degree2_class(&c4, cl))
            .collect();
        expanded.sort();
        expanded.dedup();
        assert_eq!(expanded, minimal_binomials_at_degree(&c4, 2, 1_000_000).unwrap());
    }

    #[test]
    fn degree2_expansion_matches_brute_force_on_small_graphs() {
        for g in [
            catalog::section1_example(),
            catalog::cycle(5),
            catalog::complete_bipartite(2, 3),
            catalog::path(4),
        ] {
            let mut expanded: Vec<Move> = degree2_classes(&g)
                .iter()
                .flat_map(|cl| expand_degree2_class(&g, cl))
                .collect();
            expanded.sort();
            expanded.dedup();
            assert_eq!(
                expanded,
                minimal_binomials_at_degree(&g, 2, 10_000_000).unwrap(),
                "graph {:?}",
                g
            );
        }
    }

    #[test]
    fn coloring_components_examples() {
        let k3 = catalog::complete(3);
        let comps = coloring_graph_components(&k3).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].size, 6);
        assert!(!is_3rigid(&k3).unwrap());

        for tree in [catalog::path(4), catalog::star(3)] {
            assert_eq!(coloring_graph_components(&tree).unwrap().len(), 1);
        }

        let prism = catalog::triangular_prism();
        let comps = coloring_graph_components(&prism).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(is_3rigid(&prism).unwrap());

        // K_4 has no proper 3-coloring at all.
        assert!(coloring_graph_components(&catalog::complete(4))
            .unwrap()
            .is_empty());
        assert!(!is_3rigid(&catalog::complete(4)).unwrap());
    }

    #[test]
    fn no_cubics_on_small_complete_graphs_and_cycles() {
        for g in [
            catalog::complete(3),
            catalog::complete(4),
            catalog::cycle(4),
            catalog::cycle(5),
        ] {
            assert!(degree3_generators(&g, false, 0).unwrap().is_empty());
        }
    }

    #[test]
    fn prism_cubics_match_brute_force() {
        let prism = catalog::triangular_prism();
        let cands = degree3_generators(&prism, true, 50_000_000).unwrap();
        let mut minimal: Vec<Move> = cands
            .iter()
            .filter(|c| c.minimal == Some(true))
            .map(|c| c.mv.clone())
            .collect();
        minimal.sort();
        minimal.dedup();
        let brute = minimal_binomials_at_degree(&prism, 3, 50_000_000).unwrap();
        assert!(!brute.is_empty());
        assert_eq!(minimal, brute);
    }

    #[test]
    fn pullbacks_on_k3_find_exactly_the_quartic() {
        let k3 = catalog::complete(3);
        let cands = pullback_candidates(&k3, 4, 1_000_000).unwrap();
        let minimal: Vec<&GeneratorCandidate> =
            cands.iter().filter(|c| c.minimal == Some(true)).collect();
        let mut canon: Vec<Move> = minimal
            .iter()
            .map(|c| canonicalize_move(&k3, &c.mv).unwrap())
            .collect();
        canon.sort();
        canon.dedup();
        let brute = minimal_binomials_at_degree(&k3, 4, 1_000_000).unwrap();
        assert_eq!(brute.len(), 1);
        assert_eq!(canon, vec![canonicalize_move(&k3, &brute[0]).unwrap()]);
    }

    #[test]
    fn pullbacks_on_c5_at_degree_3_are_empty_after_filtering() {
        let c5 = catalog::cycle(5);
        let cands = pullback_candidates(&c5, 3, 10_000_000).unwrap();
        assert!(cands.iter().all(|c| c.minimal == Some(false)));
    }

    #[test]
    fn k3_homomorphisms_into_x3_are_triangles() {
        let k3 = catalog::complete(3);
        let (x3, _) = fundamental_graph(3).unwrap();
        let (maps, truncated) = homomorphisms(&k3, &x3, 100_000).unwrap();
        assert!(!truncated);
        assert!(!maps.is_empty());
        for map in &maps {
            for i in 0..3 {
                for j in i + 1..3 {
                    assert!(x3.has_edge(map[i], map[j]));
                }
            }
        }
    }

    #[test]
    fn canonicalize_is_idempotent_and_orbit_invariant() {
        let c4 = catalog::cycle(4);
        let report = markov_basis_up_to(&c4, 4, 10_000_000, true).unwrap();
        for m in report.moves() {
            let canon = canonicalize_move(&c4, &m).unwrap();
            assert_eq!(canonicalize_move(&c4, &canon).unwrap(), canon);
            // Every flip of the move canonicalizes identically.
            for mask in 0..16u128 {
                let flipped = flip_move(&m, mask);
                assert_eq!(canonicalize_move(&c4, &flipped).unwrap(), canon);
            }
        }
    }

    #[test]
    fn k3_quartic_is_nearly_orbit_fixed() {
        let k3 = catalog::complete(3);
        let brute = minimal_binomials_at_degree(&k3, 4, 1_000_000).unwrap();
        let q = &brute[0];
        // The orbit of the quartic under flips and automorphisms is the
        // quartic itself (up to side swap): canonicalization returns the
        // normalized move unchanged.
        assert_eq!(canonicalize_move(&k3, q).unwrap(), q.normalized());
    }
}
