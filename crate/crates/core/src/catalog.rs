//! Named graphs used throughout the tests and the table-reproduction
//! harness.  Vertex labels are 0-based.

use std::collections::BTreeSet;

use crate::graph::Graph;

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            edges.push((u, v));
        }
    }
    Graph::with_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let mut edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n as u32 - 1));
    Graph::with_edges(n, &edges).unwrap()
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect();
    Graph::with_edges(n, &edges).unwrap()
}

/// Star with `n` leaves (center is vertex 0).
pub fn star(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (1..=n as u32).map(|i| (0, i)).collect();
    Graph::with_edges(n + 1, &edges).unwrap()
}

/// Complete bipartite graph; the `m`-side is `0..m`, the `n`-side `m..m+n`.
pub fn complete_bipartite(m: usize, n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..m as u32 {
        for v in 0..n as u32 {
            edges.push((u, m as u32 + v));
        }
    }
    Graph::with_edges(m + n, &edges).unwrap()
}

/// Path on vertices 0-1-2 plus the isolated vertex 3.
pub fn section1_example() -> Graph {
    Graph::with_edges(4, &[(0, 1), (1, 2)]).unwrap()
}

/// Triangular prism: triangles 0-1-2 and 3-4-5 joined by a perfect matching.
pub fn triangular_prism() -> Graph {
    Graph::with_edges(
        6,
        &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
    )
    .unwrap()
}

/// K_4 with one edge subdivided.
pub fn k4_subdivided() -> Graph {
    from_one_based(5, &[(1, 2), (1, 5), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)])
}

/// Edge graph of the square pyramid.
pub fn square_pyramid() -> Graph {
    from_one_based(5, &[(1, 2), (1, 3), (1, 5), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)])
}

/// Edge graph of the bipyramid over a triangle.
pub fn bipyramid() -> Graph {
    from_one_based(
        5,
        &[(1, 2), (1, 3), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
    )
}

pub fn g129() -> Graph {
    from_one_based(6, &[(1, 2), (1, 5), (2, 3), (2, 6), (3, 4), (4, 5), (5, 6)])
}

pub fn g151() -> Graph {
    from_one_based(
        6,
        &[(1, 2), (1, 4), (2, 3), (2, 6), (3, 4), (3, 6), (4, 5), (4, 6)],
    )
}

pub fn g153() -> Graph {
    from_one_based(
        6,
        &[(1, 2), (1, 5), (1, 6), (2, 3), (2, 4), (4, 5), (4, 6), (5, 6)],
    )
}

pub fn g154() -> Graph {
    from_one_based(
        6,
        &[(1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (3, 6), (4, 5), (5, 6)],
    )
}

fn from_one_based(n: usize, edges: &[(u32, u32)]) -> Graph {
    let shifted: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    Graph::with_edges(n, &shifted).unwrap()
}

/// The six irreducible graphs on five vertices.
pub fn irreducible_five_vertex() -> Vec<Graph> {
    vec![
        cycle(5),
        complete_bipartite(2, 3),
        k4_subdivided(),
        square_pyramid(),
        bipyramid(),
        complete(5),
    ]
}

/// Looks up a graph by the name used in the generator-count table.
pub fn by_name(name: &str) -> Option<Graph> {
    Some(match name {
        "K3" => complete(3),
        "C4" => cycle(4),
        "K4" => complete(4),
        "C5" => cycle(5),
        "K23" => complete_bipartite(2, 3),
        "K4sub" => k4_subdivided(),
        "SP" => square_pyramid(),
        "BP" => bipyramid(),
        "K5" => complete(5),
        "C6" => cycle(6),
        "K24" => complete_bipartite(2, 4),
        "G129" => g129(),
        "G151" => g151(),
        "G153" => g153(),
        "G154" => g154(),
        "prism" => triangular_prism(),
        _ => return None,
    })
}

/// An externally certified upper bound on the Markov width, where one is
/// known: 2 for forests, 4 for cycles and K_{2,n} (theorems), and the
/// published widths of the remaining named irreducible graphs on at most
/// six vertices.  `None` means no certified bound; brute force can then
/// only report lower bounds.
pub fn certified_width_bound(g: &Graph) -> Option<usize> {
    if g.is_forest() {
        return Some(2);
    }
    let n = g.vertex_count();
    if g.components().len() == 1 && g.vertices().all(|v| g.degree(v) == 2) {
        return Some(4);
    }
    let form = g.canonical_form().ok()?;
    for m in 1..n {
        if form == complete_bipartite(2, m).canonical_form().ok()? {
            return Some(4);
        }
    }
    // G151 and G153 are absent: their published generator counts do not
    // match their published edge sets (the degree-2 and degree-4 counts
    // belong to two other 8-edge graphs), so the published widths cannot
    // be trusted for the edge sets we use.
    let published: &[(Graph, usize)] = &[
        (complete(4), 6),
        (k4_subdivided(), 6),
        (square_pyramid(), 6),
        (bipyramid(), 6),
        (complete(5), 10),
        (g129(), 4),
        (g154(), 6),
    ];
    for (h, width) in published {
        if h.vertex_count() == n && form == h.canonical_form().ok()? {
            return Some(*width);
        }
    }
    None
}

/// All isomorphism classes of graphs on exactly `n` labeled vertices.
pub fn all_graphs_on(n: usize) -> Vec<Graph> {
    let pairs: Vec<(u32, u32)> = {
        let mut p = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                p.push((u, v));
            }
        }
        p
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(u32, u32)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::with_edges(n, &edges).unwrap();
        if seen.insert(g.canonical_form().unwrap()) {
            out.push(g);
        }
    }
    out
}

/// All isomorphism classes of forests on exactly `n` vertices.
pub fn all_forests_on(n: usize) -> Vec<Graph> {
    all_graphs_on(n).into_iter().filter(|g| g.is_forest()).collect()
}
