//! The marginal map of a binary graph model: tables, marginal vectors,
//! moves, the 0/1 matrix representing the map, fiber enumeration, and the
//! polytope dimension/facet checks.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest vertex count for which we materialize all `2^n` cells.
pub const CELL_VERTEX_CAP: usize = 12;

/// Bit of `cell` at vertex position `idx` (0 = leftmost character of the
/// index string), for a model on `n` vertices.
#[inline]
pub fn cell_bit(cell: u128, idx: usize, n: usize) -> u32 {
    ((cell >> (n - 1 - idx)) & 1) as u32
}

/// Renders a cell as its index string, e.g. `0110`.
pub fn cell_string(cell: u128, n: usize) -> String {
    (0..n)
        .map(|i| if cell_bit(cell, i, n) == 1 { '1' } else { '0' })
        .collect()
}

/// Parses an index string back into a cell.
pub fn parse_cell(s: &str) -> Result<(u128, usize)> {
    let mut cell = 0u128;
    let mut n = 0;
    for c in s.chars() {
        cell = (cell << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::argument(format!("bad index string {s:?}"))),
            };
        n += 1;
    }
    if n == 0 || n > 128 {
        return Err(Error::argument(format!("bad index string length {n}")));
    }
    Ok((cell, n))
}

/// A nonnegative integer table over the `2^n` cells of a binary model,
/// stored as a sorted multiset of cells.  The multiset length is the
/// table's degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    cells: Vec<u128>,
}

impl Table {
    pub fn zero() -> Table {
        Table { cells: Vec::new() }
    }

    pub fn from_cells(mut cells: Vec<u128>) -> Table {
        cells.sort_unstable();
        Table { cells }
    }

    pub fn from_counts(counts: &BTreeMap<u128, u32>) -> Table {
        let mut cells = Vec::new();
        for (&cell, &count) in counts {
            for _ in 0..count {
                cells.push(cell);
            }
        }
        Table { cells }
    }

    pub fn degree(&self) -> usize {
        self.cells.len()
    }

    /// Cells with multiplicity, sorted.
    pub fn cells(&self) -> &[u128] {
        &self.cells
    }

    pub fn counts(&self) -> BTreeMap<u128, u32> {
        let mut out = BTreeMap::new();
        for &c in &self.cells {
            *out.entry(c).or_insert(0) += 1;
        }
        out
    }

    pub fn count(&self, cell: u128) -> u32 {
        self.cells.iter().filter(|&&c| c == cell).count() as u32
    }

    pub fn support(&self) -> Vec<u128> {
        let mut s = self.cells.clone();
        s.dedup();
        s
    }

    pub fn supports_disjoint(&self, other: &Table) -> bool {
        let (a, b) = (&self.cells, &other.cells);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Whether `other` is contained in `self` as a multiset.
    pub fn contains(&self, other: &Table) -> bool {
        let (a, b) = (&self.cells, &other.cells);
        let mut i = 0;
        for &x in b {
            while i < a.len() && a[i] < x {
                i += 1;
            }
            if i == a.len() || a[i] != x {
                return false;
            }
            i += 1;
        }
        true
    }

    /// Multiset sum.
    pub fn plus(&self, other: &Table) -> Table {
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        cells.sort_unstable();
        Table { cells }
    }

    /// Multiset difference; requires `other ⊆ self`.
    pub fn minus(&self, other: &Table) -> Option<Table> {
        let mut cells = Vec::with_capacity(self.cells.len());
        let mut j = 0;
        for &x in &self.cells {
            if j < other.cells.len() && other.cells[j] == x {
                j += 1;
            } else {
                cells.push(x);
            }
        }
        if j == other.cells.len() {
            Some(Table { cells })
        } else {
            None
        }
    }

    /// Multiset intersection.
    pub fn intersect(&self, other: &Table) -> Table {
        let (a, b) = (&self.cells, &other.cells);
        let mut cells = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    cells.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Table { cells }
    }
}

/// Fixed row layout of the marginal map for one graph: one 4-cell block
/// per edge (sorted edge order, cells 00,01,10,11) followed by one 2-cell
/// block per isolated vertex (sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalLayout {
    pub n: usize,
    /// Vertex positions (not labels) of each edge, sorted by label pair.
    pub edge_positions: Vec<(usize, usize)>,
    /// Vertex positions of each isolated vertex.
    pub isolated_positions: Vec<usize>,
}

impl MarginalLayout {
    pub fn of(g: &Graph) -> MarginalLayout {
        let verts = g.vertex_list();
        let pos: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edge_positions = g
            .edge_list()
            .iter()
            .map(|&(u, v)| (pos[&u], pos[&v]))
            .collect();
        let isolated_positions = g.isolated_vertices().iter().map(|v| pos[v]).collect();
        MarginalLayout {
            n: verts.len(),
            edge_positions,
            isolated_positions,
        }
    }

    /// Number of marginal coordinates (rows of the matrix).
    pub fn len(&self) -> usize {
        4 * self.edge_positions.len() + 2 * self.isolated_positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row indices hit by a cell: exactly one per edge block and one per
    /// isolated-vertex block.
    pub fn rows_of_cell(&self, cell: u128) -> Vec<usize> {
        let mut rows = Vec::with_capacity(self.edge_positions.len() + self.isolated_positions.len());
        for (b, &(i, j)) in self.edge_positions.iter().enumerate() {
            let off = 2 * cell_bit(cell, i, self.n) + cell_bit(cell, j, self.n);
            rows.push(4 * b + off as usize);
        }
        let base = 4 * self.edge_positions.len();
        for (b, &i) in self.isolated_positions.iter().enumerate() {
            rows.push(base + 2 * b + cell_bit(cell, i, self.n) as usize);
        }
        rows
    }
}

/// The image of a table under the marginal map, in layout order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarginalVector {
    pub counts: Vec<u32>,
}

impl MarginalVector {
    pub fn zero(layout: &MarginalLayout) -> MarginalVector {
        MarginalVector {
            counts: vec![0; layout.len()],
        }
    }

    /// The common block total, i.e. the degree of any preimage table.
    /// `None` when the blocks disagree (not in the image of any table).
    pub fn degree(&self, layout: &MarginalLayout) -> Option<usize> {
        let mut blocks = Vec::new();
        for b in 0..layout.edge_positions.len() {
            blocks.push(self.counts[4 * b..4 * b + 4].iter().sum::<u32>());
        }
        let base = 4 * layout.edge_positions.len();
        for b in 0..layout.isolated_positions.len() {
            blocks.push(self.counts[base + 2 * b..base + 2 * b + 2].iter().sum::<u32>());
        }
        match blocks.first() {
            None => Some(0),
            Some(&d) if blocks.iter().all(|&x| x == d) => Some(d as usize),
            _ => None,
        }
    }

    pub fn add_assign(&mut self, other: &MarginalVector) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Marginals of a table with respect to `g`.
pub fn marginals_of(g: &Graph, t: &Table) -> MarginalVector {
    let layout = MarginalLayout::of(g);
    marginals_with_layout(&layout, t)
}

pub fn marginals_with_layout(layout: &MarginalLayout, t: &Table) -> MarginalVector {
    let mut mv = MarginalVector::zero(layout);
    for &cell in t.cells() {
        for row in layout.rows_of_cell(cell) {
            mv.counts[row] += 1;
        }
    }
    mv
}

/// An ordered pair of tables with disjoint support; `is_move` checks the
/// remaining invariants (equal marginals, nonzero).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub plus: Table,
    pub minus: Table,
}

impl Move {
    pub fn new(plus: Table, minus: Table) -> Move {
        Move { plus, minus }
    }

    pub fn degree(&self) -> usize {
        self.plus.degree()
    }

    /// The same move with sides swapped.
    pub fn flipped(&self) -> Move {
        Move {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    /// Side-order-normalized copy: the lexicographically smaller table
    /// first.  A binomial and its negation name the same ideal element.
    pub fn normalized(&self) -> Move {
        if self.minus < self.plus {
            self.flipped()
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} - {:?}", self.plus.cells(), self.minus.cells())
    }
}

/// Whether `m` is a valid move for `g`: disjoint supports, equal nonzero
/// degree, equal marginals.
pub fn is_move(g: &Graph, m: &Move) -> bool {
    if m.plus.degree() == 0 || m.plus.degree() != m.minus.degree() {
        return false;
    }
    if !m.plus.supports_disjoint(&m.minus) {
        return false;
    }
    let layout = MarginalLayout::of(g);
    marginals_with_layout(&layout, &m.plus) == marginals_with_layout(&layout, &m.minus)
}

/// The 0/1 matrix of the marginal map.  Rows follow `MarginalLayout`;
/// columns are cells in binary-number order.
pub fn marginal_matrix(g: &Graph) -> Result<Vec<Vec<u8>>> {
    let n = g.vertex_count();
    if n > CELL_VERTEX_CAP {
        return Err(Error::capability(format!(
            "marginal matrix materializes 2^n columns, capped at n = {CELL_VERTEX_CAP}"
        )));
    }
    let layout = MarginalLayout::of(g);
    let mut rows = vec![vec![0u8; 1 << n]; layout.len()];
    for cell in 0..(1u128 << n) {
        for row in layout.rows_of_cell(cell) {
            rows[row][cell as usize] = 1;
        }
    }
    Ok(rows)
}

/// Rank of an integer matrix by fraction-free Gaussian elimination.
pub fn integer_rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut prev_pivot: i128 = 1;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot_row) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col];
        for r in rank + 1..nrows {
            let factor = m[r][col];
            for c in col..ncols {
                m[r][c] = (m[r][c] * pivot - factor * m[rank][c]) / prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

/// Dimension of the model polytope: `rank(A_G) - 1`.
pub fn polytope_dimension(g: &Graph) -> Result<usize> {
    let m = marginal_matrix(g)?;
    Ok(integer_rank(&m) - 1)
}

/// Verifies that the coordinate hyperplane of the given marginal row is a
/// facet of the model polytope: the columns vanishing on the row must
/// affinely span dimension `dim - 1`.  Only claimed for forests.
pub fn claimed_facet_is_facet(g: &Graph, row: usize) -> Result<bool> {
    if !g.is_forest() {
        return Err(Error::capability(
            "facet check is only validated for forests",
        ));
    }
    let m = marginal_matrix(g)?;
    if row >= m.len() {
        return Err(Error::argument(format!("row {row} out of range")));
    }
    let dim = integer_rank(&m) - 1;
    let ncols = m[0].len();
    let selected: Vec<usize> = (0..ncols).filter(|&c| m[row][c] == 0).collect();
    if selected.is_empty() {
        return Ok(false);
    }
    let sub: Vec<Vec<u8>> = m
        .iter()
        .map(|r| selected.iter().map(|&c| r[c]).collect())
        .collect();
    // Columns all share the same coordinate sum, so affine dimension is
    // rank - 1.
    Ok(integer_rank(&sub) - 1 == dim - 1)
}

/// All nonnegative integer tables with the given marginals, in sorted
/// order.  `node_budget` bounds the number of search-tree nodes.
pub fn enumerate_fiber(g: &Graph, mv: &MarginalVector, node_budget: u64) -> Result<Vec<Table>> {
    let n = g.vertex_count();
    if n > CELL_VERTEX_CAP {
        return Err(Error::capability(format!(
            "fiber enumeration materializes 2^n cells, capped at n = {CELL_VERTEX_CAP}"
        )));
    }
    let layout = MarginalLayout::of(g);
    if mv.counts.len() != layout.len() {
        return Err(Error::argument(format!(
            "marginal vector has {} coordinates, expected {}",
            mv.counts.len(),
            layout.len()
        )));
    }
    let Some(total) = mv.degree(&layout) else {
        return Ok(Vec::new()); // inconsistent block totals: empty fiber
    };
    let ncells = 1usize << n;
    let cell_rows: Vec<Vec<usize>> = (0..ncells)
        .map(|c| layout.rows_of_cell(c as u128))
        .collect();
    // For pruning: the last cell (in enumeration order) hitting each row.
    let mut last_cell = vec![0usize; layout.len().max(1)];
    for c in 0..ncells {
        for &r in &cell_rows[c] {
            last_cell[r] = c;
        }
    }
    let mut remaining = mv.counts.clone();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let mut nodes = 0u64;
    search_fiber(
        &cell_rows,
        &last_cell,
        0,
        total,
        &mut remaining,
        &mut stack,
        &mut out,
        &mut nodes,
        node_budget,
    )?;
    out.sort_unstable();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search_fiber(
    cell_rows: &[Vec<usize>],
    last_cell: &[usize],
    cell: usize,
    remaining_degree: usize,
    remaining: &mut [u32],
    stack: &mut Vec<u128>,
    out: &mut Vec<Table>,
    nodes: &mut u64,
    budget: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::Budget {
            what: "fiber enumeration".into(),
            budget,
            produced: out.len() as u64,
        });
    }
    if remaining_degree == 0 {
        if remaining.iter().all(|&x| x == 0) {
            out.push(Table::from_cells(stack.clone()));
        }
        return Ok(());
    }
    if cell == cell_rows.len() {
        return Ok(());
    }
    // Any still-positive row that no later cell can hit kills this branch.
    for (r, &lc) in last_cell.iter().enumerate() {
        if lc < cell && remaining[r] > 0 {
            return Ok(());
        }
    }
    let cap = cell_rows[cell]
        .iter()
        .map(|&r| remaining[r])
        .min()
        .unwrap_or(remaining_degree as u32)
        .min(remaining_degree as u32);
    for count in (0..=cap).rev() {
        for &r in &cell_rows[cell] {
            remaining[r] -= count;
        }
        for _ in 0..count {
            stack.push(cell as u128);
        }
        search_fiber(
            cell_rows,
            last_cell,
            cell + 1,
            remaining_degree - count as usize,
            remaining,
            stack,
            out,
            nodes,
            budget,
        )?;
        for _ in 0..count {
            stack.pop();
        }
        for &r in &cell_rows[cell] {
            remaining[r] += count;
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::catalog;

    fn table(cells: &[&str]) -> Table {
        Table::from_cells(cells.iter().map(|s| parse_cell(s).unwrap().0).collect())
    }

    /// The K_3 quartic: the unique element of its Markov basis.
    pub fn k3_quartic() -> Move {
        Move::new(
            table(&["000", "011", "101", "110"]),
            table(&["001", "010", "100", "111"]),
        )
    }

    #[test]
    fn section1_matrix_is_reproduced_exactly() {
        let g = catalog::section1_example();
        let m = marginal_matrix(&g).unwrap();
        let expected: [[u8; 16]; 10] = [
            [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
            [1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
            [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0],
            [0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1],
            [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0],
            [0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
        ];
        assert_eq!(m.len(), 10);
        for (row, exp) in m.iter().zip(expected.iter()) {
            assert_eq!(row.as_slice(), exp.as_slice());
        }
    }

    #[test]
    fn single_isolated_vertex_matrix_is_identity() {
        let g = Graph::empty(1);
        assert_eq!(marginal_matrix(&g).unwrap(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn column_sums_count_blocks() {
        for g in [catalog::cycle(4), catalog::section1_example(), catalog::complete(4)] {
            let m = marginal_matrix(&g).unwrap();
            let expected = g.edge_count() + g.isolated_vertices().len();
            for c in 0..m[0].len() {
                let sum: u32 = m.iter().map(|r| r[c] as u32).sum();
                assert_eq!(sum as usize, expected);
            }
        }
    }

    #[test]
    fn marginals_match_matrix_column() {
        let g = catalog::section1_example();
        let m = marginal_matrix(&g).unwrap();
        let t = Table::from_cells(vec![0]);
        let mv = marginals_of(&g, &t);
        let col: Vec<u32> = m.iter().map(|r| r[0] as u32).collect();
        assert_eq!(mv.counts, col);
    }

    #[test]
    fn marginals_are_linear() {
        let g = catalog::cycle(4);
        let t1 = table(&["0000", "0101", "1100"]);
        let t2 = table(&["1111", "0010"]);
        let mut sum = marginals_of(&g, &t1);
        sum.add_assign(&marginals_of(&g, &t2));
        assert_eq!(marginals_of(&g, &t1.plus(&t2)), sum);
        assert_eq!(
            marginals_of(&g, &Table::zero()),
            MarginalVector::zero(&MarginalLayout::of(&g))
        );
    }

    #[test]
    fn is_move_examples() {
        let k3 = catalog::complete(3);
        assert!(is_move(&k3, &k3_quartic()));

        let c4 = catalog::cycle(4);
        let quad = Move::new(table(&["0000", "0101"]), table(&["0001", "0100"]));
        assert!(is_move(&c4, &quad));

        let bad = Move::new(table(&["0000", "0101"]), table(&["0001", "0111"]));
        assert!(!is_move(&c4, &bad));
        // Overlapping support is rejected even with equal marginals.
        let overlap = Move::new(table(&["0000"]), table(&["0000"]));
        assert!(!is_move(&c4, &overlap));
    }

    #[test]
    fn quartic_fiber_has_exactly_two_tables() {
        let k3 = catalog::complete(3);
        let q = k3_quartic();
        let mv = marginals_of(&k3, &q.plus);
        let fiber = enumerate_fiber(&k3, &mv, 1_000_000).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(fiber.contains(&q.plus));
        assert!(fiber.contains(&q.minus));
    }

    #[test]
    fn zero_marginal_fiber_is_zero_table() {
        let g = catalog::cycle(4);
        let layout = MarginalLayout::of(&g);
        let fiber = enumerate_fiber(&g, &MarginalVector::zero(&layout), 1_000).unwrap();
        assert_eq!(fiber, vec![Table::zero()]);
    }

    #[test]
    fn single_cell_fiber_is_unique_when_every_vertex_is_covered() {
        let g = catalog::cycle(5);
        for cell in [0u128, 7, 21, 31] {
            let t = Table::from_cells(vec![cell]);
            let fiber = enumerate_fiber(&g, &marginals_of(&g, &t), 100_000).unwrap();
            assert_eq!(fiber, vec![t]);
        }
    }

    #[test]
    fn fiber_members_reproduce_the_marginals() {
        let c4 = catalog::cycle(4);
        let t = table(&["0000", "0101", "1010", "1111"]);
        let mv = marginals_of(&c4, &t);
        let fiber = enumerate_fiber(&c4, &mv, 1_000_000).unwrap();
        assert!(fiber.contains(&t));
        for member in &fiber {
            assert_eq!(marginals_of(&c4, member), mv);
        }
    }

    #[test]
    fn polytope_dimensions() {
        assert_eq!(polytope_dimension(&catalog::section1_example()).unwrap(), 6);
        assert_eq!(polytope_dimension(&catalog::path(2)).unwrap(), 3);
    }

    #[test]
    fn rank_is_vertices_plus_edges_plus_one() {
        for g in [
            catalog::section1_example(),
            catalog::cycle(4),
            catalog::complete(4),
            catalog::path(5),
            catalog::complete_bipartite(2, 3),
        ] {
            let m = marginal_matrix(&g).unwrap();
            assert_eq!(integer_rank(&m), g.vertex_count() + g.edge_count() + 1);
        }
    }

    #[test]
    fn section1_facets_all_pass() {
        let g = catalog::section1_example();
        for row in 0..10 {
            assert!(claimed_facet_is_facet(&g, row).unwrap(), "row {row}");
        }
    }

    #[test]
    fn facet_check_rejects_non_forests() {
        assert!(claimed_facet_is_facet(&catalog::cycle(4), 0).is_err());
    }
}
