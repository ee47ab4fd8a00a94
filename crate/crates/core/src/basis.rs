//! Degree-bounded computation of minimal generators, Markov width, basis
//! verification by fiber connectivity, and a fiber random walk.
//!
//! The engine leans on one fact about graded fibers: assume every fiber of
//! degree below `d` is connected by a move set `M`.  Then a degree-`d`
//! fiber is `M`-connected exactly when it is connected under two edge
//! kinds: tables sharing a cell (the shared cell divides out, reducing to
//! a connected lower fiber), and the plus/minus pair of any `M`-move of
//! degree exactly `d` lying in the fiber.  A move of degree below `d`
//! applied inside the fiber always leaves a shared cell, so nothing else
//! can connect two tables.  This turns per-degree connectivity questions
//! into a single streaming sweep over all degree-`d` tables, without ever
//! materializing move adjacency.
//!
//! The same reduction counts minimal generators: with `lower` a complete
//! generating set below `d`, the fiber graph on lower-degree moves has the
//! same components as the shared-cell graph, and the number of degree-`d`
//! minimal generators is the sum of (components - 1) over degree-`d`
//! fibers.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DisjointSets, Graph};
use crate::model::{
    enumerate_fiber, is_move, marginals_with_layout, MarginalLayout, MarginalVector, Move, Table,
};

/// Number of degree-`d` multisets over `cells` cells.
pub fn multiset_count(cells: usize, d: usize) -> u128 {
    let mut num = 1u128;
    for i in 0..d {
        num = num.saturating_mul((cells + i) as u128);
    }
    let mut den = 1u128;
    for i in 1..=d {
        den *= i as u128;
    }
    num / den
}

/// Memory ceiling for one sweep pass, in record bytes.
const SWEEP_PASS_BYTES: usize = 512 << 20;

fn weight(row: usize) -> u64 {
    // splitmix64 of the row index; only needs to spread fiber keys.
    let mut z = (row as u64).wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

struct Sweep<'a> {
    rows_of_cell: Vec<Vec<u16>>,
    wsum: Vec<u64>,
    key: Vec<u8>,
    cells: Vec<u16>,
    pass: u64,
    passes: u64,
    buf: &'a mut Vec<u8>,
}

impl Sweep<'_> {
    fn run(&mut self, start_cell: usize, remaining: usize, acc: u64) {
        if remaining == 0 {
            if acc % self.passes == self.pass {
                self.buf.extend_from_slice(&self.key);
                for &c in &self.cells {
                    self.buf.extend_from_slice(&c.to_le_bytes());
                }
            }
            return;
        }
        for c in start_cell..self.rows_of_cell.len() {
            for &r in &self.rows_of_cell[c] {
                self.key[r as usize] += 1;
            }
            self.cells.push(c as u16);
            self.run(c, remaining - 1, acc.wrapping_add(self.wsum[c]));
            self.cells.pop();
            for &r in &self.rows_of_cell[c] {
                self.key[r as usize] -= 1;
            }
        }
    }
}

/// Streams every degree-`d` fiber of the model through `handle` as
/// `(marginal key bytes, tables as sorted cell lists)`.  Fibers arrive in
/// no particular order; each fiber arrives exactly once.
fn sweep_fibers(
    layout: &MarginalLayout,
    d: usize,
    budget: u64,
    mut handle: impl FnMut(&[u8], &[Vec<u16>]) -> Result<()>,
) -> Result<u64> {
    let ncells = 1usize << layout.n;
    let total = multiset_count(ncells, d);
    if total > budget as u128 {
        return Err(Error::capability(format!(
            "degree-{d} sweep needs {total} tables, over the budget of {budget}"
        )));
    }
    let key_len = layout.len();
    let rec_size = key_len + 2 * d;
    let passes = ((total * rec_size as u128) / SWEEP_PASS_BYTES as u128 + 1) as u64;
    let rows_of_cell: Vec<Vec<u16>> = (0..ncells)
        .map(|c| {
            layout
                .rows_of_cell(c as u128)
                .into_iter()
                .map(|r| r as u16)
                .collect()
        })
        .collect();
    let wsum: Vec<u64> = rows_of_cell
        .iter()
        .map(|rows| {
            rows.iter()
                .fold(0u64, |a, &r| a.wrapping_add(weight(r as usize)))
        })
        .collect();
    let mut fibers = 0u64;
    let mut buf: Vec<u8> = Vec::new();
    for pass in 0..passes {
        buf.clear();
        let mut sweep = Sweep {
            rows_of_cell: rows_of_cell.clone(),
            wsum: wsum.clone(),
            key: vec![0u8; key_len],
            cells: Vec::with_capacity(d),
            pass,
            passes,
            buf: &mut buf,
        };
        sweep.run(0, d, 0);
        let nrec = buf.len() / rec_size.max(1);
        let mut order: Vec<u32> = (0..nrec as u32).collect();
        let rec = |i: u32| &buf[i as usize * rec_size..(i as usize + 1) * rec_size];
        order.sort_unstable_by(|&a, &b| rec(a).cmp(rec(b)));
        let mut i = 0;
        while i < nrec {
            let key = &rec(order[i] )[..key_len];
            let mut j = i + 1;
            while j < nrec && &rec(order[j])[..key_len] == key {
                j += 1;
            }
            let tables: Vec<Vec<u16>> = order[i..j]
                .iter()
                .map(|&t| {
                    rec(t)[key_len..]
                        .chunks_exact(2)
                        .map(|b| u16::from_le_bytes([b[0], b[1]]))
                        .collect()
                })
                .collect();
            let key_owned = key.to_vec();
            handle(&key_owned, &tables)?;
            fibers += 1;
            i = j;
        }
    }
    Ok(fibers)
}

fn cells_to_table(cells: &[u16]) -> Table {
    Table::from_cells(cells.iter().map(|&c| c as u128).collect())
}

fn table_to_cells(t: &Table) -> Vec<u16> {
    t.cells().iter().map(|&c| c as u16).collect()
}

fn key_of(layout: &MarginalLayout, t: &Table) -> Vec<u8> {
    marginals_with_layout(layout, t)
        .counts
        .iter()
        .map(|&c| c as u8)
        .collect()
}

/// Component labels of the shared-cell graph on a fiber.
fn shared_cell_components(tables: &[Vec<u16>]) -> DisjointSets {
    let mut dsu = DisjointSets::new(tables.len());
    let mut first_with: HashMap<u16, usize> = HashMap::new();
    for (i, t) in tables.iter().enumerate() {
        for &c in t {
            match first_with.get(&c) {
                Some(&j) => {
                    dsu.union(i, j);
                }
                None => {
                    first_with.insert(c, i);
                }
            }
        }
    }
    dsu
}

fn component_groups(tables: &[Vec<u16>], dsu: &mut DisjointSets) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..tables.len() {
        groups.entry(dsu.find(i)).or_default().push(i);
    }
    groups.into_values().collect()
}

/// All degree-`d` tables grouped by their marginal vector.  Prefer the
/// streaming operations for anything large; this materializes everything.
pub fn degree_d_fibers(
    g: &Graph,
    d: usize,
    budget: u64,
) -> Result<BTreeMap<MarginalVector, Vec<Table>>> {
    let layout = MarginalLayout::of(g);
    let mut out = BTreeMap::new();
    sweep_fibers(&layout, d, budget, |key, tables| {
        let mv = MarginalVector {
            counts: key.iter().map(|&b| b as u32).collect(),
        };
        out.insert(mv, tables.iter().map(|t| cells_to_table(t)).collect());
        Ok(())
    })?;
    Ok(out)
}

fn minimal_generators_unchecked(
    layout: &MarginalLayout,
    d: usize,
    budget: u64,
) -> Result<(u64, Vec<Move>)> {
    let mut count = 0u64;
    let mut reps = Vec::new();
    sweep_fibers(layout, d, budget, |_key, tables| {
        if tables.len() < 2 {
            return Ok(());
        }
        let mut dsu = shared_cell_components(tables);
        let groups = component_groups(tables, &mut dsu);
        if groups.len() < 2 {
            return Ok(());
        }
        count += groups.len() as u64 - 1;
        // One representative per missing connection: join each later
        // component to the first via the least table of each.
        let least: Vec<&Vec<u16>> = groups
            .iter()
            .map(|grp| grp.iter().map(|&i| &tables[i]).min().unwrap())
            .collect();
        let mut least: Vec<&Vec<u16>> = least;
        least.sort();
        for other in &least[1..] {
            reps.push(
                Move::new(cells_to_table(other), cells_to_table(least[0])).normalized(),
            );
        }
        Ok(())
    })?;
    reps.sort();
    Ok((count, reps))
}

/// Counts degree-`d` minimal generators and returns one representative
/// move per generator.  `lower` must generate everything below degree `d`;
/// this is verified by auditing every lower fiber first.
pub fn minimal_generators_at_degree(
    g: &Graph,
    d: usize,
    lower: &[Move],
    budget: u64,
) -> Result<(u64, Vec<Move>)> {
    let layout = MarginalLayout::of(g);
    for e in 2..d {
        let audit = audit_degree(&layout, lower, e, budget)?;
        if !audit.disconnected.is_empty() {
            return Err(Error::argument(format!(
                "lower move set leaves a degree-{e} fiber disconnected"
            )));
        }
    }
    minimal_generators_unchecked(&layout, d, budget)
}

/// All minimal binomials of degree `d`: for every degree-`d` fiber, every
/// pair of tables taken from two different components of the fiber under
/// lower-degree moves.  Unlike the spanning representatives in a
/// `BasisReport`, this is the full set of degree-`d` binomials that can
/// appear in some minimal generating set; it is the right comparison
/// target for classification pipelines, which have no way to prefer one
/// spanning choice over another.
pub fn minimal_binomials_at_degree(g: &Graph, d: usize, budget: u64) -> Result<Vec<Move>> {
    let layout = MarginalLayout::of(g);
    let mut out = Vec::new();
    sweep_fibers(&layout, d, budget, |_key, tables| {
        if tables.len() < 2 {
            return Ok(());
        }
        let mut dsu = shared_cell_components(tables);
        let groups = component_groups(tables, &mut dsu);
        for (gi, ga) in groups.iter().enumerate() {
            for gb in &groups[gi + 1..] {
                for &a in ga {
                    for &b in gb {
                        out.push(
                            Move::new(cells_to_table(&tables[a]), cells_to_table(&tables[b]))
                                .normalized(),
                        );
                    }
                }
            }
        }
        Ok(())
    })?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Whether `m` can appear in a minimal generating set: its two tables must
/// lie in different components of their fiber under all lower-degree
/// moves.  Any fiber of degree below `m`'s connects trivially under the
/// binomials of its own degree, so the lower-move components are exactly
/// the shared-cell components.
pub fn is_minimal_binomial(g: &Graph, m: &Move, budget: u64) -> Result<bool> {
    if !is_move(g, m) {
        return Err(Error::argument(format!("not a move for this graph: {m}")));
    }
    let mv = crate::model::marginals_of(g, &m.plus);
    let tables = enumerate_fiber(g, &mv, budget)?;
    let as_cells: Vec<Vec<u16>> = tables.iter().map(table_to_cells).collect();
    let mut dsu = shared_cell_components(&as_cells);
    let plus = table_to_cells(&m.plus);
    let minus = table_to_cells(&m.minus);
    let pi = as_cells.iter().position(|t| *t == plus);
    let mi = as_cells.iter().position(|t| *t == minus);
    match (pi, mi) {
        (Some(p), Some(q)) => Ok(dsu.find(p) != dsu.find(q)),
        _ => Err(Error::argument("move tables missing from their own fiber")),
    }
}

/// Connectivity audit of every degree-`degree` fiber under `moves`,
/// assuming all lower fibers are `moves`-connected.
#[derive(Clone, Debug)]
pub struct DegreeAudit {
    pub degree: usize,
    /// Total fibers seen at this degree.
    pub fibers: u64,
    /// Fibers with more than one table.
    pub nontrivial_fibers: u64,
    /// Witness pairs from disconnected fibers (capped at a handful).
    pub disconnected: Vec<(Table, Table)>,
    pub disconnected_fibers: u64,
}

fn audit_degree(
    layout: &MarginalLayout,
    moves: &[Move],
    degree: usize,
    budget: u64,
) -> Result<DegreeAudit> {
    // Only moves of degree exactly `degree` can connect beyond shared
    // cells; index them by the marginal key of either side.
    let mut exact: HashMap<Vec<u8>, Vec<(Vec<u16>, Vec<u16>)>> = HashMap::new();
    for m in moves {
        if m.degree() == degree {
            exact
                .entry(key_of(layout, &m.plus))
                .or_default()
                .push((table_to_cells(&m.plus), table_to_cells(&m.minus)));
        }
    }
    let mut audit = DegreeAudit {
        degree,
        fibers: 0,
        nontrivial_fibers: 0,
        disconnected: Vec::new(),
        disconnected_fibers: 0,
    };
    audit.fibers = sweep_fibers(layout, degree, budget, |key, tables| {
        if tables.len() < 2 {
            return Ok(());
        }
        audit.nontrivial_fibers += 1;
        let mut dsu = shared_cell_components(tables);
        if let Some(pairs) = exact.get(key) {
            for (plus, minus) in pairs {
                let a = tables.iter().position(|t| t == plus);
                let b = tables.iter().position(|t| t == minus);
                if let (Some(a), Some(b)) = (a, b) {
                    dsu.union(a, b);
                }
            }
        }
        let groups = component_groups(tables, &mut dsu);
        if groups.len() > 1 {
            audit.disconnected_fibers += 1;
            if audit.disconnected.len() < 5 {
                audit.disconnected.push((
                    cells_to_table(&tables[groups[0][0]]),
                    cells_to_table(&tables[groups[1][0]]),
                ));
            }
        }
        Ok(())
    })?;
    Ok(audit)
}

/// Audits every fiber of degree 2..=`dmax` under `moves`, degree by
/// degree.  A clean report certifies `moves` as a Markov basis for all
/// fibers up to `dmax`; witnesses in any degree pinpoint the failure (and
/// make higher-degree rows advisory, since the induction breaks there).
pub fn connectivity_audit(
    g: &Graph,
    moves: &[Move],
    dmax: usize,
    budget: u64,
) -> Result<Vec<DegreeAudit>> {
    let layout = MarginalLayout::of(g);
    (2..=dmax)
        .map(|d| audit_degree(&layout, moves, d, budget))
        .collect()
}

/// Per-degree outcome inside a `BasisReport`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSummary {
    pub count: u64,
    pub representatives: Vec<Move>,
}

/// Markov width as far as the computation certifies it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthStatus {
    Exact(usize),
    AtLeast(usize),
}

impl WidthStatus {
    pub fn value(&self) -> usize {
        match *self {
            WidthStatus::Exact(w) | WidthStatus::AtLeast(w) => w,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, WidthStatus::Exact(_))
    }
}

#[derive(Clone, Debug)]
pub struct BasisReport {
    pub graph: Graph,
    pub per_degree: BTreeMap<usize, DegreeSummary>,
    pub width: WidthStatus,
    /// Set when a degree was skipped for budget reasons; the report covers
    /// only the degrees present in `per_degree`.
    pub partial: Option<String>,
}

impl BasisReport {
    /// All representative moves across degrees.
    pub fn moves(&self) -> Vec<Move> {
        self.per_degree
            .values()
            .flat_map(|s| s.representatives.iter().cloned())
            .collect()
    }
}

/// Computes per-degree minimal generator counts for degrees 2..=`dmax`.
///
/// `dmax_justified` says the caller knows (externally, e.g. from a
/// theorem) that no minimal generator exists above `dmax`; only then is
/// the width reported as exact.
pub fn markov_basis_up_to(
    g: &Graph,
    dmax: usize,
    budget: u64,
    dmax_justified: bool,
) -> Result<BasisReport> {
    let layout = MarginalLayout::of(g);
    let mut per_degree = BTreeMap::new();
    let mut partial = None;
    for d in 2..=dmax {
        match minimal_generators_unchecked(&layout, d, budget) {
            Ok((count, representatives)) => {
                per_degree.insert(
                    d,
                    DegreeSummary {
                        count,
                        representatives,
                    },
                );
            }
            Err(e @ Error::Capability(_)) => {
                partial = Some(format!("degree {d} skipped: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let top = per_degree
        .iter()
        .filter(|(_, s)| s.count > 0)
        .map(|(&d, _)| d)
        .max()
        .unwrap_or(0);
    let width = if dmax_justified && partial.is_none() {
        WidthStatus::Exact(top)
    } else {
        WidthStatus::AtLeast(top)
    };
    Ok(BasisReport {
        graph: g.clone(),
        per_degree,
        width,
        partial,
    })
}

/// Verdict of `verify_markov_basis` on one fiber.
#[derive(Clone, Debug)]
pub enum FiberVerdict {
    Connected { tables: usize },
    Disconnected { left: Table, right: Table },
    Skipped { reason: String },
}

impl FiberVerdict {
    pub fn is_connected(&self) -> bool {
        matches!(self, FiberVerdict::Connected { .. })
    }
}

/// Applies `m` to `t` in the `sign` direction (+1 adds `plus`, removes
/// `minus`).  `None` when the result would go negative.
pub fn apply_move(t: &Table, m: &Move, sign: i8) -> Option<Table> {
    let (add, remove) = if sign >= 0 {
        (&m.plus, &m.minus)
    } else {
        (&m.minus, &m.plus)
    };
    t.minus(remove).map(|rest| rest.plus(add))
}

/// Checks each listed fiber for connectivity under `moves` by direct
/// breadth-first search over the enumerated fiber.
pub fn verify_markov_basis(
    g: &Graph,
    moves: &[Move],
    fibers: &[MarginalVector],
    budget: u64,
) -> Vec<FiberVerdict> {
    fibers
        .iter()
        .map(|mv| {
            let tables = match enumerate_fiber(g, mv, budget) {
                Ok(t) => t,
                Err(e) => {
                    return FiberVerdict::Skipped {
                        reason: e.to_string(),
                    }
                }
            };
            if tables.len() <= 1 {
                return FiberVerdict::Connected {
                    tables: tables.len(),
                };
            }
            let index: BTreeMap<&Table, usize> =
                tables.iter().enumerate().map(|(i, t)| (t, i)).collect();
            let mut seen = vec![false; tables.len()];
            let mut queue = vec![0usize];
            seen[0] = true;
            while let Some(i) = queue.pop() {
                for m in moves {
                    for sign in [1i8, -1] {
                        if let Some(next) = apply_move(&tables[i], m, sign) {
                            if let Some(&j) = index.get(&next) {
                                if !seen[j] {
                                    seen[j] = true;
                                    queue.push(j);
                                }
                            }
                        }
                    }
                }
            }
            match seen.iter().position(|&s| !s) {
                None => FiberVerdict::Connected {
                    tables: tables.len(),
                },
                Some(j) => FiberVerdict::Disconnected {
                    left: tables[0].clone(),
                    right: tables[j].clone(),
                },
            }
        })
        .collect()
}

/// Outcome of a random fiber walk.
#[derive(Clone, Debug)]
pub struct WalkResult {
    pub end: Table,
    pub visited: BTreeMap<Table, u64>,
    pub accepted: u64,
    pub rejected: u64,
}

/// Random walk on the fiber of `start`: each step proposes a uniformly
/// chosen move and direction, rejecting proposals that would go negative.
/// Fully reproducible from the seed.
pub fn random_walk(
    g: &Graph,
    moves: &[Move],
    start: &Table,
    steps: u64,
    seed: u64,
) -> Result<WalkResult> {
    for m in moves {
        if !is_move(g, m) {
            return Err(Error::argument(format!("not a move for this graph: {m}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = start.clone();
    let mut visited = BTreeMap::new();
    *visited.entry(current.clone()).or_insert(0u64) += 1;
    let mut accepted = 0;
    let mut rejected = 0;
    for _ in 0..steps {
        if moves.is_empty() {
            rejected += 1;
            continue;
        }
        let m = &moves[rng.gen_range(0..moves.len())];
        let sign = if rng.gen_bool(0.5) { 1i8 } else { -1 };
        match apply_move(&current, m, sign) {
            Some(next) => {
                accepted += 1;
                current = next;
                *visited.entry(current.clone()).or_insert(0) += 1;
            }
            None => rejected += 1,
        }
    }
    Ok(WalkResult {
        end: current,
        visited,
        accepted,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::model::marginals_of;

    fn counts_up_to(g: &Graph, dmax: usize) -> BTreeMap<usize, u64> {
        let report = markov_basis_up_to(g, dmax, 100_000_000, true).unwrap();
        report
            .per_degree
            .iter()
            .filter(|(_, s)| s.count > 0)
            .map(|(&d, s)| (d, s.count))
            .collect()
    }

    #[test]
    fn k3_fibers_at_low_degree() {
        let k3 = catalog::complete(3);
        let f1 = degree_d_fibers(&k3, 1, 1_000_000).unwrap();
        assert_eq!(f1.len(), 8);
        assert!(f1.values().all(|t| t.len() == 1));

        let f0 = degree_d_fibers(&k3, 0, 1_000_000).unwrap();
        assert_eq!(f0.len(), 1);
        assert_eq!(f0.values().next().unwrap(), &vec![Table::zero()]);

        let f4 = degree_d_fibers(&k3, 4, 1_000_000).unwrap();
        let big: Vec<&Vec<Table>> = f4.values().filter(|t| t.len() >= 2).collect();
        assert_eq!(big.len(), 1);
        assert_eq!(big[0].len(), 2);
    }

    #[test]
    fn k3_has_the_single_quartic() {
        assert_eq!(counts_up_to(&catalog::complete(3), 4), BTreeMap::from([(4, 1)]));
    }

    #[test]
    fn c4_counts() {
        assert_eq!(
            counts_up_to(&catalog::cycle(4), 4),
            BTreeMap::from([(2, 8), (4, 8)])
        );
    }

    #[test]
    fn k4_counts() {
        assert_eq!(
            counts_up_to(&catalog::complete(4), 6),
            BTreeMap::from([(4, 20), (6, 40)])
        );
    }

    #[test]
    fn c5_counts() {
        assert_eq!(
            counts_up_to(&catalog::cycle(5), 4),
            BTreeMap::from([(2, 80), (4, 40)])
        );
    }

    #[test]
    fn k23_counts() {
        assert_eq!(
            counts_up_to(&catalog::complete_bipartite(2, 3), 4),
            BTreeMap::from([(2, 44), (4, 420)])
        );
    }

    #[test]
    fn representatives_are_moves_and_connect() {
        let g = catalog::cycle(4);
        let report = markov_basis_up_to(&g, 4, 10_000_000, true).unwrap();
        let moves = report.moves();
        assert_eq!(moves.len(), 16);
        for m in &moves {
            assert!(is_move(&g, m));
        }
        // With the full set every fiber through degree 5 is connected.
        let audits = connectivity_audit(&g, &moves, 5, 100_000_000).unwrap();
        for a in &audits {
            assert_eq!(a.disconnected_fibers, 0, "degree {}", a.degree);
        }
    }

    #[test]
    fn quadrics_alone_miss_the_c4_quartics() {
        let g = catalog::cycle(4);
        let report = markov_basis_up_to(&g, 2, 10_000_000, false).unwrap();
        let quadrics = report.moves();
        assert_eq!(quadrics.len(), 8);
        let audits = connectivity_audit(&g, &quadrics, 4, 100_000_000).unwrap();
        assert_eq!(audits[0].disconnected_fibers, 0);
        assert!(audits[2].disconnected_fibers > 0);

        // The same failure seen through the direct BFS check.
        let (count, quartics) = minimal_generators_at_degree(&g, 4, &quadrics, 10_000_000).unwrap();
        assert_eq!(count, 8);
        let fiber = marginals_of(&g, &quartics[0].plus);
        let verdicts = verify_markov_basis(&g, &quadrics, &[fiber.clone()], 1_000_000);
        assert!(matches!(verdicts[0], FiberVerdict::Disconnected { .. }));
        let mut full = quadrics.clone();
        full.extend(quartics.iter().cloned());
        let verdicts = verify_markov_basis(&g, &full, &[fiber], 1_000_000);
        assert!(verdicts[0].is_connected());
    }

    #[test]
    fn incomplete_lower_set_is_detected() {
        let g = catalog::cycle(4);
        // Degree-4 count with no quadrics at all must be rejected.
        assert!(minimal_generators_at_degree(&g, 4, &[], 10_000_000).is_err());
    }

    #[test]
    fn width_status_flags() {
        let r = markov_basis_up_to(&catalog::cycle(5), 4, 10_000_000, true).unwrap();
        assert_eq!(r.width, WidthStatus::Exact(4));
        let r = markov_basis_up_to(&catalog::cycle(5), 4, 10_000_000, false).unwrap();
        assert_eq!(r.width, WidthStatus::AtLeast(4));
    }

    #[test]
    fn budget_exhaustion_yields_partial_report() {
        let r = markov_basis_up_to(&catalog::cycle(5), 6, 10_000, true).unwrap();
        assert!(r.partial.is_some());
        assert!(!r.width.is_exact());
    }

    #[test]
    fn walk_on_the_k3_quartic_fiber() {
        let k3 = catalog::complete(3);
        let report = markov_basis_up_to(&k3, 4, 1_000_000, true).unwrap();
        let moves = report.moves();
        assert_eq!(moves.len(), 1);
        let start = moves[0].plus.clone();
        let walk = random_walk(&k3, &moves, &start, 100, 7).unwrap();
        assert_eq!(walk.visited.len(), 2);
        for t in walk.visited.keys() {
            assert_eq!(marginals_of(&k3, t), marginals_of(&k3, &start));
        }
    }

    #[test]
    fn walk_without_moves_stays_put() {
        let k3 = catalog::complete(3);
        let start = Table::from_cells(vec![0, 7]);
        let walk = random_walk(&k3, &[], &start, 50, 1).unwrap();
        assert_eq!(walk.end, start);
        assert_eq!(walk.visited.len(), 1);
        assert_eq!(walk.rejected, 50);
    }

    #[test]
    fn walk_is_reproducible_and_covers_small_fibers() {
        let c4 = catalog::cycle(4);
        let report = markov_basis_up_to(&c4, 4, 10_000_000, true).unwrap();
        let moves = report.moves();
        let start = Table::from_cells(vec![0b0000, 0b0101, 0b1010]);
        let fiber = enumerate_fiber(&c4, &marginals_of(&c4, &start), 10_000_000).unwrap();
        let walk = random_walk(&c4, &moves, &start, 10_000, 42).unwrap();
        let visited: Vec<&Table> = walk.visited.keys().collect();
        assert_eq!(visited.len(), fiber.len());
        let again = random_walk(&c4, &moves, &start, 10_000, 42).unwrap();
        assert_eq!(again.end, walk.end);
        assert_eq!(again.visited, walk.visited);
    }
}
