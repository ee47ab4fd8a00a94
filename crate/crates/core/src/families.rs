//! Explicit generator families for cycles and complete bipartite graphs:
//! the quartic tableau family of C_n, reduction certificates showing
//! degree-(2,4) generation for C_n and K_{2,n}, and the high-degree
//! witness binomials for K_m and K_{m,n}.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::basis::minimal_binomials_at_degree;
use crate::catalog;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{enumerate_fiber, is_move, marginals_of, Move, Table};

/// The degree-4 minimal generators of C_n: all instantiations of the
/// 4-row block tableau.  Columns in cyclic order are a block V_1, a
/// single vertex x_1, a block V_2, and a single vertex x_2; rows of the
/// plus table read (A_i, 1, B, 1), (A_i, 1, 1-B, 0), (A_i, 0, 1-B, 1),
/// (A_i, 0, B, 0), and the minus table swaps B with 1-B.
pub fn cycle_quartics(n: usize) -> Result<Vec<Move>> {
    if n < 3 {
        return Err(Error::argument(format!("cycle length must be >= 3, got {n}")));
    }
    let g = catalog::cycle(n);
    let mut candidates: HashSet<Move> = HashSet::new();
    for x1 in 0..n {
        for x2 in 0..n {
            if x1 == x2 {
                continue;
            }
            // Walk the cycle from x2: V_1 up to x1, then V_2 up to x2.
            let v1: Vec<usize> = (1..n)
                .map(|k| (x2 + k) % n)
                .take_while(|&v| v != x1)
                .collect();
            let v2: Vec<usize> = (1..n)
                .map(|k| (x1 + k) % n)
                .take_while(|&v| v != x2)
                .collect();
            let (l1, l2) = (v1.len(), v2.len());
            let bit = |cell: &mut u128, vertex: usize, on: bool| {
                if on {
                    *cell |= 1 << (n - 1 - vertex);
                }
            };
            for a in 0u64..(1 << (4 * l1)) {
                for b in 0u32..(1 << l2) {
                    let row = |i: usize, x1_on: bool, b_flip: bool, x2_on: bool| -> u128 {
                        let mut cell = 0u128;
                        for (k, &v) in v1.iter().enumerate() {
                            bit(&mut cell, v, a >> (i * l1 + k) & 1 == 1);
                        }
                        bit(&mut cell, x1, x1_on);
                        for (k, &v) in v2.iter().enumerate() {
                            bit(&mut cell, v, (b >> k & 1 == 1) != b_flip);
                        }
                        bit(&mut cell, x2, x2_on);
                        cell
                    };
                    let side = |flip: bool| {
                        Table::from_cells(vec![
                            row(0, true, flip, true),
                            row(1, true, !flip, false),
                            row(2, false, !flip, true),
                            row(3, false, flip, false),
                        ])
                    };
                    let m = Move::new(side(false), side(true));
                    // Arbitrary A_i and B also instantiate non-minimal
                    // elements (constant columns reduce to a smaller
                    // cycle); keep exactly the minimal ones.
                    if is_move(&g, &m) {
                        candidates.insert(m.normalized());
                    }
                }
            }
        }
    }
    let mut moves = Vec::new();
    for m in candidates {
        if crate::basis::is_minimal_binomial(&g, &m, 50_000_000)? {
            moves.push(m);
        }
    }
    moves.sort();
    Ok(moves)
}

/// A replayable walk between two tables of one fiber, using only moves
/// of degree at most 4.
#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    pub start: Table,
    pub end: Table,
    /// Moves applied in order; sign +1 adds `plus` and removes `minus`,
    /// sign -1 the reverse.
    pub path: Vec<(Move, i8)>,
}

impl ReductionCertificate {
    /// Replays the path on `g`, checking every invariant: each move is a
    /// valid move of degree <= 4, every intermediate table stays
    /// nonnegative, and the walk ends at `end`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut t = self.start.clone();
        for (i, (m, sign)) in self.path.iter().enumerate() {
            if m.degree() > 4 || !is_move(g, m) {
                return Err(Error::argument(format!("step {i} is not a valid move")));
            }
            let (add, sub) = if *sign >= 0 {
                (&m.plus, &m.minus)
            } else {
                (&m.minus, &m.plus)
            };
            t = match t.minus(sub) {
                Some(rest) => rest.plus(add),
                None => {
                    return Err(Error::argument(format!(
                        "step {i} drives an entry negative"
                    )))
                }
            };
        }
        if t != self.end {
            return Err(Error::argument("path does not reach the end table"));
        }
        Ok(())
    }
}

fn check_same_fiber(g: &Graph, t1: &Table, t2: &Table) -> Result<()> {
    if marginals_of(g, t1) != marginals_of(g, t2) {
        return Err(Error::argument("tables lie in different fibers"));
    }
    Ok(())
}

/// Applies `m` with `sign` to `t`, or `None` if an entry would go
/// negative.
fn step(t: &Table, m: &Move, sign: i8) -> Option<Table> {
    let (add, sub) = if sign >= 0 { (&m.plus, &m.minus) } else { (&m.minus, &m.plus) };
    t.minus(sub).map(|rest| rest.plus(add))
}

/// Shared reduction driver.  `neighbors` lists the applicable
/// (move, sign, result) steps from a table.  The walk is built by
/// induction on degree: search from `t1` until some table shares a cell
/// with `t2`, divide the shared cell out of both sides, and recurse; the
/// lower-degree path replays verbatim at full degree.
fn reduce_with<F>(g: &Graph, t1: &Table, t2: &Table, neighbors: &F) -> Result<ReductionCertificate>
where
    F: Fn(&Table) -> Vec<(Move, i8, Table)>,
{
    check_same_fiber(g, t1, t2)?;
    let mut path = Vec::new();
    let mut a = t1.clone();
    let b = t2.clone();
    loop {
        if a == b {
            break;
        }
        // Breadth-first search from `a` for a table agreeing with `b` on
        // strictly more cells; `b` itself qualifies, so connectivity of
        // the fiber under the move set guarantees progress.
        let goal_gain = a.intersect(&b).degree();
        let mut seen: HashSet<Table> = HashSet::new();
        let mut parent: HashMap<Table, (Table, Move, i8)> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(a.clone());
        queue.push_back(a.clone());
        let mut found: Option<Table> = None;
        while let Some(t) = queue.pop_front() {
            if t.intersect(&b).degree() > goal_gain {
                found = Some(t);
                break;
            }
            for (m, sign, next) in neighbors(&t) {
                if seen.insert(next.clone()) {
                    parent.insert(next.clone(), (t.clone(), m, sign));
                    queue.push_back(next);
                }
            }
        }
        let found = found.ok_or_else(|| {
            Error::argument("no degree <= 4 walk increases agreement; fiber not connected")
        })?;
        // Unwind the parent chain into path order.
        let mut chain = Vec::new();
        let mut cur = found.clone();
        while cur != a {
            let (prev, m, sign) = parent[&cur].clone();
            chain.push((m, sign));
            cur = prev;
        }
        chain.reverse();
        path.extend(chain);
        a = found;
    }
    let cert = ReductionCertificate {
        start: t1.clone(),
        end: t2.clone(),
        path,
    };
    cert.validate(g)?;
    Ok(cert)
}

/// Connects two tables of one C_n fiber using only degree-2 generators
/// and members of the quartic family.
pub fn cycle_reduce(n: usize, t1: &Table, t2: &Table) -> Result<ReductionCertificate> {
    let g = catalog::cycle(n);
    let mut moves = minimal_binomials_at_degree(&g, 2, 10_000_000)?;
    moves.extend(cycle_quartics(n)?);
    let neighbors = move |t: &Table| -> Vec<(Move, i8, Table)> {
        let mut out = Vec::new();
        for m in &moves {
            for sign in [1i8, -1] {
                if let Some(next) = step(t, m, sign) {
                    out.push((m.clone(), sign, next));
                }
            }
        }
        out
    };
    reduce_with(&g, t1, t2, &neighbors)
}

/// Sub-multisets of `t` with exactly `k` cells.
fn sub_multisets(t: &Table, k: usize) -> Vec<Table> {
    let cells = t.cells();
    let mut out = HashSet::new();
    let mut pick = Vec::new();
    fn rec(
        cells: &[u128],
        i: usize,
        k: usize,
        pick: &mut Vec<u128>,
        out: &mut HashSet<Table>,
    ) {
        if pick.len() == k {
            out.insert(Table::from_cells(pick.clone()));
            return;
        }
        if i == cells.len() || cells.len() - i < k - pick.len() {
            return;
        }
        pick.push(cells[i]);
        rec(cells, i + 1, k, pick, out);
        pick.pop();
        rec(cells, i + 1, k, pick, out);
    }
    rec(cells, 0, k, &mut pick, &mut out);
    out.into_iter().collect()
}

/// Connects two tables of one K_{2,n} fiber using degree-2 and degree-4
/// moves generated on the fly: replace a 2- or 4-cell sub-multiset by
/// any other table with the same marginals.
pub fn k2n_reduce(n: usize, t1: &Table, t2: &Table) -> Result<ReductionCertificate> {
    let g = catalog::complete_bipartite(2, n);
    let g2 = g.clone();
    let neighbors = move |t: &Table| -> Vec<(Move, i8, Table)> {
        let mut out = Vec::new();
        for k in [2usize, 4] {
            if t.degree() < k {
                continue;
            }
            for sub in sub_multisets(t, k) {
                let rest = t.minus(&sub).unwrap();
                let mv = marginals_of(&g2, &sub);
                let Ok(fiber) = enumerate_fiber(&g2, &mv, 2_000_000) else {
                    continue;
                };
                for repl in fiber {
                    if repl == sub {
                        continue;
                    }
                    let shared = repl.intersect(&sub);
                    let m = Move::new(
                        repl.minus(&shared).unwrap(),
                        sub.minus(&shared).unwrap(),
                    );
                    if m.plus.degree() == 0 || !is_move(&g2, &m) {
                        continue;
                    }
                    out.push((m.clone(), 1, rest.plus(&repl)));
                }
            }
        }
        out
    };
    reduce_with(&g, t1, t2, &neighbors)
}

/// The degree-(2m-2) witness binomial on K_m:
/// p_0^{m-2} prod_i p_{1-e_i}  -  p_1^{m-2} prod_i p_{e_i}.
pub fn km_witness(m: usize) -> Result<Move> {
    if m < 3 {
        return Err(Error::argument(format!("km_witness needs m >= 3, got {m}")));
    }
    if m > crate::model::CELL_VERTEX_CAP {
        return Err(Error::capability(format!(
            "km_witness capped at {} vertices",
            crate::model::CELL_VERTEX_CAP
        )));
    }
    let ones: u128 = (1 << m) - 1;
    let mut plus = vec![0u128; m - 2];
    let mut minus = vec![ones; m - 2];
    for i in 0..m {
        let e_i = 1u128 << (m - 1 - i);
        plus.push(ones ^ e_i);
        minus.push(e_i);
    }
    Ok(Move::new(Table::from_cells(plus), Table::from_cells(minus)))
}

/// The K_{m,N} witness of degree 2^{m-1}, with N = C(m,2) * 2^{m-2}
/// w-vertices indexed by strings I in {0,1,2}^m having exactly two 1s.
/// The plus (resp. minus) table has one cell per even-weight (resp.
/// odd-weight) v-string s, with w_I set exactly when s matches I's fixed
/// pattern (s_j = 1 where I_j = 2, s_j = 0 where I_j = 0).
pub fn kmn_witness(m: usize) -> Result<(Graph, Move)> {
    if m < 2 {
        return Err(Error::argument(format!("kmn_witness needs m >= 2, got {m}")));
    }
    if m > 4 {
        return Err(Error::capability(format!(
            "kmn_witness capped at m <= 4 by the 128-bit cell width, got {m}"
        )));
    }
    let mut indices: Vec<Vec<u8>> = Vec::new();
    let mut stack = vec![0u8; m];
    fn gen(i: usize, stack: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == stack.len() {
            if stack.iter().filter(|&&x| x == 1).count() == 2 {
                out.push(stack.clone());
            }
            return;
        }
        for x in 0..3u8 {
            stack[i] = x;
            gen(i + 1, stack, out);
        }
    }
    gen(0, &mut stack, &mut indices);
    indices.sort();
    let n_w = indices.len();
    let g = catalog::complete_bipartite(m, n_w);
    let width = m + n_w;
    let cell_of = |s: u32| -> u128 {
        let mut cell = 0u128;
        for j in 0..m {
            if s >> (m - 1 - j) & 1 == 1 {
                cell |= 1 << (width - 1 - j);
            }
        }
        for (k, i) in indices.iter().enumerate() {
            let matches = (0..m).all(|j| match i[j] {
                0 => s >> (m - 1 - j) & 1 == 0,
                2 => s >> (m - 1 - j) & 1 == 1,
                _ => true,
            });
            if matches {
                cell |= 1 << (width - 1 - m - k);
            }
        }
        cell
    };
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for s in 0u32..(1 << m) {
        if s.count_ones() % 2 == 0 {
            plus.push(cell_of(s));
        } else {
            minus.push(cell_of(s));
        }
    }
    Ok((g, Move::new(Table::from_cells(plus), Table::from_cells(minus))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn quartic_counts_match_the_table() {
        assert_eq!(cycle_quartics(4).unwrap().len(), 8);
        assert_eq!(cycle_quartics(5).unwrap().len(), 40);
        assert_eq!(cycle_quartics(6).unwrap().len(), 160);
    }

    #[test]
    fn quartics_are_exactly_the_degree4_minimal_binomials() {
        for n in [3usize, 4, 5] {
            let quartics = cycle_quartics(n).unwrap();
            let brute = minimal_binomials_at_degree(&catalog::cycle(n), 4, 20_000_000).unwrap();
            assert_eq!(quartics, brute, "n = {n}");
        }
    }

    #[test]
    fn c3_quartic_is_the_k3_quartic() {
        let quartics = cycle_quartics(3).unwrap();
        assert_eq!(quartics, vec![crate::model::tests::k3_quartic().normalized()]);
    }

    #[test]
    fn cycle_reduce_trivial_and_single_step() {
        let g = catalog::cycle(4);
        let quartic = &cycle_quartics(4).unwrap()[0];
        let cert = cycle_reduce(4, &quartic.plus, &quartic.plus).unwrap();
        assert!(cert.path.is_empty());
        let cert = cycle_reduce(4, &quartic.plus, &quartic.minus).unwrap();
        assert_eq!(cert.path.len(), 1);
        cert.validate(&g).unwrap();
    }

    fn random_fiber_pairs(
        g: &Graph,
        dmax: usize,
        pairs_wanted: usize,
        seed: u64,
    ) -> Vec<(Table, Table)> {
        let layout = crate::model::MarginalLayout::of(g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        let fibers = crate::basis::degree_d_fibers(g, dmax, 200_000_000).unwrap();
        let _ = layout;
        let multi: Vec<&Vec<Table>> = fibers.values().filter(|ts| ts.len() >= 2).collect();
        while out.len() < pairs_wanted {
            let fiber = multi.choose(&mut rng).unwrap();
            let t1 = fiber.choose(&mut rng).unwrap();
            let t2 = fiber.choose(&mut rng).unwrap();
            out.push(((*t1).clone(), (*t2).clone()));
        }
        out
    }

    #[test]
    fn cycle_reduce_random_pairs_on_c5() {
        let g = catalog::cycle(5);
        for (t1, t2) in random_fiber_pairs(&g, 5, 40, 7) {
            let cert = cycle_reduce(5, &t1, &t2).unwrap();
            cert.validate(&g).unwrap();
        }
    }

    #[test]
    fn k2n_reduce_random_pairs_on_k23() {
        let g = catalog::complete_bipartite(2, 3);
        for (t1, t2) in random_fiber_pairs(&g, 4, 25, 11) {
            let cert = k2n_reduce(3, &t1, &t2).unwrap();
            cert.validate(&g).unwrap();
        }
    }

    #[test]
    fn reduce_rejects_cross_fiber_pairs() {
        let q = crate::model::tests::k3_quartic();
        let other = Table::from_cells(vec![0, 0, 0, 0]);
        assert!(cycle_reduce(3, &q.plus, &other).is_err());
    }

    #[test]
    fn km_witness_examples() {
        let w3 = km_witness(3).unwrap();
        assert_eq!(w3.normalized(), crate::model::tests::k3_quartic().normalized());

        let w4 = km_witness(4).unwrap();
        assert_eq!(w4.degree(), 6);
        let k4 = catalog::complete(4);
        assert!(is_move(&k4, &w4));
        // The witness fiber has exactly the two tables of the move.
        let fiber = enumerate_fiber(&k4, &marginals_of(&k4, &w4.plus), 10_000_000).unwrap();
        assert_eq!(fiber.len(), 2);

        let w5 = km_witness(5).unwrap();
        assert_eq!(w5.degree(), 8);
        assert!(is_move(&catalog::complete(5), &w5));

        assert!(km_witness(2).is_err());
    }

    #[test]
    fn kmn_witness_examples() {
        let (g2, w2) = kmn_witness(2).unwrap();
        assert_eq!(g2.vertex_count(), 3);
        assert_eq!(w2.degree(), 2);
        assert!(is_move(&g2, &w2));

        let (g3, w3) = kmn_witness(3).unwrap();
        assert_eq!(g3.vertex_count(), 3 + 6);
        assert_eq!(w3.degree(), 4);
        assert!(is_move(&g3, &w3));

        let (g4, w4) = kmn_witness(4).unwrap();
        assert_eq!(g4.vertex_count(), 4 + 24);
        assert_eq!(w4.degree(), 8);
        assert!(is_move(&g4, &w4));

        assert!(kmn_witness(5).is_err());
    }
}
