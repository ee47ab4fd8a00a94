//! Exact degrees of forest model ideals: the edge-deletion recurrence
//! with the product lemma, closed forms for stars and chains, a
//! generating-function cross-check, and an independent clique-counting
//! volume oracle.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::basis::degree_d_fibers;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{integer_rank, marginal_matrix, Table};

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Canonical key for a forest: sorted multiset of AHU encodings of its
/// trees, each rooted at the tree's center.
fn forest_key(g: &Graph) -> String {
    fn encode(g: &Graph, root: u32, parent: Option<u32>) -> String {
        let mut children: Vec<String> = g
            .neighbors(root)
            .into_iter()
            .filter(|&c| Some(c) != parent)
            .map(|c| encode(g, c, Some(root)))
            .collect();
        children.sort();
        format!("({})", children.concat())
    }
    let mut trees = Vec::new();
    for comp in g.components() {
        let keep: BTreeSet<u32> = comp.iter().copied().collect();
        let tree = g.induced(&keep);
        // Root at a center: repeatedly strip leaves.
        let mut alive: BTreeSet<u32> = keep.clone();
        while alive.len() > 2 {
            let sub = tree.induced(&alive);
            let leaves: Vec<u32> = alive
                .iter()
                .copied()
                .filter(|&v| sub.degree(v) <= 1)
                .collect();
            for v in leaves {
                alive.remove(&v);
            }
        }
        let mut encodings: Vec<String> = alive
            .iter()
            .map(|&c| encode(&tree, c, None))
            .collect();
        encodings.sort();
        trees.push(encodings.swap_remove(0));
    }
    trees.sort();
    trees.concat()
}

/// Memoized degrees keyed by canonical forest form.
#[derive(Default)]
pub struct DegreeMemo {
    map: HashMap<String, BigUint>,
}

impl DegreeMemo {
    pub fn new() -> DegreeMemo {
        DegreeMemo::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// The degree of I_G for a forest: delete each edge of a tree, halve the
/// sum, and combine disjoint pieces with the product-lemma multinomial
/// (d_i = |V_i| + |E_i| per piece).
pub fn forest_degree(g: &Graph) -> Result<BigUint> {
    let mut memo = DegreeMemo::new();
    forest_degree_memo(g, &mut memo)
}

pub fn forest_degree_memo(g: &Graph, memo: &mut DegreeMemo) -> Result<BigUint> {
    if !g.is_forest() {
        return Err(Error::capability(
            "degree recurrence applies to forests only",
        ));
    }
    let key = forest_key(g);
    if let Some(d) = memo.map.get(&key) {
        return Ok(d.clone());
    }
    let comps = g.components();
    let result = if comps.len() > 1 {
        let mut total_dim = 0usize;
        let mut vol = BigUint::one();
        let mut factor = BigUint::one();
        for comp in &comps {
            let keep: BTreeSet<u32> = comp.iter().copied().collect();
            let piece = g.induced(&keep);
            let dim = piece.vertex_count() + piece.edge_count();
            factor *= binomial(total_dim + dim, dim);
            total_dim += dim;
            vol *= forest_degree_memo(&piece, memo)?;
        }
        factor * vol
    } else if g.edge_count() == 0 {
        BigUint::one()
    } else {
        let mut sum = BigUint::zero();
        for (u, v) in g.edge_list() {
            sum += forest_degree_memo(&g.delete_edge(u, v)?, memo)?;
        }
        sum / BigUint::from(2u32)
    };
    memo.map.insert(key, result.clone());
    Ok(result)
}

/// deg I_{K_{1,n}} = (n!)^2.
pub fn star_degree(n: usize) -> BigUint {
    let f = factorial(n);
    &f * &f
}

/// Degrees d_1..d_n of the chain (path) graphs via the recurrence
/// d_{m+1} = (1/2) sum_i C(2m, 2i-1) d_i d_{m+1-i}, d_1 = 1.
pub fn chain_degrees(n: usize) -> Vec<BigUint> {
    let mut d = vec![BigUint::one()];
    while d.len() < n {
        let m = d.len();
        let mut sum = BigUint::zero();
        for i in 1..=m {
            sum += binomial(2 * m, 2 * i - 1) * &d[i - 1] * &d[m - i];
        }
        d.push(sum / BigUint::from(2u32));
    }
    d.truncate(n);
    d
}

pub fn chain_degree(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::argument("chain length must be >= 1"));
    }
    Ok(chain_degrees(n).pop().unwrap())
}

/// Checks d_n/(2n-1)! against the x^{2n-1} coefficient of
/// sqrt(2)*tan(x/sqrt(2)) for n = 1..=big_n, in exact rational
/// arithmetic.  The sqrt(2) factors cancel: the coefficient equals
/// t_{2n-1}/2^{n-1} where tan(u) = sum t_k u^k.
pub fn gf_check(big_n: usize) -> Result<bool> {
    if big_n == 0 || big_n > 12 {
        return Err(Error::capability(
            "generating-function check supports 1 <= N <= 12",
        ));
    }
    // Coefficients of tan(u) to order 2N-1 from t' = 1 + t^2.
    let order = 2 * big_n;
    let mut t = vec![BigRational::zero(); order];
    // t[k] is the u^k coefficient; t' coefficient of u^k is (k+1) t[k+1].
    for k in 0..order - 1 {
        let mut rhs = if k == 0 { BigRational::one() } else { BigRational::zero() };
        for a in 0..=k {
            rhs += &t[a] * &t[k - a];
        }
        t[k + 1] = rhs / BigRational::from(BigInt::from(k as i64 + 1));
    }
    let chain = chain_degrees(big_n);
    for n in 1..=big_n {
        let coeff = &t[2 * n - 1]
            / BigRational::from(BigInt::from(2).pow(n as u32 - 1));
        let lhs = BigRational::from(BigInt::from(chain[n - 1].clone()))
            / BigRational::from(BigInt::from(factorial(2 * n - 1)));
        if lhs != coeff {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Independent degree oracle for forests: under graded reverse-lex with
/// p_{0..0} smallest, the quadratic binomials' leading supports are the
/// minimal non-faces of a unimodular triangulation of P_G, so the degree
/// is the number of cliques of size |V|+|E|+1 in the compatible-pairs
/// graph on the 2^n cells.
pub fn degree_oracle(g: &Graph) -> Result<BigUint> {
    if !g.is_forest() {
        return Err(Error::capability("degree oracle applies to forests only"));
    }
    let n = g.vertex_count();
    if n > 6 {
        return Err(Error::capability(
            "degree oracle uses a 64-bit cell set, capped at 6 vertices",
        ));
    }
    // The Groebner property of the quadrics under the binary-counting
    // reverse-lex order needs the vertex order to follow the trees
    // (each vertex preceded by its parent); relabel by BFS from the
    // least vertex of each component.  The degree itself is invariant
    // under relabeling.
    let g = {
        let mut order: Vec<u32> = Vec::new();
        for comp in g.components() {
            let root = *comp.iter().min().unwrap();
            let mut queue = std::collections::VecDeque::from([root]);
            let mut seen: BTreeSet<u32> = BTreeSet::from([root]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for w in g.neighbors(v) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        let new_id: HashMap<u32, u32> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let edges: Vec<(u32, u32)> = g
            .edge_list()
            .into_iter()
            .map(|(u, v)| (new_id[&u], new_id[&v]))
            .collect();
        Graph::with_edges(n, &edges)?
    };
    let g = &g;
    let cells = 1usize << n;
    let clique_size = n + g.edge_count() + 1;
    debug_assert_eq!(
        integer_rank(&marginal_matrix(g)?),
        clique_size,
        "triangulation dimension"
    );
    // Grevlex with cell 0 as the smallest variable: between two degree-2
    // monomials, the one with smaller multiplicity at the first cell
    // (scanning upward) where they differ is larger.
    let grevlex_larger = |a: &Table, b: &Table| -> bool {
        let (ca, cb) = (a.counts(), b.counts());
        for cell in 0..cells as u128 {
            let (ma, mb) = (
                ca.get(&cell).copied().unwrap_or(0),
                cb.get(&cell).copied().unwrap_or(0),
            );
            if ma != mb {
                return ma < mb;
            }
        }
        false
    };
    let full = if cells == 64 { u64::MAX } else { (1u64 << cells) - 1 };
    let mut compatible = vec![full; cells];
    for fiber in degree_d_fibers(g, 2, 10_000_000)?.values() {
        for t1 in fiber {
            for t2 in fiber {
                if t1 < t2 {
                    let lead = if grevlex_larger(t1, t2) { t1 } else { t2 };
                    let s = lead.support();
                    if s.len() == 2 {
                        let (a, b) = (s[0] as usize, s[1] as usize);
                        compatible[a] &= !(1 << b);
                        compatible[b] &= !(1 << a);
                    }
                }
            }
        }
    }
    // Count cliques of exactly `clique_size` cells.
    fn count(
        compatible: &[u64],
        candidates: u64,
        need: usize,
        total: &mut BigUint,
    ) {
        if need == 0 {
            *total += BigUint::one();
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            if (rest.count_ones() as usize) < need {
                return;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            count(compatible, rest & compatible[v], need - 1, total);
        }
    }
    let mut total = BigUint::zero();
    count(&compatible, full, clique_size, &mut total);
    Ok(total)
}
