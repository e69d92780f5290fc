//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the routine it is checking: counts come from plain
//! recursion or exhaustive enumeration, Tutte polynomials from the rank
//! generating function or naive per-edge deletion-contraction, spanning trees
//! from the matrix-tree theorem.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use ngo_strings::{MultiGraph, Partition, TuttePolynomial};

pub type Poly = BTreeMap<(u32, u32), BigInt>;

/// Number of partitions of `n` with all parts at most `k`.
pub fn partition_count_bounded(n: u32, k: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    if k == 0 {
        return 0;
    }
    let mut total = partition_count_bounded(n, k - 1);
    if k <= n {
        total += partition_count_bounded(n - k, k);
    }
    total
}

pub fn partition_count(n: u32) -> u64 {
    partition_count_bounded(n, n)
}

/// All set partitions of `0..n`, blocks listed in order of first element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for item in 0..n {
        let mut next = Vec::new();
        for blocks in out {
            for i in 0..blocks.len() {
                let mut b: Vec<Vec<usize>> = blocks.clone();
                b[i].push(item);
                next.push(b);
            }
            let mut b = blocks.clone();
            b.push(vec![item]);
            next.push(b);
        }
        out = next;
    }
    out
}

fn block_sums(parts: &[u32], blocks: &[Vec<usize>]) -> Vec<u32> {
    let mut sums: Vec<u32> = blocks.iter().map(|b| b.iter().map(|&i| parts[i]).sum()).collect();
    sums.sort_unstable_by(|a, b| b.cmp(a));
    sums
}

/// Groupings of the labeled parts of `fine` whose block sums are `coarse`,
/// each as a sorted list of block partitions.
pub fn groupings_oracle(fine: &Partition, coarse: &Partition) -> Vec<Vec<Vec<u32>>> {
    let parts = fine.parts();
    set_partitions(parts.len())
        .into_iter()
        .filter(|blocks| block_sums(parts, blocks) == coarse.parts())
        .map(|blocks| {
            let mut bs: Vec<Vec<u32>> = blocks
                .iter()
                .map(|b| {
                    let mut v: Vec<u32> = b.iter().map(|&i| parts[i]).collect();
                    v.sort_unstable_by(|a, b| b.cmp(a));
                    v
                })
                .collect();
            bs.sort();
            bs
        })
        .collect()
}

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn all_partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in all_partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Straight-line evaluation of the string-rank recursion, signed so that a
/// negative value would show up rather than error. No memo; groupings come
/// from exhaustive set partitions; the degree is threaded through unchanged.
pub fn string_rank_oracle(n: u32, d: i64, fine: &[u32]) -> BigInt {
    let q = if d == 0 { n as i64 } else { gcd(n as i64, d) };
    let r = fine.len() as u64;
    if n == 1 || q == n as i64 {
        return if fine.len() == 1 { BigInt::one() } else { BigInt::zero() };
    }
    let local = BigInt::from(factorial(r - 1));
    if q == 1 {
        return local;
    }
    let mut subtracted = BigInt::zero();
    for coarse in all_partitions(n, n) {
        if coarse.len() == 1 || coarse.iter().any(|&m| (m as i64 * d) % n as i64 != 0) {
            continue;
        }
        let coarse_rank = BigInt::from(factorial(coarse.len() as u64 - 1));
        let mut sum = BigInt::zero();
        for blocks in set_partitions(fine.len()) {
            if block_sums(fine, &blocks) != coarse {
                continue;
            }
            let mut prod = BigInt::one();
            for b in &blocks {
                let mut parts: Vec<u32> = b.iter().map(|&i| fine[i]).collect();
                parts.sort_unstable_by(|a, b| b.cmp(a));
                let m: u32 = parts.iter().sum();
                prod *= string_rank_oracle(m, d * m as i64 / n as i64, &parts);
            }
            sum += prod;
        }
        subtracted += coarse_rank * sum;
    }
    local - subtracted
}

/// `2(n²(g-1)+1) - 2 max(r + (g-1)Σ k_i²)` over ordered sequences of
/// `(multiplicity, rank)` pairs with `Σ m_i k_i = n`, excluding `[(1, n)]`.
pub fn stabilization_codim_oracle(n: u32, g: u32) -> i64 {
    fn walk(rest: u32, seq: &mut Vec<(u32, u32)>, n: u32, g: i64, best: &mut i64) {
        if rest == 0 {
            if seq.as_slice() != [(1, n)] {
                let v = seq.len() as i64 + (g - 1) * seq.iter().map(|&(_, k)| (k as i64).pow(2)).sum::<i64>();
                *best = (*best).max(v);
            }
            return;
        }
        for w in 1..=rest {
            for m in 1..=w {
                if w % m == 0 {
                    seq.push((m, w / m));
                    walk(rest - w, seq, n, g, best);
                    seq.pop();
                }
            }
        }
    }
    let mut best = i64::MIN;
    walk(n, &mut Vec::new(), n, g as i64, &mut best);
    let nn = n as i64;
    2 * (nn * nn * (g as i64 - 1) + 1) - 2 * best
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = x;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Rank of an edge subset in the graphic matroid: vertices minus components.
pub fn graphic_rank(vertex_count: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..vertex_count).collect();
    let mut rank = 0;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            rank += 1;
        }
    }
    rank
}

pub fn is_connected(vertex_count: usize, edges: &[(usize, usize)]) -> bool {
    graphic_rank(vertex_count, edges) + 1 == vertex_count
}

fn binom(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn prune(p: Poly) -> Poly {
    p.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Tutte polynomial from the rank generating function
/// `Σ_A (x-1)^{r(E)-r(A)} (y-1)^{|A|-r(A)}`, expanded.
pub fn tutte_rank_generating(g: &MultiGraph) -> Poly {
    let edges = g.edges();
    let s = edges.len();
    assert!(s <= 20, "rank generating oracle is exponential in the edge count");
    let full = graphic_rank(g.vertex_count(), edges);
    let mut shifted: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for mask in 0u32..(1 << s) {
        let subset: Vec<(usize, usize)> = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let ra = graphic_rank(g.vertex_count(), &subset);
        *shifted.entry(((full - ra) as u32, (subset.len() - ra) as u32)).or_default() += 1;
    }
    let mut out = Poly::new();
    for ((a, b), count) in shifted {
        for i in 0..=a {
            for j in 0..=b {
                let sign = if (a - i + b - j) % 2 == 0 { 1 } else { -1 };
                *out.entry((i, j)).or_default() += binom(a, i) * binom(b, j) * count * sign;
            }
        }
    }
    prune(out)
}

fn poly_mul_monomial(p: &Poly, di: u32, dj: u32) -> Poly {
    p.iter().map(|(&(i, j), c)| ((i + di, j + dj), c.clone())).collect()
}

fn poly_add(mut a: Poly, b: &Poly) -> Poly {
    for (k, c) in b {
        *a.entry(*k).or_default() += c;
    }
    prune(a)
}

/// Textbook deletion-contraction on the first edge, no memo, no bundling.
pub fn tutte_plain(vertex_count: usize, edges: &[(usize, usize)]) -> Poly {
    let Some((&(u, v), rest)) = edges.split_first() else {
        return Poly::from([((0, 0), BigInt::one())]);
    };
    if u == v {
        return poly_mul_monomial(&tutte_plain(vertex_count, rest), 0, 1);
    }
    let contracted = contract_edge(vertex_count, rest, u, v);
    if !is_connected(vertex_count, rest) {
        return poly_mul_monomial(&tutte_plain(vertex_count - 1, &contracted), 1, 0);
    }
    poly_add(tutte_plain(vertex_count, rest), &tutte_plain(vertex_count - 1, &contracted))
}

// merge v into u, then renumber the last vertex into v's slot
fn contract_edge(vertex_count: usize, edges: &[(usize, usize)], u: usize, v: usize) -> Vec<(usize, usize)> {
    let last = vertex_count - 1;
    let relabel = |x: usize| {
        let x = if x == v { u } else { x };
        if x == last { v } else { x }
    };
    edges.iter().map(|&(a, b)| (relabel(a), relabel(b))).collect()
}

pub fn poly_of(t: &TuttePolynomial) -> Poly {
    t.terms().map(|(i, j, c)| ((i, j), BigInt::from(c.clone()))).collect()
}

pub fn eval(p: &Poly, x: i64, y: i64) -> BigInt {
    p.iter().map(|(&(i, j), c)| c * BigInt::from(x).pow(i) * BigInt::from(y).pow(j)).sum()
}

/// Spanning-tree count by the matrix-tree theorem: determinant of the reduced
/// Laplacian, computed with Bareiss elimination.
pub fn spanning_trees(g: &MultiGraph) -> BigInt {
    let r = g.vertex_count();
    if r == 1 {
        return BigInt::one();
    }
    let mut lap = vec![vec![BigInt::zero(); r]; r];
    for &(u, v) in g.edges() {
        if u == v {
            continue;
        }
        lap[u][u] += 1;
        lap[v][v] += 1;
        lap[u][v] -= 1;
        lap[v][u] -= 1;
    }
    let mut m: Vec<Vec<BigInt>> = lap.into_iter().take(r - 1).map(|row| row.into_iter().take(r - 1).collect()).collect();
    bareiss_det(&mut m)
}

pub fn bareiss_det(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &m[n - 1][n - 1]
    }
}

/// Rank over the rationals by fraction-free elimination.
pub fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let (a, b) = (m[rank][c].clone(), m[i][c].clone());
                for j in 0..cols {
                    m[i][j] = &m[i][j] * &a - &m[rank][j] * &b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn normalized_edges(edges: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (perm[u], perm[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Exhaustive search for a vertex bijection carrying one edge multiset to the other.
pub fn isomorphic_brute(a: &MultiGraph, b: &MultiGraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let target = normalized_edges(b.edges(), &(0..b.vertex_count()).collect::<Vec<_>>());
    let mut perm: Vec<usize> = (0..a.vertex_count()).collect();
    fn permute(k: usize, perm: &mut Vec<usize>, test: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k == perm.len() {
            return test(perm);
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            if permute(k + 1, perm, test) {
                return true;
            }
            perm.swap(k, i);
        }
        false
    }
    permute(0, &mut perm, &mut |p| normalized_edges(a.edges(), p) == target)
}

/// Random connected multigraph: a random spanning tree plus extra random
/// edges (loops only if `loops`), with exactly `edges` edges when possible.
pub fn random_connected(rng: &mut StdRng, vertices: usize, edges: usize, loops: bool) -> MultiGraph {
    let vertices = vertices.max(1).min(edges + 1);
    let mut list = Vec::with_capacity(edges);
    for v in 1..vertices {
        list.push((rng.gen_range(0..v), v));
    }
    while list.len() < edges {
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        if u == v && !loops {
            if vertices == 1 {
                break;
            }
            continue;
        }
        list.push((u, v));
    }
    for i in (1..list.len()).rev() {
        let j = rng.gen_range(0..=i);
        list.swap(i, j);
    }
    MultiGraph::new(vertices, list).expect("endpoints are in range")
}

/// Random connected multigraph with at most `max_edges` edges.
pub fn random_small(rng: &mut StdRng, max_vertices: usize, max_edges: usize, loops: bool) -> MultiGraph {
    let v = rng.gen_range(1..=max_vertices);
    let e = rng.gen_range(v.saturating_sub(1)..=max_edges.max(v - 1));
    random_connected(rng, v, e, loops)
}

/// Named graphs used across the suites.
pub fn named_graphs() -> Vec<(&'static str, MultiGraph)> {
    let mut out = vec![
        ("single vertex", MultiGraph::new(1, vec![]).unwrap()),
        ("single loop", MultiGraph::new(1, vec![(0, 0)]).unwrap()),
        ("single edge", MultiGraph::path(1)),
        ("path4", MultiGraph::path(4)),
        ("triangle", MultiGraph::cycle(3)),
        ("square", MultiGraph::cycle(4)),
        ("k4", MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()),
        (
            "doubled triangle",
            MultiGraph::new(3, vec![(0, 1), (0, 1), (0, 2), (0, 2), (1, 2), (1, 2)]).unwrap(),
        ),
        ("theta", MultiGraph::new(4, vec![(0, 1), (1, 3), (0, 2), (2, 3), (0, 3)]).unwrap()),
        ("loop on triangle", MultiGraph::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 1)]).unwrap()),
    ];
    for k in 2..=6 {
        out.push((["banana2", "banana3", "banana4", "banana5", "banana6"][k - 2], MultiGraph::banana(k)));
    }
    out
}

pub fn biguint(v: u64) -> BigUint {
    BigUint::from(v)
}

pub fn is_nonneg(x: &BigInt) -> bool {
    !x.is_negative()
}
