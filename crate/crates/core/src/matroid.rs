//! Cographic matroids of multigraphs, Tutte polynomials by memoized
//! deletion–contraction, f/h-vectors and top-sphere counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quiver::{canonical_key_from_adjacency, MultiGraph};

/// Bivariate polynomial with nonnegative integer coefficients, stored sparsely
/// as `(deg_x, deg_y) → coefficient`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TuttePolynomial {
    terms: BTreeMap<(u32, u32), BigUint>,
}

impl TuttePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((i, j), BigUint::one());
        TuttePolynomial { terms }
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples; zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, BigUint)>) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry((i, j)).or_default() += c;
    }

    pub fn coefficient(&self, i: u32, j: u32) -> BigUint {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Terms in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigUint)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, j, c) in other.terms() {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, b, c) in self.terms() {
            for (d, e, f) in other.terms() {
                out.add_term(a + d, b + e, c * f);
            }
        }
        out
    }

    fn shift(&self, di: u32, dj: u32) -> Self {
        TuttePolynomial { terms: self.terms.iter().map(|(&(i, j), c)| ((i + di, j + dj), c.clone())).collect() }
    }

    /// `T(y, x)`: the Tutte polynomial of the dual matroid.
    pub fn dual(&self) -> Self {
        TuttePolynomial { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(i, j), c)| BigInt::from(c.clone()) * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .sum()
    }

    pub fn evaluate_i64(&self, x: i64, y: i64) -> BigInt {
        self.evaluate(&BigInt::from(x), &BigInt::from(y))
    }
}

/// Terms ordered by descending x-degree, then descending y-degree,
/// e.g. `x^2 + x + y`.
impl fmt::Display for TuttePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mut factors = Vec::new();
            if !c.is_one() || (i == 0 && j == 0) {
                factors.push(c.to_string());
            }
            match i {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push("y".into()),
                _ => factors.push(format!("y^{j}")),
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// `y^lo + ... + y^{hi-1}`
fn y_range(lo: u32, hi: u32) -> TuttePolynomial {
    TuttePolynomial::from_terms((lo..hi).map(|j| (0, j, BigUint::one())))
}

/// Concurrent memo table for Tutte polynomials of loopless multigraphs keyed
/// by canonical key. Writers racing on one key store identical values.
#[derive(Debug, Default)]
pub struct TutteCache {
    map: RwLock<HashMap<Vec<u8>, TuttePolynomial>>,
}

impl TutteCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &[u8]) -> Option<TuttePolynomial> {
        self.map.read().expect("tutte cache poisoned").get(key).cloned()
    }

    pub fn insert(&self, key: Vec<u8>, value: TuttePolynomial) {
        self.map.write().expect("tutte cache poisoned").insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("tutte cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().expect("tutte cache poisoned").clear();
    }

    /// All entries sorted by key.
    pub fn entries(&self) -> Vec<(Vec<u8>, TuttePolynomial)> {
        let mut out: Vec<_> =
            self.map.read().expect("tutte cache poisoned").iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// Process-wide memo shared by [`tutte_polynomial`].
pub fn global_cache() -> &'static TutteCache {
    static CACHE: OnceLock<TutteCache> = OnceLock::new();
    CACHE.get_or_init(TutteCache::new)
}

/// Tutte polynomial of the graphic matroid of a connected multigraph, using
/// the process-wide cache.
pub fn tutte_polynomial(graph: &MultiGraph) -> Result<TuttePolynomial> {
    tutte_polynomial_with(graph, Some(global_cache()))
}

/// Tutte polynomial with an explicit cache, or none at all.
///
/// Parallel edges are handled a bundle at a time: for a bundle of `m` edges
/// that is not a cut, `T(G) = T(G \ B) + (1 + y + ... + y^{m-1}) T(G / B)`.
/// The bundle of largest multiplicity is processed first. Once every bundle
/// is a cut the graph is a tree of bundles and `T` is the product of
/// `x + y + ... + y^{m-1}`. Independent branches may run on the rayon pool.
pub fn tutte_polynomial_with(graph: &MultiGraph, cache: Option<&TutteCache>) -> Result<TuttePolynomial> {
    if !graph.is_connected() {
        return Err(Error::InvalidArgument("Tutte polynomial needs a connected graph".into()));
    }
    let loops = graph.loop_count() as u32;
    let body = tutte_rec(graph.adjacency(), cache);
    Ok(body.shift(0, loops))
}

const PARALLEL_EDGE_THRESHOLD: u32 = 14;

fn tutte_rec(adj: Vec<Vec<u32>>, cache: Option<&TutteCache>) -> TuttePolynomial {
    let r = adj.len();
    if r == 1 {
        return TuttePolynomial::one();
    }
    let key = cache.map(|_| canonical_key_from_adjacency(&adj, &vec![0; r]));
    if let (Some(c), Some(k)) = (cache, key.as_ref()) {
        if let Some(hit) = c.get(k) {
            return hit;
        }
    }

    let mut bundles: Vec<(u32, usize, usize)> = Vec::new();
    for u in 0..r {
        for v in u + 1..r {
            if adj[u][v] > 0 {
                bundles.push((adj[u][v], u, v));
            }
        }
    }
    // largest multiplicity first, ties by position
    bundles.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let pick = bundles.iter().copied().find(|&(_, u, v)| !is_cut_bundle(&adj, u, v));

    let result = match pick {
        None => bundles.iter().fold(TuttePolynomial::one(), |acc, &(m, _, _)| {
            acc.mul(&TuttePolynomial::x().add(&y_range(1, m)))
        }),
        Some((m, u, v)) => {
            let mut deleted = adj.clone();
            deleted[u][v] = 0;
            deleted[v][u] = 0;
            let contracted = contract_pair(&adj, u, v);
            let edges: u32 = bundles.iter().map(|b| b.0).sum();
            let (a, b) = if edges >= PARALLEL_EDGE_THRESHOLD {
                rayon::join(|| tutte_rec(deleted, cache), || tutte_rec(contracted, cache))
            } else {
                (tutte_rec(deleted, cache), tutte_rec(contracted, cache))
            };
            a.add(&y_range(0, m).mul(&b))
        }
    };

    if let (Some(c), Some(k)) = (cache, key) {
        c.insert(k, result.clone());
    }
    result
}

fn is_cut_bundle(adj: &[Vec<u32>], u: usize, v: usize) -> bool {
    let r = adj.len();
    let mut seen = vec![false; r];
    let mut stack = vec![u];
    seen[u] = true;
    while let Some(a) = stack.pop() {
        for b in 0..r {
            if adj[a][b] == 0 || seen[b] || (a == u && b == v) || (a == v && b == u) {
                continue;
            }
            if b == v {
                return false;
            }
            seen[b] = true;
            stack.push(b);
        }
    }
    true
}

/// Merges `v` into `u`, dropping the `u–v` bundle.
fn contract_pair(adj: &[Vec<u32>], u: usize, v: usize) -> Vec<Vec<u32>> {
    let keep: Vec<usize> = (0..adj.len()).filter(|&w| w != v).collect();
    keep.iter()
        .map(|&a| {
            keep.iter()
                .map(|&b| {
                    if a == b {
                        0
                    } else {
                        let mut m = adj[a][b];
                        if a == u {
                            m += adj[v][b];
                        }
                        if b == u {
                            m += adj[a][v];
                        }
                        m
                    }
                })
                .collect()
        })
        .collect()
}

/// Cographic matroid of a connected multigraph: a set of edges is independent
/// when the graph stays connected after removing it. Its rank is `b1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CographicMatroid {
    graph: MultiGraph,
    rank: usize,
}

impl CographicMatroid {
    pub fn new(graph: MultiGraph) -> Result<Self> {
        let rank = graph
            .betti1()
            .map_err(|_| Error::InvalidArgument("cographic matroid needs a connected graph".into()))?;
        Ok(CographicMatroid { graph, rank })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ground_size(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_independent(&self, subset: &[usize]) -> Result<bool> {
        let s = self.ground_size();
        let mut removed = vec![false; s];
        for &e in subset {
            if e >= s {
                return Err(Error::InvalidArgument(format!("edge index {e} out of range for {s} edges")));
            }
            removed[e] = true;
        }
        Ok(self.graph.is_connected_without(&removed))
    }

    /// Visits every independent set (as sorted edge indices) by depth-first
    /// extension; independent sets are closed under taking subsets.
    pub fn for_each_independent(&self, mut visit: impl FnMut(&[usize])) {
        let s = self.ground_size();
        let mut removed = vec![false; s];
        let mut current = Vec::new();
        fn go(
            m: &CographicMatroid,
            from: usize,
            removed: &mut Vec<bool>,
            current: &mut Vec<usize>,
            visit: &mut dyn FnMut(&[usize]),
        ) {
            visit(current);
            if current.len() == m.rank {
                return;
            }
            for e in from..removed.len() {
                removed[e] = true;
                if m.graph.is_connected_without(removed) {
                    current.push(e);
                    go(m, e + 1, removed, current, visit);
                    current.pop();
                }
                removed[e] = false;
            }
        }
        go(self, 0, &mut removed, &mut current, &mut visit);
    }

    /// Bases (maximal independent sets) in lexicographic order.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_independent(|set| {
            if set.len() == self.rank {
                out.push(set.to_vec());
            }
        });
        out
    }
}

/// Largest ground set for which [`f_h_vectors`] enumerates independent sets.
pub const MAX_ENUMERATION_GROUND_SET: usize = 24;

/// `f_i` counts independent sets of size `i` for `i = 0..=rank`; the h-vector
/// is `h_k = Σ_{i≤k} (-1)^{k-i} C(rank-i, k-i) f_i`.
pub fn f_h_vectors(m: &CographicMatroid) -> Result<(Vec<BigUint>, Vec<BigInt>)> {
    if m.ground_size() > MAX_ENUMERATION_GROUND_SET {
        return Err(Error::ResourceLimit(format!(
            "f-vector enumeration limited to {MAX_ENUMERATION_GROUND_SET} elements, got {}",
            m.ground_size()
        )));
    }
    let d = m.rank();
    let mut counts = vec![0u64; d + 1];
    m.for_each_independent(|set| counts[set.len()] += 1);
    let f: Vec<BigUint> = counts.iter().map(|&c| BigUint::from(c)).collect();
    let h = (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let term = BigInt::from(binomial((d - i) as u64, (k - i) as u64)) * BigInt::from(f[i].clone());
                    if (k - i) % 2 == 0 { term } else { -term }
                })
                .sum()
        })
        .collect();
    Ok((f, h))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of top-dimensional spheres in the cographic matroid complex,
/// `T_G(1, 0)`; a graph with `b1 = 0` reports 1.
pub fn top_betti(graph: &MultiGraph) -> Result<BigUint> {
    top_betti_with(graph, Some(global_cache()))
}

pub fn top_betti_with(graph: &MultiGraph, cache: Option<&TutteCache>) -> Result<BigUint> {
    let b1 = graph
        .betti1()
        .map_err(|_| Error::InvalidArgument("top_betti needs a connected graph".into()))?;
    if b1 == 0 {
        return Ok(BigUint::one());
    }
    let t = tutte_polynomial_with(graph, cache)?;
    Ok(t.terms().filter(|&(_, j, _)| j == 0).map(|(_, _, c)| c.clone()).sum())
}
