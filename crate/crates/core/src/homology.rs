//! Reduced rational homology of small simplicial complexes by exact integer
//! elimination. This is the independent check on the Tutte-based sphere counts.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matroid::CographicMatroid;
use crate::quiver::MultiGraph;

/// Largest ground set accepted by [`matroid_complex`].
pub const MAX_GROUND_SET: usize = 16;

/// Largest number of faces [`reduced_homology_ranks`] will build.
pub const MAX_FACES: usize = 1 << 20;

/// Simplicial complex given by its facets on vertices `0..vertex_count`.
///
/// `facets == [[]]` is the complex consisting only of the empty face; it has
/// `H̃_{-1} = Q`. A complex with no facets at all has no faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Normalises the facet list: sorts vertices, drops faces contained in others.
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        if let Some(v) = sets.iter().flatten().find(|&&v| v >= vertex_count) {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        sets.dedup();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for f in sets {
            if !kept.iter().any(|k| is_subset(&f, k)) {
                kept.push(f);
            }
        }
        kept.sort();
        Ok(SimplicialComplex { vertex_count, facets: kept })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Dimension (largest facet size minus one); `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize - 1).max().unwrap_or(-1)
    }

    /// All faces grouped by size, each group in lexicographic order.
    pub fn faces_by_size(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        let bound: u128 = self.facets.iter().map(|f| 1u128 << f.len().min(100)).sum();
        if bound > 4 * MAX_FACES as u128 {
            return Err(Error::ResourceLimit(format!("complex may have up to {bound} faces")));
        }
        let mut faces = BTreeSet::new();
        for f in &self.facets {
            for mask in 0u64..(1u64 << f.len()) {
                let face: Vec<usize> = (0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                faces.insert(face);
            }
        }
        if faces.len() > MAX_FACES {
            return Err(Error::ResourceLimit(format!("complex has {} faces", faces.len())));
        }
        let top = self.facets.iter().map(Vec::len).max().unwrap_or(0);
        let mut groups = vec![Vec::new(); if self.facets.is_empty() { 0 } else { top + 1 }];
        for f in faces {
            groups[f.len()].push(f);
        }
        for g in &mut groups {
            g.sort();
        }
        Ok(groups)
    }

    /// Face counts by size, starting with the empty face.
    pub fn f_vector(&self) -> Result<Vec<usize>> {
        Ok(self.faces_by_size()?.iter().map(Vec::len).collect())
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Matroid complex of a cographic matroid: its facets are the bases.
pub fn matroid_complex(m: &CographicMatroid) -> Result<SimplicialComplex> {
    if m.ground_size() > MAX_GROUND_SET {
        return Err(Error::ResourceLimit(format!(
            "matroid complex limited to {MAX_GROUND_SET} elements, got {}",
            m.ground_size()
        )));
    }
    SimplicialComplex::new(m.ground_size(), m.bases())
}

/// Ranks of reduced rational homology; `ranks[k + 1]` is the rank in degree `k`,
/// starting at degree `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyRanks {
    pub ranks: Vec<usize>,
}

impl HomologyRanks {
    pub fn degree(&self, k: isize) -> usize {
        usize::try_from(k + 1).ok().and_then(|i| self.ranks.get(i).copied()).unwrap_or(0)
    }

    /// Highest degree with nonzero homology.
    pub fn top_nonzero_degree(&self) -> Option<isize> {
        self.ranks.iter().rposition(|&r| r > 0).map(|i| i as isize - 1)
    }

    /// Reduced Euler characteristic `Σ (-1)^k rank H̃_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| if i % 2 == 1 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// True when nothing below degree `top` survives.
    pub fn vanishes_below(&self, top: isize) -> bool {
        self.ranks.iter().enumerate().all(|(i, &r)| i as isize > top || r == 0)
    }
}

/// Reduced homology ranks over Q. Boundary matrices are built in lexicographic
/// face order (including the augmentation to the empty face) and their ranks
/// computed per degree in parallel by exact sparse column reduction.
pub fn reduced_homology_ranks(c: &SimplicialComplex) -> Result<HomologyRanks> {
    let groups = c.faces_by_size()?;
    if groups.is_empty() {
        return Ok(HomologyRanks { ranks: Vec::new() });
    }
    let index: Vec<HashMap<&[usize], usize>> = groups
        .iter()
        .map(|g| g.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect())
        .collect();
    // boundary_ranks[k] = rank of the map from faces of size k to faces of size k-1
    let boundary_ranks: Vec<usize> = (0..groups.len())
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                return 0;
            }
            let columns: Vec<Vec<(usize, BigInt)>> = groups[k]
                .iter()
                .map(|face| {
                    let mut col: Vec<(usize, BigInt)> = (0..face.len())
                        .map(|i| {
                            let mut sub = face.clone();
                            sub.remove(i);
                            let row = index[k - 1][sub.as_slice()];
                            (row, if i % 2 == 0 { BigInt::one() } else { -BigInt::one() })
                        })
                        .collect();
                    col.sort_by_key(|e| e.0);
                    col
                })
                .collect();
            sparse_rank(columns)
        })
        .collect();
    let ranks = (0..groups.len())
        .map(|k| {
            let below = boundary_ranks[k];
            let above = boundary_ranks.get(k + 1).copied().unwrap_or(0);
            groups[k].len() - below - above
        })
        .collect();
    Ok(HomologyRanks { ranks })
}

/// Rank over Q of a sparse integer matrix given by columns (entries sorted by row).
///
/// Standard column reduction on lowest nonzero rows; each combination is
/// fraction-free and the column is divided by its content afterwards.
pub(crate) fn sparse_rank(columns: Vec<Vec<(usize, BigInt)>>) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    for mut col in columns {
        while let Some((low, c)) = col.last().cloned() {
            let Some(p) = pivots.get(&low) else { break };
            let pv = p.last().expect("pivot columns are nonempty").1.clone();
            let g = c.gcd(&pv);
            let (a, b) = (&pv / &g, &c / &g);
            col = combine(&col, &a, p, &b);
            normalize(&mut col);
        }
        if let Some(&(low, _)) = col.last() {
            pivots.insert(low, col);
        }
    }
    pivots.len()
}

// a*x - b*y over merged sorted supports
fn combine(x: &[(usize, BigInt)], a: &BigInt, y: &[(usize, BigInt)], b: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (row, v) = if take_x {
            i += 1;
            (x[i - 1].0, a * &x[i - 1].1)
        } else if take_y {
            j += 1;
            (y[j - 1].0, -(b * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, a * &x[i - 1].1 - b * &y[j - 1].1)
        };
        if !v.is_zero() {
            out.push((row, v));
        }
    }
    out
}

fn normalize(col: &mut [(usize, BigInt)]) {
    let g = col.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if g.is_zero() || g.abs().is_one() {
        return;
    }
    for (_, v) in col.iter_mut() {
        *v /= &g;
    }
}

/// Reduced homology of the cographic matroid complex of a connected multigraph.
///
/// Ground sets up to [`MAX_GROUND_SET`] are handled by building the complex
/// directly. Larger graphs are first collapsed to one edge per parallel class:
/// the complex of the full graph is then the simplicial wedge construction of
/// the collapsed complex, homeomorphic to its `(s - m)`-fold suspension where
/// `m` is the number of classes, so homology is shifted up by `s - m`.
pub fn cographic_homology(graph: &MultiGraph) -> Result<HomologyRanks> {
    if graph.edge_count() <= MAX_GROUND_SET {
        cographic_homology_direct(graph)
    } else {
        cographic_homology_collapsed(graph)
    }
}

pub fn cographic_homology_direct(graph: &MultiGraph) -> Result<HomologyRanks> {
    let m = CographicMatroid::new(graph.clone())?;
    reduced_homology_ranks(&matroid_complex(&m)?)
}

pub fn cographic_homology_collapsed(graph: &MultiGraph) -> Result<HomologyRanks> {
    if !graph.is_connected() {
        return Err(Error::InvalidArgument("cographic complex needs a connected graph".into()));
    }
    let mut classes: Vec<(usize, usize)> = graph.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    classes.sort_unstable();
    classes.dedup();
    let shift = graph.edge_count() - classes.len();
    let simple = MultiGraph::new(graph.vertex_count(), classes)?;
    let inner = cographic_homology_direct(&simple)?;
    let mut ranks = vec![0; shift];
    ranks.extend(inner.ranks);
    Ok(HomologyRanks { ranks })
}
