//! Dimension theory on the Hitchin base and the recursive string-rank tables.
//!
//! The recursion computes, for every partition `n̲` of `n`, the rank of the
//! leading local system of the string supported on the stratum of `n̲`:
//!
//! ```text
//! rank(n̲) = (r-1)! - Σ_{m̲ admissible, m̲ ≠ {n}} (|m̲|-1)! · Σ_{groupings} Π_j rank_{m_j, d m_j / n}(B_j)
//! ```
//!
//! where a grouping splits the labeled parts of `n̲` into blocks `B_j` whose
//! sums form `m̲`. Coprime degree gives `(r-1)!` everywhere and degree zero
//! gives the indicator of `{n}`. The step is reconstructed from the `n = 4`
//! case; a negative rank is reported as [`Error::ModelInconsistency`] instead
//! of being clamped.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matroid::binomial;
use crate::partitions::{
    admissible_partitions, gcd, grouping_enumerate, local_system_rank, partitions_of, Partition,
};
use crate::quiver::spectral_dual_graph;

/// Dimensions attached to the stratum `S_n̲` of the Hitchin base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumDims {
    pub partition: Partition,
    pub g: u32,
    pub dim_a: i64,
    pub dim_s: i64,
    pub codim_s: i64,
    pub component_genera: Vec<i64>,
    pub genus_sum: i64,
    /// `δ = b1(Γ_n̲)`, computed from the dual graph.
    pub delta: i64,
    pub spectral_genus: i64,
    /// `Ψ_{g'} = 3 - 2g'`
    pub psi: i64,
}

pub fn stratum_dims(p: &Partition, g: u32) -> Result<StratumDims> {
    let graph = spectral_dual_graph(p, g)?;
    let gg = g as i64;
    let n = p.n() as i64;
    let component_genera: Vec<i64> = p.parts().iter().map(|&ni| (ni as i64).pow(2) * (gg - 1) + 1).collect();
    let genus_sum: i64 = component_genera.iter().sum();
    let dim_a = n * n * (gg - 1) + 1;
    let dim_s: i64 = p.parts().iter().map(|&ni| (ni as i64).pow(2) * (gg - 1) + 1).sum();
    let delta = graph.betti1()? as i64;
    let s = graph.edge_count() as i64;
    let r = p.len() as i64;
    let spectral_genus = n * n * (gg - 1) + 1;
    let dims = StratumDims {
        partition: p.clone(),
        g,
        dim_a,
        dim_s,
        codim_s: dim_a - dim_s,
        component_genera,
        genus_sum,
        delta,
        spectral_genus,
        psi: 3 - 2 * spectral_genus,
    };
    if dims.codim_s != dims.delta {
        return Err(Error::InternalConsistency(format!(
            "codim S = {} but b1 = {} for {} at g={g}",
            dims.codim_s,
            dims.delta,
            p.braced()
        )));
    }
    if dims.spectral_genus != genus_sum + s - r + 1 || dims.dim_s != genus_sum {
        return Err(Error::InternalConsistency(format!(
            "arithmetic genus of the nodal curve disagrees for {} at g={g}",
            p.braced()
        )));
    }
    Ok(dims)
}

/// Brute-force minimum codimension of the singular strata:
/// `2(n²(g-1)+1) - 2 max { r + (g-1) Σ n_i² }` over all nontrivial
/// multiplicity/rank data `{(m_i, n_i)}` with `Σ m_i n_i = n`.
pub fn stabilization_codim(n: u32, g: u32) -> Result<i64> {
    if n < 2 || g < 2 {
        return Err(Error::InvalidArgument("stabilization_codim needs n >= 2 and g >= 2".into()));
    }
    let gg = g as i64;
    let mut best: Option<i64> = None;
    let mut data = Vec::new();
    visit_multirank_data(n, (n, n), &mut data, &mut |pairs| {
        if pairs == [(1, n)] {
            return;
        }
        let value = pairs.len() as i64 + (gg - 1) * pairs.iter().map(|&(_, ni)| (ni as i64).pow(2)).sum::<i64>();
        best = Some(best.map_or(value, |b| b.max(value)));
    });
    let nn = n as i64;
    Ok(2 * (nn * nn * (gg - 1) + 1) - 2 * best.expect("n >= 2 has nontrivial data"))
}

/// `4(g-1)(n-1) - 2`
pub fn stabilization_codim_closed_form(n: u32, g: u32) -> i64 {
    4 * (g as i64 - 1) * (n as i64 - 1) - 2
}

// multisets of (multiplicity, rank) pairs in non-increasing order
fn visit_multirank_data(rest: u32, max: (u32, u32), data: &mut Vec<(u32, u32)>, visit: &mut dyn FnMut(&[(u32, u32)])) {
    if rest == 0 {
        visit(data);
        return;
    }
    for m in (1..=rest).rev() {
        for ni in (1..=rest / m).rev() {
            if (m, ni) > max {
                continue;
            }
            data.push((m, ni));
            visit_multirank_data(rest - m * ni, (m, ni), data, visit);
            data.pop();
        }
    }
}

/// Ranks of the graded pieces `Λ^l ⊗ L` of the string of `p`, for
/// `l = 0..=2·dim S`: `C(2·genus_sum, l) · (r-1)!`.
pub fn ngo_string_graded_ranks(p: &Partition, g: u32) -> Result<Vec<BigUint>> {
    let dims = stratum_dims(p, g)?;
    let top = 2 * dims.genus_sum as u64;
    let lrank = local_system_rank(p);
    Ok((0..=2 * dims.dim_s as u64).map(|l| binomial(top, l) * &lrank).collect())
}

/// Ranks of the leading local systems for `(n, d)`, keyed by partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringTable {
    pub n: u32,
    pub d: i64,
    pub q: u64,
    pub ranks: BTreeMap<Partition, BigUint>,
}

impl StringTable {
    pub fn rank(&self, p: &Partition) -> Option<&BigUint> {
        self.ranks.get(p)
    }

    /// Entries in reverse-lexicographic partition order.
    pub fn entries(&self) -> impl Iterator<Item = (&Partition, &BigUint)> {
        self.ranks.iter().rev()
    }

    /// Same ranks, ignoring the degree label.
    pub fn same_ranks(&self, other: &StringTable) -> bool {
        self.n == other.n && self.ranks == other.ranks
    }
}

/// One subtracted term of the recursion for a fixed fine partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub coarse: Partition,
    pub local_rank: BigUint,
    pub grouping_sum: BigUint,
}

impl Contribution {
    pub fn total(&self) -> BigUint {
        &self.local_rank * &self.grouping_sum
    }
}

type Ranks = BTreeMap<Partition, BigUint>;

fn memo() -> &'static RwLock<HashMap<(u32, u64), Ranks>> {
    static MEMO: OnceLock<RwLock<HashMap<(u32, u64), Ranks>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn effective_gcd(n: u32, d: i64) -> u64 {
    gcd(n as i64, d)
}

/// The string-rank table for `(n, d)`, memoized on `(m, gcd(m, d_m))` for
/// every sub-problem.
pub fn string_table(n: u32, d: i64) -> Result<StringTable> {
    if n < 2 {
        return Err(Error::InvalidArgument("string_table requires n >= 2".into()));
    }
    let ranks = memoized_ranks(n, d)?;
    Ok(StringTable { n, d, q: effective_gcd(n, d), ranks })
}

fn memoized_ranks(n: u32, d: i64) -> Result<Ranks> {
    let key = (n, effective_gcd(n, d));
    if let Some(hit) = memo().read().expect("string memo poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let (ranks, _) = compute(n, d, &mut |m, dm| memoized_ranks(m, dm))?;
    memo().write().expect("string memo poisoned").insert(key, ranks.clone());
    Ok(ranks)
}

/// Same recursion without any memo, threading the actual degree through
/// every sub-problem. Used to check that only `gcd(n, d)` matters.
pub fn string_table_direct(n: u32, d: i64) -> Result<StringTable> {
    if n < 2 {
        return Err(Error::InvalidArgument("string_table requires n >= 2".into()));
    }
    fn go(m: u32, dm: i64) -> Result<Ranks> {
        compute(m, dm, &mut go).map(|(r, _)| r)
    }
    Ok(StringTable { n, d, q: effective_gcd(n, d), ranks: go(n, d)? })
}

/// The subtracted terms per partition, for the conservation check
/// `rank + Σ contributions == (r-1)!`. Empty lists in the base cases.
pub fn string_contributions(n: u32, d: i64) -> Result<BTreeMap<Partition, Vec<Contribution>>> {
    if n < 2 {
        return Err(Error::InvalidArgument("string_table requires n >= 2".into()));
    }
    compute(n, d, &mut |m, dm| memoized_ranks(m, dm)).map(|(_, c)| c)
}

fn compute(
    n: u32,
    d: i64,
    sub: &mut dyn FnMut(u32, i64) -> Result<Ranks>,
) -> Result<(Ranks, BTreeMap<Partition, Vec<Contribution>>)> {
    let all = partitions_of(n)?;
    let q = effective_gcd(n, d);
    let mut ranks = Ranks::new();
    let mut contributions = BTreeMap::new();

    if n == 1 || q == n as u64 {
        for p in all {
            let v = if p.is_trivial() { BigUint::one() } else { BigUint::zero() };
            contributions.insert(p.clone(), Vec::new());
            ranks.insert(p, v);
        }
        return Ok((ranks, contributions));
    }
    if q == 1 {
        for p in all {
            contributions.insert(p.clone(), Vec::new());
            ranks.insert(p.clone(), local_system_rank(&p));
        }
        return Ok((ranks, contributions));
    }

    let coarse_list: Vec<Partition> = admissible_partitions(n, d)?.into_iter().filter(|m| !m.is_trivial()).collect();
    let mut sub_tables: HashMap<u32, Ranks> = HashMap::new();
    for m in &coarse_list {
        for &mj in m.parts() {
            if let std::collections::hash_map::Entry::Vacant(e) = sub_tables.entry(mj) {
                let dj = d * mj as i64 / n as i64;
                e.insert(sub(mj, dj)?);
            }
        }
    }

    for fine in all {
        let local = local_system_rank(&fine);
        let mut terms = Vec::new();
        for coarse in &coarse_list {
            let mut grouping_sum = BigUint::zero();
            for grouping in grouping_enumerate(&fine, coarse)? {
                let product = grouping.iter().fold(BigUint::one(), |acc, block| {
                    let table = &sub_tables[&block.n()];
                    acc * table.get(block).cloned().unwrap_or_default()
                });
                grouping_sum += product;
            }
            if !grouping_sum.is_zero() {
                terms.push(Contribution { coarse: coarse.clone(), local_rank: local_system_rank(coarse), grouping_sum });
            }
        }
        let subtracted: BigUint = terms.iter().map(Contribution::total).sum();
        let value = BigInt::from(local.clone()) - BigInt::from(subtracted.clone());
        let Some(rank) = value.to_biguint() else {
            let detail = terms
                .iter()
                .map(|t| format!("{}: {}x{}", t.coarse.braced(), t.local_rank, t.grouping_sum))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::ModelInconsistency {
                n,
                d,
                partition: fine.to_string(),
                local_rank: local.to_string(),
                subtracted: subtracted.to_string(),
                detail,
            });
        };
        contributions.insert(fine.clone(), terms);
        ranks.insert(fine, rank);
    }
    Ok((ranks, contributions))
}

/// Full gcd-indexed table for one `n`: a row for `d = 0` (labelled `0`) and
/// one for each proper divisor `q` of `n`, computed at `d = q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableReport {
    pub n: u32,
    pub columns: Vec<Partition>,
    pub rows: Vec<(u64, Vec<BigUint>)>,
}

pub fn table_report(n: u32) -> Result<TableReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("table_report requires n >= 2".into()));
    }
    let columns = partitions_of(n)?;
    let labels = std::iter::once(0u64).chain((1..n as u64).filter(|q| (n as u64).is_multiple_of(*q)));
    let rows = labels
        .map(|label| {
            let table = string_table(n, label as i64)?;
            Ok((label, columns.iter().map(|p| table.ranks[p].clone()).collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport { n, columns, rows })
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = "gcd(n,d)";
        let names: Vec<String> = self.columns.iter().map(Partition::braced).collect();
        let widths: Vec<usize> = names
            .iter()
            .enumerate()
            .map(|(j, name)| {
                self.rows.iter().map(|(_, v)| v[j].to_string().len()).chain([name.len()]).max().unwrap_or(0)
            })
            .collect();
        write!(f, "{header} |")?;
        for (name, w) in names.iter().zip(&widths) {
            write!(f, "  {name:>w$}")?;
        }
        writeln!(f)?;
        for (label, values) in &self.rows {
            write!(f, "{:>width$} |", label, width = header.len())?;
            for (v, w) in values.iter().zip(&widths) {
                write!(f, "  {:>w$}", v.to_string())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
