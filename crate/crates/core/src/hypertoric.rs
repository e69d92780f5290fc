//! Combinatorial invariants of Lawrence toric varieties `X(Q±)` and hypertoric
//! quiver varieties `Y(Q)`: dimensions, circuit relations, the vertex-partition
//! stratification, smallness/semismallness checks, local decomposition
//! multiplicities and the dimension constants of the local model.

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;
use crate::matroid::top_betti;
use crate::partitions::Partition;
use crate::quiver::{spectral_dual_graph, Quiver, VertexPartition};

/// Largest vertex count accepted by the stratum enumerations.
pub const MAX_STRATA_VERTICES: usize = 12;

/// `(dim X(Q±, θ), dim Y(Q, θ)) = (b1 + s, 2 b1)` for a connected quiver.
pub fn lawrence_dims(q: &Quiver) -> Result<(usize, usize)> {
    let b1 = q
        .betti1()
        .map_err(|_| Error::InvalidArgument("Lawrence dimensions need a connected quiver".into()))?;
    Ok((b1 + q.arrow_count(), 2 * b1))
}

/// The relation `Σ_e a_{ie} z_e w_e` for one vertex `i ∈ {2..r}` (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitRelation {
    pub index: usize,
    pub coefficients: Vec<BigInt>,
}

impl std::fmt::Display for CircuitRelation {
    /// Edges are printed 1-based, e.g. `z1w1 - z2w2`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (e, a) in self.coefficients.iter().enumerate() {
            if a.sign() == num_bigint::Sign::NoSign {
                continue;
            }
            let mag = a.magnitude();
            let neg = a.sign() == num_bigint::Sign::Minus;
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            if *mag != BigUint::from(1u32) {
                write!(f, "{mag}*")?;
            }
            write!(f, "z{0}w{0}", e + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The generators of the circuit ideal: the rows of the boundary matrix read
/// as coefficients of `z_e w_e`. A one-vertex quiver has none.
pub fn circuit_relations(q: &Quiver) -> Result<Vec<CircuitRelation>> {
    if q.vertex_count() < 2 {
        return Ok(Vec::new());
    }
    let a: IntMatrix<BigInt> = q.boundary_matrix()?;
    Ok((0..a.rows()).map(|i| CircuitRelation { index: i + 2, coefficients: a.row(i).to_vec() }).collect())
}

/// One stratum `Y_V` of `Y(Q, 0)` (and `X_V` of `X(Q±, 0)`), indexed by a
/// vertex partition. Its normal slice is modelled on the contracted quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRecord {
    pub vp: VertexPartition,
    pub contracted: Quiver,
    pub deleted_loops: usize,
    pub b1_contracted: usize,
    pub codim_in_x: usize,
    pub codim_in_y: usize,
    pub fiber_dim: usize,
    pub multiplicity: BigUint,
    pub canonical_key: Vec<u8>,
}

impl StratumRecord {
    /// The open stratum: everything contracted to one vertex.
    pub fn is_open(&self) -> bool {
        self.contracted.vertex_count() == 1
    }

    /// `2 · fiber_dim == codim_in_Y`.
    pub fn is_relevant(&self) -> bool {
        2 * self.fiber_dim == self.codim_in_y
    }
}

fn check_strata_size(q: &Quiver) -> Result<()> {
    if q.vertex_count() > MAX_STRATA_VERTICES {
        return Err(Error::ResourceLimit(format!(
            "stratum enumeration limited to {MAX_STRATA_VERTICES} vertices, got {}",
            q.vertex_count()
        )));
    }
    if !q.is_connected() {
        return Err(Error::InvalidArgument("strata need a connected quiver".into()));
    }
    Ok(())
}

/// One record per vertex partition whose blocks are connected in `q` and whose
/// contraction is bridgeless, sorted by `(codim_in_Y, canonical key, partition)`.
/// Merging a disconnected block would create cycles and has no stratum behind
/// it. A bridge left in the contraction adds no fiber, so that partition
/// describes the same points as the coarser one that also contracts the bridge.
/// When every pair of vertices is joined by at least two edges (as for the
/// spectral dual graphs) all partitions count.
pub fn enumerate_strata(q: &Quiver) -> Result<Vec<StratumRecord>> {
    check_strata_size(q)?;
    let graph = q.underlying();
    let mut records = VertexPartition::all(q.vertex_count())
        .into_iter()
        .filter(|vp| graph.has_connected_blocks(vp))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|vp| stratum_record(q, vp))
        .filter_map(Result::transpose)
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        (a.codim_in_y, &a.canonical_key, &a.vp).cmp(&(b.codim_in_y, &b.canonical_key, &b.vp))
    });
    Ok(records)
}

fn stratum_record(q: &Quiver, vp: VertexPartition) -> Result<Option<StratumRecord>> {
    let c = q.contract(&vp)?;
    let graph = c.quiver.underlying();
    if !graph.is_bridgeless() {
        return Ok(None);
    }
    let b1 = graph.betti1()?;
    let s = c.quiver.arrow_count();
    let record = StratumRecord {
        canonical_key: graph.canonical_key(),
        multiplicity: top_betti(&graph)?,
        vp,
        deleted_loops: c.deleted_loops,
        b1_contracted: b1,
        codim_in_x: b1 + s,
        codim_in_y: 2 * b1,
        fiber_dim: b1,
        contracted: c.quiver,
    };
    Ok(Some(record))
}

/// Outcome of the smallness check for `X(Q±, θ) → X(Q±, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmallnessCertificate {
    Pass { strata_checked: usize },
    Fail { stratum: Box<StratumRecord> },
}

impl SmallnessCertificate {
    pub fn passed(&self) -> bool {
        matches!(self, SmallnessCertificate::Pass { .. })
    }
}

/// Checks `2 b1(Q_V) < b1(Q_V) + s(Q_V)` on every stratum except the open one.
pub fn certify_small(q: &Quiver) -> Result<SmallnessCertificate> {
    let strata = enumerate_strata(q)?;
    let mut checked = 0;
    for st in strata.into_iter().filter(|st| !st.is_open() && st.contracted.arrow_count() > 0) {
        checked += 1;
        if 2 * st.fiber_dim >= st.codim_in_x {
            return Ok(SmallnessCertificate::Fail { stratum: Box::new(st) });
        }
    }
    Ok(SmallnessCertificate::Pass { strata_checked: checked })
}

/// Semismall decomposition data for `Y(Q, θ) → Y(Q, 0)`: every stratum with
/// its multiplicity, the number of spheres in the top cohomology of the
/// contracted hypertoric variety.
pub fn local_decomposition(q: &Quiver) -> Result<Vec<(StratumRecord, BigUint)>> {
    let strata = enumerate_strata(q)?;
    if let Some(bad) = strata.iter().find(|st| !st.is_relevant()) {
        return Err(Error::InternalConsistency(format!("stratum {} is not relevant", bad.vp)));
    }
    Ok(strata
        .into_iter()
        .map(|st| {
            let m = st.multiplicity.clone();
            (st, m)
        })
        .collect())
}

/// Dimension constants of the local model at a point of the stratum of `partition`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModelDims {
    pub n: u32,
    pub g: u32,
    pub partition: Partition,
    pub s: i64,
    pub b1: i64,
    pub d_dim: i64,
    pub c_dim: i64,
    pub dim_m: i64,
    pub dim_y: i64,
    pub dim_x: i64,
    pub dim_jbar: i64,
}

pub fn local_model_dims(p: &Partition, g: u32) -> Result<LocalModelDims> {
    let graph = spectral_dual_graph(p, g)?;
    let n = p.n() as i64;
    let gg = g as i64;
    let s = graph.edge_count() as i64;
    let b1 = graph.betti1()? as i64;
    let dims = LocalModelDims {
        n: p.n(),
        g,
        partition: p.clone(),
        s,
        b1,
        d_dim: (n * n - 1) * (gg - 1) - 1 - b1,
        c_dim: 4 * n * n * (gg - 1) + 1 - b1 - s,
        dim_m: 2 * (n * n * (gg - 1) + 1),
        dim_y: 2 * b1,
        dim_x: b1 + s,
        dim_jbar: 4 * (n * n * (gg - 1) + 1) - 3,
    };
    if dims.dim_m != dims.dim_y + 2 * dims.d_dim + 2 * gg + 2 {
        return Err(Error::InternalConsistency(format!(
            "d(n,g) expressions disagree for {} at g={g}",
            p.braced()
        )));
    }
    if dims.dim_jbar != dims.dim_x + dims.c_dim {
        return Err(Error::InternalConsistency(format!(
            "dim Jbar != dim X + c for {} at g={g}",
            p.braced()
        )));
    }
    Ok(dims)
}
