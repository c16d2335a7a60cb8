use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::checkpoint::{checkpoint_key, Checkpoint, CheckpointRecord};
use super::EngineOptions;
use crate::error::{Error, Result};
use crate::koszul::{
    basis_dimension_polynomial, complex_spec, enumerate_bidegrees, CoboundaryBuilder, ComplexKind,
    ComplexSpec, RemovalPlan,
};
use crate::linalg::{rank, PrimeModulus};
use crate::polygon::{symmetry_group, AffineUnimodularMap, LatticePoint, LatticePolygon};

/// Cohomology of one complex, with its bigraded breakdown when requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryResult {
    pub kind: ComplexKind,
    pub value: u64,
    pub bigraded: BTreeMap<LatticePoint, u64>,
    /// Bidegrees with a nonzero middle term.
    pub bidegrees: usize,
    /// Orbit representatives actually worked on.
    pub orbits: usize,
    /// Largest matrix dimension met.
    pub peak_block: usize,
}

/// `x ↦ Mx + w·t` for each `x ↦ Mx + t`.
pub fn dilated_symmetries(group: &[AffineUnimodularMap], weight: i64) -> Vec<AffineUnimodularMap> {
    group
        .iter()
        .map(|g| AffineUnimodularMap {
            matrix: g.matrix,
            shift: weight * g.shift,
        })
        .collect()
}

fn orbits(points: &[LatticePoint], maps: &[AffineUnimodularMap]) -> Vec<Vec<LatticePoint>> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut seen: HashSet<LatticePoint> = HashSet::with_capacity(sorted.len());
    let mut out = Vec::new();
    for &x in &sorted {
        if seen.contains(&x) {
            continue;
        }
        let mut orbit = vec![x];
        seen.insert(x);
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for g in maps {
                let z = g.apply(y);
                debug_assert!(sorted.binary_search(&z).is_ok(), "symmetry leaves the region");
                if seen.insert(z) {
                    orbit.push(z);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Partition into orbits: `(smallest member, orbit size)` in increasing
/// order of representatives.
pub fn orbit_reduce(points: &[LatticePoint], maps: &[AffineUnimodularMap]) -> Vec<(LatticePoint, usize)> {
    orbits(points, maps).into_iter().map(|o| (o[0], o.len())).collect()
}

/// Symmetries of the polygon that fix the removed points as a set.
pub fn plan_symmetries(poly: &LatticePolygon, plan: &RemovalPlan) -> Vec<AffineUnimodularMap> {
    let removed: HashSet<LatticePoint> = plan.removed.iter().copied().collect();
    symmetry_group(poly)
        .into_iter()
        .filter(|g| plan.removed.iter().all(|p| removed.contains(&g.apply(*p))))
        .collect()
}

/// Everything shared by the entries of one table.
pub(crate) struct Session<'a> {
    pub poly: &'a LatticePolygon,
    pub options: &'a EngineOptions,
    pub plan: RemovalPlan,
    pub group: Vec<AffineUnimodularMap>,
    pub checkpoint: Option<Checkpoint>,
    pub key: String,
    pool: rayon::ThreadPool,
}

impl<'a> Session<'a> {
    pub fn new(poly: &'a LatticePolygon, options: &'a EngineOptions) -> Result<Session<'a>> {
        let plan = options.removal_plan(poly);
        Self::with_plan(poly, options, plan)
    }

    pub fn with_plan(poly: &'a LatticePolygon, options: &'a EngineOptions, plan: RemovalPlan) -> Result<Session<'a>> {
        plan.verify(poly)?;
        let group = if options.symmetry {
            plan_symmetries(poly, &plan)
        } else {
            vec![AffineUnimodularMap::IDENTITY]
        };
        let checkpoint = match &options.checkpoint {
            Some(path) => Some(Checkpoint::open(path)?),
            None => None,
        };
        let key = checkpoint_key(poly, options.prime, &plan, options.symmetry);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers.max(1))
            .build()
            .map_err(|e| Error::ResourceExceeded(e.to_string()))?;
        Ok(Session {
            poly,
            options,
            plan,
            group,
            checkpoint,
            key,
            pool,
        })
    }

    pub fn run(&self, kind: ComplexKind) -> Result<EntryResult> {
        let spec = complex_spec(self.poly, kind, &self.plan)?;
        self.pool.install(|| self.run_spec(&spec, kind))
    }

    fn run_spec(&self, spec: &ComplexSpec, kind: ComplexKind) -> Result<EntryResult> {
        let prime = self.options.prime;
        let cap = self.options.memory_cap;
        if spec.wedge.len() > 64 {
            return Err(Error::ResourceExceeded(format!(
                "{} wedge points, at most 64 are supported",
                spec.wedge.len()
            )));
        }
        let p = spec.p;
        let mid = basis_dimension_polynomial(&spec.wedge, &spec.middle, p);
        let low = (!spec.incoming_zero).then(|| basis_dimension_polynomial(&spec.wedge, &spec.lower, p + 1));
        let points: Vec<LatticePoint> = enumerate_bidegrees(spec)
            .into_iter()
            .filter(|&ab| mid.coeff(p, ab) > 0)
            .collect();
        let maps = dilated_symmetries(&self.group, spec.translation_weight());
        let orbit_list = orbits(&points, &maps);
        let outgoing = (p >= 1 && !spec.upper.is_empty())
            .then(|| CoboundaryBuilder::new(&spec.wedge, &spec.middle, &spec.upper, p));
        let incoming = (!spec.incoming_zero && !spec.incoming_injective)
            .then(|| CoboundaryBuilder::new(&spec.wedge, &spec.lower, &spec.middle, p + 1));

        let task = |orbit: &Vec<LatticePoint>| -> Result<(CheckpointRecord, usize)> {
            let ab = orbit[0];
            if let Some(rec) = self.checkpoint.as_ref().and_then(|c| c.lookup(&self.key, kind, ab)) {
                return Ok((rec.clone(), 0));
            }
            let cols = mid.coeff(p, ab);
            let mut peak = cols as usize;
            let mut ranked = |b: &CoboundaryBuilder| -> Result<u64> {
                let m = b.block(ab).to_fp(prime);
                peak = peak.max(m.n_rows()).max(m.n_cols());
                if m.estimated_bytes() > cap {
                    return Err(Error::ResourceExceeded(format!(
                        "{kind} at bidegree {ab}: {}x{} block over the memory cap",
                        m.n_rows(),
                        m.n_cols()
                    )));
                }
                Ok(rank(m) as u64)
            };
            let rank_out = match &outgoing {
                Some(b) => ranked(b)?,
                None => 0,
            };
            let rank_in = match (&incoming, &low) {
                (Some(b), _) => ranked(b)?,
                (None, Some(f)) => f.coeff(p + 1, ab),
                (None, None) => 0,
            };
            if rank_out + rank_in > cols {
                return Err(Error::Inconsistent(format!(
                    "{kind} at {ab}: ranks {rank_out} + {rank_in} exceed dimension {cols}"
                )));
            }
            let rec = CheckpointRecord {
                key: self.key.clone(),
                strand: kind.name().to_string(),
                l: kind.index(),
                bidegree: [ab.x, ab.y],
                orbit_size: orbit.len(),
                cols,
                rank: rank_out,
                rank_in,
            };
            if let Some(c) = &self.checkpoint {
                c.record(&rec)?;
            }
            Ok((rec, peak))
        };
        let results: Vec<Result<(CheckpointRecord, usize)>> = orbit_list.par_iter().map(task).collect();

        let mut value = 0u64;
        let mut bigraded = BTreeMap::new();
        let mut peak_block = 0;
        for (orbit, res) in orbit_list.iter().zip(results) {
            let (rec, peak) = res?;
            peak_block = peak_block.max(peak);
            let v = rec.value();
            value += v * orbit.len() as u64;
            if self.options.bigraded && v != 0 {
                for &ab in orbit {
                    bigraded.insert(ab, v);
                }
            }
        }
        Ok(EntryResult {
            kind,
            value,
            bigraded,
            bidegrees: points.len(),
            orbits: orbit_list.len(),
            peak_block,
        })
    }
}

/// One entry through a chosen complex, with the removal and symmetry
/// settings of `options`.
pub fn compute_entry(poly: &LatticePolygon, kind: ComplexKind, options: &EngineOptions) -> Result<EntryResult> {
    Session::new(poly, options)?.run(kind)
}

/// `b_ℓ` as the middle cohomology of the untwisted complex at `(ℓ, 1)`.
pub fn compute_b(poly: &LatticePolygon, l: usize, options: &EngineOptions) -> Result<EntryResult> {
    compute_entry(poly, ComplexKind::PrimalB(l), options)
}

/// `c_ℓ` as a kernel dimension of the twisted complex at `(ℓ−1, 1)`.
pub fn compute_c(poly: &LatticePolygon, l: usize, options: &EngineOptions) -> Result<EntryResult> {
    compute_entry(poly, ComplexKind::DualC(l), options)
}

/// Same as [`compute_entry`] with an explicit prime and removal plan.
pub fn compute_with_plan(
    poly: &LatticePolygon,
    kind: ComplexKind,
    prime: PrimeModulus,
    plan: &RemovalPlan,
    options: &EngineOptions,
) -> Result<EntryResult> {
    let options = EngineOptions {
        prime,
        ..options.clone()
    };
    Session::with_plan(poly, &options, plan.clone())?.run(kind)
}
