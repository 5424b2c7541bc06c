//! The ε–δ stability sweep: evolve peakon initial data perturbed by an exact
//! H¹ amount δ, track the orbital distance and crest height, and check the
//! proof-chain inequality at every snapshot.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{orbital_distance, random_signed_field, DistanceMode, LabError};
use crate::field::{Grid, PeriodicField};
use crate::functionals::conserved;
use crate::peakon::{peakon_field, PHI_H1};
use crate::solver::{evolve, RunStatus, SolverConfig};

/// Slack allowed when checking the proof-chain inequality at a snapshot.
pub const CHAIN_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationKind {
    /// `sin(2πx)`, rescaled to the requested H¹ size.
    SingleMode,
    /// Seeded random band-limited field, rescaled to the requested H¹ size.
    RandomBand,
    /// `u₀ = (1+δ')φ`: another orbit member with speed `c(1+δ')`.
    AmplitudeScale,
}

impl FromStr for PerturbationKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        match s {
            "single-mode" => Ok(Self::SingleMode),
            "random-band" => Ok(Self::RandomBand),
            "amplitude-scale" => Ok(Self::AmplitudeScale),
            other => Err(LabError::UnknownPerturbation(other.to_string())),
        }
    }
}

impl PerturbationKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SingleMode => "single-mode",
            Self::RandomBand => "random-band",
            Self::AmplitudeScale => "amplitude-scale",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Perturbation sizes in H¹ norm; must be positive and sorted ascending.
    pub deltas: Vec<f64>,
    pub kind: PerturbationKind,
    pub seed: u64,
    pub solver: SolverConfig,
    pub c: f64,
    pub distance_mode: DistanceMode,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), LabError> {
        if self.deltas.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
            return Err(LabError::BadConfig(
                "sweep deltas must be nonnegative finite numbers".into(),
            ));
        }
        if self.deltas.windows(2).any(|w| w[0] > w[1]) {
            return Err(LabError::BadConfig("sweep deltas must be sorted".into()));
        }
        self.solver.validate()?;
        Ok(())
    }
}

/// Outcome of one δ in the sweep.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaOutcome {
    pub delta: f64,
    /// sup over recorded t of the orbital distance.
    pub sup_dist: f64,
    /// sup over recorded t of |u(ξ(t)) - c|.
    pub sup_crest_dev: f64,
    /// Worst lhs - rhs of the proof-chain inequality over the snapshots.
    pub chain_max_defect: f64,
    pub chain_ok: bool,
    /// `sup_dist / √δ` (∞-free: 0 when δ = 0).
    pub dist_ratio: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub outcomes: Vec<DeltaOutcome>,
    /// Whether sup-distance is nondecreasing in δ.
    pub monotone: bool,
}

/// Proof-chain right side, scaled to speed `c`:
/// `6(H₁[u] - c²H₁[φ]) + (72/13)c(c - u(ξ+1/2))`.
fn chain_rhs(h1: f64, c: f64, crest_value: f64) -> f64 {
    6.0 * (h1 - c * c * PHI_H1) + 72.0 / 13.0 * c * (c - crest_value)
}

/// Build the initial data for one δ: the perturbation is constructed in
/// closed form and rescaled so the H¹ distance to `cφ` equals δ exactly.
fn initial_data(
    base: &PeriodicField,
    grid: Grid,
    kind: PerturbationKind,
    seed: u64,
    job: u64,
    delta: f64,
) -> PeriodicField {
    if delta == 0.0 {
        return base.clone();
    }
    let perturbation = match kind {
        PerturbationKind::SingleMode => {
            PeriodicField::from_fn(grid, |x| (std::f64::consts::TAU * x).sin())
        }
        PerturbationKind::RandomBand => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(job);
            random_signed_field(&mut rng, grid)
        }
        PerturbationKind::AmplitudeScale => base.clone(),
    };
    let norm = perturbation.h1_norm_sq().sqrt();
    base.add(&perturbation.scale(delta / norm))
}

fn run_delta(spec: &SweepSpec, job: usize, delta: f64) -> Result<DeltaOutcome, LabError> {
    let grid = Grid::new(spec.solver.n)?;
    let base = peakon_field(spec.c, 0.0, grid);
    let u0 = initial_data(&base, grid, spec.kind, spec.seed, job as u64, delta);
    let record = evolve(&u0, &spec.solver)?;

    let mut sup_dist = 0.0_f64;
    let mut sup_crest_dev = 0.0_f64;
    let mut chain_max_defect = f64::NEG_INFINITY;
    for (field, ext) in record.fields.iter().zip(&record.extrema) {
        let (_, dist) = orbital_distance(field, spec.c, spec.distance_mode);
        sup_dist = sup_dist.max(dist);

        let s = field.transform();
        let crest_value = s.eval_at(ext.argmax);
        sup_crest_dev = sup_crest_dev.max((crest_value - spec.c).abs());

        // Proof chain pairs the translate with the crest value at the same ξ.
        let xi = (ext.argmax - 0.5).rem_euclid(1.0);
        let translate = peakon_field(spec.c, xi, grid);
        let lhs = field.sub(&translate).h1_norm_sq();
        let rhs = chain_rhs(conserved(field).h1, spec.c, crest_value);
        chain_max_defect = chain_max_defect.max(lhs - rhs);
    }
    let chain_ok = chain_max_defect <= CHAIN_SLACK;

    let verdict = match record.status {
        RunStatus::Completed if chain_ok => "ok".to_string(),
        RunStatus::Completed => "chain-violation".to_string(),
        RunStatus::Breaking { t } => format!("run terminated (breaking) at t = {t:.6}"),
        RunStatus::NonFinite { t } => format!("run failed (non-finite) at t = {t:.6}"),
    };
    Ok(DeltaOutcome {
        delta,
        sup_dist,
        sup_crest_dev,
        chain_max_defect,
        chain_ok,
        dist_ratio: if delta > 0.0 {
            sup_dist / delta.sqrt()
        } else {
            0.0
        },
        verdict,
    })
}

/// Run every δ as an independent job (they share no mutable state) and
/// assemble the report ordered by δ. Identical specs give identical reports.
pub fn run_sweep(spec: &SweepSpec) -> Result<StabilityReport, LabError> {
    spec.validate()?;
    let mut outcomes = spec
        .deltas
        .par_iter()
        .enumerate()
        .map(|(job, &delta)| run_delta(spec, job, delta))
        .collect::<Result<Vec<_>, _>>()?;
    outcomes.sort_by(|a, b| a.delta.partial_cmp(&b.delta).unwrap());
    let monotone = outcomes
        .windows(2)
        .all(|w| w[1].sup_dist >= w[0].sup_dist - 1e-12);
    Ok(StabilityReport { outcomes, monotone })
}
