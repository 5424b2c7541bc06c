//! Tabulate the Lyapunov surface `F(M, m)` over a rectangle intersected with
//! the domain `M >= m > 0`, with the gradient norm at each point and the
//! location of the surface maximum.

use serde::Serialize;

use super::LabError;
use crate::functionals::{f_eval, f_grad, FPoint, FStats};

#[derive(Debug, Clone, Copy)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.lo + i as f64 * step).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub stats: FStats,
    pub max_range: AxisRange,
    pub min_range: AxisRange,
    /// Optional single-point query, evaluated exactly.
    pub at: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SurfaceSample {
    pub max: f64,
    pub min: f64,
    pub f: f64,
    pub gradnorm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceResult {
    pub samples: Vec<SurfaceSample>,
    /// Sample with the largest F on the grid.
    pub peak: SurfaceSample,
    /// Value at the `at` query point, when requested.
    pub f_at: Option<f64>,
}

pub fn tabulate(spec: &SurfaceSpec) -> Result<SurfaceResult, LabError> {
    let mut samples = Vec::new();
    for &max in &spec.max_range.values() {
        for &min in &spec.min_range.values() {
            let Ok(p) = FPoint::new(max, min) else {
                continue; // outside M >= m > 0
            };
            let f = f_eval(&spec.stats, p);
            let (gm, gmin) = f_grad(&spec.stats, p);
            samples.push(SurfaceSample {
                max,
                min,
                f,
                gradnorm: (gm * gm + gmin * gmin).sqrt(),
            });
        }
    }
    if samples.is_empty() {
        return Err(LabError::EmptyDomain);
    }
    let peak = *samples
        .iter()
        .max_by(|a, b| a.f.partial_cmp(&b.f).unwrap())
        .unwrap();
    let f_at = match spec.at {
        Some((max, min)) => {
            let p = FPoint::new(max, min)
                .map_err(|e| LabError::BadConfig(e.to_string()))?;
            Some(f_eval(&spec.stats, p))
        }
        None => None,
    };
    Ok(SurfaceResult { samples, peak, f_at })
}
