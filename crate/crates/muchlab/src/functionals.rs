//! The three conservation laws, the branch function `g`, and the Lyapunov
//! surface `F_u(M, m)` with its closed-form first and second derivatives.
//!
//! `F_u` depends on a wave only through `(H₀, H₁, H₂)` and its L² norm; the
//! [`FStats`] type carries exactly those four scalars so the time dependence
//! of the L² norm stays explicit.

use serde::Serialize;
use thiserror::Error;

use crate::field::PeriodicField;
use crate::peakon;

#[derive(Debug, Error)]
pub enum FunctionalsError {
    #[error("surface point must satisfy M >= m > 0, got M = {max}, m = {min}")]
    DomainViolation { max: f64, min: f64 },
    #[error("Hessian has a one-sided square-root derivative at M = m")]
    HessianCusp,
}

/// Values of the three conservation laws `(H₀, H₁, H₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedTriple {
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
}

/// The four scalars that determine `F_u`: the conserved triple plus `∫u²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FStats {
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
    pub l2sq: f64,
}

impl FStats {
    /// Exact stats of the peakon `c φ` (rational constants, no quadrature).
    pub fn peakon(c: f64) -> Self {
        let inv = peakon::exact_invariants(c);
        Self {
            h0: inv.h0,
            h1: inv.h1,
            h2: inv.h2,
            l2sq: c * c * peakon::PHI_L2_SQ,
        }
    }

    /// Stats of a constant field `u ≡ c`.
    pub fn constant(c: f64) -> Self {
        Self {
            h0: c,
            h1: 0.5 * c * c,
            h2: c * c * c,
            l2sq: c * c,
        }
    }
}

/// A point `(M, m)` in the domain `M >= m > 0` of the Lyapunov surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FPoint {
    max: f64,
    min: f64,
}

impl FPoint {
    pub fn new(max: f64, min: f64) -> Result<Self, FunctionalsError> {
        if !(max >= min && min > 0.0) {
            return Err(FunctionalsError::DomainViolation { max, min });
        }
        Ok(Self { max, min })
    }

    pub fn max(self) -> f64 {
        self.max
    }

    pub fn min(self) -> f64 {
        self.min
    }
}

/// `H₀ = ∫u`, `H₁ = ½(μ(u)² + ∫u_x²)`, `H₂ = μ(u)∫u² + ½∫u u_x²`, all by
/// spectral differentiation and trapezoid quadrature.
pub fn conserved(u: &PeriodicField) -> ConservedTriple {
    let mu = u.mean();
    let ux = u.derivative();
    let ux_sq = ux.mul_pointwise(&ux);
    ConservedTriple {
        h0: mu,
        h1: 0.5 * (mu * mu + ux_sq.mean()),
        h2: mu * u.l2_sq() + 0.5 * u.mul_pointwise(&ux_sq).mean(),
    }
}

/// [`conserved`] plus the L² norm.
pub fn fstats(u: &PeriodicField) -> FStats {
    let c = conserved(u);
    FStats {
        h0: c.h0,
        h1: c.h1,
        h2: c.h2,
        l2sq: u.l2_sq(),
    }
}

const C1213: f64 = 12.0 / 13.0;

pub(crate) fn sqrt_2_39() -> f64 {
    (2.0_f64 / 39.0).sqrt()
}

/// The branch function: `g = u_x ± (12/13)√((13/6)(u - m))` with the `+`
/// branch on `(ξ, η]` (argmax to argmin) and the `-` branch on the rest of
/// the period. Identically zero for the peakon.
pub fn g_field(u: &PeriodicField) -> PeriodicField {
    let ext = u.extrema();
    let ux = u.derivative();
    let m = ext.min_val;
    let xi = ext.argmax;
    // Unwrap so that ξ < η <= ξ + 1; a degenerate (constant) field keeps
    // u - m ≡ 0 and both branches coincide with u_x.
    let span = (ext.argmin - xi).rem_euclid(1.0);
    let span = if span == 0.0 { 1.0 } else { span };
    let grid = u.grid();
    let values: Vec<f64> = grid
        .nodes()
        .zip(u.values().iter().zip(ux.values()))
        .map(|(x, (&uv, &uxv))| {
            let rel = (x - xi).rem_euclid(1.0);
            let sign = if rel > 0.0 && rel <= span { 1.0 } else { -1.0 };
            // Clamp: round-off can leave u - m at -1e-17 near the argmin.
            let root = (13.0 / 6.0 * (uv - m).max(0.0)).sqrt();
            uxv + sign * C1213 * root
        })
        .collect();
    PeriodicField::from_values(grid, values).expect("finite by construction")
}

/// The Lyapunov surface
/// `F_u(M,m) = M[H₁ - ½H₀² - 8√(2/39)(M-m)^{3/2} + (12/13)(H₀ - m)]
///  + (H₀ - 12/13)∫u² + (12/13) m H₀ + (8/5)√(2/39)(M-m)^{3/2}(2m+3M) - H₂`.
pub fn f_eval(s: &FStats, p: FPoint) -> f64 {
    let k = sqrt_2_39();
    let gap32 = (p.max - p.min).powf(1.5);
    let bracket = s.h1 - 0.5 * s.h0 * s.h0 - 8.0 * k * gap32 + C1213 * (s.h0 - p.min);
    p.max * bracket
        + (s.h0 - C1213) * s.l2sq
        + C1213 * p.min * s.h0
        + 1.6 * k * gap32 * (2.0 * p.min + 3.0 * p.max)
        - s.h2
}

/// Closed-form gradient `(∂F/∂M, ∂F/∂m)`.
pub fn f_grad(s: &FStats, p: FPoint) -> (f64, f64) {
    let k = sqrt_2_39();
    let gap32 = (p.max - p.min).powf(1.5);
    let d_max = s.h1 - 0.5 * s.h0 * s.h0 - 8.0 * k * gap32 + C1213 * (s.h0 - p.min);
    let d_min = C1213 * (s.h0 - p.max) + 8.0 * k * gap32;
    (d_max, d_min)
}

/// Closed-form Hessian `[[∂²F/∂M², ∂²F/∂M∂m], [∂²F/∂m∂M, ∂²F/∂m²]]`;
/// independent of the stats. Errors at `M = m` where the square root has only
/// a one-sided derivative.
pub fn f_hess(p: FPoint) -> Result<[[f64; 2]; 2], FunctionalsError> {
    if p.max == p.min {
        return Err(FunctionalsError::HessianCusp);
    }
    let k = sqrt_2_39();
    let root = (p.max - p.min).sqrt();
    let diag = -12.0 * k * root;
    let off = -C1213 + 12.0 * k * root;
    Ok([[diag, off], [off, diag]])
}

/// Both sides of the energy expansion around the peakon:
/// `H₁[u] - H₁[φ] = ½‖u - φ(·-ξ)‖²_μ + (12/13)(u(ξ+1/2) - M_φ)`.
///
/// The right side is expanded as `½‖u‖²_μ - ⟨u, φ̃(·-ξ)⟩_μ + ½‖φ‖²_μ` with the
/// exact `‖φ‖²_μ = 12/13`; for band-limited `u` the cross term against the
/// truncated peakon is exact, so the whole expansion is limited only by
/// round-off rather than by the peakon's k⁻² tail.
pub fn h1_expansion(u: &PeriodicField, xi: f64) -> (f64, f64) {
    let lhs = conserved(u).h1 - peakon::PHI_H1;
    let translate = peakon::peakon_field(1.0, xi.rem_euclid(1.0), u.grid());
    let half_dist_sq = 0.5 * u.mu_norm_sq() - u.mu_inner(&translate) + 0.5 * (2.0 * peakon::PHI_H1);
    let at_crest = u.transform().eval_at((xi + 0.5).rem_euclid(1.0));
    let rhs = half_dist_sq + C1213 * (at_crest - peakon::PHI_MAX);
    (lhs, rhs)
}

/// Both sides of the sharp maximum inequality
/// `max |f| <= √(13/12) ‖f‖_μ`; returns `(max_abs, bound)`.
pub fn max_mu_inequality(f: &PeriodicField) -> (f64, f64) {
    let ext = f.extrema();
    let max_abs = ext.max_val.abs().max(ext.min_val.abs());
    let bound = (13.0 / 12.0 * f.mu_norm_sq()).sqrt();
    (max_abs, bound)
}
