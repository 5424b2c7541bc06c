//! Verification suites: peakon constants, the energy-expansion / branch
//! identities, and the inequality family, each reported as named checks with
//! measured margins.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    random_positive_field, random_signed_field, refined_global_extrema, refined_local_extrema,
    CheckResult, LabError,
};
use crate::field::{Grid, PeriodicField};
use crate::functionals::{f_eval, fstats, h1_expansion, sqrt_2_39, FPoint};
use crate::peakon::{phi, phi_x, PHI_MAX};
use crate::quad::{gauss_legendre, integrate_periodic};

const C1213: f64 = 12.0 / 13.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Constants,
    Identities,
    Inequalities,
    All,
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        match s {
            "constants" => Ok(Suite::Constants),
            "identities" => Ok(Suite::Identities),
            "inequalities" => Ok(Suite::Inequalities),
            "all" => Ok(Suite::All),
            other => Err(LabError::UnknownSuite(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyParams {
    pub suite: Suite,
    /// Overrides the per-suite defaults (200 identity trials, 1000
    /// inequality trials) when set.
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    pub n: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            trials: None,
            seed: 7,
            tol: 1e-6,
            n: 512,
        }
    }
}

pub fn run_verify(params: &VerifyParams) -> Result<Vec<CheckResult>, LabError> {
    let mut checks = Vec::new();
    match params.suite {
        Suite::Constants => checks.extend(constants_suite(1024, params.tol)),
        Suite::Identities => checks.extend(identities_suite(
            params.trials.unwrap_or(200),
            params.seed,
            params.tol,
            params.n,
        )?),
        Suite::Inequalities => checks.extend(inequalities_suite(
            params.trials.unwrap_or(1000),
            params.seed,
            params.n,
        )?),
        Suite::All => {
            checks.extend(constants_suite(1024, params.tol));
            checks.extend(identities_suite(
                params.trials.unwrap_or(200),
                params.seed,
                params.tol,
                params.n,
            )?);
            checks.extend(inequalities_suite(
                params.trials.unwrap_or(1000),
                params.seed,
                params.n,
            )?);
        }
    }
    Ok(checks)
}

/// The nine peakon constants, reproduced numerically at the given resolution
/// and compared to their exact rational values at relative tolerance `tol`.
///
/// Integrals use composite Gauss–Legendre on the closed form over
/// `[-1/2, 1/2]` (the corner sits on the boundary, so every panel sees a
/// polynomial); extrema come from the sampled nodes; the one-sided slopes
/// from 3-point one-sided differences, exact for a quadratic.
pub fn constants_suite(n: usize, tol: f64) -> Vec<CheckResult> {
    let panels = n;
    let h0 = gauss_legendre(&|x| phi(x), -0.5, 0.5, panels);
    let phix_sq = gauss_legendre(&|x| phi_x(x) * phi_x(x), -0.5, 0.5, panels);
    let phi_sq = gauss_legendre(&|x| phi(x) * phi(x), -0.5, 0.5, panels);
    let phi_phix_sq = gauss_legendre(&|x| phi(x) * phi_x(x) * phi_x(x), -0.5, 0.5, panels);
    let h1 = 0.5 * (h0 * h0 + phix_sq);
    let h2 = h0 * phi_sq + 0.5 * phi_phix_sq;

    let mut max_val = f64::NEG_INFINITY;
    let mut min_val = f64::INFINITY;
    let mut argmax = 0.0;
    let mut argmin = 0.0;
    for j in 0..n {
        let x = j as f64 / n as f64;
        let v = phi(x);
        if v > max_val {
            max_val = v;
            argmax = x;
        }
        if v < min_val {
            min_val = v;
            argmin = x;
        }
    }

    let h = 1.0 / n as f64;
    let slope_left = (3.0 * phi(0.5) - 4.0 * phi(0.5 - h) + phi(0.5 - 2.0 * h)) / (2.0 * h);
    let slope_right = (-3.0 * phi(0.5) + 4.0 * phi(0.5 + h) - phi(0.5 + 2.0 * h)) / (2.0 * h);

    let rel = |measured: f64, exact: f64| (measured - exact).abs() / exact.abs();
    vec![
        CheckResult::residual("constants/h0", rel(h0, 12.0 / 13.0), tol),
        CheckResult::residual("constants/h1", rel(h1, 6.0 / 13.0), tol),
        CheckResult::residual("constants/h2", rel(h2, 9024.0 / 10985.0), tol),
        CheckResult::residual("constants/max", rel(max_val, 1.0), tol),
        CheckResult::residual("constants/min", rel(min_val, 23.0 / 26.0), tol),
        CheckResult::residual("constants/argmax", (argmax - 0.5).abs(), tol),
        CheckResult::residual("constants/argmin", argmin.abs(), tol),
        CheckResult::residual("constants/slope-left", rel(slope_left, 6.0 / 13.0), tol),
        CheckResult::residual("constants/slope-right", rel(slope_right, -6.0 / 13.0), tol),
    ]
}

/// For one positive field: both sides of the two branch identities.
/// Left sides integrate the branch formula on the interpolant with panels
/// split at every refined extremum; right sides assemble the closed forms
/// from spectral functionals and the refined global extrema.
fn branch_identity_residuals(u: &PeriodicField) -> (f64, f64) {
    let s = u.transform();
    let (xi, max_val, eta, min_val) = refined_global_extrema(u, &s);
    let breaks = refined_local_extrema(u, &s);

    let span = {
        let d = (eta - xi).rem_euclid(1.0);
        if d == 0.0 {
            1.0
        } else {
            d
        }
    };
    let g_at = |x: f64| {
        let rel = (x - xi).rem_euclid(1.0);
        let sign = if rel > 0.0 && rel <= span { 1.0 } else { -1.0 };
        let root = (13.0 / 6.0 * (s.eval_at(x) - min_val).max(0.0)).sqrt();
        s.eval_dx_at(x) + sign * C1213 * root
    };

    let g_sq = |x: f64| {
        let g = g_at(x);
        g * g
    };
    let ug_sq = |x: f64| {
        let g = g_at(x);
        s.eval_at(x) * g * g
    };
    let half_g_sq = 0.5 * integrate_periodic(&g_sq, xi, &breaks, 8);
    let half_ug_sq = 0.5 * integrate_periodic(&ug_sq, xi, &breaks, 8);

    let st = fstats(u);
    let k = sqrt_2_39();
    let gap32 = (max_val - min_val).max(0.0).powf(1.5);
    let rhs_g =
        st.h1 - 0.5 * st.h0 * st.h0 - 8.0 * k * gap32 + C1213 * (st.h0 - min_val);
    let rhs_ug = st.h2
        - (st.h0 - C1213) * st.l2sq
        - C1213 * min_val * st.h0
        - 1.6 * k * gap32 * (2.0 * min_val + 3.0 * max_val);

    ((half_g_sq - rhs_g).abs(), (half_ug_sq - rhs_ug).abs())
}

/// Energy-expansion and branch identities over seeded random positive
/// band-limited fields; reports the worst residual of each identity.
pub fn identities_suite(
    trials: usize,
    seed: u64,
    tol: f64,
    n: usize,
) -> Result<Vec<CheckResult>, LabError> {
    let grid = Grid::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_expansion = 0.0_f64;
    let mut worst_g = 0.0_f64;
    let mut worst_ug = 0.0_f64;
    for _ in 0..trials {
        let u = random_positive_field(&mut rng, grid);
        let xi: f64 = rand::Rng::gen_range(&mut rng, 0.0..1.0);
        let (lhs, rhs) = h1_expansion(&u, xi);
        worst_expansion = worst_expansion.max((lhs - rhs).abs());

        let (res_g, res_ug) = branch_identity_residuals(&u);
        worst_g = worst_g.max(res_g);
        worst_ug = worst_ug.max(res_ug);
    }
    Ok(vec![
        CheckResult::residual("identities/energy-expansion", worst_expansion, tol),
        CheckResult::residual("identities/g-square", worst_g, tol),
        CheckResult::residual("identities/u-g-square", worst_ug, tol),
    ])
}

/// The inequality family over seeded random fields; every margin must stay
/// on the right side of its bound, plus the peakon equality case of the
/// sharp maximum inequality from the exact constants.
pub fn inequalities_suite(
    trials: usize,
    seed: u64,
    n: usize,
) -> Result<Vec<CheckResult>, LabError> {
    let grid = Grid::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut min_f = f64::INFINITY;
    let mut min_max_margin = f64::INFINITY;
    let mut min_sandwich_lower = f64::INFINITY;
    let mut min_sandwich_upper = f64::INFINITY;
    let mut min_eps = [f64::INFINITY; 3];
    let mut min_h1_bound = f64::INFINITY;
    let epsilons = [1.0, 24.0, 100.0];
    let cosh_const = 0.5_f64.cosh() / (2.0 * 0.5_f64.sinh());

    for _ in 0..trials {
        // Lyapunov nonnegativity needs positive fields.
        let u = random_positive_field(&mut rng, grid);
        let s = u.transform();
        let (_, max_val, _, min_val) = refined_global_extrema(&u, &s);
        let p = FPoint::new(max_val, min_val).expect("positive field extrema");
        min_f = min_f.min(f_eval(&fstats(&u), p));

        // The remaining inequalities hold for arbitrary H¹ fields.
        let f = random_signed_field(&mut rng, grid);
        let sf = f.transform();
        let (_, fmax, _, fmin) = refined_global_extrema(&f, &sf);
        let max_abs = fmax.abs().max(fmin.abs());
        let mu_sq = f.mu_norm_sq();
        let h1_sq = f.h1_norm_sq();
        let fx_sq = f.derivative().l2_sq();
        let mean_sq = f.mean() * f.mean();

        min_max_margin = min_max_margin.min((13.0 / 12.0 * mu_sq).sqrt() - max_abs);
        min_sandwich_lower = min_sandwich_lower.min(h1_sq - mu_sq);
        min_sandwich_upper = min_sandwich_upper.min(3.0 * mu_sq - h1_sq);
        for (i, eps) in epsilons.iter().enumerate() {
            let bound = (eps + 2.0) / 24.0 * fx_sq + (eps + 2.0) / eps * mean_sq;
            min_eps[i] = min_eps[i].min(bound - max_abs * max_abs);
        }
        min_h1_bound = min_h1_bound.min(cosh_const * h1_sq - max_abs * max_abs);
    }

    // Peakon equality case: max φ = 1 and ‖φ‖²_μ = 12/13, the latter
    // reproduced by quadrature on the closed form.
    let phix_sq = gauss_legendre(&|x| phi_x(x) * phi_x(x), -0.5, 0.5, 1024);
    let h0 = gauss_legendre(&|x| phi(x), -0.5, 0.5, 1024);
    let bound = (13.0 / 12.0 * (h0 * h0 + phix_sq)).sqrt();
    let equality_gap = (PHI_MAX - bound).abs();

    Ok(vec![
        CheckResult::margin("inequalities/lyapunov-min-F", min_f, -1e-8),
        CheckResult::margin("inequalities/max-mu-margin", min_max_margin, 0.0),
        CheckResult::residual("inequalities/max-mu-peakon-equality", equality_gap, 1e-6),
        CheckResult::margin("inequalities/norms-lower", min_sandwich_lower, -1e-12),
        CheckResult::margin("inequalities/norms-upper", min_sandwich_upper, -1e-12),
        CheckResult::margin("inequalities/max-eps-1", min_eps[0], -1e-12),
        CheckResult::margin("inequalities/max-eps-24", min_eps[1], -1e-12),
        CheckResult::margin("inequalities/max-eps-100", min_eps[2], -1e-12),
        CheckResult::margin("inequalities/max-h1-bound", min_h1_bound, -1e-12),
    ])
}

/// Extra diagnostic used by tests: the branch-identity right side must not
/// depend on which of several equal global extrema is picked. Returns the
/// two left sides computed with explicitly swapped representatives.
pub fn g_square_with_representative(u: &PeriodicField, xi: f64, eta: f64, min_val: f64) -> f64 {
    let s = u.transform();
    let breaks = refined_local_extrema(u, &s);
    let span = {
        let d = (eta - xi).rem_euclid(1.0);
        if d == 0.0 {
            1.0
        } else {
            d
        }
    };
    let g_sq = |x: f64| {
        let rel = (x - xi).rem_euclid(1.0);
        let sign = if rel > 0.0 && rel <= span { 1.0 } else { -1.0 };
        let root = (13.0 / 6.0 * (s.eval_at(x) - min_val).max(0.0)).sqrt();
        let g = s.eval_dx_at(x) + sign * C1213 * root;
        g * g
    };
    integrate_periodic(&g_sq, xi, &breaks, 8)
}
