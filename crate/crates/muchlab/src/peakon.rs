//! Closed-form peaked traveling waves `u(x,t) = c φ(x - ct)` with
//! `φ(x) = (12x² + 23)/26` on `[-1/2, 1/2]`, extended 1-periodically:
//! their pointwise evaluation, exact invariants, derivative structure, and
//! distributional second derivative.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::field::{Grid, PeriodicField, Spectrum};
use crate::functionals::ConservedTriple;

/// `φ(1/2) = 1`, the crest value.
pub const PHI_MAX: f64 = 1.0;
/// `φ(0) = 23/26`, the trough value.
pub const PHI_MIN: f64 = 23.0 / 26.0;
/// `H₀[φ] = ∫φ = 12/13`.
pub const PHI_MEAN: f64 = 12.0 / 13.0;
/// `H₁[φ] = 6/13`; also `‖φ‖²_μ = 12/13 = 2 H₁[φ]`.
pub const PHI_H1: f64 = 6.0 / 13.0;
/// `H₂[φ] = 9024/10985`.
pub const PHI_H2: f64 = 9024.0 / 10985.0;
/// `∫φ² = 721/845`.
pub const PHI_L2_SQ: f64 = 721.0 / 845.0;
/// One-sided slope magnitude at the crest: `|φ_x(1/2∓)| = 6/13`.
pub const PHI_CORNER_SLOPE: f64 = 6.0 / 13.0;

/// Wrap into `[-1/2, 1/2)`. Half-integers map to `-1/2`, so slopes taken
/// through this wrap are right-hand limits at the corner.
pub fn wrap_centered(x: f64) -> f64 {
    let frac = x - x.floor();
    if frac >= 0.5 {
        frac - 1.0
    } else {
        frac
    }
}

/// `φ(x) = (12 wrap(x)² + 23)/26`, continuous and 1-periodic.
pub fn phi(x: f64) -> f64 {
    let w = wrap_centered(x);
    (12.0 * w * w + 23.0) / 26.0
}

/// `φ_x(x) = 12 wrap(x)/13`. At the corner `x ≡ ±1/2` this returns the
/// right-hand limit `-6/13`; see [`is_corner`].
pub fn phi_x(x: f64) -> f64 {
    12.0 * wrap_centered(x) / 13.0
}

/// True when `x` sits exactly on the derivative corner `x ≡ ±1/2 (mod 1)`.
pub fn is_corner(x: f64) -> bool {
    wrap_centered(x) == -0.5
}

/// A peakon `c φ(x - ξ₀)` identified by speed (= amplitude scale) and phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peakon {
    pub speed: f64,
    pub phase: f64,
}

impl Peakon {
    pub fn new(speed: f64, phase: f64) -> Self {
        Self {
            speed,
            phase: phase.rem_euclid(1.0),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.speed * phi(x - self.phase)
    }

    /// Location of the crest in `[0, 1)` (for positive speed).
    pub fn crest(&self) -> f64 {
        (self.phase + 0.5).rem_euclid(1.0)
    }

    pub fn field(&self, grid: Grid) -> PeriodicField {
        peakon_field(self.speed, self.phase, grid)
    }

    pub fn spectrum(&self, grid: Grid) -> Spectrum {
        peakon_spectrum(self.speed, self.phase, grid)
    }

    pub fn invariants(&self) -> ConservedTriple {
        exact_invariants(self.speed)
    }
}

/// Closed-form Fourier coefficients of `c φ(· - ξ₀)` truncated to the grid:
/// `c_0 = 12c/13`, `c_k = 3c(-1)^k/(13π²k²)` times the phase factor, Nyquist
/// zero. Truncation is the optimal L² approximation and avoids sampling the
/// corner.
pub fn peakon_spectrum(c: f64, xi0: f64, grid: Grid) -> Spectrum {
    let mut s = Spectrum::zeros(grid);
    s.set_coeff(0, Complex64::new(c * 12.0 / 13.0, 0.0));
    let half = (grid.n() / 2) as i64;
    for k in 1..half {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mag = 3.0 * c * sign / (13.0 * PI * PI * (k * k) as f64);
        let phase = Complex64::from_polar(1.0, -TAU * k as f64 * xi0);
        let coeff = mag * phase;
        s.set_coeff(k, coeff);
        s.set_coeff(-k, coeff.conj());
    }
    s
}

/// Grid field of the spectrally truncated peakon (see [`peakon_spectrum`]).
pub fn peakon_field(c: f64, xi0: f64, grid: Grid) -> PeriodicField {
    peakon_spectrum(c, xi0, grid).inverse_transform()
}

/// `(H₀, H₁, H₂)` of `c φ`, from the exact values for `c = 1` and the
/// homogeneity degrees 1, 2, 3 of the three functionals.
pub fn exact_invariants(c: f64) -> ConservedTriple {
    ConservedTriple {
        h0: c * PHI_MEAN,
        h1: c * c * PHI_H1,
        h2: c * c * c * PHI_H2,
    }
}

/// Pairing of the distributional second derivative
/// `φ_xx = 12/13 - (12/13) δ(· - 1/2)` with a test field:
/// returns `(12/13) ∫ψ - (12/13) ψ(1/2)`.
pub fn phi_xx_pairing(test: &PeriodicField) -> f64 {
    let at_corner = test.transform().eval_at(0.5);
    12.0 / 13.0 * (test.mean() - at_corner)
}
