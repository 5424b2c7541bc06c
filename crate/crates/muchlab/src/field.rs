//! Periodic grid, spectral transforms, differentiation, quadrature, and the
//! `H^1` and μ norms — the numerical substrate for everything else.
//!
//! Functions live on the circle `S^1 = [0, 1)` sampled at `n` uniform nodes
//! `x_j = j/n`. Spectra follow the convention
//! `u(x) = Σ_k c_k e^{2πikx}` with wavenumbers `k = -n/2 .. n/2 - 1`.
//! The Nyquist mode `k = -n/2` is zeroed by every differentiation; quadrature
//! is the trapezoid rule on the uniform nodes, which for periodic data is the
//! plain sample mean and is exact for band-limited integrands.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("grid size {0} must be a power of two >= 16")]
    BadGridSize(usize),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("field contains non-finite samples")]
    NonFinite,
}

/// Uniform grid on `S^1` with `n` nodes `x_j = j/n`, `n` a power of two >= 16.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self, FieldError> {
        if !n.is_power_of_two() || n < 16 {
            return Err(FieldError::BadGridSize(n));
        }
        Ok(Self { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn spacing(self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn node(self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn nodes(self) -> impl Iterator<Item = f64> {
        let n = self.n;
        (0..n).map(move |j| j as f64 / n as f64)
    }

    /// Signed wavenumber of FFT bin `m` (bins `0..n` map to `0..n/2, -n/2..-1`).
    pub fn wavenumber(self, m: usize) -> i64 {
        if m < self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }
}

static PLANS: Lazy<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut map = PLANS.lock().unwrap();
    map.entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Real samples of a 1-periodic function on the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    grid: Grid,
    values: Vec<f64>,
}

impl PeriodicField {
    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.n()],
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.nodes().map(f).collect(),
        }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self, FieldError> {
        if values.len() != grid.n() {
            return Err(FieldError::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(FieldError::NonFinite);
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |a, &v| a.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul_pointwise(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn transform(&self) -> Spectrum {
        let n = self.grid.n();
        let mut buf: Vec<Complex64> =
            self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        plan(n, false).process(&mut buf);
        let scale = 1.0 / n as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
        Spectrum {
            grid: self.grid,
            coeffs: buf,
        }
    }

    /// Mean value `μ(f)`; the trapezoid rule on uniform periodic nodes, equal
    /// to the zeroth Fourier coefficient.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.grid.n() as f64
    }

    /// Trapezoid `∫ f^2 dx`; equals `Σ |c_k|^2` (discrete Parseval) exactly.
    pub fn l2_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.grid.n() as f64
    }

    /// Spectral derivative: `c_k ↦ 2πik c_k`, Nyquist mode zeroed.
    pub fn derivative(&self) -> Self {
        let mut s = self.transform();
        s.differentiate();
        s.inverse_transform()
    }

    /// `⟨f, g⟩_μ = μ(f) μ(g) + ∫ f_x g_x dx`.
    pub fn mu_inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let fx = self.derivative();
        let gx = other.derivative();
        let cross = fx
            .values
            .iter()
            .zip(&gx.values)
            .map(|(&a, &b)| a * b)
            .sum::<f64>()
            / self.grid.n() as f64;
        self.mean() * other.mean() + cross
    }

    pub fn mu_norm_sq(&self) -> f64 {
        self.mu_inner(self)
    }

    /// `‖f‖²_{H¹} = ∫ f² + ∫ f_x²`.
    pub fn h1_norm_sq(&self) -> f64 {
        self.l2_sq() + self.derivative().l2_sq()
    }

    /// Locate max and min. Discrete scan refined by a 3-point quadratic fit,
    /// offset capped to half a cell; ties go to the smallest coordinate.
    pub fn extrema(&self) -> ExtremaRecord {
        let n = self.grid.n();
        let mut jmax = 0;
        let mut jmin = 0;
        for j in 1..n {
            if self.values[j] > self.values[jmax] {
                jmax = j;
            }
            if self.values[j] < self.values[jmin] {
                jmin = j;
            }
        }
        let (argmax, max_val) = self.refine_vertex(jmax, true);
        let (argmin, min_val) = self.refine_vertex(jmin, false);
        ExtremaRecord {
            max_val,
            min_val,
            argmax,
            argmin,
        }
    }

    fn refine_vertex(&self, j: usize, maximize: bool) -> (f64, f64) {
        let n = self.grid.n();
        let ym = self.values[(j + n - 1) % n];
        let y0 = self.values[j];
        let yp = self.values[(j + 1) % n];
        let curv = yp - 2.0 * y0 + ym;
        let usable = if maximize { curv < 0.0 } else { curv > 0.0 };
        if !usable {
            return (self.grid.node(j), y0);
        }
        let t = (0.5 * (ym - yp) / curv).clamp(-0.5, 0.5);
        let val = y0 + 0.5 * (yp - ym) * t + 0.5 * curv * t * t;
        let x = (self.grid.node(j) + t * self.grid.spacing()).rem_euclid(1.0);
        (x, val)
    }

    /// Spectral phase shift: returns `x ↦ f(x - a)` for band-limited `f`.
    pub fn shift(&self, a: f64) -> Self {
        let mut s = self.transform();
        s.shift_phase(a);
        s.inverse_transform()
    }

    /// Trigonometric interpolation at an arbitrary point. Transforms
    /// internally; hold a [`Spectrum`] when evaluating many points.
    pub fn eval_at(&self, x: f64) -> f64 {
        self.transform().eval_at(x)
    }
}

/// Complex Fourier coefficients of a [`PeriodicField`], stored in FFT bin
/// order; access by signed wavenumber through [`Spectrum::coeff`].
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn bin(&self, k: i64) -> usize {
        let n = self.grid.n() as i64;
        assert!(
            k >= -n / 2 && k < n / 2,
            "wavenumber {k} out of range for n = {n}"
        );
        k.rem_euclid(n) as usize
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs[self.bin(k)]
    }

    pub fn set_coeff(&mut self, k: i64, value: Complex64) {
        let b = self.bin(k);
        self.coeffs[b] = value;
    }

    /// Iterate `(k, c_k)` over all stored modes.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(m, &c)| (self.grid.wavenumber(m), c))
    }

    pub fn map_modes(&mut self, f: impl Fn(i64, Complex64) -> Complex64) {
        for m in 0..self.coeffs.len() {
            let k = self.grid.wavenumber(m);
            self.coeffs[m] = f(k, self.coeffs[m]);
        }
    }

    /// Multiply by `2πik`; zeroes the Nyquist mode.
    pub fn differentiate(&mut self) {
        let nyq = self.grid.n() / 2;
        for m in 0..self.coeffs.len() {
            if m == nyq {
                self.coeffs[m] = Complex64::new(0.0, 0.0);
            } else {
                let k = self.grid.wavenumber(m) as f64;
                self.coeffs[m] *= Complex64::new(0.0, TAU * k);
            }
        }
    }

    /// Phase factor `e^{-2πika}` on every mode.
    pub fn shift_phase(&mut self, a: f64) {
        self.map_modes(|k, c| c * Complex64::from_polar(1.0, -TAU * k as f64 * a));
    }

    /// Zero all modes with `|k| > k_keep` (the 2/3-rule truncation uses
    /// `k_keep = n/3`).
    pub fn truncate_above(&mut self, k_keep: i64) {
        self.map_modes(|k, c| if k.abs() > k_keep { Complex64::new(0.0, 0.0) } else { c });
    }

    /// `c_k ↦ c_k exp(-α (|k|/(n/2))^p)`; mode 0 is untouched.
    pub fn apply_exponential_filter(&mut self, alpha: f64, order: u32) {
        let half = (self.grid.n() / 2) as f64;
        self.map_modes(|k, c| {
            let r = k.unsigned_abs() as f64 / half;
            c * (-alpha * r.powi(order as i32)).exp()
        });
    }

    pub fn inverse_transform(&self) -> PeriodicField {
        let n = self.grid.n();
        let mut buf = self.coeffs.clone();
        plan(n, true).process(&mut buf);
        PeriodicField {
            grid: self.grid,
            values: buf.iter().map(|c| c.re).collect(),
        }
    }

    /// Evaluate the interpolant `Σ c_k e^{2πikx}` (real part) at `x`.
    pub fn eval_at(&self, x: f64) -> f64 {
        self.series_eval(x, |_k| 1.0).re
    }

    /// First derivative of the interpolant at `x` (Nyquist dropped).
    pub fn eval_dx_at(&self, x: f64) -> f64 {
        self.series_eval_skip_nyquist(x, |k| Complex64::new(0.0, TAU * k)).re
    }

    /// Second derivative of the interpolant at `x` (Nyquist dropped).
    pub fn eval_dxx_at(&self, x: f64) -> f64 {
        self.series_eval_skip_nyquist(x, |k| Complex64::new(-(TAU * k) * (TAU * k), 0.0))
            .re
    }

    fn series_eval(&self, x: f64, weight: impl Fn(f64) -> f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.modes() {
            let kf = k as f64;
            acc += c * weight(kf) * Complex64::from_polar(1.0, TAU * kf * x);
        }
        acc
    }

    fn series_eval_skip_nyquist(
        &self,
        x: f64,
        weight: impl Fn(f64) -> Complex64,
    ) -> Complex64 {
        let n = self.grid.n() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.modes() {
            if k == -n / 2 {
                continue;
            }
            let kf = k as f64;
            acc += c * weight(kf) * Complex64::from_polar(1.0, TAU * kf * x);
        }
        acc
    }

    /// Largest deviation from conjugate symmetry `c_{-k} = conj(c_k)`
    /// (plus the imaginary part of modes 0 and Nyquist). Zero for spectra of
    /// real fields up to round-off.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let n = self.grid.n() as i64;
        let mut worst = self.coeff(0).im.abs().max(self.coeff(-n / 2).im.abs());
        for k in 1..n / 2 {
            let d = (self.coeff(-k) - self.coeff(k).conj()).norm();
            worst = worst.max(d);
        }
        worst
    }
}

/// Extrema of a field with refined locations in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremaRecord {
    pub max_val: f64,
    pub min_val: f64,
    pub argmax: f64,
    pub argmin: f64,
}
