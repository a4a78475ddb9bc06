//! Numerical validation on a dyadic grid: the cascade algorithm for
//! scaling functions, exact B-spline sampling as its oracle, wavelet
//! materialization, truncated frame reconstruction, and a floating-point
//! cross-check of the exact matrix identity.
//!
//! Everything here is best-effort double precision; the exact algebra in
//! the other modules is the authority. All loops run in a fixed order so
//! results are bit-stable across runs.

use num_complex::Complex64;
use thiserror::Error;

use crate::extension::MaskSystem;
use crate::masks::{check_setup, time_coeffs_from_mask, Mask};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("low-pass mask does not evaluate to 1 at gamma = 0")]
    SetupViolated,
    #[error("mask has non-real coefficients; rendering is real-valued only")]
    ComplexMask,
    #[error("sampled functions are not on a common grid level")]
    LevelMismatch,
    #[error("dilation level {j} exceeds the grid level {level}")]
    LevelTooCoarse { j: i32, level: u32 },
    #[error("frame specification has no generator pairs")]
    EmptySpec,
}

/// A real-valued function sampled on the dyadic grid of step `2^-level`;
/// `samples[i]` is the value at `x = (start + i) * 2^-level`. Values
/// outside the stored window are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub level: u32,
    pub start: i64,
    pub samples: Vec<f64>,
}

impl SampledFunction {
    pub fn new(level: u32, start: i64, samples: Vec<f64>) -> Self {
        Self {
            level,
            start,
            samples,
        }
    }

    pub fn step(&self) -> f64 {
        0.5f64.powi(self.level as i32)
    }

    /// Value at grid index `i` (absolute, not offset by `start`).
    pub fn at_index(&self, i: i64) -> f64 {
        let off = i - self.start;
        if off < 0 || off >= self.samples.len() as i64 {
            0.0
        } else {
            self.samples[off as usize]
        }
    }

    /// Linear interpolation at fractional grid index `t`.
    fn at_fractional(&self, t: f64) -> f64 {
        let f = t.floor();
        let i = f as i64;
        let w = t - f;
        self.at_index(i) * (1.0 - w) + self.at_index(i + 1) * w
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.level, other.level);
        let lo = self.start.min(other.start);
        let hi = (self.start + self.samples.len() as i64)
            .max(other.start + other.samples.len() as i64);
        let mut m = 0.0f64;
        for i in lo..hi {
            m = m.max((self.at_index(i) - other.at_index(i)).abs());
        }
        m
    }
}

/// Truncated frame expansion: generator pairs `(psi, psit)` on a common
/// grid level and the dilation range `[j_min, j_max]`.
#[derive(Debug, Clone)]
pub struct FrameSpec {
    pub j_min: i32,
    pub j_max: i32,
    pub generators: Vec<(SampledFunction, SampledFunction)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeOutcome {
    pub function: SampledFunction,
    pub iterations: u32,
    pub converged: bool,
    pub last_change: f64,
}

pub const DEFAULT_LEVEL: u32 = 8;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Iteration cap sized for geometric-rate masks to pass a 1e-10 change
/// threshold; low-order spline masks converge well before this.
pub const DEFAULT_MAX_ITER: u32 = 48;

fn real_coeffs(m: &Mask) -> Result<Vec<(i64, f64)>, RenderError> {
    let mut out = Vec::new();
    for (e, c) in m.poly.coeffs() {
        if !c.is_real() {
            return Err(RenderError::ComplexMask);
        }
        out.push((e, c.to_f64_pair().0));
    }
    Ok(out)
}

/// Fixed-point iteration of the two-scale relation
/// `phi_{n+1}(x) = 2 sum a_k phi_n(2x - k)` starting from the box
/// indicator, sampled at level `j`. Non-convergence is reported in the
/// outcome, not raised.
pub fn cascade(m0: &Mask, j: u32, tol: f64, max_iter: u32) -> Result<CascadeOutcome, RenderError> {
    if !check_setup(m0) {
        return Err(RenderError::SetupViolated);
    }
    let coeffs = real_coeffs(m0)?;
    let kmin = coeffs.iter().map(|(e, _)| *e).min().unwrap();
    let kmax = coeffs.iter().map(|(e, _)| *e).max().unwrap();
    let scale = 1i64 << j;
    let start = kmin * scale;
    let n = ((kmax - kmin) * scale + 1) as usize;

    let mut phi = vec![0.0f64; n];
    for (i, v) in phi.iter_mut().enumerate() {
        let x = (start + i as i64) as f64 * 0.5f64.powi(j as i32);
        if (0.0..1.0).contains(&x) {
            *v = 1.0;
        }
    }

    let mut iterations = 0;
    let mut last_change = f64::INFINITY;
    while iterations < max_iter {
        let mut next = vec![0.0f64; n];
        for (k, a) in &coeffs {
            let shift = k * scale + start;
            for i in 0..n as i64 {
                let src = 2 * (i + start) - shift;
                if src >= 0 && src < n as i64 {
                    next[i as usize] += 2.0 * a * phi[src as usize];
                }
            }
        }
        last_change = phi
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        phi = next;
        iterations += 1;
        if last_change <= tol {
            break;
        }
    }
    Ok(CascadeOutcome {
        function: SampledFunction::new(j, start, phi),
        iterations,
        converged: last_change <= tol,
        last_change,
    })
}

/// Exact samples of the order-`n` cardinal B-spline shifted left by
/// `shift` (i.e. of `B_n(x + shift)`), via the Cox-de-Boor recursion.
/// The order-1 spline is the half-open box indicator.
pub fn bspline_exact(n: u32, j: u32, shift: i64) -> SampledFunction {
    assert!(n >= 1, "B-spline order must be positive");
    fn value(n: u32, x: f64) -> f64 {
        if n == 1 {
            return if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
        }
        if x <= 0.0 || x >= n as f64 {
            return 0.0;
        }
        let d = (n - 1) as f64;
        (x / d) * value(n - 1, x) + ((n as f64 - x) / d) * value(n - 1, x - 1.0)
    }
    let scale = 1i64 << j;
    let start = -shift * scale;
    let len = (n as i64 * scale + 1) as usize;
    let h = 0.5f64.powi(j as i32);
    let samples = (0..len)
        .map(|i| value(n, (start + i as i64) as f64 * h + shift as f64))
        .collect();
    SampledFunction::new(j, start, samples)
}

/// Materialize `psi(x) = sum c_k phi(2x - k)` on the same grid level as
/// `phi`, reading the time coefficients off the mask.
pub fn wavelet_from_mask(m: &Mask, phi: &SampledFunction) -> Result<SampledFunction, RenderError> {
    let tc = time_coeffs_from_mask(m);
    let mut coeffs = Vec::new();
    for (k, c) in &tc.coeffs {
        if !c.is_real() {
            return Err(RenderError::ComplexMask);
        }
        coeffs.push((*k, c.to_f64_pair().0));
    }
    let j = phi.level;
    let scale = 1i64 << j;
    if coeffs.is_empty() {
        return Ok(SampledFunction::new(j, 0, vec![0.0]));
    }
    let kmin = coeffs.first().unwrap().0;
    let kmax = coeffs.last().unwrap().0;
    let smin = phi.start;
    let smax = phi.start + phi.samples.len() as i64 - 1;
    let start = (smin + kmin * scale).div_euclid(2);
    let end = -(-(smax + kmax * scale)).div_euclid(2);
    let n = (end - start + 1) as usize;
    let mut out = vec![0.0f64; n];
    for (k, c) in &coeffs {
        for i in 0..n as i64 {
            let src = 2 * (i + start) - k * scale;
            out[i as usize] += c * phi.at_index(src);
        }
    }
    Ok(SampledFunction::new(j, start, out))
}

/// Samples of `2^{j/2} psi(2^j x)` on the grid of `psi.level`, over the
/// absolute index range `[lo, hi]`. For `j >= 0` the dilation lands on
/// stored grid points exactly; for `j < 0` values come from linear
/// interpolation, which is adequate for the piecewise-smooth functions
/// rendered here.
fn dilated(psi: &SampledFunction, j: i32, lo: i64, hi: i64) -> Vec<f64> {
    let c = 2.0f64.powf(j as f64 / 2.0);
    let mut out = vec![0.0f64; (hi - lo + 1) as usize];
    if j >= 0 {
        let s = 1i64 << j;
        for (off, v) in out.iter_mut().enumerate() {
            *v = c * psi.at_index((lo + off as i64) * s);
        }
    } else {
        let s = 2.0f64.powi(j);
        for (off, v) in out.iter_mut().enumerate() {
            *v = c * psi.at_fractional((lo + off as i64) as f64 * s);
        }
    }
    out
}

/// Truncated dual-frame expansion
/// `sum_l sum_{j=j_min}^{j_max} sum_k <f, D^j T_k psit_l> D^j T_k psi_l`
/// with plain Riemann-sum inner products on the common grid. The
/// translate range is derived from the supports, so no contribution is
/// silently dropped; the summation order (generator, then ascending `j`,
/// then ascending `k`) is fixed.
pub fn frame_reconstruct(
    f: &SampledFunction,
    spec: &FrameSpec,
) -> Result<SampledFunction, RenderError> {
    if spec.generators.is_empty() {
        return Err(RenderError::EmptySpec);
    }
    let level = f.level;
    for (a, b) in &spec.generators {
        if a.level != level || b.level != level {
            return Err(RenderError::LevelMismatch);
        }
    }
    if spec.j_max > level as i32 {
        return Err(RenderError::LevelTooCoarse {
            j: spec.j_max,
            level,
        });
    }
    let h = 0.5f64.powi(level as i32);
    let fl = f.start as f64 * h;
    let fh = (f.start + f.samples.len() as i64 - 1) as f64 * h;

    // output hull over all (generator, j, k) contributions
    let mut olo = f.start;
    let mut ohi = f.start + f.samples.len() as i64;
    let mut plan: Vec<(usize, i32, i64, i64)> = Vec::new();
    for (gi, (psi, psit)) in spec.generators.iter().enumerate() {
        let ts0 = psit.start as f64 * h;
        let ts1 = (psit.start + psit.samples.len() as i64 - 1) as f64 * h;
        let ps0 = psi.start as f64 * h;
        let ps1 = (psi.start + psi.samples.len() as i64 - 1) as f64 * h;
        for j in spec.j_min..=spec.j_max {
            let sc = 2.0f64.powi(j);
            let kmin = (fl * sc - ts1).floor() as i64 - 1;
            let kmax = (fh * sc - ts0).ceil() as i64 + 1;
            olo = olo.min((((ps0 + kmin as f64) / sc) / h).floor() as i64 - 1);
            ohi = ohi.max((((ps1 + kmax as f64) / sc) / h).ceil() as i64 + 1);
            plan.push((gi, j, kmin, kmax));
        }
    }

    let mut out = vec![0.0f64; (ohi - olo + 1) as usize];
    for (gi, j, kmin, kmax) in plan {
        let (psi, psit) = &spec.generators[gi];
        let sc = 2.0f64.powi(j);
        let ps0 = psi.start as f64 * h;
        let ps1 = (psi.start + psi.samples.len() as i64 - 1) as f64 * h;
        // one dilated array per (generator, j), indexed so every k-shift
        // stays in range
        let s = 2.0f64.powi(level as i32 - j);
        let ilo = f.start;
        let ihi = f.start + f.samples.len() as i64 - 1;
        let a_lo = ilo - ((kmax + 1) as f64 * s) as i64 - 1;
        let a_hi = ihi - ((kmin - 1) as f64 * s) as i64 + 1;
        let dpsit = dilated(psit, j, a_lo, a_hi);
        let b_lo = olo - ((kmax + 1) as f64 * s) as i64 - 1;
        let b_hi = ohi - ((kmin - 1) as f64 * s) as i64 + 1;
        let dpsi = dilated(psi, j, b_lo, b_hi);

        for k in kmin..=kmax {
            let ksh = (k as f64 * s).round() as i64;
            let mut coef = 0.0f64;
            for (off, fv) in f.samples.iter().enumerate() {
                let idx = ilo + off as i64 - ksh - a_lo;
                coef += fv * dpsit[idx as usize];
            }
            coef *= h;
            if coef == 0.0 {
                continue;
            }
            // add only over the support of this dilated translate
            let xlo = (ps0 + k as f64) / sc;
            let xhi = (ps1 + k as f64) / sc;
            let ilo_s = olo.max((xlo / h).floor() as i64 - 1);
            let ihi_s = ohi.min((xhi / h).ceil() as i64 + 1);
            for i in ilo_s..=ihi_s {
                let idx = i - ksh - b_lo;
                out[(i - olo) as usize] += coef * dpsi[idx as usize];
            }
        }
    }
    Ok(SampledFunction::new(level, olo, out))
}

/// Grid L2 norm: `sqrt(h * sum f_i^2)`, a left Riemann sum of the
/// squared integral.
pub fn l2_norm(f: &SampledFunction) -> f64 {
    let s: f64 = f.samples.iter().map(|v| v * v).sum();
    (s * f.step()).sqrt()
}

/// `||a - b|| / ||b||` on the common grid; supports need not coincide.
pub fn l2_relative_error(a: &SampledFunction, b: &SampledFunction) -> f64 {
    assert_eq!(a.level, b.level, "levels must match");
    let lo = a.start.min(b.start);
    let hi = (a.start + a.samples.len() as i64).max(b.start + b.samples.len() as i64);
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for i in lo..hi {
        let d = a.at_index(i) - b.at_index(i);
        num += d * d;
        let v = b.at_index(i);
        den += v * v;
    }
    (num / den).sqrt()
}

/// Max-norm residuals of the two matrix-identity rows over equispaced
/// gamma samples; the floating cross-check of the exact verifier.
pub fn mep_residual_float(sys: &MaskSystem, samples: usize) -> (f64, f64) {
    assert!(samples >= 2);
    let pairs: Vec<(&Mask, &Mask)> = std::iter::once((&sys.m0, &sys.mt0))
        .chain(sys.gens.iter().zip(sys.tgens.iter()))
        .collect();
    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    for i in 0..samples {
        let g = i as f64 / samples as f64;
        let mut row1 = Complex64::new(-1.0, 0.0);
        let mut row2 = Complex64::new(0.0, 0.0);
        for (m, mt) in &pairs {
            let a = m.poly.eval_float(g).conj();
            row1 += a * mt.poly.eval_float(g);
            row2 += a * mt.poly.eval_float(g + 0.5);
        }
        r1 = r1.max(row1.norm());
        r2 = r2.max(row2.norm());
    }
    (r1, r2)
}
