//! Mask-level semantics: constructors from time-domain coefficients and
//! B-splines, the Bessel test, the sine/cosine factorizations, the three
//! necessary conditions, and the M-alpha / M-beta pipeline feeding the
//! extension algorithms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::GaussianRational;
use crate::laurent::{AlgebraError, EvalPoint, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaskError {
    /// Centered B-spline masks exist only for even order.
    #[error("centered B-spline mask requires even order, got {0}")]
    CenteredOddOrder(u32),
    /// A factorization was requested for a mask that does not vanish at
    /// the required point.
    #[error("factorization precondition violated: {0}")]
    PreconditionViolated(String),
    /// A low-pass mask failed m(0) = 1.
    #[error("setup violated: a low-pass mask does not evaluate to 1 at gamma = 0")]
    SetupViolated,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A 1-periodic trigonometric polynomial with a human-readable label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mask {
    pub label: String,
    pub poly: LaurentPoly,
}

impl Mask {
    pub fn new(label: impl Into<String>, poly: LaurentPoly) -> Self {
        Self {
            label: label.into(),
            poly,
        }
    }

    pub fn zero(label: impl Into<String>) -> Self {
        Self::new(label, LaurentPoly::zero())
    }
}

/// Finitely supported coefficients of `psi(x) = sum c_k phi(2x - k)`,
/// keyed by the signed translate `k`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TimeCoeffs {
    pub coeffs: BTreeMap<i64, GaussianRational>,
}

impl TimeCoeffs {
    pub fn from_pairs<I: IntoIterator<Item = (i64, GaussianRational)>>(iter: I) -> Self {
        Self {
            coeffs: iter
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn from_ratios<I: IntoIterator<Item = (i64, i64, i64)>>(iter: I) -> Self {
        Self::from_pairs(
            iter.into_iter()
                .map(|(k, n, d)| (k, GaussianRational::ratio(n, d))),
        )
    }
}

/// Outcome of the three pre-extension checks, with exact witnesses for
/// the failing evaluations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessaryReport {
    /// m0(0) = mt0(0) = 1.
    pub setup_ok: bool,
    /// Condition (a): both high-pass masks vanish at gamma = 0.
    pub cond_a_pass: bool,
    pub m1_at_zero: GaussianRational,
    pub mt1_at_zero: GaussianRational,
    /// Condition (b): both low-pass masks vanish at gamma = 1/2.
    pub cond_b_pass: bool,
    pub m0_at_half: GaussianRational,
    pub mt0_at_half: GaussianRational,
    /// Condition (c): `1 - conj(m0) mt0` is divisible by sin^2(pi gamma).
    pub cond_c_pass: bool,
    /// The exact quotient when condition (c) holds.
    pub lambda: Option<LaurentPoly>,
}

impl NecessaryReport {
    pub fn all_pass(&self) -> bool {
        self.setup_ok && self.cond_a_pass && self.cond_b_pass && self.cond_c_pass
    }
}

/// Mask with coefficients half the time-domain coefficients:
/// `psi(x) = sum c_k phi(2x - k)` has mask `(1/2) sum c_k z^k`.
pub fn mask_from_time_coeffs(c: &TimeCoeffs) -> Mask {
    let half = GaussianRational::ratio(1, 2);
    let poly = LaurentPoly::from_coeffs(
        c.coeffs.iter().map(|(k, v)| (*k, v * &half)),
    );
    Mask::new("from time coefficients", poly)
}

/// Exact inverse of [`mask_from_time_coeffs`]: `c_k` is twice the
/// coefficient of `z^k`.
pub fn time_coeffs_from_mask(m: &Mask) -> TimeCoeffs {
    let two = GaussianRational::from_integer(2);
    TimeCoeffs::from_pairs(m.poly.coeffs().map(|(k, v)| (k, v * &two)))
}

/// Refinement mask of the order-`n` B-spline. Uncentered:
/// `((1+z)/2)^n`; centered (`n` even): `((z^{-1}+2+z)/4)^{n/2}`, which is
/// `cos^n(pi gamma)`.
pub fn bspline_mask(n: u32, centered: bool) -> Result<Mask, MaskError> {
    assert!(n >= 1, "B-spline order must be positive");
    if centered {
        if n % 2 != 0 {
            return Err(MaskError::CenteredOddOrder(n));
        }
        let cos2 = LaurentPoly::from_ratios([(-1, 1, 4), (0, 1, 2), (1, 1, 4)]);
        Ok(Mask::new(format!("centered B{n} mask"), cos2.pow(n / 2)))
    } else {
        Ok(Mask::new(format!("B{n} mask"), LaurentPoly::ecos().pow(n)))
    }
}

/// A high-pass mask can generate a Bessel system only if it vanishes at
/// the origin.
pub fn is_bessel_mask(m: &Mask) -> bool {
    m.poly.eval_exact(EvalPoint::Gamma0).is_zero()
}

/// Low-pass normalization m(0) = 1, forced by the scaling equation.
pub fn check_setup(m0: &Mask) -> bool {
    m0.poly.eval_exact(EvalPoint::Gamma0).is_one()
}

/// Factor out `e^{-pi i gamma} sin(pi gamma)` from a mask vanishing at
/// the origin, returning the exact cofactor.
pub fn factor_sin(f: &Mask) -> Result<LaurentPoly, MaskError> {
    if !f.poly.eval_exact(EvalPoint::Gamma0).is_zero() {
        return Err(MaskError::PreconditionViolated(format!(
            "{} does not vanish at gamma = 0",
            f.label
        )));
    }
    Ok(f.poly.divide_exact(&LaurentPoly::esin())?)
}

/// Factor out `e^{-pi i gamma} cos(pi gamma)` from a mask vanishing at
/// gamma = 1/2, returning the exact cofactor.
pub fn factor_cos(g: &Mask) -> Result<LaurentPoly, MaskError> {
    if !g.poly.eval_exact(EvalPoint::GammaHalf).is_zero() {
        return Err(MaskError::PreconditionViolated(format!(
            "{} does not vanish at gamma = 1/2",
            g.label
        )));
    }
    Ok(g.poly.divide_exact(&LaurentPoly::ecos())?)
}

/// Evaluate all three necessary conditions for extendability, reporting
/// each independently with its witnesses.
pub fn necessary_conditions(
    m0: &Mask,
    mt0: &Mask,
    m1: &Mask,
    mt1: &Mask,
) -> Result<NecessaryReport, MaskError> {
    if !check_setup(m0) || !check_setup(mt0) {
        return Err(MaskError::SetupViolated);
    }
    let m1_at_zero = m1.poly.eval_exact(EvalPoint::Gamma0);
    let mt1_at_zero = mt1.poly.eval_exact(EvalPoint::Gamma0);
    let m0_at_half = m0.poly.eval_exact(EvalPoint::GammaHalf);
    let mt0_at_half = mt0.poly.eval_exact(EvalPoint::GammaHalf);
    let p = LaurentPoly::one().sub(&m0.poly.conj().mul(&mt0.poly));
    let (cond_c_pass, lambda) = match p.divide_exact(&LaurentPoly::sin2()) {
        Ok(q) => (true, Some(q)),
        Err(AlgebraError::NotDivisible) => (false, None),
        Err(e) => return Err(e.into()),
    };
    Ok(NecessaryReport {
        setup_ok: true,
        cond_a_pass: m1_at_zero.is_zero() && mt1_at_zero.is_zero(),
        m1_at_zero,
        mt1_at_zero,
        cond_b_pass: m0_at_half.is_zero() && mt0_at_half.is_zero(),
        m0_at_half,
        mt0_at_half,
        cond_c_pass,
        lambda,
    })
}

/// The two defect polynomials of a dual pair of filter banks:
/// `Ma = 1 - conj(m0) mt0 - conj(m1) mt1` and
/// `Mb = -conj(m0) mt0(.+1/2) - conj(m1) mt1(.+1/2)`.
pub fn compute_m_alpha_beta(m0: &Mask, mt0: &Mask, m1: &Mask, mt1: &Mask) -> (Mask, Mask) {
    let ma = LaurentPoly::one()
        .sub(&m0.poly.conj().mul(&mt0.poly))
        .sub(&m1.poly.conj().mul(&mt1.poly));
    let mb = m0
        .poly
        .conj()
        .mul(&mt0.poly.half_shift())
        .add(&m1.poly.conj().mul(&mt1.poly.half_shift()))
        .neg();
    (Mask::new("M-alpha", ma), Mask::new("M-beta", mb))
}

/// Strip the forced trigonometric factors from the defect polynomials:
/// `Ma = sin^2 * La` and `Mb = (-i sin cos) * Lb`. Divisibility is
/// guaranteed when the necessary conditions hold; a `NotDivisible` error
/// here signals that they were not actually checked.
pub fn extract_lambdas(ma: &Mask, mb: &Mask) -> Result<(LaurentPoly, LaurentPoly), MaskError> {
    let la = ma.poly.divide_exact(&LaurentPoly::sin2())?;
    let lb = mb.poly.divide_exact(&LaurentPoly::misc())?;
    Ok((la, lb))
}
