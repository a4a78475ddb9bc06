//! Laurent polynomials over the Gaussian rationals in the variable
//! `z = e^{-2 pi i gamma}`.
//!
//! Every 1-periodic trigonometric polynomial in this crate lives here.
//! The two involutions that drive the filter-bank identities are
//! [`LaurentPoly::conj`] (pointwise complex conjugation on the unit
//! circle, i.e. coefficient conjugation with exponent negation) and
//! [`LaurentPoly::half_shift`] (`gamma -> gamma + 1/2`, i.e. `z -> -z`).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gaussian::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// Exact division left a nonzero remainder; a factorization
    /// hypothesis did not hold.
    #[error("polynomial is not exactly divisible by the given divisor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
}

/// Evaluation points at which exact values are meaningful: `z = 1`
/// (`gamma = 0`) and `z = -1` (`gamma = 1/2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPoint {
    Gamma0,
    GammaHalf,
}

/// Finitely supported map exponent -> nonzero coefficient, representing
/// `sum a_n z^n`. The zero polynomial has empty support.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: GaussianRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, GaussianRational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_assign_term(e, c);
        }
        p
    }

    /// Convenience constructor from integer pairs, mostly for tests and
    /// the demo registry.
    pub fn from_ratios<I: IntoIterator<Item = (i64, i64, i64)>>(iter: I) -> Self {
        Self::from_coeffs(
            iter.into_iter()
                .map(|(e, n, d)| (e, GaussianRational::ratio(n, d))),
        )
    }

    fn add_assign_term(&mut self, exp: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&exp) {
            None => {
                self.coeffs.insert(exp, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.coeffs.insert(exp, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> GaussianRational {
        self.coeffs
            .get(&exp)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.coeffs.iter() {
            out.add_assign_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in self.coeffs.iter() {
            for (eb, cb) in rhs.coeffs.iter() {
                out.add_assign_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiply by the Laurent unit `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Pointwise complex conjugate on the unit circle: the coefficient at
    /// `n` becomes the conjugate of the coefficient at `-n`.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.conj())).collect(),
        }
    }

    /// The substitution `gamma -> gamma + 1/2`, i.e. `z -> -z`.
    pub fn half_shift(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| {
                    let c = c.clone();
                    (*e, if e.rem_euclid(2) == 1 { -c } else { c })
                })
                .collect(),
        }
    }

    /// True iff the polynomial is real-valued on the circle.
    pub fn is_real_on_circle(&self) -> bool {
        self.conj() == *self
    }

    /// True iff every stored coefficient is real.
    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| c.is_real())
    }

    pub fn eval_exact(&self, point: EvalPoint) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (e, c) in self.coeffs.iter() {
            let c = c.clone();
            acc = acc
                + match point {
                    EvalPoint::Gamma0 => c,
                    EvalPoint::GammaHalf => {
                        if e.rem_euclid(2) == 1 {
                            -c
                        } else {
                            c
                        }
                    }
                };
        }
        acc
    }

    /// `sum a_n e^{-2 pi i n gamma}` in double precision, Horner on the
    /// nonnegative- and negative-exponent parts separately.
    pub fn eval_float(&self, gamma: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * gamma);
        let zinv = z.conj();
        let mut pos = Complex64::new(0.0, 0.0);
        let mut pos_deg: i64 = 0;
        let mut neg = Complex64::new(0.0, 0.0);
        let mut neg_deg: i64 = 0;
        for (e, c) in self.coeffs.iter().rev() {
            if *e >= 0 {
                // descending exponents: multiply down to e
                for _ in *e..pos_deg {
                    pos *= z;
                }
                let (re, im) = c.to_f64_pair();
                pos += Complex64::new(re, im);
                pos_deg = *e;
            }
        }
        for _ in 0..pos_deg {
            pos *= z;
        }
        for (e, c) in self.coeffs.iter() {
            if *e < 0 {
                let m = -e;
                for _ in m..neg_deg {
                    neg *= zinv;
                }
                let (re, im) = c.to_f64_pair();
                neg += Complex64::new(re, im);
                neg_deg = m;
            }
        }
        for _ in 0..neg_deg {
            neg *= zinv;
        }
        pos + neg
    }

    /// Exact quotient `self / d` in the Laurent ring, when it exists.
    pub fn divide_exact(&self, d: &Self) -> Result<Self, AlgebraError> {
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (pn, pshift) = self.to_dense();
        let (dn, dshift) = d.to_dense();
        let (q, r) = poly_divmod(&pn, &dn);
        if r.iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::NotDivisible);
        }
        Ok(Self::from_dense(&q, pshift - dshift))
    }

    /// Greatest common divisor over Q(i), normalized so the minimum
    /// exponent is 0 and the leading (highest-exponent) coefficient is 1.
    pub fn gcd(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.is_zero() && other.is_zero() {
            return Err(AlgebraError::BothZero);
        }
        if self.is_zero() {
            return Ok(other.normalized());
        }
        if other.is_zero() {
            return Ok(self.normalized());
        }
        let (mut a, _) = self.to_dense();
        let (mut b, _) = other.to_dense();
        while b.iter().any(|c| !c.is_zero()) {
            let (_, r) = poly_divmod(&a, &b);
            a = b;
            b = trim(r);
        }
        Ok(Self::from_dense(&a, 0).normalized())
    }

    /// Unit-normalize: shift the minimum exponent to 0 and divide by the
    /// leading coefficient. Gives a deterministic representative of the
    /// unit orbit `c z^k p`.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let min = self.min_exp().unwrap();
        let lead = self.coeff(self.max_exp().unwrap());
        let inv = lead.recip().unwrap();
        self.shift(-min).scale(&inv)
    }

    /// If `other == u * self` for a Laurent unit `u = c z^k`, return it.
    pub fn unit_ratio_to(&self, other: &Self) -> Option<(i64, GaussianRational)> {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() {
                Some((0, GaussianRational::one()))
            } else {
                None
            };
        }
        if self.support_len() != other.support_len() {
            return None;
        }
        let k = other.min_exp().unwrap() - self.min_exp().unwrap();
        let c = other.coeff(other.min_exp().unwrap())
            / self.coeff(self.min_exp().unwrap());
        if &self.shift(k).scale(&c) == other {
            Some((k, c))
        } else {
            None
        }
    }

    // dense ascending coefficients plus the exponent of index 0
    fn to_dense(&self) -> (Vec<GaussianRational>, i64) {
        let min = self.min_exp().unwrap();
        let max = self.max_exp().unwrap();
        let mut v = vec![GaussianRational::zero(); (max - min + 1) as usize];
        for (e, c) in self.coeffs.iter() {
            v[(e - min) as usize] = c.clone();
        }
        (v, min)
    }

    fn from_dense(v: &[GaussianRational], shift: i64) -> Self {
        Self::from_coeffs(
            v.iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + shift, c.clone())),
        )
    }

    // ---- named constants (z-forms of the trigonometric building blocks) ----

    /// `sin^2(pi gamma) = (2 - z - z^{-1}) / 4`.
    pub fn sin2() -> Self {
        Self::from_ratios([(-1, -1, 4), (0, 1, 2), (1, -1, 4)])
    }

    /// `e^{-pi i gamma} sin(pi gamma) = (1 - z) / (2i)`.
    pub fn esin() -> Self {
        let half_i = GaussianRational::new(
            crate::gaussian::Rational::new(0.into(), 1.into()),
            crate::gaussian::Rational::new((-1).into(), 2.into()),
        );
        // (1 - z) * (-i/2)
        Self::from_coeffs([(0, half_i.clone()), (1, -half_i)])
    }

    /// `e^{-pi i gamma} cos(pi gamma) = (1 + z) / 2`.
    pub fn ecos() -> Self {
        Self::from_ratios([(0, 1, 2), (1, 1, 2)])
    }

    /// `-i sin(pi gamma) cos(pi gamma) = (z - z^{-1}) / 4`.
    pub fn misc() -> Self {
        Self::from_ratios([(-1, -1, 4), (1, 1, 4)])
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

fn trim(mut v: Vec<GaussianRational>) -> Vec<GaussianRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Ordinary polynomial long division over Q(i); returns (quotient,
/// remainder) with deg r < deg d.
fn poly_divmod(
    p: &[GaussianRational],
    d: &[GaussianRational],
) -> (Vec<GaussianRational>, Vec<GaussianRational>) {
    let d = {
        let mut d = d.to_vec();
        while d.last().is_some_and(|c| c.is_zero()) {
            d.pop();
        }
        d
    };
    assert!(!d.is_empty(), "division by zero polynomial");
    let mut r = trim(p.to_vec());
    if r.len() < d.len() {
        return (vec![], r);
    }
    let mut q = vec![GaussianRational::zero(); r.len() - d.len() + 1];
    let lead_inv = d.last().unwrap().recip().unwrap();
    while r.len() >= d.len() {
        let k = r.len() - d.len();
        let f = r.last().unwrap() * &lead_inv;
        q[k] = f.clone();
        for (i, dc) in d.iter().enumerate() {
            let t = r[k + i].clone() - (dc * &f);
            r[k + i] = t;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    (q, r)
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    /// JSON object mapping exponent strings to coefficient strings, in
    /// ascending numeric exponent order.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in self.coeffs.iter() {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from exponent strings to coefficient strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    let exp: i64 = k
                        .parse()
                        .map_err(|_| serde::de::Error::custom(format!("bad exponent {k:?}")))?;
                    let c: GaussianRational =
                        v.parse().map_err(serde::de::Error::custom)?;
                    p.add_assign_term(exp, c);
                }
                Ok(p)
            }
        }
        d.deserialize_map(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianRational as G;

    fn b2_mask() -> LaurentPoly {
        LaurentPoly::from_ratios([(0, 1, 4), (1, 1, 2), (2, 1, 4)])
    }

    #[test]
    fn add_cancellation_and_identity() {
        let a = LaurentPoly::from_ratios([(0, 1, 1), (1, 1, 1)]);
        let b = LaurentPoly::from_ratios([(0, 1, 1), (1, -1, 1)]);
        assert_eq!(a.add(&b), LaurentPoly::from_ratios([(0, 2, 1)]));
        assert_eq!(a.add(&LaurentPoly::zero()), a);
    }

    #[test]
    fn add_worked_example_masks() {
        // m1 + mt1 for the three-term family with d = (1,0), dt = (1/2,-1/2)
        let m1 = LaurentPoly::from_ratios([(0, 1, 2), (1, -1, 2)]);
        let mt1 = LaurentPoly::from_ratios([(0, 1, 4), (1, -1, 2), (2, 1, 4)]);
        let expect = LaurentPoly::from_ratios([(0, 3, 4), (1, -1, 1), (2, 1, 4)]);
        assert_eq!(m1.add(&mt1), expect);
    }

    #[test]
    fn mul_square_and_b2() {
        let one_plus_z = LaurentPoly::from_ratios([(0, 1, 1), (1, 1, 1)]);
        assert_eq!(
            one_plus_z.mul(&one_plus_z),
            LaurentPoly::from_ratios([(0, 1, 1), (1, 2, 1), (2, 1, 1)])
        );
        assert_eq!(LaurentPoly::ecos().pow(2), b2_mask());
        assert_eq!(one_plus_z.mul(&LaurentPoly::zero()), LaurentPoly::zero());
    }

    #[test]
    fn conj_examples() {
        let iz = LaurentPoly::monomial(1, G::i());
        assert_eq!(iz.conj(), LaurentPoly::monomial(-1, -G::i()));
        assert_eq!(
            b2_mask().conj(),
            LaurentPoly::from_ratios([(0, 1, 4), (-1, 1, 2), (-2, 1, 4)])
        );
    }

    #[test]
    fn half_shift_examples() {
        assert_eq!(
            b2_mask().half_shift(),
            LaurentPoly::from_ratios([(0, 1, 4), (1, -1, 2), (2, 1, 4)])
        );
        let c = LaurentPoly::constant(G::ratio(7, 3));
        assert_eq!(c.half_shift(), c);
        assert_eq!(b2_mask().half_shift().half_shift(), b2_mask());
    }

    #[test]
    fn exact_evaluation() {
        assert_eq!(b2_mask().eval_exact(EvalPoint::Gamma0), G::one());
        assert_eq!(b2_mask().eval_exact(EvalPoint::GammaHalf), G::zero());
        assert_eq!(
            LaurentPoly::zero().eval_exact(EvalPoint::Gamma0),
            G::zero()
        );
    }

    #[test]
    fn float_evaluation() {
        let v = LaurentPoly::ecos().eval_float(0.25);
        assert!((v - Complex64::new(0.5, -0.5)).norm() < 1e-14);
        assert!((LaurentPoly::one().eval_float(0.77) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        // B2 mask at gamma = 1/3 equals cos^2(pi/3) e^{-2 pi i / 3}
        let g = 1.0 / 3.0;
        let expect = Complex64::from_polar(0.25, -2.0 * std::f64::consts::PI / 3.0);
        assert!((b2_mask().eval_float(g) - expect).norm() < 1e-14);
    }

    #[test]
    fn divide_examples() {
        let p = LaurentPoly::from_ratios([(0, 1, 1), (2, -1, 1)]); // 1 - z^2
        let d = LaurentPoly::from_ratios([(0, 1, 1), (1, -1, 1)]); // 1 - z
        assert_eq!(
            p.divide_exact(&d).unwrap(),
            LaurentPoly::from_ratios([(0, 1, 1), (1, 1, 1)])
        );
        let bad = LaurentPoly::from_ratios([(0, 1, 1), (1, 1, 1)]);
        assert_eq!(bad.divide_exact(&d), Err(AlgebraError::NotDivisible));
        assert_eq!(
            d.divide_exact(&LaurentPoly::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn divide_one_minus_cos4_by_sin2() {
        // (1 - cos^4) / sin^2 = 1 + cos^2, so the quotient is 2 at z = 1
        let cos2 = LaurentPoly::from_ratios([(-1, 1, 4), (0, 1, 2), (1, 1, 4)]);
        let p = LaurentPoly::one().sub(&cos2.mul(&cos2));
        let q = p.divide_exact(&LaurentPoly::sin2()).unwrap();
        assert_eq!(q, LaurentPoly::one().add(&cos2));
        assert_eq!(q.eval_exact(EvalPoint::Gamma0), G::from_integer(2));
    }

    #[test]
    fn gcd_of_worked_example_lambdas() {
        let one_plus_z = LaurentPoly::from_ratios([(0, 1, 1), (1, 1, 1)]);
        let la = one_plus_z.mul(&LaurentPoly::from_ratios([(-1, 1, 1), (0, 3, 1)]));
        let lb = one_plus_z.mul(&LaurentPoly::from_ratios([(-1, 1, 1), (0, -3, 1)]));
        assert_eq!(la.gcd(&lb).unwrap(), one_plus_z);
        assert_eq!(
            la.gcd(&LaurentPoly::zero()).unwrap(),
            la.normalized()
        );
        assert_eq!(
            LaurentPoly::zero().gcd(&LaurentPoly::zero()),
            Err(AlgebraError::BothZero)
        );
    }

    #[test]
    fn json_round_trip() {
        let p = LaurentPoly::from_coeffs([
            (-1, G::ratio(1, 2)),
            (1, G::new(G::ratio(-1, 2).re().clone(), G::ratio(3, 4).re().clone())),
        ]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"-1":"1/2","1":"-1/2+3/4*i"}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
