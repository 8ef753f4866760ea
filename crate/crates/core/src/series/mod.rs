//! Truncated power and Laurent series over complex coefficients.
//!
//! A [`TruncatedSeries`] stores the coefficients of `u^lowest ..= u^order`.
//! Everything above `order` is unknown; arithmetic propagates the order so
//! that no result claims more precision than its inputs carry.

mod algebra;
mod symmetric;

pub use algebra::{algebra_evaluate_series, AlgebraElement, CoefficientRing, NilpotentAlgebra};
pub use symmetric::{elementary_symmetric, elementary_symmetric_expansion, SymmetricPolynomial};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation order used when nothing else is requested.
pub const DEFAULT_TRUNCATION: i32 = 16;

/// Absolute tolerance for coefficients of symbolically constructed series.
pub const EXACT_TOL: f64 = 1e-12;
/// Absolute tolerance for coefficients obtained numerically.
pub const NUMERIC_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    lowest_exponent: i32,
    coefficients: Vec<Complex64>,
    #[serde(rename = "truncation_order")]
    order: i32,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)u^{}", c.re, c.im, e)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(u^{})", self.order + 1)
    }
}

impl TruncatedSeries {
    /// Builds a series from `coefficients` for exponents `lowest..=order`.
    pub fn new(lowest_exponent: i32, coefficients: Vec<Complex64>, order: i32) -> Result<Self> {
        if order < lowest_exponent - 1 {
            return Err(Error::invalid(format!(
                "truncation order {order} below lowest exponent {lowest_exponent}"
            )));
        }
        let expected = (order - lowest_exponent + 1) as usize;
        if coefficients.len() != expected {
            return Err(Error::invalid(format!(
                "expected {expected} coefficients for exponents {lowest_exponent}..={order}, got {}",
                coefficients.len()
            )));
        }
        Ok(TruncatedSeries {
            lowest_exponent,
            coefficients,
            order,
        })
    }

    /// Series whose order is fixed by the number of coefficients given.
    pub fn from_coeffs(lowest_exponent: i32, coefficients: Vec<Complex64>) -> Self {
        let order = lowest_exponent + coefficients.len() as i32 - 1;
        TruncatedSeries {
            lowest_exponent,
            coefficients,
            order,
        }
    }

    /// Real-coefficient convenience constructor, padded with zeros up to `order`.
    pub fn from_real(lowest_exponent: i32, coefficients: &[f64], order: i32) -> Self {
        let mut c: Vec<Complex64> = coefficients
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let len = (order - lowest_exponent + 1).max(0) as usize;
        c.resize(len, ZERO);
        TruncatedSeries {
            lowest_exponent,
            coefficients: c,
            order,
        }
    }

    pub fn zero(order: i32) -> Self {
        Self::constant(ZERO, order)
    }

    pub fn one(order: i32) -> Self {
        Self::constant(ONE, order)
    }

    pub fn constant(c: Complex64, order: i32) -> Self {
        Self::monomial(c, 0, order)
    }

    /// `c * u^exponent + O(u^(order+1))`.
    pub fn monomial(c: Complex64, exponent: i32, order: i32) -> Self {
        if order < exponent {
            return TruncatedSeries {
                lowest_exponent: order + 1,
                coefficients: Vec::new(),
                order,
            };
        }
        let mut coefficients = vec![ZERO; (order - exponent + 1) as usize];
        coefficients[0] = c;
        TruncatedSeries {
            lowest_exponent: exponent,
            coefficients,
            order,
        }
    }

    /// The series variable `u`.
    pub fn variable(order: i32) -> Self {
        Self::monomial(ONE, 1, order)
    }

    pub fn lowest_exponent(&self) -> i32 {
        self.lowest_exponent
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Coefficient of `u^e`; zero below the stored range.
    ///
    /// Exponents above the truncation order are unknown and also read as zero,
    /// so callers must stay within `order()`.
    pub fn coeff(&self, e: i32) -> Complex64 {
        if e < self.lowest_exponent || e > self.order {
            ZERO
        } else {
            self.coefficients[(e - self.lowest_exponent) as usize]
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        let lo = self.lowest_exponent;
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &c)| (lo + i as i32, c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Exponent of the first exactly nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        self.terms().find(|(_, c)| *c != ZERO).map(|(e, _)| e)
    }

    /// Drops leading coefficients with modulus `<= tol`, setting them to the
    /// implicit zero region below `lowest_exponent`.
    pub fn strip_leading(&self, tol: f64) -> Self {
        let skip = self
            .coefficients
            .iter()
            .take_while(|c| c.norm() <= tol)
            .count();
        TruncatedSeries {
            lowest_exponent: self.lowest_exponent + skip as i32,
            coefficients: self.coefficients[skip..].to_vec(),
            order: self.order,
        }
    }

    /// Strips exactly-zero leading coefficients.
    pub fn normalized(&self) -> Self {
        self.strip_leading(0.0)
    }

    /// Re-truncates at `order` (which may only lower it).
    pub fn truncate(&self, order: i32) -> Self {
        if order >= self.order {
            return self.clone();
        }
        if order < self.lowest_exponent {
            return TruncatedSeries {
                lowest_exponent: order + 1,
                coefficients: Vec::new(),
                order,
            };
        }
        let keep = (order - self.lowest_exponent + 1) as usize;
        TruncatedSeries {
            lowest_exponent: self.lowest_exponent,
            coefficients: self.coefficients[..keep].to_vec(),
            order,
        }
    }

    /// Same series with the stored range extended downwards to `lowest`.
    fn extend_down(&self, lowest: i32) -> Self {
        if lowest >= self.lowest_exponent {
            return self.clone();
        }
        let pad = (self.lowest_exponent - lowest) as usize;
        let mut coefficients = vec![ZERO; pad];
        coefficients.extend_from_slice(&self.coefficients);
        TruncatedSeries {
            lowest_exponent: lowest,
            coefficients,
            order: self.order,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let lowest = self
            .lowest_exponent
            .min(other.lowest_exponent)
            .min(order + 1);
        let coefficients = (lowest..=order)
            .map(|e| self.coeff(e) + other.coeff(e))
            .collect();
        TruncatedSeries {
            lowest_exponent: lowest,
            coefficients,
            order,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-ONE)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TruncatedSeries {
            lowest_exponent: self.lowest_exponent,
            coefficients: self.coefficients.iter().map(|&x| x * c).collect(),
            order: self.order,
        }
    }

    pub fn add_scalar(&self, c: Complex64) -> Self {
        if self.order < 0 {
            return self.clone();
        }
        let mut out = self.extend_down(0);
        let idx = (0 - out.lowest_exponent) as usize;
        out.coefficients[idx] += c;
        out
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i32) -> Self {
        TruncatedSeries {
            lowest_exponent: self.lowest_exponent + k,
            coefficients: self.coefficients.clone(),
            order: self.order + k,
        }
    }

    /// Cauchy product, truncated to the precision both factors support.
    pub fn mul(&self, other: &Self) -> Self {
        let lowest = self.lowest_exponent + other.lowest_exponent;
        let order = (self.order + other.lowest_exponent).min(other.order + self.lowest_exponent);
        if order < lowest {
            return TruncatedSeries {
                lowest_exponent: order + 1,
                coefficients: Vec::new(),
                order,
            };
        }
        let len = (order - lowest + 1) as usize;
        let mut coefficients = vec![ZERO; len];
        for (i, a) in self.coefficients.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other
                .coefficients
                .iter()
                .enumerate()
                .take(len.saturating_sub(i))
            {
                coefficients[i + j] += a * b;
            }
        }
        TruncatedSeries {
            lowest_exponent: lowest,
            coefficients,
            order,
        }
    }

    /// Multiplicative inverse. The stored leading coefficient must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let lead = match self.coefficients.first() {
            Some(&c) if c != ZERO => c,
            Some(_) => {
                return Err(Error::NotInvertible(format!(
                    "zero leading coefficient at u^{}",
                    self.lowest_exponent
                )))
            }
            None => return Err(Error::NotInvertible("empty series".into())),
        };
        let l = self.lowest_exponent;
        let precision = self.order - l;
        let n = (precision + 1) as usize;
        let inv_lead = lead.inv();
        let mut out = vec![ZERO; n];
        out[0] = inv_lead;
        for k in 1..n {
            let mut acc = ZERO;
            for i in 1..=k {
                acc += self.coefficients[i] * out[k - i];
            }
            out[k] = -acc * inv_lead;
        }
        Ok(TruncatedSeries {
            lowest_exponent: -l,
            coefficients: out,
            order: -l + precision,
        })
    }

    /// Integer power; negative exponents go through [`Self::inverse`].
    pub fn powi(&self, k: i32) -> Result<Self> {
        if k < 0 {
            return self.normalized().inverse()?.powi(-k);
        }
        if k == 0 {
            return Ok(TruncatedSeries::one(self.order - self.lowest_exponent));
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    Some(r) => r.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result.expect("k > 0"))
    }

    /// Formal derivative with respect to the series variable.
    pub fn derivative(&self) -> Self {
        let l = self.lowest_exponent;
        let coefficients: Vec<Complex64> = self.terms().map(|(e, c)| c * e as f64).collect();
        let out = TruncatedSeries {
            lowest_exponent: l - 1,
            coefficients,
            order: self.order - 1,
        };
        if l == 0 {
            // the u^-1 slot is the derivative of the constant term
            TruncatedSeries {
                lowest_exponent: 0,
                coefficients: out
                    .coefficients
                    .get(1..)
                    .map(|c| c.to_vec())
                    .unwrap_or_default(),
                order: out.order,
            }
        } else {
            out
        }
    }

    /// Formal antiderivative with zero constant of integration.
    /// Fails if a `u^-1` term is present.
    pub fn integral(&self) -> Result<Self> {
        if self.coeff(-1) != ZERO {
            return Err(Error::invalid("cannot integrate a u^-1 term"));
        }
        let lowest = self.lowest_exponent + 1;
        let coefficients = self
            .terms()
            .map(|(e, c)| if e == -1 { ZERO } else { c / (e + 1) as f64 })
            .collect();
        Ok(TruncatedSeries {
            lowest_exponent: lowest,
            coefficients,
            order: self.order + 1,
        })
    }

    /// `exp(self)` for a power series (no negative exponents).
    pub fn exp(&self) -> Result<Self> {
        if self.lowest_exponent < 0 && self.valuation().is_some_and(|v| v < 0) {
            return Err(Error::invalid("exp of a series with a pole"));
        }
        let a = self.extend_down(0);
        let c0 = a.coeff(0);
        let n = (a.order + 1).max(0) as usize;
        // E' = A' E, so k E_k = sum_{j=1}^k j A_j E_{k-j}
        let mut e = vec![ZERO; n];
        if n > 0 {
            e[0] = ONE;
        }
        for k in 1..n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += a.coeff(j as i32) * j as f64 * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        let scale = c0.exp();
        Ok(TruncatedSeries {
            lowest_exponent: 0,
            coefficients: e.into_iter().map(|x| x * scale).collect(),
            order: a.order,
        })
    }

    /// `ln(self)` for a power series with nonzero constant term.
    pub fn ln(&self) -> Result<Self> {
        let a = self.extend_down(0);
        if a.lowest_exponent < 0 && a.valuation().is_some_and(|v| v < 0) {
            return Err(Error::invalid("ln of a series with a pole"));
        }
        let c0 = a.coeff(0);
        if c0 == ZERO {
            return Err(Error::NotInvertible("ln of a series vanishing at 0".into()));
        }
        let ratio = a.derivative().mul(&a.normalized().inverse()?);
        Ok(ratio.integral()?.add_scalar(c0.ln()))
    }

    /// `self(c * u)`.
    pub fn rescale(&self, c: Complex64) -> Self {
        TruncatedSeries {
            lowest_exponent: self.lowest_exponent,
            coefficients: self.terms().map(|(e, x)| x * c.powi(e)).collect(),
            order: self.order,
        }
    }

    /// Substitutes `inner` for the variable: `self(inner(u))`.
    ///
    /// `inner` must vanish at `u = 0`. When `self` has negative exponents,
    /// `inner` must also be invertible as a Laurent series.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let inner = inner.normalized();
        if inner.lowest_exponent <= 0 && inner.valuation().is_some_and(|v| v <= 0) {
            return Err(Error::invalid(
                "composition needs an inner series vanishing at 0",
            ));
        }
        let l = self.lowest_exponent;
        let t = self.order;
        if self.coefficients.is_empty() {
            let v = inner.valuation().unwrap_or(inner.order + 1);
            return Ok(TruncatedSeries::zero(0).truncate(l * v - 1));
        }
        let inner_val = match inner.valuation() {
            Some(v) => v,
            None => {
                // inner == 0 to its order
                if self.valuation().is_some_and(|v| v < 0) {
                    return Err(Error::PoleHit("series with a pole evaluated at 0".into()));
                }
                let c = if t >= 0 { self.coeff(0) } else { ZERO };
                return Ok(TruncatedSeries::constant(c, inner.order.min(t.max(0))));
            }
        };
        // self = u^l * P(u),  P of degree t - l known exactly
        let degree = t - l;
        let horner_order = inner.order.max(0) + inner_val * (degree + 1);
        let mut acc = TruncatedSeries::constant(self.coeff(t), horner_order);
        for j in (l..t).rev() {
            acc = acc.mul(&inner).add_scalar(self.coeff(j));
        }
        // unknown tail of self contributes O(inner^(degree+1))
        let acc = acc.truncate(inner_val * (degree + 1) - 1);
        if l == 0 {
            return Ok(acc);
        }
        let pow = inner.powi(l)?;
        Ok(acc.mul(&pow))
    }

    /// Evaluates the stored partial sum at a point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.lowest_exponent)
    }

    /// Maximum coefficientwise distance over the common stored range.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let lo = self.lowest_exponent.min(other.lowest_exponent);
        let hi = self.order.min(other.order);
        (lo..=hi)
            .map(|e| (self.coeff(e) - other.coeff(e)).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// Coefficients at negative exponents.
    pub fn principal_part(&self) -> Vec<(i32, Complex64)> {
        self.terms().filter(|(e, _)| *e < 0).collect()
    }

    /// Parity classification with exact coefficient comparison.
    pub fn even_odd_split(&self) -> ParitySplit {
        self.even_odd_split_tol(0.0)
    }

    /// Parity classification treating coefficients of modulus `<= tol` as zero.
    pub fn even_odd_split_tol(&self, tol: f64) -> ParitySplit {
        let odd_clear = self
            .terms()
            .all(|(e, c)| e.rem_euclid(2) == 0 || c.norm() <= tol);
        let even_clear = self
            .terms()
            .all(|(e, c)| e.rem_euclid(2) == 1 || c.norm() <= tol);
        let parity = if odd_clear {
            Parity::Even
        } else if even_clear {
            Parity::Odd
        } else {
            Parity::Neither
        };
        let reduced = match parity {
            Parity::Even => Some(self.reduce_by_parity(0)),
            Parity::Odd => Some(self.reduce_by_parity(1)),
            Parity::Neither => None,
        };
        ParitySplit {
            parity,
            reduced,
            order: self.order,
        }
    }

    /// Collects exponents `e ≡ r (mod 2)` as `y^((e - r)/2)`.
    fn reduce_by_parity(&self, r: i32) -> Self {
        let lo = self.lowest_exponent - r;
        let lowest = lo.div_euclid(2) + if lo.rem_euclid(2) == 0 { 0 } else { 1 };
        let order = (self.order - r).div_euclid(2);
        let coefficients = (lowest..=order).map(|i| self.coeff(2 * i + r)).collect();
        TruncatedSeries {
            lowest_exponent: lowest,
            coefficients,
            order,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParitySplit {
    pub parity: Parity,
    /// `S` with `Q(x) = S(x^2)` or `T` with `Q(x) = x T(x^2)`.
    pub reduced: Option<TruncatedSeries>,
    order: i32,
}

impl ParitySplit {
    /// Rebuilds the original series, or `None` for [`Parity::Neither`].
    pub fn reconstruct(&self) -> Option<TruncatedSeries> {
        let reduced = self.reduced.as_ref()?;
        let r = match self.parity {
            Parity::Even => 0,
            Parity::Odd => 1,
            Parity::Neither => return None,
        };
        let lowest = 2 * reduced.lowest_exponent + r;
        let order = self.order.max(lowest - 1);
        let coefficients = (lowest..=order)
            .map(|e| {
                if (e - r).rem_euclid(2) == 0 {
                    reduced.coeff((e - r).div_euclid(2))
                } else {
                    ZERO
                }
            })
            .collect();
        Some(TruncatedSeries {
            lowest_exponent: lowest,
            coefficients,
            order,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn difference_of_squares() {
        let a = TruncatedSeries::from_real(0, &[1.0, 1.0], 8);
        let b = TruncatedSeries::from_real(0, &[1.0, -1.0], 8);
        let p = a.mul(&b);
        let expected = TruncatedSeries::from_real(0, &[1.0, 0.0, -1.0], 8);
        assert!(p.approx_eq(&expected, EXACT_TOL));
        assert_eq!(p.order(), 8);
    }

    #[test]
    fn exponent_cancellation() {
        let a = TruncatedSeries::monomial(c(1.0), -1, 16);
        let b = TruncatedSeries::monomial(c(1.0), 1, 16);
        let p = a.mul(&b);
        assert_eq!(p.lowest_exponent(), 0);
        assert!(p.approx_eq(&TruncatedSeries::one(p.order()), EXACT_TOL));
    }

    #[test]
    fn square_of_odd_form() {
        let a3 = Complex64::new(-0.7, 0.3);
        let s = TruncatedSeries::new(1, vec![c(1.0), c(0.0), a3, c(0.0)], 4).unwrap();
        let sq = s.mul(&s);
        assert_eq!(sq.lowest_exponent(), 2);
        assert!((sq.coeff(2) - 1.0).norm() < EXACT_TOL);
        assert!((sq.coeff(4) - 2.0 * a3).norm() < EXACT_TOL);
        assert!(sq.coeff(3).norm() < EXACT_TOL);
    }

    #[test]
    fn geometric_inverse() {
        let a = TruncatedSeries::from_real(0, &[1.0, 1.0], 10);
        let inv = a.inverse().unwrap();
        for k in 0..=10 {
            let want = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((inv.coeff(k) - want).norm() < EXACT_TOL);
        }
    }

    #[test]
    fn monomial_inverse() {
        let u = TruncatedSeries::variable(16);
        let inv = u.inverse().unwrap();
        assert_eq!(inv.lowest_exponent(), -1);
        assert!((inv.coeff(-1) - 1.0).norm() < EXACT_TOL);
        assert!(inv.terms().skip(1).all(|(_, c)| c.norm() < EXACT_TOL));
    }

    #[test]
    fn zero_leading_is_not_invertible() {
        let a = TruncatedSeries::from_real(0, &[0.0, 1.0], 4);
        assert!(matches!(a.inverse(), Err(Error::NotInvertible(_))));
        assert!(a.normalized().inverse().is_ok());
    }

    #[test]
    fn parity_examples() {
        let even = TruncatedSeries::from_real(0, &[1.0, 0.0, 1.0], 6);
        let split = even.even_odd_split();
        assert_eq!(split.parity, Parity::Even);
        let s = split.reduced.clone().unwrap();
        assert!(s.approx_eq(&TruncatedSeries::from_real(0, &[1.0, 1.0], 3), 0.0));
        assert_eq!(split.reconstruct().unwrap(), even);

        let a3 = -1.25;
        let odd = TruncatedSeries::from_real(0, &[0.0, 1.0, 0.0, a3], 7);
        let split = odd.even_odd_split();
        assert_eq!(split.parity, Parity::Odd);
        let t = split.reduced.clone().unwrap();
        assert_eq!(t.coeff(0), c(1.0));
        assert_eq!(t.coeff(1), c(a3));
        assert_eq!(split.reconstruct().unwrap().max_diff(&odd), 0.0);

        let neither = TruncatedSeries::from_real(0, &[1.0, 1.0], 4);
        let split = neither.even_odd_split();
        assert_eq!(split.parity, Parity::Neither);
        assert!(split.reduced.is_none());
    }

    #[test]
    fn laurent_odd_split() {
        // 1/u - u/6
        let q = TruncatedSeries::from_real(-1, &[1.0, 0.0, -1.0 / 6.0], 5);
        let split = q.even_odd_split();
        assert_eq!(split.parity, Parity::Odd);
        let t = split.reduced.as_ref().unwrap();
        assert_eq!(t.lowest_exponent(), -1);
        assert_eq!(split.reconstruct().unwrap().max_diff(&q), 0.0);
    }

    #[test]
    fn exp_ln_round_trip() {
        let a = TruncatedSeries::from_real(0, &[0.0, 0.5, -0.25, 0.125], 10);
        let back = a.exp().unwrap().ln().unwrap();
        assert!(back.approx_eq(&a, 1e-13));
    }

    #[test]
    fn compose_with_scaled_variable() {
        // (1 + x)^-1 at x = 2u
        let q = TruncatedSeries::from_real(0, &[1.0, -1.0, 1.0, -1.0, 1.0, -1.0], 5);
        let inner = TruncatedSeries::variable(5).scale(c(2.0));
        let r = q.compose(&inner).unwrap();
        for k in 0..=5 {
            assert!((r.coeff(k) - (-2.0f64).powi(k)).norm() < EXACT_TOL);
        }
    }

    #[test]
    fn compose_laurent() {
        // 1/x at x = u + u^2  ->  1/u - 1 + u - ...
        let q = TruncatedSeries::from_real(-1, &[1.0], 6);
        let inner = TruncatedSeries::from_real(1, &[1.0, 1.0], 8);
        let r = q.compose(&inner).unwrap();
        assert!((r.coeff(-1) - 1.0).norm() < EXACT_TOL);
        assert!((r.coeff(0) + 1.0).norm() < EXACT_TOL);
        assert!((r.coeff(1) - 1.0).norm() < EXACT_TOL);
    }

    #[test]
    fn derivative_of_laurent() {
        let q = TruncatedSeries::from_real(-1, &[1.0, 2.0, 3.0], 1);
        let d = q.derivative();
        assert_eq!(d.lowest_exponent(), -2);
        assert_eq!(d.coeff(-2), c(-1.0));
        assert_eq!(d.coeff(-1), c(0.0));
        assert_eq!(d.coeff(0), c(3.0));
    }

    #[test]
    fn length_invariant_enforced() {
        assert!(TruncatedSeries::new(0, vec![c(1.0)], 3).is_err());
        assert!(TruncatedSeries::new(-2, vec![c(1.0); 6], 3).is_ok());
    }
}
