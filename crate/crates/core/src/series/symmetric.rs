use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::{TruncatedSeries, EXACT_TOL};
use crate::error::{Error, Result};

/// Polynomial in the elementary symmetric functions `σ_1..σ_n`, truncated at
/// weighted degree `bound` (weight of `σ_j` is `j`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricPolynomial {
    n: usize,
    bound: usize,
    /// exponent vector `(λ_1..λ_n)` -> coefficient
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl SymmetricPolynomial {
    pub fn zero(n: usize, bound: usize) -> Self {
        SymmetricPolynomial {
            n,
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Complex64, n: usize, bound: usize) -> Self {
        let mut p = Self::zero(n, bound);
        p.insert(vec![0; n], c);
        p
    }

    /// The generator `σ_j` (1-based).
    pub fn generator(j: usize, n: usize, bound: usize) -> Self {
        let mut p = Self::zero(n, bound);
        let mut e = vec![0; n];
        e[j - 1] = 1;
        p.insert(e, Complex64::new(1.0, 0.0));
        p
    }

    pub fn number_of_roots(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Complex64> {
        &self.terms
    }

    pub fn weight(exponents: &[u32]) -> usize {
        exponents
            .iter()
            .enumerate()
            .map(|(j, &l)| (j + 1) * l as usize)
            .sum()
    }

    fn insert(&mut self, exponents: Vec<u32>, c: Complex64) {
        if Self::weight(&exponents) > self.bound || c == Complex64::new(0.0, 0.0) {
            return;
        }
        *self.terms.entry(exponents).or_default() += c;
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Complex64 {
        self.terms.get(exponents).copied().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n, self.bound);
        for (e, x) in &self.terms {
            out.insert(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.bound.min(other.bound));
        for (ea, a) in &self.terms {
            let wa = Self::weight(ea);
            for (eb, b) in &other.terms {
                if wa + Self::weight(eb) > out.bound {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, a * b);
            }
        }
        out
    }

    /// Evaluates at given values of `σ_1..σ_n`.
    pub fn evaluate(&self, sigma: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(sigma).fold(*c, |acc, (&l, s)| acc * s.powu(l)))
            .sum()
    }
}

/// `σ_1..σ_n` of the given roots.
pub fn elementary_symmetric(roots: &[Complex64]) -> Vec<Complex64> {
    let n = roots.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (i, x) in roots.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] = e[j] + e[j - 1] * x;
        }
    }
    e.split_off(1)
}

/// Power sums `p_1..p_bound` written in the elementary symmetric functions via
/// Newton's identities.
fn power_sums(n: usize, bound: usize) -> Vec<SymmetricPolynomial> {
    let mut p: Vec<SymmetricPolynomial> = Vec::with_capacity(bound + 1);
    p.push(SymmetricPolynomial::constant(
        Complex64::new(n as f64, 0.0),
        n,
        bound,
    ));
    for k in 1..=bound {
        let mut pk = SymmetricPolynomial::zero(n, bound);
        for i in 1..k.min(n + 1) {
            let sign = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let term = SymmetricPolynomial::generator(i, n, bound).mul(&p[k - i]);
            pk = pk.add(&term.scale(Complex64::new(sign, 0.0)));
        }
        if k <= n {
            let sign = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let term = SymmetricPolynomial::generator(k, n, bound);
            pk = pk.add(&term.scale(Complex64::new(sign * k as f64, 0.0)));
        }
        p.push(pk);
    }
    p
}

/// The polynomial `P_Q` with `Q(x_1)...Q(x_n) = P_Q(σ_1, ..., σ_n)` up to total
/// degree `bound` in the roots.
///
/// Computed as `exp(sum_k l_k p_k)` where `ln Q = sum_k l_k x^k` and the power
/// sums `p_k` are rewritten through Newton's identities.
pub fn elementary_symmetric_expansion(
    q: &TruncatedSeries,
    n: usize,
    bound: usize,
) -> Result<SymmetricPolynomial> {
    if n == 0 {
        return Err(Error::invalid("need at least one root"));
    }
    if q.valuation().is_some_and(|v| v < 0) {
        return Err(Error::NotUnital("series has a pole".into()));
    }
    let c0 = q.coeff(0);
    if (c0 - 1.0).norm() > EXACT_TOL {
        return Err(Error::NotUnital(format!("{c0}")));
    }
    if (q.order() as i64) < bound as i64 {
        return Err(Error::invalid(format!(
            "series known to order {} but bound {bound} requested",
            q.order()
        )));
    }
    let log_q = q.truncate(bound as i32).ln()?;
    let p = power_sums(n, bound);
    let mut exponent = SymmetricPolynomial::zero(n, bound);
    for (k, pk) in p.iter().enumerate().skip(1) {
        let l = log_q.coeff(k as i32);
        if l != Complex64::new(0.0, 0.0) {
            exponent = exponent.add(&pk.scale(l));
        }
    }
    // exponent has no constant term, so its powers beyond `bound` vanish
    let one = Complex64::new(1.0, 0.0);
    let mut result = SymmetricPolynomial::constant(one, n, bound);
    let mut power = SymmetricPolynomial::constant(one, n, bound);
    for j in 1..=bound {
        power = power
            .mul(&exponent)
            .scale(Complex64::new(1.0 / j as f64, 0.0));
        if power.terms.is_empty() {
            break;
        }
        result = result.add(&power);
    }
    result.terms.retain(|_, c| c.norm() > 0.0);
    Ok(result)
}
