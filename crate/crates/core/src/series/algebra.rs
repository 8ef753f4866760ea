use num_complex::Complex64;

use super::TruncatedSeries;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coefficients an algebra element may carry: plain complex numbers at a fixed
/// `u`, or truncated `u`-series.
pub trait CoefficientRing: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: Complex64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse in the coefficient ring.
    fn try_inverse(&self) -> Result<Self>;
}

impl CoefficientRing for Complex64 {
    fn zero_like(&self) -> Self {
        ZERO
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: Complex64) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        *self == ZERO
    }
    fn try_inverse(&self) -> Result<Self> {
        if *self == ZERO {
            Err(Error::NotInvertible("zero scalar".into()))
        } else {
            Ok(self.inv())
        }
    }
}

impl CoefficientRing for TruncatedSeries {
    fn zero_like(&self) -> Self {
        TruncatedSeries::zero(self.order())
    }
    fn add(&self, other: &Self) -> Self {
        TruncatedSeries::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        TruncatedSeries::mul(self, other)
    }
    fn scale(&self, c: Complex64) -> Self {
        TruncatedSeries::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }
    fn try_inverse(&self) -> Result<Self> {
        self.normalized().inverse()
    }
}

/// Element of a [`NilpotentAlgebra`]: one coefficient per basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<R> {
    pub coeffs: Vec<R>,
}

impl<R: CoefficientRing> AlgebraElement<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        AlgebraElement { coeffs }
    }

    /// Coefficient on the unit basis element.
    pub fn scalar_part(&self) -> &R {
        &self.coeffs[0]
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgebraElement {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn map<S, F: Fn(&R) -> S>(&self, f: F) -> AlgebraElement<S> {
        AlgebraElement {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl AlgebraElement<Complex64> {
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }
}

/// Finite commutative algebra given by a multiplication table on a basis
/// `e_0 = 1, e_1, ..., e_{k-1}`, graded in even degrees, with every non-unit
/// basis element nilpotent. Models the cohomology ring of a fixed component.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentAlgebra {
    degrees: Vec<u32>,
    /// `table[i * k + j]` is the coefficient vector of `e_i e_j`.
    table: Vec<Vec<Complex64>>,
    top_functional: Vec<Complex64>,
}

impl NilpotentAlgebra {
    pub fn new(
        degrees: Vec<u32>,
        mult_table: Vec<Vec<Vec<Complex64>>>,
        top_functional: Vec<Complex64>,
    ) -> Result<Self> {
        let k = degrees.len();
        if k == 0 {
            return Err(Error::invalid("algebra needs at least the unit"));
        }
        if degrees[0] != 0 {
            return Err(Error::invalid(
                "basis element 0 must be the unit in degree 0",
            ));
        }
        if let Some(d) = degrees.iter().find(|d| *d % 2 != 0) {
            return Err(Error::invalid(format!(
                "odd degree {d}; only even degrees are supported"
            )));
        }
        if mult_table.len() != k || mult_table.iter().any(|row| row.len() != k) {
            return Err(Error::invalid(format!(
                "multiplication table must be {k}x{k}"
            )));
        }
        if top_functional.len() != k {
            return Err(Error::invalid("top functional has the wrong length"));
        }
        let mut table = Vec::with_capacity(k * k);
        for row in mult_table {
            for v in row {
                if v.len() != k {
                    return Err(Error::invalid("product vector has the wrong length"));
                }
                table.push(v);
            }
        }
        let alg = NilpotentAlgebra {
            degrees,
            table,
            top_functional,
        };
        alg.check()?;
        Ok(alg)
    }

    fn check(&self) -> Result<()> {
        const TOL: f64 = 1e-12;
        let k = self.basis_size();
        let close =
            |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).all(|(x, y)| (x - y).norm() <= TOL);
        for j in 0..k {
            let e = self.basis_vector(j);
            if !close(self.product(0, j), &e) || !close(self.product(j, 0), &e) {
                return Err(Error::invalid(format!("e_0 is not a unit for e_{j}")));
            }
        }
        for i in 0..k {
            for j in 0..k {
                if !close(self.product(i, j), self.product(j, i)) {
                    return Err(Error::invalid(format!("e_{i} e_{j} != e_{j} e_{i}")));
                }
                for (l, c) in self.product(i, j).iter().enumerate() {
                    if c.norm() > TOL && self.degrees[l] != self.degrees[i] + self.degrees[j] {
                        return Err(Error::invalid(format!(
                            "e_{i} e_{j} has a component on e_{l} of the wrong degree"
                        )));
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let ij = self.product(i, j).to_vec();
                for l in 0..k {
                    let left = self.mul_vec(&ij, &self.basis_vector(l));
                    let jl = self.product(j, l).to_vec();
                    let right = self.mul_vec(&self.basis_vector(i), &jl);
                    if !close(&left, &right) {
                        return Err(Error::invalid(format!(
                            "multiplication not associative on (e_{i}, e_{j}, e_{l})"
                        )));
                    }
                }
            }
        }
        for i in 1..k {
            let e = self.basis_vector(i);
            let mut p = e.clone();
            let mut vanished = false;
            for _ in 0..k {
                p = self.mul_vec(&p, &e);
                if p.iter().all(|c| c.norm() <= TOL) {
                    vanished = true;
                    break;
                }
            }
            if !vanished {
                return Err(Error::invalid(format!("e_{i} is not nilpotent")));
            }
        }
        Ok(())
    }

    /// The one-dimensional algebra `C`, i.e. the cohomology of a point.
    pub fn point() -> Self {
        NilpotentAlgebra {
            degrees: vec![0],
            table: vec![vec![Complex64::new(1.0, 0.0)]],
            top_functional: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// `C[a_1, ..., a_r] / (a_1^{p_1}, ..., a_r^{p_r})` with each `a_i` in degree 2,
    /// integrating against the product of top powers. `truncated_tensor(&[k+1])`
    /// is the cohomology of `CP^k`.
    pub fn truncated_tensor(exponent_bounds: &[usize]) -> Result<Self> {
        if exponent_bounds.contains(&0) {
            return Err(Error::invalid("exponent bounds must be positive"));
        }
        let mut monomials: Vec<Vec<usize>> = vec![vec![]];
        for &p in exponent_bounds {
            monomials = monomials
                .into_iter()
                .flat_map(|m| {
                    (0..p).map(move |e| {
                        let mut m = m.clone();
                        m.push(e);
                        m
                    })
                })
                .collect();
        }
        // unit first, then by total degree
        monomials.sort_by_key(|m| (m.iter().sum::<usize>(), m.clone()));
        let k = monomials.len();
        let index = |m: &[usize]| monomials.iter().position(|x| x == m);
        let degrees = monomials
            .iter()
            .map(|m| 2 * m.iter().sum::<usize>() as u32)
            .collect();
        let mut table = Vec::with_capacity(k * k);
        for a in &monomials {
            for b in &monomials {
                let prod: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let mut v = vec![ZERO; k];
                if let Some(l) = index(&prod) {
                    v[l] = Complex64::new(1.0, 0.0);
                }
                table.push(v);
            }
        }
        let top: Vec<usize> = exponent_bounds.iter().map(|p| p - 1).collect();
        let mut top_functional = vec![ZERO; k];
        top_functional[index(&top).expect("top monomial present")] = Complex64::new(1.0, 0.0);
        let alg = NilpotentAlgebra {
            degrees,
            table,
            top_functional,
        };
        alg.check()?;
        Ok(alg)
    }

    pub fn basis_size(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Highest degree carried by a basis element, the real dimension of the
    /// component this algebra models.
    pub fn top_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn top_functional(&self) -> &[Complex64] {
        &self.top_functional
    }

    /// Multiplication table in nested `[i][j] -> vector` form.
    pub fn mult_table(&self) -> Vec<Vec<Vec<Complex64>>> {
        let k = self.basis_size();
        (0..k)
            .map(|i| (0..k).map(|j| self.product(i, j).to_vec()).collect())
            .collect()
    }

    fn product(&self, i: usize, j: usize) -> &[Complex64] {
        &self.table[i * self.basis_size() + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; self.basis_size()];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    fn mul_vec(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let k = self.basis_size();
        let mut out = vec![ZERO; k];
        for (i, x) in a.iter().enumerate() {
            if *x == ZERO {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if *y == ZERO {
                    continue;
                }
                let xy = x * y;
                for (o, c) in out.iter_mut().zip(self.product(i, j)) {
                    *o += xy * c;
                }
            }
        }
        out
    }

    /// Complex element from its coordinates.
    pub fn element(&self, coords: Vec<Complex64>) -> Result<AlgebraElement<Complex64>> {
        if coords.len() != self.basis_size() {
            return Err(Error::invalid(
                "element has the wrong number of coordinates",
            ));
        }
        Ok(AlgebraElement::new(coords))
    }

    pub fn zero_element<R: CoefficientRing>(&self, zero: R) -> AlgebraElement<R> {
        AlgebraElement::new(vec![zero; self.basis_size()])
    }

    /// `scalar * 1`.
    pub fn scalar<R: CoefficientRing>(&self, scalar: R) -> AlgebraElement<R> {
        let mut coeffs = vec![scalar.zero_like(); self.basis_size()];
        coeffs[0] = scalar;
        AlgebraElement::new(coeffs)
    }

    pub fn mul<R: CoefficientRing>(
        &self,
        a: &AlgebraElement<R>,
        b: &AlgebraElement<R>,
    ) -> AlgebraElement<R> {
        let zero = a.coeffs[0].zero_like();
        let mut out = vec![zero; self.basis_size()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x.mul(y);
                for (o, c) in out.iter_mut().zip(self.product(i, j)) {
                    if *c != ZERO {
                        *o = o.add(&xy.scale(*c));
                    }
                }
            }
        }
        AlgebraElement::new(out)
    }

    /// Powers `w^0, w^1, ...` of a complex element up to the first that vanishes.
    pub fn powers(&self, w: &AlgebraElement<Complex64>) -> Result<Vec<AlgebraElement<Complex64>>> {
        if w.coeffs[0] != ZERO {
            return Err(Error::invalid(
                "expected a nilpotent element (zero unit coefficient)",
            ));
        }
        let mut out = vec![AlgebraElement::new(self.basis_vector(0))];
        let mut p = w.clone();
        for _ in 0..self.basis_size() {
            if p.is_zero() {
                break;
            }
            out.push(p.clone());
            p = self.mul(&p, w);
        }
        Ok(out)
    }

    /// `sum_k taylor[k] * w^k` for nilpotent `w`; `taylor[k]` are the Taylor
    /// coefficients `f^(k)(x0)/k!` of some function at the scalar point `x0`.
    pub fn apply_taylor<R: CoefficientRing>(
        &self,
        taylor: &[R],
        w: &AlgebraElement<Complex64>,
    ) -> Result<AlgebraElement<R>> {
        let powers = self.powers(w)?;
        if taylor.len() < powers.len() {
            return Err(Error::invalid(format!(
                "need {} Taylor coefficients, got {}",
                powers.len(),
                taylor.len()
            )));
        }
        let zero = taylor[0].zero_like();
        let mut out = vec![zero; self.basis_size()];
        for (p, t) in powers.iter().zip(taylor) {
            for (o, c) in out.iter_mut().zip(&p.coeffs) {
                if *c != ZERO {
                    *o = o.add(&t.scale(*c));
                }
            }
        }
        Ok(AlgebraElement::new(out))
    }

    /// Inverse of `c + n` with `c` the scalar part and `n` nilpotent:
    /// `c^-1 sum_k (-n c^-1)^k`.
    pub fn inverse<R: CoefficientRing>(&self, a: &AlgebraElement<R>) -> Result<AlgebraElement<R>> {
        let c_inv = a.coeffs[0].try_inverse()?;
        let mut n = a.clone();
        n.coeffs[0] = n.coeffs[0].zero_like();
        let step = {
            let scaled = n.map(|x| x.mul(&c_inv));
            scaled.scale(Complex64::new(-1.0, 0.0))
        };
        let mut term = self.scalar(c_inv.clone());
        let mut sum = term.clone();
        for _ in 1..self.basis_size() {
            term = self.mul(&term, &step);
            if term.coeffs.iter().all(|c| c.is_zero()) {
                break;
            }
            sum = sum.add(&term);
        }
        Ok(sum)
    }

    /// Applies the integration functional.
    pub fn integrate<R: CoefficientRing>(&self, a: &AlgebraElement<R>) -> R {
        let mut acc = a.coeffs[0].zero_like();
        for (c, t) in a.coeffs.iter().zip(&self.top_functional) {
            if *t != ZERO {
                acc = acc.add(&c.scale(*t));
            }
        }
        acc
    }
}

/// Evaluates `Q(scalar_part + x)` for nilpotent `x`, as
/// `sum_k Q^(k)(scalar_part)/k! * x^k` with `u`-series coefficients.
///
/// `scalar_part` must vanish at `u = 0`. When `Q` has a pole at the origin the
/// scalar part must be invertible, otherwise the evaluation hits the pole.
pub fn algebra_evaluate_series(
    algebra: &NilpotentAlgebra,
    q: &TruncatedSeries,
    x: &AlgebraElement<Complex64>,
    scalar_part: &TruncatedSeries,
) -> Result<AlgebraElement<TruncatedSeries>> {
    let powers = algebra.powers(x)?;
    let has_pole = q.valuation().is_some_and(|v| v < 0);
    if has_pole && scalar_part.valuation().is_none() {
        return Err(Error::PoleHit(
            "series with a pole evaluated at a vanishing scalar part".into(),
        ));
    }
    let mut derivative = q.clone();
    let mut taylor = Vec::with_capacity(powers.len());
    let mut factorial = 1.0;
    for k in 0..powers.len() {
        if k > 0 {
            derivative = derivative.derivative();
            factorial *= k as f64;
        }
        let at_point = derivative.compose(scalar_part)?;
        taylor.push(at_point.scale(Complex64::new(1.0 / factorial, 0.0)));
    }
    algebra.apply_taylor(&taylor, x)
}
