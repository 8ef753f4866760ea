//! `C[u]`-module computations: local Smith forms at `u = 0`, divisors on the
//! curve and the decomposition attached to the rotation `S²(n)`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use serde::Serialize;

use crate::elliptic::{CurvePoint, Lattice, TORSION_TOL};
use crate::error::{Error, Result};

/// Exact complex rationals.
pub type ExactComplex = Complex<BigRational>;

/// Coefficient field for polynomial matrices.
pub trait Coefficient: Num + Clone + Debug + Send + Sync {
    /// Whether the value counts as zero (exactly, or within tolerance).
    fn negligible(&self) -> bool;
    fn from_int(i: i64) -> Self;
    fn to_complex(&self) -> Complex64;
}

/// Entries of modulus at most this are zero in floating-point reductions.
pub const UNIT_TOL: f64 = 1e-12;

impl Coefficient for Complex64 {
    fn negligible(&self) -> bool {
        self.norm() <= UNIT_TOL
    }
    fn from_int(i: i64) -> Self {
        Complex64::new(i as f64, 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl Coefficient for ExactComplex {
    fn negligible(&self) -> bool {
        self.is_zero()
    }
    fn from_int(i: i64) -> Self {
        Complex::new(
            BigRational::from_integer(BigInt::from(i)),
            BigRational::zero(),
        )
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Polynomial in `u`, coefficients in ascending order, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Coefficient> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.negligible()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| F::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `c u^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k];
        v.push(c);
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.negligible())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Order of vanishing at `u = 0`; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.negligible())
    }

    /// Whether this is a unit of the local ring at `u = 0`.
    pub fn is_local_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    /// Drops the terms of degree `>= n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).cloned().collect())
    }

    /// Inverse of a local unit modulo `u^n`.
    pub fn inverse_mod(&self, n: usize) -> Self {
        let c0 = self.coeff(0);
        let mut inv: Vec<F> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 { F::one() } else { F::zero() };
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc - self.coeffs[i].clone() * inv[k - i].clone();
            }
            inv.push(acc / c0.clone());
        }
        Self::new(inv)
    }

    /// Divides by `u^k`, dropping lower terms.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, u: F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * u.clone() + c.clone();
        }
        acc
    }
}

/// `rows × cols` matrix of polynomials in `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuMatrix<F> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<F>>,
}

impl<F: Coefficient> CuMatrix<F> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly<F>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(CuMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// From nested integer coefficient lists `[row][col][power]`.
    pub fn from_ints(rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix"));
        }
        let entries = rows.iter().flatten().map(|p| Poly::from_ints(p)).collect();
        Self::new(r, c, entries)
    }

    pub fn identity(k: usize) -> Self {
        let mut entries = vec![Poly::zero(); k * k];
        for i in 0..k {
            entries[i * k + i] = Poly::constant(F::one());
        }
        CuMatrix {
            rows: k,
            cols: k,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::invalid("dimension mismatch in matrix product"));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        Self::new(self.rows, other.cols, entries)
    }

    /// Applies the matrix to a column of polynomials.
    pub fn apply(&self, v: &[Poly<F>]) -> Result<Vec<Poly<F>>> {
        if v.len() != self.cols {
            return Err(Error::invalid("vector length does not match the matrix"));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Poly::zero(), |acc, j| acc.add(&self.get(i, j).mul(&v[j])))
            })
            .collect())
    }

    /// Determinant of a square matrix by cofactor expansion.
    pub fn determinant(&self) -> Result<Poly<F>> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.minor(&idx, &idx))
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> Poly<F> {
        match rows.len() {
            0 => Poly::constant(F::one()),
            1 => self.get(rows[0], cols[0]).clone(),
            _ => {
                let mut acc = Poly::zero();
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(rows[0], c);
                    if entry.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = entry.mul(&self.minor(&rows[1..], &rest));
                    acc = if k % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }
}

/// Exponents `n_1 <= ... <= n_k` of the Smith form `D(u^{n_1}, ..., u^{n_k})`
/// over the local ring at `u = 0`, by row and column reduction with
/// minimal-valuation pivots.
pub fn local_smith_exponents<F: Coefficient>(m: &CuMatrix<F>) -> Result<Vec<u32>> {
    // Σ n_k is the valuation of a nonzero maximal minor, so no exponent
    // exceeds cols · (max degree). Working mod u^N is exact once every
    // exponent is found below N.
    let max_deg = m
        .entries
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(0);
    let cap = m.cols * max_deg + 1;
    let mut bound = 4.min(cap);
    loop {
        let mut exps = reduce_mod(m, bound);
        if exps.len() == m.cols {
            exps.sort_unstable();
            return Ok(exps);
        }
        if bound >= cap {
            return Err(Error::NotInjective {
                rank: exps.len(),
                cols: m.cols,
            });
        }
        bound = (2 * bound).min(cap);
    }
}

/// Pivot valuations found by elimination over `C[u]/(u^bound)`.
fn reduce_mod<F: Coefficient>(m: &CuMatrix<F>, bound: usize) -> Vec<u32> {
    let mut a = m.clone();
    for e in a.entries.iter_mut() {
        *e = e.truncate(bound);
    }
    let (rows, cols) = (a.rows, a.cols);
    let mut exps = Vec::with_capacity(cols);
    for t in 0..cols.min(rows) {
        // pivot with least valuation in the remaining block
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if let Some(v) = a.get(i, j).valuation() {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else { break };
        swap_rows(&mut a, t, pi);
        swap_cols(&mut a, t, pj);
        let unit_inv = a.get(t, t).shift_down(v).inverse_mod(bound - v);
        // row_i <- row_i - (e_i / pivot)·row_t; the column operations that
        // would clear row t leave the remaining block untouched
        for i in t + 1..rows {
            let e = a.get(i, t).clone();
            if e.is_zero() {
                continue;
            }
            let factor = e.shift_down(v).mul(&unit_inv).truncate(bound - v);
            for j in t..cols {
                let new = a.get(i, j).sub(&factor.mul(a.get(t, j))).truncate(bound);
                a.set(i, j, new);
            }
        }
        exps.push(v as u32);
    }
    exps
}

fn swap_rows<F: Coefficient>(a: &mut CuMatrix<F>, i: usize, k: usize) {
    if i != k {
        for j in 0..a.cols {
            a.entries.swap(i * a.cols + j, k * a.cols + j);
        }
    }
}

fn swap_cols<F: Coefficient>(a: &mut CuMatrix<F>, j: usize, k: usize) {
    if j != k {
        for i in 0..a.rows {
            a.entries.swap(i * a.cols + j, i * a.cols + k);
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// The same exponents from determinantal divisors: with `d_k` the least
/// valuation of a `k×k` minor, `n_k = d_k - d_{k-1}`.
pub fn local_smith_exponents_determinantal<F: Coefficient>(m: &CuMatrix<F>) -> Result<Vec<u32>> {
    let mut d_prev = 0usize;
    let mut exps = Vec::with_capacity(m.cols);
    for k in 1..=m.cols.min(m.rows) {
        let mut best: Option<usize> = None;
        for rs in combinations(m.rows, k) {
            for cs in combinations(m.cols, k) {
                if let Some(v) = m.minor(&rs, &cs).valuation() {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        let Some(d) = best else { break };
        exps.push((d - d_prev) as u32);
        d_prev = d;
    }
    if exps.len() < m.cols {
        return Err(Error::NotInjective {
            rank: exps.len(),
            cols: m.cols,
        });
    }
    Ok(exps)
}

/// Restriction to the fixed points of the rotation `S²(n)`, in the bases
/// `{(1,1), (u,0)}` of `C[u] ×_C C[u]` and `{(1,1), (1,0)}` of `C[u] × C[u]`.
pub fn s2n_restriction_matrix<F: Coefficient>(n: u32) -> Result<CuMatrix<F>> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    CuMatrix::from_ints(&[vec![vec![1], vec![]], vec![vec![], vec![0, 1]]])
}

/// Coordinates of `(P, Q)` with `P(0) = Q(0)` in the basis `{(1,1), (u,0)}`.
pub fn fiber_product_coords<F: Coefficient>(
    p: &Poly<F>,
    q: &Poly<F>,
) -> Result<(Poly<F>, Poly<F>)> {
    let d = p.sub(q);
    if !d.coeff(0).negligible() {
        return Err(Error::invalid("P(0) != Q(0): not in the fiber product"));
    }
    Ok((q.clone(), d.shift_down(1)))
}

/// `(P, Q)` from coordinates in the basis `{(1,1), (1,0)}`.
pub fn product_from_coords<F: Coefficient>(a: &Poly<F>, b: &Poly<F>) -> (Poly<F>, Poly<F>) {
    (a.add(b), a.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisorEntry {
    pub point: CurvePoint,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Divisor {
    pub entries: Vec<DivisorEntry>,
}

impl Divisor {
    /// Drops zero multiplicities.
    pub fn new(entries: Vec<(CurvePoint, i64)>) -> Self {
        Divisor {
            entries: entries
                .into_iter()
                .filter(|(_, m)| *m != 0)
                .map(|(point, multiplicity)| DivisorEntry {
                    point,
                    multiplicity,
                })
                .collect(),
        }
    }

    /// All points of order dividing `n`, each with multiplicity 1.
    pub fn torsion(lattice: &Lattice, n: u32) -> Self {
        Self::new(
            lattice
                .torsion_points(n)
                .into_iter()
                .map(|p| (p, 1))
                .collect(),
        )
    }

    pub fn support(&self) -> Vec<CurvePoint> {
        self.entries.iter().map(|e| e.point).collect()
    }
}

pub fn divisor_degree(d: &Divisor) -> i64 {
    d.entries.iter().map(|e| e.multiplicity).sum()
}

/// `Σ mult · point`, reduced mod `Λ`. `None` for the empty divisor, which has
/// no lattice attached.
pub fn divisor_sum(d: &Divisor) -> Option<CurvePoint> {
    let lattice = d.entries.first()?.point.lattice;
    let total: Complex64 = d
        .entries
        .iter()
        .map(|e| e.point.z * e.multiplicity as f64)
        .sum();
    Some(CurvePoint::new(lattice, lattice.reduce(total)))
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalExponents {
    pub point: CurvePoint,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SheafDecomposition {
    pub n: u32,
    /// ranks of the summands `O ⊕ O(Δ)`
    pub free_ranks: Vec<u32>,
    pub local_exponents: Vec<LocalExponents>,
    pub divisor: Divisor,
    pub degree: i64,
    pub abel_sum: CurvePoint,
    pub abel_sum_vanishes: bool,
    /// degree of the twisting line bundle under both readings: `O(Δ)` with
    /// `Δ` effective, and `O(-n²·0)`
    pub twist_degree_effective: i64,
    pub twist_degree_negative: i64,
}

/// Decomposition `O ⊕ O(Δ)` for `S²(n)`: `Δ` is the divisor of all
/// `n`-torsion points, each carrying the local exponents of the restriction
/// matrix.
pub fn assemble_sheaf_decomposition(n: u32, lattice: &Lattice) -> Result<SheafDecomposition> {
    let matrix = s2n_restriction_matrix::<ExactComplex>(n)?;
    let exponents = local_smith_exponents(&matrix)?;
    let divisor = Divisor::torsion(lattice, n);
    let degree = divisor_degree(&divisor);
    let abel_sum = divisor_sum(&divisor).expect("torsion divisor is nonempty");
    Ok(SheafDecomposition {
        n,
        free_ranks: vec![1, 1],
        local_exponents: divisor
            .support()
            .into_iter()
            .map(|point| LocalExponents {
                point,
                exponents: exponents.clone(),
            })
            .collect(),
        abel_sum_vanishes: lattice.contains(abel_sum.z, TORSION_TOL),
        abel_sum,
        twist_degree_effective: degree,
        twist_degree_negative: -degree,
        degree,
        divisor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = ExactComplex;

    #[test]
    fn diagonal_example() {
        let m = s2n_restriction_matrix::<Q>(2).unwrap();
        assert_eq!(local_smith_exponents(&m).unwrap(), vec![0, 1]);
        assert_eq!(local_smith_exponents_determinantal(&m).unwrap(), vec![0, 1]);
        assert_eq!(s2n_restriction_matrix::<Q>(1).unwrap(), m);
        assert!(s2n_restriction_matrix::<Q>(0).is_err());
    }

    #[test]
    fn identity_and_rank_deficiency() {
        let id = CuMatrix::<Complex64>::identity(3);
        assert_eq!(local_smith_exponents(&id).unwrap(), vec![0, 0, 0]);
        let singular =
            CuMatrix::<Q>::from_ints(&[vec![vec![1], vec![0, 1]], vec![vec![1], vec![0, 1]]])
                .unwrap();
        assert_eq!(
            local_smith_exponents(&singular).unwrap_err(),
            Error::NotInjective { rank: 1, cols: 2 }
        );
    }

    #[test]
    fn square_of_u() {
        // [[u^2]] conjugated by constant-determinant polynomial units
        let m = CuMatrix::<Q>::from_ints(&[vec![vec![0, 0, 1]]]).unwrap();
        let a = CuMatrix::<Q>::from_ints(&[vec![vec![3, 1, 4]]]).unwrap();
        let b = CuMatrix::<Q>::from_ints(&[vec![vec![-2, 0, 5]]]).unwrap();
        let c = a.mul(&m).unwrap().mul(&b).unwrap();
        assert_eq!(local_smith_exponents(&c).unwrap(), vec![2]);
    }

    #[test]
    fn mixed_matrix() {
        // [[u, u^2], [u^2, u]] has exponents (1, 1); [[u, 0], [1, u^3]] has (0, 4)
        let m = CuMatrix::<Q>::from_ints(&[
            vec![vec![0, 1], vec![0, 0, 1]],
            vec![vec![0, 0, 1], vec![0, 1]],
        ])
        .unwrap();
        assert_eq!(local_smith_exponents(&m).unwrap(), vec![1, 1]);
        let m =
            CuMatrix::<Q>::from_ints(&[vec![vec![0, 1], vec![]], vec![vec![1], vec![0, 0, 0, 1]]])
                .unwrap();
        assert_eq!(local_smith_exponents(&m).unwrap(), vec![0, 4]);
        assert_eq!(local_smith_exponents_determinantal(&m).unwrap(), vec![0, 4]);
    }

    #[test]
    fn divisors() {
        let l = Lattice::square();
        let d = Divisor::torsion(&l, 3);
        assert_eq!(divisor_degree(&d), 9);
        assert!(l.contains(divisor_sum(&d).unwrap().z, 1e-9));
        let origin = CurvePoint::new(l, Complex64::new(0.0, 0.0));
        let d = Divisor::new(vec![(origin, 1)]);
        assert_eq!(divisor_degree(&d), 1);
        let h = l.omega1 / 2.0;
        let d = Divisor::new(vec![
            (CurvePoint::new(l, h), 1),
            (CurvePoint::new(l, -h), -1),
        ]);
        assert_eq!(divisor_degree(&d), 0);
        assert!(l.contains(divisor_sum(&d).unwrap().z, 1e-9));
    }

    #[test]
    fn decomposition() {
        let l = Lattice::square();
        for n in 1..=3 {
            let s = assemble_sheaf_decomposition(n, &l).unwrap();
            assert_eq!(s.local_exponents.len() as u32, n * n);
            assert!(s.local_exponents.iter().all(|e| e.exponents == vec![0, 1]));
            assert_eq!(s.degree.unsigned_abs(), (n * n) as u64);
            assert!(s.abel_sum_vanishes);
        }
    }
}
