//! Equivariant characteristic and Euler classes of split bundles over a fixed
//! component.
//!
//! A bundle is a list of line summands `L(m_j)` with nilpotent Chern roots
//! `w_j`; the equivariant Chern roots are `x_j = w_j + m_j u`.

use num_complex::Complex64;

use crate::elliptic::{JacobiSine, TORSION_TOL};
use crate::error::{Error, Result};
use crate::series::{
    algebra_evaluate_series, AlgebraElement, NilpotentAlgebra, Parity, TruncatedSeries, EXACT_TOL,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Numeric Euler-class scalars below this count as zero.
pub const VANISHING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BundleSummand {
    pub rotation_number: i64,
    pub chern_root: AlgebraElement<Complex64>,
    /// whether this summand carries a chosen complex structure
    pub complex: bool,
}

#[derive(Debug, Clone)]
pub struct EquivariantBundle {
    algebra: NilpotentAlgebra,
    summands: Vec<BundleSummand>,
    /// relative to the product of the summands' complex orientations
    orientation_sign: i8,
}

/// Which convention `mu_q` follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    /// unital `Q`, product over the complex Chern roots
    Complex,
    /// even or odd `Q`, twisted by the orientation when odd
    Real,
}

impl BundleSummand {
    /// Summand with vanishing Chern root, as over an isolated fixed point.
    pub fn trivial(algebra: &NilpotentAlgebra, rotation_number: i64) -> Self {
        BundleSummand {
            rotation_number,
            chern_root: algebra.zero_element(ZERO),
            complex: true,
        }
    }
}

impl EquivariantBundle {
    pub fn new(
        algebra: NilpotentAlgebra,
        summands: Vec<BundleSummand>,
        orientation_sign: i8,
    ) -> Result<Self> {
        if orientation_sign != 1 && orientation_sign != -1 {
            return Err(Error::invalid("orientation sign must be +1 or -1"));
        }
        for (j, s) in summands.iter().enumerate() {
            let w = &s.chern_root.coeffs;
            if w.len() != algebra.basis_size() {
                return Err(Error::invalid(format!(
                    "Chern root {j} has the wrong length"
                )));
            }
            for (c, d) in w.iter().zip(algebra.degrees()) {
                if c.norm() > EXACT_TOL && *d != 2 {
                    return Err(Error::invalid(format!(
                        "Chern root {j} has a component outside degree 2"
                    )));
                }
            }
        }
        Ok(EquivariantBundle {
            algebra,
            summands,
            orientation_sign,
        })
    }

    /// Bundle over a point with the given rotation numbers.
    pub fn over_point(rotation_numbers: &[i64], orientation_sign: i8) -> Result<Self> {
        let alg = NilpotentAlgebra::point();
        let summands = rotation_numbers
            .iter()
            .map(|&m| BundleSummand::trivial(&alg, m))
            .collect();
        Self::new(alg, summands, orientation_sign)
    }

    pub fn algebra(&self) -> &NilpotentAlgebra {
        &self.algebra
    }

    pub fn summands(&self) -> &[BundleSummand] {
        &self.summands
    }

    pub fn orientation_sign(&self) -> i8 {
        self.orientation_sign
    }

    pub fn real_rank(&self) -> usize {
        2 * self.summands.len()
    }

    pub fn rotation_numbers(&self) -> Vec<i64> {
        self.summands.iter().map(|s| s.rotation_number).collect()
    }

    /// Whitney sum over the same base.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.algebra.degrees() != other.algebra.degrees()
            || self.algebra.mult_table() != other.algebra.mult_table()
        {
            return Err(Error::invalid("summands live over different bases"));
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        Self::new(
            self.algebra.clone(),
            summands,
            self.orientation_sign * other.orientation_sign,
        )
    }

    /// Replaces summand `j` by its conjugate `L(-m_j)` with root `-w_j`. As a
    /// real oriented bundle this is the same bundle with reversed orientation.
    pub fn flip_summand(&self, j: usize) -> Result<Self> {
        let mut out = self.clone();
        let s = out
            .summands
            .get_mut(j)
            .ok_or_else(|| Error::invalid(format!("no summand {j}")))?;
        s.rotation_number = -s.rotation_number;
        s.chern_root = s.chern_root.scale(-ONE);
        Ok(out)
    }

    /// Reverses the orientation without touching the summands.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.orientation_sign = -out.orientation_sign;
        out
    }

    fn product(
        &self,
        factors: impl Iterator<Item = Result<AlgebraElement<TruncatedSeries>>>,
        order: i32,
    ) -> Result<AlgebraElement<TruncatedSeries>> {
        let mut acc = self.algebra.scalar(TruncatedSeries::one(order));
        for f in factors {
            acc = self.algebra.mul(&acc, &f?);
        }
        Ok(acc)
    }
}

fn u_times(m: i64, order: i32) -> TruncatedSeries {
    TruncatedSeries::monomial(Complex64::new(m as f64, 0.0), 1, order)
}

/// `Π_j Q(w_j + m_j u)` expanded finitely in the nilpotents, truncated in `u`.
///
/// For [`ClassKind::Real`] the product is multiplied by the orientation sign
/// when `Q` is odd.
pub fn mu_q(
    bundle: &EquivariantBundle,
    q: &TruncatedSeries,
    kind: ClassKind,
) -> Result<AlgebraElement<TruncatedSeries>> {
    let order = q.order();
    let twist = match kind {
        ClassKind::Complex => {
            if q.valuation().is_some_and(|v| v < 0) || (q.coeff(0) - ONE).norm() > EXACT_TOL {
                return Err(Error::NotUnital(format!("{}", q.coeff(0))));
            }
            1.0
        }
        ClassKind::Real => match q.even_odd_split_tol(EXACT_TOL).parity {
            Parity::Even => 1.0,
            Parity::Odd => bundle.orientation_sign as f64,
            Parity::Neither => return Err(Error::ParityRequired),
        },
    };
    let alg = &bundle.algebra;
    let value = bundle.product(
        bundle.summands.iter().map(|s| {
            algebra_evaluate_series(alg, q, &s.chern_root, &u_times(s.rotation_number, order))
        }),
        order,
    )?;
    Ok(value.scale(Complex64::new(twist, 0.0)))
}

/// Whether `z` lies in `Λ`, where the Jacobi sine vanishes.
fn is_zero_of_sine(sine: &JacobiSine, z: Complex64) -> bool {
    sine.lattice().contains(z, TORSION_TOL)
}

/// `sign · Π_j s(w_j + m_j u + m_j β)` with `u`-series coefficients through
/// `u^order`.
pub fn elliptic_euler_class(
    bundle: &EquivariantBundle,
    sine: &JacobiSine,
    shift: Complex64,
    order: i32,
) -> Result<AlgebraElement<TruncatedSeries>> {
    let alg = &bundle.algebra;
    // nilpotents of degree 2k need k Taylor terms; pad so derivatives keep `order`
    let pad = alg.top_degree() as i32 / 2 + 1;
    let value = bundle.product(
        bundle.summands.iter().map(|s| {
            let m = s.rotation_number;
            let local = sine.expand_at(shift * m as f64, order + pad)?;
            algebra_evaluate_series(alg, &local, &s.chern_root, &u_times(m, order + pad))
        }),
        order + pad,
    )?;
    let value = value.map(|c| c.truncate(order));
    Ok(value.scale(Complex64::new(bundle.orientation_sign as f64, 0.0)))
}

/// Indices `j` with `s(m_j β) = 0` although `β ∉ Λ`: there the Euler class
/// restricted to `u = 0` is a zero divisor and cannot be inverted.
pub fn vanishing_factors(
    bundle: &EquivariantBundle,
    sine: &JacobiSine,
    shift: Complex64,
) -> Vec<usize> {
    if is_zero_of_sine(sine, shift) {
        return Vec::new();
    }
    bundle
        .summands
        .iter()
        .enumerate()
        .filter(|(_, s)| is_zero_of_sine(sine, shift * s.rotation_number as f64))
        .map(|(j, _)| j)
        .collect()
}

/// Inverse of [`elliptic_euler_class`] as a Laurent series in `u`, known
/// through `u^order`.
///
/// With `β ∈ Λ` every factor vanishes at `u = 0` and the inverse is a genuine
/// Laurent series. For `β ∉ Λ` a factor with `m_j β ∈ Λ` makes the class
/// non-invertible.
pub fn inverse_elliptic_euler_class(
    bundle: &EquivariantBundle,
    sine: &JacobiSine,
    shift: Complex64,
    order: i32,
) -> Result<AlgebraElement<TruncatedSeries>> {
    let bad = vanishing_factors(bundle, sine, shift);
    if !bad.is_empty() {
        return Err(Error::EulerNotInvertible(format!(
            "s(m_j β) = 0 for summands {bad:?}"
        )));
    }
    let r = bundle.summands.len() as i32;
    // inverting a series of valuation v loses 2v orders
    let e = elliptic_euler_class(bundle, sine, shift, order + 2 * r)?;
    let inv = bundle.algebra.inverse(&e)?;
    Ok(inv.map(|c| c.truncate(order)))
}

/// `s(p + w)` for a scalar `p` and nilpotent `w`, via the Taylor expansion of
/// `s` at `p`.
pub fn sine_of_element(
    algebra: &NilpotentAlgebra,
    sine: &JacobiSine,
    w: &AlgebraElement<Complex64>,
    p: Complex64,
) -> Result<AlgebraElement<Complex64>> {
    let value = sine.eval(p)?;
    if w.is_zero() {
        return Ok(algebra.scalar(value));
    }
    let depth = algebra.top_degree() as i32 / 2;
    let local = sine.expand_at(p, depth)?;
    let taylor: Vec<Complex64> = (0..=depth).map(|k| local.coeff(k)).collect();
    algebra.apply_taylor(&taylor, w)
}

/// `sign · Π_j s(w_j + m_j (u + β))` at a numeric `u`.
pub fn elliptic_euler_class_at(
    bundle: &EquivariantBundle,
    sine: &JacobiSine,
    shift: Complex64,
    u: Complex64,
) -> Result<AlgebraElement<Complex64>> {
    let alg = &bundle.algebra;
    let mut acc = alg.scalar(Complex64::new(bundle.orientation_sign as f64, 0.0));
    for s in &bundle.summands {
        let p = (u + shift) * s.rotation_number as f64;
        acc = alg.mul(&acc, &sine_of_element(alg, sine, &s.chern_root, p)?);
    }
    Ok(acc)
}

/// Inverse of [`elliptic_euler_class_at`]; fails when the scalar part is
/// numerically zero.
pub fn inverse_elliptic_euler_class_at(
    bundle: &EquivariantBundle,
    sine: &JacobiSine,
    shift: Complex64,
    u: Complex64,
) -> Result<AlgebraElement<Complex64>> {
    let e = elliptic_euler_class_at(bundle, sine, shift, u)?;
    if e.coeffs[0].norm() < VANISHING_TOL {
        return Err(Error::EulerNotInvertible(format!(
            "scalar part {} at u = {u}",
            e.coeffs[0]
        )));
    }
    bundle.algebra.inverse(&e)
}

/// `sign · Π_j (w_j + m_j u)` through `u^order`.
pub fn ordinary_euler_class(
    bundle: &EquivariantBundle,
    order: i32,
) -> Result<AlgebraElement<TruncatedSeries>> {
    let value = bundle.product(
        bundle.summands.iter().map(|s| {
            let mut x = s.chern_root.map(|c| TruncatedSeries::constant(*c, order));
            x.coeffs[0] = u_times(s.rotation_number, order);
            Ok(x)
        }),
        order,
    )?;
    Ok(value.scale(Complex64::new(bundle.orientation_sign as f64, 0.0)))
}

/// Inverse of [`ordinary_euler_class`]; a summand with `m_j = 0` makes it fail.
pub fn inverse_ordinary_euler_class(
    bundle: &EquivariantBundle,
    order: i32,
) -> Result<AlgebraElement<TruncatedSeries>> {
    if let Some(j) = bundle.summands.iter().position(|s| s.rotation_number == 0) {
        return Err(Error::EulerNotInvertible(format!(
            "summand {j} has rotation number 0"
        )));
    }
    let r = bundle.summands.len() as i32;
    let e = ordinary_euler_class(bundle, order + 2 * r)?;
    Ok(bundle.algebra.inverse(&e)?.map(|c| c.truncate(order)))
}
