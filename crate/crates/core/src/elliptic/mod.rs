//! Period lattices, torsion points and the Jacobi sine.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub mod contract;
mod sine;
pub mod weierstrass;

pub use contract::{check_contract, ContractReport};
pub use sine::{CensusEntry, DivisorCensus, JacobiSine};
pub use weierstrass::Weierstrass;

/// Coordinate tolerance for torsion detection.
pub const TORSION_TOL: f64 = 1e-9;

/// `Λ = Z ω₁ + Z ω₂`. The Jacobi sine is elliptic for `Λ̃ = Z ω₁ + 2Z ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
}

impl Lattice {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        if !omega1.is_finite() || !omega2.is_finite() || omega1.norm() == 0.0 {
            return Err(Error::invalid("periods must be finite and nonzero"));
        }
        if (omega2 / omega1).im.abs() <= 1e-12 {
            return Err(Error::invalid("periods are linearly dependent over R"));
        }
        Ok(Lattice { omega1, omega2 })
    }

    /// The square lattice `Z + Z i`.
    pub fn square() -> Self {
        Lattice {
            omega1: Complex64::new(1.0, 0.0),
            omega2: Complex64::new(0.0, 1.0),
        }
    }

    /// Real coordinates `(x, y)` with `z = x ω₁ + y ω₂`.
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        let (a, b) = (self.omega1, self.omega2);
        let x = (z * b.conj()).im / (a * b.conj()).im;
        let y = (z * a.conj()).im / (b * a.conj()).im;
        (x, y)
    }

    pub fn from_coords(&self, x: f64, y: f64) -> Complex64 {
        self.omega1 * x + self.omega2 * y
    }

    /// `z` reduced to `[0,1) × [0,2)` in the `(ω₁, ω₂)` basis.
    pub fn reduce_doubled(&self, z: Complex64) -> Complex64 {
        let (x, y) = self.coords(z);
        self.from_coords(wrap(x, 1.0), wrap(y, 2.0))
    }

    /// `z` reduced to `[0,1) × [0,1)`.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        let (x, y) = self.coords(z);
        self.from_coords(wrap(x, 1.0), wrap(y, 1.0))
    }

    /// Whether `z` lies in `Λ`, judged on coordinates.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let (x, y) = self.coords(z);
        (x - x.round()).abs() < tol && (y - y.round()).abs() < tol
    }

    /// All points `(a ω₁ + b ω₂)/n`, `0 <= a, b < n`, i.e. the `n²` points of
    /// order dividing `n`.
    pub fn torsion_points(&self, n: u32) -> Vec<CurvePoint> {
        let mut out = Vec::with_capacity((n * n) as usize);
        for a in 0..n {
            for b in 0..n {
                let z = self.from_coords(a as f64 / n as f64, b as f64 / n as f64);
                let mut p = CurvePoint::new(*self, z);
                p.exact_order = exact_order(&p, n);
                out.push(p);
            }
        }
        out
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if period - r < 1e-12 || r < 1e-12 {
        0.0
    } else {
        r
    }
}

/// A point of `C/Λ̃` with its representative in `[0,1) × [0,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub z: Complex64,
    #[serde(skip)]
    pub lattice: Lattice,
    pub exact_order: Option<u32>,
}

impl CurvePoint {
    pub fn new(lattice: Lattice, z: Complex64) -> Self {
        CurvePoint {
            z: lattice.reduce_doubled(z),
            lattice,
            exact_order: None,
        }
    }

    /// Point given by coordinates in the `(ω₁, ω₂)` basis.
    pub fn from_coords(lattice: Lattice, x: f64, y: f64) -> Self {
        Self::new(lattice, lattice.from_coords(x, y))
    }

    /// Looks up and caches the exact order.
    pub fn with_order(mut self, n_max: u32) -> Self {
        self.exact_order = exact_order(&self, n_max);
        self
    }

    pub fn coords(&self) -> (f64, f64) {
        self.lattice.coords(self.z)
    }
}

/// Smallest `n <= n_max` with `n z ∈ Λ`.
pub fn exact_order(p: &CurvePoint, n_max: u32) -> Option<u32> {
    let (x, y) = p.coords();
    (1..=n_max).find(|&n| {
        let n = n as f64;
        (x - (n * x).round() / n).abs() < TORSION_TOL
            && (y - (n * y).round() / n).abs() < TORSION_TOL
    })
}

/// `ε = ±1` with `s(x + nα) = ε s(x)`, returned with the exact order `n`.
pub fn epsilon_sign(p: &CurvePoint, n_max: u32) -> Result<(u32, i8)> {
    let n = match p.exact_order {
        Some(n) => n,
        None => exact_order(p, n_max).ok_or(Error::NotTorsion(n_max))?,
    };
    let (_, y) = p.coords();
    let b = (n as f64 * y).round() as i64;
    Ok((n, if b.rem_euclid(2) == 0 { 1 } else { -1 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orders() {
        let l = Lattice::square();
        let half = CurvePoint::new(l, l.omega1 / 2.0);
        assert_eq!(exact_order(&half, 10), Some(2));
        let third = CurvePoint::new(l, (l.omega1 + l.omega2) / 3.0);
        assert_eq!(exact_order(&third, 10), Some(3));
        let irr = CurvePoint::new(l, l.omega1 * (1.0 / std::f64::consts::PI));
        assert_eq!(exact_order(&irr, 50), None);
        assert_eq!(exact_order(&CurvePoint::new(l, c(0.0, 0.0)), 5), Some(1));
    }

    #[test]
    fn epsilon_examples() {
        let l = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let e = |z: Complex64| epsilon_sign(&CurvePoint::new(l, z), 20).unwrap();
        assert_eq!(e(l.omega2 / 2.0), (2, -1));
        assert_eq!(e(l.omega1 / 3.0), (3, 1));
        assert_eq!(e((l.omega1 + l.omega2) / 2.0), (2, -1));
        assert!(matches!(
            epsilon_sign(&CurvePoint::new(l, c(0.123_456_7, 0.0)), 8),
            Err(Error::NotTorsion(8))
        ));
    }

    #[test]
    fn reduction_domain() {
        let l = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let p = CurvePoint::new(l, c(-3.7, -5.0));
        let (x, y) = p.coords();
        assert!((0.0..1.0).contains(&x) && (0.0..2.0).contains(&y));
        assert!(l.contains(p.z - c(-3.7, -5.0), 1e-9));
        assert!(Lattice::new(c(1.0, 0.0), c(2.0, 0.0)).is_err());
    }

    #[test]
    fn torsion_point_count() {
        let l = Lattice::square();
        let pts = l.torsion_points(3);
        assert_eq!(pts.len(), 9);
        assert_eq!(pts.iter().filter(|p| p.exact_order == Some(3)).count(), 8);
    }
}
