use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::weierstrass::Weierstrass;
use super::Lattice;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::series::{TruncatedSeries, NUMERIC_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Distance below which an argument counts as a pole.
pub const POLE_TOL: f64 = 1e-10;

/// The odd `Λ̃`-elliptic function with simple zeros at `0, ω₂`, simple poles at
/// `ω₁/2, ω₁/2 + ω₂` and `s'(0) = 1`.
///
/// Realized as `C σ(z) σ(z - ω₂) / (σ(z - ω₁/2) σ(z + ω₁/2 - ω₂))` with `σ`
/// the Weierstrass sigma function of `Λ̃`; zero and pole representatives
/// have equal sums, so the quotient is genuinely periodic.
#[derive(Debug, Clone)]
pub struct JacobiSine {
    lattice: Lattice,
    sigma: Weierstrass,
    zeros: [Complex64; 2],
    poles: [Complex64; 2],
    log_c: Complex64,
    a: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub point: Complex64,
    pub multiplicity: i32,
}

/// Zeros and poles in the `Λ̃` fundamental domain found by contour integrals.
#[derive(Debug, Clone, Serialize)]
pub struct DivisorCensus {
    pub zeros: Vec<CensusEntry>,
    pub poles: Vec<CensusEntry>,
    /// worst distance of a winding number from the nearest integer
    pub max_residual: f64,
}

impl JacobiSine {
    pub fn new(lattice: Lattice) -> Self {
        let (w1, w2) = (lattice.omega1, lattice.omega2);
        let sigma = Weierstrass::new(w1, w2 * 2.0);
        let h = w1 / 2.0;
        let zeros = [ZERO, w2];
        let poles = [h, w2 - h];
        let log_c = sigma.log_sigma(-h) + sigma.log_sigma(h - w2) - sigma.log_sigma(-w2);
        let mut s = JacobiSine {
            lattice,
            sigma,
            zeros,
            poles,
            log_c,
            a: ZERO,
        };
        s.a = s
            .expand_at(h, 0)
            .map(|e| e.coeff(-1))
            .expect("expansion at a simple pole");
        s
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Normalization constant `C`.
    pub fn normalization(&self) -> Complex64 {
        self.log_c.exp()
    }

    /// Quasi-periods `(η(ω₁), η(2ω₂))` of the sigma function of `Λ̃`.
    pub fn quasi_periods(&self) -> (Complex64, Complex64) {
        let z = Complex64::new(0.1234, 0.0567) * self.lattice.omega1.norm();
        let z1 = self.sigma.zeta(z + self.lattice.omega1) - self.sigma.zeta(z);
        let z2 = self.sigma.zeta(z + self.lattice.omega2 * 2.0) - self.sigma.zeta(z);
        (z1, z2)
    }

    /// The constant `a` with `s(z + ω₁/2) s(z) = a`; it is the residue of `s`
    /// at `ω₁/2`.
    pub fn half_period_constant(&self) -> Complex64 {
        self.a
    }

    /// Distance from `z` to the nearest point of `p + Λ̃`.
    fn distance(&self, z: Complex64, p: Complex64) -> f64 {
        self.sigma.reduce(z - p).z0.norm()
    }

    /// Pole representatives `ω₁/2` and `ω₁/2 + ω₂` reduced to `[0,1)×[0,2)`.
    pub fn poles(&self) -> [Complex64; 2] {
        self.poles.map(|p| self.lattice.reduce_doubled(p))
    }

    pub fn zeros(&self) -> [Complex64; 2] {
        self.zeros.map(|p| self.lattice.reduce_doubled(p))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !z.is_finite() {
            return Err(Error::invalid(format!("non-finite argument {z}")));
        }
        let z0 = self.sigma.reduce(z).z0;
        for p in self.poles {
            if self.distance(z0, p) < POLE_TOL {
                return Err(Error::Pole(format!("{z}")));
            }
        }
        for a in self.zeros {
            if self.distance(z0, a) == 0.0 {
                return Ok(ZERO);
            }
        }
        let mut log = self.log_c;
        for a in self.zeros {
            log += self.sigma.log_sigma(z0 - a);
        }
        for p in self.poles {
            log -= self.sigma.log_sigma(z0 - p);
        }
        Ok(log.exp())
    }

    /// `s'(z)/s(z)`.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        let w = &self.sigma;
        self.zeros.iter().map(|a| w.zeta(z - a)).sum::<Complex64>()
            - self.poles.iter().map(|p| w.zeta(z - p)).sum::<Complex64>()
    }

    /// Laurent expansion of `t -> s(p + t)` through `t^order`.
    pub fn expand_at(&self, p: Complex64, order: i32) -> Result<TruncatedSeries> {
        let p0 = self.sigma.reduce(p).z0;
        let germ_order = order + 3;
        let mut log_a = self.log_c;
        let mut valuation = 0;
        let mut b = TruncatedSeries::zero(germ_order);
        let factors = self
            .zeros
            .iter()
            .map(|a| (a, 1.0))
            .chain(self.poles.iter().map(|q| (q, -1.0)));
        for (point, sign) in factors {
            let g = self.sigma.germ(p0 - point, germ_order, POLE_TOL);
            log_a += g.log_a * sign;
            valuation += g.valuation * sign as i32;
            b = b.add(&g.b.scale(Complex64::new(sign, 0.0)));
        }
        if order < valuation {
            return Ok(TruncatedSeries::zero(order).truncate(order));
        }
        let e = b.truncate(order - valuation).exp()?;
        Ok(e.scale(log_a.exp()).shift(valuation))
    }

    /// Taylor series `z + a₃z³ + a₅z⁵ + ...` at the origin through `z^order`.
    ///
    /// The even coefficients are checked to be negligible and then set to 0.
    pub fn taylor(&self, order: i32) -> Result<TruncatedSeries> {
        if order < 1 {
            return Err(Error::invalid("Taylor order must be at least 1"));
        }
        let raw = self.expand_at(ZERO, order)?;
        let mut coeffs = vec![ZERO; order as usize + 1];
        let scale = raw.max_abs().max(1.0);
        for (e, c) in raw.terms() {
            if e < 0 {
                continue;
            }
            if e % 2 == 0 {
                if c.norm() > NUMERIC_TOL * scale {
                    return Err(Error::invalid(format!(
                        "even Taylor coefficient at z^{e} is {c}"
                    )));
                }
            } else {
                coeffs[e as usize] = c;
            }
        }
        if (coeffs[1] - ONE).norm() > NUMERIC_TOL {
            return Err(Error::invalid(format!("s'(0) = {}", coeffs[1])));
        }
        coeffs[1] = ONE;
        Ok(TruncatedSeries::from_coeffs(0, coeffs))
    }

    /// Counts zeros and poles in the `Λ̃` domain by the argument principle.
    ///
    /// The domain `[-δ, 1-δ) × [-δ, 2-δ)` (coordinates in `ω₁, ω₂`) is cut
    /// into cells of side `1/4`; with `δ = 0.1234` every half- and full-period
    /// point sits well inside a cell.
    pub fn divisor_census(&self, exec: Execution) -> DivisorCensus {
        const DELTA: f64 = 0.1234;
        const SIDE: f64 = 0.25;
        let (nodes, weights) = gauss_legendre(16);
        let l = self.lattice;
        let cells: Vec<(usize, usize)> = (0..4).flat_map(|i| (0..8).map(move |j| (i, j))).collect();
        let results = par::map(exec, &cells, |&(i, j)| {
            let x0 = -DELTA + SIDE * i as f64;
            let y0 = -DELTA + SIDE * j as f64;
            let corners = [
                l.from_coords(x0, y0),
                l.from_coords(x0 + SIDE, y0),
                l.from_coords(x0 + SIDE, y0 + SIDE),
                l.from_coords(x0, y0 + SIDE),
            ];
            let mut n0 = ZERO;
            let mut n1 = ZERO;
            for k in 0..4 {
                let (a, b) = (corners[k], corners[(k + 1) % 4]);
                const PANELS: usize = 3;
                for panel in 0..PANELS {
                    let pa = a + (b - a) * (panel as f64 / PANELS as f64);
                    let pb = a + (b - a) * ((panel + 1) as f64 / PANELS as f64);
                    let half = (pb - pa) / 2.0;
                    let mid = (pa + pb) / 2.0;
                    for (x, w) in nodes.iter().zip(&weights) {
                        let z = mid + half * *x;
                        let f = self.log_derivative(z) * half * *w;
                        n0 += f;
                        n1 += f * z;
                    }
                }
            }
            let scale = Complex64::new(0.0, 2.0 * PI).inv();
            (n0 * scale, n1 * scale)
        });
        let mut census = DivisorCensus {
            zeros: Vec::new(),
            poles: Vec::new(),
            max_residual: 0.0,
        };
        for (count, moment) in results {
            let k = count.re.round();
            census.max_residual = census.max_residual.max((count - k).norm());
            if k == 0.0 {
                continue;
            }
            let entry = CensusEntry {
                point: l.reduce_doubled(moment / k),
                multiplicity: k.abs() as i32,
            };
            if k > 0.0 {
                census.zeros.push(entry);
            } else {
                census.poles.push(entry);
            }
        }
        census
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}
