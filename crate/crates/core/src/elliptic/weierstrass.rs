//! Weierstrass functions of a general period lattice.
//!
//! The lattice is Gauss-reduced and rescaled to `Z + Zτ` with `τ` in the
//! standard fundamental domain, so `|q| = |exp(2πiτ)| <= exp(-π√3)`. Arguments
//! are reduced to the centred period cell and the quasi-periodicity factors
//! reapplied, which keeps every Fourier/product expansion well inside its
//! strip of convergence.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::series::TruncatedSeries;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Number of `q`-expansion terms kept; with `|q| <= 4.4e-3` and arguments in the
/// centred cell the dropped tail is below `1e-30`.
const Q_TERMS: usize = 40;
/// Number of Laurent coefficients of `℘` kept for expansions at lattice points.
const LAURENT_TERMS: usize = 40;

/// Reduced representative of a point: `z = z0 + w`, `w = m p1 + n p2`.
#[derive(Debug, Clone, Copy)]
pub struct Reduced {
    pub z0: Complex64,
    pub m: i64,
    pub n: i64,
}

/// Local data of `σ` at a point, `σ(z + t) = exp(log_a) t^valuation exp(b(t))`
/// with `b(0) = 0`.
#[derive(Debug, Clone)]
pub struct SigmaGerm {
    pub log_a: Complex64,
    pub valuation: i32,
    pub b: TruncatedSeries,
}

#[derive(Debug, Clone)]
pub struct Weierstrass {
    /// scale: the lattice is `p1 (Z + Z τ)`
    p1: Complex64,
    tau: Complex64,
    /// `q^k / (1 - q^k)`, k = 1..
    lambert: Vec<Complex64>,
    /// `q^k`, k = 1..
    q_pow: Vec<Complex64>,
    /// quasi-periods of the normalized lattice for the periods 1 and τ
    eta1: Complex64,
    eta2: Complex64,
    g2: Complex64,
    g3: Complex64,
    /// `℘(z) = z^-2 + sum_{k>=2} c_k z^{2k-2}` (normalized lattice); index k
    laurent: Vec<Complex64>,
}

/// Gauss-reduces a lattice basis and orients it so `Im(b/a) > 0`.
pub fn reduce_basis(mut a: Complex64, mut b: Complex64) -> (Complex64, Complex64) {
    for _ in 0..200 {
        if b.norm_sqr() < a.norm_sqr() {
            std::mem::swap(&mut a, &mut b);
        }
        let m = (b / a).re.round();
        if m == 0.0 {
            break;
        }
        b -= a * m;
    }
    if (b / a).im < 0.0 {
        b = -b;
    }
    (a, b)
}

impl Weierstrass {
    pub fn new(period_a: Complex64, period_b: Complex64) -> Self {
        let (p1, p2) = reduce_basis(period_a, period_b);
        let tau = p2 / p1;
        let q = (2.0 * PI * I * tau).exp();
        let mut q_pow = Vec::with_capacity(Q_TERMS);
        let mut lambert = Vec::with_capacity(Q_TERMS);
        let mut qk = ONE;
        for _ in 0..Q_TERMS {
            qk *= q;
            q_pow.push(qk);
            lambert.push(qk / (ONE - qk));
        }
        let sum_k = |power: i32| -> Complex64 {
            lambert
                .iter()
                .enumerate()
                .map(|(i, l)| l * ((i + 1) as f64).powi(power))
                .sum()
        };
        let e2 = ONE - 24.0 * sum_k(1);
        let e4 = ONE + 240.0 * sum_k(3);
        let e6 = ONE - 504.0 * sum_k(5);
        let pi2 = PI * PI;
        let eta1 = e2 * (pi2 / 3.0);
        // Legendre: eta1 * tau - eta2 * 1 = 2πi
        let eta2 = eta1 * tau - 2.0 * PI * I;
        let g2 = e4 * (4.0 * pi2 * pi2 / 3.0);
        let g3 = e6 * (8.0 * pi2 * pi2 * pi2 / 27.0);

        let mut laurent = vec![ZERO; LAURENT_TERMS + 1];
        laurent[2] = g2 / 20.0;
        laurent[3] = g3 / 28.0;
        for k in 4..=LAURENT_TERMS {
            let s: Complex64 = (2..=k - 2).map(|m| laurent[m] * laurent[k - m]).sum();
            laurent[k] = s * (3.0 / (((2 * k + 1) * (k - 3)) as f64));
        }
        Weierstrass {
            p1,
            tau,
            lambert,
            q_pow,
            eta1,
            eta2,
            g2,
            g3,
            laurent,
        }
    }

    /// Reduced basis `(p1, p2)` of the lattice.
    pub fn basis(&self) -> (Complex64, Complex64) {
        (self.p1, self.p1 * self.tau)
    }

    /// Invariants `(g2, g3)` of the actual (unnormalized) lattice.
    pub fn invariants(&self) -> (Complex64, Complex64) {
        (self.g2 / self.p1.powi(4), self.g3 / self.p1.powi(6))
    }

    /// Laurent coefficients `c_k` of `℘` for the actual lattice, index `k >= 2`.
    pub fn laurent_coefficients(&self) -> Vec<Complex64> {
        self.laurent
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k < 2 {
                    ZERO
                } else {
                    c / self.p1.powi(2 * k as i32)
                }
            })
            .collect()
    }

    /// Quasi-period `η(w)` with `ζ(z + w) = ζ(z) + η(w)` for `w = m p1 + n p2`.
    pub fn eta(&self, m: i64, n: i64) -> Complex64 {
        (self.eta1 * m as f64 + self.eta2 * n as f64) / self.p1
    }

    /// Writes `z = z0 + m p1 + n p2` with `z0` in the centred cell.
    pub fn reduce(&self, z: Complex64) -> Reduced {
        let x = z / self.p1;
        let n = (x.im / self.tau.im).round();
        let rest = x - self.tau * n;
        let m = rest.re.round();
        Reduced {
            z0: (rest - m) * self.p1,
            m: m as i64,
            n: n as i64,
        }
    }

    /// `z0 / p1` for a reduced argument.
    fn norm(&self, z0: Complex64) -> Complex64 {
        z0 / self.p1
    }

    /// `ln σ(z)` (any branch). `z` must not be a lattice point.
    pub fn log_sigma(&self, z: Complex64) -> Complex64 {
        let r = self.reduce(z);
        let x = self.norm(r.z0);
        let cos2 = (2.0 * PI * x).cos();
        let mut acc = (PI * x).sin().ln() - PI.ln() + self.eta1 * x * x / 2.0;
        for qk in &self.q_pow {
            let num = ONE - 2.0 * qk * cos2 + qk * qk;
            acc += num.ln() - 2.0 * (ONE - qk).ln();
        }
        acc + self.p1.ln() + self.quasi_log_factor(&r)
    }

    /// `ln` of the factor relating `σ(z0 + w)` to `σ(z0)`.
    fn quasi_log_factor(&self, r: &Reduced) -> Complex64 {
        let w = self.p1 * (Complex64::new(r.m as f64, 0.0) + self.tau * r.n as f64);
        let parity = (r.m + r.n + r.m * r.n).rem_euclid(2);
        self.eta(r.m, r.n) * (r.z0 + w / 2.0) + I * PI * parity as f64
    }

    pub fn sigma(&self, z: Complex64) -> Complex64 {
        let r = self.reduce(z);
        if r.z0 == ZERO {
            return ZERO;
        }
        self.log_sigma(z).exp()
    }

    /// `ζ(z) = σ'(z)/σ(z)`.
    pub fn zeta(&self, z: Complex64) -> Complex64 {
        let r = self.reduce(z);
        let x = self.norm(r.z0);
        let mut acc = self.eta1 * x + PI * (PI * x).cos() / (PI * x).sin();
        for (k, lk) in self.lambert.iter().enumerate() {
            let k = (k + 1) as f64;
            acc += 4.0 * PI * lk * (2.0 * PI * k * x).sin();
        }
        acc / self.p1 + self.eta(r.m, r.n)
    }

    /// `℘(z)` and `℘'(z)`.
    pub fn wp_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let r = self.reduce(z);
        let x = self.norm(r.z0);
        let s = (PI * x).sin();
        let csc2 = (s * s).inv();
        let cot = (PI * x).cos() / s;
        let mut wp = -self.eta1 + PI * PI * csc2;
        let mut dwp = -2.0 * PI.powi(3) * csc2 * cot;
        for (k, lk) in self.lambert.iter().enumerate() {
            let k = (k + 1) as f64;
            wp -= 8.0 * PI * PI * k * lk * (2.0 * PI * k * x).cos();
            dwp += 16.0 * PI.powi(3) * k * k * lk * (2.0 * PI * k * x).sin();
        }
        (wp / (self.p1 * self.p1), dwp / self.p1.powi(3))
    }

    /// Germ of `σ` at `z`, with the exponential part known through `t^order`.
    ///
    /// Points within `zero_tol` (relative to the period scale) of the lattice
    /// are treated as lattice points.
    pub fn germ(&self, z: Complex64, order: i32, zero_tol: f64) -> SigmaGerm {
        let r = self.reduce(z);
        let eta = self.eta(r.m, r.n);
        let order = order.max(1);
        if r.z0.norm() <= zero_tol * self.p1.norm() {
            // σ(w + t) = ±exp(η(t + w/2)) σ(t),  σ(t) = t exp(-Σ c_k t^{2k}/((2k-1)2k))
            let w_half = self.p1 * (Complex64::new(r.m as f64, 0.0) + self.tau * r.n as f64) / 2.0;
            let parity = (r.m + r.n + r.m * r.n).rem_euclid(2);
            let log_a = eta * w_half + I * PI * parity as f64;
            let c = self.laurent_coefficients();
            let mut b = vec![ZERO; order as usize + 1];
            if order >= 1 {
                b[1] = eta;
            }
            for (k, ck) in c.iter().enumerate().take(LAURENT_TERMS + 1).skip(2) {
                let e = 2 * k;
                if e > order as usize {
                    break;
                }
                b[e] = -ck / ((2 * k - 1) * 2 * k) as f64;
            }
            return SigmaGerm {
                log_a,
                valuation: 1,
                b: TruncatedSeries::from_coeffs(0, b),
            };
        }
        // σ(z0 + t) = σ(z0) exp(ζ(z0) t - Σ_j ℘^(j)(z0)/j! t^{j+2}/((j+1)(j+2)))
        let log_a = self.log_sigma(z);
        let zeta0 = self.zeta(r.z0);
        let (wp0, dwp0) = self.wp_and_derivative(r.z0);
        let (g2, _) = self.invariants();
        let n = order as usize;
        let mut p = vec![ZERO; n.max(2)];
        p[0] = wp0;
        p[1] = dwp0;
        // ℘'' = 6℘² - g2/2 in Taylor coefficients
        for j in 0..n.saturating_sub(2) {
            let conv: Complex64 = (0..=j).map(|i| p[i] * p[j - i]).sum();
            let rhs = 6.0 * conv - if j == 0 { g2 / 2.0 } else { ZERO };
            p[j + 2] = rhs / ((j + 2) * (j + 1)) as f64;
        }
        let mut b = vec![ZERO; n + 1];
        b[1] = zeta0 + eta;
        for j in 0..n.saturating_sub(1) {
            b[j + 2] = -p[j] / ((j + 1) * (j + 2)) as f64;
        }
        SigmaGerm {
            log_a,
            valuation: 0,
            b: TruncatedSeries::from_coeffs(0, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Weierstrass {
        Weierstrass::new(ONE, I)
    }

    #[test]
    fn square_lattice_g3_vanishes() {
        let w = square();
        let (g2, g3) = w.invariants();
        assert!(g3.norm() < 1e-9, "g3 = {g3}");
        // lemniscatic value g2 = Γ(1/4)^8 / (16π²) for periods 1, i... up to the 2ω convention:
        // for periods (1, i) the known value is 189.07272...
        assert!((g2.re - 189.072_720_9).abs() < 1e-5, "g2 = {g2}");
    }

    #[test]
    fn zeta_is_log_derivative_of_sigma() {
        let w = Weierstrass::new(ONE, Complex64::new(0.3, 1.1));
        for z in [
            Complex64::new(0.21, 0.13),
            Complex64::new(-0.4, 0.7),
            Complex64::new(1.3, -0.2),
        ] {
            let h = 1e-5;
            let d = (w.log_sigma(z + h) - w.log_sigma(z - h)) / (2.0 * h);
            assert!((d - w.zeta(z)).norm() < 1e-7, "{z}: {d} vs {}", w.zeta(z));
        }
    }

    #[test]
    fn wp_is_minus_zeta_derivative() {
        let w = Weierstrass::new(ONE, Complex64::new(0.3, 1.1));
        for z in [Complex64::new(0.21, 0.13), Complex64::new(0.45, -0.5)] {
            let h = 1e-5;
            let d = (w.zeta(z + h) - w.zeta(z - h)) / (2.0 * h);
            let (wp, dwp) = w.wp_and_derivative(z);
            assert!((d + wp).norm() < 1e-6);
            let (wp_p, _) = w.wp_and_derivative(z + h);
            let (wp_m, _) = w.wp_and_derivative(z - h);
            assert!(((wp_p - wp_m) / (2.0 * h) - dwp).norm() < 1e-5);
            // differential equation ℘'² = 4℘³ - g2 ℘ - g3
            let (g2, g3) = w.invariants();
            let lhs = dwp * dwp;
            let rhs = 4.0 * wp * wp * wp - g2 * wp - g3;
            assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn sigma_quasi_periodicity() {
        let w = Weierstrass::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0));
        let z = Complex64::new(0.17, 0.31);
        let (p1, p2) = w.basis();
        for (m, n) in [(1i64, 0i64), (0, 1), (1, 1), (-2, 1)] {
            let per = p1 * m as f64 + p2 * n as f64;
            let sign = if (m + n + m * n).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            let lhs = w.sigma(z + per);
            let rhs = sign * (w.eta(m, n) * (z + per / 2.0)).exp() * w.sigma(z);
            assert!((lhs - rhs).norm() < 1e-10 * rhs.norm());
        }
    }

    #[test]
    fn sigma_matches_laurent_route_near_zero() {
        let w = Weierstrass::new(ONE, Complex64::new(0.3, 1.1));
        let germ = w.germ(ZERO, 30, 1e-12);
        let z = Complex64::new(0.12, -0.05);
        let series_val = (germ.log_a + germ.b.eval(z)).exp() * z;
        assert!((series_val - w.sigma(z)).norm() < 1e-13);
    }
}
