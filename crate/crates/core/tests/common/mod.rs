//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use ellgen::elliptic::Lattice;
use ellgen::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `θ₁(v | τ) = 2 Σ (-1)^n q^{(n+1/2)²} sin((2n+1)πv)`, `q = e^{iπτ}`.
pub fn theta1(v: Complex64, tau: Complex64) -> Complex64 {
    (0..60)
        .map(|n| {
            let k = n as f64 + 0.5;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            // q^{k²} sin(2kπv) with the exponents combined to avoid inf * 0
            let a = I * PI * tau * k * k;
            let b = I * 2.0 * k * PI * v;
            sign * ((a + b).exp() - (a - b).exp()) / I
        })
        .sum()
}

pub fn theta1_prime0(tau: Complex64) -> Complex64 {
    (0..60)
        .map(|n| {
            let k = n as f64 + 0.5;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            2.0 * sign * (I * PI * tau * k * k).exp() * (2.0 * k * PI)
        })
        .sum()
}

/// Jacobi sine as a theta quotient on the doubled lattice. The Gaussian
/// factors relating σ to θ₁ cancel because zero and pole sums agree.
pub fn sine_theta(l: &Lattice, z: Complex64) -> Complex64 {
    let w1 = l.omega1;
    let w2 = l.omega2;
    let mut tau = w2 * 2.0 / w1;
    if tau.im < 0.0 {
        tau = -tau;
    }
    let th = |x: Complex64| theta1(x / w1, tau);
    let h = w1 / 2.0;
    let f = |x: Complex64| th(x) * th(x - w2) / (th(x - h) * th(x + h - w2));
    let fprime0 = theta1_prime0(tau) / w1 * th(-w2) / (th(-h) * th(h - w2));
    f(z) / fprime0
}

/// `(g2, g3)` for the lattice `Z + Z τ` from theta constants.
pub fn invariants_theta(tau: Complex64) -> (Complex64, Complex64) {
    let q = (I * PI * tau).exp();
    let t2: Complex64 = (0..40)
        .map(|n| 2.0 * q.powf((n as f64 + 0.5).powi(2)))
        .sum();
    let t3: Complex64 = c(1.0, 0.0) + (1..40).map(|n| 2.0 * q.powi(n * n)).sum::<Complex64>();
    let t4: Complex64 = c(1.0, 0.0)
        + (1..40)
            .map(|n| 2.0 * if n % 2 == 0 { 1.0 } else { -1.0 } * q.powi(n * n))
            .sum::<Complex64>();
    let p = PI * PI / 3.0;
    let e1 = p * (t3.powi(4) + t4.powi(4));
    let e2 = -p * (t2.powi(4) + t3.powi(4));
    let e3 = p * (t2.powi(4) - t4.powi(4));
    let g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
    let g3 = 4.0 * e1 * e2 * e3;
    (g2, g3)
}

/// σ near the origin from its Eisenstein/Laurent expansion.
pub fn sigma_eisenstein(g2: Complex64, g3: Complex64, z: Complex64) -> Complex64 {
    let n = 30;
    let mut ck = vec![c(0.0, 0.0); n + 1];
    ck[2] = g2 / 20.0;
    ck[3] = g3 / 28.0;
    for k in 4..=n {
        let s: Complex64 = (2..=k - 2).map(|m| ck[m] * ck[k - m]).sum();
        ck[k] = s * 3.0 / ((2 * k + 1) * (k - 3)) as f64;
    }
    let log: Complex64 = (2..=n)
        .map(|k| ck[k] * z.powi(2 * k as i32) / ((2 * k - 1) * 2 * k) as f64)
        .sum();
    z * (-log).exp()
}

/// Richardson-extrapolated `a₃` from `(s(h) - h)/h³ = a₃ + a₅h² + ...`.
pub fn a3_richardson(s: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let d = |h: f64| {
        let h = c(h, 0.0);
        (s(h) - h) / h.powi(3)
    };
    let levels = [0.08, 0.04, 0.02, 0.01];
    let mut table: Vec<Complex64> = levels.iter().map(|&h| d(h)).collect();
    let mut factor = 4.0;
    while table.len() > 1 {
        table = table
            .windows(2)
            .map(|w| (w[1] * factor - w[0]) / (factor - 1.0))
            .collect();
        factor *= 4.0;
    }
    table[0]
}

/// `Π_j Q(t x_j)` truncated at `t^bound` and evaluated at `t = 1`: the value a
/// degree-`bound` symmetric expansion must reproduce.
pub fn graded_product(q: &[Complex64], roots: &[Complex64], bound: usize) -> Complex64 {
    let mut acc = vec![Complex64::new(0.0, 0.0); bound + 1];
    acc[0] = Complex64::new(1.0, 0.0);
    for x in roots {
        let factor: Vec<Complex64> = (0..=bound)
            .map(|k| q.get(k).copied().unwrap_or_default() * x.powu(k as u32))
            .collect();
        let mut next = vec![Complex64::new(0.0, 0.0); bound + 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in factor.iter().enumerate().take(bound + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc.iter().sum()
}

/// Dense `k×k×k` multiplication table from a product closure on basis indices.
pub fn dense_table(
    k: usize,
    product: impl Fn(usize, usize) -> Vec<Complex64>,
) -> Vec<Vec<Vec<Complex64>>> {
    (0..k)
        .map(|i| (0..k).map(|j| product(i, j)).collect())
        .collect()
}
