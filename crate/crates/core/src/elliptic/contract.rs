use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::sine::{DivisorCensus, JacobiSine};
use crate::error::Result;
use crate::par::{self, Execution};

/// Worst deviations of the defining identities of `s` over a set of points.
/// Each is `|lhs - rhs| / max(1, |s(z)|)`.
#[derive(Debug, Clone, Serialize)]
pub struct ContractReport {
    pub points: usize,
    /// `s(-z) = -s(z)`
    pub oddness: f64,
    /// `s(z + ω₁) = s(z)`
    pub period_omega1: f64,
    /// `s(z + 2ω₂) = s(z)`
    pub period_two_omega2: f64,
    /// `s(z + ω₂) = -s(z)`
    pub antiperiod_omega2: f64,
    /// `s'(0)` from a Cauchy integral on a small circle
    pub derivative_at_zero: Complex64,
    /// `max |s(z + ω₁/2) s(z) - a|` with `a` the mean product
    pub half_period_spread: f64,
    pub half_period_constant: Complex64,
    pub census: DivisorCensus,
    /// two simple zeros and two simple poles, each within `1e-6` of the
    /// expected location
    pub census_matches_divisor: bool,
}

impl ContractReport {
    pub fn max_identity_error(&self) -> f64 {
        [
            self.oddness,
            self.period_omega1,
            self.period_two_omega2,
            self.antiperiod_omega2,
            (self.derivative_at_zero - 1.0).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `s'(0)` as `(1/N) Σ s(r e^{iθ_k}) e^{-iθ_k} / r`.
pub fn derivative_at_zero(sine: &JacobiSine) -> Result<Complex64> {
    const N: usize = 64;
    let r = 0.1 * sine.lattice().omega1.norm();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..N {
        let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / N as f64);
        acc += sine.eval(e * r)? / e;
    }
    Ok(acc / (N as f64 * r))
}

/// Checks the identities at `points`, which should stay away from the poles.
/// The half-period product uses the first `half_period_points` of them.
pub fn check_contract(
    sine: &JacobiSine,
    points: &[Complex64],
    half_period_points: usize,
    exec: Execution,
) -> Result<ContractReport> {
    let l = *sine.lattice();
    let errs = par::map(exec, points, |&z| -> Result<[f64; 4]> {
        let v = sine.eval(z)?;
        let scale = v.norm().max(1.0);
        Ok([
            (sine.eval(-z)? + v).norm() / scale,
            (sine.eval(z + l.omega1)? - v).norm() / scale,
            (sine.eval(z + l.omega2 * 2.0)? - v).norm() / scale,
            (sine.eval(z + l.omega2)? + v).norm() / scale,
        ])
    });
    let mut worst = [0.0f64; 4];
    for e in errs {
        for (w, x) in worst.iter_mut().zip(e?) {
            *w = w.max(x);
        }
    }
    let h = l.omega1 / 2.0;
    let products = points
        .iter()
        .take(half_period_points)
        .map(|&z| Ok(sine.eval(z + h)? * sine.eval(z)?))
        .collect::<Result<Vec<_>>>()?;
    let mean = if products.is_empty() {
        sine.half_period_constant()
    } else {
        products.iter().sum::<Complex64>() / products.len() as f64
    };
    let spread = products
        .iter()
        .map(|p| (p - mean).norm())
        .fold(0.0, f64::max);
    let census = sine.divisor_census(exec);
    let near = |a: Complex64, b: Complex64| {
        let d = l.reduce_doubled(a - b);
        let (x, y) = l.coords(d);
        // distance to the nearest point of the doubled lattice
        [0.0, 1.0]
            .iter()
            .flat_map(|&i| [0.0, 2.0].map(move |j| (i, j)))
            .map(|(i, j)| l.from_coords(x - i, y - j).norm())
            .fold(f64::INFINITY, f64::min)
            < 1e-6
    };
    let matches = |found: &[super::CensusEntry], expected: [Complex64; 2]| {
        found.len() == 2
            && found.iter().all(|e| e.multiplicity == 1)
            && expected
                .iter()
                .all(|&p| found.iter().any(|e| near(e.point, p)))
    };
    let census_matches_divisor =
        matches(&census.zeros, sine.zeros()) && matches(&census.poles, sine.poles());
    Ok(ContractReport {
        points: points.len(),
        oddness: worst[0],
        period_omega1: worst[1],
        period_two_omega2: worst[2],
        antiperiod_omega2: worst[3],
        derivative_at_zero: derivative_at_zero(sine)?,
        half_period_spread: spread,
        half_period_constant: mean,
        census,
        census_matches_divisor,
    })
}
