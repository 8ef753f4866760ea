//! Rotation-number bookkeeping at a torsion point `α` of exact order `n`.
//!
//! Remainders are Euclidean: `m_j = n q_j + r_j` with `0 <= r_j < n`.
//! Summands split into `I_0` (`r_j = 0`), `I_k` (`r_j ∈ {k, n-k}`,
//! `0 < k < n/2`) and `I_{n/2}` (`r_j = n/2`, even `n` only).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::charclass::{sine_of_element, VANISHING_TOL};
use crate::elliptic::{epsilon_sign, CurvePoint, JacobiSine};
use crate::error::{Error, Result};
use crate::genus::FixedComponent;
use crate::par::{self, Execution};
use crate::series::AlgebraElement;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub i0: Vec<usize>,
    /// `k -> I_k` for `0 < k < n/2`, only nonempty sets
    pub ik: BTreeMap<u32, Vec<usize>>,
    pub half: Vec<usize>,
}

impl IndexSets {
    /// All indices in `I_K = ∪ I_k`.
    pub fn i_k_union(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.ik.values().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationSystem {
    pub m: Vec<i64>,
    pub n: u32,
    pub q: Vec<i64>,
    pub r: Vec<i64>,
    pub m_star: Vec<i64>,
    pub q_star: Vec<i64>,
    pub r_star: Vec<i64>,
}

fn check_input(m: &[i64], n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("modulus {n} must be at least 2")));
    }
    if m.contains(&0) {
        return Err(Error::invalid("rotation numbers must be nonzero"));
    }
    Ok(())
}

fn euclid(m: i64, n: u32) -> (i64, i64) {
    (m.div_euclid(n as i64), m.rem_euclid(n as i64))
}

pub fn index_sets(m: &[i64], n: u32) -> Result<IndexSets> {
    check_input(m, n)?;
    let mut sets = IndexSets {
        i0: Vec::new(),
        ik: BTreeMap::new(),
        half: Vec::new(),
    };
    let n = n as i64;
    for (j, &mj) in m.iter().enumerate() {
        let r = mj.rem_euclid(n);
        if r == 0 {
            sets.i0.push(j);
        } else if 2 * r == n {
            sets.half.push(j);
        } else {
            let k = r.min(n - r) as u32;
            sets.ik.entry(k).or_default().push(j);
        }
    }
    Ok(sets)
}

/// `Σ_j q_j mod 2`.
pub fn sigma_parity(m: &[i64], n: u32) -> Result<u8> {
    check_input(m, n)?;
    Ok(m.iter().map(|&x| euclid(x, n).0).sum::<i64>().rem_euclid(2) as u8)
}

/// Complex-structure representatives: `|m_j|` on `I_0` and `I_{n/2}`; on
/// `I_k` the sign that makes the remainder equal to `k`.
pub fn star_representatives(m: &[i64], n: u32) -> Result<Vec<i64>> {
    check_input(m, n)?;
    let nn = n as i64;
    Ok(m.iter()
        .map(|&x| {
            let r = x.rem_euclid(nn);
            if r == 0 || 2 * r == nn {
                x.abs()
            } else if 2 * r < nn {
                x
            } else {
                -x
            }
        })
        .collect())
}

/// Parity of the number of sign changes between `m` and `m_star`, matched
/// by absolute value (stable sort).
pub fn sign_change_count_parity(m: &[i64], m_star: &[i64]) -> Result<u8> {
    if m.len() != m_star.len() {
        return Err(Error::invalid("rotation lists have different lengths"));
    }
    let sorted = |v: &[i64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by_key(|&i| v[i].abs());
        idx
    };
    let (a, b) = (sorted(m), sorted(m_star));
    let mut flips = 0u32;
    for (&i, &j) in a.iter().zip(&b) {
        if m[i].abs() != m_star[j].abs() {
            return Err(Error::invalid(format!(
                "absolute values differ: {:?} vs {:?}",
                m, m_star
            )));
        }
        if m[i] != m_star[j] {
            flips += 1;
        }
    }
    Ok((flips % 2) as u8)
}

impl RotationSystem {
    pub fn new(m: &[i64], n: u32) -> Result<Self> {
        let m_star = star_representatives(m, n)?;
        let (q, r) = m.iter().map(|&x| euclid(x, n)).unzip();
        let (q_star, r_star) = m_star.iter().map(|&x| euclid(x, n)).unzip();
        Ok(RotationSystem {
            m: m.to_vec(),
            n,
            q,
            r,
            m_star,
            q_star,
            r_star,
        })
    }

    pub fn index_sets(&self) -> IndexSets {
        index_sets(&self.m, self.n).expect("validated on construction")
    }

    /// Flip parity between `m` and `m*` restricted to an index set.
    pub fn flip_parity(&self, set: &[usize]) -> u8 {
        let flips = set.iter().filter(|&&j| self.m[j] != self.m_star[j]).count();
        (flips % 2) as u8
    }

    /// `(σ(0), σ(K), σ(n/2))`.
    pub fn orientation_parities(&self) -> (u8, u8, u8) {
        let sets = self.index_sets();
        (
            self.flip_parity(&sets.i0),
            self.flip_parity(&sets.i_k_union()),
            self.flip_parity(&sets.half),
        )
    }

    pub fn sigma(&self) -> u8 {
        (self.q.iter().sum::<i64>().rem_euclid(2)) as u8
    }

    /// `σ(N)` assembled per index set from the star quotients:
    /// `Σ_{I_0} q_j + Σ_{I_K} q*_j + σ(K) + Σ_{I_{n/2}} q*_j + σ(n/2)`.
    pub fn sigma_three_sum(&self) -> u8 {
        let sets = self.index_sets();
        let (_, sk, sh) = self.orientation_parities();
        let sum_q = |set: &[usize]| set.iter().map(|&j| self.q[j]).sum::<i64>();
        let sum_q_star = |set: &[usize]| set.iter().map(|&j| self.q_star[j]).sum::<i64>();
        let total = sum_q(&sets.i0)
            + sum_q_star(&sets.i_k_union())
            + sk as i64
            + sum_q_star(&sets.half)
            + sh as i64;
        total.rem_euclid(2) as u8
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferSample {
    pub u: Complex64,
    /// coordinates in the algebra basis
    pub lhs: Option<Vec<Complex64>>,
    pub rhs: Option<Vec<Complex64>>,
    pub mismatch: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferCertificate {
    pub component: String,
    pub order: u32,
    pub sigma_n: u8,
    pub epsilon: i8,
    pub index_sets: IndexSets,
    pub m_star: Vec<i64>,
    /// `(σ(0), σ(K), σ(n/2))`
    pub orientation_parities: (u8, u8, u8),
    pub samples: Vec<TransferSample>,
    pub max_mismatch: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn pow_sign(base: f64, e: u8) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        base
    }
}

/// Checks the lifting identity at one fixed component:
///
/// `t*_α e(V/V^{S¹})^-1 · e(V^{Z_n}/V^{S¹}) = ε^{σ(N)} i*μ_P`
///
/// with the left side `Π_j s(x_j + m_j α)^-1 · Π_{I_0} s(x_j)` and the right
/// side `ε^{σ(N)} (-ε)^{σ(K)} Π_{I_K} s(x*_j + kα)^-1 · (-ε)^{σ(n/2)}
/// Π_{I_{n/2}} s(x*_j + (n/2)α)^-1`, both times the component's orientation
/// sign. Here `x_j = w_j + m_j u` and `x*_j = ±x_j` follows `m*_j = ±m_j`.
pub fn verify_transfer_lift(
    component: &FixedComponent,
    sine: &JacobiSine,
    alpha: &CurvePoint,
    n_max: u32,
    grid: &[Complex64],
    tol: f64,
    exec: Execution,
) -> Result<TransferCertificate> {
    let (n, eps) = epsilon_sign(alpha, n_max)?;
    if n < 2 {
        return Err(Error::invalid("α must have exact order at least 2"));
    }
    let m = component.rotation_numbers();
    let sys = RotationSystem::new(&m, n)?;
    let sets = sys.index_sets();
    let parities = sys.orientation_parities();
    let sigma_n = sys.sigma();
    let eps_f = eps as f64;
    let alg = component.algebra();
    let roots: Vec<AlgebraElement<Complex64>> = component
        .bundle()
        .summands()
        .iter()
        .map(|s| s.chern_root.clone())
        .collect();
    let sign = Complex64::new(component.orientation_sign() as f64, 0.0);
    let a = alpha.z;

    let evaluate =
        |u: Complex64| -> Result<(AlgebraElement<Complex64>, AlgebraElement<Complex64>)> {
            let s_at =
                |w: &AlgebraElement<Complex64>, p: Complex64| sine_of_element(alg, sine, w, p);
            let inv = |x: AlgebraElement<Complex64>| {
                if x.coeffs[0].norm() < VANISHING_TOL {
                    return Err(Error::EulerNotInvertible(format!("at u = {u}")));
                }
                alg.inverse(&x)
            };
            let mut lhs = alg.scalar(sign);
            for (j, w) in roots.iter().enumerate() {
                let mj = m[j] as f64;
                lhs = alg.mul(&lhs, &inv(s_at(w, mj * (u + a))?)?);
            }
            for &j in &sets.i0 {
                lhs = alg.mul(&lhs, &s_at(&roots[j], m[j] as f64 * u)?);
            }
            let coeff = pow_sign(eps_f, sigma_n)
                * pow_sign(-eps_f, parities.1)
                * pow_sign(-eps_f, parities.2);
            let mut rhs = alg.scalar(sign * coeff);
            let shifted = |j: usize, k: f64| -> Result<AlgebraElement<Complex64>> {
                let flip = if sys.m_star[j] == m[j] { 1.0 } else { -1.0 };
                let w = roots[j].scale(Complex64::new(flip, 0.0));
                inv(s_at(&w, sys.m_star[j] as f64 * u + a * k)?)
            };
            for (&k, set) in &sets.ik {
                for &j in set {
                    rhs = alg.mul(&rhs, &shifted(j, k as f64)?);
                }
            }
            for &j in &sets.half {
                rhs = alg.mul(&rhs, &shifted(j, n as f64 / 2.0)?);
            }
            Ok((lhs, rhs))
        };

    let samples: Vec<TransferSample> = par::map(exec, grid, |&u| match evaluate(u) {
        Ok((l, r)) => TransferSample {
            u,
            mismatch: Some(l.max_diff(&r)),
            lhs: Some(l.coeffs),
            rhs: Some(r.coeffs),
            error: None,
        },
        Err(e) => TransferSample {
            u,
            lhs: None,
            rhs: None,
            mismatch: None,
            error: Some(e.to_string()),
        },
    });
    let valid: Vec<f64> = samples.iter().filter_map(|s| s.mismatch).collect();
    if valid.is_empty() {
        return Err(Error::GridExhausted(grid.len()));
    }
    let max_mismatch = valid.iter().copied().fold(0.0, f64::max);
    Ok(TransferCertificate {
        component: component.name.clone(),
        order: n,
        sigma_n,
        epsilon: eps,
        index_sets: sets,
        m_star: sys.m_star.clone(),
        orientation_parities: parities,
        samples,
        max_mismatch,
        tolerance: tol,
        passed: max_mismatch < tol,
    })
}

/// Checks `σ(N) ≡ σ(Ñ)` for rotation data related by `m̃_j = m_j + n t_j`
/// (up to permutation) with `Σ t_j` even.
pub fn component_parity_lemma_check(m: &[i64], m_tilde: &[i64], n: u32) -> Result<bool> {
    check_input(m, n)?;
    check_input(m_tilde, n)?;
    if m.len() != m_tilde.len() {
        return Err(Error::NotBtCompatible(
            "different numbers of rotation numbers".into(),
        ));
    }
    let residues = |v: &[i64]| {
        let mut r: Vec<i64> = v.iter().map(|x| x.rem_euclid(n as i64)).collect();
        r.sort_unstable();
        r
    };
    if residues(m) != residues(m_tilde) {
        return Err(Error::NotBtCompatible("residues mod n differ".into()));
    }
    // with matching residues, Σ t_j does not depend on the pairing
    let diff: i64 = m_tilde.iter().sum::<i64>() - m.iter().sum::<i64>();
    if (diff / n as i64).rem_euclid(2) != 0 {
        return Err(Error::NotBtCompatible(format!(
            "Σ t_j = {} is odd",
            diff / n as i64
        )));
    }
    Ok(sigma_parity(m, n)? == sigma_parity(m_tilde, n)?)
}

/// The bundled certificates: `(name, component, α as (x, y) coordinates)`.
pub mod examples {
    use super::*;

    pub fn all() -> Vec<(&'static str, FixedComponent, (f64, f64))> {
        vec![
            (
                "half-period",
                FixedComponent::point("m=[1]", &[1], 1).unwrap(),
                (0.5, 0.0),
            ),
            (
                "quasi-period",
                FixedComponent::point("m=[3]", &[3], 1).unwrap(),
                (0.0, 0.5),
            ),
            (
                "mixed-remainder",
                FixedComponent::point("m=[1,-1]", &[1, -1], 1).unwrap(),
                (1.0 / 3.0, 0.0),
            ),
        ]
    }
}
