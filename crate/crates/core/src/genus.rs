//! Localization sums for the S¹-equivariant elliptic genus and numerical
//! rigidity checks.
//!
//! `genus(u) = Σ_N sign_N · ∫_N Π_j s(w_j + m_j u)^-1` over the fixed
//! components `N`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::charclass::{
    inverse_elliptic_euler_class, inverse_elliptic_euler_class_at, BundleSummand, EquivariantBundle,
};
use crate::elliptic::{CurvePoint, JacobiSine, Lattice, TORSION_TOL};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::series::{NilpotentAlgebra, TruncatedSeries};

/// Default rigidity tolerance, relative to `max(1, |mean|)`.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Default grid: this many points on `|u| = DEFAULT_RADIUS · |ω₁|`.
pub const DEFAULT_GRID_COUNT: usize = 20;
pub const DEFAULT_RADIUS: f64 = 0.07;
/// Grid points keep away from torsion points up to this order.
pub const GRID_AVOID_ORDER: u32 = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct FixedComponent {
    pub name: String,
    bundle: EquivariantBundle,
}

impl FixedComponent {
    pub fn new(
        name: impl Into<String>,
        algebra: NilpotentAlgebra,
        summands: Vec<BundleSummand>,
        orientation_sign: i8,
    ) -> Result<Self> {
        let name = name.into();
        if let Some(s) = summands.iter().find(|s| s.rotation_number == 0) {
            return Err(Error::invalid(format!(
                "component {name}: rotation number {} must be nonzero",
                s.rotation_number
            )));
        }
        Ok(FixedComponent {
            name,
            bundle: EquivariantBundle::new(algebra, summands, orientation_sign)?,
        })
    }

    /// Isolated fixed point with the given tangent rotation numbers.
    pub fn point(
        name: impl Into<String>,
        rotation_numbers: &[i64],
        orientation_sign: i8,
    ) -> Result<Self> {
        let alg = NilpotentAlgebra::point();
        let summands = rotation_numbers
            .iter()
            .map(|&m| BundleSummand::trivial(&alg, m))
            .collect();
        Self::new(name, alg, summands, orientation_sign)
    }

    pub fn bundle(&self) -> &EquivariantBundle {
        &self.bundle
    }

    pub fn algebra(&self) -> &NilpotentAlgebra {
        self.bundle.algebra()
    }

    pub fn orientation_sign(&self) -> i8 {
        self.bundle.orientation_sign()
    }

    pub fn rotation_numbers(&self) -> Vec<i64> {
        self.bundle.rotation_numbers()
    }

    /// Same component with the opposite orientation.
    pub fn reversed(&self) -> Self {
        FixedComponent {
            name: self.name.clone(),
            bundle: self.bundle.reversed(),
        }
    }

    /// `∫_N sign · Π_j s(w_j + m_j u)^-1` at a numeric `u`.
    pub fn contribution(&self, sine: &JacobiSine, u: Complex64) -> Result<Complex64> {
        let inv =
            inverse_elliptic_euler_class_at(&self.bundle, sine, ZERO, u).map_err(|e| match e {
                Error::EulerNotInvertible(_) | Error::Pole(_) => {
                    Error::SpecialPoint(format!("{u}"))
                }
                other => other,
            })?;
        Ok(self.algebra().integrate(&inv))
    }

    /// Laurent expansion of [`Self::contribution`] at `u = 0`.
    pub fn contribution_series(&self, sine: &JacobiSine, order: i32) -> Result<TruncatedSeries> {
        let inv = inverse_elliptic_euler_class(&self.bundle, sine, ZERO, order)?;
        Ok(self.algebra().integrate(&inv))
    }
}

#[derive(Debug, Clone)]
pub struct ManifoldFixedData {
    pub components: Vec<FixedComponent>,
    /// metadata only; never verified
    pub declared_spin: bool,
    pub dimension: u32,
}

impl ManifoldFixedData {
    pub fn new(
        components: Vec<FixedComponent>,
        declared_spin: bool,
        dimension: u32,
    ) -> Result<Self> {
        if !dimension.is_multiple_of(2) {
            return Err(Error::invalid(format!("dimension {dimension} is odd")));
        }
        for c in &components {
            let d = c.algebra().top_degree() + 2 * c.bundle.summands().len() as u32;
            if d != dimension {
                return Err(Error::invalid(format!(
                    "component {}: top degree {} + 2 x {} summands != dimension {dimension}",
                    c.name,
                    c.algebra().top_degree(),
                    c.bundle.summands().len()
                )));
            }
        }
        Ok(ManifoldFixedData {
            components,
            declared_spin,
            dimension,
        })
    }

    /// Disjoint union.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Self::new(
            components,
            self.declared_spin && other.declared_spin,
            self.dimension,
        )
    }

    /// Per-component `Σ_j m_j mod 2`; advisory only.
    pub fn parity_report(&self) -> Vec<ParityAdvisory> {
        self.components
            .iter()
            .map(|c| ParityAdvisory {
                component: c.name.clone(),
                rotation_sum_parity: c.rotation_numbers().iter().sum::<i64>().rem_euclid(2) as u8,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityAdvisory {
    pub component: String,
    pub rotation_sum_parity: u8,
}

/// Order-independent sum: terms are sorted before adding.
pub fn canonical_sum(mut terms: Vec<Complex64>) -> Complex64 {
    terms.sort_by(|a, b| match a.re.total_cmp(&b.re) {
        Ordering::Equal => a.im.total_cmp(&b.im),
        o => o,
    });
    terms.into_iter().fold(ZERO, |acc, x| acc + x)
}

pub fn genus_eval(data: &ManifoldFixedData, sine: &JacobiSine, u: Complex64) -> Result<Complex64> {
    let terms = data
        .components
        .iter()
        .map(|c| c.contribution(sine, u))
        .collect::<Result<Vec<_>>>()?;
    Ok(canonical_sum(terms))
}

#[derive(Debug, Clone, Serialize)]
pub struct GenusTaylor {
    pub series: TruncatedSeries,
    pub principal_part: Vec<(i32, Complex64)>,
}

/// Laurent series at `u = 0` of the localization sum through `u^order`.
pub fn genus_taylor(
    data: &ManifoldFixedData,
    sine: &JacobiSine,
    order: i32,
) -> Result<GenusTaylor> {
    let mut sum = TruncatedSeries::zero(order);
    for c in &data.components {
        sum = sum.add(&c.contribution_series(sine, order)?);
    }
    let sum = sum.truncate(order);
    Ok(GenusTaylor {
        principal_part: sum.principal_part(),
        series: sum,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GenusSample {
    pub u: Complex64,
    pub value: Option<Complex64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenusReport {
    pub samples: Vec<GenusSample>,
    pub taylor: GenusTaylor,
    pub constant: bool,
    /// `max |g(u) - mean| / max(1, |mean|)` over the valid samples
    pub max_deviation: f64,
    pub reference_value: Complex64,
    pub tolerance: f64,
}

/// `count` points on `|u| = radius · |ω₁|`, nudged off torsion points of
/// order `<= GRID_AVOID_ORDER`.
pub fn default_grid(lattice: &Lattice, radius: f64, count: usize) -> Vec<Complex64> {
    let r = radius * lattice.omega1.norm();
    let near_torsion = |u: Complex64| {
        let (x, y) = lattice.coords(u);
        (1..=GRID_AVOID_ORDER).any(|n| {
            let n = n as f64;
            (x - (n * x).round() / n).abs() < 1e-6 && (y - (n * y).round() / n).abs() < 1e-6
        })
    };
    (0..count)
        .map(|k| {
            let mut theta = 2.0 * PI * (k as f64 + 0.25) / count as f64 + 0.1;
            let mut u = Complex64::from_polar(r, theta) * (lattice.omega1 / lattice.omega1.norm());
            while near_torsion(u) {
                theta += 1e-3;
                u = Complex64::from_polar(r, theta) * (lattice.omega1 / lattice.omega1.norm());
            }
            u
        })
        .collect()
}

pub fn rigidity_check(
    data: &ManifoldFixedData,
    sine: &JacobiSine,
    grid: &[Complex64],
    tol: f64,
    taylor_order: i32,
    exec: Execution,
) -> Result<GenusReport> {
    let samples: Vec<GenusSample> = par::map(exec, grid, |&u| match genus_eval(data, sine, u) {
        Ok(v) => GenusSample {
            u,
            value: Some(v),
            error: None,
        },
        Err(e) => GenusSample {
            u,
            value: None,
            error: Some(e.to_string()),
        },
    });
    let values: Vec<Complex64> = samples.iter().filter_map(|s| s.value).collect();
    if values.is_empty() {
        return Err(Error::GridExhausted(grid.len()));
    }
    let mean = canonical_sum(values.clone()) / values.len() as f64;
    let scale = mean.norm().max(1.0);
    let max_deviation = values
        .iter()
        .map(|v| (v - mean).norm() / scale)
        .fold(0.0, f64::max);
    Ok(GenusReport {
        samples,
        taylor: genus_taylor(data, sine, taylor_order)?,
        constant: max_deviation < tol,
        max_deviation,
        reference_value: mean,
        tolerance: tol,
    })
}

/// Torsion points `α` of exact order `n <= n_max` with `n | m_j` for some
/// rotation number; there `X^α` is larger than the S¹-fixed set. The origin
/// (order 1) is always included.
pub fn special_points(data: &ManifoldFixedData, lattice: &Lattice, n_max: u32) -> Vec<CurvePoint> {
    let ms: Vec<i64> = data
        .components
        .iter()
        .flat_map(|c| c.rotation_numbers())
        .collect();
    let mut out = Vec::new();
    for n in 1..=n_max {
        if !ms.iter().any(|m| m.rem_euclid(n as i64) == 0) {
            continue;
        }
        out.extend(
            lattice
                .torsion_points(n)
                .into_iter()
                .filter(|p| p.exact_order == Some(n)),
        );
    }
    out
}

/// Whether `u` is a special evaluation point: `m_j u ∈ Λ` for some `j`.
pub fn is_special_value(data: &ManifoldFixedData, lattice: &Lattice, u: Complex64) -> bool {
    data.components
        .iter()
        .flat_map(|c| c.rotation_numbers())
        .any(|m| lattice.contains(u * m as f64, TORSION_TOL))
}

/// Fixed-point data of a few closed manifolds.
pub mod examples {
    use super::*;
    use crate::series::AlgebraElement;

    /// Rotation of S² about an axis: two poles with weights `±1`.
    pub fn s2() -> ManifoldFixedData {
        ManifoldFixedData::new(
            vec![
                FixedComponent::point("north", &[1], 1).unwrap(),
                FixedComponent::point("south", &[-1], 1).unwrap(),
            ],
            true,
            2,
        )
        .unwrap()
    }

    /// Diagonal rotation of S² × S²: four points with weights `(±1, ±1)`.
    pub fn s2_times_s2() -> ManifoldFixedData {
        let mut components = Vec::new();
        for a in [1, -1] {
            for b in [1, -1] {
                components.push(FixedComponent::point(format!("p({a},{b})"), &[a, b], 1).unwrap());
            }
        }
        ManifoldFixedData::new(components, true, 4).unwrap()
    }

    /// `CP²` with weights `(0, 1, 2)`: three isolated fixed points.
    pub fn cp2() -> ManifoldFixedData {
        ManifoldFixedData::new(
            vec![
                FixedComponent::point("[1:0:0]", &[1, 2], 1).unwrap(),
                FixedComponent::point("[0:1:0]", &[-1, 1], 1).unwrap(),
                FixedComponent::point("[0:0:1]", &[-2, -1], 1).unwrap(),
            ],
            false,
            4,
        )
        .unwrap()
    }

    /// `CP²` with weights `(0, 0, 1)`: the fixed line `CP¹` with normal
    /// bundle `O(1)` of weight 1, and the point `[0:0:1]`.
    pub fn cp2_fixed_line() -> ManifoldFixedData {
        let alg = NilpotentAlgebra::truncated_tensor(&[2]).unwrap();
        let w = AlgebraElement::new(alg.basis_vector(1));
        let line = FixedComponent::new(
            "CP1",
            alg,
            vec![BundleSummand {
                rotation_number: 1,
                chern_root: w,
                complex: true,
            }],
            1,
        )
        .unwrap();
        ManifoldFixedData::new(
            vec![
                line,
                FixedComponent::point("[0:0:1]", &[-1, -1], 1).unwrap(),
            ],
            false,
            4,
        )
        .unwrap()
    }

    /// All bundled examples with their names.
    pub fn all() -> Vec<(&'static str, ManifoldFixedData)> {
        vec![
            ("s2", s2()),
            ("s2xs2", s2_times_s2()),
            ("cp2", cp2()),
            ("cp2-fixed-line", cp2_fixed_line()),
        ]
    }
}
