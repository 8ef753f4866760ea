//! Input documents: lattice, fixed-point data and options.

use std::path::Path;

use ellgen::charclass::BundleSummand;
use ellgen::elliptic::Lattice;
use ellgen::genus::{FixedComponent, ManifoldFixedData};
use ellgen::series::{AlgebraElement, NilpotentAlgebra};
use ellgen::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub omega1: Complex64,
    pub omega2: Complex64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub degrees: Vec<u32>,
    /// `mult_table[i][j]` is the coordinate vector of `e_i e_j`
    pub mult_table: Vec<Vec<Vec<Complex64>>>,
    pub top_functional: Vec<Complex64>,
}

fn plus_one() -> i8 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub name: String,
    #[serde(default = "plus_one")]
    pub orientation_sign: i8,
    pub rotation_numbers: Vec<i64>,
    #[serde(default)]
    pub algebra: Option<AlgebraSpec>,
    /// one coordinate vector per rotation number; zero when absent
    #[serde(default)]
    pub chern_roots: Option<Vec<Vec<Complex64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub dimension: u32,
    pub declared_spin: bool,
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    pub truncation: Option<i32>,
    pub tolerance: Option<f64>,
    pub grid_radius: Option<f64>,
    pub grid_count: Option<usize>,
    pub n_max: Option<u32>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default)]
    pub lattice: Option<LatticeSpec>,
    #[serde(default)]
    pub manifold: Option<ManifoldSpec>,
    #[serde(default)]
    pub options: OptionsSpec,
}

/// Raw bytes plus their SHA-256.
pub struct Loaded<T> {
    pub value: T,
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Json {
        file: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: {
            let m = e.to_string();
            m.split(" at line ").next().unwrap_or(&m).to_string()
        },
    })
}

pub fn load_input(path: &Path) -> Result<Loaded<InputDocument>, CliError> {
    let bytes = read(path)?;
    let value: InputDocument = parse(path, &bytes)?;
    value.validate()?;
    Ok(Loaded {
        value,
        digest: sha256_hex(&bytes),
    })
}

/// A lattice file holds either a bare `{omega1, omega2}` object or a full
/// input document with a `lattice` field.
pub fn load_lattice(path: &Path) -> Result<Loaded<Lattice>, CliError> {
    let bytes = read(path)?;
    let spec: LatticeSpec = match parse::<LatticeSpec>(path, &bytes) {
        Ok(s) => s,
        Err(bare_err) => match parse::<InputDocument>(path, &bytes) {
            Ok(InputDocument {
                lattice: Some(l), ..
            }) => l,
            _ => return Err(bare_err),
        },
    };
    Ok(Loaded {
        value: spec.to_lattice()?,
        digest: sha256_hex(&bytes),
    })
}

impl LatticeSpec {
    pub fn to_lattice(&self) -> Result<Lattice, CliError> {
        Lattice::new(self.omega1, self.omega2).map_err(|e| CliError::input(format!("lattice: {e}")))
    }
}

impl InputDocument {
    /// Re-checks every invariant the core types enforce, reporting the
    /// offending field.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(l) = &self.lattice {
            l.to_lattice()?;
        }
        if let Some(m) = &self.manifold {
            m.to_fixed_data()?;
        }
        let o = &self.options;
        if o.truncation.is_some_and(|t| !(1..=64).contains(&t)) {
            return Err(CliError::input("options.truncation must lie in 1..=64"));
        }
        if o.tolerance.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return Err(CliError::input("options.tolerance must be positive"));
        }
        if o.grid_radius.is_some_and(|r| !(r > 0.0 && r < 0.5)) {
            return Err(CliError::input("options.grid_radius must lie in (0, 0.5)"));
        }
        if o.grid_count == Some(0) {
            return Err(CliError::input("options.grid_count must be positive"));
        }
        if o.n_max.is_some_and(|n| !(2..=1000).contains(&n)) {
            return Err(CliError::input("options.n_max must lie in 2..=1000"));
        }
        Ok(())
    }
}

impl AlgebraSpec {
    pub fn to_algebra(&self) -> Result<NilpotentAlgebra, ellgen::Error> {
        NilpotentAlgebra::new(
            self.degrees.clone(),
            self.mult_table.clone(),
            self.top_functional.clone(),
        )
    }
}

impl ComponentSpec {
    pub fn to_component(&self) -> Result<FixedComponent, CliError> {
        let ctx = |e: ellgen::Error| CliError::input(format!("component {}: {e}", self.name));
        let alg = match &self.algebra {
            Some(a) => a.to_algebra().map_err(ctx)?,
            None => NilpotentAlgebra::point(),
        };
        let roots = match &self.chern_roots {
            Some(r) if r.len() != self.rotation_numbers.len() => {
                return Err(CliError::input(format!(
                    "component {}: {} Chern roots for {} rotation numbers",
                    self.name,
                    r.len(),
                    self.rotation_numbers.len()
                )))
            }
            Some(r) => r.clone(),
            None => {
                vec![vec![Complex64::new(0.0, 0.0); alg.basis_size()]; self.rotation_numbers.len()]
            }
        };
        let summands = self
            .rotation_numbers
            .iter()
            .zip(roots)
            .map(|(&m, w)| {
                let w = alg.element(w).map_err(ctx)?;
                if w.coeffs[0] != Complex64::new(0.0, 0.0) {
                    return Err(CliError::input(format!(
                        "component {}: Chern roots must have no unit component",
                        self.name
                    )));
                }
                Ok(BundleSummand {
                    rotation_number: m,
                    chern_root: AlgebraElement::new(w.coeffs),
                    complex: true,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        FixedComponent::new(self.name.clone(), alg, summands, self.orientation_sign).map_err(ctx)
    }
}

impl ManifoldSpec {
    pub fn to_fixed_data(&self) -> Result<ManifoldFixedData, CliError> {
        let comps = self
            .components
            .iter()
            .map(ComponentSpec::to_component)
            .collect::<Result<Vec<_>, _>>()?;
        ManifoldFixedData::new(comps, self.declared_spin, self.dimension)
            .map_err(|e| CliError::input(format!("manifold: {e}")))
    }
}
