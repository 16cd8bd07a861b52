//! Scenario files: fan, partition, bundles and truncation settings in TOML.

use serde::{Deserialize, Serialize};

use crate::bside::AlphaAssignment;
use crate::error::{Error, Result};
use crate::gamma::KClass;
use crate::rational::{parse_q, Q};
use crate::ring::{OrbRing, SectorPresentation};
use crate::series::NefPartition;
use crate::toric::{LatticeVector, StackyFan, ToricData};

/// Cones and partition parts use 1-based ray indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    #[serde(default)]
    pub extended: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nef_basis: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub nef_partition: Vec<Vec<usize>>,
    /// `α_i` as q-exponent vectors, one per ray and extended ray.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub sectors: Vec<SectorEntry>,
    #[serde(default)]
    pub bundles: Vec<BundleSpec>,
    /// Divisor-coefficient vectors `ξ` for the monodromy check.
    #[serde(default)]
    pub monodromy: Vec<Vec<i64>>,
    #[serde(default)]
    pub truncation: Truncation,
    #[serde(default)]
    pub numeric: Numeric,
    /// Commands run by `report-all`; all applicable ones when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(default)]
    pub expect: Expectations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorEntry {
    #[serde(rename = "box")]
    pub v: Vec<i64>,
    #[serde(flatten)]
    pub presentation: SectorPresentation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub name: String,
    /// Signed sum of line bundles `(coefficient, [n_1..n_m])`.
    pub terms: Vec<(i64, Vec<i64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub q_bound: String,
    pub z_window: Option<(i32, i32)>,
    /// Order for residue and multinomial series.
    pub residue_order: String,
    /// `α'`-degree for the GKZ period family.
    pub gkz_order: i64,
    pub gkz_height: Option<i64>,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { q_bound: "4".into(), z_window: None, residue_order: "8".into(), gkz_order: 6, gkz_height: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numeric {
    pub tol: f64,
    pub osc_tol: f64,
    pub quadrature_levels: usize,
    pub q_values: Vec<f64>,
    pub z: f64,
}

impl Default for Numeric {
    fn default() -> Self {
        Numeric { tol: 1e-9, osc_tol: 1e-5, quadrature_levels: 9, q_values: vec![0.01], z: 1.0 }
    }
}

/// Known values checked by the corresponding commands.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Coefficients of the `v = 0` residue series by q-degree (one parameter).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<Vec<String>>,
    /// Coefficient of `q` in `ς/p̄_1 - log q` (one parameter).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror_map_q1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror_map_trivial: Option<bool>,
    /// `N` with `(p̄_1 ∘)^N = q` in quantum cohomology.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum_power: Option<usize>,
    /// Matrix of Euler pairings between the bundles (on the complete intersection if any).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<Vec<Vec<String>>>,
    /// Exact critical values `N ζ^j (K q^e)^{1/N}` as `[N, K, e_1, ..]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical: Option<Vec<String>>,
}

/// A scenario with all derived objects built.
#[derive(Debug, Clone)]
pub struct Model {
    pub scenario: Scenario,
    pub td: ToricData,
    pub ring: OrbRing,
    pub partition: NefPartition,
    pub alpha: AlphaAssignment,
    pub bundles: Vec<(String, KClass)>,
    pub q_bound: Q,
    pub residue_order: Q,
    pub z_window: (i32, i32),
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        Scenario::from_toml(&text)
    }

    fn zero_based(sets: &[Vec<usize>], what: &str, limit: usize) -> Result<Vec<Vec<usize>>> {
        sets.iter()
            .map(|s| {
                s.iter()
                    .map(|&i| {
                        if i == 0 || i > limit {
                            Err(Error::Scenario(format!("{what} index {i} out of range 1..={limit}")))
                        } else {
                            Ok(i - 1)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn build(&self) -> Result<Model> {
        let m = self.rays.len();
        let cones = Scenario::zero_based(&self.cones, "cone", m)?;
        let parts = Scenario::zero_based(&self.nef_partition, "partition", m)?;
        let lv = |v: &Vec<i64>| LatticeVector(v.clone());
        let fan = StackyFan::new(self.rank, self.rays.iter().map(lv).collect(), self.extended.iter().map(lv).collect(), cones)?;
        let td = ToricData::new(fan, self.nef_basis.clone())?;
        let mut pres = Vec::new();
        for s in &self.sectors {
            let v = td
                .box_index(&s.v)
                .ok_or_else(|| Error::Scenario(format!("sector {:?} is not a Box element", s.v)))?;
            pres.push((v, s.presentation.clone()));
        }
        let ring = OrbRing::new(&td, &pres)?;
        let partition = NefPartition { parts };
        partition.validate(&td)?;
        let alpha = match &self.alpha {
            None => AlphaAssignment::canonical(&td),
            Some(rows) => AlphaAssignment {
                exponents: rows.iter().map(|r| r.iter().map(|x| parse_q(x)).collect::<Result<_>>()).collect::<Result<_>>()?,
            },
        };
        alpha.validate(&td)?;
        let mut bundles = Vec::new();
        for b in &self.bundles {
            let k = KClass { terms: b.terms.clone() };
            k.check(&td).map_err(|e| Error::Scenario(format!("bundle {}: {e}", b.name)))?;
            bundles.push((b.name.clone(), k));
        }
        if bundles.is_empty() {
            bundles.push(("O".to_string(), KClass::structure_sheaf(m)));
        }
        for xi in &self.monodromy {
            if xi.len() != m {
                return Err(Error::Scenario(format!("monodromy vector {xi:?} needs {m} entries")));
            }
        }
        let q_bound = parse_q(&self.truncation.q_bound)?;
        let residue_order = parse_q(&self.truncation.residue_order)?;
        if q_bound < Q::from_integer(0.into()) || residue_order < Q::from_integer(0.into()) {
            return Err(Error::Scenario("truncation bounds must be nonnegative".into()));
        }
        let nu = &self.numeric;
        if !(nu.tol > 0.0 && nu.osc_tol > 0.0 && nu.z > 0.0) || nu.q_values.iter().any(|x| *x <= 0.0) {
            return Err(Error::Scenario("numeric settings must be positive".into()));
        }
        let n = self.rank as i32;
        let z_window = self.truncation.z_window.unwrap_or((-(n + 4), n + 4));
        Ok(Model { scenario: self.clone(), td, ring, partition, alpha, bundles, q_bound, residue_order, z_window })
    }
}

/// Scenario files shipped with the crate.
pub const BUNDLED: [(&str, &str); 6] = [
    ("p1", include_str!("../scenarios/p1.toml")),
    ("p2", include_str!("../scenarios/p2.toml")),
    ("p1xp1", include_str!("../scenarios/p1xp1.toml")),
    ("wp112-style", include_str!("../scenarios/wp112-style.toml")),
    ("cubic-p2", include_str!("../scenarios/cubic-p2.toml")),
    ("quintic-p4", include_str!("../scenarios/quintic-p4.toml")),
];

pub fn bundled(name: &str) -> Result<Scenario> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Scenario(format!("no bundled scenario {name}")))
        .and_then(|(_, t)| Scenario::from_toml(t))
}
