//! System specification files: a single JSON object describing the system
//! kind and its parameters. Custom modifications carry their coefficients
//! as `"p/q"` strings so exact values survive ingestion.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use stark_toric::{
    build_custom, build_system, BivariatePoly, PolynomialPotential, PotentialKind, SystemParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecKind {
    Kepler,
    Stark,
    FrozenHill,
    Generalized,
    Custom,
}

impl std::fmt::Display for SpecKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpecKind::Kepler => write!(f, "kepler"),
            SpecKind::Stark => write!(f, "stark"),
            SpecKind::FrozenHill => write!(f, "frozen-hill"),
            SpecKind::Generalized => write!(f, "generalized"),
            SpecKind::Custom => write!(f, "custom"),
        }
    }
}

/// One monomial of a custom modification `G`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CustomTerm {
    /// Exact rational coefficient, e.g. `"3"` or `"-1/4"`.
    pub coefficient: String,
    pub e1: u32,
    pub e2: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub kind: SpecKind,
    pub m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub f: f64,
    #[serde(default, rename = "custom_G", skip_serializing_if = "Option::is_none")]
    pub custom_g: Option<Vec<CustomTerm>>,
}

impl SystemSpec {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read spec file {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid spec file: {e}"))
    }

    pub fn to_potential(&self) -> Result<PolynomialPotential, String> {
        match self.kind {
            SpecKind::Custom => {
                let terms = self
                    .custom_g
                    .as_ref()
                    .ok_or("custom kind requires the custom_G term list")?;
                let mut g = BivariatePoly::zero();
                for t in terms {
                    let c = BigRational::from_str(&t.coefficient).map_err(|e| {
                        format!("invalid rational coefficient {:?}: {e}", t.coefficient)
                    })?;
                    g.add_term(t.e1, t.e2, c);
                }
                build_custom(self.m, self.f, g).map_err(|e| e.to_string())
            }
            kind => {
                let kind = match kind {
                    SpecKind::Kepler => PotentialKind::Kepler,
                    SpecKind::Stark => PotentialKind::Stark,
                    SpecKind::FrozenHill => PotentialKind::FrozenHill,
                    SpecKind::Generalized => {
                        PotentialKind::Generalized(self.n.ok_or("generalized kind requires n")?)
                    }
                    SpecKind::Custom => unreachable!(),
                };
                build_system(
                    kind,
                    &SystemParams { m: self.m, g: self.g, n: self.n, f: self.f },
                )
                .map_err(|e| e.to_string())
            }
        }
    }
}
