//! JSON configurations and the bundled examples.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bending::{BendingData, SplittingCase, WordSpec};
use crate::classify::SignedPoint;
use crate::cusp::{LatticeCell, ModelKind};
use crate::error::Error;
use crate::projective::ProjectiveMap;

/// Failure to ingest a configuration.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(#[from] Error),
    #[error("unknown bundled configuration {0:?}")]
    UnknownBundle(String),
}

/// Parses JSON, reporting the path of the offending field.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Square matrix stored as rows.
pub type Rows = Vec<Vec<f64>>;

pub fn matrix_from_rows(rows: &Rows) -> Result<DMatrix<f64>, Error> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Dimension { expected: n, got: bad.len() });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn rows_from_matrix(m: &DMatrix<f64>) -> Rows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Peripheral data of one cusp as words in the generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspConfig {
    pub name: String,
    pub gamma: WordSpec,
    pub delta: Vec<WordSpec>,
    #[serde(default)]
    pub signed_points: Vec<SignedPoint>,
}

/// Bending data with optional cusps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BendingConfig {
    pub case: SplittingCase,
    pub dimension: usize,
    pub generators: BTreeMap<String, Rows>,
    pub delta: Vec<WordSpec>,
    #[serde(default)]
    pub relators: Vec<WordSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_letter: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub second_factor: Vec<String>,
    #[serde(default)]
    pub cusps: Vec<CuspConfig>,
}

impl BendingConfig {
    pub fn to_data(&self) -> Result<BendingData<f64>, Error> {
        let generators = self
            .generators
            .iter()
            .map(|(k, rows)| Ok((k.clone(), ProjectiveMap::new(matrix_from_rows(rows)?)?)))
            .collect::<Result<BTreeMap<_, _>, Error>>()?;
        let words = |ws: &[WordSpec]| ws.iter().map(WordSpec::to_word).collect::<Result<Vec<_>, _>>();
        let data = BendingData {
            case: self.case,
            dimension: self.dimension,
            generators,
            delta: words(&self.delta)?,
            relators: words(&self.relators)?,
            stable_letter: self.stable_letter.clone(),
            second_factor: self.second_factor.clone(),
        };
        data.validate()?;
        Ok(data)
    }
}

/// Lattice cell in the group parameters `(v)` or `(log y, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    pub origin: Vec<f64>,
    /// Columns of this matrix, listed as rows, are the lattice basis vectors.
    pub basis: Rows,
}

impl CellConfig {
    pub fn to_cell(&self) -> Result<LatticeCell<f64>, Error> {
        let b = matrix_from_rows(&self.basis)?;
        LatticeCell::new(DVector::from_vec(self.origin.clone()), b)
    }
}

/// Shell schedule of a cusp volume run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeConfig {
    pub model: ModelKind,
    pub dimension: usize,
    pub cell: CellConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_shell: Option<f64>,
    pub shells: usize,
    pub samples: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<usize>,
}

/// Sandwich of a periodic perturbation of a model horoball of amplitude `amplitude · t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SandwichConfig {
    pub model: ModelKind,
    pub dimension: usize,
    pub cell: CellConfig,
    pub amplitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Translation `u` and threshold `ε` for the invariance level.
    pub translation: Vec<f64>,
    pub epsilon: f64,
}

/// Two-dimensional figure request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlotConfig {
    /// The slice `v = 0` of the bent model with horosphere levels.
    BentSlice { dimension: usize, levels: Vec<f64> },
    /// The plane section through a boundary point.
    OmegaSection { point: Vec<f64>, levels: Vec<f64> },
    /// Developing map of the affine circle.
    AffineCircle { signed_points: Vec<SignedPoint> },
}

/// Names of the bundled configurations.
pub const BUNDLED: &[&str] = &[
    "whitehead",
    "amalgam",
    "degenerate_p",
    "hnn_d4",
    "volume_bent_d3",
    "volume_bent_d2",
    "volume_standard_d3",
    "sandwich_bent_d3",
    "plot_bent_slice",
    "plot_omega_section",
    "plot_affine_circle",
];

/// Text of a bundled configuration.
pub fn bundled(name: &str) -> Result<&'static str, ConfigError> {
    Ok(match name {
        "whitehead" => include_str!("../data/whitehead.json"),
        "amalgam" => include_str!("../data/amalgam.json"),
        "degenerate_p" => include_str!("../data/degenerate_p.json"),
        "hnn_d4" => include_str!("../data/hnn_d4.json"),
        "volume_bent_d3" => include_str!("../data/volume_bent_d3.json"),
        "volume_bent_d2" => include_str!("../data/volume_bent_d2.json"),
        "volume_standard_d3" => include_str!("../data/volume_standard_d3.json"),
        "sandwich_bent_d3" => include_str!("../data/sandwich_bent_d3.json"),
        "plot_bent_slice" => include_str!("../data/plot_bent_slice.json"),
        "plot_omega_section" => include_str!("../data/plot_omega_section.json"),
        "plot_affine_circle" => include_str!("../data/plot_affine_circle.json"),
        _ => return Err(ConfigError::UnknownBundle(name.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_a_path() {
        let err = parse_json::<BendingConfig>(r#"{"case":"hnn","dimension":"three"}"#).unwrap_err();
        match err {
            ConfigError::Parse { path, .. } => assert_eq!(path, "dimension"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn bundled_configs_parse() {
        for name in BUNDLED {
            let text = bundled(name).unwrap();
            let ok = if name.starts_with("volume") {
                parse_json::<VolumeConfig>(text).is_ok()
            } else if name.starts_with("sandwich") {
                parse_json::<SandwichConfig>(text).is_ok()
            } else if name.starts_with("plot") {
                parse_json::<PlotConfig>(text).is_ok()
            } else {
                parse_json::<BendingConfig>(text).and_then(|c| Ok(c.to_data()?)).is_ok()
            };
            assert!(ok, "{name}");
        }
    }
}
