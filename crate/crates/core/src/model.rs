//! On-disk description of a fibration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cover::{CoverInvariants, CoverSpec};
use crate::fiber::FiberSpec;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

/// Numerical invariants of the total space `S`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub q: i64,
    pub p_g: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_sq: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h11: Option<i64>,
}

/// A relatively minimal fibration `f: S → B` with its singular fibers. The
/// fiber list is taken to be complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationModel {
    pub name: String,
    pub fiber_genus: i64,
    pub base_genus: i64,
    pub semistable: bool,
    pub trivial: bool,
    pub surface: SurfaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fibers: Vec<FiberSpec>,
}

impl FibrationModel {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        let model: FibrationModel = toml::from_str(text).map_err(|e| e.to_string())?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("fibration models always serialize")
    }

    /// Rejects `q < b` and block combinations that leave `c1²` or `c2`
    /// doubly defined.
    pub fn validate(&self) -> Result<(), String> {
        if self.surface.q < self.base_genus {
            return Err(format!(
                "surface.q: q ≥ b required (q = {}, base_genus = {})",
                self.surface.q, self.base_genus
            ));
        }
        if self.cover.is_some() && (self.surface.c1_sq.is_some() || self.surface.c2.is_some()) {
            return Err("with a [cover] block, `surface.c1_sq` and `surface.c2` come from the cover; remove them".into());
        }
        Ok(())
    }

    pub fn fiber_name(&self, index: usize) -> String {
        self.fibers[index].name.clone().unwrap_or_else(|| format!("fiber {}", index + 1))
    }
}

/// Replaces a cover block by the surface invariants it produces, after
/// checking `χ(O_S)` against `1 − q + p_g`.
pub fn assemble_fibration(
    model: &FibrationModel,
    cover: &CoverInvariants,
) -> Result<FibrationModel, crate::cover::CoverError> {
    let declared = 1 - model.surface.q + model.surface.p_g;
    if cover.chi_o != declared {
        return Err(crate::cover::CoverError::ChiMismatch { cover: cover.chi_o, declared });
    }
    let mut out = model.clone();
    out.cover = None;
    out.surface.c1_sq = Some(cover.k_sq);
    out.surface.c2 = Some(cover.e);
    Ok(out)
}

/// `path` itself if it exists, otherwise `path.toml`.
pub fn resolve_path(path: &Path) -> PathBuf {
    if path.exists() || path.extension().is_some() {
        return path.to_path_buf();
    }
    let mut with_ext = path.as_os_str().to_owned();
    with_ext.push(".toml");
    let candidate = PathBuf::from(with_ext);
    if candidate.exists() {
        candidate
    } else {
        path.to_path_buf()
    }
}

pub fn load(path: &Path) -> Result<FibrationModel, ModelError> {
    let path = resolve_path(path);
    let text = std::fs::read_to_string(&path).map_err(|source| ModelError::Io { path: path.clone(), source })?;
    let model: FibrationModel = toml::from_str(&text).map_err(|e| ModelError::Parse {
        path: path.clone(),
        message: e.to_string(),
    })?;
    model.validate().map_err(|message| ModelError::Invalid { path, message })?;
    Ok(model)
}
