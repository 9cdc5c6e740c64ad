use std::collections::BTreeMap;
use std::path::Path;

use rgfp::certificate::ElevationCap;
use rgfp::model_file::{parse_model_file, serialize_model, ModelFile};
use rgfp::ExactScalar;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const ELEVATION_ENV: &str = "RGFP_MAX_ELEVATION";

pub struct LoadedModel {
    pub file: ModelFile,
    /// SHA-256 of the canonical serialization, so formatting and comments
    /// do not change it.
    pub digest: String,
}

pub fn parse_params(raw: &[String]) -> Result<BTreeMap<String, ExactScalar>, CliError> {
    let mut out = BTreeMap::new();
    for r in raw {
        let (k, v) = r
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param expects NAME=VALUE, got `{r}`")))?;
        let value: ExactScalar = v
            .parse()
            .map_err(|e| CliError::Usage(format!("--param {k}: {e}")))?;
        if out.insert(k.trim().to_string(), value).is_some() {
            return Err(CliError::Usage(format!("--param {k} given twice")));
        }
    }
    Ok(out)
}

pub fn load_model(path: &Path, params: &[String]) -> Result<LoadedModel, CliError> {
    let overrides = parse_params(params)?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Unreadable(format!("{}: {e}", path.display())))?;
    let file = parse_model_file(&text, &overrides)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let digest = format!(
        "{:x}",
        Sha256::digest(serialize_model(&file.model).as_bytes())
    );
    Ok(LoadedModel { file, digest })
}

/// The flag wins over the environment; neither means the default margin.
pub fn elevation_cap(flag: Option<u32>) -> Result<ElevationCap, CliError> {
    if let Some(n) = flag {
        return Ok(ElevationCap::Fixed(n));
    }
    match std::env::var(ELEVATION_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .map(ElevationCap::Fixed)
            .map_err(|_| {
                CliError::Usage(format!(
                    "{ELEVATION_ENV} must be a non-negative integer, got `{v}`"
                ))
            }),
        Err(_) => Ok(ElevationCap::Default),
    }
}

pub fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("{what} expects X,Y with finite numbers, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    Ok((a, b))
}
