//! Reading and writing the JSON files used by the CLI.
//!
//! A pmf file is `{"labels": [...], "probs": [...]}` with optional labels, or a bare array
//! of weights. Code files hold a serialized [`SimCode`].

use std::fs;
use std::path::Path;

use renyisim_core::{Pmf, SimCode};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::CliError;

fn read_json<T: DeserializeOwned>(path: &Path, what: &'static str) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { what, path: path.into(), source })
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum PmfFile {
    Full(Pmf),
    Bare(Vec<f64>),
}

pub fn read_pmf(path: &Path) -> Result<Pmf, CliError> {
    match read_json::<PmfFile>(path, "pmf")? {
        PmfFile::Full(p) => Ok(p),
        PmfFile::Bare(w) => Ok(Pmf::from_probs(&w)?),
    }
}

pub fn read_code(path: &Path) -> Result<SimCode, CliError> {
    read_json(path, "code")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n").map_err(|source| CliError::Write { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use renyisim_core::codes::{inverse_transform_code, Truncation};

    #[test]
    fn pmf_forms() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.json");
        fs::write(&a, r#"{"labels": ["x", "y"], "probs": [1, 3]}"#).unwrap();
        let p = read_pmf(&a).unwrap();
        assert_eq!(p.probs(), &[0.25, 0.75]);
        assert_eq!(p.labels()[1], "y");
        fs::write(&a, "[0.5, 0.5]").unwrap();
        assert_eq!(read_pmf(&a).unwrap().len(), 2);
        fs::write(&a, r#"{"probs": [-1, 2]}"#).unwrap();
        assert!(matches!(read_pmf(&a), Err(CliError::Parse { .. })));
        assert!(matches!(read_pmf(&dir.path().join("missing.json")), Err(CliError::Read { .. })));
    }

    #[test]
    fn code_round_trip() {
        let p = Pmf::bernoulli(0.3).unwrap();
        let q = Pmf::bernoulli(0.1).unwrap();
        let code = inverse_transform_code(&p, &q, 5, 3, Truncation::Typical { delta: 0.05 }).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("c.json");
        write_json(&f, &code).unwrap();
        assert_eq!(read_code(&f).unwrap(), code);
    }
}
