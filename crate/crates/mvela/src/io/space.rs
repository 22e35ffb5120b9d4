//! Search spaces as JSON:
//! `{"name", "variables": [{"id", "kind", "lower", "upper", "categories",
//! "condition": {"parent", "values"}}]}`.

use std::path::Path;

use mvela_core::space::SearchSpace;

use super::{read_bytes, write_bytes};
use crate::{Error, Result};

/// Reads and validates a space. Every problem is a configuration error.
pub fn read_space(path: &Path) -> Result<SearchSpace> {
    let bytes = read_bytes(path)?;
    let space: SearchSpace = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Config { path: path.to_path_buf(), message: e.to_string() })?;
    let violations = space.validate();
    if !violations.is_empty() {
        let message =
            violations.iter().map(|v| format!("{}: {}", v.kind.as_str(), v.message)).collect::<Vec<_>>().join("; ");
        return Err(Error::Config { path: path.to_path_buf(), message });
    }
    Ok(space)
}

pub fn write_space(path: &Path, space: &SearchSpace) -> Result<()> {
    let mut json = serde_json::to_vec_pretty(space).expect("search spaces serialize");
    json.push(b'\n');
    write_bytes(path, &json)
}
