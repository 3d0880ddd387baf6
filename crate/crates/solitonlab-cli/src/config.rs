use serde::de::DeserializeOwned;
use std::path::Path;

/// Load a JSON config file into a typed, unknown-key-rejecting struct, then
/// let the caller apply flag overrides (flags win).
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, String> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", p.display()))
        }
    }
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad number `{v}`: {e}")))
        .collect()
}
