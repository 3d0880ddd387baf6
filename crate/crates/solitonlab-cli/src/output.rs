use std::io::Write;
use std::path::{Path, PathBuf};

/// Default layout out/<command>/<timestamp>/; an explicit --out wins.
pub fn resolve_out_dir(explicit: Option<PathBuf>, command: &str) -> Result<PathBuf, String> {
    let dir = match explicit {
        Some(d) => d,
        None => {
            let stamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_err(|e| e.to_string())?;
            PathBuf::from("out").join(command).join(format!("{}", stamp.as_millis()))
        }
    };
    std::fs::create_dir_all(&dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    Ok(dir)
}

/// 17 significant digits, stable across runs.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(header: &str) -> Self {
        CsvWriter { buf: format!("{header}\n") }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn write(self, path: &Path) -> Result<(), String> {
        write_text(path, &self.buf)
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), String> {
    let mut f = std::fs::File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    f.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

/// Echo the effective configuration for provenance.
pub fn write_config(dir: &Path, cfg: &impl serde::Serialize) -> Result<(), String> {
    let text = serde_json::to_string_pretty(cfg).map_err(|e| e.to_string())?;
    write_text(&dir.join("config.json"), &(text + "\n"))
}
