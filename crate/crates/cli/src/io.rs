use std::io::Read;
use std::path::Path;

use prelie::{Error, Result};
use serde_json::Value;

/// Reads a file, or stdin for `-`.
pub fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Io(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Io(format!("{path}: {e}")))
}

/// Parses a JSON document; parse errors name the file.
pub fn read_json(path: &str) -> Result<Value> {
    let text = read_input(path)?;
    prelie::json::parse_document(&text).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::parse(pos, format!("{path}: {msg}")),
        other => other,
    })
}
