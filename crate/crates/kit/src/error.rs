use serde_json::{json, Value};
use thiserror::Error;

/// Errors surfaced by the kit. Input errors map to exit code 2, everything
/// else to 1.
#[derive(Debug, Error)]
pub enum KitError {
    #[error("{kind}: {message}")]
    Input { kind: &'static str, message: String },
    #[error("{0}")]
    Computation(String),
}

impl KitError {
    pub fn input(kind: &'static str, message: impl ToString) -> Self {
        KitError::Input {
            kind,
            message: message.to_string(),
        }
    }

    pub fn computation(message: impl ToString) -> Self {
        KitError::Computation(message.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            KitError::Input { .. } => 2,
            KitError::Computation(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            KitError::Input { kind, message } => (*kind, message.as_str()),
            KitError::Computation(m) => ("computation", m.as_str()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, KitError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| KitError::input("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| KitError::input("parse", format!("{}: {e}", path.display())))
}
