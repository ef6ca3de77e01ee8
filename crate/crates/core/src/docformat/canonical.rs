use serde_json::Value;

use super::FormatError;
use crate::model::{structure, FeedbackLog, SCHEMA_VERSION};

/// Forward migrations, indexed by the version they upgrade from. Each step
/// rewrites the raw document tree of version `n` into version `n + 1`.
type Migration = fn(Value) -> Value;

const MIGRATIONS: &[(u32, Migration)] = &[];

/// Parses and checks structural invariants.
pub fn parse(bytes: &[u8]) -> Result<FeedbackLog, FormatError> {
    let log = parse_unchecked(bytes)?;
    if let Some(v) = structure::check(&log).into_iter().next() {
        return Err(FormatError::SchemaViolation {
            path: v.path,
            message: v.message,
        });
    }
    Ok(log)
}

/// Parses without the structural invariant check, for tools that want to
/// report problems through the lint catalog instead of failing outright.
pub fn parse_unchecked(bytes: &[u8]) -> Result<FeedbackLog, FormatError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let (line, column) = line_col(bytes, e.valid_up_to());
        FormatError::Syntax {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    let tree: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let tree = migrate(tree)?;
    serde_path_to_error::deserialize(tree).map_err(|e| FormatError::SchemaViolation {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn migrate(mut tree: Value) -> Result<Value, FormatError> {
    let Some(object) = tree.as_object() else {
        return Err(FormatError::SchemaViolation {
            path: ".".into(),
            message: "document root must be an object".into(),
        });
    };
    let version = object
        .get("schema_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| FormatError::SchemaViolation {
            path: "schema_version".into(),
            message: "missing or not a positive integer".into(),
        })?;
    if version == 0 || version > u64::from(SCHEMA_VERSION) {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let mut version = version as u32;
    while version < SCHEMA_VERSION {
        let step = MIGRATIONS
            .iter()
            .find(|(from, _)| *from == version)
            .map(|(_, f)| *f)
            .ok_or(FormatError::UnsupportedVersion(u64::from(version)))?;
        tree = step(tree);
        version += 1;
        tree["schema_version"] = Value::from(version);
    }
    Ok(tree)
}

/// Canonical bytes: sorted keys, two-space indentation, trailing newline.
pub fn serialize(log: &FeedbackLog) -> Vec<u8> {
    to_canonical(log).into_bytes()
}

/// Canonical text for any serializable value. Objects go through
/// `serde_json::Value`, whose maps are ordered by key.
pub fn to_canonical<T: serde::Serialize>(value: &T) -> String {
    let tree = serde_json::to_value(value).expect("model types always serialize");
    let mut text = serde_json::to_string_pretty(&tree).expect("value serializes");
    text.push('\n');
    text
}

/// Re-emits any JSON document in canonical form.
pub fn canonicalize(bytes: &[u8]) -> Result<Vec<u8>, FormatError> {
    let tree: Value = serde_json::from_slice(bytes).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(to_canonical(&tree).into_bytes())
}

fn line_col(bytes: &[u8], offset: usize) -> (usize, usize) {
    let before = &bytes[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = offset - before.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}
