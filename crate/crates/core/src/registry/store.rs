//! Atomic file replacement: write a sibling temp file, fsync, rename.

use std::io::{self, Write};
use std::path::Path;
use std::sync::Arc;

/// Points at which a write can be interrupted by a [`FaultHook`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WriteStep {
    /// The temp file holds the full new contents but is not yet renamed.
    TempWritten,
    /// Part of the contents has been written to the temp file.
    PartiallyWritten,
}

/// Test hook: returning an error aborts the write at that step, leaving the
/// temp file behind the way a killed process would.
pub type FaultHook = Arc<dyn Fn(&Path, WriteStep) -> io::Result<()> + Send + Sync>;

pub(crate) fn write_atomic(path: &Path, bytes: &[u8], hook: Option<&FaultHook>) -> io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("file");
    let mut tmp = tempfile::Builder::new()
        .prefix(&format!(".{name}."))
        .suffix(".tmp")
        .tempfile_in(dir)?;
    let half = bytes.len() / 2;
    tmp.write_all(&bytes[..half])?;
    if let Some(hook) = hook {
        if let Err(e) = hook(path, WriteStep::PartiallyWritten) {
            let _ = tmp.keep();
            return Err(e);
        }
    }
    tmp.write_all(&bytes[half..])?;
    tmp.as_file().sync_all()?;
    if let Some(hook) = hook {
        if let Err(e) = hook(path, WriteStep::TempWritten) {
            let _ = tmp.keep();
            return Err(e);
        }
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
