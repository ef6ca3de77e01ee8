//! `FBLOG:` source annotations and the incorporation checklist.
//!
//! An annotation is plain text anywhere in a line, so it works inside any
//! comment syntax:
//!
//! ```text
//! # FBLOG: image-recognition#R2/U3 done
//! ```
//!
//! [`scan`] walks a tree and collects annotations; [`checklist`] reconciles
//! them against a log.

mod checklist;

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use globset::{Glob, GlobSet, GlobSetBuilder};
use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

pub use checklist::{checklist, Checklist, ChecklistFinding, ChecklistItem, FindingKind, ItemState};

pub const KEYWORD: &str = "FBLOG:";

/// Directories skipped unless the caller overrides `exclude_globs`.
pub const DEFAULT_EXCLUDED_DIRS: &[&str] = &[
    ".git", ".hg", ".svn", "target", "node_modules", "build", "dist", "__pycache__", ".venv",
    ".tox",
];

pub const BINARY_PROBE_BYTES: usize = 8 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Annotation {
    pub file_path: String,
    pub line_number: usize,
    pub log_id: String,
    pub record_id: String,
    pub update_id: String,
    pub done_flag: bool,
}

impl Annotation {
    pub fn reference(&self) -> String {
        format!("{}#{}/{}", self.log_id, self.record_id, self.update_id)
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub root_path: PathBuf,
    pub include_globs: Vec<String>,
    pub exclude_globs: Vec<String>,
    pub max_file_bytes: u64,
}

impl ScanConfig {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ScanConfig {
            root_path: root.into(),
            include_globs: vec!["**".into()],
            exclude_globs: DEFAULT_EXCLUDED_DIRS
                .iter()
                .flat_map(|d| [format!("**/{d}"), format!("**/{d}/**")])
                .collect(),
            max_file_bytes: 1024 * 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScanWarning {
    pub file_path: String,
    /// Zero when the warning concerns the whole file.
    pub line_number: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub annotations: Vec<Annotation>,
    pub warnings: Vec<ScanWarning>,
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("scan root {0} does not exist")]
    RootNotFound(PathBuf),
    #[error("invalid glob {pattern:?}: {message}")]
    BadGlob { pattern: String, message: String },
}

fn grammar() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"FBLOG: ([a-z0-9]+(?:-[a-z0-9]+)*)#(R[0-9]+)/(U[0-9]+)( done)?\b").unwrap()
    })
}

/// Outcome of matching one line against the annotation grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineMatch {
    None,
    Annotation {
        log_id: String,
        record_id: String,
        update_id: String,
        done: bool,
    },
    /// The keyword is present but the reference does not parse.
    Malformed,
}

pub fn parse_line(line: &str) -> LineMatch {
    if !line.contains(KEYWORD) {
        return LineMatch::None;
    }
    match grammar().captures(line) {
        Some(c) => LineMatch::Annotation {
            log_id: c[1].to_string(),
            record_id: c[2].to_string(),
            update_id: c[3].to_string(),
            done: c.get(4).is_some(),
        },
        None => LineMatch::Malformed,
    }
}

/// Annotations and warnings for one file's contents.
pub fn scan_text(file_path: &str, text: &str) -> ScanReport {
    let mut report = ScanReport::default();
    for (i, line) in text.lines().enumerate() {
        match parse_line(line) {
            LineMatch::None => {}
            LineMatch::Annotation { log_id, record_id, update_id, done } => {
                report.annotations.push(Annotation {
                    file_path: file_path.to_string(),
                    line_number: i + 1,
                    log_id,
                    record_id,
                    update_id,
                    done_flag: done,
                })
            }
            LineMatch::Malformed => report.warnings.push(ScanWarning {
                file_path: file_path.to_string(),
                line_number: i + 1,
                message: format!("malformed annotation: {}", line.trim()),
            }),
        }
    }
    report
}

fn glob_set(patterns: &[String]) -> Result<GlobSet, ScanError> {
    let mut builder = GlobSetBuilder::new();
    for p in patterns {
        let glob = Glob::new(p).map_err(|e| ScanError::BadGlob {
            pattern: p.clone(),
            message: e.kind().to_string(),
        })?;
        builder.add(glob);
    }
    builder.build().map_err(|e| ScanError::BadGlob {
        pattern: patterns.join(","),
        message: e.to_string(),
    })
}

fn relative(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

pub fn scan(config: &ScanConfig) -> Result<ScanReport, ScanError> {
    let root = &config.root_path;
    if !root.exists() {
        return Err(ScanError::RootNotFound(root.clone()));
    }
    let include = glob_set(&config.include_globs)?;
    let exclude = glob_set(&config.exclude_globs)?;

    let mut warnings = Vec::new();
    let mut files = Vec::new();
    let walker = WalkDir::new(root).follow_links(false).into_iter().filter_entry(|e| {
        e.depth() == 0 || !exclude.is_match(relative(root, e.path()))
    });
    for entry in walker {
        match entry {
            Ok(e) if e.file_type().is_file() => {
                let rel = relative(root, e.path());
                if include.is_match(&rel) {
                    files.push((rel, e.into_path()));
                }
            }
            Ok(_) => {}
            Err(err) => warnings.push(ScanWarning {
                file_path: err.path().map(|p| relative(root, p)).unwrap_or_default(),
                line_number: 0,
                message: err.to_string(),
            }),
        }
    }

    let per_file: Vec<ScanReport> = files
        .par_iter()
        .map(|(rel, path)| scan_file(rel, path, config.max_file_bytes))
        .collect();

    let mut report = ScanReport { annotations: Vec::new(), warnings };
    for r in per_file {
        report.annotations.extend(r.annotations);
        report.warnings.extend(r.warnings);
    }
    report.annotations.sort();
    report.warnings.sort();
    Ok(report)
}

fn scan_file(rel: &str, path: &Path, max_bytes: u64) -> ScanReport {
    let warn = |message: String| ScanReport {
        annotations: Vec::new(),
        warnings: vec![ScanWarning { file_path: rel.to_string(), line_number: 0, message }],
    };
    match std::fs::metadata(path) {
        Ok(m) if m.len() > max_bytes => {
            return warn(format!("skipped: {} bytes exceeds the {max_bytes} byte limit", m.len()))
        }
        Ok(_) => {}
        Err(e) => return warn(format!("unreadable: {e}")),
    }
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => return warn(format!("unreadable: {e}")),
    };
    if bytes[..bytes.len().min(BINARY_PROBE_BYTES)].contains(&0) {
        return ScanReport::default();
    }
    scan_text(rel, &String::from_utf8_lossy(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_accepts_and_rejects() {
        assert_eq!(
            parse_line("    # FBLOG: image-recognition#R2/U3 done"),
            LineMatch::Annotation {
                log_id: "image-recognition".into(),
                record_id: "R2".into(),
                update_id: "U3".into(),
                done: true,
            }
        );
        assert!(matches!(parse_line("x = 1  // FBLOG: a#R1/U10"), LineMatch::Annotation { done: false, .. }));
        assert_eq!(parse_line("// FBLOG: image-recognition#R2/X3"), LineMatch::Malformed);
        assert_eq!(parse_line("// FBLOG:image-recognition#R2/U3"), LineMatch::Malformed);
        assert_eq!(parse_line("// FBLOG: Image#R2/U3"), LineMatch::Malformed);
        assert_eq!(parse_line("// FBLOG: a#R2/U3x"), LineMatch::Malformed);
        assert_eq!(parse_line("// fblog: a#R2/U3"), LineMatch::None);
        assert!(matches!(parse_line("FBLOG: a#R2/U3 doneish"), LineMatch::Annotation { done: false, .. }));
    }

    #[test]
    fn scan_text_numbers_lines_from_one() {
        let r = scan_text("a.py", "x\n# FBLOG: log#R1/U1\n# FBLOG: nope\n");
        assert_eq!(r.annotations.len(), 1);
        assert_eq!(r.annotations[0].line_number, 2);
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.warnings[0].line_number, 3);
    }

    #[test]
    fn missing_root() {
        let err = scan(&ScanConfig::new("/definitely/not/here")).unwrap_err();
        assert!(matches!(err, ScanError::RootNotFound(_)));
    }

    #[test]
    fn skips_binary_excluded_and_oversized() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::create_dir_all(root.join(".git")).unwrap();
        std::fs::create_dir_all(root.join("src/target")).unwrap();
        std::fs::write(root.join(".git/HEAD"), "# FBLOG: a#R1/U1\n").unwrap();
        std::fs::write(root.join("src/target/gen.rs"), "// FBLOG: a#R1/U1\n").unwrap();
        std::fs::write(root.join("blob.bin"), b"\0\0FBLOG: a#R1/U1\n").unwrap();
        std::fs::write(root.join("big.txt"), "FBLOG: a#R1/U1\n".repeat(10)).unwrap();
        std::fs::write(root.join("src/main.rs"), "// FBLOG: a#R1/U2 done\n").unwrap();

        let mut config = ScanConfig::new(root);
        config.max_file_bytes = 64;
        let report = scan(&config).unwrap();
        assert_eq!(report.annotations.len(), 1);
        assert_eq!(report.annotations[0].file_path, "src/main.rs");
        assert!(report.annotations[0].done_flag);
        assert_eq!(report.warnings.len(), 1);
        assert_eq!(report.warnings[0].file_path, "big.txt");

        config.include_globs = vec!["**/*.py".into()];
        assert!(scan(&config).unwrap().annotations.is_empty());
    }

    #[test]
    fn empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(scan(&ScanConfig::new(dir.path())).unwrap(), ScanReport::default());
    }
}
