//! In-process `fblog` runs against a scratch registry.

use std::path::{Path, PathBuf};

use feedbacklog::{cli, corpus, docformat};

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn fblog(registry: &Path, args: &[&str]) -> Outcome {
    let mut argv: Vec<String> = vec!["fblog".into(), "--registry".into(), registry.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut std::io::empty(), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Scratch workspace: an empty registry, the four fixture files, a corrupted
/// file, a lint-broken file and the annotated toy repo.
pub struct Workspace {
    pub dir: tempfile::TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let files = dir.path().join("files");
        std::fs::create_dir_all(&files).unwrap();
        for log in corpus::all() {
            std::fs::write(files.join(format!("{}.fblog.json", log.id)), docformat::serialize(&log)).unwrap();
        }
        // Chosen id outside the candidates: parses leniently, fails L3.
        let mut bad = corpus::image_recognition();
        bad.id = "image-corrupted".into();
        bad.records[0].chosen_update_ids.insert("U9".into());
        std::fs::write(files.join("corrupted.fblog.json"), docformat::serialize(&bad)).unwrap();
        let (_, blank) = super::broken::corpus().into_iter().next().unwrap();
        std::fs::write(files.join("blank-model.fblog.json"), docformat::serialize(&blank)).unwrap();
        super::toy_repo::write(&dir.path().join("repo"));
        Workspace { dir }
    }

    pub fn registry(&self) -> PathBuf {
        self.dir.path().join("registry")
    }

    pub fn file(&self, name: &str) -> String {
        self.dir.path().join("files").join(name).display().to_string()
    }

    pub fn path(&self, rel: &str) -> String {
        self.dir.path().join(rel).display().to_string()
    }

    pub fn run(&self, args: &[&str]) -> Outcome {
        fblog(&self.registry(), args)
    }
}

pub struct MatrixRow {
    pub label: &'static str,
    pub expected: i32,
    pub outcome: Outcome,
}

/// Twelve invocations covering every exit code. Runs in order: the first
/// one seeds the registry.
pub fn exit_code_matrix(ws: &Workspace) -> Vec<MatrixRow> {
    let img = ws.file("image-recognition.fblog.json");
    let corrupted = ws.file("corrupted.fblog.json");
    let blank = ws.file("blank-model.fblog.json");
    let src = ws.path("repo/src");
    let cases: Vec<(&'static str, i32, Vec<String>)> = vec![
        ("import clean fixture", 0, vec!["import".into(), img]),
        ("validate clean log", 0, vec!["validate".into(), "image-recognition".into()]),
        ("metric delta", 0, vec!["metric", "delta", "image-recognition", "robustness", "baseline:R2", "final"].into_iter().map(String::from).collect()),
        ("checklist on toy repo", 0, vec!["checklist".into(), "image-recognition".into(), "--scan-root".into(), src]),
        ("import corrupted file", 1, vec!["import".into(), corrupted]),
        ("validate broken file", 1, vec!["validate".into(), "--file".into(), blank]),
        ("edit finalized log", 1, vec!["record", "feedback", "image-recognition", "R1", "--text", "late"].into_iter().map(String::from).collect()),
        ("unknown subcommand", 2, vec!["frobnicate".into()]),
        ("unknown search filter", 2, vec!["search".into(), "colour:red".into()]),
        ("malformed reading context", 2, vec!["metric", "show", "image-recognition", "robustness", "midway"].into_iter().map(String::from).collect()),
        ("unknown log", 3, vec!["show".into(), "no-such-log".into()]),
        ("missing scan root", 3, vec!["scan".into(), ws.path("does/not/exist")]),
    ];
    cases
        .into_iter()
        .map(|(label, expected, args)| {
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            MatrixRow { label, expected, outcome: ws.run(&args) }
        })
        .collect()
}

/// `--json` invocations whose stdout must be a JSON document.
pub fn json_invocations(ws: &Workspace) -> Vec<(String, Outcome)> {
    let src = ws.path("repo/src");
    let cases: Vec<Vec<String>> = vec![
        vec!["list".into()],
        vec!["show".into(), "image-recognition".into()],
        vec!["validate".into(), "image-recognition".into()],
        vec!["search".into(), "clinician".into()],
        vec!["metric".into(), "delta".into(), "image-recognition".into(), "robustness".into(), "baseline:R2".into(), "final".into()],
        vec!["checklist".into(), "image-recognition".into(), "--scan-root".into(), src.clone()],
        vec!["scan".into(), src],
        vec!["show".into(), "no-such-log".into()],
    ];
    cases
        .into_iter()
        .map(|args| {
            let mut full = vec!["--json"];
            full.extend(args.iter().map(String::as_str));
            (args.join(" "), ws.run(&full))
        })
        .collect()
}
