//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

mod common;

use std::collections::BTreeSet;
use std::io;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::{Arc, Barrier};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use feedbacklog::model::{Comparator, Decimal, ReadingContext, TargetCheck};
use feedbacklog::registry::{
    anonymize, FaultHook, Registry, RegistryError, SearchIndex, SearchQuery, WriteStep,
};
use feedbacklog::scanner::{self, FindingKind, ScanConfig};
use feedbacklog::{corpus, docformat, lint, Severity};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn dec(s: &str) -> Decimal {
    s.parse().unwrap()
}

fn ctx(s: &str) -> ReadingContext {
    s.parse().unwrap()
}

fn fixture_fidelity() -> Check {
    let started = Instant::now();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut ids = Vec::new();
    for log in corpus::all() {
        let bytes = std::fs::read(dir.join(format!("{}.fblog.json", log.id))).map_err(|e| e.to_string())?;
        ensure!(bytes == docformat::serialize(&log), "{}: stored fixture differs from the encoding", log.id);
        let parsed = docformat::parse(&bytes).map_err(|e| format!("{}: {e}", log.id))?;
        ensure!(parsed == log, "{}: read-back differs", log.id);
        let errors = lint::error_count(&lint::validate(&parsed));
        ensure!(errors == 0, "{}: {errors} lint errors", log.id);
        ids.push(log.id);
    }
    ensure!(ids.len() == 4, "expected four fixtures");
    let img = docformat::parse(&std::fs::read(dir.join("image-recognition.fblog.json")).unwrap()).unwrap();
    let expected = [
        ("baseline:R2", "34"),
        ("after:R2/U1", "39"),
        ("after:R2/U2", "47"),
        ("after:R2/U3", "48"),
        ("combined:R2", "55"),
        ("final", "55"),
    ];
    for (at, value) in expected {
        let got = img.reading_at("robustness", &ctx(at)).map_err(|e| e.to_string())?;
        ensure!(got == dec(value), "robustness at {at}: {got} != {value}");
    }
    let target = img.metric_spec("robustness").and_then(|m| m.target).ok_or("no robustness target")?;
    ensure!(target.comparator == Comparator::Greater && target.value == dec("50"), "target {target}");
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("4 fixtures, 34/39/47/48/55, target >50, {elapsed:.1?}"))
}

fn metric_arithmetic() -> Check {
    let img = corpus::image_recognition();
    let delta = img.metric_delta("robustness", &ctx("baseline:R2"), &ctx("final")).map_err(|e| e.to_string())?;
    ensure!(delta == dec("21"), "delta {delta}");
    ensure!(delta.to_string() == "21", "delta renders as {delta}");
    let check = img.check_target("robustness", &ReadingContext::Final).map_err(|e| e.to_string())?;
    ensure!(check == TargetCheck::Pass, "final check {check:?}");

    let mut low = corpus::image_recognition_unfinalized();
    let findings = low.finalize(corpus::image_final_snapshot(dec("48"))).map_err(|e| e.to_string())?;
    let check = low.check_target("robustness", &ReadingContext::Final).map_err(|e| e.to_string())?;
    ensure!(check == TargetCheck::Fail, "48 should fail, got {check:?}");
    ensure!(
        findings.iter().any(|f| f.rule_id == "L8" && f.severity == Severity::Warning),
        "no L8 warning for 48"
    );
    Ok("delta +21, final passes, 48 fails".into())
}

fn round_trip() -> Check {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(2023);
    for i in 0..1000 {
        let log = common::random_log(&mut rng);
        let bytes = docformat::serialize(&log);
        let back = docformat::parse(&bytes).map_err(|e| format!("log {i}: {e}"))?;
        ensure!(back == log, "log {i} changed on round trip");
        ensure!(docformat::serialize(&back) == bytes, "log {i} re-serializes differently");
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("1000 random logs, {elapsed:.1?}"))
}

fn lint_catalog() -> Check {
    let mut fired = BTreeSet::new();
    for (rule, log) in common::broken::corpus() {
        let findings = lint::validate(&log);
        let ids: Vec<&str> = findings.iter().map(|f| f.rule_id.as_str()).collect();
        ensure!(ids == [rule], "{rule} log fired {ids:?}");
        fired.insert(rule);
    }
    ensure!(fired.len() == 10, "rules fired: {fired:?}");
    for log in corpus::all() {
        let severe: Vec<_> = lint::validate(&log).into_iter().filter(|f| f.severity != Severity::Info).collect();
        ensure!(severe.is_empty(), "{}: {severe:?}", log.id);
    }
    Ok("10 broken logs, one rule each; fixtures info-only".into())
}

fn scanner_oracle() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    common::toy_repo::write(dir.path());
    let files = walkdir_count(dir.path());
    ensure!(files >= 20, "toy repo has {files} files");

    let report = scanner::scan(&ScanConfig::new(dir.path())).map_err(|e| e.to_string())?;
    let got: Vec<common::oracle::RawAnnotation> = report
        .annotations
        .iter()
        .map(|a| (a.file_path.clone(), a.line_number, a.log_id.clone(), a.record_id.clone(), a.update_id.clone(), a.done_flag))
        .collect();
    let expected = common::oracle::scan(dir.path());
    ensure!(got == expected, "scan differs from oracle:\n{got:?}\n{expected:?}");
    ensure!(got.len() >= 5, "{} annotations", got.len());

    let log = corpus::image_recognition();
    let checklist = scanner::checklist(&log, &report.annotations);
    let (items, kinds) = common::oracle::checklist(&log, &expected);
    let got_items: Vec<_> = checklist
        .items
        .iter()
        .map(|i| (i.record_id.clone(), i.update_id.clone(), i.state.as_str(), i.evidence.len()))
        .collect();
    ensure!(got_items == items, "checklist differs from oracle:\n{got_items:?}\n{items:?}");
    let stale = checklist.findings.iter().filter(|f| f.kind == FindingKind::StaleReference).count();
    let unchosen = checklist.findings.iter().filter(|f| f.kind == FindingKind::UnchosenUpdate).count();
    ensure!(stale == 1 && unchosen == 1, "stale {stale}, unchosen {unchosen}");
    ensure!(kinds.len() == checklist.findings.len(), "finding count differs from oracle");
    let chosen: usize = log.records.iter().map(|r| r.chosen_update_ids.len()).sum();
    ensure!(checklist.items.len() == chosen, "{} items for {chosen} chosen updates", checklist.items.len());
    Ok(format!("{files} files, {} annotations, {} items", got.len(), checklist.items.len()))
}

fn walkdir_count(root: &Path) -> usize {
    let mut n = 0;
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                n += 1;
            }
        }
    }
    n
}

fn search_oracle() -> Check {
    let logs = corpus::all();
    let index = SearchIndex::build(logs.clone());
    let run = |q: &str| -> Result<Vec<common::oracle::HitKey>, String> {
        let query: SearchQuery = q.parse().map_err(|e| format!("{q:?}: {e}"))?;
        Ok(index
            .search(&query)
            .into_iter()
            .map(|h| (h.log_id, h.record_id, h.update_id, h.matched_field))
            .collect())
    };
    let mut rng = StdRng::seed_from_u64(25);
    let (mut total, mut answered) = (0, 0);
    for _ in 0..25 {
        let q = common::random_query(&mut rng, &logs);
        let got = run(&q)?;
        ensure!(got == common::oracle::search(&logs, &q), "query {q:?} differs from oracle");
        total += got.len();
        answered += usize::from(!got.is_empty());
    }
    ensure!(answered >= 13, "only {answered} of 25 queries had hits");
    let hits = run("clinician")?;
    ensure!(hits == common::oracle::search(&logs, "clinician"), "clinician differs from oracle");
    let records: BTreeSet<_> = hits
        .iter()
        .filter(|h| h.0 == "asthma-conversational-agent")
        .filter_map(|h| h.1.clone())
        .collect();
    ensure!(records.contains("R1") && records.contains("R2"), "clinician hit asthma records {records:?}");
    Ok(format!("25 random queries, {answered} with hits ({total} total), clinician -> asthma R1, R2"))
}

fn registry_safety() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let reg = Arc::new(Registry::open(dir.path()).map_err(|e| e.to_string())?);
    let log = corpus::image_recognition();
    let owner = log.owner.id.clone();
    reg.put(&log, &owner).map_err(|e| e.to_string())?;
    reg.grant(&log.id, feedbacklog::model::PersonRef::new("second-editor", "Second"), feedbacklog::registry::Role::Editor, &owner)
        .map_err(|e| e.to_string())?;

    let barrier = Arc::new(Barrier::new(2));
    let handles: Vec<_> = [owner.clone(), "second-editor".to_string()]
        .into_iter()
        .enumerate()
        .map(|(i, actor)| {
            let (reg, barrier) = (reg.clone(), barrier.clone());
            let mut edit = log.clone();
            edit.revision += 1;
            edit.title = format!("editor {i}");
            std::thread::spawn(move || {
                barrier.wait();
                reg.put(&edit, &actor)
            })
        })
        .collect();
    let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    let ok = results.iter().filter(|r| r.is_ok()).count();
    let stale = results.iter().filter(|r| matches!(r, Err(RegistryError::StaleRevision { .. }))).count();
    ensure!(ok == 1 && stale == 1, "results {results:?}");

    let path = dir.path().join("logs").join("image-recognition.fblog.json");
    for step in [WriteStep::PartiallyWritten, WriteStep::TempWritten] {
        let before = std::fs::read(&path).map_err(|e| e.to_string())?;
        let hook: FaultHook = Arc::new(move |_, at| if at == step { Err(io::Error::other("crash")) } else { Ok(()) });
        reg.set_fault_hook(Some(hook));
        let mut next = docformat::parse(&before).map_err(|e| e.to_string())?;
        next.revision += 1;
        next.title = "lost".into();
        ensure!(reg.put(&next, &owner).is_err(), "write survived an injected crash at {step:?}");
        reg.set_fault_hook(None);
        let after = std::fs::read(&path).map_err(|e| e.to_string())?;
        ensure!(after == before, "stored bytes changed after crash at {step:?}");
        docformat::parse(&after).map_err(|e| format!("re-parse after {step:?}: {e}"))?;
        Registry::open(dir.path()).and_then(|r| r.get(&log.id, &owner)).map_err(|e| e.to_string())?;
    }
    Ok("one success + one StaleRevision; crashes at both write steps leave the log intact".into())
}

fn anonymization() -> Check {
    let log = corpus::image_recognition_identified();
    let labels: Vec<String> = log
        .stakeholders()
        .filter(|(_, _, s)| s.identifiable)
        .map(|(_, _, s)| s.label.clone())
        .collect();
    ensure!(!labels.is_empty(), "variant has no identifiable stakeholders");
    let (anon, mapping) = anonymize(&log);
    let text = String::from_utf8(docformat::serialize(&anon)).map_err(|e| e.to_string())?;
    for label in &labels {
        let hits = text.matches(label.as_str()).count();
        ensure!(hits == 0, "{label:?} appears {hits} times");
    }
    ensure!(mapping.len() == labels.len(), "mapping has {} entries", mapping.len());
    let (again, _) = anonymize(&anon);
    ensure!(docformat::serialize(&again) == docformat::serialize(&anon), "not idempotent");
    Ok(format!("{} labels scrubbed, idempotent", labels.len()))
}

fn cli_contract() -> Check {
    let ws = common::cli::Workspace::new();
    let rows = common::cli::exit_code_matrix(&ws);
    ensure!(rows.len() == 12, "{} invocations", rows.len());
    for row in &rows {
        ensure!(
            row.outcome.code == row.expected,
            "{}: exit {} (expected {})\n{}{}",
            row.label,
            row.outcome.code,
            row.expected,
            row.outcome.stdout,
            row.outcome.stderr
        );
    }
    let codes: BTreeSet<i32> = rows.iter().map(|r| r.expected).collect();
    ensure!(codes == BTreeSet::from([0, 1, 2, 3]), "codes covered {codes:?}");
    let json = common::cli::json_invocations(&ws);
    for (label, out) in &json {
        serde_json::from_str::<serde_json::Value>(&out.stdout).map_err(|e| format!("--json {label}: {e}"))?;
    }
    Ok(format!("12 invocations over exit codes 0-3, {} --json outputs re-parse", json.len()))
}

fn main() {
    let checks: [(&str, Criterion); 9] = [
        ("fixture fidelity", fixture_fidelity),
        ("metric arithmetic", metric_arithmetic),
        ("round-trip property", round_trip),
        ("lint catalog", lint_catalog),
        ("scanner oracle", scanner_oracle),
        ("search oracle", search_oracle),
        ("registry safety", registry_safety),
        ("anonymization", anonymization),
        ("cli contract", cli_contract),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
