mod common;

use feedbacklog::corpus;
use feedbacklog::scanner::{self, FindingKind, ItemState, ScanConfig};

fn as_raw(a: &scanner::Annotation) -> common::oracle::RawAnnotation {
    (a.file_path.clone(), a.line_number, a.log_id.clone(), a.record_id.clone(), a.update_id.clone(), a.done_flag)
}

#[test]
fn scan_matches_line_oracle() {
    let dir = tempfile::tempdir().unwrap();
    common::toy_repo::write(dir.path());
    let report = scanner::scan(&ScanConfig::new(dir.path())).unwrap();
    let got: Vec<_> = report.annotations.iter().map(as_raw).collect();
    assert_eq!(got, common::oracle::scan(dir.path()));
    assert_eq!(got.len(), 5);
    assert_eq!(report.warnings.len(), 1);
    assert_eq!(report.warnings[0].file_path, "src/eval.py");
    // Rescanning is deterministic.
    assert_eq!(scanner::scan(&ScanConfig::new(dir.path())).unwrap(), report);
}

#[test]
fn checklist_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    common::toy_repo::write(dir.path());
    let log = corpus::image_recognition();
    let report = scanner::scan(&ScanConfig::new(dir.path())).unwrap();
    let checklist = scanner::checklist(&log, &report.annotations);
    let (items, findings) = common::oracle::checklist(&log, &common::oracle::scan(dir.path()));
    let got: Vec<_> = checklist
        .items
        .iter()
        .map(|i| (i.record_id.clone(), i.update_id.clone(), i.state.as_str(), i.evidence.len()))
        .collect();
    assert_eq!(got, items);
    let kinds: Vec<&str> = checklist
        .findings
        .iter()
        .map(|f| match f.kind {
            FindingKind::StaleReference => "stale_reference",
            FindingKind::UnchosenUpdate => "unchosen_update",
            FindingKind::OtherLog => "other_log",
        })
        .collect();
    assert_eq!(kinds, findings);

    let chosen: usize = log.records.iter().map(|r| r.chosen_update_ids.len()).sum();
    assert_eq!(checklist.items.len(), chosen);
    let evidence: usize = checklist.items.iter().map(|i| i.evidence.len()).sum();
    assert_eq!(evidence + checklist.findings.len(), report.annotations.len());
    assert_eq!(checklist.item("R2", "U3").unwrap().evidence.len(), 2);
}

#[test]
fn src_subtree_marks_only_cutmix() {
    let dir = tempfile::tempdir().unwrap();
    common::toy_repo::write(dir.path());
    let report = scanner::scan(&ScanConfig::new(dir.path().join("src"))).unwrap();
    let checklist = scanner::checklist(&corpus::image_recognition(), &report.annotations);
    for item in &checklist.items {
        let expected = match (item.record_id.as_str(), item.update_id.as_str()) {
            ("R2", "U3") => ItemState::ImplementedInCode,
            ("R1", "U2") => ItemState::NotApplicable,
            _ => ItemState::Pending,
        };
        assert_eq!(item.state, expected, "{}/{}", item.record_id, item.update_id);
    }
    assert_eq!(checklist.item("R2", "U3").unwrap().evidence.len(), 1);
}

#[test]
fn adding_annotations_is_monotone() {
    let log = corpus::image_recognition();
    let dir = tempfile::tempdir().unwrap();
    common::toy_repo::write(dir.path());
    let all = scanner::scan(&ScanConfig::new(dir.path())).unwrap().annotations;
    for n in 0..all.len() {
        let before = scanner::checklist(&log, &all[..n]);
        let after = scanner::checklist(&log, &all[..n + 1]);
        for (b, a) in before.items.iter().zip(&after.items) {
            if b.state == ItemState::ImplementedInCode {
                assert_eq!(a.state, ItemState::ImplementedInCode);
            }
        }
    }
}
