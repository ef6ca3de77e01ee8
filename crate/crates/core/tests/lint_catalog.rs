mod common;

use std::collections::BTreeMap;

use feedbacklog::{corpus, lint, Severity};

#[test]
fn clean_base_has_no_findings() {
    assert!(lint::validate(&common::broken::clean_base()).is_empty());
}

#[test]
fn each_broken_log_fires_only_its_rule() {
    let mut fired: BTreeMap<String, usize> = BTreeMap::new();
    for (rule, log) in common::broken::corpus() {
        let findings = lint::validate(&log);
        let ids: Vec<&str> = findings.iter().map(|f| f.rule_id.as_str()).collect();
        assert_eq!(ids, [rule], "{rule}: {findings:#?}");
        *fired.entry(rule.to_string()).or_default() += findings.len();
    }
    assert_eq!(fired.len(), 10);
    assert!(fired.values().all(|&n| n == 1));
    for rule in lint::CATALOG.iter() {
        assert!(fired.contains_key(rule.id));
    }
}

#[test]
fn severities_follow_the_catalog() {
    for (rule, log) in common::broken::corpus() {
        let f = &lint::validate(&log)[0];
        let catalog = lint::CATALOG.iter().find(|r| r.id == rule).unwrap();
        assert_eq!(f.severity, catalog.severity, "{rule}");
    }
}

#[test]
fn unmet_target_is_a_warning() {
    let mut log = corpus::image_recognition_unfinalized();
    let findings = log
        .finalize(corpus::image_final_snapshot(feedbacklog::model::Decimal::from_int(48)))
        .unwrap();
    assert_eq!(findings.len(), 1);
    assert_eq!(findings[0].rule_id, "L8");
    assert_eq!(findings[0].severity, Severity::Warning);
}
