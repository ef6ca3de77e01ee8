use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::model::FeedbackLog;

/// Pseudonym assigned to one identifiable label. Only the log owner should
/// ever see these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudonymEntry {
    pub pseudonym: String,
    pub label: String,
    pub category: String,
}

/// Copy of `log` with identifiable stakeholders renamed `Stakeholder-<k>`
/// (k in order of first appearance) and their labels scrubbed from every
/// text field.
pub fn anonymize(log: &FeedbackLog) -> (FeedbackLog, Vec<PseudonymEntry>) {
    let mut mapping: Vec<PseudonymEntry> = Vec::new();
    let mut by_label: BTreeMap<String, String> = BTreeMap::new();
    for (_, _, s) in log.stakeholders() {
        if s.identifiable && !by_label.contains_key(&s.label) && !s.label.trim().is_empty() {
            let pseudonym = format!("Stakeholder-{}", mapping.len() + 1);
            by_label.insert(s.label.clone(), pseudonym.clone());
            mapping.push(PseudonymEntry {
                pseudonym,
                label: s.label.clone(),
                category: s.category.display_name(),
            });
        }
    }
    if mapping.is_empty() {
        return (log.clone(), mapping);
    }

    let mut out = log.clone();
    for record in &mut out.records {
        for s in &mut record.elicitation.stakeholders {
            if let Some(p) = by_label.get(&s.label) {
                s.label = p.clone();
                s.identifiable = false;
            }
        }
    }

    // Longest labels first so a label containing another is replaced whole.
    let mut labels: Vec<(&String, &String)> = by_label.iter().collect();
    labels.sort_by_key(|(l, _)| std::cmp::Reverse(l.len()));
    let mut tree = serde_json::to_value(&out).expect("log serializes");
    scrub(&mut tree, &labels);
    let out: FeedbackLog = serde_json::from_value(tree).expect("scrubbing keeps the shape");
    (out, mapping)
}

fn scrub(value: &mut Value, labels: &[(&String, &String)]) {
    match value {
        Value::String(s) => {
            for (label, pseudonym) in labels {
                if s.contains(label.as_str()) {
                    *s = s.replace(label.as_str(), pseudonym);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| scrub(v, labels)),
        Value::Object(map) => map.values_mut().for_each(|v| scrub(v, labels)),
        _ => {}
    }
}
