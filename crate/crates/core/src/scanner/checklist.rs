use serde::{Deserialize, Serialize};

use super::Annotation;
use crate::model::{id_number, FeedbackLog, UpdateStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemState {
    ImplementedInCode,
    Pending,
    NotApplicable,
}

impl ItemState {
    pub fn as_str(self) -> &'static str {
        match self {
            ItemState::ImplementedInCode => "implemented_in_code",
            ItemState::Pending => "pending",
            ItemState::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub record_id: String,
    pub update_id: String,
    pub which: String,
    pub state: ItemState,
    pub evidence: Vec<Annotation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    /// The record or update does not exist in the log.
    StaleReference,
    /// The update exists but was not chosen.
    UnchosenUpdate,
    /// The annotation names a different log.
    OtherLog,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistFinding {
    pub kind: FindingKind,
    pub annotation: Annotation,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checklist {
    pub log_id: String,
    pub items: Vec<ChecklistItem>,
    pub findings: Vec<ChecklistFinding>,
}

impl Checklist {
    pub fn item(&self, record_id: &str, update_id: &str) -> Option<&ChecklistItem> {
        self.items
            .iter()
            .find(|i| i.record_id == record_id && i.update_id == update_id)
    }
}

/// One item per chosen update, in record then update order. Every annotation
/// lands either as evidence on one item or as one finding.
pub fn checklist(log: &FeedbackLog, annotations: &[Annotation]) -> Checklist {
    let mut items = Vec::new();
    for record in &log.records {
        let mut chosen: Vec<&String> = record.chosen_update_ids.iter().collect();
        chosen.sort_by_key(|id| id_number(id, 'U').unwrap_or(u32::MAX));
        for uid in chosen {
            let Some(update) = record.update(uid) else { continue };
            let ecosystem_only = !update.kinds.iter().any(|k| k.is_model_side());
            items.push(ChecklistItem {
                record_id: record.id.clone(),
                update_id: uid.clone(),
                which: update.which.clone(),
                state: if ecosystem_only { ItemState::NotApplicable } else { ItemState::Pending },
                evidence: Vec::new(),
            });
        }
    }

    let mut findings = Vec::new();
    for a in annotations {
        let finding = |kind, message: String| ChecklistFinding { kind, annotation: a.clone(), message };
        if a.log_id != log.id {
            findings.push(finding(FindingKind::OtherLog, format!("{} refers to another log", a.reference())));
            continue;
        }
        if let Some(item) = items
            .iter_mut()
            .find(|i| i.record_id == a.record_id && i.update_id == a.update_id)
        {
            item.evidence.push(a.clone());
            item.state = ItemState::ImplementedInCode;
            continue;
        }
        match log.record(&a.record_id).and_then(|r| r.update(&a.update_id)) {
            Some(u) => {
                let status = match u.status {
                    UpdateStatus::Rejected => "rejected",
                    _ => "not chosen",
                };
                findings.push(finding(
                    FindingKind::UnchosenUpdate,
                    format!("{} annotates an update that was {status}", a.reference()),
                ));
            }
            None => findings.push(finding(
                FindingKind::StaleReference,
                format!("{} does not exist in the log", a.reference()),
            )),
        }
    }

    Checklist { log_id: log.id.clone(), items, findings }
}
