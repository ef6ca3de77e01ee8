use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{id_number, FeedbackLog, PipelineSnapshot, PipelineStage, Record, UpdateEntry};

/// Lowercased alphanumeric runs.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKey {
    Stakeholder,
    Category,
    Kind,
    Stage,
    Metric,
    Status,
    Owner,
}

/// How deep in a log a filter applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Log,
    Record,
    Update,
}

impl FilterKey {
    pub const ALL: [FilterKey; 7] = [
        FilterKey::Stakeholder,
        FilterKey::Category,
        FilterKey::Kind,
        FilterKey::Stage,
        FilterKey::Metric,
        FilterKey::Status,
        FilterKey::Owner,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FilterKey::Stakeholder => "stakeholder",
            FilterKey::Category => "category",
            FilterKey::Kind => "kind",
            FilterKey::Stage => "stage",
            FilterKey::Metric => "metric",
            FilterKey::Status => "status",
            FilterKey::Owner => "owner",
        }
    }

    fn level(self) -> Level {
        match self {
            FilterKey::Metric | FilterKey::Status | FilterKey::Owner => Level::Log,
            FilterKey::Stakeholder | FilterKey::Category => Level::Record,
            FilterKey::Kind | FilterKey::Stage => Level::Update,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchQuery {
    pub terms: Vec<String>,
    pub filters: Vec<(FilterKey, String)>,
}

impl FromStr for SearchQuery {
    type Err = String;

    /// `free text key:value ...`. A word is a filter when the part before
    /// its first colon is purely alphabetic; that part must be a known key.
    fn from_str(q: &str) -> Result<Self, String> {
        let mut terms = Vec::new();
        let mut filters = Vec::new();
        for word in q.split_whitespace() {
            match word.split_once(':') {
                Some((key, value)) if !key.is_empty() && key.chars().all(|c| c.is_ascii_alphabetic()) => {
                    let key = FilterKey::ALL
                        .into_iter()
                        .find(|k| k.as_str() == key.to_ascii_lowercase())
                        .ok_or_else(|| format!("unknown filter key {key:?}"))?;
                    if value.is_empty() {
                        return Err(format!("filter {}: has no value", key.as_str()));
                    }
                    filters.push((key, value.to_string()));
                }
                _ => terms.extend(tokenize(word)),
            }
        }
        if terms.is_empty() && filters.is_empty() {
            return Err("empty query".into());
        }
        Ok(SearchQuery { terms, filters })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub log_id: String,
    pub record_id: Option<String>,
    pub update_id: Option<String>,
    pub matched_field: String,
    pub snippet: String,
}

/// Position of an indexed field inside the corpus.
#[derive(Debug, Clone, Copy)]
struct Loc {
    log: usize,
    record: Option<usize>,
    update: Option<usize>,
}

impl Loc {
    fn level(&self) -> Level {
        match (self.record, self.update) {
            (None, _) => Level::Log,
            (Some(_), None) => Level::Record,
            (Some(_), Some(_)) => Level::Update,
        }
    }
}

#[derive(Debug, Clone)]
struct Unit {
    loc: Loc,
    field: String,
    text: String,
}

/// Inverted index over every text field of a set of logs.
pub struct SearchIndex {
    logs: Vec<FeedbackLog>,
    units: Vec<Unit>,
    postings: BTreeMap<String, BTreeSet<usize>>,
}

fn snapshot_fields(prefix: &str, s: &PipelineSnapshot) -> Vec<(String, String)> {
    vec![
        (format!("{prefix}.data_description"), s.data_description.clone()),
        (format!("{prefix}.model_description"), s.model_description.clone()),
        (format!("{prefix}.metrics_note"), s.metrics_note.clone()),
    ]
}

fn record_fields(r: &Record) -> Vec<(String, String)> {
    let labels: Vec<&str> = r.elicitation.stakeholders.iter().map(|s| s.label.as_str()).collect();
    vec![
        ("elicitation.stakeholders".into(), labels.join(", ")),
        ("elicitation.reason".into(), r.elicitation.reason.clone()),
        ("elicitation.presentation".into(), r.elicitation.presentation.clone()),
        ("feedback_text".into(), r.feedback_text.clone()),
        ("summary_text".into(), r.summary_text.clone()),
        ("inaction_justification".into(), r.inaction_justification.clone().unwrap_or_default()),
    ]
}

fn update_fields(u: &UpdateEntry) -> Vec<(String, String)> {
    vec![
        ("which".into(), u.which.clone()),
        ("why".into(), u.why.clone()),
        ("effect_note".into(), u.effect_note.clone()),
    ]
}

impl SearchIndex {
    pub fn build(mut logs: Vec<FeedbackLog>) -> Self {
        logs.sort_by(|a, b| a.id.cmp(&b.id));
        let mut units = Vec::new();
        for (li, log) in logs.iter().enumerate() {
            let at = |record, update| Loc { log: li, record, update };
            let mut push = |loc: Loc, fields: Vec<(String, String)>| {
                for (field, text) in fields {
                    if !text.trim().is_empty() {
                        units.push(Unit { loc, field, text: text.trim().to_string() });
                    }
                }
            };
            let mut top = vec![("title".to_string(), log.title.clone()), ("pipeline_name".into(), log.pipeline_name.clone())];
            top.extend(snapshot_fields("starting_point", &log.starting_point));
            if let Some(f) = &log.final_summary {
                top.extend(snapshot_fields("final_summary", f));
            }
            push(at(None, None), top);
            for (ri, record) in log.records.iter().enumerate() {
                push(at(Some(ri), None), record_fields(record));
                for (ui, update) in record.candidate_updates.iter().enumerate() {
                    push(at(Some(ri), Some(ui)), update_fields(update));
                }
            }
        }
        let mut postings: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for (i, unit) in units.iter().enumerate() {
            for token in tokenize(&unit.text) {
                postings.entry(token).or_default().insert(i);
            }
        }
        SearchIndex { logs, units, postings }
    }

    /// Serializable form for the `index.json` cache.
    pub fn to_cache(&self) -> serde_json::Value {
        let revisions: BTreeMap<&str, u64> = self.logs.iter().map(|l| (l.id.as_str(), l.revision)).collect();
        let tokens: BTreeMap<&str, Vec<String>> = self
            .postings
            .iter()
            .map(|(t, ids)| (t.as_str(), ids.iter().map(|&i| self.unit_ref(i)).collect()))
            .collect();
        serde_json::json!({ "revisions": revisions, "tokens": tokens })
    }

    fn unit_ref(&self, i: usize) -> String {
        let u = &self.units[i];
        let log = &self.logs[u.loc.log];
        let mut s = log.id.clone();
        if let Some(ri) = u.loc.record {
            let r = &log.records[ri];
            s.push('#');
            s.push_str(&r.id);
            if let Some(ui) = u.loc.update {
                s.push('/');
                s.push_str(&r.candidate_updates[ui].id);
            }
        }
        s.push(':');
        s.push_str(&u.field);
        s
    }

    fn matches_filters(&self, loc: Loc, filters: &[(FilterKey, String)]) -> bool {
        let log = &self.logs[loc.log];
        let record = loc.record.map(|i| &log.records[i]);
        let update = record.zip(loc.update).map(|(r, i)| &r.candidate_updates[i]);
        filters.iter().all(|(key, value)| {
            let v = value.to_lowercase();
            match key {
                FilterKey::Metric => log.metric_specs().any(|m| m.name.to_lowercase() == v),
                FilterKey::Status => log.status.as_str() == v,
                FilterKey::Owner => {
                    log.owner.id.to_lowercase() == v || token_subset(&v, &log.owner.display_name)
                }
                FilterKey::Stakeholder => record.is_some_and(|r| {
                    r.elicitation.stakeholders.iter().any(|s| token_subset(&v, &s.label))
                }),
                FilterKey::Category => record.is_some_and(|r| {
                    r.elicitation.stakeholders.iter().any(|s| s.category.key().to_lowercase() == v)
                }),
                FilterKey::Kind => update.is_some_and(|u| u.kinds.iter().any(|k| k.key().to_lowercase() == v)),
                FilterKey::Stage => match PipelineStage::from_str(&v) {
                    Ok(stage) => update.is_some_and(|u| u.stage == stage),
                    Err(_) => false,
                },
            }
        })
    }

    fn hit(&self, loc: Loc, matched_field: String, snippet: String) -> SearchHit {
        let log = &self.logs[loc.log];
        let record = loc.record.map(|i| &log.records[i]);
        SearchHit {
            log_id: log.id.clone(),
            record_id: record.map(|r| r.id.clone()),
            update_id: record.zip(loc.update).map(|(r, i)| r.candidate_updates[i].id.clone()),
            matched_field,
            snippet,
        }
    }

    /// Conjunctive search. With free-text terms, hits are the fields holding
    /// every term inside entities that pass every filter; without terms they
    /// are the entities at the deepest filtered level.
    pub fn search(&self, query: &SearchQuery) -> Vec<SearchHit> {
        let depth = query.filters.iter().map(|(k, _)| k.level()).max().unwrap_or(Level::Log);
        let mut hits: Vec<(Loc, usize, SearchHit)> = Vec::new();
        if query.terms.is_empty() {
            let fields = query.filters.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(",");
            for (li, log) in self.logs.iter().enumerate() {
                let mut locs = Vec::new();
                match depth {
                    Level::Log => locs.push(Loc { log: li, record: None, update: None }),
                    Level::Record => {
                        locs.extend((0..log.records.len()).map(|ri| Loc { log: li, record: Some(ri), update: None }))
                    }
                    Level::Update => {
                        for (ri, r) in log.records.iter().enumerate() {
                            locs.extend(
                                (0..r.candidate_updates.len())
                                    .map(|ui| Loc { log: li, record: Some(ri), update: Some(ui) }),
                            );
                        }
                    }
                }
                for loc in locs {
                    if self.matches_filters(loc, &query.filters) {
                        let snippet = self.entity_label(loc);
                        hits.push((loc, 0, self.hit(loc, fields.clone(), snippet)));
                    }
                }
            }
        } else {
            let mut candidates: Option<BTreeSet<usize>> = None;
            for term in &query.terms {
                let ids = self.postings.get(term).cloned().unwrap_or_default();
                candidates = Some(match candidates {
                    None => ids,
                    Some(c) => c.intersection(&ids).copied().collect(),
                });
            }
            for i in candidates.unwrap_or_default() {
                let unit = &self.units[i];
                if unit.loc.level() >= depth && self.matches_filters(unit.loc, &query.filters) {
                    hits.push((unit.loc, i, self.hit(unit.loc, unit.field.clone(), unit.text.clone())));
                }
            }
        }
        hits.sort_by_key(|(loc, seq, h)| {
            (
                h.log_id.clone(),
                h.record_id.as_deref().and_then(|r| id_number(r, 'R')),
                loc.update,
                *seq,
            )
        });
        hits.into_iter().map(|(_, _, h)| h).collect()
    }

    fn entity_label(&self, loc: Loc) -> String {
        let log = &self.logs[loc.log];
        match (loc.record, loc.update) {
            (None, _) => log.title.trim().to_string(),
            (Some(ri), None) => {
                let r = &log.records[ri];
                let labels: Vec<&str> = r.elicitation.stakeholders.iter().map(|s| s.label.as_str()).collect();
                format!("Record {}: {}", r.number(), labels.join(", "))
            }
            (Some(ri), Some(ui)) => log.records[ri].candidate_updates[ui].which.trim().to_string(),
        }
    }
}

fn token_subset(needle: &str, haystack: &str) -> bool {
    let hay: BTreeSet<String> = tokenize(haystack).into_iter().collect();
    let needle = tokenize(needle);
    !needle.is_empty() && needle.iter().all(|t| hay.contains(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn run(q: &str) -> Vec<SearchHit> {
        SearchIndex::build(corpus::all()).search(&q.parse().unwrap())
    }

    #[test]
    fn parses_terms_and_filters() {
        let q: SearchQuery = "Robustness kind:dataset  stage:training".parse().unwrap();
        assert_eq!(q.terms, ["robustness"]);
        assert_eq!(q.filters.len(), 2);
        assert!("badkey:x".parse::<SearchQuery>().unwrap_err().contains("badkey"));
        assert!("   ".parse::<SearchQuery>().is_err());
        assert_eq!("ratio 10:30".parse::<SearchQuery>().unwrap().terms, ["ratio", "10", "30"]);
    }

    #[test]
    fn clinician_hits_both_asthma_records() {
        let hits = run("clinician");
        let asthma: BTreeSet<_> = hits
            .iter()
            .filter(|h| h.log_id == "asthma-conversational-agent")
            .filter_map(|h| h.record_id.clone())
            .collect();
        assert_eq!(asthma, BTreeSet::from(["R1".to_string(), "R2".to_string()]));
        assert!(hits.iter().all(|h| tokenize(&h.snippet).contains(&"clinician".to_string())));
    }

    #[test]
    fn structured_filters_only() {
        let hits = run("kind:dataset stage:training");
        let refs: Vec<_> = hits
            .iter()
            .map(|h| format!("{}#{}/{}", h.log_id, h.record_id.as_deref().unwrap(), h.update_id.as_deref().unwrap()))
            .collect();
        assert_eq!(refs, ["asthma-conversational-agent#R1/U2", "asthma-conversational-agent#R2/U1"]);
    }

    #[test]
    fn whole_tokens_only() {
        assert!(run("clinicia").is_empty());
        assert!(!run("CutMix").is_empty());
        assert_eq!(run("status:finalized").len(), 1);
    }
}
