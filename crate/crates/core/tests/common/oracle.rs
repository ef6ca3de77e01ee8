//! Brute-force reference implementations used to cross-check the scanner
//! and the search index. They share no code with the library beyond the
//! model types.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use feedbacklog::model::{FeedbackLog, UpdateKind};

const SKIP_DIRS: &[&str] = &[".git", ".hg", ".svn", "target", "node_modules", "build", "dist", "__pycache__", ".venv", ".tox"];

/// `(path, line, log, record, update, done)`.
pub type RawAnnotation = (String, usize, String, String, String, bool);

fn is_slug(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('-')
        && !s.ends_with('-')
        && !s.contains("--")
        && s.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-')
}

fn digits_id(s: &str, prefix: char) -> bool {
    s.len() > 1 && s.starts_with(prefix) && s[1..].chars().all(|c| c.is_ascii_digit())
}

/// Parses the first `FBLOG: ` occurrence of a line by hand.
pub fn parse_line(line: &str) -> Option<(String, String, String, bool)> {
    let start = line.find("FBLOG: ")? + "FBLOG: ".len();
    let rest = &line[start..];
    let hash = rest.find('#')?;
    let log = &rest[..hash];
    let after = &rest[hash + 1..];
    let slash = after.find('/')?;
    let record = &after[..slash];
    let tail = &after[slash + 1..];
    let digits_end = 1 + tail[1..].find(|c: char| !c.is_ascii_digit()).unwrap_or(tail.len() - 1);
    let update = &tail[..digits_end.min(tail.len())];
    let remainder = &tail[update.len()..];
    if !is_slug(log) || !digits_id(record, 'R') || !digits_id(update, 'U') {
        return None;
    }
    let word_char = |c: char| c.is_alphanumeric() || c == '_';
    let (done, after_ref) = match remainder.strip_prefix(" done") {
        Some(r) if !r.starts_with(word_char) => (true, r),
        _ => (false, remainder),
    };
    if after_ref.starts_with(word_char) {
        return None;
    }
    Some((log.into(), record.into(), update.into(), done))
}

pub fn scan(root: &Path) -> Vec<RawAnnotation> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<RawAnnotation>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().to_string();
            if path.is_dir() {
                if !SKIP_DIRS.contains(&name.as_str()) {
                    walk(root, &path, out);
                }
                continue;
            }
            let bytes = fs::read(&path).unwrap();
            if bytes.iter().take(8192).any(|&b| b == 0) {
                continue;
            }
            let rel = path.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
            for (i, line) in String::from_utf8_lossy(&bytes).lines().enumerate() {
                if let Some((log, r, u, done)) = parse_line(line) {
                    out.push((rel.clone(), i + 1, log, r, u, done));
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out.sort();
    out
}

/// `(record, update, state, evidence count)` per chosen update, plus the
/// finding kind for each leftover annotation.
pub type ChecklistRow = (String, String, &'static str, usize);

pub fn checklist(log: &FeedbackLog, annotations: &[RawAnnotation]) -> (Vec<ChecklistRow>, Vec<&'static str>) {
    let model_side = |k: &UpdateKind| matches!(k, UpdateKind::Dataset | UpdateKind::LossFunction | UpdateKind::ParameterSpace | UpdateKind::Prompt);
    let mut items = Vec::new();
    for r in &log.records {
        let mut chosen: Vec<&String> = r.chosen_update_ids.iter().collect();
        chosen.sort_by_key(|u| u[1..].parse::<u32>().unwrap());
        for u in chosen {
            let update = r.candidate_updates.iter().find(|c| &c.id == u).unwrap();
            let evidence = annotations
                .iter()
                .filter(|a| a.2 == log.id && a.3 == r.id && &a.4 == u)
                .count();
            let state = if evidence > 0 {
                "implemented_in_code"
            } else if update.kinds.iter().any(model_side) {
                "pending"
            } else {
                "not_applicable"
            };
            items.push((r.id.clone(), u.clone(), state, evidence));
        }
    }
    let mut findings = Vec::new();
    for a in annotations {
        if a.2 != log.id {
            findings.push("other_log");
            continue;
        }
        let record = log.records.iter().find(|r| r.id == a.3);
        let chosen = record.is_some_and(|r| r.chosen_update_ids.contains(&a.4));
        let exists = record.is_some_and(|r| r.candidate_updates.iter().any(|u| u.id == a.4));
        if chosen {
            continue;
        }
        findings.push(if exists { "unchosen_update" } else { "stale_reference" });
    }
    (items, findings)
}

fn tokens(text: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            out.insert(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.insert(cur);
    }
    out
}

/// `(log, record, update, field)` for every hit of `query`, in hit order.
pub type HitKey = (String, Option<String>, Option<String>, String);

const STAGE_ALIASES: &[(&str, &str)] = &[
    ("data_collection_pre_training", "data_collection_pre_training"),
    ("pre_training", "data_collection_pre_training"),
    ("pre-training", "data_collection_pre_training"),
    ("data_collection", "data_collection_pre_training"),
    ("model_development_training", "model_development_training"),
    ("training", "model_development_training"),
    ("model_development", "model_development_training"),
    ("model_deployment_post_training", "model_deployment_post_training"),
    ("post_training", "model_deployment_post_training"),
    ("post-training", "model_deployment_post_training"),
    ("deployment", "model_deployment_post_training"),
    ("model_deployment", "model_deployment_post_training"),
    ("pre", "data_collection_pre_training"),
    ("post", "model_deployment_post_training"),
];

/// Linear scan over every field of every log with the documented semantics.
pub fn search(logs: &[FeedbackLog], query: &str) -> Vec<HitKey> {
    let mut terms: Vec<String> = Vec::new();
    let mut filters: Vec<(String, String)> = Vec::new();
    for word in query.split_whitespace() {
        match word.split_once(':') {
            Some((k, v)) if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphabetic()) => {
                filters.push((k.to_lowercase(), v.to_lowercase()))
            }
            _ => terms.extend(tokens(word)),
        }
    }
    let level = |k: &str| match k {
        "metric" | "status" | "owner" => 0,
        "stakeholder" | "category" => 1,
        _ => 2,
    };
    let depth = filters.iter().map(|(k, _)| level(k)).max().unwrap_or(0);

    let mut logs: Vec<&FeedbackLog> = logs.iter().collect();
    logs.sort_by(|a, b| a.id.cmp(&b.id));
    let mut hits = Vec::new();
    for log in logs {
        let log_ok = filters.iter().filter(|(k, _)| level(k) == 0).all(|(k, v)| match k.as_str() {
            "metric" => log.metric_specs().any(|m| m.name.to_lowercase() == *v),
            "status" => log.status.as_str() == v,
            _ => log.owner.id.to_lowercase() == *v || {
                let want = tokens(v);
                !want.is_empty() && want.is_subset(&tokens(&log.owner.display_name))
            },
        });
        if !log_ok {
            continue;
        }
        let mut log_fields = vec![
            ("title".to_string(), log.title.clone()),
            ("pipeline_name".into(), log.pipeline_name.clone()),
        ];
        for (prefix, snap) in [("starting_point", Some(&log.starting_point)), ("final_summary", log.final_summary.as_ref())] {
            if let Some(s) = snap {
                log_fields.push((format!("{prefix}.data_description"), s.data_description.clone()));
                log_fields.push((format!("{prefix}.model_description"), s.model_description.clone()));
                log_fields.push((format!("{prefix}.metrics_note"), s.metrics_note.clone()));
            }
        }
        let mut emit = |record: Option<&str>, update: Option<&str>, fields: &[(String, String)], lvl: usize| {
            if terms.is_empty() {
                if lvl == depth && !filters.is_empty() {
                    let keys: Vec<&str> = filters.iter().map(|(k, _)| k.as_str()).collect();
                    hits.push((log.id.clone(), record.map(String::from), update.map(String::from), keys.join(",")));
                }
                return;
            }
            if lvl < depth {
                return;
            }
            for (field, text) in fields {
                let have = tokens(text);
                if !text.trim().is_empty() && terms.iter().all(|t| have.contains(t)) {
                    hits.push((log.id.clone(), record.map(String::from), update.map(String::from), field.clone()));
                }
            }
        };
        emit(None, None, &log_fields, 0);
        for r in &log.records {
            let rec_ok = filters.iter().filter(|(k, _)| level(k) == 1).all(|(k, v)| {
                r.elicitation.stakeholders.iter().any(|s| match k.as_str() {
                    "stakeholder" => {
                        let want = tokens(v);
                        !want.is_empty() && want.is_subset(&tokens(&s.label))
                    }
                    _ => s.category.key().to_lowercase() == *v,
                })
            });
            if !rec_ok {
                continue;
            }
            let labels: Vec<&str> = r.elicitation.stakeholders.iter().map(|s| s.label.as_str()).collect();
            let rf = vec![
                ("elicitation.stakeholders".to_string(), labels.join(", ")),
                ("elicitation.reason".into(), r.elicitation.reason.clone()),
                ("elicitation.presentation".into(), r.elicitation.presentation.clone()),
                ("feedback_text".into(), r.feedback_text.clone()),
                ("summary_text".into(), r.summary_text.clone()),
                ("inaction_justification".into(), r.inaction_justification.clone().unwrap_or_default()),
            ];
            emit(Some(&r.id), None, &rf, 1);
            for u in &r.candidate_updates {
                let up_ok = filters.iter().filter(|(k, _)| level(k) == 2).all(|(k, v)| match k.as_str() {
                    "kind" => u.kinds.iter().any(|kind| kind.key().to_lowercase() == *v),
                    _ => STAGE_ALIASES.iter().any(|(alias, key)| alias == v && u.stage.key() == *key),
                });
                if !up_ok {
                    continue;
                }
                let uf = vec![
                    ("which".to_string(), u.which.clone()),
                    ("why".into(), u.why.clone()),
                    ("effect_note".into(), u.effect_note.clone()),
                ];
                emit(Some(&r.id), Some(&u.id), &uf, 2);
            }
        }
    }
    hits
}
