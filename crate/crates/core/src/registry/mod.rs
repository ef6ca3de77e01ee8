//! On-disk store for many logs.
//!
//! ```text
//! <root>/logs/<id>.fblog.json   one canonical file per log
//! <root>/links.json             typed links between logs
//! <root>/access.json            members, grants, section assignments
//! <root>/index.json             search index cache, rebuilt on every put
//! ```
//!
//! Writers are serialized per log id and guarded by the revision number:
//! a put must carry a revision above the stored one. Every file is replaced
//! through a temp file and a rename.

mod access;
mod anonymize;
mod search;
mod store;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use access::{AccessFile, AccessGrant, AssignmentState, Role, Scope, SectionAssignment};
pub use anonymize::{anonymize, PseudonymEntry};
pub use search::{tokenize, FilterKey, SearchHit, SearchIndex, SearchQuery};
pub use store::{FaultHook, WriteStep};

use crate::docformat::{self, FormatError, FILE_EXTENSION};
use crate::lint::{self, LintFinding, Severity};
use crate::model::{structure, FeedbackLog, ModelError, PersonRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkRelation {
    Prompted,
    Refines,
    SamePipeline,
    Supersedes,
}

impl LinkRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkRelation::Prompted => "prompted",
            LinkRelation::Refines => "refines",
            LinkRelation::SamePipeline => "same_pipeline",
            LinkRelation::Supersedes => "supersedes",
        }
    }
}

impl std::str::FromStr for LinkRelation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "prompted" => Ok(LinkRelation::Prompted),
            "refines" => Ok(LinkRelation::Refines),
            "same_pipeline" => Ok(LinkRelation::SamePipeline),
            "supersedes" => Ok(LinkRelation::Supersedes),
            other => Err(format!("unknown link relation {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogLink {
    pub from_log_id: String,
    pub to_log_id: String,
    pub relation: LinkRelation,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{actor:?} may not {action}")]
    AccessDenied { actor: String, action: String },
    #[error("unknown log {0}")]
    UnknownLog(String),
    #[error("log {log_id}: revision {given} is not newer than stored revision {stored}")]
    StaleRevision { log_id: String, stored: u64, given: u64 },
    #[error("log {log_id} has {} lint error(s)", lint::error_count(.findings))]
    ValidationFailed { log_id: String, findings: Vec<LintFinding> },
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("a log cannot link to itself ({0})")]
    SelfLink(String),
    #[error("link {from} -> {to} ({relation}) already exists")]
    DuplicateLink { from: String, to: String, relation: &'static str },
    #[error("log {log_id} has no section {path}")]
    UnknownSection { log_id: String, path: String },
    #[error("malformed query: {0}")]
    MalformedQuery(String),
    #[error("stored file {path} is unreadable: {source}")]
    Corrupt { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RegistryError + '_ {
    move |source| RegistryError::Io { path: path.to_path_buf(), source }
}

/// What `put` did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PutOutcome {
    Created,
    Updated,
}

pub struct Registry {
    root: PathBuf,
    log_locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    /// Serializes read-modify-write of the shared JSON files.
    meta: Mutex<()>,
    fault: RwLock<Option<FaultHook>>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl Registry {
    /// Opens the registry at `root`, creating the layout if needed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, RegistryError> {
        let root = root.into();
        let logs = root.join("logs");
        std::fs::create_dir_all(&logs).map_err(io_err(&logs))?;
        Ok(Registry {
            root,
            log_locks: Mutex::new(HashMap::new()),
            meta: Mutex::new(()),
            fault: RwLock::new(None),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Installs a hook that can abort writes part way; see [`WriteStep`].
    pub fn set_fault_hook(&self, hook: Option<FaultHook>) {
        *self.fault.write().unwrap_or_else(|e| e.into_inner()) = hook;
    }

    fn log_path(&self, id: &str) -> PathBuf {
        self.root.join("logs").join(format!("{id}{FILE_EXTENSION}"))
    }

    fn write(&self, path: &Path, bytes: &[u8]) -> Result<(), RegistryError> {
        let hook = self.fault.read().unwrap_or_else(|e| e.into_inner()).clone();
        store::write_atomic(path, bytes, hook.as_ref()).map_err(io_err(path))
    }

    fn read_json<T: serde::de::DeserializeOwned + Default>(&self, name: &str) -> Result<T, RegistryError> {
        let path = self.root.join(name);
        match std::fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| RegistryError::Corrupt {
                path,
                source: FormatError::Syntax { line: e.line(), column: e.column(), message: e.to_string() },
            }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(T::default()),
            Err(e) => Err(RegistryError::Io { path, source: e }),
        }
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), RegistryError> {
        self.write(&self.root.join(name), docformat::to_canonical(value).as_bytes())
    }

    fn lock_log(&self, id: &str) -> Arc<Mutex<()>> {
        lock(&self.log_locks).entry(id.to_string()).or_default().clone()
    }

    pub fn access(&self) -> Result<AccessFile, RegistryError> {
        self.read_json("access.json")
    }

    pub fn links(&self) -> Result<Vec<LogLink>, RegistryError> {
        self.read_json("links.json")
    }

    fn update_access<T>(&self, f: impl FnOnce(&mut AccessFile) -> Result<T, RegistryError>) -> Result<T, RegistryError> {
        let _guard = lock(&self.meta);
        let mut access = self.access()?;
        let out = f(&mut access)?;
        self.write_json("access.json", &access)?;
        Ok(out)
    }

    /// Adds an organisation member with the default global viewer grant.
    pub fn add_member(&self, person: PersonRef) -> Result<(), RegistryError> {
        self.update_access(|access| {
            if !access.is_member(&person.id) {
                access.members.push(person.clone());
            }
            if access.global_role(&person.id).is_none() {
                access.set_grant(AccessGrant { person, scope: Scope::Global, role: Role::Viewer });
            }
            Ok(())
        })
    }

    /// Grants a log-scoped editor or viewer role. Only the log's owner may.
    pub fn grant(&self, log_id: &str, person: PersonRef, role: Role, actor: &str) -> Result<(), RegistryError> {
        self.require_exists(log_id)?;
        self.update_access(|access| {
            if access.effective_role(actor, log_id) != Some(Role::Owner) || role == Role::Owner {
                return Err(denied(actor, format!("grant {} on {log_id}", role.as_str())));
            }
            access.set_grant(AccessGrant { person, scope: Scope::Log { log_id: log_id.into() }, role });
            Ok(())
        })
    }

    pub fn role(&self, log_id: &str, actor: &str) -> Result<Option<Role>, RegistryError> {
        Ok(self.access()?.effective_role(actor, log_id))
    }

    fn require_role(&self, log_id: &str, actor: &str, needed: Role, action: &str) -> Result<(), RegistryError> {
        match self.role(log_id, actor)? {
            Some(r) if r >= needed => Ok(()),
            _ => Err(denied(actor, format!("{action} {log_id}"))),
        }
    }

    pub fn exists(&self, log_id: &str) -> bool {
        crate::model::is_slug(log_id) && self.log_path(log_id).is_file()
    }

    fn require_exists(&self, log_id: &str) -> Result<(), RegistryError> {
        if self.exists(log_id) {
            Ok(())
        } else {
            Err(RegistryError::UnknownLog(log_id.to_string()))
        }
    }

    fn load(&self, log_id: &str) -> Result<Option<FeedbackLog>, RegistryError> {
        if !crate::model::is_slug(log_id) {
            return Ok(None);
        }
        let path = self.log_path(log_id);
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(RegistryError::Io { path, source: e }),
        };
        docformat::parse(&bytes)
            .map(Some)
            .map_err(|source| RegistryError::Corrupt { path, source })
    }

    /// Stored ids, sorted, regardless of access.
    pub fn all_ids(&self) -> Result<Vec<String>, RegistryError> {
        let dir = self.root.join("logs");
        let mut ids = Vec::new();
        for entry in std::fs::read_dir(&dir).map_err(io_err(&dir))? {
            let entry = entry.map_err(io_err(&dir))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(id) = name.strip_suffix(FILE_EXTENSION) {
                if crate::model::is_slug(id) {
                    ids.push(id.to_string());
                }
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn log_count(&self) -> Result<usize, RegistryError> {
        Ok(self.all_ids()?.len())
    }

    pub fn list(&self, actor: &str) -> Result<Vec<String>, RegistryError> {
        let access = self.access()?;
        Ok(self
            .all_ids()?
            .into_iter()
            .filter(|id| access.effective_role(actor, id).is_some())
            .collect())
    }

    pub fn get(&self, log_id: &str, actor: &str) -> Result<FeedbackLog, RegistryError> {
        let log = self.load(log_id)?.ok_or_else(|| RegistryError::UnknownLog(log_id.into()))?;
        self.require_role(log_id, actor, Role::Viewer, "view")?;
        Ok(log)
    }

    /// Validates and stores `log`. New logs may be created by their owner or
    /// by anyone with a global editor grant; existing ones need an editor
    /// role and a newer revision.
    pub fn put(&self, log: &FeedbackLog, actor: &str) -> Result<PutOutcome, RegistryError> {
        let writer = self.lock_log(&log.id);
        let _guard = lock(&writer);
        self.put_locked(log, actor)
    }

    fn put_locked(&self, log: &FeedbackLog, actor: &str) -> Result<PutOutcome, RegistryError> {
        if let Some(v) = structure::check(log).into_iter().next() {
            return Err(RegistryError::SchemaViolation { path: v.path, message: v.message });
        }
        let findings = lint::validate(log);
        if lint::error_count(&findings) > 0 {
            let findings = findings.into_iter().filter(|f| f.severity == Severity::Error).collect();
            return Err(RegistryError::ValidationFailed { log_id: log.id.clone(), findings });
        }

        let outcome = match self.load(&log.id)? {
            Some(stored) => {
                let role = self.role(&log.id, actor)?;
                if role < Some(Role::Editor) {
                    return Err(denied(actor, format!("edit {}", log.id)));
                }
                if log.revision <= stored.revision {
                    return Err(RegistryError::StaleRevision {
                        log_id: log.id.clone(),
                        stored: stored.revision,
                        given: log.revision,
                    });
                }
                if stored.owner.id != log.owner.id {
                    if role != Some(Role::Owner) {
                        return Err(denied(actor, format!("change the owner of {}", log.id)));
                    }
                    self.update_access(|a| {
                        a.set_owner(&log.id, &log.owner);
                        Ok(())
                    })?;
                }
                PutOutcome::Updated
            }
            None => {
                let access = self.access()?;
                if actor != log.owner.id && access.global_role(actor) < Some(Role::Editor) {
                    return Err(denied(actor, format!("create {}", log.id)));
                }
                self.update_access(|a| {
                    a.set_owner(&log.id, &log.owner);
                    Ok(())
                })?;
                PutOutcome::Created
            }
        };
        self.write(&self.log_path(&log.id), &docformat::serialize(log))?;
        self.refresh_index_cache()?;
        Ok(outcome)
    }

    /// Loads, mutates and stores a log under its writer lock. The closure
    /// works on a copy; nothing is written if it fails.
    pub fn edit<T>(
        &self,
        log_id: &str,
        actor: &str,
        f: impl FnOnce(&mut FeedbackLog) -> Result<T, ModelError>,
    ) -> Result<(FeedbackLog, T), RegistryError> {
        let writer = self.lock_log(log_id);
        let _guard = lock(&writer);
        let mut log = self.load(log_id)?.ok_or_else(|| RegistryError::UnknownLog(log_id.into()))?;
        self.require_role(log_id, actor, Role::Editor, "edit")?;
        let before = log.revision;
        let out = f(&mut log)?;
        if log.revision == before {
            log.revision += 1;
        }
        log.updated_at = chrono::Utc::now();
        self.put_locked(&log, actor)?;
        Ok((log, out))
    }

    fn refresh_index_cache(&self) -> Result<(), RegistryError> {
        let _guard = lock(&self.meta);
        let logs = self.snapshot(|_| true)?;
        self.write_json("index.json", &SearchIndex::build(logs).to_cache())
    }

    fn snapshot(&self, mut keep: impl FnMut(&str) -> bool) -> Result<Vec<FeedbackLog>, RegistryError> {
        let mut logs = Vec::new();
        for id in self.all_ids()? {
            if keep(&id) {
                if let Some(log) = self.load(&id)? {
                    logs.push(log);
                }
            }
        }
        Ok(logs)
    }

    /// Every stored log the actor may view.
    pub fn visible_logs(&self, actor: &str) -> Result<Vec<FeedbackLog>, RegistryError> {
        let access = self.access()?;
        self.snapshot(|id| access.effective_role(actor, id).is_some())
    }

    /// Every stored log, ignoring access. For local tooling only.
    pub fn visible_logs_unchecked(&self) -> Result<Vec<FeedbackLog>, RegistryError> {
        self.snapshot(|_| true)
    }

    pub fn search(&self, query: &str, actor: &str) -> Result<Vec<SearchHit>, RegistryError> {
        let query: SearchQuery = query.parse().map_err(RegistryError::MalformedQuery)?;
        Ok(SearchIndex::build(self.visible_logs(actor)?).search(&query))
    }

    pub fn add_link(&self, link: LogLink, actor: &str) -> Result<(), RegistryError> {
        self.require_exists(&link.from_log_id)?;
        self.require_exists(&link.to_log_id)?;
        if link.from_log_id == link.to_log_id {
            return Err(RegistryError::SelfLink(link.from_log_id));
        }
        self.require_role(&link.from_log_id, actor, Role::Editor, "link from")?;
        let _guard = lock(&self.meta);
        let mut links = self.links()?;
        if links.iter().any(|l| {
            l.from_log_id == link.from_log_id && l.to_log_id == link.to_log_id && l.relation == link.relation
        }) {
            return Err(RegistryError::DuplicateLink {
                from: link.from_log_id,
                to: link.to_log_id,
                relation: link.relation.as_str(),
            });
        }
        links.push(link);
        links.sort_by(|a, b| {
            (&a.from_log_id, &a.to_log_id, a.relation).cmp(&(&b.from_log_id, &b.to_log_id, b.relation))
        });
        self.write_json("links.json", &links)
    }

    /// Logs that prompted `log_id`, directly or transitively, nearest first.
    pub fn provenance_chain(&self, log_id: &str) -> Result<Vec<String>, RegistryError> {
        self.require_exists(log_id)?;
        let links = self.links()?;
        let mut seen = BTreeSet::from([log_id.to_string()]);
        let mut queue = VecDeque::from([log_id.to_string()]);
        let mut chain = Vec::new();
        while let Some(current) = queue.pop_front() {
            let mut sources: Vec<&String> = links
                .iter()
                .filter(|l| l.relation == LinkRelation::Prompted && l.to_log_id == current)
                .map(|l| &l.from_log_id)
                .collect();
            sources.sort();
            for s in sources {
                if seen.insert(s.clone()) {
                    chain.push(s.clone());
                    queue.push_back(s.clone());
                }
            }
        }
        Ok(chain)
    }

    pub fn assign_section(
        &self,
        log_id: &str,
        section_path: &str,
        assignee: PersonRef,
        actor: &str,
    ) -> Result<SectionAssignment, RegistryError> {
        let log = self.get(log_id, actor)?;
        self.require_role(log_id, actor, Role::Editor, "assign sections of")?;
        if !section_resolves(&log, section_path) {
            return Err(RegistryError::UnknownSection { log_id: log_id.into(), path: section_path.into() });
        }
        self.update_access(|access| {
            if let Some(a) = access.assignments.iter().find(|a| {
                a.log_id == log_id && a.section_path == section_path && a.assignee.id == assignee.id
            }) {
                return Ok(a.clone());
            }
            let a = SectionAssignment {
                log_id: log_id.into(),
                section_path: section_path.into(),
                assignee,
                state: AssignmentState::Open,
            };
            access.assignments.push(a.clone());
            Ok(a)
        })
    }

    /// Marks every assignment of the section done. Editors and the
    /// assignees themselves may do this; repeating it changes nothing.
    pub fn complete_section(&self, log_id: &str, section_path: &str, actor: &str) -> Result<(), RegistryError> {
        self.require_exists(log_id)?;
        self.update_access(|access| {
            let editor = access.effective_role(actor, log_id) >= Some(Role::Editor);
            let mut found = false;
            let mut allowed = editor;
            for a in access.assignments.iter().filter(|a| a.log_id == log_id && a.section_path == section_path) {
                found = true;
                allowed |= a.assignee.id == actor;
            }
            if !found {
                return Err(RegistryError::UnknownSection { log_id: log_id.into(), path: section_path.into() });
            }
            if !allowed {
                return Err(denied(actor, format!("complete {section_path} of {log_id}")));
            }
            for a in access.assignments.iter_mut().filter(|a| a.log_id == log_id && a.section_path == section_path) {
                a.state = AssignmentState::Done;
            }
            Ok(())
        })
    }

    pub fn assignments(&self, log_id: &str, actor: &str) -> Result<Vec<SectionAssignment>, RegistryError> {
        self.get(log_id, actor)?;
        Ok(self.access()?.assignments.into_iter().filter(|a| a.log_id == log_id).collect())
    }

    /// Anonymized copy of a stored log. The pseudonym mapping is returned
    /// only to the log's owner.
    pub fn anonymized(
        &self,
        log_id: &str,
        actor: &str,
    ) -> Result<(FeedbackLog, Option<Vec<PseudonymEntry>>), RegistryError> {
        let log = self.get(log_id, actor)?;
        let (anon, mapping) = anonymize(&log);
        let owner = self.role(log_id, actor)? == Some(Role::Owner);
        Ok((anon, owner.then_some(mapping)))
    }
}

fn denied(actor: &str, action: String) -> RegistryError {
    RegistryError::AccessDenied { actor: actor.to_string(), action }
}

/// `starting_point`, `final_summary`, `records[i]` or
/// `records[i].{elicitation,feedback,incorporation,summary}` (zero-based).
pub fn section_resolves(log: &FeedbackLog, path: &str) -> bool {
    if path == "starting_point" || path == "final_summary" {
        return true;
    }
    let Some(rest) = path.strip_prefix("records[") else { return false };
    let Some((index, tail)) = rest.split_once(']') else { return false };
    let Ok(index) = index.parse::<usize>() else { return false };
    if index >= log.records.len() || index.to_string().len() != rest.find(']').unwrap_or(0) {
        return false;
    }
    matches!(tail, "" | ".elicitation" | ".feedback" | ".incorporation" | ".summary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn registry() -> (tempfile::TempDir, Registry) {
        let dir = tempfile::tempdir().unwrap();
        let reg = Registry::open(dir.path()).unwrap();
        (dir, reg)
    }

    #[test]
    fn owner_puts_member_reads() {
        let (_d, reg) = registry();
        let log = corpus::asthma();
        reg.add_member(PersonRef::new("analyst", "Analyst")).unwrap();
        assert_eq!(reg.put(&log, &log.owner.id).unwrap(), PutOutcome::Created);
        assert_eq!(reg.get(&log.id, "analyst").unwrap(), log);
        assert!(matches!(reg.get(&log.id, "stranger"), Err(RegistryError::AccessDenied { .. })));
        assert!(matches!(reg.get("nope", "analyst"), Err(RegistryError::UnknownLog(_))));
        assert_eq!(reg.list("analyst").unwrap(), vec![log.id.clone()]);
        assert!(reg.list("stranger").unwrap().is_empty());
    }

    #[test]
    fn viewer_cannot_put_and_revisions_must_grow() {
        let (_d, reg) = registry();
        let mut log = corpus::asthma();
        reg.add_member(PersonRef::new("analyst", "Analyst")).unwrap();
        reg.put(&log, &log.owner.id).unwrap();
        log.revision += 1;
        assert!(matches!(reg.put(&log, "analyst"), Err(RegistryError::AccessDenied { .. })));
        log.revision -= 1;
        assert!(matches!(reg.put(&log, &log.owner.id), Err(RegistryError::StaleRevision { .. })));
        log.revision += 1;
        assert_eq!(reg.put(&log, &log.owner.id).unwrap(), PutOutcome::Updated);
    }

    #[test]
    fn lint_errors_block_put() {
        let (_d, reg) = registry();
        let mut log = corpus::asthma();
        log.records[0].summary_text.clear();
        match reg.put(&log, &log.owner.id) {
            Err(RegistryError::ValidationFailed { findings, .. }) => assert_eq!(findings[0].rule_id, "L4"),
            other => panic!("{other:?}"),
        }
        assert_eq!(reg.log_count().unwrap(), 0);
    }

    #[test]
    fn links_and_provenance() {
        let (_d, reg) = registry();
        for log in corpus::all() {
            reg.put(&log, &log.owner.id).unwrap();
        }
        let link = |from: &str, to: &str| LogLink {
            from_log_id: from.into(),
            to_log_id: to.into(),
            relation: LinkRelation::Prompted,
            note: String::new(),
        };
        let (a, b, c) = ("asthma-conversational-agent", "image-recognition", "sexual-health");
        assert!(reg.provenance_chain(b).unwrap().is_empty());
        reg.add_link(link(a, b), "asthma-practitioner").unwrap();
        reg.add_link(link(c, a), "sexual-health-team").unwrap();
        reg.add_link(link(b, a), "image-analyst").unwrap();
        assert_eq!(reg.provenance_chain(b).unwrap(), [a, c]);
        assert_eq!(reg.provenance_chain(a).unwrap(), [b, c]);
        assert!(matches!(reg.add_link(link(a, b), "asthma-practitioner"), Err(RegistryError::DuplicateLink { .. })));
        assert!(matches!(reg.add_link(link(a, a), "asthma-practitioner"), Err(RegistryError::SelfLink(_))));
        assert!(matches!(reg.add_link(link(a, "zzz"), "asthma-practitioner"), Err(RegistryError::UnknownLog(_))));
        assert!(matches!(reg.add_link(link(c, b), "image-analyst"), Err(RegistryError::AccessDenied { .. })));
    }

    #[test]
    fn section_assignment() {
        let (_d, reg) = registry();
        let log = corpus::asthma();
        let owner = log.owner.id.clone();
        reg.put(&log, &owner).unwrap();
        let analyst = PersonRef::new("analyst", "Analyst");
        let a = reg.assign_section(&log.id, "records[1].incorporation", analyst.clone(), &owner).unwrap();
        assert_eq!(a.state, AssignmentState::Open);
        assert!(matches!(
            reg.assign_section(&log.id, "records[9]", analyst.clone(), &owner),
            Err(RegistryError::UnknownSection { .. })
        ));
        reg.complete_section(&log.id, "records[1].incorporation", "analyst").unwrap();
        reg.complete_section(&log.id, "records[1].incorporation", &owner).unwrap();
        let all = reg.assignments(&log.id, &owner).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].state, AssignmentState::Done);
    }

    #[test]
    fn section_paths() {
        let log = corpus::asthma();
        for ok in ["starting_point", "records[0]", "records[1].summary", "final_summary"] {
            assert!(section_resolves(&log, ok), "{ok}");
        }
        for bad in ["records[2]", "records[01]", "records[0].why", "records[-1]", "records", ""] {
            assert!(!section_resolves(&log, bad), "{bad}");
        }
    }

    #[test]
    fn edit_bumps_revision_and_persists() {
        let (_d, reg) = registry();
        let log = corpus::asthma();
        reg.put(&log, &log.owner.id).unwrap();
        let (edited, ()) = reg
            .edit(&log.id, &log.owner.id, |l| l.open_record(l.records[0].elicitation.clone()).map(|_| ()))
            .unwrap();
        assert_eq!(edited.revision, log.revision + 1);
        assert_eq!(reg.get(&log.id, &log.owner.id).unwrap().records.len(), 3);
        let failed = reg.edit(&log.id, &log.owner.id, |l| l.set_feedback("R9", "x"));
        assert!(matches!(failed, Err(RegistryError::Model(ModelError::UnknownRecord(_)))));
    }
}
