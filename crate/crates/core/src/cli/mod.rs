//! The `fblog` command line.
//!
//! Exit codes: 0 success, 1 validation or lint errors, 2 usage error,
//! 3 I/O or access failure. `--json` switches every command to canonical
//! JSON output.

mod args;

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::Parser;
use serde::Serialize;
use serde_json::json;

pub use args::Cli;
use args::{Command, MemberCommand, MetricCommand, RecordCommand};

use crate::docformat::{self, FormatError};
use crate::lint::{self, LintFinding};
use crate::model::ops::ReadingDraft;
use crate::model::{
    Decimal, Elicitation, FeedbackLog, MetricOrigin, MetricReading, MetricSpec, ModelError, NewLog, PersonRef,
    PipelineSnapshot, ReadingContext, StakeholderCategory, StakeholderRef, TargetCheck, UpdateDraft,
};
use crate::registry::{LinkRelation, LogLink, Registry, RegistryError, Role, SearchIndex};
use crate::scanner::{self, ItemState, ScanConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid { message: String, findings: Vec<LintFinding> },
    Failure(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid { .. } => EXIT_INVALID,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        CliError::Invalid { message: message.into(), findings: Vec::new() }
    }
}

impl From<RegistryError> for CliError {
    fn from(e: RegistryError) -> Self {
        match e {
            RegistryError::ValidationFailed { findings, .. } => {
                CliError::Invalid { message: format!("{} lint error(s)", findings.len()), findings }
            }
            RegistryError::SchemaViolation { .. } | RegistryError::Model(_) => CliError::invalid(e.to_string()),
            RegistryError::MalformedQuery(_) => CliError::Usage(e.to_string()),
            RegistryError::SelfLink(_) | RegistryError::DuplicateLink { .. } | RegistryError::UnknownSection { .. } => {
                CliError::invalid(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

/// Parses `argv` (including the program name) and runs it.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let json = cli.json;
    let mut ctx = match Registry::open(&cli.registry) {
        Ok(registry) => Ctx { registry, actor: cli.actor.clone(), json, stdin, out },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    match ctx.dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let (message, findings) = match &e {
                CliError::Usage(m) | CliError::Failure(m) => (m.clone(), &[][..]),
                CliError::Invalid { message, findings } => (message.clone(), &findings[..]),
            };
            if json {
                let body = json!({ "error": message, "exit_code": e.code(), "findings": findings });
                let _ = ctx.out.write_all(docformat::to_canonical(&body).as_bytes());
            } else {
                for f in findings {
                    let _ = writeln!(err, "{} {} {}: {}", severity(f), f.rule_id, f.path, f.message);
                }
                let _ = writeln!(err, "error: {message}");
            }
            e.code()
        }
    }
}

fn severity(f: &LintFinding) -> &'static str {
    match f.severity {
        lint::Severity::Error => "error",
        lint::Severity::Warning => "warning",
        lint::Severity::Info => "info",
    }
}

struct Ctx<'a> {
    registry: Registry,
    actor: Option<String>,
    json: bool,
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

fn parse_arg<T: std::str::FromStr>(what: &str, s: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| CliError::Usage(format!("invalid {what} {s:?}: {e}")))
}

/// `METRIC=VALUE[:NOTE]`.
fn reading_arg(s: &str) -> Result<ReadingDraft, CliError> {
    let (metric, rest) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected METRIC=VALUE[:NOTE], got {s:?}")))?;
    let (value, note) = rest.split_once(':').unwrap_or((rest, ""));
    Ok(ReadingDraft::new(metric.trim(), parse_arg::<Decimal>("value", value.trim())?, note.trim()))
}

/// `LABEL=CATEGORY[+identifiable][+consent]`.
fn stakeholder_arg(s: &str) -> Result<StakeholderRef, CliError> {
    let (label, rest) = s
        .rsplit_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected LABEL=CATEGORY, got {s:?}")))?;
    let mut parts = rest.split('+');
    let category: StakeholderCategory = parse_arg("category", parts.next().unwrap_or(""))?;
    let mut stakeholder = StakeholderRef::anonymous(label.trim(), category);
    for flag in parts {
        match flag {
            "identifiable" => stakeholder.identifiable = true,
            "consent" => stakeholder.consent_recorded = true,
            other => return Err(CliError::Usage(format!("unknown stakeholder flag {other:?}"))),
        }
    }
    Ok(stakeholder)
}

fn origin_arg(s: &str) -> Result<MetricOrigin, CliError> {
    if s == "start" {
        return Ok(MetricOrigin::StartingPoint);
    }
    match s.split_once('/') {
        Some((r, u)) => Ok(MetricOrigin::Update { record_id: r.into(), update_id: u.into() }),
        None => Err(CliError::Usage(format!("expected `start` or R<n>/U<n>, got {s:?}"))),
    }
}

impl Ctx<'_> {
    fn read_input(&mut self, source: &str) -> Result<Vec<u8>, CliError> {
        if source == "-" {
            let mut buf = Vec::new();
            self.stdin.read_to_end(&mut buf)?;
            Ok(buf)
        } else {
            std::fs::read(source).map_err(|e| CliError::Failure(format!("{source}: {e}")))
        }
    }

    fn payload<T: serde::de::DeserializeOwned>(&mut self, source: &str) -> Result<T, CliError> {
        let bytes = self.read_input(source)?;
        let mut de = serde_json::Deserializer::from_slice(&bytes);
        serde_path_to_error::deserialize(&mut de)
            .map_err(|e| CliError::Usage(format!("{source}: {} at {}", e.inner(), e.path())))
    }

    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> CliResult {
        if self.json {
            self.out.write_all(docformat::to_canonical(value).as_bytes())?;
        } else {
            let t = text();
            self.out.write_all(t.as_bytes())?;
            if !t.ends_with('\n') {
                self.out.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    /// The explicit actor, or the owner of `log_id` in local mode.
    fn actor_for(&self, log_id: &str) -> Result<String, CliError> {
        if let Some(a) = &self.actor {
            return Ok(a.clone());
        }
        let access = self.registry.access()?;
        if let Some(owner) = access.owner_of(log_id) {
            return Ok(owner.id.clone());
        }
        Err(RegistryError::UnknownLog(log_id.into()).into())
    }

    fn get(&self, log_id: &str) -> Result<FeedbackLog, CliError> {
        let actor = self.actor_for(log_id)?;
        Ok(self.registry.get(log_id, &actor)?)
    }

    fn edit<T>(
        &mut self,
        log_id: &str,
        op: impl FnOnce(&mut FeedbackLog) -> Result<T, ModelError>,
    ) -> Result<(FeedbackLog, T), CliError> {
        let actor = self.actor_for(log_id)?;
        Ok(self.registry.edit(log_id, &actor, op)?)
    }

    fn store(&mut self, log: &FeedbackLog) -> CliResult {
        let actor = self.actor.clone().unwrap_or_else(|| log.owner.id.clone());
        self.registry.put(log, &actor)?;
        Ok(())
    }

    fn dispatch(&mut self, command: Command) -> CliResult {
        match command {
            Command::Init(a) => {
                let new: NewLog = match &a.from {
                    Some(src) => self.payload(src)?,
                    None => {
                        let owner_id = a
                            .owner
                            .clone()
                            .or_else(|| self.actor.clone())
                            .ok_or_else(|| CliError::Usage("init needs --owner or --actor".into()))?;
                        let name = a.owner_name.clone().unwrap_or_else(|| owner_id.clone());
                        NewLog {
                            title: a.title.clone().unwrap_or_default(),
                            pipeline_name: a.pipeline.clone(),
                            owner: PersonRef::new(owner_id, name),
                            starting_point: PipelineSnapshot {
                                data_description: a.data.clone().unwrap_or_default(),
                                model_description: a.model.clone().unwrap_or_default(),
                                metrics_note: a.metrics_note.clone(),
                                ..Default::default()
                            },
                        }
                    }
                };
                let log = FeedbackLog::new_unique(new, |id| self.registry.exists(id))?;
                self.store(&log)?;
                self.emit(&json!({ "log_id": log.id }), || log.id.clone())
            }
            Command::Import { file } => self.import(&file),
            Command::List => {
                let logs = match &self.actor {
                    Some(a) => self.registry.visible_logs(a)?,
                    None => self.registry.visible_logs_unchecked()?,
                };
                let rows: Vec<_> = logs
                    .iter()
                    .map(|l| json!({ "id": l.id, "title": l.title, "status": l.status.as_str(), "revision": l.revision }))
                    .collect();
                self.emit(&rows, || {
                    logs.iter()
                        .map(|l| format!("{:<32} {:<10} r{:<4} {}\n", l.id, l.status.as_str(), l.revision, l.title))
                        .collect()
                })
            }
            Command::Show { log } => {
                let log = self.get(&log)?;
                self.out.write_all(&docformat::serialize(&log))?;
                Ok(())
            }
            Command::Record(r) => self.record(r),
            Command::Metric(m) => self.metric(m),
            Command::Validate { log, file } => {
                let log = match (log, file) {
                    (Some(id), None) => self.get(&id)?,
                    (None, Some(src)) => {
                        let bytes = self.read_input(&src)?;
                        docformat::parse_unchecked(&bytes).map_err(format_error)?
                    }
                    _ => return Err(CliError::Usage("validate needs a log id or --file".into())),
                };
                self.report_lint(&log)
            }
            Command::Scan(a) => {
                let mut config = ScanConfig::new(&a.root);
                if !a.include.is_empty() {
                    config.include_globs = a.include;
                }
                if !a.exclude.is_empty() {
                    config.exclude_globs = a.exclude;
                }
                if let Some(m) = a.max_bytes {
                    config.max_file_bytes = m;
                }
                let report = scanner::scan(&config).map_err(|e| match e {
                    scanner::ScanError::RootNotFound(_) => CliError::Failure(e.to_string()),
                    scanner::ScanError::BadGlob { .. } => CliError::Usage(e.to_string()),
                })?;
                self.emit(&report, || {
                    let mut s = String::new();
                    for a in &report.annotations {
                        s.push_str(&format!(
                            "{}:{}: {}{}\n",
                            a.file_path,
                            a.line_number,
                            a.reference(),
                            if a.done_flag { " done" } else { "" }
                        ));
                    }
                    for w in &report.warnings {
                        s.push_str(&format!("warning {}:{}: {}\n", w.file_path, w.line_number, w.message));
                    }
                    s.push_str(&format!("{} annotation(s), {} warning(s)", report.annotations.len(), report.warnings.len()));
                    s
                })
            }
            Command::Checklist { log, scan_root } => {
                let log = self.get(&log)?;
                let report = scanner::scan(&ScanConfig::new(&scan_root)).map_err(|e| CliError::Failure(e.to_string()))?;
                let checklist = scanner::checklist(&log, &report.annotations);
                self.emit(&checklist, || {
                    let mut s = String::new();
                    for item in &checklist.items {
                        let glyph = match item.state {
                            ItemState::ImplementedInCode => "[x]",
                            ItemState::Pending => "[ ]",
                            ItemState::NotApplicable => "[-]",
                        };
                        s.push_str(&format!(
                            "{glyph} {}/{} {:<20} {} ({} evidence)\n",
                            item.record_id,
                            item.update_id,
                            item.state.as_str(),
                            item.which,
                            item.evidence.len()
                        ));
                    }
                    for f in &checklist.findings {
                        s.push_str(&format!(
                            "! {}:{} {}\n",
                            f.annotation.file_path, f.annotation.line_number, f.message
                        ));
                    }
                    s
                })
            }
            Command::Export { log, format, out } => {
                let log = self.get(&log)?;
                let text = if format == "html" { docformat::export_html(&log) } else { docformat::export_markdown(&log) };
                match out {
                    Some(path) => {
                        std::fs::write(&path, &text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
                        self.emit(&json!({ "written": path }), || format!("wrote {}", path.display()))
                    }
                    None if self.json => self.emit(&json!({ "format": format, "content": text }), String::new),
                    None => {
                        self.out.write_all(text.as_bytes())?;
                        if !text.ends_with('\n') {
                            self.out.write_all(b"\n")?;
                        }
                        Ok(())
                    }
                }
            }
            Command::Link(a) => {
                if a.chain {
                    let chain = self.registry.provenance_chain(&a.from)?;
                    return self.emit(&json!({ "log_id": a.from, "chain": chain }), || {
                        if chain.is_empty() { "(no prompting logs)".into() } else { chain.join("\n") }
                    });
                }
                let to = a.to.clone().unwrap_or_default();
                let link = LogLink {
                    from_log_id: a.from.clone(),
                    to_log_id: to.clone(),
                    relation: parse_arg::<LinkRelation>("relation", &a.relation)?,
                    note: a.note.clone(),
                };
                let actor = self.actor_for(&a.from)?;
                self.registry.add_link(link.clone(), &actor)?;
                self.emit(&link, || format!("{} -[{}]-> {}", a.from, a.relation, to))
            }
            Command::Search { query } => {
                let q = query.join(" ");
                let hits = match &self.actor {
                    Some(a) => self.registry.search(&q, a)?,
                    None => {
                        let parsed = q.parse().map_err(CliError::Usage)?;
                        SearchIndex::build(self.registry.visible_logs_unchecked()?).search(&parsed)
                    }
                };
                self.emit(&hits, || {
                    let mut s: String = hits
                        .iter()
                        .map(|h| {
                            let mut at = h.log_id.clone();
                            if let Some(r) = &h.record_id {
                                at.push('#');
                                at.push_str(r);
                            }
                            if let Some(u) = &h.update_id {
                                at.push('/');
                                at.push_str(u);
                            }
                            format!("{at} [{}] {}\n", h.matched_field, h.snippet.replace('\n', " "))
                        })
                        .collect();
                    s.push_str(&format!("{} hit(s)", hits.len()));
                    s
                })
            }
            Command::Assign(a) => {
                let actor = self.actor_for(&a.log)?;
                if a.list {
                    let all = self.registry.assignments(&a.log, &actor)?;
                    return self.emit(&all, || {
                        all.iter()
                            .map(|x| format!("{} {} {:?}\n", x.section_path, x.assignee.id, x.state).to_lowercase())
                            .collect()
                    });
                }
                if a.complete {
                    self.registry.complete_section(&a.log, &a.section, &actor)?;
                    return self.emit(&json!({ "log_id": a.log, "section_path": a.section, "state": "done" }), || {
                        format!("{} done", a.section)
                    });
                }
                let id = a.to.clone().unwrap_or_default();
                let person = PersonRef::new(id.clone(), a.name.clone().unwrap_or_else(|| id.clone()));
                let assignment = self.registry.assign_section(&a.log, &a.section, person, &actor)?;
                self.emit(&assignment, || format!("{} assigned to {id}", a.section))
            }
            Command::Finalize(a) => {
                let snapshot: PipelineSnapshot = match &a.from {
                    Some(src) => self.payload(src)?,
                    None => PipelineSnapshot {
                        data_description: a.data.clone().unwrap_or_default(),
                        model_description: a.model.clone().unwrap_or_default(),
                        metrics_note: a.metrics_note.clone(),
                        metrics: Vec::new(),
                        readings: a
                            .reading
                            .iter()
                            .map(|r| reading_arg(r).map(|d| MetricReading::new(d.metric_name, d.value, ReadingContext::Final, d.note)))
                            .collect::<Result<_, _>>()?,
                    },
                };
                let (log, findings) = self.edit(&a.log, |l| l.finalize(snapshot))?;
                self.emit(&json!({ "log_id": log.id, "revision": log.revision, "findings": findings }), || {
                    let mut s: String = findings
                        .iter()
                        .map(|f| format!("{} {} {}: {}\n", severity(f), f.rule_id, f.path, f.message))
                        .collect();
                    s.push_str(&format!("{} finalized at revision {}", log.id, log.revision));
                    s
                })
            }
            Command::Anonymize { log } => {
                let actor = self.actor_for(&log)?;
                let (anon, mapping) = self.registry.anonymized(&log, &actor)?;
                if self.json {
                    self.emit(&json!({ "log": anon, "mapping": mapping }), String::new)
                } else {
                    self.out.write_all(&docformat::serialize(&anon))?;
                    Ok(())
                }
            }
            Command::Member(MemberCommand::Add { id, name }) => {
                self.registry.add_member(PersonRef::new(id.clone(), name))?;
                self.emit(&json!({ "member": id }), || format!("added {id}"))
            }
            Command::Member(MemberCommand::List) => {
                let members = self.registry.access()?.members;
                self.emit(&members, || members.iter().map(|m| format!("{} {}\n", m.id, m.display_name)).collect())
            }
            Command::Grant { log, person, role } => {
                let actor = self.actor_for(&log)?;
                let role: Role = parse_arg("role", &role)?;
                let member = self.registry.access()?.members.into_iter().find(|m| m.id == person);
                let person_ref = member.unwrap_or_else(|| PersonRef::new(person.clone(), person.clone()));
                self.registry.grant(&log, person_ref, role, &actor)?;
                self.emit(&json!({ "log_id": log, "person": person, "role": role }), || {
                    format!("{person} is {} on {log}", role.as_str())
                })
            }
            Command::Serve { bind, tokens } => {
                let bind = parse_arg("bind address", &bind)?;
                let config = crate::service::ServeConfig {
                    registry_root: self.registry.root().to_path_buf(),
                    bind,
                    token_file: tokens,
                };
                let runtime = tokio::runtime::Runtime::new()?;
                runtime.block_on(crate::service::serve(config))?;
                Ok(())
            }
        }
    }

    fn import(&mut self, source: &str) -> CliResult {
        let bytes = self.read_input(source)?;
        let log = docformat::parse_unchecked(&bytes).map_err(format_error)?;
        let findings = lint::validate(&log);
        let errors: Vec<LintFinding> =
            findings.into_iter().filter(|f| f.severity == lint::Severity::Error).collect();
        if !errors.is_empty() {
            return Err(CliError::Invalid { message: format!("{} lint error(s) in {source}", errors.len()), findings: errors });
        }
        self.store(&log)?;
        self.emit(&json!({ "log_id": log.id }), || log.id.clone())
    }

    fn report_lint(&mut self, log: &FeedbackLog) -> CliResult {
        let findings = lint::validate(log);
        let errors = lint::error_count(&findings);
        self.emit(&json!({ "log_id": log.id, "errors": errors, "findings": findings }), || {
            let mut s: String = findings
                .iter()
                .map(|f| format!("{:<7} {:<3} {}: {}\n", severity(f), f.rule_id, f.path, f.message))
                .collect();
            s.push_str(&format!("{}: {errors} errors", log.id));
            s
        })?;
        if errors > 0 {
            // Already reported; exit 1 without repeating the findings.
            return Err(CliError::Invalid { message: format!("{errors} lint error(s)"), findings: Vec::new() });
        }
        Ok(())
    }

    fn record(&mut self, command: RecordCommand) -> CliResult {
        match command {
            RecordCommand::Open { log, from, stakeholder, reason, presentation } => {
                let elicitation: Elicitation = match from {
                    Some(src) => self.payload(&src)?,
                    None => Elicitation {
                        stakeholders: stakeholder.iter().map(|s| stakeholder_arg(s)).collect::<Result<_, _>>()?,
                        reason,
                        presentation,
                    },
                };
                let (_, rid) = self.edit(&log, |l| l.open_record(elicitation))?;
                self.emit(&json!({ "log_id": log, "record_id": rid }), || rid.clone())
            }
            RecordCommand::Feedback { log, record, text, from } => {
                let text = match (text, from) {
                    (Some(t), _) => t,
                    (None, Some(src)) => String::from_utf8_lossy(&self.read_input(&src)?).into_owned(),
                    (None, None) => return Err(CliError::Usage("feedback needs --text or --from".into())),
                };
                self.edit(&log, |l| l.set_feedback(&record, text.trim_end()))?;
                self.emit(&json!({ "log_id": log, "record_id": record }), || format!("{record}: feedback set"))
            }
            RecordCommand::Update(a) => {
                let draft: UpdateDraft = match &a.from {
                    Some(src) => self.payload(src)?,
                    None => UpdateDraft {
                        which: a.which.clone().unwrap_or_default(),
                        kinds: a.kind.iter().map(|k| parse_arg("kind", k)).collect::<Result<_, _>>()?,
                        stage: parse_arg("stage", a.stage.as_deref().unwrap_or(""))?,
                        why: a.why.clone().unwrap_or_default(),
                        effect_readings: a.reading.iter().map(|r| reading_arg(r)).collect::<Result<_, _>>()?,
                        effect_note: a.effect.clone(),
                        introduces: Vec::new(),
                    },
                };
                let (_, uid) = self.edit(&a.log, |l| l.add_candidate_update(&a.record, draft))?;
                self.emit(&json!({ "log_id": a.log, "record_id": a.record, "update_id": uid }), || uid.clone())
            }
            RecordCommand::Reject { log, record, update } => {
                self.edit(&log, |l| l.reject_update(&record, &update))?;
                self.emit(&json!({ "log_id": log, "record_id": record, "update_id": update }), || {
                    format!("{record}/{update} rejected")
                })
            }
            RecordCommand::Choose { log, record, updates, summary, combined } => {
                let combined: Vec<ReadingDraft> = combined.iter().map(|r| reading_arg(r)).collect::<Result<_, _>>()?;
                self.edit(&log, |l| l.choose_updates(&record, &updates, &summary, &combined))?;
                self.emit(&json!({ "log_id": log, "record_id": record, "chosen": updates }), || {
                    format!("{record}: implemented {}", updates.join(", "))
                })
            }
            RecordCommand::Inaction { log, record, justification } => {
                self.edit(&log, |l| l.record_inaction(&record, &justification))?;
                self.emit(&json!({ "log_id": log, "record_id": record }), || format!("{record}: completed without updates"))
            }
        }
    }

    fn metric(&mut self, command: MetricCommand) -> CliResult {
        match command {
            MetricCommand::Add { log, from, name, direction, unit, target, description, introduced_by } => {
                let spec: MetricSpec = match from {
                    Some(src) => self.payload(&src)?,
                    None => MetricSpec {
                        name: name.unwrap_or_default(),
                        description,
                        direction: parse_arg("direction", direction.as_deref().unwrap_or(""))?,
                        unit,
                        target: target.as_deref().map(|t| parse_arg("target", t)).transpose()?,
                        introduced_by: origin_arg(&introduced_by)?,
                    },
                };
                let name = spec.name.clone();
                self.edit(&log, |l| l.add_metric(spec))?;
                self.emit(&json!({ "log_id": log, "metric": name }), || format!("declared {name}"))
            }
            MetricCommand::Read { log, metric, context, value, note } => {
                let context: ReadingContext = parse_arg("context", &context)?;
                let value: Decimal = parse_arg("value", &value)?;
                let reading = MetricReading::new(metric.clone(), value, context.clone(), note);
                self.edit(&log, |l| l.add_reading(reading))?;
                self.emit(&json!({ "log_id": log, "metric": metric, "context": context.to_string(), "value": value }), || {
                    format!("{metric} at {context} = {value}")
                })
            }
            MetricCommand::Show { log, metric, context } => {
                let context: ReadingContext = parse_arg("context", &context)?;
                let l = self.get(&log)?;
                let value = l.reading_at(&metric, &context)?;
                let check = l.check_target(&metric, &context)?;
                let check = match check {
                    TargetCheck::Pass => "pass",
                    TargetCheck::Fail => "fail",
                    TargetCheck::NoTarget => "no_target",
                };
                self.emit(&json!({ "metric": metric, "context": context.to_string(), "value": value, "target": check }), || {
                    format!("{value} (target: {check})")
                })
            }
            MetricCommand::Delta { log, metric, from, to } => {
                let from: ReadingContext = parse_arg("context", &from)?;
                let to: ReadingContext = parse_arg("context", &to)?;
                let l = self.get(&log)?;
                let delta = l.metric_delta(&metric, &from, &to)?;
                let signed = if delta > Decimal::from_int(0) { format!("+{delta}") } else { delta.to_string() };
                self.emit(
                    &json!({ "metric": metric, "from": from.to_string(), "to": to.to_string(), "delta": delta }),
                    || signed.clone(),
                )
            }
        }
    }
}

fn format_error(e: FormatError) -> CliError {
    CliError::invalid(e.to_string())
}

/// Entry point for the `fblog` binary.
pub fn main() -> i32 {
    let mut stdin = std::io::stdin().lock();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run(std::env::args_os(), &mut stdin, &mut stdout, &mut stderr)
}
