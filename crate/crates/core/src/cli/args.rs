use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "fblog", version, about = "Author, lint, scan and share feedback logs")]
pub struct Cli {
    /// Registry root directory.
    #[arg(long, global = true, env = "FBLOG_REGISTRY", default_value = ".fblog")]
    pub registry: PathBuf,
    /// Emit canonical JSON instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Person id to act as. Without it the CLI acts as each log's owner.
    #[arg(long, global = true, env = "FBLOG_ACTOR")]
    pub actor: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create a new log from flags or a JSON payload.
    Init(InitArgs),
    /// Validate and store a canonical log file.
    Import {
        /// Path to a `.fblog.json` file, or `-` for stdin.
        file: String,
    },
    /// List the logs visible to the actor.
    List,
    /// Print a stored log in canonical form.
    Show { log: String },
    /// Author records: open, feedback, update, reject, choose, inaction.
    #[command(subcommand)]
    Record(RecordCommand),
    /// Declare metrics, take readings and compute deltas.
    #[command(subcommand)]
    Metric(MetricCommand),
    /// Run the lint catalog over a stored log or a file.
    Validate {
        /// Stored log id.
        log: Option<String>,
        /// Validate a file instead (`-` for stdin).
        #[arg(long, conflicts_with = "log")]
        file: Option<String>,
    },
    /// Find `FBLOG:` annotations under a directory.
    Scan(ScanArgs),
    /// Reconcile annotations with a log's chosen updates.
    Checklist {
        log: String,
        #[arg(long)]
        scan_root: PathBuf,
    },
    /// Render a log as Markdown or HTML.
    Export {
        log: String,
        #[arg(long, value_parser = ["md", "html"], default_value = "md")]
        format: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Link two logs, or print a provenance chain with `--chain`.
    Link(LinkArgs),
    /// Search visible logs: free text plus key:value filters.
    Search {
        #[arg(required = true, num_args = 1..)]
        query: Vec<String>,
    },
    /// Assign a section to a person, or mark it done.
    Assign(AssignArgs),
    /// Write the final summary and freeze the log.
    Finalize(FinalizeArgs),
    /// Print an anonymized copy of a log.
    Anonymize { log: String },
    /// Manage organisation members.
    #[command(subcommand)]
    Member(MemberCommand),
    /// Grant a person a role on one log.
    Grant {
        log: String,
        person: String,
        #[arg(value_parser = ["viewer", "editor"])]
        role: String,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "FBLOG_BIND", default_value = crate::service::DEFAULT_BIND)]
        bind: String,
        /// JSON object mapping bearer tokens to person ids.
        #[arg(long, env = "FBLOG_TOKENS")]
        tokens: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct InitArgs {
    /// JSON payload with title, pipeline_name, owner, starting_point.
    #[arg(long, conflicts_with_all = ["title", "data", "model"])]
    pub from: Option<String>,
    #[arg(long, required_unless_present = "from")]
    pub title: Option<String>,
    #[arg(long, default_value = "")]
    pub pipeline: String,
    /// Owner person id; defaults to the actor.
    #[arg(long)]
    pub owner: Option<String>,
    #[arg(long)]
    pub owner_name: Option<String>,
    #[arg(long, required_unless_present = "from")]
    pub data: Option<String>,
    #[arg(long, required_unless_present = "from")]
    pub model: Option<String>,
    #[arg(long, default_value = "")]
    pub metrics_note: String,
}

#[derive(Debug, Subcommand)]
pub enum RecordCommand {
    /// Open a record with its elicitation.
    Open {
        log: String,
        /// JSON elicitation payload.
        #[arg(long, conflicts_with_all = ["stakeholder", "reason", "presentation"])]
        from: Option<String>,
        /// `LABEL=CATEGORY[+identifiable][+consent]`, repeatable.
        #[arg(long)]
        stakeholder: Vec<String>,
        #[arg(long, default_value = "")]
        reason: String,
        #[arg(long, default_value = "")]
        presentation: String,
    },
    /// Set the feedback text of an open record.
    Feedback {
        log: String,
        record: String,
        #[arg(long, required_unless_present = "from")]
        text: Option<String>,
        /// Read the text from a file or `-`.
        #[arg(long, conflicts_with = "text")]
        from: Option<String>,
    },
    /// Add a candidate update row.
    Update(UpdateArgs),
    /// Mark a candidate update rejected.
    Reject { log: String, record: String, update: String },
    /// Choose the implemented updates and complete the record.
    Choose {
        log: String,
        record: String,
        #[arg(long = "update", required = true)]
        updates: Vec<String>,
        #[arg(long)]
        summary: String,
        /// Combined effect `METRIC=VALUE[:NOTE]`, repeatable.
        #[arg(long)]
        combined: Vec<String>,
    },
    /// Complete a record without implementing any update.
    Inaction {
        log: String,
        record: String,
        #[arg(long)]
        justification: String,
    },
}

#[derive(Debug, Args)]
pub struct UpdateArgs {
    pub log: String,
    pub record: String,
    /// JSON update payload.
    #[arg(long, conflicts_with_all = ["which", "kind", "stage", "why"])]
    pub from: Option<String>,
    #[arg(long, required_unless_present = "from")]
    pub which: Option<String>,
    /// Update kind, repeatable (dataset, metrics, other:TEXT, ...).
    #[arg(long)]
    pub kind: Vec<String>,
    #[arg(long, required_unless_present = "from")]
    pub stage: Option<String>,
    #[arg(long, required_unless_present = "from")]
    pub why: Option<String>,
    #[arg(long, default_value = "")]
    pub effect: String,
    /// Effect reading `METRIC=VALUE[:NOTE]`, repeatable.
    #[arg(long)]
    pub reading: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum MetricCommand {
    /// Declare a metric.
    Add {
        log: String,
        #[arg(long, conflicts_with_all = ["name", "direction"])]
        from: Option<String>,
        #[arg(long, required_unless_present = "from")]
        name: Option<String>,
        #[arg(long, required_unless_present = "from")]
        direction: Option<String>,
        #[arg(long, default_value = "")]
        unit: String,
        /// e.g. `>50`.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value = "")]
        description: String,
        /// `start` or `R1/U2`.
        #[arg(long, default_value = "start")]
        introduced_by: String,
    },
    /// Record a reading: `start`, `baseline:R2`, `after:R2/U3` or `combined:R2`.
    Read {
        log: String,
        metric: String,
        context: String,
        value: String,
        #[arg(long, default_value = "")]
        note: String,
    },
    /// Print the reading at one context.
    Show { log: String, metric: String, context: String },
    /// Print `to - from` for a metric, e.g. `baseline:R2 final`.
    Delta { log: String, metric: String, from: String, to: String },
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub root: PathBuf,
    /// Include glob, repeatable (default: every file).
    #[arg(long)]
    pub include: Vec<String>,
    /// Exclude glob, repeatable (default: VCS and build directories).
    #[arg(long)]
    pub exclude: Vec<String>,
    #[arg(long)]
    pub max_bytes: Option<u64>,
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    /// Source log (with `--chain`, the log whose provenance to print).
    pub from: String,
    #[arg(required_unless_present = "chain")]
    pub to: Option<String>,
    #[arg(long, value_parser = ["prompted", "refines", "same_pipeline", "supersedes"], default_value = "prompted")]
    pub relation: String,
    #[arg(long, default_value = "")]
    pub note: String,
    /// Print the logs that prompted FROM instead of adding a link.
    #[arg(long)]
    pub chain: bool,
}

#[derive(Debug, Args)]
pub struct AssignArgs {
    pub log: String,
    /// e.g. `records[1].incorporation`.
    pub section: String,
    #[arg(long, required_unless_present_any = ["complete", "list"])]
    pub to: Option<String>,
    #[arg(long)]
    pub name: Option<String>,
    /// Mark the section done.
    #[arg(long, conflicts_with = "to")]
    pub complete: bool,
    /// List the log's assignments (SECTION is ignored).
    #[arg(long, conflicts_with_all = ["to", "complete"])]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct FinalizeArgs {
    pub log: String,
    /// JSON final snapshot payload.
    #[arg(long, conflicts_with_all = ["data", "model"])]
    pub from: Option<String>,
    #[arg(long, required_unless_present = "from")]
    pub data: Option<String>,
    #[arg(long, required_unless_present = "from")]
    pub model: Option<String>,
    #[arg(long, default_value = "")]
    pub metrics_note: String,
    /// Final reading `METRIC=VALUE[:NOTE]`, repeatable.
    #[arg(long)]
    pub reading: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum MemberCommand {
    /// Add a member with the default global viewer grant.
    Add { id: String, name: String },
    /// List members.
    List,
}
