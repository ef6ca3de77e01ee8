//! Feedback logs: typed, versioned records of how stakeholder feedback on an
//! ML pipeline was elicited, what it said, and how it was incorporated.
//!
//! - [`model`]: the document model and its lifecycle operations.
//! - [`lint`]: the completeness rule catalog.
//! - [`docformat`]: canonical JSON plus Markdown and HTML exports.
//! - [`scanner`]: `FBLOG:` source annotations and the incorporation checklist.
//! - [`registry`]: on-disk multi-log store with links, search and access control.
//! - [`service`]: HTTP/JSON facade over the registry.
//! - [`cli`]: the `fblog` command line.
//!
//! The `examples/` directory walks through each capability end to end.

pub mod cli;
pub mod corpus;
pub mod docformat;
pub mod lint;
pub mod model;
pub mod registry;
pub mod scanner;
pub mod service;

pub use lint::{validate, LintFinding, Severity};
pub use model::{FeedbackLog, ModelError};
