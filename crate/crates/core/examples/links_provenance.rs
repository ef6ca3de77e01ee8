//! Links logs with `prompted` edges and walks a provenance chain.
//!
//! cargo run --example links_provenance

use feedbacklog::corpus;
use feedbacklog::registry::{LinkRelation, LogLink, Registry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let registry = Registry::open(dir.path())?;
    for log in corpus::all() {
        registry.put(&log, &log.owner.id)?;
    }

    let edges = [
        ("asthma-conversational-agent", "sexual-health", "Elicitation format reused"),
        ("sexual-health", "image-recognition", "Same review board"),
    ];
    for (from, to, note) in edges {
        let owner = registry.get(from, &owner_of(from))?.owner.id;
        registry.add_link(
            LogLink { from_log_id: from.into(), to_log_id: to.into(), relation: LinkRelation::Prompted, note: note.into() },
            &owner,
        )?;
    }

    for id in ["image-recognition", "sexual-health", "tv-content-recommendation"] {
        println!("{id} <- {:?}", registry.provenance_chain(id)?);
    }
    Ok(())
}

fn owner_of(id: &str) -> String {
    corpus::all().into_iter().find(|l| l.id == id).map(|l| l.owner.id).unwrap_or_default()
}
