//! Two editors save changes based on the same revision; the second one gets
//! a stale-revision error and retries through `Registry::edit`.
//!
//! cargo run --example concurrent_edit

use feedbacklog::corpus;
use feedbacklog::model::PersonRef;
use feedbacklog::registry::{Registry, RegistryError, Role};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let registry = Registry::open(dir.path())?;
    let log = corpus::recommender();
    let owner = log.owner.id.clone();
    registry.put(&log, &owner)?;
    registry.grant(&log.id, PersonRef::new("sam", "Sam"), Role::Editor, &owner)?;

    let base = registry.get(&log.id, &owner)?;
    let mut mine = base.clone();
    mine.title = "TV content recommendation (Q3)".into();
    mine.revision += 1;
    let mut theirs = base.clone();
    theirs.pipeline_name = "tv-recs-v2".into();
    theirs.revision += 1;

    registry.put(&mine, &owner)?;
    match registry.put(&theirs, "sam") {
        Err(RegistryError::StaleRevision { stored, given, .. }) => {
            println!("sam's save rejected: revision {given} is not newer than the stored {stored}");
        }
        other => println!("unexpected: {other:?}"),
    }

    let (merged, ()) = registry.edit(&log.id, "sam", |l| {
        l.pipeline_name = "tv-recs-v2".into();
        Ok(())
    })?;
    println!("revision {}: {:?} / {:?}", merged.revision, merged.title, merged.pipeline_name);
    Ok(())
}
