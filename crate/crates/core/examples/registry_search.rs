//! Stores the reference logs in a registry and runs a few searches.
//!
//! cargo run --example registry_search [QUERY...]

use feedbacklog::corpus;
use feedbacklog::model::PersonRef;
use feedbacklog::registry::Registry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let registry = Registry::open(dir.path())?;
    for log in corpus::all() {
        registry.put(&log, &log.owner.id)?;
    }
    registry.add_member(PersonRef::new("reader", "Reader"))?;

    let args: Vec<String> = std::env::args().skip(1).collect();
    let queries = if args.is_empty() {
        vec!["clinician".to_string(), "kind:dataset stage:training".into(), "robustness status:finalized".into()]
    } else {
        vec![args.join(" ")]
    };
    for q in queries {
        println!("> {q}");
        for hit in registry.search(&q, "reader")? {
            let at = [Some(hit.log_id.as_str()), hit.record_id.as_deref(), hit.update_id.as_deref()]
                .into_iter()
                .flatten()
                .collect::<Vec<_>>()
                .join("/");
            println!("  {at} [{}] {}", hit.matched_field, hit.snippet);
        }
    }
    Ok(())
}
