//! Replaces identifiable stakeholder names with pseudonyms.
//!
//! cargo run --example anonymize

use feedbacklog::registry::anonymize;
use feedbacklog::{corpus, docformat};

fn main() {
    let log = corpus::image_recognition_identified();
    let (anon, mapping) = anonymize(&log);
    for entry in &mapping {
        println!("{} = {} ({})", entry.pseudonym, entry.label, entry.category);
    }
    let text = String::from_utf8(docformat::serialize(&anon)).unwrap();
    for entry in &mapping {
        assert!(!text.contains(&entry.label));
    }
    println!("\nbefore: {}", log.records[0].feedback_text);
    println!("after:  {}", anon.records[0].feedback_text);
}
