//! Reads the robustness metric of the image-recognition log at every step
//! and checks it against its target.
//!
//! cargo run --example metric_impact

use feedbacklog::corpus;
use feedbacklog::model::ReadingContext;

fn main() -> Result<(), feedbacklog::ModelError> {
    let log = corpus::image_recognition();
    let spec = log.metric_spec("robustness").expect("robustness metric");
    println!("robustness ({}), target {}", spec.unit, spec.target.expect("target"));

    for at in ["baseline:R2", "after:R2/U1", "after:R2/U2", "after:R2/U3", "combined:R2", "final"] {
        let ctx: ReadingContext = at.parse().expect("context");
        let value = log.reading_at("robustness", &ctx)?;
        let check = log.check_target("robustness", &ctx)?;
        println!("  {at:<12} {value:>4}  {check:?}");
    }

    let delta = log.metric_delta("robustness", &"baseline:R2".parse().unwrap(), &ReadingContext::Final)?;
    println!("baseline to final: {delta:+}");
    Ok(())
}
