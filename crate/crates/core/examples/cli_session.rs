//! Drives the `fblog` command line in-process against a scratch registry.
//!
//! cargo run --example cli_session

use feedbacklog::{cli, corpus, docformat};

fn fblog(registry: &str, args: &[&str]) -> i32 {
    let mut argv = vec!["fblog", "--registry", registry];
    argv.extend_from_slice(args);
    println!("$ fblog {}", args.join(" "));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut std::io::empty(), &mut out, &mut err);
    print!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
    println!("(exit {code})\n");
    code
}

fn main() -> std::io::Result<()> {
    let dir = tempfile::tempdir()?;
    let registry = dir.path().join("registry").display().to_string();
    let file = dir.path().join("image.fblog.json");
    std::fs::write(&file, docformat::serialize(&corpus::image_recognition()))?;
    let file = file.display().to_string();

    fblog(&registry, &["import", &file]);
    fblog(&registry, &["validate", "image-recognition"]);
    fblog(&registry, &["metric", "delta", "image-recognition", "robustness", "baseline:R2", "final"]);
    fblog(&registry, &["metric", "show", "image-recognition", "robustness", "after:R2/U3"]);
    fblog(&registry, &["search", "cutmix"]);
    fblog(&registry, &["search", "colour:blue"]);
    fblog(&registry, &["show", "missing-log"]);
    Ok(())
}
