//! Exports a log as Markdown and HTML.
//!
//! cargo run --example export_formats [OUT_DIR]

use feedbacklog::{corpus, docformat};

fn main() -> std::io::Result<()> {
    let log = corpus::image_recognition();
    let md = docformat::export_markdown(&log);
    let html = docformat::export_html(&log);
    match std::env::args().nth(1) {
        Some(dir) => {
            let dir = std::path::Path::new(&dir);
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("{}.md", log.id)), &md)?;
            std::fs::write(dir.join(format!("{}.html", log.id)), &html)?;
            println!("wrote {}.md and {}.html to {}", log.id, log.id, dir.display());
        }
        None => {
            print!("{md}");
            println!("\n({} bytes of HTML not shown)", html.len());
        }
    }
    Ok(())
}
