//! Scans a source tree for `FBLOG:` annotations and prints the
//! implementation checklist for the image-recognition log.
//!
//! cargo run --example scan_checklist [ROOT]
//!
//! Without ROOT a small annotated tree is generated in a temp directory.

use feedbacklog::corpus;
use feedbacklog::scanner::{self, ItemState, ScanConfig};

fn demo_tree(root: &std::path::Path) -> std::io::Result<()> {
    std::fs::create_dir_all(root.join("src"))?;
    std::fs::write(
        root.join("src/augment.py"),
        "def cutmix(batch):\n    # FBLOG: image-recognition#R2/U3 done\n    return batch\n",
    )?;
    std::fs::write(root.join("src/old.py"), "# FBLOG: image-recognition#R7/U1\n")?;
    std::fs::write(root.join("src/typo.py"), "# FBLOG: image-recognition#R2-U1\n")?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tmp = tempfile::tempdir()?;
    let root = match std::env::args().nth(1) {
        Some(r) => r.into(),
        None => {
            demo_tree(tmp.path())?;
            tmp.path().to_path_buf()
        }
    };

    let report = scanner::scan(&ScanConfig::new(&root))?;
    for w in &report.warnings {
        println!("warning {}:{}: {}", w.file_path, w.line_number, w.message);
    }

    let checklist = scanner::checklist(&corpus::image_recognition(), &report.annotations);
    for item in &checklist.items {
        let mark = match item.state {
            ItemState::ImplementedInCode => "x",
            ItemState::Pending => " ",
            ItemState::NotApplicable => "-",
        };
        println!("[{mark}] {}/{} {}", item.record_id, item.update_id, item.which);
        for a in &item.evidence {
            println!("      {}:{}", a.file_path, a.line_number);
        }
    }
    for f in &checklist.findings {
        println!("{:?}: {}", f.kind, f.message);
    }
    Ok(())
}
