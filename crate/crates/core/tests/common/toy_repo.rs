//! A small annotated source tree for the image recognition log.

use std::fs;
use std::path::Path;

/// Writes the tree under `root`: 24 scanned files, five annotations
/// (R2/U3 twice, a stale R9/U9, an unchosen R2/U2, one for another log),
/// one malformed line and decoys that must be skipped.
pub fn write(root: &Path) {
    let file = |rel: &str, body: &[u8]| {
        let p = root.join(rel);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(p, body).unwrap();
    };
    file("src/train.py", b"import torch\n\n# FBLOG: image-recognition#R2/U3 done\ndef cutmix(batch):\n    return batch\n");
    file("src/models/resnet.py", b"# ResNet-101 backbone\n# FBLOG: image-recognition#R9/U9\nclass Net: pass\n");
    file("src/losses.py", b"def meal_v2_loss():  # FBLOG: image-recognition#R2/U2\n    pass\n");
    file("src/chat/intents.py", b"# FBLOG: asthma-conversational-agent#R2/U1\nINTENTS = []\n");
    file("src/eval.py", b"# FBLOG: image-recognition#R2/X3\nprint('eval')\n");
    file("tests/test_train.py", b"def test_cutmix():\n    # FBLOG: image-recognition#R2/U3\n    assert True\n");
    for i in 0..12 {
        file(&format!("src/util/helper_{i:02}.py"), format!("def helper_{i}():\n    return {i}\n").as_bytes());
    }
    file("README.md", b"Toy pipeline. Annotate code with FBLOG comments.\n");
    file("setup.cfg", b"[metadata]\nname = toy\n");
    file("data/README.txt", b"datasets live elsewhere\n");
    file("docs/notes.txt", b"fblog: lowercase is not an annotation #R1/U1\n");
    file("src/weights.bin", b"\x00\x01FBLOG: image-recognition#R1/U1\n");
    file(".git/config", b"# FBLOG: image-recognition#R1/U1\n");
    file("node_modules/pkg/index.js", b"// FBLOG: image-recognition#R1/U1\n");
    file("target/debug/out.txt", b"FBLOG: image-recognition#R1/U1\n");
}
