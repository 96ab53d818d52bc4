//! Acceptance: the determinism gate. Running `map` twice with identical
//! inputs and configuration must produce byte-identical JSON and SVG.

use std::path::Path;
use std::process::Command;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run_map(out_dir: &Path) {
    let status = Command::new(env!("CARGO_BIN_EXE_coword"))
        .args([
            "map",
            "-i",
            &fixture("m6.txt"),
            "--min-freq",
            "2",
            "--min-theme-size",
            "2",
            "--max-theme-size",
            "3",
            "--out-dir",
        ])
        .arg(out_dir)
        .status()
        .expect("spawn coword");
    assert!(status.success(), "map exited with {status}");
}

#[test]
fn criterion_8_determinism_gate() {
    let workspace = tempfile::tempdir().unwrap();
    let first = workspace.path().join("first");
    let second = workspace.path().join("second");

    run_map(&first);
    run_map(&second);

    for artifact in ["report.json", "map.svg"] {
        let a = std::fs::read(first.join(artifact)).unwrap();
        let b = std::fs::read(second.join(artifact)).unwrap();
        assert_eq!(a, b, "{artifact} differs between identical runs");
        assert!(!a.is_empty());
    }

    // Rerunning into the same directory reproduces every byte, the run
    // manifest included (no timestamp without --stamp).
    let manifest_before = std::fs::read(first.join("run-manifest.txt")).unwrap();
    run_map(&first);
    let manifest_after = std::fs::read(first.join("run-manifest.txt")).unwrap();
    assert_eq!(manifest_before, manifest_after);

    println!("criterion 8: PASS — map reruns are byte-identical (JSON, SVG, manifest)");
}
