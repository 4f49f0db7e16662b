mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::BIRD_CHAIR;

fn physlayout(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_physlayout")).args(args).current_dir(cwd).output().unwrap()
}

#[test]
fn subcommands_agree_with_the_pipeline() {
    let d = tempfile::tempdir().unwrap();
    let dir = d.path();
    std::fs::write(dir.join("s.scene"), BIRD_CHAIR).unwrap();

    let parsed = physlayout(&["parse", "s.scene"], dir);
    assert!(parsed.status.success());
    let graph: serde_json::Value = serde_json::from_slice(&parsed.stdout).unwrap();
    assert_eq!(graph["assets"].as_array().unwrap().len(), 2);

    let laid = physlayout(&["layout", "s.scene", "--critic", "rule", "--assets", "primitives", "-o", "out"], dir);
    assert_eq!(laid.status.code(), Some(0), "{}", String::from_utf8_lossy(&laid.stderr));

    let scored = physlayout(&["score", "out/layout.json"], dir);
    assert!(scored.status.success());
    let report: serde_json::Value = serde_json::from_slice(&scored.stdout).unwrap();
    assert_eq!(report["score"], 1.0);

    assert!(physlayout(&["render", "out/layout.json", "-o", "render"], dir).status.success());
    assert!(physlayout(&["export", "out/layout.json", "-o", "again.glb"], dir).status.success());
    for (a, b) in [("out/snap_x.ppm", "render/snap_x.ppm"), ("out/snap_z.ppm", "render/snap_z.ppm"), ("out/scene.glb", "again.glb")] {
        assert_eq!(std::fs::read(dir.join(a)).unwrap(), std::fs::read(dir.join(b)).unwrap(), "{a} vs {b}");
    }
}

#[test]
fn input_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("bad.scene"), "asset: x | size=huge | desc=\"x\"\n").unwrap();
    assert_eq!(physlayout(&["parse", "bad.scene"], d.path()).status.code(), Some(2));
    assert_eq!(physlayout(&["layout", "bad.scene", "-o", "out"], d.path()).status.code(), Some(2));
    assert!(d.path().join("out/error.json").is_file());
}
