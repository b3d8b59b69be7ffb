//! Compiles and runs examples/demo.c against the produced static library,
//! exercising the committed header through a real C toolchain. Skipped when
//! no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_demo_builds_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no `cc` on PATH");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".to_string());
    // The static library is not guaranteed to exist when only the test
    // harness was built, so request it explicitly (cheap when cached).
    let status = Command::new(&cargo)
        .args(["build", "-p", "conic-dsrg-ffi"])
        .current_dir(&manifest)
        .status()
        .expect("cargo must run");
    assert!(status.success(), "building the static library failed");

    let target_dir = std::env::var("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|_| manifest.join("../../target"));
    let staticlib = target_dir.join("debug").join("libconic_dsrg_ffi.a");
    assert!(staticlib.exists(), "missing {}", staticlib.display());

    let out_dir = tempfile_dir();
    let binary = out_dir.join("cds_demo");
    let compile = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("examples/demo.c"))
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .output()
        .expect("cc must run");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().expect("demo must run");
    assert!(run.status.success());
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("delta A dsrg(63,11,8,1,2): PASS"), "{stdout}");
    assert!(stdout.contains("B ~ A^T: 1"), "{stdout}");
    assert!(stdout.contains("|Aut| = 1512"), "{stdout}");
    assert!(stdout.contains("classes = 2"), "{stdout}");
    std::fs::remove_dir_all(&out_dir).ok();
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cds-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}
