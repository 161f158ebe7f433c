//! Compiles a small C program against the generated header, then links it
//! with the static library and runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

/// Builds the static library (tests only get the rlib) and returns its path.
fn build_staticlib() -> PathBuf {
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "--offline", "--lib", "-p", "fracchain-ffi"])
        .current_dir(crate_dir())
        .status()
        .unwrap();
    assert!(status.success(), "cargo build of the static library failed");
    // target/<profile>/deps/<test exe> -> target/debug
    let exe = std::env::current_exe().unwrap();
    let target = exe.ancestors().nth(3).unwrap();
    target.join("debug/libfracchain_ffi.a")
}

#[test]
fn header_compiles_as_c_and_cpp() {
    if !have_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let include = crate_dir().join("include");
    let src = crate_dir().join("tests/c/smoke.c");
    for (lang, std) in [("c", "-std=c99"), ("c++", "-std=c++11")] {
        let out = Command::new("cc")
            .args(["-x", lang, std, "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
            .arg(&include)
            .arg(&src)
            .output()
            .unwrap();
        assert!(out.status.success(), "{lang}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_and_runs() {
    if !have_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let lib = build_staticlib();
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let out = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "link: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.starts_with("len 4001 alpha 0.6330"), "{text}");
}
