//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "dotpairs.h"

int main(void) {
    DpPointSet *set = NULL;
    if (dp_gen_line_fan(12, 3, &set) != DP_STATUS_OK) return 10;
    uint64_t total = 0;
    if (dp_count(set, "1", "1", DP_COUNT_METHOD_FAST, &total) != DP_STATUS_OK) return 11;
    size_t s_star = 0, t_star = 0;
    if (dp_flat_stats(set, &s_star, &t_star) != DP_STATUS_OK) return 12;
    dp_point_set_free(set);
    if (dp_gen_line_fan(10, 3, &set) != DP_STATUS_INVALID_PARAMETER) return 13;
    if (dp_last_error_message() == NULL) return 14;
    printf("%llu %zu\n", (unsigned long long)total, s_star);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler on PATH; skipping");
        return;
    }
    let lib = target_dir().join("libdotpairs_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "24 2");
}
