//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "turanlab.h"

int main(void) {
    TlHypergraph *h = NULL;
    if (tl_hypergraph_turan(6, 3, 3, &h) != TL_STATUS_OK) return 10;
    if (tl_hypergraph_edge_count(h) != 8) return 11;
    bool ok = false;
    if (tl_is_cancellative(h, &ok) != TL_STATUS_OK || !ok) return 12;
    char *json = NULL;
    if (tl_verify_json("theorem13", h, 0, &json) != TL_STATUS_OK) return 13;
    if (strstr(json, "\"holds\":true") == NULL) return 14;
    tl_string_free(json);
    tl_hypergraph_free(h);
    if (tl_hypergraph_parse("3 3\n1 2 4\n", &h) != TL_STATUS_PARSE_ERROR) return 15;
    if (strlen(tl_last_error()) == 0) return 16;
    printf("%s\n", tl_version());
    return 0;
}
"#;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// `target/<profile>`, found from this test binary's location.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn compiler() -> Option<String> {
    ["cc", "clang", "gcc"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .map(String::from)
}

#[test]
fn header_is_generated_and_self_contained() {
    let header = crate_dir().join("include/turanlab.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in ["tl_hypergraph_parse", "tl_verify_json", "tl_last_error", "TL_STATUS_PRECONDITION"] {
        assert!(text.contains(symbol), "{symbol} missing from header");
    }
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping syntax check");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("check.c");
    std::fs::write(&src, "#include \"turanlab.h\"\nint main(void) { return 0; }\n").unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(crate_dir().join("include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping link test");
        return;
    };
    let lib = profile_dir().join("libturanlab_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping link test", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "link failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
}
