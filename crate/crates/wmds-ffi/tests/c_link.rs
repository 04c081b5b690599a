//! Compiles and runs a small C program against the generated header and the
//! static library, proving the ABI from the consumer side.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "wmds.h"

int main(void) {
    WmdsInvariant *h = NULL;
    if (wmds_build('A', 2, 0, 0, &h) != WmdsStatus_Ok) return 1;
    if (wmds_rank(h) != 2) return 2;
    uint64_t order = 0;
    if (wmds_weyl_order(h, &order) != WmdsStatus_Ok || order != 6) return 3;
    char *coeff = NULL;
    uint32_t ks[2] = {2, 2};
    if (wmds_coefficient(h, ks, 2, 0, &coeff) != WmdsStatus_Ok) return 4;
    printf("a(2,2) = %s\n", coeff);
    wmds_string_free(coeff);
    int32_t j = 0;
    if (wmds_jacobi(3, 5, &j) != WmdsStatus_Ok || j != -1) return 5;
    wmds_invariant_free(h);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps/...
    let mut dir = std::env::current_exe().unwrap();
    dir.pop();
    if dir.ends_with("deps") {
        dir.pop();
    }
    dir
}

#[test]
fn c_program_links_and_runs() {
    let cc = which_cc();
    let Some(cc) = cc else {
        eprintln!("no C compiler found; skipping link test");
        return;
    };
    let staticlib = target_dir().join("libwmds_ffi.a");
    if !staticlib.exists() {
        // `cargo test` may skip the staticlib artifact depending on the
        // invocation; build it explicitly
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "wmds-ffi"])
            .status()
            .expect("cargo runs");
        assert!(status.success());
    }
    assert!(staticlib.exists(), "missing {}", staticlib.display());

    let dir = std::env::temp_dir().join(format!("wmds-clink-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let exe = dir.join("main");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");

    let compile = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("compiler runs");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&exe).output().expect("program runs");
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout), "a(2,2) = q\n");

    let _ = std::fs::remove_dir_all(&dir);
}

fn which_cc() -> Option<String> {
    for cand in ["cc", "gcc", "clang"] {
        if Command::new(cand)
            .arg("--version")
            .output()
            .map(|o| o.status.success())
            .unwrap_or(false)
        {
            return Some(cand.to_string());
        }
    }
    None
}
