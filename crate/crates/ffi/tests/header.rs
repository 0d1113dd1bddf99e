use std::path::Path;
use std::process::Command;

const USAGE: &str = r#"
#include "fundgap.h"
int main(void) {
    struct FgParams *p = 0;
    struct FgGap g;
    char msg[256];
    if (fg_params_new(2, 0.5, 1.0, &p) != FG_STATUS_OK) {
        fg_last_error(msg, sizeof msg, 0);
        return 1;
    }
    enum FgStatus s = fg_gap(p, &g);
    fg_params_free(p);
    return s == FG_STATUS_OK && FG_SERIES_KIND_GAP == 3 && FG_METHOD_SHOOTING == 0 ? 0 : 1;
}
"#;

fn compile(compiler: &str, lang: &str) {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(&src, USAGE).unwrap();
    let out = match Command::new(compiler)
        .args(["-x", lang, "-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
    {
        Ok(o) => o,
        Err(_) => {
            eprintln!("{compiler} not found, skipping");
            return;
        }
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn header_compiles_as_c() {
    compile("cc", "c");
}

#[test]
fn header_compiles_as_cpp() {
    compile("c++", "c++");
}
