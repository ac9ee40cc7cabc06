//! The generated header must compile as C and declare the whole API.

use std::path::Path;
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/frame_lab.h");

#[test]
fn declares_every_entry_point() {
    let text = std::fs::read_to_string(HEADER).unwrap();
    for name in [
        "fl_status_message",
        "fl_last_error_message",
        "fl_system_new",
        "fl_system_free",
        "fl_system_dim",
        "fl_system_count",
        "fl_system_copy_coords",
        "fl_random_system",
        "fl_build_untf",
        "fl_evaluate",
        "fl_ratios",
        "fl_frame_potential",
        "fl_tightness_defect",
        "fl_bounds",
        "fl_optimize",
        "typedef struct FlSystem FlSystem",
        "FL_STATUS_OK = 0",
        "FL_STATUS_PANIC = 8",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

/// Compiles, links against the static library and runs a small C program.
#[test]
fn c_program_links_and_runs() {
    let program = r#"
#include <math.h>
#include "frame_lab.h"
int main(void) {
    FlSystem *s = NULL;
    FlBounds b;
    double v;
    if (fl_build_untf(2, 4, 1.0, 0, &s) != FL_STATUS_OK) return 1;
    if (fl_evaluate(s, 0.0, &v) != FL_STATUS_OK || fabs(v - 1.0) > 1e-9) return 2;
    if (fl_bounds(2, 4, 1.0, 2.0, 0.1, &b) != FL_STATUS_OK || b.sigma0_value != 1.0) return 3;
    fl_system_free(s);
    if (fl_system_new(2, 1, NULL, &s) != FL_STATUS_NULL_POINTER) return 4;
    if (fl_last_error_message()[0] == '\0') return 5;
    return fl_status_message(FL_STATUS_OK) == NULL;
}
"#;
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let source = dir.join("header_check.c");
    std::fs::write(&source, program).unwrap();
    let binary = dir.join("header_check");
    // target/<profile>/deps/<this test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let library = profile_dir.join("libframe_lab_ffi.a");
    assert!(library.exists(), "{} not built", library.display());

    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let output = Command::new(&compiler)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(Path::new(HEADER).parent().unwrap())
        .arg(&source)
        .arg(&library)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .output()
        .unwrap_or_else(|e| panic!("cannot run C compiler {compiler:?}: {e}"));
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let status = Command::new(&binary).status().unwrap();
    assert_eq!(status.code(), Some(0));
}
