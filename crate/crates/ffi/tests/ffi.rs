use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use tclab_ffi::*;

fn last_error() -> String {
    let p = tclab_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn spec(family: TclabFamily, n: u64, k: u64, h: u64) -> TclabSpec {
    TclabSpec {
        family: family as u32,
        n,
        k,
        h,
    }
}

fn generate(s: &TclabSpec) -> *mut TclabEdges {
    let mut edges = ptr::null_mut();
    assert_eq!(unsafe { tclab_generate(s, &mut edges) }, TclabStatus::Ok);
    edges
}

fn evaluate(
    edges: *const TclabEdges,
    engine: TclabEngine,
    variant: TclabVariant,
) -> *mut TclabResult {
    let mut result = ptr::null_mut();
    let status = unsafe { tclab_evaluate(edges, engine as u32, variant as u32, &mut result) };
    assert_eq!(status, TclabStatus::Ok);
    result
}

fn paths(result: *const TclabResult) -> Vec<TclabPair> {
    let mut len = 0;
    unsafe {
        assert_eq!(tclab_result_paths_len(result, &mut len), TclabStatus::Ok);
        let mut out = vec![TclabPair::default(); len];
        assert_eq!(
            tclab_result_paths_copy(result, out.as_mut_ptr(), out.len()),
            TclabStatus::Ok
        );
        out
    }
}

#[test]
fn generate_evaluate_and_inspect() {
    let edges = generate(&spec(TclabFamily::Cmpl, 3, 0, 0));
    let mut len = 0;
    assert_eq!(unsafe { tclab_edges_len(edges, &mut len) }, TclabStatus::Ok);
    assert_eq!(len, 9);

    let result = evaluate(edges, TclabEngine::MinIncrement, TclabVariant::Left);
    let mut instr = TclabInstrumentation::default();
    assert_eq!(
        unsafe { tclab_result_instrumentation(result, &mut instr) },
        TclabStatus::Ok
    );
    assert_eq!(instr.rec_firings, 27);
    assert_eq!(instr.base_firings, 9);
    assert_eq!(paths(result).len(), 9);

    let mut ms = -1.0;
    assert_eq!(
        unsafe { tclab_result_phase_ms(result, TclabPhase::Query as u32, &mut ms) },
        TclabStatus::Ok
    );
    assert!(ms >= 0.0);
    assert_eq!(
        unsafe { tclab_result_phase_ms(result, TclabPhase::Solve as u32, &mut ms) },
        TclabStatus::Ok
    );
    assert_eq!(ms, 0.0);

    unsafe {
        tclab_result_free(result);
        tclab_edges_free(edges);
    }
}

#[test]
fn hand_built_edges() {
    let edges = tclab_edges_new();
    unsafe {
        assert_eq!(tclab_edges_insert(edges, 2, 3), TclabStatus::Ok);
        assert_eq!(tclab_edges_insert(edges, 1, 2), TclabStatus::Ok);
        assert_eq!(tclab_edges_insert(edges, 1, 2), TclabStatus::Ok);
        assert_eq!(
            tclab_edges_insert(edges, 0, 2),
            TclabStatus::InvalidArgument
        );
    }
    assert!(last_error().contains("start at 1"));

    let mut copied = [TclabPair::default(); 2];
    assert_eq!(
        unsafe { tclab_edges_copy(edges, copied.as_mut_ptr(), 2) },
        TclabStatus::Ok
    );
    assert_eq!(
        copied,
        [
            TclabPair {
                source: 1,
                target: 2
            },
            TclabPair {
                source: 2,
                target: 3
            }
        ]
    );

    let result = evaluate(edges, TclabEngine::TopDown, TclabVariant::Right);
    let got = paths(result);
    assert_eq!(got.len(), 3);
    assert_eq!(
        got[1],
        TclabPair {
            source: 1,
            target: 3
        }
    );
    let mut instr = TclabInstrumentation::default();
    unsafe { tclab_result_instrumentation(result, &mut instr) };
    assert_eq!(instr.tables_created, 3);

    let mut small = [TclabPair::default(); 2];
    assert_eq!(
        unsafe { tclab_result_paths_copy(result, small.as_mut_ptr(), small.len()) },
        TclabStatus::InvalidArgument
    );
    unsafe {
        tclab_result_free(result);
        tclab_edges_free(edges);
    }
}

#[test]
fn predictions() {
    let mut p = TclabPrediction::default();
    assert_eq!(
        unsafe { tclab_predict(&spec(TclabFamily::Grid, 2, 99, 99), &mut p) },
        TclabStatus::Ok
    );
    assert_eq!((p.paths, p.combos_double), (5, 2));
    assert_eq!(
        unsafe { tclab_predict(&spec(TclabFamily::BinTree, 0, 0, 3), &mut p) },
        TclabStatus::Ok
    );
    assert_eq!(p.combos_left, 4);
    assert_eq!(
        unsafe { tclab_predict(&spec(TclabFamily::CycExtra, 10, 3, 0), &mut p) },
        TclabStatus::InvalidSpec
    );
    assert!(
        last_error().contains("(k+1) must divide n"),
        "{}",
        last_error()
    );
}

#[test]
fn argument_errors() {
    let mut edges = ptr::null_mut();
    let bad_family = TclabSpec {
        family: 99,
        n: 1,
        k: 0,
        h: 0,
    };
    assert_eq!(
        unsafe { tclab_generate(&bad_family, &mut edges) },
        TclabStatus::InvalidArgument
    );
    assert!(last_error().contains("TclabFamily"));
    assert!(edges.is_null());
    assert_eq!(
        unsafe { tclab_generate(ptr::null(), &mut edges) },
        TclabStatus::NullPointer
    );
    assert_eq!(
        unsafe { tclab_generate(&spec(TclabFamily::Cyc, 3, 0, 0), ptr::null_mut()) },
        TclabStatus::NullPointer
    );

    let edges = generate(&spec(TclabFamily::Cyc, 3, 0, 0));
    let mut result = ptr::null_mut();
    assert_eq!(
        unsafe { tclab_evaluate(edges, 7, 0, &mut result) },
        TclabStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { tclab_evaluate(edges, 0, 3, &mut result) },
        TclabStatus::InvalidArgument
    );
    assert!(result.is_null());
    unsafe {
        tclab_edges_free(edges);
        tclab_edges_free(ptr::null_mut());
        tclab_result_free(ptr::null_mut());
    }
}

#[test]
fn file_round_trip_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let file = CString::new(dir.path().join("grid.lp").to_str().unwrap()).unwrap();
    let edges = generate(&spec(TclabFamily::Grid, 3, 0, 0));
    unsafe {
        assert_eq!(
            tclab_edges_write(edges, file.as_ptr(), TclabFormat::Asp as u32),
            TclabStatus::Ok
        );
        let mut back = ptr::null_mut();
        assert_eq!(
            tclab_edges_read(file.as_ptr(), TclabFormat::Asp as u32, &mut back),
            TclabStatus::Ok
        );
        let (mut a, mut b) = (0, 0);
        tclab_edges_len(edges, &mut a);
        tclab_edges_len(back, &mut b);
        assert_eq!((a, b), (12, 12));
        tclab_edges_free(back);

        let mut other = ptr::null_mut();
        assert_eq!(
            tclab_edges_read(file.as_ptr(), TclabFormat::Tsv as u32, &mut other),
            TclabStatus::ParseError
        );
        assert!(last_error().contains("line 1"));
        let missing = CString::new(dir.path().join("nope").to_str().unwrap()).unwrap();
        assert_eq!(
            tclab_edges_read(missing.as_ptr(), 0, &mut other),
            TclabStatus::Io
        );
        assert_eq!(
            tclab_edges_read(ptr::null(), 0, &mut other),
            TclabStatus::NullPointer
        );
        tclab_edges_free(edges);
    }
}

#[test]
fn header_is_generated() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/tclab.h"))
            .unwrap();
    for name in [
        "typedef struct TclabEdges TclabEdges;",
        "typedef struct TclabResult TclabResult;",
        "TCLAB_STATUS_INTEGRITY = 5",
        "TclabStatus tclab_evaluate(",
        "const char *tclab_last_error_message(void);",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

/// Compiles `tests/c/smoke.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let Some(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let deps = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = deps.join("libtclab_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "paths=5 predicted=5 tables=4 first=(1,2)\ninvalid=2 CycExtra: (k+1) must divide n\n"
    );
}

fn which_cc() -> Option<PathBuf> {
    ["cc", "gcc", "clang"].iter().find_map(|name| {
        std::env::var_os("PATH").and_then(|paths| {
            std::env::split_paths(&paths)
                .map(|d| d.join(name))
                .find(|p| p.exists())
        })
    })
}
