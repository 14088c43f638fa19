use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use sugeno_ffi::*;

const EX2: &str = r#"{"n": 3, "chain": {"type": "unit"}, "values": {
    "{1}": "1/3", "{2}": "1/3", "{3}": "1/3",
    "{1,2}": "2/3", "{1,3}": "2/3", "{2,3}": "2/3"}}"#;

const FINITE: &str = r#"{"n": 2, "chain": {"type": "finite", "levels": ["0", "1", "2"]},
    "values": {"{1}": "1", "{2}": "2"}}"#;

const TRUNCATED: &str = r#"{"chain": {"type": "finite", "levels": ["0", "1", "2"]}, "n": 2, "entries": [
    {"x": ["0", "0"], "v": "0"}, {"x": ["0", "1"], "v": "1"}, {"x": ["0", "2"], "v": "2"},
    {"x": ["1", "0"], "v": "1"}, {"x": ["1", "1"], "v": "2"}, {"x": ["1", "2"], "v": "2"},
    {"x": ["2", "0"], "v": "2"}, {"x": ["2", "1"], "v": "2"}, {"x": ["2", "2"], "v": "2"}]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = CStr::from_ptr(s).to_str().unwrap().to_owned();
    sugeno_string_free(s);
    owned
}

fn last_error() -> Option<String> {
    let p = sugeno_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned())
}

unsafe fn capacity(json: &str) -> *mut SugenoCapacity {
    let mut m = ptr::null_mut();
    assert_eq!(sugeno_capacity_from_json(c(json).as_ptr(), &mut m), SugenoStatus::Ok);
    m
}

unsafe fn eval(m: *const SugenoCapacity, input: &str, formula: SugenoFormula) -> String {
    let mut out = ptr::null_mut();
    assert_eq!(
        sugeno_eval(m, c(input).as_ptr(), formula as i32, &mut out),
        SugenoStatus::Ok
    );
    take(out)
}

#[test]
fn eval_agrees_across_formulas() {
    unsafe {
        let m = capacity(EX2);
        assert_eq!(sugeno_capacity_arity(m), 3);
        for f in [SugenoFormula::Level, SugenoFormula::Subset, SugenoFormula::Sorted] {
            assert_eq!(eval(m, "0.54,0.7071,3/7", f), "0.54");
        }
        assert_eq!(last_error(), None);
        sugeno_capacity_free(m);
    }
}

#[test]
fn capacity_round_trips_through_json() {
    unsafe {
        let m = capacity(FINITE);
        let mut out = ptr::null_mut();
        assert_eq!(sugeno_capacity_to_json(m, &mut out), SugenoStatus::Ok);
        let text = take(out);
        let back = capacity(&text);
        assert_eq!(
            eval(back, "2,1", SugenoFormula::Sorted),
            eval(m, "2,1", SugenoFormula::Sorted)
        );
        sugeno_capacity_free(back);
        sugeno_capacity_free(m);
    }
}

#[test]
fn null_arguments_are_reported() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(
            sugeno_capacity_from_json(ptr::null(), &mut m),
            SugenoStatus::NullPointer
        );
        assert!(last_error().unwrap().contains("json"));
        assert_eq!(
            sugeno_capacity_from_json(c(EX2).as_ptr(), ptr::null_mut()),
            SugenoStatus::NullPointer
        );
        let mut out = ptr::null_mut();
        assert_eq!(
            sugeno_eval(ptr::null(), c("0.5").as_ptr(), 2, &mut out),
            SugenoStatus::NullPointer
        );
        assert_eq!(sugeno_capacity_arity(ptr::null()), 0);
        sugeno_capacity_free(ptr::null_mut());
        sugeno_table_free(ptr::null_mut());
        sugeno_epimorphism_free(ptr::null_mut());
        sugeno_string_free(ptr::null_mut());
    }
}

#[test]
fn malformed_input_sets_last_error() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(
            sugeno_capacity_from_json(c("{not json").as_ptr(), &mut m),
            SugenoStatus::InputError
        );
        assert!(m.is_null());
        assert!(!last_error().unwrap().is_empty());

        let nonmonotone =
            r#"{"n": 2, "chain": {"type": "unit"}, "values": {"{1}": "0.8", "{2}": "0.1", "{1,2}": "0.5"}}"#;
        assert_eq!(
            sugeno_capacity_from_json(c(nonmonotone).as_ptr(), &mut m),
            SugenoStatus::InputError
        );

        let m = capacity(EX2);
        let mut out = ptr::null_mut();
        assert_eq!(
            sugeno_eval(m, c("0.5,2,0").as_ptr(), 2, &mut out),
            SugenoStatus::InputError
        );
        assert_eq!(
            sugeno_eval(m, c("0.5,0.5").as_ptr(), 2, &mut out),
            SugenoStatus::InputError
        );
        assert_eq!(
            sugeno_eval(m, c("0.5,0.5,0.5").as_ptr(), 9, &mut out),
            SugenoStatus::InputError
        );
        assert!(last_error().unwrap().contains("formula"));
        assert!(out.is_null());

        let bad = [0x66u8, 0xff, 0x00];
        assert_eq!(
            sugeno_eval(m, bad.as_ptr().cast(), 2, &mut out),
            SugenoStatus::InvalidUtf8
        );
        sugeno_capacity_free(m);
    }
}

#[test]
fn successful_call_clears_last_error() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(
            sugeno_capacity_from_json(c("[]").as_ptr(), &mut m),
            SugenoStatus::InputError
        );
        assert!(last_error().is_some());
        let m = capacity(EX2);
        assert_eq!(last_error(), None);
        sugeno_capacity_free(m);
    }
}

#[test]
fn table_recognition_recovers_the_capacity() {
    unsafe {
        let m = capacity(FINITE);
        let mut t = ptr::null_mut();
        assert_eq!(sugeno_table_from_capacity(m, &mut t), SugenoStatus::Ok);

        let mut text = ptr::null_mut();
        assert_eq!(sugeno_table_to_json(t, &mut text), SugenoStatus::Ok);
        let text = take(text);
        let mut t2 = ptr::null_mut();
        assert_eq!(sugeno_table_from_json(c(&text).as_ptr(), &mut t2), SugenoStatus::Ok);

        let mut back = ptr::null_mut();
        let mut witness = ptr::null_mut();
        assert_eq!(sugeno_recognize(t2, &mut back, &mut witness), SugenoStatus::Ok);
        assert!(witness.is_null());
        for x in ["0,0", "0,2", "2,0", "1,1", "2,2", "1,2"] {
            assert_eq!(eval(back, x, SugenoFormula::Level), eval(m, x, SugenoFormula::Level));
        }
        for p in [
            "sugeno",
            "idempotent",
            "comonotone-maxitive",
            "min-homogeneous",
            "median-decomposable",
            "compatible",
        ] {
            assert_eq!(
                sugeno_check(t2, c(p).as_ptr(), ptr::null_mut()),
                SugenoStatus::Ok,
                "{p}"
            );
        }

        sugeno_capacity_free(back);
        sugeno_table_free(t2);
        sugeno_table_free(t);
        sugeno_capacity_free(m);
    }
}

#[test]
fn truncated_sum_is_rejected_with_witnesses() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(sugeno_table_from_json(c(TRUNCATED).as_ptr(), &mut t), SugenoStatus::Ok);

        let mut m = ptr::null_mut();
        let mut witness = ptr::null_mut();
        assert_eq!(sugeno_recognize(t, &mut m, &mut witness), SugenoStatus::Violated);
        assert!(m.is_null());
        let doc: serde_json::Value = serde_json::from_str(&take(witness)).unwrap();
        assert!(doc.is_object());

        let mut witness = ptr::null_mut();
        assert_eq!(
            sugeno_check(t, c("idempotent").as_ptr(), &mut witness),
            SugenoStatus::Violated
        );
        assert!(take(witness).contains("\"1\""));
        assert_eq!(
            sugeno_check(t, c("compatible").as_ptr(), ptr::null_mut()),
            SugenoStatus::Violated
        );
        assert_eq!(
            sugeno_check(t, c("scale-invariant").as_ptr(), ptr::null_mut()),
            SugenoStatus::Violated
        );
        assert_eq!(
            sugeno_check(t, c("no-such-axiom").as_ptr(), ptr::null_mut()),
            SugenoStatus::InputError
        );
        sugeno_table_free(t);
    }
}

#[test]
fn table_needs_a_finite_chain() {
    unsafe {
        let m = capacity(EX2);
        let mut t = ptr::null_mut();
        assert_eq!(sugeno_table_from_capacity(m, &mut t), SugenoStatus::InputError);
        assert!(t.is_null());
        sugeno_capacity_free(m);
    }
}

#[test]
fn epimorphisms_commute_with_the_integral() {
    unsafe {
        let m = capacity(EX2);
        for name in ["decimal-half-up", "centesimal-half-up", "linguistic-bmge", "identity"] {
            let mut phi = ptr::null_mut();
            assert_eq!(sugeno_epimorphism_builtin(c(name).as_ptr(), &mut phi), SugenoStatus::Ok);

            let mut text = ptr::null_mut();
            assert_eq!(sugeno_epimorphism_to_json(phi, &mut text), SugenoStatus::Ok);
            let mut phi2 = ptr::null_mut();
            assert_eq!(
                sugeno_epimorphism_from_json(c(&take(text)).as_ptr(), &mut phi2),
                SugenoStatus::Ok
            );

            let mut pushed = ptr::null_mut();
            assert_eq!(sugeno_pushforward(phi2, m, &mut pushed), SugenoStatus::Ok);
            assert_eq!(sugeno_capacity_arity(pushed), 3);

            for x in ["0.54,0.7071,3/7", "0.05,0.95,0.45", "1,0,0.5"] {
                let mut report = ptr::null_mut();
                assert_eq!(
                    sugeno_map(phi2, m, c(x).as_ptr(), &mut report),
                    SugenoStatus::Ok,
                    "{name} {x}"
                );
                let doc: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
                assert_eq!(doc["holds"], true);
                assert_eq!(doc["mapped_value"], doc["pushed_value"]);
            }

            sugeno_capacity_free(pushed);
            sugeno_epimorphism_free(phi2);
            sugeno_epimorphism_free(phi);
        }
        let mut phi = ptr::null_mut();
        assert_eq!(
            sugeno_epimorphism_builtin(c("floor").as_ptr(), &mut phi),
            SugenoStatus::InputError
        );
        sugeno_capacity_free(m);
    }
}

#[test]
fn map_rejects_a_capacity_on_another_chain() {
    unsafe {
        let m = capacity(FINITE);
        let mut phi = ptr::null_mut();
        assert_eq!(
            sugeno_epimorphism_builtin(c("decimal-half-up").as_ptr(), &mut phi),
            SugenoStatus::Ok
        );
        let mut report = ptr::null_mut();
        assert_eq!(
            sugeno_map(phi, m, c("1,2").as_ptr(), &mut report),
            SugenoStatus::InputError
        );
        assert!(report.is_null());
        sugeno_epimorphism_free(phi);
        sugeno_capacity_free(m);
    }
}

#[test]
fn verify_statements() {
    unsafe {
        for which in ["theorem1", "theorem2", "prop1"] {
            let mut out = ptr::null_mut();
            assert_eq!(
                sugeno_verify(c(which).as_ptr(), 3, 2, 16, &mut out),
                SugenoStatus::Ok,
                "{which}"
            );
            let doc: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
            assert!(doc.is_object());
        }
        let mut out = ptr::null_mut();
        assert_eq!(
            sugeno_verify(c("theorem1").as_ptr(), 4, 3, 16, &mut out),
            SugenoStatus::InputError
        );
        assert!(last_error().unwrap().contains("16"));
        assert_eq!(
            sugeno_verify(c("lemma").as_ptr(), 3, 2, 16, &mut out),
            SugenoStatus::InputError
        );
        assert_eq!(
            sugeno_verify(c("prop1").as_ptr(), 1, 2, 16, &mut out),
            SugenoStatus::InputError
        );
    }
}

#[test]
fn calls_are_independent_across_threads() {
    let handles: Vec<_> = (0..4)
        .map(|i| {
            std::thread::spawn(move || unsafe {
                let mut m = ptr::null_mut();
                if i % 2 == 0 {
                    assert_eq!(
                        sugeno_capacity_from_json(c("nope").as_ptr(), &mut m),
                        SugenoStatus::InputError
                    );
                    assert!(last_error().is_some());
                } else {
                    let m = capacity(EX2);
                    assert_eq!(last_error(), None);
                    assert_eq!(eval(m, "1,1,1", SugenoFormula::Sorted), "1");
                    sugeno_capacity_free(m);
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
}

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(manifest_dir().join("include/sugeno.h")).unwrap();
    for name in [
        "SUGENO_STATUS_OK",
        "SUGENO_STATUS_VIOLATED",
        "SUGENO_STATUS_INPUT_ERROR",
        "SUGENO_STATUS_NULL_POINTER",
        "SUGENO_STATUS_INVALID_UTF8",
        "SUGENO_STATUS_PANIC",
        "SUGENO_FORMULA_SORTED",
        "typedef struct SugenoCapacity SugenoCapacity",
        "typedef struct SugenoTable SugenoTable",
        "typedef struct SugenoEpimorphism SugenoEpimorphism",
        "sugeno_last_error",
        "sugeno_string_free",
        "sugeno_capacity_from_json",
        "sugeno_capacity_to_json",
        "sugeno_capacity_arity",
        "sugeno_capacity_free",
        "sugeno_eval",
        "sugeno_table_from_capacity",
        "sugeno_table_from_json",
        "sugeno_table_to_json",
        "sugeno_table_free",
        "sugeno_recognize",
        "sugeno_check",
        "sugeno_epimorphism_builtin",
        "sugeno_epimorphism_from_json",
        "sugeno_epimorphism_to_json",
        "sugeno_epimorphism_free",
        "sugeno_pushforward",
        "sugeno_map",
        "sugeno_verify",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

fn static_library() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libsugeno_ffi.a");
    lib.exists().then_some(lib)
}

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc)
        .arg("--version")
        .output()
        .ok()?
        .status
        .success()
        .then_some(cc)
}

#[test]
fn c_program_links_against_the_static_library() {
    let (Some(lib), Some(cc)) = (static_library(), compiler()) else {
        eprintln!("skipped: no C compiler or static library");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout, "eval 0.54\nmap holds\nerror reported\nverify equal\n");
}
