use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use brickrank::witness::{verify_witness, TilingWitness};
use brickrank::{Brick, FactoredNat};
use brickrank_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    br_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = br_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn protoset(bricks: &[&str]) -> *mut BrProtoSet {
    let set = br_protoset_new();
    for b in bricks {
        assert_eq!(br_protoset_add(set, c(b).as_ptr()), BrStatus::Ok);
    }
    set
}

#[test]
fn minimal_set_round_trip() {
    unsafe {
        let set = protoset(&["2x3", "3x2"]);
        assert_eq!(br_protoset_len(set), 2);
        let mut m = ptr::null_mut();
        assert_eq!(br_minimal_set(set, &mut m), BrStatus::Ok);
        assert_eq!(br_antichain_len(m), 4);
        let got: Vec<String> = (0..4)
            .map(|i| {
                let mut s = ptr::null_mut();
                assert_eq!(br_antichain_get(m, i, &mut s), BrStatus::Ok);
                take(s)
            })
            .collect();
        assert_eq!(got, ["1x6", "2x3", "3x2", "6x1"]);

        let mut s = ptr::null_mut();
        assert_eq!(br_antichain_get(m, 4, &mut s), BrStatus::OutOfRange);
        assert!(s.is_null());
        assert!(last_error().contains("index 4"));

        assert_eq!(br_is_tilable(m, c("6x7").as_ptr()), BrStatus::Ok);
        assert_eq!(br_is_tilable(m, c("5x5").as_ptr()), BrStatus::No);
        assert_eq!(br_is_tilable(m, c("5x5x5").as_ptr()), BrStatus::Parse);

        br_antichain_free(m);
        br_protoset_free(set);
    }
}

#[test]
fn witness_json_verifies() {
    unsafe {
        let set = protoset(&["25x3", "9x8", "16x5"]);
        let mut s = ptr::null_mut();
        assert_eq!(br_tile_witness_json(set, c("34x11").as_ptr(), &mut s), BrStatus::Ok);
        let w = TilingWitness::from_json(&take(s)).unwrap();
        let protos: Vec<Brick<FactoredNat>> =
            ["25x3", "9x8", "16x5"].iter().map(|b| b.parse().unwrap()).collect();
        assert!(verify_witness(&w, &protos).unwrap());

        br_protoset_free(set);

        let set = protoset(&["2x3", "3x2"]);
        let mut s = ptr::null_mut();
        assert_eq!(br_tile_witness_json(set, c("5x5").as_ptr(), &mut s), BrStatus::No);
        assert!(s.is_null());
        br_protoset_free(set);
    }
}

#[test]
fn bad_input_is_reported() {
    unsafe {
        let set = br_protoset_new();
        assert_eq!(br_protoset_add(set, c("3xx4").as_ptr()), BrStatus::Parse);
        assert!(last_error().contains("parse"));
        assert_eq!(br_protoset_add(set, c("3x4").as_ptr()), BrStatus::Ok);
        assert_eq!(br_protoset_add(set, c("3x4x5").as_ptr()), BrStatus::Parse);
        assert_eq!(br_protoset_add(set, ptr::null()), BrStatus::NullPointer);
        assert_eq!(br_protoset_add(ptr::null_mut(), c("1").as_ptr()), BrStatus::NullPointer);
        assert_eq!(br_protoset_len(set), 1);

        let empty = br_protoset_new();
        let mut m = ptr::null_mut();
        assert_ne!(br_minimal_set(empty, &mut m), BrStatus::Ok);
        assert!(m.is_null());

        br_protoset_free(empty);
        br_protoset_free(set);
        br_protoset_free(ptr::null_mut());
        br_antichain_free(ptr::null_mut());
        br_string_free(ptr::null_mut());
    }
}

#[test]
fn numeric_queries() {
    unsafe {
        let mut v = 0u64;
        assert_eq!(br_maxrank(3, 2, false, &mut v), BrStatus::Ok);
        assert_eq!(v, 18);
        assert_eq!(br_dedekind_count(4, &mut v), BrStatus::Ok);
        assert_eq!(v, 166);
        assert_eq!(br_lattice_maxrank(2, 7, &mut v), BrStatus::Ok);
        assert_eq!(v, 9);
        assert_eq!(br_maxrank(5, 3, false, &mut v), BrStatus::Guard);
        assert!(last_error().contains("guard"));
        assert_eq!(br_maxrank(1, 1, false, ptr::null_mut()), BrStatus::NullPointer);

        let mut s = ptr::null_mut();
        assert_eq!(br_phrase_dual(c("w+xy").as_ptr(), &mut s), BrStatus::Ok);
        assert_eq!(take(s), "wx+wy");
        assert_eq!(br_rank_polynomial(4, &mut s), BrStatus::Ok);
        assert_eq!(take(s), "4 + 1/6*(-112*d + 57*d^2 + 121*d^3)");
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/brickrank.h")).unwrap();
    for name in [
        "br_last_error_message",
        "br_string_free",
        "br_protoset_new",
        "br_protoset_add",
        "br_protoset_len",
        "br_protoset_free",
        "br_minimal_set",
        "br_antichain_len",
        "br_antichain_get",
        "br_antichain_free",
        "br_is_tilable",
        "br_tile_witness_json",
        "br_maxrank",
        "br_lattice_maxrank",
        "br_dedekind_count",
        "br_phrase_dual",
        "br_rank_polynomial",
        "BR_STATUS_OK = 0",
        "BR_STATUS_GUARD = 3",
        "typedef struct BrProtoSet BrProtoSet",
    ] {
        assert!(header.contains(name), "header is missing {name}");
    }
}

fn static_lib() -> Option<PathBuf> {
    // target/<profile>/deps/capi-xxxx -> target/<profile>
    let exe = std::env::current_exe().ok()?;
    let profile = exe.parent()?.parent()?;
    let lib = profile.join("libbrickrank_ffi.a");
    lib.exists().then_some(lib)
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn c_program_links_against_static_lib() {
    let (Some(lib), true) = (static_lib(), have_cc()) else {
        eprintln!("skipping: no C compiler or static library");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let src = crate_dir().join("tests/smoke.c");
    let include = crate_dir().join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg(format!("-I{}", include.display()))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "cc failed");
    let out = Command::new(Path::new(&exe)).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1x6 2x3 3x2 6x1\ntilable 1\nmaxrank 36\n");
}
