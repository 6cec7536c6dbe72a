use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use gogkit_ffi::*;

const THETA0: &str = include_str!("../../../corpus/theta0.gog");
const THETA_REFINE: &str = include_str!("../../../corpus/refine/theta0-t3.refine");

fn parse(text: &str) -> *mut GogGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { gog_graph_parse(c.as_ptr(), false, &mut g) }, GogStatus::Ok);
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gog_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn parse_serialize_round_trip() {
    let g = parse(THETA0);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gog_graph_serialize(g, &mut s) }, GogStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    let g2 = parse(&text);
    let mut t = GogTriState::Unknown;
    assert_eq!(unsafe { gog_equivalent(g, g2, &mut t) }, GogStatus::Ok);
    assert_eq!(t, GogTriState::Yes);
    let (mut v, mut e) = (0, 0);
    assert_eq!(unsafe { gog_graph_counts(g, &mut v, &mut e) }, GogStatus::Ok);
    assert_eq!((v, e), (2, 2));
    let (mut errors, mut unchecked) = (9, 9);
    assert_eq!(unsafe { gog_graph_validate(g, &mut errors, &mut unchecked) }, GogStatus::Ok);
    assert_eq!((errors, unchecked), (0, 2));
    unsafe {
        gog_string_free(s);
        gog_graph_free(g);
        gog_graph_free(g2);
    }
}

#[test]
fn error_codes_and_messages() {
    let bad = CString::new("gog/1\n[groups]\nZ = abelian x\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { gog_graph_parse(bad.as_ptr(), false, &mut g) }, GogStatus::ParseError);
    assert!(last_error().starts_with("3:13:"), "{}", last_error());
    assert!(g.is_null());
    assert_eq!(unsafe { gog_graph_parse(ptr::null(), false, &mut g) }, GogStatus::NullPointer);
    let mut t = GogTriState::Yes;
    assert_eq!(unsafe { gog_is_minimal(ptr::null(), &mut t) }, GogStatus::NullPointer);
    let id = CString::new("nope").unwrap();
    assert_eq!(unsafe { gog_family_graph(id.as_ptr(), 1, &mut g) }, GogStatus::BadParameter);
    let id = CString::new("bs24").unwrap();
    assert_eq!(unsafe { gog_family_graph(id.as_ptr(), 0, &mut g) }, GogStatus::BadParameter);
    let bytes = [0xffu8, 0];
    assert_eq!(unsafe { gog_graph_parse(bytes.as_ptr().cast(), false, &mut g) }, GogStatus::InvalidUtf8);
    let ok = parse(THETA0);
    assert_eq!(last_error(), "");
    unsafe { gog_graph_free(ok) };
}

#[test]
fn collapse_and_refine() {
    let g = parse(THETA0);
    let data = CString::new(THETA_REFINE).unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { gog_graph_refine(g, data.as_ptr(), &mut r) }, GogStatus::Ok);
    let (mut v, mut e) = (0, 0);
    unsafe { gog_graph_counts(r, &mut v, &mut e) };
    assert_eq!((v, e), (2, 3));
    let names = [CString::new("e1").unwrap(), CString::new("e2").unwrap()];
    let ptrs: Vec<_> = names.iter().map(|n| n.as_ptr()).collect();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { gog_graph_collapse(r, ptrs.as_ptr(), 2, &mut c) }, GogStatus::Ok);
    unsafe { gog_graph_counts(c, &mut v, &mut e) };
    assert_eq!((v, e), (1, 1));
    let missing = [CString::new("zz").unwrap()];
    let ptrs: Vec<_> = missing.iter().map(|n| n.as_ptr()).collect();
    let mut x = ptr::null_mut();
    assert_eq!(unsafe { gog_graph_collapse(r, ptrs.as_ptr(), 1, &mut x) }, GogStatus::InvalidInput);
    let at_w = CString::new(include_str!("../../../corpus/refine/theta0-at-w.refine")).unwrap();
    assert_eq!(unsafe { gog_graph_refine(g, at_w.as_ptr(), &mut x) }, GogStatus::AttachmentUndecidable);
    unsafe {
        gog_graph_free(g);
        gog_graph_free(r);
        gog_graph_free(c);
    }
}

#[test]
fn families_and_sandwich() {
    let mut s = ptr::null_mut();
    let id = CString::new("heisenberg").unwrap();
    assert_eq!(unsafe { gog_family_certificate(id.as_ptr(), 3, &mut s) }, GogStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), "index: 9");
    unsafe { gog_string_free(s) };
    let mut n = 0;
    let amb = CString::new("3 / (0, 0, 4)").unwrap();
    let sub = CString::new("(2, 0, 0)").unwrap();
    assert_eq!(unsafe { gog_sandwich_classes(amb.as_ptr(), sub.as_ptr(), &mut n) }, GogStatus::Ok);
    assert_eq!(n, 16);
    let mut g = ptr::null_mut();
    let id = CString::new("theta").unwrap();
    assert_eq!(unsafe { gog_family_graph(id.as_ptr(), 4, &mut g) }, GogStatus::Ok);
    let mut t = GogTriState::Unknown;
    unsafe { gog_is_minimal(g, &mut t) };
    assert_eq!(t, GogTriState::Yes);
    unsafe { gog_graph_free(g) };
}

/// Builds the C smoke program against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/gogkit.h");
    assert!(header.exists(), "header not generated");
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libgogkit_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let out = tempfile::tempdir().unwrap();
    let bin = out.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
