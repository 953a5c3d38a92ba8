use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use schaper_ffi::*;

fn parse(s: &str) -> *mut SchaperPartition {
    let text = CString::new(s).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { schaper_partition_parse(text.as_ptr(), &mut h) },
        SchaperStatus::Ok
    );
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(schaper_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { schaper_string_free(s) };
    out
}

#[test]
fn oracle_and_bounds() {
    let h = parse("1,1,1,1");
    let mut v = 0;
    assert_eq!(
        unsafe { schaper_oracle(h, 2, 0, &mut v) },
        SchaperStatus::Ok
    );
    assert_eq!(v, 3);
    let (mut lo, mut hi) = (0, 0);
    assert_eq!(
        unsafe { schaper_bounds(h, 2, &mut lo, &mut hi) },
        SchaperStatus::Ok
    );
    assert_eq!((lo, hi), (3, 3));
    assert_eq!(unsafe { schaper_partition_size(h) }, 4);
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { schaper_partition_to_string(h, &mut s) },
        SchaperStatus::Ok
    );
    assert_eq!(take(s), "1,1,1,1");
    unsafe { schaper_partition_free(h) };
}

#[test]
fn sum_formula_json() {
    let h = parse("8,3,2");
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { schaper_sum_formula_json(h, 2, &mut s) },
        SchaperStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(
        v["terms"],
        serde_json::json!([{"nu": [12, 1], "coef": 1}, {"nu": [8, 5], "coef": 1}])
    );
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { schaper_bounds_json(h, 2, &mut s) },
        SchaperStatus::Ok
    );
    assert!(take(s).contains("\"lower\""));
    unsafe { schaper_partition_free(h) };
}

#[test]
fn error_codes() {
    let text = CString::new("3,x").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { schaper_partition_parse(text.as_ptr(), &mut h) },
        SchaperStatus::ParseError
    );
    assert!(h.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { schaper_partition_parse(ptr::null(), &mut h) },
        SchaperStatus::NullPointer
    );

    let h = parse("4,4,4,4");
    let mut v = 0;
    assert_eq!(
        unsafe { schaper_oracle(h, 4, 0, &mut v) },
        SchaperStatus::NotPrime
    );
    assert_eq!(
        unsafe { schaper_oracle(h, 2, 0, &mut v) },
        SchaperStatus::ResourceLimit
    );
    assert!(last_error().contains("resource limit"));
    assert_eq!(
        unsafe { schaper_oracle(h, 2, 0, ptr::null_mut()) },
        SchaperStatus::NullPointer
    );
    assert_eq!(
        unsafe { schaper_oracle(ptr::null(), 2, 0, &mut v) },
        SchaperStatus::NullPointer
    );
    unsafe { schaper_partition_free(h) };
    unsafe { schaper_partition_free(ptr::null_mut()) };
    unsafe { schaper_string_free(ptr::null_mut()) };
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "schaper.h"
int main(void) {
    SchaperPartition *p = NULL;
    if (schaper_partition_parse("3,3,3", &p) != SCHAPER_STATUS_OK) return 10;
    uint32_t v = 0;
    if (schaper_oracle(p, 2, 0, &v) != SCHAPER_STATUS_OK) return 11;
    char *json = NULL;
    if (schaper_sum_formula_json(p, 2, &json) != SCHAPER_STATUS_OK) return 12;
    schaper_string_free(json);
    schaper_partition_free(p);
    printf("%u\n", v);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let lib = tmp.parent().unwrap().join(if cfg!(debug_assertions) {
        "debug"
    } else {
        "release"
    });
    let src = tmp.join("schaper_ffi_check.c");
    let exe = tmp.join("schaper_ffi_check");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(root.join("include"))
        .arg(lib.join("libschaper_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "3");
}
