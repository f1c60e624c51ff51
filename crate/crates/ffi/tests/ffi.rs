use std::ffi::{CStr, CString};
use std::ptr;

use corrtensor_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn state(spec: &str) -> *mut CtState {
    let mut out = ptr::null_mut();
    let status = unsafe { ct_state_from_spec(cstr(spec).as_ptr(), 0, &mut out) };
    assert_eq!(status, CtStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    let p = ct_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn detect_ghz() {
    let s = state("ghz:d=2,n=3");
    let mut r = CtResult {
        violated: 0,
        margin: 0.0,
        detected_class: CtDetectedClass::None,
        best_value: 0.0,
        best_threshold: 0.0,
        test_count: 0,
    };
    for crit in ["t1", "t2"] {
        assert_eq!(unsafe { ct_detect(s, cstr(crit).as_ptr(), &mut r) }, CtStatus::Ok);
        assert_eq!(r.violated, 1);
        assert_eq!(r.detected_class, CtDetectedClass::Gme);
    }
    assert_eq!(unsafe { ct_detect(s, cstr("t4").as_ptr(), &mut r) }, CtStatus::Ok);
    assert_eq!(r.detected_class, CtDetectedClass::NotFullySeparable);
    assert_eq!(r.test_count, 3);
    assert!(ct_last_error_message().is_null());
    unsafe { ct_state_free(s) };
}

#[test]
fn json_round_trip() {
    let s = state("w:d=2");
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { ct_detect_json(s, cstr("t2").as_ptr(), &mut json) },
        CtStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["criterion"], "T2");
    assert_eq!(v["violated"], true);
    unsafe {
        ct_string_free(json);
        ct_state_free(s);
    }
}

#[test]
fn tolerance_norm_and_spectrum() {
    let s = state("ghz:d=2,n=3");
    let (mut p, mut detected) = (0.0, 0);
    assert_eq!(
        unsafe { ct_white_noise_tolerance(s, cstr("t2").as_ptr(), &mut p, &mut detected) },
        CtStatus::Ok
    );
    assert_eq!(detected, 1);
    assert!((p - 0.3245).abs() < 1e-3);

    let mut norm = 0.0;
    assert_eq!(unsafe { ct_full_tensor_norm(s, &mut norm) }, CtStatus::Ok);
    assert!((norm - 2.0).abs() < 1e-12);

    let rows = [1usize];
    let mut len = 0;
    let status = unsafe { ct_matricization_spectrum(s, rows.as_ptr(), 1, ptr::null_mut(), 0, &mut len) };
    assert_eq!(status, CtStatus::BufferTooSmall);
    assert_eq!(len, 3);
    let mut values = vec![0.0; len];
    let status = unsafe { ct_matricization_spectrum(s, rows.as_ptr(), 1, values.as_mut_ptr(), len, &mut len) };
    assert_eq!(status, CtStatus::Ok);
    assert!((values[0] - 2f64.sqrt()).abs() < 1e-12);
    assert!(values[2].abs() < 1e-12);
    unsafe { ct_state_free(s) };
}

#[test]
fn noisy_state_from_matrix() {
    // Bell state |00> + |11>, real entries only
    let mut re = [0.0; 16];
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        re[r * 4 + c] = 0.5;
    }
    let dims = [2usize, 2];
    let mut bell = ptr::null_mut();
    assert_eq!(
        unsafe { ct_state_from_matrix(re.as_ptr(), ptr::null(), dims.as_ptr(), 2, &mut bell) },
        CtStatus::Ok
    );
    let mut got = [0usize; 4];
    let mut n = 0;
    assert_eq!(
        unsafe { ct_state_dims(bell, got.as_mut_ptr(), 4, &mut n) },
        CtStatus::Ok
    );
    assert_eq!(&got[..n], &dims);

    let mut noisy = ptr::null_mut();
    assert_eq!(unsafe { ct_state_white_noise(bell, 0.5, &mut noisy) }, CtStatus::Ok);
    let mut r = CtResult {
        violated: 0,
        margin: 0.0,
        detected_class: CtDetectedClass::None,
        best_value: 0.0,
        best_threshold: 0.0,
        test_count: 0,
    };
    assert_eq!(unsafe { ct_detect(bell, cstr("chsh").as_ptr(), &mut r) }, CtStatus::Ok);
    assert_eq!(r.detected_class, CtDetectedClass::ChshViolation);
    assert_eq!(unsafe { ct_detect(noisy, cstr("chsh").as_ptr(), &mut r) }, CtStatus::Ok);
    assert_eq!(r.violated, 0);
    // mixed input: tolerance from the evaluated statistics
    let (mut p, mut detected) = (0.0, 0);
    assert_eq!(
        unsafe { ct_white_noise_tolerance(bell, cstr("chsh").as_ptr(), &mut p, &mut detected) },
        CtStatus::Ok
    );
    assert!((p - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    unsafe {
        ct_state_free(noisy);
        ct_state_free(bell);
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ct_state_from_spec(cstr("ghz:d=x").as_ptr(), 0, &mut out) },
        CtStatus::Parse
    );
    assert!(last_error().contains("ghz"));
    assert_eq!(
        unsafe { ct_state_from_spec(ptr::null(), 0, &mut out) },
        CtStatus::NullPointer
    );

    let bad = [1.0, 0.0, 0.0, 1.0];
    let dims = [2usize];
    assert_eq!(
        unsafe { ct_state_from_matrix(bad.as_ptr(), ptr::null(), dims.as_ptr(), 1, &mut out) },
        CtStatus::InvalidState
    );

    let s = state("ghz:d=2,n=3");
    let mut r = std::mem::MaybeUninit::<CtResult>::uninit();
    assert_eq!(
        unsafe { ct_detect(s, cstr("t3").as_ptr(), r.as_mut_ptr()) },
        CtStatus::DimensionMismatch
    );
    assert_eq!(
        unsafe { ct_detect(s, cstr("nope").as_ptr(), r.as_mut_ptr()) },
        CtStatus::Parse
    );
    assert_eq!(
        unsafe { ct_detect(ptr::null(), cstr("t1").as_ptr(), r.as_mut_ptr()) },
        CtStatus::NullPointer
    );
    let mut noisy = ptr::null_mut();
    assert_eq!(
        unsafe { ct_state_white_noise(s, 1.5, &mut noisy) },
        CtStatus::InvalidArgument
    );
    unsafe {
        ct_state_free(s);
        ct_state_free(ptr::null_mut());
        ct_string_free(ptr::null_mut());
    }
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(ct_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/corrtensor.h")).unwrap();
    for name in [
        "ct_state_from_spec",
        "ct_state_from_matrix",
        "ct_detect_json",
        "ct_white_noise_tolerance",
        "ct_matricization_spectrum",
        "typedef struct CtState CtState;",
        "CT_STATUS_BUFFER_TOO_SMALL = 7",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
