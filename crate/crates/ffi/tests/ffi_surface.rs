//! Exercises the C surface through the exported symbols, including the
//! error paths a C caller can hit.

use std::ffi::{CStr, CString};
use std::io::Write;
use std::os::raw::c_char;
use std::ptr;

use infomatch_ffi::{
    im_corpus_free, im_corpus_len, im_corpus_load, im_eval, im_last_error, im_match,
    im_string_free, im_synth, im_version, ImCorpus, ImStatus,
};

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { im_string_free(ptr) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(im_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn synth_fixture() -> (String, String) {
    let spec = CString::new("seed = 9\nn_entities = 40\nn_synonym_sets = 5").unwrap();
    let mut corpus: *mut c_char = ptr::null_mut();
    let mut gt: *mut c_char = ptr::null_mut();
    let status = unsafe { im_synth(spec.as_ptr(), &mut corpus, &mut gt) };
    assert_eq!(status, ImStatus::ImStatusOk);
    (take_string(corpus), take_string(gt))
}

fn load_fixture(corpus_jsonl: &str) -> *mut ImCorpus {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(corpus_jsonl.as_bytes()).unwrap();
    let path = CString::new(file.path().to_str().unwrap()).unwrap();
    let mut handle: *mut ImCorpus = ptr::null_mut();
    let status = unsafe { im_corpus_load(path.as_ptr(), &mut handle) };
    assert_eq!(status, ImStatus::ImStatusOk);
    assert!(!handle.is_null());
    handle
}

#[test]
fn version_is_non_empty() {
    let v = unsafe { CStr::from_ptr(im_version()) }.to_str().unwrap();
    assert!(!v.is_empty());
}

#[test]
fn load_match_eval_round_trip() {
    let (corpus_jsonl, gt_tsv) = synth_fixture();
    let handle = load_fixture(&corpus_jsonl);
    assert!(unsafe { im_corpus_len(handle) } > 0);

    let config = CString::new("").unwrap();
    let mut matches_json: *mut c_char = ptr::null_mut();
    let status = unsafe { im_match(handle, config.as_ptr(), &mut matches_json) };
    assert_eq!(status, ImStatus::ImStatusOk);
    let matches = take_string(matches_json);
    assert!(matches.contains("xattr_t0_s0"));

    let matches_c = CString::new(matches).unwrap();
    let gt_c = CString::new(gt_tsv).unwrap();
    let mut report_json: *mut c_char = ptr::null_mut();
    let status = unsafe {
        im_eval(
            handle,
            config.as_ptr(),
            matches_c.as_ptr(),
            gt_c.as_ptr(),
            &mut report_json,
        )
    };
    assert_eq!(status, ImStatus::ImStatusOk);
    let report = take_string(report_json);
    let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
    let f1 = parsed["weighted"]["f1"].as_f64().unwrap();
    assert!(f1 > 0.95, "f1 = {f1}");

    unsafe { im_corpus_free(handle) };
}

#[test]
fn missing_file_reports_io_error() {
    let path = CString::new("/definitely/not/here.jsonl").unwrap();
    let mut handle: *mut ImCorpus = ptr::null_mut();
    let status = unsafe { im_corpus_load(path.as_ptr(), &mut handle) };
    assert_eq!(status, ImStatus::ImStatusIo);
    assert!(handle.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_rejected() {
    let mut handle: *mut ImCorpus = ptr::null_mut();
    assert_eq!(
        unsafe { im_corpus_load(ptr::null(), &mut handle) },
        ImStatus::ImStatusNullArgument
    );
    let config = CString::new("").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { im_match(ptr::null(), config.as_ptr(), &mut out) },
        ImStatus::ImStatusNullArgument
    );
    assert_eq!(unsafe { im_corpus_len(ptr::null()) }, 0);
    unsafe { im_corpus_free(ptr::null_mut()) };
    unsafe { im_string_free(ptr::null_mut()) };
}

#[test]
fn bad_config_reports_param_error() {
    let (corpus_jsonl, _) = synth_fixture();
    let handle = load_fixture(&corpus_jsonl);
    let config = CString::new("bogus_key = 1").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { im_match(handle, config.as_ptr(), &mut out) };
    assert_eq!(status, ImStatus::ImStatusParam);
    assert!(last_error().contains("bogus_key"));
    unsafe { im_corpus_free(handle) };
}

#[test]
fn empty_corpus_reports_no_mapped_types() {
    let handle = load_fixture("");
    let config = CString::new("").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { im_match(handle, config.as_ptr(), &mut out) };
    assert_eq!(status, ImStatus::ImStatusNoMappedTypes);
    unsafe { im_corpus_free(handle) };
}

#[test]
fn disjoint_ground_truth_reports_eval_error() {
    let (corpus_jsonl, _) = synth_fixture();
    let handle = load_fixture(&corpus_jsonl);
    let config = CString::new("").unwrap();
    let mut matches_json: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { im_match(handle, config.as_ptr(), &mut matches_json) },
        ImStatus::ImStatusOk
    );
    let matches = CString::new(take_string(matches_json)).unwrap();
    let gt = CString::new("nope::nada\ta\tb\n").unwrap();
    let mut report: *mut c_char = ptr::null_mut();
    let status = unsafe {
        im_eval(
            handle,
            config.as_ptr(),
            matches.as_ptr(),
            gt.as_ptr(),
            &mut report,
        )
    };
    assert_eq!(status, ImStatus::ImStatusEval);
    unsafe { im_corpus_free(handle) };
}

#[test]
fn invalid_synth_spec_is_rejected() {
    let spec = CString::new("overlap = 2.0").unwrap();
    let mut corpus: *mut c_char = ptr::null_mut();
    let mut gt: *mut c_char = ptr::null_mut();
    let status = unsafe { im_synth(spec.as_ptr(), &mut corpus, &mut gt) };
    assert_eq!(status, ImStatus::ImStatusParam);
}

#[test]
fn generated_header_exists_and_names_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("infomatch.h");
    let text = std::fs::read_to_string(header).unwrap();
    for symbol in [
        "im_corpus_load",
        "im_corpus_free",
        "im_corpus_len",
        "im_match",
        "im_eval",
        "im_synth",
        "im_string_free",
        "im_last_error",
        "im_version",
        "IM_STATUS_NO_MAPPED_TYPES",
        "typedef struct im_corpus im_corpus;",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}
