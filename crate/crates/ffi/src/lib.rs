//! C ABI over the matching pipeline.
//!
//! Conventions: every function that can fail returns an [`ImStatus`];
//! outputs are returned through out-pointers. Strings handed to the
//! caller are NUL-terminated UTF-8 owned by this library and must be
//! released with [`im_string_free`]. The corpus handle is opaque and
//! released with [`im_corpus_free`]. The last error message is kept in
//! thread-local storage and read with [`im_last_error`]. Panics are
//! caught at the boundary and reported as `IM_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use infomatch::corpus::{load_corpus, Corpus};
use infomatch::error::Error;
use infomatch::evaluation::GroundTruth;
use infomatch::pipeline::{evaluate, run_match, MatchFile, RunConfig};
use infomatch::synth::{generate, SynthSpec};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImStatus {
    ImStatusOk = 0,
    /// A required pointer argument was NULL.
    ImStatusNullArgument = 1,
    /// A string argument was not valid UTF-8.
    ImStatusInvalidUtf8 = 2,
    ImStatusIo = 3,
    ImStatusParse = 4,
    ImStatusParam = 5,
    ImStatusNoMappedTypes = 6,
    ImStatusEval = 7,
    /// A panic was caught at the boundary.
    ImStatusInternal = 8,
}

/// Opaque corpus handle.
pub struct ImCorpus {
    corpus: Corpus,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn status_of(e: &Error) -> ImStatus {
    match e {
        Error::Io(_) => ImStatus::ImStatusIo,
        Error::Parse(_) => ImStatus::ImStatusParse,
        Error::Param(_) => ImStatus::ImStatusParam,
        Error::NoMappedTypes => ImStatus::ImStatusNoMappedTypes,
        Error::Eval(_) => ImStatus::ImStatusEval,
    }
}

fn fail(e: &Error) -> ImStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Run `f` with panics converted to `IM_STATUS_INTERNAL`.
fn guarded(f: impl FnOnce() -> ImStatus) -> ImStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            ImStatus::ImStatusInternal
        }
    }
}

/// # Safety
/// `ptr` must be non-NULL and point to a NUL-terminated string.
unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, ImStatus> {
    if ptr.is_null() {
        set_error("NULL argument");
        return Err(ImStatus::ImStatusNullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        ImStatus::ImStatusInvalidUtf8
    })
}

fn give_string(s: String, out: *mut *mut c_char) -> ImStatus {
    if out.is_null() {
        set_error("NULL output pointer");
        return ImStatus::ImStatusNullArgument;
    }
    let sanitized: String = s.chars().filter(|&c| c != '\0').collect();
    let c = CString::new(sanitized).unwrap();
    unsafe { *out = c.into_raw() };
    ImStatus::ImStatusOk
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn im_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last error on this thread; valid until the next
/// failing call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn im_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through an out-parameter
/// of this library, or NULL.
#[no_mangle]
pub unsafe extern "C" fn im_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Load a JSONL corpus file into a new handle.
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 path; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn im_corpus_load(
    path: *const c_char,
    out: *mut *mut ImCorpus,
) -> ImStatus {
    guarded(|| {
        let path = match utf8_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return ImStatus::ImStatusNullArgument;
        }
        match load_corpus(Path::new(path)) {
            Ok((corpus, _)) => {
                *out = Box::into_raw(Box::new(ImCorpus { corpus }));
                ImStatus::ImStatusOk
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of articles in the corpus.
///
/// # Safety
/// `corpus` must be a live handle from [`im_corpus_load`] or NULL.
#[no_mangle]
pub unsafe extern "C" fn im_corpus_len(corpus: *const ImCorpus) -> usize {
    if corpus.is_null() {
        return 0;
    }
    (*corpus).corpus.len()
}

/// Release a corpus handle.
///
/// # Safety
/// `corpus` must be a handle from [`im_corpus_load`] or NULL; it must
/// not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn im_corpus_free(corpus: *mut ImCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Align attributes over every mapped type pair. `config_kv` holds
/// `key = value` lines (same keys as the config file); pass an empty
/// string for defaults. On success `*out_json` receives a JSON array of
/// per-type-pair match files.
///
/// # Safety
/// `corpus` must be a live handle; `config_kv` a NUL-terminated UTF-8
/// string; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn im_match(
    corpus: *const ImCorpus,
    config_kv: *const c_char,
    out_json: *mut *mut c_char,
) -> ImStatus {
    guarded(|| {
        if corpus.is_null() {
            set_error("NULL corpus handle");
            return ImStatus::ImStatusNullArgument;
        }
        let config = match utf8_arg(config_kv) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let cfg = match RunConfig::from_kv_text(config) {
            Ok(cfg) => cfg,
            Err(e) => return fail(&e),
        };
        match run_match(&(*corpus).corpus, &cfg) {
            Ok(run) => {
                let files: Vec<MatchFile> =
                    run.results.iter().map(MatchFile::from_result).collect();
                give_string(serde_json_string(&files), out_json)
            }
            Err(e) => fail(&e),
        }
    })
}

/// Evaluate match files (JSON array, as produced by [`im_match`])
/// against a ground truth TSV. On success `*out_json` receives the
/// evaluation report as JSON.
///
/// # Safety
/// `corpus` must be a live handle; string arguments NUL-terminated
/// UTF-8; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn im_eval(
    corpus: *const ImCorpus,
    config_kv: *const c_char,
    matches_json: *const c_char,
    gt_tsv: *const c_char,
    out_json: *mut *mut c_char,
) -> ImStatus {
    guarded(|| {
        if corpus.is_null() {
            set_error("NULL corpus handle");
            return ImStatus::ImStatusNullArgument;
        }
        let (config, matches, gt) = match (
            utf8_arg(config_kv),
            utf8_arg(matches_json),
            utf8_arg(gt_tsv),
        ) {
            (Ok(c), Ok(m), Ok(g)) => (c, m, g),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        let cfg = match RunConfig::from_kv_text(config) {
            Ok(cfg) => cfg,
            Err(e) => return fail(&e),
        };
        let files: Vec<MatchFile> = match serde_json::from_str(matches) {
            Ok(f) => f,
            Err(e) => return fail(&Error::Parse(format!("matches json: {e}"))),
        };
        let gt = match GroundTruth::read_tsv(gt.as_bytes()) {
            Ok(gt) => gt,
            Err(e) => return fail(&e),
        };
        match evaluate(&(*corpus).corpus, &cfg, &files, &gt) {
            Ok(report) => give_string(serde_json_string(&report), out_json),
            Err(e) => fail(&e),
        }
    })
}

/// Generate a synthetic corpus. `spec_kv` holds `key = value` lines for
/// the generator knobs (seed, n_types, n_entities, n_synonym_sets,
/// overlap, value_pool_size, value_overlap, link_density,
/// value_perturbation, rare_attr_fraction, opaque_set_fraction); pass an
/// empty string for defaults. `*out_corpus_jsonl` and `*out_gt_tsv`
/// receive the corpus and ground truth.
///
/// # Safety
/// `spec_kv` must be a NUL-terminated UTF-8 string; the out pointers
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn im_synth(
    spec_kv: *const c_char,
    out_corpus_jsonl: *mut *mut c_char,
    out_gt_tsv: *mut *mut c_char,
) -> ImStatus {
    guarded(|| {
        let text = match utf8_arg(spec_kv) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec = match parse_synth_spec(text) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        match generate(&spec) {
            Ok(out) => {
                let s = give_string(out.corpus_jsonl, out_corpus_jsonl);
                if s != ImStatus::ImStatusOk {
                    return s;
                }
                give_string(out.ground_truth_tsv, out_gt_tsv)
            }
            Err(e) => fail(&e),
        }
    })
}

fn parse_synth_spec(text: &str) -> Result<SynthSpec, Error> {
    let mut spec = SynthSpec::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: &dyn std::fmt::Display| Error::Param(format!("{key}: {e}"));
        match key {
            "seed" => spec.seed = value.parse().map_err(|e| bad(&e))?,
            "n_types" => spec.n_types = value.parse().map_err(|e| bad(&e))?,
            "n_entities" => spec.n_entities = value.parse().map_err(|e| bad(&e))?,
            "n_synonym_sets" => spec.n_synonym_sets = value.parse().map_err(|e| bad(&e))?,
            "overlap" => spec.overlap = value.parse().map_err(|e| bad(&e))?,
            "value_pool_size" => spec.value_pool_size = value.parse().map_err(|e| bad(&e))?,
            "value_overlap" => spec.value_overlap = value.parse().map_err(|e| bad(&e))?,
            "link_density" => spec.link_density = value.parse().map_err(|e| bad(&e))?,
            "value_perturbation" => spec.value_perturbation = value.parse().map_err(|e| bad(&e))?,
            "rare_attr_fraction" => spec.rare_attr_fraction = value.parse().map_err(|e| bad(&e))?,
            "opaque_set_fraction" => {
                spec.opaque_set_fraction = value.parse().map_err(|e| bad(&e))?
            }
            _ => return Err(Error::Param(format!("unknown spec key '{key}'"))),
        }
    }
    spec.validate()?;
    Ok(spec)
}

fn serde_json_string<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}
