//! C ABI over `soficlab`.
//!
//! Objects cross the boundary as opaque handles created by `*_load` and released by `*_free`.
//! Every fallible call returns a [`SoficlabStatus`]; on failure the message is available from
//! [`soficlab_last_error`] on the same thread until the next failing call. Strings returned
//! through out-parameters are owned by the caller and released with [`soficlab_string_free`].
//! Panics are caught at the boundary and reported as `SOFICLAB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use soficlab::classify::{classify, is_non_wandering, is_tmc, is_tmf, TmfMode};
use soficlab::measure::{verify_main_theorem, HiddenMarkovMeasure, MeasureDocument};
use soficlab::monoid::ContextMonoid;
use soficlab::report::Report;
use soficlab::{load_presentation, Error, Limits, Presentation};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoficlabStatus {
    Ok = 0,
    /// Null pointer, invalid UTF-8, or a violated precondition.
    InvalidArgument = 1,
    /// The document could not be parsed or validated.
    ParseError = 2,
    EmptyShift = 3,
    ResourceCap = 4,
    /// The input is outside the domain of the operation (for example a word not in the language).
    NotApplicable = 5,
    /// Two independent computations disagreed.
    Inconsistency = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoficlabTmfMode {
    Monoid = 0,
    PaperBound = 1,
    Oracle = 2,
}

/// Resource limits; obtain defaults from [`soficlab_limits_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoficlabLimits {
    pub max_subset_states: usize,
    pub max_words: usize,
    pub max_monoid: usize,
}

impl From<SoficlabLimits> for Limits {
    fn from(l: SoficlabLimits) -> Self {
        Limits { max_subset_states: l.max_subset_states, max_words: l.max_words, max_monoid: l.max_monoid }
    }
}

/// A presentation trimmed to its essential part.
pub struct SoficlabPresentation {
    inner: Presentation,
}

/// A stationary hidden-Markov measure with exact rational parameters.
pub struct SoficlabMeasure {
    inner: HiddenMarkovMeasure,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SoficlabStatus {
    match e {
        Error::Malformed(_)
        | Error::UnknownSymbol(_)
        | Error::UnknownState(_)
        | Error::EmptyAlphabet
        | Error::DuplicateSymbol(_)
        | Error::DuplicateState(_)
        | Error::DuplicateEdge(_)
        | Error::InvalidWeights(_) => SoficlabStatus::ParseError,
        Error::EmptyShift => SoficlabStatus::EmptyShift,
        Error::ResourceCap { .. } => SoficlabStatus::ResourceCap,
        Error::NotInLanguage(_)
        | Error::NotNonWanderingTmc(_)
        | Error::NotTmc
        | Error::Reducible(_)
        | Error::NullConditioning => SoficlabStatus::NotApplicable,
        Error::Precondition(_) => SoficlabStatus::InvalidArgument,
        Error::Inconsistency(_) => SoficlabStatus::Inconsistency,
    }
}

struct Failure(SoficlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn invalid(message: &str) -> Failure {
    Failure(SoficlabStatus::InvalidArgument, message.to_string())
}

/// Runs `f` behind the panic barrier and converts its outcome to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SoficlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SoficlabStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("panic: {message}"));
            SoficlabStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(invalid(&format!("`{name}` is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(&format!("`{name}` is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(&format!("`{name}` is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid(&format!("`{name}` is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn limits_arg(limits: *const SoficlabLimits) -> Limits {
    limits.as_ref().map_or_else(Limits::default, |l| (*l).into())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn soficlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failing call on this thread, or an empty string. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn soficlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn soficlab_limits_default() -> SoficlabLimits {
    let l = Limits::default();
    SoficlabLimits { max_subset_states: l.max_subset_states, max_words: l.max_words, max_monoid: l.max_monoid }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn soficlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a presentation document (any accepted format) and trims it.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_presentation_load(
    json: *const c_char,
    out: *mut *mut SoficlabPresentation,
) -> SoficlabStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inner = load_presentation(text)?.trim_essential()?;
        write_out(out, Box::into_raw(Box::new(SoficlabPresentation { inner })), "out")
    })
}

/// # Safety
/// `p` must be null or a handle from [`soficlab_presentation_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn soficlab_presentation_free(p: *mut SoficlabPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn soficlab_presentation_num_states(p: *const SoficlabPresentation) -> usize {
    p.as_ref().map_or(0, |p| p.inner.num_states())
}

/// # Safety
/// `p` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn soficlab_presentation_num_symbols(p: *const SoficlabPresentation) -> usize {
    p.as_ref().map_or(0, |p| p.inner.num_symbols())
}

/// Membership of a word written as concatenated symbol names.
///
/// # Safety
/// `p` must be a live handle, `word` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_presentation_contains(
    p: *const SoficlabPresentation,
    word: *const c_char,
    out: *mut bool,
) -> SoficlabStatus {
    guard(|| {
        let p = &ref_arg(p, "p")?.inner;
        let w = p.word(str_arg(word, "word")?)?;
        write_out(out, p.contains_word(&w), "out")
    })
}

/// # Safety
/// `p` must be a live handle; `limits` may be null for defaults; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_is_tmf(
    p: *const SoficlabPresentation,
    mode: SoficlabTmfMode,
    limits: *const SoficlabLimits,
    out: *mut bool,
) -> SoficlabStatus {
    guard(|| {
        let p = &ref_arg(p, "p")?.inner;
        let mode = match mode {
            SoficlabTmfMode::Monoid => TmfMode::Monoid,
            SoficlabTmfMode::PaperBound => TmfMode::PaperBound,
            SoficlabTmfMode::Oracle => TmfMode::Oracle,
        };
        let v = is_tmf(p, mode, &limits_arg(limits))?;
        write_out(out, v.is_tmf, "out")
    })
}

/// # Safety
/// `p` must be a live handle; `limits` may be null for defaults; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_is_non_wandering(
    p: *const SoficlabPresentation,
    limits: *const SoficlabLimits,
    out: *mut bool,
) -> SoficlabStatus {
    guard(|| {
        let p = &ref_arg(p, "p")?.inner;
        let cm = ContextMonoid::build(p, &limits_arg(limits))?;
        write_out(out, is_non_wandering(&cm)?.is_non_wandering, "out")
    })
}

/// # Safety
/// `p` must be a live handle; `limits` may be null for defaults; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_is_tmc(
    p: *const SoficlabPresentation,
    limits: *const SoficlabLimits,
    out: *mut bool,
) -> SoficlabStatus {
    guard(|| {
        let p = &ref_arg(p, "p")?.inner;
        write_out(out, is_tmc(p, &limits_arg(limits))?.0, "out")
    })
}

/// Full classification as a JSON report. An inconsistent classification is still written to
/// `out_json` and reported as `SOFICLAB_STATUS_INCONSISTENCY`.
///
/// # Safety
/// `p` must be a live handle; `limits` may be null; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_classify_json(
    p: *const SoficlabPresentation,
    limits: *const SoficlabLimits,
    out_json: *mut *mut c_char,
) -> SoficlabStatus {
    guard(|| {
        let p = &ref_arg(p, "p")?.inner;
        let r = classify(p, &limits_arg(limits))?;
        let consistent = r.consistent;
        let status = if consistent { "ok" } else { "inconsistent" };
        write_out(out_json, into_c_string(Report::new("classify", None, status, r).to_json()), "out_json")?;
        if consistent {
            Ok(())
        } else {
            Err(Failure(SoficlabStatus::Inconsistency, "conditions (c), (d), (e) disagree".into()))
        }
    })
}

/// Parses a measure document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_measure_load(json: *const c_char, out: *mut *mut SoficlabMeasure) -> SoficlabStatus {
    guard(|| {
        let inner = MeasureDocument::parse(str_arg(json, "json")?)?.into_measure()?;
        write_out(out, Box::into_raw(Box::new(SoficlabMeasure { inner })), "out")
    })
}

/// # Safety
/// `m` must be null or a handle from [`soficlab_measure_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn soficlab_measure_free(m: *mut SoficlabMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Probability of the cylinder `word` at `position`, as an exact `"p/q"` string.
///
/// # Safety
/// `m` must be a live handle, `word` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_measure_cylinder_prob(
    m: *const SoficlabMeasure,
    word: *const c_char,
    position: i64,
    out: *mut *mut c_char,
) -> SoficlabStatus {
    guard(|| {
        let m = &ref_arg(m, "m")?.inner;
        let text = str_arg(word, "word")?;
        let symbols =
            split_symbols(m.alphabet(), text).ok_or_else(|| Failure::from(Error::UnknownSymbol(text.to_string())))?;
        let w = soficlab::Word(symbols);
        write_out(out, into_c_string(m.cylinder_prob(&w, position).to_string()), "out")
    })
}

/// Greedy split of `text` into symbol names, longest name first.
fn split_symbols(alphabet: &[String], mut text: &str) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..alphabet.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(alphabet[i].len()));
    let mut out = Vec::new();
    while !text.is_empty() {
        let i = *order.iter().find(|&&i| text.starts_with(alphabet[i].as_str()))?;
        out.push(i);
        text = &text[alphabet[i].len()..];
    }
    Some(out)
}

/// MRF windows `(n, left, right)` and Markov windows `(markov_n, markov_left)` checked exactly;
/// the JSON report goes to `out_json`. A measure that is Markov but not an MRF within the
/// windows is reported as `SOFICLAB_STATUS_INCONSISTENCY`.
///
/// # Safety
/// `m` must be a live handle; `limits` may be null; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soficlab_measure_check_json(
    m: *const SoficlabMeasure,
    n: usize,
    left: usize,
    right: usize,
    markov_n: usize,
    markov_left: usize,
    limits: *const SoficlabLimits,
    out_json: *mut *mut c_char,
) -> SoficlabStatus {
    guard(|| {
        let m = &ref_arg(m, "m")?.inner;
        let r = verify_main_theorem(m, (n, left, right), (markov_n, markov_left), &limits_arg(limits))?;
        let inconsistent = r.outcome == soficlab::measure::TheoremOutcome::Inconsistent;
        let status = if inconsistent { "inconsistent" } else { "ok" };
        write_out(out_json, into_c_string(Report::new("measure check", None, status, r).to_json()), "out_json")?;
        if inconsistent {
            Err(Failure(SoficlabStatus::Inconsistency, "Markov within the windows but not an MRF".into()))
        } else {
            Ok(())
        }
    })
}
