//! C ABI for `seqbayes`.
//!
//! Every fallible call returns an [`SbStatus`]. On failure a message for the
//! calling thread is available from [`sb_last_error`]. Posterior tables are
//! handed out as opaque [`SbPosterior`] handles owned by the caller and
//! released with [`sb_posterior_free`]. Strings returned by the library are
//! released with [`sb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use seqbayes::{
    generate, predict_next, Error, Hypothesis, LikelihoodParams, NoiseMode, NoiseSpec, PosteriorTable, Sequence,
    SpaceConfig,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSequence = 3,
    Overflow = 4,
    BufferTooSmall = 5,
    OutOfRange = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbHypothesisKind {
    Additive = 0,
    Multiplicative = 1,
    Compound = 2,
}

/// A rule `factor·x + offset`. `factor` is 1 for additive rules and
/// `offset` is 0 for multiplicative ones. `kind` holds an `SbHypothesisKind`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SbHypothesis {
    pub kind: u32,
    pub factor: u64,
    pub offset: u64,
}

impl From<Hypothesis> for SbHypothesis {
    fn from(h: Hypothesis) -> Self {
        let (factor, offset) = h.coefficients();
        let kind = match h {
            Hypothesis::Add { .. } => SbHypothesisKind::Additive,
            Hypothesis::Mul { .. } => SbHypothesisKind::Multiplicative,
            Hypothesis::Compound { .. } => SbHypothesisKind::Compound,
        };
        SbHypothesis {
            kind: kind as u32,
            factor,
            offset,
        }
    }
}

impl TryFrom<SbHypothesis> for Hypothesis {
    type Error = Error;

    fn try_from(h: SbHypothesis) -> Result<Self, Error> {
        match h.kind {
            k if k == SbHypothesisKind::Additive as u32 => Hypothesis::additive(h.offset),
            k if k == SbHypothesisKind::Multiplicative as u32 => Hypothesis::multiplicative(h.factor),
            k if k == SbHypothesisKind::Compound as u32 => Hypothesis::compound(h.factor, h.offset),
            k => Err(Error::Parameter(format!("unknown hypothesis kind {k}"))),
        }
    }
}

/// One row of a posterior table.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbEntry {
    pub hypothesis: SbHypothesis,
    /// `-INFINITY` when the prior is zero.
    pub log_score: f64,
    pub probability: f64,
    pub prediction: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbNoiseMode {
    None = 0,
    Progressive = 1,
    Stationary = 2,
}

/// Opaque posterior table.
pub struct SbPosterior {
    table: PosteriorTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: SbStatus, msg: impl Into<String>) -> SbStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> SbStatus {
    let status = match &e {
        Error::Sequence(_) => SbStatus::InvalidSequence,
        Error::DomainOverflow { .. } | Error::GenerationOverflow { .. } => SbStatus::Overflow,
        Error::Config(_) | Error::Parameter(_) | Error::Label { .. } | Error::NoiseRejection { .. } => {
            SbStatus::InvalidArgument
        }
        _ => SbStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn sb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `values` must be NULL or point to `len` readable `u64`s.
unsafe fn read_sequence(values: *const u64, len: usize) -> Result<Sequence, SbStatus> {
    if values.is_null() {
        return Err(fail(SbStatus::NullPointer, "values is NULL"));
    }
    // SAFETY: caller guarantees `len` readable elements.
    let slice = unsafe { std::slice::from_raw_parts(values, len) };
    Sequence::new(slice.to_vec()).map_err(from_error)
}

/// Computes the posterior over the default 32-rule space.
///
/// # Safety
/// `values` must point to `len` readable `u64`s; `out` must be a valid
/// pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sb_posterior_compute(
    values: *const u64,
    len: usize,
    beta: f64,
    sigma2: f64,
    out: *mut *mut SbPosterior,
) -> SbStatus {
    if out.is_null() {
        return fail(SbStatus::NullPointer, "out is NULL");
    }
    // SAFETY: forwarded caller contract.
    let seq = match unsafe { read_sequence(values, len) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match predict_next(
        &seq,
        &SpaceConfig::default(),
        beta,
        &LikelihoodParams::with_sigma2(sigma2),
    ) {
        Ok(p) => {
            let handle = Box::into_raw(Box::new(SbPosterior { table: p.table }));
            // SAFETY: `out` checked non-null; caller guarantees it is writable.
            unsafe { *out = handle };
            SbStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Number of entries; 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live handle from [`sb_posterior_compute`].
#[no_mangle]
pub unsafe extern "C" fn sb_posterior_len(handle: *const SbPosterior) -> usize {
    // SAFETY: caller contract.
    unsafe { handle.as_ref() }.map_or(0, |h| h.table.entries.len())
}

/// Entry `index` in descending probability order.
///
/// # Safety
/// `handle` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn sb_posterior_entry(handle: *const SbPosterior, index: usize, out: *mut SbEntry) -> SbStatus {
    // SAFETY: caller contract.
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return fail(SbStatus::NullPointer, "handle is NULL");
    };
    if out.is_null() {
        return fail(SbStatus::NullPointer, "out is NULL");
    }
    let Some(e) = h.table.entries.get(index) else {
        return fail(
            SbStatus::OutOfRange,
            format!("index {index} out of range for {} entries", h.table.entries.len()),
        );
    };
    let entry = SbEntry {
        hypothesis: e.hypothesis.into(),
        log_score: e.log_score,
        probability: e.probability,
        prediction: e.prediction,
    };
    // SAFETY: checked non-null; caller guarantees writable.
    unsafe { *out = entry };
    SbStatus::Ok
}

/// Serializes the table as JSON. Free the result with [`sb_string_free`].
/// Returns NULL on failure.
///
/// # Safety
/// `handle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sb_posterior_to_json(handle: *const SbPosterior) -> *mut c_char {
    // SAFETY: caller contract.
    let Some(h) = (unsafe { handle.as_ref() }) else {
        set_error("handle is NULL");
        return ptr::null_mut();
    };
    match serde_json::to_string(&h.table).map(CString::new) {
        Ok(Ok(s)) => s.into_raw(),
        _ => {
            set_error("serialization failed");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `handle` must be NULL or a handle from [`sb_posterior_compute`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_posterior_free(handle: *mut SbPosterior) {
    if !handle.is_null() {
        // SAFETY: produced by Box::into_raw in sb_posterior_compute.
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// MAP rule and its prediction for the next element.
///
/// # Safety
/// `values` must point to `len` readable `u64`s; `out_next` and
/// `out_hypothesis` must be writable (either may be NULL to skip).
#[no_mangle]
pub unsafe extern "C" fn sb_predict_next(
    values: *const u64,
    len: usize,
    beta: f64,
    sigma2: f64,
    out_next: *mut u64,
    out_hypothesis: *mut SbHypothesis,
) -> SbStatus {
    // SAFETY: forwarded caller contract.
    let seq = match unsafe { read_sequence(values, len) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match predict_next(
        &seq,
        &SpaceConfig::default(),
        beta,
        &LikelihoodParams::with_sigma2(sigma2),
    ) {
        Ok(p) => {
            // SAFETY: each pointer is checked for NULL; caller guarantees writability.
            unsafe {
                if !out_next.is_null() {
                    *out_next = p.next;
                }
                if !out_hypothesis.is_null() {
                    *out_hypothesis = p.hypothesis.into();
                }
            }
            SbStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Writes the label (`A3`, `M2`, `M2+A4`) NUL-terminated into `buf`.
/// `out_len`, if non-NULL, receives the label length without the NUL, also
/// when the buffer is too small.
///
/// # Safety
/// `buf` must be NULL or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sb_hypothesis_label(
    hypothesis: SbHypothesis,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> SbStatus {
    let h = match Hypothesis::try_from(hypothesis) {
        Ok(h) => h,
        Err(e) => return from_error(e),
    };
    let label = h.to_string();
    if !out_len.is_null() {
        // SAFETY: checked non-null.
        unsafe { *out_len = label.len() };
    }
    if buf.is_null() {
        return fail(SbStatus::NullPointer, "buf is NULL");
    }
    if cap < label.len() + 1 {
        return fail(SbStatus::BufferTooSmall, format!("need {} bytes", label.len() + 1));
    }
    // SAFETY: `buf` has at least label.len() + 1 writable bytes.
    unsafe {
        ptr::copy_nonoverlapping(label.as_ptr(), buf.cast::<u8>(), label.len());
        *buf.add(label.len()) = 0;
    }
    SbStatus::Ok
}

/// Parses a label into `out`.
///
/// # Safety
/// `label` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sb_hypothesis_parse(label: *const c_char, out: *mut SbHypothesis) -> SbStatus {
    if label.is_null() || out.is_null() {
        return fail(SbStatus::NullPointer, "label or out is NULL");
    }
    // SAFETY: caller guarantees a NUL-terminated string.
    let Ok(text) = unsafe { CStr::from_ptr(label) }.to_str() else {
        return fail(SbStatus::InvalidArgument, "label is not UTF-8");
    };
    match text.parse::<Hypothesis>() {
        Ok(h) => {
            // SAFETY: checked non-null.
            unsafe { *out = h.into() };
            SbStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Generates `length` values into `out_values` (capacity `cap`).
/// `mode` holds an `SbNoiseMode`; `sigma` is the noise standard deviation,
/// ignored for `SB_NOISE_MODE_NONE`.
///
/// # Safety
/// `out_values` must point to `cap` writable `u64`s.
#[no_mangle]
pub unsafe extern "C" fn sb_generate(
    hypothesis: SbHypothesis,
    start: u64,
    length: usize,
    mode: u32,
    sigma: f64,
    seed: u64,
    n_max: u64,
    out_values: *mut u64,
    cap: usize,
) -> SbStatus {
    if out_values.is_null() {
        return fail(SbStatus::NullPointer, "out_values is NULL");
    }
    if cap < length {
        return fail(SbStatus::BufferTooSmall, format!("need room for {length} values"));
    }
    let h = match Hypothesis::try_from(hypothesis) {
        Ok(h) => h,
        Err(e) => return from_error(e),
    };
    let mode = match mode {
        m if m == SbNoiseMode::None as u32 => NoiseMode::None,
        m if m == SbNoiseMode::Progressive as u32 => NoiseMode::Progressive,
        m if m == SbNoiseMode::Stationary as u32 => NoiseMode::Stationary,
        m => return fail(SbStatus::InvalidArgument, format!("unknown noise mode {m}")),
    };
    let sample = match NoiseSpec::new(mode, sigma, seed).and_then(|noise| generate(&h, start, length, &noise, n_max)) {
        Ok(s) => s,
        Err(e) => return from_error(e),
    };
    // SAFETY: `out_values` has `cap >= length == sample.values.len()` slots.
    unsafe { ptr::copy_nonoverlapping(sample.values.as_ptr(), out_values, sample.values.len()) };
    SbStatus::Ok
}
