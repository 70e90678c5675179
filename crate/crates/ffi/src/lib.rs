//! C ABI over `eaqecc`.
//!
//! Rings and codes are opaque heap handles released with their `_free`
//! function. Every call returns an [`EaqStatus`]; on failure the message is
//! available from [`eaq_last_error`] on the same thread. Strings handed out
//! by the library are released with [`eaq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;
use std::sync::Arc;

use eaqecc::cli::{self, CodeFile, Command, Limits};
use eaqecc::code::{AdditiveCode, Distance};
use eaqecc::extension::{eaqecc_params, minimum_entanglement_degree};
use eaqecc::galois::GaloisRing;
use eaqecc::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EaqStatus {
    Ok = 0,
    NullPointer = 1,
    /// bad ring parameters or defining polynomial
    InvalidRing = 2,
    /// malformed code text, residue out of range, or bad dimensions
    InvalidInput = 3,
    /// a configured enumeration or matrix cap was hit
    LimitExceeded = 4,
    /// unknown report command
    UnknownCommand = 5,
    Internal = 6,
    Panic = 7,
}

/// Sentinel values of [`EaqParams::distance`].
pub const EAQ_DISTANCE_INFINITE: i64 = -1;
pub const EAQ_DISTANCE_UNKNOWN: i64 = -2;

/// Code parameters; sizes are exponents of the ring characteristic's prime.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EaqParams {
    pub n: usize,
    pub c: usize,
    pub log_p_code: u32,
    pub log_p_extended: u32,
    pub log_p_k_exact: u32,
    pub log_p_k_lower: i64,
    pub log_p_k_upper: i64,
    /// minimum distance, or one of the `EAQ_DISTANCE_*` sentinels
    pub distance: i64,
}

pub struct EaqRing(Arc<GaloisRing>);

pub struct EaqCode(AdditiveCode);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> EaqStatus {
    match e {
        Error::NotPrime(_)
        | Error::ModulusTooLarge { .. }
        | Error::ParameterTooLarge { .. }
        | Error::HPolyInvalid(_) => EaqStatus::InvalidRing,
        Error::Parse { .. }
        | Error::Range { .. }
        | Error::EntryOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::Io(_) => EaqStatus::InvalidInput,
        e if e.is_cap() => EaqStatus::LimitExceeded,
        _ => EaqStatus::Internal,
    }
}

struct Fail(EaqStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(EaqStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EaqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EaqStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            EaqStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Builds `GR(p^b, m)` with its canonical defining polynomial.
///
/// # Safety
/// `out_ring` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eaq_ring_new(p: u64, b: u32, m: usize, out_ring: *mut *mut EaqRing) -> EaqStatus {
    guard(|| {
        let slot = out(out_ring, "out_ring")?;
        let r = GaloisRing::new(p, b, m)?;
        *slot = Box::into_raw(Box::new(EaqRing(Arc::new(r))));
        Ok(())
    })
}

/// Builds `GR(p^b, m)` from `h`, given as `m + 1` coefficients low to high.
///
/// # Safety
/// `h` must point to `h_len` readable values and `out_ring` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn eaq_ring_new_with_h(
    p: u64,
    b: u32,
    m: usize,
    h: *const u64,
    h_len: usize,
    out_ring: *mut *mut EaqRing,
) -> EaqStatus {
    guard(|| {
        let slot = out(out_ring, "out_ring")?;
        if h.is_null() {
            return Err(null("h"));
        }
        let coeffs = std::slice::from_raw_parts(h, h_len);
        let r = GaloisRing::with_h(p, b, m, coeffs)?;
        *slot = Box::into_raw(Box::new(EaqRing(Arc::new(r))));
        Ok(())
    })
}

/// Number of ring elements, `p^{bm}`.
///
/// # Safety
/// `ring` must come from `eaq_ring_new*`; `size` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eaq_ring_size(ring: *const EaqRing, size: *mut u64) -> EaqStatus {
    guard(|| {
        let r = deref(ring, "ring")?;
        *out(size, "size")? = r.0.size();
        Ok(())
    })
}

/// # Safety
/// `ring` must be null or come from `eaq_ring_new*` and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn eaq_ring_free(ring: *mut EaqRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Code spanned by `rows` generators in expanded coordinates: each row holds
/// `2·n·m` residues modulo `p^b`, all x coordinates first, then all y.
///
/// # Safety
/// `rows` must point to `row_count · 2·n·m` readable values (it may be null
/// when `row_count` is 0); `ring` must be live and `out_code` writable.
#[no_mangle]
pub unsafe extern "C" fn eaq_code_new(
    ring: *const EaqRing,
    n: usize,
    rows: *const u64,
    row_count: usize,
    out_code: *mut *mut EaqCode,
) -> EaqStatus {
    guard(|| {
        let r = deref(ring, "ring")?;
        let slot = out(out_code, "out_code")?;
        let len = 2 * n * r.0.m();
        let flat: &[u64] = if row_count == 0 {
            &[]
        } else if rows.is_null() {
            return Err(null("rows"));
        } else {
            std::slice::from_raw_parts(rows, row_count * len)
        };
        let q = r.0.modulus().value();
        if let Some(&v) = flat.iter().find(|&&v| v >= q) {
            return Err(Error::EntryOutOfRange { value: v, modulus: q }.into());
        }
        let gens: Vec<Vec<u64>> = flat.chunks(len.max(1)).map(<[u64]>::to_vec).collect();
        let code = AdditiveCode::from_expanded(r.0.clone(), n, &gens);
        *slot = Box::into_raw(Box::new(EaqCode(code)));
        Ok(())
    })
}

/// Parses a code file held in memory (the format the command-line tool
/// reads).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out_code` writable.
#[no_mangle]
pub unsafe extern "C" fn eaq_code_parse(text: *const c_char, out_code: *mut *mut EaqCode) -> EaqStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let slot = out(out_code, "out_code")?;
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Fail(EaqStatus::InvalidInput, format!("text is not UTF-8: {e}")))?;
        let (_, code) = CodeFile::parse(s)?.build()?;
        *slot = Box::into_raw(Box::new(EaqCode(code)));
        Ok(())
    })
}

/// # Safety
/// `code` must be null or come from `eaq_code_new`/`eaq_code_parse` and not
/// be freed yet.
#[no_mangle]
pub unsafe extern "C" fn eaq_code_free(code: *mut EaqCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// `log_p |C|`.
///
/// # Safety
/// `code` must be live and `log_card` writable.
#[no_mangle]
pub unsafe extern "C" fn eaq_code_log_cardinality(code: *const EaqCode, log_card: *mut u32) -> EaqStatus {
    guard(|| {
        let c = deref(code, "code")?;
        *out(log_card, "log_card")? = c.0.log_cardinality();
        Ok(())
    })
}

/// Fewest entanglement qudits over all self-orthogonal extensions.
///
/// # Safety
/// `code` must be live and `degree` writable.
#[no_mangle]
pub unsafe extern "C" fn eaq_min_entanglement_degree(code: *const EaqCode, degree: *mut usize) -> EaqStatus {
    guard(|| {
        let c = deref(code, "code")?;
        *out(degree, "degree")? = minimum_entanglement_degree(&c.0)?;
        Ok(())
    })
}

/// Parameters of the code built from the minimal extension. The distance
/// search enumerates at most `limit` words; past that `distance` is
/// `EAQ_DISTANCE_UNKNOWN` and the status is still `Ok`.
///
/// # Safety
/// `code` must be live and `params` writable.
#[no_mangle]
pub unsafe extern "C" fn eaq_code_params(code: *const EaqCode, limit: u64, params: *mut EaqParams) -> EaqStatus {
    guard(|| {
        let c = deref(code, "code")?;
        let slot = out(params, "params")?;
        let p = eaqecc_params(&c.0, limit)?;
        let distance = match p.distance.value {
            Some(Distance::Finite(d)) => d as i64,
            Some(Distance::Infinite) => EAQ_DISTANCE_INFINITE,
            None => EAQ_DISTANCE_UNKNOWN,
        };
        *slot = EaqParams {
            n: p.n,
            c: p.c,
            log_p_code: p.log_code,
            log_p_extended: p.log_extended,
            log_p_k_exact: p.log_k_exact,
            log_p_k_lower: p.log_k_lower,
            log_p_k_upper: p.log_k_upper,
            distance,
        };
        Ok(())
    })
}

/// JSON report for `command` ("params", "decompose", "extend", "dual",
/// "distance" or "verify"), identical to the command-line output with
/// default flags. Returns `LimitExceeded` when a cap shortened the report;
/// `*json` is set in that case too and for error reports, and must be
/// released with `eaq_string_free`.
///
/// # Safety
/// `code` must be live, `command` NUL-terminated, `json` writable.
#[no_mangle]
pub unsafe extern "C" fn eaq_code_report_json(
    code: *const EaqCode,
    command: *const c_char,
    json: *mut *mut c_char,
) -> EaqStatus {
    guard(|| {
        let c = deref(code, "code")?;
        if command.is_null() {
            return Err(null("command"));
        }
        let slot = out(json, "json")?;
        *slot = ptr::null_mut();
        let file = PathBuf::new();
        let cmd = match CStr::from_ptr(command).to_bytes() {
            b"params" => Command::Params { file },
            b"decompose" => Command::Decompose { file },
            b"extend" => Command::Extend { file },
            b"dual" => Command::Dual { file, level: 0 },
            b"distance" => Command::Distance {
                file,
                mode: cli::Mode::Auto,
            },
            b"verify" => Command::Verify { file },
            other => {
                return Err(Fail(
                    EaqStatus::UnknownCommand,
                    format!("unknown command {:?}", String::from_utf8_lossy(other)),
                ))
            }
        };
        let outcome = cli::report_for(&cmd, &c.0, &Limits::default());
        let text = CString::new(outcome.json).map_err(|e| Fail(EaqStatus::Internal, e.to_string()))?;
        *slot = text.into_raw();
        match outcome.exit_code {
            0 => Ok(()),
            2 => Err(Fail(EaqStatus::LimitExceeded, "a size cap shortened the report".into())),
            _ => Err(Fail(EaqStatus::Internal, "the report describes an error".into())),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eaq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn eaq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
