//! C interface.
//!
//! Every fallible function returns a [`BrStatus`] and writes its result
//! through an out pointer. On failure the message is available from
//! [`br_last_error_message`] on the same thread. Strings returned to the
//! caller are owned by the caller and released with [`br_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use brickrank::archetypes::{lattice_maxrank, rank_polynomial};
use brickrank::dedekind::dedekind_count;
use brickrank::maxrank::geometric_maxrank_with;
use brickrank::witness::tile_witness;
use brickrank::{minimal_set, Brick, BrickAntichain, Error, FactoredNat, Phrase};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrStatus {
    Ok = 0,
    /// The question was answered negatively.
    No = 1,
    Parse = 2,
    Guard = 3,
    Internal = 4,
    NullPointer = 5,
    OutOfRange = 6,
}

/// A list of numeric proto bricks.
pub struct BrProtoSet {
    bricks: Vec<Brick<FactoredNat>>,
}

/// A computed set of minimal tilable boxes.
pub struct BrAntichain {
    inner: BrickAntichain<FactoredNat>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: BrStatus, message: impl Into<String>) -> BrStatus {
    set_error(message);
    status
}

fn status_of(e: &Error) -> BrStatus {
    match e {
        Error::Guard(_) => BrStatus::Guard,
        Error::Assertion(_) | Error::Overflow(_) | Error::Io(_) => BrStatus::Internal,
        _ => BrStatus::Parse,
    }
}

fn from_error(e: Error) -> BrStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `body`, turning panics into `Internal`.
fn guarded(body: impl FnOnce() -> BrStatus) -> BrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(BrStatus::Internal, "panic inside brickrank"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BrStatus> {
    if s.is_null() {
        return Err(fail(BrStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(BrStatus::Parse, "argument is not valid UTF-8"))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// The message of the last failure on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn br_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn br_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn br_protoset_new() -> *mut BrProtoSet {
    Box::into_raw(Box::new(BrProtoSet { bricks: Vec::new() }))
}

/// # Safety
/// `set` must be NULL or a pointer from [`br_protoset_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn br_protoset_free(set: *mut BrProtoSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Appends a brick written like `25x3`. All bricks must share a dimension.
///
/// # Safety
/// `set` must come from [`br_protoset_new`]; `brick` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn br_protoset_add(set: *mut BrProtoSet, brick: *const c_char) -> BrStatus {
    guarded(|| {
        let Some(set) = set.as_mut() else {
            return fail(BrStatus::NullPointer, "null proto set");
        };
        let text = match read_str(brick) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let b: Brick<FactoredNat> = match text.parse() {
            Ok(b) => b,
            Err(e) => return from_error(e),
        };
        if let Some(first) = set.bricks.first() {
            if first.dim() != b.dim() {
                return fail(
                    BrStatus::Parse,
                    format!("brick {b} has dimension {}, expected {}", b.dim(), first.dim()),
                );
            }
        }
        set.bricks.push(b);
        BrStatus::Ok
    })
}

/// # Safety
/// `set` must be NULL or a live proto set.
#[no_mangle]
pub unsafe extern "C" fn br_protoset_len(set: *const BrProtoSet) -> usize {
    set.as_ref().map_or(0, |s| s.bricks.len())
}

/// Computes the minimal tilable boxes; free the result with
/// [`br_antichain_free`].
///
/// # Safety
/// `set` must be a live proto set and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn br_minimal_set(set: *const BrProtoSet, out: *mut *mut BrAntichain) -> BrStatus {
    guarded(|| {
        let (Some(set), false) = (set.as_ref(), out.is_null()) else {
            return fail(BrStatus::NullPointer, "null argument");
        };
        match minimal_set(&set.bricks) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(BrAntichain { inner }));
                BrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `m` must be NULL or a pointer from [`br_minimal_set`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn br_antichain_free(m: *mut BrAntichain) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be NULL or a live antichain.
#[no_mangle]
pub unsafe extern "C" fn br_antichain_len(m: *const BrAntichain) -> usize {
    m.as_ref().map_or(0, |m| m.inner.len())
}

/// The `index`-th brick in canonical order as a new string.
///
/// # Safety
/// `m` must be a live antichain and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn br_antichain_get(m: *const BrAntichain, index: usize, out: *mut *mut c_char) -> BrStatus {
    guarded(|| {
        let (Some(m), false) = (m.as_ref(), out.is_null()) else {
            return fail(BrStatus::NullPointer, "null argument");
        };
        match m.inner.bricks().get(index) {
            Some(b) => {
                *out = to_c_string(b.to_string());
                BrStatus::Ok
            }
            None => fail(BrStatus::OutOfRange, format!("index {index} of {}", m.inner.len())),
        }
    })
}

/// `Ok` when `target` is tilable, `No` when it is not.
///
/// # Safety
/// `m` must be a live antichain and `target` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn br_is_tilable(m: *const BrAntichain, target: *const c_char) -> BrStatus {
    guarded(|| {
        let Some(m) = m.as_ref() else {
            return fail(BrStatus::NullPointer, "null antichain");
        };
        let t: Brick<FactoredNat> = match read_str(target).map(str::parse) {
            Ok(Ok(t)) => t,
            Ok(Err(e)) => return from_error(e),
            Err(s) => return s,
        };
        match m.inner.divisor_of(&t) {
            Ok(Some(_)) => BrStatus::Ok,
            Ok(None) => BrStatus::No,
            Err(e) => from_error(e),
        }
    })
}

/// A verified signed tiling of `target` as JSON, or `No` when there is none.
///
/// # Safety
/// `set` must be a live proto set, `target` a NUL-terminated string and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn br_tile_witness_json(
    set: *const BrProtoSet,
    target: *const c_char,
    out: *mut *mut c_char,
) -> BrStatus {
    guarded(|| {
        let (Some(set), false) = (set.as_ref(), out.is_null()) else {
            return fail(BrStatus::NullPointer, "null argument");
        };
        let t: Brick<FactoredNat> = match read_str(target).map(str::parse) {
            Ok(Ok(t)) => t,
            Ok(Err(e)) => return from_error(e),
            Err(s) => return s,
        };
        match tile_witness(&set.bricks, &t).and_then(|w| w.map(|w| w.to_json()).transpose()) {
            Ok(Some(json)) => {
                *out = to_c_string(json);
                BrStatus::Ok
            }
            Ok(None) => BrStatus::No,
            Err(e) => from_error(e),
        }
    })
}

/// Rank of the worst-case cube proto-set of `n` bricks in dimension `d`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn br_maxrank(n: u32, d: u32, allow_big: bool, out: *mut u64) -> BrStatus {
    guarded(|| {
        if out.is_null() {
            return fail(BrStatus::NullPointer, "null out pointer");
        }
        match geometric_maxrank_with(n as usize, d as usize, allow_big) {
            Ok(r) => {
                *out = r as u64;
                BrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Maxrank over the free distributive lattice on `n` letters in dimension `d`, for `n <= 4`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn br_lattice_maxrank(n: u32, d: u32, out: *mut u64) -> BrStatus {
    guarded(|| {
        if out.is_null() {
            return fail(BrStatus::NullPointer, "null out pointer");
        }
        match lattice_maxrank(n as usize, d as usize) {
            Ok(r) => match u64::try_from(r) {
                Ok(r) => {
                    *out = r;
                    BrStatus::Ok
                }
                Err(_) => fail(BrStatus::OutOfRange, format!("{r} does not fit in 64 bits")),
            },
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn br_dedekind_count(n: u32, out: *mut u64) -> BrStatus {
    guarded(|| {
        if out.is_null() {
            return fail(BrStatus::NullPointer, "null out pointer");
        }
        match dedekind_count(n as usize) {
            Ok(c) => {
                *out = c as u64;
                BrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `phrase` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn br_phrase_dual(phrase: *const c_char, out: *mut *mut c_char) -> BrStatus {
    guarded(|| {
        if out.is_null() {
            return fail(BrStatus::NullPointer, "null out pointer");
        }
        let p: Phrase = match read_str(phrase).map(str::parse) {
            Ok(Ok(p)) => p,
            Ok(Err(e)) => return from_error(e),
            Err(s) => return s,
        };
        *out = to_c_string(p.dual().to_string());
        BrStatus::Ok
    })
}

/// The polynomial in `d` giving the maxrank for `n` proto bricks, as text.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn br_rank_polynomial(n: u32, out: *mut *mut c_char) -> BrStatus {
    guarded(|| {
        if out.is_null() {
            return fail(BrStatus::NullPointer, "null out pointer");
        }
        match rank_polynomial(n as usize) {
            Ok(p) => {
                *out = to_c_string(p.to_string());
                BrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
