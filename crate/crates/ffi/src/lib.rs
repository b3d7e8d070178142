//! C interface to the `cqca` library.
//!
//! Automata live behind an opaque [`CqcaAutomaton`] handle. Every function
//! returns a [`CqcaStatus`]; on failure [`cqca_last_error`] holds a message
//! for the calling thread. Strings are returned by copying into a caller
//! buffer, with the required size (including the NUL) always written back.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cqca::cqca::{load_cqca, CqcaClass, CqcaError, CqcaMatrix};
use cqca::pauli::{apply_power, PauliString};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqcaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    BudgetExceeded = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Coarse class of an automaton. `param` in [`cqca_classify`] carries the
/// trace constant for `Periodic` and the speed for `Glider`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqcaClassKind {
    Periodic = 0,
    Glider = 1,
    Fractal = 2,
}

/// Opaque handle to a validated automaton.
pub struct CqcaAutomaton {
    t: CqcaMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Ffi<T> = Result<T, CqcaStatus>;

fn fail<T>(status: CqcaStatus, msg: impl Into<String>) -> Ffi<T> {
    set_error(msg);
    Err(status)
}

fn guard(f: impl FnOnce() -> Ffi<()>) -> CqcaStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CqcaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside cqca");
            CqcaStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Ffi<&'a str> {
    if p.is_null() {
        return fail(CqcaStatus::NullPointer, format!("{what} is null"));
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(_) => fail(CqcaStatus::InvalidUtf8, format!("{what} is not UTF-8")),
    }
}

unsafe fn handle<'a>(h: *const CqcaAutomaton) -> Ffi<&'a CqcaAutomaton> {
    match h.as_ref() {
        Some(a) => Ok(a),
        None => fail(CqcaStatus::NullPointer, "automaton handle is null"),
    }
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Ffi<&'a mut T> {
    match p.as_mut() {
        Some(r) => Ok(r),
        None => fail(CqcaStatus::NullPointer, format!("{what} is null")),
    }
}

/// Copies `s` with a trailing NUL. `needed` always receives the full size.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Ffi<()> {
    let size = s.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || len < size {
        return fail(
            CqcaStatus::BufferTooSmall,
            format!("buffer of {len} bytes, need {size}"),
        );
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn cqca_status(e: &CqcaError) -> CqcaStatus {
    match e {
        CqcaError::PeriodBudgetExceeded(_) => CqcaStatus::BudgetExceeded,
        _ => CqcaStatus::InvalidArgument,
    }
}

/// Loads an automaton from a preset name, `trace=<poly>`, inline JSON or a
/// JSON file path. Release with [`cqca_automaton_free`].
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqca_automaton_load(
    spec: *const c_char,
    out: *mut *mut CqcaAutomaton,
) -> CqcaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let spec = read_str(spec, "spec")?;
        match load_cqca(spec) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(CqcaAutomaton { t }));
                Ok(())
            }
            Err(e) => fail(cqca_status(&e), e.to_string()),
        }
    })
}

/// Frees a handle. Null is ignored.
///
/// # Safety
/// `h` must come from [`cqca_automaton_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cqca_automaton_free(h: *mut CqcaAutomaton) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Class of the automaton.
///
/// # Safety
/// `h` must be a live handle; `kind` and `param` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cqca_classify(
    h: *const CqcaAutomaton,
    kind: *mut CqcaClassKind,
    param: *mut u64,
) -> CqcaStatus {
    guard(|| {
        let a = handle(h)?;
        let kind = out_ptr(kind, "kind")?;
        let param = out_ptr(param, "param")?;
        (*kind, *param) = match a.t.classify() {
            CqcaClass::Periodic(c) => (CqcaClassKind::Periodic, c as u64),
            CqcaClass::Glider(c) => (CqcaClassKind::Glider, c),
            CqcaClass::Fractal => (CqcaClassKind::Fractal, 0),
        };
        Ok(())
    })
}

/// Entangling and simple flags.
///
/// # Safety
/// `h` must be a live handle; the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cqca_flags(
    h: *const CqcaAutomaton,
    entangling: *mut bool,
    simple: *mut bool,
) -> CqcaStatus {
    guard(|| {
        let a = handle(h)?;
        *out_ptr(entangling, "entangling")? = a.t.is_entangling();
        *out_ptr(simple, "simple")? = a.t.is_simple();
        Ok(())
    })
}

/// Minimal period on a ring of `n` sites.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqca_period(h: *const CqcaAutomaton, n: usize, out: *mut u64) -> CqcaStatus {
    guard(|| {
        let a = handle(h)?;
        let out = out_ptr(out, "out")?;
        if n == 0 {
            return fail(CqcaStatus::InvalidArgument, "ring size must be positive");
        }
        match a.t.period(n) {
            Ok(l) => {
                *out = l;
                Ok(())
            }
            Err(e) => fail(cqca_status(&e), e.to_string()),
        }
    })
}

/// Writes the trace polynomial, e.g. `u^-1 + 1 + u`.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `len` bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn cqca_trace(
    h: *const CqcaAutomaton,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> CqcaStatus {
    guard(|| {
        let a = handle(h)?;
        write_str(&a.t.trace().to_string(), buf, len, needed)
    })
}

/// Evolves a Pauli string (`X0 Z3 @N=8`) by `steps` time steps and writes
/// the image in the same notation.
///
/// # Safety
/// `h` must be a live handle; `pauli` NUL-terminated; `buf` must hold `len`
/// bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn cqca_apply(
    h: *const CqcaAutomaton,
    pauli: *const c_char,
    steps: u64,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> CqcaStatus {
    guard(|| {
        let a = handle(h)?;
        let p: PauliString = match read_str(pauli, "pauli")?.parse() {
            Ok(p) => p,
            Err(e) => return fail(CqcaStatus::InvalidArgument, format!("{e}")),
        };
        write_str(&apply_power(&a.t, &p, steps).to_string(), buf, len, needed)
    })
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn cqca_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cqca_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
