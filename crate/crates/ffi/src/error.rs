use metocean_joint::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};

/// Status codes. Input, numerical and invariant failures share their values
/// with the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MjStatus {
    MjOk = 0,
    MjErrNullPointer = 1,
    MjErrInvalidInput = 2,
    MjErrNumerical = 3,
    MjErrInvariant = 4,
    MjErrPanic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

pub(crate) fn set_last_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mj_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

pub(crate) fn status_of(e: &Error) -> MjStatus {
    match e {
        Error::Invariant(_) => MjStatus::MjErrInvariant,
        e if e.is_input_error() => MjStatus::MjErrInvalidInput,
        _ => MjStatus::MjErrNumerical,
    }
}

pub(crate) fn null_error(what: &str) -> MjStatus {
    set_last_error(format!("null pointer: {what}"));
    MjStatus::MjErrNullPointer
}

/// Run `f`, converting errors and panics into a status and a stored message.
pub(crate) fn guard<F>(f: F) -> MjStatus
where
    F: FnOnce() -> Result<(), MjFailure> + UnwindSafe,
{
    match catch_unwind(f) {
        Ok(Ok(())) => {
            clear_last_error();
            MjStatus::MjOk
        }
        Ok(Err(MjFailure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(MjFailure::Null(what))) => null_error(what),
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            MjStatus::MjErrPanic
        }
    }
}

pub(crate) enum MjFailure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for MjFailure {
    fn from(e: Error) -> Self {
        MjFailure::Lib(e)
    }
}

pub(crate) fn invalid(msg: &str) -> MjFailure {
    MjFailure::Lib(Error::InvalidInput(msg.to_string()))
}

/// Borrow `n` values from a possibly-null C array.
///
/// # Safety
/// `ptr` must be null or valid for `n` reads.
pub(crate) unsafe fn slice<'a>(ptr: *const f64, n: usize, what: &'static str) -> Result<&'a [f64], MjFailure> {
    if ptr.is_null() {
        return Err(MjFailure::Null(what));
    }
    // SAFETY: non-null and valid for n reads per the caller contract.
    Ok(unsafe { std::slice::from_raw_parts(ptr, n) })
}

/// # Safety
/// `ptr` must be null or valid for `n` writes.
pub(crate) unsafe fn slice_mut<'a>(ptr: *mut f64, n: usize, what: &'static str) -> Result<&'a mut [f64], MjFailure> {
    if ptr.is_null() {
        return Err(MjFailure::Null(what));
    }
    // SAFETY: non-null and valid for n writes per the caller contract.
    Ok(unsafe { std::slice::from_raw_parts_mut(ptr, n) })
}

/// # Safety
/// `ptr` must be null or valid for one write.
pub(crate) unsafe fn write_out<T>(ptr: *mut T, value: T, what: &'static str) -> Result<(), MjFailure> {
    if ptr.is_null() {
        return Err(MjFailure::Null(what));
    }
    // SAFETY: non-null and writable per the caller contract.
    unsafe { ptr.write(value) };
    Ok(())
}

/// # Safety
/// `ptr` must be null or point to a live `T` produced by this library.
pub(crate) unsafe fn handle<'a, T>(ptr: *const T, what: &'static str) -> Result<&'a T, MjFailure> {
    // SAFETY: caller guarantees a live handle when non-null.
    unsafe { ptr.as_ref() }.ok_or(MjFailure::Null(what))
}
