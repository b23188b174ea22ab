//! C ABI over `metocean_joint`.
//!
//! Fitted models cross the boundary as opaque handles created by `mj_*_fit`
//! and released by the matching `mj_*_free`. Every fallible function returns
//! an [`MjStatus`]; on failure a message is kept per thread and can be read
//! with [`mj_last_error_message`]. Output pointers are written only on success.

#![deny(unsafe_op_in_unsafe_fn)]

mod condex;
mod error;
mod form;
mod marginal;

pub use condex::*;
pub use error::{mj_last_error_message, MjStatus};
pub use form::*;
pub use marginal::*;

use std::ffi::c_char;

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mj_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
