//! C ABI for the wmds library.
//!
//! Handles are opaque pointers created by `wmds_build` and released by
//! `wmds_invariant_free`. Every fallible call returns a `WmdsStatus`; results
//! travel through out-parameters. Strings returned through `char **` are
//! heap-allocated and must be released with `wmds_string_free`.
//!
//! The generated header lives at `include/wmds.h` (regenerated by the build
//! script).

#![deny(unsafe_op_in_unsafe_fn)]

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use num_bigint::BigInt;

use wmds::checks::{self, BatteryOptions, Budget};
use wmds::error::Error;
use wmds::invariant::{BuildOptions, InvariantFunction};
use wmds::qcoeffs::{jacobi, HContext};
use wmds::rootsys::Family;

/// Status codes for every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WmdsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidRootSystem = 2,
    CapExceeded = 3,
    BudgetExceeded = 4,
    NotExact = 5,
    DegreeShortfall = 6,
    BadModulus = 7,
    CheckFailure = 8,
    Internal = 9,
}

fn status_for(e: &Error) -> WmdsStatus {
    match e {
        Error::InvalidRootSystem { .. } => WmdsStatus::InvalidRootSystem,
        Error::WeylCapExceeded { .. } => WmdsStatus::CapExceeded,
        Error::TermBudgetExceeded { .. } | Error::WallBudgetExceeded { .. } => {
            WmdsStatus::BudgetExceeded
        }
        Error::DegreeShortfall { .. } => WmdsStatus::DegreeShortfall,
        Error::BadModulus { .. } => WmdsStatus::BadModulus,
        _ => WmdsStatus::Internal,
    }
}

/// Opaque handle to a built invariant function together with a lazily grown
/// coefficient table.
pub struct WmdsInvariant {
    inv: InvariantFunction,
    hctx: Option<HContext>,
}

unsafe fn out_string(dst: *mut *mut c_char, s: String) -> WmdsStatus {
    let Ok(cs) = CString::new(s) else {
        return WmdsStatus::Internal;
    };
    unsafe { *dst = cs.into_raw() };
    WmdsStatus::Ok
}

/// Build the invariant function for family `'A'`, `'D'`, or `'E'` and the
/// given rank. `weyl_cap` and `term_budget` of zero select the defaults.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn wmds_build(
    family: c_char,
    rank: u32,
    weyl_cap: u64,
    term_budget: u64,
    out: *mut *mut WmdsInvariant,
) -> WmdsStatus {
    if out.is_null() {
        return WmdsStatus::NullArgument;
    }
    let Some(family) = Family::from_letter(family as u8 as char) else {
        return WmdsStatus::InvalidRootSystem;
    };
    let defaults = BuildOptions::default();
    let opts = BuildOptions {
        weyl_cap: if weyl_cap == 0 { defaults.weyl_cap } else { weyl_cap },
        term_budget: if term_budget == 0 { defaults.term_budget } else { term_budget as usize },
        force_series: false,
        wall_budget_secs: None,
    };
    match InvariantFunction::build(family, rank as usize, &opts) {
        Ok(inv) => {
            let handle = Box::new(WmdsInvariant { inv, hctx: None });
            unsafe { *out = Box::into_raw(handle) };
            WmdsStatus::Ok
        }
        Err(e) => {
            unsafe { *out = ptr::null_mut() };
            status_for(&e)
        }
    }
}

/// Release a handle created by `wmds_build`.
///
/// # Safety
/// `handle` must be null or a pointer previously returned by `wmds_build`.
#[no_mangle]
pub unsafe extern "C" fn wmds_invariant_free(handle: *mut WmdsInvariant) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Release a string returned through a `char **` out-parameter.
///
/// # Safety
/// `s` must be null or a pointer previously handed out by this library.
#[no_mangle]
pub unsafe extern "C" fn wmds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// `handle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wmds_rank(handle: *const WmdsInvariant) -> u32 {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.inv.rank() as u32
}

/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmds_weyl_order(
    handle: *const WmdsInvariant,
    out: *mut u64,
) -> WmdsStatus {
    if handle.is_null() || out.is_null() {
        return WmdsStatus::NullArgument;
    }
    unsafe { *out = (&*handle).inv.weyl.len() as u64 };
    WmdsStatus::Ok
}

/// Whether the build kept the exact rational function (1) or degraded to
/// series mode (0).
///
/// # Safety
/// `handle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wmds_is_exact(handle: *const WmdsInvariant) -> i32 {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.inv.is_exact() as i32
}

/// Number of terms of the p-part polynomial `f * D`.
///
/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmds_ppart_terms(
    handle: *const WmdsInvariant,
    out: *mut u64,
) -> WmdsStatus {
    if handle.is_null() || out.is_null() {
        return WmdsStatus::NullArgument;
    }
    match unsafe { &*handle }.inv.ppart() {
        Ok(p) => {
            unsafe { *out = p.num_terms() as u64 };
            WmdsStatus::Ok
        }
        Err(_) => WmdsStatus::NotExact,
    }
}

/// The coefficient `a(k_1, ..., k_r; q)` as a decimal-coefficient polynomial
/// string in `q`, or its integer value when `q > 0` is supplied.
///
/// # Safety
/// `handle` live; `ks` points to `len` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wmds_coefficient(
    handle: *mut WmdsInvariant,
    ks: *const u32,
    len: usize,
    q: i64,
    out: *mut *mut c_char,
) -> WmdsStatus {
    if handle.is_null() || ks.is_null() || out.is_null() {
        return WmdsStatus::NullArgument;
    }
    let h = unsafe { &mut *handle };
    if len != h.inv.rank() {
        return WmdsStatus::InvalidRootSystem;
    }
    let key: Vec<u32> = unsafe { std::slice::from_raw_parts(ks, len) }.to_vec();
    let depth: u32 = key.iter().sum();
    if let Err(e) = ensure_table(h, depth) {
        return status_for(&e);
    }
    let table = &h.hctx.as_ref().unwrap().table;
    match table.get(&key) {
        Ok(qp) => {
            let s = if q > 0 { qp.eval(&BigInt::from(q)).to_string() } else { qp.to_string() };
            unsafe { out_string(out, s) }
        }
        Err(e) => status_for(&e),
    }
}

fn ensure_table(h: &mut WmdsInvariant, depth: u32) -> wmds::Result<()> {
    let need_rebuild = match &h.hctx {
        Some(ctx) => ctx.table.max_deg < depth,
        None => true,
    };
    if need_rebuild {
        h.hctx = Some(HContext::new(&h.inv, depth.max(12))?);
    }
    Ok(())
}

/// The global coefficient `H(m_1, ..., m_r)` for odd positive arguments, as
/// a decimal string.
///
/// # Safety
/// `handle` live; `ms` points to `len` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wmds_h_coefficient(
    handle: *mut WmdsInvariant,
    ms: *const u64,
    len: usize,
    out: *mut *mut c_char,
) -> WmdsStatus {
    if handle.is_null() || ms.is_null() || out.is_null() {
        return WmdsStatus::NullArgument;
    }
    let h = unsafe { &mut *handle };
    if len != h.inv.rank() {
        return WmdsStatus::InvalidRootSystem;
    }
    let m: Vec<u64> = unsafe { std::slice::from_raw_parts(ms, len) }.to_vec();
    // any prime-power block has exponent sum at most sum_i log2(m_i)
    let depth: u32 = m.iter().map(|&mi| 64 - mi.leading_zeros()).sum();
    if let Err(e) = ensure_table(h, depth.clamp(12, 24)) {
        return status_for(&e);
    }
    match h.hctx.as_ref().unwrap().h_general(&m) {
        Ok(v) => unsafe { out_string(out, v.to_string()) },
        Err(e) => status_for(&e),
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmds_jacobi(a: i64, n: u64, out: *mut i32) -> WmdsStatus {
    if out.is_null() {
        return WmdsStatus::NullArgument;
    }
    match jacobi(a, n) {
        Ok(v) => {
            unsafe { *out = v };
            WmdsStatus::Ok
        }
        Err(e) => status_for(&e),
    }
}

/// Run the verification battery; `failures` receives the number of failing
/// checks. Returns `CheckFailure` when any check fails.
///
/// # Safety
/// `handle` must be a live handle; `failures` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmds_verify(
    handle: *const WmdsInvariant,
    budget_secs: u64,
    failures: *mut u32,
) -> WmdsStatus {
    if handle.is_null() || failures.is_null() {
        return WmdsStatus::NullArgument;
    }
    let h = unsafe { &*handle };
    let opts = BatteryOptions {
        budget: Budget::new(if budget_secs == 0 { None } else { Some(budget_secs) }),
        ..Default::default()
    };
    let reports = checks::system_battery(&h.inv, &opts);
    let n_fail = reports.iter().filter(|r| !r.pass).count() as u32;
    unsafe { *failures = n_fail };
    if n_fail == 0 {
        WmdsStatus::Ok
    } else {
        WmdsStatus::CheckFailure
    }
}

/// The p-part polynomial in the interchange text format.
///
/// # Safety
/// `handle` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wmds_ppart_text(
    handle: *const WmdsInvariant,
    out: *mut *mut c_char,
) -> WmdsStatus {
    if handle.is_null() || out.is_null() {
        return WmdsStatus::NullArgument;
    }
    let h = unsafe { &*handle };
    match h.inv.ppart() {
        Ok(p) => {
            let mut buf = Vec::new();
            if wmds::io::write_poly(&mut buf, "ppart", p).is_err() {
                return WmdsStatus::Internal;
            }
            match String::from_utf8(buf) {
                Ok(s) => unsafe { out_string(out, s) },
                Err(_) => WmdsStatus::Internal,
            }
        }
        Err(_) => WmdsStatus::NotExact,
    }
}

/// Library version as a static string (not to be freed).
#[no_mangle]
pub extern "C" fn wmds_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Parse helper so C callers can map family names; returns 1 on success.
///
/// # Safety
/// `name` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn wmds_family_valid(name: *const c_char) -> i32 {
    if name.is_null() {
        return 0;
    }
    let Ok(s) = unsafe { CStr::from_ptr(name) }.to_str() else {
        return 0;
    };
    (s.len() == 1 && s.chars().next().and_then(Family::from_letter).is_some()) as i32
}
