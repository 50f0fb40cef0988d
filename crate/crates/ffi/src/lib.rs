//! C ABI over the `hilbgen` library.
//!
//! Objects are opaque handles released with the matching `*_free`. Functions return an
//! [`HgStatus`]; on failure `hg_last_error` describes the most recent error on the calling
//! thread. Strings returned to C are owned by the caller and released with `hg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hilbgen::bps::bps_table;
use hilbgen::catalog::row;
use hilbgen::{EtaProduct, IntSeries};
use num_traits::ToPrimitive;

/// Status codes. `HG_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HgStatus {
    HgOk = 0,
    HgNullPointer = 1,
    HgInvalidArgument = 2,
    HgParse = 3,
    HgNonUnit = 4,
    HgInexactRoot = 5,
    HgOffset = 6,
    HgOutOfRange = 7,
    HgOverflow = 8,
    HgUnknownRow = 9,
    HgNotPalindromic = 10,
    HgBasisOffset = 11,
    HgDivisibility = 12,
    HgMissingLocalFactor = 13,
    HgInconsistentDerivation = 14,
    HgConvergenceDomain = 15,
    HgNumericallySingular = 16,
    HgEmptySample = 17,
    HgIo = 18,
    HgJson = 19,
    HgComputation = 20,
    HgPanic = 21,
}

/// Opaque truncated q-series with integer coefficients.
pub struct HgSeries(IntSeries);

/// Opaque eta product.
pub struct HgEtaProduct(EtaProduct);

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &hilbgen::Error) -> HgStatus {
    use hilbgen::Error as E;
    match e {
        E::NonUnitLeadingCoefficient { .. } => HgStatus::HgNonUnit,
        E::InexactRoot { .. } => HgStatus::HgInexactRoot,
        E::InvalidOffset { .. } | E::IncompatibleOffsets { .. } => HgStatus::HgOffset,
        E::NotPalindromic => HgStatus::HgNotPalindromic,
        E::BasisOffsetViolation { .. } => HgStatus::HgBasisOffset,
        E::DivisibilityViolation { .. } => HgStatus::HgDivisibility,
        E::MissingLocalFactor(_) => HgStatus::HgMissingLocalFactor,
        E::InconsistentDerivation(_) => HgStatus::HgInconsistentDerivation,
        E::ConvergenceDomain { .. } => HgStatus::HgConvergenceDomain,
        E::NumericallySingular { .. } => HgStatus::HgNumericallySingular,
        E::EmptySample { .. } => HgStatus::HgEmptySample,
        E::UnknownRow(_) => HgStatus::HgUnknownRow,
        E::Parse(_) => HgStatus::HgParse,
        E::InvalidArgument(_) => HgStatus::HgInvalidArgument,
        E::Io(_) => HgStatus::HgIo,
        E::Json(_) => HgStatus::HgJson,
    }
}

/// Runs `f`, recording any error or panic for `hg_last_error`.
fn guard(f: impl FnOnce() -> Result<(), (HgStatus, String)>) -> HgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HgStatus::HgOk,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            HgStatus::HgPanic
        }
    }
}

fn lib_err(e: hilbgen::Error) -> (HgStatus, String) {
    (status_of(&e), format!("{}: {e}", e.code()))
}

fn null(what: &str) -> (HgStatus, String) {
    (HgStatus::HgNullPointer, format!("{what} is null"))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (HgStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (HgStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn to_c_string(s: String) -> Result<*mut c_char, (HgStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (HgStatus::HgComputation, "string contains NUL".into()))
}

/// Message for the last failed call on this thread, or null. Free with `hg_string_free`.
#[no_mangle]
pub extern "C" fn hg_last_error() -> *mut c_char {
    LAST_ERROR
        .with(|e| e.borrow().clone())
        .and_then(|m| CString::new(m).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `eta(q^m)^a * ...`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_eta_product_parse(
    text: *const c_char,
    out: *mut *mut HgEtaProduct,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let text = CStr::from_ptr(in_ref(text, "text")?)
            .to_str()
            .map_err(|_| (HgStatus::HgParse, "text is not UTF-8".to_string()))?;
        let p: EtaProduct = text.parse().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HgEtaProduct(p)));
        Ok(())
    })
}

/// Reference eta product of catalog row `row_id` (1 to 11).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_eta_product_from_row(
    row_id: u8,
    out: *mut *mut HgEtaProduct,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let r = row(row_id).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HgEtaProduct(r.reference_product)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hg_eta_product_free(p: *mut HgEtaProduct) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `level` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_eta_product_level(p: *const HgEtaProduct, level: *mut u64) -> HgStatus {
    guard(|| {
        *out_ptr(level, "level")? = in_ref(p, "product")?.0.level();
        Ok(())
    })
}

/// Weight as a reduced fraction.
///
/// # Safety
/// `p` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_eta_product_weight(
    p: *const HgEtaProduct,
    num: *mut i64,
    den: *mut i64,
) -> HgStatus {
    guard(|| {
        let w = in_ref(p, "product")?.0.weight();
        *out_ptr(num, "num")? = *w.numer();
        *out_ptr(den, "den")? = *w.denom();
        Ok(())
    })
}

/// Writes 1 to `holomorphic` when the cusp orders are all nonnegative, else 0.
///
/// # Safety
/// `p` must be a live handle; `holomorphic` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_eta_product_is_holomorphic(
    p: *const HgEtaProduct,
    holomorphic: *mut i32,
) -> HgStatus {
    guard(|| {
        *out_ptr(holomorphic, "holomorphic")? =
            in_ref(p, "product")?.0.koehler_check().is_holomorphic() as i32;
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_eta_product_to_string(
    p: *const HgEtaProduct,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = to_c_string(in_ref(p, "product")?.0.to_string())?;
        Ok(())
    })
}

/// q-expansion with `truncation` coefficients.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_eta_product_expand(
    p: *const HgEtaProduct,
    truncation: usize,
    out: *mut *mut HgSeries,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let s = in_ref(p, "product")?.0.expansion(truncation);
        *out = Box::into_raw(Box::new(HgSeries(s)));
        Ok(())
    })
}

/// Builds `q^offset * (c_0 + c_1 q + ...)` from `len` integers.
///
/// # Safety
/// `coeffs` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_from_i64(
    offset: i64,
    coeffs: *const i64,
    len: usize,
    out: *mut *mut HgSeries,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let cs = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(in_ref(coeffs, "coeffs")?, len)
        };
        *out = Box::into_raw(Box::new(HgSeries(IntSeries::from_i64s(offset, cs))));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hg_series_free(s: *mut HgSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of stored coefficients.
///
/// # Safety
/// `s` must be a live handle; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_len(s: *const HgSeries, len: *mut usize) -> HgStatus {
    guard(|| {
        *out_ptr(len, "len")? = in_ref(s, "series")?.0.truncation_order();
        Ok(())
    })
}

/// Exponent of the first coefficient as a reduced fraction.
///
/// # Safety
/// `s` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_offset(
    s: *const HgSeries,
    num: *mut i64,
    den: *mut i64,
) -> HgStatus {
    guard(|| {
        let o = in_ref(s, "series")?.0.offset();
        *out_ptr(num, "num")? = *o.numer();
        *out_ptr(den, "den")? = *o.denom();
        Ok(())
    })
}

/// Coefficient `i` as a 64-bit integer; `HG_OVERFLOW` when it does not fit.
///
/// # Safety
/// `s` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_coeff_i64(
    s: *const HgSeries,
    i: usize,
    value: *mut i64,
) -> HgStatus {
    guard(|| {
        let s = &in_ref(s, "series")?.0;
        let value = out_ptr(value, "value")?;
        if i >= s.truncation_order() {
            return Err((
                HgStatus::HgOutOfRange,
                format!("index {i} >= {}", s.truncation_order()),
            ));
        }
        *value = s.coeff(i).to_i64().ok_or_else(|| {
            (
                HgStatus::HgOverflow,
                format!("coefficient {i} exceeds 64 bits"),
            )
        })?;
        Ok(())
    })
}

/// Coefficient `i` in decimal.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_coeff_string(
    s: *const HgSeries,
    i: usize,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let s = &in_ref(s, "series")?.0;
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        if i >= s.truncation_order() {
            return Err((
                HgStatus::HgOutOfRange,
                format!("index {i} >= {}", s.truncation_order()),
            ));
        }
        *out = to_c_string(s.coeff(i).to_string())?;
        Ok(())
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_mul(
    a: *const HgSeries,
    b: *const HgSeries,
    out: *mut *mut HgSeries,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let p = in_ref(a, "a")?.0.mul(&in_ref(b, "b")?.0);
        *out = Box::into_raw(Box::new(HgSeries(p)));
        Ok(())
    })
}

/// Multiplicative inverse; the leading coefficient must be 1 or -1.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_inverse(
    s: *const HgSeries,
    out: *mut *mut HgSeries,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let inv = in_ref(s, "series")?.0.inverse().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HgSeries(inv)));
        Ok(())
    })
}

/// `n`-th root with leading coefficient 1.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_nth_root(
    s: *const HgSeries,
    n: u32,
    out: *mut *mut HgSeries,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let r = in_ref(s, "series")?.0.nth_root(n).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HgSeries(r)));
        Ok(())
    })
}

/// JSON form `{"offset_num", "offset_den", "coeffs": [...]}`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_series_to_json(s: *const HgSeries, out: *mut *mut c_char) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let j = serde_json::to_string(&in_ref(s, "series")?.0)
            .map_err(|e| (HgStatus::HgComputation, e.to_string()))?;
        *out = to_c_string(j)?;
        Ok(())
    })
}

/// Normalized BPS table `n_d(h)/16` for `d <= dmax`, `h <= hmax` as CSV.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_bps_table_csv(
    dmax: usize,
    hmax: usize,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let t = bps_table(dmax, hmax).map_err(lib_err)?;
        *out = to_c_string(t.to_csv())?;
        Ok(())
    })
}
