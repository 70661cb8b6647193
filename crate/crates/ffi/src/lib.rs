//! C ABI over `toric-period`.
//!
//! Objects are opaque handles created by `tp_*_new`/`tp_*_parse` and released
//! with the matching `tp_*_free`. Every fallible call returns a [`TpStatus`];
//! on failure `tp_last_error()` describes the cause until the next call on
//! the same thread. Strings returned by the library are freed with
//! `tp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use toric_period::characters::notation::{parse_character, parse_test_vector};
use toric_period::characters::MultChar;
use toric_period::cyclo::{CycloNumber, DEFAULT_ORDER_CAP};
use toric_period::induction::SupercuspidalData;
use toric_period::padic::FieldDescriptor;
use toric_period::period::{period_integral, Certificate, EmbeddingSpec, IntegralOptions};
use toric_period::quadext::QuadExtDescriptor;
use toric_period::sylvester::beta3_newform;
use toric_period::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Precision = 4,
    Budget = 5,
    IncompatibleCharacters = 6,
    Unsupported = 7,
    NotRational = 8,
    Internal = 99,
}

/// `Q_p(√D)` at a fixed working precision.
pub struct TpField(QuadExtDescriptor);

/// A character of `E^×`.
pub struct TpCharacter(MultChar<QuadExtDescriptor>);

/// The supercuspidal representation induced from a character `θ`.
pub struct TpRepresentation(SupercuspidalData);

/// An exact period value with its refinement certificate.
pub struct TpValue {
    value: CycloNumber,
    certificate: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TpStatus {
    match e {
        Error::Parse(_) | Error::InconsistentTable(_) => TpStatus::Parse,
        Error::PrecisionUnsupported { .. }
        | Error::PrecisionTooLow { .. }
        | Error::PrecisionLoss { .. } => TpStatus::Precision,
        Error::BudgetExceeded { .. }
        | Error::OrderBudgetExceeded { .. }
        | Error::UnstableSum(_) => TpStatus::Budget,
        Error::IncompatibleCentralCharacter | Error::FieldMismatch => {
            TpStatus::IncompatibleCharacters
        }
        Error::UnsupportedCase(_)
        | Error::UnramifiedUnsupported
        | Error::HypothesisViolation(_) => TpStatus::Unsupported,
        Error::NotRational => TpStatus::NotRational,
        _ => TpStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (TpStatus, String)>) -> TpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TpStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TpStatus::Internal
        }
    }
}

fn lib<T>(r: toric_period::Result<T>) -> Result<T, (TpStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (TpStatus, String) {
    (TpStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, (TpStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (TpStatus::Parse, "argument is not UTF-8".into()))
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, (TpStatus, String)> {
    h.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut *mut T, v: T) -> Result<(), (TpStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Message for the last failed call on this thread (empty after success).
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn tp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates `Q_p(√d)` with `precision` p-adic digits.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tp_field_new(
    p: u64,
    precision: u32,
    d: i64,
    out: *mut *mut TpField,
) -> TpStatus {
    guard(|| {
        let f = lib(FieldDescriptor::new(p, precision))?;
        let e = lib(QuadExtDescriptor::new(f, d))?;
        write_out(out, TpField(e))
    })
}

/// # Safety
/// `h` must be null or a handle from `tp_field_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_field_free(h: *mut TpField) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Parses a character written as `LEVEL:UNIF:a,b=ANGLE;...`.
///
/// # Safety
/// `field` must be a live field handle, `spec` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_character_parse(
    field: *const TpField,
    spec: *const c_char,
    out: *mut *mut TpCharacter,
) -> TpStatus {
    guard(|| {
        let e = handle(field)?.0;
        let chi = lib(parse_character(e, str_arg(spec)?))?;
        write_out(out, TpCharacter(chi))
    })
}

/// # Safety
/// `chi` must be a live character handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_character_conductor(
    chi: *const TpCharacter,
    out: *mut u32,
) -> TpStatus {
    guard(|| {
        let c = handle(chi)?.0.conductor();
        out.as_mut().map(|o| *o = c).ok_or_else(null)
    })
}

/// # Safety
/// `h` must be null or a handle from `tp_character_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_character_free(h: *mut TpCharacter) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Builds the representation compactly induced from `theta`.
///
/// # Safety
/// `theta` must be a live character handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_representation_new(
    theta: *const TpCharacter,
    out: *mut *mut TpRepresentation,
) -> TpStatus {
    guard(|| {
        let data = lib(SupercuspidalData::classify(&handle(theta)?.0))?;
        write_out(out, TpRepresentation(data))
    })
}

/// Conductor exponent `c(π)`.
///
/// # Safety
/// `rep` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_representation_conductor(
    rep: *const TpRepresentation,
    out: *mut u32,
) -> TpStatus {
    guard(|| {
        let c = handle(rep)?.0.c_pi;
        out.as_mut().map(|o| *o = c).ok_or_else(null)
    })
}

/// # Safety
/// `h` must be null or a handle from `tp_representation_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_representation_free(h: *mut TpRepresentation) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `{φ₁, φ₂}` for test vectors written `u,v;u,v;...`. `vector2` may be null
/// to pair `φ₁` with itself. `cyclo_cap = 0` selects the default cap.
///
/// # Safety
/// Handles must be live, strings NUL-terminated (or null for `vector2`), and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_period_integral(
    rep: *const TpRepresentation,
    chi: *const TpCharacter,
    vector1: *const c_char,
    vector2: *const c_char,
    max_refine: u32,
    cyclo_cap: u64,
    out: *mut *mut TpValue,
) -> TpStatus {
    guard(|| {
        let data = &handle(rep)?.0;
        let chi = &handle(chi)?.0;
        let f = data.l.base();
        let phi1 = lib(parse_test_vector(f, str_arg(vector1)?))?;
        let phi2 = if vector2.is_null() {
            phi1.clone()
        } else {
            lib(parse_test_vector(f, str_arg(vector2)?))?
        };
        let opts = IntegralOptions {
            max_refine,
            order_cap: if cyclo_cap == 0 {
                DEFAULT_ORDER_CAP
            } else {
                cyclo_cap
            },
            keep_trace: false,
        };
        let emb = EmbeddingSpec::standard(chi.field());
        let r = lib(period_integral(data, chi, &phi1, &phi2, &emb, &opts))?;
        write_out(
            out,
            TpValue {
                value: r.value,
                certificate: r.certificate,
            },
        )
    })
}

/// Floating-point approximation (advisory).
///
/// # Safety
/// `v` must be a live value handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_value_approx(
    v: *const TpValue,
    re: *mut f64,
    im: *mut f64,
) -> TpStatus {
    guard(|| {
        let (a, b) = handle(v)?.value.approx();
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        *re = a;
        *im = b;
        Ok(())
    })
}

/// The refinement level `m` and whether levels `m`, `m+1` agreed.
///
/// # Safety
/// `v` must be a live value handle; `m` and `equal` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_value_certificate(
    v: *const TpValue,
    m: *mut u32,
    equal: *mut bool,
) -> TpStatus {
    guard(|| {
        let c = handle(v)?.certificate;
        if m.is_null() || equal.is_null() {
            return Err(null());
        }
        *m = c.m;
        *equal = c.m_plus_one_equal;
        Ok(())
    })
}

/// Exact value as JSON `{"order": n, "coeffs": [...]}`; free with
/// `tp_string_free`.
///
/// # Safety
/// `v` must be a live value handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_value_to_json(v: *const TpValue, out: *mut *mut c_char) -> TpStatus {
    guard(|| {
        let json = serde_json::to_string(&handle(v)?.value)
            .map_err(|e| (TpStatus::Internal, e.to_string()))?;
        if out.is_null() {
            return Err(null());
        }
        *out = CString::new(json)
            .map_err(|e| (TpStatus::Internal, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// The value as a fraction of 64-bit integers, if it is rational and fits.
///
/// # Safety
/// `v` must be a live value handle; `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn tp_value_rational(
    v: *const TpValue,
    num: *mut i64,
    den: *mut i64,
) -> TpStatus {
    guard(|| {
        let r = handle(v)?
            .value
            .as_rational()
            .ok_or((TpStatus::NotRational, "value is not rational".into()))?;
        let fits = |x: &num_bigint::BigInt| i64::try_from(x).ok();
        let (n, d) = fits(r.numer())
            .zip(fits(r.denom()))
            .ok_or((TpStatus::Budget, "rational does not fit in 64 bits".into()))?;
        if num.is_null() || den.is_null() {
            return Err(null());
        }
        *num = n;
        *den = d;
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a value handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_value_free(h: *mut TpValue) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `β⁰₃` for `x³ + y³ = p`, `p ≡ 4, 7 mod 9`, as `num/den`.
///
/// # Safety
/// `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_sylvester_beta(
    p: u64,
    precision: u32,
    num: *mut i64,
    den: *mut i64,
) -> TpStatus {
    guard(|| {
        let k = if precision == 0 { 14 } else { precision };
        let r = lib(beta3_newform(p, k, &IntegralOptions::default()))?;
        if num.is_null() || den.is_null() {
            return Err(null());
        }
        let conv = |x: &num_bigint::BigInt| {
            i64::try_from(x).map_err(|e| (TpStatus::Budget, e.to_string()))
        };
        *num = conv(r.beta.numer())?;
        *den = conv(r.beta.denom())?;
        Ok(())
    })
}
