//! C ABI for the `sugeno` crate.
//!
//! Capacities, tables and epimorphisms cross the boundary as opaque handles
//! created from JSON documents and released with the matching `*_free`
//! function. Every fallible call returns a [`SugenoStatus`]; on
//! `SUGENO_STATUS_INPUT_ERROR` and worse, [`sugeno_last_error`] describes
//! the failure. Strings returned through out-parameters are owned by the
//! caller and released with [`sugeno_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, c_int, size_t};
use serde_json::json;
use sugeno::congruence::{verify_proposition1, verify_theorem1};
use sugeno::json::{
    capacity_from_json, capacity_to_json, epimorphism_from_json, epimorphism_to_json, table_from_json, table_to_json,
    vector_strings, CapacityJson, CounterexampleJson,
};
use sugeno::{
    check_property, map_through, pushforward_capacity, recognize_sugeno, sugeno_table, verify_theorem2,
    AggregationTable, Capacity, Chain, Counterexample, Epimorphism, Formula, Property, ScoreVector,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SugenoStatus {
    /// The value was computed or the property holds.
    Ok = 0,
    /// The property is violated; a witness is available.
    Violated = 1,
    /// Malformed input, mismatched chains or arity, or an exceeded cap.
    InputError = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
    /// An internal error; the library state is still usable.
    Panic = 5,
}

/// Values accepted by the `formula` argument of [`sugeno_eval`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SugenoFormula {
    Level = 0,
    Subset = 1,
    Sorted = 2,
}

pub struct SugenoCapacity {
    inner: Capacity,
}

pub struct SugenoTable {
    inner: AggregationTable,
}

pub struct SugenoEpimorphism {
    inner: Epimorphism,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: SugenoStatus,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            status: SugenoStatus::InputError,
            message: message.to_string(),
        }
    }

    fn null(name: &str) -> Self {
        Failure {
            status: SugenoStatus::NullPointer,
            message: format!("{name} is null"),
        }
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F>(f: F) -> SugenoStatus
where
    F: FnOnce() -> Result<SugenoStatus, Failure>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(failure)) => {
            set_error(&failure.message);
            failure.status
        }
        Err(_) => {
            set_error("internal error");
            SugenoStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure {
        status: SugenoStatus::InvalidUtf8,
        message: format!("{name} is not valid UTF-8"),
    })
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(name))
}

unsafe fn put<T>(out: *mut *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null(name));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null(name));
    }
    *out = CString::new(s).map_err(Failure::input)?.into_raw();
    Ok(())
}

/// Writes `s` when `out` is non-null; optional outputs may be null.
unsafe fn put_optional_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Ok(());
    }
    put_string(out, s, "")
}

fn witness_json(cx: &Counterexample) -> String {
    serde_json::to_string_pretty(&CounterexampleJson::from(cx)).expect("plain data serializes")
}

unsafe fn drop_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The message of the last failed call on this thread, or null.
///
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn sugeno_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sugeno_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a capacity document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_capacity_from_json(json: *const c_char, out: *mut *mut SugenoCapacity) -> SugenoStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inner = capacity_from_json(text).map_err(Failure::input)?;
        put(out, SugenoCapacity { inner }, "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// # Safety
/// `capacity` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_capacity_to_json(
    capacity: *const SugenoCapacity,
    out: *mut *mut c_char,
) -> SugenoStatus {
    guard(|| {
        let c = handle(capacity, "capacity")?;
        put_string(out, capacity_to_json(&c.inner), "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// Number of criteria, or 0 for a null handle.
///
/// # Safety
/// `capacity` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sugeno_capacity_arity(capacity: *const SugenoCapacity) -> size_t {
    capacity.as_ref().map_or(0, |c| c.inner.n())
}

/// # Safety
/// `capacity` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sugeno_capacity_free(capacity: *mut SugenoCapacity) {
    drop_handle(capacity);
}

/// Evaluates the integral of a comma-separated input vector; the value is
/// written in shortest exact form.
///
/// # Safety
/// `capacity` must be a live handle, `input` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_eval(
    capacity: *const SugenoCapacity,
    input: *const c_char,
    formula: c_int,
    out: *mut *mut c_char,
) -> SugenoStatus {
    guard(|| {
        let c = handle(capacity, "capacity")?;
        let x = ScoreVector::parse(c.inner.chain(), str_arg(input, "input")?).map_err(Failure::input)?;
        let formula = match formula {
            0 => Formula::Level,
            1 => Formula::Subset,
            2 => Formula::Sorted,
            other => return Err(Failure::input(format!("unknown formula {other}"))),
        };
        let v = sugeno::sugeno_eval(&c.inner, &x, formula).map_err(Failure::input)?;
        put_string(out, v.to_string(), "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// Materializes the table of a capacity on a finite chain.
///
/// # Safety
/// `capacity` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_table_from_capacity(
    capacity: *const SugenoCapacity,
    out: *mut *mut SugenoTable,
) -> SugenoStatus {
    guard(|| {
        let c = handle(capacity, "capacity")?;
        let Chain::Finite(chain) = c.inner.chain() else {
            return Err(Failure::input("a table needs a capacity on a finite chain"));
        };
        let inner = sugeno_table(&c.inner, chain, sugeno::table::DEFAULT_TABLE_GRID).map_err(Failure::input)?;
        put(out, SugenoTable { inner }, "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// Parses a table document; non-monotone tables are input errors.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_table_from_json(json: *const c_char, out: *mut *mut SugenoTable) -> SugenoStatus {
    guard(|| {
        let inner = table_from_json(str_arg(json, "json")?).map_err(Failure::input)?;
        put(out, SugenoTable { inner }, "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// # Safety
/// `table` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_table_to_json(table: *const SugenoTable, out: *mut *mut c_char) -> SugenoStatus {
    guard(|| {
        let t = handle(table, "table")?;
        put_string(out, table_to_json(&t.inner), "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// # Safety
/// `table` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sugeno_table_free(table: *mut SugenoTable) {
    drop_handle(table);
}

/// Recognizes a Sugeno integral. Returns `SUGENO_STATUS_OK` and the
/// capacity, or `SUGENO_STATUS_VIOLATED` and a witness document.
///
/// # Safety
/// `table` must be a live handle and `out_capacity` a valid pointer;
/// `out_witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn sugeno_recognize(
    table: *const SugenoTable,
    out_capacity: *mut *mut SugenoCapacity,
    out_witness: *mut *mut c_char,
) -> SugenoStatus {
    guard(|| {
        let t = handle(table, "table")?;
        if out_capacity.is_null() {
            return Err(Failure::null("out_capacity"));
        }
        match recognize_sugeno(&t.inner) {
            Ok(inner) => {
                put(out_capacity, SugenoCapacity { inner }, "out_capacity")?;
                Ok(SugenoStatus::Ok)
            }
            Err(cx) => {
                *out_capacity = ptr::null_mut();
                put_optional_string(out_witness, witness_json(&cx))?;
                Ok(SugenoStatus::Violated)
            }
        }
    })
}

/// Checks one property by name: `sugeno`, `idempotent`,
/// `comonotone-maxitive`, `min-homogeneous`, `median-decomposable`,
/// `compatible` or `scale-invariant`.
///
/// # Safety
/// `table` must be a live handle and `property` a NUL-terminated string;
/// `out_witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn sugeno_check(
    table: *const SugenoTable,
    property: *const c_char,
    out_witness: *mut *mut c_char,
) -> SugenoStatus {
    guard(|| {
        let t = handle(table, "table")?;
        let p: Property = str_arg(property, "property")?.parse().map_err(Failure::input)?;
        match check_property(&t.inner, p).map_err(Failure::input)? {
            Ok(()) => Ok(SugenoStatus::Ok),
            Err(cx) => {
                put_optional_string(out_witness, witness_json(&cx))?;
                Ok(SugenoStatus::Violated)
            }
        }
    })
}

/// A built-in epimorphism: `decimal-half-up`, `centesimal-half-up`,
/// `linguistic-bmge` or `identity` (on the unit interval).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_epimorphism_builtin(
    name: *const c_char,
    out: *mut *mut SugenoEpimorphism,
) -> SugenoStatus {
    guard(|| {
        let inner = Epimorphism::builtin(str_arg(name, "name")?).map_err(Failure::input)?;
        put(out, SugenoEpimorphism { inner }, "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_epimorphism_from_json(
    json: *const c_char,
    out: *mut *mut SugenoEpimorphism,
) -> SugenoStatus {
    guard(|| {
        let inner = epimorphism_from_json(str_arg(json, "json")?).map_err(Failure::input)?;
        put(out, SugenoEpimorphism { inner }, "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// # Safety
/// `epimorphism` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_epimorphism_to_json(
    epimorphism: *const SugenoEpimorphism,
    out: *mut *mut c_char,
) -> SugenoStatus {
    guard(|| {
        let e = handle(epimorphism, "epimorphism")?;
        put_string(out, epimorphism_to_json(&e.inner), "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// # Safety
/// `epimorphism` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sugeno_epimorphism_free(epimorphism: *mut SugenoEpimorphism) {
    drop_handle(epimorphism);
}

/// The capacity `φ(m)(I) = φ(m(I))` on the target chain.
///
/// # Safety
/// Both handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_pushforward(
    epimorphism: *const SugenoEpimorphism,
    capacity: *const SugenoCapacity,
    out: *mut *mut SugenoCapacity,
) -> SugenoStatus {
    guard(|| {
        let e = handle(epimorphism, "epimorphism")?;
        let c = handle(capacity, "capacity")?;
        let inner = pushforward_capacity(&e.inner, &c.inner).map_err(Failure::input)?;
        put(out, SugenoCapacity { inner }, "out")?;
        Ok(SugenoStatus::Ok)
    })
}

/// Compares `φ(Su_m(x))` with `Su_φ(m)(φ(x))` and writes both sides as a
/// JSON document. Returns `SUGENO_STATUS_VIOLATED` when they differ.
///
/// # Safety
/// Both handles must be live, `input` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_map(
    epimorphism: *const SugenoEpimorphism,
    capacity: *const SugenoCapacity,
    input: *const c_char,
    out: *mut *mut c_char,
) -> SugenoStatus {
    guard(|| {
        let e = handle(epimorphism, "epimorphism")?;
        let c = handle(capacity, "capacity")?;
        let x = ScoreVector::parse(c.inner.chain(), str_arg(input, "input")?).map_err(Failure::input)?;
        let r = map_through(&e.inner, &c.inner, &x).map_err(Failure::input)?;
        let doc = json!({
            "input": vector_strings(&r.input),
            "value": r.source_value.to_string(),
            "mapped_input": vector_strings(&r.mapped_input),
            "pushed_capacity": CapacityJson::from(&r.pushed),
            "pushed_value": r.pushed_value.to_string(),
            "mapped_value": r.mapped_value.to_string(),
            "holds": r.holds(),
        });
        put_string(
            out,
            serde_json::to_string_pretty(&doc).expect("plain data serializes"),
            "out",
        )?;
        Ok(if r.holds() {
            SugenoStatus::Ok
        } else {
            SugenoStatus::Violated
        })
    })
}

/// Exhaustive verification on the `chain_size`-chain: `theorem1`
/// (compatible tables are Sugeno tables), `theorem2` (scale invariance) or
/// `prop1` (congruences are interval partitions; `arity` is ignored).
/// `max_grid` caps the grid of enumerated tables. The report is written as
/// JSON; `SUGENO_STATUS_VIOLATED` means the statement failed on the instance.
///
/// # Safety
/// `which` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sugeno_verify(
    which: *const c_char,
    chain_size: size_t,
    arity: size_t,
    max_grid: size_t,
    out: *mut *mut c_char,
) -> SugenoStatus {
    guard(|| {
        let which = str_arg(which, "which")?;
        let chain = sugeno::FiniteChain::numbered(chain_size).map_err(Failure::input)?;
        let (holds, doc) = match which {
            "theorem1" => {
                let r = verify_theorem1(arity, &chain, max_grid).map_err(Failure::input)?;
                (r.holds(), serde_json::to_string_pretty(&r))
            }
            "theorem2" => {
                let r = verify_theorem2(arity, &chain, max_grid).map_err(Failure::input)?;
                (r.holds(), serde_json::to_string_pretty(&r))
            }
            "prop1" => {
                let r = verify_proposition1(&chain).map_err(Failure::input)?;
                (r.holds(), serde_json::to_string_pretty(&r))
            }
            other => return Err(Failure::input(format!("unknown statement {other:?}"))),
        };
        put_string(out, doc.expect("plain data serializes"), "out")?;
        Ok(if holds {
            SugenoStatus::Ok
        } else {
            SugenoStatus::Violated
        })
    })
}
