//! C interface to `orbiconf`.
//!
//! Objects cross the boundary as opaque handles created by `*_parse` or
//! `*_from_*` functions and released with the matching `*_free`. Every
//! fallible call returns an [`OrbiconfStatus`]; on failure
//! [`orbiconf_last_error`] describes what went wrong on the calling thread.
//! Point indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbiconf::covering::verify_covering;
use orbiconf::goodbad::{good_search, GoodBadStatus, SearchOptions};
use orbiconf::incidence::from_mod_notation;
use orbiconf::io::{parse_configuration, parse_orbiconfiguration, write_orbiconfiguration};
use orbiconf::orbi::quotient;
use orbiconf::perm::automorphism_group_within;
use orbiconf::primality::{is_prime_general, is_prime_regular, PrimalityBudget, PrimeStatus};
use orbiconf::{Configuration, OrbiIncidenceStructure, Orbiconfiguration, PermutationGroup};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbiconfStatus {
    Ok = 0,
    /// Malformed text or a structure failing its axioms.
    InvalidInput = 1,
    /// A search budget ran out before an answer.
    Inconclusive = 2,
    NullPointer = 3,
    /// Text was not valid UTF-8.
    InvalidUtf8 = 4,
    /// A bug inside the library; the message has details.
    Panic = 5,
}

/// Answer of a decision procedure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbiconfVerdict {
    /// Prime, or good.
    Yes = 0,
    /// Not prime, or bad.
    No = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbiconfPrimeMethod {
    /// Quotients by semiregular subgroups only.
    Regular = 0,
    /// Every equal-fiber partition.
    General = 1,
}

/// Opaque configuration handle.
pub struct OrbiconfConfiguration(Configuration);

/// Opaque permutation group handle.
pub struct OrbiconfGroup(PermutationGroup);

/// Opaque orbi-incidence structure handle.
pub struct OrbiconfOrbi(OrbiIncidenceStructure);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (OrbiconfStatus, String)>) -> OrbiconfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrbiconfStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OrbiconfStatus::Panic
        }
    }
}

fn invalid(e: impl ToString) -> (OrbiconfStatus, String) {
    (OrbiconfStatus::InvalidInput, e.to_string())
}

fn null(what: &str) -> (OrbiconfStatus, String) {
    (OrbiconfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (OrbiconfStatus, String)> {
    if p.is_null() {
        return Err(null("text"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (OrbiconfStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (OrbiconfStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), (OrbiconfStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn orbiconf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a configuration file's text and checks the axioms.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_configuration_parse(
    text_ptr: *const c_char,
    out: *mut *mut OrbiconfConfiguration,
) -> OrbiconfStatus {
    guard(|| {
        let f = parse_configuration(text(text_ptr)?).map_err(invalid)?;
        let c = Configuration::new(f.structure).map_err(invalid)?;
        store(out, OrbiconfConfiguration(c))
    })
}

/// The configuration with lines `base mod modulus`; residues are 1-based.
///
/// # Safety
/// `base` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_configuration_from_mod(
    base: *const usize,
    len: usize,
    modulus: usize,
    out: *mut *mut OrbiconfConfiguration,
) -> OrbiconfStatus {
    guard(|| {
        if base.is_null() {
            return Err(null("base"));
        }
        let residues = std::slice::from_raw_parts(base, len);
        let e = from_mod_notation(residues, modulus).map_err(invalid)?;
        let c = Configuration::new(e.structure).map_err(invalid)?;
        store(out, OrbiconfConfiguration(c))
    })
}

/// # Safety
/// `c` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_configuration_free(c: *mut OrbiconfConfiguration) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Writes `n`, `m`, `s`, `t`.
///
/// # Safety
/// `c` must be a live handle; the four outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_configuration_params(
    c: *const OrbiconfConfiguration,
    n: *mut usize,
    m: *mut usize,
    s: *mut usize,
    t: *mut usize,
) -> OrbiconfStatus {
    guard(|| {
        let c = handle(c, "configuration")?;
        if n.is_null() || m.is_null() || s.is_null() || t.is_null() {
            return Err(null("output pointer"));
        }
        let p = c.0.params();
        (*n, *m, *s, *t) = (p.n, p.m, p.s, p.t);
        Ok(())
    })
}

/// Automorphism group, giving up after `node_budget` search nodes.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_automorphism_group(
    c: *const OrbiconfConfiguration,
    node_budget: u64,
    out: *mut *mut OrbiconfGroup,
) -> OrbiconfStatus {
    guard(|| {
        let c = handle(c, "configuration")?;
        let g = automorphism_group_within(&c.0, node_budget)
            .map_err(|e| (OrbiconfStatus::Inconclusive, e.to_string()))?;
        store(out, OrbiconfGroup(g))
    })
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_group_order(g: *const OrbiconfGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_group_is_cyclic(g: *const OrbiconfGroup) -> bool {
    g.as_ref().is_some_and(|g| g.0.is_cyclic())
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_group_free(g: *mut OrbiconfGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Checks a point map (`map[i]` is the image of cover point `i`) and
/// writes the covering degree.
///
/// # Safety
/// Handles must be live, `map` must hold `len` values, `degree` writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_verify_covering(
    cover: *const OrbiconfConfiguration,
    base: *const OrbiconfConfiguration,
    map: *const usize,
    len: usize,
    degree: *mut usize,
) -> OrbiconfStatus {
    guard(|| {
        let cover = handle(cover, "cover")?;
        let base = handle(base, "base")?;
        if map.is_null() {
            return Err(null("map"));
        }
        if degree.is_null() {
            return Err(null("degree"));
        }
        let map = std::slice::from_raw_parts(map, len).to_vec();
        let cm = verify_covering(&cover.0, &base.0, map).map_err(invalid)?;
        *degree = cm.degree();
        Ok(())
    })
}

/// Primality: `Yes` prime, `No` covers a smaller configuration, `Unknown`
/// when the budget ran out (the status is then `Inconclusive`). The regular
/// method only considers quotients by semiregular groups.
///
/// # Safety
/// `c` must be a live handle and `verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_is_prime(
    c: *const OrbiconfConfiguration,
    method: OrbiconfPrimeMethod,
    node_budget: u64,
    verdict: *mut OrbiconfVerdict,
) -> OrbiconfStatus {
    guard(|| {
        let c = handle(c, "configuration")?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let v = match method {
            OrbiconfPrimeMethod::Regular => is_prime_regular(
                &c.0,
                PrimalityBudget {
                    nodes: node_budget,
                    ..PrimalityBudget::default()
                },
            ),
            OrbiconfPrimeMethod::General => is_prime_general(&c.0, node_budget),
        };
        *verdict = match v.status {
            PrimeStatus::Prime => OrbiconfVerdict::Yes,
            PrimeStatus::NotPrime => OrbiconfVerdict::No,
            PrimeStatus::Inconclusive => {
                *verdict = OrbiconfVerdict::Unknown;
                return Err((OrbiconfStatus::Inconclusive, format!("budget exceeded ({})", v.reason)));
            }
        };
        Ok(())
    })
}

/// Parses an orbiconfiguration file's text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_orbi_parse(text_ptr: *const c_char, out: *mut *mut OrbiconfOrbi) -> OrbiconfStatus {
    guard(|| {
        let f = parse_orbiconfiguration(text(text_ptr)?).map_err(invalid)?;
        store(out, OrbiconfOrbi(f.structure))
    })
}

/// Orbit space of `c` under `g`.
///
/// # Safety
/// Handles must be live, `g` a group on `c`, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_quotient(
    c: *const OrbiconfConfiguration,
    g: *const OrbiconfGroup,
    out: *mut *mut OrbiconfOrbi,
) -> OrbiconfStatus {
    guard(|| {
        let c = handle(c, "configuration")?;
        let g = handle(g, "group")?;
        if !g.0.acts_on(&c.0) {
            return Err(invalid("group does not act on the configuration"));
        }
        store(out, OrbiconfOrbi(quotient(&c.0, &g.0).structure))
    })
}

/// `n` and `m` as reduced fractions.
///
/// # Safety
/// `o` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_orbi_counts(
    o: *const OrbiconfOrbi,
    n_num: *mut i64,
    n_den: *mut i64,
    m_num: *mut i64,
    m_den: *mut i64,
) -> OrbiconfStatus {
    guard(|| {
        let o = handle(o, "orbiconfiguration")?;
        if n_num.is_null() || n_den.is_null() || m_num.is_null() || m_den.is_null() {
            return Err(null("output pointer"));
        }
        let p = o.0.params();
        (*n_num, *n_den, *m_num, *m_den) = (*p.n.numer(), *p.n.denom(), *p.m.numer(), *p.m.denom());
        Ok(())
    })
}

/// Canonical text form; release with [`orbiconf_string_free`].
///
/// # Safety
/// `o` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_orbi_to_string(
    o: *const OrbiconfOrbi,
    name: *const c_char,
    out: *mut *mut c_char,
) -> OrbiconfStatus {
    guard(|| {
        let o = handle(o, "orbiconfiguration")?;
        let name = text(name)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let s = CString::new(write_orbiconfiguration(name, &o.0)).map_err(invalid)?;
        *out = s.into_raw();
        Ok(())
    })
}

/// Good (`Yes`), bad (`No`) or unknown within `max_degree`.
///
/// # Safety
/// `o` must be a live handle and `verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_goodbad(
    o: *const OrbiconfOrbi,
    max_degree: usize,
    verdict: *mut OrbiconfVerdict,
) -> OrbiconfStatus {
    guard(|| {
        let o = handle(o, "orbiconfiguration")?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let oc = Orbiconfiguration::new(o.0.clone()).map_err(invalid)?;
        let opts = SearchOptions {
            max_degree,
            ..SearchOptions::default()
        };
        *verdict = match good_search(&oc, &opts).status {
            GoodBadStatus::Good => OrbiconfVerdict::Yes,
            GoodBadStatus::Bad => OrbiconfVerdict::No,
            GoodBadStatus::Inconclusive => {
                *verdict = OrbiconfVerdict::Unknown;
                return Err((OrbiconfStatus::Inconclusive, format!("no cover up to degree {max_degree}")));
            }
        };
        Ok(())
    })
}

/// # Safety
/// `o` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_orbi_free(o: *mut OrbiconfOrbi) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orbiconf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
