//! C ABI over the audited lambda calculus library: opaque term handles,
//! integer status codes, and malloc-style ownership for strings. The header
//! in `include/cau.h` mirrors the declarations below.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use cau::machine;
use cau::naive;
use cau::rewrite::{self, RewriteError, SIGMA, SIGMA_TAU, TAU};
use cau::sigma;
use cau::surface;
use cau::syntax::Term;

/// Opaque handle to a term.
pub struct CauTerm(Term);

pub const CAU_OK: i32 = 0;
pub const CAU_ERR_PARSE: i32 = 1;
pub const CAU_ERR_FUEL: i32 = 2;
pub const CAU_ERR_STUCK: i32 = 3;
pub const CAU_ERR_BAD_ARGUMENT: i32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Message describing the most recent failure on this thread, or null.
/// The string is owned by the library and valid until the next failing call.
#[no_mangle]
pub extern "C" fn cau_last_error() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to a term handle slot.
#[no_mangle]
pub unsafe extern "C" fn cau_parse(text: *const c_char, out: *mut *mut CauTerm) -> i32 {
    if text.is_null() || out.is_null() {
        set_error("null argument".into());
        return CAU_ERR_BAD_ARGUMENT;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("input is not UTF-8".into());
        return CAU_ERR_BAD_ARGUMENT;
    };
    match surface::parse_term(text) {
        Ok(t) => {
            *out = Box::into_raw(Box::new(CauTerm(t)));
            CAU_OK
        }
        Err(e) => {
            set_error(e.to_string());
            CAU_ERR_PARSE
        }
    }
}

/// Surface-syntax rendering of a term. Free the result with
/// `cau_string_free`. Returns null on a null handle.
///
/// # Safety
/// `t` must be a handle returned by this library (or null).
#[no_mangle]
pub unsafe extern "C" fn cau_print(t: *const CauTerm) -> *mut c_char {
    let Some(t) = t.as_ref() else {
        return std::ptr::null_mut();
    };
    let rendered = t.0.to_string();
    CString::new(rendered)
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

fn rules_of(name: &str) -> Option<rewrite::Rules> {
    match name {
        "tau" => Some(TAU),
        "sigma" => Some(SIGMA),
        "sigmatau" => Some(SIGMA_TAU),
        _ => None,
    }
}

/// Normalize under "tau", "sigma", or "sigmatau".
///
/// # Safety
/// `t` must be a live handle, `rules` a valid string, `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn cau_normalize(
    t: *const CauTerm,
    rules: *const c_char,
    out: *mut *mut CauTerm,
) -> i32 {
    if t.is_null() || rules.is_null() || out.is_null() {
        set_error("null argument".into());
        return CAU_ERR_BAD_ARGUMENT;
    }
    let Ok(rules) = CStr::from_ptr(rules).to_str() else {
        set_error("rule set name is not UTF-8".into());
        return CAU_ERR_BAD_ARGUMENT;
    };
    let Some(rules) = rules_of(rules) else {
        set_error(format!("unknown rule set {rules:?}"));
        return CAU_ERR_BAD_ARGUMENT;
    };
    match rewrite::normalize_term(&(*t).0, rules, rewrite::default_fuel()) {
        Ok(n) => {
            *out = Box::into_raw(Box::new(CauTerm(n)));
            CAU_OK
        }
        Err(RewriteError::FuelExhausted(f)) => {
            set_error(format!("no normal form within {f} rewrite steps"));
            CAU_ERR_FUEL
        }
    }
}

fn reduce_naive(t: &Term, fuel: u64) -> Result<Term, i32> {
    let mut cur = naive::tau_normalize(t).map_err(|e| {
        set_error(e.to_string());
        CAU_ERR_FUEL
    })?;
    for _ in 0..fuel {
        match naive::cau_step(&cur) {
            Ok(Some(next)) => cur = next,
            Ok(None) => return Ok(cur),
            Err(e) => {
                set_error(e.to_string());
                return Err(CAU_ERR_STUCK);
            }
        }
    }
    set_error(format!("step budget of {fuel} exhausted"));
    Err(CAU_ERR_FUEL)
}

fn reduce_sigma(t: &Term, fuel: u64) -> Result<Term, i32> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        let redexes = sigma::beta_sigma_redexes(&cur);
        let Some((path, _)) = redexes.first() else {
            return Ok(cur);
        };
        match sigma::beta_sigma_contract(&cur, path) {
            Ok(next) => cur = next,
            Err(e) => {
                set_error(e.to_string());
                return Err(CAU_ERR_STUCK);
            }
        }
    }
    set_error(format!("step budget of {fuel} exhausted"));
    Err(CAU_ERR_FUEL)
}

fn reduce_machine(t: &Term, fuel: u64) -> Result<Term, i32> {
    let c0 = machine::inject(t).map_err(|e| {
        set_error(e.to_string());
        CAU_ERR_BAD_ARGUMENT
    })?;
    let (outcome, _) = machine::run(&c0, fuel).map_err(|e| {
        set_error(e.to_string());
        CAU_ERR_FUEL
    })?;
    match outcome {
        machine::RunOutcome::Final(v) => {
            let denoted = machine::value_term(&v);
            Ok(sigma::sigmatau_normalize(&denoted).unwrap_or(denoted))
        }
        machine::RunOutcome::Stuck(reason) => {
            set_error(format!("machine stuck: {reason}"));
            Err(CAU_ERR_STUCK)
        }
        machine::RunOutcome::FuelExhausted => {
            set_error(format!("step budget of {fuel} exhausted"));
            Err(CAU_ERR_FUEL)
        }
    }
}

/// Reduce with engine "naive", "sigma", or "machine". `max_steps` of zero
/// selects the engine default budget.
///
/// # Safety
/// `t` must be a live handle, `engine` a valid string, `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn cau_reduce(
    t: *const CauTerm,
    engine: *const c_char,
    max_steps: u64,
    out: *mut *mut CauTerm,
) -> i32 {
    if t.is_null() || engine.is_null() || out.is_null() {
        set_error("null argument".into());
        return CAU_ERR_BAD_ARGUMENT;
    }
    let Ok(engine) = CStr::from_ptr(engine).to_str() else {
        set_error("engine name is not UTF-8".into());
        return CAU_ERR_BAD_ARGUMENT;
    };
    let term = &(*t).0;
    let result = match engine {
        "naive" => {
            let fuel = if max_steps == 0 {
                rewrite::default_fuel()
            } else {
                max_steps
            };
            reduce_naive(term, fuel)
        }
        "sigma" => {
            let fuel = if max_steps == 0 {
                rewrite::default_fuel()
            } else {
                max_steps
            };
            reduce_sigma(term, fuel)
        }
        "machine" => {
            let fuel = if max_steps == 0 { 100_000 } else { max_steps };
            reduce_machine(term, fuel)
        }
        other => {
            set_error(format!("unknown engine {other:?}"));
            return CAU_ERR_BAD_ARGUMENT;
        }
    };
    match result {
        Ok(n) => {
            *out = Box::into_raw(Box::new(CauTerm(n)));
            CAU_OK
        }
        Err(code) => code,
    }
}

/// # Safety
/// `t` must be a handle returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cau_term_free(t: *mut CauTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `s` must be a string returned by `cau_print`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cau_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    unsafe fn parse_ok(text: &str) -> *mut CauTerm {
        let c = CString::new(text).unwrap();
        let mut out = std::ptr::null_mut();
        assert_eq!(cau_parse(c.as_ptr(), &mut out), CAU_OK);
        assert!(!out.is_null());
        out
    }

    unsafe fn print_owned(t: *const CauTerm) -> String {
        let s = cau_print(t);
        assert!(!s.is_null());
        let owned = CStr::from_ptr(s).to_str().unwrap().to_string();
        cau_string_free(s);
        owned
    }

    #[test]
    fn parse_print_roundtrip() {
        unsafe {
            let t = parse_ok("\\x. x x");
            assert_eq!(print_owned(t), "\\x1. x1 x1");
            cau_term_free(t);
        }
    }

    #[test]
    fn parse_error_sets_message() {
        unsafe {
            let c = CString::new("\\x.").unwrap();
            let mut out = std::ptr::null_mut();
            assert_eq!(cau_parse(c.as_ptr(), &mut out), CAU_ERR_PARSE);
            let msg = CStr::from_ptr(cau_last_error()).to_str().unwrap();
            assert!(!msg.is_empty());
        }
    }

    #[test]
    fn normalize_erasure() {
        unsafe {
            let t = parse_ok("erase(b |> \\x. x)");
            let rules = CString::new("sigmatau").unwrap();
            let mut out = std::ptr::null_mut();
            assert_eq!(cau_normalize(t, rules.as_ptr(), &mut out), CAU_OK);
            assert_eq!(print_owned(out), "\\x1. x1");
            cau_term_free(t);
            cau_term_free(out);
        }
    }

    #[test]
    fn reduce_engines_agree_on_identity_application() {
        unsafe {
            let t = parse_ok("(\\x. x) (\\y. y)");
            for engine in ["naive", "machine"] {
                let e = CString::new(engine).unwrap();
                let mut out = std::ptr::null_mut();
                assert_eq!(cau_reduce(t, e.as_ptr(), 0, &mut out), CAU_OK);
                assert_eq!(print_owned(out), "b |> \\x1. x1", "engine {engine}");
                cau_term_free(out);
            }
            cau_term_free(t);
        }
    }

    #[test]
    fn reduce_reports_fuel_exhaustion() {
        unsafe {
            let t = parse_ok("(\\x. x x) (\\x. x x)");
            let e = CString::new("machine").unwrap();
            let mut out = std::ptr::null_mut();
            assert_eq!(cau_reduce(t, e.as_ptr(), 50, &mut out), CAU_ERR_FUEL);
            cau_term_free(t);
        }
    }

    #[test]
    fn bad_arguments_are_rejected() {
        unsafe {
            let mut out = std::ptr::null_mut();
            assert_eq!(cau_parse(std::ptr::null(), &mut out), CAU_ERR_BAD_ARGUMENT);
            let t = parse_ok("\\x. x");
            let e = CString::new("warp").unwrap();
            assert_eq!(
                cau_reduce(t, e.as_ptr(), 0, &mut out),
                CAU_ERR_BAD_ARGUMENT
            );
            cau_term_free(t);
            assert!(cau_print(std::ptr::null()).is_null());
        }
    }
}
