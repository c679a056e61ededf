//! C ABI for embedding pun: load a program from source, run its properties,
//! and evaluate argument-free definitions. Programs are opaque handles;
//! every call reports a status code, and all returned strings are owned by
//! the caller until passed to [`pun_string_free`].
//!
//! The matching header lives at `include/pun.h`; rebuild it with
//! `cargo build -p pun-ffi --features generate-header`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pun::eval::{eval, Fuel};
use pun::parser::parse_program;
use pun::runner::{check_all, render_outcome, RunConfig};
use pun::typecheck::{check_program, TypedProgram};

/// Status of a C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PunStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The source text was not valid UTF-8.
    InvalidUtf8 = 2,
    ParseError = 3,
    TypeError = 4,
    EvalError = 5,
    /// No argument-free definition with the requested name.
    NotFound = 6,
    /// An internal invariant failed; the library state is unchanged.
    Internal = 7,
}

/// A parsed and typechecked pun program (opaque).
pub struct PunProgram {
    typed: TypedProgram,
}

/// Property-run settings; get defaults from [`pun_run_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PunRunConfig {
    /// Random tests per property.
    pub tests: u32,
    /// Generation seed; equal seeds give byte-identical reports.
    pub seed: u64,
    /// Largest generation size.
    pub max_size: u32,
    /// Evaluation step budget per test.
    pub fuel: u64,
}

impl From<PunRunConfig> for RunConfig {
    fn from(cfg: PunRunConfig) -> RunConfig {
        RunConfig {
            tests: cfg.tests,
            seed: cfg.seed,
            max_size: cfg.max_size,
            fuel: cfg.fuel,
        }
    }
}

fn into_c_string(s: String) -> *mut c_char {
    // Interior NULs cannot appear: report text and pun source are NUL-free.
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

unsafe fn write_out(out: *mut *mut c_char, value: String) {
    if !out.is_null() {
        *out = into_c_string(value);
    }
}

/// The default run configuration: 50 tests, seed 0, max size 10, fuel
/// 100000.
#[no_mangle]
pub extern "C" fn pun_run_config_default() -> PunRunConfig {
    let cfg = RunConfig::default();
    PunRunConfig {
        tests: cfg.tests,
        seed: cfg.seed,
        max_size: cfg.max_size,
        fuel: cfg.fuel,
    }
}

/// Parse and typecheck `source` (NUL-terminated pun text). On success,
/// writes a program handle to `out_program`. On failure, writes a rendered
/// diagnostic to `out_error` (when non-null); free it with
/// [`pun_string_free`].
///
/// # Safety
/// `source` must point to a NUL-terminated string. `out_program` must be a
/// valid pointer. `out_error` may be null.
#[no_mangle]
pub unsafe extern "C" fn pun_program_new(
    source: *const c_char,
    out_program: *mut *mut PunProgram,
    out_error: *mut *mut c_char,
) -> PunStatus {
    if source.is_null() || out_program.is_null() {
        return PunStatus::NullArgument;
    }
    *out_program = ptr::null_mut();
    let bytes = CStr::from_ptr(source);
    let Ok(text) = bytes.to_str() else {
        return PunStatus::InvalidUtf8;
    };
    let result = catch_unwind(|| {
        let program = match parse_program(text) {
            Ok(p) => p,
            Err(e) => return Err((PunStatus::ParseError, e.to_string())),
        };
        match check_program(&program) {
            Ok(typed) => Ok(PunProgram { typed }),
            Err(e) => Err((PunStatus::TypeError, e.to_string())),
        }
    });
    match result {
        Ok(Ok(program)) => {
            *out_program = Box::into_raw(Box::new(program));
            PunStatus::Ok
        }
        Ok(Err((status, message))) => {
            write_out(out_error, message);
            status
        }
        Err(_) => PunStatus::Internal,
    }
}

/// Release a program handle. Null is a no-op.
///
/// # Safety
/// `program` must have come from [`pun_program_new`] and not been freed.
#[no_mangle]
pub unsafe extern "C" fn pun_program_free(program: *mut PunProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// Number of properties declared in the program.
///
/// # Safety
/// `program` must be a live handle from [`pun_program_new`].
#[no_mangle]
pub unsafe extern "C" fn pun_program_property_count(program: *const PunProgram) -> u32 {
    if program.is_null() {
        return 0;
    }
    (*program).typed.properties.len() as u32
}

/// Run every property. Writes the full report (one block per property,
/// newline-terminated) to `out_report` and the number of properties that
/// did not pass to `out_failures`. A failing property still returns
/// `PUN_STATUS_OK`; inspect `out_failures`.
///
/// # Safety
/// `program` must be a live handle; `config` must point to a valid
/// configuration. `out_report` and `out_failures` may be null.
#[no_mangle]
pub unsafe extern "C" fn pun_program_check(
    program: *const PunProgram,
    config: *const PunRunConfig,
    out_report: *mut *mut c_char,
    out_failures: *mut u32,
) -> PunStatus {
    if program.is_null() || config.is_null() {
        return PunStatus::NullArgument;
    }
    let typed = &(*program).typed;
    let cfg = RunConfig::from(*config);
    let result = catch_unwind(AssertUnwindSafe(|| {
        let outcomes = check_all(typed, &cfg);
        let failures = outcomes.iter().filter(|(_, o)| !o.passed()).count() as u32;
        let mut report = String::new();
        for (name, outcome) in &outcomes {
            report.push_str(&render_outcome(name, outcome));
            report.push('\n');
        }
        (report, failures)
    }));
    match result {
        Ok((report, failures)) => {
            write_out(out_report, report);
            if !out_failures.is_null() {
                *out_failures = failures;
            }
            PunStatus::Ok
        }
        Err(_) => PunStatus::Internal,
    }
}

/// Evaluate the argument-free definition `name` and write its printed
/// value to `out_value`. Evaluation failures (for instance out of fuel)
/// write the diagnostic to `out_error` and return `PUN_STATUS_EVAL_ERROR`.
///
/// # Safety
/// `program` must be a live handle; `name` must be NUL-terminated.
/// `out_value` and `out_error` may be null.
#[no_mangle]
pub unsafe extern "C" fn pun_program_eval(
    program: *const PunProgram,
    name: *const c_char,
    fuel: u64,
    out_value: *mut *mut c_char,
    out_error: *mut *mut c_char,
) -> PunStatus {
    if program.is_null() || name.is_null() {
        return PunStatus::NullArgument;
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return PunStatus::InvalidUtf8;
    };
    let typed = &(*program).typed;
    let is_nullary = typed.program.declarations.iter().any(|d| {
        matches!(d, pun::ast::Declaration::Definition { name: n, params, .. }
                 if n == name && params.is_empty())
    });
    if !is_nullary {
        return PunStatus::NotFound;
    }
    let term = typed.definition(name).expect("definition exists").clone();
    let result = catch_unwind(|| eval(&term, &mut Fuel::new(fuel)));
    match result {
        Ok(Ok(value)) => {
            write_out(out_value, value.to_string());
            PunStatus::Ok
        }
        Ok(Err(e)) => {
            write_out(out_error, e.to_string());
            PunStatus::EvalError
        }
        Err(_) => PunStatus::Internal,
    }
}

/// Free a string returned by this library. Null is a no-op.
///
/// # Safety
/// `string` must have been returned by a `pun_*` call and not been freed.
#[no_mangle]
pub unsafe extern "C" fn pun_string_free(string: *mut c_char) {
    if !string.is_null() {
        drop(CString::from_raw(string));
    }
}
