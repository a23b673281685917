//! C ABI over the `wiretap` crate.
//!
//! Graphs and analyses are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`WtStatus`]; on failure
//! [`wt_last_error`] describes the error. Strings handed out are owned by the
//! caller and released with [`wt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wiretap::cli::parse_distribution;
use wiretap::rational;
use wiretap::report::Pipeline;
use wiretap::strategy::{is_maxmin, is_pdist};
use wiretap::strength::{strength_opt, WeightMap};
use wiretap::{analyze, min_csg, parse_graph, AnalysisReport, Error, Graph, Oracle};

/// Status codes; the nonzero values match the command-line exit codes where
/// both exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WtStatus {
    Ok = 0,
    Parse = 1,
    Disconnected = 2,
    AssumptionViolated = 3,
    CapExceeded = 4,
    VerifyMismatch = 5,
    NullPointer = 6,
    InvalidArgument = 7,
    Panic = 8,
}

/// Opaque graph handle.
pub struct WtGraph {
    graph: Graph,
}

/// Opaque analysis handle.
pub struct WtAnalysis {
    report: AnalysisReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_of(err: &Error) -> WtStatus {
    match err {
        Error::Disconnected => WtStatus::Disconnected,
        Error::AssumptionViolated(_) => WtStatus::AssumptionViolated,
        Error::CapExceeded { .. } => WtStatus::CapExceeded,
        Error::Parse { .. } | Error::SelfLoop { .. } | Error::EmptyGraph => WtStatus::Parse,
        _ => WtStatus::InvalidArgument,
    }
}

fn fail(status: WtStatus, message: &str) -> WtStatus {
    set_error(message);
    status
}

fn guard(body: impl FnOnce() -> WtStatus) -> WtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(WtStatus::Panic, "internal panic"),
    }
}

fn from_error(err: Error) -> WtStatus {
    fail(status_of(&err), &err.to_string())
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, WtStatus> {
    if text.is_null() {
        return Err(fail(WtStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| fail(WtStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, value: String) -> WtStatus {
    if out.is_null() {
        return fail(WtStatus::NullPointer, "null output pointer");
    }
    match CString::new(value) {
        Ok(s) => {
            *out = s.into_raw();
            WtStatus::Ok
        }
        Err(_) => fail(WtStatus::InvalidArgument, "string contains nul"),
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wt_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |s| s.as_ptr())
    })
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn wt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an edge list ("u v" per line, '#' comments).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_graph_parse(text: *const c_char, out: *mut *mut WtGraph) -> WtStatus {
    guard(|| {
        if out.is_null() {
            return fail(WtStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_graph(text) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(WtGraph { graph }));
                WtStatus::Ok
            }
            Err(err) => from_error(err),
        }
    })
}

/// # Safety
/// `graph` must be null or a handle from [`wt_graph_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wt_graph_free(graph: *mut WtGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

unsafe fn graph_ref<'a>(graph: *const WtGraph) -> Result<&'a Graph, WtStatus> {
    graph
        .as_ref()
        .map(|g| &g.graph)
        .ok_or_else(|| fail(WtStatus::NullPointer, "null graph handle"))
}

/// # Safety
/// `graph` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_graph_size(
    graph: *const WtGraph,
    vertices: *mut usize,
    edges: *mut usize,
) -> WtStatus {
    guard(|| {
        let g = match graph_ref(graph) {
            Ok(g) => g,
            Err(status) => return status,
        };
        if vertices.is_null() || edges.is_null() {
            return fail(WtStatus::NullPointer, "null output pointer");
        }
        *vertices = g.vertex_count();
        *edges = g.edge_count();
        WtStatus::Ok
    })
}

/// Game value `opt` as a reduced fraction "p/q".
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_strength(graph: *const WtGraph, out: *mut *mut c_char) -> WtStatus {
    guard(|| {
        let g = match graph_ref(graph) {
            Ok(g) => g,
            Err(status) => return status,
        };
        match strength_opt(g, &WeightMap::unit(g.edge_count())) {
            Ok(result) => write_string(out, rational::format(&result.opt)),
            Err(err) => from_error(err),
        }
    })
}

/// Full analysis. With `verify`, every oracle check runs with all caps set
/// to `max_oracle_edges` (0 keeps the default caps); a failed check returns
/// `WT_STATUS_VERIFY_MISMATCH` and still stores the analysis.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_analyze(
    graph: *const WtGraph,
    verify: bool,
    max_oracle_edges: usize,
    out: *mut *mut WtAnalysis,
) -> WtStatus {
    guard(|| {
        let g = match graph_ref(graph) {
            Ok(g) => g,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(WtStatus::NullPointer, "null output pointer");
        }
        let oracle = if max_oracle_edges == 0 {
            Oracle::default()
        } else {
            Oracle::with_cap(max_oracle_edges)
        };
        match analyze(g, verify.then_some(&oracle)) {
            Ok(report) => {
                let verified = report.verified();
                *out = Box::into_raw(Box::new(WtAnalysis { report }));
                if verified == Some(false) {
                    fail(WtStatus::VerifyMismatch, "oracle mismatch")
                } else {
                    WtStatus::Ok
                }
            }
            Err(err) => from_error(err),
        }
    })
}

/// # Safety
/// `analysis` must be null or a handle from [`wt_analyze`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wt_analysis_free(analysis: *mut WtAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

unsafe fn analysis_ref<'a>(analysis: *const WtAnalysis) -> Result<&'a AnalysisReport, WtStatus> {
    analysis
        .as_ref()
        .map(|a| &a.report)
        .ok_or_else(|| fail(WtStatus::NullPointer, "null analysis handle"))
}

/// The analysis report as JSON, as printed by `wiretap analyze`.
///
/// # Safety
/// `analysis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_analysis_json(
    analysis: *const WtAnalysis,
    out: *mut *mut c_char,
) -> WtStatus {
    guard(|| match analysis_ref(analysis) {
        Ok(r) => write_string(out, r.to_json()),
        Err(status) => status,
    })
}

/// # Safety
/// `analysis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_analysis_opt(
    analysis: *const WtAnalysis,
    out: *mut *mut c_char,
) -> WtStatus {
    guard(|| match analysis_ref(analysis) {
        Ok(r) => write_string(out, rational::format(&r.opt)),
        Err(status) => status,
    })
}

/// Number of prime-partition elements and whether one is degenerate.
///
/// # Safety
/// `analysis` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_analysis_partition_size(
    analysis: *const WtAnalysis,
    elements: *mut usize,
    has_degenerate: *mut bool,
) -> WtStatus {
    guard(|| {
        let r = match analysis_ref(analysis) {
            Ok(r) => r,
            Err(status) => return status,
        };
        if elements.is_null() || has_degenerate.is_null() {
            return fail(WtStatus::NullPointer, "null output pointer");
        }
        *elements = r.elements.len();
        *has_degenerate = r.elements.iter().any(|(_, d)| *d);
        WtStatus::Ok
    })
}

/// `kappa`; `WT_STATUS_ASSUMPTION_VIOLATED` when opt = 1.
///
/// # Safety
/// `analysis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_analysis_kappa(
    analysis: *const WtAnalysis,
    out: *mut *mut c_char,
) -> WtStatus {
    guard(|| match analysis_ref(analysis) {
        Ok(r) => match &r.kappa {
            Some(k) => write_string(out, rational::format(k)),
            None => fail(WtStatus::AssumptionViolated, "opt = 1, no nucleolus"),
        },
        Err(status) => status,
    })
}

/// Nucleolus weight of `edge`.
///
/// # Safety
/// `analysis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wt_analysis_nucleolus_weight(
    analysis: *const WtAnalysis,
    edge: usize,
    out: *mut *mut c_char,
) -> WtStatus {
    guard(|| {
        let r = match analysis_ref(analysis) {
            Ok(r) => r,
            Err(status) => return status,
        };
        let Some(nu) = &r.nucleolus else {
            return fail(WtStatus::AssumptionViolated, "opt = 1, no nucleolus");
        };
        match nu.get(edge) {
            Some(w) => write_string(out, rational::format(w)),
            None => fail(WtStatus::InvalidArgument, "edge id out of range"),
        }
    })
}

/// Tests a distribution given as lines "edge_id p/q". `value` receives the
/// minimum connected spanning subgraph weight.
///
/// # Safety
/// `graph` must be a live handle, `dist` a nul-terminated string and the
/// outputs writable.
#[no_mangle]
pub unsafe extern "C" fn wt_check_distribution(
    graph: *const WtGraph,
    dist: *const c_char,
    maxmin: *mut bool,
    pdist: *mut bool,
    value: *mut *mut c_char,
) -> WtStatus {
    guard(|| {
        let g = match graph_ref(graph) {
            Ok(g) => g,
            Err(status) => return status,
        };
        let text = match read_str(dist) {
            Ok(t) => t,
            Err(status) => return status,
        };
        if maxmin.is_null() || pdist.is_null() {
            return fail(WtStatus::NullPointer, "null output pointer");
        }
        let run = || -> wiretap::Result<(bool, bool, String)> {
            let d = parse_distribution(text, g.edge_count())?;
            let p = Pipeline::new(g)?;
            Ok((
                is_maxmin(g, &p.pp, &p.dag, &d),
                is_pdist(&p.pp, &p.dag, &d),
                rational::format(&min_csg(g, &d)?.weight),
            ))
        };
        match run() {
            Ok((m, p, v)) => {
                *maxmin = m;
                *pdist = p;
                write_string(value, v)
            }
            Err(err) => from_error(err),
        }
    })
}
