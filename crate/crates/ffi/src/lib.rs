//! C ABI for the `tclab` transitive-closure engines.
//!
//! Edge sets and evaluation results are opaque handles owned by the caller
//! once returned and released with the matching `*_free` function. Every
//! fallible function returns a [`TclabStatus`]; after a failure,
//! [`tclab_last_error_message`] describes it for the calling thread.
//!
//! Enumerations cross the boundary as `uint32_t` holding a value of the
//! corresponding `Tclab*` enum, so out-of-range values are reported as
//! `TCLAB_STATUS_INVALID_ARGUMENT` instead of being undefined behaviour.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tclab::closed_form::{predict, ClosedFormError};
use tclab::engines::{evaluate, EngineError, EngineKind, EvalResult, Phase};
use tclab::graph_gen::generate;
use tclab::io_formats::{read_edges, write_edges, FactFormat, ReadError};
use tclab::model::{Family, GraphSpec, Instrumentation, RecursionVariant, Relation};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TclabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidSpec = 2,
    ParseError = 3,
    Io = 4,
    Integrity = 5,
    InvalidArgument = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TclabFamily {
    Cmpl = 0,
    MaxAcyc = 1,
    Cyc = 2,
    CycExtra = 3,
    Path = 4,
    PathDisj = 5,
    Grid = 6,
    BinTree = 7,
    BinTreeRev = 8,
    X = 9,
    Y = 10,
    W = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TclabVariant {
    Left = 0,
    Right = 1,
    Double = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TclabEngine {
    SemiNaive = 0,
    MinIncrement = 1,
    TopDown = 2,
    Ground = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TclabFormat {
    Tsv = 0,
    Prolog = 1,
    Asp = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TclabPhase {
    LoadRules = 0,
    ReadData = 1,
    Query = 2,
    Ground = 3,
    Solve = 4,
    WriteRes = 5,
}

/// A graph family instance. Parameters the family does not take are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TclabSpec {
    /// A `TclabFamily` value.
    pub family: u32,
    pub n: u64,
    pub k: u64,
    pub h: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TclabPair {
    pub source: u32,
    pub target: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TclabInstrumentation {
    pub base_firings: u64,
    pub rec_firings: u64,
    pub probes: u64,
    pub iterations: u64,
    pub duplicate_derivations: u64,
    pub tables_created: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TclabPrediction {
    pub vertices: u64,
    pub edges: u64,
    pub paths: u64,
    pub combos_left: u64,
    pub combos_right: u64,
    pub combos_double: u64,
}

/// Opaque set of `edge` facts.
pub struct TclabEdges {
    relation: Relation,
}

/// Opaque outcome of one engine run.
pub struct TclabResult {
    inner: EvalResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: TclabStatus,
    message: String,
}

impl Failure {
    fn new(status: TclabStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Self::new(TclabStatus::NullPointer, format!("{what} is null"))
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        let status = match e {
            ReadError::Io(_) => TclabStatus::Io,
            ReadError::Parse { .. } => TclabStatus::ParseError,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(TclabStatus::Io, e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::new(TclabStatus::Integrity, e.to_string())
    }
}

impl From<ClosedFormError> for Failure {
    fn from(e: ClosedFormError) -> Self {
        let status = match e {
            ClosedFormError::InvalidSpec(_) => TclabStatus::InvalidSpec,
            ClosedFormError::Integrity { .. } => TclabStatus::Integrity,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TclabStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let detail = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        Err(Failure::new(
            TclabStatus::Internal,
            format!("internal error: {detail}"),
        ))
    });
    match outcome {
        Ok(()) => TclabStatus::Ok,
        Err(failure) => {
            set_last_error(&failure.message);
            failure.status
        }
    }
}

fn invalid(what: &str, value: u32) -> Failure {
    Failure::new(
        TclabStatus::InvalidArgument,
        format!("{value} is not a valid {what}"),
    )
}

fn family(value: u32) -> Result<Family, Failure> {
    Ok(match value {
        0 => Family::Cmpl,
        1 => Family::MaxAcyc,
        2 => Family::Cyc,
        3 => Family::CycExtra,
        4 => Family::Path,
        5 => Family::PathDisj,
        6 => Family::Grid,
        7 => Family::BinTree,
        8 => Family::BinTreeRev,
        9 => Family::X,
        10 => Family::Y,
        11 => Family::W,
        _ => return Err(invalid("TclabFamily", value)),
    })
}

fn variant(value: u32) -> Result<RecursionVariant, Failure> {
    Ok(match value {
        0 => RecursionVariant::Left,
        1 => RecursionVariant::Right,
        2 => RecursionVariant::Double,
        _ => return Err(invalid("TclabVariant", value)),
    })
}

fn engine(value: u32) -> Result<EngineKind, Failure> {
    Ok(match value {
        0 => EngineKind::SemiNaive,
        1 => EngineKind::MinIncrement,
        2 => EngineKind::TopDown,
        3 => EngineKind::Ground,
        _ => return Err(invalid("TclabEngine", value)),
    })
}

fn format(value: u32) -> Result<FactFormat, Failure> {
    Ok(match value {
        0 => FactFormat::Tsv,
        1 => FactFormat::Prolog,
        2 => FactFormat::Asp,
        _ => return Err(invalid("TclabFormat", value)),
    })
}

fn phase(value: u32) -> Result<Phase, Failure> {
    Phase::ALL
        .get(value as usize)
        .copied()
        .ok_or_else(|| invalid("TclabPhase", value))
}

fn graph_spec(spec: &TclabSpec) -> Result<GraphSpec, Failure> {
    let family = family(spec.family)?;
    let pick = |takes: bool, v: u64| takes.then_some(v);
    let spec = GraphSpec::from_parts(
        family,
        pick(family.takes_n(), spec.n),
        pick(family.takes_k(), spec.k),
        pick(family.takes_h(), spec.h),
    )
    .and_then(|s| s.validate().map(|()| s))
    .map_err(|e| Failure::new(TclabStatus::InvalidSpec, e.to_string()))?;
    Ok(spec)
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn as_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::null(what))
}

unsafe fn path_arg(p: *const c_char) -> Result<&'static str, Failure> {
    if p.is_null() {
        return Err(Failure::null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(TclabStatus::InvalidArgument, "path is not valid UTF-8"))
}

unsafe fn copy_pairs(
    relation: &Relation,
    out: *mut TclabPair,
    capacity: usize,
) -> Result<(), Failure> {
    if relation.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(Failure::null("out"));
    }
    if capacity < relation.len() {
        return Err(Failure::new(
            TclabStatus::InvalidArgument,
            format!(
                "capacity {capacity} is below the {} pairs to copy",
                relation.len()
            ),
        ));
    }
    let slots = std::slice::from_raw_parts_mut(out, relation.len());
    for (slot, (source, target)) in slots.iter_mut().zip(relation.iter()) {
        *slot = TclabPair { source, target };
    }
    Ok(())
}

/// Message of the most recent failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tclab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates an empty edge set.
#[no_mangle]
pub extern "C" fn tclab_edges_new() -> *mut TclabEdges {
    Box::into_raw(Box::new(TclabEdges {
        relation: Relation::new(),
    }))
}

/// Releases an edge set. NULL is ignored.
///
/// # Safety
/// `edges` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tclab_edges_free(edges: *mut TclabEdges) {
    if !edges.is_null() {
        drop(Box::from_raw(edges));
    }
}

/// Adds `edge(source, target)`. Vertex ids must be at least 1.
///
/// # Safety
/// `edges` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tclab_edges_insert(
    edges: *mut TclabEdges,
    source: u32,
    target: u32,
) -> TclabStatus {
    guard(|| {
        let edges = as_mut(edges, "edges")?;
        if source == 0 || target == 0 {
            return Err(Failure::new(
                TclabStatus::InvalidArgument,
                "vertex ids start at 1",
            ));
        }
        edges.relation.insert(source, target);
        Ok(())
    })
}

/// # Safety
/// `edges` must be NULL or a live handle; `out_len` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tclab_edges_len(
    edges: *const TclabEdges,
    out_len: *mut usize,
) -> TclabStatus {
    guard(|| {
        let edges = as_ref(edges, "edges")?;
        *as_mut(out_len, "out_len")? = edges.relation.len();
        Ok(())
    })
}

/// Copies the edges in `(source, target)` order into `out`, which must hold
/// at least `tclab_edges_len` pairs.
///
/// # Safety
/// `edges` must be NULL or a live handle; `out` must be NULL or point to
/// `capacity` writable pairs.
#[no_mangle]
pub unsafe extern "C" fn tclab_edges_copy(
    edges: *const TclabEdges,
    out: *mut TclabPair,
    capacity: usize,
) -> TclabStatus {
    guard(|| copy_pairs(&as_ref(edges, "edges")?.relation, out, capacity))
}

/// Generates the edges of a family instance into a new handle.
///
/// # Safety
/// `spec` must be NULL or readable; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tclab_generate(
    spec: *const TclabSpec,
    out: *mut *mut TclabEdges,
) -> TclabStatus {
    guard(|| {
        let spec = graph_spec(as_ref(spec, "spec")?)?;
        let out = as_mut(out, "out")?;
        let relation =
            generate(&spec).map_err(|e| Failure::new(TclabStatus::InvalidSpec, e.to_string()))?;
        *out = Box::into_raw(Box::new(TclabEdges { relation }));
        Ok(())
    })
}

/// Reads an edge fact file into a new handle.
///
/// # Safety
/// `path` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tclab_edges_read(
    path: *const c_char,
    format: u32,
    out: *mut *mut TclabEdges,
) -> TclabStatus {
    guard(|| {
        let path = path_arg(path)?;
        let format = self::format(format)?;
        let out = as_mut(out, "out")?;
        let file =
            File::open(path).map_err(|e| Failure::new(TclabStatus::Io, format!("{path}: {e}")))?;
        let relation = read_edges(BufReader::new(file), format)?;
        *out = Box::into_raw(Box::new(TclabEdges { relation }));
        Ok(())
    })
}

/// Writes the edges as a fact file.
///
/// # Safety
/// `edges` must be NULL or a live handle; `path` must be NULL or a
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tclab_edges_write(
    edges: *const TclabEdges,
    path: *const c_char,
    format: u32,
) -> TclabStatus {
    guard(|| {
        let edges = as_ref(edges, "edges")?;
        let path = path_arg(path)?;
        let format = self::format(format)?;
        let file = File::create(path)
            .map_err(|e| Failure::new(TclabStatus::Io, format!("{path}: {e}")))?;
        let mut w = BufWriter::new(file);
        write_edges(&mut w, &edges.relation, format)?;
        w.flush()?;
        Ok(())
    })
}

/// Runs one engine on `edges` and stores the outcome in a new handle.
///
/// # Safety
/// `edges` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tclab_evaluate(
    edges: *const TclabEdges,
    engine: u32,
    variant: u32,
    out: *mut *mut TclabResult,
) -> TclabStatus {
    guard(|| {
        let edges = as_ref(edges, "edges")?;
        let engine = self::engine(engine)?;
        let variant = self::variant(variant)?;
        let out = as_mut(out, "out")?;
        let inner = evaluate(engine, &edges.relation, variant)?;
        *out = Box::into_raw(Box::new(TclabResult { inner }));
        Ok(())
    })
}

/// # Safety
/// `result` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tclab_result_instrumentation(
    result: *const TclabResult,
    out: *mut TclabInstrumentation,
) -> TclabStatus {
    guard(|| {
        let Instrumentation {
            base_firings,
            rec_firings,
            probes,
            iterations,
            duplicate_derivations,
            tables_created,
        } = as_ref(result, "result")?.inner.instr;
        *as_mut(out, "out")? = TclabInstrumentation {
            base_firings,
            rec_firings,
            probes,
            iterations,
            duplicate_derivations,
            tables_created,
        };
        Ok(())
    })
}

/// Wall time of one phase in milliseconds; 0 for phases the engine does not
/// have.
///
/// # Safety
/// `result` must be NULL or a live handle; `out_ms` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tclab_result_phase_ms(
    result: *const TclabResult,
    phase: u32,
    out_ms: *mut f64,
) -> TclabStatus {
    guard(|| {
        let result = as_ref(result, "result")?;
        let phase = self::phase(phase)?;
        let ms = result
            .inner
            .phase_times
            .get(&phase)
            .map_or(0.0, |d| d.as_secs_f64() * 1e3);
        *as_mut(out_ms, "out_ms")? = ms;
        Ok(())
    })
}

/// # Safety
/// `result` must be NULL or a live handle; `out_len` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tclab_result_paths_len(
    result: *const TclabResult,
    out_len: *mut usize,
) -> TclabStatus {
    guard(|| {
        let result = as_ref(result, "result")?;
        *as_mut(out_len, "out_len")? = result.inner.paths.len();
        Ok(())
    })
}

/// Copies the derived `path` pairs in `(source, target)` order.
///
/// # Safety
/// `result` must be NULL or a live handle; `out` must be NULL or point to
/// `capacity` writable pairs.
#[no_mangle]
pub unsafe extern "C" fn tclab_result_paths_copy(
    result: *const TclabResult,
    out: *mut TclabPair,
    capacity: usize,
) -> TclabStatus {
    guard(|| copy_pairs(&as_ref(result, "result")?.inner.paths, out, capacity))
}

/// Releases a result. NULL is ignored.
///
/// # Safety
/// `result` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tclab_result_free(result: *mut TclabResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Closed-form counts for a family instance.
///
/// # Safety
/// `spec` must be NULL or readable; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tclab_predict(
    spec: *const TclabSpec,
    out: *mut TclabPrediction,
) -> TclabStatus {
    guard(|| {
        let spec = graph_spec(as_ref(spec, "spec")?)?;
        let p = predict(&spec)?;
        *as_mut(out, "out")? = TclabPrediction {
            vertices: p.vertices,
            edges: p.edges,
            paths: p.paths,
            combos_left: p.combos_left,
            combos_right: p.combos_right,
            combos_double: p.combos_double,
        };
        Ok(())
    })
}
