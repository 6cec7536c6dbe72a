//! C interface to gogkit.
//!
//! Graphs are opaque `GogGraph` handles owned by the caller and released
//! with `gog_graph_free`. Strings returned through out-parameters are
//! released with `gog_string_free`. Every fallible call returns a
//! `GogStatus`; on failure `gog_last_error` describes the problem until the
//! next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gogkit::cli::{parse_refine_data, GogDocument, Mode};
use gogkit::families::{make, FamilyError, FamilyId};
use gogkit::gog::{collapse, equivalent, is_minimal, is_reduced, refine, validate, GogError, Severity, TriState};
use gogkit::lattice::{canonicalize, count_sandwich_classes};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GogStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    Unpresentable = 5,
    AttachmentUndecidable = 6,
    AttachmentFailed = 7,
    InvalidMarking = 8,
    BadParameter = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GogTriState {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

impl From<TriState> for GogTriState {
    fn from(t: TriState) -> Self {
        match t {
            TriState::Yes => GogTriState::Yes,
            TriState::No => GogTriState::No,
            TriState::Unknown => GogTriState::Unknown,
        }
    }
}

/// A parsed graph of groups.
pub struct GogGraph {
    doc: GogDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(GogStatus, String);

impl From<GogError> for Fail {
    fn from(e: GogError) -> Self {
        let status = match e {
            GogError::InvalidInput(_) => GogStatus::InvalidInput,
            GogError::Unpresentable(_) => GogStatus::Unpresentable,
            GogError::AttachmentUndecidable(_) => GogStatus::AttachmentUndecidable,
            GogError::AttachmentFailed(_) => GogStatus::AttachmentFailed,
            GogError::InvalidMarking(_) => GogStatus::InvalidMarking,
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GogStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GogStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GogStatus::Panic
        }
    }
}

unsafe fn as_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GogStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(GogStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn graph<'a>(p: *const GogGraph) -> Result<&'a GogGraph, Fail> {
    p.as_ref().ok_or_else(|| Fail(GogStatus::NullPointer, "null graph".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(GogStatus::NullPointer, "null out-parameter".into()));
    }
    out.write(value);
    Ok(())
}

fn boxed(doc: GogDocument) -> *mut GogGraph {
    Box::into_raw(Box::new(GogGraph { doc }))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn gog_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `.gog` text. `lenient` keeps unknown sections and keys.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gog_graph_parse(text: *const c_char, lenient: bool, out: *mut *mut GogGraph) -> GogStatus {
    guard(|| {
        let t = as_str(text)?;
        let mode = if lenient { Mode::Lenient } else { Mode::Strict };
        let doc = GogDocument::parse(t, mode).map_err(|e| Fail(GogStatus::ParseError, e.to_string()))?;
        put(out, boxed(doc))
    })
}

/// # Safety
/// `g` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gog_graph_free(g: *mut GogGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gog_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Canonical `.gog` text of `g`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gog_graph_serialize(g: *const GogGraph, out: *mut *mut c_char) -> GogStatus {
    guard(|| put(out, c_string(graph(g)?.doc.serialize())))
}

/// # Safety
/// `g` must be a live handle; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gog_graph_counts(g: *const GogGraph, vertices: *mut usize, edges: *mut usize) -> GogStatus {
    guard(|| {
        let gr = &graph(g)?.doc.graph;
        put(vertices, gr.vertices().len())?;
        put(edges, gr.edges().len())
    })
}

/// Counts hard errors and undecided checks.
///
/// # Safety
/// `g` must be a live handle; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gog_graph_validate(g: *const GogGraph, errors: *mut usize, unchecked: *mut usize) -> GogStatus {
    guard(|| {
        let diags = validate(&graph(g)?.doc.graph);
        let e = diags.iter().filter(|d| d.severity == Severity::Error).count();
        put(errors, e)?;
        put(unchecked, diags.len() - e)
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gog_is_minimal(g: *const GogGraph, out: *mut GogTriState) -> GogStatus {
    guard(|| put(out, is_minimal(&graph(g)?.doc.graph)?.into()))
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gog_is_reduced(g: *const GogGraph, out: *mut GogTriState) -> GogStatus {
    guard(|| put(out, is_reduced(&graph(g)?.doc.graph)?.into()))
}

/// # Safety
/// Both handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gog_equivalent(a: *const GogGraph, b: *const GogGraph, out: *mut GogTriState) -> GogStatus {
    guard(|| put(out, equivalent(&graph(a)?.doc.graph, &graph(b)?.doc.graph).into()))
}

/// Collapses the `count` named edges into a new graph.
///
/// # Safety
/// `g` must be a live handle, `edges` an array of `count` strings, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gog_graph_collapse(
    g: *const GogGraph,
    edges: *const *const c_char,
    count: usize,
    out: *mut *mut GogGraph,
) -> GogStatus {
    guard(|| {
        let src = graph(g)?;
        if edges.is_null() && count > 0 {
            return Err(Fail(GogStatus::NullPointer, "null edge list".into()));
        }
        let mut idx = Vec::with_capacity(count);
        for i in 0..count {
            let name = as_str(*edges.add(i))?;
            let e = src.doc.graph.edge_index(name);
            idx.push(e.ok_or_else(|| Fail(GogStatus::InvalidInput, format!("no edge named {name:?}")))?);
        }
        let c = collapse(&src.doc.graph, &idx)?;
        put(out, boxed(GogDocument::from_graph(src.doc.name.as_deref(), &c)))
    })
}

/// Refines `g` using refinement-data text.
///
/// # Safety
/// `g` must be a live handle, `data` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gog_graph_refine(g: *const GogGraph, data: *const c_char, out: *mut *mut GogGraph) -> GogStatus {
    guard(|| {
        let src = graph(g)?;
        let rd = parse_refine_data(as_str(data)?, &src.doc.graph, Mode::Strict)
            .map_err(|e| Fail(GogStatus::ParseError, e.to_string()))?;
        let r = refine(&src.doc.graph, &rd)?;
        put(out, boxed(GogDocument::from_graph(src.doc.name.as_deref(), &r)))
    })
}

fn family_error(e: FamilyError) -> Fail {
    match e {
        FamilyError::Parameter(m) => Fail(GogStatus::BadParameter, m),
        FamilyError::Gog(g) => g.into(),
    }
}

unsafe fn family_id(id: *const c_char) -> Result<FamilyId, Fail> {
    let s = as_str(id)?;
    FamilyId::parse(s).ok_or_else(|| Fail(GogStatus::BadParameter, format!("unknown family {s:?}")))
}

/// Builds member `n` of an integer-parameter family.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gog_family_graph(id: *const c_char, n: u64, out: *mut *mut GogGraph) -> GogStatus {
    guard(|| {
        let f = family_id(id)?;
        let inst = make(f, n).map_err(family_error)?;
        let name = format!("{}-{}", inst.family, inst.parameter);
        put(out, boxed(GogDocument::from_graph(Some(&name), &inst.graph)))
    })
}

/// The certificate of member `n` as `key: value` lines, e.g. `index: 5`.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gog_family_certificate(id: *const c_char, n: u64, out: *mut *mut c_char) -> GogStatus {
    guard(|| {
        let inst = make(family_id(id)?, n).map_err(family_error)?;
        put(out, c_string(inst.certificate.to_string()))
    })
}

/// Number of sandwich classes over `<sub>` in the ambient group.
/// `ambient` reads `m` or `m / (r1), (r2)`; `sub` reads `(a, b), (c, d)`.
///
/// # Safety
/// Strings must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gog_sandwich_classes(ambient: *const c_char, sub: *const c_char, out: *mut usize) -> GogStatus {
    guard(|| {
        let bad = |m: String| Fail(GogStatus::BadParameter, m);
        let label = gogkit::cli::document::parse_group_spec(&format!("abelian {}", as_str(ambient)?))
            .map_err(|e| bad(e.reason))?;
        let gogkit::gog::GroupLabel::Abelian(p) = label else { unreachable!() };
        let gens = gogkit::cli::document::parse_vectors(as_str(sub)?).map_err(|e| bad(e.reason))?;
        if gens.iter().any(|g| g.len() != p.ambient_rank()) {
            return Err(bad("generator length differs from the ambient rank".into()));
        }
        let a = canonicalize(&gens, &p).map_err(|e| bad(e.to_string()))?;
        let r = count_sandwich_classes(&a, &p).map_err(|e| bad(e.to_string()))?;
        put(out, r.class_count)
    })
}
