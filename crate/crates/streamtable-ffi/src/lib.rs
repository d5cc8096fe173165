//! C ABI for the streamtable layout engine.
//!
//! Conventions: handles (`StTable`, `StLayout`) are opaque pointers owned by
//! this library and released with the matching `st_*_free`; strings returned
//! by the library are NUL-terminated UTF-8 owned by the caller and released
//! with `st_string_free`; every fallible call returns an [`StStatus`] and
//! writes its result through an out-pointer, and on failure
//! [`st_last_error_message`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use streamtable::csv_io::{parse_table_csv, write_table_csv};
use streamtable::greedy::greedy_layout;
use streamtable::heights::{initial_heights, local_improve, HeightPolicy};
use streamtable::json::{layout_from_json, layout_to_json};
use streamtable::layout::Layout;
use streamtable::rational;
use streamtable::search::{brute_force_search, BruteForceOptions, Objective};
use streamtable::svg::{render_svg, RenderOptions, Smoothing};
use streamtable::table::Table;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    StOk = 0,
    StNullPointer = 1,
    StInvalidUtf8 = 2,
    StParseError = 3,
    StDomainError = 4,
    StPanic = 5,
}

/// Search objectives for `st_search_brute`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StObjective {
    /// Minimize excess area over no-split layouts.
    StMinExcess = 0,
    /// Minimize splits over zero-excess packed layouts.
    StMinSplits = 1,
}

/// Opaque table handle.
pub struct StTable(Table);

/// Opaque layout handle.
pub struct StLayout(Layout);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn st_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn guard<F: FnOnce() -> StStatus>(f: F) -> StStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".to_string());
            set_error(&message);
            StStatus::StPanic
        }
    }
}

/// # Safety
/// `ptr` must be NUL-terminated and valid for reads.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, StStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(StStatus::StNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        StStatus::StInvalidUtf8
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> StStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            StStatus::StOk
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            StStatus::StDomainError
        }
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by a `st_*` function and not yet
/// freed; passing anything else is undefined behavior.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a table from CSV text (header row of column labels, then one row
/// label plus weights per line; weights accept integers, `p/q`, and exact
/// decimals).
///
/// # Safety
/// `csv` must be a valid NUL-terminated string; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn st_table_parse_csv(
    csv: *const c_char,
    out: *mut *mut StTable,
) -> StStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        let text = match read_str(csv) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_table_csv(text) {
            Ok(table) => {
                *out = Box::into_raw(Box::new(StTable(table)));
                StStatus::StOk
            }
            Err(err) => {
                set_error(&err.to_string());
                StStatus::StParseError
            }
        }
    })
}

/// # Safety
/// `table` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn st_table_free(table: *mut StTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Row count, or 0 when `table` is null.
///
/// # Safety
/// `table` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn st_table_rows(table: *const StTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.rows())
}

/// Column count, or 0 when `table` is null.
///
/// # Safety
/// `table` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn st_table_cols(table: *const StTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.cols())
}

/// Serializes a table to canonical CSV.
///
/// # Safety
/// `table` must be a live handle; `out` must be valid. The result is freed
/// with `st_string_free`.
#[no_mangle]
pub unsafe extern "C" fn st_table_to_csv(
    table: *const StTable,
    out: *mut *mut c_char,
) -> StStatus {
    guard(|| {
        let Some(table) = table.as_ref() else {
            set_error("null table handle");
            return StStatus::StNullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        give_string(write_table_csv(&table.0), out)
    })
}

fn heights_for(table: &Table, spec: &str) -> Result<streamtable::layout::RowHeights, StStatus> {
    let policy = HeightPolicy::parse(spec).map_err(|e| {
        set_error(&e.to_string());
        StStatus::StParseError
    })?;
    initial_heights(table, &policy).map_err(|e| {
        set_error(&e.to_string());
        StStatus::StDomainError
    })
}

/// Computes the greedy layout (no split, minimum excess area for the given
/// heights and the table's row order). `heights_spec` uses the same grammar
/// as the CLI: `uniform:R`, `prop:H`, or `explicit:R1,R2,...`.
///
/// # Safety
/// `table` must be a live handle; `heights_spec` a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn st_layout_greedy(
    table: *const StTable,
    heights_spec: *const c_char,
    out: *mut *mut StLayout,
) -> StStatus {
    guard(|| {
        let Some(table) = table.as_ref() else {
            set_error("null table handle");
            return StStatus::StNullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        let spec = match read_str(heights_spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let heights = match heights_for(&table.0, spec) {
            Ok(h) => h,
            Err(status) => return status,
        };
        *out = Box::into_raw(Box::new(StLayout(greedy_layout(&table.0, &heights))));
        StStatus::StOk
    })
}

/// Runs height local improvement from the given starting heights and returns
/// the improved layout.
///
/// # Safety
/// Same contracts as `st_layout_greedy`.
#[no_mangle]
pub unsafe extern "C" fn st_layout_improve(
    table: *const StTable,
    heights_spec: *const c_char,
    max_iters: usize,
    out: *mut *mut StLayout,
) -> StStatus {
    guard(|| {
        let Some(table) = table.as_ref() else {
            set_error("null table handle");
            return StStatus::StNullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        let spec = match read_str(heights_spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let heights = match heights_for(&table.0, spec) {
            Ok(h) => h,
            Err(status) => return status,
        };
        let (_, layout, _) = local_improve(&table.0, &heights, max_iters);
        *out = Box::into_raw(Box::new(StLayout(layout)));
        StStatus::StOk
    })
}

/// # Safety
/// `layout` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn st_layout_free(layout: *mut StLayout) {
    if !layout.is_null() {
        drop(Box::from_raw(layout));
    }
}

/// Excess area as an exact `p/q` string.
///
/// # Safety
/// `layout` must be a live handle; `out` valid; free the result with
/// `st_string_free`.
#[no_mangle]
pub unsafe extern "C" fn st_layout_excess(
    layout: *const StLayout,
    out: *mut *mut c_char,
) -> StStatus {
    guard(|| {
        let Some(layout) = layout.as_ref() else {
            set_error("null layout handle");
            return StStatus::StNullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        give_string(rational::to_string(&layout.0.excess_area()), out)
    })
}

/// Number of splits in the layout.
///
/// # Safety
/// `layout` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn st_layout_splits(
    layout: *const StLayout,
    out: *mut u64,
) -> StStatus {
    guard(|| {
        let Some(layout) = layout.as_ref() else {
            set_error("null layout handle");
            return StStatus::StNullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        *out = layout.0.split_count() as u64;
        StStatus::StOk
    })
}

/// Serializes a layout to the documented JSON schema.
///
/// # Safety
/// `layout` must be a live handle; `out` valid; free the result with
/// `st_string_free`.
#[no_mangle]
pub unsafe extern "C" fn st_layout_to_json(
    layout: *const StLayout,
    out: *mut *mut c_char,
) -> StStatus {
    guard(|| {
        let Some(layout) = layout.as_ref() else {
            set_error("null layout handle");
            return StStatus::StNullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        give_string(layout_to_json(&layout.0), out)
    })
}

/// Parses and revalidates a layout JSON document.
///
/// # Safety
/// `json` must be a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn st_layout_from_json(
    json: *const c_char,
    out: *mut *mut StLayout,
) -> StStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match layout_from_json(text) {
            Ok(layout) => {
                *out = Box::into_raw(Box::new(StLayout(layout)));
                StStatus::StOk
            }
            Err(err) => {
                set_error(&err.to_string());
                StStatus::StParseError
            }
        }
    })
}

/// Renders a layout as SVG. `smooth_fraction` in (0, 0.5] rounds stream
/// corners by that fraction of the smallest row height; pass 0 or a negative
/// value for rectilinear output.
///
/// # Safety
/// `layout` must be a live handle; `out` valid; free the result with
/// `st_string_free`.
#[no_mangle]
pub unsafe extern "C" fn st_layout_render_svg(
    layout: *const StLayout,
    scale: f64,
    smooth_fraction: f64,
    show_grid: bool,
    labels: bool,
    out: *mut *mut c_char,
) -> StStatus {
    guard(|| {
        let Some(layout) = layout.as_ref() else {
            set_error("null layout handle");
            return StStatus::StNullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        if scale.is_nan() || scale <= 0.0 {
            set_error("scale must be positive");
            return StStatus::StDomainError;
        }
        if smooth_fraction > 0.5 {
            set_error("smoothing fraction must be at most 0.5");
            return StStatus::StDomainError;
        }
        let smoothing = if smooth_fraction > 0.0 {
            Smoothing::Rounded(smooth_fraction)
        } else {
            Smoothing::None
        };
        let opts = RenderOptions { scale, smoothing, show_grid, labels, ..Default::default() };
        give_string(render_svg(&layout.0, &opts), out)
    })
}

/// Exhaustive row-permutation search; the result is the SearchResult JSON
/// (`order`, `score`, `objective`, `optimal`, `evaluations`). `delta` is the
/// uniform row height as a rational string; `cap` bounds the factorial
/// search (pass 0 for the default of 9).
///
/// # Safety
/// `table` must be a live handle; `delta` a valid string; `out` valid; free
/// the result with `st_string_free`.
#[no_mangle]
pub unsafe extern "C" fn st_search_brute(
    table: *const StTable,
    delta: *const c_char,
    objective: StObjective,
    cap: usize,
    out: *mut *mut c_char,
) -> StStatus {
    guard(|| {
        let Some(table) = table.as_ref() else {
            set_error("null table handle");
            return StStatus::StNullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return StStatus::StNullPointer;
        }
        let delta_text = match read_str(delta) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let delta = match rational::parse(delta_text) {
            Ok(d) => d,
            Err(err) => {
                set_error(&err.to_string());
                return StStatus::StParseError;
            }
        };
        let objective = match objective {
            StObjective::StMinExcess => Objective::MinExcessNoSplit,
            StObjective::StMinSplits => Objective::MinSplitsZeroExcess,
        };
        let options = BruteForceOptions {
            cap: if cap == 0 { BruteForceOptions::default().cap } else { cap },
            reversal_symmetry: false,
        };
        match brute_force_search(&table.0, &delta, objective, &options) {
            Ok(result) => give_string(result.to_json(), out),
            Err(err) => {
                set_error(&err.to_string());
                StStatus::StDomainError
            }
        }
    })
}
