//! C ABI over `cframes`.
//!
//! Objects cross the boundary as opaque handles created by `cf_*_new` style
//! constructors and released with the matching `cf_*_free`. Every fallible
//! call returns a [`CfStatus`]; on failure the message is kept per thread and
//! can be copied out with [`cf_last_error_message`]. Complex data is passed
//! as separate real and imaginary arrays, matrices in column-major order.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use cframes::frame::SampledFrame;
use cframes::hilbert;
use cframes::measure::{self, MeasureSpace, Symbol};
use cframes::multiplier;
use cframes::tf_frames::{self, WindowSpec};
use cframes::Error;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ShapeMismatch = 3,
    NotInvertible = 4,
    NotAFrame = 5,
    NumericFailure = 6,
    Panic = 7,
}

/// A finite weighted measure space.
pub struct CfSpace(MeasureSpace);

/// A sampled frame: `d` vectors per point of a measure space.
pub struct CfFrame(SampledFrame);

/// A complex symbol bound to one measure space.
pub struct CfSymbol(Symbol);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CfStatus {
    match e {
        Error::Shape(_) | Error::InfeasiblePartition { .. } => CfStatus::ShapeMismatch,
        Error::NotInvertible { .. } => CfStatus::NotInvertible,
        Error::NotAFrame { .. } => CfStatus::NotAFrame,
        Error::NumericFailure(_) => CfStatus::NumericFailure,
        _ => CfStatus::InvalidArgument,
    }
}

struct Fail(CfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(CfStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any error or panic as the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            CfStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CfStatus::Panic
        }
    }
}

unsafe fn read<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Fail> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_f64(out: *mut f64, v: f64, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = v;
    Ok(())
}

fn complex(re: &[f64], im: &[f64]) -> Vec<Complex64> {
    re.iter().zip(im).map(|(r, i)| Complex64::new(*r, *i)).collect()
}

/// Copies the last error message of this thread into `buf` (NUL terminated,
/// truncated to `len` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a NUL byte"),
    };
    VERSION.as_ptr()
}

/// A space of `n` points with `arity` coordinates each (`points` row-major,
/// `n × arity`) and positive `weights`.
///
/// # Safety
/// `points` must hold `n * arity` values, `weights` `n` values, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_space_new(
    points: *const f64,
    n: usize,
    arity: usize,
    weights: *const f64,
    out: *mut *mut CfSpace,
) -> CfStatus {
    guard(|| {
        let coords = read(points, n * arity, "points")?;
        let w = read(weights, n, "weights")?;
        let pts: Vec<Vec<f64>> =
            if arity == 0 { vec![Vec::new(); n] } else { coords.chunks(arity).map(|c| c.to_vec()).collect() };
        put(out, CfSpace(MeasureSpace::new(pts, w.to_vec())?))
    })
}

/// Midpoint rule on `[a, b]` with `n` cells.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_space_uniform(a: f64, b: f64, n: usize, out: *mut *mut CfSpace) -> CfStatus {
    guard(|| put(out, CfSpace(measure::uniform_grid_1d(a, b, n)?)))
}

/// # Safety
/// `space` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_space_free(space: *mut CfSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// `space` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_space_len(space: *const CfSpace) -> usize {
    space.as_ref().map_or(0, |s| s.0.len())
}

/// A frame of `d`-dimensional vectors over `space`; `re`/`im` are `d × N`
/// column-major, column `j` belonging to point `j`.
///
/// # Safety
/// `space` must be a live handle, `re` and `im` must hold `d * N` values.
#[no_mangle]
pub unsafe extern "C" fn cf_frame_new(
    space: *const CfSpace,
    d: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut CfFrame,
) -> CfStatus {
    guard(|| {
        let space = &handle(space, "space")?.0;
        let len = d * space.len();
        let values = complex(read(re, len, "re")?, read(im, len, "im")?);
        let m = DMatrix::from_column_slice(d, space.len(), &values);
        put(out, CfFrame(SampledFrame::new(space.clone(), m)?))
    })
}

/// The full Gabor system on `ℤ_d` for a window of length `d`.
///
/// # Safety
/// `re` and `im` must hold `d` values, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_frame_gabor(d: usize, re: *const f64, im: *const f64, out: *mut *mut CfFrame) -> CfStatus {
    guard(|| {
        let window = WindowSpec::Samples { re: read(re, d, "re")?.to_vec(), im: read(im, d, "im")?.to_vec() };
        put(out, CfFrame(tf_frames::gabor_frame(&window, d)?))
    })
}

/// # Safety
/// `frame` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_frame_free(frame: *mut CfFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// # Safety
/// `frame` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_frame_dim(frame: *const CfFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.0.dim())
}

/// # Safety
/// `frame` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_frame_len(frame: *const CfFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.0.len())
}

/// Optimal frame bounds; `is_frame` may be null.
///
/// # Safety
/// `frame` must be a live handle; `lower` and `upper` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_frame_bounds(
    frame: *const CfFrame,
    lower: *mut f64,
    upper: *mut f64,
    is_frame: *mut bool,
) -> CfStatus {
    guard(|| {
        let b = handle(frame, "frame")?.0.frame_bounds()?;
        write_f64(lower, b.lower, "lower")?;
        write_f64(upper, b.upper, "upper")?;
        if !is_frame.is_null() {
            *is_frame = b.is_frame;
        }
        Ok(())
    })
}

/// Frame operator as a `d × d` column-major matrix.
///
/// # Safety
/// `frame` must be a live handle; `re` and `im` must hold `d * d` writable values.
#[no_mangle]
pub unsafe extern "C" fn cf_frame_operator(frame: *const CfFrame, re: *mut f64, im: *mut f64) -> CfStatus {
    guard(|| {
        let s = handle(frame, "frame")?.0.frame_operator();
        write_matrix(s.matrix(), re, im)
    })
}

unsafe fn write_matrix(m: &DMatrix<Complex64>, re: *mut f64, im: *mut f64) -> Result<(), Fail> {
    if re.is_null() || im.is_null() {
        return Err(null("output matrix"));
    }
    for (k, z) in m.iter().enumerate() {
        *re.add(k) = z.re;
        *im.add(k) = z.im;
    }
    Ok(())
}

/// A symbol with `space_len(space)` complex values.
///
/// # Safety
/// `space` must be a live handle; `re` and `im` must hold one value per point.
#[no_mangle]
pub unsafe extern "C" fn cf_symbol_new(
    space: *const CfSpace,
    re: *const f64,
    im: *const f64,
    out: *mut *mut CfSymbol,
) -> CfStatus {
    guard(|| {
        let space = &handle(space, "space")?.0;
        let values = complex(read(re, space.len(), "re")?, read(im, space.len(), "im")?);
        put(out, CfSymbol(Symbol::new(space, values)?))
    })
}

/// # Safety
/// `symbol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_symbol_free(symbol: *mut CfSymbol) {
    if !symbol.is_null() {
        drop(Box::from_raw(symbol));
    }
}

/// `M_{m,F,G}` as a `d × d` column-major matrix.
///
/// # Safety
/// All handles must be live; `re` and `im` must hold `d * d` writable values.
#[no_mangle]
pub unsafe extern "C" fn cf_multiplier(
    m: *const CfSymbol,
    f: *const CfFrame,
    g: *const CfFrame,
    re: *mut f64,
    im: *mut f64,
) -> CfStatus {
    guard(|| {
        let op = multiplier::multiplier(&handle(m, "symbol")?.0, &handle(f, "f")?.0, &handle(g, "g")?.0)?;
        write_matrix(op.matrix(), re, im)
    })
}

/// Schatten-`p` norm of `M_{m,F,G}`; `p = INFINITY` gives the operator norm.
///
/// # Safety
/// All handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_multiplier_schatten(
    m: *const CfSymbol,
    f: *const CfFrame,
    g: *const CfFrame,
    p: f64,
    out: *mut f64,
) -> CfStatus {
    guard(|| {
        let op = multiplier::multiplier(&handle(m, "symbol")?.0, &handle(f, "f")?.0, &handle(g, "g")?.0)?;
        write_f64(out, hilbert::schatten_norm(&op, p)?, "out")
    })
}

/// The norm budget for Schatten-`p` against which the multiplier is checked.
///
/// # Safety
/// All handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_multiplier_budget(
    m: *const CfSymbol,
    f: *const CfFrame,
    g: *const CfFrame,
    p: f64,
    out: *mut f64,
) -> CfStatus {
    guard(|| {
        let (m, f, g) = (&handle(m, "symbol")?.0, &handle(f, "f")?.0, &handle(g, "g")?.0);
        let k = multiplier::BesselData::of(f, g)?;
        write_f64(out, k.schatten_budget(measure::lp_norm(f.space(), m, p)?, p), "out")
    })
}
