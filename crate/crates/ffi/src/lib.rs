//! C ABI for `spinwigner`.
//!
//! Every function returns an [`SwStatus`]. On failure a message is kept per
//! thread and can be read with [`sw_last_error`]. Handles are opaque and
//! must be released with the matching `_free` function. Panics never cross
//! the boundary; they are reported as `SW_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use spinwigner::analytic::{
    char_free, discretised_char, smeared_density, smeared_marginal, two_spin_weights, SmearingKernel, TwoSpinModel,
};
use spinwigner::mc::{run_estimation_with_workers, BinEstimate, Estimate, McConfig, SignMetrics};
use spinwigner::report::{create_file, write_histogram_csv};
use spinwigner::spin::{loop_weight, SpinRep, UnitVector};
use spinwigner::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwStatus {
    Ok = 0,
    InvalidArgument = 1,
    InvalidConfig = 2,
    ConfigMismatch = 3,
    Parse = 4,
    Io = 5,
    NullPointer = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Monte Carlo configuration under construction.
pub struct SwConfig(McConfig);

/// Result of [`sw_run`].
pub struct SwEstimate(Estimate);

/// One histogram bin. Standard errors are NaN with fewer than two chunks.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SwBin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub re_density: f64,
    pub im_density: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SwMetrics {
    pub n_paths: u64,
    pub mean_weight_re: f64,
    pub mean_weight_im: f64,
    pub mean_weight_stderr_re: f64,
    pub mean_weight_stderr_im: f64,
    pub mean_abs_weight: f64,
    pub mean_abs_weight_stderr: f64,
    pub phase_quality: f64,
    pub phase_quality_stderr: f64,
    pub normalization_re: f64,
    pub normalization_im: f64,
    pub normalization_stderr_re: f64,
    pub normalization_stderr_im: f64,
    pub scaled_weight_variance: f64,
}

impl From<&BinEstimate> for SwBin {
    fn from(b: &BinEstimate) -> Self {
        SwBin {
            bin_lo: b.bin_lo,
            bin_hi: b.bin_hi,
            re_density: b.re_density,
            im_density: b.im_density,
            stderr_re: b.stderr_re,
            stderr_im: b.stderr_im,
        }
    }
}

impl From<&SignMetrics> for SwMetrics {
    fn from(m: &SignMetrics) -> Self {
        SwMetrics {
            n_paths: m.n_paths,
            mean_weight_re: m.mean_weight.re,
            mean_weight_im: m.mean_weight.im,
            mean_weight_stderr_re: m.mean_weight_stderr_re,
            mean_weight_stderr_im: m.mean_weight_stderr_im,
            mean_abs_weight: m.mean_abs_weight,
            mean_abs_weight_stderr: m.mean_abs_weight_stderr,
            phase_quality: m.phase_quality,
            phase_quality_stderr: m.phase_quality_stderr,
            normalization_re: m.normalization_check.re,
            normalization_im: m.normalization_check.im,
            normalization_stderr_re: m.normalization_check_stderr_re,
            normalization_stderr_im: m.normalization_check_stderr_im,
            scaled_weight_variance: m.scaled_weight_variance,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

struct Failure(SwStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match err {
            Error::InvalidArgument(_) => SwStatus::InvalidArgument,
            Error::InvalidConfig(_) => SwStatus::InvalidConfig,
            Error::ConfigMismatch(_) => SwStatus::ConfigMismatch,
            Error::Parse(_) => SwStatus::Parse,
            Error::Io(_) => SwStatus::Io,
        };
        Failure(status, err.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(SwStatus::NullPointer, format!("`{name}` is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(SwStatus::InvalidArgument, message.into())
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SwStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            SwStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn config<'a>(p: *mut SwConfig) -> Result<&'a mut McConfig, Failure> {
    Ok(&mut out(p, "config")?.0)
}

unsafe fn estimate<'a>(p: *const SwEstimate) -> Result<&'a Estimate, Failure> {
    Ok(&p.as_ref().ok_or_else(|| null("estimate"))?.0)
}

fn kernel(slices: u32, width_scale: f64) -> Result<SmearingKernel, Failure> {
    Ok(SmearingKernel::with_width_scale(slices, width_scale)?)
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Smeared free-spin density at radius `s_radius` for kernel `(slices, width_scale)`.
///
/// # Safety
/// `result` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn sw_smeared_density(
    two_s: u32,
    slices: u32,
    width_scale: f64,
    s_radius: f64,
    result: *mut f64,
) -> SwStatus {
    guard(|| {
        let k = kernel(slices, width_scale)?;
        *out(result, "result")? = smeared_density(s_radius, SpinRep::from_two_s(two_s), &k)?;
        Ok(())
    })
}

/// Smeared one-dimensional marginal at `u`.
///
/// # Safety
/// `result` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn sw_smeared_marginal(
    two_s: u32,
    slices: u32,
    width_scale: f64,
    u: f64,
    result: *mut f64,
) -> SwStatus {
    guard(|| {
        let k = kernel(slices, width_scale)?;
        *out(result, "result")? = smeared_marginal(u, SpinRep::from_two_s(two_s), &k);
        Ok(())
    })
}

/// Normalized character of the spin-`s` representation at angle `t`.
///
/// # Safety
/// `result` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn sw_char_free(two_s: u32, t: f64, result: *mut f64) -> SwStatus {
    guard(|| {
        if !t.is_finite() {
            return Err(invalid(format!("angle must be finite, got {t}")));
        }
        *out(result, "result")? = char_free(t, SpinRep::from_two_s(two_s));
        Ok(())
    })
}

/// Exact characteristic function of the `slices`-slice approximant at wave number `k`.
///
/// # Safety
/// `re` and `im` must be valid pointers to `double`.
#[no_mangle]
pub unsafe extern "C" fn sw_discretised_char(two_s: u32, slices: u32, k: f64, re: *mut f64, im: *mut f64) -> SwStatus {
    guard(|| {
        let (re, im) = (out(re, "re")?, out(im, "im")?);
        let c = discretised_char(k, SpinRep::from_two_s(two_s), slices)?;
        (*re, *im) = (c.re, c.im);
        Ok(())
    })
}

/// Triplet and singlet populations of two spin-1/2 coupled by `coupling`.
///
/// # Safety
/// `p_triplet` and `p_singlet` must be valid pointers to `double`.
#[no_mangle]
pub unsafe extern "C" fn sw_two_spin_weights(
    beta: f64,
    coupling: f64,
    p_triplet: *mut f64,
    p_singlet: *mut f64,
) -> SwStatus {
    guard(|| {
        let (pt, ps) = (out(p_triplet, "p_triplet")?, out(p_singlet, "p_singlet")?);
        let w = two_spin_weights(&TwoSpinModel::new(beta, coupling)?);
        (*pt, *ps) = (w.p_triplet, w.p_singlet);
        Ok(())
    })
}

/// Weight of the closed path through `n_points` unit vectors stored as
/// consecutive `x, y, z` triples.
///
/// # Safety
/// `points` must hold `3 * n_points` doubles; `re` and `im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sw_loop_weight(
    two_s: u32,
    points: *const f64,
    n_points: usize,
    re: *mut f64,
    im: *mut f64,
) -> SwStatus {
    guard(|| {
        if points.is_null() {
            return Err(null("points"));
        }
        let (re, im) = (out(re, "re")?, out(im, "im")?);
        let coords = std::slice::from_raw_parts(points, 3 * n_points);
        let path = coords
            .chunks_exact(3)
            .map(|c| UnitVector::new(c[0], c[1], c[2]))
            .collect::<Result<Vec<_>, Error>>()?;
        let w = loop_weight(&path, SpinRep::from_two_s(two_s))?;
        (*re, *im) = (w.re, w.im);
        Ok(())
    })
}

/// New configuration with default bins, chunking, seed 0 and `r_max = s+1`.
///
/// # Safety
/// `result` must be a valid pointer; on success it receives a handle to free
/// with [`sw_config_free`].
#[no_mangle]
pub unsafe extern "C" fn sw_config_new(
    two_s: u32,
    slices: u32,
    n_samples: u64,
    result: *mut *mut SwConfig,
) -> SwStatus {
    guard(|| {
        let slot = out(result, "result")?;
        let c = McConfig::new(SpinRep::from_two_s(two_s), slices, n_samples);
        c.validate()?;
        *slot = Box::into_raw(Box::new(SwConfig(c)));
        Ok(())
    })
}

/// # Safety
/// `config` must come from [`sw_config_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sw_config_free(config: *mut SwConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sw_config_set_seed(config: *mut SwConfig, seed: u64) -> SwStatus {
    guard(|| {
        crate::config(config)?.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sw_config_set_bins(config: *mut SwConfig, n_bins: usize) -> SwStatus {
    guard(|| {
        crate::config(config)?.n_bins = n_bins;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sw_config_set_r_max(config: *mut SwConfig, r_max: f64) -> SwStatus {
    guard(|| {
        crate::config(config)?.r_max = r_max;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sw_config_set_chunk_size(config: *mut SwConfig, chunk_size: u64) -> SwStatus {
    guard(|| {
        crate::config(config)?.chunk_size = chunk_size;
        Ok(())
    })
}

/// Enables the projected histogram along `(x, y, z)`, which is normalized.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sw_config_set_axis(config: *mut SwConfig, x: f64, y: f64, z: f64) -> SwStatus {
    guard(|| {
        let c = crate::config(config)?;
        c.project_axis = Some(UnitVector::normalized(x, y, z)?);
        Ok(())
    })
}

/// Runs the experiment. `workers = 0` uses every core; the result does not
/// depend on the worker count.
///
/// # Safety
/// `config` must be a live handle and `result` a valid pointer; on success it
/// receives a handle to free with [`sw_estimate_free`].
#[no_mangle]
pub unsafe extern "C" fn sw_run(config: *const SwConfig, workers: usize, result: *mut *mut SwEstimate) -> SwStatus {
    guard(|| {
        let c = &config.as_ref().ok_or_else(|| null("config"))?.0;
        let slot = out(result, "result")?;
        let e = run_estimation_with_workers(c, workers)?;
        *slot = Box::into_raw(Box::new(SwEstimate(e)));
        Ok(())
    })
}

/// Union of two runs of the same experiment from disjoint streams.
///
/// # Safety
/// `a` and `b` must be live handles and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_estimate_merge(
    a: *const SwEstimate,
    b: *const SwEstimate,
    result: *mut *mut SwEstimate,
) -> SwStatus {
    guard(|| {
        let (a, b) = (estimate(a)?, estimate(b)?);
        let slot = out(result, "result")?;
        *slot = Box::into_raw(Box::new(SwEstimate(a.merge(b)?)));
        Ok(())
    })
}

/// # Safety
/// `estimate` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sw_estimate_free(estimate: *mut SwEstimate) {
    if !estimate.is_null() {
        drop(Box::from_raw(estimate));
    }
}

/// # Safety
/// `estimate` must be a live handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_estimate_n_bins(estimate: *const SwEstimate, result: *mut usize) -> SwStatus {
    guard(|| {
        *out(result, "result")? = crate::estimate(estimate)?.config.n_bins;
        Ok(())
    })
}

/// Copies the radial (`marginal = 0`) or projected bins into `bins`.
/// `written` receives the bin count; if `capacity` is too small nothing is
/// copied and `SW_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `bins` must have room for `capacity` elements; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sw_estimate_bins(
    estimate: *const SwEstimate,
    marginal: c_int,
    bins: *mut SwBin,
    capacity: usize,
    written: *mut usize,
) -> SwStatus {
    guard(|| {
        let e = crate::estimate(estimate)?;
        let written = out(written, "written")?;
        let hist = histogram(e, marginal)?;
        let values = hist.estimates();
        *written = values.len();
        if capacity < values.len() {
            return Err(Failure(
                SwStatus::BufferTooSmall,
                format!("{} bins do not fit in a buffer of {capacity}", values.len()),
            ));
        }
        if bins.is_null() {
            return Err(null("bins"));
        }
        let dst = std::slice::from_raw_parts_mut(bins, values.len());
        for (d, v) in dst.iter_mut().zip(&values) {
            *d = v.into();
        }
        Ok(())
    })
}

fn histogram(e: &Estimate, marginal: c_int) -> Result<&spinwigner::mc::ComplexHistogram, Failure> {
    if marginal == 0 {
        Ok(&e.radial)
    } else {
        e.marginal.as_ref().ok_or_else(|| invalid("the run has no projected histogram; set an axis"))
    }
}

/// # Safety
/// `estimate` must be a live handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_estimate_metrics(estimate: *const SwEstimate, result: *mut SwMetrics) -> SwStatus {
    guard(|| {
        *out(result, "result")? = (&crate::estimate(estimate)?.metrics).into();
        Ok(())
    })
}

/// Writes the radial or projected histogram as CSV to `path`.
///
/// # Safety
/// `estimate` must be a live handle and `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn sw_estimate_write_csv(
    estimate: *const SwEstimate,
    marginal: c_int,
    path: *const c_char,
) -> SwStatus {
    guard(|| {
        let e = crate::estimate(estimate)?;
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| invalid("path is not UTF-8"))?;
        let hist = histogram(e, marginal)?;
        let mut f = create_file(Path::new(path))?;
        write_histogram_csv(&mut f, &hist.estimates())?;
        Ok(())
    })
}
