//! Adaptive Simpson quadrature with a Richardson error estimate.
//!
//! This is the engine behind every density integral in [`crate::dist`]. The
//! integrands it sees there are smooth on bounded intervals, so a plain
//! adaptive Simpson rule is enough; infinite tails are mapped onto a bounded
//! interval by the caller before they get here.

use thiserror::Error;

/// Default absolute tolerance.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Default recursion depth limit.
pub const DEFAULT_MAX_DEPTH: u32 = 50;

// Bisection levels taken unconditionally before the error test is trusted.
// Keeps a lucky coincidence of the first three samples from ending the
// recursion on integrands concentrated in a small part of the interval.
const MIN_DEPTH: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not converge (best value {value}, error estimate {err_estimate})")]
    NonConvergence { value: f64, err_estimate: f64 },
    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64 },
    #[error("invalid integration setup: {0}")]
    InvalidSetup(&'static str),
}

/// Tolerance settings shared by every integral a distribution evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: DEFAULT_ABS_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

/// Result of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err_estimate: f64,
}

/// A definite integral of `integrand` over `[lo, hi]`.
///
/// ```
/// use varkelly_core::quadrature::Integral;
///
/// let est = Integral::new(|x: f64| x * x, 0.0, 1.0).integrate().unwrap();
/// assert!((est.value - 1.0 / 3.0).abs() < 1e-12);
/// ```
#[derive(Debug, Clone, Copy)]
pub struct Integral<F> {
    integrand: F,
    lo: f64,
    hi: f64,
    config: QuadConfig,
}

impl<F: Fn(f64) -> f64> Integral<F> {
    pub fn new(integrand: F, lo: f64, hi: f64) -> Self {
        Self {
            integrand,
            lo,
            hi,
            config: QuadConfig::default(),
        }
    }

    pub fn abs_tol(mut self, abs_tol: f64) -> Self {
        self.config.abs_tol = abs_tol;
        self
    }

    pub fn max_depth(mut self, max_depth: u32) -> Self {
        self.config.max_depth = max_depth;
        self
    }

    pub fn config(mut self, config: QuadConfig) -> Self {
        self.config = config;
        self
    }

    pub fn integrate(&self) -> Result<Estimate, QuadratureError> {
        let QuadConfig { abs_tol, max_depth } = self.config;
        if !(abs_tol > 0.0) {
            return Err(QuadratureError::InvalidSetup("abs_tol must be positive"));
        }
        if max_depth == 0 {
            return Err(QuadratureError::InvalidSetup("max_depth must be positive"));
        }
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo >= self.hi {
            return Err(QuadratureError::InvalidSetup(
                "interval must be finite with lo < hi",
            ));
        }

        let mut state = Walk {
            f: &self.integrand,
            max_depth,
            err: 0.0,
            converged: true,
        };
        let (a, b) = (self.lo, self.hi);
        let m = 0.5 * (a + b);
        let fa = state.eval(a)?;
        let fm = state.eval(m)?;
        let fb = state.eval(b)?;
        let whole = simpson(a, b, fa, fm, fb);
        let value = state.recurse(a, b, fa, fm, fb, whole, abs_tol, 0)?;

        if state.converged {
            Ok(Estimate {
                value,
                err_estimate: state.err,
            })
        } else {
            Err(QuadratureError::NonConvergence {
                value,
                err_estimate: state.err,
            })
        }
    }
}

/// Shorthand for [`Integral::new`] with an explicit config.
pub fn integrate<F: Fn(f64) -> f64>(
    integrand: F,
    lo: f64,
    hi: f64,
    config: QuadConfig,
) -> Result<Estimate, QuadratureError> {
    Integral::new(integrand, lo, hi).config(config).integrate()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct Walk<'a, F> {
    f: &'a F,
    max_depth: u32,
    err: f64,
    converged: bool,
}

impl<F: Fn(f64) -> f64> Walk<'_, F> {
    fn eval(&self, x: f64) -> Result<f64, QuadratureError> {
        let y = (self.f)(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite { at: x })
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, QuadratureError> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;

        if depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol {
            self.err += delta.abs() / 15.0;
            return Ok(left + right + delta / 15.0);
        }
        // Out of depth, or the interval can no longer be split in f64.
        if depth + 1 >= self.max_depth || m <= a || m >= b {
            self.converged = false;
            self.err += delta.abs() / 15.0;
            return Ok(left + right + delta / 15.0);
        }

        let l = self.recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
        let r = self.recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}
