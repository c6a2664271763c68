//! One-dimensional quadrature used throughout the crate.
//!
//! Two closely related engines live here:
//!
//! * [`adaptive_simpson`] — globally adaptive Simpson integration with a
//!   Richardson-corrected error estimate.  Used for the oscillatory kernel
//!   integrals and for integrals of moduli of continuity, where the
//!   integrand is cheap but the accuracy demand (absolute error around
//!   `1e-10`) is strict.
//! * [`composite_midpoint`] — a fixed-node composite midpoint rule on a
//!   uniform grid.  On `[0, pi]` the midpoint rule integrates `cos(m t)`
//!   exactly for every harmonic below the aliasing limit, which makes it the
//!   natural projector onto trigonometric bases; callers verify convergence
//!   by halving the node count.

use crate::error::{Error, Result};

/// Hard cap on the number of accepted subintervals, so a hostile integrand
/// degrades into an error instead of unbounded recursion.
const MAX_INTERVALS: usize = 1 << 20;

/// Number of uniform panels the interval is split into before adaptivity
/// starts.  This prevents the classic failure mode where a symmetric
/// oscillatory integrand fools the first error estimate.
const INITIAL_PANELS: usize = 64;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    (fa + 4.0 * fm + fb) * h / 6.0
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The error estimate on each panel is the usual `|S2 - S1| / 15` Richardson
/// term, and the returned value includes the Richardson correction, so the
/// practical accuracy is normally far better than the requested tolerance.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "adaptive_simpson needs finite bounds and tol > 0, got [{a}, {b}], tol {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }

    let panel_width = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut intervals_used = 0usize;
    for i in 0..INITIAL_PANELS {
        let lo = a + i as f64 * panel_width;
        let hi = if i + 1 == INITIAL_PANELS { b } else { lo + panel_width };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = simpson(flo, fmid, fhi, hi - lo);
        total += refine(f, lo, hi, flo, fmid, fhi, whole, panel_tol, &mut intervals_used)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    used: &mut usize,
) -> Result<f64> {
    *used += 1;
    if *used > MAX_INTERVALS {
        return Err(Error::QuadratureNotConverged { estimate: f64::INFINITY, tolerance: tol });
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    // 15 = 2^4 - 1 from the O(h^4) order of Simpson's rule.
    if delta.abs() <= 15.0 * tol || (b - a) < 1e-15 * (b.abs() + a.abs() + 1.0) {
        return Ok(left + right + delta / 15.0);
    }
    let half_tol = 0.5 * tol;
    Ok(refine(f, a, m, fa, flm, fm, left, half_tol, used)?
        + refine(f, m, b, fm, frm, fb, right, half_tol, used)?)
}

/// Composite midpoint rule with `panels` uniform panels on `[a, b]`.
///
/// For trigonometric integrands on `[0, pi]` this converges spectrally; the
/// caller is expected to halve `panels` and compare when an error estimate
/// is needed (see [`self_checked_midpoint`]).
pub fn composite_midpoint(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        acc += f(a + (i as f64 + 0.5) * h);
    }
    acc * h
}

/// Midpoint rule with a halving self-check: the result at `panels` nodes is
/// accepted only when it agrees with the result at `panels / 2` nodes to
/// within `tol`, otherwise the discrepancy is reported as an error.
pub fn self_checked_midpoint(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    tol: f64,
) -> Result<f64> {
    let coarse = composite_midpoint(f, a, b, panels / 2);
    let fine = composite_midpoint(f, a, b, panels);
    let estimate = (fine - coarse).abs();
    if estimate > tol {
        return Err(Error::QuadratureNotConverged { estimate, tolerance: tol });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_integrated_exactly() {
        let v = adaptive_simpson(&|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn sine_over_half_period() {
        let v = adaptive_simpson(&|x| x.sin(), 0.0, PI, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory_integrand_meets_tolerance() {
        // cos(50 t)^2 averages to 1/2 over [0, pi].
        let v = adaptive_simpson(&|x| (50.0 * x).cos().powi(2), 0.0, PI, 1e-10).unwrap();
        assert_abs_diff_eq!(v, PI / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        // integral of t^(-1/2) over [1e-12, 1] = 2(1 - 1e-6).
        let v = adaptive_simpson(&|x| x.powf(-0.5), 1e-12, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(v, 2.0 * (1.0 - 1e-6), epsilon = 1e-9);
    }

    #[test]
    fn midpoint_is_spectrally_accurate_for_harmonics() {
        // cos(3t) integrates to 0 over [0, pi]; 64 panels alias nothing below m = 128.
        let v = composite_midpoint(&|t| (3.0 * t).cos(), 0.0, PI, 64);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-13);
        let w = composite_midpoint(&|t| (3.0 * t).cos().powi(2), 0.0, PI, 64);
        assert_abs_diff_eq!(w, PI / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn self_check_rejects_under_resolved_grid() {
        // cos^2(32 t) contains the harmonic cos(64 t), which the 32-panel
        // half grid aliases to a constant while the 64-panel grid resolves
        // it; the two estimates disagree and the check must reject.
        let err = self_checked_midpoint(&|t| (32.0 * t).cos().powi(2), 0.0, PI, 64, 1e-9);
        assert!(matches!(err, Err(Error::QuadratureNotConverged { .. })));
    }

    #[test]
    fn degenerate_interval_is_zero() {
        assert_eq!(adaptive_simpson(&|x| x, 2.0, 2.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        assert!(adaptive_simpson(&|x| x, 0.0, f64::INFINITY, 1e-10).is_err());
        assert!(adaptive_simpson(&|x| x, 0.0, 1.0, 0.0).is_err());
    }
}
