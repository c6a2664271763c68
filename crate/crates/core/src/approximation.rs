//! Direct and inverse approximation bounds in the spectral model.
//!
//! The direct side verifies two families of inequalities for a vector `x`
//! and an even nondecreasing symbol `G`:
//!
//! * Bernstein-type: for `x` of exponential type at most `alpha`,
//!   `||Delta_h^k G(B) x|| <= h^k alpha^k G(alpha) ||x||`;
//! * Jackson-type: `E_r(x) <= sqrt(k+1) / (2^k G(r)) *
//!   omega_k(pi / r, G(B) x)`, whose proof hinges on the kernel bound
//!   `int_0^pi (1 - cos(theta t))^k sin t dt >= 2^(k+1) / (k+1)` for
//!   `theta >= 1`, with equality at `theta = 1`.
//!
//! The inverse side bounds the modulus of continuity of `G(B) x` by an
//! integral envelope of a prescribed decay rate `omega`: when
//! `E_r(x) <= m omega(1/r) / G(r)` along a dyadic grid of `r`, then
//!
//! ```text
//! omega_k(t, G(B) x) <= m_k [ t^k int_t^1 omega(tau) tau^-(k+1) dtau
//!                              + int_0^t omega(tau) / tau dtau ]
//! ```
//!
//! for `0 < t <= 1/2`.  [`inverse_theorem_experiment`] builds the extremal
//! dyadic vector realizing a given decay and fits the sharpest constant
//! `m_k` numerically.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::spectrum::{ScalarSymbol, SpectralVector, SpectrumModel};

/// Relative cushion used when declaring `lhs <= rhs` satisfied, absorbing
/// floating-point noise in exact-equality cases.
pub const SLACK_TOLERANCE: f64 = 1e-10;

/// Absolute tolerance for the adaptive quadratures in this module.
const QUADRATURE_TOL: f64 = 1e-10;

/// Lower cutoff below which Dini-type integrals switch from quadrature to
/// the caller-supplied analytic tail.
const DINI_EPS: f64 = 1e-12;

/// Outcome of a single inequality evaluation.
///
/// `satisfied` is `lhs <= rhs * (1 + SLACK_TOLERANCE)`; `slack = rhs - lhs`
/// is kept signed so a violation shows up as a negative entry rather than a
/// clamped zero.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    /// Which family the report belongs to (`"bernstein"`, `"jackson"`, ...).
    pub check: String,
    /// Difference/smoothness order the check ran at.
    pub k: u32,
    /// The scalar parameter of the check: step `h`, cutoff `r`, or time `t`.
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    /// Free-form identification of the symbol/vector the check ran on.
    pub context: String,
}

impl InequalityReport {
    pub fn new(
        check: impl Into<String>,
        k: u32,
        param: f64,
        lhs: f64,
        rhs: f64,
        context: impl Into<String>,
    ) -> Self {
        Self {
            check: check.into(),
            k,
            param,
            lhs,
            rhs,
            slack: rhs - lhs,
            satisfied: lhs <= rhs * (1.0 + SLACK_TOLERANCE),
            context: context.into(),
        }
    }
}

/// A prescribed modulus of continuity `omega` together with the structural
/// data the inverse bounds need: a doubling constant `c` with
/// `omega(2t) <= c omega(t)`, and (when `omega` is Dini-integrable) an
/// analytic tail certificate `eps -> int_0^eps omega(u)/u du` that covers
/// the part of the integral below the quadrature cutoff.
#[derive(Clone)]
pub struct ModulusOfContinuity {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    doubling_constant: f64,
    dini_tail: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl fmt::Debug for ModulusOfContinuity {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("ModulusOfContinuity")
            .field("name", &self.name)
            .field("doubling_constant", &self.doubling_constant)
            .field("has_dini_tail", &self.dini_tail.is_some())
            .finish()
    }
}

impl ModulusOfContinuity {
    /// Power modulus `omega(t) = t^alpha`, `alpha > 0`: doubling constant
    /// `2^alpha`, Dini tail `eps^alpha / alpha`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power modulus needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Self {
            name: format!("t^{alpha}"),
            f: Arc::new(move |t: f64| t.powf(alpha)),
            doubling_constant: 2f64.powf(alpha),
            dini_tail: Some(Arc::new(move |eps: f64| eps.powf(alpha) / alpha)),
        })
    }

    /// Custom modulus.  `dini_tail`, when given, must be the analytic value
    /// of `int_0^eps omega(u)/u du`; without it the Dini-dependent bounds
    /// refuse to run.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        doubling_constant: f64,
        dini_tail: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    ) -> Self {
        Self { name: name.into(), f: Arc::new(f), doubling_constant, dini_tail }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn doubling_constant(&self) -> f64 {
        self.doubling_constant
    }

    /// Check the hypotheses required of a modulus of continuity:
    /// `omega(0) = 0`, nondecreasing (sampled on a mixed linear/dyadic grid
    /// over `(0, 2]`), the declared doubling inequality on a dyadic grid,
    /// and Dini integrability via the tail certificate.
    pub fn check_conditions(&self) -> Result<()> {
        if self.eval(0.0).abs() > 1e-300 {
            return Err(Error::ModulusConditions(format!(
                "omega(0) = {} != 0 for '{}'",
                self.eval(0.0),
                self.name
            )));
        }
        let mut prev = 0.0;
        for i in 1..=512 {
            let t = 2.0 * i as f64 / 512.0;
            let v = self.eval(t);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::ModulusConditions(format!(
                    "omega({t}) = {v} for '{}'",
                    self.name
                )));
            }
            if v < prev * (1.0 - 1e-12) {
                return Err(Error::ModulusConditions(format!(
                    "omega decreases near t = {t} for '{}'",
                    self.name
                )));
            }
            prev = v;
        }
        for j in 0..=40 {
            let t = 2f64.powi(-j);
            let lhs = self.eval(2.0 * t);
            let rhs = self.doubling_constant * self.eval(t);
            if lhs > rhs * (1.0 + SLACK_TOLERANCE) {
                return Err(Error::ModulusConditions(format!(
                    "doubling constant {} fails at t = {t} for '{}'",
                    self.doubling_constant, self.name
                )));
            }
        }
        if self.dini_tail.is_none() {
            return Err(Error::DiniViolated(format!(
                "'{}' carries no analytic tail certificate for int_0 omega(u)/u du",
                self.name
            )));
        }
        // The certificate must itself vanish at 0 and be finite at the cutoff.
        let tail = self.dini_tail.as_ref().unwrap();
        let at_eps = tail(DINI_EPS);
        if !at_eps.is_finite() || at_eps < 0.0 {
            return Err(Error::DiniViolated(format!(
                "tail certificate of '{}' evaluates to {at_eps} at eps = {DINI_EPS}",
                self.name
            )));
        }
        Ok(())
    }

    /// `int_0^t omega(u)/u du`, combining the analytic tail below
    /// [`DINI_EPS`] with adaptive quadrature above it.
    pub fn dini_integral(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("dini integral needs t > 0, got {t}")));
        }
        let tail = self.dini_tail.as_ref().ok_or_else(|| {
            Error::DiniViolated(format!("'{}' carries no analytic tail certificate", self.name))
        })?;
        if t <= DINI_EPS {
            return Ok(tail(t));
        }
        let f = self.f.clone();
        let body = adaptive_simpson(&move |u: f64| f(u) / u, DINI_EPS, t, QUADRATURE_TOL)?;
        Ok(tail(DINI_EPS) + body)
    }
}

/// Bernstein-type inequality check.
///
/// `x` is first projected onto `[-alpha, alpha]` so the hypothesis
/// "exponential type at most `alpha`" holds by construction; the report
/// compares `||Delta_h^k G(B) x_alpha||` against
/// `h^k alpha^k G(alpha) ||x_alpha||`.
pub fn bernstein_check(
    g: &ScalarSymbol,
    k: u32,
    h: f64,
    alpha: f64,
    x: &SpectralVector,
) -> Result<InequalityReport> {
    if !(h > 0.0 && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bernstein check needs h > 0 and alpha > 0, got h = {h}, alpha = {alpha}"
        )));
    }
    g.verify_on_grid(alpha)?;
    let projected = x.project_exp(alpha);
    let lhs = projected.apply(g)?.difference(k, h).norm();
    let rhs = h.powi(k as i32) * alpha.powi(k as i32) * g.eval(alpha) * projected.norm();
    Ok(InequalityReport::new(
        "bernstein",
        k,
        h,
        lhs,
        rhs,
        format!("G={}, alpha={alpha}", g.name()),
    ))
}

/// Jackson-type inequality check: `E_r(x)` against
/// `sqrt(k+1) / (2^k G(r)) * omega_k(pi / r, G(B) x)`.
pub fn jackson_check(
    g: &ScalarSymbol,
    k: u32,
    r: f64,
    x: &SpectralVector,
) -> Result<InequalityReport> {
    if k == 0 || !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "jackson check needs k >= 1 and r > 0, got k = {k}, r = {r}"
        )));
    }
    g.verify_on_grid(x.spectrum().max_abs())?;
    let gr = g.eval(r);
    if gr <= 0.0 {
        return Err(Error::BoundDegenerate(r));
    }
    let lhs = x.best_approx(r);
    let transformed = x.apply(g)?;
    let omega = transformed.modulus(k, std::f64::consts::PI / r);
    let rhs = ((k + 1) as f64).sqrt() / (2f64.powi(k as i32) * gr) * omega;
    Ok(InequalityReport::new("jackson", k, r, lhs, rhs, format!("G={}", g.name())))
}

/// Sharp lower bound `2^(k+1) / (k+1)` of the kernel integral at
/// `theta = 1`.
pub fn kernel_lower_bound(k: u32) -> f64 {
    2f64.powi(k as i32 + 1) / (k + 1) as f64
}

/// The oscillatory kernel `int_0^pi (1 - cos(theta t))^k sin t dt`,
/// evaluated by adaptive quadrature to absolute accuracy `1e-10`.
/// Requires `theta >= 1` and `k >= 1`, matching the regime in which the
/// lower bound [`kernel_lower_bound`] holds.
pub fn kernel_integral(theta: f64, k: u32) -> Result<f64> {
    if !(theta >= 1.0) || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "kernel integral needs theta >= 1 and k >= 1, got theta = {theta}, k = {k}"
        )));
    }
    adaptive_simpson(
        &move |t: f64| (1.0 - (theta * t).cos()).powi(k as i32) * t.sin(),
        0.0,
        std::f64::consts::PI,
        QUADRATURE_TOL,
    )
}

/// Kernel check packaged as an [`InequalityReport`] (`lhs` is the bound,
/// `rhs` the integral, so `satisfied` means the bound holds).
pub fn kernel_check(theta: f64, k: u32) -> Result<InequalityReport> {
    let value = kernel_integral(theta, k)?;
    let bound = kernel_lower_bound(k);
    Ok(InequalityReport::new("kernel", k, theta, bound, value, "lower bound"))
}

/// The dyadic approximants `u_j = P_{[-2^j, 2^j]} x` for `j = 0..=j_max`.
pub fn dyadic_approximants(x: &SpectralVector, j_max: u32) -> Vec<SpectralVector> {
    (0..=j_max).map(|j| x.project_exp(2f64.powi(j as i32))).collect()
}

/// The two integral terms of the inverse envelope at time `t`:
///
/// `I1 = t^k int_t^1 omega(tau) / tau^(k+1) dtau` and
/// `I2 = int_0^t omega(tau) / tau dtau`.
///
/// Requires `0 < t <= 1/2` (the regime of the inverse bound).
pub fn inverse_bound(omega: &ModulusOfContinuity, k: u32, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "inverse bound needs 0 < t <= 1/2, got t = {t}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("inverse bound needs k >= 1".into()));
    }
    let i1 = envelope_first_term(omega, k, t)?;
    let i2 = omega.dini_integral(t)?;
    Ok((i1, i2))
}

/// The first envelope term alone: `t^k int_t^1 omega(tau) / tau^(k+1) dtau`.
/// Requires `0 < t <= 1/2`, the regime in which the envelope controls the
/// modulus.
pub fn envelope_first_term(omega: &ModulusOfContinuity, k: u32, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 0.5) || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "rate bound needs 0 < t <= 1/2 and k >= 1, got t = {t}, k = {k}"
        )));
    }
    let f = omega.f.clone();
    let p = k as i32 + 1;
    let integral = adaptive_simpson(&move |tau: f64| f(tau) / tau.powi(p), t, 1.0, QUADRATURE_TOL)?;
    Ok(t.powi(k as i32) * integral)
}

/// `Omega(t) = int_0^t omega(u)/u du`, the integrated modulus.
pub fn big_omega(omega: &ModulusOfContinuity, t: f64) -> Result<f64> {
    omega.dini_integral(t)
}

/// Structural check of `Omega`: vanishes at 0, nondecreasing, and inherits
/// a doubling bound, all sampled on a dyadic grid.
pub fn big_omega_properties(omega: &ModulusOfContinuity) -> Result<()> {
    let near_zero = big_omega(omega, 1e-10)?;
    if near_zero > omega.eval(1.0).max(1.0) * 1e-3 {
        return Err(Error::ModulusConditions(format!(
            "Omega(1e-10) = {near_zero:.3e} does not vanish"
        )));
    }
    let mut prev = 0.0;
    for j in (0..=20).rev() {
        let t = 2f64.powi(-j);
        let v = big_omega(omega, t)?;
        if v < prev * (1.0 - 1e-10) {
            return Err(Error::ModulusConditions(format!("Omega decreases at t = {t}")));
        }
        prev = v;
    }
    for j in 1..=20 {
        let t = 2f64.powi(-j);
        let lhs = big_omega(omega, 2.0 * t)?;
        let rhs = omega.doubling_constant() * big_omega(omega, t)?;
        if lhs > rhs * (1.0 + 1e-8) {
            return Err(Error::ModulusConditions(format!(
                "Omega doubling fails at t = {t}: {lhs:.6e} > {rhs:.6e}"
            )));
        }
    }
    Ok(())
}

/// One sampled point of the inverse-rate experiment.
#[derive(Debug, Clone)]
pub struct InverseRateSample {
    pub t: f64,
    /// Measured `omega_k(t, G(B) x)`.
    pub omega_k: f64,
    /// First envelope term `I1` at `t`.
    pub envelope_i1: f64,
    /// Second envelope term `I2` at `t`.
    pub envelope_i2: f64,
    /// `omega_k / (I1 + I2)`.
    pub ratio: f64,
}

/// Result of [`inverse_theorem_experiment`].
#[derive(Debug, Clone)]
pub struct InverseRateReport {
    pub k: u32,
    /// Largest eigenvalue of the dyadic spectrum (`2^j_max`).
    pub spectrum_bound: f64,
    pub mode_count: usize,
    /// Sharpest constant with
    /// `omega_k(t) <= fitted_m * (I1(t) + I2(t))` across the sampled grid.
    pub fitted_m: f64,
    pub samples: Vec<InverseRateSample>,
}

/// Build the extremal vector with prescribed decay and measure how its
/// modulus of continuity compares to the inverse envelope.
///
/// One mode is placed at each `lambda = 2^j`, `j = 0..=j_max` with
/// `2^j_max <= spectrum_bound`, with
/// `|c_j|^2 = target(2^j)^2 - target(2^(j+1))^2` for
/// `target(r) = omega(1/r) / G(r)` (last mode takes the whole remaining
/// tail), so `E_r(x) = target(2^j)` exactly as `r` crosses each dyadic
/// level.  The modulus `omega_k(t, G(B) x)` is then sampled on the dyadic
/// grid `t = 2^-1 .. 2^-12` and the least constant `m_k` dominating it by
/// the envelope `I1 + I2` is returned.
pub fn inverse_theorem_experiment(
    omega: &ModulusOfContinuity,
    g: &ScalarSymbol,
    k: u32,
    spectrum_bound: f64,
) -> Result<InverseRateReport> {
    omega.check_conditions()?;
    if g.doubling_bound().is_none() {
        return Err(Error::SymbolHypothesis(format!(
            "symbol '{}' carries no doubling bound",
            g.name()
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("experiment needs k >= 1".into()));
    }
    if !(spectrum_bound >= 4.0) {
        return Err(Error::TruncationTooSmall(format!(
            "dyadic construction needs a spectrum bound of at least 4, got {spectrum_bound}"
        )));
    }

    let j_max = spectrum_bound.log2().floor() as i32;
    let target = |r: f64| -> f64 {
        let gr = g.eval(r);
        if gr <= 0.0 { f64::INFINITY } else { omega.eval(1.0 / r) / gr }
    };

    let mut eigenvalues = Vec::with_capacity(j_max as usize + 1);
    let mut coeffs = Vec::with_capacity(j_max as usize + 1);
    for j in 0..=j_max {
        let lam = 2f64.powi(j);
        let here = target(lam);
        if !here.is_finite() {
            return Err(Error::BoundDegenerate(lam));
        }
        let next = if j == j_max { 0.0 } else { target(2f64.powi(j + 1)) };
        let mass = here * here - next * next;
        if mass < -1e-15 * here * here {
            return Err(Error::ModulusConditions(format!(
                "target r -> omega(1/r)/G(r) increases across r = {lam}; \
                 the dyadic construction needs it nonincreasing"
            )));
        }
        eigenvalues.push(lam);
        coeffs.push(mass.max(0.0).sqrt());
    }

    let spectrum = Arc::new(SpectrumModel::new(eigenvalues)?);
    let x = SpectralVector::from_real(spectrum, coeffs)?;
    let y = x.apply(g)?;

    let mut samples = Vec::new();
    let mut fitted_m = 0.0_f64;
    for j in 1..=12 {
        let t = 2f64.powi(-j);
        let measured = y.modulus(k, t);
        let (i1, i2) = inverse_bound(omega, k, t)?;
        let envelope = i1 + i2;
        let ratio = if envelope > 0.0 { measured / envelope } else { f64::INFINITY };
        if !ratio.is_finite() {
            return Err(Error::TruncationTooSmall(format!(
                "inverse envelope degenerates at t = {t}"
            )));
        }
        fitted_m = fitted_m.max(ratio);
        samples.push(InverseRateSample { t, omega_k: measured, envelope_i1: i1, envelope_i2: i2, ratio });
    }

    Ok(InverseRateReport {
        k,
        spectrum_bound: 2f64.powi(j_max),
        mode_count: j_max as usize + 1,
        fitted_m,
        samples,
    })
}

/// The classification envelope for the modulus of a vector whose best
/// approximation decays like `r^-alpha`: `t^k` when `k < alpha`,
/// `t^k |ln t|` when `k = alpha`, and `t^alpha` when `k > alpha`.
pub fn classification_envelope(k: u32, alpha: f64, t: f64) -> f64 {
    let kf = k as f64;
    if kf < alpha {
        t.powi(k as i32)
    } else if kf == alpha {
        t.powi(k as i32) * t.ln().abs()
    } else {
        t.powf(alpha)
    }
}
