//! Ritz–Galerkin solver on coordinate subspaces of the reference eigenbasis.
//!
//! A positive-definite operator `A` is presented through its Gram matrix
//! `a_{jk} = (A e_j, e_k)` in the eigenbasis `{e_k}` of a positive reference
//! operator `B` with eigenvalues `lambda_1 < lambda_2 < ...`.  For each
//! subspace dimension `n`, [`RitzProblem::solve`] minimizes the energy
//! functional `F(z) = (Az, z) - 2 (y, z)` over `H_n = span{e_1..e_n}` by
//! solving the leading `n x n` normal equations, and reports the error in
//! both energy norms:
//!
//! * `||z||_+ = (Az, z)^(1/2)` (computed through the quadratic form, never
//!   via a square root of `A`);
//! * `|||z|||_+ = ||B^(1/2) z|| = (sum lambda_j |z_j|^2)^(1/2)`.
//!
//! The two norms are equivalent with constants `c1 = 1/sqrt(min eig M)` and
//! `c2 = sqrt(max eig M)` for the congruent pencil
//! `M = D^(-1/2) A D^(-1/2)`, `D = diag(lambda_j)`; the sandwich bound
//!
//! ```text
//! |||x - x~_n|||_+ <= |||x - x_n|||_+ <= c3 |||x - x~_n|||_+,  c3 = c1 c2,
//! ```
//!
//! compares the Ritz error against the plain Fourier truncation `x~_n`, and
//! the a priori bound
//!
//! ```text
//! ||x - x_n||_+ <= c0 sqrt(k+1) / (2^k lambda_(n+1)^(alpha - 1/2))
//!                  * omega_k(pi / lambda_(n+1), B^alpha x),   c0 = c2 c3,
//! ```
//!
//! controls the energy error through the modulus of continuity of
//! `B^alpha x` whenever `alpha >= 1`.  [`counterexample`] builds the
//! explicit diagonal series showing that the bare decay
//! `lambda_(n+1)^(alpha - 1/2) ||x - x_n||_+ -> 0` does not by itself place
//! `x` in the domain of `B^alpha`, and [`smoothness_from_rate`] runs the
//! converse diagnostic on measured decay data.

use std::sync::{Arc, OnceLock};

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::approximation::{InequalityReport, ModulusOfContinuity};
use crate::error::{Error, Result};
use crate::spectrum::{SpectralVector, SpectrumModel};

/// Relative residual tolerance accepted when validating a caller-supplied
/// exact solution against the assembled system.
const EXACT_CONSISTENCY_TOL: f64 = 1e-8;

/// Relative Rayleigh-quotient stagnation threshold for the pencil power
/// iteration, required on two consecutive iterations.
const PENCIL_RQ_TOL: f64 = 1e-8;

/// Iteration cap for the pencil power iteration.
const PENCIL_MAX_ITERATIONS: usize = 10_000;

/// A positive-definite operator equation `A x = y` expressed in the
/// eigenbasis of the reference operator `B`.
#[derive(Debug)]
pub struct RitzProblem {
    spectrum: Arc<SpectrumModel>,
    gram: DMatrix<f64>,
    rhs: DVector<f64>,
    exact: Option<DVector<f64>>,
    solved_exact: OnceLock<DVector<f64>>,
    constants: OnceLock<(f64, f64)>,
}

/// Solution data for one subspace dimension.
#[derive(Debug, Clone)]
pub struct RitzSolution {
    pub n: usize,
    /// Coefficients of `x_n` in `e_1..e_n`.
    pub coefficients: DVector<f64>,
    /// `||x - x_n||_+`, the energy-norm error against the exact solution.
    pub energy_error: f64,
    /// `|||x - x_n|||_+ = ||B^(1/2) (x - x_n)||`.
    pub b_energy_error: f64,
    /// Full-space residual `||A x_n - y||`.
    pub residual: f64,
    /// Relative residual of the `n x n` normal equations; Galerkin
    /// orthogonality `(A(x - x_n), e_j) = 0`, `j <= n`, holds to this level.
    pub galerkin_residual: f64,
}

/// Result of [`RitzProblem::sandwich_check`].
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub n: usize,
    /// `|||x - x~_n|||_+` for the Fourier truncation `x~_n`.
    pub lower: f64,
    /// `|||x - x_n|||_+` for the Ritz solution.
    pub middle: f64,
    /// `c3 * lower`.
    pub upper: f64,
    /// `lower <= middle`.
    pub lower_report: InequalityReport,
    /// `middle <= upper`.
    pub upper_report: InequalityReport,
}

/// Result of [`RitzProblem::apriori_check`].
#[derive(Debug, Clone)]
pub struct AprioriReport {
    pub n: usize,
    pub alpha: f64,
    pub k: u32,
    /// `lambda_(n+1)`, the first eigenvalue outside the subspace.
    pub lambda_next: f64,
    /// `||x - x_n||_+`.
    pub lhs: f64,
    /// `c0 sqrt(k+1) / (2^k lambda_(n+1)^(alpha-1/2)) * omega_k(...)`.
    pub rhs: f64,
    /// `lambda_(n+1)^(alpha - 1/2) * lhs`, the quantity whose decay the
    /// bound forces.
    pub scaled_error: f64,
    pub report: InequalityReport,
}

impl RitzProblem {
    /// Validate and wrap a Gram matrix, right-hand side, and (optionally)
    /// the known exact solution coefficients.
    ///
    /// Requires a strictly positive reference spectrum, a square symmetric
    /// Gram matrix of matching size, and — when `exact` is given —
    /// `gram * exact = rhs` to relative accuracy `1e-8`.
    pub fn new(
        spectrum: Arc<SpectrumModel>,
        gram: DMatrix<f64>,
        rhs: DVector<f64>,
        exact: Option<DVector<f64>>,
    ) -> Result<Self> {
        let n = spectrum.truncation_order();
        if spectrum.eigenvalue(0) <= 0.0 {
            return Err(Error::InvalidParameter(
                "reference spectrum must be strictly positive for energy norms".into(),
            ));
        }
        if gram.nrows() != n || gram.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: gram.nrows().max(gram.ncols()) });
        }
        if rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rhs.len() });
        }
        let scale = gram.iter().fold(1.0_f64, |m, &a| m.max(a.abs()));
        for i in 0..n {
            for j in (i + 1)..n {
                if (gram[(i, j)] - gram[(j, i)]).abs() > 1e-10 * scale {
                    return Err(Error::InvalidParameter(format!(
                        "gram matrix not symmetric at ({i}, {j}): {} vs {}",
                        gram[(i, j)],
                        gram[(j, i)]
                    )));
                }
            }
        }
        if let Some(ref x) = exact {
            if x.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: x.len() });
            }
            let residual = (&gram * x - &rhs).norm();
            let denom = rhs.norm().max(f64::MIN_POSITIVE);
            let rel = residual / denom;
            if rel > EXACT_CONSISTENCY_TOL {
                return Err(Error::InconsistentExact(rel));
            }
        }
        Ok(Self {
            spectrum,
            gram,
            rhs,
            exact,
            solved_exact: OnceLock::new(),
            constants: OnceLock::new(),
        })
    }

    /// Diagonal problem: `A` acts by `d_k` on the `k`-th mode.
    pub fn diagonal(
        spectrum: Arc<SpectrumModel>,
        diag: &[f64],
        rhs: DVector<f64>,
        exact: Option<DVector<f64>>,
    ) -> Result<Self> {
        let gram = DMatrix::from_diagonal(&DVector::from_column_slice(diag));
        Self::new(spectrum, gram, rhs, exact)
    }

    pub fn dimension(&self) -> usize {
        self.spectrum.truncation_order()
    }

    pub fn spectrum(&self) -> &Arc<SpectrumModel> {
        &self.spectrum
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    /// `||z||_+ = (z^T A z)^(1/2)` for full-length coefficient vectors.
    pub fn energy_norm(&self, z: &DVector<f64>) -> f64 {
        (z.dot(&(&self.gram * z))).max(0.0).sqrt()
    }

    /// `|||z|||_+ = (sum lambda_j z_j^2)^(1/2)`.
    pub fn b_energy_norm(&self, z: &DVector<f64>) -> f64 {
        let lams = self.spectrum.eigenvalues();
        z.iter().zip(lams).map(|(&c, &l)| l * c * c).sum::<f64>().sqrt()
    }

    /// `||B z|| = (sum lambda_j^2 z_j^2)^(1/2)`.
    pub fn b_operator_norm(&self, z: &DVector<f64>) -> f64 {
        let lams = self.spectrum.eigenvalues();
        z.iter().zip(lams).map(|(&c, &l)| (l * c) * (l * c)).sum::<f64>().sqrt()
    }

    /// Graph norm of `B`: `(||z||^2 + ||B z||^2)^(1/2)`.
    pub fn graph_norm(&self, z: &DVector<f64>) -> f64 {
        let lams = self.spectrum.eigenvalues();
        z.iter().zip(lams).map(|(&c, &l)| (1.0 + l * l) * c * c).sum::<f64>().sqrt()
    }

    /// The energy functional `F(z) = (Az, z) - 2 (y, z)` minimized by the
    /// Ritz solution; `F(z) = ||z - x||_+^2 - ||x||_+^2`.
    pub fn objective(&self, z: &DVector<f64>) -> f64 {
        z.dot(&(&self.gram * z)) - 2.0 * self.rhs.dot(z)
    }

    /// Solve the leading `n x n` block by Cholesky factorization with one
    /// step of iterative refinement.
    fn factor_solve(&self, n: usize) -> Result<DVector<f64>> {
        let a_n = self.gram.view((0, 0), (n, n)).into_owned();
        let y_n = self.rhs.rows(0, n).into_owned();
        let chol = Cholesky::new(a_n.clone()).ok_or(Error::GramNotPositiveDefinite(n))?;
        let mut c = chol.solve(&y_n);
        let correction = chol.solve(&(&y_n - &a_n * &c));
        c += correction;
        Ok(c)
    }

    /// The reference solution: the caller-supplied exact coefficients when
    /// present, else the cached solution of the full system.  In the second
    /// case the result carries the truncation error of the model itself;
    /// see [`RitzProblem::truncation_guard`].
    pub fn exact_solution(&self) -> Result<&DVector<f64>> {
        if let Some(ref x) = self.exact {
            return Ok(x);
        }
        if self.solved_exact.get().is_none() {
            let full = self.factor_solve(self.dimension())?;
            let _ = self.solved_exact.set(full);
        }
        Ok(self.solved_exact.get().expect("full solve cached"))
    }

    /// Ritz solution on `H_n = span{e_1..e_n}` with all error metrics.
    pub fn solve(&self, n: usize) -> Result<RitzSolution> {
        let size = self.dimension();
        if n == 0 || n > size {
            return Err(Error::InvalidParameter(format!(
                "subspace dimension must lie in 1..={size}, got {n}"
            )));
        }
        let c = self.factor_solve(n)?;

        let a_n = self.gram.view((0, 0), (n, n));
        let y_n = self.rhs.rows(0, n);
        let block_residual = (&y_n - a_n * &c).norm();
        let y_scale = y_n.norm();
        let galerkin_residual =
            if y_scale > 0.0 { block_residual / y_scale } else { block_residual };

        let mut embedded = DVector::zeros(size);
        embedded.rows_mut(0, n).copy_from(&c);
        let residual = (&self.gram * &embedded - &self.rhs).norm();

        let exact = self.exact_solution()?;
        let diff = exact - &embedded;
        let energy_error = self.energy_norm(&diff);
        let b_energy_error = self.b_energy_norm(&diff);

        Ok(RitzSolution { n, coefficients: c, energy_error, b_energy_error, residual, galerkin_residual })
    }

    /// Norm-equivalence constants `(c1, c2)` with
    /// `c1^-1 |||z|||_+ <= ||z||_+ <= c2 |||z|||_+` on the truncated space:
    /// `c1 = 1/sqrt(min eig M)`, `c2 = sqrt(max eig M)` for
    /// `M = D^(-1/2) A D^(-1/2)`.
    ///
    /// Both extremes are computed by power iteration (the minimum through
    /// the shifted matrix `sigma I - M`), stopping when the Rayleigh
    /// quotient stagnates to `1e-8` relative on two consecutive iterations.
    /// Power iteration approaches the extremes from inside the spectrum, so
    /// the returned constants are lower estimates of the sharp ones.
    pub fn equivalence_constants(&self) -> Result<(f64, f64)> {
        if let Some(&(c1, c2)) = self.constants.get() {
            return Ok((c1, c2));
        }
        let n = self.dimension();
        let mut m = self.gram.clone();
        let lams = self.spectrum.eigenvalues();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] /= (lams[i] * lams[j]).sqrt();
            }
        }
        let theta_max = power_iteration_extreme(&m, None)?;
        let sigma = theta_max * (1.0 + 1e-3);
        let theta_shift = power_iteration_extreme(&m, Some(sigma))?;
        let theta_min = sigma - theta_shift;
        if theta_min <= 0.0 || theta_max <= 0.0 {
            return Err(Error::GramNotPositiveDefinite(n));
        }
        let pair = (1.0 / theta_min.sqrt(), theta_max.sqrt());
        let _ = self.constants.set(pair);
        Ok(pair)
    }

    /// Verify `|||x - x~_n|||_+ <= |||x - x_n|||_+ <= c3 |||x - x~_n|||_+`
    /// where `x~_n` is the plain Fourier truncation of the exact solution
    /// to `n` modes and `c3 = c1 c2`.
    pub fn sandwich_check(&self, n: usize) -> Result<SandwichReport> {
        let solution = self.solve(n)?;
        let exact = self.exact_solution()?;
        let mut tail = exact.clone();
        tail.rows_mut(0, n).fill(0.0);
        let lower = self.b_energy_norm(&tail);
        let middle = solution.b_energy_error;
        let (c1, c2) = self.equivalence_constants()?;
        let upper = c1 * c2 * lower;
        let lower_report = InequalityReport::new(
            "sandwich_lower",
            0,
            n as f64,
            lower,
            middle,
            "fourier truncation vs ritz error, b-energy norm",
        );
        let upper_report = InequalityReport::new(
            "sandwich_upper",
            0,
            n as f64,
            middle,
            upper,
            format!("ritz error vs c3 * truncation, c3 = {:.6}", c1 * c2),
        );
        Ok(SandwichReport { n, lower, middle, upper, lower_report, upper_report })
    }

    /// A priori energy-error bound at subspace dimension `n`, smoothness
    /// exponent `alpha >= 1`, and difference order `k >= 1`.
    pub fn apriori_check(&self, n: usize, alpha: f64, k: u32) -> Result<AprioriReport> {
        if alpha < 1.0 {
            return Err(Error::TheoremHypothesis(format!(
                "a priori bound needs alpha >= 1, got {alpha}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("a priori bound needs k >= 1".into()));
        }
        let size = self.dimension();
        if n == 0 || n >= size {
            return Err(Error::InvalidParameter(format!(
                "a priori bound needs 1 <= n < {size} so that lambda_(n+1) exists, got {n}"
            )));
        }
        let solution = self.solve(n)?;
        let lhs = solution.energy_error;
        let lambda_next = self.spectrum.eigenvalue(n);

        let exact = self.exact_solution()?;
        let lams = self.spectrum.eigenvalues();
        let powered: Vec<f64> =
            exact.iter().zip(lams).map(|(&c, &l)| l.powf(alpha) * c).collect();
        if powered.iter().any(|v| !v.is_finite()) {
            return Err(Error::FunctionalCalculusOverflow { lambda: self.spectrum.max_abs() });
        }
        let z = SpectralVector::from_real(self.spectrum.clone(), powered)?;
        let omega = z.modulus(k, std::f64::consts::PI / lambda_next);

        let (c1, c2) = self.equivalence_constants()?;
        let c0 = c2 * (c1 * c2);
        let rhs = c0 * ((k + 1) as f64).sqrt()
            / (2f64.powi(k as i32) * lambda_next.powf(alpha - 0.5))
            * omega;
        let scaled_error = lambda_next.powf(alpha - 0.5) * lhs;
        let report = InequalityReport::new(
            "apriori",
            k,
            lambda_next,
            lhs,
            rhs,
            format!("n={n}, alpha={alpha}"),
        );
        Ok(AprioriReport { n, alpha, k, lambda_next, lhs, rhs, scaled_error, report })
    }

    /// Truncation-quality estimate `||x_N - x_(N/2)||_+`: how much the
    /// model's own reference solution moves when the truncation halves.
    pub fn truncation_guard(&self) -> Result<f64> {
        let size = self.dimension();
        if size < 2 {
            return Err(Error::InvalidParameter("truncation guard needs dimension >= 2".into()));
        }
        let full = self.factor_solve(size)?;
        let half = self.factor_solve(size / 2)?;
        let mut diff = full;
        for (i, v) in diff.iter_mut().enumerate() {
            if i < size / 2 {
                *v -= half[i];
            }
        }
        Ok(self.energy_norm(&diff))
    }
}

/// Largest eigenvalue of the symmetric matrix `m` (or of `sigma I - m`
/// when a shift is given) by power iteration with the stagnation rule
/// described at [`RitzProblem::equivalence_constants`].
fn power_iteration_extreme(m: &DMatrix<f64>, shift: Option<f64>) -> Result<f64> {
    let n = m.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    if v.norm() == 0.0 {
        v = DVector::from_element(n, 1.0);
    }
    v /= v.norm();
    let apply = |v: &DVector<f64>| -> DVector<f64> {
        match shift {
            None => m * v,
            Some(s) => v * s - m * v,
        }
    };
    let mut theta = v.dot(&apply(&v));
    let mut calm = 0_usize;
    for iteration in 1..=PENCIL_MAX_ITERATIONS {
        let mut w = apply(&v);
        let norm = w.norm();
        if norm == 0.0 {
            // v is an exact null vector: the extreme along this start is 0.
            return Ok(0.0);
        }
        w /= norm;
        let theta_new = w.dot(&apply(&w));
        let change = (theta_new - theta).abs();
        theta = theta_new;
        v = w;
        if change <= PENCIL_RQ_TOL * theta.abs().max(f64::MIN_POSITIVE) {
            calm += 1;
            if calm >= 2 {
                return Ok(theta);
            }
        } else {
            calm = 0;
        }
        let _ = iteration;
    }
    Err(Error::PencilIterationFailed(PENCIL_MAX_ITERATIONS))
}

/// One point of the counterexample rate table.
#[derive(Debug, Clone)]
pub struct CounterexamplePoint {
    pub n: usize,
    /// `||x - x_n||_+^2`, the exact tail sum.
    pub error_sq: f64,
    /// `1 / ((4 alpha - 2) n^(4 alpha - 2) ln(n+1))`.
    pub closed_form_bound_sq: f64,
    /// `lambda_n^(alpha - 1/2) ||x - x_n||_+ = n^(2 alpha - 1) sqrt(error_sq)`.
    pub scaled_error: f64,
    /// `1 / sqrt((4 alpha - 2) ln(n+1))`.
    pub scaled_bound: f64,
}

/// Result of [`counterexample`].
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub alpha: f64,
    pub truncation: usize,
    /// `(M, sum_(2 <= k <= M) 1/(k ln k))` at `M in {N/100, N/10, N}` —
    /// the divergent series showing `x` escapes the domain of `B^alpha`.
    pub partial_sums: Vec<(usize, f64)>,
    /// Scaled errors and their closed-form bound for
    /// `n in 10..=min(1000, N/10)`.
    pub rate: Vec<CounterexamplePoint>,
}

/// Eigenvalues `lambda_k = k^2` and coefficients
/// `x_k = k^(-(2 alpha + 1/2)) (ln k)^(-1/2)` (zero at `k = 1`) of the
/// explicit series, for `k = 1..=truncation`.
pub fn counterexample_coefficients(alpha: f64, truncation: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if alpha < 1.0 {
        return Err(Error::TheoremHypothesis(format!(
            "counterexample series needs alpha >= 1, got {alpha}"
        )));
    }
    if truncation < 1000 {
        return Err(Error::InvalidParameter(format!(
            "counterexample needs a truncation of at least 1000, got {truncation}"
        )));
    }
    let mut eigenvalues = Vec::with_capacity(truncation);
    let mut coefficients = Vec::with_capacity(truncation);
    for k in 1..=truncation {
        let kf = k as f64;
        eigenvalues.push(kf * kf);
        if k == 1 {
            coefficients.push(0.0);
        } else {
            coefficients.push(kf.powf(-(2.0 * alpha + 0.5)) / kf.ln().sqrt());
        }
    }
    Ok((eigenvalues, coefficients))
}

/// The explicit diagonal series with `A = B`, `lambda_k = k^2`, and
/// coefficients `x_k = k^(-(2 alpha + 1/2)) (ln k)^(-1/2)`:
/// its scaled energy error `n^(2 alpha - 1) ||x - x_n||_+` stays below the
/// closed-form envelope `1 / sqrt((4 alpha - 2) ln(n+1))` and decreases,
/// while the membership sums `sum 1/(k ln k)` diverge — the decay rate
/// alone does not certify membership in the domain of `B^alpha`.
///
/// Tail sums are accumulated from the largest index downward so the many
/// tiny terms are not absorbed into an already-large partial sum.
pub fn counterexample(alpha: f64, truncation: usize) -> Result<CounterexampleReport> {
    let (eigenvalues, coefficients) = counterexample_coefficients(alpha, truncation)?;

    // tail[n] = sum_(k > n) lambda_k x_k^2 = ||x - x~_n|||^2 in the
    // B-energy norm; with A = B the Ritz solution is the truncation.
    let n_max = 1000.min(truncation / 10);
    let mut tails = vec![0.0_f64; n_max + 1];
    let mut acc = 0.0_f64;
    for k in (n_max + 1..=truncation).rev() {
        let c = coefficients[k - 1];
        acc += eigenvalues[k - 1] * c * c;
    }
    tails[n_max] = acc;
    for n in (0..n_max).rev() {
        let c = coefficients[n]; // mode k = n + 1
        tails[n] = tails[n + 1] + eigenvalues[n] * c * c;
    }

    let mut partial_sums = Vec::new();
    let mut running = 0.0_f64;
    let checkpoints = [truncation / 100, truncation / 10, truncation];
    for k in 2..=truncation {
        let kf = k as f64;
        running += 1.0 / (kf * kf.ln());
        if checkpoints.contains(&k) {
            partial_sums.push((k, running));
        }
    }

    let mut rate = Vec::new();
    for n in 10..=n_max {
        let nf = n as f64;
        let error_sq = tails[n];
        let closed_form_bound_sq =
            1.0 / ((4.0 * alpha - 2.0) * nf.powf(4.0 * alpha - 2.0) * (nf + 1.0).ln());
        let scaled_error = nf.powf(2.0 * alpha - 1.0) * error_sq.sqrt();
        let scaled_bound = 1.0 / ((4.0 * alpha - 2.0) * (nf + 1.0).ln()).sqrt();
        rate.push(CounterexamplePoint { n, error_sq, closed_form_bound_sq, scaled_error, scaled_bound });
    }

    Ok(CounterexampleReport { alpha, truncation, partial_sums, rate })
}

/// Result of [`smoothness_from_rate`].
#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub alpha: f64,
    /// Sup-ratio constant fitted on the full decay data:
    /// least `c` with `e_n <= c omega(1/lambda_(n+1)) / lambda_(n+1)^(alpha-1/2)`.
    pub fitted_c: f64,
    /// Same fit restricted to the first half of the decay data.
    pub fitted_c_first_half: f64,
    /// `fitted_c <= 1.2 * fitted_c_first_half`: the fitted constant does
    /// not keep growing with the range, i.e. the decay hypothesis holds
    /// with a genuine constant rather than a drifting one.
    pub hypothesis_stable: bool,
    /// `(M, sum_(k <= M) lambda_k^(2 alpha) x_k^2)` at `M in {N/4, N/2, N}`.
    pub partial_sums: Vec<(usize, f64)>,
    /// Consecutive growth ratios of the partial sums.
    pub growth_ratios: Vec<f64>,
    /// All growth ratios below `1.05`.
    pub membership_accepted: bool,
    /// `hypothesis_stable && membership_accepted`.
    pub confirmed: bool,
}

/// Test whether measured decay data certifies membership of the solution
/// in the domain of `B^alpha`.
///
/// Two independent diagnostics must both pass:
///
/// 1. the decay hypothesis
///    `e_n <= c omega(1/lambda_(n+1)) / lambda_(n+1)^(alpha - 1/2)` is
///    fitted by its sup ratio; the fit must be *stable* — refitting on the
///    first half of the data must give at least `fitted_c / 1.2`.  A ratio
///    sequence that keeps growing (as in [`counterexample`], where it grows
///    like `n / sqrt(ln n)`) fails here even though every finite prefix
///    admits some constant;
/// 2. the membership sums `sum_(k <= M) lambda_k^(2 alpha) x_k^2` must have
///    stopped growing: consecutive ratios below `1.05` across
///    `M in {N/4, N/2, N}`.  A log-log-divergent series can creep below
///    this threshold at practical truncations, which is why diagnostic 1
///    is required as well.
///
/// `decay` holds `(n, e_n)` pairs with `e_n = ||x - x_n||_+`; at least 8
/// points are required.  `eigenvalues` and `solution` describe the
/// diagonal model (`lambda_k`, `x_k`), `k = 1..=N`.
pub fn smoothness_from_rate(
    eigenvalues: &[f64],
    solution: &[f64],
    decay: &[(usize, f64)],
    omega: &ModulusOfContinuity,
    alpha: f64,
) -> Result<SmoothnessReport> {
    if alpha <= 1.0 {
        return Err(Error::TheoremHypothesis(format!(
            "rate-to-smoothness test needs alpha > 1, got {alpha}"
        )));
    }
    omega.check_conditions()?;
    if decay.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "need at least 8 decay points, got {}",
            decay.len()
        )));
    }
    if eigenvalues.len() != solution.len() {
        return Err(Error::DimensionMismatch {
            expected: eigenvalues.len(),
            got: solution.len(),
        });
    }
    if eigenvalues.is_empty() || eigenvalues[0] <= 0.0 {
        return Err(Error::InvalidParameter("eigenvalues must be positive".into()));
    }

    let mut points: Vec<(usize, f64)> = decay.to_vec();
    points.sort_by_key(|&(n, _)| n);

    let mut ratios = Vec::with_capacity(points.len());
    for &(n, e_n) in &points {
        if n >= eigenvalues.len() {
            return Err(Error::InvalidParameter(format!(
                "decay point n = {n} has no eigenvalue lambda_(n+1) within the truncation"
            )));
        }
        let lam = eigenvalues[n];
        let envelope = omega.eval(1.0 / lam) / lam.powf(alpha - 0.5);
        if !(envelope > 0.0) {
            return Err(Error::BoundDegenerate(lam));
        }
        ratios.push(e_n / envelope);
    }
    let fitted_c = ratios.iter().cloned().fold(0.0_f64, f64::max);
    let half = ratios.len() / 2;
    let fitted_c_first_half = ratios[..half].iter().cloned().fold(0.0_f64, f64::max);
    let hypothesis_stable = if fitted_c_first_half > 0.0 {
        fitted_c <= 1.2 * fitted_c_first_half
    } else {
        fitted_c == 0.0
    };

    let n_modes = eigenvalues.len();
    let checkpoints = [n_modes / 4, n_modes / 2, n_modes];
    let mut partial_sums = Vec::new();
    let mut running = 0.0_f64;
    for k in 1..=n_modes {
        let x = solution[k - 1];
        running += eigenvalues[k - 1].powf(2.0 * alpha) * x * x;
        if checkpoints.contains(&k) {
            partial_sums.push((k, running));
        }
    }
    let mut growth_ratios = Vec::new();
    for w in partial_sums.windows(2) {
        let (prev, cur) = (w[0].1, w[1].1);
        growth_ratios.push(if prev > 0.0 {
            cur / prev
        } else if cur == 0.0 {
            1.0
        } else {
            f64::INFINITY
        });
    }
    let membership_accepted = growth_ratios.iter().all(|&r| r < 1.05);

    Ok(SmoothnessReport {
        alpha,
        fitted_c,
        fitted_c_first_half,
        hypothesis_stable,
        partial_sums,
        growth_ratios,
        membership_accepted,
        confirmed: hypothesis_stable && membership_accepted,
    })
}
