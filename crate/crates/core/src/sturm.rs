//! A concrete Sturm–Liouville instance on `[0, pi]`.
//!
//! The operator `A x = -x'' + q(t) x` with Neumann conditions
//! `x'(0) = x'(pi) = 0` and a positive potential `q` is compared against
//! the reference operator `B x = -x'' + x` with the same conditions.  `B`
//! diagonalizes in the cosine basis
//!
//! ```text
//! e_0 = (1/pi)^(1/2),  e_k = (2/pi)^(1/2) cos(kt),  lambda_k = k^2 + 1,
//! ```
//!
//! and the Gram entries of `A` reduce to
//! `a_{jk} = j^2 delta_{jk} + (q e_j, e_k)` where the potential term is a
//! pair of cosine transforms of `q`:
//! `(q e_j, e_k) = n_j n_k [J(|j-k|) + J(j+k)] / 2`,
//! `J(l) = int_0^pi q(t) cos(lt) dt`.  When `q` is itself a finite cosine
//! polynomial the `J(l)` are exact rational multiples of its coefficients;
//! otherwise they are computed by a composite midpoint rule on `2^14`
//! panels (spectrally accurate for these smooth even integrands) and
//! cross-checked against the half grid.
//!
//! The sine basis `e_k = (2/pi)^(1/2) sin(kt)` with `lambda_k = k^2`
//! (Dirichlet conditions) is also provided; it is the model underlying the
//! explicit counterexample series in [`crate::ritz`].
//!
//! [`BoundaryValueProblem::rate_experiment`] measures the convergence of
//! the Ritz solutions in the norm `||B z||` over a grid of subspace
//! dimensions, fits the log-log slope, and tests the surrogate of the
//! `o(1/n^(2k+1))` rate claim: `n^(2k+1) e_n` decreasing over the last
//! half of the grid.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quadrature::self_checked_midpoint;
use crate::ritz::RitzProblem;
use crate::spectrum::SpectrumModel;

/// Grid size for validating a potential (positivity, cosine agreement).
const POTENTIAL_GRID: usize = 10_000;

/// Panels of the composite midpoint rule used for spectral projections.
const QUADRATURE_PANELS: usize = 1 << 14;

/// Agreement required between the full- and half-grid quadratures.
const QUADRATURE_TOL: f64 = 1e-9;

/// Gate on the one-sided boundary derivative of manufactured solutions.
const BOUNDARY_TOL: f64 = 1e-8;

/// A finite cosine polynomial `p(t) = sum_m coeffs[m] cos(mt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosinePoly {
    coeffs: Vec<f64>,
}

impl CosinePoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "cosine polynomial needs at least one finite coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().enumerate().map(|(m, &c)| c * (m as f64 * t).cos()).sum()
    }

    /// Product via `cos a cos b = [cos(a+b) + cos(a-b)] / 2`.
    pub fn multiply(&self, other: &CosinePoly) -> CosinePoly {
        let mut out = vec![0.0; self.degree() + other.degree() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let p = a * b / 2.0;
                out[i + j] += p;
                out[i.abs_diff(j)] += p;
            }
        }
        CosinePoly { coeffs: out }
    }

    /// `-p''`: the coefficient of `cos(mt)` picks up `m^2`.
    pub fn negated_second_derivative(&self) -> CosinePoly {
        let coeffs =
            self.coeffs.iter().enumerate().map(|(m, &c)| (m * m) as f64 * c).collect();
        CosinePoly { coeffs }
    }

    pub fn add(&self, other: &CosinePoly) -> CosinePoly {
        let mut coeffs = vec![0.0; self.coeffs.len().max(other.coeffs.len())];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        CosinePoly { coeffs }
    }

    /// Express the polynomial in the orthonormal Neumann basis:
    /// `p = xi_0 e_0 + sum xi_m e_m` with `xi_0 = c_0 sqrt(pi)`,
    /// `xi_m = c_m sqrt(pi/2)`.
    pub fn to_basis_coefficients(&self, n: usize) -> Result<Vec<f64>> {
        if self.degree() >= n {
            return Err(Error::TruncationTooSmall(format!(
                "cosine polynomial of degree {} does not fit in {n} modes",
                self.degree()
            )));
        }
        let mut xi = vec![0.0; n];
        for (m, &c) in self.coeffs.iter().enumerate() {
            xi[m] = if m == 0 { c * PI.sqrt() } else { c * (PI / 2.0).sqrt() };
        }
        Ok(xi)
    }

    /// Inverse of [`CosinePoly::to_basis_coefficients`].
    pub fn from_basis_coefficients(xi: &[f64]) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidParameter("empty coefficient vector".into()));
        }
        let coeffs = xi
            .iter()
            .enumerate()
            .map(|(m, &v)| if m == 0 { v / PI.sqrt() } else { v * (2.0 / PI).sqrt() })
            .collect();
        Ok(Self { coeffs })
    }
}

/// A validated potential `q(t) > 0` on `[0, pi]`, optionally carrying its
/// exact finite cosine expansion, plus the declared smoothness order `k`
/// (meaning `q` is `C^(2k)` with vanishing odd derivatives at both ends;
/// the first of those conditions is spot-checked numerically).
#[derive(Clone)]
pub struct Potential {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    cosine: Option<CosinePoly>,
    smoothness_order: u32,
}

impl fmt::Debug for Potential {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("Potential")
            .field("cosine", &self.cosine)
            .field("smoothness_order", &self.smoothness_order)
            .finish()
    }
}

impl Potential {
    pub fn from_function(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        smoothness_order: u32,
    ) -> Result<Self> {
        let potential = Self { f: Arc::new(f), cosine: None, smoothness_order };
        potential.validate()?;
        Ok(potential)
    }

    pub fn from_cosine(poly: CosinePoly, smoothness_order: u32) -> Result<Self> {
        let p = poly.clone();
        let potential = Self {
            f: Arc::new(move |t| p.eval(t)),
            cosine: Some(poly),
            smoothness_order,
        };
        potential.validate()?;
        Ok(potential)
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::from_cosine(CosinePoly::constant(c), 8)
    }

    fn validate(&self) -> Result<()> {
        let mut min = f64::INFINITY;
        for i in 0..=POTENTIAL_GRID {
            let t = PI * i as f64 / POTENTIAL_GRID as f64;
            let v = (self.f)(t);
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "potential evaluates to {v} at t = {t}"
                )));
            }
            min = min.min(v);
            if let Some(ref poly) = self.cosine {
                let p = poly.eval(t);
                if (p - v).abs() > 1e-10 * (1.0 + v.abs()) {
                    return Err(Error::InvalidParameter(format!(
                        "cosine expansion disagrees with the potential at t = {t}: {p} vs {v}"
                    )));
                }
            }
        }
        if min <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "potential must be strictly positive, found minimum {min}"
            )));
        }
        if self.smoothness_order >= 1 {
            for (at, sign) in [(0.0, 1.0), (PI, -1.0)] {
                let d = one_sided_derivative(self.f.as_ref(), at, sign);
                if d.abs() > 1e-6 {
                    return Err(Error::BoundaryCondition { at, value: d });
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn cosine(&self) -> Option<&CosinePoly> {
        self.cosine.as_ref()
    }

    pub fn smoothness_order(&self) -> u32 {
        self.smoothness_order
    }
}

/// Second-order one-sided derivative at `at`, stepping inward with the
/// given sign.
fn one_sided_derivative(f: &(dyn Fn(f64) -> f64 + Send + Sync), at: f64, sign: f64) -> f64 {
    let h = 1e-5 * sign;
    (-3.0 * f(at) + 4.0 * f(at + h) - f(at + 2.0 * h)) / (2.0 * h)
}

/// The two eigenbases of the reference operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `e_0 = (1/pi)^(1/2)`, `e_k = (2/pi)^(1/2) cos(kt)`;
    /// `lambda_k = k^2 + 1` (`B = -d^2/dt^2 + 1`, `x'(0) = x'(pi) = 0`).
    NeumannCosine,
    /// `e_k = (2/pi)^(1/2) sin(kt)`, `k >= 1`; `lambda_k = k^2`
    /// (`B = -d^2/dt^2`, `x(0) = x(pi) = 0`).
    DirichletSine,
}

enum RhsSource {
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Orthonormal-basis coefficients, at most `truncation` of them.
    Coefficients(Vec<f64>),
    /// `rhs = gram * exact`, computed at assembly: the problem manufactured
    /// from its exact solution inside the truncated model.
    FromExact,
}

impl fmt::Debug for RhsSource {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhsSource::Function(_) => fm.write_str("Function(..)"),
            RhsSource::Coefficients(v) => fm.debug_tuple("Coefficients").field(&v.len()).finish(),
            RhsSource::FromExact => fm.write_str("FromExact"),
        }
    }
}

/// A boundary value problem `-x'' + q x = y` over one of the two bases,
/// truncated to `N` modes.
#[derive(Debug)]
pub struct BoundaryValueProblem {
    potential: Potential,
    basis: BasisKind,
    truncation: usize,
    rhs: RhsSource,
    exact: Option<Vec<f64>>,
}

impl BoundaryValueProblem {
    fn base(
        potential: Potential,
        basis: BasisKind,
        truncation: usize,
        rhs: RhsSource,
        exact: Option<Vec<f64>>,
    ) -> Result<Self> {
        if truncation < 2 {
            return Err(Error::TruncationTooSmall(format!(
                "need at least 2 modes, got {truncation}"
            )));
        }
        Ok(Self { potential, basis, truncation, rhs, exact })
    }

    /// Neumann problem with a right-hand side given as a function.
    pub fn neumann(
        potential: Potential,
        truncation: usize,
        rhs: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::base(potential, BasisKind::NeumannCosine, truncation, RhsSource::Function(Arc::new(rhs)), None)
    }

    /// Neumann problem with the right-hand side given by its coefficients
    /// in the orthonormal cosine basis.
    pub fn neumann_with_coefficients(
        potential: Potential,
        truncation: usize,
        rhs: Vec<f64>,
    ) -> Result<Self> {
        if rhs.len() > truncation {
            return Err(Error::TruncationTooSmall(format!(
                "{} rhs coefficients exceed {truncation} modes",
                rhs.len()
            )));
        }
        Self::base(potential, BasisKind::NeumannCosine, truncation, RhsSource::Coefficients(rhs), None)
    }

    /// Dirichlet problem with a right-hand side given as a function.
    pub fn dirichlet(
        potential: Potential,
        truncation: usize,
        rhs: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::base(potential, BasisKind::DirichletSine, truncation, RhsSource::Function(Arc::new(rhs)), None)
    }

    /// Manufacture a Neumann problem from a cosine-polynomial solution:
    /// `y = -x'' + q x`, formed symbolically when `q` carries a cosine
    /// expansion (and through the Gram matrix otherwise).  Cosine
    /// polynomials satisfy `x'(0) = x'(pi) = 0` identically.
    pub fn manufacture_neumann_cosine(
        potential: Potential,
        truncation: usize,
        x: &CosinePoly,
    ) -> Result<Self> {
        let exact = x.to_basis_coefficients(truncation)?;
        match potential.cosine() {
            Some(q) => {
                let y = x.negated_second_derivative().add(&q.multiply(x));
                if y.degree() >= truncation {
                    return Err(Error::TruncationTooSmall(format!(
                        "manufactured right-hand side has degree {}, beyond {truncation} modes",
                        y.degree()
                    )));
                }
                let rhs = y.to_basis_coefficients(truncation)?;
                Self::base(
                    potential,
                    BasisKind::NeumannCosine,
                    truncation,
                    RhsSource::Coefficients(rhs),
                    Some(exact),
                )
            }
            None => Self::base(
                potential,
                BasisKind::NeumannCosine,
                truncation,
                RhsSource::FromExact,
                Some(exact),
            ),
        }
    }

    /// Manufacture a Neumann problem from exact solution coefficients in
    /// the orthonormal basis; the right-hand side is `gram * exact`, i.e.
    /// the manufactured data lives inside the truncated model.
    pub fn manufacture_neumann_coefficients(
        potential: Potential,
        truncation: usize,
        xi: &[f64],
    ) -> Result<Self> {
        if xi.len() > truncation {
            return Err(Error::TruncationTooSmall(format!(
                "{} solution coefficients exceed {truncation} modes",
                xi.len()
            )));
        }
        let mut exact = xi.to_vec();
        exact.resize(truncation, 0.0);
        Self::base(
            potential,
            BasisKind::NeumannCosine,
            truncation,
            RhsSource::FromExact,
            Some(exact),
        )
    }

    /// Manufacture a Neumann problem from a twice-differentiable solution
    /// function.  The boundary derivatives must vanish (checked by a
    /// one-sided second-order difference, gate `1e-8`); the solution is
    /// then projected onto the basis and the right-hand side formed as
    /// `gram * exact`.
    pub fn manufacture_neumann_function(
        potential: Potential,
        truncation: usize,
        x: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        for (at, sign) in [(0.0, 1.0), (PI, -1.0)] {
            let d = one_sided_derivative(&x, at, sign);
            if d.abs() > BOUNDARY_TOL {
                return Err(Error::BoundaryCondition { at, value: d });
            }
        }
        let mut exact = Vec::with_capacity(truncation);
        for j in 0..truncation {
            let w = j as f64;
            let norm = neumann_norm(j);
            let coeff = self_checked_midpoint(
                &|t| x(t) * norm * (w * t).cos(),
                0.0,
                PI,
                QUADRATURE_PANELS,
                QUADRATURE_TOL,
            )?;
            exact.push(coeff);
        }
        Self::base(
            potential,
            BasisKind::NeumannCosine,
            truncation,
            RhsSource::FromExact,
            Some(exact),
        )
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    /// Eigenvalues of the reference operator in this basis.
    pub fn spectrum(&self) -> Result<Arc<SpectrumModel>> {
        let lams: Vec<f64> = match self.basis {
            BasisKind::NeumannCosine => {
                (0..self.truncation).map(|k| (k * k) as f64 + 1.0).collect()
            }
            BasisKind::DirichletSine => {
                (1..=self.truncation).map(|k| (k * k) as f64).collect()
            }
        };
        Ok(Arc::new(SpectrumModel::new(lams)?))
    }

    /// Cosine transforms `J(l) = int_0^pi q cos(lt) dt` for
    /// `l = 0..=l_max`: exact from the cosine expansion when available,
    /// otherwise by the self-checked midpoint rule.
    fn potential_transforms(&self, l_max: usize) -> Result<Vec<f64>> {
        if let Some(poly) = self.potential.cosine() {
            let c = poly.coefficients();
            return Ok((0..=l_max)
                .map(|l| {
                    let coeff = c.get(l).copied().unwrap_or(0.0);
                    if l == 0 { coeff * PI } else { coeff * PI / 2.0 }
                })
                .collect());
        }
        let q = self.potential.f.clone();
        (0..=l_max)
            .map(|l| {
                let w = l as f64;
                self_checked_midpoint(
                    &|t| q(t) * (w * t).cos(),
                    0.0,
                    PI,
                    QUADRATURE_PANELS,
                    QUADRATURE_TOL,
                )
            })
            .collect()
    }

    /// Assemble the Gram matrix, right-hand side, and reference spectrum
    /// into a [`RitzProblem`].
    pub fn assemble(&self) -> Result<RitzProblem> {
        let n = self.truncation;
        let spectrum = self.spectrum()?;
        let l_max = match self.basis {
            BasisKind::NeumannCosine => 2 * (n - 1),
            BasisKind::DirichletSine => 2 * n,
        };
        let j_table = self.potential_transforms(l_max)?;

        let mut gram = DMatrix::zeros(n, n);
        match self.basis {
            BasisKind::NeumannCosine => {
                for j in 0..n {
                    for k in j..n {
                        let pot = neumann_norm(j) * neumann_norm(k) / 2.0
                            * (j_table[j.abs_diff(k)] + j_table[j + k]);
                        let stiff = if j == k { (j * j) as f64 } else { 0.0 };
                        gram[(j, k)] = stiff + pot;
                        gram[(k, j)] = gram[(j, k)];
                    }
                }
            }
            BasisKind::DirichletSine => {
                for j in 0..n {
                    for k in j..n {
                        let (wj, wk) = (j + 1, k + 1);
                        let pot = (j_table[wj.abs_diff(wk)] - j_table[wj + wk]) / PI;
                        let stiff = if j == k { (wj * wj) as f64 } else { 0.0 };
                        gram[(j, k)] = stiff + pot;
                        gram[(k, j)] = gram[(j, k)];
                    }
                }
            }
        }

        let rhs = match &self.rhs {
            RhsSource::Coefficients(v) => {
                let mut full = v.clone();
                full.resize(n, 0.0);
                DVector::from_vec(full)
            }
            RhsSource::Function(f) => {
                let f = f.clone();
                let mut out = Vec::with_capacity(n);
                for j in 0..n {
                    let coeff = match self.basis {
                        BasisKind::NeumannCosine => {
                            let w = j as f64;
                            let norm = neumann_norm(j);
                            self_checked_midpoint(
                                &|t| f(t) * norm * (w * t).cos(),
                                0.0,
                                PI,
                                QUADRATURE_PANELS,
                                QUADRATURE_TOL,
                            )?
                        }
                        BasisKind::DirichletSine => {
                            let w = (j + 1) as f64;
                            let norm = (2.0 / PI).sqrt();
                            self_checked_midpoint(
                                &|t| f(t) * norm * (w * t).sin(),
                                0.0,
                                PI,
                                QUADRATURE_PANELS,
                                QUADRATURE_TOL,
                            )?
                        }
                    };
                    out.push(coeff);
                }
                DVector::from_vec(out)
            }
            RhsSource::FromExact => {
                let exact = self.exact.as_ref().expect("FromExact carries exact coefficients");
                &gram * DVector::from_column_slice(exact)
            }
        };

        let exact = self.exact.as_ref().map(|v| DVector::from_column_slice(v));
        RitzProblem::new(spectrum, gram, rhs, exact)
    }

    /// Convergence-rate experiment in the norm `||B z||` over a grid of
    /// subspace dimensions.
    ///
    /// Requires at least 6 strictly increasing dimensions with
    /// `2 * max(n_grid) <= truncation` (the default working margin is
    /// `truncation >= 16 * max(n_grid)`).  Errors that have fallen to the
    /// truncation/round-off floor are flagged and excluded from the
    /// log-log slope fit and the surrogate monotonicity check.
    pub fn rate_experiment(&self, k: u32, n_grid: &[usize]) -> Result<RateReport> {
        if n_grid.len() < 6 {
            return Err(Error::InsufficientData(format!(
                "rate experiment needs at least 6 grid points, got {}",
                n_grid.len()
            )));
        }
        if n_grid.windows(2).any(|w| w[1] <= w[0]) || n_grid[0] == 0 {
            return Err(Error::InvalidParameter("n grid must be strictly increasing".into()));
        }
        let n_max = *n_grid.last().expect("nonempty grid");
        if 2 * n_max > self.truncation {
            return Err(Error::TruncationTooSmall(format!(
                "truncation {} cannot support subspace dimension {n_max}; need at least 2x",
                self.truncation
            )));
        }

        let problem = self.assemble()?;
        let size = problem.dimension();
        let exact = problem.exact_solution()?.clone();
        let scale = problem.b_operator_norm(&exact);

        // Guard: movement of the reference solution when the truncation
        // halves, in the experiment's own norm.
        let full = problem.solve(size)?;
        let half = problem.solve(size / 2)?;
        let mut guard_diff = DVector::zeros(size);
        for i in 0..size {
            let a = full.coefficients[i];
            let b = if i < size / 2 { half.coefficients[i] } else { 0.0 };
            guard_diff[i] = a - b;
        }
        let guard = problem.b_operator_norm(&guard_diff);

        let floor_threshold = 10.0 * guard.max(1e-12 * scale.max(1.0));
        let mut entries = Vec::with_capacity(n_grid.len());
        for &n in n_grid {
            let sol = problem.solve(n)?;
            let mut diff = exact.clone();
            for i in 0..n {
                diff[i] -= sol.coefficients[i];
            }
            let error = problem.b_operator_norm(&diff);
            let surrogate = (n as f64).powi(2 * k as i32 + 1) * error;
            let floored = error <= floor_threshold;
            entries.push(RateEntry { n, error, surrogate, floored });
        }

        let window: Vec<&RateEntry> =
            entries[entries.len() / 2..].iter().filter(|e| !e.floored).collect();
        let floor_reached = entries.iter().any(|e| e.floored);

        let fitted_slope = if window.len() >= 2 {
            let xs: Vec<f64> = window.iter().map(|e| (e.n as f64).ln()).collect();
            let ys: Vec<f64> = window.iter().map(|e| e.error.ln()).collect();
            let xm = xs.iter().sum::<f64>() / xs.len() as f64;
            let ym = ys.iter().sum::<f64>() / ys.len() as f64;
            let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
            let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
            Some(num / den)
        } else {
            None
        };

        let surrogate_decreasing = window
            .windows(2)
            .all(|w| w[1].surrogate < w[0].surrogate * (1.0 + 1e-12));

        let nonfloored_min = entries
            .iter()
            .filter(|e| !e.floored)
            .map(|e| e.error)
            .fold(f64::INFINITY, f64::min);
        // A floor is benign only when the guard itself sits at round-off
        // scale (reference solution converged); a large guard flooring
        // every entry means the truncation starves the whole experiment.
        let guard_ok = if guard <= 1e-10 * scale.max(1.0) {
            true
        } else if nonfloored_min.is_finite() {
            guard < 0.01 * nonfloored_min
        } else {
            false
        };

        Ok(RateReport {
            smoothness_order: k,
            entries,
            fitted_slope,
            surrogate_decreasing,
            floor_reached,
            guard,
            guard_ok,
        })
    }
}

/// Normalization constant of the `j`-th Neumann basis function.
fn neumann_norm(j: usize) -> f64 {
    if j == 0 { (1.0 / PI).sqrt() } else { (2.0 / PI).sqrt() }
}

/// One grid point of a rate experiment.
#[derive(Debug, Clone)]
pub struct RateEntry {
    pub n: usize,
    /// `||B (x - x_n)||`.
    pub error: f64,
    /// `n^(2k+1) * error`.
    pub surrogate: f64,
    /// Error at the truncation/round-off floor; excluded from fits.
    pub floored: bool,
}

/// Result of [`BoundaryValueProblem::rate_experiment`].
#[derive(Debug, Clone)]
pub struct RateReport {
    pub smoothness_order: u32,
    pub entries: Vec<RateEntry>,
    /// Least-squares log-log slope over the non-floored entries of the
    /// last half of the grid; `None` when fewer than two such entries.
    pub fitted_slope: Option<f64>,
    /// `n^(2k+1) e_n` decreasing over the same window.
    pub surrogate_decreasing: bool,
    pub floor_reached: bool,
    /// `||B (x_N - x_(N/2))||`.
    pub guard: f64,
    /// `guard < 1%` of the smallest non-floored error; when every entry
    /// is floored the guard passes only if it sits at round-off scale.
    pub guard_ok: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ritz::counterexample_coefficients;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn cosine_potential() -> Potential {
        // q = 2 + cos 2t.
        Potential::from_cosine(CosinePoly::new(vec![2.0, 0.0, 1.0]).unwrap(), 3).unwrap()
    }

    #[test]
    fn cosine_poly_product_and_derivative() {
        // (2 + cos 2t) * cos t = 2.5 cos t + 0.5 cos 3t.
        let q = CosinePoly::new(vec![2.0, 0.0, 1.0]).unwrap();
        let x = CosinePoly::new(vec![0.0, 1.0]).unwrap();
        let p = q.multiply(&x);
        assert_eq!(p.coefficients(), &[0.0, 2.5, 0.0, 0.5]);
        let d = x.negated_second_derivative();
        assert_eq!(d.coefficients(), &[0.0, 1.0]);
        for t in [0.0, 0.3, 1.7, PI] {
            assert_relative_eq!(p.eval(t), q.eval(t) * x.eval(t), max_relative = 1e-12);
        }
    }

    #[test]
    fn basis_coefficient_round_trip() {
        let p = CosinePoly::new(vec![1.5, -0.25, 0.0, 2.0]).unwrap();
        let xi = p.to_basis_coefficients(8).unwrap();
        let back = CosinePoly::from_basis_coefficients(&xi).unwrap();
        for (a, b) in p.coefficients().iter().zip(back.coefficients()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn potential_rejects_nonpositive_and_asymmetric_candidates() {
        assert!(Potential::from_function(|t| t.cos(), 0).is_err(), "cos t dips negative");
        // sin-type potential is positive but violates the vanishing
        // boundary derivative required from order 1 on.
        assert!(matches!(
            Potential::from_function(|t| 2.0 + t.sin(), 1),
            Err(Error::BoundaryCondition { .. })
        ));
        assert!(Potential::from_function(|t| 2.0 + t.sin(), 0).is_ok());
    }

    #[test]
    fn potential_rejects_mismatched_expansion() {
        let poly = CosinePoly::new(vec![2.0, 0.0, 0.5]).unwrap();
        let potential = Potential {
            f: Arc::new(|t: f64| 2.0 + (2.0 * t).cos()),
            cosine: Some(poly),
            smoothness_order: 0,
        };
        assert!(potential.validate().is_err());
    }

    #[test]
    fn constant_potential_makes_the_two_operators_coincide() {
        let bvp = BoundaryValueProblem::neumann(Potential::constant(1.0).unwrap(), 16, |_| 1.0)
            .unwrap();
        let problem = bvp.assemble().unwrap();
        let lams = problem.spectrum().eigenvalues().to_vec();
        for (j, &l) in lams.iter().enumerate() {
            assert_relative_eq!(l, (j * j) as f64 + 1.0, max_relative = 1e-15);
            assert_relative_eq!(problem.gram()[(j, j)], l, max_relative = 1e-12);
        }
        for j in 0..16 {
            for k in 0..16 {
                if j != k {
                    assert_abs_diff_eq!(problem.gram()[(j, k)], 0.0, epsilon = 1e-12);
                }
            }
        }
        let (c1, c2) = problem.equivalence_constants().unwrap();
        assert_abs_diff_eq!(c1, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(c2, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn cosine_potential_matrix_element() {
        // (q e_1, e_1) = 2.5 for q = 2 + cos 2t.
        let bvp = BoundaryValueProblem::neumann(cosine_potential(), 8, |_| 1.0).unwrap();
        let problem = bvp.assemble().unwrap();
        assert_relative_eq!(problem.gram()[(1, 1)] - 1.0, 2.5, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_assembly_matches_identity_assembly() {
        let exact = BoundaryValueProblem::neumann(cosine_potential(), 12, |t| t.cos()).unwrap();
        let numeric = BoundaryValueProblem::neumann(
            Potential::from_function(|t| 2.0 + (2.0 * t).cos(), 3).unwrap(),
            12,
            |t| t.cos(),
        )
        .unwrap();
        let a = exact.assemble().unwrap();
        let b = numeric.assemble().unwrap();
        for j in 0..12 {
            for k in 0..12 {
                assert_abs_diff_eq!(a.gram()[(j, k)], b.gram()[(j, k)], epsilon = 1e-9);
            }
            assert_abs_diff_eq!(a.rhs()[j], b.rhs()[j], epsilon = 1e-9);
        }
    }

    #[test]
    fn manufactured_cosine_solution_gives_expected_rhs() {
        // q = 2 + cos 2t, x = cos t -> y = 3.5 cos t + 0.5 cos 3t.
        let x = CosinePoly::new(vec![0.0, 1.0]).unwrap();
        let bvp = BoundaryValueProblem::manufacture_neumann_cosine(cosine_potential(), 8, &x)
            .unwrap();
        let problem = bvp.assemble().unwrap();
        let expected_y = CosinePoly::new(vec![0.0, 3.5, 0.0, 0.5]).unwrap();
        let eta = expected_y.to_basis_coefficients(8).unwrap();
        for j in 0..8 {
            assert_abs_diff_eq!(problem.rhs()[j], eta[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn manufactured_constant_solution_reproduces_the_potential() {
        // x = 1 -> y = q.
        let x = CosinePoly::constant(1.0);
        let bvp = BoundaryValueProblem::manufacture_neumann_cosine(cosine_potential(), 8, &x)
            .unwrap();
        let problem = bvp.assemble().unwrap();
        let q_as_rhs = cosine_potential().cosine().unwrap().to_basis_coefficients(8).unwrap();
        for j in 0..8 {
            assert_abs_diff_eq!(problem.rhs()[j], q_as_rhs[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn full_solve_recovers_manufactured_solution() {
        let x = CosinePoly::new(vec![0.3, 1.0, 0.0, -0.2]).unwrap();
        let bvp = BoundaryValueProblem::manufacture_neumann_cosine(cosine_potential(), 32, &x)
            .unwrap();
        let problem = bvp.assemble().unwrap();
        let sol = problem.solve(32).unwrap();
        let xi = x.to_basis_coefficients(32).unwrap();
        for j in 0..32 {
            assert_abs_diff_eq!(sol.coefficients[j], xi[j], epsilon = 1e-8);
        }
    }

    #[test]
    fn function_manufacture_agrees_with_cosine_manufacture() {
        let via_fn = BoundaryValueProblem::manufacture_neumann_function(
            cosine_potential(),
            16,
            |t: f64| t.cos() + 0.5,
        )
        .unwrap();
        let x = CosinePoly::new(vec![0.5, 1.0]).unwrap();
        let via_poly =
            BoundaryValueProblem::manufacture_neumann_cosine(cosine_potential(), 16, &x).unwrap();
        let a = via_fn.assemble().unwrap();
        let b = via_poly.assemble().unwrap();
        let ea = a.exact_solution().unwrap();
        let eb = b.exact_solution().unwrap();
        for j in 0..16 {
            assert_abs_diff_eq!(ea[j], eb[j], epsilon = 1e-9);
        }
    }

    #[test]
    fn manufacture_rejects_sloped_boundary() {
        let r = BoundaryValueProblem::manufacture_neumann_function(cosine_potential(), 8, |t| t);
        assert!(matches!(r, Err(Error::BoundaryCondition { .. })));
    }

    #[test]
    fn dirichlet_spectrum_is_squares() {
        let bvp = BoundaryValueProblem::dirichlet(cosine_potential(), 64, |t| t.sin()).unwrap();
        let s = bvp.spectrum().unwrap();
        let (counter_lams, _) = counterexample_coefficients(1.0, 1000).unwrap();
        for k in 0..64 {
            assert_relative_eq!(s.eigenvalue(k), ((k + 1) * (k + 1)) as f64);
            assert_relative_eq!(s.eigenvalue(k), counter_lams[k]);
        }
    }

    #[test]
    fn dirichlet_constant_potential_gram() {
        // q = 1: a_{jk} = (j^2 + 1) delta_{jk} in wave numbers j >= 1.
        let bvp =
            BoundaryValueProblem::dirichlet(Potential::constant(1.0).unwrap(), 8, |t| t.sin())
                .unwrap();
        let p = bvp.assemble().unwrap();
        for j in 0..8 {
            let w = (j + 1) as f64;
            assert_relative_eq!(p.gram()[(j, j)], w * w + 1.0, max_relative = 1e-12);
            for k in 0..8 {
                if k != j {
                    assert_abs_diff_eq!(p.gram()[(j, k)], 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn rate_experiment_flags_polynomial_floor() {
        // x = cos t + 0.05 cos 4t is captured exactly once n > 4.
        let x = CosinePoly::new(vec![0.0, 1.0, 0.0, 0.0, 0.05]).unwrap();
        let bvp = BoundaryValueProblem::manufacture_neumann_cosine(cosine_potential(), 64, &x)
            .unwrap();
        let report = bvp.rate_experiment(1, &[2, 4, 8, 12, 16, 20, 24]).unwrap();
        assert!(report.floor_reached, "exact polynomial capture must hit the floor");
        assert!(report.fitted_slope.is_none(), "no non-floored points remain in the window");
        assert!(report.surrogate_decreasing, "vacuously satisfied");
        assert!(report.guard_ok);
        assert!(!report.entries[0].floored, "n = 2 misses the cos 4t mode");
        assert!(report.entries.iter().all(|e| e.n <= 4 || e.floored));
    }

    #[test]
    fn rate_experiment_validates_grid() {
        let x = CosinePoly::new(vec![0.0, 1.0]).unwrap();
        let bvp = BoundaryValueProblem::manufacture_neumann_cosine(cosine_potential(), 32, &x)
            .unwrap();
        assert!(matches!(
            bvp.rate_experiment(1, &[2, 4, 8]),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            bvp.rate_experiment(1, &[2, 4, 8, 12, 16, 20]),
            Err(Error::TruncationTooSmall(_))
        ));
    }

    #[test]
    fn rate_experiment_sees_power_law_decay() {
        // Solution coefficients (1+m)^-6 give ||B(x - x_n)|| of order
        // n^(-3.5): comfortably inside the k = 1 gate of slope <= -2.7.
        // Truncation at 16x the largest subspace keeps the guard far
        // below 1% of the smallest error (both decay ~ n^(-3.5)).
        let n_modes = 256;
        let xi: Vec<f64> = (0..n_modes).map(|m| ((1 + m) as f64).powi(-6)).collect();
        let bvp = BoundaryValueProblem::manufacture_neumann_coefficients(
            cosine_potential(),
            n_modes,
            &xi,
        )
        .unwrap();
        let report = bvp.rate_experiment(1, &[4, 6, 8, 10, 12, 14, 16]).unwrap();
        assert!(!report.floor_reached);
        let slope = report.fitted_slope.expect("clean decay has a slope");
        assert!(slope <= -2.7, "slope {slope} too shallow");
        assert!(report.surrogate_decreasing, "n^3 e_n must decrease");
        assert!(report.guard_ok, "guard {} too large", report.guard);
    }
}
