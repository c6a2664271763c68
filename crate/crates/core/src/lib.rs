//! Approximation theory in the eigenbasis of a self-adjoint operator with
//! discrete simple spectrum.
//!
//! The crate models a self-adjoint operator `B` by its ordered eigenvalues
//! and represents vectors by their coefficient sequences in the eigenbasis.
//! On top of that diagonal model it provides:
//!
//! * [`spectrum`] — functional calculus `G(B)`, the unitary group
//!   `U(h) = exp(ihB)`, k-th differences, moduli of continuity, best
//!   approximation by spectral projections, and exponential type;
//! * [`approximation`] — Bernstein- and Jackson-type inequality verifiers,
//!   the kernel integral behind the direct bound, and inverse-theorem
//!   envelopes with a constructive dyadic experiment;
//! * [`ritz`] — the Ritz–Galerkin method on coordinate subspaces with
//!   energy-norm error metrics, norm-equivalence constants, sandwich and
//!   a priori bounds, an explicit counterexample series, and a
//!   rate-to-smoothness diagnostic;
//! * [`sturm`] — a concrete Sturm–Liouville realization on `[0, pi]`:
//!   cosine/sine eigenbases, Gram assembly from cosine transforms of the
//!   potential, manufactured solutions, and convergence-rate experiments;
//! * [`quadrature`] — the adaptive and composite quadratures backing the
//!   analytic checks;
//! * [`corpus`] — seeded random vector corpora for sweep tests.

pub mod approximation;
pub mod corpus;
pub mod error;
pub mod quadrature;
pub mod ritz;
pub mod spectrum;
pub mod sturm;

pub use approximation::{
    bernstein_check, big_omega, big_omega_properties, classification_envelope,
    dyadic_approximants, inverse_bound, inverse_theorem_experiment, jackson_check, kernel_check,
    kernel_integral, kernel_lower_bound, envelope_first_term, InequalityReport, InverseRateReport,
    InverseRateSample, ModulusOfContinuity, SLACK_TOLERANCE,
};
pub use corpus::{random_vectors, CorpusParams};
pub use error::{Error, Result};
pub use ritz::{
    counterexample, counterexample_coefficients, smoothness_from_rate, AprioriReport,
    CounterexamplePoint, CounterexampleReport, RitzProblem, RitzSolution, SandwichReport,
    SmoothnessReport,
};
pub use spectrum::{ScalarSymbol, SpectralVector, SpectrumModel};
pub use sturm::{
    BasisKind, BoundaryValueProblem, CosinePoly, Potential, RateEntry, RateReport,
};
