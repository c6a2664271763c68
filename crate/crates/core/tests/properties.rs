//! Property-based invariants of the diagonal spectral model: unitary
//! isometry, agreement of the two difference routes, modulus-of-continuity
//! scaling and vector continuity, projection/best-approximation
//! consistency, power-growth brackets for the exponential type, the kernel
//! bound over random parameters, and energy minimality of Ritz solutions.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use spectral_approx::{kernel_check, RitzProblem, SpectralVector, SpectrumModel};

/// A spectrum with strictly increasing positive eigenvalues together with
/// coefficients of moderate size.
fn arb_vector(max_modes: usize, max_gap: f64) -> impl Strategy<Value = SpectralVector> {
    let modes = 1..=max_modes;
    modes.prop_flat_map(move |m| {
        (
            prop::collection::vec(0.05..max_gap, m),
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), m),
        )
            .prop_map(|(gaps, parts)| {
                let mut lam = 0.0;
                let mut eigenvalues = Vec::with_capacity(gaps.len());
                for g in gaps {
                    lam += g;
                    eigenvalues.push(lam);
                }
                let spectrum = Arc::new(SpectrumModel::new(eigenvalues).expect("increasing"));
                let coeffs = parts.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
                SpectralVector::new(spectrum, coeffs).expect("matching dimensions")
            })
    })
}

proptest! {
    #[test]
    fn unitary_group_is_isometric(x in arb_vector(8, 6.0), h in -20.0..20.0f64) {
        let moved = x.unitary(h);
        prop_assert!(
            (moved.norm() - x.norm()).abs() <= 1e-12 * (1.0 + x.norm()),
            "norm moved from {} to {}",
            x.norm(),
            moved.norm()
        );
    }

    #[test]
    fn difference_routes_agree_to_operator_scale(
        x in arb_vector(8, 6.0),
        k in 0u32..=4,
        h in 0.0..3.0f64,
    ) {
        let direct = x.difference(k, h);
        let binomial = x.difference_binomial(k, h);
        let gap = direct.sub(&binomial).norm();
        // The binomial route loses up to 2^k ||x|| worth of cancellation,
        // so agreement is asserted relative to that operator bound.
        prop_assert!(
            gap <= 1e-12 * 2f64.powi(k as i32) * x.norm() + 1e-15,
            "routes differ by {gap} for k = {k}, h = {h}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn modulus_scaling_bound(
        x in arb_vector(6, 5.0),
        k in 1u32..=3,
        t in 0.01..1.5f64,
        factor_idx in 0usize..4,
    ) {
        // omega_k(c t) <= ceil(c)^k omega_k(t): stretching the step by an
        // integer m multiplies the k-th difference by at most m^k.
        let factor = [0.5, 1.0, 2.0, 3.7][factor_idx];
        let lhs = x.modulus(k, factor * t);
        let rhs = (factor.ceil()).powi(k as i32) * x.modulus(k, t);
        prop_assert!(
            lhs <= rhs * (1.0 + 1e-6) + 1e-12 * x.norm(),
            "omega_{k}({} * t) = {lhs} exceeds scaled bound {rhs}",
            factor
        );
    }

    #[test]
    fn modulus_is_continuous_in_the_vector(
        x in arb_vector(6, 5.0),
        shift in prop::collection::vec((-0.5..0.5f64, -0.5..0.5f64), 6),
        k in 1u32..=3,
        t in 0.01..1.5f64,
    ) {
        let coeffs: Vec<Complex64> = x
            .coefficients()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (re, im) = shift.get(i).copied().unwrap_or((0.0, 0.0));
                c + Complex64::new(re, im)
            })
            .collect();
        let y = SpectralVector::new(x.spectrum().clone(), coeffs).expect("same spectrum");
        let gap = (x.modulus(k, t) - y.modulus(k, t)).abs();
        let bound = 2f64.powi(k as i32) * x.sub(&y).norm();
        prop_assert!(
            gap <= bound * (1.0 + 1e-6) + 1e-9 * (x.norm() + y.norm()),
            "modulus moved by {gap}, allowed {bound}"
        );
    }

    #[test]
    fn modulus_is_nondecreasing_in_t(
        x in arb_vector(6, 5.0),
        k in 1u32..=3,
        t in 0.01..1.0f64,
        stretch in 1.0..3.0f64,
    ) {
        let small = x.modulus(k, t);
        let large = x.modulus(k, stretch * t);
        prop_assert!(
            large >= small * (1.0 - 1e-9) - 1e-12 * x.norm(),
            "modulus decreased from {small} to {large}"
        );
    }
}

proptest! {
    #[test]
    fn projection_realizes_best_approximation(
        x in arb_vector(8, 6.0),
        r1 in 0.5..20.0f64,
        r2 in 0.5..20.0f64,
    ) {
        let direct = x.best_approx(r1);
        let via_projection = x.sub(&x.project_exp(r1)).norm();
        prop_assert!(
            (direct - via_projection).abs() <= 1e-12 * (1.0 + x.norm()),
            "best approximation {direct} vs projection residual {via_projection}"
        );
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(
            x.best_approx(hi) <= x.best_approx(lo) + 1e-15,
            "best approximation must not grow with the type"
        );
        prop_assert!(x.project_exp(r1).exp_type() <= r1, "projection must cap the type");
    }

    #[test]
    fn exp_type_brackets_power_growth(x in arb_vector(6, 4.0)) {
        let sigma = x.exp_type();
        prop_assume!(sigma > 0.0);
        // The top retained mode's coefficient.
        let top = x
            .coefficients()
            .iter()
            .zip(x.spectrum().eigenvalues())
            .filter(|(c, _)| c.norm_sqr() > 0.0)
            .last()
            .map(|(c, _)| c.norm())
            .expect("sigma > 0 implies a nonzero mode");
        prop_assume!(top > 1e-6);
        // ||B^n x|| = (sum lambda^(2n) |c|^2)^(1/2) lies between the top
        // mode alone and all modes at the top eigenvalue.
        let n = 60;
        let growth = x
            .coefficients()
            .iter()
            .zip(x.spectrum().eigenvalues())
            .map(|(c, &l)| l.powi(2 * n) * c.norm_sqr())
            .sum::<f64>()
            .powf(1.0 / (2.0 * n as f64));
        let lower = sigma * top.powf(1.0 / n as f64);
        let upper = sigma * x.norm().powf(1.0 / n as f64);
        prop_assert!(
            growth >= lower * (1.0 - 1e-9) && growth <= upper * (1.0 + 1e-9),
            "||B^n x||^(1/n) = {growth} outside [{lower}, {upper}] around type {sigma}"
        );
    }

    #[test]
    fn kernel_bound_holds_for_random_parameters(theta in 1.0..20.0f64, k in 1u32..=6) {
        let report = kernel_check(theta, k).expect("valid parameters");
        prop_assert!(
            report.satisfied,
            "kernel integral {} fell below {} at theta = {theta}, k = {k}",
            report.lhs,
            report.rhs
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ritz_solution_minimizes_the_energy_objective(
        seed_entries in prop::collection::vec(-1.0..1.0f64, 25),
        rhs_entries in prop::collection::vec(-1.0..1.0f64, 5),
        perturbation in prop::collection::vec(-0.5..0.5f64, 3),
        scale in 0.01..2.0f64,
    ) {
        let dim = 5;
        let m = DMatrix::from_vec(dim, dim, seed_entries);
        // M M^T + dim I is symmetric positive definite.
        let gram = &m * m.transpose() + DMatrix::identity(dim, dim).scale(dim as f64);
        let spectrum = Arc::new(
            SpectrumModel::new((1..=dim).map(|i| i as f64).collect()).expect("increasing"),
        );
        let problem =
            RitzProblem::new(spectrum, gram, DVector::from_vec(rhs_entries), None)
                .expect("well-formed problem");

        let sub = 3;
        let sol = problem.solve(sub).expect("positive definite block");
        let mut embedded = DVector::zeros(dim);
        for i in 0..sub {
            embedded[i] = sol.coefficients[i];
        }
        let mut competitor = embedded.clone();
        for (i, &p) in perturbation.iter().enumerate() {
            competitor[i] += scale * p;
        }
        prop_assert!(
            problem.objective(&embedded) <= problem.objective(&competitor) + 1e-9,
            "a perturbed competitor beat the Ritz solution"
        );

        let full = problem.solve(dim).expect("positive definite");
        prop_assert!(
            full.galerkin_residual <= 1e-10,
            "full solve residual {} too large",
            full.galerkin_residual
        );
    }
}
