mod common;

use common::{borwein_zeta, c, coeffs, eta_a_brute, npow, rel};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use zmlab_core::arith::{gcd, DirichletCoefficients, ShiftTuple};
use zmlab_core::moments::*;
use zmlab_core::smoothing::{build_G, LineIntegralSpec, SmoothingSpec};
use zmlab_core::specialfn::zeta_ratio_block;
use zmlab_core::Error;

fn shifts() -> ShiftTuple {
    ShiftTuple::real(0.04, 0.02, 0.03, 0.01).unwrap()
}

fn complex_shifts() -> ShiftTuple {
    ShiftTuple::new(c(0.04, 0.01), c(0.02, -0.02), c(0.03, 0.015), c(0.01, 0.0)).unwrap()
}

fn problem(t: f64, sh: ShiftTuple, ca: DirichletCoefficients, cb: DirichletCoefficients) -> MomentProblem {
    let g = build_G(&sh).unwrap();
    MomentProblem::new(t, sh, ca, cb, g).unwrap()
}

/// ζ(1+α+γ)ζ(1+α+δ)ζ(1+β+γ)ζ(1+β+δ)/ζ(2+α+β+γ+δ) from the eta oracle.
fn a_block_oracle(sh: &ShiftTuple) -> C64 {
    let one = c(1.0, 0.0);
    borwein_zeta(one + sh.alpha + sh.gamma)
        * borwein_zeta(one + sh.alpha + sh.delta)
        * borwein_zeta(one + sh.beta + sh.gamma)
        * borwein_zeta(one + sh.beta + sh.delta)
        / borwein_zeta(2.0 + sh.sum())
}

/// 𝔐(s) rebuilt from the divisor-loop η and the eta-based ζ.
fn mfrak_oracle(s: C64, sh: &ShiftTuple, ca: &DirichletCoefficients, cb: &DirichletCoefficients) -> C64 {
    let zero = c(0.0, 0.0);
    let mut sum = zero;
    for (m, x) in ca.nonzero() {
        for (n, y) in cb.nonzero() {
            let g = gcd(m, n);
            let (a, b) = (m / g, n / g);
            let w = s + s + sh.beta + sh.delta;
            let eta = eta_a_brute(a, sh, zero, zero, w) * eta_a_brute(b, &sh.swap_sides(), zero, zero, w);
            sum += x * y.conj() / g as f64 * npow(a as f64, 1.0 - sh.beta - s) * npow(b as f64, 1.0 - sh.delta - s) * eta;
        }
    }
    borwein_zeta(1.0 + sh.alpha + sh.gamma + 2.0 * s) * borwein_zeta(1.0 - sh.beta - sh.delta - 2.0 * s) * sum
}

#[test]
fn integrand_vanishes_outside_window() {
    let p = problem(100.0, shifts(), DirichletCoefficients::delta1(), DirichletCoefficients::delta1());
    for t in [50.0, 100.0, 200.0, 250.0, -150.0] {
        assert_eq!(moment_integrand(t, &p).unwrap(), c(0.0, 0.0));
    }
    assert_ne!(moment_integrand(150.0, &p).unwrap(), c(0.0, 0.0));
}

#[test]
fn integrand_with_zero_shifts_is_nonnegative() {
    let g = SmoothingSpec::gaussian(1.0);
    let p = MomentProblem::new(100.0, ShiftTuple::zero(), DirichletCoefficients::delta1(), DirichletCoefficients::delta1(), g).unwrap();
    for k in 1..40 {
        let t = 100.0 + 2.5 * k as f64;
        let v = moment_integrand(t, &p).unwrap();
        let z = borwein_zeta(c(0.5, t)).norm_sqr();
        assert!(v.im.abs() <= 1e-12 * v.re.abs().max(1e-300));
        assert!(v.re >= 0.0);
        assert!((v.re - z * z * zmlab_core::smoothing::bump_phi(t / 100.0)).abs() < 1e-9 * z * z);
    }
}

#[test]
fn problem_rejects_small_t() {
    let g = SmoothingSpec::gaussian(1.0);
    let r = MomentProblem::new(10.0, shifts(), DirichletCoefficients::delta1(), DirichletCoefficients::delta1(), g);
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn warnings_flag_long_coefficients() {
    let p = problem(100.0, shifts(), DirichletCoefficients::ones(10), DirichletCoefficients::delta1());
    assert_eq!(p.warnings().len(), 1);
    let p = problem(100.0, shifts(), DirichletCoefficients::ones(3), DirichletCoefficients::delta1());
    assert!(p.warnings().is_empty());
}

#[test]
fn zero_coefficients_give_zero() {
    let zero = coeffs(&[0.0, 0.0]);
    let p = problem(60.0, shifts(), zero.clone(), DirichletCoefficients::ones(2));
    assert_eq!(moment_direct(&p, &StepBudget::default()).unwrap().value, c(0.0, 0.0));
    assert_eq!(main_term_thm1(&p).unwrap().total, c(0.0, 0.0));
    assert_eq!(mfrak(c(0.1, 0.0), &shifts(), &zero, &DirichletCoefficients::ones(2)).unwrap(), c(0.0, 0.0));
}

#[test]
fn conjugate_problem_conjugates_integrand_and_direct_value() {
    let ca = DirichletCoefficients::new(vec![c(1.0, 0.0), c(0.3, -0.4)]);
    let cb = DirichletCoefficients::new(vec![c(0.5, 0.2), c(0.0, 0.0), c(-0.2, 0.1)]);
    let p = problem(60.0, complex_shifts(), ca, cb);
    let q = p.conjugate_problem().unwrap();
    for t in [61.0, 77.7, 110.0] {
        let a = moment_integrand(t, &p).unwrap();
        let b = moment_integrand(t, &q).unwrap();
        assert!(rel(b, a.conj()) < 1e-12);
    }
    let dp = moment_direct(&p, &StepBudget::default()).unwrap().value;
    let dq = moment_direct(&q, &StepBudget::default()).unwrap().value;
    assert!(rel(dq, dp.conj()) < 1e-10, "{dp} {dq}");
    let mp = main_term_thm1(&p).unwrap().total;
    let mq = main_term_thm1(&q).unwrap().total;
    assert!(rel(mq, mp.conj()) < 1e-10, "{mp} {mq}");
}

#[test]
fn z_term_examples() {
    let sh = shifts();
    assert!(rel(z_term(&sh, 1, 1).unwrap(), a_block_oracle(&sh)) < 1e-10);
    assert!(matches!(z_term(&sh, 4, 6), Err(Error::Precondition(_))));
    assert!(matches!(z_term(&ShiftTuple::zero(), 1, 1), Err(Error::Pole(_))));
}

#[test]
fn six_terms_labels_and_powers() {
    let sh = shifts();
    let t = six_terms(&sh);
    assert_eq!(t.map(|x| x.0), ["diagonal", "dual", "alpha+gamma", "alpha+delta", "beta+gamma", "beta+delta"]);
    assert_eq!(t[0].1, sh);
    assert_eq!(t[1].2, sh.sum());
    assert_eq!(t[2].2, sh.alpha + sh.gamma);
}

#[test]
fn main_term_parts_sum_to_total() {
    let p = problem(200.0, shifts(), DirichletCoefficients::ones(3), coeffs(&[1.0, -0.5]));
    let m = main_term_thm1(&p).unwrap();
    assert_eq!(m.parts.len(), 6);
    let s: C64 = m.parts.iter().map(|x| x.1).sum();
    assert_eq!(s, m.total);
}

#[test]
fn phi_power_integral_at_zero_power_is_t_times_integral_of_phi() {
    let t = 300.0;
    let a = phi_power_integral(t, c(0.0, 0.0));
    let b = t * common::trapezoid_nonneg(zmlab_core::smoothing::bump_phi, 1.0, 2.0, 4000);
    assert!(rel(a, c(b, 0.0)) < 1e-10);
}

#[test]
fn mfrak_delta1_reduces_to_two_zetas() {
    let sh = shifts();
    let d = DirichletCoefficients::delta1();
    for s in [c(0.1, 0.0), c(0.2, 3.0), c(-0.3, -1.0)] {
        let want = borwein_zeta(1.0 + sh.alpha + sh.gamma + 2.0 * s) * borwein_zeta(1.0 - sh.beta - sh.delta - 2.0 * s);
        assert!(rel(mfrak(s, &sh, &d, &d).unwrap(), want) < 1e-10);
    }
}

#[test]
fn mfrak_pole_is_reported() {
    let sh = shifts();
    let d = DirichletCoefficients::delta1();
    let s = -(sh.alpha + sh.gamma) / 2.0;
    assert!(matches!(mfrak(s, &sh, &d, &d), Err(Error::Pole(_))));
}

#[test]
fn mfrak_at_zero_matches_z_reduction() {
    let sh = shifts();
    let ca = coeffs(&[1.0, 0.5, -0.25]);
    let cb = coeffs(&[1.0, 0.0, 0.3, 0.7]);
    let a = mfrak(c(0.0, 0.0), &sh, &ca, &cb).unwrap();
    let b = mfrak_at_zero_from_z(&sh, &ca, &cb).unwrap();
    assert!(rel(a, b) < 1e-10, "{a} vs {b}");
}

#[test]
fn z_tilde_line_shift_picks_up_residue() {
    // With G = exp(s²) and shifts whose ζ-poles sit left of −0.1, moving the
    // line from 0.1 to −0.1 crosses only s = 0, with residue Z/(ab).
    let sh = ShiftTuple::real(0.3, 0.2, 0.25, 0.15).unwrap();
    let g = SmoothingSpec::gaussian(1.0);
    for (a, b) in [(1u64, 1u64), (2, 3)] {
        let right = z_tilde(&sh, a, b, 500.0, &g, &LineIntegralSpec::new(0.1, 12.0, 4096).unwrap()).unwrap();
        let left = z_tilde(&sh, a, b, 500.0, &g, &LineIntegralSpec::new(-0.1, 12.0, 4096).unwrap()).unwrap();
        let want = z_term(&sh, a, b).unwrap() / (a * b) as f64;
        assert!(rel(right - left, want) < 1e-9, "(a,b)=({a},{b})");
    }
}

#[test]
fn z_tilde_independent_of_abscissa_right_of_zero() {
    let sh = shifts();
    let g = build_G(&sh).unwrap();
    let a = z_tilde(&sh, 2, 3, 400.0, &g, &LineIntegralSpec::new(0.5, 12.0, 4096).unwrap()).unwrap();
    let b = z_tilde(&sh, 2, 3, 400.0, &g, &LineIntegralSpec::new(1.0, 12.0, 4096).unwrap()).unwrap();
    assert!(rel(a, b) < 1e-8);
    assert!(z_tilde(&sh, 2, 4, 400.0, &g, &LineIntegralSpec::default()).is_err());
}

#[test]
fn shift_g_removes_zeta_poles() {
    // Near s = −(α+γ)/2 the pole of ζ(1+α+γ+2s) meets a zero of G.
    let sh = shifts();
    let g = build_G(&sh).unwrap();
    let s0 = -(sh.alpha + sh.gamma) / 2.0;
    let mut prev = None;
    for eps in [1e-5, 1e-7, 1e-9] {
        let s = s0 + c(eps, eps);
        let v = g.eval(s) / s * zeta_ratio_block(&sh, s).unwrap();
        assert!(v.norm() < 1e3 * g.eval(c(0.5, 0.0)).norm(), "eps={eps}");
        if let Some(p) = prev {
            assert!(rel(v, p) < 1e-2);
        }
        prev = Some(v);
    }
}

#[test]
fn thm1_tracks_direct_at_moderate_t() {
    let p = problem(500.0, shifts(), DirichletCoefficients::delta1(), DirichletCoefficients::delta1());
    let d = moment_direct(&p, &StepBudget::default()).unwrap();
    let m = main_term_thm1(&p).unwrap();
    assert!(rel(m.total, d.value) < 0.15, "{} vs {}", m.total, d.value);
    assert!(d.step <= StepBudget::default().initial_step);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mfrak_matches_oracle(re in -0.3f64..0.3, im in -3.0f64..3.0, x1 in -1.0f64..1.0, x2 in -1.0f64..1.0) {
        let sh = complex_shifts();
        let ca = coeffs(&[1.0, x1, 0.0, x2]);
        let cb = DirichletCoefficients::new(vec![c(0.5, x2), c(x1, 0.0), c(0.2, 0.2)]);
        let s = c(re, im);
        prop_assert!(rel(mfrak(s, &sh, &ca, &cb).unwrap(), mfrak_oracle(s, &sh, &ca, &cb)) < 1e-9);
    }

    #[test]
    fn mfrak_reflection_symmetry(re in -0.3f64..0.3, im in -3.0f64..3.0) {
        let sh = complex_shifts();
        let ca = coeffs(&[1.0, 0.4, -0.3]);
        let cb = coeffs(&[1.0, 0.0, 0.5]);
        let s = c(re, im);
        let a = mfrak(s, &sh, &ca, &cb).unwrap();
        let b = mfrak(-s, &sh.reversed_neg(), &ca, &cb).unwrap();
        prop_assert!(rel(b, a) < 1e-9);
    }

    #[test]
    fn z_term_conjugation(a in 1u64..12, b in 1u64..12) {
        prop_assume!(gcd(a, b) == 1);
        let sh = complex_shifts();
        let x = z_term(&sh, a, b).unwrap();
        let y = z_term(&sh.conj(), a, b).unwrap();
        prop_assert!(rel(y, x.conj()) < 1e-12);
    }
}
