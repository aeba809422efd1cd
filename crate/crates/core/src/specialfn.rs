//! Log-Gamma and the Riemann zeta function on vertical strips.

use crate::arith::ShiftTuple;
use crate::error::{Error, Result};
use crate::{c, finite, C64};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 607.0 / 128.0;

// Godfrey's coefficients for g = 607/128, n = 15.
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Bernoulli numbers B_2, B_4, ..., B_32.
const BERNOULLI: [f64; 16] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
];

fn lanczos(z: C64) -> C64 {
    let zm1 = z - 1.0;
    let mut x = c(LANCZOS_COEF[0], 0.0);
    for (i, &ci) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += ci / (zm1 + i as f64);
    }
    let t = zm1 + (LANCZOS_G + 0.5);
    (zm1 + 0.5) * t.ln() - t + x.ln() + HALF_LN_2PI
}

/// Principal branch of log Γ(z).
///
/// Lanczos for Re z ≥ 1/2; to the left the value is carried over by the
/// recurrence log Γ(z) = log Γ(z+n) − Σ log(z+k), which keeps the branch
/// continuous off the negative real axis.
pub fn log_gamma(z: C64) -> Result<C64> {
    if !finite(z) || z.im.abs() > 1e6 {
        return Err(Error::Domain(format!("log_gamma: |Im z| > 1e6 or non-finite z = {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::GammaPole(z));
    }
    if z.re >= 0.5 {
        return Ok(lanczos(z));
    }
    let n = (0.5 - z.re).ceil();
    if n > 1e6 {
        return Err(Error::Domain(format!("log_gamma: Re z = {} too negative", z.re)));
    }
    let n = n as usize;
    let mut acc = lanczos(z + n as f64);
    for k in 0..n {
        acc -= (z + k as f64).ln();
    }
    Ok(acc)
}

/// χ(s) in ζ(s) = χ(s) ζ(1−s), assembled in log form so that large |Im s|
/// does not overflow the sine.
pub fn chi(s: C64) -> Result<C64> {
    let lg = log_gamma(1.0 - s)?;
    let ln2 = std::f64::consts::LN_2;
    Ok((s * ln2 + (s - 1.0) * PI.ln() + lg + ln_sin(s * (PI / 2.0))).exp())
}

/// ln sin z, any branch.
fn ln_sin(z: C64) -> C64 {
    let i = c(0.0, 1.0);
    if z.im.abs() < 1.0 {
        return z.sin().ln();
    }
    if z.im > 0.0 {
        -i * z + ((1.0 - (2.0 * i * z).exp()) * c(0.0, 0.5)).ln()
    } else {
        i * z + ((1.0 - (-2.0 * i * z).exp()) * c(0.0, -0.5)).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaAccuracy {
    pub target_abs_error: f64,
    pub max_terms: usize,
    pub bernoulli_order: u32,
}

impl Default for ZetaAccuracy {
    fn default() -> Self {
        ZetaAccuracy { target_abs_error: 1e-13, max_terms: 4_000_000, bernoulli_order: 24 }
    }
}

impl ZetaAccuracy {
    pub fn new(target_abs_error: f64, max_terms: usize, bernoulli_order: u32) -> Result<Self> {
        if !(target_abs_error > 0.0) || max_terms == 0 {
            return Err(Error::Domain("ZetaAccuracy: target must be > 0, max_terms ≥ 1".into()));
        }
        if bernoulli_order < 2 || bernoulli_order > 30 || bernoulli_order % 2 == 1 {
            return Err(Error::Domain(format!(
                "ZetaAccuracy: bernoulli_order {bernoulli_order} must be even and in [2, 30]"
            )));
        }
        Ok(ZetaAccuracy { target_abs_error, max_terms, bernoulli_order })
    }

    fn corrections(&self) -> usize {
        (self.bernoulli_order / 2) as usize
    }
}

/// Terms after the direct sum Σ_{n<N} n^{-s}: the integral, the half-weight
/// endpoint and the Bernoulli corrections.  Returns (value, size of the first
/// omitted correction).
fn em_tail(s: C64, n: usize, corrections: usize) -> (C64, f64) {
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp();
    let mut acc = n_pow * nf / (s - 1.0) + n_pow * 0.5;
    let mut poch = s;
    let mut fact = 2.0;
    let mut npow = n_pow / nf;
    let mut err = 0.0;
    for k in 1..=corrections + 1 {
        let term = poch * npow * (BERNOULLI[k - 1] / fact);
        if k == corrections + 1 {
            err = term.norm();
            break;
        }
        acc += term;
        let j = 2 * k as u32;
        poch = poch * (s + (j - 1) as f64) * (s + j as f64);
        fact *= ((j + 1) * (j + 2)) as f64;
        npow /= nf * nf;
    }
    (acc, err)
}

fn direct_terms(t_abs: f64) -> usize {
    (1.3 * t_abs).ceil().max(20.0) as usize
}

/// ζ(s) by Euler–Maclaurin summation with N ≈ max(20, 1.3|Im s|) direct terms.
pub fn zeta(s: C64, acc: &ZetaAccuracy) -> Result<C64> {
    if !finite(s) || s.re < -1.0 || s.im.abs() > 1e5 {
        return Err(Error::Domain(format!("zeta: need Re s ≥ −1 and |Im s| ≤ 1e5, got {s}")));
    }
    if s == c(1.0, 0.0) {
        return Err(Error::Pole("zeta(s) at s = 1".into()));
    }
    let mut n = direct_terms(s.im.abs());
    loop {
        let mut sum = C64::new(0.0, 0.0);
        for k in 1..n {
            sum += (-s * (k as f64).ln()).exp();
        }
        let (tail, err) = em_tail(s, n, acc.corrections());
        if err <= acc.target_abs_error {
            let v = sum + tail;
            return if finite(v) { Ok(v) } else { Err(Error::Domain(format!("zeta({s}) overflowed"))) };
        }
        if n >= acc.max_terms {
            return Err(Error::Budget(format!(
                "zeta({s}): error estimate {err:e} above target {:e} with {n} terms",
                acc.target_abs_error
            )));
        }
        n = (2 * n).min(acc.max_terms);
    }
}

/// A_{α,β,γ,δ}(s) = ζ(1+α+γ+2s)ζ(1+α+δ+2s)ζ(1+β+γ+2s)ζ(1+β+δ+2s) / ζ(2+α+β+γ+δ+4s).
pub fn zeta_ratio_block(shifts: &ShiftTuple, s: C64) -> Result<C64> {
    let acc = ZetaAccuracy::default();
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    let pairs = [
        ("α+γ", alpha + gamma),
        ("α+δ", alpha + delta),
        ("β+γ", beta + gamma),
        ("β+δ", beta + delta),
    ];
    let mut num = c(1.0, 0.0);
    for (name, x) in pairs {
        let w = x + 2.0 * s;
        if w == c(0.0, 0.0) {
            return Err(Error::Pole(format!("ζ(1+{name}+2s) at s = {s}")));
        }
        num *= zeta(1.0 + w, &acc)?;
    }
    let w = alpha + beta + gamma + delta + 4.0 * s;
    if w == c(-1.0, 0.0) {
        return Err(Error::Pole(format!("ζ(2+α+β+γ+δ+4s) at s = {s}")));
    }
    let den = zeta(2.0 + w, &acc)?;
    let v = num / den;
    if finite(v) {
        Ok(v)
    } else {
        Err(Error::Pole(format!("ζ(2+α+β+γ+δ+4s) vanishes at s = {s}")))
    }
}

/// Source of zeta values; lets callers put a cache in front of the evaluator.
pub trait ZetaSource: Sync {
    fn zeta(&self, s: C64) -> Result<C64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DirectZeta(pub ZetaAccuracy);

impl ZetaSource for DirectZeta {
    fn zeta(&self, s: C64) -> Result<C64> {
        zeta(s, &self.0)
    }
}

/// Evaluates ζ(½+α+it), ζ(½+β+it), ζ(½+γ−it), ζ(½+δ−it) together, sharing
/// the phases n^{-it} and the precomputed powers n^{-½-shift}.
#[derive(Debug, Clone)]
pub struct ZetaPanel {
    shifts: [C64; 4],
    ln_n: Vec<f64>,
    pow: [Vec<C64>; 4],
    acc: ZetaAccuracy,
}

impl ZetaPanel {
    pub fn new(shifts: &ShiftTuple, t_max: f64, acc: ZetaAccuracy) -> Self {
        let sh = shifts.as_array();
        let im_max = sh.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let n_max = direct_terms(t_max.abs() + im_max) + 1;
        let ln_n: Vec<f64> = (0..n_max).map(|k| if k == 0 { 0.0 } else { (k as f64).ln() }).collect();
        let pow = sh.map(|w| ln_n.iter().map(|&l| (-(0.5 + w) * l).exp()).collect::<Vec<_>>());
        ZetaPanel { shifts: sh, ln_n, pow, acc }
    }

    pub fn t_max(&self) -> f64 {
        let im_max = self.shifts.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        (self.ln_n.len() - 1) as f64 / 1.3 - im_max
    }

    pub fn eval(&self, t: f64) -> Result<[C64; 4]> {
        let im_max = self.shifts.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let n = direct_terms(t.abs() + im_max);
        if n >= self.ln_n.len() {
            let sh = self.shifts;
            let s = [0.5 + sh[0] + c(0.0, t), 0.5 + sh[1] + c(0.0, t), 0.5 + sh[2] - c(0.0, t), 0.5 + sh[3] - c(0.0, t)];
            let mut out = [C64::new(0.0, 0.0); 4];
            for (o, si) in out.iter_mut().zip(s) {
                *o = zeta(si, &self.acc)?;
            }
            return Ok(out);
        }
        let mut sums = [C64::new(0.0, 0.0); 4];
        for k in 1..n {
            let (sn, cs) = (t * self.ln_n[k]).sin_cos();
            let e = c(cs, -sn);
            let ec = c(cs, sn);
            sums[0] += self.pow[0][k] * e;
            sums[1] += self.pow[1][k] * e;
            sums[2] += self.pow[2][k] * ec;
            sums[3] += self.pow[3][k] * ec;
        }
        let sign = [1.0, 1.0, -1.0, -1.0];
        let mut out = [C64::new(0.0, 0.0); 4];
        for i in 0..4 {
            let s = 0.5 + self.shifts[i] + c(0.0, sign[i] * t);
            let (tail, err) = em_tail(s, n, self.acc.corrections());
            if err > self.acc.target_abs_error {
                out[i] = zeta(s, &self.acc)?;
            } else {
                out[i] = sums[i] + tail;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn log_gamma_trivial_values() {
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!(close(v, c(0.5 * PI.ln(), 0.0), 1e-14));
        let v = log_gamma(c(5.0, 0.0)).unwrap();
        assert!(close(v, c(24f64.ln(), 0.0), 1e-13));
        let v = log_gamma(c(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn log_gamma_poles() {
        for z in [0.0, -1.0, -7.0] {
            assert_eq!(log_gamma(c(z, 0.0)), Err(Error::GammaPole(c(z, 0.0))));
        }
        assert!(log_gamma(c(-0.5, 0.0)).is_ok());
    }

    #[test]
    fn log_gamma_negative_half() {
        // Γ(−1/2) = −2√π, principal branch carries −iπ.
        let v = log_gamma(c(-0.5, 0.0)).unwrap();
        assert!(close(v, c((2.0 * PI.sqrt()).ln(), -PI), 1e-13));
    }

    #[test]
    fn zeta_closed_forms() {
        let acc = ZetaAccuracy::default();
        assert!(close(zeta(c(2.0, 0.0), &acc).unwrap(), c(PI * PI / 6.0, 0.0), 1e-14));
        assert!(close(zeta(c(-1.0, 0.0), &acc).unwrap(), c(-1.0 / 12.0, 0.0), 1e-13));
        assert!(close(zeta(c(0.0, 0.0), &acc).unwrap(), c(-0.5, 0.0), 1e-13));
        assert!(matches!(zeta(c(1.0, 0.0), &acc), Err(Error::Pole(_))));
    }

    #[test]
    fn zeta_budget_error() {
        let acc = ZetaAccuracy::new(1e-300, 30, 2).unwrap();
        assert!(matches!(zeta(c(0.5, 40.0), &acc), Err(Error::Budget(_))));
    }

    #[test]
    fn accuracy_validation() {
        assert!(ZetaAccuracy::new(0.0, 10, 24).is_err());
        assert!(ZetaAccuracy::new(1e-10, 10, 32).is_err());
        assert!(ZetaAccuracy::new(1e-10, 10, 30).is_ok());
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let acc = ZetaAccuracy::default();
        for &(x, y) in &[(0.5, 14.1), (0.2, 333.3), (1.7, 1.0)] {
            let a = zeta(c(x, y), &acc).unwrap();
            let b = zeta(c(x, -y), &acc).unwrap();
            assert!((a.conj() - b).norm() <= 1e-14);
        }
    }

    #[test]
    fn panel_matches_single_evaluations() {
        let sh = ShiftTuple::new(c(0.04, 0.0), c(0.02, 0.01), c(0.03, 0.0), c(-0.01, 0.0)).unwrap();
        let acc = ZetaAccuracy::default();
        let panel = ZetaPanel::new(&sh, 2500.0, acc);
        for &t in &[60.0, 777.7, 2400.0, 3000.0] {
            let v = panel.eval(t).unwrap();
            let w = [
                zeta(0.5 + sh.alpha + c(0.0, t), &acc).unwrap(),
                zeta(0.5 + sh.beta + c(0.0, t), &acc).unwrap(),
                zeta(0.5 + sh.gamma - c(0.0, t), &acc).unwrap(),
                zeta(0.5 + sh.delta - c(0.0, t), &acc).unwrap(),
            ];
            for i in 0..4 {
                assert!((v[i] - w[i]).norm() < 1e-11, "t={t} i={i}");
            }
        }
    }

    #[test]
    fn ratio_block_zero_shifts() {
        let z = ShiftTuple::zero();
        let acc = ZetaAccuracy::default();
        let v = zeta_ratio_block(&z, c(0.25, 0.0)).unwrap();
        let z15 = zeta(c(1.5, 0.0), &acc).unwrap();
        let z3 = zeta(c(3.0, 0.0), &acc).unwrap();
        assert!((v - z15.powi(4) / z3).norm() < 1e-12);
    }

    #[test]
    fn ratio_block_pole() {
        let sh = ShiftTuple::new(c(0.02, 0.0), c(0.01, 0.0), c(-0.02, 0.0), c(0.03, 0.0)).unwrap();
        match zeta_ratio_block(&sh, c(0.0, 0.0)) {
            Err(Error::Pole(msg)) => assert!(msg.contains("α+γ")),
            other => panic!("{other:?}"),
        }
    }
}
