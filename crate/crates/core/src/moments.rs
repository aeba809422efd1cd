//! The twisted fourth moment: direct quadrature and the six-term main terms.

use crate::arith::{b_factor, gcd, ppow, DirichletCoefficients, ShiftTuple};
use crate::error::{Error, Result};
use crate::quad::Composite;
use crate::smoothing::{bump_phi, LineIntegralSpec, SmoothingSpec};
use crate::specialfn::{zeta, zeta_ratio_block, ZetaAccuracy, ZetaPanel, ZetaSource};
use crate::{c, finite, C64};
use rayon::prelude::*;
use std::f64::consts::PI;

/// The bump Φ of the moment; see [`bump_phi`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BumpPhi;

impl BumpPhi {
    pub fn eval(&self, x: f64) -> f64 {
        bump_phi(x)
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone)]
pub struct MomentProblem {
    pub T: f64,
    pub shifts: ShiftTuple,
    pub coeffs_a: DirichletCoefficients,
    pub coeffs_b: DirichletCoefficients,
    pub phi: BumpPhi,
    pub G: SmoothingSpec,
}

impl MomentProblem {
    #[allow(non_snake_case)]
    pub fn new(
        T: f64,
        shifts: ShiftTuple,
        coeffs_a: DirichletCoefficients,
        coeffs_b: DirichletCoefficients,
        G: SmoothingSpec,
    ) -> Result<Self> {
        if !(T >= 50.0) {
            return Err(Error::Domain(format!("MomentProblem: T = {T} must be ≥ 50")));
        }
        Ok(MomentProblem { T, shifts, coeffs_a, coeffs_b, phi: BumpPhi, G })
    }

    /// Soft checks: support bounds above T^{1/4} and large coefficients.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let cap = self.T.powf(0.25);
        for (name, co) in [("A", &self.coeffs_a), ("B", &self.coeffs_b)] {
            if co.support_bound() as f64 > cap {
                out.push(format!("coefficient support of {name} ({}) exceeds T^(1/4) = {cap:.2}", co.support_bound()));
            }
            if let Some(w) = co.growth_warning() {
                out.push(format!("{name}: {w}"));
            }
        }
        out
    }

    fn check_window(&self, t: f64) -> bool {
        t > self.T && t < 2.0 * self.T
    }

    /// The same integral with conjugated shifts, the two sides exchanged and
    /// A/B swapped; its value is the complex conjugate of this one.
    pub fn conjugate_problem(&self) -> Result<Self> {
        let sh = self.shifts.conj().swap_sides();
        let g = match self.G.shifts {
            Some(_) => crate::smoothing::build_G(&sh)?,
            None => self.G.clone(),
        };
        Ok(MomentProblem {
            T: self.T,
            shifts: sh,
            coeffs_a: self.coeffs_b.clone(),
            coeffs_b: self.coeffs_a.clone(),
            phi: self.phi,
            G: g,
        })
    }
}

fn dirichlet_half_line(co: &DirichletCoefficients, t: f64) -> C64 {
    co.eval(c(0.5, t))
}

fn integrand_from_zetas(prob: &MomentProblem, t: f64, z: [C64; 4]) -> C64 {
    let a = dirichlet_half_line(&prob.coeffs_a, t);
    let b = dirichlet_half_line(&prob.coeffs_b, t);
    z[0] * z[1] * z[2] * z[3] * a * b.conj() * prob.phi.eval(t / prob.T)
}

/// ζ(½+it+α)ζ(½+it+β)ζ(½−it+γ)ζ(½−it+δ) A(½+it) conj(B(½+it)) Φ(t/T).
pub fn moment_integrand(t: f64, prob: &MomentProblem) -> Result<C64> {
    if !prob.check_window(t) {
        return Ok(c(0.0, 0.0));
    }
    let acc = ZetaAccuracy::default();
    let sh = prob.shifts;
    let it = c(0.0, t);
    let z = [
        zeta(0.5 + sh.alpha + it, &acc)?,
        zeta(0.5 + sh.beta + it, &acc)?,
        zeta(0.5 + sh.gamma - it, &acc)?,
        zeta(0.5 + sh.delta - it, &acc)?,
    ];
    Ok(integrand_from_zetas(prob, t, z))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepBudget {
    pub initial_step: f64,
    pub max_halvings: u32,
    pub rel_tol: f64,
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget { initial_step: 0.02, max_halvings: 4, rel_tol: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectResult {
    pub value: C64,
    pub coarse_value: C64,
    pub step: f64,
    pub nodes: usize,
}

enum Evaluator<'a> {
    Panel(ZetaPanel),
    Source(&'a dyn ZetaSource),
}

impl Evaluator<'_> {
    fn zetas(&self, prob: &MomentProblem, t: f64) -> Result<[C64; 4]> {
        match self {
            Evaluator::Panel(p) => p.eval(t),
            Evaluator::Source(src) => {
                let sh = prob.shifts;
                let it = c(0.0, t);
                Ok([
                    src.zeta(0.5 + sh.alpha + it)?,
                    src.zeta(0.5 + sh.beta + it)?,
                    src.zeta(0.5 + sh.gamma - it)?,
                    src.zeta(0.5 + sh.delta - it)?,
                ])
            }
        }
    }
}

fn sum_nodes(prob: &MomentProblem, ev: &Evaluator, ts: &[f64]) -> Result<C64> {
    let vals: Vec<Result<C64>> = ts
        .par_iter()
        .map(|&t| ev.zetas(prob, t).map(|z| integrand_from_zetas(prob, t, z)))
        .collect();
    let mut acc = c(0.0, 0.0);
    for v in vals {
        acc += v?;
    }
    Ok(acc)
}

fn direct_impl(prob: &MomentProblem, budget: &StepBudget, ev: Evaluator) -> Result<DirectResult> {
    if prob.coeffs_a.is_zero() || prob.coeffs_b.is_zero() {
        return Ok(DirectResult { value: c(0.0, 0.0), coarse_value: c(0.0, 0.0), step: budget.initial_step, nodes: 0 });
    }
    let len = prob.T;
    let mut n = (len / budget.initial_step).ceil() as usize;
    let mut h = len / n as f64;
    // Trapezoid; Φ vanishes to all orders at both ends so interior nodes suffice.
    let ts: Vec<f64> = (1..n).map(|k| prob.T + k as f64 * h).collect();
    let mut raw = sum_nodes(prob, &ev, &ts)?;
    let mut value = raw * h;
    let mut nodes = ts.len();
    for _ in 0..=budget.max_halvings {
        let ts: Vec<f64> = (0..n).map(|k| prob.T + (k as f64 + 0.5) * h).collect();
        raw += sum_nodes(prob, &ev, &ts)?;
        nodes += ts.len();
        n *= 2;
        h /= 2.0;
        let refined = raw * h;
        let change = (refined - value).norm();
        if change <= budget.rel_tol * refined.norm() {
            return Ok(DirectResult { value: refined, coarse_value: value, step: h, nodes });
        }
        value = refined;
    }
    Err(Error::Refinement {
        message: format!("moment_direct: halving still changes the result by more than {}", budget.rel_tol),
        suggested_step: h / 2.0,
    })
}

/// Composite trapezoid of the integrand over [T, 2T] with step halving until
/// two successive steps agree to `budget.rel_tol`.
pub fn moment_direct(prob: &MomentProblem, budget: &StepBudget) -> Result<DirectResult> {
    let panel = ZetaPanel::new(&prob.shifts, 2.0 * prob.T, ZetaAccuracy::default());
    direct_impl(prob, budget, Evaluator::Panel(panel))
}

/// As [`moment_direct`], with every zeta value drawn from `src`.
pub fn moment_direct_with_source(prob: &MomentProblem, budget: &StepBudget, src: &dyn ZetaSource) -> Result<DirectResult> {
    direct_impl(prob, budget, Evaluator::Source(src))
}

/// Z_{α,β,γ,δ,a,b} = A_{α,β,γ,δ} B_{α,β,γ,δ,a} B_{γ,δ,α,β,b}.
pub fn z_term(shifts: &ShiftTuple, a: u64, b: u64) -> Result<C64> {
    if gcd(a, b) != 1 {
        return Err(Error::Precondition(format!("z_term: gcd({a}, {b}) ≠ 1")));
    }
    let zero = c(0.0, 0.0);
    Ok(zeta_ratio_block(shifts, zero)? * b_factor(a, shifts, zero)? * b_factor(b, &shifts.swap_sides(), zero)?)
}

/// The six (label, tuple, power) triples: the term is (t/2π)^{-power} Z_{tuple}.
pub fn six_terms(sh: &ShiftTuple) -> [(&'static str, ShiftTuple, C64); 6] {
    let ShiftTuple { alpha, beta, gamma, delta } = *sh;
    let t = |a, b, g, d| ShiftTuple { alpha: a, beta: b, gamma: g, delta: d };
    [
        ("diagonal", *sh, c(0.0, 0.0)),
        ("dual", sh.dual(), sh.sum()),
        ("alpha+gamma", t(-gamma, beta, -alpha, delta), alpha + gamma),
        ("alpha+delta", t(-delta, beta, gamma, -alpha), alpha + delta),
        ("beta+gamma", t(alpha, -gamma, -beta, delta), beta + gamma),
        ("beta+delta", t(alpha, -delta, gamma, -beta), beta + delta),
    ]
}

/// Six labeled parts and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTerm {
    pub parts: Vec<(String, C64)>,
    pub total: C64,
}

impl MainTerm {
    fn from_parts(parts: Vec<(String, C64)>) -> Self {
        let total = parts.iter().map(|p| p.1).sum();
        MainTerm { parts, total }
    }
}

fn t_rule(big_t: f64) -> Composite {
    Composite::new(big_t, 2.0 * big_t, 256, 16)
}

/// ∫Φ(t/T)(t/2π)^{-p} dt with the fixed 4096-node rule.
#[allow(non_snake_case)]
pub fn phi_power_integral(T: f64, p: C64) -> C64 {
    let rule = t_rule(T);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| ppow(t / (2.0 * PI), p) * (w * bump_phi(t / T)))
        .sum()
}

/// Coprime triples (g, a, b) carrying α_{ga} conj(β_{gb}).
fn coprime_triples(ca: &DirichletCoefficients, cb: &DirichletCoefficients) -> Vec<(u64, u64, u64, C64)> {
    let mut out = Vec::new();
    let gmax = ca.support_bound().min(cb.support_bound()) as u64;
    for g in 1..=gmax {
        for a in 1..=(ca.support_bound() as u64 / g) {
            let xa = ca.get(g * a);
            if xa == c(0.0, 0.0) {
                continue;
            }
            for b in 1..=(cb.support_bound() as u64 / g) {
                let yb = cb.get(g * b);
                if yb == c(0.0, 0.0) || gcd(a, b) != 1 {
                    continue;
                }
                out.push((g, a, b, xa * yb.conj()));
            }
        }
    }
    out
}

/// Six-term main term with constant Z-values:
/// Σ_g Σ_{(a,b)=1} α_{ga} conj(β_{gb})/(gab) ∫Φ(t/T) Σ (t/2π)^{-p_i} Z_i dt.
pub fn main_term_thm1(prob: &MomentProblem) -> Result<MainTerm> {
    let triples = coprime_triples(&prob.coeffs_a, &prob.coeffs_b);
    let terms = six_terms(&prob.shifts);
    let mut parts = Vec::with_capacity(6);
    for (label, tuple, p) in terms {
        let per: Vec<Result<C64>> = triples
            .par_iter()
            .map(|&(g, a, b, w)| Ok(w / (g * a * b) as f64 * z_term(&tuple, a, b)?))
            .collect();
        let mut sum = c(0.0, 0.0);
        for v in per {
            sum += v?;
        }
        parts.push((label.to_string(), sum * phi_power_integral(prob.T, p)));
    }
    Ok(MainTerm::from_parts(parts))
}

/// Z̃_{α,β,γ,δ,a,b}(t) as a weighted sum over line nodes:
/// Z̃(t) = Σ_j K_j (t/2π)^{2 s_j}, K_j = w_j G(s_j)/s_j (ab)^{-(1+s_j)} A(s_j) B_a(s_j) B_b(s_j).
#[derive(Debug, Clone)]
pub struct ZTildeKernel {
    pub points: Vec<(C64, C64)>,
}

impl ZTildeKernel {
    #[allow(non_snake_case)]
    pub fn new(shifts: &ShiftTuple, a: u64, b: u64, G: &SmoothingSpec, line: &LineIntegralSpec) -> Result<Self> {
        if gcd(a, b) != 1 {
            return Err(Error::Precondition(format!("z_tilde: gcd({a}, {b}) ≠ 1")));
        }
        let ab = (a * b) as f64;
        let dual = shifts.swap_sides();
        let pts = line.points();
        let vals: Vec<Result<(C64, C64)>> = pts
            .par_iter()
            .map(|&(s, w)| {
                let d = zeta_ratio_block(shifts, s)? * b_factor(a, shifts, s)? * b_factor(b, &dual, s)?;
                let k = G.eval(s) / s * ppow(ab, 1.0 + s) * d * w;
                if !finite(k) {
                    return Err(Error::Evaluation(s));
                }
                Ok((s, k))
            })
            .collect();
        Ok(ZTildeKernel { points: vals.into_iter().collect::<Result<Vec<_>>>()? })
    }

    pub fn eval(&self, t: f64) -> C64 {
        let l = (t / (2.0 * PI)).ln();
        self.points.iter().map(|&(s, k)| k * (2.0 * s * l).exp()).sum()
    }

    /// ∫Φ(t/T)(t/2π)^{-p} Z̃(t) dt by the t-rule at every line node.
    #[allow(non_snake_case)]
    pub fn phi_integral(&self, T: f64, p: C64) -> C64 {
        let rule = t_rule(T);
        let logs: Vec<(f64, f64)> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| ((t / (2.0 * PI)).ln(), w * bump_phi(t / T)))
            .collect();
        self.points
            .par_iter()
            .map(|&(s, k)| {
                let e = 2.0 * s - p;
                k * logs.iter().map(|&(l, w)| (e * l).exp() * w).sum::<C64>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    }
}

/// Z̃_{α,β,γ,δ,a,b}(t) by contour quadrature of the Euler-product form.
#[allow(non_snake_case)]
pub fn z_tilde(shifts: &ShiftTuple, a: u64, b: u64, t: f64, G: &SmoothingSpec, line: &LineIntegralSpec) -> Result<C64> {
    Ok(ZTildeKernel::new(shifts, a, b, G, line)?.eval(t))
}

/// Six-term main term with the t-dependent Z̃-values:
/// Σ_{a,b} α_a conj(β_b) ∫Φ(t/T) Σ (t/2π)^{-p_i} Z̃_i(t) dt, using
/// Z̃_{ga',gb'} = Z̃_{a',b'}/g.
pub fn main_term_thm2(prob: &MomentProblem, line: &LineIntegralSpec) -> Result<MainTerm> {
    let triples = coprime_triples(&prob.coeffs_a, &prob.coeffs_b);
    let mut parts = Vec::with_capacity(6);
    for (label, tuple, p) in six_terms(&prob.shifts) {
        let mut sum = c(0.0, 0.0);
        for &(g, a, b, w) in &triples {
            let k = ZTildeKernel::new(&tuple, a, b, &prob.G, line)?;
            sum += w / g as f64 * k.phi_integral(prob.T, p);
        }
        parts.push((label.to_string(), sum));
    }
    Ok(MainTerm::from_parts(parts))
}

/// 𝔐_{α,β,γ,δ}(s) = ζ(1+α+γ+2s)ζ(1−β−δ−2s) Σ_g Σ_{(a,b)=1}
/// α_{ga} conj(β_{gb}) / (g a^{1−β−s} b^{1−δ−s}) η_{α,β,γ,δ,a,b}(0,0,β+δ+2s).
pub fn mfrak(s: C64, shifts: &ShiftTuple, coeffs_a: &DirichletCoefficients, coeffs_b: &DirichletCoefficients) -> Result<C64> {
    mfrak_with(None, s, shifts, coeffs_a, coeffs_b)
}

pub(crate) fn mfrak_with(
    m: Option<crate::verify::Mutation>,
    s: C64,
    shifts: &ShiftTuple,
    coeffs_a: &DirichletCoefficients,
    coeffs_b: &DirichletCoefficients,
) -> Result<C64> {
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    let acc = ZetaAccuracy::default();
    let w1 = alpha + gamma + 2.0 * s;
    let w2 = -beta - delta - 2.0 * s;
    if w1 == c(0.0, 0.0) {
        return Err(Error::Pole(format!("𝔐: ζ(1+α+γ+2s) at s = {s}")));
    }
    if w2 == c(0.0, 0.0) {
        return Err(Error::Pole(format!("𝔐: ζ(1−β−δ−2s) at s = {s}")));
    }
    let pre = zeta(1.0 + w1, &acc)? * zeta(1.0 + w2, &acc)?;
    let zero = c(0.0, 0.0);
    let mut sum = c(0.0, 0.0);
    for (g, a, b, w) in coprime_triples(coeffs_a, coeffs_b) {
        let eta = crate::arith::eta_ab_with(m, a, b, shifts, zero, zero, beta + delta + 2.0 * s)?;
        sum += w / g as f64 * ppow(a as f64, 1.0 - beta - s) * ppow(b as f64, 1.0 - delta - s) * eta;
    }
    Ok(pre * sum)
}

/// Right side of the s = 0 reduction of 𝔐: Σ α conj(β)/(gab) Z_{α,−δ,γ,−β,a,b},
/// divided by ζ(1+α−β)ζ(1+γ−δ)/ζ(2+α−β+γ−δ).
pub fn mfrak_at_zero_from_z(shifts: &ShiftTuple, coeffs_a: &DirichletCoefficients, coeffs_b: &DirichletCoefficients) -> Result<C64> {
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    let acc = ZetaAccuracy::default();
    let tuple = ShiftTuple { alpha, beta: -delta, gamma, delta: -beta };
    let mut sum = c(0.0, 0.0);
    for (g, a, b, w) in coprime_triples(coeffs_a, coeffs_b) {
        sum += w / (g * a * b) as f64 * z_term(&tuple, a, b)?;
    }
    let pre = zeta(1.0 + alpha - beta, &acc)? * zeta(1.0 + gamma - delta, &acc)? / zeta(2.0 + alpha - beta + gamma - delta, &acc)?;
    Ok(sum / pre)
}

/// Everything the moment command reports.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub direct: DirectResult,
    pub thm1: MainTerm,
    pub thm2: MainTerm,
    pub residual_thm1: f64,
    pub residual_thm2: f64,
    pub gap_thm1_thm2: f64,
}

pub fn run_moment(prob: &MomentProblem, budget: &StepBudget, line: &LineIntegralSpec) -> Result<MomentReport> {
    let direct = moment_direct(prob, budget)?;
    report_from_direct(prob, direct, line)
}

pub fn report_from_direct(prob: &MomentProblem, direct: DirectResult, line: &LineIntegralSpec) -> Result<MomentReport> {
    let thm1 = main_term_thm1(prob)?;
    let thm2 = main_term_thm2(prob, line)?;
    let rel = |x: C64, y: C64| (x - y).norm() / y.norm();
    Ok(MomentReport {
        residual_thm1: rel(thm1.total, direct.value),
        residual_thm2: rel(thm2.total, direct.value),
        gap_thm1_thm2: rel(thm2.total, thm1.total),
        direct,
        thm1,
        thm2,
    })
}
