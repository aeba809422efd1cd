//! The quadratic divisor problem: brute-force S and S±, f̃, and the main terms.

use crate::arith::{eta_ab, gcd, ppow, DirichletCoefficients, ShiftTuple};
use crate::error::{Error, Result};
use crate::quad::Composite;
use crate::smoothing::{bump_phi, LineIntegralSpec};
use crate::specialfn::{zeta, ZetaAccuracy};
use crate::{c, finite, C64};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type MellinFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// Separable weight f(x,y,z) = f₁(x) f₂(y) f₃(z) with f₃ supported on
/// [H, 2H], and the cutoff K.
#[derive(Clone)]
pub struct WeightSpec {
    pub f1: RealFn,
    pub f2: RealFn,
    pub f3: RealFn,
    pub h: f64,
    pub f3_mellin: MellinFn,
    /// K as a function of m₁m₂n₁n₂.
    pub k: RealFn,
    /// K vanishes beyond this point, if compactly supported.
    pub k_support: Option<f64>,
    pub x_scale: f64,
    pub z_scale: f64,
}

impl std::fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeightSpec")
            .field("h", &self.h)
            .field("k_support", &self.k_support)
            .field("x_scale", &self.x_scale)
            .field("z_scale", &self.z_scale)
            .finish_non_exhaustive()
    }
}

/// Smooth step: 1 on [0, ½], 0 on [1, ∞).
pub fn smooth_cutoff(u: f64) -> f64 {
    if u <= 0.5 {
        return 1.0;
    }
    if u >= 1.0 {
        return 0.0;
    }
    let y = 2.0 * u - 1.0;
    let a = (-1.0 / y).exp();
    let b = (-1.0 / (1.0 - y)).exp();
    b / (a + b)
}

/// ∫_{H}^{2H} f(z) z^{s−1} dz in the variable v = ln z.
pub fn numeric_mellin(f: &(dyn Fn(f64) -> f64 + Send + Sync), lo: f64, hi: f64, s: C64, panels: usize) -> C64 {
    let rule = Composite::new(lo.ln(), hi.ln(), panels, 16);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&v, &w)| (s * v).exp() * (w * f(v.exp())))
        .sum()
}

impl WeightSpec {
    /// f₁ = f₂ = 1, f₃(z) = Φ(z/H), K(x) = k(x/X²) with k the smooth step
    /// `smooth_cutoff`. The Mellin transform of f₃ is numeric.
    pub fn bump(h: f64, x_scale: f64, z_scale: f64) -> Self {
        let f3: RealFn = Arc::new(move |z: f64| bump_phi(z / h));
        let f3m = f3.clone();
        let x2 = x_scale * x_scale;
        WeightSpec {
            f1: Arc::new(|_| 1.0),
            f2: Arc::new(|_| 1.0),
            f3,
            h,
            f3_mellin: Arc::new(move |s| numeric_mellin(f3m.as_ref(), h, 2.0 * h, s, 96)),
            k: Arc::new(move |x| smooth_cutoff(x / x2)),
            k_support: Some(x2),
            x_scale,
            z_scale,
        }
    }

    /// Log-normal f₃(z) = exp(−(ln(z/z₀))²/(2σ²)) centred in [H, 2H], with
    /// Mellin transform σ√(2π) z₀^s e^{σ²s²/2}. Not compactly supported;
    /// used where a closed-form transform is wanted.
    pub fn gaussian_taper(h: f64, x_scale: f64, z_scale: f64, sigma: f64) -> Self {
        let z0 = 1.5 * h;
        let f3: RealFn = Arc::new(move |z: f64| {
            let l = (z / z0).ln();
            (-(l * l) / (2.0 * sigma * sigma)).exp()
        });
        let x2 = x_scale * x_scale;
        WeightSpec {
            f1: Arc::new(|_| 1.0),
            f2: Arc::new(|_| 1.0),
            f3,
            h,
            f3_mellin: Arc::new(move |s| (2.0 * PI).sqrt() * sigma * (s * z0.ln() + 0.5 * sigma * sigma * s * s).exp()),
            k: Arc::new(move |x| smooth_cutoff(x / x2)),
            k_support: Some(x2),
            x_scale,
            z_scale,
        }
    }

    /// Numeric Mellin transform of f₃ over its support; compares with
    /// `f3_mellin` at `points` and returns the worst absolute difference.
    pub fn mellin_consistency(&self, points: &[C64], lo: f64, hi: f64) -> f64 {
        points
            .iter()
            .map(|&s| (numeric_mellin(self.f3.as_ref(), lo, hi, s, 256) - (self.f3_mellin)(s)).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct QdpProblem {
    pub coeffs_a: DirichletCoefficients,
    pub coeffs_b: DirichletCoefficients,
    pub shifts: ShiftTuple,
    pub weights: WeightSpec,
    pub enumeration_cutoff: u64,
}

impl QdpProblem {
    /// Cutoff defaults to the support of K.
    pub fn new(
        coeffs_a: DirichletCoefficients,
        coeffs_b: DirichletCoefficients,
        shifts: ShiftTuple,
        weights: WeightSpec,
    ) -> Result<Self> {
        let cutoff = match weights.k_support {
            Some(x) => x.floor() as u64,
            None => (weights.x_scale * weights.x_scale * 40.0).ceil() as u64,
        };
        Ok(QdpProblem { coeffs_a, coeffs_b, shifts, weights, enumeration_cutoff: cutoff })
    }

    /// Relative size of K beyond the cutoff, sampled at cutoff·{1, 1.5, 2, 4, 16}.
    pub fn tail_estimate(&self) -> f64 {
        let k = &self.weights.k;
        let peak = (0..=64)
            .map(|i| k(self.enumeration_cutoff as f64 * i as f64 / 64.0).abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        [1.0, 1.5, 2.0, 4.0, 16.0]
            .iter()
            .map(|f| k(self.enumeration_cutoff as f64 * f + 1.0).abs())
            .fold(0.0, f64::max)
            / peak
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForce {
    pub value: C64,
    pub terms: u64,
}

fn power_table(n: u64, w: C64) -> Vec<C64> {
    (0..=n).map(|m| if m == 0 { c(0.0, 0.0) } else { ppow(m as f64, w) }).collect()
}

/// S = Σ_{am₁m₂ − bn₁n₂ = h > 0} α_a conj(β_b) m₁^{-α} m₂^{-β} n₁^{-γ} n₂^{-δ}
///     f(am₁m₂, bn₁n₂, h) K(m₁m₂n₁n₂), enumerated with m₁m₂n₁n₂ ≤ cutoff.
pub fn brute_force_s(prob: &QdpProblem) -> Result<BruteForce> {
    let tail = prob.tail_estimate();
    if tail > 1e-6 {
        return Err(Error::Refinement {
            message: format!("brute_force_S: K beyond the cutoff is {tail:e} of its peak"),
            suggested_step: 0.0,
        });
    }
    let cut = prob.enumeration_cutoff;
    let sh = prob.shifts;
    let pa = power_table(cut, sh.alpha);
    let pb = power_table(cut, sh.beta);
    let pg = power_table(cut, sh.gamma);
    let pd = power_table(cut, sh.delta);
    let w = &prob.weights;
    let (hlo, hhi) = (w.h, 2.0 * w.h);
    let pairs: Vec<(u64, C64, u64, C64)> = prob
        .coeffs_a
        .nonzero()
        .flat_map(|(a, xa)| prob.coeffs_b.nonzero().map(move |(b, yb)| (a, xa, b, yb)))
        .collect();
    let blocks: Vec<(C64, u64)> = pairs
        .par_iter()
        .map(|&(a, xa, b, yb)| {
            let mut acc = c(0.0, 0.0);
            let mut terms = 0u64;
            for m1 in 1..=cut {
                for m2 in 1..=cut / m1 {
                    let mm = m1 * m2;
                    let x = (a * mm) as f64;
                    let fx = (w.f1)(x);
                    if fx == 0.0 {
                        continue;
                    }
                    let wm = pa[m1 as usize] * pb[m2 as usize];
                    for n1 in 1..=cut / mm {
                        let bn1 = (b * n1) as f64;
                        if bn1 > x - hlo {
                            break;
                        }
                        let lo = ((x - hhi) / bn1).ceil().max(1.0) as u64;
                        let hi = (((x - hlo) / bn1).floor() as u64).min(cut / (mm * n1));
                        for n2 in lo..=hi {
                            let y = bn1 * n2 as f64;
                            let h = x - y;
                            if h <= hlo || h >= hhi {
                                continue;
                            }
                            let f = fx * (w.f2)(y) * (w.f3)(h) * (w.k)((mm * n1 * n2) as f64);
                            if f == 0.0 {
                                continue;
                            }
                            acc += wm * pg[n1 as usize] * pd[n2 as usize] * f;
                            terms += 1;
                        }
                    }
                }
            }
            (acc * xa * yb.conj(), terms)
        })
        .collect();
    let mut value = c(0.0, 0.0);
    let mut terms = 0;
    for (v, n) in blocks {
        value += v;
        terms += n;
    }
    Ok(BruteForce { value, terms })
}

/// Contour quadrature data for F(a,b,g) = f̃(x,x;a,b,g)/(f₁(x)f₂(x)):
/// base_j = w_j f̂₃(s_j) ζ(s_j) ζ(1+α−β+γ−δ+s_j).
#[derive(Debug, Clone)]
pub struct FTildeKernel {
    shifts: ShiftTuple,
    points: Vec<(C64, C64)>,
}

impl FTildeKernel {
    pub fn new(shifts: &ShiftTuple, weights: &WeightSpec, line: &LineIntegralSpec) -> Result<Self> {
        if line.abscissa <= 1.0 {
            return Err(Error::Precondition(format!("f_tilde: abscissa {} must exceed 1", line.abscissa)));
        }
        let d = shifts.alpha - shifts.beta + shifts.gamma - shifts.delta;
        let acc = ZetaAccuracy::default();
        let vals: Vec<Result<(C64, C64)>> = line
            .points()
            .par_iter()
            .map(|&(s, w)| {
                let v = (weights.f3_mellin)(s) * zeta(s, &acc)? * zeta(1.0 + d + s, &acc)? * w;
                if !finite(v) {
                    return Err(Error::Evaluation(s));
                }
                Ok((s, v))
            })
            .collect();
        Ok(FTildeKernel { shifts: *shifts, points: vals.into_iter().collect::<Result<Vec<_>>>()? })
    }

    /// (1/2πi)∫ f̂₃(s) ζ(s) ζ(1+α−β+γ−δ+s) g^{-s} η_{a,b}(0,0,s) ds.
    pub fn eval(&self, a: u64, b: u64, g: u64) -> Result<C64> {
        if gcd(a, b) != 1 {
            return Err(Error::Precondition(format!("f_tilde: gcd({a}, {b}) ≠ 1")));
        }
        let zero = c(0.0, 0.0);
        let gf = g as f64;
        let mut acc = c(0.0, 0.0);
        for &(s, v) in &self.points {
            acc += v * ppow(gf, s) * eta_ab(a, b, &self.shifts, zero, zero, s)?;
        }
        Ok(acc)
    }
}

/// f̃_{α,β,γ,δ}(x, x; a, b, g) for separable weights.
#[allow(clippy::too_many_arguments)]
pub fn f_tilde(
    x: f64,
    shifts: &ShiftTuple,
    a: u64,
    b: u64,
    g: u64,
    weights: &WeightSpec,
    line: &LineIntegralSpec,
) -> Result<C64> {
    let k = FTildeKernel::new(shifts, weights, line)?;
    Ok(k.eval(a, b, g)? * (weights.f1)(x) * (weights.f2)(x))
}

/// Default line for f̃: abscissa 1.5, |Im s| ≤ 1000, 24576 nodes.
pub fn default_f_tilde_line() -> LineIntegralSpec {
    LineIntegralSpec { abscissa: 1.5, half_height: 1000.0, nodes: 24576 }
}

/// ∫₀^∞ K(x²/(g²ab)) f₁(x) f₂(x) x^{-β-δ} dx in the variable ln x over
/// [10⁻³ L, 10³ L], L = gX√(ab), with the piece below 10⁻³L taken at the
/// values at 0; the node count doubles until two rules agree to 1e-10.
fn x_integral(weights: &WeightSpec, e: C64, scale2: f64) -> Result<C64> {
    let l = weights.x_scale * scale2.sqrt();
    let lo = 1e-3 * l;
    let hi = match weights.k_support {
        Some(xs) => (xs * scale2).sqrt().min(1e3 * l),
        None => 1e3 * l,
    };
    let f = |x: f64| (weights.k)(x * x / scale2) * (weights.f1)(x) * (weights.f2)(x);
    let rule_sum = |n: usize| -> C64 {
        let rule = Composite::with_nodes(lo.ln(), hi.ln(), n);
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&y, &w)| ((1.0 - e) * y).exp() * (w * f(y.exp())))
            .sum()
    };
    let head = f(0.0) * ppow(lo, e - 1.0) / (1.0 - e);
    let mut n = 512;
    let mut prev = rule_sum(n);
    while n < 65536 {
        n *= 2;
        let next = rule_sum(n);
        if (next - prev).norm() <= 1e-10 * next.norm() {
            return Ok(head + next);
        }
        prev = next;
    }
    Err(Error::Refinement { message: "main_term_qdp: x-integral did not settle".into(), suggested_step: 0.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QdpMain {
    pub terms: Vec<(String, C64)>,
    pub total: C64,
}

/// The four labels and shift tuples M_{α,β,γ,δ}, M_{β,α,γ,δ}, M_{α,β,δ,γ}, M_{β,α,δ,γ}.
pub fn qdp_permutations(sh: &ShiftTuple) -> [(&'static str, ShiftTuple); 4] {
    [
        ("M[a,b,c,d]", *sh),
        ("M[b,a,c,d]", sh.swap_ab()),
        ("M[a,b,d,c]", sh.swap_cd()),
        ("M[b,a,d,c]", sh.swap_ab().swap_cd()),
    ]
}

fn pole_check(shifts: &ShiftTuple) -> Result<()> {
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    for (name, d) in [("α−β", alpha - beta), ("γ−δ", gamma - delta), ("α−β+γ−δ", alpha - beta + gamma - delta)] {
        if d.norm() < 1e-12 {
            return Err(Error::Pole(format!("main_term_qdp: {name} = 0")));
        }
    }
    Ok(())
}

/// M_{α,β,γ,δ} for one tuple, with its f̃ kernel precomputed.
pub fn main_term_single(prob: &QdpProblem, shifts: &ShiftTuple, kernel: &FTildeKernel) -> Result<C64> {
    pole_check(shifts)?;
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    let acc = ZetaAccuracy::default();
    let pre = zeta(1.0 + alpha - beta, &acc)? * zeta(1.0 + gamma - delta, &acc)?
        / zeta(2.0 + alpha - beta + gamma - delta, &acc)?;
    let e = beta + delta;
    let gmax = prob.coeffs_a.support_bound().min(prob.coeffs_b.support_bound()) as u64;
    let mut triples = Vec::new();
    for g in 1..=gmax {
        for a in 1..=prob.coeffs_a.support_bound() as u64 / g {
            for b in 1..=prob.coeffs_b.support_bound() as u64 / g {
                let w = prob.coeffs_a.get(g * a) * prob.coeffs_b.get(g * b).conj();
                if w != c(0.0, 0.0) && gcd(a, b) == 1 {
                    triples.push((g, a, b, w));
                }
            }
        }
    }
    let parts: Vec<Result<C64>> = triples
        .par_iter()
        .map(|&(g, a, b, w)| {
            let gf = g as f64;
            let coef = w * gf / (ppow(gf * a as f64, beta - 1.0) * ppow(gf * b as f64, delta - 1.0));
            let xi = x_integral(&prob.weights, e, gf * gf * (a * b) as f64)?;
            Ok(coef * kernel.eval(a, b, g)? * xi)
        })
        .collect();
    let mut sum = c(0.0, 0.0);
    for p in parts {
        sum += p?;
    }
    Ok(pre * sum)
}

/// The four f̃ kernels for a shift tuple. They depend on the weights only
/// through f₃, so one engine serves every X.
#[derive(Debug, Clone)]
pub struct QdpMainEngine {
    kernels: Vec<(&'static str, ShiftTuple, FTildeKernel)>,
}

impl QdpMainEngine {
    pub fn new(shifts: &ShiftTuple, weights: &WeightSpec, line: &LineIntegralSpec) -> Result<Self> {
        for (_, sh) in qdp_permutations(shifts) {
            pole_check(&sh)?;
        }
        let mut kernels = Vec::with_capacity(4);
        for (label, sh) in qdp_permutations(shifts) {
            kernels.push((label, sh, FTildeKernel::new(&sh, weights, line)?));
        }
        Ok(QdpMainEngine { kernels })
    }

    pub fn eval(&self, prob: &QdpProblem) -> Result<QdpMain> {
        let mut terms = Vec::with_capacity(4);
        for (label, sh, k) in &self.kernels {
            terms.push((label.to_string(), main_term_single(prob, sh, k)?));
        }
        let total = terms.iter().map(|t| t.1).sum();
        Ok(QdpMain { terms, total })
    }
}

/// The four permuted main terms and their sum.
pub fn main_term_qdp(prob: &QdpProblem, line: &LineIntegralSpec) -> Result<QdpMain> {
    QdpMainEngine::new(&prob.shifts, &prob.weights, line)?.eval(prob)
}

/// Dyadic window scales for S±: a ~ A, b ~ B, m_i ~ M_i, n_i ~ N_i, h ~ H.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub A: f64,
    pub B: f64,
    pub M1: f64,
    pub M2: f64,
    pub N1: f64,
    pub N2: f64,
    pub H: f64,
}

impl WindowSpec {
    pub fn scaled(&self, f: f64) -> Self {
        WindowSpec { M1: self.M1 * f, M2: self.M2 * f, N1: self.N1 * f, N2: self.N2 * f, ..*self }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("A", self.A),
            ("B", self.B),
            ("M1", self.M1),
            ("M2", self.M2),
            ("N1", self.N1),
            ("N2", self.N2),
            ("H", self.H),
        ] {
            if !(v >= 1.0 || (name == "H" && v > 0.0)) {
                return Err(Error::Precondition(format!("window scale {name} = {v} must be ≥ 1")));
            }
        }
        Ok(())
    }
}

/// Integers strictly inside (lo, 2lo), where the window bump is positive.
fn window(lo: f64) -> std::ops::RangeInclusive<u64> {
    let first = lo.floor() as u64 + 1;
    let last = (2.0 * lo).ceil() as u64 - 1;
    first..=last
}

fn w(x: f64) -> f64 {
    bump_phi(x)
}

/// S± = Σ_{am₁m₂ − bn₁n₂ = ±h ≠ 0} α_a β_b W₀(h/H) W₁(m₁/M₁) W₂(m₂/M₂) W₃(n₁/N₁) W₄(n₂/N₂),
/// every W being the bump Φ and the coefficients restricted to [A,2A], [B,2B].
pub fn brute_force_s_pm(
    win: &WindowSpec,
    coeffs_a: &DirichletCoefficients,
    coeffs_b: &DirichletCoefficients,
    sign: i32,
) -> Result<C64> {
    win.validate()?;
    let sgn = if sign >= 0 { 1.0 } else { -1.0 };
    let mut acc = c(0.0, 0.0);
    let a_range: Vec<(u64, C64)> = coeffs_a.nonzero().filter(|&(a, _)| a as f64 >= win.A && a as f64 <= 2.0 * win.A).collect();
    let b_range: Vec<(u64, C64)> = coeffs_b.nonzero().filter(|&(b, _)| b as f64 >= win.B && b as f64 <= 2.0 * win.B).collect();
    for &(a, xa) in &a_range {
        for m1 in window(win.M1) {
            let w1 = w(m1 as f64 / win.M1);
            for m2 in window(win.M2) {
                let w2 = w(m2 as f64 / win.M2);
                let x = (a * m1 * m2) as f64;
                for &(b, yb) in &b_range {
                    for n1 in window(win.N1) {
                        let w3 = w(n1 as f64 / win.N1);
                        let bn1 = (b * n1) as f64;
                        // h = sgn (x − bn₁n₂) in (H, 2H)
                        let (ylo, yhi) = if sgn > 0.0 { (x - 2.0 * win.H, x - win.H) } else { (x + win.H, x + 2.0 * win.H) };
                        let lo = (ylo / bn1).ceil().max(1.0) as u64;
                        let hi = (yhi / bn1).floor().max(0.0) as u64;
                        for n2 in lo..=hi {
                            let h = sgn * (x - bn1 * n2 as f64);
                            if h <= 0.0 {
                                continue;
                            }
                            let v = w(h / win.H) * w(n2 as f64 / win.N2);
                            if v != 0.0 {
                                acc += xa * yb * w1 * w2 * w3 * v;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// ∫₀^∞ W₂(bn₁x/(dM₂)) W₄(am₁x/(dN₂)) dx on the overlap of the two supports.
pub fn unbalanced_inner_integral(p: f64, q: f64, panels: usize) -> f64 {
    // W₂(p x) W₄(q x): supports (1/p, 2/p) and (1/q, 2/q).
    let lo = (1.0 / p).max(1.0 / q);
    let hi = (2.0 / p).min(2.0 / q);
    if hi <= lo {
        return 0.0;
    }
    Composite::new(lo, hi, panels, 16).integrate(|x| w(p * x) * w(q * x))
}

/// M = Σ_{(am₁, bn₁) = d} α_a β_b W₀(dh/H) W₁(m₁/M₁) W₃(n₁/N₁) ∫ W₂(bn₁x/(dM₂)) W₄(am₁x/(dN₂)) dx.
pub fn main_term_unbalanced(win: &WindowSpec, coeffs_a: &DirichletCoefficients, coeffs_b: &DirichletCoefficients) -> Result<C64> {
    win.validate()?;
    let mut acc = c(0.0, 0.0);
    let a_range: Vec<(u64, C64)> = coeffs_a.nonzero().filter(|&(a, _)| a as f64 >= win.A && a as f64 <= 2.0 * win.A).collect();
    let b_range: Vec<(u64, C64)> = coeffs_b.nonzero().filter(|&(b, _)| b as f64 >= win.B && b as f64 <= 2.0 * win.B).collect();
    for &(a, xa) in &a_range {
        for m1 in window(win.M1) {
            let w1 = w(m1 as f64 / win.M1);
            for &(b, yb) in &b_range {
                for n1 in window(win.N1) {
                    let w3 = w(n1 as f64 / win.N1);
                    let d = gcd(a * m1, b * n1);
                    let df = d as f64;
                    let mut w0 = 0.0;
                    for h in 1..=((2.0 * win.H / df).ceil() as u64) {
                        w0 += w(df * h as f64 / win.H);
                    }
                    if w0 == 0.0 {
                        continue;
                    }
                    let p = (b * n1) as f64 / (df * win.M2);
                    let q = (a * m1) as f64 / (df * win.N2);
                    acc += xa * yb * w0 * w1 * w3 * unbalanced_inner_integral(p, q, 8);
                }
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_cutoff_shape() {
        assert_eq!(smooth_cutoff(0.2), 1.0);
        assert_eq!(smooth_cutoff(1.2), 0.0);
        assert!((smooth_cutoff(0.75) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = smooth_cutoff(0.5 + i as f64 / 200.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn window_ranges() {
        assert_eq!(window(10.0), 11..=19);
        assert_eq!(window(0.75), 1..=1);
        assert!(window(1.0).is_empty());
    }

    #[test]
    fn disjoint_supports_give_zero() {
        assert_eq!(unbalanced_inner_integral(1.0, 10.0, 4), 0.0);
    }

    #[test]
    fn empty_coefficients() {
        let w = WeightSpec::bump(2.0, 10.0, 10.0);
        let p = QdpProblem::new(
            DirichletCoefficients::new(vec![]),
            DirichletCoefficients::ones(2),
            ShiftTuple::zero(),
            w,
        )
        .unwrap();
        assert_eq!(brute_force_s(&p).unwrap().value, c(0.0, 0.0));
    }
}
