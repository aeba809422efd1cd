//! Smoothing kernels: G, V*(x), g(s,t), V(x,t), X(t), the bump Φ and the
//! vertical-line quadrature engine.

use crate::arith::{ppow, ShiftTuple};
use crate::error::{Error, Result};
use crate::quad::Composite;
use crate::specialfn::log_gamma;
use crate::verify::Mutation;
use crate::{c, finite, C64};
use std::f64::consts::PI;

/// G(s) = exp(κ s²) · Q(s)/Q(0), Q(s) = ∏ (s² − r²).
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingSpec {
    pub shifts: Option<ShiftTuple>,
    /// The half-sums r; the zeros of G are ±r.
    pub half_sums: Vec<C64>,
    /// 1/Q(0)
    pub normalization: C64,
    pub kappa: f64,
}

/// G built from the shifts: zeros at ±(x+y)/2 for (x,y) in {α,β}×{γ,δ} and
/// at ±(α−β)/2, ±(γ−δ)/2, times exp(s²).
///
/// The last two pairs are the poles that the permuted tuples of the
/// six-term formula (for instance (−γ, β, −α, δ)) bring in at half-sums of
/// their own cross pairs.
#[allow(non_snake_case)]
pub fn build_G(shifts: &ShiftTuple) -> Result<SmoothingSpec> {
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    let named = [
        ("α+γ", alpha + gamma),
        ("α+δ", alpha + delta),
        ("β+γ", beta + gamma),
        ("β+δ", beta + delta),
        ("α−β", alpha - beta),
        ("γ−δ", gamma - delta),
    ];
    let mut half_sums = Vec::with_capacity(6);
    for (name, x) in named {
        if x.norm() < 1e-12 {
            return Err(Error::Degenerate(format!("{name} = 0 makes Q(0) = 0")));
        }
        half_sums.push(x / 2.0);
    }
    let q0: C64 = half_sums.iter().map(|r| -r * r).product();
    Ok(SmoothingSpec { shifts: Some(*shifts), half_sums, normalization: 1.0 / q0, kappa: 1.0 })
}

impl SmoothingSpec {
    /// G(s) = exp(κ s²) with no engineered zeros.
    pub fn gaussian(kappa: f64) -> Self {
        assert!(kappa > 0.0);
        SmoothingSpec { shifts: None, half_sums: Vec::new(), normalization: c(1.0, 0.0), kappa }
    }

    /// All zeros ±r of Q.
    pub fn q_roots(&self) -> Vec<C64> {
        self.half_sums.iter().flat_map(|&r| [r, -r]).collect()
    }

    pub fn eval(&self, s: C64) -> C64 {
        let s2 = s * s;
        let mut q = self.normalization;
        for r in &self.half_sums {
            q *= s2 - r * r;
        }
        (self.kappa * s2).exp() * q
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegralSpec {
    pub abscissa: f64,
    pub half_height: f64,
    pub nodes: usize,
}

impl Default for LineIntegralSpec {
    fn default() -> Self {
        LineIntegralSpec { abscissa: 1.0, half_height: 12.0, nodes: 2048 }
    }
}

impl LineIntegralSpec {
    pub fn new(abscissa: f64, half_height: f64, nodes: usize) -> Result<Self> {
        if nodes < 64 || !(half_height >= 10.0) || !abscissa.is_finite() {
            return Err(Error::Domain(format!(
                "LineIntegralSpec: need nodes ≥ 64 and half_height ≥ 10, got {nodes}, {half_height}"
            )));
        }
        Ok(LineIntegralSpec { abscissa, half_height, nodes })
    }

    pub fn with_abscissa(self, abscissa: f64) -> Self {
        LineIntegralSpec { abscissa, ..self }
    }

    /// Points s_j on the line with weights w_j such that
    /// (1/2πi)∫ f(s) ds ≈ Σ w_j f(s_j).
    pub fn points(&self) -> Vec<(C64, f64)> {
        let rule = Composite::with_nodes(-self.half_height, self.half_height, self.nodes);
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&tau, &w)| (c(self.abscissa, tau), w / (2.0 * PI)))
            .collect()
    }
}

/// (1/2πi)∫_{(c)} f(s) ds by composite Gauss–Legendre in Im s ∈ [−H, H].
pub fn line_integral<F>(mut integrand: F, line: &LineIntegralSpec) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    let mut acc = c(0.0, 0.0);
    for (s, w) in line.points() {
        let v = integrand(s)?;
        if !finite(v) {
            return Err(Error::Evaluation(s));
        }
        acc += v * w;
    }
    Ok(acc)
}

/// V*(x) = (1/2πi)∫ (G(s)/s)(2π)^{-2s} x^{-s} ds.
#[allow(non_snake_case)]
pub fn v_star(x: f64, G: &SmoothingSpec, line: &LineIntegralSpec) -> Result<C64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("v_star: x = {x} must be positive")));
    }
    let l = (4.0 * PI * PI * x).ln();
    line_integral(|s| Ok(G.eval(s) / s * (-s * l).exp()), line)
}

fn ln_gamma_ratio(shifts: &ShiftTuple, s: C64, t: f64) -> Result<C64> {
    let it = c(0.0, t);
    let mut acc = c(0.0, 0.0);
    for (w, sign) in [(shifts.alpha, 1.0), (shifts.beta, 1.0), (shifts.gamma, -1.0), (shifts.delta, -1.0)] {
        let base = 0.5 + w + sign * it;
        acc += log_gamma((base + s) / 2.0)? - log_gamma(base / 2.0)?;
    }
    Ok(acc)
}

/// g_{α,β,γ,δ}(s,t): product of the four Γ ratios.
pub fn g_ratio(s: C64, t: f64, shifts: &ShiftTuple) -> Result<C64> {
    Ok(ln_gamma_ratio(shifts, s, t)?.exp())
}

/// V_{α,β,γ,δ}(x,t) = (1/2πi)∫ (G(s)/s) g(s,t) π^{-2s} x^{-s} ds.
#[allow(non_snake_case)]
pub fn v_xt(x: f64, t: f64, shifts: &ShiftTuple, G: &SmoothingSpec, line: &LineIntegralSpec) -> Result<C64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("v_xt: x = {x} must be positive")));
    }
    let l = (PI * PI * x).ln();
    line_integral(|s| Ok(G.eval(s) / s * (ln_gamma_ratio(shifts, s, t)? - s * l).exp()), line)
}

/// X_{α,β,γ,δ}(t) = π^{α+β+γ+δ} ∏ Γ((½−w∓it)/2)/Γ((½+w±it)/2).
pub fn x_factor(t: f64, shifts: &ShiftTuple) -> Result<C64> {
    x_factor_with(None, t, shifts)
}

pub(crate) fn x_factor_with(m: Option<Mutation>, t: f64, shifts: &ShiftTuple) -> Result<C64> {
    let it = c(0.0, t);
    let r = |w: C64, sign: f64| -> Result<C64> {
        Ok(log_gamma((0.5 - w - sign * it) / 2.0)? - log_gamma((0.5 + w + sign * it) / 2.0)?)
    };
    // Paired so that conjugate ratios cancel exactly for zero shifts.
    let lg = (r(shifts.alpha, 1.0)? + r(shifts.gamma, -1.0)?) + (r(shifts.beta, 1.0)? + r(shifts.delta, -1.0)?);
    let sigma = shifts.sum();
    let pi_pow = if m == Some(Mutation::XFactorPiSign) { ppow(PI, sigma) } else { ppow(PI, -sigma) };
    Ok(pi_pow * lg.exp())
}

/// Φ(x) = exp(4 − 1/((x−1)(2−x))) on (1,2), zero elsewhere; Φ(1.5) = 1.
pub fn bump_phi(x: f64) -> f64 {
    if x <= 1.0 || x >= 2.0 {
        return 0.0;
    }
    let q = (x - 1.0) * (2.0 - x);
    (4.0 - 1.0 / q).exp()
}

/// Φ^{(j)}(x) for j ≤ 8 from the closed form Φ = exp(4 − 1/q), q = (x−1)(2−x).
pub fn bump_phi_derivative(x: f64, j: u32) -> Result<f64> {
    if j > 8 {
        return Err(Error::UnsupportedOrder(j));
    }
    if x <= 1.0 || x >= 2.0 {
        return Ok(0.0);
    }
    let j = j as usize;
    let q = (x - 1.0) * (2.0 - x);
    let dq = 3.0 - 2.0 * x;
    let ddq = -2.0;
    // h = 1/q from q h = 1.
    let mut h = [0.0f64; 10];
    h[0] = 1.0 / q;
    for n in 1..=j {
        let nf = n as f64;
        let mut v = nf * dq * h[n - 1];
        if n >= 2 {
            v += nf * (nf - 1.0) / 2.0 * ddq * h[n - 2];
        }
        h[n] = -v / q;
    }
    // Φ' = g'Φ with g = 4 − h.
    let mut phi = [0.0f64; 10];
    phi[0] = bump_phi(x);
    for n in 0..j {
        let mut v = 0.0;
        let mut binom = 1.0;
        for k in 0..=n {
            v += binom * (-h[k + 1]) * phi[n - k];
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        phi[n + 1] = v;
    }
    Ok(phi[j])
}
