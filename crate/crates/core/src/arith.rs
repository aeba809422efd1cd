//! Integer arithmetic and the finite Euler products: σ_{α,β}, c_p, the local
//! factors B, η_a and η_{a,b}.

use crate::error::{Error, Result};
use crate::specialfn::{zeta, ZetaAccuracy};
use crate::verify::Mutation;
use crate::{c, finite, C64};

pub const INT_CAP: u64 = 1_000_000_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization as ascending (p, ν) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(pub Vec<(u64, u32)>);

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.0 {
            let len = out.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Trial division with a mod-30 wheel.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 || n > INT_CAP {
        return Err(Error::Domain(format!("factorize: n = {n} outside [1, 1e12]")));
    }
    let mut out = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += STEPS[i];
        i = (i + 1) % 8;
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(Factorization(out))
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

/// p^{-w} for real p > 0.
pub(crate) fn ppow(p: f64, w: C64) -> C64 {
    (-w * p.ln()).exp()
}

/// The four shifts (α, β, γ, δ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftTuple {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
}

impl ShiftTuple {
    pub const MAX_MODULUS: f64 = 0.5;

    pub fn new(alpha: C64, beta: C64, gamma: C64, delta: C64) -> Result<Self> {
        let st = ShiftTuple { alpha, beta, gamma, delta };
        for (name, z) in ["α", "β", "γ", "δ"].iter().zip(st.as_array()) {
            if !finite(z) || z.norm() > Self::MAX_MODULUS {
                return Err(Error::Domain(format!("shift {name} = {z} outside |z| ≤ 0.5")));
            }
        }
        Ok(st)
    }

    pub fn real(a: f64, b: f64, g: f64, d: f64) -> Result<Self> {
        Self::new(c(a, 0.0), c(b, 0.0), c(g, 0.0), c(d, 0.0))
    }

    pub fn zero() -> Self {
        let z = c(0.0, 0.0);
        ShiftTuple { alpha: z, beta: z, gamma: z, delta: z }
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn sum(&self) -> C64 {
        self.alpha + self.beta + self.gamma + self.delta
    }

    pub fn conj(&self) -> Self {
        ShiftTuple {
            alpha: self.alpha.conj(),
            beta: self.beta.conj(),
            gamma: self.gamma.conj(),
            delta: self.delta.conj(),
        }
    }

    /// (γ, δ, α, β)
    pub fn swap_sides(&self) -> Self {
        ShiftTuple { alpha: self.gamma, beta: self.delta, gamma: self.alpha, delta: self.beta }
    }

    /// (β, α, γ, δ)
    pub fn swap_ab(&self) -> Self {
        ShiftTuple { alpha: self.beta, beta: self.alpha, ..*self }
    }

    /// (α, β, δ, γ)
    pub fn swap_cd(&self) -> Self {
        ShiftTuple { gamma: self.delta, delta: self.gamma, ..*self }
    }

    /// (−γ, −δ, −α, −β)
    pub fn dual(&self) -> Self {
        ShiftTuple { alpha: -self.gamma, beta: -self.delta, gamma: -self.alpha, delta: -self.beta }
    }

    /// (−δ, −γ, −β, −α)
    pub fn reversed_neg(&self) -> Self {
        ShiftTuple { alpha: -self.delta, beta: -self.gamma, gamma: -self.beta, delta: -self.alpha }
    }

    /// The four pairwise sums feeding ζ(1+x+y): α+γ, α+δ, β+γ, β+δ.
    pub fn cross_sums(&self) -> [(&'static str, C64); 4] {
        [
            ("α+γ", self.alpha + self.gamma),
            ("α+δ", self.alpha + self.delta),
            ("β+γ", self.beta + self.gamma),
            ("β+δ", self.beta + self.delta),
        ]
    }
}

/// Finite sequence a_1, ..., a_N (stored 0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCoefficients {
    values: Vec<C64>,
}

impl DirichletCoefficients {
    pub fn new(values: Vec<C64>) -> Self {
        DirichletCoefficients { values }
    }

    pub fn delta1() -> Self {
        Self::new(vec![c(1.0, 0.0)])
    }

    pub fn ones(n: usize) -> Self {
        Self::new(vec![c(1.0, 0.0); n])
    }

    pub fn support_bound(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, n: u64) -> C64 {
        if n == 0 {
            return c(0.0, 0.0);
        }
        self.values.get((n - 1) as usize).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == c(0.0, 0.0))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (u64, C64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != c(0.0, 0.0))
            .map(|(i, v)| (i as u64 + 1, *v))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.values.iter().map(|v| v.conj()).collect())
    }

    /// Σ a_n n^{-s}
    pub fn eval(&self, s: C64) -> C64 {
        self.nonzero().map(|(n, a)| a * ppow(n as f64, s)).sum()
    }

    /// Soft check of a_n ≪ n^ε; returns a warning instead of failing.
    pub fn growth_warning(&self) -> Option<String> {
        let worst = self
            .nonzero()
            .map(|(n, a)| (n, a.norm() / (n as f64).powf(0.25)))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (worst.1 > 1e3).then(|| format!("coefficient at n = {} is large ({:e} n^(1/4))", worst.0, worst.1))
    }
}

/// σ_{x,y}(n) = Σ_{n₁n₂=n} n₁^{-x} n₂^{-y}.
pub fn sigma_shift(n: u64, x: C64, y: C64) -> C64 {
    assert!(n >= 1, "sigma_shift: n must be positive");
    let f = factorize(n).expect("sigma_shift: n within cap");
    f.0.iter().map(|&(p, e)| sigma_prime_power(p, e, x, y)).product()
}

/// σ_{x,y}(p^j) as Σ_{i=0}^{j} p^{-ix-(j-i)y}.
fn sigma_prime_power(p: u64, j: u32, x: C64, y: C64) -> C64 {
    let px = ppow(p as f64, x);
    let py = ppow(p as f64, y);
    let mut a = c(1.0, 0.0);
    let mut terms = Vec::with_capacity(j as usize + 1);
    for _ in 0..=j {
        terms.push(a);
        a *= px;
    }
    let mut sum = c(0.0, 0.0);
    let mut b = c(1.0, 0.0);
    for i in (0..=j as usize).rev() {
        sum += terms[i] * b;
        b *= py;
    }
    sum
}

/// c_p(x,y,z) = (1 − p^{-1-x})(1 − p^{-1-y})(1 − p^{-2-z})^{-1}.
pub fn c_p(p: u64, x: C64, y: C64, z: C64) -> Result<C64> {
    c_p_with(None, p, x, y, z)
}

pub(crate) fn c_p_with(m: Option<Mutation>, p: u64, x: C64, y: C64, z: C64) -> Result<C64> {
    let pf = p as f64;
    let e1 = if m == Some(Mutation::CpExponent) { 2.0 } else { 1.0 };
    let den = if m == Some(Mutation::CpDenominatorSign) {
        1.0 + ppow(pf, 2.0 + z)
    } else {
        1.0 - ppow(pf, 2.0 + z)
    };
    if den.norm() < 1e-300 {
        return Err(Error::Pole(format!("c_p: p^(2+z) = 1 at p = {p}, z = {z}")));
    }
    Ok((1.0 - ppow(pf, e1 + x)) * (1.0 - ppow(pf, 1.0 + y)) / den)
}

/// Local factor of B_{α,β,γ,δ,a}(s) at p^ν ‖ a.
pub fn local_b(p: u64, nu: u32, shifts: &ShiftTuple, s: C64) -> Result<C64> {
    local_b_with(None, p, nu, shifts, s)
}

pub(crate) fn local_b_with(m: Option<Mutation>, p: u64, nu: u32, shifts: &ShiftTuple, s: C64) -> Result<C64> {
    if nu == 0 {
        return Ok(c(1.0, 0.0));
    }
    let pf = p as f64;
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    let e = if m == Some(Mutation::LocalBSeriesExponent) { 2.0 } else { 1.0 };
    let x = ppow(pf, e + 2.0 * s);
    let grow = |u: C64, v: C64| pf.powf((-u.re).max(-v.re));
    let ratio = x.norm() * grow(alpha, beta) * grow(gamma, delta);
    if !(ratio < 0.999) {
        return Err(Error::Domain(format!(
            "local_B: series in p^-(1+2s) diverges (growth ratio {ratio:.3}) at p = {p}, s = {s}"
        )));
    }
    let mut num = c(0.0, 0.0);
    let mut den = c(0.0, 0.0);
    let mut xj = c(1.0, 0.0);
    for j in 0..20_000u32 {
        let sab = sigma_prime_power(p, j, alpha, beta);
        let tn = sab * sigma_prime_power(p, j + nu, gamma, delta) * xj;
        let td = sab * sigma_prime_power(p, j, gamma, delta) * xj;
        num += tn;
        den += td;
        if j >= 2 && tn.norm() < 1e-14 * num.norm() && td.norm() < 1e-14 * den.norm() {
            let v = num / den;
            return if finite(v) { Ok(v) } else { Err(Error::Domain(format!("local_B: zero denominator at p = {p}"))) };
        }
        xj *= x;
    }
    Err(Error::Budget(format!("local_B: series at p = {p} did not converge")))
}

/// B_{α,β,γ,δ,a}(s) = ∏_{p^ν ‖ a} local_b(p, ν).
pub fn b_factor(a: u64, shifts: &ShiftTuple, s: C64) -> Result<C64> {
    b_factor_with(None, a, shifts, s)
}

pub(crate) fn b_factor_with(m: Option<Mutation>, a: u64, shifts: &ShiftTuple, s: C64) -> Result<C64> {
    if a == 0 {
        return Err(Error::Precondition("B_factor: a must be positive".into()));
    }
    let mut out = c(1.0, 0.0);
    for (p, nu) in factorize(a)?.0 {
        out *= local_b_with(m, p, nu, shifts, s)?;
    }
    Ok(out)
}

/// Closed form of B_{α,−δ,γ,−β,p^ν} at s = 0 through B⁽⁰⁾, B⁽¹⁾, B⁽²⁾.
pub fn local_b_dual_closed_form(p: u64, nu: u32, shifts: &ShiftTuple) -> C64 {
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    let pf = p as f64;
    // pw(w) = p^w
    let pw = |w: C64| ppow(pf, -w);
    let n = nu as f64;
    let b0 = pw(-(n + 1.0) * gamma) - pw((n + 1.0) * beta);
    let b1 = (pw(-alpha) + pw(delta)) * pw(beta - gamma) * (pw(-n * gamma) - pw(n * beta));
    let b2 = pw(-alpha + beta - gamma + delta) * (pw(beta - n * gamma) - pw(n * beta - gamma));
    let pre = 1.0 / (1.0 - pw(-(2.0 + alpha - beta + gamma - delta))) * pw(-beta) / (pw(-(beta + gamma)) - 1.0);
    pre * (b0 - b1 / pf + b2 / (pf * pf))
}

/// η_{α,β,γ,δ,a}(u,v,s) = Σ_{ℓ|a} ℓ^{-γ+δ-2v-s} ∏_{p | a/ℓ} c_p(α−β+γ−δ+2u+2v+s, γ−δ+2v, α−β+γ−δ+2u+2v).
pub fn eta_a(a: u64, shifts: &ShiftTuple, u: C64, v: C64, s: C64) -> Result<C64> {
    eta_a_with(None, a, shifts, u, v, s)
}

pub(crate) fn eta_a_with(m: Option<Mutation>, a: u64, shifts: &ShiftTuple, u: C64, v: C64, s: C64) -> Result<C64> {
    if a == 0 {
        return Err(Error::Precondition("eta_a: a must be positive".into()));
    }
    let ShiftTuple { alpha, beta, gamma, delta } = *shifts;
    let w = alpha - beta + 2.0 * u;
    let z = if m == Some(Mutation::EtaSecondArgSign) { delta - gamma + 2.0 * v } else { gamma - delta + 2.0 * v };
    let zz = gamma - delta + 2.0 * v;
    let ell_exp = if m == Some(Mutation::EtaDivisorExponentSign) {
        gamma - delta - 2.0 * v - s
    } else {
        -gamma + delta - 2.0 * v - s
    };
    let fac = factorize(a)?;
    let mut cps = Vec::with_capacity(fac.0.len());
    for p in fac.primes() {
        cps.push((p, c_p_with(m, p, w + zz + s, z, w + zz)?));
    }
    let mut sum = c(0.0, 0.0);
    for ell in fac.divisors() {
        let rest = a / ell;
        let prod: C64 = cps.iter().filter(|(p, _)| rest % p == 0).map(|(_, v)| *v).product();
        // ℓ^{e}
        sum += ppow(ell as f64, -ell_exp) * prod;
    }
    Ok(sum)
}

/// η_{α,β,γ,δ,a,b}(u,v,s) = η_{α,β,γ,δ,a}(u,v,s) · η_{γ,δ,α,β,b}(v,u,s).
///
/// The b-factor takes (v, u): that is the order produced by the coprime
/// factorization of the (m₁, n₁) Dirichlet series, and the two orders agree
/// when u = v.
pub fn eta_ab(a: u64, b: u64, shifts: &ShiftTuple, u: C64, v: C64, s: C64) -> Result<C64> {
    eta_ab_with(None, a, b, shifts, u, v, s)
}

pub(crate) fn eta_ab_with(
    m: Option<Mutation>,
    a: u64,
    b: u64,
    shifts: &ShiftTuple,
    u: C64,
    v: C64,
    s: C64,
) -> Result<C64> {
    if gcd(a, b) != 1 {
        return Err(Error::Precondition(format!("eta_ab: gcd({a}, {b}) ≠ 1")));
    }
    Ok(eta_a_with(m, a, shifts, u, v, s)? * eta_a_with(m, b, &shifts.swap_sides(), v, u, s)?)
}

/// Parameters of the coprime (m₁, n₁) Dirichlet series
/// Σ d^{1-s} m₁^{-1-w} n₁^{-1-z} over d = (m₁,n₁), (m₁, b/k) = 1, (n₁, a/ℓ) = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirSeriesParams {
    pub a: u64,
    pub b: u64,
    pub k: u64,
    pub ell: u64,
    pub w: C64,
    pub z: C64,
    pub s: C64,
}

impl DirSeriesParams {
    fn validate(&self) -> Result<()> {
        if gcd(self.a, self.b) != 1 || self.b % self.k != 0 || self.a % self.ell != 0 {
            return Err(Error::Precondition(format!(
                "dirseries: need (a,b) = 1, k | b, ℓ | a; got a={} b={} k={} ℓ={}",
                self.a, self.b, self.k, self.ell
            )));
        }
        if self.w.re <= 0.0 || self.z.re <= 0.0 {
            return Err(Error::Domain("dirseries: need Re w, Re z > 0".into()));
        }
        Ok(())
    }

    /// Bound on the part of the series outside the box m₁, n₁ ≤ n.
    pub fn tail_bound(&self, n: u64) -> f64 {
        let nf = n as f64;
        let (rw, rz) = (self.w.re, self.z.re);
        let zeta_real = |x: f64| 1.0 + 1.0 / (x - 1.0);
        let dmax = (1.0 - self.s.re).max(0.0);
        let grow = nf.powf(dmax);
        grow * (nf.powf(-rw) / rw * zeta_real(1.0 + rz) + nf.powf(-rz) / rz * zeta_real(1.0 + rw))
    }
}

/// ζ(1+w+z+s)ζ(1+w)ζ(1+z)/ζ(2+w+z) · ∏_{p|a/ℓ} c_p(w+z+s, z, w+z) ∏_{p|b/k} c_p(w+z+s, w, w+z).
pub fn dirseries_closed_form(prm: &DirSeriesParams) -> Result<C64> {
    dirseries_closed_form_with(None, prm)
}

pub(crate) fn dirseries_closed_form_with(m: Option<Mutation>, prm: &DirSeriesParams) -> Result<C64> {
    prm.validate()?;
    let acc = ZetaAccuracy::default();
    let DirSeriesParams { w, z, s, .. } = *prm;
    let mut v = zeta(1.0 + w + z + s, &acc)? * zeta(1.0 + w, &acc)? * zeta(1.0 + z, &acc)? / zeta(2.0 + w + z, &acc)?;
    for p in factorize(prm.a / prm.ell)?.primes() {
        v *= c_p_with(m, p, w + z + s, z, w + z)?;
    }
    for p in factorize(prm.b / prm.k)?.primes() {
        v *= c_p_with(m, p, w + z + s, w, w + z)?;
    }
    Ok(v)
}

fn coprime_powers(n: u64, modulus: u64, w: C64) -> Vec<C64> {
    let mut out = vec![c(0.0, 0.0); n as usize + 1];
    for i in 1..=n {
        if gcd(i, modulus) == 1 {
            out[i as usize] = ppow(i as f64, 1.0 + w);
        }
    }
    out
}

/// Box-truncated series (m₁, n₁ ≤ n) by direct double loop; O(n²).
pub fn dirseries_brute(prm: &DirSeriesParams, n: u64) -> Result<C64> {
    prm.validate()?;
    let f = coprime_powers(n, prm.b / prm.k, prm.w);
    let g = coprime_powers(n, prm.a / prm.ell, prm.z);
    let mut total = c(0.0, 0.0);
    for m1 in 1..=n {
        let fm = f[m1 as usize];
        if fm == c(0.0, 0.0) {
            continue;
        }
        let mut row = c(0.0, 0.0);
        for n1 in 1..=n {
            let gn = g[n1 as usize];
            if gn == c(0.0, 0.0) {
                continue;
            }
            let d = gcd(m1, n1);
            let dpow = if d == 1 { c(1.0, 0.0) } else { ppow(d as f64, prm.s - 1.0) };
            row += dpow * gn;
        }
        total += fm * row;
    }
    Ok(total)
}

/// Box-truncated series (m₁, n₁ ≤ n) regrouped through d^{1-s} = Σ_{e|d} J(e)
/// with J = μ ∗ id^{1-s}; O(n log n).
pub fn dirseries_truncated(prm: &DirSeriesParams, n: u64) -> Result<C64> {
    prm.validate()?;
    let f = coprime_powers(n, prm.b / prm.k, prm.w);
    let g = coprime_powers(n, prm.a / prm.ell, prm.z);
    let nn = n as usize;
    let mut spf = vec![0usize; nn + 1];
    for i in 2..=nn {
        if spf[i] == 0 {
            let mut j = i;
            while j <= nn {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    let one_minus_s = 1.0 - prm.s;
    let mut jv = vec![c(0.0, 0.0); nn + 1];
    if nn >= 1 {
        jv[1] = c(1.0, 0.0);
    }
    for e in 2..=nn {
        let p = spf[e];
        let mut rest = e;
        let mut k = 0;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        let pk = ppow(p as f64, -(k as f64) * one_minus_s);
        let pk1 = ppow(p as f64, -((k - 1) as f64) * one_minus_s);
        jv[e] = jv[rest] * (pk - pk1);
    }
    let mut total = c(0.0, 0.0);
    for e in 1..=nn {
        let mut fe = c(0.0, 0.0);
        let mut ge = c(0.0, 0.0);
        let mut j = e;
        while j <= nn {
            fe += f[j];
            ge += g[j];
            j += e;
        }
        total += jv[e] * fe * ge;
    }
    Ok(total)
}
