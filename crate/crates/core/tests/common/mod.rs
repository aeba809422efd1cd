//! Independent reference implementations used as oracles by the integration
//! tests. Nothing here calls the library's evaluators for the quantity being
//! checked.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use zmlab_core::arith::{DirichletCoefficients, ShiftTuple};
use zmlab_core::divisor::QdpProblem;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// n^{-w}
pub fn npow(n: f64, w: C64) -> C64 {
    (-w * n.ln()).exp()
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// ζ(s) through the Dirichlet eta function with Borwein's acceleration.
/// The weights (d_n − d_k)/d_n are accumulated in log space so that n can
/// exceed a thousand without overflow.
pub fn borwein_zeta(s: C64) -> C64 {
    let n = (1.3 * s.im.abs() + 40.0).ceil() as usize;
    let nf = n as f64;
    let mut log_t = Vec::with_capacity(n + 1);
    let mut lt = -(nf.ln());
    for i in 0..=n {
        log_t.push(lt);
        let fi = i as f64;
        if i < n {
            lt += (4.0 * (nf + fi) * (nf - fi)).ln() - ((2.0 * fi + 1.0) * (2.0 * fi + 2.0)).ln();
        }
    }
    let m = log_t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_t.iter().map(|l| (l - m).exp()).collect();
    // suffix[k] = Σ_{i > k} w_i
    let mut suffix = vec![0.0; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] + w[k + 1];
    }
    let total = suffix[0] + w[0];
    let mut eta = c(0.0, 0.0);
    for k in 0..n {
        let e = suffix[k] / total;
        let term = npow((k + 1) as f64, s) * e;
        if k % 2 == 0 {
            eta += term;
        } else {
            eta -= term;
        }
    }
    eta / (1.0 - (c(1.0, 0.0) - s).exp2())
}

trait Exp2 {
    fn exp2(self) -> C64;
}

impl Exp2 for C64 {
    fn exp2(self) -> C64 {
        (self * std::f64::consts::LN_2).exp()
    }
}

/// log Γ(z) from the Stirling series after shifting Re z above 30.
pub fn stirling_log_gamma(z: C64) -> C64 {
    const B: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let mut shift = c(0.0, 0.0);
    let mut w = z;
    while w.re < 30.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut acc = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * std::f64::consts::PI).ln();
    let w2 = w * w;
    let mut wp = w;
    for (k, b) in B.iter().enumerate() {
        let k2 = 2.0 * (k + 1) as f64;
        acc += b / (k2 * (k2 - 1.0)) / wp;
        wp *= w2;
    }
    acc - shift
}

pub fn divisors_brute(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn sigma_brute(n: u64, x: C64, y: C64) -> C64 {
    divisors_brute(n).iter().map(|&d| npow(d as f64, x) * npow((n / d) as f64, y)).sum()
}

pub fn primes_of(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| n % p == 0 && (2..p).all(|q| p % q != 0)).collect()
}

pub fn c_p_direct(p: u64, x: C64, y: C64, z: C64) -> C64 {
    let pf = p as f64;
    (1.0 - npow(pf, 1.0 + x)) * (1.0 - npow(pf, 1.0 + y)) / (1.0 - npow(pf, 2.0 + z))
}

/// η_{α,β,γ,δ,a}(u,v,s) by a plain ℓ-loop.
pub fn eta_a_brute(a: u64, sh: &ShiftTuple, u: C64, v: C64, s: C64) -> C64 {
    let (al, be, ga, de) = (sh.alpha, sh.beta, sh.gamma, sh.delta);
    let mut tot = c(0.0, 0.0);
    for l in divisors_brute(a) {
        let mut term = npow(l as f64, ga - de + 2.0 * v + s);
        for p in primes_of(a / l) {
            term *= c_p_direct(p, al - be + ga - de + 2.0 * u + 2.0 * v + s, ga - de + 2.0 * v, al - be + ga - de + 2.0 * u + 2.0 * v);
        }
        tot += term;
    }
    tot
}

/// Finite Dirichlet series Σ c_n n^{-s}.
#[derive(Debug, Clone, Default)]
pub struct DirPoly(pub BTreeMap<u64, C64>);

impl DirPoly {
    pub fn one() -> Self {
        let mut m = BTreeMap::new();
        m.insert(1, c(1.0, 0.0));
        DirPoly(m)
    }

    pub fn mul(&self, o: &DirPoly, cap: u64) -> DirPoly {
        let mut m = BTreeMap::new();
        for (&a, &x) in &self.0 {
            for (&b, &y) in &o.0 {
                if a * b <= cap {
                    *m.entry(a * b).or_insert(c(0.0, 0.0)) += x * y;
                }
            }
        }
        DirPoly(m)
    }

    pub fn add(&mut self, o: &DirPoly) {
        for (&a, &x) in &o.0 {
            *self.0.entry(a).or_insert(c(0.0, 0.0)) += x;
        }
    }

    pub fn get(&self, n: u64) -> C64 {
        self.0.get(&n).copied().unwrap_or(c(0.0, 0.0))
    }
}

/// η_{x,y,z,w,a}(0,0,s) as a Dirichlet polynomial in s, with D = x−y+z−w.
fn eta_poly(a: u64, x: C64, y: C64, z: C64, w: C64, cap: u64) -> DirPoly {
    let d = x - y + z - w;
    let mut out = DirPoly::default();
    for l in divisors_brute(a) {
        let mut term = DirPoly::one();
        let mut m = BTreeMap::new();
        m.insert(l, npow(l as f64, z - w));
        term = term.mul(&DirPoly(m), u64::MAX);
        for p in primes_of(a / l) {
            let pf = p as f64;
            let k = (1.0 - npow(pf, 1.0 + z - w)) / (1.0 - npow(pf, 2.0 + d));
            let mut f = BTreeMap::new();
            f.insert(1, k);
            f.insert(p, -k * npow(pf, 1.0 + d));
            term = term.mul(&DirPoly(f), u64::MAX);
        }
        out.add(&term);
    }
    DirPoly(out.0.into_iter().filter(|(n, _)| *n <= cap).collect())
}

/// F(a,b,g) = Σ_n c(n) f₃(n) where Σ c(n) n^{-s} = ζ(s)ζ(1+D+s) g^{-s} η_{a,b}(0,0,s):
/// the contour integral collapses to this finite sum because f₃ has compact
/// support.
pub fn f_tilde_dirichlet(sh: &ShiftTuple, a: u64, b: u64, g: u64, f3: &dyn Fn(f64) -> f64, cap: u64) -> C64 {
    let (al, be, ga, de) = (sh.alpha, sh.beta, sh.gamma, sh.delta);
    let d = al - be + ga - de;
    let mut zz = BTreeMap::new();
    for n in 1..=cap {
        let v: C64 = divisors_brute(n).iter().map(|&e| npow(e as f64, 1.0 + d)).sum();
        zz.insert(n, v);
    }
    let mut gp = BTreeMap::new();
    gp.insert(g, c(1.0, 0.0));
    let eta = eta_poly(a, al, be, ga, de, cap).mul(&eta_poly(b, ga, de, al, be, cap), cap);
    let full = DirPoly(zz).mul(&DirPoly(gp), cap).mul(&eta, cap);
    (1..=cap).map(|n| full.get(n) * f3(n as f64)).sum()
}

/// S by a plain six-fold box loop.
pub fn brute_force_s_naive(prob: &QdpProblem) -> C64 {
    let cut = prob.enumeration_cutoff;
    let sh = prob.shifts;
    let w = &prob.weights;
    let mut acc = c(0.0, 0.0);
    for (a, xa) in prob.coeffs_a.nonzero() {
        for (b, yb) in prob.coeffs_b.nonzero() {
            for m1 in 1..=cut {
                for m2 in 1..=cut {
                    for n1 in 1..=cut {
                        for n2 in 1..=cut {
                            if m1 * m2 * n1 * n2 > cut {
                                continue;
                            }
                            let x = (a * m1 * m2) as f64;
                            let y = (b * n1 * n2) as f64;
                            if x <= y {
                                continue;
                            }
                            let f = (w.f1)(x) * (w.f2)(y) * (w.f3)(x - y) * (w.k)((m1 * m2 * n1 * n2) as f64);
                            acc += xa
                                * yb.conj()
                                * npow(m1 as f64, sh.alpha)
                                * npow(m2 as f64, sh.beta)
                                * npow(n1 as f64, sh.gamma)
                                * npow(n2 as f64, sh.delta)
                                * f;
                        }
                    }
                }
            }
        }
    }
    acc
}

pub fn coeffs(v: &[f64]) -> DirichletCoefficients {
    DirichletCoefficients::new(v.iter().map(|&x| c(x, 0.0)).collect())
}

pub fn trapezoid_nonneg<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for i in 1..n {
        s += f(a + i as f64 * h);
    }
    s * h
}
