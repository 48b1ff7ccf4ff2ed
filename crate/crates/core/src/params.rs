//! Problem parameters and the constants that depend only on them.

use crate::error::{domain, Result};
use crate::gamma::{ln_gamma, ln_gamma_ratio, ln_gamma_ratio_scaled};
use std::f64::consts::LN_2;

/// Degree and exponents of the Jacobi weight `(1 − x)^α (1 + x)^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    /// Validates `n ≥ 1`, `α > −1`, `β > −1`.
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("n must be at least 1"));
        }
        check_exponents(alpha, beta)?;
        Ok(Self { n, alpha, beta })
    }

    /// `κ = n + (α + β + 1)/2`.
    #[must_use]
    pub fn kappa(&self) -> f64 {
        kappa(self)
    }

    /// True inside the range where the expansions were validated:
    /// `n ≥ 20` and `α, β ≤ 5`.
    #[must_use]
    pub fn accuracy_guaranteed(&self) -> bool {
        self.n >= 20 && self.alpha <= 5.0 && self.beta <= 5.0
    }

    /// The same degree with `α` and `β` exchanged.
    #[must_use]
    pub fn swapped(&self) -> Self {
        Self {
            n: self.n,
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

pub(crate) fn check_exponents(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(domain(format!(
            "alpha must be finite and > -1, got {alpha}"
        )));
    }
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(domain(format!("beta must be finite and > -1, got {beta}")));
    }
    Ok(())
}

/// `κ = n + (α + β + 1)/2`.
#[must_use]
pub fn kappa(p: &JacobiParams) -> f64 {
    p.n as f64 + 0.5 * (p.alpha + p.beta + 1.0)
}

/// `ln ∫ (1 − x)^α (1 + x)^β dx = ln(2^{α+β+1} B(α+1, β+1))`.
pub fn log_total_mass(alpha: f64, beta: f64) -> Result<f64> {
    check_exponents(alpha, beta)?;
    Ok(
        (alpha + beta + 1.0) * LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
            - ln_gamma(alpha + beta + 2.0),
    )
}

/// `ln M`, with `M = 2^{α+β+1} Γ(n+α+1) Γ(n+β+1) / (n! Γ(n+α+β+1))` the
/// constant in the Gauss weight formula.
#[must_use]
pub fn gauss_mass_constant(p: &JacobiParams) -> f64 {
    let n = p.n as f64;
    let (a, b) = (p.alpha, p.beta);
    let s = a + b;
    if p.n <= SMALL_MASS_N {
        let m = small_mass(p.n, a, b);
        if m.is_finite() && m > 0.0 {
            return m.ln();
        }
    }
    (s + 1.0) * LN_2 + ln_gamma_ratio(n, a + 1.0, 1.0) + ln_gamma_ratio(n, b + 1.0, s + 1.0)
}

const SMALL_MASS_N: usize = 20;

// M = 2^{s+1} Γ(a+1)Γ(b+1)/Γ(s+1) · Π_{j≤n} (j+a)(j+b) / (j(j+s)), with the
// product accumulated in double-double
fn small_mass(n: usize, a: f64, b: f64) -> f64 {
    let s = two_sum(a, b);
    if s.0 + s.1 == -1.0 {
        // Γ(s+1) has a pole; the caller falls back to the log form
        return f64::NAN;
    }
    let (mut num, mut den) = ((1.0, 0.0), (1.0, 0.0));
    let mut log = 0.0;
    for (x, up) in [
        (two_sum(a, 1.0), true),
        (two_sum(b, 1.0), true),
        (dd_add(s, 1.0), false),
    ] {
        let (lg, f, g) = gamma_parts(x);
        if up {
            log += lg;
            num = dd_mul(num, f);
            den = dd_mul(den, g);
        } else {
            log -= lg;
            num = dd_mul(num, g);
            den = dd_mul(den, f);
        }
    }
    for j in 1..=n {
        let j = j as f64;
        num = dd_mul(dd_mul(num, two_sum(j, a)), two_sum(j, b));
        den = dd_mul(dd_mul(den, (j, 0.0)), dd_add(s, j));
    }
    let pow = 2f64.powf(s.0 + 1.0) * (LN_2 * s.1).exp();
    pow * log.exp() * ((num.0 + num.1) / (den.0 + den.1))
}

// Γ(x) = exp(lg) · f / g with the argument moved into [1, 2), where ln Γ is
// small and its absolute error is a few units of 1e-17
fn gamma_parts(mut x: (f64, f64)) -> (f64, (f64, f64), (f64, f64)) {
    let (mut f, mut g) = ((1.0, 0.0), (1.0, 0.0));
    while x.0 >= 2.0 {
        x = dd_add(x, -1.0);
        f = dd_mul(f, x);
    }
    while x.0 < 1.0 {
        g = dd_mul(g, x);
        x = dd_add(x, 1.0);
    }
    (ln_gamma(x.0) + digamma_rough(x.0) * x.1, f, g)
}

// ψ to a few digits, enough for a first-order correction of the low part
fn digamma_rough(x: f64) -> f64 {
    let y = x + 6.0;
    let shift: f64 = (0..6).map(|i| 1.0 / (x + f64::from(i))).sum();
    y.ln() - 0.5 / y - 1.0 / (12.0 * y * y) - shift
}

fn dd_add(x: (f64, f64), y: f64) -> (f64, f64) {
    let (hi, lo) = two_sum(x.0, y);
    let t = lo + x.1;
    let h = hi + t;
    (h, t - (h - hi))
}

fn two_sum(x: f64, y: f64) -> (f64, f64) {
    let s = x + y;
    let v = s - x;
    (s, (x - (s - v)) + (y - v))
}

fn dd_mul(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    let p = x.0 * y.0;
    let e = x.0.mul_add(y.0, -p);
    (p, e + x.0 * y.1 + x.1 * y.0)
}

/// `ln(M / G²)` where `G = Γ(n+α+1)/(n! κ^α)` is the front factor.
///
/// Equals `(α+β+1) ln 2 + 2α ln κ + ln[Γ(n+β+1) n! / (Γ(n+α+1) Γ(n+α+β+1))]`.
#[must_use]
pub(crate) fn ln_mass_over_front_sq(p: &JacobiParams) -> f64 {
    let n = p.n as f64;
    let (a, b) = (p.alpha, p.beta);
    let k = kappa(p);
    (a + b + 1.0) * LN_2
        + ln_gamma_ratio_scaled(n, b + 1.0, a + b + 1.0, k)
        + ln_gamma_ratio_scaled(n, 1.0, a + 1.0, k)
}

/// Forward three-term recurrence; returns `(P_n(x), P_{n−1}(x))`.
#[must_use]
pub fn eval_recurrence(p: &JacobiParams, x: f64) -> (f64, f64) {
    recurrence(p.n, p.alpha, p.beta, x)
}

pub(crate) fn recurrence(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    let ab = a + b;
    let d = a * a - b * b;
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let den = 2.0 * (kf + 1.0) * (kf + ab + 1.0) * s;
        let ak = (s + 1.0) * (s + 2.0) * s / den;
        let bk = d * (s + 1.0) / den;
        let ck = 2.0 * (kf + a) * (kf + b) * (s + 2.0) / den;
        let p2 = (ak * x + bk) * p1 - ck * p0;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// `(1 − x²) P_n'(x)` from `P_n` and `P_{n−1}`.
#[must_use]
pub(crate) fn one_minus_x2_dp(n: usize, a: f64, b: f64, x: f64, pn: f64, pnm1: f64) -> f64 {
    let nf = n as f64;
    let s = 2.0 * nf + a + b;
    (nf * ((a - b) - s * x) * pn + 2.0 * (nf + a) * (nf + b) * pnm1) / s
}

/// Maps positive-x nodes of the `(β, α)` problem to nodes of `(α, β)`:
/// `x ↦ −x`, reversing the order so the result stays ascending.
#[must_use]
pub fn reflect(nodes: &[f64]) -> Vec<f64> {
    nodes.iter().rev().map(|x| -x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kappa_values() {
        assert_eq!(JacobiParams::new(100, 0.0, 0.0).unwrap().kappa(), 100.5);
        let k = JacobiParams::new(100, 1.0 / 3.0, 0.25).unwrap().kappa();
        assert!((k - (100.0 + (1.0 / 3.0 + 0.25 + 1.0) / 2.0)).abs() < 1e-13);
        assert_eq!(JacobiParams::new(1, -0.5, -0.5).unwrap().kappa(), 1.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(JacobiParams::new(0, 0.0, 0.0).is_err());
        assert!(JacobiParams::new(3, -1.0, 0.0).is_err());
        assert!(JacobiParams::new(3, 0.0, f64::NAN).is_err());
        assert!(log_total_mass(-1.5, 0.0).is_err());
    }

    #[test]
    fn total_mass_closed_forms() {
        assert!((log_total_mass(0.0, 0.0).unwrap() - LN_2).abs() < 1e-16);
        assert!((log_total_mass(-0.5, -0.5).unwrap() - PI.ln()).abs() < 4e-16);
        // 40-digit reference
        let v = log_total_mass(0.1, -0.3).unwrap();
        assert!((v - 0.8365964226341551956590946).abs() < 4e-16);
    }

    #[test]
    fn mass_constant() {
        let p = JacobiParams::new(1, 0.0, 0.0).unwrap();
        assert!((gauss_mass_constant(&p) - LN_2).abs() < 1e-16);
        let cases = [
            (100, 0.1, -0.3, 0.5548165470056921083330368),
            (1_000_000, 0.1, -0.3, 0.5545177744479442590795556),
            (10, 5.0, -0.3, 4.069119836602178175784104),
            (1, -0.6, -0.7, -0.6965991243798817582290949),
        ];
        for (n, a, b, want) in cases {
            let got = gauss_mass_constant(&JacobiParams::new(n, a, b).unwrap());
            assert!(
                (got - want).abs() < 1e-15 * want.abs().max(1.0),
                "{n}: {got} vs {want}"
            );
        }
        let big = gauss_mass_constant(&JacobiParams::new(1_000_000, 0.0, 0.0).unwrap());
        assert!(big.is_finite());
    }

    #[test]
    fn recurrence_initial_values() {
        let p = JacobiParams::new(1, 0.1, -0.3).unwrap();
        let (p1, p0) = eval_recurrence(&p, 0.3);
        assert!((p1 - 0.47).abs() < 1e-16);
        assert_eq!(p0, 1.0);
    }

    #[test]
    fn recurrence_hypergeometric_reference() {
        let p = JacobiParams::new(10, 1.0 / 3.0, 0.2).unwrap();
        let (v, _) = eval_recurrence(&p, 0.5);
        let want = -0.2898774940480961612654321;
        assert!(((v - want) / want).abs() < 1e-14);
    }

    #[test]
    fn recurrence_at_one() {
        // P_n(1) = (α+1)_n / n!
        let (a, b) = (0.7, -0.4);
        for n in [1usize, 2, 7, 30] {
            let mut want = 1.0;
            for k in 0..n {
                want *= (a + 1.0 + k as f64) / (k as f64 + 1.0);
            }
            let (v, _) = recurrence(n, a, b, 1.0);
            assert!(((v - want) / want).abs() < 1e-14);
        }
    }

    #[test]
    fn reflect_involution() {
        let xs = [-0.9, -0.2, 0.1, 0.75];
        assert_eq!(reflect(&reflect(&xs)), xs.to_vec());
    }
}
