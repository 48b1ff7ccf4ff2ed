//! The compound Poincaré-type expansion
//!
//! `P_n^{(α,β)}(cos θ) = G_κ/√(πκ) · (cos χ U − sin χ V) / (sin^{α+½}(θ/2) cos^{β+½}(θ/2))`,
//! `χ = κθ − (α/2 + 1/4)π`, valid away from both endpoints, its θ-derivative
//! `W′ = −κ(sin χ M + cos χ N)` and the resulting interior zeros.

use crate::coeffs::{self, XsPoly};
use crate::error::{Error, Result};
use crate::gamma::{gamma, ln_gamma_ratio};
use crate::node::{asymptotic_sum, Branch, Orders, ThetaNode};
use crate::params::JacobiParams;
use std::f64::consts::{FRAC_PI_2, PI};

/// Default distance from either endpoint below which the elementary
/// expansion is not evaluated.
pub const DEFAULT_DELTA: f64 = 0.2;

/// `G_κ(α, β) = Γ(n+α+1) / (n! κ^α)`.
///
/// For `κ ≥ 30` the convergent-looking large-`w` series with `w = κ − β/2`
/// is used; otherwise the gamma ratio is evaluated directly.
#[must_use]
pub fn g_front_factor(p: &JacobiParams) -> f64 {
    if p.kappa() >= 30.0 {
        g_front_factor_series(p)
    } else {
        g_front_factor_direct(p)
    }
}

/// `Γ(α+1) Π_{j≤n}(1 + α/j) / κ^α` for small `n`, else the log-gamma ratio.
pub(crate) fn g_front_factor_direct(p: &JacobiParams) -> f64 {
    let a = p.alpha;
    if p.n <= 64 {
        let prod: f64 = (1..=p.n).map(|j| 1.0 + a / j as f64).product();
        gamma(a + 1.0) * prod / p.kappa().powf(a)
    } else {
        (ln_gamma_ratio(p.n as f64, a + 1.0, 1.0) - a * p.kappa().ln()).exp()
    }
}

pub(crate) fn ln_g_front_factor(p: &JacobiParams) -> f64 {
    g_front_factor(p).ln()
}

/// `(w/κ)^α Σ C_m(ρ) (−α)_{2m} / w^{2m}` with `ρ = (α+1)/2`.
pub(crate) fn g_front_factor_series(p: &JacobiParams) -> f64 {
    let (a, kappa) = (p.alpha, p.kappa());
    let w = kappa - 0.5 * p.beta;
    let rho = 0.5 * (a + 1.0);
    let cm = coeffs::series_family("gfront.C", 0, usize::MAX, 0.0, 0.0);
    let iw2 = 1.0 / (w * w);
    let mut sum = 0.0;
    let mut poch = 1.0;
    let mut wp = 1.0;
    for (m, c) in cm.iter().enumerate() {
        let term = c.eval(rho) * poch * wp;
        sum += term;
        if m > 0 && term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let m2 = 2.0 * m as f64;
        poch *= (-a + m2) * (-a + m2 + 1.0);
        wp *= iw2;
    }
    (a * (-0.5 * p.beta / kappa).ln_1p()).exp() * sum
}

/// The elementary expansion collapsed for one `(α, β)`.
#[derive(Debug, Clone)]
pub struct ElemExpansion {
    pub params: JacobiParams,
    kappa: f64,
    u: Vec<XsPoly>,
    v: Vec<XsPoly>,
    m: Vec<XsPoly>,
    n: Vec<XsPoly>,
    theta: Vec<XsPoly>,
    truncate: bool,
}

impl ElemExpansion {
    pub fn new(p: &JacobiParams, orders: &Orders) -> Self {
        let (a, b) = (p.alpha, p.beta);
        // for α = β = ±1/2 the expansion terminates after u_0, m_0
        let orders = if a == b && a.abs() == 0.5 {
            &Orders {
                elem_theta: 0,
                elem_u: 1,
                elem_v: 0,
                elem_m: 1,
                elem_n: 0,
                ..*orders
            }
        } else {
            orders
        };
        Self {
            params: *p,
            kappa: p.kappa(),
            u: coeffs::xs_family("elem.u", 0, 2, orders.elem_u, a, b),
            v: coeffs::xs_family("elem.v", 1, 2, orders.elem_v, a, b),
            m: coeffs::xs_family("elem.m", 0, 2, orders.elem_m, a, b),
            n: coeffs::xs_family("elem.n", 1, 2, orders.elem_n, a, b),
            theta: coeffs::xs_family("elem.theta", 1, 1, orders.elem_theta, a, b),
            truncate: orders.optimal_truncation,
        }
    }

    fn sum(&self, fs: &[XsPoly], first_power: i32, x: f64, inv_s: f64) -> f64 {
        let h2 = 1.0 / (self.kappa * self.kappa);
        let mut hp = self.kappa.powi(-first_power);
        asymptotic_sum(
            fs.iter().map(|f| {
                let t = f.eval(x, inv_s) * hp;
                hp *= h2;
                t
            }),
            self.truncate,
        )
    }

    /// `(U, V)` at `x = cos θ`, `s = sin θ`.
    pub fn u_v(&self, x: f64, s: f64) -> (f64, f64) {
        let is = 1.0 / s;
        (self.sum(&self.u, 0, x, is), self.sum(&self.v, 1, x, is))
    }

    /// `(M, N)` at `x = cos θ`, `s = sin θ`.
    pub fn m_n(&self, x: f64, s: f64) -> (f64, f64) {
        let is = 1.0 / s;
        (self.sum(&self.m, 0, x, is), self.sum(&self.n, 1, x, is))
    }

    /// `ε = Σ θ_m(θ0)/κ^{2m}` at `x0 = cos θ0`, `s0 = sin θ0`.
    pub fn correction(&self, x0: f64, s0: f64) -> f64 {
        self.sum(&self.theta, 2, x0, 1.0 / s0)
    }

    /// `4κτ/π = 2(n + 1 − 2k) + α − β` where `τ = θ0 − π/2`.
    fn tau_numerator(&self, k: usize) -> f64 {
        let p = &self.params;
        (2.0 * (p.n + 1) as f64 - 4.0 * k as f64) + (p.alpha - p.beta)
    }

    /// `τ = θ0(k) − π/2`.
    pub fn tau(&self, k: usize) -> f64 {
        PI * self.tau_numerator(k) / (4.0 * self.kappa)
    }

    /// `θ0(k) = (n + 1 − k + α/2 − 1/4)π/κ`.
    pub fn theta0(&self, k: usize) -> f64 {
        FRAC_PI_2 + self.tau(k)
    }

    /// True for the node at the origin of a symmetric problem with odd `n`.
    fn is_center(&self, k: usize) -> bool {
        self.params.alpha == self.params.beta && self.tau_numerator(k) == 0.0
    }

    /// Node `k` with the expansion's correction.
    pub fn node(&self, k: usize) -> ThetaNode {
        let tau = self.tau(k);
        let eps = if self.is_center(k) {
            0.0
        } else {
            let (st, ct) = tau.sin_cos();
            self.correction(-st, ct)
        };
        self.node_with_eps(k, eps)
    }

    /// Node `k` at `θ = θ0(k) + eps`, with the stable evaluation of `x`.
    pub fn node_with_eps(&self, k: usize, eps: f64) -> ThetaNode {
        let tau = self.tau(k);
        let theta0 = FRAC_PI_2 + tau;
        let x = if self.is_center(k) && eps == 0.0 {
            0.0
        } else {
            -(tau + eps).sin()
        };
        ThetaNode {
            k,
            theta: theta0 + eps,
            theta0,
            eps,
            x,
            branch: Branch::Elementary,
        }
    }

    /// `(−1)^{n−k}`.
    fn parity(&self, k: usize) -> f64 {
        if (self.params.n - k) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `(W, dW/dθ)` at `θ = θ0(k) + eps`, using only trigonometric functions
    /// of `κ·eps` and `τ + eps`.
    pub fn w_shifted(&self, k: usize, eps: f64) -> (f64, f64) {
        let (x, s) = self.x_s(k, eps);
        let (u, v) = self.u_v(x, s);
        let (m, n) = self.m_n(x, s);
        let (sk, ck) = (self.kappa * eps).sin_cos();
        let sign = self.parity(k);
        let w = -sign * (sk * u + ck * v);
        let dw = -self.kappa * sign * (ck * m - sk * n);
        (w, dw)
    }

    /// `cos χ = −(−1)^{n−k} sin(κ eps)`.
    pub fn cos_chi_shifted(&self, k: usize, eps: f64) -> f64 {
        -self.parity(k) * (self.kappa * eps).sin()
    }

    fn x_s(&self, k: usize, eps: f64) -> (f64, f64) {
        let (sn, cs) = (self.tau(k) + eps).sin_cos();
        (-sn, cs)
    }

    /// `ln ω` at node `k`, `θ = θ0(k) + eps`, given `ln(M/G²)`.
    pub(crate) fn ln_scaled_weight(&self, k: usize, eps: f64, ln_m_over_g2: f64) -> f64 {
        let (x, s) = self.x_s(k, eps);
        let (m, n) = self.m_n(x, s);
        let (sk, ck) = (self.kappa * eps).sin_cos();
        let d = ck * m - sk * n;
        ln_m_over_g2 + (PI / (self.kappa * d * d)).ln()
    }
}

fn check_band(theta: f64, delta: f64) -> Result<()> {
    if theta < delta || theta > PI - delta || theta.is_nan() {
        return Err(Error::DomainTooCloseToEndpoint {
            theta,
            lo: delta,
            hi: PI - delta,
        });
    }
    Ok(())
}

/// `P_n^{(α,β)}(cos θ)` from the elementary expansion with all tabulated
/// terms, for `θ ∈ [δ, π − δ]`, `δ = 0.2`.
pub fn eval_poly_elementary(p: &JacobiParams, theta: f64) -> Result<f64> {
    eval_poly_elementary_with(p, theta, DEFAULT_DELTA, &Orders::FULL)
}

/// As [`eval_poly_elementary`] with explicit `δ` and orders.
pub fn eval_poly_elementary_with(
    p: &JacobiParams,
    theta: f64,
    delta: f64,
    orders: &Orders,
) -> Result<f64> {
    check_band(theta, delta)?;
    let e = ElemExpansion::new(p, orders);
    let (s, x) = theta.sin_cos();
    let (u, v) = e.u_v(x, s);
    let kappa = p.kappa();
    let chi = kappa * theta - (0.5 * p.alpha + 0.25) * PI;
    let (sc, cc) = chi.sin_cos();
    let (sh, ch) = (0.5 * theta).sin_cos();
    let ln_front = ln_g_front_factor(p)
        - 0.5 * (PI * kappa).ln()
        - (p.alpha + 0.5) * sh.ln()
        - (p.beta + 0.5) * ch.ln();
    Ok(ln_front.exp() * (cc * u - sc * v))
}

/// `(W, dW/dθ)` at `θ = θ0(k) + eps` with `|eps| ≤ 0.1`.
pub fn eval_w_shifted(p: &JacobiParams, k: usize, eps: f64) -> Result<(f64, f64)> {
    if k == 0 || k > p.n {
        return Err(Error::IndexOutOfRange { index: k, max: p.n });
    }
    if !(eps.abs() <= 0.1) {
        return Err(crate::error::domain(format!(
            "|eps| must be <= 0.1, got {eps}"
        )));
    }
    Ok(ElemExpansion::new(p, &Orders::FULL).w_shifted(k, eps))
}

/// `W(θ) = cos χ U − sin χ V` with `χ` formed directly from `κθ`; kept for
/// comparison with [`eval_w_shifted`].
pub fn eval_w_direct(p: &JacobiParams, theta: f64) -> f64 {
    let e = ElemExpansion::new(p, &Orders::FULL);
    let (s, x) = theta.sin_cos();
    let (u, v) = e.u_v(x, s);
    let chi = p.kappa() * theta - (0.5 * p.alpha + 0.25) * PI;
    chi.cos() * u - chi.sin() * v
}

/// Node `k` (ascending in `x`) from the elementary zero expansion.
///
/// Fails with [`Error::BranchMisuse`] when `θ0(k)` is closer than `δ = 0.2`
/// to either endpoint.
pub fn node_elementary(p: &JacobiParams, k: usize) -> Result<ThetaNode> {
    node_elementary_with(p, k, &Orders::FULL)
}

pub fn node_elementary_with(p: &JacobiParams, k: usize, orders: &Orders) -> Result<ThetaNode> {
    if k == 0 || k > p.n {
        return Err(Error::IndexOutOfRange { index: k, max: p.n });
    }
    let e = ElemExpansion::new(p, orders);
    let theta0 = e.theta0(k);
    if check_band(theta0, DEFAULT_DELTA).is_err() {
        return Err(Error::BranchMisuse {
            k,
            theta0,
            branch: "elementary",
        });
    }
    Ok(e.node(k))
}
