//! The Bessel-type expansion near `x = 1`:
//!
//! `P_n^{(α,β)}(cos θ) = G_κ/(sin^α(θ/2) cos^β(θ/2)) · √(θ/sin θ) · W(θ)`,
//! `W = J_α(κθ) S(θ) + κ⁻¹ J_{α+1}(κθ) T(θ)`,
//!
//! the derivative of `U = √θ W` and the zeros near `x = 1`.
//!
//! The table stores `S_m, T_m` and the zero corrections `θ_m` as Taylor
//! series in `θ`. At load time each is divided by its power of
//! `χ = θ/sin θ`, leaving an entire function whose series also converges
//! quickly for `θ` far from the origin.

use crate::bessel::{j_unchecked, near_zero_series, zero_unchecked};
use crate::coeffs::{self, Series};
use crate::elementary::{g_front_factor, DEFAULT_DELTA};
use crate::error::{Error, Result};
use crate::node::{asymptotic_sum, Branch, Orders, ThetaNode};
use crate::params::JacobiParams;
use std::f64::consts::PI;

/// Below this angle the coefficient `A_1` is taken from its series.
pub const SMALL_THETA_CUT: f64 = 0.25;

/// `χ^p E(θ)` with `E` a Taylor series.
#[derive(Debug, Clone)]
struct ChiSeries {
    p: i32,
    e: Series,
}

const SINC_MAX_POWER: usize = 16;
const SINC_MAX_LEN: usize = 96;

// Taylor coefficients of (sin θ / θ)^p, truncated to `len` terms. Powers and
// lengths the table needs come from a shared cache.
fn sinc_power(p: usize, len: usize) -> std::borrow::Cow<'static, [f64]> {
    static CACHE: std::sync::OnceLock<Vec<Vec<f64>>> = std::sync::OnceLock::new();
    if p <= SINC_MAX_POWER && len <= SINC_MAX_LEN {
        let cache = CACHE.get_or_init(|| sinc_powers(SINC_MAX_POWER, SINC_MAX_LEN));
        return std::borrow::Cow::Borrowed(&cache[p][..len]);
    }
    std::borrow::Cow::Owned(sinc_powers(p, len).swap_remove(p))
}

fn sinc_powers(pmax: usize, len: usize) -> Vec<Vec<f64>> {
    let mut sinc = vec![0.0; len];
    let mut fact = 1.0;
    for (i, c) in sinc.iter_mut().enumerate() {
        if i > 0 {
            fact *= i as f64 + 1.0;
        }
        if i % 2 == 0 {
            *c = if (i / 2) % 2 == 0 {
                1.0 / fact
            } else {
                -1.0 / fact
            };
        }
    }
    let mut out = Vec::with_capacity(pmax + 1);
    let mut cur = vec![0.0; len];
    cur[0] = 1.0;
    for _ in 0..=pmax {
        let mut next = vec![0.0; len];
        for (i, a) in cur.iter().enumerate().step_by(2) {
            for (j, b) in sinc.iter().enumerate().take(len - i).step_by(2) {
                next[i + j] += a * b;
            }
        }
        out.push(std::mem::replace(&mut cur, next));
    }
    out
}

impl ChiSeries {
    /// Splits `χ^p` off the plain Taylor series `f`.
    fn from_plain(f: &Series, p: i32) -> Self {
        let len = f.c.len();
        let pw = sinc_power(p as usize, len);
        let mut e = vec![0.0; len];
        for (i, a) in f.c.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            // (sin θ / θ)^p is even
            for (j, b) in pw.iter().enumerate().take(len - i).step_by(2) {
                e[i + j] += a * b;
            }
        }
        ChiSeries {
            p,
            e: Series { c: e },
        }
    }

    #[inline]
    fn eval(&self, theta: f64, chi: f64) -> f64 {
        chi.powi(self.p) * self.e.eval(theta)
    }
}

fn chi(theta: f64) -> f64 {
    if theta == 0.0 {
        1.0
    } else {
        theta / theta.sin()
    }
}

/// The Bessel-type expansion collapsed for one `(α, β)`.
#[derive(Debug, Clone)]
pub struct BesselExpansion {
    pub params: JacobiParams,
    kappa: f64,
    s: Vec<ChiSeries>,
    t: Vec<ChiSeries>,
    y: Vec<ChiSeries>,
    z: Vec<ChiSeries>,
    theta: Vec<ChiSeries>,
    truncate: bool,
}

impl BesselExpansion {
    pub fn new(p: &JacobiParams, orders: &Orders) -> Self {
        let (a, b) = (p.alpha, p.beta);
        // for α = β = ±1/2 the expansion terminates: S = 1, T = 0
        let cheb = a == b && a.abs() == 0.5;
        let (ns, nt, nth) = if cheb {
            (1, 0, 0)
        } else {
            (orders.bessel_s, orders.bessel_t, orders.bessel_theta)
        };
        let s = coeffs::series_family("bessel.S", 0, ns, a, b);
        let t = coeffs::series_family("bessel.T", 0, nt, a, b);
        let th = coeffs::series_family("bessel.theta", 1, nth, a, b);
        let c = 2.0 * a + 1.0;
        let mut y = Vec::new();
        let mut z = Vec::new();
        for m in 0..s.len() {
            // Y_m = S_m + (2α+1) T_{m−1}/(2θ) − T'_{m−1}
            if m == 0 || m - 1 < t.len() {
                let mut ym = s[m].clone();
                if m > 0 {
                    let tm = &t[m - 1];
                    ym = ym.axpy(0.5 * c, &tm.shift(-1)).axpy(-1.0, &tm.derivative());
                }
                y.push(ChiSeries::from_plain(&ym, 2 * m as i32));
            }
            // Z_m = (2α+1) S_m + 2θ T_m + 2θ S_m'
            if m < t.len() || (cheb && m == 0) {
                let mut zm = s[m].scale(c).axpy(2.0, &s[m].derivative().shift(1));
                if m < t.len() {
                    zm = zm.axpy(2.0, &t[m].shift(1));
                }
                z.push(ChiSeries::from_plain(&zm, 2 * m as i32 + 1));
            }
        }
        Self {
            params: *p,
            kappa: p.kappa(),
            s: s.iter()
                .enumerate()
                .map(|(m, f)| ChiSeries::from_plain(f, 2 * m as i32))
                .collect(),
            t: t.iter()
                .enumerate()
                .map(|(m, f)| ChiSeries::from_plain(f, 2 * m as i32 + 1))
                .collect(),
            y,
            z,
            theta: th
                .iter()
                .enumerate()
                .map(|(m, f)| ChiSeries::from_plain(f, 2 * m as i32 + 1))
                .collect(),
            truncate: orders.optimal_truncation,
        }
    }

    fn sum(&self, fs: &[ChiSeries], theta: f64, chi: f64, first_power: i32) -> f64 {
        let h2 = 1.0 / (self.kappa * self.kappa);
        let mut hp = self.kappa.powi(-first_power);
        asymptotic_sum(
            fs.iter().map(|f| {
                let t = f.eval(theta, chi) * hp;
                hp *= h2;
                t
            }),
            self.truncate,
        )
    }

    /// `(S(θ), T(θ))`.
    pub fn s_t(&self, theta: f64) -> (f64, f64) {
        let c = chi(theta);
        (
            self.sum(&self.s, theta, c, 0),
            self.sum(&self.t, theta, c, 0),
        )
    }

    /// `(Y(θ), Z(θ))`.
    pub fn y_z(&self, theta: f64) -> (f64, f64) {
        let c = chi(theta);
        (
            self.sum(&self.y, theta, c, 0),
            self.sum(&self.z, theta, c, 0),
        )
    }

    /// `ε = Σ θ_m(θ0)/κ^{2m}`.
    pub fn correction(&self, theta0: f64) -> f64 {
        self.sum(&self.theta, theta0, chi(theta0), 2)
    }

    /// Zero `m` counted from `x = 1`, with `j = j_{α,m}` supplied.
    pub fn node_from_zero(&self, m: usize, j: f64) -> ThetaNode {
        let theta0 = j / self.kappa;
        let eps = self.correction(theta0);
        let theta = theta0 + eps;
        ThetaNode {
            k: self.params.n + 1 - m,
            theta,
            theta0,
            eps,
            x: theta.cos(),
            branch: Branch::BesselRight,
        }
    }

    /// `−κ√θ (J_{α+1}(κθ) Y − J_α(κθ) Z/(2θκ))` given both Bessel values.
    fn du(&self, theta: f64, ja: f64, ja1: f64) -> f64 {
        let (y, z) = self.y_z(theta);
        -self.kappa * theta.sqrt() * (ja1 * y - ja * z / (2.0 * theta * self.kappa))
    }

    /// `(J_α(κθ), J_{α+1}(κθ))` at `κθ = j + h` where `j` is a zero of `J_α`.
    pub(crate) fn bessel_pair_near_zero(&self, j: f64, h: f64) -> (f64, f64) {
        let a = self.params.alpha;
        let ja1_at_zero = j_unchecked(a + 1.0, j);
        let ja = near_zero_series(a, j, h, ja1_at_zero, None);
        let ja1 = if h == 0.0 {
            ja1_at_zero
        } else {
            j_unchecked(a + 1.0, j + h)
        };
        (ja, ja1)
    }

    /// `ln ω` at `θ = (j + h)/κ`, given `ln(M/G²)`.
    pub(crate) fn ln_scaled_weight(&self, theta: f64, j: f64, h: f64, ln_m_over_g2: f64) -> f64 {
        let (ja, ja1) = self.bessel_pair_near_zero(j, h);
        let (y, z) = self.y_z(theta);
        let d = ja1 * y - ja * z / (2.0 * theta * self.kappa);
        ln_m_over_g2 + (2.0 / (self.kappa * self.kappa * theta * d * d)).ln()
    }

    /// `U(θ) = √θ W(θ)` and `dU/dθ` with a Newton-ready pair of Bessel values.
    pub(crate) fn u_du(&self, theta: f64, ja: f64, ja1: f64) -> (f64, f64) {
        let (s, t) = self.s_t(theta);
        let w = ja * s + ja1 * t / self.kappa;
        (theta.sqrt() * w, self.du(theta, ja, ja1))
    }
}

/// `A_1(θ) = ((4α²−1)(sin θ − θ cos θ) + 2θ(α²−β²)(cos θ − 1)) / (8θ sin θ)`,
/// from its series below [`SMALL_THETA_CUT`].
#[must_use]
pub fn coef_a1(alpha: f64, beta: f64, theta: f64) -> f64 {
    if theta < SMALL_THETA_CUT {
        let t0 = &coeffs::series_family("bessel.T", 0, 1, alpha, beta)[0];
        ChiSeries::from_plain(t0, 1).eval(theta, chi(theta))
    } else {
        coef_a1_closed(alpha, beta, theta)
    }
}

pub(crate) fn coef_a1_closed(alpha: f64, beta: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    ((4.0 * alpha * alpha - 1.0) * (s - theta * c)
        + 2.0 * theta * (alpha * alpha - beta * beta) * (c - 1.0))
        / (8.0 * theta * s)
}

fn check_domain(theta: f64, delta: f64) -> Result<()> {
    if !(theta > 0.0) || theta > PI - delta {
        return Err(Error::DomainTooCloseToEndpoint {
            theta,
            lo: 0.0,
            hi: PI - delta,
        });
    }
    Ok(())
}

/// Index of the zero of `J_α` nearest to `z`, if it lies within 0.5.
fn nearby_zero(alpha: f64, z: f64) -> Option<f64> {
    let guess = (z / PI - 0.5 * alpha + 0.25).round().max(1.0) as usize;
    (guess.saturating_sub(1).max(1)..=guess + 1)
        .map(|m| zero_unchecked(alpha, m))
        .find(|j| (z - j).abs() <= 0.5)
}

/// `(J_α(z), J_{α+1}(z))`, with the near-zero series for `J_α` close to
/// one of its zeros.
fn bessel_pair(alpha: f64, z: f64) -> (f64, f64) {
    let ja1 = j_unchecked(alpha + 1.0, z);
    let ja = match nearby_zero(alpha, z) {
        Some(j) if alpha <= 6.0 => {
            near_zero_series(alpha, j, z - j, j_unchecked(alpha + 1.0, j), None)
        }
        _ => j_unchecked(alpha, z),
    };
    (ja, ja1)
}

/// `P_n^{(α,β)}(cos θ)` from the Bessel-type expansion, `θ ∈ (0, π − δ]`,
/// `δ = 0.2`.
pub fn eval_poly_bessel(p: &JacobiParams, theta: f64) -> Result<f64> {
    eval_poly_bessel_with(p, theta, &Orders::FULL)
}

pub fn eval_poly_bessel_with(p: &JacobiParams, theta: f64, orders: &Orders) -> Result<f64> {
    check_domain(theta, DEFAULT_DELTA)?;
    let e = BesselExpansion::new(p, orders);
    let kappa = p.kappa();
    let (ja, ja1) = bessel_pair(p.alpha, kappa * theta);
    let (s, t) = e.s_t(theta);
    let w = ja * s + ja1 * t / kappa;
    let (sh, ch) = (0.5 * theta).sin_cos();
    let front =
        g_front_factor(p) / (sh.powf(p.alpha) * ch.powf(p.beta)) * (theta / theta.sin()).sqrt();
    Ok(front * w)
}

/// `dU/dθ` with `U = √θ W`.
pub fn eval_u_derivative(p: &JacobiParams, theta: f64) -> Result<f64> {
    check_domain(theta, DEFAULT_DELTA)?;
    let e = BesselExpansion::new(p, &Orders::FULL);
    let (ja, ja1) = bessel_pair(p.alpha, p.kappa() * theta);
    Ok(e.du(theta, ja, ja1))
}

/// `U(θ) = √θ W(θ)`.
pub fn eval_u(p: &JacobiParams, theta: f64) -> Result<f64> {
    check_domain(theta, DEFAULT_DELTA)?;
    let e = BesselExpansion::new(p, &Orders::FULL);
    let (ja, ja1) = bessel_pair(p.alpha, p.kappa() * theta);
    Ok(e.u_du(theta, ja, ja1).0)
}

/// Node `x_{n+1−m}` from the `m`-th zero of `J_α`, `1 ≤ m ≤ ⌈n/2⌉`.
pub fn node_bessel(p: &JacobiParams, m: usize) -> Result<ThetaNode> {
    node_bessel_with(p, m, &Orders::FULL)
}

pub fn node_bessel_with(p: &JacobiParams, m: usize, orders: &Orders) -> Result<ThetaNode> {
    let max = p.n.div_ceil(2);
    if m == 0 || m > max {
        return Err(Error::IndexOutOfRange { index: m, max });
    }
    if !(p.alpha <= 6.0) {
        return Err(crate::error::domain(format!(
            "Bessel branch needs alpha <= 6, got {}",
            p.alpha
        )));
    }
    let j = zero_unchecked(p.alpha, m);
    if j / p.kappa() > PI - DEFAULT_DELTA {
        return Err(Error::BranchMisuse {
            k: p.n + 1 - m,
            theta0: j / p.kappa(),
            branch: "bessel",
        });
    }
    Ok(BesselExpansion::new(p, orders).node_from_zero(m, j))
}
