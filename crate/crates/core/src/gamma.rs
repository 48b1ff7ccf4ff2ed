//! Gamma-function helpers.
//!
//! `ln_gamma` and `gamma` delegate to the `libm` port of the musl routines.
//! Ratios of gamma functions with large, nearby arguments are the quantities
//! that actually matter for quadrature weights, and differences of `ln_gamma`
//! lose absolute accuracy there, so [`ln_gamma_ratio`] evaluates them directly.

/// `ln Γ(x)` for `x > 0`.
#[must_use]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `Γ(x)`.
#[must_use]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

// B_{2k} / (2k (2k-1)), k = 1..
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
];

const SHIFT_TO: f64 = 20.0;

/// `ln Γ(x + a) − ln Γ(x + b)`, accurate in absolute terms for large `x`.
///
/// Requires `x + a > 0` and `x + b > 0`.
#[must_use]
pub fn ln_gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    ln_gamma_ratio_impl(x, a, b, None)
}

/// `ln[Γ(x + a) / Γ(x + b)] − (a − b) ln c` for `c` comparable to `x`,
/// without the cancellation of forming both terms.
pub(crate) fn ln_gamma_ratio_scaled(x: f64, a: f64, b: f64, c: f64) -> f64 {
    ln_gamma_ratio_impl(x, a, b, Some(c))
}

fn ln_gamma_ratio_impl(x: f64, a: f64, b: f64, scale: Option<f64>) -> f64 {
    if a == b {
        return 0.0;
    }
    let d = a - b;
    let mut y = x + b;
    debug_assert!(y > 0.0 && y + d > 0.0);
    // recurrences move both arguments past SHIFT_TO
    let mut acc = 0.0;
    let lo = y.min(y + d);
    if lo < SHIFT_TO {
        let steps = (SHIFT_TO - lo).ceil() as usize;
        for _ in 0..steps {
            acc -= (d / y).ln_1p();
            y += 1.0;
        }
    }
    acc + ln_gamma_ratio_large(y, d, scale)
}

// ln Γ(y + d) − ln Γ(y) − d ln c from the Stirling series, y and y + d
// both ≥ 20; c = 1 when absent.
fn ln_gamma_ratio_large(y: f64, d: f64, scale: Option<f64>) -> f64 {
    let yd = y + d;
    let log_term = match scale {
        Some(c) => ((yd - c) / c).ln_1p(),
        None => yd.ln(),
    };
    // (y+d−½)ln(y+d) − (y−½)ln y − d, without cancellation
    let lead = (y - 0.5) * (d / y).ln_1p() + d * log_term - d;
    let (iy, iyd) = (1.0 / y, 1.0 / yd);
    let (iy2, iyd2) = (iy * iy, iyd * iyd);
    // first correction as an exact difference, the rest directly
    let mut corr = STIRLING[0] * (-d * iy * iyd);
    let (mut py, mut pyd) = (iy, iyd);
    for c in &STIRLING[1..] {
        py *= iy2;
        pyd *= iyd2;
        corr += c * (pyd - py);
    }
    lead + corr
}

/// `Γ(x + a) / Γ(x + b)`.
///
/// An integer offset `a − b` up to 64 is a finite product and is evaluated
/// as one; other offsets go through [`ln_gamma_ratio`].
#[must_use]
pub fn gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    let d = a - b;
    if d == d.round() && d.abs() <= 64.0 {
        let (lo, steps) = if d >= 0.0 {
            (x + b, d as usize)
        } else {
            (x + a, (-d) as usize)
        };
        let prod = (0..steps).fold(1.0, |p, i| p * (lo + i as f64));
        if prod.is_finite() && prod > 0.0 {
            return if d >= 0.0 { prod } else { 1.0 / prod };
        }
    }
    ln_gamma_ratio(x, a, b).exp()
}
