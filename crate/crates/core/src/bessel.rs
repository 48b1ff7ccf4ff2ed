//! Bessel functions of the first kind of real order, their positive zeros,
//! and the evaluation of `J_α(u + h)` next to a zero `u` of `J_α`.
//!
//! `J_ν(z)` is computed from the power series for small `z`, from Miller's
//! backward recurrence for intermediate `z` and from Hankel's expansion for
//! large `z`.

use crate::error::{domain, Error, Result};
use crate::gamma::{gamma, ln_gamma_ratio};
use std::f64::consts::{FRAC_2_PI, PI};

/// A positive zero `j = j_{ν,m}` of `J_ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    pub nu: f64,
    pub m: usize,
    pub j: f64,
}

/// `J_ν(z)` for `ν ≥ −1`, `z ≥ 0`.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    if !(nu >= -1.0) || !nu.is_finite() {
        return Err(domain(format!("Bessel order must be >= -1, got {nu}")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain(format!(
            "Bessel argument must be finite and >= 0, got {z}"
        )));
    }
    Ok(j_unchecked(nu, z))
}

pub(crate) fn j_unchecked(nu: f64, z: f64) -> f64 {
    if nu == -1.0 {
        return -j_unchecked(1.0, z);
    }
    if z == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if z <= 2.0 || z * z <= 2.0 * (nu + 1.0) {
        return j_series(nu, z);
    }
    // spherical Bessel closed forms
    if nu == 0.5 || nu == -0.5 || nu == 1.5 {
        let (s, c) = z.sin_cos();
        let amp = (2.0 / (PI * z)).sqrt();
        return amp
            * if nu == 0.5 {
                s
            } else if nu == -0.5 {
                c
            } else {
                s / z - c
            };
    }
    if z >= hankel_threshold(nu) {
        return j_hankel(nu, z);
    }
    j_miller(nu, z)
}

fn hankel_threshold(nu: f64) -> f64 {
    (0.5 * nu * nu).max(20.0)
}

fn j_series(nu: f64, z: f64) -> f64 {
    let q = -0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    (0.5 * z).powf(nu) / gamma(nu + 1.0) * sum
}

fn j_hankel(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * z);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    // cos/sin of z − φ assembled from the correctly reduced cos z, sin z
    let phi = (0.5 * nu + 0.25) * PI;
    let (sz, cz) = z.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let cw = cz * cp + sz * sp;
    let sw = sz * cp - cz * sp;
    (FRAC_2_PI / z).sqrt() * (p * cw - q * sw)
}

/// Miller's backward recurrence normalised by the Neumann series
/// `(x/2)^b = Σ_k (b + 2k) Γ(b + k)/k! J_{b+2k}(x)`, `b ∈ (−1, 1)`.
fn j_miller(nu: f64, x: f64) -> f64 {
    let m = if nu >= 0.0 { nu.floor() as usize } else { 0 };
    let b = nu - m as f64;
    let top = (x.max(m as f64) + 40.0 + 4.0 * x.cbrt()).ceil() as usize;
    let top = top + top % 2;
    let mut g = ln_gamma_ratio((top / 2) as f64, b, 1.0).exp();
    let (mut f_up, mut f) = (0.0, 1e-250);
    let mut sum = 0.0;
    let mut target = 0.0;
    for i in (1..=top).rev() {
        if i % 2 == 0 {
            let k = i / 2;
            sum += (b + i as f64) * g * f;
            g *= k as f64 / (b + k as f64 - 1.0);
        }
        if i == m {
            target = f;
        }
        let down = 2.0 * (b + i as f64) / x * f - f_up;
        f_up = f;
        f = down;
        if f.abs() > 1e250 {
            f *= 1e-250;
            f_up *= 1e-250;
            sum *= 1e-250;
            target *= 1e-250;
        }
    }
    sum += gamma(b + 1.0) * f;
    if m == 0 {
        target = f;
    }
    target * (0.5 * x).powf(b) / sum
}

/// Four-term McMahon approximation of `j_{ν,m}` and the magnitude of the
/// next term, used as an error estimate.
#[must_use]
pub fn mcmahon(nu: f64, m: usize) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let a = (m as f64 + 0.5 * nu - 0.25) * PI;
    let b = 8.0 * a;
    let b2 = b * b;
    let m1 = mu - 1.0;
    let t1 = m1 / b;
    let t2 = 4.0 * m1 * (7.0 * mu - 31.0) / (3.0 * b * b2);
    let t3 = 32.0 * m1 * ((83.0 * mu - 982.0) * mu + 3779.0) / (15.0 * b * b2 * b2);
    let t4 = 64.0 * m1 * (((6949.0 * mu - 153855.0) * mu + 1585743.0) * mu - 6277237.0)
        / (105.0 * b * b2 * b2 * b2);
    (a - t1 - t2 - t3, t4.abs())
}

/// Zeros with index at most this are always polished by Newton's method.
pub const NEWTON_ZERO_INDEX: usize = 10;

/// `j_{ν,m}`, the `m`-th positive zero of `J_ν`, for `ν ∈ (−1, 6]`.
///
/// The McMahon value is returned directly when its estimated error is below
/// double precision and `m > NEWTON_ZERO_INDEX`; otherwise it seeds Newton's
/// method on `J_ν`.
pub fn bessel_zero(nu: f64, m: usize) -> Result<BesselZero> {
    if !(nu > -1.0 && nu <= 6.0) {
        return Err(domain(format!("zero order must lie in (-1, 6], got {nu}")));
    }
    if m == 0 {
        return Err(Error::IndexOutOfRange {
            index: 0,
            max: usize::MAX,
        });
    }
    Ok(BesselZero {
        nu,
        m,
        j: zero_unchecked(nu, m),
    })
}

pub(crate) fn zero_unchecked(nu: f64, m: usize) -> f64 {
    let (seed, err) = mcmahon(nu, m);
    if 4.0 * nu * nu == 1.0 || (m > NEWTON_ZERO_INDEX && err < 2e-17 * seed) {
        return seed;
    }
    let mut z = seed;
    for _ in 0..40 {
        let jn = j_unchecked(nu, z);
        let jp = nu / z * jn - j_unchecked(nu + 1.0, z);
        let dz = jn / jp;
        z -= dz;
        if dz.abs() <= 4e-16 * z {
            break;
        }
    }
    z
}

/// Largest residual `|J_α(u)| / |J_{α+1}(u)|` accepted as a zero.
const ZERO_TOLERANCE: f64 = 1e-10;

/// `J_α(u + h)` where `u` is a zero of `J_α`, summed as a series in
/// `w = −h(2u + h)/(2u)` so that no cancellation occurs for small `h`.
///
/// Terms are added until the relative tail drops below `1e−18` or 30 terms
/// have been used.
pub fn bessel_j_near_zero(alpha: f64, u: f64, h: f64) -> Result<f64> {
    let jn = check_zero(alpha, u, h)?;
    Ok(near_zero_series(alpha, u, h, jn, None))
}

/// As [`bessel_j_near_zero`] but with a fixed number of recurrence steps:
/// the sum contains `f_1, …, f_{steps+1}`.
pub fn bessel_j_near_zero_terms(alpha: f64, u: f64, h: f64, steps: usize) -> Result<f64> {
    let jn = check_zero(alpha, u, h)?;
    Ok(near_zero_series(alpha, u, h, jn, Some(steps)))
}

fn check_zero(alpha: f64, u: f64, h: f64) -> Result<f64> {
    if !(alpha > -1.0) || !(u > 0.0) || !(h.abs() <= 0.5) {
        return Err(domain(format!(
            "near-zero evaluation needs alpha > -1, u > 0, |h| <= 0.5 (got {alpha}, {u}, {h})"
        )));
    }
    let jn = j_unchecked(alpha + 1.0, u);
    let residual = j_unchecked(alpha, u);
    if residual.abs() > ZERO_TOLERANCE * jn.abs() {
        return Err(Error::NotAZero {
            nu: alpha,
            u,
            residual,
        });
    }
    Ok(jn)
}

/// The series with `J_{α+1}(u)` supplied by the caller.
pub(crate) fn near_zero_series(
    alpha: f64,
    u: f64,
    h: f64,
    j_next: f64,
    steps: Option<usize>,
) -> f64 {
    let w = -h * (2.0 * u + h) / (2.0 * u);
    let mut f_prev = 0.0;
    let mut f = w * j_next;
    let mut sum = f;
    let max = steps.unwrap_or(30);
    for m in 1..=max {
        let mf = m as f64;
        let next = (2.0 * mf * (alpha + mf) * w / u * f - w * w * f_prev) / (mf * (mf + 1.0));
        f_prev = f;
        f = next;
        sum += f;
        if steps.is_none() && f.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    (alpha * (h / u).ln_1p()).exp() * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_order_closed_form() {
        for z in [1.0f64, 5.0, 20.0, 1.3, 0.2, 33.0, 150.0] {
            let amp = (2.0 / (PI * z)).sqrt();
            let want = amp * z.sin();
            let got = bessel_j(0.5, z).unwrap();
            assert!((got - want).abs() < 2e-15 * amp, "z={z}: {got} vs {want}");
            let want = amp * z.cos();
            let got = bessel_j(-0.5, z).unwrap();
            assert!((got - want).abs() < 2e-15 * amp, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn origin() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(0.7, 0.0).unwrap(), 0.0);
        assert!(bessel_j(-1.5, 1.0).is_err());
        assert!(bessel_j(0.5, -1.0).is_err());
    }

    #[test]
    fn against_reference_values() {
        // 40-digit references
        let cases = [
            (0.25, 15.42, -0.02001192665440937955041211),
            (0.5, 1.3, 0.674289396750289736092076),
            (-0.6, 3.7, -0.309697431625686386642426),
            (5.0, 25.0, -0.06600799539842299339204816),
            (0.1, 100.0, 0.007660091163295429993384482),
            (5.3, 0.5, 0.00000316097387272853698903133),
            (1.25, 15.32, 0.203903903602028140392285),
            (0.0, 1e-3, 0.9999997500000156249995556),
            (-0.5, 2.0, -0.2347857104062484691740347),
            (0.75, 40.0, 0.1188858453123038257093057),
            (6.0, 8.0, 0.3375759001135930774641301),
            (2.5, 60.0, 0.03627653081828687510476276),
            (-0.9, 0.3, 0.4505696265387999371681421),
            (0.2, 1.9, 0.4187304368211842849037216),
            (0.2, 2.1, 0.3152973073566389991003101),
        ];
        for (nu, z, want) in cases {
            let got = bessel_j(nu, z).unwrap();
            assert!(rel(got, want) < 1e-14, "J_{nu}({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn zeros_against_reference() {
        let cases = [
            (0.25, 5, 15.32136982601228735904814),
            (0.0, 1, 2.404825557695772768621632),
            (5.0, 1, 8.771483815959954019122867),
            (-0.6, 1, 1.379338953780884606970315),
            (0.1, 100, 313.5313295631077000968278),
            (5.0, 30, 101.1940546263089572343323),
            (-0.9, 1, 0.6478308807503771859484236),
            (0.5, 3, 9.42477796076937971538793),
            (2.5, 7, 25.01280320228961246625958),
        ];
        for (nu, m, want) in cases {
            let got = bessel_zero(nu, m).unwrap().j;
            assert!(rel(got, want) < 1e-14, "j({nu},{m}) = {got}, want {want}");
        }
    }

    #[test]
    fn half_order_zeros_exact() {
        for m in 1..20 {
            assert_eq!(
                bessel_zero(0.5, m).unwrap().j,
                (m as f64 + 0.25 - 0.25) * PI
            );
            assert_eq!(
                bessel_zero(-0.5, m).unwrap().j,
                (m as f64 - 0.25 - 0.25) * PI
            );
        }
    }

    #[test]
    fn interlacing() {
        for nu in [-0.5, 0.0, 0.3, 1.0, 3.0] {
            for m in 1..=50 {
                let a = zero_unchecked(nu, m);
                let b = zero_unchecked(nu + 1.0, m);
                let c = zero_unchecked(nu, m + 1);
                assert!(a < b && b < c, "nu={nu} m={m}: {a} {b} {c}");
            }
        }
    }

    #[test]
    fn near_zero_at_zero_is_zero() {
        let u = zero_unchecked(0.25, 5);
        assert_eq!(bessel_j_near_zero(0.25, u, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn near_zero_rejects_non_zero() {
        assert!(matches!(
            bessel_j_near_zero(0.25, 15.0, 1e-3),
            Err(Error::NotAZero { .. })
        ));
    }

    #[test]
    fn near_zero_matches_standard_path_for_moderate_h() {
        for (alpha, m) in [(0.25, 5), (-0.6, 2), (3.0, 4), (0.0, 40)] {
            let u = zero_unchecked(alpha, m);
            for h in [-0.3, -0.05, 0.01, 0.2, 0.5] {
                let a = bessel_j_near_zero(alpha, u, h).unwrap();
                let b = j_unchecked(alpha, u + h);
                assert!((a - b).abs() < 1e-12, "alpha={alpha} h={h}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn near_zero_terms_decay_after_peak() {
        let alpha = 0.25;
        let u = zero_unchecked(alpha, 5);
        let h = 0.5;
        let w: f64 = -h * (2.0 * u + h) / (2.0 * u);
        let (mut fp, mut f) = (0.0, w * j_unchecked(alpha + 1.0, u));
        let start = (w.abs() * std::f64::consts::E / 2.0).ceil() as usize + 1;
        let mut prev = f64::INFINITY;
        for m in 1..30 {
            let mf = m as f64;
            let next = (2.0 * mf * (alpha + mf) * w / u * f - w * w * fp) / (mf * (mf + 1.0));
            fp = f;
            f = next;
            if m + 1 > start {
                assert!(f.abs() < prev, "term {} grew", m + 1);
            }
            prev = f.abs();
        }
    }
}
