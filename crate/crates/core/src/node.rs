//! Node representation and the truncation orders shared by both expansions.

/// Which computation produced a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Elementary,
    BesselRight,
    ReflectedElementary,
    ReflectedBessel,
    /// Newton iteration on the three-term recurrence (small degrees).
    Recurrence,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Elementary => "elementary",
            Branch::BesselRight => "bessel",
            Branch::ReflectedElementary => "reflected-elementary",
            Branch::ReflectedBessel => "reflected-bessel",
            Branch::Recurrence => "recurrence",
        }
    }

    pub(crate) fn reflected(self) -> Self {
        match self {
            Branch::Elementary => Branch::ReflectedElementary,
            Branch::BesselRight => Branch::ReflectedBessel,
            Branch::ReflectedElementary => Branch::Elementary,
            Branch::ReflectedBessel => Branch::BesselRight,
            Branch::Recurrence => Branch::Recurrence,
        }
    }

    pub fn is_bessel(self) -> bool {
        matches!(self, Branch::BesselRight | Branch::ReflectedBessel)
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A node `x = cos θ` with `θ = θ0 + ε`.
///
/// For the elementary branch `θ0` is the leading approximation and `x` is
/// evaluated as `−sin(τ + ε)` with `τ = θ0 − π/2`, which keeps full relative
/// accuracy for nodes near the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaNode {
    /// Index in ascending order of `x`, starting at 1.
    pub k: usize,
    pub theta: f64,
    pub theta0: f64,
    pub eps: f64,
    pub x: f64,
    pub branch: Branch,
}

impl ThetaNode {
    /// The same node seen from the `(β, α)` problem: `θ ↦ π − θ`, `x ↦ −x`.
    pub(crate) fn reflect(&self, n: usize) -> Self {
        use std::f64::consts::PI;
        Self {
            k: n + 1 - self.k,
            theta: PI - self.theta,
            theta0: PI - self.theta0,
            eps: -self.eps,
            x: -self.x,
            branch: self.branch.reflected(),
        }
    }
}

/// How many terms of each expansion to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orders {
    /// `θ_1, θ_2, …` of the elementary zero expansion.
    pub elem_theta: usize,
    /// `u_0, u_2, …`
    pub elem_u: usize,
    /// `v_1, v_3, …`
    pub elem_v: usize,
    /// `m_0, m_2, …`
    pub elem_m: usize,
    /// `n_1, n_3, …`
    pub elem_n: usize,
    /// `θ_1, θ_2, …` of the Bessel zero expansion.
    pub bessel_theta: usize,
    /// `S_0, S_1, …` (and `Z_0, Z_1, …`)
    pub bessel_s: usize,
    /// `T_0, T_1, …` (`Y` uses one more than `T`)
    pub bessel_t: usize,
    /// Stop summing an expansion once its terms start to grow.
    pub optimal_truncation: bool,
}

impl Orders {
    /// Only the terms available in closed form in the literature:
    /// `θ1, θ2; u0, u2; v1; m0, m2; n1` and `θ1, θ2; S0, S1; T0, T1`.
    pub const BASELINE: Orders = Orders {
        elem_theta: 2,
        elem_u: 2,
        elem_v: 1,
        elem_m: 2,
        elem_n: 1,
        bessel_theta: 2,
        bessel_s: 2,
        bessel_t: 2,
        optimal_truncation: false,
    };

    /// Everything in the coefficient table.
    pub const FULL: Orders = Orders {
        elem_theta: usize::MAX,
        elem_u: usize::MAX,
        elem_v: usize::MAX,
        elem_m: usize::MAX,
        elem_n: usize::MAX,
        bessel_theta: usize::MAX,
        bessel_s: usize::MAX,
        bessel_t: usize::MAX,
        optimal_truncation: true,
    };
}

impl Default for Orders {
    fn default() -> Self {
        Orders::FULL
    }
}

/// Sums `terms` in order. With `truncate`, stops before the first term that
/// exceeds both of its two predecessors in magnitude.
#[inline]
pub(crate) fn asymptotic_sum(terms: impl IntoIterator<Item = f64>, truncate: bool) -> f64 {
    let mut sum = 0.0;
    let (mut p1, mut p2) = (f64::INFINITY, f64::INFINITY);
    for (i, t) in terms.into_iter().enumerate() {
        let a = t.abs();
        if truncate && i >= 2 && a > p1.max(p2) {
            break;
        }
        sum += t;
        p2 = p1;
        p1 = a;
    }
    sum
}
