//! Lobatto and Radau rules and barycentric interpolation weights, all built
//! from a Gauss–Jacobi rule with shifted exponents.

use crate::error::{domain, Result};
use crate::gamma::{gamma, gamma_ratio, ln_gamma, ln_gamma_ratio};
use crate::params::{check_exponents, JacobiParams};
use crate::quadrature::{compute_rule, BranchPolicy, QuadratureRule};
use std::f64::consts::LN_2;

/// Gauss–Lobatto rule: both endpoints plus `n` interior nodes.
#[derive(Debug, Clone)]
pub struct LobattoRule {
    /// Exponents of the target weight; `n` is the interior count.
    pub params: JacobiParams,
    /// Ascending, strictly inside `(−1, 1)`.
    pub interior_nodes: Vec<f64>,
    pub interior_weights: Vec<f64>,
    /// Weight at `x = −1`.
    pub v_left: f64,
    /// Weight at `x = +1`.
    pub v_right: f64,
}

impl LobattoRule {
    /// All `n + 2` nodes, ascending.
    pub fn nodes(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.interior_nodes.len() + 2);
        out.push(-1.0);
        out.extend_from_slice(&self.interior_nodes);
        out.push(1.0);
        out
    }

    /// Weights matching [`LobattoRule::nodes`].
    pub fn weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.interior_weights.len() + 2);
        out.push(self.v_left);
        out.extend_from_slice(&self.interior_weights);
        out.push(self.v_right);
        out
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        sum_small_first(&self.nodes(), &self.weights(), f)
    }
}

/// Which endpoint a Radau rule fixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadauEnd {
    /// `x = −1`.
    Left,
    /// `x = +1`.
    Right,
}

impl std::str::FromStr for RadauEnd {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" | "-1" => Ok(Self::Left),
            "right" | "r" | "1" | "+1" => Ok(Self::Right),
            _ => Err(domain(format!("unknown Radau end '{s}' (left|right)"))),
        }
    }
}

/// Gauss–Radau rule: one endpoint plus `n` interior nodes.
#[derive(Debug, Clone)]
pub struct RadauRule {
    pub params: JacobiParams,
    pub fixed_end: RadauEnd,
    /// Ascending.
    pub interior_nodes: Vec<f64>,
    pub interior_weights: Vec<f64>,
    pub boundary_weight: f64,
}

impl RadauRule {
    /// `−1` or `+1`.
    pub fn boundary_node(&self) -> f64 {
        match self.fixed_end {
            RadauEnd::Left => -1.0,
            RadauEnd::Right => 1.0,
        }
    }

    /// All `n + 1` nodes, ascending.
    pub fn nodes(&self) -> Vec<f64> {
        let mut out = self.interior_nodes.clone();
        match self.fixed_end {
            RadauEnd::Left => out.insert(0, -1.0),
            RadauEnd::Right => out.push(1.0),
        }
        out
    }

    /// Weights matching [`RadauRule::nodes`].
    pub fn weights(&self) -> Vec<f64> {
        let mut out = self.interior_weights.clone();
        match self.fixed_end {
            RadauEnd::Left => out.insert(0, self.boundary_weight),
            RadauEnd::Right => out.push(self.boundary_weight),
        }
        out
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        sum_small_first(&self.nodes(), &self.weights(), f)
    }
}

/// Barycentric interpolation weights at the nodes of a Gauss rule.
#[derive(Debug, Clone)]
pub struct BarycentricWeights {
    /// Ascending.
    pub nodes: Vec<f64>,
    /// Alternating in sign, positive at the largest node, `max |u_i| = 1`.
    pub u: Vec<f64>,
}

impl BarycentricWeights {
    /// Evaluates the interpolant of `values` (one per node) at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        assert_eq!(values.len(), self.nodes.len(), "one value per node");
        barycentric_eval(&self.nodes, &self.u, values, x)
    }
}

/// Second-form barycentric formula with arbitrary weights `u`.
pub fn barycentric_eval(nodes: &[f64], u: &[f64], values: &[f64], x: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for ((&xi, &ui), &fi) in nodes.iter().zip(u).zip(values) {
        let d = x - xi;
        if d == 0.0 {
            return fi;
        }
        let t = ui / d;
        num += t * fi;
        den += t;
    }
    num / den
}

fn sum_small_first(nodes: &[f64], weights: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut idx: Vec<usize> = (0..nodes.len()).collect();
    idx.sort_by(|&i, &j| weights[i].total_cmp(&weights[j]));
    idx.iter().map(|&i| weights[i] * f(nodes[i])).sum()
}

fn check_interior(n: usize, alpha: f64, beta: f64) -> Result<()> {
    check_exponents(alpha, beta)?;
    if n == 0 {
        return Err(domain("n_interior must be at least 1"));
    }
    Ok(())
}

fn inner_rule(n: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    let p = JacobiParams::new(n, alpha, beta)?;
    compute_rule(&p, &BranchPolicy::new(&p))
}

// 1 − x and 1 + x at a node; the one that cancels comes from sin²θ instead.
fn one_minus_x(x: f64, sin_t: f64) -> f64 {
    if x <= 0.0 {
        1.0 - x
    } else {
        sin_t * sin_t / (1.0 + x)
    }
}

fn one_plus_x(x: f64, sin_t: f64) -> f64 {
    if x >= 0.0 {
        1.0 + x
    } else {
        sin_t * sin_t / (1.0 - x)
    }
}

/// Lobatto weight at `x = −1` for the weight `(1−x)^α (1+x)^β` with `n`
/// interior nodes.
///
/// `2^{α+β+1}(β+1)Γ(β+1)² Γ(n+1)Γ(n+α+2) / (Γ(n+β+2)Γ(n+α+β+3))`
#[must_use]
pub fn lobatto_left_weight(alpha: f64, beta: f64, n: usize) -> f64 {
    let nf = n as f64;
    let (a, b) = (alpha, beta);
    // integer offsets (Legendre, Gegenbauer with integer parameters) reduce
    // to finite products; the log form covers the rest
    let direct = 2f64.powf(a + b + 1.0)
        * (b + 1.0)
        * gamma(b + 1.0).powi(2)
        * gamma_ratio(nf, 1.0, b + 2.0)
        * gamma_ratio(nf, a + 2.0, a + b + 3.0);
    if direct.is_finite() && direct > 0.0 {
        return direct;
    }
    ((a + b + 1.0) * LN_2
        + (b + 1.0).ln()
        + 2.0 * ln_gamma(b + 1.0)
        + ln_gamma_ratio(nf, 1.0, b + 2.0)
        + ln_gamma_ratio(nf, a + 2.0, a + b + 3.0))
    .exp()
}

/// Radau weight at `x = −1` for the weight `(1−x)^α (1+x)^β` with `n`
/// interior nodes.
///
/// `2^{α+β+1}Γ(β+1)Γ(β+2) Γ(n+1)Γ(n+α+1) / (Γ(n+β+2)Γ(n+α+β+2))`
#[must_use]
pub fn radau_left_weight(alpha: f64, beta: f64, n: usize) -> f64 {
    let nf = n as f64;
    let (a, b) = (alpha, beta);
    let direct = 2f64.powf(a + b + 1.0)
        * gamma(b + 1.0)
        * gamma(b + 2.0)
        * gamma_ratio(nf, 1.0, b + 2.0)
        * gamma_ratio(nf, a + 1.0, a + b + 2.0);
    if direct.is_finite() && direct > 0.0 {
        return direct;
    }
    ((a + b + 1.0) * LN_2
        + ln_gamma(b + 1.0)
        + ln_gamma(b + 2.0)
        + ln_gamma_ratio(nf, 1.0, b + 2.0)
        + ln_gamma_ratio(nf, a + 1.0, a + b + 2.0))
    .exp()
}

/// Gauss–Jacobi–Lobatto rule with `n_interior` interior nodes.
pub fn lobatto_rule(alpha: f64, beta: f64, n_interior: usize) -> Result<LobattoRule> {
    check_interior(n_interior, alpha, beta)?;
    let inner = inner_rule(n_interior, alpha + 1.0, beta + 1.0)?;
    let interior_weights = inner
        .weights
        .iter()
        .zip(&inner.sin_thetas)
        .map(|(w, s)| w / (s * s))
        .collect();
    Ok(LobattoRule {
        params: JacobiParams {
            n: n_interior,
            alpha,
            beta,
        },
        interior_nodes: inner.nodes,
        interior_weights,
        v_left: lobatto_left_weight(alpha, beta, n_interior),
        v_right: lobatto_left_weight(beta, alpha, n_interior),
    })
}

/// Gauss–Jacobi–Radau rule with `n_interior` interior nodes and one fixed
/// endpoint.
pub fn radau_rule(
    alpha: f64,
    beta: f64,
    n_interior: usize,
    fixed_end: RadauEnd,
) -> Result<RadauRule> {
    check_interior(n_interior, alpha, beta)?;
    let (inner, divide): (_, fn(f64, f64) -> f64) = match fixed_end {
        RadauEnd::Left => (inner_rule(n_interior, alpha, beta + 1.0)?, one_plus_x),
        RadauEnd::Right => (inner_rule(n_interior, alpha + 1.0, beta)?, one_minus_x),
    };
    let interior_weights: Vec<f64> = inner
        .weights
        .iter()
        .zip(&inner.nodes)
        .zip(&inner.sin_thetas)
        .map(|((w, &x), &s)| w / divide(x, s))
        .collect();
    let boundary_weight = match fixed_end {
        RadauEnd::Left => radau_left_weight(alpha, beta, n_interior),
        RadauEnd::Right => radau_left_weight(beta, alpha, n_interior),
    };
    Ok(RadauRule {
        params: JacobiParams {
            n: n_interior,
            alpha,
            beta,
        },
        fixed_end,
        interior_nodes: inner.nodes,
        interior_weights,
        boundary_weight,
    })
}

/// `u_i ∝ (−1)^i sin θ_i √w_i`, scaled to `max |u_i| = 1` with the sign
/// fixed positive at the largest node.
#[must_use]
pub fn barycentric_weights(rule: &QuadratureRule) -> BarycentricWeights {
    let n = rule.len();
    let mut u: Vec<f64> = (0..n)
        .map(|i| {
            let mag = rule.sin_thetas[i] * rule.weights[i].sqrt();
            if (n - 1 - i) % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let big = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if big > 0.0 {
        u.iter_mut().for_each(|v| *v /= big);
    }
    BarycentricWeights {
        nodes: rule.nodes.clone(),
        u,
    }
}
