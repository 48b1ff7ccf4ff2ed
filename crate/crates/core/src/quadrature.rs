//! Assembly of the full Gauss–Jacobi rule.
//!
//! Nodes with `x ≥ 0` (more precisely, with `θ0 ≤ π/2`) come from the
//! `(α, β)` problem; the others are the same construction applied to
//! `(β, α)` and reflected. Near the endpoint the Bessel-type expansion is
//! used, elsewhere the elementary one. Weights are assembled in the log
//! domain from the scaled weights
//! `ω = w / (sin^{2α+1}(θ/2) cos^{2β+1}(θ/2))`.

use crate::bessel::zero_unchecked;
use crate::bessel_expansion::BesselExpansion;
use crate::elementary::ElemExpansion;
use crate::error::{domain, Error, Result};
use crate::node::{Branch, Orders, ThetaNode};
use crate::params::{
    gauss_mass_constant, ln_mass_over_front_sq, one_minus_x2_dp, recurrence, JacobiParams,
};
use std::f64::consts::{FRAC_PI_2, PI};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest `α` (on the side being computed) for which the Bessel branch is
/// available.
pub const BESSEL_MAX_ALPHA: f64 = 6.0;

/// Up to this degree Newton refinement uses the three-term recurrence;
/// above it, the expansion of the node's own branch.
pub const RECURRENCE_NEWTON_MAX_N: usize = 50;

/// Nodes per rayon task.
#[cfg(feature = "parallel")]
const MIN_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Bessel branch near the endpoints, elementary elsewhere.
    Auto,
    Elementary,
    Bessel,
    /// Newton iteration on the recurrence for every node.
    Recurrence,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "elementary" => Ok(Method::Elementary),
            "bessel" => Ok(Method::Bessel),
            "recurrence" => Ok(Method::Recurrence),
            _ => Err(domain(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPolicy {
    /// Nodes with `θ0` below this (measured from the nearer endpoint) use the
    /// Bessel branch.
    pub theta_switch_nodes: f64,
    /// Weights at nodes with `θ` below this use the Bessel branch.
    pub theta_switch_weights: f64,
    pub newton_refine: bool,
    /// Below this degree the rule comes from the recurrence.
    pub small_n_cutoff: usize,
    pub method: Method,
    pub orders: Orders,
}

impl BranchPolicy {
    pub fn new(p: &JacobiParams) -> Self {
        Self::with_orders(p, Orders::FULL)
    }

    /// Defaults for a given truncation. With at most two node terms the
    /// node switch moves further from the endpoint.
    pub fn with_orders(p: &JacobiParams, orders: Orders) -> Self {
        let kappa = p.kappa();
        let a = p.alpha.max(p.beta);
        let theta_switch_nodes = if orders.elem_theta <= 2 {
            default_theta_switch_nodes_short(kappa, a)
        } else {
            default_theta_switch_nodes(kappa, a)
        };
        Self {
            theta_switch_nodes,
            theta_switch_weights: default_theta_switch_weights(kappa),
            newton_refine: false,
            small_n_cutoff: default_small_n_cutoff(a),
            method: Method::Auto,
            orders,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("theta_switch_nodes", self.theta_switch_nodes),
            ("theta_switch_weights", self.theta_switch_weights),
        ] {
            if !(v > 0.0 && v < FRAC_PI_2) {
                return Err(domain(format!("{name} must lie in (0, pi/2), got {v}")));
            }
        }
        if self.small_n_cutoff < 2 {
            return Err(domain(format!(
                "small_n_cutoff must be >= 2, got {}",
                self.small_n_cutoff
            )));
        }
        Ok(())
    }
}

/// `22/κ` clamped to `[0.55 + 0.06 max(a, 0), 1.2]`, where `a` is the larger
/// exponent: the elementary expansion needs more room from the endpoint as
/// the exponent grows.
#[must_use]
pub fn default_theta_switch_nodes(kappa: f64, a: f64) -> f64 {
    (22.0 / kappa).max(0.55 + 0.06 * a.max(0.0)).min(1.2)
}

/// As [`default_theta_switch_nodes`] with `80/κ` in place of `22/κ`, for
/// node expansions cut after `θ_2`.
#[must_use]
pub fn default_theta_switch_nodes_short(kappa: f64, a: f64) -> f64 {
    (80.0 / kappa).max(0.55 + 0.06 * a.max(0.0)).min(1.2)
}

/// `max(20, ⌈12 a⌉)` with `a` the larger exponent. The expansion
/// coefficients grow like powers of `a²/κ`, so large exponents need a larger
/// degree before the asymptotic path beats the recurrence.
#[must_use]
pub fn default_small_n_cutoff(a: f64) -> usize {
    (12.0 * a).ceil().max(20.0) as usize
}

/// `78.5/κ` (about `π/4` at `n = 100`) clamped to `[0.35, 1.2]`.
#[must_use]
pub fn default_theta_switch_weights(kappa: f64) -> f64 {
    (78.5 / kappa).clamp(0.35, 1.2)
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub params: JacobiParams,
    /// Ascending.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub scaled_weights: Vec<f64>,
    pub branch_log: Vec<Branch>,
    /// `θ_i` with `x_i = cos θ_i` (descending).
    pub thetas: Vec<f64>,
    /// `sin θ_i`, computed before reflection so it keeps full relative
    /// accuracy near `x = −1`.
    pub sin_thetas: Vec<f64>,
    /// Newton steps that had to be clamped.
    pub clamped_steps: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// False outside `n ≥ 20`, `−1 < α, β ≤ 5`.
    pub fn accuracy_guaranteed(&self) -> bool {
        self.params.accuracy_guaranteed()
    }

    /// `Σ w_i f(x_i)`, summed from the smallest weights up.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&i, &j| self.weights[i].total_cmp(&self.weights[j]));
        idx.iter()
            .map(|&i| self.weights[i] * f(self.nodes[i]))
            .sum()
    }
}

/// Result of one Newton step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOutcome {
    pub node: ThetaNode,
    /// The step taken in `θ` (after clamping).
    pub step: f64,
    /// The raw step exceeded half the local node spacing: the seed was poor.
    pub clamped: bool,
}

/// A node with `ln w`, `ln ω` and `sin θ`, all evaluated in the
/// orientation the node was computed in.
#[derive(Debug, Clone, Copy)]
struct Computed {
    node: ThetaNode,
    ln_w: f64,
    ln_omega: f64,
    sin_theta: f64,
    clamped: bool,
}

impl Computed {
    fn new(p: &JacobiParams, node: ThetaNode, ln_omega: f64, clamped: bool) -> Self {
        let (sh, ch) = (0.5 * node.theta).sin_cos();
        let ln_w = (2.0 * p.alpha + 1.0) * sh.ln() + (2.0 * p.beta + 1.0) * ch.ln() + ln_omega;
        Self {
            node,
            ln_w,
            ln_omega,
            sin_theta: node.theta.sin(),
            clamped,
        }
    }

    fn reflect(self, n: usize) -> Self {
        Self {
            node: self.node.reflect(n),
            ..self
        }
    }
}

/// Everything needed for the nodes of one orientation of the problem.
struct Side {
    p: JacobiParams,
    kappa: f64,
    elem: ElemExpansion,
    bessel: Option<BesselExpansion>,
    ln_m_over_g2: f64,
    policy: BranchPolicy,
}

impl Side {
    fn new(p: JacobiParams, policy: &BranchPolicy) -> Self {
        let bessel_ok = p.alpha <= BESSEL_MAX_ALPHA && policy.method != Method::Elementary;
        Self {
            p,
            kappa: p.kappa(),
            elem: ElemExpansion::new(&p, &policy.orders),
            bessel: bessel_ok.then(|| BesselExpansion::new(&p, &policy.orders)),
            ln_m_over_g2: ln_mass_over_front_sq(&p),
            policy: *policy,
        }
    }

    fn use_bessel(&self, theta: f64, switch: f64) -> bool {
        self.bessel.is_some() && (self.policy.method == Method::Bessel || theta < switch)
    }

    fn node(&self, k: usize) -> ThetaNode {
        let theta0 = self.elem.theta0(k);
        match &self.bessel {
            Some(b) if self.use_bessel(theta0, self.policy.theta_switch_nodes) => {
                let m = self.p.n + 1 - k;
                b.node_from_zero(m, zero_unchecked(self.p.alpha, m))
            }
            _ => self.elem.node(k),
        }
    }

    fn ln_omega(&self, nd: &ThetaNode) -> f64 {
        match &self.bessel {
            Some(b) if self.use_bessel(nd.theta, self.policy.theta_switch_weights) => {
                let m = self.p.n + 1 - nd.k;
                let (j, h) = if nd.branch == Branch::BesselRight {
                    (nd.theta0 * self.kappa, self.kappa * nd.eps)
                } else {
                    let j = zero_unchecked(self.p.alpha, m);
                    (j, self.kappa * nd.theta - j)
                };
                b.ln_scaled_weight(nd.theta, j, h, self.ln_m_over_g2)
            }
            _ => self
                .elem
                .ln_scaled_weight(nd.k, self.elem_eps(nd), self.ln_m_over_g2),
        }
    }

    /// `ε` relative to the elementary `θ0(k)`, exact for elementary nodes.
    fn elem_eps(&self, nd: &ThetaNode) -> f64 {
        if nd.branch == Branch::Elementary {
            nd.eps
        } else {
            nd.theta - self.elem.theta0(nd.k)
        }
    }

    /// One Newton step; see [`newton_refine`].
    fn refine(&self, nd: &ThetaNode) -> RefineOutcome {
        let raw = if self.p.n <= RECURRENCE_NEWTON_MAX_N {
            recurrence_step(&self.p, nd.theta, nd.x)
        } else if nd.branch == Branch::BesselRight {
            let b = self
                .bessel
                .as_ref()
                .expect("Bessel node without Bessel expansion");
            let (ja, ja1) = b.bessel_pair_near_zero(nd.theta0 * self.kappa, self.kappa * nd.eps);
            let (u, du) = b.u_du(nd.theta, ja, ja1);
            -u / du
        } else {
            let (w, dw) = self.elem.w_shifted(nd.k, nd.eps);
            -w / dw
        };
        let limit = 0.5 * PI / self.kappa;
        let clamped = !(raw.abs() <= limit);
        let step = if clamped { limit.copysign(raw) } else { raw };
        let step = if step.is_nan() { 0.0 } else { step };
        let node = if nd.branch == Branch::Elementary {
            self.elem.node_with_eps(nd.k, nd.eps + step)
        } else {
            let eps = nd.eps + step;
            let theta = nd.theta0 + eps;
            ThetaNode {
                theta,
                eps,
                x: theta.cos(),
                ..*nd
            }
        };
        RefineOutcome {
            node,
            step,
            clamped,
        }
    }

    fn compute(&self, k: usize, refine: bool) -> Computed {
        let mut node = self.node(k);
        let mut clamped = false;
        if refine {
            let r = self.refine(&node);
            node = r.node;
            clamped = r.clamped;
        }
        Computed::new(&self.p, node, self.ln_omega(&node), clamped)
    }

    /// Undoes [`ThetaNode::reflect`] without the rounding of `π − θ`:
    /// `θ0` is recomputed and `ε` is carried over exactly.
    fn unreflect(&self, nd: &ThetaNode) -> ThetaNode {
        let k = self.p.n + 1 - nd.k;
        let eps = -nd.eps;
        let theta0 = match nd.branch {
            Branch::ReflectedBessel => zero_unchecked(self.p.alpha, nd.k) / self.kappa,
            Branch::ReflectedElementary => self.elem.theta0(k),
            _ => PI - nd.theta0,
        };
        let theta = theta0 + eps;
        let x = if nd.branch == Branch::ReflectedElementary {
            self.elem.node_with_eps(k, eps).x
        } else {
            theta.cos()
        };
        ThetaNode {
            k,
            theta,
            theta0,
            eps,
            x,
            branch: nd.branch.reflected(),
        }
    }
}

/// Newton step in `θ` on the recurrence: `Δθ = P sin θ / ((1 − x²) P')`.
fn recurrence_step(p: &JacobiParams, theta: f64, x: f64) -> f64 {
    let (pn, pnm1) = recurrence_theta(p.n, p.alpha, p.beta, theta, x);
    let d = one_minus_x2_dp(p.n, p.alpha, p.beta, x, pn, pnm1);
    pn * theta.sin() / d
}

/// `(P_n, P_{n−1})` at `x = cos θ`. For `θ < π/2` the recurrence runs in
/// `y = 1 − x = 2 sin²(θ/2)`, so the rounding of `x` near 1 does not enter.
fn recurrence_theta(n: usize, a: f64, b: f64, theta: f64, x: f64) -> (f64, f64) {
    if theta >= FRAC_PI_2 || n == 0 {
        return recurrence(n, a, b, x);
    }
    let y = 2.0 * (0.5 * theta).sin().powi(2);
    let mut p0 = 1.0;
    let mut p1 = (a + 1.0) - 0.5 * (a + b + 2.0) * y;
    let ab = a + b;
    let d = a * a - b * b;
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let den = 2.0 * (kf + 1.0) * (kf + ab + 1.0) * s;
        let ak = (s + 1.0) * (s + 2.0) * s / den;
        // a_k x + b_k = (a_k + b_k) − a_k y
        let apb = (s + 1.0) * (s * (s + 2.0) + d) / den;
        let ck = 2.0 * (kf + a) * (kf + b) * (s + 2.0) / den;
        let p2 = (apb - ak * y) * p1 - ck * p0;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// First index whose node is computed in the `(α, β)` orientation.
fn split_index(p: &JacobiParams) -> usize {
    // τ numerator 2(n+1−2k) + α − β ≤ 0
    let n = p.n as f64;
    let k = ((2.0 * (n + 1.0) + p.alpha - p.beta) / 4.0).ceil().max(1.0) as usize;
    k.min(p.n + 1)
}

struct Assembler {
    p: JacobiParams,
    right: Side,
    left: Side,
    split: usize,
    refine: bool,
}

impl Assembler {
    fn new(p: &JacobiParams, policy: &BranchPolicy) -> Self {
        Self {
            p: *p,
            right: Side::new(*p, policy),
            left: Side::new(p.swapped(), policy),
            split: split_index(p),
            refine: policy.newton_refine,
        }
    }

    /// Node `k` of `(α, β)` with its `ln ω`.
    fn compute(&self, k: usize) -> Computed {
        if k >= self.split {
            self.right.compute(k, self.refine)
        } else {
            self.left
                .compute(self.p.n + 1 - k, self.refine)
                .reflect(self.p.n)
        }
    }
}

fn finish(p: &JacobiParams, computed: Vec<Computed>) -> QuadratureRule {
    let n = computed.len();
    let mut rule = QuadratureRule {
        params: *p,
        nodes: Vec::with_capacity(n),
        weights: Vec::with_capacity(n),
        scaled_weights: Vec::with_capacity(n),
        branch_log: Vec::with_capacity(n),
        thetas: Vec::with_capacity(n),
        sin_thetas: Vec::with_capacity(n),
        clamped_steps: 0,
    };
    for c in computed {
        rule.nodes.push(c.node.x);
        rule.thetas.push(c.node.theta);
        rule.sin_thetas.push(c.sin_theta);
        rule.weights.push(c.ln_w.exp());
        rule.scaled_weights.push(c.ln_omega.exp());
        rule.branch_log.push(c.node.branch);
        rule.clamped_steps += usize::from(c.clamped);
    }
    rule
}

fn routes_to_recurrence(p: &JacobiParams, policy: &BranchPolicy) -> bool {
    policy.method == Method::Recurrence || p.n < policy.small_n_cutoff
}

/// The nodes of the rule, ascending in `x`. Requires `n ≥ small_n_cutoff`
/// unless the recurrence method is selected.
pub fn compute_nodes(p: &JacobiParams, policy: &BranchPolicy) -> Result<Vec<ThetaNode>> {
    policy.validate()?;
    if routes_to_recurrence(p, policy) {
        return Ok(recurrence_rule(p, policy)?
            .0
            .into_iter()
            .map(|c| c.node)
            .collect());
    }
    let asm = Assembler::new(
        p,
        &BranchPolicy {
            newton_refine: false,
            ..*policy
        },
    );
    Ok(map_indices(p.n, |k| asm.compute(k).node))
}

/// `(weights, scaled_weights)` at `nodes` (as returned by [`compute_nodes`]).
pub fn compute_weights(
    p: &JacobiParams,
    nodes: &[ThetaNode],
    policy: &BranchPolicy,
) -> Result<(Vec<f64>, Vec<f64>)> {
    policy.validate()?;
    if nodes.len() != p.n {
        return Err(domain(format!(
            "expected {} nodes, got {}",
            p.n,
            nodes.len()
        )));
    }
    let computed: Vec<Computed> = if nodes.iter().any(|nd| nd.branch == Branch::Recurrence) {
        nodes.iter().map(|nd| recurrence_weight(p, nd)).collect()
    } else {
        let asm = Assembler::new(p, policy);
        map_indices(p.n, |k| {
            let nd = &nodes[k - 1];
            if k >= asm.split {
                Computed::new(p, *nd, asm.right.ln_omega(nd), false)
            } else {
                let o = asm.left.unreflect(nd);
                Computed::new(&asm.left.p, o, asm.left.ln_omega(&o), false).reflect(p.n)
            }
        })
    };
    let rule = finish(p, computed);
    Ok((rule.weights, rule.scaled_weights))
}

/// The full rule.
pub fn compute_rule(p: &JacobiParams, policy: &BranchPolicy) -> Result<QuadratureRule> {
    policy.validate()?;
    if routes_to_recurrence(p, policy) {
        return Ok(finish(p, recurrence_rule(p, policy)?.0));
    }
    let asm = Assembler::new(p, policy);
    Ok(finish(p, map_indices(p.n, |k| asm.compute(k))))
}

/// As [`compute_rule`], always on the calling thread.
pub fn compute_rule_seq(p: &JacobiParams, policy: &BranchPolicy) -> Result<QuadratureRule> {
    policy.validate()?;
    if routes_to_recurrence(p, policy) {
        return Ok(finish(p, recurrence_rule(p, policy)?.0));
    }
    let asm = Assembler::new(p, policy);
    Ok(finish(p, (1..=p.n).map(|k| asm.compute(k)).collect()))
}

/// Gauss–Jacobi rule with the default policy.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    let p = JacobiParams::new(n, alpha, beta)?;
    compute_rule(&p, &BranchPolicy::new(&p))
}

#[cfg(feature = "parallel")]
fn map_indices<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (1..n + 1)
        .into_par_iter()
        .with_min_len(MIN_CHUNK)
        .map(f)
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn map_indices<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (1..=n).map(f).collect()
}

/// One Newton step in `θ`.
///
/// For `n ≤ RECURRENCE_NEWTON_MAX_N` (and for recurrence nodes) the step uses the three-term
/// recurrence, so it also corrects the truncation error of the expansion.
/// Otherwise it uses the node's own branch: `W` for elementary nodes, `U`
/// for Bessel nodes. Steps larger than half the local spacing `π/(2κ)` are
/// clamped and flagged.
pub fn newton_refine(p: &JacobiParams, node: &ThetaNode) -> Result<RefineOutcome> {
    if node.k == 0 || node.k > p.n {
        return Err(Error::IndexOutOfRange {
            index: node.k,
            max: p.n,
        });
    }
    if !(node.theta > 0.0 && node.theta < PI) {
        return Err(domain(format!(
            "theta must lie in (0, pi), got {}",
            node.theta
        )));
    }
    if node.branch == Branch::Recurrence {
        let raw = recurrence_step(p, node.theta, node.x);
        let limit = 0.5 * PI / p.kappa();
        let clamped = !(raw.abs() <= limit);
        let step = if clamped { limit.copysign(raw) } else { raw };
        let theta = node.theta + step;
        let node = ThetaNode {
            theta,
            eps: theta - node.theta0,
            x: theta.cos(),
            ..*node
        };
        return Ok(RefineOutcome {
            node,
            step,
            clamped,
        });
    }
    let mut policy = BranchPolicy::new(p);
    if !node.branch.is_bessel() {
        policy.method = Method::Elementary;
    }
    if matches!(
        node.branch,
        Branch::ReflectedElementary | Branch::ReflectedBessel
    ) {
        let side = Side::new(p.swapped(), &policy);
        let r = side.refine(&node.reflect(p.n));
        Ok(RefineOutcome {
            node: r.node.reflect(p.n),
            step: -r.step,
            ..r
        })
    } else {
        Ok(Side::new(*p, &policy).refine(node))
    }
}

/// Degree-`n` nodes by Newton iteration on the recurrence, seeded by the
/// expansions and checked; falls back to bracketing if the check fails.
/// The second component reports whether the fallback was needed.
fn recurrence_rule(p: &JacobiParams, policy: &BranchPolicy) -> Result<(Vec<Computed>, bool)> {
    let asm = Assembler::new(
        p,
        &BranchPolicy {
            newton_refine: false,
            method: Method::Auto,
            ..*policy
        },
    );
    let swapped = p.swapped();
    // (reflected, θ) with θ ≤ π/2 in the node's own orientation
    let mut oriented: Vec<(bool, f64)> = (1..=p.n)
        .map(|k| {
            if k >= asm.split {
                (false, asm.right.compute(k, false).node.theta)
            } else {
                (true, asm.left.compute(p.n + 1 - k, false).node.theta)
            }
        })
        .collect();
    let mut ok = true;
    for (reflected, t) in oriented.iter_mut() {
        ok &= polish(if *reflected { &swapped } else { p }, t);
    }
    let full: Vec<f64> = oriented
        .iter()
        .map(|&(r, t)| if r { PI - t } else { t })
        .collect();
    ok &= full.windows(2).all(|w| w[1] < w[0]) && full.iter().all(|t| *t > 0.0 && *t < PI);
    let fallback = !ok;
    if fallback {
        oriented = bracket_zeros(p)?
            .into_iter()
            .map(|t| {
                if t > FRAC_PI_2 {
                    (true, PI - t)
                } else {
                    (false, t)
                }
            })
            .collect();
    }
    let computed = oriented
        .iter()
        .enumerate()
        .map(|(i, &(reflected, theta))| {
            let k = if reflected { p.n - i } else { i + 1 };
            // the middle zero of a symmetric rule is exactly x = 0
            let middle = p.alpha == p.beta && 2 * k == p.n + 1;
            let (theta, x) = if middle {
                (FRAC_PI_2, 0.0)
            } else {
                (theta, theta.cos())
            };
            let nd = ThetaNode {
                k,
                theta,
                theta0: theta,
                eps: 0.0,
                x,
                branch: Branch::Recurrence,
            };
            if reflected {
                recurrence_weight(&swapped, &nd).reflect(p.n)
            } else {
                recurrence_weight(p, &nd)
            }
        })
        .collect();
    Ok((computed, fallback))
}

/// Newton on the recurrence until the step stalls. Returns false if it
/// did not converge.
fn polish(p: &JacobiParams, theta: &mut f64) -> bool {
    let limit = 0.5 * PI / p.kappa();
    let mut last = f64::INFINITY;
    for _ in 0..12 {
        let step = recurrence_step(p, *theta, theta.cos());
        if !step.is_finite() || step.abs() > limit {
            return false;
        }
        *theta += step;
        if step.abs() <= 4.0 * f64::EPSILON * *theta || (step.abs() >= last && step.abs() < 1e-13) {
            return true;
        }
        last = step.abs();
    }
    false
}

/// Zeros of `P_n(cos θ)` by sign changes on a fine grid and bisection.
fn bracket_zeros(p: &JacobiParams) -> Result<Vec<f64>> {
    let f = |t: f64| recurrence(p.n, p.alpha, p.beta, t.cos()).0;
    let grid = 256 * (p.n + 1);
    let mut zeros = Vec::with_capacity(p.n);
    let mut t0 = PI;
    let mut f0 = f(t0);
    for i in (0..grid).rev() {
        let t1 = PI * i as f64 / grid as f64;
        let f1 = f(t1);
        if f0 == 0.0 {
            zeros.push(t0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (t1, t0, f1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm * flo > 0.0 {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        t0 = t1;
        f0 = f1;
    }
    if zeros.len() != p.n {
        return Err(domain(format!(
            "found {} zeros of a degree-{} polynomial",
            zeros.len(),
            p.n
        )));
    }
    Ok(zeros)
}

/// `w = M (1 − x²) / ((1 − x²) P')²` with `M` from [`gauss_mass_constant`].
fn recurrence_weight(p: &JacobiParams, nd: &ThetaNode) -> Computed {
    let x = nd.x;
    let (pn, pnm1) = recurrence_theta(p.n, p.alpha, p.beta, nd.theta, x);
    let d = one_minus_x2_dp(p.n, p.alpha, p.beta, x, pn, pnm1);
    let (sh, ch) = (0.5 * nd.theta).sin_cos();
    let ln_w = gauss_mass_constant(p) + 2.0 * nd.theta.sin().ln() - 2.0 * d.abs().ln();
    let ln_omega = ln_w - (2.0 * p.alpha + 1.0) * sh.ln() - (2.0 * p.beta + 1.0) * ch.ln();
    Computed {
        node: *nd,
        ln_w,
        ln_omega,
        sin_theta: nd.theta.sin(),
        clamped: false,
    }
}
