//! Reproduction suite: the nine accuracy, exactness and timing checks that
//! the acceptance test and `gauss-jacobi selftest` both run.
//!
//! Reference values are frozen from 30-digit computations; the golden node
//! tables are compiled in.

use crate::bessel::{bessel_j_near_zero_terms, bessel_zero};
use crate::bessel_expansion::node_bessel_with;
use crate::elementary::{eval_w_direct, ElemExpansion};
use crate::extensions::lobatto_rule;
use crate::params::log_total_mass;
use crate::{
    compute_rule, compute_rule_seq, gauss_jacobi, BranchPolicy, JacobiParams, Method, Orders,
};
use std::hint::black_box;
use std::time::Instant;

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {} [{tag}] {}: {}",
            self.id, self.name, self.detail
        )
    }
}

pub const CRITERIA: usize = 9;

/// Runs every check in order.
pub fn run_all() -> Vec<Check> {
    (1..=CRITERIA).map(run).collect()
}

/// Runs check `id` (1 to 9).
///
/// # Panics
/// On an id outside `1..=9`.
pub fn run(id: usize) -> Check {
    match id {
        1 => worked_example(),
        2 => cos_chi_stability(),
        3 => near_zero_table(),
        4 => weight_sums(),
        5 => golden_accuracy(),
        6 => small_degree(),
        7 => moments_exactness(),
        8 => lobatto(),
        9 => performance(),
        _ => panic!("no criterion {id}"),
    }
}

fn check(id: usize, name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        id,
        name,
        passed,
        detail,
    }
}

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// One row of a golden table.
#[derive(Debug, Clone, Copy)]
pub struct GoldenRow {
    pub k: usize,
    pub theta: f64,
    pub x: f64,
    pub w: f64,
    pub omega: f64,
}

/// Parses a golden CSV (`n,alpha,beta,k,theta,x,w,omega`).
///
/// # Panics
/// On malformed input; the tables are compiled in.
pub fn parse_golden(text: &str) -> (JacobiParams, Vec<GoldenRow>) {
    let mut params = None;
    let mut rows = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 8, "golden row: {line}");
        let num = |i: usize| -> f64 { f[i].trim().parse().expect("golden field") };
        if params.is_none() {
            params = Some(
                JacobiParams::new(f[0].trim().parse().expect("n"), num(1), num(2))
                    .expect("golden params"),
            );
        }
        rows.push(GoldenRow {
            k: f[3].trim().parse().expect("k"),
            theta: num(4),
            x: num(5),
            w: num(6),
            omega: num(7),
        });
    }
    (params.expect("empty golden table"), rows)
}

const GOLDEN: [(&str, &str); 7] = [
    (
        "n100 (0.1,-0.3)",
        include_str!("../tests/data/jacobi_n100_a0p1_bm0p3.csv"),
    ),
    (
        "n100 (5,-0.3)",
        include_str!("../tests/data/jacobi_n100_a5_bm0p3.csv"),
    ),
    (
        "n100 (-0.6,-0.7)",
        include_str!("../tests/data/jacobi_n100_am0p6_bm0p7.csv"),
    ),
    (
        "n1000 (0.1,-0.3)",
        include_str!("../tests/data/jacobi_n1000_a0p1_bm0p3.csv"),
    ),
    (
        "n1000 (5,-0.3)",
        include_str!("../tests/data/jacobi_n1000_a5_bm0p3.csv"),
    ),
    (
        "n1000 (-0.6,-0.7)",
        include_str!("../tests/data/jacobi_n1000_am0p6_bm0p7.csv"),
    ),
    (
        "n20 (0.1,0.3)",
        include_str!("../tests/data/jacobi_n20_a0p1_b0p3.csv"),
    ),
];

fn worked_example() -> Check {
    const TWO_TERM: f64 = 0.999_585_372_116_418_5;
    const REFERENCE: f64 = 0.999_585_372_116_379;
    let p = JacobiParams::new(100, 1.0 / 3.0, 0.25).expect("valid");
    let orders = Orders {
        bessel_theta: 1,
        ..Orders::FULL
    };
    // warm the coefficient table so the timing sees only the node
    let _ = node_bessel_with(&p, 1, &orders);
    let start = Instant::now();
    let nd = node_bessel_with(&p, 1, &orders).expect("largest node");
    let elapsed = start.elapsed().as_secs_f64();
    let digits = (TWO_TERM - nd.x).abs() <= 2e-16;
    let err = rel(nd.x, REFERENCE);
    let passed = digits && err <= 5e-14 && elapsed < 1e-3;
    check(
        1,
        "largest node, n=100 a=1/3 b=1/4",
        passed,
        format!("x = {:.16} (two-term value {TWO_TERM}), rel err vs {REFERENCE} = {err:.2e} (<= 5e-14), time {:.1} us (< 1000)", nd.x, elapsed * 1e6),
    )
}

fn cos_chi_stability() -> Check {
    const COS_CHI: f64 = 0.000_190_836_324_284_272_4;
    let p = JacobiParams::new(100, 1.0 / 3.0, 0.2).expect("valid");
    let e = ElemExpansion::new(
        &p,
        &Orders {
            elem_theta: 3,
            ..Orders::FULL
        },
    );
    let k = 50;
    let nd = e.node(k);
    let full = ElemExpansion::new(&p, &Orders::FULL);
    let fnd = full.node(k);
    let (shifted, _) = full.w_shifted(k, fnd.eps);
    let direct = eval_w_direct(&p, fnd.theta);
    let cos_chi = e.cos_chi_shifted(k, nd.eps);
    let cos_err = rel(cos_chi, COS_CHI);
    let passed = shifted.abs() <= 5e-15 && direct.abs() >= 1e-13 && cos_err <= 1e-10;
    check(
        2,
        "cos chi stability, middle zero n=100 a=1/3 b=1/5",
        passed,
        format!(
            "|W| shifted = {:.2e} (<= 5e-15), direct = {:.2e} (>= 1e-13), cos chi = {cos_chi:.16e} rel err {cos_err:.1e} (<= 1e-10)",
            shifted.abs(),
            direct.abs()
        ),
    )
}

fn near_zero_table() -> Check {
    // J_{1/4}(j_{1/4,5} + h), 30 digits
    const ROWS: [(f64, usize, f64); 5] = [
        (1e-1, 9, -0.020_288_039_929_908_415_843_788_01),
        (1e-2, 5, -0.002_038_114_052_778_142_904_019_46),
        (1e-3, 4, -0.000_203_874_620_105_875_269_240_672_2),
        (1e-4, 3, -0.000_020_388_064_159_489_822_130_670_78),
        (1e-5, 2, -0.000_002_038_812_407_428_727_438_545_712),
    ];
    let u = bessel_zero(0.25, 5).expect("j_5").j;
    let mut worst: f64 = 0.0;
    for (h, steps, want) in ROWS {
        let got = bessel_j_near_zero_terms(0.25, u, h, steps).expect("near-zero series");
        worst = worst.max(rel(got, want));
    }
    check(
        3,
        "near-zero Bessel series, a=1/4 u=j5",
        worst <= 5e-15,
        format!(
            "worst rel err over h = 1e-1..1e-5 with {{9,5,4,3,2}} steps = {worst:.2e} (<= 5e-15)"
        ),
    )
}

fn weight_sums() -> Check {
    const NS: [usize; 5] = [20, 50, 100, 500, 1000];
    const EXPS: [f64; 6] = [-0.75, -0.3, 0.0, 0.5, 2.0, 5.0];
    let start = Instant::now();
    let mut worst = (0.0f64, 0, 0.0, 0.0);
    for n in NS {
        for a in EXPS {
            for b in EXPS {
                let rule = gauss_jacobi(n, a, b).expect("rule");
                let mut w = rule.weights.clone();
                w.sort_by(f64::total_cmp);
                let sum: f64 = w.iter().sum();
                let err = rel(sum, log_total_mass(a, b).expect("mass").exp());
                if err > worst.0 {
                    worst = (err, n, a, b);
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        4,
        "weight sums, 180 rules",
        worst.0 <= 1e-13 && elapsed < 10.0,
        format!(
            "worst rel err {:.2e} at n={} a={} b={} (<= 1e-13), time {elapsed:.2} s (< 10)",
            worst.0, worst.1, worst.2, worst.3
        ),
    )
}

/// Worst relative errors `(nodes, weights, scaled weights)` of a rule
/// against a golden table.
pub fn golden_errors(
    text: &str,
    policy: impl Fn(&JacobiParams) -> BranchPolicy,
) -> (f64, f64, f64) {
    let (p, rows) = parse_golden(text);
    let rule = compute_rule(&p, &policy(&p)).expect("rule");
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (i, g) in rows.iter().enumerate() {
        worst.0 = worst.0.max(rel(rule.nodes[i], g.x));
        worst.1 = worst.1.max(rel(rule.weights[i], g.w));
        worst.2 = worst.2.max(rel(rule.scaled_weights[i], g.omega));
    }
    worst
}

fn golden_accuracy() -> Check {
    let (mut node, mut sw) = (0.0f64, 0.0f64);
    let mut base = Vec::new();
    for (name, text) in &GOLDEN[..6] {
        let (x, _, om) = golden_errors(text, BranchPolicy::new);
        node = node.max(x);
        sw = sw.max(om);
        if name.starts_with("n100 ") {
            let (bx, _, _) =
                golden_errors(text, |p| BranchPolicy::with_orders(p, Orders::BASELINE));
            base.push((name, bx));
        }
    }
    let base_ok = base.iter().all(|(_, e)| *e <= 1e-12);
    let base_text: Vec<String> = base
        .iter()
        .map(|(name, e)| format!("{} {e:.2e}", &name[5..]))
        .collect();
    check(
        5,
        "golden nodes and scaled weights, n=100,1000",
        node <= 1e-14 && sw <= 5e-13 && base_ok,
        format!(
            "nodes {node:.2e} (<= 1e-14), scaled weights {sw:.2e} (<= 5e-13), baseline-order nodes at n=100: {} (<= 1e-12)",
            base_text.join(", ")
        ),
    )
}

fn small_degree() -> Check {
    let text = GOLDEN[6].1;
    let (pure, _, _) = golden_errors(text, BranchPolicy::new);
    let (refined, _, _) = golden_errors(text, |p| BranchPolicy {
        newton_refine: true,
        ..BranchPolicy::new(p)
    });
    check(
        6,
        "n=20 a=0.1 b=0.3",
        pure <= 1e-12 && refined <= 1e-15,
        format!("asymptotic nodes {pure:.2e} (<= 1e-12), after one Newton step {refined:.2e} (<= 1e-15)"),
    )
}

/// `∫ x^k (1−x)^α (1+x)^β dx` for `k = 0..=kmax`, by the two-term moment
/// recurrence `(k+α+β+2) m_{k+1} = (β−α) m_k + k m_{k−1}`.
pub fn moments(alpha: f64, beta: f64, kmax: usize) -> Vec<f64> {
    let mut m = vec![log_total_mass(alpha, beta).expect("valid exponents").exp()];
    for k in 0..kmax {
        let kf = k as f64;
        let prev = if k == 0 { 0.0 } else { m[k - 1] };
        m.push(((beta - alpha) * m[k] + kf * prev) / (kf + alpha + beta + 2.0));
    }
    m
}

fn worst_moment_error(integrate: impl Fn(usize) -> f64, alpha: f64, beta: f64, kmax: usize) -> f64 {
    moments(alpha, beta, kmax)
        .iter()
        .enumerate()
        .map(|(k, &m)| rel(integrate(k), m))
        .fold(0.0, f64::max)
}

fn moments_exactness() -> Check {
    let rule = gauss_jacobi(100, 0.5, -0.3).expect("rule");
    let worst = worst_moment_error(|k| rule.integrate(|x| x.powi(k as i32)), 0.5, -0.3, 60);
    check(
        7,
        "moments x^k, k <= 60, n=100 a=0.5 b=-0.3",
        worst <= 1e-11,
        format!("worst rel err {worst:.2e} (<= 1e-11)"),
    )
}

fn lobatto() -> Check {
    let rule = lobatto_rule(0.0, 0.0, 50).expect("Lobatto rule");
    let want = 2.0 / (51.0 * 52.0);
    let ulps = (rule.v_left - want).abs() / (want * f64::EPSILON / 2.0);
    let ulps_r = (rule.v_right - want).abs() / (want * f64::EPSILON / 2.0);
    let worst = worst_moment_error(|k| rule.integrate(|x| x.powi(k as i32)), 0.0, 0.0, 60);
    let passed = ulps.max(ulps_r) <= 4.0 && worst <= 1e-11;
    check(
        8,
        "Lobatto a=b=0, 50 interior nodes",
        passed,
        format!(
            "boundary weight off by {:.1} ulp (<= 4), moments k <= 60 worst {worst:.2e} (<= 1e-11)",
            ulps.max(ulps_r)
        ),
    )
}

fn time_per_node(p: &JacobiParams, policy: &BranchPolicy, parallel: bool) -> f64 {
    let go = || {
        if parallel {
            compute_rule(p, policy)
        } else {
            compute_rule_seq(p, policy)
        }
        .expect("rule")
    };
    black_box(go());
    let mut reps = 0usize;
    let start = Instant::now();
    while reps < 5 || start.elapsed().as_secs_f64() < 0.2 {
        black_box(go());
        reps += 1;
    }
    start.elapsed().as_secs_f64() / (reps * p.n) as f64
}

/// Mean seconds per node (nodes and weights) at `n = 1000`, for the default
/// method, and for the elementary and Bessel branches alone on one thread.
pub fn timings() -> (f64, f64, f64) {
    let p = JacobiParams::new(1000, 0.1, -0.3).expect("valid");
    let auto = time_per_node(&p, &BranchPolicy::new(&p), true);
    let with = |method| BranchPolicy {
        method,
        ..BranchPolicy::new(&p)
    };
    let elem = time_per_node(&p, &with(Method::Elementary), false);
    let bessel = time_per_node(&p, &with(Method::Bessel), false);
    (auto, elem, bessel)
}

fn performance() -> Check {
    let (auto, elem, bessel) = timings();
    check(
        9,
        "cost per node at n=1000",
        auto <= 10e-6 && elem < 0.8 * bessel,
        format!(
            "default {:.2} us/node (<= 10), elementary {:.2} us/node vs Bessel {:.2} us/node",
            auto * 1e6,
            elem * 1e6,
            bessel * 1e6
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_tables_parse() {
        for (name, text) in GOLDEN {
            let (p, rows) = parse_golden(text);
            assert_eq!(rows.len(), p.n, "{name}");
            assert!(rows.windows(2).all(|w| w[0].x < w[1].x), "{name}");
            assert!(rows
                .iter()
                .enumerate()
                .all(|(i, r)| r.k == i + 1 && (r.theta.cos() - r.x).abs() < 1e-15));
        }
    }

    #[test]
    fn moment_recurrence_closed_forms() {
        let m = moments(0.0, 0.0, 6);
        for (k, v) in m.iter().enumerate() {
            let want = if k % 2 == 0 {
                2.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            assert!((v - want).abs() < 1e-15, "{k}");
        }
        // 30 digits
        let m = moments(0.5, -0.3, 60);
        assert!(rel(m[1], -0.872_243_411_061_025_732_076_863_97) < 1e-15);
        assert!(rel(m[59], -0.102_831_661_241_614_925_708_803_48) < 1e-14);
        assert!(rel(m[60], 0.104_684_989_396_370_173_473_323_64) < 1e-14);
    }
}
