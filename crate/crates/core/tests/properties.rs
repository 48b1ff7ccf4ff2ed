use gauss_jacobi::params::{gauss_mass_constant, log_total_mass, reflect};
use gauss_jacobi::selftest::moments;
use gauss_jacobi::{
    compute_rule, gauss_jacobi, newton_refine, BranchPolicy, JacobiParams, Method, QuadratureRule,
};
use proptest::prelude::*;

fn rule(n: usize, a: f64, b: f64) -> QuadratureRule {
    gauss_jacobi(n, a, b).unwrap()
}

fn assert_well_formed(r: &QuadratureRule) {
    let n = r.len();
    assert_eq!(r.weights.len(), n);
    assert!(
        r.nodes.iter().all(|x| x.abs() < 1.0),
        "node outside (-1, 1)"
    );
    assert!(
        r.nodes.windows(2).all(|w| w[0] < w[1]),
        "nodes not strictly ascending"
    );
    assert!(
        r.weights
            .iter()
            .chain(&r.scaled_weights)
            .all(|w| w.is_finite() && *w > 0.0),
        "bad weight"
    );
}

fn sum_error(r: &QuadratureRule) -> f64 {
    let mut w = r.weights.clone();
    w.sort_by(f64::total_cmp);
    let mass = log_total_mass(r.params.alpha, r.params.beta).unwrap().exp();
    (w.iter().sum::<f64>() / mass - 1.0).abs()
}

#[test]
fn grid_positivity_order_and_mass() {
    const EXPS: [f64; 6] = [-0.75, -0.3, 0.0, 0.5, 2.0, 5.0];
    for n in [20, 50, 100, 500, 1000] {
        for a in EXPS {
            for b in EXPS {
                let r = rule(n, a, b);
                assert_well_formed(&r);
                assert!(
                    sum_error(&r) <= 1e-13,
                    "n={n} a={a} b={b}: {:.2e}",
                    sum_error(&r)
                );
            }
        }
    }
}

#[test]
fn exactness_on_monomials() {
    for n in [20usize, 100] {
        for (a, b) in [(0.5, -0.3), (0.0, 0.0), (-0.75, 2.0), (3.0, 1.0)] {
            let r = rule(n, a, b);
            let kmax = (2 * n - 1).min(60);
            for (k, m) in moments(a, b, kmax).into_iter().enumerate() {
                let q = r.integrate(|x| x.powi(k as i32));
                // odd moments can vanish, so scale by the integral of |x|^k
                let scale = m.abs().max(r.integrate(|x| x.abs().powi(k as i32)));
                assert!(
                    (q - m).abs() / scale <= 1e-11,
                    "n={n} a={a} b={b} k={k}: {q} vs {m}"
                );
            }
        }
    }
}

#[test]
fn circle_theorem_trend() {
    let (a, b) = (0.3, -0.4);
    let deviation = |n: usize| {
        let r = rule(n, a, b);
        (0..n)
            .filter(|&i| r.nodes[i].abs() <= 0.9)
            .map(|i| {
                let (x, t) = (r.nodes[i], r.thetas[i]);
                let (sh, ch) = (0.5 * t).sin_cos();
                let wx = (2.0 * sh * sh).powf(a) * (2.0 * ch * ch).powf(b);
                (n as f64 * r.weights[i] / (std::f64::consts::PI * wx) - (1.0 - x * x).sqrt()).abs()
            })
            .fold(0.0, f64::max)
    };
    let d: Vec<f64> = [100, 300, 1000].iter().map(|&n| deviation(n)).collect();
    assert!(d[1] <= 1.2 * d[0] && d[2] <= 1.2 * d[1], "{d:?}");
    assert!(d[2] < 0.01);
}

fn ulp(v: f64) -> f64 {
    let e = v.abs().log2().floor();
    2f64.powf(e - 52.0)
}

// 30-digit references at the binary64 values of the exponents
const MASS_REFERENCES: [(usize, f64, f64, f64); 45] = [
    (1, 1.0 / 2.0, 1.0 / 4.0, 3.149826854275950779369855),
    (1, 1.0 / 3.0, -1.0 / 2.0, 1.998723584374031060274466),
    (1, 3.0 / 4.0, 1.0 / 4.0, 3.644552410208034812005215),
    (1, 2.0 / 1.0, -1.0 / 4.0, 8.387122687205880117505252),
    (1, 1.0 / 4.0, 5.0 / 1.0, 53.73729971217811873537467),
    (1, -3.0 / 4.0, -3.0 / 10.0, 0.7712785488620804886234239),
    (1, -1.0 / 2.0, 1.0 / 2.0, 2.356194490192344928846983),
    (1, 1.0 / 3.0, 2.0 / 1.0, 7.775512765065502964802909),
    (1, -1.0 / 4.0, 1.0 / 3.0, 2.233490003812424707970063),
    (2, 1.0 / 2.0, 1.0 / 4.0, 3.221413828236767842537352),
    (2, 1.0 / 3.0, -1.0 / 2.0, 1.907872512357029652570102),
    (2, 3.0 / 4.0, 1.0 / 4.0, 3.758444673027035899880378),
    (2, 2.0 / 1.0, -1.0 / 4.0, 7.827981174725488109671568),
    (2, 1.0 / 4.0, 5.0 / 1.0, 58.36982554943485310911387),
    (2, -3.0 / 4.0, -3.0 / 10.0, 0.862614166490484752565544),
    (2, -1.0 / 2.0, 1.0 / 2.0, 2.208932334555323370794046),
    (2, 1.0 / 3.0, 2.0 / 1.0, 8.373629131609003162216553),
    (2, -1.0 / 4.0, 1.0 / 3.0, 2.188820203736176215893586),
    (3, 1.0 / 2.0, 1.0 / 4.0, 3.2572073152171763741211),
    (3, 1.0 / 3.0, -1.0 / 2.0, 1.870463247408852602391245),
    (3, 3.0 / 4.0, 1.0 / 4.0, 3.817170371043083335816009),
    (3, 2.0 / 1.0, -1.0 / 4.0, 7.55331516859476922863046),
    (3, 1.0 / 4.0, 5.0 / 1.0, 61.31779653678004771058426),
    (3, -3.0 / 4.0, -3.0 / 10.0, 0.8957916344324264724013577),
    (3, -1.0 / 2.0, 1.0 / 2.0, 2.147573103039897721605323),
    (3, 1.0 / 3.0, 2.0 / 1.0, 8.722530345426044942484829),
    (3, -1.0 / 4.0, 1.0 / 3.0, 2.169101102801616070780746),
    (5, 1.0 / 2.0, 1.0 / 4.0, 3.292891251193382854421111),
    (5, 1.0 / 3.0, -1.0 / 2.0, 1.837372593256791943342092),
    (5, 3.0 / 4.0, 1.0 / 4.0, 3.877037320417059818602342),
    (5, 2.0 / 1.0, -1.0 / 4.0, 7.279644329152929763825009),
    (5, 1.0 / 4.0, 5.0 / 1.0, 64.93542527115171169878287),
    (5, -3.0 / 4.0, -3.0 / 10.0, 0.9232722193559206957460202),
    (5, -1.0 / 2.0, 1.0 / 2.0, 2.092877100571850326508187),
    (5, 1.0 / 3.0, 2.0 / 1.0, 9.114835537995445985968203),
    (5, -1.0 / 4.0, 1.0 / 3.0, 2.150958738275005030636318),
    (10, 1.0 / 2.0, 1.0 / 4.0, 3.325163570050237076751652),
    (10, 1.0 / 3.0, -1.0 / 2.0, 1.810521312348805467612243),
    (10, 3.0 / 4.0, 1.0 / 4.0, 3.932413261469240102972121),
    (10, 2.0 / 1.0, -1.0 / 4.0, 7.030077106445700603193417),
    (10, 1.0 / 4.0, 5.0 / 1.0, 69.116995897730846630718),
    (10, -3.0 / 4.0, -3.0 / 10.0, 0.9443983662679412252275779),
    (10, -1.0 / 2.0, 1.0 / 2.0, 2.048172086748582873651378),
    (10, 1.0 / 3.0, 2.0 / 1.0, 9.518513241813095740765478),
    (10, -1.0 / 4.0, 1.0 / 3.0, 2.135732543099457098838139),
];

#[test]
fn mass_constant_small_degrees() {
    for (n, a, b, want) in MASS_REFERENCES {
        let got = gauss_mass_constant(&JacobiParams::new(n, a, b).unwrap()).exp();
        let ulps = (got - want).abs() / ulp(want);
        assert!(ulps <= 4.0, "n={n} a={a} b={b}: {ulps:.1} ulp");
    }
}

#[test]
fn branch_switch_overlap() {
    for (n, a, b) in [
        (100, 0.1, -0.3),
        (100, 2.0, 0.5),
        (1000, -0.6, -0.7),
        (1000, 5.0, -0.3),
    ] {
        let p = JacobiParams::new(n, a, b).unwrap();
        let base = BranchPolicy::new(&p);
        let r0 = compute_rule(&p, &base).unwrap();
        for f in [0.9, 1.1] {
            let pol = BranchPolicy {
                theta_switch_nodes: base.theta_switch_nodes * f,
                ..base
            };
            let r = compute_rule(&p, &pol).unwrap();
            for i in 0..n {
                let e = ((r.nodes[i] - r0.nodes[i]) / r0.nodes[i]).abs();
                assert!(
                    e <= 1e-12,
                    "n={n} a={a} b={b} factor {f} k={}: {e:.2e}",
                    i + 1
                );
            }
        }
    }
}

#[test]
fn interlacing_small_degrees_on_recurrence() {
    for n in 1..60usize {
        let nodes = |m: usize| {
            let p = JacobiParams::new(m, 0.4, -0.6).unwrap();
            compute_rule(
                &p,
                &BranchPolicy {
                    method: Method::Recurrence,
                    ..BranchPolicy::new(&p)
                },
            )
            .unwrap()
            .nodes
        };
        let (lo, hi) = (nodes(n), nodes(n + 1));
        for i in 0..n {
            assert!(hi[i] < lo[i] && lo[i] < hi[i + 1], "n={n} i={i}");
        }
    }
}

fn exponent() -> impl Strategy<Value = f64> {
    (-0.95f64..5.0).prop_map(|v| (v * 1e4).round() / 1e4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn random_rules_are_well_formed(n in 20usize..600, a in exponent(), b in exponent()) {
        let r = rule(n, a, b);
        assert_well_formed(&r);
        prop_assert!(sum_error(&r) <= 1e-13, "sum error {:.2e}", sum_error(&r));
    }

    #[test]
    fn symmetric_exponents_give_symmetric_rules(n in 20usize..500, a in exponent()) {
        let r = rule(n, a, a);
        for i in 0..n {
            prop_assert_eq!(r.nodes[i], -r.nodes[n - 1 - i]);
            prop_assert_eq!(r.weights[i], r.weights[n - 1 - i]);
        }
    }

    #[test]
    fn swapping_exponents_reflects_the_rule(n in 20usize..500, a in exponent(), b in exponent()) {
        let r = rule(n, a, b);
        let s = rule(n, b, a);
        let mirrored = reflect(&s.nodes);
        for (i, (m, x)) in mirrored.iter().zip(&r.nodes).enumerate() {
            prop_assert!((m - x).abs() <= 4e-16 * x.abs().max(1e-300), "k={}", i + 1);
            prop_assert!(((s.weights[n - 1 - i] - r.weights[i]) / r.weights[i]).abs() <= 1e-15);
        }
    }

    #[test]
    fn reflect_is_an_involution(xs in proptest::collection::vec(-1.0f64..1.0, 1..50)) {
        prop_assert_eq!(reflect(&reflect(&xs)), xs);
    }

    #[test]
    fn degrees_interlace(n in 20usize..200, a in exponent(), b in exponent()) {
        let lo = rule(n, a, b).nodes;
        let hi = rule(n + 1, a, b).nodes;
        for i in 0..n {
            prop_assert!(hi[i] < lo[i] && lo[i] < hi[i + 1], "i={}", i);
        }
    }

    #[test]
    fn newton_barely_moves_large_degree_nodes(n in 100usize..2000, a in exponent(), b in exponent(), pick in 0.0f64..1.0) {
        let p = JacobiParams::new(n, a, b).unwrap();
        let nodes = gauss_jacobi::compute_nodes(&p, &BranchPolicy::new(&p)).unwrap();
        let nd = nodes[((n - 1) as f64 * pick) as usize];
        let out = newton_refine(&p, &nd).unwrap();
        prop_assert!(!out.clamped);
        prop_assert!(out.step.abs() <= 1e-13 * nd.theta.min(std::f64::consts::PI - nd.theta), "step {:.2e}", out.step);
    }
}
