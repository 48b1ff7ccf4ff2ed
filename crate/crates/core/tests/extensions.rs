use gauss_jacobi::extensions::{
    barycentric_eval, barycentric_weights, lobatto_rule, radau_rule, RadauEnd,
};
use gauss_jacobi::gauss_jacobi;
use gauss_jacobi::params::log_total_mass;
use gauss_jacobi::selftest::moments;
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn lobatto_three_points() {
    // mpmath, from the first four moments of (1−x)^0.5 (1+x)^−0.3
    let r = lobatto_rule(0.5, -0.3, 1).unwrap();
    let want_x = -0.190_476_190_476_190_473_043_585_5;
    let want_w = [
        0.751_588_417_159_661_421_868_471_4,
        1.484_898_204_013_999_909_358_4,
        0.162_182_759_244_159_477_377_538,
    ];
    assert!(
        rel(r.interior_nodes[0], want_x) <= 4e-15,
        "{:.2e}",
        rel(r.interior_nodes[0], want_x)
    );
    for (got, want) in r.weights().iter().zip(want_w) {
        assert!(rel(*got, want) <= 1e-14, "{got} vs {want}");
    }
}

#[test]
fn lobatto_moments_and_positivity() {
    let (a, b) = (0.5, -0.3);
    let r = lobatto_rule(a, b, 50).unwrap();
    assert!(r.weights().iter().all(|w| *w > 0.0));
    assert!(r.interior_nodes.windows(2).all(|w| w[0] < w[1]));
    for (k, m) in moments(a, b, 60).into_iter().enumerate() {
        let q = r.integrate(|x| x.powi(k as i32));
        let scale = m.abs().max(r.integrate(|x| x.abs().powi(k as i32)));
        assert!((q - m).abs() / scale <= 1e-11, "k={k}: {q} vs {m}");
    }
}

#[test]
fn lobatto_symmetric_ends() {
    for (a, n) in [(0.0, 7), (-0.5, 40), (2.5, 200)] {
        let r = lobatto_rule(a, a, n).unwrap();
        assert_eq!(r.v_left, r.v_right);
    }
}

#[test]
fn radau_two_points() {
    // mpmath; boundary weight, interior node, interior weight
    let cases = [
        (
            RadauEnd::Left,
            0.962_033_173_964_366_623_329_366_5,
            0.062_500_000_000_000_003_252_606_52,
            1.436_636_206_453_454_185_275_043,
        ),
        (
            RadauEnd::Right,
            0.305_285_193_871_359_015_305_509_1,
            -0.562_499_999_999_999_994_578_989_1,
            2.093_384_186_546_461_793_298_9,
        ),
    ];
    for (end, v, x, w) in cases {
        let r = radau_rule(0.5, -0.3, 1, end).unwrap();
        assert!(rel(r.boundary_weight, v) <= 1e-14, "{end:?}");
        assert!(rel(r.interior_nodes[0], x) <= 1e-14, "{end:?}");
        assert!(rel(r.interior_weights[0], w) <= 1e-14, "{end:?}");
    }
}

#[test]
fn legendre_radau_two_points() {
    // exactness on 1, x, x² forces nodes −1, 1/3 and weights 1/2, 3/2
    let r = radau_rule(0.0, 0.0, 1, RadauEnd::Left).unwrap();
    assert!((r.interior_nodes[0] - 1.0 / 3.0).abs() <= 2e-16);
    assert!((r.boundary_weight - 0.5).abs() <= 2e-16);
    assert!((r.interior_weights[0] - 1.5).abs() <= 4e-16);
}

#[test]
fn radau_grid_positive_and_exact() {
    const EXPS: [f64; 4] = [-0.75, 0.0, 0.5, 3.0];
    for n in [5, 30, 120] {
        for a in EXPS {
            for b in EXPS {
                for end in [RadauEnd::Left, RadauEnd::Right] {
                    let r = radau_rule(a, b, n, end).unwrap();
                    assert!(
                        r.weights().iter().all(|w| *w > 0.0),
                        "n={n} a={a} b={b} {end:?}"
                    );
                    assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
                    let mass = log_total_mass(a, b).unwrap().exp();
                    assert!(rel(r.weights().iter().sum(), mass) <= 1e-14);
                    for (k, m) in moments(a, b, (2 * n).min(40)).into_iter().enumerate() {
                        let q = r.integrate(|x| x.powi(k as i32));
                        let scale = m.abs().max(r.integrate(|x| x.abs().powi(k as i32)));
                        assert!(
                            (q - m).abs() / scale <= 1e-11,
                            "n={n} a={a} b={b} {end:?} k={k}: {:.2e}",
                            (q - m).abs() / scale
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn radau_ends_mirror_each_other() {
    let (a, b, n) = (1.5, -0.4, 60);
    let left = radau_rule(a, b, n, RadauEnd::Left).unwrap();
    let right = radau_rule(b, a, n, RadauEnd::Right).unwrap();
    let (xl, wl) = (left.nodes(), left.weights());
    let (xr, wr) = (right.nodes(), right.weights());
    for i in 0..=n {
        assert!((xl[i] + xr[n - i]).abs() <= 4e-16 * xl[i].abs().max(1e-300));
        assert!(rel(wl[i], wr[n - i]) <= 1e-14, "i={i}");
    }
}

#[test]
fn barycentric_signs_alternate() {
    let bw = barycentric_weights(&gauss_jacobi(100, 0.1, -0.3).unwrap());
    assert!(bw.u[99] > 0.0);
    assert!(bw.u.windows(2).all(|w| w[0] * w[1] < 0.0));
    assert_eq!(bw.u.iter().fold(0.0f64, |m, v| m.max(v.abs())), 1.0);
}

#[test]
fn barycentric_scale_free() {
    let bw = barycentric_weights(&gauss_jacobi(40, 0.7, 0.2).unwrap());
    let f: Vec<f64> = bw.nodes.iter().map(|x| (3.0 * x).sin() + x * x).collect();
    for i in 0..10 {
        let x = -0.95 + 0.19 * i as f64 + 0.003;
        let base = bw.interpolate(&f, x);
        for c in [1e-3, 37.0] {
            let u: Vec<f64> = bw.u.iter().map(|v| v * c).collect();
            assert!((barycentric_eval(&bw.nodes, &u, &f, x) - base).abs() <= 1e-14);
        }
    }
}

#[test]
fn barycentric_chebyshev_first_kind() {
    let n = 25;
    let bw = barycentric_weights(&gauss_jacobi(n, -0.5, -0.5).unwrap());
    // nodes ascending: θ_i = (2(n−i)−1)π/(2n), u_i ∝ (−1)^{n−1−i} sin θ_i
    for i in 0..n {
        let t = (2.0 * (n - i) as f64 - 1.0) * PI / (2.0 * n as f64);
        let sign = if (n - 1 - i) % 2 == 0 { 1.0 } else { -1.0 };
        assert!((bw.u[i] - sign * t.sin()).abs() <= 1e-14, "i={i}");
    }
}

fn runge(x: f64) -> f64 {
    1.0 / (1.0 + 25.0 * x * x)
}

fn lagrange(nodes: &[f64], f: &[f64], x: f64) -> f64 {
    (0..nodes.len())
        .map(|i| {
            let l: f64 = (0..nodes.len())
                .filter(|&j| j != i)
                .map(|j| (x - nodes[j]) / (nodes[i] - nodes[j]))
                .product();
            f[i] * l
        })
        .sum()
}

fn runge_error(n: usize, probes: usize) -> (f64, f64) {
    let bw = barycentric_weights(&gauss_jacobi(n, 0.0, 0.0).unwrap());
    let f: Vec<f64> = bw.nodes.iter().map(|&x| runge(x)).collect();
    let (mut err, mut vs_lagrange) = (0.0f64, 0.0f64);
    for i in 0..probes {
        let x = -1.0 + 2.0 * (i as f64 + 0.5) / probes as f64;
        let p = bw.interpolate(&f, x);
        err = err.max((p - runge(x)).abs());
        vs_lagrange = vs_lagrange.max((p - lagrange(&bw.nodes, &f, x)).abs());
    }
    (err, vs_lagrange)
}

#[test]
fn runge_function_on_legendre_points() {
    let rho = 0.2 + 1.04f64.sqrt();
    let (_, d20) = runge_error(20, 200);
    assert!(d20 <= 1e-13, "{d20:.2e}");
    let (e100, d100) = runge_error(100, 1000);
    assert!(d100 <= 1e-12, "{d100:.2e}");
    let bound = rho.powi(-100);
    assert!(
        e100 <= 10.0 * bound && e100 >= 0.1 * bound,
        "{e100:.2e} vs {bound:.2e}"
    );
    let (e150, _) = runge_error(150, 1000);
    assert!(e150 <= 1e-10, "{e150:.2e}");
}
