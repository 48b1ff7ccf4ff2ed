use clap::{Args, Parser, Subcommand, ValueEnum};
use gauss_jacobi::extensions::{barycentric_weights, lobatto_rule, radau_rule, RadauEnd};
use gauss_jacobi::{
    coeffs, compute_nodes, compute_rule, compute_rule_seq, selftest, BranchPolicy, JacobiParams,
    Method,
};
use serde::Serialize;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "gauss-jacobi",
    version,
    about = "Gauss-Jacobi quadrature from asymptotic expansions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nodes only: k, theta, theta0, eps, x, branch.
    Nodes(RuleArgs),
    /// Nodes, weights and scaled weights.
    Rule(RuleArgs),
    /// Gauss-Lobatto rule; --n counts interior nodes.
    Lobatto(ExtArgs),
    /// Gauss-Radau rule; --n counts interior nodes.
    Radau {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long, value_enum, default_value = "left")]
        end: End,
    },
    /// Barycentric interpolation weights at the Gauss nodes.
    Bary(RuleArgs),
    /// Reference checks; prints the coefficient artifact hash and one line per check.
    Selftest {
        /// Run a single check.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=selftest::CRITERIA as u64))]
        only: Option<u64>,
    },
    /// Mean cost in ns per node (nodes and weights) for each branch.
    Bench {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
        beta: f64,
        /// Minimum wall time per measurement, in milliseconds.
        #[arg(long, default_value_t = 200)]
        millis: u64,
    },
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct RuleArgs {
    #[command(flatten)]
    params: Params,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// One Newton step per node.
    #[arg(long)]
    refine: bool,
    /// Node branch boundary in radians from the nearer endpoint.
    #[arg(long)]
    theta_switch: Option<f64>,
    /// Weight branch boundary in radians.
    #[arg(long)]
    theta_switch_weights: Option<f64>,
}

#[derive(Args)]
struct ExtArgs {
    #[command(flatten)]
    params: Params,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Elementary,
    Bessel,
    Recurrence,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Elementary => Method::Elementary,
            MethodArg::Bessel => Method::Bessel,
            MethodArg::Recurrence => Method::Recurrence,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum End {
    Left,
    Right,
}

/// Decimal with 17 significant digits, enough to round-trip binary64.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
struct NodeRecord {
    k: usize,
    theta: f64,
    theta0: f64,
    eps: f64,
    x: f64,
    branch: &'static str,
}

#[derive(Serialize)]
struct RuleRecord {
    k: usize,
    theta: f64,
    x: f64,
    w: f64,
    omega: f64,
    branch: &'static str,
}

#[derive(Serialize)]
struct PointRecord {
    k: usize,
    x: f64,
    w: f64,
}

#[derive(Serialize)]
struct BaryRecord {
    k: usize,
    x: f64,
    u: f64,
}

trait Row: Serialize {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

impl Row for NodeRecord {
    const HEADER: &'static str = "k,theta,theta0,eps,x,branch";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.k,
            num(self.theta),
            num(self.theta0),
            num(self.eps),
            num(self.x),
            self.branch
        )
    }
}

impl Row for RuleRecord {
    const HEADER: &'static str = "k,theta,x,w,omega,branch";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.k,
            num(self.theta),
            num(self.x),
            num(self.w),
            num(self.omega),
            self.branch
        )
    }
}

impl Row for PointRecord {
    const HEADER: &'static str = "k,x,w";
    fn csv(&self) -> String {
        format!("{},{},{}", self.k, num(self.x), num(self.w))
    }
}

impl Row for BaryRecord {
    const HEADER: &'static str = "k,x,u";
    fn csv(&self) -> String {
        format!("{},{},{}", self.k, num(self.x), num(self.u))
    }
}

fn emit<R: Row>(format: Format, rows: &[R]) -> io::Result<()> {
    let mut out = BufWriter::new(io::stdout().lock());
    match format {
        Format::Csv => {
            writeln!(out, "{}", R::HEADER)?;
            for r in rows {
                writeln!(out, "{}", r.csv())?;
            }
        }
        Format::Json => {
            for r in rows {
                serde_json::to_writer(&mut out, r)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()
}

enum Failure {
    Domain(String),
    Io(io::Error),
    Checks,
}

impl From<gauss_jacobi::Error> for Failure {
    fn from(e: gauss_jacobi::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn setup(a: &RuleArgs) -> Result<(JacobiParams, BranchPolicy), Failure> {
    let p = JacobiParams::new(a.params.n, a.params.alpha, a.params.beta)?;
    let mut policy = BranchPolicy::new(&p);
    policy.method = a.method.into();
    policy.newton_refine = a.refine;
    if let Some(t) = a.theta_switch {
        policy.theta_switch_nodes = t;
    }
    if let Some(t) = a.theta_switch_weights {
        policy.theta_switch_weights = t;
    }
    policy.validate()?;
    if !p.accuracy_guaranteed() {
        eprintln!("warning: outside n >= 20, -1 < alpha, beta <= 5; accuracy is not guaranteed");
    }
    Ok((p, policy))
}

fn nodes(a: &RuleArgs) -> Result<(), Failure> {
    let (p, policy) = setup(a)?;
    let rows: Vec<NodeRecord> = compute_nodes(&p, &policy)?
        .iter()
        .map(|nd| NodeRecord {
            k: nd.k,
            theta: nd.theta,
            theta0: nd.theta0,
            eps: nd.eps,
            x: nd.x,
            branch: nd.branch.as_str(),
        })
        .collect();
    Ok(emit(a.params.format, &rows)?)
}

fn rule(a: &RuleArgs) -> Result<(), Failure> {
    let (p, policy) = setup(a)?;
    let r = compute_rule(&p, &policy)?;
    let rows: Vec<RuleRecord> = (0..r.len())
        .map(|i| RuleRecord {
            k: i + 1,
            theta: r.thetas[i],
            x: r.nodes[i],
            w: r.weights[i],
            omega: r.scaled_weights[i],
            branch: r.branch_log[i].as_str(),
        })
        .collect();
    Ok(emit(a.params.format, &rows)?)
}

fn points(format: Format, nodes: Vec<f64>, weights: Vec<f64>) -> Result<(), Failure> {
    let rows: Vec<PointRecord> = nodes
        .into_iter()
        .zip(weights)
        .enumerate()
        .map(|(i, (x, w))| PointRecord { k: i + 1, x, w })
        .collect();
    Ok(emit(format, &rows)?)
}

fn bary(a: &RuleArgs) -> Result<(), Failure> {
    let (p, policy) = setup(a)?;
    let bw = barycentric_weights(&compute_rule(&p, &policy)?);
    let rows: Vec<BaryRecord> = bw
        .nodes
        .iter()
        .zip(&bw.u)
        .enumerate()
        .map(|(i, (&x, &u))| BaryRecord { k: i + 1, x, u })
        .collect();
    Ok(emit(a.params.format, &rows)?)
}

fn run_selftest(only: Option<u64>) -> Result<(), Failure> {
    println!("coefficient artifact sha256 {}", coeffs::artifact_hash());
    let checks = match only {
        Some(id) => vec![selftest::run(id as usize)],
        None => selftest::run_all(),
    };
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

fn bench(n: usize, alpha: f64, beta: f64, millis: u64) -> Result<(), Failure> {
    let p = JacobiParams::new(n, alpha, beta)?;
    let base = BranchPolicy::new(&p);
    let budget = millis as f64 * 1e-3;
    let time = |policy: BranchPolicy, parallel: bool| -> Result<f64, Failure> {
        let run = || {
            if parallel {
                compute_rule(&p, &policy)
            } else {
                compute_rule_seq(&p, &policy)
            }
        };
        run()?;
        let start = Instant::now();
        let mut reps = 0usize;
        while reps < 3 || start.elapsed().as_secs_f64() < budget {
            std::hint::black_box(run()?);
            reps += 1;
        }
        Ok(start.elapsed().as_secs_f64() * 1e9 / (reps * n) as f64)
    };
    println!("n={n} alpha={alpha} beta={beta}");
    let cases = [
        ("auto", Method::Auto, true),
        ("auto-sequential", Method::Auto, false),
        ("elementary", Method::Elementary, false),
        ("bessel", Method::Bessel, false),
        ("recurrence", Method::Recurrence, false),
    ];
    for (name, method, parallel) in cases {
        let ns = time(BranchPolicy { method, ..base }, parallel)?;
        println!("{name:<16} {ns:>10.1} ns/node");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match &cli.command {
        Command::Nodes(a) => nodes(a),
        Command::Rule(a) => rule(a),
        Command::Bary(a) => bary(a),
        Command::Lobatto(e) => {
            let p = &e.params;
            lobatto_rule(p.alpha, p.beta, p.n)
                .map_err(Failure::from)
                .and_then(|r| points(p.format, r.nodes(), r.weights()))
        }
        Command::Radau { ext, end } => {
            let p = &ext.params;
            let end = match end {
                End::Left => RadauEnd::Left,
                End::Right => RadauEnd::Right,
            };
            radau_rule(p.alpha, p.beta, p.n, end)
                .map_err(Failure::from)
                .and_then(|r| points(p.format, r.nodes(), r.weights()))
        }
        Command::Selftest { only } => run_selftest(*only),
        Command::Bench {
            n,
            alpha,
            beta,
            millis,
        } => bench(*n, *alpha, *beta, *millis),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}
