//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed mathematical validation, 2 numerical
//! non-convergence, 3 malformed input or usage error. Output is a pure
//! function of the flags, so repeated runs are byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::betti::{
    dimensions, expected_degree, genericity_check, poincare, LengthVector, PoincareJson,
    PoincarePoly,
};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, DensePoly, GaussianRational, Ring};
use crate::hitchin::{
    charpoly_base, commute_check, hitchin_map, jacobian_rank_of, residues, DEFAULT_RANK_THRESHOLD,
};
use crate::quiver::{
    rank2_fixture, sample_exact, solve_real_with, AnyPoint, PointScalar, QuiverPoint, SolveOptions,
};
use crate::spectral::{
    local_models, order_check, smoothness_probe, spectral_check, trace_consistency,
};

#[derive(Parser, Debug)]
#[command(
    name = "hyperpolygon",
    version,
    about = "Betti numbers and Hitchin-system checks for hyperpolygon spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Poincaré polynomial of one space.
    Betti {
        #[arg(short)]
        r: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Poincaré polynomials for n = r+1 ..= n-max.
    BettiTable {
        #[arg(short)]
        r: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Genericity of a length vector, with a witness when it fails.
    Genericity {
        #[arg(short)]
        r: usize,
        /// Comma-separated entries, integers or "p/q".
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Exact sample on the complex level set, or a solver point.
    Sample(SampleArgs),
    /// Base coordinates of a point.
    Hitchin {
        #[arg(long)]
        point: PathBuf,
    },
    /// Pairwise Poisson brackets of the trace observables.
    Commute {
        #[arg(long)]
        point: PathBuf,
        /// Relative tolerance for float points.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Evaluation points (default n+1, n+2, n+3).
        #[arg(long, allow_hyphen_values = true)]
        eval_points: Option<String>,
    },
    /// Rank of the derivative of the base coordinates.
    Jacobian {
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RANK_THRESHOLD)]
        threshold: f64,
    },
    /// Spectral characteristic polynomial and its checks.
    Spectral {
        #[arg(long)]
        point: PathBuf,
        /// Vanishing-order table at the marked points (exact points only).
        #[arg(long)]
        check_orders: bool,
        /// Numeric search for singular points away from the marked fibres.
        #[arg(long)]
        probe: bool,
        #[arg(long, default_value_t = 1e-12)]
        precision: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print the reference fixtures, or validate them with --check.
    Fixtures {
        #[arg(long)]
        check: bool,
        /// Seed for the rank-4 local model coefficients.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Betti numbers by t-degree as CSV, for plotting.
    PlotData {
        #[arg(short)]
        r: usize,
        #[arg(short)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(short)]
    r: usize,
    #[arg(short)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact sample (the default).
    #[arg(long, conflicts_with = "solve")]
    exact: bool,
    /// Float point on the real and complex level sets, by least squares.
    #[arg(long, requires = "alpha")]
    solve: bool,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, default_value_t = SolveOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = SolveOptions::default().max_iter)]
    max_iter: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// What a subcommand produced: text for standard output and an exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }

    fn json(v: &Value, pass: bool) -> Self {
        Self {
            text: pretty(v),
            code: if pass { 0 } else { 1 },
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let to_out = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            if to_out {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return 3;
        }
    };
    match dispatch(cli.command) {
        Ok(o) => {
            if out.write_all(o.text.as_bytes()).is_err() {
                return 3;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Betti { r, n, format } => betti(r, n, format),
        Command::BettiTable { r, n_max, format } => betti_table(r, n_max, format),
        Command::Genericity { r, alpha } => {
            let report = genericity_check(r, &LengthVector::parse(&alpha)?)?;
            Ok(Outcome::ok(pretty(&report)))
        }
        Command::Sample(a) => sample(a),
        Command::Hitchin { point } => with_point(&point, Hitchin),
        Command::Commute {
            point,
            tol,
            eval_points,
        } => with_point(&point, Commute { tol, eval_points }),
        Command::Jacobian { point, threshold } => with_point(&point, Jacobian { threshold }),
        Command::Spectral {
            point,
            check_orders,
            probe,
            precision,
            format,
        } => {
            let p = read_point(&point)?;
            if (check_orders || probe) && !matches!(p, AnyPoint::Exact(_)) {
                return Err(Error::InvalidArgument(
                    "--check-orders and --probe need an exact point (vanishing orders are not defined in floating point)".into(),
                ));
            }
            apply(
                p,
                Spectral {
                    check_orders,
                    probe,
                    precision,
                    format,
                },
            )
        }
        Command::Fixtures { check, seed } => fixtures(check, seed),
        Command::PlotData { r, n, output } => plot_data(r, n, output.as_deref()),
    }
}

fn betti_rows(p: &PoincarePoly, out: &mut String) {
    for (t, c) in p.betti_by_t_degree() {
        out.push_str(&format!("{},{},{},{}\n", p.r, p.n, t, c));
    }
}

fn betti(r: usize, n: usize, format: Format) -> Result<Outcome> {
    let p = poincare(r, n)?;
    Ok(Outcome::ok(match format {
        Format::Json => pretty(&PoincareJson::from(&p)),
        Format::Csv => {
            let mut s = String::from("r,n,t_degree,coefficient\n");
            betti_rows(&p, &mut s);
            s
        }
    }))
}

fn betti_table(r: usize, n_max: usize, format: Format) -> Result<Outcome> {
    if r < 1 {
        return Err(Error::InvalidArgument("rank must be >= 1".into()));
    }
    let polys = (r + 1..=n_max)
        .map(|n| poincare(r, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::ok(match format {
        Format::Json => pretty(&polys.iter().map(PoincareJson::from).collect::<Vec<_>>()),
        Format::Csv => {
            let mut s = String::from("r,n,t_degree,coefficient\n");
            for p in &polys {
                betti_rows(p, &mut s);
            }
            s
        }
    }))
}

/// CSV `t_degree,betti` for `k = 0 ..= (r-1)(n-r-1)`.
pub fn emit_plot_data(r: usize, n: usize) -> Result<String> {
    let top = expected_degree(r, n).filter(|_| r >= 2).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "plot data needs r >= 2 and n >= r + 1 (got r = {r}, n = {n})"
        ))
    })?;
    let p = poincare(r, n)?;
    let mut s = String::from("t_degree,betti\n");
    for k in 0..=top {
        s.push_str(&format!("{},{}\n", 2 * k, p.poly.coeff(k)));
    }
    Ok(s)
}

fn plot_data(r: usize, n: usize, output: Option<&Path>) -> Result<Outcome> {
    let csv = emit_plot_data(r, n)?;
    match output {
        Some(path) => {
            write_file(path, &csv)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(csv)),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn read_point(path: &Path) -> Result<AnyPoint> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    AnyPoint::from_json_str(&text)
}

fn sample(a: SampleArgs) -> Result<Outcome> {
    let point = if a.solve {
        let alpha = LengthVector::parse(a.alpha.as_deref().expect("clap requires alpha"))?;
        let opts = SolveOptions {
            tol: a.tol,
            max_iter: a.max_iter,
            ..Default::default()
        };
        AnyPoint::Float(solve_real_with(a.r, a.n, &alpha, a.seed, opts)?)
    } else {
        let mut p = sample_exact(a.r, a.n, a.seed)?;
        if let Some(alpha) = &a.alpha {
            p = p.with_alpha(LengthVector::parse(alpha)?)?;
        }
        AnyPoint::Exact(p)
    };
    let text = pretty(&point.to_json());
    match &a.output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

/// A subcommand that works on points of either flavor.
trait PointCommand {
    fn run<F: PointScalar + std::fmt::Display>(&self, p: &QuiverPoint<F>) -> Result<Outcome>;
}

fn apply(p: AnyPoint, cmd: impl PointCommand) -> Result<Outcome> {
    match p {
        AnyPoint::Exact(p) => cmd.run(&p),
        AnyPoint::Float(p) => cmd.run(&p),
    }
}

fn with_point(path: &Path, cmd: impl PointCommand) -> Result<Outcome> {
    apply(read_point(path)?, cmd)
}

struct Hitchin;

impl PointCommand for Hitchin {
    fn run<F: PointScalar + std::fmt::Display>(&self, p: &QuiverPoint<F>) -> Result<Outcome> {
        let h = residues(p)?;
        // the characteristic-polynomial coordinates are always polynomial; the
        // trace coordinates can have a double pole when r >= 4
        let b = charpoly_base(&h)?;
        let mut v = json!({
            "r": p.r,
            "n": p.n,
            "flavor": F::FLAVOR.as_str(),
            "b": b.to_json_map(),
        });
        match hitchin_map(&h) {
            Ok(g) => v["g"] = g.to_json_map(),
            Err(e @ Error::DegreeOverflow { .. }) => {
                v["g"] = Value::Null;
                v["g_undefined"] = json!(e.to_string());
            }
            Err(e) => return Err(e),
        }
        Ok(Outcome::json(&v, true))
    }
}

struct Commute {
    tol: f64,
    eval_points: Option<String>,
}

impl PointCommand for Commute {
    fn run<F: PointScalar + std::fmt::Display>(&self, p: &QuiverPoint<F>) -> Result<Outcome> {
        let points: Vec<F> = match &self.eval_points {
            Some(s) => s
                .split(',')
                .map(|t| parse_rational(t).map(|q| F::from_rational(&q)))
                .collect::<Result<_>>()?,
            None => (1..=3).map(|k| F::from_i64((p.n + k) as i64)).collect(),
        };
        let report = commute_check(p, &points)?;
        let pass = if F::EXACT {
            report.all_exact_zero
        } else {
            report.max_relative < self.tol
        };
        let mut v = serde_json::to_value(&report).expect("serializable");
        v["pass"] = json!(pass);
        v["tol"] = json!(self.tol);
        Ok(Outcome::json(&v, pass))
    }
}

struct Jacobian {
    threshold: f64,
}

impl PointCommand for Jacobian {
    fn run<F: PointScalar + std::fmt::Display>(&self, p: &QuiverPoint<F>) -> Result<Outcome> {
        let report = jacobian_rank_of(p, self.threshold)?;
        let (_, dim_b) = dimensions(p.r, p.n)?;
        let mut v = serde_json::to_value(&report).expect("serializable");
        v["dim_b"] = json!(dim_b);
        v["full_rank"] = json!(report.rank as i64 == dim_b);
        Ok(Outcome::json(&v, true))
    }
}

struct Spectral {
    check_orders: bool,
    probe: bool,
    precision: f64,
    format: Format,
}

impl PointCommand for Spectral {
    fn run<F: PointScalar + std::fmt::Display>(&self, p: &QuiverPoint<F>) -> Result<Outcome> {
        let h = residues(p)?;
        let rep = spectral_check(&h)?;
        if self.check_orders && self.format == Format::Csv {
            let pass = rep.orders.all_pass();
            return Ok(Outcome {
                text: rep.orders.to_csv(&h.marked_points),
                code: if pass { 0 } else { 1 },
            });
        }
        let mut v = rep.charpoly.to_json();
        v["trace_consistency"] = serde_json::to_value(&rep.trace).expect("serializable");
        let mut pass = rep.trace.consistent;
        if self.check_orders {
            let rows: Vec<Value> = rep
                .orders
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "i": row.i,
                        "p": h.marked_points[row.point].to_compact_json(),
                        "order": row.order.finite(),
                        "bound": row.bound,
                        "pass": row.pass,
                    })
                })
                .collect();
            v["orders"] = Value::Array(rows);
            pass &= rep.orders.all_pass();
        }
        if self.probe {
            v["smoothness"] = serde_json::to_value(smoothness_probe(
                &rep.charpoly,
                &h.marked_points,
                self.precision,
            )?)
            .expect("serializable");
        }
        Ok(Outcome::json(&v, pass))
    }
}

fn fixtures(check: bool, seed: u64) -> Result<Outcome> {
    let models = local_models(seed);
    if !check {
        let v = json!({
            "rank2_point": rank2_fixture().to_json(),
            "local_models": models.iter().map(|m| json!({
                "name": m.name,
                "expected_residue_rank": m.expected_residue_rank,
                "c": m.charpoly().c[1..].iter().map(|c| c.coeffs().iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        return Ok(Outcome::ok(pretty(&v)));
    }

    let mut lines = Vec::new();
    let mut record = |name: &str, ok: bool| lines.push((name.to_string(), ok));

    let p24 = poincare(2, 4)?;
    record(
        "poincare(2,4) = 1 + 4u",
        p24.poly == DensePoly::from_i64s(&[1, 4]),
    );
    record(
        "poincare(2,3) = 1",
        poincare(2, 3)?.poly == DensePoly::from_i64s(&[1]),
    );

    let point = rank2_fixture();
    let h = residues(&point)?;
    let g = |v: i64| GaussianRational::from_i64(v);
    record(
        "rank-2 fixture: g_2 = [20]",
        hitchin_map(&h)?.coords == vec![vec![g(20)]],
    );
    let t = crate::spectral::twist(&h)?;
    let cp = crate::spectral::spectral_charpoly(&t)?;
    let c2 = DensePoly::from_roots(&(1..=4).map(g).collect::<Vec<_>>()).scale(&g(-10));
    record(
        "rank-2 fixture: c_2 = -10 (z-1)(z-2)(z-3)(z-4)",
        cp.coeff(2) == &c2,
    );
    record(
        "rank-2 fixture: trace consistency",
        trace_consistency(&h)?.consistent,
    );
    record(
        "rank-2 fixture: order bounds",
        order_check(&cp, &h.marked_points).all_pass(),
    );

    for m in &models {
        let v = m.validate();
        record(
            &format!("{}: characteristic polynomial", m.name),
            v.charpoly_matches,
        );
        record(
            &format!("{}: residue squares to zero", m.name),
            v.residue_square_zero,
        );
        record(
            &format!("{}: residue rank {}", m.name, m.expected_residue_rank),
            v.residue_rank_matches,
        );
        let expect_min = m.name == "rank3";
        record(
            &format!("{}: minimal orbit = {expect_min}", m.name),
            v.minimal_orbit == expect_min,
        );
    }

    let generic = genericity_check(2, &LengthVector::from_ints(&[1, 1, 1, 1])?)?;
    record(
        "genericity(2; 1,1,1,1) fails with witness r' = 1, S = {1,2}",
        !generic.generic
            && generic
                .witness
                .as_ref()
                .is_some_and(|w| w.rprime == 1 && w.subset == vec![1, 2]),
    );

    let all = lines.iter().all(|(_, ok)| *ok);
    let mut text = String::new();
    for (name, ok) in &lines {
        text.push_str(&format!("{} {name}\n", if *ok { "ok  " } else { "FAIL" }));
    }
    Ok(Outcome {
        text,
        code: if all { 0 } else { 1 },
    })
}
