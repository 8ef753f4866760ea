use std::collections::BTreeMap;
use std::fmt::Write as _;

use ellgen::elliptic::{
    check_contract, epsilon_sign, exact_order, CurvePoint, JacobiSine, Lattice,
};
use ellgen::genus::{
    default_grid, genus_taylor, rigidity_check, ManifoldFixedData, DEFAULT_GRID_COUNT,
    DEFAULT_RADIUS, DEFAULT_TOLERANCE,
};
use ellgen::series::{
    elementary_symmetric, elementary_symmetric_expansion, TruncatedSeries, DEFAULT_TRUNCATION,
};
use ellgen::sheafmod::{
    assemble_sheaf_decomposition, local_smith_exponents_determinantal, s2n_restriction_matrix,
    ExactComplex,
};
use ellgen::transfer::{examples as transfer_examples, verify_transfer_lift, RotationSystem};
use ellgen::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{
    parse_complex, parse_coords, GenusArgs, SeriesChoice, SheafArgs, SineArgs, SymfunArgs,
    TransferArgs,
};
use crate::input::{load_input, load_lattice, InputDocument};
use crate::{execution, Cli, CliError, Command, CommandEcho, Common, Outcome, ReportDocument};

const CONTRACT_TOL: f64 = 1e-8;
const HALF_PERIOD_TOL: f64 = 1e-6;
const HALF_PERIOD_POINTS: usize = 20;
const TRANSFER_TOL: f64 = 1e-8;
const N_MAX: u32 = 24;
const GENUS_ORDER: i32 = 8;

type ClosedForm = Box<dyn Fn(Complex64) -> Complex64>;

/// Files and settings shared by every subcommand.
struct Context {
    lattice: Lattice,
    input: InputDocument,
    digests: BTreeMap<&'static str, String>,
    warnings: Vec<String>,
}

impl Context {
    fn load(common: &Common) -> Result<Self, CliError> {
        let mut digests = BTreeMap::new();
        let input = match &common.input {
            Some(p) => {
                let loaded = load_input(p)?;
                digests.insert("input", loaded.digest);
                loaded.value
            }
            None => InputDocument::default(),
        };
        let lattice = match (&common.lattice, &input.lattice) {
            (Some(p), _) => {
                let loaded = load_lattice(p)?;
                digests.insert("lattice", loaded.digest);
                loaded.value
            }
            (None, Some(spec)) => spec.to_lattice()?,
            (None, None) => Lattice::square(),
        };
        if let Some(t) = common.truncation {
            if !(1..=64).contains(&t) {
                return Err(CliError::input("--truncation must lie in 1..=64"));
            }
        }
        if let Some(t) = common.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::input("--tolerance must be positive"));
            }
        }
        Ok(Context {
            lattice,
            input,
            digests,
            warnings: Vec::new(),
        })
    }

    fn truncation(&self, common: &Common) -> i32 {
        common
            .truncation
            .or(self.input.options.truncation)
            .unwrap_or(DEFAULT_TRUNCATION)
    }

    fn tolerance(&self, common: &Common, default: f64) -> f64 {
        common
            .tolerance
            .or(self.input.options.tolerance)
            .unwrap_or(default)
    }

    fn n_max(&self) -> u32 {
        self.input.options.n_max.unwrap_or(N_MAX)
    }

    fn grid_radius(&self, flag: Option<f64>) -> Result<f64, CliError> {
        let r = flag
            .or(self.input.options.grid_radius)
            .unwrap_or(DEFAULT_RADIUS);
        if !(r > 0.0 && r < 0.5) {
            return Err(CliError::input("grid radius must lie in (0, 0.5)"));
        }
        Ok(r)
    }

    fn grid_count(&self, flag: Option<usize>) -> Result<usize, CliError> {
        let n = flag
            .or(self.input.options.grid_count)
            .unwrap_or(DEFAULT_GRID_COUNT);
        if n == 0 {
            return Err(CliError::input("grid needs at least one point"));
        }
        Ok(n)
    }

    fn manifold(&self) -> Result<ManifoldFixedData, CliError> {
        self.input
            .manifold
            .as_ref()
            .ok_or_else(|| CliError::input("this command needs --input with a manifold section"))?
            .to_fixed_data()
    }

    fn finish(
        self,
        name: &'static str,
        options: Value,
        results: Value,
        summary: String,
    ) -> Outcome {
        Outcome {
            report: ReportDocument {
                command: CommandEcho { name, options },
                input_digest: self.digests,
                lattice: self.lattice,
                results,
                warnings: self.warnings,
            },
            summary,
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = Context::load(&cli.common)?;
    match &cli.command {
        Command::Sine(a) => sine(ctx, &cli.common, a),
        Command::Genus(a) => genus(ctx, &cli.common, a),
        Command::Transfer(a) => transfer(ctx, &cli.common, a),
        Command::Sheaf(a) => sheaf(ctx, a),
        Command::Symfun(a) => symfun(ctx, &cli.common, a),
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

/// `count` seeded points in the `Λ̃` fundamental domain, at least
/// `0.05 |ω₁|` from every pole.
pub fn contract_points(sine: &JacobiSine, count: usize, seed: u64) -> Vec<Complex64> {
    let l = *sine.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = l.from_coords(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0));
        let clear = sine.poles().iter().all(|&p| {
            let (x, y) = l.coords(z - p);
            // distance to the pole modulo the doubled lattice
            [-1.0, 0.0, 1.0]
                .iter()
                .flat_map(|&i| [-2.0, 0.0, 2.0].map(move |j| (i, j)))
                .all(|(i, j)| l.from_coords(x - i, y - j).norm() > 0.05 * l.omega1.norm())
        });
        if clear {
            out.push(z);
        }
    }
    out
}

fn sine(mut ctx: Context, common: &Common, a: &SineArgs) -> Result<Outcome, CliError> {
    let sine = JacobiSine::new(ctx.lattice);
    let exec = execution(common);
    let mut results = serde_json::Map::new();
    let mut summary = String::new();
    results.insert(
        "half_period_constant".into(),
        json!(sine.half_period_constant()),
    );
    results.insert("zeros".into(), json!(sine.zeros()));
    results.insert("poles".into(), json!(sine.poles()));

    let points = a
        .eval
        .iter()
        .map(|s| parse_complex(s).map_err(CliError::Input))
        .collect::<Result<Vec<_>, _>>()?;
    let taylor = match (a.taylor, points.is_empty() && !a.check_periods) {
        (Some(t), _) => Some(t),
        (None, true) => Some(ctx.truncation(common)),
        (None, false) => None,
    };
    if !points.is_empty() {
        let mut evals = Vec::new();
        for z in &points {
            let v = sine.eval(*z)?;
            writeln!(summary, "s({}) = {}", fmt_c(*z), fmt_c(v)).unwrap();
            evals.push(json!({ "z": z, "value": v }));
        }
        results.insert("eval".into(), Value::Array(evals));
    }
    if let Some(t) = taylor {
        if !(1..=64).contains(&t) {
            return Err(CliError::input("--taylor must lie in 1..=64"));
        }
        let series = sine.taylor(t)?;
        let even_zero = (0..=t)
            .step_by(2)
            .all(|e| series.coeff(e) == Complex64::new(0.0, 0.0));
        writeln!(summary, "Taylor to order {t}: {series:?}").unwrap();
        results.insert(
            "taylor".into(),
            json!({ "series": series, "even_coefficients_zero": even_zero }),
        );
    }
    let tol = ctx.tolerance(common, CONTRACT_TOL);
    if a.check_periods {
        if a.points == 0 {
            return Err(CliError::input("--points must be positive"));
        }
        let pts = contract_points(&sine, a.points, common.seed);
        let report = check_contract(&sine, &pts, HALF_PERIOD_POINTS.min(pts.len()), exec)?;
        let passed = report.max_identity_error() < tol
            && report.half_period_spread < HALF_PERIOD_TOL
            && report.census_matches_divisor;
        writeln!(
            summary,
            "period checks on {} points: max error {:.3e}, half-period spread {:.3e}, census {} -> {}",
            report.points,
            report.max_identity_error(),
            report.half_period_spread,
            if report.census_matches_divisor { "ok" } else { "MISMATCH" },
            if passed { "passed" } else { "FAILED" }
        )
        .unwrap();
        if !passed {
            ctx.warnings.push("period checks failed".into());
        }
        results.insert(
            "checks".into(),
            json!({ "report": report, "passed": passed }),
        );
    }
    let options = json!({
        "eval": a.eval,
        "taylor": taylor,
        "check_periods": a.check_periods,
        "points": a.points,
        "seed": common.seed,
        "tolerance": tol,
    });
    Ok(ctx.finish("sine", options, Value::Object(results), summary))
}

fn genus(mut ctx: Context, common: &Common, a: &GenusArgs) -> Result<Outcome, CliError> {
    let data = ctx.manifold()?;
    let sine = JacobiSine::new(ctx.lattice);
    let order = a.taylor.unwrap_or(GENUS_ORDER);
    if !(1..=32).contains(&order) {
        return Err(CliError::input("--taylor must lie in 1..=32"));
    }
    let tol = ctx.tolerance(common, DEFAULT_TOLERANCE);
    let mut summary = String::new();
    let parity = data.parity_report();
    // for a spin action the parity of Σ m_j agrees at every fixed component
    let mixed = parity
        .windows(2)
        .any(|w| w[0].rotation_sum_parity != w[1].rotation_sum_parity);
    if data.declared_spin && mixed {
        ctx.warnings
            .push("declared spin, but Σ m_j mod 2 differs between components (advisory)".into());
    }
    let mut results = serde_json::Map::new();
    results.insert("declared_spin".into(), json!(data.declared_spin));
    results.insert("parity_report".into(), json!(parity));
    let run_grid = a.rigidity || a.grid.is_some() || !a.at.is_empty();
    let (radius, count) = (ctx.grid_radius(a.radius)?, ctx.grid_count(a.grid)?);
    let t = if run_grid {
        let grid = if a.at.is_empty() {
            default_grid(&ctx.lattice, radius, count)
        } else {
            a.at.iter()
                .map(|s| parse_complex(s).map_err(CliError::Input))
                .collect::<Result<Vec<_>, _>>()?
        };
        let report = rigidity_check(&data, &sine, &grid, tol, order, execution(common))?;
        for s in report.samples.iter().filter(|s| s.error.is_some()) {
            ctx.warnings.push(format!(
                "grid point {} excluded: {}",
                fmt_c(s.u),
                s.error.as_deref().unwrap_or("")
            ));
        }
        writeln!(
            summary,
            "{}: max relative deviation {:.3e} over {} points, value {}",
            if report.constant {
                "constant"
            } else {
                "not constant"
            },
            report.max_deviation,
            report.samples.len(),
            fmt_c(report.reference_value)
        )
        .unwrap();
        results.insert("constant".into(), json!(report.constant));
        let t = report.taylor.clone();
        results.insert("report".into(), json!(report));
        t
    } else {
        let t = genus_taylor(&data, &sine, order)?;
        results.insert("taylor".into(), json!(t));
        t
    };
    writeln!(summary, "Laurent expansion at u = 0: {:?}", t.series).unwrap();
    let principal = t
        .principal_part
        .iter()
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    writeln!(
        summary,
        "largest principal-part coefficient: {principal:.3e}"
    )
    .unwrap();
    let options = json!({
        "taylor": order,
        "tolerance": tol,
        "rigidity": run_grid,
        "at": a.at,
        "grid_count": count,
        "grid_radius": radius,
    });
    Ok(ctx.finish("genus", options, Value::Object(results), summary))
}

fn transfer(ctx: Context, common: &Common, a: &TransferArgs) -> Result<Outcome, CliError> {
    let l = ctx.lattice;
    let sine = JacobiSine::new(l);
    let n_max = ctx.n_max();
    let tol = ctx.tolerance(common, TRANSFER_TOL);
    let count = ctx.grid_count(a.grid)?;
    let grid = default_grid(&l, DEFAULT_RADIUS, count);
    let alpha = match (&a.alpha, a.order) {
        (Some(s), order) => {
            let (x, y) = parse_coords(s).map_err(CliError::Input)?;
            let p = CurvePoint::from_coords(l, x, y);
            if let Some(n) = order {
                match exact_order(&p, n_max) {
                    Some(k) if k != n => {
                        return Err(CliError::input(format!("α has exact order {k}, not {n}")))
                    }
                    _ => {}
                }
            }
            Some(p)
        }
        (None, Some(n)) => {
            if n < 2 {
                return Err(CliError::input("--order must be at least 2"));
            }
            Some(CurvePoint::from_coords(l, 1.0 / n as f64, 0.0))
        }
        (None, None) => None,
    };
    let cases: Vec<(String, ellgen::genus::FixedComponent, CurvePoint)> =
        match (&ctx.input.manifold, alpha) {
            (Some(_), Some(p)) => ctx
                .manifold()?
                .components
                .into_iter()
                .map(|c| (c.name.clone(), c, p))
                .collect(),
            (Some(_), None) => {
                return Err(CliError::input(
                    "transfer with --input needs --alpha or --order",
                ))
            }
            (None, alpha) => transfer_examples::all()
                .into_iter()
                .map(|(name, c, (x, y))| {
                    (
                        name.to_string(),
                        c,
                        alpha.unwrap_or(CurvePoint::from_coords(l, x, y)),
                    )
                })
                .collect(),
        };
    let mut out = Vec::new();
    let mut summary = String::new();
    let mut all_passed = true;
    for (name, comp, p) in cases {
        let (n, eps) = epsilon_sign(&p, n_max)?;
        let cert = verify_transfer_lift(&comp, &sine, &p, n_max, &grid, tol, execution(common))?;
        let sys = RotationSystem::new(&comp.rotation_numbers(), n)?;
        all_passed &= cert.passed;
        writeln!(
            summary,
            "{name}: n = {n}, ε = {eps}, σ(N) = {}, max mismatch {:.3e} -> {}",
            cert.sigma_n,
            cert.max_mismatch,
            if cert.passed { "passed" } else { "FAILED" }
        )
        .unwrap();
        out.push(json!({
            "case": name,
            "alpha": p,
            "alpha_coords": p.coords(),
            "sigma_direct": sys.sigma(),
            "sigma_three_sum": sys.sigma_three_sum(),
            "certificate": cert,
        }));
    }
    let options = json!({
        "alpha": a.alpha,
        "order": a.order,
        "grid_count": count,
        "tolerance": tol,
        "n_max": n_max,
    });
    let results = json!({ "certificates": out, "passed": all_passed });
    Ok(ctx.finish("transfer", options, results, summary))
}

fn sheaf(ctx: Context, a: &SheafArgs) -> Result<Outcome, CliError> {
    if a.s2n < 1 || a.s2n > 64 {
        return Err(CliError::input(format!(
            "--s2n must lie in 1..=64, got {}",
            a.s2n
        )));
    }
    let n = a.s2n as u32;
    let decomposition = assemble_sheaf_decomposition(n, &ctx.lattice)?;
    let cross_check =
        local_smith_exponents_determinantal(&s2n_restriction_matrix::<ExactComplex>(n)?)?;
    let summary = format!(
        "S²({n}): {} support points with exponents {:?}, |degree| {}, Abel sum {} ({}); twist degree {} or {}\n",
        decomposition.local_exponents.len(),
        cross_check,
        decomposition.degree.unsigned_abs(),
        fmt_c(decomposition.abel_sum.z),
        if decomposition.abel_sum_vanishes { "≡ 0" } else { "nonzero" },
        decomposition.twist_degree_effective,
        decomposition.twist_degree_negative,
    );
    let results = json!({
        "support_count": decomposition.local_exponents.len(),
        "determinantal_exponents": cross_check,
        "decomposition": decomposition,
    });
    Ok(ctx.finish("sheaf", json!({ "s2n": a.s2n }), results, summary))
}

fn parse_coefficients(s: &str) -> Result<Vec<Complex64>, CliError> {
    let v: Vec<Value> =
        serde_json::from_str(s).map_err(|e| CliError::input(format!("--coefficients: {e}")))?;
    v.iter()
        .map(|x| match x {
            Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
            other => serde_json::from_value::<Complex64>(other.clone())
                .map_err(|e| CliError::input(format!("--coefficients: {e}"))),
        })
        .collect()
}

fn symfun(ctx: Context, common: &Common, a: &SymfunArgs) -> Result<Outcome, CliError> {
    let bound = a.bound.unwrap_or(ctx.truncation(common) as usize);
    if a.roots == 0 || a.roots > 8 || bound == 0 || bound > 24 {
        return Err(CliError::input("need 1..=8 roots and a bound in 1..=24"));
    }
    let order = bound as i32;
    let sine = JacobiSine::new(ctx.lattice);
    let (q, closed_form): (TruncatedSeries, Option<ClosedForm>) = match (&a.coefficients, a.q) {
        (Some(s), _) => {
            let mut c = parse_coefficients(s)?;
            c.resize(bound + 1, Complex64::new(0.0, 0.0));
            c.truncate(bound + 1);
            (TruncatedSeries::new(0, c, order)?, None)
        }
        (None, SeriesChoice::OnePlusX) => (
            TruncatedSeries::from_real(0, &[1.0, 1.0], order),
            Some(Box::new(|x| x + 1.0)),
        ),
        (None, SeriesChoice::InverseOnePlusX) => (
            TruncatedSeries::from_real(0, &[1.0, 1.0], order).inverse()?,
            Some(Box::new(|x| 1.0 / (x + 1.0))),
        ),
        (None, SeriesChoice::SineOverX) => {
            let s = sine.clone();
            (
                sine.taylor(order + 1)?.shift(-1).truncate(order),
                Some(Box::new(move |x: Complex64| {
                    if x.norm() == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        s.eval(x).unwrap_or(Complex64::new(f64::NAN, 0.0)) / x
                    }
                })),
            )
        }
    };
    let p = elementary_symmetric_expansion(&q, a.roots, bound)?;
    let terms: Vec<Value> = p
        .terms()
        .iter()
        .map(|(e, c)| json!({ "exponents": e, "coefficient": c }))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut max_error: f64 = 0.0;
    for _ in 0..a.trials {
        let roots: Vec<Complex64> = (0..a.roots)
            .map(|_| {
                Complex64::from_polar(
                    a.root_radius * rng.gen::<f64>().sqrt(),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let expected: Complex64 = match &closed_form {
            Some(f) => roots.iter().map(|&x| f(x)).product(),
            None => roots.iter().map(|&x| q.eval(x)).product(),
        };
        let got = p.evaluate(&elementary_symmetric(&roots));
        max_error = max_error.max((got - expected).norm());
    }
    let mut summary = format!(
        "P_Q has {} terms for {} roots up to degree {bound}\n",
        terms.len(),
        a.roots
    );
    if a.trials > 0 {
        writeln!(
            summary,
            "max |Π Q(x_j) - P_Q(σ)| over {} trials: {max_error:.3e}",
            a.trials
        )
        .unwrap();
    }
    let results = json!({
        "series": q,
        "terms": terms,
        "trials": a.trials,
        "max_error": if a.trials > 0 { json!(max_error) } else { Value::Null },
    });
    let options = json!({
        "q": if a.coefficients.is_some() { json!("coefficients") } else { json!(a.q) },
        "roots": a.roots,
        "bound": bound,
        "trials": a.trials,
        "root_radius": a.root_radius,
        "seed": common.seed,
    });
    Ok(ctx.finish("symfun", options, results, summary))
}
