//! Command-line surface: one subcommand per checker, JSON reports on stdout.
//!
//! Exit codes: 0 — ran and the report is consistent (equation or flags may
//! still be negative; the report carries them); 1 — usage or internal error;
//! 2 — hypothesis failure; 3 — expression parse error; 4 — theorem soundness
//! violation (equation holds, hypotheses pass, conclusion fails: an
//! implementation bug, never data).

use clap::{Parser, Subcommand};
use expoly::numeric::{self, Grid, RealFn};
use expoly::probability::{self, RandomVectorSpec};
use expoly::scalar::Rat;
use expoly::theorems::{self, KnwRhs};
use expoly::{geometry, ExpPolynomial, GaussianRational, RationalMatrix, UnivariatePoly};
use num_complex::Complex64;
use expoly_cli::parse::{parse_exppoly, parse_scalar, ParseError};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "expoly",
    about = "Exact checkers for functional equations of exponential polynomials, plus numeric and Monte Carlo harnesses.",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Order-m difference equation test on one function.
    Frechet {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Minimal separable decomposition of f(x+y).
    LeviCivita {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Span dimension of the translated-sum family over sample shifts.
    Delcp1 {
        #[arg(long = "f", required = true, allow_hyphen_values = true)]
        fs: Vec<String>,
        #[arg(long = "c", required = true, allow_hyphen_values = true)]
        cs: Vec<String>,
        #[arg(long = "y", required = true, allow_hyphen_values = true)]
        ys: Vec<String>,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Separated-form membership of Σ f_i(b_ix+c_iy) with budgets r, s.
    Got {
        #[arg(long = "f", required = true, allow_hyphen_values = true)]
        fs: Vec<String>,
        #[arg(long = "b", required = true, allow_hyphen_values = true)]
        bs: Vec<String>,
        #[arg(long = "c", required = true, allow_hyphen_values = true)]
        cs: Vec<String>,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Tensor-sum equation test with P = Σ f_i(b_ix), Q = Σ f_i(c_iy).
    Skitovich {
        #[arg(long = "f", required = true, allow_hyphen_values = true)]
        fs: Vec<String>,
        #[arg(long = "b", required = true, allow_hyphen_values = true)]
        bs: Vec<String>,
        #[arg(long = "c", required = true, allow_hyphen_values = true)]
        cs: Vec<String>,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// N-fold rotation-mean residual on R² (exact for N in {1,2,4}, numeric otherwise).
    Knw {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "f-of-z", value_parser = ["zero", "f-of-z"])]
        rhs: String,
    },
    /// q(tau_y)f = 0 over exact sphere points.
    Sphere {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true, help = "comma-separated coefficients a0,a1,... of q(z)")]
        q: String,
        #[arg(long = "y", required = true, allow_hyphen_values = true)]
        ys: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        delta_sq: String,
        #[arg(long)]
        density_fill: Option<f64>,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Exact kernel of the power matrix of the given nodes.
    Vandermonde {
        #[arg(long, allow_hyphen_values = true, help = "comma-separated scalar expressions")]
        rhos: String,
    },
    /// Sphere-difference decomposition, dense generators, fill-ratio diagnostic.
    Geometry {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        box_half_width: f64,
        #[arg(long, default_value_t = 50)]
        coeff_bound: u32,
    },
    /// Float-grid residual of an equation for parsed functions.
    NumericResidual {
        #[arg(long, value_parser = ["frechet", "skitovich"])]
        equation: String,
        #[arg(long = "f", required = true, allow_hyphen_values = true)]
        fs: Vec<String>,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long = "b", allow_hyphen_values = true)]
        bs: Vec<String>,
        #[arg(long = "c", allow_hyphen_values = true)]
        cs: Vec<String>,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 21)]
        grid_n: usize,
        #[arg(long, default_value_t = 2.0)]
        grid_half_width: f64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Monte Carlo run: linear forms, independence test, product-identity
    /// residual, quadratic-log-fit diagnostic.
    GhuryeOlkin {
        #[arg(long, value_parser = ["gaussian", "uniform", "laplace"])]
        family: String,
        #[arg(long, default_value_t = 100000)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long = "b", allow_hyphen_values = true)]
        bs: Vec<String>,
        #[arg(long = "c", allow_hyphen_values = true)]
        cs: Vec<String>,
    },
    /// Periodic one-dimensional exhibit: shifts annihilate, no polynomial fits.
    CounterexampleD1 {
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
}

enum Fail {
    Parse(ParseError),
    Lib(expoly::Error),
    Usage(String),
}

impl From<ParseError> for Fail {
    fn from(e: ParseError) -> Self {
        Fail::Parse(e)
    }
}

impl From<expoly::Error> for Fail {
    fn from(e: expoly::Error) -> Self {
        Fail::Lib(e)
    }
}

fn exit_code(f: &Fail) -> i32 {
    match f {
        Fail::Parse(_) => 3,
        Fail::Lib(expoly::Error::HypothesisFailure(_)) => 2,
        Fail::Lib(expoly::Error::SoundnessViolation { .. }) => 4,
        _ => 1,
    }
}

fn fail_value(f: &Fail) -> Value {
    match f {
        Fail::Parse(e) => json!({"kind": "parse", "position": e.pos, "message": e.message}),
        Fail::Lib(expoly::Error::HypothesisFailure(report)) => {
            json!({"kind": "hypothesis", "report": report, "message": report.to_string()})
        }
        Fail::Lib(expoly::Error::SoundnessViolation { theorem, details }) => {
            json!({"kind": "soundness", "theorem": theorem, "message": details})
        }
        Fail::Lib(e) => json!({"kind": "library", "message": e.to_string()}),
        Fail::Usage(m) => json!({"kind": "usage", "message": m}),
    }
}

fn parse_rat(text: &str) -> Result<Rat, Fail> {
    let g = parse_scalar(text)?;
    if !g.is_real() {
        return Err(Fail::Usage(format!("expected a real rational, got {g}")));
    }
    Ok(g.re)
}

fn parse_matrix(text: &str, d: usize) -> Result<RationalMatrix, Fail> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != d {
        return Err(Fail::Usage(format!(
            "matrix needs {d} rows separated by ';', got {}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(d);
    for row in rows {
        let entries: Vec<&str> = row.split(',').collect();
        if entries.len() != d {
            return Err(Fail::Usage(format!(
                "matrix row needs {d} entries separated by ',', got {}",
                entries.len()
            )));
        }
        out.push(
            entries
                .iter()
                .map(|e| parse_rat(e))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(RationalMatrix::from_rows(out))
}

fn parse_vector(text: &str, d: usize) -> Result<Vec<Rat>, Fail> {
    let entries: Vec<&str> = text.split(',').collect();
    if entries.len() != d {
        return Err(Fail::Usage(format!(
            "vector needs {d} entries, got {}",
            entries.len()
        )));
    }
    entries.iter().map(|e| parse_rat(e)).collect()
}

fn parse_fs(fs: &[String], d: usize) -> Result<Vec<ExpPolynomial>, Fail> {
    fs.iter()
        .map(|t| parse_exppoly(t, d).map_err(Fail::from))
        .collect()
}

fn parse_mats(ms: &[String], d: usize) -> Result<Vec<RationalMatrix>, Fail> {
    ms.iter().map(|t| parse_matrix(t, d)).collect()
}

fn parse_q(text: &str) -> Result<UnivariatePoly, Fail> {
    let coeffs = text
        .split(',')
        .map(parse_scalar)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UnivariatePoly::new(coeffs))
}

fn verdict_value<D: serde::Serialize>(v: &theorems::Verdict<D>) -> (Value, Value) {
    (
        json!({"equation_holds": v.equation_holds, "conclusion_holds": v.conclusion_holds}),
        serde_json::to_value(&v.details).expect("serializable details"),
    )
}

struct Report {
    subcommand: &'static str,
    inputs: Map<String, Value>,
    hypothesis: Value,
    verdict: Value,
    details: Value,
}

impl Report {
    fn new(subcommand: &'static str) -> Self {
        Report {
            subcommand,
            inputs: Map::new(),
            hypothesis: Value::Null,
            verdict: Value::Null,
            details: Value::Null,
        }
    }

    fn input(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    fn to_value(&self) -> Value {
        json!({
            "subcommand": self.subcommand,
            "inputs": Value::Object(self.inputs.clone()),
            "hypothesis": self.hypothesis,
            "verdict": self.verdict,
            "details": self.details,
        })
    }

    fn fail(&self, f: impl Into<Fail>) -> (Value, Fail) {
        (self.to_value(), f.into())
    }
}

fn exp_to_fn(f: ExpPolynomial) -> RealFn {
    Box::new(move |x: &[f64]| {
        let pt: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        f.evaluate(&pt)
    })
}

fn identity_f64(d: usize) -> Vec<Vec<f64>> {
    scalar_f64(d, 1.0)
}

fn scalar_f64(d: usize, s: f64) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { s } else { 0.0 }).collect())
        .collect()
}

fn run(cmd: Cmd) -> Result<Value, (Value, Fail)> {
    match cmd {
        Cmd::Frechet { f, m, d } => {
            let mut rep = Report::new("frechet")
                .input("f", f.clone())
                .input("m", m)
                .input("d", d as u64);
            let fe = parse_exppoly(&f, d).map_err(|e| rep.fail(e))?;
            let v = theorems::frechet_check(&fe, m).map_err(|e| rep.fail(e))?;
            let (verdict, details) = verdict_value(&v);
            rep.verdict = verdict;
            rep.details = details;
            Ok(rep.to_value())
        }
        Cmd::LeviCivita { f, d } => {
            let mut rep = Report::new("levi-civita")
                .input("f", f.clone())
                .input("d", d as u64);
            let fe = parse_exppoly(&f, d).map_err(|e| rep.fail(e))?;
            let analysis = theorems::levi_civita_analyze(&fe).map_err(|e| rep.fail(e))?;
            let pairs: Vec<Value> = analysis
                .witness
                .pairs
                .iter()
                .map(|(v, u)| json!({"v_of_x": v.to_string(), "a_of_y": u.to_string()}))
                .collect();
            rep.details = json!({
                "n": analysis.n,
                "pairs": pairs,
                "denominator": analysis.witness.denominator.to_string(),
            });
            Ok(rep.to_value())
        }
        Cmd::Delcp1 { fs, cs, ys, d } => {
            let rep = Report::new("delcp1")
                .input("f", fs.clone())
                .input("c", cs.clone())
                .input("y", ys.clone())
                .input("d", d as u64);
            let out: Result<Value, Fail> = (|| {
                let fs = parse_fs(&fs, d)?;
                let cs = parse_mats(&cs, d)?;
                let ys = ys
                    .iter()
                    .map(|y| parse_vector(y, d))
                    .collect::<Result<Vec<_>, _>>()?;
                let out = theorems::delcp1_check(&fs, &cs, &ys)?;
                Ok(serde_json::to_value(&out).expect("serializable"))
            })();
            let mut rep = rep;
            rep.details = out.map_err(|e| rep.fail(e))?;
            Ok(rep.to_value())
        }
        Cmd::Got {
            fs,
            bs,
            cs,
            r,
            s,
            d,
        } => {
            let mut rep = Report::new("got")
                .input("f", fs.clone())
                .input("b", bs.clone())
                .input("c", cs.clone())
                .input("r", r)
                .input("s", s)
                .input("d", d as u64);
            let out: Result<_, Fail> = (|| {
                let fs = parse_fs(&fs, d)?;
                let bs = parse_mats(&bs, d)?;
                let cs = parse_mats(&cs, d)?;
                Ok(theorems::got_classify(&fs, &bs, &cs, r, s)?)
            })();
            let v = out.map_err(|e| rep.fail(e))?;
            let (verdict, details) = verdict_value(&v);
            rep.hypothesis = json!({"condition": "inverse-difference", "passed": true});
            rep.verdict = verdict;
            rep.details = details;
            Ok(rep.to_value())
        }
        Cmd::Skitovich { fs, bs, cs, d } => {
            let mut rep = Report::new("skitovich")
                .input("f", fs.clone())
                .input("b", bs.clone())
                .input("c", cs.clone())
                .input("d", d as u64);
            let out: Result<_, Fail> = (|| {
                let fs = parse_fs(&fs, d)?;
                let bs = parse_mats(&bs, d)?;
                let cs = parse_mats(&cs, d)?;
                Ok(theorems::skitovich_symbolic_check(&fs, &bs, &cs)?)
            })();
            let v = out.map_err(|e| rep.fail(e))?;
            let (verdict, details) = verdict_value(&v);
            rep.hypothesis = json!({"condition": "inverse-difference", "passed": true});
            rep.verdict = verdict;
            rep.details = details;
            Ok(rep.to_value())
        }
        Cmd::Knw { f, n, rhs } => {
            let mut rep = Report::new("knw")
                .input("f", f.clone())
                .input("n", n)
                .input("rhs", rhs.clone());
            let rhs_mode = if rhs == "zero" {
                KnwRhs::Zero
            } else {
                KnwRhs::FOfZ
            };
            let fe = parse_exppoly(&f, 2).map_err(|e| rep.fail(e))?;
            if matches!(n, 1 | 2 | 4) {
                let residual =
                    theorems::knw_residual(&fe, n, rhs_mode).map_err(|e| rep.fail(e))?;
                rep.details = json!({
                    "mode": "exact",
                    "residual_zero": residual.is_zero(),
                    "residual": residual.inner().to_string(),
                });
            } else {
                let grid = Grid::default_grid(2);
                let func = exp_to_fn(fe);
                let r = numeric::knw_residual_numeric(&func, n, rhs_mode, &grid)
                    .map_err(|e| rep.fail(e))?;
                rep.details = json!({
                    "mode": "numeric",
                    "max_residual": r,
                    "tolerance": 1e-10,
                    "residual_zero": r <= 1e-10,
                });
            }
            Ok(rep.to_value())
        }
        Cmd::Sphere {
            f,
            q,
            ys,
            delta_sq,
            density_fill,
            d,
        } => {
            let mut rep = Report::new("sphere")
                .input("f", f.clone())
                .input("q", q.clone())
                .input("y", ys.clone())
                .input("delta_sq", delta_sq.clone())
                .input("d", d as u64);
            let out: Result<_, Fail> = (|| {
                let fe = parse_exppoly(&f, d)?;
                let qp = parse_q(&q)?;
                let ys = ys
                    .iter()
                    .map(|y| parse_vector(y, d))
                    .collect::<Result<Vec<_>, _>>()?;
                let radius_sq = parse_rat(&delta_sq)?;
                Ok(theorems::sphere_annihilator_check(
                    &fe,
                    &qp,
                    &ys,
                    &radius_sq,
                    density_fill,
                )?)
            })();
            let v = out.map_err(|e| rep.fail(e))?;
            let (verdict, details) = verdict_value(&v);
            rep.verdict = verdict;
            rep.details = details;
            Ok(rep.to_value())
        }
        Cmd::Vandermonde { rhos } => {
            let mut rep = Report::new("vandermonde").input("rhos", rhos.clone());
            let nodes: Result<Vec<GaussianRational>, Fail> = rhos
                .split(',')
                .map(|t| parse_scalar(t).map_err(Fail::from))
                .collect();
            let nodes = nodes.map_err(|e| rep.fail(e))?;
            let out = theorems::vandermonde_annihilation(&nodes);
            rep.details = json!({
                "kernel_dim": out.kernel_dim,
                "kernel_basis": out
                    .kernel_basis
                    .iter()
                    .map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            });
            Ok(rep.to_value())
        }
        Cmd::Geometry {
            d,
            delta,
            t,
            eps,
            box_half_width,
            coeff_bound,
        } => {
            let mut rep = Report::new("geometry")
                .input("d", d as u64)
                .input("delta", delta)
                .input("t", t as u64)
                .input("eps", eps)
                .input("box_half_width", box_half_width)
                .input("coeff_bound", coeff_bound);
            let out: Result<Value, Fail> = (|| {
                let gens = geometry::kronecker_generators(d, delta, t)?;
                let pts: Vec<Vec<f64>> = gens.iter().map(|p| p.coords.clone()).collect();
                let fill = geometry::density_diagnostic(&pts, box_half_width, eps, coeff_bound)?;
                let probe: Vec<f64> = (0..d).map(|i| if i == 0 { delta } else { 0.0 }).collect();
                let (p, q) = geometry::sphere_difference_decompose(&probe, delta)?;
                let residual: f64 = p
                    .coords
                    .iter()
                    .zip(&q.coords)
                    .zip(&probe)
                    .map(|((a, b), c)| (b - a - c).abs())
                    .fold(0.0, f64::max);
                Ok(json!({
                    "generators": pts,
                    "fill_ratio": fill,
                    "dense_evidence": fill >= theorems::DENSITY_THRESHOLD,
                    "decompose_probe_residual": residual,
                }))
            })();
            rep.details = out.map_err(|e| rep.fail(e))?;
            Ok(rep.to_value())
        }
        Cmd::NumericResidual {
            equation,
            fs,
            m,
            bs,
            cs,
            d,
            grid_n,
            grid_half_width,
            tolerance,
        } => {
            let mut rep = Report::new("numeric-residual")
                .input("equation", equation.clone())
                .input("f", fs.clone())
                .input("m", m)
                .input("b", bs.clone())
                .input("c", cs.clone())
                .input("d", d as u64)
                .input("grid_n", grid_n as u64)
                .input("grid_half_width", grid_half_width)
                .input("tolerance", tolerance);
            let out: Result<Value, Fail> = (|| {
                let grid = Grid::uniform(d, -grid_half_width, grid_half_width, grid_n, tolerance)?;
                let residual = match equation.as_str() {
                    "frechet" => {
                        let fe = parse_exppoly(&fs[0], d)?;
                        let mut fns: std::collections::BTreeMap<String, RealFn> =
                            std::collections::BTreeMap::new();
                        let mut summands = Vec::new();
                        for i in 1..=m {
                            let sign = if (m - i) % 2 == 0 { 1.0 } else { -1.0 };
                            let coeff =
                                sign * expoly::operators::binomial(m as i64, i as i64) as f64;
                            let fi = fe.clone();
                            fns.insert(
                                format!("s{i}"),
                                Box::new(move |x: &[f64]| {
                                    let pt: Vec<Complex64> =
                                        x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                                    fi.evaluate(&pt) * coeff
                                }) as RealFn,
                            );
                            summands.push(numeric::Summand {
                                fn_id: format!("s{i}"),
                                b: identity_f64(d),
                                c: scalar_f64(d, i as f64),
                            });
                        }
                        let rhs_sign = if m % 2 == 0 { -1.0 } else { 1.0 };
                        let fr = fe.clone();
                        fns.insert(
                            "rhs".into(),
                            Box::new(move |x: &[f64]| {
                                let pt: Vec<Complex64> =
                                    x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                                fr.evaluate(&pt) * rhs_sign
                            }) as RealFn,
                        );
                        let spec = numeric::EquationSpec {
                            summands,
                            rhs: numeric::Rhs::FOfZ {
                                fn_id: "rhs".into(),
                            },
                        };
                        numeric::residual_max(&spec, &fns, &grid, &grid)?
                    }
                    _ => {
                        let fes = parse_fs(&fs, d)?;
                        let bms = parse_mats(&bs, d)?;
                        let cms = parse_mats(&cs, d)?;
                        if fes.len() != bms.len() || fes.len() != cms.len() {
                            return Err(Fail::Usage("need one --b and one --c per --f".into()));
                        }
                        let mut fns: std::collections::BTreeMap<String, RealFn> =
                            std::collections::BTreeMap::new();
                        let mut summands = Vec::new();
                        for (i, fe) in fes.iter().enumerate() {
                            fns.insert(format!("f{i}"), exp_to_fn(fe.clone()));
                            summands.push(numeric::Summand {
                                fn_id: format!("f{i}"),
                                b: bms[i].to_f64(),
                                c: cms[i].to_f64(),
                            });
                        }
                        let spec = numeric::EquationSpec {
                            summands,
                            rhs: numeric::Rhs::TensorSum,
                        };
                        numeric::residual_max(&spec, &fns, &grid, &grid)?
                    }
                };
                Ok(json!({
                    "max_residual": residual,
                    "tolerance": tolerance,
                    "within_tolerance": residual <= tolerance,
                }))
            })();
            rep.details = out.map_err(|e| rep.fail(e))?;
            Ok(rep.to_value())
        }
        Cmd::GhuryeOlkin {
            family,
            n,
            seed,
            d,
            bs,
            cs,
        } => {
            let mut rep = Report::new("ghurye-olkin")
                .input("family", family.clone())
                .input("n", n as u64)
                .input("seed", seed)
                .input("d", d as u64)
                .input("b", bs.clone())
                .input("c", cs.clone());
            let out: Result<Value, Fail> = (|| {
                let (bms, cms) = if bs.is_empty() && cs.is_empty() {
                    (
                        vec![RationalMatrix::identity(d), RationalMatrix::identity(d)],
                        vec![
                            RationalMatrix::identity(d),
                            RationalMatrix::scalar_int(d, -1),
                        ],
                    )
                } else {
                    (parse_mats(&bs, d)?, parse_mats(&cs, d)?)
                };
                if bms.len() != cms.len() {
                    return Err(Fail::Usage("need equally many --b and --c".into()));
                }
                let m = bms.len();
                let specs: Vec<RandomVectorSpec> = (0..m)
                    .map(|i| {
                        let s = seed.wrapping_add(i as u64);
                        match family.as_str() {
                            "gaussian" => RandomVectorSpec::gaussian_std(d, s),
                            "uniform" => RandomVectorSpec::uniform_symmetric(d, 1.0, s),
                            _ => RandomVectorSpec::laplace_std(d, s),
                        }
                    })
                    .collect();
                let (l1, l2) = probability::simulate_linear_forms(&specs, &bms, &cms, n)?;
                let ind = probability::independence_test(&l1, &l2)?;
                let pts: Vec<Vec<f64>> = (0..5)
                    .map(|i| (0..d).map(|_| -1.0 + 0.5 * i as f64).collect())
                    .collect();
                let sres = probability::skitovich_residual(&specs, &bms, &cms, &pts, &pts, n)?;
                let cf_pts: Vec<Vec<f64>> = (0..9)
                    .map(|i| (0..d).map(|_| -1.0 + 0.25 * i as f64).collect())
                    .collect();
                let cf = probability::empirical_cf(&l1, &cf_pts)?;
                let fit = probability::marcinkiewicz_fit(&cf, 6)?;
                let noise = 5.0 / (n as f64).sqrt();
                let gaussian_consistent =
                    ind.p_value > 0.01 && sres <= noise && fit.quadratic_excess <= noise;
                let dependence_flag = ind.statistic >= 0.02 || ind.p_value <= 0.005;
                Ok(json!({
                    "independence": {"statistic": ind.statistic, "p_value": ind.p_value},
                    "skitovich_residual": sres,
                    "quadratic_excess": fit.quadratic_excess,
                    "noise_budget": noise,
                    "gaussian_consistent": gaussian_consistent,
                    "dependence_flag": dependence_flag,
                    "non_gaussian_flag": !gaussian_consistent,
                }))
            })();
            rep.details = out.map_err(|e| rep.fail(e))?;
            Ok(rep.to_value())
        }
        Cmd::CounterexampleD1 { delta } => {
            let mut rep = Report::new("counterexample-d1").input("delta", delta);
            let e = numeric::d1_counterexample(delta);
            rep.details = json!({
                "residual_plus": e.residual_plus,
                "residual_minus": e.residual_minus,
                "poly_fit_error": e.poly_fit_error,
                "is_counterexample": e.is_counterexample,
            });
            Ok(rep.to_value())
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    match run(cli.cmd) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            std::process::exit(0);
        }
        Err((partial, fail)) => {
            let mut report = partial;
            report["error"] = fail_value(&fail);
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            std::process::exit(exit_code(&fail));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        let parse = Fail::Parse(ParseError {
            pos: 0,
            message: "x".into(),
        });
        assert_eq!(exit_code(&parse), 3);
        let hyp = Fail::Lib(expoly::Error::HypothesisFailure(
            expoly::theorems::check_c_hypotheses(&[
                RationalMatrix::identity(1),
                RationalMatrix::identity(1),
            ]),
        ));
        assert_eq!(exit_code(&hyp), 2);
        let sound = Fail::Lib(expoly::Error::SoundnessViolation {
            theorem: "t".into(),
            details: "d".into(),
        });
        assert_eq!(exit_code(&sound), 4);
        let usage = Fail::Usage("u".into());
        assert_eq!(exit_code(&usage), 1);
        let lib = Fail::Lib(expoly::Error::DimensionMismatch {
            expected: 1,
            got: 2,
        });
        assert_eq!(exit_code(&lib), 1);
    }

    #[test]
    fn fail_values_carry_kind() {
        let sound = Fail::Lib(expoly::Error::SoundnessViolation {
            theorem: "t".into(),
            details: "d".into(),
        });
        assert_eq!(fail_value(&sound)["kind"], "soundness");
    }
}
