//! `hermcert` command dispatch and `hermcert-report/1` JSON reports.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use hermcert::bergman::{diagonal_asymptotics, gram_matrix, reproducing_error, sphere_probes, QuadPlan, WeightSpec};
use hermcert::blowup::{blowup_chain, dehomogenize, parse_chain, MixedHermPoly};
use hermcert::certify::{
    modulus_ratio_estimate, modulus_ratio_exact, qsn_decide_p1, quillen_minimal_exponent, sgcs_check, CertificateReport,
    SamplingPlan,
};
use hermcert::curves::{base_divisor_factor, jpp_scan, pullback, JetResult, P1Point, RationalCurve};
use hermcert::decomp::{distinguished_basis, EIGEN_CUTOFF};
use hermcert::expr::{parse_form, parse_point, parse_section, print_form};
use hermcert::scalar::rat_string;
use hermcert::spectra::{exact_squares, psd_exact, ExactSquares};
use hermcert::{Error, GaussRat, HermitianForm, HoloSection, MultiIndex};

pub const SCHEMA_VERSION: &str = "hermcert-report/1";

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "hermcert", version, about = "Certify sums and quotients of squared norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Form expression, or a path to a file containing one.
    #[arg(long)]
    form: Option<String>,
    /// JSON list of [alpha, beta, "re", "im"] coefficient entries.
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long, default_value_t = 10)]
    mmax: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Rational curve "h0;h1;..." in x, y; several curves separated by '|'.
    #[arg(long)]
    curve: Option<String>,
    /// Monomial substitution chain "x1=y1*y2,x2=y2 | y1=t1,y2=t1*t2".
    #[arg(long)]
    chain: Option<String>,
    #[arg(long)]
    json_out: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Weight form R (defaults to ‖z‖²).
    #[arg(long)]
    weight: Option<String>,
    /// Affine chart index for `blowup` (defaults to the last variable).
    #[arg(long)]
    chart: Option<usize>,
    /// Exact points "a,b,...;c,d,..." (homogeneous coordinates).
    #[arg(long)]
    point: Option<String>,
    /// Exact affine probe points for `blowup`.
    #[arg(long)]
    probe: Option<String>,
    /// Comma-separated exponents for `bergman`.
    #[arg(long, default_value = "8,12,16,20")]
    m_list: String,
    /// Report timing_ms as 0 for byte-reproducible output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact signature and congruence diagonalization.
    Diagonalize(Common),
    /// Least m with R^m ⊗ P a sum of squared norms.
    CertifyQuillen(Common),
    /// Sampled sup of modulus/|P|.
    RatioEstimate(Common),
    /// Exact decision pipeline on ℙ¹.
    #[command(name = "qsn-p1")]
    QsnP1(Common),
    /// Pull a form back along a rational curve.
    Pullback(Common),
    /// Jet checks along rational curves.
    JetScan(Common),
    /// Monomial blowup chain in an affine chart.
    Blowup(Common),
    /// Bergman kernel diagonal asymptotics on ℙ¹.
    Bergman(Common),
    /// Exact G-curvature matrix at points.
    Gcurv(Common),
}

#[derive(Serialize)]
struct Diagnostics {
    sup_ratio: Option<f64>,
    min_eigenvalue_trace: Vec<Option<f64>>,
    quadrature_error: Option<f64>,
}

#[derive(Serialize)]
struct Witness {
    #[serde(rename = "type")]
    kind: String,
    data: Value,
}

#[derive(Serialize)]
struct Report {
    version: &'static str,
    command: String,
    input_echo: BTreeMap<String, Value>,
    verdict: String,
    minimal_exponent: Option<u32>,
    signature: Option<[usize; 2]>,
    witnesses: Vec<Witness>,
    diagnostics: Diagnostics,
    timing_ms: u64,
}

impl Report {
    fn new(command: &str, common: &Common) -> Self {
        let mut echo = BTreeMap::new();
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                echo.insert(k.to_string(), v);
            }
        };
        put("form", common.form.clone().map(Value::from));
        put("matrix", common.matrix.clone().map(Value::from));
        put("curve", common.curve.clone().map(Value::from));
        put("chain", common.chain.clone().map(Value::from));
        put("weight", common.weight.clone().map(Value::from));
        put("point", common.point.clone().map(Value::from));
        put("probe", common.probe.clone().map(Value::from));
        put("chart", common.chart.map(Value::from));
        put("tol", common.tol.map(Value::from));
        put("mmax", Some(common.mmax.into()));
        put("seed", Some(common.seed.into()));
        put("samples", Some(common.samples.into()));
        if command == "bergman" {
            put("m_list", Some(common.m_list.clone().into()));
        }
        Report {
            version: SCHEMA_VERSION,
            command: command.to_string(),
            input_echo: echo,
            verdict: String::new(),
            minimal_exponent: None,
            signature: None,
            witnesses: Vec::new(),
            diagnostics: Diagnostics { sup_ratio: None, min_eigenvalue_trace: Vec::new(), quadrature_error: None },
            timing_ms: 0,
        }
    }

    fn witness(&mut self, kind: &str, data: Value) {
        self.witnesses.push(Witness { kind: kind.to_string(), data });
    }
}

/// Exit code for a verdict string.
pub fn exit_code(verdict: &str) -> i32 {
    match verdict {
        "certified-qsn" | "pass" | "psd" | "computed" | "no-failure-found" => 0,
        "certified-not-qsn" | "fail" | "not-psd" | "jet-failure" => 2,
        _ => 3,
    }
}

type CliResult<T> = std::result::Result<T, String>;
type Handler = fn(&Common, &mut Report) -> CliResult<()>;

fn err(e: Error) -> String {
    e.to_string()
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn gr_json(c: &GaussRat) -> Value {
    json!({"re": rat_string(&c.re), "im": rat_string(&c.im)})
}

fn point_json(p: &[GaussRat]) -> Value {
    Value::Array(p.iter().map(gr_json).collect())
}

fn cpoint_json(p: &[Complex64]) -> Value {
    Value::Array(p.iter().map(|z| json!({"re": finite(z.re), "im": finite(z.im)})).collect())
}

fn form_entries_json(p: &HermitianForm) -> Value {
    Value::Array(
        p.entries()
            .iter()
            .map(|((a, b), c)| json!([a.exps(), b.exps(), rat_string(&c.re), rat_string(&c.im)]))
            .collect(),
    )
}

fn mixed_json(q: &MixedHermPoly) -> Value {
    Value::Array(
        q.entries()
            .iter()
            .map(|((a, b), c)| json!([a.exps(), b.exps(), rat_string(&c.re), rat_string(&c.im)]))
            .collect(),
    )
}

fn squares_json(sq: &ExactSquares) -> Value {
    Value::Array(
        sq.terms
            .iter()
            .map(|(w, s)| json!({"weight": rat_string(w), "section": s.to_expr_string()}))
            .collect(),
    )
}

fn jet_json(j: &JetResult) -> Value {
    let block: Vec<Value> = j.lowest_block.iter().map(|((a, b), c)| json!({"j": a, "k": b, "c": gr_json(c)})).collect();
    json!({"pass": j.pass, "order": j.order, "lowest_block": block})
}

fn p1_json(p: &P1Point) -> Value {
    json!({"text": p.to_string(), "coords": point_json(&p.coords())})
}

fn parse_rational(text: &str) -> CliResult<BigRational> {
    let t = text.trim();
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| format!("bad rational '{t}'"))?;
    let d: BigInt = d.trim().parse().map_err(|_| format!("bad rational '{t}'"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in '{t}'"));
    }
    Ok(BigRational::new(n, d))
}

fn load_form(common: &Common) -> CliResult<HermitianForm> {
    match (&common.form, &common.matrix) {
        (Some(f), None) => {
            let text = if std::path::Path::new(f).is_file() {
                std::fs::read_to_string(f).map_err(|e| format!("cannot read {f}: {e}"))?
            } else {
                f.clone()
            };
            parse_form(text.trim()).map_err(err)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
            form_from_matrix_json(&text)
        }
        (Some(_), Some(_)) => Err("give either --form or --matrix, not both".into()),
        (None, None) => Err("missing --form or --matrix".into()),
    }
}

/// `[[alpha, beta, "re", "im"], ...]` with exponent arrays.
pub fn form_from_matrix_json(text: &str) -> CliResult<HermitianForm> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("matrix file: {e}"))?;
    let rows = v.as_array().ok_or("matrix file must be a JSON list")?;
    let mut entries = Vec::new();
    let mut shape: Option<(usize, u32)> = None;
    for (k, row) in rows.iter().enumerate() {
        let r = row.as_array().filter(|r| r.len() == 4).ok_or(format!("entry {k}: expected [alpha, beta, re, im]"))?;
        let idx = |x: &Value| -> CliResult<MultiIndex> {
            let a = x.as_array().ok_or(format!("entry {k}: exponents must be a list"))?;
            let e = a
                .iter()
                .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()).ok_or(format!("entry {k}: bad exponent")))
                .collect::<CliResult<Vec<u32>>>()?;
            Ok(MultiIndex::new(e))
        };
        let s = |x: &Value| -> CliResult<BigRational> {
            match x {
                Value::String(s) => parse_rational(s),
                Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
                _ => Err(format!("entry {k}: coefficients must be \"num/den\" strings")),
            }
        };
        let (a, b) = (idx(&r[0])?, idx(&r[1])?);
        if a.is_empty() {
            return Err(format!("entry {k}: empty exponent list"));
        }
        let sh = (a.len() - 1, a.degree());
        if *shape.get_or_insert(sh) != sh {
            return Err(format!("entry {k}: inconsistent shape"));
        }
        entries.push((a, b, GaussRat::new(s(&r[2])?, s(&r[3])?)));
    }
    let (n, d) = shape.ok_or("matrix file has no entries")?;
    HermitianForm::from_entries(n, d, entries).map_err(err)
}

fn load_weight(common: &Common, n: usize) -> CliResult<HermitianForm> {
    match &common.weight {
        Some(w) => parse_form(w).map_err(err),
        None => hermcert::norm_power(n, 1).map_err(err),
    }
}

fn parse_points(text: &str) -> CliResult<Vec<Vec<GaussRat>>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_point(s).map_err(err)).collect()
}

fn parse_curves(text: &str) -> CliResult<Vec<RationalCurve>> {
    text.split('|')
        .map(|c| {
            let comps = c
                .split(';')
                .map(|h| parse_section(h.trim(), &["x", "y"]))
                .collect::<hermcert::Result<Vec<HoloSection>>>()
                .map_err(err)?;
            RationalCurve::new(comps).map_err(err)
        })
        .collect()
}

fn p1_points(common: &Common) -> CliResult<Vec<P1Point>> {
    match &common.point {
        None => Ok(Vec::new()),
        Some(t) => parse_points(t)?
            .into_iter()
            .map(|p| {
                if p.len() != 2 {
                    return Err("centers on ℙ¹ need two coordinates".to_string());
                }
                P1Point::new(p[0].clone(), p[1].clone()).map_err(err)
            })
            .collect(),
    }
}

fn certificate_into(rep: &mut Report, c: &CertificateReport) {
    rep.verdict = c.verdict.as_str().to_string();
    rep.minimal_exponent = c.minimal_exponent;
    rep.diagnostics.min_eigenvalue_trace = c.trace.iter().map(|p| finite(p.min_eigenvalue)).collect();
    rep.diagnostics.sup_ratio = c.sup_ratio;
    if let (Some(w), Some(m)) = (&c.witness, c.minimal_exponent) {
        rep.witness("sos", json!({"m": m, "terms": squares_json(w)}));
    }
    if let Some(d) = &c.divisor {
        rep.witness("base-divisor", json!({"s_D": d.to_expr_string()}));
    }
    if let Some(ob) = &c.obstruction {
        let kind = match ob.kind {
            hermcert::certify::ObstructionKind::ExactZero => "exact-zero",
            hermcert::certify::ObstructionKind::NegativeValue => "negative-value",
        };
        rep.witness(
            "jet-failure",
            json!({"kind": kind, "point": p1_json(&ob.point), "residual_value": rat_string(&ob.value), "jet": jet_json(&ob.jet)}),
        );
    }
}

fn cmd_diagonalize(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = load_form(c)?;
    let sq = exact_squares(&p);
    let (k, l) = sq.signature();
    rep.signature = Some([k, l]);
    rep.witness("exact-squares", json!({"terms": squares_json(&sq), "printed": print_form(&p)}));
    if !p.is_zero() {
        let b = distinguished_basis(&p).map_err(err)?;
        let eig: Vec<Value> = b.f.iter().chain(&b.g).map(|s| cpoint_json(&s.coeffs)).collect();
        rep.witness(
            "distinguished-basis",
            json!({"k": b.k, "l": b.l, "eigen_cutoff_rel_frobenius": EIGEN_CUTOFF, "sections": eig}),
        );
    }
    rep.verdict = if l == 0 { "psd" } else { "not-psd" }.into();
    Ok(())
}

fn cmd_certify_quillen(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = load_form(c)?;
    let r = load_weight(c, p.n())?;
    rep.signature = Some(exact_squares(&p).signature().into());
    let cert = quillen_minimal_exponent(&p, &r, c.mmax).map_err(err)?;
    certificate_into(rep, &cert);
    Ok(())
}

fn cmd_ratio(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = load_form(c)?;
    let sq = exact_squares(&p);
    rep.signature = Some(sq.signature().into());
    let basis = distinguished_basis(&p).map_err(err)?;
    let exact_pts = c.point.as_deref().map(parse_points).transpose()?.unwrap_or_default();
    let float_pts: Vec<Vec<Complex64>> =
        exact_pts.iter().map(|v| v.iter().map(GaussRat::to_complex_lossy).collect()).collect();
    let plan = SamplingPlan::random(c.samples, c.seed).with_points(float_pts);
    match modulus_ratio_estimate(&p, &basis, &plan) {
        Ok(est) => {
            rep.diagnostics.sup_ratio = finite(est.sup);
            rep.witness(
                "ratio-sup",
                json!({"arg_max": cpoint_json(&est.arg_max), "evaluated": est.evaluated, "filtered": est.filtered}),
            );
        }
        Err(Error::DegeneratePlan) => rep.witness("degenerate-plan", json!({})),
        Err(e) => return Err(err(e)),
    }
    for v in &exact_pts {
        let r = modulus_ratio_exact(&p, v).map_err(err)?;
        rep.witness("exact-ratio", json!({"point": point_json(v), "ratio": r.as_ref().map(rat_string)}));
    }
    rep.verdict = match (c.tol, rep.diagnostics.sup_ratio) {
        (Some(bound), Some(s)) if s > bound => "fail",
        (Some(_), Some(_)) => "pass",
        _ => "inconclusive",
    }
    .into();
    Ok(())
}

fn cmd_qsn(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = load_form(c)?;
    rep.signature = Some(exact_squares(&p).signature().into());
    let cert = qsn_decide_p1(&p, c.mmax, 64, c.seed).map_err(err)?;
    certificate_into(rep, &cert);
    Ok(())
}

fn cmd_pullback(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = load_form(c)?;
    let curves = parse_curves(c.curve.as_deref().ok_or("missing --curve")?)?;
    for (i, curve) in curves.iter().enumerate() {
        let pb = pullback(&p, curve).map_err(err)?;
        let mut data = json!({"curve": i, "degree": pb.degree(), "entries": form_entries_json(&pb)});
        if !pb.is_zero() {
            let dv = base_divisor_factor(&pb).map_err(err)?;
            data["s_D"] = dv.s_d.to_expr_string().into();
            data["residual"] = form_entries_json(&dv.residual);
        }
        if i == 0 {
            rep.signature = Some(exact_squares(&pb).signature().into());
        }
        rep.witness("pullback", data);
    }
    rep.verdict = "computed".into();
    Ok(())
}

fn cmd_jet_scan(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = load_form(c)?;
    rep.signature = Some(exact_squares(&p).signature().into());
    let curves = parse_curves(c.curve.as_deref().ok_or("missing --curve")?)?;
    let centers = p1_points(c)?;
    let scan = jpp_scan(&p, &curves, &centers).map_err(err)?;
    for s in &scan.scans {
        let checks: Vec<Value> = s
            .checks
            .iter()
            .map(|ck| json!({"center": p1_json(&ck.center), "pullback": jet_json(&ck.pullback), "residual": jet_json(&ck.residual)}))
            .collect();
        rep.witness("jet-scan", json!({"curve": s.curve_index, "s_D": s.divisor.s_d.to_expr_string(), "checks": checks}));
    }
    rep.verdict = if scan.no_failure_found() { "no-failure-found" } else { "jet-failure" }.into();
    Ok(())
}

fn cmd_blowup(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = load_form(c)?;
    rep.signature = Some(exact_squares(&p).signature().into());
    let chart = c.chart.unwrap_or(p.n());
    let q = dehomogenize(&p, chart).map_err(err)?;
    let steps = parse_chain(c.chain.as_deref().unwrap_or("")).map_err(err)?;
    let probes = c.probe.as_deref().map(parse_points).transpose()?.unwrap_or_default();
    let trace = blowup_chain(&q, &steps, &probes).map_err(err)?;
    rep.witness("dehomogenized", json!({"chart": chart, "degree": p.degree(), "entries": mixed_json(&q)}));
    for (i, s) in trace.steps.iter().enumerate() {
        rep.witness(
            "blowup-step",
            json!({
                "step": i + 1,
                "substitution": s.map.to_expr_string("x", "y"),
                "gamma": s.gamma.exps(),
                "cumulative_gamma": s.cumulative.exps(),
                "substituted": mixed_json(&s.substituted),
                "reduced": mixed_json(&s.reduced),
            }),
        );
    }
    for pv in &trace.probes {
        rep.witness(
            "probe",
            json!({"point": point_json(&pv.point), "value": rat_string(&pv.value), "zero": pv.value.is_zero()}),
        );
    }
    rep.verdict = "computed".into();
    Ok(())
}

fn cmd_bergman(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = match (&c.form, &c.matrix) {
        (None, None) => HermitianForm::unit(1),
        _ => load_form(c)?,
    };
    let r = load_weight(c, 1)?;
    let m_list = c
        .m_list
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| format!("bad --m-list entry '{s}'")))
        .collect::<CliResult<Vec<u32>>>()?;
    let plan = QuadPlan::default();
    let probes = sphere_probes(20);
    let table = diagonal_asymptotics(&r, &p, &m_list, &probes, &plan).map_err(err)?;
    let sg = sgcs_check(&r, 32, c.seed).map_err(err)?;
    // reproducing check on the first m with the first monomial
    let spec = WeightSpec::new(&r, &p, m_list[0]).map_err(err)?;
    let k = gram_matrix(&spec, &plan).map_err(err)?;
    let deg = spec.section_degree();
    let s = HoloSection::monomial(MultiIndex::new(vec![deg / 2, deg - deg / 2]), GaussRat::one());
    let rep_err = reproducing_error(&k, &spec, &s, &plan, &probes).map_err(err)?;
    let rows: Vec<Value> = table
        .m_list
        .iter()
        .zip(&table.ratios)
        .map(|(m, row)| json!({"m": m, "rho": row.iter().map(|x| finite(*x)).collect::<Vec<_>>()}))
        .collect();
    rep.witness(
        "bergman-asymptotics",
        json!({
            "rows": rows,
            "b1": table.b1.iter().map(|x| finite(*x)).collect::<Vec<_>>(),
            "b1_mean": finite(table.b1_mean()),
            "c_estimate": finite(table.c_estimate),
            "reproducing_error": finite(rep_err),
            "orthonormality_residual": finite(k.orthonormality_residual),
            "sgcs": {"s1": sg.s1.pass, "s2": sg.s2.pass, "s3": sg.s3.pass},
        }),
    );
    rep.diagnostics.quadrature_error = finite(table.quadrature_error.max(k.quadrature_error_estimate));
    let tol = c.tol.unwrap_or(1e-7);
    rep.verdict = if rep_err <= tol && table.c_estimate.is_finite() { "pass" } else { "fail" }.into();
    Ok(())
}

fn cmd_gcurv(c: &Common, rep: &mut Report) -> CliResult<()> {
    let p = load_form(c)?;
    let pts = parse_points(c.point.as_deref().ok_or("missing --point")?)?;
    let g = p.gcurvature(&pts).map_err(err)?;
    // the matrix as a degree-1 form on ℙ^{N-1} for the exact PSD test
    let n = pts.len();
    let mut entries = Vec::new();
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            entries.push((MultiIndex::unit(n, i), MultiIndex::unit(n, j), v.clone()));
        }
    }
    let as_form = HermitianForm::from_entries(n - 1, 1, entries).map_err(err)?;
    let sq = exact_squares(&as_form);
    rep.signature = Some(sq.signature().into());
    let rows: Vec<Value> = g.iter().map(|r| Value::Array(r.iter().map(gr_json).collect())).collect();
    rep.witness("gcurvature", json!({"points": pts.iter().map(|p| point_json(p)).collect::<Vec<_>>(), "matrix": rows}));
    rep.verdict = if psd_exact(&as_form) { "psd" } else { "not-psd" }.into();
    Ok(())
}

/// Run one invocation; `args` excludes the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("hermcert".to_string()).chain(args.into_iter().map(Into::into)).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let start = Instant::now();
    let (name, common, f): (&str, &Common, Handler) = match &cli.command {
        Command::Diagonalize(c) => ("diagonalize", c, cmd_diagonalize),
        Command::CertifyQuillen(c) => ("certify-quillen", c, cmd_certify_quillen),
        Command::RatioEstimate(c) => ("ratio-estimate", c, cmd_ratio),
        Command::QsnP1(c) => ("qsn-p1", c, cmd_qsn),
        Command::Pullback(c) => ("pullback", c, cmd_pullback),
        Command::JetScan(c) => ("jet-scan", c, cmd_jet_scan),
        Command::Blowup(c) => ("blowup", c, cmd_blowup),
        Command::Bergman(c) => ("bergman", c, cmd_bergman),
        Command::Gcurv(c) => ("gcurv", c, cmd_gcurv),
    };
    let mut rep = Report::new(name, common);
    if let Err(msg) = f(common, &mut rep) {
        return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") };
    }
    rep.timing_ms = if common.no_timing { 0 } else { start.elapsed().as_millis() as u64 };
    let text = serde_json::to_string_pretty(&rep).expect("report serializes") + "\n";
    if let Some(path) = &common.json_out {
        if let Err(e) = std::fs::write(path, &text) {
            return Outcome { code: 1, stdout: String::new(), stderr: format!("error: cannot write {path}: {e}\n") };
        }
    }
    Outcome { code: exit_code(&rep.verdict), stdout: text, stderr: String::new() }
}
