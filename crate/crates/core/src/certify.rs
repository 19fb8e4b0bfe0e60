//! Quotient-of-squared-norms certification: minimal Quillen exponents,
//! modulus-ratio estimates, strong-G-curvature checks and the exact
//! decision pipeline on `ℙ¹`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::binary::UniPoly;
use crate::blowup::{dehomogenize as affine_chart, MixedHermPoly};
use crate::curves::{base_divisor_factor, jet_check, local_expansion, JetResult, P1Point};
use crate::decomp::{modulus, DistinguishedBasis};
use crate::error::{Error, Result};
use crate::form::{norm_power, HermitianForm};
use crate::optim::nelder_mead;
use crate::scalar::{rat_approx, GaussRat};
use crate::section::HoloSection;
use crate::spectra::{exact_squares, jacobi_eigh, min_eigenvalue, psd_exact, ExactSquares, HermMatrix};

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedQsn,
    CertifiedNotQsn,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedQsn => "certified-qsn",
            Verdict::CertifiedNotQsn => "certified-not-qsn",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One row of the exponent scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentProbe {
    pub m: u32,
    pub psd: bool,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructionKind {
    /// The residual vanishes exactly at the point.
    ExactZero,
    /// The residual takes a negative value at the point.
    NegativeValue,
}

/// An exactly checkable reason why `P` is not a quotient of squared norms.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub point: P1Point,
    /// Exact value of the free residual at `point`.
    pub value: BigRational,
    /// Jet check of the full form at `point`.
    pub jet: JetResult,
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub verdict: Verdict,
    pub minimal_exponent: Option<u32>,
    /// Exact `Σ w_i |s_i|²` with `w_i > 0` realizing `R^m ⊗ P`.
    pub witness: Option<ExactSquares>,
    pub obstruction: Option<Obstruction>,
    pub search_bound: u32,
    pub trace: Vec<ExponentProbe>,
    pub sup_ratio: Option<f64>,
    /// Base divisor section `s_D` (ℙ¹ pipeline only).
    pub divisor: Option<HoloSection>,
    /// Rational candidates tried by the zero search (ℙ¹ pipeline only).
    pub candidates_tried: usize,
}

impl CertificateReport {
    fn inconclusive(search_bound: u32, trace: Vec<ExponentProbe>) -> Self {
        CertificateReport {
            verdict: Verdict::Inconclusive,
            minimal_exponent: None,
            witness: None,
            obstruction: None,
            search_bound,
            trace,
            sup_ratio: None,
            divisor: None,
            candidates_tried: 0,
        }
    }

    /// Minimum eigenvalue of `R^m ⊗ P` over the scanned range.
    pub fn min_eigenvalue_trace(&self) -> Vec<f64> {
        self.trace.iter().map(|p| p.min_eigenvalue).collect()
    }

    /// Recheck the certificate exactly against `P` and `R`.
    pub fn verify(&self, p: &HermitianForm, r: &HermitianForm) -> Result<bool> {
        match self.verdict {
            Verdict::CertifiedQsn => {
                let m = self.minimal_exponent.ok_or(Error::Invalid("missing exponent".into()))?;
                let target = r.pow(m).product(p)?;
                let witness_ok = self
                    .witness
                    .as_ref()
                    .is_some_and(|w| w.terms.iter().all(|(c, _)| c.is_positive()) && w.reexpand() == target);
                let minimal = m == 0 || !psd_exact(&r.pow(m - 1).product(p)?);
                Ok(witness_ok && psd_exact(&target) && minimal)
            }
            Verdict::CertifiedNotQsn => {
                let Some(ob) = &self.obstruction else { return Ok(false) };
                let value = p.eval_diag(&ob.point.coords())?;
                let full_ok = if ob.kind == ObstructionKind::NegativeValue { value.is_negative() } else { value.is_zero() };
                Ok(full_ok && !ob.jet.pass)
            }
            Verdict::Inconclusive => Ok(true),
        }
    }
}

fn probe(p: &HermitianForm, rm: &HermitianForm, m: u32) -> Result<(ExponentProbe, HermitianForm)> {
    let f = rm.product(p)?;
    let psd = psd_exact(&f);
    let min_eigenvalue = min_eigenvalue(&f)?;
    Ok((ExponentProbe { m, psd, min_eigenvalue }, f))
}

/// Least `m ≤ m_max` with `R^m ⊗ P` positive semidefinite (exact).
pub fn quillen_minimal_exponent(p: &HermitianForm, r: &HermitianForm, m_max: u32) -> Result<CertificateReport> {
    if r.is_zero() {
        return Err(Error::ZeroForm);
    }
    if r.n() != p.n() {
        return Err(Error::VariableMismatch(p.n(), r.n()));
    }
    let chunk = rayon::current_num_threads().max(1) as u32;
    let mut trace = Vec::new();
    let mut start = 0u32;
    let mut rpow = HermitianForm::unit(p.n());
    while start <= m_max {
        let end = (start + chunk - 1).min(m_max);
        let mut powers = Vec::with_capacity((end - start + 1) as usize);
        for m in start..=end {
            if m > start {
                rpow = rpow.product(r)?;
            }
            powers.push((m, rpow.clone()));
        }
        rpow = rpow.product(r)?;
        let mut rows = powers
            .par_iter()
            .map(|(m, rm)| probe(p, rm, *m))
            .collect::<Result<Vec<_>>>()?;
        rows.sort_by_key(|(pr, _)| pr.m);
        for (pr, f) in rows {
            let done = pr.psd;
            let m = pr.m;
            trace.push(pr);
            if done {
                let witness = exact_squares(&f);
                return Ok(CertificateReport {
                    verdict: Verdict::CertifiedQsn,
                    minimal_exponent: Some(m),
                    witness: Some(witness),
                    ..CertificateReport::inconclusive(m_max, trace)
                });
            }
        }
        start = end + 1;
    }
    Ok(CertificateReport::inconclusive(m_max, trace))
}

/// `|P|(v)/P(v)` for the exact congruence modulus; `None` at zeros of `P`.
pub fn modulus_ratio_exact(p: &HermitianForm, v: &[GaussRat]) -> Result<Option<BigRational>> {
    let m = exact_squares(p).modulus();
    let pv = p.eval_diag(v)?;
    if pv.is_zero() {
        return Ok(None);
    }
    Ok(Some(m.eval_diag(v)? / pv.abs()))
}

/// Points `v(t) = base + t·direction` for each `t` in `params`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveFamily {
    pub base: Vec<Complex64>,
    pub direction: Vec<Complex64>,
    pub params: Vec<f64>,
}

impl CurveFamily {
    pub fn points(&self) -> impl Iterator<Item = Vec<Complex64>> + '_ {
        self.params
            .iter()
            .map(|&t| self.base.iter().zip(&self.direction).map(|(b, d)| b + d * t).collect())
    }
}

/// Random unit-sphere samples plus optional refinement families.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingPlan {
    pub samples: usize,
    pub seed: u64,
    pub families: Vec<CurveFamily>,
    pub points: Vec<Vec<Complex64>>,
}

impl SamplingPlan {
    pub fn random(samples: usize, seed: u64) -> Self {
        SamplingPlan { samples, seed, families: Vec::new(), points: Vec::new() }
    }

    pub fn with_points(mut self, pts: Vec<Vec<Complex64>>) -> Self {
        self.points.extend(pts);
        self
    }

    pub fn with_family(mut self, f: CurveFamily) -> Self {
        self.families.push(f);
        self
    }

    fn realize(&self, dim: usize) -> Vec<Vec<Complex64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out: Vec<Vec<Complex64>> = (0..self.samples).map(|_| sphere_point(&mut rng, dim)).collect();
        out.extend(self.points.iter().cloned());
        for f in &self.families {
            out.extend(f.points());
        }
        out
    }
}

fn sphere_point<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioEstimate {
    pub sup: f64,
    pub arg_max: Vec<Complex64>,
    pub evaluated: usize,
    pub filtered: usize,
}

/// Relative size below which `P(v)` counts as a numerical zero.
pub const ZERO_FILTER: f64 = 1e-13;

/// Largest sampled `modulus(v)/|P(v)|`.
pub fn modulus_ratio_estimate(p: &HermitianForm, basis: &DistinguishedBasis, plan: &SamplingPlan) -> Result<RatioEstimate> {
    let m = modulus(p, basis)?;
    let pts = plan.realize(p.n() + 1);
    if pts.is_empty() {
        return Err(Error::DegeneratePlan);
    }
    let vals = pts
        .par_iter()
        .map(|v| {
            if v.len() != p.n() + 1 {
                return Err(Error::LengthMismatch { expected: p.n() + 1, got: v.len() });
            }
            let pv = p.eval_diag_f(v)?;
            let mv = m.eval_diag(v);
            Ok((pv.abs() > ZERO_FILTER * mv).then(|| mv / pv.abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(f64, usize)> = None;
    let mut filtered = 0;
    for (i, r) in vals.iter().enumerate() {
        match r {
            Some(r) if best.is_none_or(|(b, _)| *r > b) => best = Some((*r, i)),
            Some(_) => {}
            None => filtered += 1,
        }
    }
    let (sup, i) = best.ok_or(Error::DegeneratePlan)?;
    Ok(RatioEstimate { sup, arg_max: pts[i].clone(), evaluated: pts.len() - filtered, filtered })
}

/// Pass/fail of one SGCS condition with the worst value and its witness.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionResult {
    pub pass: bool,
    pub worst: f64,
    pub witness: Vec<Vec<Complex64>>,
}

impl ConditionResult {
    fn new() -> Self {
        ConditionResult { pass: true, worst: f64::INFINITY, witness: Vec::new() }
    }

    fn record(&mut self, value: f64, ok: bool, witness: &[&[Complex64]]) {
        if !ok && self.pass {
            self.pass = false;
            self.worst = value;
            self.witness = witness.iter().map(|w| w.to_vec()).collect();
        } else if self.pass && value < self.worst {
            self.worst = value;
            self.witness = witness.iter().map(|w| w.to_vec()).collect();
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SgcsReport {
    /// Positivity on samples and PSD of the 2×2 Gram matrices.
    pub s1: ConditionResult,
    /// Determinant positive across fibers and zero within a fiber.
    pub s2: ConditionResult,
    /// Positive curvature of `log R` in the affine chart `z_0 = 1`.
    pub s3: ConditionResult,
}

impl SgcsReport {
    pub fn pass(&self) -> bool {
        self.s1.pass && self.s2.pass && self.s3.pass
    }
}

const SGCS_REL_TOL: f64 = 1e-9;

/// Sampled check of the strong G-curvature conditions.
pub fn sgcs_check(r: &HermitianForm, pair_samples: usize, seed: u64) -> Result<SgcsReport> {
    if r.is_zero() {
        return Err(Error::ZeroForm);
    }
    if pair_samples == 0 {
        return Err(Error::DegeneratePlan);
    }
    let dim = r.n() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = |i: usize| -> Vec<Complex64> {
        (0..dim).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()
    };
    let ones: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); dim];
    let mut pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            pairs.push((e(i), e(j)));
        }
        pairs.push((e(i), ones.clone()));
    }
    for _ in 0..pair_samples {
        pairs.push((sphere_point(&mut rng, dim), sphere_point(&mut rng, dim)));
    }

    let mut s1 = ConditionResult::new();
    let mut s2 = ConditionResult::new();
    let rel = |x: f64, scale: f64| if scale > 0.0 { x / scale } else { x };
    for (v, w) in &pairs {
        let rvv = r.eval_diag_f(v)?;
        let rww = r.eval_diag_f(w)?;
        let rvw = r.eval_pair_f(v, w)?;
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().powi(r.degree() as i32);
        let nw = w.iter().map(|z| z.norm_sqr()).sum::<f64>().powi(r.degree() as i32);
        let scale = r.frobenius_f();
        let (av, aw) = (rel(rvv, scale * nv), rel(rww, scale * nw));
        s1.record(av, av > SGCS_REL_TOL, &[v]);
        s1.record(aw, aw > SGCS_REL_TOL, &[w]);
        let det = rvv * rww - rvw.norm_sqr();
        let dn = rel(det, scale * scale * nv * nw);
        s1.record(dn, dn >= -SGCS_REL_TOL, &[v, w]);
        s2.record(dn, dn > SGCS_REL_TOL, &[v, w]);
        // same fiber: w' = λ v
        let lambda = Complex64::new(gaussian(&mut rng), gaussian(&mut rng));
        let lv: Vec<Complex64> = v.iter().map(|z| z * lambda).collect();
        let rll = r.eval_diag_f(&lv)?;
        let rvl = r.eval_pair_f(v, &lv)?;
        let same = rvv * rll - rvl.norm_sqr();
        let lam2 = lambda.norm_sqr().powi(r.degree() as i32);
        let sn = rel(same.abs(), scale * scale * nv * nv * lam2);
        s2.record(-sn, sn <= SGCS_REL_TOL, &[v, &lv]);
    }

    // S3: Hessian of log r in the chart z_0 = 1
    let mut s3 = ConditionResult::new();
    let n = r.n();
    if n == 0 {
        return Ok(SgcsReport { s1, s2, s3 });
    }
    let q = affine_chart(r, 0)?;
    let dq: Vec<MixedHermPoly> = (0..n).map(|i| q.partial_holo(i)).collect();
    let dqb: Vec<MixedHermPoly> = (0..n).map(|j| q.partial_anti(j)).collect();
    let ddq: Vec<Vec<MixedHermPoly>> = (0..n).map(|i| (0..n).map(|j| dq[i].partial_anti(j)).collect()).collect();
    let mut charts: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]];
    for _ in 0..pair_samples {
        charts.push((0..n).map(|_| Complex64::new(gaussian(&mut rng), gaussian(&mut rng))).collect());
    }
    for t in &charts {
        let rv = q.eval_f(t)?;
        if rv <= 0.0 {
            s3.record(f64::NEG_INFINITY, false, &[t]);
            continue;
        }
        let gi: Vec<Complex64> = dq.iter().map(|d| d.eval_pair_f(t, t)).collect::<Result<_>>()?;
        let gj: Vec<Complex64> = dqb.iter().map(|d| d.eval_pair_f(t, t)).collect::<Result<_>>()?;
        let mut rows = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let rij = ddq[i][j].eval_pair_f(t, t)?;
                rows[i][j] = (rij * rv - gi[i] * gj[j]) / (rv * rv);
            }
        }
        let h = HermMatrix::from_rows(&rows)?;
        let lam = jacobi_eigh(&h)?.values.last().copied().unwrap_or(0.0);
        let scale = h.max_abs().max(1.0);
        s3.record(lam, lam > 1e-12 * scale, &[t]);
    }
    Ok(SgcsReport { s1, s2, s3 })
}

/// Restriction of a real-valued chart polynomial to the real (`axis = 1`)
/// or imaginary (`axis = i`) line through the origin.
fn axis_restriction(q: &MixedHermPoly, axis: &GaussRat) -> UniPoly {
    let ac = axis.conj();
    let mut coeffs: Vec<GaussRat> = Vec::new();
    for ((a, b), c) in q.entries() {
        let k = (a.get(0) + b.get(0)) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, GaussRat::zero());
        }
        coeffs[k] += &(&(c * &axis.pow(a.get(0))) * &ac.pow(b.get(0)));
    }
    UniPoly::new(coeffs)
}

fn unit_chart_values(p: &HermitianForm) -> impl Fn(Complex64, bool) -> f64 + '_ {
    let d = p.degree() as i32;
    move |t: Complex64, infinity_chart: bool| {
        let v = if infinity_chart { [Complex64::new(1.0, 0.0), t] } else { [t, Complex64::new(1.0, 0.0)] };
        let val = p.eval_diag_f(&v).unwrap_or(f64::INFINITY);
        val / (1.0 + t.norm_sqr()).powi(d)
    }
}

/// Rational points of `ℙ¹` at which the residual may vanish or go
/// negative: axis-restriction roots, coordinate points and rounded local
/// minimizers of the chart-normalized diagonal.
pub fn zero_candidates(p: &HermitianForm, starts: usize, seed: u64) -> Result<Vec<P1Point>> {
    if p.n() != 1 {
        return Err(Error::VariableMismatch(1, p.n()));
    }
    let mut cands: Vec<P1Point> = vec![P1Point::Finite(GaussRat::zero()), P1Point::Infinity];
    let q = affine_chart(p, 1)?;
    for axis in [GaussRat::one(), GaussRat::i()] {
        let mut roots: Vec<BigRational> = axis_restriction(&q, &axis).rational_roots().into_iter().map(|(r, _)| r).collect();
        roots.sort_by_key(|r| (r.abs(), r.is_negative()));
        for root in roots {
            cands.push(P1Point::Finite(&axis * &GaussRat::from_rat(root)));
        }
    }
    let f = unit_chart_values(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut minima: Vec<(Complex64, bool)> = Vec::new();
    for _ in 0..starts {
        let a = Complex64::new(gaussian(&mut rng), gaussian(&mut rng));
        let b = Complex64::new(gaussian(&mut rng), gaussian(&mut rng));
        let (t0, inf) = if a.norm() <= b.norm() { (a / b, false) } else { (b / a, true) };
        let (x, _) = nelder_mead(|x| f(Complex64::new(x[0], x[1]), inf), &[t0.re, t0.im], 0.1, 1e-24, 4000);
        minima.push((Complex64::new(x[0], x[1]), inf));
    }
    for (t, inf) in minima {
        let mut local: Vec<GaussRat> = Vec::new();
        for den in [1i64, 2, 3, 4, 10, 100, 1000] {
            local.push(GaussRat::approx(t, den));
        }
        let modulus = t.norm();
        for den in [1i64, 2, 3, 4, 10, 100] {
            let r = GaussRat::from_rat(rat_approx(modulus, den));
            for unit in [GaussRat::one(), -GaussRat::one(), GaussRat::i(), -GaussRat::i()] {
                local.push(&r * &unit);
            }
        }
        for c in local {
            let pt = if inf { P1Point::new(GaussRat::one(), c) } else { P1Point::new(c, GaussRat::one()) };
            if let Ok(pt) = pt {
                cands.push(pt);
            }
        }
    }
    let mut uniq: Vec<P1Point> = Vec::new();
    for c in cands {
        if !uniq.contains(&c) {
            uniq.push(c);
        }
    }
    Ok(uniq)
}

/// Exact decision pipeline on `ℙ¹` with `R = ‖z‖²`.
pub fn qsn_decide_p1(p: &HermitianForm, m_max: u32, starts: usize, seed: u64) -> Result<CertificateReport> {
    if p.n() != 1 {
        return Err(Error::VariableMismatch(1, p.n()));
    }
    if p.is_zero() {
        return Err(Error::ZeroForm);
    }
    let divisor = base_divisor_factor(p)?;
    let r = norm_power(1, 1)?;
    let mut rep = quillen_minimal_exponent(&divisor.residual, &r, m_max)?;
    rep.divisor = Some(divisor.s_d.clone());
    if rep.verdict == Verdict::CertifiedQsn {
        // lift the residual witness: |s_D|² · Σ w|h|² = Σ w|s_D h|²
        let w = rep.witness.take().expect("witness present");
        let terms = w
            .terms
            .into_iter()
            .map(|(c, h)| Ok((c, h.mul(&divisor.s_d)?)))
            .collect::<Result<Vec<_>>>()?;
        rep.witness = Some(ExactSquares { n: 1, d: p.degree() + rep.minimal_exponent.unwrap(), terms });
        return Ok(rep);
    }
    let cands = zero_candidates(&divisor.residual, starts, seed)?;
    rep.candidates_tried = cands.len();
    for c in cands {
        let value = divisor.residual.eval_diag(&c.coords())?;
        let kind = if value.is_zero() {
            ObstructionKind::ExactZero
        } else if value.is_negative() {
            ObstructionKind::NegativeValue
        } else {
            continue;
        };
        let jet = jet_check(&local_expansion(p, &c)?)?;
        rep.verdict = Verdict::CertifiedNotQsn;
        rep.obstruction = Some(Obstruction { kind, point: c, value, jet });
        break;
    }
    Ok(rep)
}
