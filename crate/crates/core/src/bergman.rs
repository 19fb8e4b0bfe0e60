//! Weighted Bergman kernels on `H⁰(ℙ¹, O(me + d))` with weight
//! `e^{−(mφ+ψ)}`, `φ = log r`, `ψ = log p`, and volume form
//! `Ω = (i/2π) ∂∂̄ log r`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::blowup::{dehomogenize as affine_chart, MixedHermPoly};
use crate::certify::sgcs_check;
use crate::error::{Error, Result};
use crate::form::HermitianForm;
use crate::monomial::MultiIndex;
use crate::section::HoloSection;

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
struct CSum {
    s: Complex64,
    c: Complex64,
}

impl CSum {
    fn add(&mut self, x: Complex64) {
        let two_sum = |s: f64, x: f64| -> (f64, f64) {
            let t = s + x;
            let c = if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
            (t, c)
        };
        let (re, cr) = two_sum(self.s.re, x.re);
        let (im, ci) = two_sum(self.s.im, x.im);
        self.s = Complex64::new(re, im);
        self.c += Complex64::new(cr, ci);
    }

    fn merge(&mut self, o: &CSum) {
        self.add(o.s);
        self.c += o.c;
    }

    fn value(&self) -> Complex64 {
        self.s + self.c
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let p = if n == 0 { 1.0 } else { p1 };
                dp = n as f64 * (x * p - p0) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Polar quadrature on the unit disk of each chart, refined by doubling
/// until successive Gram matrices agree to `rel_tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadPlan {
    pub radial_panels: usize,
    pub gl_order: usize,
    pub angular: usize,
    pub rel_tol: f64,
    pub max_refinements: u32,
}

impl Default for QuadPlan {
    fn default() -> Self {
        QuadPlan { radial_panels: 4, gl_order: 16, angular: 64, rel_tol: 1e-10, max_refinements: 6 }
    }
}

impl QuadPlan {
    fn refined(&self) -> QuadPlan {
        QuadPlan { radial_panels: 2 * self.radial_panels, angular: 2 * self.angular, ..self.clone() }
    }
}

/// Exact chart data: `r`, `p` and the derivatives of `r` needed for `Ω`.
#[derive(Clone, Debug)]
struct Chart {
    r: MixedHermPoly,
    r_t: MixedHermPoly,
    r_tb: MixedHermPoly,
    r_ttb: MixedHermPoly,
    p: MixedHermPoly,
}

impl Chart {
    fn new(r: &HermitianForm, p: &HermitianForm, z: usize) -> Result<Self> {
        let rc = affine_chart(r, z)?;
        let r_t = rc.partial_holo(0);
        let r_tb = rc.partial_anti(0);
        let r_ttb = r_t.partial_anti(0);
        Ok(Chart { r: rc, r_t, r_tb, r_ttb, p: affine_chart(p, z)? })
    }

    /// `(ρ(t), r(t), p(t))` with `Ω = ρ dA`.
    fn eval(&self, t: Complex64) -> (f64, f64, f64) {
        let x = [t];
        let r = self.r.eval_f(&x).unwrap_or(f64::NAN);
        let rt = self.r_t.eval_pair_f(&x, &x).unwrap_or(Complex64::new(f64::NAN, 0.0));
        let rtb = self.r_tb.eval_pair_f(&x, &x).unwrap_or(Complex64::new(f64::NAN, 0.0));
        let rttb = self.r_ttb.eval_f(&x).unwrap_or(f64::NAN);
        let rho = (r * rttb - (rt * rtb).re) / (PI * r * r);
        (rho, r, self.p.eval_f(&x).unwrap_or(f64::NAN))
    }
}

/// `(R, P, m)` on `ℙ¹` with validated positivity.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    r: HermitianForm,
    p: HermitianForm,
    m: u32,
    charts: [Chart; 2],
}

impl WeightSpec {
    /// Validates that `R` passes the SGCS check and that `P` is strictly
    /// positive on a 10³-point probe.
    pub fn new(r: &HermitianForm, p: &HermitianForm, m: u32) -> Result<Self> {
        if r.n() != 1 || p.n() != 1 {
            return Err(Error::VariableMismatch(1, r.n().max(p.n())));
        }
        if m == 0 {
            return Err(Error::Invalid("weight exponent m must be at least 1".into()));
        }
        if !sgcs_check(r, 32, 0x5eed)?.pass() {
            return Err(Error::Invalid("R fails the SGCS check".into()));
        }
        let scale = p.frobenius_f();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        for v in sphere_probes(998).into_iter().chain([[one, zero], [zero, one]]) {
            let val = p.eval_diag_f(&v)?;
            if val.is_nan() || val <= 1e-12 * scale {
                return Err(Error::Invalid(format!("P is not strictly positive at [{}:{}]", v[0], v[1])));
            }
        }
        Self::unchecked(r, p, m)
    }

    fn unchecked(r: &HermitianForm, p: &HermitianForm, m: u32) -> Result<Self> {
        let charts = [Chart::new(r, p, 1)?, Chart::new(r, p, 0)?];
        Ok(WeightSpec { r: r.clone(), p: p.clone(), m, charts })
    }

    /// Same `R`, `P` with another exponent; no revalidation needed.
    pub fn with_m(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("weight exponent m must be at least 1".into()));
        }
        Ok(WeightSpec { m, ..self.clone() })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Degree `me + d` of the sections.
    pub fn section_degree(&self) -> u32 {
        self.m * self.r.degree() + self.p.degree()
    }

    pub fn basis_dim(&self) -> usize {
        self.section_degree() as usize + 1
    }

    /// `e^{−(mφ+ψ)(v)} = 1/(r(v)^m p(v))`, projectively meaningful when
    /// multiplied by `|s(v)|²` for `s` of degree `me + d`.
    pub fn weight_at(&self, v: &[Complex64; 2]) -> Result<f64> {
        let r = self.r.eval_diag_f(v)?;
        let p = self.p.eval_diag_f(v)?;
        Ok(1.0 / (r.powi(self.m as i32) * p))
    }
}

/// Deterministic, roughly uniform points `[v0 : v1]` on the sphere.
pub fn sphere_probes(count: usize) -> Vec<[Complex64; 2]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let theta = golden * k as f64;
            // polar angle a: z = cos a; [cos(a/2) e^{iθ} : sin(a/2)]
            let a = z.clamp(-1.0, 1.0).acos();
            [Complex64::from_polar((a / 2.0).cos(), theta), Complex64::new((a / 2.0).sin(), 0.0)]
        })
        .collect()
}

/// Gram matrix `G_{jk} = ∫ t^j conj(t)^k e^{−(mφ+ψ)} Ω` of the monomials
/// `x^j y^{N−j}`, summed over both unit-disk charts.
fn gram_once(spec: &WeightSpec, plan: &QuadPlan) -> Vec<Vec<Complex64>> {
    let n1 = spec.basis_dim();
    let big_n = n1 - 1;
    let m = spec.m as i32;
    let gl = gauss_legendre(plan.gl_order);
    let panels: Vec<(usize, usize)> = (0..2).flat_map(|c| (0..plan.radial_panels).map(move |k| (c, k))).collect();
    let partial: Vec<Vec<CSum>> = panels
        .par_iter()
        .map(|&(c, k)| {
            let chart = &spec.charts[c];
            let mut acc = vec![CSum::default(); n1 * n1];
            let h = 1.0 / plan.radial_panels as f64;
            let a = k as f64 * h;
            let mut pw = vec![Complex64::new(0.0, 0.0); n1];
            for &(x, wx) in &gl {
                let rad = a + h * (x + 1.0) / 2.0;
                let wr = wx * h / 2.0 * rad * TAU / plan.angular as f64;
                for q in 0..plan.angular {
                    let t = Complex64::from_polar(rad, TAU * q as f64 / plan.angular as f64);
                    let (rho, r, p) = chart.eval(t);
                    let w = wr * rho / (r.powi(m) * p);
                    // chart 0: t^j ; chart 1: u^{N-j}
                    let mut z = Complex64::new(1.0, 0.0);
                    for e in 0..n1 {
                        let idx = if c == 0 { e } else { big_n - e };
                        pw[idx] = z;
                        z *= t;
                    }
                    for j in 0..n1 {
                        let left = pw[j] * w;
                        for l in j..n1 {
                            acc[j * n1 + l].add(left * pw[l].conj());
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![CSum::default(); n1 * n1];
    for part in &partial {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n1]; n1];
    for j in 0..n1 {
        for l in j..n1 {
            let v = total[j * n1 + l].value();
            g[j][l] = v;
            g[l][j] = v.conj();
        }
        g[j][j] = Complex64::new(g[j][j].re, 0.0);
    }
    g
}

fn frob_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> (f64, f64) {
    let mut d = 0.0;
    let mut n = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            d += (x - y).norm_sqr();
            n += y.norm_sqr();
        }
    }
    (d.sqrt(), n.sqrt())
}

/// Gram matrix, orthonormal basis and quadrature diagnostics.
#[derive(Clone, Debug)]
pub struct KernelData {
    pub m: u32,
    pub basis_dim: usize,
    pub gram: Vec<Vec<Complex64>>,
    /// Column `α` holds the monomial coefficients of `s^α`.
    pub orthonormal_coeffs: Vec<Vec<Complex64>>,
    pub quadrature_error_estimate: f64,
    /// `‖Sᵀ G S̄ − I‖_F`.
    pub orthonormality_residual: f64,
}

fn to_dmatrix(rows: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

fn from_dmatrix(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Adaptive quadrature of the Gram matrix followed by Cholesky
/// orthonormalization.
pub fn gram_matrix(spec: &WeightSpec, plan: &QuadPlan) -> Result<KernelData> {
    let mut cur_plan = plan.clone();
    cur_plan.angular = cur_plan.angular.max((2 * spec.basis_dim() + 8).next_power_of_two());
    let mut prev = gram_once(spec, &cur_plan);
    let mut err = f64::INFINITY;
    let mut gram = None;
    for _ in 0..plan.max_refinements {
        cur_plan = cur_plan.refined();
        let next = gram_once(spec, &cur_plan);
        let (d, n) = frob_diff(&prev, &next);
        err = d / n;
        prev = next;
        if err <= plan.rel_tol {
            gram = Some(prev.clone());
            break;
        }
    }
    let gram = gram.ok_or(Error::Quadrature { achieved: err, wanted: plan.rel_tol })?;
    if spec.r.is_diagonal() && spec.p.is_diagonal() {
        let maxd = (0..gram.len()).map(|j| gram[j][j].re).fold(0.0, f64::max);
        for (j, row) in gram.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if j != k && v.norm() > 1e-10 * maxd.max(1.0) {
                    return Err(Error::Quadrature { achieved: v.norm(), wanted: 1e-10 });
                }
            }
        }
    }
    orthonormalize(spec.m, gram, err)
}

fn orthonormalize(m: u32, gram: Vec<Vec<Complex64>>, err: f64) -> Result<KernelData> {
    let n = gram.len();
    let g = to_dmatrix(&gram);
    // H = conj(G) is Hermitian PD; S = L^{-*} gives S^T G S̄ = I
    let h = g.map(|z| z.conj());
    let chol = Cholesky::new(h).ok_or_else(|| Error::Invalid("Gram matrix is not positive definite".into()))?;
    let l_adj = chol.l().adjoint();
    let s = l_adj
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::Invalid("singular Cholesky factor".into()))?;
    let check = s.transpose() * &g * s.map(|z| z.conj()) - DMatrix::<Complex64>::identity(n, n);
    let residual = check.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if residual > 1e-8 {
        return Err(Error::Invalid(format!("orthonormality residual {residual:e}")));
    }
    Ok(KernelData {
        m,
        basis_dim: n,
        gram,
        orthonormal_coeffs: from_dmatrix(&s),
        quadrature_error_estimate: err,
        orthonormality_residual: residual,
    })
}

impl KernelData {
    fn monomials(&self, v: &[Complex64; 2]) -> Vec<Complex64> {
        let big_n = self.basis_dim - 1;
        (0..=big_n).map(|j| v[0].powu(j as u32) * v[1].powu((big_n - j) as u32)).collect()
    }

    /// `(s^α(v))_α`.
    pub fn orthonormal_values(&self, v: &[Complex64; 2]) -> Vec<Complex64> {
        let mono = self.monomials(v);
        (0..self.basis_dim)
            .map(|a| mono.iter().zip(&self.orthonormal_coeffs).map(|(x, row)| x * row[a]).sum())
            .collect()
    }
}

/// `K(x, y) = Σ_α s^α(x) conj(s^α(y))`.
pub fn kernel_eval(k: &KernelData, x: &[Complex64; 2], y: &[Complex64; 2]) -> Complex64 {
    let a = k.orthonormal_values(x);
    let b = k.orthonormal_values(y);
    a.iter().zip(&b).map(|(p, q)| p * q.conj()).sum()
}

/// `max_x |Π s(x) − s(x)| e^{−(mφ+ψ)(x)/2} / ‖s‖` over `probes`, with the
/// inner products `(s, s^α)` recomputed on an independent finer grid.
pub fn reproducing_error(
    k: &KernelData,
    spec: &WeightSpec,
    s: &HoloSection,
    plan: &QuadPlan,
    probes: &[[Complex64; 2]],
) -> Result<f64> {
    if s.n() != 1 {
        return Err(Error::VariableMismatch(1, s.n()));
    }
    if s.degree() != spec.section_degree() || k.basis_dim != spec.basis_dim() {
        return Err(Error::DegreeMismatch(spec.section_degree(), s.degree()));
    }
    let big_n = spec.section_degree();
    let c: Vec<Complex64> = (0..=big_n)
        .map(|j| s.coeff(&MultiIndex::new(vec![j, big_n - j])).to_complex())
        .collect::<Result<_>>()?;
    let mut fine = plan.clone();
    fine.angular = fine.angular.max((2 * spec.basis_dim() + 8).next_power_of_two());
    for _ in 0..3 {
        fine = fine.refined();
    }
    let g2 = gram_once(spec, &fine);
    let n1 = k.basis_dim;
    // ‖s‖² = cᵀ G c̄ ;  q_α = (cᵀ G S̄)_α
    let gc: Vec<Complex64> = (0..n1).map(|l| (0..n1).map(|j| c[j] * g2[j][l]).sum()).collect();
    let norm2: f64 = gc.iter().zip(&c).map(|(x, y)| (x * y.conj()).re).sum();
    let q: Vec<Complex64> = (0..n1)
        .map(|a| (0..n1).map(|l| gc[l] * k.orthonormal_coeffs[l][a].conj()).sum())
        .collect();
    let mut worst: f64 = 0.0;
    for v in probes {
        let sa = k.orthonormal_values(v);
        let proj: Complex64 = sa.iter().zip(&q).map(|(x, y)| x * y).sum();
        let direct = s.eval_f(v)?;
        let w = spec.weight_at(v)?.sqrt();
        worst = worst.max((proj - direct).norm() * w / norm2.sqrt());
    }
    Ok(worst)
}

/// `ρ_m(x)` per `m` and probe, the fitted `b₁(x)` in `ρ_m ≈ 1 − b₁/m`, and
/// the finiteness constant `max m|ρ_m − 1|`.
#[derive(Clone, Debug)]
pub struct AsymptoticsTable {
    pub m_list: Vec<u32>,
    pub probes: Vec<[Complex64; 2]>,
    /// `ratios[i][k]` for `m_list[i]` and `probes[k]`.
    pub ratios: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub c_estimate: f64,
    pub quadrature_error: f64,
}

impl AsymptoticsTable {
    pub fn b1_mean(&self) -> f64 {
        self.b1.iter().sum::<f64>() / self.b1.len() as f64
    }
}

pub fn diagonal_asymptotics(
    r: &HermitianForm,
    p: &HermitianForm,
    m_list: &[u32],
    probes: &[[Complex64; 2]],
    plan: &QuadPlan,
) -> Result<AsymptoticsTable> {
    if m_list.len() < 2 || m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("m_list must be increasing with at least two values".into()));
    }
    if probes.is_empty() {
        return Err(Error::DegeneratePlan);
    }
    let base = WeightSpec::new(r, p, m_list[0])?;
    let rows = m_list
        .par_iter()
        .map(|&m| {
            let spec = base.with_m(m)?;
            let k = gram_matrix(&spec, plan)?;
            let vals = probes
                .iter()
                .map(|v| Ok(kernel_eval(&k, v, v).re * spec.weight_at(v)? / m as f64))
                .collect::<Result<Vec<f64>>>()?;
            Ok((vals, k.quadrature_error_estimate))
        })
        .collect::<Result<Vec<_>>>()?;
    let quadrature_error = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let ratios: Vec<Vec<f64>> = rows.into_iter().map(|r| r.0).collect();
    let inv2: f64 = m_list.iter().map(|&m| 1.0 / (m as f64 * m as f64)).sum();
    let b1 = (0..probes.len())
        .map(|k| -m_list.iter().zip(&ratios).map(|(&m, row)| (row[k] - 1.0) / m as f64).sum::<f64>() / inv2)
        .collect();
    let c_estimate = m_list
        .iter()
        .zip(&ratios)
        .flat_map(|(&m, row)| row.iter().map(move |x| m as f64 * (x - 1.0).abs()))
        .fold(0.0, f64::max);
    Ok(AsymptoticsTable { m_list: m_list.to_vec(), probes: probes.to_vec(), ratios, b1, c_estimate, quadrature_error })
}

/// Diagonal of the coefficient matrix of `R^m · P` recovered numerically
/// from the polarized values `r(x, ȳ)^m p(x, ȳ)` on the unit torus.
pub fn coefficient_diagonal(r: &HermitianForm, p: &HermitianForm, m: u32) -> Result<Vec<f64>> {
    if r.n() != 1 || p.n() != 1 {
        return Err(Error::VariableMismatch(1, r.n().max(p.n())));
    }
    let big_n = (m * r.degree() + p.degree()) as usize;
    let grid = (big_n + 1).next_power_of_two() * 2;
    let pts: Vec<[Complex64; 2]> =
        (0..grid).map(|q| [Complex64::from_polar(1.0, TAU * q as f64 / grid as f64), Complex64::new(1.0, 0.0)]).collect();
    let mut f = vec![vec![Complex64::new(0.0, 0.0); grid]; grid];
    for (a, x) in pts.iter().enumerate() {
        for (b, y) in pts.iter().enumerate() {
            f[a][b] = r.eval_pair_f(x, y)?.powu(m) * p.eval_pair_f(x, y)?;
        }
    }
    let scale = 1.0 / (grid * grid) as f64;
    Ok((0..=big_n)
        .map(|j| {
            let mut acc = CSum::default();
            for (a, row) in f.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    let phase = TAU * (j * ((grid + b - a) % grid)) as f64 / grid as f64;
                    acc.add(v * Complex64::from_polar(1.0, phase));
                }
            }
            acc.value().re * scale
        })
        .collect())
}

/// First `m ≤ m_max` whose numerical coefficient diagonal is entrywise
/// `≥ −rel_tol·max|entry|`, with the per-`m` minimum normalized entry.
pub fn diagonal_onset(r: &HermitianForm, p: &HermitianForm, m_max: u32, rel_tol: f64) -> Result<(Option<u32>, Vec<f64>)> {
    let mut trace = Vec::new();
    for m in 0..=m_max {
        let d = coefficient_diagonal(r, p, m)?;
        let scale = d.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let min = d.iter().fold(f64::INFINITY, |a, &x| a.min(x)) / scale;
        trace.push(min);
        if min >= -rel_tol {
            return Ok((Some(m), trace));
        }
    }
    Ok((None, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{norm_power, Sign};
    use crate::scalar::{rat, GaussRat};
    use num_traits::One;

    fn fs(m: u32) -> WeightSpec {
        WeightSpec::new(&norm_power(1, 1).unwrap(), &HermitianForm::unit(1), m).unwrap()
    }

    fn fact(k: u32) -> f64 {
        (1..=k).map(f64::from).product()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre(8);
        let s: f64 = gl.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        assert!((gl.iter().map(|p| p.1).sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fubini_study_gram() {
        for (m, want) in [(2, vec![1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0]), (1, vec![0.5, 0.5])] {
            let k = gram_matrix(&fs(m), &QuadPlan::default()).unwrap();
            for (j, w) in want.iter().enumerate() {
                assert!((k.gram[j][j].re - w).abs() < 1e-9, "m={m} j={j} {:?}", k.gram[j][j]);
            }
            assert!(k.orthonormality_residual < 1e-8);
        }
        let m = 9;
        let k = gram_matrix(&fs(m), &QuadPlan::default()).unwrap();
        for j in 0..=m {
            let want = fact(j) * fact(m - j) / fact(m + 1);
            assert!((k.gram[j as usize][j as usize].re - want).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_values() {
        let k = gram_matrix(&fs(1), &QuadPlan::default()).unwrap();
        let o = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!((kernel_eval(&k, &o, &o).re - 2.0).abs() < 1e-9);
        let spec = fs(6);
        let k = gram_matrix(&spec, &QuadPlan::default()).unwrap();
        for v in sphere_probes(20) {
            let val = kernel_eval(&k, &v, &v).re * spec.weight_at(&v).unwrap();
            assert!((val - 7.0).abs() < 1e-8, "{val}");
        }
        let x = [Complex64::new(0.3, -0.2), Complex64::new(1.0, 0.0)];
        let y = [Complex64::new(1.0, 0.0), Complex64::new(-0.7, 0.4)];
        assert!((kernel_eval(&k, &x, &y) - kernel_eval(&k, &y, &x).conj()).norm() < 1e-12);
    }

    #[test]
    fn reproducing() {
        let spec = fs(3);
        let plan = QuadPlan::default();
        let k = gram_matrix(&spec, &plan).unwrap();
        let probes = sphere_probes(20);
        let mono = HoloSection::monomial(MultiIndex::new(vec![2, 1]), GaussRat::one());
        assert!(reproducing_error(&k, &spec, &mono, &plan, &probes).unwrap() < 1e-8);
        let mix = HoloSection::from_terms(
            1,
            3,
            [(MultiIndex::new(vec![3, 0]), GaussRat::frac(2, 3)), (MultiIndex::new(vec![1, 2]), GaussRat::new(rat(-1, 5), rat(7, 2)))],
        )
        .unwrap();
        assert!(reproducing_error(&k, &spec, &mix, &plan, &probes).unwrap() < 1e-7);
        let wrong = HoloSection::monomial(MultiIndex::new(vec![1, 1]), GaussRat::one());
        assert!(reproducing_error(&k, &spec, &wrong, &plan, &probes).is_err());
    }

    #[test]
    fn fs_asymptotics() {
        let r = norm_power(1, 1).unwrap();
        let t = diagonal_asymptotics(&r, &HermitianForm::unit(1), &[4, 8], &sphere_probes(5), &QuadPlan::default()).unwrap();
        for (i, &m) in t.m_list.iter().enumerate() {
            for x in &t.ratios[i] {
                assert!((x - (m as f64 + 1.0) / m as f64).abs() < 1e-8);
            }
        }
        assert!((t.b1_mean() + 1.0).abs() < 1e-6);
        let dev = |i: usize| (t.ratios[i][0] - 1.0).abs();
        let halving = dev(1) / dev(0);
        assert!((0.3..=0.7).contains(&halving));
        assert!(diagonal_asymptotics(&r, &HermitianForm::unit(1), &[4], &sphere_probes(5), &QuadPlan::default()).is_err());
    }

    #[test]
    fn weight_validation() {
        let r = norm_power(1, 1).unwrap();
        let z0 = HermitianForm::from_squares(&[(Sign::Plus, HoloSection::var(1, 0))]).unwrap();
        assert!(WeightSpec::new(&z0, &HermitianForm::unit(1), 2).is_err());
        assert!(WeightSpec::new(&r, &z0, 2).is_err());
        assert!(WeightSpec::new(&r, &HermitianForm::unit(1), 0).is_err());
    }

    #[test]
    fn coefficient_diagonal_matches_convolution() {
        let p = HermitianForm::from_weighted_squares(&[
            (rat(1, 1), HoloSection::monomial(MultiIndex::new(vec![2, 0]), GaussRat::one())),
            (rat(1, 1), HoloSection::monomial(MultiIndex::new(vec![0, 2]), GaussRat::one())),
            (rat(-3, 2), HoloSection::monomial(MultiIndex::new(vec![1, 1]), GaussRat::one())),
        ])
        .unwrap();
        let r = norm_power(1, 1).unwrap();
        let d = coefficient_diagonal(&r, &p, 4).unwrap();
        // C(4,k-2) - 3/2 C(4,k-1) + C(4,k), k indexing powers of z0
        let b = [1.0, 4.0, 6.0, 4.0, 1.0];
        let get = |i: isize| if (0..5).contains(&i) { b[i as usize] } else { 0.0 };
        for k in 0..7isize {
            let want = get(k - 2) - 1.5 * get(k - 1) + get(k);
            assert!((d[k as usize] - want).abs() < 1e-10, "{k}: {} vs {want}", d[k as usize]);
        }
        let (onset, trace) = diagonal_onset(&r, &p, 10, 1e-9).unwrap();
        assert_eq!(onset, Some(5));
        assert_eq!(trace.len(), 6);
    }
}
