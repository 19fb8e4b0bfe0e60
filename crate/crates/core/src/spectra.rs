//! Hermitian linear algebra: exact congruence diagonalization over the
//! Gaussian rationals, and a cyclic complex Jacobi eigensolver.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::form::HermitianForm;
use crate::monomial::MonomialBasis;
use crate::scalar::GaussRat;
use crate::section::HoloSection;

/// Dense `N×N` complex matrix, row-major, Hermitian up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermMatrix {
    pub fn zeros(n: usize) -> Self {
        HermMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Checked constructor: rejects matrices whose asymmetry exceeds
    /// `1e-14·max|entry|`.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        let m = HermMatrix { n, data };
        let asym = m.asymmetry();
        if asym > 1e-14 * m.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NotHermitian(asym));
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i).re).collect()
    }
}

/// Floating image of the coefficient matrix over the full graded-lex basis.
pub fn to_float(p: &HermitianForm) -> Result<HermMatrix> {
    let basis = p.basis();
    let mut m = HermMatrix::zeros(basis.len());
    for ((a, b), c) in p.entries() {
        let i = basis.rank(a).expect("homogeneous");
        let j = basis.rank(b).expect("homogeneous");
        m.set(i, j, c.to_complex()?);
    }
    Ok(m)
}

/// `M = U·diag(values)·U†`, values descending; `vectors` is row-major with
/// eigenvectors in columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: HermMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim()).map(|i| self.vectors.get(i, k)).collect()
    }

    /// `‖M − U·diag(λ)·U†‖_F`.
    pub fn reconstruction_residual(&self, m: &HermMatrix) -> f64 {
        let n = m.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut r = Complex64::new(0.0, 0.0);
                for (k, &l) in self.values.iter().enumerate() {
                    r += self.vectors.get(i, k) * l * self.vectors.get(j, k).conj();
                }
                s += (m.get(i, j) - r).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.vectors.dim();
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut r = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    r += self.vectors.get(i, a).conj() * self.vectors.get(i, b);
                }
                if a == b {
                    r -= 1.0;
                }
                s += r.norm_sqr();
            }
        }
        s.sqrt()
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi: each rotation first removes the phase of
/// `a_pq`, then applies a real Givens rotation that annihilates it.
pub fn jacobi_eigh(m: &HermMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    let asym = m.asymmetry();
    let scale = m.max_abs();
    if asym > 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(asym));
    }
    let mut a = m.clone();
    // symmetrize exactly so the diagonal stays real
    for i in 0..n {
        let d = a.get(i, i).re;
        a.set(i, i, Complex64::new(d, 0.0));
        for j in (i + 1)..n {
            let v = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            a.set(i, j, v);
            a.set(j, i, v.conj());
        }
    }
    let mut v = HermMatrix::identity(n);
    let target = 1e-12 * m.frobenius();
    let mut sweeps = 0;
    while a.off_diagonal_norm() > target {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off: a.off_diagonal_norm() });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 || r <= 1e-300 {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]] on (p, q)
                let jqp = -s * phase.conj();
                let jqq = c * phase.conj();
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c + akq * jqp);
                    a.set(k, q, akp * s + akq * jqq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c + aqk * jqp.conj());
                    a.set(q, k, apk * s + aqk * jqq.conj());
                }
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c + vkq * jqp);
                    v.set(k, q, vkp * s + vkq * jqq);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.diagonal();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let mut vectors = HermMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, new, v.get(i, old));
        }
    }
    Ok(EigenDecomposition { values: order.iter().map(|&i| diag[i]).collect(), vectors })
}

/// Exact congruence diagonalization `P = Σ w_i |s_i|²` with rational
/// weights and independent sections with Gaussian-rational coefficients
/// (Lagrange's completion of squares with symmetric pivoting).
#[derive(Clone, Debug)]
pub struct ExactSquares {
    pub n: usize,
    pub d: u32,
    pub terms: Vec<(BigRational, HoloSection)>,
}

impl ExactSquares {
    pub fn signature(&self) -> (usize, usize) {
        let k = self.terms.iter().filter(|(w, _)| w.is_positive()).count();
        (k, self.terms.len() - k)
    }

    pub fn reexpand(&self) -> HermitianForm {
        if self.terms.is_empty() {
            return HermitianForm::zero(self.n, self.d);
        }
        HermitianForm::from_weighted_squares(&self.terms).expect("consistent sections")
    }

    /// `Σ |w_i| |s_i|²`: an exact modulus for this distinguished basis.
    pub fn modulus(&self) -> HermitianForm {
        if self.terms.is_empty() {
            return HermitianForm::zero(self.n, self.d);
        }
        let abs: Vec<_> = self.terms.iter().map(|(w, s)| (w.abs(), s.clone())).collect();
        HermitianForm::from_weighted_squares(&abs).expect("consistent sections")
    }
}

enum ReduceMode {
    Full,
    /// Stop at the first certificate of indefiniteness.
    PsdCheck,
}

/// Returns `None` only in `PsdCheck` mode, when the form is not PSD.
fn reduce(p: &HermitianForm, mode: ReduceMode) -> Option<ExactSquares> {
    let basis: MonomialBasis = p.basis();
    // restrict to indices that occur in some entry
    let mut active: Vec<usize> = p
        .entries()
        .keys()
        .flat_map(|(a, b)| [basis.rank(a).unwrap(), basis.rank(b).unwrap()])
        .collect();
    active.sort_unstable();
    active.dedup();
    let pos = |i: usize| active.binary_search(&i).unwrap();
    let k = active.len();
    let mut a = vec![vec![GaussRat::zero(); k]; k];
    for ((x, y), c) in p.entries() {
        a[pos(basis.rank(x).unwrap())][pos(basis.rank(y).unwrap())] = c.clone();
    }
    // generators over the full basis
    let mut gens: Vec<Vec<GaussRat>> = active
        .iter()
        .map(|&i| {
            let mut v = vec![GaussRat::zero(); basis.len()];
            v[i] = GaussRat::from(1i64);
            v
        })
        .collect();
    let mut alive: Vec<bool> = vec![true; k];
    let mut terms = Vec::new();
    loop {
        let pivot = (0..k).find(|&i| alive[i] && !a[i][i].is_zero());
        let i = match pivot {
            Some(i) => i,
            None => {
                let pair = (0..k)
                    .filter(|&i| alive[i])
                    .find_map(|i| (0..k).find(|&j| j != i && alive[j] && !a[i][j].is_zero()).map(|j| (i, j)));
                let Some((i, j)) = pair else { break };
                if matches!(mode, ReduceMode::PsdCheck) {
                    return None;
                }
                // b_i ← b_i + λ b_j with λ = -conj(a_ij) makes a_jj = 2|a_ij|²
                let lambda = -a[i][j].conj();
                for s in 0..k {
                    if !a[i][s].is_zero() {
                        let t = &lambda * &a[i][s];
                        a[j][s] -= &t;
                    }
                }
                let lc = lambda.conj();
                for r in 0..k {
                    if !a[r][i].is_zero() {
                        let t = &lc * &a[r][i];
                        a[r][j] -= &t;
                    }
                }
                let gj = gens[j].clone();
                for (x, y) in gens[i].iter_mut().zip(&gj) {
                    if !y.is_zero() {
                        *x += &(&lambda * y);
                    }
                }
                continue;
            }
        };
        let d = a[i][i].re.clone();
        if matches!(mode, ReduceMode::PsdCheck) && d.is_negative() {
            return None;
        }
        // L = Σ_j a_ji b_j ; P -= (1/d)|L|²
        let col: Vec<GaussRat> = (0..k).map(|j| a[j][i].clone()).collect();
        let mut section = vec![GaussRat::zero(); basis.len()];
        for (j, cj) in col.iter().enumerate() {
            if cj.is_zero() || !alive[j] {
                continue;
            }
            for (x, g) in section.iter_mut().zip(&gens[j]) {
                if !g.is_zero() {
                    *x += &(cj * g);
                }
            }
        }
        let inv_d = GaussRat::from_rat(BigRational::from_integer(1.into()) / &d);
        for r in 0..k {
            if col[r].is_zero() {
                continue;
            }
            let left = &col[r] * &inv_d;
            for s in 0..k {
                if col[s].is_zero() {
                    continue;
                }
                let t = &left * &col[s].conj();
                a[r][s] -= &t;
            }
        }
        alive[i] = false;
        terms.push((BigRational::from_integer(1.into()) / d, HoloSection::from_dense(&basis, &section)));
    }
    Some(ExactSquares { n: p.n(), d: p.degree(), terms })
}

/// Exact diagonalization by congruence; always succeeds.
pub fn exact_squares(p: &HermitianForm) -> ExactSquares {
    reduce(p, ReduceMode::Full).expect("full reduction never aborts")
}

/// Exact positive-semidefiniteness of the coefficient matrix.
pub fn psd_exact(p: &HermitianForm) -> bool {
    reduce(p, ReduceMode::PsdCheck).is_some()
}

/// Exact inertia `(k, ℓ)`: counts of positive and negative eigenvalues.
pub fn signature(p: &HermitianForm) -> (usize, usize) {
    exact_squares(p).signature()
}

/// Smallest eigenvalue of the floating coefficient matrix.
pub fn min_eigenvalue(p: &HermitianForm) -> Result<f64> {
    if p.is_diagonal() {
        let basis = p.basis();
        let mut min = if p.entries().len() < basis.len() { 0.0 } else { f64::INFINITY };
        for c in p.entries().values() {
            min = min.min(c.to_complex()?.re);
        }
        return Ok(if min.is_infinite() { 0.0 } else { min });
    }
    let e = jacobi_eigh(&to_float(p)?)?;
    Ok(e.values.last().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{norm_power, Sign};
    use crate::monomial::MultiIndex;
    use crate::scalar::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mono(a: &[u32]) -> HoloSection {
        HoloSection::monomial(MultiIndex::new(a.to_vec()), GaussRat::from(1i64))
    }

    fn circle() -> HermitianForm {
        HermitianForm::from_squares(&[
            (Sign::Plus, mono(&[2, 0])),
            (Sign::Plus, mono(&[0, 2])),
            (Sign::Minus, mono(&[1, 1])),
            (Sign::Minus, mono(&[1, 1])),
        ])
        .unwrap()
    }

    fn quillen_form() -> HermitianForm {
        HermitianForm::from_weighted_squares(&[
            (rat(1, 1), mono(&[2, 0])),
            (rat(1, 1), mono(&[0, 2])),
            (rat(-3, 2), mono(&[1, 1])),
        ])
        .unwrap()
    }

    #[test]
    fn to_float_examples() {
        let m = to_float(&circle()).unwrap();
        assert_eq!(m.diagonal(), vec![1.0, -2.0, 1.0]);
        assert_eq!(to_float(&norm_power(1, 2).unwrap()).unwrap().diagonal(), vec![1.0, 2.0, 1.0]);
        let z = to_float(&HermitianForm::zero(1, 2)).unwrap();
        assert_eq!(z.frobenius(), 0.0);
    }

    #[test]
    fn jacobi_examples() {
        let m = HermMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = jacobi_eigh(&m).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let e = jacobi_eigh(&to_float(&circle()).unwrap()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, -2.0]);
        let e = jacobi_eigh(&HermMatrix::identity(5)).unwrap();
        assert!(e.values.iter().all(|&x| x == 1.0));
        let bad = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
        ];
        assert!(HermMatrix::from_rows(&bad).is_err());
    }

    fn random_herm(rng: &mut ChaCha8Rng, n: usize) -> HermMatrix {
        let mut m = HermMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            for j in (i + 1)..n {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    #[test]
    fn jacobi_residuals_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 3, 7, 20, 60] {
            let m = random_herm(&mut rng, n);
            let e = jacobi_eigh(&m).unwrap();
            assert!(e.reconstruction_residual(&m) <= 1e-10 * m.frobenius(), "n={n}");
            assert!(e.unitarity_residual() <= 1e-10, "n={n}");
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn psd_examples() {
        assert!(psd_exact(&norm_power(2, 3).unwrap()));
        assert!(!psd_exact(&circle()));
        let q = quillen_form().product(&norm_power(1, 5).unwrap()).unwrap();
        assert!(psd_exact(&q));
        assert!(!psd_exact(&quillen_form().product(&norm_power(1, 4).unwrap()).unwrap()));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&circle()), (2, 1));
        assert_eq!(signature(&norm_power(1, 3).unwrap()), (4, 0));
        assert_eq!(signature(&HermitianForm::zero(1, 2)), (0, 0));
    }

    #[test]
    fn zero_diagonal_pivot() {
        // |z0 + z1|² - |z0 - z1|² = 2(z0 z̄1 + z1 z̄0): zero diagonal
        let z0 = HoloSection::var(1, 0);
        let z1 = HoloSection::var(1, 1);
        let p = HermitianForm::from_squares(&[
            (Sign::Plus, z0.add(&z1).unwrap()),
            (Sign::Minus, z0.sub(&z1).unwrap()),
        ])
        .unwrap();
        assert!(p.entries().keys().all(|(a, b)| a != b));
        let sq = exact_squares(&p);
        assert_eq!(sq.signature(), (1, 1));
        assert_eq!(sq.reexpand(), p);
        assert!(!psd_exact(&p));
    }

    #[test]
    fn exact_squares_reexpand() {
        let c = circle();
        let sq = exact_squares(&c);
        assert_eq!(sq.reexpand(), c);
        assert_eq!(sq.modulus(), norm_power(1, 2).unwrap());
    }
}
