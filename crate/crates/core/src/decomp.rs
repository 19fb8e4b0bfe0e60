//! Distinguished bases `P = Σ|f_i|² − Σ|g_j|²`, modulus forms and
//! floating sum-of-squared-norms decompositions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::form::HermitianForm;
use crate::monomial::MonomialBasis;
use crate::section::monomial_f;
use crate::spectra::{jacobi_eigh, psd_exact, to_float, HermMatrix};

/// Relative eigenvalue cutoff below which a direction counts as zero.
pub const EIGEN_CUTOFF: f64 = 1e-10;

/// Homogeneous polynomial with floating coefficients, dense over the
/// graded-lex basis of degree `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatSection {
    pub n: usize,
    pub d: u32,
    pub coeffs: Vec<Complex64>,
}

impl FloatSection {
    pub fn eval(&self, v: &[Complex64]) -> Complex64 {
        let basis = MonomialBasis::new(self.n, self.d);
        basis.iter().zip(&self.coeffs).map(|(a, c)| c * monomial_f(a, v)).sum()
    }

    fn axpy(&self, a: Complex64, o: &FloatSection) -> FloatSection {
        FloatSection {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x + a * y).collect(),
        }
    }

    fn scale(&self, a: Complex64) -> FloatSection {
        FloatSection { n: self.n, d: self.d, coeffs: self.coeffs.iter().map(|x| a * x).collect() }
    }
}

/// Bihomogeneous form with a floating coefficient matrix.
#[derive(Clone, Debug)]
pub struct FloatForm {
    pub n: usize,
    pub d: u32,
    pub matrix: HermMatrix,
}

impl FloatForm {
    fn from_squares(n: usize, d: u32, plus: &[FloatSection], minus: &[FloatSection]) -> FloatForm {
        let k = MonomialBasis::new(n, d).len();
        let mut m = HermMatrix::zeros(k);
        for (sign, list) in [(1.0, plus), (-1.0, minus)] {
            for s in list {
                for i in 0..k {
                    if s.coeffs[i] == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in 0..k {
                        let v = m.get(i, j) + s.coeffs[i] * s.coeffs[j].conj() * sign;
                        m.set(i, j, v);
                    }
                }
            }
        }
        FloatForm { n, d, matrix: m }
    }

    pub fn eval_diag(&self, v: &[Complex64]) -> f64 {
        let basis = MonomialBasis::new(self.n, self.d);
        let mono: Vec<Complex64> = basis.iter().map(|a| monomial_f(a, v)).collect();
        let k = mono.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..k {
            for j in 0..k {
                let c = self.matrix.get(i, j);
                if c.re != 0.0 || c.im != 0.0 {
                    acc += c * mono[i] * mono[j].conj();
                }
            }
        }
        acc.re
    }

    /// `‖self − P‖_F` against an exact form of the same shape.
    pub fn distance_to(&self, p: &HermitianForm) -> Result<f64> {
        let m = to_float(p)?;
        let mut s = 0.0;
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                s += (self.matrix.get(i, j) - m.get(i, j)).norm_sqr();
            }
        }
        Ok(s.sqrt())
    }
}

/// Independent sections realizing `P = Σ|f|² − Σ|g|²`; `(k, ℓ)` is the
/// signature.
#[derive(Clone, Debug)]
pub struct DistinguishedBasis {
    pub n: usize,
    pub d: u32,
    pub f: Vec<FloatSection>,
    pub g: Vec<FloatSection>,
    pub k: usize,
    pub l: usize,
    /// Frobenius norm of the source coefficient matrix.
    pub source_norm: f64,
}

impl DistinguishedBasis {
    pub fn reexpand(&self) -> FloatForm {
        FloatForm::from_squares(self.n, self.d, &self.f, &self.g)
    }

    pub fn eval_diag(&self, v: &[Complex64]) -> f64 {
        let sf: f64 = self.f.iter().map(|s| s.eval(v).norm_sqr()).sum();
        let sg: f64 = self.g.iter().map(|s| s.eval(v).norm_sqr()).sum();
        sf - sg
    }

    /// `Σ|f(v)|² + Σ|g(v)|²`.
    pub fn modulus_at(&self, v: &[Complex64]) -> f64 {
        self.f.iter().chain(&self.g).map(|s| s.eval(v).norm_sqr()).sum()
    }

    pub fn sections(&self) -> impl Iterator<Item = &FloatSection> {
        self.f.iter().chain(self.g.iter())
    }
}

/// Eigen-based distinguished basis; eigenvalues with
/// `|λ| ≤ 1e-10·‖C‖_F` are dropped.
pub fn distinguished_basis(p: &HermitianForm) -> Result<DistinguishedBasis> {
    if p.is_zero() {
        return Err(Error::ZeroForm);
    }
    let m = to_float(p)?;
    let norm = m.frobenius();
    let e = jacobi_eigh(&m)?;
    let (mut f, mut g) = (Vec::new(), Vec::new());
    for (k, &lam) in e.values.iter().enumerate() {
        if lam.abs() <= EIGEN_CUTOFF * norm {
            continue;
        }
        let s = FloatSection { n: p.n(), d: p.degree(), coeffs: e.vector(k) }
            .scale(Complex64::new(lam.abs().sqrt(), 0.0));
        if lam > 0.0 {
            f.push(s);
        } else {
            g.push(s);
        }
    }
    let (k, l) = (f.len(), g.len());
    Ok(DistinguishedBasis { n: p.n(), d: p.degree(), f, g, k, l, source_norm: norm })
}

fn check_basis(p: &HermitianForm, basis: &DistinguishedBasis) -> Result<()> {
    if basis.n != p.n() || basis.d != p.degree() {
        return Err(Error::BasisMismatch);
    }
    let tol = 1e-7 * p.frobenius_f().max(f64::MIN_POSITIVE);
    if basis.reexpand().distance_to(p)? > tol {
        return Err(Error::BasisMismatch);
    }
    Ok(())
}

/// The modulus `Σ|f|² + Σ|g|²` of `P` with respect to `basis`.
pub fn modulus(p: &HermitianForm, basis: &DistinguishedBasis) -> Result<FloatForm> {
    check_basis(p, basis)?;
    let all: Vec<FloatSection> = basis.sections().cloned().collect();
    Ok(FloatForm::from_squares(p.n(), p.degree(), &all, &[]))
}

/// Sections `s_j` with `Σ|s_j|² = P`, present iff the coefficient matrix
/// is positive semidefinite (decided exactly).
pub fn sos_decomposition(p: &HermitianForm) -> Result<Option<Vec<FloatSection>>> {
    if !psd_exact(p) {
        return Ok(None);
    }
    if p.is_zero() {
        return Ok(Some(Vec::new()));
    }
    let b = distinguished_basis(p)?;
    Ok(Some(b.f))
}

/// Mix `f_i` and `g_j` hyperbolically: `f' = c·f + s·g`, `g' = s·f + c·g`
/// with `c² − s² = 1`; preserves `|f|² − |g|²`.
pub fn hyperbolic_mix(basis: &DistinguishedBasis, i: usize, j: usize, cosh: f64, sinh: f64) -> Result<DistinguishedBasis> {
    if i >= basis.k || j >= basis.l {
        return Err(Error::Invalid(format!("no pair (f{i}, g{j}) in a basis of signature ({}, {})", basis.k, basis.l)));
    }
    if ((cosh * cosh - sinh * sinh) - 1.0).abs() > 1e-12 * cosh * cosh {
        return Err(Error::Invalid("cosh² − sinh² must equal 1".into()));
    }
    let mut out = basis.clone();
    let (fi, gj) = (&basis.f[i], &basis.g[j]);
    let c = Complex64::new(cosh, 0.0);
    let s = Complex64::new(sinh, 0.0);
    out.f[i] = fi.scale(c).axpy(s, gj);
    out.g[j] = fi.scale(s).axpy(c, gj);
    Ok(out)
}

fn unitary_mix(list: &mut [FloatSection], rng: &mut ChaCha8Rng) {
    if list.len() < 2 {
        if let Some(s) = list.first_mut() {
            let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            *s = s.scale(phase);
        }
        return;
    }
    let a = rng.gen_range(0..list.len());
    let mut b = rng.gen_range(0..list.len() - 1);
    if b >= a {
        b += 1;
    }
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let (c, s) = (Complex64::new(th.cos(), 0.0), Complex64::new(th.sin(), 0.0));
    let (x, y) = (list[a].clone(), list[b].clone());
    // [[c, -s·e^{iψ}], [s, c·e^{iψ}]] is unitary
    list[a] = x.scale(c).axpy(-s * phase, &y);
    list[b] = x.scale(s).axpy(c * phase, &y);
}

/// Seed-deterministic change of distinguished basis: block-unitary
/// rotations, plus hyperbolic `f`/`g` mixing when both blocks are nonempty.
pub fn rebase_distinguished(basis: &DistinguishedBasis, seed: u64) -> DistinguishedBasis {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = basis.clone();
    for _ in 0..6 {
        unitary_mix(&mut out.f, &mut rng);
        unitary_mix(&mut out.g, &mut rng);
        if out.k >= 1 && out.l >= 1 {
            let t: f64 = rng.gen_range(-1.0..1.0);
            let i = rng.gen_range(0..out.k);
            let j = rng.gen_range(0..out.l);
            out = hyperbolic_mix(&out, i, j, t.cosh(), t.sinh()).expect("valid pair");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{norm_power, Sign};
    use crate::monomial::MultiIndex;
    use crate::scalar::GaussRat;
    use crate::section::HoloSection;
    use crate::spectra::signature;

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

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn basis_examples() {
        let sq = HermitianForm::from_squares(&[(Sign::Plus, mono(&[2, 0]))]).unwrap();
        let b = distinguished_basis(&sq).unwrap();
        assert_eq!((b.k, b.l), (1, 0));
        assert!((b.f[0].coeffs[0].norm() - 1.0).abs() < 1e-14);

        let b = distinguished_basis(&circle()).unwrap();
        assert_eq!((b.k, b.l), (2, 1));
        // g spanned by z0 z1 (index 1), with |coefficient|² = 2
        assert!((b.g[0].coeffs[1].norm_sqr() - 2.0).abs() < 1e-12);
        for f in &b.f {
            assert!(f.coeffs[1].norm() < 1e-12);
        }
        let b = distinguished_basis(&norm_power(1, 1).unwrap()).unwrap();
        assert_eq!((b.k, b.l), (2, 0));
        assert!(distinguished_basis(&HermitianForm::zero(1, 1)).is_err());
    }

    #[test]
    fn modulus_examples() {
        let p = circle();
        let b = distinguished_basis(&p).unwrap();
        let m = modulus(&p, &b).unwrap();
        assert!(m.distance_to(&norm_power(1, 2).unwrap()).unwrap() < 1e-8);

        let r = norm_power(1, 3).unwrap();
        let br = distinguished_basis(&r).unwrap();
        assert!(modulus(&r, &br).unwrap().distance_to(&r).unwrap() < 1e-8);

        let neg = HermitianForm::from_squares(&[(Sign::Minus, mono(&[2, 0]))]).unwrap();
        let bn = distinguished_basis(&neg).unwrap();
        let pos = HermitianForm::from_squares(&[(Sign::Plus, mono(&[2, 0]))]).unwrap();
        assert!(modulus(&neg, &bn).unwrap().distance_to(&pos).unwrap() < 1e-12);

        assert!(modulus(&r, &b).is_err());
    }

    #[test]
    fn modulus_identities_on_diagonal() {
        let p = circle();
        let b = distinguished_basis(&p).unwrap();
        let m = modulus(&p, &b).unwrap();
        for v in [[c(1.0, 0.5), c(-0.3, 2.0)], [c(0.2, 0.0), c(0.0, -1.0)]] {
            let pv = p.eval_diag_f(&v).unwrap();
            let mv = m.eval_diag(&v);
            let sf: f64 = b.f.iter().map(|s| s.eval(&v).norm_sqr()).sum();
            let sg: f64 = b.g.iter().map(|s| s.eval(&v).norm_sqr()).sum();
            assert!((mv + pv - 2.0 * sf).abs() < 1e-8);
            assert!((mv - pv - 2.0 * sg).abs() < 1e-8);
        }
    }

    #[test]
    fn sos_examples() {
        let s = sos_decomposition(&norm_power(1, 2).unwrap()).unwrap().unwrap();
        assert_eq!(s.len(), 3);
        let back = FloatForm::from_squares(1, 2, &s, &[]);
        assert!(back.distance_to(&norm_power(1, 2).unwrap()).unwrap() < 1e-8);
        assert!(sos_decomposition(&circle()).unwrap().is_none());
        assert_eq!(sos_decomposition(&HermitianForm::zero(1, 2)).unwrap(), Some(vec![]));
    }

    #[test]
    fn rebase_examples() {
        let p = circle();
        let b = distinguished_basis(&p).unwrap();
        let same = hyperbolic_mix(&b, 0, 0, 1.0, 0.0).unwrap();
        assert_eq!(same.f, b.f);
        assert_eq!(same.g, b.g);
        for seed in 0..5 {
            let r = rebase_distinguished(&b, seed);
            assert_eq!((r.k, r.l), signature(&p));
            assert!(r.reexpand().distance_to(&p).unwrap() <= 1e-7 * p.frobenius_f());
        }
        let h = hyperbolic_mix(&b, 0, 0, 1.25, 0.75).unwrap();
        let v = [c(1.0, 0.0), c(2.0, 0.0)];
        assert!((h.eval_diag(&v) - 9.0).abs() < 1e-7);
        assert!(hyperbolic_mix(&b, 0, 0, 2.0, 0.5).is_err());
    }
}
