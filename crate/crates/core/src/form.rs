//! Hermitian algebraic functions on `ℙⁿ`:
//! `P(v, w̄) = Σ C(α,β) v^α conj(w)^β` with a Hermitian coefficient matrix
//! over the degree-`d` monomials.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monomial::{MonomialBasis, MultiIndex};
use crate::scalar::GaussRat;
use crate::section::{add_sparse, independent_rows, monomial_f, HoloSection, PowerCache};

/// Sign of a squared-norm term in [`HermitianForm::from_squares`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn scalar(self) -> GaussRat {
        match self {
            Sign::Plus => GaussRat::one(),
            Sign::Minus => GaussRat::int(-1),
        }
    }
}

/// Exact bihomogeneous form of bidegree `(d, d)` in `n + 1` variables.
///
/// The sparse coefficient map is the canonical representation: the
/// functions `z^α conj(z)^β` are linearly independent, so two forms are
/// equal as functions iff their maps are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct HermitianForm {
    n: usize,
    d: u32,
    coeffs: BTreeMap<(MultiIndex, MultiIndex), GaussRat>,
}

impl HermitianForm {
    pub fn zero(n: usize, d: u32) -> Self {
        HermitianForm { n, d, coeffs: BTreeMap::new() }
    }

    /// The constant form `1` (degree 0).
    pub fn unit(n: usize) -> Self {
        let z = MultiIndex::zeros(n + 1);
        let mut coeffs = BTreeMap::new();
        coeffs.insert((z.clone(), z), GaussRat::one());
        HermitianForm { n, d: 0, coeffs }
    }

    /// Build from explicit entries, checking homogeneity and Hermitian
    /// symmetry. Repeated keys accumulate.
    pub fn from_entries(
        n: usize,
        d: u32,
        entries: impl IntoIterator<Item = (MultiIndex, MultiIndex, GaussRat)>,
    ) -> Result<Self> {
        let mut f = Self::zero(n, d);
        for (a, b, c) in entries {
            for x in [&a, &b] {
                if x.len() != n + 1 {
                    return Err(Error::LengthMismatch { expected: n + 1, got: x.len() });
                }
                if x.degree() != d {
                    return Err(Error::Inhomogeneous { expected: d, got: x.degree() });
                }
            }
            add_sparse(&mut f.coeffs, (a, b), &c);
        }
        if !f.is_hermitian() {
            return Err(Error::NotHermitian(f64::NAN));
        }
        Ok(f)
    }

    pub(crate) fn from_map_unchecked(n: usize, d: u32, coeffs: BTreeMap<(MultiIndex, MultiIndex), GaussRat>) -> Self {
        HermitianForm { n, d, coeffs }
    }

    /// `Σ sign·|s|²`, with `C(α,β) = Σ sign·s_α·conj(s_β)`.
    pub fn from_squares(terms: &[(Sign, HoloSection)]) -> Result<Self> {
        let weighted: Vec<_> = terms.iter().map(|(s, h)| (s.scalar().re, h.clone())).collect();
        Self::from_weighted_squares(&weighted)
    }

    /// `Σ w·|s|²` with rational weights.
    pub fn from_weighted_squares(terms: &[(BigRational, HoloSection)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Invalid("no terms".into()))?;
        let (n, d) = (first.1.n(), first.1.degree());
        let mut f = Self::zero(n, d);
        for (w, s) in terms {
            if s.n() != n {
                return Err(Error::VariableMismatch(n, s.n()));
            }
            if s.degree() != d {
                return Err(Error::DegreeMismatch(d, s.degree()));
            }
            f.add_weighted_square(w, s);
        }
        Ok(f)
    }

    pub(crate) fn add_weighted_square(&mut self, w: &BigRational, s: &HoloSection) {
        for (a, x) in s.coeffs() {
            let xw = x.scale(w);
            for (b, y) in s.coeffs() {
                add_sparse(&mut self.coeffs, (a.clone(), b.clone()), &(&xw * &y.conj()));
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<(MultiIndex, MultiIndex), GaussRat> {
        &self.coeffs
    }

    pub fn entry(&self, a: &MultiIndex, b: &MultiIndex) -> GaussRat {
        self.coeffs.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.n, self.d)
    }

    pub fn is_hermitian(&self) -> bool {
        self.coeffs.iter().all(|((a, b), c)| {
            self.coeffs.get(&(b.clone(), a.clone())).map(|t| t.conj() == *c).unwrap_or(false)
        })
    }

    /// True when only `α = β` entries are stored.
    pub fn is_diagonal(&self) -> bool {
        self.coeffs.keys().all(|(a, b)| a == b)
    }

    /// Dense exact matrix over the full monomial basis.
    pub fn dense(&self) -> (MonomialBasis, Vec<Vec<GaussRat>>) {
        let basis = self.basis();
        let k = basis.len();
        let mut m = vec![vec![GaussRat::zero(); k]; k];
        for ((a, b), c) in &self.coeffs {
            let i = basis.rank(a).expect("homogeneous key");
            let j = basis.rank(b).expect("homogeneous key");
            m[i][j] = c.clone();
        }
        (basis, m)
    }

    fn check_same_n(&self, o: &HermitianForm) -> Result<()> {
        if self.n != o.n {
            return Err(Error::VariableMismatch(self.n, o.n));
        }
        Ok(())
    }

    pub fn add(&self, o: &HermitianForm) -> Result<HermitianForm> {
        self.check_same_n(o)?;
        if self.d != o.d {
            return Err(Error::DegreeMismatch(self.d, o.d));
        }
        let mut f = self.clone();
        for (k, c) in &o.coeffs {
            add_sparse(&mut f.coeffs, k.clone(), c);
        }
        Ok(f)
    }

    pub fn sub(&self, o: &HermitianForm) -> Result<HermitianForm> {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, r: &BigRational) -> HermitianForm {
        if r.is_zero() {
            return Self::zero(self.n, self.d);
        }
        HermitianForm {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.scale(r))).collect(),
        }
    }

    /// Tensor product `P ⊗ Q`; evaluation is multiplicative.
    pub fn product(&self, o: &HermitianForm) -> Result<HermitianForm> {
        self.check_same_n(o)?;
        let mut coeffs = BTreeMap::new();
        for ((a, b), x) in &self.coeffs {
            for ((a2, b2), y) in &o.coeffs {
                add_sparse(&mut coeffs, (a.add_unchecked(a2), b.add_unchecked(b2)), &(x * y));
            }
        }
        Ok(HermitianForm { n: self.n, d: self.d + o.d, coeffs })
    }

    pub fn pow(&self, e: u32) -> HermitianForm {
        let mut acc = Self::unit(self.n);
        for _ in 0..e {
            acc = acc.product(self).expect("same n");
        }
        acc
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.n + 1 {
            return Err(Error::LengthMismatch { expected: self.n + 1, got: len });
        }
        Ok(())
    }

    /// `Σ C(α,β) v^α conj(w)^β`, exactly.
    pub fn eval_pair(&self, v: &[GaussRat], w: &[GaussRat]) -> Result<GaussRat> {
        self.check_point(v.len())?;
        self.check_point(w.len())?;
        let wc: Vec<GaussRat> = w.iter().map(GaussRat::conj).collect();
        let mut pv: BTreeMap<&MultiIndex, GaussRat> = BTreeMap::new();
        let mut pw: BTreeMap<&MultiIndex, GaussRat> = BTreeMap::new();
        let mut acc = GaussRat::zero();
        for ((a, b), c) in &self.coeffs {
            let x = pv.entry(a).or_insert_with(|| mono_exact(a, v)).clone();
            let y = pw.entry(b).or_insert_with(|| mono_exact(b, &wc)).clone();
            acc += &(&(c * &x) * &y);
        }
        Ok(acc)
    }

    /// Real value `P(v, v̄)`.
    pub fn eval_diag(&self, v: &[GaussRat]) -> Result<BigRational> {
        Ok(self.eval_pair(v, v)?.re)
    }

    pub fn eval_pair_f(&self, v: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        self.check_point(v.len())?;
        self.check_point(w.len())?;
        let wc: Vec<Complex64> = w.iter().map(|x| x.conj()).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in &self.coeffs {
            acc += c.to_complex_lossy() * monomial_f(a, v) * monomial_f(b, &wc);
        }
        Ok(acc)
    }

    pub fn eval_diag_f(&self, v: &[Complex64]) -> Result<f64> {
        Ok(self.eval_pair_f(v, v)?.re)
    }

    /// Column sections `u_β = Σ_α C(α,β) z^α` reduced to an independent
    /// set. Their span is the support space `V_P`.
    pub fn support_space_basis(&self) -> Result<Vec<HoloSection>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let basis = self.basis();
        let mut cols: BTreeMap<&MultiIndex, HoloSection> = BTreeMap::new();
        for ((a, b), c) in &self.coeffs {
            cols.entry(b)
                .or_insert_with(|| HoloSection::zero(self.n, self.d))
                .add_term(a.clone(), c);
        }
        let sections: Vec<HoloSection> = cols.into_values().filter(|s| !s.is_zero()).collect();
        let rows: Vec<Vec<GaussRat>> = sections.iter().map(|s| s.to_dense(&basis)).collect();
        Ok(independent_rows(&rows).into_iter().map(|i| sections[i].clone()).collect())
    }

    /// Exact `N×N` G-curvature matrix `[P(v_i, v̄_j)]`.
    pub fn gcurvature(&self, points: &[Vec<GaussRat>]) -> Result<Vec<Vec<GaussRat>>> {
        if points.is_empty() {
            return Err(Error::Invalid("gcurvature needs at least one point".into()));
        }
        points
            .iter()
            .map(|v| points.iter().map(|w| self.eval_pair(v, w)).collect())
            .collect()
    }

    pub fn gcurvature_f(&self, points: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
        if points.is_empty() {
            return Err(Error::Invalid("gcurvature needs at least one point".into()));
        }
        points
            .iter()
            .map(|v| points.iter().map(|w| self.eval_pair_f(v, w)).collect())
            .collect()
    }

    /// Pull back along `z_i ↦ h_i(u)`; the result has degree `d·deg h`.
    pub fn compose(&self, h: &[HoloSection]) -> Result<HermitianForm> {
        self.check_point(h.len())?;
        let m = h[0].n();
        let e = h[0].degree();
        for hi in h {
            if hi.n() != m {
                return Err(Error::VariableMismatch(m, hi.n()));
            }
            if hi.degree() != e {
                return Err(Error::DegreeMismatch(e, hi.degree()));
            }
        }
        let mut cache = PowerCache::new(h);
        let mut coeffs = BTreeMap::new();
        for ((a, b), c) in &self.coeffs {
            let sa = cache.monomial(a);
            let sb = cache.monomial(b);
            for (x, cx) in sa.coeffs() {
                let cxc = cx * c;
                for (y, cy) in sb.coeffs() {
                    add_sparse(&mut coeffs, (x.clone(), y.clone()), &(&cxc * &cy.conj()));
                }
            }
        }
        Ok(HermitianForm { n: m, d: self.d * e, coeffs })
    }

    /// Frobenius norm of the coefficient matrix, in floating point.
    pub fn frobenius_f(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.to_complex_lossy().norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub(crate) fn mono_exact(a: &MultiIndex, v: &[GaussRat]) -> GaussRat {
    let mut t = GaussRat::one();
    for (x, &e) in v.iter().zip(a.exps()) {
        if e > 0 {
            t *= &x.pow(e);
        }
    }
    t
}

/// `(Σ |z_i|²)^m`: diagonal with entry `m!/α!` at `α`.
pub fn norm_power(n: usize, m: i64) -> Result<HermitianForm> {
    if m <= 0 {
        return Err(Error::Invalid(format!("norm_power exponent must be >= 1, got {m}")));
    }
    let m = m as u32;
    let basis = MonomialBasis::new(n, m);
    let mf = crate::monomial::factorial(m);
    let mut coeffs = BTreeMap::new();
    for a in basis.iter() {
        let c = BigRational::new(mf.clone(), a.factorial());
        coeffs.insert((a.clone(), a.clone()), GaussRat::from_rat(c));
    }
    Ok(HermitianForm { n, d: m, coeffs })
}

impl fmt::Debug for HermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HermitianForm[n={}, d={}] {{", self.n, self.d)?;
        for ((a, b), c) in &self.coeffs {
            writeln!(f, "  {a:?} {b:?}: {c}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn mono(a: &[u32]) -> HoloSection {
        HoloSection::monomial(MultiIndex::new(a.to_vec()), GaussRat::one())
    }

    fn pt(v: &[i64]) -> Vec<GaussRat> {
        v.iter().map(|&x| GaussRat::int(x)).collect()
    }

    pub(crate) fn circle() -> HermitianForm {
        HermitianForm::from_squares(&[
            (Sign::Plus, mono(&[2, 0])),
            (Sign::Plus, mono(&[0, 2])),
            (Sign::Minus, mono(&[1, 1])),
            (Sign::Minus, mono(&[1, 1])),
        ])
        .unwrap()
    }

    #[test]
    fn from_squares_examples() {
        let f = HermitianForm::from_squares(&[(Sign::Plus, mono(&[2, 0])), (Sign::Minus, mono(&[0, 2]))]).unwrap();
        assert_eq!(f.entry(&[2, 0].into(), &[2, 0].into()), GaussRat::int(1));
        assert_eq!(f.entry(&[0, 2].into(), &[0, 2].into()), GaussRat::int(-1));
        let c = circle();
        assert!(c.is_diagonal());
        let diag: Vec<_> = c.basis().iter().map(|a| c.entry(a, a)).collect();
        assert_eq!(diag, vec![GaussRat::int(1), GaussRat::int(-2), GaussRat::int(1)]);
        assert!(HermitianForm::from_squares(&[(Sign::Plus, mono(&[2, 0])), (Sign::Plus, mono(&[1, 0]))]).is_err());
        assert!(HermitianForm::from_squares(&[(Sign::Plus, mono(&[1, 0])), (Sign::Plus, mono(&[1, 0, 0]))]).is_err());
    }

    #[test]
    fn eval_examples() {
        let c = circle();
        assert_eq!(c.eval_pair(&pt(&[1, 1]), &pt(&[1, 1])).unwrap(), GaussRat::zero());
        assert_eq!(c.eval_pair(&pt(&[1, 0]), &pt(&[1, 0])).unwrap(), GaussRat::one());
        let r = norm_power(1, 1).unwrap();
        assert_eq!(r.eval_pair(&pt(&[1, 2]), &pt(&[3, 4])).unwrap(), GaussRat::int(11));
        assert!(r.eval_pair(&pt(&[1, 2, 3]), &pt(&[3, 4])).is_err());
    }

    #[test]
    fn product_examples() {
        let a = HermitianForm::from_squares(&[(Sign::Plus, mono(&[1, 0]))]).unwrap();
        let b = HermitianForm::from_squares(&[(Sign::Plus, mono(&[0, 1]))]).unwrap();
        let ab = HermitianForm::from_squares(&[(Sign::Plus, mono(&[1, 1]))]).unwrap();
        assert_eq!(a.product(&b).unwrap(), ab);

        let p = HermitianForm::from_weighted_squares(&[
            (rat(1, 1), mono(&[2, 0])),
            (rat(1, 1), mono(&[0, 2])),
            (rat(-3, 2), mono(&[1, 1])),
        ])
        .unwrap();
        let q = p.product(&norm_power(1, 1).unwrap()).unwrap();
        let diag: Vec<_> = q.basis().iter().map(|a| q.entry(a, a)).collect();
        assert_eq!(diag, vec![GaussRat::int(1), GaussRat::frac(-1, 2), GaussRat::frac(-1, 2), GaussRat::int(1)]);
        assert!(q.is_diagonal() && q.is_hermitian());
        assert_eq!(p.product(&HermitianForm::unit(1)).unwrap(), p);
        assert!(p.product(&HermitianForm::unit(2)).is_err());
    }

    #[test]
    fn norm_power_examples() {
        let r = norm_power(1, 1).unwrap();
        assert_eq!(r.entries().len(), 2);
        let r2 = norm_power(1, 2).unwrap();
        let diag: Vec<_> = r2.basis().iter().map(|a| r2.entry(a, a)).collect();
        assert_eq!(diag, vec![GaussRat::int(1), GaussRat::int(2), GaussRat::int(1)]);
        let r22 = norm_power(2, 2).unwrap();
        for a in r22.basis().iter() {
            let mixed = a.exps().iter().all(|&e| e < 2);
            assert_eq!(r22.entry(a, a), GaussRat::int(if mixed { 2 } else { 1 }));
        }
        assert_eq!(r22.entries().len(), 6);
        assert!(norm_power(1, 0).is_err());
        // agrees with repeated products
        assert_eq!(norm_power(2, 3).unwrap(), norm_power(2, 1).unwrap().pow(3));
    }

    #[test]
    fn support_space_examples() {
        let s = HermitianForm::from_squares(&[(Sign::Plus, mono(&[2, 0]))]).unwrap();
        assert_eq!(s.support_space_basis().unwrap(), vec![mono(&[2, 0])]);
        assert_eq!(circle().support_space_basis().unwrap().len(), 3);
        assert!(HermitianForm::zero(1, 2).support_space_basis().is_err());
    }

    #[test]
    fn gcurvature_examples() {
        let r = norm_power(1, 1).unwrap();
        let g = r.gcurvature(&[pt(&[1, 0])]).unwrap();
        assert_eq!(g, vec![vec![GaussRat::one()]]);
        let g = r.gcurvature(&[pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        assert_eq!(g, vec![vec![GaussRat::one(), GaussRat::zero()], vec![GaussRat::zero(), GaussRat::one()]]);
        let g = r.gcurvature(&[pt(&[1, 0]), pt(&[2, 0])]).unwrap();
        let det = &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0]);
        assert_eq!(g[1][1], GaussRat::int(4));
        assert!(det.is_zero());
        assert!(r.gcurvature(&[pt(&[1, 0, 0])]).is_err());
    }

    #[test]
    fn from_entries_rejects_non_hermitian() {
        let a: MultiIndex = [1, 0].into();
        let b: MultiIndex = [0, 1].into();
        assert!(HermitianForm::from_entries(1, 1, [(a.clone(), b.clone(), GaussRat::i())]).is_err());
        let ok = HermitianForm::from_entries(1, 1, [(a.clone(), b.clone(), GaussRat::i()), (b, a, -GaussRat::i())]);
        assert!(ok.unwrap().is_hermitian());
    }
}
