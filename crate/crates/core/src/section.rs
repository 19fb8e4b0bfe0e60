//! Homogeneous holomorphic polynomials: sections of `O(d)` on `ℙⁿ`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monomial::{MonomialBasis, MultiIndex};
use crate::scalar::GaussRat;

/// Sparse homogeneous polynomial of degree `d` in `z0..zn` with exact
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct HoloSection {
    n: usize,
    d: u32,
    coeffs: BTreeMap<MultiIndex, GaussRat>,
}

impl HoloSection {
    pub fn zero(n: usize, d: u32) -> Self {
        HoloSection { n, d, coeffs: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: GaussRat) -> Self {
        Self::monomial(MultiIndex::zeros(n + 1), c)
    }

    pub fn monomial(a: MultiIndex, c: GaussRat) -> Self {
        let n = a.len() - 1;
        let d = a.degree();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(a, c);
        }
        HoloSection { n, d, coeffs }
    }

    /// The coordinate `z_i`.
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(n + 1, i), GaussRat::one())
    }

    /// Build from terms, rejecting inhomogeneous or wrong-length exponents.
    pub fn from_terms(n: usize, d: u32, terms: impl IntoIterator<Item = (MultiIndex, GaussRat)>) -> Result<Self> {
        let mut s = Self::zero(n, d);
        for (a, c) in terms {
            if a.len() != n + 1 {
                return Err(Error::LengthMismatch { expected: n + 1, got: a.len() });
            }
            if a.degree() != d {
                return Err(Error::Inhomogeneous { expected: d, got: a.degree() });
            }
            s.add_term(a, &c);
        }
        Ok(s)
    }

    pub(crate) fn add_term(&mut self, a: MultiIndex, c: &GaussRat) {
        add_sparse(&mut self.coeffs, a, c);
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

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, GaussRat> {
        &self.coeffs
    }

    pub fn coeff(&self, a: &MultiIndex) -> GaussRat {
        self.coeffs.get(a).cloned().unwrap_or_else(GaussRat::zero)
    }

    /// Dense coefficient vector over the degree-`d` monomial basis.
    pub fn to_dense(&self, basis: &MonomialBasis) -> Vec<GaussRat> {
        basis.iter().map(|a| self.coeff(a)).collect()
    }

    pub fn from_dense(basis: &MonomialBasis, v: &[GaussRat]) -> Self {
        let mut s = Self::zero(basis.n(), basis.degree());
        for (a, c) in basis.iter().zip(v) {
            if !c.is_zero() {
                s.coeffs.insert(a.clone(), c.clone());
            }
        }
        s
    }

    fn check_same(&self, o: &HoloSection) -> Result<()> {
        if self.n != o.n {
            return Err(Error::VariableMismatch(self.n, o.n));
        }
        if self.d != o.d {
            return Err(Error::DegreeMismatch(self.d, o.d));
        }
        Ok(())
    }

    pub fn add(&self, o: &HoloSection) -> Result<HoloSection> {
        self.check_same(o)?;
        let mut s = self.clone();
        for (a, c) in &o.coeffs {
            s.add_term(a.clone(), c);
        }
        Ok(s)
    }

    pub fn sub(&self, o: &HoloSection) -> Result<HoloSection> {
        self.add(&o.scale(&-GaussRat::one()))
    }

    pub fn scale(&self, c: &GaussRat) -> HoloSection {
        if c.is_zero() {
            return Self::zero(self.n, self.d);
        }
        HoloSection {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, o: &HoloSection) -> Result<HoloSection> {
        if self.n != o.n {
            return Err(Error::VariableMismatch(self.n, o.n));
        }
        let mut s = Self::zero(self.n, self.d + o.d);
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                s.add_term(a.add_unchecked(b), &(x * y));
            }
        }
        Ok(s)
    }

    pub fn pow(&self, e: u32) -> HoloSection {
        let mut acc = Self::constant(self.n, GaussRat::one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.n + 1 {
            return Err(Error::LengthMismatch { expected: self.n + 1, got: len });
        }
        Ok(())
    }

    pub fn eval(&self, v: &[GaussRat]) -> Result<GaussRat> {
        self.check_point(v.len())?;
        let mut acc = GaussRat::zero();
        for (a, c) in &self.coeffs {
            let mut t = c.clone();
            for (x, &e) in v.iter().zip(a.exps()) {
                if e > 0 {
                    t *= &x.pow(e);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn eval_f(&self, v: &[Complex64]) -> Result<Complex64> {
        self.check_point(v.len())?;
        Ok(self
            .coeffs
            .iter()
            .map(|(a, c)| c.to_complex_lossy() * monomial_f(a, v))
            .sum())
    }

    /// Substitute `z_i ↦ h_i`; all `h_i` must share variable count and degree.
    pub fn compose(&self, h: &[HoloSection]) -> Result<HoloSection> {
        self.check_point(h.len())?;
        let (m, e) = (h[0].n, h[0].d);
        for hi in h {
            if hi.n != m {
                return Err(Error::VariableMismatch(m, hi.n));
            }
            if hi.d != e {
                return Err(Error::DegreeMismatch(e, hi.d));
            }
        }
        let mut cache = PowerCache::new(h);
        let mut out = Self::zero(m, self.d * e);
        for (a, c) in &self.coeffs {
            let t = cache.monomial(a).scale(c);
            for (b, y) in t.coeffs {
                out.add_term(b, &y);
            }
        }
        Ok(out)
    }

    /// Coefficientwise conjugate (the section `z ↦ conj(s(conj z))`).
    pub fn conj_coeffs(&self) -> HoloSection {
        HoloSection {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), c.conj())).collect(),
        }
    }

    /// Expression text, e.g. `3/2*z0^2 - i*z0*z1`.
    pub fn to_expr_string(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (a, c)) in self.coeffs.iter().enumerate() {
            let mono = monomial_string(a);
            let (neg, mag) = if c.is_real() && c.re < num_rational::BigRational::zero() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            match (mag.is_one(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&mag.to_expr_string()),
                (false, false) => {
                    out.push_str(&mag.to_expr_string());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

/// `map[key] += c`, dropping entries that cancel to zero.
pub(crate) fn add_sparse<K: Ord>(map: &mut BTreeMap<K, GaussRat>, key: K, c: &GaussRat) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn monomial_f(a: &MultiIndex, v: &[Complex64]) -> Complex64 {
    let mut t = Complex64::new(1.0, 0.0);
    for (x, &e) in v.iter().zip(a.exps()) {
        if e > 0 {
            t *= x.powu(e);
        }
    }
    t
}

pub(crate) fn monomial_string(a: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (i, &e) in a.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("z{i}")),
            _ => parts.push(format!("z{i}^{e}")),
        }
    }
    parts.join("*")
}

/// Memoized powers `h_i^k` and monomials `h^α` for repeated substitution.
pub(crate) struct PowerCache<'a> {
    h: &'a [HoloSection],
    powers: Vec<Vec<HoloSection>>,
    monos: BTreeMap<MultiIndex, HoloSection>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(h: &'a [HoloSection]) -> Self {
        let one = HoloSection::constant(h[0].n, GaussRat::one());
        PowerCache { h, powers: vec![vec![one]; h.len()], monos: BTreeMap::new() }
    }

    fn power(&mut self, i: usize, k: u32) -> &HoloSection {
        while self.powers[i].len() <= k as usize {
            let next = self.powers[i].last().unwrap().mul(&self.h[i]).expect("same n");
            self.powers[i].push(next);
        }
        &self.powers[i][k as usize]
    }

    pub(crate) fn monomial(&mut self, a: &MultiIndex) -> HoloSection {
        if let Some(s) = self.monos.get(a) {
            return s.clone();
        }
        let mut acc = HoloSection::constant(self.h[0].n, GaussRat::one());
        for (i, &e) in a.exps().iter().enumerate() {
            if e > 0 {
                let p = self.power(i, e).clone();
                acc = acc.mul(&p).expect("same n");
            }
        }
        self.monos.insert(a.clone(), acc.clone());
        acc
    }
}

impl fmt::Debug for HoloSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HoloSection[n={}, d={}]({})", self.n, self.d, self.to_expr_string())
    }
}

/// Reduced row-echelon form over the Gaussian rationals. Returns the
/// indices of a maximal linearly independent subset of `rows` (greedy in
/// input order) and the rank.
pub fn independent_rows(rows: &[Vec<GaussRat>]) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<GaussRat>)> = Vec::new();
    let mut keep = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (piv, e) in &echelon {
            if !r[*piv].is_zero() {
                let f = r[*piv].clone();
                for (x, y) in r.iter_mut().zip(e) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        if let Some(piv) = r.iter().position(|x| !x.is_zero()) {
            let inv = r[piv].inv().expect("nonzero pivot");
            for x in r.iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            echelon.push((piv, r));
            keep.push(idx);
        }
    }
    keep
}

pub fn exact_rank(rows: &[Vec<GaussRat>]) -> usize {
    independent_rows(rows).len()
}
