//! Univariate polynomials over the Gaussian rationals and binary forms on
//! `ℙ¹` (gcd, exact division, rational roots).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::scalar::GaussRat;
use crate::section::HoloSection;

/// Dense coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<GaussRat>);

impl UniPoly {
    pub fn new(mut c: Vec<GaussRat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussRat> {
        self.0.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                UniPoly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly(vec![]);
        }
        let mut out = vec![GaussRat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().unwrap().inv()?;
        let mut rem = self.0.clone();
        if self.0.len() <= dd {
            return Ok((UniPoly(vec![]), self.clone()));
        }
        let mut q = vec![GaussRat::zero(); self.0.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                rem[i + j] -= &(&c * dj);
            }
            q[i] = c;
        }
        Ok((UniPoly::new(q), UniPoly::new(rem)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Shift the variable: `p(x + c)`.
    pub fn shift(&self, c: &GaussRat) -> UniPoly {
        // Horner in the shifted basis
        let mut out = UniPoly(vec![]);
        let lin = UniPoly::new(vec![c.clone(), GaussRat::one()]);
        for coef in self.0.iter().rev() {
            out = out.mul(&lin);
            let mut v = out.0.clone();
            if v.is_empty() {
                v.push(GaussRat::zero());
            }
            v[0] += coef;
            out = UniPoly::new(v);
        }
        out
    }

    /// Roots in `ℚ` (with multiplicity) when all coefficients are real.
    /// Complex-coefficient polynomials, and those whose integer
    /// coefficients are too large to factor by trial division, give an
    /// empty list.
    pub fn rational_roots(&self) -> Vec<(BigRational, u32)> {
        if self.0.iter().any(|c| !c.is_real()) || self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let mut p = self.clone();
        let mut out = Vec::new();
        let mut zero_mult = 0u32;
        while p.0.first().is_some_and(|c| c.is_zero()) {
            p.0.remove(0);
            zero_mult += 1;
        }
        if zero_mult > 0 {
            out.push((BigRational::zero(), zero_mult));
        }
        if p.degree().unwrap_or(0) == 0 {
            return out;
        }
        // integer coefficients
        let lcm = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.re.denom()));
        let ints: Vec<BigInt> = p.0.iter().map(|c| (&c.re * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let (Some(dp), Some(dq)) = (small_divisors(&a0), small_divisors(&an)) else {
            return out;
        };
        let mut cands: Vec<BigRational> = Vec::new();
        for num in &dp {
            for den in &dq {
                for s in [1i64, -1] {
                    let r = BigRational::new(BigInt::from(*num) * s, BigInt::from(*den));
                    if !cands.contains(&r) {
                        cands.push(r);
                    }
                }
            }
        }
        cands.sort();
        for r in cands {
            let root = UniPoly::new(vec![GaussRat::from_rat(-r.clone()), GaussRat::one()]);
            let mut mult = 0;
            loop {
                let (q, rem) = p.divrem(&root).expect("nonzero");
                if !rem.is_zero() {
                    break;
                }
                p = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((r, mult));
            }
        }
        out
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    Some(out)
}

/// Decomposition of a nonzero binary form `s(x, y) = y^k · f(x, y)` with
/// `f(x, 1)` of full degree `d − k`.
pub fn dehomogenize(s: &HoloSection) -> (UniPoly, u32) {
    assert_eq!(s.n(), 1, "binary form expected");
    let d = s.degree();
    let mut c = vec![GaussRat::zero(); d as usize + 1];
    for (a, v) in s.coeffs() {
        c[a.get(0) as usize] = v.clone();
    }
    let p = UniPoly::new(c);
    let k = match p.degree() {
        Some(deg) => d - deg as u32,
        None => d,
    };
    (p, k)
}

/// Homogenize `p(x)` to a binary form of degree `d ≥ deg p`.
pub fn homogenize(p: &UniPoly, d: u32) -> Result<HoloSection> {
    if let Some(deg) = p.degree() {
        if deg as u32 > d {
            return Err(Error::DegreeMismatch(deg as u32, d));
        }
    }
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (MultiIndex::new(vec![i as u32, d - i as u32]), c.clone()));
    HoloSection::from_terms(1, d, terms)
}

/// Monic gcd of binary forms, tracking the multiplicity at `[1:0]`
/// separately. The gcd of an empty or all-zero family is `1`.
pub fn binary_gcd(sections: &[HoloSection]) -> HoloSection {
    let nonzero: Vec<_> = sections.iter().filter(|s| !s.is_zero()).collect();
    if nonzero.is_empty() {
        return HoloSection::constant(1, GaussRat::one());
    }
    let mut g = UniPoly(vec![]);
    let mut kmin = u32::MAX;
    for s in &nonzero {
        let (p, k) = dehomogenize(s);
        kmin = kmin.min(k);
        g = g.gcd(&p);
    }
    let deg = g.degree().unwrap_or(0) as u32;
    let core = homogenize(&g, deg).expect("degree fits");
    let ypow = HoloSection::monomial(MultiIndex::new(vec![0, kmin]), GaussRat::one());
    core.mul(&ypow).expect("binary")
}

/// Exact quotient `a / b` of binary forms.
pub fn binary_div(a: &HoloSection, b: &HoloSection) -> Result<HoloSection> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if b.degree() > a.degree() {
        return Err(Error::NotDivisible("divisor degree exceeds dividend"));
    }
    let qd = a.degree() - b.degree();
    if a.is_zero() {
        return Ok(HoloSection::zero(1, qd));
    }
    let (pa, _) = dehomogenize(a);
    let (pb, _) = dehomogenize(b);
    let (q, r) = pa.divrem(&pb)?;
    if !r.is_zero() {
        return Err(Error::NotDivisible("nonzero remainder"));
    }
    let out = homogenize(&q, qd).map_err(|_| Error::NotDivisible("multiplicity at [1:0]"))?;
    if out.mul(b)? != *a {
        return Err(Error::NotDivisible("multiplicity at [1:0]"));
    }
    Ok(out)
}
