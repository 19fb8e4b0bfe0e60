//! Multi-indices and the graded lexicographic monomial basis of
//! homogeneous polynomials of degree `d` in `n + 1` variables.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector of a monomial `z^α`.
///
/// Ordered by total degree, then lexicographically *descending*, so that
/// among degree-2 monomials in two variables `z0² < z0z1 < z1²`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zeros(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// `e_i` of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    fn check_len(&self, other: &MultiIndex) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_len(other)?;
        Ok(MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// Componentwise difference, `None` when any component would go negative.
    pub fn sub(&self, other: &MultiIndex) -> Result<Option<MultiIndex>> {
        self.check_len(other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex))
    }

    pub(crate) fn add_unchecked(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn min(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `α!` as an exact integer.
    pub fn factorial(&self) -> num_bigint::BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    Add,
    Subtract,
}

/// `add` or `subtract` two multi-indices of equal length.
pub fn multiindex_combine(a: &MultiIndex, b: &MultiIndex, mode: CombineMode) -> Result<Option<MultiIndex>> {
    match mode {
        CombineMode::Add => a.add(b).map(Some),
        CombineMode::Subtract => a.sub(b),
    }
}

pub(crate) fn factorial(k: u32) -> num_bigint::BigInt {
    (1..=k).map(num_bigint::BigInt::from).product()
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

/// `C(a, b)` in `u128`; `0` when `b > a`.
pub fn binomial(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a - i) as u128 / (i + 1) as u128;
    }
    r
}

/// All degree-`d` monomials in `n + 1` variables, graded lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: u32,
    elems: Vec<MultiIndex>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: u32) -> Self {
        let mut elems = Vec::with_capacity(binomial((n as u64) + d as u64, n as u64) as usize);
        let mut cur = vec![0u32; n + 1];
        fill(&mut cur, 0, d, &mut elems);
        MonomialBasis { n, d, elems }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[MultiIndex] {
        &self.elems
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.elems.iter()
    }

    /// Position of `a` in the basis, computed combinatorially.
    pub fn rank(&self, a: &MultiIndex) -> Option<usize> {
        if a.len() != self.n + 1 || a.degree() != self.d {
            return None;
        }
        let mut rank: u128 = 0;
        let mut rem = self.d as u64;
        for i in 0..self.n {
            let slots_after = (self.n - i) as u64;
            let ai = a.get(i) as u64;
            // every v > a_i at position i precedes a
            for v in (ai + 1)..=rem {
                rank += binomial(rem - v + slots_after - 1, slots_after - 1);
            }
            rem -= ai;
        }
        Some(rank as usize)
    }

    pub fn unrank(&self, mut idx: usize) -> Option<MultiIndex> {
        if idx >= self.len() {
            return None;
        }
        let mut out = vec![0u32; self.n + 1];
        let mut rem = self.d as u64;
        for (i, slot) in out.iter_mut().enumerate().take(self.n) {
            let slots_after = (self.n - i) as u64;
            let mut v = rem;
            loop {
                let block = binomial(rem - v + slots_after - 1, slots_after - 1) as usize;
                if idx < block {
                    break;
                }
                idx -= block;
                v -= 1;
            }
            *slot = v as u32;
            rem -= v;
        }
        out[self.n] = rem as u32;
        Some(MultiIndex(out))
    }
}

fn fill(cur: &mut Vec<u32>, pos: usize, rem: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = rem;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for v in (0..=rem).rev() {
        cur[pos] = v;
        fill(cur, pos + 1, rem - v, out);
    }
    cur[pos] = 0;
}

/// Enumerate the degree-`d` basis of `n + 1` variables.
pub fn basis_enumerate(n: i64, d: i64) -> Result<MonomialBasis> {
    if n < 0 {
        return Err(Error::Negative("n"));
    }
    if d < 0 {
        return Err(Error::Negative("d"));
    }
    Ok(MonomialBasis::new(n as usize, d as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn small_enumerations() {
        let b = basis_enumerate(1, 2).unwrap();
        assert_eq!(b.elements(), &[mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);
        assert_eq!(basis_enumerate(2, 4).unwrap().len(), 15);
        assert_eq!(basis_enumerate(0, 5).unwrap().elements(), &[mi(&[5])]);
        assert!(basis_enumerate(-1, 2).is_err());
        assert!(basis_enumerate(1, -2).is_err());
    }

    #[test]
    fn cardinality_and_rank_roundtrip() {
        for n in 0..=4usize {
            for d in 0..=8u32 {
                let b = MonomialBasis::new(n, d);
                assert_eq!(b.len() as u128, binomial((n as u64) + d as u64, n as u64));
                for (i, a) in b.iter().enumerate() {
                    assert_eq!(b.rank(a), Some(i));
                    assert_eq!(b.unrank(i).as_ref(), Some(a));
                }
                let mut sorted = b.elements().to_vec();
                sorted.sort();
                assert_eq!(sorted, b.elements());
            }
        }
    }

    #[test]
    fn combine() {
        let add = multiindex_combine(&mi(&[2, 0]), &mi(&[0, 2]), CombineMode::Add).unwrap();
        assert_eq!(add, Some(mi(&[2, 2])));
        let sub = multiindex_combine(&mi(&[2, 1]), &mi(&[1, 1]), CombineMode::Subtract).unwrap();
        assert_eq!(sub, Some(mi(&[1, 0])));
        let neg = multiindex_combine(&mi(&[1, 0]), &mi(&[0, 1]), CombineMode::Subtract).unwrap();
        assert_eq!(neg, None);
        assert!(multiindex_combine(&mi(&[1, 0]), &mi(&[1]), CombineMode::Add).is_err());
    }
}
