//! Inhomogeneous Hermitian polynomials in affine coordinates, monomial
//! blowup substitutions and squared-monomial factor extraction.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::{mono_exact, HermitianForm};
use crate::monomial::MultiIndex;
use crate::scalar::GaussRat;
use crate::section::{add_sparse, monomial_f};

/// `q = Σ c(α,β) x^α conj(x)^β` with no homogeneity requirement.
#[derive(Clone, PartialEq, Eq)]
pub struct MixedHermPoly {
    n_vars: usize,
    coeffs: BTreeMap<(MultiIndex, MultiIndex), GaussRat>,
}

/// Holomorphic polynomial `Σ c_α x^α` used to build `|f|²` terms.
pub type AffinePoly = BTreeMap<MultiIndex, GaussRat>;

impl MixedHermPoly {
    pub fn zero(n_vars: usize) -> Self {
        MixedHermPoly { n_vars, coeffs: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(n_vars);
        let z = MultiIndex::zeros(n_vars);
        add_sparse(&mut p.coeffs, (z.clone(), z), &GaussRat::from_rat(c));
        p
    }

    /// Checked constructor; rejects non-real coefficient maps.
    pub fn from_entries(
        n_vars: usize,
        entries: impl IntoIterator<Item = ((MultiIndex, MultiIndex), GaussRat)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n_vars);
        for ((a, b), c) in entries {
            if a.len() != n_vars || b.len() != n_vars {
                return Err(Error::LengthMismatch { expected: n_vars, got: a.len().max(b.len()) });
            }
            add_sparse(&mut p.coeffs, (a, b), &c);
        }
        if !p.is_real() {
            return Err(Error::NotHermitian(f64::NAN));
        }
        Ok(p)
    }

    /// `|f|²` for a holomorphic polynomial `f`.
    pub fn abs_sq(n_vars: usize, f: &AffinePoly) -> Result<Self> {
        let mut p = Self::zero(n_vars);
        for (a, ca) in f {
            if a.len() != n_vars {
                return Err(Error::LengthMismatch { expected: n_vars, got: a.len() });
            }
            for (b, cb) in f {
                add_sparse(&mut p.coeffs, (a.clone(), b.clone()), &(ca * &cb.conj()));
            }
        }
        Ok(p)
    }

    /// `|x^γ|²`.
    pub fn monomial_square(gamma: &MultiIndex) -> Self {
        let mut p = Self::zero(gamma.len());
        p.coeffs.insert((gamma.clone(), gamma.clone()), GaussRat::one());
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn entries(&self) -> &BTreeMap<(MultiIndex, MultiIndex), GaussRat> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs
            .iter()
            .all(|((a, b), c)| self.coeffs.get(&(b.clone(), a.clone())).is_some_and(|t| t.conj() == *c))
    }

    fn check_vars(&self, o: &MixedHermPoly) -> Result<()> {
        if self.n_vars != o.n_vars {
            return Err(Error::VariableMismatch(self.n_vars, o.n_vars));
        }
        Ok(())
    }

    pub fn add(&self, o: &MixedHermPoly) -> Result<MixedHermPoly> {
        self.check_vars(o)?;
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            add_sparse(&mut out.coeffs, k.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &MixedHermPoly) -> Result<MixedHermPoly> {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, r: &BigRational) -> MixedHermPoly {
        if r.is_zero() {
            return Self::zero(self.n_vars);
        }
        let coeffs = self.coeffs.iter().map(|(k, c)| (k.clone(), c.scale(r))).collect();
        MixedHermPoly { n_vars: self.n_vars, coeffs }
    }

    pub fn mul(&self, o: &MixedHermPoly) -> Result<MixedHermPoly> {
        self.check_vars(o)?;
        let mut out = Self::zero(self.n_vars);
        for ((a1, b1), c1) in &self.coeffs {
            for ((a2, b2), c2) in &o.coeffs {
                add_sparse(&mut out.coeffs, (a1.add_unchecked(a2), b1.add_unchecked(b2)), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MixedHermPoly {
        let mut acc = Self::constant(self.n_vars, BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same variables");
        }
        acc
    }

    /// Largest total holomorphic and antiholomorphic degrees.
    pub fn bidegree(&self) -> (u32, u32) {
        self.coeffs
            .keys()
            .fold((0, 0), |(p, q), (a, b)| (p.max(a.degree()), q.max(b.degree())))
    }

    /// `q(x, x̄)`, exact and real.
    pub fn eval(&self, x: &[GaussRat]) -> Result<BigRational> {
        if x.len() != self.n_vars {
            return Err(Error::LengthMismatch { expected: self.n_vars, got: x.len() });
        }
        let xc: Vec<GaussRat> = x.iter().map(GaussRat::conj).collect();
        let mut acc = GaussRat::zero();
        for ((a, b), c) in &self.coeffs {
            acc += &(&(c * &mono_exact(a, x)) * &mono_exact(b, &xc));
        }
        Ok(acc.re)
    }

    pub fn eval_f(&self, x: &[Complex64]) -> Result<f64> {
        if x.len() != self.n_vars {
            return Err(Error::LengthMismatch { expected: self.n_vars, got: x.len() });
        }
        let xc: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in &self.coeffs {
            acc += c.to_complex_lossy() * monomial_f(a, x) * monomial_f(b, &xc);
        }
        Ok(acc.re)
    }

    /// `∂/∂x_i`.
    pub fn partial_holo(&self, i: usize) -> MixedHermPoly {
        let mut out = Self::zero(self.n_vars);
        for ((a, b), c) in &self.coeffs {
            let e = a.get(i);
            if e == 0 {
                continue;
            }
            let mut a2 = a.exps().to_vec();
            a2[i] -= 1;
            add_sparse(&mut out.coeffs, (MultiIndex::new(a2), b.clone()), &c.scale(&BigRational::from_integer(e.into())));
        }
        out
    }

    /// `∂/∂x̄_j`.
    pub fn partial_anti(&self, j: usize) -> MixedHermPoly {
        let mut out = Self::zero(self.n_vars);
        for ((a, b), c) in &self.coeffs {
            let e = b.get(j);
            if e == 0 {
                continue;
            }
            let mut b2 = b.exps().to_vec();
            b2[j] -= 1;
            add_sparse(&mut out.coeffs, (a.clone(), MultiIndex::new(b2)), &c.scale(&BigRational::from_integer(e.into())));
        }
        out
    }

    /// `q(x, ȳ)` for independent holomorphic and antiholomorphic points.
    pub fn eval_pair_f(&self, x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
        if x.len() != self.n_vars || y.len() != self.n_vars {
            return Err(Error::LengthMismatch { expected: self.n_vars, got: x.len().min(y.len()) });
        }
        let yc: Vec<Complex64> = y.iter().map(|v| v.conj()).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in &self.coeffs {
            acc += c.to_complex_lossy() * monomial_f(a, x) * monomial_f(b, &yc);
        }
        Ok(acc)
    }

    /// `Some(d)` when every term has bidegree `(d, d)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.coeffs.keys().map(|(a, b)| (a.degree(), b.degree()));
        let (p, q) = it.next().unwrap_or((0, 0));
        (p == q && it.all(|x| x == (p, q))).then_some(p)
    }

    /// Reinterpret as a form on `ℙ^{n_vars - 1}` if bihomogeneous.
    pub fn to_form(&self) -> Result<HermitianForm> {
        if self.n_vars == 0 {
            return Err(Error::Invalid("no variables".into()));
        }
        let d = self.homogeneous_degree().ok_or_else(|| {
            let (p, q) = self.bidegree();
            let low = self.coeffs.keys().map(|(a, b)| a.degree().min(b.degree())).min().unwrap_or(0);
            Error::Inhomogeneous { expected: p.max(q), got: low }
        })?;
        HermitianForm::from_entries(self.n_vars - 1, d, self.coeffs.iter().map(|((a, b), c)| (a.clone(), b.clone(), c.clone())))
    }

    pub fn from_form(p: &HermitianForm) -> Self {
        MixedHermPoly { n_vars: p.n() + 1, coeffs: p.entries().clone() }
    }
}

impl fmt::Debug for MixedHermPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MixedHermPoly[{}]{{", self.n_vars)?;
        for (i, ((a, b), c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}x{:?}: {}", a.exps(), b.exps(), c.to_expr_string())?;
        }
        write!(f, "}}")
    }
}

fn drop_index(a: &MultiIndex, i: usize) -> MultiIndex {
    MultiIndex::new(a.exps().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &e)| e).collect())
}

/// Set `z_i = 1`: `P = |z_i|^{2d} · p(z/z_i)`. Affine coordinates keep the
/// remaining variables in order.
pub fn dehomogenize(p: &HermitianForm, chart: usize) -> Result<MixedHermPoly> {
    if chart > p.n() {
        return Err(Error::ChartOutOfRange { index: chart, vars: p.n() + 1 });
    }
    let mut out = MixedHermPoly::zero(p.n());
    for ((a, b), c) in p.entries() {
        add_sparse(&mut out.coeffs, (drop_index(a, chart), drop_index(b, chart)), c);
    }
    Ok(out)
}

/// Inverse of [`dehomogenize`] at degree `d`.
pub fn homogenize(q: &MixedHermPoly, chart: usize, d: u32) -> Result<HermitianForm> {
    let n = q.n_vars;
    if chart > n {
        return Err(Error::ChartOutOfRange { index: chart, vars: n + 1 });
    }
    let lift = |a: &MultiIndex| -> Result<MultiIndex> {
        let deg = a.degree();
        if deg > d {
            return Err(Error::DegreeMismatch(d, deg));
        }
        let mut e = a.exps().to_vec();
        e.insert(chart, d - deg);
        Ok(MultiIndex::new(e))
    };
    let entries = q.coeffs.iter().map(|((a, b), c)| Ok((lift(a)?, lift(b)?, c.clone()))).collect::<Result<Vec<_>>>()?;
    HermitianForm::from_entries(n, d, entries)
}

/// Monomial map `x_i ↦ y^{m_i}` from `old_vars` into `new_vars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub new_vars: usize,
    pub images: Vec<MultiIndex>,
}

impl MonomialMap {
    pub fn new(new_vars: usize, images: Vec<MultiIndex>) -> Result<Self> {
        for m in &images {
            if m.len() != new_vars {
                return Err(Error::LengthMismatch { expected: new_vars, got: m.len() });
            }
            if m.degree() == 0 {
                return Err(Error::Invalid("substitution monomial must be nonconstant".into()));
            }
        }
        Ok(MonomialMap { new_vars, images })
    }

    pub fn identity(n: usize) -> Self {
        MonomialMap { new_vars: n, images: (0..n).map(|i| MultiIndex::unit(n, i)).collect() }
    }

    fn image(&self, a: &MultiIndex) -> MultiIndex {
        let mut e = vec![0u32; self.new_vars];
        for (m, &k) in self.images.iter().zip(a.exps()) {
            for (slot, &x) in e.iter_mut().zip(m.exps()) {
                *slot += k * x;
            }
        }
        MultiIndex::new(e)
    }

    /// Parse `x1=y1*y2,x2=y2`. Variable indices are 1-based; the letter
    /// prefixes are free but must be consistent within each side.
    pub fn parse(s: &str) -> Result<Self> {
        let mut lhs_prefix: Option<String> = None;
        let mut rhs_prefix: Option<String> = None;
        let mut images: BTreeMap<usize, Vec<(usize, u32)>> = BTreeMap::new();
        let mut max_new = 0;
        let split_var = |v: &str, prefix: &mut Option<String>| -> Result<usize> {
            let v = v.trim();
            let pos = v.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::UndeclaredVariable(v.into()))?;
            let (p, idx) = v.split_at(pos);
            if p.is_empty() || !p.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(Error::UndeclaredVariable(v.into()));
            }
            match prefix {
                Some(q) if q != p => return Err(Error::UndeclaredVariable(v.into())),
                _ => *prefix = Some(p.into()),
            }
            let k: usize = idx.parse().map_err(|_| Error::UndeclaredVariable(v.into()))?;
            if k == 0 {
                return Err(Error::UndeclaredVariable(v.into()));
            }
            Ok(k - 1)
        };
        for part in s.split(',') {
            let (l, r) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected '=' in '{}'", part.trim()) })?;
            let i = split_var(l, &mut lhs_prefix)?;
            let mut factors = Vec::new();
            for f in r.split('*') {
                let (v, e) = match f.split_once('^') {
                    Some((v, e)) => {
                        let e: u32 =
                            e.trim().parse().map_err(|_| Error::Parse { pos: 0, msg: format!("bad exponent '{e}'") })?;
                        (v, e)
                    }
                    None => (f, 1),
                };
                let j = split_var(v, &mut rhs_prefix)?;
                max_new = max_new.max(j + 1);
                factors.push((j, e));
            }
            if images.insert(i, factors).is_some() {
                return Err(Error::Parse { pos: 0, msg: "variable substituted twice".into() });
            }
        }
        let n_old = images.len();
        if images.keys().copied().ne(0..n_old) {
            return Err(Error::Parse { pos: 0, msg: "substitution must cover x1..xn".into() });
        }
        let imgs = images
            .into_values()
            .map(|fs| {
                let mut e = vec![0u32; max_new];
                for (j, k) in fs {
                    e[j] += k;
                }
                MultiIndex::new(e)
            })
            .collect();
        MonomialMap::new(max_new, imgs)
    }

    pub fn to_expr_string(&self, old: &str, new: &str) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let rhs: Vec<String> = m
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| if e == 1 { format!("{new}{}", j + 1) } else { format!("{new}{}^{e}", j + 1) })
                    .collect();
                format!("{old}{}={}", i + 1, rhs.join("*"))
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Apply `x ↦ y^m` to holomorphic exponents and conjugately to the
/// antiholomorphic ones.
pub fn monomial_substitute(q: &MixedHermPoly, map: &MonomialMap) -> Result<MixedHermPoly> {
    if map.images.len() != q.n_vars {
        return Err(Error::VariableMismatch(q.n_vars, map.images.len()));
    }
    let mut out = MixedHermPoly::zero(map.new_vars);
    for ((a, b), c) in &q.coeffs {
        add_sparse(&mut out.coeffs, (map.image(a), map.image(b)), c);
    }
    Ok(out)
}

/// Largest `γ` with `q = |y^γ|² · reduced`.
pub fn factor_monomial_square(q: &MixedHermPoly) -> Result<(MultiIndex, MixedHermPoly)> {
    if q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let gamma = q
        .coeffs
        .keys()
        .map(|(a, b)| MultiIndex::min(a, b))
        .reduce(|x, y| MultiIndex::min(&x, &y))
        .expect("nonzero");
    let mut out = MixedHermPoly::zero(q.n_vars);
    for ((a, b), c) in &q.coeffs {
        let a2 = a.sub(&gamma)?.expect("γ ≤ α");
        let b2 = b.sub(&gamma)?.expect("γ ≤ β");
        out.coeffs.insert((a2, b2), c.clone());
    }
    Ok((gamma, out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlowupStep {
    pub map: MonomialMap,
    /// Polynomial right after substitution.
    pub substituted: MixedHermPoly,
    /// Factor extracted at this step.
    pub gamma: MultiIndex,
    /// Accumulated monomial factor: original pulled back `= |y^Γ|² · reduced`.
    pub cumulative: MultiIndex,
    pub reduced: MixedHermPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeValue {
    pub point: Vec<GaussRat>,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlowupTrace {
    pub initial: MixedHermPoly,
    pub steps: Vec<BlowupStep>,
    pub probes: Vec<ProbeValue>,
}

impl BlowupTrace {
    pub fn final_reduced(&self) -> &MixedHermPoly {
        self.steps.last().map_or(&self.initial, |s| &s.reduced)
    }

    /// Probe points where the final reduced polynomial vanishes.
    pub fn residual_zeros(&self) -> Vec<&ProbeValue> {
        self.probes.iter().filter(|p| p.value.is_zero()).collect()
    }
}

/// Fold substitute-then-factor over `steps` and evaluate the final reduced
/// polynomial at `probes`.
pub fn blowup_chain(q: &MixedHermPoly, steps: &[MonomialMap], probes: &[Vec<GaussRat>]) -> Result<BlowupTrace> {
    let mut cur = q.clone();
    let mut cumulative = MultiIndex::zeros(q.n_vars);
    let mut trace = Vec::with_capacity(steps.len());
    for map in steps {
        let substituted = monomial_substitute(&cur, map)?;
        let (gamma, reduced) = factor_monomial_square(&substituted)?;
        cumulative = map.image(&cumulative).add_unchecked(&gamma);
        trace.push(BlowupStep {
            map: map.clone(),
            substituted,
            gamma,
            cumulative: cumulative.clone(),
            reduced: reduced.clone(),
        });
        cur = reduced;
    }
    let probes = probes
        .iter()
        .map(|p| Ok(ProbeValue { point: p.clone(), value: cur.eval(p)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlowupTrace { initial: q.clone(), steps: trace, probes })
}

/// Parse `"x1=y1*y2,x2=y2 | y1=t1,y2=t1*t2"`.
pub fn parse_chain(s: &str) -> Result<Vec<MonomialMap>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split('|').map(MonomialMap::parse).collect()
}

/// Float grid scan of `q` over the polydisc of the given radius; returns
/// the smallest value seen and where.
pub fn scan_minimum(q: &MixedHermPoly, radius: f64, grid: usize) -> (f64, Vec<Complex64>) {
    let n = q.n_vars;
    let pts: Vec<Complex64> = (0..grid)
        .flat_map(|i| {
            (0..grid).map(move |j| {
                let s = |k: usize| -radius + 2.0 * radius * k as f64 / (grid - 1).max(1) as f64;
                Complex64::new(s(i), s(j))
            })
        })
        .collect();
    let total = pts.len().pow(n as u32);
    let mut best = (f64::INFINITY, vec![Complex64::new(0.0, 0.0); n]);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for mut k in 0..total {
        for xi in x.iter_mut() {
            *xi = pts[k % pts.len()];
            k /= pts.len();
        }
        let v = q.eval_f(&x).unwrap_or(f64::INFINITY);
        if v < best.0 {
            best = (v, x.clone());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{norm_power, Sign};
    use crate::section::HoloSection;
    use proptest::prelude::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    fn m(e: &[u32]) -> MixedHermPoly {
        MixedHermPoly::monomial_square(&mi(e))
    }

    fn diff(a: &[u32], b: &[u32]) -> MixedHermPoly {
        m(a).sub(&m(b)).unwrap()
    }

    fn quartic() -> HermitianForm {
        let mono = |e: &[u32]| HoloSection::monomial(mi(e), GaussRat::one());
        let a = HermitianForm::from_squares(&[(Sign::Plus, mono(&[1, 0, 1])), (Sign::Minus, mono(&[0, 2, 0]))]).unwrap();
        HermitianForm::from_squares(&[(Sign::Plus, mono(&[4, 0, 0]))]).unwrap().add(&a.product(&a).unwrap()).unwrap()
    }

    /// |x1|^8 + (|x1|^2 - |x2|^4)^2
    fn p0() -> MixedHermPoly {
        m(&[4, 0]).add(&diff(&[1, 0], &[0, 2]).pow(2)).unwrap()
    }

    #[test]
    fn dehomogenize_examples() {
        assert_eq!(dehomogenize(&quartic(), 2).unwrap(), p0());
        let one_plus = MixedHermPoly::constant(1, BigRational::one()).add(&m(&[1])).unwrap();
        assert_eq!(dehomogenize(&norm_power(1, 1).unwrap(), 1).unwrap(), one_plus);
        let z0z1 = HermitianForm::from_squares(&[(Sign::Plus, HoloSection::monomial(mi(&[1, 1]), GaussRat::one()))]).unwrap();
        assert_eq!(dehomogenize(&z0z1, 0).unwrap(), m(&[1]));
        assert!(matches!(dehomogenize(&z0z1, 2), Err(Error::ChartOutOfRange { .. })));
        assert_eq!(homogenize(&p0(), 2, 4).unwrap(), quartic());
    }

    #[test]
    fn substitute_examples() {
        let map = MonomialMap::parse("x1=y1*y2,x2=y2").unwrap();
        let expect = m(&[1, 1]).pow(4).add(&diff(&[1, 1], &[0, 2]).pow(2)).unwrap();
        assert_eq!(monomial_substitute(&p0(), &map).unwrap(), expect);
        assert_eq!(monomial_substitute(&p0(), &MonomialMap::identity(2)).unwrap(), p0());
        let t = MonomialMap::parse("x1=t1*t2").unwrap();
        assert_eq!(monomial_substitute(&m(&[1]), &t).unwrap(), m(&[1, 1]));
        assert!(MonomialMap::parse("x1=1").is_err());
        assert!(MonomialMap::parse("x2=y1").is_err());
        assert!(MonomialMap::parse("x1=y1,z2=y1").is_err());
        assert_eq!(MonomialMap::parse("x1=y1^2*y2,x2=y2").unwrap().images, vec![mi(&[2, 1]), mi(&[0, 1])]);
    }

    #[test]
    fn factor_and_chain_replay() {
        let steps = parse_chain("x1=y1*y2,x2=y2 | y1=t1,y2=t1*t2").unwrap();
        let probes = vec![vec![GaussRat::zero(), GaussRat::one()], vec![GaussRat::one(), GaussRat::one()]];
        let tr = blowup_chain(&p0(), &steps, &probes).unwrap();
        // p1 = |y2|^4 (|y1^2 y2|^4 + (|y1|^2 - |y2|^2)^2)
        let r1 = m(&[2, 1]).pow(2).add(&diff(&[1, 0], &[0, 1]).pow(2)).unwrap();
        assert_eq!(tr.steps[0].gamma, mi(&[0, 2]));
        assert_eq!(tr.steps[0].reduced, r1);
        assert_eq!(m(&[0, 2]).mul(&r1).unwrap(), tr.steps[0].substituted);
        // p2 = |t1^2 t2|^4 (|t1^2 t2|^4 + (1 - |t2|^2)^2)
        let r2 = m(&[2, 1]).pow(2).add(&diff(&[0, 0], &[0, 1]).pow(2)).unwrap();
        assert_eq!(tr.steps[1].reduced, r2);
        assert_eq!(tr.steps[1].gamma, mi(&[2, 0]));
        assert_eq!(tr.steps[1].cumulative, mi(&[4, 2]));
        let full = monomial_substitute(&monomial_substitute(&p0(), &steps[0]).unwrap(), &steps[1]).unwrap();
        assert_eq!(m(&[4, 2]).mul(&r2).unwrap(), full);
        assert_eq!(tr.residual_zeros().len(), 1);
        assert_eq!(tr.probes[1].value, BigRational::one());
    }

    #[test]
    fn chain_trivial_cases() {
        let tr = blowup_chain(&p0(), &[], &[]).unwrap();
        assert!(tr.steps.is_empty());
        assert_eq!(tr.final_reduced(), &p0());
        let q = MixedHermPoly::constant(2, BigRational::one()).add(&m(&[1, 0])).unwrap();
        let steps = parse_chain("x1=y1*y2,x2=y2|y1=t1,y2=t1*t2").unwrap();
        let probes: Vec<Vec<GaussRat>> = (0..3).map(|k| vec![GaussRat::int(k), GaussRat::frac(1, k + 1)]).collect();
        let tr = blowup_chain(&q, &steps, &probes).unwrap();
        assert!(tr.steps.iter().all(|s| s.gamma.degree() == 0));
        assert!(tr.probes.iter().all(|p| p.value > BigRational::zero()));
        let (g, r) = factor_monomial_square(&q).unwrap();
        assert_eq!(g, mi(&[0, 0]));
        assert_eq!(r, q);
        assert!(factor_monomial_square(&MixedHermPoly::zero(2)).is_err());
        let (v, at) = scan_minimum(tr.final_reduced(), 1.0, 5);
        assert!(v >= 1.0 - 1e-12 && at.len() == 2);
    }

    #[test]
    fn to_form_detects_inhomogeneous() {
        let q = MixedHermPoly::constant(2, BigRational::one()).add(&m(&[1, 0])).unwrap();
        assert!(matches!(q.to_form(), Err(Error::Inhomogeneous { .. })));
        assert_eq!(MixedHermPoly::from_form(&quartic()).to_form().unwrap(), quartic());
        let mut f = AffinePoly::new();
        f.insert(mi(&[1, 0]), GaussRat::one());
        f.insert(mi(&[0, 1]), GaussRat::i());
        let sq = MixedHermPoly::abs_sq(2, &f).unwrap();
        assert!(sq.is_real());
        assert_eq!(sq.eval(&[GaussRat::one(), GaussRat::i()]).unwrap(), BigRational::zero());
    }

    fn small_gr() -> impl Strategy<Value = GaussRat> {
        (-5i64..=5, -5i64..=5, 1i64..=4).prop_map(|(a, b, d)| GaussRat::new(crate::scalar::rat(a, d), crate::scalar::rat(b, d)))
    }

    proptest! {
        #![proptest_config(crate::testutil::prop_config(0xb10))]

        #[test]
        fn substitution_is_homomorphism(y1 in small_gr(), y2 in small_gr(), e in 0u32..3) {
            let map = MonomialMap::new(2, vec![mi(&[1 + e, 1]), mi(&[0, 1])]).unwrap();
            let sub = monomial_substitute(&p0(), &map).unwrap();
            let x1 = &y1.pow(1 + e) * &y2;
            let lhs = sub.eval(&[y1.clone(), y2.clone()]).unwrap();
            let rhs = p0().eval(&[x1, y2.clone()]).unwrap();
            prop_assert_eq!(lhs, rhs);
            let (g, red) = factor_monomial_square(&sub).unwrap();
            prop_assert!(red.is_real());
            prop_assert_eq!(MixedHermPoly::monomial_square(&g).mul(&red).unwrap(), sub);
        }
    }
}
