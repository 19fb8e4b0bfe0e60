//! Rational curves `ℙ¹ → ℙⁿ`, pullbacks, local bidegree expansions, jet
//! checks and base-divisor factorization on `ℙ¹`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::binary::{binary_div, binary_gcd, dehomogenize};
use crate::error::{Error, Result};
use crate::form::{HermitianForm, Sign};
use crate::monomial::{binomial, MultiIndex};
use crate::scalar::GaussRat;
use crate::section::{add_sparse, HoloSection};

/// `γ = [h_0 : … : h_n]` with binary forms of common degree `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalCurve {
    components: Vec<HoloSection>,
}

impl RationalCurve {
    pub fn new(components: Vec<HoloSection>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::Invalid("curve needs components".into()))?;
        let e = first.degree();
        for c in &components {
            if c.n() != 1 {
                return Err(Error::VariableMismatch(1, c.n()));
            }
            if c.degree() != e {
                return Err(Error::DegreeMismatch(e, c.degree()));
            }
        }
        if components.iter().all(HoloSection::is_zero) {
            return Err(Error::Invalid("curve components are all zero".into()));
        }
        Ok(RationalCurve { components })
    }

    /// The identity `[x : y]` on `ℙ¹`.
    pub fn identity() -> Self {
        RationalCurve { components: vec![HoloSection::var(1, 0), HoloSection::var(1, 1)] }
    }

    pub fn n_target(&self) -> usize {
        self.components.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.components[0].degree()
    }

    pub fn components(&self) -> &[HoloSection] {
        &self.components
    }

    pub fn eval(&self, u: &[GaussRat]) -> Result<Vec<GaussRat>> {
        self.components.iter().map(|c| c.eval(u)).collect()
    }
}

/// Point `[a : b]` of `ℙ¹`, normalized to `[c : 1]` or `[1 : 0]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum P1Point {
    Finite(GaussRat),
    Infinity,
}

impl P1Point {
    pub fn new(a: GaussRat, b: GaussRat) -> Result<Self> {
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::Invalid("[0:0] is not a point".into()));
            }
            return Ok(P1Point::Infinity);
        }
        Ok(P1Point::Finite(&a / &b))
    }

    pub fn coords(&self) -> [GaussRat; 2] {
        match self {
            P1Point::Finite(c) => [c.clone(), GaussRat::one()],
            P1Point::Infinity => [GaussRat::one(), GaussRat::zero()],
        }
    }
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(c) => write!(f, "[{}:1]", c.to_expr_string()),
            P1Point::Infinity => write!(f, "[1:0]"),
        }
    }
}

/// Exact Taylor coefficients `c_{jk}` of `t^j·conj(t)^k` in a local
/// coordinate centered at a point of `ℙ¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct BidegreeExpansion {
    pub center: P1Point,
    pub coeffs: BTreeMap<(u32, u32), GaussRat>,
}

impl BidegreeExpansion {
    pub fn is_real(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(&(j, k), c)| self.coeffs.get(&(k, j)).is_some_and(|t| t.conj() == *c))
    }

    /// Lowest total degree `j + k` with a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(|(j, k)| j + k).min()
    }
}

/// `γ*P`, an exact form of degree `d·e` on `ℙ¹`.
pub fn pullback(p: &HermitianForm, curve: &RationalCurve) -> Result<HermitianForm> {
    if curve.n_target() != p.n() {
        return Err(Error::VariableMismatch(p.n(), curve.n_target()));
    }
    p.compose(curve.components())
}

fn binom(a: u32, b: u32) -> GaussRat {
    GaussRat::from_rat(num_rational::BigRational::from_integer(binomial(a as u64, b as u64).into()))
}

/// Expand `P` at `center`: `(x, y) = (c + t, 1)` in the finite chart,
/// `(1, t)` at infinity.
pub fn local_expansion(p: &HermitianForm, center: &P1Point) -> Result<BidegreeExpansion> {
    if p.n() != 1 {
        return Err(Error::VariableMismatch(1, p.n()));
    }
    let mut coeffs = BTreeMap::new();
    match center {
        P1Point::Infinity => {
            for ((a, b), c) in p.entries() {
                add_sparse(&mut coeffs, (a.get(1), b.get(1)), c);
            }
        }
        P1Point::Finite(x0) => {
            let xc = x0.conj();
            let mut pw: BTreeMap<u32, GaussRat> = BTreeMap::new();
            let mut pwc: BTreeMap<u32, GaussRat> = BTreeMap::new();
            for ((a, b), c) in p.entries() {
                let (n1, n2) = (a.get(0), b.get(0));
                for j in 0..=n1 {
                    let left = &binom(n1, j) * pw.entry(n1 - j).or_insert_with(|| x0.pow(n1 - j));
                    if left.is_zero() {
                        continue;
                    }
                    let lc = &left * c;
                    for k in 0..=n2 {
                        let right = &binom(n2, k) * pwc.entry(n2 - k).or_insert_with(|| xc.pow(n2 - k));
                        add_sparse(&mut coeffs, (j, k), &(&lc * &right));
                    }
                }
            }
        }
    }
    Ok(BidegreeExpansion { center: center.clone(), coeffs })
}

/// Outcome of [`jet_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct JetResult {
    pub pass: bool,
    /// Lowest total order `μ`.
    pub order: u32,
    pub lowest_block: BTreeMap<(u32, u32), GaussRat>,
}

/// Passes iff the lowest-order part is `c·|t|^{2m}` with `c > 0`.
pub fn jet_check(exp: &BidegreeExpansion) -> Result<JetResult> {
    let mu = exp.order().ok_or(Error::ZeroForm)?;
    let block: BTreeMap<(u32, u32), GaussRat> =
        exp.coeffs.iter().filter(|((j, k), _)| j + k == mu).map(|(k, v)| (*k, v.clone())).collect();
    let pass = mu % 2 == 0
        && block.len() == 1
        && block.get(&(mu / 2, mu / 2)).is_some_and(|c| c.is_real() && c.re > num_rational::BigRational::zero());
    Ok(JetResult { pass, order: mu, lowest_block: block })
}

/// `P = |s_D|² ⊗ residual` on `ℙ¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorP1 {
    pub s_d: HoloSection,
    pub residual: HermitianForm,
}

impl DivisorP1 {
    /// Vanishing order of `s_D` at `center`.
    pub fn order_at(&self, center: &P1Point) -> u32 {
        let (poly, k) = dehomogenize(&self.s_d);
        match center {
            P1Point::Infinity => k,
            P1Point::Finite(c) => {
                let shifted = poly.shift(c);
                shifted.coeffs().iter().take_while(|x| x.is_zero()).count() as u32
            }
        }
    }

    /// Rational zeros of `s_D`, including `[1:0]`.
    pub fn rational_zeros(&self) -> Vec<P1Point> {
        let (poly, k) = dehomogenize(&self.s_d);
        let mut out: Vec<P1Point> =
            poly.rational_roots().into_iter().map(|(r, _)| P1Point::Finite(GaussRat::from_rat(r))).collect();
        if k > 0 {
            out.push(P1Point::Infinity);
        }
        out
    }
}

fn divide_form_left(p: &HermitianForm, s: &HoloSection) -> Result<HermitianForm> {
    // divide each column polynomial u_β(z) by s
    let mut cols: BTreeMap<MultiIndex, HoloSection> = BTreeMap::new();
    for ((a, b), c) in p.entries() {
        cols.entry(b.clone())
            .or_insert_with(|| HoloSection::zero(1, p.degree()))
            .add_term(a.clone(), c);
    }
    let mut coeffs = BTreeMap::new();
    for (b, col) in cols {
        let q = binary_div(&col, s)?;
        for (g, c) in q.coeffs() {
            coeffs.insert((g.clone(), b.clone()), c.clone());
        }
    }
    Ok(HermitianForm::from_map_unchecked(1, p.degree(), coeffs))
}

/// Extract the monic gcd `s_D` of the support space and the residual
/// form with `|s_D|² ⊗ residual = P` (checked exactly).
pub fn base_divisor_factor(p: &HermitianForm) -> Result<DivisorP1> {
    if p.n() != 1 {
        return Err(Error::VariableMismatch(1, p.n()));
    }
    let support = p.support_space_basis()?;
    let s_d = binary_gcd(&support);
    let e = s_d.degree();
    let d = p.degree();
    // left division: rows carry holomorphic exponents of degree d - e
    let left = divide_form_left(p, &s_d)?;
    // right division by conj(s_D) on the antiholomorphic side
    let mut rows: BTreeMap<MultiIndex, HoloSection> = BTreeMap::new();
    for ((a, b), c) in left.entries() {
        rows.entry(a.clone()).or_insert_with(|| HoloSection::zero(1, d)).add_term(b.clone(), c);
    }
    let sc = s_d.conj_coeffs();
    let mut coeffs = BTreeMap::new();
    for (a, row) in rows {
        let q = binary_div(&row, &sc)?;
        for (b, c) in q.coeffs() {
            coeffs.insert((a.clone(), b.clone()), c.clone());
        }
    }
    let residual = HermitianForm::from_map_unchecked(1, d - e, coeffs);
    let sq = HermitianForm::from_squares(&[(Sign::Plus, s_d.clone())])?;
    if sq.product(&residual)? != *p || !residual.is_hermitian() {
        return Err(Error::NotDivisible("factorization check failed"));
    }
    Ok(DivisorP1 { s_d, residual })
}

/// Default jet centers: user points, rational zeros of `s_D`, `[0:1]`, `[1:0]`.
pub fn default_centers(user: &[P1Point], divisor: &DivisorP1) -> Vec<P1Point> {
    let mut out: Vec<P1Point> = Vec::new();
    let extra = [P1Point::Finite(GaussRat::zero()), P1Point::Infinity];
    for c in user.iter().cloned().chain(divisor.rational_zeros()).chain(extra) {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CenterCheck {
    pub center: P1Point,
    /// Jet check of the pullback itself.
    pub pullback: JetResult,
    /// Jet check of the residual after removing `|s_D|²`.
    pub residual: JetResult,
}

#[derive(Clone, Debug)]
pub struct CurveScan {
    pub curve_index: usize,
    pub divisor: DivisorP1,
    pub checks: Vec<CenterCheck>,
}

impl CurveScan {
    pub fn first_failure(&self) -> Option<&CenterCheck> {
        self.checks.iter().find(|c| !c.pullback.pass)
    }
}

/// Result of a jet battery. Absence of failures is reported as such, never
/// as a proof of the jet pullback property.
#[derive(Clone, Debug)]
pub struct JppReport {
    pub scans: Vec<CurveScan>,
}

impl JppReport {
    pub fn first_failure(&self) -> Option<(usize, &CenterCheck)> {
        self.scans.iter().find_map(|s| s.first_failure().map(|c| (s.curve_index, c)))
    }

    pub fn no_failure_found(&self) -> bool {
        self.first_failure().is_none()
    }
}

/// Pull back along each curve and jet-check at the default centers.
pub fn jpp_scan(p: &HermitianForm, curves: &[RationalCurve], centers: &[P1Point]) -> Result<JppReport> {
    if curves.is_empty() {
        return Err(Error::Invalid("jpp_scan needs at least one curve".into()));
    }
    let scans = curves
        .iter()
        .enumerate()
        .map(|(i, curve)| {
            let pb = pullback(p, curve)?;
            if pb.is_zero() {
                return Err(Error::Invalid(format!("form vanishes identically on curve {i}")));
            }
            let divisor = base_divisor_factor(&pb)?;
            let checks = default_centers(centers, &divisor)
                .into_iter()
                .map(|c| {
                    Ok(CenterCheck {
                        pullback: jet_check(&local_expansion(&pb, &c)?)?,
                        residual: jet_check(&local_expansion(&divisor.residual, &c)?)?,
                        center: c,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CurveScan { curve_index: i, divisor, checks })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JppReport { scans })
}
