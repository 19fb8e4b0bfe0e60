//! Text syntax for Hermitian forms and holomorphic polynomials.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := ['-'] factor ('*' factor)*
//! factor := rational | 'sq' '(' holo ')' | '(' expr ')' ['^' uint]
//!         | 'normK' '(' uint ')' | 'norm' '(' uint ')'
//! holo   := hterm (('+'|'-') hterm)*
//! hterm  := ['-'] hfactor ('*' hfactor)*
//! hfactor:= rational | 'i' | var ['^' uint] | '(' holo ')' ['^' uint]
//! ```
//! Forms use variables `z0 … zn`; the variable count is the largest index
//! plus one.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::blowup::{AffinePoly, MixedHermPoly};
use crate::error::{Error, Result};
use crate::form::HermitianForm;
use crate::monomial::MultiIndex;
use crate::scalar::GaussRat;
use crate::section::{add_sparse, HoloSection};
use crate::spectra::exact_squares;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            out.push((pos, Tok::Ident(chars[start..k].iter().map(|x| x.1).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            k += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

/// How identifiers map to variable indices.
#[derive(Clone, Debug)]
enum Vars {
    /// `z0, z1, …`
    Indexed(&'static str),
    Named(Vec<String>),
}

impl Vars {
    fn lookup(&self, name: &str) -> Option<usize> {
        match self {
            Vars::Indexed(prefix) => {
                let rest = name.strip_prefix(prefix)?;
                if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) || (rest.len() > 1 && rest.starts_with('0')) {
                    return None;
                }
                rest.parse().ok()
            }
            Vars::Named(names) => names.iter().position(|n| n == name),
        }
    }
}

const KEYWORDS: [&str; 4] = ["sq", "norm", "normK", "i"];

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
    vars: Vars,
    n_vars: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn uint(&mut self) -> Result<u32> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let v = u32::try_from(n.clone()).or_else(|_| self.err("exponent too large"))?;
                self.at += 1;
                Ok(v)
            }
            _ => self.err("expected a nonnegative integer"),
        }
    }

    fn rational(&mut self) -> Result<BigRational> {
        let Some(Tok::Num(n)) = self.peek().cloned() else { return self.err("expected a number") };
        self.at += 1;
        if self.peek() == Some(&Tok::Sym('/')) {
            self.at += 1;
            let Some(Tok::Num(d)) = self.peek().cloned() else { return self.err("expected a denominator") };
            if d.is_zero() {
                return self.err("zero denominator");
            }
            self.at += 1;
            return Ok(BigRational::new(n, d));
        }
        Ok(BigRational::from_integer(n))
    }

    fn optional_power(&mut self) -> Result<u32> {
        if self.eat('^') {
            self.uint()
        } else {
            Ok(1)
        }
    }

    // ---- Hermitian level ----

    fn expr(&mut self) -> Result<MixedHermPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MixedHermPoly> {
        let neg = self.eat('-');
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(if neg { acc.scale(&-BigRational::one()) } else { acc })
    }

    fn factor(&mut self) -> Result<MixedHermPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(_)) => Ok(MixedHermPoly::constant(self.n_vars, self.rational()?)),
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner.pow(self.optional_power()?))
            }
            Some(Tok::Ident(id)) if id == "sq" => {
                self.at += 1;
                self.expect('(')?;
                let h = self.holo()?;
                self.expect(')')?;
                MixedHermPoly::abs_sq(self.n_vars, &h)
            }
            Some(Tok::Ident(id)) if id == "normK" || id == "norm" => {
                self.at += 1;
                self.expect('(')?;
                let k = self.uint()?;
                self.expect(')')?;
                let mut base = MixedHermPoly::zero(self.n_vars);
                for i in 0..self.n_vars {
                    base = base.add(&MixedHermPoly::monomial_square(&MultiIndex::unit(self.n_vars, i)))?;
                }
                Ok(base.pow(k))
            }
            Some(Tok::Ident(id)) => {
                if self.vars.lookup(&id).is_some() || id == "i" {
                    self.err(format!("'{id}' must appear inside sq(...)"))
                } else {
                    Err(Error::UndeclaredVariable(id))
                }
            }
            _ => self.err("expected sq(...), normK(...), a number or '('"),
        }
    }

    // ---- holomorphic level ----

    fn holo(&mut self) -> Result<AffinePoly> {
        let mut acc = self.hterm()?;
        loop {
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Ok(acc);
            };
            let t = self.hterm()?;
            let s = GaussRat::int(sign);
            for (k, c) in t {
                add_sparse(&mut acc, k, &(&s * &c));
            }
        }
    }

    fn hterm(&mut self) -> Result<AffinePoly> {
        let neg = self.eat('-');
        let mut acc = self.hfactor()?;
        while self.eat('*') {
            acc = poly_mul(&acc, &self.hfactor()?);
        }
        if neg {
            acc = acc.into_iter().map(|(k, c)| (k, -c)).collect();
        }
        Ok(acc)
    }

    fn hfactor(&mut self) -> Result<AffinePoly> {
        let zero = MultiIndex::zeros(self.n_vars);
        match self.peek().cloned() {
            Some(Tok::Num(_)) => {
                let r = self.rational()?;
                Ok(poly_const(zero, GaussRat::from_rat(r)))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.holo()?;
                self.expect(')')?;
                let e = self.optional_power()?;
                Ok(poly_pow(&inner, e, self.n_vars))
            }
            Some(Tok::Ident(id)) if id == "i" => {
                self.at += 1;
                Ok(poly_const(zero, GaussRat::i()))
            }
            Some(Tok::Ident(id)) => match self.vars.lookup(&id) {
                Some(v) if v < self.n_vars && !KEYWORDS.contains(&id.as_str()) => {
                    self.at += 1;
                    let e = self.optional_power()?;
                    let mut exps = vec![0; self.n_vars];
                    exps[v] = e;
                    Ok(poly_const(MultiIndex::new(exps), GaussRat::one()))
                }
                _ => Err(Error::UndeclaredVariable(id)),
            },
            _ => self.err("expected a variable, number, 'i' or '('"),
        }
    }
}

fn poly_const(k: MultiIndex, c: GaussRat) -> AffinePoly {
    let mut m = BTreeMap::new();
    add_sparse(&mut m, k, &c);
    m
}

fn poly_mul(a: &AffinePoly, b: &AffinePoly) -> AffinePoly {
    let mut out = BTreeMap::new();
    for (x, c) in a {
        for (y, d) in b {
            add_sparse(&mut out, x.add_unchecked(y), &(c * d));
        }
    }
    out
}

fn poly_pow(a: &AffinePoly, e: u32, n: usize) -> AffinePoly {
    let mut acc = poly_const(MultiIndex::zeros(n), GaussRat::one());
    for _ in 0..e {
        acc = poly_mul(&acc, a);
    }
    acc
}

fn run<T>(text: &str, vars: Vars, n_vars: usize, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, at: 0, end: text.len(), vars, n_vars };
    let out = f(&mut p)?;
    if p.at != toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

fn count_indexed(text: &str, prefix: &'static str) -> Result<usize> {
    let vars = Vars::Indexed(prefix);
    let mut n = 0;
    for (_, t) in tokenize(text)? {
        if let Tok::Ident(id) = t {
            if let Some(i) = vars.lookup(&id) {
                n = n.max(i + 1);
            }
        }
    }
    Ok(n)
}

/// Parse to an inhomogeneous Hermitian polynomial over `z0 … zn`.
pub fn parse_mixed(text: &str) -> Result<MixedHermPoly> {
    let n = count_indexed(text, "z")?;
    run(text, Vars::Indexed("z"), n, |p| p.expr())
}

/// Parse and check bihomogeneity.
pub fn parse_form(text: &str) -> Result<HermitianForm> {
    let q = parse_mixed(text)?;
    if q.n_vars() == 0 {
        return Err(Error::Parse { pos: 0, msg: "expression has no variables".into() });
    }
    q.to_form()
}

/// Homogeneous polynomial in the named variables, e.g. `x^2 + x*y`.
pub fn parse_section(text: &str, names: &[&str]) -> Result<HoloSection> {
    let n = names.len();
    let vars = Vars::Named(names.iter().map(|s| s.to_string()).collect());
    let poly = run(text, vars, n, |p| p.holo())?;
    let mut degs = poly.keys().map(MultiIndex::degree);
    let d = degs.next().unwrap_or(0);
    if let Some(e) = degs.find(|&e| e != d) {
        return Err(Error::Inhomogeneous { expected: d, got: e });
    }
    HoloSection::from_terms(n - 1, d, poly)
}

/// A Gaussian-rational constant such as `-3/2` or `(1/2+3*i)`.
pub fn parse_scalar(text: &str) -> Result<GaussRat> {
    let poly = run(text, Vars::Named(Vec::new()), 0, |p| p.holo())?;
    Ok(poly.into_values().next().unwrap_or_else(GaussRat::zero))
}

/// Comma-separated coordinates, e.g. `1/100, 1/10, 1`.
pub fn parse_point(text: &str) -> Result<Vec<GaussRat>> {
    text.split(',').map(parse_scalar).collect()
}

/// `Σ w_i sq(s_i)` from the exact diagonalization; `parse_form` inverts it.
pub fn print_form(p: &HermitianForm) -> String {
    let sq = exact_squares(p);
    let mut out = String::new();
    for (k, (w, s)) in sq.terms.iter().enumerate() {
        let neg = w < &BigRational::zero();
        let mag = if neg { -w.clone() } else { w.clone() };
        if k > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        if !mag.is_one() {
            out.push_str(&GaussRat::from_rat(mag).to_expr_string());
            out.push('*');
        }
        out.push_str(&format!("sq({})", s.to_expr_string()));
    }
    // keep the variable count and degree when the top variable is unused
    let last_used = p.entries().keys().any(|(a, b)| a.get(p.n()) > 0 || b.get(p.n()) > 0);
    if !last_used {
        let pad = format!("0*sq(z{}^{})", p.n(), p.degree());
        if out.is_empty() {
            return pad;
        }
        out.push_str(" + ");
        out.push_str(&pad);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{norm_power, Sign};
    use crate::scalar::rat;
    use crate::spectra::signature;
    use proptest::prelude::*;

    fn mono(a: &[u32]) -> HoloSection {
        HoloSection::monomial(MultiIndex::new(a.to_vec()), GaussRat::one())
    }

    #[test]
    fn sample_expressions() {
        let d = parse_form("sq(z0^4) + (sq(z0*z2) - sq(z1^2))^2").unwrap();
        assert_eq!((d.n(), d.degree()), (2, 4));
        assert_eq!(signature(&d), (3, 1));
        let c = parse_form("(sq(z0) - sq(z1))^2").unwrap();
        let a = HermitianForm::from_squares(&[(Sign::Plus, mono(&[1, 0])), (Sign::Minus, mono(&[0, 1]))]).unwrap();
        assert_eq!(c, a.product(&a).unwrap());
        let q = parse_form("sq(z0^2) + sq(z1^2) - 3/2*sq(z0*z1)").unwrap();
        assert!(q.is_diagonal());
        assert_eq!(q.entry(&MultiIndex::new(vec![1, 1]), &MultiIndex::new(vec![1, 1])), GaussRat::frac(-3, 2));
        assert_eq!(parse_form("normK(2)*sq(z1)").unwrap(), norm_power(1, 2).unwrap().product(&HermitianForm::from_squares(&[(Sign::Plus, mono(&[0, 1]))]).unwrap()).unwrap());
        assert!(parse_form("norm(1)").is_err());
    }

    #[test]
    fn complex_and_errors() {
        let f = parse_form("sq(z0 + (1/2-3*i)*z1) - 2*sq(i*z1)").unwrap();
        assert!(f.is_hermitian());
        assert!(matches!(parse_form("sq(z0) + sq(z1^2)"), Err(Error::Inhomogeneous { .. })));
        assert!(matches!(parse_form("sq(w)"), Err(Error::UndeclaredVariable(_))));
        assert!(matches!(parse_form("sq(z0) + foo"), Err(Error::UndeclaredVariable(_))));
        match parse_form("sq(z0) +* sq(z1)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_form("sq(z0"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_form("sq(z0)$"), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(parse_form("1/0*sq(z0)"), Err(Error::Parse { .. })));
        assert!(parse_form("3").is_err());
        assert!(matches!(parse_form("sq(z01)"), Err(Error::UndeclaredVariable(_))));
    }

    #[test]
    fn scalars_and_points() {
        assert_eq!(parse_scalar("-3/2").unwrap(), GaussRat::frac(-3, 2));
        assert_eq!(parse_scalar("(1/2+3*i)").unwrap(), GaussRat::new(rat(1, 2), rat(3, 1)));
        assert_eq!(parse_scalar("0").unwrap(), GaussRat::zero());
        assert!(parse_scalar("x").is_err());
        assert_eq!(parse_point("1/100, 1/10,1").unwrap().len(), 3);
    }

    #[test]
    fn sections() {
        let s = parse_section("x*y + y^2", &["x", "y"]).unwrap();
        assert_eq!(s.degree(), 2);
        assert_eq!(s.coeff(&MultiIndex::new(vec![0, 2])), GaussRat::one());
        assert!(matches!(parse_section("x + y^2", &["x", "y"]), Err(Error::Inhomogeneous { .. })));
        assert!(matches!(parse_section("z", &["x", "y"]), Err(Error::UndeclaredVariable(_))));
        let t = parse_section("(x - 2*i*y)^2", &["x", "y"]).unwrap();
        assert_eq!(t.coeff(&MultiIndex::new(vec![0, 2])), GaussRat::int(-4));
    }

    #[test]
    fn print_round_trip_examples() {
        for src in ["sq(z0^4) + (sq(z0*z2) - sq(z1^2))^2", "(sq(z0) - sq(z1))^2", "sq(z0^2) + sq(z1^2) - 3/2*sq(z0*z1)", "sq(z0 + (1/2-3*i)*z1)"] {
            let f = parse_form(src).unwrap();
            assert_eq!(parse_form(&print_form(&f)).unwrap(), f, "{src}");
        }
        let pad = HermitianForm::from_squares(&[(Sign::Plus, mono(&[1, 0, 0]))]).unwrap();
        assert_eq!(parse_form(&print_form(&pad)).unwrap(), pad);
    }

    fn arb_section(n: usize, d: u32) -> impl Strategy<Value = HoloSection> {
        let basis = crate::monomial::MonomialBasis::new(n, d);
        let len = basis.len();
        proptest::collection::vec((-4i64..=4, -2i64..=2, 1i64..=3), len).prop_map(move |cs| {
            let v: Vec<GaussRat> = cs.iter().map(|&(a, b, q)| GaussRat::new(rat(a, q), rat(b, q))).collect();
            HoloSection::from_dense(&basis, &v)
        })
    }

    proptest! {
        #![proptest_config(crate::testutil::prop_config(0xe4))]

        #[test]
        fn parse_print_round_trip(s1 in arb_section(2, 2), s2 in arb_section(2, 2), w in -3i64..=3) {
            prop_assume!(!s1.is_zero() || !s2.is_zero());
            let p = HermitianForm::from_weighted_squares(&[(rat(1, 1), s1), (rat(w, 2), s2)]).unwrap();
            let text = print_form(&p);
            prop_assert_eq!(parse_form(&text).unwrap(), p);
        }
    }
}
