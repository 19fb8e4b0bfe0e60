//! Gaussian rationals: exact complex scalars `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact scalar `re + im·i` over the rationals.
///
/// Both parts are kept in lowest terms by `BigRational`, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Always `"num/den"`, even for integers.
pub fn rat_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_to_f64(r: &BigRational) -> Result<f64> {
    match r.to_f64() {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(Error::FloatOverflow(rat_string(r))),
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn rat_approx(x: f64, max_den: i64) -> BigRational {
    if !x.is_finite() {
        return BigRational::zero();
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let p2 = a.saturating_mul(p1).saturating_add(p0);
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return BigRational::zero();
    }
    let r = rat(p1, q1);
    if neg {
        -r
    } else {
        r
    }
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_rat(rat(num, den))
    }

    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|a|² = a·conj(a)`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussRat::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussRat { re: &self.re * r, im: &self.im * r }
    }

    pub fn to_complex(&self) -> Result<Complex64> {
        Ok(Complex64::new(rat_to_f64(&self.re)?, rat_to_f64(&self.im)?))
    }

    /// Lossy conversion; non-finite parts become `NaN`.
    pub fn to_complex_lossy(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn approx(z: Complex64, max_den: i64) -> Self {
        GaussRat { re: rat_approx(z.re, max_den), im: rat_approx(z.im, max_den) }
    }

    /// Text form accepted by the expression parser, e.g. `3/2`, `-i`, `(1/2-3i)`.
    pub fn to_expr_string(&self) -> String {
        fn r(x: &BigRational) -> String {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        }
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => r(&self.re),
            (true, false) => {
                if self.im.is_one() {
                    "i".into()
                } else if (-self.im.clone()).is_one() {
                    "-i".into()
                } else {
                    format!("{}*i", r(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                let mag = self.im.abs();
                let imag = if mag.is_one() { "i".to_string() } else { format!("{}*i", r(&mag)) };
                format!("({}{}{})", r(&self.re), sign, imag)
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl From<BigRational> for GaussRat {
    fn from(r: BigRational) -> Self {
        GaussRat::from_rat(r)
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::int(n)
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::from_rat(&self.re * &o.re);
        }
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    /// Panics on a zero divisor; use [`GaussRat::inv`] for a checked path.
    fn div(self, o: &GaussRat) -> GaussRat {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRat {
            type Output = GaussRat;
            fn $m(self, o: GaussRat) -> GaussRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, o: &GaussRat) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, o: &GaussRat) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, o: &GaussRat) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GaussRat {
        GaussRat::new(rat(a, b), rat(c, d))
    }

    #[test]
    fn canonical_reduction() {
        assert_eq!(g(2, 4, 3, 9), g(1, 2, 1, 3));
        assert_eq!(rat_string(&rat(6, 3)), "2/1");
        assert_eq!(rat_string(&rat(-3, 6)), "-1/2");
    }

    #[test]
    fn norm_is_real_nonnegative() {
        let a = g(3, 1, -4, 1);
        let p = &a * &a.conj();
        assert!(p.is_real());
        assert_eq!(p.re, rat_int(25));
        assert_eq!(a.norm_sqr(), rat_int(25));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(GaussRat::zero().inv().is_err());
    }

    #[test]
    fn approximations() {
        assert_eq!(rat_approx(0.75, 100), rat(3, 4));
        assert_eq!(rat_approx(-1.0, 100), rat_int(-1));
        assert_eq!(rat_approx(1.0 / 3.0 + 1e-12, 100), rat(1, 3));
    }

    #[test]
    fn expr_strings() {
        assert_eq!(g(3, 2, 0, 1).to_expr_string(), "3/2");
        assert_eq!(g(0, 1, -1, 1).to_expr_string(), "-i");
        assert_eq!(g(1, 2, -3, 1).to_expr_string(), "(1/2-3*i)");
    }

    fn arb_g() -> impl Strategy<Value = GaussRat> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| g(a, b, c, d))
    }

    proptest! {
        #![proptest_config(crate::testutil::prop_config(0x5ca1))]

        #[test]
        fn exact_field_identities(a in arb_g(), b in arb_g()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b) / &b, a.clone());
            }
            prop_assert_eq!(a.conj().conj(), a.clone());
            let n = &a * &a.conj();
            prop_assert!(n.is_real() && !n.re.is_negative());
        }
    }
}
