//! Scalar backends.
//!
//! [`GaussianRational`] is the exact backend used for every verification.
//! `Complex64` is the approximate backend, used only by the spectral finder
//! behind [`crate::constructions::isometry_decompose`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field operations needed by the dense matrix code.
///
/// Methods take references so exact backends can avoid cloning big integers.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conjugate(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn recip(&self) -> Option<Self>;
}

/// Complex number with arbitrary-precision rational real and imaginary parts.
///
/// Both parts are kept reduced with a positive denominator (guaranteed by
/// `BigRational`), so derived equality is exact value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(v)))
    }

    /// `p/q` as a real scalar. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `(p_re/q_re) + (p_im/q_im)·i`. Panics on a zero denominator.
    pub fn complex(p_re: i64, q_re: i64, p_im: i64, q_im: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(p_re), BigInt::from(q_re)),
            BigRational::new(BigInt::from(p_im), BigInt::from(q_im)),
        )
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// |z|², exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// Canonical wire form: `"p/q"` for reals, `"p/q+r/si"` / `"p/q-r/si"` otherwise.
    pub fn to_wire(&self) -> String {
        let re = format!("{}/{}", self.re.numer(), self.re.denom());
        if self.im.is_zero() {
            return re;
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        let im = self.im.abs();
        format!("{re}{sign}{}/{}i", im.numer(), im.denom())
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    // Ratio<BigInt>::to_f64 handles large numerators/denominators without overflow.
    r.to_f64().unwrap_or(f64::NAN)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts `p`, `p/q`, `p/q+r/si`, `p/q-r/si`, `p/q+-r/si`, `r/si`, `i`, `-i`.
    /// Unreduced fractions are reduced.
    fn from_str(raw: &str) -> Result<Self> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&s)?));
        };
        // Split at the last sign that is not leading and not part of "+-".
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'+' && bytes[k - 1] != b'-');
        let (re_txt, im_txt) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im_txt = im_txt.strip_prefix('+').unwrap_or(im_txt);
        let im = match im_txt {
            "" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t)?,
        };
        Ok(Self::new(parse_rational(re_txt)?, im))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        let inv = rhs.recip().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_int(1)
    }
    fn from_i64(v: i64) -> Self {
        Self::from_int(v)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn recip(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -&self.im / &n })
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn recip(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(self.inv())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(q("3"), GaussianRational::from_int(3));
        assert_eq!(q("6/4"), GaussianRational::ratio(3, 2));
        assert_eq!(q("1/2+3/4i"), GaussianRational::complex(1, 2, 3, 4));
        assert_eq!(q("1/2-3/4i"), GaussianRational::complex(1, 2, -3, 4));
        assert_eq!(q("1/2+-3/4i"), GaussianRational::complex(1, 2, -3, 4));
        assert_eq!(q("-2/6-2/4i"), GaussianRational::complex(-1, 3, -1, 2));
        assert_eq!(q("3/5i"), GaussianRational::complex(0, 1, 3, 5));
        assert_eq!(q("i"), GaussianRational::i());
        assert_eq!(q("-i"), -GaussianRational::i());
        assert_eq!(q("2-i"), GaussianRational::complex(2, 1, -1, 1));
        assert_eq!(q(" 1 / 3 "), GaussianRational::ratio(1, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/0", "abc", "1/2+", "1//2", "1/2+3/0i", "i/2"] {
            assert!(bad.parse::<GaussianRational>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn wire_form_is_canonical() {
        assert_eq!(GaussianRational::from_int(0).to_wire(), "0/1");
        assert_eq!(GaussianRational::ratio(-4, 6).to_wire(), "-2/3");
        assert_eq!(GaussianRational::complex(1, 2, -3, 4).to_wire(), "1/2-3/4i");
        assert_eq!(GaussianRational::i().to_wire(), "0/1+1/1i");
        let z = GaussianRational::complex(-7, 3, 5, 9);
        assert_eq!(q(&z.to_wire()), z);
    }

    #[test]
    fn field_ops() {
        let z = GaussianRational::complex(3, 5, 4, 5);
        assert_eq!(z.norm_sqr(), BigRational::one());
        let inv = z.recip().unwrap();
        assert_eq!(&z * &inv, GaussianRational::one());
        assert_eq!(inv, z.conj());
        assert!(GaussianRational::zero().recip().is_none());
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }
}
