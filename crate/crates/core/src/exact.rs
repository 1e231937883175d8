//! Exact scalars: arbitrary-precision rationals and p-adic valuations.
//!
//! [`Rat`] is always stored in lowest terms with a positive denominator, so
//! structural equality is arithmetic equality and every value has exactly one
//! textual form. [`vp`] computes the p-adic valuation with a distinguished
//! [`Valuation::Infinite`] for zero; membership in Z[1/p] and in the scaled
//! lattices p^k Z is decided exactly from it.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rational number in canonical form (lowest terms, denominator > 0).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    /// Builds `num/den`, normalizing sign and common factors.
    ///
    /// Panics if `den` is zero; fallible construction goes through
    /// [`Rat::from_str`], which reports the error instead.
    pub fn new(num: BigInt, den: BigInt) -> Rat {
        assert!(!den.is_zero(), "rational with zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    /// `num/den` from machine integers; `den` must be nonzero.
    pub fn ratio(num: i64, den: i64) -> Rat {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Largest integer <= self.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Fractional part `self - floor(self)`, always in [0, 1).
    pub fn fract(&self) -> Rat {
        Rat(&self.0 - self.0.floor())
    }

    /// Integer power; negative exponents invert (self must be nonzero then).
    pub fn pow(&self, k: i32) -> Rat {
        if k < 0 {
            assert!(!self.is_zero(), "negative power of zero");
        }
        Rat(num_traits::Pow::pow(&self.0, k))
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl fmt::Display for Rat {
    /// Canonical text form: `num/den`, with `/1` omitted for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Why a rational string failed to parse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseRatError {
    Empty,
    BadInteger(String),
    ZeroDenominator,
}

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseRatError::Empty => write!(f, "empty rational"),
            ParseRatError::BadInteger(s) => write!(f, "not an integer: {s:?}"),
            ParseRatError::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `num/den` or a bare integer; the result is normalized, so
    /// `"-5/1"`, `"10/-2"` and `"-5"` all parse to the same value.
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRatError::Empty);
        }
        let parse_int = |part: &str| {
            part.parse::<BigInt>()
                .map_err(|_| ParseRatError::BadInteger(String::from(part)))
        };
        match s.split_once('/') {
            None => Ok(Rat::from_bigint(parse_int(s)?)),
            Some((n, d)) => {
                let num = parse_int(n)?;
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(ParseRatError::ZeroDenominator);
                }
                Ok(Rat::new(num, den))
            }
        }
    }
}

/// A validated prime, the single runtime parameter of the group family.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Prime(u64);

impl Prime {
    /// Trial division; `None` for 0, 1, and composites.
    pub fn new(n: u64) -> Option<Prime> {
        if n < 2 {
            return None;
        }
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                return None;
            }
            d += 1;
        }
        Some(Prime(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// p^k as an exact rational, for any sign of k.
    pub fn pow_rat(self, k: i64) -> Rat {
        let mag = BigInt::from(self.0).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Rat::from_bigint(mag)
        } else {
            Rat::new(BigInt::one(), mag)
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Value of a p-adic valuation; `Infinite` (the valuation of 0) compares
/// greater than every finite value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    /// Valuations add under multiplication of scalars; infinity absorbs.
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

fn multiplicity(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut count = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        count += 1;
        n = q;
    }
}

/// p-adic valuation of `x`: the exponent of p in `x`, `Infinite` for zero.
pub fn vp(x: &Rat, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = p.to_bigint();
    // num and den are coprime, so at most one of the two counts is nonzero.
    Valuation::Finite(multiplicity(x.numer(), &p) - multiplicity(x.denom(), &p))
}

/// Does `x` lie in Z[1/p], i.e. is its reduced denominator a power of p?
pub fn is_p_local(x: &Rat, p: Prime) -> bool {
    let p = p.to_bigint();
    let mut den = x.denom().clone();
    while !den.is_one() {
        let (q, r) = den.div_rem(&p);
        if !r.is_zero() {
            return false;
        }
        den = q;
    }
    true
}

/// Does `x` lie in the scaled lattice p^k Z (k of any sign)?
///
/// Holds exactly when `x` is p-local with valuation >= k; zero belongs to
/// every scaled lattice.
pub fn in_scaled_lattice(x: &Rat, p: Prime, k: i64) -> bool {
    is_p_local(x, p) && vp(x, p) >= Valuation::Finite(k)
}
