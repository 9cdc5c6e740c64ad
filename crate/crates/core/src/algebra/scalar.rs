//! Exact arithmetic in the quadratic field `Q(sqrt 3)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ParseError;

/// An element `rational + sqrt3 * sqrt(3)` of `Q(sqrt 3)`.
///
/// Both parts are `BigRational`, which keeps them in lowest terms with a
/// positive denominator, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExactScalar {
    rational: BigRational,
    sqrt3: BigRational,
}

impl ExactScalar {
    pub fn new(rational: BigRational, sqrt3: BigRational) -> Self {
        ExactScalar { rational, sqrt3 }
    }

    pub fn from_rational(rational: BigRational) -> Self {
        ExactScalar {
            rational,
            sqrt3: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `sqrt(3)` itself.
    pub fn sqrt3() -> Self {
        ExactScalar {
            rational: BigRational::zero(),
            sqrt3: BigRational::one(),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn sqrt3_part(&self) -> &BigRational {
        &self.sqrt3
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt3.is_zero()
    }

    /// Galois conjugate `r - q sqrt 3`.
    pub fn conjugate(&self) -> Self {
        ExactScalar {
            rational: self.rational.clone(),
            sqrt3: -self.sqrt3.clone(),
        }
    }

    /// Field norm `r^2 - 3 q^2`.
    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational
            - BigRational::from_integer(3.into()) * &self.sqrt3 * &self.sqrt3
    }

    /// Exact sign of `r + q sqrt 3`.
    pub fn signum_exact(&self) -> Ordering {
        let sr = self.rational.cmp(&BigRational::zero());
        let sq = self.sqrt3.cmp(&BigRational::zero());
        match (sr, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            // opposite signs: compare r^2 with 3 q^2
            (a, _) => {
                let r2 = &self.rational * &self.rational;
                let q2 = BigRational::from_integer(3.into()) * &self.sqrt3 * &self.sqrt3;
                match r2.cmp(&q2) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.signum_exact() != Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum_exact() == Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational) + rational_to_f64(&self.sqrt3) * 3f64.sqrt()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(ExactScalar {
            rational: &self.rational / &n,
            sqrt3: -(&self.sqrt3 / &n),
        })
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // huge parts: shift both to a representable range
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = (nb - db).clamp(-1000, 1000);
    let scaled = if shift >= 0 {
        q / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let n = scaled.numer().to_f64().unwrap_or(f64::NAN);
    let d = scaled.denom().to_f64().unwrap_or(f64::NAN);
    (n / d) * 2f64.powi(shift as i32)
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}/{}", q.numer(), q.denom())
}

impl fmt::Display for ExactScalar {
    /// `p/q` or `p/q+r/s√3`; zero rational part with nonzero radical part
    /// still prints `0/1+r/s√3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.rational, f)?;
        if !self.sqrt3.is_zero() {
            if self.sqrt3.is_positive() {
                write!(f, "+")?;
            }
            fmt_rational(&self.sqrt3, f)?;
            write!(f, "√3")?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::new(format!("malformed rational `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ParseError::new(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for ExactScalar {
    type Err = ParseError;

    /// Accepts `p/q`, `p/q + r/s sqrt3`, `r/s sqrt3`, and the `√3` spelling
    /// used by [`fmt::Display`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().replace('√', " sqrt");
        let mut total = ExactScalar::zero();
        let mut rest = s.as_str();
        let mut first = true;
        while !rest.trim().is_empty() {
            rest = rest.trim_start();
            let mut sign = 1;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            } else if !first {
                return Err(ParseError::new(format!("expected `+` or `-` in `{s}`")));
            }
            rest = rest.trim_start();
            // a term runs until the next sign that is not part of a leading sign
            let end = rest
                .char_indices()
                .skip(1)
                .find(|&(_, c)| c == '+' || c == '-')
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let term = rest[..end].trim();
            rest = &rest[end..];
            let (coef_text, radical) = match term.strip_suffix("sqrt3") {
                Some(c) => (c.trim().trim_end_matches('*').trim(), true),
                None => (term, false),
            };
            let coef = if radical && coef_text.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coef_text)?
            };
            let coef = if sign < 0 { -coef } else { coef };
            if radical {
                total.sqrt3 += coef;
            } else {
                total.rational += coef;
            }
            first = false;
        }
        if first {
            return Err(ParseError::new("empty scalar".to_string()));
        }
        Ok(total)
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar {
            rational: BigRational::zero(),
            sqrt3: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.sqrt3.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        Self::from_rational(BigRational::one())
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            rational: &self.rational + &rhs.rational,
            sqrt3: &self.sqrt3 + &rhs.sqrt3,
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            rational: &self.rational - &rhs.rational,
            sqrt3: &self.sqrt3 - &rhs.sqrt3,
        }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.sqrt3.is_zero() && rhs.sqrt3.is_zero() {
            return ExactScalar::from_rational(&self.rational * &rhs.rational);
        }
        let three = BigRational::from_integer(3.into());
        ExactScalar {
            rational: &self.rational * &rhs.rational + three * &self.sqrt3 * &rhs.sqrt3,
            sqrt3: &self.rational * &rhs.sqrt3 + &self.sqrt3 * &rhs.rational,
        }
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.inverse().expect("division by zero in Q(sqrt3)");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            rational: -self.rational,
            sqrt3: -self.sqrt3,
        }
    }
}

impl<'a> AddAssign<&'a ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.rational += &rhs.rational;
        self.sqrt3 += &rhs.sqrt3;
    }
}

impl<'a> SubAssign<&'a ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.rational -= &rhs.rational;
        self.sqrt3 -= &rhs.sqrt3;
    }
}

impl<'a> MulAssign<&'a ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum_exact()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn radicand_closure() {
        let s = ExactScalar::sqrt3();
        assert_eq!(&s * &s, ExactScalar::from_integer(3));
    }

    #[test]
    fn sign_with_mixed_parts() {
        // 2 - sqrt3 > 0, 1 - sqrt3 < 0, -7/4 + sqrt3 < 0 (49/16 > 3)
        assert_eq!(
            ExactScalar::new(q(2, 1), q(-1, 1)).signum_exact(),
            Ordering::Greater
        );
        assert_eq!(
            ExactScalar::new(q(1, 1), q(-1, 1)).signum_exact(),
            Ordering::Less
        );
        assert_eq!(
            ExactScalar::new(q(-7, 4), q(1, 1)).signum_exact(),
            Ordering::Less
        );
        assert_eq!(
            ExactScalar::new(q(-5, 3), q(1, 1)).signum_exact(),
            Ordering::Greater
        );
        assert_eq!(ExactScalar::zero().signum_exact(), Ordering::Equal);
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(ExactScalar::zero().inverse().is_none());
        let v = ExactScalar::new(q(1, 2), q(3, 5));
        assert_eq!(&v * &v.inverse().unwrap(), ExactScalar::one());
    }

    #[test]
    fn parse_and_display() {
        let v: ExactScalar = "1/2 + 2/9 sqrt3".parse().unwrap();
        assert_eq!(v, ExactScalar::new(q(1, 2), q(2, 9)));
        assert_eq!(v.to_string(), "1/2+2/9√3");
        let back: ExactScalar = v.to_string().parse().unwrap();
        assert_eq!(back, v);
        let w: ExactScalar = "-3/9".parse().unwrap();
        assert_eq!(w.to_string(), "-1/3");
        let r: ExactScalar = "sqrt3".parse().unwrap();
        assert_eq!(r, ExactScalar::sqrt3());
        let m: ExactScalar = "1/9 - 1/2*sqrt3".parse().unwrap();
        assert_eq!(m, ExactScalar::new(q(1, 9), q(-1, 2)));
        assert!("".parse::<ExactScalar>().is_err());
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("abc".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn float_conversion() {
        let v = ExactScalar::new(q(1, 9), q(1, 9));
        assert!((v.to_f64() - (1.0 + 3f64.sqrt()) / 9.0).abs() < 1e-15);
    }
}
