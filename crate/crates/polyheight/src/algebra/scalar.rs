//! Exact scalar arithmetic over the rationals and real quadratic extensions.
//!
//! A [`Scalar`] is `a + b*sqrt(d)` with `a`, `b` arbitrary-precision rationals
//! and `d` a positive square-reduced integer. Purely rational values carry
//! `d = 0` and compare equal to quadratic values whose irrational part is zero.

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact element of ℚ or ℚ(√d).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(a: BigRational) -> Self {
        Scalar { a, b: BigRational::zero(), d: 0 }
    }

    /// Builds `a + b*sqrt(d)`, normalizing the radicand.
    pub fn quadratic(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            return Scalar::from_rational(a);
        }
        let (s, d_red) = reduce_square(d);
        if d_red == 1 {
            // sqrt(d) turned out rational
            return Scalar::from_rational(a + b * BigRational::from_integer(BigInt::from(s)));
        }
        Scalar { a, b: b * BigRational::from_integer(BigInt::from(s)), d: d_red }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() { Some(&self.a) } else { None }
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> Self {
        Scalar { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a^2 - b^2 d` (rational).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d))
    }

    /// Exact sign: -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        if self.b.is_zero() {
            return sign_rat(&self.a);
        }
        if self.a.is_zero() {
            return sign_rat(&self.b);
        }
        let sa = sign_rat(&self.a);
        let sb = sign_rat(&self.b);
        if sa == sb {
            return sa;
        }
        // a and b*sqrt(d) compete: compare a^2 with b^2 d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() { -self.clone() } else { self.clone() }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        if self.b.is_zero() {
            return Scalar::from_rational(self.a.recip());
        }
        let n = self.norm();
        assert!(!n.is_zero(), "zero norm: radicand is a perfect square");
        let conj = self.conj();
        Scalar { a: conj.a / n.clone(), b: conj.b / n, d: self.d }
    }

    pub fn to_f64(&self) -> f64 {
        let a = rat_to_f64(&self.a);
        if self.b.is_zero() {
            a
        } else {
            a + rat_to_f64(&self.b) * (self.d as f64).sqrt()
        }
    }

    /// Exact square root of a nonnegative rational, as an element of some ℚ(√D).
    ///
    /// Returns `None` when the reduced radicand does not fit in `u64`.
    pub fn sqrt_of_rational(r: &BigRational) -> Option<Scalar> {
        assert!(!r.is_negative(), "square root of negative rational");
        if r.is_zero() {
            return Some(Scalar::zero());
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let n = r.numer() * r.denom();
        let (s, d) = reduce_square_big(&n)?;
        let coeff = BigRational::new(s, r.denom().clone());
        if d == 1 {
            Some(Scalar::from_rational(coeff))
        } else {
            Some(Scalar { a: BigRational::zero(), b: coeff, d })
        }
    }

    /// Square root within the element's own field, when one exists.
    pub fn sqrt_in_field(&self) -> Option<Scalar> {
        if self.sign() < 0 {
            return None;
        }
        if self.b.is_zero() {
            // sqrt may be rational or lie in ℚ(√D) for the ambient D; the caller
            // decides compatibility. Try rational first, then b*sqrt(d) form.
            let s = Scalar::sqrt_of_rational(&self.a)?;
            return Some(s);
        }
        // (x + y sqrt(d))^2 = x^2 + y^2 d + 2xy sqrt(d): solve for x, y.
        // x^2 and d y^2 are the roots of z^2 - a z + d b^2/4.
        let d_rat = BigRational::from_integer(BigInt::from(self.d));
        let disc = &self.a * &self.a - &d_rat * &self.b * &self.b;
        if disc.is_negative() {
            return None;
        }
        let sq = Scalar::sqrt_of_rational(&disc)?;
        let sq = sq.as_rational()?.clone();
        let two = BigRational::from_integer(BigInt::from(2));
        for z in [(&self.a + &sq) / &two, (&self.a - &sq) / &two] {
            if z.is_negative() {
                continue;
            }
            if let Some(x) = Scalar::sqrt_of_rational(&z) {
                if let Some(x) = x.as_rational() {
                    if !x.is_zero() {
                        let y = &self.b / (BigRational::from_integer(BigInt::from(2)) * x);
                        let cand = Scalar::quadratic(x.clone(), y, self.d);
                        if (&cand * &cand) == *self && cand.sign() >= 0 {
                            return Some(cand);
                        }
                        let cand = -cand;
                        if (&cand * &cand) == *self && cand.sign() >= 0 {
                            return Some(cand);
                        }
                    }
                }
            }
        }
        None
    }

    fn join_d(&self, other: &Scalar) -> u64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => 0.max(self.d).max(other.d),
            (true, false) => other.d,
            (false, true) => self.d,
            (false, false) => {
                assert!(
                    self.d == other.d,
                    "mixed quadratic extensions ℚ(√{}) and ℚ(√{})",
                    self.d,
                    other.d
                );
                self.d
            }
        }
    }

    /// Checks that two scalars may legally combine (same extension field).
    pub fn same_field(&self, other: &Scalar) -> bool {
        self.b.is_zero() || other.b.is_zero() || self.d == other.d
    }
}

/// Removes square factors: returns `(s, d')` with `d = s^2 d'`, `d'` square-reduced.
fn reduce_square(d: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut rem = d;
    let mut p = 2u64;
    while p * p <= rem && p <= 10_000 {
        while rem % (p * p) == 0 {
            rem /= p * p;
            s *= p;
        }
        p += 1;
    }
    let r = (rem as f64).sqrt().round() as u64;
    if r * r == rem {
        s *= r;
        rem = 1;
    }
    (s, rem)
}

fn reduce_square_big(n: &BigInt) -> Option<(BigInt, u64)> {
    let mut s = BigInt::one();
    let mut rem = n.clone();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(10_000u32);
    while &p * &p <= rem && p <= limit {
        let p2 = &p * &p;
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            s *= &p;
        }
        p += 1;
    }
    let r = rem.sqrt();
    if &r * &r == rem {
        s *= r;
        rem = BigInt::one();
    }
    let d = rem.to_u64()?;
    Some((s, d))
}

fn sign_rat(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back on a scaled division for extreme magnitudes
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let d = self.join_d(rhs);
        Scalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b, d: if (&self.b + &rhs.b).is_zero() { 0 } else { d } }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let d = self.join_d(rhs);
        let dr = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &dr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        let d = if b.is_zero() { 0 } else { d };
        Scalar { a, b, d }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b, d: self.d }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let rad = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if self.b == -BigRational::one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.b, self.d)
        };
        if self.a.is_zero() {
            write!(f, "{rad}")
        } else if self.b.is_positive() {
            write!(f, "{}+{}", self.a, rad)
        } else {
            write!(f, "{}{}", self.a, rad)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = String;

    /// Parses `p`, `p/q`, or `a+b*sqrt(D)` forms (e.g. `3/2-1/2*sqrt(5)`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty scalar".into());
        }
        // split at the last top-level '+'/'-' preceding a sqrt term, if any
        if let Some(pos) = s.find("sqrt(") {
            let close = s[pos..].find(')').ok_or("unclosed sqrt(")? + pos;
            let d: u64 = s[pos + 5..close].parse().map_err(|_| "bad radicand")?;
            if close != s.len() - 1 {
                return Err("trailing characters after sqrt(...)".into());
            }
            // coefficient of the radical: everything between the split sign and "sqrt("
            let head = &s[..pos];
            let (rat_part, coeff_str) = split_radical_coeff(head)?;
            let b = if coeff_str.is_empty() || coeff_str == "+" {
                BigRational::one()
            } else if coeff_str == "-" {
                -BigRational::one()
            } else {
                let c = coeff_str.strip_suffix('*').unwrap_or(coeff_str);
                parse_rational(c)?
            };
            let a = if rat_part.is_empty() { BigRational::zero() } else { parse_rational(rat_part)? };
            Ok(Scalar::quadratic(a, b, d))
        } else {
            Ok(Scalar::from_rational(parse_rational(&s)?))
        }
    }
}

/// Splits `head` (text before `sqrt(`) into rational part and radical coefficient.
fn split_radical_coeff(head: &str) -> Result<(&str, &str), String> {
    // find last '+' or '-' that is not the leading sign and not inside a fraction
    let bytes = head.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if bytes[i] == b'+' || bytes[i] == b'-' {
            split = Some(i);
            break;
        }
    }
    match split {
        Some(i) => Ok((&head[..i], &head[i..])),
        None => Ok(("", head)),
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| format!("bad integer `{n}`"))?;
            let d: BigInt = d.parse().map_err(|_| format!("bad integer `{d}`"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
