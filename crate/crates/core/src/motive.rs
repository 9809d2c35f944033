//! Exact motivic scalars.
//!
//! Every class handled here is a rational function in the square root of the
//! Lefschetz motive, `v = L^(1/2)`, with rational coefficients. Values are kept
//! as reduced fractions whose denominator is monic, so two scalars are equal
//! exactly when their representations are identical.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{MotiveError, ParseError};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MotivicScalar {
    num: Poly,
    den: Poly,
}

impl MotivicScalar {
    /// Builds `num / den` in reduced normalized form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, MotiveError> {
        if den.is_zero() {
            return Err(MotiveError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            MotivicScalar { num, den }
        } else {
            let inv = lc.recip();
            MotivicScalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        MotivicScalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(c: BigRational) -> Self {
        MotivicScalar {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(num: Poly) -> Self {
        MotivicScalar { num, den: Poly::one() }
    }

    /// `v = L^(1/2)`.
    pub fn sqrt_lefschetz() -> Self {
        Self::from_poly(Poly::x())
    }

    /// The Lefschetz motive `L = v^2`.
    pub fn lefschetz() -> Self {
        Self::from_poly(Poly::monomial(BigRational::one(), 2))
    }

    /// `L^(k/2) = v^k` for any integer `k`.
    pub fn half_power(k: i64) -> Self {
        let m = Poly::monomial(BigRational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            MotivicScalar { num: Poly::one(), den: m }
        }
    }

    /// `(-L^(1/2))^k`, the sign-twisted half-Lefschetz power.
    pub fn neg_sqrt_lefschetz_pow(k: i64) -> Self {
        let p = Self::half_power(k);
        if k.rem_euclid(2) == 1 {
            -&p
        } else {
            p
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in the subfield of rational functions in `L`.
    pub fn is_even(&self) -> bool {
        self.num.is_even() && self.den.is_even()
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, MotiveError> {
        if rhs.is_zero() {
            return Err(MotiveError::DivisionByZero);
        }
        let num = &self.num * &rhs.den;
        let den = &self.den * &rhs.num;
        Ok(Self::normalize(num, den))
    }

    pub fn recip(&self) -> Result<Self, MotiveError> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, e: i32) -> Result<Self, MotiveError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(MotivicScalar {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MotivicScalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// The Adams operation `psi_k`: the ring endomorphism fixed by
    /// `psi_k(-v) = (-v)^k`, i.e. `v -> (-1)^(k+1) v^k`.
    pub fn adams(&self, k: u32) -> Self {
        assert!(k >= 1, "Adams operations are indexed from 1");
        if k == 1 {
            return self.clone();
        }
        let negate = k % 2 == 0;
        let num = self.num.substitute_signed_power(k as usize, negate);
        let den = self.den.substitute_signed_power(k as usize, negate);
        // The substitution maps coprime pairs to coprime pairs; only the
        // leading coefficient of the denominator needs renormalizing.
        Self::normalize_leading(num, den)
    }

    fn normalize_leading(num: Poly, den: Poly) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            MotivicScalar { num, den }
        } else {
            let inv = lc.recip();
            MotivicScalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Value at `L = x` for an element of the pure-`L` subfield.
    pub fn eval_at_lefschetz(&self, x: &BigRational) -> Result<BigRational, MotiveError> {
        if !self.is_even() {
            return Err(MotiveError::OddHalfPower);
        }
        let squash = |p: &Poly| {
            Poly::from_coeffs(p.coeffs().iter().step_by(2).cloned().collect())
        };
        let d = squash(&self.den).eval(x);
        if d.is_zero() {
            return Err(MotiveError::PoleAtPoint(x.to_string()));
        }
        Ok(squash(&self.num).eval(x) / d)
    }

    /// The point-count specialization `L -> p`.
    pub fn specialize_at_prime(&self, p: u64) -> Result<BigRational, MotiveError> {
        let x = BigRational::from_integer(BigInt::from(p));
        self.eval_at_lefschetz(&x).map_err(|e| match e {
            MotiveError::PoleAtPoint(_) => MotiveError::PoleAtPrime(p),
            other => other,
        })
    }

    /// The Euler-characteristic specialization `L^(1/2) -> -1`.
    pub fn euler_specialize(&self) -> Result<BigRational, MotiveError> {
        let m1 = -BigRational::one();
        let d = self.den.eval(&m1);
        if d.is_zero() {
            return Err(MotiveError::PoleAtMinusOne);
        }
        Ok(self.num.eval(&m1) / d)
    }
}

impl Default for MotivicScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for MotivicScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for MotivicScalar {
    fn from(c: BigRational) -> Self {
        Self::from_rational(c)
    }
}

impl Add for &MotivicScalar {
    type Output = MotivicScalar;
    fn add(self, rhs: &MotivicScalar) -> MotivicScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return MotivicScalar::normalize(&self.num + &rhs.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return MotivicScalar::normalize(num, &self.den * &rhs.den);
        }
        let a = self.den.div_exact(&g);
        let b = rhs.den.div_exact(&g);
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        MotivicScalar::normalize(num, &(&a * &b) * &g)
    }
}

impl Sub for &MotivicScalar {
    type Output = MotivicScalar;
    fn sub(self, rhs: &MotivicScalar) -> MotivicScalar {
        self + &(-rhs)
    }
}

impl Neg for &MotivicScalar {
    type Output = MotivicScalar;
    fn neg(self) -> MotivicScalar {
        MotivicScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &MotivicScalar {
    type Output = MotivicScalar;
    fn mul(self, rhs: &MotivicScalar) -> MotivicScalar {
        if self.is_zero() || rhs.is_zero() {
            return MotivicScalar::zero();
        }
        // Cross-cancel so the products stay small.
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let (n1, d2) = (self.num.div_exact(&g1), rhs.den.div_exact(&g1));
        let (n2, d1) = (rhs.num.div_exact(&g2), self.den.div_exact(&g2));
        MotivicScalar::normalize_leading(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &MotivicScalar {
    type Output = MotivicScalar;
    /// Panics on division by zero; use [`MotivicScalar::checked_div`] to
    /// handle it.
    fn div(self, rhs: &MotivicScalar) -> MotivicScalar {
        self.checked_div(rhs).expect("division by zero motivic scalar")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MotivicScalar {
            type Output = MotivicScalar;
            fn $m(self, rhs: MotivicScalar) -> MotivicScalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for MotivicScalar {
    type Output = MotivicScalar;
    fn neg(self) -> MotivicScalar {
        -&self
    }
}

// ---- rendering ----

fn fmt_half_power(f: &mut fmt::Formatter<'_>, m: usize) -> fmt::Result {
    match m {
        0 => write!(f, "1"),
        1 => write!(f, "L^(1/2)"),
        2 => write!(f, "L"),
        m if m % 2 == 0 => write!(f, "L^{}", m / 2),
        m => write!(f, "L^({m}/2)"),
    }
}

fn fmt_poly(f: &mut fmt::Formatter<'_>, p: &Poly) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
        }
        first = false;
        if i == 0 {
            write!(f, "{abs}")?;
        } else {
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            fmt_half_power(f, i)?;
        }
    }
    Ok(())
}

impl fmt::Display for MotivicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return fmt_poly(f, &self.num);
        }
        if self.num.term_count() > 1 {
            write!(f, "(")?;
            fmt_poly(f, &self.num)?;
            write!(f, ")")?;
        } else {
            fmt_poly(f, &self.num)?;
        }
        write!(f, "/")?;
        if self.den.term_count() > 1 {
            write!(f, "(")?;
            fmt_poly(f, &self.den)?;
            write!(f, ")")
        } else {
            fmt_poly(f, &self.den)
        }
    }
}

impl fmt::Debug for MotivicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MotivicScalar({self})")
    }
}

// ---- parsing ----

impl FromStr for MotivicScalar {
    type Err = ParseError;

    /// Accepts `+ - * / ^`, parentheses, integers, `L`, and exponents that
    /// are integers or halves, e.g. `L^(3/2)` or `L^(-1/2)`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = ExprParser::new(s);
        let v = p.sum()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(v)
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn new(s: &'a str) -> Self {
        ExprParser { src: s.as_bytes(), pos: 0 }
    }

    fn error(&self, msg: &str) -> ParseError {
        ParseError::new(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn sum(&mut self) -> Result<MotivicScalar, ParseError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.product()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<MotivicScalar, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc
                    .checked_div(&d)
                    .map_err(|_| ParseError::new(1, at + 1, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MotivicScalar, ParseError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MotivicScalar, ParseError> {
        let (base, is_l) = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let (num, den) = self.exponent()?;
        if is_l {
            // L^(num/den) with den in {1, 2}
            let halves = if den == 1 { 2 * num } else { num };
            return Ok(MotivicScalar::half_power(halves));
        }
        if den != 1 {
            return Err(ParseError::new(1, at + 1, "fractional exponent allowed only on L"));
        }
        let e = i32::try_from(num).map_err(|_| ParseError::new(1, at + 1, "exponent too large"))?;
        base.pow(e)
            .map_err(|_| ParseError::new(1, at + 1, "negative power of zero"))
    }

    /// Signed integer, or a parenthesized signed fraction with denominator 1 or 2.
    fn exponent(&mut self) -> Result<(i64, i64), ParseError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let d = if self.eat(b'/') { self.integer()? } else { 1 };
            self.expect(b')')?;
            if d != 1 && d != 2 {
                return Err(self.error("exponent denominator must be 1 or 2"));
            }
            let n = if neg { -n } else { n };
            if d == 2 && n % 2 == 0 {
                return Ok((n / 2, 1));
            }
            return Ok((n, d));
        }
        let neg = self.eat(b'-');
        let n = self.integer()?;
        Ok((if neg { -n } else { n }, 1))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError::new(1, start + 1, "integer out of range"))
    }

    fn atom(&mut self) -> Result<(MotivicScalar, bool), ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                self.expect(b')')?;
                Ok((v, false))
            }
            Some(b'L') => {
                self.pos += 1;
                Ok((MotivicScalar::lefschetz(), true))
            }
            Some(c) if c.is_ascii_digit() => {
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().expect("digits");
                Ok((MotivicScalar::from_rational(BigRational::from_integer(n)), false))
            }
            _ => Err(self.error("expected number, 'L' or '('")),
        }
    }
}
