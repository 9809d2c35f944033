//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree order. The representation is
//! canonical: the zero polynomial has no coefficients and otherwise the last
//! coefficient is nonzero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// `c * x^deg`.
    pub fn monomial(c: BigRational, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Multiplicity of zero as a root (the lowest nonzero degree).
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divide through by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divide by `x^k`; the caller guarantees the low `k` coefficients vanish.
    pub fn unshift(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Poly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// `p(s * x^k)` for a sign `s` in {+1, -1}.
    pub fn substitute_signed_power(&self, k: usize, negate: bool) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let deg = self.coeffs.len() - 1;
        let mut coeffs = vec![BigRational::zero(); deg * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            coeffs[i * k] = if negate && i % 2 == 1 { -c } else { c.clone() };
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
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

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// True when only even powers of `x` occur.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % 2 == 0 || c.is_zero())
    }

    /// Polynomial division with remainder. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Exact quotient; debug-asserts the remainder is zero.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor. `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.degree() == Some(0) || b.degree() == Some(0) {
            return Poly::one();
        }
        if coprime_mod_prime(a, b) {
            return Poly::one();
        }
        let (mut r0, mut r1) = if a.degree() >= b.degree() {
            (a.monic(), b.monic())
        } else {
            (b.monic(), a.monic())
        };
        while !r1.is_zero() {
            let (_, r) = r0.div_rem(&r1);
            r0 = r1;
            r1 = r.monic();
        }
        r0
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => {}
                (_, false) => write!(f, "{abs}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "{var}")?,
                _ => write!(f, "{var}^{i}")?,
            }
        }
        Ok(())
    }
}

/// Large prime used for the coprimality fast path.
const FAST_PRIME: u64 = 2_147_483_629;

fn mod_image(c: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = c.numer().mod_floor(&pb).to_u64()?;
    let d = c.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(n * inv_mod(d, p) % p)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

/// Returns true only when `a` and `b` are certainly coprime over Q: their
/// reductions modulo a large prime keep full degree and are coprime there.
fn coprime_mod_prime(a: &Poly, b: &Poly) -> bool {
    let p = FAST_PRIME;
    let reduce = |q: &Poly| -> Option<Vec<u64>> {
        let v: Option<Vec<u64>> = q.coeffs.iter().map(|c| mod_image(c, p)).collect();
        let v = v?;
        if *v.last()? == 0 {
            return None;
        }
        Some(v)
    };
    let (Some(mut r0), Some(mut r1)) = (reduce(a), reduce(b)) else {
        return false;
    };
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    loop {
        while r1.last() == Some(&0) {
            r1.pop();
        }
        if r1.is_empty() {
            return r0.len() == 1;
        }
        if r1.len() == 1 {
            return true;
        }
        let inv = inv_mod(*r1.last().unwrap(), p);
        while r0.len() >= r1.len() {
            let c = r0.last().unwrap() * inv % p;
            let off = r0.len() - r1.len();
            for (j, d) in r1.iter().enumerate() {
                r0[off + j] = (r0[off + j] + p - c * d % p) % p;
            }
            r0.pop();
            while r0.last() == Some(&0) {
                r0.pop();
            }
            if r0.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut r0, &mut r1);
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "x")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly(")?;
        self.fmt_with(f, "v")?;
        write!(f, ")")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, d) in coeffs.iter_mut().zip(short.coeffs.iter()) {
            *c += d;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn division_with_remainder() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[-1, 1]);
        let (q, rem) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(rem.is_zero());

        let (q, rem) = Poly::from_ints(&[1, 0, 1]).div_rem(&Poly::from_ints(&[0, 2]));
        assert_eq!(q, Poly::from_coeffs(vec![r(0, 1), r(1, 2)]));
        assert_eq!(rem, Poly::one());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[3, 0, 2]);
        let g = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[5, 7]);
        assert_eq!(Poly::gcd(&f.scale(&r(6, 1)), &g), Poly::from_ints(&[-1, 1]));
        assert_eq!(Poly::gcd(&Poly::from_ints(&[1, 1]), &Poly::from_ints(&[-1, 1])), Poly::one());
        assert_eq!(Poly::gcd(&Poly::zero(), &Poly::from_ints(&[2, 4])), Poly::from_coeffs(vec![r(1, 2), r(1, 1)]));
    }

    #[test]
    fn fast_path_never_claims_false_coprimality() {
        let common = Poly::from_ints(&[1, 0, 0, 1]);
        let a = &common * &Poly::from_ints(&[2, -3, 1]);
        let b = &common * &Poly::from_ints(&[0, 5]);
        assert!(!coprime_mod_prime(&a, &b));
        assert_eq!(Poly::gcd(&a, &b), common);
    }

    #[test]
    fn signed_power_substitution() {
        // p(x) = 1 + 2x + 3x^2 ; p(-x^2) = 1 - 2x^2 + 3x^4
        let p = Poly::from_ints(&[1, 2, 3]);
        assert_eq!(p.substitute_signed_power(2, true), Poly::from_ints(&[1, 0, -2, 0, 3]));
        assert_eq!(p.substitute_signed_power(3, false), Poly::from_ints(&[1, 0, 0, 2, 0, 0, 3]));
    }

    #[test]
    fn display_orders_by_descending_degree() {
        assert_eq!(Poly::from_ints(&[-1, 0, 2]).to_string(), "2*x^2 - 1");
        assert_eq!(Poly::from_ints(&[1, -1]).to_string(), "-x + 1");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
