//! Arithmetic in the prime field F_p for p < 2^16.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::OracleError;

pub const MAX_PRIME: u64 = 1 << 16;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Accepts primes below 2^16, so every product of two residues fits in a `u32`.
pub fn check_prime(p: u64) -> Result<u32, OracleError> {
    if p < MAX_PRIME && is_prime(p) {
        Ok(p as u32)
    } else {
        Err(OracleError::NotPrime(p))
    }
}

pub fn pow_mod(a: u32, mut e: u64, p: u32) -> u32 {
    let mut base = a % p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u32, p: u32) -> Option<u32> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, (p - 2) as u64, p))
    }
}

/// Least `r >= 1` with `q^r = 1` in F_p.
pub fn multiplicative_order(q: u64, p: u64) -> Result<u32, OracleError> {
    let pp = check_prime(p)?;
    let q = (q % p) as u32;
    if q == 0 {
        return Err(OracleError::ZeroHasNoOrder);
    }
    let mut x = q;
    let mut r = 1;
    while x != 1 {
        x = x * q % pp;
        r += 1;
    }
    Ok(r)
}

pub fn reduce_int(n: &BigInt, p: u32) -> u32 {
    let m = n.mod_floor(&BigInt::from(p));
    m.to_u32().expect("residue fits")
}

/// Image of a rational number in F_p.
pub fn reduce_rational(r: &BigRational, p: u32) -> Result<u32, OracleError> {
    let den = reduce_int(r.denom(), p);
    let inv = inv_mod(den, p).ok_or(OracleError::CoefficientPole(p as u64))?;
    Ok(reduce_int(r.numer(), p) * inv % p)
}

/// Signed representative of a residue, used only for display.
pub fn signed_residue(x: u32, p: u32) -> i64 {
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

/// `|GL_alpha(F_p)| = prod_i prod_{j < alpha_i} (p^alpha_i - p^j)`.
pub fn count_gl(alpha: &[u32], p: u64) -> Result<u128, OracleError> {
    check_prime(p)?;
    let p = p as u128;
    let mut total: u128 = 1;
    for &n in alpha {
        let pn = p.checked_pow(n).ok_or(OracleError::Overflow)?;
        for j in 0..n {
            let factor = pn - p.pow(j);
            total = total.checked_mul(factor).ok_or(OracleError::Overflow)?;
        }
    }
    Ok(total)
}

pub fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `num/den` (always with a denominator).
pub fn render_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(2, 7), Ok(3));
        assert_eq!(multiplicative_order(1, 5), Ok(1));
        assert_eq!(multiplicative_order(4, 5), Ok(2));
        assert_eq!(multiplicative_order(0, 5), Err(OracleError::ZeroHasNoOrder));
        assert_eq!(multiplicative_order(2, 9), Err(OracleError::NotPrime(9)));
    }

    #[test]
    fn gl_examples() {
        assert_eq!(count_gl(&[2], 3), Ok(48));
        assert_eq!(count_gl(&[1, 1], 3), Ok(4));
        assert_eq!(count_gl(&[1], 7), Ok(6));
        assert_eq!(count_gl(&[0, 0], 7), Ok(1));
    }

    #[test]
    fn rational_reduction() {
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(reduce_rational(&third, 7), Ok(5));
        assert_eq!(reduce_rational(&third, 3), Err(OracleError::CoefficientPole(3)));
        let neg = BigRational::from_integer((-2).into());
        assert_eq!(reduce_rational(&neg, 5), Ok(3));
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 11, 13, 65521] {
            for a in 1..p.min(200) {
                assert_eq!(a * inv_mod(a, p).unwrap() % p, 1);
            }
        }
    }
}
