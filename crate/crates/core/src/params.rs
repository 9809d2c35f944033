//! Laurent polynomials in named parameters with rational coefficients.
//!
//! Potential coefficients such as `q`, `-q`, or `(1/3)*c` live here. Values
//! are substituted only when a model is counted over a finite field.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::OracleError;
use crate::oracle::field::{inv_mod, pow_mod, reduce_rational};

/// Sorted `(name, exponent)` pairs with nonzero exponents.
pub type ParamMonomial = Vec<(String, i32)>;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, BigRational>,
}

/// Parameter values as residues modulo the counting prime.
pub type Assignment = BTreeMap<String, u64>;

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Vec::new())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    pub fn param(name: &str) -> Self {
        Self::term(BigRational::one(), vec![(name.to_string(), 1)])
    }

    /// `c * prod name^exp`; repeated names are merged.
    pub fn term(c: BigRational, monomial: ParamMonomial) -> Self {
        let mut merged: BTreeMap<String, i32> = BTreeMap::new();
        for (name, e) in monomial {
            *merged.entry(name).or_insert(0) += e;
        }
        let mono: ParamMonomial = merged.into_iter().filter(|(_, e)| *e != 0).collect();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        ParamPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The value when no parameter occurs.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn params_used(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = ParamPoly::zero();
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &rhs.terms {
            let s = out.terms.get(m).cloned().unwrap_or_else(BigRational::zero) + v;
            if s.is_zero() {
                out.terms.remove(m);
            } else {
                out.terms.insert(m.clone(), s);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = ParamPoly::zero();
        for (m1, v1) in &self.terms {
            for (m2, v2) in &rhs.terms {
                let mut mono = m1.clone();
                mono.extend(m2.iter().cloned());
                out = out.add(&ParamPoly::term(v1 * v2, mono));
            }
        }
        out
    }

    /// Value in F_p under `assignment`. Every parameter must be assigned a
    /// nonzero residue.
    pub fn eval_mod(&self, assignment: &Assignment, p: u32) -> Result<u32, OracleError> {
        let mut acc = 0u32;
        for (mono, c) in &self.terms {
            let mut v = reduce_rational(c, p)?;
            for (name, e) in mono {
                let x = assignment
                    .get(name)
                    .ok_or_else(|| OracleError::MissingParameter(name.clone()))?;
                let x = (*x % p as u64) as u32;
                if x == 0 {
                    return Err(OracleError::ZeroParameter(name.clone()));
                }
                let base = if *e < 0 { inv_mod(x, p).expect("nonzero") } else { x };
                v = v * pow_mod(base, e.unsigned_abs() as u64, p) % p;
            }
            acc = (acc + v) % p;
        }
        Ok(acc)
    }
}

fn fmt_monomial(mono: &ParamMonomial) -> String {
    mono.iter()
        .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn fmt_constant(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

/// Renders one signed term as `(negative, body)`, omitting a unit coefficient.
pub(crate) fn split_term(mono: &ParamMonomial, c: &BigRational) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    let body = match (mono.is_empty(), a.is_one()) {
        (true, _) => fmt_constant(&a),
        (false, true) => fmt_monomial(mono),
        (false, false) => format!("{}*{}", fmt_constant(&a), fmt_monomial(mono)),
    };
    (neg, body)
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            let (neg, body) = split_term(mono, c);
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_and_rendering() {
        let q = ParamPoly::param("q");
        let one_minus_q = ParamPoly::one().add(&q.neg());
        assert_eq!(one_minus_q.to_string(), "1 - q");
        assert_eq!(q.mul(&q).to_string(), "q^2");
        let inv = ParamPoly::term(r(1, 1), vec![("q".into(), -1)]);
        assert_eq!(q.mul(&inv), ParamPoly::one());
        assert_eq!(ParamPoly::term(r(1, 3), vec![("c".into(), 1)]).to_string(), "(1/3)*c");
        assert!(q.add(&q.neg()).is_zero());
        assert_eq!(q.as_constant(), None);
        assert_eq!(ParamPoly::from_int(-2).as_constant(), Some(r(-2, 1)));
    }

    #[test]
    fn evaluation_mod_p() {
        let mut a = Assignment::new();
        a.insert("q".into(), 2);
        let expr = ParamPoly::param("q")
            .mul(&ParamPoly::param("q"))
            .add(&ParamPoly::term(r(1, 3), vec![("q".into(), -1)]));
        // 4 + 1/(3*2) = 4 + 1/6 at p = 7: 6^-1 = 6, so 4 + 6 = 10 = 3
        assert_eq!(expr.eval_mod(&a, 7), Ok(3));
        a.insert("q".into(), 7);
        assert_eq!(expr.eval_mod(&a, 7), Err(OracleError::ZeroParameter("q".into())));
        assert_eq!(
            ParamPoly::param("c").eval_mod(&a, 7),
            Err(OracleError::MissingParameter("c".into()))
        );
    }
}
