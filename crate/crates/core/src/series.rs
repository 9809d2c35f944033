//! Truncated multivariate power series with the induced pre-lambda structure.
//!
//! A series holds one variable `t_i` per quiver vertex and drops every
//! monomial whose total degree exceeds the truncation bound. Storage is
//! sparse; absent keys are zero.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::SeriesError;
use crate::motive::MotivicScalar;

/// A dimension vector: one nonnegative entry per vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(vars: usize) -> Self {
        DimVector(vec![0; vars])
    }

    /// The unit vector at vertex `i`.
    pub fn unit(vars: usize, i: usize) -> Self {
        let mut v = vec![0; vars];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: u32) -> Self {
        DimVector(self.0.iter().map(|&x| x * k).collect())
    }

    pub fn plus(&self, other: &Self) -> Self {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn minus(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// All dimension vectors with `vars` entries and total degree `<= n`,
    /// ordered by total degree, then lexicographically.
    pub fn all_up_to(vars: usize, n: u32) -> Vec<DimVector> {
        let mut out = Vec::new();
        for d in 0..=n {
            let mut cur = vec![0u32; vars];
            compositions(&mut cur, 0, d, &mut out);
        }
        out
    }
}

fn compositions(cur: &mut Vec<u32>, idx: usize, remaining: u32, out: &mut Vec<DimVector>) {
    if idx + 1 == cur.len() {
        cur[idx] = remaining;
        out.push(DimVector(cur.clone()));
        return;
    }
    for x in (0..=remaining).rev() {
        cur[idx] = x;
        compositions(cur, idx + 1, remaining - x, out);
    }
    cur[idx] = 0;
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for DimVector {
    fn from(v: Vec<u32>) -> Self {
        DimVector(v)
    }
}

impl<const N: usize> From<[u32; N]> for DimVector {
    fn from(v: [u32; N]) -> Self {
        DimVector(v.to_vec())
    }
}

/// A commutative coefficient ring carrying Adams operations.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiply by the rational number `num / den`.
    fn scale_ratio(&self, num: i64, den: i64) -> Self;
    fn adams(&self, k: u32) -> Self;
}

impl Coefficient for MotivicScalar {
    fn zero() -> Self {
        MotivicScalar::zero()
    }
    fn one() -> Self {
        MotivicScalar::one()
    }
    fn is_zero(&self) -> bool {
        MotivicScalar::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&BigRational::new(num.into(), den.into()))
    }
    fn adams(&self, k: u32) -> Self {
        MotivicScalar::adams(self, k)
    }
}

/// Rationals with the trivial lambda structure (every element a sum of
/// the line element 1), so Adams operations are the identity.
impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self * BigRational::new(num.into(), den.into())
    }
    fn adams(&self, _k: u32) -> Self {
        self.clone()
    }
}

#[derive(Clone, PartialEq)]
pub struct Series<C> {
    vars: usize,
    truncation: u32,
    coeffs: BTreeMap<DimVector, C>,
}

/// Series over the motivic coefficient ring.
pub type MSeries = Series<MotivicScalar>;

impl<C: Coefficient> Series<C> {
    pub fn zero(vars: usize, truncation: u32) -> Self {
        assert!(vars >= 1 && truncation >= 1, "series needs vars >= 1 and truncation >= 1");
        Series {
            vars,
            truncation,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize, truncation: u32) -> Self {
        let mut s = Self::zero(vars, truncation);
        s.coeffs.insert(DimVector::zero(vars), C::one());
        s
    }

    pub fn monomial(vars: usize, truncation: u32, alpha: DimVector, c: C) -> Self {
        let mut s = Self::zero(vars, truncation);
        s.insert(alpha, c);
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Sets the coefficient at `alpha`; out-of-range and zero entries are dropped.
    pub fn insert(&mut self, alpha: DimVector, c: C) {
        assert_eq!(alpha.len(), self.vars, "dimension vector length");
        if alpha.total() > self.truncation || c.is_zero() {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, c);
        }
    }

    fn accumulate(&mut self, alpha: DimVector, c: &C) {
        if alpha.total() > self.truncation || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&alpha) {
            Some(e) => {
                let s = e.add(c);
                if s.is_zero() {
                    self.coeffs.remove(&alpha);
                } else {
                    *e = s;
                }
            }
            None => {
                self.coeffs.insert(alpha, c.clone());
            }
        }
    }

    pub fn get(&self, alpha: &DimVector) -> Option<&C> {
        self.coeffs.get(alpha)
    }

    pub fn coeff(&self, alpha: &DimVector) -> C {
        self.coeffs.get(alpha).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&DimVector::zero(self.vars))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DimVector, &C)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same series re-truncated at a lower bound.
    pub fn truncate(&self, n: u32) -> Self {
        assert!(n >= 1);
        Series {
            vars: self.vars,
            truncation: n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| a.total() <= n)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_shape(&self, other: &Self) -> Result<(), SeriesError> {
        if self.vars != other.vars || self.truncation != other.truncation {
            return Err(SeriesError::ShapeMismatch(
                self.vars,
                self.truncation,
                other.vars,
                other.truncation,
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.accumulate(a.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.scale_ratio(-1, 1))
    }

    /// Cauchy product, truncated.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.vars, self.truncation);
        for (a, c) in &self.coeffs {
            for (b, d) in &other.coeffs {
                if a.total() + b.total() > self.truncation {
                    continue;
                }
                out.accumulate(a.plus(b), &c.mul(d));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.vars, self.truncation);
        for (a, d) in &self.coeffs {
            out.insert(a.clone(), d.mul(c));
        }
        out
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        let mut out = Self::zero(self.vars, self.truncation);
        for (a, d) in &self.coeffs {
            out.insert(a.clone(), d.scale_ratio(num, den));
        }
        out
    }

    /// The induced Adams operation `c t^alpha -> psi_k(c) t^(k alpha)`.
    pub fn adams(&self, k: u32) -> Self {
        assert!(k >= 1);
        let mut out = Self::zero(self.vars, self.truncation);
        for (a, c) in &self.coeffs {
            let ka = a.scaled(k);
            if ka.total() <= self.truncation {
                out.insert(ka, c.adams(k));
            }
        }
        out
    }

    /// Multiplies the coefficient at `a` by `(-1)^(sum of a_i over flagged i)`,
    /// i.e. substitutes `t_i -> -t_i` for every flagged variable.
    pub fn sign_twist(&self, flagged: &[bool]) -> Self {
        assert_eq!(flagged.len(), self.vars, "one flag per variable");
        let mut out = self.clone();
        for (a, c) in out.coeffs.iter_mut() {
            let odd: u32 = a.0.iter().zip(flagged).filter(|(_, f)| **f).map(|(x, _)| *x).sum();
            if odd % 2 == 1 {
                *c = C::zero().sub(c);
            }
        }
        out
    }

    /// Ordinary exponential of a series with zero constant term, from the
    /// Euler-operator recurrence `|a| E_a = sum_b |b| S_b E_(a-b)`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut out = Self::one(self.vars, self.truncation);
        for alpha in DimVector::all_up_to(self.vars, self.truncation).into_iter().skip(1) {
            let mut acc = C::zero();
            for (beta, s) in &self.coeffs {
                let Some(rest) = alpha.minus(beta) else { continue };
                let Some(e) = out.coeffs.get(&rest) else { continue };
                let w = beta.total() as i64;
                acc = acc.add(&s.mul(e).scale_ratio(w, 1));
            }
            let acc = acc.scale_ratio(1, alpha.total() as i64);
            out.insert(alpha, acc);
        }
        Ok(out)
    }

    /// Ordinary logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.constant_term() != C::one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let mut out = Self::zero(self.vars, self.truncation);
        for alpha in DimVector::all_up_to(self.vars, self.truncation).into_iter().skip(1) {
            let n = alpha.total() as i64;
            let mut acc = self.coeff(&alpha).scale_ratio(n, 1);
            for (beta, l) in &out.coeffs {
                let Some(rest) = alpha.minus(beta) else { continue };
                if rest.is_zero() {
                    continue;
                }
                let Some(f) = self.coeffs.get(&rest) else { continue };
                acc = acc.sub(&l.mul(f).scale_ratio(beta.total() as i64, 1));
            }
            out.insert(alpha, acc.scale_ratio(1, n));
        }
        Ok(out)
    }

    /// `sum_{k=1..N} psi_k(f) / k`, the argument of the ordinary exponential
    /// in the Adams form of `Exp`.
    pub fn adams_sum(&self) -> Self {
        let mut out = Self::zero(self.vars, self.truncation);
        for k in 1..=self.truncation {
            for (a, c) in &self.adams(k).coeffs {
                out.accumulate(a.clone(), &c.scale_ratio(1, k as i64));
            }
        }
        out
    }

    /// Plethystic exponential `Exp(f) = exp(sum_k psi_k(f)/k)`.
    pub fn plethystic_exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        self.adams_sum().exp()
    }

    /// Plethystic logarithm `Log(f) = sum_k mu(k)/k psi_k(log f)`.
    pub fn plethystic_log(&self) -> Result<Self, SeriesError> {
        if self.constant_term() != C::one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let l = self.log()?;
        let mut out = Self::zero(self.vars, self.truncation);
        for k in 1..=self.truncation {
            let mu = mobius(k);
            if mu == 0 {
                continue;
            }
            for (a, c) in &l.adams(k).coeffs {
                out.accumulate(a.clone(), &c.scale_ratio(mu, k as i64));
            }
        }
        Ok(out)
    }
}

/// The Moebius function.
pub fn mobius(n: u32) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

impl<C: Coefficient> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[vars={}, N={}]", self.vars, self.truncation)?;
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

#[derive(Serialize)]
struct JsonCoeff<'a> {
    alpha: &'a DimVector,
    value: String,
}

#[derive(Serialize)]
struct JsonSeries<'a> {
    truncation: u32,
    vars: usize,
    coeffs: Vec<JsonCoeff<'a>>,
}

impl<C: Coefficient + fmt::Display> Series<C> {
    /// Stable JSON rendering with coefficients sorted by dimension vector.
    pub fn to_json(&self) -> String {
        let doc = JsonSeries {
            truncation: self.truncation,
            vars: self.vars,
            coeffs: self
                .coeffs
                .iter()
                .map(|(alpha, c)| JsonCoeff {
                    alpha,
                    value: c.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("series json")
    }

    /// One `alpha<TAB>value` line per stored coefficient.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (alpha, c) in &self.coeffs {
            out.push_str(&format!("{alpha}\t{c}\n"));
        }
        out
    }
}

/// One summand `motive * t^a / (1 - t^b)` of a closed-form Exp argument.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormTerm {
    pub motive: MotivicScalar,
    pub numerator_exponent: DimVector,
    pub period: DimVector,
}

impl ClosedFormTerm {
    pub fn new(motive: MotivicScalar, numerator_exponent: DimVector, period: DimVector) -> Self {
        ClosedFormTerm {
            motive,
            numerator_exponent,
            period,
        }
    }
}

/// Expands each term as `motive * sum_j t^(a + j b)` up to total degree `n`.
pub fn expand_closed_form(
    terms: &[ClosedFormTerm],
    vars: usize,
    n: u32,
) -> Result<MSeries, SeriesError> {
    let mut out = MSeries::zero(vars, n);
    for term in terms {
        for v in [&term.numerator_exponent, &term.period] {
            if v.len() != vars {
                return Err(SeriesError::DimensionMismatch(v.len(), vars));
            }
        }
        if term.numerator_exponent.is_zero() {
            return Err(SeriesError::ZeroNumeratorExponent);
        }
        if term.period.is_zero() {
            return Err(SeriesError::ZeroPeriod);
        }
        let mut e = term.numerator_exponent.clone();
        while e.total() <= n {
            out.accumulate(e.clone(), &term.motive);
            e = e.plus(&term.period);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> MotivicScalar {
        s.parse().unwrap()
    }

    fn t(vars: usize, n: u32, alpha: &[u32], c: &str) -> MSeries {
        MSeries::monomial(vars, n, DimVector(alpha.to_vec()), m(c))
    }

    #[test]
    fn arithmetic_examples() {
        let one = MSeries::one(1, 2);
        let x = t(1, 2, &[1], "1");
        let p = one.add(&x).unwrap().mul(&one.sub(&x).unwrap()).unwrap();
        assert_eq!(p, one.sub(&t(1, 2, &[2], "1")).unwrap());

        let prod = t(2, 2, &[1, 0], "1").mul(&t(2, 2, &[0, 1], "1")).unwrap();
        assert_eq!(prod, t(2, 2, &[1, 1], "1"));

        let n = 4;
        let mut geo = MSeries::zero(1, n);
        for k in 0..=n {
            geo.insert(DimVector(vec![k]), m("1"));
        }
        let tele = geo.mul(&MSeries::one(1, n).sub(&t(1, n, &[1], "1")).unwrap()).unwrap();
        assert_eq!(tele, MSeries::one(1, n));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = MSeries::one(1, 2);
        let b = MSeries::one(2, 2);
        let c = MSeries::one(1, 3);
        assert!(matches!(a.add(&b), Err(SeriesError::ShapeMismatch(..))));
        assert!(matches!(a.mul(&c), Err(SeriesError::ShapeMismatch(..))));
    }

    #[test]
    fn adams_series_examples() {
        let a = m("(2*L - 1)/(L - 1)");
        let f = MSeries::monomial(1, 4, DimVector(vec![1]), a.clone());
        assert_eq!(f.adams(2), MSeries::monomial(1, 4, DimVector(vec![2]), a.adams(2)));
        assert_eq!(t(1, 4, &[1], "L").adams(2), t(1, 4, &[2], "L^2"));
        let g = t(2, 3, &[1, 0], "1").add(&t(2, 3, &[0, 1], "1")).unwrap();
        let expect = t(2, 3, &[3, 0], "1").add(&t(2, 3, &[0, 3], "1")).unwrap();
        assert_eq!(g.adams(3), expect);
        // terms pushed past the truncation disappear
        assert!(t(1, 3, &[2], "1").adams(2).is_empty());
    }

    #[test]
    fn exp_of_line_elements_is_geometric() {
        let n = 5;
        let e = t(1, n, &[1], "1").plethystic_exp().unwrap();
        for k in 0..=n {
            assert_eq!(e.coeff(&DimVector(vec![k])), MotivicScalar::one());
        }
        let e = t(1, n, &[1], "L").plethystic_exp().unwrap();
        for k in 0..=n {
            assert_eq!(e.coeff(&DimVector(vec![k])), MotivicScalar::lefschetz().pow(k as i32).unwrap());
        }
    }

    #[test]
    fn exp_second_coefficient_of_geometric_argument() {
        // a t/(1-t): order-2 coefficient a + (psi_2(a) + a^2)/2
        let a = m("(2*L - 1)/(L - 1)");
        let term = ClosedFormTerm::new(a.clone(), DimVector(vec![1]), DimVector(vec![1]));
        let f = expand_closed_form(&[term], 1, 2).unwrap();
        let e = f.plethystic_exp().unwrap();
        let expect = m("(2*L - 1)/(L - 1) + ((2*L^2 - 1)/(L^2 - 1) + (2*L - 1)^2/(L - 1)^2)/2");
        assert_eq!(e.coeff(&DimVector(vec![2])), expect);
        let half = BigRational::new(1.into(), 2.into());
        let by_formula = &a + &(&a.adams(2) + &(&a * &a)).scale(&half);
        assert_eq!(expect, by_formula);
    }

    #[test]
    fn exp_and_log_errors() {
        assert_eq!(MSeries::one(1, 3).plethystic_exp(), Err(SeriesError::NonzeroConstantTerm));
        assert_eq!(t(1, 3, &[1], "1").plethystic_log(), Err(SeriesError::ConstantTermNotOne));
        assert_eq!(MSeries::one(1, 3).scale_ratio(2, 1).log(), Err(SeriesError::ConstantTermNotOne));
    }

    #[test]
    fn log_inverts_exp_examples() {
        let n = 5;
        let mut geo = MSeries::zero(1, n);
        for k in 0..=n {
            geo.insert(DimVector(vec![k]), m("1"));
        }
        assert_eq!(geo.plethystic_log().unwrap(), t(1, n, &[1], "1"));

        let f = t(2, 4, &[1, 0], "L^(1/2)/(L - 1)")
            .add(&t(2, 4, &[1, 1], "-2*L + 3"))
            .unwrap();
        assert_eq!(f.plethystic_exp().unwrap().plethystic_log().unwrap(), f);
    }

    #[test]
    fn log_of_mixed_product_roundtrips() {
        // (1-t)^(-1) (1-t^2)^(-(L-1)) = Exp(t + (L-1) t^2)
        let n = 6;
        let arg = t(1, n, &[1], "1").add(&t(1, n, &[2], "L - 1")).unwrap();
        let prod = arg.plethystic_exp().unwrap();
        assert_eq!(prod.plethystic_log().unwrap(), arg);
        assert_eq!(prod.coeff(&DimVector(vec![2])), m("L"));
    }

    #[test]
    fn expand_closed_form_examples() {
        let term = ClosedFormTerm::new(m("1"), DimVector(vec![1]), DimVector(vec![1]));
        let s = expand_closed_form(&[term], 1, 3).unwrap();
        let mut expect = MSeries::zero(1, 3);
        for k in 1..=3 {
            expect.insert(DimVector(vec![k]), m("1"));
        }
        assert_eq!(s, expect);

        let c = m("-1/(L^(1/2) - L^(-1/2))");
        let term = ClosedFormTerm::new(c.clone(), DimVector(vec![1, 0]), DimVector(vec![1, 1]));
        let s = expand_closed_form(&[term], 2, 4).unwrap();
        let keys: Vec<_> = s.iter().map(|(a, _)| a.0.clone()).collect();
        assert_eq!(keys, vec![vec![1, 0], vec![2, 1]]);
        assert!(s.iter().all(|(_, v)| *v == c));
    }

    #[test]
    fn expand_closed_form_errors() {
        let z = ClosedFormTerm::new(m("1"), DimVector(vec![0]), DimVector(vec![1]));
        assert_eq!(expand_closed_form(&[z], 1, 3), Err(SeriesError::ZeroNumeratorExponent));
        let z = ClosedFormTerm::new(m("1"), DimVector(vec![1]), DimVector(vec![0]));
        assert_eq!(expand_closed_form(&[z], 1, 3), Err(SeriesError::ZeroPeriod));
    }

    #[test]
    fn json_is_sorted_and_stable() {
        let s = t(2, 2, &[1, 0], "L").add(&t(2, 2, &[0, 1], "(2*L - 1)/(L - 1)")).unwrap();
        let json = s.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["truncation"], 2);
        assert_eq!(v["vars"], 2);
        assert_eq!(v["coeffs"][0]["alpha"], serde_json::json!([0, 1]));
        assert_eq!(v["coeffs"][0]["value"], "(2*L - 1)/(L - 1)");
        assert_eq!(v["coeffs"][1]["value"], "L");
        assert_eq!(json, s.clone().to_json());
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn all_up_to_counts_monomials() {
        assert_eq!(DimVector::all_up_to(2, 3).len(), 10);
        assert_eq!(DimVector::all_up_to(3, 2).len(), 10);
        assert_eq!(DimVector::all_up_to(1, 4).len(), 5);
    }
}
