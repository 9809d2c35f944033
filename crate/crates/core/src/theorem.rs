//! Closed-form universal series for the four deformation families and the
//! dimensional-reduction bookkeeping that links them to point counts.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus::{self, CyclicLayout};
use crate::error::{ModelError, MotiveError, OracleError, SeriesError, VerifyError};
use crate::model::{canonical_rotation, QuiverModel, Word};
use crate::motive::MotivicScalar;
use crate::oracle::field::inv_mod;
use crate::params::{Assignment, ParamPoly};
use crate::series::{expand_closed_form, ClosedFormTerm, DimVector, MSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    QuantumC3,
    Jordan,
    Conifold,
    /// The cyclic quiver on `n + 1` vertices.
    Cyclic(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Generic,
    RootOfUnity(u32),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::QuantumC3 => write!(f, "quantum-c3"),
            Family::Jordan => write!(f, "jordan"),
            Family::Conifold => write!(f, "conifold"),
            Family::Cyclic(n) => write!(f, "cyclic-{n}"),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quantum-c3" => Ok(Family::QuantumC3),
            "jordan" => Ok(Family::Jordan),
            "conifold" => Ok(Family::Conifold),
            _ => match s.strip_prefix("cyclic-").map(str::parse::<usize>) {
                Some(Ok(n)) if n >= 1 => Ok(Family::Cyclic(n)),
                _ => Err(format!(
                    "unknown family '{s}' (expected quantum-c3, jordan, conifold or cyclic-<n>)"
                )),
            },
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Generic => write!(f, "generic"),
            Branch::RootOfUnity(r) => write!(f, "root:{r}"),
        }
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "generic" {
            return Ok(Branch::Generic);
        }
        match s.strip_prefix("root:").map(str::parse::<u32>) {
            Some(Ok(r)) if r >= 1 => Ok(Branch::RootOfUnity(r)),
            _ => Err(format!("unknown branch '{s}' (expected generic or root:<r>)")),
        }
    }
}

/// `L^(1/2) - L^(-1/2)`.
fn half_difference() -> MotivicScalar {
    &MotivicScalar::half_power(1) - &MotivicScalar::half_power(-1)
}

fn over_half_difference(num: MotivicScalar) -> MotivicScalar {
    &num / &half_difference()
}

fn l_minus_one() -> MotivicScalar {
    &MotivicScalar::lefschetz() - &MotivicScalar::one()
}

/// `(a L^(1/2) - L^(-1/2)) / (L^(1/2) - L^(-1/2))`.
pub fn half_ratio(a: i64) -> MotivicScalar {
    let num = &MotivicScalar::half_power(1).scale(&num_rational::BigRational::from_integer(a.into()))
        - &MotivicScalar::half_power(-1);
    over_half_difference(num)
}

/// Coefficient of `t^delta/(1 - t^delta)` for the cyclic quiver on `n + 1`
/// vertices. Brute-force counts fix the multiple of `L^(1/2)` at `n + 2`.
pub fn cyclic_delta_coefficient(n: usize) -> MotivicScalar {
    half_ratio(n as i64 + 2)
}

pub fn cyclic_delta(n: usize) -> DimVector {
    DimVector(vec![1; n + 1])
}

/// Cyclic intervals `delta_i + ... + delta_(i+k)`, `k < n`, indices mod `n + 1`.
pub fn cyclic_intervals(n: usize) -> Vec<DimVector> {
    let m = n + 1;
    let mut out = Vec::new();
    for i in 0..m {
        for k in 0..n {
            let mut v = vec![0; m];
            for j in 0..=k {
                v[(i + j) % m] = 1;
            }
            out.push(DimVector(v));
        }
    }
    out
}

/// Exp argument for the cyclic quiver with a chosen `t^delta` coefficient.
pub fn cyclic_terms(n: usize, delta_coefficient: MotivicScalar) -> Vec<ClosedFormTerm> {
    let delta = cyclic_delta(n);
    let mut terms = vec![ClosedFormTerm::new(delta_coefficient, delta.clone(), delta.clone())];
    let simple = over_half_difference(MotivicScalar::half_power(1));
    for a in cyclic_intervals(n) {
        terms.push(ClosedFormTerm::new(simple.clone(), a, delta.clone()));
    }
    terms
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoremSpec {
    pub family: Family,
    pub branch: Branch,
}

impl TheoremSpec {
    pub fn new(family: Family, branch: Branch) -> Result<Self, VerifyError> {
        if let Family::Cyclic(0) = family {
            return Err(VerifyError::FamilyMismatch(family.to_string(), "needs n >= 1".into()));
        }
        if family == Family::Jordan && branch != Branch::Generic {
            return Err(VerifyError::BranchMismatch(
                "the Jordan family has no root-of-unity branch".into(),
            ));
        }
        Ok(TheoremSpec { family, branch })
    }

    pub fn vars(&self) -> usize {
        match self.family {
            Family::QuantumC3 | Family::Jordan => 1,
            Family::Conifold => 2,
            Family::Cyclic(n) => n + 1,
        }
    }

    /// Vertices with `chi(e_i, e_i)` odd, i.e. an even number of loops.
    pub fn odd_vertices(&self) -> Vec<bool> {
        match self.family {
            Family::Conifold => vec![true, true],
            _ => vec![false; self.vars()],
        }
    }

    /// Direction `b` of the root-of-unity correction `(L-1) t^(rb)/(1-t^(rb))`.
    pub fn correction_period(&self) -> Option<DimVector> {
        match self.family {
            Family::QuantumC3 => Some(DimVector(vec![1])),
            Family::Jordan => None,
            Family::Conifold => Some(DimVector(vec![1, 1])),
            Family::Cyclic(n) => Some(cyclic_delta(n)),
        }
    }

    pub fn generic_terms(&self) -> Vec<ClosedFormTerm> {
        let one = DimVector(vec![1]);
        match self.family {
            Family::QuantumC3 => vec![ClosedFormTerm::new(
                "(2*L - 1)/(L - 1)".parse().expect("literal"),
                one.clone(),
                one,
            )],
            Family::Jordan => vec![ClosedFormTerm::new(
                "L/(L - 1)".parse().expect("literal"),
                one.clone(),
                one,
            )],
            Family::Conifold => {
                let d = DimVector(vec![1, 1]);
                let edge = over_half_difference(MotivicScalar::from_int(-1));
                vec![
                    ClosedFormTerm::new(half_ratio(3), d.clone(), d.clone()),
                    ClosedFormTerm::new(edge.clone(), DimVector(vec![1, 0]), d.clone()),
                    ClosedFormTerm::new(edge, DimVector(vec![0, 1]), d),
                ]
            }
            Family::Cyclic(n) => cyclic_terms(n, cyclic_delta_coefficient(n)),
        }
    }

    /// The full Exp argument for this branch.
    pub fn terms(&self) -> Vec<ClosedFormTerm> {
        let mut terms = self.generic_terms();
        if let (Branch::RootOfUnity(r), Some(b)) = (self.branch, self.correction_period()) {
            let rb = b.scaled(r);
            terms.push(ClosedFormTerm::new(l_minus_one(), rb.clone(), rb));
        }
        terms
    }

    /// Whether this branch describes a parameter of multiplicative order
    /// `order` at dimension vector `alpha`. The generic formula stays exact
    /// as long as `alpha` does not dominate `order * b`.
    pub fn admits(&self, alpha: &DimVector, order: u32) -> bool {
        match (self.branch, self.correction_period()) {
            (Branch::RootOfUnity(r), _) => r == order,
            (Branch::Generic, None) => true,
            (Branch::Generic, Some(b)) => !alpha.dominates(&b.scaled(order)),
        }
    }

    /// The branch selected from the order of the parameter at `alpha`.
    pub fn auto_branch(family: Family, alpha: &DimVector, order: u32) -> Branch {
        let generic = TheoremSpec {
            family,
            branch: Branch::Generic,
        };
        if generic.admits(alpha, order) {
            Branch::Generic
        } else {
            Branch::RootOfUnity(order)
        }
    }
}

/// `Exp` of the expanded term list, truncated at `n`, in the convention where
/// the coefficient at `alpha` is `(-v)^(chi + 2 d_I) [R]/[G]`.
///
/// With `-v` a line element, `Exp` only reproduces point counts after
/// substituting `t_i -> -t_i` on both sides for every vertex with
/// `chi(e_i, e_i)` odd. The substitution is the identity unless some
/// vertex has an even number of loops.
pub fn theorem_series(spec: &TheoremSpec, n: u32) -> Result<MSeries, SeriesError> {
    let f = expand_closed_form(&spec.terms(), spec.vars(), n)?;
    let odd = spec.odd_vertices();
    if odd.iter().any(|&o| o) {
        Ok(f.sign_twist(&odd).plethystic_exp()?.sign_twist(&odd))
    } else {
        f.plethystic_exp()
    }
}

/// `chi(alpha, alpha) + 2 d_I(alpha)`.
pub fn dimred_exponent(model: &QuiverModel, cut: &[usize], alpha: &[u32]) -> Result<i64, ModelError> {
    if let crate::model::CutCheck::Invalid(why) = model.validate_cut(cut) {
        return Err(ModelError::InvalidCut(why));
    }
    Ok(model.euler_form(alpha, alpha)? + 2 * model.cut_degree(cut, alpha)?)
}

/// `(-L^(1/2))^(chi(alpha, alpha) + 2 d_I(alpha))`.
pub fn dimred_prefactor(model: &QuiverModel, cut: &[usize], alpha: &[u32]) -> Result<MotivicScalar, ModelError> {
    Ok(MotivicScalar::neg_sqrt_lefschetz_pow(dimred_exponent(model, cut, alpha)?))
}

/// The class `[R]/[G_alpha]` predicted by `series` at `alpha`.
pub fn reduced_class(
    series: &MSeries,
    model: &QuiverModel,
    cut: &[usize],
    alpha: &DimVector,
) -> Result<MotivicScalar, VerifyError> {
    let e = dimred_exponent(model, cut, &alpha.0)?;
    let c = series.coeff(alpha);
    let class = &c * &MotivicScalar::neg_sqrt_lefschetz_pow(-e);
    if !class.is_even() {
        return Err(MotiveError::OddHalfPower.into());
    }
    Ok(class)
}

/// `prod num / prod den` over potential coefficients, the one invariant of
/// the coefficients under rescaling the arrows.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveParameter {
    pub num: Vec<ParamPoly>,
    pub den: Vec<ParamPoly>,
}

impl EffectiveParameter {
    pub fn none() -> Self {
        EffectiveParameter {
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.num.is_empty() && self.den.is_empty()
    }

    pub fn eval_mod(&self, assignment: &Assignment, p: u32) -> Result<u32, OracleError> {
        let mut v = 1u32;
        for f in &self.num {
            v = v * f.eval_mod(assignment, p)? % p;
        }
        for f in &self.den {
            let d = f.eval_mod(assignment, p)?;
            v = v * inv_mod(d, p).ok_or(OracleError::CoefficientPole(p as u64))? % p;
        }
        Ok(v)
    }

    /// Symbolic form, simplified when the denominator is constant.
    pub fn render(&self) -> String {
        let num = self.num.iter().fold(ParamPoly::one(), |a, f| a.mul(f));
        let den = self.den.iter().fold(ParamPoly::one(), |a, f| a.mul(f));
        match den.as_constant() {
            Some(c) if !num_traits::Zero::is_zero(&c) => num.scale(&c.recip()).to_string(),
            _ => format!("({num})/({den})"),
        }
    }
}

fn word_of(model: &QuiverModel, names: &[&str]) -> Result<Word, String> {
    let w: Result<Word, _> = names.iter().map(|n| model.arrow_index(n)).collect();
    w.map(|w| canonical_rotation(&w)).map_err(|e| e.to_string())
}

fn reference_model(family: Family) -> QuiverModel {
    match family {
        Family::QuantumC3 => corpus::load("q1_quantum.qp"),
        Family::Jordan => corpus::load("q1_jordan.qp"),
        Family::Conifold => corpus::load("conifold.qp"),
        Family::Cyclic(n) => corpus::cyclic_model(n, CyclicLayout::Uniform),
    }
}

/// Checks that `model` has the quiver and potential words of `family`, and
/// returns the parameter whose multiplicative order selects the branch.
pub fn effective_parameter(model: &QuiverModel, family: Family) -> Result<EffectiveParameter, VerifyError> {
    let mismatch = |why: String| VerifyError::FamilyMismatch(family.to_string(), why);
    if let Family::Cyclic(0) = family {
        return Err(mismatch("needs n >= 1".into()));
    }
    let reference = reference_model(family);
    if model.vertices.len() != reference.vertices.len() {
        return Err(mismatch(format!(
            "expected {} vertices, found {}",
            reference.vertices.len(),
            model.vertices.len()
        )));
    }
    for a in &reference.arrows {
        match model.arrows.iter().find(|b| b.name == a.name) {
            Some(b) if b.source == a.source && b.target == a.target => {}
            Some(_) => return Err(mismatch(format!("arrow {} has the wrong endpoints", a.name))),
            None => return Err(mismatch(format!("missing arrow {}", a.name))),
        }
    }
    if model.arrows.len() != reference.arrows.len() {
        return Err(mismatch("extra arrows".into()));
    }
    let classes = model.potential_classes();
    let coeff = |names: &[&str]| -> Result<ParamPoly, VerifyError> {
        let w = word_of(model, names).map_err(mismatch)?;
        classes
            .get(&w)
            .cloned()
            .ok_or_else(|| mismatch(format!("potential lacks the word {}", names.join("*"))))
    };
    let expected_words = reference.potential_classes().len();
    if classes.len() != expected_words {
        return Err(mismatch(format!(
            "expected {expected_words} cyclic words in the potential, found {}",
            classes.len()
        )));
    }
    match family {
        Family::QuantumC3 => Ok(EffectiveParameter {
            num: vec![coeff(&["x", "z", "y"])?.neg()],
            den: vec![coeff(&["x", "y", "z"])?],
        }),
        Family::Jordan => {
            let a = coeff(&["x", "y", "z"])?;
            let b = coeff(&["x", "z", "y"])?;
            coeff(&["z", "y", "y"])?;
            if a.add(&b).is_zero() {
                Ok(EffectiveParameter::none())
            } else {
                Err(mismatch("the x*y*z and x*z*y coefficients must cancel".into()))
            }
        }
        Family::Conifold => Ok(EffectiveParameter {
            num: vec![coeff(&["a1", "b2", "a2", "b1"])?.neg()],
            den: vec![coeff(&["a1", "b1", "a2", "b2"])?],
        }),
        Family::Cyclic(n) => {
            let m = n + 1;
            let mut num = Vec::new();
            let mut den = Vec::new();
            for i in 0..m {
                let (a, s, b, b1) = (
                    format!("a{i}"),
                    format!("as{i}"),
                    format!("b{i}"),
                    format!("b{}", (i + 1) % m),
                );
                num.push(coeff(&[&b, &a, &s])?.neg());
                den.push(coeff(&[&b1, &s, &a])?);
            }
            Ok(EffectiveParameter { num, den })
        }
    }
}

/// The first family whose shape matches the model.
pub fn detect_family(model: &QuiverModel) -> Option<Family> {
    let mut candidates = vec![Family::QuantumC3, Family::Jordan, Family::Conifold];
    if model.vertices.len() >= 2 {
        candidates.push(Family::Cyclic(model.vertices.len() - 1));
    }
    candidates
        .into_iter()
        .find(|f| effective_parameter(model, *f).is_ok())
}
