//! Quivers with parametric potentials.
//!
//! Words are stored in traversal order: `[x, y]` means x first, then y, so
//! composability requires `target(x) == source(y)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::ModelError;
use crate::params::{split_term, ParamPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A sequence of arrow indices in traversal order.
pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTerm {
    pub coeff: ParamPoly,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuiverModel {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub params: Vec<String>,
    pub potential_name: String,
    /// Kept in the order written; like words are not merged.
    pub potential: Vec<PotentialTerm>,
    pub cut: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutCheck {
    Valid,
    Invalid(String),
}

impl CutCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CutCheck::Valid)
    }
}

/// An element of the path algebra living between two fixed vertices.
/// Terms keep insertion order; equality compares the merged sums.
#[derive(Clone, Debug)]
pub struct NCPoly {
    pub start: usize,
    pub end: usize,
    pub terms: Vec<(ParamPoly, Word)>,
}

impl NCPoly {
    pub fn new(start: usize, end: usize) -> Self {
        NCPoly {
            start,
            end,
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, coeff: ParamPoly, word: Word) {
        self.terms.push((coeff, word));
    }

    /// Like words merged, zero coefficients dropped.
    pub fn merged(&self) -> BTreeMap<Word, ParamPoly> {
        let mut out: BTreeMap<Word, ParamPoly> = BTreeMap::new();
        for (c, w) in &self.terms {
            let e = out.entry(w.clone()).or_default();
            *e = e.add(c);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// The same element with like words combined, in first-seen order.
    pub fn simplified(&self) -> NCPoly {
        let merged = self.merged();
        let mut out = NCPoly::new(self.start, self.end);
        for (_, w) in &self.terms {
            if let Some(c) = merged.get(w) {
                if !out.terms.iter().any(|(_, seen)| seen == w) {
                    out.push(c.clone(), w.clone());
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.merged().is_empty()
    }

    pub fn arrows_used(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.iter().flat_map(|(_, w)| w.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Renders with arrow names, e.g. `x*y - q*y*x`. The empty word prints as `1`.
    pub fn render(&self, arrows: &[Arrow]) -> String {
        let simple = self.simplified();
        if simple.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (c, w)) in simple.terms.iter().enumerate() {
            let pieces = signed_pieces(c, &render_word(w, arrows));
            for (j, (neg, body)) in pieces.into_iter().enumerate() {
                out.push_str(match (i + j, neg) {
                    (0, true) => "-",
                    (0, false) => "",
                    (_, true) => " - ",
                    (_, false) => " + ",
                });
                out.push_str(&body);
            }
        }
        out
    }
}

impl PartialEq for NCPoly {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start && self.end == other.end && self.merged() == other.merged()
    }
}

pub fn render_word(w: &Word, arrows: &[Arrow]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter().map(|&a| arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
}

/// Splits `coeff * word` into signed printable terms, one per coefficient term.
pub(crate) fn signed_pieces(coeff: &ParamPoly, word: &str) -> Vec<(bool, String)> {
    coeff
        .terms()
        .map(|(mono, c)| {
            let (neg, body) = split_term(mono, c);
            let body = if word == "1" {
                body
            } else if mono.is_empty() && body == "1" {
                word.to_string()
            } else {
                format!("{body}*{word}")
            };
            (neg, body)
        })
        .collect()
}

/// The same cyclic word rotated to its least rotation.
pub fn canonical_rotation(w: &[usize]) -> Word {
    (0..w.len())
        .map(|i| {
            let mut r = w[i..].to_vec();
            r.extend_from_slice(&w[..i]);
            r
        })
        .min()
        .unwrap_or_default()
}

impl QuiverModel {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, ModelError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| ModelError::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize, ModelError> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| ModelError::UnknownArrow(name.to_string()))
    }

    pub fn arrow_indices(&self, names: &[&str]) -> Result<Vec<usize>, ModelError> {
        names.iter().map(|n| self.arrow_index(n)).collect()
    }

    pub fn arrow_names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.arrows[i].name.clone()).collect()
    }

    /// The potential as a sum over cyclic equivalence classes of words.
    pub fn potential_classes(&self) -> BTreeMap<Word, ParamPoly> {
        let mut out: BTreeMap<Word, ParamPoly> = BTreeMap::new();
        for t in &self.potential {
            let e = out.entry(canonical_rotation(&t.word)).or_default();
            *e = e.add(&t.coeff);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `dW/da`: every occurrence of `a` is rotated to the front and removed.
    pub fn cyclic_derivative(&self, a: usize) -> NCPoly {
        let arrow = &self.arrows[a];
        let mut out = NCPoly::new(arrow.target, arrow.source);
        for t in &self.potential {
            for (i, &b) in t.word.iter().enumerate() {
                if b == a {
                    let mut rest = t.word[i + 1..].to_vec();
                    rest.extend_from_slice(&t.word[..i]);
                    out.push(t.coeff.clone(), rest);
                }
            }
        }
        out
    }

    pub fn cyclic_derivative_by_name(&self, name: &str) -> Result<NCPoly, ModelError> {
        Ok(self.cyclic_derivative(self.arrow_index(name)?))
    }

    fn check_dim(&self, alpha: &[u32]) -> Result<(), ModelError> {
        if alpha.len() != self.vertices.len() {
            return Err(ModelError::DimensionMismatch(alpha.len(), self.vertices.len()));
        }
        Ok(())
    }

    /// `chi(a, b) = sum_i a_i b_i - sum_arrows a_s b_t`.
    pub fn euler_form(&self, alpha: &[u32], beta: &[u32]) -> Result<i64, ModelError> {
        self.check_dim(alpha)?;
        self.check_dim(beta)?;
        let diag: i64 = alpha.iter().zip(beta).map(|(a, b)| (*a as i64) * (*b as i64)).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|e| alpha[e.source] as i64 * beta[e.target] as i64)
            .sum();
        Ok(diag - off)
    }

    /// A cut must meet every potential word exactly once, counted with multiplicity.
    pub fn validate_cut(&self, cut: &[usize]) -> CutCheck {
        if cut.is_empty() {
            return CutCheck::Invalid("cut is empty".to_string());
        }
        for t in &self.potential {
            let deg = t.word.iter().filter(|a| cut.contains(a)).count();
            if deg != 1 {
                return CutCheck::Invalid(format!(
                    "word {} has cut degree {}",
                    render_word(&t.word, &self.arrows),
                    deg
                ));
            }
        }
        CutCheck::Valid
    }

    /// `d_I(alpha) = sum_{a: i -> j in I} alpha_i alpha_j`.
    pub fn cut_degree(&self, cut: &[usize], alpha: &[u32]) -> Result<i64, ModelError> {
        self.check_dim(alpha)?;
        Ok(cut
            .iter()
            .map(|&a| {
                let e = &self.arrows[a];
                alpha[e.source] as i64 * alpha[e.target] as i64
            })
            .sum())
    }

    /// The declared cut, or an error if none is declared.
    pub fn declared_cut(&self) -> Result<&[usize], ModelError> {
        self.cut
            .as_deref()
            .ok_or_else(|| ModelError::InvalidCut("model declares no cut".to_string()))
    }

    /// Removes the cut arrows and returns the relations `dW/da` for `a` in the cut,
    /// rewritten over the remaining arrows.
    pub fn reduced_presentation(&self, cut: &[usize]) -> Result<ReducedPresentation, ModelError> {
        if let CutCheck::Invalid(why) = self.validate_cut(cut) {
            return Err(ModelError::InvalidCut(why));
        }
        let mut remap = vec![usize::MAX; self.arrows.len()];
        let mut arrows = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if !cut.contains(&i) {
                remap[i] = arrows.len();
                arrows.push(a.clone());
            }
        }
        let mut relations = Vec::new();
        for &a in cut {
            let d = self.cyclic_derivative(a);
            let mut rel = NCPoly::new(d.start, d.end);
            for (c, w) in d.terms {
                let w: Word = w.iter().map(|&b| remap[b]).collect();
                debug_assert!(w.iter().all(|&b| b != usize::MAX));
                rel.push(c, w);
            }
            relations.push(rel);
        }
        let quiver = QuiverModel {
            vertices: self.vertices.clone(),
            arrows,
            params: self.params.clone(),
            potential_name: self.potential_name.clone(),
            potential: Vec::new(),
            cut: None,
        };
        Ok(ReducedPresentation { quiver, relations })
    }
}

/// The quiver without cut arrows, plus the relations cut out by the cut.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedPresentation {
    pub quiver: QuiverModel,
    pub relations: Vec<NCPoly>,
}

impl ReducedPresentation {
    pub fn arrows(&self) -> &[Arrow] {
        &self.quiver.arrows
    }

    pub fn render_relations(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.render(&self.quiver.arrows)).collect()
    }
}

impl fmt::Display for QuiverModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::render_model(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;

    const Q1: &str = "vertex v\narrow x: v -> v\narrow y: v -> v\narrow z: v -> v\nparam q\n";

    fn q1(potential: &str) -> QuiverModel {
        parse_model(&format!("{Q1}potential W = {potential}\n")).unwrap()
    }

    #[test]
    fn cyclic_derivative_examples() {
        let m = q1("x*y*z - q*x*z*y");
        let dz = m.cyclic_derivative_by_name("z").unwrap();
        assert_eq!(dz.render(&m.arrows), "x*y - q*y*x");
        let m = q1("x*y*z - x*z*y");
        assert_eq!(m.cyclic_derivative_by_name("x").unwrap().render(&m.arrows), "y*z - z*y");
    }

    #[test]
    fn rotation_does_not_change_derivatives() {
        let a = q1("x*y*z - q*x*z*y");
        let b = q1("z*x*y - q*y*x*z");
        for name in ["x", "y", "z"] {
            assert_eq!(
                a.cyclic_derivative_by_name(name).unwrap(),
                b.cyclic_derivative_by_name(name).unwrap()
            );
        }
    }

    #[test]
    fn euler_form_examples() {
        let m = q1("x*y*z");
        assert_eq!(m.euler_form(&[1], &[1]), Ok(-2));
        assert_eq!(m.euler_form(&[2], &[3]), Ok(2 * m.euler_form(&[1], &[3]).unwrap()));
        assert_eq!(m.euler_form(&[1, 1], &[1]), Err(ModelError::DimensionMismatch(2, 1)));
    }

    #[test]
    fn cut_checks() {
        let m = q1("x*y*z - x*z*y - z*y*y");
        let z = m.arrow_indices(&["z"]).unwrap();
        let x = m.arrow_indices(&["x"]).unwrap();
        assert_eq!(m.validate_cut(&z), CutCheck::Valid);
        assert_eq!(m.validate_cut(&x), CutCheck::Invalid("word z*y*y has cut degree 0".into()));
        let m = q1("z*z*y");
        assert!(!m.validate_cut(&z).is_valid());
        assert_eq!(m.cut_degree(&z, &[1]), Ok(1));
        assert_eq!(m.cut_degree(&z, &[2]), Ok(4));
    }

    #[test]
    fn reduced_presentation_of_quantum_space() {
        let m = q1("x*y*z - q*x*z*y");
        let z = m.arrow_indices(&["z"]).unwrap();
        let red = m.reduced_presentation(&z).unwrap();
        assert_eq!(red.arrows().len(), 2);
        assert_eq!(red.render_relations(), vec!["x*y - q*y*x".to_string()]);
        let x = m.arrow_indices(&["x", "z"]).unwrap();
        assert!(matches!(m.reduced_presentation(&x), Err(ModelError::InvalidCut(_))));
    }

    #[test]
    fn ncpoly_equality_ignores_order_and_merges() {
        let mut a = NCPoly::new(0, 0);
        a.push(ParamPoly::one(), vec![0, 1]);
        a.push(ParamPoly::param("q").neg(), vec![1, 0]);
        let mut b = NCPoly::new(0, 0);
        b.push(ParamPoly::param("q").neg(), vec![1, 0]);
        b.push(ParamPoly::from_int(2), vec![0, 1]);
        b.push(ParamPoly::from_int(-1), vec![0, 1]);
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }

    #[test]
    fn canonical_rotation_is_least() {
        assert_eq!(canonical_rotation(&[2, 0, 1]), vec![0, 1, 2]);
        assert_eq!(canonical_rotation(&[1, 0, 1, 0]), vec![0, 1, 0, 1]);
        assert_eq!(canonical_rotation(&[5]), vec![5]);
    }
}
