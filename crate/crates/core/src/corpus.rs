//! Shipped model files and the cyclic-quiver generator.

use crate::dsl::parse_model;
use crate::model::QuiverModel;

pub const Q1_QUANTUM: &str = include_str!("../../../models/q1_quantum.qp");
pub const Q1_JORDAN: &str = include_str!("../../../models/q1_jordan.qp");
pub const Q1_WEYL: &str = include_str!("../../../models/q1_weyl.qp");
pub const Q1_SKLYANIN: &str = include_str!("../../../models/q1_sklyanin.qp");
pub const CONIFOLD: &str = include_str!("../../../models/conifold.qp");
pub const CYCLIC_1: &str = include_str!("../../../models/cyclic_1.qp");
pub const CYCLIC_2: &str = include_str!("../../../models/cyclic_2.qp");
pub const CYCLIC_3: &str = include_str!("../../../models/cyclic_3.qp");
pub const CYCLIC_4: &str = include_str!("../../../models/cyclic_4.qp");
pub const CYCLIC_1_SINGLE: &str = include_str!("../../../models/cyclic_1_single.qp");
pub const CYCLIC_2_SINGLE: &str = include_str!("../../../models/cyclic_2_single.qp");

/// `(file name, contents)` for every shipped model.
pub const CORPUS: &[(&str, &str)] = &[
    ("q1_quantum.qp", Q1_QUANTUM),
    ("q1_jordan.qp", Q1_JORDAN),
    ("q1_weyl.qp", Q1_WEYL),
    ("q1_sklyanin.qp", Q1_SKLYANIN),
    ("conifold.qp", CONIFOLD),
    ("cyclic_1.qp", CYCLIC_1),
    ("cyclic_2.qp", CYCLIC_2),
    ("cyclic_3.qp", CYCLIC_3),
    ("cyclic_4.qp", CYCLIC_4),
    ("cyclic_1_single.qp", CYCLIC_1_SINGLE),
    ("cyclic_2_single.qp", CYCLIC_2_SINGLE),
];

pub fn corpus_text(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a shipped model. Panics on an unknown name; the corpus is fixed.
pub fn load(name: &str) -> QuiverModel {
    let text = corpus_text(name).unwrap_or_else(|| panic!("no corpus model {name}"));
    parse_model(text).unwrap_or_else(|e| panic!("corpus model {name}: {e}"))
}

/// Where the parameter sits in the cyclic potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicLayout {
    /// `q` on every `b_i a_i as_i` term.
    Uniform,
    /// `q` on the `i = 0` term only.
    Single,
}

/// Model text for the cyclic quiver on `n + 1` vertices with loops `b_i`,
/// arrows `a_i: v_i -> v_(i+1)`, `as_i: v_(i+1) -> v_i`, and cut at the loops.
pub fn cyclic_model_text(n: usize, layout: CyclicLayout) -> String {
    assert!(n >= 1, "cyclic quiver needs n >= 1");
    let m = n + 1;
    let mut out = format!(
        "# Cyclic quiver on {m} vertices, {} deformation. Generated; do not edit.\n",
        match layout {
            CyclicLayout::Uniform => "uniform",
            CyclicLayout::Single => "single-parameter",
        }
    );
    for i in 0..m {
        out.push_str(&format!("vertex v{i}\n"));
    }
    for i in 0..m {
        out.push_str(&format!("arrow a{i}: v{i} -> v{}\n", (i + 1) % m));
    }
    for i in 0..m {
        out.push_str(&format!("arrow as{i}: v{} -> v{i}\n", (i + 1) % m));
    }
    for i in 0..m {
        out.push_str(&format!("arrow b{i}: v{i} -> v{i}\n"));
    }
    out.push_str("param q\n");
    for i in 0..m {
        let lead = if i == 0 { "potential W =" } else { " " };
        let q = match (layout, i) {
            (CyclicLayout::Uniform, _) | (CyclicLayout::Single, 0) => "q*",
            _ => "",
        };
        let plus = if i == 0 { "" } else { "+ " };
        out.push_str(&format!(
            "{lead} {plus}b{}*as{i}*a{i} - {q}b{i}*a{i}*as{i}\n",
            (i + 1) % m
        ));
    }
    let cut: Vec<String> = (0..m).map(|i| format!("b{i}")).collect();
    out.push_str(&format!("cut {{ {} }}\n", cut.join(", ")));
    out
}

pub fn cyclic_model(n: usize, layout: CyclicLayout) -> QuiverModel {
    parse_model(&cyclic_model_text(n, layout)).expect("generated cyclic model parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_corpus_file_parses() {
        for (name, text) in CORPUS {
            parse_model(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn shipped_cyclic_files_match_the_generator() {
        let shipped = [CYCLIC_1, CYCLIC_2, CYCLIC_3, CYCLIC_4];
        for (n, text) in shipped.iter().enumerate() {
            assert_eq!(*text, cyclic_model_text(n + 1, CyclicLayout::Uniform));
        }
        assert_eq!(CYCLIC_1_SINGLE, cyclic_model_text(1, CyclicLayout::Single));
        assert_eq!(CYCLIC_2_SINGLE, cyclic_model_text(2, CyclicLayout::Single));
    }

    #[test]
    fn cyclic_shape() {
        let m = cyclic_model(2, CyclicLayout::Uniform);
        assert_eq!(m.vertices.len(), 3);
        assert_eq!(m.arrows.len(), 9);
        assert_eq!(m.potential.len(), 6);
        assert_eq!(m.cut.as_ref().map(Vec::len), Some(3));
    }
}
