//! Line-oriented text format for quivers with potential.
//!
//! ```text
//! # quantum affine three-space
//! vertex v
//! arrow x: v -> v
//! arrow y: v -> v
//! arrow z: v -> v
//! param q
//! potential W = x*y*z - q*x*z*y
//! cut { z }
//! ```
//!
//! A potential may continue on following lines that start with `+` or `-`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;
use crate::model::{render_word, signed_pieces, Arrow, CutCheck, PotentialTerm, QuiverModel, Word};
use crate::params::ParamPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    To,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                col,
            });
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::To, col });
            i += 2;
        } else if "+-*/^(){},:=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(ParseError::new(lineno, col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    eol_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.eol_col, |t| t.col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn expect_to(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::To) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("expected '->'"))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let col = self.col();
                self.pos += 1;
                Ok((s.clone(), col))
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n.clone())
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn ident_list(&mut self) -> Result<Vec<(String, usize)>, ParseError> {
        let mut out = vec![self.ident()?];
        while self.eat_sym(',') {
            out.push(self.ident()?);
        }
        Ok(out)
    }
}

const KEYWORDS: [&str; 5] = ["vertex", "arrow", "param", "potential", "cut"];

#[derive(Default)]
struct Builder {
    model: QuiverModel,
    has_potential: bool,
    cut_at: Option<(usize, usize)>,
}

impl Default for QuiverModel {
    fn default() -> Self {
        QuiverModel {
            vertices: Vec::new(),
            arrows: Vec::new(),
            params: Vec::new(),
            potential_name: "W".to_string(),
            potential: Vec::new(),
            cut: None,
        }
    }
}

impl Builder {
    fn name_taken(&self, name: &str) -> bool {
        self.model.vertices.iter().any(|v| v == name)
            || self.model.arrows.iter().any(|a| a.name == name)
            || self.model.params.iter().any(|p| p == name)
    }

    fn declare(&self, cur: &Cursor, name: &str, col: usize) -> Result<(), ParseError> {
        if KEYWORDS.contains(&name) {
            return Err(ParseError::new(cur.line, col, format!("'{name}' is a reserved word")));
        }
        if self.name_taken(name) {
            return Err(ParseError::new(cur.line, col, format!("'{name}' is already declared")));
        }
        Ok(())
    }

    fn vertex(&self, cur: &Cursor, name: &str, col: usize) -> Result<usize, ParseError> {
        self.model
            .vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| ParseError::new(cur.line, col, format!("unknown vertex '{name}'")))
    }

    fn statement(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (kw, kw_col) = cur.ident()?;
        match kw.as_str() {
            "vertex" => {
                for (name, col) in cur.ident_list()? {
                    self.declare(cur, &name, col)?;
                    self.model.vertices.push(name);
                }
            }
            "arrow" => {
                let (name, col) = cur.ident()?;
                self.declare(cur, &name, col)?;
                cur.expect_sym(':')?;
                let (s, scol) = cur.ident()?;
                let source = self.vertex(cur, &s, scol)?;
                cur.expect_to()?;
                let (t, tcol) = cur.ident()?;
                let target = self.vertex(cur, &t, tcol)?;
                self.model.arrows.push(Arrow { name, source, target });
            }
            "param" => {
                for (name, col) in cur.ident_list()? {
                    self.declare(cur, &name, col)?;
                    self.model.params.push(name);
                }
            }
            "potential" => {
                if self.has_potential {
                    return Err(ParseError::new(cur.line, kw_col, "a second potential is not allowed"));
                }
                let (name, _) = cur.ident()?;
                cur.expect_sym('=')?;
                self.model.potential_name = name;
                self.has_potential = true;
                self.terms(cur, true)?;
            }
            "cut" => {
                if self.cut_at.is_some() {
                    return Err(ParseError::new(cur.line, kw_col, "a second cut is not allowed"));
                }
                cur.expect_sym('{')?;
                let mut cut = Vec::new();
                for (name, col) in cur.ident_list()? {
                    let idx = self.model.arrows.iter().position(|a| a.name == name).ok_or_else(|| {
                        ParseError::new(cur.line, col, format!("unknown arrow '{name}'"))
                    })?;
                    if cut.contains(&idx) {
                        return Err(ParseError::new(cur.line, col, format!("arrow '{name}' repeated in cut")));
                    }
                    cut.push(idx);
                }
                cur.expect_sym('}')?;
                self.model.cut = Some(cut);
                self.cut_at = Some((cur.line, kw_col));
            }
            _ => {
                return Err(ParseError::new(cur.line, kw_col, format!("unknown statement '{kw}'")));
            }
        }
        cur.expect_end()
    }

    /// `[+|-] term ((+|-) term)*`; a leading sign is optional only on the
    /// first term of the potential.
    fn terms(&mut self, cur: &mut Cursor, first: bool) -> Result<(), ParseError> {
        let mut first = first;
        loop {
            let negate = if cur.eat_sym('-') {
                true
            } else if cur.eat_sym('+') {
                false
            } else if first {
                false
            } else {
                return Err(cur.err("expected '+' or '-'"));
            };
            first = false;
            let mut term = self.term(cur)?;
            if negate {
                term.coeff = term.coeff.neg();
            }
            self.model.potential.push(term);
            if cur.at_end() {
                return Ok(());
            }
        }
    }

    fn term(&self, cur: &mut Cursor) -> Result<PotentialTerm, ParseError> {
        let start_col = cur.col();
        let mut coeff = ParamPoly::one();
        let mut word: Word = Vec::new();
        loop {
            self.factor(cur, &mut coeff, &mut word)?;
            if !cur.eat_sym('*') {
                break;
            }
        }
        if word.is_empty() {
            return Err(ParseError::new(cur.line, start_col, "term contains no arrows"));
        }
        if coeff.is_zero() {
            return Err(ParseError::new(cur.line, start_col, "term has zero coefficient"));
        }
        let arrows = &self.model.arrows;
        for pair in word.windows(2) {
            if arrows[pair[0]].target != arrows[pair[1]].source {
                return Err(ParseError::new(
                    cur.line,
                    start_col,
                    format!(
                        "word {} is not composable: {} does not end where {} starts",
                        render_word(&word, arrows),
                        arrows[pair[0]].name,
                        arrows[pair[1]].name
                    ),
                ));
            }
        }
        if arrows[*word.last().unwrap()].target != arrows[word[0]].source {
            return Err(ParseError::new(
                cur.line,
                start_col,
                format!("word {} is not cyclic", render_word(&word, arrows)),
            ));
        }
        Ok(PotentialTerm { coeff, word })
    }

    fn factor(&self, cur: &mut Cursor, coeff: &mut ParamPoly, word: &mut Word) -> Result<(), ParseError> {
        match cur.peek() {
            Some(Tok::Int(_)) => {
                let c = rational_tail(cur)?;
                *coeff = coeff.scale(&c);
            }
            Some(Tok::Sym('(')) => {
                cur.pos += 1;
                let neg = cur.eat_sym('-');
                let mut c = rational_tail(cur)?;
                if neg {
                    c = -c;
                }
                cur.expect_sym(')')?;
                *coeff = coeff.scale(&c);
            }
            Some(Tok::Ident(_)) => {
                let (name, col) = cur.ident()?;
                let exp = if cur.eat_sym('^') { exponent(cur)? } else { 1 };
                if self.model.params.contains(&name) {
                    if exp == 0 {
                        return Err(ParseError::new(cur.line, col, "zero exponent on a parameter"));
                    }
                    *coeff = coeff.mul(&ParamPoly::term(BigRational::one(), vec![(name, exp)]));
                } else if let Some(idx) = self.model.arrows.iter().position(|a| a.name == name) {
                    if exp < 1 {
                        return Err(ParseError::new(cur.line, col, "arrow exponents must be positive"));
                    }
                    word.extend(std::iter::repeat(idx).take(exp as usize));
                } else {
                    return Err(ParseError::new(
                        cur.line,
                        col,
                        format!("unknown arrow or undeclared parameter '{name}'"),
                    ));
                }
            }
            _ => return Err(cur.err("expected a coefficient, parameter or arrow")),
        }
        Ok(())
    }
}

/// `n` or `n/d`.
fn rational_tail(cur: &mut Cursor) -> Result<BigRational, ParseError> {
    let n = cur.int()?;
    if cur.eat_sym('/') {
        let d_col = cur.col();
        let d = cur.int()?;
        if d.is_zero() {
            return Err(ParseError::new(cur.line, d_col, "zero denominator"));
        }
        Ok(BigRational::new(n, d))
    } else {
        Ok(BigRational::from_integer(n))
    }
}

/// `k`, `-k` or `(k)`, `(-k)`.
fn exponent(cur: &mut Cursor) -> Result<i32, ParseError> {
    let paren = cur.eat_sym('(');
    let neg = cur.eat_sym('-');
    let col = cur.col();
    let n = cur.int()?;
    if paren {
        cur.expect_sym(')')?;
    }
    let v: i32 = i32::try_from(n).map_err(|_| ParseError::new(cur.line, col, "exponent too large"))?;
    Ok(if neg { -v } else { v })
}

/// Parses and validates a model. Declarations must precede their use.
pub fn parse_model(text: &str) -> Result<QuiverModel, ParseError> {
    let mut b = Builder::default();
    let mut last_was_potential = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = lex(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line,
            eol_col: raw.chars().count() + 1,
        };
        if matches!(toks[0].tok, Tok::Sym('+') | Tok::Sym('-')) {
            if !last_was_potential {
                return Err(cur.err("continuation line outside a potential"));
            }
            b.terms(&mut cur, false)?;
            continue;
        }
        b.statement(&mut cur)?;
        last_was_potential = matches!(&toks[0].tok, Tok::Ident(k) if k == "potential");
    }
    if let (Some(cut), Some((line, col))) = (&b.model.cut, b.cut_at) {
        if let CutCheck::Invalid(why) = b.model.validate_cut(cut) {
            return Err(ParseError::new(line, col, format!("invalid cut: {why}")));
        }
    }
    Ok(b.model)
}

/// Canonical text form; `parse_model(render_model(m)) == m` for parsed models.
pub fn render_model(m: &QuiverModel) -> String {
    let mut out = String::new();
    for v in &m.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in &m.arrows {
        out.push_str(&format!(
            "arrow {}: {} -> {}\n",
            a.name, m.vertices[a.source], m.vertices[a.target]
        ));
    }
    if !m.params.is_empty() {
        out.push_str(&format!("param {}\n", m.params.join(", ")));
    }
    if !m.potential.is_empty() {
        out.push_str(&format!("potential {} = {}\n", m.potential_name, render_potential(m)));
    }
    if let Some(cut) = &m.cut {
        out.push_str(&format!("cut {{ {} }}\n", m.arrow_names(cut).join(", ")));
    }
    out
}

pub fn render_potential(m: &QuiverModel) -> String {
    let mut out = String::new();
    let mut first = true;
    for t in &m.potential {
        for (neg, body) in signed_pieces(&t.coeff, &render_word(&t.word, &m.arrows)) {
            out.push_str(match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            out.push_str(&body);
            first = false;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q1: &str = "vertex v\narrow x: v -> v\narrow y: v -> v\narrow z: v -> v\n";
    const CON: &str = "vertex v1\nvertex v2\narrow a1: v1 -> v2\narrow a2: v1 -> v2\n\
                       arrow b1: v2 -> v1\narrow b2: v2 -> v1\nparam q\n";

    #[test]
    fn parses_quantum_space() {
        let m = parse_model(&format!("{Q1}param q\npotential W = x*y*z - q*x*z*y # deformed\ncut {{ z }}\n")).unwrap();
        assert_eq!(m.vertices.len(), 1);
        assert_eq!(m.arrows.len(), 3);
        assert_eq!(m.potential.len(), 2);
        assert_eq!(m.cut, Some(vec![2]));
        assert_eq!(render_potential(&m), "x*y*z - q*x*z*y");
    }

    #[test]
    fn powers_expand_and_constants_multiply() {
        let m = parse_model(&format!("{Q1}param c\npotential W = (1/3)*c*x^3 - 2*y^2*z\n")).unwrap();
        assert_eq!(m.potential[0].word, vec![0, 0, 0]);
        assert_eq!(m.potential[1].word, vec![1, 1, 2]);
        assert_eq!(render_potential(&m), "(1/3)*c*x*x*x - 2*y*y*z");
    }

    #[test]
    fn continuation_lines_extend_the_potential() {
        let m = parse_model(&format!("{Q1}potential W = x*y*z\n  - x*z*y\n  - z*y*y\n")).unwrap();
        assert_eq!(m.potential.len(), 3);
    }

    #[test]
    fn non_composable_word_is_rejected() {
        let text = format!("{CON}potential W = a1*x*b1\n");
        let err = parse_model(&text).unwrap_err();
        assert_eq!((err.line, err.column), (8, 18));
        let err = parse_model(&format!("{CON}potential W = a1*a2*b1*b2\n")).unwrap_err();
        assert!(err.message.contains("not composable"), "{err}");
        let err = parse_model(&format!("{CON}potential W = b1*a1*b2\n")).unwrap_err();
        assert!(err.message.contains("not cyclic"), "{err}");
    }

    #[test]
    fn error_positions() {
        let err = parse_model("vertex v\narrow x: v -> w\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 15));
        let err = parse_model("vertex v\narrow x: v to v\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 12));
        let err = parse_model(&format!("{Q1}potential W = x*y*z - q*x*z*y\n")).unwrap_err();
        assert_eq!((err.line, err.column), (5, 23));
        assert!(err.message.contains("'q'"));
        let err = parse_model("vertex v\nvertex v\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 8));
        let err = parse_model("+ x\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn invalid_declared_cut_is_rejected() {
        let text = format!("{Q1}potential W = x*y*z - x*z*y - z*y*y\ncut {{ x }}\n");
        let err = parse_model(&text).unwrap_err();
        assert_eq!((err.line, err.column), (6, 1));
        assert!(err.message.contains("z*y*y"));
    }

    #[test]
    fn render_roundtrip() {
        let text = format!("{CON}potential W = a1*b1*a2*b2 - q*a1*b2*a2*b1\ncut {{ a1 }}\n");
        let m = parse_model(&text).unwrap();
        assert_eq!(render_model(&m), text);
        assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
        let m = parse_model(&format!("{Q1}param q\npotential W = q^-1*x*y*z - (-2/3)*q^(2)*x*z*y\n")).unwrap();
        assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
    }
}
