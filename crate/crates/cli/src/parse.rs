//! Recursive-descent parser for model files.
//!
//! ```text
//! file     := { section | statement }          one statement per line
//! section  := '[' name [name] ']'
//! expr     := ['+'|'-'] term { ('+'|'-') term }
//! term     := factor { ('*'|'/') factor }
//! factor   := INT | IMAG | 'i' | symbol ['^' ['-'] INT]
//!           | '(' expr ')' ['^' INT] | coframe { '^' coframe }
//! coframe  := 'w'k | '~w'k
//! ```

use crate::lex::{lex_line, Spanned, Tok};
use crate::model::{ModelFile, SymbolDecl};
use hs_core::assume::Sign;
use hs_core::bundles::{Summand, SummandData};
use hs_core::formalg::Form;
use hs_exact::{Matrix, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    UndeclaredSymbol,
    DegreeMismatch,
    /// Well-formed input with an out-of-range index, a misplaced statement
    /// or similar.
    Invalid,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lexical => "lexical error",
            ErrorKind::Syntax => "syntax error",
            ErrorKind::UndeclaredSymbol => "undeclared symbol",
            ErrorKind::DegreeMismatch => "degree mismatch",
            ErrorKind::Invalid => "invalid input",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}: {}", self.line, self.col, self.kind, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A parsed value and its form degree; `None` marks the literal `0`, which
/// is allowed in any degree.
#[derive(Clone, Debug)]
struct Value {
    form: Form,
    deg: Option<usize>,
}

const FACTOR_START: &[&str] = &["number", "symbol", "coframe", "'('"];

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    end_col: usize,
    dim: usize,
    declared: &'a BTreeSet<String>,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|s| &s.tok);
        self.pos += 1;
        t
    }

    fn err(&self, kind: ErrorKind, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { kind, line: self.line, col, message: message.into(), expected: Vec::new() }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().map_or("end of line".to_string(), |t| t.to_string());
        ParseError {
            kind: ErrorKind::Syntax,
            line: self.line,
            col: self.col(),
            message: format!("unexpected {found}"),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&[&tok.to_string()]))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected(&["end of line"])),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n.clone())
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn small(&mut self, lo: usize, hi: usize) -> Result<usize, ParseError> {
        let col = self.col();
        let n = self.int()?;
        match usize::try_from(&n) {
            Ok(k) if (lo..=hi).contains(&k) => Ok(k),
            _ => Err(self.err(ErrorKind::Invalid, col, format!("index {n} outside {lo}..{hi}"))),
        }
    }

    fn scalar_value(&self, c: Scalar) -> Value {
        Value { form: Form::scalar(self.dim, c), deg: Some(0) }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if neg {
            acc.form = acc.form.neg();
        }
        loop {
            let sub = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let col = self.col();
            let rhs = self.term()?;
            let deg = match (acc.deg, rhs.deg) {
                (Some(a), Some(b)) if a != b => {
                    return Err(self.err(ErrorKind::DegreeMismatch, col, format!("adding a {b}-form to a {a}-form")));
                }
                (a, b) => a.or(b),
            };
            acc = Value { form: if sub { acc.form.sub(&rhs.form) } else { acc.form.add(&rhs.form) }, deg };
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let deg = match (acc.deg, rhs.deg) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    };
                    acc = Value { form: acc.form.wedge(&rhs.form), deg };
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let col = self.col();
                    let rhs = self.factor()?;
                    if rhs.deg.is_some_and(|d| d > 0) {
                        return Err(self.err(ErrorKind::DegreeMismatch, col, "division by a form of positive degree"));
                    }
                    let c = rhs.form.coeff(0);
                    let inv = c.try_inverse().ok_or_else(|| self.err(ErrorKind::Invalid, col, format!("cannot divide by {c}")))?;
                    acc = Value { form: acc.form.scale(&inv), deg: acc.deg };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let col = self.col();
        let n = self.int()?;
        let k = i32::try_from(&n).map_err(|_| self.err(ErrorKind::Invalid, col, "exponent too large"))?;
        Ok(if neg { -k } else { k })
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let c = Scalar::from_rational(BigRational::from_integer(n.clone()));
                let deg = if c.is_zero() { None } else { Some(0) };
                Ok(Value { form: Form::scalar(self.dim, c), deg })
            }
            Some(Tok::Imag(n)) => {
                self.pos += 1;
                let c = &Scalar::from_rational(BigRational::from_integer(n.clone())) * &Scalar::i();
                Ok(self.scalar_value(c))
            }
            Some(Tok::Ident(s)) if s == "i" => {
                self.pos += 1;
                Ok(self.scalar_value(Scalar::i()))
            }
            Some(Tok::Ident(s)) => {
                if !self.declared.contains(s) {
                    return Err(self.err(ErrorKind::UndeclaredSymbol, col, format!("'{s}' is not declared in [symbols]")));
                }
                self.pos += 1;
                let mut c = Scalar::sym(s);
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    c = c.pow(self.exponent()?);
                }
                Ok(self.scalar_value(c))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let ecol = self.col();
                    let k = self.exponent()?;
                    if inner.deg.is_some_and(|d| d > 0) || k < 0 {
                        return Err(self.err(ErrorKind::Invalid, ecol, "only scalars take nonnegative powers"));
                    }
                    let c = inner.form.coeff(0).pow(k);
                    return Ok(self.scalar_value(c));
                }
                Ok(inner)
            }
            Some(Tok::Coframe(..)) => {
                let mut idx = Vec::new();
                loop {
                    let c = self.col();
                    let Some(&Tok::Coframe(k, bar)) = self.peek() else {
                        return Err(self.unexpected(&["coframe"]));
                    };
                    if k >= self.dim {
                        return Err(self.err(ErrorKind::Invalid, c, format!("coframe w{} outside dimension {}", k + 1, self.dim)));
                    }
                    self.pos += 1;
                    idx.push(if bar { self.dim + k } else { k });
                    if self.peek() != Some(&Tok::Caret) {
                        break;
                    }
                    self.pos += 1;
                }
                let deg = idx.len();
                Ok(Value { form: Form::from_indices(self.dim, &idx, Scalar::one()), deg: Some(deg) })
            }
            _ => Err(self.unexpected(FACTOR_START)),
        }
    }

    /// An expression of the given degree filling the rest of the line.
    fn form_of_degree(&mut self, deg: usize) -> Result<Form, ParseError> {
        let col = self.col();
        let v = self.expr()?;
        self.expect_end()?;
        match v.deg {
            Some(d) if d != deg => Err(self.err(ErrorKind::DegreeMismatch, col, format!("expected a {deg}-form, found a {d}-form"))),
            _ => Ok(v.form),
        }
    }

    fn scalar(&mut self) -> Result<Scalar, ParseError> {
        Ok(self.form_of_degree(0)?.coeff(0))
    }

    fn index_pair(&mut self, hi: usize) -> Result<(usize, usize), ParseError> {
        self.expect(Tok::LBracket)?;
        let j = self.small(1, hi)?;
        self.expect(Tok::Comma)?;
        let k = self.small(1, hi)?;
        self.expect(Tok::RBracket)?;
        Ok((j - 1, k - 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Section {
    Preamble,
    Algebra,
    Symbols,
    Metric,
    Reference,
    Bundle(usize),
    Pairing,
    Tasks,
}

const SECTIONS: &[&str] = &["algebra", "symbols", "metric", "reference", "bundle", "pairing", "tasks"];

struct State {
    model: Option<ModelFile>,
    declared: BTreeSet<String>,
    symbols: Vec<SymbolDecl>,
    metric_seen: bool,
    reference_seen: bool,
}

/// Parses a model file.
pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let mut st = State { model: None, declared: BTreeSet::new(), symbols: Vec::new(), metric_seen: false, reference_seen: false };
    let mut section = Section::Preamble;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        if section == Section::Tasks && !raw.trim_start().starts_with('[') {
            let body = raw.split('#').next().unwrap_or("").trim();
            if !body.is_empty() {
                st.model.as_mut().expect("tasks follow algebra").tasks.push(body.to_string());
            }
            continue;
        }
        let toks = lex_line(raw).map_err(|e| ParseError {
            kind: ErrorKind::Lexical,
            line,
            col: e.col,
            message: format!("unexpected character '{}'", e.found),
            expected: Vec::new(),
        })?;
        if toks.is_empty() {
            continue;
        }
        let dim = st.model.as_ref().map_or(0, |m| m.dim);
        let declared = st.declared.clone();
        let mut cur = Cursor { toks: &toks, pos: 0, line, end_col: raw.chars().count() + 1, dim, declared: &declared };
        if cur.peek() == Some(&Tok::LBracket) {
            section = header(&mut cur, &st)?;
            continue;
        }
        statement(&mut cur, section, &mut st)?;
    }
    let mut model = st.model.ok_or_else(|| ParseError {
        kind: ErrorKind::Invalid,
        line: text.lines().count().max(1),
        col: 1,
        message: "missing [algebra] section".into(),
        expected: vec!["'['".into()],
    })?;
    model.symbols = st.symbols;
    Ok(model)
}

fn header(cur: &mut Cursor, st: &State) -> Result<Section, ParseError> {
    cur.expect(Tok::LBracket)?;
    let col = cur.col();
    let name = cur.ident("section name")?;
    let sec = match name.as_str() {
        "algebra" => Section::Algebra,
        "symbols" => Section::Symbols,
        "metric" => Section::Metric,
        "reference" => Section::Reference,
        "pairing" => Section::Pairing,
        "tasks" => Section::Tasks,
        "bundle" => {
            let bcol = cur.col();
            match cur.ident("'V0' or 'V1'")?.as_str() {
                "V0" => Section::Bundle(0),
                "V1" => Section::Bundle(1),
                other => return Err(cur.err(ErrorKind::Invalid, bcol, format!("unknown bundle '{other}'"))),
            }
        }
        other => {
            let mut e = cur.err(ErrorKind::Invalid, col, format!("unknown section '{other}'"));
            e.expected = SECTIONS.iter().map(|s| s.to_string()).collect();
            return Err(e);
        }
    };
    cur.expect(Tok::RBracket)?;
    cur.expect_end()?;
    if sec != Section::Algebra && st.model.is_none() {
        return Err(cur.err(ErrorKind::Invalid, col, "[algebra] with 'dim' must come first"));
    }
    Ok(sec)
}

fn keyword(cur: &mut Cursor, allowed: &[&str]) -> Result<String, ParseError> {
    let col = cur.col();
    let w = cur.ident(allowed.first().copied().unwrap_or("keyword"))?;
    if allowed.contains(&w.as_str()) || allowed.iter().any(|a| a.ends_with('*') && w.starts_with(a.trim_end_matches('*'))) {
        Ok(w)
    } else {
        let mut e = cur.err(ErrorKind::Syntax, col, format!("unexpected '{w}'"));
        e.expected = allowed.iter().map(|s| format!("'{s}'")).collect();
        Err(e)
    }
}

fn statement(cur: &mut Cursor, section: Section, st: &mut State) -> Result<(), ParseError> {
    match section {
        Section::Preamble => Err(cur.unexpected(&["'['"])),
        Section::Algebra => algebra_statement(cur, st),
        Section::Symbols => symbol_statement(cur, st),
        Section::Metric | Section::Reference => {
            keyword(cur, &["h"])?;
            let m = st.model.as_mut().expect("checked in header");
            let (j, k) = cur.index_pair(m.dim)?;
            cur.expect(Tok::Eq)?;
            let v = cur.scalar()?;
            let seen = if section == Section::Metric { &mut st.metric_seen } else { &mut st.reference_seen };
            let target = if section == Section::Metric { &mut m.metric } else { &mut m.reference };
            if !*seen {
                *target = Matrix::zeros(m.dim, m.dim);
                *seen = true;
            }
            target.set(k, j, v.conj());
            target.set(j, k, v);
            Ok(())
        }
        Section::Bundle(b) => bundle_statement(cur, st, b),
        Section::Pairing => {
            keyword(cur, &["alpha"])?;
            cur.expect(Tok::Eq)?;
            let v = cur.scalar()?;
            st.model.as_mut().expect("checked in header").alpha = v;
            Ok(())
        }
        Section::Tasks => unreachable!("tasks are read raw"),
    }
}

fn algebra_statement(cur: &mut Cursor, st: &mut State) -> Result<(), ParseError> {
    let col = cur.col();
    let kw = keyword(cur, &["dim", "d"])?;
    if kw == "dim" {
        if st.model.is_some() {
            return Err(cur.err(ErrorKind::Invalid, col, "dimension given twice"));
        }
        cur.expect(Tok::Eq)?;
        let n = cur.small(1, 8)?;
        cur.expect_end()?;
        st.model = Some(ModelFile::new(n));
        return Ok(());
    }
    let Some(m) = st.model.as_mut() else {
        return Err(cur.err(ErrorKind::Invalid, col, "'dim' must precede structure equations"));
    };
    let ccol = cur.col();
    let k = match cur.bump() {
        Some(&Tok::Coframe(k, false)) => k,
        _ => {
            cur.pos -= 1;
            return Err(cur.unexpected(&["holomorphic coframe 'wK'"]));
        }
    };
    if k >= m.dim {
        return Err(cur.err(ErrorKind::Invalid, ccol, format!("coframe w{} outside dimension {}", k + 1, m.dim)));
    }
    cur.expect(Tok::Eq)?;
    m.structure[k] = cur.form_of_degree(2)?;
    Ok(())
}

fn symbol_statement(cur: &mut Cursor, st: &mut State) -> Result<(), ParseError> {
    let col = cur.col();
    let name = cur.ident("symbol name")?;
    if name == "i" || st.declared.contains(&name) {
        return Err(cur.err(ErrorKind::Invalid, col, format!("'{name}' cannot be declared here")));
    }
    let sign = match cur.peek() {
        Some(Tok::Lt) | Some(Tok::Gt) | Some(Tok::Ne) => {
            let s = match cur.bump() {
                Some(Tok::Lt) => Sign::Negative,
                Some(Tok::Gt) => Sign::Positive,
                _ => Sign::NonZero,
            };
            let zcol = cur.col();
            if cur.int()? != BigInt::from(0) {
                return Err(cur.err(ErrorKind::Invalid, zcol, "sign constraints compare with 0"));
            }
            Some(s)
        }
        _ => None,
    };
    // the symbol may appear in its own sample value
    st.declared.insert(name.clone());
    let sample = if cur.peek().is_some() {
        keyword(cur, &["sample"])?;
        let declared = st.declared.clone();
        let mut sub = Cursor { declared: &declared, toks: cur.toks, pos: cur.pos, line: cur.line, end_col: cur.end_col, dim: cur.dim };
        let v = sub.scalar()?;
        cur.pos = sub.pos;
        if !v.is_constant() {
            return Err(cur.err(ErrorKind::Invalid, col, "sample values are numbers"));
        }
        Some(v)
    } else {
        None
    };
    st.symbols.push(SymbolDecl { name, sign, sample });
    Ok(())
}

fn bundle_statement(cur: &mut Cursor, st: &mut State, b: usize) -> Result<(), ParseError> {
    let col = cur.col();
    let m = st.model.as_mut().expect("checked in header");
    let n = m.dim;
    let list = if b == 0 { &mut m.v0 } else { &mut m.v1 };
    let kw = keyword(cur, &["line", "flat", "summand", "H", "A*"])?;
    match kw.as_str() {
        "line" => {
            let name = cur.ident("summand name")?;
            cur.expect(Tok::Eq)?;
            let f = cur.form_of_degree(2)?;
            list.push(Summand::line(&name, f));
        }
        "flat" => {
            let name = cur.ident("summand name")?;
            cur.expect_end()?;
            list.push(Summand::flat_line(&name, n));
        }
        "summand" => {
            let name = cur.ident("summand name")?;
            keyword(cur, &["rank"])?;
            let r = cur.small(1, 16)?;
            cur.expect_end()?;
            list.push(Summand::dolbeault(&name, vec![Matrix::zeros(r, r); n], Matrix::zeros(r, r)));
        }
        _ => {
            let Some(Summand { rank, data: SummandData::Dolbeault { a, h }, .. }) = list.last_mut() else {
                return Err(cur.err(ErrorKind::Invalid, col, format!("'{kw}' needs a preceding 'summand'")));
            };
            let target = if kw == "H" {
                h
            } else {
                let k: usize = match kw[1..].parse() {
                    Ok(k) if (1..=n).contains(&k) => k,
                    _ => return Err(cur.err(ErrorKind::Invalid, col, format!("'{kw}' names no coframe 1..{n}"))),
                };
                &mut a[k - 1]
            };
            let (p, q) = cur.index_pair(*rank)?;
            cur.expect(Tok::Eq)?;
            target.set(p, q, cur.scalar()?);
        }
    }
    Ok(())
}

/// Parses a scalar expression such as a canonical report value.
pub fn parse_scalar(text: &str, declared: &BTreeSet<String>) -> Result<Scalar, ParseError> {
    let toks = lex_line(text).map_err(|e| ParseError {
        kind: ErrorKind::Lexical,
        line: 1,
        col: e.col,
        message: format!("unexpected character '{}'", e.found),
        expected: Vec::new(),
    })?;
    let mut cur = Cursor { toks: &toks, pos: 0, line: 1, end_col: text.chars().count() + 1, dim: 0, declared };
    cur.scalar()
}

/// Parses a form in `n` complex dimensions.
pub fn parse_form(text: &str, n: usize, declared: &BTreeSet<String>) -> Result<Form, ParseError> {
    let toks = lex_line(text).map_err(|e| ParseError {
        kind: ErrorKind::Lexical,
        line: 1,
        col: e.col,
        message: format!("unexpected character '{}'", e.found),
        expected: Vec::new(),
    })?;
    let mut cur = Cursor { toks: &toks, pos: 0, line: 1, end_col: text.chars().count() + 1, dim: n, declared };
    let v = cur.expr()?;
    cur.expect_end()?;
    Ok(v.form)
}
