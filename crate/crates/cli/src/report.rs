//! Report trees and their two renderings.
//!
//! Machine form is JSON. Exact values are strings in canonical form, so
//! they parse back with [`crate::parse::parse_scalar`] and
//! [`crate::parse::parse_form`]. With `--float` every exact value becomes an
//! object `{"exact": .., "float": [re, im]}` (forms: `{"exact": ..,
//! "max_abs": .., "zero_1e-9": ..}`), evaluated at the model's sample values.

use hs_core::formalg::{bits, Form};
use hs_exact::Scalar;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write;

pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Bool(bool),
    Int(i64),
    Text(String),
    Exact(Scalar),
    Form(Form),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn map() -> MapBuilder {
        MapBuilder(Vec::new())
    }

    pub fn text(s: impl Into<String>) -> Node {
        Node::Text(s.into())
    }

    pub fn int(k: usize) -> Node {
        Node::Int(k as i64)
    }
}

pub struct MapBuilder(Vec<(String, Node)>);

impl MapBuilder {
    pub fn with(mut self, key: &str, v: Node) -> Self {
        self.0.push((key.to_string(), v));
        self
    }

    pub fn build(self) -> Node {
        Node::Map(self.0)
    }
}

/// Float evaluation settings; `None` in [`render_json`] means exact only.
#[derive(Clone, Debug)]
pub struct FloatPass {
    pub values: BTreeMap<String, f64>,
}

impl FloatPass {
    fn scalar(&self, s: &Scalar) -> Option<(f64, f64)> {
        s.eval_f64(&|name| self.values.get(name).copied()).map(|c| (c.re, c.im))
    }

    fn max_abs(&self, f: &Form) -> Option<f64> {
        let mut m = 0.0f64;
        for (_, c) in f.terms() {
            let (re, im) = self.scalar(c)?;
            m = m.max(re.hypot(im));
        }
        Some(m)
    }
}

pub fn to_json(node: &Node, float: Option<&FloatPass>) -> Value {
    match node {
        Node::Bool(b) => json!(b),
        Node::Int(k) => json!(k),
        Node::Text(s) => json!(s),
        Node::Exact(s) => match float {
            None => json!(s.to_string()),
            Some(fp) => match fp.scalar(s) {
                Some((re, im)) => json!({"exact": s.to_string(), "float": [re, im]}),
                None => json!({"exact": s.to_string(), "float": null}),
            },
        },
        Node::Form(f) => match float {
            None => json!(f.to_string()),
            Some(fp) => match fp.max_abs(f) {
                Some(m) => json!({"exact": f.to_string(), "max_abs": m, "zero_1e-9": m <= FLOAT_TOL}),
                None => json!({"exact": f.to_string(), "max_abs": null}),
            },
        },
        Node::List(xs) => Value::Array(xs.iter().map(|x| to_json(x, float)).collect()),
        Node::Map(kv) => {
            let mut m = Map::new();
            for (k, v) in kv {
                m.insert(k.clone(), to_json(v, float));
            }
            Value::Object(m)
        }
    }
}

pub fn render_json(node: &Node, float: Option<&FloatPass>) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(node, float)).expect("serializable");
    s.push('\n');
    s
}

/// `w1^~w3` becomes `ω_{1 3̄}`.
pub fn omega_monomial(n: usize, mask: u32) -> String {
    let parts: Vec<String> = bits(mask).map(|k| if k < n { format!("{}", k + 1) } else { format!("{}\u{0304}", k - n + 1) }).collect();
    format!("ω_{{{}}}", parts.join(" "))
}

pub fn pretty_form(f: &Form) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let n = f.dim();
    let mut out = String::new();
    for (k, (mask, c)) in f.terms().enumerate() {
        let cs = c.to_string();
        let coeff = if c.num_terms() > 1 { format!("({cs})") } else { cs };
        let body = if mask == 0 {
            coeff
        } else if c.is_one() {
            omega_monomial(n, mask)
        } else if coeff == "-1" {
            format!("-{}", omega_monomial(n, mask))
        } else {
            format!("{coeff} {}", omega_monomial(n, mask))
        };
        if k == 0 {
            out.push_str(&body);
        } else if let Some(rest) = body.strip_prefix('-') {
            let _ = write!(out, " - {rest}");
        } else {
            let _ = write!(out, " + {body}");
        }
    }
    out
}

fn float_suffix(node: &Node, float: Option<&FloatPass>) -> String {
    let Some(fp) = float else { return String::new() };
    match node {
        Node::Exact(s) => match fp.scalar(s) {
            Some((re, im)) if im == 0.0 => format!("  [≈ {re:.12}]"),
            Some((re, im)) => format!("  [≈ {re:.12} + {im:.12} i]"),
            None => "  [≈ ?]".into(),
        },
        Node::Form(f) => match fp.max_abs(f) {
            Some(m) => format!("  [max |c| ≈ {m:.3e}, {}]", if m <= FLOAT_TOL { "zero within 1e-9" } else { "nonzero" }),
            None => "  [≈ ?]".into(),
        },
        _ => String::new(),
    }
}

fn leaf(node: &Node) -> Option<String> {
    match node {
        Node::Bool(b) => Some(b.to_string()),
        Node::Int(k) => Some(k.to_string()),
        Node::Text(s) => Some(s.clone()),
        Node::Exact(s) => Some(s.to_string()),
        Node::Form(f) => Some(pretty_form(f)),
        Node::List(xs) if xs.is_empty() => Some("[]".into()),
        Node::Map(kv) if kv.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn text_into(out: &mut String, node: &Node, indent: usize, float: Option<&FloatPass>) {
    let pad = "  ".repeat(indent);
    match node {
        Node::Map(kv) => {
            for (k, v) in kv {
                match leaf(v) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}{}", float_suffix(v, float));
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text_into(out, v, indent + 1, float);
                    }
                }
            }
        }
        Node::List(xs) => {
            for x in xs {
                match leaf(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}{}", float_suffix(x, float));
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        text_into(out, x, indent + 1, float);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}{}", leaf(other).unwrap_or_default(), float_suffix(other, float));
        }
    }
}

pub fn render_text(node: &Node, float: Option<&FloatPass>) -> String {
    let mut out = String::new();
    if float.is_some() {
        out.push_str("# values marked ≈ are floating-point evaluations at the sample point (tolerance 1e-9)\n");
    }
    text_into(&mut out, node, 0, float);
    out
}
