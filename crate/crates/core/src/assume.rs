//! Sign assumptions on real symbols.

use hs_exact::Scalar;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    NonZero,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "> 0",
            Sign::Negative => "< 0",
            Sign::NonZero => "!= 0",
        })
    }
}

/// Sign of a value that is known to be nonzero, or `Zero`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definite {
    Positive,
    Negative,
    Zero,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assumptions {
    signs: BTreeMap<String, Sign>,
}

impl Assumptions {
    pub fn new() -> Self {
        Self::default()
    }

    /// `pi > 0` always holds.
    pub fn standard() -> Self {
        let mut a = Self::new();
        a.set("pi", Sign::Positive);
        a
    }

    pub fn set(&mut self, name: &str, s: Sign) {
        self.signs.insert(name.to_string(), s);
    }

    pub fn get(&self, name: &str) -> Option<Sign> {
        self.signs.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Sign)> {
        self.signs.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Sign of a single real monomial `c · Π x^e` under the assumptions,
    /// when it is forced. Even powers of nonzero symbols are positive.
    fn monomial_sign(&self, c: &Scalar) -> Option<Definite> {
        let (mono, coeff) = c.terms().first()?;
        if !coeff.is_real() {
            return None;
        }
        let (re, _) = coeff.to_f64();
        let mut positive = re > 0.0;
        for (name, e) in mono.factors() {
            match self.get(name) {
                Some(Sign::Positive) => {}
                Some(Sign::Negative) => {
                    if e % 2 != 0 {
                        positive = !positive;
                    }
                }
                Some(Sign::NonZero) | None => {
                    if e % 2 != 0 || self.get(name).is_none() {
                        return None;
                    }
                }
            }
        }
        Some(if positive { Definite::Positive } else { Definite::Negative })
    }

    /// `Some(Negative)` when every term of a real polynomial is forced
    /// negative, `Some(Positive)` when every term is forced positive.
    pub fn forced_sign(&self, x: &Scalar) -> Option<Definite> {
        if x.is_zero() {
            return Some(Definite::Zero);
        }
        if !x.is_real() {
            return None;
        }
        let mut out: Option<Definite> = None;
        for t in x.terms() {
            let s = self.monomial_sign(&Scalar::from_terms(vec![t.clone()]))?;
            match out {
                None => out = Some(s),
                Some(prev) if prev == s => {}
                Some(_) => return None,
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_signs() {
        let mut a = Assumptions::standard();
        a.set("a", Sign::Negative);
        a.set("n1", Sign::NonZero);
        let x = Scalar::sym("a") * Scalar::sym("pi").pow(2) * Scalar::sym("n1").pow(2);
        assert_eq!(a.forced_sign(&x), Some(Definite::Negative));
        assert_eq!(a.forced_sign(&(Scalar::sym("n1"))), None);
        assert_eq!(a.forced_sign(&(x.clone() - Scalar::one())), Some(Definite::Negative));
        assert_eq!(a.forced_sign(&(x + Scalar::one())), None);
    }
}
