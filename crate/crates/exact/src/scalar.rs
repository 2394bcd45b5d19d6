//! Sparse Laurent polynomials over the Gaussian rationals in named real symbols.
//!
//! Terms are kept sorted by a graded-lex monomial order that is compatible with
//! multiplication, so the last term is the leading one. Negative exponents are
//! allowed, which makes every single-term value invertible.

use crate::gauss::GaussRat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<(Arc<str>, i32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Mono(vec![(Arc::from(name), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&str, i32)> {
        self.0.iter().map(|(s, e)| (&**s, *e))
    }

    pub fn exponent(&self, name: &str) -> i32 {
        self.0.iter().find(|(s, _)| &**s == name).map(|(_, e)| *e).unwrap_or(0)
    }

    fn combine(&self, other: &Mono, sign: i32) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), sign * b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + sign * b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Mono(out)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        if other.is_one() {
            return self.clone();
        }
        self.combine(other, -1)
    }

    pub fn pow(&self, k: i32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|(s, e)| (s.clone(), e * k)).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // lex with earlier names more significant; a missing name has exponent 0
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            let (na, ea) = a.get(i).map(|(s, e)| (Some(s), *e)).unwrap_or((None, 0));
            let (nb, eb) = b.get(j).map(|(s, e)| (Some(s), *e)).unwrap_or((None, 0));
            match (na, nb) {
                (None, None) => return Ordering::Equal,
                (Some(x), Some(y)) if x == y => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => return ea.cmp(&0),
                (Some(_), None) => return ea.cmp(&0),
                _ => return 0.cmp(&eb),
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", s)?;
            } else {
                write!(f, "{}^{}", s, e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(Mono, GaussRat)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_gauss(GaussRat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussRat::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_gauss(GaussRat::ratio(n, d))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_gauss(GaussRat::real(r))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn i() -> Self {
        Self::from_gauss(GaussRat::i())
    }

    pub fn gauss(re: (i64, i64), im: (i64, i64)) -> Self {
        let c = GaussRat::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        );
        Self::from_gauss(c)
    }

    pub fn from_gauss(c: GaussRat) -> Self {
        Self::term(c, Mono::one())
    }

    pub fn sym(name: &str) -> Self {
        Self::term(GaussRat::one(), Mono::var(name))
    }

    pub fn term(c: GaussRat, m: Mono) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Scalar { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary terms, normalizing order and dropping zeros.
    pub fn from_terms(mut raw: Vec<(Mono, GaussRat)>) -> Self {
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(Mono, GaussRat)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == m => last.1 = &last.1 + &c,
                _ => {
                    if let Some(last) = terms.last() {
                        if last.1.is_zero() {
                            terms.pop();
                        }
                    }
                    terms.push((m, c));
                }
            }
        }
        if let Some(last) = terms.last() {
            if last.1.is_zero() {
                terms.pop();
            }
        }
        Scalar { terms }
    }

    pub fn terms(&self) -> &[(Mono, GaussRat)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value if it carries no symbols.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// A single nonzero term, hence a unit in the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn lead(&self) -> Option<&(Mono, GaussRat)> {
        self.terms.last()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Real part, valid because every symbol is real.
    pub fn re(&self) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        (self + &self.conj()).scale_rat(&half)
    }

    pub fn im(&self) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        let d = self - &self.conj();
        (&d * &Scalar::i()).scale_rat(&-half)
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }

    pub fn scale_rat(&self, r: &BigRational) -> Self {
        if num_traits::Zero::is_zero(r) {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(r))).collect(),
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Mono, c: &GaussRat) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Self {
        if k < 0 {
            let inv = self.try_inverse().expect("negative power of a non-unit");
            return inv.pow(-k);
        }
        let mut out = Scalar::one();
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = &self.terms[0];
        Some(Scalar::term(c.inv()?, m.pow(-1)))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Scalar) -> Option<Scalar> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if d.terms.len() == 1 {
            let (m, c) = &d.terms[0];
            let ci = c.inv()?;
            let mi = m.pow(-1);
            return Some(self.mul_term(&mi, &ci));
        }
        let (lm, lc) = d.lead().cloned()?;
        let lci = lc.inv()?;
        let floor = self.terms[0].0.div(&d.terms[0].0);
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, GaussRat)> = Vec::new();
        let mut guard = 0usize;
        while let Some((rm, rc)) = rem.lead().cloned() {
            let tm = rm.div(&lm);
            if tm < floor {
                return None;
            }
            let tc = &rc * &lci;
            rem = &rem - &d.mul_term(&tm, &tc);
            quot.push((tm, tc));
            guard += 1;
            if guard > 100_000 {
                return None;
            }
        }
        Some(Scalar::from_terms(quot))
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (m, _) in &self.terms {
            for (s, _) in m.factors() {
                out.insert(s.to_string());
            }
        }
        out
    }

    /// Substitutes values for the named symbols; the rest stay formal.
    pub fn subs(&self, vals: &BTreeMap<String, Scalar>) -> Scalar {
        if vals.is_empty() {
            return self.clone();
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Scalar::from_gauss(c.clone());
            for (s, e) in m.factors() {
                match vals.get(s) {
                    Some(v) => factor = &factor * &v.pow(e),
                    None => kept.push((Arc::from(s), e)),
                }
            }
            acc += &(&factor * &Scalar::term(GaussRat::one(), Mono(kept)));
        }
        acc
    }

    pub fn eval_f64(&self, vals: &dyn Fn(&str) -> Option<f64>) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let (re, im) = c.to_f64();
            let mut t = Complex64::new(re, im);
            for (s, e) in m.factors() {
                t *= vals(s)?.powi(e);
            }
            acc += t;
        }
        Some(acc)
    }
}

impl fmt::Display for Scalar {
    /// Canonical text, leading term first: `-1/2*a*pi^2*n1^2 + 3*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let body = if m.is_one() {
                c.to_string()
            } else if c.is_one() {
                m.to_string()
            } else if c.is_real() && (-c).is_one() {
                format!("-{}", m)
            } else {
                format!("{}*{}", c, m)
            };
            if k == 0 {
                write!(f, "{}", body)?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {}", rest)?;
            } else {
                write!(f, " + {}", body)?;
            }
        }
        Ok(())
    }
}

fn merge(a: &[(Mono, GaussRat)], b: &[(Mono, GaussRat)], negate_b: bool) -> Vec<(Mono, GaussRat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = if i == a.len() {
            Ordering::Greater
        } else if j == b.len() {
            Ordering::Less
        } else {
            a[i].0.cmp(&b[j].0)
        };
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        Scalar { terms: merge(&self.terms, &o.terms, false) }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        if o.is_zero() {
            return self.clone();
        }
        Scalar { terms: merge(&self.terms, &o.terms, true) }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.mul_term(m, c);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.mul_term(m, c);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                raw.push((m.mul(n), c * d));
            }
        }
        Scalar::from_terms(raw)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: &Scalar) -> Scalar {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<'a> AddAssign<&'a Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        if o.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = o.clone();
            return;
        }
        self.terms = merge(&self.terms, &o.terms, false);
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        if self.is_zero() {
            *self = o;
        } else {
            *self += &o;
        }
    }
}

impl<'a> SubAssign<&'a Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        if o.is_zero() {
            return;
        }
        self.terms = merge(&self.terms, &o.terms, true);
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self -= &o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}
