//! Invariant exterior algebra over a complex coframe.
//!
//! A frame index `a < n` is the holomorphic coframe element `w{a+1}`, and
//! `n + a` is its conjugate. A monomial is a bit mask over these `2n` indices,
//! read in ascending bit order (holomorphic before antiholomorphic).

use hs_exact::linalg::{self, Matrix};
use hs_exact::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("structure equation for {name} has degree {degree}, expected 2")]
    Degree { name: String, degree: usize },
    #[error("d{name} has a (0,2) component: the complex structure is not integrable")]
    NotIntegrable { name: String },
    #[error("d(d{name}) = {residual} is not zero")]
    DSquared { name: String, residual: String },
    #[error("structure constants carry symbols; ranks are undefined")]
    Symbolic,
    #[error("forms live on different algebras (n = {0} vs {1})")]
    Mismatch(usize, usize),
}

/// Sign of moving the bits of `b` past those of `a` when forming `a ∧ b`.
pub fn wedge_sign(a: u32, b: u32) -> i32 {
    let mut inv = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inv += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if inv % 2 == 0 { 1 } else { -1 }
}

/// Parity of the permutation sorting `idx`, or `None` on a repeated index.
pub fn sort_sign(idx: &[usize]) -> Option<(u32, i32)> {
    let mut mask = 0u32;
    let mut inv = 0usize;
    for (k, &i) in idx.iter().enumerate() {
        if mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
        inv += idx[..k].iter().filter(|&&j| j > i).count();
    }
    Some((mask, if inv % 2 == 0 { 1 } else { -1 }))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    n: usize,
    terms: BTreeMap<u32, Scalar>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        Form { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        Self::mono(n, 0, c)
    }

    pub fn mono(n: usize, mask: u32, c: Scalar) -> Self {
        let mut f = Self::zero(n);
        f.add_term(mask, c);
        f
    }

    /// `c * w_{i1} ∧ ... ∧ w_{ik}` for frame indices in any order.
    pub fn from_indices(n: usize, idx: &[usize], c: Scalar) -> Self {
        match sort_sign(idx) {
            Some((mask, s)) => Self::mono(n, mask, if s < 0 { -c } else { c }),
            None => Self::zero(n),
        }
    }

    /// The 2-form with values `f(a, b)` on frame pairs.
    pub fn from_bilinear(n: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut out = Self::zero(n);
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                out.add_term((1 << a) | (1 << b), f(a, b));
            }
        }
        out
    }

    /// The 3-form with values `f(a, b, c)` on ordered frame triples.
    pub fn from_trilinear(n: usize, f: impl Fn(usize, usize, usize) -> Scalar) -> Self {
        let mut out = Self::zero(n);
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                for c in b + 1..2 * n {
                    out.add_term((1 << a) | (1 << b) | (1 << c), f(a, b, c));
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: u32) -> Scalar {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    /// Total degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.count_ones() as usize).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn bidegree_of(&self, mask: u32) -> (usize, usize) {
        let low = (1u32 << self.n) - 1;
        ((mask & low).count_ones() as usize, (mask >> self.n).count_ones() as usize)
    }

    /// Component of bidegree `(p, q)`.
    pub fn part(&self, p: usize, q: usize) -> Form {
        let mut out = Form::zero(self.n);
        for (&m, c) in &self.terms {
            if self.bidegree_of(m) == (p, q) {
                out.terms.insert(m, c.clone());
            }
        }
        out
    }

    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(|&m| self.bidegree_of(m)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Form) -> Form {
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.add_term(m, -c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        if s.is_zero() {
            return Form::zero(self.n);
        }
        let mut out = Form::zero(self.n);
        for (&m, c) in &self.terms {
            out.add_term(m, c * s);
        }
        out
    }

    pub fn neg(&self) -> Form {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut out = Form::zero(self.n);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &o.terms {
                if a & b != 0 {
                    continue;
                }
                let c = ca * cb;
                out.add_term(a | b, if wedge_sign(a, b) < 0 { -c } else { c });
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Form {
        let mut out = Form::scalar(self.n, Scalar::one());
        for _ in 0..k {
            out = out.wedge(self);
        }
        out
    }

    pub fn conj(&self) -> Form {
        let mut out = Form::zero(self.n);
        for (&m, c) in &self.terms {
            let idx: Vec<usize> = bits(m).map(|i| if i < self.n { i + self.n } else { i - self.n }).collect();
            let (mask, s) = sort_sign(&idx).expect("distinct indices");
            let c = c.conj();
            out.add_term(mask, if s < 0 { -c } else { c });
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Form {
        let mut out = Form::zero(self.n);
        for (&m, c) in &self.terms {
            out.add_term(m, f(c));
        }
        out
    }

    /// Interior product with the frame vector `a`.
    pub fn contract_index(&self, a: usize) -> Form {
        let mut out = Form::zero(self.n);
        for (&m, c) in &self.terms {
            if m & (1 << a) == 0 {
                continue;
            }
            let below = (m & ((1u32 << a) - 1)).count_ones();
            out.add_term(m & !(1 << a), if below % 2 == 1 { -c } else { c.clone() });
        }
        out
    }

    /// Interior product with `v = Σ v[a] X_a`.
    pub fn contract(&self, v: &[Scalar]) -> Form {
        let mut out = Form::zero(self.n);
        for (a, va) in v.iter().enumerate() {
            if !va.is_zero() {
                out = out.add(&self.contract_index(a).scale(va));
            }
        }
        out
    }

    /// Value on frame vectors `X_{idx[0]}, X_{idx[1]}, ...` (determinant convention).
    pub fn eval(&self, idx: &[usize]) -> Scalar {
        match sort_sign(idx) {
            Some((mask, s)) => {
                let c = self.coeff(mask);
                if s < 0 { -c } else { c }
            }
            None => Scalar::zero(),
        }
    }

    /// Value on arbitrary vectors.
    pub fn eval_vectors(&self, vs: &[&[Scalar]]) -> Scalar {
        let mut f = self.clone();
        for v in vs {
            f = f.contract(v);
        }
        f.coeff(0)
    }

    pub fn symbols(&self) -> std::collections::BTreeSet<String> {
        self.terms.values().flat_map(|c| c.symbols()).collect()
    }

    pub fn subs(&self, vals: &BTreeMap<String, Scalar>) -> Form {
        self.map_coeffs(|c| c.subs(vals))
    }

    /// Coordinates over a list of masks.
    pub fn coords(&self, basis: &[u32]) -> Vec<Scalar> {
        basis.iter().map(|&m| self.coeff(m)).collect()
    }

    pub fn from_coords(n: usize, basis: &[u32], v: &[Scalar]) -> Form {
        let mut out = Form::zero(n);
        for (&m, c) in basis.iter().zip(v) {
            out.add_term(m, c.clone());
        }
        out
    }

    /// Monomial text such as `w1^~w2`.
    pub fn mask_name(n: usize, mask: u32) -> String {
        bits(mask)
            .map(|i| if i < n { format!("w{}", i + 1) } else { format!("~w{}", i - n + 1) })
            .collect::<Vec<_>>()
            .join("^")
    }
}

/// Indices of set bits, ascending.
pub fn bits(m: u32) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(j)
    })
}

impl fmt::Display for Form {
    /// Round-trips through the model-file grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let body = if m == 0 {
                if c.num_terms() > 1 { format!("({})", cs) } else { cs }
            } else {
                let mono = Form::mask_name(self.n, m);
                if c.is_one() {
                    mono
                } else if cs == "-1" {
                    format!("-{}", mono)
                } else if c.num_terms() > 1 {
                    format!("({})*{}", cs, mono)
                } else {
                    format!("{}*{}", cs, mono)
                }
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

/// A complex Lie algebra presented by the differentials of a left-invariant
/// holomorphic coframe, together with `Ω = w1 ∧ ... ∧ wn`.
#[derive(Clone, Debug)]
pub struct AlgebraModel {
    n: usize,
    structure: Vec<Form>,
    d_table: Vec<Form>,
    bracket: Vec<Vec<Vec<Scalar>>>,
    volume_closed: bool,
}

impl AlgebraModel {
    /// `dw[a]` is the differential of the holomorphic coframe element `a`.
    pub fn new(dw: Vec<Form>) -> Result<Self, ModelError> {
        let n = dw.len();
        for (a, f) in dw.iter().enumerate() {
            if f.dim() != n {
                return Err(ModelError::Mismatch(f.dim(), n));
            }
            if let Some(&d) = f.degrees().iter().find(|&&d| d != 2) {
                return Err(ModelError::Degree { name: format!("w{}", a + 1), degree: d });
            }
            if !f.part(0, 2).is_zero() {
                return Err(ModelError::NotIntegrable { name: format!("w{}", a + 1) });
            }
        }
        let mut structure = dw.clone();
        for f in &dw {
            structure.push(f.conj());
        }
        let nn = 2 * n;
        let mut d_table = vec![Form::zero(n); 1 << nn];
        for mask in 1u32..(1 << nn) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let head = Form::mono(n, 1 << low, Scalar::one());
            let t1 = structure[low].wedge(&Form::mono(n, rest, Scalar::one()));
            let t2 = head.wedge(&d_table[rest as usize]);
            d_table[mask as usize] = t1.sub(&t2);
        }
        let mut bracket = vec![vec![vec![Scalar::zero(); nn]; nn]; nn];
        for (f, s) in structure.iter().enumerate() {
            for (m, c) in s.terms() {
                let ix: Vec<usize> = bits(m).collect();
                let (b, cc) = (ix[0], ix[1]);
                // dw^f(X_b, X_c) = -w^f([X_b, X_c])
                bracket[b][cc][f] = -c;
                bracket[cc][b][f] = c.clone();
            }
        }
        let mut model = AlgebraModel { n, structure, d_table, bracket, volume_closed: false };
        for a in 0..n {
            let dd = model.d(&dw[a]);
            if !dd.is_zero() {
                return Err(ModelError::DSquared { name: format!("w{}", a + 1), residual: dd.to_string() });
            }
        }
        model.volume_closed = model.d(&model.volume()).is_zero();
        Ok(model)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension, which is also the number of complex frame indices.
    pub fn frame_len(&self) -> usize {
        2 * self.n
    }

    pub fn structure(&self) -> &[Form] {
        &self.structure
    }

    pub fn volume_closed(&self) -> bool {
        self.volume_closed
    }

    /// `Ω = w1 ∧ ... ∧ wn`.
    pub fn volume(&self) -> Form {
        Form::mono(self.n, (1 << self.n) - 1, Scalar::one())
    }

    /// Coordinate `f` of `[X_a, X_b]`.
    pub fn bracket(&self, a: usize, b: usize, f: usize) -> &Scalar {
        &self.bracket[a][b][f]
    }

    pub fn bracket_vec(&self, a: usize, b: usize) -> &[Scalar] {
        &self.bracket[a][b]
    }

    /// Whether the frame index is holomorphic.
    pub fn is_holo(&self, a: usize) -> bool {
        a < self.n
    }

    /// `J X_a = ±i X_a`.
    pub fn j_eigen(&self, a: usize) -> Scalar {
        if a < self.n { Scalar::i() } else { -Scalar::i() }
    }

    /// Index of the conjugate frame vector.
    pub fn conj_index(&self, a: usize) -> usize {
        if a < self.n { a + self.n } else { a - self.n }
    }

    pub fn zero_form(&self) -> Form {
        Form::zero(self.n)
    }

    pub fn w(&self, a: usize) -> Form {
        Form::mono(self.n, 1 << a, Scalar::one())
    }

    fn check(&self, a: &Form) {
        assert_eq!(a.dim(), self.n, "{}", ModelError::Mismatch(a.dim(), self.n));
    }

    pub fn d(&self, a: &Form) -> Form {
        self.check(a);
        let mut out = Form::zero(self.n);
        for (m, c) in a.terms() {
            for (m2, c2) in self.d_table[m as usize].terms() {
                out.add_term(m2, c * c2);
            }
        }
        out
    }

    fn d_shift(&self, a: &Form, holo: bool) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in a.terms() {
            let (p, _) = a.bidegree_of(m);
            for (m2, c2) in self.d_table[m as usize].terms() {
                let (p2, _) = a.bidegree_of(m2);
                if (p2 == p + 1) == holo {
                    out.add_term(m2, c * c2);
                }
            }
        }
        out
    }

    pub fn del(&self, a: &Form) -> Form {
        self.d_shift(a, true)
    }

    pub fn delbar(&self, a: &Form) -> Form {
        self.d_shift(a, false)
    }

    /// `d^c = i(∂̄ - ∂)`, so that `d d^c = 2i ∂∂̄`.
    pub fn dc(&self, a: &Form) -> Form {
        self.delbar(a).sub(&self.del(a)).scale(&Scalar::i())
    }

    pub fn differentials(&self, a: &Form) -> Differentials {
        Differentials { d: self.d(a), del: self.del(a), delbar: self.delbar(a), dc: self.dc(a) }
    }

    /// Masks of bidegree `(p, q)`, ascending.
    pub fn masks(&self, p: usize, q: usize) -> Vec<u32> {
        masks_of(self.n, p, q)
    }

    /// Reference volume `(i/2)^n w1^~w1^...^wn^~wn`.
    pub fn real_volume(&self) -> Form {
        let mut v = Form::scalar(self.n, Scalar::one());
        for a in 0..self.n {
            let two = self.w(a).wedge(&self.w(a + self.n)).scale(&Scalar::gauss((0, 1), (1, 2)));
            v = v.wedge(&two);
        }
        v
    }

    /// Integral of an invariant top form against the unit-covolume reference volume.
    pub fn integrate(&self, top: &Form) -> Scalar {
        let full = (1u32 << (2 * self.n)) - 1;
        let vol = self.real_volume().coeff(full);
        top.coeff(full) * vol.try_inverse().expect("unit volume coefficient")
    }

    pub fn is_symbol_free(&self) -> bool {
        self.structure.iter().all(|f| f.symbols().is_empty())
    }
}

pub struct Differentials {
    pub d: Form,
    pub del: Form,
    pub delbar: Form,
    pub dc: Form,
}

pub fn masks_of(n: usize, p: usize, q: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let low = (1u32 << n) - 1;
    for m in 0u32..(1 << (2 * n)) {
        if (m & low).count_ones() as usize == p && (m >> n).count_ones() as usize == q {
            out.push(m);
        }
    }
    out
}

/// Real basis of invariant real (1,1)-forms: `i w_j^~w_j`, `w_j^~w_k - w_k^~w_j`,
/// `i(w_j^~w_k + w_k^~w_j)` for `j < k`.
pub fn real_11_basis(n: usize) -> Vec<(String, Form)> {
    let m = |j: usize, k: usize| Form::from_indices(n, &[j, n + k], Scalar::one());
    let mut out = Vec::new();
    for j in 0..n {
        out.push((format!("i*w{0}^~w{0}", j + 1), m(j, j).scale(&Scalar::i())));
    }
    for j in 0..n {
        for k in j + 1..n {
            out.push((format!("w{0}^~w{1} - w{1}^~w{0}", j + 1, k + 1), m(j, k).sub(&m(k, j))));
            out.push((
                format!("i*(w{0}^~w{1} + w{1}^~w{0})", j + 1, k + 1),
                m(j, k).add(&m(k, j)).scale(&Scalar::i()),
            ));
        }
    }
    out
}

/// Splits complex equations `Σ x_k col_k = rhs` with real unknowns into real and
/// imaginary parts.
pub fn realify(cols: &[Vec<Scalar>], rhs: &[Scalar]) -> (Matrix, Vec<Scalar>) {
    let rows = rhs.len();
    let a = Matrix::from_fn(2 * rows, cols.len(), |i, k| {
        if i < rows { cols[k][i].re() } else { cols[k][i - rows].im() }
    });
    let b = (0..2 * rows).map(|i| if i < rows { rhs[i].re() } else { rhs[i - rows].im() }).collect();
    (a, b)
}

/// Columns are images of basis vectors.
fn matrix_from_cols(cols: &[Vec<Scalar>], rows: usize) -> Matrix {
    Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
}

fn rank_of(cols: &[Vec<Scalar>], rows: usize) -> usize {
    if cols.is_empty() || rows == 0 {
        return 0;
    }
    linalg::rank(&matrix_from_cols(cols, rows)).expect("constant rank")
}

/// Picks vectors from `candidates` that extend `base` to an independent set.
fn complement(base: &[Vec<Scalar>], candidates: &[Vec<Scalar>], rows: usize) -> Vec<Vec<Scalar>> {
    let mut acc: Vec<Vec<Scalar>> = base.to_vec();
    let mut r = rank_of(&acc, rows);
    let mut out = Vec::new();
    for c in candidates {
        acc.push(c.clone());
        let r2 = rank_of(&acc, rows);
        if r2 > r {
            r = r2;
            out.push(c.clone());
        } else {
            acc.pop();
        }
    }
    out
}

/// Dimensions of the invariant complexes, plus the map `∂: H^{1,1}_A(ℝ) → H^{2,1}_∂̄`.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub n: usize,
    /// Indexed `[p][q]`.
    pub bott_chern: Vec<Vec<usize>>,
    pub aeppli: Vec<Vec<usize>>,
    pub dolbeault: Vec<Vec<usize>>,
    pub aeppli_11_real: usize,
    pub aeppli_11_basis: Vec<Form>,
    pub dolbeault_21_basis: Vec<Form>,
    /// Rows index `dolbeault_21_basis`, columns `aeppli_11_basis`.
    pub del_map: Matrix,
}

impl AlgebraModel {
    /// Matrix of a linear map on forms from bidegree basis `src` to `dst`.
    fn op_cols(&self, op: impl Fn(&Form) -> Form, src: &[u32], dst: &[u32]) -> Vec<Vec<Scalar>> {
        src.iter().map(|&m| op(&Form::mono(self.n, m, Scalar::one())).coords(dst)).collect()
    }

    fn kernel_cols(&self, cols: &[Vec<Scalar>], rows: usize, dim: usize) -> Vec<Vec<Scalar>> {
        if rows == 0 {
            return identity_cols(dim);
        }
        if dim == 0 {
            return Vec::new();
        }
        linalg::nullspace(&matrix_from_cols(cols, rows)).expect("constant nullspace")
    }

    fn image_cols(&self, cols: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        cols.to_vec()
    }

    /// Invariant cohomology: the complexes are restricted to left-invariant forms.
    pub fn invariant_cohomology(&self) -> Result<Cohomology, ModelError> {
        if !self.is_symbol_free() {
            return Err(ModelError::Symbolic);
        }
        let n = self.n;
        let mut bc = vec![vec![0; n + 1]; n + 1];
        let mut ae = vec![vec![0; n + 1]; n + 1];
        let mut db = vec![vec![0; n + 1]; n + 1];
        let all = |p: usize, q: usize| -> Vec<u32> { if p <= n && q <= n { self.masks(p, q) } else { Vec::new() } };
        for p in 0..=n {
            for q in 0..=n {
                let here = all(p, q);
                let dim = here.len();
                let up: Vec<u32> = (0u32..(1 << (2 * n))).filter(|m| m.count_ones() as usize == p + q + 1).collect();
                // Bott-Chern: ker d / im ∂∂̄
                let dcols = self.op_cols(|f| self.d(f), &here, &up);
                let kd = dim - rank_of(&dcols, up.len());
                let im_ddb = if p >= 1 && q >= 1 {
                    let src = all(p - 1, q - 1);
                    rank_of(&self.op_cols(|f| self.del(&self.delbar(f)), &src, &here), dim)
                } else {
                    0
                };
                bc[p][q] = kd - im_ddb;
                // Aeppli: ker ∂∂̄ / (im ∂ + im ∂̄)
                let tgt = all(p + 1, q + 1);
                let kdd = dim - rank_of(&self.op_cols(|f| self.del(&self.delbar(f)), &here, &tgt), tgt.len());
                let mut imgs = Vec::new();
                if p >= 1 {
                    imgs.extend(self.op_cols(|f| self.del(f), &all(p - 1, q), &here));
                }
                if q >= 1 {
                    imgs.extend(self.op_cols(|f| self.delbar(f), &all(p, q - 1), &here));
                }
                ae[p][q] = kdd - rank_of(&imgs, dim);
                // Dolbeault: ker ∂̄ / im ∂̄
                let tq = all(p, q + 1);
                let kdb = dim - rank_of(&self.op_cols(|f| self.delbar(f), &here, &tq), tq.len());
                let imdb = if q >= 1 { rank_of(&self.op_cols(|f| self.delbar(f), &all(p, q - 1), &here), dim) } else { 0 };
                db[p][q] = kdb - imdb;
            }
        }
        let (aeppli_11_basis, dolbeault_21_basis, del_map, aeppli_11_real) = if n >= 2 {
            self.del_map_11()
        } else {
            (Vec::new(), Vec::new(), Matrix::zeros(0, 0), ae[1][1])
        };
        Ok(Cohomology { n, bott_chern: bc, aeppli: ae, dolbeault: db, aeppli_11_real, aeppli_11_basis, dolbeault_21_basis, del_map })
    }

    fn del_map_11(&self) -> (Vec<Form>, Vec<Form>, Matrix, usize) {
        let n = self.n;
        let basis = real_11_basis(n);
        let m11 = self.masks(1, 1);
        let m22 = self.masks(2, 2);
        let m21 = self.masks(2, 1);
        let m20 = self.masks(2, 0);
        // real kernel of ∂∂̄ on real (1,1)
        let cols: Vec<Vec<Scalar>> = basis.iter().map(|(_, f)| self.del(&self.delbar(f)).coords(&m22)).collect();
        let (a, _) = realify(&cols, &vec![Scalar::zero(); m22.len()]);
        let ker: Vec<Vec<Scalar>> = if m22.is_empty() {
            identity_cols(basis.len())
        } else {
            linalg::nullspace(&a).expect("constant")
        };
        // real image: ∂a + ∂̄ā for a in span_R{~w_k, i ~w_k}
        let mut img = Vec::new();
        for k in 0..n {
            for c in [Scalar::one(), Scalar::i()] {
                let a01 = Form::mono(n, 1 << (n + k), c);
                let x = self.del(&a01).add(&self.delbar(&a01.conj()));
                img.push(real_coords(&basis, &x, &m11));
            }
        }
        let reps = complement(&img, &ker, basis.len());
        let real_dim = reps.len();
        let rep_forms: Vec<Form> = reps
            .iter()
            .map(|v| basis.iter().zip(v).fold(Form::zero(n), |acc, ((_, f), c)| acc.add(&f.scale(c))))
            .collect();
        // H^{2,1}_∂̄ representatives
        let m22c = self.masks(2, 2);
        let kd = self.kernel_cols(&self.op_cols(|f| self.delbar(f), &m21, &m22c), m22c.len(), m21.len());
        let imd = self.image_cols(&self.op_cols(|f| self.delbar(f), &m20, &m21));
        let hreps = complement(&imd, &kd, m21.len());
        let dol_forms: Vec<Form> = hreps.iter().map(|v| Form::from_coords(n, &m21, v)).collect();
        // express ∂x modulo im ∂̄
        let mut sys_cols = hreps.clone();
        sys_cols.extend(imd.iter().cloned());
        let sys = matrix_from_cols(&sys_cols, m21.len());
        let mut map = Matrix::zeros(hreps.len(), rep_forms.len());
        for (j, x) in rep_forms.iter().enumerate() {
            let y = self.del(x).coords(&m21);
            if y.iter().all(|c| c.is_zero()) {
                continue;
            }
            match linalg::solve(&sys, &y).expect("constant") {
                linalg::SolveOutcome::Solved(s) => {
                    let part = s.particular().expect("constant pivots");
                    for i in 0..hreps.len() {
                        map.set(i, j, part[i].clone());
                    }
                }
                linalg::SolveOutcome::Inconsistent { .. } => unreachable!("∂x is ∂̄-closed"),
            }
        }
        (rep_forms, dol_forms, map, real_dim)
    }
}

fn identity_cols(dim: usize) -> Vec<Vec<Scalar>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

/// Real coordinates of a real (1,1)-form in [`real_11_basis`].
pub fn real_coords(basis: &[(String, Form)], x: &Form, masks: &[u32]) -> Vec<Scalar> {
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|(_, f)| f.coords(masks)).collect();
    let (a, b) = realify(&cols, &x.coords(masks));
    match linalg::solve(&a, &b).expect("real basis") {
        linalg::SolveOutcome::Solved(s) => s.particular().expect("constant pivots"),
        linalg::SolveOutcome::Inconsistent { .. } => panic!("form is not a real (1,1)-form"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(n: usize) -> AlgebraModel {
        AlgebraModel::new(vec![Form::zero(n); n]).unwrap()
    }

    #[test]
    fn wedge_signs() {
        let n = 3;
        let w = |a: u32| Form::mono(n, 1u32 << a, Scalar::one());
        assert_eq!(w(0).wedge(&w(1)), Form::mono(n, 0b11, Scalar::one()));
        assert_eq!(w(1).wedge(&w(0)), Form::mono(n, 0b11, Scalar::from_int(-1)));
    }

    #[test]
    fn contraction_sign() {
        let f = Form::mono(3, 0b111, Scalar::one());
        assert_eq!(f.contract_index(1), Form::mono(3, 0b101, Scalar::from_int(-1)));
        assert!(f.contract_index(1).contract_index(1).is_zero());
        assert_eq!(Form::mono(3, 0b11, Scalar::one()).contract_index(0), Form::mono(3, 0b10, Scalar::one()));
    }

    #[test]
    fn torus_bott_chern_11() {
        let c = torus(3).invariant_cohomology().unwrap();
        assert_eq!(c.bott_chern[1][1], 9);
        assert!(c.del_map.is_zero());
    }

    #[test]
    fn non_integrable_rejected() {
        let n = 2;
        let bad = Form::from_indices(n, &[2, 3], Scalar::one());
        assert!(matches!(AlgebraModel::new(vec![Form::zero(n), bad]), Err(ModelError::NotIntegrable { .. })));
    }

    #[test]
    fn display_round_trip_shape() {
        let n = 3;
        let f = Form::from_indices(n, &[0, 3], Scalar::i()).add(&Form::from_indices(n, &[1, 2], Scalar::ratio(-1, 2)));
        assert_eq!(f.to_string(), "-1/2*w2^w3 + i*w1^~w1");
    }
}
