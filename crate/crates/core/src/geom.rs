//! Invariant Hermitian metrics, the Levi-Civita/Bismut connection family,
//! curvature, Ricci forms and metric traces.
//!
//! Tensors are stored over the complexified frame `X_0..X_{n-1}, X̄_0..X̄_{n-1}`,
//! on which `J` is diagonal. Every frame sum is a contraction with `g^{-1}`.

use crate::formalg::{AlgebraModel, Form};
use hs_exact::linalg::{self, LinalgError, Matrix};
use hs_exact::Scalar;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("hermitian matrix is not hermitian")]
    NotHermitian,
    #[error("form is not a real (1,1)-form")]
    NotReal11,
    #[error("metric is degenerate or its inverse is not exact: {0}")]
    Singular(String),
}

impl From<LinalgError> for GeomError {
    fn from(e: LinalgError) -> Self {
        GeomError::Singular(e.to_string())
    }
}

/// Dense 3-index array over the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct T3 {
    len: usize,
    data: Vec<Scalar>,
}

impl T3 {
    pub fn from_fn(len: usize, f: impl Fn(usize, usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(len * len * len);
        for a in 0..len {
            for b in 0..len {
                for c in 0..len {
                    data.push(f(a, b, c));
                }
            }
        }
        T3 { len, data }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.data[(a * self.len + b) * self.len + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Values of a 3-form on frame triples.
    pub fn of_form(len: usize, f: &Form) -> Self {
        Self::from_fn(len, |a, b, c| f.eval(&[a, b, c]))
    }
}

/// `ω = (i/2) Σ h_jk w_j ∧ ~w_k`, with `g(X_j, X̄_k) = h_jk / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    n: usize,
    h: Matrix,
    g: Matrix,
    ginv: Matrix,
    omega: Form,
}

impl Metric {
    pub fn from_hermitian(h: Matrix) -> Result<Self, GeomError> {
        if !h.is_hermitian() {
            return Err(GeomError::NotHermitian);
        }
        let n = h.rows();
        let hinv = linalg::inverse(&h)?;
        let half = Scalar::ratio(1, 2);
        let two = Scalar::from_int(2);
        let mut g = Matrix::zeros(2 * n, 2 * n);
        let mut ginv = Matrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            for k in 0..n {
                let v = h.get(j, k) * &half;
                g.set(j, n + k, v.clone());
                g.set(n + k, j, v);
                ginv.set(j, n + k, hinv.get(k, j) * &two);
                ginv.set(n + j, k, hinv.get(j, k) * &two);
            }
        }
        let mut omega = Form::zero(n);
        let ih = Scalar::gauss((0, 1), (1, 2));
        for j in 0..n {
            for k in 0..n {
                omega = omega.add(&Form::from_indices(n, &[j, n + k], h.get(j, k) * &ih));
            }
        }
        Ok(Metric { n, h, g, ginv, omega })
    }

    pub fn from_omega(omega: &Form) -> Result<Self, GeomError> {
        let n = omega.dim();
        if !omega.is_real() || omega.bidegrees().iter().any(|&b| b != (1, 1)) {
            return Err(GeomError::NotReal11);
        }
        let m2i = Scalar::from_int(-2) * Scalar::i();
        let h = Matrix::from_fn(n, n, |j, k| omega.eval(&[j, n + k]) * &m2i);
        Self::from_hermitian(h)
    }

    pub fn standard(n: usize) -> Self {
        Self::from_hermitian(Matrix::identity(n)).expect("identity")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hermitian(&self) -> &Matrix {
        &self.h
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn g(&self, a: usize, b: usize) -> &Scalar {
        self.g.get(a, b)
    }

    pub fn ginv(&self, a: usize, b: usize) -> &Scalar {
        self.ginv.get(a, b)
    }

    pub fn gram(&self) -> &Matrix {
        &self.g
    }

    pub fn inverse_gram(&self) -> &Matrix {
        &self.ginv
    }

    /// Nonzero entries `(a, b, g^{ab})` of the inverse.
    pub fn ginv_pairs(&self) -> Vec<(usize, usize, Scalar)> {
        let nn = 2 * self.n;
        let mut out = Vec::new();
        for a in 0..nn {
            for b in 0..nn {
                let v = self.ginv.get(a, b);
                if !v.is_zero() {
                    out.push((a, b, v.clone()));
                }
            }
        }
        out
    }

    /// `g^{-1} ξ` for a covector given by its frame values.
    pub fn raise(&self, xi: &[Scalar]) -> Vec<Scalar> {
        self.ginv.mul_vec(xi)
    }

    pub fn lower(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.g.mul_vec(v)
    }

    pub fn subs(&self, vals: &std::collections::BTreeMap<String, Scalar>) -> Result<Self, GeomError> {
        Self::from_hermitian(self.h.map(|x| x.subs(vals)))
    }
}

/// `j(a)` is the eigenvalue of `J` on `X_a`.
pub fn j_eigen(n: usize, a: usize) -> Scalar {
    if a < n { Scalar::i() } else { -Scalar::i() }
}

/// `gamma[a]` is the matrix of `∇_{X_a}` on constant-coefficient vector fields:
/// entry `(e, b)` is the `X_e` component of `∇_{X_a} X_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    pub gamma: Vec<Matrix>,
}

impl Connection {
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn apply(&self, a: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.gamma[a].mul_vec(v)
    }

    /// Adds `sign/2 · g^{-1} β(X_a, X_b, ·)`.
    pub fn shifted(&self, g: &Metric, beta: &T3, sign: i64) -> Connection {
        let nn = self.len();
        let c = Scalar::ratio(sign, 2);
        let gamma = (0..nn)
            .map(|a| {
                Matrix::from_fn(nn, nn, |e, b| {
                    let mut s = self.gamma[a].get(e, b).clone();
                    for z in 0..nn {
                        let gi = g.ginv(e, z);
                        if !gi.is_zero() {
                            s += &(&(gi * beta.get(a, b, z)) * &c);
                        }
                    }
                    s
                })
            })
            .collect();
        Connection { gamma }
    }

    /// `T(X_a, X_b)` as a vector.
    pub fn torsion(&self, model: &AlgebraModel, a: usize, b: usize) -> Vec<Scalar> {
        let nn = self.len();
        (0..nn)
            .map(|e| self.gamma[a].get(e, b) - self.gamma[b].get(e, a) - model.bracket(a, b, e))
            .collect()
    }

    /// `(∇_{X_a} g)(X_b, X_c)`.
    pub fn metric_defect(&self, g: &Metric, a: usize, b: usize, c: usize) -> Scalar {
        let nn = self.len();
        let mut s = Scalar::zero();
        for e in 0..nn {
            s += &(self.gamma[a].get(e, b) * g.g(e, c));
            s += &(self.gamma[a].get(e, c) * g.g(b, e));
        }
        -s
    }

    pub fn curvature(&self, model: &AlgebraModel) -> Curvature {
        let nn = self.len();
        let fiber = self.gamma.first().map_or(0, |g| g.rows());
        let mut r = vec![vec![Matrix::zeros(fiber, fiber); nn]; nn];
        for a in 0..nn {
            for b in a + 1..nn {
                let mut m = self.gamma[a].commutator(&self.gamma[b]);
                for f in 0..nn {
                    let c = model.bracket(a, b, f);
                    if !c.is_zero() {
                        m = m.sub(&self.gamma[f].scale(c));
                    }
                }
                r[b][a] = m.scale(&Scalar::from_int(-1));
                r[a][b] = m;
            }
        }
        Curvature { r }
    }
}

/// `r[a][b]` is the endomorphism `R(X_a, X_b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    pub r: Vec<Vec<Matrix>>,
}

impl Curvature {
    pub fn is_zero(&self) -> bool {
        self.r.iter().all(|row| row.iter().all(|m| m.is_zero()))
    }

    /// `g(R(X_a, X_b) X_c, X_d)`.
    pub fn lowered(&self, g: &Metric, a: usize, b: usize, c: usize, d: usize) -> Scalar {
        let m = &self.r[a][b];
        let mut s = Scalar::zero();
        for e in 0..m.rows() {
            let x = m.get(e, c);
            if !x.is_zero() {
                s += &(x * g.g(e, d));
            }
        }
        s
    }

    /// `Rc(X_b, X_c) = Σ_a (R(X_a, X_b) X_c)^a`.
    pub fn ricci(&self, b: usize, c: usize) -> Scalar {
        (0..self.r.len()).map(|a| self.r[a][b].get(a, c).clone()).sum()
    }
}

/// Koszul formula on invariant frames.
pub fn levi_civita(model: &AlgebraModel, g: &Metric) -> Connection {
    let nn = model.frame_len();
    // gb[a][b][z] = g([X_a, X_b], X_z)
    let gb = T3::from_fn(nn, |a, b, z| {
        let br = model.bracket_vec(a, b);
        let mut s = Scalar::zero();
        for (f, c) in br.iter().enumerate() {
            if !c.is_zero() {
                s += &(c * g.g(f, z));
            }
        }
        s
    });
    let half = Scalar::ratio(1, 2);
    let gamma = (0..nn)
        .map(|a| {
            Matrix::from_fn(nn, nn, |e, b| {
                let mut s = Scalar::zero();
                for z in 0..nn {
                    let gi = g.ginv(e, z);
                    if gi.is_zero() {
                        continue;
                    }
                    let k = gb.get(a, b, z) - gb.get(b, z, a) + gb.get(z, a, b);
                    s += &(gi * &k);
                }
                &s * &half
            })
        })
        .collect();
    Connection { gamma }
}

/// `∇`, Bismut `∇^B = ∇ - ½ g^{-1} d^cω`, and `∇^- = ∇ + ½ g^{-1} d^cω`.
/// `plus` is the same connection as `bismut`.
#[derive(Clone, Debug)]
pub struct ConnectionFamily {
    pub nabla: Connection,
    pub bismut: Connection,
    pub minus: Connection,
    pub plus: Connection,
    pub dc_omega: T3,
}

pub fn connection_family(model: &AlgebraModel, g: &Metric) -> ConnectionFamily {
    let nabla = levi_civita(model, g);
    let dcw = T3::of_form(model.frame_len(), &model.dc(g.omega()));
    let bismut = nabla.shifted(g, &dcw, -1);
    let minus = nabla.shifted(g, &dcw, 1);
    ConnectionFamily { plus: bismut.clone(), nabla, bismut, minus, dc_omega: dcw }
}

/// The ω-trace `Λτ = ½ Σ g^{ab} τ(X_a, J X_b)`.
pub fn lambda(g: &Metric, tau: &Form) -> Scalar {
    let n = g.n();
    let mut s = Scalar::zero();
    for (a, b, gi) in g.ginv_pairs() {
        let v = tau.eval(&[a, b]);
        if !v.is_zero() {
            s += &(&(&gi * &v) * &j_eigen(n, b));
        }
    }
    &s * &Scalar::ratio(1, 2)
}

/// Bismut Ricci form `ρ_B(V, W) = ½ Σ g(R^B(V,W) J e_j, e_j)`, which reduces
/// to `½ tr(R^B(V,W) ∘ J)`.
pub fn bismut_ricci(model: &AlgebraModel, fam: &ConnectionFamily) -> Form {
    let rb = fam.bismut.curvature(model);
    ricci_form_of(model, &rb)
}

pub fn ricci_form_of(model: &AlgebraModel, r: &Curvature) -> Form {
    let n = model.n();
    let half = Scalar::ratio(1, 2);
    Form::from_bilinear(n, |a, b| {
        let m = &r.r[a][b];
        let s: Scalar = (0..2 * n).map(|e| m.get(e, e) * &j_eigen(n, e)).sum();
        &s * &half
    })
}

/// Lee form `θ_ω(V) = ½ Σ g^{ab} dω(X_a, J X_b, V)`.
pub fn lee_form(model: &AlgebraModel, g: &Metric) -> Form {
    let n = model.n();
    let dw = model.d(g.omega());
    let mut out = Form::zero(n);
    for v in 0..2 * n {
        let mut s = Scalar::zero();
        for (a, b, gi) in g.ginv_pairs() {
            let x = dw.eval(&[a, b, v]);
            if !x.is_zero() {
                s += &(&(&gi * &x) * &j_eigen(n, b));
            }
        }
        out.add_term(1 << v, &s * &Scalar::ratio(1, 2));
    }
    out
}

/// `(∇_{X_a} β)(X_{i1}, ..., X_{ik})` for an invariant `k`-form.
pub fn cov_deriv(conn: &Connection, beta: &Form, a: usize, idx: &[usize]) -> Scalar {
    let nn = conn.len();
    let mut s = Scalar::zero();
    let mut buf = idx.to_vec();
    for slot in 0..idx.len() {
        let col = idx[slot];
        for e in 0..nn {
            let c = conn.gamma[a].get(e, col);
            if c.is_zero() {
                continue;
            }
            buf[slot] = e;
            s -= &(c * &beta.eval(&buf));
        }
        buf[slot] = col;
    }
    s
}

/// `d^*β(V) = -Σ g^{ab} (∇_{X_a} β)(X_b, V)` for a 2-form, using `conn`.
pub fn codifferential_2(model: &AlgebraModel, g: &Metric, conn: &Connection, beta: &Form) -> Form {
    let n = model.n();
    let mut out = Form::zero(n);
    for v in 0..2 * n {
        let mut s = Scalar::zero();
        for (a, b, gi) in g.ginv_pairs() {
            s -= &(&gi * &cov_deriv(conn, beta, a, &[b, v]));
        }
        out.add_term(1 << v, s);
    }
    out
}

/// `d^*H(V, W) = -Σ g^{ab} (∇_{X_a} H)(X_b, V, W)` for a 3-form.
pub fn codifferential_3(model: &AlgebraModel, g: &Metric, conn: &Connection, h: &Form) -> Form {
    let n = model.n();
    let pairs = g.ginv_pairs();
    Form::from_bilinear(n, |v, w| {
        let mut s = Scalar::zero();
        for (a, b, gi) in &pairs {
            s -= &(gi * &cov_deriv(conn, h, *a, &[*b, v, w]));
        }
        s
    })
}

/// `hodge(F, H)(V) = ½ Σ g^{ab} g^{cd} F(X_a, X_d) H(X_b, V, X_c)`, which is
/// `i_V *(F ∧ *H)`.
pub fn hodge_contract(g: &Metric, f: &Form, h: &Form) -> Form {
    let n = g.n();
    let pairs = g.ginv_pairs();
    let mut out = Form::zero(n);
    for v in 0..2 * n {
        let mut s = Scalar::zero();
        for (a, b, gab) in &pairs {
            for (c, d, gcd) in &pairs {
                let x = f.eval(&[*a, *d]);
                if x.is_zero() {
                    continue;
                }
                let y = h.eval(&[*b, v, *c]);
                if y.is_zero() {
                    continue;
                }
                s += &(&(gab * gcd) * &(&x * &y));
            }
        }
        out.add_term(1 << v, &s * &Scalar::ratio(1, 2));
    }
    out
}

/// `(H∘H)(V, W) = Σ g^{ab} g^{cd} H(X_a, X_c, V) H(X_b, X_d, W)`.
pub fn h_square(g: &Metric, h: &Form, v: usize, w: usize) -> Scalar {
    let pairs = g.ginv_pairs();
    let mut s = Scalar::zero();
    for (a, b, gab) in &pairs {
        for (c, d, gcd) in &pairs {
            let x = h.eval(&[*a, *c, v]);
            if x.is_zero() {
                continue;
            }
            let y = h.eval(&[*b, *d, w]);
            if !y.is_zero() {
                s += &(&(gab * gcd) * &(&x * &y));
            }
        }
    }
    s
}

/// `(L_{φ♯} g)(X_v, X_w) = (∇_v φ)(X_w) + (∇_w φ)(X_v)` with Levi-Civita `∇`.
pub fn lie_derivative_metric(nabla: &Connection, phi: &Form, v: usize, w: usize) -> Scalar {
    cov_deriv(nabla, phi, v, &[w]) + cov_deriv(nabla, phi, w, &[v])
}

/// `(∇_{X_v} J) X_w` as a vector.
pub fn nabla_j(model: &AlgebraModel, nabla: &Connection, v: usize, w: usize) -> Vec<Scalar> {
    let n = model.n();
    let nn = 2 * n;
    // ∇_v (J X_w) - J ∇_v X_w
    (0..nn)
        .map(|e| nabla.gamma[v].get(e, w) * &(j_eigen(n, w) - j_eigen(n, e)))
        .collect()
}

/// Right side of `(∇_V J) W = ½ g^{-1}(dω(V, W, ·) - d^cω(JV, W, ·))`.
pub fn nabla_j_formula(model: &AlgebraModel, g: &Metric, v: usize, w: usize) -> Vec<Scalar> {
    let n = model.n();
    let dw = model.d(g.omega());
    let dcw = model.dc(g.omega());
    let jv = j_eigen(n, v);
    let cov: Vec<Scalar> = (0..2 * n)
        .map(|z| &(dw.eval(&[v, w, z]) - &(&jv * &dcw.eval(&[v, w, z]))) * &Scalar::ratio(1, 2))
        .collect();
    g.raise(&cov)
}

#[derive(Clone, Debug)]
pub struct BalancedReport {
    pub balanced: bool,
    pub d_omega_pow: Form,
    pub omega_norm_squared: Scalar,
    pub balanced_class_rep: Form,
}

/// `‖Ω‖²` is the ratio of `Ω ∧ Ω̄` to `ω^n/n!`, normalized to 1 on the flat
/// metric; the conformal factor is constant on invariant data, so the
/// conformally balanced condition is `d(ω^{n-1}) = 0`.
pub fn balanced_and_norm(model: &AlgebraModel, g: &Metric) -> BalancedReport {
    let n = model.n();
    let wpow = g.omega().pow(n - 1);
    let d_omega_pow = model.d(&wpow);
    let top = (1u32 << (2 * n)) - 1;
    let ratio = |om: &Form| -> Scalar {
        let vol = model.volume();
        let oo = vol.wedge(&vol.conj()).coeff(top);
        let mut fact = 1i64;
        for k in 1..=n as i64 {
            fact *= k;
        }
        let wn = om.pow(n).coeff(top) * Scalar::ratio(1, fact);
        oo.div_exact(&wn).expect("nondegenerate ω")
    };
    let flat = ratio(Metric::standard(n).omega());
    let norm = ratio(g.omega()).div_exact(&flat).expect("unit");
    BalancedReport {
        balanced: d_omega_pow.is_zero(),
        d_omega_pow,
        omega_norm_squared: norm,
        balanced_class_rep: wpow.scale(&Scalar::sym("normOmega")),
    }
}

/// `y += c · x`.
pub fn axpy(y: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &(c * xi);
        }
    }
}

pub fn zero_vec(len: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); len]
}

/// An invariant 2-form with values in a fixed vector space, stored on frame
/// pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Valued2 {
    pub dim: usize,
    pub comp: Vec<Vec<Vec<Scalar>>>,
}

impl Valued2 {
    pub fn zero(len: usize, dim: usize) -> Self {
        Valued2 { dim, comp: vec![vec![zero_vec(dim); len]; len] }
    }

    /// Evaluates `f` for `a < b` and fills in by skew symmetry.
    pub fn from_fn(len: usize, dim: usize, f: impl Fn(usize, usize) -> Vec<Scalar>) -> Self {
        let mut out = Self::zero(len, dim);
        for a in 0..len {
            for b in a + 1..len {
                let v = f(a, b);
                out.comp[b][a] = v.iter().map(|x| -x.clone()).collect();
                out.comp[a][b] = v;
            }
        }
        out
    }

    pub fn from_forms(len: usize, forms: &[Form]) -> Self {
        Self::from_fn(len, forms.len(), |a, b| forms.iter().map(|f| f.eval(&[a, b])).collect())
    }

    pub fn len(&self) -> usize {
        self.comp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comp.is_empty()
    }

    pub fn at(&self, a: usize, b: usize) -> &[Scalar] {
        &self.comp[a][b]
    }

    pub fn is_zero(&self) -> bool {
        self.comp.iter().flatten().flatten().all(|x| x.is_zero())
    }

    pub fn component(&self, p: usize) -> Form {
        let n = self.len() / 2;
        Form::from_bilinear(n, |a, b| self.comp[a][b][p].clone())
    }

    pub fn components(&self) -> Vec<Form> {
        (0..self.dim).map(|p| self.component(p)).collect()
    }

    /// `F(V, W)` for arbitrary frame vectors.
    pub fn eval_vectors(&self, v: &[Scalar], w: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim);
        for (a, va) in v.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            for (b, wb) in w.iter().enumerate() {
                if !wb.is_zero() {
                    axpy(&mut out, &(va * wb), &self.comp[a][b]);
                }
            }
        }
        out
    }

    /// Applies a linear map to every value.
    pub fn map_values(&self, m: &Matrix) -> Valued2 {
        Valued2 {
            dim: m.rows(),
            comp: self.comp.iter().map(|row| row.iter().map(|v| m.mul_vec(v)).collect()).collect(),
        }
    }

    pub fn sub(&self, o: &Valued2) -> Valued2 {
        let mut out = self.clone();
        for (ra, rb) in out.comp.iter_mut().zip(&o.comp) {
            for (va, vb) in ra.iter_mut().zip(rb) {
                axpy(va, &Scalar::from_int(-1), vb);
            }
        }
        out
    }
}

/// `(∇_{X_a} F)(X_b, X_c)` where `act[a]` is the action of the connection on
/// values and `conn` acts on the arguments.
pub fn valued_cov_deriv(conn: &Connection, act: &[Matrix], f: &Valued2, a: usize, b: usize, c: usize) -> Vec<Scalar> {
    let mut out = act[a].mul_vec(f.at(b, c));
    let m1 = Scalar::from_int(-1);
    for e in 0..conn.len() {
        let x = conn.gamma[a].get(e, b);
        if !x.is_zero() {
            axpy(&mut out, &(&m1 * x), f.at(e, c));
        }
        let y = conn.gamma[a].get(e, c);
        if !y.is_zero() {
            axpy(&mut out, &(&m1 * y), f.at(b, e));
        }
    }
    out
}

/// `d^*F(X_v) = -Σ g^{ab} (∇_{X_a} F)(X_b, X_v)`, indexed by `v`.
pub fn valued_codiff(g: &Metric, conn: &Connection, act: &[Matrix], f: &Valued2) -> Vec<Vec<Scalar>> {
    let pairs = g.ginv_pairs();
    let m1 = Scalar::from_int(-1);
    (0..f.len())
        .map(|v| {
            let mut out = zero_vec(f.dim);
            for (a, b, gi) in &pairs {
                axpy(&mut out, &(&m1 * gi), &valued_cov_deriv(conn, act, f, *a, *b, v));
            }
            out
        })
        .collect()
}

/// `(i_V F)(X_w) = F(V, X_w)`, indexed by `w`.
pub fn valued_interior(f: &Valued2, v: &[Scalar]) -> Vec<Vec<Scalar>> {
    (0..f.len())
        .map(|w| {
            let mut out = zero_vec(f.dim);
            for (a, va) in v.iter().enumerate() {
                axpy(&mut out, va, f.at(a, w));
            }
            out
        })
        .collect()
}

/// `½ Σ g^{ab} g^{cd} F(X_a, X_d) H(X_b, X_v, X_c)`, indexed by `v`.
pub fn valued_hodge(g: &Metric, f: &Valued2, h: &T3) -> Vec<Vec<Scalar>> {
    let pairs = g.ginv_pairs();
    let half = Scalar::ratio(1, 2);
    (0..f.len())
        .map(|v| {
            let mut out = zero_vec(f.dim);
            for (a, b, gab) in &pairs {
                for (c, d, gcd) in &pairs {
                    let y = h.get(*b, v, *c);
                    if !y.is_zero() {
                        axpy(&mut out, &(&(gab * gcd) * &(y * &half)), f.at(*a, *d));
                    }
                }
            }
            out
        })
        .collect()
}

/// `ΛF = ½ Σ g^{ab} F(X_a, J X_b)`.
pub fn valued_lambda(g: &Metric, f: &Valued2) -> Vec<Scalar> {
    let n = g.n();
    let mut out = zero_vec(f.dim);
    for (a, b, gi) in g.ginv_pairs() {
        axpy(&mut out, &(&(&gi * &j_eigen(n, b)) * &Scalar::ratio(1, 2)), f.at(a, b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_metric_round_trip() {
        let g = Metric::standard(3);
        let back = Metric::from_omega(g.omega()).unwrap();
        assert_eq!(back.hermitian(), &Matrix::identity(3));
        assert_eq!(lambda(&g, g.omega()), Scalar::from_int(3));
        let i11 = Form::from_indices(3, &[0, 3], Scalar::i());
        assert_eq!(lambda(&g, &i11), Scalar::from_int(2));
    }

    #[test]
    fn torus_is_flat() {
        let model = AlgebraModel::new(vec![Form::zero(3); 3]).unwrap();
        let fam = connection_family(&model, &Metric::standard(3));
        assert!(fam.nabla.gamma.iter().all(|m| m.is_zero()));
        assert!(fam.bismut.curvature(&model).is_zero());
        let b = balanced_and_norm(&model, &Metric::standard(3));
        assert!(b.balanced);
        assert!(b.omega_norm_squared.is_one());
    }

    fn sl2c() -> AlgebraModel {
        let w = |idx: &[usize], c: i64| Form::from_indices(3, idx, Scalar::from_int(c));
        AlgebraModel::new(vec![w(&[1, 2], 1), w(&[0, 2], -1), w(&[0, 1], 1)]).unwrap()
    }

    fn h19() -> AlgebraModel {
        let w = |idx: &[usize], c: Scalar| Form::from_indices(3, idx, c);
        let one = Scalar::one();
        AlgebraModel::new(vec![
            Form::zero(3),
            w(&[0, 2], one.clone()).add(&w(&[0, 5], one)),
            w(&[0, 4], Scalar::i()).sub(&w(&[1, 3], Scalar::i())),
        ])
        .unwrap()
    }

    fn skew_metric() -> Metric {
        let c = |re: (i64, i64), im: (i64, i64)| Scalar::gauss(re, im);
        let h = Matrix::from_rows(vec![
            vec![c((2, 1), (0, 1)), c((1, 2), (1, 1)), c((0, 1), (0, 1))],
            vec![c((1, 2), (-1, 1)), c((3, 1), (0, 1)), c((1, 3), (0, 1))],
            vec![c((0, 1), (0, 1)), c((1, 3), (0, 1)), c((1, 1), (0, 1))],
        ]);
        Metric::from_hermitian(h).unwrap()
    }

    #[test]
    fn levi_civita_is_metric_and_torsion_free() {
        let model = sl2c();
        let g = skew_metric();
        let fam = connection_family(&model, &g);
        for a in 0..6 {
            for b in 0..6 {
                assert!(fam.nabla.torsion(&model, a, b).iter().all(|x| x.is_zero()));
                for c in 0..6 {
                    assert!(fam.nabla.metric_defect(&g, a, b, c).is_zero());
                    assert!(fam.bismut.metric_defect(&g, a, b, c).is_zero());
                    // g(T^B(X, Y), Z) = -d^cω(X, Y, Z)
                    let t = fam.bismut.torsion(&model, a, b);
                    let lhs: Scalar = (0..6).map(|e| &t[e] * g.g(e, c)).sum();
                    assert_eq!(lhs, -fam.dc_omega.get(a, b, c).clone());
                }
            }
        }
    }

    #[test]
    fn bismut_preserves_j_and_nabla_j_formula() {
        let model = sl2c();
        let g = skew_metric();
        let fam = connection_family(&model, &g);
        for a in 0..6 {
            for e in 0..6 {
                for b in 0..6 {
                    if (e < 3) != (b < 3) {
                        assert!(fam.bismut.gamma[a].get(e, b).is_zero());
                    }
                }
            }
            for w in 0..6 {
                assert_eq!(nabla_j(&model, &fam.nabla, a, w), nabla_j_formula(&model, &g, a, w));
            }
        }
    }

    #[test]
    fn bismut_pair_identity() {
        let model = sl2c();
        let g = skew_metric();
        let fam = connection_family(&model, &g);
        let rm = fam.minus.curvature(&model);
        let rb = fam.bismut.curvature(&model);
        let ddc = model.d(&model.dc(g.omega()));
        for v1 in 0..6 {
            for v2 in 0..6 {
                for v3 in 0..6 {
                    for v4 in 0..6 {
                        let lhs = rm.lowered(&g, v1, v2, v3, v4) - rb.lowered(&g, v3, v4, v1, v2);
                        let rhs = ddc.eval(&[v1, v2, v3, v4]) * Scalar::ratio(1, 2);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn lee_form_against_codifferential() {
        let model = h19();
        let g = skew_metric();
        let fam = connection_family(&model, &g);
        let theta = lee_form(&model, &g);
        let dstar = codifferential_2(&model, &g, &fam.nabla, g.omega());
        for v in 0..6 {
            // θ_ω = J d^*ω with (Jα)(V) = -α(JV)
            let jd = -(dstar.eval(&[v]) * j_eigen(3, v));
            assert!(!jd.is_zero());
            assert_eq!(theta.eval(&[v]), jd);
        }
    }
}
