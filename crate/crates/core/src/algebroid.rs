//! The string algebroid `T^{1,0} ⊕ ad P ⊕ T*_{1,0}` with `τ = 2i∂ω`, its
//! Dolbeault operator and bracket, the generalized metric, the Chern
//! connection `D` on `T ⊕ ad P`, and the Hermitian-Einstein / generalized
//! Ricci-flat checkers.
//!
//! Section coordinates are ordered `X_1..X_n`, then `ad P`, then `w_1..w_n`.
//! Endomorphisms of `T ⊕ ad P` act on the complex frame `X, X̄` followed by
//! `ad P`.

use crate::bundles::{self, AdAlgebra, BundleError, ChernData, PairedBundles};
use crate::formalg::{AlgebraModel, Form};
use crate::geom::{self, axpy, j_eigen, zero_vec, Connection, ConnectionFamily, Curvature, Metric, Valued2, T3};
use crate::systems::{frame_name, Residual, SystemVerdict};
use hs_exact::linalg::{self, Matrix};
use hs_exact::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebroidError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("Bianchi residual dd^c w + <F^F> = {0} is nonzero")]
    Bianchi(Form),
    #[error("linear algebra: {0}")]
    Linalg(String),
}

impl From<linalg::LinalgError> for AlgebroidError {
    fn from(e: linalg::LinalgError) -> Self {
        AlgebroidError::Linalg(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct AlgebroidModel {
    pub model: AlgebraModel,
    pub pair: PairedBundles,
    pub metric: Metric,
    pub alg: AdAlgebra,
    pub chern: ChernData,
    pub fam: ConnectionFamily,
    pub tau: Form,
    pub bianchi_residual: Form,
    /// `ad(E_p)` for every basis element.
    ad_basis: Vec<Matrix>,
}

/// Builds the model and rejects it unless `dd^cω + ⟨F ∧ F⟩ = 0`.
pub fn build_algebroid(model: &AlgebraModel, pair: &PairedBundles, omega: &Metric) -> Result<AlgebroidModel, AlgebroidError> {
    let m = build_unchecked(model, pair, omega)?;
    if !m.bianchi_residual.is_zero() {
        return Err(AlgebroidError::Bianchi(m.bianchi_residual));
    }
    Ok(m)
}

/// Same data without the Bianchi precondition, for diagnostics.
pub fn build_unchecked(model: &AlgebraModel, pair: &PairedBundles, omega: &Metric) -> Result<AlgebroidModel, AlgebroidError> {
    let (alg, chern) = pair.chern(model)?;
    let fam = geom::connection_family(model, omega);
    let tau = model.del(omega.omega()).scale(&Scalar::gauss((0, 1), (2, 1)));
    let bianchi_residual = crate::systems::bianchi_residual(model, omega, &alg, &chern);
    let ad_basis = (0..alg.dim()).map(|p| alg.ad(&alg.unit(p))).collect();
    Ok(AlgebroidModel {
        model: model.clone(),
        pair: pair.clone(),
        metric: omega.clone(),
        alg,
        chern,
        fam,
        tau,
        bianchi_residual,
        ad_basis,
    })
}

/// A coefficient `c + f·φ + Σ d_k X_k(φ)` for one formal holomorphic
/// function `φ`; only first derivatives are representable.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub c: Scalar,
    pub f: Scalar,
    pub d: Vec<Scalar>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("product of two non-constant coefficients")]
    Product,
    #[error("second derivative of the formal function")]
    SecondDerivative,
}

impl Jet {
    pub fn constant(n: usize, c: Scalar) -> Self {
        Jet { c, f: Scalar::zero(), d: zero_vec(n) }
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(n, Scalar::zero())
    }

    pub fn phi(n: usize) -> Self {
        Jet { c: Scalar::zero(), f: Scalar::one(), d: zero_vec(n) }
    }

    pub fn is_constant(&self) -> bool {
        self.f.is_zero() && self.d.iter().all(|x| x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.is_constant()
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet {
            c: &self.c + &o.c,
            f: &self.f + &o.f,
            d: self.d.iter().zip(&o.d).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Jet {
        Jet { c: &self.c * s, f: &self.f * s, d: self.d.iter().map(|x| x * s).collect() }
    }

    pub fn mul(&self, o: &Jet) -> Result<Jet, JetError> {
        if self.is_constant() {
            Ok(o.scale(&self.c))
        } else if o.is_constant() {
            Ok(self.scale(&o.c))
        } else {
            Err(JetError::Product)
        }
    }

    /// `X_a` of the coefficient; `X̄` derivatives vanish.
    pub fn deriv(&self, a: usize) -> Result<Jet, JetError> {
        let n = self.d.len();
        if self.d.iter().any(|x| !x.is_zero()) {
            return Err(JetError::SecondDerivative);
        }
        let mut out = Jet::zero(n);
        if a < n {
            out.d[a] = self.f.clone();
        }
        Ok(out)
    }
}

pub type Section = Vec<Jet>;

pub fn constant_section(n: usize, v: &[Scalar]) -> Section {
    v.iter().map(|x| Jet::constant(n, x.clone())).collect()
}

/// Constant part of a section; `None` when any coefficient involves `φ`.
pub fn as_constant(s: &Section) -> Option<Vec<Scalar>> {
    s.iter().map(|j| j.is_constant().then(|| j.c.clone())).collect()
}

fn jsum(n: usize, items: impl IntoIterator<Item = Result<Jet, JetError>>) -> Result<Jet, JetError> {
    let mut acc = Jet::zero(n);
    for it in items {
        acc = acc.add(&it?);
    }
    Ok(acc)
}

impl AlgebroidModel {
    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn m(&self) -> usize {
        self.alg.dim()
    }

    /// Rank of `Q`.
    pub fn q(&self) -> usize {
        2 * self.n() + self.m()
    }

    pub fn is_valid(&self) -> bool {
        self.bianchi_residual.is_zero()
    }

    pub(crate) fn f(&self, a: usize, b: usize) -> &[Scalar] {
        self.chern.curvature.at(a, b)
    }

    pub(crate) fn pp(&self, p: usize, q: usize) -> &Scalar {
        self.alg.pairing().get(p, q)
    }

    pub fn section_label(&self, i: usize) -> String {
        let (n, m) = (self.n(), self.m());
        if i < n {
            format!("X{}", i + 1)
        } else if i < n + m {
            self.alg.basis_name(i - n)
        } else {
            format!("w{}", i - n - m + 1)
        }
    }

    /// `L_a`: the matrix of `∂̄_0` along `X̄_a` on constant sections.
    pub fn dolbeault_op(&self, a: usize) -> Matrix {
        let (n, m) = (self.n(), self.m());
        let bar = n + a;
        let mut l = Matrix::zeros(self.q(), self.q());
        for j in 0..n {
            // [X̄_a, X_j]^{1,0}
            for k in 0..n {
                l.set(k, j, self.model.bracket(bar, j, k).clone());
            }
            // F(X_j, X̄_a)
            for p in 0..m {
                l.set(n + p, j, self.f(j, bar)[p].clone());
            }
            // -τ(X_j, X̄_a, X_k)
            for k in 0..n {
                l.set(n + m + k, j, -self.tau.eval(&[j, bar, k]));
            }
        }
        let act = &self.chern.act[bar];
        for p in 0..m {
            for q in 0..m {
                l.set(n + p, n + q, act.get(p, q).clone());
            }
        }
        for k in 0..n {
            let fk = self.f(bar, k);
            for q in 0..m {
                let s: Scalar = (0..m).map(|p| &fk[p] * self.pp(p, q)).sum();
                l.set(n + m + k, n + q, &s * &Scalar::from_int(2));
            }
            for j in 0..n {
                l.set(n + m + k, n + m + j, self.model.structure()[j].eval(&[bar, k]));
            }
        }
        l
    }

    pub fn dolbeault_ops(&self) -> Vec<Matrix> {
        (0..self.n()).map(|a| self.dolbeault_op(a)).collect()
    }

    /// `L_b L_c - L_c L_b - L_{[X̄_b, X̄_c]}` for `b < c`, which all vanish
    /// exactly when `∂̄_0² = 0`.
    pub fn dbar_squared(&self) -> Vec<((usize, usize), Matrix)> {
        let n = self.n();
        let ls = self.dolbeault_ops();
        let mut out = Vec::new();
        for b in 0..n {
            for c in b + 1..n {
                let mut r = ls[b].commutator(&ls[c]);
                for f in 0..n {
                    let s = self.model.bracket(n + b, n + c, n + f);
                    if !s.is_zero() {
                        r = r.sub(&ls[f].scale(s));
                    }
                }
                out.push(((b, c), r));
            }
        }
        out
    }

    /// `⟨u, v⟩_0 = ½(ξ(W) + η(V)) + ⟨r, t⟩`.
    pub fn pairing0(&self) -> Matrix {
        let (n, m) = (self.n(), self.m());
        let mut p = Matrix::zeros(self.q(), self.q());
        let h = Scalar::ratio(1, 2);
        for j in 0..n {
            p.set(j, n + m + j, h.clone());
            p.set(n + m + j, j, h.clone());
        }
        for a in 0..m {
            for b in 0..m {
                p.set(n + a, n + b, self.pp(a, b).clone());
            }
        }
        p
    }

    pub fn pair_sections(&self, u: &Section, v: &Section) -> Result<Jet, JetError> {
        let p = self.pairing0();
        let n = self.n();
        let mut acc = Jet::zero(n);
        for i in 0..self.q() {
            for j in 0..self.q() {
                let c = p.get(i, j);
                if !c.is_zero() && !u[i].is_zero() && !v[j].is_zero() {
                    acc = acc.add(&u[i].mul(&v[j])?.scale(c));
                }
            }
        }
        Ok(acc)
    }

    /// Holomorphic constant sections: the common kernel of the `L_a`.
    pub fn holomorphic_sections(&self) -> Result<Vec<Vec<Scalar>>, AlgebroidError> {
        let ls = self.dolbeault_ops();
        let stacked = ls.iter().skip(1).fold(ls[0].clone(), |acc, l| acc.vcat(l));
        Ok(linalg::nullspace(&stacked)?)
    }

    /// The bracket of the algebroid on sections with jet coefficients.
    pub fn bracket(&self, u: &Section, v: &Section) -> Result<Section, JetError> {
        let (n, m) = (self.n(), self.m());
        let (vv, r, xi) = (&u[..n], &u[n..n + m], &u[n + m..]);
        let (ww, t, eta) = (&v[..n], &v[n..n + m], &v[n + m..]);
        let mut out = vec![Jet::zero(n); self.q()];
        // T part: [V, W]
        for k in 0..n {
            let mut terms = Vec::new();
            for a in 0..n {
                terms.push(vv[a].mul(&ww[k].deriv(a)?));
                terms.push(ww[a].mul(&vv[k].deriv(a)?).map(|j| j.scale(&Scalar::from_int(-1))));
                for b in 0..n {
                    let c = self.model.bracket(a, b, k);
                    if !c.is_zero() {
                        terms.push(vv[a].mul(&ww[b]).map(|j| j.scale(c)));
                    }
                }
            }
            out[k] = jsum(n, terms)?;
        }
        // ad P part: -F(V,W) + ∂^θ_V t - ∂^θ_W r - [r, t]
        let dtheta = |x: &[Jet], s: &[Jet], p: usize| -> Result<Jet, JetError> {
            let mut terms = Vec::new();
            for a in 0..n {
                if x[a].is_zero() {
                    continue;
                }
                terms.push(x[a].mul(&s[p].deriv(a)?));
                let act = &self.chern.act[a];
                for q in 0..m {
                    let c = act.get(p, q);
                    if !c.is_zero() {
                        terms.push(x[a].mul(&s[q]).map(|j| j.scale(c)));
                    }
                }
            }
            jsum(n, terms)
        };
        for p in 0..m {
            let mut terms = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    let c = &self.f(a, b)[p];
                    if !c.is_zero() {
                        terms.push(vv[a].mul(&ww[b]).map(|j| j.scale(&-c.clone())));
                    }
                }
            }
            terms.push(dtheta(vv, t, p));
            terms.push(dtheta(ww, r, p).map(|j| j.scale(&Scalar::from_int(-1))));
            for q in 0..m {
                if r[q].is_zero() {
                    continue;
                }
                let adq = &self.ad_basis[q];
                for s in 0..m {
                    let c = adq.get(p, s);
                    if !c.is_zero() {
                        terms.push(r[q].mul(&t[s]).map(|j| j.scale(&-c.clone())));
                    }
                }
            }
            out[n + p] = jsum(n, terms)?;
        }
        // T* part
        let del_form = |x: &[Jet], one: &[Jet], k: usize| -> Result<Jet, JetError> {
            // ∂η(X, X_k) for η = one, X = x
            let mut terms = Vec::new();
            for a in 0..n {
                if x[a].is_zero() {
                    continue;
                }
                terms.push(x[a].mul(&one[k].deriv(a)?));
                terms.push(x[a].mul(&one[a].deriv(k)?).map(|j| j.scale(&Scalar::from_int(-1))));
                for jj in 0..n {
                    let c = self.model.structure()[jj].eval(&[a, k]);
                    if !c.is_zero() {
                        terms.push(x[a].mul(&one[jj]).map(|j| j.scale(&c)));
                    }
                }
            }
            jsum(n, terms)
        };
        let two = Scalar::from_int(2);
        for k in 0..n {
            let mut terms = vec![del_form(vv, eta, k), del_form(ww, xi, k).map(|j| j.scale(&Scalar::from_int(-1)))];
            // X_k(η(V))
            let mut ev = Jet::zero(n);
            for a in 0..n {
                ev = ev.add(&eta[a].mul(&vv[a])?);
            }
            terms.push(ev.deriv(k));
            for a in 0..n {
                for b in 0..n {
                    let c = self.tau.eval(&[a, b, k]);
                    if !c.is_zero() {
                        terms.push(vv[a].mul(&ww[b]).map(|j| j.scale(&c)));
                    }
                }
            }
            // 2⟨X_k(r) + [θ_k, r], t⟩
            let act = &self.chern.act[k];
            for p in 0..m {
                let mut dr = r[p].deriv(k)?;
                for q in 0..m {
                    let c = act.get(p, q);
                    if !c.is_zero() {
                        dr = dr.add(&r[q].scale(c));
                    }
                }
                if dr.is_zero() {
                    continue;
                }
                for q in 0..m {
                    let c = self.pp(p, q);
                    if !c.is_zero() {
                        terms.push(dr.mul(&t[q]).map(|j| j.scale(&(c * &two))));
                    }
                }
            }
            // 2⟨F(V, X_k), t⟩ - 2⟨F(W, X_k), r⟩
            for a in 0..n {
                let fa = self.f(a, k);
                for p in 0..m {
                    if fa[p].is_zero() {
                        continue;
                    }
                    for q in 0..m {
                        let c = &(&fa[p] * self.pp(p, q)) * &two;
                        if c.is_zero() {
                            continue;
                        }
                        terms.push(vv[a].mul(&t[q]).map(|j| j.scale(&c)));
                        terms.push(ww[a].mul(&r[q]).map(|j| j.scale(&-c.clone())));
                    }
                }
            }
            out[n + m + k] = jsum(n, terms)?;
        }
        Ok(out)
    }

    pub fn bracket_const(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.n();
        let b = self.bracket(&constant_section(n, u), &constant_section(n, v)).expect("constant sections");
        as_constant(&b).expect("constant result")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomResult {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub holomorphic_sections: usize,
    pub dbar_squared_zero: bool,
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.dbar_squared_zero && self.axioms.iter().all(|a| a.pass)
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, checked: 0, failure: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self) -> AxiomResult {
        AxiomResult { name: self.name.to_string(), pass: self.failure.is_none(), checked: self.checked, first_failure: self.failure }
    }
}

fn sec_eq(a: &Section, b: &Section) -> bool {
    a == b
}

fn sec_add(a: &Section, b: &Section) -> Section {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sec_scale_jet(s: &Section, j: &Jet) -> Result<Section, JetError> {
    s.iter().map(|x| x.mul(j)).collect()
}

impl AlgebroidModel {
    /// `π(u)(φ)` for a constant section `u`.
    fn anchor_of_phi(&self, u: &Section) -> Result<Jet, JetError> {
        let n = self.n();
        let phi = Jet::phi(n);
        jsum(n, (0..n).map(|a| u[a].mul(&phi.deriv(a)?)))
    }

    /// `2∂j` placed in the `T*` slots.
    fn d_operator(&self, j: &Jet) -> Result<Section, JetError> {
        let (n, m) = (self.n(), self.m());
        let mut out = vec![Jet::zero(n); self.q()];
        for k in 0..n {
            out[n + m + k] = j.deriv(k)?.scale(&Scalar::from_int(2));
        }
        Ok(out)
    }

    /// Axioms (D1)-(D5) on holomorphic constant sections, with (D3) and (D5)
    /// also on `φ·v` for a formal holomorphic function `φ`.
    pub fn axioms(&self) -> Result<AxiomReport, AlgebroidError> {
        let n = self.n();
        let hol: Vec<Section> = self.holomorphic_sections()?.iter().map(|v| constant_section(n, v)).collect();
        let dbar_squared_zero = self.dbar_squared().iter().all(|(_, r)| r.is_zero());
        let br = |u: &Section, v: &Section| self.bracket(u, v).expect("first-order sections");
        let label = |i: usize, j: usize| format!("sections {i}, {j}");
        let (mut d1, mut d2, mut d3, mut d4, mut d5) =
            (Tally::new("D1"), Tally::new("D2"), Tally::new("D3"), Tally::new("D4"), Tally::new("D5"));
        let phi = Jet::phi(n);
        for (i, u) in hol.iter().enumerate() {
            for (j, v) in hol.iter().enumerate() {
                let uv = br(u, v);
                let vu = br(v, u);
                // (D2) π[u,v] = [πu, πv]
                let mut vec_br = vec![Jet::zero(n); self.q()];
                vec_br[..n].clone_from_slice(&br(&self.anchor_section(u), &self.anchor_section(v))[..n]);
                d2.record(uv[..n] == vec_br[..n], || label(i, j));
                // (D5) [u,v] + [v,u] = 2∂⟨u,v⟩
                let rhs = self.d_operator(&self.pair_sections(u, v).expect("constants")).expect("constant");
                d5.record(sec_eq(&sec_add(&uv, &vu), &rhs), || label(i, j));
                // (D3) [u, φv] = π(u)(φ) v + φ [u, v]
                let pv = sec_scale_jet(v, &phi).expect("constant v");
                let lhs = br(u, &pv);
                let rhs = sec_add(&sec_scale_jet(v, &self.anchor_of_phi(u).expect("constant u")).expect("v"), &sec_scale_jet(&uv, &phi).expect("constant"));
                d3.record(sec_eq(&lhs, &rhs), || label(i, j));
                // (D5) with φv
                let s = sec_add(&lhs, &br(&pv, u));
                let rhs = self.d_operator(&self.pair_sections(u, &pv).expect("one factor constant")).expect("first order");
                d5.record(sec_eq(&s, &rhs), || format!("{} with phi", label(i, j)));
                for (k, w) in hol.iter().enumerate() {
                    // (D4) π(u)⟨v,w⟩ = 0 = ⟨[u,v],w⟩ + ⟨v,[u,w]⟩ on constants
                    let s = self.pair_sections(&uv, w).expect("c").add(&self.pair_sections(v, &br(u, w)).expect("c"));
                    d4.record(s.is_zero(), || format!("sections {i}, {j}, {k}"));
                    // (D1) [u,[v,w]] = [[u,v],w] + [v,[u,w]]
                    let lhs = br(u, &br(v, w));
                    let rhs = sec_add(&br(&uv, w), &br(v, &br(u, w)));
                    d1.record(sec_eq(&lhs, &rhs), || format!("sections {i}, {j}, {k}"));
                }
            }
        }
        Ok(AxiomReport {
            holomorphic_sections: hol.len(),
            dbar_squared_zero,
            axioms: vec![d1.finish(), d2.finish(), d3.finish(), d4.finish(), d5.finish()],
        })
    }

    fn anchor_section(&self, u: &Section) -> Section {
        let n = self.n();
        let mut out = vec![Jet::zero(n); self.q()];
        out[..n].clone_from_slice(&u[..n]);
        out
    }
}

/// `G` as a Hermitian matrix with `G(s, t) = t† M s`:
/// `g ⊕ ¼ g^{-1} ⊕ (-⟨·, conj ·⟩)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedMetric {
    pub gram: Matrix,
    /// Real signature `(positive, negative)` after specialization.
    pub signature: Option<(usize, usize)>,
}

impl AlgebroidModel {
    pub fn generalized_gram(&self) -> Matrix {
        let (n, m) = (self.n(), self.m());
        let h = self.metric.hermitian();
        let hinv = linalg::inverse(h).expect("metric is invertible");
        let mut g = Matrix::zeros(self.q(), self.q());
        let half = Scalar::ratio(1, 2);
        for j in 0..n {
            for k in 0..n {
                g.set(k, j, h.get(j, k) * &half);
                g.set(n + m + k, n + m + j, hinv.get(k, j) * &half);
            }
        }
        let ad = self.alg.hermitian_form();
        for p in 0..m {
            for q in 0..m {
                g.set(n + q, n + p, ad.get(q, p).clone());
            }
        }
        g
    }

    pub fn generalized_metric(&self, values: &BTreeMap<String, Scalar>) -> GeneralizedMetric {
        let gram = self.generalized_gram();
        let specialized = gram.map(|x| x.subs(values));
        let signature = linalg::inertia(&specialized).map(|(p, q, _)| (2 * p, 2 * q));
        GeneralizedMetric { gram, signature }
    }

    /// `ψ(V + r + ξ) = V - ½ g^{-1} ξ + r`, from `Q` to `T_C ⊕ ad P`.
    pub fn psi(&self) -> Matrix {
        let (n, m) = (self.n(), self.m());
        let nn = 2 * n;
        let mut p = Matrix::zeros(nn + m, self.q());
        for j in 0..n {
            p.set(j, j, Scalar::one());
        }
        for a in 0..m {
            p.set(nn + a, n + a, Scalar::one());
        }
        let mh = Scalar::ratio(-1, 2);
        for k in 0..n {
            for e in 0..nn {
                let gi = self.metric.ginv(e, k);
                if !gi.is_zero() {
                    p.set(e, n + m + k, gi * &mh);
                }
            }
        }
        p
    }

    fn big(&self) -> usize {
        2 * self.n() + self.m()
    }

    /// `g^{-1}⟨y(·), E_q⟩` columns: `(e, q) ↦ Σ_c g^{ec} Σ_p y(X_c)^p P_pq`.
    fn raise_pair(&self, y: impl Fn(usize) -> Vec<Scalar>) -> Matrix {
        let nn = 2 * self.n();
        let m = self.m();
        let ys: Vec<Vec<Scalar>> = (0..nn).map(&y).collect();
        let py: Vec<Vec<Scalar>> = ys.iter().map(|v| self.alg.pairing().transpose().mul_vec(v)).collect();
        Matrix::from_fn(nn, m, |e, q| {
            let mut s = Scalar::zero();
            for c in 0..nn {
                let gi = self.metric.ginv(e, c);
                if !gi.is_zero() && !py[c][q].is_zero() {
                    s += &(gi * &py[c][q]);
                }
            }
            s
        })
    }

    /// Connection matrices of `D` on `T_C ⊕ ad P`:
    /// `D_V(W + r) = ∇^-_V W - g^{-1}⟨i_V F, r⟩ + d^θ_V r - F(V, W)`.
    pub fn d_connection(&self) -> Connection {
        let nn = 2 * self.n();
        let m = self.m();
        let gamma = (0..nn)
            .map(|a| {
                let mut mat = Matrix::zeros(nn + m, nn + m);
                let gm = &self.fam.minus.gamma[a];
                for e in 0..nn {
                    for c in 0..nn {
                        mat.set(e, c, gm.get(e, c).clone());
                    }
                }
                for c in 0..nn {
                    for p in 0..m {
                        mat.set(nn + p, c, -self.f(a, c)[p].clone());
                    }
                }
                let act = &self.chern.act[a];
                for p in 0..m {
                    for q in 0..m {
                        mat.set(nn + p, nn + q, act.get(p, q).clone());
                    }
                }
                let up = self.raise_pair(|c| self.f(a, c).to_vec());
                for e in 0..nn {
                    for q in 0..m {
                        mat.set(e, nn + q, -up.get(e, q).clone());
                    }
                }
                mat
            })
            .collect();
        Connection { gamma }
    }

    /// Direct curvature of `D`.
    pub fn fd_direct(&self) -> Curvature {
        self.d_connection().curvature(&self.model)
    }

    /// `g^{-1} d^cω(X_x, X_y, ·)`.
    pub(crate) fn dc_sharp(&self, x: usize, y: usize) -> Vec<Scalar> {
        let nn = 2 * self.n();
        let cov: Vec<Scalar> = (0..nn).map(|z| self.fam.dc_omega.get(x, y, z).clone()).collect();
        self.metric.raise(&cov)
    }

    /// `g^{-1}⟨i_{X_x} F, r⟩` for `r = E_q`, as columns over `q`.
    fn inner_f(&self, x: usize) -> Matrix {
        self.raise_pair(|c| self.f(x, c).to_vec())
    }

    /// `𝕀(X_a, X_b)(X_c)`.
    fn mixed_block(&self, a: usize, b: usize, c: usize) -> Vec<Scalar> {
        let f = &self.chern.curvature;
        let mut out = geom::valued_cov_deriv(&self.fam.minus, &self.chern.act, f, c, a, b);
        let wb = self.dc_sharp(b, c);
        let va = self.dc_sharp(a, c);
        let m1 = Scalar::from_int(-1);
        for e in 0..wb.len() {
            if !wb[e].is_zero() {
                axpy(&mut out, &(&m1 * &wb[e]), self.f(a, e));
            }
            if !va[e].is_zero() {
                axpy(&mut out, &va[e], self.f(b, e));
            }
        }
        out
    }

    /// Curvature of `D` assembled from its closed-form blocks.
    pub fn fd_closed(&self) -> Curvature {
        let nn = 2 * self.n();
        let m = self.m();
        let big = nn + m;
        let rminus = self.fam.minus.curvature(&self.model);
        let inner: Vec<Matrix> = (0..nn).map(|x| self.inner_f(x)).collect();
        let mut r = vec![vec![Matrix::zeros(big, big); nn]; nn];
        for a in 0..nn {
            for b in a + 1..nn {
                let mut mat = Matrix::zeros(big, big);
                // TT: R^- - 𝔽†∧𝔽, (𝔽†∧𝔽)(V,W)Z = g^{-1}⟨F(W,·),F(V,Z)⟩ - g^{-1}⟨F(V,·),F(W,Z)⟩
                for c in 0..nn {
                    let t1 = inner[b].mul_vec(self.f(a, c));
                    let t2 = inner[a].mul_vec(self.f(b, c));
                    for e in 0..nn {
                        mat.set(e, c, rminus.r[a][b].get(e, c) - &t1[e] + &t2[e]);
                    }
                }
                // AT: 𝕀
                let mixed: Vec<Vec<Scalar>> = (0..nn).map(|c| self.mixed_block(a, b, c)).collect();
                for c in 0..nn {
                    for p in 0..m {
                        mat.set(nn + p, c, mixed[c][p].clone());
                    }
                }
                // TA: -𝕀† = g^{-1}⟨𝕀(·), r⟩
                let up = self.raise_pair(|c| mixed[c].clone());
                for e in 0..nn {
                    for q in 0..m {
                        mat.set(e, nn + q, up.get(e, q).clone());
                    }
                }
                // AA: [F(V,W), ·] - 𝔽∧𝔽†, (𝔽∧𝔽†)(V,W) r = F(W, g^{-1}⟨i_V F, r⟩) - F(V, g^{-1}⟨i_W F, r⟩)
                let adf = self.alg.ad(self.f(a, b));
                for q in 0..m {
                    let va: Vec<Scalar> = (0..nn).map(|e| inner[a].get(e, q).clone()).collect();
                    let wb: Vec<Scalar> = (0..nn).map(|e| inner[b].get(e, q).clone()).collect();
                    let mut col: Vec<Scalar> = (0..m).map(|p| adf.get(p, q).clone()).collect();
                    let fw = self.chern.curvature.eval_vectors(&unit(nn, b), &va);
                    let fv = self.chern.curvature.eval_vectors(&unit(nn, a), &wb);
                    axpy(&mut col, &Scalar::from_int(-1), &fw);
                    axpy(&mut col, &Scalar::one(), &fv);
                    for p in 0..m {
                        mat.set(nn + p, nn + q, col[p].clone());
                    }
                }
                r[b][a] = mat.scale(&Scalar::from_int(-1));
                r[a][b] = mat;
            }
        }
        Curvature { r }
    }

    /// `½ Σ g0^{ab} F_D(X_a, J X_b)`.
    pub fn sd_contraction(&self, fd: &Curvature, g0: &Metric) -> Matrix {
        let n = self.n();
        let big = self.big();
        let mut s = Matrix::zeros(big, big);
        for (a, b, gi) in g0.ginv_pairs() {
            s = s.add(&fd.r[a][b].scale(&(&(&gi * &j_eigen(n, b)) * &Scalar::ratio(1, 2))));
        }
        s
    }

    /// `Ψ = -d^{θ*}F - i_{θ_ω♯}F + hodge(F, d^cω)`, indexed by frame vector.
    pub fn psi_form(&self) -> Vec<Vec<Scalar>> {
        let ym = bundles::yang_mills_residual(&self.model, &self.metric, &self.fam.nabla, &self.alg, &self.chern);
        ym.into_iter().map(|v| v.into_iter().map(|x| -x).collect()).collect()
    }

    /// `S_θ = Λ_ω F`.
    pub fn s_theta(&self) -> Vec<Scalar> {
        geom::valued_lambda(&self.metric, &self.chern.curvature)
    }

    /// Second Ricci form of `D` from its closed-form blocks, traced with `ω`.
    pub fn sd_closed(&self) -> Matrix {
        let n = self.n();
        let nn = 2 * n;
        let m = self.m();
        let big = nn + m;
        let st = self.s_theta();
        let rho = geom::bismut_ricci(&self.model, &self.fam);
        let mut s = Matrix::zeros(big, big);
        for c in 0..nn {
            let cov: Vec<Scalar> =
                (0..nn).map(|w| -(rho.eval(&[c, w]) + self.alg.pair(&st, self.f(c, w)))).collect();
            let col = self.metric.raise(&cov);
            for e in 0..nn {
                s.set(e, c, col[e].clone());
            }
        }
        let psi = self.psi_form();
        let ss: Vec<Vec<Scalar>> = (0..nn).map(|c| psi[c].iter().map(|x| x * &j_eigen(n, c)).collect()).collect();
        for c in 0..nn {
            for p in 0..m {
                s.set(nn + p, c, ss[c][p].clone());
            }
        }
        let up = self.raise_pair(|c| ss[c].clone());
        for e in 0..nn {
            for q in 0..m {
                s.set(e, nn + q, up.get(e, q).clone());
            }
        }
        let ad = self.alg.ad(&st);
        for p in 0..m {
            for q in 0..m {
                s.set(nn + p, nn + q, ad.get(p, q).clone());
            }
        }
        s
    }

    /// Chern curvature of `(Q, ∂̄_0, G)` by the bundle formula.
    pub fn fg_bundle(&self) -> Result<Curvature, AlgebroidError> {
        self.fg_bundle_with(&self.generalized_gram())
    }

    /// Chern curvature of `(Q, ∂̄_0)` with an arbitrary Hermitian form.
    pub fn fg_bundle_with(&self, h: &Matrix) -> Result<Curvature, AlgebroidError> {
        let n = self.n();
        let hinv = linalg::inverse(h)?;
        let ls = self.dolbeault_ops();
        let mut gamma = vec![Matrix::zeros(self.q(), self.q()); 2 * n];
        for a in 0..n {
            gamma[n + a] = ls[a].clone();
            gamma[a] = hinv.mul(&ls[a].conj_transpose()).mul(h).scale(&Scalar::from_int(-1));
        }
        Ok(Connection { gamma }.curvature(&self.model))
    }

    /// `ψ^{-1} F_D ψ`.
    pub fn fg_transport(&self, fd: &Curvature) -> Result<Curvature, AlgebroidError> {
        let psi = self.psi();
        let pinv = linalg::inverse(&psi)?;
        let r = fd.r.iter().map(|row| row.iter().map(|m| pinv.mul(m).mul(&psi)).collect()).collect();
        Ok(Curvature { r })
    }

    /// `ψ L_a ψ^{-1} - D_{X̄_a}` for each `a`.
    pub fn psi_intertwines(&self) -> Result<bool, AlgebroidError> {
        let n = self.n();
        let psi = self.psi();
        let pinv = linalg::inverse(&psi)?;
        let d = self.d_connection();
        Ok((0..n).all(|a| psi.mul(&self.dolbeault_op(a)).mul(&pinv) == d.gamma[n + a]))
    }
}

fn unit(len: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(len);
    v[i] = Scalar::one();
    v
}

#[derive(Clone, Debug)]
pub struct HeGrfReport {
    pub he: SystemVerdict,
    pub grf: SystemVerdict,
    pub rho_decomp: SystemVerdict,
}

fn sym_residual(n: usize, f: impl Fn(usize, usize) -> Scalar) -> Residual {
    let nn = 2 * n;
    let mut out = Vec::new();
    for a in 0..nn {
        for b in a..nn {
            out.push((format!("({},{})", frame_name(n, a), frame_name(n, b)), f(a, b)));
        }
    }
    Residual::values(out)
}

impl AlgebroidModel {
    /// `Rc - ¼ H∘H + Σ g^{ab}⟨F(X_a,·), F(X_b,·)⟩ + ½ L_φ g` at `(v, w)`.
    fn grf_first(&self, h: &Form, phi: &Form, v: usize, w: usize, rc: &Curvature) -> Scalar {
        let mut s = rc.ricci(v, w);
        s -= &(geom::h_square(&self.metric, h, v, w) * Scalar::ratio(1, 4));
        for (a, b, gi) in self.metric.ginv_pairs() {
            s += &(&gi * &self.alg.pair(self.f(a, v), self.f(b, w)));
        }
        s += &(geom::lie_derivative_metric(&self.fam.nabla, phi, v, w) * Scalar::ratio(1, 2));
        s
    }

    fn grf_second(&self, h: &Form, phi: &Form) -> Form {
        let dstar = geom::codifferential_3(&self.model, &self.metric, &self.fam.nabla, h);
        let sharp = self.metric.raise(&(0..2 * self.n()).map(|v| phi.eval(&[v])).collect::<Vec<_>>());
        dstar.sub(&self.model.d(phi)).add(&h.contract(&sharp))
    }

    pub fn he_and_grf(&self) -> HeGrfReport {
        let n = self.n();
        let nn = 2 * n;
        let st = self.s_theta();
        let ad = &self.alg.ad(&st);
        let first = Residual::values((0..self.m()).flat_map(|p| {
            (0..self.m()).map(move |q| (format!("[{},{}]", p, q), ad.get(p, q).clone()))
        }));
        let psi = self.psi_form();
        let second = Residual::values(
            (0..nn).flat_map(|v| (0..self.m()).map(move |p| (v, p))).map(|(v, p)| {
                (format!("{}:{}", frame_name(n, v), self.alg.basis_name(p)), psi[v][p].clone())
            }),
        );
        let rho = geom::bismut_ricci(&self.model, &self.fam);
        let zf = crate::systems::pair_with_curvature(&self.alg, &st, &self.chern);
        let third = Residual::Form(rho.add(&zf));
        let he = SystemVerdict::new(vec![("[S_h,.]", first), ("Psi", second), ("rho_B + <S_h,F>", third)], Vec::new());

        let h = self.model.dc(self.metric.omega()).neg();
        let phi = geom::lee_form(&self.model, &self.metric);
        let rc = self.fam.nabla.curvature(&self.model);
        let g1 = sym_residual(n, |v, w| self.grf_first(&h, &phi, v, w, &rc));
        let g2 = Residual::Form(self.grf_second(&h, &phi));
        let ym = bundles::yang_mills_residual(&self.model, &self.metric, &self.fam.nabla, &self.alg, &self.chern);
        let g3 = Residual::values(
            (0..nn).flat_map(|v| (0..self.m()).map(move |p| (v, p))).map(|(v, p)| {
                (format!("{}:{}", frame_name(n, v), self.alg.basis_name(p)), ym[v][p].clone())
            }),
        );
        let grf = SystemVerdict::new(vec![("ricci", g1), ("dstar H", g2), ("yang-mills", g3)], Vec::new());

        // ρ_B^{1,1}(·, J·) = Rc - ¼H∘H + ⟨iF, iF⟩ + ⟨z, F(J·,·)⟩ + ½ L_φ g with z = S_h
        let d1 = sym_residual(n, |v, w| {
            let type11 = (v < n) != (w < n);
            let lhs = if type11 { rho.eval(&[v, w]) * j_eigen(n, w) } else { Scalar::zero() };
            let zterm = &self.alg.pair(&st, self.f(v, w)) * &j_eigen(n, v);
            lhs - self.grf_first(&h, &phi, v, w, &rc) - zterm
        });
        // ρ_B^{2,0+0,2}(·, J·) = -½ (d^*H - dθ_ω + i_{φ♯}H)
        let rho_j = Form::from_bilinear(n, |v, w| {
            let type11 = (v < n) != (w < n);
            if type11 { Scalar::zero() } else { rho.eval(&[v, w]) * j_eigen(n, w) }
        });
        let d2 = rho_j.add(&self.grf_second(&h, &phi).scale(&Scalar::ratio(1, 2)));
        let rho_decomp = SystemVerdict::new(vec![("rho_B^(1,1)", d1), ("rho_B^(2,0+0,2)", Residual::Form(d2))], Vec::new());
        HeGrfReport { he, grf, rho_decomp }
    }
}

/// Adjoint-valued 1-form by frame index.
pub type AdOneForm = Vec<Vec<Scalar>>;

#[derive(Clone, Debug)]
pub struct LiftingReport {
    pub first: Form,
    pub second: Valued2,
    pub holds: bool,
    pub anomaly: Form,
    pub anomaly_02: Valued2,
    /// `dH_0 - ⟨F_0 ∧ F_0⟩`, which must vanish for the input to be of
    /// string type.
    pub h0_bianchi: Form,
}

impl AlgebroidModel {
    /// Structure constants as a valued wedge `[α ∧ β](X,Y) = [α(X),β(Y)] - [α(Y),β(X)]`.
    fn ad_wedge(&self, x: &AdOneForm, y: &AdOneForm) -> Valued2 {
        let nn = 2 * self.n();
        Valued2::from_fn(nn, self.m(), |a, b| {
            let mut v = self.alg.bracket(&x[a], &y[b]);
            axpy(&mut v, &Scalar::from_int(-1), &self.alg.bracket(&x[b], &y[a]));
            v
        })
    }

    fn d_one(&self, x: &AdOneForm) -> Valued2 {
        let nn = 2 * self.n();
        Valued2::from_fn(nn, self.m(), |a, b| {
            let mut v = zero_vec(self.m());
            for (f, c) in self.model.bracket_vec(a, b).iter().enumerate() {
                axpy(&mut v, &-c.clone(), &x[f]);
            }
            v
        })
    }

    /// `d^{θ_0} x` for the Chern connection `θ_0`.
    fn d_theta(&self, x: &AdOneForm) -> Valued2 {
        let mut out = self.d_one(x);
        let tw = self.ad_wedge(&self.chern.theta, x);
        for (row, trow) in out.comp.iter_mut().zip(&tw.comp) {
            for (v, t) in row.iter_mut().zip(trow) {
                axpy(v, &Scalar::one(), t);
            }
        }
        out
    }

    /// Curvature of `θ_0 + a`: `F_0 + d^{θ_0} a + ½[a ∧ a]`.
    pub fn curvature_shifted(&self, a: &AdOneForm) -> Valued2 {
        let mut f = self.chern.curvature.clone();
        let da = self.d_theta(a);
        let aa = self.ad_wedge(a, a);
        for x in 0..f.comp.len() {
            for y in 0..f.comp.len() {
                axpy(&mut f.comp[x][y], &Scalar::one(), &da.comp[x][y]);
                axpy(&mut f.comp[x][y], &Scalar::ratio(1, 2), &aa.comp[x][y]);
            }
        }
        f
    }

    /// `⟨α ∧ β⟩` for adjoint-valued forms given by components.
    pub(crate) fn paired(&self, x: &[Form], y: &[Form]) -> Form {
        let n = self.n();
        let mut out = Form::zero(n);
        for p in 0..self.m() {
            for q in 0..self.m() {
                let c = self.pp(p, q);
                if !c.is_zero() && !x[p].is_zero() && !y[q].is_zero() {
                    out = out.add(&x[p].wedge(&y[q]).scale(c));
                }
            }
        }
        out
    }

    pub(crate) fn one_form_components(&self, x: &AdOneForm) -> Vec<Form> {
        let n = self.n();
        (0..self.m())
            .map(|p| {
                let mut f = Form::zero(n);
                for (a, v) in x.iter().enumerate() {
                    f.add_term(1 << a, v[p].clone());
                }
                f
            })
            .collect()
    }

    fn part01(&self, x: &AdOneForm) -> AdOneForm {
        let n = self.n();
        x.iter().enumerate().map(|(a, v)| if a >= n { v.clone() } else { zero_vec(self.m()) }).collect()
    }

    /// Both lifting equations for `(ω, b, a)` over `H_0` and the Chern
    /// connection `θ_0` of the model, and the anomaly consequence for
    /// `θ = θ_0 + a`.
    pub fn lifting_check(&self, h0: &Form, omega: &Form, b: &Form, a: &AdOneForm) -> LiftingReport {
        let n = self.n();
        let nn = 2 * n;
        let ac = self.one_form_components(a);
        let f0c = self.chern.curvature.components();
        let aa = self.ad_wedge(a, a);
        let first = h0
            .add(&self.model.dc(omega))
            .sub(&self.model.d(b))
            .add(&self.paired(&ac, &f0c).scale(&Scalar::from_int(2)))
            .add(&self.paired(&ac, &self.d_theta(a).components()))
            .add(&self.paired(&ac, &aa.components()).scale(&Scalar::ratio(1, 3)));
        // F^{0,2} + ∂̄^{θ0} a^{0,1} + ½[a^{0,1} ∧ a^{0,1}], which only sees a^{0,1}
        let f01 = self.curvature_shifted(&self.part01(a));
        let ft = self.curvature_shifted(a);
        let mut second = Valued2::zero(nn, self.m());
        let mut anomaly_02 = Valued2::zero(nn, self.m());
        for x in n..nn {
            for y in n..nn {
                second.comp[x][y] = f01.comp[x][y].clone();
                anomaly_02.comp[x][y] = ft.comp[x][y].clone();
            }
        }
        let holds = first.is_zero() && second.is_zero();
        let anomaly = self.model.d(&self.model.dc(omega)).add(&bundles::paired_wedge(&self.alg, &ft));
        let h0_bianchi = self.model.d(h0).sub(&bundles::paired_wedge(&self.alg, &self.chern.curvature));
        LiftingReport { first, second, holds, anomaly, anomaly_02, h0_bianchi }
    }

    pub fn chern_theta(&self) -> AdOneForm {
        self.chern.theta.clone()
    }
}

/// `T3` of `d^cω` for external callers.
pub fn dc_tensor(m: &AlgebroidModel) -> &T3 {
    &m.fam.dc_omega
}
