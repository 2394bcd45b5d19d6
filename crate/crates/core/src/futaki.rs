//! Anchored endomorphisms of the algebroid, the holomorphicity solver and
//! the Futaki character by two routes: the curvature trace of the Chern
//! connection of a pseudo-Hermitian metric, and the explicit expression in
//! terms of Bismut curvature, `F` and the data `(φ, α, σ, b)`.

use crate::algebroid::{AlgebroidError, AlgebroidModel};
use crate::assume::{Assumptions, Definite};
use crate::formalg::{masks_of, Form};
use crate::geom::{self, axpy, j_eigen, zero_vec, Metric};
use hs_exact::linalg::{self, Matrix};
use hs_exact::Scalar;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FutakiError {
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error("linear algebra: {0}")]
    Linalg(String),
    #[error("representative is not closed: d nu = {0}")]
    NotClosed(Form),
    #[error("reference metric is not balanced: d w0^(n-1) = {0}")]
    NotBalanced(Form),
    #[error("matrix is not an anchored endomorphism: {0}")]
    NotAnchored(String),
}

impl From<linalg::LinalgError> for FutakiError {
    fn from(e: linalg::LinalgError) -> Self {
        FutakiError::Linalg(e.to_string())
    }
}

/// `φ̂ = [[φ, 0, 0], [α, σ, 0], [b, -2⟨α,·⟩, -φ*]]` on `T^{1,0} ⊕ ad P ⊕ T*_{1,0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchoredEndo {
    /// `phi[k][j]` is the `X_k` component of `φ(X_j)`.
    pub phi: Matrix,
    /// `alpha[k]` is `α(X_k)`.
    pub alpha: Vec<Vec<Scalar>>,
    pub sigma: Matrix,
    /// `b[j][k] = b(X_j, X_k)`, antisymmetric.
    pub b: Matrix,
}

impl AnchoredEndo {
    pub fn zero(n: usize, m: usize) -> Self {
        AnchoredEndo { phi: Matrix::zeros(n, n), alpha: vec![zero_vec(m); n], sigma: Matrix::zeros(m, m), b: Matrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.phi.rows()
    }

    pub fn m(&self) -> usize {
        self.sigma.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.sigma.is_zero() && self.b.is_zero() && self.alpha.iter().flatten().all(|x| x.is_zero())
    }

    pub fn assemble(&self, pairing: &Matrix) -> Matrix {
        let (n, m) = (self.n(), self.m());
        let q = 2 * n + m;
        let mut out = Matrix::zeros(q, q);
        for k in 0..n {
            for j in 0..n {
                out.set(k, j, self.phi.get(k, j).clone());
                out.set(n + m + k, n + m + j, -self.phi.get(j, k).clone());
                out.set(n + m + k, j, self.b.get(j, k).clone());
            }
            for p in 0..m {
                out.set(n + p, k, self.alpha[k][p].clone());
            }
            let pa = pairing.transpose().mul_vec(&self.alpha[k]);
            for q2 in 0..m {
                out.set(n + m + k, n + q2, &pa[q2] * &Scalar::from_int(-2));
            }
        }
        for p in 0..m {
            for r in 0..m {
                out.set(n + p, n + r, self.sigma.get(p, r).clone());
            }
        }
        out
    }

    /// Reads the data back from an assembled matrix, checking the shape.
    pub fn from_matrix(n: usize, m: usize, mat: &Matrix, pairing: &Matrix) -> Result<Self, FutakiError> {
        let e = AnchoredEndo {
            phi: Matrix::from_fn(n, n, |k, j| mat.get(k, j).clone()),
            alpha: (0..n).map(|k| (0..m).map(|p| mat.get(n + p, k).clone()).collect()).collect(),
            sigma: Matrix::from_fn(m, m, |p, r| mat.get(n + p, n + r).clone()),
            b: Matrix::from_fn(n, n, |j, k| mat.get(n + m + k, j).clone()),
        };
        if &e.assemble(pairing) != mat {
            return Err(FutakiError::NotAnchored("block shape differs from the anchored form".into()));
        }
        Ok(e)
    }

    pub fn alpha_forms(&self) -> Vec<Form> {
        let (n, m) = (self.n(), self.m());
        (0..m)
            .map(|p| {
                let mut f = Form::zero(n);
                for k in 0..n {
                    f.add_term(1 << k, self.alpha[k][p].clone());
                }
                f
            })
            .collect()
    }

    pub fn b_form(&self) -> Form {
        let n = self.n();
        let mut f = Form::zero(n);
        for j in 0..n {
            for k in j + 1..n {
                f.add_term((1 << j) | (1 << k), self.b.get(j, k).clone());
            }
        }
        f
    }
}

/// `⟨φ̂ s, t⟩_0 + ⟨s, φ̂ t⟩_0` as a matrix; zero for orthogonal `φ̂`.
pub fn orthogonality_defect(m: &AlgebroidModel, mat: &Matrix) -> Matrix {
    let p0 = m.pairing0();
    mat.transpose().mul(&p0).add(&p0.mul(mat))
}

/// Coordinates of the unknowns: `φ` (row-major), `α`, `σ` (row-major), then
/// `b(X_j, X_k)` for `j < k`.
#[derive(Clone, Debug)]
struct Layout {
    n: usize,
    m: usize,
}

impl Layout {
    fn len(&self) -> usize {
        self.n * self.n + self.n * self.m + self.m * self.m + self.n * (self.n - 1) / 2
    }

    fn endo(&self, v: &[Scalar]) -> AnchoredEndo {
        let (n, m) = (self.n, self.m);
        let mut e = AnchoredEndo::zero(n, m);
        let mut i = 0;
        for k in 0..n {
            for j in 0..n {
                e.phi.set(k, j, v[i].clone());
                i += 1;
            }
        }
        for k in 0..n {
            for p in 0..m {
                e.alpha[k][p] = v[i].clone();
                i += 1;
            }
        }
        for p in 0..m {
            for r in 0..m {
                e.sigma.set(p, r, v[i].clone());
                i += 1;
            }
        }
        for j in 0..n {
            for k in j + 1..n {
                e.b.set(j, k, v[i].clone());
                e.b.set(k, j, -v[i].clone());
                i += 1;
            }
        }
        e
    }

    fn phi_sigma_range(&self) -> Vec<usize> {
        let (n, m) = (self.n, self.m);
        let s0 = n * n + n * m;
        (0..n * n).chain(s0..s0 + m * m).collect()
    }
}

fn unit_vec(len: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(len);
    v[i] = Scalar::one();
    v
}

/// The linear map from the unknowns to `([L_a, φ̂])_a ⊕ (σᵀP + Pσ)`.
pub fn holomorphicity_matrix(m: &AlgebroidModel) -> Matrix {
    let lay = Layout { n: m.n(), m: m.m() };
    let ls = m.dolbeault_ops();
    let p = m.alg.pairing();
    let cols: Vec<Vec<Scalar>> = (0..lay.len())
        .map(|u| {
            let e = lay.endo(&unit_vec(lay.len(), u));
            let hat = e.assemble(p);
            let mut col = Vec::new();
            for l in &ls {
                col.extend(l.commutator(&hat).to_rows().into_iter().flatten());
            }
            col.extend(e.sigma.transpose().mul(p).add(&p.mul(&e.sigma)).to_rows().into_iter().flatten());
            col
        })
        .collect();
    Matrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i].clone())
}

#[derive(Clone, Debug)]
pub struct DeltaP {
    /// Basis of invariant holomorphic `α ∈ H^0(Ω^{1,0}(ad P))`.
    pub domain: Vec<Vec<Vec<Scalar>>>,
    /// Columns: `2⟨α ∧ F⟩` in the `(2,1)` monomial basis.
    pub matrix: Matrix,
    pub rank: usize,
    pub kernel_dim: usize,
    pub h20: usize,
    pub s0_dim: usize,
    /// Dimension of `H^{2,1}_∂̄` at the invariant level.
    pub h21: usize,
}

#[derive(Clone, Debug)]
pub struct EndoSolution {
    pub basis: Vec<AnchoredEndo>,
    pub unknowns: usize,
    pub delta: DeltaP,
    /// Invariant sections only: these dimensions bound `H^0` from below.
    pub lower_bound_only: bool,
}

pub fn holomorphic_endo_solve(m: &AlgebroidModel) -> Result<EndoSolution, FutakiError> {
    let lay = Layout { n: m.n(), m: m.m() };
    let mat = holomorphicity_matrix(m);
    let kernel = linalg::nullspace(&mat)?;
    let basis = kernel.iter().map(|v| lay.endo(v)).collect();
    let delta = delta_p(m)?;
    Ok(EndoSolution { basis, unknowns: lay.len(), delta, lower_bound_only: true })
}

/// Explicit residuals of the four holomorphicity conditions, computed with
/// forms rather than with `L_a`.
#[derive(Clone, Debug)]
pub struct ExplicitConditions {
    pub phi: Vec<Matrix>,
    pub sigma: Vec<Matrix>,
    pub alpha: Vec<Form>,
    pub b: Form,
}

impl ExplicitConditions {
    pub fn all_zero(&self) -> bool {
        self.phi.iter().all(|x| x.is_zero())
            && self.sigma.iter().all(|x| x.is_zero())
            && self.alpha.iter().all(|x| x.is_zero())
            && self.b.is_zero()
    }
}

/// `φ ⌟ β`: `φ` acting as a derivation on the `(1,0)` slots.
pub fn phi_contract(phi: &Matrix, beta: &Form) -> Form {
    let n = phi.rows();
    let mut out = Form::zero(n);
    for (mask, c) in beta.terms() {
        let idx: Vec<usize> = crate::formalg::bits(mask).collect();
        for (pos, &i) in idx.iter().enumerate() {
            if i >= n {
                continue;
            }
            for j in 0..n {
                let s = phi.get(i, j);
                if s.is_zero() {
                    continue;
                }
                let mut t = Form::scalar(n, c * s);
                for (q, &k) in idx.iter().enumerate() {
                    let factor = if q == pos { j } else { k };
                    t = t.wedge(&Form::mono(n, 1 << factor, Scalar::one()));
                }
                out = out.add(&t);
            }
        }
    }
    out
}

/// `∂̄^θ` of an `ad P`-valued `(1,0)`-form given by components.
fn dbar_theta(m: &AlgebroidModel, alpha: &[Form]) -> Vec<Form> {
    let n = m.n();
    let mut out: Vec<Form> = alpha.iter().map(|a| m.model.delbar(a)).collect();
    // [θ^{0,1} ∧ α] with θ^{0,1} = Σ θ_{n+a} w̄_a
    for a in 0..n {
        let act = &m.chern.act[n + a];
        let wbar = Form::mono(n, 1 << (n + a), Scalar::one());
        for p in 0..m.m() {
            for q in 0..m.m() {
                let c = act.get(p, q);
                if !c.is_zero() && !alpha[q].is_zero() {
                    out[p] = out[p].add(&wbar.wedge(&alpha[q]).scale(c));
                }
            }
        }
    }
    out
}

pub fn explicit_conditions(m: &AlgebroidModel, e: &AnchoredEndo) -> ExplicitConditions {
    let n = m.n();
    let mm = m.m();
    // [X̄_a, X_j]^{1,0} as the matrix C_a
    let c: Vec<Matrix> =
        (0..n).map(|a| Matrix::from_fn(n, n, |k, j| m.model.bracket(n + a, j, k).clone())).collect();
    let phi = c.iter().map(|ca| ca.commutator(&e.phi)).collect();
    let sigma = (0..n).map(|a| m.chern.act[n + a].commutator(&e.sigma)).collect();
    let fc = m.chern.curvature.components();
    let alpha_f = e.alpha_forms();
    let mut alpha = dbar_theta(m, &alpha_f);
    for p in 0..mm {
        for q in 0..mm {
            let s = e.sigma.get(p, q);
            if !s.is_zero() {
                alpha[p] = alpha[p].add(&fc[q].scale(s));
            }
        }
        alpha[p] = alpha[p].sub(&phi_contract(&e.phi, &fc[p]));
    }
    let b = m
        .model
        .delbar(&e.b_form())
        .add(&phi_contract(&e.phi, &m.tau))
        .sub(&m.paired(&alpha_f, &fc).scale(&Scalar::from_int(2)));
    ExplicitConditions { phi, sigma, alpha, b }
}

fn coords_matrix(forms: &[Form], basis: &[u32]) -> Matrix {
    Matrix::from_fn(basis.len(), forms.len(), |i, j| forms[j].coeff(basis[i]))
}

/// `δ_P: α ↦ [2⟨α ∧ F⟩] ∈ H^{2,1}_∂̄` on invariant data, with the `S_0`
/// sequence dimensions.
pub fn delta_p(m: &AlgebroidModel) -> Result<DeltaP, FutakiError> {
    let (n, mm) = (m.n(), m.m());
    let b11 = masks_of(n, 1, 1);
    let b21 = masks_of(n, 2, 1);
    let b22 = masks_of(n, 2, 2);
    let b20 = masks_of(n, 2, 0);
    // holomorphic α: kernel of α ↦ ∂̄^θ α
    let unknowns = n * mm;
    let alpha_of = |v: &[Scalar]| -> Vec<Vec<Scalar>> { (0..n).map(|k| v[k * mm..(k + 1) * mm].to_vec()).collect() };
    let forms_of = |al: &[Vec<Scalar>]| -> Vec<Form> {
        let mut e = AnchoredEndo::zero(n, mm);
        e.alpha = al.to_vec();
        e.alpha_forms()
    };
    let cols: Vec<Vec<Scalar>> = (0..unknowns)
        .map(|u| {
            let d = dbar_theta(m, &forms_of(&alpha_of(&unit_vec(unknowns, u))));
            d.iter().flat_map(|f| b11.iter().map(|&k| f.coeff(k)).collect::<Vec<_>>()).collect()
        })
        .collect();
    let dmat = Matrix::from_fn(b11.len() * mm, unknowns, |i, j| cols[j][i].clone());
    let domain: Vec<Vec<Vec<Scalar>>> = linalg::nullspace(&dmat)?.iter().map(|v| alpha_of(v)).collect();
    let fc = m.chern.curvature.components();
    let images: Vec<Form> =
        domain.iter().map(|al| m.paired(&forms_of(al), &fc).scale(&Scalar::from_int(2))).collect();
    let matrix = coords_matrix(&images, &b21);
    let exact: Vec<Form> = b20.iter().map(|&k| m.model.delbar(&Form::mono(n, k, Scalar::one()))).collect();
    let emat = coords_matrix(&exact, &b21);
    let erank = linalg::rank(&emat)?;
    let both = if images.is_empty() { emat.clone() } else { matrix.hcat(&emat) };
    let rank = linalg::rank(&both)? - erank;
    let kernel_dim = domain.len() - rank;
    let h20 = b20.len() - erank;
    let closed21: Vec<Form> = b21.iter().map(|&k| m.model.delbar(&Form::mono(n, k, Scalar::one()))).collect();
    let h21 = b21.len() - linalg::rank(&coords_matrix(&closed21, &b22))? - erank;
    Ok(DeltaP { domain, matrix, rank, kernel_dim, h20, s0_dim: h20 + kernel_dim, h21 })
}

/// Dimension of the solutions with `φ = σ = 0`, read off the full system.
pub fn s0_dimension(m: &AlgebroidModel) -> Result<usize, FutakiError> {
    let lay = Layout { n: m.n(), m: m.m() };
    let mat = holomorphicity_matrix(m);
    let drop = lay.phi_sigma_range();
    let keep: Vec<usize> = (0..lay.len()).filter(|c| !drop.contains(c)).collect();
    let rows: Vec<usize> = (0..mat.rows()).collect();
    let sub = mat.submatrix(&rows, &keep);
    Ok(keep.len() - linalg::rank(&sub)?)
}

pub fn is_holomorphic(m: &AlgebroidModel, e: &AnchoredEndo) -> bool {
    let hat = e.assemble(m.alg.pairing());
    m.dolbeault_ops().iter().all(|l| l.commutator(&hat).is_zero())
        && e.sigma.transpose().mul(m.alg.pairing()).add(&m.alg.pairing().mul(&e.sigma)).is_zero()
}

/// `∫ tr(φ̂ F) ∧ ν` for the Chern curvature of `(Q, ∂̄_0, h)`.
pub fn futaki_direct_matrix(m: &AlgebroidModel, hat: &Matrix, nu: &Form, h: &Matrix) -> Result<Scalar, FutakiError> {
    let dnu = m.model.d(nu);
    if !dnu.is_zero() {
        return Err(FutakiError::NotClosed(dnu));
    }
    let f = m.fg_bundle_with(h)?;
    let t = Form::from_bilinear(m.n(), |a, b| hat.mul(&f.r[a][b]).trace());
    Ok(m.model.integrate(&t.wedge(nu)))
}

pub fn futaki_direct(m: &AlgebroidModel, e: &AnchoredEndo, nu: &Form, h: &Matrix) -> Result<Scalar, FutakiError> {
    futaki_direct_matrix(m, &e.assemble(m.alg.pairing()), nu, h)
}

/// The same pairing through `ψ`: `∫ tr(ψ φ̂ ψ^{-1} F_D) ∧ ν`.
pub fn futaki_via_d(m: &AlgebroidModel, e: &AnchoredEndo, nu: &Form) -> Result<Scalar, FutakiError> {
    let psi = m.psi();
    let tilde = psi.mul(&e.assemble(m.alg.pairing())).mul(&linalg::inverse(&psi)?);
    let fd = m.fd_direct();
    let t = Form::from_bilinear(m.n(), |a, b| tilde.mul(&fd.r[a][b]).trace());
    Ok(m.model.integrate(&t.wedge(nu)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FutakiTerms {
    pub phi_term: Scalar,
    pub b_term: Scalar,
    pub sigma_term: Scalar,
    pub alpha_term: Scalar,
    pub total: Scalar,
}

/// The four-term expression, with `∫ ω_0^n / n` as the volume factor.
pub fn futaki_explicit(m: &AlgebroidModel, e: &AnchoredEndo, g0: &Metric) -> Result<FutakiTerms, FutakiError> {
    let n = m.n();
    let nn = 2 * n;
    let g = &m.metric;
    let bal = m.model.d(&g0.omega().pow(n - 1));
    if !bal.is_zero() {
        return Err(FutakiError::NotBalanced(bal));
    }
    let half = Scalar::ratio(1, 2);
    let g0p = g0.ginv_pairs();
    let gp = g.ginv_pairs();
    let rb = m.fam.bismut.curvature(&m.model);
    let lam0 = geom::valued_lambda(g0, &m.chern.curvature);
    // tr_{g,g0} R_B as a 2-form plus ⟨Λ_{ω0} F, F⟩
    let tr_rb = |v: usize, w: usize| -> Scalar {
        let mut s = Scalar::zero();
        for (a, b, gi) in &g0p {
            s += &(&(gi * &j_eigen(n, *a)) * &rb.lowered(g, v, w, *a, *b));
        }
        s * half.clone()
    };
    let t1 = |v: usize, w: usize| tr_rb(v, w) + m.alg.pair(&lam0, m.f(v, w));
    // Φ(X_d) = -φ X_d on (1,0), φ^{*g} X̄_d on (0,1)
    let big_phi: Vec<Vec<Scalar>> = (0..nn)
        .map(|d| {
            if d < n {
                let mut v = zero_vec(nn);
                for k in 0..n {
                    v[k] = -e.phi.get(k, d).clone();
                }
                v
            } else {
                let cov: Vec<Scalar> = (0..nn)
                    .map(|c| if c < n { (0..n).map(|k| e.phi.get(k, c) * g.g(d, k)).sum() } else { Scalar::zero() })
                    .collect();
                g.raise(&cov)
            }
        })
        .collect();
    let mut phi_term = Scalar::zero();
    for (c, d, gi) in &gp {
        for (x, coef) in big_phi[*d].iter().enumerate() {
            if !coef.is_zero() {
                phi_term -= &(&(gi * coef) * &t1(*c, x));
            }
        }
    }
    // -⟨tr R_B^{0,2}, b⟩_g
    let bf = e.b_form();
    let mut b_term = Scalar::zero();
    for (a, c, g1) in &gp {
        for (bb, d, g2) in &gp {
            if *a < n || *bb < n {
                continue;
            }
            let bv = bf.eval(&[*c, *d]);
            if !bv.is_zero() {
                b_term -= &(&(&(g1 * g2) * &tr_rb(*a, *bb)) * &bv);
            }
        }
    }
    b_term = b_term * half.clone();
    // tr(σ [Λ F, ·]) + Σ ⟨σ F(e_j^0, e_k), F(J e_j^0, e_k)⟩
    let mut sigma_term = e.sigma.mul(&m.alg.ad(&lam0)).trace();
    for (a, b, g1) in &g0p {
        for (c, d, g2) in &gp {
            let sf = e.sigma.mul_vec(m.f(*a, *c));
            sigma_term += &(&(&(g1 * g2) * &j_eigen(n, *b)) * &m.alg.pair(&sf, m.f(*b, *d)));
        }
    }
    // 2 Σ ⟨α(e_k), Λ_{ω0} ∇^-_{e_k} F + F(J e_j^0, g^{-1} d^cω(e_j^0, e_k, ·))⟩
    let y = |v: usize| -> Vec<Scalar> {
        let mut out = zero_vec(m.m());
        for (a, b, gi) in &g0p {
            let cd = geom::valued_cov_deriv(&m.fam.minus, &m.chern.act, &m.chern.curvature, v, *a, *b);
            axpy(&mut out, &(&(gi * &j_eigen(n, *b)) * &half), &cd);
            let sharp = m.dc_sharp(*a, v);
            let fv = m.chern.curvature.eval_vectors(&unit_vec(nn, *b), &sharp);
            axpy(&mut out, &(gi * &j_eigen(n, *b)), &fv);
        }
        out
    };
    let mut alpha_term = Scalar::zero();
    for (c, d, gi) in &gp {
        if *c >= n {
            continue;
        }
        alpha_term += &(gi * &m.alg.pair(&e.alpha[*c], &y(*d)));
    }
    alpha_term = alpha_term * Scalar::from_int(2);
    let vol = m.model.integrate(&g0.omega().pow(n)) * Scalar::ratio(1, n as i64);
    let s = |x: Scalar| x * vol.clone();
    let (phi_term, b_term, sigma_term, alpha_term) = (s(phi_term), s(b_term), s(sigma_term), s(alpha_term));
    let total = &(&(&phi_term + &b_term) + &sigma_term) + &alpha_term;
    Ok(FutakiTerms { phi_term, b_term, sigma_term, alpha_term, total })
}

/// Explicit value divided by the direct one: the calibrated constant.
pub const EXPLICIT_OVER_DIRECT: i64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    Obstructed,
    Unobstructed,
    /// Some value is a nonzero expression whose sign the assumptions leave open.
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct ObstructionRow {
    pub index: usize,
    pub direct: Scalar,
    pub explicit: Option<Scalar>,
    pub forced: Option<Definite>,
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub rows: Vec<ObstructionRow>,
    pub verdict: Obstruction,
}

/// Evaluates `⟨F, [ω_0^{n-1}]⟩` on every basis endomorphism.
pub fn obstruction_report(
    m: &AlgebroidModel,
    g0: &Metric,
    basis: &[AnchoredEndo],
    assume: &Assumptions,
) -> Result<ObstructionReport, FutakiError> {
    let nu = g0.omega().pow(m.n() - 1);
    let gram = m.generalized_gram();
    let mut rows = Vec::new();
    let mut nonzero = false;
    let mut open = false;
    for (index, e) in basis.iter().enumerate() {
        let direct = futaki_direct(m, e, &nu, &gram)?;
        let explicit = futaki_explicit(m, e, g0).ok().map(|t| t.total);
        let forced = assume.forced_sign(&direct);
        let parts = [assume.forced_sign(&direct.re()), assume.forced_sign(&direct.im())];
        if direct.is_zero() {
        } else if parts.iter().any(|p| matches!(p, Some(Definite::Positive | Definite::Negative))) {
            nonzero = true;
        } else {
            open = true;
        }
        rows.push(ObstructionRow { index, direct, explicit, forced });
    }
    let verdict = if nonzero {
        Obstruction::Obstructed
    } else if open {
        Obstruction::Undetermined
    } else {
        Obstruction::Unobstructed
    };
    Ok(ObstructionReport { rows, verdict })
}
