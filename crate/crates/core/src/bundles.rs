//! Invariant holomorphic bundles, their Chern connections, the adjoint
//! algebra with its indefinite pairing, and characteristic forms.
//!
//! A bundle is a direct sum of summands. Each summand is either given by
//! constant Dolbeault matrices (`∂̄_E = ∂̄ + Σ ~w_a ⊗ A_a`) and a constant
//! Hermitian matrix, or, for line bundles, directly by its curvature form.
//! The adjoint algebra is the sum of `gl(r)` over the summands, so gauge
//! data never mixes summands.

use crate::formalg::{AlgebraModel, Form};
use crate::geom::{self, axpy, zero_vec, Connection, Metric, Valued2, T3};
use hs_exact::linalg::{self, Matrix};
use hs_exact::Scalar;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BundleError {
    #[error("summand {summand}: expected {expected} Dolbeault matrices of size {rank}, got {got}")]
    Shape { summand: String, rank: usize, expected: usize, got: usize },
    #[error("summand {summand}: Hermitian matrix is not Hermitian and invertible")]
    BadHermitian { summand: String },
    #[error("summand {summand}: dbar^2 != 0, component (~{a},~{b}) of F is {residual}")]
    NotIntegrable { summand: String, a: usize, b: usize, residual: String },
    #[error("summand {summand}: curvature form {reason}")]
    BadCurvature { summand: String, reason: &'static str },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SummandData {
    Dolbeault { a: Vec<Matrix>, h: Matrix },
    /// A line bundle given by its Chern curvature. Integrality of periods is
    /// user-asserted and recorded, never checked.
    Curvature { f: Form, integral_periods_asserted: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summand {
    pub name: String,
    pub rank: usize,
    pub data: SummandData,
}

impl Summand {
    pub fn dolbeault(name: &str, a: Vec<Matrix>, h: Matrix) -> Self {
        Summand { name: name.to_string(), rank: h.rows(), data: SummandData::Dolbeault { a, h } }
    }

    pub fn line(name: &str, f: Form) -> Self {
        Summand {
            name: name.to_string(),
            rank: 1,
            data: SummandData::Curvature { f, integral_periods_asserted: true },
        }
    }

    pub fn flat_line(name: &str, n: usize) -> Self {
        Self::dolbeault(name, vec![Matrix::zeros(1, 1); n], Matrix::identity(1))
    }

    pub fn hermitian(&self) -> Matrix {
        match &self.data {
            SummandData::Dolbeault { h, .. } => h.clone(),
            SummandData::Curvature { .. } => Matrix::identity(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantBundle {
    pub name: String,
    pub summands: Vec<Summand>,
}

impl InvariantBundle {
    pub fn new(name: &str, summands: Vec<Summand>) -> Self {
        InvariantBundle { name: name.to_string(), summands }
    }

    pub fn empty(name: &str) -> Self {
        Self::new(name, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(|s| s.rank).sum()
    }
}

/// One `gl(r)` block of the adjoint algebra. `sign` is -1 on `V_0`, +1 on `V_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub name: String,
    pub offset: usize,
    pub rank: usize,
    pub h: Matrix,
    pub hinv: Matrix,
    pub sign: i64,
}

/// `ad P = ⊕ gl(r_s)`, basis `E_ij` at `offset + i·r + j`, with pairing
/// `α · sign · tr(xy)` on each block.
#[derive(Clone, Debug, PartialEq)]
pub struct AdAlgebra {
    pub blocks: Vec<Block>,
    pub alpha: Scalar,
    dim: usize,
    pairing: Matrix,
}

impl AdAlgebra {
    pub fn new(parts: &[(&Summand, i64)], alpha: Scalar) -> Result<Self, BundleError> {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (s, sign) in parts {
            let h = s.hermitian();
            let bad = || BundleError::BadHermitian { summand: s.name.clone() };
            if !h.is_hermitian() {
                return Err(bad());
            }
            let hinv = linalg::inverse(&h).map_err(|_| bad())?;
            blocks.push(Block { name: s.name.clone(), offset, rank: s.rank, h, hinv, sign: *sign });
            offset += s.rank * s.rank;
        }
        let mut pairing = Matrix::zeros(offset, offset);
        for b in &blocks {
            let c = &alpha * &Scalar::from_int(b.sign);
            for i in 0..b.rank {
                for j in 0..b.rank {
                    pairing.set(b.offset + i * b.rank + j, b.offset + j * b.rank + i, c.clone());
                }
            }
        }
        Ok(AdAlgebra { blocks, alpha, dim: offset, pairing })
    }

    /// The trace form on `End E`.
    pub fn for_bundle(e: &InvariantBundle) -> Result<Self, BundleError> {
        let parts: Vec<_> = e.summands.iter().map(|s| (s, 1)).collect();
        Self::new(&parts, Scalar::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_name(&self, p: usize) -> String {
        let b = self.blocks.iter().rev().find(|b| b.offset <= p).expect("index in range");
        let k = p - b.offset;
        format!("{}[{},{}]", b.name, k / b.rank, k % b.rank)
    }

    pub fn unit(&self, p: usize) -> Vec<Scalar> {
        let mut v = zero_vec(self.dim);
        v[p] = Scalar::one();
        v
    }

    pub fn block_of(&self, x: &[Scalar], k: usize) -> Matrix {
        let b = &self.blocks[k];
        Matrix::from_fn(b.rank, b.rank, |i, j| x[b.offset + i * b.rank + j].clone())
    }

    pub fn write_block(&self, x: &mut [Scalar], k: usize, m: &Matrix) {
        let b = &self.blocks[k];
        for i in 0..b.rank {
            for j in 0..b.rank {
                x[b.offset + i * b.rank + j] = m.get(i, j).clone();
            }
        }
    }

    pub fn from_blocks(&self, ms: &[Matrix]) -> Vec<Scalar> {
        let mut x = zero_vec(self.dim);
        for (k, m) in ms.iter().enumerate() {
            self.write_block(&mut x, k, m);
        }
        x
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim);
        for k in 0..self.blocks.len() {
            let c = self.block_of(x, k).commutator(&self.block_of(y, k));
            self.write_block(&mut out, k, &c);
        }
        out
    }

    /// Matrix of `ad(x) = [x, ·]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for b in &self.blocks {
            let r = b.rank;
            // [x, E_ij] = Σ_k x_ki E_kj - Σ_l x_jl E_il
            for i in 0..r {
                for j in 0..r {
                    let col = b.offset + i * r + j;
                    for k in 0..r {
                        let xki = &x[b.offset + k * r + i];
                        if !xki.is_zero() {
                            *m.get_mut(b.offset + k * r + j, col) += xki;
                        }
                        let xjl = &x[b.offset + j * r + k];
                        if !xjl.is_zero() {
                            *m.get_mut(b.offset + i * r + k, col) -= xjl;
                        }
                    }
                }
            }
        }
        m
    }

    pub fn pairing(&self) -> &Matrix {
        &self.pairing
    }

    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let py = self.pairing.mul_vec(y);
        x.iter().zip(&py).map(|(a, b)| a * b).sum()
    }

    /// The real structure `x ↦ -h^{-1} x† h`, fixing the `h`-skew elements.
    pub fn conj(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim);
        for (k, b) in self.blocks.iter().enumerate() {
            let m = b.hinv.mul(&self.block_of(x, k).conj_transpose()).mul(&b.h);
            self.write_block(&mut out, k, &m.scale(&Scalar::from_int(-1)));
        }
        out
    }

    /// Sum of the identities of every block, scaled by `z`.
    pub fn central(&self, z: &Scalar) -> Vec<Scalar> {
        let mut x = zero_vec(self.dim);
        for b in &self.blocks {
            for i in 0..b.rank {
                x[b.offset + i * b.rank + i] = z.clone();
            }
        }
        x
    }

    /// Blockwise `z_k · Id` if `x` has that shape.
    pub fn central_parts(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut out = Vec::new();
        for (k, b) in self.blocks.iter().enumerate() {
            let m = self.block_of(x, k);
            let z = m.get(0, 0).clone();
            if m.sub(&Matrix::identity(b.rank).scale(&z)).is_zero() {
                out.push(z);
            } else {
                return None;
            }
        }
        Some(out)
    }

    /// Total trace over all blocks, without the pairing signs.
    pub fn trace(&self, x: &[Scalar]) -> Scalar {
        (0..self.blocks.len()).map(|k| self.block_of(x, k).trace()).sum()
    }

    /// Hermitian form `M[q][p] = -⟨E_p, conj(E_q)⟩`, so that `t† M s`
    /// equals `-⟨s, conj(t)⟩` for the generalized metric.
    pub fn hermitian_form(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for q in 0..self.dim {
            let cq = self.conj(&self.unit(q));
            let pc = self.pairing.mul_vec(&cq);
            for p in 0..self.dim {
                m.set(q, p, -pc[p].clone());
            }
        }
        m
    }
}

/// Chern connection data on `ad P`, in the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernData {
    /// `θ(X_a)` as an element of `ad P`.
    pub theta: Vec<Vec<Scalar>>,
    /// `ad(θ(X_a))`.
    pub act: Vec<Matrix>,
    pub curvature: Valued2,
}

impl ChernData {
    pub fn is_flat(&self) -> bool {
        self.curvature.is_zero()
    }
}

/// Builds the Chern connection of each summand, aligned with the blocks of `alg`.
pub fn chern(model: &AlgebraModel, summands: &[&Summand], alg: &AdAlgebra) -> Result<ChernData, BundleError> {
    let n = model.n();
    let nn = 2 * n;
    let mut theta = vec![zero_vec(alg.dim()); nn];
    let mut curv = Valued2::zero(nn, alg.dim());
    for (k, s) in summands.iter().enumerate() {
        let b = &alg.blocks[k];
        match &s.data {
            SummandData::Dolbeault { a, h } => {
                if a.len() != n || a.iter().any(|m| m.rows() != s.rank || m.cols() != s.rank) {
                    return Err(BundleError::Shape {
                        summand: s.name.clone(),
                        rank: s.rank,
                        expected: n,
                        got: a.len(),
                    });
                }
                let mut th = vec![Matrix::zeros(s.rank, s.rank); nn];
                for i in 0..n {
                    th[n + i] = a[i].clone();
                    th[i] = b.hinv.mul(&a[i].conj_transpose()).mul(h).scale(&Scalar::from_int(-1));
                }
                for x in 0..nn {
                    alg.write_block(&mut theta[x], k, &th[x]);
                }
                for x in 0..nn {
                    for y in x + 1..nn {
                        let mut f = th[x].commutator(&th[y]);
                        for (e, c) in model.bracket_vec(x, y).iter().enumerate() {
                            if !c.is_zero() {
                                f = f.sub(&th[e].scale(c));
                            }
                        }
                        if x >= n && !f.is_zero() {
                            return Err(BundleError::NotIntegrable {
                                summand: s.name.clone(),
                                a: x - n + 1,
                                b: y - n + 1,
                                residual: format!("{:?}", f.to_rows()),
                            });
                        }
                        let mut vx = curv.comp[x][y].clone();
                        alg.write_block(&mut vx, k, &f);
                        curv.comp[x][y] = vx;
                        let mut vy = curv.comp[y][x].clone();
                        alg.write_block(&mut vy, k, &f.scale(&Scalar::from_int(-1)));
                        curv.comp[y][x] = vy;
                    }
                }
            }
            SummandData::Curvature { f, .. } => {
                let bad = |reason| BundleError::BadCurvature { summand: s.name.clone(), reason };
                if f.dim() != n || f.degrees().iter().any(|&d| d != 2) {
                    return Err(bad("is not a 2-form"));
                }
                if f.bidegrees().iter().any(|&bd| bd != (1, 1)) {
                    return Err(bad("is not of type (1,1)"));
                }
                if !f.conj().add(f).is_zero() {
                    return Err(bad("is not imaginary"));
                }
                if !model.d(f).is_zero() {
                    return Err(bad("is not closed"));
                }
                for x in 0..nn {
                    for y in 0..nn {
                        curv.comp[x][y][b.offset] = f.eval(&[x, y]);
                    }
                }
            }
        }
    }
    let act = theta.iter().map(|t| alg.ad(t)).collect();
    Ok(ChernData { theta, act, curvature: curv })
}

/// Both bundles of a paired system, with pairing `-α tr_{V0} + α tr_{V1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedBundles {
    pub v0: InvariantBundle,
    pub v1: InvariantBundle,
    pub alpha: Scalar,
}

impl PairedBundles {
    pub fn new(v0: InvariantBundle, v1: InvariantBundle, alpha: Scalar) -> Self {
        PairedBundles { v0, v1, alpha }
    }

    pub fn summands(&self) -> Vec<&Summand> {
        self.v0.summands.iter().chain(&self.v1.summands).collect()
    }

    pub fn ad_algebra(&self) -> Result<AdAlgebra, BundleError> {
        let parts: Vec<_> = self
            .v0
            .summands
            .iter()
            .map(|s| (s, -1))
            .chain(self.v1.summands.iter().map(|s| (s, 1)))
            .collect();
        AdAlgebra::new(&parts, self.alpha.clone())
    }

    pub fn chern(&self, model: &AlgebraModel) -> Result<(AdAlgebra, ChernData), BundleError> {
        let alg = self.ad_algebra()?;
        let data = chern(model, &self.summands(), &alg)?;
        Ok((alg, data))
    }
}

/// `⟨F ∧ F⟩ = Σ P_pq F^p ∧ F^q`.
pub fn paired_wedge(alg: &AdAlgebra, f: &Valued2) -> Form {
    let comps = f.components();
    let n = f.len() / 2;
    let mut out = Form::zero(n);
    for p in 0..alg.dim() {
        if comps[p].is_zero() {
            continue;
        }
        for q in 0..alg.dim() {
            let c = alg.pairing().get(p, q);
            if !c.is_zero() && !comps[q].is_zero() {
                out = out.add(&comps[p].wedge(&comps[q]).scale(c));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct BundleCurvature {
    pub alg: AdAlgebra,
    pub data: ChernData,
}

pub fn chern_curvature(model: &AlgebraModel, e: &InvariantBundle) -> Result<BundleCurvature, BundleError> {
    let alg = AdAlgebra::for_bundle(e)?;
    let data = chern(model, &e.summands.iter().collect::<Vec<_>>(), &alg)?;
    Ok(BundleCurvature { alg, data })
}

impl BundleCurvature {
    /// `F(X_a, X_b)` of summand `k` as a matrix.
    pub fn block(&self, k: usize, a: usize, b: usize) -> Matrix {
        self.alg.block_of(self.data.curvature.at(a, b), k)
    }

    /// `tr(F ∧ F)`.
    pub fn tr_ff(&self) -> Form {
        paired_wedge(&self.alg, &self.data.curvature)
    }

    pub fn tr_f(&self) -> Form {
        let n = self.data.curvature.len() / 2;
        Form::from_bilinear(n, |a, b| self.alg.trace(self.data.curvature.at(a, b)))
    }

    /// `h F(X_a, X_b) + F(X̄_a, X̄_b)† h` on every block; zero when `F` is
    /// skew-Hermitian.
    pub fn skew_hermitian(&self, model: &AlgebraModel) -> bool {
        let nn = model.frame_len();
        for (k, b) in self.alg.blocks.iter().enumerate() {
            for x in 0..nn {
                for y in 0..nn {
                    let f = self.block(k, x, y);
                    let fc = self.block(k, model.conj_index(x), model.conj_index(y));
                    if !b.h.mul(&f).add(&fc.conj_transpose().mul(&b.h)).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_integrable(&self, model: &AlgebraModel) -> bool {
        let n = model.n();
        (n..2 * n).all(|x| (n..2 * n).all(|y| self.data.curvature.at(x, y).iter().all(|c| c.is_zero())))
    }

    /// `deg(E) = ∫ tr F ∧ rep` for a closed `(n-1, n-1)` representative.
    pub fn degree(&self, model: &AlgebraModel, rep: &Form) -> Scalar {
        model.integrate(&self.tr_f().wedge(rep))
    }
}

#[derive(Clone, Debug)]
pub struct HeReport {
    pub holds: bool,
    pub lambda_f: Vec<Scalar>,
    pub residual: Vec<Scalar>,
}

/// `Λ_ω F - z`, with `z` a central element of `ad P`.
pub fn hermitian_einstein_check(g: &Metric, f: &Valued2, z: &[Scalar]) -> HeReport {
    let lambda_f = geom::valued_lambda(g, f);
    let mut residual = lambda_f.clone();
    axpy(&mut residual, &Scalar::from_int(-1), z);
    HeReport { holds: residual.iter().all(|x| x.is_zero()), lambda_f, residual }
}

#[derive(Clone, Debug)]
pub struct YmReport {
    pub precondition: bool,
    pub holds: bool,
    pub residual: Vec<Vec<Scalar>>,
}

/// `d^{h*} F + i_{θ_ω♯} F - hodge(F, d^cω)`, which vanishes whenever `Λ_ω F`
/// is central.
pub fn yang_mills_residual(
    model: &AlgebraModel,
    g: &Metric,
    nabla: &Connection,
    alg: &AdAlgebra,
    data: &ChernData,
) -> Vec<Vec<Scalar>> {
    let f = &data.curvature;
    let mut res = geom::valued_codiff(g, nabla, &data.act, f);
    let lee = geom::lee_form(model, g);
    let lee_vals: Vec<Scalar> = (0..model.frame_len()).map(|v| lee.eval(&[v])).collect();
    let sharp = g.raise(&lee_vals);
    let ilee = geom::valued_interior(f, &sharp);
    let dcw = T3::of_form(model.frame_len(), &model.dc(g.omega()));
    let hodge = geom::valued_hodge(g, f, &dcw);
    for v in 0..res.len() {
        axpy(&mut res[v], &Scalar::one(), &ilee[v]);
        axpy(&mut res[v], &Scalar::from_int(-1), &hodge[v]);
    }
    debug_assert!(res.iter().all(|r| r.len() == alg.dim()));
    res
}

pub fn yang_mills_identity_check(
    model: &AlgebraModel,
    g: &Metric,
    nabla: &Connection,
    alg: &AdAlgebra,
    data: &ChernData,
) -> YmReport {
    let lam = geom::valued_lambda(g, &data.curvature);
    let precondition = alg.central_parts(&lam).is_some();
    let residual = yang_mills_residual(model, g, nabla, alg, data);
    let holds = residual.iter().flatten().all(|x| x.is_zero());
    YmReport { precondition, holds, residual }
}

#[derive(Clone, Debug)]
pub struct CharForms {
    pub paired_ff: Form,
    pub tr_ff0: Form,
    pub tr_ff1: Form,
    pub ch2_diff: Form,
    pub all_closed: bool,
}

pub fn char_forms(model: &AlgebraModel, pair: &PairedBundles) -> Result<CharForms, BundleError> {
    let (alg, data) = pair.chern(model)?;
    let paired_ff = paired_wedge(&alg, &data.curvature);
    let tr_ff0 = chern_curvature(model, &pair.v0)?.tr_ff();
    let tr_ff1 = chern_curvature(model, &pair.v1)?.tr_ff();
    let ch2_diff = tr_ff0.sub(&tr_ff1);
    let all_closed = [&paired_ff, &tr_ff0, &tr_ff1].iter().all(|f| model.d(f).is_zero());
    Ok(CharForms { paired_ff, tr_ff0, tr_ff1, ch2_diff, all_closed })
}
