//! Hull-Strominger and coupled Hermitian-Einstein checkers, the affine
//! Bianchi solver and positivity analysis.

use crate::assume::{Assumptions, Definite, Sign};
use crate::bundles::{self, AdAlgebra, BundleError, ChernData, PairedBundles};
use crate::formalg::{self, AlgebraModel, Form};
use crate::geom::{self, Metric};
use hs_exact::linalg::{self, Matrix, SolveOutcome};
use hs_exact::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("z is not central: [z, theta(X{0})] != 0")]
    NotCentral(usize),
    #[error("right-hand side {0}")]
    BadRhs(&'static str),
    #[error("linear algebra: {0}")]
    Linalg(String),
}

impl From<linalg::LinalgError> for SystemError {
    fn from(e: linalg::LinalgError) -> Self {
        SystemError::Linalg(e.to_string())
    }
}

/// `X1..Xn`, `~X1..~Xn`.
pub fn frame_name(n: usize, a: usize) -> String {
    if a < n { format!("X{}", a + 1) } else { format!("~X{}", a - n + 1) }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    Form(Form),
    /// Labelled entries; zero entries are dropped.
    Values(Vec<(String, Scalar)>),
}

impl Residual {
    pub fn values(items: impl IntoIterator<Item = (String, Scalar)>) -> Self {
        Residual::Values(items.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Form(f) => f.is_zero(),
            Residual::Values(v) => v.is_empty(),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Form(x) => write!(f, "{x}"),
            Residual::Values(v) if v.is_empty() => write!(f, "0"),
            Residual::Values(v) => {
                let parts: Vec<String> = v.iter().map(|(k, x)| format!("{k}: {x}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationResult {
    pub name: String,
    pub residual: Residual,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemVerdict {
    pub per_equation: Vec<EquationResult>,
    pub overall: bool,
    pub notes: Vec<String>,
}

impl SystemVerdict {
    pub fn new(eqs: Vec<(&str, Residual)>, notes: Vec<String>) -> Self {
        let per_equation: Vec<EquationResult> = eqs
            .into_iter()
            .map(|(name, residual)| EquationResult { name: name.to_string(), pass: residual.is_zero(), residual })
            .collect();
        let overall = per_equation.iter().all(|e| e.pass);
        SystemVerdict { per_equation, overall, notes }
    }

    pub fn get(&self, name: &str) -> Option<&EquationResult> {
        self.per_equation.iter().find(|e| e.name == name)
    }
}

fn ad_residual(alg: &AdAlgebra, v: &[Scalar], blocks: impl Fn(usize) -> bool) -> Residual {
    let mut out = Vec::new();
    for (k, b) in alg.blocks.iter().enumerate() {
        if !blocks(k) {
            continue;
        }
        for p in b.offset..b.offset + b.rank * b.rank {
            out.push((alg.basis_name(p), v[p].clone()));
        }
    }
    Residual::values(out)
}

/// `dd^cω + ⟨F ∧ F⟩`.
pub fn bianchi_residual(model: &AlgebraModel, g: &Metric, alg: &AdAlgebra, data: &ChernData) -> Form {
    model.d(&model.dc(g.omega())).add(&bundles::paired_wedge(alg, &data.curvature))
}

/// The four equations, with the conformal factor `‖Ω‖_ω` constant on
/// invariant data.
pub fn hull_strominger_check(model: &AlgebraModel, pair: &PairedBundles, g: &Metric) -> Result<SystemVerdict, SystemError> {
    let (alg, data) = pair.chern(model)?;
    let lam = geom::valued_lambda(g, &data.curvature);
    let n0 = pair.v0.summands.len();
    let r0 = ad_residual(&alg, &lam, |k| k < n0);
    let r1 = ad_residual(&alg, &lam, |k| k >= n0);
    let bal = geom::balanced_and_norm(model, g);
    let bianchi = bianchi_residual(model, g, &alg, &data);
    let mut notes = Vec::new();
    let cf = bundles::char_forms(model, pair)?;
    let ch2 = if cf.ch2_diff.is_zero() {
        "tr F0^2 - tr F1^2 = 0".to_string()
    } else {
        match bianchi_solve(model, &cf.ch2_diff, true) {
            Ok(_) => "tr F0^2 - tr F1^2 is dd^c-exact in the invariant complex".to_string(),
            Err(_) => "tr F0^2 - tr F1^2 is not dd^c-exact in the invariant complex".to_string(),
        }
    };
    notes.push(ch2);
    notes.push(format!("|Omega|^2 = {}", bal.omega_norm_squared));
    Ok(SystemVerdict::new(
        vec![
            ("F0^w^(n-1)", r0),
            ("F1^w^(n-1)", r1),
            ("d(|Omega| w^(n-1))", Residual::Form(bal.d_omega_pow)),
            ("bianchi", Residual::Form(bianchi)),
        ],
        notes,
    ))
}

/// `⟨z, F⟩` as a 2-form.
pub fn pair_with_curvature(alg: &AdAlgebra, z: &[Scalar], data: &ChernData) -> Form {
    let n = data.curvature.len() / 2;
    Form::from_bilinear(n, |a, b| alg.pair(z, data.curvature.at(a, b)))
}

pub fn check_central(alg: &AdAlgebra, data: &ChernData, z: &[Scalar]) -> Result<(), SystemError> {
    for (a, t) in data.theta.iter().enumerate() {
        if !alg.bracket(z, t).iter().all(|x| x.is_zero()) {
            return Err(SystemError::NotCentral(a));
        }
    }
    let mut rng = crate::sample::rng(17);
    let probe = crate::sample::vector(&mut rng, alg.dim(), 3);
    if !alg.bracket(z, &probe).iter().all(|x| x.is_zero()) {
        return Err(SystemError::NotCentral(usize::MAX));
    }
    Ok(())
}

/// `Λ_ω F - z`, `ρ_B + ⟨z, F⟩`, `dd^cω + ⟨F ∧ F⟩`.
pub fn coupled_he_check(
    model: &AlgebraModel,
    pair: &PairedBundles,
    g: &Metric,
    z: &[Scalar],
) -> Result<SystemVerdict, SystemError> {
    let (alg, data) = pair.chern(model)?;
    check_central(&alg, &data, z)?;
    let he = bundles::hermitian_einstein_check(g, &data.curvature, z);
    let fam = geom::connection_family(model, g);
    let rho = geom::bismut_ricci(model, &fam);
    let second = rho.add(&pair_with_curvature(&alg, z, &data));
    let bianchi = bianchi_residual(model, g, &alg, &data);
    Ok(SystemVerdict::new(
        vec![
            ("lambda F - z", ad_residual(&alg, &he.residual, |_| true)),
            ("rho_B + <z,F>", Residual::Form(second)),
            ("bianchi", Residual::Form(bianchi)),
        ],
        Vec::new(),
    ))
}

/// `Λ_ω F` when it is blockwise central.
pub fn natural_z(model: &AlgebraModel, pair: &PairedBundles, g: &Metric) -> Result<Option<Vec<Scalar>>, SystemError> {
    let (alg, data) = pair.chern(model)?;
    let lam = geom::valued_lambda(g, &data.curvature);
    Ok(alg.central_parts(&lam).map(|_| lam))
}

/// Solutions of `dd^c x = rhs` over invariant real (1,1)-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolutionSpace {
    pub n: usize,
    pub basis_names: Vec<String>,
    pub basis: Vec<Form>,
    /// Coordinates in `basis`.
    pub particular_coords: Vec<Scalar>,
    pub kernel_coords: Vec<Vec<Scalar>>,
    pub particular: Form,
    pub kernel: Vec<Form>,
    pub constraints: Vec<String>,
    pub real: bool,
}

impl AffineSolutionSpace {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn element(&self, c: &[Scalar]) -> Form {
        self.kernel.iter().zip(c).fold(self.particular.clone(), |acc, (k, ci)| acc.add(&k.scale(ci)))
    }

    pub fn coordinate(&self, name: &str) -> Option<&Scalar> {
        self.basis_names.iter().position(|b| b == name).map(|i| &self.particular_coords[i])
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("dd^c x = rhs is inconsistent: functional {functional:?} has value {value}")]
pub struct Inconsistent {
    pub functional: Vec<Scalar>,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BianchiError {
    #[error(transparent)]
    Inconsistent(#[from] Inconsistent),
    #[error("{0}")]
    Other(#[from] SystemError),
}

fn combine(n: usize, basis: &[Form], c: &[Scalar]) -> Form {
    basis.iter().zip(c).fold(Form::zero(n), |acc, (f, ci)| acc.add(&f.scale(ci)))
}

pub fn bianchi_solve(model: &AlgebraModel, rhs: &Form, reality_required: bool) -> Result<AffineSolutionSpace, BianchiError> {
    let n = model.n();
    if rhs.bidegrees().iter().any(|&b| b != (2, 2)) {
        return Err(SystemError::BadRhs("is not of type (2,2)").into());
    }
    if reality_required && !rhs.is_real() {
        return Err(SystemError::BadRhs("is not real").into());
    }
    if !model.d(rhs).is_zero() {
        return Err(SystemError::BadRhs("is not closed").into());
    }
    let m22 = model.masks(2, 2);
    let (basis_names, basis): (Vec<String>, Vec<Form>) = if reality_required {
        formalg::real_11_basis(n).into_iter().unzip()
    } else {
        model.masks(1, 1).iter().map(|&m| (Form::mask_name(n, m), Form::mono(n, m, Scalar::one()))).unzip()
    };
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|f| model.d(&model.dc(f)).coords(&m22)).collect();
    let b = rhs.coords(&m22);
    let (a, bb) = if reality_required {
        formalg::realify(&cols, &b)
    } else {
        (Matrix::from_fn(m22.len(), cols.len(), |i, j| cols[j][i].clone()), b)
    };
    let sol = match linalg::solve(&a, &bb).map_err(SystemError::from)? {
        SolveOutcome::Solved(s) => s,
        SolveOutcome::Inconsistent { functional, value } => return Err(Inconsistent { functional, value }.into()),
    };
    let mut constraints = Vec::new();
    let particular_coords = match sol.particular() {
        Some(p) => p,
        None => {
            constraints.push(format!("particular solution scaled by 1/({})", sol.denom));
            sol.numer.clone()
        }
    };
    let kernel_coords = sol.kernel.clone();
    let particular = combine(n, &basis, &particular_coords);
    let kernel = kernel_coords.iter().map(|c| combine(n, &basis, c)).collect();
    Ok(AffineSolutionSpace {
        n,
        basis_names,
        basis,
        particular_coords,
        kernel_coords,
        particular,
        kernel,
        constraints,
        real: reality_required,
    })
}

/// `h_jk = -2i x(X_j, X̄_k)`, so that `x = (i/2) Σ h_jk w_j ∧ ~w_k`.
pub fn hermitian_of(x: &Form) -> Matrix {
    let n = x.dim();
    let m2i = Scalar::gauss((0, 1), (-2, 1));
    Matrix::from_fn(n, n, |j, k| x.eval(&[j, n + k]) * &m2i)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Positivity {
    PositiveExists,
    NeverPositive,
    Unknown,
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Positivity::PositiveExists => "PositiveExists",
            Positivity::NeverPositive => "NeverPositive",
            Positivity::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Diagonal entry `index` of the Hermitian matrix is the same for every
    /// element of the space and is identically zero or forced nonpositive.
    Diagonal { index: usize, value: Scalar, identically_zero: bool },
    /// Kernel coefficients, symbol values, and the exact leading minors.
    Sample { coefficients: Vec<Scalar>, symbols: BTreeMap<String, Scalar>, minors: Vec<Scalar> },
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub verdict: Positivity,
    pub certificate: Certificate,
}

/// Symbol values respecting the assumptions, overridden by `samples`.
pub fn sample_symbols(symbols: impl IntoIterator<Item = String>, assume: &Assumptions, samples: &BTreeMap<String, Scalar>) -> BTreeMap<String, Scalar> {
    symbols
        .into_iter()
        .map(|s| {
            let v = samples.get(&s).cloned().unwrap_or_else(|| match assume.get(&s) {
                Some(Sign::Negative) => Scalar::from_int(-1),
                _ => Scalar::one(),
            });
            (s, v)
        })
        .collect()
}

pub fn leading_minors(h: &Matrix) -> Result<Vec<Scalar>, linalg::LinalgError> {
    (1..=h.rows())
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            linalg::determinant(&h.submatrix(&idx, &idx))
        })
        .collect()
}

fn positive_constant(x: &Scalar) -> bool {
    match x.as_constant() {
        Some(c) if c.is_real() => c.to_f64().0 > 0.0,
        _ => false,
    }
}

pub fn positivity_analyze(
    space: &AffineSolutionSpace,
    assume: &Assumptions,
    samples: &BTreeMap<String, Scalar>,
) -> PositivityReport {
    let n = space.n;
    let hp = hermitian_of(&space.particular);
    let hk: Vec<Matrix> = space.kernel.iter().map(hermitian_of).collect();
    for j in 0..n {
        if hk.iter().any(|h| !h.get(j, j).is_zero()) {
            continue;
        }
        let v = hp.get(j, j).clone();
        let forced = assume.forced_sign(&v);
        if matches!(forced, Some(Definite::Zero) | Some(Definite::Negative)) {
            return PositivityReport {
                verdict: Positivity::NeverPositive,
                certificate: Certificate::Diagonal { index: j, identically_zero: v.is_zero(), value: v },
            };
        }
    }
    let mut syms = space.particular.symbols();
    for k in &space.kernel {
        syms.extend(k.symbols());
    }
    let vals = sample_symbols(syms, assume, samples);
    let hp_s = hp.map(|x| x.subs(&vals));
    let hk_s: Vec<Matrix> = hk.iter().map(|h| h.map(|x| x.subs(&vals))).collect();
    let try_point = |c: &[Scalar]| -> Option<Vec<Scalar>> {
        let h = hk_s.iter().zip(c).fold(hp_s.clone(), |acc, (k, ci)| acc.add(&k.scale(ci)));
        let minors = leading_minors(&h).ok()?;
        minors.iter().all(positive_constant).then_some(minors)
    };
    let mut candidates: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); hk_s.len()]];
    // Aim the kernel at λ ω_0 - particular.
    if !hk_s.is_empty() {
        let target0 = Metric::standard(n);
        for lam in [1i64, 10, 100, 1000] {
            let rows = n * n;
            let cols: Vec<Vec<Scalar>> = hk_s.iter().map(|h| (0..rows).map(|i| h.get(i / n, i % n).clone()).collect()).collect();
            let rhs: Vec<Scalar> = (0..rows)
                .map(|i| target0.hermitian().get(i / n, i % n) * &Scalar::from_int(lam) - hp_s.get(i / n, i % n))
                .collect();
            let (a, b) = formalg::realify(&cols, &rhs);
            if let Ok(SolveOutcome::Solved(s)) = linalg::solve(&a, &b) {
                if let Some(p) = s.particular() {
                    candidates.push(p);
                }
            }
        }
        let mut rng = crate::sample::rng(5);
        for _ in 0..64 {
            candidates.push((0..hk_s.len()).map(|_| crate::sample::integer(&mut rng, 3)).collect());
        }
    }
    for c in candidates {
        if let Some(minors) = try_point(&c) {
            return PositivityReport {
                verdict: Positivity::PositiveExists,
                certificate: Certificate::Sample { coefficients: c, symbols: vals, minors },
            };
        }
    }
    PositivityReport { verdict: Positivity::Unknown, certificate: Certificate::None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_kernel_is_everything() {
        let model = AlgebraModel::new(vec![Form::zero(3); 3]).unwrap();
        let s = bianchi_solve(&model, &Form::zero(3), true).unwrap();
        assert_eq!(s.kernel_dim(), 9);
        let p = positivity_analyze(&s, &Assumptions::standard(), &BTreeMap::new());
        assert_eq!(p.verdict, Positivity::PositiveExists);
    }

    #[test]
    fn hermitian_round_trip() {
        let g = Metric::standard(3);
        assert_eq!(hermitian_of(g.omega()), Matrix::identity(3));
    }
}
