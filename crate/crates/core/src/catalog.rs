//! Built-in models.

use crate::assume::{Assumptions, Sign};
use crate::bundles::{InvariantBundle, PairedBundles, Summand};
use crate::formalg::{AlgebraModel, Form};
use crate::geom::Metric;
use hs_exact::linalg::Matrix;
use hs_exact::Scalar;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub summary: String,
    pub model: AlgebraModel,
    /// Hermitian form of the system; it need not be positive.
    pub omega: Metric,
    /// Balanced reference metric.
    pub omega0: Metric,
    pub pair: PairedBundles,
    pub assumptions: Assumptions,
    /// Values used when a numeric specialization is needed.
    pub sample_values: BTreeMap<String, Scalar>,
}

pub const NAMES: [&str; 6] = ["torus3", "iwasawa", "h19minus", "sl2c-example", "torus3-paired", "torus3-nilpotent"];

pub fn lookup(name: &str, charges: usize) -> Option<CatalogEntry> {
    Some(match name {
        "torus3" => torus3(),
        "iwasawa" => iwasawa(),
        "h19minus" => h19minus(charges),
        "sl2c-example" => sl2c_example(),
        "torus3-paired" => torus3_paired(),
        "torus3-nilpotent" => torus3_nilpotent(),
        _ => return None,
    })
}

pub fn all(charges: usize) -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| lookup(n, charges).expect("known name")).collect()
}

fn int(k: i64) -> Scalar {
    Scalar::from_int(k)
}

fn half_i() -> Scalar {
    Scalar::gauss((0, 1), (1, 2))
}

fn f(idx: &[usize], c: Scalar) -> Form {
    Form::from_indices(3, idx, c)
}

fn alpha() -> Scalar {
    Scalar::sym("a")
}

fn base_assumptions() -> Assumptions {
    let mut a = Assumptions::standard();
    a.set("a", Sign::Negative);
    a
}

fn base_samples() -> BTreeMap<String, Scalar> {
    let mut m = BTreeMap::new();
    m.insert("a".to_string(), int(-1));
    m.insert("pi".to_string(), int(3));
    m
}

fn entry(name: &str, summary: &str, model: AlgebraModel, omega: Metric, pair: PairedBundles) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        summary: summary.to_string(),
        model,
        omega,
        omega0: Metric::standard(3),
        pair,
        assumptions: base_assumptions(),
        sample_values: base_samples(),
    }
}

fn no_bundles() -> PairedBundles {
    PairedBundles::new(InvariantBundle::empty("V0"), InvariantBundle::empty("V1"), alpha())
}

pub fn torus3() -> CatalogEntry {
    let model = AlgebraModel::new(vec![Form::zero(3); 3]).expect("abelian");
    entry("torus3", "flat complex 3-torus, no bundles", model, Metric::standard(3), no_bundles())
}

pub fn iwasawa() -> CatalogEntry {
    let model = AlgebraModel::new(vec![Form::zero(3), Form::zero(3), f(&[0, 1], int(1))]).expect("nilpotent");
    entry("iwasawa", "Iwasawa manifold dw3 = w1^w2, no bundles", model, Metric::standard(3), no_bundles())
}

pub fn h19_model() -> AlgebraModel {
    AlgebraModel::new(vec![
        Form::zero(3),
        f(&[0, 2], int(1)).add(&f(&[0, 5], int(1))),
        f(&[0, 4], Scalar::i()).sub(&f(&[1, 3], Scalar::i())),
    ])
    .expect("h19 structure")
}

/// `π (m w1^~w1 + n i (w1^~w2 - w2^~w1))`.
pub fn h19_line_curvature(m: Scalar, n: Scalar) -> Form {
    let pi = Scalar::sym("pi");
    f(&[0, 3], &pi * &m).add(&f(&[0, 4], &(&pi * &n) * &Scalar::i())).sub(&f(&[1, 3], &(&pi * &n) * &Scalar::i()))
}

pub fn charge_sum(charges: usize) -> Scalar {
    (1..=charges).map(|j| Scalar::sym(&format!("n{j}")).pow(2)).sum()
}

/// `c (N i w3^~w3 + i w1^~w1 + (w2^~w3 - w3^~w2))` with `c = -a pi^2/2`,
/// `N = Σ n_j^2`: the particular Bianchi solution plus two kernel directions
/// that make it nondegenerate.
pub fn h19_hermitian(charges: usize) -> Matrix {
    let c = Scalar::ratio(-1, 2) * alpha() * Scalar::sym("pi").pow(2);
    let two = int(2);
    let i2 = Scalar::gauss((0, 1), (2, 1));
    let rows = vec![
        vec![two.clone(), Scalar::zero(), Scalar::zero()],
        vec![Scalar::zero(), Scalar::zero(), -i2.clone()],
        vec![Scalar::zero(), i2, &two * &charge_sum(charges)],
    ];
    Matrix::from_rows(rows).scale(&c)
}

pub fn h19minus(charges: usize) -> CatalogEntry {
    let model = h19_model();
    let n = model.n();
    let v0 = InvariantBundle::new("V0", (1..=3).map(|j| Summand::flat_line(&format!("L0_{j}"), n)).collect());
    let v1 = InvariantBundle::new(
        "V1",
        (1..=charges)
            .map(|j| Summand::line(&format!("L{j}"), h19_line_curvature(Scalar::sym("m"), Scalar::sym(&format!("n{j}")))))
            .collect(),
    );
    let omega = Metric::from_hermitian(h19_hermitian(charges)).expect("nondegenerate");
    let mut e = entry(
        "h19minus",
        "nilmanifold h19-, flat V0 = 3 lines, V1 = sum of charged lines",
        model,
        omega,
        PairedBundles::new(v0, v1, alpha()),
    );
    e.sample_values.insert("m".to_string(), int(0));
    for j in 1..=charges {
        e.assumptions.set(&format!("n{j}"), Sign::NonZero);
        e.sample_values.insert(format!("n{j}"), int(j as i64));
    }
    e
}

pub fn sl2c_model() -> AlgebraModel {
    AlgebraModel::new(vec![f(&[1, 2], int(1)), f(&[0, 2], int(-1)), f(&[0, 1], int(1))]).expect("sl2c structure")
}

/// The standard representation `X_1, X_2, X_3` of the frame. `X_3` is
/// diagonal: an off-diagonal entry would break `[X_1, X_2] = -X_3`.
pub fn sl2c_generators() -> Vec<Matrix> {
    let h = Scalar::ratio(1, 2);
    let ih = half_i();
    let z = Scalar::zero;
    vec![
        Matrix::from_rows(vec![vec![z(), ih.clone()], vec![ih.clone(), z()]]),
        Matrix::from_rows(vec![vec![z(), h.clone()], vec![-h, z()]]),
        Matrix::from_rows(vec![vec![ih.clone(), z()], vec![z(), -ih]]),
    ]
}

/// `ad X` on `sl(2)` in the basis `E12, E21, H`.
pub fn sl2_adjoint(x: &Matrix) -> Matrix {
    let e = |i: usize, j: usize| {
        let mut m = Matrix::zeros(2, 2);
        m.set(i, j, int(1));
        m
    };
    let hm = Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(-1)]]);
    let basis = [e(0, 1), e(1, 0), hm];
    let coords = |m: &Matrix| vec![m.get(0, 1).clone(), m.get(1, 0).clone(), m.get(0, 0).clone()];
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|b| coords(&x.commutator(b))).collect();
    Matrix::from_fn(3, 3, |i, j| cols[j][i].clone())
}

pub fn sl2c_example() -> CatalogEntry {
    let model = sl2c_model();
    let gens = sl2c_generators();
    let w = |name: &str| Summand::dolbeault(name, gens.clone(), Matrix::identity(2));
    let v1 = InvariantBundle::new("V1", (1..=4).map(|k| w(&format!("W{k}"))).collect());
    let h0 = Matrix::from_rows(vec![
        vec![int(1), int(0), int(0)],
        vec![int(0), int(1), int(0)],
        vec![int(0), int(0), int(2)],
    ]);
    let v0 = InvariantBundle::new("V0", vec![Summand::dolbeault("End0W", gens.iter().map(sl2_adjoint).collect(), h0)]);
    entry(
        "sl2c-example",
        "SL(2,C) quotient with V = W+W+W+W, V0 = End0 W, omega0 standard",
        model,
        Metric::standard(3),
        PairedBundles::new(v0, v1, alpha()),
    )
}

pub fn sl2c_w() -> InvariantBundle {
    InvariantBundle::new("W", vec![Summand::dolbeault("W", sl2c_generators(), Matrix::identity(2))])
}

/// `w1^~w1 - w2^~w2`.
pub fn torus_paired_curvature() -> Form {
    f(&[0, 3], int(1)).sub(&f(&[1, 4], int(1)))
}

pub fn torus3_paired() -> CatalogEntry {
    let model = AlgebraModel::new(vec![Form::zero(3); 3]).expect("abelian");
    let v0 = InvariantBundle::new("V0", vec![Summand::line("L0", torus_paired_curvature())]);
    let v1 = InvariantBundle::new("V1", vec![Summand::line("L1", torus_paired_curvature())]);
    entry(
        "torus3-paired",
        "flat torus, V0 = V1 = line with curvature w1^~w1 - w2^~w2",
        model,
        Metric::standard(3),
        PairedBundles::new(v0, v1, alpha()),
    )
}

pub fn torus_nilpotent_bundle(name: &str) -> Summand {
    let mut a1 = Matrix::zeros(2, 2);
    a1.set(0, 1, int(1));
    Summand::dolbeault(name, vec![a1, Matrix::zeros(2, 2), Matrix::zeros(2, 2)], Matrix::identity(2))
}

pub fn torus3_nilpotent() -> CatalogEntry {
    let model = AlgebraModel::new(vec![Form::zero(3); 3]).expect("abelian");
    let v0 = InvariantBundle::new("V0", vec![torus_nilpotent_bundle("E0")]);
    let v1 = InvariantBundle::new("V1", vec![torus_nilpotent_bundle("E1")]);
    entry(
        "torus3-nilpotent",
        "flat torus, V0 = V1 = rank 2 bundle with dbar = dbar + ~w1 E12",
        model,
        Metric::standard(3),
        PairedBundles::new(v0, v1, alpha()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::chern_curvature;

    #[test]
    fn every_entry_builds() {
        for e in all(2) {
            assert!(e.pair.chern(&e.model).is_ok(), "{}", e.name);
        }
    }

    #[test]
    fn sl2c_w_curvature_matches_display() {
        let model = sl2c_model();
        let c = chern_curvature(&model, &sl2c_w()).unwrap();
        let i = Scalar::i();
        let h = Scalar::ratio(1, 2);
        let w = |a: usize, b: usize, s: Scalar| Form::from_indices(3, &[a, b], s);
        // -(i/2)(w1^~w2 - w2^~w1)
        let f11 = w(0, 4, -(&i * &h)).add(&w(1, 3, &i * &h));
        // ½((w1^~w3 - w3^~w1) - i(w2^~w3 - w3^~w2))
        let f12 = w(0, 5, h.clone())
            .sub(&w(2, 3, h.clone()))
            .sub(&w(1, 5, &i * &h))
            .add(&w(2, 4, &i * &h));
        let block = |p: usize, q: usize| Form::from_bilinear(3, |a, b| c.block(0, a, b).get(p, q).clone());
        assert_eq!(block(0, 0), f11);
        assert_eq!(block(1, 1), f11.neg());
        assert_eq!(block(0, 1), f12);
        assert_eq!(block(1, 0), f12.conj().neg());
    }
}
