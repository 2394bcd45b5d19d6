use hs_core::algebroid::{self, AlgebroidModel};
use hs_core::bundles::{InvariantBundle, PairedBundles, Summand};
use hs_core::catalog::{self, CatalogEntry};
use hs_core::formalg::{masks_of, AlgebraModel, Form};
use hs_core::futaki::{self, AnchoredEndo, Obstruction};
use hs_core::geom::Metric;
use hs_core::sample::{self, SampleRng};
use hs_exact::linalg::{self, Matrix};
use hs_exact::Scalar;
use proptest::prelude::*;

fn build(e: &CatalogEntry) -> AlgebroidModel {
    algebroid::build_algebroid(&e.model, &e.pair, &e.omega).unwrap()
}

fn valid() -> Vec<CatalogEntry> {
    vec![catalog::torus3(), catalog::torus3_paired(), catalog::torus3_nilpotent(), catalog::h19minus(2)]
}

/// Flat torus with a random Kähler metric and lines `L(w1^~w1)`, `L(w2^~w2)`
/// on opposite sides of the pairing.
fn kahler_torus(seed: u64) -> (AlgebroidModel, Metric) {
    let mut rng = sample::rng(seed);
    let model = AlgebraModel::new(vec![Form::zero(3); 3]).unwrap();
    let line = |name: &str, a: usize| Summand::line(name, Form::from_indices(3, &[a, a + 3], Scalar::one()));
    let pair = PairedBundles::new(
        InvariantBundle::new("V0", vec![line("L0", 0)]),
        InvariantBundle::new("V1", vec![line("L1", 1)]),
        Scalar::sym("a"),
    );
    let g = Metric::from_hermitian(sample::positive_hermitian(&mut rng, 3, 2)).unwrap();
    let g0 = Metric::from_hermitian(sample::positive_hermitian(&mut rng, 3, 2)).unwrap();
    (algebroid::build_algebroid(&model, &pair, &g).unwrap(), g0)
}

fn random_anchored(m: &AlgebroidModel, rng: &mut SampleRng) -> AnchoredEndo {
    let (n, mm) = (m.n(), m.m());
    let mut e = AnchoredEndo::zero(n, mm);
    e.phi = sample::matrix(rng, n, n, 3);
    e.alpha = (0..n).map(|_| sample::vector(rng, mm, 3)).collect();
    // P^{-1} K with K antisymmetric is skew for the pairing
    let k = sample::matrix(rng, mm, mm, 3);
    e.sigma = linalg::inverse(m.alg.pairing()).unwrap().mul(&k.sub(&k.transpose()));
    let b = sample::matrix(rng, n, n, 3);
    e.b = b.sub(&b.transpose());
    e
}

fn random_closed_nn(m: &AlgebroidModel, rng: &mut SampleRng) -> Form {
    let n = m.n();
    let mut nu = Form::zero(n);
    for k in masks_of(n, n - 1, n - 1) {
        let f = Form::mono(n, k, Scalar::one());
        if m.model.d(&f).is_zero() {
            nu = nu.add(&f.scale(&sample::gaussian(rng, 3)));
        }
    }
    nu
}

#[test]
fn solver_output_is_holomorphic_and_orthogonal() {
    for e in valid() {
        let m = build(&e);
        let sol = futaki::holomorphic_endo_solve(&m).unwrap();
        assert!(sol.lower_bound_only);
        for b in &sol.basis {
            let hat = b.assemble(m.alg.pairing());
            assert!(futaki::orthogonality_defect(&m, &hat).is_zero(), "{}", e.name);
            assert!(futaki::is_holomorphic(&m, b), "{}", e.name);
            assert!(futaki::explicit_conditions(&m, b).all_zero(), "{}", e.name);
        }
        assert!(futaki::is_holomorphic(&m, &AnchoredEndo::zero(m.n(), m.m())));
    }
}

#[test]
fn flat_torus_every_anchored_endo_is_holomorphic() {
    let m = build(&catalog::torus3());
    let sol = futaki::holomorphic_endo_solve(&m).unwrap();
    assert_eq!(sol.basis.len(), sol.unknowns);
    assert_eq!(sol.unknowns, 12);
}

#[test]
fn explicit_conditions_agree_with_commutators_off_the_solution_space() {
    let mut rng = sample::rng(11);
    for e in valid() {
        let m = build(&e);
        for _ in 0..4 {
            let r = random_anchored(&m, &mut rng);
            assert_eq!(futaki::is_holomorphic(&m, &r), futaki::explicit_conditions(&m, &r).all_zero(), "{}", e.name);
        }
    }
}

#[test]
fn s0_sequence_dimensions() {
    for e in valid() {
        let m = build(&e);
        let d = futaki::delta_p(&m).unwrap();
        assert_eq!(futaki::s0_dimension(&m).unwrap(), d.s0_dim, "{}", e.name);
        assert_eq!(d.s0_dim, d.h20 + d.kernel_dim);
    }
    let d = futaki::delta_p(&build(&catalog::h19minus(2))).unwrap();
    assert_eq!((d.h20, d.h21), (1, 2));
}

#[test]
fn character_vanishes_on_commutators() {
    let mut rng = sample::rng(5);
    for e in valid() {
        let m = build(&e);
        let p = m.alg.pairing();
        let sol = futaki::holomorphic_endo_solve(&m).unwrap();
        let gram = m.generalized_gram();
        let nu = random_closed_nn(&m, &mut rng);
        for (i, a) in sol.basis.iter().enumerate().take(6) {
            for b in sol.basis.iter().skip(i + 1).take(6) {
                let c = a.assemble(p).commutator(&b.assemble(p));
                let ce = AnchoredEndo::from_matrix(m.n(), m.m(), &c, p).unwrap();
                assert!(futaki::is_holomorphic(&m, &ce));
                assert!(futaki::futaki_direct(&m, &ce, &nu, &gram).unwrap().is_zero(), "{}", e.name);
            }
        }
    }
}

#[test]
fn representative_and_metric_independence() {
    let mut rng = sample::rng(9);
    for e in valid() {
        let m = build(&e);
        let sol = futaki::holomorphic_endo_solve(&m).unwrap();
        let gram = m.generalized_gram();
        let nu = random_closed_nn(&m, &mut rng);
        let a = Form::from_bilinear(m.n(), |x, y| if x < 3 && y >= 3 { sample::gaussian(&mut rng_for(x, y), 2) } else { Scalar::zero() });
        let shift = m.model.delbar(&m.model.del(&a));
        // gauge: G' = v† G v with v diagonal and invertible
        let mut v = Matrix::identity(m.q());
        for i in 0..m.q() {
            v.set(i, i, Scalar::from_int(1 + (i as i64 % 3)));
        }
        let gauged = v.conj_transpose().mul(&gram).mul(&v);
        for b in sol.basis.iter().take(8) {
            let base = futaki::futaki_direct(&m, b, &nu, &gram).unwrap();
            assert_eq!(futaki::futaki_direct(&m, b, &nu.add(&shift), &gram).unwrap(), base, "{}", e.name);
            assert_eq!(futaki::futaki_direct(&m, b, &nu, &gauged).unwrap(), base, "{}", e.name);
        }
    }
}

fn rng_for(x: usize, y: usize) -> SampleRng {
    sample::rng((x * 7 + y) as u64)
}

#[test]
fn non_closed_representative_rejected() {
    let e = catalog::h19minus(2);
    let m = build(&e);
    let nu = (0..9)
        .map(|i| masks_of(3, 2, 2)[i])
        .map(|k| Form::mono(3, k, Scalar::one()))
        .find(|f| !m.model.d(f).is_zero())
        .unwrap();
    let r = futaki::futaki_direct(&m, &AnchoredEndo::zero(3, m.m()), &nu, &m.generalized_gram());
    assert!(matches!(r, Err(futaki::FutakiError::NotClosed(_))));
}

// The explicit four-term formula is a pointwise trace identity, so it can be
// compared with the direct value on arbitrary anchored endomorphisms, where
// both are typically nonzero.
#[test]
fn explicit_matches_direct_with_unit_constant() {
    let c = Scalar::from_int(futaki::EXPLICIT_OVER_DIRECT);
    let mut rng = sample::rng(21);
    let mut nonzero = 0;
    let mut instances: Vec<(String, AlgebroidModel, Metric)> =
        [catalog::h19minus(2), catalog::torus3_paired(), catalog::torus3_nilpotent()]
            .into_iter()
            .map(|e| (e.name.clone(), build(&e), e.omega0.clone()))
            .collect();
    let (m, g0) = kahler_torus(4);
    instances.push(("kahler-torus".into(), m, g0));
    for (name, m, g0) in &instances {
        let nu = g0.omega().pow(m.n() - 1);
        let gram = m.generalized_gram();
        let sol = futaki::holomorphic_endo_solve(m).unwrap();
        let mut endos: Vec<AnchoredEndo> = sol.basis.iter().take(4).cloned().collect();
        endos.extend((0..3).map(|_| random_anchored(m, &mut rng)));
        for e in &endos {
            let d = futaki::futaki_direct(m, e, &nu, &gram).unwrap();
            let x = futaki::futaki_explicit(m, e, g0).unwrap();
            assert_eq!(x.total, &c * &d, "{name}");
            assert_eq!(futaki::futaki_via_d(m, e, &nu).unwrap(), d, "{name}");
            if !d.is_zero() {
                nonzero += 1;
            }
        }
    }
    assert!(nonzero >= 4);
}

#[test]
fn unbalanced_reference_rejected() {
    let e = catalog::h19minus(2);
    let m = build(&e);
    let g0 = Metric::from_hermitian(Matrix::from_rows(vec![
        vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
        vec![Scalar::zero(), Scalar::one(), Scalar::one()],
        vec![Scalar::zero(), Scalar::one(), Scalar::from_int(3)],
    ]))
    .unwrap();
    if !m.model.d(&g0.omega().pow(2)).is_zero() {
        let r = futaki::futaki_explicit(&m, &AnchoredEndo::zero(3, m.m()), &g0);
        assert!(matches!(r, Err(futaki::FutakiError::NotBalanced(_))));
    }
}

#[test]
fn obstruction_reports() {
    let e = catalog::torus3();
    let m = build(&e);
    let sol = futaki::holomorphic_endo_solve(&m).unwrap();
    let rep = futaki::obstruction_report(&m, &e.omega0, &sol.basis, &e.assumptions).unwrap();
    assert_eq!(rep.verdict, Obstruction::Unobstructed);
    assert!(rep.rows.iter().all(|r| r.direct.is_zero()));
    // invariant holomorphic endomorphisms integrate to zero on unimodular groups
    let e = catalog::h19minus(2);
    let m = build(&e);
    let sol = futaki::holomorphic_endo_solve(&m).unwrap();
    let rep = futaki::obstruction_report(&m, &e.omega0, &sol.basis, &e.assumptions).unwrap();
    assert_eq!(rep.verdict, Obstruction::Unobstructed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn assembled_endos_are_orthogonal(seed in any::<u64>(), which in 0usize..4) {
        let m = build(&valid()[which]);
        let mut rng = sample::rng(seed);
        let e = random_anchored(&m, &mut rng);
        let hat = e.assemble(m.alg.pairing());
        prop_assert!(futaki::orthogonality_defect(&m, &hat).is_zero());
        prop_assert_eq!(AnchoredEndo::from_matrix(m.n(), m.m(), &hat, m.alg.pairing()).unwrap(), e);
    }
}
