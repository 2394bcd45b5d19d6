use hs_core::algebroid::{self, AdOneForm, AlgebroidError, AlgebroidModel};
use hs_core::catalog::{self, CatalogEntry};
use hs_core::formalg::Form;
use hs_core::sample;
use hs_exact::Scalar;
use proptest::prelude::*;

fn build(e: &CatalogEntry) -> AlgebroidModel {
    algebroid::build_algebroid(&e.model, &e.pair, &e.omega).unwrap_or_else(|err| panic!("{}: {err}", e.name))
}

fn valid() -> Vec<CatalogEntry> {
    vec![catalog::torus3(), catalog::torus3_paired(), catalog::torus3_nilpotent(), catalog::h19minus(2)]
}

#[test]
fn bianchi_failures_are_rejected() {
    for e in [catalog::iwasawa(), catalog::sl2c_example()] {
        let r = algebroid::build_algebroid(&e.model, &e.pair, &e.omega);
        assert!(matches!(r, Err(AlgebroidError::Bianchi(_))), "{}", e.name);
    }
}

#[test]
fn dbar_squares_to_zero_and_axioms_hold() {
    for e in valid() {
        let m = build(&e);
        assert!(m.dbar_squared().iter().all(|(_, r)| r.is_zero()), "{}", e.name);
        let rep = m.axioms().unwrap();
        assert!(rep.holomorphic_sections > 0);
        for a in &rep.axioms {
            assert!(a.pass, "{} {} {:?}", e.name, a.name, a.first_failure);
        }
    }
}

#[test]
fn psi_intertwines_dolbeault_operators() {
    for e in valid() {
        assert!(build(&e).psi_intertwines().unwrap(), "{}", e.name);
    }
}

#[test]
fn curvature_of_d_closed_form_matches_direct() {
    for e in valid() {
        let m = build(&e);
        let direct = m.fd_direct();
        let closed = m.fd_closed();
        let nn = 2 * m.n();
        for a in 0..nn {
            for b in a + 1..nn {
                assert_eq!(direct.r[a][b], closed.r[a][b], "{} ({a},{b})", e.name);
            }
        }
    }
}

#[test]
fn second_ricci_closed_form_matches_contraction() {
    for e in valid() {
        let m = build(&e);
        let fd = m.fd_direct();
        assert_eq!(m.sd_contraction(&fd, &m.metric), m.sd_closed(), "{}", e.name);
    }
}

#[test]
fn chern_curvature_of_generalized_metric_two_ways() {
    for e in valid() {
        let m = build(&e);
        let fg = m.fg_bundle().unwrap();
        let tr = m.fg_transport(&m.fd_direct()).unwrap();
        assert_eq!(fg.r, tr.r, "{}", e.name);
    }
}

#[test]
fn generalized_metric_signature() {
    let e = catalog::torus3_paired();
    let m = build(&e);
    let g = m.generalized_metric(&e.sample_values);
    // α < 0: V0 block negative on one side, V1 on the other
    assert_eq!(g.signature, Some((4 * 3 + 2, 2)));
}

#[test]
fn he_grf_and_rho_decomposition() {
    for e in valid() {
        let m = build(&e);
        let rep = m.he_and_grf();
        println!("{}: he {:?} grf {:?}", e.name, rep.he.overall, rep.grf.overall);
        for (name, r) in [("rho", &rep.rho_decomp)] {
            for eq in &r.per_equation {
                assert!(eq.residual.is_zero(), "{} {name} {}: {}", e.name, eq.name, eq.residual);
            }
        }
    }
}

fn zero_a(m: &AlgebroidModel) -> AdOneForm {
    vec![vec![Scalar::zero(); m.m()]; 2 * m.n()]
}

#[test]
fn lifting_with_zero_gauge_shift() {
    for e in valid() {
        let m = build(&e);
        let h0 = m.model.dc(m.metric.omega()).neg();
        let rep = m.lifting_check(&h0, m.metric.omega(), &Form::zero(m.n()), &zero_a(&m));
        assert!(rep.holds, "{}", e.name);
        assert!(rep.h0_bianchi.is_zero(), "{}", e.name);
        assert!(rep.anomaly.is_zero() && rep.anomaly_02.is_zero(), "{}", e.name);
    }
}

#[test]
fn lifting_detects_broken_02_condition() {
    let e = catalog::torus3_nilpotent();
    let m = build(&e);
    let mut a = zero_a(&m);
    // a^{0,1} = E12 dz̄1 + E21 dz̄2 in the V0 block: [a ∧ a]^{0,2} ≠ 0
    a[3][1] = Scalar::one();
    a[4][2] = Scalar::one();
    let h0 = m.model.dc(m.metric.omega()).neg();
    let rep = m.lifting_check(&h0, m.metric.omega(), &Form::zero(m.n()), &a);
    assert!(!rep.holds);
    assert!(!rep.second.is_zero());
    assert!(!rep.anomaly_02.is_zero());
}

fn random_shift(m: &AlgebroidModel, seed: u64, with_01: bool) -> AdOneForm {
    let mut rng = sample::rng(seed);
    let n = m.n();
    (0..2 * n)
        .map(|x| if x < n || with_01 { sample::vector(&mut rng, m.m(), 3) } else { vec![Scalar::zero(); m.m()] })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // With H_0 solved from the first lifting equation, dd^cω + ⟨F_θ∧F_θ⟩
    // equals -(dH_0 - ⟨F_0∧F_0⟩): the Chern-Simons transgression of the
    // cubic terms. So string-type input forces the anomaly to cancel.
    #[test]
    fn lifting_implies_anomaly_cancellation(seed in any::<u64>(), which in 0usize..3) {
        let e = [catalog::torus3_nilpotent(), catalog::h19minus(2), catalog::torus3_paired()][which].clone();
        let m = build(&e);
        let n = m.n();
        // abelian torus3-paired admits a constant (0,1) part
        let a = random_shift(&m, seed, which == 2);
        let mut rng = sample::rng(seed ^ 0x5eed);
        let mut b = Form::zero(n);
        for x in 0..2 * n {
            for y in x + 1..2 * n {
                b = b.add(&Form::from_indices(n, &[x, y], sample::gaussian(&mut rng, 3)));
            }
        }
        let probe = m.lifting_check(&Form::zero(n), m.metric.omega(), &b, &a);
        let h0 = probe.first.neg();
        let rep = m.lifting_check(&h0, m.metric.omega(), &b, &a);
        prop_assert!(rep.holds);
        prop_assert!(rep.anomaly.add(&rep.h0_bianchi).is_zero());
        prop_assert!(rep.anomaly_02.is_zero());
    }
}

#[test]
fn coupled_he_implies_he_and_grf_across_catalog() {
    let mut passing = 0;
    for e in catalog::all(2) {
        let hs = hs_core::systems::hull_strominger_check(&e.model, &e.pair, &e.omega).unwrap();
        if hs.overall {
            let zero = vec![Scalar::zero(); e.pair.ad_algebra().unwrap().dim()];
            assert!(hs_core::systems::coupled_he_check(&e.model, &e.pair, &e.omega, &zero).unwrap().overall, "{}", e.name);
        }
        let Some(z) = hs_core::systems::natural_z(&e.model, &e.pair, &e.omega).unwrap() else { continue };
        if !hs_core::systems::coupled_he_check(&e.model, &e.pair, &e.omega, &z).unwrap().overall {
            continue;
        }
        passing += 1;
        let rep = build(&e).he_and_grf();
        for v in [&rep.he, &rep.grf, &rep.rho_decomp] {
            for eq in &v.per_equation {
                assert!(eq.residual.is_zero(), "{} {}: {}", e.name, eq.name, eq.residual);
            }
        }
    }
    assert!(passing >= 2);
}
