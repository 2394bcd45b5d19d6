//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every check is exact.

use hs_core::algebroid::{self, AlgebroidModel};
use hs_core::bundles::{self, InvariantBundle, PairedBundles, Summand};
use hs_core::catalog::{self, CatalogEntry};
use hs_core::formalg::{masks_of, AlgebraModel, Form};
use hs_core::futaki::{self, AnchoredEndo};
use hs_core::geom::{self, Metric};
use hs_core::par::map_parallel;
use hs_core::sample::{self, SampleRng};
use hs_core::systems::{self, Certificate, Positivity};
use hs_exact::linalg::{self, Matrix};
use hs_exact::Scalar;
use rand::Rng;
use std::collections::BTreeMap;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn valid_models() -> Vec<(String, AlgebroidModel)> {
    let mut out = Vec::new();
    let mut entries = catalog::all(2);
    entries.push(catalog::h19minus(1));
    entries.push(catalog::h19minus(3));
    for e in entries {
        if let Ok(m) = algebroid::build_algebroid(&e.model, &e.pair, &e.omega) {
            out.push((format!("{}[{}]", e.name, e.pair.v1.summands.len()), m));
        }
    }
    out
}

// 1 -------------------------------------------------------------------------

fn sl2c_curvature() -> Outcome {
    let model = catalog::sl2c_model();
    let c = bundles::chern_curvature(&model, &catalog::sl2c_w()).map_err(|e| e.to_string())?;
    let w = |a: usize, b: usize| Form::from_indices(3, &[a, b + 3], Scalar::one());
    let i = Scalar::i();
    let half = Scalar::ratio(1, 2);
    let s12 = w(0, 1).sub(&w(1, 0));
    let s13 = w(0, 2).sub(&w(2, 0));
    let s23 = w(1, 2).sub(&w(2, 1));
    let display = [
        [s12.scale(&-(&i * &half)), s13.sub(&s23.scale(&i)).scale(&half)],
        [s13.add(&s23.scale(&i)).scale(&-half.clone()), s12.scale(&(&i * &half))],
    ];
    let w02 = Metric::standard(3).omega().pow(2);
    for (p, row) in display.iter().enumerate() {
        for (q, want) in row.iter().enumerate() {
            let got = Form::from_bilinear(3, |a, b| c.block(0, a, b).get(p, q).clone());
            ensure(&got == want, || format!("entry ({p},{q}): {got} != {want}"))?;
            ensure(got.wedge(&w02).is_zero(), || format!("entry ({p},{q}) ^ w0^2 != 0"))?;
        }
    }
    Ok("4 entries match, F^w0^2 = 0".into())
}

// 2 -------------------------------------------------------------------------

fn h19_bianchi() -> Outcome {
    for r in 1..=3 {
        let e = catalog::h19minus(r);
        let (alg, data) = e.pair.chern(&e.model).map_err(|x| x.to_string())?;
        let rhs = bundles::paired_wedge(&alg, &data.curvature).neg();
        let s = systems::bianchi_solve(&e.model, &rhs, true).map_err(|x| x.to_string())?;
        ensure(s.kernel_dim() == 7, || format!("r={r}: kernel {}", s.kernel_dim()))?;
        let want = Scalar::ratio(-1, 2) * Scalar::sym("a") * Scalar::sym("pi").pow(2) * catalog::charge_sum(r);
        ensure(s.coordinate("i*w3^~w3") == Some(&want), || format!("r={r}: w33 coefficient {:?}", s.coordinate("i*w3^~w3")))?;
        // identically zero over the whole affine space
        let h = |f: &Form| systems::hermitian_of(f).get(1, 1).clone();
        ensure(h(&s.particular).is_zero() && s.kernel.iter().all(|k| h(k).is_zero()), || format!("r={r}: w22 entry not zero"))?;
        let p = systems::positivity_analyze(&s, &e.assumptions, &e.sample_values);
        ensure(p.verdict == Positivity::NeverPositive, || format!("r={r}: verdict {:?}", p.verdict))?;
        ensure(
            matches!(p.certificate, Certificate::Diagonal { index: 1, identically_zero: true, .. }),
            || format!("r={r}: certificate {:?}", p.certificate),
        )?;
    }
    Ok("charges 1..3: kernel 7, w33 = -a pi^2/2 sum n^2, w22 = 0, NeverPositive".into())
}

// 3 -------------------------------------------------------------------------

fn random_form(rng: &mut SampleRng, n: usize) -> Form {
    let mut f = Form::zero(n);
    let k = rng.random_range(0..=2 * n);
    for m in 0u32..(1 << (2 * n)) {
        if m.count_ones() as usize == k && rng.random_bool(0.5) {
            f.add_term(m, sample::gaussian(rng, 4));
        }
    }
    f
}

/// Chevalley-Eilenberg differential from the bracket, on frame tuples.
fn d_from_bracket(model: &AlgebraModel, f: &Form, idx: &[usize]) -> Scalar {
    let len = model.frame_len();
    let mut acc = Scalar::zero();
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            let rest: Vec<usize> = idx.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, &x)| x).collect();
            let sign = if (i + j) % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
            for c in 0..len {
                let b = model.bracket(idx[i], idx[j], c);
                if b.is_zero() {
                    continue;
                }
                let mut args = vec![c];
                args.extend(&rest);
                acc = &acc + &(&(&sign * b) * &f.eval(&args));
            }
        }
    }
    acc
}

fn convention_lock() -> Outcome {
    let models: Vec<AlgebraModel> = catalog::all(2).into_iter().map(|e| e.model).collect();
    let seeds: Vec<u64> = (0..1000).collect();
    let two_i = Scalar::gauss((0, 1), (2, 1));
    let fails: Vec<String> = map_parallel(&seeds, |&s| {
        let model = &models[s as usize % models.len()];
        let mut rng = sample::rng(s);
        let x = random_form(&mut rng, model.n());
        let dx = model.d(&x);
        if !model.d(&dx).is_zero() {
            return Some(format!("seed {s}: d^2 != 0"));
        }
        if model.d(&model.dc(&x)) != model.del(&model.delbar(&x)).scale(&two_i) {
            return Some(format!("seed {s}: dd^c != 2i del delbar"));
        }
        let deg = x.degrees().first().copied().unwrap_or(0);
        if deg < 2 * model.n() {
            for m in masks_of(model.n(), 0, 0).into_iter().chain(all_masks(2 * model.n(), deg + 1)) {
                let idx: Vec<usize> = hs_core::formalg::bits(m).collect();
                if dx.eval(&idx) != d_from_bracket(model, &x, &idx) {
                    return Some(format!("seed {s}: d disagrees with the bracket formula"));
                }
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();
    ensure(fails.is_empty(), || fails.join("; "))?;
    Ok("1000 random forms: d^2 = 0, dd^c = 2i del delbar, d matches the bracket formula".into())
}

fn all_masks(len: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << len)).filter(|m| m.count_ones() as usize == k).collect()
}

// 4 -------------------------------------------------------------------------

fn bismut_identity() -> Outcome {
    let entries = catalog::all(2);
    let jobs: Vec<(usize, u64)> = (0..entries.len()).flat_map(|e| (0..20).map(move |s| (e, s))).collect();
    let fails: Vec<String> = map_parallel(&jobs, |&(e, s)| {
        let model = &entries[e].model;
        let mut rng = sample::rng(1000 + s);
        let g = Metric::from_hermitian(sample::positive_hermitian(&mut rng, 3, 2)).expect("positive");
        let fam = geom::connection_family(model, &g);
        let rm = fam.minus.curvature(model);
        let rb = fam.bismut.curvature(model);
        let ddc = model.d(&model.dc(g.omega()));
        let half = Scalar::ratio(1, 2);
        let len = model.frame_len();
        for v1 in 0..len {
            for v2 in 0..len {
                for v3 in 0..len {
                    for v4 in 0..len {
                        let lhs = rm.lowered(&g, v1, v2, v3, v4) - rb.lowered(&g, v3, v4, v1, v2);
                        if lhs != &ddc.eval(&[v1, v2, v3, v4]) * &half {
                            return Some(format!("{} seed {s} at ({v1},{v2},{v3},{v4})", entries[e].name));
                        }
                    }
                }
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();
    ensure(fails.is_empty(), || fails.join("; "))?;
    Ok(format!("{} metrics x 1296 frame tuples", jobs.len()))
}

// 5 -------------------------------------------------------------------------

fn dual_path_curvature() -> Outcome {
    let models = valid_models();
    for (name, m) in &models {
        let direct = m.fd_direct();
        let closed = m.fd_closed();
        let len = 2 * m.n();
        for a in 0..len {
            for b in 0..len {
                ensure(direct.r[a][b] == closed.r[a][b], || format!("{name}: F_D differs at ({a},{b})"))?;
            }
        }
        ensure(m.sd_contraction(&direct, &m.metric) == m.sd_closed(), || format!("{name}: S_D differs"))?;
    }
    Ok(format!("{} algebroid models", models.len()))
}

// 6 -------------------------------------------------------------------------

fn theorem_regressions() -> Outcome {
    let (mut che, mut hs) = (0, 0);
    let mut entries = catalog::all(2);
    entries.push(catalog::h19minus(1));
    for e in &entries {
        let err = |x: systems::SystemError| format!("{}: {x}", e.name);
        let v = systems::hull_strominger_check(&e.model, &e.pair, &e.omega).map_err(err)?;
        if v.overall {
            hs += 1;
            let zero = vec![Scalar::zero(); e.pair.ad_algebra().map_err(|x| x.to_string())?.dim()];
            let c = systems::coupled_he_check(&e.model, &e.pair, &e.omega, &zero).map_err(err)?;
            ensure(c.overall, || format!("{}: HS holds but coupled HE with z = 0 fails", e.name))?;
        }
        let Some(z) = systems::natural_z(&e.model, &e.pair, &e.omega).map_err(err)? else { continue };
        if !systems::coupled_he_check(&e.model, &e.pair, &e.omega, &z).map_err(err)?.overall {
            continue;
        }
        che += 1;
        let m = algebroid::build_algebroid(&e.model, &e.pair, &e.omega).map_err(|x| format!("{}: {x}", e.name))?;
        let rep = m.he_and_grf();
        for v in [&rep.he, &rep.grf, &rep.rho_decomp] {
            for eq in &v.per_equation {
                ensure(eq.residual.is_zero(), || format!("{} {}: {}", e.name, eq.name, eq.residual))?;
            }
        }
    }
    ensure(che > 0 && hs > 0, || format!("vacuous: {che} coupled HE, {hs} HS instances"))?;
    Ok(format!("{che} coupled-HE instances, {hs} HS instances"))
}

// 7 -------------------------------------------------------------------------

fn yang_mills() -> Outcome {
    let mut checked = Vec::new();
    let mut entries = catalog::all(2);
    entries.push(catalog::h19minus(1));
    for e in &entries {
        let Ok((alg, data)) = e.pair.chern(&e.model) else { continue };
        for (label, g) in [("w", &e.omega), ("w0", &e.omega0)] {
            let fam = geom::connection_family(&e.model, g);
            let ym = bundles::yang_mills_identity_check(&e.model, g, &fam.nabla, &alg, &data);
            if ym.precondition {
                ensure(ym.holds, || format!("{} ({label}): residual {:?}", e.name, ym.residual))?;
                checked.push(format!("{}/{label}", e.name));
            }
        }
    }
    ensure(!checked.is_empty(), || "no HE instance".into())?;
    Ok(format!("{} HE instances", checked.len()))
}

// 8 -------------------------------------------------------------------------

fn courant_axioms() -> Outcome {
    let models = valid_models();
    let mut total = 0;
    for (name, m) in &models {
        ensure(m.dbar_squared().iter().all(|(_, r)| r.is_zero()), || format!("{name}: dbar^2 != 0"))?;
        let rep = m.axioms().map_err(|x| format!("{name}: {x}"))?;
        for a in &rep.axioms {
            ensure(a.pass, || format!("{name} {}: {:?}", a.name, a.first_failure))?;
            total += a.checked;
        }
    }
    Ok(format!("{} models, {total} instances", models.len()))
}

// 9 -------------------------------------------------------------------------

fn closed_nn(m: &AlgebroidModel, rng: &mut SampleRng) -> Form {
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

fn random_anchored(m: &AlgebroidModel, rng: &mut SampleRng) -> Result<AnchoredEndo, String> {
    let (n, mm) = (m.n(), m.m());
    let mut e = AnchoredEndo::zero(n, mm);
    e.phi = sample::matrix(rng, n, n, 3);
    e.alpha = (0..n).map(|_| sample::vector(rng, mm, 3)).collect();
    let k = sample::matrix(rng, mm, mm, 3);
    let pinv = linalg::inverse(m.alg.pairing()).map_err(|x| x.to_string())?;
    e.sigma = pinv.mul(&k.sub(&k.transpose()));
    let b = sample::matrix(rng, n, n, 3);
    e.b = b.sub(&b.transpose());
    Ok(e)
}

fn kahler_torus() -> (String, AlgebroidModel, Metric) {
    let mut rng = sample::rng(4);
    let model = AlgebraModel::new(vec![Form::zero(3); 3]).expect("abelian");
    let line = |name: &str, a: usize| Summand::line(name, Form::from_indices(3, &[a, a + 3], Scalar::one()));
    let pair = PairedBundles::new(
        InvariantBundle::new("V0", vec![line("L0", 0)]),
        InvariantBundle::new("V1", vec![line("L1", 1)]),
        Scalar::sym("a"),
    );
    let g = Metric::from_hermitian(sample::positive_hermitian(&mut rng, 3, 2)).expect("positive");
    let g0 = Metric::from_hermitian(sample::positive_hermitian(&mut rng, 3, 2)).expect("positive");
    ("kahler-torus".into(), algebroid::build_algebroid(&model, &pair, &g).expect("valid"), g0)
}

fn futaki_suite() -> Outcome {
    let fe = |x: futaki::FutakiError| x.to_string();
    let mut instances: Vec<(String, AlgebroidModel, Metric)> = [catalog::torus3(), catalog::torus3_paired(), catalog::torus3_nilpotent(), catalog::h19minus(2)]
        .into_iter()
        .map(|e| (e.name.clone(), algebroid::build_algebroid(&e.model, &e.pair, &e.omega).expect("valid"), e.omega0.clone()))
        .collect();
    instances.push(kahler_torus());
    let c = Scalar::from_int(futaki::EXPLICIT_OVER_DIRECT);
    let mut rng = sample::rng(77);
    let (mut agree, mut nonzero) = (0, 0);
    for (name, m, g0) in &instances {
        let p = m.alg.pairing();
        let sol = futaki::holomorphic_endo_solve(m).map_err(fe)?;
        let gram = m.generalized_gram();
        let nu = closed_nn(m, &mut rng);
        let basis: Vec<&AnchoredEndo> = sol.basis.iter().take(6).collect();
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                let comm = AnchoredEndo::from_matrix(m.n(), m.m(), &a.assemble(p).commutator(&b.assemble(p)), p).map_err(fe)?;
                let v = futaki::futaki_direct(m, &comm, &nu, &gram).map_err(fe)?;
                ensure(v.is_zero(), || format!("{name}: commutator value {v}"))?;
            }
        }
        let a = Form::from_bilinear(m.n(), |x, y| if x < m.n() && y >= m.n() { sample::gaussian(&mut sample::rng((7 * x + y) as u64), 2) } else { Scalar::zero() });
        let shifted = nu.add(&m.model.delbar(&m.model.del(&a)));
        let mut v = Matrix::identity(m.q());
        for k in 0..m.q() {
            v.set(k, k, Scalar::from_int(1 + (k as i64 % 3)));
        }
        let gauged = v.conj_transpose().mul(&gram).mul(&v);
        for b in &basis {
            let base = futaki::futaki_direct(m, b, &nu, &gram).map_err(fe)?;
            ensure(futaki::futaki_direct(m, b, &shifted, &gram).map_err(fe)? == base, || format!("{name}: representative dependence"))?;
            ensure(futaki::futaki_direct(m, b, &nu, &gauged).map_err(fe)? == base, || format!("{name}: gauge dependence"))?;
        }
        // explicit against direct, on basis elements and on arbitrary anchored data
        let w = g0.omega().pow(m.n() - 1);
        let mut endos: Vec<AnchoredEndo> = basis.iter().map(|b| (*b).clone()).collect();
        for _ in 0..3 {
            endos.push(random_anchored(m, &mut rng)?);
        }
        let mut ok = true;
        for e in &endos {
            let d = futaki::futaki_direct(m, e, &w, &gram).map_err(fe)?;
            let x = futaki::futaki_explicit(m, e, g0).map_err(fe)?;
            ok &= x.total == &c * &d;
            nonzero += usize::from(!d.is_zero());
        }
        ensure(ok, || format!("{name}: explicit != c * direct"))?;
        agree += 1;
    }
    ensure(agree >= 3 && nonzero > 0, || format!("{agree} instances, {nonzero} nonzero values"))?;
    Ok(format!("{agree} instances, c = {c}, {nonzero} nonzero comparisons"))
}

// 10 ------------------------------------------------------------------------

/// Rank by plain Gaussian elimination; entries must be constants.
fn naive_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][c].try_inverse().expect("constant pivot");
        let piv = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] * &inv;
                for k in c..cols {
                    let t = &f * &piv[k];
                    rows[r][k] = &rows[r][k] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn specialize(rows: &[Vec<Scalar>], vals: &BTreeMap<String, Scalar>) -> Vec<Vec<Scalar>> {
    rows.iter().map(|r| r.iter().map(|x| x.subs(vals)).collect()).collect()
}

fn sample_points(syms: impl IntoIterator<Item = String>) -> Vec<BTreeMap<String, Scalar>> {
    let syms: Vec<String> = syms.into_iter().collect();
    (0..3)
        .map(|k| {
            let mut rng = sample::rng(500 + k);
            syms.iter().map(|s| (s.clone(), Scalar::ratio(rng.random_range(2..40), rng.random_range(1..9)))).collect()
        })
        .collect()
}

/// The real (1,1) basis written out by hand.
fn oracle_real_11(n: usize) -> Vec<Form> {
    let i = Scalar::i();
    let w = |a: usize, b: usize, c: Scalar| Form::from_indices(n, &[a, n + b], c);
    let mut out = Vec::new();
    for j in 0..n {
        out.push(w(j, j, i.clone()));
    }
    for j in 0..n {
        for k in j + 1..n {
            out.push(w(j, k, Scalar::one()).sub(&w(k, j, Scalar::one())));
            out.push(w(j, k, i.clone()).add(&w(k, j, i.clone())));
        }
    }
    out
}

fn bianchi_oracle(e: &CatalogEntry) -> Result<String, String> {
    let model = &e.model;
    let n = model.n();
    let two_i = Scalar::gauss((0, 1), (2, 1));
    let ddc = |x: &Form| model.del(&model.delbar(x)).scale(&two_i);
    let basis = oracle_real_11(n);
    let images: Vec<Form> = basis.iter().map(ddc).collect();
    let (alg, data) = e.pair.chern(model).map_err(|x| x.to_string())?;
    let rhs = bundles::paired_wedge(&alg, &data.curvature).neg();
    let masks = all_masks(2 * n, 4);
    // real unknowns: split every complex equation
    let mut rows = Vec::new();
    for &mk in &masks {
        for part in [Scalar::re as fn(&Scalar) -> Scalar, Scalar::im] {
            let mut row: Vec<Scalar> = images.iter().map(|f| part(&f.coeff(mk))).collect();
            row.push(part(&rhs.coeff(mk)));
            rows.push(row);
        }
    }
    let syms: Vec<String> = rhs.symbols().into_iter().collect();
    let points = if syms.is_empty() { vec![BTreeMap::new()] } else { sample_points(syms) };
    let mut kernel = 0;
    let mut consistent = true;
    for vals in &points {
        let aug = specialize(&rows, vals);
        let coef: Vec<Vec<Scalar>> = aug.iter().map(|r| r[..r.len() - 1].to_vec()).collect();
        let r = naive_rank(coef);
        kernel = kernel.max(basis.len() - r);
        consistent &= naive_rank(aug) == r;
    }
    match systems::bianchi_solve(model, &rhs, true) {
        Ok(s) => {
            ensure(consistent, || format!("{}: solver found a solution the oracle rejects", e.name))?;
            ensure(s.kernel_dim() == kernel, || format!("{}: kernel {} vs oracle {kernel}", e.name, s.kernel_dim()))?;
            let member = |x: &Form, target: &Form| x.is_real() && x.bidegrees().iter().all(|&b| b == (1, 1)) && &ddc(x) == target;
            ensure(member(&s.particular, &rhs), || format!("{}: particular fails oracle", e.name))?;
            let zero = Form::zero(n);
            ensure(s.kernel.iter().all(|k| member(k, &zero)), || format!("{}: kernel element fails oracle", e.name))?;
            Ok(format!("{}:{kernel}", e.name))
        }
        Err(systems::BianchiError::Inconsistent(_)) => {
            ensure(!consistent, || format!("{}: solver reports inconsistency, oracle solves", e.name))?;
            Ok(format!("{}:inconsistent", e.name))
        }
        Err(x) => Err(format!("{}: {x}", e.name)),
    }
}

/// Constraints on a general q x q matrix: commutes with every `L_a`,
/// orthogonal for the pairing, and zero from the `ad P ⊕ T*` part into `T`.
fn endo_oracle_rows(m: &AlgebroidModel) -> Vec<Vec<Scalar>> {
    let q = m.q();
    let n = m.n();
    let ls = m.dolbeault_ops();
    let p0 = m.pairing0();
    let unit = |u: usize| {
        let mut e = Matrix::zeros(q, q);
        e.set(u / q, u % q, Scalar::one());
        e
    };
    let cols: Vec<Vec<Scalar>> = (0..q * q)
        .map(|u| {
            let e = unit(u);
            let mut col = Vec::new();
            for l in &ls {
                col.extend(l.mul(&e).sub(&e.mul(l)).to_rows().into_iter().flatten());
            }
            col.extend(e.transpose().mul(&p0).add(&p0.mul(&e)).to_rows().into_iter().flatten());
            for r in 0..n {
                for c in n..q {
                    col.push(e.get(r, c).clone());
                }
            }
            col
        })
        .collect();
    (0..cols[0].len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

fn endo_oracle(name: &str, m: &AlgebroidModel) -> Result<String, String> {
    let rows = endo_oracle_rows(m);
    let syms: std::collections::BTreeSet<String> = rows.iter().flatten().flat_map(|x| x.symbols()).collect();
    let points = if syms.is_empty() { vec![BTreeMap::new()] } else { sample_points(syms) };
    let q = m.q();
    let dim = points.iter().map(|v| q * q - naive_rank(specialize(&rows, v))).max().unwrap_or(0);
    let sol = futaki::holomorphic_endo_solve(m).map_err(|x| x.to_string())?;
    ensure(sol.basis.len() == dim, || format!("{name}: solver {} vs oracle {dim}", sol.basis.len()))?;
    for b in &sol.basis {
        let v: Vec<Scalar> = b.assemble(m.alg.pairing()).to_rows().into_iter().flatten().collect();
        let ok = rows.iter().all(|r| r.iter().zip(&v).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y)).is_zero());
        ensure(ok, || format!("{name}: basis element violates the oracle constraints"))?;
    }
    Ok(format!("{name}:{dim}"))
}

fn solver_oracles() -> Outcome {
    let mut entries = catalog::all(2);
    entries.push(catalog::h19minus(1));
    let mut notes = Vec::new();
    for e in &entries {
        notes.push(bianchi_oracle(e)?);
    }
    for (name, m) in valid_models() {
        notes.push(endo_oracle(&name, &m)?);
    }
    Ok(notes.join(" "))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("sl2c curvature display and F^w0^2 = 0", sl2c_curvature),
        ("h19 Bianchi solve and positivity certificate", h19_bianchi),
        ("convention lock dd^c = 2i del delbar, d^2 = 0", convention_lock),
        ("Bismut / minus curvature pair identity", bismut_identity),
        ("dual-path F_D and S_D", dual_path_curvature),
        ("coupled HE => HE + GRF, HS => coupled HE", theorem_regressions),
        ("Yang-Mills identity on HE instances", yang_mills),
        ("Courant axioms and dbar_0^2 = 0", courant_axioms),
        ("Futaki character suite", futaki_suite),
        ("solver oracles (Bianchi, holomorphic endomorphisms)", solver_oracles),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}) [{secs:.2}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
