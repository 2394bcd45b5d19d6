//! One function per command; each delegates to a single engine operation
//! and turns its result into a [`Node`].

use crate::report::Node;
use hs_core::algebroid::{self, AlgebroidError};
use hs_core::assume::Definite;
use hs_core::bundles;
use hs_core::catalog::{self, CatalogEntry};
use hs_core::futaki::{self, AnchoredEndo, Obstruction};
use hs_core::systems::{self, BianchiError, Certificate, Residual, SystemVerdict};
use hs_exact::{Matrix, Scalar};
use thiserror::Error;

pub const COMMANDS: [&str; 10] =
    ["check-hs", "check-che", "check-he-algebroid", "solve-bianchi", "positivity", "futaki", "endos", "cohomology", "axioms", "catalog"];

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("unknown command '{0}'")]
    Unknown(String),
    #[error("{0}")]
    Engine(String),
}

fn engine(e: impl std::fmt::Display) -> CommandError {
    CommandError::Engine(e.to_string())
}

pub fn residual_node(r: &Residual) -> Node {
    match r {
        Residual::Form(f) => Node::Form(f.clone()),
        Residual::Values(v) => Node::Map(v.iter().map(|(k, x)| (k.clone(), Node::Exact(x.clone()))).collect()),
    }
}

pub fn verdict_node(v: &SystemVerdict) -> Node {
    let eqs = v
        .per_equation
        .iter()
        .map(|e| Node::map().with("name", Node::text(&e.name)).with("pass", Node::Bool(e.pass)).with("residual", residual_node(&e.residual)).build())
        .collect();
    let mut b = Node::map().with("overall", Node::Bool(v.overall)).with("equations", Node::List(eqs));
    if !v.notes.is_empty() {
        b = b.with("notes", Node::List(v.notes.iter().map(Node::text).collect()));
    }
    b.build()
}

fn exact_list(xs: &[Scalar]) -> Node {
    Node::List(xs.iter().cloned().map(Node::Exact).collect())
}

fn matrix_node(m: &Matrix) -> Node {
    Node::List(m.to_rows().iter().map(|r| exact_list(r)).collect())
}

pub fn run(command: &str, e: &CatalogEntry) -> Result<Node, CommandError> {
    let body = match command {
        "check-hs" => verdict_node(&systems::hull_strominger_check(&e.model, &e.pair, &e.omega).map_err(engine)?),
        "check-che" => check_che(e)?,
        "check-he-algebroid" => he_algebroid(e)?,
        "solve-bianchi" => solve_bianchi(e)?.0,
        "positivity" => positivity(e)?,
        "futaki" => futaki_table(e)?,
        "endos" => endos(e)?,
        "cohomology" => cohomology(e)?,
        "axioms" => axioms(e)?,
        "catalog" => catalog_list(),
        other => return Err(CommandError::Unknown(other.to_string())),
    };
    Ok(Node::map().with("command", Node::text(command)).with("model", Node::text(&e.name)).with("result", body).build())
}

fn check_che(e: &CatalogEntry) -> Result<Node, CommandError> {
    let natural = systems::natural_z(&e.model, &e.pair, &e.omega).map_err(engine)?;
    let (z, source) = match natural {
        Some(z) => (z, "Lambda F (central)"),
        None => (vec![Scalar::zero(); e.pair.ad_algebra().map_err(engine)?.dim()], "zero (Lambda F is not central)"),
    };
    let v = systems::coupled_he_check(&e.model, &e.pair, &e.omega, &z).map_err(engine)?;
    Ok(Node::map().with("z_source", Node::text(source)).with("z", exact_list(&z)).with("verdict", verdict_node(&v)).build())
}

fn rejected(err: AlgebroidError) -> Result<Node, CommandError> {
    match err {
        AlgebroidError::Bianchi(res) => Ok(Node::map()
            .with("algebroid", Node::text("rejected: Bianchi identity fails"))
            .with("bianchi_residual", Node::Form(res))
            .build()),
        other => Err(engine(other)),
    }
}

fn he_algebroid(e: &CatalogEntry) -> Result<Node, CommandError> {
    let m = match algebroid::build_algebroid(&e.model, &e.pair, &e.omega) {
        Ok(m) => m,
        Err(err) => return rejected(err),
    };
    let rep = m.he_and_grf();
    Ok(Node::map()
        .with("he", verdict_node(&rep.he))
        .with("grf", verdict_node(&rep.grf))
        .with("rho_decomposition", verdict_node(&rep.rho_decomp))
        .build())
}

fn bianchi_rhs(e: &CatalogEntry) -> Result<hs_core::formalg::Form, CommandError> {
    let (alg, data) = e.pair.chern(&e.model).map_err(engine)?;
    Ok(bundles::paired_wedge(&alg, &data.curvature).neg())
}

fn solve_bianchi(e: &CatalogEntry) -> Result<(Node, Option<systems::AffineSolutionSpace>), CommandError> {
    let rhs = bianchi_rhs(e)?;
    match systems::bianchi_solve(&e.model, &rhs, true) {
        Ok(s) => {
            let coords = s.basis_names.iter().zip(&s.particular_coords).map(|(k, v)| (k.clone(), Node::Exact(v.clone()))).collect();
            let node = Node::map()
                .with("rhs", Node::Form(rhs))
                .with("consistent", Node::Bool(true))
                .with("particular", Node::Form(s.particular.clone()))
                .with("particular_coordinates", Node::Map(coords))
                .with("kernel_dim", Node::int(s.kernel_dim()))
                .with("kernel", Node::List(s.kernel.iter().cloned().map(Node::Form).collect()))
                .with("constraints", Node::List(s.constraints.iter().map(Node::text).collect()))
                .build();
            Ok((node, Some(s)))
        }
        Err(BianchiError::Inconsistent(c)) => {
            let node = Node::map()
                .with("rhs", Node::Form(rhs))
                .with("consistent", Node::Bool(false))
                .with("functional", exact_list(&c.functional))
                .with("value", Node::Exact(c.value))
                .build();
            Ok((node, None))
        }
        Err(other) => Err(engine(other)),
    }
}

fn positivity(e: &CatalogEntry) -> Result<Node, CommandError> {
    let (solution, space) = solve_bianchi(e)?;
    let Some(space) = space else {
        return Ok(Node::map().with("verdict", Node::text("NoSolution")).with("solution", solution).build());
    };
    let p = systems::positivity_analyze(&space, &e.assumptions, &e.sample_values);
    let cert = match &p.certificate {
        Certificate::Diagonal { index, value, identically_zero } => Node::map()
            .with("kind", Node::text("diagonal"))
            .with("entry", Node::text(format!("h[{0},{0}]", index + 1)))
            .with("value", Node::Exact(value.clone()))
            .with("identically_zero", Node::Bool(*identically_zero))
            .build(),
        Certificate::Sample { coefficients, symbols, minors } => Node::map()
            .with("kind", Node::text("sample"))
            .with("kernel_coefficients", exact_list(coefficients))
            .with("symbols", Node::Map(symbols.iter().map(|(k, v)| (k.clone(), Node::Exact(v.clone()))).collect()))
            .with("leading_minors", exact_list(minors))
            .build(),
        Certificate::None => Node::map().with("kind", Node::text("none")).build(),
    };
    Ok(Node::map()
        .with("verdict", Node::text(p.verdict.to_string()))
        .with("certificate", cert)
        .with("kernel_dim", Node::int(space.kernel_dim()))
        .build())
}

fn definite(d: Option<Definite>) -> Node {
    Node::text(match d {
        Some(Definite::Positive) => "positive",
        Some(Definite::Negative) => "negative",
        Some(Definite::Zero) => "zero",
        None => "open",
    })
}

fn futaki_table(e: &CatalogEntry) -> Result<Node, CommandError> {
    let m = match algebroid::build_algebroid(&e.model, &e.pair, &e.omega) {
        Ok(m) => m,
        Err(err) => return rejected(err),
    };
    let sol = futaki::holomorphic_endo_solve(&m).map_err(engine)?;
    let rep = futaki::obstruction_report(&m, &e.omega0, &sol.basis, &e.assumptions).map_err(engine)?;
    let rows = rep
        .rows
        .iter()
        .map(|r| {
            Node::map()
                .with("index", Node::int(r.index))
                .with("direct", Node::Exact(r.direct.clone()))
                .with("explicit", r.explicit.clone().map_or(Node::text("n/a"), Node::Exact))
                .with("sign", definite(r.forced))
                .build()
        })
        .collect();
    let verdict = match rep.verdict {
        Obstruction::Obstructed => "Obstructed",
        Obstruction::Unobstructed => "Unobstructed",
        Obstruction::Undetermined => "Undetermined",
    };
    Ok(Node::map()
        .with("verdict", Node::text(verdict))
        .with("explicit_over_direct", Node::Int(futaki::EXPLICIT_OVER_DIRECT))
        .with("lower_bound_only", Node::Bool(sol.lower_bound_only))
        .with("rows", Node::List(rows))
        .build())
}

fn endo_node(x: &AnchoredEndo) -> Node {
    Node::map()
        .with("phi", matrix_node(&x.phi))
        .with("alpha", Node::List(x.alpha.iter().map(|a| exact_list(a)).collect()))
        .with("sigma", matrix_node(&x.sigma))
        .with("b", matrix_node(&x.b))
        .build()
}

fn endos(e: &CatalogEntry) -> Result<Node, CommandError> {
    let m = match algebroid::build_algebroid(&e.model, &e.pair, &e.omega) {
        Ok(m) => m,
        Err(err) => return rejected(err),
    };
    let sol = futaki::holomorphic_endo_solve(&m).map_err(engine)?;
    let d = &sol.delta;
    Ok(Node::map()
        .with("unknowns", Node::int(sol.unknowns))
        .with("dimension", Node::int(sol.basis.len()))
        .with("lower_bound_only", Node::Bool(sol.lower_bound_only))
        .with(
            "sequence",
            Node::map()
                .with("h20", Node::int(d.h20))
                .with("delta_rank", Node::int(d.rank))
                .with("delta_kernel", Node::int(d.kernel_dim))
                .with("s0", Node::int(d.s0_dim))
                .with("h21", Node::int(d.h21))
                .build(),
        )
        .with("basis", Node::List(sol.basis.iter().map(endo_node).collect()))
        .build())
}

fn table(t: &[Vec<usize>]) -> Node {
    Node::List(t.iter().map(|row| Node::List(row.iter().map(|&k| Node::int(k)).collect())).collect())
}

fn cohomology(e: &CatalogEntry) -> Result<Node, CommandError> {
    let c = e.model.invariant_cohomology().map_err(engine)?;
    Ok(Node::map()
        .with("note", Node::text("invariant forms only; tables are indexed [p][q]"))
        .with("bott_chern", table(&c.bott_chern))
        .with("aeppli", table(&c.aeppli))
        .with("dolbeault", table(&c.dolbeault))
        .with("aeppli_11_real", Node::int(c.aeppli_11_real))
        .with("aeppli_11_basis", Node::List(c.aeppli_11_basis.iter().cloned().map(Node::Form).collect()))
        .with("dolbeault_21_basis", Node::List(c.dolbeault_21_basis.iter().cloned().map(Node::Form).collect()))
        .with("del_map", matrix_node(&c.del_map))
        .build())
}

fn axioms(e: &CatalogEntry) -> Result<Node, CommandError> {
    let m = match algebroid::build_algebroid(&e.model, &e.pair, &e.omega) {
        Ok(m) => m,
        Err(err) => return rejected(err),
    };
    let rep = m.axioms().map_err(engine)?;
    let rows = rep
        .axioms
        .iter()
        .map(|a| {
            let mut b = Node::map().with("name", Node::text(&a.name)).with("pass", Node::Bool(a.pass)).with("checked", Node::int(a.checked));
            if let Some(f) = &a.first_failure {
                b = b.with("first_failure", Node::text(f));
            }
            b.build()
        })
        .collect();
    Ok(Node::map()
        .with("all_pass", Node::Bool(rep.all_pass()))
        .with("dbar_squared_zero", Node::Bool(rep.dbar_squared_zero))
        .with("holomorphic_sections", Node::int(rep.holomorphic_sections))
        .with("axioms", Node::List(rows))
        .build())
}

/// Integrability and `d² = 0` for one entry.
pub fn self_test(e: &CatalogEntry) -> Result<(), String> {
    let n = e.model.n();
    for k in 0..2 * n {
        if !e.model.d(&e.model.d(&e.model.w(k))).is_zero() {
            return Err(format!("{}: d^2 w{} != 0", e.name, k + 1));
        }
    }
    e.pair.chern(&e.model).map(|_| ()).map_err(|x| format!("{}: {x}", e.name))
}

fn catalog_list() -> Node {
    let rows = catalog::all(1)
        .iter()
        .map(|e| {
            Node::map()
                .with("name", Node::text(&e.name))
                .with("summary", Node::text(&e.summary))
                .with("self_test", Node::text(self_test(e).err().unwrap_or_else(|| "pass".into())))
                .build()
        })
        .collect();
    Node::List(rows)
}
