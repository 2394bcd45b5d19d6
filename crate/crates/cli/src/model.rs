//! In-memory model files: canonical printing and conversion to and from
//! catalog entries.

use hs_core::assume::{Assumptions, Sign};
use hs_core::bundles::{InvariantBundle, PairedBundles, Summand, SummandData};
use hs_core::catalog::CatalogEntry;
use hs_core::formalg::{AlgebraModel, Form};
use hs_core::geom::Metric;
use hs_exact::{Matrix, Scalar};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolDecl {
    pub name: String,
    pub sign: Option<Sign>,
    pub sample: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub dim: usize,
    /// `structure[k]` is `d w(k+1)`.
    pub structure: Vec<Form>,
    pub symbols: Vec<SymbolDecl>,
    pub metric: Matrix,
    pub reference: Matrix,
    pub v0: Vec<Summand>,
    pub v1: Vec<Summand>,
    pub alpha: Scalar,
    pub tasks: Vec<String>,
}

impl ModelFile {
    pub fn new(dim: usize) -> Self {
        ModelFile {
            dim,
            structure: vec![Form::zero(dim); dim],
            symbols: Vec::new(),
            metric: Matrix::identity(dim),
            reference: Matrix::identity(dim),
            v0: Vec::new(),
            v1: Vec::new(),
            alpha: Scalar::one(),
            tasks: Vec::new(),
        }
    }

    pub fn declared(&self) -> BTreeSet<String> {
        self.symbols.iter().map(|s| s.name.clone()).collect()
    }

    pub fn assumptions(&self) -> Assumptions {
        let mut a = Assumptions::standard();
        for s in &self.symbols {
            if let Some(sign) = s.sign {
                a.set(&s.name, sign);
            }
        }
        a
    }

    pub fn to_entry(&self, name: &str) -> Result<CatalogEntry, String> {
        let model = AlgebraModel::new(self.structure.clone()).map_err(|e| e.to_string())?;
        let omega = Metric::from_hermitian(self.metric.clone()).map_err(|e| format!("metric: {e}"))?;
        let omega0 = Metric::from_hermitian(self.reference.clone()).map_err(|e| format!("reference: {e}"))?;
        let pair = PairedBundles::new(
            InvariantBundle::new("V0", self.v0.clone()),
            InvariantBundle::new("V1", self.v1.clone()),
            self.alpha.clone(),
        );
        Ok(CatalogEntry {
            name: name.to_string(),
            summary: format!("model file {name}"),
            model,
            omega,
            omega0,
            pair,
            assumptions: self.assumptions(),
            sample_values: self.symbols.iter().filter_map(|s| Some((s.name.clone(), s.sample.clone()?))).collect(),
        })
    }

    pub fn from_entry(e: &CatalogEntry) -> Self {
        let n = e.model.n();
        let mut m = ModelFile::new(n);
        m.structure = e.model.structure()[..n].to_vec();
        m.metric = e.omega.hermitian().clone();
        m.reference = e.omega0.hermitian().clone();
        m.v0 = e.pair.v0.summands.clone();
        m.v1 = e.pair.v1.summands.clone();
        m.alpha = e.pair.alpha.clone();
        let mut names: BTreeSet<String> = m.data_symbols();
        names.extend(e.sample_values.keys().cloned());
        let uses_pi = names.contains("pi");
        names.extend(e.assumptions.iter().map(|(k, _)| k.to_string()).filter(|k| k != "pi" || uses_pi));
        m.symbols = names
            .into_iter()
            .map(|name| SymbolDecl { sign: e.assumptions.get(&name), sample: e.sample_values.get(&name).cloned(), name })
            .collect();
        m
    }

    /// Symbols that occur in the geometric data.
    pub fn data_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in &self.structure {
            out.extend(f.symbols());
        }
        for mat in [&self.metric, &self.reference] {
            out.extend(mat.to_rows().into_iter().flatten().flat_map(|x| x.symbols()));
        }
        for s in self.v0.iter().chain(&self.v1) {
            match &s.data {
                SummandData::Dolbeault { a, h } => {
                    for mat in a.iter().chain([h]) {
                        out.extend(mat.to_rows().into_iter().flatten().flat_map(|x| x.symbols()));
                    }
                }
                SummandData::Curvature { f, .. } => out.extend(f.symbols()),
            }
        }
        out.extend(self.alpha.symbols());
        out
    }

    /// Substitutes symbol values everywhere in the geometric data.
    pub fn subs(&self, vals: &BTreeMap<String, Scalar>) -> Self {
        let mut m = self.clone();
        let mat = |x: &Matrix| x.map(|c| c.subs(vals));
        m.structure = self.structure.iter().map(|f| f.subs(vals)).collect();
        m.metric = mat(&self.metric);
        m.reference = mat(&self.reference);
        for s in m.v0.iter_mut().chain(m.v1.iter_mut()) {
            s.data = match &s.data {
                SummandData::Dolbeault { a, h } => SummandData::Dolbeault { a: a.iter().map(mat).collect(), h: mat(h) },
                SummandData::Curvature { f, integral_periods_asserted } => {
                    SummandData::Curvature { f: f.subs(vals), integral_periods_asserted: *integral_periods_asserted }
                }
            };
        }
        m.alpha = self.alpha.subs(vals);
        m
    }

    /// Canonical text; parsing it gives back an equal model.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[algebra]\ndim = {}", self.dim);
        for (k, f) in self.structure.iter().enumerate() {
            let _ = writeln!(s, "d w{} = {}", k + 1, f);
        }
        if !self.symbols.is_empty() {
            s.push_str("\n[symbols]\n");
            for d in &self.symbols {
                s.push_str(&d.name);
                if let Some(sign) = d.sign {
                    let _ = write!(s, " {sign}");
                }
                if let Some(v) = &d.sample {
                    let _ = write!(s, " sample {v}");
                }
                s.push('\n');
            }
        }
        write_hermitian(&mut s, "metric", &self.metric);
        write_hermitian(&mut s, "reference", &self.reference);
        for (label, summands) in [("V0", &self.v0), ("V1", &self.v1)] {
            let _ = writeln!(s, "\n[bundle {label}]");
            for sm in summands.iter() {
                write_summand(&mut s, sm, self.dim);
            }
        }
        let _ = writeln!(s, "\n[pairing]\nalpha = {}", self.alpha);
        if !self.tasks.is_empty() {
            s.push_str("\n[tasks]\n");
            for t in &self.tasks {
                let _ = writeln!(s, "{t}");
            }
        }
        s
    }
}

fn write_hermitian(s: &mut String, section: &str, h: &Matrix) {
    let _ = writeln!(s, "\n[{section}]");
    for j in 0..h.rows() {
        for k in j..h.cols() {
            if !h.get(j, k).is_zero() {
                let _ = writeln!(s, "h[{},{}] = {}", j + 1, k + 1, h.get(j, k));
            }
        }
    }
}

fn is_flat_line(sm: &Summand) -> bool {
    match &sm.data {
        SummandData::Dolbeault { a, h } => sm.rank == 1 && a.iter().all(|x| x.is_zero()) && h == &Matrix::identity(1),
        SummandData::Curvature { .. } => false,
    }
}

fn write_summand(s: &mut String, sm: &Summand, n: usize) {
    if is_flat_line(sm) {
        let _ = writeln!(s, "flat {}", sm.name);
        return;
    }
    match &sm.data {
        SummandData::Curvature { f, .. } => {
            let _ = writeln!(s, "line {} = {}", sm.name, f);
        }
        SummandData::Dolbeault { a, h } => {
            let _ = writeln!(s, "summand {} rank {}", sm.name, sm.rank);
            for (k, mat) in a.iter().enumerate().take(n) {
                for p in 0..mat.rows() {
                    for q in 0..mat.cols() {
                        if !mat.get(p, q).is_zero() {
                            let _ = writeln!(s, "A{}[{},{}] = {}", k + 1, p + 1, q + 1, mat.get(p, q));
                        }
                    }
                }
            }
            for p in 0..h.rows() {
                for q in 0..h.cols() {
                    if !h.get(p, q).is_zero() {
                        let _ = writeln!(s, "H[{},{}] = {}", p + 1, q + 1, h.get(p, q));
                    }
                }
            }
        }
    }
}
