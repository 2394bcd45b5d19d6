use clap::{Parser, ValueEnum};
use hs_cli::commands::{self, CommandError, COMMANDS};
use hs_cli::model::ModelFile;
use hs_cli::parse::{parse_model, parse_scalar};
use hs_cli::report::{render_json, render_text, FloatPass, Node};
use hs_core::assume::Sign;
use hs_core::catalog::{self, CatalogEntry};
use hs_core::par;
use hs_core::systems;
use hs_exact::Scalar;
use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

const INPUT_ERROR: u8 = 2;
const ENGINE_ERROR: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact checks and solvers for invariant Hermitian geometry.
#[derive(Parser, Debug)]
#[command(name = "hsys", version)]
struct Args {
    /// One of: check-hs, check-che, check-he-algebroid, solve-bianchi,
    /// positivity, futaki, endos, cohomology, axioms, catalog, run
    /// (`run` evaluates the model's [tasks] list).
    command: String,
    /// Model file.
    #[arg(long, conflicts_with = "catalog")]
    model: Option<String>,
    /// Built-in model name.
    #[arg(long)]
    catalog: Option<String>,
    /// Number of charged lines for h19minus.
    #[arg(long, default_value_t = 2)]
    charges: usize,
    /// Shorthand for `--assume a<0`.
    #[arg(long)]
    alpha_negative: bool,
    /// Substitute a value: `sym=rational`.
    #[arg(long = "set", value_name = "SYM=VALUE")]
    set: Vec<String>,
    /// Sign assumption: `sym>0`, `sym<0` or `sym!=0`.
    #[arg(long = "assume", value_name = "CONSTRAINT")]
    assume: Vec<String>,
    /// Add floating-point evaluations (tolerance 1e-9) next to exact values.
    #[arg(long)]
    float: bool,
    /// Worker threads for `run`.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("hsys: {msg}");
    ExitCode::from(INPUT_ERROR)
}

fn parse_assume(s: &str) -> Option<(String, Sign)> {
    let (name, sign) = if let Some(n) = s.strip_suffix("!=0") {
        (n, Sign::NonZero)
    } else if let Some(n) = s.strip_suffix(">0") {
        (n, Sign::Positive)
    } else if let Some(n) = s.strip_suffix("<0") {
        (n, Sign::Negative)
    } else {
        return None;
    };
    let name = name.trim();
    (!name.is_empty()).then(|| (name.to_string(), sign))
}

fn parse_set(s: &str) -> Result<(String, Scalar), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("--set expects sym=value, got '{s}'"))?;
    let v = parse_scalar(v.trim(), &BTreeSet::new()).map_err(|e| format!("--set {k}: {e}"))?;
    if !v.is_constant() || !v.is_real() {
        return Err(format!("--set {k}: value must be a rational number"));
    }
    Ok((k.trim().to_string(), v))
}

/// Loads the model, applies `--set`, `--assume` and runs the self-test.
fn load(args: &Args) -> Result<(ModelFile, CatalogEntry), String> {
    let (mut file, name) = match (&args.model, &args.catalog) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            (parse_model(&text).map_err(|e| format!("{path}: {e}"))?, path.clone())
        }
        (None, Some(name)) => {
            let e = catalog::lookup(name, args.charges).ok_or_else(|| format!("unknown catalog entry '{name}' (known: {})", catalog::NAMES.join(", ")))?;
            (ModelFile::from_entry(&e), name.clone())
        }
        (None, None) => return Err("give --model <path> or --catalog <name>".into()),
    };
    let mut vals = BTreeMap::new();
    for s in &args.set {
        let (k, v) = parse_set(s)?;
        if !file.declared().contains(&k) {
            return Err(format!("--set: '{k}' is not a declared symbol"));
        }
        vals.insert(k, v);
    }
    if !vals.is_empty() {
        file = file.subs(&vals);
        for d in file.symbols.iter_mut() {
            if let Some(v) = vals.get(&d.name) {
                d.sample = Some(v.clone());
            }
        }
    }
    let mut assumes: Vec<(String, Sign)> = Vec::new();
    if args.alpha_negative {
        assumes.push(("a".into(), Sign::Negative));
    }
    for s in &args.assume {
        assumes.push(parse_assume(s).ok_or_else(|| format!("--assume expects sym>0, sym<0 or sym!=0, got '{s}'"))?);
    }
    for (k, sign) in assumes {
        match file.symbols.iter_mut().find(|d| d.name == k) {
            Some(d) => d.sign = Some(sign),
            None => return Err(format!("--assume: '{k}' is not a declared symbol")),
        }
    }
    let entry = file.to_entry(&name)?;
    commands::self_test(&entry)?;
    Ok((file, entry))
}

fn float_pass(e: &CatalogEntry) -> FloatPass {
    let mut syms: BTreeSet<String> = e.sample_values.keys().cloned().collect();
    syms.extend(e.assumptions.iter().map(|(k, _)| k.to_string()));
    syms.extend(e.omega.hermitian().to_rows().into_iter().flatten().flat_map(|x| x.symbols()));
    let vals = systems::sample_symbols(syms, &e.assumptions, &e.sample_values);
    FloatPass {
        values: vals
            .into_iter()
            .filter_map(|(k, v)| v.as_constant().map(|c| (k, c.to_f64().0)))
            .collect(),
    }
}

fn emit(node: &Node, args: &Args, float: Option<&FloatPass>) {
    match args.format {
        Format::Json => print!("{}", render_json(node, float)),
        Format::Text => print!("{}", render_text(node, float)),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.command == "catalog" && args.model.is_none() {
        // with a name, print the entry as a model file
        if let Some(name) = &args.catalog {
            return match catalog::lookup(name, args.charges) {
                Some(e) => {
                    print!("{}", ModelFile::from_entry(&e).to_text());
                    ExitCode::SUCCESS
                }
                None => input_error(format!("unknown catalog entry '{name}'")),
            };
        }
        let e = catalog::torus3();
        return match commands::run("catalog", &e) {
            Ok(node) => {
                emit(&node, &args, None);
                ExitCode::SUCCESS
            }
            Err(err) => input_error(err),
        };
    }
    if args.command != "run" && !COMMANDS.contains(&args.command.as_str()) {
        return input_error(format!("unknown command '{}' (known: {}, run)", args.command, COMMANDS.join(", ")));
    }
    let (file, entry) = match load(&args) {
        Ok(x) => x,
        Err(msg) => return input_error(msg),
    };
    let float = args.float.then(|| float_pass(&entry));
    let result = if args.command == "run" {
        if file.tasks.is_empty() {
            return input_error("the model has no [tasks] section");
        }
        if let Some(bad) = file.tasks.iter().find(|t| !COMMANDS.contains(&t.as_str())) {
            return input_error(format!("unknown task '{bad}'"));
        }
        let results: Vec<Result<Node, CommandError>> =
            par::with_jobs(args.jobs, || par::map_parallel(&file.tasks, |t| commands::run(t, &entry)));
        results.into_iter().collect::<Result<Vec<_>, _>>().map(|xs| Node::map().with("tasks", Node::List(xs)).build())
    } else {
        commands::run(&args.command, &entry)
    };
    match result {
        Ok(node) => {
            emit(&node, &args, float.as_ref());
            ExitCode::SUCCESS
        }
        Err(CommandError::Unknown(c)) => input_error(format!("unknown command '{c}'")),
        Err(err) => {
            eprintln!("hsys: {err}");
            ExitCode::from(ENGINE_ERROR)
        }
    }
}
