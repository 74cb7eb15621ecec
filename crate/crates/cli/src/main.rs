//! `hornred`: differential reduction of two-variable Horn functions from
//! the command line.
//!
//! Exit codes: 0 success, 1 internal error or degenerate case, 2 invalid
//! arguments, 3 exceptional parameters, 4 unknown function, 5 a numeric
//! verification failed.

use std::collections::HashMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hornred::annihilator::derived;
use hornred::catalog::{catalog, get_definition, HornDefinition};
use hornred::reduction::{reduce, verify_reduction, ReductionResult, VerifyStatus};
use hornred::series::{complex_to_f64, eval_series, sample_points, Complex, EvalPoint, DEFAULT_ORDER};
use hornred::{Error, RBig, RationalExpr, Var};

#[derive(Parser)]
#[command(name = "hornred", version, about = "Differential reduction of Horn hypergeometric functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Cas,
}

#[derive(Subcommand)]
enum Command {
    /// List the cataloged functions with their parameters and rank.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Show the series, exceptional sets, singular loci and rewrite rules.
    Describe {
        function: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Express F(params) through F(params + shift) and its θ-derivatives.
    Reduce {
        function: String,
        /// Comma-separated integers, one per parameter.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        shift: Vec<i64>,
        /// Comma-separated symbols or rationals; defaults to the catalog names.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate the truncated series and its θ-derivatives.
    Eval {
        function: String,
        /// Comma-separated rationals or decimals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        params: Vec<String>,
        /// The point `z1,z2` (decimals or rationals).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        z: Vec<String>,
        /// Truncation order N: indices 0 <= m1, m2 <= N.
        #[arg(long = "order", short = 'N', default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Reduce, then check the identity numerically at sample points.
    Verify {
        function: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        shift: Vec<i64>,
        /// Symbols are replaced by sampled values, rationals are kept;
        /// everything is sampled when absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<String>>,
        /// Fixed point `z1,z2`; sampled when absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Option<Vec<String>>,
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "order", short = 'N', default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::InvalidArgument(_) | Error::Domain(_) => 2,
            Error::Exceptional { .. } => 3,
            Error::UnknownFunction { .. } | Error::NotFound(_) => 4,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: String) -> Failure {
    Failure { code: 2, message }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::List { format } => run_list(format),
        Command::Describe { function, format } => run_describe(&function, format),
        Command::Reduce { function, shift, params, format } => run_reduce(&function, &shift, params, format),
        Command::Eval { function, params, z, order, format } => run_eval(&function, &params, &z, order, format),
        Command::Verify { function, shift, params, z, points, seed, order, tol, format } => {
            let options = VerifyOptions { points, seed, order, tol, format };
            run_verify(&function, &shift, params, z, &options)
        }
    }
}

fn parse_exprs(items: &[String]) -> Result<Vec<RationalExpr>, Failure> {
    items
        .iter()
        .map(|s| s.trim().parse::<RationalExpr>().map_err(|e| invalid(format!("{s:?}: {e}"))))
        .collect()
}

fn parse_numbers(items: &[String], what: &str) -> Result<Vec<RBig>, Failure> {
    parse_exprs(items)?
        .into_iter()
        .map(|e| e.as_rational().ok_or_else(|| invalid(format!("{what} {e} is not a number"))))
        .collect()
}

fn parse_z(items: &[String]) -> Result<[(RBig, RBig); 2], Failure> {
    match parse_numbers(items, "z component")?.as_slice() {
        [z1, z2] => Ok([(z1.clone(), RBig::ZERO), (z2.clone(), RBig::ZERO)]),
        other => Err(invalid(format!("--z takes two values, got {}", other.len()))),
    }
}

fn check_arity(def: &HornDefinition, n: usize, what: &str) -> Result<(), Failure> {
    if n != def.params.len() {
        return Err(invalid(format!(
            "{} takes {} parameters ({}), {what} has {n} entries",
            def.name,
            def.params.len(),
            def.param_names().join(", ")
        )));
    }
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn run_list(format: Format) -> Result<u8, Failure> {
    match format {
        Format::Json => print_json(&Value::Array(
            catalog()
                .iter()
                .map(|d| json!({ "name": d.name, "params": d.param_names(), "rank": d.rank }))
                .collect(),
        )),
        _ => {
            for d in catalog() {
                println!("{:<8} rank {}  ({})", d.name, d.rank, d.param_names().join(", "));
            }
        }
    }
    Ok(0)
}

fn run_describe(function: &str, format: Format) -> Result<u8, Failure> {
    let def = get_definition(function)?;
    let rules = derived(&def)?.rules.clone();
    let strings = |items: Vec<String>| Value::Array(items.into_iter().map(Value::String).collect());
    let factors: Vec<String> = def.factors.iter().map(|f| f.to_string()).collect();
    let exceptional: Vec<String> = def.exceptional.iter().map(|f| f.text.clone()).collect();
    let alternative: Option<Vec<String>> = def
        .exceptional_alternative
        .as_ref()
        .map(|v| v.iter().map(|f| f.text.clone()).collect());
    let mut locus = vec!["z1".to_string(), "z2".to_string()];
    locus.extend(def.singular_locus.iter().map(|p| p.to_string()));
    let rule_text: Vec<String> = rules.rules.iter().map(|r| r.to_string()).collect();
    let pde = def.extra_pde.as_ref().map(|p| p.to_string());
    if format == Format::Json {
        print_json(&json!({
            "name": def.name,
            "params": def.param_names(),
            "rank": def.rank,
            "factors": strings(factors),
            "exceptional": strings(exceptional),
            "exceptional_alternative": alternative.map(strings),
            "singular_locus": strings(locus),
            "rules": strings(rule_text),
            "extra_pde": pde,
            "note": def.note,
        }));
        return Ok(0);
    }
    println!("{}({})  rank {}", def.name, def.param_names().join(", "), def.rank);
    println!("series factors:");
    for f in &factors {
        println!("  {f}");
    }
    let none = |v: &[String]| if v.is_empty() { "none".to_string() } else { v.join(", ") };
    println!("exceptional when integer: {}", none(&exceptional));
    if let Some(alt) = &alternative {
        println!("alternative reading: {}", none(alt));
    }
    println!("singular locus: {}", locus.iter().map(|p| format!("{p} = 0")).collect::<Vec<_>>().join(", "));
    println!("rewrite rules:");
    for r in &rule_text {
        println!("  {r}");
    }
    if let Some(p) = &pde {
        println!("extra PDE: {p}");
    }
    if let Some(n) = &def.note {
        println!("note: {n}");
    }
    Ok(0)
}

fn render(result: &ReductionResult, format: Format) {
    match format {
        Format::Text => println!("{}", result.to_text()),
        Format::Json => print_json(&result.to_json()),
        Format::Cas => println!("{}", result.to_cas()),
    }
}

fn run_reduce(function: &str, shift: &[i64], params: Option<Vec<String>>, format: Format) -> Result<u8, Failure> {
    let def = get_definition(function)?;
    check_arity(&def, shift.len(), "--shift")?;
    let params = match params {
        Some(p) => parse_exprs(&p)?,
        None => def.params.iter().map(|p| RationalExpr::var(*p)).collect(),
    };
    check_arity(&def, params.len(), "--params")?;
    render(&reduce(&def.name, shift, &params)?, format);
    Ok(0)
}

fn complex_json(z: &Complex) -> Value {
    let (re, im) = complex_to_f64(z);
    json!({ "re": re, "im": im })
}

fn complex_text(z: &Complex) -> String {
    let (re, im) = complex_to_f64(z);
    if im == 0.0 {
        format!("{re:.17e}")
    } else {
        format!("{re:.17e} {} {:.17e}i", if im < 0.0 { '-' } else { '+' }, im.abs())
    }
}

fn run_eval(function: &str, params: &[String], z: &[String], order: usize, format: Format) -> Result<u8, Failure> {
    let def = get_definition(function)?;
    let values = parse_numbers(params, "parameter")?;
    check_arity(&def, values.len(), "--params")?;
    let point = EvalPoint { params: def.params.iter().cloned().zip(values).collect(), z: parse_z(z)? };
    let hits = def.exceptional_check(&point.params)?;
    if !hits.is_empty() {
        return Err(Error::Exceptional { function: def.name.clone(), conditions: hits }.into());
    }
    let report = eval_series(&def, &point, order)?;
    if format == Format::Json {
        print_json(&json!({
            "function": def.name,
            "order": order,
            "value": complex_json(&report.value),
            "theta1": complex_json(&report.theta1),
            "theta2": complex_json(&report.theta2),
            "theta12": complex_json(&report.theta12),
            "tail_bound": report.tail_bound,
            "converged": report.converged,
        }));
    } else {
        println!("value    {}", complex_text(&report.value));
        println!("theta1   {}", complex_text(&report.theta1));
        println!("theta2   {}", complex_text(&report.theta2));
        println!("theta12  {}", complex_text(&report.theta12));
        println!("tail     {:.2e} ({})", report.tail_bound, if report.converged { "converged" } else { "not converged" });
    }
    Ok(0)
}

struct VerifyOptions {
    points: usize,
    seed: u64,
    order: usize,
    tol: f64,
    format: Format,
}

fn run_verify(
    function: &str,
    shift: &[i64],
    params: Option<Vec<String>>,
    z: Option<Vec<String>>,
    opts: &VerifyOptions,
) -> Result<u8, Failure> {
    let def = get_definition(function)?;
    check_arity(&def, shift.len(), "--shift")?;
    let given = match params {
        Some(p) => parse_exprs(&p)?,
        None => def.params.iter().map(|p| RationalExpr::var(*p)).collect(),
    };
    check_arity(&def, given.len(), "--params")?;
    // Each position is a number (kept) or a plain symbol (sampled).
    let mut symbols: Vec<(usize, Var)> = Vec::new();
    for (k, e) in given.iter().enumerate() {
        if e.as_rational().is_some() {
            continue;
        }
        match e.vars().as_slice() {
            [v] if *e == RationalExpr::var(*v) => symbols.push((k, *v)),
            _ => return Err(invalid(format!("verify takes plain symbols or numbers, got {e}"))),
        }
    }
    let fixed_z = z.as_deref().map(parse_z).transpose()?;
    let result = reduce(&def.name, shift, &given)?;
    // With nothing left to sample, every point would be the same.
    let count = if symbols.is_empty() && fixed_z.is_some() { 1 } else { opts.points };
    let samples = sample_points(&def, count, opts.seed)?;

    let mut rows = Vec::new();
    let mut failed = false;
    for (i, sample) in samples.iter().enumerate() {
        let bindings: HashMap<Var, RBig> =
            symbols.iter().map(|(k, v)| (*v, sample.params[&def.params[*k]].clone())).collect();
        let point = EvalPoint { params: bindings, z: fixed_z.clone().unwrap_or_else(|| sample.z.clone()) };
        let v = verify_reduction(&result, &point, opts.order, opts.tol)?;
        failed |= v.status == VerifyStatus::Fail;
        let values: Vec<String> = given
            .iter()
            .map(|e| e.substitute_values(&point.params).map(|x| x.to_string()))
            .collect::<Result<_, _>>()?;
        let z_text = [&point.z[0].0, &point.z[1].0].map(|x| x.to_string());
        rows.push((i + 1, values, z_text, v));
    }

    if opts.format == Format::Json {
        print_json(&json!({
            "function": def.name,
            "shift": shift,
            "tolerance": opts.tol,
            "points": rows.iter().map(|(i, values, z, v)| json!({
                "index": i,
                "params": values,
                "z": z,
                "relative_error": v.relative_error,
                "tail_bound": v.tail_bound,
                "status": v.status.to_string(),
            })).collect::<Vec<_>>(),
        }));
    } else {
        for (i, values, z, v) in &rows {
            println!(
                "point {i}: params ({}) z ({}) relative error {:.2e} tail {:.1e}  {}",
                values.join(", "),
                z.join(", "),
                v.relative_error,
                v.tail_bound,
                v.status
            );
        }
    }
    Ok(if failed { 5 } else { 0 })
}
