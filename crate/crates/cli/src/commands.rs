use std::path::Path;

use mdt_core::corpus::{corpus_text, cyclic_model_text, CyclicLayout};
use mdt_core::dsl::render_potential;
use mdt_core::oracle::{count_gl, parameter_info, stratified_count, Constraint, Stratum};
use mdt_core::theorem::effective_parameter;
use mdt_core::{
    count_representations, detect_family, parse_model, resolve_spec, theorem_series, verify_theorem, Assignment,
    Branch, CountOptions, CountTask, CutCheck, DimVector, ModelError, OracleError, ParseError, QuiverModel,
    ReducedPresentation, Series, SeriesError, TheoremSpec, VerifyError, VerifyOptions,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::output::{self, Format};
use crate::{
    BranchChoice, Command, CountArgs, Counting, FactorArgs, GenArgs, ParseArgs, SeriesArgs, Targets, VerifyArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Oracle(OracleError::SearchSpaceTooLarge { .. })
            | CliError::Verify(VerifyError::Oracle(OracleError::SearchSpaceTooLarge { .. })) => 3,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Runs one subcommand; `Ok(false)` means a check failed.
pub fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Parse(a) => parse(a),
        Command::Series(a) => series(a),
        Command::OracleCount(a) => oracle_count(a),
        Command::Verify(a) => verify(a),
        Command::FactorizationCheck(a) => factorization(a),
        Command::GenCyclic(a) => gen_cyclic(a),
    }
}

fn load_model(path: &Path) -> Result<QuiverModel> {
    let shown = path.display().to_string();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            match corpus_text(name) {
                Some(t) if !path.exists() => t.to_string(),
                _ => return Err(CliError::Io { path: shown, source: e }),
            }
        }
    };
    parse_model(&text).map_err(|source| CliError::Parse { path: shown, source })
}

fn assignment(set: &[(String, u64)]) -> Assignment {
    set.iter().cloned().collect()
}

fn count_options(c: &Counting) -> CountOptions {
    CountOptions {
        cap: c.cap,
        jobs: c.jobs as usize,
        engine: c.engine,
    }
}

fn alphas(model: &QuiverModel, t: &Targets) -> Result<Vec<DimVector>> {
    let k = model.vertex_count();
    let list: Vec<DimVector> = match t.degree {
        Some(n) => DimVector::all_up_to(k, n).into_iter().filter(|a| !a.is_zero()).collect(),
        None => t.alphas.iter().cloned().map(DimVector).collect(),
    };
    if list.is_empty() {
        return Err(CliError::Usage("give --alpha or --degree".into()));
    }
    for a in &list {
        if a.len() != k {
            return Err(ModelError::DimensionMismatch(a.len(), k).into());
        }
    }
    Ok(list)
}

fn emit(s: &str) {
    print!("{s}");
}

fn parse(a: ParseArgs) -> Result<bool> {
    let m = load_model(&a.model.model)?;
    let vname = |i: usize| m.vertices[i].clone();
    let arrows: Vec<Value> = m
        .arrows
        .iter()
        .map(|x| json!({"name": x.name, "source": vname(x.source), "target": vname(x.target)}))
        .collect();
    let mut doc = json!({
        "vertices": m.vertices,
        "arrows": arrows,
        "params": m.params,
        "potential": render_potential(&m),
        "family": detect_family(&m).map(|f| f.to_string()),
    });
    let mut valid = true;
    if let Some(cut) = &m.cut {
        let names: Vec<&str> = cut.iter().map(|&i| m.arrows[i].name.as_str()).collect();
        doc["cut"] = json!(names);
        match m.validate_cut(cut) {
            CutCheck::Valid => {
                let pres = m.reduced_presentation(cut)?;
                doc["cut_valid"] = json!(true);
                doc["relations"] = json!(pres.render_relations());
            }
            CutCheck::Invalid(why) => {
                valid = false;
                doc["cut_valid"] = json!(false);
                doc["cut_error"] = json!(why);
            }
        }
    }
    if let Some(f) = detect_family(&m) {
        if let Ok(e) = effective_parameter(&m, f) {
            if !e.is_trivial() {
                doc["effective_parameter"] = json!(e.render());
            }
        }
    }
    match a.format.format {
        Format::Json => emit(&output::json(&doc)),
        Format::Csv => emit(&output::csv(&[doc])),
        Format::Table => {
            let mut rows = Vec::new();
            for key in ["vertices", "arrows", "params", "potential", "family", "effective_parameter", "cut", "cut_valid", "cut_error"] {
                if let Some(v) = doc.get(key) {
                    let text = match (key, v) {
                        ("arrows", Value::Array(xs)) => xs
                            .iter()
                            .map(|x| format!("{}: {} -> {}", output::cell(&x["name"]), output::cell(&x["source"]), output::cell(&x["target"])))
                            .collect::<Vec<_>>()
                            .join(", "),
                        _ => output::cell(v),
                    };
                    rows.push(vec![key.to_string(), text]);
                }
            }
            if let Some(Value::Array(rels)) = doc.get("relations") {
                for r in rels {
                    rows.push(vec!["relation".into(), output::cell(r)]);
                }
            }
            emit(&output::table(&["field", "value"], &rows));
        }
    }
    Ok(valid)
}

fn series(a: SeriesArgs) -> Result<bool> {
    let model = a.model.model.as_deref().map(load_model).transpose()?;
    let family = match (a.family, &model) {
        (Some(f), _) => f,
        (None, Some(m)) => detect_family(m)
            .ok_or_else(|| CliError::Usage("the model matches no known family; pass --family".into()))?,
        (None, None) => unreachable!("clap requires --model or --family"),
    };
    let branch = match a.branch {
        BranchChoice::Fixed(b) => b,
        BranchChoice::Auto => {
            let (Some(m), Some(p)) = (&model, a.prime) else {
                return Err(CliError::Usage("--branch auto needs --model, --prime and --set".into()));
            };
            let info = parameter_info(m, family, p, &assignment(&a.params.set))?;
            let generic = TheoremSpec::new(family, Branch::Generic)?;
            match (info.order, generic.correction_period()) {
                (Some(r), Some(b)) if b.scaled(r).total() <= a.truncate => Branch::RootOfUnity(r),
                _ => Branch::Generic,
            }
        }
    };
    let spec = TheoremSpec::new(family, branch)?;
    let s = theorem_series(&spec, a.truncate)?;
    match a.format.format {
        Format::Json => emit(&format!("{}\n", s.to_json())),
        Format::Table => emit(&s.to_table()),
        Format::Csv => {
            let rows: Vec<Value> = s.iter().map(|(alpha, c)| json!({"alpha": alpha.0, "value": c.to_string()})).collect();
            emit(&output::csv(&rows));
        }
    }
    Ok(true)
}

fn reduced(m: &QuiverModel) -> Result<ReducedPresentation> {
    let cut = m.declared_cut()?.to_vec();
    Ok(m.reduced_presentation(&cut)?)
}

fn oracle_count(a: CountArgs) -> Result<bool> {
    let m = load_model(&a.model.model)?;
    let pres = reduced(&m)?;
    let params = assignment(&a.params.set);
    let mut reports = Vec::new();
    for &p in &a.targets.primes {
        for alpha in alphas(&m, &a.targets)? {
            let task = CountTask {
                presentation: &pres,
                alpha: alpha.0,
                p,
                assignment: params.clone(),
                options: count_options(&a.counting),
            };
            let r = count_representations(&task)?;
            reports.push(serde_json::to_value(&r).expect("report"));
        }
    }
    match a.format.format {
        Format::Json => emit(&output::json(&json!({ "reports": reports }))),
        Format::Csv => emit(&output::csv(&reports)),
        Format::Table => emit(&output::table_from(
            &["alpha", "p", "params", "representation_count", "gl_count", "ratio", "engine"],
            &reports,
        )),
    }
    Ok(true)
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let m = load_model(&a.model.model)?;
    let cut = m.declared_cut()?.to_vec();
    let params = assignment(&a.params.set);
    let opts = VerifyOptions {
        count: count_options(&a.counting),
        truncation: a.truncate,
        timing: a.timing,
    };
    let fixed = match a.branch {
        BranchChoice::Auto => None,
        BranchChoice::Fixed(b) => Some(b),
    };
    let mut reports = Vec::new();
    let mut pass = true;
    for &p in &a.targets.primes {
        for alpha in alphas(&m, &a.targets)? {
            let spec = resolve_spec(&m, a.family, fixed, &alpha, p, &params)?;
            let r = verify_theorem(&spec, &m, &cut, &alpha, p, &params, &opts)?;
            pass &= r.pass;
            reports.push(serde_json::to_value(&r).expect("report"));
        }
    }
    match a.format.format {
        Format::Json => emit(&output::json(&json!({ "pass": pass, "reports": reports }))),
        Format::Csv => emit(&output::csv(&reports)),
        Format::Table => emit(&output::table_from(
            &["family", "branch", "alpha", "p", "parameter", "q", "order_q", "predicted", "observed", "pass"],
            &reports,
        )),
    }
    Ok(pass)
}

/// Block endomorphisms named by `--split`, or each arrow of a one-vertex
/// quiver with two arrows.
fn splits(pres: &ReducedPresentation, given: &[String]) -> Result<Vec<(String, Vec<usize>)>> {
    let q = &pres.quiver;
    if given.is_empty() {
        if q.vertex_count() == 1 && q.arrows.len() == 2 {
            return Ok(q.arrows.iter().enumerate().map(|(i, a)| (a.name.clone(), vec![i])).collect());
        }
        return Err(CliError::Usage("give --split for quivers other than one vertex with two arrows".into()));
    }
    given
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.split(',').map(str::trim).collect();
            Ok((names.join("+"), q.arrow_indices(&names)?))
        })
        .collect()
}

fn ratio_series(counts: &[(DimVector, u128)], vars: usize, n: u32, p: u64) -> Result<Series<BigRational>> {
    let mut s = Series::<BigRational>::one(vars, n);
    for (alpha, c) in counts {
        let gl = count_gl(&alpha.0, p)?;
        s.insert(alpha.clone(), BigRational::new(BigInt::from(*c), BigInt::from(gl)));
    }
    Ok(s)
}

fn constraint_name(c: Constraint) -> &'static str {
    match c {
        Constraint::Invertible => "invertible",
        Constraint::Nilpotent => "nilpotent",
        Constraint::Any => "any",
    }
}

fn factorization(a: FactorArgs) -> Result<bool> {
    let m = load_model(&a.model.model)?;
    let pres = reduced(&m)?;
    let blocks = splits(&pres, &a.splits)?;
    let vars = m.vertex_count();
    let dims: Vec<DimVector> = DimVector::all_up_to(vars, a.degree).into_iter().filter(|d| !d.is_zero()).collect();
    let strata: Vec<Vec<Constraint>> = (0..1usize << blocks.len())
        .map(|mask| {
            (0..blocks.len())
                .map(|i| if mask >> i & 1 == 0 { Constraint::Invertible } else { Constraint::Nilpotent })
                .collect()
        })
        .collect();
    let label = |s: &[Constraint]| -> String {
        blocks
            .iter()
            .zip(s)
            .map(|((name, _), c)| format!("{name}:{}", constraint_name(*c)))
            .collect::<Vec<_>>()
            .join(",")
    };
    let opts = count_options(&a.counting);
    let mut rows = Vec::new();
    let mut nil_checks = Vec::new();
    let mut pass = true;
    for &p in &a.primes {
        let assignments: Vec<Assignment> = if a.all_q {
            if m.params.len() != 1 {
                return Err(CliError::Usage("--all-q needs a model with exactly one parameter".into()));
            }
            (1..p).map(|v| [(m.params[0].clone(), v)].into_iter().collect()).collect()
        } else {
            vec![assignment(&a.params.set)]
        };
        // stratum label -> per-assignment counts, for the nilpotent comparison
        let mut by_stratum: Vec<Vec<Vec<u128>>> = vec![Vec::new(); strata.len()];
        for params in &assignments {
            let mut total = Vec::new();
            let mut per_stratum: Vec<Vec<(DimVector, u128)>> = vec![Vec::new(); strata.len()];
            for alpha in &dims {
                let task = CountTask {
                    presentation: &pres,
                    alpha: alpha.0.clone(),
                    p,
                    assignment: params.clone(),
                    options: opts,
                };
                total.push((alpha.clone(), count_representations(&task)?.representation_count));
                for (k, s) in strata.iter().enumerate() {
                    let st: Vec<Stratum> = blocks
                        .iter()
                        .zip(s)
                        .map(|((_, arrows), c)| Stratum {
                            arrows: arrows.clone(),
                            constraint: *c,
                        })
                        .collect();
                    let c = stratified_count(&task, &st)?.representation_count;
                    per_stratum[k].push((alpha.clone(), c));
                }
            }
            let mut product = Series::<BigRational>::one(vars, a.degree);
            for s in &per_stratum {
                product = product.mul(&ratio_series(s, vars, a.degree, p)?)?;
            }
            let matches = product == ratio_series(&total, vars, a.degree, p)?;
            pass &= matches;
            let strata_json: Vec<Value> = strata
                .iter()
                .zip(&per_stratum)
                .map(|(s, counts)| {
                    json!({
                        "stratum": label(s),
                        "counts": counts.iter().map(|(d, c)| json!({"alpha": d.0, "count": c})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            rows.push(json!({
                "p": p,
                "params": params,
                "total": total.iter().map(|(d, c)| json!({"alpha": d.0, "count": c})).collect::<Vec<_>>(),
                "strata": strata_json,
                "product_matches": matches,
            }));
            for (k, s) in per_stratum.into_iter().enumerate() {
                by_stratum[k].push(s.into_iter().map(|(_, c)| c).collect());
            }
        }
        if a.all_q {
            for (k, s) in strata.iter().enumerate() {
                if !s.contains(&Constraint::Nilpotent) {
                    continue;
                }
                let same = by_stratum[k].windows(2).all(|w| w[0] == w[1]);
                pass &= same;
                nil_checks.push(json!({"p": p, "stratum": label(s), "independent_of_parameter": same}));
            }
        }
    }
    let doc = json!({"pass": pass, "runs": rows, "nilpotent_strata": nil_checks});
    match a.format.format {
        Format::Json => emit(&output::json(&doc)),
        Format::Csv => {
            let flat: Vec<Value> = rows
                .iter()
                .map(|r| json!({"p": r["p"], "params": r["params"], "product_matches": r["product_matches"]}))
                .collect();
            emit(&output::csv(&flat));
        }
        Format::Table => {
            let mut body = Vec::new();
            for r in &rows {
                for s in r["strata"].as_array().into_iter().flatten() {
                    let counts: Vec<String> = s["counts"]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .map(|c| format!("{}:{}", output::cell(&c["alpha"]), c["count"]))
                        .collect();
                    body.push(vec![
                        output::cell(&r["p"]),
                        output::cell(&r["params"]),
                        output::cell(&s["stratum"]),
                        counts.join(" "),
                        output::cell(&r["product_matches"]),
                    ]);
                }
            }
            emit(&output::table(&["p", "params", "stratum", "counts", "product_matches"], &body));
            for c in &nil_checks {
                emit(&format!(
                    "p={} {} independent of parameter: {}\n",
                    c["p"],
                    output::cell(&c["stratum"]),
                    c["independent_of_parameter"]
                ));
            }
        }
    }
    Ok(pass)
}

fn gen_cyclic(a: GenArgs) -> Result<bool> {
    let layout = match a.layout.as_str() {
        "uniform" => CyclicLayout::Uniform,
        "single" => CyclicLayout::Single,
        other => return Err(CliError::Usage(format!("unknown layout '{other}' (expected uniform or single)"))),
    };
    let text = cyclic_model_text(a.n as usize, layout);
    match a.out {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => emit(&text),
    }
    Ok(true)
}
