//! Reports for point counts and the end-to-end theorem check.

use std::time::Instant;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{OracleError, VerifyError};
use crate::model::{QuiverModel, ReducedPresentation};
use crate::oracle::count::{count_points, count_points_stratified, CountOptions, Engine, Stratum};
use crate::oracle::field::{count_gl, multiplicative_order, ratio, render_ratio};
use crate::params::Assignment;
use crate::series::DimVector;
use crate::theorem::{effective_parameter, reduced_class, theorem_series, Branch, Family, TheoremSpec};

fn ser_ratio<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&render_ratio(r))
}

fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Renders with keys sorted, so equal reports give identical bytes.
pub fn to_sorted_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("report serializes");
    serde_json::to_string_pretty(&value).expect("json")
}

/// One variety count together with `|G_alpha|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub alpha: Vec<u32>,
    pub p: u64,
    pub params: Assignment,
    pub representation_count: u128,
    pub gl_count: u128,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: BigRational,
    pub engine: Engine,
    pub space: u128,
}

impl OracleReport {
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

#[derive(Clone, Debug)]
pub struct CountTask<'a> {
    pub presentation: &'a ReducedPresentation,
    pub alpha: Vec<u32>,
    pub p: u64,
    pub assignment: Assignment,
    pub options: CountOptions,
}

fn report(task: &CountTask, count: u128, engine: Engine, space: u128) -> Result<OracleReport, OracleError> {
    let gl = count_gl(&task.alpha, task.p)?;
    Ok(OracleReport {
        alpha: task.alpha.clone(),
        p: task.p,
        params: task.assignment.clone(),
        representation_count: count,
        gl_count: gl,
        ratio: ratio(count, gl),
        engine,
        space,
    })
}

pub fn count_representations(task: &CountTask) -> Result<OracleReport, OracleError> {
    let c = count_points(task.presentation, &task.alpha, task.p, &task.assignment, &task.options)?;
    report(task, c.count, c.engine, c.space)
}

pub fn stratified_count(task: &CountTask, strata: &[Stratum]) -> Result<OracleReport, OracleError> {
    let c = count_points_stratified(
        task.presentation,
        &task.alpha,
        task.p,
        &task.assignment,
        strata,
        &task.options,
    )?;
    report(task, c.count, c.engine, c.space)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub count: CountOptions,
    /// Series truncation; defaults to `|alpha|`.
    pub truncation: Option<u32>,
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    #[serde(serialize_with = "ser_display")]
    pub family: Family,
    #[serde(serialize_with = "ser_display")]
    pub branch: Branch,
    pub alpha: Vec<u32>,
    pub p: u64,
    pub params: Assignment,
    /// The parameter whose order selects the branch, e.g. `q` or `q^3`.
    pub parameter: Option<String>,
    /// Its value in F_p.
    pub q: Option<u32>,
    pub order_q: Option<u32>,
    pub truncation: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub predicted: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub observed: BigRational,
    pub representation_count: u128,
    pub gl_count: u128,
    pub engine: Engine,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

/// Value and multiplicative order of the family's effective parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterInfo {
    pub symbolic: Option<String>,
    pub value: Option<u32>,
    pub order: Option<u32>,
}

pub fn parameter_info(
    model: &QuiverModel,
    family: Family,
    p: u64,
    assignment: &Assignment,
) -> Result<ParameterInfo, VerifyError> {
    let eff = effective_parameter(model, family)?;
    if eff.is_trivial() {
        return Ok(ParameterInfo {
            symbolic: None,
            value: None,
            order: None,
        });
    }
    let pp = crate::oracle::field::check_prime(p)?;
    let v = eff.eval_mod(assignment, pp)?;
    if v == 0 {
        return Err(OracleError::ZeroParameter(eff.render()).into());
    }
    Ok(ParameterInfo {
        symbolic: Some(eff.render()),
        value: Some(v),
        order: Some(multiplicative_order(v as u64, p)?),
    })
}

/// Picks the family (detected unless given) and branch (from the parameter
/// order unless given) for a check at `alpha`.
pub fn resolve_spec(
    model: &QuiverModel,
    family: Option<Family>,
    branch: Option<Branch>,
    alpha: &DimVector,
    p: u64,
    assignment: &Assignment,
) -> Result<TheoremSpec, VerifyError> {
    let family = match family {
        Some(f) => f,
        None => crate::theorem::detect_family(model).ok_or_else(|| {
            VerifyError::FamilyMismatch("any".into(), "no verifiable family has this quiver and potential".into())
        })?,
    };
    let info = parameter_info(model, family, p, assignment)?;
    let branch = match branch {
        Some(b) => b,
        None => TheoremSpec::auto_branch(family, alpha, info.order.unwrap_or(u32::MAX)),
    };
    TheoremSpec::new(family, branch)
}

/// Compares the predicted class at `alpha`, specialized at `L = p`, with the
/// observed ratio `|R(alpha)(F_p)| / |G_alpha(F_p)|`.
pub fn verify_theorem(
    spec: &TheoremSpec,
    model: &QuiverModel,
    cut: &[usize],
    alpha: &DimVector,
    p: u64,
    assignment: &Assignment,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    if alpha.len() != model.vertex_count() {
        return Err(crate::error::ModelError::DimensionMismatch(alpha.len(), model.vertex_count()).into());
    }
    let info = parameter_info(model, spec.family, p, assignment)?;
    let order = info.order.unwrap_or(u32::MAX);
    if !spec.admits(alpha, order) {
        let why = match (spec.branch, info.order) {
            (Branch::RootOfUnity(r), Some(o)) => format!("branch root:{r} needs a parameter of order {r}, found {o}"),
            (Branch::RootOfUnity(r), None) => format!("branch root:{r} needs a parameter, the family has none"),
            (Branch::Generic, _) => format!(
                "order {order} is too small for the generic branch at alpha = {alpha}; use root:{order}"
            ),
        };
        return Err(VerifyError::BranchMismatch(why));
    }
    let total = alpha.total();
    let n = opts.truncation.unwrap_or(total.max(1));
    if n < total {
        return Err(VerifyError::TruncationTooLow(n, total));
    }
    let series = theorem_series(spec, n)?;
    let class = reduced_class(&series, model, cut, alpha)?;
    let predicted = class.specialize_at_prime(p)?;

    let presentation = model.reduced_presentation(cut)?;
    let task = CountTask {
        presentation: &presentation,
        alpha: alpha.0.clone(),
        p,
        assignment: assignment.clone(),
        options: opts.count,
    };
    let counted = count_representations(&task)?;
    let pass = counted.ratio == predicted;
    Ok(VerificationReport {
        family: spec.family,
        branch: spec.branch,
        alpha: alpha.0.clone(),
        p,
        params: assignment.clone(),
        parameter: info.symbolic,
        q: info.value,
        order_q: info.order,
        truncation: n,
        predicted,
        observed: counted.ratio,
        representation_count: counted.representation_count,
        gl_count: counted.gl_count,
        engine: counted.engine,
        pass,
        elapsed_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    })
}
