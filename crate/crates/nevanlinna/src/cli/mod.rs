//! Command implementations behind the `nevan` binary. Each returns a JSON
//! report and a short text summary; failures carry their exit code.

pub mod schema;

use serde::Serialize;
use serde_json::{json, Value};

use crate::jordan::{self, JordanError, PartRole};
use crate::krein::KreinError;
use crate::linalg::{hermitian_signature, Matrix, Scalar};
use crate::ratfun::{negative_squares_lower_bound, RatFunError, RationalMatrixFunction, SamplePlan};
use crate::realization::{canonical_model, ModelBudget, Realization, RealizationError};
use crate::relation::{check_reduction, LinearRelation, RelationError};
use crate::sumcriteria::{self, ScanStrategy, SumError};
use crate::krein::Subspace;

use schema::{matrix_rows, FunctionSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("cross-check disagreement")]
    Disagreement(Box<Report>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) | CliError::Domain(_) => 2,
            CliError::Disagreement(_) => 3,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}
domain_from!(RatFunError, KreinError, RelationError, RealizationError, SumError, JordanError);

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub json: Value,
    #[serde(skip)]
    pub summary: String,
}

impl Report {
    fn new(json: Value, summary: String) -> Report {
        Report { json, summary }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn decimal(z: &Scalar) -> String {
    let (re, im) = z.to_f64();
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re}{:+}i", im)
    }
}

pub fn eval(q: &RationalMatrixFunction, z: &Scalar, with_decimal: bool) -> Result<Report, CliError> {
    let m = q.eval(z)?;
    let rows = matrix_rows(&m);
    let mut json = json!({ "at": z, "value": rows });
    if with_decimal {
        let dec: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(decimal).collect()).collect();
        json["decimal_non_authoritative"] = to_value(&dec);
    }
    let text: Vec<String> = rows.iter().map(|r| r.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", ")).collect();
    Ok(Report::new(json, format!("Q({z}) = [{}]", text.join("; "))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaMethod {
    Sample,
    Model,
    Both,
}

pub fn kappa(q: &RationalMatrixFunction, method: KappaMethod) -> Result<Report, CliError> {
    let mut json = json!({});
    let mut lines = Vec::new();
    let mut bound = None;
    let mut exact = None;
    if method != KappaMethod::Model {
        let plan = SamplePlan::default_for(q);
        let b = negative_squares_lower_bound(q, &plan)?;
        json["sample_lower_bound"] = json!(b);
        json["sample_points"] = to_value(&plan.points);
        lines.push(format!("sampled lower bound: {b}"));
        bound = Some(b);
    }
    if method != KappaMethod::Sample {
        let r = canonical_model(q, &ModelBudget::default())?;
        json["kappa"] = json!(r.kappa());
        json["model_dim"] = json!(r.dim());
        lines.push(format!("κ = {} (minimal model of dimension {})", r.kappa(), r.dim()));
        exact = Some(r.kappa());
    }
    if let (Some(b), Some(k)) = (bound, exact) {
        json["agree"] = json!(b == k);
        if b > k {
            json["violation"] = json!("sampled bound exceeds κ");
            return Err(CliError::Disagreement(Box::new(Report::new(json, lines.join("\n")))));
        }
    }
    Ok(Report::new(json, lines.join("\n")))
}

pub fn sum_analyze(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    scan: Option<&ScanStrategy>,
) -> Result<Report, CliError> {
    let v = sumcriteria::theorem8_verdict_with(q1, q2, scan)?;
    let summary = format!(
        "κ₁ = {}, κ₂ = {}, κ = {}; preserved = {}; minimal = {}; dim L₀ = {}; case {}; routes agree = {}",
        v.kappa1,
        v.kappa2,
        v.kappa,
        v.preserved,
        v.minimal_36,
        v.dim_l0,
        v.structure_case.label(),
        v.cross_check.agree
    );
    let report = Report::new(to_value(&v), summary);
    if !v.cross_check.agree {
        return Err(CliError::Disagreement(Box::new(report)));
    }
    Ok(report)
}

pub fn reduce_check(a: &LinearRelation, k1: &Subspace) -> Result<Report, CliError> {
    let r = check_reduction(a, k1)?;
    let failed: Vec<&String> = r.clauses.iter().filter(|(_, c)| c.applicable && !c.holds).map(|(k, _)| k).collect();
    let summary = format!(
        "reduced = {}; {} clauses checked, failing: {}",
        r.reduced,
        r.clauses.len(),
        if failed.is_empty() { "none".to_string() } else { failed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ") }
    );
    Ok(Report::new(to_value(&r), summary))
}

pub fn decompose(r: &Realization, alpha: &Scalar) -> Result<Report, CliError> {
    let d = jordan::prop6_decompose(r, alpha)?;
    let mut parts = Vec::new();
    for p in &d.parts {
        let tf = p.realization.transfer_function()?;
        parts.push(json!({
            "role": p.role,
            "dim": p.subspace.dim(),
            "kappa": p.kappa,
            "basis": p.subspace.basis(),
            "transfer_function": FunctionSpec::from_function(&tf),
        }));
    }
    let kappa_sum: usize = d.parts.iter().map(|p| p.kappa).sum();
    let degenerate: Vec<Value> = d
        .degenerate_chains
        .iter()
        .map(|(c, at)| json!({ "vectors": c.vectors, "part": at }))
        .collect();
    let json = json!({
        "alpha": alpha,
        "r": d.r,
        "kappa": r.kappa(),
        "kappa_sum": kappa_sum,
        "additive": kappa_sum == r.kappa(),
        "parts": parts,
        "degenerate_chains": degenerate,
        "other_eigenvalues": d.other_eigenvalues,
    });
    let roles: Vec<String> = d
        .parts
        .iter()
        .map(|p| {
            let name = match p.role {
                PartRole::Positive => "K0".to_string(),
                PartRole::Chain { length } => format!("chain({length})"),
                PartRole::Remainder => "remainder".to_string(),
            };
            format!("{name}: dim {}, κ {}", p.subspace.dim(), p.kappa)
        })
        .collect();
    let summary = format!("r = {}; {}; κ = {} = Σκ_i = {}", d.r, roles.join("; "), r.kappa(), kappa_sum);
    Ok(Report::new(json, summary))
}

/// `A11 = [[0,1],[1,0]]`, `a₁ = e₁`, `a₂ = e₂`, `α₁ = α₂ = 1`.
pub fn default_prop8_params() -> jordan::Prop8Params {
    jordan::Prop8Params {
        a11: Matrix::from_fn(2, 2, |i, j| if i != j { Scalar::one() } else { Scalar::zero() }),
        a1: crate::linalg::unit_vector(2, 0),
        a2: crate::linalg::unit_vector(2, 1),
        alpha1: Scalar::one(),
        alpha2: Scalar::one(),
    }
}

pub fn prop8(params: jordan::Prop8Params) -> Result<Report, CliError> {
    let m = jordan::build_prop8(params)?;
    let sep = jordan::prop8_separation_test(&m);
    let chains = jordan::chains_at(&m.relation, &Scalar::zero())?;
    let json = json!({
        "dim": m.space.dim(),
        "clauses": m.clauses,
        "chains_at_zero": chains.iter().map(|c| c.len()).collect::<Vec<_>>(),
        "separation": sep,
    });
    let summary = format!(
        "clauses (i)/(ii) hold = {}; a2 cyclic = {}; separation possible = {}",
        m.clauses.all(),
        sep.a2_cyclic,
        sep.separation_possible
    );
    Ok(Report::new(json, summary))
}

pub fn kersym(q: &RationalMatrixFunction) -> Result<Report, CliError> {
    let dirs = sumcriteria::singular_directions(q);
    let plan = SamplePlan::default_for(q);
    let sig = hermitian_signature(&q.gram_matrix(&plan.pairs())?).expect("Gram matrices are Hermitian");
    let model = canonical_model(q, &ModelBudget::default())?;
    let json = json!({
        "singular_directions": dirs,
        "kernel_signature": sig,
        "sample_points": plan.points,
        "kappa": model.kappa(),
    });
    let shown: Vec<String> = dirs
        .iter()
        .map(|v| format!("({})", v.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    let summary = format!(
        "singular directions: {}; kernel signature (+{}, 0:{}, −{}); κ = {}",
        if shown.is_empty() { "none".into() } else { shown.join(", ") },
        sig.plus,
        sig.zero,
        sig.minus,
        model.kappa()
    );
    Ok(Report::new(json, summary))
}
