//! JSON input formats. Scalars are `{"re": "a/b", "im": "c/d"}` or a bare
//! string (`"3/4"`, `"2-i"`, `"i/2"`); polynomial coefficients run from the
//! constant term upwards.

use serde::{Deserialize, Serialize};

use crate::krein::{KreinSpace, Subspace};
use crate::linalg::{parse_rational, Matrix, Scalar, Vector};
use crate::poly::Poly;
use crate::ratfun::{RatFun, RationalMatrixFunction};
use crate::realization::Realization;
use crate::relation::LinearRelation;

use super::CliError;

/// Parses `a`, `bi`, `a+bi`, `a-bi` with rational `a`, `b`; `i` alone is `1i`.
pub fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty scalar".into());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Scalar::real(parse_rational(&t)?));
    };
    let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
    let (re, im) = match split {
        Some(k) if !body[..k].ends_with('/') => (&body[..k], &body[k..]),
        _ => ("0", body),
    };
    let im = match im {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        s if s.starts_with('/') => format!("1{s}"),
        s => s.strip_prefix('+').unwrap_or(s).replacen("-/", "-1/", 1),
    };
    Ok(Scalar::new(parse_rational(re)?, parse_rational(&im)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Text(String),
    Parts(Scalar),
}

impl ScalarJson {
    pub fn value(&self) -> Result<Scalar, CliError> {
        match self {
            ScalarJson::Text(s) => parse_scalar(s).map_err(CliError::Input),
            ScalarJson::Parts(z) => Ok(z.clone()),
        }
    }
}

impl From<&Scalar> for ScalarJson {
    fn from(z: &Scalar) -> Self {
        ScalarJson::Parts(z.clone())
    }
}

pub type MatrixJson = Vec<Vec<ScalarJson>>;

pub fn vector_from(v: &[ScalarJson]) -> Result<Vector, CliError> {
    v.iter().map(ScalarJson::value).collect()
}

pub fn matrix_from(m: &MatrixJson) -> Result<Matrix, CliError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(CliError::Input("ragged matrix".into()));
    }
    let vals: Vec<Vector> = m.iter().map(|r| vector_from(r)).collect::<Result<_, _>>()?;
    Ok(Matrix::from_fn(rows, cols, |i, j| vals[i][j].clone()))
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<Scalar>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub num: Vec<ScalarJson>,
    pub den: Vec<ScalarJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub size: usize,
    pub entries: Vec<Vec<EntryJson>>,
}

impl FunctionSpec {
    pub fn to_function(&self) -> Result<RationalMatrixFunction, CliError> {
        if self.entries.len() != self.size || self.entries.iter().any(|r| r.len() != self.size) {
            return Err(CliError::Input(format!("entries do not form a {0}×{0} grid", self.size)));
        }
        let poly = |c: &[ScalarJson]| vector_from(c).map(Poly::new);
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| Ok(RatFun::new(poly(&e.num)?, poly(&e.den)?)?))
                    .collect::<Result<Vec<_>, CliError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RationalMatrixFunction::new(entries)?)
    }

    /// Reduced form with monic denominators.
    pub fn from_function(q: &RationalMatrixFunction) -> FunctionSpec {
        let coeffs = |p: &Poly| p.coeffs().iter().map(ScalarJson::from).collect();
        let entries = q
            .entries()
            .iter()
            .map(|row| row.iter().map(|f| EntryJson { num: coeffs(f.num()), den: coeffs(f.den()) }).collect())
            .collect();
        FunctionSpec { size: q.size(), entries }
    }
}

/// `{"f": cols, "g": cols}`: the graph is spanned by the pairs `(f_k, g_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub f: Vec<Vec<ScalarJson>>,
    pub g: Vec<Vec<ScalarJson>>,
}

/// A self-adjoint relation in `(Cⁿ, J)`, given by a matrix `A` or by graph pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    #[serde(rename = "J")]
    pub j: MatrixJson,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixJson>,
    #[serde(rename = "A_graph", default, skip_serializing_if = "Option::is_none")]
    pub a_graph: Option<GraphJson>,
}

impl RelationJson {
    pub fn build(&self) -> Result<(KreinSpace, LinearRelation), CliError> {
        let space = KreinSpace::new(matrix_from(&self.j)?)?;
        let rel = match (&self.a, &self.a_graph) {
            (Some(a), None) => LinearRelation::graph_of(&space, &matrix_from(a)?)?,
            (None, Some(g)) => {
                if g.f.len() != g.g.len() {
                    return Err(CliError::Input("A_graph needs as many f as g vectors".into()));
                }
                let pairs = g
                    .f
                    .iter()
                    .zip(&g.g)
                    .map(|(f, g)| Ok((vector_from(f)?, vector_from(g)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                LinearRelation::from_pairs(space.clone(), space.clone(), &pairs)?
            }
            _ => return Err(CliError::Input("give exactly one of A and A_graph".into())),
        };
        Ok((space, rel))
    }
}

/// `Q(z) = C + (z − z̄₀)Γ⁺(I + (z − z₀)(A − z)⁻¹)Γ`. A missing `const`
/// defaults to `(z̄₀ − z₀)/2 · Γ⁺Γ`, the choice with zero Hermitian part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationJson {
    #[serde(flatten)]
    pub relation: RelationJson,
    #[serde(rename = "Gamma")]
    pub gamma: MatrixJson,
    pub z0: ScalarJson,
    #[serde(rename = "const", default, skip_serializing_if = "Option::is_none")]
    pub const_term: Option<MatrixJson>,
}

impl RealizationJson {
    pub fn build(&self) -> Result<Realization, CliError> {
        let (space, rel) = self.relation.build()?;
        let gamma = matrix_from(&self.gamma)?;
        let z0 = self.z0.value()?;
        let c = match &self.const_term {
            Some(c) => matrix_from(c)?,
            None => {
                let gpg = &(&gamma.adjoint() * space.gram()) * &gamma;
                gpg.scale(&((&z0.conj() - &z0) * Scalar::frac(1, 2)))
            }
        };
        Ok(Realization::new(space, rel, gamma, z0, c)?)
    }
}

/// A relation with a subspace `K₁` spanned by the listed vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJson {
    #[serde(flatten)]
    pub relation: RelationJson,
    #[serde(rename = "K1")]
    pub k1: Vec<Vec<ScalarJson>>,
}

impl ReductionJson {
    pub fn build(&self) -> Result<(LinearRelation, Subspace), CliError> {
        let (space, rel) = self.relation.build()?;
        let vs = self.k1.iter().map(|v| vector_from(v)).collect::<Result<Vec<_>, _>>()?;
        if vs.iter().any(|v| v.len() != space.dim()) {
            return Err(CliError::Input("K1 vectors have the wrong length".into()));
        }
        Ok((rel, Subspace::span(space.dim(), &vs)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop8Json {
    #[serde(rename = "A11")]
    pub a11: MatrixJson,
    pub a1: Vec<ScalarJson>,
    pub a2: Vec<ScalarJson>,
    pub alpha1: ScalarJson,
    pub alpha2: ScalarJson,
}

impl Prop8Json {
    pub fn params(&self) -> Result<crate::jordan::Prop8Params, CliError> {
        Ok(crate::jordan::Prop8Params {
            a11: matrix_from(&self.a11)?,
            a1: vector_from(&self.a1)?,
            a2: vector_from(&self.a2)?,
            alpha1: self.alpha1.value()?,
            alpha2: self.alpha2.value()?,
        })
    }
}
