//! Jordan chains of a self-adjoint operator at a real eigenvalue, the
//! decomposition of a realization along non-degenerate chains, and a model
//! with two neutral eigenvectors that cannot be separated.

use serde::Serialize;

use crate::krein::{KreinError, KreinSpace, Subspace};
use crate::linalg::{congruence_diagonalize, dot, vec_is_zero, Matrix, Scalar, Vector};
use crate::realization::{Realization, RealizationError};
use crate::relation::{LinearRelation, RelationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JordanError {
    #[error("{0} is not an eigenvalue")]
    NotAnEigenvalue(Scalar),
    #[error("{0} is not real")]
    NotReal(Scalar),
    #[error("the relation is not an everywhere defined operator")]
    NotAnOperator,
    #[error("candidate subspace is degenerate; isotropic witness {witness:?}")]
    DegenerateCandidate { witness: Vector },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Krein(#[from] KreinError),
}

/// `(A − α)x₀ = 0`, `(A − α)x_k = x_{k−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanChain {
    pub eigenvalue: Scalar,
    pub vectors: Vec<Vector>,
    #[serde(skip)]
    pub span: Subspace,
    /// `(A − α)x = x_{l−1}` has no solution.
    pub maximal: bool,
}

impl JordanChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn from_head(n_mat: &Matrix, alpha: &Scalar, head: Vector, len: usize) -> JordanChain {
        let mut vectors = vec![head];
        for _ in 1..len {
            let next = n_mat.mul_vec(vectors.last().unwrap());
            vectors.push(next);
        }
        vectors.reverse();
        let n = n_mat.rows();
        let maximal = n_mat.solve_vec(vectors.last().unwrap()).is_none();
        JordanChain { eigenvalue: alpha.clone(), span: Subspace::span(n, &vectors), vectors, maximal }
    }
}

fn shifted(a: &LinearRelation, alpha: &Scalar) -> Result<Matrix, JordanError> {
    if !alpha.is_real() {
        return Err(JordanError::NotReal(alpha.clone()));
    }
    let m = a.as_matrix().ok_or(JordanError::NotAnOperator)?;
    Ok(&m - &Matrix::identity(m.rows()).scale(alpha))
}

/// `ker N^j ∩ V` for `j = 0, 1, …` until it stabilizes.
fn levels(n_mat: &Matrix, v: &Subspace) -> Vec<Subspace> {
    let n = n_mat.rows();
    let mut out = vec![Subspace::zero(n)];
    let mut power = Matrix::identity(n);
    loop {
        power = &power * n_mat;
        let k = Subspace::span(n, &power.kernel_basis()).intersect(v);
        if k.dim() == out.last().unwrap().dim() {
            return out;
        }
        out.push(k);
    }
}

/// Heads of the chains of length `j`: a complement of `K_{j−1} + N K_{j+1}`
/// in `K_j`, taken greedily from the echelon basis.
fn heads(n_mat: &Matrix, lv: &[Subspace], j: usize) -> Vec<Vector> {
    let upper = lv.get(j + 1).unwrap_or(&lv[j]);
    let w = lv[j - 1].join(&upper.image(n_mat));
    w.complement_in(&lv[j])
}

fn chains_in(n_mat: &Matrix, alpha: &Scalar, v: &Subspace) -> Vec<JordanChain> {
    let lv = levels(n_mat, v);
    let mut out = Vec::new();
    for j in (1..lv.len()).rev() {
        for h in heads(n_mat, &lv, j) {
            out.push(JordanChain::from_head(n_mat, alpha, h, j));
        }
    }
    out
}

/// A Jordan basis of the root subspace at `α`, longest chains first.
pub fn chains_at(a: &LinearRelation, alpha: &Scalar) -> Result<Vec<JordanChain>, JordanError> {
    let n_mat = shifted(a, alpha)?;
    let full = Subspace::full(n_mat.rows());
    let chains = chains_in(&n_mat, alpha, &full);
    if chains.is_empty() {
        return Err(JordanError::NotAnEigenvalue(alpha.clone()));
    }
    Ok(chains)
}

pub fn chain_is_degenerate(c: &JordanChain, space: &KreinSpace) -> bool {
    !space.is_nondegenerate(&c.span)
}

/// `[N^{j−1}y, x]` on the heads of length-`j` chains, with a head whose
/// chain has non-degenerate span when the form does not vanish.
fn nondegenerate_head(space: &KreinSpace, n_mat: &Matrix, hs: &[Vector], j: usize) -> Option<Vector> {
    if hs.is_empty() {
        return None;
    }
    let mut np = Matrix::identity(n_mat.rows());
    for _ in 1..j {
        np = &np * n_mat;
    }
    let images: Vec<Vector> = hs.iter().map(|h| np.mul_vec(h)).collect();
    let phi = Matrix::from_fn(hs.len(), hs.len(), |a, b| space.ip(&images[b], &hs[a]));
    let c = congruence_diagonalize(&phi).expect("the chain form is Hermitian");
    let k = c.diagonal.iter().position(|d| !d.is_zero())?;
    let basis = Matrix::from_columns(n_mat.rows(), hs);
    Some(basis.mul_vec(&c.transform.col(k)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "role")]
pub enum PartRole {
    /// Positive eigenvectors at `α` from chains of length one.
    Positive,
    /// Span of one maximal non-degenerate chain.
    Chain { length: usize },
    /// J-orthogonal remainder.
    Remainder,
}

#[derive(Clone, Debug)]
pub struct Prop6Part {
    pub role: PartRole,
    pub subspace: Subspace,
    pub realization: Realization,
    pub kappa: usize,
}

#[derive(Clone, Debug)]
pub struct Prop6Decomposition {
    pub alpha: Scalar,
    /// Number of non-degenerate chain blocks.
    pub r: usize,
    pub parts: Vec<Prop6Part>,
    /// Canonical chains of the whole space whose span is degenerate, with
    /// the index of the part containing each (`None` when spread over several).
    pub degenerate_chains: Vec<(JordanChain, Option<usize>)>,
    /// Eigenvalues of `A` other than `α`.
    pub other_eigenvalues: Vec<Scalar>,
}

impl Prop6Decomposition {
    pub fn realizations(&self) -> Vec<&Realization> {
        self.parts.iter().map(|p| &p.realization).collect()
    }

    pub fn part_dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.subspace.dim()).collect()
    }
}

/// `K = K₀ [+] K₁ [+] … [+] K_r [+] K_{r+1}` at the real eigenvalue `α`,
/// with the corresponding sub-realizations of `R`.
pub fn prop6_decompose(r: &Realization, alpha: &Scalar) -> Result<Prop6Decomposition, JordanError> {
    let space = r.space();
    let n = r.dim();
    let a_mat = r.relation().as_matrix().ok_or(JordanError::NotAnOperator)?;
    let n_mat = shifted(r.relation(), alpha)?;
    let full = Subspace::full(n);
    let lv = levels(&n_mat, &full);
    if lv.len() < 2 {
        return Err(JordanError::NotAnEigenvalue(alpha.clone()));
    }

    let simple = heads(&n_mat, &lv, 1);
    let mut positive = Vec::new();
    if !simple.is_empty() {
        let c = congruence_diagonalize(&space.gram_of_vectors(&simple)).expect("Gram is Hermitian");
        let basis = Matrix::from_columns(n, &simple);
        for (k, d) in c.diagonal.iter().enumerate() {
            if d.real_sign().is_gt() {
                positive.push(basis.mul_vec(&c.transform.col(k)));
            }
        }
    }
    let k0 = Subspace::span(n, &positive);
    let mut rest = space.ortho_complement(&k0);
    let mut blocks: Vec<(PartRole, Subspace)> = Vec::new();
    if !k0.is_zero() {
        blocks.push((PartRole::Positive, k0));
    }
    'outer: loop {
        let lv = levels(&n_mat, &rest);
        for j in (1..lv.len()).rev() {
            if let Some(h) = nondegenerate_head(space, &n_mat, &heads(&n_mat, &lv, j), j) {
                let chain = JordanChain::from_head(&n_mat, alpha, h, j);
                if chain_is_degenerate(&chain, space) {
                    let witness = space.isotropic_part(&chain.span).basis()[0].clone();
                    return Err(JordanError::DegenerateCandidate { witness });
                }
                rest = rest.intersect(&space.ortho_complement(&chain.span));
                blocks.push((PartRole::Chain { length: j }, chain.span));
                continue 'outer;
            }
        }
        break;
    }
    let nchains = blocks.iter().filter(|(role, _)| matches!(role, PartRole::Chain { .. })).count();
    if !rest.is_zero() {
        if !space.is_nondegenerate(&rest) {
            let witness = space.isotropic_part(&rest).basis()[0].clone();
            return Err(JordanError::DegenerateCandidate { witness });
        }
        blocks.push((PartRole::Remainder, rest));
    }

    for (i, (_, s)) in blocks.iter().enumerate() {
        if !s.contains_subspace(&s.image(&a_mat)) {
            return Err(JordanError::VerificationFailed(format!("part {i} is not A-invariant")));
        }
        for (_, t) in &blocks[i + 1..] {
            let cross = Matrix::from_fn(s.dim(), t.dim(), |x, y| space.ip(&t.basis()[y], &s.basis()[x]));
            if !cross.is_zero() {
                return Err(JordanError::VerificationFailed(format!("part {i} is not J-orthogonal to a later part")));
            }
        }
    }
    if blocks.iter().map(|(_, s)| s.dim()).sum::<usize>() != n {
        return Err(JordanError::VerificationFailed("parts do not span K".into()));
    }

    let m = blocks.len();
    let c = r.const_term();
    let herm = (c + &c.adjoint()).scale(&Scalar::frac(1, 2));
    let skew = (&r.z0().conj() - r.z0()) * Scalar::frac(1, 2);
    let mut parts = Vec::new();
    for (role, s) in blocks {
        let basis = s.basis_matrix();
        let gram = space.gram_of(&s);
        let ginv = gram.inverse().expect("part is non-degenerate");
        let proj = &(&ginv * &basis.adjoint()) * space.gram();
        let gamma = &proj * r.gamma();
        let a_i = &(&proj * &a_mat) * &basis;
        let sub = KreinSpace::new(gram.clone())?;
        let gpg = &(&gamma.adjoint() * &gram) * &gamma;
        let const_i = &herm.scale(&Scalar::frac(1, m as i64)) + &gpg.scale(&skew);
        let rel = LinearRelation::graph_of(&sub, &a_i)?;
        let kappa = sub.neg_index();
        let realization = Realization::new(sub, rel, gamma, r.z0().clone(), const_i)?;
        parts.push(Prop6Part { role, subspace: s, realization, kappa });
    }

    let total = parts.iter().try_fold(None::<crate::ratfun::RationalMatrixFunction>, |acc, p| {
        let tf = p.realization.transfer_function()?;
        Ok::<_, RealizationError>(Some(match acc {
            None => tf,
            Some(s) => s.add(&tf).map_err(RealizationError::from)?,
        }))
    })?;
    let whole = r.transfer_function()?;
    if total.as_ref().is_some_and(|t| *t != whole) {
        return Err(JordanError::VerificationFailed("Σ Q_i differs from Q".into()));
    }
    if parts.iter().map(|p| p.kappa).sum::<usize>() != space.neg_index() {
        return Err(JordanError::VerificationFailed("negative indices do not add up".into()));
    }

    let degenerate_chains = chains_in(&n_mat, alpha, &full)
        .into_iter()
        .filter(|c| chain_is_degenerate(c, space))
        .map(|c| {
            let at = parts.iter().position(|p| p.subspace.contains_subspace(&c.span));
            (c, at)
        })
        .collect();
    let other_eigenvalues = r
        .relation()
        .finite_eigenvalues()
        .exact
        .into_iter()
        .map(|e| e.value)
        .filter(|v| v != alpha)
        .collect();
    Ok(Prop6Decomposition { alpha: alpha.clone(), r: nchains, parts, degenerate_chains, other_eigenvalues })
}

/// Smallest `A`-invariant subspace containing `seed`.
pub fn invariant_closure(a: &LinearRelation, seed: &[Vector]) -> Subspace {
    let n = a.domain_space().dim();
    let mut s = Subspace::span(n, seed);
    loop {
        let next = s.join(&a.image_of(&s));
        if next.dim() == s.dim() {
            return next;
        }
        s = next;
    }
}

/// Inputs of the two-neutral-eigenvector model on `H ⊕ C⁴`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop8Params {
    pub a11: Matrix,
    pub a1: Vector,
    pub a2: Vector,
    pub alpha1: Scalar,
    pub alpha2: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop8Clauses {
    pub self_adjoint: bool,
    pub eigenvectors: bool,
    pub neutral: bool,
    pub f_is_jx0: bool,
    /// Each `x₀ⁱ` starts a chain of length one.
    pub simple: [bool; 2],
}

impl Prop8Clauses {
    pub fn all(&self) -> bool {
        self.self_adjoint && self.eigenvectors && self.neutral && self.f_is_jx0 && self.simple.iter().all(|&b| b)
    }
}

/// Coordinates `(h, β₁, β₂, γ₁, γ₂)`; `x₀ⁱ` is the `βᵢ` axis and `fⁱ` the `γᵢ` axis.
#[derive(Clone, Debug)]
pub struct Prop8Model {
    pub params: Prop8Params,
    pub hilbert_dim: usize,
    pub space: KreinSpace,
    pub a: Matrix,
    pub relation: LinearRelation,
    pub x0: [Vector; 2],
    pub f: [Vector; 2],
    pub clauses: Prop8Clauses,
}

pub fn build_prop8(params: Prop8Params) -> Result<Prop8Model, JordanError> {
    let n = params.a11.rows();
    let bad = |m: &str| Err(JordanError::InvalidParams(m.into()));
    if !params.a11.is_square() || !params.a11.is_hermitian() {
        return bad("A11 must be Hermitian");
    }
    if params.a1.len() != n || params.a2.len() != n {
        return bad("a1 and a2 must lie in H");
    }
    if Matrix::from_columns(n, &[params.a1.clone(), params.a2.clone()]).rank() < 2 {
        return bad("a1 and a2 must be linearly independent");
    }
    for al in [&params.alpha1, &params.alpha2] {
        if al.is_zero() || !al.is_real() {
            return bad("α1 and α2 must be nonzero reals");
        }
    }
    let dim = n + 4;
    let (b1, b2, g1, g2) = (n, n + 1, n + 2, n + 3);
    let mut j = Matrix::zeros(dim, dim);
    for k in 0..n {
        j.set(k, k, Scalar::one());
    }
    for (x, y) in [(b1, g1), (b2, g2)] {
        j.set(x, y, Scalar::one());
        j.set(y, x, Scalar::one());
    }
    let mut a = Matrix::zeros(dim, dim);
    for r in 0..n {
        for c in 0..n {
            a.set(r, c, params.a11.get(r, c).clone());
        }
        a.set(r, g1, params.a1[r].clone());
        a.set(r, g2, params.a2[r].clone());
        a.set(b1, r, params.a1[r].conj());
        a.set(b2, r, params.a2[r].conj());
    }
    a.set(b1, g1, params.alpha1.clone());
    a.set(b2, g2, params.alpha2.clone());
    let space = KreinSpace::new(j.clone())?;
    let relation = LinearRelation::graph_of(&space, &a)?;
    let axis = |k: usize| crate::linalg::unit_vector(dim, k);
    let x0 = [axis(b1), axis(b2)];
    let f = [axis(g1), axis(g2)];
    let clauses = Prop8Clauses {
        self_adjoint: relation.is_self_adjoint(),
        eigenvectors: x0.iter().all(|x| vec_is_zero(&a.mul_vec(x))),
        neutral: x0.iter().all(|x| space.ip(x, x).is_zero()),
        f_is_jx0: (0..2).all(|i| j.mul_vec(&x0[i]) == f[i]),
        simple: [a.solve_vec(&x0[0]).is_none(), a.solve_vec(&x0[1]).is_none()],
    };
    if !(clauses.self_adjoint && clauses.eigenvectors && clauses.neutral && clauses.f_is_jx0) {
        return Err(JordanError::VerificationFailed(format!("model identities fail: {clauses:?}")));
    }
    Ok(Prop8Model { params, hilbert_dim: n, space, a, relation, x0, f, clauses })
}

/// `α₁ = G₁₁ + t`, `α₂ = G₂₂ + |G₁₂|²/t` with `G_ij = a_i* A11⁻¹ a_j`: the
/// one-parameter family for which both `x₀ⁱ` are simple. `None` when `A11` is
/// singular, `G₁₂ = 0`, `t` is zero or not real, or an `αᵢ` vanishes.
pub fn simple_prop8_alphas(a11: &Matrix, a1: &[Scalar], a2: &[Scalar], t: &Scalar) -> Option<(Scalar, Scalar)> {
    if t.is_zero() || !t.is_real() {
        return None;
    }
    let inv = a11.inverse()?;
    let g = |x: &[Scalar], y: &[Scalar]| dot(x, &inv.mul_vec(y));
    let g12 = g(a1, a2);
    if g12.is_zero() {
        return None;
    }
    let alpha1 = &g(a1, a1) + t;
    let alpha2 = &g(a2, a2) + &(&Scalar::real(g12.norm_sqr()) / t);
    (!alpha1.is_zero() && !alpha2.is_zero()).then_some((alpha1, alpha2))
}

/// Finite-dimensional stand-ins for the spectral and separation claims:
/// irreducibility of `A11` is replaced by cyclicity of `a₂` for `A11`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub analogue: String,
    pub a11_simple_spectrum: bool,
    pub a2_cyclic: bool,
    /// A nonzero `h` spanning an `A11`-invariant subspace orthogonal to `a₂`.
    pub reducing_witness: Option<Vector>,
    pub rational_eigenvalues: Vec<Scalar>,
    pub irrational_eigenvalue_count: usize,
    pub only_zero_rational: bool,
    /// Every nonzero rational eigenvalue of `A` is one of `A11`.
    pub nonzero_eigenvalues_from_a11: bool,
    pub closure_dim: usize,
    pub closure_degenerate: bool,
    pub closure_contains_x02: bool,
    /// `h ∈ H ∩ closure` with `(h, a₂) ≠ 0`.
    pub a2_orthogonality_witness: Option<Vector>,
    pub obstruction: bool,
    pub separation_possible: bool,
}

fn krylov(m: &Matrix, v: &[Scalar]) -> Subspace {
    let n = m.rows();
    let mut s = Subspace::span(n, &[v.to_vec()]);
    loop {
        let next = s.join(&s.image(m));
        if next.dim() == s.dim() {
            return s;
        }
        s = next;
    }
}

pub fn prop8_separation_test(m: &Prop8Model) -> SeparationReport {
    let n = m.hilbert_dim;
    let a11 = &m.params.a11;
    let euclid = KreinSpace::euclidean(n);
    let a11_rel = LinearRelation::graph_of(&euclid, a11).expect("square");
    let a11_simple_spectrum = a11_rel.characteristic_polynomial().is_some_and(|p| {
        let g = crate::poly::Poly::gcd(&p, &p.derivative());
        g.degree() == Some(0)
    });
    let kry = krylov(a11, &m.params.a2);
    let a2_cyclic = kry.is_full();
    let reducing_witness = euclid.ortho_complement(&kry).basis().first().cloned();

    let spectrum = m.relation.finite_eigenvalues();
    let rational_eigenvalues: Vec<Scalar> = spectrum.exact.iter().map(|e| e.value.clone()).collect();
    let only_zero_rational = rational_eigenvalues.iter().all(Scalar::is_zero);
    let nonzero_eigenvalues_from_a11 = rational_eigenvalues
        .iter()
        .filter(|b| !b.is_zero())
        .all(|b| (a11 - &Matrix::identity(n).scale(b)).rank() < n);

    let closure = invariant_closure(&m.relation, &[m.x0[0].clone(), m.f[0].clone()]);
    let closure_degenerate = !m.space.is_nondegenerate(&closure);
    let closure_contains_x02 = closure.contains(&m.x0[1]);
    let h_axes = Subspace::span(n + 4, &(0..n).map(|k| crate::linalg::unit_vector(n + 4, k)).collect::<Vec<_>>());
    let a2_orthogonality_witness = closure
        .intersect(&h_axes)
        .basis()
        .iter()
        .map(|v| v[..n].to_vec())
        .find(|h| !dot(h, &m.params.a2).is_zero());
    let obstruction = closure_degenerate || closure_contains_x02 || a2_orthogonality_witness.is_some();
    SeparationReport {
        analogue: "irreducible A11 replaced by: a2 cyclic for A11; separation tested on the invariant closure of {x0^1, f^1}".into(),
        a11_simple_spectrum,
        a2_cyclic,
        reducing_witness,
        rational_eigenvalues,
        irrational_eigenvalue_count: spectrum.approx.len(),
        only_zero_rational,
        nonzero_eigenvalues_from_a11,
        closure_dim: closure.dim(),
        closure_degenerate,
        closure_contains_x02,
        a2_orthogonality_witness,
        obstruction,
        separation_possible: !obstruction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;

    fn op(j: Matrix, a: Matrix) -> (KreinSpace, LinearRelation) {
        let k = KreinSpace::new(j).unwrap();
        let r = LinearRelation::graph_of(&k, &a).unwrap();
        (k, r)
    }

    fn default_params() -> Prop8Params {
        Prop8Params {
            a11: Matrix::from_ints(&[&[0, 1], &[1, 0]]),
            a1: unit_vector(2, 0),
            a2: unit_vector(2, 1),
            alpha1: Scalar::one(),
            alpha2: Scalar::one(),
        }
    }

    #[test]
    fn nilpotent_block_chain() {
        let (k, a) = op(Matrix::from_ints(&[&[0, 1], &[1, 0]]), Matrix::from_ints(&[&[0, 1], &[0, 0]]));
        let chains = chains_at(&a, &Scalar::zero()).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].vectors, vec![unit_vector(2, 0), unit_vector(2, 1)]);
        assert!(chains[0].maximal);
        assert!(!chain_is_degenerate(&chains[0], &k));
        assert_eq!(chains_at(&a, &Scalar::one()), Err(JordanError::NotAnEigenvalue(Scalar::one())));
    }

    #[test]
    fn diag_split() {
        let j = Matrix::from_ints(&[&[1, 0], &[0, -1]]);
        let (k, a) = op(j.clone(), Matrix::zeros(2, 2));
        let r = Realization::new(k, a, Matrix::identity(2), Scalar::i(), j.scale(&-Scalar::i())).unwrap();
        let d = prop6_decompose(&r, &Scalar::zero()).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert_eq!(d.parts[0].role, PartRole::Positive);
        assert_eq!(d.parts.iter().map(|p| p.kappa).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(d.r, 1);
    }

    #[test]
    fn prop8_default_model() {
        let m = build_prop8(default_params()).unwrap();
        assert!(m.clauses.all(), "{:?}", m.clauses);
        let chains = chains_at(&m.relation, &Scalar::zero()).unwrap();
        assert!(chains.iter().all(|c| c.maximal));
        let rep = prop8_separation_test(&m);
        assert!(rep.a2_cyclic && rep.obstruction && !rep.separation_possible, "{rep:?}");
    }

    #[test]
    fn prop8_rejects_bad_params() {
        let mut p = default_params();
        p.a2 = p.a1.clone();
        assert!(matches!(build_prop8(p), Err(JordanError::InvalidParams(_))));
        let mut p = default_params();
        p.alpha1 = Scalar::zero();
        assert!(matches!(build_prop8(p), Err(JordanError::InvalidParams(_))));
    }

    #[test]
    fn prop8_reducible_a11_separates() {
        let p = Prop8Params {
            a11: Matrix::from_ints(&[&[1, 0], &[0, 2]]),
            a1: unit_vector(2, 1),
            a2: unit_vector(2, 0),
            alpha1: Scalar::one(),
            alpha2: Scalar::int(3),
        };
        let rep = prop8_separation_test(&build_prop8(p).unwrap());
        assert!(!rep.a2_cyclic);
        assert_eq!(rep.reducing_witness, Some(unit_vector(2, 1)));
        assert!(rep.separation_possible, "{rep:?}");
    }

    #[test]
    fn closure_trivia() {
        let m = build_prop8(default_params()).unwrap();
        let x = invariant_closure(&m.relation, &[m.x0[0].clone()]);
        assert_eq!(x.dim(), 1);
        let all: Vec<Vector> = (0..6).map(|k| unit_vector(6, k)).collect();
        assert!(invariant_closure(&m.relation, &all).is_full());
    }

    fn example6_sum() -> Realization {
        use crate::poly::Poly;
        use crate::ratfun::{RatFun, RationalMatrixFunction};
        use crate::realization::{canonical_model, ModelBudget};
        let rf = |n: &[i64], d: &[i64]| RationalMatrixFunction::new(vec![vec![RatFun::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()]]).unwrap();
        let b = ModelBudget::default();
        let r1 = canonical_model(&rf(&[-1, -2], &[0, 0, 1]), &b).unwrap();
        let r2 = canonical_model(&rf(&[2], &[0, 1]), &b).unwrap();
        crate::sumcriteria::build_sum(&r1, &r2).unwrap().sum
    }

    #[test]
    fn example6_chains() {
        let sum = example6_sum();
        let chains = chains_at(sum.relation(), &Scalar::zero()).unwrap();
        assert_eq!(chains.iter().map(JordanChain::len).collect::<Vec<_>>(), vec![2, 1]);
        let d = prop6_decompose(&sum.compress().unwrap(), &Scalar::zero()).unwrap();
        assert_eq!(d.r, 1);
        assert_eq!(d.part_dims(), vec![2]);
        assert_eq!(d.parts[0].role, PartRole::Chain { length: 2 });
    }

    #[test]
    fn hyperbolic_chain_nondegenerate() {
        let (k, a) = op(Matrix::from_ints(&[&[0, 1], &[1, 0]]), Matrix::from_ints(&[&[0, 1], &[0, 0]]));
        let c = &chains_at(&a, &Scalar::zero()).unwrap()[0];
        assert!(!chain_is_degenerate(c, &k));
    }

    #[test]
    fn prop8_decomposition() {
        let m = build_prop8(default_params()).unwrap();
        for x in &m.x0 {
            let c = JordanChain::from_head(&m.a, &Scalar::zero(), x.clone(), 1);
            assert!(c.maximal && chain_is_degenerate(&c, &m.space));
        }
        let gamma = Matrix::from_columns(6, &[unit_vector(6, 0)]);
        let z0 = Scalar::i();
        let r = Realization::from_resolvent_form(m.space.clone(), m.relation.clone(), &gamma, &Matrix::zeros(1, 1), z0).unwrap();
        let d = prop6_decompose(&r, &Scalar::zero()).unwrap();
        // The root subspace at 0 is non-degenerate, so it is exhausted by
        // non-degenerate chains and the neutral eigenvectors never reach the remainder.
        assert!(d.r >= 1);
        let rem = d.parts.iter().find(|p| p.role == PartRole::Remainder).unwrap();
        assert!(m.x0.iter().all(|x| !rem.subspace.contains(x)));
        assert!(d.other_eigenvalues.is_empty() || !d.other_eigenvalues.contains(&Scalar::zero()));
    }
}
