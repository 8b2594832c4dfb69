//! Realizations `Q(z) = Q(z₀)* + (z − z̄₀) Γ⁺ (I + (z − z₀)(A − z)⁻¹) Γ` with a
//! self-adjoint relation `A` in a finite-dimensional Krein space.

use crate::krein::{KreinError, KreinSpace, Subspace};
use crate::linalg::{congruence_diagonalize, unit_vector, Matrix, Scalar, Vector};
use crate::poly::Poly;
use crate::ratfun::{upper_lattice, RatFun, RatFunError, RationalMatrixFunction};
use crate::relation::{LinearRelation, RelationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizationError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    RatFun(#[from] RatFunError),
    #[error(transparent)]
    Krein(#[from] KreinError),
    #[error("A is not self-adjoint")]
    NotSelfAdjoint,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("constant term is inconsistent with Γ: C* − C ≠ (z₀ − z̄₀)Γ⁺Γ")]
    InconsistentConstant,
    #[error("sampling budget exhausted before stabilization; last (dim, n_minus): {last:?}")]
    BudgetExhausted { last: Vec<(usize, usize)> },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    space: KreinSpace,
    a: LinearRelation,
    gamma: Matrix,
    z0: Scalar,
    const_term: Matrix,
}

impl Realization {
    pub fn new(
        space: KreinSpace,
        a: LinearRelation,
        gamma: Matrix,
        z0: Scalar,
        const_term: Matrix,
    ) -> Result<Self, RealizationError> {
        let n = space.dim();
        let p = const_term.rows();
        if a.domain_space() != &space || a.range_space() != &space {
            return Err(RealizationError::Shape("A does not act in the given space".into()));
        }
        if gamma.rows() != n || gamma.cols() != p || const_term.cols() != p {
            return Err(RealizationError::Shape(format!(
                "Γ is {}×{}, constant is {}×{}, space has dimension {n}",
                gamma.rows(),
                gamma.cols(),
                p,
                const_term.cols()
            )));
        }
        if !a.is_self_adjoint() {
            return Err(RealizationError::NotSelfAdjoint);
        }
        a.resolvent(&z0)?;
        let r = Realization { space, a, gamma, z0, const_term };
        let lhs = &r.const_term.adjoint() - &r.const_term;
        let rhs = (&r.gamma_plus() * &r.gamma).scale(&(&r.z0 - &r.z0.conj()));
        if lhs != rhs {
            return Err(RealizationError::InconsistentConstant);
        }
        Ok(r)
    }

    /// Imports `Q(z) = S + Γ̂⁺(A − z)⁻¹Γ̂` with `Γ = (A − z₀)⁻¹Γ̂` and
    /// `const = Q(z₀)*`.
    pub fn from_resolvent_form(
        space: KreinSpace,
        a: LinearRelation,
        gamma_hat: &Matrix,
        s: &Matrix,
        z0: Scalar,
    ) -> Result<Self, RealizationError> {
        let r0 = a.resolvent(&z0)?;
        let gamma = &r0 * gamma_hat;
        let gh_plus = &gamma_hat.adjoint() * space.gram();
        let at_z0 = s + &(&(&gh_plus * &r0) * gamma_hat);
        Realization::new(space, a, gamma, z0, at_z0.adjoint())
    }

    pub fn space(&self) -> &KreinSpace {
        &self.space
    }

    pub fn relation(&self) -> &LinearRelation {
        &self.a
    }

    pub fn gamma(&self) -> &Matrix {
        &self.gamma
    }

    pub fn z0(&self) -> &Scalar {
        &self.z0
    }

    pub fn const_term(&self) -> &Matrix {
        &self.const_term
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Size `p` of the values `Q(z) ∈ ℂ^{p×p}`.
    pub fn size(&self) -> usize {
        self.const_term.rows()
    }

    /// `Γ⁺ = Γ*·J`, the Krein adjoint of `Γ : ℂ^p → K`.
    pub fn gamma_plus(&self) -> Matrix {
        &self.gamma.adjoint() * self.space.gram()
    }

    pub fn resolvent(&self, z: &Scalar) -> Result<Matrix, RealizationError> {
        Ok(self.a.resolvent(z)?)
    }

    /// `Γ_z = (I + (z − z₀)(A − z)⁻¹)Γ`.
    pub fn gamma_z(&self, z: &Scalar) -> Result<Matrix, RealizationError> {
        let r = self.resolvent(z)?;
        let t = &Matrix::identity(self.dim()) + &r.scale(&(z - &self.z0));
        Ok(&t * &self.gamma)
    }

    pub fn gamma_field(&self) -> GammaField<'_> {
        GammaField { r: self }
    }

    pub fn eval_eq2(&self, z: &Scalar) -> Result<Matrix, RealizationError> {
        let gz = self.gamma_z(z)?;
        let term = (&self.gamma_plus() * &gz).scale(&(z - &self.z0.conj()));
        Ok(&self.const_term + &term)
    }

    /// Same function, base point moved to `w ∈ ρ(A)`.
    pub fn rebase(&self, w: &Scalar) -> Result<Realization, RealizationError> {
        let gw = self.gamma_z(w)?;
        let c = self.eval_eq2(w)?.adjoint();
        Realization::new(self.space.clone(), self.a.clone(), gw, w.clone(), c)
    }

    /// Krylov closure of `ran Γ` under `(A − z₀)⁻¹`.
    pub fn state_span(&self) -> Subspace {
        let n = self.dim();
        let mut span = Subspace::column_space(&self.gamma);
        if span.is_zero() {
            return span;
        }
        let r0 = self.a.resolvent(&self.z0).expect("z₀ lies in the resolvent set");
        loop {
            let next = span.join(&span.image(&r0));
            if next.dim() == span.dim() || next.dim() == n {
                return next;
            }
            span = next;
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.state_span().is_full()
    }

    /// Negative index of the minimal space: `n_minus` of the Gram of the
    /// state span, whose isotropic part contributes only zeros.
    pub fn kappa(&self) -> usize {
        self.space.inertia_of(&self.state_span()).minus
    }

    /// Minimal realization of the same function: restriction to the state
    /// span followed by the quotient by its isotropic part.
    pub fn compress(&self) -> Result<Realization, RealizationError> {
        let n = self.dim();
        let l = self.state_span();
        let l0 = self.space.isotropic_part(&l);
        if l.is_full() {
            return Ok(self.clone());
        }
        let l1 = l0.complement_in(&l);
        let r = l1.len();
        let b1 = Matrix::from_columns(n, &l1);
        let basis = Matrix::hstack(n, &[&b1, &l0.basis_matrix()]);
        let fail = || RealizationError::VerificationFailed("state span is not invariant".into());
        let r0 = self.resolvent(&self.z0)?;
        let rp = basis.solve(&(&r0 * &b1)).ok_or_else(fail)?.rows_range(0, r);
        let g = basis.solve(&self.gamma).ok_or_else(fail)?.rows_range(0, r);
        let space = KreinSpace::new(self.space.gram_of_vectors(&l1))?;
        let pairs: Vec<(Vector, Vector)> = (0..r)
            .map(|k| {
                let u = unit_vector(r, k);
                let f = rp.mul_vec(&u);
                let g: Vector = u.iter().zip(&f).map(|(a, b)| a + &(&self.z0 * b)).collect();
                (f, g)
            })
            .collect();
        let a = LinearRelation::from_pairs(space.clone(), space.clone(), &pairs)?;
        Realization::new(space, a, g, self.z0.clone(), self.const_term.clone())
    }

    /// `left · (A − z)⁻¹ · right = N(z) / d(z)` with `d = det(G − zF)` and
    /// polynomial `N`, for the graph basis `(F, G)`.
    fn resolvent_sandwich(&self, left: &Matrix, right: &Matrix) -> (Vec<Vec<Poly>>, Poly) {
        let n = self.dim();
        let (f, g) = self.a.pair_matrices();
        let (p, q) = (left.rows(), right.cols());
        let lf = left * &f;
        let mut nodes: Vec<(Scalar, Scalar, Matrix)> = Vec::new();
        let mut t = 0i64;
        while nodes.len() < n + 1 {
            let x = Scalar::int(t);
            let u = &g - &f.scale(&x);
            let d = u.determinant();
            if let Some(inv) = u.inverse() {
                nodes.push((x, d.clone(), (&(&lf * &inv) * right).scale(&d)));
            }
            t += 1;
        }
        let det = Poly::interpolate(&nodes.iter().map(|(x, d, _)| (x.clone(), d.clone())).collect::<Vec<_>>());
        let num = (0..p)
            .map(|i| {
                (0..q)
                    .map(|j| Poly::interpolate(&nodes.iter().map(|(x, _, m)| (x.clone(), m.get(i, j).clone())).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        (num, det)
    }

    /// The represented function as an exact rational matrix function.
    pub fn transfer_function(&self) -> Result<RationalMatrixFunction, RealizationError> {
        let p = self.size();
        let w = self.gamma_plus();
        let wg = &w * &self.gamma;
        let (num, det) = self.resolvent_sandwich(&w, &self.gamma);
        let zc = Poly::linear_root(&self.z0.conj());
        let quad = &zc * &Poly::linear_root(&self.z0);
        let entries = (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        let base = &Poly::constant(self.const_term.get(i, j).clone()) + &zc.scale(wg.get(i, j));
                        let top = &(&base * &det) + &(&quad * &num[i][j]);
                        RatFun::new(top, det.clone()).expect("nonzero determinant")
                    })
                    .collect()
            })
            .collect();
        Ok(RationalMatrixFunction::new(entries)?)
    }

    /// `K₁ [+] K₂` with `Ã = A₁ [+] A₂`, `Γ̃ = (Γ₁; Γ₂)`; represents `Q₁ + Q₂`.
    /// Both realizations must share `z₀`.
    pub fn orthogonal_sum(r1: &Realization, r2: &Realization) -> Result<Realization, RealizationError> {
        if r1.z0 != r2.z0 || r1.size() != r2.size() {
            return Err(RealizationError::Shape("summands need equal z₀ and size".into()));
        }
        let space = r1.space.direct_sum(&r2.space);
        let a = LinearRelation::direct_orthogonal_sum(&r1.a, &r2.a)?;
        let gamma = Matrix::vstack(r1.size(), &[&r1.gamma, &r2.gamma]);
        Realization::new(space, a, gamma, r1.z0.clone(), &r1.const_term + &r2.const_term)
    }
}

/// The map `z ↦ Γ_z` of a realization.
#[derive(Clone, Copy, Debug)]
pub struct GammaField<'a> {
    r: &'a Realization,
}

impl GammaField<'_> {
    pub fn at(&self, z: &Scalar) -> Result<Matrix, RealizationError> {
        self.r.gamma_z(z)
    }

    /// `Γ_z` computed from `Γ_w` instead of `Γ_{z₀}`.
    pub fn at_via(&self, z: &Scalar, w: &Scalar) -> Result<Matrix, RealizationError> {
        let gw = self.r.gamma_z(w)?;
        let t = &Matrix::identity(self.r.dim()) + &self.r.resolvent(z)?.scale(&(z - w));
        Ok(&t * &gw)
    }
}

/// Sampling limits for [`canonical_model`].
#[derive(Clone, Copy, Debug)]
pub struct ModelBudget {
    /// Points added per batch; each point carries the `p` standard vectors.
    pub batch: usize,
    pub max_points: usize,
}

impl Default for ModelBudget {
    fn default() -> Self {
        ModelBudget { batch: 4, max_points: 40 }
    }
}

/// Minimal realization on the quotient of the span of the symbols
/// `ε_z h` by its isotropic part, with `A` generated by the pairs
/// `(ε_z h − ε_w h, z ε_z h − w ε_w h)`.
pub fn canonical_model(q: &RationalMatrixFunction, budget: &ModelBudget) -> Result<Realization, RealizationError> {
    let p = q.size();
    let pts: Vec<Scalar> = upper_lattice().filter(|z| !q.is_pole(z)).take(budget.max_points).collect();
    let mut history: Vec<(usize, usize)> = Vec::new();
    let mut m = 0;
    loop {
        m = (m + budget.batch).min(pts.len());
        let symbols: Vec<(Scalar, Vector)> =
            pts[..m].iter().flat_map(|z| (0..p).map(move |k| (z.clone(), unit_vector(p, k)))).collect();
        let gram = q.gram_matrix(&symbols)?.transpose();
        let sig = congruence_diagonalize(&gram).expect("kernel Gram is Hermitian").inertia();
        history.push((sig.plus + sig.minus, sig.minus));
        let h = history.len();
        if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
            return build_model(q, &pts[..m], &gram);
        }
        if m == pts.len() {
            return Err(RealizationError::BudgetExhausted { last: history[h.saturating_sub(2)..].to_vec() });
        }
    }
}

fn build_model(q: &RationalMatrixFunction, pts: &[Scalar], gram: &Matrix) -> Result<Realization, RealizationError> {
    let p = q.size();
    let idx = gram.pivot_columns();
    let r = idx.len();
    let all: Vec<usize> = (0..gram.cols()).collect();
    let g = gram.submatrix(&idx, &idx);
    let g_inv = g
        .inverse()
        .ok_or_else(|| RealizationError::VerificationFailed("principal pivot block is singular".into()))?;
    let coords = &g_inv * &gram.submatrix(&idx, &all);
    let c = |s: usize| coords.col(s);
    let space = KreinSpace::new(g)?;
    let z0 = pts[0].clone();
    let mut pairs = Vec::new();
    for (s, zs) in pts.iter().enumerate().skip(1) {
        for k in 0..p {
            let (cs, ct) = (c(s * p + k), c(k));
            let f: Vector = cs.iter().zip(&ct).map(|(a, b)| a - b).collect();
            let h: Vector = cs.iter().zip(&ct).map(|(a, b)| &(zs * a) - &(&z0 * b)).collect();
            pairs.push((f, h));
        }
    }
    let a = LinearRelation::from_pairs(space.clone(), space.clone(), &pairs)?;
    if !a.is_self_adjoint() {
        return Err(RealizationError::VerificationFailed(format!(
            "generated relation has dimension {} in a {r}-dimensional space and is not self-adjoint",
            a.dim()
        )));
    }
    let gamma = Matrix::from_columns(r, &(0..p).map(c).collect::<Vec<_>>());
    let model = Realization::new(space, a, gamma, z0.clone(), q.eval(&z0)?.adjoint())?;
    if model.transfer_function()? != *q {
        return Err(RealizationError::VerificationFailed("model does not reproduce Q".into()));
    }
    if !model.is_minimal() {
        return Err(RealizationError::VerificationFailed("model is not minimal".into()));
    }
    Ok(model)
}

/// Factors a Hermitian `h = P*·D·P` with `D` diagonal and invertible.
fn hermitian_factor(h: &Matrix) -> (Matrix, Matrix) {
    let c = congruence_diagonalize(h).expect("coefficient is Hermitian");
    let t_inv = c.transform.inverse().expect("congruence is invertible");
    let keep: Vec<usize> = (0..c.diagonal.len()).filter(|&i| !c.diagonal[i].is_zero()).collect();
    let cols: Vec<usize> = (0..h.cols()).collect();
    let p = t_inv.submatrix(&keep, &cols);
    let d = Matrix::diagonal(&keep.iter().map(|&i| c.diagonal[i].clone()).collect::<Vec<_>>());
    (p, d)
}

struct Block {
    gram: Matrix,
    a: Matrix,
    /// Resolvent-form `Γ̂`, or the `(2)`-form `Γ` for a multivalued block.
    gamma: Matrix,
    multivalued: bool,
}

/// Nilpotent shift on `k` blocks of size `r`: block `b` ↦ block `b − 1`.
fn block_shift(k: usize, r: usize) -> Matrix {
    Matrix::from_fn(k * r, k * r, |i, j| {
        let (bi, bj) = (i / r, j / r);
        if bj == bi + 1 && i % r == j % r {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// Block anti-diagonal matrix with `m` at block positions `a + b = k − 1`.
fn block_antidiag(k: usize, m: &Matrix) -> Matrix {
    let r = m.rows();
    Matrix::from_fn(k * r, k * r, |i, j| {
        if i / r + j / r == k - 1 {
            m.get(i % r, j % r).clone()
        } else {
            Scalar::zero()
        }
    })
}

/// `m` placed in the last of `k` row blocks.
fn last_block(k: usize, m: &Matrix) -> Matrix {
    let r = m.rows();
    Matrix::from_fn(k * r, m.cols(), |i, j| if i / r == k - 1 { m.get(i % r, j).clone() } else { Scalar::zero() })
}

/// Independent oracle: one Jordan-type block per partial-fraction term
/// (anti-diagonal Gram), a multivalued block for the linear term, combined
/// by orthogonal sum. Usually not minimal; see [`Realization::compress`].
pub fn realization_from_partial_fractions(q: &RationalMatrixFunction) -> Result<Realization, RealizationError> {
    let pf = q.partial_fractions()?;
    let p = q.size();
    let mut blocks = Vec::new();
    let mut done: Vec<Scalar> = Vec::new();
    for t in &pf.poles {
        if done.contains(&t.alpha) {
            continue;
        }
        for (j, c) in t.coeffs.iter().enumerate() {
            let k = j + 1;
            if c.is_zero() {
                continue;
            }
            if t.alpha.is_real() {
                let (pm, d) = hermitian_factor(&-c);
                let r = d.rows();
                let a = &Matrix::identity(k * r).scale(&t.alpha) + &block_shift(k, r);
                blocks.push(Block { gram: block_antidiag(k, &d), a, gamma: last_block(k, &pm), multivalued: false });
            } else {
                let beta = t.alpha.conj();
                let n = block_shift(k, p);
                let au = &Matrix::identity(k * p).scale(&t.alpha) + &n;
                let av = &Matrix::identity(k * p).scale(&beta) + &n;
                let kk = block_antidiag(k, &Matrix::identity(p));
                let zero = Matrix::zeros(k * p, k * p);
                let gram = Matrix::vstack(2 * k * p, &[&Matrix::hstack(k * p, &[&zero, &kk]), &Matrix::hstack(k * p, &[&kk.adjoint(), &zero])]);
                let gu = last_block(k, &Matrix::identity(p));
                let gv = last_block(k, &-&c.adjoint());
                blocks.push(Block {
                    gram,
                    a: Matrix::block_diag(&[&au, &av]),
                    gamma: Matrix::vstack(p, &[&gu, &gv]),
                    multivalued: false,
                });
            }
        }
        done.push(t.alpha.conj());
    }
    if !pf.b1.is_zero() {
        let (pm, d) = hermitian_factor(&pf.b1);
        blocks.push(Block { a: Matrix::zeros(d.rows(), d.rows()), gram: d, gamma: pm, multivalued: true });
    }
    let z0 = upper_lattice().find(|z| !q.is_pole(z)).unwrap();
    let dim: usize = blocks.iter().map(|b| b.gram.rows()).sum();
    let mut grams = Vec::new();
    let mut gammas = Vec::new();
    let mut pairs_f = Vec::new();
    let mut pairs_g = Vec::new();
    let mut offset = 0;
    for b in &blocks {
        let nb = b.gram.rows();
        let space = KreinSpace::new(b.gram.clone())?;
        let rel = if b.multivalued {
            LinearRelation::multivalued(&space, &Subspace::full(nb))
        } else {
            LinearRelation::graph_of(&space, &b.a)?
        };
        let gamma = if b.multivalued { b.gamma.clone() } else { &rel.resolvent(&z0)? * &b.gamma };
        for (f, g) in rel.pairs() {
            let mut fe = vec![Scalar::zero(); dim];
            let mut ge = vec![Scalar::zero(); dim];
            fe[offset..offset + nb].clone_from_slice(&f);
            ge[offset..offset + nb].clone_from_slice(&g);
            pairs_f.push(fe);
            pairs_g.push(ge);
        }
        grams.push(b.gram.clone());
        gammas.push(gamma);
        offset += nb;
    }
    let space = KreinSpace::new(Matrix::block_diag(&grams.iter().collect::<Vec<_>>()))?;
    let pairs: Vec<(Vector, Vector)> = pairs_f.into_iter().zip(pairs_g).collect();
    let a = LinearRelation::from_pairs(space.clone(), space.clone(), &pairs)?;
    let gamma = Matrix::vstack(p, &gammas.iter().collect::<Vec<_>>());
    let r = Realization::new(space, a, gamma, z0.clone(), q.eval(&z0)?.adjoint())?;
    if r.transfer_function()? != *q {
        return Err(RealizationError::VerificationFailed("partial-fraction blocks do not reproduce Q".into()));
    }
    Ok(r)
}
