//! Sums `Q = Q₁ + Q₂` of realized functions: the orthogonal sum representation,
//! the `L̄ = L₁ [+] (L₀ ∔ F) [+] L₂` structure of its state space, the criteria
//! equations for lost negative squares, and the resulting verdicts.

use std::cmp::Ordering;

use serde::Serialize;

use crate::krein::{Decomposition44, DecompositionSummary, KreinError, KreinSpace, Subspace};
use crate::linalg::{congruence_diagonalize, dot, unit_vector, vec_is_zero, Inertia, Matrix, Scalar, Vector};
use crate::poly::{poly_determinant, roots, Poly};
use crate::ratfun::{negative_squares_lower_bound, upper_lattice, RatFun, RatFunError, RationalMatrixFunction, SamplePlan};
use crate::realization::{canonical_model, ModelBudget, Realization, RealizationError};
use crate::relation::{combinations, LinearRelation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SumError {
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    RatFun(#[from] RatFunError),
    #[error(transparent)]
    Krein(#[from] KreinError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

/// The representation of `Q₁ + Q₂` on `K̃ = K₁ [+] K₂`.
#[derive(Clone, Debug)]
pub struct SumRepresentation {
    pub r1: Realization,
    pub r2: Realization,
    pub sum: Realization,
    /// `L̄`, the state span of the sum.
    pub lbar: Subspace,
    pub decomposition: Decomposition44,
}

impl SumRepresentation {
    pub fn tilde_space(&self) -> &KreinSpace {
        self.sum.space()
    }

    pub fn tilde_a(&self) -> &LinearRelation {
        self.sum.relation()
    }

    pub fn tilde_gamma(&self) -> &Matrix {
        self.sum.gamma()
    }

    /// `Γ̃_z`, the stack of `Γ_{1z}` and `Γ_{2z}`.
    pub fn gamma_tilde_z(&self, z: &Scalar) -> Result<Matrix, RealizationError> {
        let p = self.sum.size();
        Ok(Matrix::vstack(p, &[&self.r1.gamma_z(z)?, &self.r2.gamma_z(z)?]))
    }

    pub fn kappa(&self) -> usize {
        self.decomposition.inertia_l1.minus
    }

    pub fn is_minimal(&self) -> bool {
        self.lbar.is_full()
    }

    /// `neg(K₁) + neg(K₂) = neg(L₁) + dim L₀ + neg(L₂)`.
    pub fn inertia_identity_holds(&self) -> bool {
        let d = &self.decomposition;
        self.r1.space().neg_index() + self.r2.space().neg_index()
            == d.inertia_l1.minus + d.l0.dim() + d.inertia_l2.minus
    }
}

/// Stacks `R1` and `R2` over a common base point and decomposes the state span.
pub fn build_sum(r1: &Realization, r2: &Realization) -> Result<SumRepresentation, SumError> {
    if r1.size() != r2.size() {
        return Err(SumError::DimensionMismatch(format!("summands act on C^{} and C^{}", r1.size(), r2.size())));
    }
    let (r1, r2) = common_base(r1, r2)?;
    let sum = Realization::orthogonal_sum(&r1, &r2)?;
    let lbar = sum.state_span();
    let decomposition = sum.space().decompose_44(&lbar)?;
    let rep = SumRepresentation { r1, r2, sum, lbar, decomposition };
    if !rep.inertia_identity_holds() {
        return Err(SumError::VerificationFailed("inertia bookkeeping of the decomposition".into()));
    }
    let expected = rep.r1.transfer_function()?.add(&rep.r2.transfer_function()?)?;
    if rep.sum.transfer_function()? != expected {
        return Err(SumError::VerificationFailed("sum does not represent Q₁ + Q₂".into()));
    }
    Ok(rep)
}

fn common_base(r1: &Realization, r2: &Realization) -> Result<(Realization, Realization), SumError> {
    if r1.z0() == r2.z0() {
        return Ok((r1.clone(), r2.clone()));
    }
    if r2.relation().is_in_resolvent_set(r1.z0()) {
        return Ok((r1.clone(), r2.rebase(r1.z0())?));
    }
    let w = upper_lattice()
        .find(|w| r1.relation().is_in_resolvent_set(w) && r2.relation().is_in_resolvent_set(w))
        .expect("finite spectra leave lattice points free");
    Ok((r1.rebase(&w)?, r2.rebase(&w)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    Trivial,
    Singular,
    Nontrivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionSign {
    Positive,
    Negative,
    Neutral,
    #[serde(rename = "n/a")]
    NotApplicable,
}

/// Where a solution came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Kernel at prescribed points.
    FixedPoints,
    GridPoint,
    /// Candidate point produced by the scalar elimination.
    Algebraic,
    /// Holds for every `z`; the recorded point is a representative.
    Identity,
    /// Isolated point where the coefficient matrix loses rank.
    RankDrop,
}

/// A solution `(z₁, z₂; h₁, h₂)` of the criteria equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionSolution {
    pub z1: Scalar,
    pub z2: Scalar,
    pub h1: Vector,
    pub h2: Vector,
    pub kind: SolutionKind,
    pub sign: SolutionSign,
    pub e_value: Scalar,
    /// `h` is a singular direction of `Q₁ + Q₂` itself.
    pub sum_singular: bool,
    pub provenance: Provenance,
}

impl CriterionSolution {
    pub fn stacked(&self) -> Vector {
        self.h1.iter().chain(&self.h2).cloned().collect()
    }
}

/// Entries of `u ↦ (Q(z) − Q(u))/(z − u)`.
fn difference_quotient(q: &RationalMatrixFunction, z: &Scalar) -> Result<Vec<Vec<RatFun>>, RatFunError> {
    let qz = q.eval(z)?;
    let inv = RatFun::new(Poly::one(), Poly::linear_root(z))?;
    let p = q.size();
    Ok((0..p)
        .map(|i| (0..p).map(|j| &(q.entry(i, j) - &RatFun::constant(qz.get(i, j).clone())) * &inv).collect())
        .collect())
}

/// Coefficient matrix of `Σ_b M_b(u) x_b ≡ 0` after clearing denominators:
/// one row per (row of `M`, power of `u`).
fn coefficient_system(blocks: &[&[Vec<RatFun>]]) -> Matrix {
    let rows = blocks[0].len();
    let ncols: usize = blocks.iter().map(|b| b.first().map_or(0, Vec::len)).sum();
    let d = blocks.iter().flat_map(|b| b.iter().flatten()).fold(Poly::one(), |acc, e| Poly::lcm(&acc, e.den()));
    let polys: Vec<Vec<Poly>> = (0..rows)
        .map(|i| {
            blocks
                .iter()
                .flat_map(|b| b[i].iter().map(|e| e.num() * &d.exact_div(e.den()).expect("lcm is a multiple")))
                .collect()
        })
        .collect();
    let Some(deg) = polys.iter().flatten().filter_map(Poly::degree).max() else {
        return Matrix::zeros(0, ncols);
    };
    let k = deg + 1;
    Matrix::from_fn(rows * k, ncols, |r, c| polys[r / k][c].coeff(r % k))
}

fn kernel(m: &Matrix) -> Vec<Vector> {
    if m.rows() == 0 {
        (0..m.cols()).map(|k| unit_vector(m.cols(), k)).collect()
    } else {
        m.kernel_basis()
    }
}

/// All `h` with `N_Q(z, w) h ≡ 0`, i.e. `Q(·)h` constant.
pub fn singular_directions(q: &RationalMatrixFunction) -> Vec<Vector> {
    let dq = q.derivative();
    let k = kernel(&coefficient_system(&[dq.entries()]));
    Subspace::span(q.size(), &k).basis().to_vec()
}

fn singular_subspace(q: &RationalMatrixFunction) -> Subspace {
    Subspace::span(q.size(), &singular_directions(q))
}

/// `E = (N₁(z₁, z₁)h₁, h₁) + (N₂(z₂, z₂)h₂, h₂)`.
pub fn e_value(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    z1: &Scalar,
    z2: &Scalar,
    h1: &[Scalar],
    h2: &[Scalar],
) -> Result<Scalar, RatFunError> {
    let mut e = Scalar::zero();
    if !vec_is_zero(h1) {
        e += dot(&q1.nevanlinna_kernel(z1, z1)?.mul_vec(h1), h1);
    }
    if !vec_is_zero(h2) {
        e += dot(&q2.nevanlinna_kernel(z2, z2)?.mul_vec(h2), h2);
    }
    Ok(e)
}

fn sign_of(e: &Scalar) -> SolutionSign {
    debug_assert!(e.is_real(), "E is real for symmetric functions");
    match e.real_sign() {
        Ordering::Greater => SolutionSign::Positive,
        Ordering::Less => SolutionSign::Negative,
        Ordering::Equal => SolutionSign::Neutral,
    }
}

fn classify_with(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    sd1: &Subspace,
    sd2: &Subspace,
    sol: &CriterionSolution,
) -> Result<CriterionSolution, RatFunError> {
    let mut out = sol.clone();
    out.e_value = e_value(q1, q2, &sol.z1, &sol.z2, &sol.h1, &sol.h2)?;
    if vec_is_zero(&sol.h1) && vec_is_zero(&sol.h2) {
        out.kind = SolutionKind::Trivial;
        out.sign = SolutionSign::NotApplicable;
    } else if sd1.contains(&sol.h1) && sd2.contains(&sol.h2) {
        out.kind = SolutionKind::Singular;
        out.sign = SolutionSign::NotApplicable;
    } else {
        out.kind = SolutionKind::Nontrivial;
        out.sign = sign_of(&out.e_value);
    }
    Ok(out)
}

/// Recomputes `E`, the kind and the sign of `sol`.
pub fn classify_e(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    sol: &CriterionSolution,
) -> Result<CriterionSolution, RatFunError> {
    classify_with(q1, q2, &singular_subspace(q1), &singular_subspace(q2), sol)
}

/// `N₁(z₁, w)h₁ + N₂(z₂, w)h₂` as rational functions of `u = w̄`.
pub fn eq52_residual(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    sol: &CriterionSolution,
) -> Result<Vec<RatFun>, RatFunError> {
    let f1 = difference_quotient(q1, &sol.z1)?;
    let f2 = difference_quotient(q2, &sol.z2)?;
    let apply = |f: &[Vec<RatFun>], h: &[Scalar], i: usize| {
        f[i].iter().zip(h).fold(RatFun::zero(), |acc, (e, x)| &acc + &e.scale(x))
    };
    Ok((0..q1.size()).map(|i| &apply(&f1, &sol.h1, i) + &apply(&f2, &sol.h2, i)).collect())
}

fn blank(z1: &Scalar, z2: &Scalar, h1: Vector, h2: Vector, provenance: Provenance) -> CriterionSolution {
    CriterionSolution {
        z1: z1.clone(),
        z2: z2.clone(),
        h1,
        h2,
        kind: SolutionKind::Trivial,
        sign: SolutionSign::NotApplicable,
        e_value: Scalar::zero(),
        sum_singular: false,
        provenance,
    }
}

/// Kernel of the criteria equation at fixed `(z₁, z₂)`. Singular directions
/// come first; the remaining basis diagonalizes `E`, so the signs of the
/// returned nontrivial solutions are the inertia of `E` on the solution space
/// modulo singular directions.
pub fn solve_eq52_at(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Vec<CriterionSolution>, RatFunError> {
    let (sd1, sd2) = (singular_subspace(q1), singular_subspace(q2));
    solve_at_with(q1, q2, &sd1, &sd2, z1, z2, Provenance::FixedPoints)
}

fn solve_at_with(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    sd1: &Subspace,
    sd2: &Subspace,
    z1: &Scalar,
    z2: &Scalar,
    provenance: Provenance,
) -> Result<Vec<CriterionSolution>, RatFunError> {
    let p = q1.size();
    if q2.size() != p {
        return Err(RatFunError::Shape(format!("summands have sizes {p} and {}", q2.size())));
    }
    let f1 = difference_quotient(q1, z1)?;
    let f2 = difference_quotient(q2, z2)?;
    let ker = Subspace::span(2 * p, &kernel(&coefficient_system(&[&f1, &f2])));
    let split = |v: &Vector| (v[..p].to_vec(), v[p..].to_vec());
    let mut sing: Vec<Vector> = Vec::new();
    for a in sd1.basis() {
        sing.push(a.iter().cloned().chain(std::iter::repeat_n(Scalar::zero(), p)).collect());
    }
    for b in sd2.basis() {
        sing.push(std::iter::repeat_n(Scalar::zero(), p).chain(b.iter().cloned()).collect());
    }
    let sing = Subspace::span(2 * p, &sing);
    let rest = sing.complement_in(&ker);
    let mut out = Vec::new();
    for v in sing.basis() {
        let (h1, h2) = split(v);
        out.push(classify_with(q1, q2, sd1, sd2, &blank(z1, z2, h1, h2, provenance))?);
    }
    if rest.is_empty() {
        return Ok(out);
    }
    let n1 = q1.nevanlinna_kernel(z1, z1)?;
    let n2 = q2.nevanlinna_kernel(z2, z2)?;
    let form = |x: &Vector, y: &Vector| {
        let (x1, x2) = split(x);
        let (y1, y2) = split(y);
        &dot(&n1.mul_vec(&x1), &y1) + &dot(&n2.mul_vec(&x2), &y2)
    };
    let g = Matrix::from_fn(rest.len(), rest.len(), |a, b| form(&rest[b], &rest[a]));
    let t = congruence_diagonalize(&g).expect("E is Hermitian").transform;
    let basis = Matrix::from_columns(2 * p, &rest);
    for c in 0..rest.len() {
        let (h1, h2) = split(&(&basis * &t).col(c));
        out.push(classify_with(q1, q2, sd1, sd2, &blank(z1, z2, h1, h2, provenance))?);
    }
    Ok(out)
}

fn domain_points(q: &RationalMatrixFunction, n: usize) -> Vec<Scalar> {
    upper_lattice().filter(|z| !q.is_pole(z)).take(n).collect()
}

/// Solutions of the special case `z₁ = z₂ = z`, `h₁ = h₂ = h`. Every solution
/// is verified by substituting back into the rational identity in `w`.
pub fn solve_eq53(q1: &RationalMatrixFunction, q2: &RationalMatrixFunction) -> Vec<CriterionSolution> {
    assert_eq!(q1.size(), q2.size(), "summands must act on the same space");
    let p = q1.size();
    let q = q1.add(q2).expect("sizes agree");
    let (sd1, sd2) = (singular_subspace(q1), singular_subspace(q2));
    let sd = singular_subspace(&q);
    let mut out = Vec::new();
    let rep = upper_lattice().find(|z| !q1.is_pole(z) && !q2.is_pole(z)).expect("finitely many poles");
    let push = |z: &Scalar, h: &Vector, provenance: Provenance, out: &mut Vec<CriterionSolution>| {
        let mut s = blank(z, z, h.clone(), h.clone(), provenance);
        s.sum_singular = sd.contains(h);
        let Ok(s) = classify_with(q1, q2, &sd1, &sd2, &s) else { return };
        match eq52_residual(q1, q2, &s) {
            Ok(r) if r.iter().all(RatFun::is_zero) => out.push(s),
            _ => debug_assert!(false, "back-substitution rejected a solution"),
        }
    };
    for h in sd.basis() {
        push(&rep, h, Provenance::Identity, &mut out);
    }
    for z in rank_drop_points(&q, &sd) {
        if q1.is_pole(&z) || q2.is_pole(&z) {
            continue;
        }
        let Ok(f) = difference_quotient(&q, &z) else { continue };
        let ker = Subspace::span(p, &kernel(&coefficient_system(&[&f])));
        for h in sd.complement_in(&ker) {
            push(&z, &h, Provenance::RankDrop, &mut out);
        }
    }
    out
}

/// Exact roots of the gcd of the maximal minors of `M(z)` restricted to a
/// complement of the common kernel, where `M(z)h = 0` encodes
/// `(P(z)D(u) − P(u)D(z))h ≡ 0` for `Q = P/D`.
fn rank_drop_points(q: &RationalMatrixFunction, common: &Subspace) -> Vec<Scalar> {
    let p = q.size();
    let d = q.common_denominator();
    let pm: Vec<Vec<Poly>> = (0..p)
        .map(|i| (0..p).map(|j| q.entry(i, j).num() * &d.exact_div(q.entry(i, j).den()).unwrap()).collect())
        .collect();
    let k = pm.iter().flatten().chain([&d]).filter_map(Poly::degree).max().unwrap_or(0) + 1;
    let comp = common.complement_in(&Subspace::full(p));
    let r = comp.len();
    if r == 0 {
        return Vec::new();
    }
    let rows: Vec<Vec<Poly>> = (0..p * k)
        .map(|row| {
            let (i, t) = (row / k, row % k);
            comp.iter()
                .map(|v| {
                    (0..p).fold(Poly::zero(), |acc, c| {
                        let m = &pm[i][c].scale(&d.coeff(t)) - &d.scale(&pm[i][c].coeff(t));
                        &acc + &m.scale(&v[c])
                    })
                })
                .collect()
        })
        .collect();
    let mut g = Poly::zero();
    for sel in combinations(rows.len(), r) {
        let minor: Vec<Vec<Poly>> = sel.iter().map(|&i| rows[i].clone()).collect();
        g = Poly::gcd(&g, &poly_determinant(&minor));
        if g.is_constant() && !g.is_zero() {
            return Vec::new();
        }
    }
    if g.is_zero() {
        return Vec::new();
    }
    roots(&g).exact.into_iter().map(|(z, _)| z).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "strategy")]
pub enum ScanStrategy {
    /// All pairs from the first `points` lattice points off the poles.
    Grid { points: usize },
    /// Elimination over the rank-drop locus; scalar functions only.
    Algebraic,
}

/// A piece of the nontrivial solution locus in `(z₁, z₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum SolutionComponent {
    Everywhere,
    FixedZ1 { z1: Scalar },
    FixedZ2 { z2: Scalar },
    Point { z1: Scalar, z2: Scalar },
    /// One-dimensional locus, given by its defining equation when known.
    Curve { equation: Option<String> },
    Unresolved { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub strategy: ScanStrategy,
    pub solutions: Vec<CriterionSolution>,
    pub components: Vec<SolutionComponent>,
    /// The nontrivial locus is described exactly by `components`.
    pub complete: bool,
}

/// Nontrivial solutions of the criteria equation over many point pairs.
pub fn solve_eq52_scan(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    strategy: &ScanStrategy,
) -> ScanReport {
    match strategy {
        ScanStrategy::Grid { points } => grid_scan(q1, q2, *points),
        ScanStrategy::Algebraic if q1.size() == 1 && q2.size() == 1 => algebraic_scan(q1, q2),
        ScanStrategy::Algebraic => {
            let mut r = grid_scan(q1, q2, 4);
            r.strategy = ScanStrategy::Algebraic;
            r.components.push(SolutionComponent::Unresolved {
                detail: "elimination needs scalar functions; grid fallback".into(),
            });
            r
        }
    }
}

fn nontrivial_at(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    sd: (&Subspace, &Subspace),
    z1: &Scalar,
    z2: &Scalar,
    provenance: Provenance,
) -> Vec<CriterionSolution> {
    solve_at_with(q1, q2, sd.0, sd.1, z1, z2, provenance)
        .map(|v| v.into_iter().filter(|s| s.kind == SolutionKind::Nontrivial).collect())
        .unwrap_or_default()
}

fn grid_scan(q1: &RationalMatrixFunction, q2: &RationalMatrixFunction, points: usize) -> ScanReport {
    let (sd1, sd2) = (singular_subspace(q1), singular_subspace(q2));
    let (g1, g2) = (domain_points(q1, points), domain_points(q2, points));
    let mut solutions = Vec::new();
    for z1 in &g1 {
        for z2 in &g2 {
            solutions.extend(nontrivial_at(q1, q2, (&sd1, &sd2), z1, z2, Provenance::GridPoint));
        }
    }
    ScanReport { strategy: ScanStrategy::Grid { points }, solutions, components: Vec::new(), complete: false }
}

/// Bivariate polynomial as coefficients in `z₂` with entries in `C[z₁]`.
type BiPoly = Vec<Poly>;

fn trim(mut b: BiPoly) -> BiPoly {
    while b.last().is_some_and(Poly::is_zero) {
        b.pop();
    }
    b
}

/// `Res_{z₂}(f, g)` via the Sylvester matrix with polynomial entries.
fn resultant(f: &BiPoly, g: &BiPoly) -> Poly {
    let (f, g) = (trim(f.clone()), trim(g.clone()));
    if f.is_empty() || g.is_empty() {
        return Poly::zero();
    }
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 && n == 0 {
        return Poly::gcd(&f[0], &g[0]);
    }
    let size = m + n;
    let mut s = vec![vec![Poly::zero(); size]; size];
    for i in 0..n {
        for (t, c) in f.iter().enumerate() {
            s[i][i + t] = c.clone();
        }
    }
    for i in 0..m {
        for (t, c) in g.iter().enumerate() {
            s[n + i][i + t] = c.clone();
        }
    }
    poly_determinant(&s)
}

/// Coefficients in `u` of `K(z, u) = (n(z)d(u) − n(u)d(z))/(z − u)`, each a
/// polynomial in `z`.
fn kernel_numerator(f: &RatFun) -> Vec<Poly> {
    let (n, d) = (f.num(), f.den());
    let top = n.degree().unwrap_or(0).max(d.degree().unwrap_or(0));
    let c: Vec<Poly> = (0..=top).map(|k| &n.scale(&d.coeff(k)) - &d.scale(&n.coeff(k))).collect();
    // Synthetic division by (u − z) over C[z], then a sign flip.
    let z = Poly::x();
    let mut q = vec![Poly::zero(); top];
    let mut carry = Poly::zero();
    for k in (1..=top).rev() {
        carry = &c[k] + &(&z * &carry);
        q[k - 1] = carry.clone();
    }
    debug_assert!((&c[0] + &(&z * &carry)).is_zero());
    q.iter().map(|p| -p).collect()
}

fn times_poly_in_u(a: &[Poly], d: &Poly) -> Vec<Poly> {
    let len = a.len() + d.degree().unwrap_or(0);
    let mut out = vec![Poly::zero(); len.max(1)];
    for (i, ai) in a.iter().enumerate() {
        for (j, dj) in d.coeffs().iter().enumerate() {
            out[i + j] = &out[i + j] + &ai.scale(dj);
        }
    }
    out
}

fn primitive(v: &[Poly]) -> Vec<Poly> {
    let g = v.iter().fold(Poly::zero(), |acc, p| Poly::gcd(&acc, p));
    v.iter().map(|p| p.exact_div(&g).expect("content divides")).collect()
}

fn describe(b: &BiPoly) -> String {
    b.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, c)| format!("({c:?})·z2^{t}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Scalar case. With `F_i(z, u) = K_i(z, u)/(d_i(z)d_i(u))`, a nontrivial
/// solution at `(z₁, z₂)` exists iff the `u`-coefficient vectors `a(z₁)` of
/// `K₁(z₁, u)d₂(u)` and `b(z₂)` of `K₂(z₂, u)d₁(u)` are parallel. After
/// removing polynomial content neither vector vanishes, and the locus is
/// the common zero set of the 2×2 minors.
fn algebraic_scan(q1: &RationalMatrixFunction, q2: &RationalMatrixFunction) -> ScanReport {
    let (f1, f2) = (q1.entry(0, 0), q2.entry(0, 0));
    let mut report = ScanReport { strategy: ScanStrategy::Algebraic, solutions: Vec::new(), components: Vec::new(), complete: true };
    if f1.derivative().is_zero() || f2.derivative().is_zero() {
        // A constant summand only contributes singular directions.
        return report;
    }
    let (sd1, sd2) = (singular_subspace(q1), singular_subspace(q2));
    let sd = (&sd1, &sd2);
    let mut a = times_poly_in_u(&kernel_numerator(f1), f2.den());
    let mut b = times_poly_in_u(&kernel_numerator(f2), f1.den());
    let len = a.len().max(b.len());
    a.resize(len, Poly::zero());
    b.resize(len, Poly::zero());
    let keep: Vec<usize> = (0..len).filter(|&k| !a[k].is_zero() || !b[k].is_zero()).collect();
    let a = primitive(&keep.iter().map(|&k| a[k].clone()).collect::<Vec<_>>());
    let b = primitive(&keep.iter().map(|&k| b[k].clone()).collect::<Vec<_>>());
    let m = a.len();
    let const_a = a.iter().all(Poly::is_constant);
    let const_b = b.iter().all(Poly::is_constant);
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|j| (j + 1..m).map(move |k| (j, k))).collect();
    // Minor (j, k) as a polynomial in z₂ with coefficients in C[z₁].
    let minor = |j: usize, k: usize| -> BiPoly {
        let deg = b[j].coeffs().len().max(b[k].coeffs().len());
        (0..deg).map(|t| &a[j].scale(&b[k].coeff(t)) - &a[k].scale(&b[j].coeff(t))).collect()
    };
    let minors: Vec<BiPoly> = pairs.iter().map(|&(j, k)| trim(minor(j, k))).collect();
    let samples1 = domain_points(q1, 2);
    let samples2 = domain_points(q2, 2);

    let eval_z1 = |bp: &BiPoly, z1: &Scalar| Poly::new(bp.iter().map(|c| c.eval(z1)).collect());
    let eval_z2 = |bp: &BiPoly, z2: &Scalar| {
        bp.iter().enumerate().fold(Poly::zero(), |acc, (t, c)| &acc + &c.scale(&z2.pow(t as u32)))
    };

    if minors.iter().all(Vec::is_empty) {
        report.components.push(SolutionComponent::Everywhere);
        for z1 in &samples1 {
            for z2 in &samples2 {
                report.solutions.extend(nontrivial_at(q1, q2, sd, z1, z2, Provenance::Algebraic));
            }
        }
        return report;
    }
    if const_a && const_b {
        return report;
    }
    let mut points: Vec<(Scalar, Scalar)> = Vec::new();
    let fixed = |side: u8, g: Poly, report: &mut ScanReport, points: &mut Vec<(Scalar, Scalar)>| {
        let rs = roots(&g);
        if !rs.approx.is_empty() {
            report.complete = false;
            report.components.push(SolutionComponent::Unresolved {
                detail: format!("{} irrational root(s) of {g:?}", rs.approx.len()),
            });
        }
        for (z, _) in rs.exact {
            match side {
                1 if !q1.is_pole(&z) => {
                    report.components.push(SolutionComponent::FixedZ1 { z1: z.clone() });
                    points.extend(samples2.iter().map(|w| (z.clone(), w.clone())));
                }
                2 if !q2.is_pole(&z) => {
                    report.components.push(SolutionComponent::FixedZ2 { z2: z.clone() });
                    points.extend(samples1.iter().map(|w| (w.clone(), z.clone())));
                }
                _ => {}
            }
        }
    };
    if const_a || const_b {
        // One direction is fixed; the other side must meet it at finitely many points.
        let (side, polys): (u8, Vec<Poly>) = if const_b {
            (1, minors.iter().map(|bp| bp.first().cloned().unwrap_or_else(Poly::zero)).collect())
        } else {
            let z1 = Scalar::zero();
            (2, minors.iter().map(|bp| eval_z1(bp, &z1)).collect())
        };
        let g = polys.iter().fold(Poly::zero(), |acc, p| Poly::gcd(&acc, p));
        fixed(side, g, &mut report, &mut points);
    } else if minors.len() == 1 {
        report.components.push(SolutionComponent::Curve { equation: Some(describe(&minors[0])) });
        sample_curve(&minors, &samples1, q2, &eval_z1, &mut points, &mut report);
    } else {
        let mut resolved = false;
        for trial in 0..3u64 {
            let combo = |salt: u64| -> BiPoly {
                let len = minors.iter().map(Vec::len).max().unwrap_or(0);
                (0..len)
                    .map(|t| {
                        minors.iter().enumerate().fold(Poly::zero(), |acc, (s, bp)| {
                            let c = ((s as u64 + 1) * (trial + 2) * salt + (s as u64).pow(2) * 31) % 97 + 1;
                            match bp.get(t) {
                                Some(p) => &acc + &p.scale(&Scalar::int(c as i64)),
                                None => acc,
                            }
                        })
                    })
                    .collect()
            };
            let r = resultant(&combo(7919), &combo(104729));
            if r.is_zero() {
                continue;
            }
            resolved = true;
            let rs = roots(&r);
            if !rs.approx.is_empty() {
                report.complete = false;
                report.components.push(SolutionComponent::Unresolved {
                    detail: format!("{} irrational candidate(s) for z1", rs.approx.len()),
                });
            }
            for (z1, _) in rs.exact.into_iter().filter(|(z, _)| !q1.is_pole(z)) {
                let g = minors.iter().fold(Poly::zero(), |acc, bp| Poly::gcd(&acc, &eval_z1(bp, &z1)));
                if g.is_zero() {
                    report.components.push(SolutionComponent::FixedZ1 { z1: z1.clone() });
                    points.extend(samples2.iter().map(|w| (z1.clone(), w.clone())));
                    continue;
                }
                let rs2 = roots(&g);
                if !rs2.approx.is_empty() {
                    report.complete = false;
                }
                for (z2, _) in rs2.exact.into_iter().filter(|(z, _)| !q2.is_pole(z)) {
                    if minors.iter().all(|bp| eval_z2(bp, &z2).eval(&z1).is_zero()) {
                        report.components.push(SolutionComponent::Point { z1: z1.clone(), z2: z2.clone() });
                        points.push((z1.clone(), z2));
                    }
                }
            }
            break;
        }
        if !resolved {
            report.complete = false;
            report.components.push(SolutionComponent::Curve { equation: None });
            sample_curve(&minors, &samples1, q2, &eval_z1, &mut points, &mut report);
        }
    }
    for (z1, z2) in points {
        report.solutions.extend(nontrivial_at(q1, q2, sd, &z1, &z2, Provenance::Algebraic));
    }
    report
}

fn sample_curve(
    minors: &[BiPoly],
    samples1: &[Scalar],
    q2: &RationalMatrixFunction,
    eval_z1: &dyn Fn(&BiPoly, &Scalar) -> Poly,
    points: &mut Vec<(Scalar, Scalar)>,
    report: &mut ScanReport,
) {
    for z1 in samples1 {
        let g = minors.iter().fold(Poly::zero(), |acc, bp| Poly::gcd(&acc, &eval_z1(bp, z1)));
        if g.is_zero() {
            continue;
        }
        let rs = roots(&g);
        if !rs.approx.is_empty() {
            report.components.push(SolutionComponent::Unresolved {
                detail: format!("curve points over z1 = {z1} are irrational"),
            });
        }
        points.extend(rs.exact.into_iter().filter(|(z, _)| !q2.is_pole(z)).map(|(z2, _)| (z1.clone(), z2)));
    }
}

/// Case labels of the structure of `K̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureCase {
    /// `K̃ = L̄ = L₁`.
    A,
    /// `K̃ = L₁ [+] L₂` with `L₂` containing negative vectors.
    B,
    /// `K̃ = L₁ [+] L₂` with `L₂` positive definite.
    C,
    /// `L₀ ≠ {0}`.
    D,
}

impl StructureCase {
    pub fn label(&self) -> &'static str {
        match self {
            StructureCase::A => "a",
            StructureCase::B => "b",
            StructureCase::C => "c",
            StructureCase::D => "d",
        }
    }
}

/// Evidence computed from the functions alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalyticRoute {
    pub scan: ScanStrategy,
    pub scan_complete: bool,
    pub nontrivial_52: usize,
    pub nonpositive_52: usize,
    pub nontrivial_53: usize,
    /// Sampled lower bounds for `κ`, `κ₁`, `κ₂`.
    pub kappa_lower_bound: usize,
    pub kappa1_lower_bound: usize,
    pub kappa2_lower_bound: usize,
}

/// Evidence computed from the realizations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricRoute {
    pub kappa: usize,
    /// `κ` of a canonical model of `Q₁ + Q₂` built directly.
    pub kappa_direct: usize,
    pub minimal: bool,
    pub dim_l0: usize,
    pub inertia_l2: Inertia,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub analytic: AnalyticRoute,
    pub geometric: GeometricRoute,
    pub agree: bool,
    /// Implications between the routes that failed.
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kappa: usize,
    pub kappa1: usize,
    pub kappa2: usize,
    pub preserved: bool,
    pub minimal_36: bool,
    #[serde(rename = "dim_L0")]
    pub dim_l0: usize,
    #[serde(rename = "inertia_L2")]
    pub inertia_l2: Inertia,
    /// Inertia of the J-orthogonal complement of `L̄` in `K̃`.
    #[serde(rename = "inertia_Lbar_perp")]
    pub inertia_lbar_perp: Inertia,
    pub structure_case: StructureCase,
    pub decomposition: DecompositionSummary,
    pub solutions: Vec<CriterionSolution>,
    /// Eigenvalues of `Ã` at which `Q₁ + Q₂` has no pole.
    pub hidden_spectrum: Vec<Scalar>,
    pub cross_check: CrossCheck,
}

/// Classifies a sum from its decomposition and cross-checks against the
/// criteria equations.
pub fn theorem8_verdict(q1: &RationalMatrixFunction, q2: &RationalMatrixFunction) -> Result<Verdict, SumError> {
    theorem8_verdict_with(q1, q2, None)
}

/// As [`theorem8_verdict`] with an explicit scan strategy; the default is
/// algebraic for scalar functions and a 4-point grid otherwise.
pub fn theorem8_verdict_with(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    strategy: Option<&ScanStrategy>,
) -> Result<Verdict, SumError> {
    if q1.size() != q2.size() {
        return Err(SumError::DimensionMismatch(format!("summands have sizes {} and {}", q1.size(), q2.size())));
    }
    let budget = ModelBudget::default();
    let r1 = canonical_model(q1, &budget)?;
    let r2 = canonical_model(q2, &budget)?;
    let rep = build_sum(&r1, &r2)?;
    let q = q1.add(q2)?;
    let d = &rep.decomposition;
    let (kappa, kappa1, kappa2) = (rep.kappa(), r1.kappa(), r2.kappa());
    let dim_l0 = d.l0.dim();
    let preserved = kappa == kappa1 + kappa2;
    if preserved != (dim_l0 == 0 && d.inertia_l2.minus == 0) {
        return Err(SumError::VerificationFailed("preservation disagrees with the L₀/L₂ inertia".into()));
    }
    let structure_case = if dim_l0 > 0 {
        StructureCase::D
    } else if d.l2.is_zero() {
        StructureCase::A
    } else if d.inertia_l2.minus > 0 {
        StructureCase::B
    } else {
        StructureCase::C
    };

    let scan_strategy = match strategy {
        Some(s) => s.clone(),
        None if q.size() == 1 => ScanStrategy::Algebraic,
        None => ScanStrategy::Grid { points: 4 },
    };
    let scan = solve_eq52_scan(q1, q2, &scan_strategy);
    let eq53 = solve_eq53(q1, q2);
    let nontrivial_52 = scan.solutions.iter().filter(|s| s.kind == SolutionKind::Nontrivial).count();
    let nonpositive_52 = scan
        .solutions
        .iter()
        .filter(|s| s.kind == SolutionKind::Nontrivial && s.sign != SolutionSign::Positive)
        .count();
    let nontrivial_53 = eq53.iter().filter(|s| s.kind == SolutionKind::Nontrivial).count();
    let analytic = AnalyticRoute {
        scan: scan_strategy,
        scan_complete: scan.complete,
        nontrivial_52,
        nonpositive_52,
        nontrivial_53,
        kappa_lower_bound: negative_squares_lower_bound(&q, &SamplePlan::default_for(&q))?,
        kappa1_lower_bound: negative_squares_lower_bound(q1, &SamplePlan::default_for(q1))?,
        kappa2_lower_bound: negative_squares_lower_bound(q2, &SamplePlan::default_for(q2))?,
    };
    let geometric = GeometricRoute {
        kappa,
        kappa_direct: canonical_model(&q, &budget)?.kappa(),
        minimal: rep.is_minimal(),
        dim_l0,
        inertia_l2: d.inertia_l2,
    };
    let mut violations = Vec::new();
    let mut require = |ok: bool, what: &str| {
        if !ok {
            violations.push(what.to_string());
        }
    };
    require(nontrivial_52 == 0 || !geometric.minimal, "nontrivial solution but minimal representation");
    require(nonpositive_52 == 0 || !preserved, "non-positive solution but κ preserved");
    require(nontrivial_53 == 0 || (!preserved && dim_l0 > 0), "special-case solution but L₀ = {0}");
    require(geometric.kappa_direct == kappa, "κ of L₁ differs from a direct canonical model");
    require(analytic.kappa_lower_bound <= kappa, "sampled lower bound exceeds κ");
    require(analytic.kappa1_lower_bound <= kappa1 && analytic.kappa2_lower_bound <= kappa2, "summand lower bound exceeds κ_i");
    require(
        analytic.kappa_lower_bound != kappa1 + kappa2 || preserved,
        "sampled bound reaches κ₁ + κ₂ but κ is smaller",
    );
    let agree = violations.is_empty();

    let hidden_spectrum = rep
        .tilde_a()
        .finite_eigenvalues()
        .exact
        .into_iter()
        .map(|e| e.value)
        .filter(|z| !q.is_pole(z))
        .collect();
    let mut solutions = scan.solutions;
    solutions.extend(eq53);
    Ok(Verdict {
        kappa,
        kappa1,
        kappa2,
        preserved,
        minimal_36: geometric.minimal,
        dim_l0,
        inertia_l2: d.inertia_l2,
        inertia_lbar_perp: {
            let k = rep.sum.space();
            k.inertia_of(&k.ortho_complement(&rep.lbar))
        },
        structure_case,
        decomposition: d.summary(),
        solutions,
        hidden_spectrum,
        cross_check: CrossCheck { analytic, geometric, agree, violations },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeClass {
    Positive,
    Neutral,
    Negative,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeStep {
    pub n: usize,
    pub z: Scalar,
    /// Largest modulus of the (a)-functional over the probe set.
    pub a_max: f64,
    pub b: Scalar,
    /// Largest modulus of the (c)-functional over the probe set.
    pub c_max: f64,
    pub c_exact_zero: bool,
}

/// Trends of the limit expressions along a path. Heuristic: nothing here
/// certifies a limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub heuristic: bool,
    pub probe_points: Vec<Scalar>,
    pub steps: Vec<ProbeStep>,
    /// Step indices skipped because the path hit a pole.
    pub gaps: Vec<usize>,
    pub classification: ProbeClass,
    pub isotropic_candidate: bool,
}

fn modulus(s: &Scalar) -> f64 {
    let (re, im) = s.to_f64();
    re.hypot(im)
}

/// Evaluates the (a), (b), (c) expressions at `path(1), …, path(steps)`.
pub fn theorem10_probe(
    q1: &RationalMatrixFunction,
    q2: &RationalMatrixFunction,
    mut path: impl FnMut(usize) -> (Scalar, Vector),
    steps: usize,
) -> ProbeReport {
    let p = q1.size();
    let probe_points: Vec<Scalar> =
        upper_lattice().filter(|w| !q1.is_pole(w) && !q2.is_pole(w)).take(2).collect();
    let mut out = ProbeReport {
        heuristic: true,
        probe_points: probe_points.clone(),
        steps: Vec::new(),
        gaps: Vec::new(),
        classification: ProbeClass::Inconclusive,
        isotropic_candidate: false,
    };
    for n in 1..=steps {
        let (z, h) = path(n);
        let step = (|| -> Result<ProbeStep, RatFunError> {
            let b = e_value(q1, q2, &z, &z, &h, &h)?;
            let (mut a_max, mut c_max, mut c_zero) = (0f64, 0f64, true);
            for w in &probe_points {
                let v1 = q1.nevanlinna_kernel(&z, w)?.mul_vec(&h);
                let v2 = q2.nevanlinna_kernel(&z, w)?.mul_vec(&h);
                for k in 0..p {
                    let c = &v1[k] + &v2[k];
                    a_max = a_max.max(modulus(&v1[k])).max(modulus(&v2[k]));
                    c_max = c_max.max(modulus(&c));
                    c_zero &= c.is_zero();
                }
            }
            Ok(ProbeStep { n, z: z.clone(), a_max, b, c_max, c_exact_zero: c_zero })
        })();
        match step {
            Ok(s) => out.steps.push(s),
            Err(_) => out.gaps.push(n),
        }
    }
    if let Some(last) = out.steps.last() {
        let scale = out.steps.iter().map(|s| modulus(&s.b)).fold(1f64, f64::max);
        let b = last.b.to_f64().0;
        out.classification = if !b.is_finite() || scale > 1e12 {
            ProbeClass::Inconclusive
        } else if last.b.is_zero() || b.abs() < 1e-9 * scale {
            ProbeClass::Neutral
        } else if b > 0.0 {
            ProbeClass::Positive
        } else {
            ProbeClass::Negative
        };
        out.isotropic_candidate =
            out.classification == ProbeClass::Neutral && (last.c_exact_zero || last.c_max < 1e-9);
    }
    out
}
