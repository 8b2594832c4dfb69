//! Linear relations between finite-dimensional Krein spaces, stored as graph
//! subspaces of the product space.

use crate::krein::{KreinError, KreinSpace, Subspace};
use crate::linalg::{vec_is_zero, Matrix, Scalar, Vector};
use crate::poly::{poly_determinant, roots, ApproxRoot, Poly};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error(transparent)]
    Krein(#[from] KreinError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is degenerate")]
    DegenerateSubspace,
    #[error("{0} is not in the resolvent set")]
    NotInResolventSet(Scalar),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// A linear relation `T ⊆ H × K`. Graph vectors are stacked `(f; g)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearRelation {
    dom: KreinSpace,
    ran: KreinSpace,
    graph: Subspace,
}

impl std::fmt::Debug for LinearRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b) = self.pair_matrices();
        write!(f, "LinearRelation {{ F: {a:?}, G: {b:?} }}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Domain,
    Range,
    Kernel,
    Mul,
    Infty,
}

fn stack(f: &[Scalar], g: &[Scalar]) -> Vector {
    f.iter().chain(g).cloned().collect()
}

impl LinearRelation {
    pub fn new(dom: KreinSpace, ran: KreinSpace, graph: Subspace) -> Result<Self, RelationError> {
        if graph.ambient_dim() != dom.dim() + ran.dim() {
            return Err(RelationError::DimensionMismatch(format!(
                "graph lives in dimension {}, expected {}",
                graph.ambient_dim(),
                dom.dim() + ran.dim()
            )));
        }
        Ok(LinearRelation { dom, ran, graph })
    }

    /// Span of the given pairs `(f, g)`.
    pub fn from_pairs(dom: KreinSpace, ran: KreinSpace, pairs: &[(Vector, Vector)]) -> Result<Self, RelationError> {
        let (n, m) = (dom.dim(), ran.dim());
        if pairs.iter().any(|(f, g)| f.len() != n || g.len() != m) {
            return Err(RelationError::DimensionMismatch("pair has the wrong length".into()));
        }
        let vs: Vec<Vector> = pairs.iter().map(|(f, g)| stack(f, g)).collect();
        Ok(LinearRelation { graph: Subspace::span(n + m, &vs), dom, ran })
    }

    /// Span of the column pairs of `[f; g]`.
    pub fn from_columns(dom: KreinSpace, ran: KreinSpace, f: &Matrix, g: &Matrix) -> Result<Self, RelationError> {
        if f.cols() != g.cols() {
            return Err(RelationError::DimensionMismatch("F and G have different column counts".into()));
        }
        let pairs: Vec<(Vector, Vector)> = f.columns().into_iter().zip(g.columns()).collect();
        Self::from_pairs(dom, ran, &pairs)
    }

    /// Graph of a matrix acting from `dom` to `ran`.
    pub fn graph_between(dom: KreinSpace, ran: KreinSpace, m: &Matrix) -> Result<Self, RelationError> {
        if m.cols() != dom.dim() || m.rows() != ran.dim() {
            return Err(RelationError::DimensionMismatch("matrix shape does not fit the spaces".into()));
        }
        let id = Matrix::identity(dom.dim());
        Self::from_columns(dom, ran, &id, m)
    }

    /// Graph of a square matrix in a single Krein space.
    pub fn graph_of(k: &KreinSpace, m: &Matrix) -> Result<Self, RelationError> {
        Self::graph_between(k.clone(), k.clone(), m)
    }

    /// `{0} × S`.
    pub fn multivalued(k: &KreinSpace, s: &Subspace) -> Self {
        let z = vec![Scalar::zero(); k.dim()];
        let pairs: Vec<(Vector, Vector)> = s.basis().iter().map(|v| (z.clone(), v.clone())).collect();
        Self::from_pairs(k.clone(), k.clone(), &pairs).unwrap()
    }

    /// `{(f, 0) : f ∈ S}`.
    pub fn zero_on(dom: &KreinSpace, ran: &KreinSpace, s: &Subspace) -> Self {
        let z = vec![Scalar::zero(); ran.dim()];
        let pairs: Vec<(Vector, Vector)> = s.basis().iter().map(|v| (v.clone(), z.clone())).collect();
        Self::from_pairs(dom.clone(), ran.clone(), &pairs).unwrap()
    }

    pub fn domain_space(&self) -> &KreinSpace {
        &self.dom
    }

    pub fn range_space(&self) -> &KreinSpace {
        &self.ran
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn is_in_single_space(&self) -> bool {
        self.dom == self.ran
    }

    /// Basis pairs `(F, G)` as `n × k` and `m × k` matrices.
    pub fn pair_matrices(&self) -> (Matrix, Matrix) {
        let b = self.graph.basis_matrix();
        let n = self.dom.dim();
        (b.rows_range(0, n), b.rows_range(n, n + self.ran.dim()))
    }

    pub fn pairs(&self) -> Vec<(Vector, Vector)> {
        let n = self.dom.dim();
        self.graph.basis().iter().map(|v| (v[..n].to_vec(), v[n..].to_vec())).collect()
    }

    pub fn contains_pair(&self, f: &[Scalar], g: &[Scalar]) -> bool {
        self.graph.contains(&stack(f, g))
    }

    pub fn part(&self, which: Part) -> Subspace {
        let (n, m) = (self.dom.dim(), self.ran.dim());
        let pairs = self.pairs();
        match which {
            Part::Domain => Subspace::span(n, &pairs.iter().map(|p| p.0.clone()).collect::<Vec<_>>()),
            Part::Range => Subspace::span(m, &pairs.iter().map(|p| p.1.clone()).collect::<Vec<_>>()),
            Part::Kernel => {
                let (f, g) = self.pair_matrices();
                Subspace::span(n, &g.kernel_basis().iter().map(|c| f.mul_vec(c)).collect::<Vec<_>>())
            }
            Part::Mul => {
                let (f, g) = self.pair_matrices();
                Subspace::span(m, &f.kernel_basis().iter().map(|c| g.mul_vec(c)).collect::<Vec<_>>())
            }
            Part::Infty => {
                let z = vec![Scalar::zero(); n];
                let vs: Vec<Vector> = self.part(Part::Mul).basis().iter().map(|g| stack(&z, g)).collect();
                Subspace::span(n + m, &vs)
            }
        }
    }

    pub fn domain(&self) -> Subspace {
        self.part(Part::Domain)
    }

    pub fn range(&self) -> Subspace {
        self.part(Part::Range)
    }

    pub fn kernel(&self) -> Subspace {
        self.part(Part::Kernel)
    }

    pub fn mul(&self) -> Subspace {
        self.part(Part::Mul)
    }

    pub fn is_operator(&self) -> bool {
        self.mul().is_zero()
    }

    /// Matrix of the relation when it is an everywhere-defined operator.
    pub fn as_matrix(&self) -> Option<Matrix> {
        let (f, g) = self.pair_matrices();
        if f.cols() != self.dom.dim() || f.rank() != f.cols() {
            return None;
        }
        Some(&g * &f.inverse()?)
    }

    /// `T(S) = {g : (f, g) ∈ T, f ∈ S}`; includes `T(0)`.
    pub fn image_of(&self, s: &Subspace) -> Subspace {
        let n = self.dom.dim();
        let (f, g) = self.pair_matrices();
        let sb = s.basis_matrix();
        let m = Matrix::hstack(n, &[&f, &-&sb]);
        let k = f.cols();
        let vs: Vec<Vector> = m.kernel_basis().iter().map(|c| g.mul_vec(&c[..k])).collect();
        Subspace::span(self.ran.dim(), &vs)
    }

    /// Restriction to pairs with first component in `s`.
    pub fn restrict(&self, s: &Subspace) -> LinearRelation {
        let n = self.dom.dim();
        let z = vec![Scalar::zero(); self.ran.dim()];
        let cyl: Vec<Vector> = s
            .basis()
            .iter()
            .map(|v| stack(v, &z))
            .chain((0..self.ran.dim()).map(|j| stack(&vec![Scalar::zero(); n], &crate::linalg::unit_vector(self.ran.dim(), j))))
            .collect();
        let cyl = Subspace::span(n + self.ran.dim(), &cyl);
        LinearRelation { graph: self.graph.intersect(&cyl), dom: self.dom.clone(), ran: self.ran.clone() }
    }

    pub fn inverse(&self) -> LinearRelation {
        let pairs: Vec<(Vector, Vector)> = self.pairs().into_iter().map(|(f, g)| (g, f)).collect();
        Self::from_pairs(self.ran.clone(), self.dom.clone(), &pairs).unwrap()
    }

    /// `T − z = {(f, g − z f)}`.
    pub fn shift(&self, z: &Scalar) -> Result<LinearRelation, RelationError> {
        self.require_single_space()?;
        let pairs: Vec<(Vector, Vector)> = self
            .pairs()
            .into_iter()
            .map(|(f, g)| {
                let h = g.iter().zip(&f).map(|(a, b)| a - &(z * b)).collect();
                (f, h)
            })
            .collect();
        Self::from_pairs(self.dom.clone(), self.ran.clone(), &pairs)
    }

    /// `zT = {(f, z g)}`.
    pub fn scalar_mul(&self, z: &Scalar) -> LinearRelation {
        let pairs: Vec<(Vector, Vector)> =
            self.pairs().into_iter().map(|(f, g)| (f, g.iter().map(|x| z * x).collect())).collect();
        Self::from_pairs(self.dom.clone(), self.ran.clone(), &pairs).unwrap()
    }

    /// Operator-like sum `{(f, g + g') : (f, g) ∈ T, (f, g') ∈ S}`.
    pub fn op_sum(&self, other: &LinearRelation) -> Result<LinearRelation, RelationError> {
        self.require_same_spaces(other)?;
        let n = self.dom.dim();
        let (f1, g1) = self.pair_matrices();
        let (f2, g2) = other.pair_matrices();
        let k1 = f1.cols();
        let m = Matrix::hstack(n, &[&f1, &-&f2]);
        let pairs: Vec<(Vector, Vector)> = m
            .kernel_basis()
            .iter()
            .map(|c| {
                let (a, b) = c.split_at(k1);
                let g: Vector = g1.mul_vec(a).iter().zip(g2.mul_vec(b)).map(|(x, y)| x + &y).collect();
                (f1.mul_vec(a), g)
            })
            .collect();
        Self::from_pairs(self.dom.clone(), self.ran.clone(), &pairs)
    }

    /// Subspace sum of graphs.
    pub fn span_sum(&self, other: &LinearRelation) -> Result<LinearRelation, RelationError> {
        self.require_same_spaces(other)?;
        Ok(LinearRelation { graph: self.graph.join(&other.graph), dom: self.dom.clone(), ran: self.ran.clone() })
    }

    /// Composition `S∘T = {(f, k) : (f, g) ∈ T, (g, k) ∈ S}`.
    pub fn compose(&self, s: &LinearRelation) -> Result<LinearRelation, RelationError> {
        if s.dom != self.ran {
            return Err(RelationError::DimensionMismatch("composition spaces do not match".into()));
        }
        let (ft, gt) = self.pair_matrices();
        let (fs, gs) = s.pair_matrices();
        let kt = ft.cols();
        let m = Matrix::hstack(self.ran.dim(), &[&gt, &-&fs]);
        let pairs: Vec<(Vector, Vector)> = m
            .kernel_basis()
            .iter()
            .map(|c| {
                let (a, b) = c.split_at(kt);
                (ft.mul_vec(a), gs.mul_vec(b))
            })
            .collect();
        Self::from_pairs(self.dom.clone(), s.ran.clone(), &pairs)
    }

    /// Inclusion of graphs (same spaces).
    pub fn is_subrelation_of(&self, other: &LinearRelation) -> bool {
        self.dom == other.dom && self.ran == other.ran && other.graph.contains_subspace(&self.graph)
    }

    /// `T⁺ = {(k, h) : [k, g] = [h, f] for all (f, g) ∈ T}`.
    pub fn adjoint(&self) -> LinearRelation {
        let (n, m) = (self.dom.dim(), self.ran.dim());
        let (f, g) = self.pair_matrices();
        let left = &g.adjoint() * self.ran.gram();
        let right = -&(&f.adjoint() * self.dom.gram());
        let rows = Matrix::hstack(f.cols(), &[&left, &right]);
        let ker = if self.graph.is_zero() {
            Matrix::identity(n + m).columns()
        } else {
            rows.kernel_basis()
        };
        LinearRelation { graph: Subspace::span(m + n, &ker), dom: self.ran.clone(), ran: self.dom.clone() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_in_single_space() && self.adjoint().graph.contains_subspace(&self.graph)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_in_single_space() && self.adjoint().graph == self.graph
    }

    /// `A₁ [+] A₂` in `K₁ [+] K₂`.
    pub fn direct_orthogonal_sum(a1: &LinearRelation, a2: &LinearRelation) -> Result<LinearRelation, RelationError> {
        a1.require_single_space()?;
        a2.require_single_space()?;
        let (n1, n2) = (a1.dom.dim(), a2.dom.dim());
        let k = a1.dom.direct_sum(&a2.dom);
        let z1 = vec![Scalar::zero(); n1];
        let z2 = vec![Scalar::zero(); n2];
        let mut pairs = Vec::new();
        for (f, g) in a1.pairs() {
            pairs.push((stack(&f, &z2), stack(&g, &z2)));
        }
        for (f, g) in a2.pairs() {
            pairs.push((stack(&z1, &f), stack(&z1, &g)));
        }
        Self::from_pairs(k.clone(), k, &pairs)
    }

    /// Matrix of `(A − z)⁻¹` for `z` in the resolvent set.
    pub fn resolvent(&self, z: &Scalar) -> Result<Matrix, RelationError> {
        self.require_single_space()?;
        let n = self.dom.dim();
        let (f, g) = self.pair_matrices();
        let u = &g - &f.scale(z);
        if u.rank() != n {
            return Err(RelationError::NotInResolventSet(z.clone()));
        }
        if u.kernel_basis().iter().any(|c| !vec_is_zero(&f.mul_vec(c))) {
            return Err(RelationError::NotInResolventSet(z.clone()));
        }
        let x = u.solve(&Matrix::identity(n)).ok_or_else(|| RelationError::NotInResolventSet(z.clone()))?;
        Ok(&f * &x)
    }

    pub fn is_in_resolvent_set(&self, z: &Scalar) -> bool {
        self.resolvent(z).is_ok()
    }

    /// `ker(A − α)`.
    pub fn eigenspace(&self, alpha: &Scalar) -> Subspace {
        let (f, g) = self.pair_matrices();
        let u = &g - &f.scale(alpha);
        Subspace::span(self.dom.dim(), &u.kernel_basis().iter().map(|c| f.mul_vec(c)).collect::<Vec<_>>())
    }

    /// Characteristic polynomial `gcd` of the maximal minors of `G − λF`, or
    /// `None` when every `λ` is an eigenvalue.
    pub fn characteristic_polynomial(&self) -> Option<Poly> {
        let (f, g) = self.pair_matrices();
        let (n, k) = (f.rows(), f.cols());
        if k == 0 {
            return Some(Poly::one());
        }
        if k > n {
            return None;
        }
        let entry = |i: usize, j: usize| &Poly::constant(g.get(i, j).clone()) - &(&Poly::x() * &Poly::constant(f.get(i, j).clone()));
        let mut acc = Poly::zero();
        for rows in combinations(n, k) {
            let m: Vec<Vec<Poly>> = rows.iter().map(|&i| (0..k).map(|j| entry(i, j)).collect()).collect();
            acc = Poly::gcd(&acc, &poly_determinant(&m));
            if acc.is_constant() && !acc.is_zero() {
                break;
            }
        }
        (!acc.is_zero()).then(|| acc.monic())
    }

    pub fn finite_eigenvalues(&self) -> Spectrum {
        let Some(p) = self.characteristic_polynomial() else {
            return Spectrum { everywhere: true, exact: Vec::new(), approx: Vec::new() };
        };
        let rs = roots(&p);
        let exact = rs
            .exact
            .into_iter()
            .map(|(a, mult)| EigenPair { eigenspace: self.eigenspace(&a), value: a, algebraic_multiplicity: mult })
            .collect();
        Spectrum { everywhere: false, exact, approx: rs.approx }
    }

    fn require_single_space(&self) -> Result<(), RelationError> {
        if self.is_in_single_space() {
            Ok(())
        } else {
            Err(RelationError::DimensionMismatch("relation is not in a single space".into()))
        }
    }

    fn require_same_spaces(&self, other: &LinearRelation) -> Result<(), RelationError> {
        if self.dom == other.dom && self.ran == other.ran {
            Ok(())
        } else {
            Err(RelationError::DimensionMismatch("relations act between different spaces".into()))
        }
    }
}

/// All increasing `k`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: Scalar,
    pub algebraic_multiplicity: usize,
    pub eigenspace: Subspace,
}

/// Finite eigenvalues: exact ones with eigenspaces, the rest as isolating
/// disks. `everywhere` means every `λ ∈ ℂ` is an eigenvalue.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub everywhere: bool,
    pub exact: Vec<EigenPair>,
    pub approx: Vec<ApproxRoot>,
}

/// `(B*)^[⊥]`-style identity `B(0) = D(B⁺)^[⊥]`.
pub fn eq22_check(b: &LinearRelation) -> bool {
    b.mul() == b.range_space().ortho_complement(&b.adjoint().domain())
}

/// `K = K₁ [+] K₂` with coordinate maps onto each part.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub ambient: KreinSpace,
    pub parts: [Subspace; 2],
    /// Krein spaces of coordinates with respect to the stored bases.
    pub spaces: [KreinSpace; 2],
    bases: [Matrix; 2],
    /// `coord_i ∘ E_i = G_i⁻¹ B_i* J`.
    coords: [Matrix; 2],
}

impl Splitting {
    pub fn new(k: &KreinSpace, k1: &Subspace) -> Result<Self, RelationError> {
        if k1.ambient_dim() != k.dim() {
            return Err(RelationError::DimensionMismatch("K₁ lives in another space".into()));
        }
        let k2 = k.ortho_complement(k1);
        let mk = |s: &Subspace| -> Result<(KreinSpace, Matrix, Matrix), RelationError> {
            let b = s.basis_matrix();
            let g = k.gram_of(s);
            let g_inv = g.inverse().ok_or(RelationError::DegenerateSubspace)?;
            let c = &(&g_inv * &b.adjoint()) * k.gram();
            let space = if s.is_zero() {
                KreinSpace::new(Matrix::zeros(0, 0)).unwrap()
            } else {
                KreinSpace::new(g).map_err(|_| RelationError::DegenerateSubspace)?
            };
            Ok((space, b, c))
        };
        let (s1, b1, c1) = mk(k1)?;
        let (s2, b2, c2) = mk(&k2)?;
        Ok(Splitting { ambient: k.clone(), parts: [k1.clone(), k2], spaces: [s1, s2], bases: [b1, b2], coords: [c1, c2] })
    }

    /// Coordinates of `E_i v` (index 1 or 2).
    pub fn coord(&self, i: usize, v: &[Scalar]) -> Vector {
        self.coords[i - 1].mul_vec(v)
    }

    pub fn embed(&self, i: usize, c: &[Scalar]) -> Vector {
        self.bases[i - 1].mul_vec(c)
    }

    /// Matrix of the J-orthogonal projection `E_i` in ambient coordinates.
    pub fn projection(&self, i: usize) -> Matrix {
        &self.bases[i - 1] * &self.coords[i - 1]
    }

    pub fn coord_subspace(&self, i: usize, s: &Subspace) -> Subspace {
        s.image(&self.coords[i - 1])
    }

    pub fn embed_subspace(&self, i: usize, s: &Subspace) -> Subspace {
        s.image(&self.bases[i - 1])
    }

    /// `A_i^j = {(h_i, E_j g) : (h_i, g) ∈ A, h_i ∈ D(A) ∩ K_i}` in coordinates.
    pub fn component(&self, a: &LinearRelation, i: usize, j: usize) -> LinearRelation {
        let r = a.restrict(&self.parts[i - 1]);
        let pairs: Vec<(Vector, Vector)> = r.pairs().iter().map(|(f, g)| (self.coord(i, f), self.coord(j, g))).collect();
        LinearRelation::from_pairs(self.spaces[i - 1].clone(), self.spaces[j - 1].clone(), &pairs).unwrap()
    }

    /// A relation from `K_i` to `K_j` given in coordinates, viewed in `K × K`.
    pub fn embed_relation(&self, i: usize, j: usize, r: &LinearRelation) -> LinearRelation {
        let pairs: Vec<(Vector, Vector)> = r.pairs().iter().map(|(f, g)| (self.embed(i, f), self.embed(j, g))).collect();
        LinearRelation::from_pairs(self.ambient.clone(), self.ambient.clone(), &pairs).unwrap()
    }
}

/// `A_i^j` for a nondegenerate `K₁` and `K₂ = K₁^[⊥]`, in coordinates of the
/// canonical bases of `K_i` and `K_j`.
pub fn component_relation(a: &LinearRelation, k1: &Subspace, i: usize, j: usize) -> Result<LinearRelation, RelationError> {
    assert!((1..=2).contains(&i) && (1..=2).contains(&j), "component indices are 1 or 2");
    a.require_single_space()?;
    Ok(Splitting::new(a.domain_space(), k1)?.component(a, i, j))
}

/// Outcome of one clause of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    /// False when the clause's own premise is not met; `holds` is then vacuous.
    pub applicable: bool,
    pub holds: bool,
    pub detail: String,
}

impl ClauseResult {
    fn check(holds: bool, detail: impl Into<String>) -> Self {
        ClauseResult { applicable: true, holds, detail: detail.into() }
    }

    fn vacuous(detail: impl Into<String>) -> Self {
        ClauseResult { applicable: false, holds: true, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub e1_preserves_domain: bool,
    pub e2_preserves_domain: bool,
    /// Set if `E₁` and `E₂` disagree on preserving `D(A)`.
    pub hypothesis_asymmetry: bool,
    pub a_maps_k1_into_k1: bool,
    pub clauses: BTreeMap<String, ClauseResult>,
    pub reduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma6Report {
    pub e1_preserves_domain: bool,
    pub e2_preserves_domain: bool,
    pub hypothesis_asymmetry: bool,
    pub symmetric: bool,
    pub clauses: BTreeMap<String, ClauseResult>,
    pub reduced: bool,
}

struct Components {
    s: Splitting,
    a: [[LinearRelation; 2]; 2],
}

impl Components {
    fn new(a: &LinearRelation, k1: &Subspace) -> Result<Self, RelationError> {
        a.require_single_space()?;
        let n = a.domain_space().dim();
        if k1.is_zero() || k1.dim() == n {
            return Err(RelationError::PreconditionFailed("K₁ must be a nontrivial subspace".into()));
        }
        let s = Splitting::new(a.domain_space(), k1)?;
        let c = |i, j| s.component(a, i, j);
        let comps = [[c(1, 1), c(1, 2)], [c(2, 1), c(2, 2)]];
        Ok(Components { s, a: comps })
    }

    fn get(&self, i: usize, j: usize) -> &LinearRelation {
        &self.a[i - 1][j - 1]
    }

    fn embedded(&self, i: usize, j: usize) -> LinearRelation {
        self.s.embed_relation(i, j, self.get(i, j))
    }

    fn preserves_domain(&self, a: &LinearRelation, i: usize) -> bool {
        let d = a.domain();
        let p = self.s.projection(i);
        d.basis().iter().all(|v| d.contains(&p.mul_vec(v)))
    }

    /// `A_i^1 + A_i^2` (operator-like sum) embedded in `K × K`.
    fn row_sum(&self, i: usize) -> LinearRelation {
        self.embedded(i, 1).op_sum(&self.embedded(i, 2)).unwrap()
    }

    fn reduced(&self, a: &LinearRelation) -> bool {
        self.embedded(1, 1).span_sum(&self.embedded(2, 2)).unwrap() == *a
    }
}

/// Checks the reducing-subspace hypotheses and every clause of the
/// reducibility theorem for a self-adjoint `A` and nondegenerate `K₁`.
pub fn check_reduction(a: &LinearRelation, k1: &Subspace) -> Result<ReductionReport, RelationError> {
    let c = Components::new(a, k1)?;
    if !a.is_self_adjoint() {
        return Err(RelationError::PreconditionFailed("A is not self-adjoint".into()));
    }
    let e1 = c.preserves_domain(a, 1);
    let e2 = c.preserves_domain(a, 2);
    let dk1 = a.domain().intersect(k1);
    let maps = k1.contains_subspace(&a.image_of(&dk1));
    if !e1 || !maps {
        let mut which = Vec::new();
        if !e1 {
            which.push("E₁(D(A)) ⊄ D(A)");
        }
        if !maps {
            which.push("A(K₁ ∩ D(A)) ⊄ K₁");
        }
        return Err(RelationError::PreconditionFailed(which.join("; ")));
    }
    let mut cl = BTreeMap::new();
    let (a11, a21, a22) = (c.get(1, 1), c.get(2, 1), c.get(2, 2));
    let k2dim = c.s.parts[1].dim();

    let rebuilt = c.embedded(1, 1).span_sum(&c.row_sum(2)).unwrap();
    cl.insert("i".into(), ClauseResult::check(rebuilt == *a, "A = A₁¹ ∔ (A₂¹ + A₂²) by graph equality"));

    let sa22 = a22.is_self_adjoint();
    cl.insert(
        "ii".into(),
        ClauseResult::check(a22.is_operator() && sa22, format!("A₂² single-valued: {}, self-adjoint: {}", a22.is_operator(), sa22)),
    );

    let dense = a22.domain().dim() == k2dim && a21.domain().dim() == k2dim;
    cl.insert(
        "iii".into(),
        ClauseResult::check(
            dense && a22.is_operator(),
            format!(
                "A₂², A₂¹ have domain equal to K₂; A₂² single-valued; A₂¹ single-valued: {} (A₂¹(0) = A(0))",
                a21.is_operator()
            ),
        ),
    );

    let a0 = a.mul();
    let a11_0 = c.s.embed_subspace(1, &a11.mul());
    let a11_adj_dom = c.s.embed_subspace(1, &c.s.spaces[0].ortho_complement(&a11.adjoint().domain()));
    let d_perp = a.domain_space().ortho_complement(&a.domain());
    let iv = a0 == a11_0 && a11_0 == a11_adj_dom && a11_adj_dom == d_perp;
    cl.insert("iv".into(), ClauseResult::check(iv, format!("A(0) = A₁¹(0) = D(A₁¹⁺)^⊥ = D(A)^⊥, dim A(0) = {}", a0.dim())));

    cl.insert("v".into(), ClauseResult::check(a21.adjoint().is_operator(), "A₂¹⁺ single-valued"));

    let sa11 = a11.is_self_adjoint();
    let range_in_mul = a11.mul().contains_subspace(&a21.range());
    cl.insert(
        "vi".into(),
        ClauseResult::check(sa11 == range_in_mul, format!("A₁¹ self-adjoint: {sa11}, R(A₂¹) ⊆ A₁¹(0): {range_in_mul}")),
    );

    let reduced = c.reduced(a);
    cl.insert(
        "vii".into(),
        ClauseResult::check(reduced == sa11, format!("A = A₁¹ [+] A₂²: {reduced}, A₁¹ self-adjoint: {sa11}")),
    );

    // Read with the domain premise D(A) ∩ K₁ = K₁; the range premise alone
    // admits A₁¹ = {0} × K₁.
    let range_dense = a.image_of(&dk1) == *k1;
    let domain_full = dk1 == *k1;
    let viii = if domain_full {
        ClauseResult::check(
            sa11 && a11.is_operator(),
            format!("D(A) ∩ K₁ = K₁; A₁¹ self-adjoint: {sa11}, operator: {}; range premise A(D(A) ∩ K₁) = K₁: {range_dense}", a11.is_operator()),
        )
    } else {
        ClauseResult::vacuous(format!("D(A) ∩ K₁ ≠ K₁; range premise A(D(A) ∩ K₁) = K₁: {range_dense}"))
    };
    cl.insert("viii".into(), viii);

    Ok(ReductionReport {
        e1_preserves_domain: e1,
        e2_preserves_domain: e2,
        hypothesis_asymmetry: e1 != e2,
        a_maps_k1_into_k1: maps,
        clauses: cl,
        reduced,
    })
}

/// Permissive mode: the component-relation clauses for any relation in `K`,
/// without the self-adjointness requirement.
pub fn lemma6_report(a: &LinearRelation, k1: &Subspace) -> Result<Lemma6Report, RelationError> {
    let c = Components::new(a, k1)?;
    let e1 = c.preserves_domain(a, 1);
    let e2 = c.preserves_domain(a, 2);
    let hyp = e1 || e2;
    let symmetric = a.is_symmetric();
    let mut cl = BTreeMap::new();
    let skip = || ClauseResult::vacuous("no E_i preserves D(A)");

    let i_holds = (1..=2).all(|j| {
        let e = c.s.coord_subspace(j, &a.mul());
        e == c.get(1, j).mul() && e == c.get(2, j).mul()
    });
    cl.insert("i".into(), if hyp { ClauseResult::check(i_holds, "E_j(A(0)) = A₁ʲ(0) = A₂ʲ(0), j = 1, 2") } else { skip() });

    let ii_holds = c.row_sum(1).span_sum(&c.row_sum(2)).unwrap() == *a;
    cl.insert("ii".into(), if hyp { ClauseResult::check(ii_holds, "A = (A₁¹ + A₁²) ∔ (A₂¹ + A₂²)") } else { skip() });

    let iii = (1..=2).all(|i| (1..=2).all(|j| eq22_check(c.get(i, j))));
    cl.insert("iii".into(), ClauseResult::check(iii, "B(0) = D(B⁺)^⊥ for every A_i^j"));

    let iv = if !hyp {
        skip()
    } else if !symmetric {
        ClauseResult::vacuous("A not symmetric")
    } else {
        let holds = c.get(2, 1).is_subrelation_of(&c.get(1, 2).adjoint())
            && c.get(1, 2).is_subrelation_of(&c.get(2, 1).adjoint())
            && c.get(1, 1).is_symmetric()
            && c.get(2, 2).is_symmetric();
        ClauseResult::check(holds, "A₂¹ ⊆ A₁²⁺, A₁² ⊆ A₂¹⁺, A₁¹ and A₂² symmetric")
    };
    cl.insert("iv".into(), iv);

    for i in 1..=2usize {
        let j = 3 - i;
        let key = format!("v.{i}");
        let dense = a.domain().intersect(&c.s.parts[i - 1]) == c.s.parts[i - 1];
        let res = if !hyp {
            skip()
        } else if !symmetric || !dense {
            ClauseResult::vacuous(format!("A not symmetric or D(A) ∩ K{i} ≠ K{i}"))
        } else {
            let a0 = a.mul();
            let holds = c.get(i, i).is_operator()
                && c.s.parts[j - 1].contains_subspace(&a0)
                && c.s.embed_subspace(j, &c.get(i, j).mul()) == a0
                && c.s.embed_subspace(j, &c.get(j, j).mul()) == a0;
            ClauseResult::check(holds, format!("A{i}{i} single-valued and A(0) = A{i}{j}(0) = A{j}{j}(0) ⊆ K{j}"))
        };
        cl.insert(key, res);
    }

    Ok(Lemma6Report {
        e1_preserves_domain: e1,
        e2_preserves_domain: e2,
        hypothesis_asymmetry: e1 != e2,
        symmetric,
        clauses: cl,
        reduced: c.reduced(a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn diag(d: &[i64]) -> KreinSpace {
        KreinSpace::new(Matrix::diagonal(&d.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>())).unwrap()
    }

    #[test]
    fn parts_of_simple_relations() {
        let k = KreinSpace::euclidean(2);
        let t = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[1, 2], &[3, 4]])).unwrap();
        assert!(t.mul().is_zero());
        assert!(t.domain().is_full());
        let e = Subspace::span(2, &[v(&[1, 1])]);
        let m = LinearRelation::multivalued(&k, &e);
        assert!(m.domain().is_zero());
        assert_eq!(m.mul(), e);
        let nil = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[0, 1], &[0, 0]])).unwrap().inverse();
        assert_eq!(nil.mul(), Subspace::span(2, &[v(&[1, 0])]));
        assert_eq!(nil.part(Part::Infty).dim(), 1);
    }

    #[test]
    fn adjoint_of_matrix_graph() {
        let k = diag(&[1, -1]);
        let m = Matrix::from_rows(vec![
            vec![Scalar::int(1), Scalar::gauss(2, 1)],
            vec![Scalar::int(0), Scalar::frac(1, 2)],
        ]);
        let t = LinearRelation::graph_of(&k, &m).unwrap();
        let j = k.gram();
        let expected = &(&j.inverse().unwrap() * &m.adjoint()) * j;
        assert_eq!(t.adjoint(), LinearRelation::graph_of(&k, &expected).unwrap());
        assert_eq!(t.adjoint().adjoint(), t);
    }

    #[test]
    fn adjoint_of_pure_mul_part() {
        let k = KreinSpace::euclidean(2);
        let e = Subspace::span(2, &[v(&[1, 0])]);
        let t = LinearRelation::multivalued(&k, &e);
        let a = t.adjoint();
        assert_eq!(a.domain(), k.ortho_complement(&e));
        assert!(a.range().is_full());
    }

    #[test]
    fn hyperbolic_nilpotent_is_self_adjoint() {
        let k = KreinSpace::new(Matrix::from_ints(&[&[0, 1], &[1, 0]])).unwrap();
        let a = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[0, 1], &[0, 0]])).unwrap();
        assert!(a.is_self_adjoint());
    }

    #[test]
    fn symmetric_restriction_is_not_self_adjoint() {
        let k = KreinSpace::euclidean(2);
        let a = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[1, 0], &[0, 2]])).unwrap();
        assert!(a.is_self_adjoint());
        let r = a.restrict(&Subspace::span(2, &[v(&[1, 0])]));
        assert!(r.is_symmetric());
        assert!(!r.is_self_adjoint());
    }

    #[test]
    fn resolvent_examples() {
        let k = KreinSpace::euclidean(1);
        let a = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[0]])).unwrap();
        assert_eq!(a.resolvent(&Scalar::i()).unwrap(), Matrix::from_rows(vec![vec![Scalar::i()]]));
        assert!(matches!(a.resolvent(&Scalar::zero()), Err(RelationError::NotInResolventSet(_))));
        let m = LinearRelation::multivalued(&k, &Subspace::full(1));
        assert!(m.resolvent(&Scalar::i()).unwrap().is_zero());
    }

    #[test]
    fn eigenvalue_examples() {
        let k = KreinSpace::euclidean(2);
        let nil = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[0, 1], &[0, 0]])).unwrap();
        let s = nil.finite_eigenvalues();
        assert_eq!(s.exact.len(), 1);
        assert!(s.exact[0].value.is_zero());
        assert_eq!(s.exact[0].eigenspace, Subspace::span(2, &[v(&[1, 0])]));
        let d = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[1, 0], &[0, 2]])).unwrap();
        let vals: Vec<Scalar> = d.finite_eigenvalues().exact.into_iter().map(|e| e.value).collect();
        assert_eq!(vals, vec![Scalar::int(1), Scalar::int(2)]);
    }

    #[test]
    fn eq22_examples() {
        let k = KreinSpace::euclidean(2);
        assert!(eq22_check(&LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[1, 1], &[0, 1]])).unwrap()));
        assert!(eq22_check(&LinearRelation::multivalued(&k, &Subspace::span(2, &[v(&[1, 2])]))));
    }

    #[test]
    fn block_diagonal_operator_reduces() {
        let k = diag(&[1, -1, 1]);
        let a = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]])).unwrap();
        let k1 = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let r = check_reduction(&a, &k1).unwrap();
        assert!(r.reduced);
        assert!(r.clauses.values().all(|c| c.holds), "{r:?}");
        let a12 = component_relation(&a, &k1, 1, 2).unwrap();
        assert!(a12.range().is_zero());
    }

    #[test]
    fn coupling_block_breaks_hypothesis() {
        let k = KreinSpace::euclidean(2);
        let a = LinearRelation::graph_of(&k, &Matrix::from_ints(&[&[1, 1], &[1, 1]])).unwrap();
        let k1 = Subspace::span(2, &[v(&[1, 0])]);
        assert!(matches!(check_reduction(&a, &k1), Err(RelationError::PreconditionFailed(_))));
        let a21 = component_relation(&a, &k1, 2, 1).unwrap();
        assert_eq!(a21.range().dim(), 1);
    }

    #[test]
    fn mul_part_inside_k1() {
        // A(0) = span{e1}, A e2 = 5 e2, A e3 = 2 e3; K₁ = span{e1, e2}.
        let k = KreinSpace::euclidean(3);
        let pairs = vec![(v(&[0, 0, 0]), v(&[1, 0, 0])), (v(&[0, 1, 0]), v(&[0, 5, 0])), (v(&[0, 0, 1]), v(&[0, 0, 2]))];
        let a = LinearRelation::from_pairs(k.clone(), k.clone(), &pairs).unwrap();
        assert!(a.is_self_adjoint());
        let k1 = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let r = check_reduction(&a, &k1).unwrap();
        assert!(r.clauses["iv"].holds);
        assert_eq!(a.mul(), k.ortho_complement(&a.domain()));
        assert!(r.reduced);
    }
}
