//! Finite-dimensional Krein spaces: the indefinite product `[x, y] = y*·J·x`,
//! orthogonal complements, isotropic parts and the four-part decomposition of
//! a subspace and its orthogonal companion.

use crate::linalg::{
    canonical_basis, dot, hermitian_signature, vec_is_zero, vec_sub, Inertia, LinalgError, Matrix, Scalar, Vector,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KreinError {
    #[error("Gram matrix is not Hermitian")]
    NotHermitian,
    #[error("Gram matrix is singular; the ambient space is degenerate")]
    DegenerateAmbient,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is degenerate")]
    DegenerateSubspace,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<LinalgError> for KreinError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotHermitian => KreinError::NotHermitian,
            LinalgError::DimensionMismatch(s) => KreinError::DimensionMismatch(s),
        }
    }
}

/// A linear subspace of `ℂⁿ`, stored by its canonical (reduced echelon) basis
/// so that equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "span{:?} ⊆ ℂ^{}", self.basis, self.n)
    }
}

impl Subspace {
    pub fn span(n: usize, vectors: &[Vector]) -> Self {
        let basis = canonical_basis(n, vectors);
        let pivots = basis
            .iter()
            .map(|v| v.iter().position(|x| !x.is_zero()).expect("nonzero echelon row"))
            .collect();
        Subspace { n, basis, pivots }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace::span(n, &Matrix::identity(n).columns())
    }

    /// Column space of a matrix.
    pub fn column_space(m: &Matrix) -> Self {
        Subspace::span(m.rows(), &m.columns())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// `n × dim` matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.n, &self.basis)
    }

    /// Residual of `v` after elimination against the echelon basis; zero iff
    /// `v` lies in the subspace.
    fn residual(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &(&f * b);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.n, "vector dimension mismatch");
        vec_is_zero(&self.residual(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.n, &v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.n);
        }
        let k = self.dim();
        let u = self.basis_matrix();
        let w = other.basis_matrix();
        let m = Matrix::hstack(self.n, &[&u, &-&w]);
        let coeffs: Vec<Vector> = m
            .kernel_basis()
            .into_iter()
            .map(|a| u.mul_vec(&a[..k]))
            .collect();
        Subspace::span(self.n, &coeffs)
    }

    /// Vectors of `sup`'s basis extending `self` to a basis of `self + sup`,
    /// chosen greedily in echelon order. For `self ⊆ sup` they span a direct
    /// complement of `self` in `sup`.
    pub fn complement_in(&self, sup: &Subspace) -> Vec<Vector> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in &sup.basis {
            if !acc.contains(v) {
                out.push(v.clone());
                acc = acc.join(&Subspace::span(self.n, std::slice::from_ref(v)));
            }
        }
        out
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let vs: Vec<Vector> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.rows(), &vs)
    }

    /// Coordinates of `v` in this subspace's stored basis, if `v` lies in it.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let c: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.basis_matrix().mul_vec(&c);
        vec_is_zero(&vec_sub(&back, v)).then_some(c)
    }
}

/// A finite-dimensional Krein space `(ℂⁿ, J)`.
#[derive(Clone, PartialEq, Eq)]
pub struct KreinSpace {
    gram: Matrix,
    inertia: Inertia,
}

impl std::fmt::Debug for KreinSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KreinSpace(J = {:?})", self.gram)
    }
}

impl KreinSpace {
    /// Checks that `gram` is Hermitian and invertible.
    pub fn new(gram: Matrix) -> Result<Self, KreinError> {
        let inertia = hermitian_signature(&gram)?;
        if inertia.zero != 0 {
            return Err(KreinError::DegenerateAmbient);
        }
        Ok(KreinSpace { gram, inertia })
    }

    /// `(ℂⁿ, I)`.
    pub fn euclidean(n: usize) -> Self {
        KreinSpace::new(Matrix::identity(n)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn inertia(&self) -> Inertia {
        self.inertia
    }

    pub fn neg_index(&self) -> usize {
        self.inertia.minus
    }

    /// `K₁ [+] K₂` with block-diagonal Gram.
    pub fn direct_sum(&self, other: &KreinSpace) -> KreinSpace {
        KreinSpace::new(Matrix::block_diag(&[&self.gram, &other.gram])).unwrap()
    }

    /// `[x, y] = y*·J·x`, with a dimension check.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar, KreinError> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(KreinError::DimensionMismatch(format!(
                "vectors of length {} and {} in a space of dimension {}",
                x.len(),
                y.len(),
                self.dim()
            )));
        }
        Ok(self.ip(x, y))
    }

    /// `[x, y]`; panics on a dimension mismatch.
    pub fn ip(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        dot(&self.gram.mul_vec(x), y)
    }

    /// Gram matrix `B*·J·B` of the stored basis `B`; entry `(i, j)` is `[b_j, b_i]`.
    pub fn gram_of(&self, s: &Subspace) -> Matrix {
        self.gram_of_vectors(s.basis())
    }

    pub fn gram_of_vectors(&self, vs: &[Vector]) -> Matrix {
        let b = Matrix::from_columns(self.dim(), vs);
        &(&b.adjoint() * &self.gram) * &b
    }

    pub fn inertia_of(&self, s: &Subspace) -> Inertia {
        hermitian_signature(&self.gram_of(s)).expect("Gram matrices are Hermitian")
    }

    /// `S^[⊥]`: kernel of `v ↦ (b_i* J v)_i`.
    pub fn ortho_complement(&self, s: &Subspace) -> Subspace {
        if s.is_zero() {
            return Subspace::full(self.dim());
        }
        let rows = &s.basis_matrix().adjoint() * &self.gram;
        Subspace::span(self.dim(), &rows.kernel_basis())
    }

    /// `S ∩ S^[⊥]`, computed as the kernel of the Gram of `S`.
    pub fn isotropic_part(&self, s: &Subspace) -> Subspace {
        if s.is_zero() {
            return s.clone();
        }
        let b = s.basis_matrix();
        let ker = self.gram_of(s).kernel_basis();
        Subspace::span(self.dim(), &ker.iter().map(|c| b.mul_vec(c)).collect::<Vec<_>>())
    }

    pub fn is_nondegenerate(&self, s: &Subspace) -> bool {
        s.is_zero() || !self.gram_of(s).determinant().is_zero()
    }

    pub fn is_neutral(&self, s: &Subspace) -> bool {
        self.gram_of(s).is_zero()
    }

    /// J-orthogonal projection `E = B·G⁻¹·B*·J` onto a nondegenerate subspace.
    pub fn projection(&self, s: &Subspace) -> Result<Matrix, KreinError> {
        if s.is_zero() {
            return Ok(Matrix::zeros(self.dim(), self.dim()));
        }
        let b = s.basis_matrix();
        let g_inv = self.gram_of(s).inverse().ok_or(KreinError::DegenerateSubspace)?;
        Ok(&(&(&b * &g_inv) * &b.adjoint()) * &self.gram)
    }

    /// The four-part decomposition `L̄ = L₁ [+] L₀`, `L̄^[⊥] = L₀ [+] L₂` and
    /// `K = L₁ [+] (L₀ ∔ F) [+] L₂` with `F` neutral and skewly linked to `L₀`.
    pub fn decompose_44(&self, lbar: &Subspace) -> Result<Decomposition44, KreinError> {
        let n = self.dim();
        if lbar.ambient_dim() != n {
            return Err(KreinError::DimensionMismatch("subspace lives in another ambient space".into()));
        }
        let l0 = self.isotropic_part(lbar);
        let l1 = Subspace::span(n, &l0.complement_in(lbar));
        let perp = self.ortho_complement(lbar);
        let l2 = Subspace::span(n, &l0.complement_in(&perp));
        let f_paired = self.skew_partner(&l0, &l1.join(&l2))?;
        let d = Decomposition44 {
            inertia_l1: self.inertia_of(&l1),
            inertia_l2: self.inertia_of(&l2),
            f: Subspace::span(n, &f_paired),
            f_paired,
            lbar: lbar.clone(),
            lbar_perp: perp,
            l1,
            l0,
            l2,
        };
        d.verify(self)?;
        Ok(d)
    }

    /// Neutral vectors `f_i ⊥ rest` with `[f_i, l0_j] = δ_ij` for the stored
    /// basis of the neutral subspace `l0`.
    fn skew_partner(&self, l0: &Subspace, rest: &Subspace) -> Result<Vec<Vector>, KreinError> {
        if l0.is_zero() {
            return Ok(Vec::new());
        }
        let m = self.ortho_complement(rest);
        let g = l0.complement_in(&m);
        if g.len() != l0.dim() {
            return Err(KreinError::Invariant("skew partner space has the wrong dimension".into()));
        }
        let l = l0.basis();
        let d = l.len();
        let pairing = Matrix::from_fn(d, d, |i, j| self.ip(&g[i], &l[j]));
        let c = pairing
            .inverse()
            .ok_or_else(|| KreinError::Invariant("isotropic part is not paired with its partner".into()))?;
        let g2: Vec<Vector> = (0..d)
            .map(|i| {
                let mut v = vec![Scalar::zero(); self.dim()];
                for k in 0..d {
                    for (x, y) in v.iter_mut().zip(&g[k]) {
                        *x += &(c.get(i, k) * y);
                    }
                }
                v
            })
            .collect();
        let half = Scalar::frac(-1, 2);
        Ok((0..d)
            .map(|i| {
                let mut v = g2[i].clone();
                for k in 0..d {
                    let t = &self.ip(&g2[i], &g2[k]) * &half;
                    for (x, y) in v.iter_mut().zip(&l[k]) {
                        *x += &(&t * y);
                    }
                }
                v
            })
            .collect())
    }
}

/// Output of [`KreinSpace::decompose_44`].
#[derive(Clone, Debug)]
pub struct Decomposition44 {
    pub lbar: Subspace,
    pub lbar_perp: Subspace,
    pub l1: Subspace,
    pub l0: Subspace,
    pub f: Subspace,
    /// Basis of `F` dual to the stored basis of `L₀`: `[f_i, l0_j] = δ_ij`.
    pub f_paired: Vec<Vector>,
    pub l2: Subspace,
    pub inertia_l1: Inertia,
    pub inertia_l2: Inertia,
}

/// Serializable summary of a [`Decomposition44`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionSummary {
    pub dim_ambient: usize,
    pub dim_lbar: usize,
    pub dim_l1: usize,
    pub dim_l0: usize,
    pub dim_f: usize,
    pub dim_l2: usize,
    pub inertia_l1: Inertia,
    pub inertia_l2: Inertia,
}

impl Decomposition44 {
    pub fn summary(&self) -> DecompositionSummary {
        DecompositionSummary {
            dim_ambient: self.lbar.ambient_dim(),
            dim_lbar: self.lbar.dim(),
            dim_l1: self.l1.dim(),
            dim_l0: self.l0.dim(),
            dim_f: self.f.dim(),
            dim_l2: self.l2.dim(),
            inertia_l1: self.inertia_l1,
            inertia_l2: self.inertia_l2,
        }
    }

    fn verify(&self, k: &KreinSpace) -> Result<(), KreinError> {
        let fail = |m: &str| Err(KreinError::Invariant(m.to_string()));
        let n = k.dim();
        if self.l1.join(&self.l0) != self.lbar || self.l1.dim() + self.l0.dim() != self.lbar.dim() {
            return fail("L̄ ≠ L₁ ∔ L₀");
        }
        if self.l0.join(&self.l2) != self.lbar_perp || self.l0.dim() + self.l2.dim() != self.lbar_perp.dim() {
            return fail("L̄^[⊥] ≠ L₀ ∔ L₂");
        }
        let total = self.l1.join(&self.l0).join(&self.f).join(&self.l2);
        if total.dim() != n || self.l1.dim() + 2 * self.l0.dim() + self.l2.dim() != n {
            return fail("parts do not span the ambient space directly");
        }
        let orth = |a: &Subspace, b: &Subspace| {
            a.basis().iter().all(|x| b.basis().iter().all(|y| k.ip(x, y).is_zero()))
        };
        if !orth(&self.l1, &self.l0) || !orth(&self.l1, &self.l2) || !orth(&self.l0, &self.l2) {
            return fail("L₁, L₀, L₂ not mutually orthogonal");
        }
        if !orth(&self.f, &self.l1) || !orth(&self.f, &self.l2) || !k.is_neutral(&self.f) || !k.is_neutral(&self.l0) {
            return fail("F is not a neutral partner orthogonal to L₁ and L₂");
        }
        for (i, fi) in self.f_paired.iter().enumerate() {
            for (j, lj) in self.l0.basis().iter().enumerate() {
                let want = if i == j { Scalar::one() } else { Scalar::zero() };
                if k.ip(fi, lj) != want {
                    return fail("F–L₀ pairing is not the identity");
                }
            }
        }
        if !self.inertia_l1.is_nondegenerate() || !self.inertia_l2.is_nondegenerate() {
            return fail("L₁ or L₂ degenerate");
        }
        if k.neg_index() != self.inertia_l1.minus + self.l0.dim() + self.inertia_l2.minus {
            return fail("inertia bookkeeping failed");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn hyperbolic() -> KreinSpace {
        KreinSpace::new(Matrix::from_ints(&[&[0, 1], &[1, 0]])).unwrap()
    }

    #[test]
    fn product_examples() {
        let h = hyperbolic();
        assert!(h.product(&v(&[1, 0]), &v(&[1, 0])).unwrap().is_zero());
        let neg = KreinSpace::new(Matrix::from_ints(&[&[-2]])).unwrap();
        assert_eq!(neg.product(&v(&[1]), &v(&[1])).unwrap(), Scalar::int(-2));
        let e = KreinSpace::euclidean(2);
        assert!(e.product(&v(&[1, 0]), &v(&[0, 1])).unwrap().is_zero());
        assert!(e.product(&v(&[1]), &v(&[0, 1])).is_err());
    }

    #[test]
    fn conjugate_symmetry() {
        let k = KreinSpace::new(Matrix::from_rows(vec![
            vec![Scalar::int(1), Scalar::gauss(0, 2)],
            vec![Scalar::gauss(0, -2), Scalar::int(-1)],
        ]))
        .unwrap();
        let x = vec![Scalar::gauss(1, 1), Scalar::frac(1, 3)];
        let y = vec![Scalar::gauss(0, 1), Scalar::int(2)];
        assert_eq!(k.ip(&x, &y), k.ip(&y, &x).conj());
    }

    #[test]
    fn complements_and_isotropic_parts() {
        let h = hyperbolic();
        let line = Subspace::span(2, &[v(&[1, 0])]);
        assert_eq!(h.ortho_complement(&line), line);
        assert_eq!(h.isotropic_part(&line), line);
        assert!(h.ortho_complement(&Subspace::full(2)).is_zero());
        let e = KreinSpace::euclidean(3);
        let s = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        assert!(e.isotropic_part(&s).is_zero());
        // Gram [[1,1],[1,1]] on a two-dimensional subspace.
        let k = KreinSpace::new(Matrix::diagonal(&[Scalar::int(1), Scalar::int(1), Scalar::int(-1)])).unwrap();
        let s = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 1])]);
        let g = k.gram_of(&s);
        assert_eq!(g, Matrix::from_ints(&[&[1, 0], &[0, 0]]));
        let s2 = Subspace::span(3, &[v(&[1, 1, 1]), v(&[1, 0, 0])]);
        assert_eq!(k.isotropic_part(&s2), Subspace::span(3, &[v(&[0, 1, 1])]));
    }

    #[test]
    fn decomposition_of_neutral_line() {
        let h = hyperbolic();
        let line = Subspace::span(2, &[v(&[1, 0])]);
        let d = h.decompose_44(&line).unwrap();
        assert!(d.l1.is_zero() && d.l2.is_zero());
        assert_eq!(d.l0, line);
        assert_eq!(d.f.dim(), 1);
        assert_eq!(h.ip(&d.f_paired[0], &d.l0.basis()[0]), Scalar::one());
    }

    #[test]
    fn decomposition_of_nondegenerate_subspace() {
        let k = KreinSpace::new(Matrix::diagonal(&[Scalar::int(1), Scalar::int(-1), Scalar::int(1)])).unwrap();
        let s = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let d = k.decompose_44(&s).unwrap();
        assert!(d.l0.is_zero() && d.f.is_zero());
        assert_eq!(d.l1, s);
        assert_eq!(d.l2, k.ortho_complement(&s));
    }

    #[test]
    fn decomposition_with_isotropic_vector_in_larger_space() {
        // J = diag(1, 1, −1, −1); L̄ = span{e1 + e3, e2}.
        let k = KreinSpace::new(Matrix::diagonal(&[1, 1, -1, -1].map(Scalar::int))).unwrap();
        let s = Subspace::span(4, &[v(&[1, 0, 1, 0]), v(&[0, 1, 0, 0])]);
        let d = k.decompose_44(&s).unwrap();
        assert_eq!(d.l0.dim(), 1);
        assert_eq!(d.l1.dim(), 1);
        assert_eq!(d.l2.dim(), 1);
        assert_eq!(d.inertia_l2.minus, 1);
    }
}
