//! Rational matrix functions with exact coefficients, their Nevanlinna kernel
//! and partial fraction expansions.

use crate::linalg::{hermitian_signature, unit_vector, Matrix, Scalar, Vector};
use crate::poly::{roots, Poly, RootSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatFunError {
    #[error("{0} is a pole")]
    PoleHit(Scalar),
    #[error("Q(z̄)* = Q(z) fails at entry ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("polynomial part of degree {0} is not supported")]
    UnsupportedPolynomialGrowth(usize),
    #[error("pole near {0} is not a Gaussian rational")]
    IrrationalPole(String),
}

/// A scalar rational function `num / den`, reduced, with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, RatFunError> {
        if den.is_zero() {
            return Err(RatFunError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, mut d) = (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap());
        let lc = d.leading().unwrap().inv().unwrap();
        n = n.scale(&lc);
        d = d.scale(&lc);
        Ok(RatFun { num: n, den: d })
    }

    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun::constant(Scalar::one())
    }

    pub fn constant(s: Scalar) -> Self {
        RatFun { num: Poly::constant(s), den: Poly::one() }
    }

    pub fn poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn x() -> Self {
        RatFun::poly(Poly::x())
    }

    /// `(z − α)^{-k}`.
    pub fn pole_term(alpha: &Scalar, k: u32) -> Self {
        RatFun { num: Poly::one(), den: Poly::linear_root(alpha).pow(k) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `None` at a pole.
    pub fn eval(&self, z: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(z) / &d)
    }

    pub fn derivative(&self) -> RatFun {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den).unwrap()
    }

    /// `f*(z) = conj(f(z̄))`.
    pub fn conj_coeffs(&self) -> RatFun {
        RatFun { num: self.num.conj_coeffs(), den: self.den.conj_coeffs() }
    }

    pub fn scale(&self, s: &Scalar) -> RatFun {
        RatFun::new(self.num.scale(s), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Option<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone()).ok()
    }

    /// Quotient and proper remainder `num = q·den + r`.
    pub fn polynomial_part(&self) -> (Poly, Poly) {
        self.num.div_rem(&self.den)
    }

    /// `f(z + a)`.
    pub fn shift(&self, a: &Scalar) -> RatFun {
        RatFun::new(self.num.shift(a), self.den.shift(a)).unwrap()
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        RatFun::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).unwrap()
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &-o
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        RatFun::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

/// A square rational matrix function satisfying `Q(z̄)* = Q(z)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrixFunction {
    entries: Vec<Vec<RatFun>>,
}

impl fmt::Debug for RationalMatrixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

impl RationalMatrixFunction {
    pub fn new(entries: Vec<Vec<RatFun>>) -> Result<Self, RatFunError> {
        let p = entries.len();
        if p == 0 || entries.iter().any(|r| r.len() != p) {
            return Err(RatFunError::Shape("entries must form a nonempty square grid".into()));
        }
        for i in 0..p {
            for j in i..p {
                if entries[i][j] != entries[j][i].conj_coeffs() {
                    return Err(RatFunError::NotSymmetric(i, j));
                }
            }
        }
        Ok(RationalMatrixFunction { entries })
    }

    pub fn scalar(f: RatFun) -> Result<Self, RatFunError> {
        Self::new(vec![vec![f]])
    }

    /// Constant plus linear term `B₀ + B₁ z`.
    pub fn affine(b0: &Matrix, b1: &Matrix) -> Result<Self, RatFunError> {
        let p = b0.rows();
        Self::new(
            (0..p)
                .map(|i| {
                    (0..p)
                        .map(|j| RatFun::poly(Poly::new(vec![b0.get(i, j).clone(), b1.get(i, j).clone()])))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn zero(p: usize) -> Self {
        RationalMatrixFunction { entries: vec![vec![RatFun::zero(); p]; p] }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &RatFun {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<RatFun>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(RatFun::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self, RatFunError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RatFunError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&RatFun, &RatFun) -> RatFun) -> Result<Self, RatFunError> {
        if self.size() != other.size() {
            return Err(RatFunError::Shape("sizes differ".into()));
        }
        let e = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect())
            .collect();
        Ok(RationalMatrixFunction { entries: e })
    }

    /// Least common multiple of the entry denominators.
    pub fn common_denominator(&self) -> Poly {
        self.entries.iter().flatten().fold(Poly::one(), |acc, e| Poly::lcm(&acc, e.den()))
    }

    pub fn poles(&self) -> RootSet {
        roots(&self.common_denominator())
    }

    pub fn is_pole(&self, z: &Scalar) -> bool {
        self.entries.iter().flatten().any(|e| e.den().eval(z).is_zero())
    }

    /// Largest degree of an entry's polynomial part.
    pub fn polynomial_degree(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter_map(|e| e.polynomial_part().0.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, z: &Scalar) -> Result<Matrix, RatFunError> {
        let p = self.size();
        let mut m = Matrix::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                m.set(i, j, self.entries[i][j].eval(z).ok_or_else(|| RatFunError::PoleHit(z.clone()))?);
            }
        }
        Ok(m)
    }

    pub fn derivative(&self) -> RationalMatrixFunction {
        RationalMatrixFunction {
            entries: self.entries.iter().map(|r| r.iter().map(RatFun::derivative).collect()).collect(),
        }
    }

    /// `N_Q(z, w) = (Q(z) − Q(w)*)/(z − w̄)`, or `Q′(z)` when `z = w̄`.
    pub fn nevanlinna_kernel(&self, z: &Scalar, w: &Scalar) -> Result<Matrix, RatFunError> {
        let wb = w.conj();
        if *z == wb {
            return self.derivative().eval(z);
        }
        let qz = self.eval(z)?;
        let qw = self.eval(w)?;
        let d = (z - &wb).inv().unwrap();
        Ok((&qz - &qw.adjoint()).scale(&d))
    }

    /// Entry `(i, j)` is `(N_Q(z_i, z_j) h_i, h_j)`.
    pub fn gram_matrix(&self, points: &[(Scalar, Vector)]) -> Result<Matrix, RatFunError> {
        let n = points.len();
        let mut cache: Vec<Option<Matrix>> = Vec::new();
        let zs: Vec<&Scalar> = points.iter().map(|p| &p.0).collect();
        let mut distinct: Vec<&Scalar> = Vec::new();
        for z in &zs {
            if !distinct.contains(z) {
                distinct.push(z);
            }
        }
        let idx: Vec<usize> = zs.iter().map(|z| distinct.iter().position(|d| d == z).unwrap()).collect();
        let nd = distinct.len();
        cache.resize(nd * nd, None);
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let key = idx[i] * nd + idx[j];
                if cache[key].is_none() {
                    cache[key] = Some(self.nevanlinna_kernel(distinct[idx[i]], distinct[idx[j]])?);
                }
                let k = cache[key].as_ref().unwrap();
                let v = crate::linalg::dot(&k.mul_vec(&points[i].1), &points[j].1);
                g.set(i, j, v);
            }
        }
        debug_assert!(g.is_hermitian());
        Ok(g)
    }

    pub fn partial_fractions(&self) -> Result<PartialFractionForm, RatFunError> {
        partial_fractions(self)
    }
}

/// Points of the open upper half-plane ordered by `|re| + im`, then by
/// decreasing imaginary part: `i, 2i, 1+i, −1+i, 3i, 1+2i, …`.
pub fn upper_lattice() -> impl Iterator<Item = Scalar> {
    (1i64..).flat_map(|level| {
        (1..=level).rev().flat_map(move |b| {
            let a = level - b;
            if a == 0 {
                vec![Scalar::gauss(0, b)]
            } else {
                vec![Scalar::gauss(a, b), Scalar::gauss(-a, b)]
            }
        })
    })
}

/// Sample points and direction vectors for the Gram lower bound.
#[derive(Clone, Debug)]
pub struct SamplePlan {
    pub points: Vec<Scalar>,
    pub vectors: Vec<Vector>,
}

impl SamplePlan {
    pub const DEFAULT_POINTS: usize = 6;

    /// First `n` lattice points avoiding poles of `q`; vectors are the
    /// standard basis, all-ones and alternating-sign vectors.
    pub fn for_function(q: &RationalMatrixFunction, n: usize) -> Self {
        let p = q.size();
        let points = upper_lattice().filter(|z| !q.is_pole(z)).take(n).collect();
        let mut vectors: Vec<Vector> = (0..p).map(|k| unit_vector(p, k)).collect();
        if p > 1 {
            vectors.push(vec![Scalar::one(); p]);
            vectors.push((0..p).map(|k| Scalar::int(if k % 2 == 0 { 1 } else { -1 })).collect());
        }
        SamplePlan { points, vectors }
    }

    pub fn default_for(q: &RationalMatrixFunction) -> Self {
        Self::for_function(q, Self::DEFAULT_POINTS)
    }

    pub fn pairs(&self) -> Vec<(Scalar, Vector)> {
        self.points
            .iter()
            .flat_map(|z| self.vectors.iter().map(move |h| (z.clone(), h.clone())))
            .collect()
    }
}

/// Number of negative eigenvalues of the full plan Gram matrix, which
/// dominates that of every sub-Gram.
pub fn negative_squares_lower_bound(q: &RationalMatrixFunction, plan: &SamplePlan) -> Result<usize, RatFunError> {
    let g = q.gram_matrix(&plan.pairs())?;
    Ok(hermitian_signature(&g).expect("Gram matrices are Hermitian").minus)
}

/// Principal part at one pole: `coeffs[k]` multiplies `(z − α)^{-(k+1)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleTerm {
    pub alpha: Scalar,
    pub coeffs: Vec<Matrix>,
}

impl PoleTerm {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

/// `Q(z) = B₀ + B₁ z + Σ_α Σ_k C_{α,k} (z − α)^{-k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionForm {
    pub size: usize,
    pub poles: Vec<PoleTerm>,
    pub b0: Matrix,
    pub b1: Matrix,
}

impl PartialFractionForm {
    pub fn reassemble(&self) -> Result<RationalMatrixFunction, RatFunError> {
        let p = self.size;
        let entries = (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        let mut f = RatFun::poly(Poly::new(vec![self.b0.get(i, j).clone(), self.b1.get(i, j).clone()]));
                        for t in &self.poles {
                            for (k, c) in t.coeffs.iter().enumerate() {
                                let c = c.get(i, j);
                                if !c.is_zero() {
                                    f = &f + &RatFun::pole_term(&t.alpha, k as u32 + 1).scale(c);
                                }
                            }
                        }
                        f
                    })
                    .collect()
            })
            .collect();
        RationalMatrixFunction::new(entries)
    }
}

/// Exact expansion; every pole must be a Gaussian rational.
pub fn partial_fractions(q: &RationalMatrixFunction) -> Result<PartialFractionForm, RatFunError> {
    let p = q.size();
    let deg = q.polynomial_degree();
    if deg >= 2 {
        return Err(RatFunError::UnsupportedPolynomialGrowth(deg));
    }
    let poles = q.poles();
    if let Some(a) = poles.approx.first() {
        return Err(RatFunError::IrrationalPole(format!("{:.6}{:+.6}i", a.re, a.im)));
    }
    let mut b0 = Matrix::zeros(p, p);
    let mut b1 = Matrix::zeros(p, p);
    let mut terms: Vec<PoleTerm> = poles
        .exact
        .iter()
        .map(|(a, m)| PoleTerm { alpha: a.clone(), coeffs: vec![Matrix::zeros(p, p); *m] })
        .collect();
    for i in 0..p {
        for j in 0..p {
            let e = q.entry(i, j);
            let (poly, rem) = e.polynomial_part();
            b0.set(i, j, poly.coeff(0));
            b1.set(i, j, poly.coeff(1));
            for t in terms.iter_mut() {
                let m = e.den().root_multiplicity(&t.alpha);
                if m == 0 {
                    continue;
                }
                let rest = e.den().exact_div(&Poly::linear_root(&t.alpha).pow(m as u32)).unwrap();
                let c = taylor_quotient(&rem.shift(&t.alpha), &rest.shift(&t.alpha), m);
                for (k, ck) in c.into_iter().enumerate() {
                    t.coeffs[m - 1 - k].set(i, j, ck);
                }
            }
        }
    }
    for t in terms.iter_mut() {
        while t.coeffs.last().is_some_and(Matrix::is_zero) {
            t.coeffs.pop();
        }
    }
    terms.retain(|t| !t.coeffs.is_empty());
    let form = PartialFractionForm { size: p, poles: terms, b0, b1 };
    debug_assert_eq!(form.reassemble().as_ref(), Ok(q));
    Ok(form)
}

/// First `m` Taylor coefficients at 0 of `a / b` with `b(0) ≠ 0`.
fn taylor_quotient(a: &Poly, b: &Poly, m: usize) -> Vec<Scalar> {
    let b0inv = b.coeff(0).inv().expect("nonzero constant term");
    let mut c: Vec<Scalar> = Vec::with_capacity(m);
    for k in 0..m {
        let mut s = a.coeff(k);
        for j in 1..=k {
            s -= &(&b.coeff(j) * &c[k - j]);
        }
        c.push(&s * &b0inv);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RatFun {
        RatFun::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    fn scalar(num: &[i64], den: &[i64]) -> RationalMatrixFunction {
        RationalMatrixFunction::scalar(rf(num, den)).unwrap()
    }

    fn example2(a: i64, b: i64) -> RationalMatrixFunction {
        RationalMatrixFunction::new(vec![vec![rf(&[a, 1], &[1]), rf(&[0, 1], &[1])], vec![rf(&[0, 1], &[1]), rf(&[b, 1], &[1])]])
            .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(scalar(&[-1], &[0, 1]).eval(&Scalar::i()).unwrap(), Matrix::from_rows(vec![vec![Scalar::i()]]));
        assert_eq!(example2(1, 0).eval(&Scalar::one()).unwrap(), Matrix::from_ints(&[&[2, 1], &[1, 1]]));
        let z = Scalar::gauss(2, 1);
        assert_eq!(scalar(&[0, 1], &[1]).eval(&z).unwrap().get(0, 0), &z);
        assert!(matches!(scalar(&[1], &[0, 1]).eval(&Scalar::zero()), Err(RatFunError::PoleHit(_))));
    }

    #[test]
    fn symmetry_is_enforced() {
        let f = RatFun::poly(Poly::new(vec![Scalar::i()]));
        assert!(RationalMatrixFunction::scalar(f).is_err());
        let off = RatFun::poly(Poly::new(vec![Scalar::i()]));
        let ok = RationalMatrixFunction::new(vec![vec![RatFun::zero(), off.clone()], vec![off.conj_coeffs(), RatFun::zero()]]);
        assert!(ok.is_ok());
    }

    #[test]
    fn kernel_examples() {
        let z = Scalar::gauss(1, 2);
        let w = Scalar::gauss(-3, 1);
        let k = example2(3, -1).nevanlinna_kernel(&z, &w).unwrap();
        assert_eq!(k, Matrix::from_ints(&[&[1, 1], &[1, 1]]));
        let k = scalar(&[-1], &[0, 1]).nevanlinna_kernel(&z, &w).unwrap();
        assert_eq!(k.get(0, 0), &(&z * &w.conj()).inv().unwrap());
        let d = scalar(&[0, 1], &[1]).nevanlinna_kernel(&Scalar::one(), &Scalar::one()).unwrap();
        assert_eq!(d.get(0, 0), &Scalar::one());
    }

    #[test]
    fn gram_examples() {
        let q = scalar(&[-1], &[0, 1]);
        let g = q.gram_matrix(&[(Scalar::i(), vec![Scalar::one()]), (Scalar::gauss(0, 2), vec![Scalar::one()])]).unwrap();
        let sig = hermitian_signature(&g).unwrap();
        assert_eq!((sig.plus, sig.zero, sig.minus), (1, 1, 0));
        let g = scalar(&[1], &[0, 1]).gram_matrix(&[(Scalar::i(), vec![Scalar::one()])]).unwrap();
        assert_eq!(g, Matrix::from_ints(&[&[-1]]));
    }

    #[test]
    fn lower_bounds() {
        let bound = |q: &RationalMatrixFunction| negative_squares_lower_bound(q, &SamplePlan::default_for(q)).unwrap();
        assert_eq!(bound(&scalar(&[-1], &[0, 1])), 0);
        assert_eq!(bound(&scalar(&[1], &[0, 1])), 1);
        assert_eq!(bound(&scalar(&[-1], &[0, 0, 1])), 1);
        assert_eq!(bound(&example2(1, 2)), 0);
    }

    #[test]
    fn lattice_order() {
        let pts: Vec<Scalar> = upper_lattice().take(5).collect();
        assert_eq!(pts, vec![Scalar::i(), Scalar::gauss(0, 2), Scalar::gauss(1, 1), Scalar::gauss(-1, 1), Scalar::gauss(0, 3)]);
    }

    #[test]
    fn partial_fraction_examples() {
        let q1 = scalar(&[-1, -2], &[0, 0, 1]);
        let pf = q1.partial_fractions().unwrap();
        assert_eq!(pf.poles.len(), 1);
        assert!(pf.poles[0].alpha.is_zero());
        assert_eq!(pf.poles[0].coeffs, vec![Matrix::from_ints(&[&[-2]]), Matrix::from_ints(&[&[-1]])]);
        let pf = example2(4, 5).partial_fractions().unwrap();
        assert!(pf.poles.is_empty());
        assert_eq!(pf.b0, Matrix::from_ints(&[&[4, 0], &[0, 5]]));
        assert_eq!(pf.b1, Matrix::from_ints(&[&[1, 1], &[1, 1]]));
        // −1/(z−1) + z = (z² − z − 1)/(z − 1)
        let pf = scalar(&[-1, -1, 1], &[-1, 1]).partial_fractions().unwrap();
        assert_eq!(pf.poles[0].alpha, Scalar::one());
        assert_eq!(pf.poles[0].coeffs, vec![Matrix::from_ints(&[&[-1]])]);
        assert_eq!(pf.b1, Matrix::from_ints(&[&[1]]));
        assert!(matches!(scalar(&[0, 0, 1], &[1]).partial_fractions(), Err(RatFunError::UnsupportedPolynomialGrowth(2))));
        assert!(matches!(scalar(&[1], &[-2, 0, 1]).partial_fractions(), Err(RatFunError::IrrationalPole(_))));
    }

    #[test]
    fn non_real_pole_pair_round_trips() {
        // 1/(z − i) + 1/(z + i) = 2z/(z² + 1)
        let q = scalar(&[0, 2], &[1, 0, 1]);
        let pf = q.partial_fractions().unwrap();
        assert_eq!(pf.poles.len(), 2);
        assert_eq!(pf.reassemble().unwrap(), q);
    }
}
