#![allow(dead_code)]

use nevanlinna::krein::{KreinSpace, Subspace};
use nevanlinna::linalg::{Matrix, Scalar, Vector};
use nevanlinna::poly::Poly;
use nevanlinna::ratfun::{RatFun, RationalMatrixFunction};
use nevanlinna::relation::LinearRelation;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub mod suites;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut TestRng) -> Scalar {
    Scalar::frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn gaussian(rng: &mut TestRng) -> Scalar {
    if rng.gen_bool(0.5) {
        Scalar::gauss(rng.gen_range(-2..=2), 0)
    } else {
        Scalar::gauss(rng.gen_range(-2..=2), rng.gen_range(-2..=2))
    }
}

pub fn vector(rng: &mut TestRng, n: usize) -> Vector {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn matrix(rng: &mut TestRng, r: usize, c: usize) -> Matrix {
    Matrix::from_fn(r, c, |_, _| gaussian(rng))
}

pub fn hermitian(rng: &mut TestRng, n: usize) -> Matrix {
    let m = matrix(rng, n, n);
    &m + &m.adjoint()
}

/// `P* D P` with `D = diag(±1)` and `P` unit upper triangular.
pub fn krein_space(rng: &mut TestRng, n: usize) -> KreinSpace {
    let d = Matrix::diagonal(&(0..n).map(|_| Scalar::int(if rng.gen_bool(0.5) { 1 } else { -1 })).collect::<Vec<_>>());
    let p = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Scalar::one(),
        std::cmp::Ordering::Less if rng.gen_bool(0.4) => gaussian(rng),
        _ => Scalar::zero(),
    });
    KreinSpace::new(&(&p.adjoint() * &d) * &p).unwrap()
}

/// Span of `d` random pairs in `K × K`.
pub fn relation(rng: &mut TestRng, k: &KreinSpace, d: usize) -> LinearRelation {
    let n = k.dim();
    let pairs: Vec<(Vector, Vector)> = (0..d)
        .map(|_| {
            let f = if rng.gen_bool(0.2) { vec![Scalar::zero(); n] } else { vector(rng, n) };
            (f, vector(rng, n))
        })
        .collect();
    LinearRelation::from_pairs(k.clone(), k.clone(), &pairs).unwrap()
}

/// A random non-degenerate subspace of dimension `d`.
pub fn nondegenerate_subspace(rng: &mut TestRng, k: &KreinSpace, d: usize) -> Subspace {
    loop {
        let vs: Vec<Vector> = (0..d).map(|_| vector(rng, k.dim())).collect();
        let s = Subspace::span(k.dim(), &vs);
        if s.dim() == d && k.is_nondegenerate(&s) {
            return s;
        }
    }
}

/// Self-adjoint operator part on a non-degenerate `D` plus the multivalued part `D^[⊥]`.
pub fn self_adjoint_on(rng: &mut TestRng, k: &KreinSpace, dom: &Subspace) -> LinearRelation {
    let n = k.dim();
    let b = dom.basis_matrix();
    let g = k.gram_of(dom);
    let h = hermitian(rng, dom.dim());
    let coords = &g.inverse().unwrap() * &h;
    let img = &b * &coords;
    let mut pairs: Vec<(Vector, Vector)> = (0..dom.dim()).map(|j| (b.col(j), img.col(j))).collect();
    for m in k.ortho_complement(dom).basis() {
        pairs.push((vec![Scalar::zero(); n], m.clone()));
    }
    LinearRelation::from_pairs(k.clone(), k.clone(), &pairs).unwrap()
}

pub fn self_adjoint(rng: &mut TestRng, k: &KreinSpace) -> LinearRelation {
    let n = k.dim();
    let d = if rng.gen_bool(0.6) { n } else { rng.gen_range(1..n.max(2)) };
    let dom = if d == n { Subspace::full(n) } else { nondegenerate_subspace(rng, k, d) };
    self_adjoint_on(rng, k, &dom)
}

pub fn self_adjoint_operator(rng: &mut TestRng, k: &KreinSpace) -> LinearRelation {
    self_adjoint_on(rng, k, &Subspace::full(k.dim()))
}

fn entrywise(p: usize, f: impl Fn(usize, usize) -> RatFun) -> Vec<Vec<RatFun>> {
    (0..p).map(|i| (0..p).map(|j| f(i, j)).collect()).collect()
}

fn add_into(acc: &mut [Vec<RatFun>], c: &Matrix, t: &RatFun) {
    for (i, row) in acc.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            if !c.get(i, j).is_zero() {
                *e = &*e + &t.scale(c.get(i, j));
            }
        }
    }
}

/// `Σ C/(z − α)^k` with Hermitian `C` over real poles of order `≤ max_order`
/// (two at most for scalars, one for `p > 1`), sometimes a conjugate pair
/// for scalars, an optional Hermitian constant and a PSD linear term.
pub fn nevanlinna_function(rng: &mut TestRng, p: usize, max_order: u32) -> RationalMatrixFunction {
    let mut acc = entrywise(p, |_, _| RatFun::zero());
    let mut used = Vec::new();
    for _ in 0..rng.gen_range(1..=if p == 1 { 2 } else { 1 }) {
        let alpha = Scalar::int(rng.gen_range(-2..=2));
        if used.contains(&alpha) {
            continue;
        }
        used.push(alpha.clone());
        for k in 1..=rng.gen_range(1..=max_order) {
            add_into(&mut acc, &hermitian(rng, p), &RatFun::pole_term(&alpha, k));
        }
    }
    if p == 1 && rng.gen_bool(0.2) {
        let w = Scalar::gauss(rng.gen_range(-1..=1), 1);
        let c = matrix(rng, p, p);
        add_into(&mut acc, &c, &RatFun::pole_term(&w, 1));
        add_into(&mut acc, &c.adjoint(), &RatFun::pole_term(&w.conj(), 1));
    }
    if rng.gen_bool(0.4) {
        add_into(&mut acc, &hermitian(rng, p), &RatFun::one());
    }
    if rng.gen_bool(0.2) {
        let b = matrix(rng, p, p);
        add_into(&mut acc, &(&b.adjoint() * &b), &RatFun::x());
    }
    RationalMatrixFunction::new(acc).unwrap()
}

pub fn scalar_fn(num: &[i64], den: &[i64]) -> RationalMatrixFunction {
    RationalMatrixFunction::scalar(RatFun::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()).unwrap()
}

pub fn matrix_fn(entries: Vec<Vec<(&[i64], &[i64])>>) -> RationalMatrixFunction {
    RationalMatrixFunction::new(
        entries
            .into_iter()
            .map(|row| row.into_iter().map(|(n, d)| RatFun::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()).collect())
            .collect(),
    )
    .unwrap()
}

pub fn example6() -> (RationalMatrixFunction, RationalMatrixFunction) {
    (scalar_fn(&[-1, -2], &[0, 0, 1]), scalar_fn(&[2], &[0, 1]))
}

pub fn example4() -> (RationalMatrixFunction, RationalMatrixFunction) {
    let q1 = matrix_fn(vec![vec![(&[-1], &[0, 1]), (&[0], &[1])], vec![(&[0], &[1]), (&[-1], &[0, 1])]]);
    let q2 = matrix_fn(vec![vec![(&[-1], &[0, 0, 1]), (&[-1], &[0, 1])], vec![(&[-1], &[0, 1]), (&[0], &[1])]]);
    (q1, q2)
}

/// `[[z + a, z], [z, z + b]]`.
pub fn example2(a: &Scalar, b: &Scalar) -> RationalMatrixFunction {
    let lin = |c: &Scalar| RatFun::poly(Poly::new(vec![c.clone(), Scalar::one()]));
    RationalMatrixFunction::new(vec![vec![lin(a), RatFun::x()], vec![RatFun::x(), lin(b)]]).unwrap()
}
