//! Exact inertia of Hermitian matrices by congruence diagonalization.

use super::matrix::Matrix;
use super::scalar::Scalar;
use super::LinalgError;
use serde::Serialize;
use std::cmp::Ordering;

/// Sign counts `(n_plus, n_zero, n_minus)` of a Hermitian form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Inertia {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.plus + self.zero + self.minus
    }

    pub fn is_positive_definite(&self) -> bool {
        self.zero == 0 && self.minus == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.zero == 0 && self.plus == 0
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }
}

/// A congruence `T* H T = diag(d)` with `T` invertible.
#[derive(Clone, Debug)]
pub struct Congruence {
    pub transform: Matrix,
    pub diagonal: Vec<Scalar>,
}

impl Congruence {
    pub fn inertia(&self) -> Inertia {
        let mut i = Inertia { plus: 0, zero: 0, minus: 0 };
        for d in &self.diagonal {
            match d.real_sign() {
                Ordering::Greater => i.plus += 1,
                Ordering::Less => i.minus += 1,
                Ordering::Equal => i.zero += 1,
            }
        }
        i
    }
}

/// Diagonalizes `h` by symmetric pivoting. When every remaining diagonal
/// entry vanishes but an off-diagonal `h_jl = c` does not, the basis vector
/// `e_j` is replaced by `e_j + c̄·e_l`, whose square is `2|c|² > 0`; this is
/// the rational form of the hyperbolic substitution `x = u + v`, `y = u − v`.
pub fn congruence_diagonalize(h: &Matrix) -> Result<Congruence, LinalgError> {
    if !h.is_hermitian() {
        return Err(LinalgError::NotHermitian);
    }
    let n = h.rows();
    let mut a = h.clone();
    let mut t = Matrix::identity(n);
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = (k..n).find(|&j| !a.get(j, j).is_zero());
        let j = match pivot {
            Some(j) => j,
            None => {
                let pair = (k..n).find_map(|j| ((j + 1)..n).find(|&l| !a.get(j, l).is_zero()).map(|l| (j, l)));
                let Some((j, l)) = pair else {
                    diag.extend((k..n).map(|_| Scalar::zero()));
                    break;
                };
                let c = a.get(j, l).conj();
                add_multiple(&mut a, &mut t, j, l, &c);
                j
            }
        };
        if j != k {
            swap(&mut a, &mut t, j, k);
        }
        let d = a.get(k, k).clone();
        for i in (k + 1)..n {
            let f = a.get(k, i) / &d;
            if f.is_zero() {
                continue;
            }
            add_multiple(&mut a, &mut t, i, k, &-&f);
        }
        diag.push(d);
    }
    Ok(Congruence { transform: t, diagonal: diag })
}

/// Basis vector `e_j ← e_j + c·e_l`: column op on `t`, congruence on `a`.
fn add_multiple(a: &mut Matrix, t: &mut Matrix, j: usize, l: usize, c: &Scalar) {
    let n = a.rows();
    for r in 0..n {
        let v = a.get(r, j) + &(a.get(r, l) * c);
        a.set(r, j, v);
    }
    let cc = c.conj();
    for col in 0..n {
        let v = a.get(j, col) + &(a.get(l, col) * &cc);
        a.set(j, col, v);
    }
    for r in 0..t.rows() {
        let v = t.get(r, j) + &(t.get(r, l) * c);
        t.set(r, j, v);
    }
}

fn swap(a: &mut Matrix, t: &mut Matrix, j: usize, k: usize) {
    let n = a.rows();
    for r in 0..n {
        let (x, y) = (a.get(r, j).clone(), a.get(r, k).clone());
        a.set(r, j, y);
        a.set(r, k, x);
    }
    for c in 0..n {
        let (x, y) = (a.get(j, c).clone(), a.get(k, c).clone());
        a.set(j, c, y);
        a.set(k, c, x);
    }
    for r in 0..t.rows() {
        let (x, y) = (t.get(r, j).clone(), t.get(r, k).clone());
        t.set(r, j, y);
        t.set(r, k, x);
    }
}

/// Inertia of a Hermitian matrix.
pub fn hermitian_signature(h: &Matrix) -> Result<Inertia, LinalgError> {
    Ok(congruence_diagonalize(h)?.inertia())
}
