//! Univariate polynomials with Gaussian-rational coefficients and exact root
//! extraction.

use crate::linalg::{Matrix, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients in ascending order of powers, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(s: Scalar) -> Self {
        Poly::new(vec![s])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// `x − a`.
    pub fn linear_root(a: &Scalar) -> Self {
        Poly::new(vec![-a, Scalar::one()])
    }

    pub fn monomial(s: Scalar, k: usize) -> Self {
        let mut c = vec![Scalar::zero(); k];
        c.push(s);
        Poly::new(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Scalar::int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.c.last()
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * z) + a;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * &Scalar::int(k as i64))
                .collect(),
        )
    }

    /// Coefficient-wise conjugate, so that `p̄(z̄) = conj(p(z))`.
    pub fn conj_coeffs(&self) -> Poly {
        Poly::new(self.c.iter().map(Scalar::conj).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.c.iter().map(|a| a * s).collect())
    }

    /// Real and imaginary coefficient parts: `p = re + i·im`.
    pub fn split_re_im(&self) -> (Poly, Poly) {
        (
            Poly::new(self.c.iter().map(|a| Scalar::real(a.re().clone())).collect()),
            Poly::new(self.c.iter().map(|a| Scalar::real(a.im().clone())).collect()),
        )
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] * &lead_inv;
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                if !b.is_zero() {
                    r[k + j] -= &(&f * b);
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        // Primitive pseudo-remainder sequence over Z[i].
        let (mut x, mut y) = (integral(a), integral(b));
        while !y.is_empty() {
            let r = pseudo_remainder(&x, &y);
            x = y;
            y = r;
        }
        from_integral(&x).monic()
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = Poly::gcd(a, b);
        (a * &b.exact_div(&g).unwrap()).monic()
    }

    /// Taylor shift `p(x + a)`.
    pub fn shift(&self, a: &Scalar) -> Poly {
        let lin = Poly::new(vec![a.clone(), Scalar::one()]);
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone());
        }
        acc
    }

    /// `p(s·x)`.
    pub fn dilate(&self, s: &Scalar) -> Poly {
        let mut pw = Scalar::one();
        let mut out = Vec::with_capacity(self.c.len());
        for c in &self.c {
            out.push(c * &pw);
            pw = &pw * s;
        }
        Poly::new(out)
    }

    /// `p / gcd(p, p')`, made monic.
    pub fn squarefree(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.exact_div(&g).unwrap().monic()
    }

    /// Multiplicity of `a` as a root (0 when `p(a) ≠ 0`; `usize::MAX` for p = 0).
    pub fn root_multiplicity(&self, a: &Scalar) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::linear_root(a);
        let mut p = self.clone();
        let mut m = 0;
        while let Some(q) = p.exact_div(&lin) {
            if p.is_constant() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }

    /// Newton interpolation through distinct nodes.
    pub fn interpolate(points: &[(Scalar, Scalar)]) -> Poly {
        let n = points.len();
        let mut coef: Vec<Scalar> = points.iter().map(|(_, y)| y.clone()).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                let den = &points[i].0 - &points[i - j].0;
                coef[i] = &(&coef[i] - &coef[i - 1]) / &den;
            }
        }
        let mut acc = Poly::zero();
        for i in (0..n).rev() {
            acc = &(&acc * &Poly::linear_root(&points[i].0)) + &Poly::constant(coef[i].clone());
        }
        acc
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| match k {
                0 => format!("({a})"),
                1 => format!("({a})z"),
                _ => format!("({a})z^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += &(a * b);
                }
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|a| -a).collect())
    }
}

/// Determinant of a square matrix of polynomials, by evaluation at integer
/// nodes and interpolation.
pub fn poly_determinant(entries: &[Vec<Poly>]) -> Poly {
    let n = entries.len();
    if n == 0 {
        return Poly::one();
    }
    let bound: usize = entries
        .iter()
        .map(|row| row.iter().filter_map(Poly::degree).max().unwrap_or(0))
        .sum();
    let pts: Vec<(Scalar, Scalar)> = (0..=bound as i64)
        .map(|t| {
            let x = Scalar::int(t);
            let m = Matrix::from_fn(n, n, |i, j| entries[i][j].eval(&x));
            (x, m.determinant())
        })
        .collect();
    Poly::interpolate(&pts)
}

type GaussInt = (BigInt, BigInt);

fn gauss_mul(a: &GaussInt, b: &GaussInt) -> GaussInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn trim_integral(v: &mut Vec<GaussInt>) {
    while v.last().is_some_and(|c| c.0.is_zero() && c.1.is_zero()) {
        v.pop();
    }
}

fn strip_content(v: &mut [GaussInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(&c.0).gcd(&c.1));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            c.0 /= &g;
            c.1 /= &g;
        }
    }
}

/// `p` scaled to Z[i] coefficients with trivial integer content.
fn integral(p: &Poly) -> Vec<GaussInt> {
    let l = p.c.iter().fold(BigInt::one(), |l, a| l.lcm(a.re().denom()).lcm(a.im().denom()));
    let mut v: Vec<GaussInt> = p
        .c
        .iter()
        .map(|a| {
            let f = |r: &BigRational| r.numer() * (&l / r.denom());
            (f(a.re()), f(a.im()))
        })
        .collect();
    strip_content(&mut v);
    v
}

fn from_integral(v: &[GaussInt]) -> Poly {
    Poly::new(v.iter().map(|(a, b)| Scalar::new(BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone()))).collect())
}

/// Primitive part of the pseudo-remainder of `a` by `b`.
fn pseudo_remainder(a: &[GaussInt], b: &[GaussInt]) -> Vec<GaussInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let k = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = gauss_mul(c, lc);
        }
        for (i, bi) in b.iter().enumerate() {
            let t = gauss_mul(&lr, bi);
            r[i + k].0 -= t.0;
            r[i + k].1 -= t.1;
        }
        trim_integral(&mut r);
        strip_content(&mut r);
    }
    r
}

/// An irrational (or not yet identified) root, known only approximately.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ApproxRoot {
    pub re: f64,
    pub im: f64,
    /// Heuristic radius of a disk believed to isolate the root.
    pub radius: f64,
}

/// Roots of a polynomial: exact Gaussian-rational ones with multiplicity, and
/// the remaining ones as labeled approximations.
#[derive(Clone, Debug, Default)]
pub struct RootSet {
    pub exact: Vec<(Scalar, usize)>,
    pub approx: Vec<ApproxRoot>,
}

/// Finds every Gaussian-rational root exactly. Real rational roots come from
/// the rational root theorem applied to the real common factor; the rest are
/// located numerically, snapped to nearby small rationals and confirmed by
/// exact evaluation. Unconfirmed roots are returned in `approx`.
pub fn roots(p: &Poly) -> RootSet {
    let mut out = RootSet::default();
    if p.is_constant() {
        return out;
    }
    let mut rest = p.squarefree();
    let push = |r: Scalar, rest: &mut Poly, out: &mut RootSet| {
        if out.exact.iter().any(|(x, _)| *x == r) {
            return;
        }
        let m = p.root_multiplicity(&r);
        if m > 0 {
            *rest = rest.exact_div(&Poly::linear_root(&r)).unwrap_or_else(|| rest.clone());
            out.exact.push((r, m));
        }
    };
    for r in real_rational_roots(&rest) {
        push(r, &mut rest, &mut out);
    }
    for _round in 0..3 {
        if rest.is_constant() {
            break;
        }
        let approx = numeric_roots(&rest);
        let mut found = false;
        for (re, im) in approx {
            for den in [1i64, 2, 3, 4, 6, 8, 12, 16, 24, 60, 120, 840, 5040, 100_000] {
                if let Some(c) = Scalar::approximate(re, im, den) {
                    let (cr, ci) = c.to_f64();
                    let close = ((cr - re).powi(2) + (ci - im).powi(2)).sqrt() <= 1e-9 * (1.0 + re.hypot(im));
                    if close && rest.eval(&c).is_zero() {
                        push(c, &mut rest, &mut out);
                        found = true;
                        break;
                    }
                }
            }
        }
        if !found {
            break;
        }
    }
    if !rest.is_constant() {
        let approx = numeric_roots(&rest);
        let spread = approx
            .iter()
            .flat_map(|a| approx.iter().map(move |b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()))
            .filter(|d| *d > 0.0)
            .fold(f64::INFINITY, f64::min);
        let radius = if spread.is_finite() { (spread / 4.0).min(1e-6) } else { 1e-6 };
        out.approx = approx.into_iter().map(|(re, im)| ApproxRoot { re, im, radius }).collect();
    }
    out.exact.sort_by(|a, b| {
        a.0.re()
            .cmp(b.0.re())
            .then_with(|| a.0.im().cmp(b.0.im()))
    });
    out
}

/// Real rational roots of `p` (distinct), via the rational root theorem on the
/// integer-normalized real common factor of `p`.
fn real_rational_roots(p: &Poly) -> Vec<Scalar> {
    let (re, im) = p.split_re_im();
    let g = if im.is_zero() { re.monic() } else { Poly::gcd(&re, &im) };
    if g.is_constant() {
        return Vec::new();
    }
    let mut ints: Vec<BigInt> = {
        let lcm = g
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.re().denom()));
        g.coeffs().iter().map(|c| (c.re() * BigRational::from_integer(lcm.clone())).to_integer()).collect()
    };
    let mut found = Vec::new();
    let zeros = ints.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        found.push(Scalar::zero());
        ints.drain(0..zeros);
    }
    if ints.len() <= 1 {
        return found;
    }
    let (a0, an) = (ints[0].abs(), ints.last().unwrap().abs());
    let (Some(d0), Some(dn)) = (divisors(&a0), divisors(&an)) else {
        return found;
    };
    // Candidates a/b in lowest terms must satisfy |a/b| ≤ 1 + max|cₖ/cₙ|,
    // (b − a) | p(1) and (b + a) | p(−1).
    let bound = BigRational::one() + ints.iter().map(|c| BigRational::new(c.abs(), an.clone())).max().unwrap();
    let p1: BigInt = ints.iter().sum();
    let pm1: BigInt = ints.iter().enumerate().map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c }).sum();
    let divides = |d: BigInt, v: &BigInt| v.is_zero() || (!d.is_zero() && (v % d).is_zero());
    // b^n p(a/b) by integer Horner.
    let vanishes = |a: &BigInt, b: &BigInt| {
        let mut acc = BigInt::zero();
        let mut bp = BigInt::one();
        for c in ints.iter().rev() {
            acc = &acc * a + c * &bp;
            bp *= b;
        }
        acc.is_zero()
    };
    for num in &d0 {
        for den in &dn {
            if !num.gcd(den).is_one() || BigRational::new(num.clone(), den.clone()) > bound {
                continue;
            }
            for sign in [1i64, -1] {
                let a = num * BigInt::from(sign);
                if divides(den - &a, &p1) && divides(den + &a, &pm1) && vanishes(&a, den) {
                    let s = Scalar::real(BigRational::new(a, den.clone()));
                    if !found.contains(&s) {
                        found.push(s);
                    }
                }
            }
        }
    }
    found
}

/// Positive divisors by trial division; `None` when the number is too large
/// to factor quickly.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Durand–Kerner iteration on a floating copy of `p`; heuristic only.
fn numeric_roots(p: &Poly) -> Vec<(f64, f64)> {
    let Some(deg) = p.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let lead = p.leading().unwrap().to_f64();
    let raw: Vec<(f64, f64)> = p.coeffs().iter().map(|a| cdiv(a.to_f64(), lead)).collect();
    // Iterate on p(s·y) with the Fujiwara bound s, so the roots lie in the unit disk.
    let s = (0..deg)
        .filter(|&k| cabs(raw[k]) > 0.0)
        .map(|k| 2.0 * cabs(raw[k]).powf(1.0 / (deg - k) as f64))
        .fold(f64::MIN_POSITIVE, f64::max);
    let c: Vec<(f64, f64)> = raw
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let m = cabs(a);
            if m == 0.0 {
                return (0.0, 0.0);
            }
            let scaled = (m.ln() - (deg - k) as f64 * s.ln()).exp();
            (a.0 / m * scaled, a.1 / m * scaled)
        })
        .collect();
    let mut z: Vec<(f64, f64)> = (0..deg)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.4;
            (0.9 * t.cos(), 0.9 * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let num = horner_f64(&c, z[i]);
            let mut den = (1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den = cmul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = cdiv(num, den);
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = (z[i].0 - step.0, z[i].1 - step.1);
                delta = delta.max(cabs(step));
            }
        }
        if delta < 1e-15 {
            break;
        }
    }
    z.into_iter().map(|(a, b)| (a * s, b * s)).collect()
}

fn horner_f64(c: &[(f64, f64)], z: (f64, f64)) -> (f64, f64) {
    let mut acc = (0.0, 0.0);
    for a in c.iter().rev() {
        acc = cmul(acc, z);
        acc = (acc.0 + a.0, acc.1 + a.1);
    }
    acc
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let n = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
}

fn cabs(a: (f64, f64)) -> f64 {
    (a.0 * a.0 + a.1 * a.1).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]); // x² − 1
        let b = Poly::from_ints(&[1, 1]); // x + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = Poly::gcd(&a, &Poly::from_ints(&[1, 2, 1]));
        assert_eq!(g, b);
        assert_eq!(Poly::lcm(&Poly::x(), &Poly::x().pow(2)), Poly::x().pow(2));
    }

    #[test]
    fn shift_and_interpolate() {
        let p = Poly::from_ints(&[3, -2, 0, 1]);
        let a = Scalar::gauss(1, 2);
        let shifted = p.shift(&a);
        let t = Scalar::gauss(-3, 1);
        assert_eq!(shifted.eval(&t), p.eval(&(&t + &a)));
        let pts: Vec<_> = (0..4).map(|k| (Scalar::int(k), p.eval(&Scalar::int(k)))).collect();
        assert_eq!(Poly::interpolate(&pts), p);
    }

    #[test]
    fn exact_roots_rational_and_gaussian() {
        // (x − 1/2)² (x + 3) (x² + 1)
        let half = Scalar::frac(1, 2);
        let p = &(&Poly::linear_root(&half).pow(2) * &Poly::from_ints(&[3, 1])) * &Poly::from_ints(&[1, 0, 1]);
        let rs = roots(&p);
        assert!(rs.approx.is_empty());
        assert!(rs.exact.contains(&(half, 2)));
        assert!(rs.exact.contains(&(Scalar::int(-3), 1)));
        assert!(rs.exact.contains(&(Scalar::i(), 1)));
        assert!(rs.exact.contains(&(-Scalar::i(), 1)));
    }

    #[test]
    fn irrational_roots_are_flagged() {
        let rs = roots(&Poly::from_ints(&[-2, 0, 1]));
        assert!(rs.exact.is_empty());
        assert_eq!(rs.approx.len(), 2);
        assert!(rs.approx.iter().any(|r| (r.re - 2f64.sqrt()).abs() < 1e-9));
    }

    #[test]
    fn polynomial_determinant() {
        // det [[x, 1], [1, x]] = x² − 1
        let m = vec![vec![Poly::x(), Poly::one()], vec![Poly::one(), Poly::x()]];
        assert_eq!(poly_determinant(&m), Poly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn many_gaussian_roots() {
        // Large roots push the Cauchy bound past f64 range.
        let rs: Vec<Scalar> = (1..=12).map(|k| Scalar::gauss(100 * k, if k % 2 == 0 { 50 } else { -50 })).collect();
        let p = rs.iter().fold(Poly::one(), |acc, r| &acc * &Poly::linear_root(r));
        let found = roots(&p);
        assert!(found.approx.is_empty(), "{:?}", found.approx);
        assert_eq!(found.exact.len(), 12);
        assert!(rs.iter().all(|r| found.exact.iter().any(|(x, m)| x == r && *m == 1)));
        let sq = &p * &p;
        assert_eq!(Poly::gcd(&sq, &sq.derivative()), p);
    }
}
