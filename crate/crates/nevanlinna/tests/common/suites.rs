//! Randomized suites shared by the property tests and the acceptance run.
//! Each returns a one-line tally or the first counterexample.

use super::*;
use nevanlinna::jordan::{build_prop8, prop6_decompose, prop8_separation_test, simple_prop8_alphas, Prop8Params};
use nevanlinna::krein::{KreinSpace, Subspace};
use nevanlinna::linalg::{unit_vector, Matrix, Scalar};
use nevanlinna::ratfun::upper_lattice;
use nevanlinna::ratfun::RationalMatrixFunction;
use nevanlinna::realization::{canonical_model, ModelBudget, Realization};
use nevanlinna::relation::{check_reduction, component_relation, eq22_check, lemma6_report, LinearRelation};
use nevanlinna::sumcriteria::build_sum;
use rand::Rng;

pub type Outcome = Result<String, String>;

pub fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn adjoint_involution(seed: u64, cases: usize) -> Outcome {
    let mut r = rng(seed);
    for c in 0..cases {
        let n = r.gen_range(1..=4);
        let k = krein_space(&mut r, n);
        let d = r.gen_range(0..=2 * n);
        let a = relation(&mut r, &k, d);
        ensure(a.adjoint().adjoint() == a, || format!("case {c}: A⁺⁺ ≠ A for {a:?}"))?;
    }
    Ok(format!("{cases} relations"))
}

pub fn mul_part_identity(seed: u64, cases: usize) -> Outcome {
    let mut r = rng(seed);
    let mut with_mul = 0;
    for c in 0..cases {
        let n = r.gen_range(1..=4);
        let k = krein_space(&mut r, n);
        let d = r.gen_range(0..=2 * n);
        let a = relation(&mut r, &k, d);
        with_mul += !a.mul().is_zero() as usize;
        ensure(eq22_check(&a), || format!("case {c}: B(0) ≠ D(B⁺)^⊥ for {a:?}"))?;
    }
    Ok(format!("{cases} relations, {with_mul} multivalued"))
}

pub fn direct_sum_iff(seed: u64, cases: usize) -> Outcome {
    let mut r = rng(seed);
    let (mut both, mut not) = (0, 0);
    for c in 0..cases {
        let (n1, n2) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let k1 = krein_space(&mut r, n1);
        let k2 = krein_space(&mut r, n2);
        let pick = |r: &mut TestRng, k: &KreinSpace| {
            if r.gen_bool(0.6) {
                self_adjoint(r, k)
            } else {
                let d = r.gen_range(0..=2 * k.dim());
                relation(r, k, d)
            }
        };
        let a1 = pick(&mut r, &k1);
        let a2 = pick(&mut r, &k2);
        let sum = LinearRelation::direct_orthogonal_sum(&a1, &a2).map_err(|e| e.to_string())?;
        let parts = a1.is_self_adjoint() && a2.is_self_adjoint();
        ensure(sum.is_self_adjoint() == parts, || format!("case {c}: sum self-adjoint ≠ parts self-adjoint"))?;
        if parts {
            both += 1
        } else {
            not += 1
        }
    }
    ensure(both > 10 && not > 10, || format!("unbalanced instances: {both} self-adjoint, {not} not"))?;
    Ok(format!("{cases} pairs ({both} self-adjoint)"))
}

/// Self-adjoint `A` whose domain splits along `K₁ [+] K₂`, so that `E₁` preserves it.
pub fn splitting_instance(r: &mut TestRng) -> (LinearRelation, Subspace) {
    let n = r.gen_range(2..=4);
    let k = krein_space(r, n);
    let d1 = r.gen_range(1..n);
    let k1 = nondegenerate_subspace(r, &k, d1);
    let k2 = k.ortho_complement(&k1);
    let part = |r: &mut TestRng, s: &Subspace| {
        if r.gen_bool(0.5) {
            return s.clone();
        }
        let d = r.gen_range(0..s.dim());
        loop {
            let vs: Vec<_> = (0..d).map(|_| s.basis_matrix().mul_vec(&vector(r, s.dim()))).collect();
            let t = Subspace::span(n, &vs);
            if t.dim() == d && k.is_nondegenerate(&t) {
                return t;
            }
        }
    };
    let dom = part(r, &k1).join(&part(r, &k2));
    (self_adjoint_on(r, &k, &dom), k1)
}

pub fn component_clauses(seed: u64, cases: usize) -> Outcome {
    let mut r = rng(seed);
    let mut dense = [0, 0];
    for c in 0..cases {
        let (a, k1) = splitting_instance(&mut r);
        let rep = lemma6_report(&a, &k1).map_err(|e| e.to_string())?;
        ensure(rep.e1_preserves_domain && !rep.hypothesis_asymmetry, || format!("case {c}: hypothesis not met"))?;
        for key in ["i", "iv"] {
            let cl = &rep.clauses[key];
            ensure(cl.applicable && cl.holds, || format!("case {c}: clause {key}: {}", cl.detail))?;
        }
        for (i, key) in ["v.1", "v.2"].iter().enumerate() {
            let cl = &rep.clauses[*key];
            ensure(cl.holds, || format!("case {c}: clause {key}: {}", cl.detail))?;
            dense[i] += cl.applicable as usize;
        }
    }
    ensure(dense.iter().all(|&d| d > 10), || format!("clause (v) rarely applicable: {dense:?}"))?;
    Ok(format!("{cases} splittings; (v) applicable {}/{}", dense[0], dense[1]))
}

pub fn reduction_iff(seed: u64, cases: usize) -> Outcome {
    let mut r = rng(seed);
    let (mut accepted, mut with_mul, mut reduced) = (0, 0, 0);
    for _ in 0..20 * cases {
        if accepted == cases {
            break;
        }
        let (a, k1) = splitting_instance(&mut r);
        let Ok(rep) = check_reduction(&a, &k1) else { continue };
        accepted += 1;
        with_mul += !a.mul().is_zero() as usize;
        reduced += rep.reduced as usize;
        let a11 = component_relation(&a, &k1, 1, 1).map_err(|e| e.to_string())?;
        ensure(rep.reduced == a11.is_self_adjoint(), || format!("reconstruction {} but A₁¹ self-adjoint {}", rep.reduced, a11.is_self_adjoint()))?;
        ensure(rep.clauses.values().all(|c| c.holds), || format!("clause failure: {rep:?}"))?;
    }
    ensure(accepted == cases, || format!("only {accepted} instances met the hypotheses"))?;
    ensure(with_mul * 10 > cases, || format!("only {with_mul} multivalued instances"))?;
    Ok(format!("{cases} instances ({with_mul} multivalued, {reduced} reduced)"))
}

pub fn sum_pair(seed: u64) -> (RationalMatrixFunction, RationalMatrixFunction) {
    let mut r = rng(seed);
    let p = r.gen_range(1..=2);
    let q1 = nevanlinna_function(&mut r, p, 2);
    let q2 = if r.gen_bool(0.35) {
        nevanlinna_function(&mut r, p, 2).sub(&q1).unwrap()
    } else {
        nevanlinna_function(&mut r, p, 2)
    };
    (q1, q2)
}

pub fn inertia_identity(seed: u64, cases: usize) -> Outcome {
    let b = ModelBudget::default();
    let mut lost = 0;
    for c in 0..cases as u64 {
        let (q1, q2) = sum_pair(seed.wrapping_add(c));
        let err = |e: &dyn std::fmt::Display| format!("pair {c}: {e}");
        let r1 = canonical_model(&q1, &b).map_err(|e| err(&e))?;
        let r2 = canonical_model(&q2, &b).map_err(|e| err(&e))?;
        let rep = build_sum(&r1, &r2).map_err(|e| err(&e))?;
        let d = &rep.decomposition;
        let lhs = r1.kappa() + r2.kappa();
        let rhs = rep.kappa() + d.l0.dim() + d.inertia_l2.minus;
        ensure(lhs == rhs, || format!("pair {c}: κ₁ + κ₂ = {lhs} but κ + dim L₀ + neg L₂ = {rhs}"))?;
        let direct = canonical_model(&q1.add(&q2).unwrap(), &b).map_err(|e| err(&e))?.kappa();
        ensure(direct == rep.kappa(), || format!("pair {c}: κ from L₁ = {} but κ = {direct}", rep.kappa()))?;
        ensure(direct <= lhs, || format!("pair {c}: κ = {direct} > κ₁ + κ₂ = {lhs}"))?;
        lost += (direct < lhs) as usize;
    }
    Ok(format!("{cases} pairs, {lost} with κ < κ₁ + κ₂"))
}

/// Independent check of a decomposition: J-orthogonal, A-invariant,
/// non-degenerate parts spanning K, Q = ΣQᵢ and ind₋ K = Σκᵢ.
pub fn check_prop6(r: &Realization, alpha: &Scalar) -> Result<usize, String> {
    let d = prop6_decompose(r, alpha).map_err(|e| e.to_string())?;
    let k = r.space();
    let a = r.relation().as_matrix().ok_or("not an operator")?;
    let mut dims = 0;
    for (i, p) in d.parts.iter().enumerate() {
        dims += p.subspace.dim();
        ensure(k.is_nondegenerate(&p.subspace), || format!("part {i} degenerate"))?;
        ensure(p.subspace.contains_subspace(&p.subspace.image(&a)), || format!("part {i} not invariant"))?;
        for q in &d.parts[i + 1..] {
            for x in p.subspace.basis() {
                for y in q.subspace.basis() {
                    ensure(k.ip(x, y).is_zero(), || format!("part {i} not orthogonal"))?;
                }
            }
        }
    }
    ensure(dims == k.dim(), || format!("parts span {dims} of {}", k.dim()))?;
    let q = r.transfer_function().map_err(|e| e.to_string())?;
    let mut sum = RationalMatrixFunction::zero(q.size());
    for p in &d.parts {
        sum = sum.add(&p.realization.transfer_function().map_err(|e| e.to_string())?).unwrap();
    }
    ensure(sum == q, || "Σ Qᵢ ≠ Q".into())?;
    let ks: usize = d.parts.iter().map(|p| p.kappa).sum();
    ensure(ks == k.neg_index(), || format!("Σκᵢ = {ks} but ind₋ K = {}", k.neg_index()))?;
    Ok(d.r)
}

/// Random `J`-self-adjoint matrix with eigenvalue 0 and a random `Γ`.
pub fn random_singular_realization(r: &mut TestRng) -> Realization {
    loop {
        let n = r.gen_range(2..=4);
        let k = krein_space(r, n);
        let mut m = matrix(r, n, n);
        for j in 0..n {
            m.set(n - 1, j, Scalar::zero());
        }
        let h = &(&m.adjoint() * &hermitian(r, n)) * &m;
        let a = &k.gram().inverse().unwrap() * &h;
        let rel = LinearRelation::graph_of(&k, &a).unwrap();
        let Some(z0) = upper_lattice().take(10).find(|z| rel.is_in_resolvent_set(z)) else { continue };
        let cols = r.gen_range(1..=2);
        let g = matrix(r, n, cols);
        if let Ok(real) = Realization::from_resolvent_form(k, rel, &g, &Matrix::zeros(cols, cols), z0) {
            return real;
        }
    }
}

/// Cyclic-`a₂` parameter sets with both `x₀ⁱ` simple.
pub fn cyclic_prop8_params(r: &mut TestRng, n: usize) -> Prop8Params {
    loop {
        let a11 = hermitian(r, n);
        if a11.inverse().is_none() {
            continue;
        }
        let a2 = vector(r, n);
        let mut kry = vec![a2.clone()];
        for _ in 1..n {
            kry.push(a11.mul_vec(kry.last().unwrap()));
        }
        if Subspace::span(n, &kry).dim() < n {
            continue;
        }
        let a1 = if r.gen_bool(0.3) { unit_vector(n, 0) } else { vector(r, n) };
        if Subspace::span(n, &[a1.clone(), a2.clone()]).dim() < 2 {
            continue;
        }
        let t = Scalar::frac(r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 }, r.gen_range(1..=2));
        let Some((alpha1, alpha2)) = simple_prop8_alphas(&a11, &a1, &a2, &t) else { continue };
        return Prop8Params { a11, a1, a2, alpha1, alpha2 };
    }
}

pub fn prop8_cyclic(seed: u64, n: usize, cases: usize) -> Outcome {
    let mut r = rng(seed);
    for c in 0..cases {
        let params = cyclic_prop8_params(&mut r, n);
        let m = build_prop8(params).map_err(|e| format!("case {c}: {e}"))?;
        ensure(m.clauses.all(), || format!("case {c}: clauses {:?}", m.clauses))?;
        let rep = prop8_separation_test(&m);
        ensure(rep.a2_cyclic, || format!("case {c}: a2 not cyclic"))?;
        ensure(rep.obstruction && !rep.separation_possible, || format!("case {c}: no obstruction: {rep:?}"))?;
    }
    Ok(format!("n = {n}: {cases} cyclic models, obstruction in all"))
}
