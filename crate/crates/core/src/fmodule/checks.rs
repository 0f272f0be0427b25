//! Exact operator identities on box-truncated modules.

use std::collections::VecDeque;

use serde_json::Value;

use super::character::TwistCharacter;
use super::module::{ad, box_points, c2, in_box, t, tprime, witt, BoxVector, Flavor, ModuleSpec, Operator};
use super::report::{CheckContext, Report, Tally};
use crate::cyclotomic::CycNumber;
use crate::der::{dot, unit_vec};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanBasis};
use crate::semidirect::GElement;
use crate::torus::LatticePoint;

fn one_hot(dim: usize, i: usize) -> Vec<CycNumber> {
    unit_vec(dim, i)
}

fn fmt_vec(u: &[CycNumber]) -> String {
    let parts: Vec<String> = u.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Applies `op` to every basis vector at every start weight whose path stays in
/// the box, recording any nonzero output.
pub fn operator_vanishes(ms: &ModuleSpec, op: &Operator, radius: &[i64], label: &str) -> Result<Tally> {
    let mut tally = Tally::new();
    let pts = op.interior(radius)?;
    if pts.is_empty() {
        tally.empty_cases = 1;
        return Ok(tally);
    }
    tally.cases = 1;
    let dim = ms.dim();
    for i in 0..dim {
        let mut w = BoxVector::new(radius.to_vec());
        for n in &pts {
            w.push(n.clone(), one_hot(dim, i));
        }
        let img = op.apply(ms, &w)?;
        if img.truncated() {
            tally.record_failure(format!("{label}: interior evaluation left the box"));
            continue;
        }
        tally.evaluations += pts.len() - 1;
        tally.record(img.first_nonzero().map(|(_, c)| c), || {
            let (p, _) = img.first_nonzero().expect("nonzero");
            format!("{label}: basis vector {i}, output weight {p}")
        });
    }
    Ok(tally)
}

/// `t^m t^n - σ(m,n) t^{m+n}`.
pub fn l_family_torus(ms: &ModuleSpec, m: &LatticePoint, n: &LatticePoint) -> Operator {
    let s = ms.spec();
    Operator::word(vec![t(s, m), t(s, n)]).sub(Operator::element(t(s, &(m + n))).scale(&s.sigma(m, n)))
}

/// `(ad t^n - t^n)(ad t^m - t^m) + σ(m,n)(ad t^{m+n} - t^{m+n})`.
pub fn l_family_c2(ms: &ModuleSpec, n: &LatticePoint, m: &LatticePoint) -> Operator {
    let s = ms.spec();
    Operator::word(vec![c2(s, n), c2(s, m)]).add(Operator::element(c2(s, &(m + n))).scale(&s.sigma(m, n)))
}

/// `t^0 - 1`.
pub fn l_family_unit(ms: &ModuleSpec) -> Operator {
    Operator::element(t(ms.spec(), &LatticePoint::zero(ms.rank()))).sub(Operator::identity())
}

/// The three generator families of the ideal `L(g)`, which must act as zero.
pub fn l_relations_vanish(
    ms: &ModuleSpec,
    pairs: &[(LatticePoint, LatticePoint)],
    radius: &[i64],
    ctx: &CheckContext,
) -> Result<Report> {
    let mut fam = [Tally::new(), Tally::new(), Tally::new()];
    for (m, n) in pairs {
        fam[0].merge(operator_vanishes(ms, &l_family_torus(ms, m, n), radius, &format!("t^{m} t^{n}"))?);
        fam[1].merge(operator_vanishes(ms, &l_family_c2(ms, m, n), radius, &format!("X_{m} X_{n}"))?);
    }
    fam[2].merge(operator_vanishes(ms, &l_family_unit(ms), radius, "t^0 - 1")?);
    let mut total = Tally::new();
    for (k, f) in fam.into_iter().enumerate() {
        total.note(&format!("family_{}_pass", k + 1), f.passed());
        total.merge(f);
    }
    Ok(total.finish("l_relations", ctx, pairs.len()))
}

/// The product rule of the second copy of `C_q`, in the generator form
/// `X_n X_m + σ(m,n) X_{m+n} = 0`. Also reports whether the operator form
/// `X_n X_m = σ(n,m) X_{n+m}` holds on the module.
pub fn c2_operator_product_check(
    ms: &ModuleSpec,
    pairs: &[(LatticePoint, LatticePoint)],
    radius: &[i64],
    ctx: &CheckContext,
) -> Result<Report> {
    let s = ms.spec();
    let mut gen = Tally::new();
    let mut alt = Tally::new();
    for (n, m) in pairs {
        gen.merge(operator_vanishes(ms, &l_family_c2(ms, n, m), radius, &format!("X_{n} X_{m}"))?);
        let op = Operator::word(vec![c2(s, n), c2(s, m)]).sub(Operator::element(c2(s, &(n + m))).scale(&s.sigma(n, m)));
        alt.merge(operator_vanishes(ms, &op, radius, &format!("X_{n} X_{m}"))?);
    }
    gen.note("convention", "X_n X_m + sigma(m,n) X_{m+n} = 0");
    gen.note("product_form_vanishes", alt.passed());
    gen.note(
        "product_form_defect",
        alt.defect.as_ref().map_or(Value::from("0"), |c| Value::from(c.normalized().to_string())),
    );
    Ok(gen.finish("c2_product", ctx, pairs.len()))
}

/// `[x, y]` acts as `x y - y x`.
pub fn module_axiom_check(
    ms: &ModuleSpec,
    pairs: &[(GElement, GElement)],
    radius: &[i64],
    ctx: &CheckContext,
) -> Result<Report> {
    let mut tally = Tally::new();
    for (k, (x, y)) in pairs.iter().enumerate() {
        let op = Operator::element(x.gbracket(y)?)
            .sub(Operator::word(vec![x.clone(), y.clone()]))
            .add(Operator::word(vec![y.clone(), x.clone()]));
        tally.merge(operator_vanishes(ms, &op, radius, &format!("pair {k}"))?);
    }
    Ok(tally.finish("module_axiom", ctx, pairs.len()))
}

/// `D(u, 0) v(n) = (u, n + α) v(n)` at every weight of the box.
pub fn weight_grading_check(ms: &ModuleSpec, us: &[Vec<CycNumber>], radius: &[i64], ctx: &CheckContext) -> Result<Report> {
    let mut tally = Tally::new();
    let zero = LatticePoint::zero(ms.rank());
    let dim = ms.dim();
    for u in us {
        tally.cases += 1;
        let x = witt(ms.spec(), u, &zero)?;
        for n in box_points(radius) {
            let ev = n.pair(u) + dot(u, ms.alpha());
            for i in 0..dim {
                let w = BoxVector::basis(radius, &n, i, dim)?;
                let diff = ms.act(&x, &w)?.sub(&w.scale(&ev));
                tally.record(diff.first_nonzero().map(|(_, c)| c), || format!("u = {}, n = {n}", fmt_vec(u)));
            }
        }
    }
    Ok(tally.finish("weight_grading", ctx, us.len()))
}

/// `ad t^r ad t^s - (t^r ad t^s + t^s ad t^r) + σ(s,r) ad t^{r+s}`.
pub fn neq_operator(ms: &ModuleSpec, r: &LatticePoint, s: &LatticePoint) -> Operator {
    let sp = ms.spec();
    Operator::word(vec![ad(sp, r), ad(sp, s)])
        .sub(Operator::word(vec![t(sp, r), ad(sp, s)]))
        .sub(Operator::word(vec![t(sp, s), ad(sp, r)]))
        .add(Operator::element(ad(sp, &(r + s))).scale(&sp.sigma(s, r)))
}

pub fn neq_check(ms: &ModuleSpec, pairs: &[(LatticePoint, LatticePoint)], radius: &[i64], ctx: &CheckContext) -> Result<Report> {
    let mut tally = Tally::new();
    for (r, s) in pairs {
        tally.merge(operator_vanishes(ms, &neq_operator(ms, r, s), radius, &format!("r = {r}, s = {s}"))?);
    }
    Ok(tally.finish("neq", ctx, pairs.len()))
}

/// `t^{-s} ad t^s`.
pub fn lambda_operator(ms: &ModuleSpec, s: &LatticePoint) -> Operator {
    Operator::word(vec![t(ms.spec(), &-s), ad(ms.spec(), s)])
}

/// `[t^{-s} ad t^s, t^{-r} ad t^r] = 0`.
pub fn thm1_check(ms: &ModuleSpec, pairs: &[(LatticePoint, LatticePoint)], radius: &[i64], ctx: &CheckContext) -> Result<Report> {
    let mut tally = Tally::new();
    for (r, s) in pairs {
        let op = lambda_operator(ms, s).commutator(&lambda_operator(ms, r));
        tally.merge(operator_vanishes(ms, &op, radius, &format!("r = {r}, s = {s}"))?);
    }
    Ok(tally.finish("thm1", ctx, pairs.len()))
}

/// `[T'(u,r), t^{-s} ad t^s] = σ(s,r)(u,s)σ(r,s) t^{-(s+r)} ad t^{r+s} - σ(-r,r)(u,s) t^{-s} ad t^s`.
pub fn pr4_operator(ms: &ModuleSpec, u: &[CycNumber], r: &LatticePoint, s: &LatticePoint) -> Result<Operator> {
    let sp = ms.spec();
    let us = s.pair(u);
    let lhs = tprime(sp, u, r)?.commutator(&lambda_operator(ms, s));
    let c1 = sp.sigma(s, r) * &us * sp.sigma(r, s);
    let c2 = sp.sigma(&-r, r) * &us;
    Ok(lhs
        .sub(lambda_operator(ms, &(r + s)).scale(&c1))
        .add(lambda_operator(ms, s).scale(&c2)))
}

pub fn pr4_ideal_check(
    ms: &ModuleSpec,
    cases: &[(Vec<CycNumber>, LatticePoint, LatticePoint)],
    radius: &[i64],
    ctx: &CheckContext,
) -> Result<Report> {
    let mut tally = Tally::new();
    for (u, r, s) in cases {
        let op = pr4_operator(ms, u, r, s)?;
        tally.merge(operator_vanishes(ms, &op, radius, &format!("u = {}, r = {r}, s = {s}", fmt_vec(u)))?);
    }
    Ok(tally.finish("pr4_ideal", ctx, cases.len()))
}

/// `[T'(u,r), T'(v,s)] - (v,r)σ(-s,s)T'(u,r) + (u,s)σ(-r,r)T'(v,s) - σ(s,r)T'(w, r+s)`
/// with `w = σ(r,s)[(u,s)v - (v,r)u]`.
pub fn prop0_operator(
    ms: &ModuleSpec,
    u: &[CycNumber],
    r: &LatticePoint,
    v: &[CycNumber],
    s: &LatticePoint,
) -> Result<Operator> {
    let sp = ms.spec();
    let (us, vr) = (s.pair(u), r.pair(v));
    let w: Vec<CycNumber> = v
        .iter()
        .zip(u)
        .map(|(vi, ui)| sp.sigma(r, s) * (&us * vi - &vr * ui))
        .collect();
    let tu = tprime(sp, u, r)?;
    let tv = tprime(sp, v, s)?;
    Ok(tu
        .commutator(&tv)
        .sub(tu.clone().scale(&(&vr * sp.sigma(&-s, s))))
        .add(tv.clone().scale(&(&us * sp.sigma(&-r, r))))
        .sub(tprime(sp, &w, &(r + s))?.scale(&sp.sigma(s, r))))
}

pub type Prop0Case = (Vec<CycNumber>, LatticePoint, Vec<CycNumber>, LatticePoint);

pub fn prop0_bracket_check(ms: &ModuleSpec, cases: &[Prop0Case], radius: &[i64], ctx: &CheckContext) -> Result<Report> {
    let mut tally = Tally::new();
    for (u, r, v, s) in cases {
        let op = prop0_operator(ms, u, r, v, s)?;
        let label = format!("u = {}, r = {r}, v = {}, s = {s}", fmt_vec(u), fmt_vec(v));
        tally.merge(operator_vanishes(ms, &op, radius, &label)?);
    }
    Ok(tally.finish("prop0_bracket", ctx, cases.len()))
}

/// `T'(u, r)` at every weight of the box equals `σ(-r,r) · (r u^T acting on V)`.
pub fn tprime_check(
    ms: &ModuleSpec,
    cases: &[(Vec<CycNumber>, LatticePoint)],
    radius: &[i64],
    ctx: &CheckContext,
) -> Result<Report> {
    let mut tally = Tally::new();
    for (u, r) in cases {
        let expect = ms.module().outer(r, u).scale(&ms.spec().sigma(&-r, r));
        let mut first: Option<Matrix> = None;
        let mut any = false;
        for n in box_points(radius) {
            if !in_box(radius, &(&n + r)) {
                continue;
            }
            any = true;
            let m = ms.tprime_matrix(u, r, &n, radius)?;
            tally.record_matrix(&m.sub(&expect), || format!("u = {}, r = {r}, n = {n}", fmt_vec(u)));
            match &first {
                None => first = Some(m),
                Some(f) => tally.record_matrix(&m.sub(f), || format!("depends on n: u = {}, r = {r}, n = {n}", fmt_vec(u))),
            }
        }
        if any {
            tally.cases += 1;
        } else {
            tally.empty_cases += 1;
        }
    }
    Ok(tally.finish("tprime", ctx, cases.len()))
}

/// Nonzero radical points `b` of the box, smallest first.
pub fn small_radical_points(ms: &ModuleSpec, radius: &[i64]) -> Vec<LatticePoint> {
    let mut pts: Vec<LatticePoint> = box_points(radius)
        .into_iter()
        .filter(|b| !b.is_zero() && ms.spec().in_radical(b))
        .collect();
    pts.sort_by_key(|b| (b.norm_inf(), b.clone()));
    pts
}

/// `v(s) ↦ t^{r-s} v(s)` is a bijection `V_s → V_r` commuting with `T'`.
pub fn weight_shift_check(
    ms: &ModuleSpec,
    pairs: &[(LatticePoint, LatticePoint)],
    radius: &[i64],
    ctx: &CheckContext,
) -> Result<Report> {
    let sp = ms.spec();
    let d = ms.rank();
    let dim = ms.dim();
    let zero = LatticePoint::zero(d);
    let gens = small_radical_points(ms, radius);
    let mut tally = Tally::new();
    let mut equivariance = 0usize;
    for (r, s) in pairs {
        if !in_box(radius, r) || !in_box(radius, s) {
            tally.empty_cases += 1;
            continue;
        }
        tally.cases += 1;
        let delta = r - s;
        let p = ms
            .restrict(&Operator::element(t(sp, &delta)), radius, s, &delta)?
            .expect("both weights lie in the box");
        if p.rank() != dim {
            tally.record_failure(format!("t^{delta} is singular on weight {s}"));
        } else {
            tally.record(None, String::new);
        }
        let back = ms
            .restrict(&Operator::word(vec![t(sp, &-&delta), t(sp, &delta)]), radius, s, &zero)?
            .expect("both weights lie in the box");
        let expect = Matrix::scalar(dim, &sp.sigma(&-&delta, &delta));
        tally.record_matrix(&back.sub(&expect), || format!("t^{{-(r-s)}} t^{{r-s}} at r = {r}, s = {s}"));
        for b in &gens {
            if !in_box(radius, &(s + b)) || !in_box(radius, &(r + b)) {
                continue;
            }
            for i in 0..d {
                let u = unit_vec(d, i);
                let ts = ms.tprime_matrix(&u, b, s, radius)?;
                let tr = ms.tprime_matrix(&u, b, r, radius)?;
                equivariance += 1;
                tally.record_matrix(&p.mul(&ts).sub(&tr.mul(&p)), || format!("T'(e_{}, {b}) at r = {r}, s = {s}", i + 1));
            }
        }
    }
    tally.note("equivariance_checks", equivariance);
    Ok(tally.finish("weight_shift", ctx, pairs.len()))
}

/// `t^{-s} ad t^s` is scalar on every weight space, and the scalars obey
/// `λ(s,n) = f(n,s) λ(s,0) + σ(-s,s)(1 - f(n,s))`.
pub fn lambda_checks(ms: &ModuleSpec, ss: &[LatticePoint], radius: &[i64], ctx: &CheckContext) -> Result<(Report, Report)> {
    let zero = LatticePoint::zero(ms.rank());
    let mut scalar = Tally::new();
    let mut recursion = Tally::new();
    for s in ss {
        if !in_box(radius, s) {
            scalar.empty_cases += 1;
            recursion.empty_cases += 1;
            continue;
        }
        scalar.cases += 1;
        recursion.cases += 1;
        let l0 = ms.lambda_scalar(s, &zero, radius)?;
        for n in box_points(radius) {
            if !in_box(radius, &(&n + s)) {
                continue;
            }
            match ms.lambda_scalar(s, &n, radius) {
                Ok(l) => {
                    scalar.record(None, String::new);
                    let diff = l - ms.lambda_recursion(s, &n, &l0);
                    recursion.record_value(&diff, || format!("s = {s}, n = {n}"));
                }
                Err(Error::NotScalar(_)) => scalar.record_failure(format!("not scalar: s = {s}, n = {n}")),
                Err(e) => return Err(e),
            }
        }
    }
    Ok((scalar.finish("lambda_scalar", ctx, ss.len()), recursion.finish("lambda_recursion", ctx, ss.len())))
}

/// The character read back from `λ(s, 0)` matches `expected`.
pub fn extract_g_check(ms: &ModuleSpec, expected: &TwistCharacter, radius: &[i64], check: &str, ctx: &CheckContext) -> Report {
    let mut tally = Tally::new();
    tally.cases = 1;
    match ms.extract_g(radius) {
        Ok(g) => {
            tally.note("extracted", g.to_string());
            if g == *expected {
                tally.record(None, String::new);
            } else {
                tally.record_failure(format!("extracted {g}, expected {expected}"));
            }
        }
        Err(e) => tally.record_failure(e.to_string()),
    }
    tally.note("expected", expected.to_string());
    tally.finish(check, ctx, 1)
}

/// Generators used for intertwining checks: `D(e_i, 0)`, `D(e_i, b)` for the
/// radical basis, `ad t^{±e_i}` and `t^{±e_i}`.
pub fn intertwining_generators(ms: &ModuleSpec) -> Vec<GElement> {
    let sp = ms.spec();
    let d = ms.rank();
    let zero = LatticePoint::zero(d);
    let mut gens = Vec::new();
    for i in 0..d {
        let u = unit_vec(d, i);
        gens.push(witt(sp, &u, &zero).expect("0 is radical"));
        for b in &sp.radical().basis {
            gens.push(witt(sp, &u, b).expect("basis vector is radical"));
        }
        for sign in [1, -1] {
            let e = LatticePoint::unit(d, i).scale(sign);
            gens.push(ad(sp, &e));
            gens.push(t(sp, &e));
        }
    }
    gens
}

/// `Ψ(v(n)) = g(n)^{-1} v(n)` intertwines `G_g` with `F_{g^{-1}}`.
pub fn psi_check(ms_g: &ModuleSpec, radius: &[i64], ctx: &CheckContext) -> Result<Report> {
    if ms_g.flavor() != Flavor::Gg {
        return Err(Error::InvalidModule("psi_check expects a G_g module".into()));
    }
    let g = ms_g.twist().clone();
    let ms_f = ms_g.with_twist(g.inverse(), Flavor::Fg)?;
    let psi = |w: &BoxVector| w.map_diagonal(|n| g.value(&-n));
    let dim = ms_g.dim();
    let mut tally = Tally::new();
    for (k, x) in intertwining_generators(ms_g).iter().enumerate() {
        tally.cases += 1;
        for n in box_points(radius) {
            for i in 0..dim {
                let w = BoxVector::basis(radius, &n, i, dim)?;
                let lhs = psi(&ms_g.act(x, &w)?);
                if lhs.truncated() {
                    continue;
                }
                let rhs = ms_f.act(x, &psi(&w))?;
                let diff = lhs.sub(&rhs);
                tally.record(diff.first_nonzero().map(|(_, c)| c), || format!("generator {k}, n = {n}, basis {i}"));
            }
        }
    }
    tally.note("twist", g.to_string());
    tally.note("target_twist", g.inverse().to_string());
    Ok(tally.finish("psi", ctx, 1))
}

/// Result of a generated-submodule computation from one start vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicOutcome {
    pub start: LatticePoint,
    pub cyclic: bool,
    pub generated_dim: usize,
}

/// Closure data: the weights of the inner box, `t^{±e_i}` moves between them,
/// and the `T'(e_i, b)` matrices at each weight.
struct Closure {
    points: Vec<LatticePoint>,
    moves: Vec<Vec<(usize, CycNumber)>>,
    local: Vec<Vec<Matrix>>,
    dim: usize,
}

impl Closure {
    fn build(ms: &ModuleSpec, inner: &[i64], work: &[i64]) -> Result<Closure> {
        let d = ms.rank();
        let points = box_points(inner);
        let index = |p: &LatticePoint| points.binary_search(p).ok();
        let basis = &ms.spec().radical().basis;
        let mut moves = Vec::with_capacity(points.len());
        let mut local = Vec::with_capacity(points.len());
        for n in &points {
            let mut mv = Vec::new();
            for i in 0..d {
                for sign in [1, -1] {
                    let e = LatticePoint::unit(d, i).scale(sign);
                    if let Some(j) = index(&(n + &e)) {
                        mv.push((j, ms.torus_coeff(&e, n).clone()));
                    }
                }
            }
            moves.push(mv);
            let mut mats = Vec::new();
            for b in basis {
                for i in 0..d {
                    let m = ms.tprime_matrix(&unit_vec(d, i), b, n, work)?;
                    if !m.is_zero() {
                        mats.push(m);
                    }
                }
            }
            local.push(mats);
        }
        Ok(Closure { points, moves, local, dim: ms.dim() })
    }

    /// Dimension of the submodule generated by `v` at point index `start`,
    /// restricted to the inner box.
    fn generate(&self, start: usize, v: Vec<CycNumber>) -> usize {
        let np = self.points.len();
        let mut spans: Vec<SpanBasis> = (0..np).map(|_| SpanBasis::new(self.dim)).collect();
        let mut pending: Vec<Vec<Vec<CycNumber>>> = vec![Vec::new(); np];
        let mut queue = VecDeque::new();
        let mut full = 0;
        let mut insert = |spans: &mut Vec<SpanBasis>, q: usize, v: Vec<CycNumber>| {
            let row = spans[q].insert(v);
            if row.is_some() && spans[q].is_full() {
                full += 1;
            }
            (row, full == np)
        };
        if let (Some(row), _) = insert(&mut spans, start, v) {
            pending[start].push(row);
            queue.push_back(start);
        }
        while let Some(p) = queue.pop_front() {
            // saturate under the degree-zero operators first
            let mut done = Vec::new();
            while let Some(v) = pending[p].pop() {
                for m in &self.local[p] {
                    if spans[p].is_full() {
                        break;
                    }
                    let (row, all) = insert(&mut spans, p, m.apply(&v));
                    if all {
                        return np * self.dim;
                    }
                    if let Some(row) = row {
                        pending[p].push(row);
                    }
                }
                done.push(v);
            }
            for (q, c) in &self.moves[p] {
                let mut added = false;
                for v in &done {
                    if spans[*q].is_full() {
                        break;
                    }
                    let (row, all) = insert(&mut spans, *q, v.iter().map(|x| x * c).collect());
                    if all {
                        return np * self.dim;
                    }
                    if let Some(row) = row {
                        pending[*q].push(row);
                        added = true;
                    }
                }
                if added {
                    queue.push_back(*q);
                }
            }
        }
        spans.iter().map(SpanBasis::len).sum()
    }
}

/// For every basis vector of every weight space in the inner box, and for
/// `random_starts` seeded random vectors, computes the submodule it generates
/// under `t^{±e_i}` and `T'(e_i, b)` (`b` over a basis of `rad(f)`) and checks
/// it fills the inner box.
///
/// `T'(e_i, b)` passes through weight `n + b`, so the working box is widened
/// to `inner + |b|` where `radius` is too small.
pub fn irreducibility_evidence(
    ms: &ModuleSpec,
    radius: &[i64],
    inner: &[i64],
    random_starts: usize,
    ctx: &CheckContext,
) -> Result<(Report, Vec<CyclicOutcome>)> {
    use rand::Rng;
    if inner.len() != ms.rank() || inner.iter().zip(radius).any(|(i, r)| i >= r) {
        return Err(Error::InvalidModule("inner box must lie strictly inside the box".into()));
    }
    let reach = ms.spec().radical().basis.iter().map(LatticePoint::norm_inf).max().unwrap_or(0);
    let work: Vec<i64> = radius.iter().zip(inner).map(|(r, i)| (*r).max(i + reach)).collect();
    let closure = Closure::build(ms, inner, &work)?;
    let dim = ms.dim();
    let total = closure.points.len() * dim;
    let mut outcomes = Vec::new();
    for p in 0..closure.points.len() {
        for i in 0..dim {
            let got = closure.generate(p, one_hot(dim, i));
            outcomes.push(CyclicOutcome { start: closure.points[p].clone(), cyclic: got == total, generated_dim: got });
        }
    }
    let mut rng = ctx.rng("irreducibility");
    for _ in 0..random_starts {
        let p = rng.gen_range(0..closure.points.len());
        let mut v: Vec<CycNumber> = (0..dim).map(|_| CycNumber::from_integer(rng.gen_range(-3..=3))).collect();
        if v.iter().all(CycNumber::is_zero) {
            v[0] = CycNumber::one();
        }
        let got = closure.generate(p, v);
        outcomes.push(CyclicOutcome { start: closure.points[p].clone(), cyclic: got == total, generated_dim: got });
    }
    let mut tally = Tally::new();
    tally.cases = outcomes.len();
    for o in &outcomes {
        if o.cyclic {
            tally.record(None, String::new);
        } else {
            tally.record_failure(format!("start at {} generates dimension {} of {total}", o.start, o.generated_dim));
        }
    }
    tally.note("cyclic_starts", outcomes.iter().filter(|o| o.cyclic).count());
    tally.note("total_starts", outcomes.len());
    tally.note("inner_dimension", total);
    tally.note("working_box", work.clone());
    tally.note("module", ms.module().label());
    Ok((tally.finish("irreducibility", ctx, random_starts), outcomes))
}

/// A found intertwiner `v(n) ↦ c(n) w(n + α - β)` onto the untwisted module `F^β`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistMatch {
    pub beta: Vec<CycNumber>,
    pub shift: LatticePoint,
    pub character: TwistCharacter,
}

/// `β = α - γ` for `γ` in `[-reach, reach]^d`, nearest first, starting with `β = α`.
pub fn default_beta_candidates(alpha: &[CycNumber], reach: i64) -> Vec<Vec<CycNumber>> {
    let mut gammas = box_points(&vec![reach; alpha.len()]);
    gammas.sort_by_key(|g| (g.coords().iter().map(|x| x.abs()).sum::<i64>(), g.clone()));
    gammas
        .iter()
        .map(|g| alpha.iter().zip(g.coords()).map(|(a, x)| a - &CycNumber::from_integer(*x)).collect())
        .collect()
}

fn integral_shift(alpha: &[CycNumber], beta: &[CycNumber]) -> Option<LatticePoint> {
    let mut out = Vec::with_capacity(alpha.len());
    for (a, b) in alpha.iter().zip(beta) {
        out.push((a - b).to_integer()?);
    }
    Some(LatticePoint::new(out))
}

/// Searches `β` over `candidates` and characters `c(n) = ζ_N^{⟨k,n⟩}` for an
/// intertwiner `v(n) ↦ c(n) w(n + α - β)` from `ms` onto `F^β(V)`, checked
/// exactly on the box for every generator of [`intertwining_generators`].
///
/// Candidates with `α - β ∉ Z^d` are skipped, as weights could not match.
/// `None` means nothing in the searched set works, not that no isomorphism exists.
pub fn search_twist_equivalence(
    ms: &ModuleSpec,
    candidates: &[Vec<CycNumber>],
    radius: &[i64],
) -> Result<Option<TwistMatch>> {
    let sp = ms.spec();
    let d = ms.rank();
    let n = sp.order();
    let gens = intertwining_generators(ms);
    let dim = ms.dim();
    let chars = character_exponents(d, n.get() as i64);
    let roots: Vec<CycNumber> = (0..n.get() as i64).map(|e| CycNumber::root_of_unity(n, e)).collect();
    for beta in candidates {
        if beta.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: beta.len() });
        }
        let Some(gamma) = integral_shift(ms.alpha(), beta) else { continue };
        let target = ModuleSpec::untwisted(sp.clone(), ms.module().clone(), beta.clone())?;
        let tradius: Vec<i64> = radius.iter().zip(gamma.coords()).map(|(r, g)| r + g.abs()).collect();
        let alive = surviving_characters(ms, &target, &gens, radius, &tradius, &gamma, dim, &chars, &roots)?;
        if let Some(k) = alive.first() {
            let character = TwistCharacter::of_lattice(n, k.to_vec()).reduced();
            return Ok(Some(TwistMatch { beta: beta.clone(), shift: gamma, character }));
        }
    }
    Ok(None)
}

fn character_exponents(d: usize, n: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// With `Φ(v(n)) = c(n) w(n + γ)` and `c` a character, `Φ x = x Φ` on `v(n)`
/// reads `c(p - n) (x v(n))(p) = (x w(n + γ))(p + γ)` for every weight `p`.
/// Filters the characters through these constraints, nearest weights first,
/// and returns those that satisfy all of them.
#[allow(clippy::too_many_arguments)]
fn surviving_characters<'a>(
    src: &ModuleSpec,
    dst: &ModuleSpec,
    gens: &[GElement],
    radius: &[i64],
    tradius: &[i64],
    gamma: &LatticePoint,
    dim: usize,
    chars: &'a [Vec<i64>],
    roots: &[CycNumber],
) -> Result<Vec<&'a [i64]>> {
    let order = roots.len() as i64;
    let mut alive: Vec<&[i64]> = chars.iter().map(Vec::as_slice).collect();
    let mut points = box_points(radius);
    points.sort_by_key(|p| (p.norm_inf(), p.clone()));
    let zero = vec![CycNumber::zero(); dim];
    for n in &points {
        for x in gens {
            for i in 0..dim {
                let img = src.act(x, &BoxVector::basis(radius, n, i, dim)?)?;
                if img.truncated() {
                    continue;
                }
                let rhs = dst.act(x, &BoxVector::basis(tradius, &(n + gamma), i, dim)?)?;
                let mut constraints: Vec<(LatticePoint, &[CycNumber], &[CycNumber])> = Vec::new();
                for (p, v) in img.entries() {
                    let w = rhs.get(&(p + gamma)).map_or(zero.as_slice(), Vec::as_slice);
                    constraints.push((p - n, v, w));
                }
                for (q, w) in rhs.entries() {
                    if img.get(&(q - gamma)).is_none() {
                        constraints.push((&(q - gamma) - n, &zero, w));
                    }
                }
                alive.retain(|k| {
                    constraints.iter().all(|(delta, a, b)| {
                        let e: i64 = k.iter().zip(delta.coords()).map(|(x, y)| x * y).sum();
                        let c = &roots[e.rem_euclid(order) as usize];
                        a.iter().zip(b.iter()).all(|(x, y)| &(x * c) == y)
                    })
                });
                if alive.is_empty() {
                    return Ok(alive);
                }
            }
        }
    }
    Ok(alive)
}

/// Builds `F_g^{β+γ}(V)` with `g = f(·, γ)`, which is isomorphic to `F^β(V)`.
pub fn twisted_from_shift(base: &ModuleSpec, gamma: &LatticePoint) -> Result<ModuleSpec> {
    let g = TwistCharacter::from_shift(base.spec(), gamma);
    let alpha: Vec<CycNumber> = base
        .alpha()
        .iter()
        .zip(gamma.coords())
        .map(|(a, x)| a + &CycNumber::from_integer(*x))
        .collect();
    ModuleSpec::new(base.spec().clone(), base.module().clone(), alpha, g, Flavor::Fg)
}
