//! Seeded verification suites over one instance.
//!
//! Every suite draws its randomness from per-check streams of the
//! [`CheckContext`], so the reports are a pure function of the configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cyclotomic::CycNumber;
use crate::der::{unit_vec, DerElement};
use crate::error::{Error, Result};
use crate::fmodule::checks::*;
use crate::fmodule::{box_points, CheckContext, Flavor, ModuleSpec, Report, Tally, TwistCharacter};
use crate::glmod::GlModule;
use crate::linalg::Matrix;
use crate::qtorus::TorusElement;
use crate::semidirect::{decompose, embed_c1, embed_c2, in_c1, phi_from_laurent, recompose, GElement};
use crate::torus::{LatticePoint, TorusSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Cocycle,
    Algebra,
    Radical,
    Derivation,
    Semidirect,
    Gl,
    Module,
    Section3,
    Section4,
    Irreducibility,
    Twist,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Cocycle,
        Suite::Algebra,
        Suite::Radical,
        Suite::Derivation,
        Suite::Semidirect,
        Suite::Gl,
        Suite::Module,
        Suite::Section3,
        Suite::Section4,
        Suite::Irreducibility,
        Suite::Twist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Algebra => "algebra",
            Suite::Radical => "radical",
            Suite::Derivation => "derivation",
            Suite::Semidirect => "semidirect",
            Suite::Gl => "gl",
            Suite::Module => "module",
            Suite::Section3 => "section3",
            Suite::Section4 => "section4",
            Suite::Irreducibility => "irreducibility",
            Suite::Twist => "twist",
        }
    }

    /// Parses a comma-separated selector. `lie` expands to the derivation and
    /// semidirect suites, `all` to every suite. Empty selectors are rejected.
    pub fn parse_list(sel: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in sel.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "all" => out.extend(Suite::ALL),
                "lie" => out.extend([Suite::Derivation, Suite::Semidirect]),
                p => out.push(p.parse()?),
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("empty suite selector".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

/// The instance a suite runs against.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub module: ModuleSpec,
    pub radius: Vec<i64>,
    pub ctx: CheckContext,
}

impl SuiteConfig {
    pub fn new(module: ModuleSpec, radius: Vec<i64>, ctx: CheckContext) -> Result<Self> {
        if radius.len() != module.rank() {
            return Err(Error::DimensionMismatch { expected: module.rank(), got: radius.len() });
        }
        if radius.iter().any(|&r| r < 2) {
            return Err(Error::InvalidModule("box radius must be at least 2".into()));
        }
        Ok(SuiteConfig { module, radius, ctx })
    }

    fn spec(&self) -> &Arc<TorusSpec> {
        self.module.spec()
    }

    fn samples(&self) -> usize {
        self.ctx.samples.max(1)
    }

    fn sampler(&self, check: &str) -> Sampler {
        Sampler { rng: self.ctx.rng(check), spec: self.spec().clone() }
    }
}

/// Runs the suites in order; report names are `suite/check`, sorted.
pub fn run_suites(cfg: &SuiteConfig, suites: &[Suite]) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for &s in suites {
        log::info!("running suite {s} on instance {}", cfg.ctx.instance);
        out.extend(run_suite(cfg, s)?);
    }
    out.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(out)
}

pub fn run_suite(cfg: &SuiteConfig, suite: Suite) -> Result<Vec<Report>> {
    let reports = match suite {
        Suite::Cocycle => cocycle_suite(cfg),
        Suite::Algebra => algebra_suite(cfg)?,
        Suite::Radical => radical_suite(cfg),
        Suite::Derivation => derivation_suite(cfg)?,
        Suite::Semidirect => semidirect_suite(cfg)?,
        Suite::Gl => gl_suite(cfg)?,
        Suite::Module => module_suite(cfg)?,
        Suite::Section3 => section3_suite(cfg)?,
        Suite::Section4 => section4_suite(cfg)?,
        Suite::Irreducibility => irreducibility_suite(cfg)?,
        Suite::Twist => twist_suite(cfg)?,
    };
    Ok(reports
        .into_iter()
        .map(|mut r| {
            r.check = format!("{suite}/{}", r.check);
            r
        })
        .collect())
}

/// Random draws shared by the suites.
pub struct Sampler {
    rng: ChaCha8Rng,
    spec: Arc<TorusSpec>,
}

impl Sampler {
    pub fn new(rng: ChaCha8Rng, spec: Arc<TorusSpec>) -> Self {
        Sampler { rng, spec }
    }

    fn d(&self) -> usize {
        self.spec.rank()
    }

    pub fn point(&mut self, k: i64) -> LatticePoint {
        let d = self.d();
        LatticePoint::new((0..d).map(|_| self.rng.gen_range(-k..=k)).collect::<Vec<_>>())
    }

    pub fn nonzero_point(&mut self, k: i64) -> LatticePoint {
        loop {
            let p = self.point(k);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A point outside the radical; falls back to any point when the radical is everything.
    pub fn nonradical_point(&mut self, k: i64) -> LatticePoint {
        for _ in 0..64 {
            let p = self.point(k);
            if !self.spec.in_radical(&p) {
                return p;
            }
        }
        self.point(k)
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items[self.rng.gen_range(0..items.len())].clone()
    }

    /// A small integer times a random `N`-th root of unity.
    pub fn scalar(&mut self) -> CycNumber {
        let c = self.rng.gen_range(1..=3) * if self.rng.gen_bool(0.5) { 1 } else { -1 };
        let n = self.spec.order();
        CycNumber::root_of_unity(n, self.rng.gen_range(0..n.get() as i64)) * CycNumber::from_integer(c)
    }

    /// A nonzero vector of small integers, with an occasional half.
    pub fn u(&mut self) -> Vec<CycNumber> {
        let d = self.d();
        loop {
            let den = if self.rng.gen_bool(0.25) { 2 } else { 1 };
            let u: Vec<CycNumber> = (0..d)
                .map(|_| format!("{}/{den}", self.rng.gen_range(-3..=3)).parse().expect("rational literal"))
                .collect();
            if u.iter().any(|x| !x.is_zero()) {
                return u;
            }
        }
    }

    pub fn torus_element(&mut self, terms: usize, k: i64) -> TorusElement {
        let spec = self.spec.clone();
        let n = self.rng.gen_range(1..=terms);
        let t: Vec<(LatticePoint, CycNumber)> = (0..n).map(|_| (self.point(k), self.scalar())).collect();
        TorusElement::from_terms(&spec, t)
    }

    /// Sum of `ad t^s` and `D(u, r)` terms with `r` drawn from `radical`.
    pub fn der_element(&mut self, terms: usize, k: i64, radical: &[LatticePoint]) -> DerElement {
        let spec = self.spec.clone();
        let n = self.rng.gen_range(1..=terms);
        let mut out = DerElement::zero(&spec);
        for _ in 0..n {
            let part = if self.rng.gen_bool(0.5) {
                DerElement::ad_term(&spec, self.nonradical_point(k), self.scalar())
            } else {
                let r = self.pick(radical);
                DerElement::witt(&spec, self.u(), r).expect("radical degree")
            };
            out = out.add(&part).expect("same spec");
        }
        out
    }

    pub fn g_element(&mut self, terms: usize, k: i64, radical: &[LatticePoint]) -> GElement {
        GElement { der: self.der_element(terms, k, radical), torus: self.torus_element(terms, k) }
    }

    /// A homogeneous element of degree `deg`: `c ad t^s + c' t^s`, plus `D(u, s)`
    /// when `s` is radical.
    pub fn homogeneous(&mut self, deg: &LatticePoint) -> GElement {
        let spec = self.spec.clone();
        let mut der = DerElement::ad_term(&spec, deg.clone(), self.scalar());
        if spec.in_radical(deg) {
            der = DerElement::witt(&spec, self.u(), deg.clone()).expect("radical degree");
        }
        let torus = if self.rng.gen_bool(0.5) {
            TorusElement::term(&spec, deg.clone(), self.scalar())
        } else {
            TorusElement::zero(&spec)
        };
        GElement { der, torus }
    }
}

/// Radical points within `[-k, k]^d`, zero included.
pub fn radical_points(spec: &TorusSpec, k: i64) -> Vec<LatticePoint> {
    box_points(&vec![k; spec.rank()]).into_iter().filter(|p| spec.in_radical(p)).collect()
}

fn torus_defect(x: &TorusElement) -> Option<CycNumber> {
    x.terms().next().map(|(_, c)| c.clone())
}

fn der_defect(x: &DerElement) -> Option<CycNumber> {
    x.inner_terms()
        .next()
        .map(|(_, c)| c.clone())
        .or_else(|| x.witt_terms().flat_map(|(_, u)| u.iter()).find(|c| !c.is_zero()).cloned())
}

fn g_defect(x: &GElement) -> Option<CycNumber> {
    der_defect(&x.der).or_else(|| torus_defect(&x.torus))
}

/// One report built from several, failing if any part fails or none ran.
fn combine(check: &str, ctx: &CheckContext, parts: Vec<Report>) -> Report {
    let pass = !parts.is_empty() && parts.iter().all(|r| r.pass);
    let defect = parts.iter().find(|r| !r.defect.is_zero()).map_or_else(CycNumber::zero, |r| r.defect.clone());
    let summary: Vec<Value> = parts
        .iter()
        .map(|r| json!({ "check": r.check, "pass": r.pass, "details": r.details }))
        .collect();
    let mut details = BTreeMap::new();
    details.insert("parts".to_string(), Value::from(summary));
    let mut rep = Report {
        check: check.to_string(),
        instance: ctx.instance.clone(),
        seed: ctx.seed,
        samples: parts.len(),
        defect,
        pass,
        details,
    };
    if parts.is_empty() {
        rep = rep.fail("no parts were run");
    }
    rep
}

fn cocycle_suite(cfg: &SuiteConfig) -> Vec<Report> {
    let sp = cfg.spec();
    let n = cfg.samples();
    let (ctx, k) = (&cfg.ctx, 6);

    let mut s = cfg.sampler("sigma_bicharacter");
    let mut bichar = Tally::new();
    for _ in 0..n {
        let (a, b, c) = (s.point(k), s.point(k), s.point(k));
        bichar.cases += 1;
        bichar.record_value(&(sp.sigma(&(&a + &b), &c) - sp.sigma(&a, &c) * sp.sigma(&b, &c)), || format!("left: {a}, {b}, {c}"));
        bichar.record_value(&(sp.sigma(&a, &(&b + &c)) - sp.sigma(&a, &b) * sp.sigma(&a, &c)), || format!("right: {a}, {b}, {c}"));
    }

    let mut s = cfg.sampler("f_multiplicative");
    let mut mult = Tally::new();
    for _ in 0..n {
        let (a, b, c) = (s.point(k), s.point(k), s.point(k));
        mult.cases += 1;
        mult.record_value(&(sp.f_val(&(&a + &b), &c) - sp.f_val(&a, &c) * sp.f_val(&b, &c)), || format!("left: {a}, {b}, {c}"));
        mult.record_value(&(sp.f_val(&a, &(&b + &c)) - sp.f_val(&a, &b) * sp.f_val(&a, &c)), || format!("right: {a}, {b}, {c}"));
        mult.record_value(&(sp.f_val(&a, &b) * sp.f_val(&b, &a) - CycNumber::one()), || format!("skew: {a}, {b}"));
        // f is the commutator of σ
        mult.record_value(&(sp.f_val(&a, &b) * sp.sigma(&b, &a) - sp.sigma(&a, &b)), || format!("sigma ratio: {a}, {b}"));
    }

    let mut s = cfg.sampler("f_diagonal");
    let mut diag = Tally::new();
    for _ in 0..n {
        let a = s.point(k);
        diag.cases += 1;
        diag.record_value(&(sp.f_val(&a, &a) - CycNumber::one()), || format!("f(n, n) at {a}"));
        diag.record_value(&(sp.f_val(&a, &-&a) - CycNumber::one()), || format!("f(n, -n) at {a}"));
    }

    vec![
        bichar.finish("sigma_bicharacter", ctx, n),
        mult.finish("f_multiplicative", ctx, n),
        diag.finish("f_diagonal", ctx, n),
    ]
}

fn algebra_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let sp = cfg.spec();
    let n = cfg.samples();
    let ctx = &cfg.ctx;

    let mut s = cfg.sampler("associativity");
    let mut assoc = Tally::new();
    for i in 0..n {
        let (a, b, c) = if i % 2 == 0 {
            (s.torus_element(1, 4), s.torus_element(1, 4), s.torus_element(1, 4))
        } else {
            (s.torus_element(3, 3), s.torus_element(3, 3), s.torus_element(3, 3))
        };
        assoc.cases += 1;
        let diff = a.tmul(&b)?.tmul(&c)?.sub(&a.tmul(&b.tmul(&c)?)?)?;
        assoc.record(torus_defect(&diff).as_ref(), || format!("sample {i}"));
    }

    let mut s = cfg.sampler("q_commutation");
    let mut qcomm = Tally::new();
    for _ in 0..n {
        let (a, b) = (s.point(4), s.point(4));
        let (ta, tb) = (TorusElement::monomial(sp, a.clone()), TorusElement::monomial(sp, b.clone()));
        qcomm.cases += 1;
        let diff = ta.tmul(&tb)?.sub(&tb.tmul(&ta)?.scale(&sp.f_val(&a, &b)))?;
        qcomm.record(torus_defect(&diff).as_ref(), || format!("n = {a}, m = {b}"));
    }

    let mut s = cfg.sampler("commutator_jacobi");
    let mut jac = Tally::new();
    for i in 0..n {
        let (a, b, c) = (s.torus_element(2, 3), s.torus_element(2, 3), s.torus_element(2, 3));
        jac.cases += 1;
        let j = a
            .tcomm(&b.tcomm(&c)?)?
            .add(&b.tcomm(&c.tcomm(&a)?)?)?
            .add(&c.tcomm(&a.tcomm(&b)?)?)?;
        jac.record(torus_defect(&j).as_ref(), || format!("jacobi, sample {i}"));
        let anti = a.tcomm(&b)?.add(&b.tcomm(&a)?)?;
        jac.record(torus_defect(&anti).as_ref(), || format!("antisymmetry, sample {i}"));
    }

    let mut s = cfg.sampler("centrality");
    let mut central = Tally::new();
    for _ in 0..n {
        let p = s.point(4);
        let x = TorusElement::monomial(sp, p.clone());
        central.cases += 1;
        let (a, b, c) = (x.is_central(), sp.in_radical(&p), x.commutes_with_generators());
        if a == b && b == c {
            central.record(None, String::new);
        } else {
            central.record_failure(format!("t^{p}: is_central {a}, radical {b}, commutes {c}"));
        }
    }

    Ok(vec![
        assoc.finish("associativity", ctx, n),
        qcomm.finish("q_commutation", ctx, n),
        jac.finish("commutator_jacobi", ctx, n),
        central.finish("centrality", ctx, n),
    ])
}

/// Brute-force radical data from the matrix alone, over `[0, N)^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedRadical {
    pub members: Vec<LatticePoint>,
    pub axis_orders: Vec<i64>,
    pub index: i64,
    pub diagonal: bool,
}

pub fn enumerate_radical(spec: &TorusSpec) -> EnumeratedRadical {
    let d = spec.rank();
    let nn = spec.order().get() as i64;
    let a = spec.exponents();
    let member = |p: &[i64]| (0..d).all(|j| (0..d).map(|i| p[i] * a[i][j]).sum::<i64>().rem_euclid(nn) == 0);
    let members: Vec<LatticePoint> = box_points(&vec![nn; d])
        .into_iter()
        .filter(|p| p.coords().iter().all(|&x| (0..nn).contains(&x)) && member(p.coords()))
        .collect();
    let axis_orders: Vec<i64> = (0..d)
        .map(|i| {
            (1..=nn)
                .find(|&m| member(LatticePoint::unit(d, i).scale(m).coords()))
                .expect("N e_i is always radical")
        })
        .collect();
    let index = nn.pow(d as u32) / members.len() as i64;
    let diagonal = axis_orders.iter().product::<i64>() == index;
    EnumeratedRadical { members, axis_orders, index, diagonal }
}

fn radical_suite(cfg: &SuiteConfig) -> Vec<Report> {
    let sp = cfg.spec();
    let rad = sp.radical();
    let brute = enumerate_radical(sp);
    let nn = sp.order().get() as i64;
    let mut tally = Tally::new();
    let d = sp.rank();
    for p in box_points(&vec![nn; d]).into_iter().filter(|p| p.coords().iter().all(|&x| (0..nn).contains(&x))) {
        tally.cases += 1;
        let expect = brute.members.contains(&p);
        let (a, b) = (sp.in_radical(&p), rad.contains(&p));
        if a == expect && b == expect {
            tally.record(None, String::new);
        } else {
            tally.record_failure(format!("{p}: enumerated {expect}, in_radical {a}, basis {b}"));
        }
    }
    if rad.axis_orders != brute.axis_orders {
        tally.record_failure(format!("axis orders {:?} vs enumerated {:?}", rad.axis_orders, brute.axis_orders));
    }
    if rad.index != brute.index {
        tally.record_failure(format!("index {} vs enumerated {}", rad.index, brute.index));
    }
    if rad.is_diagonal() != brute.diagonal {
        tally.record_failure(format!("diagonal {} vs enumerated {}", rad.is_diagonal(), brute.diagonal));
    }
    tally.note("basis", rad.basis.iter().map(|b| Value::from(b.coords().to_vec())).collect::<Vec<_>>());
    tally.note("axis_orders", brute.axis_orders.clone());
    tally.note("diagonal_orders", rad.diagonal_orders.clone().map_or(Value::Null, Value::from));
    tally.note("index", brute.index);
    vec![tally.finish("brute_force", &cfg.ctx, brute.members.len())]
}

fn derivation_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let sp = cfg.spec();
    let n = cfg.samples();
    let ctx = &cfg.ctx;
    let rad = radical_points(sp, 4);

    let mut s = cfg.sampler("leibniz");
    let mut leib = Tally::new();
    let mut families = [0usize; 2];
    for i in 0..n {
        let der = if i % 2 == 0 {
            families[0] += 1;
            DerElement::ad_term(sp, s.nonradical_point(3), s.scalar())
        } else {
            families[1] += 1;
            DerElement::witt(sp, s.u(), s.pick(&rad))?
        };
        let (a, b) = (s.torus_element(2, 3), s.torus_element(2, 3));
        leib.cases += 1;
        let lhs = der.dact(&a.tmul(&b)?)?;
        let rhs = der.dact(&a)?.tmul(&b)?.add(&a.tmul(&der.dact(&b)?)?)?;
        leib.record(torus_defect(&lhs.sub(&rhs)?).as_ref(), || format!("sample {i}"));
    }
    leib.note("inner_generators", families[0]);
    leib.note("witt_generators", families[1]);

    let mut s = cfg.sampler("dbracket_jacobi");
    let mut jac = Tally::new();
    for i in 0..n {
        let (x, y, z) = (s.der_element(2, 3, &rad), s.der_element(2, 3, &rad), s.der_element(2, 3, &rad));
        jac.cases += 1;
        let j = x
            .dbracket(&y.dbracket(&z)?)?
            .add(&y.dbracket(&z.dbracket(&x)?)?)?
            .add(&z.dbracket(&x.dbracket(&y)?)?)?;
        jac.record(der_defect(&j).as_ref(), || format!("jacobi, sample {i}"));
        jac.record(der_defect(&x.dbracket(&y)?.add(&y.dbracket(&x)?)?).as_ref(), || format!("antisymmetry, sample {i}"));
    }

    let mut s = cfg.sampler("dbracket_action");
    let mut act = Tally::new();
    for i in 0..n {
        let (x, y, a) = (s.der_element(2, 3, &rad), s.der_element(2, 3, &rad), s.torus_element(2, 3));
        act.cases += 1;
        let lhs = x.dbracket(&y)?.dact(&a)?;
        let rhs = x.dact(&y.dact(&a)?)?.sub(&y.dact(&x.dact(&a)?)?)?;
        act.record(torus_defect(&lhs.sub(&rhs)?).as_ref(), || format!("sample {i}"));
    }

    let mut s = cfg.sampler("dact_tcomm");
    let mut inner = Tally::new();
    for i in 0..n {
        let (p, c, a) = (s.point(3), s.scalar(), s.torus_element(3, 3));
        inner.cases += 1;
        let lhs = DerElement::ad_term(sp, p.clone(), c.clone()).dact(&a)?;
        let rhs = TorusElement::term(sp, p, c).tcomm(&a)?;
        inner.record(torus_defect(&lhs.sub(&rhs)?).as_ref(), || format!("sample {i}"));
    }

    Ok(vec![
        leib.finish("leibniz", ctx, n),
        jac.finish("dbracket_jacobi", ctx, n),
        act.finish("dbracket_action", ctx, n),
        inner.finish("dact_tcomm", ctx, n),
    ])
}

fn semidirect_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let sp = cfg.spec();
    let n = cfg.samples();
    let ctx = &cfg.ctx;
    let d = sp.rank();
    let rad = radical_points(sp, 4);
    let mut out = Vec::new();

    let mut s = cfg.sampler("gbracket_jacobi");
    let mut jac = Tally::new();
    for i in 0..n {
        let (x, y, z) = (s.g_element(2, 3, &rad), s.g_element(2, 3, &rad), s.g_element(2, 3, &rad));
        jac.cases += 1;
        let j = x
            .gbracket(&y.gbracket(&z)?)?
            .add(&y.gbracket(&z.gbracket(&x)?)?)?
            .add(&z.gbracket(&x.gbracket(&y)?)?)?;
        jac.record(g_defect(&j).as_ref(), || format!("jacobi, sample {i}"));
        jac.record(g_defect(&x.gbracket(&y)?.add(&y.gbracket(&x)?)?).as_ref(), || format!("antisymmetry, sample {i}"));
    }
    out.push(jac.finish("gbracket_jacobi", ctx, n));

    let mut comm = Tally::new();
    let pts = box_points(&vec![3; d]);
    let c1: Vec<GElement> = pts.iter().map(|m| embed_c1(sp, m.clone())).collect();
    let c2: Vec<GElement> = pts.iter().map(|m| embed_c2(sp, m.clone())).collect();
    for (m, x) in pts.iter().zip(&c1) {
        comm.cases += 1;
        for (k, y) in pts.iter().zip(&c2) {
            comm.record(g_defect(&x.gbracket(y)?).as_ref(), || format!("m = {m}, n = {k}"));
        }
    }
    out.push(comm.finish("c1_c2_commute", ctx, pts.len() * pts.len()));

    let mut s = cfg.sampler("decomposition");
    let mut dec = Tally::new();
    for i in 0..n {
        let x = s.g_element(3, 3, &rad);
        dec.cases += 1;
        let back = recompose(sp, &decompose(&x))?;
        dec.record(g_defect(&back.sub(&x)?).as_ref(), || format!("round trip, sample {i}"));
    }
    for p in &pts {
        if in_c1(&embed_c2(sp, p.clone())) == sp.in_radical(p) {
            dec.record(None, String::new);
        } else {
            dec.record_failure(format!("C1 membership of the C2 generator at {p}"));
        }
    }
    out.push(dec.finish("decomposition", ctx, n));

    // φ is only defined when the radical is diagonal
    if sp.radical().is_diagonal() {
        let laurent = Arc::new(TorusSpec::trivial(d));
        let all = box_points(&vec![2; d]);
        let mut s = Sampler::new(ctx.rng("phi_homomorphism"), laurent.clone());
        let pairs = n.div_ceil(2);
        let mut hom = Tally::new();
        for i in 0..pairs {
            let x = s.g_element(2, 2, &all);
            let y = s.g_element(2, 2, &all);
            hom.cases += 1;
            let lhs = phi_from_laurent(sp, &x.gbracket(&y)?)?;
            let rhs = phi_from_laurent(sp, &x)?.gbracket(&phi_from_laurent(sp, &y)?)?;
            hom.record(g_defect(&lhs.sub(&rhs)?).as_ref(), || format!("pair {i}"));
        }
        out.push(hom.finish("phi_homomorphism", ctx, pairs));
    }
    Ok(out)
}

/// Modules of rank `d` covered by the gl suite, with whether each is irreducible.
pub fn gl_fixtures(d: usize) -> Vec<(String, bool)> {
    let mut v = vec![
        ("natural", true),
        ("trivial", true),
        ("dual", true),
        ("sym:2", true),
        ("sym:3", true),
        ("sym:2:dual", true),
        ("twist:1/2:natural", true),
        ("natural+natural", false),
        ("natural+trivial", false),
    ];
    if d >= 2 {
        v.push(("ext:2", true));
    }
    if d >= 3 {
        v.push(("ext:3", true));
        v.push(("ext:2:dual", true));
    }
    v.into_iter().map(|(s, b)| (s.to_string(), b)).collect()
}

/// Dimension of `{X : X E_ij = E_ij X}`.
pub fn commutant_dimension(v: &GlModule) -> usize {
    let n = v.dim();
    let d = v.rank();
    // unknowns X[a][b] at column a * n + b
    let mut rows = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let e = v.e(i, j);
            for a in 0..n {
                for b in 0..n {
                    // (X E - E X)[a][b] = Σ_c X[a][c] E[c][b] - E[a][c] X[c][b]
                    let mut row = vec![CycNumber::zero(); n * n];
                    for c in 0..n {
                        row[a * n + c] += e.get(c, b);
                        row[c * n + b] -= e.get(a, c);
                    }
                    rows.push(row);
                }
            }
        }
    }
    Matrix::from_rows(rows).nullspace().len()
}

/// Irreducibility oracle for small modules: trivial commutant, and every
/// nonzero vector with entries in `{-1, 0, 1}` generates the whole module.
pub fn brute_force_irreducible(v: &GlModule) -> bool {
    if commutant_dimension(v) != 1 {
        return false;
    }
    let n = v.dim();
    let mut w = vec![-1i64; n];
    loop {
        if w.iter().any(|&x| x != 0) {
            let vec: Vec<CycNumber> = w.iter().map(|&x| CycNumber::from_integer(x)).collect();
            if !v.cyclic_span(&vec).is_full() {
                return false;
            }
        }
        let mut k = 0;
        while k < n && w[k] == 1 {
            w[k] = -1;
            k += 1;
        }
        if k == n {
            return true;
        }
        w[k] += 1;
    }
}

fn gl_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let d = cfg.module.rank();
    let ctx = &cfg.ctx;
    let mut rel = Tally::new();
    let mut irr = Tally::new();
    let mut oracle_runs = 0usize;
    let mut modules = Vec::new();
    for (sel, expected) in gl_fixtures(d) {
        let v = GlModule::from_selector(d, &sel)?;
        rel.cases += 1;
        match v.relation_defect() {
            None => rel.record(None, String::new),
            Some((i, j, k, l)) => rel.record_failure(format!("{sel}: relation ({i},{j}),({k},{l})")),
        }
        irr.cases += 1;
        let got = v.check_irreducible();
        if got != expected {
            irr.record_failure(format!("{sel}: check_irreducible {got}, expected {expected}"));
        } else {
            irr.record(None, String::new);
        }
        if v.dim() <= 6 {
            oracle_runs += 1;
            let oracle = brute_force_irreducible(&v);
            if oracle != got {
                irr.record_failure(format!("{sel}: oracle {oracle}, check_irreducible {got}"));
            } else {
                irr.record(None, String::new);
            }
        }
        modules.push((sel, v));
    }
    irr.note("oracle_runs", oracle_runs);

    let n = cfg.samples();
    let mut s = cfg.sampler("matrix_of");
    let mut hom = Tally::new();
    for k in 0..n {
        let (sel, v) = &modules[k % modules.len()];
        let mut rand_matrix = || {
            let rows: Vec<Vec<CycNumber>> =
                (0..d).map(|_| (0..d).map(|_| CycNumber::from_integer(s.rng.gen_range(-2..=2))).collect()).collect();
            Matrix::from_rows(rows)
        };
        let (b, c) = (rand_matrix(), rand_matrix());
        hom.cases += 1;
        let diff = v.matrix_of(&b.commutator(&c)).sub(&v.matrix_of(&b).commutator(&v.matrix_of(&c)));
        hom.record_matrix(&diff, || format!("{sel}, sample {k}"));
    }
    Ok(vec![
        rel.finish("relations", ctx, modules.len()),
        irr.finish("irreducible", ctx, modules.len()),
        hom.finish("matrix_of", ctx, n),
    ])
}

fn sample_pairs(s: &mut Sampler, n: usize, k: i64) -> Vec<(LatticePoint, LatticePoint)> {
    (0..n).map(|_| (s.point(k), s.point(k))).collect()
}

fn module_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let ms = &cfg.module;
    let (r, ctx, n) = (&cfg.radius, &cfg.ctx, cfg.samples());

    let mut s = cfg.sampler("module_axiom");
    let pairs: Vec<(GElement, GElement)> = (0..n)
        .map(|_| {
            let (a, b) = (s.point(2), s.point(2));
            (s.homogeneous(&a), s.homogeneous(&b))
        })
        .collect();
    let axiom = module_axiom_check(ms, &pairs, r, ctx)?;

    let mut s = cfg.sampler("weight_grading");
    let us: Vec<Vec<CycNumber>> = (0..ms.rank()).map(|i| unit_vec(ms.rank(), i)).chain((0..n).map(|_| s.u())).collect();
    let grading = weight_grading_check(ms, &us, r, ctx)?;

    let mut s = cfg.sampler("l_relations");
    let l = l_relations_vanish(ms, &sample_pairs(&mut s, n, 2), r, ctx)?;

    let mut s = cfg.sampler("c2_product");
    let c2 = c2_operator_product_check(ms, &sample_pairs(&mut s, n, 2), r, ctx)?;
    Ok(vec![axiom, grading, l, c2])
}

fn section3_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let ms = &cfg.module;
    let (r, ctx, n) = (&cfg.radius, &cfg.ctx, cfg.samples());
    let d = ms.rank();
    let mut rad = small_radical_points(ms, r);
    rad.push(LatticePoint::zero(d));

    let mut s = cfg.sampler("neq");
    let neq = neq_check(ms, &sample_pairs(&mut s, n, 2), r, ctx)?;

    let mut s = cfg.sampler("thm1");
    let thm1 = thm1_check(ms, &sample_pairs(&mut s, n, 2), r, ctx)?;

    let mut s = cfg.sampler("pr4_ideal");
    let cases: Vec<_> = (0..n).map(|_| (s.u(), s.pick(&rad), s.point(2))).collect();
    let pr4 = pr4_ideal_check(ms, &cases, r, ctx)?;

    let mut s = cfg.sampler("prop0_bracket");
    let cases: Vec<Prop0Case> = (0..n).map(|_| (s.u(), s.pick(&rad), s.u(), s.pick(&rad))).collect();
    let prop0 = prop0_bracket_check(ms, &cases, r, ctx)?;

    let mut s = cfg.sampler("tprime");
    let cases: Vec<_> = (0..n).map(|_| (s.u(), s.pick(&rad))).collect();
    let tp = tprime_check(ms, &cases, r, ctx)?;

    let mut s = cfg.sampler("weight_shift");
    let shift = weight_shift_check(ms, &sample_pairs(&mut s, n, r.iter().copied().min().unwrap_or(0)), r, ctx)?;
    Ok(vec![neq, thm1, pr4, prop0, tp, shift])
}

/// Coordinate bound for the seeded shifts `γ`.
pub const SHIFT_REACH: i64 = 2;

/// Up to `count` distinct nontrivial characters `f(·, γ)` for seeded `γ`.
pub fn seeded_characters(spec: &TorusSpec, rng: &mut ChaCha8Rng, count: usize) -> Vec<(LatticePoint, TwistCharacter)> {
    let d = spec.rank();
    let mut out: Vec<(LatticePoint, TwistCharacter)> = Vec::new();
    for _ in 0..256 {
        if out.len() == count {
            break;
        }
        let gamma = LatticePoint::new((0..d).map(|_| rng.gen_range(-SHIFT_REACH..=SHIFT_REACH)).collect::<Vec<_>>());
        let g = TwistCharacter::from_shift(spec, &gamma);
        if !g.is_trivial() && out.iter().all(|(_, h)| *h != g) {
            out.push((gamma, g));
        }
    }
    out
}

fn section4_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let ms = &cfg.module;
    let sp = cfg.spec();
    let (r, ctx, n) = (&cfg.radius, &cfg.ctx, cfg.samples());
    let d = ms.rank();
    let inner: Vec<i64> = r.iter().map(|x| x - 1).collect();
    let base = ModuleSpec::untwisted(sp.clone(), ms.module().clone(), ms.alpha().to_vec())?;

    let mut s = cfg.sampler("lambda");
    let ss: Vec<LatticePoint> = (0..n).map(|_| s.nonzero_point(2)).collect();
    let (scalar, recursion) = lambda_checks(ms, &ss, r, ctx)?;

    let trivial = extract_g_check(&base, &TwistCharacter::trivial(d), &inner, "extract_g_trivial", ctx);

    let mut rng = ctx.rng("characters");
    let chars = seeded_characters(sp, &mut rng, 3);
    let mut roundtrip = Vec::new();
    let mut psi = Vec::new();
    let mut twisted_lambda = Vec::new();
    let few: Vec<LatticePoint> = ss.iter().take(8).cloned().collect();
    for (gamma, g) in &chars {
        let gg = base.with_twist(g.clone(), Flavor::Gg)?;
        let fg = base.with_twist(g.clone(), Flavor::Fg)?;
        roundtrip.push(extract_g_check(&gg, g, &inner, &format!("G_g with gamma {gamma}"), ctx));
        roundtrip.push(extract_g_check(&fg, &g.inverse(), &inner, &format!("F_g with gamma {gamma}"), ctx));
        psi.push(psi_check(&gg, r, ctx)?.detail("gamma", gamma.coords().to_vec()));
        for m in [&gg, &fg] {
            let (a, b) = lambda_checks(m, &few, r, ctx)?;
            twisted_lambda.push(a.detail("flavor", m.flavor().to_string()));
            twisted_lambda.push(b.detail("flavor", m.flavor().to_string()));
        }
    }
    let mut psi_rep = combine("psi", ctx, psi);
    if chars.len() < 3 {
        psi_rep = psi_rep.fail(format!("only {} nontrivial characters found", chars.len()));
    }
    Ok(vec![
        scalar,
        recursion,
        trivial,
        combine("extract_g_roundtrip", ctx, roundtrip),
        psi_rep,
        combine("lambda_twisted", ctx, twisted_lambda),
    ])
}

fn irreducibility_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let ms = &cfg.module;
    let (r, ctx) = (&cfg.radius, &cfg.ctx);
    let inner: Vec<i64> = r.iter().map(|x| x - 1).collect();
    let starts = cfg.samples().div_ceil(10);
    let (rep, _) = irreducibility_evidence(ms, r, &inner, starts, ctx)?;

    // distinguishing power: a reducible module must fail
    let sum = Arc::new(GlModule::from_selector(ms.rank(), "natural+natural")?);
    let fixture = ms.with_module(sum)?;
    let (frep, outcomes) = irreducibility_evidence(&fixture, r, &inner, starts, ctx)?;
    let mut tally = Tally::new();
    tally.cases = 1;
    let basis_starts = outcomes.len() - starts;
    let noncyclic = outcomes[..basis_starts].iter().filter(|o| !o.cyclic).count();
    if frep.pass {
        tally.record_failure("the reducible fixture passed the evidence check");
    } else {
        tally.record(None, String::new);
    }
    tally.note("noncyclic_basis_starts", noncyclic);
    tally.note("basis_starts", basis_starts);
    Ok(vec![rep, tally.finish("reducible_fixture", ctx, starts)])
}

fn twist_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let ms = &cfg.module;
    let sp = cfg.spec();
    let ctx = &cfg.ctx;
    let d = ms.rank();
    let r: Vec<i64> = cfg.radius.iter().map(|x| x - 1).collect();
    let base = ModuleSpec::untwisted(sp.clone(), ms.module().clone(), ms.alpha().to_vec())?;

    let mut ident = Tally::new();
    ident.cases = 1;
    match search_twist_equivalence(&base, &default_beta_candidates(base.alpha(), 1), &r)? {
        Some(m) if m.beta == base.alpha() && m.character.is_trivial() => ident.record(None, String::new),
        Some(m) => ident.record_failure(format!("found shift {} with character {}", m.shift, m.character)),
        None => ident.record_failure("no intertwiner found"),
    }

    let mut rng = ctx.rng("twist_roundtrip");
    let chars = seeded_characters(sp, &mut rng, 3);
    let mut round = Tally::new();
    for (gamma, g) in &chars {
        round.cases += 1;
        let src = twisted_from_shift(&base, gamma)?;
        match search_twist_equivalence(&src, &[base.alpha().to_vec()], &r)? {
            Some(m) if &m.shift == gamma => round.record(None, String::new),
            other => round.record_failure(format!("gamma {gamma}: exact candidate gave {other:?}")),
        }
        match search_twist_equivalence(&src, &default_beta_candidates(src.alpha(), SHIFT_REACH), &r)? {
            Some(m) => {
                let ok_char = TwistCharacter::from_shift(sp, &m.shift) == *g;
                let beta_ok = m
                    .beta
                    .iter()
                    .zip(src.alpha())
                    .zip(m.shift.coords())
                    .all(|((b, a), x)| *b == a - &CycNumber::from_integer(*x));
                let sigma_ok = (0..d).all(|i| {
                    let e = LatticePoint::unit(d, i);
                    m.character.value(&e) == sp.sigma(&m.shift, &e)
                });
                if ok_char && beta_ok && sigma_ok {
                    round.record(None, String::new);
                } else {
                    round.record_failure(format!("gamma {gamma}: found {m:?}"));
                }
            }
            None => round.record_failure(format!("gamma {gamma}: nothing found")),
        }
    }
    round.note("characters", chars.iter().map(|(_, g)| g.to_string()).collect::<Vec<_>>());
    if chars.is_empty() {
        round.record_failure("no nontrivial characters");
    }
    Ok(vec![ident.finish("untwisted", ctx, 1), round.finish("roundtrip", ctx, chars.len())])
}
