use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::character::TwistCharacter;
use crate::cyclotomic::CycNumber;
use crate::der::{dot, DerElement};
use crate::error::{Error, Result};
use crate::glmod::GlModule;
use crate::linalg::Matrix;
use crate::qtorus::{same_spec, TorusElement};
use crate::semidirect::GElement;
use crate::torus::{LatticePoint, TorusSpec};

/// Which action of `ad t^s` (and of `t^m`) the module carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    /// `ad t^s v(n) = (σ(s,n) - σ(n,s)) v(n+s)`.
    #[serde(rename = "F")]
    F,
    /// `ad t^s v(n) = (σ(s,n) g(s) - σ(n,s)) v(n+s)`, `t^m v(n) = g(m) σ(m,n) v(m+n)`.
    #[serde(rename = "F_g", alias = "Fg")]
    Fg,
    /// `ad t^s v(n) = (σ(s,n) - g(s) σ(n,s)) v(n+s)`.
    #[serde(rename = "G_g", alias = "Gg")]
    Gg,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::F => "F",
            Flavor::Fg => "F_g",
            Flavor::Gg => "G_g",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" => Ok(Flavor::F),
            "F_g" | "Fg" => Ok(Flavor::Fg),
            "G_g" | "Gg" => Ok(Flavor::Gg),
            _ => Err(Error::Parse(format!("unknown flavor {s:?}"))),
        }
    }
}

/// The data `(C_q, V, α, g, flavor)` of one graded module on `V ⊗ C_q`.
#[derive(Clone)]
pub struct ModuleSpec {
    spec: Arc<TorusSpec>,
    v: Arc<GlModule>,
    alpha: Vec<CycNumber>,
    twist: TwistCharacter,
    flavor: Flavor,
    /// Common conductor of `σ` and `g`.
    order: i64,
    sigma_step: i64,
    twist_step: i64,
    roots: Vec<CycNumber>,
}

impl fmt::Debug for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleSpec")
            .field("spec", &self.spec)
            .field("v", &self.v)
            .field("alpha", &self.alpha)
            .field("twist", &self.twist)
            .field("flavor", &self.flavor)
            .finish()
    }
}

impl ModuleSpec {
    pub fn new(
        spec: Arc<TorusSpec>,
        v: Arc<GlModule>,
        alpha: Vec<CycNumber>,
        twist: TwistCharacter,
        flavor: Flavor,
    ) -> Result<Self> {
        let d = spec.rank();
        if v.rank() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.rank() });
        }
        if alpha.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: alpha.len() });
        }
        // re-validate against this torus
        let twist = TwistCharacter::new(&spec, twist.conductor(), twist.exponents().to_vec())?;
        if flavor == Flavor::F && !twist.is_trivial() {
            return Err(Error::InvalidModule("flavor F carries no twist".into()));
        }
        let n = spec.order();
        let l = n.lcm(twist.conductor());
        let order = l.get() as i64;
        let roots = (0..order).map(|k| CycNumber::root_of_unity(l, k)).collect();
        Ok(ModuleSpec {
            sigma_step: order / n.get() as i64,
            twist_step: order / twist.conductor().get() as i64,
            spec,
            v,
            alpha,
            twist,
            flavor,
            order,
            roots,
        })
    }

    /// Flavor `F` with the trivial twist.
    pub fn untwisted(spec: Arc<TorusSpec>, v: Arc<GlModule>, alpha: Vec<CycNumber>) -> Result<Self> {
        let d = spec.rank();
        Self::new(spec, v, alpha, TwistCharacter::trivial(d), Flavor::F)
    }

    pub fn spec(&self) -> &Arc<TorusSpec> {
        &self.spec
    }

    pub fn module(&self) -> &Arc<GlModule> {
        &self.v
    }

    pub fn alpha(&self) -> &[CycNumber] {
        &self.alpha
    }

    pub fn twist(&self) -> &TwistCharacter {
        &self.twist
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    /// A copy with a different flavor and twist.
    pub fn with_twist(&self, twist: TwistCharacter, flavor: Flavor) -> Result<Self> {
        Self::new(self.spec.clone(), self.v.clone(), self.alpha.clone(), twist, flavor)
    }

    pub fn with_alpha(&self, alpha: Vec<CycNumber>) -> Result<Self> {
        Self::new(self.spec.clone(), self.v.clone(), alpha, self.twist.clone(), self.flavor)
    }

    pub fn with_module(&self, v: Arc<GlModule>) -> Result<Self> {
        Self::new(self.spec.clone(), v, self.alpha.clone(), self.twist.clone(), self.flavor)
    }

    fn sig(&self, a: &LatticePoint, b: &LatticePoint) -> i64 {
        self.spec.sigma_exp(a, b) * self.sigma_step
    }

    fn g(&self, s: &LatticePoint) -> i64 {
        self.twist.exponent(s) * self.twist_step
    }

    fn root(&self, e: i64) -> &CycNumber {
        &self.roots[e.rem_euclid(self.order) as usize]
    }

    /// Scalar by which `ad t^s` maps `v(n)` to `v(n+s)`.
    pub fn ad_coeff(&self, s: &LatticePoint, n: &LatticePoint) -> CycNumber {
        let (a, b) = match self.flavor {
            Flavor::F => (self.sig(s, n), self.sig(n, s)),
            Flavor::Gg => (self.sig(s, n), self.g(s) + self.sig(n, s)),
            Flavor::Fg => (self.g(s) + self.sig(s, n), self.sig(n, s)),
        };
        if (a - b).rem_euclid(self.order) == 0 {
            return CycNumber::zero();
        }
        self.root(a) - self.root(b)
    }

    /// Scalar by which `t^m` maps `v(n)` to `v(m+n)`.
    pub fn torus_coeff(&self, m: &LatticePoint, n: &LatticePoint) -> &CycNumber {
        match self.flavor {
            Flavor::F | Flavor::Gg => self.root(self.sig(m, n)),
            Flavor::Fg => self.root(self.g(m) + self.sig(m, n)),
        }
    }

    /// One application of `x`, extended linearly.
    pub fn act(&self, x: &GElement, w: &BoxVector) -> Result<BoxVector> {
        same_spec(x.spec(), &self.spec)?;
        let mut out = BoxVector::new(w.radius.clone());
        out.truncated = w.truncated;
        let witt: Vec<(&LatticePoint, &Vec<CycNumber>, Matrix)> =
            x.der.witt_terms().map(|(r, u)| (r, u, self.v.outer(r, u))).collect();
        for (n, v) in &w.entries {
            for (s, c) in x.der.inner_terms() {
                let k = self.ad_coeff(s, n);
                if !k.is_zero() {
                    out.push(n + s, scale_vec(v, &(k * c)));
                }
            }
            for (r, u, mat) in &witt {
                let mut shifted = n.pair(u);
                shifted += &dot(u, &self.alpha);
                let mut res = mat.apply(v);
                add_scaled(&mut res, v, &shifted);
                let k = self.root(self.sig(r, n));
                out.push(n + r, scale_vec(&res, k));
            }
            for (m, c) in x.torus.terms() {
                out.push(n + m, scale_vec(v, &(self.torus_coeff(m, n) * c)));
            }
        }
        Ok(out)
    }

    /// Matrix of a degree-`deg` operator from the weight space at `n` to the one at
    /// `n + deg`; `None` if any intermediate term left the box.
    pub fn restrict(&self, op: &Operator, radius: &[i64], n: &LatticePoint, deg: &LatticePoint) -> Result<Option<Matrix>> {
        let dim = self.dim();
        let target = n + deg;
        let mut cols = Vec::with_capacity(dim);
        for i in 0..dim {
            let w = BoxVector::basis(radius, n, i, dim)?;
            let img = op.apply(self, &w)?;
            if img.truncated {
                return Ok(None);
            }
            for (p, _) in img.entries() {
                if *p != target {
                    return Err(Error::InvalidModule(format!("operator is not homogeneous of degree {deg}")));
                }
            }
            cols.push(img.get(&target).cloned().unwrap_or_else(|| vec![CycNumber::zero(); dim]));
        }
        Ok(Some(Matrix::from_columns(dim, &cols)))
    }

    /// `T'(u, r) = t^{-r} D(u, r) - σ(-r, r) D(u, 0)` restricted to the weight space at `n`.
    pub fn tprime_matrix(&self, u: &[CycNumber], r: &LatticePoint, n: &LatticePoint, radius: &[i64]) -> Result<Matrix> {
        let op = tprime(&self.spec, u, r)?;
        for p in [n.clone(), n + r] {
            if !in_box(radius, &p) {
                return Err(Error::OutOfBox(p.coords().to_vec()));
            }
        }
        let zero = LatticePoint::zero(self.rank());
        self.restrict(&op, radius, n, &zero)?
            .ok_or_else(|| Error::OutOfBox((n + r).coords().to_vec()))
    }

    /// The scalar `λ(s, n)` by which `t^{-s} ad t^s` acts at weight `n`.
    pub fn lambda_scalar(&self, s: &LatticePoint, n: &LatticePoint, radius: &[i64]) -> Result<CycNumber> {
        for p in [n.clone(), n + s] {
            if !in_box(radius, &p) {
                return Err(Error::OutOfBox(p.coords().to_vec()));
            }
        }
        let op = Operator::word(vec![t(&self.spec, &-s), ad(&self.spec, s)]);
        let zero = LatticePoint::zero(self.rank());
        let m = self
            .restrict(&op, radius, n, &zero)?
            .ok_or_else(|| Error::OutOfBox((n + s).coords().to_vec()))?;
        m.as_scalar().ok_or_else(|| Error::NotScalar(n.coords().to_vec()))
    }

    /// `λ(s, n)` predicted from `λ(s, 0)`: `f(n,s) λ(s,0) + σ(-s,s)(1 - f(n,s))`.
    pub fn lambda_recursion(&self, s: &LatticePoint, n: &LatticePoint, lambda0: &CycNumber) -> CycNumber {
        let f = self.spec.f_val(n, s);
        let c = self.spec.sigma(&-s, s);
        &f * lambda0 + c * (CycNumber::one() - f)
    }

    /// Recovers `g(s) = 1 - σ(s,s) λ(s,0)` on the generators and checks it is a
    /// character agreeing with the same formula at every `s` in the box.
    pub fn extract_g(&self, radius: &[i64]) -> Result<TwistCharacter> {
        let d = self.rank();
        let zero = LatticePoint::zero(d);
        let from_lambda = |s: &LatticePoint| -> Result<CycNumber> {
            let l = self.lambda_scalar(s, &zero, radius)?;
            Ok(CycNumber::one() - self.spec.sigma(s, s) * l)
        };
        let gens = (0..d).map(|i| from_lambda(&LatticePoint::unit(d, i))).collect::<Result<Vec<_>>>()?;
        let g = TwistCharacter::from_generator_values(&self.spec, &gens)?;
        for s in box_points(radius) {
            let got = from_lambda(&s)?;
            if got.is_zero() {
                return Err(Error::NotCharacter(format!("g({s}) = 0")));
            }
            if got != g.value(&s) {
                return Err(Error::NotCharacter(format!("g({s}) = {got}, expected {}", g.value(&s))));
            }
        }
        Ok(g)
    }
}

fn scale_vec(v: &[CycNumber], k: &CycNumber) -> Vec<CycNumber> {
    if k.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x * k).collect()
}

fn add_scaled(acc: &mut [CycNumber], v: &[CycNumber], k: &CycNumber) {
    if k.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(x * k);
        }
    }
}

pub fn in_box(radius: &[i64], n: &LatticePoint) -> bool {
    n.dim() == radius.len() && n.coords().iter().zip(radius).all(|(x, r)| x.abs() <= *r)
}

/// All lattice points of the box, in lexicographic order.
pub fn box_points(radius: &[i64]) -> Vec<LatticePoint> {
    let mut out = vec![Vec::new()];
    for &r in radius {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(LatticePoint::new).collect()
}

/// A vector of `V ⊗ C_q` supported on a finite box `|n_i| <= radius_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxVector {
    radius: Vec<i64>,
    entries: BTreeMap<LatticePoint, Vec<CycNumber>>,
    truncated: bool,
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    n: LatticePoint,
    v: Vec<CycNumber>,
}

#[derive(Serialize, Deserialize)]
struct BoxVectorWire {
    #[serde(rename = "box")]
    radius: Vec<i64>,
    entries: Vec<EntryWire>,
    #[serde(default)]
    truncated: bool,
}

impl Serialize for BoxVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoxVectorWire {
            radius: self.radius.clone(),
            entries: self
                .entries
                .iter()
                .map(|(n, v)| EntryWire { n: n.clone(), v: v.iter().map(CycNumber::normalized).collect() })
                .collect(),
            truncated: self.truncated,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoxVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = BoxVectorWire::deserialize(d)?;
        let mut out = BoxVector::new(wire.radius);
        out.truncated = wire.truncated;
        for e in wire.entries {
            if !in_box(&out.radius, &e.n) {
                return Err(serde::de::Error::custom(format!("point {} lies outside the box", e.n)));
            }
            out.push(e.n, e.v);
        }
        Ok(out)
    }
}

impl BoxVector {
    pub fn new(radius: Vec<i64>) -> Self {
        BoxVector { radius, entries: BTreeMap::new(), truncated: false }
    }

    /// `v(n)` for a single vector `v`.
    pub fn single(radius: &[i64], n: &LatticePoint, v: Vec<CycNumber>) -> Result<Self> {
        if !in_box(radius, n) {
            return Err(Error::OutOfBox(n.coords().to_vec()));
        }
        let mut out = BoxVector::new(radius.to_vec());
        out.push(n.clone(), v);
        Ok(out)
    }

    /// The `i`-th basis vector of `V` placed at weight `n`.
    pub fn basis(radius: &[i64], n: &LatticePoint, i: usize, dim: usize) -> Result<Self> {
        let mut v = vec![CycNumber::zero(); dim];
        v[i] = CycNumber::one();
        Self::single(radius, n, v)
    }

    pub fn radius(&self) -> &[i64] {
        &self.radius
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn entries(&self) -> impl Iterator<Item = (&LatticePoint, &Vec<CycNumber>)> {
        self.entries.iter()
    }

    pub fn get(&self, n: &LatticePoint) -> Option<&Vec<CycNumber>> {
        self.entries.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_point(&self, n: &LatticePoint) -> bool {
        in_box(&self.radius, n)
    }

    /// Adds `v` at `n`; drops it and sets the truncation flag if `n` is outside the box.
    pub fn push(&mut self, n: LatticePoint, v: Vec<CycNumber>) {
        if v.iter().all(CycNumber::is_zero) {
            return;
        }
        if !in_box(&self.radius, &n) {
            self.truncated = true;
            return;
        }
        match self.entries.entry(n) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                for (a, b) in e.get_mut().iter_mut().zip(&v) {
                    *a += b;
                }
                if e.get().iter().all(CycNumber::is_zero) {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &BoxVector, k: &CycNumber) {
        self.truncated |= other.truncated;
        if k.is_zero() {
            return;
        }
        for (n, v) in &other.entries {
            self.push(n.clone(), scale_vec(v, k));
        }
    }

    pub fn sub(&self, other: &BoxVector) -> BoxVector {
        let mut out = self.clone();
        out.add_scaled(other, &CycNumber::from_integer(-1));
        out
    }

    pub fn scale(&self, k: &CycNumber) -> BoxVector {
        let mut out = BoxVector::new(self.radius.clone());
        out.add_scaled(self, k);
        out.truncated = self.truncated;
        out
    }

    /// Applies `v(n) ↦ c(n) v(n)` pointwise.
    pub fn map_diagonal(&self, mut c: impl FnMut(&LatticePoint) -> CycNumber) -> BoxVector {
        let mut out = BoxVector::new(self.radius.clone());
        out.truncated = self.truncated;
        for (n, v) in &self.entries {
            out.push(n.clone(), scale_vec(v, &c(n)));
        }
        out
    }

    /// The first point carrying a nonzero coordinate, with that coordinate.
    pub fn first_nonzero(&self) -> Option<(&LatticePoint, &CycNumber)> {
        self.entries
            .iter()
            .find_map(|(n, v)| v.iter().find(|x| !x.is_zero()).map(|c| (n, c)))
    }
}

/// `t^m` as an element of `g`.
pub fn t(spec: &Arc<TorusSpec>, m: &LatticePoint) -> GElement {
    GElement::from_torus(TorusElement::monomial(spec, m.clone()))
}

/// `ad t^s` as an element of `g`.
pub fn ad(spec: &Arc<TorusSpec>, s: &LatticePoint) -> GElement {
    GElement::from_der(DerElement::ad(spec, s.clone()))
}

/// `D(u, r)` as an element of `g`.
pub fn witt(spec: &Arc<TorusSpec>, u: &[CycNumber], r: &LatticePoint) -> Result<GElement> {
    Ok(GElement::from_der(DerElement::witt(spec, u.to_vec(), r.clone())?))
}

/// `ad t^n - t^n`, the image of `t^n` in the second copy of `C_q`.
pub fn c2(spec: &Arc<TorusSpec>, n: &LatticePoint) -> GElement {
    crate::semidirect::embed_c2(spec, n.clone())
}

/// `T'(u, r)` as an operator; `r` must be radical.
pub fn tprime(spec: &Arc<TorusSpec>, u: &[CycNumber], r: &LatticePoint) -> Result<Operator> {
    let zero = LatticePoint::zero(spec.rank());
    let k = spec.sigma(&-r, r);
    Ok(Operator::word(vec![t(spec, &-r), witt(spec, u, r)?])
        .sub(Operator::element(witt(spec, u, &zero)?).scale(&k)))
}

/// A linear combination of products of elements of `g`, acting on modules.
///
/// Each word `x_1 x_2 … x_k` acts as `x_1(x_2(…(x_k v)))`.
#[derive(Clone, Debug, Default)]
pub struct Operator {
    terms: Vec<(CycNumber, Vec<GElement>)>,
}

impl Operator {
    pub fn zero() -> Self {
        Operator::default()
    }

    pub fn identity() -> Self {
        Operator { terms: vec![(CycNumber::one(), Vec::new())] }
    }

    pub fn word(factors: Vec<GElement>) -> Self {
        Operator { terms: vec![(CycNumber::one(), factors)] }
    }

    pub fn element(x: GElement) -> Self {
        Self::word(vec![x])
    }

    pub fn scale(mut self, k: &CycNumber) -> Self {
        for (c, _) in &mut self.terms {
            *c = &*c * k;
        }
        self
    }

    pub fn add(mut self, other: Operator) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn sub(self, other: Operator) -> Self {
        self.add(other.scale(&CycNumber::from_integer(-1)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Operator) -> Self {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = x.clone();
                w.extend(y.iter().cloned());
                terms.push((a * b, w));
            }
        }
        Operator { terms }
    }

    /// `[self, other] = self ∘ other - other ∘ self`.
    pub fn commutator(&self, other: &Operator) -> Self {
        self.compose(other).sub(other.compose(self))
    }

    /// Suffix degree sums of each word: the weights visited after each factor.
    fn paths(&self, d: usize) -> Result<Vec<Vec<LatticePoint>>> {
        let mut paths = Vec::with_capacity(self.terms.len());
        for (_, word) in &self.terms {
            let mut acc = LatticePoint::zero(d);
            let mut p = vec![acc.clone()];
            for x in word.iter().rev() {
                let degs = x.degrees();
                match degs.as_slice() {
                    [] => {}
                    [g] => acc = &acc + g,
                    _ => return Err(Error::InvalidModule("operator factor is not homogeneous".into())),
                }
                p.push(acc.clone());
            }
            paths.push(p);
        }
        Ok(paths)
    }

    /// Start weights from which no word leaves the box at any step.
    pub fn interior(&self, radius: &[i64]) -> Result<Vec<LatticePoint>> {
        let paths = self.paths(radius.len())?;
        Ok(box_points(radius)
            .into_iter()
            .filter(|n| paths.iter().flatten().all(|p| in_box(radius, &(n + p))))
            .collect())
    }

    pub fn apply(&self, ms: &ModuleSpec, w: &BoxVector) -> Result<BoxVector> {
        let mut out = BoxVector::new(w.radius.clone());
        out.truncated = w.truncated;
        for (c, word) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let mut cur = w.clone();
            for x in word.iter().rev() {
                cur = ms.act(x, &cur)?;
                if cur.is_zero() && !cur.truncated {
                    break;
                }
            }
            out.add_scaled(&cur, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<CycNumber> {
        v.iter().map(|&x| CycNumber::from_integer(x)).collect()
    }

    fn inst_i() -> ModuleSpec {
        let spec = Arc::new(TorusSpec::from_upper(2, 2, &[(0, 1, 1)]).unwrap());
        ModuleSpec::untwisted(spec, Arc::new(GlModule::natural(2)), ints(&[0, 0])).unwrap()
    }

    #[test]
    fn cartan_eigenvalue() {
        let ms = inst_i().with_alpha(vec![CycNumber::from_integer(1), "1/2".parse().unwrap()]).unwrap();
        let n = LatticePoint::from([2, -1]);
        let w = BoxVector::basis(&[3, 3], &n, 0, 2).unwrap();
        let u = ints(&[1, 4]);
        let got = ms.act(&witt(ms.spec(), &u, &LatticePoint::zero(2)).unwrap(), &w).unwrap();
        // (u, n + α) = 1·3 + 4·(-1/2) = 1
        assert_eq!(got, w);
    }

    #[test]
    fn torus_unit_and_ad_example() {
        let ms = inst_i();
        let w = BoxVector::basis(&[3, 3], &[0, 1].into(), 1, 2).unwrap();
        assert_eq!(ms.act(&t(ms.spec(), &[0, 0].into()), &w).unwrap(), w);
        let got = ms.act(&ad(ms.spec(), &[1, 0].into()), &w).unwrap();
        let expect = BoxVector::single(&[3, 3], &[1, 1].into(), ints(&[0, 2])).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn truncation_flag() {
        let ms = inst_i();
        let w = BoxVector::basis(&[1, 1], &[1, 0].into(), 0, 2).unwrap();
        let got = ms.act(&t(ms.spec(), &[1, 0].into()), &w).unwrap();
        assert!(got.truncated() && got.is_zero());
    }

    #[test]
    fn tprime_examples() {
        let ms = inst_i();
        let u = ints(&[1, 0]);
        let z = LatticePoint::zero(2);
        assert!(ms.tprime_matrix(&u, &z, &z, &[3, 3]).unwrap().is_zero());
        let r = LatticePoint::from([0, 2]);
        let m = ms.tprime_matrix(&u, &r, &[1, -1].into(), &[3, 3]).unwrap();
        let k = ms.spec().sigma(&-&r, &r);
        assert_eq!(m, ms.module().e(1, 0).scale(&CycNumber::from_integer(2)).scale(&k));
        assert!(matches!(ms.tprime_matrix(&u, &r, &[0, 2].into(), &[3, 3]), Err(Error::OutOfBox(_))));
    }

    #[test]
    fn lambda_examples() {
        let ms = inst_i();
        let z = LatticePoint::zero(2);
        assert!(ms.lambda_scalar(&[1, 0].into(), &z, &[3, 3]).unwrap().is_zero());
        assert!(ms.lambda_scalar(&[2, 0].into(), &[1, 1].into(), &[3, 3]).unwrap().is_zero());
        assert_eq!(ms.extract_g(&[2, 2]).unwrap(), TwistCharacter::trivial(2));
    }

    #[test]
    fn box_points_order() {
        let pts = box_points(&[1, 0]);
        assert_eq!(pts, vec![LatticePoint::from([-1, 0]), [0, 0].into(), [1, 0].into()]);
        assert_eq!(box_points(&[3, 3, 3]).len(), 343);
    }
}
