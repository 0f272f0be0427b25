//! The graded Lie algebra `Der(C_q)`.
//!
//! Degree `n` is spanned by `ad t^n` when `n ∉ rad(f)` and by the Witt-type
//! derivations `D(u, n) = t^n Σ u_i ∂_i` when `n ∈ rad(f)`. `ad t^n` for a
//! radical `n` is the zero derivation and is never stored.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::qtorus::{accumulate, same_spec, TorusElement};
use crate::torus::{LatticePoint, TorusSpec};

/// `(u, v) = Σ u_i v_i` for scalar vectors.
pub fn dot(u: &[CycNumber], v: &[CycNumber]) -> CycNumber {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn is_zero_vec(u: &[CycNumber]) -> bool {
    u.iter().all(CycNumber::is_zero)
}

fn accumulate_vec(map: &mut BTreeMap<LatticePoint, Vec<CycNumber>>, k: LatticePoint, u: Vec<CycNumber>) {
    if is_zero_vec(&u) {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(u);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            for (a, b) in e.get_mut().iter_mut().zip(&u) {
                *a += b;
            }
            if is_zero_vec(e.get()) {
                e.remove();
            }
        }
    }
}

fn scaled(u: &[CycNumber], k: &CycNumber) -> Vec<CycNumber> {
    u.iter().map(|x| x * k).collect()
}

/// A finite sum `Σ c_s ad t^s + Σ D(u_r, r)`.
#[derive(Clone, Debug)]
pub struct DerElement {
    spec: Arc<TorusSpec>,
    inner: BTreeMap<LatticePoint, CycNumber>,
    witt: BTreeMap<LatticePoint, Vec<CycNumber>>,
}

#[derive(Serialize, Deserialize)]
pub struct InnerWire {
    pub s: LatticePoint,
    pub c: CycNumber,
}

#[derive(Serialize, Deserialize)]
pub struct WittWire {
    pub r: LatticePoint,
    pub u: Vec<CycNumber>,
}

#[derive(Serialize, Deserialize, Default)]
pub struct DerWire {
    #[serde(default)]
    pub inner: Vec<InnerWire>,
    #[serde(default)]
    pub witt: Vec<WittWire>,
}

impl DerElement {
    pub fn zero(spec: &Arc<TorusSpec>) -> Self {
        DerElement { spec: spec.clone(), inner: BTreeMap::new(), witt: BTreeMap::new() }
    }

    /// `c · ad t^s`; zero when `s ∈ rad(f)`.
    pub fn ad_term(spec: &Arc<TorusSpec>, s: LatticePoint, c: CycNumber) -> Self {
        let mut e = Self::zero(spec);
        e.push_inner(s, c);
        e
    }

    pub fn ad(spec: &Arc<TorusSpec>, s: LatticePoint) -> Self {
        Self::ad_term(spec, s, CycNumber::one())
    }

    /// `D(u, r)`; `r` must lie in `rad(f)`.
    pub fn witt(spec: &Arc<TorusSpec>, u: Vec<CycNumber>, r: LatticePoint) -> Result<Self> {
        if u.len() != spec.rank() {
            return Err(Error::DimensionMismatch { expected: spec.rank(), got: u.len() });
        }
        if !spec.in_radical(&r) {
            return Err(Error::NotInRadical(r.coords().to_vec()));
        }
        let mut e = Self::zero(spec);
        accumulate_vec(&mut e.witt, r, u);
        Ok(e)
    }

    /// `D(e_i, r)`.
    pub fn witt_unit(spec: &Arc<TorusSpec>, i: usize, r: LatticePoint) -> Result<Self> {
        Self::witt(spec, unit_vec(spec.rank(), i), r)
    }

    /// `∂_i = D(e_i, 0)`.
    pub fn partial(spec: &Arc<TorusSpec>, i: usize) -> Self {
        Self::witt_unit(spec, i, LatticePoint::zero(spec.rank())).expect("0 is radical")
    }

    fn push_inner(&mut self, s: LatticePoint, c: CycNumber) {
        if self.spec.in_radical(&s) {
            if !c.is_zero() {
                log::debug!("ad t^{s} vanishes: {s} lies in rad(f)");
            }
            return;
        }
        accumulate(&mut self.inner, s, c);
    }

    pub fn spec(&self) -> &Arc<TorusSpec> {
        &self.spec
    }

    pub fn inner_terms(&self) -> impl Iterator<Item = (&LatticePoint, &CycNumber)> {
        self.inner.iter()
    }

    pub fn witt_terms(&self) -> impl Iterator<Item = (&LatticePoint, &Vec<CycNumber>)> {
        self.witt.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_empty() && self.witt.is_empty()
    }

    /// Degrees carrying a nonzero component.
    pub fn degrees(&self) -> Vec<LatticePoint> {
        let mut v: Vec<LatticePoint> = self.inner.keys().chain(self.witt.keys()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&self, other: &DerElement) -> Result<DerElement> {
        same_spec(&self.spec, &other.spec)?;
        let mut out = self.clone();
        for (s, c) in &other.inner {
            accumulate(&mut out.inner, s.clone(), c.clone());
        }
        for (r, u) in &other.witt {
            accumulate_vec(&mut out.witt, r.clone(), u.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> DerElement {
        self.scale(&CycNumber::from_integer(-1))
    }

    pub fn sub(&self, other: &DerElement) -> Result<DerElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &CycNumber) -> DerElement {
        let mut out = DerElement::zero(&self.spec);
        for (s, c) in &self.inner {
            accumulate(&mut out.inner, s.clone(), c * k);
        }
        for (r, u) in &self.witt {
            accumulate_vec(&mut out.witt, r.clone(), scaled(u, k));
        }
        out
    }

    /// The Lie bracket, bilinear in the three homogeneous rules.
    pub fn dbracket(&self, other: &DerElement) -> Result<DerElement> {
        same_spec(&self.spec, &other.spec)?;
        let spec = &self.spec;
        let mut out = DerElement::zero(spec);
        for (s, a) in &self.inner {
            for (r, b) in &other.inner {
                let (e1, e2) = (spec.sigma_exp(s, r), spec.sigma_exp(r, s));
                if e1 != e2 {
                    out.push_inner(s + r, (spec.root(e1) - spec.root(e2)) * (a * b));
                }
            }
            for (r, u) in &other.witt {
                // [ad t^s, D(u, r)] = -(u, s) σ(r, s) ad t^{r+s}
                let c = s.pair(u) * spec.root(spec.sigma_exp(r, s)) * a;
                out.push_inner(r + s, -c);
            }
        }
        for (r, u) in &self.witt {
            for (s, b) in &other.inner {
                let c = s.pair(u) * spec.root(spec.sigma_exp(r, s)) * b;
                out.push_inner(r + s, c);
            }
            for (r2, u2) in &other.witt {
                // w = σ(r, r') ((u, r') u' - (u', r) u)
                let sig = spec.root(spec.sigma_exp(r, r2));
                let a = r2.pair(u);
                let b = r.pair(u2);
                let w: Vec<CycNumber> =
                    u2.iter().zip(u).map(|(x2, x)| sig * &(&a * x2 - &b * x)).collect();
                accumulate_vec(&mut out.witt, r + r2, w);
            }
        }
        Ok(out)
    }

    /// The action on `C_q`.
    pub fn dact(&self, a: &TorusElement) -> Result<TorusElement> {
        same_spec(&self.spec, a.spec())?;
        let spec = &self.spec;
        let mut out = BTreeMap::new();
        for (n, c) in a.terms() {
            for (s, k) in &self.inner {
                let (e1, e2) = (spec.sigma_exp(s, n), spec.sigma_exp(n, s));
                if e1 != e2 {
                    accumulate(&mut out, s + n, (spec.root(e1) - spec.root(e2)) * (k * c));
                }
            }
            for (r, u) in &self.witt {
                let p = n.pair(u);
                if !p.is_zero() {
                    accumulate(&mut out, r + n, p * spec.root(spec.sigma_exp(r, n)) * c);
                }
            }
        }
        Ok(TorusElement::from_terms(spec, out))
    }

    /// Projection onto the degree-`n` component.
    pub fn grade(&self, n: &LatticePoint) -> DerElement {
        let mut out = DerElement::zero(&self.spec);
        if let Some(c) = self.inner.get(n) {
            out.inner.insert(n.clone(), c.clone());
        }
        if let Some(u) = self.witt.get(n) {
            out.witt.insert(n.clone(), u.clone());
        }
        out
    }

    pub fn to_wire(&self) -> DerWire {
        DerWire {
            inner: self.inner.iter().map(|(s, c)| InnerWire { s: s.clone(), c: c.normalized() }).collect(),
            witt: self
                .witt
                .iter()
                .map(|(r, u)| WittWire { r: r.clone(), u: u.iter().map(CycNumber::normalized).collect() })
                .collect(),
        }
    }

    pub fn from_wire(spec: &Arc<TorusSpec>, wire: DerWire) -> Result<Self> {
        let d = spec.rank();
        let mut out = DerElement::zero(spec);
        for InnerWire { s, c } in wire.inner {
            if s.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: s.dim() });
            }
            out.push_inner(s, c);
        }
        for WittWire { r, u } in wire.witt {
            if r.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: r.dim() });
            }
            out = out.add(&DerElement::witt(spec, u, r)?)?;
        }
        Ok(out)
    }
}

impl PartialEq for DerElement {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec && self.inner == other.inner && self.witt == other.witt
    }
}

pub fn unit_vec(d: usize, i: usize) -> Vec<CycNumber> {
    (0..d).map(|j| CycNumber::from_integer(i64::from(i == j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst_i() -> Arc<TorusSpec> {
        Arc::new(TorusSpec::from_upper(2, 2, &[(0, 1, 1)]).unwrap())
    }

    fn ints(v: &[i64]) -> Vec<CycNumber> {
        v.iter().map(|&x| CycNumber::from_integer(x)).collect()
    }

    #[test]
    fn degree_zero_witts_commute() {
        let s = inst_i();
        let a = DerElement::witt(&s, ints(&[2, -1]), [0, 0].into()).unwrap();
        let b = DerElement::witt(&s, ints(&[1, 5]), [0, 0].into()).unwrap();
        assert!(a.dbracket(&b).unwrap().is_zero());
    }

    #[test]
    fn grading_operator_on_inner() {
        let s = inst_i();
        let u = ints(&[3, -2]);
        let d0 = DerElement::witt(&s, u.clone(), [0, 0].into()).unwrap();
        let sdeg = LatticePoint::from([1, 2]);
        let ad = DerElement::ad(&s, sdeg.clone());
        let expect = ad.scale(&sdeg.pair(&u));
        assert_eq!(d0.dbracket(&ad).unwrap(), expect);
    }

    #[test]
    fn inner_inner_bracket() {
        let s = inst_i();
        let a = DerElement::ad(&s, [1, 0].into());
        let b = DerElement::ad(&s, [0, 1].into());
        let expect = DerElement::ad_term(&s, [1, 1].into(), CycNumber::from_integer(2));
        assert_eq!(a.dbracket(&b).unwrap(), expect);
        // landing in the radical gives zero
        let c = DerElement::ad(&s, [1, 1].into());
        assert!(c.dbracket(&DerElement::ad(&s, [1, -1].into())).unwrap().is_zero());
    }

    #[test]
    fn radical_inner_is_zero() {
        let s = inst_i();
        assert!(DerElement::ad(&s, [2, 0].into()).is_zero());
        assert!(DerElement::ad(&s, [0, 0].into()).is_zero());
        assert_eq!(
            DerElement::witt(&s, ints(&[1, 0]), [1, 0].into()).unwrap_err(),
            Error::NotInRadical(vec![1, 0])
        );
    }

    #[test]
    fn action_examples() {
        let s = inst_i();
        let u = ints(&[2, 3]);
        let n = LatticePoint::from([1, -1]);
        let tn = TorusElement::monomial(&s, n.clone());
        let d0 = DerElement::witt(&s, u.clone(), [0, 0].into()).unwrap();
        assert_eq!(d0.dact(&tn).unwrap(), tn.scale(&n.pair(&u)));
        let ad = DerElement::ad(&s, [1, 0].into());
        assert!(ad.dact(&TorusElement::monomial(&s, [0, 0].into())).unwrap().is_zero());
        assert_eq!(
            ad.dact(&TorusElement::monomial(&s, [0, 1].into())).unwrap(),
            TorusElement::term(&s, [1, 1].into(), CycNumber::from_integer(2))
        );
    }

    #[test]
    fn grade_examples() {
        let s = inst_i();
        let ad = DerElement::ad(&s, [1, 0].into());
        assert_eq!(ad.grade(&[1, 0].into()), ad);
        assert!(ad.grade(&[0, 1].into()).is_zero());
        let w = DerElement::witt(&s, ints(&[1, 1]), [2, 0].into()).unwrap();
        let sum = w.add(&ad).unwrap();
        assert_eq!(sum.grade(&[2, 0].into()), w);
    }

    #[test]
    fn wire_roundtrip() {
        let s = inst_i();
        let x = DerElement::ad(&s, [1, 0].into())
            .add(&DerElement::witt(&s, ints(&[1, -1]), [0, 2].into()).unwrap())
            .unwrap();
        let json = serde_json::to_string(&x.to_wire()).unwrap();
        let back = DerElement::from_wire(&s, serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, x);
    }
}
