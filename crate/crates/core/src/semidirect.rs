//! The Lie algebra `g = Der(C_q) ⋉ C_q`, the two commuting copies of `C_q`
//! inside it, and the map from `Der(A) ⋉ A` onto `W ⋉ Z(C_q)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNumber, Rational};
use crate::der::{DerElement, DerWire};
use crate::error::{Error, Result};
use crate::qtorus::{same_spec, TermWire, TorusElement};
use crate::torus::{LatticePoint, TorusSpec};

/// `T + a` with `T ∈ Der(C_q)` and `a ∈ C_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct GElement {
    pub der: DerElement,
    pub torus: TorusElement,
}

#[derive(Serialize, Deserialize, Default)]
pub struct GWire {
    #[serde(default)]
    pub der: DerWire,
    #[serde(default)]
    pub torus: Vec<TermWire>,
}

/// `D(u, 0) + c t^0`, an element of the Cartan subalgebra.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanVector {
    pub u: Vec<CycNumber>,
    pub c: CycNumber,
}

impl CartanVector {
    pub fn to_element(&self, spec: &Arc<TorusSpec>) -> Result<GElement> {
        let d = LatticePoint::zero(spec.rank());
        Ok(GElement {
            der: DerElement::witt(spec, self.u.clone(), d.clone())?,
            torus: TorusElement::term(spec, d, self.c.clone()),
        })
    }
}

impl GElement {
    pub fn zero(spec: &Arc<TorusSpec>) -> Self {
        GElement { der: DerElement::zero(spec), torus: TorusElement::zero(spec) }
    }

    pub fn from_der(der: DerElement) -> Self {
        let torus = TorusElement::zero(der.spec());
        GElement { der, torus }
    }

    pub fn from_torus(torus: TorusElement) -> Self {
        let der = DerElement::zero(torus.spec());
        GElement { der, torus }
    }

    pub fn spec(&self) -> &Arc<TorusSpec> {
        self.der.spec()
    }

    pub fn is_zero(&self) -> bool {
        self.der.is_zero() && self.torus.is_zero()
    }

    pub fn add(&self, other: &GElement) -> Result<GElement> {
        Ok(GElement { der: self.der.add(&other.der)?, torus: self.torus.add(&other.torus)? })
    }

    pub fn sub(&self, other: &GElement) -> Result<GElement> {
        Ok(GElement { der: self.der.sub(&other.der)?, torus: self.torus.sub(&other.torus)? })
    }

    pub fn neg(&self) -> GElement {
        GElement { der: self.der.neg(), torus: self.torus.neg() }
    }

    pub fn scale(&self, k: &CycNumber) -> GElement {
        GElement { der: self.der.scale(k), torus: self.torus.scale(k) }
    }

    /// `[T + a, T' + b] = [T, T'] + (T.b - T'.a + [a, b])`.
    pub fn gbracket(&self, other: &GElement) -> Result<GElement> {
        same_spec(self.spec(), other.spec())?;
        let der = self.der.dbracket(&other.der)?;
        let torus = self
            .der
            .dact(&other.torus)?
            .sub(&other.der.dact(&self.torus)?)?
            .add(&self.torus.tcomm(&other.torus)?)?;
        Ok(GElement { der, torus })
    }

    /// All degrees carrying a nonzero component.
    pub fn degrees(&self) -> Vec<LatticePoint> {
        let mut v = self.der.degrees();
        v.extend(self.torus.support().cloned());
        v.sort();
        v.dedup();
        v
    }

    pub fn to_wire(&self) -> GWire {
        GWire { der: self.der.to_wire(), torus: self.torus.to_wire() }
    }

    pub fn from_wire(spec: &Arc<TorusSpec>, wire: GWire) -> Result<Self> {
        Ok(GElement {
            der: DerElement::from_wire(spec, wire.der)?,
            torus: TorusElement::from_wire(spec, wire.torus)?,
        })
    }
}

/// `t^n ∈ C_q^(1)`.
pub fn embed_c1(spec: &Arc<TorusSpec>, n: LatticePoint) -> GElement {
    GElement::from_torus(TorusElement::monomial(spec, n))
}

/// `ad t^n - t^n ∈ C_q^(2)`; for radical `n` only `-t^n` survives.
pub fn embed_c2(spec: &Arc<TorusSpec>, n: LatticePoint) -> GElement {
    GElement {
        der: DerElement::ad(spec, n.clone()),
        torus: TorusElement::monomial(spec, n).neg(),
    }
}

/// Coordinates of an element along `g = W ⋉ (C_q^(1) + C_q^(2))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// Witt part.
    pub w: DerElement,
    /// Coefficients on `embed_c1(n)`.
    pub c1: TorusElement,
    /// Coefficients on `embed_c2(n)`, supported off the radical.
    pub c2: TorusElement,
}

pub fn decompose(x: &GElement) -> Decomposition {
    let spec = x.spec();
    let mut w = DerElement::zero(spec);
    for (r, u) in x.der.witt_terms() {
        w = w.add(&DerElement::witt(spec, u.clone(), r.clone()).expect("stored witt terms are radical")).unwrap();
    }
    let c2 = TorusElement::from_terms(spec, x.der.inner_terms().map(|(s, c)| (s.clone(), c.clone())));
    // c ad t^s = c (ad t^s - t^s) + c t^s
    let c1 = x.torus.add(&c2).expect("same spec");
    Decomposition { w, c1, c2 }
}

pub fn recompose(spec: &Arc<TorusSpec>, parts: &Decomposition) -> Result<GElement> {
    let mut out = GElement::from_der(parts.w.clone());
    for (n, c) in parts.c1.terms() {
        out = out.add(&embed_c1(spec, n.clone()).scale(c))?;
    }
    for (n, c) in parts.c2.terms() {
        out = out.add(&embed_c2(spec, n.clone()).scale(c))?;
    }
    Ok(out)
}

/// Whether `x` lies in `C_q^(1)`, i.e. has no derivation part.
pub fn in_c1(x: &GElement) -> bool {
    x.der.is_zero()
}

/// `φ(d(u, r) + t^s) = √σ(r, r) D(u, r) + √σ(s, s) t^s` for `r, s ∈ rad(f)`,
/// with the canonical square-root branch.
pub fn phi(spec: &Arc<TorusSpec>, u: &[CycNumber], r: &LatticePoint, s: &LatticePoint) -> Result<GElement> {
    for p in [r, s] {
        if !spec.in_radical(p) {
            return Err(Error::NotInRadical(p.coords().to_vec()));
        }
    }
    let der = DerElement::witt(spec, u.to_vec(), r.clone())?.scale(&spec.sigma(r, r).sqrt_root()?);
    let torus = TorusElement::term(spec, s.clone(), spec.sigma(s, s).sqrt_root()?);
    Ok(GElement { der, torus })
}

/// Maps an element of `Der(A) ⋉ A`, written over the trivial torus of the same
/// rank in the coordinates `s_i = t_i^{m_i}`, into `g`.
///
/// Degrees are rescaled by `n ↦ (m_1 n_1, …, m_d n_d)`. Because `∂_i` on `C_q`
/// restricts to `m_i` times the Euler derivation in `s_i`, the `u` vectors are
/// rescaled by `u_i ↦ u_i / m_i`. Requires a diagonal radical.
pub fn phi_from_laurent(spec: &Arc<TorusSpec>, x: &GElement) -> Result<GElement> {
    let orders = spec.radical().diagonal_orders.clone().ok_or(Error::NonDiagonalRadical)?;
    if x.spec().rank() != spec.rank() || x.spec().order().get() != 1 {
        return Err(Error::SpecMismatch);
    }
    let stretch = |n: &LatticePoint| -> LatticePoint {
        LatticePoint::new(n.coords().iter().zip(&orders).map(|(a, m)| a * m).collect::<Vec<_>>())
    };
    let inv: Vec<Rational> = orders.iter().map(|&m| Rational::from_integer(1.into()) / Rational::from_integer(m.into())).collect();
    let zero = LatticePoint::zero(spec.rank());
    let mut out = GElement::zero(spec);
    for (r, u) in x.der.witt_terms() {
        let u2: Vec<CycNumber> = u.iter().zip(&inv).map(|(ui, k)| ui.scale(k)).collect();
        let img = phi(spec, &u2, &stretch(r), &zero)?;
        out = out.add(&GElement::from_der(img.der))?;
    }
    for (s, c) in x.torus.terms() {
        let s2 = stretch(s);
        let root = spec.sigma(&s2, &s2).sqrt_root()?;
        out = out.add(&GElement::from_torus(TorusElement::term(spec, s2, root * c)))?;
    }
    Ok(out)
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
    fn bracket_examples() {
        let s = inst_i();
        let u = ints(&[1, 4]);
        let n = LatticePoint::from([2, -1]);
        let d0 = GElement::from_der(DerElement::witt(&s, u.clone(), [0, 0].into()).unwrap());
        let tn = embed_c1(&s, n.clone());
        assert_eq!(d0.gbracket(&tn).unwrap(), tn.scale(&n.pair(&u)));
        assert!(tn.gbracket(&tn).unwrap().is_zero());
        let got = embed_c1(&s, [1, 0].into()).gbracket(&embed_c1(&s, [0, 1].into())).unwrap();
        assert_eq!(got, embed_c1(&s, [1, 1].into()).scale(&CycNumber::from_integer(2)));
    }

    #[test]
    fn embed_examples() {
        let s = inst_i();
        assert_eq!(embed_c1(&s, [0, 0].into()).torus, TorusElement::monomial(&s, [0, 0].into()));
        assert_eq!(embed_c2(&s, [0, 0].into()), embed_c1(&s, [0, 0].into()).neg());
        assert_eq!(embed_c2(&s, [2, 2].into()), embed_c1(&s, [2, 2].into()).neg());
        let x = embed_c2(&s, [1, 0].into());
        assert!(!x.der.is_zero() && !x.torus.is_zero());
    }

    #[test]
    fn copies_commute() {
        let s = inst_i();
        for m in [[1, 0], [0, 1], [1, 1], [2, 0]] {
            for n in [[1, 0], [-1, 1], [3, 2], [0, 2]] {
                let b = embed_c1(&s, m.into()).gbracket(&embed_c2(&s, n.into())).unwrap();
                assert!(b.is_zero(), "{m:?} {n:?}");
            }
        }
    }

    #[test]
    fn decompose_roundtrip() {
        let s = inst_i();
        let x = GElement {
            der: DerElement::ad(&s, [1, 0].into())
                .add(&DerElement::witt(&s, ints(&[1, 2]), [0, 2].into()).unwrap())
                .unwrap(),
            torus: TorusElement::monomial(&s, [1, 1].into()),
        };
        let parts = decompose(&x);
        assert_eq!(recompose(&s, &parts).unwrap(), x);
    }

    #[test]
    fn phi_examples() {
        let s = inst_i();
        let u = ints(&[1, -1]);
        let z = LatticePoint::zero(2);
        let got = phi(&s, &u, &z, &z).unwrap();
        let expect = CartanVector { u: u.clone(), c: CycNumber::one() }.to_element(&s).unwrap();
        assert_eq!(got, expect);
        let r = LatticePoint::from([2, 0]);
        assert!(s.sigma(&r, &r).is_one());
        let got = phi(&s, &u, &r, &z).unwrap();
        assert_eq!(got.der, DerElement::witt(&s, u.clone(), r.clone()).unwrap());
        assert_eq!(phi(&s, &u, &[1, 0].into(), &z).unwrap_err(), Error::NotInRadical(vec![1, 0]));
    }
}
