//! Elements of the quantum torus `C_q` as finite `Z^d`-graded sums.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::torus::{LatticePoint, TorusSpec};

pub(crate) fn same_spec(a: &Arc<TorusSpec>, b: &Arc<TorusSpec>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::SpecMismatch)
    }
}

/// Adds `c` at key `k`, dropping the entry if it cancels to zero.
pub(crate) fn accumulate(map: &mut BTreeMap<LatticePoint, CycNumber>, k: LatticePoint, c: CycNumber) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// A finite sum `Σ c_n t^n` in `C_q`.
#[derive(Clone, Debug)]
pub struct TorusElement {
    spec: Arc<TorusSpec>,
    terms: BTreeMap<LatticePoint, CycNumber>,
}

#[derive(Serialize, Deserialize)]
pub struct TermWire {
    pub n: LatticePoint,
    pub c: CycNumber,
}

impl TorusElement {
    pub fn zero(spec: &Arc<TorusSpec>) -> Self {
        TorusElement { spec: spec.clone(), terms: BTreeMap::new() }
    }

    /// The monomial `t^n`.
    pub fn monomial(spec: &Arc<TorusSpec>, n: LatticePoint) -> Self {
        Self::term(spec, n, CycNumber::one())
    }

    pub fn term(spec: &Arc<TorusSpec>, n: LatticePoint, c: CycNumber) -> Self {
        let mut e = Self::zero(spec);
        accumulate(&mut e.terms, n, c);
        e
    }

    pub fn from_terms(spec: &Arc<TorusSpec>, terms: impl IntoIterator<Item = (LatticePoint, CycNumber)>) -> Self {
        let mut e = Self::zero(spec);
        for (n, c) in terms {
            accumulate(&mut e.terms, n, c);
        }
        e
    }

    pub fn spec(&self) -> &Arc<TorusSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &CycNumber)> {
        self.terms.iter()
    }

    pub fn coeff(&self, n: &LatticePoint) -> CycNumber {
        self.terms.get(n).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticePoint> {
        self.terms.keys()
    }

    pub fn add(&self, other: &TorusElement) -> Result<TorusElement> {
        same_spec(&self.spec, &other.spec)?;
        let mut out = self.clone();
        for (n, c) in &other.terms {
            accumulate(&mut out.terms, n.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TorusElement) -> Result<TorusElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TorusElement {
        TorusElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(n, c)| (n.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &CycNumber) -> TorusElement {
        TorusElement::from_terms(&self.spec, self.terms.iter().map(|(n, c)| (n.clone(), c * k)))
    }

    /// Twisted product, bilinear in the monomial rule `t^n t^m = σ(n, m) t^{n+m}`.
    pub fn tmul(&self, other: &TorusElement) -> Result<TorusElement> {
        same_spec(&self.spec, &other.spec)?;
        let spec = &self.spec;
        let mut out = BTreeMap::new();
        for (n, a) in &self.terms {
            for (m, b) in &other.terms {
                let c = spec.root(spec.sigma_exp(n, m)) * &(a * b);
                accumulate(&mut out, n + m, c);
            }
        }
        Ok(TorusElement { spec: spec.clone(), terms: out })
    }

    /// `[a, b] = ab - ba`; on monomials `(σ(n, m) - σ(m, n)) t^{n+m}`.
    pub fn tcomm(&self, other: &TorusElement) -> Result<TorusElement> {
        same_spec(&self.spec, &other.spec)?;
        let spec = &self.spec;
        let mut out = BTreeMap::new();
        for (n, a) in &self.terms {
            for (m, b) in &other.terms {
                let (e1, e2) = (spec.sigma_exp(n, m), spec.sigma_exp(m, n));
                if e1 == e2 {
                    continue;
                }
                let c = (spec.root(e1) - spec.root(e2)) * (a * b);
                accumulate(&mut out, n + m, c);
            }
        }
        Ok(TorusElement { spec: spec.clone(), terms: out })
    }

    /// Central iff the whole support lies in `rad(f)`.
    pub fn is_central(&self) -> bool {
        self.terms.keys().all(|n| self.spec.in_radical(n))
    }

    /// Central-ness by brute force: commutes with every `t^{±e_i}`.
    pub fn commutes_with_generators(&self) -> bool {
        let d = self.spec.rank();
        (0..d).all(|i| {
            [1, -1].iter().all(|&s| {
                let g = TorusElement::monomial(&self.spec, LatticePoint::unit(d, i).scale(s));
                self.tcomm(&g).expect("same spec").is_zero()
            })
        })
    }

    pub fn to_wire(&self) -> Vec<TermWire> {
        self.terms
            .iter()
            .map(|(n, c)| TermWire { n: n.clone(), c: c.normalized() })
            .collect()
    }

    pub fn from_wire(spec: &Arc<TorusSpec>, wire: Vec<TermWire>) -> Result<Self> {
        for t in &wire {
            if t.n.dim() != spec.rank() {
                return Err(Error::DimensionMismatch { expected: spec.rank(), got: t.n.dim() });
            }
        }
        Ok(TorusElement::from_terms(spec, wire.into_iter().map(|t| (t.n, t.c))))
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec && self.terms == other.terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst_i() -> Arc<TorusSpec> {
        Arc::new(TorusSpec::from_upper(2, 2, &[(0, 1, 1)]).unwrap())
    }

    fn t(spec: &Arc<TorusSpec>, v: [i64; 2]) -> TorusElement {
        TorusElement::monomial(spec, v.into())
    }

    #[test]
    fn unit_is_identity() {
        let s = inst_i();
        let x = t(&s, [1, 2]).add(&t(&s, [-1, 0]).scale(&CycNumber::from_integer(3))).unwrap();
        assert_eq!(t(&s, [0, 0]).tmul(&x).unwrap(), x);
        assert_eq!(x.tmul(&t(&s, [0, 0])).unwrap(), x);
    }

    #[test]
    fn defining_relation() {
        let s = inst_i();
        assert_eq!(t(&s, [1, 0]).tmul(&t(&s, [0, 1])).unwrap(), t(&s, [1, 1]));
        assert_eq!(t(&s, [0, 1]).tmul(&t(&s, [1, 0])).unwrap(), t(&s, [1, 1]).neg());
    }

    #[test]
    fn inverse_monomial() {
        let s = inst_i();
        let n = LatticePoint::from([1, 1]);
        let prod = t(&s, [1, 1]).tmul(&t(&s, [-1, -1])).unwrap();
        // σ((1,1), (-1,-1)) = q21^{1·(-1)} = -1
        assert_eq!(s.sigma(&n, &(-&n)), CycNumber::from_integer(-1));
        assert_eq!(prod, TorusElement::term(&s, [0, 0].into(), s.sigma(&n, &(-&n))));
    }

    #[test]
    fn commutator_examples() {
        let s = inst_i();
        assert!(t(&s, [1, 1]).tcomm(&t(&s, [1, 1])).unwrap().is_zero());
        assert!(t(&s, [2, 0]).tcomm(&t(&s, [1, 1])).unwrap().is_zero());
        assert_eq!(
            t(&s, [1, 0]).tcomm(&t(&s, [0, 1])).unwrap(),
            t(&s, [1, 1]).scale(&CycNumber::from_integer(2))
        );
    }

    #[test]
    fn central_examples() {
        let s = inst_i();
        for (v, expect) in [([0, 0], true), ([2, 0], true), ([1, 0], false), ([2, -4], true), ([1, 1], false)] {
            let x = t(&s, v);
            assert_eq!(x.is_central(), expect, "{v:?}");
            assert_eq!(x.commutes_with_generators(), expect, "{v:?}");
        }
    }

    #[test]
    fn spec_mismatch() {
        let a = t(&inst_i(), [1, 0]);
        let other = Arc::new(TorusSpec::from_upper(2, 3, &[(0, 1, 1)]).unwrap());
        let b = t(&other, [1, 0]);
        assert_eq!(a.tmul(&b).unwrap_err(), Error::SpecMismatch);
    }
}
