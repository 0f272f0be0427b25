use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Conductor, CycNumber};
use crate::error::{Error, Result};
use crate::torus::{LatticePoint, TorusSpec};

/// A multiplicative character `g(s) = ζ_M^{⟨k, s⟩}` of `Z^d`, trivial on `rad(f)`.
#[derive(Clone, Serialize, Deserialize)]
pub struct TwistCharacter {
    #[serde(rename = "M")]
    conductor: Conductor,
    k: Vec<i64>,
}

impl fmt::Debug for TwistCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistCharacter(M={}, k={:?})", self.conductor, self.k)
    }
}

impl fmt::Display for TwistCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k: Vec<String> = self.k.iter().map(i64::to_string).collect();
        write!(f, "zeta_{}^<({}),s>", self.conductor, k.join(","))
    }
}

impl PartialEq for TwistCharacter {
    /// Equality as functions on `Z^d`.
    fn eq(&self, other: &Self) -> bool {
        self.k.len() == other.k.len()
            && (0..self.k.len()).all(|i| {
                let e = LatticePoint::unit(self.k.len(), i);
                self.value(&e) == other.value(&e)
            })
    }
}

impl TwistCharacter {
    pub fn trivial(d: usize) -> Self {
        TwistCharacter { conductor: Conductor::ONE, k: vec![0; d] }
    }

    /// Builds the character, rejecting it unless `g(r) = 1` on a basis of `rad(f)`.
    pub fn new(spec: &TorusSpec, conductor: Conductor, k: Vec<i64>) -> Result<Self> {
        if k.len() != spec.rank() {
            return Err(Error::DimensionMismatch { expected: spec.rank(), got: k.len() });
        }
        let m = conductor.get() as i64;
        let k: Vec<i64> = k.into_iter().map(|x| x.rem_euclid(m)).collect();
        let g = TwistCharacter { conductor, k };
        for r in &spec.radical().basis {
            if g.exponent(r) != 0 {
                return Err(Error::NotCharacter(format!("{g} is {} at radical vector {r}", g.value(r))));
            }
        }
        Ok(g)
    }

    /// A character of `Z^d` with no constraint on the radical.
    pub fn of_lattice(conductor: Conductor, k: Vec<i64>) -> Self {
        let m = conductor.get() as i64;
        TwistCharacter { conductor, k: k.into_iter().map(|x| x.rem_euclid(m)).collect() }
    }

    /// `s ↦ f(s, γ)`, trivial on `rad(f)` for any `γ`.
    pub fn from_shift(spec: &TorusSpec, gamma: &LatticePoint) -> Self {
        let d = spec.rank();
        let k = (0..d).map(|i| spec.f_exp(&LatticePoint::unit(d, i), gamma)).collect();
        TwistCharacter::new(spec, spec.order(), k).expect("f(., γ) is trivial on the radical")
    }

    pub fn conductor(&self) -> Conductor {
        self.conductor
    }

    pub fn exponents(&self) -> &[i64] {
        &self.k
    }

    pub fn rank(&self) -> usize {
        self.k.len()
    }

    /// `⟨k, s⟩ mod M`.
    pub fn exponent(&self, s: &LatticePoint) -> i64 {
        let m = self.conductor.get() as i64;
        self.k.iter().zip(s.coords()).map(|(a, b)| a * b).sum::<i64>().rem_euclid(m)
    }

    pub fn value(&self, s: &LatticePoint) -> CycNumber {
        CycNumber::root_of_unity(self.conductor, self.exponent(s))
    }

    pub fn inverse(&self) -> Self {
        let m = self.conductor.get() as i64;
        TwistCharacter { conductor: self.conductor, k: self.k.iter().map(|x| (-x).rem_euclid(m)).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        let m = self.conductor.get() as i64;
        self.k.iter().all(|x| x.rem_euclid(m) == 0)
    }

    /// Same function over the smallest conductor.
    pub fn reduced(&self) -> Self {
        let m = self.conductor.get() as i64;
        let g = self.k.iter().fold(m, |g, &x| g.gcd(&x));
        TwistCharacter {
            conductor: Conductor::new((m / g) as u32).expect("positive"),
            k: self.k.iter().map(|x| x / g).collect(),
        }
    }

    /// Reads a character off its generator values `g(e_i)`, each a root of unity.
    pub fn from_generator_values(spec: &TorusSpec, values: &[CycNumber]) -> Result<Self> {
        let mut parts = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            let (m, k) = v
                .root_exponent()
                .ok_or_else(|| Error::NotCharacter(format!("g(e_{}) = {v} is not a root of unity", i + 1)))?;
            parts.push((m.get() as i64, k as i64));
        }
        let m = parts.iter().fold(1i64, |acc, (mi, _)| acc.lcm(mi));
        let k = parts.iter().map(|(mi, ki)| ki * (m / mi)).collect();
        Ok(TwistCharacter::new(spec, Conductor::new(m as u32).expect("positive"), k)?.reduced())
    }
}
