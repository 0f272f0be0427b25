//! Exact arithmetic in cyclotomic fields `Q(ζ_M)`.
//!
//! A [`CycNumber`] is stored in the power basis `1, ζ, …, ζ^{φ(M)-1}` of
//! `Q[x]/Φ_M(x)`, always fully reduced, so two numbers of the same conductor
//! are equal exactly when their coefficient vectors are. Numbers of different
//! conductors are lifted to the lcm of the two before they are combined or
//! compared.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Order `M` of the ambient group of roots of unity, `M >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Conductor(u32);

impl Conductor {
    pub const ONE: Conductor = Conductor(1);

    pub fn new(m: u32) -> Option<Self> {
        (m >= 1).then_some(Conductor(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn lcm(self, other: Conductor) -> Conductor {
        Conductor(self.0.lcm(&other.0))
    }

    pub fn divides(self, other: Conductor) -> bool {
        other.0 % self.0 == 0
    }
}

impl TryFrom<u32> for Conductor {
    type Error = String;
    fn try_from(m: u32) -> std::result::Result<Self, String> {
        Conductor::new(m).ok_or_else(|| "conductor must be positive".to_string())
    }
}

impl From<Conductor> for u32 {
    fn from(c: Conductor) -> u32 {
        c.0
    }
}

impl fmt::Display for Conductor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Precomputed data for one conductor.
struct Field {
    m: u32,
    phi: usize,
    /// Φ_M, lowest degree first, monic of degree `phi`.
    cyclo: Vec<i64>,
    /// `x^k mod Φ_M` for `0 <= k < M`.
    powers: Vec<Vec<i64>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.m)
    }
}

fn field_registry() -> &'static RwLock<HashMap<u32, Arc<Field>>> {
    static REGISTRY: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    REGISTRY.get_or_init(Default::default)
}

fn field(m: u32) -> Arc<Field> {
    if let Some(f) = field_registry().read().unwrap().get(&m) {
        return f.clone();
    }
    let built = Arc::new(Field::build(m));
    field_registry()
        .write()
        .unwrap()
        .entry(m)
        .or_insert(built)
        .clone()
}

/// Integer coefficients of the `m`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    fn go(m: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
        if let Some(p) = memo.get(&m) {
            return p.clone();
        }
        // x^m - 1 divided by every Φ_d with d | m, d < m.
        let mut num = vec![0i64; m as usize + 1];
        num[0] = -1;
        num[m as usize] = 1;
        for d in (1..m).filter(|d| m % d == 0) {
            let den = go(d, memo);
            num = exact_div_monic(&num, &den);
        }
        memo.insert(m, num.clone());
        num
    }
    go(m, &mut HashMap::new())
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

impl Field {
    fn build(m: u32) -> Field {
        let cyclo = cyclotomic_polynomial(m);
        let phi = cyclo.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce the degree-phi overflow
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..phi {
                    cur[j] -= top * cyclo[j];
                }
            }
        }
        Field { m, phi, cyclo, powers }
    }

    /// Reduce a polynomial of arbitrary degree modulo Φ_M.
    fn reduce(&self, poly: Vec<Rational>) -> Vec<Rational> {
        if poly.len() <= self.phi {
            let mut out = poly;
            out.resize(self.phi, Rational::zero());
            return out;
        }
        let mut out = vec![Rational::zero(); self.phi];
        for (k, c) in poly.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.phi {
                out[k] += c;
            } else {
                let row = &self.powers[k % self.m as usize];
                for (o, &r) in out.iter_mut().zip(row) {
                    if r != 0 {
                        *o += &c * Rational::from_integer(BigInt::from(r));
                    }
                }
            }
        }
        out
    }
}

/// An exact element of `Q(ζ_M)`.
#[derive(Clone)]
pub struct CycNumber {
    field: Arc<Field>,
    coeffs: Vec<Rational>,
}

impl CycNumber {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: Rational) -> Self {
        CycNumber { field: field(1), coeffs: vec![q] }
    }

    /// Builds a number from power-basis coefficients of any length, reducing mod Φ_M.
    pub fn from_coeffs(m: Conductor, coeffs: Vec<Rational>) -> Self {
        let field = field(m.0);
        let coeffs = field.reduce(coeffs);
        CycNumber { field, coeffs }
    }

    /// `ζ_M^k`, with `k` taken mod `M`.
    pub fn root_of_unity(m: Conductor, k: i64) -> Self {
        let field = field(m.0);
        let idx = k.rem_euclid(m.0 as i64) as usize;
        let coeffs = field.powers[idx]
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        CycNumber { field, coeffs }
    }

    /// Shorthand for [`CycNumber::root_of_unity`]; panics if `m == 0`.
    pub fn zeta(m: u32, k: i64) -> Self {
        Self::root_of_unity(Conductor::new(m).expect("conductor must be positive"), k)
    }

    pub fn conductor(&self) -> Conductor {
        Conductor(self.field.m)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this number lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.to_rational()
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_i64())
    }

    /// The same field element expressed in `Q(ζ_{M'})`.
    pub fn lift(&self, target: Conductor) -> Result<CycNumber> {
        if !self.conductor().divides(target) {
            return Err(Error::NotDivisible { from: self.field.m, to: target.0 });
        }
        Ok(self.lift_to(target))
    }

    fn lift_to(&self, target: Conductor) -> CycNumber {
        if target.0 == self.field.m {
            return self.clone();
        }
        let step = (target.0 / self.field.m) as usize;
        let mut poly = vec![Rational::zero(); (self.field.phi - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        CycNumber::from_coeffs(target, poly)
    }

    fn aligned<'a>(
        a: &'a CycNumber,
        b: &'a CycNumber,
    ) -> (std::borrow::Cow<'a, CycNumber>, std::borrow::Cow<'a, CycNumber>) {
        use std::borrow::Cow;
        if a.field.m == b.field.m {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let m = a.conductor().lcm(b.conductor());
        let la = if a.field.m == m.0 { Cow::Borrowed(a) } else { Cow::Owned(a.lift_to(m)) };
        let lb = if b.field.m == m.0 { Cow::Borrowed(b) } else { Cow::Owned(b.lift_to(m)) };
        (la, lb)
    }

    pub fn scale(&self, q: &Rational) -> CycNumber {
        CycNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> CycNumber {
        if n == 1 {
            return self.clone();
        }
        let q = Rational::from_integer(BigInt::from(n));
        self.scale(&q)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_M.
    pub fn inv(&self) -> Result<CycNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(k) = self.as_root_exponent() {
            return Ok(CycNumber::root_of_unity(self.conductor(), -(k as i64)));
        }
        let modulus: Vec<Rational> = self
            .field
            .cyclo
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let inv = poly::inverse_mod(&self.coeffs, &modulus);
        Ok(CycNumber::from_coeffs(self.conductor(), inv))
    }

    pub fn pow(&self, e: i64) -> Result<CycNumber> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNumber::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Returns `k` with `self = ζ_M^k` (M the stored conductor), if one exists.
    pub fn as_root_exponent(&self) -> Option<u32> {
        let one = BigInt::one();
        // cheap filter: roots of unity have integer coordinates
        if self.coeffs.iter().any(|c| !c.denom().is_one() || c.numer().abs() > one) {
            return None;
        }
        self.field.powers.iter().position(|row| {
            row.iter()
                .zip(&self.coeffs)
                .all(|(&r, c)| c.numer() == &BigInt::from(r))
        })
        .map(|k| k as u32)
    }

    /// `(M', k)` with `self = ζ_{M'}^k`, where `M'` is the stored conductor or,
    /// for odd conductors, its double.
    pub fn root_exponent(&self) -> Option<(Conductor, u32)> {
        if let Some(k) = self.as_root_exponent() {
            return Some((self.conductor(), k));
        }
        if self.field.m % 2 == 1 {
            let m2 = Conductor(2 * self.field.m);
            return self.lift_to(m2).as_root_exponent().map(|k| (m2, k));
        }
        None
    }

    /// Canonical square root of a root of unity: `√(ζ_M^k) = ζ_{2M}^k` with `0 <= k < M`.
    ///
    /// For odd `M` the number may only be a root of unity of order `2M` (e.g. `-1`
    /// stored at conductor 3); it is then rewritten over `2M` first.
    pub fn sqrt_root(&self) -> Result<CycNumber> {
        let (m, k) = self.root_exponent().ok_or(Error::NotRootOfUnity)?;
        Ok(CycNumber::root_of_unity(Conductor(2 * m.0), k as i64))
    }

    /// Lowers the stored conductor to the smallest divisor that still contains this
    /// value. Arithmetic never needs this; it keeps serialized output short.
    pub fn normalized(&self) -> CycNumber {
        let m = self.field.m;
        if self.to_rational().is_some() {
            return CycNumber::from_rational(self.coeffs[0].clone());
        }
        for d in (1..m).filter(|d| m % d == 0) {
            // ζ_d = ζ_m^(m/d): a value lies in Q(ζ_d) iff it is spanned by those powers
            let step = (m / d) as usize;
            let sub = field(d);
            let images: Vec<CycNumber> =
                (0..sub.phi).map(|j| CycNumber::root_of_unity(Conductor(m), (j * step) as i64)).collect();
            if let Some(coeffs) = solve_in_span(&images, self) {
                return CycNumber::from_coeffs(Conductor(d), coeffs);
            }
        }
        self.clone()
    }
}

/// Solves `Σ c_j images[j] = target` for rational `c_j`, if possible.
fn solve_in_span(images: &[CycNumber], target: &CycNumber) -> Option<Vec<Rational>> {
    let rows = target.coeffs.len();
    let cols = images.len();
    // augmented matrix: columns are image coordinates, last column the target
    let mut mat: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = images.iter().map(|im| im.coeffs[i].clone()).collect();
            row.push(target.coeffs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else { continue };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..=cols {
                    let t = &f * &mat[r][j];
                    mat[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if mat[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = mat[i][cols].clone();
    }
    Some(sol)
}

mod poly {
    use super::Rational;
    use num_traits::Zero;

    fn trim(p: &mut Vec<Rational>) {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    fn is_zero(p: &[Rational]) -> bool {
        p.iter().all(Zero::is_zero)
    }

    fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        if rem.len() < b.len() {
            return (vec![Rational::zero()], rem);
        }
        let lead_inv = b[db].recip();
        let mut quot = vec![Rational::zero(); rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + db] * &lead_inv;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    rem[i + j] -= &c * bj;
                }
            }
            quot[i] = c;
        }
        rem.truncate(db.max(1));
        trim(&mut rem);
        (quot, rem)
    }

    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(&mut out);
        out
    }

    /// Inverse of `a` modulo the irreducible `modulus`; `a` must be nonzero mod it.
    pub(super) fn inverse_mod(a: &[Rational], modulus: &[Rational]) -> Vec<Rational> {
        let mut r0 = modulus.to_vec();
        let mut r1 = a.to_vec();
        trim(&mut r1);
        let mut s0 = vec![Rational::zero()];
        let mut s1 = vec![Rational::from_integer(1.into())];
        while !is_zero(&r1) {
            let (q, r) = divrem(&r0, &r1);
            let s2 = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant
        let c = r0[0].recip();
        s0.iter().map(|x| x * &c).collect()
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = CycNumber::aligned(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

impl Default for CycNumber {
    fn default() -> Self {
        CycNumber::zero()
    }
}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &'a CycNumber) -> CycNumber {
        let (a, b) = CycNumber::aligned(self, rhs);
        CycNumber {
            field: a.field.clone(),
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &'a CycNumber) -> CycNumber {
        let (a, b) = CycNumber::aligned(self, rhs);
        CycNumber {
            field: a.field.clone(),
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &'a CycNumber) -> CycNumber {
        let (a, b) = CycNumber::aligned(self, rhs);
        let phi = a.field.phi;
        if phi == 1 {
            return CycNumber { field: a.field.clone(), coeffs: vec![&a.coeffs[0] * &b.coeffs[0]] };
        }
        let mut prod = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CycNumber { field: a.field.clone(), coeffs: a.field.reduce(prod) }
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(mut self) -> CycNumber {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &'a CycNumber) -> CycNumber {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        if self.field.m == rhs.field.m {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycNumber> for CycNumber {
    fn sub_assign(&mut self, rhs: &CycNumber) {
        if self.field.m == rhs.field.m {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl std::iter::Sum for CycNumber {
    fn sum<I: Iterator<Item = CycNumber>>(iter: I) -> CycNumber {
        iter.fold(CycNumber::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl From<i64> for CycNumber {
    fn from(n: i64) -> Self {
        CycNumber::from_integer(n)
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let m = self.field.m;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    write!(f, "z{m}")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber[M={}]({})", self.field.m, self)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Parses `p/q`, `p` or `zeta:M:k` text forms.
impl FromStr for CycNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("zeta:") {
            let (m, k) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected zeta:M:k, got {s:?}")))?;
            let m: u32 = m.parse().map_err(|_| Error::Parse(format!("bad conductor in {s:?}")))?;
            let k: i64 = k.parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            let m = Conductor::new(m).ok_or_else(|| Error::Parse("conductor must be positive".into()))?;
            return Ok(CycNumber::root_of_unity(m, k));
        }
        parse_rational(s).map(CycNumber::from_rational)
    }
}

#[derive(Serialize)]
struct CycWire<'a> {
    #[serde(rename = "M")]
    m: u32,
    coeffs: Vec<String>,
    #[serde(skip)]
    _p: std::marker::PhantomData<&'a ()>,
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycWire {
            m: self.field.m,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            _p: std::marker::PhantomData,
        }
        .serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CycInput {
    Int(i64),
    Text(String),
    Zeta {
        zeta: (u32, i64),
    },
    Full {
        #[serde(rename = "M")]
        m: u32,
        coeffs: Vec<String>,
    },
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match CycInput::deserialize(d)? {
            CycInput::Int(n) => Ok(CycNumber::from_integer(n)),
            CycInput::Text(s) => s.parse().map_err(D::Error::custom),
            CycInput::Zeta { zeta: (m, k) } => {
                let m = Conductor::new(m).ok_or_else(|| D::Error::custom("conductor must be positive"))?;
                Ok(CycNumber::root_of_unity(m, k))
            }
            CycInput::Full { m, coeffs } => {
                let m = Conductor::new(m).ok_or_else(|| D::Error::custom("conductor must be positive"))?;
                let coeffs = coeffs
                    .iter()
                    .map(|c| parse_rational(c))
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                if coeffs.is_empty() {
                    return Ok(CycNumber::from_coeffs(m, vec![Rational::zero()]));
                }
                Ok(CycNumber::from_coeffs(m, coeffs))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32, k: i64) -> CycNumber {
        CycNumber::zeta(m, k)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        // first polynomial with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(z(4, 2), CycNumber::from_integer(-1));
        assert_eq!(z(1, 0), CycNumber::one());
        assert_eq!(z(3, 1) + z(3, 2), CycNumber::from_integer(-1));
        assert_eq!(z(5, 7), z(5, 2));
        assert_eq!(z(5, -1), z(5, 4));
    }

    #[test]
    fn arith_examples() {
        assert_eq!(z(6, 1) * z(6, 5), CycNumber::one());
        assert!((z(4, 1) + z(4, 3)).is_zero());
        assert_eq!(z(8, 2) * z(8, 2), CycNumber::from_integer(-1));
    }

    #[test]
    fn invert_examples() {
        for m in 1..13u32 {
            for k in 0..m as i64 {
                assert_eq!(z(m, k).inv().unwrap(), z(m, m as i64 - k));
            }
        }
        assert_eq!(CycNumber::one().inv().unwrap(), CycNumber::one());
        assert_eq!(
            CycNumber::from_integer(2).inv().unwrap(),
            CycNumber::from_rational(q(1, 2))
        );
        assert_eq!(CycNumber::zero().inv(), Err(Error::DivisionByZero));
        // a non-unit element goes through the Euclidean path
        let x = CycNumber::from_integer(2) + z(5, 1) + z(5, 3).scale(&q(1, 3));
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn lift_examples() {
        let minus_one = CycNumber::from_coeffs(Conductor(2), vec![q(-1, 1)]);
        assert_eq!(minus_one.conductor(), Conductor(2));
        let lifted = minus_one.lift(Conductor(4)).unwrap();
        assert_eq!(lifted.conductor(), Conductor(4));
        assert_eq!(lifted.coeffs(), z(4, 2).coeffs());
        assert_eq!(CycNumber::one().lift(Conductor(9)).unwrap(), CycNumber::one());
        let l = z(3, 1).lift(Conductor(6)).unwrap();
        assert_eq!(l.coeffs(), z(6, 2).coeffs());
        assert_eq!(z(4, 1).lift(Conductor(6)), Err(Error::NotDivisible { from: 4, to: 6 }));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(CycNumber::one().sqrt_root().unwrap(), CycNumber::one());
        let minus_one = CycNumber::from_coeffs(Conductor(2), vec![q(-1, 1)]);
        let s = minus_one.sqrt_root().unwrap();
        assert_eq!(s.conductor(), Conductor(4));
        assert_eq!(s, z(4, 1));
        assert_eq!(z(3, 1).sqrt_root().unwrap(), z(6, 1));
        assert_eq!(
            CycNumber::from_integer(2).sqrt_root(),
            Err(Error::NotRootOfUnity)
        );
        // -1 written at odd conductor
        let m1 = CycNumber::from_integer(-1).lift(Conductor(3)).unwrap();
        let s = m1.sqrt_root().unwrap();
        assert_eq!(&s * &s, CycNumber::from_integer(-1));
    }

    #[test]
    fn root_exponent_examples() {
        assert_eq!(CycNumber::from_integer(-1).lift(Conductor(4)).unwrap().as_root_exponent(), Some(2));
        assert_eq!(CycNumber::from_integer(2).as_root_exponent(), None);
        assert_eq!(z(6, 5).as_root_exponent(), Some(5));
        assert_eq!((z(5, 1) + z(5, 2)).as_root_exponent(), None);
    }

    #[test]
    fn mixed_conductors_lift_to_lcm() {
        let s = z(4, 1) + z(3, 1);
        assert_eq!(s.conductor(), Conductor(12));
        assert_eq!(z(4, 1) * z(6, 1), z(12, 5));
    }

    #[test]
    fn normalized_lowers_conductor() {
        let x = z(3, 1).lift(Conductor(12)).unwrap();
        assert_eq!(x.normalized().conductor(), Conductor(3));
        assert_eq!(z(12, 4).normalized().conductor(), Conductor(3));
        assert_eq!(z(12, 6).normalized().conductor(), Conductor(1));
        assert_eq!(z(12, 1).normalized().conductor(), Conductor(12));
    }

    #[test]
    fn serde_forms() {
        let x = z(4, 3).scale(&q(1, 2)) + CycNumber::from_integer(3);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"M":4,"coeffs":["3","-1/2"]}"#);
        let back: CycNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let zeta: CycNumber = serde_json::from_str(r#"{"zeta":[6,5]}"#).unwrap();
        assert_eq!(zeta, z(6, 5));
        let n: CycNumber = serde_json::from_str("7").unwrap();
        assert_eq!(n, CycNumber::from_integer(7));
        let r: CycNumber = serde_json::from_str(r#""-2/3""#).unwrap();
        assert_eq!(r, CycNumber::from_rational(q(-2, 3)));
        let t: CycNumber = "zeta:8:3".parse().unwrap();
        assert_eq!(t, z(8, 3));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(z(4, 1).to_string(), "z4");
        assert_eq!((CycNumber::from_integer(2) - z(3, 1).scale_int(3)).to_string(), "2 - 3*z3");
        assert_eq!(CycNumber::zero().to_string(), "0");
    }
}
