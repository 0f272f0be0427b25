//! The quantum torus matrix `q`, its cocycle `σ`, commutator function `f`, and
//! the radical lattice `rad(f)`.
//!
//! The matrix is stored as integer exponents: `q_ij = ζ_N^{A[i][j]}`. With that
//! encoding `σ(n, m) = ζ_N^{Σ_{i<j} A[j][i] n_j m_i}` and `f(n, m) = ζ_N^{nᵀ A m}`,
//! so every scalar here is a root of unity and `rad(f)` is the integer kernel of
//! `A` modulo `N`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cyclotomic::{Conductor, CycNumber};
use crate::error::{Error, Result};
use crate::lattice;

/// A point of `Z^d`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(SmallVec<[i64; 4]>);

impl LatticePoint {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        LatticePoint(SmallVec::from_vec(coords.into()))
    }

    pub fn zero(d: usize) -> Self {
        LatticePoint(SmallVec::from_elem(0, d))
    }

    /// The unit vector `e_i` (0-based index).
    pub fn unit(d: usize, i: usize) -> Self {
        let mut p = Self::zero(d);
        p.0[i] = 1;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticePoint(self.0.iter().map(|x| x * k).collect())
    }

    /// Max-norm.
    pub fn norm_inf(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// The pairing `(u, n) = Σ u_i n_i` with a scalar vector.
    pub fn pair(&self, u: &[CycNumber]) -> CycNumber {
        let mut acc = CycNumber::zero();
        for (x, ui) in self.0.iter().zip(u) {
            if *x != 0 && !ui.is_zero() {
                acc += &ui.scale_int(*x);
            }
        }
        acc
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint::new(v)
    }
}

impl<const K: usize> From<[i64; K]> for LatticePoint {
    fn from(v: [i64; K]) -> Self {
        LatticePoint::new(v.to_vec())
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }
}

/// Basis data for `rad(f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalBasis {
    /// Row-HNF basis of the radical lattice.
    pub basis: Vec<LatticePoint>,
    /// Minimal `m_i > 0` with `m_i e_i ∈ rad(f)`.
    pub axis_orders: Vec<i64>,
    /// `axis_orders` when `rad(f) = ⊕ m_i Z e_i`, absent otherwise.
    pub diagonal_orders: Option<Vec<i64>>,
    /// `[Z^d : rad(f)]`.
    pub index: i64,
}

impl RadicalBasis {
    pub fn is_diagonal(&self) -> bool {
        self.diagonal_orders.is_some()
    }

    pub fn contains(&self, n: &LatticePoint) -> bool {
        let rows: Vec<Vec<i64>> = self.basis.iter().map(|b| b.coords().to_vec()).collect();
        lattice::hnf_contains(&rows, n.coords())
    }
}

/// A validated quantum torus matrix of rank `d`, all entries `N`-th roots of unity.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "TorusSpecWire", into = "TorusSpecWire")]
pub struct TorusSpec {
    d: usize,
    n: Conductor,
    a: Vec<Vec<i64>>,
    corrupt_sigma: bool,
    roots: Vec<CycNumber>,
    radical: OnceLock<RadicalBasis>,
}

#[derive(Serialize, Deserialize)]
struct TorusSpecWire {
    d: usize,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
}

impl TryFrom<TorusSpecWire> for TorusSpec {
    type Error = Error;
    fn try_from(w: TorusSpecWire) -> Result<Self> {
        let n = Conductor::new(w.n).ok_or_else(|| Error::InvalidSpec("N must be positive".into()))?;
        TorusSpec::new(w.d, n, w.a)
    }
}

impl From<TorusSpec> for TorusSpecWire {
    fn from(s: TorusSpec) -> Self {
        TorusSpecWire { d: s.d, n: s.n.get(), a: s.a }
    }
}

impl PartialEq for TorusSpec {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.n == other.n && self.a == other.a && self.corrupt_sigma == other.corrupt_sigma
    }
}

impl Eq for TorusSpec {}

impl fmt::Debug for TorusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusSpec {{ d: {}, N: {}, A: {:?} }}", self.d, self.n, self.a)
    }
}

impl TorusSpec {
    /// Validates `A[i][i] ≡ 0` and `A[i][j] + A[j][i] ≡ 0 (mod N)`; stores entries in `[0, N)`.
    pub fn new(d: usize, n: Conductor, a: Vec<Vec<i64>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpec("rank must be at least 1".into()));
        }
        if a.len() != d || a.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidSpec(format!("A must be {d}x{d}")));
        }
        let nn = n.get() as i64;
        let a: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|x| x.rem_euclid(nn)).collect()).collect();
        for i in 0..d {
            if a[i][i] != 0 {
                return Err(Error::InvalidSpec(format!("A[{i}][{i}] must be 0 mod N")));
            }
            for j in 0..d {
                if (a[i][j] + a[j][i]) % nn != 0 {
                    return Err(Error::InvalidSpec(format!(
                        "A is not skew mod N at ({i},{j}): {} + {} != 0 mod {nn}",
                        a[i][j], a[j][i]
                    )));
                }
            }
        }
        let roots = (0..nn).map(|k| CycNumber::root_of_unity(n, k)).collect();
        Ok(TorusSpec { d, n, a, corrupt_sigma: false, roots, radical: OnceLock::new() })
    }

    /// Rank-`d` torus with two generators related by `t_i t_j = ζ_N^{a_ij} t_j t_i`
    /// for each listed `(i, j, a_ij)` with `i < j` (0-based); other pairs commute.
    pub fn from_upper(d: usize, n: u32, entries: &[(usize, usize, i64)]) -> Result<Self> {
        let mut a = vec![vec![0i64; d]; d];
        for &(i, j, v) in entries {
            if i >= d || j >= d {
                return Err(Error::InvalidSpec(format!("index ({i},{j}) out of range")));
            }
            a[i][j] = v;
            a[j][i] = -v;
        }
        let n = Conductor::new(n).ok_or_else(|| Error::InvalidSpec("N must be positive".into()))?;
        TorusSpec::new(d, n, a)
    }

    /// The commutative Laurent polynomial ring in `d` variables.
    pub fn trivial(d: usize) -> Self {
        TorusSpec::new(d, Conductor::ONE, vec![vec![0; d]; d]).expect("zero matrix is valid")
    }

    /// Test fixture: a `σ` that breaks the bicharacter law.
    #[doc(hidden)]
    pub fn with_corrupted_sigma(mut self) -> Self {
        self.corrupt_sigma = true;
        self.radical = OnceLock::new();
        self
    }

    pub fn is_corrupted(&self) -> bool {
        self.corrupt_sigma
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> Conductor {
        self.n
    }

    pub fn exponents(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// `ζ_N^k`.
    pub fn root(&self, k: i64) -> &CycNumber {
        &self.roots[k.rem_euclid(self.n.get() as i64) as usize]
    }

    /// `q_ij` (0-based indices).
    pub fn q(&self, i: usize, j: usize) -> &CycNumber {
        self.root(self.a[i][j])
    }

    /// Exponent of `σ(n, m)` in `[0, N)`.
    pub fn sigma_exp(&self, n: &LatticePoint, m: &LatticePoint) -> i64 {
        let (nc, mc) = (n.coords(), m.coords());
        let mut e = 0i64;
        for j in 1..self.d {
            if nc[j] == 0 {
                continue;
            }
            for i in 0..j {
                e += self.a[j][i] * nc[j] * mc[i];
            }
        }
        if self.corrupt_sigma && nc[0] > 0 && mc[0] > 0 {
            e += 1;
        }
        e.rem_euclid(self.n.get() as i64)
    }

    pub fn sigma(&self, n: &LatticePoint, m: &LatticePoint) -> CycNumber {
        self.root(self.sigma_exp(n, m)).clone()
    }

    /// Exponent of `f(n, m) = σ(n, m) σ(m, n)^{-1}`.
    pub fn f_exp(&self, n: &LatticePoint, m: &LatticePoint) -> i64 {
        (self.sigma_exp(n, m) - self.sigma_exp(m, n)).rem_euclid(self.n.get() as i64)
    }

    pub fn f_val(&self, n: &LatticePoint, m: &LatticePoint) -> CycNumber {
        self.root(self.f_exp(n, m)).clone()
    }

    /// `A · n ≡ 0 (mod N)`.
    pub fn in_radical(&self, n: &LatticePoint) -> bool {
        let nn = self.n.get() as i64;
        self.a
            .iter()
            .all(|row| row.iter().zip(n.coords()).map(|(a, x)| a * x).sum::<i64>().rem_euclid(nn) == 0)
    }

    /// Kernel lattice of `A` mod `N`, with the diagonal-form check.
    pub fn radical(&self) -> &RadicalBasis {
        self.radical.get_or_init(|| self.compute_radical())
    }

    fn compute_radical(&self) -> RadicalBasis {
        let nn = self.n.get() as i64;
        let rows = lattice::kernel_mod(&self.a, nn);
        let index = lattice::lattice_index(&rows);
        let axis_orders: Vec<i64> = (0..self.d)
            .map(|i| {
                let g = self.a.iter().fold(nn, |g, row| gcd(g, row[i]));
                nn / g
            })
            .collect();
        let diagonal_orders =
            (axis_orders.iter().product::<i64>() == index).then(|| axis_orders.clone());
        if diagonal_orders.is_none() {
            log::debug!("radical of {self:?} is not diagonal in the given coordinates");
        }
        RadicalBasis {
            basis: rows.into_iter().map(LatticePoint::new).collect(),
            axis_orders,
            diagonal_orders,
            index,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> LatticePoint {
        LatticePoint::new(v.to_vec())
    }

    fn inst_i() -> TorusSpec {
        TorusSpec::from_upper(2, 2, &[(0, 1, 1)]).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let s = inst_i();
        assert!(s.sigma(&p(&[3, -2]), &p(&[0, 0])).is_one());
        assert_eq!(s.sigma(&p(&[0, 1]), &p(&[1, 0])), CycNumber::from_integer(-1));
        assert!(s.sigma(&p(&[1, 0]), &p(&[0, 1])).is_one());
    }

    #[test]
    fn f_examples() {
        let s = TorusSpec::from_upper(3, 4, &[(0, 1, 1), (0, 2, 2)]).unwrap();
        let n = p(&[1, -3, 2]);
        let m = p(&[2, 5, -1]);
        assert!(s.f_val(&n, &n).is_one());
        assert!(s.f_val(&n, &(-&n)).is_one());
        assert!((s.f_val(&n, &m) * s.f_val(&m, &n)).is_one());
        assert_eq!(inst_i().f_val(&p(&[1, 0]), &p(&[0, 1])), CycNumber::from_integer(-1));
    }

    #[test]
    fn f_is_the_skew_form() {
        let s = TorusSpec::from_upper(3, 5, &[(0, 1, 2), (1, 2, 3), (0, 2, 4)]).unwrap();
        let n = p(&[2, -1, 3]);
        let m = p(&[-1, 4, 1]);
        let a = s.exponents();
        let mut e = 0;
        for i in 0..3 {
            for j in 0..3 {
                e += n.coords()[i] * a[i][j] * m.coords()[j];
            }
        }
        assert_eq!(s.f_exp(&n, &m), e.rem_euclid(5));
    }

    #[test]
    fn validation_rejects_non_skew() {
        let n = Conductor::new(3).unwrap();
        assert!(TorusSpec::new(2, n, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(TorusSpec::new(2, n, vec![vec![1, 1], vec![2, 0]]).is_err());
        assert!(TorusSpec::new(2, n, vec![vec![0, 1], vec![2, 0]]).is_ok());
        assert!(TorusSpec::new(2, n, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn radical_examples() {
        let r = TorusSpec::trivial(3).radical().clone();
        assert_eq!(r.diagonal_orders, Some(vec![1, 1, 1]));
        assert_eq!(r.index, 1);

        let r = inst_i().radical().clone();
        assert_eq!(r.diagonal_orders, Some(vec![2, 2]));
        assert_eq!(r.basis, vec![p(&[2, 0]), p(&[0, 2])]);

        let r = TorusSpec::from_upper(2, 6, &[(0, 1, 2)]).unwrap().radical().clone();
        assert_eq!(r.diagonal_orders, Some(vec![3, 3]));
        assert_eq!(r.index, 9);
    }

    #[test]
    fn in_radical_examples() {
        let s = inst_i();
        assert!(s.in_radical(&p(&[0, 0])));
        assert!(!s.in_radical(&p(&[1, 0])));
        assert!(s.in_radical(&p(&[2, 0])));
    }

    #[test]
    fn non_diagonal_radical_is_reported() {
        // n1 ≡ 0 (mod 4) and n2 + 2 n3 ≡ 0 (mod 4): index 16, axis orders (4, 4, 2)
        let s = TorusSpec::from_upper(3, 4, &[(0, 1, 1), (0, 2, 2)]).unwrap();
        let r = s.radical();
        assert_eq!(r.axis_orders, vec![4, 4, 2]);
        assert_eq!(r.index, 16);
        assert!(r.diagonal_orders.is_none());
        assert!(r.contains(&p(&[0, 2, 1])));
        assert!(!r.contains(&p(&[0, 0, 1])));
    }

    #[test]
    fn serde_roundtrip_and_validation() {
        let s: TorusSpec = serde_json::from_str(r#"{"d":2,"N":2,"A":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(s, inst_i());
        assert!(serde_json::from_str::<TorusSpec>(r#"{"d":2,"N":3,"A":[[0,1],[1,0]]}"#).is_err());
        let back = serde_json::to_string(&s).unwrap();
        assert_eq!(back, r#"{"d":2,"N":2,"A":[[0,1],[1,0]]}"#);
    }
}
