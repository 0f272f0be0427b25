//! Finite-dimensional `gl_d`-modules given by explicit matrices for the units `E_ij`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cyclotomic::{parse_rational, CycNumber};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanBasis};
use crate::torus::LatticePoint;

/// A vector in a module, in the module's basis.
pub type WeightSpaceVector = Vec<CycNumber>;

#[derive(Clone, PartialEq)]
pub struct GlModule {
    d: usize,
    dim: usize,
    e: Vec<Matrix>,
    label: String,
}

impl fmt::Debug for GlModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GlModule({}, d={}, dim={})", self.label, self.d, self.dim)
    }
}

impl GlModule {
    /// Wraps explicit matrices (`e[i * d + j]` acts as `E_ij`), checking the
    /// commutation relations exactly.
    pub fn new(d: usize, e: Vec<Matrix>, label: impl Into<String>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidModule("rank must be positive".into()));
        }
        if e.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, got: e.len() });
        }
        let dim = e[0].rows();
        if dim == 0 {
            return Err(Error::InvalidModule("module must be nonzero".into()));
        }
        for m in &e {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.rows().max(m.cols()) });
            }
        }
        let module = GlModule { d, dim, e, label: label.into() };
        if let Some((i, j, k, l)) = module.relation_defect() {
            return Err(Error::InvalidModule(format!(
                "[E{i}{j}, E{k}{l}] violates the gl relations",
                i = i + 1,
                j = j + 1,
                k = k + 1,
                l = l + 1
            )));
        }
        Ok(module)
    }

    fn unchecked(d: usize, e: Vec<Matrix>, label: String) -> Self {
        let dim = e[0].rows();
        let m = GlModule { d, dim, e, label };
        debug_assert!(m.relation_defect().is_none(), "{}", m.label);
        m
    }

    pub fn natural(d: usize) -> Self {
        let e = (0..d * d).map(|k| Matrix::unit(d, k / d, k % d)).collect();
        Self::unchecked(d, e, "natural".into())
    }

    /// The one-dimensional module on which every `E_ij` acts by 0.
    pub fn trivial(d: usize) -> Self {
        Self::unchecked(d, vec![Matrix::zeros(1, 1); d * d], "trivial".into())
    }

    /// `E_ij ↦ -E_ij(base)^T`.
    pub fn dual(base: &GlModule) -> Self {
        let e = base.e.iter().map(|m| m.transpose().scale(&CycNumber::from_integer(-1))).collect();
        Self::unchecked(base.d, e, wrap("dual", &base.label, "natural"))
    }

    /// `Sym^k(base)` on the basis of sorted monomials in lexicographic order.
    pub fn sym_power(base: &GlModule, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadPower { power: k, dim: base.dim });
        }
        let basis = multisets(base.dim, k);
        let e = base.e.iter().map(|x| derivation_matrix(x, &basis, false)).collect();
        Ok(Self::unchecked(base.d, e, wrap(&format!("sym:{k}"), &base.label, "natural")))
    }

    /// `Λ^k(base)` on the basis of increasing wedges in lexicographic order.
    pub fn ext_power(base: &GlModule, k: usize) -> Result<Self> {
        if k == 0 || k > base.dim {
            return Err(Error::BadPower { power: k, dim: base.dim });
        }
        let basis = subsets(base.dim, k);
        let e = base.e.iter().map(|x| derivation_matrix(x, &basis, true)).collect();
        Ok(Self::unchecked(base.d, e, wrap(&format!("ext:{k}"), &base.label, "natural")))
    }

    /// `E_ij ↦ E_ij(base) + c δ_ij Id`.
    pub fn trace_twist(base: &GlModule, c: &CycNumber) -> Self {
        let id = Matrix::scalar(base.dim, c);
        let e = base
            .e
            .iter()
            .enumerate()
            .map(|(k, m)| if k / base.d == k % base.d { m.add(&id) } else { m.clone() })
            .collect();
        Self::unchecked(base.d, e, format!("twist:{}:{}", c, base.label))
    }

    /// Block-diagonal sum; reducible whenever both summands are nonzero.
    pub fn direct_sum(a: &GlModule, b: &GlModule) -> Result<Self> {
        if a.d != b.d {
            return Err(Error::DimensionMismatch { expected: a.d, got: b.d });
        }
        let n = a.dim + b.dim;
        let e = a
            .e
            .iter()
            .zip(&b.e)
            .map(|(x, y)| {
                let mut m = Matrix::zeros(n, n);
                for i in 0..a.dim {
                    for j in 0..a.dim {
                        m.set(i, j, x.get(i, j).clone());
                    }
                }
                for i in 0..b.dim {
                    for j in 0..b.dim {
                        m.set(a.dim + i, a.dim + j, y.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        Ok(Self::unchecked(a.d, e, format!("{}+{}", a.label, b.label)))
    }

    /// Parses a selector such as `natural`, `dual`, `sym:2`, `ext:2:dual`,
    /// `twist:1/2:natural`, `trivial` or `natural+trivial`.
    pub fn from_selector(d: usize, sel: &str) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidModule("rank must be positive".into()));
        }
        let sel = sel.trim();
        if let Some((a, b)) = sel.split_once('+') {
            return Self::direct_sum(&Self::from_selector(d, a)?, &Self::from_selector(d, b)?);
        }
        let bad = || Error::Parse(format!("unknown module selector {sel:?}"));
        let base = |rest: Option<&str>| match rest {
            None => Ok(Self::natural(d)),
            Some(r) => Self::from_selector(d, r),
        };
        let mut parts = sel.splitn(2, ':');
        let head = parts.next().unwrap_or_default();
        let rest = parts.next();
        match head {
            "natural" if rest.is_none() => Ok(Self::natural(d)),
            "trivial" if rest.is_none() => Ok(Self::trivial(d)),
            "dual" => Ok(Self::dual(&base(rest)?)),
            "sym" | "ext" => {
                let rest = rest.ok_or_else(bad)?;
                let (k, tail) = match rest.split_once(':') {
                    Some((k, t)) => (k, Some(t)),
                    None => (rest, None),
                };
                let k: usize = k.parse().map_err(|_| bad())?;
                let b = base(tail)?;
                if head == "sym" {
                    Self::sym_power(&b, k)
                } else {
                    Self::ext_power(&b, k)
                }
            }
            "twist" => {
                let (c, tail) = rest.and_then(|r| r.split_once(':')).ok_or_else(bad)?;
                let c = CycNumber::from_rational(parse_rational(c).map_err(|_| bad())?);
                Ok(Self::trace_twist(&Self::from_selector(d, tail)?, &c))
            }
            _ => Err(bad()),
        }
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The matrix of `E_ij` (0-based).
    pub fn e(&self, i: usize, j: usize) -> &Matrix {
        &self.e[i * self.d + j]
    }

    /// `Σ B_ij E_ij`.
    pub fn matrix_of(&self, b: &Matrix) -> Matrix {
        assert_eq!((b.rows(), b.cols()), (self.d, self.d));
        let mut out = Matrix::zeros(self.dim, self.dim);
        for i in 0..self.d {
            for j in 0..self.d {
                out.add_scaled(self.e(i, j), b.get(i, j));
            }
        }
        out
    }

    /// `Σ r_i u_j E_ij`, the image of the rank-one matrix `r u^T`.
    pub fn outer(&self, r: &LatticePoint, u: &[CycNumber]) -> Matrix {
        assert_eq!(r.dim(), self.d);
        assert_eq!(u.len(), self.d);
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (i, &ri) in r.coords().iter().enumerate() {
            if ri == 0 {
                continue;
            }
            for (j, uj) in u.iter().enumerate() {
                out.add_scaled(self.e(i, j), &uj.scale_int(ri));
            }
        }
        out
    }

    /// First index quadruple whose bracket relation fails.
    pub fn relation_defect(&self) -> Option<(usize, usize, usize, usize)> {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let lhs = self.e(i, j).commutator(self.e(k, l));
                        let mut rhs = Matrix::zeros(self.dim, self.dim);
                        if j == k {
                            rhs = rhs.add(self.e(i, l));
                        }
                        if l == i {
                            rhs = rhs.sub(self.e(k, j));
                        }
                        if lhs != rhs {
                            return Some((i, j, k, l));
                        }
                    }
                }
            }
        }
        None
    }

    /// Subspace generated from `w` by repeated application of the `E_ij`.
    pub fn cyclic_span(&self, w: &[CycNumber]) -> SpanBasis {
        let mut span = SpanBasis::new(self.dim);
        let mut queue: Vec<Vec<CycNumber>> = span.insert(w.to_vec()).into_iter().collect();
        while let Some(v) = queue.pop() {
            for m in &self.e {
                if let Some(row) = span.insert(m.apply(&v)) {
                    queue.push(row);
                }
            }
            if span.is_full() {
                break;
            }
        }
        span
    }

    /// Every basis vector generates the whole module.
    pub fn basis_vectors_cyclic(&self) -> bool {
        (0..self.dim).all(|i| {
            let mut w = vec![CycNumber::zero(); self.dim];
            w[i] = CycNumber::one();
            self.cyclic_span(&w).is_full()
        })
    }

    /// Absolute irreducibility: the associative algebra generated by the
    /// `E_ij` and the identity is all of `End(V)`.
    ///
    /// Cyclicity of the basis vectors alone is implied but not sufficient, so
    /// it is used only as a fast rejection.
    pub fn check_irreducible(&self) -> bool {
        if !self.basis_vectors_cyclic() {
            return false;
        }
        let n = self.dim;
        let mut span = SpanBasis::new(n * n);
        let mut queue = Vec::new();
        if span.insert(Matrix::identity(n).entries().to_vec()).is_some() {
            queue.push(Matrix::identity(n));
        }
        while let Some(x) = queue.pop() {
            for g in &self.e {
                let y = g.mul(&x);
                if span.insert(y.entries().to_vec()).is_some() {
                    queue.push(y);
                }
            }
            if span.is_full() {
                return true;
            }
        }
        span.is_full()
    }
}

impl FromStr for GlModule {
    type Err = Error;

    /// `"<d>/<selector>"`, e.g. `"3/sym:2"`.
    fn from_str(s: &str) -> Result<Self> {
        let (d, sel) = s.split_once('/').ok_or_else(|| Error::Parse(format!("expected <d>/<selector>, got {s:?}")))?;
        let d = d.trim().parse().map_err(|_| Error::Parse(format!("bad rank in {s:?}")))?;
        Self::from_selector(d, sel)
    }
}

fn wrap(op: &str, base: &str, default: &str) -> String {
    if base == default {
        op.to_string()
    } else {
        format!("{op}:{base}")
    }
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    multisets(n, k).into_iter().filter(|s| s.windows(2).all(|w| w[0] < w[1])).collect()
}

/// Action of `x` extended as a derivation to monomials (`wedge = false`) or
/// wedges (`wedge = true`) indexed by `basis`.
fn derivation_matrix(x: &Matrix, basis: &[Vec<usize>], wedge: bool) -> Matrix {
    let index: BTreeMap<&[usize], usize> = basis.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
    let mut out = Matrix::zeros(basis.len(), basis.len());
    for (col, b) in basis.iter().enumerate() {
        for p in 0..b.len() {
            for l in 0..x.rows() {
                let c = x.get(l, b[p]);
                if c.is_zero() {
                    continue;
                }
                let mut t = b.clone();
                t[p] = l;
                let mut sign = 1i64;
                if wedge {
                    if t.iter().enumerate().any(|(q, &v)| q != p && v == l) {
                        continue;
                    }
                    // parity of the sorting permutation
                    for a in 0..t.len() {
                        for bb in a + 1..t.len() {
                            if t[a] > t[bb] {
                                sign = -sign;
                            }
                        }
                    }
                }
                t.sort_unstable();
                let row = index[t.as_slice()];
                let v = out.get(row, col) + &c.scale_int(sign);
                out.set(row, col, v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[i64]) -> Matrix {
        let mut m = Matrix::zeros(v.len(), v.len());
        for (i, &x) in v.iter().enumerate() {
            m.set(i, i, CycNumber::from_integer(x));
        }
        m
    }

    #[test]
    fn natural_units() {
        let m = GlModule::natural(2);
        assert_eq!(m.e(0, 0), &diag(&[1, 0]));
        assert_eq!(m.matrix_of(&Matrix::identity(2)), Matrix::identity(2));
        assert!(m.matrix_of(&Matrix::zeros(2, 2)).is_zero());
    }

    #[test]
    fn sym_square() {
        let m = GlModule::sym_power(&GlModule::natural(2), 2).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.e(0, 0), &diag(&[2, 1, 0]));
        // x ∂_y: y² ↦ 2xy, xy ↦ x²
        let raise = Matrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 2], &[0, 0, 0]]);
        assert_eq!(m.matrix_of(&Matrix::unit(2, 0, 1)), raise);
    }

    #[test]
    fn top_wedge() {
        let m = GlModule::ext_power(&GlModule::natural(3), 3).unwrap();
        assert_eq!(m.dim(), 1);
        for i in 0..3 {
            assert_eq!(m.e(i, i), &Matrix::identity(1));
        }
        assert_eq!(
            GlModule::ext_power(&GlModule::natural(2), 3).unwrap_err(),
            Error::BadPower { power: 3, dim: 2 }
        );
    }

    #[test]
    fn selectors() {
        for (d, sel, dim) in [
            (2, "natural", 2),
            (3, "dual", 3),
            (3, "sym:2", 6),
            (4, "ext:2", 6),
            (2, "trivial", 1),
            (2, "twist:1/2:natural", 2),
            (3, "ext:2:dual", 3),
            (2, "natural+trivial", 3),
        ] {
            let m = GlModule::from_selector(d, sel).unwrap();
            assert_eq!(m.dim(), dim, "{sel}");
            assert!(m.relation_defect().is_none(), "{sel}");
        }
        assert!(GlModule::from_selector(2, "bogus").is_err());
        assert!(GlModule::from_selector(2, "sym:x").is_err());
        let m: GlModule = "3/sym:2".parse().unwrap();
        assert_eq!(m.label(), "sym:2");
    }

    #[test]
    fn irreducibility_examples() {
        assert!(GlModule::natural(3).check_irreducible());
        assert!(GlModule::trivial(2).check_irreducible());
        let two = GlModule::direct_sum(&GlModule::natural(2), &GlModule::natural(2)).unwrap();
        assert!(!two.check_irreducible());
    }

    #[test]
    fn rejects_bad_relations() {
        let e = vec![Matrix::identity(2); 4];
        assert!(matches!(GlModule::new(2, e, "x"), Err(Error::InvalidModule(_))));
    }
}
