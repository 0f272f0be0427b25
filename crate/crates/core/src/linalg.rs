//! Dense matrices over [`CycNumber`] and incremental span bookkeeping.

use std::fmt;

use crate::cyclotomic::CycNumber;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<CycNumber>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![CycNumber::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &CycNumber::one())
    }

    pub fn scalar(n: usize, c: &CycNumber) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// The matrix unit with a single 1 at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, CycNumber::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycNumber>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| CycNumber::from_integer(x)).collect()).collect())
    }

    /// Builds a matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(n: usize, cols: &[Vec<CycNumber>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[CycNumber] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNumber::is_zero)
    }

    /// `Some(c)` if this is `c · Id`.
    pub fn as_scalar(&self) -> Option<CycNumber> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(CycNumber::zero());
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                let ok = if i == j { *x == c } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &CycNumber) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn add_scaled(&mut self, other: &Matrix, k: &CycNumber) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if k.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += &(b * k);
            }
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// `[self, other] = self·other - other·self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn apply(&self, v: &[CycNumber]) -> Vec<CycNumber> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = CycNumber::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<CycNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut span = SpanBasis::new(self.cols);
        for i in 0..self.rows {
            span.insert(self.data[i * self.cols..(i + 1) * self.cols].to_vec());
        }
        span.len()
    }

    /// A basis of `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<CycNumber>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![CycNumber::zero(); self.cols];
                x[f] = CycNumber::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -rref.get(r, f);
                }
                x
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }
}

/// An echelonized spanning set that grows one vector at a time.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    dim: usize,
    rows: Vec<(usize, Vec<CycNumber>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        SpanBasis { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, mut v: Vec<CycNumber>) -> Vec<CycNumber> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycNumber]) -> bool {
        self.reduce(v.to_vec()).iter().all(CycNumber::is_zero)
    }

    /// Adds `v`; returns the normalized new row if it was independent.
    pub fn insert(&mut self, v: Vec<CycNumber>) -> Option<Vec<CycNumber>> {
        debug_assert_eq!(v.len(), self.dim);
        let v = self.reduce(v);
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = v[p].inv().expect("nonzero");
        let v: Vec<CycNumber> = v.iter().map(|x| x * &inv).collect();
        self.rows.push((p, v.clone()));
        Some(v)
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vec<CycNumber>> {
        self.rows.iter().map(|(_, v)| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<CycNumber> {
        v.iter().map(|&x| CycNumber::from_integer(x)).collect()
    }

    #[test]
    fn multiply_and_commute() {
        let a = Matrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let b = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_int_rows(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.commutator(&b), Matrix::from_int_rows(&[&[-1, -3], &[3, 1]]));
        assert_eq!(a.apply(&ints(&[1, -1])), ints(&[-1, -1]));
    }

    #[test]
    fn rank_and_nullspace() {
        let a = Matrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.apply(&ns[0]).iter().all(CycNumber::is_zero));
    }

    #[test]
    fn span_growth() {
        let mut s = SpanBasis::new(3);
        assert!(s.insert(ints(&[1, 1, 0])).is_some());
        assert!(s.insert(ints(&[2, 2, 0])).is_none());
        assert!(s.insert(ints(&[0, 1, 1])).is_some());
        assert!(s.contains(&ints(&[1, 2, 1])));
        assert!(!s.contains(&ints(&[0, 0, 1])));
        assert!(s.insert(ints(&[0, 0, 5])).is_some());
        assert!(s.is_full());
    }

    #[test]
    fn scalar_detection() {
        assert_eq!(Matrix::scalar(3, &CycNumber::from_integer(4)).as_scalar(), Some(CycNumber::from_integer(4)));
        assert_eq!(Matrix::unit(2, 0, 0).as_scalar(), None);
    }
}
