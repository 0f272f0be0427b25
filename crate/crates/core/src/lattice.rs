//! Integer lattice normal forms: row-style Hermite normal form with a tracked
//! unimodular transform, Smith invariant factors, kernels of `A x ≡ 0 (mod N)`.

pub type IntMatrix = Vec<Vec<i64>>;

/// Row Hermite normal form of `m`.
///
/// Returns `(h, u)` with `u · m = h`, `u` unimodular, `h` in row echelon form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h = m.clone();
    let mut u: IntMatrix = (0..rows)
        .map(|i| (0..rows).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        loop {
            let pivot = (row..rows)
                .filter(|&i| h[i][col] != 0)
                .min_by_key(|&i| h[i][col].unsigned_abs());
            let Some(p) = pivot else { break };
            h.swap(row, p);
            u.swap(row, p);
            let mut clean = true;
            for i in row + 1..rows {
                if h[i][col] != 0 {
                    let q = h[i][col] / h[row][col];
                    sub_row(&mut h, i, row, q);
                    sub_row(&mut u, i, row, q);
                    if h[i][col] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if h[row][col] == 0 {
            continue;
        }
        if h[row][col] < 0 {
            negate_row(&mut h, row);
            negate_row(&mut u, row);
        }
        let pivot = h[row][col];
        for i in 0..row {
            let q = h[i][col].div_euclid(pivot);
            if q != 0 {
                sub_row(&mut h, i, row, q);
                sub_row(&mut u, i, row, q);
            }
        }
        row += 1;
    }
    (h, u)
}

fn sub_row(m: &mut IntMatrix, target: usize, src: usize, q: i64) {
    let (a, b) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x -= q * y;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for x in m[r].iter_mut() {
        *x = -*x;
    }
}

/// Nonzero rows of the HNF of the lattice generated by `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_rows(gens);
    h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect()
}

/// Basis (in row HNF) of `{x ∈ Z^d : a · x ≡ 0 (mod n)}` for square `a`.
///
/// Reduces the stacked matrix `[aᵀ; n·I]`; rows of the transform that kill it
/// carry kernel vectors in their first `d` coordinates.
pub fn kernel_mod(a: &IntMatrix, n: i64) -> IntMatrix {
    let d = a.len();
    let mut stacked: IntMatrix = (0..d).map(|i| (0..d).map(|j| a[j][i]).collect()).collect();
    for i in 0..d {
        stacked.push((0..d).map(|j| if i == j { n } else { 0 }).collect());
    }
    let (h, u) = hermite_rows(&stacked);
    let gens: IntMatrix = h
        .iter()
        .zip(&u)
        .filter(|(hr, _)| hr.iter().all(|&x| x == 0))
        .map(|(_, ur)| ur[..d].to_vec())
        .collect();
    lattice_basis(&gens)
}

/// Whether `v` lies in the lattice spanned by an HNF basis.
pub fn hnf_contains(basis: &IntMatrix, v: &[i64]) -> bool {
    let mut rest = v.to_vec();
    for row in basis {
        let Some(col) = row.iter().position(|&x| x != 0) else { continue };
        if rest[col] % row[col] != 0 {
            return false;
        }
        let q = rest[col] / row[col];
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= q * y;
        }
    }
    rest.iter().all(|&x| x == 0)
}

/// Smith invariant factors `d_1 | d_2 | …` of an integer matrix (zeros trailing).
pub fn smith_invariants(m: &IntMatrix) -> Vec<i64> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let k = rows.min(cols);
    for t in 0..k {
        // move the smallest nonzero entry of the trailing block to (t, t)
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0
                        && best.is_none_or(|(bi, bj)| a[i][j].unsigned_abs() < a[bi][bj].unsigned_abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                let mut out: Vec<i64> = (0..t).map(|i| a[i][i]).collect();
                out.resize(k, 0);
                return out;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    sub_row(&mut a, i, t, q);
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility condition: fold any offending entry into row t
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            a[t][t] = -a[t][t];
        }
    }
    (0..k).map(|i| a[i][i]).collect()
}

/// Absolute determinant of a square full-rank basis, via Smith invariants.
pub fn lattice_index(basis: &IntMatrix) -> i64 {
    smith_invariants(basis).iter().product::<i64>().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_transform_is_consistent() {
        let m: IntMatrix = vec![vec![4, 6, 2], vec![2, 3, 5], vec![6, 9, 7], vec![0, 0, 3]];
        let (h, u) = hermite_rows(&m);
        for (i, urow) in u.iter().enumerate() {
            for j in 0..3 {
                let v: i64 = urow.iter().zip(&m).map(|(c, r)| c * r[j]).sum();
                assert_eq!(v, h[i][j]);
            }
        }
        // echelon shape with positive pivots
        let mut last = None;
        for row in &h {
            if let Some(c) = row.iter().position(|&x| x != 0) {
                assert!(row[c] > 0);
                assert!(last.is_none_or(|l| c > l));
                last = Some(c);
            }
        }
    }

    #[test]
    fn smith_of_diagonalish() {
        assert_eq!(smith_invariants(&vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_invariants(&vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_invariants(&vec![vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    #[test]
    fn kernel_mod_small() {
        // 2x ≡ 0 mod 6 in one variable
        assert_eq!(kernel_mod(&vec![vec![2]], 6), vec![vec![3]]);
        let basis = kernel_mod(&vec![vec![0, 1], vec![1, 0]], 2);
        assert_eq!(basis, vec![vec![2, 0], vec![0, 2]]);
        assert!(hnf_contains(&basis, &[4, -2]));
        assert!(!hnf_contains(&basis, &[1, 0]));
        assert_eq!(lattice_index(&basis), 4);
    }
}
