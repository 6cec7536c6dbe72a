//! Integer row reduction: Hermite echelon forms with unimodular transforms,
//! integer kernels and Smith invariant factors.
//!
//! Vectors are rows. A lattice is the row span of a matrix; the Hermite form
//! used throughout the crate is the row-echelon form in which every pivot is
//! positive and every entry above a pivot lies in `[0, pivot)`. Zero rows are
//! dropped from the canonical basis. Two row sets span the same lattice iff
//! their Hermite forms are identical.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Vector = Vec<BigInt>;
pub type Matrix = Vec<Vector>;

/// Result of [`echelon`].
#[derive(Clone, Debug)]
pub struct Echelon {
    /// All rows after reduction; the first `rank` are nonzero.
    pub rows: Matrix,
    pub pivots: Vec<usize>,
    /// `transform * original == rows`, unimodular. Present when requested.
    pub transform: Option<Matrix>,
    /// Inverse of `transform`.
    pub inverse: Option<Matrix>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows, i.e. the Hermite basis of the row span.
    pub fn basis(&self) -> Matrix {
        self.rows[..self.rank()].to_vec()
    }
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

struct Reducer {
    rows: Matrix,
    u: Option<Matrix>,
    uinv: Option<Matrix>,
}

impl Reducer {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.rows.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
        if let Some(v) = self.uinv.as_mut() {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q * row_j
    fn sub_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src = self.rows[j].clone();
        for (a, b) in self.rows[i].iter_mut().zip(src.iter()) {
            *a -= q * b;
        }
        if let Some(u) = self.u.as_mut() {
            let src = u[j].clone();
            for (a, b) in u[i].iter_mut().zip(src.iter()) {
                *a -= q * b;
            }
        }
        if let Some(v) = self.uinv.as_mut() {
            // inverse op on the right: column j += q * column i
            for row in v.iter_mut() {
                let add = q * &row[i];
                row[j] += add;
            }
        }
    }

    fn negate(&mut self, i: usize) {
        for a in self.rows[i].iter_mut() {
            *a = -&*a;
        }
        if let Some(u) = self.u.as_mut() {
            for a in u[i].iter_mut() {
                *a = -&*a;
            }
        }
        if let Some(v) = self.uinv.as_mut() {
            for row in v.iter_mut() {
                row[i] = -&row[i];
            }
        }
    }
}

/// Reduces `rows` (each of length `ncols`) to Hermite row-echelon form.
pub fn echelon(rows: &[Vector], ncols: usize, with_transform: bool) -> Echelon {
    let n = rows.len();
    let mut red = Reducer {
        rows: rows.to_vec(),
        u: with_transform.then(|| identity(n)),
        uinv: with_transform.then(|| identity(n)),
    };
    for row in &red.rows {
        assert_eq!(row.len(), ncols, "row length does not match column count");
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == n {
            break;
        }
        loop {
            // smallest nonzero entry in this column at or below r
            let best = (r..n)
                .filter(|&i| !red.rows[i][col].is_zero())
                .min_by(|&a, &b| red.rows[a][col].abs().cmp(&red.rows[b][col].abs()));
            let Some(best) = best else { break };
            red.swap(r, best);
            let mut done = true;
            for i in r + 1..n {
                if red.rows[i][col].is_zero() {
                    continue;
                }
                let q = red.rows[i][col].div_floor(&red.rows[r][col]);
                red.sub_mul(i, r, &q);
                if !red.rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if red.rows[r][col].is_zero() {
            continue;
        }
        if red.rows[r][col].is_negative() {
            red.negate(r);
        }
        for i in 0..r {
            let q = red.rows[i][col].div_floor(&red.rows[r][col]);
            red.sub_mul(i, r, &q);
        }
        pivots.push(col);
        r += 1;
    }
    Echelon { rows: red.rows, pivots, transform: red.u, inverse: red.uinv }
}

/// Hermite basis of the row span of `rows`.
pub fn hermite_basis(rows: &[Vector], ncols: usize) -> Matrix {
    echelon(rows, ncols, false).basis()
}

/// Basis of `{c : sum_i c_i rows_i = 0}`.
pub fn integer_kernel(rows: &[Vector], ncols: usize) -> Matrix {
    let e = echelon(rows, ncols, true);
    let u = e.transform.expect("transform requested");
    let k = e.pivots.len();
    hermite_basis(&u[k..], rows.len())
}

/// Coordinates of `v` in a Hermite basis, or `None` when `v` is outside the span.
pub fn coordinates(basis: &[Vector], v: &[BigInt]) -> Option<Vector> {
    let mut residual = v.to_vec();
    let mut coeffs = Vec::with_capacity(basis.len());
    for row in basis {
        let p = row.iter().position(|a| !a.is_zero())?;
        if residual[..p].iter().any(|a| !a.is_zero()) {
            return None;
        }
        let (q, rem) = residual[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return None;
        }
        for (a, b) in residual.iter_mut().zip(row) {
            *a -= &q * b;
        }
        coeffs.push(q);
    }
    residual.iter().all(Zero::is_zero).then_some(coeffs)
}

/// Transposes a matrix with `ncols` columns.
pub fn transpose(rows: &[Vector], ncols: usize) -> Matrix {
    (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Absolute determinant of a square matrix.
pub fn abs_det(rows: &[Vector]) -> BigInt {
    let n = rows.len();
    let e = echelon(rows, n, false);
    if e.rank() < n {
        return BigInt::zero();
    }
    (0..n).map(|i| e.rows[i][i].clone()).product()
}

/// Nonzero Smith invariant factors `d_1 | d_2 | ...` of a matrix, all positive.
pub fn smith_invariants(rows: &[Vector], ncols: usize) -> Vec<BigInt> {
    let mut m = rows.to_vec();
    let mut nc = ncols;
    // alternate row and column echelon passes until the matrix is diagonal
    loop {
        let e = echelon(&m, nc, false);
        m = e.basis();
        let t = transpose(&m, nc);
        let nr = m.len();
        let e2 = echelon(&t, nr, false);
        let b = e2.basis();
        let diagonal = b.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, a)| i == j || a.is_zero())
        });
        let square_diag = b.len() == nr && diagonal;
        m = b;
        nc = nr;
        if square_diag {
            break;
        }
    }
    let mut d: Vec<BigInt> = (0..m.len()).map(|i| m[i][i].abs()).filter(|a| !a.is_zero()).collect();
    // enforce the divisibility chain
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

pub fn to_big(v: &[i64]) -> Vector {
    v.iter().map(|&a| BigInt::from(a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| to_big(r)).collect()
    }

    #[test]
    fn hermite_of_diagonal_generators() {
        let a = hermite_basis(&m(&[&[2, 0], &[0, 3]]), 2);
        let b = hermite_basis(&m(&[&[2, 3], &[0, 3], &[2, 0]]), 2);
        assert_eq!(a, m(&[&[2, 0], &[0, 3]]));
        assert_eq!(a, b);
    }

    #[test]
    fn transform_and_inverse_are_consistent() {
        let rows = m(&[&[4, 6, 2], &[3, 9, 1], &[5, 15, 3], &[1, 1, 1]]);
        let e = echelon(&rows, 3, true);
        let u = e.transform.unwrap();
        let v = e.inverse.unwrap();
        let n = rows.len();
        for i in 0..n {
            for j in 0..n {
                let s: BigInt = (0..n).map(|k| &u[i][k] * &v[k][j]).sum();
                assert_eq!(s, BigInt::from((i == j) as i64));
            }
            for c in 0..3 {
                let s: BigInt = (0..n).map(|k| &u[i][k] * &rows[k][c]).sum();
                assert_eq!(s, e.rows[i][c]);
            }
        }
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let k = integer_kernel(&m(&[&[1, 2], &[2, 4], &[0, 1]]), 2);
        assert_eq!(k, m(&[&[2, -1, 0]]));
    }

    #[test]
    fn smith_of_relation_rows() {
        assert_eq!(smith_invariants(&m(&[&[2, -2]]), 2), to_big(&[2]));
        assert_eq!(smith_invariants(&m(&[&[4, 0], &[0, 6]]), 2), to_big(&[2, 12]));
        assert_eq!(smith_invariants(&m(&[&[8, 0, 0]]), 3), to_big(&[8]));
        assert!(smith_invariants(&[], 3).is_empty());
    }

    #[test]
    fn determinant_magnitude() {
        assert_eq!(abs_det(&m(&[&[1, 0], &[1, 5]])), BigInt::from(5));
        assert_eq!(abs_det(&m(&[&[2, 4], &[1, 2]])), BigInt::zero());
    }
}
