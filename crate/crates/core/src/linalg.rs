//! Exact linear algebra: constant rational matrices (elimination with a
//! deterministic pivot order) and polynomial matrices whose determinant is a
//! nonzero constant.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{Poly, Rational};
use crate::tensor::PolyTensor;

/// Row-major constant matrix.
pub type QMatrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> QMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

/// Reduced row echelon form; returns the pivot columns.
/// Pivots are taken at the leftmost column with the topmost nonzero entry.
pub fn rref(m: &mut QMatrix, ncols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix, ncols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, ncols).len()
}

/// Basis (as vectors) of `{v : m v = 0}`.
pub fn nullspace(m: &QMatrix, ncols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Columns of `cols` (each a vector of length n) as a matrix with n rows.
pub fn columns_to_matrix(cols: &[Vec<Rational>], n: usize) -> QMatrix {
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Transpose of a constant matrix.
pub fn transpose(m: &QMatrix, ncols: usize) -> QMatrix {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Extends the column span of `basis` to all of Q^n with standard vectors,
/// taken in increasing order; returns only the added vectors.
pub fn complement(basis: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut current: Vec<Vec<Rational>> = basis.to_vec();
    let mut added = Vec::new();
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        current.push(e.clone());
        let m = columns_to_matrix(&current, n);
        if rank(&m, current.len()) == current.len() {
            added.push(e);
        } else {
            current.pop();
        }
    }
    added
}

/// A left inverse `L` (k × n) of a full column rank n × k matrix given by columns.
pub fn left_inverse(cols: &[Vec<Rational>], n: usize) -> Result<QMatrix> {
    let k = cols.len();
    // Solve via [A | I] elimination on the transpose problem: L = (AᵀA)⁻¹Aᵀ is
    // representation dependent; instead pick pivot rows of A and invert them.
    let a = columns_to_matrix(cols, n);
    let at = transpose(&a, k);
    let mut tmp = at.clone();
    let pivots = rref(&mut tmp, n);
    if pivots.len() != k {
        return Err(Error::Precondition("inclusion matrix is not of full column rank".into()));
    }
    // square submatrix S = rows `pivots` of A
    let s: QMatrix = pivots.iter().map(|&r| a[r].clone()).collect();
    let sinv = invert_q(&s, k)?;
    let mut l = vec![vec![Rational::zero(); n]; k];
    for i in 0..k {
        for (jj, &r) in pivots.iter().enumerate() {
            l[i][r] = sinv[i][jj].clone();
        }
    }
    Ok(l)
}

pub fn invert_q(m: &QMatrix, n: usize) -> Result<QMatrix> {
    let mut aug: QMatrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let piv = rref(&mut aug, n);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &p)| i != p) {
        return Err(Error::Singular("constant matrix is singular".into()));
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant of a square polynomial matrix (subset dynamic programming).
pub fn det(m: &PolyTensor) -> Poly {
    let n = m.dims()[0];
    assert_eq!(m.dims(), &[n, n], "det of a non-square matrix");
    let nv = m.nvars();
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    fn go(m: &PolyTensor, row: usize, used: u32, n: usize, nv: usize, memo: &mut HashMap<u32, Poly>) -> Poly {
        if row == n {
            return Poly::one(nv);
        }
        if let Some(p) = memo.get(&used) {
            return p.clone();
        }
        let mut acc = Poly::zero(nv);
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            let e = m.get(&[row, c]);
            if e.is_zero() {
                continue;
            }
            // sign: number of used columns greater than c (inversions)
            let inv = (used >> (c + 1)).count_ones();
            let sub = go(m, row + 1, used | (1 << c), n, nv, memo);
            let t = e * &sub;
            if inv.is_multiple_of(2) {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        memo.insert(used, acc.clone());
        acc
    }
    go(m, 0, 0, n, nv, &mut memo)
}

fn minor(m: &PolyTensor, skip_r: usize, skip_c: usize) -> PolyTensor {
    let n = m.dims()[0];
    let mut out = PolyTensor::matrix(m.nvars(), n - 1, n - 1);
    for (i2, i) in (0..n).filter(|&i| i != skip_r).enumerate() {
        for (j2, j) in (0..n).filter(|&j| j != skip_c).enumerate() {
            out.set(&[i2, j2], m.get(&[i, j]).clone()).unwrap();
        }
    }
    out
}

/// Inverse of a polynomial matrix with nonzero constant determinant.
pub fn inverse(m: &PolyTensor) -> Result<PolyTensor> {
    let n = m.dims()[0];
    let d = det(m);
    let c = d.as_constant().filter(|c| !c.is_zero()).ok_or_else(|| {
        Error::Singular(format!("determinant {d} is not a nonzero constant"))
    })?;
    let inv_c = Rational::one() / c;
    let mut out = PolyTensor::matrix(m.nvars(), n, n);
    for i in 0..n {
        for j in 0..n {
            let cof = det(&minor(m, j, i)).scale(&inv_c);
            let v = if (i + j) % 2 == 0 { cof } else { -cof };
            out.set(&[i, j], v).unwrap();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;

    #[test]
    fn nullspace_and_complement() {
        let m = vec![vec![int(1), int(1), int(0)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m[0][0] * &v[0] + &m[0][1] * &v[1] + &m[0][2] * &v[2]).is_zero());
        }
        let comp = complement(&ns, 3);
        assert_eq!(comp.len(), 1);
    }

    #[test]
    fn polynomial_inverse() {
        let nv = 1;
        let x = Poly::var(nv, 0);
        let mut m = PolyTensor::matrix(nv, 2, 2);
        m.set(&[0, 0], Poly::one(nv)).unwrap();
        m.set(&[0, 1], x.clone()).unwrap();
        m.set(&[1, 1], Poly::int(nv, 2)).unwrap();
        assert_eq!(det(&m), Poly::int(nv, 2));
        let inv = inverse(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Poly::zero(nv);
                for k in 0..2 {
                    s += &(m.get(&[i, k]) * inv.get(&[k, j]));
                }
                assert_eq!(s, if i == j { Poly::one(nv) } else { Poly::zero(nv) });
            }
        }
        let mut sing = PolyTensor::matrix(nv, 1, 1);
        sing.set(&[0, 0], x).unwrap();
        assert!(inverse(&sing).is_err());
    }

    #[test]
    fn left_inverse_of_inclusion() {
        let cols = vec![vec![int(1), int(1), int(0)], vec![int(0), int(0), int(2)]];
        let l = left_inverse(&cols, 3).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s: Rational = (0..3).map(|k| &l[i][k] * &cols[j][k]).sum();
                assert_eq!(s, if i == j { int(1) } else { int(0) });
            }
        }
    }
}
