//! Exact linear algebra over Gaussian rationals.
//!
//! Everything here is plain Gauss–Jordan elimination with exact arithmetic;
//! reduced row-echelon form is unique, which makes every derived basis
//! canonical and platform-independent.

use num::{One, Zero};

use crate::scalar::GRat;

pub type Vector = Vec<GRat>;
pub type Matrix = Vec<Vector>;

/// Reduces `m` in place to reduced row-echelon form and returns the pivot
/// column of each pivot row.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pivot_row) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot_row);
        let inv = GRat::one() / m[row][col].clone();
        for c in col..cols {
            m[row][c] = m[row][c].clone() * inv.clone();
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let sub = factor.clone() * m[row][c].clone();
                    m[r][c] = m[r][c].clone() - sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of `{x : m x = 0}`. Each basis vector has a `1` at one free column
/// and zeros at the other free columns, so the basis is canonical.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vector> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![GRat::zero(); cols];
        v[fc] = GRat::one();
        for (prow, &pcol) in pivots.iter().enumerate() {
            v[pcol] = -work[prow][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Basis of `span(u) ∩ span(v)`, both given as lists of vectors of equal
/// dimension. Solves `Σ α_i u_i − Σ β_j v_j = 0` and returns the
/// `Σ α_i u_i` side of each solution.
pub fn intersect_spans(u: &[Vector], v: &[Vector], dim: usize) -> Vec<Vector> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let cols = u.len() + v.len();
    let mut m: Matrix = vec![vec![GRat::zero(); cols]; dim];
    for (i, ui) in u.iter().enumerate() {
        for (r, val) in ui.iter().enumerate() {
            m[r][i] = val.clone();
        }
    }
    for (j, vj) in v.iter().enumerate() {
        for (r, val) in vj.iter().enumerate() {
            m[r][u.len() + j] = -val.clone();
        }
    }
    let null = nullspace(&m, cols);
    let mut out = Vec::new();
    for sol in null {
        let mut w = vec![GRat::zero(); dim];
        for (i, ui) in u.iter().enumerate() {
            if sol[i].is_zero() {
                continue;
            }
            for (r, val) in ui.iter().enumerate() {
                w[r] = w[r].clone() + sol[i].clone() * val.clone();
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            out.push(w);
        }
    }
    canonical_basis(out)
}

/// RREF of a list of row vectors; drops zero rows. The result is the unique
/// canonical basis of their span under the given coordinate order.
pub fn canonical_basis(rows: Vec<Vector>) -> Vec<Vector> {
    if rows.is_empty() {
        return rows;
    }
    let mut m = rows;
    rref(&mut m);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::grat;

    fn g(v: i64) -> GRat {
        grat(v, 0, 1)
    }

    #[test]
    fn rref_and_rank() {
        let mut m = vec![
            vec![g(1), g(2), g(3)],
            vec![g(2), g(4), g(6)],
            vec![g(1), g(0), g(1)],
        ];
        assert_eq!(rank(&m), 2);
        let pivots = rref(&mut m);
        assert_eq!(pivots, vec![0, 1]);
        assert!(m[2].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn nullspace_solves() {
        let m = vec![vec![g(1), g(1), g(0)], vec![g(0), g(0), g(1)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        // x + y = 0, z = 0
        assert_eq!(v[0].clone() + v[1].clone(), GRat::zero());
        assert!(v[2].is_zero());
        assert!(!v[1].is_zero());
    }

    #[test]
    fn intersection_of_planes() {
        // span{e1, e2} ∩ span{e2, e3} = span{e2}
        let u = vec![vec![g(1), g(0), g(0)], vec![g(0), g(1), g(0)]];
        let v = vec![vec![g(0), g(1), g(0)], vec![g(0), g(0), g(1)]];
        let w = intersect_spans(&u, &v, 3);
        assert_eq!(w, vec![vec![g(0), g(1), g(0)]]);
    }

    #[test]
    fn disjoint_spans_intersect_trivially() {
        let u = vec![vec![g(1), g(0), g(0)]];
        let v = vec![vec![g(0), g(1), g(0)]];
        assert!(intersect_spans(&u, &v, 3).is_empty());
    }

    #[test]
    fn canonical_basis_is_rref() {
        let rows = vec![vec![g(2), g(2), g(0)], vec![g(1), g(0), g(1)]];
        let basis = canonical_basis(rows);
        assert_eq!(basis, vec![vec![g(1), g(0), g(1)], vec![g(0), g(1), g(-1)]]);
    }
}
