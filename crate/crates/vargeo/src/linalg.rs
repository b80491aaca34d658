//! Exact Gaussian elimination: rank, kernels, solves, span operations.

use crate::rat::{dot, zeros, Rat, RatMat, RatVec};
use num_traits::Zero;

/// Reduced row echelon form in place; returns the pivot column of each
/// pivot row (rows beyond the returned length are zero).
pub fn rref_in_place(m: &mut RatMat) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let p = match (r..m.rows).find(|&i| !m[(i, c)].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
        }
        let piv = m[(r, c)].clone();
        for j in c..m.cols {
            let t = &m[(r, j)] / &piv;
            m[(r, j)] = t;
        }
        for i in 0..m.rows {
            if i != r && !m[(i, c)].is_zero() {
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = &m[(i, j)] - &factor * &m[(r, j)];
                    m[(i, j)] = t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMat) -> usize {
    let mut c = m.clone();
    rref_in_place(&mut c).len()
}

/// Basis of `{x : Mx = 0}`.
pub fn kernel_basis(m: &RatMat) -> Vec<RatVec> {
    let mut r = m.clone();
    let pivots = rref_in_place(&mut r);
    let mut basis = Vec::new();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.cols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    for free in 0..m.cols {
        if is_pivot[free] {
            continue;
        }
        let mut x = zeros(m.cols);
        x[free] = Rat::from_integer(1.into());
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = -r[(row, free)].clone();
        }
        basis.push(x);
    }
    basis
}

/// One solution of `Mx = b`, if consistent.
pub fn solve(m: &RatMat, b: &RatVec) -> Option<RatVec> {
    assert_eq!(m.rows, b.len(), "solve: rhs length mismatch");
    let mut aug = RatMat::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let pivots = rref_in_place(&mut aug);
    if pivots.contains(&m.cols) {
        return None; // pivot in augmented column: inconsistent
    }
    let mut x = zeros(m.cols);
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[(row, m.cols)].clone();
    }
    Some(x)
}

/// Canonical (RREF-row) basis of the span of the given vectors.
pub fn span_basis(vectors: &[RatVec]) -> Vec<RatVec> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = RatMat::from_rows(vectors.to_vec());
    let pivots = rref_in_place(&mut m);
    (0..pivots.len()).map(|i| m.row(i).to_vec()).collect()
}

pub fn in_span(basis: &[RatVec], v: &RatVec) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let mut rows = basis.to_vec();
    let r0 = rows.len();
    rows.push(v.clone());
    span_basis(&rows).len() == span_basis(&basis[..r0].to_vec()).len()
}

/// Basis of the orthogonal complement of `span(basis)` in dimension `dim`.
pub fn orthogonal_complement(basis: &[RatVec], dim: usize) -> Vec<RatVec> {
    if basis.is_empty() {
        return RatMat::identity(dim).row_vecs();
    }
    kernel_basis(&RatMat::from_rows(basis.to_vec()))
}

/// Orthogonal projection of `x` onto `span(basis)` (basis need not be
/// orthogonal; the Gram system is solved exactly).
pub fn project_onto_span(basis: &[RatVec], x: &RatVec) -> RatVec {
    if basis.is_empty() {
        return zeros(x.len());
    }
    let b = span_basis(basis);
    let k = b.len();
    let mut gram = RatMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(&b[i], &b[j]);
        }
    }
    let rhs: RatVec = b.iter().map(|bi| dot(bi, x)).collect();
    let c = solve(&gram, &rhs).expect("gram system is invertible");
    let mut out = zeros(x.len());
    for (ci, bi) in c.iter().zip(&b) {
        for (o, bij) in out.iter_mut().zip(bi) {
            *o += ci * bij;
        }
    }
    out
}

/// Outcome of a linear solve restricted to a span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanSolve {
    /// The unique solution inside the span.
    Unique(RatVec),
    /// No solution inside the span.
    Inconsistent,
    /// The restricted map has a nontrivial kernel.
    Underdetermined,
}

/// Solves `M x = b` for `x` restricted to `span(span_vecs)`; `M` maps the
/// ambient space of the span into the space of `b`.
pub fn solve_on_span(m: &RatMat, span_vecs: &[RatVec], b: &RatVec) -> SpanSolve {
    let basis = span_basis(span_vecs);
    if basis.is_empty() {
        return if b.iter().all(|x| x.is_zero()) {
            SpanSolve::Unique(zeros(m.cols))
        } else {
            SpanSolve::Inconsistent
        };
    }
    // columns: images of basis vectors
    let k = basis.len();
    let mut ms = RatMat::zeros(m.rows, k);
    for (j, s) in basis.iter().enumerate() {
        let col = m.mul_vec(s);
        for i in 0..m.rows {
            ms[(i, j)] = col[i].clone();
        }
    }
    if rank(&ms) < k {
        return SpanSolve::Underdetermined;
    }
    match solve(&ms, b) {
        None => SpanSolve::Inconsistent,
        Some(y) => {
            let mut x = zeros(m.cols);
            for (yi, s) in y.iter().zip(&basis) {
                for (xo, si) in x.iter_mut().zip(s) {
                    *xo += yi * si;
                }
            }
            SpanSolve::Unique(x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    #[test]
    fn rref_rank_kernel() {
        let m = RatMat::from_rows(vec![
            vec![rint(1), rint(2), rint(3)],
            vec![rint(2), rint(4), rint(6)],
            vec![rint(0), rint(1), rint(1)],
        ]);
        assert_eq!(rank(&m), 2);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = RatMat::from_rows(vec![vec![rint(1), rint(1)], vec![rint(1), rint(-1)]]);
        let x = solve(&m, &vec![rint(3), rint(1)]).unwrap();
        assert_eq!(x, vec![rint(2), rint(1)]);
        let sing = RatMat::from_rows(vec![vec![rint(1), rint(1)], vec![rint(2), rint(2)]]);
        assert!(solve(&sing, &vec![rint(1), rint(3)]).is_none());
    }

    #[test]
    fn projection() {
        let basis = vec![vec![rint(1), rint(1)]];
        let p = project_onto_span(&basis, &vec![rint(1), rint(0)]);
        assert_eq!(p, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn span_solve_unique() {
        // M = [1 1] on span{(1,-1)}: M(1,-1) = 0 -> underdetermined for b=0? no:
        // kernel of restricted map nontrivial -> Underdetermined
        let m = RatMat::from_rows(vec![vec![rint(1), rint(1)]]);
        assert_eq!(
            solve_on_span(&m, &[vec![rint(1), rint(-1)]], &vec![rint(0)]),
            SpanSolve::Underdetermined
        );
        let s = solve_on_span(&m, &[vec![rint(1), rint(1)]], &vec![rint(4)]);
        assert_eq!(s, SpanSolve::Unique(vec![rint(2), rint(2)]));
    }
}
