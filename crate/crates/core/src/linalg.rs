//! Dense exact linear algebra over Q.
//!
//! Everything is small (ambient dimensions stay well under a hundred), so
//! matrices are dense row-major vectors of [`Rat`] and all reductions are
//! plain Gauss-Jordan. Subspaces are kept in reduced row echelon form, which
//! is unique, so subspace equality is representational equality.

use alloc::vec;
use alloc::vec::Vec;

use crate::exact::Rat;

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> QMat {
        assert_eq!(data.len(), rows * cols, "shape does not match data length");
        QMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> QMat {
        QMat::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> QMat {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> QMat {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        QMat::new(n, cols, data)
    }

    /// Matrix with the given columns (used to assemble differential matrices).
    pub fn from_cols(cols: Vec<Vec<Rat>>, rows: usize) -> QMat {
        let n = cols.len();
        let mut m = QMat::zeros(rows, n);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged column");
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
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

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rat) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = QMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length differs from cols");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.get(i, j).is_zero() {
                        acc += &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form and the list of pivot columns.
    ///
    /// RREF is unique, so this is a canonical form; pivot choice is simply
    /// the first nonzero entry (no pivoting strategy is needed over Q).
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(prow) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, prow);
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let x = m.get(row, c) * &inv;
                m.set(row, c, x);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let x = m.get(r, c) - &(&factor * m.get(row, c));
                    m.set(r, c, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

/// Linear subspace of Q^n, stored as an RREF basis (pivot columns strictly
/// increasing). Two subspaces are equal iff their stored bases are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors, canonicalized; zero vectors are dropped.
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Rat>>) -> Subspace {
        for v in &vectors {
            assert_eq!(v.len(), ambient_dim, "vector length differs from ambient");
        }
        if vectors.is_empty() {
            return Subspace {
                ambient_dim,
                basis: Vec::new(),
                pivots: Vec::new(),
            };
        }
        let m = QMat::from_rows(vectors, ambient_dim);
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            ambient_dim,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace::from_vectors(ambient_dim, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    /// Coefficients of `v` over the stored basis, or `None` if `v` is
    /// outside the span. Over an RREF basis the only candidate coefficient
    /// of basis vector i is v[pivot_i], so one pass decides membership.
    pub fn in_span(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length differs");
        let coeffs: Vec<Rat> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residue = v.to_vec();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residue.iter_mut().zip(b) {
                *r -= &(c * x);
            }
        }
        if residue.iter().all(Rat::is_zero) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.in_span(v).is_some()
    }

    /// Intersection with the coordinate subspace supported on `coords`
    /// (vectors of the span vanishing outside `coords`).
    pub fn intersect_with_coordinate_subspace(&self, coords: &[usize]) -> Subspace {
        let keep = |j: usize| coords.contains(&j);
        // Constrain coefficient vectors c: sum_i c_i basis_i[j] = 0 for j
        // outside coords; the kernel of that system spans the intersection.
        let outside: Vec<usize> = (0..self.ambient_dim).filter(|&j| !keep(j)).collect();
        let mut sys = QMat::zeros(outside.len(), self.dim());
        for (r, &j) in outside.iter().enumerate() {
            for (i, b) in self.basis.iter().enumerate() {
                sys.set(r, i, b[j].clone());
            }
        }
        let coeff_kernel = kernel_basis(&sys);
        let vectors = coeff_kernel
            .basis()
            .iter()
            .map(|c| {
                let mut v = vec![Rat::zero(); self.ambient_dim];
                for (ci, b) in c.iter().zip(&self.basis) {
                    if ci.is_zero() {
                        continue;
                    }
                    for (slot, x) in v.iter_mut().zip(b) {
                        *slot += &(ci * x);
                    }
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.ambient_dim, vectors)
    }
}

/// Kernel of `m` as a canonical subspace of Q^cols.
pub fn kernel_basis(m: &QMat) -> Subspace {
    let (r, pivots) = m.rref();
    let mut vectors = Vec::new();
    let mut pivot_iter = pivots.iter().copied().peekable();
    let free: Vec<usize> = (0..m.cols())
        .filter(|&c| {
            if pivot_iter.peek() == Some(&c) {
                pivot_iter.next();
                false
            } else {
                true
            }
        })
        .collect();
    for f in free {
        let mut v = vec![Rat::zero(); m.cols()];
        v[f] = Rat::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, f);
        }
        vectors.push(v);
    }
    Subspace::from_vectors(m.cols(), vectors)
}

/// One exact solution of `m x = rhs`, or `None` if the system is
/// inconsistent. The solution is the echelon-canonical one: free variables
/// are set to zero.
pub fn solve(m: &QMat, rhs: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(rhs.len(), m.rows(), "rhs length differs from rows");
    let mut aug = QMat::zeros(m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols(), rhs[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![Rat::zero(); m.cols()];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, m.cols()).clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn mat(rows: &[&[i64]]) -> QMat {
        let cols = rows[0].len();
        QMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
            cols,
        )
    }

    fn vecr(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let (r, pivots) = QMat::identity(3).rref();
        assert_eq!(r, QMat::identity(3));
        assert_eq!(pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_of_rank_one_matrix() {
        let m = mat(&[&[2, 4], &[1, 2]]);
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0]);
        assert_eq!(r.row(0), &[Rat::one(), Rat::from_int(2)][..]);
        assert!(r.row(1).iter().all(Rat::is_zero));
    }

    #[test]
    fn rref_is_idempotent() {
        let m = mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let (r, p1) = m.rref();
        let (rr, p2) = r.rref();
        assert_eq!(r, rr);
        assert_eq!(p1, p2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_of_sum_functional() {
        let m = mat(&[&[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.dim(), 1);
        // Canonical form scales the leading entry to 1.
        assert_eq!(k.basis()[0], vec![Rat::one(), Rat::from_int(-1)]);
        assert!(m.mul_vec(&k.basis()[0]).iter().all(Rat::is_zero));
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(kernel_basis(&QMat::identity(4)).dim(), 0);
    }

    #[test]
    fn rank_nullity_on_a_known_matrix() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(m.rank() + k.dim(), m.cols());
        for b in k.basis() {
            assert!(m.mul_vec(b).iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn in_span_returns_exact_coefficients() {
        let s = Subspace::from_vectors(3, vec![vecr(&[1, 0, 2]), vecr(&[0, 1, -1])]);
        let v = vecr(&[3, 2, 4]);
        let coeffs = s.in_span(&v).unwrap();
        assert_eq!(coeffs, vecr(&[3, 2]));
        assert!(s.in_span(&vecr(&[0, 0, 1])).is_none());
        assert_eq!(s.in_span(&vecr(&[0, 0, 0])).unwrap(), vecr(&[0, 0]));
    }

    #[test]
    fn subspace_equality_is_representation_independent() {
        let a = Subspace::from_vectors(2, vec![vecr(&[1, 1]), vecr(&[2, 0])]);
        let b = Subspace::from_vectors(2, vec![vecr(&[0, 3]), vecr(&[5, 5])]);
        assert_eq!(a, b);
        assert_eq!(a, Subspace::from_vectors(2, vec![vecr(&[1, 0]), vecr(&[0, 1])]));
    }

    #[test]
    fn intersect_with_coordinates_drops_mixed_directions() {
        // span{(1,0,1),(0,1,0)} meets {x3-axis fixed to 0 outside coords}
        let s = Subspace::from_vectors(3, vec![vecr(&[1, 0, 1]), vecr(&[0, 1, 0])]);
        let t = s.intersect_with_coordinate_subspace(&[0, 1]);
        assert_eq!(t.dim(), 1);
        assert_eq!(t.basis()[0], vecr(&[0, 1, 0]));
        let u = s.intersect_with_coordinate_subspace(&[0, 2]);
        assert_eq!(u.dim(), 1);
        assert_eq!(u.basis()[0], vecr(&[1, 0, 1]));
        assert_eq!(s.intersect_with_coordinate_subspace(&[1]).dim(), 1);
        assert_eq!(s.intersect_with_coordinate_subspace(&[]).dim(), 0);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(&[&[1, 2], &[3, 4]]);
        let x = solve(&m, &vecr(&[5, 11])).unwrap();
        assert_eq!(m.mul_vec(&x), vecr(&[5, 11]));
        assert_eq!(x, vecr(&[1, 2]));

        let singular = mat(&[&[1, 1], &[1, 1]]);
        assert!(solve(&singular, &vecr(&[0, 1])).is_none());
        // Underdetermined: free variable pinned to zero.
        let wide = mat(&[&[1, 1, 1]]);
        let y = solve(&wide, &[rat("1/2")]).unwrap();
        assert_eq!(y, vec![rat("1/2"), Rat::zero(), Rat::zero()]);
    }

    #[test]
    fn matrix_product_against_hand_expansion() {
        let a = mat(&[&[1, 2], &[0, 1]]);
        let b = mat(&[&[3, 0], &[1, 1]]);
        assert_eq!(a.mul(&b), mat(&[&[5, 2], &[1, 1]]));
        assert_eq!(b.mul(&a), mat(&[&[3, 6], &[1, 3]]));
    }
}
