//! Low-degree Chevalley-Eilenberg homology of a graded Lie algebra, and the
//! two-condition finite-presentability criterion of Abels.
//!
//! Wedge monomials e_i ^ e_j (i < j) and e_i ^ e_j ^ e_k (i < j < k) are
//! enumerated in lexicographic order of their index tuples. The
//! differentials use the conventions
//!
//!   d2(x1 ^ x2)      = -[x1, x2]
//!   d3(x1 ^ x2 ^ x3) = x3 ^ [x1, x2] + x2 ^ [x3, x1] + x1 ^ [x2, x3]
//!
//! under which d2 . d3 = 0 is equivalent to the Jacobi identity: the
//! composite column at a basis triple is exactly its jacobiator.
//!
//! When the algebra is weight-additive both differentials preserve weight,
//! so kernels and images split by weight block and H2 can be computed one
//! weight at a time.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::exact::Rat;
use crate::liealg::{LieAlgebra, WeightVector};
use crate::linalg::{kernel_basis, solve, QMat, Subspace};

/// All pairs i < j over n indices, lexicographic.
pub fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

/// All triples i < j < k over n indices, lexicographic.
pub fn wedge_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Position of the pair (i, j), i < j, in [`wedge_pairs`] order.
pub fn pair_position(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // Rows before i contribute (n-1) + (n-2) + ... ,then offset inside row i.
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Label for a degree-2 monomial, e.g. `e02^e24`.
pub fn pair_label(l: &LieAlgebra, pos: usize) -> String {
    let (i, j) = wedge_pairs(l.dim())[pos];
    format!("{}^{}", l.label(i), l.label(j))
}

/// Label for a degree-3 monomial, e.g. `e02^e23^e34`.
pub fn triple_label(l: &LieAlgebra, pos: usize) -> String {
    let (i, j, k) = wedge_triples(l.dim())[pos];
    format!("{}^{}^{}", l.label(i), l.label(j), l.label(k))
}

/// Adds `coeff * (e_t ^ e_k)` to a dense degree-2 vector, normalizing the
/// monomial to increasing index order (sign flip when t > k, zero when t = k).
fn add_wedge(out: &mut [Rat], n: usize, t: usize, k: usize, coeff: &Rat) {
    use core::cmp::Ordering;
    match t.cmp(&k) {
        Ordering::Less => out[pair_position(n, t, k)] += coeff,
        Ordering::Greater => out[pair_position(n, k, t)] -= coeff,
        Ordering::Equal => {}
    }
}

/// Matrix of d2: columns indexed by wedge pairs, rows by basis elements.
pub fn d2_matrix(l: &LieAlgebra) -> QMat {
    let n = l.dim();
    let cols = wedge_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let mut col = vec![Rat::zero(); n];
            for (t, c) in l.bracket_basis(i, j) {
                col[t] = -c;
            }
            col
        })
        .collect();
    QMat::from_cols(cols, n)
}

/// Matrix of d3: columns indexed by wedge triples, rows by wedge pairs.
pub fn d3_matrix(l: &LieAlgebra) -> QMat {
    let n = l.dim();
    let rows = wedge_pairs(n).len();
    let cols = wedge_triples(n)
        .into_iter()
        .map(|(i, j, k)| {
            let mut col = vec![Rat::zero(); rows];
            for (outer, pair) in [(k, (i, j)), (j, (k, i)), (i, (j, k))] {
                for (t, c) in l.bracket_basis(pair.0, pair.1) {
                    add_wedge(&mut col, n, outer, t, &c);
                }
            }
            col
        })
        .collect();
    QMat::from_cols(cols, rows)
}

/// Exact check that d2 . d3 = 0 (equivalently, Jacobi holds).
pub fn check_complex(l: &LieAlgebra) -> bool {
    d2_matrix(l).mul(&d3_matrix(l)).is_zero()
}

/// Positions (in degree-`degree` monomial order) whose weight is `w`.
/// Degree 1 means basis elements, 2 wedge pairs, 3 wedge triples.
pub fn weight_positions(l: &LieAlgebra, degree: usize, w: &WeightVector) -> Vec<usize> {
    assert_eq!(w.rank(), l.rank(), "weight rank differs from grading rank");
    let n = l.dim();
    match degree {
        1 => (0..n).filter(|&i| l.weight(i) == w).collect(),
        2 => wedge_pairs(n)
            .iter()
            .enumerate()
            .filter(|(_, (i, j))| &l.weight(*i).add(l.weight(*j)) == w)
            .map(|(pos, _)| pos)
            .collect(),
        3 => wedge_triples(n)
            .iter()
            .enumerate()
            .filter(|(_, (i, j, k))| {
                &l.weight(*i).add(l.weight(*j)).add(l.weight(*k)) == w
            })
            .map(|(pos, _)| pos)
            .collect(),
        _ => panic!("degree must be 1, 2, or 3"),
    }
}

/// Kernel of d2 restricted to the weight-w block, as a subspace of that
/// block (coordinates follow the order of `weight_positions(l, 2, w)`).
pub fn kernel_weight_basis(l: &LieAlgebra, w: &WeightVector) -> Subspace {
    let d2 = d2_matrix(l);
    let block = weight_positions(l, 2, w);
    let mut m = QMat::zeros(l.dim(), block.len());
    for (bj, &col) in block.iter().enumerate() {
        for r in 0..l.dim() {
            m.set(r, bj, d2.get(r, col).clone());
        }
    }
    kernel_basis(&m)
}

/// Dimension of the weight-w block of Im(d3): columns at weight-w triples,
/// restricted to weight-w pair rows (legitimate because d3 preserves weight
/// on a weight-additive algebra).
fn image_weight_dim(l: &LieAlgebra, w: &WeightVector) -> usize {
    let d3 = d3_matrix(l);
    let row_block = weight_positions(l, 2, w);
    let col_block = weight_positions(l, 3, w);
    let mut m = QMat::zeros(row_block.len(), col_block.len());
    for (bj, &col) in col_block.iter().enumerate() {
        for (bi, &row) in row_block.iter().enumerate() {
            m.set(bi, bj, d3.get(row, col).clone());
        }
    }
    m.rank()
}

/// dim H2 in weight w: dim of the weight-w kernel of d2 minus the dimension
/// of the weight-w block of Im(d3). Requires weight additivity.
pub fn h2_weight_dim(l: &LieAlgebra, w: &WeightVector) -> usize {
    debug_assert!(l.check_weight_additivity().is_none());
    kernel_weight_basis(l, w).dim() - image_weight_dim(l, w)
}

/// Embeds a weight-block degree-2 vector into full wedge coordinates.
pub fn embed_weight_block(l: &LieAlgebra, w: &WeightVector, block_vec: &[Rat]) -> Vec<Rat> {
    let block = weight_positions(l, 2, w);
    assert_eq!(block_vec.len(), block.len(), "block vector length differs");
    let mut full = vec![Rat::zero(); wedge_pairs(l.dim()).len()];
    for (x, &pos) in block_vec.iter().zip(&block) {
        full[pos] = x.clone();
    }
    full
}

/// Expresses a degree-2 vector as d3 of a degree-3 vector, if possible.
/// Returns the echelon-canonical coefficient vector over wedge triples
/// (free variables zero), or `None` when `v` is outside Im(d3).
pub fn express_in_image(l: &LieAlgebra, v: &[Rat]) -> Option<Vec<Rat>> {
    solve(&d3_matrix(l), v)
}

/// Does the closed segment [a, b] in R^rank contain the origin?
///
/// Exact integer test: the segment passes through 0 iff a and b are
/// anti-proportional, i.e. every 2x2 minor vanishes and a . b <= 0. This
/// covers the degenerate cases: a = b reduces to a = 0, and a zero endpoint
/// always passes.
pub fn segment_contains_origin(a: &WeightVector, b: &WeightVector) -> bool {
    assert_eq!(a.rank(), b.rank(), "weight ranks differ");
    let a = &a.0;
    let b = &b.0;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if (a[i] as i128) * (b[j] as i128) != (a[j] as i128) * (b[i] as i128) {
                return false;
            }
        }
    }
    let dot: i128 = a.iter().zip(b).map(|(&x, &y)| (x as i128) * (y as i128)).sum();
    dot <= 0
}

/// Outcome of the first condition: no segment between two abelianization
/// weights (repetition allowed) may contain the origin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Condition1 {
    pub pass: bool,
    pub offending_pair: Option<(WeightVector, WeightVector)>,
}

/// Outcome of the second condition: H2 must vanish in weight zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Condition2 {
    pub pass: bool,
    pub h2_weight0_dim: usize,
}

/// Verdict of the two-condition finite-presentability criterion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelsVerdict {
    pub condition1: Condition1,
    pub condition2: Condition2,
    pub finitely_presented: bool,
}

/// Runs both conditions of the criterion on a weight-additive algebra.
///
/// Condition 1 ranges over unordered pairs of distinct abelianization
/// weights including equal pairs, so a zero weight fails by itself via the
/// degenerate segment. Condition 2 is h2_weight_dim(l, 0) = 0.
pub fn abels_check(l: &LieAlgebra) -> AbelsVerdict {
    assert!(
        l.check_weight_additivity().is_none(),
        "criterion requires a weight-additive algebra"
    );
    let support: Vec<WeightVector> = l.abelianization_weights().into_keys().collect();
    let mut condition1 = Condition1 {
        pass: true,
        offending_pair: None,
    };
    'outer: for (i, a) in support.iter().enumerate() {
        for b in &support[i..] {
            if segment_contains_origin(a, b) {
                condition1 = Condition1 {
                    pass: false,
                    offending_pair: Some((a.clone(), b.clone())),
                };
                break 'outer;
            }
        }
    }
    let h2 = h2_weight_dim(l, &WeightVector::zero(l.rank()));
    let condition2 = Condition2 {
        pass: h2 == 0,
        h2_weight0_dim: h2,
    };
    AbelsVerdict {
        finitely_presented: condition1.pass && condition2.pass,
        condition1,
        condition2,
    }
}
