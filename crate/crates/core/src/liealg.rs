//! Finite-dimensional Lie algebras over Q given by structure constants,
//! with integer weight gradings.
//!
//! Brackets are stored sparsely for ordered pairs i < j only; antisymmetry
//! supplies the rest. Weights are vectors in Z^rank attached to basis
//! elements; a well-graded algebra satisfies weight additivity, meaning
//! every nonzero coefficient of [x_i, x_j] sits on a basis element of weight
//! weights[i] + weights[j]. Neither the Jacobi identity nor additivity is
//! enforced at construction: both are checkable properties, and fixtures
//! that violate them are legitimate test inputs.

use core::fmt;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::exact::Rat;
use crate::linalg::Subspace;

/// Weight in Z^rank; ordered lexicographically so weight multisets have a
/// canonical enumeration order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn zero(rank: usize) -> WeightVector {
        WeightVector(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &WeightVector) -> WeightVector {
        assert_eq!(self.rank(), other.rank(), "weight ranks differ");
        WeightVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for WeightVector {
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

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Structural problems a structure-constant table can have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieAlgebraError {
    WeightCount { expected: usize, got: usize },
    WeightRank { index: usize, expected: usize, got: usize },
    PairNotOrdered { i: usize, j: usize },
    PairOutOfRange { i: usize, j: usize },
    DuplicatePair { i: usize, j: usize },
    TargetOutOfRange { i: usize, j: usize, target: usize },
    DuplicateTarget { i: usize, j: usize, target: usize },
}

impl fmt::Display for LieAlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LieAlgebraError::WeightCount { expected, got } => {
                write!(f, "expected {expected} weight vectors, got {got}")
            }
            LieAlgebraError::WeightRank {
                index,
                expected,
                got,
            } => write!(f, "weight {index} has rank {got}, expected {expected}"),
            LieAlgebraError::PairNotOrdered { i, j } => {
                write!(f, "bracket pair ({i},{j}) is not strictly increasing")
            }
            LieAlgebraError::PairOutOfRange { i, j } => {
                write!(f, "bracket pair ({i},{j}) is out of range")
            }
            LieAlgebraError::DuplicatePair { i, j } => {
                write!(f, "bracket pair ({i},{j}) appears twice")
            }
            LieAlgebraError::TargetOutOfRange { i, j, target } => {
                write!(f, "bracket ({i},{j}) hits out-of-range index {target}")
            }
            LieAlgebraError::DuplicateTarget { i, j, target } => {
                write!(f, "bracket ({i},{j}) lists index {target} twice")
            }
        }
    }
}

/// Lie algebra over Q by structure constants, with a Z^rank grading.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra {
    labels: Vec<String>,
    rank: usize,
    weights: Vec<WeightVector>,
    // Expansion of [x_i, x_j] for i < j, sparse and sorted by target index;
    // zero coefficients are never stored.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl LieAlgebra {
    pub fn new(
        labels: Vec<String>,
        rank: usize,
        weights: Vec<WeightVector>,
        bracket_entries: Vec<(usize, usize, Vec<(usize, Rat)>)>,
    ) -> Result<LieAlgebra, LieAlgebraError> {
        let dim = labels.len();
        if weights.len() != dim {
            return Err(LieAlgebraError::WeightCount {
                expected: dim,
                got: weights.len(),
            });
        }
        for (index, w) in weights.iter().enumerate() {
            if w.rank() != rank {
                return Err(LieAlgebraError::WeightRank {
                    index,
                    expected: rank,
                    got: w.rank(),
                });
            }
        }
        let mut brackets = BTreeMap::new();
        for (i, j, terms) in bracket_entries {
            if i >= j {
                return Err(LieAlgebraError::PairNotOrdered { i, j });
            }
            if j >= dim {
                return Err(LieAlgebraError::PairOutOfRange { i, j });
            }
            let mut sparse: Vec<(usize, Rat)> = Vec::new();
            for (target, coeff) in terms {
                if target >= dim {
                    return Err(LieAlgebraError::TargetOutOfRange { i, j, target });
                }
                if sparse.iter().any(|(t, _)| *t == target) {
                    return Err(LieAlgebraError::DuplicateTarget { i, j, target });
                }
                if !coeff.is_zero() {
                    sparse.push((target, coeff));
                }
            }
            sparse.sort_by_key(|(t, _)| *t);
            if brackets.insert((i, j), sparse).is_some() {
                return Err(LieAlgebraError::DuplicatePair { i, j });
            }
        }
        brackets.retain(|_, terms| !terms.is_empty());
        Ok(LieAlgebra {
            labels,
            rank,
            weights,
            brackets,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn weights(&self) -> &[WeightVector] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &WeightVector {
        &self.weights[i]
    }

    /// Stored bracket table: ordered pairs only.
    pub fn bracket_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<(usize, Rat)>)> {
        self.brackets.iter()
    }

    /// Sparse expansion of [x_i, x_j] for any i, j (antisymmetry applied).
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        assert!(i < self.dim() && j < self.dim(), "basis index out of range");
        if i == j {
            return Vec::new();
        }
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.brackets.get(&key) {
            None => Vec::new(),
            Some(terms) if !flip => terms.clone(),
            Some(terms) => terms.iter().map(|(t, c)| (*t, -c)).collect(),
        }
    }

    /// Bilinear extension of the bracket to dense coordinate vectors.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.dim(), "left operand length differs");
        assert_eq!(y.len(), self.dim(), "right operand length differs");
        let mut out = vec![Rat::zero(); self.dim()];
        for (&(i, j), terms) in &self.brackets {
            // [x, y] picks up (x_i y_j - x_j y_i) [e_i, e_j].
            let coeff = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if coeff.is_zero() {
                continue;
            }
            for (t, c) in terms {
                out[*t] += &(&coeff * c);
            }
        }
        out
    }

    fn sparse_bracket_with_basis(&self, terms: &[(usize, Rat)], k: usize) -> Vec<(usize, Rat)> {
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (t, c) in terms {
            for (u, d) in self.bracket_basis(*t, k) {
                let entry = acc.entry(u).or_insert_with(Rat::zero);
                *entry += &(c * &d);
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// First basis triple (i, j, k) violating the Jacobi identity, or `None`.
    pub fn check_jacobi(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
                    let parts = [
                        self.sparse_bracket_with_basis(&self.bracket_basis(i, j), k),
                        self.sparse_bracket_with_basis(&self.bracket_basis(j, k), i),
                        self.sparse_bracket_with_basis(&self.bracket_basis(k, i), j),
                    ];
                    for part in parts {
                        for (t, c) in part {
                            *acc.entry(t).or_insert_with(Rat::zero) += &c;
                        }
                    }
                    if acc.values().any(|c| !c.is_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// First bracket term landing off-grade, as (i, j, target), or `None`
    /// when every [x_i, x_j] lies in the weights[i]+weights[j] block.
    pub fn check_weight_additivity(&self) -> Option<(usize, usize, usize)> {
        for (&(i, j), terms) in &self.brackets {
            let expected = self.weights[i].add(&self.weights[j]);
            for (t, _) in terms {
                if self.weights[*t] != expected {
                    return Some((i, j, *t));
                }
            }
        }
        None
    }

    /// Derived subalgebra [g, g] as a canonical subspace.
    pub fn derived_subalgebra(&self) -> Subspace {
        let vectors = self
            .brackets
            .values()
            .map(|terms| {
                let mut v = vec![Rat::zero(); self.dim()];
                for (t, c) in terms {
                    v[*t] = c.clone();
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.dim(), vectors)
    }

    /// Multiset of all basis weights.
    pub fn weight_multiset(&self) -> BTreeMap<WeightVector, usize> {
        let mut out = BTreeMap::new();
        for w in &self.weights {
            *out.entry(w.clone()).or_insert(0) += 1;
        }
        out
    }

    /// Weights of the abelianization g/[g,g] as a multiset.
    ///
    /// Requires weight additivity; then [g,g] splits across the weight
    /// blocks and each multiplicity is (basis count at w) minus
    /// dim([g,g] intersected with the w-block).
    pub fn abelianization_weights(&self) -> BTreeMap<WeightVector, usize> {
        debug_assert!(self.check_weight_additivity().is_none());
        let derived = self.derived_subalgebra();
        let mut out = BTreeMap::new();
        for (w, count) in self.weight_multiset() {
            let positions: Vec<usize> = (0..self.dim())
                .filter(|&i| self.weights[i] == w)
                .collect();
            let inside = derived.intersect_with_coordinate_subspace(&positions).dim();
            let mult = count - inside;
            if mult > 0 {
                out.insert(w, mult);
            }
        }
        out
    }
}

/// Strictly upper-triangular matrix-unit algebra on the given index pairs,
/// graded by the two torus directions at matrix indices 2 and 3:
/// weight(e_ij) = (d2(j) - d2(i), d3(j) - d3(i)) with dk the indicator of k.
///
/// The pair set must be closed under composition (j of one pair meeting i of
/// another), which holds for the fixtures below.
fn matrix_unit_algebra(pairs: &[(usize, usize)]) -> LieAlgebra {
    let dim = pairs.len();
    let position = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j));
    let indicator = |k: usize, i: usize| i64::from(i == k);
    let labels = pairs.iter().map(|&(i, j)| format!("e{i}{j}")).collect();
    let weights = pairs
        .iter()
        .map(|&(i, j)| {
            WeightVector(vec![
                indicator(2, j) - indicator(2, i),
                indicator(3, j) - indicator(3, i),
            ])
        })
        .collect();
    let mut entries = Vec::new();
    for a in 0..dim {
        for b in (a + 1)..dim {
            let (i1, j1) = pairs[a];
            let (i2, j2) = pairs[b];
            // [E_i1j1, E_i2j2] = d(j1=i2) E_i1j2 - d(j2=i1) E_i2j1.
            let mut terms = Vec::new();
            if j1 == i2 {
                let t = position(i1, j2).expect("pair set not closed under composition");
                terms.push((t, Rat::one()));
            }
            if j2 == i1 {
                let t = position(i2, j1).expect("pair set not closed under composition");
                terms.push((t, -Rat::one()));
            }
            if !terms.is_empty() {
                entries.push((a, b, terms));
            }
        }
    }
    LieAlgebra::new(labels, 2, weights, entries).expect("fixture table is well formed")
}

impl LieAlgebra {
    /// The 9-dimensional nilpotent algebra of the unipotent part of the
    /// 5x5 group family: matrix units e_ij for the strictly upper
    /// triangular positions outside the top-left 2x2 block.
    pub fn gamma_unipotent() -> LieAlgebra {
        matrix_unit_algebra(&[
            (0, 2),
            (1, 2),
            (0, 3),
            (1, 3),
            (2, 3),
            (2, 4),
            (3, 4),
            (0, 4),
            (1, 4),
        ])
    }

    /// Abels' classical 6-dimensional variant: all strictly upper
    /// triangular positions of a 4x4 matrix on indices {1,2,3,4}.
    pub fn abels4() -> LieAlgebra {
        matrix_unit_algebra(&[(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)])
    }

    /// Three-dimensional table that is antisymmetric but fails Jacobi at
    /// the triple (0,1,2): [x0,x1]=x2, [x0,x2]=x0, [x1,x2]=0.
    pub fn jacobi_violation() -> LieAlgebra {
        LieAlgebra::new(
            vec!["x0".into(), "x1".into(), "x2".into()],
            2,
            vec![WeightVector::zero(2); 3],
            vec![
                (0, 1, vec![(2, Rat::one())]),
                (0, 2, vec![(0, Rat::one())]),
            ],
        )
        .expect("fixture table is well formed")
    }

    /// Abelian algebra with the given weights (all brackets zero).
    pub fn abelian(weights: Vec<WeightVector>) -> LieAlgebra {
        let rank = weights.first().map_or(2, WeightVector::rank);
        let labels = (0..weights.len()).map(|i| format!("a{i}")).collect();
        LieAlgebra::new(labels, rank, weights, Vec::new()).expect("abelian table is well formed")
    }

    /// Random nilpotent algebra for property tests: the full strictly
    /// upper-triangular pattern on n in {4,5,6} indices with every basis
    /// element rescaled by a random nonzero rational and weights induced by
    /// a random map f: indices -> Z^2 (weight(e_ij) = f(j) - f(i), so
    /// additivity holds by telescoping).
    pub fn random_triangular<R: Rng>(rng: &mut R) -> LieAlgebra {
        let n = rng.gen_range(4..=6usize);
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i, j));
            }
        }
        let mut scale = BTreeMap::new();
        for &(i, j) in &pairs {
            let num = loop {
                let v = rng.gen_range(-6i64..=6);
                if v != 0 {
                    break v;
                }
            };
            let den = rng.gen_range(1i64..=6);
            scale.insert((i, j), Rat::ratio(num, den));
        }
        let f: Vec<(i64, i64)> = (0..n)
            .map(|_| (rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3)))
            .collect();
        let labels = pairs.iter().map(|&(i, j)| format!("e{i}{j}")).collect();
        let weights = pairs
            .iter()
            .map(|&(i, j)| WeightVector(vec![f[j].0 - f[i].0, f[j].1 - f[i].1]))
            .collect();
        let position = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
        let mut entries = Vec::new();
        for a in 0..pairs.len() {
            for b in (a + 1)..pairs.len() {
                let (i1, j1) = pairs[a];
                let (i2, j2) = pairs[b];
                let mut terms = Vec::new();
                if j1 == i2 {
                    let t = position(i1, j2);
                    let c = &(&scale[&(i1, j1)] * &scale[&(i2, j2)]) / &scale[&(i1, j2)];
                    terms.push((t, c));
                }
                if j2 == i1 {
                    let t = position(i2, j1);
                    let c = &(&scale[&(i1, j1)] * &scale[&(i2, j2)]) / &scale[&(i2, j1)];
                    terms.push((t, -c));
                }
                if !terms.is_empty() {
                    entries.push((a, b, terms));
                }
            }
        }
        LieAlgebra::new(labels, 2, weights, entries).expect("random table is well formed")
    }
}
