//! Marked groups, canonical Cayley balls, and ball-based comparison.
//!
//! A marking is a group together with an ordered generating tuple. The
//! radius-r ball of a marking is the labeled basepointed graph on the
//! elements reachable by words of length at most r, with an edge
//! (v, k, w) whenever w = v * s_k for a (positive) generator s_k. Two
//! markings look alike to depth r exactly when their balls are equal, and
//! because the graphs are deterministic and labeled, equality of the
//! canonical BFS form is a complete invariant — no isomorphism search.
//!
//! Canonical numbering: vertices in BFS discovery order starting from the
//! identity; each vertex probes all generators in index order, then all
//! inverses in index order.
//!
//! Words over a marking are sequences of nonzero signed 1-based generator
//! indices (+k for the k-th generator, -k for its inverse). A word lies in
//! the kernel of the marking exactly when it evaluates to the identity, so
//! a word evaluating to the identity in one marking and not in another
//! certifies that the two markings differ.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Debug;

use crate::exact::Prime;
use crate::gamma::{self, CosetRep, GammaElt};

/// Group operations on canonical element values. Because values are
/// canonical, the `Ord` on `Elt` decides group-element equality; balls use
/// it to identify vertices.
pub trait GroupOracle {
    type Elt: Clone + Ord + Debug;

    fn identity(&self) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn inv(&self, g: &Self::Elt) -> Self::Elt;
}

/// A group with an ordered, nonempty generating tuple. The order is part
/// of the marking: permuting generators gives a different marking.
pub struct Marking<O: GroupOracle> {
    oracle: O,
    generators: Vec<O::Elt>,
}

impl<O: GroupOracle> Marking<O> {
    /// Generator values must be canonical for the oracle.
    pub fn new(oracle: O, generators: Vec<O::Elt>) -> Marking<O> {
        assert!(!generators.is_empty(), "a marking needs generators");
        Marking { oracle, generators }
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn generators(&self) -> &[O::Elt] {
        &self.generators
    }
}

/// Canonical radius-r ball: vertex 0 is the basepoint, edges carry
/// positive generator indices (inverse edges are implied), and both
/// endpoints of every edge lie in the ball.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BallGraph {
    radius: u32,
    generator_count: usize,
    edges: Vec<(usize, usize, usize)>,
    depths: Vec<u32>,
}

impl BallGraph {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn vertex_count(&self) -> usize {
        self.depths.len()
    }

    /// Edges (source, generator index, target), sorted by source then
    /// generator.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// Word length of each vertex, indexed by vertex number.
    pub fn depths(&self) -> &[u32] {
        &self.depths
    }
}

/// Breadth-first ball of the marking at the given radius.
pub fn ball<O: GroupOracle>(marking: &Marking<O>, radius: u32) -> BallGraph {
    let oracle = marking.oracle();
    let gens = marking.generators();
    let invs: Vec<O::Elt> = gens.iter().map(|s| oracle.inv(s)).collect();

    let mut index: BTreeMap<O::Elt, usize> = BTreeMap::new();
    let mut elements: Vec<O::Elt> = Vec::new();
    let mut depths: Vec<u32> = Vec::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();

    let root = oracle.identity();
    index.insert(root.clone(), 0);
    elements.push(root);
    depths.push(0);

    let intern = |w: O::Elt,
                      depth: u32,
                      index: &mut BTreeMap<O::Elt, usize>,
                      elements: &mut Vec<O::Elt>,
                      depths: &mut Vec<u32>| match index.get(&w) {
        Some(&i) => i,
        None => {
            let i = elements.len();
            index.insert(w.clone(), i);
            elements.push(w);
            depths.push(depth);
            i
        }
    };

    let mut cursor = 0;
    while cursor < elements.len() {
        let v = cursor;
        cursor += 1;
        if depths[v] == radius {
            continue; // frontier vertices get their edges in the pass below
        }
        let depth = depths[v] + 1;
        let base = elements[v].clone();
        for (k, s) in gens.iter().enumerate() {
            let w = oracle.mul(&base, s);
            let dst = intern(w, depth, &mut index, &mut elements, &mut depths);
            edges.push((v, k, dst));
        }
        for s in &invs {
            let w = oracle.mul(&base, s);
            intern(w, depth, &mut index, &mut elements, &mut depths);
        }
    }

    // Frontier pass: record edges out of radius-depth vertices whose other
    // endpoint already lies in the ball, without creating new vertices.
    for v in 0..elements.len() {
        if depths[v] != radius {
            continue;
        }
        for (k, s) in gens.iter().enumerate() {
            let w = oracle.mul(&elements[v], s);
            if let Some(&dst) = index.get(&w) {
                edges.push((v, k, dst));
            }
        }
    }

    // BFS discovery order sorts vertices by depth, so the frontier pass
    // appends in order and the edge list comes out sorted.
    debug_assert!(edges.windows(2).all(|e| e[0] < e[1]));

    BallGraph {
        radius,
        generator_count: gens.len(),
        edges,
        depths,
    }
}

/// Why two balls or markings cannot be compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareError {
    RadiusMismatch { left: u32, right: u32 },
    GeneratorCountMismatch { left: usize, right: usize },
}

impl fmt::Display for CompareError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CompareError::RadiusMismatch { left, right } => {
                write!(f, "cannot compare balls of radius {left} and {right}")
            }
            CompareError::GeneratorCountMismatch { left, right } => {
                write!(f, "cannot compare markings with {left} and {right} generators")
            }
        }
    }
}

/// Equality of canonical forms; complete for basepointed labeled-graph
/// isomorphism because the BFS numbering realizes the unique isomorphism
/// when one exists.
pub fn balls_equal(a: &BallGraph, b: &BallGraph) -> Result<bool, CompareError> {
    if a.radius != b.radius {
        return Err(CompareError::RadiusMismatch {
            left: a.radius,
            right: b.radius,
        });
    }
    if a.generator_count != b.generator_count {
        return Err(CompareError::GeneratorCountMismatch {
            left: a.generator_count,
            right: b.generator_count,
        });
    }
    Ok(a.depths == b.depths && a.edges == b.edges)
}

/// Largest r <= rmax at which the two markings have equal balls; rmax when
/// they agree everywhere tested. Ball equality is monotone in the radius,
/// so scanning upward finds the threshold.
pub fn agreement_radius<O1: GroupOracle, O2: GroupOracle>(
    m1: &Marking<O1>,
    m2: &Marking<O2>,
    rmax: u32,
) -> Result<u32, CompareError> {
    if m1.generators().len() != m2.generators().len() {
        return Err(CompareError::GeneratorCountMismatch {
            left: m1.generators().len(),
            right: m2.generators().len(),
        });
    }
    for r in 1..=rmax {
        if !balls_equal(&ball(m1, r), &ball(m2, r))? {
            return Ok(r - 1);
        }
    }
    Ok(rmax)
}

/// Evaluates a word of signed 1-based generator indices in the marking.
pub fn evaluate_word<O: GroupOracle>(marking: &Marking<O>, word: &[i64]) -> O::Elt {
    let oracle = marking.oracle();
    let gens = marking.generators();
    let mut acc = oracle.identity();
    for &letter in word {
        assert!(letter != 0, "word letters are nonzero signed indices");
        let idx = letter.unsigned_abs() as usize - 1;
        assert!(idx < gens.len(), "letter {letter} has no generator");
        let step = if letter > 0 {
            gens[idx].clone()
        } else {
            oracle.inv(&gens[idx])
        };
        acc = oracle.mul(&acc, &step);
    }
    acc
}

/// Searches words of length <= 2*rmax + 1 for one that evaluates to the
/// identity in exactly one of the two markings; `None` when the markings
/// are indistinguishable to depth rmax.
///
/// The search runs one BFS over pairs (evaluation in the first group,
/// evaluation in the second). A divergence is a probe where one group
/// revisits a known element while the other does not (or they revisit
/// different vertices); gluing the probe word to the inverse of the
/// revisited vertex's word yields the witness.
pub fn divergence_witness<O1: GroupOracle, O2: GroupOracle>(
    m1: &Marking<O1>,
    m2: &Marking<O2>,
    rmax: u32,
) -> Result<Option<Vec<i64>>, CompareError> {
    if m1.generators().len() != m2.generators().len() {
        return Err(CompareError::GeneratorCountMismatch {
            left: m1.generators().len(),
            right: m2.generators().len(),
        });
    }
    let o1 = m1.oracle();
    let o2 = m2.oracle();
    let letters: Vec<i64> = {
        let k = m1.generators().len() as i64;
        (1..=k).chain((1..=k).map(|i| -i)).collect()
    };
    let steps1: Vec<O1::Elt> = letters
        .iter()
        .map(|&l| {
            let g = &m1.generators()[l.unsigned_abs() as usize - 1];
            if l > 0 {
                g.clone()
            } else {
                o1.inv(g)
            }
        })
        .collect();
    let steps2: Vec<O2::Elt> = letters
        .iter()
        .map(|&l| {
            let g = &m2.generators()[l.unsigned_abs() as usize - 1];
            if l > 0 {
                g.clone()
            } else {
                o2.inv(g)
            }
        })
        .collect();

    let mut elems1: Vec<O1::Elt> = vec![o1.identity()];
    let mut elems2: Vec<O2::Elt> = vec![o2.identity()];
    let mut depths: Vec<u32> = vec![0];
    let mut parent: Vec<(usize, i64)> = vec![(0, 0)];
    let mut map1: BTreeMap<O1::Elt, usize> = BTreeMap::new();
    let mut map2: BTreeMap<O2::Elt, usize> = BTreeMap::new();
    map1.insert(elems1[0].clone(), 0);
    map2.insert(elems2[0].clone(), 0);

    let word_of = |v: usize, parent: &[(usize, i64)]| -> Vec<i64> {
        let mut w = Vec::new();
        let mut cur = v;
        while cur != 0 {
            let (up, letter) = parent[cur];
            w.push(letter);
            cur = up;
        }
        w.reverse();
        w
    };
    // word(v) + letter + word(anchor)^-1: the probe reaches the anchor's
    // element in the group that revisited it and a fresh element in the
    // other, so the result is the identity in exactly one marking.
    let witness = |v: usize, letter: i64, anchor: usize, parent: &[(usize, i64)]| -> Vec<i64> {
        let mut w = word_of(v, parent);
        w.push(letter);
        w.extend(word_of(anchor, parent).iter().rev().map(|&l| -l));
        w
    };

    let mut cursor = 0;
    while cursor < elems1.len() {
        let v = cursor;
        cursor += 1;
        if depths[v] == rmax {
            continue;
        }
        let depth = depths[v] + 1;
        let b1 = elems1[v].clone();
        let b2 = elems2[v].clone();
        for (si, &letter) in letters.iter().enumerate() {
            let w1 = o1.mul(&b1, &steps1[si]);
            let w2 = o2.mul(&b2, &steps2[si]);
            match (map1.get(&w1).copied(), map2.get(&w2).copied()) {
                (None, None) => {
                    let id = elems1.len();
                    map1.insert(w1.clone(), id);
                    map2.insert(w2.clone(), id);
                    elems1.push(w1);
                    elems2.push(w2);
                    depths.push(depth);
                    parent.push((v, letter));
                }
                (Some(x), Some(y)) if x == y => {}
                (Some(x), _) => return Ok(Some(witness(v, letter, x, &parent))),
                (None, Some(y)) => return Ok(Some(witness(v, letter, y, &parent))),
            }
        }
    }

    // Frontier pass: probes from depth-rmax vertices can still reveal a
    // disagreement between elements already in the ball.
    for v in 0..elems1.len() {
        if depths[v] != rmax {
            continue;
        }
        for (si, &letter) in letters.iter().enumerate() {
            let w1 = o1.mul(&elems1[v], &steps1[si]);
            let w2 = o2.mul(&elems2[v], &steps2[si]);
            match (map1.get(&w1).copied(), map2.get(&w2).copied()) {
                (None, None) => {}
                (Some(x), Some(y)) if x == y => {}
                (Some(x), _) => return Ok(Some(witness(v, letter, x, &parent))),
                (None, Some(y)) => return Ok(Some(witness(v, letter, y, &parent))),
            }
        }
    }
    Ok(None)
}

/// The integers under addition.
#[derive(Clone, Copy, Debug)]
pub struct IntLine;

impl GroupOracle for IntLine {
    type Elt = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn inv(&self, g: &i64) -> i64 {
        -g
    }
}

/// The integers modulo n under addition, elements stored reduced.
#[derive(Clone, Copy, Debug)]
pub struct IntCycle {
    modulus: u64,
}

impl IntCycle {
    pub fn new(modulus: u64) -> IntCycle {
        assert!(modulus > 0, "modulus must be positive");
        IntCycle { modulus }
    }
}

impl GroupOracle for IntCycle {
    type Elt = u64;

    fn identity(&self) -> u64 {
        0
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }

    fn inv(&self, g: &u64) -> u64 {
        (self.modulus - g) % self.modulus
    }
}

/// The matrix group, elements compared exactly.
#[derive(Clone, Copy, Debug)]
pub struct GammaOracle {
    p: Prime,
}

impl GammaOracle {
    pub fn new(p: Prime) -> GammaOracle {
        GammaOracle { p }
    }
}

impl GroupOracle for GammaOracle {
    type Elt = GammaElt;

    fn identity(&self) -> GammaElt {
        GammaElt::identity()
    }

    fn mul(&self, a: &GammaElt, b: &GammaElt) -> GammaElt {
        gamma::mul(self.p, a, b)
    }

    fn inv(&self, g: &GammaElt) -> GammaElt {
        gamma::inv(self.p, g)
    }
}

/// The quotient of the matrix group by the integral central lattice,
/// elements stored as canonical coset representatives.
#[derive(Clone, Copy, Debug)]
pub struct GammaModMzOracle {
    p: Prime,
}

impl GammaModMzOracle {
    pub fn new(p: Prime) -> GammaModMzOracle {
        GammaModMzOracle { p }
    }
}

impl GroupOracle for GammaModMzOracle {
    type Elt = CosetRep;

    fn identity(&self) -> CosetRep {
        gamma::canonical_mod_mz(&GammaElt::identity())
    }

    fn mul(&self, a: &CosetRep, b: &CosetRep) -> CosetRep {
        gamma::canonical_mod_mz(&gamma::mul(self.p, a.elt(), b.elt()))
    }

    fn inv(&self, g: &CosetRep) -> CosetRep {
        gamma::canonical_mod_mz(&gamma::inv(self.p, g.elt()))
    }
}

/// (Z, [1]).
pub fn z_marking() -> Marking<IntLine> {
    Marking::new(IntLine, vec![1])
}

/// (Z/n, [1]).
pub fn z_mod_marking(n: u64) -> Marking<IntCycle> {
    Marking::new(IntCycle::new(n), vec![1 % n])
}

/// The matrix group with its seven default generators.
pub fn gamma_marking(p: Prime) -> Marking<GammaOracle> {
    let gens = gamma::default_generators()
        .into_iter()
        .map(|(_, g)| g)
        .collect();
    Marking::new(GammaOracle::new(p), gens)
}

/// The quotient marked with the images of the same seven generators.
pub fn gamma_mod_mz_marking(p: Prime) -> Marking<GammaModMzOracle> {
    let gens = gamma::default_generators()
        .into_iter()
        .map(|(_, g)| gamma::canonical_mod_mz(&g))
        .collect();
    Marking::new(GammaModMzOracle::new(p), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rat;

    #[test]
    fn line_balls_are_paths() {
        let m = z_marking();
        for r in 0..=10u32 {
            let b = ball(&m, r);
            assert_eq!(b.vertex_count(), 2 * r as usize + 1);
            assert_eq!(b.edges().len(), 2 * r as usize);
            assert_eq!(b.depths()[0], 0);
            for d in 1..=r {
                let at_depth = b.depths().iter().filter(|&&x| x == d).count();
                assert_eq!(at_depth, 2);
            }
        }
    }

    #[test]
    fn line_ball_radius_two_explicit_form() {
        // Discovery order 0, +1, -1, +2, -2; the frontier pass contributes
        // the edge -2 -> -1.
        let b = ball(&z_marking(), 2);
        assert_eq!(b.depths(), &[0, 1, 1, 2, 2]);
        assert_eq!(b.edges(), &[(0, 0, 1), (1, 0, 3), (2, 0, 0), (4, 0, 2)]);
    }

    #[test]
    fn cycle_ball_closes_into_a_cycle() {
        let b = ball(&z_mod_marking(5), 2);
        assert_eq!(b.vertex_count(), 5);
        assert_eq!(
            b.edges(),
            &[(0, 0, 1), (1, 0, 3), (2, 0, 0), (3, 0, 4), (4, 0, 2)]
        );
    }

    #[test]
    fn radius_zero_ball_is_a_point() {
        let b = ball(&z_mod_marking(7), 0);
        assert_eq!(b.vertex_count(), 1);
        assert!(b.edges().is_empty());
        // An identity generator shows up as a basepoint loop at radius 1.
        let b = ball(&z_mod_marking(1), 1);
        assert_eq!(b.vertex_count(), 1);
        assert_eq!(b.edges(), &[(0, 0, 0)]);
    }

    #[test]
    fn ball_computation_is_deterministic() {
        let m = z_mod_marking(6);
        assert_eq!(ball(&m, 3), ball(&m, 3));
        let p = Prime::new(2).unwrap();
        assert_eq!(ball(&gamma_marking(p), 1), ball(&gamma_marking(p), 1));
    }

    #[test]
    fn equality_of_line_and_cycle_balls() {
        let z = z_marking();
        let z5 = z_mod_marking(5);
        let b = ball(&z, 1);
        assert!(balls_equal(&b, &b).unwrap());
        assert!(balls_equal(&ball(&z, 1), &ball(&z5, 1)).unwrap());
        assert!(!balls_equal(&ball(&z, 2), &ball(&z5, 2)).unwrap());
    }

    #[test]
    fn comparing_mismatched_balls_is_an_input_error() {
        let z = z_marking();
        assert_eq!(
            balls_equal(&ball(&z, 1), &ball(&z, 2)),
            Err(CompareError::RadiusMismatch { left: 1, right: 2 })
        );
        let two_gens = Marking::new(IntLine, vec![1, 2]);
        assert_eq!(
            balls_equal(&ball(&z, 1), &ball(&two_gens, 1)),
            Err(CompareError::GeneratorCountMismatch { left: 1, right: 2 })
        );
        assert_eq!(
            agreement_radius(&z, &two_gens, 3),
            Err(CompareError::GeneratorCountMismatch { left: 1, right: 2 })
        );
        assert_eq!(
            divergence_witness(&z, &two_gens, 3),
            Err(CompareError::GeneratorCountMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn agreement_radius_of_line_and_cycle() {
        let z = z_marking();
        let z5 = z_mod_marking(5);
        assert_eq!(agreement_radius(&z, &z5, 5).unwrap(), 1);
        assert_eq!(agreement_radius(&z5, &z, 5).unwrap(), 1);
        assert_eq!(agreement_radius(&z, &z, 4).unwrap(), 4);
        // Markings by 1 and by 2 of Z are isomorphic as marked groups.
        let z2 = Marking::new(IntLine, vec![2]);
        assert_eq!(agreement_radius(&z, &z2, 4).unwrap(), 4);
    }

    #[test]
    fn ball_equality_is_monotone_in_radius() {
        let z = z_marking();
        for n in 2..=6u64 {
            let zn = z_mod_marking(n);
            let mut seen_unequal = false;
            for r in 1..=5u32 {
                let eq = balls_equal(&ball(&z, r), &ball(&zn, r)).unwrap();
                assert!(!(eq && seen_unequal), "agreement returned after radius {r}");
                seen_unequal = seen_unequal || !eq;
            }
        }
    }

    #[test]
    fn divergence_witness_for_line_versus_cycle() {
        let z = z_marking();
        let z5 = z_mod_marking(5);
        assert_eq!(divergence_witness(&z, &z5, 1).unwrap(), None);
        let w = divergence_witness(&z, &z5, 2).unwrap().unwrap();
        assert_eq!(w, vec![1, 1, 1, 1, 1]);
        assert_eq!(evaluate_word(&z, &w), 5);
        assert_eq!(evaluate_word(&z5, &w), 0);
        assert_eq!(divergence_witness(&z, &z, 6).unwrap(), None);
    }

    #[test]
    fn evaluate_word_walks_the_marking() {
        let z = z_marking();
        assert_eq!(evaluate_word(&z, &[]), 0);
        assert_eq!(evaluate_word(&z, &[1, 1, -1, 1]), 2);
    }

    #[test]
    #[should_panic(expected = "nonzero signed indices")]
    fn evaluate_word_rejects_zero_letters() {
        evaluate_word(&z_marking(), &[1, 0]);
    }

    #[test]
    fn matrix_group_ball_radius_one() {
        let p = Prime::new(2).unwrap();
        let b = ball(&gamma_marking(p), 1);
        // Identity plus fourteen distinct generator and inverse images.
        assert_eq!(b.vertex_count(), 15);
        // Seven edges out of the basepoint, seven returns from the inverse
        // vertices, and no other products land inside the ball.
        assert_eq!(b.edges().len(), 14);
        for k in 0..7 {
            assert!(b.edges().contains(&(0, k, k + 1)));
        }
    }

    #[test]
    fn quotient_marked_by_a_lattice_generator_diverges_immediately() {
        let p = Prime::new(2).unwrap();
        let x04 = GammaElt::elementary((0, 4), Rat::one());
        let whole = Marking::new(GammaOracle::new(p), vec![x04.clone()]);
        let quotient = Marking::new(
            GammaModMzOracle::new(p),
            vec![gamma::canonical_mod_mz(&x04)],
        );
        let w = divergence_witness(&whole, &quotient, 1).unwrap().unwrap();
        assert_eq!(w, vec![1]);
        let val = evaluate_word(&whole, &w);
        assert!(val.is_in_mz() && !val.is_identity());
        assert!(evaluate_word(&quotient, &w).is_identity_coset());
        assert_eq!(agreement_radius(&whole, &quotient, 3).unwrap(), 0);
    }

    #[test]
    fn full_markings_agree_at_radius_one() {
        let p = Prime::new(2).unwrap();
        let g = gamma_marking(p);
        let q = gamma_mod_mz_marking(p);
        assert!(balls_equal(&ball(&g, 1), &ball(&q, 1)).unwrap());
        assert_eq!(divergence_witness(&g, &q, 1).unwrap(), None);
    }
}
