//! The 5x5 matrix group family over Z[1/p] and its distinguished subgroups.
//!
//! An element is a block matrix
//!
//! ```text
//!   a  b  u02 u03 u04
//!   c  d  u12 u13 u14
//!   .  .  p^n2 u23 u24
//!   .  .  .   p^n3 u34
//!   .  .  .   .    1
//! ```
//!
//! with (a,b,c,d) in SL2(Z), n2, n3 in Z, and the nine u entries in Z[1/p].
//! Multiplication and inversion use the block structure directly; the
//! generic 5x5 rational product over [`to_matrix`] serves as an independent
//! oracle in tests.
//!
//! Subgroups: Upsilon (n2 = n3 = 0), Lambda (identity SL2 block), M (only
//! u04, u14 possibly nonzero), and M_Z (those two entries integral). M_Z is
//! normal, and central in Lambda; the quotient of the full group by M_Z is
//! the group of interest. Right cosets of M_Z have a canonical
//! representative obtained by reducing u04, u14 to their fractional parts:
//! right multiplication by M_Z shifts (u04, u14) by the SL2(Z)-image of
//! Z^2, which is Z^2 again, so the fractional part is a complete invariant.

use core::fmt;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::exact::{in_scaled_lattice, is_p_local, vp, Prime, Rat, Valuation};
use crate::linalg::QMat;

/// The nine populated upper-triangular positions, in row-major order.
pub const U_PAIRS: [(usize, usize); 9] = [
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

const U02: usize = 0;
const U03: usize = 1;
const U04: usize = 2;
const U12: usize = 3;
const U13: usize = 4;
const U14: usize = 5;
const U23: usize = 6;
const U24: usize = 7;
const U34: usize = 8;

/// Filtration degree of each u position: the number of elementary steps a
/// path from its row to its column takes through indices 2 and 3.
const U_DEGREE: [i64; 9] = [1, 2, 3, 1, 2, 3, 1, 2, 1];

fn u_index(i: usize, j: usize) -> usize {
    U_PAIRS
        .iter()
        .position(|&p| p == (i, j))
        .unwrap_or_else(|| panic!("({i},{j}) is not a populated position"))
}

/// Group element in structured form. Ordering and equality are structural,
/// which matches group equality because every field is canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GammaElt {
    sl2: [BigInt; 4],
    n2: i64,
    n3: i64,
    u: [Rat; 9],
}

/// Why an element fails validation against a given prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaError {
    Determinant,
    EntryNotPLocal { i: usize, j: usize },
}

impl fmt::Display for GammaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GammaError::Determinant => write!(f, "top-left block must have determinant 1"),
            GammaError::EntryNotPLocal { i, j } => {
                write!(f, "entry ({i},{j}) is not in Z[1/p]")
            }
        }
    }
}

fn zero_u() -> [Rat; 9] {
    core::array::from_fn(|_| Rat::zero())
}

impl GammaElt {
    pub fn identity() -> GammaElt {
        GammaElt {
            sl2: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()],
            n2: 0,
            n3: 0,
            u: zero_u(),
        }
    }

    pub fn from_parts(sl2: [BigInt; 4], n2: i64, n3: i64, u: [Rat; 9]) -> GammaElt {
        GammaElt { sl2, n2, n3, u }
    }

    pub fn from_small_parts(sl2: [i64; 4], n2: i64, n3: i64, u: [Rat; 9]) -> GammaElt {
        GammaElt::from_parts(sl2.map(BigInt::from), n2, n3, u)
    }

    /// Order-4 rotation generator of the SL2(Z) block.
    pub fn sl2_s() -> GammaElt {
        GammaElt::from_small_parts([0, -1, 1, 0], 0, 0, zero_u())
    }

    /// Shear generator of the SL2(Z) block.
    pub fn sl2_t() -> GammaElt {
        GammaElt::from_small_parts([1, 1, 0, 1], 0, 0, zero_u())
    }

    /// Torus generator scaling the third diagonal entry by p.
    pub fn torus_t2() -> GammaElt {
        GammaElt::from_small_parts([1, 0, 0, 1], 1, 0, zero_u())
    }

    /// Torus generator scaling the fourth diagonal entry by p.
    pub fn torus_t3() -> GammaElt {
        GammaElt::from_small_parts([1, 0, 0, 1], 0, 1, zero_u())
    }

    /// Elementary unipotent element with `q` at position (i, j).
    pub fn elementary(pair: (usize, usize), q: Rat) -> GammaElt {
        let mut u = zero_u();
        u[u_index(pair.0, pair.1)] = q;
        GammaElt::from_small_parts([1, 0, 0, 1], 0, 0, u)
    }

    pub fn sl2(&self) -> &[BigInt; 4] {
        &self.sl2
    }

    pub fn n2(&self) -> i64 {
        self.n2
    }

    pub fn n3(&self) -> i64 {
        self.n3
    }

    /// Entry at populated position (i, j).
    pub fn u(&self, i: usize, j: usize) -> &Rat {
        &self.u[u_index(i, j)]
    }

    pub fn u_entries(&self) -> &[Rat; 9] {
        &self.u
    }

    pub fn is_identity(&self) -> bool {
        self == &GammaElt::identity()
    }

    /// Validates the group invariants against the prime.
    pub fn check_valid(&self, p: Prime) -> Result<(), GammaError> {
        let [a, b, c, d] = &self.sl2;
        if a * d - b * c != BigInt::one() {
            return Err(GammaError::Determinant);
        }
        for (idx, x) in self.u.iter().enumerate() {
            if !is_p_local(x, p) {
                let (i, j) = U_PAIRS[idx];
                return Err(GammaError::EntryNotPLocal { i, j });
            }
        }
        Ok(())
    }

    /// The element as a dense 5x5 rational matrix.
    pub fn to_matrix(&self, p: Prime) -> QMat {
        let mut m = QMat::zeros(5, 5);
        let [a, b, c, d] = &self.sl2;
        m.set(0, 0, Rat::from_bigint(a.clone()));
        m.set(0, 1, Rat::from_bigint(b.clone()));
        m.set(1, 0, Rat::from_bigint(c.clone()));
        m.set(1, 1, Rat::from_bigint(d.clone()));
        m.set(2, 2, p.pow_rat(self.n2));
        m.set(3, 3, p.pow_rat(self.n3));
        m.set(4, 4, Rat::one());
        for (idx, &(i, j)) in U_PAIRS.iter().enumerate() {
            m.set(i, j, self.u[idx].clone());
        }
        m
    }

    /// In the subgroup with trivial torus part (n2 = n3 = 0)?
    pub fn is_in_upsilon(&self) -> bool {
        self.n2 == 0 && self.n3 == 0
    }

    /// In the subgroup with identity SL2 block?
    pub fn is_in_lambda(&self) -> bool {
        let [a, b, c, d] = &self.sl2;
        a.is_one() && b.is_zero() && c.is_zero() && d.is_one()
    }

    /// In the central subgroup M (only u04, u14 possibly nonzero)?
    pub fn is_in_m(&self) -> bool {
        self.is_in_lambda()
            && self.is_in_upsilon()
            && self
                .u
                .iter()
                .enumerate()
                .all(|(idx, x)| idx == U04 || idx == U14 || x.is_zero())
    }

    /// In the integral lattice M_Z of M?
    pub fn is_in_mz(&self) -> bool {
        self.is_in_m() && self.u[U04].is_integer() && self.u[U14].is_integer()
    }
}

fn sl2_mul(x: &[BigInt; 4], y: &[BigInt; 4]) -> [BigInt; 4] {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

/// Product g * h by block multiplication.
pub fn mul(p: Prime, g: &GammaElt, h: &GammaElt) -> GammaElt {
    let sl2 = sl2_mul(&g.sl2, &h.sl2);
    let [ga, gb, gc, gd] = g.sl2.clone().map(Rat::from_bigint);
    let p2g = p.pow_rat(g.n2);
    let p3g = p.pow_rat(g.n3);
    let p2h = p.pow_rat(h.n2);
    let p3h = p.pow_rat(h.n3);
    let gu = &g.u;
    let hu = &h.u;
    let mut u = zero_u();
    // Bottom-right 3x3 block: upper triangular times upper triangular.
    u[U23] = &(&p2g * &hu[U23]) + &(&gu[U23] * &p3h);
    u[U24] = &(&(&p2g * &hu[U24]) + &(&gu[U23] * &hu[U34])) + &gu[U24];
    u[U34] = &(&p3g * &hu[U34]) + &gu[U34];
    // Top-right 2x3 block: A_g * U_h + U_g * D_h.
    u[U02] = &(&(&ga * &hu[U02]) + &(&gb * &hu[U12])) + &(&gu[U02] * &p2h);
    u[U03] = &(&(&(&ga * &hu[U03]) + &(&gb * &hu[U13])) + &(&gu[U02] * &hu[U23]))
        + &(&gu[U03] * &p3h);
    u[U04] = &(&(&(&(&ga * &hu[U04]) + &(&gb * &hu[U14])) + &(&gu[U02] * &hu[U24]))
        + &(&gu[U03] * &hu[U34]))
        + &gu[U04];
    u[U12] = &(&(&gc * &hu[U02]) + &(&gd * &hu[U12])) + &(&gu[U12] * &p2h);
    u[U13] = &(&(&(&gc * &hu[U03]) + &(&gd * &hu[U13])) + &(&gu[U12] * &hu[U23]))
        + &(&gu[U13] * &p3h);
    u[U14] = &(&(&(&(&gc * &hu[U04]) + &(&gd * &hu[U14])) + &(&gu[U12] * &hu[U24]))
        + &(&gu[U13] * &hu[U34]))
        + &gu[U14];
    GammaElt {
        sl2,
        n2: g.n2 + h.n2,
        n3: g.n3 + h.n3,
        u,
    }
}

/// Inverse by block inversion: [[A,U],[0,D]]^-1 = [[A^-1, -A^-1 U D^-1], [0, D^-1]].
pub fn inv(p: Prime, g: &GammaElt) -> GammaElt {
    let [a, b, c, d] = &g.sl2;
    let sl2 = [d.clone(), -b, -c, a.clone()];
    let p3 = p.pow_rat(g.n3);
    let q2 = p.pow_rat(-g.n2);
    let q3 = p.pow_rat(-g.n3);
    let gu = &g.u;
    // D^-1 for D = [[p2, u23, u24], [0, p3, u34], [0, 0, 1]].
    let d23 = -(&(&gu[U23] * &q2) * &q3);
    let d24 = &(&(&gu[U23] * &gu[U34]) - &(&gu[U24] * &p3)) * &(&q2 * &q3);
    let d34 = -(&gu[U34] * &q3);
    // W = A^-1 * U, rows (d,-b) and (-c,a).
    let [ra, rb, rc, rd] = g.sl2.clone().map(Rat::from_bigint);
    let w = |col: usize| {
        let (top, bot) = (&gu[col], &gu[col + 3]);
        (
            &(&rd * top) - &(&rb * bot),
            &(&ra * bot) - &(&rc * top),
        )
    };
    let (w02, w12) = w(U02);
    let (w03, w13) = w(U03);
    let (w04, w14) = w(U04);
    let mut u = zero_u();
    u[U23] = d23.clone();
    u[U24] = d24.clone();
    u[U34] = d34.clone();
    // -W * D^-1 columns: (q2, 0, 0), (d23, q3, 0), (d24, d34, 1).
    u[U02] = -(&w02 * &q2);
    u[U12] = -(&w12 * &q2);
    u[U03] = -(&(&w02 * &d23) + &(&w03 * &q3));
    u[U13] = -(&(&w12 * &d23) + &(&w13 * &q3));
    u[U04] = -(&(&(&w02 * &d24) + &(&w03 * &d34)) + &w04);
    u[U14] = -(&(&(&w12 * &d24) + &(&w13 * &d34)) + &w14);
    GammaElt {
        sl2,
        n2: -g.n2,
        n3: -g.n3,
        u,
    }
}

/// Binary powering through [`mul`].
pub fn pow(p: Prime, g: &GammaElt, mut e: u64) -> GammaElt {
    let mut acc = GammaElt::identity();
    let mut base = g.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(p, &acc, &base);
        }
        base = mul(p, &base, &base);
        e >>= 1;
    }
    acc
}

/// h * g * h^-1.
pub fn conjugate(p: Prime, g: &GammaElt, h: &GammaElt) -> GammaElt {
    mul(p, &mul(p, h, g), &inv(p, h))
}

/// a * b * a^-1 * b^-1.
pub fn commutator(p: Prime, a: &GammaElt, b: &GammaElt) -> GammaElt {
    mul(p, &mul(p, a, b), &mul(p, &inv(p, a), &inv(p, b)))
}

/// Torus-trivial elements with all entries at filtration depth <= m: entry
/// of degree d must lie in p^(-d m) Z. The degrees are 1 for u02, u12, u23,
/// u34; 2 for u03, u13, u24; 3 for u04, u14. These subsets are subgroups.
pub fn is_in_upsilon_m(p: Prime, g: &GammaElt, m: u32) -> bool {
    assert!(g.is_in_upsilon(), "filtration applies inside Upsilon only");
    g.u
        .iter()
        .zip(U_DEGREE)
        .all(|(x, d)| in_scaled_lattice(x, p, -d * i64::from(m)))
}

/// The uncorrected filtration variant: u24 capped at depth m (not 2m) and
/// u34 left unconstrained. Not closed under multiplication; kept so the
/// self-test can exhibit a concrete closure counterexample.
pub fn is_in_upsilon_m_literal(p: Prime, g: &GammaElt, m: u32) -> bool {
    assert!(g.is_in_upsilon(), "filtration applies inside Upsilon only");
    let m = i64::from(m);
    let bound = [
        (U02, -m),
        (U12, -m),
        (U23, -m),
        (U24, -m),
        (U03, -2 * m),
        (U13, -2 * m),
        (U04, -3 * m),
        (U14, -3 * m),
    ];
    bound
        .iter()
        .all(|&(idx, k)| in_scaled_lattice(&g.u[idx], p, k))
}

/// Member of the nilpotent piece of the filtration (identity SL2 block and
/// torus-trivial, entries at depth <= m)?
pub fn is_in_xi_m(p: Prime, g: &GammaElt, m: u32) -> bool {
    g.is_in_upsilon() && g.is_in_lambda() && is_in_upsilon_m(p, g, m)
}

/// Torus exponents (n2, n3); a homomorphism onto Z^2 with kernel Upsilon.
pub fn proj_z2(g: &GammaElt) -> (i64, i64) {
    (g.n2, g.n3)
}

/// Canonical representative of the right coset g * M_Z.
///
/// Right multiplication by M_Z adds the SL2(Z)-image of Z^2 to (u04, u14);
/// that image is Z^2 itself, so reducing both entries to [0, 1) picks one
/// representative per coset and equal cosets reduce identically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CosetRep(GammaElt);

impl CosetRep {
    pub fn elt(&self) -> &GammaElt {
        &self.0
    }

    pub fn into_elt(self) -> GammaElt {
        self.0
    }

    pub fn is_identity_coset(&self) -> bool {
        self.0.is_identity()
    }
}

/// Reduces u04 and u14 to their fractional parts.
pub fn canonical_mod_mz(g: &GammaElt) -> CosetRep {
    let mut r = g.clone();
    r.u[U04] = r.u[U04].fract();
    r.u[U14] = r.u[U14].fract();
    CosetRep(r)
}

/// Exponent k of the order p^k of g*M_Z in M/M_Z.
pub fn order_exponent_in_m_mod_mz(p: Prime, g: &GammaElt) -> u32 {
    assert!(g.is_in_m(), "order is defined on members of M");
    let r = canonical_mod_mz(g);
    let depth = |x: &Rat| match vp(x, p) {
        Valuation::Finite(k) if k < 0 => (-k) as u32,
        _ => 0,
    };
    depth(r.elt().u(0, 4)).max(depth(r.elt().u(1, 4)))
}

/// Order of g*M_Z in M/M_Z as the integer p^k.
pub fn order_in_m_mod_mz(p: Prime, g: &GammaElt) -> BigInt {
    p.to_bigint().pow(order_exponent_in_m_mod_mz(p, g))
}

/// All p^2 - 1 elements of order p in M/M_Z: entries (a/p, b/p) with
/// 0 <= a, b < p, not both zero. Every nontrivial element of M/M_Z has a
/// power in this set, which is what makes it discriminating.
pub fn discriminating_set(p: Prime) -> Vec<CosetRep> {
    let mut out = Vec::with_capacity((p.get() * p.get() - 1) as usize);
    for a in 0..p.get() {
        for b in 0..p.get() {
            if a == 0 && b == 0 {
                continue;
            }
            let mut u = zero_u();
            u[U04] = Rat::new(BigInt::from(a), p.to_bigint());
            u[U14] = Rat::new(BigInt::from(b), p.to_bigint());
            out.push(CosetRep(GammaElt::from_small_parts([1, 0, 0, 1], 0, 0, u)));
        }
    }
    out
}

/// For g in M but not M_Z of order p^k, the power g^(p^(k-1)) has order
/// exactly p, so its coset lands in the discriminating set.
pub fn order_p_witness(p: Prime, g: &GammaElt) -> CosetRep {
    assert!(g.is_in_m(), "witness is defined on members of M");
    assert!(!g.is_in_mz(), "witness needs a nontrivial coset");
    let k = order_exponent_in_m_mod_mz(p, g);
    debug_assert!(k >= 1);
    let e = p.get().checked_pow(k - 1).expect("exponent fits in u64");
    canonical_mod_mz(&pow(p, g, e))
}

/// The seven standard generators, labeled.
pub fn default_generators() -> Vec<(&'static str, GammaElt)> {
    vec![
        ("S", GammaElt::sl2_s()),
        ("T", GammaElt::sl2_t()),
        ("t2", GammaElt::torus_t2()),
        ("t3", GammaElt::torus_t3()),
        ("x02", GammaElt::elementary((0, 2), Rat::one())),
        ("x23", GammaElt::elementary((2, 3), Rat::one())),
        ("x34", GammaElt::elementary((3, 4), Rat::one())),
    ]
}

pub mod sample {
    //! Deterministic random elements for the self-test suites. All
    //! distributions are bounded and every function is a pure function of
    //! the generator state.

    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Size bounds for sampled elements.
    #[derive(Clone, Copy, Debug)]
    pub struct SampleBounds {
        /// Length of the random word in the SL2(Z) generators.
        pub sl2_word_len: usize,
        /// Torus exponents are drawn from [-exponent_bound, exponent_bound].
        pub exponent_bound: i64,
        /// u entries use denominators up to p^depth.
        pub depth: u32,
        /// u numerators are drawn from [-magnitude, magnitude].
        pub magnitude: i64,
    }

    impl Default for SampleBounds {
        fn default() -> SampleBounds {
            SampleBounds {
                sl2_word_len: 6,
                exponent_bound: 2,
                depth: 2,
                magnitude: 9,
            }
        }
    }

    /// Generator stream for one trial: same seed, per-trial stream index.
    pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        rng
    }

    /// Uniform n / p^e with |n| <= magnitude and 0 <= e <= depth.
    pub fn p_local_rat<R: Rng>(p: Prime, depth: u32, magnitude: i64, rng: &mut R) -> Rat {
        let num = rng.gen_range(-magnitude..=magnitude);
        let e = rng.gen_range(0..=depth);
        Rat::new(BigInt::from(num), p.to_bigint().pow(e))
    }

    fn random_sl2<R: Rng>(len: usize, rng: &mut R) -> [BigInt; 4] {
        let steps: [[i64; 4]; 4] = [
            [0, -1, 1, 0], // S
            [0, 1, -1, 0], // S^-1
            [1, 1, 0, 1],  // T
            [1, -1, 0, 1], // T^-1
        ];
        let mut acc = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
        for _ in 0..len {
            let s = steps[rng.gen_range(0..4)].map(BigInt::from);
            acc = sl2_mul(&acc, &s);
        }
        acc
    }

    /// Random group element within the bounds.
    pub fn element<R: Rng>(p: Prime, bounds: &SampleBounds, rng: &mut R) -> GammaElt {
        let sl2 = random_sl2(bounds.sl2_word_len, rng);
        let n2 = rng.gen_range(-bounds.exponent_bound..=bounds.exponent_bound);
        let n3 = rng.gen_range(-bounds.exponent_bound..=bounds.exponent_bound);
        let u = core::array::from_fn(|_| p_local_rat(p, bounds.depth, bounds.magnitude, rng));
        GammaElt::from_parts(sl2, n2, n3, u)
    }

    /// Deterministic element from a bare seed.
    pub fn element_seeded(p: Prime, bounds: &SampleBounds, seed: u64) -> GammaElt {
        element(p, bounds, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Random member of Upsilon (torus-trivial).
    pub fn upsilon<R: Rng>(p: Prime, bounds: &SampleBounds, rng: &mut R) -> GammaElt {
        let mut g = element(p, bounds, rng);
        g.n2 = 0;
        g.n3 = 0;
        g
    }

    /// Random member of the depth-m filtration subgroup.
    pub fn upsilon_m<R: Rng>(
        p: Prime,
        m: u32,
        bounds: &SampleBounds,
        rng: &mut R,
    ) -> GammaElt {
        let sl2 = random_sl2(bounds.sl2_word_len, rng);
        let u = core::array::from_fn(|idx| {
            let depth = (U_DEGREE[idx] as u32) * m;
            p_local_rat(p, depth, bounds.magnitude, rng)
        });
        GammaElt::from_parts(sl2, 0, 0, u)
    }

    /// Random member of the nilpotent filtration piece.
    pub fn xi_m<R: Rng>(p: Prime, m: u32, bounds: &SampleBounds, rng: &mut R) -> GammaElt {
        let mut g = upsilon_m(p, m, bounds, rng);
        g.sl2 = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
        g
    }

    /// Random member of M.
    pub fn in_m<R: Rng>(p: Prime, bounds: &SampleBounds, rng: &mut R) -> GammaElt {
        let mut u = zero_u();
        u[U04] = p_local_rat(p, bounds.depth, bounds.magnitude, rng);
        u[U14] = p_local_rat(p, bounds.depth, bounds.magnitude, rng);
        GammaElt::from_parts(
            [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()],
            0,
            0,
            u,
        )
    }

    /// Random member of M_Z.
    pub fn in_mz<R: Rng>(bounds: &SampleBounds, rng: &mut R) -> GammaElt {
        let mut u = zero_u();
        u[U04] = Rat::from_int(rng.gen_range(-bounds.magnitude..=bounds.magnitude));
        u[U14] = Rat::from_int(rng.gen_range(-bounds.magnitude..=bounds.magnitude));
        GammaElt::from_parts(
            [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()],
            0,
            0,
            u,
        )
    }

    /// Random member of M outside M_Z: u04 gets a denominator that is a
    /// genuine power of p.
    pub fn in_m_not_mz<R: Rng>(p: Prime, bounds: &SampleBounds, rng: &mut R) -> GammaElt {
        let mut g = in_m(p, bounds, rng);
        let num = loop {
            let n = rng.gen_range(1..=bounds.magnitude.max(1));
            if n as u64 % p.get() != 0 {
                break n;
            }
        };
        let e = rng.gen_range(1..=bounds.depth.max(1));
        g.u[U04] = Rat::new(BigInt::from(num), p.to_bigint().pow(e));
        debug_assert!(!g.is_in_mz());
        g
    }
}

pub mod selftest {
    //! Randomized invariant suite over the group operations. Every law the
    //! structured implementations rely on is re-checked on sampled elements,
    //! and the one deliberately broken filtration variant is demonstrated to
    //! be broken.

    use super::sample::{self, SampleBounds};
    use super::*;
    use alloc::format;

    /// A failing instance of one named law.
    #[derive(Clone, Debug)]
    pub struct Counterexample {
        pub trial: u64,
        pub description: String,
        pub elements: Vec<(String, GammaElt)>,
    }

    /// Outcome of one law over all trials.
    #[derive(Clone, Debug)]
    pub struct CheckResult {
        pub name: &'static str,
        pub passed: bool,
        pub counterexample: Option<Counterexample>,
    }

    /// The fixed closure counterexample for the uncorrected filtration.
    #[derive(Clone, Debug)]
    pub struct LiteralClosureDemo {
        pub m: u32,
        pub a: GammaElt,
        pub b: GammaElt,
        pub product: GammaElt,
        pub factors_in_literal: bool,
        pub product_in_literal: bool,
        pub product_in_corrected: bool,
    }

    impl LiteralClosureDemo {
        /// The demo succeeds when both factors satisfy the literal condition
        /// but their product does not, while the corrected condition holds.
        pub fn demonstrates_failure(&self) -> bool {
            self.factors_in_literal && !self.product_in_literal && self.product_in_corrected
        }
    }

    #[derive(Clone, Debug)]
    pub struct SelftestReport {
        pub p: u64,
        pub trials: u64,
        pub seed: u64,
        pub checks: Vec<CheckResult>,
        pub literal_closure_demo: LiteralClosureDemo,
        pub passed: bool,
    }

    impl SelftestReport {
        pub fn first_counterexample(&self) -> Option<&Counterexample> {
            self.checks.iter().find_map(|c| c.counterexample.as_ref())
        }
    }

    /// Elements of the uncorrected depth-m condition whose product escapes
    /// it: u23 = p^-m meets u34 = p^-m and pushes u24 to p^-2m.
    pub fn literal_closure_counterexample(p: Prime, m: u32) -> (GammaElt, GammaElt) {
        let q = p.pow_rat(-i64::from(m));
        (
            GammaElt::elementary((2, 3), q.clone()),
            GammaElt::elementary((3, 4), q),
        )
    }

    struct Check {
        name: &'static str,
        failure: Option<Counterexample>,
    }

    struct Suite {
        checks: Vec<Check>,
    }

    impl Suite {
        fn new(names: &[&'static str]) -> Suite {
            Suite {
                checks: names
                    .iter()
                    .map(|&name| Check {
                        name,
                        failure: None,
                    })
                    .collect(),
            }
        }

        fn record<F>(&mut self, name: &str, holds: bool, witness: F)
        where
            F: FnOnce() -> Counterexample,
        {
            let check = self
                .checks
                .iter_mut()
                .find(|c| c.name == name)
                .expect("check name registered");
            if !holds && check.failure.is_none() {
                check.failure = Some(witness());
            }
        }
    }

    const CHECK_NAMES: [&str; 16] = [
        "mul_associative",
        "identity_neutral",
        "inverse_law",
        "products_stay_valid",
        "normal_upsilon",
        "normal_lambda",
        "normal_m",
        "normal_mz",
        "proj_z2_homomorphism",
        "proj_z2_kernel_is_upsilon",
        "upsilon_m_nested",
        "upsilon_m_exhausts_upsilon",
        "upsilon_m_closed_corrected",
        "xi_m_nilpotent_depth_4",
        "coset_reduction_constant_on_cosets",
        "coset_reduction_idempotent",
    ];

    /// Runs `trials` independent trials, each on its own generator stream.
    pub fn run(p: Prime, trials: u64, seed: u64) -> SelftestReport {
        let bounds = SampleBounds::default();
        let mut suite = Suite::new(&CHECK_NAMES);
        for trial in 0..trials {
            let mut rng = sample::trial_rng(seed, trial);
            let a = sample::element(p, &bounds, &mut rng);
            let b = sample::element(p, &bounds, &mut rng);
            let c = sample::element(p, &bounds, &mut rng);
            let named = |pairs: &[(&str, &GammaElt)]| -> Vec<(String, GammaElt)> {
                pairs
                    .iter()
                    .map(|(n, g)| (String::from(*n), (*g).clone()))
                    .collect()
            };

            let ab = mul(p, &a, &b);
            let assoc = mul(p, &ab, &c) == mul(p, &a, &mul(p, &b, &c));
            suite.record("mul_associative", assoc, || Counterexample {
                trial,
                description: String::from("(a*b)*c differs from a*(b*c)"),
                elements: named(&[("a", &a), ("b", &b), ("c", &c)]),
            });

            let e = GammaElt::identity();
            let neutral = mul(p, &e, &a) == a && mul(p, &a, &e) == a;
            suite.record("identity_neutral", neutral, || Counterexample {
                trial,
                description: String::from("identity is not neutral"),
                elements: named(&[("a", &a)]),
            });

            let ai = inv(p, &a);
            let inverse = mul(p, &a, &ai).is_identity() && mul(p, &ai, &a).is_identity();
            suite.record("inverse_law", inverse, || Counterexample {
                trial,
                description: String::from("a * a^-1 is not the identity"),
                elements: named(&[("a", &a)]),
            });

            let valid = ab.check_valid(p).is_ok() && ai.check_valid(p).is_ok();
            suite.record("products_stay_valid", valid, || Counterexample {
                trial,
                description: String::from("product or inverse violates the invariants"),
                elements: named(&[("a", &a), ("b", &b)]),
            });

            // Normality of the four distinguished subgroups.
            let up = sample::upsilon(p, &bounds, &mut rng);
            let conj_up = conjugate(p, &up, &a);
            suite.record("normal_upsilon", conj_up.is_in_upsilon(), || Counterexample {
                trial,
                description: String::from("conjugate of an Upsilon member left Upsilon"),
                elements: named(&[("h", &up), ("g", &a)]),
            });

            let lam = {
                let mut g = sample::element(p, &bounds, &mut rng);
                g.sl2 = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
                g
            };
            let conj_lam = conjugate(p, &lam, &a);
            suite.record("normal_lambda", conj_lam.is_in_lambda(), || Counterexample {
                trial,
                description: String::from("conjugate of a Lambda member left Lambda"),
                elements: named(&[("h", &lam), ("g", &a)]),
            });

            let m_elt = sample::in_m(p, &bounds, &mut rng);
            let conj_m = conjugate(p, &m_elt, &a);
            suite.record("normal_m", conj_m.is_in_m(), || Counterexample {
                trial,
                description: String::from("conjugate of an M member left M"),
                elements: named(&[("h", &m_elt), ("g", &a)]),
            });

            let mz_elt = sample::in_mz(&bounds, &mut rng);
            let conj_mz = conjugate(p, &mz_elt, &a);
            suite.record("normal_mz", conj_mz.is_in_mz(), || Counterexample {
                trial,
                description: String::from("conjugate of an M_Z member left M_Z"),
                elements: named(&[("h", &mz_elt), ("g", &a)]),
            });

            let hom = {
                let (x2, x3) = proj_z2(&ab);
                let (a2, a3) = proj_z2(&a);
                let (b2, b3) = proj_z2(&b);
                x2 == a2 + b2 && x3 == a3 + b3
            };
            suite.record("proj_z2_homomorphism", hom, || Counterexample {
                trial,
                description: String::from("torus projection is not additive"),
                elements: named(&[("a", &a), ("b", &b)]),
            });

            let kernel = (proj_z2(&a) == (0, 0)) == a.is_in_upsilon()
                && proj_z2(&up) == (0, 0);
            suite.record("proj_z2_kernel_is_upsilon", kernel, || Counterexample {
                trial,
                description: String::from("kernel of the torus projection is not Upsilon"),
                elements: named(&[("a", &a)]),
            });

            // Filtration behavior at depths 0..2.
            let m_depth = (trial % 3) as u32;
            let um = sample::upsilon_m(p, m_depth, &bounds, &mut rng);
            suite.record(
                "upsilon_m_nested",
                is_in_upsilon_m(p, &um, m_depth) && is_in_upsilon_m(p, &um, m_depth + 1),
                || Counterexample {
                    trial,
                    description: format!("depth-{m_depth} member missing at depth {}", m_depth + 1),
                    elements: named(&[("g", &um)]),
                },
            );

            let exhaust_m = up
                .u_entries()
                .iter()
                .filter_map(|x| vp(x, p).finite())
                .map(|k| (-k).max(0) as u32)
                .max()
                .unwrap_or(0);
            suite.record(
                "upsilon_m_exhausts_upsilon",
                is_in_upsilon_m(p, &up, exhaust_m),
                || Counterexample {
                    trial,
                    description: format!("Upsilon member missing at depth {exhaust_m}"),
                    elements: named(&[("g", &up)]),
                },
            );

            let um2 = sample::upsilon_m(p, m_depth, &bounds, &mut rng);
            let closed = is_in_upsilon_m(p, &mul(p, &um, &um2), m_depth)
                && is_in_upsilon_m(p, &inv(p, &um), m_depth);
            suite.record("upsilon_m_closed_corrected", closed, || Counterexample {
                trial,
                description: format!("depth-{m_depth} subgroup not closed"),
                elements: named(&[("a", &um), ("b", &um2)]),
            });

            let (x1, x2, x3, x4) = (
                sample::xi_m(p, 1, &bounds, &mut rng),
                sample::xi_m(p, 1, &bounds, &mut rng),
                sample::xi_m(p, 1, &bounds, &mut rng),
                sample::xi_m(p, 1, &bounds, &mut rng),
            );
            let c2 = commutator(p, &commutator(p, &x1, &x2), &x3);
            let c3 = commutator(p, &c2, &x4);
            suite.record(
                "xi_m_nilpotent_depth_4",
                c2.is_in_m() && c3.is_identity(),
                || Counterexample {
                    trial,
                    description: String::from("length-4 commutator of Xi_m members is nontrivial"),
                    elements: named(&[("x1", &x1), ("x2", &x2), ("x3", &x3), ("x4", &x4)]),
                },
            );

            let z = sample::in_mz(&bounds, &mut rng);
            let constant = canonical_mod_mz(&mul(p, &a, &z)) == canonical_mod_mz(&a);
            suite.record(
                "coset_reduction_constant_on_cosets",
                constant,
                || Counterexample {
                    trial,
                    description: String::from("reduction differs across one coset"),
                    elements: named(&[("g", &a), ("z", &z)]),
                },
            );

            let reduced = canonical_mod_mz(&a);
            let idem = canonical_mod_mz(reduced.elt()) == reduced;
            suite.record("coset_reduction_idempotent", idem, || Counterexample {
                trial,
                description: String::from("reduction is not idempotent"),
                elements: named(&[("g", &a)]),
            });
        }

        let (da, db) = literal_closure_counterexample(p, 1);
        let product = mul(p, &da, &db);
        let demo = LiteralClosureDemo {
            m: 1,
            factors_in_literal: is_in_upsilon_m_literal(p, &da, 1)
                && is_in_upsilon_m_literal(p, &db, 1),
            product_in_literal: is_in_upsilon_m_literal(p, &product, 1),
            product_in_corrected: is_in_upsilon_m(p, &product, 1),
            a: da,
            b: db,
            product,
        };

        let checks: Vec<CheckResult> = suite
            .checks
            .into_iter()
            .map(|c| CheckResult {
                name: c.name,
                passed: c.failure.is_none(),
                counterexample: c.failure,
            })
            .collect();
        let passed = checks.iter().all(|c| c.passed) && demo.demonstrates_failure();
        SelftestReport {
            p: p.get(),
            trials,
            seed,
            checks,
            literal_closure_demo: demo,
            passed,
        }
    }
}
