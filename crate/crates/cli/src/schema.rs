//! JSON data-transfer types. Field order in each struct is the serialized
//! order, and every map is a `BTreeMap`, so identical inputs always produce
//! byte-identical reports.
//!
//! Rationals are strings `"num/den"` with `"/1"` omitted for integers.
//! Matrices are arrays of rows of such strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use abelscope_core::exact::Rat;
use abelscope_core::gamma::{self, GammaElt, U_PAIRS};
use abelscope_core::homology::{AbelsVerdict, Condition1, Condition2};
use abelscope_core::liealg::{LieAlgebra, WeightVector};
use abelscope_core::marked::BallGraph;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Algebra files

/// On-disk form of a weight-graded Lie algebra:
/// `{"dim": n, "rank": r, "labels": [...], "weights": [[...], ...],
///   "brackets": [[i, j, [["num/den", target], ...]], ...]}`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct AlgebraFile {
    pub dim: usize,
    pub rank: usize,
    pub labels: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    pub brackets: Vec<BracketEntry>,
}

/// One bracket row `[i, j, terms]` giving the expansion of `[x_i, x_j]`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct BracketEntry(pub usize, pub usize, pub Vec<(String, usize)>);

impl AlgebraFile {
    pub fn from_algebra(l: &LieAlgebra) -> AlgebraFile {
        AlgebraFile {
            dim: l.dim(),
            rank: l.rank(),
            labels: l.labels().to_vec(),
            weights: l.weights().iter().map(|w| w.0.clone()).collect(),
            brackets: l
                .bracket_entries()
                .map(|(&(i, j), terms)| {
                    BracketEntry(
                        i,
                        j,
                        terms.iter().map(|(t, c)| (c.to_string(), *t)).collect(),
                    )
                })
                .collect(),
        }
    }

    /// Validates counts and parses coefficients; structural errors from the
    /// algebra constructor are passed through as messages.
    pub fn into_algebra(self) -> Result<LieAlgebra, String> {
        if self.labels.len() != self.dim {
            return Err(format!(
                "dim is {} but there are {} labels",
                self.dim,
                self.labels.len()
            ));
        }
        if self.weights.len() != self.dim {
            return Err(format!(
                "dim is {} but there are {} weight vectors",
                self.dim,
                self.weights.len()
            ));
        }
        let weights = self.weights.into_iter().map(WeightVector).collect();
        let mut entries = Vec::with_capacity(self.brackets.len());
        for BracketEntry(i, j, terms) in self.brackets {
            let mut parsed = Vec::with_capacity(terms.len());
            for (coeff, target) in terms {
                let c = Rat::from_str(&coeff).map_err(|e| {
                    format!("bracket ({i},{j}): bad coefficient {coeff:?}: {e}")
                })?;
                parsed.push((target, c));
            }
            entries.push((i, j, parsed));
        }
        LieAlgebra::new(self.labels, self.rank, weights, entries).map_err(|e| e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Group elements

/// Group element with the integer block flattened row-major and the nine
/// upper-triangular entries keyed by position (`"02"` through `"34"`).
#[derive(Serialize, Debug, Clone)]
pub struct GammaEltDto {
    pub sl2: [i64; 4],
    pub n2: i64,
    pub n3: i64,
    pub u: BTreeMap<String, String>,
}

impl From<&GammaElt> for GammaEltDto {
    fn from(g: &GammaElt) -> GammaEltDto {
        let sl2 = core::array::from_fn(|k| {
            i64::try_from(&g.sl2()[k]).expect("integer block entry fits in i64")
        });
        let u = U_PAIRS
            .iter()
            .zip(g.u_entries())
            .map(|(&(i, j), q)| (format!("{i}{j}"), q.to_string()))
            .collect();
        GammaEltDto {
            sl2,
            n2: g.n2(),
            n3: g.n3(),
            u,
        }
    }
}

// ---------------------------------------------------------------------------
// Cayley balls

/// Ball of a marked group: vertices are BFS discovery indices (0 = identity),
/// edges are `[source, generator, target]`.
#[derive(Serialize, Debug, Clone)]
pub struct BallDto {
    pub radius: u32,
    pub vertices: usize,
    pub edges: Vec<[usize; 3]>,
    pub depths: Vec<u32>,
}

impl From<&BallGraph> for BallDto {
    fn from(b: &BallGraph) -> BallDto {
        BallDto {
            radius: b.radius(),
            vertices: b.vertex_count(),
            edges: b.edges().iter().map(|&(s, g, t)| [s, g, t]).collect(),
            depths: b.depths().to_vec(),
        }
    }
}

/// Side-by-side report for `ball --compare`.
#[derive(Serialize, Debug, Clone)]
pub struct BallCompareDto {
    pub preset: String,
    pub compare: String,
    pub radius: u32,
    pub equal: bool,
    pub left: BallDto,
    pub right: BallDto,
}

// ---------------------------------------------------------------------------
// Group self-test

#[derive(Serialize, Debug, Clone)]
pub struct CounterexampleDto {
    pub trial: u64,
    pub description: String,
    pub elements: Vec<NamedEltDto>,
}

#[derive(Serialize, Debug, Clone)]
pub struct NamedEltDto {
    pub name: String,
    pub element: GammaEltDto,
}

#[derive(Serialize, Debug, Clone)]
pub struct CheckDto {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleDto>,
}

/// The recorded demonstration that the uncorrected filtration bound is not
/// closed under multiplication while the corrected one is.
#[derive(Serialize, Debug, Clone)]
pub struct LiteralDemoDto {
    pub m: u32,
    pub a: GammaEltDto,
    pub b: GammaEltDto,
    pub product: GammaEltDto,
    pub factors_in_literal: bool,
    pub product_in_literal: bool,
    pub product_in_corrected: bool,
    pub demonstrates_failure: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct SelftestDto {
    pub p: u64,
    pub trials: u64,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckDto>,
    pub literal_closure_demo: LiteralDemoDto,
}

impl SelftestDto {
    pub fn from_report(r: &gamma::selftest::SelftestReport) -> SelftestDto {
        SelftestDto {
            p: r.p,
            trials: r.trials,
            seed: r.seed,
            passed: r.passed,
            checks: r
                .checks
                .iter()
                .map(|c| CheckDto {
                    name: c.name.to_string(),
                    passed: c.passed,
                    counterexample: c.counterexample.as_ref().map(|cx| CounterexampleDto {
                        trial: cx.trial,
                        description: cx.description.clone(),
                        elements: cx
                            .elements
                            .iter()
                            .map(|(name, g)| NamedEltDto {
                                name: name.clone(),
                                element: GammaEltDto::from(g),
                            })
                            .collect(),
                    }),
                })
                .collect(),
            literal_closure_demo: LiteralDemoDto {
                m: r.literal_closure_demo.m,
                a: GammaEltDto::from(&r.literal_closure_demo.a),
                b: GammaEltDto::from(&r.literal_closure_demo.b),
                product: GammaEltDto::from(&r.literal_closure_demo.product),
                factors_in_literal: r.literal_closure_demo.factors_in_literal,
                product_in_literal: r.literal_closure_demo.product_in_literal,
                product_in_corrected: r.literal_closure_demo.product_in_corrected,
                demonstrates_failure: r.literal_closure_demo.demonstrates_failure(),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Presentation verdict

#[derive(Serialize, Debug, Clone)]
pub struct Condition1Dto {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_pair: Option<[Vec<i64>; 2]>,
}

impl From<&Condition1> for Condition1Dto {
    fn from(c: &Condition1) -> Condition1Dto {
        Condition1Dto {
            pass: c.pass,
            offending_pair: c
                .offending_pair
                .as_ref()
                .map(|(a, b)| [a.0.clone(), b.0.clone()]),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct Condition2Dto {
    pub pass: bool,
    pub h2_weight0_dim: usize,
}

impl From<&Condition2> for Condition2Dto {
    fn from(c: &Condition2) -> Condition2Dto {
        Condition2Dto {
            pass: c.pass,
            h2_weight0_dim: c.h2_weight0_dim,
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct VerdictDto {
    pub condition1: Condition1Dto,
    pub condition2: Condition2Dto,
    pub finitely_presented: bool,
}

impl From<&AbelsVerdict> for VerdictDto {
    fn from(v: &AbelsVerdict) -> VerdictDto {
        VerdictDto {
            condition1: Condition1Dto::from(&v.condition1),
            condition2: Condition2Dto::from(&v.condition2),
            finitely_presented: v.finitely_presented,
        }
    }
}

/// Report for `algebra check`: the file that was checked plus the verdict.
#[derive(Serialize, Debug, Clone)]
pub struct AlgebraCheckDto {
    pub file: String,
    pub dim: usize,
    pub rank: usize,
    #[serde(flatten)]
    pub verdict: VerdictDto,
}

// ---------------------------------------------------------------------------
// Full verification report

/// Weight vector together with its multiplicity, serialized `[[w...], count]`.
#[derive(Serialize, Debug, Clone)]
pub struct WeightCountDto(pub Vec<i64>, pub usize);

#[derive(Serialize, Debug, Clone)]
pub struct AlgebraSectionDto {
    pub dim: usize,
    pub rank: usize,
    pub labels: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    pub weight_multiset: Vec<WeightCountDto>,
    pub abelianization_weights: Vec<WeightCountDto>,
}

/// One checked instance of a closed-form preimage identity.
#[derive(Serialize, Debug, Clone)]
pub struct PreimageCaseDto {
    pub lhs: String,
    pub preimage_triple: String,
    pub exact: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct PreimageIdentityDto {
    pub statement: String,
    pub cases: Vec<PreimageCaseDto>,
}

/// Condensed self-test result embedded in the verification report.
#[derive(Serialize, Debug, Clone)]
pub struct SelftestSummaryDto {
    pub p: u64,
    pub trials: u64,
    pub seed: u64,
    pub checks_total: usize,
    pub checks_passed: usize,
    pub literal_closure_counterexample_recorded: bool,
    pub passed: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct VerifyReportDto {
    pub p: u64,
    pub algebra: AlgebraSectionDto,
    pub condition1: Condition1Dto,
    pub weight0_wedge_basis: Vec<String>,
    pub kernel0_basis: Vec<Vec<String>>,
    pub preimage_identities: Vec<PreimageIdentityDto>,
    pub condition2: Condition2Dto,
    pub group_selftest: SelftestSummaryDto,
    pub finitely_presented: bool,
}

/// Pretty JSON with a stable layout (serde field order, two-space indent).
pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        std::fs::read_to_string(path).expect("fixture file exists")
    }

    fn parse_fixture(name: &str) -> LieAlgebra {
        let file: AlgebraFile = serde_json::from_str(&fixture(name)).expect("fixture parses");
        file.into_algebra().expect("fixture is a valid table")
    }

    #[test]
    fn committed_fixtures_round_trip_to_the_builtin_algebras() {
        assert_eq!(parse_fixture("gamma_unipotent"), LieAlgebra::gamma_unipotent());
        assert_eq!(parse_fixture("abels4"), LieAlgebra::abels4());
        assert_eq!(
            parse_fixture("abelian_pair"),
            LieAlgebra::abelian(vec![WeightVector(vec![1, 0]), WeightVector(vec![-1, 0])])
        );
        assert_eq!(parse_fixture("jacobi_violation"), LieAlgebra::jacobi_violation());
    }

    #[test]
    fn algebra_serialization_round_trips_through_json() {
        let l = LieAlgebra::gamma_unipotent();
        let json = to_pretty_json(&AlgebraFile::from_algebra(&l));
        let back: AlgebraFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_algebra().unwrap(), l);
    }

    #[test]
    fn label_count_mismatch_is_rejected() {
        let mut file: AlgebraFile = serde_json::from_str(&fixture("abels4")).unwrap();
        file.labels.pop();
        let err = file.into_algebra().unwrap_err();
        assert!(err.contains("labels"), "unexpected message: {err}");
    }

    #[test]
    fn bad_coefficient_strings_are_rejected() {
        let mut file: AlgebraFile = serde_json::from_str(&fixture("gamma_unipotent")).unwrap();
        file.brackets[0].2[0].0 = "one".to_string();
        let err = file.into_algebra().unwrap_err();
        assert!(err.contains("coefficient"), "unexpected message: {err}");
    }

    #[test]
    fn group_element_serializes_with_all_nine_entries() {
        let g = GammaElt::identity();
        let dto = GammaEltDto::from(&g);
        assert_eq!(dto.sl2, [1, 0, 0, 1]);
        assert_eq!(dto.u.len(), 9);
        let keys: Vec<&str> = dto.u.keys().map(String::as_str).collect();
        assert_eq!(keys, ["02", "03", "04", "12", "13", "14", "23", "24", "34"]);
        assert!(dto.u.values().all(|v| v == "0"));
    }
}
