//! Builds the full verification report and renders every report kind as
//! human-readable text. The text is a rendering of the same data as the
//! JSON, never additional information.

use abelscope_core::exact::{Prime, Rat};
use abelscope_core::gamma::selftest;
use abelscope_core::homology::{
    abels_check, d3_matrix, kernel_weight_basis, pair_label, pair_position, triple_label,
    wedge_triples, weight_positions,
};
use abelscope_core::liealg::{LieAlgebra, WeightVector};

use crate::schema::{
    AlgebraSectionDto, BallCompareDto, BallDto, PreimageCaseDto, PreimageIdentityDto, SelftestDto,
    SelftestSummaryDto, VerdictDto, VerifyReportDto, WeightCountDto,
};

/// Trial count of the self-test embedded in the verification report. Fixed
/// (rather than configurable) so the report stays fast and deterministic;
/// `group selftest` exposes the full knobs.
pub const VERIFY_SELFTEST_TRIALS: u64 = 300;
pub const VERIFY_SELFTEST_SEED: u64 = 0;

/// A closed-form boundary preimage to check: signed degree-2 monomials on
/// the left, a single degree-3 monomial whose boundary should equal them.
struct PreimageCase {
    lhs_terms: &'static [((usize, usize), i64)],
    triple: (usize, usize, usize),
}

struct PreimageIdentity {
    statement: &'static str,
    cases: &'static [PreimageCase],
}

const PREIMAGE_IDENTITIES: [PreimageIdentity; 2] = [
    PreimageIdentity {
        statement: "for i in {0, 1}, the weight-0 cycle ei2^e24 - ei3^e34 is the boundary \
                    of ei2^e23^e34",
        cases: &[
            PreimageCase {
                lhs_terms: &[((0, 5), 1), ((2, 6), -1)],
                triple: (0, 4, 6),
            },
            PreimageCase {
                lhs_terms: &[((1, 5), 1), ((3, 6), -1)],
                triple: (1, 4, 6),
            },
        ],
    },
    PreimageIdentity {
        statement: "the remaining weight-0 cycle e04^e14 is the boundary of e12^e24^e04",
        cases: &[PreimageCase {
            lhs_terms: &[((7, 8), 1)],
            triple: (1, 5, 7),
        }],
    },
];

fn weight_counts(map: &std::collections::BTreeMap<WeightVector, usize>) -> Vec<WeightCountDto> {
    map.iter()
        .map(|(w, &count)| WeightCountDto(w.0.clone(), count))
        .collect()
}

/// Checks one closed-form preimage exactly: the boundary matrix column of
/// the named triple must equal the signed sum of the named pair monomials.
fn check_preimage(l: &LieAlgebra, d3: &abelscope_core::linalg::QMat, case: &PreimageCase) -> PreimageCaseDto {
    let n = l.dim();
    let pairs = d3.rows();
    let mut lhs = vec![Rat::zero(); pairs];
    let mut lhs_text = String::new();
    for (idx, &((i, j), sign)) in case.lhs_terms.iter().enumerate() {
        let pos = pair_position(n, i, j);
        lhs[pos] = Rat::from_int(sign);
        if idx > 0 || sign < 0 {
            lhs_text.push_str(if sign < 0 { " - " } else { " + " });
        }
        lhs_text.push_str(&pair_label(l, pos));
    }
    let tpos = wedge_triples(n)
        .iter()
        .position(|&t| t == case.triple)
        .expect("named triple is a valid wedge monomial");
    let exact = (0..pairs).all(|r| *d3.get(r, tpos) == lhs[r]);
    PreimageCaseDto {
        lhs: lhs_text.trim_start().to_string(),
        preimage_triple: triple_label(l, tpos),
        exact,
    }
}

/// Runs every exact computation for one prime and assembles the report.
pub fn build_verify_report(p: Prime) -> VerifyReportDto {
    let l = LieAlgebra::gamma_unipotent();
    let verdict = VerdictDto::from(&abels_check(&l));
    let zero = WeightVector::zero(l.rank());

    let wedge0_positions = weight_positions(&l, 2, &zero);
    let weight0_wedge_basis: Vec<String> = wedge0_positions
        .iter()
        .map(|&pos| pair_label(&l, pos))
        .collect();

    let kernel0 = kernel_weight_basis(&l, &zero);
    let kernel0_basis: Vec<Vec<String>> = kernel0
        .basis()
        .iter()
        .map(|v| v.iter().map(|c| c.to_string()).collect())
        .collect();

    let d3 = d3_matrix(&l);
    let preimage_identities: Vec<PreimageIdentityDto> = PREIMAGE_IDENTITIES
        .iter()
        .map(|ident| PreimageIdentityDto {
            statement: ident.statement.to_string(),
            cases: ident
                .cases
                .iter()
                .map(|case| check_preimage(&l, &d3, case))
                .collect(),
        })
        .collect();

    let st = selftest::run(p, VERIFY_SELFTEST_TRIALS, VERIFY_SELFTEST_SEED);
    let group_selftest = SelftestSummaryDto {
        p: st.p,
        trials: st.trials,
        seed: st.seed,
        checks_total: st.checks.len(),
        checks_passed: st.checks.iter().filter(|c| c.passed).count(),
        literal_closure_counterexample_recorded: st.literal_closure_demo.demonstrates_failure(),
        passed: st.passed,
    };

    VerifyReportDto {
        p: p.get(),
        algebra: AlgebraSectionDto {
            dim: l.dim(),
            rank: l.rank(),
            labels: l.labels().to_vec(),
            weights: l.weights().iter().map(|w| w.0.clone()).collect(),
            weight_multiset: weight_counts(&l.weight_multiset()),
            abelianization_weights: weight_counts(&l.abelianization_weights()),
        },
        condition1: verdict.condition1,
        weight0_wedge_basis,
        kernel0_basis,
        preimage_identities,
        condition2: verdict.condition2,
        group_selftest,
        finitely_presented: verdict.finitely_presented,
    }
}

/// Everything the verify report asserts, as one flag.
pub fn verify_report_passed(r: &VerifyReportDto) -> bool {
    r.condition1.pass
        && r.condition2.pass
        && r.finitely_presented
        && r.group_selftest.passed
        && r.group_selftest.literal_closure_counterexample_recorded
        && r
            .preimage_identities
            .iter()
            .all(|ident| ident.cases.iter().all(|c| c.exact))
}

// ---------------------------------------------------------------------------
// Text renderings

fn pass_str(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn weight_str(w: &[i64]) -> String {
    let parts: Vec<String> = w.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

fn weight_count_str(counts: &[WeightCountDto]) -> String {
    counts
        .iter()
        .map(|WeightCountDto(w, c)| {
            if *c == 1 {
                weight_str(w)
            } else {
                format!("{} x{}", weight_str(w), c)
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Renders a kernel vector over the weight-0 monomial labels.
fn combo_str(coeffs: &[String], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in coeffs.iter().zip(labels) {
        if c == "0" {
            continue;
        }
        let (sign, mag) = match c.strip_prefix('-') {
            Some(rest) => ("-", rest),
            None => ("+", c.as_str()),
        };
        if out.is_empty() {
            if sign == "-" {
                out.push_str("- ");
            }
        } else {
            out.push_str(if sign == "-" { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(mag);
            out.push('*');
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn render_verify(r: &VerifyReportDto) -> String {
    let mut s = String::new();
    s.push_str(&format!("verification report (p = {})\n\n", r.p));
    s.push_str(&format!(
        "algebra: dim {}, grading rank {}\n",
        r.algebra.dim, r.algebra.rank
    ));
    s.push_str(&format!(
        "  weight multiset: {}\n",
        weight_count_str(&r.algebra.weight_multiset)
    ));
    s.push_str(&format!(
        "  abelianization weights: {}\n",
        weight_count_str(&r.algebra.abelianization_weights)
    ));
    s.push_str(&format!(
        "condition 1 (no two abelianization weights span a segment through 0): {}\n",
        pass_str(r.condition1.pass)
    ));
    if let Some([a, b]) = &r.condition1.offending_pair {
        s.push_str(&format!(
            "  offending pair: {} and {}\n",
            weight_str(a),
            weight_str(b)
        ));
    }
    s.push_str(&format!(
        "weight-0 wedge block ({} monomials): {}\n",
        r.weight0_wedge_basis.len(),
        r.weight0_wedge_basis.join(", ")
    ));
    s.push_str(&format!(
        "weight-0 2-cycles ({} basis vectors):\n",
        r.kernel0_basis.len()
    ));
    for v in &r.kernel0_basis {
        s.push_str(&format!("  {}\n", combo_str(v, &r.weight0_wedge_basis)));
    }
    s.push_str("closed-form boundary preimages:\n");
    for ident in &r.preimage_identities {
        s.push_str(&format!("  {}\n", ident.statement));
        for case in &ident.cases {
            s.push_str(&format!(
                "    d3({}) = {}  [{}]\n",
                case.preimage_triple,
                case.lhs,
                if case.exact { "exact" } else { "MISMATCH" }
            ));
        }
    }
    s.push_str(&format!(
        "condition 2 (weight-0 second homology vanishes): {} (dim = {})\n",
        pass_str(r.condition2.pass),
        r.condition2.h2_weight0_dim
    ));
    let st = &r.group_selftest;
    s.push_str(&format!(
        "group self-test (p = {}, {} trials, seed {}): {}/{} checks passed; \
         literal filtration counterexample {}\n",
        st.p,
        st.trials,
        st.seed,
        st.checks_passed,
        st.checks_total,
        if st.literal_closure_counterexample_recorded {
            "recorded"
        } else {
            "MISSING"
        }
    ));
    s.push_str(&format!(
        "finitely presented: {}\n",
        if r.finitely_presented { "yes" } else { "no" }
    ));
    s
}

pub fn render_verdict(file: &str, dim: usize, rank: usize, v: &VerdictDto) -> String {
    let mut s = String::new();
    s.push_str(&format!("algebra check: {file}\n"));
    s.push_str(&format!("  dim {dim}, grading rank {rank}\n"));
    s.push_str(&format!(
        "  condition 1 (no two abelianization weights span a segment through 0): {}\n",
        pass_str(v.condition1.pass)
    ));
    if let Some([a, b]) = &v.condition1.offending_pair {
        s.push_str(&format!(
            "    offending pair: {} and {}\n",
            weight_str(a),
            weight_str(b)
        ));
    }
    s.push_str(&format!(
        "  condition 2 (weight-0 second homology vanishes): {} (dim = {})\n",
        pass_str(v.condition2.pass),
        v.condition2.h2_weight0_dim
    ));
    s.push_str(&format!(
        "  finitely presented: {}\n",
        if v.finitely_presented { "yes" } else { "no" }
    ));
    s
}

pub fn render_selftest(d: &SelftestDto) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "group self-test (p = {}, {} trials, seed {})\n",
        d.p, d.trials, d.seed
    ));
    for check in &d.checks {
        s.push_str(&format!("  {:<40} {}\n", check.name, pass_str(check.passed)));
    }
    let demo = &d.literal_closure_demo;
    s.push_str(&format!(
        "  literal filtration closure fails at m = {} while the corrected \
         filtration holds: {}\n",
        demo.m,
        if demo.demonstrates_failure {
            "recorded"
        } else {
            "MISSING"
        }
    ));
    if let Some(check) = d.checks.iter().find(|c| !c.passed) {
        if let Some(cx) = &check.counterexample {
            s.push_str(&format!(
                "first counterexample ({}, trial {}):\n",
                check.name, cx.trial
            ));
            s.push_str(&format!(
                "{}\n",
                serde_json::to_string_pretty(cx).expect("counterexample serializes")
            ));
        }
    }
    s.push_str(&format!("overall: {}\n", pass_str(d.passed)));
    s
}

pub fn render_ball(preset: &str, b: &BallDto) -> String {
    format!(
        "ball: preset {preset}, radius {}\n  vertices: {}\n  edges: {}\n",
        b.radius,
        b.vertices,
        b.edges.len()
    )
}

pub fn render_ball_compare(c: &BallCompareDto) -> String {
    format!(
        "ball comparison at radius {}: {} vs {}\n  left:  {} vertices, {} edges\n  \
         right: {} vertices, {} edges\n  equal: {}\n",
        c.radius,
        c.preset,
        c.compare,
        c.left.vertices,
        c.left.edges.len(),
        c.right.vertices,
        c.right.edges.len(),
        c.equal
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_full_report_passes_for_p2() {
        let r = build_verify_report(Prime::new(2).unwrap());
        assert!(verify_report_passed(&r));
        assert_eq!(r.algebra.dim, 9);
        assert_eq!(r.weight0_wedge_basis.len(), 5);
        assert_eq!(r.kernel0_basis.len(), 3);
        assert_eq!(r.condition2.h2_weight0_dim, 0);
        let cases: Vec<&PreimageCaseDto> = r
            .preimage_identities
            .iter()
            .flat_map(|i| i.cases.iter())
            .collect();
        assert_eq!(cases.len(), 3);
        assert!(cases.iter().all(|c| c.exact));
    }

    #[test]
    fn preimage_cases_name_the_expected_monomials() {
        let r = build_verify_report(Prime::new(3).unwrap());
        let cases: Vec<(&str, &str)> = r
            .preimage_identities
            .iter()
            .flat_map(|i| i.cases.iter())
            .map(|c| (c.lhs.as_str(), c.preimage_triple.as_str()))
            .collect();
        assert_eq!(
            cases,
            [
                ("e02^e24 - e03^e34", "e02^e23^e34"),
                ("e12^e24 - e13^e34", "e12^e23^e34"),
                ("e04^e14", "e12^e24^e04"),
            ]
        );
    }

    #[test]
    fn linear_combination_rendering_handles_signs_and_scalars() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let coeffs = |v: [&str; 3]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(combo_str(&coeffs(["1", "0", "-1"]), &labels), "a - c");
        assert_eq!(combo_str(&coeffs(["-1", "1/2", "0"]), &labels), "- a + 1/2*b");
        assert_eq!(combo_str(&coeffs(["0", "0", "0"]), &labels), "0");
        assert_eq!(combo_str(&coeffs(["3", "0", "1"]), &labels), "3*a + c");
    }

    #[test]
    fn weight_rendering_groups_multiplicities() {
        let counts = vec![
            WeightCountDto(vec![1, 0], 2),
            WeightCountDto(vec![0, -1], 1),
        ];
        assert_eq!(weight_count_str(&counts), "(1,0) x2, (0,-1)");
    }
}
