//! Acceptance suite: re-derives the headline claims from scratch, checks
//! them against frozen expected values, and enforces runtime budgets.
//! Each criterion prints one pass line (visible with `-- --nocapture`);
//! a failed criterion fails its test.

use std::time::{Duration, Instant};

use abelscope_core::exact::Prime;
use abelscope_core::gamma::{
    discriminating_set, order_in_m_mod_mz, order_p_witness, sample, selftest,
};
use abelscope_core::homology::{abels_check, check_complex};
use abelscope_core::liealg::{LieAlgebra, WeightVector};
use abelscope_core::marked::{
    agreement_radius, ball, divergence_witness, evaluate_word, gamma_marking,
    gamma_mod_mz_marking, z_marking, z_mod_marking,
};

fn assert_within(start: Instant, budget: Duration, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, budget is {budget:?}"
    );
}

fn primes() -> [Prime; 3] {
    [2, 3, 5].map(|p| Prime::new(p).unwrap())
}

#[test]
fn criterion_1_the_verify_report_reproduces_every_frozen_value() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_abelscope"))
        .args(["verify", "--p", "2", "--json", path.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();

    assert_eq!(r["p"], 2);
    assert_eq!(r["algebra"]["dim"], 9);
    assert_eq!(r["algebra"]["rank"], 2);
    assert_eq!(
        r["algebra"]["labels"],
        serde_json::json!(["e02", "e12", "e03", "e13", "e23", "e24", "e34", "e04", "e14"])
    );
    assert_eq!(
        r["algebra"]["weights"],
        serde_json::json!([
            [1, 0], [1, 0], [0, 1], [0, 1], [-1, 1], [-1, 0], [0, -1], [0, 0], [0, 0]
        ])
    );
    assert_eq!(
        r["algebra"]["weight_multiset"],
        serde_json::json!([
            [[-1, 0], 1], [[-1, 1], 1], [[0, -1], 1], [[0, 0], 2], [[0, 1], 2], [[1, 0], 2]
        ])
    );
    assert_eq!(
        r["algebra"]["abelianization_weights"],
        serde_json::json!([[[-1, 1], 1], [[0, -1], 1], [[1, 0], 2]])
    );
    assert_eq!(r["condition1"]["pass"], true);
    assert!(r["condition1"].get("offending_pair").is_none());
    assert_eq!(
        r["weight0_wedge_basis"],
        serde_json::json!(["e02^e24", "e12^e24", "e03^e34", "e13^e34", "e04^e14"])
    );
    assert_eq!(
        r["kernel0_basis"],
        serde_json::json!([
            ["1", "0", "-1", "0", "0"],
            ["0", "1", "0", "-1", "0"],
            ["0", "0", "0", "0", "1"]
        ])
    );
    let cases: Vec<&serde_json::Value> = r["preimage_identities"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|i| i["cases"].as_array().unwrap())
        .collect();
    assert_eq!(cases.len(), 3);
    for case in &cases {
        assert_eq!(case["exact"], true);
    }
    assert_eq!(cases[0]["lhs"], "e02^e24 - e03^e34");
    assert_eq!(cases[0]["preimage_triple"], "e02^e23^e34");
    assert_eq!(cases[1]["lhs"], "e12^e24 - e13^e34");
    assert_eq!(cases[1]["preimage_triple"], "e12^e23^e34");
    assert_eq!(cases[2]["lhs"], "e04^e14");
    assert_eq!(cases[2]["preimage_triple"], "e12^e24^e04");
    assert_eq!(r["condition2"]["pass"], true);
    assert_eq!(r["condition2"]["h2_weight0_dim"], 0);
    assert_eq!(r["group_selftest"]["passed"], true);
    assert_eq!(r["group_selftest"]["checks_passed"], 16);
    assert_eq!(r["group_selftest"]["checks_total"], 16);
    assert_eq!(
        r["group_selftest"]["literal_closure_counterexample_recorded"],
        true
    );
    assert_eq!(r["finitely_presented"], true);

    assert_within(start, Duration::from_secs(1), "criterion 1");
    println!("criterion 1 (verify report reproduces frozen values, < 1s): pass");
}

#[test]
fn criterion_2_boundary_maps_compose_to_zero_and_the_broken_table_fails() {
    let start = Instant::now();
    assert!(check_complex(&LieAlgebra::gamma_unipotent()));
    assert!(check_complex(&LieAlgebra::abels4()));
    for trial in 0..20 {
        let mut rng = sample::trial_rng(7, trial);
        let l = LieAlgebra::random_triangular(&mut rng);
        assert!(l.check_jacobi().is_none(), "trial {trial} violates Jacobi");
        assert!(check_complex(&l), "trial {trial} violates d2 . d3 = 0");
    }
    let broken = LieAlgebra::jacobi_violation();
    assert!(broken.check_jacobi().is_some());
    assert!(!check_complex(&broken));
    assert_within(start, Duration::from_secs(5), "criterion 2");
    println!("criterion 2 (chain property holds, broken table fails, < 5s): pass");
}

#[test]
fn criterion_3_the_randomized_selftest_is_clean_for_three_primes() {
    let start = Instant::now();
    for p in primes() {
        let report = selftest::run(p, 1000, 42);
        assert!(report.passed, "self-test failed for p = {}", p.get());
        assert!(report.checks.iter().all(|c| c.passed));
        assert_eq!(report.checks.len(), 16);
        assert!(
            report.literal_closure_demo.demonstrates_failure(),
            "literal filtration counterexample missing for p = {}",
            p.get()
        );
    }
    assert_within(start, Duration::from_secs(30), "criterion 3");
    println!("criterion 3 (1000-trial self-test clean for p in {{2,3,5}}, < 30s): pass");
}

#[test]
fn criterion_4_discriminating_sets_separate_random_central_elements() {
    let start = Instant::now();
    for p in primes() {
        let set = discriminating_set(p);
        assert_eq!(set.len() as u64, p.get() * p.get() - 1);
        for rep in &set {
            assert_eq!(order_in_m_mod_mz(p, rep.elt()), p.to_bigint());
        }
        let bounds = sample::SampleBounds::default();
        for trial in 0..200 {
            let mut rng = sample::trial_rng(11, trial);
            let g = sample::in_m_not_mz(p, &bounds, &mut rng);
            let witness = order_p_witness(p, &g);
            assert!(
                set.contains(&witness),
                "witness escaped the set for p = {} trial {trial}",
                p.get()
            );
        }
    }
    assert_within(start, Duration::from_secs(10), "criterion 4");
    println!("criterion 4 (discriminating sets have order-p members that catch 200 random elements, < 10s): pass");
}

#[test]
fn criterion_5_negative_controls_fail_for_the_stated_reasons() {
    let opposite = LieAlgebra::abelian(vec![
        WeightVector(vec![1, 0]),
        WeightVector(vec![-1, 0]),
    ]);
    let verdict = abels_check(&opposite);
    assert!(!verdict.condition1.pass);
    assert!(!verdict.finitely_presented);
    assert_eq!(
        verdict.condition1.offending_pair,
        Some((WeightVector(vec![-1, 0]), WeightVector(vec![1, 0])))
    );

    let zero_weight = LieAlgebra::abelian(vec![WeightVector(vec![0, 0])]);
    let verdict = abels_check(&zero_weight);
    assert!(!verdict.condition1.pass);
    assert!(!verdict.finitely_presented);
    assert_eq!(
        verdict.condition1.offending_pair,
        Some((WeightVector(vec![0, 0]), WeightVector(vec![0, 0])))
    );
    println!("criterion 5 (negative controls fail on the expected pairs): pass");
}

#[test]
fn criterion_6_marked_group_separation_behaves_as_computed() {
    let z = z_marking();
    let z5 = z_mod_marking(5);
    assert_eq!(agreement_radius(&z, &z5, 5), Ok(1));

    for r in 0..=10 {
        assert_eq!(ball(&z, r).vertex_count() as u32, 2 * r + 1);
    }

    let p = Prime::new(2).unwrap();
    let group = gamma_marking(p);
    let quotient = gamma_mod_mz_marking(p);
    let witness = divergence_witness(&group, &quotient, 5)
        .expect("same generator count")
        .expect("the markings diverge within radius 5");
    let in_group = evaluate_word(&group, &witness);
    assert!(in_group.is_in_mz(), "witness must land in the lattice");
    assert!(!in_group.is_identity(), "witness must be nontrivial");
    let in_quotient = evaluate_word(&quotient, &witness);
    assert!(in_quotient.is_identity_coset(), "witness must die in the quotient");
    println!("criterion 6 (agreement radii, ball sizes, and a divergence witness in the lattice): pass");
}

#[test]
fn criterion_7_the_readme_discloses_what_is_not_checked() {
    let readme_path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md");
    let readme = std::fs::read_to_string(readme_path).expect("README.md exists");
    let disclosure = readme
        .split("## What this toolkit does not check")
        .nth(1)
        .expect("README has the out-of-scope section");
    for needle in [
        "Soficity",
        "Isolation",
        "Residual finiteness",
        "hierarchy",
        "generates all",
    ] {
        assert!(
            disclosure.contains(needle),
            "disclosure section is missing {needle:?}"
        );
    }
    println!("criterion 7 (README discloses out-of-scope claims): pass");
}
