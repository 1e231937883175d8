//! Command implementations. Each returns the text rendering, the JSON
//! report, and whether every performed check passed; input problems are
//! reported as `CmdError::Input` and map to exit code 2.

use std::fmt;
use std::path::Path;

use abelscope_core::exact::Prime;
use abelscope_core::gamma::selftest;
use abelscope_core::homology::abels_check;
use abelscope_core::marked::{
    ball as compute_ball_graph, balls_equal, gamma_marking, gamma_mod_mz_marking, z_marking,
    z_mod_marking, BallGraph,
};

use crate::report;
use crate::schema::{
    to_pretty_json, AlgebraCheckDto, AlgebraFile, BallCompareDto, BallDto, SelftestDto,
    VerdictDto,
};

/// Radius cap for ball computations unless `--max-radius-override` is given.
/// Larger lattice-group balls grow fast enough to look like a hang.
pub const DEFAULT_MAX_RADIUS: u32 = 6;

pub struct CmdOutput {
    pub text: String,
    pub json: String,
    pub passed: bool,
}

#[derive(Debug)]
pub enum CmdError {
    /// Malformed or out-of-contract input (exit code 2).
    Input(String),
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

fn parse_prime(p: u64) -> Result<Prime, CmdError> {
    Prime::new(p).ok_or_else(|| CmdError::Input(format!("--p {p} is not a prime")))
}

/// `verify`: the full exact report for one prime.
pub fn verify(p: u64) -> Result<CmdOutput, CmdError> {
    let p = parse_prime(p)?;
    let r = report::build_verify_report(p);
    Ok(CmdOutput {
        text: report::render_verify(&r),
        json: to_pretty_json(&r),
        passed: report::verify_report_passed(&r),
    })
}

/// `algebra check`: validate a bracket-table file, then run the
/// two-condition presentation test on it.
pub fn algebra_check(file: &Path) -> Result<CmdOutput, CmdError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CmdError::Input(format!("cannot read {}: {e}", file.display())))?;
    let parsed: AlgebraFile = serde_json::from_str(&text)
        .map_err(|e| CmdError::Input(format!("malformed algebra file: {e}")))?;
    let algebra = parsed
        .into_algebra()
        .map_err(|e| CmdError::Input(format!("invalid algebra table: {e}")))?;
    if let Some((i, j, k)) = algebra.check_jacobi() {
        return Err(CmdError::Input(format!(
            "not a Lie algebra: Jacobi identity fails on generators ({i}, {j}, {k})"
        )));
    }
    if let Some((i, j, t)) = algebra.check_weight_additivity() {
        return Err(CmdError::Input(format!(
            "grading is not additive: [x_{i}, x_{j}] hits generator {t} outside weight sum"
        )));
    }
    let verdict = VerdictDto::from(&abels_check(&algebra));
    let file_name = file.display().to_string();
    let dto = AlgebraCheckDto {
        file: file_name.clone(),
        dim: algebra.dim(),
        rank: algebra.rank(),
        verdict,
    };
    Ok(CmdOutput {
        text: report::render_verdict(&file_name, dto.dim, dto.rank, &dto.verdict),
        json: to_pretty_json(&dto),
        passed: dto.verdict.finitely_presented,
    })
}

/// `group selftest`: randomized law and filtration checks.
pub fn group_selftest(p: u64, trials: u64, seed: u64) -> Result<CmdOutput, CmdError> {
    let p = parse_prime(p)?;
    let r = selftest::run(p, trials, seed);
    let dto = SelftestDto::from_report(&r);
    Ok(CmdOutput {
        text: report::render_selftest(&dto),
        json: to_pretty_json(&dto),
        passed: r.passed && r.literal_closure_demo.demonstrates_failure(),
    })
}

/// Preset marked groups available to `ball`.
enum Preset {
    Z,
    ZMod(u64),
    Gamma(Prime),
    GammaModMz(Prime),
}

impl Preset {
    fn name(&self) -> String {
        match self {
            Preset::Z => "z".to_string(),
            Preset::ZMod(n) => format!("z-mod:{n}"),
            Preset::Gamma(p) => format!("gamma (p = {})", p.get()),
            Preset::GammaModMz(p) => format!("gamma-mod-mz (p = {})", p.get()),
        }
    }

    fn ball(&self, radius: u32) -> BallGraph {
        match self {
            Preset::Z => compute_ball_graph(&z_marking(), radius),
            Preset::ZMod(n) => compute_ball_graph(&z_mod_marking(*n), radius),
            Preset::Gamma(p) => compute_ball_graph(&gamma_marking(*p), radius),
            Preset::GammaModMz(p) => compute_ball_graph(&gamma_mod_mz_marking(*p), radius),
        }
    }
}

/// Accepts `z`, `gamma`, `gamma-mod-mz`, and `z-mod` with the modulus either
/// inline (`z-mod:5`, `z-mod=5`) or via `--modulus`.
fn parse_preset(spec: &str, modulus: Option<u64>, p: Prime) -> Result<Preset, CmdError> {
    let spec = spec.trim();
    let (head, inline) = match spec.split_once([':', '=']) {
        Some((h, v)) => (h.trim(), Some(v.trim())),
        None => (spec, None),
    };
    let inline_modulus = |v: &str| {
        v.parse::<u64>()
            .map_err(|_| CmdError::Input(format!("bad modulus {v:?} in preset {spec:?}")))
    };
    match (head, inline) {
        ("z", None) => Ok(Preset::Z),
        ("gamma", None) => Ok(Preset::Gamma(p)),
        ("gamma-mod-mz", None) => Ok(Preset::GammaModMz(p)),
        ("z-mod", inline) => {
            let n = match inline {
                Some(v) => inline_modulus(v)?,
                None => modulus.ok_or_else(|| {
                    CmdError::Input(
                        "preset z-mod needs a modulus: use z-mod:<n> or --modulus <n>".to_string(),
                    )
                })?,
            };
            if n == 0 {
                return Err(CmdError::Input("modulus must be positive".to_string()));
            }
            Ok(Preset::ZMod(n))
        }
        _ => Err(CmdError::Input(format!(
            "unknown preset {spec:?}; expected z, z-mod:<n>, gamma, or gamma-mod-mz"
        ))),
    }
}

/// `ball`: compute one Cayley ball, or two plus a vertex-for-vertex
/// comparison. An unequal comparison is a failed check (exit code 1);
/// comparing markings with different generator counts is an input error.
pub fn ball(
    preset: &str,
    radius: u32,
    p: u64,
    modulus: Option<u64>,
    compare: Option<&str>,
    max_radius_override: bool,
) -> Result<CmdOutput, CmdError> {
    if radius > DEFAULT_MAX_RADIUS && !max_radius_override {
        return Err(CmdError::Input(format!(
            "radius {radius} exceeds the cap of {DEFAULT_MAX_RADIUS}; \
             pass --max-radius-override to proceed"
        )));
    }
    let p = parse_prime(p)?;
    let left_preset = parse_preset(preset, modulus, p)?;
    let left = left_preset.ball(radius);
    match compare {
        None => {
            let dto = BallDto::from(&left);
            Ok(CmdOutput {
                text: report::render_ball(&left_preset.name(), &dto),
                json: to_pretty_json(&dto),
                passed: true,
            })
        }
        Some(other) => {
            let right_preset = parse_preset(other, modulus, p)?;
            let right = right_preset.ball(radius);
            let equal =
                balls_equal(&left, &right).map_err(|e| CmdError::Input(e.to_string()))?;
            let dto = BallCompareDto {
                preset: left_preset.name(),
                compare: right_preset.name(),
                radius,
                equal,
                left: BallDto::from(&left),
                right: BallDto::from(&right),
            };
            Ok(CmdOutput {
                text: report::render_ball_compare(&dto),
                json: to_pretty_json(&dto),
                passed: equal,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn preset_parsing_accepts_every_documented_spelling() {
        assert!(matches!(parse_preset("z", None, p2()), Ok(Preset::Z)));
        assert!(matches!(parse_preset("gamma", None, p2()), Ok(Preset::Gamma(_))));
        assert!(matches!(
            parse_preset("gamma-mod-mz", None, p2()),
            Ok(Preset::GammaModMz(_))
        ));
        assert!(matches!(parse_preset("z-mod:5", None, p2()), Ok(Preset::ZMod(5))));
        assert!(matches!(parse_preset("z-mod=12", None, p2()), Ok(Preset::ZMod(12))));
        assert!(matches!(parse_preset("z-mod", Some(7), p2()), Ok(Preset::ZMod(7))));
        assert!(matches!(parse_preset(" z-mod : 5 ", None, p2()), Ok(Preset::ZMod(5))));
    }

    #[test]
    fn preset_parsing_rejects_bad_input() {
        assert!(parse_preset("q8", None, p2()).is_err());
        assert!(parse_preset("z-mod", None, p2()).is_err());
        assert!(parse_preset("z-mod:abc", None, p2()).is_err());
        assert!(parse_preset("z-mod:0", None, p2()).is_err());
        assert!(parse_preset("z:5", None, p2()).is_err());
    }

    #[test]
    fn inline_modulus_wins_over_the_flag() {
        assert!(matches!(
            parse_preset("z-mod:5", Some(9), p2()),
            Ok(Preset::ZMod(5))
        ));
    }

    #[test]
    fn radius_above_the_cap_needs_the_override() {
        assert!(matches!(
            ball("z", 7, 2, None, None, false),
            Err(CmdError::Input(_))
        ));
        let out = ball("z", 7, 2, None, None, true).unwrap();
        assert!(out.passed);
        assert!(out.text.contains("vertices: 15"));
    }

    #[test]
    fn comparing_markings_of_different_arity_is_an_input_error() {
        let result = ball("z", 2, 2, None, Some("gamma"), false);
        assert!(matches!(result, Err(CmdError::Input(_))));
    }

    #[test]
    fn equal_presets_compare_equal_and_pass() {
        let out = ball("z-mod:40", 3, 2, None, Some("z"), false).unwrap();
        assert!(out.passed);
        assert!(out.text.contains("equal: true"));
    }
}
