//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use banach_ortho::fixtures;
use banach_ortho::verify::{self, PropertyRecord};

const SEED: u64 = 42;

struct Verdict {
    ok: bool,
    detail: String,
}

fn clean(props: &[PropertyRecord], ids: &[(&str, usize)]) -> Verdict {
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for &(id, min_trials) in ids {
        match props.iter().find(|p| p.id == id) {
            None => problems.push(format!("{id} missing")),
            Some(p) => {
                if p.failures > 0 {
                    problems.push(format!("{id}: {} failures, first {}", p.failures, p.counterexample.as_ref().unwrap()));
                }
                if p.trials < min_trials {
                    problems.push(format!("{id}: only {} trials (need {min_trials})", p.trials));
                }
                summary.push(format!("{id} {}/{}", p.trials - p.failures, p.trials));
            }
        }
    }
    Verdict {
        ok: problems.is_empty(),
        detail: if problems.is_empty() { summary.join(", ") } else { problems.join("; ") },
    }
}

fn criterion(number: usize, name: &str, limit: Option<Duration>, body: impl FnOnce() -> Verdict) -> bool {
    let started = Instant::now();
    let mut v = body();
    let elapsed = started.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            v.ok = false;
            v.detail = format!("{} (exceeded {limit:?})", v.detail);
        }
    }
    let tag = if v.ok { "PASS" } else { "FAIL" };
    println!("{tag} [{number}] {name} ({elapsed:.2?}): {}", v.detail);
    v.ok
}

fn main() {
    let mut all = true;

    all &= criterion(1, "example fixtures reproduce", Some(Duration::from_secs(1)), || {
        let r = fixtures::replay(None).expect("all fixtures");
        let failed: Vec<String> = r
            .fixtures
            .iter()
            .flat_map(|f| f.checks.iter().filter(|c| !c.passed).map(move |c| format!("{}: {}", f.name, c.claim)))
            .collect();
        Verdict {
            ok: r.all_reproduced() && r.total == 4,
            detail: if failed.is_empty() {
                format!("{}/{} reproduced", r.reproduced, r.total)
            } else {
                failed.join("; ")
            },
        }
    });

    all &= criterion(2, "pairing identities (i)-(vi)", Some(Duration::from_secs(10)), || {
        let props = verify::basic_properties(SEED, 1000);
        clean(
            &props,
            &[
                ("basic.theta_direction", 1000),
                ("basic.direction_unique_mod_pi", 900),
                ("basic.orthogonal_all_directions", 1000),
                ("basic.phase_identity", 1000),
                ("basic.right_additive", 1000),
                ("basic.left_additive", 1000),
                ("basic.bilinear", 1000),
            ],
        )
    });

    all &= criterion(3, "symmetry theorems", Some(Duration::from_secs(30)), || {
        let props = verify::symmetry_properties(SEED, 500);
        clean(
            &props,
            &[
                ("symmetry.nonisotropic_left_iff_right", 500),
                ("symmetry.isotropic_left_iff_right", 500),
                ("symmetry.nonisotropic_lambda_one", 100),
                ("symmetry.operator_symmetric_iff_witness", 200),
                ("symmetry.scalar_reproduces_pairing", 100),
                ("symmetry.definition_soundness", 100),
            ],
        )
    });

    all &= criterion(4, "directional symmetry implies symmetry", None, || {
        let props = verify::direction_properties(SEED, 500);
        let mut v = clean(
            &props,
            &[("direction.theta_left_implies_left", 500), ("direction.converse_counterexample", 1)],
        );
        let held = props[0].observed.get("antecedent_held").copied().unwrap_or(0.0);
        if held < 50.0 {
            v.ok = false;
            v.detail = format!("{}; antecedent held only {held} times", v.detail);
        }
        v
    });

    all &= criterion(5, "preserver characterization", None, || {
        let props = verify::preserver_properties(SEED, 100);
        clean(&props, &[("preserver.isometry_multiples", 100), ("preserver.non_preserving_detected", 100)])
    });

    all &= criterion(6, "Hilbert characterization", Some(Duration::from_secs(60)), || {
        let props = verify::hilbert_properties(SEED, 500);
        let mut v = clean(&props, &[("hilbert.fit_residuals", 5), ("hilbert.rotation_lemma", 3)]);
        let fits = &props.iter().find(|p| p.id == "hilbert.fit_residuals").unwrap().observed;
        v.detail = format!("{}; residuals {fits:?}", v.detail);
        v
    });

    all &= criterion(7, "Birkhoff-James deciders agree", None, || {
        let p = verify::bj_deciders_agree(SEED, 2000);
        Verdict {
            ok: p.failures == 0 && p.trials == 2000,
            detail: format!("{} disagreements over {} pairs", p.failures, p.trials),
        }
    });

    if !all {
        std::process::exit(1);
    }
}
