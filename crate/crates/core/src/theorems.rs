//! The full property suite run by `moufang theorems`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::associator::{check_identities, check_inner_automorphism, IdentityReport, DEFAULT_EXPONENTS};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::mask::SubloopMask;
use crate::sampling::Coverage;
use crate::series::{
    bruck_slaby_check, corollary_4_5_check, derived_series, derived_series_nested_check, is_hamiltonian,
    lemma_1_7_check, lemma_3_1_check, lower_central_series, upper_central_series, ClassPredicateResult,
};
use crate::subloop::{centre, lemma_1_6_check, p_components};
use crate::table::{verify_cml, LoopTable, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Violation,
    /// The check needed an enumeration above the configured bound.
    #[serde(rename = "skipped(bound)")]
    SkippedBound,
    /// The table lacks a property the check presupposes.
    #[serde(rename = "skipped(precondition)")]
    SkippedPrecondition,
}

impl CheckStatus {
    pub fn is_skipped(self) -> bool {
        matches!(self, CheckStatus::SkippedBound | CheckStatus::SkippedPrecondition)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Coverage>,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub verification: VerificationReport,
    pub checks: Vec<CheckOutcome>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Violation)
    }
}

fn from_identities(check: &'static str, r: IdentityReport) -> CheckOutcome {
    let coverage = r.coverage.values().copied().reduce(Coverage::combine);
    CheckOutcome {
        check,
        status: if r.passed() { CheckStatus::Pass } else { CheckStatus::Violation },
        coverage,
        detail: json!({ "failures": r.failures, "witnesses": r.witnesses, "coverage": r.coverage }),
    }
}

fn from_predicate(check: &'static str, r: ClassPredicateResult) -> CheckOutcome {
    CheckOutcome {
        check,
        status: if r.holds { CheckStatus::Pass } else { CheckStatus::Violation },
        coverage: r.coverage,
        detail: json!({ "witness": r.witness }),
    }
}

fn from_error(check: &'static str, e: Error) -> CheckOutcome {
    let status = match e {
        Error::Bound { .. } => CheckStatus::SkippedBound,
        _ => CheckStatus::Violation,
    };
    CheckOutcome { check, status, coverage: None, detail: json!({ "error": e.to_string() }) }
}

fn skipped(check: &'static str, reason: &str) -> CheckOutcome {
    CheckOutcome {
        check,
        status: CheckStatus::SkippedPrecondition,
        coverage: None,
        detail: json!({ "reason": reason }),
    }
}

fn run(check: &'static str, f: impl FnOnce() -> Result<CheckOutcome>) -> CheckOutcome {
    f().unwrap_or_else(|e| from_error(check, e))
}

const CML_CHECKS: [&str; 8] = [
    "lemma_1_4_primary_components",
    "lemma_1_5_bruck_slaby_n3",
    "lemma_1_6_centralizer_cosets",
    "lemma_1_7_cubes_central",
    "lemma_3_1_order_three_normal",
    "corollary_4_5_solvability",
    "hamiltonian_implies_associative",
    "series_consistency",
];

/// Runs every check. On a table that is not a commutative Moufang loop
/// only the identity scans run; the structural checks are skipped.
pub fn run_theorem_suite(l: &LoopTable, limits: &Limits) -> TheoremReport {
    let verification = verify_cml(l);
    let mut checks = Vec::new();

    if !(verification.latin_square && verification.identity_ok) {
        for name in ["identities_1_2_to_1_5", "lemma_1_1_inner_automorphisms"].into_iter().chain(CML_CHECKS) {
            checks.push(skipped(name, "table is not a loop with identity 0"));
        }
        return TheoremReport { verification, checks };
    }

    checks.push(from_identities("identities_1_2_to_1_5", check_identities(l, &DEFAULT_EXPONENTS, limits)));
    checks.push(from_identities("lemma_1_1_inner_automorphisms", check_inner_automorphism(l, limits)));

    if !verification.is_cml() {
        for name in CML_CHECKS {
            checks.push(skipped(name, "not a commutative Moufang loop"));
        }
        return TheoremReport { verification, checks };
    }

    checks.push(run("lemma_1_4_primary_components", || {
        let comps = p_components(l)?;
        let sizes: serde_json::Map<String, Value> =
            comps.iter().map(|(p, m)| (p.to_string(), json!(m.len()))).collect();
        Ok(CheckOutcome {
            check: "lemma_1_4_primary_components",
            status: CheckStatus::Pass,
            coverage: None,
            detail: json!({ "component_sizes": sizes }),
        })
    }));

    checks.push(run("lemma_1_5_bruck_slaby_n3", || {
        Ok(from_predicate("lemma_1_5_bruck_slaby_n3", bruck_slaby_check(l, 3, limits)?))
    }));

    checks.push(run("lemma_1_6_centralizer_cosets", || {
        let full = SubloopMask::full(l.order());
        let lower = lower_central_series(l)?;
        let mut targets: Vec<(&str, SubloopMask)> = vec![("centre", centre(l))];
        if let Some(qp) = lower.chain.get(1) {
            targets.push(("associator_subloop", qp.clone()));
        }
        if l.order() <= 81 {
            targets.push(("whole_loop", full.clone()));
        }
        let mut witnesses = Vec::new();
        let mut checked = Vec::new();
        for (label, m) in &targets {
            let w = lemma_1_6_check(l, &full, m)?;
            checked.push(*label);
            witnesses.extend(w.into_iter().map(|w| json!({ "normal_subloop": label, "pair": w })));
        }
        Ok(CheckOutcome {
            check: "lemma_1_6_centralizer_cosets",
            status: if witnesses.is_empty() { CheckStatus::Pass } else { CheckStatus::Violation },
            coverage: None,
            detail: json!({ "normal_subloops": checked, "witnesses": witnesses }),
        })
    }));

    checks.push(run("lemma_1_7_cubes_central", || Ok(from_predicate("lemma_1_7_cubes_central", lemma_1_7_check(l)?))));

    checks.push(from_predicate("lemma_3_1_order_three_normal", lemma_3_1_check(l)));

    checks.push(run("corollary_4_5_solvability", || {
        Ok(match corollary_4_5_check(l, limits)? {
            Some(r) => from_predicate("corollary_4_5_solvability", r),
            None => skipped("corollary_4_5_solvability", "some non-associative subloop is not normal"),
        })
    }));

    checks.push(run("hamiltonian_implies_associative", || {
        let h = is_hamiltonian(l, limits)?;
        let assoc = l.is_associative();
        Ok(CheckOutcome {
            check: "hamiltonian_implies_associative",
            status: if !h.holds || assoc { CheckStatus::Pass } else { CheckStatus::Violation },
            coverage: None,
            detail: json!({ "hamiltonian": h.holds, "associative": assoc }),
        })
    }));

    checks.push(run("series_consistency", || {
        let lower = lower_central_series(l)?;
        let derived = derived_series(l)?;
        let upper = upper_central_series(l)?;
        let nested = derived_series_nested_check(l);
        let mut problems = Vec::new();
        if lower.class_value != upper.class_value {
            problems.push(format!("lower class {} != upper class {}", lower.class_value, upper.class_value));
        }
        if derived.class_value > lower.class_value {
            problems.push(format!(
                "solvability class {} exceeds nilpotency class {}",
                derived.class_value, lower.class_value
            ));
        }
        if lower.chain.get(1) != derived.chain.get(1) {
            problems.push("second lower-central term differs from the associator subloop".into());
        }
        if !nested.is_empty() {
            problems.push(format!("{} derived terms differ from their nested-associator form", nested.len()));
        }
        Ok(CheckOutcome {
            check: "series_consistency",
            status: if problems.is_empty() { CheckStatus::Pass } else { CheckStatus::Violation },
            coverage: None,
            detail: json!({
                "lower_central": lower.sizes,
                "derived": derived.sizes,
                "upper_central": upper.sizes,
                "nilpotency_class": lower.class_value,
                "solvability_class": derived.class_value,
                "problems": problems,
            }),
        })
    }));

    TheoremReport { verification, checks }
}
