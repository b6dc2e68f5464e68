use std::path::Path;

use serde_json::{json, Value};

use moufang::associator::DEFAULT_EXPONENTS;
use moufang::catalog::{fixture_non_moufang, read_loop_file, to_loop_json};
use moufang::series::{self, associator_subloop};
use moufang::subloop::{centre, p_components, quotient};
use moufang::symbolic::{classify, SymbolicCml};
use moufang::theorems::{run_theorem_suite, CheckStatus};
use moufang::{
    all_subloops, build, check_identities, check_inner_automorphism, is_associative_subloop, is_normal, load,
    verify_cml, ConstructionSpec, Error, Limits, LoopTable, Result, SeriesKind,
};

use crate::outcome::{CommandOutcome, Status};

fn label(l: &LoopTable, path: &Path) -> String {
    l.name().map(str::to_owned).unwrap_or_else(|| path.display().to_string())
}

fn header(l: &LoopTable) -> Value {
    json!({ "name": l.name(), "order": l.order() })
}

/// Loads a file that must hold a commutative Moufang loop.
fn load_cml(command: &'static str, path: &Path) -> std::result::Result<LoopTable, CommandOutcome> {
    let loaded = load(path).map_err(|e| CommandOutcome::from_error(command, e))?;
    if !loaded.report.is_cml() {
        let payload = json!({
            "error": "not a commutative Moufang loop",
            "verification": loaded.report,
        });
        return Err(CommandOutcome::new(
            command,
            Status::InputError,
            payload,
            format!("{command}: {} is not a commutative Moufang loop", path.display()),
        ));
    }
    Ok(loaded.table)
}

/// Runs a fallible command body, turning errors into outcomes.
fn guarded(command: &'static str, f: impl FnOnce() -> Result<CommandOutcome>) -> CommandOutcome {
    f().unwrap_or_else(|e| CommandOutcome::from_error(command, e))
}

pub fn verify(path: &Path) -> CommandOutcome {
    // Lenient read: anything that parses as a square table is verified, and
    // axiom failures are violations rather than input errors.
    let l = match read_loop_file(path) {
        Ok(l) => l,
        Err(e) => return CommandOutcome::from_error("verify", e),
    };
    let r = verify_cml(&l);
    let summary = match &r.first_failure {
        None => format!("{}: order {}, commutative Moufang loop", label(&l, path), l.order()),
        Some(f) => format!("{}: {} fails at {:?}", label(&l, path), f.property, f.tuple),
    };
    let mut payload = header(&l);
    payload["verification"] = json!(r);
    CommandOutcome::pass_or_violation("verify", r.is_cml(), payload, summary)
}

pub fn identities(path: &Path, exponents: &[(i64, i64, i64)], inner: bool, limits: &Limits) -> CommandOutcome {
    let l = match load(path) {
        Ok(loaded) => loaded.table,
        Err(e) => return CommandOutcome::from_error("identities", e),
    };
    let exponents = if exponents.is_empty() { &DEFAULT_EXPONENTS[..] } else { exponents };
    let mut report = check_identities(&l, exponents, limits);
    if inner {
        let lemma = check_inner_automorphism(&l, limits);
        report.witnesses.extend(lemma.witnesses);
        report.failures.extend(lemma.failures);
        report.coverage.extend(lemma.coverage);
    }
    let failed: u64 = report.failures.values().sum();
    let summary = if failed == 0 {
        format!(
            "{}: all identities hold{}",
            label(&l, path),
            if report.partial() { " on the sampled tuples" } else { "" }
        )
    } else {
        format!("{}: {failed} failing instances", label(&l, path))
    };
    let mut payload = header(&l);
    payload["exponents"] = json!(exponents);
    payload["partial"] = json!(report.partial());
    payload["report"] = json!(report);
    CommandOutcome::pass_or_violation("identities", report.passed(), payload, summary)
}

pub fn series(path: &Path, kind: SeriesKind) -> CommandOutcome {
    let l = match load_cml("series", path) {
        Ok(l) => l,
        Err(o) => return o,
    };
    guarded("series", || {
        let r = series::series(&l, kind)?;
        let rendered = r.render();
        let mut payload = header(&l);
        payload["rendered"] = json!(rendered);
        payload["series"] = json!(r);
        Ok(CommandOutcome::new("series", Status::Pass, payload, format!("{}: {rendered}", label(&l, path))))
    })
}

#[derive(Clone, Copy, Debug)]
pub enum SubloopFilter {
    All,
    Normal,
    NonAssociative,
}

pub fn subloops(path: &Path, filter: SubloopFilter, limits: &Limits) -> CommandOutcome {
    let l = match load_cml("subloops", path) {
        Ok(l) => l,
        Err(o) => return o,
    };
    guarded("subloops", || {
        let all = all_subloops(&l, limits)?;
        let total = all.len();
        let entries: Vec<Value> = all
            .iter()
            .filter_map(|m| {
                let normal = is_normal(&l, m);
                let associative = is_associative_subloop(&l, m);
                let keep = match filter {
                    SubloopFilter::All => true,
                    SubloopFilter::Normal => normal,
                    SubloopFilter::NonAssociative => !associative,
                };
                keep.then(|| json!({ "order": m.len(), "normal": normal, "associative": associative, "elements": m }))
            })
            .collect();
        let filter_name = match filter {
            SubloopFilter::All => "all",
            SubloopFilter::Normal => "normal",
            SubloopFilter::NonAssociative => "nonassociative",
        };
        let summary = format!("{}: {} of {total} subloops ({filter_name})", label(&l, path), entries.len());
        let mut payload = header(&l);
        payload["filter"] = json!(filter_name);
        payload["total"] = json!(total);
        payload["count"] = json!(entries.len());
        payload["subloops"] = Value::Array(entries);
        Ok(CommandOutcome::new("subloops", Status::Pass, payload, summary))
    })
}

pub fn decompose(path: &Path, quotient_out: Option<&Path>) -> CommandOutcome {
    let l = match load_cml("decompose", path) {
        Ok(l) => l,
        Err(o) => return o,
    };
    guarded("decompose", || {
        let z = centre(&l);
        let comps = p_components(&l)?;
        let components: Vec<Value> = comps
            .iter()
            .map(|(p, m)| json!({ "prime": p, "order": m.len(), "central": m.is_subset(&z), "elements": m }))
            .collect();
        let quo = quotient(&l, &z)?;
        let quo_table = quo.table.with_name(format!("{}/Z", label(&l, path)));
        let quo_json: Value = serde_json::from_str(&to_loop_json(&quo_table))
            .map_err(|e| Error::Internal(format!("loop file round trip: {e}")))?;
        let mut quo_doc = quo_json;
        quo_doc["projection"] = json!(quo.projection);
        if let Some(out) = quotient_out {
            std::fs::write(out, format!("{quo_doc}\n"))
                .map_err(|source| Error::Io { path: out.display().to_string(), source })?;
        }
        let sizes: Vec<String> = comps.iter().map(|(p, m)| format!("{p}:{}", m.len())).collect();
        let summary = format!(
            "{}: centre of order {}, primary components {}, quotient by centre of order {}",
            label(&l, path),
            z.len(),
            sizes.join(" "),
            quo_table.order()
        );
        let mut payload = header(&l);
        payload["centre"] = json!(z);
        payload["associator_subloop"] = json!(associator_subloop(&l));
        payload["primary_components"] = Value::Array(components);
        payload["quotient_by_centre"] = quo_doc;
        Ok(CommandOutcome::new("decompose", Status::Pass, payload, summary))
    })
}

pub fn theorems(path: &Path, limits: &Limits) -> CommandOutcome {
    let l = match load(path) {
        Ok(loaded) => loaded.table,
        Err(e) => return CommandOutcome::from_error("theorems", e),
    };
    let r = run_theorem_suite(&l, limits);
    let count = |pred: fn(CheckStatus) -> bool| r.checks.iter().filter(|c| pred(c.status)).count();
    let (pass, violation, skipped) =
        (count(|s| s == CheckStatus::Pass), count(|s| s == CheckStatus::Violation), count(CheckStatus::is_skipped));
    let ok = r.passed() && r.verification.is_cml();
    let mut summary = format!("{}: {pass} passed, {violation} violated, {skipped} skipped", label(&l, path));
    for c in r.checks.iter().filter(|c| c.status == CheckStatus::Violation) {
        summary.push_str(&format!("\n  violated: {}", c.check));
    }
    if let Some(f) = &r.verification.first_failure {
        summary.push_str(&format!("\n  not a commutative Moufang loop: {} fails at {:?}", f.property, f.tuple));
    }
    let mut payload = header(&l);
    payload["verification"] = json!(r.verification);
    payload["checks"] = json!(r.checks);
    payload["counts"] = json!({ "pass": pass, "violation": violation, "skipped": skipped });
    CommandOutcome::pass_or_violation("theorems", ok, payload, summary)
}

pub fn make(construction: &str, output: &Path) -> CommandOutcome {
    guarded("make", || {
        let table = if construction.trim() == "fixture_non_moufang" {
            fixture_non_moufang()
        } else {
            build(&construction.parse::<ConstructionSpec>()?)?
        };
        moufang::save(&table, output)?;
        let r = verify_cml(&table);
        let summary = format!("wrote {} (order {}) to {}", label(&table, output), table.order(), output.display());
        let mut payload = header(&table);
        payload["construction"] = json!(construction);
        payload["output"] = json!(output.display().to_string());
        payload["verification"] = json!(r);
        // Writing the requested table is the command's whole job, so even the
        // non-Moufang fixture is a pass here.
        Ok(CommandOutcome::new("make", Status::Pass, payload, summary))
    })
}

pub fn classify_symbolic(d: usize, k: &Path, limits: &Limits) -> CommandOutcome {
    let table = match load_cml("classify-symbolic", k) {
        Ok(l) => l,
        Err(o) => return o,
    };
    guarded("classify-symbolic", || {
        let name = label(&table, k);
        let s = SymbolicCml::new(d, table)?;
        let r = classify(&s, limits);
        let verdict = |v: Option<bool>| match v {
            Some(true) => "true",
            Some(false) => "false",
            None => "unavailable",
        };
        let summary = format!(
            "D^{d} x {name}: prop_2_17 {}, minimal factor class {}, steady {}",
            verdict(r.prop_2_17.holds),
            r.cor_2_7.class.map_or("none".to_string(), |c| c.to_string()),
            verdict(r.cor_2_11_steady.holds),
        );
        let payload = json!({ "d": d, "k": { "name": name, "order": s.finite_part().order() }, "classification": r });
        Ok(CommandOutcome::new("classify-symbolic", Status::Pass, payload, summary))
    })
}
