//! Loops of the form `D × K`: `d` central quasicyclic 3-groups times a finite
//! commutative Moufang loop `K`.
//!
//! The quasicyclic factors are counted, never materialized. Every verdict
//! below reduces to `d` and the structure of `K`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::series::{is_minimal_of_class, nilpotency_class, solvability_class, ClassKind, ClassValue};
use crate::subloop::{all_subloops, is_associative_subloop};
use crate::table::{verify_cml, LoopTable};

#[derive(Clone, Debug)]
pub struct SymbolicCml {
    d: usize,
    k: LoopTable,
}

impl SymbolicCml {
    /// Rejects a finite part that is not a commutative Moufang loop.
    pub fn new(d: usize, k: LoopTable) -> Result<Self> {
        let report = verify_cml(&k);
        if !report.is_cml() {
            return Err(Error::Input(format!(
                "finite part is not a commutative Moufang loop: {:?}",
                report.first_failure
            )));
        }
        Ok(SymbolicCml { d, k })
    }

    pub fn quasicyclic_factors(&self) -> usize {
        self.d
    }

    pub fn finite_part(&self) -> &LoopTable {
        &self.k
    }

    pub fn is_infinite(&self) -> bool {
        self.d > 0
    }
}

/// Rank of the maximal divisible subloop: exactly the quasicyclic factors.
pub fn divisible_part(s: &SymbolicCml) -> usize {
    s.d
}

/// A yes/no verdict, or `None` when it needed an enumeration that was over the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: Option<bool>,
    pub reason: String,
}

impl Verdict {
    fn yes(reason: impl Into<String>) -> Self {
        Verdict { holds: Some(true), reason: reason.into() }
    }

    fn no(reason: impl Into<String>) -> Self {
        Verdict { holds: Some(false), reason: reason.into() }
    }

    fn unavailable(reason: impl Into<String>) -> Self {
        Verdict { holds: None, reason: reason.into() }
    }
}

/// Which class `n`, if any, makes the loop a product of quasicyclic groups and
/// a minimal loop of solvability class `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalFactorVerdict {
    pub class: Option<usize>,
    pub available: bool,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classes {
    pub solvability: ClassValue,
    pub nilpotency: ClassValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub quasicyclic_factors: usize,
    pub finite_order: usize,
    pub min_condition: bool,
    pub infinite: bool,
    pub divisible_part: usize,
    /// No proper infinite non-associative subloops.
    pub prop_2_17: Verdict,
    pub cor_2_7: MinimalFactorVerdict,
    /// All infinite centrally solvable subloops are steadily so.
    pub cor_2_11_steady: Verdict,
    pub classes: Classes,
}

/// A nontrivial central factor lifts a class-0 finite part to class 1; otherwise
/// central direct factors leave the class unchanged.
fn lift(class: ClassValue, d: usize) -> ClassValue {
    match class {
        ClassValue::Finite(0) if d > 0 => ClassValue::Finite(1),
        c => c,
    }
}

pub fn classify(s: &SymbolicCml, limits: &Limits) -> ClassificationReport {
    let k = &s.k;
    let d = s.d;
    let k_assoc = k.is_associative();
    // Enumeration is needed both for the proper-subloop test and for minimality.
    let subloops = all_subloops(k, limits);

    let prop_2_17 = match d {
        0 => Verdict::no("finite loop: no quasicyclic factor"),
        2.. => Verdict::no(format!("{d} quasicyclic factors; exactly one is required")),
        1 if k_assoc => Verdict::no("finite part is associative"),
        1 => match &subloops {
            Err(e) => Verdict::unavailable(e.to_string()),
            Ok(subs) => match subs.iter().find(|m| !m.is_full() && !is_associative_subloop(k, m)) {
                Some(m) => {
                    Verdict::no(format!("finite part has a proper non-associative subloop of order {}", m.len()))
                }
                None => Verdict::yes(
                    "one quasicyclic factor and every proper subloop of the non-associative finite part is associative",
                ),
            },
        },
    };

    let k_solv = solvability_class(k);
    let cor_2_7 = if d == 0 {
        MinimalFactorVerdict { class: None, available: true, reason: "finite loop: no quasicyclic factor".into() }
    } else {
        match k_solv {
            ClassValue::Finite(n) if n >= 2 => match is_minimal_of_class(k, ClassKind::Solvable, n, limits) {
                Ok(r) if r.holds => MinimalFactorVerdict {
                    class: Some(n),
                    available: true,
                    reason: format!("finite part is a minimal loop of solvability class {n}"),
                },
                Ok(_) => MinimalFactorVerdict {
                    class: None,
                    available: true,
                    reason: format!("finite part has a proper subloop of solvability class {n}"),
                },
                Err(e) => MinimalFactorVerdict { class: None, available: false, reason: e.to_string() },
            },
            ClassValue::Finite(n) => MinimalFactorVerdict {
                class: None,
                available: true,
                reason: format!(
                    "finite part has solvability class {n}; the quasicyclic factor is itself a proper infinite subloop of class 1"
                ),
            },
            ClassValue::DoesNotTerminate => MinimalFactorVerdict {
                class: None,
                available: true,
                reason: "finite part is not centrally solvable".into(),
            },
        }
    };

    let cor_2_11_steady = if d == 0 {
        Verdict::yes("no quasicyclic subgroups")
    } else {
        Verdict::no(format!("contains {d} quasicyclic factor(s)"))
    };

    ClassificationReport {
        quasicyclic_factors: d,
        finite_order: k.order(),
        min_condition: true,
        infinite: d > 0,
        divisible_part: divisible_part(s),
        prop_2_17,
        cor_2_7,
        cor_2_11_steady,
        classes: Classes { solvability: lift(k_solv, d), nilpotency: lift(nilpotency_class(k), d) },
    }
}
