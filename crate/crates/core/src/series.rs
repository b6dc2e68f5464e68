//! Central and derived series, nilpotency and solvability classes, and the
//! finite-instance structural predicates built on them.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::mask::SubloopMask;
use crate::sampling::{for_each_subset, Coverage};
use crate::subloop::{
    all_subloops, centre, close_with, generated_subloop, is_associative_subloop, is_normal, is_normal_in,
    non_normal_witness, quotient, SubloopCache,
};
use crate::table::{Element, LoopTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    LowerCentral,
    Derived,
    UpperCentral,
}

impl std::str::FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" | "lower_central" => Ok(SeriesKind::LowerCentral),
            "derived" => Ok(SeriesKind::Derived),
            "upper" | "upper_central" => Ok(SeriesKind::UpperCentral),
            other => Err(Error::Input(format!("unknown series kind {other:?}"))),
        }
    }
}

/// A class number, or the marker for a chain that stabilizes short of its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassValue {
    Finite(usize),
    DoesNotTerminate,
}

impl ClassValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            ClassValue::Finite(c) => Some(c),
            ClassValue::DoesNotTerminate => None,
        }
    }
}

impl fmt::Display for ClassValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassValue::Finite(c) => write!(f, "{c}"),
            ClassValue::DoesNotTerminate => f.write_str("does_not_terminate_at_identity"),
        }
    }
}

impl Serialize for ClassValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ClassValue::Finite(c) => s.serialize_u64(*c as u64),
            ClassValue::DoesNotTerminate => s.serialize_str("does_not_terminate_at_identity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub chain: Vec<SubloopMask>,
    pub sizes: Vec<usize>,
    pub class_value: ClassValue,
}

impl SeriesReport {
    fn new(kind: SeriesKind, chain: Vec<SubloopMask>, class_value: ClassValue) -> Self {
        let sizes = chain.iter().map(|m| m.len()).collect();
        SeriesReport { kind, chain, sizes, class_value }
    }

    /// One-line rendering such as `Q ⊃ Q' ⊃ 1 (class 2)`.
    pub fn render(&self) -> String {
        let names: Vec<String> = self
            .chain
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if m.is_trivial() {
                    "1".to_string()
                } else if m.is_full() {
                    "Q".to_string()
                } else {
                    match self.kind {
                        SeriesKind::Derived => match i {
                            1 => "Q'".to_string(),
                            2 => "Q''".to_string(),
                            _ => format!("Q^({i})"),
                        },
                        SeriesKind::LowerCentral => match i {
                            1 => "Q'".to_string(),
                            _ => format!("G{}", i + 1),
                        },
                        SeriesKind::UpperCentral => format!("Z{i}"),
                    }
                }
            })
            .collect();
        let sep = match self.kind {
            SeriesKind::UpperCentral => " ⊂ ",
            _ => " ⊃ ",
        };
        format!("{} (class {})", names.join(sep), self.class_value)
    }
}

fn descending_class(chain: &[SubloopMask]) -> ClassValue {
    match chain.last() {
        Some(m) if m.is_trivial() => ClassValue::Finite(chain.len() - 1),
        _ => ClassValue::DoesNotTerminate,
    }
}

/// `Γ₁ = H`, `Γᵢ₊₁ = ⟨(g,x,y) : g ∈ Γᵢ, x,y ∈ H⟩`, up to stabilization.
pub(crate) fn lower_central_chain(l: &LoopTable, h: &SubloopMask) -> Vec<SubloopMask> {
    let hs = h.to_vec();
    let mut chain = vec![h.clone()];
    loop {
        let cur = chain.last().unwrap();
        let mut vals = SubloopMask::trivial(l.order());
        for g in cur.iter() {
            for &x in &hs {
                for &y in &hs {
                    vals.insert(l.associator(g, x, y));
                }
            }
        }
        let next = close_with(l, &SubloopMask::trivial(l.order()), &vals.to_vec());
        if &next == cur {
            break;
        }
        chain.push(next);
    }
    chain
}

/// `D₀ = H`, `Dᵢ₊₁ = ⟨(a,b,c) : a,b,c ∈ Dᵢ⟩`, up to stabilization.
pub(crate) fn derived_chain(l: &LoopTable, h: &SubloopMask) -> Vec<SubloopMask> {
    let mut chain = vec![h.clone()];
    loop {
        let cur = chain.last().unwrap();
        let cs = cur.to_vec();
        let mut vals = SubloopMask::trivial(l.order());
        for &a in &cs {
            for &b in &cs {
                for &c in &cs {
                    vals.insert(l.associator(a, b, c));
                }
            }
        }
        let next = close_with(l, &SubloopMask::trivial(l.order()), &vals.to_vec());
        if &next == cur {
            break;
        }
        chain.push(next);
    }
    chain
}

fn assert_normal_chain(l: &LoopTable, ambient: &SubloopMask, chain: &[SubloopMask]) -> Result<()> {
    for m in chain {
        if !is_normal_in(l, ambient, m) {
            return Err(Error::TheoremViolation(format!("series term of size {} is not normal", m.len())));
        }
    }
    Ok(())
}

/// Lower central series of the whole loop, each term checked to be normal.
pub fn lower_central_series(l: &LoopTable) -> Result<SeriesReport> {
    let full = SubloopMask::full(l.order());
    let chain = lower_central_chain(l, &full);
    assert_normal_chain(l, &full, &chain)?;
    let class = descending_class(&chain);
    Ok(SeriesReport::new(SeriesKind::LowerCentral, chain, class))
}

/// Derived series of the whole loop, each term checked to be normal.
pub fn derived_series(l: &LoopTable) -> Result<SeriesReport> {
    let full = SubloopMask::full(l.order());
    let chain = derived_chain(l, &full);
    assert_normal_chain(l, &full, &chain)?;
    let class = descending_class(&chain);
    Ok(SeriesReport::new(SeriesKind::Derived, chain, class))
}

/// `Z₀ = 1`, `Zᵢ₊₁` = preimage of the centre of `L/Zᵢ`, up to stabilization.
pub fn upper_central_series(l: &LoopTable) -> Result<SeriesReport> {
    let n = l.order();
    let mut chain = vec![SubloopMask::trivial(n)];
    loop {
        let cur = chain.last().unwrap();
        let q = quotient(l, cur)?;
        let zq = centre(&q.table);
        let next = SubloopMask::from_indices(n, (0..n).filter(|&x| zq.contains(q.projection[x])));
        if &next == cur {
            break;
        }
        chain.push(next);
    }
    let full = SubloopMask::full(n);
    assert_normal_chain(l, &full, &chain)?;
    let class = match chain.last() {
        Some(m) if m.is_full() => ClassValue::Finite(chain.len() - 1),
        _ => ClassValue::DoesNotTerminate,
    };
    Ok(SeriesReport::new(SeriesKind::UpperCentral, chain, class))
}

pub fn series(l: &LoopTable, kind: SeriesKind) -> Result<SeriesReport> {
    match kind {
        SeriesKind::LowerCentral => lower_central_series(l),
        SeriesKind::Derived => derived_series(l),
        SeriesKind::UpperCentral => upper_central_series(l),
    }
}

pub fn nilpotency_class(l: &LoopTable) -> ClassValue {
    descending_class(&lower_central_chain(l, &SubloopMask::full(l.order())))
}

pub fn solvability_class(l: &LoopTable) -> ClassValue {
    descending_class(&derived_chain(l, &SubloopMask::full(l.order())))
}

/// Nilpotency class of the subloop `h`, computed inside the parent table.
pub fn nilpotency_class_of(l: &LoopTable, h: &SubloopMask) -> ClassValue {
    descending_class(&lower_central_chain(l, h))
}

pub fn solvability_class_of(l: &LoopTable, h: &SubloopMask) -> ClassValue {
    descending_class(&derived_chain(l, h))
}

/// The associator subloop `Q'`.
pub fn associator_subloop(l: &LoopTable) -> SubloopMask {
    let chain = derived_chain(l, &SubloopMask::full(l.order()));
    chain.get(1).cloned().unwrap_or_else(|| chain[0].clone())
}

/// A depth where the derived term differs from the subloop generated by
/// nested associators of that depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestedMismatch {
    pub depth: usize,
    pub derived: SubloopMask,
    pub nested: SubloopMask,
}

/// Compares each derived term `Dᵢ` with the subloop generated by the
/// depth-`i` nested associator values `((…),(…),(…))` of arbitrary elements.
pub fn derived_series_nested_check(l: &LoopTable) -> Vec<NestedMismatch> {
    let chain = derived_chain(l, &SubloopMask::full(l.order()));
    let mut values: Vec<Element> = (0..l.order()).collect();
    let mut out = Vec::new();
    for (depth, derived) in chain.iter().enumerate().skip(1) {
        let mut next = BTreeSet::new();
        for &a in &values {
            for &b in &values {
                for &c in &values {
                    next.insert(l.associator(a, b, c));
                }
            }
        }
        values = next.into_iter().collect();
        let nested = generated_subloop(l, &values);
        if &nested != derived {
            out.push(NestedMismatch { depth, derived: derived.clone(), nested });
        }
    }
    out
}

/// Counterexample attached to a failed predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Elements(Vec<Element>),
    Subloop(SubloopMask),
    Generators { generators: Vec<Element>, class: ClassValue },
    Detail(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassPredicateResult {
    pub holds: bool,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Coverage>,
}

impl ClassPredicateResult {
    fn verdict(witness: Option<Witness>) -> Self {
        ClassPredicateResult { holds: witness.is_none(), witness, coverage: None }
    }

    fn with_coverage(mut self, c: Coverage) -> Self {
        self.coverage = Some(c);
        self
    }
}

/// Every `n`-element subset generates a subloop of nilpotency class at most `n − 1`.
///
/// Exhaustive up to `limits.exhaustive_bound`, stride-sampled above it.
pub fn bruck_slaby_check(l: &LoopTable, n: usize, limits: &Limits) -> Result<ClassPredicateResult> {
    if n < 3 {
        return Err(Error::Precondition(format!("generator count must be at least 3, got {n}")));
    }
    let mut cache = SubloopCache::new(l);
    let mut classes: Vec<Option<ClassValue>> = Vec::new();
    let mut witness = None;
    let cov = for_each_subset(l.order(), n, limits, |gens| {
        let id = cache.generate(gens);
        if classes.len() <= id {
            classes.resize(cache.len(), None);
        }
        let class = *classes[id].get_or_insert_with(|| nilpotency_class_of(l, cache.mask(id)));
        if class.finite().is_none_or(|c| c > n - 1) {
            witness = Some(Witness::Generators { generators: gens.to_vec(), class });
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    Ok(ClassPredicateResult::verdict(witness).with_coverage(cov))
}

/// Cubes are central and `L/Z(L)` has exponent dividing 3.
pub fn lemma_1_7_check(l: &LoopTable) -> Result<ClassPredicateResult> {
    let z = centre(l);
    if let Some(x) = (0..l.order()).find(|&x| !z.contains(l.pow(x, 3))) {
        return Ok(ClassPredicateResult::verdict(Some(Witness::Elements(vec![x]))));
    }
    let q = quotient(l, &z)?;
    let e = q.table.exponent();
    let witness = (3 % e != 0).then(|| Witness::Detail(format!("L/Z(L) has exponent {e}")));
    Ok(ClassPredicateResult::verdict(witness))
}

/// Every subloop is normal.
pub fn is_hamiltonian(l: &LoopTable, limits: &Limits) -> Result<ClassPredicateResult> {
    let subs = all_subloops(l, limits)?;
    let witness = subs.into_iter().find(|m| !is_normal(l, m)).map(Witness::Subloop);
    Ok(ClassPredicateResult::verdict(witness))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Nilpotent,
    Solvable,
}

fn class_of(l: &LoopTable, h: &SubloopMask, kind: ClassKind) -> ClassValue {
    match kind {
        ClassKind::Nilpotent => nilpotency_class_of(l, h),
        ClassKind::Solvable => solvability_class_of(l, h),
    }
}

/// `l` has class `n` of the given kind and every proper subloop has smaller class.
pub fn is_minimal_of_class(l: &LoopTable, kind: ClassKind, n: usize, limits: &Limits) -> Result<ClassPredicateResult> {
    let own = class_of(l, &SubloopMask::full(l.order()), kind);
    if own != ClassValue::Finite(n) {
        return Err(Error::Precondition(format!("loop has class {own}, not {n}")));
    }
    let subs = all_subloops(l, limits)?;
    let witness = subs
        .into_iter()
        .filter(|m| !m.is_full())
        .find(|m| class_of(l, m, kind).finite().is_none_or(|c| c >= n))
        .map(Witness::Subloop);
    Ok(ClassPredicateResult::verdict(witness))
}

/// An element of order 3 generating a normal subloop lies in the centre.
pub fn lemma_3_1_check(l: &LoopTable) -> ClassPredicateResult {
    let z = centre(l);
    let witness = (0..l.order())
        .filter(|&a| !z.contains(a) && l.element_order(a) == 3)
        .find(|&a| is_normal(l, &generated_subloop(l, &[a])))
        .map(|a| Witness::Elements(vec![a]));
    ClassPredicateResult::verdict(witness)
}

/// Every non-associative subloop is normal.
pub fn all_nonassoc_subloops_normal(l: &LoopTable, limits: &Limits) -> Result<ClassPredicateResult> {
    let subs = all_subloops(l, limits)?;
    let witness = subs
        .into_iter()
        .find(|m| !is_associative_subloop(l, m) && non_normal_witness(l, m).is_some())
        .map(Witness::Subloop);
    Ok(ClassPredicateResult::verdict(witness))
}

/// When every non-associative subloop is normal: `Q'` is centrally nilpotent
/// and `Q` is centrally solvable of class at most 3.
///
/// `Ok(None)` means the hypothesis does not hold and the check was skipped.
pub fn corollary_4_5_check(l: &LoopTable, limits: &Limits) -> Result<Option<ClassPredicateResult>> {
    if !all_nonassoc_subloops_normal(l, limits)?.holds {
        return Ok(None);
    }
    let qp = associator_subloop(l);
    if nilpotency_class_of(l, &qp).finite().is_none() {
        return Ok(Some(ClassPredicateResult::verdict(Some(Witness::Subloop(qp)))));
    }
    let s = solvability_class(l);
    let witness = s.finite().is_none_or(|c| c > 3).then(|| Witness::Detail(format!("solvability class {s}")));
    Ok(Some(ClassPredicateResult::verdict(witness)))
}
