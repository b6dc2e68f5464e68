//! Subloop generation and enumeration, normality, centre, cosets, quotients,
//! direct products and primary decomposition.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::{Limits, MAX_ORDER};
use crate::mask::SubloopMask;
use crate::table::{verify_cml, Element, LoopTable};

/// Closes `base ∪ extra` under the product and inverse.
///
/// `base` must already be closed; only products involving a new element are
/// formed, so extending a subloop by one element costs `O(|result|²)` lookups.
pub fn close_with(l: &LoopTable, base: &SubloopMask, extra: &[Element]) -> SubloopMask {
    let mut set = base.clone();
    set.insert(0);
    let mut elems = set.to_vec();
    let mut next = elems.len();
    for &x in extra {
        if set.insert(x) {
            elems.push(x);
        }
    }
    while next < elems.len() {
        let e = elems[next];
        let ie = l.inv(e);
        if set.insert(ie) {
            elems.push(ie);
        }
        for j in 0..=next {
            let s = elems[j];
            for p in [l.mul(e, s), l.mul(s, e)] {
                if set.insert(p) {
                    elems.push(p);
                }
            }
        }
        next += 1;
    }
    set
}

/// The least subloop containing `gens`.
pub fn generated_subloop(l: &LoopTable, gens: &[Element]) -> SubloopMask {
    close_with(l, &SubloopMask::trivial(l.order()), gens)
}

/// True if `mask` contains 0 and is closed under the product and inverse.
pub fn is_subloop(l: &LoopTable, mask: &SubloopMask) -> bool {
    if mask.parent_order() != l.order() || !mask.contains(0) {
        return false;
    }
    let elems = mask.to_vec();
    elems.iter().all(|&a| mask.contains(l.inv(a)) && elems.iter().all(|&b| mask.contains(l.mul(a, b))))
}

/// Interned subloops with memoized one-element extensions.
///
/// Extending `H` by `x` also records the result for every `x·h` (`h ∈ H`),
/// since `⟨H, x·h⟩ = ⟨H, x⟩`. Shared by lattice enumeration and the
/// generator-subset scans.
pub struct SubloopCache<'a> {
    l: &'a LoopTable,
    masks: Vec<SubloopMask>,
    index: HashMap<SubloopMask, usize>,
    ext: Vec<Vec<u32>>,
}

impl<'a> SubloopCache<'a> {
    pub fn new(l: &'a LoopTable) -> Self {
        let mut cache = SubloopCache { l, masks: Vec::new(), index: HashMap::new(), ext: Vec::new() };
        cache.intern(SubloopMask::trivial(l.order()));
        cache
    }

    pub const TRIVIAL: usize = 0;

    pub fn intern(&mut self, mask: SubloopMask) -> usize {
        if let Some(&id) = self.index.get(&mask) {
            return id;
        }
        let id = self.masks.len();
        self.masks.push(mask.clone());
        self.index.insert(mask, id);
        self.ext.push(Vec::new());
        id
    }

    pub fn mask(&self, id: usize) -> &SubloopMask {
        &self.masks[id]
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Id of `⟨mask(id), x⟩`.
    pub fn extend(&mut self, id: usize, x: Element) -> usize {
        if self.masks[id].contains(x) {
            return id;
        }
        if self.ext[id].is_empty() {
            self.ext[id] = vec![u32::MAX; self.l.order()];
        }
        let hit = self.ext[id][x];
        if hit != u32::MAX {
            return hit as usize;
        }
        let grown = close_with(self.l, &self.masks[id], &[x]);
        let tid = self.intern(grown);
        let l = self.l;
        let members: Vec<usize> = self.masks[id].iter().collect();
        let row = &mut self.ext[id];
        for h in members {
            row[l.mul(x, h)] = tid as u32;
        }
        tid
    }

    /// Id of the subloop generated by `gens`.
    pub fn generate(&mut self, gens: &[Element]) -> usize {
        gens.iter().fold(Self::TRIVIAL, |id, &g| self.extend(id, g))
    }

    pub fn into_masks(self) -> Vec<SubloopMask> {
        self.masks
    }
}

/// Every subloop of `l`, sorted by size and then by element list.
///
/// Breadth-first: each known subloop is extended by each outside element
/// and closed. Refuses tables above `limits.enumeration_bound`.
pub fn all_subloops(l: &LoopTable, limits: &Limits) -> Result<Vec<SubloopMask>> {
    limits.check_enumeration("subloop enumeration", l.order())?;
    let mut cache = SubloopCache::new(l);
    let mut cursor = 0;
    while cursor < cache.len() {
        for x in 0..l.order() {
            cache.extend(cursor, x);
        }
        cursor += 1;
    }
    let mut all = cache.into_masks();
    all.sort();
    Ok(all)
}

/// True iff every associator of elements of `h` is trivial.
pub fn is_associative_subloop(l: &LoopTable, h: &SubloopMask) -> bool {
    let elems = h.to_vec();
    elems.iter().all(|&a| {
        elems.iter().all(|&b| {
            let ab = l.mul(a, b);
            elems.iter().all(|&c| l.mul(ab, c) == l.mul(a, l.mul(b, c)))
        })
    })
}

/// First `(x, y, h)` with `L(x,y)h ∉ M`, scanning `x, y ∈ ambient`, `h ∈ m`.
fn normality_witness(l: &LoopTable, ambient: &SubloopMask, m: &SubloopMask) -> Option<(Element, Element, Element)> {
    let amb = ambient.to_vec();
    for h in m.iter().filter(|&h| h != 0) {
        for &x in &amb {
            for &y in &amb {
                if !m.contains(l.inner_apply(x, y, h)) {
                    return Some((x, y, h));
                }
            }
        }
    }
    None
}

/// True iff every inner mapping `L(x,y)` maps `h` into itself.
pub fn is_normal(l: &LoopTable, h: &SubloopMask) -> bool {
    normality_witness(l, &SubloopMask::full(l.order()), h).is_none()
}

/// Like [`is_normal`], with `x, y` restricted to the subloop `ambient`.
pub fn is_normal_in(l: &LoopTable, ambient: &SubloopMask, m: &SubloopMask) -> bool {
    m.is_subset(ambient) && normality_witness(l, ambient, m).is_none()
}

/// `(x, y, h)` with `L(x,y)h ∉ h`, if `h` is not normal.
pub fn non_normal_witness(l: &LoopTable, h: &SubloopMask) -> Option<(Element, Element, Element)> {
    normality_witness(l, &SubloopMask::full(l.order()), h)
}

fn associates_with_all(l: &LoopTable, x: Element, m: &[Element]) -> bool {
    m.iter().all(|&u| m.iter().all(|&v| l.associator(x, u, v) == 0))
}

/// `Z(Q)`: elements whose associators with every pair vanish.
pub fn centre(l: &LoopTable) -> SubloopMask {
    let all: Vec<usize> = (0..l.order()).collect();
    SubloopMask::from_indices(l.order(), (0..l.order()).filter(|&x| associates_with_all(l, x, &all)))
}

/// `Z_H(M) = {x ∈ H : (x,u,v) = 1 for all u, v ∈ M}`.
pub fn centralizer(l: &LoopTable, h: &SubloopMask, m: &SubloopMask) -> Result<SubloopMask> {
    let ms = m.to_vec();
    let z = SubloopMask::from_indices(l.order(), h.iter().filter(|&x| associates_with_all(l, x, &ms)));
    if !is_subloop(l, &z) {
        return Err(Error::Internal(format!("centralizer {z:?} is not closed")));
    }
    Ok(z)
}

/// The left cosets `xH` of a subloop, with minimal-index representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetPartition {
    pub subloop: SubloopMask,
    pub representative_of: Vec<Element>,
}

impl CosetPartition {
    /// Distinct representatives in increasing order.
    pub fn representatives(&self) -> Vec<Element> {
        let mut reps = self.representative_of.clone();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    pub fn count(&self) -> usize {
        self.representatives().len()
    }
}

fn left_coset(l: &LoopTable, x: Element, h: &[Element]) -> SubloopMask {
    SubloopMask::from_indices(l.order(), h.iter().map(|&e| l.mul(x, e)))
}

/// Partitions `l` into the sets `xH`.
///
/// For a subloop that is not normal the family `{xH}` need not partition the
/// loop; that case is reported as a precondition error rather than assumed away.
pub fn cosets(l: &LoopTable, h: &SubloopMask) -> Result<CosetPartition> {
    if !is_subloop(l, h) {
        return Err(Error::Precondition("coset mask is not a subloop".into()));
    }
    let n = l.order();
    let hs = h.to_vec();
    let mut rep = vec![usize::MAX; n];
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<SubloopMask> = Vec::new();
    for x in 0..n {
        let xh = left_coset(l, x, &hs);
        if rep[x] == usize::MAX {
            if let Some(y) = xh.iter().find(|&y| rep[y] != usize::MAX) {
                return Err(Error::Precondition(format!(
                    "cosets do not partition: {x}H meets the coset of {}",
                    rep[y]
                )));
            }
            for y in xh.iter() {
                rep[y] = x;
                class_of[y] = classes.len();
            }
            classes.push(xh);
        } else if classes[class_of[x]] != xh {
            return Err(Error::Precondition(format!(
                "cosets do not partition: {x}H differs from the coset containing {x}"
            )));
        }
    }
    Ok(CosetPartition { subloop: h.clone(), representative_of: rep })
}

/// A quotient loop together with the projection onto it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub table: LoopTable,
    /// Coset index of each parent element.
    pub projection: Vec<Element>,
}

/// `L/N` on cosets numbered by increasing representative; the coset of 0 is 0.
pub fn quotient(l: &LoopTable, n: &SubloopMask) -> Result<Quotient> {
    if !is_subloop(l, n) || !is_normal(l, n) {
        return Err(Error::Precondition("quotient requires a normal subloop".into()));
    }
    let part = cosets(l, n)?;
    let reps = part.representatives();
    let mut index_of_rep = vec![usize::MAX; l.order()];
    for (i, &r) in reps.iter().enumerate() {
        index_of_rep[r] = i;
    }
    let projection: Vec<usize> = part.representative_of.iter().map(|&r| index_of_rep[r]).collect();
    let name = l.name().map(|s| format!("{s}/N{}", n.len()));
    let table = LoopTable::from_fn(name, reps.len(), |i, j| projection[l.mul(reps[i], reps[j])])?;
    for a in 0..l.order() {
        for b in 0..l.order() {
            if projection[l.mul(a, b)] != table.mul(projection[a], projection[b]) {
                return Err(Error::Internal(format!("coset product not well defined at ({a},{b})")));
            }
        }
    }
    let report = verify_cml(&table);
    if !report.is_cml() {
        return Err(Error::Internal(format!("quotient fails verification: {:?}", report.first_failure)));
    }
    Ok(Quotient { table, projection })
}

/// `A × B` with `(a, b) ↦ a·|B| + b`.
pub fn direct_product(a: &LoopTable, b: &LoopTable) -> Result<LoopTable> {
    let nb = b.order();
    let order = a.order() * nb;
    if order > MAX_ORDER {
        return Err(Error::Bound { what: "direct product", order, bound: MAX_ORDER });
    }
    let name = match (a.name(), b.name()) {
        (Some(x), Some(y)) => Some(format!("{x}x{y}")),
        _ => None,
    };
    LoopTable::from_fn(name, order, |i, j| a.mul(i / nb, j / nb) * nb + b.mul(i % nb, j % nb))
}

fn prime_factors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn is_power_of(mut k: usize, p: usize) -> bool {
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

/// The maximal `p`-subloops, one per prime dividing the exponent.
///
/// Each component is checked to be a normal subloop, together they generate
/// the loop with pairwise trivial intersections and sizes multiplying to the
/// order, and every component for `p ≠ 3` lies in the centre. Any failure is a
/// [`Error::TheoremViolation`].
pub fn p_components(l: &LoopTable) -> Result<BTreeMap<usize, SubloopMask>> {
    let n = l.order();
    let orders: Vec<usize> = (0..n).map(|x| l.element_order(x)).collect();
    let exp = l.exponent();
    let mut comps = BTreeMap::new();
    for p in prime_factors(exp) {
        let mask = SubloopMask::from_indices(n, (0..n).filter(|&x| is_power_of(orders[x], p)));
        if !is_subloop(l, &mask) {
            return Err(Error::TheoremViolation(format!("{p}-elements do not form a subloop")));
        }
        if !is_normal(l, &mask) {
            return Err(Error::TheoremViolation(format!("{p}-component is not normal")));
        }
        comps.insert(p, mask);
    }
    let z = centre(l);
    let masks: Vec<&SubloopMask> = comps.values().collect();
    for (i, a) in masks.iter().enumerate() {
        for b in &masks[i + 1..] {
            if !a.intersection(b).is_trivial() {
                return Err(Error::TheoremViolation("primary components intersect non-trivially".into()));
            }
        }
    }
    let gens: Vec<usize> = masks.iter().flat_map(|m| m.iter()).collect();
    if !generated_subloop(l, &gens).is_full() {
        return Err(Error::TheoremViolation("primary components do not generate the loop".into()));
    }
    let product: usize = masks.iter().map(|m| m.len()).product();
    if product != n {
        return Err(Error::TheoremViolation(format!("component sizes multiply to {product}, not {n}")));
    }
    for (&p, m) in &comps {
        if p != 3 && !m.is_subset(&z) {
            return Err(Error::TheoremViolation(format!("{p}-component is not central")));
        }
    }
    Ok(comps)
}

/// A pair `(a, b)` where coset equality modulo the centralizer and the
/// inner-mapping criterion disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetCriterionWitness {
    pub a: Element,
    pub b: Element,
    pub cosets_equal: bool,
    pub criterion: bool,
}

/// For `a, b ∈ H`: `a·Z_H(M) = b·Z_H(M)` iff `L(a,b)(a,u,v) = (b,u,v)` for all
/// `u, v ∈ M`. Returns every pair where the two sides disagree.
pub fn lemma_1_6_check(l: &LoopTable, h: &SubloopMask, m: &SubloopMask) -> Result<Vec<CosetCriterionWitness>> {
    if !is_subloop(l, h) || !is_subloop(l, m) || !is_normal_in(l, h, m) {
        return Err(Error::Precondition("M must be a normal subloop of H".into()));
    }
    let z = centralizer(l, h, m)?;
    let zs = z.to_vec();
    let hs = h.to_vec();
    let ms = m.to_vec();
    let coset: Vec<SubloopMask> = hs.iter().map(|&a| left_coset(l, a, &zs)).collect();
    let mut out = Vec::new();
    for (i, &a) in hs.iter().enumerate() {
        for (j, &b) in hs.iter().enumerate() {
            let cosets_equal = coset[i] == coset[j];
            let criterion = ms
                .iter()
                .all(|&u| ms.iter().all(|&v| l.inner_apply(a, b, l.associator(a, u, v)) == l.associator(b, u, v)));
            if cosets_equal != criterion {
                out.push(CosetCriterionWitness { a, b, cosets_equal, criterion });
            }
        }
    }
    Ok(out)
}
