//! Associators, inner mappings, and exhaustive checks of the associator identities.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Serialize, Serializer};

use crate::limits::Limits;
use crate::sampling::{for_each_tuple, Coverage};
use crate::table::{Element, LoopTable};

/// At most this many witnesses are kept per identity; the failure count is still exact.
pub const MAX_WITNESSES_PER_IDENTITY: usize = 64;

/// Exponent triples used for the power identity when the caller has no preference.
pub const DEFAULT_EXPONENTS: [(i64, i64, i64); 4] = [(2, 1, 1), (-1, 1, 1), (2, 2, 2), (3, 1, 1)];

impl LoopTable {
    /// The associator `(a,b,c)`: the unique `t` with `ab·c = (a·bc)·t`.
    #[inline]
    pub fn associator(&self, a: Element, b: Element, c: Element) -> Element {
        self.left_div(self.mul(a, self.mul(b, c)), self.mul(self.mul(a, b), c))
    }

    /// The inner mapping `L(x,y)` applied to `z`, in the form `z·(z,y,x)`.
    #[inline]
    pub fn inner_apply(&self, x: Element, y: Element, z: Element) -> Element {
        self.mul(z, self.associator(z, y, x))
    }
}

/// Which identity a witness refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    /// `(x,y,z) = (y⁻¹,x,z) = (y,x,z)⁻¹ = (y,z,x)`
    Skew,
    /// `(x^p,y^r,z^s) = (x,y,z)^{prs}`
    Power,
    /// `(x,y,z)^3 = 1`
    Torsion,
    /// `(xy,u,v) = (x,u,v)((x,u,v),x,y)(y,u,v)((y,u,v),y,x)`
    Expansion,
    /// `L(x,y)(uv) = L(x,y)u · L(x,y)v`
    InnerAutomorphism,
}

impl IdentityId {
    pub fn label(self) -> &'static str {
        match self {
            IdentityId::Skew => "1.2",
            IdentityId::Power => "1.3",
            IdentityId::Torsion => "1.4",
            IdentityId::Expansion => "1.5",
            IdentityId::InnerAutomorphism => "lemma1.1",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// One checked instance of an identity where the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociatorWitness {
    pub identity: IdentityId,
    pub tuple: Vec<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<(i64, i64, i64)>,
    pub lhs: Element,
    pub rhs: Element,
}

/// Result of an identity scan: failures plus how much of each space was covered.
#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityReport {
    pub witnesses: Vec<AssociatorWitness>,
    /// Exact number of failing instances per identity label (witness lists are capped).
    pub failures: BTreeMap<&'static str, u64>,
    pub coverage: BTreeMap<&'static str, Coverage>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.values().all(|&c| c == 0)
    }

    /// True when any identity was only sampled.
    pub fn partial(&self) -> bool {
        self.coverage.values().any(|c| !c.exhaustive)
    }

    fn record(&mut self, w: AssociatorWitness, kept: &mut BTreeMap<IdentityId, Vec<AssociatorWitness>>) {
        *self.failures.entry(w.identity.label()).or_default() += 1;
        let list = kept.entry(w.identity).or_default();
        if list.len() < MAX_WITNESSES_PER_IDENTITY {
            list.push(w);
        }
    }

    fn merge(&mut self, other: IdentityReport) {
        self.witnesses.extend(other.witnesses);
        for (k, v) in other.failures {
            *self.failures.entry(k).or_default() += v;
        }
        self.coverage.extend(other.coverage);
    }
}

fn power_table(l: &LoopTable, k: i64) -> Vec<u16> {
    (0..l.order()).map(|x| l.pow(x, k) as u16).collect()
}

/// Checks the skew, power, torsion and expansion identities.
///
/// The three triple identities run over all `n³` triples (the power identity
/// once per exponent triple); the expansion identity runs over `n⁴`
/// quadruples, stride-sampled above `limits.exhaustive_bound`.
pub fn check_identities(l: &LoopTable, exponents: &[(i64, i64, i64)], limits: &Limits) -> IdentityReport {
    let mut report = IdentityReport::default();
    let mut kept: BTreeMap<IdentityId, Vec<AssociatorWitness>> = BTreeMap::new();
    let n = l.order();

    let mut powers: BTreeMap<i64, Vec<u16>> = BTreeMap::new();
    for &(p, r, s) in exponents {
        for k in [p, r, s, p * r * s] {
            powers.entry(k).or_insert_with(|| power_table(l, k));
        }
    }
    let cube = power_table(l, 3);
    let pw = |k: i64, x: usize| powers[&k][x] as usize;

    let all_triples = Limits { exhaustive_bound: usize::MAX, ..*limits };
    let cov3 = for_each_tuple::<3>(n, &all_triples, |[x, y, z]| {
        let a = l.associator(x, y, z);

        let skew = [l.associator(l.inv(y), x, z), l.inv(l.associator(y, x, z)), l.associator(y, z, x)];
        if let Some(&rhs) = skew.iter().find(|&&v| v != a) {
            report.record(
                AssociatorWitness { identity: IdentityId::Skew, tuple: vec![x, y, z], exponents: None, lhs: a, rhs },
                &mut kept,
            );
        }

        for &(p, r, s) in exponents {
            let lhs = l.associator(pw(p, x), pw(r, y), pw(s, z));
            let rhs = pw(p * r * s, a);
            if lhs != rhs {
                report.record(
                    AssociatorWitness {
                        identity: IdentityId::Power,
                        tuple: vec![x, y, z],
                        exponents: Some((p, r, s)),
                        lhs,
                        rhs,
                    },
                    &mut kept,
                );
            }
        }

        let t = cube[a] as usize;
        if t != 0 {
            report.record(
                AssociatorWitness {
                    identity: IdentityId::Torsion,
                    tuple: vec![x, y, z],
                    exponents: None,
                    lhs: t,
                    rhs: 0,
                },
                &mut kept,
            );
        }
        ControlFlow::Continue(())
    });
    report.coverage.insert(IdentityId::Skew.label(), cov3);
    report.coverage.insert(IdentityId::Torsion.label(), cov3);
    if !exponents.is_empty() {
        let per = Coverage {
            checked: cov3.checked * exponents.len() as u64,
            total: cov3.total * exponents.len() as u64,
            exhaustive: cov3.exhaustive,
        };
        report.coverage.insert(IdentityId::Power.label(), per);
    }

    let cov4 = for_each_tuple::<4>(n, limits, |[x, y, u, v]| {
        let lhs = l.associator(l.mul(x, y), u, v);
        let xuv = l.associator(x, u, v);
        let yuv = l.associator(y, u, v);
        // left-to-right bracketing of the four factors
        let rhs = l.mul(l.mul(l.mul(xuv, l.associator(xuv, x, y)), yuv), l.associator(yuv, y, x));
        if lhs != rhs {
            report.record(
                AssociatorWitness {
                    identity: IdentityId::Expansion,
                    tuple: vec![x, y, u, v],
                    exponents: None,
                    lhs,
                    rhs,
                },
                &mut kept,
            );
        }
        ControlFlow::Continue(())
    });
    report.coverage.insert(IdentityId::Expansion.label(), cov4);

    for id in [IdentityId::Skew, IdentityId::Power, IdentityId::Torsion, IdentityId::Expansion] {
        report.failures.entry(id.label()).or_default();
    }
    if exponents.is_empty() {
        report.failures.remove(IdentityId::Power.label());
    }
    report.witnesses = kept.into_values().flatten().collect();
    report
}

/// Checks that every inner mapping `L(x,y)` is multiplicative, over all
/// `n⁴` quadruples `(x,y,u,v)` (stride-sampled above the exhaustive bound).
pub fn check_inner_automorphism(l: &LoopTable, limits: &Limits) -> IdentityReport {
    let mut report = IdentityReport::default();
    let mut kept = BTreeMap::new();
    let cov = for_each_tuple::<4>(l.order(), limits, |[x, y, u, v]| {
        let lhs = l.inner_apply(x, y, l.mul(u, v));
        let rhs = l.mul(l.inner_apply(x, y, u), l.inner_apply(x, y, v));
        if lhs != rhs {
            report.record(
                AssociatorWitness {
                    identity: IdentityId::InnerAutomorphism,
                    tuple: vec![x, y, u, v],
                    exponents: None,
                    lhs,
                    rhs,
                },
                &mut kept,
            );
        }
        ControlFlow::Continue(())
    });
    report.failures.entry(IdentityId::InnerAutomorphism.label()).or_default();
    report.coverage.insert(IdentityId::InnerAutomorphism.label(), cov);
    report.witnesses = kept.into_values().flatten().collect();
    report
}

/// Both scans above, merged.
pub fn check_all_identities(l: &LoopTable, exponents: &[(i64, i64, i64)], limits: &Limits) -> IdentityReport {
    let mut r = check_identities(l, exponents, limits);
    r.merge(check_inner_automorphism(l, limits));
    r
}
