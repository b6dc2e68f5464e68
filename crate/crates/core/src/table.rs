//! Cayley-table loops and the commutative Moufang axiom check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::MAX_ORDER;
use crate::mask::SubloopMask;

/// An element of a [`LoopTable`], given by its row/column index.
pub type Element = usize;

/// A finite loop given by its multiplication table, identity at index 0.
///
/// Construction only checks the table's shape; the loop axioms are checked
/// by [`verify_cml`]. Division tables are built eagerly so the associator is
/// a handful of lookups.
#[derive(Clone)]
pub struct LoopTable {
    name: Option<String>,
    order: usize,
    mul: Vec<u16>,
    ldiv: Vec<u16>,
    inv: Vec<u16>,
    rows_are_permutations: bool,
}

impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.order == other.order && self.mul == other.mul
    }
}

impl Eq for LoopTable {}

impl std::fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LoopTable").field("name", &self.name).field("order", &self.order).finish_non_exhaustive()
    }
}

impl LoopTable {
    /// Builds a table from rows, rejecting non-square or out-of-range input.
    pub fn from_rows(name: Option<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::input("table is empty"));
        }
        if n > MAX_ORDER {
            return Err(Error::Bound { what: "loop table", order: n, bound: MAX_ORDER });
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::input(format!("entry ({i},{j}) = {v} is out of range for order {n}")));
                }
                mul.push(v as u16);
            }
        }
        Ok(Self::from_raw(name, n, mul))
    }

    /// Builds a table from a product function over `0..order`.
    ///
    /// Panics if `f` returns an out-of-range index; meant for constructions.
    pub fn from_fn(name: Option<String>, order: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::input("order must be positive"));
        }
        if order > MAX_ORDER {
            return Err(Error::Bound { what: "loop table", order, bound: MAX_ORDER });
        }
        let mut mul = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                let v = f(i, j);
                assert!(v < order, "construction produced {v} for order {order}");
                mul.push(v as u16);
            }
        }
        Ok(Self::from_raw(name, order, mul))
    }

    fn from_raw(name: Option<String>, n: usize, mul: Vec<u16>) -> Self {
        let mut ldiv = vec![u16::MAX; n * n];
        let mut rows_are_permutations = true;
        for a in 0..n {
            for b in 0..n {
                let c = mul[a * n + b] as usize;
                let slot = &mut ldiv[a * n + c];
                if *slot != u16::MAX {
                    rows_are_permutations = false;
                }
                *slot = b as u16;
            }
        }
        let inv = (0..n)
            .map(|a| match ldiv[a * n] {
                u16::MAX => 0,
                b => b,
            })
            .collect();
        LoopTable { name, order: n, mul, ldiv, inv, rows_are_permutations }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Unchecked product; panics if an index is out of range.
    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        debug_assert!(a < self.order && b < self.order);
        self.mul[a * self.order + b] as usize
    }

    /// The unique `b` with `a·b = c`. Meaningful only when rows are permutations.
    #[inline]
    pub fn left_div(&self, a: Element, c: Element) -> Element {
        debug_assert!(self.rows_are_permutations, "left division on a non-Latin table");
        self.ldiv[a * self.order + c] as usize
    }

    /// Unchecked two-sided inverse.
    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inv[a] as usize
    }

    pub fn try_mul(&self, a: Element, b: Element) -> Result<Element> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_inv(&self, a: Element) -> Result<Element> {
        self.check_index(a)?;
        Ok(self.inv(a))
    }

    pub fn check_index(&self, a: Element) -> Result<()> {
        if a >= self.order {
            return Err(Error::input(format!("element {a} out of range for loop of order {}", self.order)));
        }
        Ok(())
    }

    /// `a^k`, by square-and-multiply. Negative exponents go through the inverse.
    ///
    /// Only bracketing-independent in power-associative loops, which every
    /// commutative Moufang loop is.
    pub fn pow(&self, a: Element, k: i64) -> Element {
        let (mut base, mut e) = if k < 0 { (self.inv(a), k.unsigned_abs()) } else { (a, k as u64) };
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Least `k ≥ 1` with `a^k = 0`, by repeated right multiplication.
    ///
    /// Right translations of a Latin square are permutations, so the orbit of
    /// the identity always returns and this terminates even on non-Moufang input.
    pub fn element_order(&self, a: Element) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
            if k > self.order {
                // Not a loop; the orbit of 0 under R_a never closed.
                return 0;
            }
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).map(|a| self.element_order(a)).fold(1, |acc, o| if o == 0 { acc } else { lcm(acc, o) })
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// Rows of the table, for serialization.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    /// The index acting as a two-sided identity, if any.
    pub fn find_identity(&self) -> Option<Element> {
        (0..self.order).find(|&e| (0..self.order).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// The subloop on `mask`, relabelled in increasing index order.
    ///
    /// Returns the table and the parent index of each new element.
    pub fn restrict(&self, mask: &SubloopMask) -> Result<(LoopTable, Vec<Element>)> {
        let elems = mask.to_vec();
        if elems.first() != Some(&0) {
            return Err(Error::Precondition("mask does not contain the identity".into()));
        }
        let mut local = vec![usize::MAX; self.order];
        for (i, &e) in elems.iter().enumerate() {
            local[e] = i;
        }
        let m = elems.len();
        let mut mul = Vec::with_capacity(m * m);
        for &a in &elems {
            for &b in &elems {
                let c = local[self.mul(a, b)];
                if c == usize::MAX {
                    return Err(Error::Precondition(format!(
                        "mask is not closed: {a}·{b} = {} lies outside",
                        self.mul(a, b)
                    )));
                }
                mul.push(c as u16);
            }
        }
        let name = self.name.as_ref().map(|n| format!("{n}|sub{m}"));
        Ok((Self::from_raw(name, m, mul), elems))
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A tuple of element indices witnessing a failed axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub property: &'static str,
    pub tuple: Vec<Element>,
}

/// Outcome of [`verify_cml`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub latin_square: bool,
    pub identity_ok: bool,
    pub commutative: bool,
    pub moufang: bool,
    pub first_failure: Option<AxiomFailure>,
}

impl VerificationReport {
    pub fn is_cml(&self) -> bool {
        self.latin_square && self.identity_ok && self.commutative && self.moufang
    }
}

/// Checks the Latin-square property, identity at 0, commutativity, and the
/// commutative Moufang law `x²·(yz) = (xy)·(xz)` over every triple.
pub fn verify_cml(l: &LoopTable) -> VerificationReport {
    let n = l.order();
    let mut failures: Vec<AxiomFailure> = Vec::new();

    let latin_failure = latin_failure(l);
    let latin_square = latin_failure.is_none();
    failures.extend(latin_failure);

    let identity_failure = (0..n).find_map(|j| {
        if l.mul(0, j) != j {
            Some(AxiomFailure { property: "identity:left", tuple: vec![0, j] })
        } else if l.mul(j, 0) != j {
            Some(AxiomFailure { property: "identity:right", tuple: vec![j, 0] })
        } else {
            None
        }
    });
    let identity_ok = identity_failure.is_none();
    failures.extend(identity_failure);

    let commutative_failure = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| l.mul(a, b) != l.mul(b, a))
        .map(|(a, b)| AxiomFailure { property: "commutative", tuple: vec![a, b] });
    let commutative = commutative_failure.is_none();
    failures.extend(commutative_failure);

    let moufang_failure = moufang_failure(l);
    let moufang = moufang_failure.is_none();
    failures.extend(moufang_failure);

    VerificationReport { latin_square, identity_ok, commutative, moufang, first_failure: failures.into_iter().next() }
}

fn latin_failure(l: &LoopTable) -> Option<AxiomFailure> {
    let n = l.order();
    let mut seen = vec![usize::MAX; n];
    for i in 0..n {
        seen.fill(usize::MAX);
        for j in 0..n {
            let v = l.mul(i, j);
            if seen[v] != usize::MAX {
                return Some(AxiomFailure { property: "latin_square:row", tuple: vec![i, seen[v], j] });
            }
            seen[v] = j;
        }
    }
    for j in 0..n {
        seen.fill(usize::MAX);
        for i in 0..n {
            let v = l.mul(i, j);
            if seen[v] != usize::MAX {
                return Some(AxiomFailure { property: "latin_square:column", tuple: vec![j, seen[v], i] });
            }
            seen[v] = i;
        }
    }
    None
}

fn moufang_failure(l: &LoopTable) -> Option<AxiomFailure> {
    let n = l.order();
    for x in 0..n {
        let xx = l.mul(x, x);
        for y in 0..n {
            let xy = l.mul(x, y);
            for z in 0..n {
                if l.mul(xx, l.mul(y, z)) != l.mul(xy, l.mul(x, z)) {
                    return Some(AxiomFailure { property: "moufang", tuple: vec![x, y, z] });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(m: usize) -> LoopTable {
        LoopTable::from_fn(None, m, |a, b| (a + b) % m).unwrap()
    }

    #[test]
    fn cyclic_arithmetic() {
        let z3 = cyclic(3);
        assert_eq!(z3.mul(1, 2), 0);
        let z9 = cyclic(9);
        assert_eq!(z9.inv(4), 5);
        assert_eq!(z9.inv(0), 0);
        assert_eq!(z9.pow(2, 3), 6);
        assert_eq!(z9.pow(2, -1), 7);
        assert_eq!(z9.pow(5, 0), 0);
        assert_eq!(z9.element_order(3), 3);
        assert_eq!(z9.element_order(0), 1);
        assert_eq!(z9.exponent(), 9);
        assert_eq!(cyclic(3).exponent(), 3);
    }

    #[test]
    fn checked_access_rejects_out_of_range() {
        let z5 = cyclic(5);
        assert!(matches!(z5.try_mul(5, 0), Err(Error::Input(_))));
        assert!(matches!(z5.try_inv(7), Err(Error::Input(_))));
        assert_eq!(z5.try_mul(2, 4).unwrap(), 1);
    }

    #[test]
    fn malformed_tables_are_input_errors() {
        assert!(matches!(LoopTable::from_rows(None, &[]), Err(Error::Input(_))));
        assert!(matches!(LoopTable::from_rows(None, &[vec![0, 1], vec![1]]), Err(Error::Input(_))));
        assert!(matches!(LoopTable::from_rows(None, &[vec![0, 2], vec![1, 0]]), Err(Error::Input(_))));
    }

    #[test]
    fn abelian_groups_verify() {
        for m in 1..12 {
            let r = verify_cml(&cyclic(m));
            assert!(r.is_cml(), "cyclic({m}): {r:?}");
            assert!(r.first_failure.is_none());
        }
    }

    #[test]
    fn swapped_entries_break_latin_property() {
        let mut rows = cyclic(5).rows();
        rows[1].swap(2, 3);
        let t = LoopTable::from_rows(None, &rows).unwrap();
        let r = verify_cml(&t);
        assert!(!r.latin_square);
        assert!(!r.commutative);
        let f = r.first_failure.unwrap();
        assert_eq!(f.property, "latin_square:column");
    }

    #[test]
    fn noncommutative_group_fails_commutativity() {
        // S3 as permutations of {0,1,2}, identity first.
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let t = LoopTable::from_fn(None, 6, |a, b| {
            let (p, q) = (perms[a], perms[b]);
            idx([p[q[0]], p[q[1]], p[q[2]]])
        })
        .unwrap();
        let r = verify_cml(&t);
        assert!(r.latin_square && r.identity_ok);
        assert!(!r.commutative);
        assert_eq!(r.first_failure.unwrap().property, "commutative");
    }

    #[test]
    fn identity_elsewhere_is_reported() {
        // Z3 relabelled so that element 2 is the identity.
        let t = LoopTable::from_rows(None, &[vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(t.find_identity(), Some(2));
        assert!(!verify_cml(&t).identity_ok);
    }

    #[test]
    fn restrict_relabels_subgroup() {
        let z9 = cyclic(9);
        let (sub, map) = z9.restrict(&SubloopMask::from_indices(9, [0, 3, 6])).unwrap();
        assert_eq!(map, vec![0, 3, 6]);
        assert_eq!(sub.rows(), cyclic(3).rows());
        assert!(z9.restrict(&SubloopMask::from_indices(9, [0, 3])).is_err());
    }
}
