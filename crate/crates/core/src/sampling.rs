//! Exhaustive or deterministic stride-sampled scans over tuple and subset spaces.
//!
//! Sampled scans visit every `stride`-th point of the space in its natural
//! (lexicographic) numbering. The stride is bumped until it is coprime to the
//! base so that no coordinate is pinned to a single residue.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::limits::Limits;
use crate::table::gcd;

/// How much of a search space a scan actually visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub checked: u64,
    pub total: u64,
    pub exhaustive: bool,
}

impl Coverage {
    pub fn exhaustive(total: u64) -> Self {
        Coverage { checked: total, total, exhaustive: true }
    }

    /// Sums two coverages; the result is exhaustive only if both are.
    pub fn combine(self, other: Coverage) -> Coverage {
        Coverage {
            checked: self.checked + other.checked,
            total: self.total + other.total,
            exhaustive: self.exhaustive && other.exhaustive,
        }
    }
}

fn sample_stride(total: u64, base: u64, budget: u64) -> u64 {
    let mut stride = total.div_ceil(budget.max(1)).max(1);
    if stride > 1 {
        while gcd(stride as usize, base as usize) != 1 {
            stride += 1;
        }
    }
    stride
}

/// Visits `A`-tuples over `0..n`: every tuple when `n` is within the
/// exhaustive bound (or the space fits the sample budget), otherwise a
/// stride sample of about `limits.sample_budget` tuples.
///
/// Stops early when `f` breaks; the returned coverage counts tuples visited.
pub fn for_each_tuple<const A: usize>(
    n: usize,
    limits: &Limits,
    mut f: impl FnMut([usize; A]) -> ControlFlow<()>,
) -> Coverage {
    let total = (n as u64).saturating_pow(A as u32);
    let exhaustive = n <= limits.exhaustive_bound || total <= limits.sample_budget;
    let mut checked = 0u64;
    if exhaustive {
        let mut t = [0usize; A];
        loop {
            checked += 1;
            if f(t).is_break() {
                break;
            }
            // odometer, last coordinate fastest
            let mut pos = A;
            loop {
                if pos == 0 {
                    return Coverage { checked, total, exhaustive: true };
                }
                pos -= 1;
                t[pos] += 1;
                if t[pos] < n {
                    break;
                }
                t[pos] = 0;
            }
        }
        Coverage { checked, total, exhaustive: checked == total }
    } else {
        let stride = sample_stride(total, n as u64, limits.sample_budget);
        let mut idx = 0u64;
        while idx < total {
            let mut rest = idx;
            let mut t = [0usize; A];
            for slot in t.iter_mut().rev() {
                *slot = (rest % n as u64) as usize;
                rest /= n as u64;
            }
            checked += 1;
            if f(t).is_break() {
                break;
            }
            idx += stride;
        }
        Coverage { checked, total, exhaustive: false }
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
pub fn unrank_subset(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for remaining in (1..=k).rev() {
        let mut x = next;
        loop {
            // subsets whose next element is x
            let block = binomial((n - x - 1) as u64, (remaining - 1) as u64);
            if rank < block {
                break;
            }
            rank -= block;
            x += 1;
        }
        out.push(x);
        next = x + 1;
    }
    out
}

/// Visits `k`-subsets of `0..n` in lexicographic order, exhaustively when
/// `n` is within the exhaustive bound or the count fits the sample budget,
/// otherwise by stride sampling over subset ranks.
pub fn for_each_subset(
    n: usize,
    k: usize,
    limits: &Limits,
    mut f: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Coverage {
    let total = binomial(n as u64, k as u64);
    if total == 0 {
        return Coverage::exhaustive(0);
    }
    let exhaustive = n <= limits.exhaustive_bound || total <= limits.sample_budget;
    let mut checked = 0u64;
    if exhaustive {
        let mut s: Vec<usize> = (0..k).collect();
        loop {
            checked += 1;
            if f(&s).is_break() {
                return Coverage { checked, total, exhaustive: false };
            }
            let Some(i) = (0..k).rev().find(|&i| s[i] < n - k + i) else {
                break;
            };
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
        }
        Coverage { checked, total, exhaustive: true }
    } else {
        let stride = sample_stride(total, n as u64, limits.sample_budget);
        let mut rank = 0u64;
        while rank < total {
            checked += 1;
            if f(&unrank_subset(n, k, rank)).is_break() {
                break;
            }
            rank += stride;
        }
        Coverage { checked, total, exhaustive: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn exhaustive_tuple_scan_visits_everything_once() {
        let mut seen = BTreeSet::new();
        let cov = for_each_tuple::<3>(4, &Limits::default(), |t| {
            assert!(seen.insert(t));
            ControlFlow::Continue(())
        });
        assert_eq!(seen.len(), 64);
        assert_eq!(cov, Coverage::exhaustive(64));
    }

    #[test]
    fn sampled_tuple_scan_respects_budget_and_spreads() {
        let limits = Limits { exhaustive_bound: 10, sample_budget: 1000, ..Limits::default() };
        let mut last = [0usize; 4];
        let mut last_coords = BTreeSet::new();
        let cov = for_each_tuple::<4>(30, &limits, |t| {
            last = t;
            last_coords.insert(t[3]);
            ControlFlow::Continue(())
        });
        assert!(!cov.exhaustive);
        assert_eq!(cov.total, 810_000);
        assert!(cov.checked >= 900 && cov.checked <= 1000, "{cov:?}");
        assert_eq!(last_coords.len(), 30);
    }

    #[test]
    fn early_break_is_reported() {
        let cov = for_each_tuple::<2>(5, &Limits::default(), |t| {
            if t == [1, 1] {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        assert_eq!(cov.checked, 7);
        assert!(!cov.exhaustive);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(81, 3), 85_320);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(243, 3), 2_362_041);
    }

    #[test]
    fn unranking_matches_lexicographic_enumeration() {
        let mut all = Vec::new();
        for_each_subset(7, 3, &Limits::default(), |s| {
            all.push(s.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(all.len(), 35);
        for (rank, s) in all.iter().enumerate() {
            assert_eq!(&unrank_subset(7, 3, rank as u64), s);
        }
    }
}
