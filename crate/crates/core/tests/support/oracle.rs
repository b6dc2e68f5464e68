//! Naive reference computations over raw multiplication rows.
//!
//! Nothing here touches the library's division tables, bitsets or caches;
//! everything is set-based fixed-point iteration or direct search.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Rows = Vec<Vec<usize>>;

pub fn closure(rows: &Rows, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = gens.iter().copied().collect();
    set.insert(0);
    loop {
        let mut next = set.clone();
        for &a in &set {
            for &b in &set {
                next.insert(rows[a][b]);
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

pub fn is_closed(rows: &Rows, s: &BTreeSet<usize>) -> bool {
    s.contains(&0) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&rows[a][b])))
}

/// All subgroups of a small group: every subset for order ≤ 16, otherwise
/// every subgroup generated by at most three elements.
pub fn subgroups(rows: &Rows) -> BTreeSet<BTreeSet<usize>> {
    let n = rows.len();
    let mut out = BTreeSet::new();
    if n <= 16 {
        for bits in 0u32..(1 << n) {
            if bits & 1 == 0 {
                continue;
            }
            let s: BTreeSet<usize> = (0..n).filter(|i| bits >> i & 1 == 1).collect();
            if is_closed(rows, &s) {
                out.insert(s);
            }
        }
    } else {
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    out.insert(closure(rows, &[a, b, c]));
                }
            }
        }
    }
    out
}

/// `t` with `(a·bc)·t = ab·c`, by linear search.
pub fn associator(rows: &Rows, a: usize, b: usize, c: usize) -> usize {
    let left = rows[a][rows[b][c]];
    let right = rows[rows[a][b]][c];
    (0..rows.len()).find(|&t| rows[left][t] == right).expect("not a quasigroup")
}

pub fn centre(rows: &Rows) -> BTreeSet<usize> {
    let n = rows.len();
    (0..n).filter(|&x| (0..n).all(|y| (0..n).all(|z| rows[rows[x][y]][z] == rows[x][rows[y][z]]))).collect()
}

pub fn power(rows: &Rows, a: usize, k: usize) -> usize {
    (0..k).fold(0, |acc, _| rows[acc][a])
}

/// Upper central term by the associator criterion: `{x : (x,y,z) ∈ prev ∀ y,z}`.
pub fn next_upper_term(rows: &Rows, prev: &BTreeSet<usize>) -> BTreeSet<usize> {
    let n = rows.len();
    (0..n).filter(|&x| (0..n).all(|y| (0..n).all(|z| prev.contains(&associator(rows, x, y, z))))).collect()
}

/// The order-81 loop, straight from its coordinate formula.
pub fn cml81_formula(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    let t = (a[2] - b[2]) * (a[0] * b[1] - a[1] * b[0]);
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3] + t].map(|v| v.rem_euclid(3))
}

pub fn enc(c: [i64; 4]) -> usize {
    (27 * c[0] + 9 * c[1] + 3 * c[2] + c[3]) as usize
}

pub fn dec(i: usize) -> [i64; 4] {
    let i = i as i64;
    [i / 27 % 3, i / 9 % 3, i / 3 % 3, i % 3]
}
