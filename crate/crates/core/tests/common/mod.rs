//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub fn choose(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// Natural log of an arbitrarily large integer, accurate to f64 precision.
pub fn ln(x: &BigUint) -> f64 {
    let shift = x.bits().saturating_sub(64);
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln P(X >= k)` from exact integer sums. When the tail is above one half it
/// is evaluated through the exact complement so values near zero keep their
/// relative precision.
pub fn exact_ln_tail(k: usize, n_i: usize, n_j: usize, total: usize) -> f64 {
    let den = choose(total, n_j);
    let mut num = BigUint::zero();
    for x in k..=n_i.min(n_j) {
        num += choose(n_i, x) * choose(total - n_i, n_j - x);
    }
    if &num * 2u32 >= den {
        let gap = &den - &num;
        if gap.is_zero() {
            return 0.0;
        }
        (-(ln(&gap) - ln(&den)).exp()).ln_1p()
    } else {
        ln(&num) - ln(&den)
    }
}

pub fn feasible(k: usize, n_i: usize, n_j: usize, total: usize) -> bool {
    k <= n_i.min(n_j) && n_j - k <= total - n_i
}

/// Repeatedly merges the two clusters with the smallest minimum cross-pair
/// dissimilarity. Returns the merge heights and the flat clusters reached
/// after every merge.
pub fn naive_single_linkage(n: usize, d: &dyn Fn(usize, usize) -> f64) -> Vec<(f64, Vec<Vec<usize>>)> {
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut steps = Vec::new();
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut link = f64::INFINITY;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        link = link.min(d(i, j));
                    }
                }
                if link < best.0 {
                    best = (link, a, b);
                }
            }
        }
        let (h, a, b) = best;
        let moved = clusters.remove(b);
        clusters[a].extend(moved);
        steps.push((h, canonical(&clusters)));
    }
    steps
}

pub fn canonical(clusters: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut c: Vec<Vec<usize>> = clusters
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    c.sort();
    c
}

/// ARI from the four pair counts over all unordered node pairs.
pub fn ari_by_pairs(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut neither) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let pairs = both + only_a + only_b + neither;
    let expected = (both + only_a) * (both + only_b) / pairs;
    let max = ((both + only_a) + (both + only_b)) / 2.0;
    if max == expected {
        return 1.0;
    }
    (both - expected) / (max - expected)
}
