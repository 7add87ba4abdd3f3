//! One-sided Fisher's exact test between entity pairs.
//!
//! The dissimilarity of two entities is the probability of seeing at least
//! their observed number of shared features if each entity's features were a
//! uniformly random subset of the same size. That probability is the upper
//! tail of a hypergeometric distribution, which is exactly the one-sided
//! Fisher's exact test on the 2×2 table
//!
//! ```text
//!                 j has      j lacks
//!   i has         n_ij       n_i - n_ij
//!   i lacks       n_j - n_ij N - n_i - n_j + n_ij
//! ```
//!
//! Everything is evaluated in natural-log space and converted to `log10` at
//! the boundary, so p-values far below `1e-308` stay finite.

use std::f64::consts::LN_10;
use std::fmt::Write as _;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sorted_intersection_len, BipartiteGraph};

/// Relative size below which the remaining tail is dropped.
const TAIL_EPSILON: f64 = 1e-17;

/// `ln(k!)` for `k = 0..=max`, accumulated with compensated summation.
#[derive(Debug, Clone)]
pub struct LogFactorials {
    table: Vec<f64>,
}

impl LogFactorials {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(0.0);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for k in 1..=max {
            let y = (k as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            table.push(sum);
        }
        LogFactorials { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    #[inline]
    pub fn ln_factorial(&self, k: usize) -> f64 {
        self.table[k]
    }

    #[inline]
    pub fn ln_choose(&self, n: usize, k: usize) -> f64 {
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// A p-value held as its base-10 logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogPValue {
    log10_p: f64,
}

impl LogPValue {
    pub const ONE: LogPValue = LogPValue { log10_p: 0.0 };

    pub fn from_ln(ln_p: f64) -> Self {
        // `ln_p` can come out a hair above zero from rounding.
        LogPValue {
            log10_p: (ln_p / LN_10).min(0.0),
        }
    }

    pub fn log10_p(self) -> f64 {
        self.log10_p
    }

    pub fn ln_p(self) -> f64 {
        self.log10_p * LN_10
    }

    /// The p-value itself; underflows to 0 below about `1e-308`.
    pub fn p(self) -> f64 {
        10f64.powf(self.log10_p)
    }
}

/// Hypergeometric tail evaluator for a fixed number of features.
#[derive(Debug, Clone)]
pub struct Hypergeometric {
    total: usize,
    lf: LogFactorials,
}

impl Hypergeometric {
    pub fn new(total: usize) -> Self {
        Hypergeometric {
            total,
            lf: LogFactorials::new(total),
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    fn check(&self, k: usize, n_i: usize, n_j: usize) -> Result<()> {
        let n = self.total;
        let feasible = n_i <= n && n_j <= n && k <= n_i.min(n_j) && n_j - k <= n - n_i;
        if feasible {
            Ok(())
        } else {
            Err(Error::InfeasibleCounts {
                k,
                n_i,
                n_j,
                total: n,
            })
        }
    }

    /// `ln P(X = k)` where `X` counts tagged items among `n_j` draws without
    /// replacement from `total` items of which `n_i` are tagged.
    pub fn ln_pmf(&self, k: usize, n_i: usize, n_j: usize) -> Result<f64> {
        self.check(k, n_i, n_j)?;
        Ok(self.ln_pmf_unchecked(k, n_i, n_j))
    }

    #[inline]
    fn ln_pmf_unchecked(&self, k: usize, n_i: usize, n_j: usize) -> f64 {
        let lf = &self.lf;
        lf.ln_choose(n_i, k) + lf.ln_choose(self.total - n_i, n_j - k) - lf.ln_choose(self.total, n_j)
    }

    /// `P(X >= n_ij)`.
    pub fn upper_tail(&self, n_ij: usize, n_i: usize, n_j: usize) -> Result<LogPValue> {
        self.check(n_ij, n_i, n_j)?;
        Ok(LogPValue::from_ln(self.ln_upper_tail_unchecked(n_ij, n_i, n_j)))
    }

    /// Natural log of the upper tail, assuming feasible counts.
    ///
    /// Margins are put in a canonical order first so the result is exactly
    /// symmetric in `n_i` and `n_j`. Left of the mode the tail is close to
    /// one and is taken as `1 - P(X < n_ij)`; right of it the terms are summed
    /// directly. Either way consecutive terms come from the ratio recurrence,
    /// are accumulated relative to the largest one, and the sum stops once a
    /// geometric bound on what is left falls below `TAIL_EPSILON`.
    pub(crate) fn ln_upper_tail_unchecked(&self, n_ij: usize, n_i: usize, n_j: usize) -> f64 {
        let (n_i, n_j) = (n_i.min(n_j), n_i.max(n_j));
        let n = self.total;
        let lo = (n_i + n_j).saturating_sub(n);
        let hi = n_i;
        if n_ij <= lo {
            return 0.0;
        }
        // rest = n - n_i - n_j, possibly negative
        let rest = n as f64 - n_i as f64 - n_j as f64;
        let mode = ((n_i as u128 + 1) * (n_j as u128 + 1) / (n as u128 + 2)) as usize;
        if n_ij > mode {
            let lead = self.ln_pmf_unchecked(n_ij, n_i, n_j);
            let (mut sum, mut term) = (1.0f64, 1.0f64);
            for k in n_ij..hi {
                let kf = k as f64;
                let ratio = (n_i as f64 - kf) * (n_j as f64 - kf) / ((kf + 1.0) * (rest + kf + 1.0));
                term *= ratio;
                sum += term;
                if ratio < 1.0 && term * ratio < TAIL_EPSILON * sum * (1.0 - ratio) {
                    break;
                }
            }
            lead + sum.ln()
        } else {
            let lead = self.ln_pmf_unchecked(n_ij - 1, n_i, n_j);
            let (mut sum, mut term) = (1.0f64, 1.0f64);
            let mut k = n_ij - 1;
            while k > lo {
                let kf = k as f64;
                let ratio = kf * (rest + kf) / ((n_i as f64 - kf + 1.0) * (n_j as f64 - kf + 1.0));
                term *= ratio;
                sum += term;
                if ratio < 1.0 && term * ratio < TAIL_EPSILON * sum * (1.0 - ratio) {
                    break;
                }
                k -= 1;
            }
            let lower = (lead + sum.ln()).exp();
            (-lower).ln_1p()
        }
    }
}

/// `ln P(X = k)` for the hypergeometric distribution with `total` items,
/// `n_i` of them tagged, and `n_j` draws.
pub fn hypergeom_log_pmf(k: usize, n_i: usize, n_j: usize, total: usize) -> Result<f64> {
    if n_i > total || n_j > total {
        return Err(Error::InfeasibleCounts { k, n_i, n_j, total });
    }
    Hypergeometric::new(total).ln_pmf(k, n_i, n_j)
}

/// One-sided Fisher's exact test p-value: probability that two random
/// feature sets of sizes `n_i` and `n_j` out of `total` share at least `n_ij`.
pub fn fet_upper_tail(n_ij: usize, n_i: usize, n_j: usize, total: usize) -> Result<LogPValue> {
    if n_i > total || n_j > total {
        return Err(Error::InfeasibleCounts {
            k: n_ij,
            n_i,
            n_j,
            total,
        });
    }
    Hypergeometric::new(total).upper_tail(n_ij, n_i, n_j)
}

/// Strict upper triangle of a symmetric matrix, stored row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCondensed")]
pub struct CondensedDissimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCondensed {
    n: usize,
    values: Vec<f64>,
}

impl TryFrom<RawCondensed> for CondensedDissimilarityMatrix {
    type Error = Error;

    fn try_from(raw: RawCondensed) -> Result<Self> {
        Self::new(raw.n, raw.values)
    }
}

impl CondensedDissimilarityMatrix {
    /// Wraps `values`, which must have length `n(n-1)/2` and be finite.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewItems(n));
        }
        if values.len() != n * (n - 1) / 2 {
            return Err(Error::InvalidParameter(format!(
                "condensed matrix of {n} items needs {} values, got {}",
                n * (n - 1) / 2,
                values.len()
            )));
        }
        let m = CondensedDissimilarityMatrix { n, values };
        if let Some(k) = m.values.iter().position(|v| !v.is_finite()) {
            let (i, j) = m.pair_of(k);
            return Err(Error::NonFinite(i, j));
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    fn row_offset(n: usize, i: usize) -> usize {
        i * (2 * n - i - 1) / 2
    }

    /// Position of pair `(i, j)`, `i != j`, in the condensed vector.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        Self::row_offset(self.n, i) + (j - i - 1)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.index(i, j)]
    }

    fn pair_of(&self, mut k: usize) -> (usize, usize) {
        for i in 0..self.n {
            let width = self.n - i - 1;
            if k < width {
                return (i, i + 1 + k);
            }
            k -= width;
        }
        unreachable!("index past the end of the condensed matrix")
    }

    /// `i_label<TAB>j_label<TAB>log10_p` for every pair.
    pub fn to_tsv(&self, labels: &[String]) -> String {
        let mut out = String::from("i\tj\tlog10_p\n");
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let _ = writeln!(out, "{}\t{}\t{}", labels[i], labels[j], self.values[k]);
                k += 1;
            }
        }
        out
    }
}

/// Knobs for [`dissimilarity_matrix_with`].
#[derive(Debug, Clone, Copy)]
pub struct DissimilarityOptions {
    /// Cache tails by `(n_i, n_j, n_ij)`; the feature count is fixed per graph.
    pub memoize: bool,
}

impl Default for DissimilarityOptions {
    fn default() -> Self {
        DissimilarityOptions { memoize: true }
    }
}

/// Feature sets in whichever layout makes intersections cheaper.
enum RowSets<'a> {
    Sorted(&'a [Vec<usize>]),
    Bits {
        words: usize,
        data: Vec<u64>,
        hw_popcnt: bool,
    },
}

#[inline(always)]
fn and_popcount(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn and_popcount_hw(a: &[u64], b: &[u64]) -> usize {
    and_popcount(a, b)
}

fn has_hw_popcnt() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("popcnt")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

impl<'a> RowSets<'a> {
    fn new(g: &'a BipartiteGraph) -> Self {
        let words = g.num_features().div_ceil(64);
        let ne = g.num_entities().max(1);
        let mean_degree = g.num_edges() / ne;
        if words > 2 * mean_degree.max(1) || words.saturating_mul(ne) > 1 << 28 {
            return RowSets::Sorted(g.rows());
        }
        let mut data = vec![0u64; words * g.num_entities()];
        for (i, row) in g.rows().iter().enumerate() {
            for &f in row {
                data[i * words + f / 64] |= 1 << (f % 64);
            }
        }
        RowSets::Bits {
            words,
            data,
            hw_popcnt: has_hw_popcnt(),
        }
    }

    #[inline]
    fn intersection(&self, i: usize, j: usize) -> usize {
        match self {
            RowSets::Sorted(rows) => sorted_intersection_len(&rows[i], &rows[j]),
            RowSets::Bits {
                words,
                data,
                hw_popcnt,
            } => {
                let a = &data[i * words..(i + 1) * words];
                let b = &data[j * words..(j + 1) * words];
                #[cfg(target_arch = "x86_64")]
                if *hw_popcnt {
                    // SAFETY: the popcnt feature was detected at runtime.
                    return unsafe { and_popcount_hw(a, b) };
                }
                let _ = hw_popcnt;
                and_popcount(a, b)
            }
        }
    }
}

const ROW_BLOCK: usize = 16;

/// Pairwise `log10` p-values of all entities, with memoization on.
pub fn dissimilarity_matrix(g: &BipartiteGraph) -> Result<CondensedDissimilarityMatrix> {
    dissimilarity_matrix_with(g, DissimilarityOptions::default())
}

/// Pairwise `log10` p-values of all entities.
///
/// Blocks of rows are filled in parallel on the current rayon pool. Each
/// block owns a disjoint slice of the output and every entry is a pure
/// function of its pair, so the bytes do not depend on scheduling.
pub fn dissimilarity_matrix_with(
    g: &BipartiteGraph,
    opts: DissimilarityOptions,
) -> Result<CondensedDissimilarityMatrix> {
    let n = g.num_entities();
    if n < 2 {
        return Err(Error::TooFewItems(n));
    }
    let hyper = Hypergeometric::new(g.num_features());
    let sets = RowSets::new(g);
    let degrees: Vec<usize> = g.rows().iter().map(Vec::len).collect();

    let mut values = vec![0.0f64; n * (n - 1) / 2];
    // Rows are handed out in blocks whose outputs are contiguous; inside a
    // block each partner row is loaded once and intersected with every row of
    // the block while it is still in cache.
    let mut blocks = Vec::with_capacity(n.div_ceil(ROW_BLOCK));
    let mut rest = values.as_mut_slice();
    for i0 in (0..n - 1).step_by(ROW_BLOCK) {
        let i1 = (i0 + ROW_BLOCK).min(n - 1);
        let len: usize = (i0..i1).map(|i| n - i - 1).sum();
        let (head, tail) = rest.split_at_mut(len);
        blocks.push((i0, i1, head));
        rest = tail;
    }

    let log10_tail = |n_ij: usize, a: usize, b: usize| {
        LogPValue::from_ln(hyper.ln_upper_tail_unchecked(n_ij, a, b)).log10_p()
    };
    blocks.into_par_iter().for_each_init(
        FxHashMap::<(u32, u32, u32), f64>::default,
        |memo, (i0, i1, out)| {
            let mut rows: Vec<&mut [f64]> = Vec::with_capacity(i1 - i0);
            let mut rest = out;
            for i in i0..i1 {
                let (head, tail) = rest.split_at_mut(n - i - 1);
                rows.push(head);
                rest = tail;
            }
            for j in i0 + 1..n {
                for i in i0..i1.min(j) {
                    let n_ij = sets.intersection(i, j);
                    let (a, b) = (degrees[i].min(degrees[j]), degrees[i].max(degrees[j]));
                    rows[i - i0][j - i - 1] = if n_ij == 0 {
                        0.0
                    } else if opts.memoize {
                        *memo
                            .entry((a as u32, b as u32, n_ij as u32))
                            .or_insert_with(|| log10_tail(n_ij, a, b))
                    } else {
                        log10_tail(n_ij, a, b)
                    };
                }
            }
        },
    );
    CondensedDissimilarityMatrix::new(n, values)
}
