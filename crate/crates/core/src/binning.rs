//! Partitioning the conditioning variable into contiguous bins.
//!
//! Bins come from Ward clustering of the one-dimensional values into
//! `k = ceil(sqrt(N))` clusters. Optimal 1-D Ward clusters are intervals of
//! the sorted values, so the exact route is a dynamic program over
//! contiguous partitions of the distinct values (weighted by multiplicity,
//! so tied values never straddle a bin edge). The program uses the
//! divide-and-conquer split-point search, which is valid because the
//! within-cluster sum of squares satisfies the quadrangle inequality; a
//! minimum cluster size keeps that property (an infeasible interval costs
//! infinity and every interval containing it is infeasible too).
//!
//! For very large inputs the backtracking table would not fit comfortably
//! in memory, and [`BinningMethod::GreedyWard`] (bottom-up merging of
//! adjacent clusters) is used instead.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stats;

/// Table cells above which exact Ward falls back to greedy merging.
const EXACT_TABLE_LIMIT: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinningMethod {
    /// Globally optimal contiguous partition (minimum within-bin sum of squares).
    #[default]
    ExactWard,
    /// Agglomerative merging of adjacent clusters by smallest Ward cost.
    GreedyWard,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinningOptions {
    pub method: BinningMethod,
    /// Minimum number of observations per bin. `1` imposes no constraint.
    pub min_bin_size: usize,
    /// Overrides the `ceil(sqrt(N))` bin count when set.
    pub bins: Option<usize>,
}

impl Default for BinningOptions {
    fn default() -> Self {
        Self {
            method: BinningMethod::ExactWard,
            min_bin_size: 1,
            bins: None,
        }
    }
}

/// Ordered bin edges over `x` plus the bin index of every observation.
///
/// Bins are half-open `[edges[i], edges[i + 1])` except the last, which is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct BinPartition<T> {
    edges: Vec<T>,
    assignments: Vec<usize>,
    counts: Vec<usize>,
}

impl<T: Scalar> BinPartition<T> {
    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    /// `(lo, hi)` of bin `bin`.
    pub fn bounds(&self, bin: usize) -> (T, T) {
        (self.edges[bin], self.edges[bin + 1])
    }

    /// Values of `y` whose observation falls in `bin`, in input order.
    pub fn select<V: Copy>(&self, bin: usize, y: &[V]) -> Result<Vec<V>> {
        if y.len() != self.assignments.len() {
            return Err(Error::LengthMismatch {
                left: self.assignments.len(),
                right: y.len(),
            });
        }
        Ok(self
            .assignments
            .iter()
            .zip(y)
            .filter(|(&a, _)| a == bin)
            .map(|(_, &v)| v)
            .collect())
    }

    /// Groups `y` by bin in a single pass.
    pub fn group<V: Copy>(&self, y: &[V]) -> Result<Vec<Vec<V>>> {
        if y.len() != self.assignments.len() {
            return Err(Error::LengthMismatch {
                left: self.assignments.len(),
                right: y.len(),
            });
        }
        let mut groups: Vec<Vec<V>> = self.counts.iter().map(|&c| Vec::with_capacity(c)).collect();
        for (&a, &v) in self.assignments.iter().zip(y) {
            groups[a].push(v);
        }
        Ok(groups)
    }
}

/// Values of `y` whose paired `x` lies in `[lo, hi)`.
pub fn filter<T: Scalar, V: Copy>(x: &[T], y: &[V], lo: T, hi: T) -> Result<Vec<V>> {
    filter_by(x, y, |v| lo <= v && v < hi)
}

/// Values of `y` whose paired `x` lies in `[lo, hi]` (the last bin).
pub fn filter_closed<T: Scalar, V: Copy>(x: &[T], y: &[V], lo: T, hi: T) -> Result<Vec<V>> {
    filter_by(x, y, |v| lo <= v && v <= hi)
}

fn filter_by<T: Scalar, V: Copy>(x: &[T], y: &[V], keep: impl Fn(T) -> bool) -> Result<Vec<V>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y).filter(|(&a, _)| keep(a)).map(|(_, &b)| b).collect())
}

/// Default bin count, `ceil(sqrt(n))`.
pub fn default_bin_count(n: usize) -> usize {
    ((n as f64).sqrt().ceil() as usize).max(1)
}

/// Exact Ward binning with `k = min(ceil(sqrt(N)), distinct values)` and no size constraint.
pub fn compute_bin_edges<T: Scalar>(x: &[T]) -> Result<BinPartition<T>> {
    compute_bin_edges_with(x, &BinningOptions::default())
}

pub fn compute_bin_edges_with<T: Scalar>(x: &[T], options: &BinningOptions) -> Result<BinPartition<T>> {
    stats::ensure_finite(x)?;
    let n = x.len();
    let order = {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite values"));
        order
    };

    // distinct values and multiplicities
    let mut values: Vec<T> = Vec::new();
    let mut weights: Vec<usize> = Vec::new();
    let mut distinct_of = vec![0usize; n];
    for &i in &order {
        if values.last() != Some(&x[i]) {
            values.push(x[i]);
            weights.push(0);
        }
        *weights.last_mut().expect("pushed above") += 1;
        distinct_of[i] = values.len() - 1;
    }
    let d = values.len();
    if d < 2 {
        return Err(Error::DegenerateConditioning);
    }

    let min_size = options.min_bin_size.clamp(1, n);
    let mut k = options.bins.unwrap_or_else(|| default_bin_count(n)).clamp(1, d);
    k = k.min((n / min_size).max(1));

    let centre = values[d / 2].as_f64();
    let centred: Vec<f64> = values.iter().map(|v| v.as_f64() - centre).collect();

    let use_exact = options.method == BinningMethod::ExactWard && k.saturating_mul(d + 1) <= EXACT_TABLE_LIMIT;
    let starts = if use_exact {
        exact_ward(&centred, &weights, k, min_size)
    } else {
        greedy_ward(&centred, &weights, k, min_size)
    };

    // starts[g] = first distinct index of group g
    let groups = starts.len();
    let mut group_of_distinct = vec![0usize; d];
    for g in 0..groups {
        let end = if g + 1 < groups { starts[g + 1] } else { d };
        for slot in &mut group_of_distinct[starts[g]..end] {
            *slot = g;
        }
    }

    let mut edges = Vec::with_capacity(groups + 1);
    edges.push(values[0]);
    for &start in &starts[1..] {
        let below = values[start - 1];
        let above = values[start];
        let mut mid = below + (above - below) / T::lit(2.0);
        if mid <= below {
            mid = above;
        }
        edges.push(mid);
    }
    let top = values[d - 1];
    let eps = T::epsilon() * T::lit(4.0) * T::one().max(top.abs());
    edges.push(top + eps);

    let assignments: Vec<usize> = distinct_of.iter().map(|&j| group_of_distinct[j]).collect();
    let mut counts = vec![0usize; groups];
    for &a in &assignments {
        counts[a] += 1;
    }
    assert!(counts.iter().all(|&c| c > 0), "bins are built from data and cannot be empty");

    Ok(BinPartition {
        edges,
        assignments,
        counts,
    })
}

/// Prefix sums for O(1) weighted sum-of-squares of any contiguous run.
struct Moments {
    w: Vec<f64>,
    s1: Vec<f64>,
    s2: Vec<f64>,
    counts: Vec<usize>,
}

impl Moments {
    fn new(values: &[f64], weights: &[usize]) -> Self {
        let d = values.len();
        let mut w = vec![0.0; d + 1];
        let mut s1 = vec![0.0; d + 1];
        let mut s2 = vec![0.0; d + 1];
        let mut counts = vec![0usize; d + 1];
        for i in 0..d {
            let c = weights[i] as f64;
            w[i + 1] = w[i] + c;
            s1[i + 1] = s1[i] + c * values[i];
            s2[i + 1] = s2[i] + c * values[i] * values[i];
            counts[i + 1] = counts[i] + weights[i];
        }
        Self { w, s1, s2, counts }
    }

    /// Sum of squares of distinct run `[i, j)`, or infinity below the size limit.
    fn cost(&self, i: usize, j: usize, min_size: usize) -> f64 {
        if self.counts[j] - self.counts[i] < min_size {
            return f64::INFINITY;
        }
        let w = self.w[j] - self.w[i];
        let s = self.s1[j] - self.s1[i];
        (self.s2[j] - self.s2[i] - s * s / w).max(0.0)
    }
}

/// Optimal contiguous partition into `k` groups; returns group start indices.
///
/// Drops to fewer groups when ties make `k` groups of `min_size` infeasible.
fn exact_ward(values: &[f64], weights: &[usize], k: usize, min_size: usize) -> Vec<usize> {
    let d = values.len();
    let m = Moments::new(values, weights);
    let mut k = k;
    loop {
        if let Some(starts) = exact_ward_k(&m, d, k, min_size) {
            return starts;
        }
        if k == 1 {
            // a single group is always admissible once the size limit is clamped to n
            return vec![0];
        }
        k -= 1;
    }
}

fn exact_ward_k(m: &Moments, d: usize, k: usize, min_size: usize) -> Option<Vec<usize>> {
    let mut prev = vec![f64::INFINITY; d + 1];
    prev[0] = 0.0;
    let mut split = vec![0u32; k * (d + 1)];
    for q in 1..=k {
        let mut cur = vec![f64::INFINITY; d + 1];
        let row = &mut split[(q - 1) * (d + 1)..q * (d + 1)];
        if q <= d {
            fill_layer(m, &prev, &mut cur, row, q, q, d, q - 1, d - 1, min_size);
        }
        prev = cur;
    }
    if !prev[d].is_finite() {
        return None;
    }
    let mut starts = vec![0usize; k];
    let mut j = d;
    for q in (1..=k).rev() {
        let i = split[(q - 1) * (d + 1) + j] as usize;
        starts[q - 1] = i;
        j = i;
    }
    Some(starts)
}

/// Divide-and-conquer layer fill: the optimal split of `j` is monotone in `j`.
#[allow(clippy::too_many_arguments)]
fn fill_layer(
    m: &Moments,
    prev: &[f64],
    cur: &mut [f64],
    split: &mut [u32],
    q: usize,
    j_lo: usize,
    j_hi: usize,
    opt_lo: usize,
    opt_hi: usize,
    min_size: usize,
) {
    if j_lo > j_hi {
        return;
    }
    let j = j_lo + (j_hi - j_lo) / 2;
    let lo = opt_lo.max(q - 1);
    let hi = opt_hi.min(j - 1);
    let mut best = f64::INFINITY;
    let mut best_i = lo;
    for (i, &p) in prev.iter().enumerate().take(hi + 1).skip(lo) {
        let v = p + m.cost(i, j, min_size);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    cur[j] = best;
    split[j] = best_i as u32;
    if j > j_lo {
        fill_layer(m, prev, cur, split, q, j_lo, j - 1, opt_lo, best_i, min_size);
    }
    fill_layer(m, prev, cur, split, q, j + 1, j_hi, best_i, opt_hi, min_size);
}

#[derive(PartialEq)]
struct Merge {
    cost: f64,
    left: usize,
    stamp: (u64, u64),
}

impl Eq for Merge {}

impl Ord for Merge {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost, then leftmost
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.left.cmp(&self.left))
    }
}

impl PartialOrd for Merge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Doubly linked list of adjacent clusters for greedy merging.
struct Chain {
    weight: Vec<f64>,
    count: Vec<usize>,
    mean: Vec<f64>,
    next: Vec<Option<usize>>,
    prev: Vec<Option<usize>>,
    version: Vec<u64>,
    alive: Vec<bool>,
}

impl Chain {
    fn ward(&self, a: usize, b: usize) -> f64 {
        let (wa, wb) = (self.weight[a], self.weight[b]);
        let diff = self.mean[a] - self.mean[b];
        wa * wb / (wa + wb) * diff * diff
    }

    fn candidate(&self, a: usize, b: usize) -> Merge {
        Merge {
            cost: self.ward(a, b),
            left: a,
            stamp: (self.version[a], self.version[b]),
        }
    }

    /// Merges `a` with its right neighbour and queues the new adjacent pairs.
    fn merge_right(&mut self, a: usize, heap: &mut BinaryHeap<Merge>) {
        let b = self.next[a].expect("right neighbour");
        let w = self.weight[a] + self.weight[b];
        self.mean[a] = (self.weight[a] * self.mean[a] + self.weight[b] * self.mean[b]) / w;
        self.weight[a] = w;
        self.count[a] += self.count[b];
        self.alive[b] = false;
        self.next[a] = self.next[b];
        if let Some(c) = self.next[b] {
            self.prev[c] = Some(a);
        }
        self.version[a] += 1;
        if let Some(p) = self.prev[a] {
            heap.push(self.candidate(p, a));
        }
        if let Some(c) = self.next[a] {
            heap.push(self.candidate(a, c));
        }
    }
}

/// Bottom-up Ward agglomeration restricted to adjacent clusters.
fn greedy_ward(values: &[f64], weights: &[usize], k: usize, min_size: usize) -> Vec<usize> {
    let d = values.len();
    let mut chain = Chain {
        weight: weights.iter().map(|&w| w as f64).collect(),
        count: weights.to_vec(),
        mean: values.to_vec(),
        next: (0..d).map(|i| if i + 1 < d { Some(i + 1) } else { None }).collect(),
        prev: (0..d).map(|i| i.checked_sub(1)).collect(),
        version: vec![0; d],
        alive: vec![true; d],
    };
    let mut clusters = d;
    let mut heap: BinaryHeap<Merge> = (0..d.saturating_sub(1)).map(|i| chain.candidate(i, i + 1)).collect();

    while clusters > k {
        let Some(top) = heap.pop() else { break };
        let a = top.left;
        if !chain.alive[a] {
            continue;
        }
        let Some(b) = chain.next[a] else { continue };
        if top.stamp != (chain.version[a], chain.version[b]) {
            continue;
        }
        chain.merge_right(a, &mut heap);
        clusters -= 1;
    }

    // absorb undersized clusters into the cheaper neighbour
    loop {
        let mut head = Some(0usize);
        let mut small = None;
        while let Some(i) = head {
            if chain.count[i] < min_size {
                small = Some(i);
                break;
            }
            head = chain.next[i];
        }
        let Some(i) = small else { break };
        let left = chain.prev[i].map(|p| (p, chain.ward(p, i)));
        let right = chain.next[i].map(|c| chain.ward(i, c));
        match (left, right) {
            (Some((p, l)), Some(r)) if l <= r => chain.merge_right(p, &mut heap),
            (Some((p, _)), None) => chain.merge_right(p, &mut heap),
            (_, Some(_)) => chain.merge_right(i, &mut heap),
            (None, None) => break,
        }
    }

    let mut starts = Vec::new();
    let mut head = Some(0usize);
    while let Some(i) = head {
        starts.push(i);
        head = chain.next[i];
    }
    starts
}
