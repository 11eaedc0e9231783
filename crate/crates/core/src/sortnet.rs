//! Input-invariant comparator networks.
//!
//! A [`ComparatorNetwork`] is an ordered list of parallel stages of disjoint
//! compare-and-swap lane pairs. Applying one performs the identical operation
//! sequence regardless of data values, which is what makes it realizable as a
//! constant-latency circuit. Comparator count stands in for area, stage count
//! for delay.
//!
//! Construction uses tabulated networks for 16 lanes or fewer and Batcher's
//! odd-even merge-sort above that. Non-power-of-two sizes are built at the
//! next power of two and pruned: with the phantom lanes at the top holding
//! +inf, every comparator touching one is a no-op, so dropping them preserves
//! correctness.

use std::error::Error;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::tables;

/// Sort order requested from [`ComparatorNetwork::apply`]. Descending is
/// realized by reversing comparator orientation, not by negating values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkError {
    /// `build_optimal` only covers 1..=16 lanes.
    UnsupportedSize { n: usize },
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::UnsupportedSize { n } => {
                write!(f, "no tabulated network for n = {n} (supported: 1..=16)")
            }
        }
    }
}

impl Error for NetworkError {}

/// A staged comparator network on `n` lanes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparatorNetwork {
    n: usize,
    stages: Vec<Vec<(usize, usize)>>,
}

impl ComparatorNetwork {
    /// Builds from explicit stages, validating lane bounds, `i < j`, and
    /// within-stage disjointness.
    pub fn from_stages(n: usize, stages: Vec<Vec<(usize, usize)>>) -> Self {
        for stage in &stages {
            let mut used = vec![false; n];
            for &(i, j) in stage {
                assert!(i < j && j < n, "bad comparator ({i},{j}) for n={n}");
                assert!(!used[i] && !used[j], "lane reused within a stage");
                used[i] = true;
                used[j] = true;
            }
        }
        ComparatorNetwork { n, stages }
    }

    /// Builds from a flat comparator sequence, packing each comparator into
    /// the earliest stage allowed by its lane dependencies.
    pub fn from_sequence(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut lane_level = vec![0usize; n];
        let mut stages: Vec<Vec<(usize, usize)>> = Vec::new();
        for &(i, j) in pairs {
            assert!(i < j && j < n, "bad comparator ({i},{j}) for n={n}");
            let level = lane_level[i].max(lane_level[j]);
            if level == stages.len() {
                stages.push(Vec::new());
            }
            stages[level].push((i, j));
            lane_level[i] = level + 1;
            lane_level[j] = level + 1;
        }
        ComparatorNetwork { n, stages }
    }

    /// Tabulated network for `n <= 16` lanes.
    pub fn optimal(n: usize) -> Result<Self, NetworkError> {
        let from_static = |stages: &[tables::Stage]| {
            ComparatorNetwork::from_stages(n, stages.iter().map(|s| s.to_vec()).collect())
        };
        let net = match n {
            1 => ComparatorNetwork {
                n: 1,
                stages: Vec::new(),
            },
            2 => from_static(tables::OPT_STAGES_2),
            3 => from_static(tables::OPT_STAGES_3),
            4 => from_static(tables::OPT_STAGES_4),
            5 => from_static(tables::OPT_STAGES_5),
            6 => from_static(tables::OPT_STAGES_6),
            7 => from_static(tables::OPT_STAGES_7),
            8 => from_static(tables::OPT_STAGES_8),
            // The pruned pure construction is one stage shallower than the
            // pruned 16-lane table here.
            9 => ComparatorNetwork::batcher_pure(16).pruned_to(9),
            10..=15 => ComparatorNetwork::from_sequence(16, tables::OPT_SEQ_16).pruned_to(n),
            16 => ComparatorNetwork::from_sequence(16, tables::OPT_SEQ_16),
            _ => return Err(NetworkError::UnsupportedSize { n }),
        };
        Ok(net)
    }

    /// Sorting network for any `n >= 1`: tabulated up to 16 lanes, Batcher's
    /// odd-even merge-sort (pruned from the next power of two) above.
    pub fn batcher(n: usize) -> Self {
        assert!(n >= 1);
        if n <= 16 {
            return ComparatorNetwork::optimal(n).expect("n <= 16 is tabulated");
        }
        Self::batcher_padded(n, true)
    }

    /// Pure Batcher construction that bypasses the tabulated networks
    /// entirely; mainly useful for cross-checking counts.
    pub fn batcher_pure(n: usize) -> Self {
        assert!(n >= 1);
        Self::batcher_padded(n, false)
    }

    fn batcher_padded(n: usize, optimal_base: bool) -> Self {
        let padded = n.next_power_of_two();
        let mut seq = Vec::new();
        batcher_sort_rec(0, padded, optimal_base, &mut seq);
        let net = ComparatorNetwork::from_sequence(padded, &seq);
        if padded == n {
            net
        } else {
            net.pruned_to(n)
        }
    }

    /// Restriction to the first `keep` lanes: comparators touching dropped
    /// lanes are removed (they are no-ops against +inf padding) and the rest
    /// re-packed into minimal stages.
    pub fn pruned_to(&self, keep: usize) -> Self {
        assert!(keep >= 1 && keep <= self.n);
        let seq: Vec<(usize, usize)> = self.comparators().filter(|&(_, j)| j < keep).collect();
        ComparatorNetwork::from_sequence(keep, &seq)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stages(&self) -> &[Vec<(usize, usize)>] {
        &self.stages
    }

    /// Flat comparator sequence in execution order.
    pub fn comparators(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.stages.iter().flatten().copied()
    }

    /// Comparator count: the area proxy.
    pub fn size(&self) -> usize {
        self.stages.iter().map(Vec::len).sum()
    }

    /// Stage count: the delay proxy.
    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// `(size, depth)` in one call.
    pub fn metrics(&self) -> (usize, usize) {
        (self.size(), self.depth())
    }

    /// Runs the network over a copy of `values`.
    ///
    /// # Panics
    ///
    /// Panics if `values.len() != self.n()`.
    pub fn apply<T: PartialOrd + Clone>(&self, values: &[T], direction: Direction) -> Vec<T> {
        assert_eq!(values.len(), self.n, "lane count mismatch");
        let mut out = values.to_vec();
        self.apply_in_place(&mut out, direction);
        out
    }

    /// In-place variant of [`ComparatorNetwork::apply`].
    pub fn apply_in_place<T: PartialOrd>(&self, values: &mut [T], direction: Direction) {
        assert_eq!(values.len(), self.n, "lane count mismatch");
        for stage in &self.stages {
            for &(i, j) in stage {
                let swap = match direction {
                    Direction::Ascending => values[i] > values[j],
                    Direction::Descending => values[i] < values[j],
                };
                if swap {
                    values.swap(i, j);
                }
            }
        }
    }

    /// JSON export: `{"n": .., "stages": [[[i,j], ..], ..]}`.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{{\"n\":{},\"stages\":[", self.n));
        for (si, stage) in self.stages.iter().enumerate() {
            if si > 0 {
                out.push(',');
            }
            out.push('[');
            for (ci, &(i, j)) in stage.iter().enumerate() {
                if ci > 0 {
                    out.push(',');
                }
                out.push_str(&format!("[{i},{j}]"));
            }
            out.push(']');
        }
        out.push_str("]}");
        out
    }
}

fn batcher_sort_rec(lo: usize, count: usize, optimal_base: bool, out: &mut Vec<(usize, usize)>) {
    debug_assert!(count.is_power_of_two());
    if count <= 1 {
        return;
    }
    if optimal_base && count == 16 {
        out.extend(tables::OPT_SEQ_16.iter().map(|&(i, j)| (lo + i, lo + j)));
        return;
    }
    let half = count / 2;
    batcher_sort_rec(lo, half, optimal_base, out);
    batcher_sort_rec(lo + half, half, optimal_base, out);
    batcher_merge(lo, count, 1, out);
}

fn batcher_merge(lo: usize, span: usize, stride: usize, out: &mut Vec<(usize, usize)>) {
    let step = stride * 2;
    if step < span {
        batcher_merge(lo, span, step, out);
        batcher_merge(lo + stride, span, step, out);
        let mut i = lo + stride;
        while i + stride < lo + span {
            out.push((i, i + stride));
            i += step;
        }
    } else {
        out.push((lo, lo + stride));
    }
}

/// Outcome of the zero-one certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroOneReport {
    /// True when all `2^n` binary patterns were checked; false means the
    /// randomized fallback ran.
    pub exhaustive: bool,
    /// Number of patterns checked.
    pub trials: u64,
    pub passed: bool,
}

/// Lane count above which [`verify_zero_one`] falls back to randomized
/// testing.
pub const ZERO_ONE_EXHAUSTIVE_LIMIT: usize = 24;

/// Certifies a network by the zero-one principle: it sorts every input iff it
/// sorts every binary input. Exhaustive up to [`ZERO_ONE_EXHAUSTIVE_LIMIT`]
/// lanes; above that, randomized binary trials (10^6 by default) with the
/// trial count reported.
pub fn verify_zero_one(net: &ComparatorNetwork) -> ZeroOneReport {
    if net.n() <= ZERO_ONE_EXHAUSTIVE_LIMIT {
        zero_one_exhaustive(net)
    } else {
        zero_one_randomized(net, 1_000_000, 0x5eed)
    }
}

/// Exhaustive zero-one check over all `2^n` binary patterns, evaluated 64
/// patterns at a time with bitwise compare-and-swap (`min = and`,
/// `max = or`).
pub fn zero_one_exhaustive(net: &ComparatorNetwork) -> ZeroOneReport {
    let n = net.n();
    assert!(
        n <= ZERO_ONE_EXHAUSTIVE_LIMIT,
        "exhaustive mode needs n <= 24"
    );
    let total: u64 = 1u64 << n;
    let comparators: Vec<(usize, usize)> = net.comparators().collect();
    let mut lanes = vec![0u64; n];

    let mut base = 0u64;
    while base < total {
        let batch = 64.min(total - base);
        for (i, lane) in lanes.iter_mut().enumerate() {
            let mut word = 0u64;
            for t in 0..batch {
                word |= (((base + t) >> i) & 1) << t;
            }
            *lane = word;
        }
        for &(i, j) in &comparators {
            let lo = lanes[i] & lanes[j];
            let hi = lanes[i] | lanes[j];
            lanes[i] = lo;
            lanes[j] = hi;
        }
        let mask = if batch == 64 {
            u64::MAX
        } else {
            (1u64 << batch) - 1
        };
        for w in 0..n.saturating_sub(1) {
            if lanes[w] & !lanes[w + 1] & mask != 0 {
                return ZeroOneReport {
                    exhaustive: true,
                    trials: base + batch,
                    passed: false,
                };
            }
        }
        base += batch;
    }

    ZeroOneReport {
        exhaustive: true,
        trials: total,
        passed: true,
    }
}

/// Randomized sorted-output checks on binary inputs, for networks too wide to
/// enumerate.
pub fn zero_one_randomized(net: &ComparatorNetwork, trials: u64, seed: u64) -> ZeroOneReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for t in 0..trials {
        let input: Vec<u8> = (0..net.n()).map(|_| rng.gen_range(0..=1u8)).collect();
        let out = net.apply(&input, Direction::Ascending);
        if out.windows(2).any(|w| w[0] > w[1]) {
            return ZeroOneReport {
                exhaustive: false,
                trials: t + 1,
                passed: false,
            };
        }
    }
    ZeroOneReport {
        exhaustive: false,
        trials,
        passed: true,
    }
}
