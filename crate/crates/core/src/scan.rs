//! Circuit-shaped parallel primitives: the Ladner-Fischer prefix scan, the
//! one-hot argmin tree, and the max-index prefix circuit.
//!
//! The scan network reaches the minimum possible depth of ceil(log2 n)
//! combine stages while keeping the node count linear (under 4n). The same
//! generic network serves the running sums of the simplex projection and,
//! with a logical combine, the max-index selection — the two differ only in
//! the operator.

/// One-hot indicator: at most one set bit (exactly one for argmin output,
/// possibly none for [`max_index`] of an all-zero input).
pub type OneHot = Vec<bool>;

/// A staged prefix-combine DAG over `n` wires.
///
/// Each level holds `(src, dst)` nodes meaning `wire[dst] = wire[src] ∘
/// wire[dst]`, where `src`'s running value covers the segment immediately
/// before `dst`'s. Levels commit all writes at once, so the node placement is
/// data-independent by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanNetwork {
    n: usize,
    levels: Vec<Vec<(usize, usize)>>,
}

impl ScanNetwork {
    /// Builds the Ladner-Fischer network for `n` wires.
    pub fn build(n: usize) -> Self {
        assert!(n >= 1);
        let wires: Vec<usize> = (0..n).collect();
        let mut ops = Vec::new();
        emit_prefix(&wires, 0, &mut ops);
        Self::levelize(n, &ops)
    }

    /// Packs an op sequence into the earliest levels consistent with
    /// commit-at-end-of-level semantics.
    fn levelize(n: usize, ops: &[(usize, usize)]) -> Self {
        // ready[w]: first level allowed to read w's latest value.
        // last_read[w]: latest level that read w (a rewrite may share it).
        let mut ready = vec![0usize; n];
        let mut last_read = vec![0usize; n];
        let mut levels: Vec<Vec<(usize, usize)>> = Vec::new();
        for &(src, dst) in ops {
            debug_assert!(src < dst && dst < n);
            let level = ready[src].max(ready[dst]).max(last_read[dst]);
            if level == levels.len() {
                levels.push(Vec::new());
            }
            levels[level].push((src, dst));
            last_read[src] = last_read[src].max(level);
            ready[dst] = level + 1;
        }
        ScanNetwork { n, levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[Vec<(usize, usize)>] {
        &self.levels
    }

    /// Number of combine stages on the critical path.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Total combine-node count.
    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Runs the scan: output `i` is `v_0 ∘ v_1 ∘ … ∘ v_i` for the associative
    /// operator `op`.
    ///
    /// # Panics
    ///
    /// Panics if `values.len() != self.n()`.
    pub fn apply<T: Clone>(&self, values: &[T], mut op: impl FnMut(&T, &T) -> T) -> Vec<T> {
        assert_eq!(values.len(), self.n, "wire count mismatch");
        let mut state = values.to_vec();
        let mut pending: Vec<(usize, T)> = Vec::new();
        for level in &self.levels {
            pending.clear();
            for &(src, dst) in level {
                pending.push((dst, op(&state[src], &state[dst])));
            }
            for (dst, value) in pending.drain(..) {
                state[dst] = value;
            }
        }
        state
    }

    /// JSON export: `{"n": .., "depth": .., "levels": [[[src,dst], ..], ..]}`.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{{\"n\":{},\"depth\":{},\"levels\":[",
            self.n,
            self.depth()
        ));
        for (li, level) in self.levels.iter().enumerate() {
            if li > 0 {
                out.push(',');
            }
            out.push('[');
            for (ni, &(s, d)) in level.iter().enumerate() {
                if ni > 0 {
                    out.push(',');
                }
                out.push_str(&format!("[{s},{d}]"));
            }
            out.push(']');
        }
        out.push_str("]}");
        out
    }
}

/// Ladner-Fischer emission. `k = 0` is the minimum-depth variant; `k >= 1`
/// pair-compresses first, which keeps the node count linear while its final
/// (total) output still lands one level earlier than its odd outputs — the
/// property the `k = 0` combination step leans on.
fn emit_prefix(wires: &[usize], k: usize, ops: &mut Vec<(usize, usize)>) {
    let m = wires.len();
    if m <= 1 {
        return;
    }
    if k == 0 {
        let h = m.div_ceil(2);
        emit_prefix(&wires[..h], 1, ops);
        emit_prefix(&wires[h..], 0, ops);
        for &w in &wires[h..] {
            ops.push((wires[h - 1], w));
        }
    } else {
        let pairs = m / 2;
        for t in 0..pairs {
            ops.push((wires[2 * t], wires[2 * t + 1]));
        }
        let mut inner: Vec<usize> = (0..pairs).map(|t| wires[2 * t + 1]).collect();
        if m % 2 == 1 {
            inner.push(wires[m - 1]);
        }
        emit_prefix(&inner, k - 1, ops);
        // Even positions (2t >= 2) combine the prefix on the wire just below;
        // an odd tail already received its prefix inside the recursion.
        let mut p = 2;
        while p < m {
            if !(m % 2 == 1 && p == m - 1) {
                ops.push((wires[p - 1], wires[p]));
            }
            p += 2;
        }
    }
}

/// Inclusive prefix scan with the Ladner-Fischer network.
pub fn ladner_fischer_scan<T: Clone>(values: &[T], op: impl FnMut(&T, &T) -> T) -> Vec<T> {
    ScanNetwork::build(values.len()).apply(values, op)
}

/// Minimum of `values` together with a one-hot indicator of its position.
///
/// Realized as a balanced min-tree; when the two sides of a node tie, the
/// left one wins, so the reported position is the lowest index achieving the
/// minimum.
pub fn argmin_tree<T: PartialOrd + Clone>(values: &[T]) -> (T, OneHot) {
    assert!(!values.is_empty());
    let (min, idx) = argmin_rec(values, 0);
    let mut onehot = vec![false; values.len()];
    onehot[idx] = true;
    (min, onehot)
}

fn argmin_rec<T: PartialOrd + Clone>(values: &[T], offset: usize) -> (T, usize) {
    if values.len() == 1 {
        return (values[0].clone(), offset);
    }
    let mid = values.len() / 2;
    let left = argmin_rec(&values[..mid], offset);
    let right = argmin_rec(&values[mid..], offset + mid);
    if right.0 < left.0 {
        right
    } else {
        left
    }
}

/// One-hot marker of the highest-index set bit; all-zero input stays
/// all-zero.
///
/// Structured as the suffix counterpart of the prefix scan: a Ladner-Fischer
/// pass over the reversed, negated bits with logical AND computes "all bits
/// above are low", which then gates each input bit.
pub fn max_index(bits: &[bool]) -> OneHot {
    assert!(!bits.is_empty());
    let n = bits.len();
    let reversed_not: Vec<bool> = bits.iter().rev().map(|&b| !b).collect();
    let all_low_above = ladner_fischer_scan(&reversed_not, |a, b| *a && *b);
    (0..n)
        .map(|i| {
            let none_above = if i == n - 1 {
                true
            } else {
                // suffix over i+1.. = prefix of the reversed array at n-2-i
                all_low_above[n - 2 - i]
            };
            bits[i] && none_above
        })
        .collect()
}

/// Serial right-to-left reference for [`max_index`], used by tests.
pub fn max_index_serial(bits: &[bool]) -> OneHot {
    let mut out = vec![false; bits.len()];
    if let Some(idx) = bits.iter().rposition(|&b| b) {
        out[idx] = true;
    }
    out
}
