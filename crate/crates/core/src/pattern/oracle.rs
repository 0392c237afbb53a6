//! Brute-force containment by enumerating every subsequence of the host.
//!
//! Slow and deliberately naive; used to cross-check the backtracking matchers
//! and exposed through the CLI `oracle` command.

use crate::perm::standardize;

use super::{PatternSpec, SpecialPattern};

/// Calls `f` on each strictly increasing `k`-subset of `0..n` until it returns true.
fn any_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        // advance to the next combination
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn pick(host: &[u32], idx: &[usize]) -> Vec<u32> {
    idx.iter().map(|&i| host[i]).collect()
}

pub fn contains_classical(host: &[u32], pattern: &[u32]) -> bool {
    any_subset(host.len(), pattern.len(), |idx| {
        standardize(&pick(host, idx)) == pattern
    })
}

pub fn contains_anchored(host: &[u32], pattern: &[u32]) -> bool {
    any_subset(host.len(), pattern.len(), |idx| {
        idx.first() == Some(&0) && standardize(&pick(host, idx)) == pattern
    })
}

/// True when some anchored occurrence of the reduced pattern has no extension.
pub fn contains_barred(host: &[u32], body: &[u32], bar: usize) -> bool {
    let reduced = standardize(
        &body
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != bar)
            .map(|(_, &v)| v)
            .collect::<Vec<_>>(),
    );
    any_subset(host.len(), reduced.len(), |idx| {
        if idx[0] != 0 || standardize(&pick(host, idx)) != reduced {
            return false;
        }
        let extended = (0..host.len()).filter(|t| !idx.contains(t)).any(|t| {
            let mut full: Vec<usize> = idx.to_vec();
            full.push(t);
            full.sort_unstable();
            // the inserted index must sit exactly in the barred slot
            full.iter().position(|&i| i == t) == Some(bar)
                && standardize(&pick(host, &full)) == body
        });
        !extended
    })
}

pub fn contains_gap_312(host: &[u32]) -> bool {
    any_subset(host.len(), 3, |idx| {
        let (a, b, c) = (host[idx[0]], host[idx[1]], host[idx[2]]);
        b < c && c < a && (b..=c).any(|v| !host.contains(&v))
    })
}

pub fn contains_adjacent_213(host: &[u32]) -> bool {
    any_subset(host.len(), 3, |idx| {
        let (a, b, c) = (host[idx[0]], host[idx[1]], host[idx[2]]);
        b < a && a < c && a + 1 == c
    })
}

/// Containment of any pattern kind, computed by brute force. No applicability
/// checks: a nonempty host is assumed for anchored kinds.
pub fn contains(host: &[u32], spec: &PatternSpec) -> bool {
    match spec {
        PatternSpec::Classical(p) => contains_classical(host, p.values()),
        PatternSpec::Anchored(p) => contains_anchored(host, p.values()),
        PatternSpec::BarredPrefix { body, bar } => contains_barred(host, body.values(), *bar),
        PatternSpec::Special(SpecialPattern::Gap312) => contains_gap_312(host),
        PatternSpec::Special(SpecialPattern::Adjacent213) => contains_adjacent_213(host),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_enumerated_once() {
        let mut seen = Vec::new();
        any_subset(5, 3, |idx| {
            seen.push(idx.to_vec());
            false
        });
        assert_eq!(seen.len(), 10);
        let mut dedup = seen.clone();
        dedup.dedup();
        assert_eq!(dedup, seen);
        assert!(!any_subset(2, 3, |_| true));
        assert!(any_subset(0, 0, |idx| idx.is_empty()));
    }

    #[test]
    fn barred_examples() {
        // [24^13
        assert!(!contains_barred(&[1, 2, 3, 4, 5], &[2, 4, 1, 3], 2));
        assert!(!contains_barred(&[2, 4, 1, 3], &[2, 4, 1, 3], 2));
        assert!(contains_barred(&[2, 4, 3, 1], &[2, 4, 1, 3], 2));
    }
}
