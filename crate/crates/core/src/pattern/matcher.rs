//! Backtracking occurrence search over plain slices.

use std::ops::ControlFlow;

/// Visit every occurrence of `pattern` in `host` (as strictly increasing index
/// lists) until `visit` breaks. With `anchored`, only occurrences whose first
/// index is 0 are considered.
pub fn for_each_occurrence<F>(host: &[u32], pattern: &[u32], anchored: bool, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if pattern.len() > host.len() || (anchored && pattern.is_empty()) {
        return;
    }
    let mut chosen = Vec::with_capacity(pattern.len());
    let _ = extend(host, pattern, anchored, &mut chosen, &mut visit);
}

fn extend<F>(
    host: &[u32],
    pattern: &[u32],
    anchored: bool,
    chosen: &mut Vec<usize>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let depth = chosen.len();
    if depth == pattern.len() {
        return visit(chosen);
    }
    let start = chosen.last().map_or(0, |&i| i + 1);
    let end = if depth == 0 && anchored {
        1
    } else {
        host.len() + depth + 1 - pattern.len()
    };
    let want = pattern[depth];
    for i in start..end {
        let v = host[i];
        let consistent = chosen
            .iter()
            .zip(pattern)
            .all(|(&j, &p)| (host[j] < v) == (p < want));
        if consistent {
            chosen.push(i);
            extend(host, pattern, anchored, chosen, visit)?;
            chosen.pop();
        }
    }
    ControlFlow::Continue(())
}

pub fn find(host: &[u32], pattern: &[u32], anchored: bool) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_occurrence(host, pattern, anchored, |idx| {
        found = Some(idx.to_vec());
        ControlFlow::Break(())
    });
    found
}

pub fn contains(host: &[u32], pattern: &[u32], anchored: bool) -> bool {
    if pattern.is_empty() {
        return !anchored;
    }
    find(host, pattern, anchored).is_some()
}

/// Find an anchored occurrence of the reduced pattern that cannot be extended
/// to the full `body` by inserting one host element at the barred slot.
/// `reduced` must be `body` with entry `bar` deleted and rescaled.
pub fn find_unextendable(
    host: &[u32],
    body: &[u32],
    bar: usize,
    reduced: &[u32],
) -> Option<Vec<usize>> {
    let barred = body[bar];
    let mut witness = None;
    for_each_occurrence(host, reduced, true, |idx| {
        let lo = idx[bar - 1] + 1;
        let hi = idx.get(bar).copied().unwrap_or(host.len());
        // other body entries, in order, matched to idx
        let others = body
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != bar)
            .map(|(_, &b)| b);
        let extends = (lo..hi).any(|t| {
            let v = host[t];
            others
                .clone()
                .zip(idx)
                .all(|(b, &j)| (host[j] < v) == (b < barred))
        });
        if extends {
            ControlFlow::Continue(())
        } else {
            witness = Some(idx.to_vec());
            ControlFlow::Break(())
        }
    });
    witness
}

/// Indices `(i, j, k)` of a 312 occurrence `a_i a_j a_k` such that some value
/// of `[a_j, a_k]` is absent from `host`.
pub fn find_gap_312(host: &[u32]) -> Option<[usize; 3]> {
    let max_value = host.iter().copied().max().unwrap_or(0) as usize;
    // present[v] = number of host values <= v
    let mut present = vec![0u32; max_value + 1];
    for &v in host {
        present[v as usize] += 1;
    }
    for v in 1..=max_value {
        present[v] += present[v - 1];
    }
    let full = |lo: u32, hi: u32| present[hi as usize] - present[lo as usize - 1] == hi - lo + 1;
    for k in 2..host.len() {
        for j in 1..k {
            let (low, mid) = (host[j], host[k]);
            if low >= mid || full(low, mid) {
                continue;
            }
            if let Some(i) = (0..j).find(|&i| host[i] > mid) {
                return Some([i, j, k]);
            }
        }
    }
    None
}

/// Indices of a 213 occurrence `a_i a_j a_k` with `a_i = a_k - 1`.
pub fn find_adjacent_213(host: &[u32]) -> Option<[usize; 3]> {
    for (i, &v) in host.iter().enumerate() {
        let Some(k) = host[i + 1..]
            .iter()
            .position(|&w| w == v + 1)
            .map(|p| p + i + 1)
        else {
            continue;
        };
        if let Some(j) = (i + 1..k).find(|&j| host[j] < v) {
            return Some([i, j, k]);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_search() {
        assert!(contains(&[2, 3, 1], &[2, 3, 1], false));
        assert!(!contains(&[3, 1, 2], &[2, 3, 1], false));
        let host = [5, 2, 4, 3, 6, 1];
        let idx = find(&host, &[1, 3, 2, 4], false).unwrap();
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
        let letters: Vec<u32> = idx.iter().map(|&i| host[i]).collect();
        assert_eq!(crate::perm::standardize(&letters), vec![1, 3, 2, 4]);
        assert!(contains(&[1], &[], false));
        assert!(!contains(&[1], &[], true));
    }

    #[test]
    fn anchored_search() {
        assert!(contains(&[1, 3, 2], &[1, 3, 2], true));
        assert!(!contains(&[2, 3, 1], &[1, 3, 2], true));
        assert!(contains(&[2, 1, 3], &[1, 2], true));
        assert!(!contains(&[3, 1, 2], &[1, 2], true));
        assert!(contains(&[2, 1, 3], &[2, 1], true));
    }

    #[test]
    fn specials() {
        assert_eq!(find_gap_312(&[3, 1, 2]), None);
        assert_eq!(find_gap_312(&[4, 1, 3]), Some([0, 1, 2]));
        assert_eq!(find_gap_312(&[]), None);
        assert_eq!(find_adjacent_213(&[2, 1, 4]), None);
        assert_eq!(find_adjacent_213(&[3, 1, 4]), Some([0, 1, 2]));
        assert_eq!(find_adjacent_213(&[2, 1]), None);
    }
}
