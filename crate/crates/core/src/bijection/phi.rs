use crate::error::{Error, Result};
use crate::pattern::matcher;
use crate::perm::PartialPermutation;

/// `φ`, mapping partial permutations avoiding `31|2` and `2~13~` onto those
/// avoiding 213 (same ambient).
///
/// Write the input as `A m B` with `m` its minimum. When `A` or `B` is empty,
/// or `A` lies entirely above `B`, the result is `φ(A) m φ(B)`. Otherwise let
/// `x = max(A) + 1` and `r` the largest entry of `B` below `min(A)` (or `m`
/// if there is none); `A` is shifted up by `max(B) - x + 1`, the entries of
/// `B` above `x` are shifted down by `x - r - 1`, and both parts recurse.
pub fn phi(a: &PartialPermutation) -> Result<PartialPermutation> {
    if matcher::find_gap_312(a.values()).is_some() {
        return Err(Error::Precondition(format!("{a} contains 31|2")));
    }
    if matcher::find_adjacent_213(a.values()).is_some() {
        return Err(Error::Precondition(format!("{a} contains 2~13~")));
    }
    let letters: Vec<i64> = a.values().iter().map(|&v| v as i64).collect();
    Ok(PartialPermutation::from_vec_unchecked(
        narrow(phi_letters(&letters)),
        a.ambient(),
    ))
}

/// Inverse of [`phi`], defined on 213-avoiders.
pub fn phi_inverse(a: &PartialPermutation) -> Result<PartialPermutation> {
    if matcher::contains(a.values(), &[2, 1, 3], false) {
        return Err(Error::Precondition(format!("{a} contains 213")));
    }
    let letters: Vec<i64> = a.values().iter().map(|&v| v as i64).collect();
    Ok(PartialPermutation::from_vec_unchecked(
        narrow(phi_inverse_letters(&letters)),
        a.ambient(),
    ))
}

fn narrow(values: Vec<i64>) -> Vec<u32> {
    values
        .into_iter()
        .map(|v| u32::try_from(v).expect("φ keeps values positive on its domain"))
        .collect()
}

fn split_at_min(letters: &[i64]) -> (&[i64], i64, &[i64]) {
    let (i, &m) = letters
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| *v)
        .expect("nonempty");
    (&letters[..i], m, &letters[i + 1..])
}

fn join(left: Vec<i64>, m: i64, right: Vec<i64>) -> Vec<i64> {
    let mut out = left;
    out.push(m);
    out.extend(right);
    out
}

fn phi_letters(letters: &[i64]) -> Vec<i64> {
    if letters.is_empty() {
        return Vec::new();
    }
    let (a, m, b) = split_at_min(letters);
    let (Some(&min_a), Some(&max_a), Some(&max_b)) =
        (a.iter().min(), a.iter().max(), b.iter().max())
    else {
        return join(phi_letters(a), m, phi_letters(b));
    };
    if min_a > max_b {
        return join(phi_letters(a), m, phi_letters(b));
    }
    let x = max_a + 1;
    let r = b.iter().copied().filter(|&v| v < min_a).max().unwrap_or(m);
    let shifted_b: Vec<i64> = b
        .iter()
        .map(|&v| if v > x { v - (x - r - 1) } else { v })
        .collect();
    let shifted_a: Vec<i64> = a.iter().map(|&v| v + max_b - x + 1).collect();
    join(phi_letters(&shifted_a), m, phi_letters(&shifted_b))
}

fn phi_inverse_letters(letters: &[i64]) -> Vec<i64> {
    if letters.is_empty() {
        return Vec::new();
    }
    let (c, m, d) = split_at_min(letters);
    let Some(&max_d) = d.iter().max() else {
        return join(phi_inverse_letters(c), m, Vec::new());
    };
    let contiguous = (m + 1..=max_d).all(|v| d.contains(&v));
    if c.is_empty() || contiguous {
        return join(phi_inverse_letters(c), m, phi_inverse_letters(d));
    }
    let a = phi_inverse_letters(c);
    let b = phi_inverse_letters(d);
    let r1 = (m + 1..).find(|v| !b.contains(v)).expect("unbounded");
    let max_b = *a.iter().max().expect("nonempty");
    let x = max_b - b.iter().max().expect("nonempty") + r1;
    let a: Vec<i64> = a.iter().map(|&v| v - (max_b - x + 1)).collect();
    let b: Vec<i64> = b
        .iter()
        .map(|&v| if v > r1 { v + (x - r1) } else { v })
        .collect();
    join(a, m, b)
}
