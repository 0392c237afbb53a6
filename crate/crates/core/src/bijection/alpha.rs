use crate::error::{Error, Result};
use crate::pattern::matcher;
use crate::perm::{PartialPermutation, Permutation};

/// `α(π)_v = pos(v) - 1` for every value `v < π_1` (positions 1-based), a
/// partial permutation of `n - 1` of length `π_1 - 1`.
pub fn alpha(p: &Permutation) -> Result<PartialPermutation> {
    let first = p.first().ok_or(Error::EmptyHost)?;
    if matcher::contains(p.values(), &[1, 3, 2], true) {
        return Err(Error::Precondition(format!("{p} contains [132")));
    }
    let values = (1..first)
        .map(|v| {
            p.position_of(v)
                .expect("values below the first are present") as u32
        })
        .collect();
    Ok(PartialPermutation::from_vec_unchecked(
        values,
        p.len() as u32 - 1,
    ))
}

/// The unique `[132`-avoider with `α(π) = a`: `π_1 = |a| + 1`, each `v` sits
/// at position `a_v + 1`, and the larger values fill the rest increasingly.
pub fn alpha_inverse(a: &PartialPermutation) -> Permutation {
    let n = a.ambient() as usize + 1;
    let k = a.len() as u32;
    let mut values = vec![0u32; n];
    values[0] = k + 1;
    for (v, &pos) in (1..).zip(a.values()) {
        values[pos as usize] = v;
    }
    let mut fill = k + 2..;
    for slot in values.iter_mut().filter(|s| **s == 0) {
        *slot = fill.next().expect("unbounded");
    }
    Permutation::from_vec_unchecked(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{partial_permutations, permutations};

    #[test]
    fn alpha_examples() {
        let pi: Permutation = "52461783".parse().unwrap();
        let a = alpha(&pi).unwrap();
        assert_eq!(a.values(), &[4, 1, 7, 2]);
        assert_eq!(a.ambient(), 7);
        assert_eq!(alpha_inverse(&a), pi);

        let lambda = alpha(&"1234".parse().unwrap()).unwrap();
        assert!(lambda.is_empty());
        assert_eq!(lambda.ambient(), 3);
        assert!(alpha(&"132".parse().unwrap()).is_err());
        assert!(alpha(&Permutation::empty()).is_err());
    }

    #[test]
    fn roundtrips() {
        for n in 1..=7 {
            let mut domain = 0;
            for pi in permutations(n) {
                if let Ok(a) = alpha(&pi) {
                    domain += 1;
                    assert_eq!(alpha_inverse(&a), pi);
                }
            }
            let mut codomain = 0;
            for a in partial_permutations(n as u32 - 1) {
                codomain += 1;
                assert_eq!(alpha(&alpha_inverse(&a)).unwrap(), a);
            }
            assert_eq!(domain, codomain);
        }
    }
}
