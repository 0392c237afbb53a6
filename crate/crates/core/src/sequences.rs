//! Reference integer sequences used to check enumeration results.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest index stored in the embedded tables.
pub const TABLE_MAX: usize = 15;

/// Large Schröder numbers (OEIS A006318), indices 0..=15.
pub const LARGE_SCHROEDER: [u64; TABLE_MAX + 1] = [
    1, 2, 6, 22, 90, 394, 1806, 8558, 41586, 206098, 1037718, 5293446, 27297738, 142078746,
    745387038, 3937603038,
];

/// Catalan triangle rows `a_n^k` for `1 <= k <= n <= 15` (OEIS A009766, shifted by one).
/// Row `n` is `CATALAN_TRIANGLE[n]`, entry `k` at index `k`; unused cells are zero.
pub const CATALAN_TRIANGLE: [[u64; TABLE_MAX + 1]; TABLE_MAX + 1] = ballot_table();

const fn ballot_table() -> [[u64; TABLE_MAX + 1]; TABLE_MAX + 1] {
    let mut t = [[0u64; TABLE_MAX + 1]; TABLE_MAX + 1];
    let mut n = 1;
    while n <= TABLE_MAX {
        t[n][1] = 1;
        let mut k = 2;
        while k <= n {
            // a_n^k = a_n^{k-1} + a_{n-1}^k, with a_{n-1}^n = 0
            t[n][k] = t[n][k - 1] + t[n - 1][k];
            k += 1;
        }
        n += 1;
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceName {
    Catalan,
    LargeSchroeder,
    BinomialTransformCatalan,
    CatalanTriangle,
}

impl SequenceName {
    pub const ALL: [SequenceName; 4] = [
        SequenceName::Catalan,
        SequenceName::LargeSchroeder,
        SequenceName::BinomialTransformCatalan,
        SequenceName::CatalanTriangle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SequenceName::Catalan => "catalan",
            SequenceName::LargeSchroeder => "large-schroeder",
            SequenceName::BinomialTransformCatalan => "binomial-transform-catalan",
            SequenceName::CatalanTriangle => "catalan-triangle",
        }
    }

    /// Whether values are indexed by `(n, k)` rather than `n` alone.
    pub fn is_two_dimensional(self) -> bool {
        self == SequenceName::CatalanTriangle
    }
}

impl fmt::Display for SequenceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SequenceName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Parse {
                what: "sequence name",
                input: s.to_string(),
                reason: "expected one of catalan, large-schroeder, binomial-transform-catalan, catalan-triangle".into(),
            })
    }
}

/// `binom(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `c_n = binom(2n, n) / (n + 1)`
pub fn catalan(n: u64) -> Option<u64> {
    let mut acc: u128 = 1;
    // binom(2n, n) built incrementally stays below u128 for every n where c_n fits u64
    for i in 0..n {
        acc = acc.checked_mul((2 * n - i) as u128)? / (i + 1) as u128;
    }
    let c = acc / (n as u128 + 1);
    u64::try_from(c).ok()
}

/// `sum_k binom(n, k) c_k`
pub fn binomial_transform_catalan(n: u64) -> Option<u64> {
    (0..=n).try_fold(0u64, |acc, k| {
        acc.checked_add(binomial(n, k)?.checked_mul(catalan(k)?)?)
    })
}

pub fn catalan_triangle(n: usize, k: usize) -> Result<u64> {
    if n == 0 || n > TABLE_MAX || k == 0 || k > n {
        return Err(Error::SequenceRange {
            sequence: "catalan-triangle",
            index: if n == 0 || n > TABLE_MAX { n } else { k },
        });
    }
    Ok(CATALAN_TRIANGLE[n][k])
}

/// Value of a reference sequence. `k` is required for the Catalan triangle
/// (`a_n^k`, `1 <= k <= n`) and ignored otherwise.
pub fn sequence_value(name: SequenceName, n: usize, k: Option<usize>) -> Result<u64> {
    let range = |sequence| Error::SequenceRange { sequence, index: n };
    match name {
        SequenceName::Catalan => catalan(n as u64).ok_or(range("catalan")),
        SequenceName::BinomialTransformCatalan => {
            binomial_transform_catalan(n as u64).ok_or(range("binomial-transform-catalan"))
        }
        SequenceName::LargeSchroeder => LARGE_SCHROEDER
            .get(n)
            .copied()
            .ok_or(range("large-schroeder")),
        SequenceName::CatalanTriangle => {
            let k = k.ok_or_else(|| {
                Error::Precondition("catalan-triangle requires a column index k".into())
            })?;
            catalan_triangle(n, k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(sequence_value(SequenceName::Catalan, 5, None).unwrap(), 42);
        assert_eq!(
            sequence_value(SequenceName::BinomialTransformCatalan, 3, None).unwrap(),
            15
        );
        assert_eq!(
            sequence_value(SequenceName::CatalanTriangle, 6, Some(4)).unwrap(),
            28
        );
        assert!(sequence_value(SequenceName::CatalanTriangle, 6, None).is_err());
        assert!(sequence_value(SequenceName::LargeSchroeder, 16, None).is_err());
        assert!(sequence_value(SequenceName::CatalanTriangle, 16, Some(1)).is_err());
        assert!(sequence_value(SequenceName::CatalanTriangle, 5, Some(6)).is_err());
    }

    #[test]
    fn catalan_prefix() {
        let c: Vec<u64> = (0..=9).map(|n| catalan(n).unwrap()).collect();
        assert_eq!(c, [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]);
        assert_eq!(catalan(35), Some(3_116_285_494_907_301_262));
        assert_eq!(catalan(36), Some(11_959_798_385_860_453_492));
        assert_eq!(catalan(37), None);
    }

    #[test]
    fn binomial_transform_prefix() {
        let b: Vec<u64> = (0..9)
            .map(|n| binomial_transform_catalan(n).unwrap())
            .collect();
        assert_eq!(b, [1, 2, 5, 15, 51, 188, 731, 2950, 12235]);
    }

    #[test]
    fn schroeder_table_satisfies_recurrence() {
        // (n+1) S_n = 3(2n-1) S_{n-1} - (n-2) S_{n-2}
        for n in 2..=TABLE_MAX {
            let lhs = (n as i128 + 1) * LARGE_SCHROEDER[n] as i128;
            let rhs = 3 * (2 * n as i128 - 1) * LARGE_SCHROEDER[n - 1] as i128
                - (n as i128 - 2) * LARGE_SCHROEDER[n - 2] as i128;
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn triangle_matches_ballot_formula_and_catalan_sums() {
        for n in 1..=TABLE_MAX {
            for k in 1..=n {
                // a_n^k = binom(n+k-2, n-1) (n-k+1) / n
                let f = binomial((n + k - 2) as u64, (n - 1) as u64).unwrap() * (n - k + 1) as u64
                    / n as u64;
                assert_eq!(catalan_triangle(n, k).unwrap(), f);
            }
            let sum: u64 = (1..=n).map(|k| catalan_triangle(n, k).unwrap()).sum();
            assert_eq!(sum, catalan(n as u64).unwrap());
            assert_eq!(
                catalan_triangle(n, n).unwrap(),
                catalan(n as u64 - 1).unwrap()
            );
        }
        assert_eq!(catalan_triangle(5, 4).unwrap(), 14);
        assert_eq!(catalan_triangle(8, 6).unwrap(), 297);
    }

    #[test]
    fn names_roundtrip() {
        for name in SequenceName::ALL {
            assert_eq!(name.as_str().parse::<SequenceName>().unwrap(), name);
        }
        assert!("fibonacci".parse::<SequenceName>().is_err());
    }
}
