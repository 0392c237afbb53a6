use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::is_sortable;
use crate::perm::Permutation;
use crate::MachineConfig;

/// `A_n(k)` splits into `A^1_n(k)`, where every anchored `[231` occurrence
/// `π_1 π_i (k-1)` extends to `[3412`, and its complement `A^2_n(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TriangleSubset {
    A1,
    A2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TriangleClass {
    pub class: TriangleSubset,
    pub n: usize,
    pub k: u32,
}

fn machine() -> MachineConfig {
    MachineConfig::pair("123", "132").expect("valid pair")
}

/// Membership in `A_n(k)`: nonempty and `(123,132)`-sortable.
pub fn is_triangle_member(p: &Permutation) -> bool {
    !p.is_empty() && is_sortable(p, &machine())
}

pub fn classify_triangle(p: &Permutation) -> Result<TriangleClass> {
    let k = p.first().ok_or(Error::EmptyHost)?;
    if !is_sortable(p, &machine()) {
        return Err(Error::Precondition(format!(
            "{p} is not (123,132)-sortable"
        )));
    }
    let class = if k < 2 || in_first_subset(p.values()) {
        TriangleSubset::A1
    } else {
        TriangleSubset::A2
    };
    Ok(TriangleClass {
        class,
        n: p.len(),
        k,
    })
}

fn in_first_subset(v: &[u32]) -> bool {
    let k = v[0];
    let l = v
        .iter()
        .position(|&x| x == k - 1)
        .expect("k - 1 is present");
    (1..l)
        .filter(|&i| v[i] > k)
        .all(|i| v[i + 1..l].iter().any(|&x| x < k - 1))
}

fn require(p: &Permutation, class: TriangleSubset) -> Result<u32> {
    let c = classify_triangle(p)?;
    if c.k < 2 {
        return Err(Error::Precondition(format!("{p} starts with 1")));
    }
    if c.class != class {
        return Err(Error::Precondition(format!("{p} is not in {class:?}")));
    }
    Ok(c.k)
}

/// Exchange the values `k` and `k - 1`; maps `A^1_n(k)` onto `A_n(k-1)`.
pub fn triangle_swap(p: &Permutation) -> Result<Permutation> {
    let k = require(p, TriangleSubset::A1)?;
    let values = p
        .values()
        .iter()
        .map(|&v| match v {
            v if v == k => k - 1,
            v if v == k - 1 => k,
            v => v,
        })
        .collect();
    Ok(Permutation::from_vec_unchecked(values))
}

/// Delete the entry immediately before `k - 1` and rescale; maps
/// `A^2_n(k)` onto `A_{n-1}(k)`.
pub fn triangle_delete(p: &Permutation) -> Result<Permutation> {
    let k = require(p, TriangleSubset::A2)?;
    let v = p.values();
    let i = p.position_of(k - 1).expect("k - 1 is present");
    let gone = v[i - 1];
    let values = v
        .iter()
        .filter(|&&x| x != gone)
        .map(|&x| if x > gone { x - 1 } else { x })
        .collect();
    Ok(Permutation::from_vec_unchecked(values))
}

/// Inverse of [`triangle_delete`]: insert `ℓ` immediately before `k - 1`,
/// where `ℓ` is the smallest entry `π_u > π_1` (`u` before `k - 1`) followed
/// by some entry below `k - 1` ahead of `k - 1`, or `n + 1` if there is none.
pub fn triangle_delete_inverse(p: &Permutation) -> Result<Permutation> {
    let c = classify_triangle(p)?;
    if c.k < 2 {
        return Err(Error::Precondition(format!("{p} starts with 1")));
    }
    let k = c.k;
    let v = p.values();
    let i = p.position_of(k - 1).expect("k - 1 is present");
    let ell = (1..i)
        .filter(|&u| v[u] > k && v[u + 1..i].iter().any(|&x| x < k - 1))
        .map(|u| v[u])
        .min()
        .unwrap_or(p.len() as u32 + 1);
    let mut values: Vec<u32> = v
        .iter()
        .map(|&x| if x >= ell { x + 1 } else { x })
        .collect();
    values.insert(i, ell);
    Ok(Permutation::from_vec_unchecked(values))
}
