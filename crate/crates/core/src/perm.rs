//! Permutations, partial permutations and their left-to-right decompositions.
//!
//! Values are 1-based throughout: a permutation of length `n` is a
//! rearrangement of `1..=n`, and a partial permutation of `n` is a sequence of
//! distinct values drawn from `1..=n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which kind of host a pattern predicate is being evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HostKind {
    Permutation,
    Partial,
}

impl HostKind {
    pub fn name(self) -> &'static str {
        match self {
            HostKind::Permutation => "permutation",
            HostKind::Partial => "partial permutation",
        }
    }
}

/// A sequence of distinct positive integers that can be fed through a stack.
///
/// Implemented by [`Permutation`] and [`PartialPermutation`]. `rearranged`
/// must only be called with a rearrangement of `letters()`.
pub trait Letters: Sized {
    const HOST: HostKind;

    fn letters(&self) -> &[u32];

    /// Build a value of the same type holding a rearrangement of this one's letters.
    fn rearranged(&self, values: Vec<u32>) -> Self;

    fn to_text(&self) -> String {
        format_letters(self.letters())
    }
}

/// A permutation of `1..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Validate `values` as a rearrangement of `1..=values.len()`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        let mut too_large = false;
        for &v in &values {
            if v == 0 {
                return Err(Error::OutOfRange {
                    value: v,
                    max: n as u32,
                });
            }
            if (v as usize) > n {
                too_large = true;
                continue;
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::DuplicateValue(v));
            }
        }
        if too_large {
            // distinct values with one above n: report a duplicate if there is
            // one among the large values, otherwise the set has a hole
            let mut sorted = values.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateValue(w[0]));
            }
            return Err(Error::NonContiguous);
        }
        Ok(Permutation { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok(), "{values:?}");
        Permutation { values }
    }

    /// The empty permutation λ.
    pub fn empty() -> Self {
        Permutation { values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    /// `n (n-1) ... 1`
    pub fn decreasing(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn first(&self) -> Option<u32> {
        self.values.first().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    /// 0-based position of `value`, if present.
    pub fn position_of(&self, value: u32) -> Option<usize> {
        self.values.iter().position(|&v| v == value)
    }

    /// `p_n ... p_1`
    pub fn reverse(&self) -> Permutation {
        let mut values = self.values.clone();
        values.reverse();
        Permutation { values }
    }

    pub fn decompose(&self, kind: DecompositionKind) -> Result<Decomposition> {
        Decomposition::new(self.values(), kind)
    }
}

impl Letters for Permutation {
    const HOST: HostKind = HostKind::Permutation;

    fn letters(&self) -> &[u32] {
        &self.values
    }

    fn rearranged(&self, values: Vec<u32>) -> Self {
        Permutation::from_vec_unchecked(values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.values))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = parse_letters(s, "permutation")?;
        Permutation::new(values).map_err(|e| Error::Parse {
            what: "permutation",
            input: s.to_string(),
            reason: e.to_string(),
        })
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An injection `{1..k} -> {1..n}`, written as the list of its images, with
/// the ambient `n` kept explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPermutation {
    values: Vec<u32>,
    ambient: u32,
}

impl PartialPermutation {
    pub fn new(values: Vec<u32>, ambient: u32) -> Result<Self> {
        if values.len() > ambient as usize {
            return Err(Error::Precondition(format!(
                "partial permutation of length {} cannot live in 1..={ambient}",
                values.len()
            )));
        }
        let mut seen = vec![false; ambient as usize + 1];
        for &v in &values {
            if v == 0 || v > ambient {
                return Err(Error::OutOfRange {
                    value: v,
                    max: ambient,
                });
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::DuplicateValue(v));
            }
        }
        Ok(PartialPermutation { values, ambient })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>, ambient: u32) -> Self {
        debug_assert!(PartialPermutation::new(values.clone(), ambient).is_ok());
        PartialPermutation { values, ambient }
    }

    /// λ as a partial permutation of `ambient`.
    pub fn empty(ambient: u32) -> Self {
        PartialPermutation {
            values: Vec::new(),
            ambient,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn contains_value(&self, value: u32) -> bool {
        self.values.contains(&value)
    }
}

impl Letters for PartialPermutation {
    const HOST: HostKind = HostKind::Partial;

    fn letters(&self) -> &[u32] {
        &self.values
    }

    fn rearranged(&self, values: Vec<u32>) -> Self {
        PartialPermutation::from_vec_unchecked(values, self.ambient)
    }
}

impl fmt::Display for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.values.is_empty() {
            "λ".to_string()
        } else if self.ambient <= 9 {
            self.values.iter().map(|v| v.to_string()).collect()
        } else {
            join_spaced(&self.values)
        };
        write!(f, "{body} of {}", self.ambient)
    }
}

impl FromStr for PartialPermutation {
    type Err = Error;

    /// Accepts `"4 1 7 2 of 7"`, `"4172 of 7"`, `"λ of 3"`; without an `of`
    /// annotation the ambient is the largest value.
    fn from_str(s: &str) -> Result<Self> {
        let (body, ambient) = match s.rsplit_once("of") {
            Some((body, n)) => {
                let n: u32 = n.trim().parse().map_err(|_| Error::Parse {
                    what: "partial permutation",
                    input: s.to_string(),
                    reason: "ambient after `of` is not an integer".into(),
                })?;
                (body, Some(n))
            }
            None => (s, None),
        };
        let body = body.trim();
        let separated = body.contains(|c: char| c == ',' || c.is_whitespace());
        let values = if body == "λ" || body.eq_ignore_ascii_case("lambda") {
            Vec::new()
        } else if !separated && ambient.is_some_and(|n| n > 9) {
            // Multi-digit ambients are written spaced, so a lone token is one value.
            vec![body.parse().map_err(|_| Error::Parse {
                what: "partial permutation",
                input: s.to_string(),
                reason: format!("{body:?} is not a nonnegative integer"),
            })?]
        } else {
            parse_letters(body, "partial permutation")?
        };
        let ambient = ambient.unwrap_or_else(|| values.iter().copied().max().unwrap_or(0));
        PartialPermutation::new(values, ambient).map_err(|e| Error::Parse {
            what: "partial permutation",
            input: s.to_string(),
            reason: e.to_string(),
        })
    }
}

fn join_spaced(values: &[u32]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Compact digit string when every value is a single digit, space separated otherwise.
pub fn format_letters(values: &[u32]) -> String {
    if values.iter().all(|&v| v <= 9) {
        values.iter().map(|v| v.to_string()).collect()
    } else {
        join_spaced(values)
    }
}

/// Parse `"2 3 1"`, `"2,3,1"` or the compact `"231"`.
pub fn parse_letters(s: &str, what: &'static str) -> Result<Vec<u32>> {
    let err = |reason: String| Error::Parse {
        what,
        input: s.to_string(),
        reason,
    };
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let separated = s.contains(|c: char| c == ',' || c.is_whitespace());
    if separated {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| err(format!("{t:?} is not a nonnegative integer")))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| err(format!("unexpected character {c:?}")))
            })
            .collect()
    }
}

/// Rank-reduce a sequence of distinct values to a permutation of `1..=len`.
pub fn standardize(values: &[u32]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by_key(|&i| values[i]);
    let mut out = vec![0; values.len()];
    for (rank, i) in order.into_iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionKind {
    LtrMin,
    LtrMax,
}

/// `π = m_1 B_1 m_2 B_2 ... m_t B_t` where the `m_i` are the left-to-right
/// minima (or maxima) of `π` and `B_i` the runs of elements between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub kind: DecompositionKind,
    pub pivots: Vec<u32>,
    pub blocks: Vec<Vec<u32>>,
    /// 0-based index of each pivot in the source sequence.
    pub positions: Vec<usize>,
}

impl Decomposition {
    pub fn new(values: &[u32], kind: DecompositionKind) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDecomposition);
        }
        let mut pivots: Vec<u32> = Vec::new();
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        let mut positions = Vec::new();
        for (i, &v) in values.iter().enumerate() {
            let is_pivot = match (pivots.last(), kind) {
                (None, _) => true,
                (Some(&last), DecompositionKind::LtrMin) => v < last,
                (Some(&last), DecompositionKind::LtrMax) => v > last,
            };
            if is_pivot {
                pivots.push(v);
                blocks.push(Vec::new());
                positions.push(i);
            } else {
                blocks.last_mut().expect("first value is a pivot").push(v);
            }
        }
        Ok(Decomposition {
            kind,
            pivots,
            blocks,
            positions,
        })
    }

    /// Number of pivots `t`.
    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    /// `pivot_1 ++ block_1 ++ ... ++ pivot_t ++ block_t`
    pub fn concat(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (m, b) in self.pivots.iter().zip(&self.blocks) {
            out.push(*m);
            out.extend_from_slice(b);
        }
        out
    }

    /// Block index of every non-pivot value, indexed by value.
    pub fn labels(&self) -> BlockLabels {
        BlockLabels::from_blocks(&self.blocks)
    }
}

pub fn decompose(p: &Permutation, kind: DecompositionKind) -> Result<Decomposition> {
    p.decompose(kind)
}

/// Maps values to the index of the block they belong to; values without a
/// label (pivots) are skipped by the block pattern predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockLabels {
    by_value: Vec<Option<usize>>,
}

impl BlockLabels {
    pub fn from_blocks(blocks: &[Vec<u32>]) -> Self {
        let mut labels = BlockLabels::default();
        for (i, block) in blocks.iter().enumerate() {
            for &v in block {
                labels.set(v, i);
            }
        }
        labels
    }

    pub fn set(&mut self, value: u32, block: usize) {
        let v = value as usize;
        if self.by_value.len() <= v {
            self.by_value.resize(v + 1, None);
        }
        self.by_value[v] = Some(block);
    }

    pub fn get(&self, value: u32) -> Option<usize> {
        self.by_value.get(value as usize).copied().flatten()
    }

    pub fn labeled_values(&self) -> impl Iterator<Item = u32> + '_ {
        self.by_value
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_some())
            .map(|(v, _)| v as u32)
    }
}

/// Lexicographic iterator over `S_n` (or over the permutations of `S_n` with a fixed first entry).
#[derive(Clone, Debug)]
pub struct Permutations {
    current: Option<Vec<u32>>,
    /// Positions before this index are held fixed.
    fixed_prefix: usize,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.current.as_mut()?;
        let item = Permutation::from_vec_unchecked(current.clone());
        if !next_permutation(&mut current[self.fixed_prefix..]) {
            self.current = None;
        }
        Some(item)
    }
}

/// Advance `values` to its lexicographic successor; `false` once it was the last one.
fn next_permutation(values: &mut [u32]) -> bool {
    let n = values.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| values[i] < values[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| values[j] > values[i]).unwrap();
    values.swap(i, j);
    values[i + 1..].reverse();
    true
}

/// All of `S_n` in lexicographic order; `n = 0` yields only λ.
pub fn permutations(n: usize) -> Permutations {
    Permutations {
        current: Some((1..=n as u32).collect()),
        fixed_prefix: 0,
    }
}

/// Permutations of length `n` beginning with `first`, in lexicographic order.
pub fn permutations_starting_with(n: usize, first: u32) -> Permutations {
    if first == 0 || first as usize > n {
        return Permutations {
            current: None,
            fixed_prefix: 0,
        };
    }
    let mut start = vec![first];
    start.extend((1..=n as u32).filter(|&v| v != first));
    Permutations {
        current: Some(start),
        fixed_prefix: 1,
    }
}

/// Partial permutations of `n` in shortlex order: λ, then length 1, length 2, ...
#[derive(Clone, Debug)]
pub struct PartialPermutations {
    ambient: u32,
    current: Option<Vec<u32>>,
}

impl Iterator for PartialPermutations {
    type Item = PartialPermutation;

    fn next(&mut self) -> Option<PartialPermutation> {
        let current = self.current.as_mut()?;
        let item = PartialPermutation::from_vec_unchecked(current.clone(), self.ambient);
        if !next_arrangement(current, self.ambient) {
            let k = current.len() + 1;
            self.current = (k <= self.ambient as usize).then(|| (1..=k as u32).collect());
        }
        Some(item)
    }
}

/// Lexicographic successor among arrangements of the same length drawn from `1..=n`.
fn next_arrangement(values: &mut [u32], n: u32) -> bool {
    let k = values.len();
    for i in (0..k).rev() {
        if let Some(next) = (values[i] + 1..=n).find(|v| !values[..i].contains(v)) {
            values[i] = next;
            for j in i + 1..k {
                values[j] = (1..=n)
                    .find(|v| !values[..j].contains(v))
                    .expect("enough values remain");
            }
            return true;
        }
    }
    false
}

pub fn partial_permutations(n: u32) -> PartialPermutations {
    PartialPermutations {
        ambient: n,
        current: Some(Vec::new()),
    }
}
