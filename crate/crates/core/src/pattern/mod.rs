//! Pattern containment and avoidance.
//!
//! Supported pattern kinds:
//!
//! * classical patterns (`2314`): some subsequence of the host is order
//!   isomorphic to the pattern;
//! * prefix-anchored patterns (`[132`): an occurrence whose first letter is
//!   the first element of the host;
//! * barred prefix-anchored patterns (`[24^13`, caret before the barred
//!   entry): the host avoids the pattern when every anchored occurrence of
//!   the pattern with the barred entry removed extends, through one host
//!   element placed in the barred slot, to an anchored occurrence of the full
//!   pattern;
//! * two special patterns on partial permutations, `31|2` and `2~13~`.
//!
//! Every predicate has a brute-force counterpart in [`oracle`].

pub mod matcher;
pub mod oracle;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{standardize, HostKind, Letters, PartialPermutation, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialPattern {
    /// `31|2`: a 312 occurrence `a_i a_j a_k` such that some value of
    /// `[a_j, a_k]` is missing from the host.
    Gap312,
    /// `2~13~`: a 213 occurrence `a_i a_j a_k` with `a_i = a_k - 1`.
    Adjacent213,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternKind {
    Classical,
    PrefixAnchored,
    BarredPrefix,
    Special,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PatternSpec {
    Classical(Permutation),
    Anchored(Permutation),
    /// `bar` is the 0-based index of the barred entry of `body`.
    BarredPrefix {
        body: Permutation,
        bar: usize,
    },
    Special(SpecialPattern),
}

impl PatternSpec {
    pub fn classical(s: &str) -> Result<Self> {
        Ok(PatternSpec::Classical(s.parse()?))
    }

    pub fn anchored(body: Permutation) -> Result<Self> {
        if body.is_empty() {
            return Err(Error::MalformedPattern(
                "an anchored pattern needs at least one letter".into(),
            ));
        }
        Ok(PatternSpec::Anchored(body))
    }

    pub fn barred_prefix(body: Permutation, bar: usize) -> Result<Self> {
        if bar == 0 || bar >= body.len() {
            return Err(Error::MalformedPattern(format!(
                "barred entry index {bar} must lie in 1..{} (the anchored first entry cannot be barred)",
                body.len()
            )));
        }
        Ok(PatternSpec::BarredPrefix { body, bar })
    }

    pub fn kind(&self) -> PatternKind {
        match self {
            PatternSpec::Classical(_) => PatternKind::Classical,
            PatternSpec::Anchored(_) => PatternKind::PrefixAnchored,
            PatternSpec::BarredPrefix { .. } => PatternKind::BarredPrefix,
            PatternSpec::Special(_) => PatternKind::Special,
        }
    }

    pub fn is_anchored(&self) -> bool {
        matches!(
            self,
            PatternSpec::Anchored(_) | PatternSpec::BarredPrefix { .. }
        )
    }

    /// The pattern letters with bars removed; `None` for the special patterns.
    pub fn body(&self) -> Option<&Permutation> {
        match self {
            PatternSpec::Classical(p) | PatternSpec::Anchored(p) => Some(p),
            PatternSpec::BarredPrefix { body, .. } => Some(body),
            PatternSpec::Special(_) => None,
        }
    }

    pub fn barred_position(&self) -> Option<usize> {
        match self {
            PatternSpec::BarredPrefix { bar, .. } => Some(*bar),
            _ => None,
        }
    }

    /// For a barred pattern: the body with the barred entry deleted, rescaled.
    pub fn reduced(&self) -> Option<Permutation> {
        let PatternSpec::BarredPrefix { body, bar } = self else {
            return None;
        };
        let kept: Vec<u32> = body
            .values()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != *bar)
            .map(|(_, &v)| v)
            .collect();
        Some(Permutation::from_vec_unchecked(standardize(&kept)))
    }

    pub fn applies_to(&self, host: HostKind) -> bool {
        match self {
            PatternSpec::Classical(_) => true,
            PatternSpec::Anchored(_) | PatternSpec::BarredPrefix { .. } => {
                host == HostKind::Permutation
            }
            PatternSpec::Special(_) => host == HostKind::Partial,
        }
    }

    /// Whether `host` contains this pattern (for barred patterns: fails to avoid it).
    pub fn is_contained_in<H: Letters>(&self, host: &H) -> Result<bool> {
        if !self.applies_to(H::HOST) {
            return Err(Error::InapplicablePattern {
                pattern: self.to_string(),
                host: H::HOST.name(),
            });
        }
        let letters = host.letters();
        if self.is_anchored() && letters.is_empty() {
            return Err(Error::EmptyHost);
        }
        Ok(match self {
            PatternSpec::Classical(p) => matcher::contains(letters, p.values(), false),
            PatternSpec::Anchored(p) => matcher::contains(letters, p.values(), true),
            PatternSpec::BarredPrefix { body, bar } => {
                let reduced = self.reduced().expect("barred");
                matcher::find_unextendable(letters, body.values(), *bar, reduced.values()).is_some()
            }
            PatternSpec::Special(SpecialPattern::Gap312) => {
                matcher::find_gap_312(letters).is_some()
            }
            PatternSpec::Special(SpecialPattern::Adjacent213) => {
                matcher::find_adjacent_213(letters).is_some()
            }
        })
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSpec::Classical(p) => write!(f, "{p}"),
            PatternSpec::Anchored(p) => write!(f, "[{p}"),
            PatternSpec::BarredPrefix { body, bar } => {
                f.write_str("[")?;
                for (i, v) in body.values().iter().enumerate() {
                    if i == *bar {
                        f.write_str("^")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            PatternSpec::Special(SpecialPattern::Gap312) => f.write_str("31|2"),
            PatternSpec::Special(SpecialPattern::Adjacent213) => f.write_str("2~13~"),
        }
    }
}

impl FromStr for PatternSpec {
    type Err = Error;

    /// `2314`, `[132`, `[24^13`, `31|2`, `2~13~`.
    fn from_str(s: &str) -> Result<Self> {
        let malformed = |reason: &str| Error::MalformedPattern(format!("{s:?}: {reason}"));
        let t = s.trim();
        match t {
            "31|2" => return Ok(PatternSpec::Special(SpecialPattern::Gap312)),
            "2~13~" => return Ok(PatternSpec::Special(SpecialPattern::Adjacent213)),
            _ => {}
        }
        let (anchored, rest) = match t.strip_prefix('[') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let mut digits = Vec::new();
        let mut bars = Vec::new();
        for c in rest.chars() {
            match c {
                '^' => bars.push(digits.len()),
                c => digits.push(
                    c.to_digit(10)
                        .ok_or_else(|| malformed(&format!("unexpected character {c:?}")))?,
                ),
            }
        }
        if digits.is_empty() {
            return Err(malformed("no pattern letters"));
        }
        let body = Permutation::new(digits).map_err(|e| malformed(&e.to_string()))?;
        match (anchored, bars.as_slice()) {
            (false, []) => Ok(PatternSpec::Classical(body)),
            (true, []) => PatternSpec::anchored(body),
            (true, [bar]) => PatternSpec::barred_prefix(body, *bar),
            (false, _) => Err(malformed("barred patterns must be prefix-anchored")),
            (true, _) => Err(malformed("at most one barred entry is supported")),
        }
    }
}

/// `host` contains a subsequence order-isomorphic to `pattern`.
pub fn contains_classical<H: Letters>(host: &H, pattern: &Permutation) -> bool {
    matcher::contains(host.letters(), pattern.values(), false)
}

/// Witness indices (0-based, strictly increasing) of a classical occurrence.
pub fn find_occurrence<H: Letters>(host: &H, pattern: &Permutation) -> Option<Vec<usize>> {
    matcher::find(host.letters(), pattern.values(), false)
}

/// An occurrence of `pattern` that uses the first element of `host`.
pub fn contains_anchored(host: &Permutation, pattern: &Permutation) -> Result<bool> {
    if host.is_empty() {
        return Err(Error::EmptyHost);
    }
    Ok(matcher::contains(host.values(), pattern.values(), true))
}

pub fn avoids_barred_prefix(host: &Permutation, spec: &PatternSpec) -> Result<bool> {
    if spec.kind() != PatternKind::BarredPrefix {
        return Err(Error::MalformedPattern(format!(
            "{spec} is not a barred prefix pattern"
        )));
    }
    Ok(!spec.is_contained_in(host)?)
}

/// The `31|2` pattern.
pub fn contains_gap_312(host: &PartialPermutation) -> bool {
    matcher::find_gap_312(host.values()).is_some()
}

/// The `2~13~` pattern.
pub fn contains_adjacent_213(host: &PartialPermutation) -> bool {
    matcher::find_adjacent_213(host.values()).is_some()
}

pub fn avoids_all<H: Letters>(host: &H, specs: &[PatternSpec]) -> Result<bool> {
    for spec in specs {
        if spec.is_contained_in(host)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first pattern of `specs` that `host` does not avoid.
pub fn first_contained<'a, H: Letters>(
    host: &H,
    specs: &'a [PatternSpec],
) -> Result<Option<&'a PatternSpec>> {
    for spec in specs {
        if spec.is_contained_in(host)? {
            return Ok(Some(spec));
        }
    }
    Ok(None)
}
