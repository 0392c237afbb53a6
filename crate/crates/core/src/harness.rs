//! Exhaustive enumeration: counting sortable permutations, distribution
//! tables, comparison against reference sequences, and the cross-validation
//! sweeps for characterizations and bijections.
//!
//! Work over `S_n` is split into `n` classes by first element and run on a
//! rayon pool; results are merged in class order so output never depends on
//! scheduling.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bijection::{
    alpha, alpha_inverse, classify_triangle, hat_machine, inverse_out_hat, is_triangle_member, phi,
    phi_inverse, triangle_delete, triangle_delete_inverse, triangle_swap, TriangleSubset,
};
use crate::characterize::{
    four_conditions_123_312, sortable_by_blocks_132_231, sortable_by_patterns, PairId,
};
use crate::error::{Error, Result};
use crate::machine::{is_sortable, out_letters, out_t, MachineConfig};
use crate::pattern::matcher;
use crate::perm::{partial_permutations, permutations, permutations_starting_with, Permutation};
use crate::sequences::{binomial, catalan, catalan_triangle, sequence_value, SequenceName};

/// Default bound for the equivalence and bijection sweeps.
pub const DEFAULT_SWEEP_MAX: usize = 9;

/// Largest `n` for which [`is_out_bijective`] is supported.
pub const OUT_BIJECTIVE_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HarnessConfig {
    /// Largest `n` a counting call may enumerate.
    pub max_n: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            max_n: 11,
            workers: None,
        }
    }
}

impl HarnessConfig {
    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::AboveMaximum { n, max: self.max_n });
        }
        Ok(())
    }

    fn install<R: Send>(&self, job: impl FnOnce() -> R + Send) -> R {
        match self.workers {
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .expect("thread pool")
                .install(job),
            None => job(),
        }
    }

    /// Apply `f` to each first-element class of `S_n` in parallel; results come back in class order.
    fn by_class<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Box<dyn Iterator<Item = Permutation>>) -> R + Sync + Send,
    {
        self.install(|| {
            if n == 0 {
                return vec![f(Box::new(permutations(0)))];
            }
            (1..=n as u32)
                .into_par_iter()
                .map(|k| f(Box::new(permutations_starting_with(n, k))))
                .collect()
        })
    }
}

pub fn count_sortable(machine: &MachineConfig, n: usize, cfg: &HarnessConfig) -> Result<u64> {
    Ok(count_by_first(machine, n, cfg)?.iter().sum())
}

/// Entry `k - 1` counts the sortable permutations of length `n` starting with `k`.
pub fn count_by_first(machine: &MachineConfig, n: usize, cfg: &HarnessConfig) -> Result<Vec<u64>> {
    cfg.check(n)?;
    Ok(cfg.by_class(n, |class| {
        class.filter(|p| is_sortable(p, machine)).count() as u64
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub machine: Vec<String>,
    pub by_first: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<SequenceName>,
    pub offset: usize,
    pub rows: Vec<CountRow>,
}

/// Counts for `n = 1..=n_max`, optionally split by first element.
pub fn count_table(
    machine: &MachineConfig,
    n_max: usize,
    by_first: bool,
    cfg: &HarnessConfig,
) -> Result<CountTable> {
    cfg.check(n_max)?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let counts = count_by_first(machine, n, cfg)?;
        if by_first {
            rows.extend(counts.iter().enumerate().map(|(i, &count)| CountRow {
                n,
                k: Some(i + 1),
                count,
                expected: None,
                verdict: None,
            }));
        } else {
            rows.push(CountRow {
                n,
                k: None,
                count: counts.iter().sum(),
                expected: None,
                verdict: None,
            });
        }
    }
    Ok(CountTable {
        machine: machine.literals(),
        by_first,
        reference: None,
        offset: 0,
        rows,
    })
}

impl CountTable {
    /// Attach a reference sequence: row `n` is compared with term `n - offset`
    /// (or with `a_n^k` for the two-dimensional Catalan triangle).
    pub fn with_reference(mut self, reference: SequenceName, offset: usize) -> Result<Self> {
        if reference.is_two_dimensional() != self.by_first {
            return Err(Error::Precondition(format!(
                "{reference} needs a {} table",
                if reference.is_two_dimensional() {
                    "by-first"
                } else {
                    "plain"
                }
            )));
        }
        for row in &mut self.rows {
            let index = row.n.checked_sub(offset).ok_or(Error::SequenceRange {
                sequence: reference.as_str(),
                index: 0,
            })?;
            let expected = sequence_value(reference, index, row.k)?;
            row.expected = Some(expected);
            row.verdict = Some(if expected == row.count {
                Verdict::Match
            } else {
                Verdict::Mismatch
            });
        }
        self.reference = Some(reference);
        self.offset = offset;
        Ok(self)
    }

    pub fn all_match(&self) -> bool {
        self.reference.is_some() && self.rows.iter().all(|r| r.verdict == Some(Verdict::Match))
    }

    /// Sum of the by-first rows for each `n`, as `(n, total)`.
    pub fn row_sums(&self) -> Vec<(usize, u64)> {
        let mut sums: Vec<(usize, u64)> = Vec::new();
        for row in &self.rows {
            match sums.last_mut() {
                Some((n, total)) if *n == row.n => *total += row.count,
                _ => sums.push((row.n, row.count)),
            }
        }
        sums
    }

    pub fn get(&self, n: usize, k: Option<usize>) -> Option<u64> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.k == k)
            .map(|r| r.count)
    }

    /// CSV with header `n,k,count,reference,verdict` (`k` only for by-first tables).
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let reference = self.reference.map(|r| r.as_str()).unwrap_or("");
        let write = |w: &mut csv::Writer<Vec<u8>>, fields: &[String]| {
            w.write_record(fields).expect("writing to memory");
        };
        let mut header = vec!["n".to_string()];
        if self.by_first {
            header.push("k".into());
        }
        header.extend(["count", "reference", "verdict"].map(String::from));
        write(&mut w, &header);
        for row in &self.rows {
            let mut fields = vec![row.n.to_string()];
            if let Some(k) = row.k {
                fields.push(k.to_string());
            }
            fields.push(row.count.to_string());
            fields.push(reference.to_string());
            fields.push(row.verdict.map(Verdict::as_str).unwrap_or("").to_string());
            write(&mut w, &fields);
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
    }
}

/// Attach `reference` to `table` and report per-row verdicts.
pub fn compare_sequence(
    table: &CountTable,
    reference: SequenceName,
    offset: usize,
) -> Result<CountTable> {
    table.clone().with_reference(reference, offset)
}

/// The reference sequence counting the sortable permutations of a studied
/// pair, with the offset relating length `n` to the sequence index.
pub fn known_reference(pair: PairId, by_first: bool) -> Option<(SequenceName, usize)> {
    match (pair, by_first) {
        (PairId::P123_132, true) => Some((SequenceName::CatalanTriangle, 0)),
        (_, true) => None,
        (PairId::P132_231, false) => Some((SequenceName::LargeSchroeder, 1)),
        (PairId::P123_312, false) => Some((SequenceName::BinomialTransformCatalan, 1)),
        (_, false) => Some((SequenceName::Catalan, 0)),
    }
}

/// Offset used with `reference` when none is given: `|Sort_n|` is term `n - 1`
/// of the Schröder and binomial-transform sequences and term `n` of Catalan.
pub fn default_offset(reference: SequenceName) -> usize {
    match reference {
        SequenceName::LargeSchroeder | SequenceName::BinomialTransformCatalan => 1,
        SequenceName::Catalan | SequenceName::CatalanTriangle => 0,
    }
}

/// `out^T` hits all `n!` permutations of length `n`.
pub fn is_out_bijective(machine: &MachineConfig, n: usize) -> Result<bool> {
    if n > OUT_BIJECTIVE_MAX {
        return Err(Error::AboveMaximum {
            n,
            max: OUT_BIJECTIVE_MAX,
        });
    }
    let mut seen = HashSet::new();
    Ok(permutations(n).all(|p| seen.insert(out_letters(p.values(), machine))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthCheck {
    pub n: usize,
    /// Number of objects examined at this length.
    pub checked: u64,
    pub passed: bool,
}

/// One characterization predicate compared against simulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub predicate: &'static str,
    pub lengths: Vec<LengthCheck>,
    pub mismatches: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterizationReport {
    pub pair: PairId,
    pub n_max: usize,
    /// Number of sortable permutations per length, by simulation.
    pub sortable_counts: Vec<u64>,
    pub predicates: Vec<PredicateReport>,
}

impl CharacterizationReport {
    pub fn passed(&self) -> bool {
        self.predicates.iter().all(|p| p.mismatches == 0)
    }
}

type Predicate = fn(&Permutation) -> bool;

fn alpha_predicate(p: &Permutation) -> bool {
    match alpha(p) {
        Ok(a) => {
            matcher::find_gap_312(a.values()).is_none()
                && matcher::find_adjacent_213(a.values()).is_none()
        }
        Err(_) => false,
    }
}

fn predicates_for(pair: PairId) -> Result<Vec<(&'static str, Predicate)>> {
    let patterns: Predicate = match pair {
        PairId::P132_231 => |p| sortable_by_patterns(p, PairId::P132_231).expect("characterized"),
        PairId::P123_132 => |p| sortable_by_patterns(p, PairId::P123_132).expect("characterized"),
        PairId::P123_312 => |p| sortable_by_patterns(p, PairId::P123_312).expect("characterized"),
        _ => return Err(Error::NoCharacterization(pair.to_string())),
    };
    let mut out: Vec<(&'static str, Predicate)> = vec![("patterns", patterns)];
    match pair {
        PairId::P132_231 => out.push(("blocks", sortable_by_blocks_132_231)),
        PairId::P123_312 => {
            out.push(("four-conditions", four_conditions_123_312));
            out.push(("alpha", alpha_predicate));
        }
        _ => {}
    }
    Ok(out)
}

/// Compare simulation with every characterization of `pair` over `S_1..S_{n_max}`.
pub fn verify_characterization(
    pair: PairId,
    n_max: usize,
    cfg: &HarnessConfig,
) -> Result<CharacterizationReport> {
    cfg.check(n_max)?;
    let predicates = predicates_for(pair)?;
    let machine = pair.machine();
    let mut reports: Vec<PredicateReport> = predicates
        .iter()
        .map(|(name, _)| PredicateReport {
            predicate: name,
            lengths: Vec::new(),
            mismatches: 0,
            counterexample: None,
        })
        .collect();
    let mut sortable_counts = Vec::new();
    for n in 1..=n_max {
        // per class: sortable count, then (mismatches, first counterexample) per predicate
        let classes = cfg.by_class(n, |class| {
            let mut sortable = 0u64;
            let mut checked = 0u64;
            let mut found: Vec<(u64, Option<Permutation>)> = vec![(0, None); predicates.len()];
            for p in class {
                checked += 1;
                let sim = is_sortable(&p, &machine);
                sortable += sim as u64;
                for ((_, pred), slot) in predicates.iter().zip(&mut found) {
                    if pred(&p) != sim {
                        slot.0 += 1;
                        slot.1.get_or_insert_with(|| p.clone());
                    }
                }
            }
            (sortable, checked, found)
        });
        sortable_counts.push(classes.iter().map(|c| c.0).sum());
        let checked: u64 = classes.iter().map(|c| c.1).sum();
        for (i, report) in reports.iter_mut().enumerate() {
            let mismatches: u64 = classes.iter().map(|c| c.2[i].0).sum();
            report.mismatches += mismatches;
            if report.counterexample.is_none() {
                report.counterexample = classes
                    .iter()
                    .find_map(|c| c.2[i].1.as_ref())
                    .map(|p| p.to_string());
            }
            report.lengths.push(LengthCheck {
                n,
                checked,
                passed: mismatches == 0,
            });
        }
    }
    Ok(CharacterizationReport {
        pair,
        n_max,
        sortable_counts,
        predicates: reports,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BijectionKind {
    HatRoundtrip,
    Alpha,
    Phi,
    Triangle,
}

impl BijectionKind {
    pub const ALL: [BijectionKind; 4] = [
        BijectionKind::HatRoundtrip,
        BijectionKind::Alpha,
        BijectionKind::Phi,
        BijectionKind::Triangle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BijectionKind::HatRoundtrip => "hat-roundtrip",
            BijectionKind::Alpha => "alpha",
            BijectionKind::Phi => "phi",
            BijectionKind::Triangle => "triangle",
        }
    }
}

impl fmt::Display for BijectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BijectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BijectionKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parse {
                what: "bijection",
                input: s.to_string(),
                reason: "expected hat-roundtrip, alpha, phi or triangle".into(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub kind: BijectionKind,
    pub n_max: usize,
    pub lengths: Vec<LengthCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.lengths.iter().all(|l| l.passed)
    }
}

/// Outcome of checking one length: objects examined, first failure.
type LengthOutcome = (u64, Option<String>);

/// Check the bijection `kind` for every length up to `n_max`.
pub fn verify_bijection(
    kind: BijectionKind,
    n_max: usize,
    cfg: &HarnessConfig,
) -> Result<BijectionReport> {
    cfg.check(n_max)?;
    let mut lengths = Vec::new();
    let mut counterexample = None;
    let start = match kind {
        BijectionKind::Phi => 0,
        BijectionKind::Triangle => 2,
        _ => 1,
    };
    for n in start..=n_max {
        let (checked, failure) = match kind {
            BijectionKind::HatRoundtrip => check_hat(n, cfg),
            BijectionKind::Alpha => check_alpha(n, cfg),
            BijectionKind::Phi => check_phi(n as u32),
            BijectionKind::Triangle => check_triangle(n),
        };
        lengths.push(LengthCheck {
            n,
            checked,
            passed: failure.is_none(),
        });
        if counterexample.is_none() {
            counterexample = failure;
        }
    }
    Ok(BijectionReport {
        kind,
        n_max,
        lengths,
        counterexample,
    })
}

fn first_failure(classes: Vec<LengthOutcome>) -> LengthOutcome {
    let checked = classes.iter().map(|c| c.0).sum();
    (checked, classes.into_iter().find_map(|c| c.1))
}

fn check_hat(n: usize, cfg: &HarnessConfig) -> LengthOutcome {
    let mut total = 0;
    for sigma in permutations(3) {
        let machine = hat_machine(&sigma).expect("length 3");
        let classes = cfg.by_class(n, |class| {
            let mut checked = 0;
            for p in class {
                checked += 1;
                let out = out_t(&p, &machine);
                let back = inverse_out_hat(&out, &sigma).expect("length 3");
                if back != p {
                    return (
                        checked,
                        Some(format!("σ={sigma}: inverse(out({p})) = {back}")),
                    );
                }
                let forward = out_t(&inverse_out_hat(&p, &sigma).expect("length 3"), &machine);
                if forward != p {
                    return (
                        checked,
                        Some(format!("σ={sigma}: out(inverse({p})) = {forward}")),
                    );
                }
            }
            (checked, None)
        });
        let (checked, failure) = first_failure(classes);
        total += checked;
        if failure.is_some() {
            return (total, failure);
        }
        let mut image = HashSet::new();
        for p in permutations(n) {
            image.insert(out_letters(p.values(), &machine));
        }
        if image.len() as u64 != factorial(n) {
            return (
                total,
                Some(format!(
                    "σ={sigma}: image of S_{n} has {} elements",
                    image.len()
                )),
            );
        }
    }
    (total, None)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_alpha(n: usize, cfg: &HarnessConfig) -> LengthOutcome {
    let classes = cfg.by_class(n, |class| {
        let mut checked = 0;
        let mut domain = 0u64;
        for p in class {
            checked += 1;
            if let Ok(a) = alpha(&p) {
                domain += 1;
                let back = alpha_inverse(&a);
                if back != p {
                    return (
                        checked,
                        domain,
                        Some(format!("alpha_inverse(alpha({p})) = {back}")),
                    );
                }
            }
        }
        (checked, domain, None)
    });
    let checked: u64 = classes.iter().map(|c| c.0).sum();
    let domain: u64 = classes.iter().map(|c| c.1).sum();
    if let Some(f) = classes.into_iter().find_map(|c| c.2) {
        return (checked, Some(f));
    }
    let mut codomain = 0u64;
    for a in partial_permutations(n as u32 - 1) {
        codomain += 1;
        let p = alpha_inverse(&a);
        match alpha(&p) {
            Ok(b) if b == a => {}
            Ok(b) => return (checked, Some(format!("alpha(alpha_inverse({a})) = {b}"))),
            Err(e) => return (checked, Some(format!("alpha_inverse({a}) = {p}: {e}"))),
        }
    }
    let m = n as u64 - 1;
    let expected: u64 = (0..=m)
        .map(|k| binomial(m, k).expect("small") * factorial(k as usize))
        .sum();
    if domain != codomain || domain != expected {
        return (
            checked,
            Some(format!(
                "n={n}: |Av([132])| = {domain}, |partial permutations of {m}| = {codomain}, formula {expected}"
            )),
        );
    }
    (checked, None)
}

fn check_phi(n: u32) -> LengthOutcome {
    let avoids_213 = |v: &[u32]| !matcher::contains(v, &[2, 1, 3], false);
    let mut checked = 0;
    let mut image = HashSet::new();
    for a in partial_permutations(n) {
        if matcher::find_gap_312(a.values()).is_some()
            || matcher::find_adjacent_213(a.values()).is_some()
        {
            continue;
        }
        checked += 1;
        let b = phi(&a).expect("domain member");
        if !avoids_213(b.values()) {
            return (checked, Some(format!("phi({a}) = {b} contains 213")));
        }
        match phi_inverse(&b) {
            Ok(c) if c == a => {}
            Ok(c) => return (checked, Some(format!("phi_inverse(phi({a})) = {c}"))),
            Err(e) => return (checked, Some(format!("phi_inverse({b}): {e}"))),
        }
        if !image.insert(b.clone()) {
            return (checked, Some(format!("phi is not injective at {a} -> {b}")));
        }
    }
    let mut codomain = 0u64;
    for b in partial_permutations(n) {
        if !avoids_213(b.values()) {
            continue;
        }
        codomain += 1;
        if !image.contains(&b) {
            return (checked, Some(format!("{b} is not in the image of phi")));
        }
    }
    let expected = binomial_transform(n as u64);
    if codomain != expected {
        return (
            checked,
            Some(format!("|A_{n}(213)| = {codomain}, expected {expected}")),
        );
    }
    (checked, None)
}

fn binomial_transform(n: u64) -> u64 {
    (0..=n)
        .map(|k| binomial(n, k).expect("small") * catalan(k).expect("small"))
        .sum()
}

/// Count the 213-avoiding partial permutations of `n`.
pub fn count_partial_213_avoiders(n: u32) -> u64 {
    partial_permutations(n)
        .filter(|a| !matcher::contains(a.values(), &[2, 1, 3], false))
        .count() as u64
}

fn check_triangle(n: usize) -> LengthOutcome {
    let members = |n: usize, k: u32| -> Vec<Permutation> {
        if n == 0 || k as usize > n {
            return Vec::new();
        }
        permutations_starting_with(n, k)
            .filter(is_triangle_member)
            .collect()
    };
    let a = |n: usize, k: usize| -> u64 {
        if n == 0 || k == 0 || k > n {
            0
        } else {
            catalan_triangle(n, k).expect("within table")
        }
    };
    let mut checked = 0;
    for k in 2..=n as u32 {
        let all = members(n, k);
        checked += all.len() as u64;
        let mut a1 = Vec::new();
        let mut a2 = Vec::new();
        for p in &all {
            match classify_triangle(p).expect("member").class {
                TriangleSubset::A1 => a1.push(p.clone()),
                TriangleSubset::A2 => a2.push(p.clone()),
            }
        }
        let ku = k as usize;
        if a1.len() as u64 != a(n, ku - 1) || a2.len() as u64 != a(n - 1, ku) {
            return (
                checked,
                Some(format!(
                    "n={n}, k={k}: |A1| = {}, |A2| = {}, expected {} and {}",
                    a1.len(),
                    a2.len(),
                    a(n, ku - 1),
                    a(n - 1, ku)
                )),
            );
        }
        if all.len() as u64 != a(n, ku) {
            return (
                checked,
                Some(format!("n={n}, k={k}: |A_n(k)| = {}", all.len())),
            );
        }
        let mut swapped: Vec<Permutation> = a1
            .iter()
            .map(|p| triangle_swap(p).expect("A1 member"))
            .collect();
        swapped.sort();
        if swapped != members(n, k - 1) {
            return (
                checked,
                Some(format!("n={n}, k={k}: swap image differs from A_n(k-1)")),
            );
        }
        let mut deleted = Vec::new();
        for p in &a2 {
            let q = triangle_delete(p).expect("A2 member");
            match triangle_delete_inverse(&q) {
                Ok(r) if &r == p => {}
                Ok(r) => return (checked, Some(format!("delete_inverse(delete({p})) = {r}"))),
                Err(e) => return (checked, Some(format!("delete_inverse({q}): {e}"))),
            }
            deleted.push(q);
        }
        deleted.sort();
        let target = members(n - 1, k);
        if deleted != target {
            return (
                checked,
                Some(format!(
                    "n={n}, k={k}: delete image differs from A_(n-1)(k)"
                )),
            );
        }
        for q in &target {
            let r = triangle_delete_inverse(q).expect("member");
            if triangle_delete(&r).ok().as_ref() != Some(q) {
                return (checked, Some(format!("delete(delete_inverse({q})) = {r}")));
            }
        }
    }
    (checked, None)
}
