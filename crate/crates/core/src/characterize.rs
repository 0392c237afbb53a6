//! Non-simulation criteria for sortability and the structural claims about
//! `out^T` for the `(132, σ)` and `(312, σ)` families.
//!
//! Each predicate here is independent of [`crate::machine::is_sortable`] so
//! the two can be cross-checked exhaustively by the harness.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::machine::{out_letters, run_stack, MachineConfig, StackOp};
use crate::pattern::{self, matcher, PatternSpec};
use crate::perm::{BlockLabels, Decomposition, DecompositionKind, Permutation};

/// The pattern pairs studied as first-stack restrictions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairId {
    P132_231,
    P123_213,
    P132_312,
    P231_321,
    P123_132,
    P123_312,
}

impl PairId {
    pub const ALL: [PairId; 6] = [
        PairId::P132_231,
        PairId::P123_213,
        PairId::P132_312,
        PairId::P231_321,
        PairId::P123_132,
        PairId::P123_312,
    ];

    /// Pairs with a pattern characterization of their sortable permutations.
    pub const CHARACTERIZED: [PairId; 3] = [PairId::P132_231, PairId::P123_132, PairId::P123_312];

    pub fn literals(self) -> (&'static str, &'static str) {
        match self {
            PairId::P132_231 => ("132", "231"),
            PairId::P123_213 => ("123", "213"),
            PairId::P132_312 => ("132", "312"),
            PairId::P231_321 => ("231", "321"),
            PairId::P123_132 => ("123", "132"),
            PairId::P123_312 => ("123", "312"),
        }
    }

    pub fn machine(self) -> MachineConfig {
        let (a, b) = self.literals();
        MachineConfig::pair(a, b).expect("built-in pairs are valid")
    }

    /// The avoidance set characterizing `Sort(pair)`, when one is known.
    pub fn characterizing_patterns(self) -> Option<Vec<PatternSpec>> {
        let lits: &[&str] = match self {
            PairId::P132_231 => &["1324", "2314"],
            PairId::P123_132 => &["2314", "3214", "4213", "[24^13"],
            PairId::P123_312 => &["[132", "[42531", "[421^53"],
            _ => return None,
        };
        Some(
            lits.iter()
                .map(|l| l.parse().expect("built-in pattern literals parse"))
                .collect(),
        )
    }

    pub fn from_machine(machine: &MachineConfig) -> Option<PairId> {
        PairId::ALL.into_iter().find(|p| {
            let own = p.machine();
            own.patterns().len() == machine.patterns().len()
                && own
                    .patterns()
                    .iter()
                    .all(|q| machine.patterns().contains(q))
        })
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.literals();
        write!(f, "{a},{b}")
    }
}

impl FromStr for PairId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let machine: MachineConfig = s.parse()?;
        PairId::from_machine(&machine).ok_or_else(|| Error::Parse {
            what: "pattern pair",
            input: s.to_string(),
            reason: "not one of the studied pairs".into(),
        })
    }
}

impl Serialize for PairId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Sortability decided by the pair's avoidance characterization.
pub fn sortable_by_patterns(p: &Permutation, pair: PairId) -> Result<bool> {
    if p.is_empty() {
        return Ok(true);
    }
    let specs = pair
        .characterizing_patterns()
        .ok_or_else(|| Error::NoCharacterization(pair.to_string()))?;
    pattern::avoids_all(p, &specs)
}

/// The pattern of the pair's characterization that `p` contains, if any.
pub fn violated_pattern(p: &Permutation, pair: PairId) -> Result<Option<PatternSpec>> {
    if p.is_empty() {
        return Ok(None);
    }
    let specs = pair
        .characterizing_patterns()
        .ok_or_else(|| Error::NoCharacterization(pair.to_string()))?;
    Ok(pattern::first_contained(p, &specs)?.cloned())
}

/// Every ltr-min block avoids 213 and each block lies entirely above every
/// later one.
pub fn sortable_by_blocks_132_231(p: &Permutation) -> bool {
    let Ok(d) = p.decompose(DecompositionKind::LtrMin) else {
        return true;
    };
    let avoid_213 = d
        .blocks
        .iter()
        .all(|b| !matcher::contains(b, &[2, 1, 3], false));
    // empty blocks do not break the chain: compare consecutive nonempty ones
    let nonempty: Vec<&Vec<u32>> = d.blocks.iter().filter(|b| !b.is_empty()).collect();
    let ordered = nonempty
        .windows(2)
        .all(|w| w[0].iter().min().expect("nonempty") > w[1].iter().max().expect("nonempty"));
    avoid_213 && ordered
}

/// 2-3-1 across blocks: `z < x < y` with `x, y, z` in three strictly increasing blocks.
pub fn block_pattern_2_3_1(out: &[u32], labels: &BlockLabels) -> Result<bool> {
    let seq = labeled_sequence(out, labels)?;
    Ok(find_block_231(&seq, |bx, by, bz| bx < by && by < bz))
}

/// 2-31: `z < x < y` with `y, z` in one block strictly after the block of `x`.
pub fn block_pattern_2_31(out: &[u32], labels: &BlockLabels) -> Result<bool> {
    let seq = labeled_sequence(out, labels)?;
    Ok(find_block_231(&seq, |bx, by, bz| bx < by && by == bz))
}

/// The labeled letters of `out` in order, paired with their block.
fn labeled_sequence(out: &[u32], labels: &BlockLabels) -> Result<Vec<(u32, usize)>> {
    let mut seen = std::collections::HashSet::new();
    let mut seq = Vec::new();
    for &v in out {
        if !seen.insert(v) {
            return Err(Error::InconsistentLabeling(format!(
                "value {v} occurs twice"
            )));
        }
        if let Some(b) = labels.get(v) {
            seq.push((v, b));
        }
    }
    if let Some(v) = labels.labeled_values().find(|v| !seen.contains(v)) {
        return Err(Error::InconsistentLabeling(format!(
            "labeled value {v} is missing from the sequence"
        )));
    }
    Ok(seq)
}

fn find_block_231(seq: &[(u32, usize)], blocks_ok: impl Fn(usize, usize, usize) -> bool) -> bool {
    let n = seq.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let ((x, bx), (y, by), (z, bz)) = (seq[i], seq[j], seq[k]);
                if z < x && x < y && blocks_ok(bx, by, bz) {
                    return true;
                }
            }
        }
    }
    false
}

/// The four conditions characterizing `(123,312)`-sortable permutations,
/// evaluated separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FourConditions {
    /// ltr-max pivots are `n-t+1, ..., n`.
    pub pivots_top_values: bool,
    pub blocks_avoid_213: bool,
    pub no_2_3_1: bool,
    pub no_2_31: bool,
}

impl FourConditions {
    pub fn evaluate(p: &Permutation) -> FourConditions {
        let Ok(d) = p.decompose(DecompositionKind::LtrMax) else {
            return FourConditions {
                pivots_top_values: true,
                blocks_avoid_213: true,
                no_2_3_1: true,
                no_2_31: true,
            };
        };
        let n = p.len() as u32;
        let t = d.len() as u32;
        let pivots_top_values = d.pivots.iter().copied().eq(n - t + 1..=n);
        let blocks_avoid_213 = d
            .blocks
            .iter()
            .all(|b| !matcher::contains(b, &[2, 1, 3], false));
        let out = out_letters(p.values(), &PairId::P123_312.machine());
        let labels = d.labels();
        let no_2_3_1 = !block_pattern_2_3_1(&out, &labels).expect("labels come from p");
        let no_2_31 = !block_pattern_2_31(&out, &labels).expect("labels come from p");
        FourConditions {
            pivots_top_values,
            blocks_avoid_213,
            no_2_3_1,
            no_2_31,
        }
    }

    pub fn all(&self) -> bool {
        self.pivots_top_values && self.blocks_avoid_213 && self.no_2_3_1 && self.no_2_31
    }

    /// Name of the first failing condition.
    pub fn first_failure(&self) -> Option<&'static str> {
        [
            (
                self.pivots_top_values,
                "ltr-max pivots are not the top values",
            ),
            (self.blocks_avoid_213, "a ltr-max block contains 213"),
            (self.no_2_3_1, "output contains 2-3-1"),
            (self.no_2_31, "output contains 2-31"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, why)| why)
    }
}

pub fn four_conditions_123_312(p: &Permutation) -> bool {
    FourConditions::evaluate(p).all()
}

/// Every later ltr-max block lies entirely above or entirely below each
/// element of every earlier block.
pub fn bounded_blocks_lemma_check(p: &Permutation) -> bool {
    let Ok(d) = p.decompose(DecompositionKind::LtrMax) else {
        return true;
    };
    d.blocks.iter().enumerate().all(|(i, earlier)| {
        d.blocks[i + 1..].iter().all(|later| {
            earlier
                .iter()
                .all(|&x| later.iter().all(|&y| y > x) || later.iter().all(|&y| y < x))
        })
    })
}

/// Which structural theorem a machine `{head, σ}` falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `(132, σ)` with `σ` ending in a descent; ltr-min decomposition.
    Min132,
    /// `(312, σ)` with `σ` ending in an ascent; ltr-max decomposition.
    Max312,
}

impl Family {
    fn head(self) -> Permutation {
        match self {
            Family::Min132 => Permutation::from_vec_unchecked(vec![1, 3, 2]),
            Family::Max312 => Permutation::from_vec_unchecked(vec![3, 1, 2]),
        }
    }

    fn decomposition_kind(self) -> DecompositionKind {
        match self {
            Family::Min132 => DecompositionKind::LtrMin,
            Family::Max312 => DecompositionKind::LtrMax,
        }
    }
}

/// Claims about `out^{head,σ}(π) = B~_1 ... B~_t p_t ... p_1`.
///
/// Claims that do not apply (to the family, or to an unsortable input) are
/// reported as `true`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// Whenever a pivot is pushed it lands on exactly the earlier pivots.
    pub pivots_at_bottom: bool,
    /// The output is the blocks, each rearranged, followed by the pivots reversed.
    pub blocks_rearranged: bool,
    /// (132-family, sortable) every `B~_i` is decreasing.
    pub blocks_decreasing: bool,
    /// (132-family, sortable) `B_i > B_j` elementwise whenever `i < j`.
    pub blocks_ordered: bool,
    /// (312-family, sortable) the ltr-max pivots are `n-t+1, ..., n`.
    pub max_pivots_topmost: bool,
}

impl StructureReport {
    pub fn all_true(&self) -> bool {
        self.pivots_at_bottom
            && self.blocks_rearranged
            && self.blocks_decreasing
            && self.blocks_ordered
            && self.max_pivots_topmost
    }
}

pub fn structure_report(
    p: &Permutation,
    family: Family,
    sigma: &Permutation,
) -> Result<StructureReport> {
    let s = sigma.values();
    if s.len() < 3 {
        return Err(Error::Precondition(format!(
            "σ = {sigma} must have length at least 3"
        )));
    }
    let tail_descends = s[s.len() - 2] > s[s.len() - 1];
    match family {
        Family::Min132 if !tail_descends => {
            return Err(Error::Precondition(format!(
                "σ = {sigma} must end in a descent for the (132, σ) family"
            )))
        }
        Family::Max312 if tail_descends => {
            return Err(Error::Precondition(format!(
                "σ = {sigma} must end in an ascent for the (312, σ) family"
            )))
        }
        _ => {}
    }
    let machine = MachineConfig::new([family.head(), sigma.clone()])?;
    let Ok(d) = p.decompose(family.decomposition_kind()) else {
        return Ok(StructureReport {
            pivots_at_bottom: true,
            blocks_rearranged: true,
            blocks_decreasing: true,
            blocks_ordered: true,
            max_pivots_topmost: true,
        });
    };
    let (out, trace) = run_stack(p, &machine);
    let out = out.values();

    let mut pivots_at_bottom = true;
    let mut pushed_pivots = 0;
    for (op, state) in trace.operations.iter().zip(&trace.states[1..]) {
        if *op != StackOp::Push
            || state.stack[0] != d.pivots.get(pushed_pivots).copied().unwrap_or(0)
        {
            continue;
        }
        pushed_pivots += 1;
        let expected = d.pivots[..pushed_pivots].iter().rev();
        pivots_at_bottom &= state.stack.iter().eq(expected);
    }
    pivots_at_bottom &= pushed_pivots == d.len();

    let blocks_rearranged = shape_matches(out, &d);
    let sortable = !matcher::contains(out, &[2, 3, 1], false);
    let (mut blocks_decreasing, mut blocks_ordered, mut max_pivots_topmost) = (true, true, true);
    if sortable && blocks_rearranged {
        match family {
            Family::Min132 => {
                let mut offset = 0;
                for b in &d.blocks {
                    let segment = &out[offset..offset + b.len()];
                    blocks_decreasing &= segment.windows(2).all(|w| w[0] > w[1]);
                    offset += b.len();
                }
                blocks_ordered = d.blocks.iter().enumerate().all(|(i, earlier)| {
                    d.blocks[i + 1..]
                        .iter()
                        .all(|later| earlier.iter().all(|x| later.iter().all(|y| x > y)))
                });
            }
            Family::Max312 => {
                let n = p.len() as u32;
                let t = d.len() as u32;
                max_pivots_topmost = d.pivots.iter().copied().eq(n - t + 1..=n);
            }
        }
    }
    Ok(StructureReport {
        pivots_at_bottom,
        blocks_rearranged,
        blocks_decreasing,
        blocks_ordered,
        max_pivots_topmost,
    })
}

/// `out` is `B~_1 ... B~_t` (each a rearrangement of `B_i`) then the pivots in reverse.
fn shape_matches(out: &[u32], d: &Decomposition) -> bool {
    let mut offset = 0;
    for b in &d.blocks {
        let Some(segment) = out.get(offset..offset + b.len()) else {
            return false;
        };
        let mut seg = segment.to_vec();
        let mut blk = b.clone();
        seg.sort_unstable();
        blk.sort_unstable();
        if seg != blk {
            return false;
        }
        offset += b.len();
    }
    out[offset..].iter().eq(d.pivots.iter().rev())
}

/// The blocks of `out^T(p)` per the input decomposition: segment `i` of the
/// output holds the image of block `i`. `None` when the output does not have
/// the block shape.
pub fn output_blocks(out: &[u32], d: &Decomposition) -> Option<Vec<Vec<u32>>> {
    if !shape_matches(out, d) {
        return None;
    }
    let mut offset = 0;
    Some(
        d.blocks
            .iter()
            .map(|b| {
                let seg = out[offset..offset + b.len()].to_vec();
                offset += b.len();
                seg
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{is_sortable, out_t};
    use crate::perm::permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn pair_parsing() {
        assert_eq!("123,312".parse::<PairId>().unwrap(), PairId::P123_312);
        assert_eq!("312,123".parse::<PairId>().unwrap(), PairId::P123_312);
        assert!("12,21".parse::<PairId>().is_err());
        assert_eq!(PairId::P132_231.to_string(), "132,231");
    }

    #[test]
    fn pattern_examples() {
        assert!(sortable_by_patterns(&p("231"), PairId::P132_231).unwrap());
        assert!(!sortable_by_patterns(&p("132"), PairId::P123_312).unwrap());
        assert!(!sortable_by_patterns(&p("2314"), PairId::P123_132).unwrap());
        assert_eq!(
            violated_pattern(&p("2314"), PairId::P123_132).unwrap(),
            Some("2314".parse().unwrap())
        );
        assert!(matches!(
            sortable_by_patterns(&p("231"), PairId::P123_213),
            Err(Error::NoCharacterization(_))
        ));
    }

    #[test]
    fn block_examples() {
        assert!(sortable_by_blocks_132_231(&p("231")));
        assert!(sortable_by_blocks_132_231(&Permutation::decreasing(6)));
        // 14253: ltr-min blocks [4,2,5,3] contains 213 (4 2 5)
        assert!(!sortable_by_blocks_132_231(&p("14253")));
        assert!(!is_sortable(&p("14253"), &PairId::P132_231.machine()));
    }

    #[test]
    fn four_condition_examples() {
        assert!(four_conditions_123_312(&p("231")));
        assert!(!four_conditions_123_312(&p("132")));
        assert!(!is_sortable(&p("132"), &PairId::P123_312.machine()));
        assert!(four_conditions_123_312(&Permutation::identity(7)));
    }

    #[test]
    fn block_pattern_examples() {
        let singles = BlockLabels::from_blocks(&[vec![3], vec![1], vec![], vec![2]]);
        assert!(!block_pattern_2_31(&[3, 1, 2], &singles).unwrap());

        let three = BlockLabels::from_blocks(&[vec![2], vec![3], vec![1]]);
        assert!(block_pattern_2_3_1(&[2, 3, 1], &three).unwrap());

        let two = BlockLabels::from_blocks(&[vec![2], vec![3, 1]]);
        assert!(block_pattern_2_31(&[2, 3, 1], &two).unwrap());
        assert!(!block_pattern_2_3_1(&[2, 3, 1], &two).unwrap());

        assert!(matches!(
            block_pattern_2_31(&[2, 3], &two),
            Err(Error::InconsistentLabeling(_))
        ));
        assert!(matches!(
            block_pattern_2_31(&[2, 3, 1, 3], &two),
            Err(Error::InconsistentLabeling(_))
        ));
    }

    #[test]
    fn bounded_blocks_examples() {
        assert!(bounded_blocks_lemma_check(&Permutation::identity(5)));
        assert!(bounded_blocks_lemma_check(&p("4213")));
        assert!(bounded_blocks_lemma_check(&p("41352")));
        // blocks [1,3] and [2,4]: the later block straddles 3
        assert!(!bounded_blocks_lemma_check(&p("513624")));
    }

    #[test]
    fn bounded_blocks_equivalent_to_no_2_31() {
        for n in 1..=8 {
            for perm in permutations(n) {
                let c = FourConditions::evaluate(&perm);
                if c.pivots_top_values && c.blocks_avoid_213 && c.no_2_3_1 {
                    assert_eq!(bounded_blocks_lemma_check(&perm), c.no_2_31, "{perm}");
                }
            }
        }
    }

    #[test]
    fn structure_report_preconditions() {
        assert!(structure_report(&p("21"), Family::Min132, &p("123")).is_err());
        assert!(structure_report(&p("21"), Family::Max312, &p("231")).is_err());
        assert!(structure_report(&p("21"), Family::Min132, &p("21")).is_err());
        assert!(structure_report(&p("21"), Family::Min132, &p("231")).is_ok());
    }

    #[test]
    fn structure_reports_hold_exhaustively() {
        let cases = [
            (Family::Min132, "231"),
            (Family::Min132, "321"),
            (Family::Max312, "123"),
            (Family::Max312, "213"),
        ];
        for (family, sigma) in cases {
            let sigma = p(sigma);
            for n in 0..=7 {
                for perm in permutations(n) {
                    let r = structure_report(&perm, family, &sigma).unwrap();
                    assert!(r.all_true(), "{perm} {family:?} {sigma}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn lemma_blocks_pass_through_as_a_12_stack() {
        let machine = PairId::P132_231.machine();
        let twelve: MachineConfig = "12".parse().unwrap();
        for n in 1..=8 {
            for perm in permutations(n) {
                let d = perm.decompose(DecompositionKind::LtrMin).unwrap();
                let out = out_t(&perm, &machine);
                let blocks = output_blocks(out.values(), &d).expect("block shape");
                for (b, image) in d.blocks.iter().zip(blocks) {
                    assert_eq!(out_letters(b, &twelve), image, "{perm}");
                }
            }
        }
    }

    #[test]
    fn sortable_123_312_blocks_decrease() {
        let machine = PairId::P123_312.machine();
        for n in 1..=8 {
            for perm in permutations(n) {
                if !is_sortable(&perm, &machine) {
                    continue;
                }
                let d = perm.decompose(DecompositionKind::LtrMax).unwrap();
                let out = out_t(&perm, &machine);
                for image in output_blocks(out.values(), &d).unwrap() {
                    assert!(image.windows(2).all(|w| w[0] > w[1]), "{perm}");
                }
            }
        }
    }
}
