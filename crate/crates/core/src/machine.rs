//! Greedy pattern-avoiding stacks and the two-stack sorting machine.
//!
//! A `T`-stack pushes the next input element unless doing so would make the
//! stack content, read from top to bottom, contain a pattern of `T`; in that
//! case (or when the input is exhausted) it pops the top to the output. The
//! machine follows the `T`-stack with a classical (21-avoiding) stack, so an
//! input is sortable exactly when `out^T` of it avoids 231.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::matcher;
use crate::perm::{format_letters, Letters, Permutation};

/// The set `T` of classical patterns the first stack must avoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MachineConfig {
    forbidden: Vec<Permutation>,
}

impl MachineConfig {
    pub fn new(patterns: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        let mut forbidden: Vec<Permutation> = Vec::new();
        for p in patterns {
            if p.len() < 2 {
                return Err(Error::InvalidMachine(format!(
                    "pattern {p:?} is shorter than 2"
                )));
            }
            if !forbidden.contains(&p) {
                forbidden.push(p);
            }
        }
        if forbidden.is_empty() {
            return Err(Error::InvalidMachine("no forbidden patterns".into()));
        }
        Ok(MachineConfig { forbidden })
    }

    /// The `(σ, τ)` machine.
    pub fn pair(sigma: &str, tau: &str) -> Result<Self> {
        MachineConfig::new([sigma.parse()?, tau.parse()?])
    }

    /// A classical stack, i.e. the 21-avoiding one.
    pub fn classical_stack() -> Self {
        MachineConfig {
            forbidden: vec![Permutation::from_vec_unchecked(vec![2, 1])],
        }
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.forbidden
    }

    pub fn literals(&self) -> Vec<String> {
        self.forbidden.iter().map(|p| p.to_string()).collect()
    }

    /// Would pushing `next` onto `stack` (top first) create a forbidden occurrence?
    /// The stack already avoids `T`, so any new occurrence starts at `next`.
    fn blocks_push(&self, candidate: &[u32]) -> bool {
        self.forbidden
            .iter()
            .any(|p| matcher::contains(candidate, p.values(), true))
    }
}

impl fmt::Display for MachineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literals().join(","))
    }
}

impl FromStr for MachineConfig {
    type Err = Error;

    /// Comma-separated classical pattern literals, e.g. `123,132`.
    fn from_str(s: &str) -> Result<Self> {
        let patterns = s
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<Permutation>()
                    .map_err(|e| Error::InvalidMachine(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        MachineConfig::new(patterns)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StackOp {
    Push,
    Pop,
}

impl StackOp {
    pub fn code(self) -> char {
        match self {
            StackOp::Push => 'P',
            StackOp::Pop => 'O',
        }
    }
}

/// A state of passing `(output so far; stack top-to-bottom; remaining input)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassingState {
    pub output: Vec<u32>,
    pub stack: Vec<u32>,
    pub input: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortingTrace {
    pub machine: MachineConfig,
    pub states: Vec<PassingState>,
    pub operations: Vec<StackOp>,
}

impl SortingTrace {
    pub fn operation_codes(&self) -> String {
        self.operations.iter().map(|op| op.code()).collect()
    }

    pub fn to_record(&self) -> TraceRecord {
        let first = self.states.first().expect("a trace has an initial state");
        let last = self.states.last().expect("a trace has a final state");
        TraceRecord {
            machine: self.machine.literals(),
            input: format_letters(&first.input),
            states: self
                .states
                .iter()
                .map(|s| StateRecord {
                    out: format_letters(&s.output),
                    stack: format_letters(&s.stack),
                    input: format_letters(&s.input),
                })
                .collect(),
            operations: self.operation_codes(),
            output: format_letters(&last.output),
            sortable: !matcher::contains(&last.output, &[2, 3, 1], false),
        }
    }
}

/// JSON form of a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub machine: Vec<String>,
    pub input: String,
    pub states: Vec<StateRecord>,
    pub operations: String,
    pub output: String,
    pub sortable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRecord {
    pub out: String,
    pub stack: String,
    #[serde(rename = "in")]
    pub input: String,
}

/// Drive the greedy stack, reporting each operation with the state it leads to.
fn drive<F>(input: &[u32], machine: &MachineConfig, mut step: F) -> Vec<u32>
where
    F: FnMut(StackOp, &[u32], &[u32], &[u32]),
{
    let mut output = Vec::with_capacity(input.len());
    // top of the stack at index 0
    let mut stack: Vec<u32> = Vec::with_capacity(input.len() + 1);
    let mut next = 0;
    while next < input.len() || !stack.is_empty() {
        if next < input.len() {
            stack.insert(0, input[next]);
            if stack.len() == 1 || !machine.blocks_push(&stack) {
                next += 1;
                step(StackOp::Push, &output, &stack, &input[next..]);
                continue;
            }
            stack.remove(0);
        }
        output.push(stack.remove(0));
        step(StackOp::Pop, &output, &stack, &input[next..]);
    }
    output
}

pub(crate) fn out_letters(input: &[u32], machine: &MachineConfig) -> Vec<u32> {
    drive(input, machine, |_, _, _, _| {})
}

/// Pass `input` through the `T`-stack, recording every state of passing.
pub fn run_stack<W: Letters>(input: &W, machine: &MachineConfig) -> (W, SortingTrace) {
    let letters = input.letters();
    let mut states = vec![PassingState {
        output: Vec::new(),
        stack: Vec::new(),
        input: letters.to_vec(),
    }];
    let mut operations = Vec::with_capacity(2 * letters.len());
    let output = drive(letters, machine, |op, out, stack, rest| {
        operations.push(op);
        states.push(PassingState {
            output: out.to_vec(),
            stack: stack.to_vec(),
            input: rest.to_vec(),
        });
    });
    let trace = SortingTrace {
        machine: machine.clone(),
        states,
        operations,
    };
    (input.rearranged(output), trace)
}

/// `out^T(input)`
pub fn out_t<W: Letters>(input: &W, machine: &MachineConfig) -> W {
    input.rearranged(out_letters(input.letters(), machine))
}

/// Sortable by the `T`-machine, i.e. `out^T(input)` avoids 231.
pub fn is_sortable(input: &Permutation, machine: &MachineConfig) -> bool {
    !matcher::contains(&out_letters(input.values(), machine), &[2, 3, 1], false)
}

/// The composite machine: `out^21(out^T(input))`.
pub fn sort_series(input: &Permutation, machine: &MachineConfig) -> Permutation {
    let first = out_letters(input.values(), machine);
    Permutation::from_vec_unchecked(out_letters(&first, &MachineConfig::classical_stack()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::contains_classical;
    use crate::perm::{partial_permutations, permutations, PartialPermutation};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn m(s: &str) -> MachineConfig {
        s.parse().unwrap()
    }

    /// Every 2-subset of S_3 plus the singletons {12} and {21}.
    fn machine_sweep() -> Vec<MachineConfig> {
        let s3: Vec<Permutation> = permutations(3).collect();
        let mut out = vec![m("12"), m("21")];
        for i in 0..s3.len() {
            for j in i + 1..s3.len() {
                out.push(MachineConfig::new([s3[i].clone(), s3[j].clone()]).unwrap());
            }
        }
        out
    }

    #[test]
    fn machine_parsing() {
        assert_eq!(m("123,132").to_string(), "123,132");
        assert_eq!(m("123, 123").patterns().len(), 1);
        assert!("".parse::<MachineConfig>().is_err());
        assert!("1".parse::<MachineConfig>().is_err());
        assert!("12x".parse::<MachineConfig>().is_err());
        assert!("122".parse::<MachineConfig>().is_err());
    }

    #[test]
    fn run_stack_examples() {
        let (out, trace) = run_stack(&p("231"), &m("21"));
        assert_eq!(out, p("213"));
        assert_eq!(trace.operation_codes(), "POPPOO");
        assert_eq!(trace.states.len(), 7);
        assert_eq!(out_t(&p("312"), &m("12")), p("321"));
        assert_eq!(out_t(&p("2314"), &m("123,132")), p("3412"));
        let (out, trace) = run_stack(&Permutation::empty(), &m("123,132"));
        assert!(out.is_empty());
        assert_eq!(trace.states.len(), 1);
    }

    #[test]
    fn out_examples() {
        assert_eq!(out_t(&p("231"), &m("132,231")), p("312"));
        assert_eq!(out_t(&p("231"), &m("123,312")), p("132"));
        for machine in machine_sweep() {
            assert_eq!(out_t(&p("1"), &machine), p("1"));
        }
    }

    #[test]
    fn sortability_examples() {
        assert!(!is_sortable(&p("2314"), &m("123,132")));
        assert!(!is_sortable(&p("1324"), &m("132,231")));
        for machine in machine_sweep() {
            for n in 0..=2 {
                for perm in permutations(n) {
                    assert!(is_sortable(&perm, &machine));
                }
            }
        }
    }

    #[test]
    fn sort_series_examples() {
        assert_eq!(sort_series(&p("231"), &m("132,231")), p("123"));
        assert!(!sort_series(&p("2314"), &m("123,132")).is_identity());
        for n in 0..=7 {
            let id = Permutation::identity(n);
            assert_eq!(out_t(&id, &m("123,132")), Permutation::decreasing(n));
            assert_eq!(sort_series(&id, &m("123,132")), id);
        }
    }

    #[test]
    fn sort_series_agrees_with_knuth_criterion() {
        for machine in machine_sweep() {
            for n in 0..=6 {
                for perm in permutations(n) {
                    assert_eq!(
                        sort_series(&perm, &machine).is_identity(),
                        is_sortable(&perm, &machine),
                        "{perm} through {machine}"
                    );
                }
            }
        }
    }

    #[test]
    fn trace_invariants() {
        for machine in machine_sweep() {
            for n in 0..=7 {
                for perm in permutations(n) {
                    let (out, trace) = run_stack(&perm, &machine);
                    let mut sorted = out.values().to_vec();
                    sorted.sort_unstable();
                    assert_eq!(sorted, Permutation::identity(n).values());

                    assert_eq!(trace.operations.len(), 2 * n);
                    let first = &trace.states[0];
                    assert!(first.output.is_empty() && first.stack.is_empty());
                    assert_eq!(first.input, perm.values());
                    let last = trace.states.last().unwrap();
                    assert_eq!(last.output, out.values());
                    assert!(last.stack.is_empty() && last.input.is_empty());

                    for (w, op) in trace.states.windows(2).zip(&trace.operations) {
                        let (a, b) = (&w[0], &w[1]);
                        match op {
                            StackOp::Push => {
                                assert_eq!(a.output, b.output);
                                assert_eq!(b.stack[0], a.input[0]);
                                assert_eq!(b.stack[1..], a.stack[..]);
                                assert_eq!(b.input[..], a.input[1..]);
                            }
                            StackOp::Pop => {
                                assert_eq!(b.output.last(), a.stack.first());
                                assert_eq!(b.output[..b.output.len() - 1], a.output[..]);
                                assert_eq!(b.stack[..], a.stack[1..]);
                                assert_eq!(b.input, a.input);
                            }
                        }
                        let stack =
                            Permutation::from_vec_unchecked(crate::perm::standardize(&b.stack));
                        for pat in machine.patterns() {
                            assert!(!contains_classical(&stack, pat));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn twelve_stack_on_partial_permutations() {
        let twelve = m("12");
        for ambient in 0..=7u32 {
            for a in partial_permutations(ambient) {
                let out = out_t(&a, &twelve);
                let mut decreasing = a.values().to_vec();
                decreasing.sort_unstable_by(|x, y| y.cmp(x));
                let avoids_213 = !contains_classical(&a, &p("213"));
                assert_eq!(out.values() == decreasing.as_slice(), avoids_213, "{a}");
                assert_eq!(out.ambient(), ambient);
            }
        }
        let a: PartialPermutation = "4172 of 7".parse().unwrap();
        // 4 is popped by 1, 7 by 2
        assert_eq!(out_t(&a, &twelve).values(), &[4, 7, 2, 1]);
    }
}
