use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use pamlab::characterize::{violated_pattern, FourConditions, PairId};
use pamlab::harness::{
    count_table, default_offset, known_reference, verify_bijection, verify_characterization,
    BijectionKind, BijectionReport, CharacterizationReport, CountTable, HarnessConfig,
    DEFAULT_SWEEP_MAX,
};
use pamlab::pattern::oracle;
use pamlab::perm::{format_letters, Letters};
use pamlab::{
    is_sortable, out_t, run_stack, MachineConfig, PartialPermutation, PatternSpec, Permutation,
    SequenceName, SortingTrace,
};

/// Environment variable overriding the largest length a command may enumerate.
const MAX_N_VAR: &str = "PAMLAB_MAX_N";

#[derive(Parser, Debug)]
#[command(
    name = "pamlab",
    version,
    about = "Pattern-avoiding two-stack sorting machines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Show every state of passing through the first stack.
    Trace {
        /// Forbidden patterns of the first stack, e.g. `123,132`.
        #[arg(long)]
        machine: String,
        /// Input permutation (`2314`, `2 3 1 4`) or partial permutation (`4172 of 7`).
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum, default_value_t = TraceFormat::Text)]
        format: TraceFormat,
    },
    /// Decide sortability and explain the verdict.
    Sortable {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        perm: String,
    },
    /// Count sortable permutations for every length up to `--max-n`.
    Count {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        max_n: usize,
        /// Split each length by the first element.
        #[arg(long)]
        by_first: bool,
        /// Reference sequence; inferred for the studied pairs when omitted.
        #[arg(long)]
        reference: Option<String>,
        /// Row `n` is compared with term `n - offset` of the reference.
        #[arg(long)]
        offset: Option<usize>,
        /// Skip comparison with a reference sequence.
        #[arg(long, conflicts_with_all = ["reference", "offset"])]
        no_reference: bool,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Distribution of sortable permutations by first element.
    Distribution {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = DistributionFormat::Grid)]
        format: DistributionFormat,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compare simulation with the pattern characterizations of a pair.
    Verify {
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = DEFAULT_SWEEP_MAX)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Exhaustively check one of the bijections.
    Bijection {
        /// hat-roundtrip, alpha, phi or triangle.
        #[arg(long)]
        check: String,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Containment by the fast matcher and by brute force.
    Oracle {
        /// `2314`, `[132`, `[24^13` (caret before the barred entry), `31|2` or `2~13~`.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        perm: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TraceFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DistributionFormat {
    Grid,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

/// How a command ended: its output and whether everything it checked held.
struct Report {
    output: String,
    verified: bool,
}

impl Report {
    fn ok(output: String) -> Report {
        Report {
            output,
            verified: true,
        }
    }
}

enum Failure {
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<pamlab::Error> for Failure {
    fn from(e: pamlab::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.output);
            if report.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Trace {
            machine,
            perm,
            format,
        } => trace(&machine.parse()?, &perm, format),
        Command::Sortable { machine, perm } => sortable(&machine.parse()?, &perm.parse()?),
        Command::Count {
            machine,
            max_n,
            by_first,
            reference,
            offset,
            no_reference,
            format,
            workers,
        } => {
            let machine: MachineConfig = machine.parse()?;
            let cfg = harness_config(max_n, workers)?;
            let table = count_table(&machine, max_n, by_first, &cfg)?;
            let reference = match (reference, no_reference) {
                (_, true) => None,
                (Some(name), false) => {
                    let name: SequenceName = name.parse()?;
                    Some((name, offset.unwrap_or_else(|| default_offset(name))))
                }
                (None, false) => PairId::from_machine(&machine)
                    .and_then(|pair| known_reference(pair, by_first))
                    .map(|(name, o)| (name, offset.unwrap_or(o))),
            };
            let table = match reference {
                Some((name, o)) => table.with_reference(name, o)?,
                None => table,
            };
            let verified = table.reference.is_none() || table.all_match();
            let output = match format {
                TableFormat::Csv => table.to_csv(),
                TableFormat::Json => to_json(&table)?,
            };
            Ok(Report { output, verified })
        }
        Command::Distribution {
            machine,
            max_n,
            format,
            workers,
        } => {
            let machine: MachineConfig = machine.parse()?;
            let cfg = harness_config(max_n, workers)?;
            let mut table = count_table(&machine, max_n, true, &cfg)?;
            if let Some((name, o)) =
                PairId::from_machine(&machine).and_then(|pair| known_reference(pair, true))
            {
                table = table.with_reference(name, o)?;
            }
            let verified = table.reference.is_none() || table.all_match();
            let output = match format {
                DistributionFormat::Grid => distribution_grid(&table),
                DistributionFormat::Csv => table.to_csv(),
                DistributionFormat::Json => to_json(&table)?,
            };
            Ok(Report { output, verified })
        }
        Command::Verify {
            pair,
            max_n,
            format,
            workers,
        } => {
            let pair: PairId = pair.parse()?;
            let cfg = harness_config(max_n, workers)?;
            let report = verify_characterization(pair, max_n, &cfg)?;
            let output = match format {
                ReportFormat::Text => characterization_text(&report),
                ReportFormat::Json => to_json(&report)?,
            };
            Ok(Report {
                output,
                verified: report.passed(),
            })
        }
        Command::Bijection {
            check,
            max_n,
            format,
            workers,
        } => {
            let kind: BijectionKind = check.parse()?;
            let cfg = harness_config(max_n, workers)?;
            let report = verify_bijection(kind, max_n, &cfg)?;
            let output = match format {
                ReportFormat::Text => bijection_text(&report),
                ReportFormat::Json => to_json(&report)?,
            };
            Ok(Report {
                output,
                verified: report.passed(),
            })
        }
        Command::Oracle { pattern, perm } => {
            let spec: PatternSpec = pattern.parse()?;
            if is_partial(&perm) {
                oracle_check(&spec, &perm.parse::<PartialPermutation>()?)
            } else {
                oracle_check(&spec, &perm.parse::<Permutation>()?)
            }
        }
    }
}

fn harness_config(max_n: usize, workers: Option<usize>) -> Result<HarnessConfig, Failure> {
    let mut cfg = HarnessConfig {
        workers,
        ..HarnessConfig::default()
    };
    if let Ok(raw) = std::env::var(MAX_N_VAR) {
        cfg.max_n = raw
            .trim()
            .parse()
            .with_context(|| format!("{MAX_N_VAR}={raw:?} is not a length"))
            .map_err(Failure::Usage)?;
    }
    if max_n > cfg.max_n {
        return Err(Failure::Usage(anyhow!(
            "--max-n {max_n} is above the limit {}; set {MAX_N_VAR} to raise it",
            cfg.max_n
        )));
    }
    if workers == Some(0) {
        return Err(Failure::Usage(anyhow!("--workers must be positive")));
    }
    Ok(cfg)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.into()))?;
    s.push('\n');
    Ok(s)
}

fn is_partial(text: &str) -> bool {
    text.contains(" of ") || text.contains('λ') || text.trim() == "lambda"
}

fn letters(values: &[u32]) -> String {
    if values.is_empty() {
        "λ".into()
    } else {
        format_letters(values)
    }
}

fn trace(machine: &MachineConfig, perm: &str, format: TraceFormat) -> Result<Report, Failure> {
    let trace = if is_partial(perm) {
        run_stack(&perm.parse::<PartialPermutation>()?, machine).1
    } else {
        run_stack(&perm.parse::<Permutation>()?, machine).1
    };
    let output = match format {
        TraceFormat::Json => to_json(&trace.to_record())?,
        TraceFormat::Text => trace_text(&trace),
    };
    Ok(Report::ok(output))
}

fn trace_text(trace: &SortingTrace) -> String {
    let record = trace.to_record();
    let mut out = String::new();
    writeln!(out, "machine={}", trace.machine).unwrap();
    for (i, state) in trace.states.iter().enumerate() {
        let op = match i {
            0 => ' ',
            _ => trace.operations[i - 1].code(),
        };
        writeln!(
            out,
            "{i:>3} {op}  out={}  stack={}  in={}",
            letters(&state.output),
            letters(&state.stack),
            letters(&state.input)
        )
        .unwrap();
    }
    writeln!(out, "operations={}", record.operations).unwrap();
    writeln!(out, "sortable={}", record.sortable).unwrap();
    writeln!(
        out,
        "output={}",
        letters(&trace.states.last().unwrap().output)
    )
    .unwrap();
    out
}

fn sortable(machine: &MachineConfig, perm: &Permutation) -> Result<Report, Failure> {
    let simulated = is_sortable(perm, machine);
    let out = out_t(perm, machine);
    let pair = PairId::from_machine(machine).filter(|p| p.characterizing_patterns().is_some());
    let Some(pair) = pair else {
        let line = if simulated {
            format!("SORTABLE (output {} avoids 231)\n", letters(out.values()))
        } else {
            format!(
                "NOT SORTABLE (output {} contains 231)\n",
                letters(out.values())
            )
        };
        return Ok(Report::ok(line));
    };
    let violated = violated_pattern(perm, pair)?;
    let mut output = match &violated {
        None => format!(
            "SORTABLE (avoids {})\n",
            pair.characterizing_patterns()
                .unwrap()
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Some(p) => format!("NOT SORTABLE (contains {p})\n"),
    };
    if pair == PairId::P123_312 && !perm.is_empty() {
        if let Some(why) = FourConditions::evaluate(perm).first_failure() {
            writeln!(output, "  {why}").unwrap();
        }
    }
    let agrees = violated.is_none() == simulated;
    if !agrees {
        writeln!(
            output,
            "simulation disagrees: output {} {} 231",
            letters(out.values()),
            if simulated { "avoids" } else { "contains" }
        )
        .unwrap();
    }
    Ok(Report {
        output,
        verified: agrees,
    })
}

fn distribution_grid(table: &CountTable) -> String {
    let n_max = table.rows.iter().map(|r| r.n).max().unwrap_or(0);
    let width = table
        .rows
        .iter()
        .map(|r| r.count.to_string().len())
        .chain(table.row_sums().iter().map(|(_, s)| s.to_string().len()))
        .max()
        .unwrap_or(1)
        .max(2);
    let mut out = String::new();
    write!(out, "{:>4}", "k\\n").unwrap();
    for n in 1..=n_max {
        write!(out, " {n:>width$}").unwrap();
    }
    out.push('\n');
    for k in 1..=n_max {
        write!(out, "{k:>4}").unwrap();
        for n in 1..=n_max {
            match table.get(n, Some(k)) {
                Some(c) => write!(out, " {c:>width$}").unwrap(),
                None => write!(out, " {:>width$}", "").unwrap(),
            }
        }
        out.push('\n');
    }
    write!(out, "{:>4}", "sum").unwrap();
    for (_, s) in table.row_sums() {
        write!(out, " {s:>width$}").unwrap();
    }
    out.push('\n');
    if let Some(reference) = table.reference {
        let verdict = if table.all_match() {
            "match"
        } else {
            "mismatch"
        };
        writeln!(out, "reference={reference} verdict={verdict}").unwrap();
    }
    out
}

fn characterization_text(report: &CharacterizationReport) -> String {
    let mut out = String::new();
    writeln!(out, "pair={} max_n={}", report.pair, report.n_max).unwrap();
    write!(out, "{:>3} {:>10}", "n", "sortable").unwrap();
    for p in &report.predicates {
        write!(out, " {:>16}", p.predicate).unwrap();
    }
    out.push('\n');
    for (i, count) in report.sortable_counts.iter().enumerate() {
        write!(out, "{:>3} {count:>10}", i + 1).unwrap();
        for p in &report.predicates {
            let verdict = if p.lengths[i].passed {
                "agree"
            } else {
                "MISMATCH"
            };
            write!(out, " {verdict:>16}").unwrap();
        }
        out.push('\n');
    }
    for p in &report.predicates {
        if let Some(c) = &p.counterexample {
            writeln!(
                out,
                "{}: {} mismatches, first at {c}",
                p.predicate, p.mismatches
            )
            .unwrap();
        }
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict}").unwrap();
    out
}

fn bijection_text(report: &BijectionReport) -> String {
    let mut out = String::new();
    writeln!(out, "check={} max_n={}", report.kind, report.n_max).unwrap();
    for l in &report.lengths {
        let verdict = if l.passed { "ok" } else { "FAIL" };
        writeln!(out, "n={} checked={} {verdict}", l.n, l.checked).unwrap();
    }
    if let Some(c) = &report.counterexample {
        writeln!(out, "counterexample: {c}").unwrap();
    }
    writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" }).unwrap();
    out
}

fn oracle_check<H: Letters + std::fmt::Display>(
    spec: &PatternSpec,
    host: &H,
) -> Result<Report, Failure> {
    let fast = spec.is_contained_in(host)?;
    let slow = oracle::contains(host.letters(), spec);
    let word = |c: bool| if c { "contains" } else { "avoids" };
    let mut output = String::new();
    writeln!(output, "fast: {host} {} {spec}", word(fast)).unwrap();
    writeln!(output, "brute-force: {host} {} {spec}", word(slow)).unwrap();
    writeln!(
        output,
        "{}",
        if fast == slow { "AGREE" } else { "DISAGREE" }
    )
    .unwrap();
    Ok(Report {
        output,
        verified: fast == slow,
    })
}
