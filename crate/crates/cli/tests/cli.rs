use std::process::{Command, Output};

use serde_json::Value;

use pamlab::characterize::{sortable_by_patterns, PairId};
use pamlab::{is_sortable, permutations, MachineConfig};

fn pamlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pamlab"))
        .args(args)
        .env_remove("PAMLAB_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

type Field<'a> = (&'a str, fn(&Value) -> bool);

/// Minimal structural schema: the listed keys exist with the given JSON kinds.
fn assert_shape(value: &Value, fields: &[Field]) {
    let obj = value.as_object().expect("a JSON object");
    for (key, kind) in fields {
        let v = obj
            .get(*key)
            .unwrap_or_else(|| panic!("missing {key} in {value}"));
        assert!(kind(v), "{key} has the wrong type: {v}");
    }
}

#[test]
fn trace_text_for_the_classical_stack() {
    let out = pamlab(&[
        "trace",
        "--machine",
        "21",
        "--perm",
        "231",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let states = text.lines().filter(|l| l.contains("out=")).count();
    assert_eq!(states, 7);
    assert_eq!(text.lines().last(), Some("output=213"));
    assert!(text.contains("operations=POPPOO"));
}

#[test]
fn trace_json_shape() {
    let out = pamlab(&[
        "trace",
        "--machine",
        "123,132",
        "--perm",
        "2314",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_shape(
        &v,
        &[
            ("machine", Value::is_array),
            ("input", Value::is_string),
            ("states", Value::is_array),
            ("operations", Value::is_string),
            ("output", Value::is_string),
            ("sortable", Value::is_boolean),
        ],
    );
    assert_eq!(v["output"], "3412");
    assert_eq!(v["sortable"], false);
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 9);
    for s in states {
        assert_shape(
            s,
            &[
                ("out", Value::is_string),
                ("stack", Value::is_string),
                ("in", Value::is_string),
            ],
        );
    }
    assert_eq!(states[0]["in"], "2314");
}

#[test]
fn trace_accepts_partial_permutations() {
    let out = pamlab(&["trace", "--machine", "12", "--perm", "4172 of 7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().last(), Some("output=4721"));
}

#[test]
fn sortable_verdicts() {
    let out = pamlab(&["sortable", "--machine", "123,132", "--perm", "2314"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).lines().next(),
        Some("NOT SORTABLE (contains 2314)")
    );

    let out = pamlab(&["sortable", "--machine", "132,231", "--perm", "1324"]);
    assert_eq!(
        stdout(&out).lines().next(),
        Some("NOT SORTABLE (contains 1324)")
    );

    let out = pamlab(&["sortable", "--machine", "132,231", "--perm", "231"]);
    assert_eq!(stdout(&out), "SORTABLE (avoids 1324, 2314)\n");

    let out = pamlab(&["sortable", "--machine", "123,213", "--perm", "231"]);
    assert!(stdout(&out).starts_with("SORTABLE (output"));
}

#[test]
fn sortable_agrees_with_library() {
    for pair in PairId::CHARACTERIZED {
        let machine = pair.to_string();
        let m: MachineConfig = machine.parse().unwrap();
        for p in permutations(4).step_by(3) {
            let perm = p.to_string();
            let out = pamlab(&["sortable", "--machine", &machine, "--perm", &perm]);
            assert_eq!(out.status.code(), Some(0));
            let cli = stdout(&out).starts_with("SORTABLE");
            assert_eq!(cli, is_sortable(&p, &m), "{machine} {perm}");
            assert_eq!(cli, sortable_by_patterns(&p, pair).unwrap());
        }
    }
}

#[test]
fn count_csv_with_inferred_reference() {
    let out = pamlab(&["count", "--machine", "132,231", "--max-n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n,count,reference,verdict"));
    assert_eq!(text.lines().last(), Some("7,1806,large-schroeder,match"));
}

#[test]
fn count_json_with_explicit_reference() {
    let out = pamlab(&[
        "count",
        "--machine",
        "123,312",
        "--max-n",
        "8",
        "--reference",
        "binomial-transform-catalan",
        "--offset",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_shape(
        &v,
        &[
            ("machine", Value::is_array),
            ("by_first", Value::is_boolean),
            ("reference", Value::is_string),
            ("offset", Value::is_u64),
            ("rows", Value::is_array),
        ],
    );
    let counts: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            assert_shape(
                r,
                &[
                    ("n", Value::is_u64),
                    ("count", Value::is_u64),
                    ("verdict", Value::is_string),
                ],
            );
            assert_eq!(r["verdict"], "match");
            r["count"].as_u64().unwrap()
        })
        .collect();
    assert_eq!(counts, vec![1, 2, 5, 15, 51, 188, 731, 2950]);
}

#[test]
fn count_mismatch_exits_one() {
    let out = pamlab(&[
        "count",
        "--machine",
        "132,231",
        "--max-n",
        "5",
        "--reference",
        "catalan",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("mismatch"));
}

#[test]
fn count_by_first_csv() {
    let out = pamlab(&[
        "count",
        "--machine",
        "123,132",
        "--max-n",
        "5",
        "--by-first",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n,k,count,reference,verdict"));
    assert!(text.contains("\n5,4,14,catalan-triangle,match\n"));
}

#[test]
fn distribution_grid() {
    let out = pamlab(&["distribution", "--machine", "123,132", "--max-n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let sums: Vec<&str> = text
        .lines()
        .find(|l| l.trim_start().starts_with("sum"))
        .unwrap()
        .split_whitespace()
        .skip(1)
        .collect();
    assert_eq!(sums, ["1", "2", "5", "14", "42", "132", "429", "1430"]);
    assert!(text.contains("reference=catalan-triangle verdict=match"));
}

#[test]
fn verify_reports() {
    let out = pamlab(&["verify", "--pair", "123,312", "--max-n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().last(), Some("PASS"));

    let out = pamlab(&[
        "verify", "--pair", "132,231", "--max-n", "6", "--format", "json",
    ]);
    let v = json(&out);
    assert_shape(
        &v,
        &[
            ("pair", Value::is_string),
            ("n_max", Value::is_u64),
            ("sortable_counts", Value::is_array),
            ("predicates", Value::is_array),
        ],
    );
    for p in v["predicates"].as_array().unwrap() {
        assert_shape(
            p,
            &[
                ("predicate", Value::is_string),
                ("lengths", Value::is_array),
                ("mismatches", Value::is_u64),
            ],
        );
        assert_eq!(p["mismatches"], 0);
    }

    let out = pamlab(&["verify", "--pair", "123,213", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bijection_reports() {
    let out = pamlab(&["bijection", "--check", "phi", "--max-n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().last(), Some("PASS"));

    let out = pamlab(&[
        "bijection",
        "--check",
        "triangle",
        "--max-n",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_shape(
        &v,
        &[
            ("kind", Value::is_string),
            ("n_max", Value::is_u64),
            ("lengths", Value::is_array),
        ],
    );
    assert_eq!(v["kind"], "triangle");
}

#[test]
fn oracle_agreement() {
    let out = pamlab(&["oracle", "--pattern", "[24^13", "--perm", "2413"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("fast: 2413 avoids [24^13"));
    assert_eq!(text.lines().last(), Some("AGREE"));

    let out = pamlab(&["oracle", "--pattern", "[24^13", "--perm", "2431"]);
    assert!(stdout(&out).contains("fast: 2431 contains [24^13"));

    let out = pamlab(&["oracle", "--pattern", "2~13~", "--perm", "314 of 5"]);
    assert!(stdout(&out).contains("contains 2~13~"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["trace", "--machine", "1x3", "--perm", "231"][..],
        &["trace", "--machine", "21", "--perm", "2331"],
        &["oracle", "--pattern", "[2^4^13", "--perm", "2413"],
        &["oracle", "--pattern", "31|2", "--perm", "231"],
        &["count", "--machine", "132,231", "--max-n", "12"],
        &["bijection", "--check", "psi", "--max-n", "3"],
        &["frobnicate"],
    ] {
        let out = pamlab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn max_n_cap_is_configurable() {
    let out = Command::new(env!("CARGO_BIN_EXE_pamlab"))
        .args(["count", "--machine", "12", "--max-n", "4"])
        .env("PAMLAB_MAX_N", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_pamlab"))
        .args(["count", "--machine", "12", "--max-n", "5", "--no-reference"])
        .env("PAMLAB_MAX_N", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
