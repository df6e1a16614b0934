use std::process::{Command, Output};

fn schubgal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schubgal"))
        .args(args)
        .env_remove("SCHUBGAL_PRIME")
        .env_remove("SCHUBGAL_SAMPLES")
        .env_remove("SCHUBGAL_SEED")
        .env_remove("SCHUBGAL_WORKERS")
        .env_remove("SCHUBGAL_OUT")
        .env_remove("SCHUBGAL_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_examples() {
    for (problem, n) in [
        ("Gr(2,4): (1)^4", "2"),
        ("Gr(2,5): (1)^6", "5"),
        ("Gr(4,9): (1)^2*(2)^2*(1,1,1)^2*(4)^2", "4"),
    ] {
        let o = schubgal(&["count", problem]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), n, "{problem}");
    }
}

#[test]
fn parse_errors_exit_64() {
    let o = schubgal(&["count", "Gr(2,4): (1)^3"]);
    assert_eq!(o.status.code(), Some(64));
    let o = schubgal(&["count", "Gr(2,4): (1,"]);
    assert_eq!(o.status.code(), Some(64));
    let o = schubgal(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(64));
    let o = schubgal(&["--prime", "1000", "sample", "Gr(2,4): (1)^4"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn reduce_drops_a_full_column() {
    let o = schubgal(&["reduce", "Gr(4,9): (3,3,1)*(4,2,2)*(2)^2*(1)"]);
    assert!(o.status.success());
    let got: schubgal::SchubertProblem = stdout(&o).trim().parse().unwrap();
    let want: schubgal::SchubertProblem = "Gr(3,8): (3,1)*(4,2)*(2)^2*(1)".parse().unwrap();
    assert_eq!(got, want);
}

#[test]
fn printed_problems_reparse() {
    let o = schubgal(&["enumerate", "Gr(2,6)", "--max", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(!text.is_empty());
    for line in text.lines() {
        let (_, p) = line.split_once('\t').unwrap();
        let parsed: schubgal::SchubertProblem = p.parse().unwrap();
        assert_eq!(parsed.to_string(), p);
    }
}

#[test]
fn wreath_table_d4() {
    let o = schubgal(&["wreath-table", "2", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<(String, u64)> = text
        .lines()
        .skip(2)
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().to_string(), it.next().unwrap().parse().unwrap())
        })
        .collect();
    let want = [("(4)", 2), ("(2,2)", 3), ("(2,1,1)", 2), ("(1,1,1,1)", 1)];
    assert_eq!(rows.len(), 4);
    for (t, n) in want {
        assert!(rows.contains(&(t.to_string(), n)), "{t} {n} in {text}");
    }
    assert!(text.starts_with("S2 wr S2  order 8"));
}

#[test]
fn zero_samples_gives_empty_census() {
    let o = schubgal(&["sample", "Gr(2,4): (1)^4", "--samples", "0", "--format", "jsonl"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["attempts"], 0);
    assert_eq!(v["census"].as_array().unwrap().len(), 0);
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["classify", "Gr(2,5): (1)^6", "--seed", "42", "--format", "jsonl"];
    let a = schubgal(&args);
    let b = schubgal(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["verdict"]["kind"], "full_symmetric");
}

#[test]
fn random_seed_is_reported() {
    let o = schubgal(&["sample", "Gr(2,4): (1)^4", "--samples", "5"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    let seed: u64 = err
        .lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .expect("seed line")
        .parse()
        .unwrap();
    assert!(stdout(&o).contains(&format!("seed = {seed}")));
}

#[test]
fn env_overrides_default_and_flag_overrides_env() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_schubgal"));
        c.args(["sample", "Gr(2,4): (1)^4", "--samples", "3", "--seed", "1", "--format", "jsonl"]);
        c.env_remove("SCHUBGAL_PRIME");
        if let Some(p) = env {
            c.env("SCHUBGAL_PRIME", p);
        }
        if let Some(p) = flag {
            c.args(["--prime", p]);
        }
        let o = c.output().unwrap();
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["p"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 1009);
    assert_eq!(run(Some("101"), None), 101);
    assert_eq!(run(Some("101"), Some("103")), 103);
}

#[test]
fn survey_writes_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("s.jsonl");
    let log = log.to_str().unwrap();
    let o = schubgal(&["survey", "Gr(2,5)", "--out", log, "--seed", "9", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let first: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let total = first["total"].as_u64().unwrap();
    assert!(total > 0);
    assert_eq!(first["new"], total);

    let o = schubgal(&[
        "survey", "Gr(2,5)", "--out", log, "--seed", "9", "--resume", "--format", "jsonl",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let again: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(again["total"], total);
    assert_eq!(again["new"], 0);

    let o = schubgal(&["survey", "Gr(2,5)", "--out", log, "--resume", "--format", "csv"]);
    let csv = stdout(&o);
    assert!(csv.starts_with("problem,n,verdict,group,rule"));
    assert_eq!(csv.lines().count() as u64, total + 1);
}

#[test]
fn survey_needs_a_log() {
    let o = schubgal(&["survey", "Gr(2,4)"]);
    assert_eq!(o.status.code(), Some(64));
}
