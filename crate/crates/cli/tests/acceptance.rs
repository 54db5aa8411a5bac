//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use gqm_cli::verify;

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, Duration, Box<dyn Fn() -> Outcome>);

fn gqm_json(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gqm"))
        .args(args)
        .arg("--json")
        .env_remove("GQM_OUTPUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "gqm {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn frac(n: i64, d: i64) -> Value {
    json!({"num": n, "den": d})
}

fn table1() -> Outcome {
    let v = gqm_json(&["prob-table", "--q", "2"])?;
    let rows = v["rows"].as_array().ok_or("no rows")?.len();
    if rows != 9 {
        return Err(format!("{rows} rows"));
    }
    verify::table1()
}

fn table2() -> Outcome {
    let v = gqm_json(&["corr-table", "--q", "2"])?;
    let rows = v["rows"].as_array().ok_or("no rows")?.len();
    if rows != 54 {
        return Err(format!("{rows} rows"));
    }
    verify::table2()
}

fn chsh_q2() -> Outcome {
    let v = gqm_json(&["chsh", "--q", "2", "--max-achievers", "0"])?;
    if v["max_abs"] != frac(2, 1) {
        return Err(format!("max_abs = {}", v["max_abs"]));
    }
    let has = |set: [&str; 4], value: Value| {
        v["achievers"].as_array().into_iter().flatten().any(|a| {
            a["A1"] == set[0]
                && a["A2"] == set[1]
                && a["B1"] == set[2]
                && a["B2"] == set[3]
                && a["state"] == "S"
                && a["value"] == value
        })
    };
    if !has(["X", "Y", "Y", "X"], frac(-2, 1)) || !has(["X", "Z", "Y", "Z"], frac(2, 1)) {
        return Err("named achievers on S missing".into());
    }
    let mags: Vec<Value> = v["histogram"]
        .as_array()
        .ok_or("no histogram")?
        .iter()
        .map(|h| h["value"].clone())
        .collect();
    if mags != vec![frac(2, 3), frac(2, 1)] {
        return Err(format!("magnitudes {mags:?}"));
    }
    verify::chsh_q2()
}

fn chsh_higher() -> Outcome {
    let mut parts = Vec::new();
    for q in ["3", "4", "5"] {
        let v = gqm_json(&["chsh", "--q", q, "--no-prune", "--max-achievers", "1"])?;
        if v["max_abs"] != frac(2, 1) {
            return Err(format!("q = {q}: max_abs = {}", v["max_abs"]));
        }
        parts.push(format!("q={q}: 2 over {} configurations", v["evaluated"]));
    }
    Ok(parts.join("; "))
}

fn hidden_variables() -> Outcome {
    let v = gqm_json(&[
        "hv-check",
        "--q",
        "2",
        "--state",
        "S",
        "--observables",
        "X,Y,Z",
    ])?;
    if v["survivor_count"] != 0 || v["assignments"] != 64 {
        return Err(format!(
            "{} of {} survive",
            v["survivor_count"], v["assignments"]
        ));
    }
    let imps = v["implications"].as_array().ok_or("no implications")?;
    for (from, to) in [("X1=+1", "Z2=+1"), ("Z2=+1", "Y1=+1")] {
        if !imps.iter().any(|e| e["from"] == from && e["to"] == to) {
            return Err(format!("missing {from} => {to}"));
        }
    }
    if v["contradiction"].is_null() {
        return Err("no contradiction cycle".into());
    }
    let r = &v["restricted"];
    if r["survivor_count"].as_u64().unwrap_or(0) == 0
        || r["y1z2_plus_minus"] != 0
        || r["z1y2_minus_plus"] != 0
        || r["p_y1z2_plus_minus"] != frac(1, 3)
        || r["p_z1y2_minus_plus"] != frac(1, 3)
    {
        return Err(format!("restricted check: {r}"));
    }
    verify::hv_singlet()
}

fn criterion_9() -> Outcome {
    let mut hashes = Vec::new();
    for t in ["1", "4", "1", "2"] {
        let v = gqm_json(&["verify-all", "--q", "2", "--threads", t])?;
        if v["passed"] != true {
            return Err(format!("verify-all failed with {t} threads"));
        }
        hashes.push(
            v["metadata"]["content_hash"]
                .as_str()
                .unwrap_or_default()
                .to_string(),
        );
    }
    if hashes.iter().any(|h| h != &hashes[0]) {
        return Err(format!("hashes differ: {hashes:?}"));
    }
    Ok(format!("{} across 4 runs", hashes[0]))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "one-particle table",
            Duration::from_secs(1),
            Box::new(table1),
        ),
        (
            2,
            "two-particle table",
            Duration::from_secs(1),
            Box::new(table2),
        ),
        (
            3,
            "chsh bound q=2",
            Duration::from_secs(1),
            Box::new(chsh_q2),
        ),
        (
            3,
            "chsh exhaustive q=3,4,5",
            Duration::from_secs(600),
            Box::new(chsh_higher),
        ),
        (
            4,
            "hidden variables",
            Duration::from_secs(1),
            Box::new(hidden_variables),
        ),
        (
            5,
            "state counts",
            Duration::from_secs(5),
            Box::new(verify::state_counts),
        ),
        (
            6,
            "geometry",
            Duration::from_secs(1),
            Box::new(verify::geometry),
        ),
        (
            7,
            "group structure",
            Duration::from_secs(5),
            Box::new(|| {
                let a = verify::groups()?;
                let b = verify::census()?;
                Ok(format!("{a}; {b}"))
            }),
        ),
        (
            8,
            "pairing and factorization",
            Duration::from_secs(10),
            Box::new(|| {
                let a = verify::pairing()?;
                let b = verify::factorization()?;
                Ok(format!("{a}; {b}"))
            }),
        ),
        (
            9,
            "determinism",
            Duration::from_secs(60),
            Box::new(criterion_9),
        ),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > limit => Err(format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(d) => println!("criterion {n}: PASS {name} ({elapsed:.2?}): {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n}: FAIL {name} ({elapsed:.2?}): {d}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
