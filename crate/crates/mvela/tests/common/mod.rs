#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn mvela(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvela")).args(args).output().expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Instance ids produced by `--problem <family> --instances n`.
pub fn instance_ids(family: &str, n: u64) -> Vec<String> {
    (0..n).map(|i| if i == 0 { family.to_string() } else { format!("{family}@{i}") }).collect()
}

/// Traces for a complementary two-algorithm portfolio: `alg1` reaches 0
/// after about 50 evaluations on `fast_for_alg1` instances and never on the
/// others, `alg2` the other way round.
pub fn complementary_traces(fast_for_alg1: &[String], fast_for_alg2: &[String], runs: u32, budget: u64) -> String {
    let mut out = String::from("instance_id,algorithm,run_id,fe,y\n");
    let all = fast_for_alg1.iter().map(|i| (i, true)).chain(fast_for_alg2.iter().map(|i| (i, false)));
    for (inst, alg1_fast) in all {
        for alg in ["alg1", "alg2"] {
            let fast = (alg == "alg1") == alg1_fast;
            for r in 0..runs {
                let hit = 40 + 5 * u64::from(r);
                for fe in 1..=budget {
                    let y = if !fast {
                        1.0
                    } else if fe >= hit {
                        0.0
                    } else {
                        1.0 - fe as f64 / 1000.0
                    };
                    out.push_str(&format!("{inst},{alg},{r},{fe},{y}\n"));
                }
            }
        }
    }
    out
}
