// Driving the command line in process and re-reading its JSON.

use quadcong::cli::{canonical_json, execute};

pub fn run_example() -> quadcong::Result<()> {
    let out = execute(["quadcong", "count", "--form", "1 0 1 0 0 1", "--p", "5", "--n", "3", "--verify", "--format", "json"]);
    print!("{}", out.stdout);
    assert_eq!(out.code, 0);
    let value: serde_json::Value =
        serde_json::from_str(&out.stdout).map_err(|e| quadcong::Error::Parse(e.to_string()))?;
    assert_eq!(canonical_json(&value), out.stdout);
    println!("count = {}, exit code {}", value["count"], out.code);

    let bad = execute(["quadcong", "count", "--form", "5 0 1 0 0 1", "--p", "5", "--n", "2"]);
    println!("inadmissible form: exit {} ({})", bad.code, bad.stderr.trim());
    Ok(())
}

#[allow(dead_code)]
fn main() -> quadcong::Result<()> {
    run_example()
}
