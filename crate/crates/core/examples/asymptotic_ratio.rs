// Ratio `T / T_0` of the Gaussian-weighted count to its main term for
// `x^2 + y^2 + z^2` modulo `3^n`, `N = ceil(q^0.6)`.
//
// `cargo run --release --example asymptotic_ratio -- 5 12`

use quadcong::conic::TernaryForm;
use quadcong::counting::{run_asymptotic_experiment, ExperimentOptions};

fn table(lo: u32, hi: u32) -> quadcong::Result<()> {
    let opts = ExperimentOptions { class_budget: 50_000_000_000, ..Default::default() };
    let exponents: Vec<u32> = (lo..=hi).collect();
    let rows = run_asymptotic_experiment(&TernaryForm::sum_of_squares(), 3, &exponents, 0.6, &opts)?;
    println!("{:>3} {:>8} {:>6} {:>16} {:>16} {:>10} {:>8}", "n", "q", "N", "T", "T0", "ratio", "secs");
    for r in rows {
        println!(
            "{:>3} {:>8} {:>6} {:>16.6} {:>16.6} {:>10.6} {:>8.2}",
            r.n,
            r.q,
            r.scale,
            r.t.unwrap_or(f64::NAN),
            r.t0,
            r.ratio.unwrap_or(f64::NAN),
            r.seconds
        );
    }
    Ok(())
}

pub fn run_example() -> quadcong::Result<()> {
    table(3, 7)
}

#[allow(dead_code)]
fn main() -> quadcong::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    match args[..] {
        [lo, hi] => table(lo, hi),
        _ => run_example(),
    }
}
