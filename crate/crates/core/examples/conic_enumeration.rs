// Solutions of `x^2 + y^2 + 1 = 0 mod 5^2` by stratum, checked against an
// exhaustive search.

use quadcong::conic::{count_solutions, enumerate_all, TernaryForm};
use quadcong::oracle::conic_solutions;
use quadcong::PrimePowerModulus;

pub fn run_example() -> quadcong::Result<()> {
    let form = TernaryForm::sum_of_squares();
    let m = PrimePowerModulus::new(5, 2)?;
    let q = form.dehomogenize();
    let set = enumerate_all(&q, &m)?;
    println!(
        "base point ({}, {}), {} solutions, closed form {}",
        set.base().alpha,
        set.base().beta,
        set.len(),
        count_solutions(&q, &m)?
    );
    for s in 0..=m.n() {
        let points: Vec<String> = set.stratum(s).map(|e| format!("({}, {})", e.x, e.y)).collect();
        println!("M_{s}: {}", points.join(" "));
    }
    let mut listed: Vec<(u64, u64)> = set.points().collect();
    listed.sort_unstable();
    assert_eq!(listed, conic_solutions(&form, m.q()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> quadcong::Result<()> {
    run_example()
}
