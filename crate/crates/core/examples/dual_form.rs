// The dual form of `x^2 + xy + y^2 + z^2`, and primitive zeros of the
// cone `x^2 + y^2 - z^2` against the divisor bound.

use quadcong::conic::TernaryForm;
use quadcong::quadric::{bound_sweep, dual_form, IntegralTernaryForm, ZERO_COUNT_BUDGET};

pub fn run_example() -> quadcong::Result<()> {
    let q: TernaryForm = "1 1 1 0 0 1".parse()?;
    let dual = dual_form(&q)?;
    println!("Q' = {}", dual.as_form());
    println!("det = {}, minor gcd = {}, tau(det) = {}", dual.det_assoc, dual.minor_gcd, dual.tau_det);

    let cone = IntegralTernaryForm::new(1, 0, 1, 0, 0, -1);
    let inv = cone.invariants()?;
    for row in bound_sweep(&cone, &inv, &[5, 10, 25, 50], ZERO_COUNT_BUDGET)? {
        println!("B = {:>3}: {:>4} zeros, ratio {:.4}", row.bound, row.count, row.ratio);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> quadcong::Result<()> {
    run_example()
}
