// Complete exponential sums: stationary phase against direct summation,
// and the conic sum `E(k1, k2, z; p^n)` in closed form.

use quadcong::conic::{enumerate_all, TernaryForm};
use quadcong::expsum::{cochrane_eval, error_sum_direct, error_sum_formula, s_alpha_direct, ErrorSumContext};
use quadcong::polyrat::RationalAmplitude;
use quadcong::PrimePowerModulus;

pub fn run_example() -> quadcong::Result<()> {
    let f: RationalAmplitude = "(3*x + x^2)/(1 + 7*x)".parse()?;
    let m = PrimePowerModulus::new(7, 4)?;
    for alpha in 0..7 {
        if !f.is_regular_at(alpha, 7) {
            println!("alpha = {alpha}: pole of f");
            continue;
        }
        let outcome = cochrane_eval(&f, alpha, &m)?;
        let direct = s_alpha_direct(&f, alpha, &m)?;
        println!("alpha = {alpha}: {outcome:?}, direct {direct:.6}");
        if let Some(v) = outcome.value() {
            assert!((v - direct).norm() <= 1e-6 * 7f64.powi(3));
        }
    }

    let form: TernaryForm = "2 1 3 1 -1 1".parse()?;
    let m = PrimePowerModulus::new(5, 4)?;
    let set = enumerate_all(&form.dehomogenize(), &m)?;
    let mut shown = 0;
    for (k1, k2) in (0..10).flat_map(|k1| (1..10).map(move |k2| (k1, k2))) {
        let ctx = ErrorSumContext::new(&form, set.base(), k1, k2, 1)?;
        let direct = error_sum_direct(&ctx, &set);
        if direct.norm() < 1e-9 || shown == 4 {
            continue;
        }
        shown += 1;
        let closed = error_sum_formula(&ctx)?;
        println!("E({k1}, {k2}, 1): r = {}, r' = {}, direct {direct:.6}, formula {closed:?}", ctx.r, ctx.r_prime);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> quadcong::Result<()> {
    run_example()
}
