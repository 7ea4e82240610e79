// Quadratic Gauss sums `G_{p^k}` summed directly and in closed form.

use quadcong::charsum::{gauss_closed, gauss_direct};
use quadcong::PrimePowerModulus;

pub fn run_example() -> quadcong::Result<()> {
    for (p, k) in [(3, 1), (3, 4), (5, 3), (7, 2), (11, 3)] {
        let m = PrimePowerModulus::new(p, k)?;
        let direct = gauss_direct(m.q());
        let closed = gauss_closed(&m);
        println!("G_{{{p}^{k}}}: direct {direct:.6}, closed {closed:.6}");
        assert!((direct - closed).norm() <= 1e-8 * (m.q() as f64).sqrt());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> quadcong::Result<()> {
    run_example()
}
