// Residues modulo `p^n`: inverses, Jacobi symbols and Hensel-lifted square
// roots.

use quadcong::modarith::{inv_mod, jacobi, sqrt_mod, val_p};
use quadcong::PrimePowerModulus;

pub fn run_example() -> quadcong::Result<()> {
    let m = PrimePowerModulus::new(7, 4)?;
    let x = m.residue(10);
    let inv = inv_mod(10, &m)?;
    println!("10^-1 mod {m} = {inv}; check {}", x * inv);
    assert_eq!((x * inv).value(), 1);

    for a in [2i128, 3, 5, 6] {
        println!("({a}/7) = {}", jacobi(a, 7));
    }
    println!("val_7(98) = {}, val_7(0) = {}", val_p(98, 7), val_p(0, 7));

    // 2 is a square mod 7, so it lifts to every 7^n
    let (root, other) = sqrt_mod(2, &m)?.expect("2 is a residue mod 7");
    println!("sqrt(2) mod {m} = {root} (and {other})");
    assert_eq!((root * root).value(), 2);
    assert!(sqrt_mod(3, &m)?.is_none());
    Ok(())
}

#[allow(dead_code)]
fn main() -> quadcong::Result<()> {
    run_example()
}
