//! Exhaustive reference computations.
//!
//! Nothing here touches the parametrization or closed-form code paths: each
//! function loops over the whole box and tests membership with plain integer
//! arithmetic.

use crate::conic::TernaryForm;

fn reduce(v: i128, q: i128) -> i128 {
    v.rem_euclid(q)
}

/// Every `(x, y)` in `[0, q)^2` with `Q(x, y, 1) = 0 mod q`, in
/// lexicographic order.
pub fn conic_solutions(form: &TernaryForm, q: u64) -> Vec<(u64, u64)> {
    let qi = q as i128;
    let [a, b, c, d, e, f] = form.coefficients().map(|v| reduce(v as i128, qi));
    let mut out = Vec::new();
    for x in 0..qi {
        let ax2_dx_f = reduce(a * x % qi * x + d * x + f, qi);
        let bx_e = reduce(b * x + e, qi);
        for y in 0..qi {
            let v = (ax2_dx_f + bx_e * y + c * y % qi * y) % qi;
            if v == 0 {
                out.push((x as u64, y as u64));
            }
        }
    }
    out
}

/// Number of `(x, y, z)` in `(Z/p)^3` with `Q = 0 mod p` and `z != 0`.
pub fn projective_count_mod_p(form: &TernaryForm, p: u64) -> u64 {
    let pi = p as i128;
    let mut count = 0;
    for x in 0..pi {
        for y in 0..pi {
            for z in 1..pi {
                if form.eval(x, y, z).rem_euclid(pi) == 0 {
                    count += 1;
                }
            }
        }
    }
    count
}
