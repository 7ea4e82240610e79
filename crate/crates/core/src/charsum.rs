//! Additive characters `e_q(z) = exp(2 pi i z / q)` and quadratic Gauss sums.
//!
//! Every character sum in the crate accumulates in ascending index order
//! through [`ComplexAccumulator`] (Neumaier compensation on both parts), so
//! results are reproducible bit for bit.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::modarith::PrimePowerModulus;

pub type ComplexValue = Complex64;

/// `exp(2 pi i (z mod q) / q)`; the reduction happens in integers first.
pub fn e_q(z: i128, q: u64) -> ComplexValue {
    assert!(q >= 1, "e_q needs q >= 1");
    let r = z.rem_euclid(q as i128) as f64;
    let angle = 2.0 * PI * r / q as f64;
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// Neumaier-compensated sum of one real stream.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexAccumulator {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexAccumulator {
    pub fn add(&mut self, z: ComplexValue) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> ComplexValue {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<ComplexValue> for ComplexAccumulator {
    fn from_iter<I: IntoIterator<Item = ComplexValue>>(iter: I) -> Self {
        let mut acc = Self::default();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// `G_q = sum_{x=1}^{q} e_q(x^2)` by direct summation.
pub fn gauss_direct(q: u64) -> ComplexValue {
    (1..=q)
        .map(|x| {
            let sq = (x as u128 * x as u128 % q as u128) as i128;
            e_q(sq, q)
        })
        .collect::<ComplexAccumulator>()
        .value()
}

/// The classical value of `G_p`: `sqrt(p)` for `p = 1 mod 4`, `i sqrt(p)`
/// for `p = 3 mod 4`.
pub fn gauss_prime(p: u64) -> ComplexValue {
    let root = (p as f64).sqrt();
    if p % 4 == 1 {
        Complex64::new(root, 0.0)
    } else {
        Complex64::new(0.0, root)
    }
}

/// `G_{p^k}` in closed form: `p^{k/2}` for even `k`, `p^{(k-1)/2} G_p` for odd.
pub fn gauss_closed(m: &PrimePowerModulus) -> ComplexValue {
    let (p, k) = (m.p(), m.n());
    if k % 2 == 0 {
        Complex64::new((p as f64).powi(k as i32 / 2), 0.0)
    } else {
        gauss_prime(p) * (p as f64).powi((k as i32 - 1) / 2)
    }
}

/// `G_p / sqrt(p)`, the unit factor that appears for odd `n - r`.
pub fn gauss_phase(p: u64) -> ComplexValue {
    gauss_prime(p) / (p as f64).sqrt()
}

/// Checks the hard-coded sign convention of [`gauss_prime`] against the
/// direct sum.
pub fn gauss_convention_holds(p: u64) -> bool {
    (gauss_direct(p) - gauss_prime(p)).norm() <= 1e-8 * (p as f64)
}
