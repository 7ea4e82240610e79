//! The dual form `Q'` of a ternary form, its matrix invariants, and
//! primitive integer zeros of ternary forms in a max-norm box.
//!
//! All arithmetic is exact in `i128`. `Delta` never appears on its own: the
//! pipeline carries `4 Delta` and writes `16 Delta = 4 (4 Delta)`.

use num_integer::{Integer, Roots};
use serde::Serialize;

use crate::conic::TernaryForm;
use crate::error::{Error, Result};

/// Work cap for [`count_primitive_zeros`].
pub const ZERO_COUNT_BUDGET: u128 = 1_000_000_000;
/// Box size up to which the plain triple loop is used.
pub const TRIPLE_LOOP_MAX: i64 = 16;

pub type Matrix3 = [[i128; 3]; 3];

/// `xx l1^2 + xy l1 l2 + yy l2^2 + xz l1 l3 + yz l2 l3 + zz l3^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntegralTernaryForm {
    pub xx: i128,
    pub xy: i128,
    pub yy: i128,
    pub xz: i128,
    pub yz: i128,
    pub zz: i128,
}

impl IntegralTernaryForm {
    pub fn new(xx: i128, xy: i128, yy: i128, xz: i128, yz: i128, zz: i128) -> Self {
        Self { xx, xy, yy, xz, yz, zz }
    }

    pub fn eval(&self, x: i128, y: i128, z: i128) -> i128 {
        self.xx * x * x + self.xy * x * y + self.yy * y * y + self.xz * x * z + self.yz * y * z + self.zz * z * z
    }

    pub fn scale(&self, k: i128) -> Self {
        Self::new(self.xx * k, self.xy * k, self.yy * k, self.xz * k, self.yz * k, self.zz * k)
    }

    /// The symmetric matrix with halved off-diagonal entries; needs even
    /// cross coefficients.
    pub fn matrix(&self) -> Result<Matrix3> {
        if [self.xy, self.xz, self.yz].iter().any(|c| c % 2 != 0) {
            return Err(Error::InvalidConfig(format!(
                "{self} has an odd cross coefficient, its associated matrix is not integral"
            )));
        }
        let (h, g, f) = (self.xy / 2, self.xz / 2, self.yz / 2);
        Ok([[self.xx, h, g], [h, self.yy, f], [g, f, self.zz]])
    }

    /// Determinant, minor gcd and divisor count of the associated matrix.
    pub fn invariants(&self) -> Result<FormInvariants> {
        let mat = self.matrix()?;
        let det = det3(&mat);
        if det == 0 {
            return Err(Error::SingularForm);
        }
        Ok(FormInvariants { det, minor_gcd: minor_gcd(&mat), tau_det: tau(det.unsigned_abs()) })
    }
}

impl From<&TernaryForm> for IntegralTernaryForm {
    fn from(q: &TernaryForm) -> Self {
        let [a, b, c, d, e, f] = q.coefficients().map(i128::from);
        Self::new(a, b, c, d, e, f)
    }
}

impl std::fmt::Display for IntegralTernaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} {} {} {} {} {}]", self.xx, self.xy, self.yy, self.xz, self.yz, self.zz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormInvariants {
    pub det: i128,
    /// gcd of the 2x2 minors
    pub minor_gcd: u128,
    /// number of divisors of `|det|`
    pub tau_det: u64,
}

/// Coefficients of `M l1^2 + N l1 l2 + O l2^2 + P l1 l3 + Qc l2 l3 + R l3^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualForm {
    #[serde(rename = "M")]
    pub m: i128,
    #[serde(rename = "N")]
    pub n: i128,
    #[serde(rename = "O")]
    pub o: i128,
    #[serde(rename = "P")]
    pub p: i128,
    #[serde(rename = "Qc")]
    pub qc: i128,
    #[serde(rename = "R")]
    pub r: i128,
    pub det_assoc: i128,
    pub minor_gcd: u128,
    pub tau_det: u64,
}

impl DualForm {
    pub fn as_form(&self) -> IntegralTernaryForm {
        IntegralTernaryForm::new(self.m, self.n, self.o, self.p, self.qc, self.r)
    }

    pub fn invariants(&self) -> FormInvariants {
        FormInvariants { det: self.det_assoc, minor_gcd: self.minor_gcd, tau_det: self.tau_det }
    }
}

/// The dual form of `Q`, with its determinant checked against
/// `64 Delta^2 (4ac - b^2)^3 = 4 (4 Delta)^2 (4ac - b^2)^3`.
pub fn dual_form(q: &TernaryForm) -> Result<DualForm> {
    let [a, b, c, d, e, _] = q.coefficients().map(i128::from);
    let four_delta = q.four_delta();
    let disc = 4 * a * c - b * b;
    if four_delta == 0 || disc == 0 {
        return Err(Error::SingularForm);
    }
    let sixteen_delta = 4 * four_delta;
    let (u, v) = (b * e - 2 * c * d, b * d - 2 * a * e);
    let form = IntegralTernaryForm::new(
        sixteen_delta * a + u * u,
        -sixteen_delta * b + 2 * u * v,
        sixteen_delta * c + v * v,
        -2 * disc * u,
        -2 * disc * v,
        disc * disc,
    );
    let mat = form.matrix().map_err(|_| Error::IdentityMismatch(format!("dual form {form} has odd cross terms")))?;
    let det = det3(&mat);
    let expected = 4 * four_delta * four_delta * disc * disc * disc;
    if det != expected {
        return Err(Error::IdentityMismatch(format!("det Q' = {det}, expected {expected}")));
    }
    // |det| = 4 (4 Delta)^2 |4ac - b^2|^3, factored piecewise
    let mut factors = factorize(4);
    for (prime, k) in factorize(four_delta.unsigned_abs()) {
        add_factor(&mut factors, prime, 2 * k);
    }
    for (prime, k) in factorize(disc.unsigned_abs()) {
        add_factor(&mut factors, prime, 3 * k);
    }
    Ok(DualForm {
        m: form.xx,
        n: form.xy,
        o: form.yy,
        p: form.xz,
        qc: form.yz,
        r: form.zz,
        det_assoc: det,
        minor_gcd: minor_gcd(&mat),
        tau_det: factors.iter().map(|&(_, k)| k as u64 + 1).product(),
    })
}

fn add_factor(factors: &mut Vec<(u128, u32)>, prime: u128, k: u32) {
    match factors.iter_mut().find(|(q, _)| *q == prime) {
        Some(entry) => entry.1 += k,
        None => factors.push((prime, k)),
    }
}

pub fn det3(m: &Matrix3) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// The nine 2x2 minors, row pair major.
pub fn minors(m: &Matrix3) -> [i128; 9] {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut out = [0; 9];
    for (i, &(r1, r2)) in pairs.iter().enumerate() {
        for (j, &(c1, c2)) in pairs.iter().enumerate() {
            out[3 * i + j] = m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
        }
    }
    out
}

pub fn minor_gcd(m: &Matrix3) -> u128 {
    minors(m).iter().fold(0u128, |g, x| g.gcd(&x.unsigned_abs()))
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of positive divisors of `n >= 1`.
pub fn tau(n: u128) -> u64 {
    assert!(n >= 1, "tau needs n >= 1");
    factorize(n).iter().map(|&(_, k)| k as u64 + 1).product()
}

fn primitive(x: i128, y: i128, z: i128) -> bool {
    x.gcd(&y).gcd(&z) == 1
}

/// Primitive zeros of `form` with `max(|x|,|y|,|z|) <= bound`. Uses the
/// triple loop up to [`TRIPLE_LOOP_MAX`], then [`count_primitive_zeros_pairs`].
pub fn count_primitive_zeros(form: &IntegralTernaryForm, bound: i64, budget: u128) -> Result<u64> {
    if bound <= TRIPLE_LOOP_MAX {
        count_primitive_zeros_triple(form, bound, budget)
    } else {
        count_primitive_zeros_pairs(form, bound, budget)
    }
}

pub fn count_primitive_zeros_triple(form: &IntegralTernaryForm, bound: i64, budget: u128) -> Result<u64> {
    let side = (2 * bound.max(0) + 1) as u128;
    if side.pow(3) > budget {
        return Err(Error::BudgetExceeded { needed: side.pow(3), budget });
    }
    let b = bound as i128;
    let mut count = 0;
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                if form.eval(x, y, z) == 0 && primitive(x, y, z) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// For each `(x, y)`, solves the quadratic in `z` over the integers.
pub fn count_primitive_zeros_pairs(form: &IntegralTernaryForm, bound: i64, budget: u128) -> Result<u64> {
    let side = (2 * bound.max(0) + 1) as u128;
    if side * side > budget {
        return Err(Error::BudgetExceeded { needed: side * side, budget });
    }
    let b = bound as i128;
    let mut count = 0;
    let mut hit = |x: i128, y: i128, z: i128| {
        if z.abs() <= b && primitive(x, y, z) {
            debug_assert_eq!(form.eval(x, y, z), 0);
            count += 1;
        }
    };
    for x in -b..=b {
        for y in -b..=b {
            let c1 = form.xz * x + form.yz * y;
            let c0 = form.xx * x * x + form.xy * x * y + form.yy * y * y;
            if form.zz == 0 {
                if c1 != 0 {
                    if c0 % c1 == 0 {
                        hit(x, y, -c0 / c1);
                    }
                } else if c0 == 0 {
                    (-b..=b).for_each(|z| hit(x, y, z));
                }
                continue;
            }
            let disc = c1 * c1 - 4 * form.zz * c0;
            if disc < 0 {
                continue;
            }
            let s = disc.sqrt();
            if s * s != disc {
                continue;
            }
            let den = 2 * form.zz;
            for num in if s == 0 { vec![-c1] } else { vec![-c1 + s, -c1 - s] } {
                if num % den == 0 {
                    hit(x, y, num / den);
                }
            }
        }
    }
    Ok(count)
}

/// `tau(|det|) (1 + B sqrt(delta) / |det|^(1/3))`.
pub fn bound_value(inv: &FormInvariants, bound: i64) -> f64 {
    let det = inv.det.unsigned_abs() as f64;
    inv.tau_det as f64 * (1.0 + bound as f64 * (inv.minor_gcd as f64).sqrt() / det.cbrt())
}

/// Primitive-zero count divided by [`bound_value`].
pub fn bound_ratio(form: &IntegralTernaryForm, inv: &FormInvariants, bound: i64, budget: u128) -> Result<f64> {
    Ok(count_primitive_zeros(form, bound, budget)? as f64 / bound_value(inv, bound))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadricRow {
    #[serde(rename = "B")]
    pub bound: i64,
    pub count: u64,
    #[serde(rename = "bound")]
    pub bound_value: f64,
    pub ratio: f64,
}

pub fn bound_sweep(
    form: &IntegralTernaryForm,
    inv: &FormInvariants,
    bounds: &[i64],
    budget: u128,
) -> Result<Vec<QuadricRow>> {
    bounds
        .iter()
        .map(|&b| {
            let count = count_primitive_zeros(form, b, budget)?;
            let bound_value = bound_value(inv, b);
            Ok(QuadricRow { bound: b, count, bound_value, ratio: count as f64 / bound_value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone() -> IntegralTernaryForm {
        IntegralTernaryForm::new(1, 0, 1, 0, 0, -1)
    }

    #[test]
    fn dual_of_sum_of_squares() {
        let d = dual_form(&TernaryForm::sum_of_squares()).unwrap();
        assert_eq!((d.m, d.n, d.o, d.p, d.qc, d.r), (16, 0, 16, 0, 0, 16));
        assert_eq!(d.det_assoc, 4096);
        assert_eq!(d.minor_gcd, 256);
        assert_eq!(d.tau_det, 13);
    }

    #[test]
    fn dual_with_cross_term() {
        let q: TernaryForm = "1 1 1 0 0 1".parse().unwrap();
        assert_eq!(q.four_delta(), 3);
        let d = dual_form(&q).unwrap();
        assert_eq!(d.det_assoc, 972);
        let mat = d.as_form().matrix().unwrap();
        let brute = minors(&mat).iter().fold(0u128, |g, m| num_integer::gcd(g, m.unsigned_abs()));
        assert_eq!(d.minor_gcd, brute);
        assert_eq!(d.tau_det, tau(972));
    }

    #[test]
    fn singular_forms_rejected() {
        let degenerate: TernaryForm = "1 2 1 0 0 1".parse().unwrap();
        assert_eq!(dual_form(&degenerate), Err(Error::SingularForm));
        let flat: TernaryForm = "1 0 1 0 0 0".parse().unwrap();
        assert_eq!(dual_form(&flat), Err(Error::SingularForm));
        assert_eq!(IntegralTernaryForm::new(1, 2, 1, 0, 0, 0).invariants(), Err(Error::SingularForm));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(4096), 13);
        assert_eq!(tau(1), 1);
        assert_eq!(tau(12), 6);
        assert_eq!(tau(97), 2);
    }

    #[test]
    fn minor_gcd_examples() {
        let diag = |k| [[k, 0, 0], [0, k, 0], [0, 0, k]];
        assert_eq!(minor_gcd(&diag(16)), 256);
        assert_eq!(minor_gcd(&diag(1)), 1);
    }

    #[test]
    fn zero_count_examples() {
        assert_eq!(count_primitive_zeros(&cone(), 5, ZERO_COUNT_BUDGET).unwrap(), 24);
        let f = IntegralTernaryForm::new(1, 0, 1, 0, 0, -2);
        assert_eq!(count_primitive_zeros(&f, 1, ZERO_COUNT_BUDGET).unwrap(), 8);
        let sphere = IntegralTernaryForm::new(1, 0, 1, 0, 0, 1);
        assert_eq!(count_primitive_zeros(&sphere, 30, ZERO_COUNT_BUDGET).unwrap(), 0);
    }

    #[test]
    fn both_algorithms_agree() {
        let forms = [
            cone(),
            IntegralTernaryForm::new(1, 0, 1, 0, 0, -2),
            IntegralTernaryForm::new(2, 3, -1, 1, 0, 0),
            IntegralTernaryForm::new(0, 2, 0, 0, 0, -1),
            IntegralTernaryForm::new(1, 0, -3, 4, 2, 0),
        ];
        for f in forms {
            for b in [1, 4, 13] {
                assert_eq!(
                    count_primitive_zeros_triple(&f, b, ZERO_COUNT_BUDGET).unwrap(),
                    count_primitive_zeros_pairs(&f, b, ZERO_COUNT_BUDGET).unwrap(),
                    "{f} at B = {b}"
                );
            }
        }
    }

    #[test]
    fn scaling_keeps_zero_set() {
        let f = cone();
        let g = f.scale(16);
        for b in [5, 10, 20] {
            assert_eq!(
                count_primitive_zeros(&f, b, ZERO_COUNT_BUDGET).unwrap(),
                count_primitive_zeros(&g, b, ZERO_COUNT_BUDGET).unwrap()
            );
        }
        let (fi, gi) = (f.invariants().unwrap(), g.invariants().unwrap());
        assert_eq!((fi.det, fi.minor_gcd, fi.tau_det), (-1, 1, 1));
        assert_eq!((gi.det, gi.minor_gcd), (-4096, 256));
    }

    #[test]
    fn budget_and_odd_cross_terms() {
        assert!(matches!(
            count_primitive_zeros(&cone(), 100, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(IntegralTernaryForm::new(1, 1, 1, 0, 0, 1).matrix(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn sweep_is_monotone() {
        let inv = cone().invariants().unwrap();
        let rows = bound_sweep(&cone(), &inv, &[5, 10, 15, 20], ZERO_COUNT_BUDGET).unwrap();
        assert_eq!(rows[0].count, 24);
        assert!(rows.windows(2).all(|w| w[0].count <= w[1].count));
        assert_eq!(rows[0].bound_value, 6.0);
    }
}
