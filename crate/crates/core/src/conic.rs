//! Ternary forms `Q(x,y,z) = ax^2 + bxy + cy^2 + dxz + eyz + fz^2`, their
//! dehomogenization `q(x,y) = Q(x,y,1)`, and the stratified parametrization
//! of the solutions of `q(x,y) = 0 mod p^n`.
//!
//! Given a base point `(alpha, beta)` with `A = q_x(alpha, beta)` and
//! `B = q_y(alpha, beta)`, a slope `t` maps to
//!
//! ```text
//! (alpha - t M(t), beta - M(t)),   M(t) = (A t + B) / (a t^2 + b t + c)
//! ```
//!
//! and slope infinity maps to `(alpha - A/a, beta)`. Modulo `p^n` the full
//! solution set is the disjoint union of strata `M_s`, `s = 0..=n`, where
//! stratum `s` uses slopes `t / p^s` with `t = 1..=p^(n-s)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{inv_mod, is_prime, jacobi, PrimePowerModulus, Residue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub f: i64,
}

impl TernaryForm {
    pub const fn new(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Self {
        Self { a, b, c, d, e, f }
    }

    /// `x^2 + y^2 + z^2`.
    pub const fn sum_of_squares() -> Self {
        Self::new(1, 0, 1, 0, 0, 1)
    }

    pub fn coefficients(&self) -> [i64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    /// `4 det(A_Q) = 4acf + bed - ae^2 - cd^2 - fb^2`, always an integer.
    pub fn four_delta(&self) -> i128 {
        let [a, b, c, d, e, f] = self.coefficients().map(i128::from);
        4 * a * c * f + b * e * d - a * e * e - c * d * d - f * b * b
    }

    /// `b^2 - 4ac`.
    pub fn disc2(&self) -> i128 {
        let [a, b, c, ..] = self.coefficients().map(i128::from);
        b * b - 4 * a * c
    }

    pub fn eval(&self, x: i128, y: i128, z: i128) -> i128 {
        let [a, b, c, d, e, f] = self.coefficients().map(i128::from);
        a * x * x + b * x * y + c * y * y + d * x * z + e * y * z + f * z * z
    }

    pub fn validate(&self, p: u64) -> AdmissibilityReport {
        let pi = p as i128;
        let g = |v: i128| v.gcd(&pi) as u64;
        AdmissibilityReport {
            p,
            odd_prime: p != 2 && is_prime(p),
            gcd_a: g(self.a as i128),
            gcd_4ac_minus_b2: g(-self.disc2()),
            gcd_four_delta: g(self.four_delta()),
        }
    }

    pub fn dehomogenize(&self) -> DehomogenizedForm {
        DehomogenizedForm { form: *self }
    }

    /// `S_p(Q) = ((b^2 - 4ac) / p)`.
    pub fn s_p(&self, p: u64) -> i8 {
        jacobi(self.disc2(), p)
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {}",
            self.a, self.b, self.c, self.d, self.e, self.f
        )
    }
}

/// Parses six whitespace-separated integers `a b c d e f`.
impl FromStr for TernaryForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed: Vec<i64> = s
            .split_whitespace()
            .map(|w| w.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("form {s:?}: {e}")))?;
        let [a, b, c, d, e, f] = parsed[..] else {
            return Err(Error::Parse(format!(
                "form {s:?}: expected 6 integers, got {}",
                parsed.len()
            )));
        };
        Ok(Self::new(a, b, c, d, e, f))
    }
}

/// Outcome of the admissibility test `gcd(a (4ac - b^2) Delta, p) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub p: u64,
    pub odd_prime: bool,
    pub gcd_a: u64,
    pub gcd_4ac_minus_b2: u64,
    pub gcd_four_delta: u64,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.odd_prime && self.gcd_a == 1 && self.gcd_4ac_minus_b2 == 1 && self.gcd_four_delta == 1
    }

    pub fn require(self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::NotAdmissible(self))
        }
    }

    /// Names of the failed conditions, empty when admissible.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.odd_prime {
            out.push("p is not an odd prime");
        }
        if self.gcd_a != 1 {
            out.push("p divides a");
        }
        if self.gcd_4ac_minus_b2 != 1 {
            out.push("p divides 4ac - b^2");
        }
        if self.gcd_four_delta != 1 {
            out.push("p divides Delta");
        }
        out
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failures = self.failures();
        if failures.is_empty() {
            write!(f, "admissible for p = {}", self.p)
        } else {
            write!(f, "{} (p = {})", failures.join(", "), self.p)
        }
    }
}

/// `q(x,y) = ax^2 + bxy + cy^2 + dx + ey + f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DehomogenizedForm {
    form: TernaryForm,
}

impl DehomogenizedForm {
    pub fn form(&self) -> &TernaryForm {
        &self.form
    }

    pub fn eval_mod(&self, x: Residue, y: Residue) -> Residue {
        let m = x.modulus();
        let TernaryForm { a, b, c, d, e, f } = self.form;
        let k = |v: i64| m.residue(v as i128);
        k(a) * x * x + k(b) * x * y + k(c) * y * y + k(d) * x + k(e) * y + k(f)
    }

    /// `q_x = 2ax + by + d`.
    pub fn partial_x(&self, x: Residue, y: Residue) -> Residue {
        let m = x.modulus();
        let TernaryForm { a, b, d, .. } = self.form;
        m.residue(2 * a as i128) * x + m.residue(b as i128) * y + m.residue(d as i128)
    }

    /// `q_y = bx + 2cy + e`.
    pub fn partial_y(&self, x: Residue, y: Residue) -> Residue {
        let m = x.modulus();
        let TernaryForm { b, c, e, .. } = self.form;
        m.residue(b as i128) * x + m.residue(2 * c as i128) * y + m.residue(e as i128)
    }

    /// `a t^2 + b t s + c s^2` for a slope `t/s`, reduced in the ring of `t`.
    fn slope_denominator(&self, t: Residue, s: Residue) -> Residue {
        let m = t.modulus();
        let TernaryForm { a, b, c, .. } = self.form;
        m.residue(a as i128) * t * t + m.residue(b as i128) * t * s + m.residue(c as i128) * s * s
    }
}

/// A point of `q = 0 mod p^n` with its partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasePoint {
    pub alpha: Residue,
    pub beta: Residue,
    /// `q_x(alpha, beta)`
    pub a_partial: Residue,
    /// `q_y(alpha, beta)`
    pub b_partial: Residue,
}

impl BasePoint {
    pub fn modulus(&self) -> PrimePowerModulus {
        self.alpha.modulus()
    }
}

/// A slope in `Z/p^n` or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slope {
    Finite(i128),
    Infinity,
}

/// `s(t)` for a single slope; `None` when `a t^2 + b t + c` is not a unit.
pub fn parametrize_point(
    q: &DehomogenizedForm,
    base: &BasePoint,
    t: Slope,
    m: &PrimePowerModulus,
) -> Option<(Residue, Residue)> {
    let BasePoint {
        alpha,
        beta,
        a_partial,
        b_partial,
    } = *base;
    match t {
        Slope::Finite(t) => {
            let t = m.residue(t);
            let w = q.slope_denominator(t, m.one());
            let w_inv = w.inverse().ok()?;
            let shift = (a_partial * t + b_partial) * w_inv;
            Some((alpha - t * shift, beta - shift))
        }
        Slope::Infinity => {
            let a_inv = inv_mod(q.form.a as i128, m).ok()?;
            Some((alpha - a_partial * a_inv, beta))
        }
    }
}

/// Lexicographically smallest root mod `p`, then `n - 1` Hensel steps with
/// the canonical branch (`k1 = 0` when `q_y` is a unit, else `k2 = 0`).
pub fn find_base_point(q: &DehomogenizedForm, m: &PrimePowerModulus) -> Result<BasePoint> {
    q.form.validate(m.p()).require()?;
    let p = m.p();
    let mp = m.with_exponent(1)?;
    let (mut alpha, mut beta) = (0..p)
        .flat_map(|x| (0..p).map(move |y| (x, y)))
        .find(|&(x, y)| {
            q.eval_mod(mp.residue(x as i128), mp.residue(y as i128))
                .is_zero()
        })
        .map(|(x, y)| (x as i128, y as i128))
        .ok_or(Error::NoSolutionModP { p })?;
    for k in 1..m.n() {
        let next = m.with_exponent(k + 1)?;
        let (x, y) = (next.residue(alpha), next.residue(beta));
        let value = q.eval_mod(x, y).value();
        let pk = m.p_pow(k);
        debug_assert_eq!(value % pk, 0);
        let v = (value / pk) as i128;
        let qx = q.partial_x(x, y).value() as i128;
        let qy = q.partial_y(x, y).value() as i128;
        if mp.is_unit(qy) {
            let k2 = (-mp.residue(v) * inv_mod(qy, &mp)?).value() as i128;
            beta += k2 * pk as i128;
        } else {
            let k1 = (-mp.residue(v) * inv_mod(qx, &mp)?).value() as i128;
            alpha += k1 * pk as i128;
        }
    }
    let (alpha, beta) = (m.residue(alpha), m.residue(beta));
    debug_assert!(q.eval_mod(alpha, beta).is_zero());
    Ok(BasePoint {
        alpha,
        beta,
        a_partial: q.partial_x(alpha, beta),
        b_partial: q.partial_y(alpha, beta),
    })
}

/// One enumerated solution, tagged with its stratum and parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConicPoint {
    pub stratum: u32,
    pub t: u64,
    #[serde(serialize_with = "residue_value")]
    pub x: Residue,
    #[serde(serialize_with = "residue_value")]
    pub y: Residue,
}

fn residue_value<S: serde::Serializer>(r: &Residue, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(r.value())
}

/// The points of stratum `s`, ordered by `t`.
pub fn enumerate_stratum(
    q: &DehomogenizedForm,
    base: &BasePoint,
    s: u32,
    m: &PrimePowerModulus,
) -> Vec<ConicPoint> {
    assert!(s <= m.n(), "stratum {s} above n = {}", m.n());
    let p = m.p();
    let ps = m.residue(m.p_pow(s) as i128);
    let count = m.p_pow(m.n() - s);
    let mut out = Vec::with_capacity(count as usize);
    for t_int in 1..=count {
        let admitted = if s == 0 {
            q.slope_denominator(m.residue(t_int as i128), m.one())
                .is_unit()
        } else {
            t_int % p != 0
        };
        let t = m.residue(t_int as i128);
        let w = q.slope_denominator(t, ps);
        debug_assert_eq!(admitted, w.is_unit());
        if !admitted {
            continue;
        }
        let w_inv = w.inverse().expect("admitted slopes give unit denominators");
        let shift = (base.a_partial * t + base.b_partial * ps) * w_inv;
        out.push(ConicPoint {
            stratum: s,
            t: t_int,
            x: base.alpha - t * shift,
            y: base.beta - ps * shift,
        });
    }
    out
}

/// The stratified solution list of `q = 0 mod p^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicSolutionSet {
    modulus: PrimePowerModulus,
    base: BasePoint,
    entries: Vec<ConicPoint>,
}

impl ConicSolutionSet {
    pub fn modulus(&self) -> PrimePowerModulus {
        self.modulus
    }

    pub fn base(&self) -> &BasePoint {
        &self.base
    }

    pub fn entries(&self) -> &[ConicPoint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn stratum(&self, s: u32) -> impl Iterator<Item = &ConicPoint> {
        self.entries.iter().filter(move |e| e.stratum == s)
    }

    /// The `(x, y)` pairs as canonical integers.
    pub fn points(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.entries.iter().map(|e| (e.x.value(), e.y.value()))
    }
}

/// All strata `s = 0..=n`, checked for distinctness and cardinality.
pub fn enumerate_all(q: &DehomogenizedForm, m: &PrimePowerModulus) -> Result<ConicSolutionSet> {
    let expected = count_solutions(q, m)?;
    let base = find_base_point(q, m)?;
    let entries: Vec<ConicPoint> = (0..=m.n())
        .flat_map(|s| enumerate_stratum(q, &base, s, m))
        .collect();
    let distinct: HashSet<(u64, u64)> = entries.iter().map(|e| (e.x.value(), e.y.value())).collect();
    let found = entries.len() as u64;
    if distinct.len() as u64 != found || found != expected {
        return Err(Error::CardinalityMismatch {
            expected,
            found: distinct.len() as u64,
        });
    }
    if let Some(bad) = entries.iter().find(|e| !q.eval_mod(e.x, e.y).is_zero()) {
        return Err(Error::IdentityMismatch(format!(
            "enumerated point ({}, {}) is not a solution",
            bad.x, bad.y
        )));
    }
    Ok(ConicSolutionSet {
        modulus: *m,
        base,
        entries,
    })
}

/// `N_{p^n}(q) = p^(n-1) (p - ((b^2 - 4ac)/p))`, no enumeration.
pub fn count_solutions(q: &DehomogenizedForm, m: &PrimePowerModulus) -> Result<u64> {
    q.form.validate(m.p()).require()?;
    let chi = q.form.s_p(m.p()) as i64;
    Ok(m.p_pow(m.n() - 1) * (m.p() as i64 - chi) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, n: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, n).unwrap()
    }

    fn circle() -> DehomogenizedForm {
        TernaryForm::sum_of_squares().dehomogenize()
    }

    fn pts(list: &[ConicPoint]) -> Vec<(u64, u64, u64)> {
        list.iter().map(|e| (e.t, e.x.value(), e.y.value())).collect()
    }

    #[test]
    fn validate_examples() {
        let q = TernaryForm::sum_of_squares();
        let r = q.validate(5);
        assert!(r.is_admissible());
        assert_eq!((q.four_delta(), -q.disc2()), (4, 4));
        assert!(!q.validate(2).is_admissible());
        let q = TernaryForm::new(1, 5, 1, 0, 0, 1);
        assert_eq!(q.four_delta(), -21);
        assert_eq!(-q.disc2(), -21);
        assert!(q.validate(5).is_admissible());
        let bad = TernaryForm::new(5, 0, 1, 0, 0, 1).validate(5);
        assert_eq!(bad.failures(), vec!["p divides a", "p divides 4ac - b^2", "p divides Delta"]);
    }

    #[test]
    fn parse_form() {
        assert_eq!("1 0 1 0 0 1".parse::<TernaryForm>().unwrap(), TernaryForm::sum_of_squares());
        assert!("1 0 1 0 0".parse::<TernaryForm>().is_err());
        assert!("1 0 1 0 0 x".parse::<TernaryForm>().is_err());
    }

    #[test]
    fn base_point_examples() {
        let b = find_base_point(&circle(), &m(5, 2)).unwrap();
        assert_eq!((b.alpha.value(), b.beta.value()), (0, 7));
        let b = find_base_point(&circle(), &m(5, 1)).unwrap();
        assert_eq!((b.alpha.value(), b.beta.value()), (0, 2));
        assert_eq!((b.a_partial.value(), b.b_partial.value()), (0, 4));
        let b = find_base_point(&circle(), &m(3, 1)).unwrap();
        assert_eq!((b.alpha.value(), b.beta.value()), (1, 1));
        let bad = TernaryForm::new(5, 0, 1, 0, 0, 1).dehomogenize();
        assert!(matches!(
            find_base_point(&bad, &m(5, 2)),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn parametrize_examples() {
        let md = m(5, 1);
        let base = find_base_point(&circle(), &md).unwrap();
        let pt = parametrize_point(&circle(), &base, Slope::Finite(1), &md).unwrap();
        assert_eq!((pt.0.value(), pt.1.value()), (3, 0));
        assert_eq!(parametrize_point(&circle(), &base, Slope::Finite(2), &md), None);
        let pt = parametrize_point(&circle(), &base, Slope::Infinity, &md).unwrap();
        assert_eq!((pt.0.value(), pt.1.value()), (0, 2));
    }

    #[test]
    fn parametrization_is_injective() {
        let md = m(7, 2);
        let q = TernaryForm::new(2, 1, 3, -1, 4, 5).dehomogenize();
        let base = find_base_point(&q, &md).unwrap();
        let mut seen = HashSet::new();
        for t in 0..md.q() as i128 {
            if let Some((x, y)) = parametrize_point(&q, &base, Slope::Finite(t), &md) {
                assert!(q.eval_mod(x, y).is_zero());
                assert!(seen.insert((x.value(), y.value())), "t = {t} repeats a point");
            }
        }
    }

    #[test]
    fn stratum_examples() {
        let md = m(5, 1);
        let base = find_base_point(&circle(), &md).unwrap();
        assert_eq!(
            pts(&enumerate_stratum(&circle(), &base, 0, &md)),
            vec![(1, 3, 0), (4, 2, 0), (5, 0, 3)]
        );
        assert_eq!(pts(&enumerate_stratum(&circle(), &base, 1, &md)), vec![(1, 0, 2)]);
    }

    #[test]
    fn stratum_sizes() {
        let md = m(5, 4);
        let q = circle();
        let base = find_base_point(&q, &md).unwrap();
        for s in 1..md.n() {
            let expected = md.p_pow(md.n() - s) - md.p_pow(md.n() - s - 1);
            assert_eq!(enumerate_stratum(&q, &base, s, &md).len() as u64, expected);
        }
        assert_eq!(enumerate_stratum(&q, &base, 4, &md).len(), 1);
    }

    #[test]
    fn enumerate_all_examples() {
        let set = enumerate_all(&circle(), &m(5, 1)).unwrap();
        let mut got: Vec<_> = set.points().collect();
        got.sort();
        assert_eq!(got, vec![(0, 2), (0, 3), (2, 0), (3, 0)]);
        assert_eq!(enumerate_all(&circle(), &m(5, 2)).unwrap().len(), 20);
        assert_eq!(enumerate_all(&circle(), &m(3, 1)).unwrap().len(), 4);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_solutions(&circle(), &m(5, 2)).unwrap(), 20);
        assert_eq!(count_solutions(&circle(), &m(3, 3)).unwrap(), 36);
        // disc2 = 1 is a residue for every p
        let q = TernaryForm::new(1, 1, 0, 0, 0, 1).dehomogenize();
        assert_eq!(count_solutions(&q, &m(7, 1)).unwrap(), 6);
    }

    #[test]
    fn count_lifts_by_p() {
        let q = TernaryForm::new(3, -1, 2, 4, 0, -5).dehomogenize();
        for p in [5u64, 7, 11] {
            if !q.form().validate(p).is_admissible() {
                continue;
            }
            for n in 1..5 {
                let lo = count_solutions(&q, &m(p, n)).unwrap();
                let hi = count_solutions(&q, &m(p, n + 1)).unwrap();
                assert_eq!(hi, p * lo);
            }
        }
    }
}
