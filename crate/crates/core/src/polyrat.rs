//! Integer polynomials in one variable and rational amplitudes `F1/F2`.
//!
//! `ord_p` of a rational amplitude is computed on the stored representation:
//! [`RationalAmplitude::derivative`] applies the quotient rule verbatim and
//! never cancels common factors, since cancellation can change the order.
//!
//! Text grammar (used by the CLI):
//!
//! ```text
//! amplitude := poly | "(" poly ")" "/" "(" poly ")" | poly "/" "(" poly ")"
//! poly      := term (("+" | "-") term)*
//! term      := ["-"] integer ["*" "x" ["^" degree]] | ["-"] "x" ["^" degree]
//! ```
//!
//! Whitespace is ignored, `t` is accepted as a synonym of `x`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::modarith::{val_p, Order, PrimePowerModulus, Residue};

pub const MAX_DEGREE: usize = 64;

/// Dense integer polynomial, index = degree. The zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i128>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::DegreeTooLarge(coeffs.len() - 1));
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: i128) -> Self {
        Self::from_coeffs(&[c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(&[0, 1])
    }

    /// Panics above the degree cap; intended for literals.
    pub fn from_coeffs(coeffs: &[i128]) -> Self {
        Self::new(coeffs.to_vec()).expect("degree within cap")
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_mod(&self, x: Residue) -> Residue {
        let m = x.modulus();
        self.coeffs
            .iter()
            .rev()
            .fold(m.zero(), |acc, &c| acc * x + m.residue(c))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as i128)
            .collect();
        Self::new(coeffs).expect("derivative lowers the degree")
    }

    pub fn scale(&self, k: i128) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect()).expect("same degree")
    }

    /// Minimum p-adic valuation over the coefficients.
    pub fn ord_p(&self, p: u64) -> Order {
        self.coeffs
            .iter()
            .map(|&c| val_p(c, p))
            .min()
            .unwrap_or(Order::Infinity)
    }

    /// Exact division of every coefficient by `p^k`.
    pub fn divide_by_p_power(&self, p: u64, k: u32) -> Self {
        let d = (p as i128).pow(k);
        debug_assert!(self.coeffs.iter().all(|c| c % d == 0));
        Self {
            coeffs: self.coeffs.iter().map(|c| c / d).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![0i128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Reduction modulo `p`, as canonical residues.
    fn reduce_mod_p(&self, p: u64) -> Vec<i128> {
        let mut out: Vec<i128> = self
            .coeffs
            .iter()
            .map(|c| c.rem_euclid(p as i128))
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeffs.get(k).unwrap_or(&0) + rhs.coeffs.get(k).unwrap_or(&0))
            .collect();
        IntPolynomial::new(coeffs).expect("sum keeps the degree cap")
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        self.scale(-1)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

/// Panics when the product exceeds the degree cap.
impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.try_mul(rhs).expect("product exceeds the degree cap")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*x")?,
                _ => write!(f, "{a}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut coeffs = vec![0i128; 1];
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i128;
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &compact[start..i];
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            let (c, k) = parse_term(term)?;
            if k > MAX_DEGREE {
                return Err(Error::DegreeTooLarge(k));
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] += sign * c;
        }
        Self::new(coeffs)
    }
}

fn parse_term(term: &str) -> Result<(i128, usize)> {
    let bad = || Error::Parse(format!("cannot parse term {term:?}"));
    let (coef, var) = match term.find(['x', 't']) {
        None => return Ok((term.parse().map_err(|_| bad())?, 0)),
        Some(pos) => (&term[..pos], &term[pos + 1..]),
    };
    let c = match coef {
        "" => 1,
        _ => coef
            .strip_suffix('*')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?,
    };
    let k = match var {
        "" => 1,
        _ => var
            .strip_prefix('^')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?,
    };
    Ok((c, k))
}

/// A rational function `F1/F2` with integer polynomial numerator and
/// denominator, kept in the representation it was built with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalAmplitude {
    numerator: IntPolynomial,
    denominator: IntPolynomial,
}

impl RationalAmplitude {
    pub fn new(numerator: IntPolynomial, denominator: IntPolynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn polynomial(p: IntPolynomial) -> Self {
        Self {
            numerator: p,
            denominator: IntPolynomial::constant(1),
        }
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.denominator
    }

    /// `F1(x) * F2(x)^-1 mod q`.
    pub fn eval_mod(&self, x: Residue) -> Result<Residue> {
        let m = x.modulus();
        let den = self.denominator.eval_mod(x);
        if !den.is_unit() {
            return Err(Error::PoleModP { p: m.p() });
        }
        Ok(self.numerator.eval_mod(x) * den.inverse()?)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.numerator.eval_f64(x) / self.denominator.eval_f64(x)
    }

    /// Quotient rule `(F1'F2 - F1F2') / F2^2`, no cancellation.
    pub fn derivative(&self) -> Result<Self> {
        let (f1, f2) = (&self.numerator, &self.denominator);
        let num = &f1.derivative().try_mul(f2)? - &f1.try_mul(&f2.derivative())?;
        let den = f2.try_mul(f2)?;
        Self::new(num, den)
    }

    /// `ord_p(F1) - ord_p(F2)`; infinite for the zero function.
    pub fn ord_p(&self, p: u64) -> Order {
        match (self.numerator.ord_p(p), self.denominator.ord_p(p)) {
            (Order::Infinity, _) => Order::Infinity,
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a - b),
            (Order::Finite(_), Order::Infinity) => unreachable!("denominator is nonzero"),
        }
    }

    /// Strips the p-content of numerator and denominator separately, giving
    /// `p^-r f` with both parts primitive. Returns `r` alongside.
    pub fn normalize_p_content(&self, p: u64) -> (Self, Order) {
        let order = self.ord_p(p);
        let strip = |poly: &IntPolynomial| match poly.ord_p(p) {
            Order::Finite(e) => poly.divide_by_p_power(p, e as u32),
            Order::Infinity => poly.clone(),
        };
        (
            Self {
                numerator: strip(&self.numerator),
                denominator: strip(&self.denominator),
            },
            order,
        )
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Self::new(
            self.numerator.try_mul(&rhs.numerator)?,
            self.denominator.try_mul(&rhs.denominator)?,
        )
    }

    /// Whether the denominator is a unit at `x` modulo `p`.
    pub fn is_regular_at(&self, x: i128, p: u64) -> bool {
        let m = PrimePowerModulus::new(p, 1).expect("odd prime");
        self.denominator.eval_mod(m.residue(x)).is_unit()
    }
}

impl fmt::Display for RationalAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == IntPolynomial::constant(1) {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

impl FromStr for RationalAmplitude {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let unwrap_parens = |part: &str| -> Result<IntPolynomial> {
            let inner = part
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(part);
            if inner.contains(['(', ')']) {
                return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
            }
            inner.parse()
        };
        match compact.split_once('/') {
            None => Ok(Self::polynomial(unwrap_parens(&compact)?)),
            Some((num, den)) => Self::new(unwrap_parens(num)?, unwrap_parens(den)?),
        }
    }
}

/// Multiplicity of `alpha` as a root modulo `p` of the numerator of `g`.
///
/// `g` must already be normalized so that `ord_p(g) = 0`; both parts are
/// stripped of p-content before reduction.
pub fn normalized_root_multiplicity(g: &RationalAmplitude, alpha: i128, p: u64) -> Result<u32> {
    if !g.is_regular_at(alpha, p) {
        return Err(Error::PoleModP { p });
    }
    let (g, _) = g.normalize_p_content(p);
    let mut poly = g.numerator.reduce_mod_p(p);
    let a = alpha.rem_euclid(p as i128);
    let pi = p as i128;
    let mut mult = 0;
    loop {
        if poly.is_empty() {
            // identically zero mod p: not a meaningful multiplicity
            return Ok(u32::MAX);
        }
        // synthetic division by (x - a)
        let mut quotient = vec![0i128; poly.len().saturating_sub(1)];
        let mut carry = 0i128;
        for k in (0..poly.len()).rev() {
            let v = (poly[k] + carry * a).rem_euclid(pi);
            if k == 0 {
                carry = v;
            } else {
                quotient[k - 1] = v;
                carry = v;
            }
        }
        if carry != 0 {
            return Ok(mult);
        }
        mult += 1;
        while quotient.last() == Some(&0) {
            quotient.pop();
        }
        poly = quotient;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i128]) -> IntPolynomial {
        IntPolynomial::from_coeffs(c)
    }

    fn rat(n: &[i128], d: &[i128]) -> RationalAmplitude {
        RationalAmplitude::new(poly(n), poly(d)).unwrap()
    }

    fn m(p: u64, n: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, n).unwrap()
    }

    #[test]
    fn poly_eval_examples() {
        assert_eq!(poly(&[1, 0, 1]).eval_mod(m(5, 2).residue(2)).value(), 5);
        assert_eq!(IntPolynomial::zero().eval_mod(m(3, 3).residue(7)).value(), 0);
        assert_eq!(poly(&[4, 3]).eval_mod(m(3, 3).residue(9)).value(), 4);
    }

    #[test]
    fn rat_eval_examples() {
        let inv = rat(&[1], &[0, 1]);
        assert_eq!(inv.eval_mod(m(5, 2).residue(2)).unwrap().value(), 13);
        let id = rat(&[0, 1], &[1]);
        assert_eq!(id.eval_mod(m(3, 3).residue(11)).unwrap().value(), 11);
        assert_eq!(
            inv.eval_mod(m(5, 2).residue(5)),
            Err(Error::PoleModP { p: 5 })
        );
    }

    #[test]
    fn derivative_examples() {
        let d = rat(&[0, 0, 1], &[1]).derivative().unwrap();
        assert_eq!((d.numerator(), d.denominator()), (&poly(&[0, 2]), &poly(&[1])));
        let d = rat(&[1], &[0, 1]).derivative().unwrap();
        assert_eq!((d.numerator(), d.denominator()), (&poly(&[-1]), &poly(&[0, 0, 1])));
        let d = rat(&[1, 1], &[-1, 1]).derivative().unwrap();
        assert_eq!(
            (d.numerator(), d.denominator()),
            (&poly(&[-2]), &poly(&[1, -2, 1]))
        );
    }

    #[test]
    fn order_examples() {
        assert_eq!(poly(&[9, 0, 3]).ord_p(3), Order::Finite(1));
        assert_eq!(poly(&[1, 1]).ord_p(5), Order::Finite(0));
        assert_eq!(IntPolynomial::zero().ord_p(3), Order::Infinity);
        assert_eq!(rat(&[3, 3], &[2, 1]).ord_p(3), Order::Finite(1));
        assert_eq!(rat(&[1, 1], &[6, 3]).ord_p(3), Order::Finite(-1));
        assert_eq!(rat(&[0, 0, 1], &[1]).ord_p(7), Order::Finite(0));
    }

    #[test]
    fn multiplicity_examples() {
        let g = rat(&[0, 2], &[1]);
        assert_eq!(normalized_root_multiplicity(&g, 0, 5).unwrap(), 1);
        assert_eq!(normalized_root_multiplicity(&g, 1, 5).unwrap(), 0);
        let g = rat(&[0, 0, 3], &[1]);
        assert_eq!(normalized_root_multiplicity(&g, 0, 5).unwrap(), 2);
        let pole = rat(&[1], &[0, 1]);
        assert_eq!(
            normalized_root_multiplicity(&pole, 0, 5),
            Err(Error::PoleModP { p: 5 })
        );
    }

    #[test]
    fn parse_and_display() {
        assert!("c".parse::<IntPolynomial>().is_err());
        assert_eq!("1 + 2*x + 3*x^2".parse::<IntPolynomial>().unwrap(), poly(&[1, 2, 3]));
        assert_eq!("x^2 - x".parse::<IntPolynomial>().unwrap(), poly(&[0, -1, 1]));
        assert_eq!("-3*t + 4".parse::<IntPolynomial>().unwrap(), poly(&[4, -3]));
        assert_eq!("0".parse::<IntPolynomial>().unwrap(), IntPolynomial::zero());
        assert!("2**x".parse::<IntPolynomial>().is_err());
        assert!("x^".parse::<IntPolynomial>().is_err());
        assert!("".parse::<IntPolynomial>().is_err());
        let f: RationalAmplitude = "(x + 1)/(x - 1)".parse().unwrap();
        assert_eq!(f, rat(&[1, 1], &[-1, 1]));
        let f: RationalAmplitude = "1/x".parse().unwrap();
        assert_eq!(f, rat(&[1], &[0, 1]));
        assert_eq!("x/0".parse::<RationalAmplitude>(), Err(Error::ZeroDenominator));
        let shown = rat(&[1, -2, 3], &[0, 1]).to_string();
        assert_eq!(shown.parse::<RationalAmplitude>().unwrap(), rat(&[1, -2, 3], &[0, 1]));
    }

    #[test]
    fn degree_cap() {
        assert_eq!(
            IntPolynomial::new(vec![1; 66]),
            Err(Error::DegreeTooLarge(65))
        );
        let big = IntPolynomial::new(vec![1; 40]).unwrap();
        assert!(big.try_mul(&big).is_err());
    }

    fn small_rat() -> impl Strategy<Value = RationalAmplitude> {
        (
            prop::collection::vec(-20i128..=20, 1..=3),
            prop::collection::vec(-20i128..=20, 1..=3),
        )
            .prop_filter_map("nonzero denominator", |(n, d)| {
                RationalAmplitude::new(IntPolynomial::new(n).ok()?, IntPolynomial::new(d).ok()?).ok()
            })
    }

    proptest! {
        #![proptest_config(crate::seeded_proptest_config(256))]

        #[test]
        fn derivative_matches_central_difference(f in small_rat(), x in -3.0f64..3.0) {
            let d = f.derivative().unwrap();
            let h = 1e-5;
            let den = f.denominator().eval_f64(x);
            prop_assume!(den.abs() > 0.5);
            prop_assume!(f.denominator().eval_f64(x + h).abs() > 0.4);
            prop_assume!(f.denominator().eval_f64(x - h).abs() > 0.4);
            let fd = (f.eval_f64(x + h) - f.eval_f64(x - h)) / (2.0 * h);
            let exact = d.eval_f64(x);
            prop_assert!((exact - fd).abs() <= 1e-6 * exact.abs().max(1.0), "{} vs {}", exact, fd);
        }

        #[test]
        fn ord_is_additive(f in small_rat(), g in small_rat(), p in prop::sample::select(vec![3u64, 5, 7])) {
            prop_assume!(!f.numerator().is_zero() && !g.numerator().is_zero());
            let fg = f.try_mul(&g).unwrap();
            prop_assert_eq!(fg.ord_p(p), f.ord_p(p) + g.ord_p(p));
        }

        #[test]
        fn eval_invariant_under_unit_rescaling(
            f in small_rat(),
            u in prop::collection::vec(-9i128..=9, 1..=2),
            x in 0i128..125,
        ) {
            let md = m(5, 3);
            let u = IntPolynomial::new(u).unwrap();
            let xr = md.residue(x);
            prop_assume!(!u.is_zero() && u.eval_mod(xr).is_unit());
            prop_assume!(f.denominator().eval_mod(xr).is_unit());
            let scaled = RationalAmplitude::new(
                f.numerator().try_mul(&u).unwrap(),
                f.denominator().try_mul(&u).unwrap(),
            ).unwrap();
            prop_assert_eq!(f.eval_mod(xr).unwrap(), scaled.eval_mod(xr).unwrap());
        }
    }
}
