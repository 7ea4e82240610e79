//! Complete exponential sums modulo `p^n`.
//!
//! Two evaluators, each paired with a direct-summation oracle:
//!
//! - [`cochrane_eval`] evaluates `S_alpha(f; p^n) = sum_{x = alpha mod p}
//!   e_{p^n}(f(x))` by stationary phase for a rational amplitude `f`.
//! - [`error_sum_formula`] evaluates the conic sum
//!   `E(k1, k2, z; p^n) = sum_{(x,y) in M} e_{p^n}(z (k1 x + k2 y))` from the
//!   invariants `D`, `J` and a square root of `D`.
//!
//! Any input outside the closed forms' reach comes back as
//! [`Unsupported`] so the caller can fall back to the direct sums.
//!
//! The Legendre factor at a stationary point `t*` of
//! `f(t) = z p^r (l1 x(t) + l2 y(t))` is `(z sqrt(D) / p)` for the root that
//! pairs with `J - 2 sqrt(D)` and `(-z sqrt(D) / p)` for the one pairing with
//! `J + 2 sqrt(D)`: the numerator `C(t)` of `f'` satisfies
//! `C'(t*) = +-2 sqrt(D)`, so `2 p^-r f''(t*) = +-4 z sqrt(D) / w(t*)^2`.

use serde::Serialize;

use crate::charsum::{e_q, gauss_phase, ComplexAccumulator, ComplexValue};
use crate::conic::{BasePoint, ConicSolutionSet, TernaryForm};
use crate::error::{Error, Result};
use crate::modarith::{inv_mod, jacobi, sqrt_mod, val_p, Order, PrimePowerModulus, Residue};
use crate::polyrat::{normalized_root_multiplicity, IntPolynomial, RationalAmplitude};

/// Why a closed form declined to answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Unsupported {
    /// `n < 2`.
    ExponentTooSmall,
    /// `ord_p(f') > n - 2` (infinite for constant amplitudes).
    OrderTooLarge { r: Order, n: u32 },
    /// The stationary point is a repeated root of `p^-r f'` mod `p`.
    RepeatedRoot { multiplicity: u32 },
    /// `(aB - bA) l1 + aA l2 = 0 mod p^n`.
    DegenerateDirection,
    /// No square root of `D` matches the pinning congruence.
    RootSelection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CochraneOutcome {
    Evaluated {
        value: ComplexValue,
        /// `ord_p(f')`
        r: i64,
        /// The lifted stationary point, absent when the sum vanishes by
        /// case (i).
        alpha_star: Option<u64>,
    },
    Unsupported(Unsupported),
}

impl CochraneOutcome {
    pub fn value(&self) -> Option<ComplexValue> {
        match self {
            CochraneOutcome::Evaluated { value, .. } => Some(*value),
            CochraneOutcome::Unsupported(_) => None,
        }
    }
}

fn check_regular(f: &RationalAmplitude, alpha: i128, p: u64) -> Result<()> {
    if f.is_regular_at(alpha, p) {
        Ok(())
    } else {
        Err(Error::PoleModP { p })
    }
}

/// The literal `p^(n-1)`-term sum over `x = alpha mod p`, `1 <= x <= p^n`.
pub fn s_alpha_direct(
    f: &RationalAmplitude,
    alpha: i128,
    m: &PrimePowerModulus,
) -> Result<ComplexValue> {
    let p = m.p();
    check_regular(f, alpha, p)?;
    let start = match alpha.rem_euclid(p as i128) as u64 {
        0 => p,
        a => a,
    };
    let mut acc = ComplexAccumulator::default();
    for x in (start..=m.q()).step_by(p as usize) {
        let v = f.eval_mod(m.residue(x as i128))?;
        acc.add(e_q(v.value() as i128, m.q()));
    }
    Ok(acc.value())
}

/// The unrestricted complete sum `sum_{t=1}^{p^n} e_{p^n}(f(t))`.
pub fn complete_sum_direct(f: &RationalAmplitude, m: &PrimePowerModulus) -> Result<ComplexValue> {
    let mut acc = ComplexAccumulator::default();
    for x in 1..=m.q() {
        let v = f.eval_mod(m.residue(x as i128))?;
        acc.add(e_q(v.value() as i128, m.q()));
    }
    Ok(acc.value())
}

/// Stationary-phase evaluation of `S_alpha(f; p^n)`.
///
/// With `r = ord_p(f')` and `g = p^-r f'`: zero when `g(alpha) != 0 mod p`;
/// otherwise, for a simple root, `alpha` is lifted to `alpha*` with
/// `g(alpha*) = 0 mod p^ceil((n-r)/2)` and the sum equals
/// `e_{p^n}(f(alpha*)) p^{(n+r)/2}`, times `(A/p) G_p / sqrt(p)` with
/// `A = 2 g'(alpha*)` when `n - r` is odd.
pub fn cochrane_eval(
    f: &RationalAmplitude,
    alpha: i128,
    m: &PrimePowerModulus,
) -> Result<CochraneOutcome> {
    cochrane_eval_with_extra_lift(f, alpha, m, 0)
}

/// [`cochrane_eval`] with `alpha*` lifted `extra` digits beyond the
/// required precision; the value does not depend on `extra`.
pub fn cochrane_eval_with_extra_lift(
    f: &RationalAmplitude,
    alpha: i128,
    m: &PrimePowerModulus,
    extra: u32,
) -> Result<CochraneOutcome> {
    let (p, n) = (m.p(), m.n());
    check_regular(f, alpha, p)?;
    if n < 2 {
        return Ok(CochraneOutcome::Unsupported(Unsupported::ExponentTooSmall));
    }
    let derivative = f.derivative()?;
    let order = derivative.ord_p(p);
    let r = match order {
        Order::Finite(r) if r <= n as i64 - 2 => r,
        _ => return Ok(CochraneOutcome::Unsupported(Unsupported::OrderTooLarge { r: order, n })),
    };
    let (g, _) = derivative.normalize_p_content(p);
    let mp = m.with_exponent(1)?;
    if !g.eval_mod(mp.residue(alpha))?.is_zero() {
        return Ok(CochraneOutcome::Evaluated {
            value: ComplexValue::new(0.0, 0.0),
            r,
            alpha_star: None,
        });
    }
    let multiplicity = normalized_root_multiplicity(&g, alpha, p)?;
    if multiplicity != 1 {
        return Ok(CochraneOutcome::Unsupported(Unsupported::RepeatedRoot { multiplicity }));
    }
    let digits = ((n as i64 - r + 1) / 2) as u32 + extra;
    let alpha_star = hensel_lift_root(g.numerator(), alpha, p, digits.min(n))?;
    let phase = e_q(f.eval_mod(m.residue(alpha_star))?.value() as i128, m.q());
    let scale = (p as f64).powf((n as i64 + r) as f64 / 2.0);
    let mut value = phase * scale;
    if (n as i64 - r) % 2 == 1 {
        let a = g.derivative()?.eval_mod(mp.residue(alpha_star))? * mp.residue(2);
        value *= jacobi(a.value() as i128, p) as f64 * gauss_phase(p);
    }
    Ok(CochraneOutcome::Evaluated {
        value,
        r,
        alpha_star: Some(alpha_star as u64),
    })
}

/// Lifts a simple root `alpha` of `poly` mod `p` to a root mod `p^digits`.
fn hensel_lift_root(poly: &IntPolynomial, alpha: i128, p: u64, digits: u32) -> Result<i128> {
    let derivative = poly.derivative();
    let mut x = alpha.rem_euclid(p as i128);
    for k in 2..=digits {
        let mk = PrimePowerModulus::new(p, k)?;
        let xr = mk.residue(x);
        let slope = inv_mod(derivative.eval_mod(xr).value() as i128, &mk)?;
        x = (xr - poly.eval_mod(xr) * slope).value() as i128;
    }
    Ok(x)
}

/// Invariants of one frequency `(k1, k2)` and twist `z` for the conic sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorSumContext {
    pub form: TernaryForm,
    pub base: BasePoint,
    pub k1: i128,
    pub k2: i128,
    pub z: i128,
    pub modulus: PrimePowerModulus,
    /// `min(val_p(k1), val_p(k2), n)`
    pub r: u32,
    pub l1: i128,
    pub l2: i128,
    /// `(a l2^2 - b l1 l2 + c l1^2)(aB^2 - bAB + cA^2) mod p^n`
    pub d: Residue,
    /// `l1 (be - 2cd) + l2 (bd - 2ae)`
    pub j: i128,
    /// `(aB - bA) l1 + aA l2`, reduced to its symmetric representative.
    pub linear: i128,
    /// `val_p(linear)`; infinite when `linear = 0 mod p^n`.
    pub r_prime: Order,
}

impl ErrorSumContext {
    pub fn new(
        form: &TernaryForm,
        base: &BasePoint,
        k1: i128,
        k2: i128,
        z: i128,
    ) -> Result<Self> {
        let m = base.modulus();
        let (p, n) = (m.p(), m.n());
        if !m.is_unit(z) {
            return Err(Error::NonUnit { value: z, p });
        }
        let cap = |o: Order| match o {
            Order::Finite(e) => (e as u32).min(n),
            Order::Infinity => n,
        };
        let r = cap(val_p(k1, p)).min(cap(val_p(k2, p)));
        let pr = (p as i128).pow(r);
        let (l1, l2) = (k1 / pr, k2 / pr);
        let TernaryForm { a, b, c, d, e, .. } = *form;
        let [a, b, c, d, e] = [a, b, c, d, e].map(i128::from);
        let (aa, bb) = (base.a_partial, base.b_partial);
        let k = |v: i128| m.residue(v);
        let norm = k(a) * bb * bb - k(b) * aa * bb + k(c) * aa * aa;
        if norm != k(-form.four_delta()) {
            return Err(Error::IdentityMismatch(format!(
                "aB^2 - bAB + cA^2 = {norm} but -4 Delta = {} mod {m}",
                k(-form.four_delta())
            )));
        }
        let binary = k(a * l2 % m.q() as i128 * l2 - b * l1 % m.q() as i128 * l2 + c * l1 % m.q() as i128 * l1);
        let linear = (k(a) * bb - k(b) * aa) * k(l1) + k(a) * aa * k(l2);
        Ok(Self {
            form: *form,
            base: *base,
            k1,
            k2,
            z,
            modulus: m,
            r,
            l1,
            l2,
            d: binary * norm,
            j: l1 * (b * e - 2 * c * d) + l2 * (b * d - 2 * a * e),
            linear: linear.signed(),
            r_prime: linear.val_p(),
        })
    }

    /// The amplitude `f_s(t) = z (k1 x_s(t) + k2 y_s(t))` of stratum `s` as
    /// a rational function of `t`, built from integer representatives of
    /// the base point.
    pub fn stratum_amplitude(&self, s: u32) -> Result<RationalAmplitude> {
        let TernaryForm { a, b, c, .. } = self.form;
        let [a, b, c] = [a, b, c].map(i128::from);
        let ps = (self.modulus.p() as i128).pow(s);
        let alpha = self.base.alpha.value() as i128;
        let beta = self.base.beta.value() as i128;
        let aa = self.base.a_partial.value() as i128;
        let bb = self.base.b_partial.value() as i128;
        let w = IntPolynomial::new(vec![c * ps * ps, b * ps, a])?;
        let lin = IntPolynomial::new(vec![self.k2 * ps, self.k1])?;
        let tangent = IntPolynomial::new(vec![bb * ps, aa])?;
        let numerator = &w.scale(self.k1 * alpha + self.k2 * beta) - &lin.try_mul(&tangent)?;
        RationalAmplitude::new(numerator.scale(self.z), w)
    }
}

/// `sum_{(x,y) in M} e_{p^n}(z (k1 x + k2 y))`, term by term.
pub fn error_sum_direct(ctx: &ErrorSumContext, solutions: &ConicSolutionSet) -> ComplexValue {
    let m = ctx.modulus;
    debug_assert_eq!(solutions.modulus(), m);
    let (zk1, zk2) = (m.residue(ctx.z * ctx.k1), m.residue(ctx.z * ctx.k2));
    solutions
        .entries()
        .iter()
        .map(|e| e_q((zk1 * e.x + zk2 * e.y).value() as i128, m.q()))
        .collect::<ComplexAccumulator>()
        .value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorSumOutcome {
    Evaluated(ComplexValue),
    Unsupported(Unsupported),
}

impl ErrorSumOutcome {
    pub fn value(&self) -> Option<ComplexValue> {
        match self {
            ErrorSumOutcome::Evaluated(v) => Some(*v),
            ErrorSumOutcome::Unsupported(_) => None,
        }
    }
}

/// `C_{n-r}(z, D)`: 1 for even `n - r`, `(-z sqrt(D) / p) G_p / sqrt(p)` for
/// odd `n - r`.
pub fn c_factor(n_minus_r: u32, z: i128, sqrt_d: Residue) -> ComplexValue {
    if n_minus_r % 2 == 0 {
        return ComplexValue::new(1.0, 0.0);
    }
    let p = sqrt_d.modulus().p();
    let symbol = jacobi(-z * sqrt_d.value() as i128, p);
    gauss_phase(p) * symbol as f64
}

/// Closed-form `E(k1, k2, z; p^n)`:
///
/// ```text
/// C_{n-r}(z, D) p^{(n+r)/2} [ e_{p^{n-r}}(z (J + 2 sqrt D)/(4ac - b^2))
///                           + (-1/p^{n-r}) e_{p^{n-r}}(z (J - 2 sqrt D)/(4ac - b^2)) ]
/// ```
///
/// and zero when `D` is not a unit square mod `p`. For `r' = 0` the principal
/// root of `D` mod `p^{n-r}` is used; for `r' >= 1` the root congruent to
/// `l2 B a - l1 A c` mod `p`.
pub fn error_sum_formula(ctx: &ErrorSumContext) -> Result<ErrorSumOutcome> {
    let m = ctx.modulus;
    let (p, n, r) = (m.p(), m.n(), ctx.r);
    if r + 2 > n {
        return Ok(ErrorSumOutcome::Unsupported(Unsupported::OrderTooLarge {
            r: Order::Finite(r as i64),
            n,
        }));
    }
    let r_prime = match ctx.r_prime {
        Order::Finite(e) => e,
        Order::Infinity => return Ok(ErrorSumOutcome::Unsupported(Unsupported::DegenerateDirection)),
    };
    let d = ctx.d.value() as i128;
    if jacobi(d, p) != 1 {
        return Ok(ErrorSumOutcome::Evaluated(ComplexValue::new(0.0, 0.0)));
    }
    let inner = m.with_exponent(n - r)?;
    let (principal, other) = sqrt_mod(d, &inner)?.expect("D is a residue mod p");
    let sqrt_d = if r_prime == 0 {
        principal
    } else {
        let TernaryForm { a, c, .. } = ctx.form;
        let pin = ctx.l2 * ctx.base.b_partial.value() as i128 * a as i128
            - ctx.l1 * ctx.base.a_partial.value() as i128 * c as i128;
        let pin = pin.rem_euclid(p as i128) as u64;
        match [principal, other].into_iter().find(|s| s.value() % p == pin) {
            Some(s) => s,
            None => return Ok(ErrorSumOutcome::Unsupported(Unsupported::RootSelection)),
        }
    };
    let disc_inv = inv_mod(-ctx.form.disc2(), &inner)?;
    let phase = |sign: i128| {
        let arg = inner.residue(ctx.z)
            * disc_inv
            * (inner.residue(ctx.j) + inner.residue(2 * sign) * sqrt_d);
        e_q(arg.value() as i128, inner.q())
    };
    let minus_one = if (n - r) % 2 == 0 { 1.0 } else { jacobi(-1, p) as f64 };
    let scale = (p as f64).powf((n + r) as f64 / 2.0);
    let value = c_factor(n - r, ctx.z, sqrt_d) * scale * (phase(1) + phase(-1) * minus_one);
    Ok(ErrorSumOutcome::Evaluated(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conic::{enumerate_all, find_base_point};

    fn m(p: u64, n: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, n).unwrap()
    }

    fn rat(num: &[i128], den: &[i128]) -> RationalAmplitude {
        RationalAmplitude::new(IntPolynomial::from_coeffs(num), IntPolynomial::from_coeffs(den))
            .unwrap()
    }

    fn close(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn direct_examples() {
        let sq = rat(&[0, 0, 1], &[1]);
        assert!(close(s_alpha_direct(&sq, 0, &m(3, 2)).unwrap(), ComplexValue::new(3.0, 0.0), 1e-12));
        assert!(s_alpha_direct(&sq, 1, &m(3, 2)).unwrap().norm() < 1e-12);
        let inv = rat(&[1], &[0, 1]);
        assert!(s_alpha_direct(&inv, 1, &m(5, 2)).unwrap().norm() < 1e-12);
        assert_eq!(s_alpha_direct(&inv, 5, &m(5, 2)), Err(Error::PoleModP { p: 5 }));
    }

    #[test]
    fn cochrane_examples() {
        let sq = rat(&[0, 0, 1], &[1]);
        let out = cochrane_eval(&sq, 0, &m(3, 2)).unwrap();
        assert!(close(out.value().unwrap(), ComplexValue::new(3.0, 0.0), 1e-12));
        let out = cochrane_eval(&sq, 1, &m(3, 2)).unwrap();
        assert_eq!(out, CochraneOutcome::Evaluated {
            value: ComplexValue::new(0.0, 0.0),
            r: 0,
            alpha_star: None,
        });
        let cube = rat(&[0, 0, 0, 1], &[1]);
        assert_eq!(
            cochrane_eval(&cube, 0, &m(5, 3)).unwrap(),
            CochraneOutcome::Unsupported(Unsupported::RepeatedRoot { multiplicity: 2 })
        );
        assert_eq!(
            cochrane_eval(&sq, 0, &m(5, 1)).unwrap(),
            CochraneOutcome::Unsupported(Unsupported::ExponentTooSmall)
        );
        let constant = rat(&[4], &[1]);
        assert!(matches!(
            cochrane_eval(&constant, 0, &m(5, 3)).unwrap(),
            CochraneOutcome::Unsupported(Unsupported::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn cochrane_odd_exponent_uses_gauss_phase() {
        // t^2 mod 5^3, alpha = 0: r = 0, n - r = 3 odd
        let sq = rat(&[0, 0, 1], &[1]);
        let md = m(5, 3);
        let closed = cochrane_eval(&sq, 0, &md).unwrap().value().unwrap();
        let direct = s_alpha_direct(&sq, 0, &md).unwrap();
        assert!(close(closed, direct, 1e-9), "{closed} vs {direct}");
    }

    #[test]
    fn extra_lifting_does_not_change_value() {
        let f = rat(&[3, 1, 2], &[1, 0, 5]);
        for (p, n) in [(7u64, 4u32), (5, 5), (3, 6)] {
            let md = m(p, n);
            for alpha in 0..p as i128 {
                let Ok(CochraneOutcome::Evaluated { value, alpha_star: Some(_), .. }) =
                    cochrane_eval(&f, alpha, &md)
                else {
                    continue;
                };
                let lifted = cochrane_eval_with_extra_lift(&f, alpha, &md, 1).unwrap();
                assert!(close(value, lifted.value().unwrap(), 1e-9));
            }
        }
    }

    fn circle_ctx(p: u64, n: u32, k1: i128, k2: i128, z: i128) -> (ErrorSumContext, ConicSolutionSet) {
        let form = TernaryForm::sum_of_squares();
        let md = m(p, n);
        let set = enumerate_all(&form.dehomogenize(), &md).unwrap();
        let base = find_base_point(&form.dehomogenize(), &md).unwrap();
        (ErrorSumContext::new(&form, &base, k1, k2, z).unwrap(), set)
    }

    #[test]
    fn zero_frequency_counts_solutions() {
        let (ctx, set) = circle_ctx(5, 3, 0, 0, 1);
        let v = error_sum_direct(&ctx, &set);
        assert!(close(v, ComplexValue::new(set.len() as f64, 0.0), 1e-9));
        assert_eq!(set.len(), 100);
    }

    #[test]
    fn error_sum_examples() {
        for (p, n, k1, k2, z) in [(5, 2, 1, 0, 1), (5, 3, 5, 5, 2), (7, 3, 2, 3, 1)] {
            let (ctx, set) = circle_ctx(p, n, k1, k2, z);
            let direct = error_sum_direct(&ctx, &set);
            let formula = error_sum_formula(&ctx).unwrap().value().unwrap();
            let tol = 1e-6 * (p as f64).powf((n + ctx.r) as f64 / 2.0);
            assert!(close(direct, formula, tol), "{direct} vs {formula}");
            assert!(direct.norm() <= set.len() as f64 + 1e-9);
        }
    }

    #[test]
    fn context_invariants() {
        let (ctx, _) = circle_ctx(5, 3, 10, 35, 3);
        assert_eq!((ctx.r, ctx.l1, ctx.l2), (1, 2, 7));
        assert_eq!(ctx.j, 0);
        let (ctx, _) = circle_ctx(5, 2, 0, 0, 1);
        assert_eq!(ctx.r, 2);
        assert!(matches!(
            ErrorSumContext::new(&ctx.form, &ctx.base, 1, 0, 5),
            Err(Error::NonUnit { .. })
        ));
    }

    #[test]
    fn stratum_amplitude_matches_enumeration() {
        let (ctx, set) = circle_ctx(5, 3, 3, 4, 2);
        let md = ctx.modulus;
        for s in 0..=md.n() {
            let f = ctx.stratum_amplitude(s).unwrap();
            for e in set.stratum(s) {
                let expected = md.residue(ctx.z * ctx.k1) * e.x + md.residue(ctx.z * ctx.k2) * e.y;
                assert_eq!(f.eval_mod(md.residue(e.t as i128)).unwrap(), expected);
            }
        }
    }
}
