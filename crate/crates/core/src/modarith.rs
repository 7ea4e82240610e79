//! Exact arithmetic in `Z/p^n` for a fixed odd prime `p`.
//!
//! Residues are stored as canonical representatives in `[0, q)` with
//! `q = p^n < 2^62`; every product goes through `u128` before reduction,
//! so nothing wraps.
//!
//! Valuations use the exponent convention throughout: `val_p(18, 3) = 2`,
//! never `3^2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported bit length of `q = p^n`.
pub const MODULUS_BITS: u32 = 62;

/// A p-adic order: an integer exponent, or infinity for zero.
///
/// `Finite` sorts below `Infinity`, so `min` over a list of orders does the
/// right thing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Order {
    Finite(i64),
    Infinity,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(e) => Some(e),
            Order::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinity)
    }
}

impl Add for Order {
    type Output = Order;

    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinity,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(e) => write!(f, "{e}"),
            Order::Infinity => f.write_str("inf"),
        }
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The ring `Z/p^n` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePowerModulus {
    p: u64,
    n: u32,
    q: u64,
}

impl PrimePowerModulus {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroExponent);
        }
        let too_large = Error::ModulusTooLarge {
            p,
            n,
            bits: MODULUS_BITS,
        };
        let q = p.checked_pow(n).ok_or(too_large.clone())?;
        if q >= 1u64 << MODULUS_BITS {
            return Err(too_large);
        }
        Ok(Self { p, n, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `p^k` for `k <= n`.
    pub fn p_pow(&self, k: u32) -> u64 {
        assert!(k <= self.n, "p^{k} exceeds the modulus p^{}", self.n);
        self.p.pow(k)
    }

    /// The same prime with a different exponent.
    pub fn with_exponent(&self, n: u32) -> Result<Self> {
        Self::new(self.p, n)
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.q as i128) as u64
    }

    pub fn residue(&self, x: i128) -> Residue {
        Residue {
            value: self.reduce(x),
            modulus: *self,
        }
    }

    pub fn zero(&self) -> Residue {
        self.residue(0)
    }

    pub fn one(&self) -> Residue {
        self.residue(1)
    }

    pub fn is_unit(&self, x: i128) -> bool {
        x.rem_euclid(self.p as i128) != 0
    }
}

impl fmt::Display for PrimePowerModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.n)
    }
}

/// An element of `Z/p^n` in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: PrimePowerModulus,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> PrimePowerModulus {
        self.modulus
    }

    /// Symmetric representative in `(-q/2, q/2]`.
    pub fn signed(&self) -> i128 {
        let q = self.modulus.q as i128;
        let v = self.value as i128;
        if 2 * v > q {
            v - q
        } else {
            v
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.modulus.p != 0
    }

    pub fn pow(self, mut e: u64) -> Residue {
        let mut base = self;
        let mut acc = self.modulus.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Result<Residue> {
        inv_mod(self.value as i128, &self.modulus)
    }

    pub fn val_p(&self) -> Order {
        val_p(self.value as i128, self.modulus.p)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;

    fn add(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let q = self.modulus.q;
        let s = self.value + rhs.value;
        Residue {
            value: if s >= q { s - q } else { s },
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;

    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        Residue {
            value: if self.value == 0 {
                0
            } else {
                self.modulus.q - self.value
            },
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = (self.value as u128 * rhs.value as u128) % self.modulus.q as u128;
        Residue {
            value: v as u64,
            modulus: self.modulus,
        }
    }
}

/// Largest `e` with `p^e | x`; `Infinity` for zero.
pub fn val_p(x: i128, p: u64) -> Order {
    if x == 0 {
        return Order::Infinity;
    }
    let p = p as i128;
    let mut x = x;
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    Order::Finite(e)
}

pub fn inv_mod(x: i128, m: &PrimePowerModulus) -> Result<Residue> {
    if !m.is_unit(x) {
        return Err(Error::NonUnit { value: x, p: m.p });
    }
    let q = m.q as i128;
    let g = x.rem_euclid(q).extended_gcd(&q);
    debug_assert_eq!(g.gcd, 1);
    Ok(m.residue(g.x))
}

/// The Jacobi symbol `(a/m)` for odd `m >= 1`.
pub fn jacobi(a: i128, m: u64) -> i8 {
    assert!(m % 2 == 1, "Jacobi symbol needs an odd modulus, got {m}");
    let mut a = a.rem_euclid(m as i128) as u64;
    let mut m = m;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        a %= m;
    }
    if m == 1 {
        sign
    } else {
        0
    }
}

/// A square root of `a` modulo the prime `p` (`a` a nonzero residue).
fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let m = PrimePowerModulus {
        p,
        n: 1,
        q: p,
    };
    let a = m.residue(a as i128);
    if jacobi(a.value as i128, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(a.pow((p + 1) / 4).value);
    }
    let mut s = 0;
    let mut odd = p - 1;
    while odd % 2 == 0 {
        odd /= 2;
        s += 1;
    }
    let nonresidue = (2..p).find(|&z| jacobi(z as i128, p) == -1)?;
    let mut c = m.residue(nonresidue as i128).pow(odd);
    let mut x = a.pow(odd.div_ceil(2));
    let mut t = a.pow(odd);
    let mut order = s;
    while t.value != 1 {
        // least i with t^(2^i) = 1
        let mut i = 0;
        let mut probe = t;
        while probe.value != 1 {
            probe = probe * probe;
            i += 1;
        }
        let b = c.pow(1 << (order - i - 1));
        x = x * b;
        c = b * b;
        t = t * c;
        order = i;
    }
    Some(x.value)
}

/// Both square roots of the unit `a` modulo `p^n`, principal root first.
///
/// The principal root is the one in `[1, q/2)`. Returns `Ok(None)` when `a`
/// is a non-residue modulo `p`.
pub fn sqrt_mod(a: i128, m: &PrimePowerModulus) -> Result<Option<(Residue, Residue)>> {
    if !m.is_unit(a) {
        return Err(Error::NonUnit { value: a, p: m.p });
    }
    let p = m.p;
    let Some(root) = tonelli_shanks(a.rem_euclid(p as i128) as u64, p) else {
        return Ok(None);
    };
    let mut r = root as i128;
    for k in 2..=m.n {
        let mk = m.with_exponent(k)?;
        let x = mk.residue(r);
        let f = x * x - mk.residue(a);
        let step = f * inv_mod(2 * r, &mk)?;
        r = (x - step).value as i128;
    }
    let r = m.residue(r);
    debug_assert_eq!(r * r, m.residue(a));
    let other = -r;
    if r.value < other.value {
        Ok(Some((r, other)))
    } else {
        Ok(Some((other, r)))
    }
}
