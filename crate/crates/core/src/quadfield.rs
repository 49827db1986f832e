//! Fundamental discriminants and exact arithmetic in a quadratic field.
//!
//! Elements are stored as `(x + y√Δ) / (2d)` with `d > 0` and
//! `gcd(x, y, d) = 1`. This single shape covers both `Δ ≡ 0` and `Δ ≡ 1 (mod 4)`:
//! the ring of integers is exactly the set of elements with `d = 1` and
//! `x ≡ yΔ (mod 2)`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, factor_u64, is_square_u64, legendre};
use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A fundamental quadratic discriminant together with its ramified primes.
#[derive(Clone)]
pub struct Discriminant {
    delta: i64,
    ramified: Arc<[u64]>,
}

impl Discriminant {
    /// Validates `n` as a fundamental discriminant.
    pub fn new(n: i64) -> Result<Self> {
        if n == 0 || n == 1 || (n > 0 && is_square_u64(n as u64)) {
            return Err(Error::NotFundamental(n));
        }
        let abs = n.unsigned_abs();
        let squarefree = |m: u64| factor_u64(m).iter().all(|&(_, e)| e == 1);
        let ok = match n.rem_euclid(4) {
            1 => squarefree(abs),
            0 => {
                let m = n / 4;
                matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
            }
            _ => false,
        };
        if !ok {
            return Err(Error::NotFundamental(n));
        }
        let ramified: Vec<u64> = factor_u64(abs).into_iter().map(|(p, _)| p).collect();
        Ok(Self {
            delta: n,
            ramified: ramified.into(),
        })
    }

    pub fn is_fundamental(n: i64) -> bool {
        Self::new(n).is_ok()
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn delta_big(&self) -> BigInt {
        BigInt::from(self.delta)
    }

    pub fn ramified_primes(&self) -> &[u64] {
        &self.ramified
    }

    pub fn t_fin(&self) -> usize {
        self.ramified.len()
    }

    /// Ramified places including the archimedean one for imaginary fields.
    pub fn t_all(&self) -> usize {
        self.t_fin() + usize::from(self.delta < 0)
    }

    pub fn is_real(&self) -> bool {
        self.delta > 0
    }

    /// `Δ mod 2`, the `b`-coefficient parity of every ideal and form.
    pub fn parity(&self) -> i64 {
        self.delta.rem_euclid(2)
    }

    pub fn is_ramified(&self, p: u64) -> bool {
        self.ramified.binary_search(&p).is_ok()
    }

    /// Floor of `√Δ` for real fields.
    pub fn isqrt(&self) -> i64 {
        debug_assert!(self.delta > 0);
        arith::isqrt_u64(self.delta as u64) as i64
    }

    /// Kronecker symbol `(Δ / p)`: 0 ramified, +1 split, −1 inert.
    pub fn kronecker(&self, p: u64) -> i8 {
        if p == 2 {
            return match self.delta.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            };
        }
        legendre(self.delta.rem_euclid(p as i64) as u64, p)
    }
}

impl PartialEq for Discriminant {
    fn eq(&self, other: &Self) -> bool {
        self.delta == other.delta
    }
}

impl Eq for Discriminant {}

impl PartialOrd for Discriminant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Discriminant {
    fn cmp(&self, other: &Self) -> Ordering {
        self.delta.cmp(&other.delta)
    }
}

impl Hash for Discriminant {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.delta.hash(state)
    }
}

impl fmt::Debug for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Discriminant({})", self.delta)
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.delta)
    }
}

/// An element `(x + y√Δ) / (2d)` of the quadratic field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadNum {
    x: BigInt,
    y: BigInt,
    d: BigInt,
    disc: Discriminant,
}

impl QuadNum {
    /// Builds `(x + y√Δ) / (2d)` in canonical form. Panics if `d == 0`.
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, d: impl Into<BigInt>, disc: &Discriminant) -> Self {
        let (mut x, mut y, mut d) = (x.into(), y.into(), d.into());
        assert!(!d.is_zero(), "zero denominator");
        if d.is_negative() {
            x = -x;
            y = -y;
            d = -d;
        }
        let g = x.gcd(&y).gcd(&d);
        if !g.is_one() {
            x /= &g;
            y /= &g;
            d /= &g;
        }
        Self { x, y, d, disc: disc.clone() }
    }

    pub fn from_rational(r: &Rational, disc: &Discriminant) -> Self {
        Self::new(r.numer() * 2, 0, r.denom().clone(), disc)
    }

    pub fn from_int(n: impl Into<BigInt>, disc: &Discriminant) -> Self {
        Self::new(n.into() * 2, 0, 1, disc)
    }

    pub fn one(disc: &Discriminant) -> Self {
        Self::from_int(1, disc)
    }

    pub fn zero(disc: &Discriminant) -> Self {
        Self::from_int(0, disc)
    }

    /// `√Δ` itself.
    pub fn sqrt_delta(disc: &Discriminant) -> Self {
        Self::new(0, 2, 1, disc)
    }

    /// `ω = (Δ + √Δ)/2`, the second element of the integral basis `{1, ω}`.
    pub fn omega(disc: &Discriminant) -> Self {
        Self::new(disc.delta, 1, 1, disc)
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.y.is_zero() && self.d.is_one() && self.x == BigInt::from(2)
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::new(self.x.clone(), &self.d * 2))
    }

    pub fn is_integral(&self) -> bool {
        self.d.is_one() && (&self.x - &self.y * self.disc.delta).is_even()
    }

    pub fn conj(&self) -> Self {
        Self {
            x: self.x.clone(),
            y: -&self.y,
            d: self.d.clone(),
            disc: self.disc.clone(),
        }
    }

    /// `N(a) = (x² − Δy²) / (4d²)`.
    pub fn norm(&self) -> Rational {
        let num = &self.x * &self.x - &self.y * &self.y * self.disc.delta;
        Rational::new(num, &self.d * &self.d * 4)
    }

    /// `Tr(a) = a + ā = x / d`.
    pub fn trace(&self) -> Rational {
        Rational::new(self.x.clone(), self.d.clone())
    }

    pub fn norm_trace(&self) -> (Rational, Rational) {
        (self.norm(), self.trace())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = &self.x * &self.x - &self.y * &self.y * self.disc.delta;
        Ok(Self::new(&self.d * &self.x * 4u32, -(&self.d * &self.y * 4u32), n, &self.disc))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(&self.disc);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.x * r.numer(), &self.y * r.numer(), &self.d * r.denom(), &self.disc)
    }

    /// Sign of the element under the real embedding `√Δ > 0`. Real fields only.
    pub fn real_sign(&self) -> Ordering {
        debug_assert!(self.disc.is_real());
        let sx = self.x.sign();
        let sy = self.y.sign();
        use num_bigint::Sign::*;
        match (sx, sy) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
            (Minus | NoSign, Minus | NoSign) => Ordering::Less,
            _ => {
                // opposite signs: compare x² against Δy²
                let x2 = &self.x * &self.x;
                let dy2 = &self.y * &self.y * self.disc.delta;
                let x_dominates = x2 > dy2;
                match (sx == Plus, x_dominates) {
                    (true, true) | (false, false) => Ordering::Greater,
                    _ => Ordering::Less,
                }
            }
        }
    }

    /// Coordinates `(A, B)` with `self = A + Bω` when `self` is integral.
    pub fn integral_coords(&self) -> Result<(BigInt, BigInt)> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        let a = (&self.x - &self.y * self.disc.delta) / 2;
        Ok((a, self.y.clone()))
    }

    /// Matrix of multiplication by `self` on the basis `{1, ω}`; columns are images.
    pub fn mult_matrix(&self) -> Result<[[BigInt; 2]; 2]> {
        let (a, b) = self.integral_coords()?;
        let delta = self.disc.delta_big();
        let n_omega = (&delta * &delta - &delta) / 4;
        Ok([[a.clone(), BigInt::zero() - &b * &n_omega], [b.clone(), a + b * delta]])
    }

    fn check_disc(&self, other: &Self) {
        assert_eq!(self.disc, other.disc, "mixed discriminants");
    }
}

pub fn det2(m: &[[BigInt; 2]; 2]) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}√{})/{}", self.x, self.y, self.disc.delta, &self.d * 2)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        self.check_disc(rhs);
        QuadNum::new(
            &self.x * &rhs.d + &rhs.x * &self.d,
            &self.y * &rhs.d + &rhs.y * &self.d,
            &self.d * &rhs.d,
            &self.disc,
        )
    }
}

impl Sub for &QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        self + &(-rhs)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            x: -&self.x,
            y: -&self.y,
            d: self.d.clone(),
            disc: self.disc.clone(),
        }
    }
}

impl Mul for &QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        self.check_disc(rhs);
        QuadNum::new(
            &self.x * &rhs.x + &self.y * &rhs.y * self.disc.delta,
            &self.x * &rhs.y + &self.y * &rhs.x,
            &self.d * &rhs.d * 2,
            &self.disc,
        )
    }
}
