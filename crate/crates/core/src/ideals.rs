//! Fractional ideals of the maximal order in standard two-generator form.
//!
//! An ideal is stored as `q · (aℤ + ((b + √Δ)/2)ℤ)` with `q` a positive
//! rational, `a > 0`, `b² ≡ Δ (mod 4a)` and `−a < b ≤ a`. The primitive part
//! `[a, b]` is never divisible by a rational integer > 1, so the
//! representation is unique and equality is field-by-field.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, split_valuation, sqrt_mod_prime, xgcd};
use crate::classgroup;
use crate::error::{Error, Result};
use crate::quadfield::{Discriminant, QuadNum, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracIdeal {
    q: Rational,
    a: BigInt,
    b: BigInt,
    disc: Discriminant,
}

/// Reduce `b` into `(−a, a]` modulo `2a`.
pub(crate) fn normalize_b(b: &BigInt, a: &BigInt) -> BigInt {
    let two_a = a * 2;
    let mut r = b.mod_floor(&two_a);
    if &r > a {
        r -= &two_a;
    }
    r
}

/// Product of primitive ideals `[a1, b1]·[a2, b2] = d·[a3, b3]` by Dirichlet
/// composition. Returns `(d, a3, b3)` with `b3` not yet normalised.
pub(crate) fn compose_primitive(
    a1: &BigInt,
    b1: &BigInt,
    a2: &BigInt,
    b2: &BigInt,
    delta: &BigInt,
) -> (BigInt, BigInt, BigInt) {
    let (a1, b1, a2, b2) = if a1 > a2 { (a2, b2, a1, b1) } else { (a1, b1, a2, b2) };
    let c2 = (b2 * b2 - delta) / (a2 * 4);
    let s: BigInt = (b1 + b2) / 2;
    let n = b2 - &s;
    let (d, y1) = if (a2 % a1).is_zero() {
        (a1.clone(), BigInt::zero())
    } else {
        let (d, u, _) = xgcd(a2, a1);
        (d, u)
    };
    let (d1, x2, y2) = if (&s % &d).is_zero() {
        (d.clone(), BigInt::zero(), -BigInt::one())
    } else {
        let (d1, u, v) = xgcd(&s, &d);
        (d1, u, -v)
    };
    let v1 = a1 / &d1;
    let v2 = a2 / &d1;
    let t: BigInt = &y1 * &y2 * &n - &x2 * &c2;
    let r = t.mod_floor(&v1);
    let b3 = b2 + &v2 * &r * 2;
    let a3 = &v1 * &v2;
    (d1, a3, b3)
}

/// Hermite normal form of a rank-2 sublattice of `ℤ²`: returns `(A, B, C)` with
/// the lattice spanned by `(A, 0)` and `(B, C)`, `A, C > 0`, `0 ≤ B < A`.
fn hnf2(vectors: &[(BigInt, BigInt)]) -> (BigInt, BigInt, BigInt) {
    let mut a = BigInt::zero();
    let (mut rb, mut rc) = (BigInt::zero(), BigInt::zero());
    for (u, w) in vectors {
        if w.is_zero() {
            a = a.gcd(u);
            continue;
        }
        if rc.is_zero() {
            rb = u.clone();
            rc = w.clone();
            continue;
        }
        let (g, s, t) = xgcd(&rc, w);
        let killed = (w / &g) * &rb - (&rc / &g) * u;
        a = a.gcd(&killed);
        rb = s * &rb + t * u;
        rc = g;
    }
    if rc.is_negative() {
        rb = -rb;
        rc = -rc;
    }
    assert!(!a.is_zero() && !rc.is_zero(), "lattice is not of full rank");
    rb = rb.mod_floor(&a);
    (a, rb, rc)
}

impl FracIdeal {
    /// The primitive ideal `[a, (b + √Δ)/2]`; `b² ≡ Δ (mod 4a)` is required.
    pub fn primitive(a: impl Into<BigInt>, b: impl Into<BigInt>, disc: &Discriminant) -> Self {
        let a = a.into();
        let b = b.into();
        assert!(a.is_positive(), "ideal norm must be positive");
        assert!(
            ((&b * &b - disc.delta_big()) % (&a * 4u32)).is_zero(),
            "b² ≢ Δ (mod 4a)"
        );
        let b = normalize_b(&b, &a);
        Self { q: Rational::one(), a, b, disc: disc.clone() }
    }

    pub fn unit(disc: &Discriminant) -> Self {
        Self::primitive(1, disc.parity(), disc)
    }

    /// The ideal `q·[a, b]`.
    pub fn scaled(q: Rational, a: impl Into<BigInt>, b: impl Into<BigInt>, disc: &Discriminant) -> Self {
        assert!(q.is_positive());
        let mut i = Self::primitive(a, b, disc);
        i.q = q;
        i
    }

    /// The O_F-module generated by the given field elements, which must span a
    /// full-rank lattice that is closed under multiplication by `ω`.
    pub fn from_lattice(gens: &[QuadNum], disc: &Discriminant) -> Self {
        let delta = disc.parity();
        // coordinates on {1, ω0}, ω0 = (δ + √Δ)/2
        let coords: Vec<(Rational, Rational)> = gens
            .iter()
            .map(|g| {
                let u = Rational::new(g.x() - g.y() * delta, g.d() * 2);
                let w = Rational::new(g.y().clone(), g.d().clone());
                (u, w)
            })
            .collect();
        let l = coords
            .iter()
            .fold(BigInt::one(), |acc, (u, w)| acc.lcm(u.denom()).lcm(w.denom()));
        let ints: Vec<(BigInt, BigInt)> = coords
            .iter()
            .map(|(u, w)| ((u * &l).to_integer(), (w * &l).to_integer()))
            .collect();
        let (big_a, big_b, big_c) = hnf2(&ints);
        assert!(
            (&big_a % &big_c).is_zero() && (&big_b % &big_c).is_zero(),
            "lattice is not an ideal"
        );
        let a = &big_a / &big_c;
        let b = &big_b / &big_c * 2 + delta;
        Self::scaled(Rational::new(big_c, l), a, b, disc)
    }

    /// The principal ideal `z·O_F`.
    pub fn principal(z: &QuadNum) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let disc = z.disc();
        let omega = QuadNum::omega(disc);
        Ok(Self::from_lattice(&[z.clone(), z * &omega], disc))
    }

    pub fn from_rational(r: &Rational, disc: &Discriminant) -> Self {
        let mut i = Self::unit(disc);
        i.q = r.abs();
        i
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn is_unit(&self) -> bool {
        self.q.is_one() && self.a.is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.q.is_integer()
    }

    pub fn primitive_part(&self) -> Self {
        Self { q: Rational::one(), ..self.clone() }
    }

    /// `ℤ`-basis `{q·a, q·(b + √Δ)/2}`.
    pub fn z_basis(&self) -> [QuadNum; 2] {
        let d = &self.disc;
        [
            QuadNum::from_rational(&(&self.q * &self.a), d),
            QuadNum::new(self.q.numer() * &self.b, self.q.numer().clone(), self.q.denom().clone(), d),
        ]
    }

    /// Ideal norm `q²·a`.
    pub fn norm(&self) -> Rational {
        &self.q * &self.q * &self.a
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.disc != other.disc {
            return Err(Error::DiscMismatch);
        }
        let (d, a3, b3) = compose_primitive(&self.a, &self.b, &other.a, &other.b, &self.disc.delta_big());
        let q = &self.q * &other.q * &d;
        Ok(Self::scaled(q, a3, b3, &self.disc))
    }

    /// Product computed from the four pairwise generator products and a lattice
    /// Hermite form; independent of the composition formula used by [`Self::mul`].
    pub fn mul_via_lattice(&self, other: &Self) -> Result<Self> {
        if self.disc != other.disc {
            return Err(Error::DiscMismatch);
        }
        let [x1, y1] = self.z_basis();
        let [x2, y2] = other.z_basis();
        let gens = [&x1 * &x2, &x1 * &y2, &y1 * &x2, &y1 * &y2];
        Ok(Self::from_lattice(&gens, &self.disc))
    }

    pub fn conjugate(&self) -> Self {
        Self {
            q: self.q.clone(),
            a: self.a.clone(),
            b: normalize_b(&-&self.b, &self.a),
            disc: self.disc.clone(),
        }
    }

    /// `I⁻¹ = Ī / N(I)`.
    pub fn inverse(&self) -> Self {
        let mut c = self.conjugate();
        c.q = (&self.q * &self.a).recip();
        c
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::unit(&self.disc);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b).expect("same discriminant");
            }
            b = b.mul(&b).expect("same discriminant");
            k >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { q: &self.q * r.abs(), ..self.clone() }
    }

    /// Membership test for a field element.
    pub fn contains(&self, z: &QuadNum) -> bool {
        // z = q(m·a + n·(b+√Δ)/2) with m, n integers
        let w = z.scale(&self.q.recip());
        // w = (x + y√Δ)/(2d): n = y/d, m·a = (x − n·b)/(2d)
        let n = Rational::new(w.y().clone(), w.d().clone());
        if !n.is_integer() {
            return false;
        }
        let ma = Rational::new(w.x().clone(), w.d() * 2) - &n * Rational::new(self.b.clone(), BigInt::from(2));
        (ma / Rational::from_integer(self.a.clone())).is_integer()
    }

    /// `𝔭`-adic valuation.
    pub fn valuation_at(&self, prime: &PrimeIdeal) -> i64 {
        assert_eq!(self.disc, prime.ideal.disc);
        let p = prime.p;
        let e: i64 = if prime.kind == Splitting::Ramified { 2 } else { 1 };
        let vq = {
            let (vn, _) = split_valuation(self.q.numer(), p);
            let (vd, _) = split_valuation(self.q.denom(), p);
            vn as i64 - vd as i64
        };
        let (va, _) = split_valuation(&self.a, p);
        let vprim = match prime.kind {
            Splitting::Inert => 0,
            Splitting::Ramified => va as i64,
            Splitting::Split => {
                let two_p = BigInt::from(2 * p);
                if va > 0 && (&self.b - &prime.ideal.b).mod_floor(&two_p).is_zero() {
                    va as i64
                } else {
                    0
                }
            }
        };
        e * vq + vprim
    }

    /// Prime factorisation `I = ∏ 𝔭^v`, ascending by prime, zero exponents omitted.
    pub fn factor(&self) -> Vec<(PrimeIdeal, i64)> {
        let mut ps: Vec<u64> = arith::prime_divisors_big(self.q.numer());
        ps.extend(arith::prime_divisors_big(self.q.denom()));
        ps.extend(arith::prime_divisors_big(&self.a));
        ps.sort_unstable();
        ps.dedup();
        let mut out = Vec::new();
        for p in ps {
            for prime in primes_above(&self.disc, p).primes() {
                let v = self.valuation_at(&prime);
                if v != 0 {
                    out.push((prime, v));
                }
            }
        }
        out
    }

    /// A generator `z` with `z·O_F = I`, if the ideal is principal.
    pub fn is_principal_with_generator(&self) -> Option<QuadNum> {
        let red = classgroup::canonical_ideal(self);
        if !red.ideal.is_unit() {
            return None;
        }
        // red.ideal = m·I = O_F, so I = m⁻¹·O_F
        let z = red.multiplier.inv().expect("multiplier is nonzero");
        debug_assert!(FracIdeal::principal(&z).as_ref() == Ok(self));
        Some(z)
    }

    pub fn is_principal(&self) -> bool {
        classgroup::canonical_ideal(self).ideal.is_unit()
    }
}

impl fmt::Debug for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_one() {
            write!(f, "[{}, {}]", self.a, self.b)
        } else {
            write!(f, "{}·[{}, {}]", self.q, self.a, self.b)
        }
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A nonzero prime ideal of O_F lying over the rational prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    p: u64,
    ideal: FracIdeal,
    kind: Splitting,
}

impl PrimeIdeal {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ideal(&self) -> &FracIdeal {
        &self.ideal
    }

    pub fn kind(&self) -> Splitting {
        self.kind
    }

    pub fn disc(&self) -> &Discriminant {
        &self.ideal.disc
    }

    /// Residue degree.
    pub fn degree(&self) -> i64 {
        if self.kind == Splitting::Inert {
            2
        } else {
            1
        }
    }

    pub fn conjugate(&self) -> Self {
        Self { p: self.p, ideal: self.ideal.conjugate(), kind: self.kind }
    }

    /// A field element of `𝔭`-adic valuation exactly 1.
    pub fn uniformizer(&self) -> QuadNum {
        let disc = self.disc();
        if self.kind == Splitting::Inert {
            return QuadNum::from_int(self.p, disc);
        }
        let two_p = BigInt::from(2 * self.p);
        let mut b = self.ideal.b.clone();
        loop {
            let beta = QuadNum::new(b.clone(), 1, 1, disc);
            let n = beta.norm().to_integer();
            if !n.is_zero() && split_valuation(&n, self.p).0 == 1 {
                return beta;
            }
            b += &two_p;
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ideal)
    }
}

/// How a rational prime decomposes in O_F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// `(p) = 𝔭·𝔭̄`.
    Split(PrimeIdeal, PrimeIdeal),
    /// `(p)` stays prime.
    Inert(PrimeIdeal),
    /// `(p) = 𝔭²`.
    Ramified(PrimeIdeal),
}

impl Decomposition {
    pub fn primes(&self) -> Vec<PrimeIdeal> {
        match self {
            Decomposition::Split(p, q) => alloc::vec![p.clone(), q.clone()],
            Decomposition::Inert(p) | Decomposition::Ramified(p) => alloc::vec![p.clone()],
        }
    }
}

/// A `b` with `b² ≡ Δ (mod 4p)` when `p` is not inert.
fn sqrt_disc_mod_4p(disc: &Discriminant, p: u64) -> Option<i64> {
    let delta = disc.delta();
    if p == 2 {
        return (0..4i64).find(|b| (b * b - delta).rem_euclid(8) == 0);
    }
    let r = sqrt_mod_prime(delta.rem_euclid(p as i64) as u64, p)? as i64;
    Some(if (r - delta).rem_euclid(2) == 0 { r } else { r + p as i64 })
}

/// Prime ideals above `p`. Panics if `p` is not prime.
pub fn primes_above(disc: &Discriminant, p: u64) -> Decomposition {
    assert!(arith::is_prime_u64(p), "{p} is not prime");
    match disc.kronecker(p) {
        -1 => Decomposition::Inert(PrimeIdeal {
            p,
            ideal: FracIdeal::from_rational(&Rational::from_integer(p.into()), disc),
            kind: Splitting::Inert,
        }),
        k => {
            let b = sqrt_disc_mod_4p(disc, p).expect("Δ is a square mod 4p");
            let ideal = FracIdeal::primitive(p, b, disc);
            if k == 0 {
                Decomposition::Ramified(PrimeIdeal { p, ideal, kind: Splitting::Ramified })
            } else {
                let (pos, neg) = if ideal.b.is_positive() {
                    (ideal.clone(), ideal.conjugate())
                } else {
                    (ideal.conjugate(), ideal.clone())
                };
                Decomposition::Split(
                    PrimeIdeal { p, ideal: pos, kind: Splitting::Split },
                    PrimeIdeal { p, ideal: neg, kind: Splitting::Split },
                )
            }
        }
    }
}

/// Product `∏ 𝔭^v`.
pub fn from_factors(disc: &Discriminant, factors: &[(PrimeIdeal, i64)]) -> FracIdeal {
    factors
        .iter()
        .fold(FracIdeal::unit(disc), |acc, (p, v)| acc.mul(&p.ideal.pow(*v)).expect("same discriminant"))
}

/// All integral ideals of norm exactly `n`.
pub fn ideals_of_norm(disc: &Discriminant, n: u64) -> Vec<FracIdeal> {
    let mut out = alloc::vec![FracIdeal::unit(disc)];
    for (p, e) in arith::factor_u64(n) {
        let e = e as i64;
        let options: Vec<FracIdeal> = match primes_above(disc, p) {
            Decomposition::Split(a, b) => (0..=e)
                .map(|i| a.ideal.pow(i).mul(&b.ideal.pow(e - i)).expect("same discriminant"))
                .collect(),
            Decomposition::Inert(a) => {
                if e % 2 == 0 {
                    alloc::vec![a.ideal.pow(e / 2)]
                } else {
                    Vec::new()
                }
            }
            Decomposition::Ramified(a) => alloc::vec![a.ideal.pow(e)],
        };
        out = out
            .iter()
            .flat_map(|i| options.iter().map(move |o| i.mul(o).expect("same discriminant")))
            .collect();
    }
    out
}

/// Norm of an ideal as a machine integer, when integral and small.
pub fn norm_u64(i: &FracIdeal) -> Option<u64> {
    let n = i.norm();
    if n.is_integer() {
        n.to_integer().to_u64()
    } else {
        None
    }
}
