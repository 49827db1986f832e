//! Hilbert symbols over `ℚ`, the Hasse norm test for `ℚ(√Δ)/ℚ`, and the
//! `𝔽₂`-vector spaces of local norm classes indexed by places of `ℚ`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{big_mod_u64, legendre, prime_divisors_big, split_valuation};
use crate::quadfield::{Discriminant, Rational};

/// A place of `ℚ`. Finite places sort before `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

/// An integer in the same square class as `r`.
fn square_class_integer(r: &Rational) -> BigInt {
    r.numer() * r.denom()
}

fn eps2(u: u64) -> u64 {
    (u % 4 - 1) / 2 % 2
}

fn omega2(u: u64) -> u64 {
    let u = u % 16;
    (u * u - 1) / 8 % 2
}

/// Hilbert symbol of nonzero integers.
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, v: Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match v {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, w) = split_valuation(b, 2);
            let (u, w) = (big_mod_u64(&u, 16), big_mod_u64(&w, 16));
            let e = eps2(u) * eps2(w) + alpha as u64 * omega2(w) + beta as u64 * omega2(u);
            if e.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, w) = split_valuation(b, p);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(big_mod_u64(&u, p), p);
            }
            if alpha % 2 == 1 {
                s *= legendre(big_mod_u64(&w, p), p);
            }
            s
        }
    }
}

/// The Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: Place) -> i8 {
    hilbert_symbol_int(&square_class_integer(a), &square_class_integer(b), v)
}

/// Places where `(a, b)_v` can differ from `+1`: `∞`, 2, and primes dividing `ab`.
pub fn contributing_places(a: &Rational, b: &Rational) -> Vec<Place> {
    let mut ps: BTreeSet<u64> = BTreeSet::new();
    ps.insert(2);
    for r in [a, b] {
        ps.extend(prime_divisors_big(r.numer()));
        ps.extend(prime_divisors_big(r.denom()));
    }
    let mut out: Vec<Place> = ps.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinite);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormScope {
    All,
    FiniteOnly,
}

/// Whether `q` is a norm from `ℚ(√Δ)`, decided place by place (Hasse).
pub fn is_global_norm(q: &Rational, disc: &Discriminant, scope: NormScope) -> bool {
    let d = Rational::from_integer(disc.delta_big());
    contributing_places(q, &d)
        .into_iter()
        .filter(|v| scope == NormScope::All || *v != Place::Infinite)
        .all(|v| hilbert_symbol(q, &d, v) == 1)
}

/// Whether the prime `p` is unramified and inert, or ramified.
pub fn is_nonsplit(disc: &Discriminant, p: u64) -> bool {
    disc.kronecker(p) != 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SupportRule {
    RamifiedOnly,
    NonsplitFinite,
    All,
}

/// A vector over `𝔽₂` indexed by places of `ℚ`; only places carrying `1` are stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TateVec {
    ones: BTreeSet<Place>,
    rule: SupportRule,
}

impl TateVec {
    pub fn zero(rule: SupportRule) -> Self {
        Self { ones: BTreeSet::new(), rule }
    }

    pub fn from_places(rule: SupportRule, places: impl IntoIterator<Item = Place>) -> Self {
        let mut v = Self::zero(rule);
        for p in places {
            v.flip(p);
        }
        v
    }

    pub fn rule(&self) -> SupportRule {
        self.rule
    }

    pub fn get(&self, v: Place) -> bool {
        self.ones.contains(&v)
    }

    pub fn set(&mut self, v: Place, bit: bool) {
        if bit {
            self.ones.insert(v);
        } else {
            self.ones.remove(&v);
        }
    }

    pub fn flip(&mut self, v: Place) {
        let bit = !self.get(v);
        self.set(v, bit);
    }

    pub fn is_zero(&self) -> bool {
        self.ones.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.ones.iter()
    }

    /// Coordinatewise sum; the result carries the wider support rule.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            ones: self.ones.symmetric_difference(&other.ones).copied().collect(),
            rule: self.rule.max(other.rule),
        }
    }

    /// The same vector read under a wider support rule.
    pub fn widen(&self, rule: SupportRule) -> Self {
        assert!(rule >= self.rule);
        Self { ones: self.ones.clone(), rule }
    }

    /// Restriction to the given places.
    pub fn restrict(&self, places: &[Place], rule: SupportRule) -> Self {
        Self { ones: self.ones.iter().filter(|p| places.contains(p)).copied().collect(), rule }
    }

    /// Bits at the given places, in order.
    pub fn bits(&self, places: &[Place]) -> u64 {
        places
            .iter()
            .enumerate()
            .filter(|(_, p)| self.get(**p))
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }
}

impl fmt::Debug for TateVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones.iter()).finish()
    }
}

pub fn ramified_places(disc: &Discriminant) -> Vec<Place> {
    disc.ramified_primes().iter().map(|&p| Place::Finite(p)).collect()
}

/// `Ĥ⁰(G, 𝒰_F) ≅ 𝔽₂^{t_fin}`: one coordinate per ramified prime, each
/// generated by a unit `u_p ∈ ℤ_p*` that is not a local norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilocalH0 {
    pub primes: Vec<u64>,
    pub nonnorm_units: Vec<i64>,
}

impl SemilocalH0 {
    pub fn dim(&self) -> usize {
        self.primes.len()
    }

    /// The semilocal unit whose component at `primes[i]` is `nonnorm_units[i]`
    /// when bit `i` of `mask` is set, and `1` otherwise.
    pub fn element(&self, mask: u64) -> BTreeMap<u64, Rational> {
        self.primes
            .iter()
            .zip(&self.nonnorm_units)
            .enumerate()
            .map(|(i, (&p, &u))| (p, Rational::from_integer(if mask >> i & 1 == 1 { u } else { 1 }.into())))
            .collect()
    }
}

pub fn h0_semilocal(disc: &Discriminant) -> SemilocalH0 {
    let d = disc.delta_big();
    let primes = disc.ramified_primes().to_vec();
    let nonnorm_units = primes
        .iter()
        .map(|&p| {
            (2i64..)
                .flat_map(|k| [-k + 1, k])
                .find(|&u| u != 0 && u.rem_euclid(p as i64) != 0 && hilbert_symbol_int(&u.into(), &d, Place::Finite(p)) == -1)
                .expect("a nonnorm unit exists at a ramified prime")
        })
        .collect();
    SemilocalH0 { primes, nonnorm_units }
}

/// Class of a local unit at a ramified prime: `true` iff it is not a local norm.
pub fn unit_class_at(u: &Rational, p: u64, disc: &Discriminant) -> bool {
    hilbert_symbol(u, &Rational::from_integer(disc.delta_big()), Place::Finite(p)) == -1
}

/// The embedding `j₀` of a semilocal unit class, computed from its components.
pub fn j0(components: &BTreeMap<u64, Rational>, disc: &Discriminant) -> TateVec {
    TateVec::from_places(
        SupportRule::NonsplitFinite,
        components
            .iter()
            .filter(|(p, u)| unit_class_at(u, **p, disc))
            .map(|(p, _)| Place::Finite(*p)),
    )
}

/// Nonsplit finite places where `(q, Δ)_p = −1`.
pub fn h0_class_of_rational(q: &Rational, disc: &Discriminant) -> TateVec {
    let d = Rational::from_integer(disc.delta_big());
    TateVec::from_places(
        SupportRule::NonsplitFinite,
        contributing_places(q, &d).into_iter().filter(|v| match v {
            Place::Finite(p) => is_nonsplit(disc, *p) && hilbert_symbol(q, &d, *v) == -1,
            Place::Infinite => false,
        }),
    )
}

/// The space `V ⊆ 𝔽₂^{t_fin}` of ramified classes of rationals that are local
/// norms at every unramified place.
///
/// Candidates are `−1`, the ramified primes and the split primes below the
/// Minkowski bound: prime ideals of norm below that bound generate `Cl(A)`,
/// so every split prime's class vector is a combination of these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusSpace {
    pub dim: usize,
    /// Rationals whose ramified classes form a basis of `V`.
    pub generators: Vec<Rational>,
    pub vectors: Vec<TateVec>,
}

/// `dim V` can be at most this: `t_fin − 1` for real fields by the product
/// formula, `t_fin` for imaginary ones.
pub fn genus_dim_upper_bound(disc: &Discriminant) -> usize {
    if disc.is_real() {
        disc.t_fin() - 1
    } else {
        disc.t_fin()
    }
}

fn minkowski_bound(disc: &Discriminant) -> u64 {
    let n = disc.delta().unsigned_abs();
    if disc.is_real() {
        crate::arith::isqrt_u64(n) / 2 + 1
    } else {
        crate::arith::isqrt_u64(n / 3) + 1
    }
}

pub fn genus_char_space(disc: &Discriminant) -> GenusSpace {
    let places = ramified_places(disc);
    let d = Rational::from_integer(disc.delta_big());
    // candidates are units at every unramified nonsplit prime except possibly 2
    let constrained = !disc.is_ramified(2) && is_nonsplit(disc, 2);
    let split = crate::arith::primes_up_to(minkowski_bound(disc))
        .into_iter()
        .filter(|&p| disc.kronecker(p) == 1);
    let cands = core::iter::once(-1i64)
        .chain(disc.ramified_primes().iter().map(|&p| p as i64))
        .chain(split.map(|p| p as i64));
    // Gaussian elimination over 𝔽₂ on (constraint bit, ramified bits); the
    // constraint bit sits above all ramified bits
    let top_bit = 1u64 << places.len();
    let mut rows: Vec<(Rational, u64)> = Vec::new();
    for q in cands {
        let mut q = Rational::from_integer(q.into());
        let c = constrained && hilbert_symbol(&q, &d, Place::Finite(2)) == -1;
        let mut v = h0_class_of_rational(&q, disc).bits(&places) | if c { top_bit } else { 0 };
        for (rq, r) in &rows {
            let top = 63 - r.leading_zeros();
            if v >> top & 1 == 1 {
                v ^= r;
                q *= rq;
            }
        }
        if v == 0 {
            continue;
        }
        rows.push((q, v));
        rows.sort_by_key(|(_, r)| core::cmp::Reverse(*r));
    }
    let basis = reduce_out_constraint(rows, top_bit);
    let generators: Vec<Rational> = basis.iter().map(|(q, _)| q.clone()).collect();
    let vectors = basis
        .iter()
        .map(|&(_, v)| TateVec::from_places(SupportRule::RamifiedOnly, (0..places.len()).filter(|i| v >> i & 1 == 1).map(|i| places[i])))
        .collect();
    GenusSpace { dim: basis.len(), generators, vectors }
}

/// Rows with the constraint bit cleared: those without it, plus sums of pairs
/// with the first row carrying it.
fn reduce_out_constraint(rows: Vec<(Rational, u64)>, top_bit: u64) -> Vec<(Rational, u64)> {
    let (with, mut out): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r.1 & top_bit != 0);
    if let Some(((q0, v0), rest)) = with.split_first() {
        out.extend(rest.iter().map(|(q, v)| (q * q0, v ^ v0)));
    }
    out
}
