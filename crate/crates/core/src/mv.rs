//! Finite-support ideles and the Mayer–Vietoris maps around `K₀`.
//!
//! An idele is a diagonal global element together with finitely many
//! overriding components, each a global element read at its own prime.
//! Only valuations and local norm classes of components are ever used.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::classgroup::{class_group, coinvariants};
use crate::error::{Error, Result};
use crate::ideals::{ideals_of_norm, primes_above, Decomposition, FracIdeal, PrimeIdeal};
use crate::knorm::{k0_make, K0Elt};
use crate::local::{
    genus_char_space, h0_class_of_rational, is_global_norm, unit_class_at, NormScope, Place, SupportRule,
    TateVec,
};
use crate::quadfield::{Discriminant, QuadNum, Rational};
use crate::units::{fundamental_unit, UnitData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdeleFS {
    components: BTreeMap<PrimeIdeal, QuadNum>,
    diagonal: QuadNum,
    disc: Discriminant,
}

impl IdeleFS {
    pub fn one(disc: &Discriminant) -> Self {
        Self::diagonal(QuadNum::one(disc))
    }

    /// The image of `x ∈ F*` on the diagonal.
    pub fn diagonal(x: QuadNum) -> Self {
        assert!(!x.is_zero());
        let disc = x.disc().clone();
        Self { components: BTreeMap::new(), diagonal: x, disc }
    }

    /// Replace the component at `prime`.
    pub fn with(mut self, prime: PrimeIdeal, value: QuadNum) -> Self {
        assert!(!value.is_zero());
        assert_eq!(prime.disc(), &self.disc);
        self.components.insert(prime, value);
        self
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn diagonal_part(&self) -> &QuadNum {
        &self.diagonal
    }

    pub fn component(&self, prime: &PrimeIdeal) -> &QuadNum {
        self.components.get(prime).unwrap_or(&self.diagonal)
    }

    pub fn overrides(&self) -> impl Iterator<Item = (&PrimeIdeal, &QuadNum)> {
        self.components.iter()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::diagonal(&self.diagonal * &other.diagonal);
        for p in self.components.keys().chain(other.components.keys()) {
            out.components.insert(p.clone(), self.component(p) * other.component(p));
        }
        out
    }

    pub fn inv(&self) -> Self {
        let inv = |x: &QuadNum| x.inv().expect("components are nonzero");
        Self {
            components: self.components.iter().map(|(p, x)| (p.clone(), inv(x))).collect(),
            diagonal: inv(&self.diagonal),
            disc: self.disc.clone(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Nonzero valuations `r_𝔭 = v_𝔭(z_𝔭)`.
    pub fn valuations(&self) -> Vec<(PrimeIdeal, i64)> {
        let mut primes: Vec<PrimeIdeal> = self.components.keys().cloned().collect();
        let diag = FracIdeal::principal(&self.diagonal).expect("nonzero");
        primes.extend(diag.factor().into_iter().map(|(p, _)| p));
        primes.sort();
        primes.dedup();
        primes
            .into_iter()
            .filter_map(|p| {
                let v = FracIdeal::principal(self.component(&p)).expect("nonzero").valuation_at(&p);
                (v != 0).then_some((p, v))
            })
            .collect()
    }

    /// `I_z = ∏ 𝔭^{r_𝔭}`.
    pub fn ideal(&self) -> FracIdeal {
        crate::ideals::from_factors(&self.disc, &self.valuations())
    }

    pub fn is_unit_idele(&self) -> bool {
        self.valuations().is_empty()
    }
}

/// A component of a `ℚ`-idele: a rational, or `ι_𝔭(w)` for a split prime `𝔭`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalValue {
    Rational(Rational),
    Embedded { value: QuadNum, prime: alloc::boxed::Box<PrimeIdeal> },
}

impl LocalValue {
    fn from_embedded(value: QuadNum, prime: &PrimeIdeal) -> Self {
        match value.as_rational() {
            Some(r) => LocalValue::Rational(r),
            None => LocalValue::Embedded { value, prime: alloc::boxed::Box::new(prime.clone()) },
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, LocalValue::Rational(r) if r.is_one())
    }

    pub fn valuation(&self, p: u64) -> i64 {
        match self {
            LocalValue::Rational(r) => {
                let (vn, _) = crate::arith::split_valuation(r.numer(), p);
                let (vd, _) = crate::arith::split_valuation(r.denom(), p);
                vn as i64 - vd as i64
            }
            LocalValue::Embedded { value, prime } => {
                FracIdeal::principal(value).expect("nonzero").valuation_at(prime)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdeleQ {
    components: BTreeMap<u64, LocalValue>,
    diagonal: Rational,
}

impl IdeleQ {
    pub fn component(&self, p: u64) -> LocalValue {
        self.components
            .get(&p)
            .cloned()
            .unwrap_or_else(|| LocalValue::Rational(self.diagonal.clone()))
    }

    pub fn diagonal_part(&self) -> &Rational {
        &self.diagonal
    }

    pub fn components(&self) -> impl Iterator<Item = (&u64, &LocalValue)> {
        self.components.iter()
    }

    pub fn is_one(&self) -> bool {
        self.diagonal.is_one() && self.components.values().all(LocalValue::is_one)
    }
}

/// `N(z)_p = ∏_{w | p} N_{F_w/ℚ_p}(z_w)`.
pub fn idele_norm(z: &IdeleFS) -> IdeleQ {
    let mut components = BTreeMap::new();
    let mut ps: Vec<u64> = z.components.keys().map(PrimeIdeal::p).collect();
    ps.dedup();
    for p in ps {
        let value = match primes_above(&z.disc, p) {
            Decomposition::Split(a, b) => {
                LocalValue::from_embedded(z.component(&a) * &z.component(&b).conj(), &a)
            }
            Decomposition::Inert(a) | Decomposition::Ramified(a) => LocalValue::Rational(z.component(&a).norm()),
        };
        components.insert(p, value);
    }
    IdeleQ { components, diagonal: z.diagonal.norm() }
}

/// `∂(z) = [1, I_z]` for `z` whose ideal has norm 1.
pub fn boundary(z: &IdeleFS) -> Result<K0Elt> {
    let i = z.ideal();
    if !i.norm().is_one() {
        return Err(Error::NotInNormKernel);
    }
    k0_make(Rational::one(), i)
}

/// Norm of a uniformizer at the ramified prime above `p`: an element of `ℚ`
/// with `v_p = 1` that is a local norm.
pub fn ramified_norm_uniformizer(disc: &Discriminant, p: u64) -> Rational {
    match primes_above(disc, p) {
        Decomposition::Ramified(pr) => pr.uniformizer().norm(),
        _ => panic!("{p} is not ramified"),
    }
}

/// `i([t, I]) = ([t], [u(t)])`: the class of `t` modulo global norms and the
/// classes of the unit parts `u_p(t) = t·π_p^{−v_p(t)}` at ramified primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IImage {
    pub t: Rational,
    pub t_is_norm: bool,
    pub units: TateVec,
}

impl IImage {
    pub fn is_trivial(&self) -> bool {
        self.t_is_norm && self.units.is_zero()
    }
}

pub fn map_i(e: &K0Elt) -> IImage {
    let disc = e.disc();
    let t = e.t().clone();
    let places = disc.ramified_primes().iter().filter_map(|&p| {
        let v = LocalValue::Rational(t.clone()).valuation(p);
        let pi = ramified_norm_uniformizer(disc, p);
        let u = &t * pow_rational(&pi, -v);
        unit_class_at(&u, p, disc).then_some(Place::Finite(p))
    });
    IImage {
        t_is_norm: is_global_norm(&t, disc, NormScope::All),
        units: TateVec::from_places(SupportRule::RamifiedOnly, places),
        t,
    }
}

fn pow_rational(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &base)
}

/// `μ(x, y) = h₀(x) − j₀(y)` over nonsplit finite places.
pub fn map_mu(t: &Rational, y: &TateVec, disc: &Discriminant) -> TateVec {
    h0_class_of_rational(t, disc).add(&y.widen(SupportRule::NonsplitFinite))
}

/// `μ₁(z, u) = z/u` for `N(z) = 1` and `u` a unit idele of norm 1.
pub fn mu1(z: &QuadNum, u: &IdeleFS) -> Result<IdeleFS> {
    if !z.norm().is_one() || !u.is_unit_idele() || !idele_norm(u).is_one() {
        return Err(Error::NormKernelViolation);
    }
    Ok(IdeleFS::diagonal(z.clone()).div(u))
}

/// Some `x` with `N(x) = t`, searching principal ideals of norm `|T|·m²`
/// for `m ≤ max_m`, where `T = num(t)·den(t)`.
pub fn solve_norm_equation(t: &Rational, disc: &Discriminant, units: &UnitData, max_m: u64) -> Result<QuadNum> {
    if t.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let den = t.denom().clone();
    let target = t.numer() * &den;
    let abs_target: u64 = num_traits::ToPrimitive::to_u64(&target.abs()).ok_or(Error::NormSearchExhausted)?;
    let scale = QuadNum::from_rational(&Rational::from_integer(den), disc);
    for m in 1..=max_m {
        let n = match abs_target.checked_mul(m * m) {
            Some(n) => n,
            None => break,
        };
        let want = Rational::from_integer(&target * m * m);
        for j in ideals_of_norm(disc, n) {
            let Some(mut g) = j.is_principal_with_generator() else { continue };
            if g.norm() != want {
                match &units.eps {
                    Some(eps) if units.has_norm_minus_one() => g = &g * eps,
                    _ => continue,
                }
            }
            // N(g/(m·den)) = T m² / (m² den²) = t
            let mq = QuadNum::from_int(m, disc);
            return Ok(g.div(&(&mq * &scale)).expect("nonzero"));
        }
    }
    Err(Error::NormSearchExhausted)
}

/// For `e = [t, I]` with `t ∈ N(F*)`, an idele `z` with `∂(z) = e` in `K₀`:
/// solve `N(x) = t`, then assemble `z` from uniformizers at the primes of `x⁻¹I`.
pub fn constructive_preimage(e: &K0Elt, units: &UnitData, max_m: u64) -> Result<IdeleFS> {
    let disc = e.disc();
    let x = solve_norm_equation(e.t(), disc, units, max_m)?;
    let rest = FracIdeal::principal(&x)?.inverse().mul(e.ideal())?;
    if !rest.norm().is_one() {
        return Err(Error::NotInNormKernel);
    }
    let z = rest
        .factor()
        .into_iter()
        .fold(IdeleFS::one(disc), |z, (p, v)| {
            let pi = p.uniformizer().pow(v).expect("nonzero");
            z.with(p, pi)
        });
    Ok(z)
}

/// Genus-theory data for one discriminant, with its three verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusReport {
    pub delta: i64,
    pub t_fin: usize,
    pub t_all: usize,
    pub h: u64,
    pub h_narrow: u64,
    pub rank2: usize,
    /// Norm of the fundamental unit, real fields only.
    pub eps_norm: Option<i8>,
    pub exceptional: bool,
    /// `dim V` over finite places.
    pub dim_v: usize,
    /// `dim ℤ*/(ℤ* ∩ N(F*))` with all places.
    pub dim_h: usize,
    pub minus_one_norm_all: bool,
    pub minus_one_norm_finite: bool,
    /// `rank₂ = t − 1`, or `t − 2` in the exceptional case.
    pub verdict_69: bool,
    /// `dim V = dim H + rank₂`.
    pub verdict_67: bool,
    /// `rank₂ ≤ t − 1` for real fields, equality for imaginary ones.
    pub verdict_68: bool,
}

impl GenusReport {
    pub fn all_pass(&self) -> bool {
        self.verdict_69 && self.verdict_67 && self.verdict_68
    }

    /// The expected `dim V`: `t_fin − 1` for real fields, `t_fin` for imaginary ones.
    pub fn expected_dim_v(&self) -> usize {
        if self.delta > 0 {
            self.t_fin - 1
        } else {
            self.t_fin
        }
    }
}

pub fn genus_engine(disc: &Discriminant) -> GenusReport {
    let cg = class_group(disc);
    let rank2 = coinvariants(&cg).dim;
    let units = fundamental_unit(disc);
    let t_fin = disc.t_fin();
    let exceptional = disc.is_real() && disc.ramified_primes().iter().any(|&p| p % 4 == 3);
    let minus_one = Rational::from_integer((-1).into());
    let minus_one_norm_all = is_global_norm(&minus_one, disc, NormScope::All);
    let minus_one_norm_finite = is_global_norm(&minus_one, disc, NormScope::FiniteOnly);
    let dim_h = usize::from(!minus_one_norm_all);
    let dim_v = genus_char_space(disc).dim;
    let verdict_69 = if exceptional { rank2 + 2 == t_fin } else { rank2 + 1 == t_fin };
    let verdict_68 = if disc.is_real() { rank2 < t_fin } else { rank2 + 1 == t_fin };
    GenusReport {
        delta: disc.delta(),
        t_fin,
        t_all: disc.t_all(),
        h: cg.h,
        h_narrow: cg.h_narrow,
        rank2,
        eps_norm: disc.is_real().then_some(units.eps_norm),
        exceptional,
        dim_v,
        dim_h,
        minus_one_norm_all,
        minus_one_norm_finite,
        verdict_69,
        verdict_67: dim_v == dim_h + rank2,
        verdict_68,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knorm::{k0_eq, k0_identity, k0_mul, k0_structure_with, sigma};
    use crate::quadfield::rat;

    fn disc(n: i64) -> Discriminant {
        Discriminant::new(n).unwrap()
    }

    fn split_primes(d: &Discriminant, p: u64) -> (PrimeIdeal, PrimeIdeal) {
        match primes_above(d, p) {
            Decomposition::Split(a, b) => (a, b),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn norm_examples() {
        let d = disc(-15);
        assert!(idele_norm(&IdeleFS::one(&d)).is_one());
        let p3 = match primes_above(&d, 3) {
            Decomposition::Ramified(p) => p,
            other => panic!("{other:?}"),
        };
        let z = IdeleFS::one(&d).with(p3, QuadNum::sqrt_delta(&d));
        assert_eq!(idele_norm(&z).component(3), LocalValue::Rational(rat(15)));
        let x = QuadNum::new(3, 1, 1, &d);
        assert_eq!(idele_norm(&IdeleFS::diagonal(x.clone())).diagonal_part(), &x.norm());
    }

    #[test]
    fn boundary_examples() {
        let d = disc(-15);
        assert_eq!(boundary(&IdeleFS::one(&d)).unwrap(), k0_identity(&d));
        let (p2, q2) = split_primes(&d, 2);
        let z = IdeleFS::one(&d)
            .with(p2.clone(), QuadNum::from_int(2, &d))
            .with(q2.clone(), QuadNum::from_rational(&Rational::new(1.into(), 2.into()), &d));
        let e = boundary(&z).unwrap();
        assert_eq!(e.ideal(), &p2.ideal().div(q2.ideal()).unwrap());
        let x = QuadNum::new(1, 1, 1, &d);
        let h90 = IdeleFS::diagonal(x.div(&x.conj()).unwrap());
        let u = fundamental_unit(&d);
        assert!(k0_eq(&boundary(&h90).unwrap(), &k0_identity(&d), &u));
        let bad = IdeleFS::one(&d).with(p2, QuadNum::from_int(2, &d));
        assert_eq!(boundary(&bad), Err(Error::NotInNormKernel));
    }

    #[test]
    fn map_i_examples() {
        let d = disc(12);
        assert!(map_i(&k0_identity(&d)).is_trivial());
        let im = map_i(&sigma(-1, &d));
        assert!(!im.t_is_norm);
        assert!(im.units.get(Place::Finite(2)) && im.units.get(Place::Finite(3)));
    }

    #[test]
    fn mu_examples() {
        let d = disc(-15);
        assert!(map_mu(&rat(1), &TateVec::zero(SupportRule::RamifiedOnly), &d).is_zero());
        let v = map_mu(&rat(5), &TateVec::zero(SupportRule::RamifiedOnly), &d);
        assert!(v.get(Place::Finite(3)) && v.get(Place::Finite(5)));
    }

    #[test]
    fn composites_vanish_on_enumeration() {
        for n in [-15i64, -23, -84, 12, 60, 145, -420, 136] {
            let d = disc(n);
            let cg = class_group(&d);
            let u = fundamental_unit(&d);
            let k0 = k0_structure_with(&cg, &u, 10_000).unwrap();
            for e in &k0.elements {
                let im = map_i(e);
                assert!(map_mu(&im.t, &im.units, &d).is_zero(), "Δ={n} e={e:?}");
                if im.is_trivial() {
                    let z = constructive_preimage(e, &u, 200).unwrap();
                    assert!(k0_eq(&boundary(&z).unwrap(), e, &u), "Δ={n}");
                }
            }
        }
    }

    #[test]
    fn mu1_then_boundary() {
        let d = disc(60);
        let u = fundamental_unit(&d);
        let x = QuadNum::new(7, 3, 1, &d);
        let z = x.div(&x.conj()).unwrap();
        let (p, q) = split_primes(&d, 7);
        let w = QuadNum::from_int(3, &d);
        let unit_idele = IdeleFS::one(&d).with(p, w.clone()).with(q, w.conj().inv().unwrap());
        let m = mu1(&z, &unit_idele).unwrap();
        assert!(k0_eq(&boundary(&m).unwrap(), &k0_identity(&d), &u));
        assert_eq!(mu1(&x, &unit_idele), Err(Error::NormKernelViolation));
    }

    #[test]
    fn boundary_is_homomorphism() {
        let d = disc(-23);
        let u = fundamental_unit(&d);
        let (p2, q2) = split_primes(&d, 2);
        let (p3, q3) = split_primes(&d, 3);
        let a = IdeleFS::one(&d).with(p2.clone(), p2.uniformizer()).with(q2.clone(), q2.uniformizer().inv().unwrap());
        let b = IdeleFS::one(&d).with(p3.clone(), p3.uniformizer().pow(2).unwrap()).with(q3, p3.uniformizer().conj().pow(-2).unwrap());
        let lhs = boundary(&a.mul(&b)).unwrap();
        let rhs = k0_mul(&boundary(&a).unwrap(), &boundary(&b).unwrap()).unwrap();
        assert!(k0_eq(&lhs, &rhs, &u));
    }

    #[test]
    fn norm_equation() {
        let d = disc(136);
        let u = fundamental_unit(&d);
        assert_eq!(u.eps_norm, 1);
        let x = solve_norm_equation(&rat(-1), &d, &u, 50).unwrap();
        assert_eq!(x.norm(), rat(-1));
        let half = Rational::new(9.into(), 2.into());
        let d2 = disc(-7);
        let x = solve_norm_equation(&half, &d2, &fundamental_unit(&d2), 50).unwrap();
        assert_eq!(x.norm(), half);
    }

    #[test]
    fn genus_examples() {
        let r = genus_engine(&disc(12));
        assert_eq!((r.t_fin, r.exceptional, r.rank2), (2, true, 0));
        assert!(r.all_pass());
        let r = genus_engine(&disc(-15));
        assert_eq!((r.t_fin, r.rank2), (2, 1));
        assert!(r.all_pass());
        let r = genus_engine(&disc(60));
        assert_eq!((r.t_fin, r.exceptional, r.rank2), (3, true, 1));
        assert!(r.all_pass());
    }
}
