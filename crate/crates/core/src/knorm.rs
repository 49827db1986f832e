//! The relative group `K₀` of the norm functor for `ℚ(√Δ)/ℚ`.
//!
//! Elements are pairs `(t, I)` with `t ∈ ℚ*`, `I` a fractional ideal and
//! `|t| = N(I)`, taken modulo pairs `(N(z), zO_F)`. This group sits in the
//! exact sequence `1 → ℤ*/N(A*) → K₀ → Cl(A) → 1` through `σ` and `ρ`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::abelian::{FiniteAbelian, GroupOps};
use crate::classgroup::{canonical_ideal, class_group, ClassGroupData};
use crate::error::{Error, Result};
use crate::ideals::FracIdeal;
use crate::quadfield::{Discriminant, Rational};
use crate::units::{fundamental_unit, UnitData};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct K0Elt {
    t: Rational,
    ideal: FracIdeal,
}

/// Canonical label of a class: sign of `t` and the canonical reduced ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct K0Key {
    pub negative: bool,
    pub a: BigInt,
    pub b: BigInt,
}

impl K0Elt {
    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn ideal(&self) -> &FracIdeal {
        &self.ideal
    }

    pub fn disc(&self) -> &Discriminant {
        self.ideal.disc()
    }
}

pub fn k0_make(t: Rational, ideal: FracIdeal) -> Result<K0Elt> {
    if t.abs() != ideal.norm() {
        return Err(Error::NormMismatch);
    }
    Ok(K0Elt { t, ideal })
}

pub fn k0_identity(disc: &Discriminant) -> K0Elt {
    K0Elt { t: Rational::one(), ideal: FracIdeal::unit(disc) }
}

pub fn k0_mul(e1: &K0Elt, e2: &K0Elt) -> Result<K0Elt> {
    Ok(K0Elt { t: &e1.t * &e2.t, ideal: e1.ideal.mul(&e2.ideal)? })
}

pub fn k0_inv(e: &K0Elt) -> K0Elt {
    K0Elt { t: e.t.recip(), ideal: e.ideal.inverse() }
}

/// The class `𝒩(z) = (N(z), zO_F)`, trivial in `K₀`.
pub fn k0_of_element(z: &crate::QuadNum) -> Result<K0Elt> {
    Ok(K0Elt { t: z.norm(), ideal: FracIdeal::principal(z)? })
}

/// Canonical key: `(t, I) ~ (t·N(z), zI)` with `zI` the canonical reduced
/// ideal, and the sign of `t` dropped when some unit has norm `−1`.
pub fn k0_key(e: &K0Elt, units: &UnitData) -> K0Key {
    let red = canonical_ideal(&e.ideal);
    let t = &e.t * red.multiplier.norm();
    debug_assert_eq!(t.abs(), red.ideal.norm());
    K0Key {
        negative: t.is_negative() && !units.has_norm_minus_one(),
        a: red.ideal.a().clone(),
        b: red.ideal.b().clone(),
    }
}

pub fn k0_from_key(key: &K0Key, disc: &Discriminant) -> K0Elt {
    let ideal = FracIdeal::primitive(key.a.clone(), key.b.clone(), disc);
    let t = Rational::from_integer(if key.negative { -key.a.clone() } else { key.a.clone() });
    K0Elt { t, ideal }
}

/// Equality in `K₀` straight from the quotient: `e1·e2⁻¹ = (s, zO_F)` with
/// `s = N(z)`, or `s = −N(z)` when a unit of norm `−1` exists.
pub fn k0_eq(e1: &K0Elt, e2: &K0Elt, units: &UnitData) -> bool {
    let q = match k0_mul(e1, &k0_inv(e2)) {
        Ok(q) => q,
        Err(_) => return false,
    };
    match q.ideal.is_principal_with_generator() {
        None => false,
        Some(z) => {
            let n = z.norm();
            q.t == n || (units.has_norm_minus_one() && q.t == -n)
        }
    }
}

/// Equality by comparing canonical keys.
pub fn k0_eq_by_key(e1: &K0Elt, e2: &K0Elt, units: &UnitData) -> bool {
    e1.disc() == e2.disc() && k0_key(e1, units) == k0_key(e2, units)
}

/// `σ(v) = [v, O_F]` for `v ∈ {±1}`.
pub fn sigma(v: i8, disc: &Discriminant) -> K0Elt {
    assert!(v == 1 || v == -1);
    K0Elt { t: Rational::from_integer(v.into()), ideal: FracIdeal::unit(disc) }
}

/// `ρ([t, I]) = [I] ∈ Cl(A)`, as a class index of `cg`.
pub fn rho(e: &K0Elt, cg: &ClassGroupData) -> usize {
    cg.class_of(&e.ideal)
}

struct K0Ops<'a> {
    disc: &'a Discriminant,
    units: &'a UnitData,
}

impl GroupOps for K0Ops<'_> {
    type Elem = K0Key;

    fn identity(&self) -> K0Key {
        k0_key(&k0_identity(self.disc), self.units)
    }

    fn op(&self, a: &K0Key, b: &K0Key) -> K0Key {
        let e = k0_mul(&k0_from_key(a, self.disc), &k0_from_key(b, self.disc)).expect("same discriminant");
        k0_key(&e, self.units)
    }
}

/// `K₀` as computed by closure, with the data of the surrounding sequence.
#[derive(Clone, Debug)]
pub struct K0Structure {
    pub disc: Discriminant,
    pub order: usize,
    pub divisors: Vec<u64>,
    pub h: u64,
    pub h0_units_order: u32,
    pub elements: Vec<K0Elt>,
}

impl K0Structure {
    /// `|K₀| = |Ĥ⁰(G, A*)|·h`.
    pub fn order_matches_extension(&self) -> bool {
        self.order as u64 == self.h0_units_order as u64 * self.h
    }
}

/// Closes `{σ(−1)} ∪ {(N(G), G)}` over class group generators `G`.
pub fn k0_order_and_structure(disc: &Discriminant, budget: usize) -> Result<K0Structure> {
    let cg = class_group(disc);
    let units = fundamental_unit(disc);
    k0_structure_with(&cg, &units, budget)
}

pub fn k0_structure_with(cg: &ClassGroupData, units: &UnitData, budget: usize) -> Result<K0Structure> {
    let disc = &cg.disc;
    let ops = K0Ops { disc, units };
    let mut cands = alloc::vec![k0_key(&sigma(-1, disc), units)];
    for g in &cg.generators {
        let lift = k0_make(g.norm(), g.clone())?;
        cands.push(k0_key(&lift, units));
    }
    let grp = FiniteAbelian::generate(&ops, cands, budget)?;
    Ok(K0Structure {
        disc: disc.clone(),
        order: grp.order(),
        divisors: grp.divisors().to_vec(),
        h: cg.h,
        h0_units_order: units.h0_units_order,
        elements: grp.elements().map(|k| k0_from_key(k, disc)).collect(),
    })
}

/// Verdicts for the sequence `1 → ℤ*/N(A*) →σ K₀ →ρ Cl(A) → 1` on an enumeration of `K₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exactness {
    pub order_matches: bool,
    pub rho_sigma_trivial: bool,
    pub sigma_injective_iff_h0_two: bool,
    pub ker_rho_eq_im_sigma: bool,
    pub rho_surjective: bool,
    pub kernel_size: usize,
}

impl Exactness {
    pub fn all_pass(&self) -> bool {
        self.order_matches
            && self.rho_sigma_trivial
            && self.sigma_injective_iff_h0_two
            && self.ker_rho_eq_im_sigma
            && self.rho_surjective
    }
}

pub fn check_exactness(k0: &K0Structure, cg: &ClassGroupData, units: &UnitData) -> Exactness {
    let disc = &k0.disc;
    let id_class = cg.identity();
    let sig = [sigma(1, disc), sigma(-1, disc)];
    let rho_sigma_trivial = sig.iter().all(|s| rho(s, cg) == id_class);
    let sigma_injective = !k0_eq(&sig[0], &sig[1], units);
    let mut ker_ok = true;
    let mut kernel_size = 0;
    let mut images = alloc::collections::BTreeSet::new();
    for e in &k0.elements {
        let c = rho(e, cg);
        images.insert(c);
        if c == id_class {
            kernel_size += 1;
            ker_ok &= sig.iter().any(|s| k0_eq(e, s, units));
        }
    }
    let expected_kernel = if sigma_injective { 2 } else { 1 };
    Exactness {
        order_matches: k0.order_matches_extension(),
        rho_sigma_trivial,
        sigma_injective_iff_h0_two: sigma_injective == (units.h0_units_order == 2),
        ker_rho_eq_im_sigma: ker_ok && kernel_size == expected_kernel,
        rho_surjective: images.len() as u64 == cg.h,
        kernel_size,
    }
}
