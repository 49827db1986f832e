//! The ideal class group through binary quadratic forms.
//!
//! The narrow group is built first from proper equivalence classes of forms
//! (reduced forms for `Δ < 0`, cycles of reduced forms for `Δ > 0`). The wide
//! group `Cl(A)` is its quotient by the narrow class of `(√Δ)`, represented
//! by the negated principal form.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::abelian::{FiniteAbelian, GroupOps};
use crate::error::Result;
use crate::ideals::{compose_primitive, normalize_b, FracIdeal};
use crate::quadfield::{Discriminant, QuadNum};

/// A primitive binary quadratic form `ax² + bxy + cy²` of discriminant `Δ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    disc: Discriminant,
}

impl fmt::Debug for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// `b` reduced modulo `2|a|` into the window used by indefinite reduction:
/// `(−|a|, |a|]` when `|a| > √Δ`, else `(⌊√Δ⌋ − 2|a|, ⌊√Δ⌋]`.
fn indefinite_window(b: &BigInt, a: &BigInt, isqrt: &BigInt) -> BigInt {
    let abs_a = a.abs();
    if &abs_a > isqrt {
        normalize_b(b, &abs_a)
    } else {
        let two_a: BigInt = &abs_a * 2u32;
        let lo = isqrt - &two_a; // exclusive
        let r = (b - &lo).mod_floor(&two_a);
        if r.is_zero() {
            lo + two_a
        } else {
            lo + r
        }
    }
}

impl QForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, disc: &Discriminant) -> Self {
        let (a, b, c) = (a.into(), b.into(), c.into());
        assert_eq!(&b * &b - &a * &c * 4, disc.delta_big(), "wrong discriminant");
        Self { a, b, c, disc: disc.clone() }
    }

    /// Form `(a, b, (b² − Δ)/4a)`.
    pub fn from_ab(a: impl Into<BigInt>, b: impl Into<BigInt>, disc: &Discriminant) -> Self {
        let (a, b) = (a.into(), b.into());
        let c = (&b * &b - disc.delta_big()) / (&a * 4);
        Self::new(a, b, c, disc)
    }

    pub fn principal(disc: &Discriminant) -> Self {
        Self::from_ab(1, disc.parity(), disc)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn neg(&self) -> Self {
        Self { a: -&self.a, b: self.b.clone(), c: -&self.c, disc: self.disc.clone() }
    }

    pub fn key(&self) -> (i64, i64) {
        (
            self.a.to_i64().expect("reduced coefficient fits"),
            self.b.to_i64().expect("reduced coefficient fits"),
        )
    }

    pub fn is_reduced(&self) -> bool {
        if self.disc.is_real() {
            let s = BigInt::from(self.disc.isqrt());
            let two_a = self.a.abs() * 2;
            self.b.is_positive() && self.b <= s && &two_a + &self.b > s && &two_a - &self.b <= s
        } else {
            let b_abs = self.b.abs();
            b_abs <= self.a
                && self.a <= self.c
                && (!(b_abs == self.a || self.a == self.c) || !self.b.is_negative())
        }
    }

    /// One step of the reduction operator `(a, b, c) ↦ (c, r, ·)` with `r ≡ −b (mod 2c)`.
    pub fn rho(&self) -> Self {
        let b = if self.disc.is_real() {
            indefinite_window(&-&self.b, &self.c, &BigInt::from(self.disc.isqrt()))
        } else {
            normalize_b(&-&self.b, &self.c)
        };
        Self::from_ab(self.c.clone(), b, &self.disc)
    }

    /// Proper translation `b ↦ b + 2ak` into the normalisation window.
    fn normalized(&self) -> Self {
        let b = if self.disc.is_real() {
            indefinite_window(&self.b, &self.a, &BigInt::from(self.disc.isqrt()))
        } else {
            normalize_b(&self.b, &self.a)
        };
        Self::from_ab(self.a.clone(), b, &self.disc)
    }

    /// Some reduced form properly equivalent to `self`.
    pub fn to_reduced(&self) -> Self {
        let mut f = self.normalized();
        if self.disc.is_real() {
            while !f.is_reduced() {
                f = f.rho();
            }
        } else {
            while f.a > f.c {
                f = f.rho();
            }
            if f.a == f.c && f.b.is_negative() {
                f = f.rho();
            }
        }
        f
    }

    /// The full cycle of reduced forms through a reduced indefinite form.
    pub fn cycle(&self) -> Vec<QForm> {
        debug_assert!(self.disc.is_real() && self.is_reduced());
        let mut out = alloc::vec![self.clone()];
        let mut f = self.rho();
        while &f != self {
            out.push(f.clone());
            f = f.rho();
        }
        out
    }

    /// Composition, not reduced. Signs of `a` multiply; this realises the
    /// twist by the narrow class of `(√Δ)` on negative forms.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.disc, other.disc);
        let (_, a3, b3) = compose_primitive(
            &self.a.abs(),
            &self.b,
            &other.a.abs(),
            &other.b,
            &self.disc.delta_big(),
        );
        let f = Self::from_ab(a3, b3, &self.disc);
        if self.a.is_negative() != other.a.is_negative() {
            f.neg()
        } else {
            f
        }
    }
}

/// Canonical representative of a proper equivalence class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduced {
    /// The unique reduced form (`Δ < 0`).
    Definite(QForm),
    /// The cycle of reduced forms with its lexicographically least member (`Δ > 0`).
    Cycle { anchor: QForm, forms: Vec<QForm> },
}

impl Reduced {
    pub fn anchor(&self) -> &QForm {
        match self {
            Reduced::Definite(f) => f,
            Reduced::Cycle { anchor, .. } => anchor,
        }
    }
}

pub fn reduce(f: &QForm) -> Reduced {
    let r = f.to_reduced();
    if f.disc.is_real() {
        let forms = r.cycle();
        let anchor = forms.iter().min().expect("nonempty cycle").clone();
        Reduced::Cycle { anchor, forms }
    } else {
        Reduced::Definite(r)
    }
}

/// Form of the primitive part of an ideal: `[a, b] ↦ (a, b, (b² − Δ)/4a)`.
pub fn form_of_ideal(i: &FracIdeal) -> QForm {
    QForm::from_ab(i.a().clone(), i.b().clone(), i.disc())
}

/// Primitive ideal `[|a|, b]` of a form.
pub fn ideal_of_form(f: &QForm) -> FracIdeal {
    FracIdeal::primitive(f.a.abs(), f.b.clone(), &f.disc)
}

/// An ideal `ideal = multiplier · I` in the class of `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealReduction {
    pub ideal: FracIdeal,
    pub multiplier: QuadNum,
}

struct Tracked {
    a: BigInt,
    b: BigInt,
    mult: QuadNum,
}

impl Tracked {
    /// `[a, β] ↦ (β̄/a)·[a, β] = [|c|, r]`.
    fn rho(&mut self, disc: &Discriminant) {
        let c = (&self.b * &self.b - disc.delta_big()) / (&self.a * 4);
        let step = QuadNum::new(self.b.clone(), -1, self.a.clone(), disc);
        self.mult = &self.mult * &step;
        let b = if disc.is_real() {
            indefinite_window(&-&self.b, &c, &BigInt::from(disc.isqrt()))
        } else {
            normalize_b(&-&self.b, &c)
        };
        self.a = c.abs();
        self.b = b;
    }

    fn form(&self, disc: &Discriminant) -> QForm {
        QForm::from_ab(self.a.clone(), self.b.clone(), disc)
    }
}

fn tracked_reduced(i: &FracIdeal) -> Tracked {
    let disc = i.disc();
    let mut t = Tracked {
        a: i.a().clone(),
        b: i.b().clone(),
        mult: QuadNum::from_rational(&i.q().recip(), disc),
    };
    if disc.is_real() {
        t.b = indefinite_window(&t.b, &t.a, &BigInt::from(disc.isqrt()));
        while !t.form(disc).is_reduced() {
            t.rho(disc);
        }
    } else {
        loop {
            let f = t.form(disc);
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                t.rho(disc);
            } else {
                break;
            }
        }
    }
    t
}

/// A reduced ideal in the (wide) class of `i`, with the element relating them.
pub fn reduce_ideal(i: &FracIdeal) -> IdealReduction {
    let t = tracked_reduced(i);
    IdealReduction {
        ideal: FracIdeal::primitive(t.a, t.b, i.disc()),
        multiplier: t.mult,
    }
}

/// The canonical reduced ideal of the wide class of `i`: the unique reduced
/// ideal for `Δ < 0`, the least `(a, b)` on the reduced cycle for `Δ > 0`.
pub fn canonical_ideal(i: &FracIdeal) -> IdealReduction {
    let disc = i.disc();
    let mut t = tracked_reduced(i);
    if !disc.is_real() {
        return IdealReduction {
            ideal: FracIdeal::primitive(t.a, t.b, disc),
            multiplier: t.mult,
        };
    }
    let start = (t.a.clone(), t.b.clone());
    let mut best = IdealReduction {
        ideal: FracIdeal::primitive(t.a.clone(), t.b.clone(), disc),
        multiplier: t.mult.clone(),
    };
    loop {
        t.rho(disc);
        if (t.a.clone(), t.b.clone()) == start {
            break;
        }
        let cand = FracIdeal::primitive(t.a.clone(), t.b.clone(), disc);
        if (cand.a(), cand.b()) < (best.ideal.a(), best.ideal.b()) {
            best = IdealReduction { ideal: cand, multiplier: t.mult.clone() };
        }
    }
    best
}

/// All reduced forms of discriminant `Δ` (both signs of `a` when `Δ > 0`).
pub fn reduced_forms(disc: &Discriminant) -> Vec<QForm> {
    let delta = disc.delta();
    let mut out = Vec::new();
    if delta < 0 {
        let n = -delta;
        let mut a = 1i64;
        while 3 * a * a <= n {
            let mut b = -a + 1;
            while b <= a {
                if (b - delta).rem_euclid(2) == 0 {
                    let num = b * b - delta;
                    if num % (4 * a) == 0 {
                        let c = num / (4 * a);
                        let f = QForm::new(a, b, c, disc);
                        if c >= a && f.is_reduced() && a.gcd(&b).gcd(&c) == 1 {
                            out.push(f);
                        }
                    }
                }
                b += 1;
            }
            a += 1;
        }
    } else {
        let s = disc.isqrt();
        for b in 1..=s {
            if (b - delta).rem_euclid(2) != 0 {
                continue;
            }
            let m = (delta - b * b) / 4; // = −ac > 0
            // |a| ranges over divisors of m with s − b < 2|a| ≤ s + b
            let mut d = 1i64;
            while d * d <= m {
                if m % d == 0 {
                    for abs_a in [d, m / d] {
                        if 2 * abs_a > s - b && 2 * abs_a - b <= s {
                            for sign in [1i64, -1] {
                                let a = sign * abs_a;
                                let c = -m / a;
                                if a.gcd(&b).gcd(&c) == 1 {
                                    out.push(QForm::new(a, b, c, disc));
                                }
                            }
                        }
                        if d == m / d {
                            break;
                        }
                    }
                }
                d += 1;
            }
        }
        out.sort();
        out.dedup();
    }
    out
}

/// Narrow class group indexed by class number `0..h⁺`, with a lookup from
/// every reduced form to its class.
#[derive(Clone, Debug)]
pub struct NarrowGroup {
    disc: Discriminant,
    reps: Vec<QForm>,
    lookup: BTreeMap<(i64, i64), usize>,
    principal: usize,
    twist: usize,
}

impl NarrowGroup {
    pub fn new(disc: &Discriminant) -> Self {
        let forms = reduced_forms(disc);
        let mut lookup = BTreeMap::new();
        let mut reps = Vec::new();
        if disc.is_real() {
            for f in &forms {
                if lookup.contains_key(&f.key()) {
                    continue;
                }
                let cyc = f.cycle();
                let idx = reps.len();
                for g in &cyc {
                    lookup.insert(g.key(), idx);
                }
                reps.push(cyc.into_iter().min().expect("nonempty"));
            }
        } else {
            for f in forms {
                lookup.insert(f.key(), reps.len());
                reps.push(f);
            }
        }
        let mut g = Self { disc: disc.clone(), reps, lookup, principal: 0, twist: 0 };
        g.principal = g.class_of_form(&QForm::principal(disc));
        g.twist = if disc.is_real() {
            g.class_of_form(&QForm::principal(disc).neg())
        } else {
            g.principal
        };
        g
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, idx: usize) -> &QForm {
        &self.reps[idx]
    }

    pub fn reps(&self) -> &[QForm] {
        &self.reps
    }

    pub fn principal(&self) -> usize {
        self.principal
    }

    /// Narrow class of `(√Δ)`; trivial iff a unit of norm −1 exists or `Δ < 0`.
    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn class_of_form(&self, f: &QForm) -> usize {
        self.lookup[&f.to_reduced().key()]
    }

    /// Narrow class of an ideal with its positive orientation.
    pub fn class_of_ideal(&self, i: &FracIdeal) -> usize {
        self.class_of_form(&form_of_ideal(i))
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.class_of_form(&self.reps[i].compose(&self.reps[j]))
    }

    /// Wide class: the smaller index of the coset `{i, i·twist}`.
    pub fn wide(&self, i: usize) -> usize {
        i.min(self.mul(i, self.twist))
    }
}

struct NarrowOps<'a>(&'a NarrowGroup);

impl GroupOps for NarrowOps<'_> {
    type Elem = usize;
    fn identity(&self) -> usize {
        self.0.principal
    }
    fn op(&self, a: &usize, b: &usize) -> usize {
        self.0.mul(*a, *b)
    }
}

struct WideOps<'a>(&'a NarrowGroup);

impl GroupOps for WideOps<'_> {
    type Elem = usize;
    fn identity(&self) -> usize {
        self.0.wide(self.0.principal)
    }
    fn op(&self, a: &usize, b: &usize) -> usize {
        self.0.wide(self.0.mul(*a, *b))
    }
}

/// Class group data: `Cl(A)` together with the narrow class number.
#[derive(Clone, Debug)]
pub struct ClassGroupData {
    pub disc: Discriminant,
    pub h: u64,
    pub h_narrow: u64,
    pub divisors: Vec<u64>,
    pub narrow_divisors: Vec<u64>,
    pub generators: Vec<FracIdeal>,
    pub rank2: usize,
    narrow: NarrowGroup,
    wide: FiniteAbelian<usize>,
}

impl ClassGroupData {
    pub fn narrow(&self) -> &NarrowGroup {
        &self.narrow
    }

    /// Wide class index of an ideal (the coset representative index).
    pub fn class_of(&self, i: &FracIdeal) -> usize {
        self.narrow.wide(self.narrow.class_of_ideal(i))
    }

    pub fn identity(&self) -> usize {
        self.narrow.wide(self.narrow.principal)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.narrow.wide(self.narrow.mul(a, b))
    }

    /// Coset representatives of the wide group, one per class.
    pub fn classes(&self) -> impl Iterator<Item = &usize> {
        self.wide.elements()
    }

    pub fn class_ideal(&self, idx: usize) -> FracIdeal {
        ideal_of_form(self.narrow.rep(idx))
    }

    /// Class index of `∏ generators[i]^{x[i]}`.
    pub fn element_of_basis(&self, x: &[i64]) -> usize {
        let mut acc = self.identity();
        for (g, &e) in self.wide.basis().iter().zip(x) {
            for _ in 0..e.rem_euclid(self.order_of(*g) as i64) {
                acc = self.mul(acc, *g);
            }
        }
        acc
    }

    pub fn order_of(&self, idx: usize) -> usize {
        crate::abelian::element_order(&WideOps(&self.narrow), &idx)
    }
}

/// `Cl(A)` with its structure, narrow class number and 2-rank.
pub fn class_group(disc: &Discriminant) -> ClassGroupData {
    let narrow = NarrowGroup::new(disc);
    let all: Vec<usize> = (0..narrow.order()).collect();
    let budget = narrow.order() + 1;
    let narrow_struct = FiniteAbelian::generate(&NarrowOps(&narrow), all.iter().copied(), budget)
        .expect("narrow group closes within its order");
    let wide_cands: Vec<usize> = all.iter().map(|&i| narrow.wide(i)).collect();
    let wide = FiniteAbelian::generate(&WideOps(&narrow), wide_cands, budget)
        .expect("wide group closes within its order");
    let generators = wide.basis().iter().map(|&i| ideal_of_form(narrow.rep(i))).collect();
    ClassGroupData {
        disc: disc.clone(),
        h: wide.order() as u64,
        h_narrow: narrow_struct.order() as u64,
        divisors: wide.divisors().to_vec(),
        narrow_divisors: narrow_struct.divisors().to_vec(),
        generators,
        rank2: wide.two_rank(),
        narrow,
        wide,
    }
}

/// Number of proper classes counted directly: reduced forms for `Δ < 0`,
/// cycles of reduced forms for `Δ > 0`.
pub fn count_narrow_classes(disc: &Discriminant) -> usize {
    let forms = reduced_forms(disc);
    if !disc.is_real() {
        return forms.len();
    }
    let mut seen = alloc::collections::BTreeSet::new();
    let mut cycles = 0;
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        cycles += 1;
        seen.extend(f.cycle());
    }
    cycles
}

/// `Cl(A)_G = Cl/Cl²` for the Galois involution, which inverts classes.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub dim: usize,
    /// Ideals whose classes form an 𝔽₂-basis of `Cl/Cl²`.
    pub basis: Vec<FracIdeal>,
    /// One ideal per coset of `Cl²`, `2^dim` in total.
    pub coset_reps: Vec<FracIdeal>,
    /// Order of the norm kernel `ₙCl(A)`; equals `h` since `Cl(ℤ)` is trivial.
    pub norm_kernel_order: u64,
}

pub fn coinvariants(cg: &ClassGroupData) -> Coinvariants {
    let basis: Vec<FracIdeal> = cg
        .generators
        .iter()
        .zip(&cg.divisors)
        .filter(|(_, &d)| d % 2 == 0)
        .map(|(g, _)| g.clone())
        .collect();
    let mut coset_reps = alloc::vec![FracIdeal::unit(&cg.disc)];
    for g in &basis {
        let more: Vec<FracIdeal> = coset_reps.iter().map(|r| r.mul(g).expect("same discriminant")).collect();
        coset_reps.extend(more);
    }
    Coinvariants { dim: basis.len(), basis, coset_reps, norm_kernel_order: cg.h }
}

/// Whether the class of `i` lies in `Cl²`.
pub fn is_square_class(cg: &ClassGroupData, i: &FracIdeal) -> bool {
    let target = cg.class_of(i);
    cg.classes().any(|&c| cg.mul(c, c) == target)
}

/// Class group order from the closure versus direct counting. Used as an oracle check.
pub fn narrow_order_by_closure(disc: &Discriminant) -> Result<usize> {
    let narrow = NarrowGroup::new(disc);
    let g = FiniteAbelian::generate(&NarrowOps(&narrow), 0..narrow.order(), narrow.order() + 1)?;
    Ok(g.order())
}
