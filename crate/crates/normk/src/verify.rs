//! Seeded property checks for the Mayer–Vietoris maps at one discriminant.

use normk_core::arith::primes_up_to;
use normk_core::classgroup::class_group;
use normk_core::ideals::{primes_above, Decomposition, FracIdeal, PrimeIdeal};
use normk_core::knorm::{k0_eq, k0_eq_by_key, k0_identity, k0_make, k0_mul, k0_structure_with, K0Elt};
use normk_core::mv::{boundary, constructive_preimage, map_i, map_mu, mu1, IdeleFS};
use normk_core::units::{fundamental_unit, UnitData};
use normk_core::{Discriminant, Error, QuadNum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const PRIME_POOL_BOUND: u64 = 40;
const NORM_SEARCH_BOUND: u64 = 300;
const K0_BUDGET: usize = 20_000;

/// Random elements drawn from a fixed pool of small primes of `F`.
pub struct Sampler<'a> {
    disc: &'a Discriminant,
    units: &'a UnitData,
    rng: ChaCha8Rng,
    primes: Vec<Decomposition>,
}

impl<'a> Sampler<'a> {
    pub fn new(disc: &'a Discriminant, units: &'a UnitData, seed: u64) -> Self {
        let primes = primes_up_to(PRIME_POOL_BOUND).into_iter().map(|p| primes_above(disc, p)).collect();
        Self { disc, units, rng: ChaCha8Rng::seed_from_u64(seed), primes }
    }

    fn decomposition(&mut self) -> Decomposition {
        let k = self.rng.random_range(0..self.primes.len());
        self.primes[k].clone()
    }

    /// A nonzero element `(x + y√Δ)/2` with small coefficients.
    pub fn element(&mut self) -> QuadNum {
        loop {
            let x: i64 = self.rng.random_range(-30..=30);
            let y: i64 = self.rng.random_range(-6..=6);
            let z = QuadNum::new(x, y, 1, self.disc);
            if !z.is_zero() {
                return z;
            }
        }
    }

    /// An element of norm 1 of the form `±x/x̄`.
    pub fn norm_one(&mut self) -> QuadNum {
        let x = self.element();
        let z = x.div(&x.conj()).expect("nonzero");
        if self.rng.random_bool(0.5) {
            -&z
        } else {
            z
        }
    }

    fn local_unit(&mut self, prime: &PrimeIdeal) -> QuadNum {
        loop {
            let w = self.element();
            if FracIdeal::principal(&w).expect("nonzero").valuation_at(prime) == 0 {
                return w;
            }
        }
    }

    /// A global unit of norm 1.
    fn norm_one_unit(&mut self) -> QuadNum {
        let sign = if self.rng.random_bool(0.5) { -1 } else { 1 };
        let mut u = QuadNum::from_int(sign, self.disc);
        if let Some(eps) = &self.units.eps {
            let k: i64 = self.rng.random_range(-2..=2);
            let step = if self.units.eps_norm == -1 { 2 * k } else { k };
            u = &u * &eps.pow(step).expect("nonzero");
        }
        u
    }

    /// An idele whose ideal has norm 1: a diagonal `x/x̄`, balanced
    /// valuations at split pairs, and unit components elsewhere.
    pub fn norm_kernel_idele(&mut self) -> IdeleFS {
        let mut z = IdeleFS::diagonal(self.norm_one());
        for _ in 0..self.rng.random_range(0..=3) {
            match self.decomposition() {
                Decomposition::Split(p, q) => {
                    let e: i64 = self.rng.random_range(-2..=2);
                    let a = &p.uniformizer().pow(e).expect("nonzero") * &self.local_unit(&p);
                    let b = &q.uniformizer().pow(-e).expect("nonzero") * &self.local_unit(&q);
                    z = z.with(p, a).with(q, b);
                }
                Decomposition::Inert(p) | Decomposition::Ramified(p) => {
                    let w = self.local_unit(&p);
                    z = z.with(p, w);
                }
            }
        }
        z
    }

    /// A unit idele of norm 1.
    pub fn norm_one_unit_idele(&mut self) -> IdeleFS {
        let mut u = IdeleFS::diagonal(self.norm_one_unit());
        for _ in 0..self.rng.random_range(0..=3) {
            match self.decomposition() {
                Decomposition::Split(p, q) => {
                    let w = self.local_unit(&p);
                    let w_bar_inv = w.conj().inv().expect("nonzero");
                    u = u.with(p, w).with(q, w_bar_inv);
                }
                Decomposition::Inert(p) | Decomposition::Ramified(p) => {
                    let y = self.local_unit(&p);
                    u = u.with(p, y.div(&y.conj()).expect("nonzero"));
                }
            }
        }
        u
    }

    /// `(±N(I), I)` for a random product of small prime powers.
    pub fn k0_element(&mut self) -> K0Elt {
        let mut ideal = FracIdeal::unit(self.disc);
        for _ in 0..self.rng.random_range(0..=3) {
            let d = self.decomposition();
            let ps = d.primes();
            let p = &ps[self.rng.random_range(0..ps.len())];
            let e: i64 = self.rng.random_range(-2..=2);
            ideal = ideal.mul(&p.ideal().pow(e)).expect("same discriminant");
        }
        let n = ideal.norm();
        let t = if self.rng.random_bool(0.5) { -n } else { n };
        k0_make(t, ideal).expect("norm matches")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: String,
    pub failures: String,
    pub pass: bool,
}

impl PropertyResult {
    fn new(name: &str, checked: usize, failures: usize) -> Self {
        Self { name: name.into(), checked: checked.to_string(), failures: failures.to_string(), pass: failures == 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub delta: String,
    pub samples: String,
    pub seed: String,
    pub properties: Vec<PropertyResult>,
    pub pass: bool,
}

fn count(samples: usize, mut check: impl FnMut() -> bool) -> usize {
    (0..samples).filter(|_| !check()).count()
}

/// Runs every property with `samples` draws from a generator seeded by `seed`.
pub fn verify(disc: &Discriminant, samples: usize, seed: u64) -> VerifyReport {
    let units = fundamental_unit(disc);
    let mut s = Sampler::new(disc, &units, seed);
    let id = k0_identity(disc);
    let mut props = Vec::new();

    let f = count(samples, || match boundary(&s.norm_kernel_idele()) {
        Ok(e) => map_i(&e).is_trivial(),
        Err(_) => false,
    });
    props.push(PropertyResult::new("i_after_boundary", samples, f));

    let f = count(samples, || {
        let im = map_i(&s.k0_element());
        map_mu(&im.t, &im.units, disc).is_zero()
    });
    props.push(PropertyResult::new("mu_after_i", samples, f));

    let f = count(samples, || {
        let z = s.norm_one();
        let u = s.norm_one_unit_idele();
        match mu1(&z, &u).and_then(|m| boundary(&m)) {
            Ok(e) => k0_eq(&e, &id, &units),
            Err(_) => false,
        }
    });
    props.push(PropertyResult::new("boundary_after_mu1", samples, f));

    let f = count(samples, || {
        let (a, b) = (s.norm_kernel_idele(), s.norm_kernel_idele());
        match (boundary(&a.mul(&b)), boundary(&a), boundary(&b)) {
            (Ok(ab), Ok(ea), Ok(eb)) => k0_eq(&ab, &k0_mul(&ea, &eb).expect("same discriminant"), &units),
            _ => false,
        }
    });
    props.push(PropertyResult::new("boundary_homomorphism", samples, f));

    let f = count(samples, || {
        let (a, b) = (s.k0_element(), s.k0_element());
        k0_eq(&a, &b, &units) == k0_eq_by_key(&a, &b, &units)
    });
    props.push(PropertyResult::new("k0_eq_routes_agree", samples, f));

    props.push(constructive_kernel(disc, &units));

    let pass = props.iter().all(|p| p.pass);
    VerifyReport {
        delta: disc.delta().to_string(),
        samples: samples.to_string(),
        seed: seed.to_string(),
        properties: props,
        pass,
    }
}

/// For every element of the enumerated `K₀` with trivial `i`-image, a preimage
/// under `∂` is assembled and checked.
pub fn constructive_kernel(disc: &Discriminant, units: &UnitData) -> PropertyResult {
    let cg = class_group(disc);
    let k0 = match k0_structure_with(&cg, units, K0_BUDGET) {
        Ok(k0) => k0,
        Err(Error::ClosureBudgetExceeded(_)) => return PropertyResult::new("constructive_kernel", 0, 0),
        Err(_) => return PropertyResult::new("constructive_kernel", 0, 1),
    };
    let kernel: Vec<&K0Elt> = k0.elements.iter().filter(|e| map_i(e).is_trivial()).collect();
    let failures = kernel
        .iter()
        .filter(|e| match constructive_preimage(e, units, NORM_SEARCH_BOUND).and_then(|z| boundary(&z)) {
            Ok(b) => !k0_eq(&b, e, units),
            Err(_) => true,
        })
        .count();
    PropertyResult::new("constructive_kernel", kernel.len(), failures)
}
