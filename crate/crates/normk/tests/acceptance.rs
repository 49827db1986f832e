//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use normk::scan::{self, ScanConfig};
use normk::verify::verify;
use normk_core::classgroup::{class_group, count_narrow_classes, reduce, QForm};
use normk_core::knorm::{check_exactness, k0_eq, k0_structure_with, rho, sigma};
use normk_core::local::{contributing_places, hilbert_symbol, Place};
use normk_core::mv::GenusReport;
use normk_core::units::fundamental_unit;
use normk_core::{Discriminant, QuadNum, Rational};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCAN_BOUND: i64 = 100_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Distinct prime divisors of `|n|` by trial division.
fn prime_divisors(n: i64) -> Vec<i64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn has_prime_3_mod_4(delta: i64) -> bool {
    prime_divisors(delta).iter().any(|p| p % 4 == 3)
}

fn disc(n: i64) -> Discriminant {
    Discriminant::new(n).unwrap()
}

fn criterion_1(reports: &[GenusReport]) -> Outcome {
    let bad: Vec<i64> = reports
        .iter()
        .filter(|r| {
            let t = prime_divisors(r.delta).len();
            let expected = if r.delta > 0 && has_prime_3_mod_4(r.delta) { t - 2 } else { t - 1 };
            r.rank2 != expected
        })
        .map(|r| r.delta)
        .collect();
    let exceptional = reports.iter().filter(|r| r.delta > 0 && has_prime_3_mod_4(r.delta)).count();
    outcome(
        bad.is_empty(),
        format!(
            "rank2 = t-1 (t-2 when real with a prime 3 mod 4): {} discriminants, {} exceptional, {} violations {:?}",
            reports.len(),
            exceptional,
            bad.len(),
            &bad[..bad.len().min(5)]
        ),
    )
}

fn criterion_2(reports: &[GenusReport]) -> Outcome {
    let (mut real, mut imag, mut bad, mut discrepancy) = (0, 0, Vec::new(), 0);
    for r in reports {
        let t = prime_divisors(r.delta).len();
        if r.delta > 0 {
            real += 1;
            if r.dim_v != t - 1 {
                bad.push(r.delta);
            }
        } else {
            imag += 1;
            let t_all = t + 1;
            if r.dim_v != t_all - 1 {
                bad.push(r.delta);
            }
            if r.dim_v != t - 1 {
                discrepancy += 1;
            }
        }
    }
    println!(
        "  note: imaginary fields use the finite-place genus space, dim = t_all - 1 = t; \
         differs from t - 1 at {discrepancy} of {imag} imaginary discriminants"
    );
    outcome(
        bad.is_empty(),
        format!(
            "genus space dim: t-1 on {real} real, t_all-1 on {imag} imaginary, {} violations {:?}",
            bad.len(),
            &bad[..bad.len().min(5)]
        ),
    )
}

fn criterion_3(reports: &[GenusReport]) -> Outcome {
    let bad: Vec<i64> = reports.iter().filter(|r| r.dim_v != r.dim_h + r.rank2).map(|r| r.delta).collect();
    outcome(
        bad.is_empty(),
        format!("dim V = dim H + rank2 on {} discriminants, {} violations {:?}", reports.len(), bad.len(), &bad[..bad.len().min(5)]),
    )
}

/// 100 imaginary and 100 real discriminants with `h ≤ 50`, evenly spread over the scan.
fn small_class_number_set(reports: &[GenusReport]) -> Vec<i64> {
    let pick = |neg: bool| -> Vec<i64> {
        let pool: Vec<i64> = reports.iter().filter(|r| (r.delta < 0) == neg && r.h <= 50).map(|r| r.delta).collect();
        let step = pool.len() / 100;
        pool.iter().step_by(step.max(1)).take(100).copied().collect()
    };
    let mut set = pick(true);
    set.extend(pick(false));
    set
}

fn criterion_4(reports: &[GenusReport]) -> Outcome {
    let set = small_class_number_set(reports);
    let mut bad = Vec::new();
    let mut elements = 0usize;
    for &n in &set {
        let d = disc(n);
        let cg = class_group(&d);
        let units = fundamental_unit(&d);
        let Ok(k0) = k0_structure_with(&cg, &units, 10_000) else {
            bad.push(n);
            continue;
        };
        elements += k0.elements.len();
        let order_ok = k0.order as u64 == u64::from(units.h0_units_order) * cg.h;
        let sig = [sigma(1, &d), sigma(-1, &d)];
        let im_sigma_in_ker = sig.iter().all(|s| rho(s, &cg) == cg.identity());
        let im_sigma_size = if k0_eq(&sig[0], &sig[1], &units) { 1 } else { 2 };
        let kernel: Vec<_> = k0.elements.iter().filter(|e| rho(e, &cg) == cg.identity()).collect();
        let ker_in_im = kernel.iter().all(|e| sig.iter().any(|s| k0_eq(e, s, &units)));
        let exact = check_exactness(&k0, &cg, &units).all_pass();
        if !(order_ok && im_sigma_in_ker && ker_in_im && kernel.len() == im_sigma_size && exact) {
            bad.push(n);
        }
    }
    outcome(
        set.len() == 200 && bad.is_empty(),
        format!(
            "|K0| = |H0(units)|·h and ker rho = im sigma on {} discriminants with h <= 50 ({elements} K0 elements), {} violations {:?}",
            set.len(),
            bad.len(),
            bad
        ),
    )
}

/// Reduced primitive forms `(a, b, c)` counted by brute force, and for `Δ > 0`
/// grouped into cycles under `(a, b, c) ↦ (c, b', ·)`.
fn brute_force_class_count(delta: i64) -> usize {
    let gcd = |mut a: i64, mut b: i64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    };
    let primitive = |a: i64, b: i64, c: i64| gcd(gcd(a, b), c) == 1;
    if delta < 0 {
        let mut count = 0;
        let mut a = 1;
        while 3 * a * a <= -delta {
            for b in -a + 1..=a {
                let num = b * b - delta;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) || !primitive(a, b, c) {
                    continue;
                }
                count += 1;
            }
            a += 1;
        }
        return count;
    }
    let s = (delta as f64).sqrt() as i64;
    let s = (s - 1..=s + 1).filter(|x| x * x <= delta).max().unwrap();
    let mut forms = HashSet::new();
    for b in 1..=s {
        for abs_a in 1..=(s + b) / 2 + 1 {
            let two_a = 2 * abs_a;
            let in_window = (two_a + b) * (two_a + b) > delta && (two_a <= b || (two_a - b) * (two_a - b) < delta);
            if !in_window || (b * b - delta) % (4 * abs_a) != 0 {
                continue;
            }
            for a in [abs_a, -abs_a] {
                let c = (b * b - delta) / (4 * a);
                if primitive(a, b, c) {
                    forms.insert((a, b, c));
                }
            }
        }
    }
    let step = |(_, b, c): (i64, i64, i64)| {
        let m = 2 * c.abs();
        let lo = s + 1 - m;
        let b2 = lo + (-b - lo).rem_euclid(m);
        (c, b2, (b2 * b2 - delta) / (4 * c))
    };
    let mut seen = HashSet::new();
    let mut cycles = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        while seen.insert(g) {
            g = step(g);
            assert!(forms.contains(&g), "step left the reduced set at Δ={delta}");
        }
    }
    cycles
}

/// Order of the group generated by prime forms below `√|Δ|` and, for `Δ > 0`,
/// the form `(−1, b, c)`, closed under composition.
fn composition_closure_order(d: &Discriminant) -> usize {
    let delta = d.delta();
    let bound = (delta.unsigned_abs() as f64).sqrt() as i64 + 1;
    let mut gens = Vec::new();
    for p in (2..=bound).filter(|&p| prime_divisors(p) == [p]) {
        let m = 4 * p;
        if let Some(b) = (0..2 * p).find(|b| (b * b - delta).rem_euclid(m) == 0) {
            gens.push(QForm::from_ab(p, b, d));
        }
    }
    if delta > 0 {
        gens.push(QForm::from_ab(-1, delta.rem_euclid(2), d));
    }
    let key = |f: &QForm| reduce(f).anchor().key();
    let id = reduce(&QForm::principal(d)).anchor().clone();
    let mut elems = vec![id.clone()];
    let mut keys = BTreeSet::from([key(&id)]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = reduce(&x.compose(g)).anchor().clone();
            if keys.insert(key(&y)) {
                elems.push(y.clone());
                frontier.push(y);
            }
        }
    }
    elems.len()
}

/// Smallest `y ≤ limit` with `x² − Δy² = ±4` solvable, returning `(x, y, sign)`.
fn pell_brute_force(delta: i64, limit: u64) -> Option<(u64, u64, i8)> {
    let delta = delta as u64;
    (1..=limit).find_map(|y| {
        let base = delta * y * y;
        [(base - 4, -1i8), (base + 4, 1)]
            .into_iter()
            .find_map(|(x2, s)| (x2.isqrt() * x2.isqrt() == x2).then(|| (x2.isqrt(), y, s)))
    })
}

/// Whether the unit `ε = (x + y√Δ)/2 > 1` equals `η^k` for a unit `η` and `k ≥ 2`.
/// Such `η` has trace `a` within 2 of `x^{1/k}`, and `η > 1.6` bounds `k`.
fn is_proper_power(eps: &QuadNum, d: &Discriminant) -> bool {
    let x = eps.x();
    let delta = BigInt::from(d.delta());
    let max_k = x.bits() as u32 * 3 / 2 + 2;
    (2..=max_k).filter(|&k| prime_divisors(k as i64) == [k as i64]).any(|k| {
        let r = x.nth_root(k);
        (-1i64..=2).any(|off| {
            let a = &r + off;
            [4i64, -4].into_iter().any(|s| {
                let rest = &a * &a - s;
                if rest.sign() != num_bigint::Sign::Plus || (&rest % &delta).sign() != num_bigint::Sign::NoSign {
                    return false;
                }
                let b2 = rest / &delta;
                let b = b2.sqrt();
                &b * &b == b2 && QuadNum::new(a.clone(), b, 1, d).pow(k as i64).unwrap() == *eps
            })
        })
    })
}

fn criterion_5() -> Outcome {
    let mut bad_order = Vec::new();
    let mut count = 0;
    for n in (-2000i64..=2000).filter(|&n| Discriminant::is_fundamental(n)) {
        let d = disc(n);
        count += 1;
        let closure = composition_closure_order(&d);
        let brute = brute_force_class_count(n);
        if closure != brute || count_narrow_classes(&d) != brute || class_group(&d).h_narrow as usize != brute {
            bad_order.push(n);
        }
    }
    const PELL_LIMIT: u64 = 200_000;
    let mut bad_unit = Vec::new();
    let (mut units_checked, mut by_root_test) = (0, 0);
    for n in (2i64..=5000).filter(|&n| Discriminant::is_fundamental(n)) {
        let d = disc(n);
        let u = fundamental_unit(&d);
        let eps = u.eps.clone().unwrap();
        units_checked += 1;
        let (x, y) = (eps.x(), eps.y());
        let lhs = x * x - BigInt::from(n) * y * y;
        if eps.d() != &BigInt::from(1) || lhs != BigInt::from(4 * i64::from(u.eps_norm)) {
            bad_unit.push(n);
            continue;
        }
        let limit = y.to_u64().map_or(PELL_LIMIT, |y| y.min(PELL_LIMIT));
        match pell_brute_force(n, limit) {
            Some((bx, by, s)) => {
                if QuadNum::new(bx, by, 1, &d) != eps || s != u.eps_norm {
                    bad_unit.push(n);
                }
            }
            None if !is_proper_power(&eps, &d) => by_root_test += 1,
            None => bad_unit.push(n),
        }
    }
    let root_test_detects_powers = [5i64, 12, 13, 94 * 4, 4001].iter().all(|&n| {
        let d = disc(n);
        let eps = fundamental_unit(&d).eps.unwrap();
        !is_proper_power(&eps, &d)
            && is_proper_power(&eps.pow(2).unwrap(), &d)
            && is_proper_power(&eps.pow(3).unwrap(), &d)
    });
    outcome(
        root_test_detects_powers && bad_order.is_empty() && bad_unit.is_empty(),
        format!(
            "composition closure = reduced-form/cycle count on {count} |Δ| <= 2000 ({} violations {:?}); \
             CF unit = Pell brute force on {units_checked} real Δ <= 5000 ({} violations {:?}; \
             {by_root_test} with y > {PELL_LIMIT} certified by the root test)",
            bad_order.len(),
            bad_order,
            bad_unit.len(),
            bad_unit
        ),
    )
}

const VERIFY_SET: [i64; 20] =
    [-3, -4, -15, -20, -23, -84, -95, -420, -2379, -3299, -4027, 5, 8, 12, 40, 60, 136, 145, 229, 4009];

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    let mut kernel = 0usize;
    for (i, &n) in VERIFY_SET.iter().enumerate() {
        let report = verify(&disc(n), 500, 0x5eed + i as u64);
        let ck = report.properties.iter().find(|p| p.name == "constructive_kernel").unwrap();
        let checked: usize = ck.checked.parse().unwrap();
        kernel += checked;
        if !report.pass || checked == 0 {
            let failed: Vec<&str> = report.properties.iter().filter(|p| !p.pass).map(|p| p.name.as_str()).collect();
            bad.push(format!("{n}:{failed:?}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "i∘∂, μ∘i, ∂∘μ₁ vanish on 500 seeded samples at {} discriminants; constructive preimages for all {kernel} kernel elements; failures {:?}",
            VERIFY_SET.len(),
            bad
        ),
    )
}

/// `(a, b)_2` from primitive solutions of `ax² + by² ≡ z² (mod 2⁸)` after removing factors of 4.
fn hilbert_2_oracle(mut a: i64, mut b: i64) -> i8 {
    for x in [&mut a, &mut b] {
        while *x % 4 == 0 {
            *x /= 4;
        }
    }
    const M: i64 = 256;
    let mut even_sq = [false; 256];
    let mut odd_sq = [false; 256];
    for z in 0..M {
        let sq = (z * z % M) as usize;
        if z % 2 == 0 {
            even_sq[sq] = true;
        } else {
            odd_sq[sq] = true;
        }
    }
    let solvable = (0..128i64).any(|x| {
        (0..128i64).any(|y| {
            let v = (a * x * x + b * y * y).rem_euclid(M) as usize;
            if x % 2 == 1 || y % 2 == 1 {
                even_sq[v] || odd_sq[v]
            } else {
                odd_sq[v]
            }
        })
    });
    if solvable {
        1
    } else {
        -1
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad_product = 0;
    for _ in 0..10_000 {
        let mut r = || loop {
            let n: i64 = rng.random_range(-1_000_000..=1_000_000);
            let d: i64 = rng.random_range(1..=1_000);
            if n != 0 {
                return Rational::new(n.into(), d.into());
            }
        };
        let (a, b) = (r(), r());
        let prod: i8 = contributing_places(&a, &b).into_iter().map(|v| hilbert_symbol(&a, &b, v)).product();
        if prod != 1 {
            bad_product += 1;
        }
    }
    let mut bad_two = Vec::new();
    let range = (-50i64..=50).filter(|&x| x != 0);
    for a in range.clone() {
        for b in range.clone() {
            let (ra, rb) = (Rational::from_integer(a.into()), Rational::from_integer(b.into()));
            if hilbert_symbol(&ra, &rb, Place::Finite(2)) != hilbert_2_oracle(a, b) {
                bad_two.push((a, b));
            }
        }
    }
    let nontrivial = hilbert_2_oracle(-1, -1) == -1 && hilbert_2_oracle(2, 3) == -1 && hilbert_2_oracle(2, 7) == 1;
    outcome(
        nontrivial && bad_product == 0 && bad_two.is_empty(),
        format!(
            "product formula on 10000 random pairs ({bad_product} violations); (a,b)_2 = 2-adic oracle on all 0 < |a|,|b| <= 50 ({} violations {:?})",
            bad_two.len(),
            &bad_two[..bad_two.len().min(5)]
        ),
    )
}

fn criterion_8(reports: &[GenusReport]) -> Outcome {
    let real: Vec<&GenusReport> = reports.iter().filter(|r| r.delta > 0).collect();
    let bad: Vec<i64> = real
        .iter()
        .filter(|r| (!r.minus_one_norm_all) != has_prime_3_mod_4(r.delta))
        .map(|r| r.delta)
        .collect();
    outcome(
        bad.is_empty(),
        format!(
            "-1 not a global norm iff a prime 3 mod 4 divides Δ on {} real discriminants, {} violations {:?}",
            real.len(),
            bad.len(),
            &bad[..bad.len().min(5)]
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports = scan::run(&ScanConfig { min: -SCAN_BOUND, max: SCAN_BOUND, jobs: None }).expect("thread pool");
    println!("scanned {} fundamental discriminants with |Δ| <= {SCAN_BOUND} in {:.1?}", reports.len(), start.elapsed());

    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: [Criterion; 8] = [
        ("1", Box::new(|| criterion_1(&reports))),
        ("2", Box::new(|| criterion_2(&reports))),
        ("3", Box::new(|| criterion_3(&reports))),
        ("4", Box::new(|| criterion_4(&reports))),
        ("5", Box::new(criterion_5)),
        ("6", Box::new(criterion_6)),
        ("7", Box::new(criterion_7)),
        ("8", Box::new(|| criterion_8(&reports))),
    ];
    let mut all = true;
    for (id, run) in &criteria {
        let t = Instant::now();
        let o = run();
        all &= o.pass;
        println!("{} criterion {id}: {} [{:.1?}]", if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
