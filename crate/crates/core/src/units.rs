//! Units of the maximal order and the Tate group `Ĥ⁰(G, A*)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::quadfield::{Discriminant, QuadNum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    /// The fundamental unit `ε > 1`; `None` for imaginary fields.
    pub eps: Option<QuadNum>,
    /// Norm of `ε`, or `+1` when every unit has norm `+1` (imaginary fields).
    pub eps_norm: i8,
    pub torsion_order: u32,
    /// `|A*/N(A*)|` restricted to `ℤ*`, i.e. `|{±1}/N(A*)|`.
    pub h0_units_order: u32,
    /// Length of the continued-fraction period of `(b₀ + √Δ)/2`.
    pub period: usize,
}

impl UnitData {
    pub fn has_norm_minus_one(&self) -> bool {
        self.eps_norm == -1
    }
}

/// Fundamental unit from the continued fraction of the reduced number
/// `α = (b₀ + √Δ)/2`, where `b₀` is the largest integer below `√Δ` with
/// `b₀ ≡ Δ (mod 2)`. With period `n`, `ε = q_{n−1}·α + q_{n−2}` and `N(ε) = (−1)ⁿ`.
pub fn fundamental_unit(disc: &Discriminant) -> UnitData {
    let delta = disc.delta();
    if delta < 0 {
        let torsion_order = match delta {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        return UnitData { eps: None, eps_norm: 1, torsion_order, h0_units_order: 2, period: 0 };
    }
    let s = disc.isqrt();
    let b0 = if (s - delta).rem_euclid(2) == 0 { s } else { s - 1 };
    let (p0, q0) = (b0, 2i64);
    let (mut p, mut q) = (p0, q0);
    // q_{k−2}, q_{k−1}
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    let mut n = 0usize;
    loop {
        let a = (p + s).div_euclid(q);
        let q_next = &q_cur * a + &q_prev;
        q_prev = core::mem::replace(&mut q_cur, q_next);
        n += 1;
        let p_next = a * q - p;
        q = (delta - p_next * p_next) / q;
        p = p_next;
        if (p, q) == (p0, q0) {
            break;
        }
    }
    // ε = q_{n−1}(b₀ + √Δ)/2 + q_{n−2}
    let x = &q_cur * b0 + &q_prev * 2;
    let eps = QuadNum::new(x, q_cur, 1, disc);
    let eps_norm = if n.is_multiple_of(2) { 1 } else { -1 };
    debug_assert_eq!(eps.norm(), crate::quadfield::rat(eps_norm));
    UnitData {
        eps: Some(eps),
        eps_norm: eps_norm as i8,
        torsion_order: 2,
        h0_units_order: if eps_norm == -1 { 1 } else { 2 },
        period: n,
    }
}

/// `Ĥ⁰(G, A*) = ℤ*/N(A*)`: trivial, or of order 2 generated by the class of `−1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TateH0Units {
    pub order: u32,
    pub generator: Option<i8>,
}

pub fn tate_h0_units(disc: &Discriminant) -> TateH0Units {
    let u = fundamental_unit(disc);
    TateH0Units {
        order: u.h0_units_order,
        generator: (u.h0_units_order == 2).then_some(-1),
    }
}
